//! Dense linear algebra over `F_p` on `u64` residues.

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        e >>= 1;
    }
    acc
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mulm(*x, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let sub = mulm(f, rows[r][j], p);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p).len()
}

/// Basis of `{x : A x = 0}` for `A` with `ncols` columns.
pub fn nullspace(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][f] % p) % p;
            }
            v
        })
        .collect()
}

/// One solution of `A x = b`, if any.
pub fn solve(rows: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u64>> = rows
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut v: Vec<u64> = r.iter().map(|x| x % p).collect();
            v.push(bi % p);
            v
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![0; ncols]);
    }
    let pivots = rref(&mut aug, p);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![0u64; ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols];
    }
    Some(x)
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with, p) == rank(rows, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_system() {
        let a = vec![vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(rank(&a, 2), 2);
        let ns = nullspace(&a, 3, 2);
        assert_eq!(ns, vec![vec![1, 1, 1]]);
        let x = solve(&a, &[1, 0], 2).unwrap();
        assert_eq!((x[0] + x[1]) % 2, 1);
        assert_eq!((x[1] + x[2]) % 2, 0);
        assert!(solve(&[vec![0, 0]], &[1], 3).is_none());
        assert!(in_span(&a, &[1, 0, 1], 2));
        assert!(!in_span(&a, &[1, 0, 0], 2));
    }

    #[test]
    fn nullspace_vectors_are_solutions() {
        let p = 5;
        let a = vec![vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]];
        for v in nullspace(&a, 4, p) {
            for r in &a {
                let s: u64 = r.iter().zip(&v).map(|(x, y)| x * y).sum();
                assert_eq!(s % p, 0);
            }
        }
        assert_eq!(rank(&a, p) + nullspace(&a, 4, p).len(), 4);
    }
}
