//! Massey products in `H^*(G, F_p)` for finite `G`: defining systems of
//! inhomogeneous cochains, and the equivalent search for homomorphisms
//! `ρ̄ : G → Ū_{n+1}(F_p)` with superdiagonal `-α_i` and their lifts to
//! `U_{n+1}(F_p)`.
//!
//! Cochains are dense vectors indexed by group elements (`c[g]`, or
//! `c[g * |G| + h]` in degree 2).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fingrp::{extend_homomorphism, FinGroup};
use crate::linalg;
use crate::residue::{is_prime, RingSpec};
use crate::unimat::{bar_project, BarUniMat, Matrix, UniMat};

/// Largest group for which degree-2 cochain systems are built.
pub const COCHAIN_GROUP_CAP: usize = 128;

/// A homomorphism `G → F_p`, stored on every element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    p: u64,
    values: Vec<u64>,
}

impl Character {
    /// Extends values on the generators of `g`; fails if they do not define a
    /// homomorphism.
    pub fn from_generator_values(g: &FinGroup, p: u64, gen_values: &[i64]) -> Result<Character> {
        if !is_prime(p) {
            return Err(Error::BadParams(format!("{p} is not prime")));
        }
        if gen_values.len() != g.generators().len() {
            return Err(Error::BadParams(format!(
                "{} generator values given for {} generators",
                gen_values.len(),
                g.generators().len()
            )));
        }
        let imgs: Vec<u64> = gen_values.iter().map(|v| v.rem_euclid(p as i64) as u64).collect();
        let values = extend_homomorphism(g, &imgs, 0u64, |a, b| (a + b) % p)
            .ok_or_else(|| Error::BadParams(format!("{gen_values:?} does not define a character mod {p}")))?;
        Ok(Character { p, values })
    }

    pub fn zero(g: &FinGroup, p: u64) -> Character {
        Character { p, values: vec![0; g.order()] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, x: u32) -> u64 {
        self.values[x as usize]
    }

    pub fn on_generators(&self, g: &FinGroup) -> Vec<u64> {
        g.generators().iter().map(|&s| self.value(s)).collect()
    }

    pub fn scale(&self, c: i64) -> Character {
        let c = c.rem_euclid(self.p as i64) as u64;
        Character { p: self.p, values: self.values.iter().map(|v| v * c % self.p).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// Every character `G → F_p`, in lexicographic order of generator values.
pub fn all_characters(g: &FinGroup, p: u64) -> Result<Vec<Character>> {
    let k = g.generators().len();
    let total = (p as u128).pow(k as u32);
    if total > 1 << 20 {
        return Err(Error::TooLarge(format!("{total} candidate characters")));
    }
    let mut out = Vec::new();
    for code in 0..total as u64 {
        let vals: Vec<i64> = (0..k).map(|i| (code / p.pow((k - 1 - i) as u32) % p) as i64).collect();
        if let Ok(c) = Character::from_generator_values(g, p, &vals) {
            out.push(c);
        }
    }
    Ok(out)
}

fn check_cochain_size(g: &FinGroup) -> Result<usize> {
    let n = g.order();
    if n > COCHAIN_GROUP_CAP {
        return Err(Error::TooLarge(format!("cochains on a group of order {n}")));
    }
    Ok(n)
}

/// `δb(g, h) = b(g) + b(h) - b(gh)`.
pub fn coboundary_1(g: &FinGroup, b: &[u64], p: u64) -> Vec<u64> {
    let n = g.order();
    let mut out = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x as u32, y as u32) as usize;
            out[x * n + y] = (b[x] + b[y] + p - b[xy] % p) % p;
        }
    }
    out
}

/// `(a ∪ b)(g, h) = a(g) b(h)`.
pub fn cup(g: &FinGroup, a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = g.order();
    let mut out = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            out[x * n + y] = a[x] * b[y] % p;
        }
    }
    out
}

/// `δc(g, h, k) = c(h, k) - c(gh, k) + c(g, hk) - c(g, h)`, all zero?
pub fn is_2_cocycle(g: &FinGroup, c: &[u64], p: u64) -> bool {
    let n = g.order();
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                let xy = g.mul(x as u32, y as u32) as usize;
                let yz = g.mul(y as u32, z as u32) as usize;
                (c[y * n + z] + p - c[xy * n + z] + c[x * n + yz] + p - c[x * n + y]).is_multiple_of(p)
            })
        })
    })
}

/// The matrix of `δ` on 1-cochains: `|G|²` rows, `|G|` columns.
fn delta_matrix(g: &FinGroup, p: u64) -> Vec<Vec<u64>> {
    let n = g.order();
    let mut rows = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut r = vec![0u64; n];
            r[x] = (r[x] + 1) % p;
            r[y] = (r[y] + 1) % p;
            let xy = g.mul(x as u32, y as u32) as usize;
            r[xy] = (r[xy] + p - 1) % p;
            rows.push(r);
        }
    }
    rows
}

/// Some `b` with `δb = c`, if `c` is a coboundary.
pub fn is_2_coboundary(g: &FinGroup, c: &[u64], p: u64) -> Result<Option<Vec<u64>>> {
    check_cochain_size(g)?;
    Ok(linalg::solve(&delta_matrix(g, p), c, p))
}

/// Cochains `a_{ij}`, `1 ≤ i < j ≤ n+1`, `(i, j) ≠ (1, n+1)`, 1-based keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    pub n: usize,
    pub p: u64,
    pub entries: BTreeMap<(usize, usize), Vec<u64>>,
}

impl DefiningSystem {
    pub fn get(&self, i: usize, j: usize) -> &[u64] {
        &self.entries[&(i, j)]
    }

    /// `Σ_{i<l<j} a_{il} ∪ a_{lj}`.
    fn cup_sum(&self, g: &FinGroup, i: usize, j: usize) -> Vec<u64> {
        let n = g.order();
        let mut acc = vec![0u64; n * n];
        for l in i + 1..j {
            let c = cup(g, self.get(i, l), self.get(l, j), self.p);
            for (a, b) in acc.iter_mut().zip(c) {
                *a = (*a + b) % self.p;
            }
        }
        acc
    }

    /// The matrices `ρ̄_M(g)` with `(ρ̄_M)_{ij} = -a_{ij}`, one per element.
    pub fn bar_matrices(&self, g: &FinGroup) -> Vec<BarUniMat> {
        let spec = RingSpec::prime_field(self.p).expect("prime");
        let size = self.n + 1;
        (0..g.order())
            .map(|x| {
                let m = Matrix::from_fn(size, spec, |r, c| {
                    if r == c {
                        spec.one()
                    } else if r < c && !(r == 0 && c == size - 1) {
                        spec.from_i64(-(self.get(r + 1, c + 1)[x] as i64))
                    } else {
                        spec.zero()
                    }
                });
                bar_project(&UniMat::try_from(m).expect("unitriangular"))
            })
            .collect()
    }
}

/// Both defining-system conditions, checked pointwise.
pub fn validate_defining_system(g: &FinGroup, m: &DefiningSystem, alphas: &[Character]) -> bool {
    let n = m.n;
    if alphas.len() != n || alphas.iter().any(|a| a.p != m.p) {
        return false;
    }
    for i in 1..=n + 1 {
        for j in i + 1..=n + 1 {
            if (i, j) == (1, n + 1) {
                continue;
            }
            let Some(a) = m.entries.get(&(i, j)) else { return false };
            if a.len() != g.order() {
                return false;
            }
            if j == i + 1 {
                if a != alphas[i - 1].values() {
                    return false;
                }
            } else if coboundary_1(g, a, m.p) != m.cup_sum(g, i, j) {
                return false;
            }
        }
    }
    true
}

/// `Σ_{k=2}^{n} a_{1k} ∪ a_{k,n+1}` and whether it is a coboundary.
pub fn massey_value(g: &FinGroup, m: &DefiningSystem) -> Result<(Vec<u64>, bool)> {
    let v = m.cup_sum(g, 1, m.n + 1);
    let cob = is_2_coboundary(g, &v, m.p)?.is_some();
    Ok((v, cob))
}

/// Every defining system, by solving `δa_{ij} = Σ a_{il} ∪ a_{lj}` level by
/// level; each solution set is a particular solution plus `Z¹(G, F_p)`.
pub fn enumerate_defining_systems(g: &FinGroup, alphas: &[Character], limits: &Limits) -> Result<Vec<DefiningSystem>> {
    check_cochain_size(g)?;
    let n = alphas.len();
    let p = common_prime(alphas)?;
    let ord = g.order();
    let delta = delta_matrix(g, p);
    let cocycles = linalg::nullspace(&delta, ord, p);
    let mut base = DefiningSystem { n, p, entries: BTreeMap::new() };
    for (i, a) in alphas.iter().enumerate() {
        if a.values.len() != ord {
            return Err(Error::BadParams("character lives on a different group".into()));
        }
        base.entries.insert((i + 1, i + 2), a.values.clone());
    }
    let positions: Vec<(usize, usize)> = (2..n).flat_map(|l| (1..=n + 1 - l).map(move |i| (i, i + l))).collect();
    let mut out = Vec::new();
    let mut stack = vec![(base, 0usize)];
    while let Some((sys, k)) = stack.pop() {
        if k == positions.len() {
            out.push(sys);
            if out.len() as u64 > limits.hom_nodes {
                return Err(Error::TooLarge("defining-system enumeration".into()));
            }
            continue;
        }
        let (i, j) = positions[k];
        let rhs = sys.cup_sum(g, i, j);
        let Some(part) = linalg::solve(&delta, &rhs, p) else { continue };
        let h = cocycles.len();
        let combos = (p as u128).pow(h as u32);
        if combos > limits.hom_nodes as u128 {
            return Err(Error::TooLarge("defining-system enumeration".into()));
        }
        for code in (0..combos as u64).rev() {
            let mut a = part.clone();
            let mut c = code;
            for z in &cocycles {
                let coef = c % p;
                c /= p;
                for (x, zz) in a.iter_mut().zip(z) {
                    *x = (*x + coef * zz) % p;
                }
            }
            let mut next = sys.clone();
            next.entries.insert((i, j), a);
            stack.push((next, k + 1));
        }
    }
    Ok(out)
}

fn common_prime(alphas: &[Character]) -> Result<u64> {
    if alphas.len() < 2 {
        return Err(Error::BadParams("Massey products need n >= 2 characters".into()));
    }
    let p = alphas[0].p;
    if alphas.iter().any(|a| a.p != p) {
        return Err(Error::BadParams("characters over different primes".into()));
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MasseyStatus {
    Undefined,
    DefinedNotVanishing,
    Vanishing,
}

impl fmt::Display for MasseyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MasseyStatus::Undefined => "Undefined",
            MasseyStatus::DefinedNotVanishing => "DefinedNotVanishing",
            MasseyStatus::Vanishing => "Vanishing",
        })
    }
}

impl FromStr for MasseyStatus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Undefined" => Ok(MasseyStatus::Undefined),
            "DefinedNotVanishing" => Ok(MasseyStatus::DefinedNotVanishing),
            "Vanishing" => Ok(MasseyStatus::Vanishing),
            _ => Err(Error::Parse(format!("unknown verdict `{s}`"))),
        }
    }
}

/// Verdict of the cochain-side enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainVerdict {
    pub status: MasseyStatus,
    pub defining_systems: u64,
    pub vanishing_systems: u64,
}

pub fn cochain_verdict(g: &FinGroup, alphas: &[Character], limits: &Limits) -> Result<CochainVerdict> {
    let systems = enumerate_defining_systems(g, alphas, limits)?;
    let mut vanishing = 0;
    for m in &systems {
        if massey_value(g, m)?.1 {
            vanishing += 1;
        }
    }
    let status = match (systems.len(), vanishing) {
        (0, _) => MasseyStatus::Undefined,
        (_, 0) => MasseyStatus::DefinedNotVanishing,
        _ => MasseyStatus::Vanishing,
    };
    Ok(CochainVerdict { status, defining_systems: systems.len() as u64, vanishing_systems: vanishing })
}

/// Outcome of the representation-side search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyVerdict {
    pub status: MasseyStatus,
    pub n: usize,
    pub p: u64,
    /// Generator images of the reported `ρ̄`: the row-major lexicographically
    /// least liftable one when the product vanishes, else the least overall.
    pub witness: Option<Vec<BarUniMat>>,
    /// Generator images of a lift of `witness` to `U_{n+1}(F_p)`.
    pub lift: Option<Vec<UniMat>>,
    /// Number of homomorphisms `ρ̄` with the prescribed superdiagonal.
    pub bar_count: u64,
    /// How many of them lift.
    pub liftable_count: u64,
}

/// Spanning tree of the Cayley graph and the exponent-sum bookkeeping shared
/// by every level of the search.
struct Cayley {
    order: usize,
    k: usize,
    p: u64,
    /// BFS order from the identity; `tree[x] = (parent, generator slot)`.
    bfs: Vec<u32>,
    tree: Vec<(u32, usize)>,
    /// Exponent sums of the tree path to each element, mod p.
    esum: Vec<Vec<u64>>,
    /// Non-tree edges `x --s--> y`.
    extra: Vec<(u32, usize, u32)>,
    /// One row per non-tree edge: `e(x) + unit(s) - e(y)`.
    rows: Vec<Vec<u64>>,
    /// Basis of `Hom(G, F_p)` in generator coordinates.
    h1: Vec<Vec<u64>>,
}

impl Cayley {
    fn new(g: &FinGroup, p: u64) -> Cayley {
        let order = g.order();
        let gens = g.generators().to_vec();
        let k = gens.len();
        let mut tree = vec![(u32::MAX, usize::MAX); order];
        let mut esum = vec![Vec::new(); order];
        let mut seen = vec![false; order];
        seen[0] = true;
        esum[0] = vec![0; k];
        let mut bfs = vec![0u32];
        let mut extra = Vec::new();
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for (si, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if seen[y as usize] {
                    extra.push((x, si, y));
                } else {
                    seen[y as usize] = true;
                    tree[y as usize] = (x, si);
                    let mut e = esum[x as usize].clone();
                    e[si] = (e[si] + 1) % p;
                    esum[y as usize] = e;
                    bfs.push(y);
                }
            }
        }
        let rows: Vec<Vec<u64>> = extra
            .iter()
            .map(|&(x, si, y)| {
                (0..k)
                    .map(|t| {
                        let unit = u64::from(t == si);
                        (esum[x as usize][t] + unit + p - esum[y as usize][t]) % p
                    })
                    .collect()
            })
            .collect();
        let h1 = linalg::nullspace(&rows, k, p);
        Cayley { order, k, p, bfs, tree, esum, extra, rows, h1 }
    }
}

/// Truncated representation data during the search: dense `size × size`
/// matrices for generators and for every element.
#[derive(Clone)]
struct State {
    size: usize,
    gens: Vec<u64>,
    elems: Vec<u64>,
}

impl State {
    fn gen_at(&self, s: usize, r: usize, c: usize) -> u64 {
        self.gens[(s * self.size + r) * self.size + c]
    }
    fn elem_at(&self, x: usize, r: usize, c: usize) -> u64 {
        self.elems[(x * self.size + r) * self.size + c]
    }

    /// Row-major key over generators, corner excluded.
    fn key(&self, k: usize) -> Vec<u64> {
        let n = self.size;
        let mut key = Vec::with_capacity(k * n * n / 2);
        for s in 0..k {
            for r in 0..n {
                for c in r + 1..n {
                    if !(r == 0 && c == n - 1) {
                        key.push(self.gen_at(s, r, c));
                    }
                }
            }
        }
        key
    }
}

#[derive(Clone, Default)]
struct Summary {
    bars: u64,
    liftable: u64,
    least: Option<Vec<u64>>,
    least_liftable: Option<(Vec<u64>, Vec<u64>)>,
}

impl Summary {
    fn merge(mut self, other: Summary) -> Summary {
        self.bars += other.bars;
        self.liftable += other.liftable;
        self.least = match (self.least, other.least) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.least_liftable = match (self.least_liftable, other.least_liftable) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

struct Search<'a> {
    cay: &'a Cayley,
    budget: u64,
    nodes: AtomicU64,
}

impl Search<'_> {
    /// Affine data for the level-`lvl` entry `(i, i+lvl)` of every element:
    /// constants along the tree, and the right-hand side for each non-tree edge.
    fn level_system(&self, st: &State, lvl: usize, i: usize) -> (Vec<u64>, Vec<u64>) {
        let cay = self.cay;
        let p = cay.p;
        let j = i + lvl;
        let mid = |x: usize, s: usize| -> u64 {
            (i + 1..j).fold(0u64, |acc, t| (acc + st.elem_at(x, i, t) * st.gen_at(s, t, j)) % p)
        };
        let mut konst = vec![0u64; cay.order];
        for &y in &cay.bfs[1..] {
            let (x, s) = cay.tree[y as usize];
            konst[y as usize] = (konst[x as usize] + mid(x as usize, s)) % p;
        }
        let rhs = cay
            .extra
            .iter()
            .map(|&(x, s, y)| (konst[y as usize] + 2 * p - konst[x as usize] - mid(x as usize, s)) % p)
            .collect();
        (konst, rhs)
    }

    fn tick(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::TooLarge(format!("Dwyer search exceeded {} nodes", self.budget)));
        }
        Ok(())
    }

    /// Corner entries making the completed `ρ̄` a homomorphism to `U_{n+1}`.
    fn corner(&self, st: &State) -> Option<Vec<u64>> {
        let lvl = st.size - 1;
        let (_, rhs) = self.level_system(st, lvl, 0);
        linalg::solve(&self.cay.rows, &rhs, self.cay.p)
    }

    /// `st` is complete through level `lvl - 1`.
    fn explore(&self, st: State, lvl: usize) -> Result<Summary> {
        self.tick()?;
        let cay = self.cay;
        let p = cay.p;
        let size = st.size;
        if lvl == size - 1 {
            let key = st.key(cay.k);
            let lift = self.corner(&st);
            return Ok(Summary {
                bars: 1,
                liftable: u64::from(lift.is_some()),
                least: Some(key.clone()),
                least_liftable: lift.map(|c| (key, c)),
            });
        }
        let npos = size - lvl;
        let mut parts = Vec::with_capacity(npos);
        for i in 0..npos {
            let (konst, rhs) = self.level_system(&st, lvl, i);
            let Some(v) = linalg::solve(&cay.rows, &rhs, p) else {
                return Ok(Summary::default());
            };
            parts.push((konst, v));
        }
        let h = cay.h1.len();
        let per_pos = (p as u128).pow(h as u32);
        let children = per_pos
            .checked_pow(npos as u32)
            .filter(|&c| c <= self.budget as u128)
            .ok_or_else(|| Error::TooLarge(format!("level {lvl} has too many branches")))? as u64;
        let child = |code: u64| -> Result<Summary> {
            let mut next = st.clone();
            let mut code = code;
            for (i, (konst, part)) in parts.iter().enumerate() {
                let mut v = part.clone();
                for b in &cay.h1 {
                    let coef = code % p;
                    code /= p;
                    for (x, bb) in v.iter_mut().zip(b) {
                        *x = (*x + coef * bb) % p;
                    }
                }
                let j = i + lvl;
                for (s, &vs) in v.iter().enumerate() {
                    next.gens[(s * size + i) * size + j] = vs;
                }
                for x in 0..cay.order {
                    let dot = cay.esum[x].iter().zip(&v).fold(0u64, |a, (e, vv)| (a + e * vv) % p);
                    next.elems[(x * size + i) * size + j] = (konst[x] + dot) % p;
                }
            }
            self.explore(next, lvl + 1)
        };
        (0..children)
            .into_par_iter()
            .map(child)
            .try_reduce(Summary::default, |a, b| Ok(a.merge(b)))
    }
}

fn to_unimat(size: usize, p: u64, gens: &[u64], s: usize, corner: u64) -> UniMat {
    let spec = RingSpec::prime_field(p).expect("prime");
    let m = Matrix::from_fn(size, spec, |r, c| {
        if r == 0 && c == size - 1 {
            spec.from_i64(corner as i64)
        } else {
            spec.from_i64(gens[(s * size + r) * size + c] as i64)
        }
    });
    UniMat::try_from(m).expect("unitriangular")
}

fn key_to_gens(key: &[u64], k: usize, size: usize) -> Vec<u64> {
    let mut gens = vec![0u64; k * size * size];
    let mut it = key.iter();
    for s in 0..k {
        for r in 0..size {
            gens[(s * size + r) * size + r] = 1;
            for c in r + 1..size {
                if !(r == 0 && c == size - 1) {
                    gens[(s * size + r) * size + c] = *it.next().unwrap();
                }
            }
        }
    }
    gens
}

/// Decides definedness and vanishing of `⟨α_1, …, α_n⟩` by searching for
/// `ρ̄ : G → Ū_{n+1}(F_p)` with `ρ̄_{i,i+1} = -α_i` and for lifts of it.
///
/// Entries are fixed one superdiagonal at a time. Given the lower
/// superdiagonals, the next one is affine in the generator values, so each
/// level is a linear system over the Cayley graph whose solution set is a
/// coset of `Hom(G, F_p)` per entry. All `ρ̄` are visited.
pub fn dwyer_search(g: &FinGroup, alphas: &[Character], limits: &Limits) -> Result<MasseyVerdict> {
    let p = common_prime(alphas)?;
    let n = alphas.len();
    if alphas.iter().any(|a| a.values.len() != g.order()) {
        return Err(Error::BadParams("character lives on a different group".into()));
    }
    let cay = Cayley::new(g, p);
    let size = n + 1;
    let k = cay.k;
    let mut st = State { size, gens: vec![0; k * size * size], elems: vec![0; cay.order * size * size] };
    for s in 0..k {
        for r in 0..size {
            st.gens[(s * size + r) * size + r] = 1;
        }
    }
    for x in 0..cay.order {
        for r in 0..size {
            st.elems[(x * size + r) * size + r] = 1;
        }
    }
    let gens = g.generators();
    for (i, a) in alphas.iter().enumerate() {
        for (s, &gs) in gens.iter().enumerate() {
            st.gens[(s * size + i) * size + i + 1] = (p - a.value(gs)) % p;
        }
        for x in 0..cay.order {
            st.elems[(x * size + i) * size + i + 1] = (p - a.value(x as u32)) % p;
        }
    }
    let search = Search { cay: &cay, budget: limits.hom_nodes, nodes: AtomicU64::new(0) };
    let sum = search.explore(st, 2)?;
    let status = if sum.bars == 0 {
        MasseyStatus::Undefined
    } else if sum.liftable == 0 {
        MasseyStatus::DefinedNotVanishing
    } else {
        MasseyStatus::Vanishing
    };
    let (witness, lift) = match (&sum.least_liftable, &sum.least) {
        (Some((key, corner)), _) => {
            let gm = key_to_gens(key, k, size);
            let lifted: Vec<UniMat> = (0..k).map(|s| to_unimat(size, p, &gm, s, corner[s])).collect();
            (Some(lifted.iter().map(bar_project).collect()), Some(lifted))
        }
        (None, Some(key)) => {
            let gm = key_to_gens(key, k, size);
            (Some((0..k).map(|s| bar_project(&to_unimat(size, p, &gm, s, 0))).collect()), None)
        }
        (None, None) => (None, None),
    };
    Ok(MasseyVerdict { status, n, p, witness, lift, bar_count: sum.bars, liftable_count: sum.liftable })
}

/// Whether generator images extend to a homomorphism of `g`.
pub fn verify_bar_witness(g: &FinGroup, images: &[BarUniMat]) -> bool {
    match images.first() {
        None => g.order() == 1,
        Some(first) => {
            extend_homomorphism(g, images, BarUniMat::identity(first.size(), first.spec()), |a, b| a.mul(b).unwrap())
                .is_some()
        }
    }
}

pub fn verify_lift_witness(g: &FinGroup, images: &[UniMat]) -> bool {
    match images.first() {
        None => g.order() == 1,
        Some(first) => {
            extend_homomorphism(g, images, UniMat::identity(first.size(), first.spec()), |a, b| a.mul(b).unwrap())
                .is_some()
        }
    }
}

/// Agreement between the representation search and the cochain enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub dwyer: MasseyVerdict,
    pub cochain: CochainVerdict,
    /// Every defining system `M` gives a homomorphism `ρ̄_M`, and the search
    /// witness (if any) comes from a defining system.
    pub correspondence_ok: bool,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.dwyer.status == self.cochain.status
            && self.dwyer.bar_count == self.cochain.defining_systems
            && self.dwyer.liftable_count == self.cochain.vanishing_systems
            && self.correspondence_ok
    }
}

pub fn cross_check(g: &FinGroup, alphas: &[Character], limits: &Limits) -> Result<CrossCheck> {
    let dwyer = dwyer_search(g, alphas, limits)?;
    let systems = enumerate_defining_systems(g, alphas, limits)?;
    let mut vanishing = 0;
    let mut correspondence_ok = true;
    let ord = g.order() as u32;
    for m in &systems {
        if massey_value(g, m)?.1 {
            vanishing += 1;
        }
        let bars = m.bar_matrices(g);
        correspondence_ok &= (0..ord)
            .all(|x| (0..ord).all(|y| bars[g.mul(x, y) as usize] == bars[x as usize].mul(&bars[y as usize]).unwrap()));
    }
    if let Some(w) = &dwyer.witness {
        correspondence_ok &= verify_bar_witness(g, w);
        let found = systems.iter().any(|m| {
            let bars = m.bar_matrices(g);
            g.generators().iter().zip(w).all(|(&s, b)| &bars[s as usize] == b)
        });
        correspondence_ok &= found;
    }
    if let Some(l) = &dwyer.lift {
        correspondence_ok &= verify_lift_witness(g, l);
    }
    let status = match (systems.len(), vanishing) {
        (0, _) => MasseyStatus::Undefined,
        (_, 0) => MasseyStatus::DefinedNotVanishing,
        _ => MasseyStatus::Vanishing,
    };
    let cochain = CochainVerdict { status, defining_systems: systems.len() as u64, vanishing_systems: vanishing };
    Ok(CrossCheck { dwyer, cochain, correspondence_ok })
}
