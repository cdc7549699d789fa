//! Groups `G = S/R` on `N` generators with relators
//! `r_ij = [x1,x2][x_i,x_j]⁻¹` (`i < j`, `(i,j) ≠ (1,2)`), for which the
//! commutator `[x1,x2]` survives modulo the third Zassenhaus term yet dies in
//! every homomorphism to a small target group.

use std::fmt;
use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fingrp::{count_homs, enumerate_homs, FinGroup, HomSearch, Presentation};
use crate::freewords::Word;
use crate::linalg;
use crate::ncseries::{magnus, MultiIndex};
use crate::residue::{is_prime, RingSpec};

/// A named target group.
#[derive(Clone, Debug)]
pub struct Target {
    pub name: String,
    pub group: FinGroup,
}

#[derive(Clone, Debug)]
pub struct AppendixInstance {
    pub p: u64,
    pub n_gens: usize,
    pub targets: Vec<Target>,
    pub presentation: Presentation,
}

pub fn commutator_12(rank: usize) -> Word {
    Word::commutator(&Word::generator(rank, 1).unwrap(), &Word::generator(rank, 2).unwrap()).unwrap()
}

fn gen_commutator(rank: usize, i: usize, j: usize) -> Word {
    Word::commutator(&Word::generator(rank, i as u16).unwrap(), &Word::generator(rank, j as u16).unwrap()).unwrap()
}

/// `r_ij` for `1 ≤ i < j ≤ N`, `(i, j) ≠ (1, 2)`, in lexicographic order.
pub fn relators(n_gens: usize) -> Vec<((usize, usize), Word)> {
    let c12 = commutator_12(n_gens);
    let mut out = Vec::new();
    for i in 1..=n_gens {
        for j in i + 1..=n_gens {
            if (i, j) != (1, 2) {
                let r = c12.mul(&gen_commutator(n_gens, i, j).inverse()).unwrap();
                out.push(((i, j), r));
            }
        }
    }
    out
}

pub fn build_instance(p: u64, n_gens: usize, targets: Vec<Target>) -> Result<AppendixInstance> {
    if !is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    if n_gens < 2 {
        return Err(Error::BadParams("the construction needs N >= 2 generators".into()));
    }
    if n_gens > u16::MAX as usize {
        return Err(Error::BadParams(format!("N = {n_gens} is too large")));
    }
    let presentation = Presentation::new(n_gens, relators(n_gens).into_iter().map(|(_, r)| r).collect())?;
    Ok(AppendixInstance { p, n_gens, targets, presentation })
}

/// Degree-2 Magnus coefficients over `F_p`, indexed by `(a, b)` as
/// `(a-1) * N + (b-1)`.
pub fn degree2_vector(w: &Word, n_gens: usize, p: u64) -> Result<Vec<u64>> {
    let spec = RingSpec::prime_field(p)?;
    let s = magnus(w, n_gens, spec, 2)?;
    let mut v = vec![0u64; n_gens * n_gens];
    for a in 1..=n_gens {
        for b in 1..=n_gens {
            let c = s.coeff(&MultiIndex::new(vec![a as u16, b as u16]));
            v[(a - 1) * n_gens + (b - 1)] = c.residue().expect("prime field");
        }
    }
    Ok(v)
}

/// `φ(v) = Σ_{a<b} v_(a,b)`, equal to 1 on every `[x_a, x_b]`.
pub fn phi(v: &[u64], n_gens: usize, p: u64) -> u64 {
    let mut acc = 0;
    for a in 0..n_gens {
        for b in a + 1..n_gens {
            acc = (acc + v[a * n_gens + b]) % p;
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree2Report {
    /// `[x1,x2]` is outside the span of the relator vectors.
    pub by_rank: bool,
    /// `φ` vanishes on every relator and not on `[x1,x2]`.
    pub by_functional: bool,
    pub relator_rank: usize,
}

impl Degree2Report {
    pub fn not_in_g3(&self) -> bool {
        self.by_rank && self.by_functional
    }
}

/// Whether `[x̄1, x̄2] ∉ G_(3)`, decided on `S_(2)/S_(3)` by linear algebra
/// and independently by the functional `φ`.
pub fn not_in_g3(inst: &AppendixInstance) -> Result<Degree2Report> {
    let (n, p) = (inst.n_gens, inst.p);
    let target = degree2_vector(&commutator_12(n), n, p)?;
    let rel: Vec<Vec<u64>> = inst
        .presentation
        .relators
        .iter()
        .map(|r| degree2_vector(r, n, p))
        .collect::<Result<_>>()?;
    let by_rank = !linalg::in_span(&rel, &target, p);
    let by_functional = phi(&target, n, p) != 0 && rel.iter().all(|v| phi(v, n, p) == 0);
    Ok(Degree2Report { by_rank, by_functional, relator_rank: linalg::rank(&rel, p) })
}

/// Rank of the `C(N,2)` degree-2 vectors of `[x_i, x_j]`, `i < j`.
pub fn commutator_rank(n_gens: usize, p: u64) -> Result<usize> {
    let mut rows = Vec::new();
    for i in 1..=n_gens {
        for j in i + 1..=n_gens {
            rows.push(degree2_vector(&gen_commutator(n_gens, i, j), n_gens, p)?);
        }
    }
    Ok(linalg::rank(&rows, p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetKernelReport {
    pub target: String,
    pub target_order: usize,
    /// Homomorphisms with `[h1, h2] ≠ 1`; `[x̄1,x̄2] ∈ G_L` needs none.
    pub separating: Vec<Vec<u32>>,
    /// Total number of homomorphisms, when it fits the budget.
    pub total_homs: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelFiltrationReport {
    pub per_target: Vec<TargetKernelReport>,
}

impl KernelFiltrationReport {
    pub fn in_kernel_filtration(&self) -> bool {
        self.per_target.iter().all(|t| t.separating.is_empty())
    }
}

/// Whether `[x̄1, x̄2]` lies in the kernel of every homomorphism to every target.
pub fn in_kernel_filtration(inst: &AppendixInstance, limits: &Limits) -> Result<KernelFiltrationReport> {
    let mut per_target = Vec::new();
    for t in &inst.targets {
        let filter: crate::fingrp::PrefixFilter = Arc::new(|h: &FinGroup, img: &[u32]| h.commutator(img[0], img[1]) != 0);
        let opts = HomSearch { node_budget: limits.hom_nodes, prefix_filter: Some((2, filter)) };
        let separating = enumerate_homs(&inst.presentation, &t.group, &opts)?;
        let all = HomSearch { node_budget: limits.hom_nodes, prefix_filter: None };
        let total_homs = match count_homs(&inst.presentation, &t.group, &all) {
            Ok(c) => Some(c),
            Err(Error::TooLarge(_)) => None,
            Err(e) => return Err(e),
        };
        per_target.push(TargetKernelReport {
            target: t.name.clone(),
            target_order: t.group.order(),
            separating,
            total_homs,
        });
    }
    Ok(KernelFiltrationReport { per_target })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelVerdict {
    /// `[x̄1, x̄2] ∈ G_L \ G_(3)`, so `G_L ⊄ G_(n)`.
    Violated,
    NotViolated,
    /// `N ≤ |H|` for some target, so the pigeonhole argument does not apply.
    Inconclusive,
}

impl fmt::Display for KernelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelVerdict::Violated => "Violated",
            KernelVerdict::NotViolated => "NotViolated",
            KernelVerdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport {
    pub n: usize,
    pub verdict: KernelVerdict,
    pub degree2: Option<Degree2Report>,
    pub kernel: Option<KernelFiltrationReport>,
}

pub fn violates_kernel_property(inst: &AppendixInstance, n: usize, limits: &Limits) -> Result<ViolationReport> {
    if n < 3 {
        return Err(Error::BadParams("the kernel property is tested at levels n >= 3".into()));
    }
    if inst.targets.iter().any(|t| inst.n_gens <= t.group.order()) {
        return Ok(ViolationReport { n, verdict: KernelVerdict::Inconclusive, degree2: None, kernel: None });
    }
    let d2 = not_in_g3(inst)?;
    let k = in_kernel_filtration(inst, limits)?;
    let verdict = if d2.not_in_g3() && k.in_kernel_filtration() {
        KernelVerdict::Violated
    } else {
        KernelVerdict::NotViolated
    };
    Ok(ViolationReport { n, verdict, degree2: Some(d2), kernel: Some(k) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::famgroups::Family;
    use crate::fingrp::unitriangular_group;

    fn u3f2() -> Target {
        let g = unitriangular_group(3, RingSpec::prime_field(2).unwrap(), 1000).unwrap().group;
        Target { name: "u3f2".into(), group: g }
    }

    #[test]
    fn relator_counts_and_shape() {
        let inst = build_instance(2, 9, vec![u3f2()]).unwrap();
        assert_eq!(inst.presentation.relators.len(), 35);
        assert_eq!(build_instance(2, 3, vec![]).unwrap().presentation.relators.len(), 2);
        let (ij, r13) = &relators(3)[0];
        assert_eq!(*ij, (1, 3));
        assert_eq!(r13.length(), 8);
        let expect = Word::parse_with_rank("[x1,x2]*[x1,x3]^-1", 3).unwrap();
        assert_eq!(r13, &expect);
        assert!(build_instance(2, 1, vec![]).is_err());
    }

    #[test]
    fn degree2_part_a() {
        for (p, n) in [(2, 9), (3, 4), (5, 3)] {
            let inst = build_instance(p, n, vec![]).unwrap();
            let r = not_in_g3(&inst).unwrap();
            assert!(r.by_rank && r.by_functional, "p={p} N={n}");
            assert_eq!(r.relator_rank, n * (n - 1) / 2 - 1);
        }
        let inst = build_instance(2, 4, vec![]).unwrap();
        let rel: Vec<Vec<u64>> = inst.presentation.relators.iter().map(|w| degree2_vector(w, 4, 2).unwrap()).collect();
        assert!(linalg::in_span(&rel, &rel[0], 2));
    }

    #[test]
    fn commutators_independent() {
        for n in 2..=9 {
            assert_eq!(commutator_rank(n, 2).unwrap(), n * (n - 1) / 2);
        }
        assert_eq!(commutator_rank(5, 3).unwrap(), 10);
    }

    #[test]
    fn trivial_target() {
        let inst = build_instance(3, 3, vec![Target { name: "trivial".into(), group: FinGroup::trivial() }]).unwrap();
        let k = in_kernel_filtration(&inst, &Limits::default()).unwrap();
        assert!(k.in_kernel_filtration());
        assert_eq!(k.per_target[0].total_homs, Some(1));
    }

    #[test]
    fn small_n_inconclusive() {
        let inst = build_instance(2, 2, vec![u3f2()]).unwrap();
        let r = violates_kernel_property(&inst, 3, &Limits::default()).unwrap();
        assert_eq!(r.verdict, KernelVerdict::Inconclusive);
        // N = 3 ≤ 8: there are homomorphisms detecting [x1,x2].
        let inst = build_instance(2, 3, vec![u3f2()]).unwrap();
        assert!(!in_kernel_filtration(&inst, &Limits::default()).unwrap().in_kernel_filtration());
    }

    /// Oracle: the largest set of distinct elements of `U_3(F_2)` with one
    /// common nontrivial pairwise commutator, by exhaustive clique search.
    #[test]
    fn constant_commutator_clique_bound() {
        let g = u3f2().group;
        let ord = g.order() as u32;
        let mut best = 0;
        for c in 1..ord {
            for mask in 1u32..(1 << ord) {
                let set: Vec<u32> = (0..ord).filter(|i| mask >> i & 1 == 1).collect();
                if set.len() <= best {
                    continue;
                }
                let ok = set
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| set[i + 1..].iter().all(|&b| g.commutator(a, b) == c));
                if ok {
                    best = set.len();
                }
            }
        }
        assert!(best <= 8);
        assert!(best >= 2);
    }

    #[test]
    fn metacyclic_targets() {
        let lim = Limits::default();
        let z9 = Family::Cyclic { n: 9 }.build(&lim).unwrap().group;
        let m27 = Family::Mpks { p: 3, k: 1, s: 1 }.build(&lim).unwrap().group;
        let inst = build_instance(
            3,
            28,
            vec![Target { name: "cyclic:9".into(), group: z9 }, Target { name: "mpks:p=3,k=1,s=1".into(), group: m27 }],
        )
        .unwrap();
        let filter_only = Limits { hom_nodes: 2_000_000, ..lim };
        let k = in_kernel_filtration(&inst, &filter_only).unwrap();
        assert!(k.in_kernel_filtration());
    }
}
