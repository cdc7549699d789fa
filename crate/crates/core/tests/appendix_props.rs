use proptest::prelude::*;

use unipotent_lab::appendixlab::{
    build_instance, commutator_12, commutator_rank, degree2_vector, not_in_g3, phi, relators, violates_kernel_property,
    KernelVerdict, Target,
};
use unipotent_lab::config::Limits;
use unipotent_lab::famgroups::GroupDescriptor;
use unipotent_lab::fingrp::{enumerate_homs, HomSearch};

fn target(desc: &str) -> Target {
    let group = desc.parse::<GroupDescriptor>().unwrap().build(&Limits::default()).unwrap();
    Target { name: desc.into(), group }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_two_independence(n in 2usize..=10, p in prop::sample::select(vec![2u64, 3, 5])) {
        let c2 = n * (n - 1) / 2;
        prop_assert_eq!(commutator_rank(n, p).unwrap(), c2);
        let inst = build_instance(p, n, vec![]).unwrap();
        let d2 = not_in_g3(&inst).unwrap();
        prop_assert!(d2.not_in_g3());
        prop_assert_eq!(d2.relator_rank, c2 - 1);
        for (_, r) in relators(n) {
            prop_assert_eq!(phi(&degree2_vector(&r, n, p).unwrap(), n, p), 0);
        }
        prop_assert_eq!(phi(&degree2_vector(&commutator_12(n), n, p).unwrap(), n, p), 1);
    }
}

/// With `N > |H|` two generator images coincide, so `[h1, h2] = 1` in every
/// homomorphism; checked on the full enumeration.
#[test]
fn pigeonhole_on_full_enumeration() {
    for (desc, n) in [("cyclic:2", 3usize), ("abelian:2x2", 5), ("u3f2", 9)] {
        let t = target(desc);
        let inst = build_instance(2, n, vec![t.clone()]).unwrap();
        let opts = HomSearch { node_budget: 100_000_000, prefix_filter: None };
        let homs = enumerate_homs(&inst.presentation, &t.group, &opts).unwrap();
        assert!(!homs.is_empty());
        for h in &homs {
            let mut seen = h.clone();
            seen.sort_unstable();
            seen.dedup();
            assert!(seen.len() < h.len());
            assert_eq!(t.group.commutator(h[0], h[1]), t.group.identity(), "{desc}");
        }
    }
}

/// Below the pigeonhole bound a separating homomorphism exists.
#[test]
fn small_n_separates() {
    let t = target("u3f2");
    let inst = build_instance(2, 3, vec![t.clone()]).unwrap();
    let opts = HomSearch { node_budget: 10_000_000, prefix_filter: None };
    let homs = enumerate_homs(&inst.presentation, &t.group, &opts).unwrap();
    assert!(homs.iter().any(|h| t.group.commutator(h[0], h[1]) != t.group.identity()));
    let v = violates_kernel_property(&inst, 3, &Limits::default()).unwrap();
    assert_eq!(v.verdict, KernelVerdict::Inconclusive);
}

#[test]
fn violated_above_bound() {
    for (p, n, descs) in [(2u64, 9usize, vec!["u3f2"]), (3, 10, vec!["abelian:3x3"])] {
        let inst = build_instance(p, n, descs.iter().map(|d| target(d)).collect()).unwrap();
        let limits = Limits { hom_nodes: 2_000_000, ..Limits::default() };
        let v = violates_kernel_property(&inst, 3, &limits).unwrap();
        assert_eq!(v.verdict, KernelVerdict::Violated, "p={p} N={n}");
    }
}
