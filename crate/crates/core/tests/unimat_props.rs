use proptest::prelude::*;

use unipotent_lab::fingrp::unitriangular_group;
use unipotent_lab::residue::RingSpec;
use unipotent_lab::unimat::{
    centralizer_of_x, conjugator_from_automorphism, exponent_of_unitriangular, solve_conjugation, ConjugationTarget,
    KXElem, Matrix, UniMat,
};

fn spec_strategy() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        prop::sample::select(vec![2u64, 3, 5]).prop_map(|p| RingSpec::prime_field(p).unwrap()),
        (prop::sample::select(vec![2u64, 3]), 2u32..=3).prop_map(|(p, r)| RingSpec::mod_prime_power(p, r).unwrap()),
        Just(RingSpec::Integers),
    ]
}

fn unimat_strategy(n: usize, spec: RingSpec) -> impl Strategy<Value = UniMat> {
    prop::collection::vec(-20i64..20, n * n).prop_map(move |v| {
        let m = Matrix::from_fn(n, spec, |r, c| {
            if r == c {
                spec.one()
            } else if r < c {
                spec.from_i64(v[r * n + c])
            } else {
                spec.zero()
            }
        });
        UniMat::try_from(m).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (UniMat, UniMat, UniMat)> {
    (spec_strategy(), 1usize..=5).prop_flat_map(|(spec, n)| {
        (unimat_strategy(n, spec), unimat_strategy(n, spec), unimat_strategy(n, spec))
    })
}

fn mult_order(a: u64, m: u64) -> u64 {
    let (mut x, mut k) = (a % m, 1);
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

proptest! {
    #[test]
    fn group_axioms((a, b, c) in triple()) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.mul(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().mul(&a).unwrap().is_identity());
        let comm = a.commutator(&b).unwrap();
        let expect = a.inverse().mul(&b.inverse()).unwrap().mul(&a).unwrap().mul(&b).unwrap();
        prop_assert_eq!(comm, expect);
    }

    #[test]
    fn powers_add((a, _, _) in triple(), e in -6i64..6, f in -6i64..6) {
        prop_assert_eq!(a.pow(e).mul(&a.pow(f)).unwrap(), a.pow(e + f));
    }

    #[test]
    fn text_round_trip((a, _, _) in triple()) {
        let back = UniMat::parse(&a.to_string(), a.spec()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn kx_inverse(p in prop::sample::select(vec![2u64, 3, 5]), n in 1usize..=8, cs in prop::collection::vec(0i64..5, 8)) {
        let spec = RingSpec::prime_field(p).unwrap();
        let mut coeffs = cs[..n].to_vec();
        coeffs[0] = 1;
        let f = KXElem::new(&coeffs, n, spec);
        prop_assert!(f.mul(&f.inverse().unwrap()).unwrap().is_one());
    }

    /// `A X A⁻¹ = X f(X)` for every unit `f`.
    #[test]
    fn conjugator_realizes_automorphism(p in prop::sample::select(vec![2u64, 3, 5]), n in 1usize..=7, cs in prop::collection::vec(0i64..5, 7)) {
        let spec = RingSpec::prime_field(p).unwrap();
        let mut coeffs = cs[..n].to_vec();
        coeffs[0] = 1 + (coeffs[0] % (p as i64 - 1).max(1));
        let f = KXElem::new(&coeffs, n, spec);
        prop_assume!(f.is_unit());
        let a = conjugator_from_automorphism(&f).unwrap();
        let x = Matrix::shift(n, spec);
        let lhs = a.mul(&x).unwrap();
        let rhs = x.mul(&f.to_matrix()).unwrap().mul(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// For all `p^s + 1 ≤ 10`: the order of `A` is the order of the induced
/// automorphism of `⟨B⟩`, which equals `p^{s+1-k}` except at `p = 2, k = 1`.
#[test]
fn conjugator_order_matches_action() {
    for p in [2u64, 3, 5, 7] {
        for s in 1u32.. {
            if p.pow(s) + 1 > 10 {
                break;
            }
            for k in 1..=s {
                let a = solve_conjugation(ConjugationTarget::PowerOnePlusQ { k }, p, s).unwrap();
                let q = p.pow(s + 1);
                let order = a.order().unwrap();
                assert_eq!(order, mult_order(1 + p.pow(k), q), "p={p} s={s} k={k}");
                if p != 2 || k >= 2 || s == 1 {
                    assert_eq!(order, p.pow(s + 1 - k), "p={p} s={s} k={k}");
                }
            }
        }
    }
}

#[test]
fn p2_variants() {
    for s in 1..=3u32 {
        let n = 2usize.pow(s) + 1;
        let spec = RingSpec::prime_field(2).unwrap();
        let b = UniMat::b(n, spec);
        let a = solve_conjugation(ConjugationTarget::Inverse, 2, s).unwrap();
        assert_eq!(a.mul(&b).unwrap().mul(&a.inverse()).unwrap(), b.inverse());
        assert!(solve_conjugation(ConjugationTarget::Inverse, 3, s).is_err());
    }
}

#[test]
fn generators_give_full_group() {
    for p in [2u64, 3] {
        for n in 1..=4usize {
            let g = unitriangular_group(n, RingSpec::prime_field(p).unwrap(), 20_000).unwrap();
            assert_eq!(g.order() as u64, p.pow((n * (n.saturating_sub(1)) / 2) as u32));
        }
    }
}

#[test]
fn exponent_scan_matches_group_exponent() {
    for (n, p) in [(2usize, 2u64), (3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (3, 5)] {
        let g = unitriangular_group(n, RingSpec::prime_field(p).unwrap(), 20_000).unwrap();
        assert_eq!(exponent_of_unitriangular(n, p).unwrap(), g.group.exponent(), "U_{n}(F_{p})");
    }
}

#[test]
fn centralizer_dimension() {
    for p in [2u64, 3] {
        for n in 1..=6 {
            assert_eq!(centralizer_of_x(n, RingSpec::prime_field(p).unwrap()).unwrap().len(), n);
        }
    }
    assert!(centralizer_of_x(3, RingSpec::Integers).is_err());
}
