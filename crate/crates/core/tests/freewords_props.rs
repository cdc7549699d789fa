use proptest::prelude::*;

use unipotent_lab::freewords::{first_violation, in_filtration, rho_i, witness_rep, FiltrationKind, Letter, Word};
use unipotent_lab::ncseries::{magnus, MultiIndex};
use unipotent_lab::residue::RingSpec;

fn word_strategy() -> impl Strategy<Value = Word> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec((1..=d as u16, prop::bool::ANY), 0..=8).prop_map(move |ls| {
            Word::from_letters(d, ls.into_iter().map(|(gen, pos)| Letter { gen, exp: if pos { 1 } else { -1 } })).unwrap()
        })
    })
}

/// Words more likely to sit deep in a filtration: commutators and powers.
fn deep_word_strategy() -> impl Strategy<Value = Word> {
    prop_oneof![
        word_strategy(),
        (word_strategy(), word_strategy()).prop_filter_map("rank", |(u, v)| {
            let r = u.rank().max(v.rank());
            Word::commutator(&u.with_rank(r).ok()?, &v.with_rank(r).ok()?).ok().filter(|c| c.length() <= 8)
        }),
        (word_strategy(), 2i64..=3).prop_map(|(u, e)| u.pow(e)).prop_filter("length", |w| w.length() <= 8),
    ]
}

fn kind_strategy() -> impl Strategy<Value = FiltrationKind> {
    prop_oneof![
        Just(FiltrationKind::LowerCentral),
        prop::sample::select(vec![2u64, 3]).prop_map(|p| FiltrationKind::Zassenhaus { p }),
        prop::sample::select(vec![2u64, 3]).prop_map(|p| FiltrationKind::PCentral { p }),
    ]
}

fn ring_for(kind: FiltrationKind, n: usize, k: usize) -> RingSpec {
    match kind {
        FiltrationKind::LowerCentral => RingSpec::Integers,
        FiltrationKind::Zassenhaus { p } => RingSpec::prime_field(p).unwrap(),
        FiltrationKind::PCentral { p } => RingSpec::mod_prime_power(p, (n - k) as u32).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn soundness_and_completeness(w in deep_word_strategy(), kind in kind_strategy(), n in 2usize..=5) {
        if in_filtration(&w, kind, n).unwrap() {
            for k in 1..n {
                for idx in MultiIndex::all_of_length(w.rank(), k) {
                    prop_assert!(rho_i(&w, &idx, ring_for(kind, n, k)).unwrap().is_identity());
                }
            }
        } else {
            let wr = witness_rep(&w, kind, n).unwrap();
            prop_assert!(wr.index.len() < n);
            prop_assert!(!wr.corner().is_zero());
            prop_assert!(!wr.embedded(n).unwrap().is_identity());
        }
    }

    #[test]
    fn pcentral_inside_zassenhaus(w in deep_word_strategy(), p in prop::sample::select(vec![2u64, 3]), n in 2usize..=5) {
        if in_filtration(&w, FiltrationKind::PCentral { p }, n).unwrap() {
            let z = FiltrationKind::Zassenhaus { p };
            prop_assert!(in_filtration(&w, z, n).unwrap());
        }
    }

    #[test]
    fn lower_central_inside_both(w in deep_word_strategy(), p in prop::sample::select(vec![2u64, 3]), n in 2usize..=5) {
        if in_filtration(&w, FiltrationKind::LowerCentral, n).unwrap() {
            let pc = FiltrationKind::PCentral { p };
            prop_assert!(in_filtration(&w, pc, n).unwrap());
        }
    }

    #[test]
    fn level_three_agrees_at_two(w in deep_word_strategy()) {
        prop_assert_eq!(
            in_filtration(&w, FiltrationKind::PCentral { p: 2 }, 3).unwrap(),
            in_filtration(&w, FiltrationKind::Zassenhaus { p: 2 }, 3).unwrap()
        );
    }

    /// The witness index is the first violating coefficient in (length, lex) order.
    #[test]
    fn witness_is_first_violation(w in word_strategy(), p in prop::sample::select(vec![2u64, 3]), n in 2usize..=4) {
        let kind = FiltrationKind::Zassenhaus { p };
        if let Some((idx, _)) = first_violation(&w, kind, n).unwrap() {
            let spec = RingSpec::prime_field(p).unwrap();
            let s = magnus(&w, w.rank(), spec, n - 1).unwrap();
            for k in 1..=idx.len() {
                for j in MultiIndex::all_of_length(w.rank(), k) {
                    if j < idx {
                        prop_assert!(s.coeff(&j).is_zero());
                    }
                }
            }
            prop_assert!(!s.coeff(&idx).is_zero());
        }
    }
}

#[test]
fn commutator_outside_zassenhaus_three() {
    let w = Word::parse("[x1,x2]").unwrap();
    let kind = FiltrationKind::Zassenhaus { p: 2 };
    assert!(in_filtration(&w, kind, 2).unwrap());
    assert!(!in_filtration(&w, kind, 3).unwrap());
    let wr = witness_rep(&w, kind, 3).unwrap();
    assert_eq!(wr.index, MultiIndex::new(vec![1, 2]));
}

#[test]
fn squares_and_p_central() {
    let w = Word::parse("x1^2").unwrap();
    assert!(in_filtration(&w, FiltrationKind::PCentral { p: 2 }, 2).unwrap());
    assert!(!in_filtration(&w, FiltrationKind::PCentral { p: 2 }, 3).unwrap());
    assert!(!in_filtration(&w, FiltrationKind::LowerCentral, 2).unwrap());
    let w4 = Word::parse("x1^4").unwrap();
    assert!(in_filtration(&w4, FiltrationKind::PCentral { p: 2 }, 3).unwrap());
    assert!(in_filtration(&w4, FiltrationKind::Zassenhaus { p: 2 }, 4).unwrap());
    assert!(!in_filtration(&w4, FiltrationKind::Zassenhaus { p: 2 }, 5).unwrap());
}
