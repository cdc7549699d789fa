use std::collections::BTreeSet;

use proptest::prelude::*;

use unipotent_lab::config::Limits;
use unipotent_lab::famgroups::GroupDescriptor;
use unipotent_lab::fingrp::{enumerate_homs, series, FinGroup, HomSearch, Presentation};
use unipotent_lab::freewords::{FiltrationKind, Letter, Word};

fn group(desc: &str) -> FinGroup {
    desc.parse::<GroupDescriptor>().unwrap().build(&Limits::default()).unwrap()
}

const SMALL: [&str; 6] = ["cyclic:2", "cyclic:3", "cyclic:4", "abelian:2x2", "u3f2", "mp3:p=3"];

fn relator_strategy(rank: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank as u16, -2i64..=2), 1..=6).prop_map(move |ls| {
        Word::from_letters(rank, ls.into_iter().filter(|&(_, e)| e != 0).map(|(gen, exp)| Letter { gen, exp })).unwrap()
    })
}

fn presentation_strategy() -> impl Strategy<Value = Presentation> {
    (1usize..=3).prop_flat_map(|rank| {
        prop::collection::vec(relator_strategy(rank), 0..=3).prop_map(move |rs| Presentation::new(rank, rs).unwrap())
    })
}

fn brute_force(pres: &Presentation, h: &FinGroup) -> BTreeSet<Vec<u32>> {
    let n = h.order() as u32;
    let mut out = BTreeSet::new();
    let mut imgs = vec![0u32; pres.rank];
    loop {
        if pres.relators.iter().all(|r| h.eval_word(r, &imgs) == h.identity()) {
            out.insert(imgs.clone());
        }
        let mut i = 0;
        loop {
            if i == imgs.len() {
                return out;
            }
            imgs[i] += 1;
            if imgs[i] < n {
                break;
            }
            imgs[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homs_match_brute_force(pres in presentation_strategy(), which in 0..SMALL.len()) {
        let h = group(SMALL[which]);
        prop_assume!((h.order() as f64).powi(pres.rank as i32) <= 1e6);
        let opts = HomSearch { node_budget: 10_000_000, prefix_filter: None };
        let found: BTreeSet<Vec<u32>> = enumerate_homs(&pres, &h, &opts).unwrap().into_iter().collect();
        prop_assert_eq!(found, brute_force(&pres, &h));
    }
}

fn kinds() -> Vec<FiltrationKind> {
    vec![
        FiltrationKind::LowerCentral,
        FiltrationKind::Zassenhaus { p: 2 },
        FiltrationKind::PCentral { p: 2 },
        FiltrationKind::Zassenhaus { p: 3 },
        FiltrationKind::PCentral { p: 3 },
    ]
}

#[test]
fn series_are_normal_descending_and_stable() {
    for desc in ["u3f2", "u:n=4,ring=Zmod:2", "u:n=3,ring=Zmod:3", "mp3:p=3", "demushkin:type=2,p=2,s=2,q=4", "abelian:2x4"] {
        let g = group(desc);
        for kind in kinds() {
            let t = series(&g, kind, 10).unwrap();
            assert_eq!(t.level(1).unwrap().order(), g.order(), "{desc} {kind}");
            for n in 1..10 {
                let (a, b) = (t.level(n).unwrap(), t.level(n + 1).unwrap());
                assert!(b.is_subset_of(a), "{desc} {kind} level {n}");
                assert!(b.is_normal(&g), "{desc} {kind} level {}", n + 1);
            }
            if t.stable {
                assert_eq!(t.level(10).unwrap().order(), t.level(40).unwrap().order());
            }
        }
    }
}

/// A finite p-group has trivial Zassenhaus and p-central series.
#[test]
fn p_groups_reach_trivial() {
    for (desc, p) in [("u3f2", 2u64), ("u:n=4,ring=Zmod:2", 2), ("mp3:p=3", 3), ("cyclic:9", 3), ("abelian:2x4", 2)] {
        let g = group(desc);
        for kind in [FiltrationKind::Zassenhaus { p }, FiltrationKind::PCentral { p }] {
            let t = series(&g, kind, 12).unwrap();
            assert!(t.level(12).unwrap().is_trivial(), "{desc} {kind}");
        }
    }
}

#[test]
fn direct_products() {
    let a = group("cyclic:4");
    let b = group("u3f2");
    let ab = a.direct_product(&b).unwrap();
    assert_eq!(ab.order(), 32);
    assert!(!ab.is_abelian());
    assert_eq!(ab.exponent(), 4);
    assert!(group("abelian:2x4").is_abelian());
}
