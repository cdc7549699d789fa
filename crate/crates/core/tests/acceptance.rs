//! Acceptance suite: one PASS/FAIL line per criterion, with a wall-clock
//! bound per criterion. Arithmetic is exact, so every comparison is equality.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use unipotent_lab::appendixlab::{self, Target};
use unipotent_lab::config::Limits;
use unipotent_lab::famgroups::{
    minimal_embedding, power_character_rep, verify_kernel_property, DemushkinType, Family, MinimalKind, PowerCase,
    RigidVariant,
};
use unipotent_lab::fingrp::{compare_filtrations, series, unitriangular_group, FinGroup};
use unipotent_lab::freewords::{in_filtration, rho_i, witness_rep, FiltrationKind, Letter, Word};
use unipotent_lab::linalg;
use unipotent_lab::massey::{all_characters, cross_check, dwyer_search, Character, MasseyStatus};
use unipotent_lab::ncseries::MultiIndex;
use unipotent_lab::residue::{is_prime, RingSpec};
use unipotent_lab::unimat::{centralizer_of_x, solve_conjugation, ConjugationTarget, Matrix, UniMat};

type Outcome = Result<(bool, String), String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn fp(p: u64) -> RingSpec {
    RingSpec::prime_field(p).unwrap()
}

fn random_word(rng: &mut StdRng) -> Word {
    let d = rng.gen_range(1..=3usize);
    let letter = |rng: &mut StdRng| Letter { gen: rng.gen_range(1..=d as u16), exp: if rng.gen_bool(0.5) { 1 } else { -1 } };
    let short = |rng: &mut StdRng, len: usize| Word::from_letters(d, (0..len).map(|_| letter(rng))).unwrap();
    match rng.gen_range(0..4) {
        0 => {
            let (a, b) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let (u, v) = (short(rng, a), short(rng, b));
            let c = Word::commutator(&u, &v).unwrap();
            if c.length() <= 8 {
                c
            } else {
                short(rng, 8)
            }
        }
        1 => {
            let e = rng.gen_range(2..=3);
            let len = rng.gen_range(1..=8 / e as usize);
            short(rng, len).pow(e)
        }
        _ => {
            let len = rng.gen_range(0..=8);
            short(rng, len)
        }
    }
}

fn c1_free_group_kernels() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let kinds = [
        FiltrationKind::LowerCentral,
        FiltrationKind::Zassenhaus { p: 2 },
        FiltrationKind::Zassenhaus { p: 3 },
        FiltrationKind::PCentral { p: 2 },
        FiltrationKind::PCentral { p: 3 },
    ];
    let (mut members, mut non_members) = (0usize, 0usize);
    for _ in 0..500 {
        let w = random_word(&mut rng);
        assert!(w.length() <= 8);
        for kind in kinds {
            for n in 2..=5usize {
                let member = in_filtration(&w, kind, n).map_err(|e| e.to_string())?;
                if member {
                    members += 1;
                    for k in 1..n {
                        let ring = match kind {
                            FiltrationKind::LowerCentral => RingSpec::Integers,
                            FiltrationKind::Zassenhaus { p } => fp(p),
                            FiltrationKind::PCentral { p } => RingSpec::mod_prime_power(p, (n - k) as u32).unwrap(),
                        };
                        for idx in MultiIndex::all_of_length(w.rank(), k) {
                            let m = rho_i(&w, &idx, ring).map_err(|e| e.to_string())?;
                            if !m.is_identity() {
                                return Ok((false, format!("{w} in {kind} level {n} but rho_{idx} = {m}")));
                            }
                        }
                    }
                } else {
                    non_members += 1;
                    let wr = witness_rep(&w, kind, n).map_err(|e| e.to_string())?;
                    if wr.index.len() >= n || wr.embedded(n).map_err(|e| e.to_string())?.is_identity() {
                        return Ok((false, format!("{w} outside {kind} level {n} but witness {} is trivial", wr.index)));
                    }
                }
            }
        }
    }
    Ok((true, format!("500 words x 5 filtrations x n=2..5: {members} member checks, {non_members} witnesses")))
}

fn c2_triviality() -> Outcome {
    let lim = Limits::default();
    let mut checked = 0;
    for p in (2u64..=1024).filter(|&p| is_prime(p)) {
        for r in 2usize..=5 {
            for s in 1u32.. {
                let log = s as u64 * (r * (r - 1) / 2) as u64;
                if (p as u128).pow(log as u32) > 1024 {
                    break;
                }
                let spec = RingSpec::mod_prime_power(p, s).unwrap();
                let g = unitriangular_group(r, spec, lim.group_cap).map_err(|e| e.to_string())?.group;
                let lvl = r + s as usize - 1;
                let t = series(&g, FiltrationKind::PCentral { p }, lvl).map_err(|e| e.to_string())?;
                if !t.level(lvl).unwrap().is_trivial() {
                    return Ok((false, format!("U_{r}(Z/{p}^{s}) has nontrivial p-central level {lvl}")));
                }
                checked += 1;
            }
        }
    }
    for p in [2u64, 3, 5] {
        for n in 2usize..=4 {
            if (p as u128).pow((n * (n - 1) / 2) as u32) > 5000 {
                continue;
            }
            let g = unitriangular_group(n, fp(p), lim.group_cap).map_err(|e| e.to_string())?.group;
            let z = series(&g, FiltrationKind::Zassenhaus { p }, n).map_err(|e| e.to_string())?;
            if !z.level(n).unwrap().is_trivial() {
                return Ok((false, format!("U_{n}(F_{p}) has nontrivial Zassenhaus level {n}")));
            }
            checked += 1;
        }
    }
    for (p, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2)] {
        for n in 2usize..=4 {
            if (p as u128).pow(m * (n * (n - 1) / 2) as u32) > 5000 {
                continue;
            }
            let g = unitriangular_group(n, RingSpec::mod_prime_power(p, m).unwrap(), lim.group_cap)
                .map_err(|e| e.to_string())?
                .group;
            let lc = series(&g, FiltrationKind::LowerCentral, n).map_err(|e| e.to_string())?;
            if !lc.level(n).unwrap().is_trivial() {
                return Ok((false, format!("U_{n}(Z/{p}^{m}) has nontrivial lower central level {n}")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} groups checked")))
}

/// Multiplicative order of `a` modulo `m`.
fn mult_order(a: u64, m: u64) -> u64 {
    let (mut x, mut k) = (a % m, 1);
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

fn c3_conjugator() -> Outcome {
    let mut checked = 0;
    let mut order_mismatches = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for s in 1u32.. {
            let n = p.pow(s) + 1;
            if n > 10 {
                break;
            }
            let b = UniMat::b(n as usize, fp(p));
            let mut targets: Vec<(ConjugationTarget, i64)> =
                (1..=s + 2).map(|k| (ConjugationTarget::PowerOnePlusQ { k }, 1 + p.pow(k) as i64)).collect();
            if p == 2 {
                targets.extend((1..=s).map(|k| (ConjugationTarget::NegPowerOnePlusQ { k }, -(1 + 2i64.pow(k)))));
                targets.push((ConjugationTarget::Inverse, -1));
            }
            for (t, m) in targets {
                let a = solve_conjugation(t, p, s).map_err(|e| e.to_string())?;
                let last_col_ok = (0..n as usize).all(|r| a.get(r, n as usize - 1).is_zero() == (r + 1 != n as usize));
                let conj_ok = a.mul(&b).unwrap().mul(&a.inverse()).unwrap() == b.pow(m);
                if !last_col_ok || !conj_ok {
                    return Ok((false, format!("{t} at p={p}, s={s}")));
                }
                if let ConjugationTarget::PowerOnePlusQ { k } = t {
                    let order = a.order().map_err(|e| e.to_string())?;
                    if k > s && !a.is_identity() {
                        return Ok((false, format!("k={k} > s={s} gives A != 1 at p={p}")));
                    }
                    let q = p.pow(s + 1);
                    if k <= s && order != mult_order((1 + p.pow(k)) % q, q) {
                        return Ok((false, format!("order {order} is not the order of the action at p={p}, s={s}, k={k}")));
                    }
                    if k <= s && order != p.pow(s + 1 - k) {
                        order_mismatches.push(format!("(p,s,k)=({p},{s},{k}) has order {order}, formula {}", p.pow(s + 1 - k)));
                    }
                }
                checked += 1;
            }
        }
    }
    if order_mismatches.is_empty() {
        Ok((true, format!("{checked} (p, s, target) cases")))
    } else {
        Ok((
            false,
            format!(
                "{checked} cases; conjugation and normalization hold everywhere; order p^(s+1-k) fails: {}; \
                 the order always equals the order of 1+p^k in (Z/p^(s+1))^x",
                order_mismatches.join("; ")
            ),
        ))
    }
}

fn c4_centralizer() -> Outcome {
    for p in [2u64, 3, 5] {
        for n in 1usize..=10 {
            let spec = fp(p);
            let basis = centralizer_of_x(n, spec).map_err(|e| e.to_string())?;
            if basis.len() != n {
                return Ok((false, format!("dimension {} at n={n}, p={p}", basis.len())));
            }
            let flat = |m: &Matrix| -> Vec<u64> {
                (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| m.get(r, c).residue().unwrap()).collect()
            };
            let x = Matrix::shift(n, spec);
            let mut powers = vec![Matrix::identity(n, spec)];
            for _ in 1..n {
                powers.push(powers.last().unwrap().mul(&x).unwrap());
            }
            let pw: Vec<Vec<u64>> = powers.iter().map(flat).collect();
            let cb: Vec<Vec<u64>> = basis.iter().map(flat).collect();
            let mut both = pw.clone();
            both.extend(cb.iter().cloned());
            if linalg::rank(&pw, p) != n || linalg::rank(&both, p) != n {
                return Ok((false, format!("basis is not spanned by powers of X at n={n}, p={p}")));
            }
            for m in &basis {
                if m.mul(&x).unwrap() != x.mul(m).unwrap() {
                    return Ok((false, format!("basis element fails to commute at n={n}, p={p}")));
                }
            }
        }
    }
    Ok((true, "n = 1..10, p in {2,3,5}".into()))
}

fn c5_embeddings() -> Outcome {
    let lim = Limits::default();
    let mut detail = Vec::new();
    for p in [3u64, 5] {
        for kind in [MinimalKind::CyclicPSquared, MinimalKind::Mp3] {
            let r = minimal_embedding(kind, p, &lim).map_err(|e| e.to_string())?;
            if !(r.is_homomorphism && r.injective && r.exponent_below == p && r.minimal()) {
                return Ok((false, format!("{kind:?} at p={p}: {r:?}")));
            }
        }
        detail.push(format!("exp U_{p}(F_{p}) = {p}"));
    }
    Ok((true, detail.join(", ")))
}

fn c6_kernel_property() -> Outcome {
    let lim = Limits::default();
    let mut cases: Vec<(Family, usize)> = Vec::new();
    for m in [1usize, 2] {
        for variant in [RigidVariant::Split { k: 1 }, RigidVariant::Direct] {
            cases.push((Family::Rigid { p: 3, s: 1, m, variant }, 4));
        }
    }
    for variant in [RigidVariant::Inv, RigidVariant::Split { k: 1 }] {
        cases.push((Family::Rigid { p: 2, s: 1, m: 2, variant }, 3));
    }
    for (p, ty) in [
        (3u64, DemushkinType::Type1),
        (3, DemushkinType::Type2 { k: 1 }),
        (2, DemushkinType::Type3),
        (2, DemushkinType::Type4 { k: 2 }),
        (2, DemushkinType::Type1),
        (2, DemushkinType::Type2 { k: 2 }),
    ] {
        cases.push((Family::Demushkin { p, s: 1, ty }, p as usize + 1));
    }
    for (f, n) in &cases {
        let r = verify_kernel_property(f, *n, &lim).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Ok((false, format!("{f} at n={n}: {} of {} separated", r.separated, r.nontrivial)));
        }
    }
    Ok((true, format!("{} quotients", cases.len())))
}

fn c7_massey_example() -> Outcome {
    let lim = Limits::default();
    let cyc = |n: u64| Family::Cyclic { n }.build(&lim).unwrap().group;
    let alphas = |g: &FinGroup, p: u64, v: i64, n: usize| vec![Character::from_generator_values(g, p, &[v]).unwrap(); n];
    for (q, n) in [(3u64, 3usize), (5, 5)] {
        let g = cyc(q);
        let v = dwyer_search(&g, &alphas(&g, q, 1, n), &lim).map_err(|e| e.to_string())?;
        if v.status != MasseyStatus::DefinedNotVanishing {
            return Ok((false, format!("Z/{q}, n={n}: {}", v.status)));
        }
    }
    let g = cyc(2);
    let v = dwyer_search(&g, &alphas(&g, 2, 1, 4), &lim).map_err(|e| e.to_string())?;
    if v.status != MasseyStatus::Undefined {
        return Ok((false, format!("Z/2, n=4: {}", v.status)));
    }
    let g = cyc(9);
    let v = dwyer_search(&g, &alphas(&g, 3, -1, 3), &lim).map_err(|e| e.to_string())?;
    let b = UniMat::b(4, fp(3));
    if v.status != MasseyStatus::Vanishing || v.lift != Some(vec![b]) {
        return Ok((false, format!("Z/9, n=3: {} with lift {:?}", v.status, v.lift)));
    }
    let red = dwyer_search(&g, &alphas(&g, 3, 1, 3), &lim).map_err(|e| e.to_string())?;
    if red.status != MasseyStatus::Vanishing {
        return Ok((false, format!("Z/9 with reduction itself: {}", red.status)));
    }
    Ok((true, "Z/3 n=3, Z/5 n=5 DefinedNotVanishing; Z/2 n=4 Undefined; Z/9 n=3 Vanishing via B".into()))
}

fn c8_cross_check() -> Outcome {
    let lim = Limits::default();
    let mut groups: Vec<(String, FinGroup)> = vec![("trivial".into(), FinGroup::trivial())];
    for n in 2..=4 {
        groups.push((format!("cyclic:{n}"), Family::Cyclic { n }.build(&lim).unwrap().group));
    }
    groups.push(("abelian:2x2".into(), Family::Homocyclic { modulus: 2, rank: 2 }.build(&lim).unwrap().group));
    let mut instances = 0;
    for (name, g) in &groups {
        for p in [2u64, 3] {
            let chars = all_characters(g, p).map_err(|e| e.to_string())?;
            for a in &chars {
                for b in &chars {
                    for c in &chars {
                        let cc = cross_check(g, &[a.clone(), b.clone(), c.clone()], &lim).map_err(|e| e.to_string())?;
                        if !cc.agree() {
                            return Ok((false, format!("{name}, p={p}: {cc:?}")));
                        }
                        instances += 1;
                    }
                }
            }
        }
    }
    let g = Family::Cyclic { n: 3 }.build(&lim).unwrap().group;
    let id = Character::from_generator_values(&g, 3, &[1]).unwrap();
    let cc = cross_check(&g, &[id.clone(), id.clone(), id], &lim).map_err(|e| e.to_string())?;
    if !cc.agree() || cc.cochain.status != MasseyStatus::DefinedNotVanishing {
        return Ok((false, format!("Z/3 id: {cc:?}")));
    }
    Ok((true, format!("{} character triples agree", instances + 1)))
}

fn c9_power_character() -> Outcome {
    let lim = Limits::default();
    for case in [PowerCase::Case0, PowerCase::Case1, PowerCase::Case2] {
        let r = power_character_rep(3, 1, 1, case, &lim).map_err(|e| e.to_string())?;
        if !(r.is_homomorphism && r.superdiagonal_matches) {
            return Ok((false, format!("{case:?}: {r:?}")));
        }
    }
    Ok((true, "cases 0, 1, 2 at (p, s, k) = (3, 1, 1)".into()))
}

fn c10_appendix() -> Outcome {
    let lim = Limits::default();
    let h = unitriangular_group(3, fp(2), lim.group_cap).unwrap().group;
    let inst = appendixlab::build_instance(2, 9, vec![Target { name: "u3f2".into(), group: h }]).map_err(|e| e.to_string())?;
    let r = appendixlab::violates_kernel_property(&inst, 3, &lim).map_err(|e| e.to_string())?;
    let d2 = r.degree2.as_ref().ok_or("no degree-2 report")?;
    let k = r.kernel.as_ref().ok_or("no kernel report")?;
    let ok = d2.not_in_g3() && k.in_kernel_filtration() && r.verdict == appendixlab::KernelVerdict::Violated;
    let total = k.per_target[0].total_homs.map_or("over budget".to_string(), |c| c.to_string());
    Ok((ok, format!("not_in_g3={}, in_kernel_filtration={}, verdict={}, homs={total}", d2.not_in_g3(), k.in_kernel_filtration(), r.verdict)))
}

fn c11_comparison() -> Outcome {
    let lim = Limits::default();
    let u = |n: usize, p: u64| unitriangular_group(n, fp(p), lim.group_cap).unwrap().group;
    let samples: Vec<(&str, FinGroup, u64)> = vec![
        ("u3f2", u(3, 2), 2),
        ("u4f2", u(4, 2), 2),
        ("u3f3", u(3, 3), 3),
        ("mpks:p=3,k=1,s=1", Family::Mpks { p: 3, k: 1, s: 1 }.build(&lim).unwrap().group, 3),
        (
            "rigid:p=3,s=1,m=1,k=1",
            Family::Rigid { p: 3, s: 1, m: 1, variant: RigidVariant::Split { k: 1 } }.build(&lim).unwrap().group,
            3,
        ),
    ];
    for (name, g, p) in &samples {
        let c = compare_filtrations(g, *p, 4, true, &lim).map_err(|e| e.to_string())?;
        if !c.all_hold() || (*p == 2 && c.level3_equal != Some(true)) {
            return Ok((false, format!("{name}: {c:?}")));
        }
    }
    Ok((true, "5 groups, levels 1..4, kernel chain included".into()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "free-group kernel theorems", limit: Duration::from_secs(60), run: c1_free_group_kernels },
        Criterion { id: 2, name: "matrix triviality lemma", limit: Duration::from_secs(120), run: c2_triviality },
        Criterion { id: 3, name: "conjugator and order", limit: Duration::from_secs(10), run: c3_conjugator },
        Criterion { id: 4, name: "centralizer of X", limit: Duration::from_secs(5), run: c4_centralizer },
        Criterion { id: 5, name: "minimal embeddings", limit: Duration::from_secs(30), run: c5_embeddings },
        Criterion { id: 6, name: "kernel n-unipotent quotients", limit: Duration::from_secs(120), run: c6_kernel_property },
        Criterion { id: 7, name: "Massey example", limit: Duration::from_secs(60), run: c7_massey_example },
        Criterion { id: 8, name: "Dwyer cross-check", limit: Duration::from_secs(600), run: c8_cross_check },
        Criterion { id: 9, name: "power-character representations", limit: Duration::from_secs(5), run: c9_power_character },
        Criterion { id: 10, name: "appendix counterexample", limit: Duration::from_secs(300), run: c10_appendix },
        Criterion { id: 11, name: "filtration comparison", limit: Duration::from_secs(60), run: c11_comparison },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok && elapsed <= c.limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({:.2}s, limit {}s) {}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
