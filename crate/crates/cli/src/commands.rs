use anyhow::{anyhow, bail, Context, Result};
use unipotent_lab::appendixlab::{self, KernelVerdict, Target};
use unipotent_lab::config::Limits;
use unipotent_lab::famgroups::{
    minimal_embedding, power_character_rep, separating_rep, verify_kernel_property, Family, GroupDescriptor,
    MinimalKind, PowerCase,
};
use unipotent_lab::fingrp::{self, compare_filtrations, enumerate_homs, FinGroup, HomSearch, Presentation};
use unipotent_lab::freewords::{in_filtration, witness_rep, FiltrationKind, Word};
use unipotent_lab::massey::{cross_check, dwyer_search, Character, MasseyStatus};
use unipotent_lab::ncseries::magnus;
use unipotent_lab::residue::RingSpec;
use unipotent_lab::unimat::{solve_conjugation, ConjugationTarget, UniMat};

use crate::args::*;
use crate::report::{Outcome, Report};

pub fn run(cmd: &Command, limits: &Limits) -> Result<Report> {
    let mut r = Report::new(cmd.verb());
    match cmd {
        Command::Magnus(a) => magnus_cmd(a, limits, &mut r)?,
        Command::Filtration(a) => filtration_cmd(a, limits, &mut r)?,
        Command::Witness(a) => witness_cmd(a, limits, &mut r)?,
        Command::Series(a) => series_cmd(a, limits, &mut r)?,
        Command::Homs(a) => homs_cmd(a, limits, &mut r)?,
        Command::Conjugator(a) => conjugator_cmd(a, &mut r)?,
        Command::Family(a) => family_cmd(a, limits, &mut r)?,
        Command::Separate(a) => separate_cmd(a, limits, &mut r)?,
        Command::KernelVerify(a) => kernel_verify_cmd(a, limits, &mut r)?,
        Command::Massey(a) => massey_cmd(a, limits, &mut r)?,
        Command::CrossCheck(a) => cross_check_cmd(a, limits, &mut r)?,
        Command::Embed(a) => embed_cmd(a, limits, &mut r)?,
        Command::Appendix { action: AppendixAction::Verify(a) } => appendix_cmd(a, limits, &mut r)?,
        Command::Compare(a) => compare_cmd(a, limits, &mut r)?,
    }
    Ok(r)
}

fn parse_word(text: &str, rank: Option<usize>, limits: &Limits) -> Result<Word> {
    let w = match rank {
        Some(d) => Word::parse_with_rank(text, d)?,
        None => Word::parse(text)?,
    };
    if w.length() > limits.max_word_length {
        bail!("word length {} exceeds max_word_length {}", w.length(), limits.max_word_length);
    }
    Ok(w)
}

fn filtration_kind(kind: KindArg, p: Option<u64>) -> Result<FiltrationKind> {
    let need_p = || p.ok_or_else(|| anyhow!("--p is required for this filtration"));
    Ok(match kind {
        KindArg::LowerCentral => FiltrationKind::LowerCentral,
        KindArg::Zassenhaus => FiltrationKind::Zassenhaus { p: need_p()? },
        KindArg::PCentral => FiltrationKind::PCentral { p: need_p()? },
    })
}

fn check_level(n: usize, limits: &Limits) -> Result<()> {
    if n == 0 || n > limits.max_level {
        bail!("level {n} outside 1..={}", limits.max_level);
    }
    Ok(())
}

fn group(desc: &str, limits: &Limits) -> Result<(GroupDescriptor, FinGroup)> {
    let d: GroupDescriptor = desc.parse()?;
    let g = d.build(limits)?;
    Ok((d, g))
}

fn prime_of(d: &GroupDescriptor, p: Option<u64>) -> Result<u64> {
    p.or_else(|| d.prime()).ok_or_else(|| anyhow!("cannot infer a prime for `{d}`; pass --p"))
}

fn labels(g: &FinGroup, xs: &[u32]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x).to_string()).collect()
}

fn magnus_cmd(a: &MagnusArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let w = parse_word(&a.word, a.rank, limits)?;
    let spec: RingSpec = a.ring.parse()?;
    check_level(a.degree + 1, limits)?;
    let s = magnus(&w, w.rank(), spec, a.degree)?;
    let terms: Vec<String> = s.terms().map(|(i, c)| format!("{i} {c}")).collect();
    r.field("word", w.to_string())
        .field("rank", w.rank())
        .field("ring", spec.to_string())
        .field("degree", a.degree)
        .field("series", s.to_string())
        .field("terms", terms);
    Ok(())
}

fn filtration_cmd(a: &FiltrationArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let w = parse_word(&a.word, a.rank, limits)?;
    let kind = filtration_kind(a.kind, a.p)?;
    check_level(a.n, limits)?;
    let member = in_filtration(&w, kind, a.n)?;
    r.field("word", w.to_string()).field("kind", kind.to_string()).field("n", a.n).field("member", member);
    if member {
        r.field("verdict", "member");
    } else {
        let wr = witness_rep(&w, kind, a.n)?;
        r.field("verdict", "not a member")
            .field("witness_index", wr.index.to_string())
            .field("witness_ring", wr.ring.to_string())
            .field("witness_matrix", wr.matrix.to_string())
            .field("witness_corner", wr.corner().to_string())
            .outcome(Outcome::Refuted);
    }
    Ok(())
}

fn witness_cmd(a: &FiltrationArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let w = parse_word(&a.word, a.rank, limits)?;
    let kind = filtration_kind(a.kind, a.p)?;
    check_level(a.n, limits)?;
    r.field("word", w.to_string()).field("kind", kind.to_string()).field("n", a.n);
    if in_filtration(&w, kind, a.n)? {
        r.field("verdict", "member, no witness").outcome(Outcome::Refuted);
        return Ok(());
    }
    let wr = witness_rep(&w, kind, a.n)?;
    r.field("verdict", "witness found")
        .field("index", wr.index.to_string())
        .field("ring", wr.ring.to_string())
        .field("size", wr.matrix.size())
        .field("matrix", wr.matrix.to_string())
        .field("corner", wr.corner().to_string())
        .field("embedded", wr.embedded(a.n)?.to_string());
    Ok(())
}

fn series_cmd(a: &SeriesArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let (d, g) = group(&a.group, limits)?;
    let kind = match a.kind {
        KindArg::LowerCentral => FiltrationKind::LowerCentral,
        k => filtration_kind(k, Some(prime_of(&d, a.p)?))?,
    };
    let t = fingrp::series(&g, kind, a.max_level)?;
    r.field("group", d.to_string())
        .field("order", g.order())
        .field("kind", kind.to_string())
        .field("orders", t.orders())
        .field("stable", t.stable);
    Ok(())
}

fn homs_cmd(a: &HomsArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let (d, h) = group(&a.target, limits)?;
    let pres = match &a.presentation {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            Presentation::parse(&text)?
        }
        None => {
            let rank = a.rank.ok_or_else(|| anyhow!("pass --presentation or --rank with --relator"))?;
            let rels = a.relator.iter().map(|t| parse_word(t, Some(rank), limits)).collect::<Result<Vec<_>>>()?;
            Presentation::new(rank, rels)?
        }
    };
    let opts = HomSearch { node_budget: limits.hom_nodes, prefix_filter: None };
    let homs = enumerate_homs(&pres, &h, &opts)?;
    r.field("target", d.to_string())
        .field("target_order", h.order())
        .field("rank", pres.rank)
        .field("relators", pres.relators.iter().map(Word::to_string).collect::<Vec<_>>())
        .field("count", homs.len());
    if a.list {
        r.field("homs", homs.iter().map(|imgs| labels(&h, imgs).join(" ")).collect::<Vec<_>>());
    }
    Ok(())
}

fn conjugator_cmd(a: &ConjugatorArgs, r: &mut Report) -> Result<()> {
    let target: ConjugationTarget = a.target.parse()?;
    let m = solve_conjugation(target, a.p, a.s)?;
    let spec = RingSpec::prime_field(a.p)?;
    let n = m.size();
    let b = UniMat::b(n, spec);
    let holds = m.mul(&b)?.mul(&m.inverse())? == b.pow(target.exponent(a.p));
    let last_column = (0..n).all(|i| m.get(i, n - 1) == &if i == n - 1 { spec.one() } else { spec.zero() });
    r.field("p", a.p)
        .field("s", a.s)
        .field("target", target.to_string())
        .field("size", n)
        .field("matrix", m.to_string())
        .field("order", m.order()?)
        .field("conjugation_holds", holds)
        .field("last_column_normalized", last_column)
        .outcome(Outcome::from_bool(holds && last_column));
    Ok(())
}

fn family_cmd(a: &FamilyArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let (d, g) = group(&a.desc, limits)?;
    r.field("descriptor", d.to_string())
        .field("order", g.order())
        .field("exponent", g.exponent())
        .field("abelian", g.is_abelian())
        .field("generators", labels(&g, g.generators()));
    if let Some(p) = d.prime() {
        r.field("prime", p);
    }
    Ok(())
}

fn family(desc: &str) -> Result<Family> {
    let f: Family = desc.parse()?;
    f.validate()?;
    Ok(f)
}

fn separate_cmd(a: &SeparateArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let f = family(&a.family)?;
    let g = f.build(limits)?;
    let x = g.group.index_of_label(a.element.trim()).ok_or_else(|| anyhow!("no element `{}` in {f}", a.element))?;
    if x == g.group.identity() {
        bail!("the identity has no separating representation");
    }
    let (rep, img) = separating_rep(&f, &g, x, limits)?;
    r.field("family", f.to_string())
        .field("element", g.group.label(x).to_string())
        .field("case", format!("{:?}", rep.case))
        .field("size", rep.size)
        .field("generator_images", rep.generator_images)
        .field("image", img.to_string());
    Ok(())
}

fn kernel_verify_cmd(a: &KernelVerifyArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let f = family(&a.family)?;
    let k = verify_kernel_property(&f, a.n, limits)?;
    r.field("family", f.to_string())
        .field("quotient", k.quotient.to_string())
        .field("n", a.n)
        .field("order", k.order)
        .field("zassenhaus_orders", k.zassenhaus_orders.clone())
        .field("zassenhaus_trivial", k.zassenhaus_trivial)
        .field("representations", k.reps.len())
        .field("nontrivial", k.nontrivial)
        .field("separated", k.separated)
        .field("unseparated", k.unseparated.clone())
        .field("holds", k.holds())
        .outcome(Outcome::from_bool(k.holds()));
    Ok(())
}

fn characters(g: &FinGroup, p: u64, text: &str, n: usize) -> Result<Vec<Character>> {
    let k = g.generators().len();
    let alphas = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            let vals: Vec<i64> = if t == "id" {
                vec![1; k]
            } else {
                t.split(':').map(|v| v.trim().parse::<i64>()).collect::<std::result::Result<_, _>>()
                    .with_context(|| format!("bad character `{t}`"))?
            };
            if vals.len() != k {
                bail!("character `{t}` has {} values, the group has {k} generators", vals.len());
            }
            Ok(Character::from_generator_values(g, p, &vals)?)
        })
        .collect::<Result<Vec<_>>>()?;
    if alphas.len() != n {
        bail!("--n is {n} but {} characters were given", alphas.len());
    }
    Ok(alphas)
}

fn massey_setup(a: &MasseyArgs, limits: &Limits, r: &mut Report) -> Result<(FinGroup, Vec<Character>)> {
    let (d, g) = group(&a.group, limits)?;
    let p = prime_of(&d, a.p)?;
    let alphas = characters(&g, p, &a.alphas, a.n)?;
    r.field("group", d.to_string())
        .field("p", p)
        .field("n", a.n)
        .field("alphas", alphas.iter().map(|c| c.on_generators(&g).iter().map(u64::to_string).collect::<Vec<_>>().join(":")).collect::<Vec<_>>())
        .field("generators", labels(&g, g.generators()));
    Ok((g, alphas))
}

fn massey_cmd(a: &MasseyArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let (g, alphas) = massey_setup(a, limits, r)?;
    let v = dwyer_search(&g, &alphas, limits)?;
    r.field("verdict", v.status.to_string()).field("bar_count", v.bar_count).field("liftable_count", v.liftable_count);
    if let Some(w) = &v.witness {
        r.field("witness", w.clone());
    }
    if let Some(l) = &v.lift {
        r.field("lift", l.clone());
    }
    r.outcome(Outcome::from_bool(v.status != MasseyStatus::Undefined));
    Ok(())
}

fn cross_check_cmd(a: &MasseyArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let (g, alphas) = massey_setup(a, limits, r)?;
    let c = cross_check(&g, &alphas, limits)?;
    r.field("dwyer_verdict", c.dwyer.status.to_string())
        .field("cochain_verdict", c.cochain.status.to_string())
        .field("bar_count", c.dwyer.bar_count)
        .field("defining_systems", c.cochain.defining_systems)
        .field("liftable_count", c.dwyer.liftable_count)
        .field("vanishing_systems", c.cochain.vanishing_systems)
        .field("correspondence_ok", c.correspondence_ok)
        .field("agree", c.agree())
        .outcome(Outcome::from_bool(c.agree()));
    Ok(())
}

fn embed_cmd(a: &EmbedArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    if let Some(kind) = a.kind {
        let kind = match kind {
            EmbedKind::Cyclic => MinimalKind::CyclicPSquared,
            EmbedKind::Mp3 => MinimalKind::Mp3,
        };
        let e = minimal_embedding(kind, a.p, limits)?;
        r.field("source", e.family.to_string())
            .field("size", e.size)
            .field("generator_images", e.generator_images.clone())
            .field("group_order", e.group_order)
            .field("group_exponent", e.group_exponent)
            .field("is_homomorphism", e.is_homomorphism)
            .field("injective", e.injective)
            .field("exponent_below", e.exponent_below)
            .field("minimal", e.minimal())
            .outcome(Outcome::from_bool(e.minimal()));
    } else {
        let case: PowerCase = a.case.expect("clap requires --kind or --case").to_string().parse()?;
        let c = power_character_rep(a.p, a.s, a.k, case, limits)?;
        r.field("case", format!("{:?}", c.case))
            .field("source", c.family.to_string())
            .field("size", c.size)
            .field("generator_images", c.generator_images.clone())
            .field("character", c.character.clone())
            .field("is_homomorphism", c.is_homomorphism)
            .field("superdiagonal_matches", c.superdiagonal_matches)
            .outcome(Outcome::from_bool(c.is_homomorphism && c.superdiagonal_matches));
    }
    Ok(())
}

fn appendix_cmd(a: &AppendixArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let targets = a
        .target
        .iter()
        .map(|t| Ok(Target { name: t.clone(), group: group(t, limits)?.1 }))
        .collect::<Result<Vec<_>>>()?;
    let inst = appendixlab::build_instance(a.p, a.big_n, targets)?;
    let v = appendixlab::violates_kernel_property(&inst, a.n, limits)?;
    r.field("p", a.p)
        .field("N", a.big_n)
        .field("n", a.n)
        .field("targets", a.target.clone())
        .field("relators", inst.presentation.relators.len())
        .field("witness_commutator", appendixlab::commutator_12(a.big_n).to_string());
    if let Some(d2) = &v.degree2 {
        r.field("not_in_g3_by_rank", d2.by_rank)
            .field("not_in_g3_by_functional", d2.by_functional)
            .field("relator_rank", d2.relator_rank);
    }
    if let Some(k) = &v.kernel {
        for t in &k.per_target {
            let total = t.total_homs.map_or("over budget".to_string(), |c| c.to_string());
            r.field(&format!("target.{}.separating_homs", t.target), t.separating.len())
                .field(&format!("target.{}.total_homs", t.target), total);
        }
        r.field("in_kernel_filtration", k.in_kernel_filtration());
    }
    let n = a.n;
    let verdict = match v.verdict {
        KernelVerdict::Violated => format!("kernel {n}-unipotent property FAILS"),
        KernelVerdict::NotViolated => format!("kernel {n}-unipotent property not refuted"),
        KernelVerdict::Inconclusive => "inconclusive: N does not exceed every target order".to_string(),
    };
    r.field("verdict", verdict).outcome(Outcome::from_bool(v.verdict == KernelVerdict::Violated));
    Ok(())
}

fn compare_cmd(a: &CompareArgs, limits: &Limits, r: &mut Report) -> Result<()> {
    let (d, g) = group(&a.group, limits)?;
    let p = prime_of(&d, a.p)?;
    let c = compare_filtrations(&g, p, a.max_level, a.kernel, limits)?;
    r.field("group", d.to_string())
        .field("p", p)
        .field(
            "pcentral_in_zassenhaus",
            c.pcentral_in_zassenhaus.iter().map(|(i, b)| format!("{i} {b}")).collect::<Vec<_>>(),
        )
        .field("zassenhaus_p1_in_pcentral_3", c.zassenhaus_p1_in_pcentral_3);
    if let Some(e) = c.level3_equal {
        r.field("level3_equal", e);
    }
    if let Some((x, y)) = c.kernel_chain {
        r.field("zassenhaus_in_kernel", x).field("kernel_in_pcentral_3", y);
    }
    r.field("zassenhaus_orders", c.zassenhaus_orders.clone())
        .field("pcentral_orders", c.pcentral_orders.clone())
        .field("all_hold", c.all_hold())
        .outcome(Outcome::from_bool(c.all_hold()));
    Ok(())
}
