//! Parametric finite groups `(∏ Z/p^a) ⋊ Z/p^b` with an action `τ ↦ τ^r`:
//! rigid-field quotients, `M_{p,k,s}`, rank-2 Demushkin quotients, cyclic and
//! homocyclic groups. Also the unipotent representations built from
//! `B = 1 + X` and the conjugators of [`crate::unimat::solve_conjugation`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fingrp::{self, closure, extend_homomorphism, ConcreteGroup, FinGroup, GroupElement};
use crate::freewords::FiltrationKind;
use crate::residue::{is_prime, RingSpec};
use crate::unimat::{self, embed_top_left, ConjugationTarget, UniMat};

/// Law of `(Z/inner_mod)^m ⋊ Z/outer_mod` with `σ τ σ⁻¹ = τ^r`:
/// `(u, a)(u', a') = (u + r^a u', a + a')`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemiLaw {
    pub m: usize,
    pub inner_mod: u64,
    pub outer_mod: u64,
    pub r: u64,
}

impl SemiLaw {
    pub fn new(m: usize, inner_mod: u64, outer_mod: u64, r: i64) -> Result<Arc<SemiLaw>> {
        if inner_mod == 0 || outer_mod == 0 {
            return Err(Error::BadParams("moduli must be positive".into()));
        }
        let r = r.rem_euclid(inner_mod as i64) as u64;
        let law = SemiLaw { m, inner_mod, outer_mod, r: if inner_mod == 1 { 0 } else { r } };
        if inner_mod > 1 {
            if num_integer::gcd(r, inner_mod) != 1 {
                return Err(Error::BadParams(format!("{r} is not a unit mod {inner_mod}")));
            }
            if law.r_pow(outer_mod) != 1 {
                return Err(Error::BadParams(format!(
                    "r = {r} does not satisfy r^{outer_mod} = 1 mod {inner_mod}"
                )));
            }
        }
        Ok(Arc::new(law))
    }

    fn r_pow(&self, e: u64) -> u64 {
        let m = self.inner_mod as u128;
        let (mut base, mut e, mut acc) = (self.r as u128 % m, e, 1u128 % m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u64
    }

    pub fn order(&self) -> u128 {
        (self.inner_mod as u128).pow(self.m as u32) * self.outer_mod as u128
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemiElem {
    law: Arc<SemiLaw>,
    pub inner: Vec<u64>,
    pub outer: u64,
}

impl SemiElem {
    pub fn identity(law: &Arc<SemiLaw>) -> SemiElem {
        SemiElem { law: law.clone(), inner: vec![0; law.m], outer: 0 }
    }

    /// `τ_i`, 0-based.
    pub fn tau(law: &Arc<SemiLaw>, i: usize) -> SemiElem {
        let mut e = SemiElem::identity(law);
        e.inner[i] = 1 % law.inner_mod;
        e
    }

    pub fn sigma(law: &Arc<SemiLaw>) -> SemiElem {
        let mut e = SemiElem::identity(law);
        e.outer = 1 % law.outer_mod;
        e
    }

    pub fn is_identity(&self) -> bool {
        self.outer == 0 && self.inner.iter().all(|&x| x == 0)
    }
}

impl GroupElement for SemiElem {
    fn op(&self, other: &Self) -> Self {
        let l = &self.law;
        let ra = l.r_pow(self.outer) as u128;
        let m = l.inner_mod as u128;
        let inner = self
            .inner
            .iter()
            .zip(&other.inner)
            .map(|(&u, &v)| ((u as u128 + ra * v as u128) % m) as u64)
            .collect();
        SemiElem { law: l.clone(), inner, outer: (self.outer + other.outer) % l.outer_mod }
    }

    fn inv(&self) -> Self {
        let l = &self.law;
        let neg_a = (l.outer_mod - self.outer) % l.outer_mod;
        let ra = l.r_pow(neg_a) as u128;
        let m = l.inner_mod as u128;
        let inner = self.inner.iter().map(|&u| ((m - (ra * u as u128) % m) % m) as u64).collect();
        SemiElem { law: l.clone(), inner, outer: neg_a }
    }
}

impl fmt::Display for SemiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, u) in self.inner.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, ";{})", self.outer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RigidVariant {
    /// `σ τ σ⁻¹ = τ^{1+p^k}`.
    Split { k: u32 },
    /// Trivial outer factor.
    Direct,
    /// `σ τ σ⁻¹ = τ^{-(1+2^k)}`, `p = 2`.
    NegSplit { k: u32 },
    /// `σ τ σ⁻¹ = τ^{-1}`, `p = 2`.
    Inv,
}

/// Relation `y x y⁻¹ = x^r` of a rank-2 Demushkin group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemushkinType {
    /// `r = 1`.
    Type1,
    /// `r = 1 + q`, `q = p^k`.
    Type2 { k: u32 },
    /// `r = -1`, `p = 2`.
    Type3,
    /// `r = -(1 + m)`, `m = 2^k`, `p = 2`.
    Type4 { k: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(Z/p^{s+1})^m ⋊ Z/p^{s+1}` (outer factor trivial for `Direct`).
    Rigid { p: u64, s: u32, m: usize, variant: RigidVariant },
    /// `Z/p^{s+1} ⋊ Z/p^{s+1-k}`, `σ τ σ⁻¹ = τ^{1+p^k}`.
    Mpks { p: u64, k: u32, s: u32 },
    /// `Z/p^s ⋊ Z/p^s` with `x` inner, `y` outer.
    Demushkin { p: u64, s: u32, ty: DemushkinType },
    Cyclic { n: u64 },
    /// `(Z/modulus)^rank`.
    Homocyclic { modulus: u64, rank: usize },
}

fn ppow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or_else(|| Error::TooLarge(format!("{p}^{e}")))
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        let need_prime = |p: u64| {
            if is_prime(p) {
                Ok(())
            } else {
                Err(Error::BadParams(format!("{p} is not prime")))
            }
        };
        match *self {
            Family::Rigid { p, variant, .. } => {
                need_prime(p)?;
                match variant {
                    RigidVariant::Split { k: 0 } | RigidVariant::NegSplit { k: 0 } => {
                        Err(Error::BadParams("k must be at least 1".into()))
                    }
                    RigidVariant::NegSplit { .. } | RigidVariant::Inv if p != 2 => {
                        Err(Error::BadParams("negsplit and inv variants need p = 2".into()))
                    }
                    _ => Ok(()),
                }
            }
            Family::Mpks { p, k, s } => {
                need_prime(p)?;
                if k == 0 || k > s {
                    return Err(Error::BadParams(format!("M_(p,k,s) needs 1 <= k <= s, got k={k}, s={s}")));
                }
                Ok(())
            }
            Family::Demushkin { p, s, ty } => {
                need_prime(p)?;
                if s == 0 {
                    return Err(Error::BadParams("s must be at least 1".into()));
                }
                match ty {
                    DemushkinType::Type2 { k } if k == 0 || (p == 2 && k < 2) => {
                        Err(Error::BadParams("type 2 needs q = p^k >= p (q >= 4 when p = 2)".into()))
                    }
                    DemushkinType::Type3 if p != 2 => Err(Error::BadParams("type 3 needs p = 2".into())),
                    DemushkinType::Type4 { k } if p != 2 || k < 2 => {
                        Err(Error::BadParams("type 4 needs p = 2 and m = 2^k >= 4".into()))
                    }
                    _ => Ok(()),
                }
            }
            Family::Cyclic { n: 0 } => Err(Error::BadParams("cyclic order must be positive".into())),
            Family::Homocyclic { modulus: 0, .. } => {
                Err(Error::BadParams("modulus must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            Family::Rigid { p, .. } | Family::Mpks { p, .. } | Family::Demushkin { p, .. } => Some(p),
            _ => None,
        }
    }

    pub fn law(&self) -> Result<Arc<SemiLaw>> {
        self.validate()?;
        match *self {
            Family::Rigid { p, s, m, variant } => {
                let q = ppow(p, s + 1)?;
                match variant {
                    RigidVariant::Direct => SemiLaw::new(m, q, 1, 1),
                    RigidVariant::Split { k } => SemiLaw::new(m, q, q, 1 + (ppow(p, k)? % q) as i64),
                    RigidVariant::NegSplit { k } => SemiLaw::new(m, q, q, -(1 + (ppow(2, k)? % q) as i64)),
                    RigidVariant::Inv => SemiLaw::new(m, q, q, -1),
                }
            }
            Family::Mpks { p, k, s } => SemiLaw::new(1, ppow(p, s + 1)?, ppow(p, s + 1 - k)?, 1 + ppow(p, k)? as i64),
            Family::Demushkin { p, s, ty } => {
                let q = ppow(p, s)?;
                let r = match ty {
                    DemushkinType::Type1 => 1,
                    DemushkinType::Type2 { k } => 1 + (ppow(p, k)? % q) as i64,
                    DemushkinType::Type3 => -1,
                    DemushkinType::Type4 { k } => -(1 + (ppow(2, k)? % q) as i64),
                };
                SemiLaw::new(1, q, q, r)
            }
            Family::Cyclic { n } => SemiLaw::new(1, n, 1, 1),
            Family::Homocyclic { modulus, rank } => SemiLaw::new(rank, modulus, 1, 1),
        }
    }

    /// Conjugation target realizing the action of `σ` on `B`, if any.
    pub fn action_target(&self) -> Option<ConjugationTarget> {
        match *self {
            Family::Rigid { variant, .. } => match variant {
                RigidVariant::Split { k } => Some(ConjugationTarget::PowerOnePlusQ { k }),
                RigidVariant::NegSplit { k } => Some(ConjugationTarget::NegPowerOnePlusQ { k }),
                RigidVariant::Inv => Some(ConjugationTarget::Inverse),
                RigidVariant::Direct => None,
            },
            Family::Mpks { k, .. } => Some(ConjugationTarget::PowerOnePlusQ { k }),
            Family::Demushkin { ty, .. } => match ty {
                DemushkinType::Type1 => None,
                DemushkinType::Type2 { k } => Some(ConjugationTarget::PowerOnePlusQ { k }),
                DemushkinType::Type3 => Some(ConjugationTarget::Inverse),
                DemushkinType::Type4 { k } => Some(ConjugationTarget::NegPowerOnePlusQ { k }),
            },
            Family::Cyclic { .. } | Family::Homocyclic { .. } => None,
        }
    }

    /// Closes the group; generators are `τ_1, …, τ_m`, then `σ` when the outer
    /// factor is nontrivial.
    pub fn build(&self, limits: &Limits) -> Result<ConcreteGroup<SemiElem>> {
        let law = self.law()?;
        if law.order() > limits.group_cap as u128 {
            return Err(Error::TooLarge(format!("{self} has order {}", law.order())));
        }
        let mut gens = Vec::new();
        if law.inner_mod > 1 {
            gens.extend((0..law.m).map(|i| SemiElem::tau(&law, i)));
        }
        if law.outer_mod > 1 {
            gens.push(SemiElem::sigma(&law));
        }
        closure(&gens, SemiElem::identity(&law), limits.group_cap)
    }

    /// The quotient by the level-`n` Zassenhaus term. Rigid and Demushkin
    /// families are re-parameterized from `n`; other families are returned
    /// unchanged.
    pub fn at_level(&self, n: usize) -> Result<Family> {
        if n < 2 {
            return Err(Error::BadParams("kernel levels start at 2".into()));
        }
        let e = |p: u64| {
            let mut e = 0u32;
            while (p as u128).pow(e) < n as u128 {
                e += 1;
            }
            e
        };
        Ok(match *self {
            Family::Rigid { p, m, variant, .. } => Family::Rigid { p, s: e(p) - 1, m, variant },
            Family::Demushkin { p, ty, .. } => Family::Demushkin { p, s: e(p), ty },
            other => other,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Rigid { p, s, m, variant } => {
                write!(f, "rigid:p={p},s={s},m={m},")?;
                match variant {
                    RigidVariant::Split { k } => write!(f, "k={k},variant=split"),
                    RigidVariant::Direct => write!(f, "variant=direct"),
                    RigidVariant::NegSplit { k } => write!(f, "k={k},variant=negsplit"),
                    RigidVariant::Inv => write!(f, "variant=inv"),
                }
            }
            Family::Mpks { p, k, s } => write!(f, "mpks:p={p},k={k},s={s}"),
            Family::Demushkin { p, s, ty } => match ty {
                DemushkinType::Type1 => write!(f, "demushkin:type=1,p={p},s={s}"),
                DemushkinType::Type2 { k } => write!(f, "demushkin:type=2,p={p},s={s},q={}", p.pow(k)),
                DemushkinType::Type3 => write!(f, "demushkin:type=3,p={p},s={s}"),
                DemushkinType::Type4 { k } => write!(f, "demushkin:type=4,p={p},s={s},m={}", 1u64 << k),
            },
            Family::Cyclic { n } => write!(f, "cyclic:{n}"),
            Family::Homocyclic { modulus, rank } => {
                write!(f, "abelian:{}", vec![modulus.to_string(); rank].join("x"))
            }
        }
    }
}

fn kv_params(body: &str) -> Result<std::collections::BTreeMap<String, String>> {
    body.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{t}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn exact_log(p: u64, q: u64) -> Result<u32> {
    let mut k = 0;
    let mut x = 1u64;
    while x < q {
        x = x.checked_mul(p).ok_or_else(|| Error::Parse(format!("{q} is not a power of {p}")))?;
        k += 1;
    }
    if x == q {
        Ok(k)
    } else {
        Err(Error::Parse(format!("{q} is not a power of {p}")))
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        let (head, body) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("bad family `{s}`")))?;
        let kv = || kv_params(body);
        let num = |m: &std::collections::BTreeMap<String, String>, key: &str| -> Result<u64> {
            m.get(key)
                .ok_or_else(|| Error::Parse(format!("`{s}` is missing `{key}`")))?
                .parse()
                .map_err(|_| Error::Parse(format!("`{key}` in `{s}` is not a number")))
        };
        let fam = match head.trim() {
            "rigid" => {
                let m = kv()?;
                let p = num(&m, "p")?;
                let variant = match m.get("variant").map(String::as_str).unwrap_or("split") {
                    "split" => RigidVariant::Split { k: num(&m, "k")? as u32 },
                    "direct" => RigidVariant::Direct,
                    "negsplit" => RigidVariant::NegSplit { k: num(&m, "k")? as u32 },
                    "inv" => RigidVariant::Inv,
                    v => return Err(Error::Parse(format!("unknown variant `{v}`"))),
                };
                Family::Rigid { p, s: num(&m, "s")? as u32, m: num(&m, "m").unwrap_or(1) as usize, variant }
            }
            "mpks" => {
                let m = kv()?;
                Family::Mpks { p: num(&m, "p")?, k: num(&m, "k")? as u32, s: num(&m, "s")? as u32 }
            }
            "mp3" => {
                let m = kv()?;
                Family::Mpks { p: num(&m, "p")?, k: 1, s: 1 }
            }
            "demushkin" => {
                let m = kv()?;
                let p = num(&m, "p")?;
                let ty = match num(&m, "type")? {
                    1 => DemushkinType::Type1,
                    2 => DemushkinType::Type2 { k: exact_log(p, num(&m, "q")?)? },
                    3 => DemushkinType::Type3,
                    4 => DemushkinType::Type4 { k: exact_log(2, num(&m, "m")?)? },
                    t => return Err(Error::Parse(format!("unknown Demushkin type {t}"))),
                };
                Family::Demushkin { p, s: num(&m, "s")? as u32, ty }
            }
            "cyclic" => Family::Cyclic {
                n: body.trim().parse().map_err(|_| Error::Parse(format!("bad cyclic order in `{s}`")))?,
            },
            "abelian" => {
                let parts: Vec<u64> = body
                    .split('x')
                    .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad factor in `{s}`"))))
                    .collect::<Result<_>>()?;
                if parts.is_empty() || parts.iter().any(|&q| q != parts[0]) {
                    return Err(Error::Parse(format!("`{s}` is not homocyclic")));
                }
                Family::Homocyclic { modulus: parts[0], rank: parts.len() }
            }
            h => return Err(Error::Parse(format!("unknown family `{h}`"))),
        };
        fam.validate()?;
        Ok(fam)
    }
}

/// Which branch of the separating construction was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeparationCase {
    /// Outer component nonzero: `σ ↦ B^c`, inner generators trivial, where
    /// `c` makes the image order equal the outer modulus.
    Outer,
    /// Outer component zero; inner coordinate `i` (0-based) is the first
    /// nonzero one: `τ_i ↦ B^c` (same scaling), other `τ` trivial, `σ ↦ A`.
    Inner(usize),
}

/// A homomorphism into `U_size(F_p)` given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingRep {
    pub case: SeparationCase,
    pub size: usize,
    pub generator_images: Vec<UniMat>,
}

/// `p^t = max(inner, outer)` determines the target `U_{p^{t-1}+1}(F_p)`.
fn separation_params(law: &SemiLaw, p: u64) -> Result<(u32, usize)> {
    let top = law.inner_mod.max(law.outer_mod);
    let t = exact_log(p, top).map_err(|_| Error::BadParams(format!("{top} is not a power of {p}")))?;
    let s = t.saturating_sub(1);
    Ok((s, ppow(p, s)? as usize + 1))
}

/// Image of an element `(u, a) = ∏ τ_i^{u_i} · σ^a` from generator images.
pub fn image_of(e: &SemiElem, rep: &SeparatingRep) -> UniMat {
    let l = &e.law;
    let mut it = rep.generator_images.iter();
    let mut acc = UniMat::identity(rep.size, rep.generator_images[0].spec());
    if l.inner_mod > 1 {
        for &u in &e.inner {
            acc = acc.mul(&it.next().unwrap().pow(u as i64)).unwrap();
        }
    }
    if l.outer_mod > 1 {
        acc = acc.mul(&it.next().unwrap().pow(e.outer as i64)).unwrap();
    }
    acc
}

fn rep_for_case(family: &Family, law: &SemiLaw, case: SeparationCase) -> Result<SeparatingRep> {
    let p = family
        .prime()
        .ok_or_else(|| Error::BadParams(format!("{family} has no distinguished prime")))?;
    let (s, size) = separation_params(law, p)?;
    let spec = RingSpec::prime_field(p)?;
    let b = UniMat::b(size, spec);
    let id = UniMat::identity(size, spec);
    let top = law.inner_mod.max(law.outer_mod);
    let mut images = Vec::new();
    if law.inner_mod > 1 {
        let bi = b.pow((top / law.inner_mod) as i64);
        for i in 0..law.m {
            images.push(if case == SeparationCase::Inner(i) { bi.clone() } else { id.clone() });
        }
    }
    if law.outer_mod > 1 {
        images.push(match case {
            SeparationCase::Outer => b.pow((top / law.outer_mod) as i64),
            SeparationCase::Inner(_) => match family.action_target() {
                Some(t) => unimat::solve_conjugation(t, p, s)?,
                None => id.clone(),
            },
        });
    }
    Ok(SeparatingRep { case, size, generator_images: images })
}

/// Checks that generator images define a homomorphism: on every pair of
/// elements when the group is small, otherwise on the defining relations.
pub fn verify_rep(g: &ConcreteGroup<SemiElem>, rep: &SeparatingRep, limits: &Limits) -> Result<bool> {
    if rep.generator_images.is_empty() {
        return Ok(true);
    }
    let spec = rep.generator_images[0].spec();
    if g.order() <= limits.exhaustive_check {
        return Ok(extend_homomorphism(&g.group, &rep.generator_images, UniMat::identity(rep.size, spec), |a, b| {
            a.mul(b).unwrap()
        })
        .is_some());
    }
    let law = &g.element(0).law;
    let taus: &[UniMat] = if law.inner_mod > 1 { &rep.generator_images[..law.m] } else { &[] };
    let sigma = (law.outer_mod > 1).then(|| rep.generator_images.last().unwrap());
    let mut ok = taus.iter().all(|t| t.pow(law.inner_mod as i64).is_identity());
    for (i, a) in taus.iter().enumerate() {
        for b in &taus[i + 1..] {
            ok &= a.mul(b)? == b.mul(a)?;
        }
    }
    if let Some(sg) = sigma {
        ok &= sg.pow(law.outer_mod as i64).is_identity();
        for t in taus {
            ok &= sg.mul(t)?.mul(&sg.inverse())? == t.pow(law.r as i64);
        }
    }
    Ok(ok)
}

/// The case used for a nontrivial element.
pub fn separation_case(e: &SemiElem) -> Result<SeparationCase> {
    if e.outer != 0 {
        return Ok(SeparationCase::Outer);
    }
    e.inner
        .iter()
        .position(|&x| x != 0)
        .map(SeparationCase::Inner)
        .ok_or_else(|| Error::NoWitness("the identity is in every kernel".into()))
}

/// A representation `H → U_{p^s+1}(F_p)` not killing `u`, verified to be a homomorphism.
pub fn separating_rep(
    family: &Family,
    g: &ConcreteGroup<SemiElem>,
    u: u32,
    limits: &Limits,
) -> Result<(SeparatingRep, UniMat)> {
    let e = g.element(u);
    let case = separation_case(e)?;
    let rep = rep_for_case(family, &e.law, case)?;
    if !verify_rep(g, &rep, limits)? {
        return Err(Error::BadParams(format!("separating representation for {e} is not a homomorphism")));
    }
    let img = image_of(e, &rep);
    debug_assert!(!img.is_identity());
    Ok((rep, img))
}

/// Outcome of checking the kernel n-unipotent property on a finite quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub quotient: Family,
    pub n: usize,
    pub order: usize,
    pub zassenhaus_orders: Vec<usize>,
    /// Level `n` of the Zassenhaus series of the quotient is trivial.
    pub zassenhaus_trivial: bool,
    /// Distinct separating representations used (all verified homomorphisms).
    pub reps: Vec<SeparatingRep>,
    pub nontrivial: usize,
    pub separated: usize,
    /// Labels of elements no representation separated.
    pub unseparated: Vec<String>,
}

impl KernelReport {
    pub fn holds(&self) -> bool {
        self.zassenhaus_trivial && self.separated == self.nontrivial
    }
}

/// Checks `G_(n) = ⋂ ker(G → U_n(F_p))` on the level-`n` quotient of a family.
pub fn verify_kernel_property(family: &Family, n: usize, limits: &Limits) -> Result<KernelReport> {
    let quotient = family.at_level(n)?;
    let g = quotient.build(limits)?;
    let order = g.order();
    let p = quotient.prime();
    let (zassenhaus_orders, zassenhaus_trivial) = match p {
        Some(p) => {
            let z = fingrp::series(&g.group, FiltrationKind::Zassenhaus { p }, n)?;
            let triv = z.level(n).is_some_and(|l| l.is_trivial());
            (z.orders(), triv)
        }
        None if order == 1 => (vec![1], true),
        None => return Err(Error::BadParams(format!("{quotient} has no distinguished prime"))),
    };
    let mut reps: Vec<SeparatingRep> = Vec::new();
    let mut separated = 0;
    let mut unseparated = Vec::new();
    if order > 1 {
        let law = g.element(0).law.clone();
        for u in 1..order as u32 {
            let e = g.element(u);
            let case = separation_case(e)?;
            let rep = match reps.iter().find(|r| r.case == case) {
                Some(r) => r.clone(),
                None => {
                    let r = rep_for_case(&quotient, &law, case)?;
                    if !verify_rep(&g, &r, limits)? {
                        return Err(Error::BadParams(format!("{case:?} representation is not a homomorphism")));
                    }
                    reps.push(r.clone());
                    r
                }
            };
            if rep.size > n {
                return Err(Error::BadSize(format!("representation of size {} exceeds n = {n}", rep.size)));
            }
            if !embed_top_left(&image_of(e, &rep), n)?.is_identity() {
                separated += 1;
            } else {
                unseparated.push(e.to_string());
            }
        }
    }
    Ok(KernelReport {
        quotient,
        n,
        order,
        zassenhaus_orders,
        zassenhaus_trivial,
        reps,
        nontrivial: order.saturating_sub(1),
        separated,
        unseparated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerCase {
    /// Cyclic of order `p^{s+1}`, generator `↦ B`.
    Case0,
    /// `M_{p,k,s}`: `τ ↦ B`, `σ ↦ A`.
    Case1,
    /// Cyclic of order `p^{s+1}`, generator `↦ B` (same matrices as Case 0).
    Case2,
}

impl FromStr for PowerCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "case0" => Ok(PowerCase::Case0),
            "1" | "case1" => Ok(PowerCase::Case1),
            "2" | "case2" => Ok(PowerCase::Case2),
            _ => Err(Error::Parse(format!("unknown case `{s}`"))),
        }
    }
}

/// A representation `ρ` into `U_{p^s+1}(F_p)` whose superdiagonal entries all
/// equal a prescribed character `χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerCharacterRep {
    pub case: PowerCase,
    pub family: Family,
    pub size: usize,
    pub generator_images: Vec<UniMat>,
    /// `χ` on the generators.
    pub character: Vec<u64>,
    pub is_homomorphism: bool,
    /// `ρ_{i,i+1}(g) = χ(g)` for every `i` and every element `g`.
    pub superdiagonal_matches: bool,
}

pub fn power_character_rep(p: u64, s: u32, k: u32, case: PowerCase, limits: &Limits) -> Result<PowerCharacterRep> {
    if !is_prime(p) || s == 0 {
        return Err(Error::BadParams(format!("need a prime p and s >= 1, got p={p}, s={s}")));
    }
    let spec = RingSpec::prime_field(p)?;
    let size = ppow(p, s)? as usize + 1;
    let b = UniMat::b(size, spec);
    let (family, images, character) = match case {
        PowerCase::Case0 | PowerCase::Case2 => (Family::Cyclic { n: ppow(p, s + 1)? }, vec![b], vec![1]),
        PowerCase::Case1 => {
            if k == 0 || k > s {
                return Err(Error::BadParams(format!("case 1 needs 1 <= k <= s, got k={k}")));
            }
            let a = unimat::solve_conjugation(ConjugationTarget::PowerOnePlusQ { k }, p, s)?;
            (Family::Mpks { p, k, s }, vec![b, a], vec![1, 0])
        }
    };
    let g = family.build(limits)?;
    let rho = extend_homomorphism(&g.group, &images, UniMat::identity(size, spec), |x, y| x.mul(y).unwrap());
    let chi = extend_homomorphism(&g.group, &character, 0u64, |x, y| (x + y) % p);
    let (is_homomorphism, superdiagonal_matches) = match (&rho, &chi) {
        (Some(rho), Some(chi)) => (
            true,
            rho.iter()
                .zip(chi)
                .all(|(m, &c)| (0..size - 1).all(|i| m.get(i, i + 1).residue() == Some(c))),
        ),
        _ => (false, false),
    };
    Ok(PowerCharacterRep {
        case,
        family,
        size,
        generator_images: images,
        character,
        is_homomorphism,
        superdiagonal_matches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinimalKind {
    CyclicPSquared,
    Mp3,
}

impl FromStr for MinimalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cyclic" | "cyclic-p2" | "zp2" => Ok(MinimalKind::CyclicPSquared),
            "mp3" => Ok(MinimalKind::Mp3),
            _ => Err(Error::Parse(format!("unknown embedding source `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub family: Family,
    pub size: usize,
    pub generator_images: Vec<UniMat>,
    pub group_order: usize,
    pub group_exponent: u64,
    pub is_homomorphism: bool,
    pub injective: bool,
    /// Exponent of `U_p(F_p)` from an exhaustive scan.
    pub exponent_below: u64,
}

impl EmbeddingReport {
    /// Embeds into `U_{p+1}` and cannot embed into `U_p`.
    pub fn minimal(&self) -> bool {
        self.is_homomorphism && self.injective && self.group_exponent > self.exponent_below
    }
}

pub fn minimal_embedding(kind: MinimalKind, p: u64, limits: &Limits) -> Result<EmbeddingReport> {
    if !is_prime(p) || p == 2 {
        return Err(Error::BadParams(format!("need an odd prime, got {p}")));
    }
    let spec = RingSpec::prime_field(p)?;
    let size = p as usize + 1;
    let b = UniMat::b(size, spec);
    let (family, images) = match kind {
        MinimalKind::CyclicPSquared => (Family::Cyclic { n: p * p }, vec![b]),
        MinimalKind::Mp3 => {
            let a = unimat::solve_conjugation(ConjugationTarget::PowerOnePlusQ { k: 1 }, p, 1)?;
            (Family::Mpks { p, k: 1, s: 1 }, vec![b, a])
        }
    };
    let g = family.build(limits)?;
    let rho = extend_homomorphism(&g.group, &images, UniMat::identity(size, spec), |x, y| x.mul(y).unwrap());
    let (is_homomorphism, injective) = match &rho {
        Some(imgs) => {
            let distinct: std::collections::HashSet<&UniMat> = imgs.iter().collect();
            (true, distinct.len() == g.order())
        }
        None => (false, false),
    };
    Ok(EmbeddingReport {
        family,
        size,
        generator_images: images,
        group_order: g.order(),
        group_exponent: g.group.exponent(),
        is_homomorphism,
        injective,
        exponent_below: unimat::exponent_of_unitriangular(p as usize, p)?,
    })
}

/// A finite group named on the command line or in tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Trivial,
    Family(Family),
    /// Direct product of cyclic groups of the given orders.
    Abelian(Vec<u64>),
    /// `U_n` over a finite ring.
    Unitriangular { n: usize, spec: RingSpec },
}

impl GroupDescriptor {
    pub fn build(&self, limits: &Limits) -> Result<FinGroup> {
        match self {
            GroupDescriptor::Trivial => Ok(FinGroup::trivial()),
            GroupDescriptor::Family(f) => Ok(f.build(limits)?.group),
            GroupDescriptor::Abelian(orders) => {
                let mut factors = orders.iter().map(|&q| Family::Cyclic { n: q }.build(limits).map(|c| c.group));
                let mut g = factors.next().transpose()?.unwrap_or_else(FinGroup::trivial);
                for c in factors {
                    g = g.direct_product(&c?)?;
                }
                Ok(g)
            }
            GroupDescriptor::Unitriangular { n, spec } => Ok(fingrp::unitriangular_group(*n, *spec, limits.group_cap)?.group),
        }
    }

    /// The prime the group is a `p`-group for, when evident from the descriptor.
    pub fn prime(&self) -> Option<u64> {
        match self {
            GroupDescriptor::Trivial => None,
            GroupDescriptor::Family(f) => f.prime().or_else(|| match *f {
                Family::Cyclic { n } | Family::Homocyclic { modulus: n, .. } => smallest_prime_factor(n),
                _ => None,
            }),
            GroupDescriptor::Abelian(v) => v.iter().find_map(|&q| smallest_prime_factor(q)),
            GroupDescriptor::Unitriangular { spec, .. } => spec.prime(),
        }
    }
}

fn smallest_prime_factor(n: u64) -> Option<u64> {
    (2..=n).find(|d| n.is_multiple_of(*d))
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Trivial => write!(f, "trivial"),
            GroupDescriptor::Family(fam) => write!(f, "{fam}"),
            GroupDescriptor::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "abelian:{}", parts.join("x"))
            }
            GroupDescriptor::Unitriangular { n, spec } => match spec {
                RingSpec::Residue { p, r: 1 } => write!(f, "u{n}f{p}"),
                _ => write!(f, "u:n={n},ring={spec}"),
            },
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trivial" {
            return Ok(GroupDescriptor::Trivial);
        }
        if let Some(body) = s.strip_prefix("u:") {
            let kv = kv_params(body)?;
            let n = kv
                .get("n")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("`{s}` needs n=<size>")))?;
            let spec: RingSpec = kv.get("ring").ok_or_else(|| Error::Parse(format!("`{s}` needs ring=")))?.parse()?;
            return Ok(GroupDescriptor::Unitriangular { n, spec });
        }
        if let Some(rest) = s.strip_prefix('u') {
            if let Some((n, p)) = rest.split_once('f') {
                if let (Ok(n), Ok(p)) = (n.parse::<usize>(), p.parse::<u64>()) {
                    return Ok(GroupDescriptor::Unitriangular { n, spec: RingSpec::prime_field(p)? });
                }
            }
        }
        if let Some(body) = s.strip_prefix("abelian:") {
            let parts: Vec<u64> = body
                .split('x')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad factor in `{s}`"))))
                .collect::<Result<_>>()?;
            if parts.contains(&0) {
                return Err(Error::Parse(format!("zero factor in `{s}`")));
            }
            return Ok(GroupDescriptor::Abelian(parts));
        }
        Ok(GroupDescriptor::Family(s.parse()?))
    }
}
