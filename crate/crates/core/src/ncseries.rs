//! Truncated power series in non-commuting variables `X_1, …, X_d` and the
//! Magnus expansion `x_i ↦ 1 + X_i` of free-group words.

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::freewords::Word;
use crate::residue::{RingElem, RingSpec};

/// A finite sequence of 1-based generator indices, labelling the monomial
/// `X_{i_1} ⋯ X_{i_k}`. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<u16>);

impl MultiIndex {
    pub fn new(entries: Vec<u16>) -> Self {
        MultiIndex(entries)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn entries(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest entry, 0 for the empty index.
    pub fn height(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// Entries `from..to` (0-based, half open).
    pub fn slice(&self, from: usize, to: usize) -> MultiIndex {
        MultiIndex(self.0[from..to].to_vec())
    }

    /// All indices of height `d` and length exactly `k`, in lexicographic order.
    pub fn all_of_length(d: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (1..=d as u16).map(move |g| {
                        let mut v = m.0.clone();
                        v.push(g);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for MultiIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(MultiIndex::empty());
        }
        t.split(',')
            .map(|x| {
                x.trim()
                    .parse::<u16>()
                    .ok()
                    .filter(|&g| g > 0)
                    .ok_or_else(|| Error::Parse(format!("bad multi-index `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

/// `Σ_I c_I X_I` with `|I| ≤ cutoff`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCSeries {
    d: usize,
    cutoff: usize,
    spec: RingSpec,
    coeffs: BTreeMap<MultiIndex, RingElem>,
}

impl NCSeries {
    pub fn zero(d: usize, cutoff: usize, spec: RingSpec) -> Self {
        NCSeries { d, cutoff, spec, coeffs: BTreeMap::new() }
    }

    pub fn one(d: usize, cutoff: usize, spec: RingSpec) -> Self {
        let mut s = NCSeries::zero(d, cutoff, spec);
        s.add_term(MultiIndex::empty(), spec.one());
        s
    }

    /// `1 + X_g`.
    pub fn generator(d: usize, cutoff: usize, spec: RingSpec, g: u16) -> Result<Self> {
        if g == 0 || g as usize > d {
            return Err(Error::BadWord(format!("generator x{g} outside 1..={d}")));
        }
        let mut s = NCSeries::one(d, cutoff, spec);
        s.add_term(MultiIndex::new(vec![g]), spec.one());
        Ok(s)
    }

    /// Builds a series from explicit terms; repeated indices accumulate.
    pub fn from_terms(
        d: usize,
        cutoff: usize,
        spec: RingSpec,
        terms: impl IntoIterator<Item = (MultiIndex, RingElem)>,
    ) -> Result<Self> {
        let mut s = NCSeries::zero(d, cutoff, spec);
        for (i, c) in terms {
            if i.height() > d {
                return Err(Error::BadWord(format!("index {i} exceeds height {d}")));
            }
            if c.spec() != spec {
                return Err(Error::SpecMismatch(format!("{} vs {spec}", c.spec())));
            }
            s.add_term(i, c);
        }
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    /// Nonzero terms in (degree, lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RingElem)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, i: &MultiIndex) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn constant(&self) -> RingElem {
        self.coeff(&MultiIndex::empty())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.constant().is_one()
    }

    fn add_term(&mut self, i: MultiIndex, c: RingElem) {
        if i.len() > self.cutoff || c.is_zero() {
            return;
        }
        match self.coeffs.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_shape(&self, other: &NCSeries) -> Result<()> {
        if self.d != other.d || self.cutoff != other.cutoff || self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "series (d={}, D={}, {}) vs (d={}, D={}, {})",
                self.d, self.cutoff, self.spec, other.d, other.cutoff, other.spec
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_shape(other)?;
        let mut s = self.clone();
        for (i, c) in &other.coeffs {
            s.add_term(i.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn neg(&self) -> NCSeries {
        NCSeries {
            coeffs: self.coeffs.iter().map(|(i, c)| (i.clone(), -c)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, k: &RingElem) -> NCSeries {
        let mut s = NCSeries::zero(self.d, self.cutoff, self.spec);
        for (i, c) in &self.coeffs {
            s.add_term(i.clone(), c * k);
        }
        s
    }

    /// Concatenation convolution, truncated at the cutoff.
    pub fn nc_mul(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_shape(other)?;
        let mut s = NCSeries::zero(self.d, self.cutoff, self.spec);
        for (i1, c1) in &self.coeffs {
            let room = self.cutoff - i1.len();
            for (i2, c2) in other.coeffs.iter().take_while(|(i2, _)| i2.len() <= room) {
                s.add_term(i1.concat(i2), c1 * c2);
            }
        }
        Ok(s)
    }

    /// Inverse as `c⁻¹ Σ_k (−u)^k` where `a = c(1 + u)` and `u` has no constant term.
    pub fn nc_invert(&self) -> Result<NCSeries> {
        let c = self.constant();
        let cinv = c
            .inverse()
            .map_err(|_| Error::NotAUnit(format!("series with constant term {c} over {}", self.spec)))?;
        let mut u = self.scale(&cinv);
        u.coeffs.remove(&MultiIndex::empty());
        let minus_u = u.neg();
        let mut acc = NCSeries::one(self.d, self.cutoff, self.spec);
        let mut power = acc.clone();
        for _ in 0..self.cutoff {
            power = power.nc_mul(&minus_u)?;
            if power.coeffs.is_empty() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&cinv))
    }

    /// Integer power by repeated squaring; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<NCSeries> {
        let mut base = if e < 0 { self.nc_invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = NCSeries::one(self.d, self.cutoff, self.spec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.nc_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.nc_mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if i.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*")?;
                for g in i.entries() {
                    write!(f, "X{g}")?;
                }
            }
        }
        Ok(())
    }
}

/// The Magnus expansion of `w`, truncated at degree `cutoff`.
pub fn magnus(w: &Word, d: usize, spec: RingSpec, cutoff: usize) -> Result<NCSeries> {
    if w.max_generator() > d {
        return Err(Error::BadWord(format!("{w} uses x{} but d = {d}", w.max_generator())));
    }
    let mut acc = NCSeries::one(d, cutoff, spec);
    for l in w.letters() {
        let letter = NCSeries::generator(d, cutoff, spec, l.gen)?.pow(l.exp)?;
        acc = acc.nc_mul(&letter)?;
    }
    Ok(acc)
}

/// The coefficient `ε_{I,Λ}(w)`.
pub fn epsilon(w: &Word, i: &MultiIndex, spec: RingSpec) -> Result<RingElem> {
    let d = w.rank().max(i.height());
    if i.height() > w.rank() {
        // Generators beyond the rank of `w` never occur in its expansion.
        return Ok(if i.is_empty() { spec.one() } else { spec.zero() });
    }
    Ok(magnus(w, d, spec, i.len())?.coeff(i))
}
