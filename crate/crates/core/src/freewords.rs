//! Words in a free group of finite rank, and filtration membership decided
//! through Magnus coefficients.
//!
//! Membership tests:
//! - lower central `S_n`: every integer coefficient of degree `1..n` vanishes;
//! - Zassenhaus `S_(n)`: every `F_p` coefficient of degree `1..n` vanishes;
//! - p-central `S^(n)`: every coefficient `ε_I` of degree `1..n` has
//!   `v_p(ε_I) >= n - |I|`. Thresholds stay below `n`, so coefficients are
//!   computed in `Z/p^n`.
//!
//! When a word is not a member, the first offending multi-index (shortest,
//! then lexicographic) yields a unitriangular representation that moves it.

use std::fmt;
use std::iter::Peekable;
use std::str::{Chars, FromStr};

use crate::error::{Error, Result};
use crate::ncseries::{magnus, MultiIndex, NCSeries};
use crate::residue::{RingElem, RingSpec};
use crate::unimat::{Matrix, UniMat};

/// One syllable `x_gen^exp` of a reduced word; generators are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u16,
    pub exp: i64,
}

/// A freely reduced word in the free group on `x_1, …, x_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, gen: u16) -> Result<Self> {
        Word::from_letters(rank, [Letter { gen, exp: 1 }])
    }

    /// Builds a word from arbitrary syllables, reducing as it goes.
    pub fn from_letters(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut w = Word::identity(rank);
        for l in letters {
            if l.gen == 0 || l.gen as usize > rank {
                return Err(Error::BadWord(format!("generator x{} outside rank {rank}", l.gen)));
            }
            w.push(l);
        }
        Ok(w)
    }

    fn push(&mut self, l: Letter) {
        if l.exp == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some(top) if top.gen == l.gen => {
                top.exp += l.exp;
                if top.exp == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push(l),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of generator occurrences, `Σ |exp|`.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.gen as usize).max().unwrap_or(0)
    }

    /// The same element viewed in a free group of larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        if self.max_generator() > rank {
            return Err(Error::BadWord(format!("word uses x{} but rank is {rank}", self.max_generator())));
        }
        Ok(Word { rank, letters: self.letters.clone() })
    }

    fn same_rank(&self, other: &Word) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::BadWord(format!("rank mismatch: {} vs {}", self.rank, other.rank)))
        }
    }

    pub fn mul(&self, other: &Word) -> Result<Word> {
        self.same_rank(other)?;
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        Ok(w)
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| Letter { gen: l.gen, exp: -l.exp }).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            for &l in &base.letters {
                w.push(l);
            }
        }
        w
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Result<Word> {
        u.inverse().mul(&v.inverse())?.mul(u)?.mul(v)
    }

    /// Parses the word grammar, inferring the rank from the largest generator.
    pub fn parse(s: &str) -> Result<Word> {
        let w = Parser::new(s).parse_all()?;
        let rank = w.max_generator().max(1);
        w.with_rank(rank)
    }

    pub fn parse_with_rank(s: &str, rank: usize) -> Result<Word> {
        Parser::new(s).parse_all()?.with_rank(rank)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if l.exp == 1 {
                write!(f, "x{}", l.gen)?;
            } else {
                write!(f, "x{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

// Grammar (whitespace ignored):
//   word   := factor ('*' factor)*
//   factor := atom ('^' int)?
//   atom   := 'x' digits | 'e' | '(' word ')' | '[' word ',' word ']'
// Parsing happens at an unbounded rank; the caller fixes the rank afterwards.
struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    src: &'a str,
}

const PARSE_RANK: usize = u16::MAX as usize;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.chars().peekable(), src }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in word `{}`", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.chars.next();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn parse_all(mut self) -> Result<Word> {
        let w = self.word()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(w)
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = self.factor()?;
        while self.peek() == Some('*') {
            self.chars.next();
            let f = self.factor()?;
            w = w.mul(&f)?;
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            let e = self.int()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some('-') => {
                self.chars.next();
                true
            }
            Some('+') => {
                self.chars.next();
                false
            }
            _ => false,
        };
        let d = self.digits();
        let v: i64 = d.parse().map_err(|_| self.err("expected an exponent"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('x') => {
                self.chars.next();
                let d = self.digits();
                let g: u16 = d.parse().map_err(|_| self.err("expected a generator index"))?;
                if g == 0 {
                    return Err(self.err("generators are numbered from 1"));
                }
                Word::generator(PARSE_RANK, g)
            }
            Some('e') => {
                self.chars.next();
                Ok(Word::identity(PARSE_RANK))
            }
            Some('(') => {
                self.chars.next();
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.chars.next();
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Word::commutator(&u, &v)
            }
            _ => Err(self.err("expected a generator, `e`, `(` or `[`")),
        }
    }
}

/// The three descending series on a free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    LowerCentral,
    Zassenhaus { p: u64 },
    PCentral { p: u64 },
}

impl FiltrationKind {
    pub fn prime(&self) -> Option<u64> {
        match self {
            FiltrationKind::LowerCentral => None,
            FiltrationKind::Zassenhaus { p } | FiltrationKind::PCentral { p } => Some(*p),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::BadParams("filtration levels start at 1".into()));
        }
        if let Some(p) = self.prime() {
            RingSpec::prime_field(p)?;
        }
        Ok(())
    }

    /// Ring in which the membership coefficients are computed at level `n`.
    fn coefficient_ring(&self, n: usize) -> Result<RingSpec> {
        match *self {
            FiltrationKind::LowerCentral => Ok(RingSpec::Integers),
            FiltrationKind::Zassenhaus { p } => RingSpec::prime_field(p),
            FiltrationKind::PCentral { p } => RingSpec::mod_prime_power(p, n as u32),
        }
    }

    /// Whether a single coefficient is compatible with membership at level `n`.
    fn coefficient_ok(&self, index: &MultiIndex, c: &RingElem, n: usize) -> bool {
        match *self {
            FiltrationKind::LowerCentral | FiltrationKind::Zassenhaus { .. } => c.is_zero(),
            FiltrationKind::PCentral { p } => c.valuation(p).at_least((n - index.len()) as u32),
        }
    }
}

impl fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationKind::LowerCentral => write!(f, "lower-central"),
            FiltrationKind::Zassenhaus { p } => write!(f, "zassenhaus(p={p})"),
            FiltrationKind::PCentral { p } => write!(f, "p-central(p={p})"),
        }
    }
}

/// First multi-index (shortest, then lexicographic) whose coefficient
/// violates membership of `w` at level `n`, with the coefficient value.
pub fn first_violation(w: &Word, kind: FiltrationKind, n: usize) -> Result<Option<(MultiIndex, RingElem)>> {
    kind.validate(n)?;
    if n == 1 {
        return Ok(None);
    }
    let ring = kind.coefficient_ring(n)?;
    let series = magnus(w, w.rank(), ring, n - 1)?;
    let found = series
        .terms()
        .filter(|(i, _)| !i.is_empty())
        .find(|(i, c)| !kind.coefficient_ok(i, c, n))
        .map(|(i, c)| (i.clone(), c.clone()));
    Ok(found)
}

pub fn in_filtration(w: &Word, kind: FiltrationKind, n: usize) -> Result<bool> {
    Ok(first_violation(w, kind, n)?.is_none())
}

/// Entry `(μ, ν)` (0-based, `μ < ν`) of the image is the coefficient of the
/// sub-index `I[μ..ν)`.
fn rho_from_series(series: &NCSeries, index: &MultiIndex) -> UniMat {
    let k = index.len();
    let spec = series.spec();
    let m = Matrix::from_fn(k + 1, spec, |mu, nu| {
        if mu == nu {
            spec.one()
        } else if mu < nu {
            series.coeff(&index.slice(mu, nu))
        } else {
            spec.zero()
        }
    });
    UniMat::try_from(m).expect("unitriangular by construction")
}

/// The coefficient representation `ρ_{I,Λ}: S → U_{|I|+1}(Λ)` evaluated at `w`.
pub fn rho_i(w: &Word, index: &MultiIndex, spec: RingSpec) -> Result<UniMat> {
    if index.is_empty() {
        return Err(Error::BadParams("rho_I needs a nonempty multi-index".into()));
    }
    if index.entries().iter().any(|&g| g == 0 || g as usize > w.rank()) {
        return Err(Error::BadWord(format!("index {index} exceeds rank {}", w.rank())));
    }
    let series = magnus(w, w.rank(), spec, index.len())?;
    Ok(rho_from_series(&series, index))
}

/// A representation that detects a word outside a filtration term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRep {
    pub index: MultiIndex,
    pub ring: RingSpec,
    /// `ρ_I(w)`, of size `|I| + 1`, with nonzero corner entry.
    pub matrix: UniMat,
}

impl WitnessRep {
    /// The image in `U_n`, obtained by the top-left embedding.
    pub fn embedded(&self, n: usize) -> Result<UniMat> {
        crate::unimat::embed_top_left(&self.matrix, n)
    }

    pub fn corner(&self) -> &RingElem {
        let k = self.index.len();
        self.matrix.get(0, k)
    }
}

/// Separating representation for a word outside the level-`n` term:
/// `U_{k+1}(F_p)` for Zassenhaus, `U_{k+1}(Z)` for lower central and
/// `U_{k+1}(Z/p^{n-k})` for p-central, where `k = |I|`.
pub fn witness_rep(w: &Word, kind: FiltrationKind, n: usize) -> Result<WitnessRep> {
    let (index, _) = first_violation(w, kind, n)?
        .ok_or_else(|| Error::NoWitness(format!("{w} lies in level {n} of the {kind} series")))?;
    let k = index.len();
    let ring = match kind {
        FiltrationKind::LowerCentral => RingSpec::Integers,
        FiltrationKind::Zassenhaus { p } => RingSpec::prime_field(p)?,
        FiltrationKind::PCentral { p } => RingSpec::mod_prime_power(p, (n - k) as u32)?,
    };
    let matrix = rho_i(w, &index, ring)?;
    debug_assert!(!matrix.get(0, k).is_zero());
    Ok(WitnessRep { index, ring, matrix })
}
