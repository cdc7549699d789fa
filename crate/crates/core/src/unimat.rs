//! Upper unitriangular matrices over residue rings, the shift `X`, the
//! truncated algebra `K[X]` with `X^n = 0`, and the conjugators `A` with
//! `A B A⁻¹` a prescribed power of `B = 1 + X`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::residue::{RingElem, RingSpec};

/// A square matrix over a ring, row-major, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    spec: RingSpec,
    entries: Vec<RingElem>,
}

impl Matrix {
    pub fn from_fn(n: usize, spec: RingSpec, mut f: impl FnMut(usize, usize) -> RingElem) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let e = f(r, c);
                assert_eq!(e.spec(), spec, "entry over the wrong ring");
                entries.push(e);
            }
        }
        Matrix { n, spec, entries }
    }

    pub fn identity(n: usize, spec: RingSpec) -> Self {
        Matrix::from_fn(n, spec, |r, c| if r == c { spec.one() } else { spec.zero() })
    }

    pub fn zero(n: usize, spec: RingSpec) -> Self {
        Matrix::from_fn(n, spec, |_, _| spec.zero())
    }

    /// The nilpotent shift with ones on the superdiagonal.
    pub fn shift(n: usize, spec: RingSpec) -> Self {
        Matrix::from_fn(n, spec, |r, c| if c == r + 1 { spec.one() } else { spec.zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElem {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElem) {
        assert_eq!(v.spec(), self.spec);
        self.entries[r * self.n + c] = v;
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n || self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "{}x{} over {} vs {}x{} over {}",
                self.n, self.n, self.spec, other.n, other.n, other.spec
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let n = self.n;
        Ok(Matrix::from_fn(n, self.spec, |r, c| {
            let mut acc = self.spec.zero();
            for k in 0..n {
                let a = self.get(r, k);
                if !a.is_zero() {
                    acc = acc + a * other.get(k, c);
                }
            }
            acc
        }))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix::from_fn(self.n, self.spec, |r, c| self.get(r, c) + other.get(r, c)))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix::from_fn(self.n, self.spec, |r, c| self.get(r, c) - other.get(r, c)))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| if r == c { self.get(r, c).is_one() } else { self.get(r, c).is_zero() }))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|r| (0..r).all(|c| self.get(r, c).is_zero()))
    }

    pub fn is_unitriangular(&self) -> bool {
        self.is_upper_triangular() && (0..self.n).all(|i| self.get(i, i).is_one())
    }

    /// Inverse of an upper triangular matrix with unit diagonal entries, by
    /// back-substitution.
    pub fn inverse_upper_triangular(&self) -> Result<Matrix> {
        if !self.is_upper_triangular() {
            return Err(Error::NotAUnit("matrix is not upper triangular".into()));
        }
        let n = self.n;
        let dinv = (0..n).map(|i| self.get(i, i).inverse()).collect::<Result<Vec<_>>>()?;
        let mut inv = Matrix::zero(n, self.spec);
        // Column by column: solve self * y = e_c.
        for c in 0..n {
            for r in (0..=c).rev() {
                let mut s = if r == c { self.spec.one() } else { self.spec.zero() };
                for k in r + 1..=c {
                    s = s - self.get(r, k) * inv.get(k, c);
                }
                inv.set(r, c, s * &dinv[r]);
            }
        }
        Ok(inv)
    }

    /// Parses the text format `1,1,0;0,1,1;0,0,1`.
    pub fn parse(s: &str, spec: RingSpec) -> Result<Matrix> {
        let rows: Vec<Vec<RingElem>> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<num_bigint::BigInt>()
                            .map(|v| spec.reduce(&v))
                            .map_err(|_| Error::Parse(format!("bad matrix entry `{}`", x.trim())))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("matrix `{s}` is not square")));
        }
        Ok(Matrix::from_fn(n, spec, |r, c| rows[r][c].clone()))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..self.n {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        Ok(())
    }
}

/// An element of `U_n(Λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniMat(Matrix);

impl TryFrom<Matrix> for UniMat {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<UniMat> {
        if m.is_unitriangular() {
            Ok(UniMat(m))
        } else {
            Err(Error::BadParams(format!("`{m}` is not upper unitriangular")))
        }
    }
}

impl UniMat {
    pub fn identity(n: usize, spec: RingSpec) -> Self {
        UniMat(Matrix::identity(n, spec))
    }

    /// `1 + a·e_{ij}` with 0-based `i < j`.
    pub fn elementary(n: usize, spec: RingSpec, i: usize, j: usize, a: RingElem) -> Result<Self> {
        if i >= j || j >= n {
            return Err(Error::BadSize(format!("elementary position ({i},{j}) in size {n}")));
        }
        let mut m = Matrix::identity(n, spec);
        m.set(i, j, a);
        Ok(UniMat(m))
    }

    /// `B = 1 + X`.
    pub fn b(n: usize, spec: RingSpec) -> Self {
        UniMat(Matrix::identity(n, spec).add(&Matrix::shift(n, spec)).unwrap())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.n
    }

    pub fn spec(&self) -> RingSpec {
        self.0.spec
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElem {
        self.0.get(r, c)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn mul(&self, other: &UniMat) -> Result<UniMat> {
        Ok(UniMat(self.0.mul(&other.0)?))
    }

    pub fn inverse(&self) -> UniMat {
        UniMat(self.0.inverse_upper_triangular().expect("unitriangular matrices are invertible"))
    }

    pub fn pow(&self, e: i64) -> UniMat {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = UniMat::identity(self.size(), self.spec());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        acc
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, other: &UniMat) -> Result<UniMat> {
        self.inverse().mul(&other.inverse())?.mul(self)?.mul(other)
    }

    /// Multiplicative order. Over `Z/p^r` the order is a power of `p`, found
    /// by repeated `p`-th powers.
    pub fn order(&self) -> Result<u64> {
        if self.is_identity() {
            return Ok(1);
        }
        let p = self.spec().prime().ok_or(Error::NoFiniteOrder)?;
        let mut a = self.clone();
        let mut ord = 1u64;
        // Exponent of U_n(Z/p^r) is at most p^{r + ceil(log_p n)}.
        for _ in 0..128 {
            if a.is_identity() {
                return Ok(ord);
            }
            a = a.pow(p as i64);
            ord = ord.checked_mul(p).ok_or(Error::NoFiniteOrder)?;
        }
        Err(Error::NoFiniteOrder)
    }

    pub fn parse(s: &str, spec: RingSpec) -> Result<UniMat> {
        UniMat::try_from(Matrix::parse(s, spec)?)
    }
}

impl fmt::Display for UniMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Embeds `M ∈ U_{k+1}` into the top-left block of `U_n`.
pub fn embed_top_left(m: &UniMat, n: usize) -> Result<UniMat> {
    let k = m.size();
    if k > n {
        return Err(Error::BadSize(format!("cannot embed size {k} into size {n}")));
    }
    let spec = m.spec();
    Ok(UniMat(Matrix::from_fn(n, spec, |r, c| {
        if r < k && c < k {
            m.get(r, c).clone()
        } else if r == c {
            spec.one()
        } else {
            spec.zero()
        }
    })))
}

/// An element of `U_{n+1} / Z_{n+1}`: a unitriangular matrix whose corner
/// entry is not part of the data (stored as 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BarUniMat(UniMat);

impl BarUniMat {
    pub fn identity(n: usize, spec: RingSpec) -> Self {
        BarUniMat(UniMat::identity(n, spec))
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn spec(&self) -> RingSpec {
        self.0.spec()
    }

    /// Entry `(r, c)`; the corner is reported as `None`.
    pub fn get(&self, r: usize, c: usize) -> Option<&RingElem> {
        if r == 0 && c + 1 == self.size() && self.size() > 1 {
            None
        } else {
            Some(self.0.get(r, c))
        }
    }

    /// Representative with corner entry `corner`.
    pub fn lift_with(&self, corner: RingElem) -> UniMat {
        let n = self.size();
        let mut m = self.0.clone().into_matrix();
        if n > 1 {
            m.set(0, n - 1, corner);
        }
        UniMat(m)
    }

    pub fn mul(&self, other: &BarUniMat) -> Result<BarUniMat> {
        Ok(bar_project(&self.0.mul(&other.0)?))
    }

    pub fn inverse(&self) -> BarUniMat {
        bar_project(&self.0.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }
}

impl fmt::Display for BarUniMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        for r in 0..n {
            if r > 0 {
                write!(f, ";")?;
            }
            for c in 0..n {
                if c > 0 {
                    write!(f, ",")?;
                }
                match self.get(r, c) {
                    Some(v) => write!(f, "{v}")?,
                    None => write!(f, "*")?,
                }
            }
        }
        Ok(())
    }
}

/// The quotient map `U_{n+1} → U_{n+1}/Z_{n+1}`.
pub fn bar_project(m: &UniMat) -> BarUniMat {
    let n = m.size();
    let mut inner = m.clone().into_matrix();
    if n > 1 {
        inner.set(0, n - 1, m.spec().zero());
    }
    BarUniMat(UniMat(inner))
}

/// `Σ c_i X^i` in `K[X]/(X^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KXElem {
    spec: RingSpec,
    coeffs: Vec<RingElem>,
}

impl KXElem {
    /// Coefficients beyond `X^{n-1}` are dropped, missing ones are zero.
    pub fn new(coeffs: &[i64], n: usize, spec: RingSpec) -> Self {
        let mut c: Vec<RingElem> = coeffs.iter().take(n).map(|&x| spec.from_i64(x)).collect();
        c.resize(n, spec.zero());
        KXElem { spec, coeffs: c }
    }

    pub fn from_elems(coeffs: Vec<RingElem>, n: usize, spec: RingSpec) -> Self {
        let mut c: Vec<RingElem> = coeffs.into_iter().take(n).collect();
        c.resize(n, spec.zero());
        KXElem { spec, coeffs: c }
    }

    pub fn one(n: usize, spec: RingSpec) -> Self {
        KXElem::new(&[1], n, spec)
    }

    /// `X^k`.
    pub fn monomial(k: usize, n: usize, spec: RingSpec) -> Self {
        let mut c = vec![spec.zero(); n];
        if k < n {
            c[k] = spec.one();
        }
        KXElem { spec, coeffs: c }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn coeff(&self, i: usize) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    /// A unit exactly when the constant coefficient is a unit.
    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| c.is_unit())
    }

    pub fn is_one(&self) -> bool {
        *self == KXElem::one(self.n(), self.spec)
    }

    fn same_shape(&self, other: &KXElem) -> Result<()> {
        if self.n() != other.n() || self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "K[X] with n={} over {} vs n={} over {}",
                self.n(),
                self.spec,
                other.n(),
                other.spec
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KXElem) -> Result<KXElem> {
        self.same_shape(other)?;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(KXElem { spec: self.spec, coeffs: c })
    }

    pub fn mul(&self, other: &KXElem) -> Result<KXElem> {
        self.same_shape(other)?;
        let n = self.n();
        let mut c = vec![self.spec.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Ok(KXElem { spec: self.spec, coeffs: c })
    }

    /// Geometric-series inverse `c⁻¹ Σ (−u)^k` for `f = c(1 + u)`.
    pub fn inverse(&self) -> Result<KXElem> {
        let n = self.n();
        let c0 = self.coeff(0);
        let cinv = c0.inverse().map_err(|_| Error::NotAUnit(format!("{self} in K[X]")))?;
        let mut minus_u: Vec<RingElem> = self.coeffs.iter().map(|x| -(x * &cinv)).collect();
        minus_u[0] = self.spec.zero();
        let minus_u = KXElem { spec: self.spec, coeffs: minus_u };
        let mut acc = KXElem::one(n, self.spec);
        let mut power = acc.clone();
        for _ in 1..n {
            power = power.mul(&minus_u)?;
            acc = acc.add(&power)?;
        }
        let scaled = acc.coeffs.iter().map(|x| x * &cinv).collect();
        Ok(KXElem { spec: self.spec, coeffs: scaled })
    }

    pub fn pow(&self, e: i64) -> Result<KXElem> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = KXElem::one(self.n(), self.spec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The matrix `Σ c_i X^i` with `X` the superdiagonal shift.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n(), self.spec, |r, c| if c >= r { self.coeff(c - r) } else { self.spec.zero() })
    }
}

impl fmt::Display for KXElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*X")?,
                _ => write!(f, "{c}*X^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Basis of the centralizer of `X` in `Mat_n(F_p)`, solved as a linear system.
pub fn centralizer_of_x(n: usize, spec: RingSpec) -> Result<Vec<Matrix>> {
    let p = match spec {
        RingSpec::Residue { p, r: 1 } => p,
        _ => return Err(Error::BadParams(format!("centralizer needs a prime field, got {spec}"))),
    };
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    // (MX)[r][c] = M[r][c-1], (XM)[r][c] = M[r+1][c].
    for r in 0..n {
        for c in 0..n {
            let mut row = vec![0u64; n * n];
            if c >= 1 {
                row[var(r, c - 1)] = 1;
            }
            if r + 1 < n {
                row[var(r + 1, c)] = (row[var(r + 1, c)] + p - 1) % p;
            }
            rows.push(row);
        }
    }
    Ok(linalg::nullspace(&rows, n * n, p)
        .into_iter()
        .map(|v| Matrix::from_fn(n, spec, |r, c| spec.from_i64(v[var(r, c)] as i64)))
        .collect())
}

/// The upper triangular `A` with `A X A⁻¹ = X f(X)`, built column by column:
/// column `i` (1-based) is `f(X)^{n-i} v_i` where `X v_1 = 0`, `X v_i = v_{i-1}`.
pub fn conjugator_from_automorphism(f: &KXElem) -> Result<Matrix> {
    if !f.is_unit() {
        return Err(Error::NotAUnit(format!("{f} is not a unit of K[X]")));
    }
    let n = f.n();
    let spec = f.spec();
    let mut a = Matrix::zero(n, spec);
    for i in 0..n {
        let g = f.pow((n - 1 - i) as i64)?;
        for r in 0..=i {
            a.set(r, i, g.coeff(i - r));
        }
    }
    Ok(a)
}

/// Target power of `B = 1 + X` for [`solve_conjugation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConjugationTarget {
    /// `B^{1+p^k}`.
    PowerOnePlusQ { k: u32 },
    /// `B^{-(1+2^k)}`, `p = 2` only.
    NegPowerOnePlusQ { k: u32 },
    /// `B^{-1}`, `p = 2` only.
    Inverse,
}

impl ConjugationTarget {
    fn validate(&self, p: u64) -> Result<()> {
        match *self {
            ConjugationTarget::PowerOnePlusQ { k: 0 } | ConjugationTarget::NegPowerOnePlusQ { k: 0 } => {
                Err(Error::BadTarget("k must be at least 1".into()))
            }
            ConjugationTarget::NegPowerOnePlusQ { .. } | ConjugationTarget::Inverse if p != 2 => {
                Err(Error::BadTarget(format!("{self} requires p = 2, got p = {p}")))
            }
            _ => Ok(()),
        }
    }

    /// The exponent `m` with target `B^m`, given `p`.
    pub fn exponent(&self, p: u64) -> i64 {
        match *self {
            ConjugationTarget::PowerOnePlusQ { k } => 1 + (p as i64).pow(k),
            ConjugationTarget::NegPowerOnePlusQ { k } => -(1 + 2i64.pow(k)),
            ConjugationTarget::Inverse => -1,
        }
    }
}

impl fmt::Display for ConjugationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjugationTarget::PowerOnePlusQ { k } => write!(f, "power-one-plus-q(k={k})"),
            ConjugationTarget::NegPowerOnePlusQ { k } => write!(f, "neg-power-one-plus-q(k={k})"),
            ConjugationTarget::Inverse => write!(f, "inverse"),
        }
    }
}

impl std::str::FromStr for ConjugationTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad conjugation target `{s}`"));
        let s = s.trim();
        if s == "inverse" || s == "inv" {
            return Ok(ConjugationTarget::Inverse);
        }
        let (name, k) = s.split_once(':').ok_or_else(bad)?;
        let k: u32 = k.trim().trim_start_matches("k=").parse().map_err(|_| bad())?;
        match name.trim() {
            "power" | "split" => Ok(ConjugationTarget::PowerOnePlusQ { k }),
            "negpower" | "negsplit" => Ok(ConjugationTarget::NegPowerOnePlusQ { k }),
            _ => Err(bad()),
        }
    }
}

/// `f` with `X f(X) = B^m − 1` in `K[X]/(X^n)`.
pub fn automorphism_for_power(m: i64, n: usize, spec: RingSpec) -> Result<KXElem> {
    let b = KXElem::new(&[1, 1], n + 1, spec);
    let bm = b.pow(m)?;
    Ok(KXElem::from_elems(bm.coeffs()[1..].to_vec(), n, spec))
}

/// The normalized conjugator in `U_{p^s+1}(F_p)` taking `B` to the target power.
pub fn solve_conjugation(target: ConjugationTarget, p: u64, s: u32) -> Result<UniMat> {
    target.validate(p)?;
    let spec = RingSpec::prime_field(p)?;
    let n = p
        .checked_pow(s)
        .and_then(|q| usize::try_from(q + 1).ok())
        .ok_or_else(|| Error::TooLarge(format!("p^s + 1 for p={p}, s={s}")))?;
    let f = automorphism_for_power(target.exponent(p), n, spec)?;
    UniMat::try_from(conjugator_from_automorphism(&f)?)
}

/// All elements of `U_n(Λ)` for a finite ring, up to `cap` elements.
pub fn all_unitriangular(n: usize, spec: RingSpec, cap: usize) -> Result<Vec<UniMat>> {
    let m = spec.modulus().ok_or_else(|| Error::BadParams("U_n(Z) is infinite".into()))?;
    let free = n * n.saturating_sub(1) / 2;
    let total = (m as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::TooLarge(format!("|U_{n}({spec})| = {m}^{free} exceeds {cap}")));
    }
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|r| (r + 1..n).map(move |c| (r, c))).collect();
    Ok((0..total as u64)
        .map(|mut code| {
            let mut a = Matrix::identity(n, spec);
            for &(r, c) in &positions {
                a.set(r, c, spec.from_i64((code % m) as i64));
                code /= m;
            }
            UniMat(a)
        })
        .collect())
}

/// Exponent of `U_n(F_p)` by exhaustive scan: the largest element order.
/// Uses plain `u32` arithmetic since the scan can reach ten million elements.
pub fn exponent_of_unitriangular(n: usize, p: u64) -> Result<u64> {
    if !crate::residue::is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    let free = n * n.saturating_sub(1) / 2;
    let total = (p as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
    if total > 50_000_000 {
        return Err(Error::TooLarge(format!("|U_{n}(F_{p})| = {p}^{free}")));
    }
    if n > 8 {
        return Err(Error::TooLarge(format!("U_{n}(F_{p}) scan supports n <= 8")));
    }
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|r| (r + 1..n).map(move |c| (r, c))).collect();
    // (1 + N)^p = 1 + N^p over F_p, so the order of 1 + N is the least power
    // of p that is at least the nilpotency index of N.
    let nil_index = |code: u64| -> u32 {
        let mut nm = [0u64; 64];
        let mut code = code;
        for &(r, c) in &positions {
            nm[r * n + c] = code % p;
            code /= p;
        }
        let mut pw = nm;
        let mut m = 1;
        while pw.iter().any(|&x| x != 0) {
            let mut next = [0u64; 64];
            for r in 0..n {
                for k in r + 1..n {
                    let x = pw[r * n + k];
                    if x != 0 {
                        for c in k + 1..n {
                            next[r * n + c] = (next[r * n + c] + x * nm[k * n + c]) % p;
                        }
                    }
                }
            }
            pw = next;
            m += 1;
        }
        m
    };
    let max_index = (0..total as u64).into_par_iter().map(nil_index).max().unwrap_or(1);
    let mut exp = 1u64;
    while exp < max_index as u64 {
        exp *= p;
    }
    Ok(exp)
}
