//! Exact coefficient rings: `F_p`, `Z/p^r` and the integers.
//!
//! Every value is kept in a canonical form (residues in `[0, p^r)`, integers
//! as arbitrary-precision values), so structural equality is ring equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus we accept; keeps sums inside `u64` and products inside `u128`.
const MAX_MODULUS: u64 = 1 << 62;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Which of the three coefficient ring families a [`RingSpec`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    PrimeField,
    ModPrimePower,
    Integers,
}

/// A coefficient ring. `Z/p^1` and `F_p` share one representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Residue { p: u64, r: u32 },
    Integers,
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::mod_prime_power(p, 1)
    }

    pub fn mod_prime_power(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadParams(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::BadParams("exponent r must be at least 1".into()));
        }
        match p.checked_pow(r) {
            Some(m) if m <= MAX_MODULUS => Ok(RingSpec::Residue { p, r }),
            _ => Err(Error::BadParams(format!("modulus {p}^{r} is too large"))),
        }
    }

    pub const fn integers() -> Self {
        RingSpec::Integers
    }

    pub fn kind(&self) -> RingKind {
        match self {
            RingSpec::Residue { r: 1, .. } => RingKind::PrimeField,
            RingSpec::Residue { .. } => RingKind::ModPrimePower,
            RingSpec::Integers => RingKind::Integers,
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            RingSpec::Residue { p, .. } => Some(*p),
            RingSpec::Integers => None,
        }
    }

    pub fn exponent(&self) -> Option<u32> {
        match self {
            RingSpec::Residue { r, .. } => Some(*r),
            RingSpec::Integers => None,
        }
    }

    /// `p^r` for residue rings, `None` for the integers.
    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::Residue { p, r } => Some(p.pow(*r)),
            RingSpec::Integers => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingSpec::Residue { .. })
    }

    pub fn zero(self) -> RingElem {
        self.from_i64(0)
    }

    pub fn one(self) -> RingElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, x: i64) -> RingElem {
        match self.modulus() {
            Some(m) => RingElem {
                spec: self,
                value: Value::Residue((x as i128).rem_euclid(m as i128) as u64),
            },
            None => RingElem { spec: self, value: Value::Integer(BigInt::from(x)) },
        }
    }

    /// Canonical image of an integer in this ring.
    pub fn reduce(self, x: &BigInt) -> RingElem {
        match self.modulus() {
            Some(m) => {
                let r = x.mod_floor(&BigInt::from(m));
                RingElem { spec: self, value: Value::Residue(r.to_u64().expect("residue fits")) }
            }
            None => RingElem { spec: self, value: Value::Integer(x.clone()) },
        }
    }

    fn check(self, other: RingSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Residue { p, r: 1 } => write!(f, "Fp:{p}"),
            RingSpec::Residue { p, r } => write!(f, "Zmod:{p}^{r}"),
            RingSpec::Integers => write!(f, "Z"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unrecognised ring spec `{s}`"));
        if s == "Z" {
            return Ok(RingSpec::Integers);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p = rest.parse().map_err(|_| bad())?;
            return RingSpec::prime_field(p);
        }
        if let Some(rest) = s.strip_prefix("Zmod:") {
            let (p, r) = match rest.split_once('^') {
                Some((p, r)) => (p.parse().map_err(|_| bad())?, r.parse().map_err(|_| bad())?),
                None => (rest.parse().map_err(|_| bad())?, 1),
            };
            return RingSpec::mod_prime_power(p, r);
        }
        Err(bad())
    }
}

/// p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    /// True iff the valuation is at least `bound`.
    pub fn at_least(self, bound: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Largest `e` with `p^e | x`.
pub fn val_p(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        x = q;
        e += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Residue(u64),
    Integer(BigInt),
}

/// An element of a [`RingSpec`], always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    spec: RingSpec,
    value: Value,
}

impl RingElem {
    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Residue(v) => *v == 0,
            Value::Integer(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Residue(v) => *v == 1 || self.spec.modulus() == Some(1),
            Value::Integer(v) => v.is_one(),
        }
    }

    /// The canonical integer representative.
    pub fn lift(&self) -> BigInt {
        match &self.value {
            Value::Residue(v) => BigInt::from(*v),
            Value::Integer(v) => v.clone(),
        }
    }

    /// Residue value for finite rings.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(v) => Some(*v),
            Value::Integer(_) => None,
        }
    }

    /// Valuation of the canonical representative. In `Z/p^r` the zero class has
    /// valuation `Infinite`, which is correct for every threshold below `r`.
    pub fn valuation(&self, p: u64) -> Valuation {
        val_p(&self.lift(), p)
    }

    pub fn checked_add(&self, rhs: &RingElem) -> Result<RingElem> {
        self.spec.check(rhs.spec)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn checked_sub(&self, rhs: &RingElem) -> Result<RingElem> {
        self.spec.check(rhs.spec)?;
        Ok(self.add_unchecked(&rhs.neg_ref()))
    }

    pub fn checked_mul(&self, rhs: &RingElem) -> Result<RingElem> {
        self.spec.check(rhs.spec)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn add_unchecked(&self, rhs: &RingElem) -> RingElem {
        let value = match (&self.value, &rhs.value) {
            (Value::Residue(a), Value::Residue(b)) => {
                let m = self.spec.modulus().unwrap();
                Value::Residue((a + b) % m)
            }
            (Value::Integer(a), Value::Integer(b)) => Value::Integer(a + b),
            _ => unreachable!("spec equality implies matching representation"),
        };
        RingElem { spec: self.spec, value }
    }

    fn mul_unchecked(&self, rhs: &RingElem) -> RingElem {
        let value = match (&self.value, &rhs.value) {
            (Value::Residue(a), Value::Residue(b)) => {
                let m = self.spec.modulus().unwrap() as u128;
                Value::Residue(((*a as u128 * *b as u128) % m) as u64)
            }
            (Value::Integer(a), Value::Integer(b)) => Value::Integer(a * b),
            _ => unreachable!("spec equality implies matching representation"),
        };
        RingElem { spec: self.spec, value }
    }

    fn neg_ref(&self) -> RingElem {
        let value = match &self.value {
            Value::Residue(0) => Value::Residue(0),
            Value::Residue(a) => Value::Residue(self.spec.modulus().unwrap() - a),
            Value::Integer(a) => Value::Integer(-a),
        };
        RingElem { spec: self.spec, value }
    }

    pub fn is_unit(&self) -> bool {
        match (&self.value, self.spec) {
            (Value::Residue(v), RingSpec::Residue { p, .. }) => v % p != 0,
            (Value::Integer(v), _) => v.abs().is_one(),
            _ => unreachable!(),
        }
    }

    pub fn inverse(&self) -> Result<RingElem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self} in {}", self.spec)));
        }
        match &self.value {
            Value::Residue(v) => {
                let m = self.spec.modulus().unwrap() as i128;
                let g = (*v as i128).extended_gcd(&m);
                debug_assert_eq!(g.gcd, 1);
                Ok(RingElem { spec: self.spec, value: Value::Residue(g.x.rem_euclid(m) as u64) })
            }
            Value::Integer(_) => Ok(self.clone()),
        }
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplication by an ordinary integer.
    pub fn scale(&self, k: i64) -> RingElem {
        self.mul_unchecked(&self.spec.from_i64(k))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Residue(v) => write!(f, "{v}"),
            Value::Integer(v) => write!(f, "{v}"),
        }
    }
}

impl PartialOrd for RingElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by spec, then by canonical representative.
impl Ord for RingElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.spec.cmp(&other.spec).then_with(|| self.lift().cmp(&other.lift()))
    }
}

// Operator sugar. Mixing specs through operators is a programming error and
// panics; fallible callers use the `checked_*` methods.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$checked(rhs).expect("ring operands must share a spec")
            }
        }
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$checked(&rhs).expect("ring operands must share a spec")
            }
        }
        impl $tr<&RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                (&self).$checked(rhs).expect("ring operands must share a spec")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> RingSpec {
        RingSpec::prime_field(p).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(f(3).from_i64(7).residue(), Some(1));
        let z9 = RingSpec::mod_prime_power(3, 2).unwrap();
        assert_eq!(z9.from_i64(-1).residue(), Some(8));
        assert_eq!(RingSpec::Integers.from_i64(12).lift(), BigInt::from(12));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(val_p(&BigInt::from(12), 2), Valuation::Finite(2));
        assert_eq!(val_p(&BigInt::from(9), 3), Valuation::Finite(2));
        assert_eq!(val_p(&BigInt::from(0), 5), Valuation::Infinite);
        assert_eq!(val_p(&BigInt::from(-12), 3), Valuation::Finite(1));
    }

    #[test]
    fn prime_field_is_mod_prime_power_with_exponent_one() {
        assert_eq!(RingSpec::mod_prime_power(5, 1).unwrap(), f(5));
        assert_eq!(f(5).kind(), RingKind::PrimeField);
        assert_eq!("Zmod:5^1".parse::<RingSpec>().unwrap(), f(5));
    }

    #[test]
    fn spec_text_round_trip() {
        for s in ["Fp:3", "Zmod:3^2", "Z", "Fp:2", "Zmod:2^5"] {
            let spec: RingSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("Fp:4".parse::<RingSpec>().is_err());
        assert!("Zmod:3^0".parse::<RingSpec>().is_err());
        assert!("Q".parse::<RingSpec>().is_err());
    }

    #[test]
    fn mismatched_specs_are_rejected() {
        let a = f(3).one();
        let b = f(5).one();
        assert!(matches!(a.checked_add(&b), Err(Error::SpecMismatch(_))));
        assert!(a.checked_mul(&RingSpec::Integers.one()).is_err());
    }

    #[test]
    fn inverses() {
        let z27 = RingSpec::mod_prime_power(3, 3).unwrap();
        let x = z27.from_i64(5);
        assert!((&x * &x.inverse().unwrap()).is_one());
        assert!(z27.from_i64(6).inverse().is_err());
        assert_eq!(RingSpec::Integers.from_i64(-1).inverse().unwrap().lift(), BigInt::from(-1));
        assert!(RingSpec::Integers.from_i64(2).inverse().is_err());
    }

    fn spec_strategy() -> impl Strategy<Value = RingSpec> {
        prop_oneof![
            Just(f(2)),
            Just(f(7)),
            Just(RingSpec::mod_prime_power(3, 4).unwrap()),
            Just(RingSpec::Integers),
        ]
    }

    proptest! {
        #[test]
        fn ring_axioms(spec in spec_strategy(), a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
            let (a, b, c) = (spec.from_i64(a), spec.from_i64(b), spec.from_i64(c));
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn canonical_matches_integer_reduction(spec in spec_strategy(), a in -10_000i64..10_000, b in -10_000i64..10_000) {
            let direct = spec.reduce(&(BigInt::from(a) * BigInt::from(b)));
            prop_assert_eq!(direct, spec.from_i64(a) * spec.from_i64(b));
        }

        #[test]
        fn valuation_is_additive(x in 1i64..100_000, y in 1i64..100_000, p in prop_oneof![Just(2u64), Just(3), Just(5)]) {
            let vx = val_p(&BigInt::from(x), p);
            let vy = val_p(&BigInt::from(y), p);
            let vxy = val_p(&(BigInt::from(x) * BigInt::from(y)), p);
            match (vx, vy, vxy) {
                (Valuation::Finite(a), Valuation::Finite(b), Valuation::Finite(c)) => prop_assert_eq!(a + b, c),
                _ => prop_assert!(false, "nonzero values have finite valuation"),
            }
        }
    }
}
