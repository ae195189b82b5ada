//! Exact scalar arithmetic: arbitrary-precision rationals and the ring of
//! polynomials in odd zeta values `zeta(3), zeta(5), ...`.
//!
//! Zeta values are opaque generators; nothing in this module ever substitutes
//! a floating approximation. Every polynomial carries two weight gradings:
//! the usual weight `w(zeta(n)) = n` and the modified weight
//! `W(zeta(2n+1)) = 2n`, both extended by `w(ab) = w(a) + w(b)` and
//! `w(a+b) = max(w(a), w(b))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest zeta index admitted by default. Expansions of total degree up to
/// 30 only ever need `zeta(31)`; anything larger is rejected rather than
/// silently truncated.
pub const DEFAULT_MAX_ZETA_INDEX: u32 = 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarsError {
    #[error("zeta index {0} is even; generators are zeta(n) for odd n >= 3")]
    EvenZetaIndex(u32),
    #[error("zeta index {0} is below 3")]
    ZetaIndexTooSmall(u32),
    #[error("zeta index {index} exceeds the configured cap {cap}")]
    ZetaIndexAboveCap { index: u32, cap: u32 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational literal `{0}`")]
    BadRationalLiteral(String),
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational, always reduced, denominator always positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Result<Self, ScalarsError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ScalarsError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// Panicking constructor for literals known to be well formed.
    pub fn frac(num: i64, den: i64) -> Self {
        Rational::new(num, den).expect("nonzero denominator")
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// For integer rationals, the integer value if it fits in `i64`.
    pub fn to_integer(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ScalarsError> {
        if self.is_zero() {
            return Err(ScalarsError::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Nearest-double conversion that stays accurate even when numerator and
    /// denominator individually overflow `f64`: the quotient is rescaled by a
    /// power of two so that a ~64-bit integer division captures the mantissa.
    pub fn to_f64(&self) -> f64 {
        let num = self.0.numer();
        let den = self.0.denom();
        if num.is_zero() {
            return 0.0;
        }
        let nbits = num.bits() as i64;
        let dbits = den.bits() as i64;
        let shift = 64 - (nbits - dbits);
        let q = if shift >= 0 {
            (num << shift as usize) / den
        } else {
            num / (den << (-shift) as usize)
        };
        let qf = match q.to_f64() {
            Some(v) => v,
            None => return f64::NAN,
        };
        let e = -shift;
        if e > 1100 {
            return if qf < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if e < -1200 {
            return 0.0;
        }
        qf * 2f64.powi(e as i32)
    }

}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = ScalarsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarsError::BadRationalLiteral(s.to_string());
        match s.split_once('/') {
            None => {
                let n: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(ScalarsError::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Serialized as the string `"p/q"` (or `"p"` for integers).
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

/// `n!` as a rational scalar.
pub fn factorial_rat(n: u32) -> Rational {
    Rational::from_bigint(factorial(n))
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc = &acc * &(x + &Rational::from_int(i as i64));
    }
    acc
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Weight of a zeta polynomial: a finite integer, or `-inf` for zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Weight {
    NegInfinity,
    Finite(i64),
}

impl Weight {
    pub fn finite(self) -> Option<i64> {
        match self {
            Weight::NegInfinity => None,
            Weight::Finite(v) => Some(v),
        }
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a + b),
            _ => Weight::NegInfinity,
        }
    }
}

impl Sub<i64> for Weight {
    type Output = Weight;
    fn sub(self, rhs: i64) -> Weight {
        match self {
            Weight::Finite(a) => Weight::Finite(a - rhs),
            w => w,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::NegInfinity => write!(f, "-inf"),
            Weight::Finite(v) => write!(f, "{}", v),
        }
    }
}

// ---------------------------------------------------------------------------
// ZetaMonomial
// ---------------------------------------------------------------------------

/// A monomial in odd zeta values, e.g. `zeta(3)^2 * zeta(7)`.
///
/// The empty exponent map is the unit monomial. Stored exponents are always
/// positive and keys are odd integers `>= 3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ZetaMonomial {
    exps: BTreeMap<u32, u32>,
}

impl ZetaMonomial {
    pub fn unit() -> Self {
        ZetaMonomial::default()
    }

    pub fn zeta(index: u32) -> Result<Self, ScalarsError> {
        Self::zeta_with_cap(index, DEFAULT_MAX_ZETA_INDEX)
    }

    pub fn zeta_with_cap(index: u32, cap: u32) -> Result<Self, ScalarsError> {
        if index.is_multiple_of(2) {
            return Err(ScalarsError::EvenZetaIndex(index));
        }
        if index < 3 {
            return Err(ScalarsError::ZetaIndexTooSmall(index));
        }
        if index > cap {
            return Err(ScalarsError::ZetaIndexAboveCap { index, cap });
        }
        let mut exps = BTreeMap::new();
        exps.insert(index, 1);
        Ok(ZetaMonomial { exps })
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|(&k, &v)| (k, v))
    }

    /// Usual weight: sum of indices with multiplicity.
    pub fn weight(&self) -> i64 {
        self.exps.iter().map(|(&k, &v)| k as i64 * v as i64).sum()
    }

    /// Modified weight: `W(zeta(2n+1)) = 2n`, i.e. index minus one per factor.
    pub fn modified_weight(&self) -> i64 {
        self.exps
            .iter()
            .map(|(&k, &v)| (k as i64 - 1) * v as i64)
            .sum()
    }

    /// Number of zeta factors counted with multiplicity.
    pub fn factor_count(&self) -> i64 {
        self.exps.values().map(|&v| v as i64).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (&k, &v) in &other.exps {
            *exps.entry(k).or_insert(0) += v;
        }
        ZetaMonomial { exps }
    }

    /// Index list with multiplicity, e.g. `zeta(3)^2 zeta(7)` -> `[3, 3, 7]`.
    fn index_list(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (&k, &v) in &self.exps {
            for _ in 0..v {
                out.push(k);
            }
        }
        out
    }
}

/// Canonical ordering: graded lexicographic by (weight, sorted index list).
impl Ord for ZetaMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.index_list().cmp(&other.index_list()))
    }
}

impl PartialOrd for ZetaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ZetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&k, &v) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if v == 1 {
                write!(f, "zeta({})", k)?;
            } else {
                write!(f, "zeta({})^{}", k, v)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// ZetaPoly
// ---------------------------------------------------------------------------

/// Polynomial in odd zeta values with exact rational coefficients.
///
/// No zero coefficients are stored; term order is the canonical graded order
/// of [`ZetaMonomial`], so equal polynomials have identical representations.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ZetaPoly {
    terms: BTreeMap<ZetaMonomial, Rational>,
}

impl ZetaPoly {
    pub fn zero() -> Self {
        ZetaPoly::default()
    }

    pub fn one() -> Self {
        ZetaPoly::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(ZetaMonomial::unit(), r);
        }
        ZetaPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        ZetaPoly::from_rational(Rational::from_int(n))
    }

    /// The generator `zeta(index)`.
    pub fn zeta(index: u32) -> Result<Self, ScalarsError> {
        Self::zeta_with_cap(index, DEFAULT_MAX_ZETA_INDEX)
    }

    pub fn zeta_with_cap(index: u32, cap: u32) -> Result<Self, ScalarsError> {
        let m = ZetaMonomial::zeta_with_cap(index, cap)?;
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        Ok(ZetaPoly { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ZetaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the unit monomial.
    pub fn constant_part(&self) -> Rational {
        self.terms
            .get(&ZetaMonomial::unit())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Some(r)` when the polynomial is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(r) = self.terms.get(&ZetaMonomial::unit()) {
                return Some(r.clone());
            }
        }
        None
    }

    fn insert_term(terms: &mut BTreeMap<ZetaMonomial, Rational>, m: ZetaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        ZetaPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), -c);
        }
        ZetaPoly { terms }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        ZetaPoly { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                Self::insert_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        ZetaPoly { terms }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return ZetaPoly::zero();
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect();
        ZetaPoly { terms }
    }

    /// Usual weight `w`: `w(zeta(n)) = n`, `w(0) = -inf`, nonzero rationals
    /// have weight 0.
    pub fn weight(&self) -> Weight {
        self.terms
            .keys()
            .map(|m| Weight::Finite(m.weight()))
            .max()
            .unwrap_or(Weight::NegInfinity)
    }

    /// Modified weight `W`: `W(zeta(2n+1)) = 2n`, same combination rules.
    pub fn modified_weight(&self) -> Weight {
        self.terms
            .keys()
            .map(|m| Weight::Finite(m.modified_weight()))
            .max()
            .unwrap_or(Weight::NegInfinity)
    }

    /// Largest zeta index appearing anywhere in the polynomial.
    pub fn max_zeta_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().map(|(k, _)| k))
            .max()
    }

    /// Numeric value given an evaluator for the zeta constants.
    pub fn eval_with(&self, mut zeta: impl FnMut(u32) -> f64) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64();
            for (k, e) in m.exponents() {
                term *= zeta(k).powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// The purely rational part and the zeta-bearing remainder.
    pub fn split_rational(&self) -> (Rational, ZetaPoly) {
        let rational = self.constant_part();
        let mut rest = self.clone();
        rest.terms.remove(&ZetaMonomial::unit());
        (rational, rest)
    }
}

macro_rules! zetapoly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ZetaPoly {
            type Output = ZetaPoly;
            fn $method(self, rhs: ZetaPoly) -> ZetaPoly {
                ZetaPoly::$method(&self, &rhs)
            }
        }
        impl<'a, 'b> $trait<&'b ZetaPoly> for &'a ZetaPoly {
            type Output = ZetaPoly;
            fn $method(self, rhs: &'b ZetaPoly) -> ZetaPoly {
                ZetaPoly::$method(self, rhs)
            }
        }
    };
}

zetapoly_binop!(Add, add);
zetapoly_binop!(Sub, sub);
zetapoly_binop!(Mul, mul);

impl Neg for ZetaPoly {
    type Output = ZetaPoly;
    fn neg(self) -> ZetaPoly {
        ZetaPoly::neg(&self)
    }
}

impl Neg for &ZetaPoly {
    type Output = ZetaPoly;
    fn neg(self) -> ZetaPoly {
        ZetaPoly::neg(self)
    }
}

impl fmt::Display for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let piece = if m.is_unit() {
                format!("{}", c)
            } else if c.is_one() {
                format!("{}", m)
            } else if (-c).is_one() {
                format!("-{}", m)
            } else {
                format!("{}*{}", c, m)
            };
            if i == 0 {
                out.push_str(&piece);
            } else if let Some(stripped) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        write!(f, "{}", out)
    }
}

// JSON schema: {"terms":[{"zetas":{"3":2,"7":1},"num":"-9","den":"28"}]}
impl Serialize for ZetaPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermRepr {
            zetas: BTreeMap<String, u32>,
            num: String,
            den: String,
        }
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                zetas: m.exponents().map(|(k, v)| (k.to_string(), v)).collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        let mut s = serializer.serialize_struct("ZetaPoly", 1)?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ZetaPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct TermRepr {
            zetas: BTreeMap<String, u32>,
            num: String,
            den: String,
        }
        #[derive(Deserialize)]
        struct PolyRepr {
            terms: Vec<TermRepr>,
        }
        let repr = PolyRepr::deserialize(deserializer)?;
        let mut out = ZetaPoly::zero();
        for t in repr.terms {
            let num: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            let coeff = Rational::new(num, den).map_err(D::Error::custom)?;
            let mut mono = ZetaMonomial::unit();
            for (k, v) in t.zetas {
                let idx: u32 = k.parse().map_err(D::Error::custom)?;
                if v == 0 {
                    continue;
                }
                let gen = ZetaMonomial::zeta(idx).map_err(D::Error::custom)?;
                for _ in 0..v {
                    mono = mono.mul(&gen);
                }
            }
            let term = {
                let mut terms = BTreeMap::new();
                ZetaPoly::insert_term(&mut terms, mono, coeff);
                ZetaPoly { terms }
            };
            out = &out + &term;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zp(n: u32) -> ZetaPoly {
        ZetaPoly::zeta(n).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let z3 = zp(3);
        let sum = &z3 + &z3.scale(&Rational::from_int(-1));
        assert!(sum.is_zero());
    }

    #[test]
    fn monomial_product() {
        let p = &zp(3) * &zp(5);
        assert_eq!(p.term_count(), 1);
        let (m, c) = p.terms().next().unwrap();
        assert!(c.is_one());
        assert_eq!(m.weight(), 8);
    }

    #[test]
    fn distributes_by_hand() {
        // (2 zeta3 - 3) * zeta3 = 2 zeta3^2 - 3 zeta3
        let lhs = (&zp(3).scale(&Rational::from_int(2)) - &ZetaPoly::from_int(3)) * zp(3);
        let expected = &(&zp(3) * &zp(3)).scale(&Rational::from_int(2))
            - &zp(3).scale(&Rational::from_int(3));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn weight_w_rules() {
        assert_eq!((&zp(3) * &zp(5)).weight(), Weight::Finite(8));
        assert_eq!(ZetaPoly::zero().weight(), Weight::NegInfinity);
        assert_eq!(
            ZetaPoly::from_rational(Rational::frac(7, 2)).weight(),
            Weight::Finite(0)
        );
    }

    #[test]
    fn weight_modified_rules() {
        assert_eq!(zp(3).modified_weight(), Weight::Finite(2));
        let p = &(&zp(3) * &zp(3)) * &zp(7);
        assert_eq!(p.modified_weight(), Weight::Finite(10));
        assert_eq!(ZetaPoly::one().modified_weight(), Weight::Finite(0));
    }

    #[test]
    fn zeta_index_validation() {
        assert!(matches!(
            ZetaPoly::zeta(4),
            Err(ScalarsError::EvenZetaIndex(4))
        ));
        assert!(matches!(
            ZetaPoly::zeta(1),
            Err(ScalarsError::ZetaIndexTooSmall(1))
        ));
        assert!(matches!(
            ZetaPoly::zeta(33),
            Err(ScalarsError::ZetaIndexAboveCap { index: 33, cap: 31 })
        ));
        assert!(ZetaPoly::zeta_with_cap(33, 40).is_ok());
    }

    #[test]
    fn json_schema_round_trip() {
        let p = (&zp(3) * &(&zp(3) * &zp(7))).scale(&Rational::frac(-9, 28));
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"num\":\"-9\""));
        assert!(json.contains("\"den\":\"28\""));
        assert!(json.contains("\"3\":2"));
        let back: ZetaPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rational_string_forms() {
        let r: Rational = "-5/3".parse().unwrap();
        assert_eq!(r, Rational::frac(-5, 3));
        assert_eq!(r.to_string(), "-5/3");
        assert_eq!(Rational::frac(4, 2).to_string(), "2");
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn rational_to_f64_handles_huge_values() {
        // 3^200 * 120! / 7 is far beyond i64 but well inside f64 range.
        let mut num = BigInt::one();
        for _ in 0..200 {
            num *= 3;
        }
        num *= factorial(120);
        let r = Rational::new(num.clone(), BigInt::from(7)).unwrap();
        let expect = 200.0 * (3f64).ln() + {
            let mut s = 0.0;
            for i in 2..=120u32 {
                s += (i as f64).ln();
            }
            s
        } - (7f64).ln();
        assert!((r.to_f64().ln() - expect).abs() < 1e-9);
    }

    #[test]
    fn pochhammer_values() {
        let half = Rational::frac(1, 2);
        // (1/2)_2 = 1/2 * 3/2 = 3/4
        assert_eq!(pochhammer(&half, 2), Rational::frac(3, 4));
        assert_eq!(pochhammer(&half, 0), Rational::one());
    }

    #[test]
    fn canonical_order_is_graded() {
        let a = &(&zp(3) * &zp(3)) * &zp(7); // weight 13
        let b = &zp(3) * &(&zp(5) * &zp(5)); // weight 13
        let ma = a.terms().next().unwrap().0.clone();
        let mb = b.terms().next().unwrap().0.clone();
        // [3,3,7] < [3,5,5] lexicographically at equal weight
        assert!(ma < mb);
        assert!(zp(9).terms().next().unwrap().0 < &ma);
    }

    fn arb_poly() -> impl Strategy<Value = ZetaPoly> {
        proptest::collection::vec(
            (
                proptest::collection::vec((1u32..5, 1u32..3), 0..3),
                -20i64..20,
                1i64..10,
            ),
            0..4,
        )
        .prop_map(|terms| {
            let mut p = ZetaPoly::zero();
            for (factors, num, den) in terms {
                let mut mono = ZetaMonomial::unit();
                for (idx, e) in factors {
                    let gen = ZetaMonomial::zeta(2 * idx + 1).unwrap();
                    for _ in 0..e {
                        mono = mono.mul(&gen);
                    }
                }
                let mut terms = BTreeMap::new();
                ZetaPoly::insert_term(&mut terms, mono, Rational::frac(num, den));
                p = &p + &ZetaPoly { terms };
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn weight_multiplicativity(a in arb_poly(), b in arb_poly()) {
            let prod = &a * &b;
            if !a.is_zero() && !b.is_zero() {
                // Products of distinct monomial sets can never cancel the
                // leading weight, so equality holds.
                prop_assert_eq!(prod.weight(), a.weight() + b.weight());
                prop_assert_eq!(prod.modified_weight(), a.modified_weight() + b.modified_weight());
            } else {
                prop_assert_eq!(prod.weight(), Weight::NegInfinity);
            }
        }

        #[test]
        fn weight_subadditivity(a in arb_poly(), b in arb_poly()) {
            let sum = &a + &b;
            prop_assert!(sum.weight() <= a.weight().max(b.weight()));
            prop_assert!(sum.modified_weight() <= a.modified_weight().max(b.modified_weight()));
        }

        #[test]
        fn modified_weight_counts_factors(a in arb_poly()) {
            for (m, _) in a.terms() {
                prop_assert_eq!(m.modified_weight(), m.weight() - m.factor_count());
            }
        }
    }
}
