//! Truncated formal power series in one variable and triangular bivariate
//! series, generic over the coefficient ring.
//!
//! Truncation order is explicit state: a series of order `N` stores the
//! coefficients `c_0..c_N` and is understood modulo `a^{N+1}`. Sums carry the
//! minimum of the operand orders; products use the sharper valuation-aware
//! rule, so that e.g. multiplying two series that both vanish at the origin
//! gains one trusted order. Nothing ever loses order silently.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::scalars::{factorial_rat, Rational, ZetaPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("exp requires zero constant term")]
    ExpRequiresZeroConstant,
    #[error("index ({m},{n}) outside triangular range of order {order}")]
    IndexOutOfRange { m: usize, n: usize, order: usize },
}

/// Coefficient ring for formal series.
///
/// The `_ref` arithmetic avoids cloning heap-backed scalars in inner loops;
/// `from_rational` embeds the prime field, which every ring used here
/// (rationals, zeta polynomials, complex doubles) contains.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Coeff for ZetaPoly {
    fn zero() -> Self {
        ZetaPoly::zero()
    }
    fn one() -> Self {
        ZetaPoly::one()
    }
    fn is_zero(&self) -> bool {
        ZetaPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        ZetaPoly::from_rational(r.clone())
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64(), 0.0)
    }
}

// ---------------------------------------------------------------------------
// FormalSeries
// ---------------------------------------------------------------------------

/// Truncated power series `c_0 + c_1 a + ... + c_N a^N` (mod `a^{N+1}`).
#[derive(Clone, PartialEq, Debug)]
pub struct FormalSeries<R: Coeff> {
    coeffs: Vec<R>,
    order: usize,
}

impl<R: Coeff> FormalSeries<R> {
    /// Build from coefficients, padding with zeros or truncating to `order`.
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, R::zero());
        FormalSeries { coeffs, order }
    }

    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        let order = coeffs.len() - 1;
        FormalSeries { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        FormalSeries::new(Vec::new(), order)
    }

    pub fn constant(c: R, order: usize) -> Self {
        FormalSeries::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    /// `c * a^k` as a series of the given order.
    pub fn monomial(c: R, k: usize, order: usize) -> Self {
        assert!(k <= order, "monomial degree exceeds order");
        let mut coeffs = vec![R::zero(); order + 1];
        coeffs[k] = c;
        FormalSeries { coeffs, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &R {
        assert!(n <= self.order, "coefficient {n} beyond order {}", self.order);
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    /// Index of the first nonzero stored coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn valuation_bound(&self) -> usize {
        self.valuation().unwrap_or(self.order + 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].add_ref(&other.coeffs[i]))
            .collect();
        FormalSeries { coeffs, order }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].sub_ref(&other.coeffs[i]))
            .collect();
        FormalSeries { coeffs, order }
    }

    pub fn neg(&self) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(R::neg_ref).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|x| x.mul_ref(c)).collect(),
            order: self.order,
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&R::from_rational(r))
    }

    /// Truncated Cauchy product. The result order is
    /// `min(order(f) + val(g), order(g) + val(f))`: all computed coefficients
    /// are genuinely trusted, which is what lets the renormalization-group
    /// towers keep `gamma_k = O(a^k)` to a useful order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation_bound())
            .min(other.order + self.valuation_bound());
        let mut coeffs = vec![R::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let jmax = (order - i).min(other.order);
            for (j, b) in other.coeffs[..=jmax].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
            }
        }
        FormalSeries { coeffs, order }
    }

    /// Multiply by `a^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order + k;
        let mut coeffs = vec![R::zero(); order + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + k] = c.clone();
        }
        FormalSeries { coeffs, order }
    }

    /// Substitute `a -> a^k`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1, "compose_power needs k >= 1");
        let order = k * (self.order + 1) - 1;
        let mut coeffs = vec![R::zero(); order + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        FormalSeries { coeffs, order }
    }

    /// Truncate to order `m`; truncating above the current order is a no-op
    /// (it cannot create information).
    pub fn truncate(&self, m: usize) -> Self {
        if m >= self.order {
            return self.clone();
        }
        FormalSeries {
            coeffs: self.coeffs[..=m].to_vec(),
            order: m,
        }
    }

    /// The Euler operator `a d/da`: coefficient `n` becomes `n * c_n`.
    pub fn euler(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.mul_ref(&R::from_int(n as i64)))
            .collect();
        FormalSeries {
            coeffs,
            order: self.order,
        }
    }

    /// Plain derivative `d/da`; loses one order.
    pub fn derivative(&self) -> Self {
        if self.order == 0 {
            return FormalSeries::zero(0);
        }
        let coeffs = (1..=self.order)
            .map(|n| self.coeffs[n].mul_ref(&R::from_int(n as i64)))
            .collect();
        FormalSeries {
            coeffs,
            order: self.order - 1,
        }
    }

    /// Exponential of a series with zero constant term, via the recurrence
    /// `n g_n = sum_{j<=n} j f_j g_{n-j}`. Exact whenever the ring contains
    /// the rationals.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpRequiresZeroConstant);
        }
        let n = self.order;
        let theta = self.euler();
        let mut out = vec![R::zero(); n + 1];
        out[0] = R::one();
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                if theta.coeffs[j].is_zero() || out[k - j].is_zero() {
                    continue;
                }
                acc = acc.add_ref(&theta.coeffs[j].mul_ref(&out[k - j]));
            }
            out[k] = acc.mul_ref(&R::from_rational(&Rational::frac(1, k as i64)));
        }
        Ok(FormalSeries {
            coeffs: out,
            order: n,
        })
    }

    /// Divide by a series with unit leading coefficient.
    pub fn div_unit(&self, den: &Self) -> Self {
        assert!(
            den.coeffs[0] == R::one(),
            "div_unit requires a unit constant term"
        );
        let order = self.order.min(den.order);
        let mut out = vec![R::zero(); order + 1];
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for (j, oj) in out.iter().enumerate().take(n) {
                if oj.is_zero() || den.coeffs[n - j].is_zero() {
                    continue;
                }
                acc = acc.sub_ref(&oj.mul_ref(&den.coeffs[n - j]));
            }
            out[n] = acc;
        }
        FormalSeries { coeffs: out, order }
    }

    /// Map coefficients into another ring.
    pub fn map<S: Coeff>(&self, f: impl FnMut(&R) -> S) -> FormalSeries<S> {
        FormalSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            order: self.order,
        }
    }
}

impl<R: Coeff> Add for &FormalSeries<R> {
    type Output = FormalSeries<R>;
    fn add(self, rhs: Self) -> FormalSeries<R> {
        FormalSeries::add(self, rhs)
    }
}

impl<R: Coeff> Sub for &FormalSeries<R> {
    type Output = FormalSeries<R>;
    fn sub(self, rhs: Self) -> FormalSeries<R> {
        FormalSeries::sub(self, rhs)
    }
}

impl<R: Coeff> Mul for &FormalSeries<R> {
    type Output = FormalSeries<R>;
    fn mul(self, rhs: Self) -> FormalSeries<R> {
        FormalSeries::mul(self, rhs)
    }
}

impl<R: Coeff> Neg for &FormalSeries<R> {
    type Output = FormalSeries<R>;
    fn neg(self) -> FormalSeries<R> {
        FormalSeries::neg(self)
    }
}

impl<R: Coeff + fmt::Display> fmt::Display for FormalSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            match n {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*a", c)?,
                _ => write!(f, "({})*a^{}", c, n)?,
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(a^{})", self.order + 1)
    }
}

/// CSV rows `n,coefficient` with a caller-chosen coefficient serializer.
pub fn csv_rows<R: Coeff>(series: &FormalSeries<R>, mut ser: impl FnMut(&R) -> String) -> String {
    let mut out = String::from("n,coefficient\n");
    for (n, c) in series.coeffs().iter().enumerate() {
        out.push_str(&format!("{},{}\n", n, ser(c)));
    }
    out
}

// ---------------------------------------------------------------------------
// BiSeries
// ---------------------------------------------------------------------------

/// Triangular bivariate series: coefficients `h_{m,n}` for `m + n <= order`,
/// stored by homogeneous degree (`rows[d][m]` is the coefficient of
/// `x^m y^{d-m}`).
#[derive(Clone, PartialEq, Debug)]
pub struct BiSeries<R: Coeff> {
    rows: Vec<Vec<R>>,
    order: usize,
    symmetric: bool,
}

impl<R: Coeff> BiSeries<R> {
    pub fn zero(order: usize) -> Self {
        let rows = (0..=order).map(|d| vec![R::zero(); d + 1]).collect();
        BiSeries {
            rows,
            order,
            symmetric: true,
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.rows[0][0] = R::one();
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, m: usize, n: usize) -> &R {
        assert!(m + n <= self.order, "index outside triangle");
        &self.rows[m + n][m]
    }

    pub fn set(&mut self, m: usize, n: usize, v: R) {
        assert!(m + n <= self.order, "index outside triangle");
        self.rows[m + n][m] = v;
        self.symmetric = false;
    }

    /// Homogeneous component of degree `d` (coefficients of `x^m y^{d-m}`).
    pub fn row(&self, d: usize) -> &[R] {
        &self.rows[d]
    }

    pub fn is_symmetric(&self) -> bool {
        for d in 0..=self.order {
            for m in 0..=d {
                if self.rows[d][m] != self.rows[d][d - m] {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let rows = (0..=order)
            .map(|d| {
                (0..=d)
                    .map(|m| self.rows[d][m].add_ref(&other.rows[d][m]))
                    .collect()
            })
            .collect();
        BiSeries {
            rows,
            order,
            symmetric: false,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let rows = (0..=order)
            .map(|d| {
                (0..=d)
                    .map(|m| self.rows[d][m].sub_ref(&other.rows[d][m]))
                    .collect()
            })
            .collect();
        BiSeries {
            rows,
            order,
            symmetric: false,
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|x| x.mul_ref(c)).collect())
            .collect();
        BiSeries {
            rows,
            order: self.order,
            symmetric: false,
        }
    }

    /// Truncated product by total degree.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for (da, rowa) in self.rows.iter().enumerate() {
            if da > order {
                break;
            }
            for (db, rowb) in other.rows.iter().enumerate() {
                if da + db > order {
                    break;
                }
                for (ma, a) in rowa.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (mb, b) in rowb.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let d = da + db;
                        let m = ma + mb;
                        out.rows[d][m] = out.rows[d][m].add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        out.symmetric = false;
        out
    }

    /// Exponential via the graded recurrence `d E_d = sum_j (j S_j) E_{d-j}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.rows[0][0].is_zero() {
            return Err(SeriesError::ExpRequiresZeroConstant);
        }
        let order = self.order;
        let mut out = Self::one(order);
        for d in 1..=order {
            let mut acc = vec![R::zero(); d + 1];
            for j in 1..=d {
                let sj = &self.rows[j];
                let e = &out.rows[d - j];
                let jr = R::from_int(j as i64);
                for (m1, s) in sj.iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let sj_scaled = s.mul_ref(&jr);
                    for (m2, ev) in e.iter().enumerate() {
                        if ev.is_zero() {
                            continue;
                        }
                        acc[m1 + m2] = acc[m1 + m2].add_ref(&sj_scaled.mul_ref(ev));
                    }
                }
            }
            let inv_d = R::from_rational(&Rational::frac(1, d as i64));
            for (m, v) in acc.into_iter().enumerate() {
                out.rows[d][m] = v.mul_ref(&inv_d);
            }
        }
        out.symmetric = false;
        Ok(out)
    }

    /// Mixed partial derivative at the origin: `m! n! h_{m,n}`.
    pub fn eval_partial(&self, m: usize, n: usize) -> Result<R, SeriesError> {
        if m + n > self.order {
            return Err(SeriesError::IndexOutOfRange {
                m,
                n,
                order: self.order,
            });
        }
        let fac = factorial_rat(m as u32) * factorial_rat(n as u32);
        Ok(self.rows[m + n][m].mul_ref(&R::from_rational(&fac)))
    }
}
