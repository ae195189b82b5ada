//! The Borel dictionary.
//!
//! The Borel transform sends `sum_{n>=0} c_n a^{n+1}` to
//! `sum_{n>=0} c_n xi^n / n!`; it is a ring morphism turning the pointwise
//! product into the convolution `(f*g)(xi) = int_0^xi f(xi-t) g(t) dt`.
//! Multiplication by `a` becomes the primitive vanishing at zero, and the
//! Euler operator `a d/da` becomes `d/dxi (xi .)`.
//!
//! The second half of the module is the local calculus at a singularity: the
//! closed forms `(1-xi)^{beta+n-1}` (with a logarithm when the exponent is a
//! non-negative integer), their behaviour under convolution with regular
//! germs, and the operator extracting the singular germ as an expansion at
//! the origin.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalars::{factorial_rat, pochhammer, Rational};
use crate::series::{Coeff, FormalSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BorelError {
    #[error("Borel transform requires zero constant term (the convolution unit, a Dirac mass, is deliberately not represented)")]
    NonzeroConstantTerm,
    #[error("integer order {beta} with shift {shift} gives exponent below -1; only simple poles arise here")]
    UnsupportedExponent { beta: String, shift: u32 },
    #[error("regular factor is identically zero to its truncation order")]
    ZeroRegularFactor,
    #[error("cannot convolve a germ of exponent -1 with a regular factor in closed form")]
    PoleGermConvolution,
}

// ---------------------------------------------------------------------------
// BorelSeries
// ---------------------------------------------------------------------------

/// Truncated series in the Borel variable `xi`. Distinct from
/// [`FormalSeries`] so physical-plane and Borel-plane data cannot be mixed by
/// accident; conversion goes through [`borel`] / [`laplace`].
#[derive(Clone, PartialEq, Debug)]
pub struct BorelSeries<R: Coeff> {
    inner: FormalSeries<R>,
}

impl<R: Coeff> BorelSeries<R> {
    /// Wrap raw `xi`-coefficients.
    pub fn from_xi_coeffs(coeffs: Vec<R>) -> Self {
        BorelSeries {
            inner: FormalSeries::from_coeffs(coeffs),
        }
    }

    pub fn zero(order: usize) -> Self {
        BorelSeries {
            inner: FormalSeries::zero(order),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn coeff(&self, n: usize) -> &R {
        self.inner.coeff(n)
    }

    pub fn coeffs(&self) -> &[R] {
        self.inner.coeffs()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn valuation(&self) -> Option<usize> {
        self.inner.valuation()
    }

    pub fn add(&self, other: &Self) -> Self {
        BorelSeries {
            inner: self.inner.add(&other.inner),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BorelSeries {
            inner: self.inner.sub(&other.inner),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        BorelSeries {
            inner: self.inner.scale(c),
        }
    }

    pub fn truncate(&self, m: usize) -> Self {
        BorelSeries {
            inner: self.inner.truncate(m),
        }
    }

    /// Evaluate at a point of the coefficient ring (Horner).
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.inner.coeffs().iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }
}

/// Borel transform of a physical series with zero constant term:
/// coefficient `n` of the image is `c_{n+1}/n!`.
pub fn borel<R: Coeff>(f: &FormalSeries<R>) -> Result<BorelSeries<R>, BorelError> {
    if !f.coeff(0).is_zero() {
        return Err(BorelError::NonzeroConstantTerm);
    }
    if f.order() == 0 {
        return Ok(BorelSeries::zero(0));
    }
    let mut inv_fact = Rational::one();
    let coeffs = (1..=f.order())
        .map(|n| {
            if n > 1 {
                inv_fact = &inv_fact / &Rational::from_int((n - 1) as i64);
            }
            f.coeff(n).mul_ref(&R::from_rational(&inv_fact))
        })
        .collect();
    Ok(BorelSeries {
        inner: FormalSeries::from_coeffs(coeffs),
    })
}

/// Formal inverse of [`borel`] (term-wise Laplace): `c_{n+1} = n! g_n`.
pub fn laplace<R: Coeff>(g: &BorelSeries<R>) -> FormalSeries<R> {
    let mut coeffs = vec![R::zero()];
    let mut fact = Rational::one();
    for n in 0..=g.order() {
        if n > 0 {
            fact = &fact * &Rational::from_int(n as i64);
        }
        coeffs.push(g.coeff(n).mul_ref(&R::from_rational(&fact)));
    }
    FormalSeries::from_coeffs(coeffs)
}

/// Convolution product `(f*g)(xi) = int_0^xi f(xi-t) g(t) dt` on truncations,
/// the Borel image of the pointwise product.
pub fn convolve<R: Coeff>(f: &BorelSeries<R>, g: &BorelSeries<R>) -> BorelSeries<R> {
    let vf = f.valuation().unwrap_or(f.order() + 1);
    let vg = g.valuation().unwrap_or(g.order() + 1);
    let order = (f.order() + vg + 1).min(g.order() + vf + 1);
    let fact: Vec<Rational> = {
        let mut v = Vec::with_capacity(order + 1);
        let mut acc = Rational::one();
        v.push(acc.clone());
        for n in 1..=order {
            acc = &acc * &Rational::from_int(n as i64);
            v.push(acc.clone());
        }
        v
    };
    let mut coeffs = vec![R::zero(); order + 1];
    for (i, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs().iter().enumerate() {
            let n = i + j + 1;
            if n > order {
                break;
            }
            if b.is_zero() {
                continue;
            }
            // xi^i * xi^j -> i! j! / (i+j+1)! xi^{i+j+1}
            let w = &(&fact[i] * &fact[j]) / &fact[n];
            coeffs[n] = coeffs[n].add_ref(&a.mul_ref(b).mul_ref(&R::from_rational(&w)));
        }
    }
    BorelSeries {
        inner: FormalSeries::from_coeffs(coeffs),
    }
}

/// Term-wise primitive vanishing at zero; the Borel image of multiplication
/// by `a`.
pub fn primitive<R: Coeff>(f: &BorelSeries<R>) -> BorelSeries<R> {
    let order = f.order() + 1;
    let mut coeffs = vec![R::zero(); order + 1];
    for (n, c) in f.coeffs().iter().enumerate() {
        coeffs[n + 1] = c.mul_ref(&R::from_rational(&Rational::frac(1, (n + 1) as i64)));
    }
    BorelSeries {
        inner: FormalSeries::from_coeffs(coeffs),
    }
}

/// `d/dxi (xi f)`; the Borel image of the Euler operator `a d/da`.
pub fn xi_euler<R: Coeff>(f: &BorelSeries<R>) -> BorelSeries<R> {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c.mul_ref(&R::from_int(n as i64 + 1)))
        .collect();
    BorelSeries {
        inner: FormalSeries::from_coeffs(coeffs),
    }
}

// ---------------------------------------------------------------------------
// Singular forms
// ---------------------------------------------------------------------------

/// A local singular form at `xi_0`:
/// `coeff * (1 - xi/xi_0)^exponent`, times `ln(1 - xi/xi_0)` when `log` is
/// set. `shift` records the power of `a` whose Borel image produced the form.
///
/// Consistency of the dichotomy is enforced at construction: a `log` form has
/// a non-negative integer exponent; a log-free form has either a non-integer
/// exponent or the simple-pole exponent `-1`.
#[derive(Clone, PartialEq, Debug)]
pub struct SingularForm {
    location: Rational,
    exponent: Rational,
    log: bool,
    coeff: Rational,
    shift: u32,
}

impl SingularForm {
    pub fn new(
        location: Rational,
        exponent: Rational,
        log: bool,
        coeff: Rational,
        shift: u32,
    ) -> Self {
        if log {
            assert!(
                exponent.is_integer() && !exponent.is_negative(),
                "log forms carry non-negative integer exponents"
            );
        } else {
            assert!(
                !exponent.is_integer() || exponent == Rational::from_int(-1),
                "log-free integer exponents arise only for the simple pole"
            );
        }
        SingularForm {
            location,
            exponent,
            log,
            coeff,
            shift,
        }
    }

    pub fn location(&self) -> &Rational {
        &self.location
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn has_log(&self) -> bool {
        self.log
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn is_pole(&self) -> bool {
        !self.log && self.exponent == Rational::from_int(-1)
    }

    /// Same form relocated (the local variable is always `1 - xi/xi_0`).
    pub fn at_location(mut self, location: Rational) -> Self {
        self.location = location;
        self
    }
}

impl fmt::Display for SingularForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * (1 - xi/({}))^({})", self.coeff, self.location, self.exponent)?;
        if self.log {
            write!(f, " * ln(1 - xi/({}))", self.location)?;
        }
        Ok(())
    }
}

impl Serialize for SingularForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SingularForm", 5)?;
        s.serialize_field("location", &self.location.to_string())?;
        s.serialize_field("exponent", &self.exponent.to_string())?;
        s.serialize_field("log", &self.log)?;
        s.serialize_field("coeff", &self.coeff.to_string())?;
        s.serialize_field("shift", &self.shift)?;
        s.end()
    }
}

/// The Borel image of `a^n C` near `xi = 1` for a symbol `C` whose
/// coefficients satisfy `C_{k+1}/C_k -> k - beta`:
///
/// - non-integer `beta`: `(-1)^n / (beta)_n * (1-xi)^{beta+n-1}`;
/// - integer `beta >= 0`: `(-1)^{n+beta} / (beta+n-1)! * (1-xi)^{beta+n-1} ln(1-xi)`,
///   except the bare `beta = 0, n = 0` case, which is the simple pole
///   `(1-xi)^{-1}` (no integration has been performed, so no logarithm).
pub fn singular_form(shift: u32, beta: &Rational) -> Result<SingularForm, BorelError> {
    let exponent = &(beta + &Rational::from_int(shift as i64)) - &Rational::one();
    if beta.is_integer() {
        if beta.is_negative() {
            return Err(BorelError::UnsupportedExponent {
                beta: beta.to_string(),
                shift,
            });
        }
        if exponent == Rational::from_int(-1) {
            // beta = 0, shift = 0: the bare pole
            return Ok(SingularForm::new(
                Rational::one(),
                exponent,
                false,
                Rational::one(),
                0,
            ));
        }
        if exponent.is_negative() {
            return Err(BorelError::UnsupportedExponent {
                beta: beta.to_string(),
                shift,
            });
        }
        let e = exponent.to_integer().expect("integer exponent") as u32;
        let b = beta.to_integer().expect("integer beta") as u32;
        let sign = if (shift + b).is_multiple_of(2) { 1 } else { -1 };
        let coeff = &Rational::from_int(sign) / &factorial_rat(e);
        Ok(SingularForm::new(Rational::one(), exponent, true, coeff, shift))
    } else {
        let sign = if shift.is_multiple_of(2) { 1 } else { -1 };
        let coeff = &Rational::from_int(sign) / &pochhammer(beta, shift);
        Ok(SingularForm::new(
            Rational::one(),
            exponent,
            false,
            coeff,
            shift,
        ))
    }
}

/// Leading singular form of the convolution of a singular form at `xi_0`
/// with a germ regular at the origin whose leading monomial is
/// `lambda xi^{p-1}` (so `lambda (p-1)!` times the Borel image of `a^p`).
///
/// Repeated integration by parts moves the regular factor's vanishing order
/// onto the singular exponent: the exponent increases by `p` and the
/// coefficient picks up `(-1)^p / (e+1)_p`. A simple pole turns into the
/// `(1-xi)^{p-1} ln(1-xi) / (p-1)!` family on its first convolution.
pub fn singular_convolve(
    form: &SingularForm,
    regular: &BorelSeries<Rational>,
) -> Result<SingularForm, BorelError> {
    let lead = regular.valuation().ok_or(BorelError::ZeroRegularFactor)?;
    let p = (lead + 1) as u32;
    let lambda = regular.coeff(lead).clone();
    let scale = &lambda * &factorial_rat(p - 1);
    let new_exponent = &form.exponent + &Rational::from_int(p as i64);
    let sign = Rational::from_int(if p.is_multiple_of(2) { 1 } else { -1 });
    if form.is_pole() {
        // c/(1-xi) * B(a^p) ~ c (-1)^p / (p-1)! (1-xi)^{p-1} ln(1-xi)
        let coeff = &(&form.coeff * &sign) / &factorial_rat(p - 1);
        return Ok(SingularForm::new(
            form.location.clone(),
            new_exponent,
            true,
            &coeff * &scale,
            form.shift + p,
        ));
    }
    let rising = pochhammer(&(&form.exponent + &Rational::one()), p);
    let coeff = &(&form.coeff * &sign) / &rising;
    Ok(SingularForm::new(
        form.location.clone(),
        new_exponent,
        form.log,
        &coeff * &scale,
        form.shift + p,
    ))
}

// ---------------------------------------------------------------------------
// Alien operator at the first singularity
// ---------------------------------------------------------------------------

/// How to read the singular germ off a form.
///
/// The lateral difference (the two analytic continuations around the
/// singularity, subtracted and divided by `2 pi i`) kills every holomorphic
/// germ and every simple pole. The coefficient-extraction view instead
/// reports the pole's residue data. The two views agree away from poles;
/// neither is privileged.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlienView {
    LateralDifference,
    CoefficientExtraction,
}

/// Multiplicative scale of an alien germ, kept symbolic so results stay
/// exact: either 1 or `sin(pi r)/pi` for a rational `r` in `(0, 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GermScale {
    Unit,
    SinPiOverPi(Rational),
}

impl fmt::Display for GermScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermScale::Unit => write!(f, "1"),
            GermScale::SinPiOverPi(r) => write!(f, "sin({} pi)/pi", r),
        }
    }
}

/// A monomial germ `coeff * scale * xi^exponent` describing the singular part
/// transported to the origin.
#[derive(Clone, PartialEq, Debug)]
pub struct AlienGerm {
    pub coeff: Rational,
    pub exponent: Rational,
    pub scale: GermScale,
}

impl AlienGerm {
    /// Canonical constructor: `sin(pi e)` is reduced to `e mod 2` in `[0,1)`
    /// with the sign folded into the coefficient, so equal germs compare
    /// equal.
    pub fn new(coeff: Rational, exponent: Rational, sin_argument: Option<Rational>) -> Self {
        match sin_argument {
            None => AlienGerm {
                coeff,
                exponent,
                scale: GermScale::Unit,
            },
            Some(arg) => {
                // sin(pi (r + k)) = (-1)^k sin(pi r) for integer k
                let floor = floor_rational(&arg);
                let frac = &arg - &Rational::from_int(floor);
                let sign = if floor % 2 == 0 { 1 } else { -1 };
                let coeff = &coeff * &Rational::from_int(sign);
                if frac.is_zero() {
                    // sin of an integer multiple of pi: the germ vanishes
                    AlienGerm {
                        coeff: Rational::zero(),
                        exponent,
                        scale: GermScale::Unit,
                    }
                } else {
                    AlienGerm {
                        coeff,
                        exponent,
                        scale: GermScale::SinPiOverPi(frac),
                    }
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl fmt::Display for AlienGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {} * xi^({})", self.coeff, self.scale, self.exponent)
    }
}

fn floor_rational(r: &Rational) -> i64 {
    let n = r.numer();
    let d = r.denom();
    let q = n / d;
    let rem = n - &q * d;
    use num_traits::{Signed, ToPrimitive, Zero};
    let mut q = q.to_i64().expect("exponent within i64");
    if rem.is_negative() && !rem.is_zero() {
        q -= 1;
    }
    q
}

/// Extract the singular germ of a form located at the first singularity,
/// shifted to an expansion at the origin.
///
/// For `c (1-xi)^e ln(1-xi)` (integer `e >= 0`) the germ is
/// `c (-1)^e xi^e`; for `c (1-xi)^e` (non-integer `e`) it is
/// `c sin(pi e)/pi * xi^e`. A holomorphic input (zero coefficient) gives
/// nothing. Simple poles are invisible to the lateral difference but are
/// reported by the coefficient-extraction view as an exponent `-1` germ.
pub fn alien_delta1(form: &SingularForm, view: AlienView) -> Option<AlienGerm> {
    if form.coeff.is_zero() {
        return None;
    }
    if form.is_pole() {
        return match view {
            AlienView::LateralDifference => None,
            AlienView::CoefficientExtraction => Some(AlienGerm::new(
                form.coeff.clone(),
                form.exponent.clone(),
                None,
            )),
        };
    }
    if form.log {
        let e = form.exponent.to_integer().expect("integer exponent");
        let sign = if e % 2 == 0 { 1 } else { -1 };
        Some(AlienGerm::new(
            &form.coeff * &Rational::from_int(sign),
            form.exponent.clone(),
            None,
        ))
    } else {
        Some(AlienGerm::new(
            form.coeff.clone(),
            form.exponent.clone(),
            Some(form.exponent.clone()),
        ))
    }
}

/// Convolve a germ with a regular factor of leading monomial
/// `lambda xi^{p-1}`: `xi^e * xi^{p-1}/(p-1)! -> xi^{e+p} / (e+1)_p`.
/// Realizes the derivation property of the germ extraction against
/// [`singular_convolve`].
pub fn germ_convolve(
    germ: &AlienGerm,
    regular: &BorelSeries<Rational>,
) -> Result<AlienGerm, BorelError> {
    let lead = regular.valuation().ok_or(BorelError::ZeroRegularFactor)?;
    let p = (lead + 1) as u32;
    let lambda = regular.coeff(lead).clone();
    let rising = pochhammer(&(&germ.exponent + &Rational::one()), p);
    if rising.is_zero() {
        return Err(BorelError::PoleGermConvolution);
    }
    let coeff = &(&germ.coeff * &(&lambda * &factorial_rat(p - 1))) / &rising;
    Ok(AlienGerm {
        coeff,
        exponent: &germ.exponent + &Rational::from_int(p as i64),
        scale: germ.scale.clone(),
    })
}

/// Sum a multiset of germs, merging terms with equal exponent and scale.
pub fn sum_germs(germs: impl IntoIterator<Item = AlienGerm>) -> Vec<AlienGerm> {
    let mut acc: Vec<AlienGerm> = Vec::new();
    for g in germs {
        if g.is_zero() {
            continue;
        }
        if let Some(existing) = acc
            .iter_mut()
            .find(|e| e.exponent == g.exponent && e.scale == g.scale)
        {
            existing.coeff = &existing.coeff + &g.coeff;
        } else {
            acc.push(g);
        }
    }
    acc.retain(|g| !g.coeff.is_zero());
    acc.sort_by(|a, b| a.exponent.cmp(&b.exponent));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn qs(coeffs: &[i64], order: usize) -> FormalSeries<Rational> {
        FormalSeries::new(
            coeffs.iter().map(|&c| Rational::from_int(c)).collect(),
            order,
        )
    }

    #[test]
    fn borel_definition() {
        // B(a) = 1
        let b = borel(&qs(&[0, 1], 1)).unwrap();
        assert_eq!(b.coeffs(), &[Rational::one()]);
        // B(a - 2a^2) = 1 - 2 xi
        let b = borel(&qs(&[0, 1, -2], 2)).unwrap();
        assert_eq!(b.coeffs(), &[q(1, 1), q(-2, 1)]);
        // B(sum n! a^{n+1}) = geometric series
        let f = FormalSeries::from_coeffs(
            std::iter::once(Rational::zero())
                .chain((0..8u32).map(crate::scalars::factorial_rat))
                .collect(),
        );
        let b = borel(&f).unwrap();
        assert!(b.coeffs().iter().all(|c| c.is_one()));
        // constant terms are rejected
        assert!(matches!(
            borel(&qs(&[1, 1], 1)),
            Err(BorelError::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn laplace_inverts_borel() {
        let f = qs(&[0, 3, -5, 7, 11], 4);
        let back = laplace(&borel(&f).unwrap());
        assert_eq!(back, f);
    }

    #[test]
    fn convolution_basics() {
        let one = BorelSeries::from_xi_coeffs(vec![Rational::one()]);
        // 1 * 1 = xi
        let c = convolve(&one, &one);
        assert!(c.coeff(0).is_zero());
        assert_eq!(c.coeff(1), &Rational::one());
        // 1 * xi = xi^2/2
        let xi = BorelSeries::from_xi_coeffs(vec![Rational::zero(), Rational::one()]);
        let c = convolve(&one, &xi);
        assert_eq!(c.coeff(2), &q(1, 2));
    }

    #[test]
    fn ring_morphism_small() {
        let f = qs(&[0, 1, -2], 2);
        let g = qs(&[0, 1], 2);
        // B((a - 2a^2) a) = xi - xi^2
        let lhs = convolve(&borel(&f).unwrap(), &borel(&g).unwrap());
        let rhs = borel(&(&f * &g).truncate(3)).unwrap();
        assert_eq!(lhs.truncate(1).coeffs(), rhs.truncate(1).coeffs());
    }

    #[test]
    fn primitive_and_euler_rules() {
        let f = qs(&[0, 2, -3, 5], 3);
        let bf = borel(&f).unwrap();
        // primitive(B f) = B(a f)
        let lhs = primitive(&bf);
        let rhs = borel(&f.shift_up(1)).unwrap();
        assert_eq!(lhs.coeffs(), rhs.coeffs());
        // xi_euler(B f) = B(a d/da f)
        let lhs = xi_euler(&bf);
        let rhs = borel(&f.euler()).unwrap();
        assert_eq!(lhs.coeffs(), rhs.coeffs());
        // spot values: primitive(1) = xi, xi_euler(1) = 1, xi_euler(xi) = 2 xi
        let one = BorelSeries::from_xi_coeffs(vec![Rational::one()]);
        assert_eq!(primitive(&one).coeff(1), &Rational::one());
        assert_eq!(xi_euler(&one).coeff(0), &Rational::one());
        let xi = BorelSeries::from_xi_coeffs(vec![Rational::zero(), Rational::one()]);
        assert_eq!(xi_euler(&xi).coeff(1), &q(2, 1));
    }

    #[test]
    fn singular_form_table() {
        // n = 0, non-integer beta: (1-xi)^{beta-1} with unit coefficient
        let beta = q(1, 2);
        let f = singular_form(0, &beta).unwrap();
        assert_eq!(f.coeff(), &Rational::one());
        assert_eq!(f.exponent(), &q(-1, 2));
        assert!(!f.has_log());

        // n = 0, beta = 0: the simple pole
        let f = singular_form(0, &Rational::zero()).unwrap();
        assert!(f.is_pole());
        assert_eq!(f.coeff(), &Rational::one());

        // n = 2, beta = 1/2: coefficient 1/((1/2)(3/2)) = 4/3, exponent 3/2
        let f = singular_form(2, &beta).unwrap();
        assert_eq!(f.coeff(), &q(4, 3));
        assert_eq!(f.exponent(), &q(3, 2));

        // integer beta = 1, n = 0: -(1-xi)^0 ln(1-xi)
        let f = singular_form(0, &Rational::one()).unwrap();
        assert!(f.has_log());
        assert_eq!(f.coeff(), &q(-1, 1));
        assert_eq!(f.exponent(), &Rational::zero());

        // negative integer beta is outside the table
        assert!(singular_form(0, &q(-1, 1)).is_err());
        // beta = 0 with no shift available only as the pole; shift 0 handled,
        // shift >= 1 gives the log family
        let f = singular_form(1, &Rational::zero()).unwrap();
        assert!(f.has_log());
        assert_eq!(f.coeff(), &q(-1, 1));
        assert_eq!(f.exponent(), &Rational::zero());
    }

    #[test]
    fn primitive_recurrence_on_forms() {
        // form(n+1, beta) = singular_convolve(form(n, beta), B(a))
        let reg = BorelSeries::from_xi_coeffs(vec![Rational::one()]);
        for beta in [q(1, 2), q(-5, 3), q(0, 1), q(2, 1)] {
            let mut form = singular_form(0, &beta).unwrap();
            for n in 1..=6u32 {
                form = singular_convolve(&form, &reg).unwrap();
                let direct = singular_form(n, &beta).unwrap();
                assert_eq!(form, direct, "recurrence broke at n={n}, beta={beta}");
            }
        }
    }

    #[test]
    fn convolve_with_higher_power() {
        // (1-xi)^{-1/2} * B(a^2) -> exponent up by 2
        let beta = q(1, 2);
        let form = singular_form(0, &beta).unwrap();
        let reg = BorelSeries::from_xi_coeffs(vec![Rational::zero(), Rational::one()]); // xi = B(a^2)
        let out = singular_convolve(&form, &reg).unwrap();
        assert_eq!(out, singular_form(2, &beta).unwrap());
    }

    #[test]
    fn alien_reference_values() {
        // integer family with beta + m - 1 = 0: germ is the constant -1
        let f = singular_form(0, &Rational::one()).unwrap();
        let g = alien_delta1(&f, AlienView::LateralDifference).unwrap();
        assert_eq!(g.coeff, q(-1, 1));
        assert_eq!(g.exponent, Rational::zero());
        assert_eq!(g.scale, GermScale::Unit);

        // non-integer, m = 0: -sin(pi beta)/pi xi^{beta-1}
        let beta = q(1, 3);
        let f = singular_form(0, &beta).unwrap();
        let g = alien_delta1(&f, AlienView::LateralDifference).unwrap();
        // canonical form: sin(pi(beta-1))/pi = -sin(pi beta)/pi, so the
        // reduced argument is beta with a negative coefficient
        assert_eq!(g.scale, GermScale::SinPiOverPi(q(1, 3)));
        assert_eq!(g.coeff, q(-1, 1));
        assert_eq!(g.exponent, q(-2, 3));

        // holomorphic germ: nothing
        let f = SingularForm::new(Rational::one(), q(1, 2), false, Rational::zero(), 0);
        assert!(alien_delta1(&f, AlienView::LateralDifference).is_none());

        // the pole: invisible laterally, residue in the extraction view
        let pole = singular_form(0, &Rational::zero()).unwrap();
        assert!(alien_delta1(&pole, AlienView::LateralDifference).is_none());
        let g = alien_delta1(&pole, AlienView::CoefficientExtraction).unwrap();
        assert_eq!(g.exponent, q(-1, 1));
        assert_eq!(g.coeff, Rational::one());
    }

    #[test]
    fn alien_is_a_derivation_on_symbol_products() {
        // f = a^2 + a^3 C, g = a + a^2 C with C of non-integer order 1/2:
        // the C-part of fg is 2 a^4 C, and the germ of Delta_1(f*g) must
        // equal germ(Delta_1 f * g) + germ(f * Delta_1 g).
        let beta = q(1, 2);
        let f_reg = borel(&qs(&[0, 0, 1], 4)).unwrap(); // B(a^2) = xi
        let g_reg = borel(&qs(&[0, 1], 4)).unwrap(); // B(a) = 1
        let f_sing = singular_form(3, &beta).unwrap();
        let g_sing = singular_form(2, &beta).unwrap();

        // product side: singular part of f*g near 1
        let s1 = singular_convolve(&f_sing, &g_reg).unwrap(); // B(a^4 C)
        let s2 = singular_convolve(&g_sing, &f_reg).unwrap(); // B(a^4 C)
        assert_eq!(s1, s2);
        assert_eq!(s1, singular_form(4, &beta).unwrap());
        let product_germs = sum_germs([
            alien_delta1(&s1, AlienView::LateralDifference).unwrap(),
            alien_delta1(&s2, AlienView::LateralDifference).unwrap(),
        ]);

        // Leibniz side
        let leibniz = sum_germs([
            germ_convolve(
                &alien_delta1(&f_sing, AlienView::LateralDifference).unwrap(),
                &g_reg,
            )
            .unwrap(),
            germ_convolve(
                &alien_delta1(&g_sing, AlienView::LateralDifference).unwrap(),
                &f_reg,
            )
            .unwrap(),
        ]);
        assert_eq!(product_germs, leibniz);
        assert_eq!(product_germs.len(), 1);
    }

    #[test]
    fn singular_form_json_schema() {
        let beta = q(-5, 3);
        let form = singular_form(1, &beta)
            .unwrap()
            .at_location(q(-1, 3));
        let json = serde_json::to_string(&form).unwrap();
        assert_eq!(
            json,
            r#"{"location":"-1/3","exponent":"-5/3","log":false,"coeff":"3/5","shift":1}"#
        );
    }

    #[test]
    fn germ_sum_merges_and_cancels() {
        let a = AlienGerm::new(q(1, 2), q(3, 2), Some(q(1, 2)));
        let b = AlienGerm::new(q(-1, 2), q(3, 2), Some(q(1, 2)));
        assert!(sum_germs([a.clone(), b]).is_empty());
        let c = AlienGerm::new(q(1, 3), q(3, 2), None);
        let merged = sum_germs([a.clone(), a, c]);
        assert_eq!(merged.len(), 2);
    }
}
