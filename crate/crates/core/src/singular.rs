//! Singularity analytics.
//!
//! Three related toolboxes:
//! - the trans-series algebra of formal symbols whose coefficient recurrence
//!   `C_{n+1} = (alpha n - beta) C_n` encodes one Borel singularity at
//!   `1/alpha` (mixed symbol products are dropped, matching the locality of
//!   distinct singularities);
//! - closed-form singularity exponents and leading-coefficient relations at
//!   `xi = +-k/3`;
//! - numerical Domb-Sykes estimation of the nearest singularity from
//!   coefficient ratios, and the weight gradings extended to Borel series.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::borel::{convolve, singular_form, BorelError, BorelSeries, SingularForm};
use crate::scalars::{Rational, Weight, ZetaPoly};
use crate::series::{Coeff, FormalSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SingularError {
    #[error("symbol tables differ between operands")]
    SymbolTableMismatch,
    #[error("ratio method inapplicable: {0}")]
    RatioMethodInapplicable(String),
    #[error("window ({0}, {1}) does not fit the series")]
    BadWindow(usize, usize),
    #[error(transparent)]
    Borel(#[from] BorelError),
}

// ---------------------------------------------------------------------------
// Trans-series symbols
// ---------------------------------------------------------------------------

/// Identifier of a trans-series symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct SymbolId(pub String);

impl SymbolId {
    pub fn new(name: impl Into<String>) -> Self {
        SymbolId(name.into())
    }
}

/// A formal symbol with coefficient recurrence `C_{n+1} = (alpha n - beta) C_n`.
///
/// Its Borel transform is singular at `xi = 1/alpha`; in the variable rescaled
/// to put the singularity at 1 the effective order is `beta/alpha`.
#[derive(Clone, PartialEq, Debug)]
pub struct Symbol {
    pub alpha: Rational,
    pub beta: Rational,
}

impl Symbol {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        assert!(!alpha.is_zero(), "symbol growth slope must be nonzero");
        Symbol { alpha, beta }
    }

    /// The alternating symbol with `C_{n+1} = -(3n+5) C_n`.
    pub fn alternating() -> Self {
        Symbol::new(Rational::from_int(-3), Rational::from_int(5))
    }

    /// The same-sign symbol with `C_{n+1} = 3n C_n`.
    pub fn same_sign() -> Self {
        Symbol::new(Rational::from_int(3), Rational::zero())
    }

    /// Location of the Borel singularity the symbol encodes.
    pub fn borel_location(&self) -> Rational {
        self.alpha.recip().expect("alpha nonzero")
    }

    /// Effective order after rescaling the singularity to 1.
    pub fn normalized_order(&self) -> Rational {
        &self.beta / &self.alpha
    }

    /// First index from which the recurrence steps are all nonzero: when
    /// `beta/alpha` is a non-negative integer `n*`, the step at `n*`
    /// vanishes, so a nontrivial realization starts at `n* + 1`.
    pub fn start_index(&self) -> usize {
        let ratio = self.normalized_order();
        match ratio.to_integer() {
            Some(n) if n >= 0 => (n + 1) as usize,
            _ => 0,
        }
    }

    /// Realized coefficients from the recurrence, normalized to
    /// `C_{n0} = 1` at the start index (the overall scale of a symbol is
    /// undetermined; this fixes a representative).
    pub fn coefficients(&self, order: usize) -> FormalSeries<Rational> {
        let n0 = self.start_index();
        let mut c = vec![Rational::zero(); order + 1];
        if n0 <= order {
            c[n0] = Rational::one();
            for n in n0..order {
                let step = &(&self.alpha * &Rational::from_int(n as i64)) - &self.beta;
                c[n + 1] = &c[n] * &step;
            }
        }
        FormalSeries::from_coeffs(c)
    }

    /// Leading Borel-plane singular form of `a^shift * C`, at the symbol's
    /// own singular location, in the rescaled local variable.
    pub fn borel_singular_form(&self, shift: u32) -> Result<SingularForm, BorelError> {
        let form = singular_form(shift, &self.normalized_order())?;
        Ok(form.at_location(self.borel_location()))
    }
}

/// A regular series plus symbol-tagged singular series. Products of two
/// tagged sectors are identically dropped: each symbol tracks the leading
/// behaviour at one singularity, and cross terms belong to singularities the
/// ansatz does not resolve.
#[derive(Clone, PartialEq, Debug)]
pub struct TransSeries<R: Coeff> {
    regular: FormalSeries<R>,
    sectors: BTreeMap<SymbolId, FormalSeries<R>>,
    symbols: BTreeMap<SymbolId, Symbol>,
}

impl<R: Coeff> TransSeries<R> {
    pub fn regular(series: FormalSeries<R>) -> Self {
        TransSeries {
            regular: series,
            sectors: BTreeMap::new(),
            symbols: BTreeMap::new(),
        }
    }

    pub fn with_sector(mut self, id: SymbolId, symbol: Symbol, coeff: FormalSeries<R>) -> Self {
        self.symbols.insert(id.clone(), symbol);
        self.sectors.insert(id, coeff);
        self
    }

    pub fn regular_part(&self) -> &FormalSeries<R> {
        &self.regular
    }

    pub fn sector(&self, id: &SymbolId) -> Option<&FormalSeries<R>> {
        self.sectors.get(id)
    }

    pub fn symbol(&self, id: &SymbolId) -> Option<&Symbol> {
        self.symbols.get(id)
    }

    pub fn sector_ids(&self) -> impl Iterator<Item = &SymbolId> {
        self.sectors.keys()
    }

    fn check_tables(&self, other: &Self) -> Result<(), SingularError> {
        for (id, sym) in &self.symbols {
            if let Some(other_sym) = other.symbols.get(id) {
                if sym != other_sym {
                    return Err(SingularError::SymbolTableMismatch);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SingularError> {
        self.check_tables(other)?;
        let mut out = TransSeries {
            regular: self.regular.add(&other.regular),
            sectors: self.sectors.clone(),
            symbols: self.symbols.clone(),
        };
        for (id, s) in &other.sectors {
            match out.sectors.get_mut(id) {
                Some(existing) => *existing = existing.add(s),
                None => {
                    out.sectors.insert(id.clone(), s.clone());
                    out.symbols
                        .insert(id.clone(), other.symbols[id].clone());
                }
            }
        }
        Ok(out)
    }

    /// Product dropping symbol-times-symbol terms: regular parts multiply,
    /// each sector picks up the other factor's regular part.
    pub fn mul(&self, other: &Self) -> Result<Self, SingularError> {
        self.check_tables(other)?;
        let regular = self.regular.mul(&other.regular);
        let mut sectors = BTreeMap::new();
        let mut symbols = BTreeMap::new();
        for (id, s) in &self.sectors {
            sectors.insert(id.clone(), s.mul(&other.regular));
            symbols.insert(id.clone(), self.symbols[id].clone());
        }
        for (id, s) in &other.sectors {
            let piece = self.regular.mul(s);
            match sectors.get_mut(id) {
                Some(existing) => *existing = existing.add(&piece),
                None => {
                    sectors.insert(id.clone(), piece);
                    symbols.insert(id.clone(), other.symbols[id].clone());
                }
            }
        }
        Ok(TransSeries {
            regular,
            sectors,
            symbols,
        })
    }

    /// The Euler operator `a d/da`.
    ///
    /// Regular parts transform as usual. A tagged part `s(a) C` obeys
    /// Leibniz with the symbol's defining relation
    /// `alpha a^2 C' = (1 + beta a) C - C_0`; realized with `C_0 = 1` this
    /// gives `theta C = u_C * C` for a genuine power series `u_C`, so the
    /// sector map is `s -> theta s + s u_C` with no leakage between sectors.
    pub fn euler(&self) -> Self {
        let regular = self.regular.euler();
        let mut sectors = BTreeMap::new();
        for (id, s) in &self.sectors {
            let sym = &self.symbols[id];
            let u = symbol_log_derivative(sym, s.order());
            let u_lifted = u.map(|c| R::from_rational(c));
            let out = s.euler().add(&s.mul(&u_lifted).truncate(s.order()));
            sectors.insert(id.clone(), out);
        }
        TransSeries {
            regular,
            sectors,
            symbols: self.symbols.clone(),
        }
    }

    /// Realize a sector as a plain series with the symbol scale fixed to
    /// `C_0 = 1`: the coefficients of `s(a) * C(a)`.
    pub fn realize_sector(&self, id: &SymbolId) -> Option<FormalSeries<R>> {
        let s = self.sectors.get(id)?;
        let sym = self.symbols.get(id)?;
        let c = sym.coefficients(s.order()).map(|r| R::from_rational(r));
        Some(s.mul(&c).truncate(s.order()))
    }
}

/// `theta C / C` as a power series, with the symbol's realized scale.
/// This is the exact content of the defining relation
/// `alpha a^2 C' = (1 + beta a) C - (polynomial head)`: the subtraction of
/// the head is what makes the quotient regular at the origin.
pub fn symbol_log_derivative(symbol: &Symbol, order: usize) -> FormalSeries<Rational> {
    let c = symbol.coefficients(order + symbol.start_index());
    let v = c.valuation().expect("symbol realization is nonzero");
    // strip the common valuation so the quotient has a unit denominator
    let shift = |s: &FormalSeries<Rational>| {
        FormalSeries::from_coeffs(s.coeffs()[v..].to_vec())
    };
    shift(&c.euler()).div_unit(&shift(&c))
}

// ---------------------------------------------------------------------------
// Closed-form exponents and coefficient relations
// ---------------------------------------------------------------------------

/// Exponent of the Borel singularity at `xi = +k/3`: `alpha_k = 2(k-1)/3`.
/// `k = 1` gives zero, i.e. a logarithmic singularity.
pub fn exponent_positive(k: u32) -> Rational {
    assert!(k >= 1);
    Rational::frac(2 * (k as i64 - 1), 3)
}

/// Exponent of the Borel singularity at `xi = -k/3`:
/// `beta_1 = -5/3` and `beta_k = -2(k-1)/3` for `k >= 2` (the first negative
/// singularity is special because the linear term of the equation feeds it).
pub fn exponent_negative(k: u32) -> Rational {
    assert!(k >= 1);
    if k == 1 {
        Rational::frac(-5, 3)
    } else {
        Rational::frac(-2 * (k as i64 - 1), 3)
    }
}

/// Leading coefficient of the anomalous dimension at `xi = -k/3` as an exact
/// multiple of the undetermined scale `f_k` of the auxiliary function there:
/// `c_1 = -6/5 f_1`, `c_k = -9/(k (k-1)^2 (2k+1)) f_k` for `k >= 2`.
/// The scale itself stays symbolic.
pub fn negative_coefficient_relation(k: u32) -> Rational {
    assert!(k >= 1);
    if k == 1 {
        Rational::frac(-6, 5)
    } else {
        let k = k as i64;
        Rational::frac(-9, k * (k - 1) * (k - 1) * (2 * k + 1))
    }
}

// ---------------------------------------------------------------------------
// Domb-Sykes estimation
// ---------------------------------------------------------------------------

/// Nearest-singularity estimate from a coefficient-ratio fit.
#[derive(Clone, PartialEq, Debug)]
pub struct SingularityReport {
    /// Estimated location `xi_0` (real fits produce a real estimate).
    pub location: Complex64,
    /// Estimated exponent `beta` of `(1 - xi/xi_0)^beta`.
    pub exponent: f64,
    /// The ratio indices used by the fit.
    pub fit_window: (usize, usize),
    /// Per-point residuals of the linear fit.
    pub residuals: Vec<f64>,
}

impl Serialize for SingularityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SingularityReport", 5)?;
        s.serialize_field("location_re", &self.location.re)?;
        s.serialize_field("location_im", &self.location.im)?;
        s.serialize_field("exponent", &self.exponent)?;
        s.serialize_field("fit_window", &self.fit_window)?;
        s.serialize_field("residuals", &self.residuals)?;
        s.end()
    }
}

/// Domb-Sykes fit on exact coefficients: ratios are formed in exact
/// arithmetic first, so coefficient magnitudes beyond `f64` range are safe.
pub fn domb_sykes(
    series: &FormalSeries<Rational>,
    window: (usize, usize),
) -> Result<SingularityReport, SingularError> {
    let (lo, hi) = window;
    if lo < 1 || hi > series.order() || hi < lo {
        return Err(SingularError::BadWindow(lo, hi));
    }
    let mut ratios = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        let prev = series.coeff(n - 1);
        let cur = series.coeff(n);
        if prev.is_zero() || cur.is_zero() {
            return Err(SingularError::RatioMethodInapplicable(format!(
                "zero coefficient at index {n} interrupts the ratio sequence"
            )));
        }
        ratios.push((n, (cur / prev).to_f64()));
    }
    fit_ratios(&ratios, window)
}

/// Domb-Sykes fit on float coefficients.
pub fn domb_sykes_f64(
    coeffs: &[f64],
    window: (usize, usize),
) -> Result<SingularityReport, SingularError> {
    let (lo, hi) = window;
    if lo < 1 || hi >= coeffs.len() || hi < lo {
        return Err(SingularError::BadWindow(lo, hi));
    }
    let mut ratios = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        if coeffs[n - 1] == 0.0 || coeffs[n] == 0.0 {
            return Err(SingularError::RatioMethodInapplicable(format!(
                "zero coefficient at index {n} interrupts the ratio sequence"
            )));
        }
        ratios.push((n, coeffs[n] / coeffs[n - 1]));
    }
    fit_ratios(&ratios, window)
}

/// Least-squares fit of `r_n = A + B/n`; then `xi_0 = 1/A` and the exponent
/// is `-B/A - 1` (the model `c_n/c_{n-1} = (1/xi_0)(1 - (1+beta)/n)` for a
/// singular factor `(1 - xi/xi_0)^beta`).
fn fit_ratios(
    ratios: &[(usize, f64)],
    window: (usize, usize),
) -> Result<SingularityReport, SingularError> {
    if ratios.len() < 8 {
        return Err(SingularError::RatioMethodInapplicable(format!(
            "need at least 8 consecutive ratios, have {}",
            ratios.len()
        )));
    }
    let all_pos = ratios.iter().all(|(_, r)| *r > 0.0);
    let all_neg = ratios.iter().all(|(_, r)| *r < 0.0);
    if !all_pos && !all_neg {
        return Err(SingularError::RatioMethodInapplicable(
            "ratio signs are irregular over the window".into(),
        ));
    }
    let n = ratios.len() as f64;
    let sx: f64 = ratios.iter().map(|(i, _)| 1.0 / *i as f64).sum();
    let sy: f64 = ratios.iter().map(|(_, r)| r).sum();
    let sxx: f64 = ratios.iter().map(|(i, _)| (1.0 / *i as f64).powi(2)).sum();
    let sxy: f64 = ratios.iter().map(|(i, r)| r / *i as f64).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < f64::EPSILON * n * sxx.max(1.0) {
        return Err(SingularError::RatioMethodInapplicable(
            "fit window is degenerate".into(),
        ));
    }
    let b = (n * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / n;
    if a == 0.0 {
        return Err(SingularError::RatioMethodInapplicable(
            "vanishing mean ratio; no finite singularity".into(),
        ));
    }
    let residuals: Vec<f64> = ratios
        .iter()
        .map(|(i, r)| r - (a + b / *i as f64))
        .collect();
    Ok(SingularityReport {
        location: Complex64::new(1.0 / a, 0.0),
        exponent: -b / a - 1.0,
        fit_window: window,
        residuals,
    })
}

// ---------------------------------------------------------------------------
// Weights of Borel series
// ---------------------------------------------------------------------------

/// Weight of a Borel-plane series: `W(sum a_p xi^p) = sup_p (W(a_p) - p)`.
pub fn series_weight(coeffs: &[ZetaPoly]) -> Weight {
    coeffs
        .iter()
        .enumerate()
        .map(|(p, c)| c.modified_weight() - p as i64)
        .max()
        .unwrap_or(Weight::NegInfinity)
}

/// Weight of a local expansion whose first stored coefficient sits `offset`
/// steps above the reference exponent of the singularity.
pub fn local_weight(coeffs: &[ZetaPoly], offset: i64) -> Weight {
    series_weight(coeffs) - offset
}

/// Outcome of the convolution weight bound `W(f*g) <= W(f) + W(g) - 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct ConvolutionWeightCheck {
    pub holds: bool,
    /// First index violating the per-coefficient bound, if any.
    pub witness: Option<usize>,
    pub lhs: Weight,
    pub rhs_bound: Weight,
}

/// Verify `W(f*g) <= W(f) + W(g) - 1` coefficient by coefficient.
pub fn convolution_weight_check(
    f: &BorelSeries<ZetaPoly>,
    g: &BorelSeries<ZetaPoly>,
) -> ConvolutionWeightCheck {
    let conv = convolve(f, g);
    let bound = series_weight(f.coeffs()) + series_weight(g.coeffs()) - 1;
    let lhs = series_weight(conv.coeffs());
    let mut witness = None;
    for (p, c) in conv.coeffs().iter().enumerate() {
        if c.modified_weight() - p as i64 > bound {
            witness = Some(p);
            break;
        }
    }
    ConvolutionWeightCheck {
        holds: witness.is_none(),
        witness,
        lhs,
        rhs_bound: bound,
    }
}

// ---------------------------------------------------------------------------
// Weight audit of the anomalous dimension
// ---------------------------------------------------------------------------

/// One row of the usual-weight audit: the Borel-plane index `p`, the weight
/// `w(c_p)` of `c_p = [a^{p+1}] gamma`, and whether it falls short of the
/// generic value `p`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct WeightAuditRow {
    pub p: usize,
    pub weight: String,
    pub generic: usize,
    pub exception: bool,
}

/// Weight audit of a physical-plane series. The generic law is
/// `w(c_p) = p` in the Borel index; indices where the weight drops are
/// reported, never asserted away (the known drops are `p = 1, 2, 4`).
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct WeightAudit {
    pub rows: Vec<WeightAuditRow>,
    pub exceptions: Vec<usize>,
}

pub fn weight_audit(gamma: &FormalSeries<ZetaPoly>) -> WeightAudit {
    let mut rows = Vec::new();
    let mut exceptions = Vec::new();
    for p in 1..gamma.order() {
        let c = gamma.coeff(p + 1);
        let w = c.weight();
        let exception = w < Weight::Finite(p as i64);
        if exception {
            exceptions.push(p);
        }
        rows.push(WeightAuditRow {
            p,
            weight: w.to_string(),
            generic: p,
            exception,
        });
    }
    WeightAudit { rows, exceptions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::borel;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn qs(coeffs: &[i64], order: usize) -> FormalSeries<Rational> {
        FormalSeries::new(
            coeffs.iter().map(|&c| Rational::from_int(c)).collect(),
            order,
        )
    }

    fn monomial_ts(power: usize, order: usize) -> FormalSeries<Rational> {
        FormalSeries::monomial(Rational::one(), power, order)
    }

    #[test]
    fn symbol_recurrences() {
        let a = Symbol::alternating();
        let c = a.coefficients(4);
        // A_{n+1} = -(3n+5) A_n: 1, -5, -8*-5=40, -11*40=-440, ...
        assert_eq!(c.coeffs()[..4], [q(1, 1), q(-5, 1), q(40, 1), q(-440, 1)]);
        let b = Symbol::same_sign();
        // beta/alpha = 0 is a non-negative integer, so realization starts
        // at n = 1: 0, 1, 3, 18, 162
        let c = b.coefficients(4);
        assert_eq!(
            c.coeffs(),
            &[q(0, 1), q(1, 1), q(3, 1), q(18, 1), q(162, 1)]
        );
    }

    #[test]
    fn ts_product_drops_mixed_terms() {
        // (a^2 + a^3 C)(a + a^2 C) = a^3 + (a^4 + a^4) C, no C^2 sector
        let id = SymbolId::new("C");
        let sym = Symbol::new(Rational::one(), q(1, 2));
        let order = 6;
        let f = TransSeries::regular(monomial_ts(2, order)).with_sector(
            id.clone(),
            sym.clone(),
            monomial_ts(3, order),
        );
        let g = TransSeries::regular(monomial_ts(1, order)).with_sector(
            id.clone(),
            sym.clone(),
            monomial_ts(2, order),
        );
        let p = f.mul(&g).unwrap();
        assert_eq!(p.regular_part().truncate(5), monomial_ts(3, 5));
        let sector = p.sector(&id).unwrap();
        assert_eq!(
            sector.truncate(5),
            monomial_ts(4, 5).scale(&Rational::from_int(2))
        );
        assert_eq!(p.sector_ids().count(), 1);
    }

    #[test]
    fn ts_unit_is_identity() {
        let id = SymbolId::new("C");
        let sym = Symbol::alternating();
        let one = TransSeries::<Rational>::regular(FormalSeries::one(5));
        let f = TransSeries::regular(qs(&[0, 1, -2], 5)).with_sector(
            id.clone(),
            sym,
            qs(&[0, 3, 1], 5),
        );
        let p = f.mul(&one).unwrap();
        assert_eq!(p.regular_part(), f.regular_part());
        assert_eq!(p.sector(&id), f.sector(&id));
    }

    #[test]
    fn ts_mismatched_tables_error() {
        let id = SymbolId::new("C");
        let f = TransSeries::regular(qs(&[1], 2)).with_sector(
            id.clone(),
            Symbol::alternating(),
            qs(&[0, 1], 2),
        );
        let g = TransSeries::regular(qs(&[1], 2)).with_sector(
            id,
            Symbol::same_sign(),
            qs(&[0, 1], 2),
        );
        assert!(matches!(
            f.mul(&g),
            Err(SingularError::SymbolTableMismatch)
        ));
    }

    #[test]
    fn ts_euler_on_regular_matches_euler() {
        let f = TransSeries::<Rational>::regular(qs(&[0, 1, -2, 14], 3));
        assert_eq!(f.euler().regular_part(), &qs(&[0, 1, -2, 14], 3).euler());
    }

    #[test]
    fn ts_euler_reproduces_symbol_recurrences() {
        // theta on the bare symbol realizes n C_n exactly.
        for sym in [Symbol::alternating(), Symbol::same_sign()] {
            let order = 50;
            let id = SymbolId::new("S");
            let ts = TransSeries::<Rational>::regular(FormalSeries::zero(order)).with_sector(
                id.clone(),
                sym.clone(),
                FormalSeries::one(order),
            );
            let realized = ts.euler().realize_sector(&id).unwrap();
            let c = sym.coefficients(realized.order());
            for n in 0..=realized.order() {
                let expect = &Rational::from_int(n as i64) * c.coeff(n);
                assert_eq!(realized.coeff(n), &expect, "n={n}");
            }
        }
    }

    #[test]
    fn ts_euler_is_a_derivation_with_symbols() {
        let id = SymbolId::new("C");
        let sym = Symbol::alternating();
        let order = 10;
        let f = TransSeries::regular(qs(&[0, 1, 4], order)).with_sector(
            id.clone(),
            sym.clone(),
            qs(&[0, 0, 2, -1], order),
        );
        let g = TransSeries::regular(qs(&[1, -3], order)).with_sector(
            id.clone(),
            sym.clone(),
            qs(&[0, 5], order),
        );
        let lhs = f.mul(&g).unwrap().euler();
        let rhs = f
            .euler()
            .mul(&g)
            .unwrap()
            .add(&f.mul(&g.euler()).unwrap())
            .unwrap();
        // compare realized sectors and regular parts to a common order
        let m = 8;
        assert_eq!(
            lhs.regular_part().truncate(m),
            rhs.regular_part().truncate(m)
        );
        let lr = lhs.realize_sector(&id).unwrap().truncate(m);
        let rr = rhs.realize_sector(&id).unwrap().truncate(m);
        assert_eq!(lr, rr);
    }

    #[test]
    fn symbol_borel_forms() {
        // alternating symbol: location -1/3, a*A has exponent -5/3
        let a = Symbol::alternating();
        assert_eq!(a.borel_location(), q(-1, 3));
        let form = a.borel_singular_form(1).unwrap();
        assert_eq!(form.exponent(), &q(-5, 3));
        assert!(!form.has_log());
        assert_eq!(form.exponent(), &exponent_negative(1));

        // same-sign symbol: location 1/3, a*B is logarithmic
        let b = Symbol::same_sign();
        assert_eq!(b.borel_location(), q(1, 3));
        let form = b.borel_singular_form(1).unwrap();
        assert!(form.has_log());
        assert_eq!(form.exponent(), &Rational::zero());
        assert_eq!(form.exponent(), &exponent_positive(1));
    }

    #[test]
    fn exponent_tables() {
        assert_eq!(exponent_positive(1), Rational::zero());
        assert_eq!(exponent_positive(2), q(2, 3));
        assert_eq!(exponent_positive(4), q(2, 1));
        assert_eq!(exponent_negative(1), q(-5, 3));
        assert_eq!(exponent_negative(2), q(-2, 3));
        assert_eq!(exponent_negative(3), q(-4, 3));
    }

    #[test]
    fn coefficient_relations() {
        assert_eq!(negative_coefficient_relation(1), q(-6, 5));
        assert_eq!(negative_coefficient_relation(2), q(-9, 10));
        assert_eq!(negative_coefficient_relation(3), q(-3, 28));
    }

    #[test]
    fn domb_sykes_geometric() {
        // 1/(1-2xi): c_n = 2^n
        let coeffs: Vec<Rational> = (0..20).map(|n| Rational::from_int(1i64 << n)).collect();
        let series = FormalSeries::from_coeffs(coeffs);
        let rep = domb_sykes(&series, (10, 19)).unwrap();
        assert!((rep.location.re - 0.5).abs() < 1e-12);
        assert!((rep.exponent + 1.0).abs() < 1e-9);
        assert!(rep.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn domb_sykes_binomial_oracle() {
        // (1 - 3 xi)^{-5/3}: c_n = (5/3)_n 3^n / n!
        let n_max = 60;
        let mut coeffs = Vec::with_capacity(n_max + 1);
        let mut c = Rational::one();
        coeffs.push(c.clone());
        for n in 0..n_max {
            // c_{n+1} = c_n * 3 (n + 5/3) / (n+1)
            let num = &Rational::from_int(3) * &(&Rational::from_int(n as i64) + &q(5, 3));
            c = &(&c * &num) / &Rational::from_int(n as i64 + 1);
            coeffs.push(c.clone());
        }
        let series = FormalSeries::from_coeffs(coeffs);
        let rep = domb_sykes(&series, (30, 60)).unwrap();
        assert!((rep.location.re - 1.0 / 3.0).abs() < 1e-3);
        assert!((rep.exponent + 5.0 / 3.0).abs() < 0.05);
    }

    #[test]
    fn domb_sykes_rejects_bad_input() {
        // sign-irregular coefficients
        let coeffs: Vec<Rational> = (0..20)
            .map(|n| Rational::from_int(if n % 3 == 0 { -1 } else { 1 }))
            .collect();
        let series = FormalSeries::from_coeffs(coeffs);
        assert!(matches!(
            domb_sykes(&series, (5, 18)),
            Err(SingularError::RatioMethodInapplicable(_))
        ));
        // gap
        let mut coeffs: Vec<Rational> = (1..20).map(Rational::from_int).collect();
        coeffs[10] = Rational::zero();
        let series = FormalSeries::from_coeffs(coeffs);
        assert!(domb_sykes(&series, (5, 18)).is_err());
        // too-short window
        let series = FormalSeries::from_coeffs((1..20).map(Rational::from_int).collect());
        assert!(domb_sykes(&series, (5, 9)).is_err());
    }

    #[test]
    fn domb_sykes_scale_equivariance() {
        let g = crate::physical::ode_reference(80).unwrap();
        let b = borel(&g).unwrap();
        let series = FormalSeries::from_coeffs(b.coeffs().to_vec());
        let scaled = series.scale(&q(-7, 3));
        let r1 = domb_sykes(&series, (40, 79)).unwrap();
        let r2 = domb_sykes(&scaled, (40, 79)).unwrap();
        assert!((r1.location.re - r2.location.re).abs() < 1e-12 * r1.location.re.abs());
        assert!((r1.exponent - r2.exponent).abs() < 1e-10);
    }

    #[test]
    fn series_weight_examples() {
        let one = [ZetaPoly::one()];
        assert_eq!(series_weight(&one), Weight::Finite(0));
        let z3 = ZetaPoly::zeta(3).unwrap();
        let z5 = ZetaPoly::zeta(5).unwrap();
        // zeta3 + zeta5 xi: max(2 - 0, 4 - 1) = 3
        assert_eq!(series_weight(&[z3.clone(), z5]), Weight::Finite(3));
        assert_eq!(series_weight(&[]), Weight::NegInfinity);
        // local variant with an offset
        assert_eq!(local_weight(&[z3], 2), Weight::Finite(0));
    }

    #[test]
    fn convolution_weight_bound_trivial_case() {
        let one = BorelSeries::from_xi_coeffs(vec![ZetaPoly::one()]);
        let check = convolution_weight_check(&one, &one);
        assert!(check.holds);
        assert_eq!(check.lhs, Weight::Finite(-1));
        assert_eq!(check.rhs_bound, Weight::Finite(-1));
    }

    #[test]
    fn weight_audit_flags_drops() {
        // build a fake gamma with weights p except a drop at p = 2
        let z3 = ZetaPoly::zeta(3).unwrap();
        let mut coeffs = vec![ZetaPoly::zero(); 6];
        coeffs[1] = ZetaPoly::one(); // p=0
        coeffs[2] = z3.clone(); // p=1, w=3 >= 1
        coeffs[3] = ZetaPoly::from_int(7); // p=2, w=0 < 2: exception
        coeffs[4] = z3.clone(); // p=3, w=3
        coeffs[5] = &z3 * &(&z3 * &z3); // p=4, w=9
        let gamma = FormalSeries::new(coeffs, 5);
        let audit = weight_audit(&gamma);
        assert_eq!(audit.exceptions, vec![2]);
        assert_eq!(audit.rows.len(), 4);
    }
}
