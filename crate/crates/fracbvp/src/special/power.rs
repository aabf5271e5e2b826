//! Exact fractional calculus on sums of power terms.
//!
//! Everything here rests on the power rule
//!
//! ```text
//! I_+^alpha x^mu       = Gamma(mu+1)/Gamma(alpha+mu+1) x^(alpha+mu)
//! I_-^alpha (1-x)^mu   = Gamma(mu+1)/Gamma(alpha+mu+1) (1-x)^(alpha+mu)
//! ```
//!
//! valid for mu > -1, which turns fractional integration and differentiation
//! of `sum c_i x^(mu_i)` into exact coefficient arithmetic. The closed forms
//! produced by the reduction solvers live in this representation, so they can
//! be checked to near machine precision instead of grid tolerance.

use serde::{Deserialize, Serialize};

use super::gamma::{beta_fn, gamma};
use crate::error::{Error, Result};

/// Which endpoint a power term is anchored to: `Left` terms are `c x^mu`,
/// `Right` terms are `c (1-x)^mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A single term `coef * x^exponent` (or `coef * (1-x)^exponent`).
///
/// Integral-type operations require `exponent > -1`; they check it, because
/// classical differentiation legitimately produces steeper intermediate
/// exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coef: f64,
    pub exponent: f64,
    pub side: Side,
}

impl PowerTerm {
    pub fn new(coef: f64, exponent: f64, side: Side) -> Self {
        Self { coef, exponent, side }
    }

    pub fn left(coef: f64, exponent: f64) -> Self {
        Self::new(coef, exponent, Side::Left)
    }

    pub fn right(coef: f64, exponent: f64) -> Self {
        Self::new(coef, exponent, Side::Right)
    }

    fn eval(&self, x: f64) -> f64 {
        let base = match self.side {
            Side::Left => x,
            Side::Right => 1.0 - x,
        };
        if base == 0.0 {
            if self.exponent > 0.0 {
                0.0
            } else if self.exponent == 0.0 {
                self.coef
            } else {
                // Evaluating a genuinely singular term at its endpoint.
                self.coef * f64::INFINITY
            }
        } else {
            self.coef * base.powf(self.exponent)
        }
    }
}

/// Exponents closer than this merge during canonicalization; beta arithmetic
/// reproduces equal exponents only up to roundoff.
const EXPONENT_MERGE_TOL: f64 = 1e-12;

/// A canonical sum of power terms.
///
/// Terms are kept sorted by (side, exponent), terms with equal side and
/// exponent (within `1e-12` absolute) are merged, and zero coefficients are
/// dropped, so two routes to the same closed form compare term by term.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    pub fn new(terms: Vec<PowerTerm>) -> Self {
        let mut sum = Self { terms };
        sum.canonicalize();
        sum
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant `c`, carried as a left-side x^0 term.
    pub fn constant(c: f64) -> Self {
        Self::new(vec![PowerTerm::left(c, 0.0)])
    }

    pub fn single(coef: f64, exponent: f64, side: Side) -> Self {
        Self::new(vec![PowerTerm::new(coef, exponent, side)])
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn all_on_side(&self, side: Side) -> bool {
        self.terms.iter().all(|t| t.side == side)
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|t| t.coef != 0.0);
        self.terms.sort_by(|a, b| {
            let sa = matches!(a.side, Side::Right) as u8;
            let sb = matches!(b.side, Side::Right) as u8;
            sa.cmp(&sb).then(a.exponent.total_cmp(&b.exponent))
        });
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last)
                    if last.side == t.side
                        && (last.exponent - t.exponent).abs() <= EXPONENT_MERGE_TOL =>
                {
                    last.coef += t.coef;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0.0);
        self.terms = merged;
    }

    pub fn add(&self, other: &PowerSum) -> PowerSum {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        PowerSum::new(terms)
    }

    pub fn sub(&self, other: &PowerSum) -> PowerSum {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> PowerSum {
        PowerSum::new(self.terms.iter().map(|t| PowerTerm::new(c * t.coef, t.exponent, t.side)).collect())
    }

    /// Pointwise value. Singular terms evaluated at their endpoint give
    /// signed infinity.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Classical derivative d/dx, term by term. Constant terms vanish;
    /// exponents within the merge tolerance of zero count as constants,
    /// since beta arithmetic like `1 - (1 - beta) - beta` leaves dust there.
    pub fn derivative(&self) -> PowerSum {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponent.abs() > EXPONENT_MERGE_TOL)
            .map(|t| {
                let sign = match t.side {
                    Side::Left => 1.0,
                    Side::Right => -1.0,
                };
                PowerTerm::new(sign * t.exponent * t.coef, t.exponent - 1.0, t.side)
            })
            .collect();
        PowerSum::new(terms)
    }

    /// Antiderivative vanishing at x = 0: `F(x) = \int_0^x p(s) ds`.
    pub fn antiderivative_from_zero(&self) -> Result<PowerSum> {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.exponent <= -1.0 {
                return Err(Error::NonIntegrable { exponent: t.exponent });
            }
            match t.side {
                Side::Left => terms.push(PowerTerm::left(t.coef / (t.exponent + 1.0), t.exponent + 1.0)),
                Side::Right => {
                    // \int_0^x c (1-s)^mu ds = c/(mu+1) - c/(mu+1) (1-x)^(mu+1)
                    let c = t.coef / (t.exponent + 1.0);
                    terms.push(PowerTerm::left(c, 0.0));
                    terms.push(PowerTerm::right(-c, t.exponent + 1.0));
                }
            }
        }
        Ok(PowerSum::new(terms))
    }
}

impl std::fmt::Display for PowerSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match t.side {
                Side::Left => write!(f, "{}*x^{}", t.coef, t.exponent)?,
                Side::Right => write!(f, "{}*(1-x)^{}", t.coef, t.exponent)?,
            }
        }
        Ok(())
    }
}

/// Riemann-Liouville vs Caputo flavor of a fractional derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivKind {
    RiemannLiouville,
    Caputo,
}

/// Exact fractional integral `I^alpha` of a power sum, `0 < alpha <= 1`.
///
/// Every term must sit on the operator's side (mixed sums have no power-rule
/// form and are rejected; callers wanting a numeric answer use the grid path)
/// and be integrable (`mu > -1`).
pub fn frac_integral_exact(side: Side, alpha: f64, p: &PowerSum) -> Result<PowerSum> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("fractional integral order {alpha} outside (0,1]")));
    }
    frac_integral_inner(side, alpha, p)
}

/// Same power rule, but permitting `alpha = 0` (identity) so the derivative
/// composites can share one code path.
fn frac_integral_inner(side: Side, alpha: f64, p: &PowerSum) -> Result<PowerSum> {
    if !p.all_on_side(side) {
        return Err(Error::MixedSide);
    }
    if alpha == 0.0 {
        return Ok(p.clone());
    }
    let mut terms = Vec::with_capacity(p.terms().len());
    for t in p.terms() {
        if t.exponent <= -1.0 {
            return Err(Error::NonIntegrable { exponent: t.exponent });
        }
        let coef = t.coef * gamma(t.exponent + 1.0)? / gamma(alpha + t.exponent + 1.0)?;
        terms.push(PowerTerm::new(coef, t.exponent + alpha, t.side));
    }
    Ok(PowerSum::new(terms))
}

/// Exact fractional derivative of order `sigma` in `(0, 2)`.
///
/// With `m = ceil(sigma)` and `alpha = m - sigma`, the Riemann-Liouville
/// flavor computes `D^m I^alpha` and the Caputo flavor `I^alpha D^m`. The
/// Caputo flavor fails with [`Error::CaputoUndefined`] when differentiation
/// leaves a non-integrable exponent, e.g. the Caputo `D^(1-beta)` of
/// `x^(-beta)`.
pub fn frac_derivative_exact(kind: DerivKind, side: Side, sigma: f64, p: &PowerSum) -> Result<PowerSum> {
    if !(sigma > 0.0 && sigma < 2.0) {
        return Err(Error::InvalidInput(format!("fractional derivative order {sigma} outside (0,2)")));
    }
    if !p.all_on_side(side) {
        return Err(Error::MixedSide);
    }
    let m = if sigma <= 1.0 { 1 } else { 2 };
    let alpha = m as f64 - sigma;
    // The right-sided operators are built from (-D)^m.
    let msign = if side == Side::Right && m % 2 == 1 { -1.0 } else { 1.0 };
    match kind {
        DerivKind::RiemannLiouville => {
            let mut q = frac_integral_inner(side, alpha, p)?;
            for _ in 0..m {
                q = q.derivative();
            }
            Ok(q.scale(msign))
        }
        DerivKind::Caputo => {
            let mut d = p.clone();
            for _ in 0..m {
                d = d.derivative();
            }
            let q = frac_integral_inner(side, alpha, &d).map_err(|e| match e {
                Error::NonIntegrable { exponent } => Error::CaputoUndefined { exponent },
                other => other,
            })?;
            Ok(q.scale(msign))
        }
    }
}

/// `\int_0^1 p(x) dx`, exact. Requires every exponent > -1.
pub fn integrate_unit(p: &PowerSum) -> Result<f64> {
    let mut acc = 0.0;
    for t in p.terms() {
        if t.exponent <= -1.0 {
            return Err(Error::NonIntegrable { exponent: t.exponent });
        }
        acc += t.coef / (t.exponent + 1.0);
    }
    Ok(acc)
}

/// Cross-side pairing `\int_0^1 p(x) q(x) dx` with `p` on the left side and
/// `q` on the right side, evaluated exactly through
/// `\int_0^1 x^mu (1-x)^nu dx = B(mu+1, nu+1)`.
pub fn pairing(p: &PowerSum, q: &PowerSum) -> Result<f64> {
    if !p.all_on_side(Side::Left) || !q.all_on_side(Side::Right) {
        return Err(Error::MixedSide);
    }
    let mut acc = 0.0;
    for a in p.terms() {
        for b in q.terms() {
            if a.exponent <= -1.0 {
                return Err(Error::NonIntegrable { exponent: a.exponent });
            }
            if b.exponent <= -1.0 {
                return Err(Error::NonIntegrable { exponent: b.exponent });
            }
            acc += a.coef * b.coef * beta_fn(a.exponent + 1.0, b.exponent + 1.0)?;
        }
    }
    Ok(acc)
}

/// `\int_0^1 p(x) w(x) dx` against a single weight term `w`, accepting `p`
/// terms on either side: same-side products collapse to one power term,
/// cross-side products go through the Beta function.
pub fn weighted_integral(p: &PowerSum, weight: &PowerTerm) -> Result<f64> {
    let mut acc = 0.0;
    for t in p.terms() {
        if t.side == weight.side {
            let exponent = t.exponent + weight.exponent;
            if exponent <= -1.0 {
                return Err(Error::NonIntegrable { exponent });
            }
            acc += t.coef * weight.coef / (exponent + 1.0);
        } else {
            if t.exponent <= -1.0 {
                return Err(Error::NonIntegrable { exponent: t.exponent });
            }
            if weight.exponent <= -1.0 {
                return Err(Error::NonIntegrable { exponent: weight.exponent });
            }
            acc += t.coef * weight.coef * beta_fn(t.exponent + 1.0, weight.exponent + 1.0)?;
        }
    }
    Ok(acc)
}
