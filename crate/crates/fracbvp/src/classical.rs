//! Integer-order two-point problems the reductions bottom out in:
//! `-w'' = g` with Dirichlet or Neumann data on `(0, 1)`.
//!
//! On an interval these are directly integrable, so solutions come from
//! (cumulative) quadrature rather than a linear solve: exact term-wise
//! antidifferentiation for power-sum sources, double cumulative trapezoid
//! for sampled sources.

use crate::error::{Error, Result};
use crate::grid::{cumulative_trapezoid, trapezoid, GridFunction, Profile};
use crate::special::PowerSum;

/// Which representative of a family of solutions a [`ClassicalSolution`]
/// carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representative {
    /// `\int_0^1 w = 0`; the Neumann problem's canonical pick.
    MeanZero,
    /// `w(0) = 0`.
    AnchoredAtZero,
    /// Whatever the boundary data produced (Dirichlet).
    Raw,
}

/// Solution of a reduced second-order problem.
#[derive(Debug, Clone)]
pub struct ClassicalSolution {
    pub w: Profile,
    /// `w'`, which the Neumann problem determines uniquely even though `w`
    /// itself is only fixed up to a constant.
    pub slope: Option<Profile>,
    pub representative: Representative,
    pub compat_residual: f64,
}

/// Default absolute tolerance for the Neumann compatibility residual, applied
/// after scaling by `max(1, |n0|, |n1|, ||g||_1)`.
pub const NEUMANN_COMPAT_TOL: f64 = 1e-8;

/// Subtract the mean: the result integrates to zero. Idempotent.
pub fn mean_zero_normalize(g: &Profile) -> Result<Profile> {
    match g {
        Profile::Exact(p) => {
            let mean = crate::special::integrate_unit(p)?;
            Ok(Profile::Exact(p.sub(&PowerSum::constant(mean))))
        }
        Profile::Grid(v) => {
            let mean = trapezoid(v);
            Ok(Profile::Grid(v.map(|x| x - mean)))
        }
    }
}

/// Solve `-w'' = g`, `w(0) = d0`, `w(1) = d1`.
///
/// Always solvable: a particular double antiderivative plus the linear
/// correction matching both endpoints.
pub fn solve_dirichlet(g: &Profile, d0: f64, d1: f64, n: usize) -> Result<ClassicalSolution> {
    let w = match g {
        Profile::Exact(p) => {
            // P = -\int_0^x \int_0^s g, so P(0) = 0.
            let particular = p.antiderivative_from_zero()?.antiderivative_from_zero()?.scale(-1.0);
            let p1 = particular.eval(1.0);
            let a = d0;
            let b = d1 - p1 - d0;
            let mut w = particular.add(&PowerSum::constant(a));
            w = w.add(&PowerSum::single(b, 1.0, crate::special::Side::Left));
            Profile::Exact(w)
        }
        Profile::Grid(v) => {
            let g_n = if v.n() == n { v.clone() } else { Profile::Grid(v.clone()).sample(n)? };
            let first = cumulative_trapezoid(&g_n);
            let second = cumulative_trapezoid(&first);
            let p1 = -second.values()[n];
            let a = d0;
            let b = d1 - p1 - d0;
            let values: Vec<f64> = second
                .values()
                .iter()
                .enumerate()
                .map(|(j, &s)| -s + a + b * j as f64 / n as f64)
                .collect();
            Profile::Grid(GridFunction::new(values)?)
        }
    };
    Ok(ClassicalSolution {
        w,
        slope: None,
        representative: Representative::Raw,
        compat_residual: 0.0,
    })
}

/// Solve `-w'' = g`, `w'(0) = n0`, `w'(1) = n1`, returning the mean-zero
/// representative. Requires the compatibility condition
/// `\int_0^1 g + n1 - n0 = 0`; the scaled residual is reported either way.
pub fn solve_neumann(g: &Profile, n0: f64, n1: f64, n: usize) -> Result<ClassicalSolution> {
    solve_neumann_with_tol(g, n0, n1, n, NEUMANN_COMPAT_TOL)
}

pub fn solve_neumann_with_tol(
    g: &Profile,
    n0: f64,
    n1: f64,
    n: usize,
    tol: f64,
) -> Result<ClassicalSolution> {
    let residual = g.integral()? + n1 - n0;
    let scale = 1.0f64.max(n0.abs()).max(n1.abs()).max(g.l1_bound());
    if residual.abs() > tol * scale {
        return Err(Error::IncompatibleData { residual });
    }
    let (w, slope) = match g {
        Profile::Exact(p) => {
            // w' = n0 - \int_0^x g; w = \int_0^x w' mean-zeroed.
            let slope = PowerSum::constant(n0).sub(&p.antiderivative_from_zero()?);
            let raw = slope.antiderivative_from_zero()?;
            let w = mean_zero_normalize(&Profile::Exact(raw))?;
            (w, Profile::Exact(slope))
        }
        Profile::Grid(v) => {
            let g_n = if v.n() == n { v.clone() } else { Profile::Grid(v.clone()).sample(n)? };
            let cg = cumulative_trapezoid(&g_n);
            let slope = cg.map(|s| n0 - s);
            let raw = cumulative_trapezoid(&slope);
            let w = mean_zero_normalize(&Profile::Grid(raw))?;
            (w, Profile::Grid(slope))
        }
    };
    Ok(ClassicalSolution {
        w,
        slope: Some(slope),
        representative: Representative::MeanZero,
        compat_residual: residual,
    })
}
