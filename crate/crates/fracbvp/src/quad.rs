//! Gaussian quadrature rules.
//!
//! Gauss-Legendre drives the FEM element integrals; Gauss-Jacobi with a
//! `(1-x)^(-beta)` (or `x^(-beta)`) weight evaluates the singular pairings in
//! the compatibility constraints. Nodes and weights come from the
//! Golub-Welsch eigenvalue construction: the symmetric tridiagonal Jacobi
//! matrix of the weight's three-term recurrence is diagonalized by an
//! implicit-shift QL sweep that also tracks the first row of the eigenvector
//! matrix, whose squared entries scale to the weights.

use crate::error::{Error, Result};
use crate::special::{beta_fn, Side};

/// Nodes and weights for `\int f(x) w(x) dx` over the rule's interval:
/// `sum_i weights[i] * f(nodes[i])`.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Implicit-shift QL diagonalization of a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` the coupling between rows `i` and `i+1`
/// (`e[n-1]` is workspace). `z` starts as the first row of the identity and
/// finishes as the first row of the eigenvector matrix. Eigenvalues land in
/// `d`, unsorted.
fn tridiag_eigen_first_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        'restart: loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::InvalidInput(
                    "tridiagonal eigensolver failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Underflow recovery: skip this transformation.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    continue 'restart;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Golub-Welsch for the Jacobi weight `(1-t)^a (1+t)^b` on `[-1, 1]`,
/// requiring `a, b > -1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<QuadRule> {
    if n == 0 {
        return Err(Error::InvalidInput("quadrature rule needs at least one node".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidInput(format!(
            "Jacobi weight exponents ({a}, {b}) must exceed -1"
        )));
    }
    let apb = a + b;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    d[0] = (b - a) / (apb + 2.0);
    for (k, slot) in d.iter_mut().enumerate().skip(1) {
        let t = 2.0 * k as f64 + apb;
        *slot = (b * b - a * a) / (t * (t + 2.0));
    }
    if n > 1 {
        e[0] = (4.0 * (a + 1.0) * (b + 1.0) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0))).sqrt();
    }
    for (k, slot) in e.iter_mut().enumerate().take(n.saturating_sub(1)).skip(1) {
        let j = (k + 1) as f64;
        let t = 2.0 * j + apb;
        let num = 4.0 * j * (j + a) * (j + b) * (j + apb);
        *slot = (num / (t * t * (t * t - 1.0))).sqrt();
    }
    let mu0 = 2f64.powf(apb + 1.0) * beta_fn(a + 1.0, b + 1.0)?;

    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiag_eigen_first_row(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let nodes: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let weights: Vec<f64> = order.iter().map(|&i| mu0 * z[i] * z[i]).collect();
    Ok(QuadRule { nodes, weights })
}

/// Gauss-Legendre on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> QuadRule {
    gauss_jacobi(n, 0.0, 0.0).expect("Legendre weight is always admissible")
}

/// Gauss-Legendre mapped to `[0, 1]`.
pub fn legendre_01(n: usize) -> QuadRule {
    let base = gauss_legendre(n);
    QuadRule {
        nodes: base.nodes.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        weights: base.weights.iter().map(|w| 0.5 * w).collect(),
    }
}

/// Rule for `\int_0^1 f(x) x^(-beta) dx` (`Side::Left`) or
/// `\int_0^1 f(x) (1-x)^(-beta) dx` (`Side::Right`), `0 < beta < 1`.
///
/// The singular factor is absorbed into the weights, so `f` is sampled only
/// at interior nodes.
pub fn singular_endpoint_rule(n: usize, beta: f64, side: Side) -> Result<QuadRule> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidInput(format!("weight exponent beta = {beta} outside (0,1)")));
    }
    let (a, b) = match side {
        Side::Right => (-beta, 0.0),
        Side::Left => (0.0, -beta),
    };
    let base = gauss_jacobi(n, a, b)?;
    let scale = 2f64.powf(beta - 1.0);
    Ok(QuadRule {
        nodes: base.nodes.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        weights: base.weights.iter().map(|w| scale * w).collect(),
    })
}
