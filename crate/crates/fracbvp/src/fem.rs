//! Galerkin finite elements for the conservative Caputo equation with Caputo
//! flux data, as an independent cross-check of the reduction solver.
//!
//! The weak form pairs half-order fluxes of trial and test functions:
//!
//! ```text
//! B(w, v) = (I_+^(beta/2) w', I_-^(beta/2) v')      B(u, v) = l(v)
//! l(v)    = <f, v> + a1 v(1) - a0 v(0)
//! ```
//!
//! on piecewise-linear hats over a uniform mesh. Basis derivatives are
//! interval indicators, whose half-order integrals are explicit power
//! differences, so matrix entries are integrals of products of known kernels,
//! done per element with Gauss-Legendre after splitting at the basis
//! breakpoints (inside one element every kernel is smooth). `B` annihilates
//! constants on both sides; a Lagrange multiplier row enforcing the
//! mean-zero gauge makes the augmented system uniquely solvable.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Profile};
use crate::quad::gauss_legendre;
use crate::special::{gamma, FracOrder};

const GAUSS_POINTS_PER_ELEMENT: usize = 8;

/// Assembled dense system: `n + 1` nodal unknowns plus one multiplier.
#[derive(Debug, Clone)]
pub struct FemSystem {
    pub order: FracOrder,
    pub n: usize,
    /// Row-major `(n+2) x (n+2)`; the leading `(n+1) x (n+1)` block is the
    /// stiffness matrix, the last row/column the mean-value constraint.
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
    /// `<f, 1> + a1 - a0`, needed before solving: the stiffness block cannot
    /// balance an inconsistent constant mode.
    pub constraint_residual: f64,
    constraint_scale: f64,
}

/// The derivative of hat `j` as up to two (interval, sign) indicator pieces
/// of magnitude `1/h`.
fn hat_derivative_pieces(j: usize, n: usize) -> Vec<(usize, f64)> {
    if j == 0 {
        vec![(0, -1.0)]
    } else if j == n {
        vec![(n - 1, 1.0)]
    } else {
        vec![(j - 1, 1.0), (j, -1.0)]
    }
}

/// Hat-function masses `\int phi_j`: `h` inside, `h/2` at the ends.
pub fn hat_masses(n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (0..=n)
        .map(|j| if j == 0 || j == n { 0.5 * h } else { h })
        .collect()
}

/// Assemble the stiffness matrix, constraint row, and load vector.
pub fn assemble(order: &FracOrder, n: usize, f: &Profile, a0: f64, a1: f64) -> Result<FemSystem> {
    if n < crate::grid::MIN_INTERVALS {
        return Err(Error::InvalidInput(format!(
            "FEM needs at least {} elements, got {n}",
            crate::grid::MIN_INTERVALS
        )));
    }
    let beta = order.beta();
    let half = beta / 2.0;
    let h = 1.0 / n as f64;
    let inv_gamma_half = 1.0 / gamma(1.0 + half)?;
    let rule = gauss_legendre(GAUSS_POINTS_PER_ELEMENT);
    // Reference points on (0,1) and weights scaled to element length.
    let xi: Vec<f64> = rule.nodes.iter().map(|t| 0.5 * (t + 1.0)).collect();
    let wq: Vec<f64> = rule.weights.iter().map(|w| 0.5 * w * h).collect();
    let q = xi.len();

    // Kernel power tables at the quadrature offsets:
    //   tb[d][p] = ((d + xi_p) h)^(beta/2)   — distances to the left
    //   sb[d][p] = ((d - xi_p) h)^(beta/2)   — distances to the right (d >= 1)
    let mut tb = vec![0.0; (n + 1) * q];
    let mut sb = vec![0.0; (n + 1) * q];
    for d in 0..=n {
        for p in 0..q {
            tb[d * q + p] = ((d as f64 + xi[p]) * h).powf(half);
            if d >= 1 {
                sb[d * q + p] = ((d as f64 - xi[p]) * h).powf(half);
            }
        }
    }
    let tplus = |d: isize, p: usize| -> f64 {
        if d >= 0 {
            tb[d as usize * q + p]
        } else {
            0.0
        }
    };
    let tminus = |d: isize, p: usize| -> f64 {
        if d >= 1 {
            sb[d as usize * q + p]
        } else {
            0.0
        }
    };
    // I_+^(beta/2) phi_j' at quadrature point p of element k.
    let plus_kernel = |j: usize, k: usize, p: usize| -> f64 {
        let mut acc = 0.0;
        for &(a, s) in &hat_derivative_pieces(j, n) {
            let d = k as isize - a as isize;
            acc += s * (tplus(d, p) - tplus(d - 1, p));
        }
        acc * inv_gamma_half / h
    };
    // I_-^(beta/2) phi_i' at quadrature point p of element k.
    let minus_kernel = |i: usize, k: usize, p: usize| -> f64 {
        let mut acc = 0.0;
        for &(a, s) in &hat_derivative_pieces(i, n) {
            let d = a as isize - k as isize;
            acc += s * (tminus(d + 1, p) - tminus(d, p));
        }
        acc * inv_gamma_half / h
    };

    let dim = n + 2;
    let mut matrix = vec![0.0; dim * dim];
    // Support clipping: the left kernel of phi_j' starts at element j-1 (0
    // for the boundary hat), the right kernel of phi_i' ends at element i
    // (n-1 for the boundary hat). Entries with empty overlap stay zero.
    for i in 0..=n {
        let k_hi = if i == n { n - 1 } else { i };
        for j in 0..=n {
            let k_lo = j.saturating_sub(1);
            if k_lo > k_hi {
                continue;
            }
            let mut acc = 0.0;
            for k in k_lo..=k_hi {
                for (p, w) in wq.iter().enumerate() {
                    acc += w * plus_kernel(j, k, p) * minus_kernel(i, k, p);
                }
            }
            matrix[i * dim + j] = acc;
        }
    }
    let masses = hat_masses(n);
    for j in 0..=n {
        matrix[(n + 1) * dim + j] = masses[j];
        matrix[j * dim + n + 1] = masses[j];
    }

    let mut rhs = vec![0.0; dim];
    for (i, slot) in rhs.iter_mut().enumerate().take(n + 1) {
        let mut acc = 0.0;
        // phi_i is xi on element i-1 and 1 - xi on element i.
        if i > 0 {
            let x0 = (i - 1) as f64 * h;
            for p in 0..q {
                acc += wq[p] * f.eval(x0 + xi[p] * h) * xi[p];
            }
        }
        if i < n {
            let x0 = i as f64 * h;
            for p in 0..q {
                acc += wq[p] * f.eval(x0 + xi[p] * h) * (1.0 - xi[p]);
            }
        }
        *slot = acc;
    }
    rhs[n] += a1;
    rhs[0] -= a0;

    let constraint_residual = f.integral()? + a1 - a0;
    let constraint_scale = 1.0f64.max(a0.abs()).max(a1.abs()).max(f.l1_bound());
    Ok(FemSystem {
        order: *order,
        n,
        matrix,
        rhs,
        constraint_residual,
        constraint_scale,
    })
}

impl FemSystem {
    /// `v^T B v` over the stiffness block (ignoring the multiplier row).
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let dim = self.n + 2;
        let mut acc = 0.0;
        for i in 0..=self.n {
            let mut row = 0.0;
            for (j, &vj) in v.iter().enumerate().take(self.n + 1) {
                row += self.matrix[i * dim + j] * vj;
            }
            acc += v[i] * row;
        }
        acc
    }

    /// Apply the stiffness block to nodal values: `(B u)_i`.
    pub fn apply_stiffness(&self, u: &[f64]) -> Vec<f64> {
        let dim = self.n + 2;
        (0..=self.n)
            .map(|i| {
                u.iter()
                    .enumerate()
                    .take(self.n + 1)
                    .map(|(j, &uj)| self.matrix[i * dim + j] * uj)
                    .sum()
            })
            .collect()
    }
}

/// Solve the augmented system by LU with partial pivoting and return the
/// nodal values (discrete mean zero).
///
/// Fails with [`Error::IncompatibleData`] when the data violate the
/// compatibility constraint — the constant mode of the discrete system is
/// inconsistent then — and with [`Error::SingularSystem`] if elimination
/// breaks down, which the coercive continuous problem never justifies.
pub fn solve_fem(sys: &FemSystem) -> Result<GridFunction> {
    solve_fem_with_tol(sys, 1e-8)
}

pub fn solve_fem_with_tol(sys: &FemSystem, compat_tol: f64) -> Result<GridFunction> {
    if sys.constraint_residual.abs() > compat_tol * sys.constraint_scale {
        return Err(Error::IncompatibleData { residual: sys.constraint_residual });
    }
    let dim = sys.n + 2;
    let mut a = sys.matrix.clone();
    let mut b = sys.rhs.clone();
    let scale = a.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    for col in 0..dim {
        let mut pivot_row = col;
        let mut pivot_val = a[col * dim + col].abs();
        for r in (col + 1)..dim {
            let v = a[r * dim + col].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val <= 1e-14 * scale {
            return Err(Error::SingularSystem);
        }
        if pivot_row != col {
            for c in 0..dim {
                a.swap(col * dim + c, pivot_row * dim + c);
            }
            b.swap(col, pivot_row);
        }
        let inv = 1.0 / a[col * dim + col];
        for r in (col + 1)..dim {
            let factor = a[r * dim + col] * inv;
            if factor == 0.0 {
                continue;
            }
            a[r * dim + col] = 0.0;
            for c in (col + 1)..dim {
                a[r * dim + c] -= factor * a[col * dim + c];
            }
            b[r] -= factor * b[col];
        }
    }
    for col in (0..dim).rev() {
        let mut acc = b[col];
        for c in (col + 1)..dim {
            acc -= a[col * dim + c] * b[c];
        }
        b[col] = acc / a[col * dim + col];
    }
    GridFunction::new(b[..=sys.n].to_vec())
}
