//! Fractional Neumann boundary-value problems of order `2 - beta` on `(0, 1)`.
//!
//! Three forms of the equation — non-conservative Caputo, conservative
//! Caputo, and Riemann-Liouville — can each be closed by three Neumann-type
//! conditions prescribing the classical, Caputo, or Riemann-Liouville flux at
//! the endpoints. Five of the nine combinations admit solutions and four do
//! not. This crate:
//!
//! * classifies all nine cells and evaluates their compatibility constraints
//!   ([`wellposed`]),
//! * constructs the solution of each solvable cell through its reduction to
//!   an integer-order problem, with exact closed forms for power-sum sources
//!   ([`solver`], [`special`], [`classical`]),
//! * re-verifies every produced solution by applying the fractional operator
//!   to it ([`solver::residual_report`]),
//! * cross-checks one cell with an independent Galerkin finite element
//!   discretization ([`fem`]),
//! * and exposes the numerical substrate: product-integration fractional
//!   operators on grids ([`grid`]) and Gauss-Jacobi/Legendre rules ([`quad`]).
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example classification_table   # the 9-cell wellposedness table
//! cargo run --example power_rule_calculus    # exact fractional calculus basics
//! cargo run --example closed_form_solutions  # the five solvable cells, f = -1
//! cargo run --example singular_kernel        # the x^(-beta) kernel family
//! cargo run --example compatibility_gate     # constraint residuals and rejection
//! cargo run --example illposed_certificates  # the four unsolvable cells
//! cargo run --example grid_convergence       # grid-operator convergence orders
//! cargo run --example fem_crosscheck         # FEM vs reduction solver
//! ```
//!
//! A thin CLI (`fracbvp`) wraps the same entry points for spec files; see the
//! README.
//!
//! # Quick start
//!
//! ```
//! use fracbvp::grid::Profile;
//! use fracbvp::wellposed::{BcType, EquationForm, ProblemSpec};
//!
//! // -D(CaputoD^(1-beta) u) = -1,  CaputoD^(1-beta) u = 0.3 at 0, 1.3 at 1
//! let spec = ProblemSpec::new(
//!     EquationForm::ConservativeCaputo,
//!     BcType::Caputo,
//!     0.5,
//!     Profile::constant(-1.0),
//!     0.3,
//!     1.3,
//!     128,
//! )?;
//! let solution = fracbvp::solver::solve(&spec)?;
//! assert!(solution.report.interior_residual_sup < 1e-10);
//! # Ok::<(), fracbvp::Error>(())
//! ```

pub mod classical;
pub mod cli;
pub mod error;
pub mod fem;
pub mod grid;
pub mod quad;
pub mod solver;
pub mod special;
pub mod wellposed;

pub use error::{Error, Result};
