//! The Riemann-Liouville/Riemann-Liouville cell is well posed only up to
//! multiples of x^(-beta): shifting a solution along that kernel changes
//! nothing the equation or the boundary functionals can see.
//!
//! ```text
//! cargo run --example singular_kernel
//! ```

use fracbvp::grid::Profile;
use fracbvp::solver::{residual_report, solve};
use fracbvp::wellposed::{BcType, EquationForm, ProblemSpec};

fn main() {
    let beta = 0.5;
    let spec = ProblemSpec::new(
        EquationForm::RiemannLiouville,
        BcType::RiemannLiouville,
        beta,
        Profile::constant(-1.0),
        0.3,
        1.3,
        128,
    )
    .unwrap();
    let sol = solve(&spec).unwrap();
    println!("representative u* = {}", sol.total_exact().unwrap());
    println!("  gauge: integral of I^beta u* = 0 (residual {:.2e})", sol.report.normalization_residual);
    println!("  singular coefficient (of x^-beta): {:.10}", sol.singular_coef());
    println!();

    for c in [0.0, 1.0, -2.5, 40.0] {
        let shifted = sol.shifted_by_kernel(c);
        let report = residual_report(&shifted, &spec);
        println!(
            "u* + {c:>5} * x^-beta: interior residual {:.2e}, bc residual ({:+.2e}, {:+.2e})",
            report.interior_residual_sup, report.bc_residual.0, report.bc_residual.1,
        );
    }
    println!();
    println!("Every member of the family solves the problem; the data cannot tell them apart.");
}
