//! Solve all five well-posed cells for the constant source f = -1 and print
//! the closed forms together with their residual reports.
//!
//! ```text
//! cargo run --example closed_form_solutions
//! ```

use fracbvp::grid::Profile;
use fracbvp::solver::solve;
use fracbvp::special::gamma;
use fracbvp::wellposed::{BcType, EquationForm, ProblemSpec};

fn main() {
    let beta = 0.5;
    let a0 = 0.3;
    // Each constrained cell fixes a1 - a0 through its own compatibility
    // constraint: 1/Gamma(2-beta) for the weighted one, 1 for the rest.
    let cells = [
        (EquationForm::Caputo, BcType::Classical, a0 + 1.0 / gamma(2.0 - beta).unwrap()),
        (EquationForm::ConservativeCaputo, BcType::Caputo, a0 + 1.0),
        (EquationForm::ConservativeCaputo, BcType::RiemannLiouville, a0 + 1.0),
        (EquationForm::RiemannLiouville, BcType::RiemannLiouville, a0 + 1.0),
        (EquationForm::RiemannLiouville, BcType::Caputo, a0 + 1.0),
    ];
    for (form, bc, a1) in cells {
        let spec = ProblemSpec::new(form, bc, beta, Profile::constant(-1.0), a0, a1, 128).unwrap();
        let sol = solve(&spec).unwrap();
        println!("{form:?} + {bc:?}  (a0 = {a0}, a1 = {a1:.6})");
        println!("  u*       = {}", sol.total_exact().unwrap());
        println!("  kernel   = {:?}, normalization = {:?}", sol.kernel, sol.normalization);
        println!(
            "  residuals: interior {:.2e}, bc ({:+.2e}, {:+.2e}), constraint {:.2e}, gauge {:.2e}",
            sol.report.interior_residual_sup,
            sol.report.bc_residual.0,
            sol.report.bc_residual.1,
            sol.report.constraint_residual,
            sol.report.normalization_residual,
        );
        println!("  u(1)     = {:.10}", sol.regular.eval(1.0));
        println!();
    }
}
