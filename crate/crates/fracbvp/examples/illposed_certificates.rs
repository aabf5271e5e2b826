//! The four unsolvable cells, each with its concrete obstruction: what in
//! the closed-form solution family refuses to meet the boundary data.
//!
//! ```text
//! cargo run --example illposed_certificates
//! ```

use fracbvp::grid::Profile;
use fracbvp::solver::solve;
use fracbvp::wellposed::{illposedness_certificate, BcType, EquationForm, ProblemSpec};

fn main() {
    let beta = 0.5;
    let cells = [
        (EquationForm::Caputo, BcType::Caputo),
        (EquationForm::Caputo, BcType::RiemannLiouville),
        (EquationForm::ConservativeCaputo, BcType::Classical),
        (EquationForm::RiemannLiouville, BcType::Classical),
    ];
    for (form, bc) in cells {
        println!("{form:?} + {bc:?}");
        for a0 in [0.3, 0.0] {
            let spec = ProblemSpec::new(form, bc, beta, Profile::constant(-1.0), a0, a0 + 1.0, 64).unwrap();
            let cert = illposedness_certificate(&spec).unwrap();
            println!("  a0 = {a0}: condition '{}' met: {}", cert.condition, cert.condition_met);
            if let (Some(c), Some(e)) = (cert.obstruction_coefficient, cert.obstruction_exponent) {
                println!("    obstruction term: {c:.6} * x^({e})");
            }
            println!("    {}", cert.detail);
            if let Err(err) = solve(&spec) {
                println!("    solve: {err}");
            }
        }
        println!();
    }
}
