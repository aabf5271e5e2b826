//! Cross-validate the reduction solver with the Galerkin finite element
//! discretization of the conservative Caputo equation under Caputo flux
//! data: two routes to the same function that share no code path.
//!
//! ```text
//! cargo run --example fem_crosscheck
//! ```

use fracbvp::fem::{assemble, hat_masses, solve_fem};
use fracbvp::grid::{trapezoid, GridFunction, Profile};
use fracbvp::solver::solve;
use fracbvp::special::FracOrder;
use fracbvp::wellposed::{BcType, EquationForm, ProblemSpec};

fn main() {
    let beta = 0.5;
    let order = FracOrder::new(beta).unwrap();
    let f = Profile::constant(-1.0);
    let (a0, a1) = (0.0, 1.0);

    let spec = ProblemSpec::new(
        EquationForm::ConservativeCaputo,
        BcType::Caputo,
        beta,
        f.clone(),
        a0,
        a1,
        256,
    )
    .unwrap();
    let reduction = solve(&spec).unwrap();
    println!("reduction closed form: u* = {}", reduction.total_exact().unwrap());
    println!();

    println!("FEM vs reduction (sup distance at the nodes, gauges aligned):");
    for n in [64usize, 128, 256, 512] {
        let sys = assemble(&order, n, &f, a0, a1).unwrap();
        let u_h = solve_fem(&sys).unwrap();
        let nodal = GridFunction::new(
            (0..=n).map(|j| reduction.regular.eval(j as f64 / n as f64)).collect(),
        )
        .unwrap();
        let (sr, sh) = (trapezoid(&nodal), trapezoid(&u_h));
        let gap = (0..=n)
            .map(|j| ((nodal.values()[j] - sr) - (u_h.values()[j] - sh)).abs())
            .fold(0.0, f64::max);
        println!("  n = {n:>4}: {gap:.4e}");
    }

    // The stiffness form is positive on nonconstant mean-zero vectors (the
    // continuous form equals cos(beta pi / 2) times a squared flux norm).
    let n = 64;
    let sys = assemble(&order, n, &Profile::constant(0.0), 0.0, 0.0).unwrap();
    let masses = hat_masses(n);
    let total: f64 = masses.iter().sum();
    let mut worst = f64::INFINITY;
    let mut state = 0x9E3779B97F4A7C15u64;
    for _ in 0..50 {
        let mut v: Vec<f64> = (0..=n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 52) as f64 - 1.0
            })
            .collect();
        let mean: f64 = v.iter().zip(&masses).map(|(a, m)| a * m).sum::<f64>() / total;
        for x in &mut v {
            *x -= mean;
        }
        worst = worst.min(sys.quadratic_form(&v));
    }
    println!("\nsmallest v^T B v over 50 random mean-zero vectors: {worst:.4e} (> 0)");
}
