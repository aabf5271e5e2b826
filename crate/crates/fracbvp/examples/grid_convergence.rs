//! Convergence study of the grid-side machinery against the exact power-rule
//! oracle: the product-trapezoidal fractional integral, the discrete adjoint
//! and semigroup defects, and a sampled-source solve.
//!
//! ```text
//! cargo run --example grid_convergence
//! ```

use fracbvp::grid::{
    frac_integral_grid, inner_product, trapezoid, GridFunction, Profile,
};
use fracbvp::solver::solve;
use fracbvp::special::{frac_integral_exact, PowerSum, Side};
use fracbvp::wellposed::{BcType, EquationForm, ProblemSpec};

fn main() {
    let alpha = 0.5;
    println!("product-trapezoidal I^{alpha} on x^2.5 vs exact power rule:");
    let exact = frac_integral_exact(Side::Left, alpha, &PowerSum::single(1.0, 2.5, Side::Left)).unwrap();
    let mut prev: Option<f64> = None;
    for n in [128usize, 256, 512, 1024] {
        let g = GridFunction::from_fn(n, |x| x.powf(2.5)).unwrap();
        let got = frac_integral_grid(Side::Left, alpha, &g).unwrap();
        let err = (0..=n)
            .map(|j| (got.values()[j] - exact.eval(j as f64 / n as f64)).abs())
            .fold(0.0, f64::max);
        match prev {
            Some(p) => println!("  n = {n:>5}: sup error {err:.3e}  (order {:.2})", (p / err).log2()),
            None => println!("  n = {n:>5}: sup error {err:.3e}"),
        }
        prev = Some(err);
    }

    println!("\ndiscrete adjoint defect |<I+ g, h> - <g, I- h>|:");
    for n in [64usize, 128, 256, 512] {
        let g = GridFunction::from_fn(n, |x| (2.0 * x).cos()).unwrap();
        let h = GridFunction::from_fn(n, |x| x * x).unwrap();
        let lhs = inner_product(&frac_integral_grid(Side::Left, alpha, &g).unwrap(), &h).unwrap();
        let rhs = inner_product(&g, &frac_integral_grid(Side::Right, alpha, &h).unwrap()).unwrap();
        println!("  n = {n:>5}: {:.3e}", (lhs - rhs).abs());
    }

    println!("\ndiscrete semigroup defect ||I^0.4 I^0.3 g - I^0.7 g||_inf:");
    for n in [64usize, 128, 256, 512] {
        let g = GridFunction::from_fn(n, |x| (1.5 * x).sin()).unwrap();
        let two = frac_integral_grid(Side::Left, 0.4, &frac_integral_grid(Side::Left, 0.3, &g).unwrap()).unwrap();
        let one = frac_integral_grid(Side::Left, 0.7, &g).unwrap();
        let defect = (0..=n)
            .map(|j| (two.values()[j] - one.values()[j]).abs())
            .fold(0.0, f64::max);
        println!("  n = {n:>5}: {:.3e}", defect);
    }

    println!("\nsampled-source solve (conservative Caputo + Caputo flux, f = sin(pi x)):");
    let beta = 0.6;
    let pi = std::f64::consts::PI;
    for n in [64usize, 128, 256, 512] {
        let f = GridFunction::from_fn(n, |x| (pi * x).sin()).unwrap();
        let a1 = -trapezoid(&f);
        let spec = ProblemSpec::new(
            EquationForm::ConservativeCaputo,
            BcType::Caputo,
            beta,
            Profile::Grid(f),
            0.0,
            a1,
            n,
        )
        .unwrap();
        let sol = solve(&spec).unwrap();
        println!("  n = {n:>5}: interior residual {:.3e}", sol.report.interior_residual_sup);
    }
}
