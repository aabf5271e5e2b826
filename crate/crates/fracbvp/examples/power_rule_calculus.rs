//! Exact fractional calculus on power sums: the power rule, the semigroup
//! identity, and the x^(-beta) kernel identities that drive the whole
//! classification.
//!
//! ```text
//! cargo run --example power_rule_calculus
//! ```

use fracbvp::special::{
    frac_derivative_exact, frac_integral_exact, gamma, DerivKind, PowerSum, Side,
};

fn main() {
    let beta = 0.5;

    // I^alpha x^mu = Gamma(mu+1)/Gamma(alpha+mu+1) x^(alpha+mu)
    let p = PowerSum::single(1.0, 1.0, Side::Left);
    let half = frac_integral_exact(Side::Left, 0.5, &p).unwrap();
    println!("I^0.5 x          = {half}");

    // Semigroup: I^0.3 I^0.7 x = I^1 x = x^2/2
    let a = frac_integral_exact(Side::Left, 0.3, &p).unwrap();
    let b = frac_integral_exact(Side::Left, 0.7, &a).unwrap();
    println!("I^0.7 I^0.3 x    = {b}");

    // The singular kernel: I^beta x^(-beta) is the constant Gamma(1-beta)...
    let kernel = PowerSum::single(1.0, -beta, Side::Left);
    let lifted = frac_integral_exact(Side::Left, beta, &kernel).unwrap();
    println!("I^{beta} x^-{beta}   = {lifted}   (Gamma(1-beta) = {})", gamma(1.0 - beta).unwrap());

    // ...so its Riemann-Liouville derivatives vanish identically...
    let rl1 = frac_derivative_exact(DerivKind::RiemannLiouville, Side::Left, 1.0 - beta, &kernel).unwrap();
    let rl2 = frac_derivative_exact(DerivKind::RiemannLiouville, Side::Left, 2.0 - beta, &kernel).unwrap();
    println!("RL D^(1-b) x^-b  = {rl1}");
    println!("RL D^(2-b) x^-b  = {rl2}   (x^-beta solves the homogeneous RL equation)");

    // ...while the Caputo derivative does not exist at all.
    match frac_derivative_exact(DerivKind::Caputo, Side::Left, 1.0 - beta, &kernel) {
        Err(e) => println!("Caputo D^(1-b) x^-b: {e}"),
        Ok(_) => unreachable!(),
    }

    // Caputo vs RL on a function with u(0) != 0: they differ by
    // u(0) x^(beta-1)/Gamma(beta).
    let u = PowerSum::new(vec![
        fracbvp::special::PowerTerm::left(2.0, 0.0),
        fracbvp::special::PowerTerm::left(1.0, 2.0),
    ]);
    let cap = frac_derivative_exact(DerivKind::Caputo, Side::Left, 1.0 - beta, &u).unwrap();
    let rl = frac_derivative_exact(DerivKind::RiemannLiouville, Side::Left, 1.0 - beta, &u).unwrap();
    println!("u = {u}");
    println!("Caputo D^(1-b) u = {cap}");
    println!("RL     D^(1-b) u = {rl}");
    println!("difference       = {}", rl.sub(&cap));
}
