//! Special functions and the exact power-term fractional calculus.
//!
//! This module is the ground-truth oracle for the rest of the crate: the
//! grid operators, the reduction solvers, and the FEM cross-check are all
//! validated against closed forms computed here.

mod gamma;
mod power;

pub use gamma::{beta_fn, gamma};
pub use power::{
    frac_derivative_exact, frac_integral_exact, integrate_unit, pairing, weighted_integral,
    DerivKind, PowerSum, PowerTerm, Side,
};

use crate::error::{Error, Result};

/// The order parameter `beta` of a problem of order `2 - beta`, together with
/// the derived exponents it drags along everywhere.
///
/// `kappa` is the integrability exponent of the solution space: 2 below the
/// `beta = 1/2` threshold, and `1 + (1 - beta - epsilon)/beta` above it, which
/// sits strictly between 1 and `1/beta`. `epsilon` is a slack parameter with
/// `0 < epsilon < 1 - beta`; here `epsilon = min(0.01, (1-beta)/2)`, which
/// keeps `kappa` close to `1/beta` for every admissible `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    beta: f64,
    kappa: f64,
    epsilon: f64,
}

impl FracOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidInput(format!("beta = {beta} outside (0,1)")));
        }
        let epsilon = 0.01f64.min((1.0 - beta) / 2.0);
        let kappa = if beta < 0.5 {
            2.0
        } else {
            1.0 + (1.0 - beta - epsilon) / beta
        };
        Ok(Self { beta, kappa, epsilon })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Order of the differential equation, `2 - beta`.
    pub fn order2(&self) -> f64 {
        2.0 - self.beta
    }

    /// Order of the flux operators, `1 - beta`.
    pub fn order1(&self) -> f64 {
        1.0 - self.beta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Conjugate exponent `kappa / (kappa - 1)`.
    pub fn kappa_conjugate(&self) -> f64 {
        self.kappa / (self.kappa - 1.0)
    }
}
