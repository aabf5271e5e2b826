//! Gamma and Beta functions.
//!
//! Lanczos approximation (g = 607/128, 15 terms) with the reflection formula
//! for arguments below 1/2. Relative accuracy is around 1e-14 over the range
//! used by this crate, comfortably past the 12 significant digits the exact
//! power-rule oracle needs to dominate grid error.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficient set for g = 607/128.
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function.
///
/// Poles at 0, -1, -2, ... are rejected rather than returning infinities.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("gamma of non-finite {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole { x });
    }
    Ok(gamma_unchecked(x))
}

const FACTORIALS: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

fn gamma_unchecked(x: f64) -> f64 {
    // Small positive integers are exact; the power rule leans on Gamma(1) = 1.
    if x == x.floor() && (1.0..=21.0).contains(&x) {
        return FACTORIALS[(x as usize) - 1];
    }
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for a, b > 0.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::BetaDomain { a, b });
    }
    Ok(gamma_unchecked(a) * gamma_unchecked(b) / gamma_unchecked(a + b))
}
