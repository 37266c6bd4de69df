//! Euler gamma function via the Lanczos approximation (g = 7, 9 terms) with
//! the reflection formula below 1/2.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn lanczos(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=171.0).contains(&x) {
        // exact factorials while they are representable
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * lanczos(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let w = x + LANCZOS_G + 0.5;
        // split the power to delay overflow for large x
        let half = w.powf(0.5 * (x + 0.5));
        (2.0 * PI).sqrt() * half * (-w).exp() * half * acc
    }
}

/// Γ(x). Non-positive integers are poles and return [`Error::Pole`].
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || is_pole(x) {
        return Err(Error::Pole(x));
    }
    Ok(lanczos(x))
}

/// 1/Γ(x), which is entire: zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) {
        0.0
    } else {
        1.0 / lanczos(x)
    }
}
