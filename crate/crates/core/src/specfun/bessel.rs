//! Modified Bessel functions of purely imaginary order, `I_{iμ}(x)` and
//! `K_{iμ}(x)`, for real `x > 0`.
//!
//! `I_{iμ}` is summed from its power series. `K_{iμ}` is evaluated three ways
//! depending on where the series cancellation is tolerable:
//!
//! * `x > 2` and `3x > πμ`: trapezoid rule on `∫₀^∞ e^{−x cosh t} cos(μt) dt`;
//! * `μ < 0.3`: the series of `Im I_{iμ} / μ` with the order derivative of the
//!   Gamma phase carried analytically, so `μ → 0` is regular;
//! * otherwise `K_{iμ} = −π Im I_{iμ}(x) / sinh(πμ)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::gamma_complex;
use crate::error::{Error, Result};

pub const MAX_ORDER: f64 = 50.0;
pub const MAX_ARGUMENT: f64 = 60.0;
const SMALL_ORDER: f64 = 0.3;
const MAX_TERMS: usize = 600;

fn check(mu: f64, x: f64) -> Result<()> {
    if !mu.is_finite() || mu.abs() > MAX_ORDER {
        return Err(Error::OutOfRange { what: "bessel order", value: mu });
    }
    if x.is_nan() || x <= 0.0 {
        return Err(Error::BranchPoint { x });
    }
    if x > MAX_ARGUMENT || !x.is_finite() {
        return Err(Error::OutOfRange { what: "bessel argument", value: x });
    }
    Ok(())
}

/// `I_{iμ}(x)`.
pub fn bessel_i_imag_order(mu: f64, x: f64) -> Result<Complex64> {
    bessel_i_imag_order_with_derivative(mu, x).map(|(v, _)| v)
}

/// `(I_{iμ}(x), d/dx I_{iμ}(x))`.
pub fn bessel_i_imag_order_with_derivative(mu: f64, x: f64) -> Result<(Complex64, Complex64)> {
    check(mu, x)?;
    i_series(mu, x, MAX_TERMS)
}

/// Power series truncated after at most `max_terms` terms.
pub(crate) fn i_series(mu: f64, x: f64, max_terms: usize) -> Result<(Complex64, Complex64)> {
    let half = 0.5 * x;
    let q = half * half;
    let order = Complex64::new(0.0, mu);
    let lead = Complex64::new(0.0, mu * half.ln()).exp();
    let mut term = lead / gamma_complex(1.0 + order)?;
    let mut sum = term;
    let mut dsum = term * order / x;
    for j in 1..max_terms {
        let jf = j as f64;
        term *= q / (jf * (jf + order));
        sum += term;
        dsum += term * (2.0 * jf + order) / x;
        if jf > half && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    Ok((sum, dsum))
}

/// `K_{iμ}(x)`; real and even in `μ`.
pub fn bessel_k_imag_order(mu: f64, x: f64) -> Result<f64> {
    bessel_k_imag_order_with_derivative(mu, x).map(|(v, _)| v)
}

/// `(K_{iμ}(x), d/dx K_{iμ}(x))`.
pub fn bessel_k_imag_order_with_derivative(mu: f64, x: f64) -> Result<(f64, f64)> {
    check(mu, x)?;
    let mu = mu.abs();
    if x > 2.0 && 3.0 * x > PI * mu {
        Ok(k_integral(mu, x))
    } else if mu < SMALL_ORDER {
        Ok(k_small_order(mu, x))
    } else {
        let (i, di) = i_series(mu, x, MAX_TERMS)?;
        let s = (PI * mu).sinh();
        Ok((-PI * i.im / s, -PI * di.im / s))
    }
}

fn k_integral(mu: f64, x: f64) -> (f64, f64) {
    let h = 0.05;
    let t_max = (1.0 + 40.0 / x).acosh();
    let n = (t_max / h).ceil() as usize;
    let (mut k, mut dk) = (0.5, 0.5);
    for i in 1..=n {
        let t = i as f64 * h;
        let sh = (0.5 * t).sinh();
        // e^{-x (cosh t - 1)}
        let w = (-2.0 * x * sh * sh).exp();
        let c = (mu * t).cos();
        k += w * c;
        dk += t.cosh() * w * c;
    }
    let scale = h * (-x).exp();
    (k * scale, -dk * scale)
}

/// `atan(μ/c)/μ`, regular at μ = 0.
fn atan_ratio(mu: f64, c: f64) -> f64 {
    if mu.abs() < 1e-8 {
        1.0 / c - mu * mu / (3.0 * c * c * c)
    } else {
        (mu / c).atan() / mu
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// `πμ / sinh(πμ)`
fn pi_mu_over_sinh(mu: f64) -> f64 {
    let y = PI * mu;
    if y.abs() < 1e-6 {
        1.0 - y * y / 6.0
    } else {
        y / y.sinh()
    }
}

/// `arg Γ(1 + iμ) / μ` (continuous branch), regular at μ = 0 where it equals ψ(1).
fn arg_gamma_one_plus_i_over_mu(mu: f64) -> f64 {
    const SHIFT: usize = 10;
    // B_{2k} / (2k (2k − 1))
    const STIRLING: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let c = (SHIFT + 1) as f64;
    let modulus = c.hypot(mu);
    let phi = (mu / c).atan();
    let a = atan_ratio(mu, c);
    let mut acc = (c - 0.5) * a + modulus.ln() - 1.0;
    let mut zpow = modulus;
    for (k, &ck) in STIRLING.iter().enumerate() {
        let m = (2 * k + 1) as f64;
        acc -= ck * m * a * sinc(m * phi) / zpow;
        zpow *= modulus * modulus;
    }
    for l in 1..=SHIFT {
        acc -= atan_ratio(mu, l as f64);
    }
    acc
}

fn k_small_order(mu: f64, x: f64) -> (f64, f64) {
    let log_half = (0.5 * x).ln();
    let q = 0.25 * x * x;
    let mut a = 1.0 / pi_mu_over_sinh(mu).sqrt();
    let mut theta = arg_gamma_one_plus_i_over_mu(mu);
    let (mut f, mut df) = (0.0, 0.0);
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        if j > 0 {
            a *= q / (jf * jf.hypot(mu));
            theta += atan_ratio(mu, jf);
        }
        let w = log_half - theta;
        let phase = mu * w;
        let sw = w * sinc(phase);
        f += a * sw;
        df += a * (2.0 * jf * sw + phase.cos()) / x;
        if jf > 0.5 * x && a * (1.0 + w.abs()) <= 1e-18 * f.abs().max(1e-300) {
            break;
        }
    }
    let r = pi_mu_over_sinh(mu);
    (-f * r, -df * r)
}
