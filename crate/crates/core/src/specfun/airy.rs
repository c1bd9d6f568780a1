//! Airy functions Ai, Bi and their derivatives for real arguments.
//!
//! | range            | method                                                   |
//! |------------------|----------------------------------------------------------|
//! | −2 ≤ x ≤ 2       | Maclaurin series                                         |
//! | −10 ≤ x < −2     | Taylor re-expansion of `y'' = x y` in steps of ≤ 0.5     |
//! | 2 < x ≤ 10       | Bi: Maclaurin (positive terms); Ai: Laplace-type integral |
//! | |x| > 10         | asymptotic expansions                                    |
//!
//! The Maclaurin series loses about `exp(2|x|^{3/2}/3)` relative digits on the
//! negative axis and Ai loses the same on the positive axis, which rules it out
//! beyond |x| ≈ 2 if the Wronskian is to hold to 1e-12. The integral
//! `Ai(x) = e^{−ζ}/π ∫₀^∞ exp(−√x t²) cos(t³/3) dt` has a smooth even
//! integrand and the trapezoid rule converges geometrically.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Ai(0)
const AI0: f64 = 0.355_028_053_887_817_24;
/// −Ai'(0)
const MINUS_AIP0: f64 = 0.258_819_403_792_806_8;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Largest |x| accepted by [`airy`]; Bi(100) ≈ 1e288.
pub const AIRY_MAX_ARG: f64 = 100.0;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryPair {
    /// `Ai·Bi' − Ai'·Bi`, identically 1/π.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

pub fn airy(x: f64) -> Result<AiryPair> {
    if !x.is_finite() || x.abs() > AIRY_MAX_ARG {
        return Err(Error::OutOfRange { what: "airy argument", value: x });
    }
    Ok(if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > ASYMPTOTIC_LIMIT {
        asymptotic_positive(x)
    } else if x < -ASYMPTOTIC_LIMIT {
        asymptotic_negative(-x)
    } else if x > 0.0 {
        let (ai, ai_prime) = ai_integral(x);
        let m = maclaurin(x);
        AiryPair { ai, ai_prime, bi: m.bi, bi_prime: m.bi_prime }
    } else {
        taylor_walk(maclaurin(-SERIES_LIMIT), -SERIES_LIMIT, x)
    })
}

pub(crate) fn maclaurin(x: f64) -> AiryPair {
    let x2 = x * x;
    let x3 = x2 * x;
    // f = Σ 3^k (1/3)_k x^{3k}/(3k)!,  g = Σ 3^k (2/3)_k x^{3k+1}/(3k+1)!
    let (mut f, mut g, mut fp, mut gp) = (1.0, x, 0.0, 1.0);
    let (mut ft, mut gt) = (1.0, x);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        let fpt = ft * x2 / (k3 - 1.0);
        let gpt = gt * x2 / k3;
        ft *= x3 / (k3 * (k3 - 1.0));
        gt *= x3 / (k3 * (k3 + 1.0));
        f += ft;
        g += gt;
        fp += fpt;
        gp += gpt;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if ft.abs() + gt.abs() + fpt.abs() + gpt.abs() <= 1e-18 * scale {
            break;
        }
    }
    AiryPair {
        ai: AI0 * f - MINUS_AIP0 * g,
        bi: SQRT3 * (AI0 * f + MINUS_AIP0 * g),
        ai_prime: AI0 * fp - MINUS_AIP0 * gp,
        bi_prime: SQRT3 * (AI0 * fp + MINUS_AIP0 * gp),
    }
}

/// Advance `(y, y')` of a solution of `y'' = x y` from `x0` to `x0 + h`.
fn taylor_step(y: f64, yp: f64, x0: f64, h: f64) -> (f64, f64) {
    // (n+2)(n+1) a_{n+2} = x0 a_n + a_{n-1}
    let mut a = [0.0f64; 3]; // a_{n-2}, a_{n-1}, a_n
    a[1] = y;
    a[2] = yp;
    let (mut val, mut der) = (y + yp * h, yp);
    let mut hp = h; // h^{n-1} for the derivative, n = current index
    let mut small = 0;
    for n in 2..120 {
        let prev2 = if n >= 3 { a[0] } else { 0.0 };
        let next = (x0 * a[1] + prev2) / (n as f64 * (n as f64 - 1.0));
        a = [a[1], a[2], next];
        let dterm = n as f64 * next * hp;
        hp *= h;
        let vterm = next * hp;
        val += vterm;
        der += dterm;
        if vterm.abs() <= 1e-18 * val.abs().max(1e-300) && dterm.abs() <= 1e-18 * der.abs().max(1e-300) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

fn taylor_walk(start: AiryPair, from: f64, to: f64) -> AiryPair {
    let steps = ((to - from).abs() / 0.5).ceil().max(1.0) as usize;
    let h = (to - from) / steps as f64;
    let mut p = start;
    let mut x0 = from;
    for _ in 0..steps {
        let (ai, ai_prime) = taylor_step(p.ai, p.ai_prime, x0, h);
        let (bi, bi_prime) = taylor_step(p.bi, p.bi_prime, x0, h);
        p = AiryPair { ai, bi, ai_prime, bi_prime };
        x0 += h;
    }
    p
}

fn ai_integral(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    let h = 0.02;
    let t_max = (45.0 / s).sqrt();
    let n = (t_max / h).ceil() as usize;
    let (mut j0, mut j2) = (0.5, 0.0);
    for i in 1..=n {
        let t = i as f64 * h;
        let t2 = t * t;
        let f = (-s * t2).exp() * (t2 * t / 3.0).cos();
        j0 += f;
        j2 += t2 * f;
    }
    j0 *= h;
    j2 *= h;
    let pre = (-2.0 / 3.0 * x * s).exp() / PI;
    (pre * j0, pre * (-s * j0 - j2 / (2.0 * s)))
}

/// Coefficients u_k, v_k of the large-argument expansions.
fn uv_coefficients(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    let mut uk = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        uk *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let vk = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk;
        let size = uk.abs() / zeta.powi(k);
        u.push(uk);
        v.push(vk);
        if size < 1e-18 {
            break;
        }
    }
    (u, v)
}

fn asymptotic_positive(x: f64) -> AiryPair {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (u, v) = uv_coefficients(zeta);
    let (mut su_alt, mut sv_alt, mut su, mut sv) = (0.0, 0.0, 0.0, 0.0);
    let mut zp = 1.0;
    for k in 0..u.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += u[k] / zp;
        sv += v[k] / zp;
        su_alt += sign * u[k] / zp;
        sv_alt += sign * v[k] / zp;
        zp *= zeta;
    }
    let q = x.powf(0.25);
    let rpi = PI.sqrt();
    let decay = (-zeta).exp();
    let grow = zeta.exp();
    AiryPair {
        ai: decay / (2.0 * rpi * q) * su_alt,
        ai_prime: -q * decay / (2.0 * rpi) * sv_alt,
        bi: grow / (rpi * q) * su,
        bi_prime: q * grow / rpi * sv,
    }
}

/// Expansions at `−y` for `y > 0`.
fn asymptotic_negative(y: f64) -> AiryPair {
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let (u, v) = uv_coefficients(zeta);
    // even/odd alternating partial sums
    let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
    let mut zp = 1.0;
    for k in 0..u.len() {
        let j = k / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * u[k] / zp;
            ve += sign * v[k] / zp;
        } else {
            uo += sign * u[k] / zp;
            vo += sign * v[k] / zp;
        }
        zp *= zeta;
    }
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let q = y.powf(0.25);
    let rpi = PI.sqrt();
    AiryPair {
        ai: (c * ue + s * uo) / (rpi * q),
        ai_prime: q / rpi * (s * ve - c * vo),
        bi: (-s * ue + c * uo) / (rpi * q),
        bi_prime: q / rpi * (c * ve + s * vo),
    }
}
