//! Explicit two-state solutions with the coupling at `x_c = 0`.
//!
//! Channel 1 carries a unit wave incident from the left. Channel 1 is
//! `ψ₁ = A·u_in + B·u_out` on the left and `C·u_right` on the right; channel 2
//! is `D·v_left` and `F·v_right`. The four matching conditions reduce to two
//! scalar equations for `ψ₁(0)` and `ψ₂(0)`, solved here in closed form.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{classify_channel, ChannelClass, PotentialSpec, Side, StarProblem};
use crate::specfun::{airy, bessel_i_imag_order_with_derivative, bessel_k_imag_order_with_derivative};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoStateAmplitudes {
    /// Incident amplitude, always 1.
    pub a: Complex64,
    /// Reflected wave in channel 1.
    pub b: Complex64,
    /// Channel 1 on the far side.
    pub c: Complex64,
    /// Channel 2 on the incident side.
    pub d: Complex64,
    /// Channel 2 on the far side.
    pub f: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionResult {
    pub t_cross: f64,
    pub r_back: Option<f64>,
    pub t_same: Option<f64>,
    pub flux_residual: f64,
}

impl TransitionResult {
    fn new(t_cross: f64, r_back: f64, t_same: Option<f64>) -> Self {
        let total = t_cross + r_back + t_same.unwrap_or(0.0);
        Self { t_cross, r_back: Some(r_back), t_same, flux_residual: (total - 1.0).abs() }
    }
}

/// Values and derivatives at `x = 0` of the five one-sided solutions.
struct Junction {
    u_in: (Complex64, Complex64),
    u_out: (Complex64, Complex64),
    u_right: (Complex64, Complex64),
    v_left: (Complex64, Complex64),
    v_right: (Complex64, Complex64),
}

impl Junction {
    /// Amplitudes for `A = 1` and jump strength `kappa = 2mK/ħ²`.
    fn solve(&self, kappa: f64) -> TwoStateAmplitudes {
        let log_d = |(v, d): (Complex64, Complex64)| d / v;
        let lambda1 = log_d(self.u_right) - log_d(self.u_out);
        let lambda2 = log_d(self.v_right) - log_d(self.v_left);
        let w = self.u_in.0 * self.u_out.1 - self.u_in.1 * self.u_out.0;
        let k2 = kappa * kappa;
        let phi1 = -w * lambda2 / (self.u_out.0 * (lambda1 * lambda2 - k2));
        let phi2 = kappa * phi1 / lambda2;
        TwoStateAmplitudes {
            a: ONE,
            b: (phi1 - self.u_in.0) / self.u_out.0,
            c: phi1 / self.u_right.0,
            d: phi2 / self.v_left.0,
            f: phi2 / self.v_right.0,
        }
    }
}

fn wavenumber(level: f64, energy: f64, mass: f64, hbar: f64) -> f64 {
    (2.0 * mass * (energy - level).abs()).sqrt() / hbar
}

/// Constant curves `V1`, `V2` coupled by `K δ(x)`.
///
/// With `q₂ = k₂` (open) or `q₂ = iκ₂` (closed) and
/// `Δ = ħ⁴k₁q₂ + m²K²`: `B = −m²K²/Δ`, `C = ħ⁴k₁q₂/Δ`, `D = F = −imKħ²k₁/Δ`.
pub fn solve_constant_pair(
    v1: f64,
    v2: f64,
    strength: f64,
    mass: f64,
    hbar: f64,
    energy: f64,
) -> Result<(TwoStateAmplitudes, TransitionResult)> {
    let ch1 = classify_channel(&PotentialSpec::Constant { offset: v1 }, energy, mass, hbar, Side::Left)?;
    let ch2 = classify_channel(&PotentialSpec::Constant { offset: v2 }, energy, mass, hbar, Side::Left)?;
    if !ch1.class.is_open() {
        return Err(Error::NoIncidentWave { channel: 1, side: "left" });
    }
    let k1 = wavenumber(v1, energy, mass, hbar);
    let q2 = match ch2.class {
        ChannelClass::Open { .. } => Complex64::new(wavenumber(v2, energy, mass, hbar), 0.0),
        _ => Complex64::new(0.0, wavenumber(v2, energy, mass, hbar)),
    };
    let h2 = hbar * hbar;
    let h4 = h2 * h2;
    let mk = mass * strength;
    let den = h4 * k1 * q2 + mk * mk;
    let b = -(mk * mk) / den;
    let c = h4 * k1 * q2 / den;
    let d = -I * mk * h2 * k1 / den;
    let amps = TwoStateAmplitudes { a: ONE, b, c, d, f: d };

    let r_back = b.norm_sqr();
    let t_same = c.norm_sqr();
    let t_cross = if ch2.class.is_open() { 2.0 * q2.re / k1 * d.norm_sqr() } else { 0.0 };
    Ok((amps, TransitionResult::new(t_cross, r_back, Some(t_same))))
}

/// `T = 16·2^{2/3}|N/D|²` for `p₁ = p₂ = 1`, `K = 1`, `m = ħ = 1`.
pub fn linear_printed_transition(energy: f64) -> Result<f64> {
    let c = 2f64.cbrt();
    let c2 = c * c;
    let s = airy(-c * energy)?;
    let (ai, aip, bi, bip) = (s.ai, s.ai_prime, s.bi, s.bi_prime);
    let n = ai * ai * (-aip * bi + ai * bip);
    let d = Complex64::new(
        c2 * aip * aip * bi * bi + 4.0 * ai.powi(4) - 2.0 * c2 * ai * aip * bi * bip
            + ai * ai * (-4.0 * bi * bi + c2 * bip * bip),
        -8.0 * ai.powi(3) * bi,
    );
    Ok(16.0 * c2 * (n / d).norm_sqr())
}

/// Crossing ramps `+p₁x` and `−p₂x`. Channel 1 is open on the left and
/// forbidden on the right; channel 2 the reverse.
///
/// The region solutions are the Airy combinations `Ai ± iBi` (incoming and
/// outgoing) and `Ai` (forbidden side). Only the unit parameters
/// `p₁ = p₂ = m = ħ = 1` are accepted; the coupling strength is free.
pub fn solve_linear_pair(
    p1: f64,
    p2: f64,
    strength: f64,
    mass: f64,
    hbar: f64,
    energy: f64,
) -> Result<(TwoStateAmplitudes, TransitionResult)> {
    if p1 != 1.0 || p2 != 1.0 || mass != 1.0 || hbar != 1.0 {
        return Err(Error::UseGenericMatcher(format!(
            "linear closed form needs p1 = p2 = m = hbar = 1 (got p1 = {p1}, p2 = {p2}, m = {mass}, hbar = {hbar})"
        )));
    }
    if !strength.is_finite() || !energy.is_finite() {
        return Err(Error::InvalidField { field: "linear pair", reason: "parameters must be finite".into() });
    }
    let beta = 2f64.cbrt();
    // channel 1: z = β(x − E); channel 2: z = −β(x + E); both equal −βE at 0
    let s = airy(-beta * energy)?;
    let ai = (Complex64::from(s.ai), Complex64::from(s.ai_prime));
    let bi = (Complex64::from(s.bi), Complex64::from(s.bi_prime));
    let comb = |sign: f64, scale: f64| (ai.0 + sign * I * bi.0, scale * (ai.1 + sign * I * bi.1));
    let junction = Junction {
        u_in: comb(1.0, beta),
        u_out: comb(-1.0, beta),
        u_right: (ai.0, beta * ai.1),
        v_left: (ai.0, -beta * ai.1),
        v_right: comb(-1.0, -beta),
    };
    let amps = junction.solve(2.0 * strength);
    // Ai ± iBi carry current ±β/π in either orientation, so |F|² and |B|²
    // are already flux fractions.
    let result = TransitionResult::new(amps.f.norm_sqr(), amps.b.norm_sqr(), None);
    Ok((amps, result))
}

/// Walls `V₀e^{ax}` (channel 1) and `V₀e^{−ax}` (channel 2), `a > 0`.
///
/// With `ξ = (2√(2mV₀)/(aħ))·e^{±ax/2}` and `μ = 2√(2mE)/(aħ)`, the incoming
/// wave is `I_{iμ}(ξ)`, the outgoing one `I_{−iμ}(ξ)`, and the wall side
/// holds `K_{iμ}(ξ)`.
pub fn solve_exponential_pair(
    v0: f64,
    rate: f64,
    strength: f64,
    mass: f64,
    hbar: f64,
    energy: f64,
) -> Result<(TwoStateAmplitudes, TransitionResult)> {
    PotentialSpec::Exponential { amplitude: v0, rate }.validate()?;
    if rate <= 0.0 {
        return Err(Error::InvalidField { field: "rate", reason: format!("must be positive, got {rate}") });
    }
    if energy == 0.0 {
        return Err(Error::ThresholdEnergy { energy });
    }
    if !(energy > 0.0) {
        return Err(Error::NoIncidentWave { channel: 1, side: "left" });
    }
    let xi = 2.0 * (2.0 * mass * v0).sqrt() / (rate * hbar);
    let mu = 2.0 * (2.0 * mass * energy).sqrt() / (rate * hbar);
    let half = 0.5 * rate;
    let (i, di) = bessel_i_imag_order_with_derivative(mu, xi)?;
    let (k, dk) = bessel_k_imag_order_with_derivative(mu, xi)?;
    // I_{−iμ}(ξ) = conj I_{iμ}(ξ) for real ξ; dξ/dx = ±(a/2)ξ
    let chain = half * xi;
    let junction = Junction {
        u_in: (i, chain * di),
        u_out: (i.conj(), chain * di.conj()),
        u_right: (k.into(), (chain * dk).into()),
        v_left: (k.into(), (-chain * dk).into()),
        v_right: (i.conj(), -chain * di.conj()),
    };
    let amps = junction.solve(2.0 * mass * strength / (hbar * hbar));
    // I_{±iμ} both carry |current| = (ħ/m)(a/2)sinh(πμ)/π.
    let result = TransitionResult::new(amps.f.norm_sqr(), amps.b.norm_sqr(), None);
    Ok((amps, result))
}

/// Recognize a star problem as one of the three closed-form pairs.
pub fn solve_two_state(p: &StarProblem) -> Result<(TwoStateAmplitudes, TransitionResult)> {
    let unsupported = |why: &str| Err(Error::UseGenericMatcher(why.to_string()));
    if p.n_channels() != 2 || p.couplings.len() != 1 {
        return unsupported("closed forms cover exactly two channels");
    }
    let coupling = p.couplings[0];
    if coupling.position != 0.0 {
        return unsupported("closed forms place the coupling at x = 0");
    }
    if p.incident.channel != 1 || p.incident.side != Side::Left {
        return unsupported("closed forms take incidence on channel 1 from the left");
    }
    let (k, m, h, e) = (coupling.strength, p.mass, p.hbar, p.energy);
    match (p.channels[0], p.channels[1]) {
        (PotentialSpec::Constant { offset: v1 }, PotentialSpec::Constant { offset: v2 }) => {
            solve_constant_pair(v1, v2, k, m, h, e)
        }
        (PotentialSpec::Linear { slope: p1 }, PotentialSpec::Linear { slope: p2 }) if p1 > 0.0 && p2 < 0.0 => {
            solve_linear_pair(p1, -p2, k, m, h, e)
        }
        (
            PotentialSpec::Exponential { amplitude: a1, rate: r1 },
            PotentialSpec::Exponential { amplitude: a2, rate: r2 },
        ) if a1 == a2 && r1 > 0.0 && r2 == -r1 => solve_exponential_pair(a1, r1, k, m, h, e),
        _ => unsupported("no closed form for this pair of channels"),
    }
}
