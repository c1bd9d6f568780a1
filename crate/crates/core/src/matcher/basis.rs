//! Exact one-sided solutions of the uncoupled channel equations.
//!
//! Every channel has a canonical pair of solutions (plane/real exponentials,
//! `Ai`/`Bi`, or `I_{iμ}`/`K_{iμ}`) and each [`BasisSolution`] is a fixed
//! linear combination of that pair. Wronskians and fluxes follow from the
//! coefficients exactly, without evaluating anything asymptotically.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{classify_channel, ChannelClass, PotentialSpec, Side};
use crate::specfun::{airy, bessel_i_imag_order_with_derivative, bessel_k_imag_order_with_derivative};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Incoming,
    Outgoing,
    /// Evanescent solution of a closed constant channel.
    Decaying,
    /// The regular solution under a potential that diverges (ramp or wall).
    ZeroFluxRegular,
}

/// Canonical solution pair of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `(e^{λx}, e^{−λx})` with `λ = ik` (open) or `λ = κ` (closed).
    Exponentials { lambda: Complex64 },
    /// `(Ai(z), Bi(z))` with `z = scale·x + offset`.
    Airy { scale: f64, offset: f64 },
    /// `(I_{iμ}(ξ), K_{iμ}(ξ))` with `ξ = amplitude·exp(half_rate·x)`.
    Bessel { amplitude: f64, half_rate: f64, mu: f64 },
}

impl Family {
    pub fn for_channel(spec: &PotentialSpec, energy: f64, mass: f64, hbar: f64) -> Result<Family> {
        Ok(match *spec {
            PotentialSpec::Constant { offset } => {
                let q = (2.0 * mass * (energy - offset).abs()).sqrt() / hbar;
                if energy > offset {
                    Family::Exponentials { lambda: Complex64::new(0.0, q) }
                } else if energy < offset {
                    Family::Exponentials { lambda: Complex64::new(q, 0.0) }
                } else {
                    return Err(Error::ThresholdEnergy { energy });
                }
            }
            PotentialSpec::Linear { slope } => {
                let beta = (2.0 * mass * slope.abs() / (hbar * hbar)).cbrt();
                Family::Airy { scale: slope.signum() * beta, offset: -beta * energy / slope.abs() }
            }
            PotentialSpec::Exponential { amplitude, rate } => {
                if energy < 0.0 {
                    return Err(Error::OutOfRange {
                        what: "energy below the exponential channel's asymptote",
                        value: energy,
                    });
                }
                if energy == 0.0 {
                    return Err(Error::ThresholdEnergy { energy });
                }
                let k = (2.0 * mass * energy).sqrt() / hbar;
                Family::Bessel {
                    amplitude: 2.0 * (2.0 * mass * amplitude).sqrt() / (rate.abs() * hbar),
                    half_rate: 0.5 * rate,
                    mu: 2.0 * k / rate.abs(),
                }
            }
        })
    }

    /// Values and x-derivatives of the canonical pair: `[(f1, f1'), (f2, f2')]`.
    pub fn evaluate(&self, x: f64) -> Result<[(Complex64, Complex64); 2]> {
        Ok(match *self {
            Family::Exponentials { lambda } => {
                let up = (lambda * x).exp();
                let down = (-lambda * x).exp();
                [(up, lambda * up), (down, -lambda * down)]
            }
            Family::Airy { scale, offset } => {
                let p = airy(scale * x + offset)?;
                [
                    (p.ai.into(), (scale * p.ai_prime).into()),
                    (p.bi.into(), (scale * p.bi_prime).into()),
                ]
            }
            Family::Bessel { amplitude, half_rate, mu } => {
                let xi = amplitude * (half_rate * x).exp();
                let (i, di) = bessel_i_imag_order_with_derivative(mu, xi)?;
                let (k, dk) = bessel_k_imag_order_with_derivative(mu, xi)?;
                let chain = half_rate * xi;
                [(i, di * chain), (k.into(), (dk * chain).into())]
            }
        })
    }

    /// `W[f1, f2] = f1 f2' − f1' f2` (x-independent).
    pub fn wronskian(&self) -> Complex64 {
        match *self {
            Family::Exponentials { lambda } => -2.0 * lambda,
            Family::Airy { scale, .. } => (scale / PI).into(),
            Family::Bessel { half_rate, .. } => (-half_rate).into(),
        }
    }

    /// `Im(ψ* ψ')` for `ψ = c1 f1 + c2 f2`.
    pub fn current(&self, c: [Complex64; 2]) -> f64 {
        match *self {
            Family::Exponentials { lambda } => {
                if lambda.re == 0.0 {
                    lambda.im * (c[0].norm_sqr() - c[1].norm_sqr())
                } else {
                    2.0 * lambda.re * (c[1].conj() * c[0]).im
                }
            }
            Family::Airy { scale, .. } => scale * (c[0].conj() * c[1]).im / PI,
            Family::Bessel { half_rate, mu, .. } => {
                half_rate * (c[0].norm_sqr() * (PI * mu).sinh() / PI - (c[0].conj() * c[1]).im)
            }
        }
    }
}

/// One solution of an uncoupled channel, exact for all `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSolution {
    pub family: Family,
    pub coeffs: [Complex64; 2],
    pub role: Role,
    pub side: Side,
    /// Probability current `(ħ/m) Im(ψ* ψ')`.
    pub flux: f64,
}

impl BasisSolution {
    fn new(family: Family, coeffs: [Complex64; 2], role: Role, side: Side, mass: f64, hbar: f64) -> Self {
        let flux = hbar / mass * family.current(coeffs);
        Self { family, coeffs, role, side, flux }
    }

    pub fn eval(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let [(f1, d1), (f2, d2)] = self.family.evaluate(x)?;
        let [a, b] = self.coeffs;
        Ok((a * f1 + b * f2, a * d1 + b * d2))
    }

    pub fn value_at(&self, x: f64) -> Result<Complex64> {
        self.eval(x).map(|(v, _)| v)
    }

    pub fn derivative_at(&self, x: f64) -> Result<Complex64> {
        self.eval(x).map(|(_, d)| d)
    }

    /// Exact Wronskian `W[self, other]`; both must belong to the same channel.
    pub fn wronskian(&self, other: &BasisSolution) -> Complex64 {
        debug_assert_eq!(self.family, other.family);
        let [a, b] = self.coeffs;
        let [c, d] = other.coeffs;
        (a * d - b * c) * self.family.wronskian()
    }
}

/// Physically acceptable solutions of `spec` on `side`: an `[incoming,
/// outgoing]` pair for an open side, a single decaying or regular solution
/// otherwise.
pub fn build_basis(
    spec: &PotentialSpec,
    energy: f64,
    mass: f64,
    hbar: f64,
    side: Side,
) -> Result<Vec<BasisSolution>> {
    let status = classify_channel(spec, energy, mass, hbar, side)?;
    let family = Family::for_channel(spec, energy, mass, hbar)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let make = |coeffs, role| BasisSolution::new(family, coeffs, role, side, mass, hbar);
    Ok(match (family, status.class) {
        (Family::Exponentials { .. }, ChannelClass::Open { .. }) => match side {
            Side::Left => vec![make([one, zero], Role::Incoming), make([zero, one], Role::Outgoing)],
            Side::Right => vec![make([zero, one], Role::Incoming), make([one, zero], Role::Outgoing)],
        },
        (Family::Exponentials { .. }, _) => match side {
            Side::Left => vec![make([one, zero], Role::Decaying)],
            Side::Right => vec![make([zero, one], Role::Decaying)],
        },
        (Family::Airy { .. }, ChannelClass::Open { .. }) => {
            // Ai ∓ iBi travels away from the turning point on either orientation.
            vec![make([one, I], Role::Incoming), make([one, -I], Role::Outgoing)]
        }
        (Family::Airy { .. }, _) => vec![make([one, zero], Role::ZeroFluxRegular)],
        (Family::Bessel { mu, .. }, ChannelClass::Open { .. }) => {
            // I_{−iμ} = I_{iμ} + (2i sinh πμ / π) K_{iμ}
            let swap = Complex64::new(0.0, 2.0 * (PI * mu).sinh() / PI);
            vec![make([one, zero], Role::Incoming), make([one, swap], Role::Outgoing)]
        }
        (Family::Bessel { .. }, _) => vec![make([zero, one], Role::ZeroFluxRegular)],
    })
}

/// Both sides of one channel at a fixed energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBasis {
    pub family: Family,
    pub left: Vec<BasisSolution>,
    pub right: Vec<BasisSolution>,
}

impl ChannelBasis {
    pub fn new(spec: &PotentialSpec, energy: f64, mass: f64, hbar: f64) -> Result<Self> {
        let left = build_basis(spec, energy, mass, hbar, Side::Left)?;
        let right = build_basis(spec, energy, mass, hbar, Side::Right)?;
        Ok(Self { family: left[0].family, left, right })
    }

    pub fn side(&self, side: Side) -> &[BasisSolution] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn is_open(&self, side: Side) -> bool {
        self.side(side).len() == 2
    }

    /// Incoming wave on `side`, if that side is open.
    pub fn incoming(&self, side: Side) -> Option<&BasisSolution> {
        self.side(side).iter().find(|b| b.role == Role::Incoming)
    }

    /// The solution that survives on `side` without an incoming wave:
    /// outgoing when open, decaying/regular otherwise.
    pub fn outgoing(&self, side: Side) -> &BasisSolution {
        self.side(side)
            .iter()
            .find(|b| b.role != Role::Incoming)
            .expect("every side has an outgoing or regular solution")
    }
}
