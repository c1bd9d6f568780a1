//! One-sided channel solutions for the oracles, coded apart from the matcher:
//! travelling waves are told apart by the sign of their numerically
//! evaluated current, and every solution can be rescaled to unit value at a
//! chosen point.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{PotentialSpec, Side};
use crate::specfun::{airy, bessel_i_imag_order_with_derivative, bessel_k_imag_order_with_derivative};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy)]
enum Raw {
    /// `e^{q x}`
    Exp(Complex64),
    /// `a·Ai(z) + b·Bi(z)`, `z = scale·x + offset`
    Airy { scale: f64, offset: f64, a: Complex64, b: Complex64 },
    /// `I_{iμ}(ξ)` or its conjugate `I_{−iμ}(ξ)`, `ξ = amp·e^{half·x}`
    BesselI { amp: f64, half: f64, mu: f64, conj: bool },
    /// `K_{iμ}(ξ)`
    BesselK { amp: f64, half: f64, mu: f64 },
}

/// A solution of one uncoupled channel, times a constant.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Solution {
    raw: Raw,
    norm: Complex64,
}

impl Solution {
    fn new(raw: Raw) -> Self {
        Self { raw, norm: ONE }
    }

    pub(crate) fn eval(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let (v, d) = match self.raw {
            Raw::Exp(q) => {
                let v = (q * x).exp();
                (v, q * v)
            }
            Raw::Airy { scale, offset, a, b } => {
                let p = airy(scale * x + offset)?;
                (a * p.ai + b * p.bi, scale * (a * p.ai_prime + b * p.bi_prime))
            }
            Raw::BesselI { amp, half, mu, conj } => {
                let xi = amp * (half * x).exp();
                let (v, d) = bessel_i_imag_order_with_derivative(mu, xi)?;
                let (v, d) = if conj { (v.conj(), d.conj()) } else { (v, d) };
                (v, d * (half * xi))
            }
            Raw::BesselK { amp, half, mu } => {
                let xi = amp * (half * x).exp();
                let (v, d) = bessel_k_imag_order_with_derivative(mu, xi)?;
                (v.into(), (d * half * xi).into())
            }
        };
        Ok((self.norm * v, self.norm * d))
    }

    pub(crate) fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.eval(x)?.0)
    }

    /// Rescaled to `u(x0) = 1`.
    pub(crate) fn unit_at(self, x0: f64) -> Result<Self> {
        let v = self.eval(x0)?.0;
        if v.norm() == 0.0 || !v.is_finite() {
            return Err(Error::DefectiveBasis);
        }
        Ok(Self { raw: self.raw, norm: self.norm / v })
    }

    /// `(ħ/m) Im(u* u′)` evaluated at `x`.
    pub(crate) fn current(&self, x: f64, mass: f64, hbar: f64) -> Result<f64> {
        let (v, d) = self.eval(x)?;
        Ok(hbar / mass * (v.conj() * d).im)
    }
}

/// What survives on one side of one channel.
#[derive(Debug, Clone, Copy)]
pub(crate) enum SideSet {
    Open { incoming: Solution, outgoing: Solution },
    Closed(Solution),
}

impl SideSet {
    /// The solution whose coefficient is unknown (outgoing or decaying).
    pub(crate) fn free(&self) -> Solution {
        match *self {
            SideSet::Open { outgoing, .. } => outgoing,
            SideSet::Closed(s) => s,
        }
    }

    pub(crate) fn incoming(&self) -> Option<Solution> {
        match *self {
            SideSet::Open { incoming, .. } => Some(incoming),
            SideSet::Closed(_) => None,
        }
    }

    pub(crate) fn is_open(&self) -> bool {
        matches!(self, SideSet::Open { .. })
    }

    fn unit_at(self, x0: f64) -> Result<Self> {
        Ok(match self {
            SideSet::Open { incoming, outgoing } => {
                SideSet::Open { incoming: incoming.unit_at(x0)?, outgoing: outgoing.unit_at(x0)? }
            }
            SideSet::Closed(s) => SideSet::Closed(s.unit_at(x0)?),
        })
    }
}

/// Two independent solutions spanning the channel's solution space.
pub(crate) fn raw_pair(spec: &PotentialSpec, energy: f64, mass: f64, hbar: f64) -> Result<[Solution; 2]> {
    Ok(match *spec {
        PotentialSpec::Constant { offset } => {
            let excess = energy - offset;
            if excess == 0.0 {
                return Err(Error::ThresholdEnergy { energy });
            }
            let q = (2.0 * mass * excess.abs()).sqrt() / hbar;
            let q = if excess > 0.0 { I * q } else { q.into() };
            [Solution::new(Raw::Exp(q)), Solution::new(Raw::Exp(-q))]
        }
        PotentialSpec::Linear { slope } => {
            let beta = (2.0 * mass * slope.abs() / (hbar * hbar)).cbrt();
            let (scale, offset) = (slope.signum() * beta, -slope.signum() * beta * energy / slope);
            let airy = |a: Complex64, b: Complex64| Solution::new(Raw::Airy { scale, offset, a, b });
            [airy(ONE, 0.0.into()), airy(0.0.into(), ONE)]
        }
        PotentialSpec::Exponential { amplitude, rate } => {
            if !(energy > 0.0) {
                return Err(Error::OutOfRange { what: "exponential channel energy", value: energy });
            }
            let amp = 2.0 * (2.0 * mass * amplitude).sqrt() / (rate.abs() * hbar);
            let mu = 2.0 * (2.0 * mass * energy).sqrt() / (rate.abs() * hbar);
            let half = 0.5 * rate;
            [
                Solution::new(Raw::BesselI { amp, half, mu, conj: false }),
                Solution::new(Raw::BesselK { amp, half, mu }),
            ]
        }
    })
}

/// Physical solutions on `side`, normalized to unit value at `x0`.
pub(crate) fn side_set(
    spec: &PotentialSpec,
    energy: f64,
    mass: f64,
    hbar: f64,
    side: Side,
    x0: f64,
) -> Result<SideSet> {
    let set = match *spec {
        PotentialSpec::Constant { offset } => {
            let [up, down] = raw_pair(spec, energy, mass, hbar)?;
            if energy > offset {
                travelling(up, down, side, x0, mass, hbar)?
            } else {
                // e^{κx} vanishes on the left, e^{−κx} on the right
                SideSet::Closed(if side == Side::Left { up } else { down })
            }
        }
        PotentialSpec::Linear { slope } => {
            let [ai, _] = raw_pair(spec, energy, mass, hbar)?;
            let rising = if slope > 0.0 { Side::Right } else { Side::Left };
            if side == rising {
                SideSet::Closed(ai)
            } else {
                let Raw::Airy { scale, offset, .. } = ai.raw else { unreachable!() };
                let comb = |b: Complex64| Solution::new(Raw::Airy { scale, offset, a: ONE, b });
                travelling(comb(I), comb(-I), side, x0, mass, hbar)?
            }
        }
        PotentialSpec::Exponential { rate, .. } => {
            let [i, k] = raw_pair(spec, energy, mass, hbar)?;
            let rising = if rate > 0.0 { Side::Right } else { Side::Left };
            if side == rising {
                SideSet::Closed(k)
            } else {
                let Raw::BesselI { amp, half, mu, .. } = i.raw else { unreachable!() };
                let conj = Solution::new(Raw::BesselI { amp, half, mu, conj: true });
                travelling(i, conj, side, x0, mass, hbar)?
            }
        }
    };
    set.unit_at(x0)
}

/// Sort a travelling pair by current: incoming moves toward the coupling.
fn travelling(a: Solution, b: Solution, side: Side, x0: f64, mass: f64, hbar: f64) -> Result<SideSet> {
    let ja = a.current(x0, mass, hbar)?;
    let jb = b.current(x0, mass, hbar)?;
    if ja == 0.0 || jb == 0.0 || ja.signum() == jb.signum() {
        return Err(Error::DefectiveBasis);
    }
    let inward = if side == Side::Left { 1.0 } else { -1.0 };
    Ok(if ja * inward > 0.0 {
        SideSet::Open { incoming: a, outgoing: b }
    } else {
        SideSet::Open { incoming: b, outgoing: a }
    })
}

/// `(c, s)` with `c(x0) = 1, c′(x0) = 0, s(x0) = 0, s′(x0) = 1`, as
/// coefficient pairs over `raw_pair`.
pub(crate) fn regular_pair(pair: &[Solution; 2], x0: f64) -> Result<[[Complex64; 2]; 2]> {
    let (f, fd) = pair[0].eval(x0)?;
    let (g, gd) = pair[1].eval(x0)?;
    let w = f * gd - fd * g;
    if w.norm() == 0.0 {
        return Err(Error::DefectiveBasis);
    }
    Ok([[gd / w, -fd / w], [-g / w, f / w]])
}
