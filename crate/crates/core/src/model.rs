//! Problem description shared by every solver: diabatic curves, point
//! couplings, the star-coupled problem and asymptotic channel classification.
//!
//! Units are explicit everywhere (`mass`, `hbar`); the presets use atomic units
//! with `mass = hbar = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One diabatic potential curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `V(x) = offset`.
    Constant { offset: f64 },
    /// `V(x) = slope · x`. A positive slope rises to the right.
    Linear { slope: f64 },
    /// `V(x) = amplitude · exp(rate · x)`. A positive rate rises to the right.
    Exponential { amplitude: f64, rate: f64 },
}

impl PotentialSpec {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            PotentialSpec::Constant { offset } => offset,
            PotentialSpec::Linear { slope } => slope * x,
            PotentialSpec::Exponential { amplitude, rate } => amplitude * (rate * x).exp(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::Constant { offset } => finite("offset", offset),
            PotentialSpec::Linear { slope } => {
                finite("slope", slope)?;
                if slope == 0.0 {
                    return Err(invalid("slope", "linear slope must be nonzero"));
                }
                Ok(())
            }
            PotentialSpec::Exponential { amplitude, rate } => {
                finite("amplitude", amplitude)?;
                finite("rate", rate)?;
                if amplitude <= 0.0 {
                    return Err(invalid("amplitude", "exponential amplitude must be positive"));
                }
                if rate == 0.0 {
                    return Err(invalid("rate", "exponential rate must be nonzero"));
                }
                Ok(())
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PotentialSpec::Constant { .. } => "constant",
            PotentialSpec::Linear { .. } => "linear",
            PotentialSpec::Exponential { .. } => "exponential",
        }
    }
}

/// Delta coupling `K δ(x − position)` between the hub and one spoke.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingPoint {
    pub position: f64,
    pub strength: f64,
}

impl CouplingPoint {
    pub fn new(position: f64, strength: f64) -> Self {
        Self { position, strength }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// x → −∞
    Left,
    /// x → +∞
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];
}

/// Which channel carries the incoming wave, and from which side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incident {
    /// 1-based channel index; channel 1 is the hub.
    pub channel: usize,
    pub side: Side,
}

impl Incident {
    pub fn new(channel: usize, side: Side) -> Self {
        Self { channel, side }
    }
}

impl Default for Incident {
    fn default() -> Self {
        Self { channel: 1, side: Side::Left }
    }
}

/// `N` channels in star topology: channel 1 (the hub) couples to channel
/// `n + 1` through `couplings[n]`; spokes do not couple to each other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarProblem {
    pub channels: Vec<PotentialSpec>,
    pub couplings: Vec<CouplingPoint>,
    pub mass: f64,
    pub hbar: f64,
    pub energy: f64,
    pub incident: Incident,
}

impl StarProblem {
    /// Two channels coupled at `x_c = 0`, incident on channel 1 from the left,
    /// in atomic units.
    pub fn two_state(v1: PotentialSpec, v2: PotentialSpec, strength: f64, energy: f64) -> Self {
        Self {
            channels: vec![v1, v2],
            couplings: vec![CouplingPoint::new(0.0, strength)],
            mass: 1.0,
            hbar: 1.0,
            energy,
            incident: Incident::default(),
        }
    }

    pub fn with_energy(&self, energy: f64) -> Self {
        Self { energy, ..self.clone() }
    }

    pub fn with_incident(&self, channel: usize, side: Side) -> Self {
        Self { incident: Incident::new(channel, side), ..self.clone() }
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }
}

/// Asymptotic behaviour of a channel on one side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelClass {
    /// Propagating waves. `k` is the asymptotic wavenumber; linear ramps have
    /// no asymptotic wavenumber (the local one grows without bound).
    Open { k: Option<f64> },
    /// Evanescent with decay constant `kappa`.
    Closed { kappa: f64 },
    /// The potential diverges to +∞; only the regular solution survives.
    Forbidden,
}

impl ChannelClass {
    pub fn is_open(&self) -> bool {
        matches!(self, ChannelClass::Open { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStatus {
    pub side: Side,
    pub class: ChannelClass,
}

/// Classify `spec` at energy `energy` on the given side.
pub fn classify_channel(
    spec: &PotentialSpec,
    energy: f64,
    mass: f64,
    hbar: f64,
    side: Side,
) -> Result<ChannelStatus> {
    finite("energy", energy)?;
    spec.validate()?;
    let class = match *spec {
        PotentialSpec::Constant { offset } => asymptote(offset, energy, mass, hbar)?,
        PotentialSpec::Linear { slope } => {
            let rising = if slope > 0.0 { Side::Right } else { Side::Left };
            if side == rising {
                ChannelClass::Forbidden
            } else {
                ChannelClass::Open { k: None }
            }
        }
        PotentialSpec::Exponential { rate, .. } => {
            let rising = if rate > 0.0 { Side::Right } else { Side::Left };
            if side == rising {
                ChannelClass::Forbidden
            } else {
                asymptote(0.0, energy, mass, hbar)?
            }
        }
    };
    Ok(ChannelStatus { side, class })
}

fn asymptote(level: f64, energy: f64, mass: f64, hbar: f64) -> Result<ChannelClass> {
    let excess = energy - level;
    if excess == 0.0 {
        return Err(Error::ThresholdEnergy { energy });
    }
    let q = (2.0 * mass * excess.abs()).sqrt() / hbar;
    Ok(if excess > 0.0 {
        ChannelClass::Open { k: Some(q) }
    } else {
        ChannelClass::Closed { kappa: q }
    })
}

/// A problem that passed [`validate_problem`], together with the channel
/// classification on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedProblem {
    problem: StarProblem,
    status: Vec<[ChannelStatus; 2]>,
}

impl CheckedProblem {
    pub fn problem(&self) -> &StarProblem {
        &self.problem
    }

    /// Classification of channel `index` (0-based) on `side`.
    pub fn status(&self, index: usize, side: Side) -> ChannelStatus {
        self.status[index][side.index()]
    }

    pub fn into_inner(self) -> StarProblem {
        self.problem
    }
}

impl std::ops::Deref for CheckedProblem {
    type Target = StarProblem;
    fn deref(&self) -> &StarProblem {
        &self.problem
    }
}

pub fn validate_problem(p: &StarProblem) -> Result<CheckedProblem> {
    let n = p.channels.len();
    if n < 2 {
        return Err(invalid("channels", format!("need at least 2 channels, got {n}")));
    }
    if p.couplings.len() != n - 1 {
        return Err(Error::CouplingCount { channels: n, couplings: p.couplings.len() });
    }
    positive("mass", p.mass)?;
    positive("hbar", p.hbar)?;
    finite("energy", p.energy)?;
    for spec in &p.channels {
        spec.validate()?;
    }
    for c in &p.couplings {
        finite("coupling position", c.position)?;
        finite("coupling strength", c.strength)?;
        if c.strength < 0.0 {
            return Err(invalid("coupling strength", "must be nonnegative"));
        }
    }
    let inc = p.incident;
    if inc.channel == 0 || inc.channel > n {
        return Err(invalid("incident channel", format!("must lie in 1..={n}, got {}", inc.channel)));
    }
    let status = p
        .channels
        .iter()
        .map(|spec| {
            Ok([
                classify_channel(spec, p.energy, p.mass, p.hbar, Side::Left)?,
                classify_channel(spec, p.energy, p.mass, p.hbar, Side::Right)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    if !status[inc.channel - 1][inc.side.index()].class.is_open() {
        return Err(Error::NoIncidentWave { channel: inc.channel, side: inc.side.name() });
    }
    Ok(CheckedProblem { problem: p.clone(), status })
}

fn finite(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    finite(field, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive, got {v}")))
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidField { field, reason: reason.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open_k(s: ChannelStatus) -> f64 {
        match s.class {
            ChannelClass::Open { k: Some(k) } => k,
            other => panic!("expected open channel, got {other:?}"),
        }
    }

    #[test]
    fn constant_open_and_closed() {
        let s = classify_channel(&PotentialSpec::Constant { offset: 0.0 }, 6.0, 1.0, 1.0, Side::Right)
            .unwrap();
        assert!((open_k(s) - 12f64.sqrt()).abs() < 1e-15);

        let s = classify_channel(&PotentialSpec::Constant { offset: 5.0 }, 3.0, 1.0, 1.0, Side::Right)
            .unwrap();
        assert_eq!(s.class, ChannelClass::Closed { kappa: 2.0 });
    }

    #[test]
    fn threshold_is_an_error() {
        let err = classify_channel(&PotentialSpec::Constant { offset: 5.0 }, 5.0, 1.0, 1.0, Side::Left)
            .unwrap_err();
        assert!(err.to_string().contains("threshold energy"));
        let wall = PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 };
        assert!(classify_channel(&wall, 0.0, 1.0, 1.0, Side::Left).is_err());
        // the forbidden side has no threshold
        assert!(classify_channel(&wall, 0.0, 1.0, 1.0, Side::Right).is_ok());
    }

    #[test]
    fn ramps_and_walls_orientation() {
        let up = PotentialSpec::Linear { slope: 1.0 };
        let down = PotentialSpec::Linear { slope: -1.0 };
        let c = |s: &PotentialSpec, side| classify_channel(s, 1.0, 1.0, 1.0, side).unwrap().class;
        assert_eq!(c(&up, Side::Right), ChannelClass::Forbidden);
        assert_eq!(c(&up, Side::Left), ChannelClass::Open { k: None });
        assert_eq!(c(&down, Side::Left), ChannelClass::Forbidden);
        assert_eq!(c(&down, Side::Right), ChannelClass::Open { k: None });

        let wall = PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 };
        let s = classify_channel(&wall, 2.0, 1.0, 1.0, Side::Left).unwrap();
        assert!((open_k(s) - 2.0).abs() < 1e-15);
        let mirrored = PotentialSpec::Exponential { amplitude: 1.0, rate: -1.0 };
        assert_eq!(c(&mirrored, Side::Left), ChannelClass::Forbidden);
        assert!(c(&mirrored, Side::Right).is_open());
    }

    #[test]
    fn scale_consistency() {
        let k1 = open_k(
            classify_channel(&PotentialSpec::Constant { offset: 1.3 }, 4.1, 1.0, 1.0, Side::Left).unwrap(),
        );
        let k2 = open_k(
            classify_channel(&PotentialSpec::Constant { offset: 2.6 }, 8.2, 1.0, 1.0, Side::Left).unwrap(),
        );
        assert!((k2 / k1 - 2f64.sqrt()).abs() < 1e-12 * 2f64.sqrt());
    }

    #[test]
    fn invalid_specs() {
        assert!(PotentialSpec::Linear { slope: 0.0 }.validate().is_err());
        assert!(PotentialSpec::Exponential { amplitude: -1.0, rate: 1.0 }.validate().is_err());
        assert!(PotentialSpec::Exponential { amplitude: 1.0, rate: 0.0 }.validate().is_err());
        assert!(PotentialSpec::Constant { offset: f64::NAN }.validate().is_err());
    }

    fn pair() -> StarProblem {
        StarProblem::two_state(
            PotentialSpec::Constant { offset: 0.0 },
            PotentialSpec::Constant { offset: 5.0 },
            1.0,
            6.0,
        )
    }

    #[test]
    fn validate_ok() {
        let checked = validate_problem(&pair()).unwrap();
        assert_eq!(checked.n_channels(), 2);
        assert!(checked.status(1, Side::Left).class.is_open());
    }

    #[test]
    fn validate_coupling_count() {
        let mut p = pair();
        p.channels.push(PotentialSpec::Constant { offset: 1.0 });
        let err = validate_problem(&p).unwrap_err();
        assert!(err.to_string().contains("couplings must number N−1"), "{err}");
    }

    #[test]
    fn validate_closed_incident() {
        let p = pair().with_energy(3.0).with_incident(2, Side::Left);
        let err = validate_problem(&p).unwrap_err();
        assert!(err.to_string().contains("no propagating incident wave"), "{err}");
    }

    #[test]
    fn validate_reports_fields() {
        let mut p = pair();
        p.mass = 0.0;
        assert!(validate_problem(&p).unwrap_err().to_string().contains("mass"));
        let mut p = pair();
        p.couplings[0].strength = -1.0;
        assert!(validate_problem(&p).unwrap_err().to_string().contains("coupling strength"));
        let mut p = pair();
        p.incident.channel = 3;
        assert!(validate_problem(&p).unwrap_err().to_string().contains("incident channel"));
    }

    #[test]
    fn exponential_open_side_is_plane_wave() {
        // Integrate the uncoupled equation far on the open side of V = e^x at
        // E = 2 and fit the local oscillation: psi'' = 2(V - E) psi.
        let wall = PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 };
        let f = |x: f64| 2.0 * (wall.value(x) - 2.0);
        // RK4 on (psi, psi') from x = -40 with a unit plane wave e^{2ix}
        let (mut x, h) = (-40.0f64, 1e-3);
        let mut y = [(2.0 * x).cos(), (2.0 * x).sin(), -2.0 * (2.0 * x).sin(), 2.0 * (2.0 * x).cos()];
        let deriv = |x: f64, y: &[f64; 4]| [y[2], y[3], f(x) * y[0], f(x) * y[1]];
        while x < -20.0 - 1e-12 {
            let k1 = deriv(x, &y);
            let a: [f64; 4] = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
            let k2 = deriv(x + 0.5 * h, &a);
            let b: [f64; 4] = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
            let k3 = deriv(x + 0.5 * h, &b);
            let c: [f64; 4] = std::array::from_fn(|i| y[i] + h * k3[i]);
            let k4 = deriv(x + h, &c);
            y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
            x += h;
        }
        // fitted wavenumber from psi'/psi of a pure e^{ikx}
        let psi = num_complex::Complex64::new(y[0], y[1]);
        let dpsi = num_complex::Complex64::new(y[2], y[3]);
        let k_fit = (dpsi / psi).im;
        let s = classify_channel(&wall, 2.0, 1.0, 1.0, Side::Left).unwrap();
        assert!((k_fit - open_k(s)).abs() < 1e-6, "k_fit = {k_fit}");
    }
}
