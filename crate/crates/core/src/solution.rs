//! Route-independent scattering result: amplitudes on each side of every
//! channel plus flux-normalized probabilities.

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{ChannelClass, Incident, Side};

/// Coefficients of one channel's asymptotic solution on one side, relative to
/// the route's basis (plane waves are unit amplitude; Airy and Bessel bases
/// are used unnormalized, so only the probabilities are basis independent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideAmplitude {
    /// Coefficient of the incoming wave (1 on the incident side, else 0).
    pub incoming: Complex64,
    /// Coefficient of the outgoing wave, or of the decaying/regular solution
    /// when the side is closed or forbidden.
    pub outgoing: Complex64,
    pub class: ChannelClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelAmplitudes {
    pub left: SideAmplitude,
    pub right: SideAmplitude,
    /// Coefficient pairs in regions between distinct coupling points (hub only).
    pub interior: Vec<[Complex64; 2]>,
}

impl ChannelAmplitudes {
    pub fn side(&self, side: Side) -> &SideAmplitude {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probabilities {
    /// Outgoing flux fraction per channel and side (`[left, right]`); `None`
    /// where the side carries no flux (closed or forbidden).
    pub outgoing: Vec<[Option<f64>; 2]>,
    /// Reflection back out of the incident side of the incident channel.
    pub r_back: f64,
    /// Transmission through the incident channel; `None` when its far side is
    /// not open.
    pub t_same: Option<f64>,
    /// Total transition into each channel (both sides); `None` for the
    /// incident channel.
    pub t_cross: Vec<Option<f64>>,
    pub t_cross_total: f64,
}

impl Probabilities {
    /// Normalize per-side outgoing fluxes by the incoming flux.
    pub fn from_fluxes(incident: Incident, incoming_flux: f64, fluxes: &[[Option<f64>; 2]]) -> Self {
        let inc = incident.channel - 1;
        let outgoing: Vec<[Option<f64>; 2]> = fluxes
            .iter()
            .map(|f| [f[0].map(|v| v / incoming_flux), f[1].map(|v| v / incoming_flux)])
            .collect();
        let r_back = outgoing[inc][incident.side.index()].unwrap_or(0.0);
        let t_same = outgoing[inc][incident.side.opposite().index()];
        let t_cross: Vec<Option<f64>> = outgoing
            .iter()
            .enumerate()
            .map(|(n, o)| (n != inc).then(|| o[0].unwrap_or(0.0) + o[1].unwrap_or(0.0)))
            .collect();
        let t_cross_total = t_cross.iter().flatten().sum();
        Self { outgoing, r_back, t_same, t_cross, t_cross_total }
    }

    /// Sum of all outgoing fractions; 1 for a unitary solution.
    pub fn total(&self) -> f64 {
        self.outgoing.iter().flat_map(|o| o.iter().flatten()).sum()
    }

    /// Transition probability into channel `n` (1-based).
    pub fn t_cross_into(&self, n: usize) -> Option<f64> {
        self.t_cross[n - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringSolution {
    pub energy: f64,
    pub incident: Incident,
    pub channels: Vec<ChannelAmplitudes>,
    pub probabilities: Probabilities,
    /// |incoming flux − total outgoing flux| / incoming flux.
    pub flux_residual: f64,
    /// Condition number of the equilibrated linear system, when one was solved.
    pub condition_number: Option<f64>,
}

impl ScatteringSolution {
    pub fn new(
        energy: f64,
        incident: Incident,
        channels: Vec<ChannelAmplitudes>,
        incoming_flux: f64,
        fluxes: &[[Option<f64>; 2]],
        condition_number: Option<f64>,
    ) -> Self {
        let probabilities = Probabilities::from_fluxes(incident, incoming_flux, fluxes);
        let flux_residual = (probabilities.total() - 1.0).abs();
        Self { energy, incident, channels, probabilities, flux_residual, condition_number }
    }

    pub fn t_cross(&self) -> f64 {
        self.probabilities.t_cross_total
    }
}
