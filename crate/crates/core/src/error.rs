use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("threshold energy: E = {energy} coincides with an asymptotic potential value")]
    ThresholdEnergy { energy: f64 },

    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },

    #[error("couplings must number N−1 (N = {channels}, got {couplings})")]
    CouplingCount { channels: usize, couplings: usize },

    #[error("no propagating incident wave in channel {channel} on the {side} side")]
    NoIncidentWave { channel: usize, side: &'static str },

    #[error("out of validated range: {what} = {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("gamma pole at z = {re}{im:+}i")]
    GammaPole { re: f64, im: f64 },

    #[error("branch point: modified Bessel argument must be positive (got {x})")]
    BranchPoint { x: f64 },

    #[error("use generic matcher: {0}")]
    UseGenericMatcher(String),

    #[error("near-threshold or degenerate system (condition number {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("defective basis: vanishing Wronskian")]
    DefectiveBasis,

    #[error("pole of composed Green's function (|denominator| = {magnitude:.3e})")]
    ComposedPole { magnitude: f64 },

    #[error("pole at stage {stage} (|denominator| = {magnitude:.3e})")]
    StagePole { stage: usize, magnitude: f64 },

    #[error("grid underresolved: {0}")]
    GridUnderresolved(String),

    #[error("unknown preset '{0}' (expected figure-const, figure-linear or figure-expo)")]
    UnknownPreset(String),

    #[error("config error: {0}")]
    Config(String),
}
