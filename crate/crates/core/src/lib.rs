//! Exact transition probabilities for one-dimensional multi-channel scattering
//! with Dirac-delta point couplings.
//!
//! Three independent routes compute the same observables and check each other:
//!
//! * [`closed_form`]: explicit two-state solutions for constant, linear and
//!   exponential diabatic curves;
//! * [`matcher`]: a generic boundary-condition matcher for star-coupled problems
//!   with any mix of potential kinds;
//! * [`greens`]: bare Green's functions dressed by point couplings, one spoke at
//!   a time.
//!
//! The [`oracle`] module holds two further numerical checks (an independently
//! coded dense match and a finite-difference solver with Gaussian-smeared
//! couplings). [`cli`] drives energy scans from JSON configs.

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod greens;
pub mod matcher;
pub mod model;
pub mod oracle;
pub mod solution;
pub mod specfun;

pub use error::{Error, Result};
pub use solution::{ChannelAmplitudes, Probabilities, ScatteringSolution, SideAmplitude};
pub use model::{
    classify_channel, validate_problem, ChannelClass, ChannelStatus, CheckedProblem,
    CouplingPoint, Incident, PotentialSpec, Side, StarProblem,
};
pub use num_complex::Complex64;

