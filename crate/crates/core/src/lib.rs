//! Energy-efficient design of cellular broadband access networks.
//!
//! APs form a homogeneous Poisson point process, each with `M` antennas
//! serving `K` UEs by zero-forcing, under transceiver hardware impairments.
//! The crate provides
//!
//! * [`analytic`]: the closed-form SE lower bound and the EE model built on it,
//! * [`optimizer`]: optimal transmit power, antenna count, UE count and AP
//!   density, plus an exhaustive grid search,
//! * [`mc`]: a Monte-Carlo simulator of the true ergodic SE used to validate
//!   the bound,
//! * [`stats`]: the estimators and goodness-of-fit tests the simulator uses.

pub mod analytic;
pub mod error;
pub mod mc;
pub mod optimizer;
pub mod params;
pub mod stats;

pub use error::{Error, Result};
pub use params::{
    Constraint, DesignPoint, EvaluationResult, HardwareProfile, PropagationParams,
};
