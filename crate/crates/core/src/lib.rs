//! Two-wave gaits for elongate multi-jointed robots, the roll energy
//! landscape that static legs create, quasi-static roll simulation and the
//! behavior-diagram sweep built on it, plus a kinematic sidewinding estimate.

pub mod cli;
pub mod config;
pub mod error;
pub mod gait;
pub mod kinematics;
pub mod provenance;
pub mod rollmodel;
pub mod sidewinding;
pub mod sweep;

pub use error::{Error, Result};
