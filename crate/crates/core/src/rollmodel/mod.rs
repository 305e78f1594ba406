//! Roll energy landscape, undulation drive and quasi-static roll dynamics.

pub mod drive;
pub mod landscape;
pub mod simulate;

pub use drive::{coherence, drive_gain, roll_drive, Calibration, RollDrive};
pub use landscape::{energy_landscape, stable_configurations, support_height, EnergyLandscape};
pub use simulate::{
    classify_trial, simulate_roll, PerturbationSpec, RollSimulator, RollState, RollTrajectory,
    SimMode, Span, TrialOutcome,
};
