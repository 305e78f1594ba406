//! Run configuration: one TOML document, overridable from the command line.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gait::GaitParams;
use crate::kinematics::Morphology;
use crate::provenance::{sha256_hex, Provenance};
use crate::rollmodel::{Calibration, SimMode};
use crate::sidewinding::SidewindConfig;
use crate::sweep::{Grid, Noise, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub mode: SimMode,
    pub output: OutputConfig,
    pub morphology: Morphology,
    pub gait: GaitParams,
    pub calibration: Calibration,
    pub gait_table: GaitTableConfig,
    pub energy: EnergyConfig,
    pub simulate: SimulateConfig,
    pub sweep: SweepConfig,
    pub sidewind: SidewindSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaitTableConfig {
    pub samples: usize,
}

impl Default for GaitTableConfig {
    fn default() -> Self {
        Self { samples: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyConfig {
    pub resolution: usize,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        Self {
            resolution: crate::rollmodel::landscape::DEFAULT_RESOLUTION,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub cycles: u32,
    pub half_cycle: bool,
    pub steps_per_cycle: usize,
    pub noise: Noise,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            cycles: 3,
            half_cycle: false,
            steps_per_cycle: crate::rollmodel::simulate::DEFAULT_STEPS_PER_CYCLE,
            noise: Noise::none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub amplitude_grid: Grid,
    pub xi_grid: Grid,
    pub trials_per_cell: u32,
    pub cycles_per_trial: u32,
    pub noise: Noise,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let spec = SweepSpec::default();
        Self {
            amplitude_grid: spec.amplitude_grid,
            xi_grid: spec.xi_grid,
            trials_per_cell: spec.trials_per_cell,
            cycles_per_trial: spec.cycles_per_trial,
            noise: spec.noise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SidewindSection {
    pub cycles: u32,
    /// Gait used for the estimate; the top-level gait is left for rolling.
    pub gait: GaitParams,
    pub contact_tol: f64,
    pub lift_scale: f64,
    pub samples_per_cycle: usize,
}

impl SidewindSection {
    pub fn estimator(&self) -> SidewindConfig {
        SidewindConfig {
            contact_tol: self.contact_tol,
            lift_scale: self.lift_scale,
            samples_per_cycle: self.samples_per_cycle,
        }
    }
}

impl Default for SidewindSection {
    fn default() -> Self {
        use std::f64::consts::PI;
        let est = SidewindConfig::default();
        Self {
            cycles: 1,
            gait: GaitParams::new(PI / 3.0, 0.6, 4).with_amplitudes(PI / 3.0, PI / 9.0),
            contact_tol: est.contact_tol,
            lift_scale: est.lift_scale,
            samples_per_cycle: est.samples_per_cycle,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            mode: SimMode::Lumped,
            output: OutputConfig::default(),
            morphology: Morphology::default(),
            gait: GaitParams::default(),
            calibration: Calibration::default(),
            gait_table: GaitTableConfig::default(),
            energy: EnergyConfig::default(),
            simulate: SimulateConfig::default(),
            sweep: SweepConfig::default(),
            sidewind: SidewindSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| invalid("config", e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| invalid("config", e.to_string()))
    }

    /// Checks every section; gait joint counts must match the morphology.
    pub fn validate(&self) -> Result<()> {
        self.morphology.validate()?;
        self.gait.validate()?;
        self.calibration.validate()?;
        self.sidewind.gait.validate()?;
        self.sidewind.estimator().validate()?;
        let n = self.morphology.num_lateral_joints();
        for (name, g) in [("gait", &self.gait), ("sidewind.gait", &self.sidewind.gait)] {
            if g.num_lateral_joints != n {
                return Err(invalid(
                    name,
                    format!(
                        "num_lateral_joints = {} but the morphology has {n}",
                        g.num_lateral_joints
                    ),
                ));
            }
        }
        if self.gait_table.samples == 0 {
            return Err(invalid("gait_table.samples", "must be at least 1"));
        }
        if self.simulate.cycles == 0 || self.sidewind.cycles == 0 {
            return Err(invalid("cycles", "must be at least 1"));
        }
        self.sweep_spec().validate()
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            amplitude_grid: self.sweep.amplitude_grid,
            xi_grid: self.sweep.xi_grid,
            trials_per_cell: self.sweep.trials_per_cell,
            cycles_per_trial: self.sweep.cycles_per_trial,
            seed: self.seed,
            morphology: self.morphology,
            mode: self.mode,
            noise: self.sweep.noise,
            calibration: self.calibration,
        }
    }

    /// TOML with the output directory left out, so the same run written to
    /// two places reads the same.
    pub fn canonical_toml(&self) -> Result<String> {
        let mut canon = self.clone();
        canon.output = OutputConfig::default();
        canon.to_toml()
    }

    /// SHA-256 of [`RunConfig::canonical_toml`].
    pub fn hash(&self) -> Result<String> {
        Ok(sha256_hex(&self.canonical_toml()?))
    }

    pub fn provenance(&self) -> Result<Provenance> {
        Ok(Provenance::new(self.hash()?, self.seed))
    }
}
