//! Run configuration, read from TOML. Every section is optional and unknown
//! keys are rejected.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use nhqc_core::analysis::{default_epsilons, logspace, ErrorMode, GateKind, SweepSpec};
use nhqc_core::dfs::{DephasingChannel, KickDistribution, KickPlacement};
use nhqc_core::holonomy::DEFAULT_SAMPLES_PER_SEGMENT;
use nhqc_core::{Envelope, TwoQubitLabel};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub gate: GateSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorSection>,
    pub sweep: SweepSection,
    pub holonomy: HolonomySection,
    pub dfs: DfsSection,
    pub output: OutputSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GateSection {
    pub kind: GateKind,
    pub theta: f64,
    pub phi: f64,
    pub jk: TwoQubitLabel,
    pub envelope: Envelope,
}

impl Default for GateSection {
    fn default() -> Self {
        Self {
            kind: GateKind::Composite4,
            theta: FRAC_PI_4,
            phi: 0.0,
            jk: TwoQubitLabel::L11,
            envelope: Envelope::Square,
        }
    }
}

/// Fractional pulse-strength errors applied by `gate`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorSection {
    pub eps0: f64,
    pub eps1: f64,
    pub eps_jk: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub gate_kind: GateKind,
    pub error_mode: ErrorMode,
    pub theta: f64,
    pub phi: f64,
    pub jk: TwoQubitLabel,
    pub envelope: Envelope,
    /// Explicit grid; when absent, `points` log-spaced values in `[eps_min, eps_max]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    pub eps_min: f64,
    pub eps_max: f64,
    pub points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        let grid = default_epsilons();
        Self {
            gate_kind: GateKind::Composite4,
            error_mode: ErrorMode::Common,
            theta: FRAC_PI_4,
            phi: 0.0,
            jk: TwoQubitLabel::L11,
            envelope: Envelope::Square,
            epsilons: None,
            eps_min: grid[0],
            eps_max: grid[grid.len() - 1],
            points: grid.len(),
        }
    }
}

impl SweepSection {
    pub fn spec(&self) -> SweepSpec {
        let epsilons = match &self.epsilons {
            Some(e) => e.clone(),
            None => logspace(self.eps_min, self.eps_max, self.points),
        };
        SweepSpec {
            gate_kind: self.gate_kind,
            theta: self.theta,
            phi: self.phi,
            error_mode: self.error_mode,
            epsilons,
            jk: self.jk,
            envelope: self.envelope,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    #[default]
    Elementary,
    Composite2,
    Composite4,
    Twoqubit,
    /// First segment of the elementary gate only.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HolonomySection {
    pub schedule: Schedule,
    pub theta: f64,
    pub phi: f64,
    pub jk: TwoQubitLabel,
    pub samples_per_segment: usize,
    pub tolerance: f64,
}

impl Default for HolonomySection {
    fn default() -> Self {
        Self {
            schedule: Schedule::Elementary,
            theta: FRAC_PI_4,
            phi: 0.0,
            jk: TwoQubitLabel::L11,
            samples_per_segment: DEFAULT_SAMPLES_PER_SEGMENT,
            tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DfsSection {
    pub theta: f64,
    pub phi: f64,
    pub kappas: Vec<f64>,
    pub n_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub distribution: KickDistribution,
    pub placement: KickPlacement,
}

impl Default for DfsSection {
    fn default() -> Self {
        Self {
            theta: FRAC_PI_4,
            phi: 0.0,
            kappas: vec![0.0, 0.25, 0.5],
            n_samples: 1000,
            seed: None,
            distribution: KickDistribution::Uniform,
            placement: KickPlacement::AfterEachSegment,
        }
    }
}

impl DfsSection {
    pub fn channel(&self, kappa: f64) -> DephasingChannel {
        DephasingChannel {
            distribution: self.distribution,
            kappa,
            n_samples: self.n_samples,
            placement: self.placement,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }
}
