//! Gate fidelity, error sweeps and log-log scaling fits.
//!
//! A gate with infidelity `1 − F ∝ εⁿ` shows up as a straight line of slope
//! `n` on `(log ε, log(1 − F))`. The plain holonomic gate is second order in
//! the pulse-strength error; the composite constructions are fourth order.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{frobenius_distance, ComplexMatrix, DEFAULT_TOL, ONE};
use crate::qutrit::{self, BrightDarkFrame, Envelope, ErrorModel, PulsePair};
use crate::twoqubit::{self, TwoQubitErrorModel, TwoQubitLabel};

/// Infidelities below this are treated as rounding noise and left out of fits.
pub const INFIDELITY_FLOOR: f64 = 1e-14;

/// Smallest error magnitude accepted by [`order_ratio_test`].
pub const MIN_RATIO_EPSILON: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub value: f64,
    pub infidelity: f64,
}

/// `F = |Tr(U†V)| / Tr(U†U)`.
///
/// When both arguments are unitary the infidelity is evaluated as
/// `‖V − e^{iα}U‖²_F / (2 Tr(U†U))` with `α = arg Tr(U†V)`, which equals
/// `1 − F` but keeps full relative precision for tiny deviations.
pub fn gate_fidelity(ideal: &ComplexMatrix, actual: &ComplexMatrix) -> Result<FidelityResult> {
    if !ideal.is_square() || ideal.rows() != actual.rows() || ideal.cols() != actual.cols() {
        return invalid(format!(
            "fidelity needs equal square shapes, got {}x{} and {}x{}",
            ideal.rows(),
            ideal.cols(),
            actual.rows(),
            actual.cols()
        ));
    }
    let overlap = (&ideal.adjoint() * actual).trace();
    let norm = ideal.frobenius_norm().powi(2);
    let value = overlap.norm() / norm;
    let infidelity = if ideal.is_unitary(DEFAULT_TOL) && actual.is_unitary(DEFAULT_TOL) {
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        let aligned = ideal.scale(phase);
        frobenius_distance(actual, &aligned)?.powi(2) / (2.0 * norm)
    } else {
        1.0 - value
    };
    Ok(FidelityResult { value, infidelity })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    #[serde(alias = "elementary")]
    Single,
    Composite2,
    Composite4,
    #[serde(alias = "twoqubit_elementary")]
    TwoqubitSingle,
    TwoqubitComposite,
}

impl GateKind {
    pub fn is_two_qubit(self) -> bool {
        matches!(self, Self::TwoqubitSingle | Self::TwoqubitComposite)
    }
}

/// How a scalar error magnitude `ε` maps onto the field deviations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMode {
    /// `ε₀ = ε₁ = ε`.
    Common,
    /// `ε₀ = ε, ε₁ = −ε`.
    Differential,
    /// `ε₀ = ε, ε₁ = 0`.
    SingleField,
    /// `ε_jk = ε`.
    TwoQubit,
}

impl ErrorMode {
    pub fn model(self, eps: f64) -> Result<ErrorModel> {
        match self {
            Self::Common => ErrorModel::new(eps, eps),
            Self::Differential => ErrorModel::new(eps, -eps),
            Self::SingleField => ErrorModel::new(eps, 0.0),
            Self::TwoQubit => invalid("two_qubit mode has no one-qubit error model"),
        }
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..n)
                .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
                .collect()
        }
    }
}

/// Twelve points in `[10⁻³, 10^{−1.5}]`.
pub fn default_epsilons() -> Vec<f64> {
    logspace(1e-3, 10f64.powf(-1.5), 12)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub gate_kind: GateKind,
    pub theta: f64,
    pub phi: f64,
    pub error_mode: ErrorMode,
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub jk: TwoQubitLabel,
    #[serde(default)]
    pub envelope: Envelope,
}

impl SweepSpec {
    pub fn new(gate_kind: GateKind, error_mode: ErrorMode) -> Self {
        Self {
            gate_kind,
            theta: PI / 4.0,
            phi: 0.0,
            error_mode,
            epsilons: default_epsilons(),
            jk: TwoQubitLabel::L11,
            envelope: Envelope::Square,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return invalid("epsilon list is empty");
        }
        if self.epsilons.iter().any(|&e| !(e > 0.0) || e >= 1.0) {
            return invalid("epsilons must lie in (0, 1)");
        }
        if self.epsilons.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("epsilons must be strictly increasing");
        }
        let two = self.error_mode == ErrorMode::TwoQubit;
        if two != self.gate_kind.is_two_qubit() {
            return invalid(format!(
                "error mode {:?} does not apply to gate kind {:?}",
                self.error_mode, self.gate_kind
            ));
        }
        Ok(())
    }

    /// `(ideal, error-affected)` gates at error magnitude `eps`.
    pub fn gate_pair(&self, eps: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let pulses = PulsePair::standard(self.envelope);
        if self.gate_kind.is_two_qubit() {
            let model = TwoQubitErrorModel::new(eps)?;
            return match self.gate_kind {
                GateKind::TwoqubitSingle => Ok((
                    twoqubit::twoqubit_elementary_with(self.jk, None, &pulses)?,
                    twoqubit::twoqubit_elementary_with(self.jk, Some(&model), &pulses)?,
                )),
                _ => Ok((
                    twoqubit::twoqubit_composite_with(self.jk, None, &pulses)?,
                    twoqubit::twoqubit_composite_with(self.jk, Some(&model), &pulses)?,
                )),
            };
        }
        let frame = BrightDarkFrame::new(self.theta, self.phi);
        let model = self.error_mode.model(eps)?;
        match self.gate_kind {
            GateKind::Single => Ok((
                qutrit::elementary_gate_with(&frame, None, &pulses)?,
                qutrit::elementary_gate_with(&frame, Some(&model), &pulses)?,
            )),
            GateKind::Composite2 => Ok((
                qutrit::composite_two_with(&frame, None, &pulses)?,
                qutrit::composite_two_with(&frame, Some(&model), &pulses)?,
            )),
            _ => Ok((
                qutrit::composite_four_with(&frame, None, &pulses)?,
                qutrit::composite_four_with(&frame, Some(&model), &pulses)?,
            )),
        }
    }

    pub fn infidelity(&self, eps: f64) -> Result<f64> {
        let (ideal, actual) = self.gate_pair(eps)?;
        Ok(gate_fidelity(&ideal, &actual)?.infidelity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub epsilon: f64,
    pub infidelity: f64,
}

/// Least-squares line through `(log ε, log(1−F))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// Every evaluated point, sorted by `ε`, including floor-excluded ones.
    pub samples: Vec<SweepSample>,
    pub slope: f64,
    /// One standard error of the slope.
    pub slope_stderr: f64,
    /// Natural-log intercept.
    pub intercept: f64,
    pub r_squared: f64,
    /// Points used in the fit.
    pub points_used: usize,
}

/// Fit a single power law to the samples above [`INFIDELITY_FLOOR`].
pub fn fit_power_law(samples: Vec<SweepSample>) -> Result<ScalingFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.infidelity >= INFIDELITY_FLOOR && s.epsilon > 0.0)
        .map(|s| (s.epsilon.ln(), s.infidelity.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate(format!(
            "{} of {} points above the infidelity floor",
            pts.len(),
            samples.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all epsilons coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    let slope_stderr = if pts.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(ScalingFit {
        samples,
        slope,
        slope_stderr,
        intercept,
        r_squared,
        points_used: pts.len(),
    })
}

/// Evaluate the infidelity at every `ε` of a [`SweepSpec`] and fit the scaling law.
pub fn run_sweep(spec: &SweepSpec) -> Result<ScalingFit> {
    spec.validate()?;
    let mut samples = spec
        .epsilons
        .par_iter()
        .map(|&epsilon| {
            spec.infidelity(epsilon)
                .map(|infidelity| SweepSample { epsilon, infidelity })
        })
        .collect::<Result<Vec<_>>>()?;
    samples.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    fit_power_law(samples)
}

/// `infidelity(ε) / infidelity(ε/2)`; about `2ⁿ` for an order-`n` law.
pub fn order_ratio_test<F>(gate_builder: F, eps: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(ComplexMatrix, ComplexMatrix)>,
{
    if !(eps >= MIN_RATIO_EPSILON) {
        return Err(Error::Degenerate(format!(
            "eps = {eps:e} is below {MIN_RATIO_EPSILON:e}"
        )));
    }
    let infid = |e: f64| -> Result<f64> {
        let (ideal, actual) = gate_builder(e)?;
        Ok(gate_fidelity(&ideal, &actual)?.infidelity)
    };
    let (full, half) = (infid(eps)?, infid(eps / 2.0)?);
    if full < INFIDELITY_FLOOR || half < INFIDELITY_FLOOR {
        return Err(Error::Degenerate(format!(
            "infidelities {full:e}, {half:e} are at the floating-point floor"
        )));
    }
    Ok(full / half)
}
