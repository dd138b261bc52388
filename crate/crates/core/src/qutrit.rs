//! One-qubit holonomic gates on a three-level Λ system.
//!
//! Levels are ordered `(|0⟩, |1⟩, |e⟩)`. Two resonant fields with a common
//! envelope couple `|0⟩` and `|1⟩` to `|e⟩`; in the bright/dark frame only the
//! bright state `|b⟩` is driven, and a closed two-segment loop
//! `|b⟩ → |e⟩ → |b⟩` yields the elementary gate
//! `U_{θ,φ} = −i|e⟩⟨e| + i|b⟩⟨b| + |d⟩⟨d|`.
//!
//! Pulse-strength errors `(ε₀, ε₁)` rescale the two fields independently. This
//! both rescales the envelope, `Ω → (1+ε)Ω`, and tilts the bright state,
//! `θ → θ′`. The two-pulse composite `U U` cancels the first, the four-pulse
//! composite `U_θ U_θ U_{π−θ} U_{π−θ}` cancels both to first order.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{
    cis, ComplexMatrix, ComplexVector, Drive, HermitianEigen, C64, I, ONE, ZERO,
};

pub const ZERO_LEVEL: usize = 0;
pub const ONE_LEVEL: usize = 1;
pub const EXCITED: usize = 2;
pub const DIM: usize = 3;

/// Default number of slices used to resolve a pulse envelope.
pub const DEFAULT_ENVELOPE_STEPS: usize = 64;

/// The computational states `|0⟩, |1⟩` and the ancilla `|e⟩`.
#[derive(Clone, Debug)]
pub struct QutritBasis {
    pub zero: ComplexVector,
    pub one: ComplexVector,
    pub excited: ComplexVector,
}

impl QutritBasis {
    pub fn standard() -> Self {
        Self {
            zero: ComplexVector::basis(DIM, ZERO_LEVEL),
            one: ComplexVector::basis(DIM, ONE_LEVEL),
            excited: ComplexVector::basis(DIM, EXCITED),
        }
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let v = [&self.zero, &self.one, &self.excited];
        let mut worst = 0.0_f64;
        for (i, a) in v.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((a.inner(b) - target).norm());
            }
        }
        worst
    }

    pub fn computational(&self) -> Vec<ComplexVector> {
        vec![self.zero.clone(), self.one.clone()]
    }
}

/// Bright and dark superpositions of `|0⟩, |1⟩` for mixing angle `θ` and
/// relative phase `φ`.
#[derive(Clone, Debug)]
pub struct BrightDarkFrame {
    pub theta: f64,
    pub phi: f64,
    pub bright: ComplexVector,
    pub dark: ComplexVector,
}

impl BrightDarkFrame {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let e = cis(phi);
        let bright = qutrit_state(C64::new(c, 0.0), e * s, ZERO);
        let dark = qutrit_state(C64::new(s, 0.0), -e * c, ZERO);
        Self { theta, phi, bright, dark }
    }

    pub fn excited(&self) -> ComplexVector {
        ComplexVector::basis(DIM, EXCITED)
    }

    /// Unitary whose columns are `(|e⟩, |b⟩, |d⟩)`.
    pub fn change_of_basis(&self) -> ComplexMatrix {
        let cols = [self.excited(), self.bright.clone(), self.dark.clone()];
        ComplexMatrix::from_fn(DIM, DIM, |r, c| cols[c].get(r))
    }

    /// Express an operator given in `(|0⟩, |1⟩, |e⟩)` in the `(e, b, d)` basis.
    pub fn to_ebd(&self, op: &ComplexMatrix) -> ComplexMatrix {
        let w = self.change_of_basis();
        &(&w.adjoint() * op) * &w
    }
}

fn qutrit_state(a0: C64, a1: C64, ae: C64) -> ComplexVector {
    ComplexVector::new(vec![a0, a1, ae]).expect("three entries")
}

/// Shape of the Rabi envelope inside one pulse segment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    #[default]
    Square,
    SineSquared,
}

impl Envelope {
    /// Fraction of the segment's area accumulated by normalized time `s ∈ [0, 1]`.
    pub fn cumulative_fraction(self, s: f64) -> f64 {
        match self {
            Envelope::Square => s,
            Envelope::SineSquared => s - (2.0 * PI * s).sin() / (2.0 * PI),
        }
    }

    /// Envelope value at normalized time `s` for a unit-area pulse of unit duration.
    pub fn profile(self, s: f64) -> f64 {
        match self {
            Envelope::Square => 1.0,
            Envelope::SineSquared => 2.0 * (PI * s).sin().powi(2),
        }
    }
}

/// One constant-direction segment of a pulse schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    /// Target `∫Ω dt` in radians.
    pub area: f64,
    /// Laser phase `φ₀` of the segment.
    pub phi0: f64,
    pub envelope: Envelope,
    /// Number of slices the envelope is resolved into.
    pub steps: usize,
}

impl PulseSegment {
    pub fn new(area: f64, phi0: f64, envelope: Envelope, steps: usize) -> Result<Self> {
        if !(area > 0.0) || !area.is_finite() {
            return invalid(format!("segment area must be positive, got {area}"));
        }
        if steps == 0 {
            return invalid("segment needs at least one step");
        }
        Ok(Self { area, phi0, envelope, steps })
    }

    /// Evolve under `Ω(t)·G` across the segment, slice by slice.
    pub fn propagate(&self, generator: &ComplexMatrix) -> Result<ComplexMatrix> {
        let eig = HermitianEigen::new(generator)?;
        let mut u = ComplexMatrix::identity(generator.rows());
        let mut prev = 0.0;
        for k in 1..=self.steps {
            let next = self.envelope.cumulative_fraction(k as f64 / self.steps as f64);
            u = &eig.propagator(self.area * (next - prev)) * &u;
            prev = next;
        }
        Ok(u)
    }
}

/// The two segments realizing one elementary gate: `φ₀ = π/2` then `φ₀ = 0`,
/// each of area `π/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulsePair {
    pub first: PulseSegment,
    pub second: PulseSegment,
}

impl PulsePair {
    pub fn standard(envelope: Envelope) -> Self {
        let seg = |phi0| PulseSegment {
            area: FRAC_PI_2,
            phi0,
            envelope,
            steps: match envelope {
                Envelope::Square => 1,
                Envelope::SineSquared => DEFAULT_ENVELOPE_STEPS,
            },
        };
        Self { first: seg(FRAC_PI_2), second: seg(0.0) }
    }

    pub fn segments(&self) -> [&PulseSegment; 2] {
        [&self.first, &self.second]
    }

    fn check_nominal(&self) -> Result<()> {
        for seg in self.segments() {
            if (seg.area - FRAC_PI_2).abs() > 1e-12 {
                return invalid(format!("segment area must be π/2, got {}", seg.area));
            }
        }
        Ok(())
    }
}

impl Default for PulsePair {
    fn default() -> Self {
        Self::standard(Envelope::Square)
    }
}

/// Fractional Rabi-frequency deviations `(ε₀, ε₁)` of the two fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub eps0: f64,
    pub eps1: f64,
}

impl ErrorModel {
    pub fn new(eps0: f64, eps1: f64) -> Result<Self> {
        let m = Self { eps0, eps1 };
        m.validate()?;
        Ok(m)
    }

    pub fn common(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps0", self.eps0), ("eps1", self.eps1)] {
            if !(v.abs() < 1.0) {
                return invalid(format!("{name} must satisfy |{name}| < 1, got {v}"));
            }
        }
        Ok(())
    }

    /// `x = (ε₁ − ε₀)/(1 + ε₀)`, the relative imbalance that tilts `θ`.
    pub fn imbalance(&self) -> f64 {
        (self.eps1 - self.eps0) / (1.0 + self.eps0)
    }
}

/// `Ω(e^{iφ₀}|b⟩⟨e| + e^{−iφ₀}|e⟩⟨b|)`.
pub fn hamiltonian(frame: &BrightDarkFrame, omega: f64, phi0: f64) -> ComplexMatrix {
    let ket_e = frame.excited();
    let up = ComplexMatrix::outer(&frame.bright, &ket_e).scale(cis(phi0) * omega);
    &up + &up.adjoint()
}

/// Field-resolved Hamiltonian with independent pulse-strength errors:
/// `(1+ε₀)Ω cos(θ/2) e^{iφ₀}|0⟩⟨e| + (1+ε₁)Ω sin(θ/2) e^{i(φ₀+φ)}|1⟩⟨e| + h.c.`
pub fn field_hamiltonian(
    theta: f64,
    phi: f64,
    omega: f64,
    phi0: f64,
    model: &ErrorModel,
) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let a0 = cis(phi0) * ((1.0 + model.eps0) * omega * c);
    let a1 = cis(phi0 + phi) * ((1.0 + model.eps1) * omega * s);
    let mut h = ComplexMatrix::zeros(DIM, DIM);
    h.set(ZERO_LEVEL, EXCITED, a0);
    h.set(EXCITED, ZERO_LEVEL, a0.conj());
    h.set(ONE_LEVEL, EXCITED, a1);
    h.set(EXCITED, ONE_LEVEL, a1.conj());
    h
}

/// Envelope error `ε` and tilted mixing angle `θ′` induced by `(ε₀, ε₁)`.
///
/// `θ′` is taken on the continuous `atan2` branch, so `θ ∈ [0, π]` maps into
/// `[0, π]` and the field-resolved and reparametrized Hamiltonians coincide
/// exactly for every `θ`.
pub fn effective_error_params(theta: f64, model: &ErrorModel) -> Result<(f64, f64)> {
    let a0 = 1.0 + model.eps0;
    let a1 = 1.0 + model.eps1;
    if a0 == 0.0 {
        return Err(Error::SingularParameter("1 + eps0 vanishes".into()));
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let eps = ((a0 * c).powi(2) + (a1 * s).powi(2)).sqrt() - 1.0;
    let theta_prime = 2.0 * (a1 * s).atan2(a0 * c);
    Ok((eps, theta_prime))
}

/// `θ″ = π − (π−θ)′`, the error-affected angle of the complementary gate.
pub fn complementary_angle(theta: f64, model: &ErrorModel) -> Result<f64> {
    let (_, tp) = effective_error_params(PI - theta, model)?;
    Ok(PI - tp)
}

/// Ideal `U_{θ,φ} = −i|e⟩⟨e| + i|b⟩⟨b| + |d⟩⟨d|` from projectors.
pub fn elementary_target(frame: &BrightDarkFrame) -> ComplexMatrix {
    let e = frame.excited();
    let pe = ComplexMatrix::outer(&e, &e).scale(-I);
    let pb = ComplexMatrix::outer(&frame.bright, &frame.bright).scale(I);
    let pd = ComplexMatrix::outer(&frame.dark, &frame.dark);
    &(&pe + &pb) + &pd
}

/// Ideal `U_{θ,φ}² = −|e⟩⟨e| − |b⟩⟨b| + |d⟩⟨d|`.
pub fn composite_two_target(frame: &BrightDarkFrame) -> ComplexMatrix {
    let e = frame.excited();
    let pe = ComplexMatrix::outer(&e, &e);
    let pb = ComplexMatrix::outer(&frame.bright, &frame.bright);
    let pd = ComplexMatrix::outer(&frame.dark, &frame.dark);
    &(&pd - &pe) - &pb
}

/// `|e⟩⟨e| + exp[i(π−2θ)σ_{φ+π/2}]` on `(|0⟩, |1⟩, |e⟩)`.
pub fn logical_rotation_target(theta: f64, phi: f64) -> ComplexMatrix {
    let angle = PI - 2.0 * theta;
    let alpha = phi + FRAC_PI_2;
    // exp(iaσ) = cos a I + i sin a σ since σ_α² = I
    let (s, c) = angle.sin_cos();
    let off = |sign: f64| I * s * cis(sign * alpha);
    let mut u = ComplexMatrix::zeros(DIM, DIM);
    u.set(ZERO_LEVEL, ZERO_LEVEL, C64::new(c, 0.0));
    u.set(ONE_LEVEL, ONE_LEVEL, C64::new(c, 0.0));
    u.set(ZERO_LEVEL, ONE_LEVEL, off(-1.0));
    u.set(ONE_LEVEL, ZERO_LEVEL, off(1.0));
    u.set(EXCITED, EXCITED, ONE);
    u
}

/// Generators and areas of one elementary gate, in time order.
///
/// With an error model the envelope is scaled by `1+ε` and the frame angle
/// replaced by `θ′`.
pub fn elementary_drives(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
) -> Result<Vec<Drive>> {
    let (scale, driven) = deformed_frame(frame, model)?;
    Ok(PulsePair::default()
        .segments()
        .iter()
        .map(|seg| Drive::new(hamiltonian(&driven, scale, seg.phi0), seg.area))
        .collect())
}

fn deformed_frame(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
) -> Result<(f64, BrightDarkFrame)> {
    match model {
        None => Ok((1.0, frame.clone())),
        Some(m) => {
            m.validate()?;
            let (eps, tp) = effective_error_params(frame.theta, m)?;
            Ok((1.0 + eps, BrightDarkFrame::new(tp, frame.phi)))
        }
    }
}

/// The ideal elementary gate, built from its two-segment schedule.
pub fn elementary_gate(frame: &BrightDarkFrame) -> ComplexMatrix {
    build_elementary(frame, None, &PulsePair::default()).expect("nominal schedule is valid")
}

/// The error-affected elementary gate `U′_{θ,φ}` under the reparametrized
/// Hamiltonian `(1+ε)Ω(e^{iφ₀}|b_{θ′}⟩⟨e| + h.c.)`.
pub fn elementary_gate_with_error(
    frame: &BrightDarkFrame,
    model: &ErrorModel,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    build_elementary(frame, Some(model), pulses)
}

fn build_elementary(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    pulses.check_nominal()?;
    let (scale, driven) = deformed_frame(frame, model)?;
    let u1 = pulses.first.propagate(&hamiltonian(&driven, scale, pulses.first.phi0))?;
    let u2 = pulses.second.propagate(&hamiltonian(&driven, scale, pulses.second.phi0))?;
    Ok(&u2 * &u1)
}

/// The error-affected elementary gate evolved under the field-resolved
/// Hamiltonian, without passing through `(ε, θ′)`.
pub fn elementary_gate_direct(
    frame: &BrightDarkFrame,
    model: &ErrorModel,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    pulses.check_nominal()?;
    model.validate()?;
    let gen = |phi0| field_hamiltonian(frame.theta, frame.phi, 1.0, phi0, model);
    let u1 = pulses.first.propagate(&gen(pulses.first.phi0))?;
    let u2 = pulses.second.propagate(&gen(pulses.second.phi0))?;
    Ok(&u2 * &u1)
}

/// The elementary gate for an arbitrary pulse pair, error-affected when a
/// model is given.
pub fn elementary_gate_with(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    build_elementary(frame, model, pulses)
}

/// `U_{θ,φ} U_{θ,φ}`, error-affected in both factors when a model is given.
pub fn composite_two(frame: &BrightDarkFrame, model: Option<&ErrorModel>) -> Result<ComplexMatrix> {
    composite_two_with(frame, model, &PulsePair::default())
}

pub fn composite_two_with(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    let u = elementary_gate_with(frame, model, pulses)?;
    Ok(&u * &u)
}

/// `U_{θ,φ} U_{θ,φ} U_{π−θ,φ} U_{π−θ,φ}`; the rightmost factor acts first.
pub fn composite_four(frame: &BrightDarkFrame, model: Option<&ErrorModel>) -> Result<ComplexMatrix> {
    composite_four_with(frame, model, &PulsePair::default())
}

pub fn composite_four_with(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    let u = elementary_gate_with(frame, model, pulses)?;
    let complement = BrightDarkFrame::new(PI - frame.theta, frame.phi);
    let v = elementary_gate_with(&complement, model, pulses)?;
    Ok(&(&u * &u) * &(&v * &v))
}

/// Time-ordered drives of `U_{θ,φ}²`.
pub fn composite_two_drives(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
) -> Result<Vec<Drive>> {
    let one = elementary_drives(frame, model)?;
    Ok(one.iter().chain(one.iter()).cloned().collect())
}

/// Time-ordered drives of the four-pulse composite: two `U_{π−θ}` loops, then
/// two `U_θ` loops.
pub fn composite_four_drives(
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
) -> Result<Vec<Drive>> {
    let complement = BrightDarkFrame::new(PI - frame.theta, frame.phi);
    let first = elementary_drives(&complement, model)?;
    let last = elementary_drives(frame, model)?;
    Ok(first
        .iter()
        .chain(first.iter())
        .chain(last.iter())
        .chain(last.iter())
        .cloned()
        .collect())
}

/// `U_{Ω(t)} − I`, where `U_{Ω(t)}` is the four-factor envelope-error product
/// left over when `U′U′` is split into its ideal part and the `(1+ε)` excess
/// (with `θ′ = θ`).
pub fn bch_residual(frame: &BrightDarkFrame, eps: f64) -> Result<ComplexMatrix> {
    if !(eps.abs() < 1.0) {
        return invalid(format!("|eps| must be < 1, got {eps}"));
    }
    let g1 = HermitianEigen::new(&hamiltonian(frame, 1.0, FRAC_PI_2))?;
    let g2 = HermitianEigen::new(&hamiltonian(frame, 1.0, 0.0))?;
    let a = eps * FRAC_PI_2;
    let u = &(&(&g2.propagator(a) * &g1.propagator(-a)) * &g2.propagator(-a)) * &g1.propagator(a);
    Ok(&u - &ComplexMatrix::identity(DIM))
}
