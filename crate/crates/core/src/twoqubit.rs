//! Two-qubit holonomic gates on the model space `{|00⟩, |01⟩, |10⟩, |11⟩, |a⟩}`.
//!
//! The drive couples one computational state `|jk⟩` to the ancilla `|a⟩`
//! (the second coupling `Ω_lm` is switched off during the gate), so the error
//! model has a single deviation `Ω_jk → (1+ε_jk)Ω_jk`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{cis, ComplexMatrix, Drive, C64, DEFAULT_TOL, I, ONE};
use crate::qutrit::PulsePair;

pub const DIM: usize = 5;
pub const ANCILLA: usize = 4;

/// A computational two-qubit basis label `|jk⟩`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TwoQubitLabel {
    L00,
    L01,
    L10,
    #[default]
    L11,
}

impl TwoQubitLabel {
    pub const ALL: [TwoQubitLabel; 4] = [Self::L00, Self::L01, Self::L10, Self::L11];

    pub fn index(self) -> usize {
        match self {
            Self::L00 => 0,
            Self::L01 => 1,
            Self::L10 => 2,
            Self::L11 => 3,
        }
    }
}

impl fmt::Display for TwoQubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::L00 => "00",
            Self::L01 => "01",
            Self::L10 => "10",
            Self::L11 => "11",
        };
        f.write_str(s)
    }
}

impl FromStr for TwoQubitLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => Ok(Self::L00),
            "01" => Ok(Self::L01),
            "10" => Ok(Self::L10),
            "11" => Ok(Self::L11),
            other => invalid(format!("unknown two-qubit label {other:?}")),
        }
    }
}

impl TryFrom<String> for TwoQubitLabel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TwoQubitLabel> for String {
    fn from(l: TwoQubitLabel) -> String {
        l.to_string()
    }
}

/// Fractional deviation `ε_jk` of the driven coupling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitErrorModel {
    pub eps_jk: f64,
}

impl TwoQubitErrorModel {
    pub fn new(eps_jk: f64) -> Result<Self> {
        let m = Self { eps_jk };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_jk.abs() < 1.0) {
            return invalid(format!("|eps_jk| must be < 1, got {}", self.eps_jk));
        }
        Ok(())
    }
}

fn coupling(label: usize, omega: f64, phase: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(DIM, DIM);
    let amp = cis(phase) * omega;
    h.set(label, ANCILLA, amp);
    h.set(ANCILLA, label, amp.conj());
    h
}

/// `Ω_jk e^{iφ_jk}|jk⟩⟨a| + Ω_lm e^{iφ_lm}|lm⟩⟨a| + h.c.`
pub fn twoqubit_hamiltonian(
    jk: TwoQubitLabel,
    lm: TwoQubitLabel,
    omega_jk: f64,
    phi_jk: f64,
    omega_lm: f64,
    phi_lm: f64,
) -> Result<ComplexMatrix> {
    if jk == lm {
        return invalid(format!("coupled states must differ, both are |{jk}⟩"));
    }
    Ok(&coupling(jk.index(), omega_jk, phi_jk) + &coupling(lm.index(), omega_lm, phi_lm))
}

/// Time-ordered drives of `U_jk` (phases π/2 then 0, areas π/2).
pub fn twoqubit_drives(jk: TwoQubitLabel, model: Option<&TwoQubitErrorModel>) -> Result<Vec<Drive>> {
    let scale = scale_of(model)?;
    Ok(PulsePair::default()
        .segments()
        .iter()
        .map(|seg| Drive::new(coupling(jk.index(), scale, seg.phi0), seg.area))
        .collect())
}

fn scale_of(model: Option<&TwoQubitErrorModel>) -> Result<f64> {
    match model {
        None => Ok(1.0),
        Some(m) => {
            m.validate()?;
            Ok(1.0 + m.eps_jk)
        }
    }
}

/// The elementary gate `U_jk`; ideally `−i|a⟩⟨a| + i|jk⟩⟨jk| + Σ_{hn≠jk}|hn⟩⟨hn|`.
pub fn twoqubit_elementary(jk: TwoQubitLabel, model: Option<&TwoQubitErrorModel>) -> Result<ComplexMatrix> {
    twoqubit_elementary_with(jk, model, &PulsePair::default())
}

pub fn twoqubit_elementary_with(
    jk: TwoQubitLabel,
    model: Option<&TwoQubitErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    let scale = scale_of(model)?;
    let u1 = pulses.first.propagate(&coupling(jk.index(), scale, pulses.first.phi0))?;
    let u2 = pulses.second.propagate(&coupling(jk.index(), scale, pulses.second.phi0))?;
    Ok(&u2 * &u1)
}

/// The composite gate `U_jk U_jk`.
pub fn twoqubit_composite(jk: TwoQubitLabel, model: Option<&TwoQubitErrorModel>) -> Result<ComplexMatrix> {
    twoqubit_composite_with(jk, model, &PulsePair::default())
}

pub fn twoqubit_composite_with(
    jk: TwoQubitLabel,
    model: Option<&TwoQubitErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    let u = twoqubit_elementary_with(jk, model, pulses)?;
    Ok(&u * &u)
}

pub fn twoqubit_elementary_target(jk: TwoQubitLabel) -> ComplexMatrix {
    let mut d = [ONE; DIM];
    d[jk.index()] = I;
    d[ANCILLA] = -I;
    ComplexMatrix::from_diagonal(&d)
}

pub fn twoqubit_composite_target(jk: TwoQubitLabel) -> ComplexMatrix {
    let mut d = [ONE; DIM];
    d[jk.index()] = -ONE;
    d[ANCILLA] = -ONE;
    ComplexMatrix::from_diagonal(&d)
}

/// Restriction of a model-space operator to the computational span.
pub fn computational_block(gate: &ComplexMatrix) -> ComplexMatrix {
    gate.restrict(&[0, 1, 2, 3])
}

/// Number of nonzero singular values in the operator-Schmidt decomposition
/// of a 4×4 operator over `C² ⊗ C²`.
pub fn operator_schmidt_rank(gate: &ComplexMatrix, tol: f64) -> Result<usize> {
    if gate.rows() != 4 || gate.cols() != 4 {
        return invalid(format!("expected a 4x4 operator, got {}x{}", gate.rows(), gate.cols()));
    }
    // R[(a c), (b d)] = U[(a b), (c d)]
    let realigned = nalgebra::DMatrix::<C64>::from_fn(4, 4, |r, c| {
        let (a, cc) = (r / 2, r % 2);
        let (b, d) = (c / 2, c % 2);
        gate.get(2 * a + b, 2 * cc + d)
    });
    let sv = realigned.singular_values();
    let scale = sv.iter().fold(0.0_f64, |m, v| m.max(*v));
    Ok(sv.iter().filter(|&&s| s > tol * scale.max(1.0)).count())
}

/// `true` iff the 4×4 unitary is not a tensor product of one-qubit unitaries.
pub fn entangling_power_check(gate: &ComplexMatrix) -> Result<bool> {
    if gate.rows() != 4 || gate.cols() != 4 {
        return invalid(format!("expected a 4x4 operator, got {}x{}", gate.rows(), gate.cols()));
    }
    if !gate.is_unitary(DEFAULT_TOL) {
        return invalid("gate is not unitary");
    }
    Ok(operator_schmidt_rank(gate, 1e-10)? > 1)
}
