//! Composite nonadiabatic holonomic gates on three-level Λ systems.
//!
//! - [`linalg`]: complex matrices, Hermitian exponentials, time-ordered products.
//! - [`qutrit`]: the bright/dark frame, elementary and composite one-qubit gates
//!   and the pulse-strength error model.
//! - [`holonomy`]: numerical checks that a schedule is a pure holonomy.
//! - [`twoqubit`]: the five-level two-qubit gate and entangling checks.
//! - [`dfs`]: decoherence-free encodings on trapped-ion registers under
//!   collective dephasing.
//! - [`analysis`]: gate fidelity, error sweeps and scaling fits.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dfs;
pub mod error;
pub mod holonomy;
pub mod linalg;
pub mod qutrit;
pub mod twoqubit;

pub use analysis::{
    gate_fidelity, order_ratio_test, run_sweep, ErrorMode, FidelityResult, GateKind, ScalingFit, SweepSample,
    SweepSpec,
};
pub use dfs::{DephasingChannel, DephasingOutcome, DfsEncoding, IonRegister, KickDistribution, KickPlacement};
pub use error::{Error, Result};
pub use holonomy::{check_holonomy, trace_evolution, EvolutionTrace, HolonomyReport};
pub use linalg::{ComplexMatrix, ComplexVector, Drive, HermitianEigen, C64};
pub use qutrit::{BrightDarkFrame, Envelope, ErrorModel, PulsePair, PulseSegment, QutritBasis};
pub use twoqubit::{TwoQubitErrorModel, TwoQubitLabel};
