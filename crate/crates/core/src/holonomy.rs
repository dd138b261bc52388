//! Numerical certification of nonadiabatic holonomies.
//!
//! A schedule realizes a holonomy on a computational subspace when
//! (i) the subspace returns to itself at the end of the evolution, and
//! (ii) the Hamiltonian has vanishing matrix elements between evolved
//! computational states at every instant (no dynamical phase).
//! [`trace_evolution`] samples the evolution and [`check_holonomy`] measures
//! both residuals.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{frobenius_distance, ComplexMatrix, ComplexVector, Drive, HermitianEigen, ONE, ZERO};

pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 128;

/// Sampled evolution of a computational basis under a piecewise schedule.
#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    /// Sample times, with unit peak envelope so time equals accumulated area.
    pub times: Vec<f64>,
    /// `states[k][n]` is `|φ_k(t_n)⟩`.
    pub states: Vec<Vec<ComplexVector>>,
    /// Generator active at each sample.
    pub hamiltonians: Vec<ComplexMatrix>,
    /// Sample index at the end of each segment.
    pub segment_ends: Vec<usize>,
    peak: f64,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.segment_ends.len()
    }

    /// Largest operator norm among the generators (peak Rabi frequency).
    pub fn peak_rabi(&self) -> f64 {
        self.peak
    }

    /// Projector onto the evolved subspace at sample `n`.
    pub fn projector(&self, n: usize) -> ComplexMatrix {
        let vs: Vec<ComplexVector> = self.states.iter().map(|s| s[n].clone()).collect();
        ComplexMatrix::projector(&vs).expect("trace basis is nonempty")
    }

    /// `‖P(t_n) − P(0)‖_F` at every segment boundary.
    pub fn boundary_distances(&self) -> Vec<f64> {
        let p0 = self.projector(0);
        self.segment_ends
            .iter()
            .map(|&n| frobenius_distance(&self.projector(n), &p0).expect("same shape"))
            .collect()
    }
}

/// Outcome of checking conditions (i) and (ii).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyReport {
    /// `‖P(τ) − P(0)‖_F`.
    pub cond1_residual: f64,
    /// `max |⟨φ_k(t)|H(t)|φ_l(t)⟩|` over samples, in units of the peak Rabi frequency.
    pub cond2_max: f64,
    pub passed: bool,
    pub tolerance: f64,
}

impl HolonomyReport {
    fn new(cond1_residual: f64, cond2_max: f64, tolerance: f64) -> Self {
        Self {
            cond1_residual,
            cond2_max,
            passed: cond1_residual <= tolerance && cond2_max <= tolerance,
            tolerance,
        }
    }
}

fn check_orthonormal(basis: &[ComplexVector], tol: f64) -> Result<()> {
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            if (a.inner(b) - target).norm() > tol {
                return invalid("subspace basis is not orthonormal");
            }
        }
    }
    Ok(())
}

/// Propagate `subspace_basis` through `drives`, splitting every segment into
/// `samples_per_segment` equal-area slices.
///
/// Each segment contributes `samples_per_segment + 1` samples (its start and
/// the end of every slice), so segment boundaries are sampled under both the
/// outgoing and the incoming generator.
pub fn trace_evolution(
    drives: &[Drive],
    subspace_basis: &[ComplexVector],
    samples_per_segment: usize,
) -> Result<EvolutionTrace> {
    let Some(first) = subspace_basis.first() else {
        return invalid("subspace basis is empty");
    };
    if samples_per_segment == 0 {
        return invalid("samples_per_segment must be positive");
    }
    let dim = first.dim();
    if subspace_basis.iter().any(|v| v.dim() != dim) {
        return invalid("subspace basis vectors differ in dimension");
    }
    check_orthonormal(subspace_basis, 1e-9)?;

    let mut trace = EvolutionTrace {
        times: vec![],
        states: vec![vec![]; subspace_basis.len()],
        hamiltonians: vec![],
        segment_ends: vec![],
        peak: 0.0,
    };
    let mut current: Vec<ComplexVector> = subspace_basis.to_vec();
    let mut t = 0.0;

    if drives.is_empty() {
        trace.times.push(0.0);
        trace.hamiltonians.push(ComplexMatrix::zeros(dim, dim));
        for (k, v) in current.iter().enumerate() {
            trace.states[k].push(v.clone());
        }
        return Ok(trace);
    }

    for (s, drive) in drives.iter().enumerate() {
        if drive.generator.rows() != dim {
            return invalid(format!(
                "drive {s} has dimension {}, basis has {dim}",
                drive.generator.rows()
            ));
        }
        let eig = HermitianEigen::new(&drive.generator)?;
        trace.peak = trace.peak.max(eig.spectral_norm());
        let slice = drive.area / samples_per_segment as f64;
        let step = eig.propagator(slice);
        for j in 0..=samples_per_segment {
            if j > 0 {
                current = current.iter().map(|v| step.apply(v)).collect();
                t += slice;
            }
            trace.times.push(t);
            trace.hamiltonians.push(drive.generator.clone());
            for (k, v) in current.iter().enumerate() {
                trace.states[k].push(v.clone());
            }
        }
        trace.segment_ends.push(trace.times.len() - 1);
    }
    Ok(trace)
}

fn cond2_over(trace: &EvolutionTrace, samples: std::ops::RangeInclusive<usize>) -> f64 {
    let norm = if trace.peak > 0.0 { trace.peak } else { 1.0 };
    let mut worst = 0.0_f64;
    for n in samples {
        let h = &trace.hamiltonians[n];
        for a in &trace.states {
            for b in &trace.states {
                worst = worst.max(h.expectation(&a[n], &b[n]).norm());
            }
        }
    }
    worst / norm
}

/// Evaluate conditions (i) and (ii) over the whole trace.
pub fn check_holonomy(trace: &EvolutionTrace, tolerance: f64) -> Result<HolonomyReport> {
    if trace.is_empty() {
        return invalid("trace is empty");
    }
    let last = trace.len() - 1;
    let cond1 = frobenius_distance(&trace.projector(last), &trace.projector(0))?;
    Ok(HolonomyReport::new(cond1, cond2_over(trace, 0..=last), tolerance))
}

/// Evaluate conditions (i) and (ii) separately for each consecutive group of
/// `segments_per_loop` segments (one elementary loop each).
pub fn check_holonomy_per_loop(
    trace: &EvolutionTrace,
    segments_per_loop: usize,
    tolerance: f64,
) -> Result<Vec<HolonomyReport>> {
    if segments_per_loop == 0 || !trace.segment_count().is_multiple_of(segments_per_loop) {
        return invalid(format!(
            "{} segments cannot be split into loops of {segments_per_loop}",
            trace.segment_count()
        ));
    }
    let mut start = 0;
    let mut out = vec![];
    for chunk in trace.segment_ends.chunks(segments_per_loop) {
        let end = *chunk.last().expect("nonempty chunk");
        let cond1 = frobenius_distance(&trace.projector(end), &trace.projector(start))?;
        out.push(HolonomyReport::new(cond1, cond2_over(trace, start..=end), tolerance));
        start = end + 1;
    }
    Ok(out)
}

/// `‖P(T₁) − P(0)‖_F` at the boundary of a two-segment loop.
pub fn grassmannian_midpoint_check(trace: &EvolutionTrace) -> Result<f64> {
    if trace.segment_count() != 2 {
        return invalid(format!(
            "midpoint check needs a two-segment trace, got {} segments",
            trace.segment_count()
        ));
    }
    Ok(trace.boundary_distances()[0])
}
