use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use nhqc_core::analysis::{gate_fidelity, run_sweep, GateKind};
use nhqc_core::dfs::{
    apply_collective_dephasing, default_logical_schedule, dephasing_fidelity, encoded_plus_state,
    unencoded_contrast_state, DfsEncoding,
};
use nhqc_core::holonomy::{
    check_holonomy, check_holonomy_per_loop, grassmannian_midpoint_check, trace_evolution,
};
use nhqc_core::linalg::{frobenius_distance, Drive, DEFAULT_TOL};
use nhqc_core::qutrit::{self, BrightDarkFrame, ErrorModel, PulsePair, QutritBasis};
use nhqc_core::twoqubit::{self, TwoQubitErrorModel};
use nhqc_core::{ComplexMatrix, ComplexVector};
use serde::Serialize;

use crate::config::{RunConfig, Schedule};
use crate::error::{CliError, Result};
use crate::record::*;

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

impl Overrides {
    fn out_dir(&self, cfg: &RunConfig) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

fn write_record(dir: &Path, name: &str, record: &ResultRecord) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(record)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn write_csv<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(path)
}

fn one_qubit_gate(
    kind: GateKind,
    frame: &BrightDarkFrame,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<ComplexMatrix> {
    Ok(match kind {
        GateKind::Single => qutrit::elementary_gate_with(frame, model, pulses)?,
        GateKind::Composite2 => qutrit::composite_two_with(frame, model, pulses)?,
        _ => qutrit::composite_four_with(frame, model, pulses)?,
    })
}

pub fn cmd_gate(cfg: &RunConfig, ov: &Overrides) -> Result<(ResultRecord, Vec<PathBuf>)> {
    let g = &cfg.gate;
    let pulses = PulsePair::standard(g.envelope);
    let tol = ov.tolerance.unwrap_or(DEFAULT_TOL);

    let (ideal, target, actual, ideal_ebd, entangling) = if g.kind.is_two_qubit() {
        let model = cfg.error.map(|e| TwoQubitErrorModel::new(e.eps_jk)).transpose()?;
        let (ideal, target, actual) = if g.kind == GateKind::TwoqubitSingle {
            (
                twoqubit::twoqubit_elementary_with(g.jk, None, &pulses)?,
                twoqubit::twoqubit_elementary_target(g.jk),
                model.map(|m| twoqubit::twoqubit_elementary_with(g.jk, Some(&m), &pulses)).transpose()?,
            )
        } else {
            (
                twoqubit::twoqubit_composite_with(g.jk, None, &pulses)?,
                twoqubit::twoqubit_composite_target(g.jk),
                model.map(|m| twoqubit::twoqubit_composite_with(g.jk, Some(&m), &pulses)).transpose()?,
            )
        };
        let entangling = twoqubit::entangling_power_check(&twoqubit::computational_block(&ideal))?;
        (ideal, target, actual, None, Some(entangling))
    } else {
        let frame = BrightDarkFrame::new(g.theta, g.phi);
        let model = cfg.error.map(|e| ErrorModel::new(e.eps0, e.eps1)).transpose()?;
        let ideal = one_qubit_gate(g.kind, &frame, None, &pulses)?;
        let target = match g.kind {
            GateKind::Single => qutrit::elementary_target(&frame),
            GateKind::Composite2 => qutrit::composite_two_target(&frame),
            _ => qutrit::logical_rotation_target(g.theta, g.phi),
        };
        let actual = model.map(|m| one_qubit_gate(g.kind, &frame, Some(&m), &pulses)).transpose()?;
        let ebd = matrix_to_json(&frame.to_ebd(&ideal));
        (ideal, target, actual, Some(ebd), None)
    };

    let target_distance = frobenius_distance(&ideal, &target)?;
    let (fidelity, distance_to_ideal) = match &actual {
        Some(a) => (Some(gate_fidelity(&ideal, a)?), Some(frobenius_distance(&ideal, a)?)),
        None => (None, None),
    };
    let out = GateOutput {
        kind: g.kind,
        ideal: matrix_to_json(&ideal),
        target_distance,
        matches_target: target_distance <= tol,
        ideal_ebd,
        entangling,
        actual: actual.as_ref().map(matrix_to_json),
        fidelity,
        distance_to_ideal,
    };
    let record = ResultRecord::new("gate", cfg.clone(), Outputs::Gate(out));
    let path = write_record(&ov.out_dir(cfg), "gate.json", &record)?;
    Ok((record, vec![path]))
}

#[derive(Serialize)]
struct SweepRow {
    epsilon: f64,
    infidelity: f64,
}

pub fn cmd_sweep(cfg: &RunConfig, ov: &Overrides) -> Result<(ResultRecord, Vec<PathBuf>)> {
    let spec = cfg.sweep.spec();
    let fit = run_sweep(&spec)?;
    let dir = ov.out_dir(cfg);
    let rows: Vec<SweepRow> = fit
        .samples
        .iter()
        .map(|s| SweepRow { epsilon: s.epsilon, infidelity: s.infidelity })
        .collect();
    let csv_path = write_csv(&dir, "sweep.csv", &rows)?;
    let out = SweepOutput { fit, csv: "sweep.csv".into() };
    let record = ResultRecord::new("sweep", cfg.clone(), Outputs::Sweep(out));
    let path = write_record(&dir, "sweep.json", &record)?;
    Ok((record, vec![path, csv_path]))
}

pub fn cmd_check_holonomy(cfg: &RunConfig, ov: &Overrides) -> Result<(ResultRecord, Vec<PathBuf>)> {
    let h = &cfg.holonomy;
    let tolerance = ov.tolerance.unwrap_or(h.tolerance);
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(CliError::Config(format!("tolerance must be non-negative, got {tolerance}")));
    }
    let frame = BrightDarkFrame::new(h.theta, h.phi);
    let qutrit_basis = QutritBasis::standard().computational();
    let (drives, basis, loop_len): (Vec<Drive>, Vec<ComplexVector>, Option<usize>) = match h.schedule {
        Schedule::Elementary => (qutrit::elementary_drives(&frame, None)?, qutrit_basis, None),
        Schedule::Composite2 => (qutrit::composite_two_drives(&frame, None)?, qutrit_basis, Some(2)),
        Schedule::Composite4 => (qutrit::composite_four_drives(&frame, None)?, qutrit_basis, Some(2)),
        Schedule::Twoqubit => {
            let basis = (0..4).map(|k| ComplexVector::basis(twoqubit::DIM, k)).collect();
            (twoqubit::twoqubit_drives(h.jk, None)?, basis, None)
        }
        Schedule::Truncated => {
            let first = Drive::new(qutrit::hamiltonian(&frame, 1.0, FRAC_PI_2), FRAC_PI_2 / 2.0);
            (vec![first], qutrit_basis, None)
        }
    };
    let trace = trace_evolution(&drives, &basis, h.samples_per_segment)?;
    let report = check_holonomy(&trace, tolerance)?;
    let per_loop = match loop_len {
        Some(n) => check_holonomy_per_loop(&trace, n, tolerance)?,
        None => vec![],
    };
    let midpoint_distance = match h.schedule {
        Schedule::Elementary | Schedule::Twoqubit => Some(grassmannian_midpoint_check(&trace)?),
        _ => None,
    };
    let out = HolonomyOutput { schedule: h.schedule, report, per_loop, midpoint_distance };
    let record = ResultRecord::new("check-holonomy", cfg.clone(), Outputs::Holonomy(out));
    let path = write_record(&ov.out_dir(cfg), "holonomy.json", &record)?;
    Ok((record, vec![path]))
}

#[derive(Serialize)]
struct DfsCsvRow {
    kappa: f64,
    encoded_fidelity: f64,
    unencoded_fidelity: f64,
}

pub fn cmd_dfs(cfg: &RunConfig, ov: &Overrides) -> Result<(ResultRecord, Vec<PathBuf>)> {
    let d = &cfg.dfs;
    let seed = ov
        .seed
        .or(d.seed)
        .ok_or_else(|| CliError::Config("dfs needs a seed (config dfs.seed or --seed)".into()))?;
    if d.kappas.is_empty() {
        return Err(CliError::Config("dfs.kappas is empty".into()));
    }
    let enc = DfsEncoding::one_logical();
    let segments = default_logical_schedule(d.theta, d.phi)?;
    let encoded_state = encoded_plus_state();
    let contrast = unencoded_contrast_state();
    let mut rows = vec![];
    for &kappa in &d.kappas {
        let ch = d.channel(kappa);
        rows.push(DfsRow {
            kappa,
            encoded: apply_collective_dephasing(&segments, &ch, &enc, &encoded_state, seed)?,
            unencoded: dephasing_fidelity(&segments, &ch, enc.register(), &contrast, seed)?,
        });
    }
    let dir = ov.out_dir(cfg);
    let csv_rows: Vec<DfsCsvRow> = rows
        .iter()
        .map(|r| DfsCsvRow {
            kappa: r.kappa,
            encoded_fidelity: r.encoded.mean_fidelity,
            unencoded_fidelity: r.unencoded.mean_fidelity,
        })
        .collect();
    let csv_path = write_csv(&dir, "dfs.csv", &csv_rows)?;
    let mut input = cfg.clone();
    input.dfs.seed = Some(seed);
    let out = DfsOutput { seed, rows, csv: "dfs.csv".into() };
    let record = ResultRecord::new("dfs", input, Outputs::Dfs(out));
    let path = write_record(&dir, "dfs.json", &record)?;
    Ok((record, vec![path, csv_path]))
}
