//! Composite holonomic gates inside decoherence-free subspaces of ion arrays.
//!
//! Collective dephasing couples to `Σ_i σ_z^{(i)}`, whose eigenvalue depends
//! only on the Hamming weight of a product state. Encoding logical states in
//! equal-weight bitstrings therefore turns every collective phase kick into a
//! global phase on the code space.
//!
//! Three ions carry one logical qubit in `S₁ = span{|100⟩, |001⟩, |010⟩}`
//! (`0_L, 1_L, a_L`); six ions carry two logical qubits in `S₂`, each
//! register using the three-ion dictionary, plus two ancillas `|101000⟩` and
//! `|000101⟩`. Bitstrings are read with ion 1 as the most significant bit.
//!
//! Kicks are sampled as a unitary ensemble: each realization applies
//! `exp(−iφ Σσ_z/2)` with one angle `φ` for all ions. For a kick angle spread
//! `κ` and `m` kicks per gate, a uniform distribution gives an ensemble
//! coherence `(sin κ/κ)^m` between states whose weights differ by one, which
//! maps to an effective pure-dephasing rate `Γ` through
//! `e^{−ΓT} = (sin κ/κ)^m` over the gate time `T`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{cis, ComplexMatrix, ComplexVector, C64, ONE, ZERO};
use crate::qutrit::{ErrorModel, PulsePair};
use crate::twoqubit::TwoQubitErrorModel;

/// Product-state register of two-level ions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IonRegister {
    n_ions: usize,
}

impl IonRegister {
    pub fn new(n_ions: usize) -> Result<Self> {
        match n_ions {
            3 | 6 => Ok(Self { n_ions }),
            n => invalid(format!("supported registers have 3 or 6 ions, got {n}")),
        }
    }

    pub fn n_ions(&self) -> usize {
        self.n_ions
    }

    pub fn dim(&self) -> usize {
        1 << self.n_ions
    }

    /// Basis index of a bitstring such as `"100"`.
    pub fn index_of(&self, bits: &str) -> Result<usize> {
        if bits.len() != self.n_ions || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return invalid(format!("{bits:?} is not a {}-ion bitstring", self.n_ions));
        }
        Ok(usize::from_str_radix(bits, 2).expect("validated binary digits"))
    }

    pub fn bitstring(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.n_ions)
    }

    pub fn weight(&self, index: usize) -> u32 {
        index.count_ones()
    }

    /// Eigenvalue of `Σ_i σ_z^{(i)}` on a basis state (`σ_z|0⟩ = +|0⟩`).
    pub fn collective_z(&self, index: usize) -> f64 {
        self.n_ions as f64 - 2.0 * self.weight(index) as f64
    }

    /// Diagonal of `exp(−iφ Σσ_z/2)`.
    pub fn collective_kick(&self, phi: f64) -> Vec<C64> {
        (0..self.dim())
            .map(|i| cis(-phi * self.collective_z(i) / 2.0))
            .collect()
    }
}

/// Named logical states of a decoherence-free code.
#[derive(Clone, Debug, PartialEq)]
pub struct DfsEncoding {
    register: IonRegister,
    labels: Vec<(&'static str, usize)>,
}

impl DfsEncoding {
    /// `0_L = |100⟩, 1_L = |001⟩, a_L = |010⟩`.
    pub fn one_logical() -> Self {
        Self::build(3, &[("0", "100"), ("1", "001"), ("a", "010")])
    }

    /// `00_L … 11_L` as tensor products of the three-ion code, plus
    /// `a1_L = |101000⟩`, `a2_L = |000101⟩`.
    pub fn two_logical() -> Self {
        Self::build(
            6,
            &[
                ("00", "100100"),
                ("01", "100001"),
                ("10", "001100"),
                ("11", "001001"),
                ("a1", "101000"),
                ("a2", "000101"),
            ],
        )
    }

    fn build(n: usize, table: &[(&'static str, &str)]) -> Self {
        let register = IonRegister::new(n).expect("fixed register sizes");
        let labels = table
            .iter()
            .map(|(name, bits)| (*name, register.index_of(bits).expect("fixed bitstrings")))
            .collect();
        Self { register, labels }
    }

    pub fn register(&self) -> IonRegister {
        self.register
    }

    pub fn labels(&self) -> &[(&'static str, usize)] {
        &self.labels
    }

    pub fn indices(&self) -> Vec<usize> {
        self.labels.iter().map(|&(_, i)| i).collect()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, i)| i)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("no logical state {name:?}")))
    }

    pub fn is_one_logical(&self) -> bool {
        self.register.n_ions() == 3
    }

    /// Hamming weights of the encoded basis states are all equal.
    pub fn equal_weight(&self) -> bool {
        let w: Vec<u32> = self.labels.iter().map(|&(_, i)| self.register.weight(i)).collect();
        w.windows(2).all(|p| p[0] == p[1])
    }

    /// Register state `Σ amp |label⟩`.
    pub fn logical_state(&self, amplitudes: &[(&str, C64)]) -> Result<ComplexVector> {
        let mut v = vec![ZERO; self.register.dim()];
        for &(name, amp) in amplitudes {
            v[self.index(name)?] += amp;
        }
        ComplexVector::new(v)
    }

    pub fn projector(&self) -> ComplexMatrix {
        let dim = self.register.dim();
        let mut p = ComplexMatrix::zeros(dim, dim);
        for &(_, i) in &self.labels {
            p.set(i, i, ONE);
        }
        p
    }
}

/// `true` iff the component of `vector` outside the code space has norm ≤ `tol`.
pub fn dfs_membership_check(vector: &ComplexVector, encoding: &DfsEncoding, tol: f64) -> Result<bool> {
    if vector.dim() != encoding.register.dim() {
        return invalid(format!(
            "vector dimension {} does not match register dimension {}",
            vector.dim(),
            encoding.register.dim()
        ));
    }
    let inside = encoding.projector().apply(vector);
    Ok((vector - &inside).norm() <= tol)
}

fn add_coupling(h: &mut ComplexMatrix, to: usize, from: usize, amp: C64) {
    // amp |to⟩⟨from| + h.c.
    h.set(to, from, h.get(to, from) + amp);
    h.set(from, to, h.get(from, to) + amp.conj());
}

/// `(η²/δ)(|Ω₁₂|²e^{iφ₁₂}|a⟩⟨0|_L − |Ω₂₃|²e^{iφ₂₃}|a⟩⟨1|_L + h.c.)` on three ions.
pub fn h1_effective(
    omega12_sq: f64,
    omega23_sq: f64,
    phi12: f64,
    phi23: f64,
    coupling_prefactor: f64,
) -> ComplexMatrix {
    let enc = DfsEncoding::one_logical();
    let [zero, one, anc] = [0, 1, 2].map(|k| enc.labels[k].1);
    let mut h = ComplexMatrix::zeros(8, 8);
    add_coupling(&mut h, anc, zero, cis(phi12) * (coupling_prefactor * omega12_sq));
    add_coupling(&mut h, anc, one, -cis(phi23) * (coupling_prefactor * omega23_sq));
    h
}

/// `(η²/δ)[|Ω₃₄|²e^{iφ₃₄}(|a₁⟩⟨00| + |a₂⟩⟨11|) − |Ω₃₆|²e^{iφ₃₆}(|a₁⟩⟨01| + |a₂⟩⟨10|) + h.c.]`
/// on six ions.
pub fn h2_effective(
    omega34_sq: f64,
    omega36_sq: f64,
    phi34: f64,
    phi36: f64,
    coupling_prefactor: f64,
) -> ComplexMatrix {
    let enc = DfsEncoding::two_logical();
    let ix = |n: &str| enc.index(n).expect("fixed labels");
    let a34 = cis(phi34) * (coupling_prefactor * omega34_sq);
    let a36 = -cis(phi36) * (coupling_prefactor * omega36_sq);
    let mut h = ComplexMatrix::zeros(64, 64);
    add_coupling(&mut h, ix("a1"), ix("00"), a34);
    add_coupling(&mut h, ix("a2"), ix("11"), a34);
    add_coupling(&mut h, ix("a1"), ix("01"), a36);
    add_coupling(&mut h, ix("a2"), ix("10"), a36);
    h
}

/// Laser settings `(|Ω|²_first, |Ω|²_second, φ_first, φ_second)` for which the
/// effective Hamiltonian acts on its three-level block exactly as
/// `(1+ε₀)cos(θ/2)e^{iφ₀}|0⟩⟨e| + (1+ε₁)sin(θ/2)e^{i(φ₀+φ)}|1⟩⟨e| + h.c.`
///
/// The error fractions apply to the effective couplings.
pub fn effective_couplings(
    theta: f64,
    phi: f64,
    phi0: f64,
    model: &ErrorModel,
    coupling_prefactor: f64,
) -> Result<(f64, f64, f64, f64)> {
    if !(coupling_prefactor > 0.0) {
        return invalid(format!("coupling prefactor must be positive, got {coupling_prefactor}"));
    }
    model.validate()?;
    let (s, c) = (theta / 2.0).sin_cos();
    let c0 = cis(phi0) * ((1.0 + model.eps0) * c);
    let c1 = cis(phi0 + phi) * ((1.0 + model.eps1) * s);
    let phase = |z: C64| if z.norm() > 0.0 { z.arg() } else { 0.0 };
    // coefficient of |0⟩⟨a| is p|Ω|²e^{−iφ₁₂}; of |1⟩⟨a| is −p|Ω|²e^{−iφ₂₃}
    Ok((
        c0.norm() / coupling_prefactor,
        c1.norm() / coupling_prefactor,
        -phase(c0),
        -phase(-c1),
    ))
}

fn composite_phases(theta: f64, pulses: &PulsePair) -> Vec<(f64, f64)> {
    // time order: U_{π−θ} twice, then U_θ twice
    let mut out = vec![];
    for t in [PI - theta, PI - theta, theta, theta] {
        for seg in pulses.segments() {
            out.push((t, seg.phi0));
        }
    }
    out
}

fn segment_unitaries(
    theta: f64,
    phi: f64,
    model: Option<&ErrorModel>,
    prefactor: f64,
    pulses: &PulsePair,
    hamiltonian: impl Fn(f64, f64, f64, f64, f64) -> ComplexMatrix,
) -> Result<Vec<ComplexMatrix>> {
    let model = model.copied().unwrap_or_default();
    let segs = pulses.segments();
    composite_phases(theta, pulses)
        .into_iter()
        .enumerate()
        .map(|(k, (t, phi0))| {
            let (a, b, pa, pb) = effective_couplings(t, phi, phi0, &model, prefactor)?;
            segs[k % 2].propagate(&hamiltonian(a, b, pa, pb, prefactor))
        })
        .collect()
}

/// Segment propagators of the four-pulse composite on the three-ion register,
/// in time order.
pub fn logical_composite_segments(
    encoding: &DfsEncoding,
    theta: f64,
    phi: f64,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<Vec<ComplexMatrix>> {
    if !encoding.is_one_logical() {
        return invalid("logical composite gate needs the three-ion encoding");
    }
    segment_unitaries(theta, phi, model, 1.0, pulses, h1_effective)
}

/// The four-pulse composite gate driven through the three-ion effective
/// Hamiltonian; an 8×8 unitary acting on `S₁` as the qutrit composite.
pub fn logical_composite_gate(
    encoding: &DfsEncoding,
    theta: f64,
    phi: f64,
    model: Option<&ErrorModel>,
) -> Result<ComplexMatrix> {
    let segs = logical_composite_segments(encoding, theta, phi, model, &PulsePair::default())?;
    Ok(product(&segs, 8))
}

/// Segment propagators of the four-pulse composite driven through the six-ion
/// Hamiltonian, in time order. Both three-level blocks are driven at once.
pub fn two_logical_composite_segments(
    encoding: &DfsEncoding,
    theta: f64,
    phi: f64,
    model: Option<&ErrorModel>,
    pulses: &PulsePair,
) -> Result<Vec<ComplexMatrix>> {
    if encoding.register().n_ions() != 6 {
        return invalid("two-logical composite gate needs the six-ion encoding");
    }
    segment_unitaries(theta, phi, model, 1.0, pulses, h2_effective)
}

/// 64×64 propagator of the four-pulse composite on the six-ion register.
///
/// On the logical qubits it acts as `|0⟩⟨0| ⊗ R + |1⟩⟨1| ⊗ X R X` with
/// `R = exp[i(π−2θ)σ_{φ+π/2}]`, because the second block pairs `11_L` with the
/// role of `0_L`.
pub fn two_logical_composite_gate(
    encoding: &DfsEncoding,
    theta: f64,
    phi: f64,
    model: Option<&ErrorModel>,
) -> Result<ComplexMatrix> {
    let segs = two_logical_composite_segments(encoding, theta, phi, model, &PulsePair::default())?;
    Ok(product(&segs, 64))
}

/// Which six-ion coupling drives [`two_logical_pair_gate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCoupling {
    /// `Ω₃₄`: pairs `00_L` with `a1_L` and `11_L` with `a2_L`.
    Omega34,
    /// `Ω₃₆`: pairs `01_L` with `a1_L` and `10_L` with `a2_L`.
    Omega36,
}

/// The two-loop gate `U U` of the five-level two-qubit model, driven through
/// the six-ion Hamiltonian with one coupling switched off.
///
/// Both blocks are driven at once, so the logical action is
/// `diag(−1, 1, 1, −1)` for [`PairCoupling::Omega34`] and `diag(1, −1, −1, 1)`
/// for [`PairCoupling::Omega36`]. Both are products of one-qubit `Z`
/// rotations up to a global phase.
pub fn two_logical_pair_gate(
    encoding: &DfsEncoding,
    coupling: PairCoupling,
    model: Option<&TwoQubitErrorModel>,
) -> Result<ComplexMatrix> {
    if encoding.register().n_ions() != 6 {
        return invalid("two-logical pair gate needs the six-ion encoding");
    }
    let scale = match model {
        None => 1.0,
        Some(m) => {
            m.validate()?;
            1.0 + m.eps_jk
        }
    };
    let pulses = PulsePair::default();
    let mut segs = vec![];
    for seg in pulses.segments() {
        // phases chosen so each block sees e^{iφ₀}|jk⟩⟨a| + h.c.
        let h = match coupling {
            PairCoupling::Omega34 => h2_effective(scale, 0.0, -seg.phi0, 0.0, 1.0),
            PairCoupling::Omega36 => h2_effective(0.0, scale, 0.0, PI - seg.phi0, 1.0),
        };
        segs.push(seg.propagate(&h)?);
    }
    let u = product(&segs, 64);
    Ok(&u * &u)
}

fn product(segments: &[ComplexMatrix], dim: usize) -> ComplexMatrix {
    segments
        .iter()
        .fold(ComplexMatrix::identity(dim), |u, s| s * &u)
}

/// Restriction of a register operator to the code space, in label order.
pub fn logical_block(gate: &ComplexMatrix, encoding: &DfsEncoding) -> ComplexMatrix {
    gate.restrict(&encoding.indices())
}

/// Distribution of the collective kick angle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KickDistribution {
    /// Uniform on `[−κ, κ]`.
    #[default]
    Uniform,
    /// Normal with standard deviation `κ`.
    Gaussian,
}

/// Where kicks are interleaved in a gate schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KickPlacement {
    /// After every segment, the last one at schedule end.
    #[default]
    AfterEachSegment,
    EndOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingChannel {
    pub distribution: KickDistribution,
    pub kappa: f64,
    pub n_samples: usize,
    pub placement: KickPlacement,
}

impl DephasingChannel {
    pub fn uniform(kappa: f64, n_samples: usize) -> Self {
        Self {
            distribution: KickDistribution::Uniform,
            kappa,
            n_samples,
            placement: KickPlacement::AfterEachSegment,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return invalid(format!("kappa must be finite and non-negative, got {}", self.kappa));
        }
        if self.n_samples == 0 {
            return invalid("n_samples must be positive");
        }
        Ok(())
    }

    pub fn kick_count(&self, segments: usize) -> usize {
        match self.placement {
            KickPlacement::AfterEachSegment => segments,
            KickPlacement::EndOnly => 1,
        }
    }
}

/// Ensemble statistics of state fidelity under collective kicks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingOutcome {
    pub mean_fidelity: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub min_fidelity: f64,
    pub max_fidelity: f64,
    pub n_samples: usize,
    pub kicks_per_run: usize,
}

/// Average state fidelity of a kicked gate run against the kick-free run, for
/// an input state inside the code space.
pub fn apply_collective_dephasing(
    segments: &[ComplexMatrix],
    channel: &DephasingChannel,
    encoding: &DfsEncoding,
    psi0: &ComplexVector,
    seed: u64,
) -> Result<DephasingOutcome> {
    if !dfs_membership_check(psi0, encoding, 1e-10)? {
        return invalid("input state is not in the decoherence-free subspace");
    }
    dephasing_fidelity(segments, channel, encoding.register(), psi0, seed)
}

/// Same ensemble average without the code-space check, for contrast runs on
/// unencoded inputs.
pub fn dephasing_fidelity(
    segments: &[ComplexMatrix],
    channel: &DephasingChannel,
    register: IonRegister,
    psi0: &ComplexVector,
    seed: u64,
) -> Result<DephasingOutcome> {
    channel.validate()?;
    let dim = register.dim();
    if psi0.dim() != dim || segments.iter().any(|s| s.rows() != dim || !s.is_square()) {
        return invalid("state and segments must match the register dimension");
    }
    let ideal = segments.iter().fold(psi0.clone(), |v, s| s.apply(&v));
    let kicks = channel.kick_count(segments.len());

    let fidelities: Vec<f64> = (0..channel.n_samples)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(run as u64);
            let angles = sample_kicks(channel, kicks, &mut rng);
            let kicked = evolve_kicked(segments, channel.placement, &register, psi0, &angles);
            ideal.inner(&kicked).norm_sqr()
        })
        .collect();

    let n = fidelities.len() as f64;
    let mean = fidelities.iter().sum::<f64>() / n;
    let var = if fidelities.len() > 1 {
        fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(DephasingOutcome {
        mean_fidelity: mean,
        std_error: (var / n).sqrt(),
        min_fidelity: fidelities.iter().copied().fold(f64::INFINITY, f64::min),
        max_fidelity: fidelities.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        n_samples: channel.n_samples,
        kicks_per_run: kicks,
    })
}

fn sample_kicks(channel: &DephasingChannel, count: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match channel.distribution {
        KickDistribution::Uniform => {
            let d = Uniform::new_inclusive(-channel.kappa, channel.kappa).expect("validated kappa");
            (0..count).map(|_| d.sample(rng)).collect()
        }
        KickDistribution::Gaussian => {
            let d = Normal::new(0.0, channel.kappa).expect("validated kappa");
            (0..count).map(|_| d.sample(rng)).collect()
        }
    }
}

fn kick(register: &IonRegister, v: &ComplexVector, phi: f64) -> ComplexVector {
    let phases = register.collective_kick(phi);
    let entries = v.entries().iter().zip(&phases).map(|(a, p)| a * p).collect();
    ComplexVector::new(entries).expect("nonempty")
}

fn evolve_kicked(
    segments: &[ComplexMatrix],
    placement: KickPlacement,
    register: &IonRegister,
    psi0: &ComplexVector,
    angles: &[f64],
) -> ComplexVector {
    let mut v = psi0.clone();
    match placement {
        KickPlacement::AfterEachSegment => {
            for (s, &phi) in segments.iter().zip(angles) {
                v = kick(register, &s.apply(&v), phi);
            }
        }
        KickPlacement::EndOnly => {
            for s in segments {
                v = s.apply(&v);
            }
            v = kick(register, &v, angles[0]);
        }
    }
    v
}

/// Kick-free logical composite run, as segments, for the three-ion code.
pub fn default_logical_schedule(theta: f64, phi: f64) -> Result<Vec<ComplexMatrix>> {
    logical_composite_segments(&DfsEncoding::one_logical(), theta, phi, None, &PulsePair::default())
}

/// `(|0_L⟩ + |1_L⟩)/√2` on three ions.
pub fn encoded_plus_state() -> ComplexVector {
    let a = C64::new(1.0 / 2f64.sqrt(), 0.0);
    DfsEncoding::one_logical()
        .logical_state(&[("0", a), ("1", a)])
        .expect("fixed labels")
}

/// `(|000⟩ + |100⟩)/√2`: a superposition across Hamming weights.
pub fn unencoded_contrast_state() -> ComplexVector {
    let reg = IonRegister::new(3).expect("three ions");
    let a = C64::new(1.0 / 2f64.sqrt(), 0.0);
    let mut v = vec![ZERO; reg.dim()];
    v[reg.index_of("000").expect("valid")] = a;
    v[reg.index_of("100").expect("valid")] = a;
    ComplexVector::new(v).expect("nonempty")
}
