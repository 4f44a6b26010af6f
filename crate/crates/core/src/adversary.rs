//! Eavesdropper models and the statistics harness that measures the
//! detection error rates they induce.
//!
//! Two families are built in:
//!
//! - measure-resend: Eve measures the in-transit particle in Z or X and
//!   forwards the observed eigenstate. Following the source analysis, her
//!   measurement classicalizes the whole triplet in her basis, so the
//!   collapsed register is a product of Z (resp. X) eigenstates. This is
//!   what yields the 25% / 37.5% total error rates.
//! - entangle-and-measure: Eve couples a fresh ancilla to the particle with
//!   a two-parameter unitary probe and reads the ancilla out. The probe's
//!   internal states are chosen so the induced detection error rate equals
//!   β² in both check bases, which realizes every rate in [0, 1/2].

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::ghz::{ghz_state, DetectionBasis, GhzCode, GhzLabel};
use crate::statevec::{Amplitude, OrthonormalBasis, StateVector};
use crate::swapping::{BellLabel, BellTriple, DecodeTable};
use crate::{Error, Result};

/// Which transmission leg Eve taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttackStage {
    GroupA,
    GroupB,
}

impl AttackStage {
    /// Triplet qubit of the particle in transit during this stage.
    pub fn particle(self) -> usize {
        match self {
            AttackStage::GroupA => 0,
            AttackStage::GroupB => 1,
        }
    }
}

impl fmt::Display for AttackStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackStage::GroupA => "A",
            AttackStage::GroupB => "B",
        })
    }
}

/// An eavesdropping strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EveStrategy {
    MeasureResendZ,
    MeasureResendX,
    /// Pick Z or X uniformly at every interception.
    MeasureResendRandom,
    /// Unitary probe with real amplitudes (α, β), α² + β² = 1.
    EntangleMeasure { alpha: f64, beta: f64 },
}

impl EveStrategy {
    /// Probe strategy from the induced error rate β² ∈ [0, 1/2].
    pub fn probe_from_beta_sqr(beta_sqr: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&beta_sqr) {
            return Err(Error::InvalidStrategy(format!(
                "probe requires β² in [0, 0.5], got {beta_sqr}"
            )));
        }
        Ok(EveStrategy::EntangleMeasure {
            alpha: (1.0 - beta_sqr).sqrt(),
            beta: beta_sqr.sqrt(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if let EveStrategy::EntangleMeasure { alpha, beta } = *self {
            let norm = alpha * alpha + beta * beta;
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidStrategy(format!(
                    "α² + β² = {norm}, must be 1"
                )));
            }
            if beta * beta > 0.5 + 1e-12 {
                return Err(Error::InvalidStrategy(
                    "probe realizes only β² ≤ 1/2".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            EveStrategy::MeasureResendZ => "measure-resend-z".into(),
            EveStrategy::MeasureResendX => "measure-resend-x".into(),
            EveStrategy::MeasureResendRandom => "measure-resend-random".into(),
            EveStrategy::EntangleMeasure { beta, .. } => {
                format!("probe(β²={:.3})", beta * beta)
            }
        }
    }
}

impl fmt::Display for EveStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// What Eve learned from one interception.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveObservation {
    /// Basis she measured in and the eigenstate she resent for the attacked
    /// particle.
    Resend { basis: DetectionBasis, flag: bool },
    /// Z readout of her probe ancilla.
    ProbeBit(bool),
}

/// Eve's side of one interception: the probe/measurement record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeRegister {
    pub particle: usize,
    pub observation: EveObservation,
}

/// Attack one in-transit particle of a triplet register. Returns the state
/// the legitimate parties continue with plus Eve's record.
pub fn intercept<R: Rng>(
    state: &StateVector,
    particle: usize,
    strategy: EveStrategy,
    rng: &mut R,
) -> Result<(StateVector, ProbeRegister)> {
    strategy.validate()?;
    match strategy {
        EveStrategy::MeasureResendZ => measure_resend(state, particle, DetectionBasis::Z, rng),
        EveStrategy::MeasureResendX => measure_resend(state, particle, DetectionBasis::X, rng),
        EveStrategy::MeasureResendRandom => {
            let basis = if rng.gen_bool(0.5) {
                DetectionBasis::Z
            } else {
                DetectionBasis::X
            };
            measure_resend(state, particle, basis, rng)
        }
        EveStrategy::EntangleMeasure { alpha, beta } => {
            entangle_measure(state, particle, alpha, beta, rng)
        }
    }
}

/// The two full-triplet product bases, built once.
fn triplet_basis(basis: DetectionBasis) -> &'static OrthonormalBasis {
    static Z3: OnceLock<OrthonormalBasis> = OnceLock::new();
    static X3: OnceLock<OrthonormalBasis> = OnceLock::new();
    match basis {
        DetectionBasis::Z => Z3.get_or_init(|| OrthonormalBasis::z_on(&[0, 1, 2]).expect("valid")),
        DetectionBasis::X => X3.get_or_init(|| OrthonormalBasis::x_on(&[0, 1, 2]).expect("valid")),
    }
}

fn measure_resend<R: Rng>(
    state: &StateVector,
    particle: usize,
    basis: DetectionBasis,
    rng: &mut R,
) -> Result<(StateVector, ProbeRegister)> {
    if state.num_qubits() != 3 {
        return Err(Error::StoreMisuse(format!(
            "intercept expects a 3-qubit triplet register, got {} qubits",
            state.num_qubits()
        )));
    }
    let full = triplet_basis(basis);
    let rec = state.measure(full, rng)?;
    let flag = (rec.outcome_index >> (state.num_qubits() - 1 - particle)) & 1 == 1;
    Ok((
        rec.post_state,
        ProbeRegister {
            particle,
            observation: EveObservation::Resend { basis, flag },
        },
    ))
}

fn entangle_measure<R: Rng>(
    state: &StateVector,
    particle: usize,
    alpha: f64,
    beta: f64,
    rng: &mut R,
) -> Result<(StateVector, ProbeRegister)> {
    let ancilla_state = StateVector::zero(1)?;
    let joint = state.tensor(&ancilla_state)?;
    let ancilla = joint.num_qubits() - 1;
    let probed = joint.apply_two_qubit(particle, ancilla, &probe_unitary(alpha, beta))?;
    // Eve reads her ancilla out immediately; sampling (not post-selecting)
    // leaves the particles' statistics untouched, so the measured ancilla can
    // be dropped from the register.
    let z = OrthonormalBasis::z_on(&[ancilla])?;
    let rec = probed.measure(&z, rng)?;
    let reduced = rec.post_state.drop_qubit(ancilla, rec.outcome_index)?;
    Ok((
        reduced,
        ProbeRegister {
            particle,
            observation: EveObservation::ProbeBit(rec.outcome_index == 1),
        },
    ))
}

/// Eve's probe as a 4×4 unitary on (particle, ancilla), ancilla starting in
/// |0⟩:
///
///   U|0,0⟩ = α|0⟩|ε00⟩ + β|1⟩|ε01⟩,   U|1,0⟩ = β|0⟩|ε10⟩ + α|1⟩|ε11⟩,
///
/// with ε01 = ε10 = |1⟩ and ε00/ε11 = cosθ|0⟩ ± sinθ|1⟩ where sinθ = β/α.
/// The ε overlaps make the induced error rate equal β² in the X check as
/// well as the Z check.
pub fn probe_unitary(alpha: f64, beta: f64) -> [[Amplitude; 4]; 4] {
    let c = |re: f64| Complex64::new(re, 0.0);
    let zero = c(0.0);
    let mut cols: [[f64; 4]; 4] = [[0.0; 4]; 4];
    let sin_theta = if alpha > 0.0 { beta / alpha } else { 0.0 };
    let cos_theta = (1.0 - sin_theta * sin_theta).max(0.0).sqrt();
    // Basis order |particle, ancilla⟩ = |00⟩, |01⟩, |10⟩, |11⟩.
    cols[0] = [alpha * cos_theta, alpha * sin_theta, 0.0, beta];
    cols[2] = [0.0, beta, alpha * cos_theta, -alpha * sin_theta];
    // The ancilla never starts in |1⟩, so complete columns 1 and 3 with any
    // orthonormal extension; pick deterministically by best residual.
    for free in [1usize, 3] {
        let taken: Vec<[f64; 4]> = (0..4)
            .filter(|&j| j != free && cols[j].iter().any(|&x| x != 0.0))
            .map(|j| cols[j])
            .collect();
        let mut best: Option<[f64; 4]> = None;
        let mut best_norm = -1.0f64;
        for cand in 0..4 {
            let mut v = [0.0f64; 4];
            v[cand] = 1.0;
            for t in &taken {
                let dot: f64 = (0..4).map(|r| t[r] * v[r]).sum();
                for r in 0..4 {
                    v[r] -= dot * t[r];
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = Some(v);
            }
        }
        let mut v = best.expect("four candidates");
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols[free] = v;
    }
    let mut op = [[zero; 4]; 4];
    for (col, col_vals) in cols.iter().enumerate() {
        for (row, &val) in col_vals.iter().enumerate() {
            op[row][col] = c(val);
        }
    }
    op
}

/// Closed-form detection error rate a strategy induces (averaged over
/// Alice's uniform Z/X basis choice).
pub fn theoretical_error(strategy: EveStrategy, _stage: AttackStage) -> f64 {
    match strategy {
        EveStrategy::MeasureResendZ => 0.25,
        EveStrategy::MeasureResendX => 0.375,
        EveStrategy::MeasureResendRandom => 0.3125,
        EveStrategy::EntangleMeasure { beta, .. } => beta * beta,
    }
}

/// Detection error rate computed exactly through the state engine, with no
/// recourse to the closed forms above. Used as the oracle for
/// [`theoretical_error`] and the Monte Carlo harness.
pub fn analytic_error(strategy: EveStrategy, stage: AttackStage) -> Result<f64> {
    strategy.validate()?;
    let particle = stage.particle();
    let psi = ghz_state(GhzLabel::new(1)?);
    // Enumerate Eve's possible post-attack states with their probabilities.
    let branches: Vec<(f64, StateVector)> = match strategy {
        EveStrategy::MeasureResendZ => collapse_branches(&psi, DetectionBasis::Z)?,
        EveStrategy::MeasureResendX => collapse_branches(&psi, DetectionBasis::X)?,
        EveStrategy::MeasureResendRandom => {
            let mut out = Vec::new();
            for basis in [DetectionBasis::Z, DetectionBasis::X] {
                for (p, s) in collapse_branches(&psi, basis)? {
                    out.push((0.5 * p, s));
                }
            }
            out
        }
        EveStrategy::EntangleMeasure { alpha, beta } => {
            let joint = psi.tensor(&StateVector::zero(1)?)?;
            let probed = joint.apply_two_qubit(particle, 3, &probe_unitary(alpha, beta))?;
            vec![(1.0, probed)]
        }
    };
    let mut error = 0.0;
    for check in [DetectionBasis::Z, DetectionBasis::X] {
        let basis = match check {
            DetectionBasis::Z => OrthonormalBasis::z_on(&[0, 1, 2])?,
            DetectionBasis::X => OrthonormalBasis::x_on(&[0, 1, 2])?,
        };
        for (weight, state) in &branches {
            for (idx, p) in state.outcome_distribution(&basis)? {
                if p <= 0.0 {
                    continue;
                }
                let consistent = match check {
                    DetectionBasis::Z => idx == 0 || idx == 7,
                    DetectionBasis::X => (idx as u32).count_ones() % 2 == 0,
                };
                if !consistent {
                    error += 0.5 * weight * p;
                }
            }
        }
    }
    Ok(error)
}

/// All full-register collapse branches of a measure-resend attack.
fn collapse_branches(psi: &StateVector, basis: DetectionBasis) -> Result<Vec<(f64, StateVector)>> {
    let qubits: Vec<usize> = (0..psi.num_qubits()).collect();
    let full = match basis {
        DetectionBasis::Z => OrthonormalBasis::z_on(&qubits)?,
        DetectionBasis::X => OrthonormalBasis::x_on(&qubits)?,
    };
    let mut out = Vec::new();
    for (idx, p) in psi.outcome_distribution(&full)? {
        if p > 1e-15 {
            out.push((p, full.vectors()[idx].clone()));
        }
    }
    Ok(out)
}

/// Outcome of a Monte Carlo attack experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackStats {
    pub strategy: String,
    pub stage: AttackStage,
    pub trials: usize,
    pub mismatches: usize,
    pub empirical_rate: f64,
    pub theoretical_rate: f64,
    /// Binomial standard error at the theoretical rate.
    pub std_error: f64,
}

impl AttackStats {
    /// |empirical − theoretical| in units of the binomial standard error.
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            if self.empirical_rate == self.theoretical_rate {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.empirical_rate - self.theoretical_rate).abs() / self.std_error
        }
    }
}

/// Simulate independent detection samples under attack: per trial a fresh
/// initial triplet, Eve on the stage's in-transit particle, Alice's basis
/// uniform over {Z, X}, one full consistency check. Trials are seeded
/// individually (`seed + index`), so aggregation is order-independent.
pub fn run_attack_experiment(
    strategy: EveStrategy,
    stage: AttackStage,
    trials: usize,
    seed: u64,
) -> Result<AttackStats> {
    strategy.validate()?;
    let psi1 = ghz_state(GhzLabel::new(1)?);
    let mut mismatches = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let (state, _) = intercept(&psi1, stage.particle(), strategy, &mut rng)?;
        let check = if rng.gen_bool(0.5) {
            DetectionBasis::Z
        } else {
            DetectionBasis::X
        };
        if !sample_check(&state, check, &mut rng)? {
            mismatches += 1;
        }
    }
    let theoretical = theoretical_error(strategy, stage);
    Ok(AttackStats {
        strategy: strategy.name(),
        stage,
        trials,
        mismatches,
        empirical_rate: mismatches as f64 / trials as f64,
        theoretical_rate: theoretical,
        std_error: (theoretical * (1.0 - theoretical) / trials as f64).sqrt(),
    })
}

/// Measure all three triplet particles in the check basis and apply the
/// consistency predicate.
fn sample_check<R: Rng>(state: &StateVector, check: DetectionBasis, rng: &mut R) -> Result<bool> {
    let basis = triplet_basis(check);
    let rec = state.measure(basis, rng)?;
    Ok(match check {
        DetectionBasis::Z => rec.outcome_index == 0 || rec.outcome_index == 7,
        DetectionBasis::X => (rec.outcome_index as u32).count_ones() % 2 == 0,
    })
}

/// What Eve can conclude from the decode table when she knows m and the A-
/// and B-pair Bell outcomes but not the C pair.
#[derive(Debug, Clone)]
pub struct LeakAttackResult {
    /// Secret each possible C outcome would imply.
    pub per_c_outcome: Vec<(BellLabel, GhzCode)>,
    /// Deduplicated, sorted set of secrets consistent with Eve's view.
    pub consistent_secrets: Vec<GhzCode>,
}

impl LeakAttackResult {
    pub fn is_ambiguous(&self) -> bool {
        self.consistent_secrets.len() > 1
    }
}

/// Worst-case concession: Eve holds m plus the Bell outcomes of the two
/// travel-particle pairs. Enumerates the withheld C outcome through the
/// decode table.
pub fn leak_m_attack(a: BellLabel, b: BellLabel, table: &DecodeTable) -> LeakAttackResult {
    let per_c_outcome: Vec<(BellLabel, GhzCode)> = BellLabel::ALL
        .iter()
        .map(|&c| (c, table.decode(BellTriple::new(a, b, c))))
        .collect();
    let mut consistent_secrets: Vec<GhzCode> =
        per_c_outcome.iter().map(|&(_, code)| code).collect();
    consistent_secrets.sort();
    consistent_secrets.dedup();
    LeakAttackResult {
        per_c_outcome,
        consistent_secrets,
    }
}
