//! The eight-state GHZ alphabet, its dense-coding unitaries and 3-bit codes,
//! GHZ-basis measurement, and the Z/X detection-correlation predicate.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::statevec::{Amplitude, OrthonormalBasis, StateVector};
use crate::{Error, Result};

/// Label of one of the eight GHZ basis states, 1..=8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GhzLabel(u8);

impl GhzLabel {
    pub const ALL: [GhzLabel; 8] = [
        GhzLabel(1),
        GhzLabel(2),
        GhzLabel(3),
        GhzLabel(4),
        GhzLabel(5),
        GhzLabel(6),
        GhzLabel(7),
        GhzLabel(8),
    ];

    pub fn new(k: u8) -> Result<Self> {
        if (1..=8).contains(&k) {
            Ok(GhzLabel(k))
        } else {
            Err(Error::OutOfRange(k as u64, "GHZ label (1..=8)"))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for GhzLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ψ{}", self.0)
    }
}

/// A 3-bit information word, displayed MSB-first like "101".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GhzCode(u8);

impl GhzCode {
    pub fn new(bits: u8) -> Result<Self> {
        if bits < 8 {
            Ok(GhzCode(bits))
        } else {
            Err(Error::OutOfRange(bits as u64, "3-bit code (0..=7)"))
        }
    }

    pub fn all() -> impl Iterator<Item = GhzCode> {
        (0..8).map(GhzCode)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Parse a 3-character binary word such as "100".
    pub fn from_bit_str(s: &str) -> Result<Self> {
        if s.len() != 3 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::OutOfRange(0, "3-bit word like \"100\""));
        }
        Ok(GhzCode(u8::from_str_radix(s, 2).expect("validated")))
    }
}

impl std::ops::BitXor for GhzCode {
    type Output = GhzCode;
    fn bitxor(self, rhs: GhzCode) -> GhzCode {
        GhzCode(self.0 ^ rhs.0)
    }
}

impl fmt::Display for GhzCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:03b}", self.0)
    }
}

impl Serialize for GhzCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GhzCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        GhzCode::from_bit_str(&s).map_err(serde::de::Error::custom)
    }
}

/// The four single-particle operators of the coding scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliOp {
    Identity,
    SigmaZ,
    SigmaX,
    /// iσy = |0⟩⟨1| − |1⟩⟨0|, kept as one real matrix so no separate σy
    /// sign convention ever enters.
    ISigmaY,
}

impl PauliOp {
    pub fn matrix(self) -> [[Amplitude; 2]; 2] {
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            PauliOp::Identity => [[c(1.0), c(0.0)], [c(0.0), c(1.0)]],
            PauliOp::SigmaZ => [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
            PauliOp::SigmaX => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
            PauliOp::ISigmaY => [[c(0.0), c(1.0)], [c(-1.0), c(0.0)]],
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliOp::Identity => "I",
            PauliOp::SigmaZ => "σz",
            PauliOp::SigmaX => "σx",
            PauliOp::ISigmaY => "iσy",
        };
        f.write_str(s)
    }
}

/// The pair of single-particle operators U_k applies to particles A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliPair {
    pub on_particle1: PauliOp,
    pub on_particle2: PauliOp,
}

/// The k-th GHZ basis state, amplitude-exact:
///
/// Ψ1,2 = (|000⟩ ± |111⟩)/√2, Ψ3,4 = (|100⟩ ± |011⟩)/√2,
/// Ψ5,6 = (|010⟩ ± |101⟩)/√2, Ψ7,8 = (|110⟩ ± |001⟩)/√2.
pub fn ghz_state(k: GhzLabel) -> StateVector {
    let (hi, lo) = match k.value() {
        1 | 2 => (0b000, 0b111),
        3 | 4 => (0b100, 0b011),
        5 | 6 => (0b010, 0b101),
        7 | 8 => (0b110, 0b001),
        _ => unreachable!(),
    };
    let sign = if k.value() % 2 == 1 { 1.0 } else { -1.0 };
    StateVector::superposition(3, &[(hi, 1.0), (lo, sign)]).expect("fixed two-term ket")
}

/// The operator pair realizing U_k.
pub fn unitary_for(k: GhzLabel) -> PauliPair {
    use PauliOp::*;
    let (a, b) = match k.value() {
        1 => (SigmaZ, SigmaZ),
        2 => (Identity, SigmaZ),
        3 => (ISigmaY, SigmaZ),
        4 => (SigmaX, SigmaZ),
        5 => (Identity, SigmaX),
        6 => (SigmaZ, SigmaX),
        7 => (SigmaX, SigmaX),
        8 => (ISigmaY, SigmaX),
        _ => unreachable!(),
    };
    PauliPair {
        on_particle1: a,
        on_particle2: b,
    }
}

/// Dense-code `k` onto a held triplet by applying U_k's pair to the two
/// particle qubits. Starting from Ψ1 this lands on Ψk up to a global phase.
pub fn encode(
    state: &StateVector,
    k: GhzLabel,
    particle1: usize,
    particle2: usize,
) -> Result<StateVector> {
    if particle1 == particle2 {
        return Err(Error::QubitOutOfRange {
            qubit: particle2,
            num_qubits: state.num_qubits(),
        });
    }
    let pair = unitary_for(k);
    state
        .apply_single_qubit(particle1, &pair.on_particle1.matrix())?
        .apply_single_qubit(particle2, &pair.on_particle2.matrix())
}

/// U_k ↦ its 3-bit code: U_1 → 000 … U_8 → 111.
pub fn code_of(k: GhzLabel) -> GhzCode {
    GhzCode(k.value() - 1)
}

/// Inverse of [`code_of`].
pub fn label_of(code: GhzCode) -> GhzLabel {
    GhzLabel(code.bits() + 1)
}

/// The complete GHZ basis over triplet qubits (A, B, C) = (0, 1, 2).
/// Outcome index k−1 corresponds to Ψk.
pub fn ghz_basis() -> OrthonormalBasis {
    ghz_basis_on([0, 1, 2])
}

/// GHZ basis over three arbitrary qubits of a larger register.
pub fn ghz_basis_on(qubits: [usize; 3]) -> OrthonormalBasis {
    let vectors = GhzLabel::ALL.iter().map(|&k| ghz_state(k)).collect();
    OrthonormalBasis::new(qubits.to_vec(), vectors).expect("GHZ states are orthonormal")
}

/// Eavesdropping-check measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetectionBasis {
    Z,
    X,
}

/// One published single-particle detection result.
///
/// In Z, `flag` distinguishes |0⟩ (false) from |1⟩ (true); in X it
/// distinguishes |+⟩ (false) from |−⟩ (true).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectionOutcome {
    pub basis: DetectionBasis,
    pub flag: bool,
}

impl DetectionOutcome {
    pub fn from_index(basis: DetectionBasis, outcome_index: usize) -> Self {
        DetectionOutcome {
            basis,
            flag: outcome_index != 0,
        }
    }
}

impl fmt::Display for DetectionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.basis, self.flag) {
            (DetectionBasis::Z, false) => "|0⟩",
            (DetectionBasis::Z, true) => "|1⟩",
            (DetectionBasis::X, false) => "|+⟩",
            (DetectionBasis::X, true) => "|−⟩",
        };
        f.write_str(s)
    }
}

/// Which transmission the check follows: after G_A Alice holds only A; after
/// G_B she holds A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStage {
    AfterGroupA,
    AfterGroupB,
}

impl CheckStage {
    /// (alice, bob) outcome counts for this stage.
    fn expected_counts(self) -> (usize, usize) {
        match self {
            CheckStage::AfterGroupA => (1, 2),
            CheckStage::AfterGroupB => (2, 1),
        }
    }
}

/// True iff the published outcome combination is one an undisturbed triplet
/// can produce: in Z all three results are identical; in X the number of |−⟩
/// among A, B, C is even.
pub fn detection_consistent(
    alice: &[DetectionOutcome],
    bob: &[DetectionOutcome],
    basis: DetectionBasis,
    stage: CheckStage,
) -> Result<bool> {
    let (want_alice, want_bob) = stage.expected_counts();
    if alice.len() != want_alice || bob.len() != want_bob {
        return Err(Error::BadOutcomeCount {
            expected: want_alice + want_bob,
            got: alice.len() + bob.len(),
        });
    }
    let all: Vec<_> = alice.iter().chain(bob.iter()).collect();
    if all.iter().any(|o| o.basis != basis) {
        return Err(Error::MixedBasis);
    }
    Ok(match basis {
        DetectionBasis::Z => all.iter().all(|o| o.flag == all[0].flag),
        DetectionBasis::X => all.iter().filter(|o| o.flag).count() % 2 == 0,
    })
}
