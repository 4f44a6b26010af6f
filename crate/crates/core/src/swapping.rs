//! Bell alphabet, entanglement swapping between two GHZ triplets, and the
//! Bell-triple → 3-bit decode table.
//!
//! The decode table is never transcribed from anywhere: it is rebuilt at
//! startup by pushing all 64 GHZ pairs through the state engine and recording
//! which Bell triples each pair can produce. Construction aborts if any
//! triple is claimed by two different codes.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::ghz::{code_of, ghz_state, GhzCode, GhzLabel};
use crate::statevec::{OrthonormalBasis, StateVector};
use crate::{Error, Result};

/// Φ or Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellKind {
    Phi,
    Psi,
}

/// + or −.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellPhase {
    Plus,
    Minus,
}

/// One of the four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellLabel {
    pub kind: BellKind,
    pub phase: BellPhase,
}

pub const PHI_PLUS: BellLabel = BellLabel { kind: BellKind::Phi, phase: BellPhase::Plus };
pub const PHI_MINUS: BellLabel = BellLabel { kind: BellKind::Phi, phase: BellPhase::Minus };
pub const PSI_PLUS: BellLabel = BellLabel { kind: BellKind::Psi, phase: BellPhase::Plus };
pub const PSI_MINUS: BellLabel = BellLabel { kind: BellKind::Psi, phase: BellPhase::Minus };

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS];

    pub fn index(self) -> usize {
        match (self.kind, self.phase) {
            (BellKind::Phi, BellPhase::Plus) => 0,
            (BellKind::Phi, BellPhase::Minus) => 1,
            (BellKind::Psi, BellPhase::Plus) => 2,
            (BellKind::Psi, BellPhase::Minus) => 3,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        BellLabel::ALL
            .get(i)
            .copied()
            .ok_or(Error::OutOfRange(i as u64, "Bell label index (0..=3)"))
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BellKind::Phi => "Phi",
            BellKind::Psi => "Psi",
        };
        let phase = match self.phase {
            BellPhase::Plus => "+",
            BellPhase::Minus => "-",
        };
        write!(f, "{kind}{phase}")
    }
}

impl Serialize for BellLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BellLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BellLabel::ALL
            .iter()
            .copied()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown Bell label {s:?}")))
    }
}

/// The standard two-qubit Bell kets: Φ± = (|00⟩ ± |11⟩)/√2 and
/// Ψ± = (|01⟩ ± |10⟩)/√2.
///
/// The convention is not free-floating: the verify suite requires the
/// expansion of Ψ1 ⊗ Ψ1 in this basis to reproduce the known eight-triple
/// support with coefficient (1/√2)³, which pins signs and ordering.
pub fn bell_state(label: BellLabel) -> StateVector {
    let (hi, lo) = match label.kind {
        BellKind::Phi => (0b00, 0b11),
        BellKind::Psi => (0b01, 0b10),
    };
    let sign = match label.phase {
        BellPhase::Plus => 1.0,
        BellPhase::Minus => -1.0,
    };
    StateVector::superposition(2, &[(hi, 1.0), (lo, sign)]).expect("fixed two-term ket")
}

/// Bell basis over an ordered qubit pair of a larger register. Outcome order
/// follows [`BellLabel::index`].
pub fn bell_basis_on(q0: usize, q1: usize) -> OrthonormalBasis {
    let vectors = BellLabel::ALL.iter().map(|&l| bell_state(l)).collect();
    OrthonormalBasis::new(vec![q0, q1], vectors).expect("Bell states are orthonormal")
}

/// Outcomes of the three Bell measurements on pairs (A1A2), (B1B2), (C1C2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BellTriple {
    pub a: BellLabel,
    pub b: BellLabel,
    pub c: BellLabel,
}

impl BellTriple {
    pub fn new(a: BellLabel, b: BellLabel, c: BellLabel) -> Self {
        BellTriple { a, b, c }
    }

    /// Dense index 0..64 with `a` as the most significant base-4 digit.
    pub fn index(self) -> usize {
        self.a.index() * 16 + self.b.index() * 4 + self.c.index()
    }

    pub fn from_index(i: usize) -> Result<Self> {
        if i >= 64 {
            return Err(Error::OutOfRange(i as u64, "Bell triple index (0..=63)"));
        }
        Ok(BellTriple {
            a: BellLabel::from_index(i / 16)?,
            b: BellLabel::from_index((i / 4) % 4)?,
            c: BellLabel::from_index(i % 4)?,
        })
    }

    pub fn all() -> impl Iterator<Item = BellTriple> {
        (0..64).map(|i| BellTriple::from_index(i).expect("index in range"))
    }
}

impl fmt::Display for BellTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Joint Bell ⊗ Bell ⊗ Bell basis over a 6-qubit register laid out as
/// (A1, B1, C1, A2, B2, C2); the pairs are qubits (0,3), (1,4), (2,5).
/// Outcome index = [`BellTriple::index`]. Built and validated once.
pub fn bell_triple_basis() -> &'static OrthonormalBasis {
    static BASIS: OnceLock<OrthonormalBasis> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut vectors = Vec::with_capacity(64);
        for t in BellTriple::all() {
            let v = bell_state(t.a)
                .tensor(&bell_state(t.b))
                .and_then(|v| v.tensor(&bell_state(t.c)))
                .expect("6 qubits fit the engine");
            vectors.push(v);
        }
        OrthonormalBasis::new(vec![0, 3, 1, 4, 2, 5], vectors)
            .expect("product of orthonormal bases")
    })
}

/// Analytic Born distribution of entanglement swapping between two GHZ
/// states: always exactly 8 equiprobable Bell triples.
#[derive(Debug, Clone)]
pub struct SwapDistribution {
    outcomes: Vec<(BellTriple, f64)>,
}

impl SwapDistribution {
    pub fn outcomes(&self) -> &[(BellTriple, f64)] {
        &self.outcomes
    }

    pub fn support(&self) -> impl Iterator<Item = BellTriple> + '_ {
        self.outcomes.iter().map(|&(t, _)| t)
    }

    pub fn contains(&self, t: BellTriple) -> bool {
        self.outcomes.iter().any(|&(s, _)| s == t)
    }
}

/// Expand ghz(i) ⊗ ghz(j) in the Bell-triple basis and keep the support.
pub fn swap_distribution(i: GhzLabel, j: GhzLabel) -> SwapDistribution {
    let joint = ghz_state(i).tensor(&ghz_state(j)).expect("6 qubits");
    let basis = bell_triple_basis();
    let dist = joint.outcome_distribution(basis).expect("basis applies");
    let outcomes: Vec<(BellTriple, f64)> = dist
        .into_iter()
        .filter(|&(_, p)| p > 1e-9)
        .map(|(idx, p)| (BellTriple::from_index(idx).expect("in range"), p))
        .collect();
    assert_eq!(outcomes.len(), 8, "swap of ({i}, {j}) must have 8 outcomes");
    assert!(outcomes.iter().all(|&(_, p)| (p - 0.125).abs() < 1e-12));
    SwapDistribution { outcomes }
}

/// Sample one Bell-triple outcome of swapping a 6-qubit joint state built as
/// triplet ⊗ triplet.
pub fn swap_measure<R: rand::Rng>(joint: &StateVector, rng: &mut R) -> Result<BellTriple> {
    if joint.num_qubits() != 6 {
        return Err(Error::StoreMisuse(format!(
            "swap expects a 6-qubit joint state, got {} qubits",
            joint.num_qubits()
        )));
    }
    let basis = bell_triple_basis();
    let rec = joint.measure(basis, rng)?;
    BellTriple::from_index(rec.outcome_index)
}

/// Total map from Bell triple to the XOR of the two source codes.
#[derive(Debug, Clone)]
pub struct DecodeTable {
    codes: [GhzCode; 64],
}

/// Enumerate all 64 GHZ pairs through the engine, assigning code(i)⊕code(j)
/// to every triple in each pair's support, and reject any conflict.
pub fn build_decode_table() -> Result<DecodeTable> {
    let mut codes: [Option<GhzCode>; 64] = [None; 64];
    for i in GhzLabel::ALL {
        for j in GhzLabel::ALL {
            let expected = code_of(i) ^ code_of(j);
            for t in swap_distribution(i, j).support() {
                match codes[t.index()] {
                    None => codes[t.index()] = Some(expected),
                    Some(prev) if prev == expected => {}
                    Some(prev) => {
                        return Err(Error::DecodeTableConflict {
                            triple: t.to_string(),
                            first: prev.to_string(),
                            second: expected.to_string(),
                        })
                    }
                }
            }
        }
    }
    let mut table = [GhzCode::new(0).expect("0 < 8"); 64];
    for (idx, slot) in codes.iter().enumerate() {
        match slot {
            Some(code) => table[idx] = *code,
            None => {
                return Err(Error::InvalidState(format!(
                    "decode table incomplete: triple {} never produced",
                    BellTriple::from_index(idx).expect("in range")
                )))
            }
        }
    }
    Ok(DecodeTable { codes: table })
}

impl DecodeTable {
    /// Process-wide table, enumerated once on first use.
    pub fn cached() -> Result<&'static DecodeTable> {
        static TABLE: OnceLock<DecodeTable> = OnceLock::new();
        if let Some(table) = TABLE.get() {
            return Ok(table);
        }
        let built = build_decode_table()?;
        Ok(TABLE.get_or_init(|| built))
    }

    /// Look up the 3-bit secret a measured triple reveals.
    pub fn decode(&self, t: BellTriple) -> GhzCode {
        self.codes[t.index()]
    }

    /// All triples mapping to a given code (always 8 of them).
    pub fn preimage(&self, code: GhzCode) -> Vec<BellTriple> {
        BellTriple::all().filter(|&t| self.decode(t) == code).collect()
    }
}

/// Which of the 8 initial-state pairs carries a given secret; equals the code
/// of the first state of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairSelector(GhzCode);

impl PairSelector {
    pub fn new(code: GhzCode) -> Self {
        PairSelector(code)
    }

    pub fn code(self) -> GhzCode {
        self.0
    }
}

impl fmt::Display for PairSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for PairSelector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PairSelector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        GhzCode::deserialize(deserializer).map(PairSelector)
    }
}

/// Secret and selector carried by an initial-state pair (i, j): the secret is
/// code(i)⊕code(j), and the selector (the code of the first state) singles
/// out which of the eight pairs with that XOR was used.
pub fn pair_selector_code(i: GhzLabel, j: GhzLabel) -> (GhzCode, PairSelector) {
    (code_of(i) ^ code_of(j), PairSelector(code_of(i)))
}

/// Invert the result-collection table on its first argument: the word carried
/// by the swapped triplet is prior ⊕ secret.
pub fn recover_info(prior_code: GhzCode, secret: GhzCode) -> GhzCode {
    prior_code ^ secret
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::ATOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::collections::BTreeSet;

    fn label(k: u8) -> GhzLabel {
        GhzLabel::new(k).unwrap()
    }

    fn code(bits: u8) -> GhzCode {
        GhzCode::new(bits).unwrap()
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for a in BellLabel::ALL {
            for b in BellLabel::ALL {
                let ip = bell_state(a).inner(&bell_state(b));
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).norm() < ATOL, "⟨{a}|{b}⟩ = {ip}");
            }
        }
    }

    #[test]
    fn phi_plus_amplitudes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = bell_state(PHI_PLUS);
        assert!((phi.amp(0b00).re - s).abs() < ATOL);
        assert!((phi.amp(0b11).re - s).abs() < ATOL);
    }

    /// The eight printed triples for Ψ1 ⊗ Ψ1: type-uniform with an even
    /// number of − phases.
    fn expected_support_11() -> BTreeSet<BellTriple> {
        let mut set = BTreeSet::new();
        for t in BellTriple::all() {
            let uniform = t.a.kind == t.b.kind && t.b.kind == t.c.kind;
            let minuses = [t.a, t.b, t.c]
                .iter()
                .filter(|l| l.phase == BellPhase::Minus)
                .count();
            if uniform && minuses % 2 == 0 {
                set.insert(t);
            }
        }
        set
    }

    #[test]
    fn swap_of_two_initial_states_matches_the_printed_expansion() {
        let dist = swap_distribution(label(1), label(1));
        assert_eq!(dist.outcomes().len(), 8);
        for &(_, p) in dist.outcomes() {
            assert!((p - 0.125).abs() < 1e-12);
        }
        let support: BTreeSet<_> = dist.support().collect();
        assert_eq!(support, expected_support_11());
    }

    #[test]
    fn swap_with_psi2_flips_the_phase_parity() {
        let dist = swap_distribution(label(1), label(2));
        for t in dist.support() {
            let uniform = t.a.kind == t.b.kind && t.b.kind == t.c.kind;
            let minuses = [t.a, t.b, t.c]
                .iter()
                .filter(|l| l.phase == BellPhase::Minus)
                .count();
            assert!(uniform && minuses % 2 == 1, "unexpected triple {t}");
        }
        assert!(dist.contains(BellTriple::new(PHI_PLUS, PHI_PLUS, PHI_MINUS)));
    }

    #[test]
    fn swap_with_psi4_contains_the_printed_triple() {
        let dist = swap_distribution(label(1), label(4));
        assert!(dist.contains(BellTriple::new(PSI_PLUS, PHI_PLUS, PHI_MINUS)));
        assert_eq!(dist.outcomes().len(), 8);
    }

    #[test]
    fn all_64_pairs_are_equidistributed() {
        for i in GhzLabel::ALL {
            for j in GhzLabel::ALL {
                let dist = swap_distribution(i, j);
                assert_eq!(dist.outcomes().len(), 8, "pair ({i}, {j})");
                for &(_, p) in dist.outcomes() {
                    assert!((p - 0.125).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn decode_table_reproduces_the_xor_rule() {
        let table = build_decode_table().unwrap();
        for i in GhzLabel::ALL {
            for j in GhzLabel::ALL {
                let expected = code_of(i) ^ code_of(j);
                for t in swap_distribution(i, j).support() {
                    assert_eq!(table.decode(t), expected, "pair ({i}, {j}), triple {t}");
                }
            }
        }
    }

    #[test]
    fn decode_table_partitions_the_64_triples() {
        let table = build_decode_table().unwrap();
        let mut counts = [0usize; 8];
        for t in BellTriple::all() {
            counts[table.decode(t).bits() as usize] += 1;
        }
        assert_eq!(counts, [8; 8]);
    }

    #[test]
    fn printed_decode_examples() {
        let table = build_decode_table().unwrap();
        assert_eq!(table.decode(BellTriple::new(PHI_PLUS, PHI_PLUS, PHI_PLUS)), code(0b000));
        assert_eq!(table.decode(BellTriple::new(PHI_PLUS, PHI_PLUS, PSI_MINUS)), code(0b111));
        assert_eq!(table.decode(BellTriple::new(PHI_MINUS, PHI_MINUS, PSI_MINUS)), code(0b111));
        // First term of the Ψ1 ⊗ Ψ4 expansion, so it must carry 000 ⊕ 011.
        assert_eq!(table.decode(BellTriple::new(PSI_PLUS, PHI_PLUS, PHI_MINUS)), code(0b011));
    }

    #[test]
    fn swap_measure_stays_on_the_support() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let joint = ghz_state(label(2)).tensor(&ghz_state(label(6))).unwrap();
        let table = build_decode_table().unwrap();
        for _ in 0..64 {
            let t = swap_measure(&joint, &mut rng).unwrap();
            assert_eq!(table.decode(t), code(0b100));
        }
    }

    #[test]
    fn swap_measure_frequencies_are_uniform() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let joint = ghz_state(label(1)).tensor(&ghz_state(label(1))).unwrap();
        let mut counts = std::collections::HashMap::new();
        let trials = 100_000usize;
        for _ in 0..trials {
            let t = swap_measure(&joint, &mut rng).unwrap();
            *counts.entry(t).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 8);
        let sigma = (trials as f64 * 0.125 * 0.875).sqrt();
        for (&t, &n) in &counts {
            assert!(
                (n as f64 - trials as f64 * 0.125).abs() < 5.0 * sigma,
                "triple {t} occurred {n} times"
            );
        }
    }

    #[test]
    fn selector_is_the_first_code() {
        // The worked entries: (Ψ1, Ψ5) ↦ (100, 000), (Ψ5, Ψ1) ↦ (100, 100),
        // (Ψ8, Ψ4) ↦ (100, 111).
        let (secret, sel) = pair_selector_code(label(1), label(5));
        assert_eq!((secret, sel.code()), (code(0b100), code(0b000)));
        let (secret, sel) = pair_selector_code(label(5), label(1));
        assert_eq!((secret, sel.code()), (code(0b100), code(0b100)));
        let (secret, sel) = pair_selector_code(label(8), label(4));
        assert_eq!((secret, sel.code()), (code(0b100), code(0b111)));
        for i in GhzLabel::ALL {
            for j in GhzLabel::ALL {
                let (secret, sel) = pair_selector_code(i, j);
                assert_eq!(sel.code(), code_of(i));
                assert_eq!(secret, code_of(i) ^ code_of(j));
            }
        }
    }

    #[test]
    fn recover_info_inverts_the_table() {
        assert_eq!(recover_info(code(0b000), code(0b100)), code(0b100));
        assert_eq!(recover_info(code(0b011), code(0b110)), code(0b101));
        for prior in GhzCode::all() {
            assert_eq!(recover_info(prior, code(0b000)), prior);
        }
    }
}
