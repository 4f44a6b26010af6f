use thiserror::Error;

use crate::protocol::RoundReport;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A register would exceed the 8-qubit cap of the dense engine.
    #[error("register of {requested} qubits exceeds the {max}-qubit limit")]
    TooManyQubits { requested: usize, max: usize },

    /// Qubit index outside the register.
    #[error("qubit index {qubit} out of range for {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    /// An operator failed the unitarity check.
    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    /// Amplitudes do not form a valid normalized state.
    #[error("invalid state vector: {0}")]
    InvalidState(String),

    /// A basis failed orthonormality / completeness validation.
    #[error("invalid measurement basis: {0}")]
    InvalidBasis(String),

    /// Detection outcomes mixing Z and X results.
    #[error("detection outcomes mix measurement bases")]
    MixedBasis,

    /// Detection outcome counts do not match the declared check stage.
    #[error("detection check expected {expected} outcomes, got {got}")]
    BadOutcomeCount { expected: usize, got: usize },

    /// Code or label outside its 3-bit / 1..8 range.
    #[error("value {0} out of range for {1}")]
    OutOfRange(u64, &'static str),

    /// Enumeration found a Bell triple claimed by two different codes.
    #[error("decode table inconsistent: triple {triple} maps to both {first} and {second}")]
    DecodeTableConflict {
        triple: String,
        first: String,
        second: String,
    },

    /// Eve strategy parameters violate their constraints.
    #[error("invalid adversary strategy: {0}")]
    InvalidStrategy(String),

    /// Protocol configuration rejected before the round started.
    #[error("invalid protocol config: {0}")]
    InvalidConfig(String),

    /// A store operation was attempted out of protocol order.
    #[error("triplet store misuse: {0}")]
    StoreMisuse(String),

    /// Eavesdropping detection tripped; the partial round report is attached.
    #[error("detection error rate {rate:.4} exceeded threshold at stage {stage}; communication aborted")]
    DetectionAbort {
        stage: char,
        rate: f64,
        report: Box<RoundReport>,
    },

    /// No position in the cover satisfies the consistency condition.
    #[error("no cover position satisfies the consistency condition for secret {secret} / selector {selector}")]
    NoValidPosition { secret: String, selector: String },
}
