//! Deterministic simulator of a quantum steganography protocol that hides a
//! covert channel inside a GHZ-state QSDC scheme.
//!
//! The crate is organized around the protocol's moving parts:
//!
//! - [`statevec`]: an exact complex state-vector engine for registers of up
//!   to 8 qubits, with unitary application and projective measurement in
//!   arbitrary orthonormal bases.
//! - [`ghz`]: the eight-state GHZ alphabet, the dense-coding unitaries and
//!   their 3-bit codes, GHZ-basis measurement, and the Z/X detection
//!   correlation predicate.
//! - [`swapping`]: the Bell alphabet, entanglement swapping between two GHZ
//!   triplets, and the Bell-triple → 3-bit decode table built by enumeration.
//! - [`protocol`]: the full cover-QSDC plus hidden-channel round (prepare,
//!   transmit-and-detect, dense-code the cover, pick the embedding position,
//!   hide, decode).
//! - [`adversary`]: eavesdropper models (measure-resend and the
//!   entangle-and-measure probe) with the Monte Carlo rate harness.
//! - [`verify`]: the exhaustive analytic identity suite behind `verify`.
//!
//! Everything that samples takes an explicit seeded RNG; identical seeds give
//! byte-identical reports.

pub mod adversary;
pub mod ghz;
pub mod protocol;
pub mod stats;
pub mod statevec;
pub mod swapping;
pub mod verify;

mod error;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
