//! Exact dense state-vector engine for registers of up to 8 qubits.
//!
//! States are immutable values: every operation returns a fresh vector, and
//! only [`StateVector::measure`] consumes randomness (from a caller-supplied
//! RNG). Qubit 0 is the leftmost symbol of a ket, so |abc⟩ lives at amplitude
//! index `4a + 2b + c`.

use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

/// Complex amplitude. Re-exported so downstream modules share one type.
pub type Amplitude = Complex64;

/// Hard cap on register size; sizes beyond this are out of scope.
pub const MAX_QUBITS: usize = 8;

/// Tolerance for normalization / orthonormality / unitarity checks.
pub const ATOL: f64 = 1e-12;

/// Canonical tolerance for global-phase-insensitive state comparison.
pub const PHASE_TOL: f64 = 1e-9;

/// Bit of `index` holding qubit `qubit` in an `n`-qubit register.
#[inline]
pub fn bit_of(index: usize, n: usize, qubit: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// A normalized pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// The all-zeros computational basis state |0…0⟩.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    /// The computational basis state with the given index.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1 << num_qubits;
        if index >= dim {
            return Err(Error::InvalidState(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Build a state from raw amplitudes, validating length, finiteness and
    /// unit norm (within [`ATOL`]).
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Amplitude>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        if amps.len() != 1 << num_qubits {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes, got {}",
                1 << num_qubits,
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > ATOL {
            return Err(Error::InvalidState(format!(
                "state not normalized: Σ|amp|² = {norm_sqr}"
            )));
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// Equal superposition over the listed basis indices with the given signs.
    /// Convenience for writing two-term kets like (|000⟩ − |111⟩)/√2.
    pub fn superposition(num_qubits: usize, terms: &[(usize, f64)]) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let coeff = 1.0 / (terms.len() as f64).sqrt();
        for &(index, sign) in terms {
            if index >= dim {
                return Err(Error::InvalidState(format!(
                    "basis index {index} out of range"
                )));
            }
            amps[index] = Complex64::new(sign * coeff, 0.0);
        }
        Self::from_amplitudes(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Kronecker product; `self`'s qubits occupy the lower indices of the
    /// combined register.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: n,
                max: MAX_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// Apply a 2×2 unitary to one qubit.
    pub fn apply_single_qubit(&self, qubit: usize, op: &[[Amplitude; 2]; 2]) -> Result<StateVector> {
        self.check_qubit(qubit)?;
        check_unitary2(op)?;
        let n = self.num_qubits;
        let mask = 1usize << (n - 1 - qubit);
        let mut amps = self.amps.clone();
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a0 = self.amps[i];
                let a1 = self.amps[j];
                amps[i] = op[0][0] * a0 + op[0][1] * a1;
                amps[j] = op[1][0] * a0 + op[1][1] * a1;
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// Apply a 4×4 unitary to an ordered pair of qubits. `q_hi` supplies the
    /// high bit of the operator's 2-bit index, `q_lo` the low bit.
    pub fn apply_two_qubit(
        &self,
        q_hi: usize,
        q_lo: usize,
        op: &[[Amplitude; 4]; 4],
    ) -> Result<StateVector> {
        self.check_qubit(q_hi)?;
        self.check_qubit(q_lo)?;
        if q_hi == q_lo {
            return Err(Error::QubitOutOfRange {
                qubit: q_lo,
                num_qubits: self.num_qubits,
            });
        }
        check_unitary4(op)?;
        let n = self.num_qubits;
        let mask_hi = 1usize << (n - 1 - q_hi);
        let mask_lo = 1usize << (n - 1 - q_lo);
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for i in 0..self.amps.len() {
            if i & (mask_hi | mask_lo) == 0 {
                let idx = |b: usize| -> usize {
                    let mut j = i;
                    if b & 2 != 0 {
                        j |= mask_hi;
                    }
                    if b & 1 != 0 {
                        j |= mask_lo;
                    }
                    j
                };
                for (row, op_row) in op.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (col, coeff) in op_row.iter().enumerate() {
                        acc += coeff * self.amps[idx(col)];
                    }
                    amps[idx(row)] = acc;
                }
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// True iff a unit-modulus `c` exists with ‖self − c·other‖ ≤ tol.
    pub fn equal_up_to_global_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        // The best unit phase is the phase of ⟨other|self⟩.
        let overlap = other.inner(self);
        let c = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let diff_sqr: f64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - c * b).norm_sqr())
            .sum();
        diff_sqr.sqrt() <= tol
    }

    /// Exact Born probabilities of every basis outcome, in basis order.
    pub fn outcome_distribution(&self, basis: &OrthonormalBasis) -> Result<Vec<(usize, f64)>> {
        basis.check_applicable(self)?;
        let probs = basis
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (i, self.project_prob(basis, v)))
            .collect();
        Ok(probs)
    }

    /// Projective measurement in `basis`, sampling with `rng`. Outcomes of
    /// zero probability are never selected.
    pub fn measure<R: Rng>(&self, basis: &OrthonormalBasis, rng: &mut R) -> Result<MeasurementRecord> {
        let dist = self.outcome_distribution(basis)?;
        let r: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = None;
        for &(i, p) in &dist {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            if r < acc {
                chosen = Some((i, p));
                break;
            }
        }
        // Float round-off can leave acc slightly below 1; fall back to the
        // last positive-probability outcome.
        let (outcome_index, probability) = chosen.unwrap_or_else(|| {
            *dist
                .iter()
                .rev()
                .find(|&&(_, p)| p > 0.0)
                .expect("distribution has at least one positive outcome")
        });
        let post_state = self.project(basis, outcome_index, probability)?;
        Ok(MeasurementRecord {
            outcome_index,
            probability,
            post_state,
        })
    }

    /// Renormalized projection onto one basis outcome.
    fn project(&self, basis: &OrthonormalBasis, outcome: usize, prob: f64) -> Result<StateVector> {
        let v = &basis.vectors[outcome];
        let reduced = self.reduce_against(basis, v);
        let n = self.num_qubits;
        let comp = basis.complement(n);
        let scale = 1.0 / prob.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (z, amp) in amps.iter_mut().enumerate() {
            let sub = compose_bits(z, n, &basis.subset);
            let rest = compose_bits(z, n, &comp);
            *amp = v.amps[sub] * reduced[rest] * scale;
        }
        StateVector::from_amplitudes(n, amps)
    }

    fn project_prob(&self, basis: &OrthonormalBasis, v: &StateVector) -> f64 {
        self.reduce_against(basis, v)
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// ⟨v|ψ⟩ contracted over the basis subset, leaving a vector over the
    /// complement qubits.
    fn reduce_against(&self, basis: &OrthonormalBasis, v: &StateVector) -> Vec<Complex64> {
        let n = self.num_qubits;
        let comp = basis.complement(n);
        let mut reduced = vec![Complex64::new(0.0, 0.0); 1 << comp.len()];
        for (z, amp) in self.amps.iter().enumerate() {
            let sub = compose_bits(z, n, &basis.subset);
            let rest = compose_bits(z, n, &comp);
            reduced[rest] += v.amps[sub].conj() * amp;
        }
        reduced
    }

    /// Remove a qubit known to sit in the computational state `value`
    /// (e.g. right after it was measured in Z). Errors if the qubit is still
    /// correlated with the rest of the register.
    pub fn drop_qubit(&self, qubit: usize, value: usize) -> Result<StateVector> {
        self.check_qubit(qubit)?;
        let n = self.num_qubits;
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        let mut leak = 0.0f64;
        for (z, amp) in self.amps.iter().enumerate() {
            if bit_of(z, n, qubit) == value {
                amps.push(*amp);
            } else {
                leak += amp.norm_sqr();
            }
        }
        if leak > ATOL {
            return Err(Error::InvalidState(format!(
                "qubit {qubit} is not in |{value}⟩ (residual weight {leak:.3e})"
            )));
        }
        StateVector::from_amplitudes(n - 1, amps)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit < self.num_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            })
        }
    }
}

/// Extract the bits of the listed qubits from a full index, MSB first.
fn compose_bits(index: usize, n: usize, qubits: &[usize]) -> usize {
    let mut out = 0usize;
    for &q in qubits {
        out = (out << 1) | bit_of(index, n, q);
    }
    out
}

fn check_unitary2(op: &[[Amplitude; 2]; 2]) -> Result<()> {
    let mut dev = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let acc: Complex64 = op.iter().map(|row| row[i].conj() * row[j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((acc - expect).norm());
        }
    }
    if dev > ATOL {
        Err(Error::NonUnitary { deviation: dev })
    } else {
        Ok(())
    }
}

fn check_unitary4(op: &[[Amplitude; 4]; 4]) -> Result<()> {
    let mut dev = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let acc: Complex64 = op.iter().map(|row| row[i].conj() * row[j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((acc - expect).norm());
        }
    }
    if dev > ATOL {
        Err(Error::NonUnitary { deviation: dev })
    } else {
        Ok(())
    }
}

/// Result of one projective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    /// Index of the observed basis vector.
    pub outcome_index: usize,
    /// Born probability of that outcome.
    pub probability: f64,
    /// Renormalized post-measurement state of the full register.
    pub post_state: StateVector,
}

/// An orthonormal measurement basis over an ordered subset of qubits.
///
/// Basis vector qubit `r` corresponds to parent-register qubit `subset[r]`.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    subset: Vec<usize>,
    vectors: Vec<StateVector>,
}

impl OrthonormalBasis {
    /// Validate and build a basis: distinct subset qubits, 2^k vectors of k
    /// qubits each, pairwise orthonormal within [`ATOL`].
    pub fn new(subset: Vec<usize>, vectors: Vec<StateVector>) -> Result<Self> {
        let k = subset.len();
        if k == 0 || k > MAX_QUBITS {
            return Err(Error::InvalidBasis(format!("subset of size {k}")));
        }
        let mut seen = [false; MAX_QUBITS];
        for &q in &subset {
            if q >= MAX_QUBITS || seen[q] {
                return Err(Error::InvalidBasis(format!("bad subset qubit {q}")));
            }
            seen[q] = true;
        }
        if vectors.len() != 1 << k {
            return Err(Error::InvalidBasis(format!(
                "expected {} vectors, got {}",
                1 << k,
                vectors.len()
            )));
        }
        for (i, a) in vectors.iter().enumerate() {
            if a.num_qubits() != k {
                return Err(Error::InvalidBasis(format!(
                    "vector {i} spans {} qubits, subset has {k}",
                    a.num_qubits()
                )));
            }
            for (j, b) in vectors.iter().enumerate() {
                let ip = a.inner(b);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - expect).norm() > ATOL {
                    return Err(Error::InvalidBasis(format!(
                        "⟨v{i}|v{j}⟩ = {ip} violates orthonormality"
                    )));
                }
            }
        }
        Ok(OrthonormalBasis { subset, vectors })
    }

    /// Computational (Z) product basis over the given qubits. Outcome index
    /// bit r (MSB first) is the Z result of `qubits[r]` (0 ↦ |0⟩, 1 ↦ |1⟩).
    pub fn z_on(qubits: &[usize]) -> Result<Self> {
        let k = qubits.len();
        let vectors = (0..1usize << k)
            .map(|i| StateVector::basis_state(k, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(qubits.to_vec(), vectors)
    }

    /// Hadamard (X) product basis over the given qubits. Outcome index bit r
    /// (MSB first) is the X result of `qubits[r]` (0 ↦ |+⟩, 1 ↦ |−⟩).
    pub fn x_on(qubits: &[usize]) -> Result<Self> {
        let k = qubits.len();
        let plus = StateVector::superposition(1, &[(0, 1.0), (1, 1.0)])?;
        let minus = StateVector::superposition(1, &[(0, 1.0), (1, -1.0)])?;
        let mut vectors = Vec::with_capacity(1 << k);
        for i in 0..1usize << k {
            let mut v: Option<StateVector> = None;
            for r in 0..k {
                let factor = if (i >> (k - 1 - r)) & 1 == 0 { &plus } else { &minus };
                v = Some(match v {
                    None => factor.clone(),
                    Some(acc) => acc.tensor(factor)?,
                });
            }
            vectors.push(v.expect("k >= 1"));
        }
        Self::new(qubits.to_vec(), vectors)
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|q| !self.subset.contains(q)).collect()
    }

    fn check_applicable(&self, state: &StateVector) -> Result<()> {
        for &q in &self.subset {
            if q >= state.num_qubits() {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: state.num_qubits(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ghz1() -> StateVector {
        StateVector::superposition(3, &[(0b000, 1.0), (0b111, 1.0)]).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        let combined = zero.tensor(&zero).unwrap();
        assert_eq!(combined.num_qubits(), 2);
        assert!((combined.amp(0) - c(1.0)).norm() < ATOL);
    }

    #[test]
    fn tensor_distributes_over_superposition() {
        let plus = StateVector::superposition(1, &[(0, 1.0), (1, 1.0)]).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        let out = plus.tensor(&one).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amp(0b01) - c(s)).norm() < ATOL);
        assert!((out.amp(0b11) - c(s)).norm() < ATOL);
        assert!(out.amp(0b00).norm() < ATOL);
        assert!(out.amp(0b10).norm() < ATOL);
    }

    #[test]
    fn tensor_of_two_triplets_has_four_quarter_amps() {
        let joint = ghz1().tensor(&ghz1()).unwrap();
        for idx in [0b000000, 0b000111, 0b111000, 0b111111] {
            assert!((joint.amp(idx) - c(0.5)).norm() < ATOL);
        }
        let support: usize = joint.amps().iter().filter(|a| a.norm() > ATOL).count();
        assert_eq!(support, 4);
    }

    #[test]
    fn tensor_rejects_oversized_registers() {
        let five = StateVector::zero(5).unwrap();
        let four = StateVector::zero(4).unwrap();
        assert!(matches!(
            five.tensor(&four),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn sigma_x_flips_a_qubit() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        let x = [[c(0.0), c(1.0)], [c(1.0), c(0.0)]];
        let out = zero.apply_single_qubit(0, &x).unwrap();
        assert!((out.amp(1) - c(1.0)).norm() < ATOL);
    }

    #[test]
    fn identity_preserves_any_state() {
        let id = [[c(1.0), c(0.0)], [c(0.0), c(1.0)]];
        let state = ghz1();
        let out = state.apply_single_qubit(1, &id).unwrap();
        assert!(state.equal_up_to_global_phase(&out, 0.0_f64.max(ATOL)));
        assert_eq!(state.amps(), out.amps());
    }

    #[test]
    fn i_sigma_y_signs_match_its_braket_definition() {
        // iσy = |0⟩⟨1| − |1⟩⟨0|: sends |1⟩ ↦ +|0⟩ and |0⟩ ↦ −|1⟩.
        let isy = [[c(0.0), c(1.0)], [c(-1.0), c(0.0)]];
        let one = StateVector::basis_state(1, 1).unwrap();
        let out = one.apply_single_qubit(0, &isy).unwrap();
        assert!((out.amp(0) - c(1.0)).norm() < ATOL);
        let zero = StateVector::basis_state(1, 0).unwrap();
        let out = zero.apply_single_qubit(0, &isy).unwrap();
        assert!((out.amp(1) - c(-1.0)).norm() < ATOL);
    }

    #[test]
    fn non_unitary_op_rejected() {
        let bad = [[c(1.0), c(0.0)], [c(1.0), c(1.0)]];
        let zero = StateVector::basis_state(1, 0).unwrap();
        assert!(matches!(
            zero.apply_single_qubit(0, &bad),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn measure_eigenstate_is_deterministic() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        let z = OrthonormalBasis::z_on(&[0]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let rec = zero.measure(&z, &mut rng).unwrap();
        assert_eq!(rec.outcome_index, 0);
        assert!((rec.probability - 1.0).abs() < ATOL);
    }

    #[test]
    fn measuring_one_ghz_qubit_collapses_the_rest() {
        let z = OrthonormalBasis::z_on(&[0]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut saw = [false, false];
        for _ in 0..32 {
            let rec = ghz1().measure(&z, &mut rng).unwrap();
            assert!((rec.probability - 0.5).abs() < ATOL);
            let expect = StateVector::basis_state(3, if rec.outcome_index == 0 { 0 } else { 7 }).unwrap();
            assert!(rec.post_state.equal_up_to_global_phase(&expect, PHASE_TOL));
            saw[rec.outcome_index] = true;
        }
        assert!(saw[0] && saw[1]);
    }

    #[test]
    fn x_measurement_of_ghz_qubit_is_unbiased() {
        let x = OrthonormalBasis::x_on(&[0]).unwrap();
        let dist = ghz1().outcome_distribution(&x).unwrap();
        assert!((dist[0].1 - 0.5).abs() < ATOL);
        assert!((dist[1].1 - 0.5).abs() < ATOL);
    }

    #[test]
    fn full_x_distribution_of_ghz_has_even_minus_support() {
        let x = OrthonormalBasis::x_on(&[0, 1, 2]).unwrap();
        let dist = ghz1().outcome_distribution(&x).unwrap();
        for (i, p) in dist {
            let minuses = (i as u32).count_ones();
            if minuses % 2 == 0 {
                assert!((p - 0.25).abs() < ATOL, "outcome {i} has p = {p}");
            } else {
                assert!(p.abs() < ATOL, "odd outcome {i} has p = {p}");
            }
        }
    }

    #[test]
    fn distribution_sums_to_one() {
        let x = OrthonormalBasis::x_on(&[0, 1]).unwrap();
        let joint = ghz1();
        let total: f64 = joint
            .outcome_distribution(&x)
            .unwrap()
            .iter()
            .map(|&(_, p)| p)
            .sum();
        assert!((total - 1.0).abs() < ATOL);
    }

    #[test]
    fn global_phase_comparison() {
        let psi = ghz1();
        let minus = StateVector::superposition(3, &[(0, -1.0), (7, -1.0)]).unwrap();
        assert!(psi.equal_up_to_global_phase(&minus, PHASE_TOL));
        let zero = StateVector::basis_state(1, 0).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        assert!(!zero.equal_up_to_global_phase(&one, PHASE_TOL));
    }

    #[test]
    fn sampling_matches_analytic_distribution() {
        // 10^5 seeded single-qubit measurements of a GHZ qubit: the observed
        // |0⟩ count must sit within 5σ of Binomial(n, 1/2).
        let z = OrthonormalBasis::z_on(&[0]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(20260810);
        let n = 100_000usize;
        let mut zeros = 0usize;
        for _ in 0..n {
            if ghz1().measure(&z, &mut rng).unwrap().outcome_index == 0 {
                zeros += 1;
            }
        }
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((zeros as f64 - n as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn basis_validation_rejects_non_orthonormal_sets() {
        let v0 = StateVector::basis_state(1, 0).unwrap();
        let dup = vec![v0.clone(), v0];
        assert!(matches!(
            OrthonormalBasis::new(vec![0], dup),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn post_states_stay_normalized() {
        let x = OrthonormalBasis::x_on(&[1]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..16 {
            let rec = ghz1().measure(&x, &mut rng).unwrap();
            let norm: f64 = rec.post_state.amps().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < ATOL);
        }
    }
}
