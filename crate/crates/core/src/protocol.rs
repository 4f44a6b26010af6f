//! The full steganography round: triplet preparation, two-stage transmission
//! with eavesdropping detection, dense coding of the cover sequence,
//! embedding-position selection under the consistency condition, auxiliary-
//! triplet hiding, and the receiver's two-stage decoding.
//!
//! Positions are 0-based indices into the sequence of triplets that survive
//! the detection rounds. One hidden block per round: the secret rides on the
//! entanglement swap of positions m and m+1, the selector on the state at
//! m−1, and position m+1 is re-encoded to copy m−1 (the auxiliary).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{intercept, AttackStage, EveStrategy};
use crate::ghz::{
    detection_consistent, encode, ghz_basis, ghz_state, label_of, CheckStage, DetectionBasis,
    DetectionOutcome, GhzCode, GhzLabel,
};
use crate::statevec::{OrthonormalBasis, StateVector};
use crate::swapping::{recover_info, swap_measure, DecodeTable, PairSelector};
use crate::{Error, Result};

/// Everything a round needs; identical configs give identical reports.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    /// Number of GHZ triplets prepared. Must be ≥ 16.
    pub n: usize,
    /// Fraction of remaining triplets consumed per detection stage.
    pub detect_fraction: f64,
    pub seed: u64,
    /// The 3-bit secret for the hidden channel.
    pub secret: GhzCode,
    /// Which of the eight initial-state pairs encodes the secret.
    pub selector: PairSelector,
    pub eve: Option<EveStrategy>,
    /// Abort when a stage's mismatch rate exceeds this. 0.0 (the noiseless
    /// default) aborts on any mismatch; 1.0 never aborts.
    pub detect_threshold: f64,
    /// Caller-supplied cover sequence; length must equal the survivor count.
    /// When absent the cover is drawn uniformly at random and redrawn if the
    /// required 6-bit pattern is missing.
    pub cover: Option<Vec<GhzCode>>,
    /// Embed the hidden block; false runs a pure cover round.
    pub embed: bool,
    /// Random covers to draw before giving up on the 6-bit pattern.
    pub max_cover_attempts: usize,
}

impl ProtocolConfig {
    pub fn new(n: usize, secret: GhzCode, selector: PairSelector, seed: u64) -> Self {
        ProtocolConfig {
            n,
            detect_fraction: 0.1,
            seed,
            secret,
            selector,
            eve: None,
            detect_threshold: 0.0,
            cover: None,
            embed: true,
            max_cover_attempts: 64,
        }
    }

    /// Detection sample size for a stage with `intact` remaining triplets.
    fn sample_size(&self, intact: usize) -> usize {
        ((intact as f64 * self.detect_fraction).ceil() as usize).max(1)
    }

    /// Survivor count is deterministic: both stages consume a fixed-size
    /// sample of the triplets still intact.
    pub fn expected_survivors(&self) -> usize {
        let after_a = self.n - self.sample_size(self.n);
        after_a - self.sample_size(after_a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 16 {
            return Err(Error::InvalidConfig(format!("n = {} < 16", self.n)));
        }
        if !(self.detect_fraction > 0.0 && self.detect_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "detect_fraction = {} outside (0, 1)",
                self.detect_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.detect_threshold) {
            return Err(Error::InvalidConfig(format!(
                "detect_threshold = {} outside [0, 1]",
                self.detect_threshold
            )));
        }
        if self.expected_survivors() < 3 {
            return Err(Error::InvalidConfig(
                "detect_fraction leaves fewer than 3 triplets".into(),
            ));
        }
        if self.max_cover_attempts == 0 {
            return Err(Error::InvalidConfig("max_cover_attempts must be ≥ 1".into()));
        }
        if let Some(cover) = &self.cover {
            if cover.len() != self.expected_survivors() {
                return Err(Error::InvalidConfig(format!(
                    "cover length {} != surviving triplet count {}",
                    cover.len(),
                    self.expected_survivors()
                )));
            }
        }
        if let Some(eve) = &self.eve {
            eve.validate()?;
        }
        Ok(())
    }
}

/// Who currently holds a particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    Bob,
    InTransit,
    Alice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripletStatus {
    Intact,
    ConsumedByDetection,
}

/// One GHZ triplet with per-particle ownership tags. Qubits 0, 1, 2 are
/// particles A, B, C.
#[derive(Debug, Clone)]
pub struct Triplet {
    state: StateVector,
    owner: [Owner; 3],
    status: TripletStatus,
}

impl Triplet {
    pub fn status(&self) -> TripletStatus {
        self.status
    }

    pub fn owner_of(&self, particle: usize) -> Owner {
        self.owner[particle]
    }
}

/// The particle groups G_A, G_B, G_C of a protocol round.
#[derive(Debug, Clone)]
pub struct TripletStore {
    triplets: Vec<Triplet>,
    stage_a_done: bool,
    stage_b_done: bool,
    returned: bool,
}

impl TripletStore {
    pub fn len(&self) -> usize {
        self.triplets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triplets.is_empty()
    }

    pub fn triplet(&self, index: usize) -> &Triplet {
        &self.triplets[index]
    }

    /// Store indices of triplets not consumed by detection, in order; the
    /// cover sequence indexes this list.
    pub fn intact_indices(&self) -> Vec<usize> {
        self.triplets
            .iter()
            .enumerate()
            .filter(|(_, t)| t.status == TripletStatus::Intact)
            .map(|(i, _)| i)
            .collect()
    }

    /// The third particle must never leave the preparer.
    pub fn c_particles_never_left(&self) -> bool {
        self.triplets.iter().all(|t| t.owner[2] == Owner::Bob)
    }
}

/// Detection summary of one transmission stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: String,
    pub transmitted: usize,
    pub samples: usize,
    pub mismatches: usize,
    pub error_rate: f64,
    pub aborted: bool,
}

/// S1: the preparer builds n copies of Ψ1 and holds every particle.
pub fn s1_prepare(config: &ProtocolConfig) -> Result<TripletStore> {
    config.validate()?;
    let psi1 = ghz_state(GhzLabel::new(1)?);
    let triplets = (0..config.n)
        .map(|_| Triplet {
            state: psi1.clone(),
            owner: [Owner::Bob; 3],
            status: TripletStatus::Intact,
        })
        .collect();
    Ok(TripletStore {
        triplets,
        stage_a_done: false,
        stage_b_done: false,
        returned: false,
    })
}

/// S2(a)/(b): ship one particle group to Alice (through Eve, if present),
/// then burn a random sample of triplets on a correlation check.
pub fn s2_transmit_and_detect<R: Rng>(
    store: &mut TripletStore,
    stage: AttackStage,
    config: &ProtocolConfig,
    rng: &mut R,
) -> Result<StageReport> {
    match stage {
        AttackStage::GroupA => {
            if store.stage_a_done {
                return Err(Error::StoreMisuse("group A already transmitted".into()));
            }
        }
        AttackStage::GroupB => {
            if !store.stage_a_done {
                return Err(Error::StoreMisuse("group B before group A".into()));
            }
            if store.stage_b_done {
                return Err(Error::StoreMisuse("group B already transmitted".into()));
            }
        }
    }
    let particle = stage.particle();
    let intact = store.intact_indices();

    // Transmission leg: Bob → (Eve?) → Alice, one particle per triplet.
    for &idx in &intact {
        let t = &mut store.triplets[idx];
        t.owner[particle] = Owner::InTransit;
        if let Some(strategy) = config.eve {
            let (state, _probe) = intercept(&t.state, particle, strategy, rng)?;
            t.state = state;
        }
        t.owner[particle] = Owner::Alice;
    }

    // Detection: Alice samples triplets, measures her particles in a random
    // basis and publishes; Bob measures his in the same basis and compares.
    let samples = config.sample_size(intact.len());
    let mut chosen = sample_indices(rng, intact.len(), samples);
    chosen.sort_unstable();
    let mut mismatches = 0usize;
    for &pick in &chosen {
        let idx = intact[pick];
        let basis = if rng.gen_bool(0.5) {
            DetectionBasis::Z
        } else {
            DetectionBasis::X
        };
        let (alice_qubits, bob_qubits, check): (&[usize], &[usize], CheckStage) = match stage {
            AttackStage::GroupA => (&[0], &[1, 2], CheckStage::AfterGroupA),
            AttackStage::GroupB => (&[0, 1], &[2], CheckStage::AfterGroupB),
        };
        let t = &mut store.triplets[idx];
        let mut alice_outcomes = Vec::with_capacity(alice_qubits.len());
        for &q in alice_qubits {
            debug_assert_eq!(t.owner[q], Owner::Alice);
            alice_outcomes.push(measure_one(&mut t.state, q, basis, rng)?);
        }
        let mut bob_outcomes = Vec::with_capacity(bob_qubits.len());
        for &q in bob_qubits {
            debug_assert_eq!(t.owner[q], Owner::Bob);
            bob_outcomes.push(measure_one(&mut t.state, q, basis, rng)?);
        }
        if !detection_consistent(&alice_outcomes, &bob_outcomes, basis, check)? {
            mismatches += 1;
        }
        t.status = TripletStatus::ConsumedByDetection;
    }

    match stage {
        AttackStage::GroupA => store.stage_a_done = true,
        AttackStage::GroupB => store.stage_b_done = true,
    }
    let error_rate = mismatches as f64 / samples as f64;
    Ok(StageReport {
        stage: stage.to_string(),
        transmitted: intact.len(),
        samples,
        mismatches,
        error_rate,
        aborted: error_rate > config.detect_threshold,
    })
}

fn measure_one<R: Rng>(
    state: &mut StateVector,
    qubit: usize,
    basis: DetectionBasis,
    rng: &mut R,
) -> Result<DetectionOutcome> {
    let b = match basis {
        DetectionBasis::Z => OrthonormalBasis::z_on(&[qubit])?,
        DetectionBasis::X => OrthonormalBasis::x_on(&[qubit])?,
    };
    let rec = state.measure(&b, rng)?;
    *state = rec.post_state;
    Ok(DetectionOutcome::from_index(basis, rec.outcome_index))
}

/// Distinct indices from 0..n by partial Fisher–Yates; self-contained so the
/// draw sequence is pinned by this crate alone.
fn sample_indices<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// S3(a): dense-code one cover word onto each surviving triplet.
pub fn s3_encode_cover(store: &mut TripletStore, words: &[GhzCode]) -> Result<()> {
    if !(store.stage_a_done && store.stage_b_done) {
        return Err(Error::StoreMisuse(
            "cover encoding before both transmissions".into(),
        ));
    }
    let intact = store.intact_indices();
    if words.len() != intact.len() {
        return Err(Error::StoreMisuse(format!(
            "cover has {} words for {} surviving triplets",
            words.len(),
            intact.len()
        )));
    }
    for (pos, &idx) in intact.iter().enumerate() {
        let t = &mut store.triplets[idx];
        debug_assert_eq!(t.owner[0], Owner::Alice);
        debug_assert_eq!(t.owner[1], Owner::Alice);
        t.state = encode(&t.state, label_of(words[pos]), 0, 1)?;
    }
    Ok(())
}

/// S4(a): all positions whose neighborhood satisfies the consistency
/// condition (words[m−1] = selector and words[m−1] ⊕ words[m] = secret),
/// with room for the auxiliary at m+1.
pub fn eligible_positions(words: &[GhzCode], secret: GhzCode, selector: PairSelector) -> Vec<usize> {
    if words.len() < 3 {
        return Vec::new();
    }
    (1..words.len() - 1)
        .filter(|&p| words[p - 1] == selector.code() && words[p] == selector.code() ^ secret)
        .collect()
}

/// Pick the embedding position uniformly among the eligible ones.
pub fn choose_m<R: Rng>(
    words: &[GhzCode],
    secret: GhzCode,
    selector: PairSelector,
    rng: &mut R,
) -> Result<usize> {
    let eligible = eligible_positions(words, secret, selector);
    if eligible.is_empty() {
        return Err(Error::NoValidPosition {
            secret: secret.to_string(),
            selector: selector.to_string(),
        });
    }
    Ok(eligible[rng.gen_range(0..eligible.len())])
}

/// S4(b): re-encode triplet m+1 so it copies the word at m−1. It then
/// carries no cover information of its own and serves only the swap.
pub fn s4_hide(store: &mut TripletStore, words: &[GhzCode], m: usize) -> Result<()> {
    let intact = store.intact_indices();
    if m == 0 || m + 1 >= intact.len() {
        return Err(Error::StoreMisuse(format!(
            "m = {m} leaves no room for neighbors in {} survivors",
            intact.len()
        )));
    }
    // Dense-coding composes by XOR, so one more unitary retargets the word.
    let delta = words[m + 1] ^ words[m - 1];
    let idx = intact[m + 1];
    let t = &mut store.triplets[idx];
    t.state = encode(&t.state, label_of(delta), 0, 1)?;
    Ok(())
}

/// S3(c): Alice sends both travel groups back.
pub fn return_to_bob(store: &mut TripletStore) -> Result<()> {
    if !(store.stage_a_done && store.stage_b_done) {
        return Err(Error::StoreMisuse("return before both transmissions".into()));
    }
    for t in &mut store.triplets {
        if t.status == TripletStatus::Intact {
            t.owner[0] = Owner::Bob;
            t.owner[1] = Owner::Bob;
        }
    }
    store.returned = true;
    Ok(())
}

/// Bob's full decode of one round.
#[derive(Debug, Clone)]
pub struct DecodedRound {
    pub secret: Option<GhzCode>,
    pub selector: Option<GhzCode>,
    pub info_at_m: Option<GhzCode>,
    /// Cover word per surviving position; None at the auxiliary (m+1).
    pub words: Vec<Option<GhzCode>>,
}

/// S5: GHZ-measure position m−1 for the selector, swap positions m and m+1
/// for the secret, recover the word at m from the table, and GHZ-measure
/// everything else for the cover.
pub fn s5_decode<R: Rng>(
    mut store: TripletStore,
    m: Option<usize>,
    table: &DecodeTable,
    rng: &mut R,
) -> Result<DecodedRound> {
    if !store.returned {
        return Err(Error::StoreMisuse("decode before particles returned".into()));
    }
    let intact = store.intact_indices();
    let len = intact.len();
    let basis = ghz_basis();
    let mut words: Vec<Option<GhzCode>> = vec![None; len];
    let mut decoded = DecodedRound {
        secret: None,
        selector: None,
        info_at_m: None,
        words: Vec::new(),
    };
    if let Some(m) = m {
        if m == 0 || m + 1 >= len {
            return Err(Error::StoreMisuse(format!(
                "m = {m} out of range for {len} survivors"
            )));
        }
        let prior = ghz_measure_word(&mut store, intact[m - 1], &basis, rng)?;
        decoded.selector = Some(prior);
        words[m - 1] = Some(prior);

        let joint = store.triplets[intact[m]]
            .state
            .tensor(&store.triplets[intact[m + 1]].state)?;
        let triple = swap_measure(&joint, rng)?;
        let secret = table.decode(triple);
        decoded.secret = Some(secret);
        let info = recover_info(prior, secret);
        decoded.info_at_m = Some(info);
        words[m] = Some(info);
        // words[m + 1] stays None: the auxiliary carries no cover word.

        for (pos, &idx) in intact.iter().enumerate() {
            if pos == m - 1 || pos == m || pos == m + 1 {
                continue;
            }
            words[pos] = Some(ghz_measure_word(&mut store, idx, &basis, rng)?);
        }
    } else {
        for (pos, &idx) in intact.iter().enumerate() {
            words[pos] = Some(ghz_measure_word(&mut store, idx, &basis, rng)?);
        }
    }
    decoded.words = words;
    Ok(decoded)
}

fn ghz_measure_word<R: Rng>(
    store: &mut TripletStore,
    idx: usize,
    basis: &OrthonormalBasis,
    rng: &mut R,
) -> Result<GhzCode> {
    let rec = store.triplets[idx].state.measure(basis, rng)?;
    store.triplets[idx].state = rec.post_state;
    GhzCode::new(rec.outcome_index as u8)
}

/// How the round ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundStatus {
    Completed,
    AbortedStageA,
    AbortedStageB,
}

/// The secret/selector pair on either side of the channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HiddenBlock {
    pub secret: GhzCode,
    pub selector: GhzCode,
}

/// Decoded hidden block plus the recovered word at m.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecodedBlock {
    pub secret: GhzCode,
    pub selector: GhzCode,
    pub info_at_m: GhzCode,
}

/// Bit-level bookkeeping of one round.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BitAccounting {
    /// 3 bits per surviving triplet that transmits cover information (the
    /// auxiliary does not).
    pub cover_bits: usize,
    /// 6 when a block is embedded: 3 from the swap outcome, 3 from the
    /// initial-state pair selector.
    pub covert_bits: usize,
    /// ⌈log2 L⌉ bits to convey m over the classical side channel.
    pub side_channel_bits: u32,
    pub detection_consumed: usize,
    pub auxiliary_triplets: usize,
}

/// Transcript and statistics of one protocol run. Serializes to the stable
/// "ghz-stego-report/1" JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundReport {
    pub schema: String,
    pub n: usize,
    pub seed: u64,
    pub detect_fraction: f64,
    pub detect_threshold: f64,
    pub eve: Option<String>,
    pub status: RoundStatus,
    pub stage_a: Option<StageReport>,
    pub stage_b: Option<StageReport>,
    pub survivors: usize,
    pub embedded: Option<HiddenBlock>,
    pub m: Option<usize>,
    pub decoded: Option<DecodedBlock>,
    /// Bob's recovered cover sequence; null at the auxiliary position.
    pub cover_decoded: Vec<Option<GhzCode>>,
    /// Bob's words match Alice's everywhere except the auxiliary.
    pub cover_matches: Option<bool>,
    pub bits: BitAccounting,
}

impl RoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Execute S1 → S5 with optional Eve. Deterministic given the seed. Returns
/// [`Error::DetectionAbort`] (with the partial report attached) when a
/// detection stage trips, and [`Error::NoValidPosition`] when a
/// caller-supplied cover lacks the required pattern.
pub fn run_round(config: &ProtocolConfig) -> Result<RoundReport> {
    config.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut store = s1_prepare(config)?;

    let mut report = RoundReport {
        schema: "ghz-stego-report/1".into(),
        n: config.n,
        seed: config.seed,
        detect_fraction: config.detect_fraction,
        detect_threshold: config.detect_threshold,
        eve: config.eve.map(|e| e.name()),
        status: RoundStatus::Completed,
        stage_a: None,
        stage_b: None,
        survivors: 0,
        embedded: None,
        m: None,
        decoded: None,
        cover_decoded: Vec::new(),
        cover_matches: None,
        bits: BitAccounting {
            cover_bits: 0,
            covert_bits: 0,
            side_channel_bits: 0,
            detection_consumed: 0,
            auxiliary_triplets: 0,
        },
    };

    for stage in [AttackStage::GroupA, AttackStage::GroupB] {
        let stage_report = s2_transmit_and_detect(&mut store, stage, config, &mut rng)?;
        let aborted = stage_report.aborted;
        let rate = stage_report.error_rate;
        report.bits.detection_consumed += stage_report.samples;
        match stage {
            AttackStage::GroupA => report.stage_a = Some(stage_report),
            AttackStage::GroupB => report.stage_b = Some(stage_report),
        }
        if aborted {
            report.status = match stage {
                AttackStage::GroupA => RoundStatus::AbortedStageA,
                AttackStage::GroupB => RoundStatus::AbortedStageB,
            };
            report.survivors = store.intact_indices().len();
            return Err(Error::DetectionAbort {
                stage: match stage {
                    AttackStage::GroupA => 'A',
                    AttackStage::GroupB => 'B',
                },
                rate,
                report: Box::new(report),
            });
        }
    }
    debug_assert!(store.c_particles_never_left());

    let survivors = store.intact_indices().len();
    report.survivors = survivors;
    report.bits.side_channel_bits = bits_to_address(survivors);

    // Fix the cover and, when embedding, the position m. A random cover is
    // redrawn until the pattern exists; a supplied cover is never padded.
    let (words, m) = if let Some(cover) = &config.cover {
        let m = if config.embed {
            Some(choose_m(cover, config.secret, config.selector, &mut rng)?)
        } else {
            None
        };
        (cover.clone(), m)
    } else {
        let mut attempt = 0;
        loop {
            let words: Vec<GhzCode> = (0..survivors)
                .map(|_| GhzCode::new(rng.gen_range(0..8u8)).expect("3-bit"))
                .collect();
            if !config.embed {
                break (words, None);
            }
            match choose_m(&words, config.secret, config.selector, &mut rng) {
                Ok(m) => break (words, Some(m)),
                Err(e) => {
                    attempt += 1;
                    if attempt >= config.max_cover_attempts {
                        return Err(e);
                    }
                }
            }
        }
    };

    s3_encode_cover(&mut store, &words)?;
    if let Some(m) = m {
        s4_hide(&mut store, &words, m)?;
        report.embedded = Some(HiddenBlock {
            secret: config.secret,
            selector: config.selector.code(),
        });
        report.m = Some(m);
    }
    return_to_bob(&mut store)?;
    debug_assert!(store.c_particles_never_left());

    let table = DecodeTable::cached()?;
    let decoded = s5_decode(store, m, table, &mut rng)?;

    let cover_matches = decoded
        .words
        .iter()
        .enumerate()
        .all(|(pos, w)| match m {
            Some(m) if pos == m + 1 => w.is_none(),
            _ => *w == Some(words[pos]),
        });
    report.cover_matches = Some(cover_matches);
    report.cover_decoded = decoded.words.clone();
    if let (Some(secret), Some(selector), Some(info)) =
        (decoded.secret, decoded.selector, decoded.info_at_m)
    {
        report.decoded = Some(DecodedBlock {
            secret,
            selector,
            info_at_m: info,
        });
    }
    report.bits.covert_bits = if m.is_some() { 6 } else { 0 };
    report.bits.auxiliary_triplets = usize::from(m.is_some());
    report.bits.cover_bits = 3 * (survivors - report.bits.auxiliary_triplets);
    Ok(report)
}

/// Bits needed to name a position in a sequence of length `len`.
fn bits_to_address(len: usize) -> u32 {
    if len <= 1 {
        0
    } else {
        (len - 1).ilog2() + 1
    }
}

/// One row of the imperceptibility sweep: how often a 6-bit neighborhood
/// pattern (or, with `selector` = None, any pattern carrying the secret)
/// occurs in uniform random covers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub length: usize,
    pub reps: usize,
    pub secret: GhzCode,
    /// None aggregates the eight selectors of this secret.
    pub selector: Option<GhzCode>,
    /// Candidate positions across all reps: (length − 2) · reps.
    pub candidates: usize,
    pub hits: usize,
    pub observed_frequency: f64,
    /// 1/64 per pattern, 1/8 per secret.
    pub expected_frequency: f64,
    pub z_score: f64,
}

/// Frequency statistics of eligible embedding positions over uniform random
/// covers: every 6-bit pattern should occur at rate 1/64 and every secret's
/// union at 1/8. Covers for each length are drawn from a seed offset by the
/// length, so rows are independent of the length list's order.
pub fn sweep_cover_statistics(lengths: &[usize], reps: usize, seed: u64) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::new();
    for &length in lengths {
        if length < 64 {
            return Err(Error::InvalidConfig(format!(
                "sweep length {length} < 64"
            )));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(length as u64));
        // hits[selector][secret]
        let mut hits = [[0usize; 8]; 8];
        for _ in 0..reps {
            let words: Vec<GhzCode> = (0..length)
                .map(|_| GhzCode::new(rng.gen_range(0..8u8)).expect("3-bit"))
                .collect();
            for p in 1..length - 1 {
                let selector = words[p - 1].bits() as usize;
                let secret = (words[p - 1] ^ words[p]).bits() as usize;
                hits[selector][secret] += 1;
            }
        }
        let candidates = (length - 2) * reps;
        for secret in 0..8u8 {
            for selector in 0..8u8 {
                let h = hits[selector as usize][secret as usize];
                cells.push(SweepCell {
                    length,
                    reps,
                    secret: GhzCode::new(secret)?,
                    selector: Some(GhzCode::new(selector)?),
                    candidates,
                    hits: h,
                    observed_frequency: h as f64 / candidates as f64,
                    expected_frequency: 1.0 / 64.0,
                    z_score: crate::stats::count_z_score(h, candidates, 1.0 / 64.0),
                });
            }
            let union: usize = (0..8).map(|sel| hits[sel][secret as usize]).sum();
            cells.push(SweepCell {
                length,
                reps,
                secret: GhzCode::new(secret)?,
                selector: None,
                candidates,
                hits: union,
                observed_frequency: union as f64 / candidates as f64,
                expected_frequency: 1.0 / 8.0,
                z_score: crate::stats::count_z_score(union, candidates, 1.0 / 8.0),
            });
        }
    }
    Ok(cells)
}
