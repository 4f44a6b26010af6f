//! Acceptance suite: one test per release criterion. Each test pins its
//! tolerance in code and prints a PASS line with the measured numbers.
//!
//! Criterion 8 drives the installed binary; everything else exercises the
//! library directly.

use std::process::Command;
use std::time::Instant;

use ghz_stego::adversary::{leak_m_attack, run_attack_experiment, AttackStage, EveStrategy};
use ghz_stego::ghz::{code_of, encode, ghz_state, label_of, GhzCode, GhzLabel};
use ghz_stego::protocol::{run_round, sweep_cover_statistics, ProtocolConfig, RoundStatus};
use ghz_stego::swapping::{swap_distribution, BellLabel, DecodeTable, PairSelector};
use ghz_stego::verify::{run_identity_suite, VerifyOptions};

fn label(k: u8) -> GhzLabel {
    GhzLabel::new(k).unwrap()
}

fn code(bits: u8) -> GhzCode {
    GhzCode::new(bits).unwrap()
}

/// Criterion 1 — exhaustive dense-coding alphabet at 1e-9, exact code
/// bijection, under one second.
#[test]
fn acceptance_1_alphabet_and_coding() {
    let start = Instant::now();
    let psi1 = ghz_state(label(1));
    for k in GhzLabel::ALL {
        let encoded = encode(&psi1, k, 0, 1).unwrap();
        assert!(
            encoded.equal_up_to_global_phase(&ghz_state(k), 1e-9),
            "U_{} does not reach Ψ{}",
            k.value(),
            k.value()
        );
    }
    for (k, bits) in GhzLabel::ALL.iter().zip(0u8..) {
        assert_eq!(code_of(*k), code(bits));
        assert_eq!(label_of(code(bits)), *k);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 PASS: 8/8 encodings at 1e-9 and exact bijection in {elapsed:?}");
}

/// Criterion 2 — swapping algebra: 8 outcomes of probability 1/8 (1e-12)
/// for all 64 pairs, decode = XOR everywhere, printed expansions and the
/// 111 collection reproduced, under five seconds.
#[test]
fn acceptance_2_swapping_algebra() {
    let start = Instant::now();
    let table = DecodeTable::cached().unwrap();
    for i in GhzLabel::ALL {
        for j in GhzLabel::ALL {
            let dist = swap_distribution(i, j);
            assert_eq!(dist.outcomes().len(), 8, "pair ({i}, {j})");
            for &(t, p) in dist.outcomes() {
                assert!((p - 0.125).abs() <= 1e-12, "pair ({i}, {j}): p = {p}");
                assert_eq!(
                    table.decode(t),
                    code_of(i) ^ code_of(j),
                    "pair ({i}, {j}), triple {t}"
                );
            }
        }
    }
    // Printed expansions and the 111 collection, via the identity suite.
    let report = run_identity_suite(&VerifyOptions::default()).unwrap();
    for name in [
        "swap-support-psi1-psi1",
        "swap-support-psi1-psi2",
        "swap-support-psi1-psi3",
        "swap-support-psi1-psi4",
        "collection-111",
    ] {
        let check = report.checks.iter().find(|c| c.name == name).unwrap();
        assert!(check.passed, "{name}: {}", check.detail);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 2 PASS: 64/64 pairs equidistributed and decode to XOR in {elapsed:?}");
}

/// Criterion 3 — detection correlations hold with probability 1 on an
/// undisturbed triplet, exhaustively over both analytic outcome supports.
#[test]
fn acceptance_3_detection_correlations() {
    use ghz_stego::ghz::{detection_consistent, CheckStage, DetectionBasis, DetectionOutcome};
    use ghz_stego::statevec::OrthonormalBasis;
    let psi1 = ghz_state(label(1));
    let mut combinations = 0usize;
    for (basis, db) in [
        (OrthonormalBasis::z_on(&[0, 1, 2]).unwrap(), DetectionBasis::Z),
        (OrthonormalBasis::x_on(&[0, 1, 2]).unwrap(), DetectionBasis::X),
    ] {
        let dist = psi1.outcome_distribution(&basis).unwrap();
        let support: Vec<usize> = dist
            .iter()
            .filter(|&&(_, p)| p > 1e-15)
            .map(|&(i, _)| i)
            .collect();
        assert_eq!(support.len(), if db == DetectionBasis::Z { 2 } else { 4 });
        for idx in support {
            let o: Vec<DetectionOutcome> = (0..3)
                .map(|q| DetectionOutcome {
                    basis: db,
                    flag: (idx >> (2 - q)) & 1 == 1,
                })
                .collect();
            assert!(detection_consistent(&o[..1], &o[1..], db, CheckStage::AfterGroupA).unwrap());
            assert!(detection_consistent(&o[..2], &o[2..], db, CheckStage::AfterGroupB).unwrap());
            combinations += 2;
        }
    }
    println!("ACCEPTANCE 3 PASS: all {combinations} supported outcome combinations consistent");
}

/// Criterion 4 — Monte Carlo at 1e5 trials reproduces 25% (measure-resend
/// Z), 37.5% (measure-resend X), and τ = β² for β² ∈ {0, 0.1, 0.3, 0.5},
/// each within 5σ, in under 30 seconds total.
#[test]
fn acceptance_4_attack_error_rates() {
    let start = Instant::now();
    let trials = 100_000;
    let mut lines = Vec::new();
    for (strategy, want) in [
        (EveStrategy::MeasureResendZ, 0.25),
        (EveStrategy::MeasureResendX, 0.375),
    ] {
        let stats = run_attack_experiment(strategy, AttackStage::GroupA, trials, 1001).unwrap();
        assert_eq!(stats.theoretical_rate, want);
        assert!(
            stats.z_score() <= 5.0,
            "{strategy}: empirical {} vs {} (z = {})",
            stats.empirical_rate,
            want,
            stats.z_score()
        );
        lines.push(format!("{strategy} {:.4}", stats.empirical_rate));
    }
    for beta_sqr in [0.0, 0.1, 0.3, 0.5] {
        let strategy = EveStrategy::probe_from_beta_sqr(beta_sqr).unwrap();
        let stats = run_attack_experiment(strategy, AttackStage::GroupA, trials, 2002).unwrap();
        assert!(
            stats.z_score() <= 5.0,
            "probe β² = {beta_sqr}: empirical {} (z = {})",
            stats.empirical_rate,
            stats.z_score()
        );
        lines.push(format!("probe(β²={beta_sqr}) {:.4}", stats.empirical_rate));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 4 PASS: {} within 5σ of theory in {elapsed:?}",
        lines.join(", ")
    );
}

/// Criterion 5 — every (secret, selector) pair decodes exactly over a clean
/// n = 1024 round, recovering the cover word at m: 64/64 in under a minute.
#[test]
fn acceptance_5_end_to_end_capacity() {
    let start = Instant::now();
    let mut successes = 0usize;
    for secret_bits in 0..8u8 {
        for selector_bits in 0..8u8 {
            let seed = 5000 + u64::from(secret_bits) * 8 + u64::from(selector_bits);
            let config = ProtocolConfig::new(
                1024,
                code(secret_bits),
                PairSelector::new(code(selector_bits)),
                seed,
            );
            let report = run_round(&config).unwrap();
            assert_eq!(report.status, RoundStatus::Completed);
            let decoded = report.decoded.as_ref().unwrap();
            assert_eq!(decoded.secret, code(secret_bits));
            assert_eq!(decoded.selector, code(selector_bits));
            // The word at m is selector ⊕ secret by the consistency
            // condition, and the report checks it against Alice's cover.
            assert_eq!(decoded.info_at_m, code(selector_bits ^ secret_bits));
            assert_eq!(report.cover_matches, Some(true));
            assert_eq!(report.bits.covert_bits, 6);
            successes += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("ACCEPTANCE 5 PASS: {successes}/64 six-bit rounds decoded exactly in {elapsed:?}");
}

/// Criterion 6 — uniform covers of length 6400 (100 reps): each 6-bit
/// pattern at frequency 1/64 and each secret's union at 1/8, within 5σ.
#[test]
fn acceptance_6_imperceptibility_statistics() {
    let cells = sweep_cover_statistics(&[6400], 100, 20_260_810).unwrap();
    assert_eq!(cells.len(), 72);
    let mut worst: f64 = 0.0;
    for cell in &cells {
        assert!(
            cell.z_score.abs() <= 5.0,
            "secret {} selector {:?}: frequency {} vs {} (z = {})",
            cell.secret,
            cell.selector,
            cell.observed_frequency,
            cell.expected_frequency,
            cell.z_score
        );
        worst = worst.max(cell.z_score.abs());
    }
    println!("ACCEPTANCE 6 PASS: 64 patterns at 1/64 and 8 unions at 1/8, worst |z| = {worst:.2}");
}

/// Criterion 7 — with the C-pair outcome withheld, every one of the 16
/// A/B outcome pairs leaves more than one consistent secret.
#[test]
fn acceptance_7_hidden_channel_opacity() {
    let table = DecodeTable::cached().unwrap();
    let mut checked = 0usize;
    for a in BellLabel::ALL {
        for b in BellLabel::ALL {
            let result = leak_m_attack(a, b, table);
            assert!(
                result.consistent_secrets.len() > 1,
                "({a}, {b}) exposes the secret"
            );
            checked += 1;
        }
    }
    println!("ACCEPTANCE 7 PASS: {checked}/16 withheld-C views remain ambiguous");
}

fn run_cli(args: &[&str]) -> (String, String, i32) {
    let output = Command::new(env!("CARGO_BIN_EXE_ghz-stego"))
        .args(args)
        .env_remove("GHZ_STEGO_SEED")
        .output()
        .expect("binary runs");
    (
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
        output.status.code().unwrap_or(-1),
    )
}

/// Criterion 8 — identical seeds give byte-identical reports for every
/// subcommand, including JSON files.
#[test]
fn acceptance_8_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let json_a = dir.path().join("a.json");
    let json_b = dir.path().join("b.json");
    let cases: Vec<Vec<String>> = vec![
        vec!["verify".into()],
        vec!["tables".into(), "--json".into()],
        vec![
            "run".into(),
            "--n".into(),
            "64".into(),
            "--secret".into(),
            "011".into(),
            "--selector".into(),
            "101".into(),
            "--seed".into(),
            "9".into(),
        ],
        vec![
            "attack".into(),
            "--strategy".into(),
            "probe".into(),
            "--beta2".into(),
            "0.3".into(),
            "--trials".into(),
            "10000".into(),
            "--seed".into(),
            "4".into(),
        ],
        vec![
            "sweep".into(),
            "--lengths".into(),
            "256".into(),
            "--reps".into(),
            "4".into(),
            "--seed".into(),
            "3".into(),
        ],
    ];
    for case in &cases {
        let args: Vec<&str> = case.iter().map(String::as_str).collect();
        let first = run_cli(&args);
        let second = run_cli(&args);
        assert_eq!(first, second, "non-deterministic output for {case:?}");
    }
    // The JSON report file must be byte-identical as well. Separate paths,
    // so the comparison strips the path echo line.
    let base = [
        "run", "--n", "64", "--secret", "011", "--selector", "101", "--seed", "9", "--json",
    ];
    let mut with_a: Vec<&str> = base.to_vec();
    let path_a = json_a.to_str().unwrap();
    with_a.push(path_a);
    let mut with_b: Vec<&str> = base.to_vec();
    let path_b = json_b.to_str().unwrap();
    with_b.push(path_b);
    let (_, _, code_a) = run_cli(&with_a);
    let (_, _, code_b) = run_cli(&with_b);
    assert_eq!((code_a, code_b), (0, 0));
    let bytes_a = std::fs::read(&json_a).unwrap();
    let bytes_b = std::fs::read(&json_b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b, "JSON reports differ across runs");
    println!("ACCEPTANCE 8 PASS: {} subcommands byte-identical across reruns", cases.len() + 1);
}
