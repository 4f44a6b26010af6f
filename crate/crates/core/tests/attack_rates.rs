//! Monte Carlo agreement between every built-in adversary strategy and its
//! closed-form detection error rate, on both transmission stages.

use ghz_stego::adversary::{
    analytic_error, run_attack_experiment, theoretical_error, AttackStage, EveStrategy,
};

fn strategies() -> Vec<EveStrategy> {
    vec![
        EveStrategy::MeasureResendZ,
        EveStrategy::MeasureResendX,
        EveStrategy::MeasureResendRandom,
        EveStrategy::probe_from_beta_sqr(0.2).unwrap(),
    ]
}

#[test]
fn every_strategy_matches_theory_on_both_stages() {
    let trials = 100_000;
    for stage in [AttackStage::GroupA, AttackStage::GroupB] {
        for strategy in strategies() {
            let stats = run_attack_experiment(strategy, stage, trials, 31_337).unwrap();
            assert!(
                stats.z_score() <= 5.0,
                "{strategy} on stage {stage}: empirical {} vs theoretical {} (z = {:.2})",
                stats.empirical_rate,
                stats.theoretical_rate,
                stats.z_score()
            );
        }
    }
}

#[test]
fn closed_forms_agree_with_the_engine_oracle() {
    // The engine-side rate is exact; the closed forms must match it to
    // floating-point precision, independent of any sampling.
    for stage in [AttackStage::GroupA, AttackStage::GroupB] {
        for strategy in strategies() {
            let engine = analytic_error(strategy, stage).unwrap();
            let formula = theoretical_error(strategy, stage);
            assert!(
                (engine - formula).abs() < 1e-12,
                "{strategy} on stage {stage}: engine {engine} vs formula {formula}"
            );
        }
    }
}
