//! Command-line front end: identity verification, table dumps, end-to-end
//! protocol runs, attack experiments, and cover sweeps, all reproducible
//! from the printed invocation line.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use ghz_stego::adversary::{run_attack_experiment, AttackStage, EveStrategy};
use ghz_stego::ghz::{GhzCode, GhzLabel};
use ghz_stego::protocol::{run_round, sweep_cover_statistics, ProtocolConfig, RoundReport};
use ghz_stego::swapping::{swap_distribution, BellTriple, DecodeTable, PairSelector};
use ghz_stego::verify::{run_identity_suite, VerifyOptions};
use ghz_stego::Error;

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_DETECTION_ABORT: i32 = 2;
const EXIT_NO_VALID_POSITION: i32 = 3;
const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "ghz-stego",
    version,
    about = "Deterministic simulator of a GHZ-state steganography protocol",
    after_help = "Exit codes: 0 success, 1 failed identity check, 2 detection abort, \
                  3 no valid embedding position, 64 usage error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the exhaustive analytic identity suite (alphabet, swapping
    /// algebra, detection correlations) and exit nonzero on any failure.
    Verify {
        /// Negative control: breaks the Bell sign convention on purpose.
        #[arg(long, hide = true)]
        perturb_bell_convention: bool,
    },
    /// Print the 8x8 result-collection table and the 64-entry decode table.
    Tables {
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Execute one full protocol round and report it.
    Run {
        /// Number of GHZ triplets to prepare.
        #[arg(long, default_value_t = 1024)]
        n: usize,
        /// 3-bit secret, e.g. 100.
        #[arg(long, value_parser = parse_code, default_value = "100")]
        secret: GhzCode,
        /// 3-bit initial-state pair selector, e.g. 000.
        #[arg(long, value_parser = parse_code, default_value = "000")]
        selector: GhzCode,
        /// Fraction of triplets consumed per detection stage.
        #[arg(long, default_value_t = 0.1)]
        detect_fraction: f64,
        /// Mismatch rate above which the round aborts (0 = any mismatch).
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// Eavesdropper on the quantum channel.
        #[arg(long, value_enum, default_value_t = EveArg::None)]
        eve: EveArg,
        /// Probe strength beta^2 (only with --eve probe).
        #[arg(long, default_value_t = 0.1)]
        beta2: f64,
        /// Random covers to try before reporting no valid position.
        #[arg(long, default_value_t = 64)]
        cover_attempts: usize,
        #[arg(long, env = "GHZ_STEGO_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Monte Carlo detection error rate under a chosen attack.
    Attack {
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = StageArg::A)]
        stage: StageArg,
        /// Detection samples to simulate (>= 10000).
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Probe strength beta^2 (only with --strategy probe).
        #[arg(long, default_value_t = 0.1)]
        beta2: f64,
        /// Fail (exit 1) when the empirical rate strays more than this many
        /// binomial standard errors from theory.
        #[arg(long, default_value_t = 5.0)]
        max_sigma: f64,
        #[arg(long, env = "GHZ_STEGO_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// CSV statistics of eligible embedding positions in random covers.
    Sweep {
        /// Cover lengths, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "6400")]
        lengths: Vec<usize>,
        /// Covers drawn per length.
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, env = "GHZ_STEGO_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum EveArg {
    None,
    Mrz,
    Mrx,
    MrRandom,
    Probe,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum StrategyArg {
    Mrz,
    Mrx,
    MrRandom,
    Probe,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum StageArg {
    A,
    B,
}

fn parse_code(s: &str) -> Result<GhzCode, String> {
    GhzCode::from_bit_str(s).map_err(|_| format!("{s:?} is not a 3-bit word like 100"))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            exit(code);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = dispatch(cli, &mut out).and_then(|code| out.flush().map(|()| code));
    let code = match result {
        Ok(code) => code,
        // Downstream consumers like `head` may close the pipe early.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            eprintln!("i/o error: {e}");
            EXIT_CHECK_FAILED
        }
    };
    exit(code);
}

fn dispatch(cli: Cli, out: &mut impl Write) -> io::Result<i32> {
    match cli.cmd {
        Cmd::Verify {
            perturb_bell_convention,
        } => cmd_verify(perturb_bell_convention, out),
        Cmd::Tables { json } => cmd_tables(json, out),
        Cmd::Run {
            n,
            secret,
            selector,
            detect_fraction,
            threshold,
            eve,
            beta2,
            cover_attempts,
            seed,
            json,
        } => {
            let args = RunArgs {
                n,
                secret,
                selector,
                detect_fraction,
                threshold,
                eve,
                beta2,
                cover_attempts,
                seed,
                json,
            };
            cmd_run(&args, out)
        }
        Cmd::Attack {
            strategy,
            stage,
            trials,
            beta2,
            max_sigma,
            seed,
        } => cmd_attack(strategy, stage, trials, beta2, max_sigma, seed, out),
        Cmd::Sweep {
            lengths,
            reps,
            seed,
        } => cmd_sweep(&lengths, reps, seed, out),
    }
}

fn cmd_verify(perturb: bool, out: &mut impl Write) -> io::Result<i32> {
    writeln!(out, "# ghz-stego verify")?;
    let report = match run_identity_suite(&VerifyOptions {
        perturb_bell_convention: perturb,
    }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("identity suite could not run: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    for check in &report.checks {
        let tag = if check.passed { "ok  " } else { "FAIL" };
        writeln!(out, "{tag} {:<28} {}", check.name, check.detail)?;
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    writeln!(out, "{passed}/{} identity checks passed", report.checks.len())?;
    match report.first_failure() {
        None => Ok(EXIT_OK),
        Some(first) => {
            writeln!(out, "first failing identity: {}", first.name)?;
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn cmd_tables(json: bool, out: &mut impl Write) -> io::Result<i32> {
    let table = match DecodeTable::cached() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("decode table construction failed: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    // Row i, column j: the collection reached by swapping Psi_{i+1} with
    // Psi_{j+1}, read back through the enumeration-built decode table.
    let codes: Vec<Vec<String>> = GhzLabel::ALL
        .iter()
        .map(|&i| {
            GhzLabel::ALL
                .iter()
                .map(|&j| {
                    let t = swap_distribution(i, j)
                        .support()
                        .next()
                        .expect("support is never empty");
                    table.decode(t).to_string()
                })
                .collect()
        })
        .collect();
    if json {
        let decode_entries: Vec<serde_json::Value> = BellTriple::all()
            .map(|t| {
                serde_json::json!({
                    "a": t.a.to_string(),
                    "b": t.b.to_string(),
                    "c": t.c.to_string(),
                    "code": table.decode(t).to_string(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "schema": "ghz-stego-tables/1",
            "code_table": codes,
            "decode_table": decode_entries,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"))?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "# ghz-stego tables")?;
    writeln!(out, "result collections (row state ⊗ column state → 3-bit code):")?;
    let header: Vec<String> = (0..8).map(|j| format!("{j:03b}")).collect();
    writeln!(out, "        {}", header.join(" "))?;
    for (i, row) in codes.iter().enumerate() {
        writeln!(out, "    {:03b} {}", i, row.join(" "))?;
    }
    writeln!(out)?;
    writeln!(out, "decode table (Bell triple → secret), grouped by collection:")?;
    for code in GhzCode::all() {
        let triples: Vec<String> = table
            .preimage(code)
            .iter()
            .map(|t| t.to_string())
            .collect();
        writeln!(out, "    {code}: {}", triples.join(" "))?;
    }
    Ok(EXIT_OK)
}

struct RunArgs {
    n: usize,
    secret: GhzCode,
    selector: GhzCode,
    detect_fraction: f64,
    threshold: f64,
    eve: EveArg,
    beta2: f64,
    cover_attempts: usize,
    seed: u64,
    json: Option<PathBuf>,
}

fn cmd_run(args: &RunArgs, out: &mut impl Write) -> io::Result<i32> {
    let eve_strategy = match eve_strategy(args.eve, args.beta2) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("{msg}");
            return Ok(EXIT_USAGE);
        }
    };
    let mut config = ProtocolConfig::new(
        args.n,
        args.secret,
        PairSelector::new(args.selector),
        args.seed,
    );
    config.detect_fraction = args.detect_fraction;
    config.detect_threshold = args.threshold;
    config.eve = eve_strategy;
    config.max_cover_attempts = args.cover_attempts;
    writeln!(
        out,
        "# ghz-stego run --n {} --secret {} --selector {} --detect-fraction {} \
         --threshold {} --eve {} --beta2 {} --cover-attempts {} --seed {}",
        args.n,
        args.secret,
        args.selector,
        args.detect_fraction,
        args.threshold,
        eve_name(args.eve),
        args.beta2,
        args.cover_attempts,
        args.seed
    )?;
    match run_round(&config) {
        Ok(report) => {
            print_round(&report, out)?;
            if write_report(&report, args.json.as_deref(), out)?.is_err() {
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(EXIT_OK)
        }
        Err(Error::DetectionAbort {
            stage,
            rate,
            report,
        }) => {
            print_round(&report, out)?;
            writeln!(
                out,
                "aborted at stage {stage}: mismatch rate {rate:.4} > threshold {}",
                args.threshold
            )?;
            if write_report(&report, args.json.as_deref(), out)?.is_err() {
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(EXIT_DETECTION_ABORT)
        }
        Err(e @ Error::NoValidPosition { .. }) => {
            writeln!(out, "{e}")?;
            Ok(EXIT_NO_VALID_POSITION)
        }
        Err(e @ (Error::InvalidConfig(_) | Error::InvalidStrategy(_))) => {
            eprintln!("{e}");
            Ok(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("round failed: {e}");
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn eve_strategy(eve: EveArg, beta2: f64) -> Result<Option<EveStrategy>, String> {
    match eve {
        EveArg::None => Ok(None),
        EveArg::Mrz => Ok(Some(EveStrategy::MeasureResendZ)),
        EveArg::Mrx => Ok(Some(EveStrategy::MeasureResendX)),
        EveArg::MrRandom => Ok(Some(EveStrategy::MeasureResendRandom)),
        EveArg::Probe => EveStrategy::probe_from_beta_sqr(beta2)
            .map(Some)
            .map_err(|e| e.to_string()),
    }
}

fn eve_name(eve: EveArg) -> &'static str {
    match eve {
        EveArg::None => "none",
        EveArg::Mrz => "mrz",
        EveArg::Mrx => "mrx",
        EveArg::MrRandom => "mr-random",
        EveArg::Probe => "probe",
    }
}

fn print_round(report: &RoundReport, out: &mut impl Write) -> io::Result<()> {
    if let Some(a) = &report.stage_a {
        writeln!(
            out,
            "stage A: transmitted {}, checked {}, mismatches {} (rate {:.4})",
            a.transmitted, a.samples, a.mismatches, a.error_rate
        )?;
    }
    if let Some(b) = &report.stage_b {
        writeln!(
            out,
            "stage B: transmitted {}, checked {}, mismatches {} (rate {:.4})",
            b.transmitted, b.samples, b.mismatches, b.error_rate
        )?;
    }
    if report.survivors > 0 {
        writeln!(
            out,
            "survivors: {} triplets ({} side-channel bits to convey m)",
            report.survivors, report.bits.side_channel_bits
        )?;
    }
    if let Some(m) = report.m {
        writeln!(out, "m: {m}")?;
    }
    if let Some(embedded) = &report.embedded {
        writeln!(
            out,
            "embedded: secret {}, selector {}",
            embedded.secret, embedded.selector
        )?;
    }
    if let Some(decoded) = &report.decoded {
        writeln!(
            out,
            "decoded:  secret {}, selector {}, word at m {}",
            decoded.secret, decoded.selector, decoded.info_at_m
        )?;
    }
    if let Some(matches) = report.cover_matches {
        writeln!(out, "cover decoded correctly: {matches}")?;
    }
    writeln!(
        out,
        "bits: cover {}, covert {}, detection consumed {} triplets",
        report.bits.cover_bits, report.bits.covert_bits, report.bits.detection_consumed
    )
}

/// Outer error = stdout I/O; inner Err = file write failure (already logged).
fn write_report(
    report: &RoundReport,
    path: Option<&std::path::Path>,
    out: &mut impl Write,
) -> io::Result<Result<(), ()>> {
    let Some(path) = path else { return Ok(Ok(())) };
    let mut body = report.to_json();
    body.push('\n');
    match std::fs::write(path, body) {
        Ok(()) => {
            writeln!(out, "report written to {}", path.display())?;
            Ok(Ok(()))
        }
        Err(e) => {
            eprintln!("cannot write {}: {e}", path.display());
            Ok(Err(()))
        }
    }
}

fn cmd_attack(
    strategy: StrategyArg,
    stage: StageArg,
    trials: usize,
    beta2: f64,
    max_sigma: f64,
    seed: u64,
    out: &mut impl Write,
) -> io::Result<i32> {
    if trials < 10_000 {
        eprintln!("--trials must be at least 10000 for meaningful statistics");
        return Ok(EXIT_USAGE);
    }
    if !max_sigma.is_finite() || max_sigma <= 0.0 {
        eprintln!("--max-sigma must be positive");
        return Ok(EXIT_USAGE);
    }
    let strategy = match strategy {
        StrategyArg::Mrz => EveStrategy::MeasureResendZ,
        StrategyArg::Mrx => EveStrategy::MeasureResendX,
        StrategyArg::MrRandom => EveStrategy::MeasureResendRandom,
        StrategyArg::Probe => match EveStrategy::probe_from_beta_sqr(beta2) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{e}");
                return Ok(EXIT_USAGE);
            }
        },
    };
    let stage = match stage {
        StageArg::A => AttackStage::GroupA,
        StageArg::B => AttackStage::GroupB,
    };
    writeln!(
        out,
        "# ghz-stego attack --strategy {} --stage {} --trials {trials} --beta2 {beta2} \
         --max-sigma {max_sigma} --seed {seed}",
        strategy,
        stage.to_string().to_lowercase()
    )?;
    match run_attack_experiment(strategy, stage, trials, seed) {
        Ok(stats) => {
            writeln!(
                out,
                "{:<24} {:<5} {:>8} {:>9} {:>10} {:>11} {:>9} {:>6}",
                "strategy", "stage", "trials", "mismatch", "empirical", "theoretical", "stderr", "z"
            )?;
            writeln!(
                out,
                "{:<24} {:<5} {:>8} {:>9} {:>10.6} {:>11.6} {:>9.6} {:>6.2}",
                stats.strategy,
                stats.stage.to_string(),
                stats.trials,
                stats.mismatches,
                stats.empirical_rate,
                stats.theoretical_rate,
                stats.std_error,
                stats.z_score()
            )?;
            let within = stats.z_score() <= max_sigma;
            writeln!(out, "within {max_sigma} sigma of theory: {within}")?;
            Ok(if within { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Err(e) => {
            eprintln!("attack experiment failed: {e}");
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn cmd_sweep(lengths: &[usize], reps: usize, seed: u64, out: &mut impl Write) -> io::Result<i32> {
    let cells = match sweep_cover_statistics(lengths, reps, seed) {
        Ok(c) => c,
        Err(Error::InvalidConfig(msg)) => {
            eprintln!("{msg}");
            return Ok(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("sweep failed: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    writeln!(
        out,
        "length,reps,secret,selector,candidates,hits,observed_frequency,expected_frequency,z_score"
    )?;
    for cell in cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.3}",
            cell.length,
            cell.reps,
            cell.secret,
            cell.selector
                .map(|s| s.to_string())
                .unwrap_or_else(|| "total".into()),
            cell.candidates,
            cell.hits,
            cell.observed_frequency,
            cell.expected_frequency,
            cell.z_score
        )?;
    }
    Ok(EXIT_OK)
}
