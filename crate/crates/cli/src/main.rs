mod config;
mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use circulant_ci::cayley::parse_residues;
use circulant_ci::keyspace::key_partition;
use circulant_ci::zn::units;
use circulant_ci::{ConnectionSet, Engine, Error, Mode};
use clap::{Parser, Subcommand};
use rand::rngs::Xoshiro256PlusPlus;
use rand::{RngExt, SeedableRng};
use serde_json::{json, Value};

use config::{Format, Overrides, RunConfig};

#[derive(Parser)]
#[command(
    name = "circulant",
    version,
    about = "Exact isomorphism and CI-property engine for circulant digraphs over Z_n"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for valency sweeps.
    #[arg(long, global = true, env = "CIRC_WORKERS")]
    workers: Option<usize>,
    /// Largest n the brute-force oracle accepts.
    #[arg(long, global = true)]
    oracle_cutoff: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Solving sets up to this size are tabulated in memory.
    #[arg(long, global = true)]
    cache_limit: Option<usize>,
    /// Optional key=value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Where to write the dump when a disagreement is found.
    #[arg(long, global = true)]
    dump: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the key of a connection set.
    Key {
        n: u64,
        set: String,
        /// Also print the key partition.
        #[arg(long)]
        partition: bool,
    },
    /// Decide whether Cay(Z_n, S) and Cay(Z_n, T) are isomorphic.
    Iso {
        n: u64,
        s: String,
        t: String,
        #[arg(long, default_value = "digraph")]
        mode: Mode,
        /// Cross-check against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        /// Add missing inverses in graph mode.
        #[arg(long)]
        close_inverses: bool,
    },
    /// Decide whether S is a CI-set.
    Ci {
        n: u64,
        set: String,
        #[arg(long, default_value = "digraph")]
        mode: Mode,
        #[arg(long)]
        close_inverses: bool,
    },
    /// Exhaustive m-group status of Z_n against the closed-form predicate.
    Classify {
        n: u64,
        m: usize,
        #[arg(long, default_value = "digraph")]
        mode: Mode,
    },
    /// Sweep every n ≤ n-max and applicable m ≤ m-max.
    Verify {
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        m_max: usize,
        #[arg(long, default_value = "digraph")]
        mode: Mode,
        /// Random pairs per modulus cross-checked against the oracle.
        #[arg(long, default_value_t = 0)]
        oracle_samples: usize,
    },
    /// List the non-CI witness families that apply to Z_n.
    Witness {
        n: u64,
        #[arg(long, default_value = "digraph")]
        mode: Mode,
    },
}

enum Failure {
    Usage(String),
    Refusal(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleCutoff { .. } => Failure::Refusal(e.to_string()),
            Error::Internal(msg) => Failure::Internal(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Rendered output, plus a dump when the command found a disagreement.
struct Outcome {
    stdout: String,
    disagreement: Option<(String, Value)>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            disagreement: None,
        }
    }
}

fn connection_set(n: u64, text: &str, mode: Mode, close: bool) -> Result<ConnectionSet, Failure> {
    let members = parse_residues(text)?;
    let set = if close {
        ConnectionSet::with_inverses(n, members, mode)
    } else {
        ConnectionSet::new(n, members, mode)
    };
    set.map_err(|e| match e {
        Error::InvalidConnectionSet(msg) if mode == Mode::Graph && !close => Failure::Usage(format!(
            "invalid connection set: {msg} (use --close-inverses to add inverses)"
        )),
        other => other.into(),
    })
}

fn cmd_key(engine: &Engine, format: Format, n: u64, text: &str, partition: bool) -> Result<Outcome, Failure> {
    let set = connection_set(n, text, Mode::Digraph, false)?;
    let key = engine.key_of_set(&set)?;
    let classes = partition.then(|| key_partition(&key).classes().to_vec());
    let out = match format {
        Format::Json => {
            let mut value = json!({ "n": n, "set": set, "key": key });
            if let Some(classes) = &classes {
                value["partition"] = json!(classes);
            }
            render::json(&value)
        }
        Format::Csv => {
            let mut header = vec!["n", "set", "key"];
            let mut row = vec![n.to_string(), render::compact(&set), render::compact(&key)];
            if let Some(classes) = &classes {
                header.push("partition");
                row.push(render::compact(classes));
            }
            render::csv_table(&header, &[row])
        }
        Format::Text => {
            let mut out = format!("{key}\n");
            for class in classes.iter().flatten() {
                out.push_str(&format!("{}\n", render::compact(class)));
            }
            out
        }
    };
    Ok(Outcome::ok(out))
}

#[allow(clippy::too_many_arguments)]
fn cmd_iso(
    engine: &Engine,
    format: Format,
    n: u64,
    s: &str,
    t: &str,
    mode: Mode,
    oracle: bool,
    close: bool,
) -> Result<Outcome, Failure> {
    let s = connection_set(n, s, mode, close)?;
    let t = connection_set(n, t, mode, close)?;
    if s.is_empty() || t.is_empty() {
        return Err(Failure::Usage(Error::EmptySet.to_string()));
    }
    let verdict = engine.muzychuk_isomorphic(&s, &t)?;
    let brute = if oracle {
        Some(engine.oracle_isomorphic(&s, &t)?.is_some())
    } else {
        None
    };
    let agree = brute.map(|b| b == verdict.isomorphic);
    let mut value = serde_json::to_value(&verdict).expect("verdict serializes");
    if let (Some(b), Some(a)) = (brute, agree) {
        value["oracle"] = json!(b);
        value["agree"] = json!(a);
    }
    let out = match format {
        Format::Json => render::json(&value),
        Format::Csv => {
            let row = vec![
                verdict.isomorphic.to_string(),
                value["reason"].as_str().unwrap_or_default().to_string(),
                render::compact(&value["multiplier"]),
                render::compact(&verdict.key_s),
                render::compact(&verdict.key_t),
                render::opt_bool(brute),
                render::opt_bool(agree),
            ];
            render::csv_table(
                &[
                    "isomorphic",
                    "reason",
                    "multiplier",
                    "key_s",
                    "key_t",
                    "oracle",
                    "agree",
                ],
                &[row],
            )
        }
        Format::Text => {
            let mut out = if verdict.isomorphic {
                let m = &verdict.witness_multiplier;
                format!(
                    "isomorphic: {s} -> {t} via multiplier {}\n",
                    m.as_ref().map(render::compact).unwrap_or_default()
                )
            } else if verdict.key_s != verdict.key_t {
                format!(
                    "not isomorphic: keys differ ({} vs {})\n",
                    verdict.key_s, verdict.key_t
                )
            } else {
                format!(
                    "not isomorphic: no multiplier for key {} maps {s} to {t}\n",
                    verdict.key_s
                )
            };
            if let (Some(b), Some(a)) = (brute, agree) {
                out.push_str(&format!(
                    "oracle: {b}, {}\n",
                    if a { "agree" } else { "DISAGREE" }
                ));
            }
            out
        }
    };
    let disagreement = (agree == Some(false)).then(|| {
        (
            format!("criterion and oracle disagree on {s} and {t} in Z_{n}"),
            json!({ "command": "iso", "n": n, "mode": mode, "s": s, "t": t, "verdict": value }),
        )
    });
    Ok(Outcome {
        stdout: out,
        disagreement,
    })
}

fn cmd_ci(
    engine: &Engine,
    format: Format,
    n: u64,
    text: &str,
    mode: Mode,
    close: bool,
) -> Result<Outcome, Failure> {
    let set = connection_set(n, text, mode, close)?;
    let verdict = engine.decide_ci(&set)?;
    let out = match format {
        Format::Json => render::json(&json!({
            "n": n,
            "set": set,
            "ci": verdict.is_ci,
            "witness": verdict.witness,
            "fast_path": verdict.fast_path,
        })),
        Format::Csv => render::csv_table(
            &["n", "set", "ci", "fast_path", "witness"],
            &[vec![
                n.to_string(),
                render::compact(&set),
                verdict.is_ci.to_string(),
                verdict.fast_path.as_str().to_string(),
                verdict.witness.as_ref().map(render::compact).unwrap_or_default(),
            ]],
        ),
        Format::Text => match &verdict.witness {
            Some(w) => format!("{set} is not CI: isomorphic to {w}, which is not a unit multiple\n"),
            None => format!("{set} is CI (fast path {})\n", verdict.fast_path.as_str()),
        },
    };
    Ok(Outcome::ok(out))
}

fn render_reports(format: Format, reports: &[circulant_ci::ClassificationReport], single: bool) -> String {
    match format {
        Format::Json if single => render::json(&reports[0]),
        Format::Json => render::json(reports),
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports.iter().map(render::report_row).collect();
            render::csv_table(&render::REPORT_HEADER, &rows)
        }
        Format::Text => reports.iter().map(render::report_text).collect(),
    }
}

fn report_disagreement(
    command: &str,
    reports: &[circulant_ci::ClassificationReport],
) -> Option<(String, Value)> {
    let bad: Vec<_> = reports.iter().filter(|r| r.agreement == Some(false)).collect();
    let first = bad.first()?;
    Some((
        format!(
            "exhaustive search and predicate disagree at n = {}, m = {} ({} cells in total)",
            first.n,
            first.m,
            bad.len()
        ),
        json!({ "command": command, "disagreements": bad }),
    ))
}

fn cmd_classify(engine: &Engine, format: Format, n: u64, m: usize, mode: Mode) -> Result<Outcome, Failure> {
    let report = engine.is_m_group(n, m, mode)?;
    let reports = [report];
    Ok(Outcome {
        stdout: render_reports(format, &reports, true),
        disagreement: report_disagreement("classify", &reports),
    })
}

/// A random connection set of `Z_n` in `mode`, never empty.
fn random_set(rng: &mut Xoshiro256PlusPlus, n: u64, mode: Mode) -> ConnectionSet {
    loop {
        let members: Vec<u64> = (1..n).filter(|_| rng.random_bool(0.5)).collect();
        if members.is_empty() {
            continue;
        }
        return ConnectionSet::with_inverses(n, members, mode).expect("residues below n");
    }
}

/// Compares the criterion with the oracle on seeded random pairs. Half of the
/// pairs use an image under the solving set, so both answers are exercised.
fn oracle_samples(
    engine: &Engine,
    n_max: u64,
    mode: Mode,
    per_modulus: usize,
    seed: u64,
) -> Result<(usize, Vec<Value>), Failure> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let top = n_max.min(engine.config().oracle_cutoff);
    let mut compared = 0;
    let mut bad = Vec::new();
    for n in 2..=top {
        for _ in 0..per_modulus {
            let s = random_set(&mut rng, n, mode);
            let t = if rng.random_bool(0.5) {
                let class = engine.isomorphism_class(&s)?;
                let image = class[rng.random_range(0..class.len())].clone();
                let us = units(n)?;
                image.scale(us[rng.random_range(0..us.len())])
            } else {
                random_set(&mut rng, n, mode)
            };
            if s.len() != t.len() {
                continue;
            }
            let verdict = engine.muzychuk_isomorphic(&s, &t)?;
            let oracle = engine.oracle_isomorphic(&s, &t)?.is_some();
            compared += 1;
            if verdict.isomorphic != oracle {
                bad.push(
                    json!({ "n": n, "s": s, "t": t, "criterion": verdict.isomorphic, "oracle": oracle }),
                );
            }
        }
    }
    Ok((compared, bad))
}

fn cmd_verify(
    engine: &Engine,
    config: &RunConfig,
    n_max: u64,
    m_max: usize,
    mode: Mode,
    samples: usize,
) -> Result<Outcome, Failure> {
    if n_max < 2 {
        return Err(Failure::Usage("--n-max must be at least 2".into()));
    }
    let reports = engine.verify_theorems(n_max, m_max, mode)?;
    let mut disagreement = report_disagreement("verify", &reports);
    if samples > 0 {
        let (compared, bad) = oracle_samples(engine, n_max, mode, samples, config.seed)?;
        eprintln!(
            "oracle cross-check: {compared} pairs, {} disagreements (seed {})",
            bad.len(),
            config.seed
        );
        if !bad.is_empty() && disagreement.is_none() {
            disagreement = Some((
                format!("criterion and oracle disagree on {} sampled pairs", bad.len()),
                json!({ "command": "verify", "seed": config.seed, "oracle_disagreements": bad }),
            ));
        }
    }
    Ok(Outcome {
        stdout: render_reports(config.output_format, &reports, false),
        disagreement,
    })
}

fn cmd_witness(engine: &Engine, format: Format, n: u64, mode: Mode) -> Result<Outcome, Failure> {
    let witnesses = engine.witnesses(n, mode)?;
    let out = match format {
        Format::Json => render::json(&witnesses),
        Format::Csv => {
            let rows: Vec<Vec<String>> = witnesses.iter().map(render::witness_row).collect();
            render::csv_table(&["family", "p", "set", "confirmed", "witness"], &rows)
        }
        Format::Text if witnesses.is_empty() => format!("no witness family applies to Z_{n} ({mode})\n"),
        Format::Text => witnesses.iter().map(render::witness_text).collect(),
    };
    let unconfirmed: Vec<_> = witnesses.iter().filter(|w| !w.confirmed()).collect();
    let disagreement = (!unconfirmed.is_empty()).then(|| {
        (
            format!("{} witness sets in Z_{n} were judged CI", unconfirmed.len()),
            json!({ "command": "witness", "n": n, "mode": mode, "unconfirmed": unconfirmed }),
        )
    });
    Ok(Outcome {
        stdout: out,
        disagreement,
    })
}

fn default_dump_path() -> PathBuf {
    std::env::temp_dir().join(format!("circulant-dump-{}.json", std::process::id()))
}

fn write_dump(path: &Path, dump: &Value) -> std::io::Result<()> {
    fs::write(path, render::json(dump))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let overrides = Overrides {
        oracle_cutoff: cli.oracle_cutoff,
        solving_set_cache_limit: cli.cache_limit,
        workers: cli.workers,
        output_format: cli.format,
        seed: cli.seed,
    };
    let config = RunConfig::resolve(cli.config.as_deref(), &overrides).map_err(Failure::Usage)?;
    let engine = Engine::new(config.engine_config());
    let format = config.output_format;
    match cli.command {
        Command::Key { n, set, partition } => cmd_key(&engine, format, n, &set, partition),
        Command::Iso {
            n,
            s,
            t,
            mode,
            oracle,
            close_inverses,
        } => cmd_iso(&engine, format, n, &s, &t, mode, oracle, close_inverses),
        Command::Ci {
            n,
            set,
            mode,
            close_inverses,
        } => cmd_ci(&engine, format, n, &set, mode, close_inverses),
        Command::Classify { n, m, mode } => cmd_classify(&engine, format, n, m, mode),
        Command::Verify {
            n_max,
            m_max,
            mode,
            oracle_samples,
        } => cmd_verify(&engine, &config, n_max, m_max, mode, oracle_samples),
        Command::Witness { n, mode } => cmd_witness(&engine, format, n, mode),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dump_path = cli.dump.clone().unwrap_or_else(default_dump_path);
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            match outcome.disagreement {
                None => ExitCode::SUCCESS,
                Some((message, dump)) => {
                    eprintln!("error: {message}");
                    match write_dump(&dump_path, &dump) {
                        Ok(()) => eprintln!("dump written to {}", dump_path.display()),
                        Err(e) => eprintln!("cannot write dump {}: {e}", dump_path.display()),
                    }
                    ExitCode::from(3)
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refusal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
