//! `auction-lab`: run mechanisms, verification suites and the market
//! generator from the command line.
//!
//! Exit codes: 0 success (including inconclusive suites), 1 a property
//! failed, 2 usage or parse error, 3 brute-force bound exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use auction_lab::format::{parse_market, write_market, ProfileOverrides};
use auction_lab::mechanisms::outcome_summary;
use auction_lab::oracle::{
    run_suite, OpponentMode, Status, Suite, SuiteOptions, VerificationReport,
};
use auction_lab::report::{reports_csv, RunReport};
use auction_lab::{
    fixtures, generate, Error, GeneratorConfig, Market, Mechanism, Rational, Scalar, Topology,
};

#[derive(Parser, Debug)]
#[command(
    name = "auction-lab",
    version,
    about = "Diffusion auction runner and property checker"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run mechanisms on a market and print payments.
    Run(RunArgs),
    /// Check incentive and revenue properties on a market or generated corpus.
    Verify(VerifyArgs),
    /// Generate a random market file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Structured,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Market file, or the name of a bundled market (`fig1`).
    #[arg(long)]
    market: String,
    /// vcg, cna, vcg-wi, all, or a control (first-price, constant, loser-fee).
    #[arg(long, default_value = "all")]
    mechanism: String,
    /// Profile-override file: bids, declared neighbors, absent agents.
    #[arg(long)]
    deviations: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use exact rational arithmetic.
    #[arg(long)]
    exact: bool,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Market file or bundled market name.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    market: Option<String>,
    /// Generated corpus, e.g. "tree,seed=7,n=5" or "general,q=0.3,k=2".
    #[arg(long)]
    gen: Option<String>,
    /// ic, ir, monotone, characterization, nondegenerate, revenue, lemma1,
    /// allocation, or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Mechanisms for per-mechanism suites, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "vcg,cna")]
    mechanism: Vec<String>,
    /// Base seed for generated markets and sampled opponents.
    #[arg(long, env = "AUCTION_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// With --gen: number of markets (seeds seed, seed+1, ...). With
    /// --market: number of sampled opponent profiles besides the truthful one.
    #[arg(long)]
    trials: Option<usize>,
    /// Sampled opponent profiles per market besides the truthful one.
    #[arg(long)]
    opponents: Option<usize>,
    #[arg(long, default_value_t = auction_lab::oracle::DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    #[arg(long, default_value_t = auction_lab::oracle::DEFAULT_BUYER_BOUND)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    Tree,
    General,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long, env = "AUCTION_LAB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = TopologyArg::Tree)]
    topology: TopologyArg,
    #[arg(long, default_value_t = 0.2)]
    extra_edge_prob: f64,
    /// Intermediary count range `lo,hi` (or a single number).
    #[arg(long, default_value = "1,4")]
    intermediaries: String,
    #[arg(long, default_value = "1,2")]
    buyers_per_intermediary: String,
    #[arg(long, default_value = "0,2")]
    direct_buyers: String,
    #[arg(long, default_value = "0,20", allow_hyphen_values = true)]
    value_range: String,
    #[arg(long, default_value = "0,3", allow_hyphen_values = true)]
    cost_range: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BoundExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Gen(a) => cmd_gen(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_market<S: Scalar>(name: &str) -> Result<Market<S>, Failure> {
    let text = match fixtures::bundled(name) {
        Some(t) => t.to_owned(),
        None => fs::read_to_string(name).map_err(|e| usage(format!("cannot read {name}: {e}")))?,
    };
    Ok(parse_market(&text)?)
}

fn parse_mechanisms(name: &str) -> Result<Vec<Mechanism>, Failure> {
    if name == "all" {
        return Ok(Mechanism::STUDIED.to_vec());
    }
    Mechanism::parse(name)
        .map(|m| vec![m])
        .ok_or_else(|| usage(format!("unknown mechanism `{name}`")))
}

// ---- run -----------------------------------------------------------------

fn cmd_run(a: &RunArgs) -> Result<u8, Failure> {
    if a.exact {
        run_typed::<Rational>(a)
    } else {
        run_typed::<f64>(a)
    }
}

fn run_typed<S: Scalar>(a: &RunArgs) -> Result<u8, Failure> {
    let m: Market<S> = load_market(&a.market)?;
    let mechs = parse_mechanisms(&a.mechanism)?;
    let p = match &a.deviations {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            ProfileOverrides::parse(&text)?.apply(&m)?
        }
        None => m.truthful_profile(),
    };
    let outcomes: Vec<_> = mechs.iter().map(|mech| mech.run(&m, &p)).collect();
    let reports: Vec<RunReport> = outcomes.iter().map(|o| RunReport::new(&m, o)).collect();
    let text = match a.format {
        Format::Table => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&r.table());
                s.push('\n');
            }
            if outcomes.len() > 1 {
                s.push_str(&outcome_summary(&outcomes)?.to_string());
            }
            s
        }
        Format::Csv => reports_csv(&reports)?,
        Format::Structured => {
            let docs: Vec<String> = reports.iter().map(RunReport::to_json).collect();
            format!("[\n{}\n]\n", docs.join(",\n"))
        }
    };
    emit(&text, &a.out)?;
    Ok(0)
}

// ---- verify --------------------------------------------------------------

/// Parses "tree,seed=7,n=5". Keys: seed, n (or n=lo-hi), buyers, direct, k, q.
fn parse_gen_spec(spec: &str, default_seed: u64) -> Result<GeneratorConfig, Failure> {
    let mut cfg = GeneratorConfig {
        seed: default_seed,
        ..GeneratorConfig::default()
    };
    let mut general_q: Option<f64> = None;
    let mut topology = "tree";
    for (idx, part) in spec.split(',').map(str::trim).enumerate() {
        if idx == 0 && !part.contains('=') {
            topology = part;
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("bad generator field `{part}`")))?;
        let bad = || usage(format!("bad value for `{key}`: `{value}`"));
        match key {
            "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
            "n" => cfg.n_intermediaries = parse_count_range(value).ok_or_else(bad)?,
            "buyers" => cfg.buyers_per_intermediary = parse_count_range(value).ok_or_else(bad)?,
            "direct" => cfg.direct_buyers = parse_count_range(value).ok_or_else(bad)?,
            "k" => cfg.k = value.parse().map_err(|_| bad())?,
            "q" => general_q = Some(value.parse().map_err(|_| bad())?),
            _ => return Err(usage(format!("unknown generator field `{key}`"))),
        }
    }
    cfg.topology = match topology {
        "tree" => Topology::Tree,
        "general" => Topology::General {
            extra_edge_probability: general_q.unwrap_or(0.2),
        },
        other => return Err(usage(format!("unknown topology `{other}`"))),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// "3" or "1-4".
fn parse_count_range(s: &str) -> Option<std::ops::RangeInclusive<usize>> {
    match s.split_once('-') {
        Some((lo, hi)) => Some(lo.parse().ok()?..=hi.parse().ok()?),
        None => {
            let n = s.parse().ok()?;
            Some(n..=n)
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(&a.suite).ok_or_else(|| usage(format!("unknown suite `{}`", a.suite)))?]
    };
    let mechanisms = a
        .mechanism
        .iter()
        .map(|n| Mechanism::parse(n).ok_or_else(|| usage(format!("unknown mechanism `{n}`"))))
        .collect::<Result<Vec<_>, _>>()?;

    let mut opts = SuiteOptions {
        max_degree: a.max_degree,
        brute_force_bound: a.bound,
        ..SuiteOptions::default()
    };
    let samples = a
        .opponents
        .or(if a.market.is_some() { a.trials } else { None });
    if let Some(samples) = samples.filter(|n| *n > 0) {
        opts.opponents = OpponentMode::Sampled {
            samples,
            seed: a.seed,
        };
    }
    let markets: Vec<Market> = match (&a.market, &a.gen) {
        (Some(name), _) => vec![load_market(name)?],
        (None, Some(spec)) => {
            let cfg = parse_gen_spec(spec, a.seed)?;
            let n = a.trials.unwrap_or(1) as u64;
            (0..n)
                .map(|i| generate(&cfg.with_seed(cfg.seed.wrapping_add(i))))
                .collect::<Result<_, _>>()?
        }
        (None, None) => return Err(usage("one of --market or --gen is required")),
    };

    let mut reports: Vec<VerificationReport> = Vec::new();
    for suite in suites {
        reports.extend(run_suite(&markets, suite, &mechanisms, &opts)?);
    }

    let text = match a.format {
        Format::Table | Format::Csv => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&r.summary_line());
                s.push('\n');
                if let Some(cx) = r
                    .counterexample
                    .as_ref()
                    .filter(|_| r.status != Status::Pass)
                {
                    s.push_str(&cx.to_json());
                    s.push('\n');
                }
            }
            s
        }
        Format::Structured => {
            let docs: Vec<String> = reports.iter().map(VerificationReport::to_json).collect();
            format!("[\n{}\n]\n", docs.join(",\n"))
        }
    };
    emit(&text, &a.out)?;

    let worst = reports
        .iter()
        .map(|r| r.status)
        .max()
        .unwrap_or(Status::Pass);
    for r in reports.iter().filter(|r| r.status == Status::Inconclusive) {
        eprintln!(
            "warning: {} inconclusive (violations on non-tree markets are recorded, not asserted)",
            r.summary_line()
        );
    }
    Ok(if worst == Status::Fail { 1 } else { 0 })
}

// ---- gen -----------------------------------------------------------------

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), Failure> {
    let bad = || usage(format!("{what} must look like `lo,hi`, got `{s}`"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_usize_pair(s: &str, what: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || usage(format!("{what} must look like `lo,hi` or `n`, got `{s}`"));
    match s.split_once(',') {
        Some((lo, hi)) => {
            Ok(lo.trim().parse().map_err(|_| bad())?..=hi.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok(n..=n)
        }
    }
}

fn cmd_gen(a: &GenArgs) -> Result<u8, Failure> {
    let cfg = GeneratorConfig {
        seed: a.seed,
        n_intermediaries: parse_usize_pair(&a.intermediaries, "--intermediaries")?,
        buyers_per_intermediary: parse_usize_pair(
            &a.buyers_per_intermediary,
            "--buyers-per-intermediary",
        )?,
        direct_buyers: parse_usize_pair(&a.direct_buyers, "--direct-buyers")?,
        value_range: parse_pair(&a.value_range, "--value-range")?,
        cost_range: parse_pair(&a.cost_range, "--cost-range")?,
        k: a.k,
        topology: match a.topology {
            TopologyArg::Tree => Topology::Tree,
            TopologyArg::General => Topology::General {
                extra_edge_probability: a.extra_edge_prob,
            },
        },
    };
    let m: Market = generate(&cfg)?;
    emit(&write_market(&m), &a.out)?;
    Ok(0)
}
