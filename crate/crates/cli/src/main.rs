use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pcaag_core::aag::ProtocolParams;
use pcaag_core::attacks::{AttackOptions, Variant};
use pcaag_core::harness::{
    emit_report, length_growth_experiment, run_batch_on, ExperimentConfig, GroupSource,
    ReportFormat,
};
use pcaag_core::numberfield::{
    build_from_power_basis_units, build_semidirect_presentation, predicted_hirsch, signature,
    Polynomial, QuadraticFieldData,
};
use pcaag_core::rng::rng_from_seed;
use pcaag_core::{check_consistency, ConsistencyReport, Int, PcPresentation, RelOrder};

#[derive(Parser)]
#[command(name = "pcaag", version, about = "AAG key exchange over polycyclic groups and length-based attacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build O_F ⋊ U_F from a polynomial and write the presentation.
    BuildGroup {
        /// Polynomial, e.g. "x^2-x-1" or "[1,-1,-1]".
        #[arg(long)]
        poly: String,
        #[arg(long)]
        out: PathBuf,
        /// Units of Z[θ] as power-basis coordinates, e.g. "[[0,1,0]]".
        /// Required above degree 2.
        #[arg(long)]
        units: Option<String>,
    },
    /// Run the consistency check and report the Hirsch length.
    CheckGroup {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Predicted Hirsch length n + s + t - 1 of O_F ⋊ U_F, any degree.
    Hirsch {
        #[arg(long)]
        poly: String,
    },
    /// Run a batch of attacks on fresh protocol instances.
    Attack(AttackArgs),
    /// Mean growth |b^a| - |b| for random a, b.
    LengthGrowth {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 10)]
        lmin: u64,
        #[arg(long, default_value_t = 13)]
        lmax: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupArgs {
    /// Presentation file.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Degree 1 or real quadratic polynomial, built on the fly.
    #[arg(long)]
    poly: Option<String>,
}

impl GroupArgs {
    fn source(&self) -> GroupSource {
        match (&self.group, &self.poly) {
            (Some(path), _) => GroupSource::File(path.clone()),
            (None, Some(poly)) => GroupSource::Polynomial(poly.clone()),
            (None, None) => unreachable!("clap requires one of --group, --poly"),
        }
    }
}

#[derive(Args)]
struct AttackArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value_t = 20)]
    n1: usize,
    #[arg(long, default_value_t = 20)]
    n2: usize,
    #[arg(long, default_value_t = 10)]
    lmin: u64,
    #[arg(long, default_value_t = 13)]
    lmax: u64,
    #[arg(long, default_value_t = 5)]
    key_factors: usize,
    /// Per-trial timeout in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Stored-set size M for the memory variants.
    #[arg(long, default_value_t = 500)]
    memory: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    /// Store tuples again even if they were seen before (memory variants).
    #[arg(long)]
    no_dedup: bool,
    /// Test for success only on the last extension word (dynamic variant).
    #[arg(long)]
    literal_alg2: bool,
    /// CSV report.
    #[arg(long)]
    out: PathBuf,
    /// JSON-lines report with full per-trial records.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::BuildGroup { poly, out, units } => build_group(&poly, &out, units.as_deref()),
        Command::CheckGroup { input } => check_group(&input),
        Command::Hirsch { poly } => {
            let f: Polynomial = poly.parse()?;
            let sig = signature(&f)?;
            println!("polynomial: {f}");
            println!("signature: n={} s={} t={}", sig.n, sig.s, sig.t);
            println!("unit rank: {}", sig.s + sig.t - 1);
            println!("hirsch length: {}", predicted_hirsch(&f)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Attack(args) => attack(args),
        Command::LengthGrowth {
            group,
            lmin,
            lmax,
            trials,
            seed,
        } => {
            let g = group.source().load()?;
            let stats = length_growth_experiment(&g, lmin, lmax, trials, &mut rng_from_seed(seed))?;
            println!("hirsch length: {}", g.hirsch_length());
            println!("trials: {}", stats.trials);
            println!("mean |b^a|-|b|: {:.2}", stats.mean);
            println!("min: {}", stats.min);
            println!("max: {}", stats.max);
            println!("mean |a|: {:.2}", stats.mean_conjugator_length);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_group(poly: &str, out: &PathBuf, units: Option<&str>) -> Result<ExitCode> {
    let f: Polynomial = poly.parse()?;
    let p = match units {
        Some(text) => {
            let coords: Vec<Vec<Int>> =
                serde_json::from_str(text).context("--units must be a JSON list of lists")?;
            let coords: Vec<Vec<_>> = coords
                .iter()
                .map(|u| u.iter().map(Int::to_big).collect())
                .collect();
            build_from_power_basis_units(&f, &coords)?
        }
        None => {
            if f.degree() > 2 {
                bail!(
                    "degree {} needs --units (only degree <= 2 is built without unit data)",
                    f.degree()
                );
            }
            build_semidirect_presentation(&QuadraticFieldData::from_polynomial(&f)?)?
        }
    };
    if let ConsistencyReport::Fail(v) = check_consistency(&p) {
        bail!("built presentation is inconsistent: {v:?}");
    }
    p.save(out)?;
    println!(
        "wrote {} ({} generators, hirsch length {})",
        out.display(),
        p.n(),
        p.hirsch_length()
    );
    Ok(ExitCode::SUCCESS)
}

fn check_group(input: &PathBuf) -> Result<ExitCode> {
    let p = PcPresentation::load(input)?;
    let orders: Vec<String> = p
        .orders()
        .iter()
        .map(|o| match o {
            RelOrder::Finite(r) => r.to_string(),
            RelOrder::Infinite => "inf".to_string(),
        })
        .collect();
    println!("generators: {}", p.n());
    println!("relative orders: [{}]", orders.join(", "));
    println!("hirsch length: {}", p.hirsch_length());
    if let Some(f) = &p.meta().source_polynomial {
        println!("source polynomial: {f}");
    }
    match check_consistency(&p) {
        ConsistencyReport::Pass => {
            println!("consistency: PASS");
            Ok(ExitCode::SUCCESS)
        }
        ConsistencyReport::Fail(v) => {
            println!("consistency: FAIL {:?} at generators {:?}", v.overlap, v.indices);
            if let Some((l, r)) = &v.sides {
                println!("  left:  {:?}", l.exps());
                println!("  right: {:?}", r.exps());
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn attack(args: AttackArgs) -> Result<ExitCode> {
    let source = args.group.source();
    let group = source.load()?;
    let workers = args.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let cfg = ExperimentConfig {
        group_source: source,
        protocol: ProtocolParams {
            n1: args.n1,
            n2: args.n2,
            l1: args.lmin,
            l2: args.lmax,
            key_factors: args.key_factors,
        },
        variant: args.variant,
        options: AttackOptions {
            memory: args.memory,
            dedup: !args.no_dedup,
            literal_alg2: args.literal_alg2,
        },
        timeout_seconds: args.timeout,
        trials: args.trials,
        seed: args.seed,
        workers,
    };
    let report = run_batch_on(&group, &cfg)?;
    emit_report(&report, ReportFormat::Csv, &args.out)?;
    if let Some(path) = &args.json {
        emit_report(&report, ReportFormat::Jsonl, path)?;
    }
    let errors = report.records.iter().filter(|r| r.error.is_some()).count();
    println!(
        "{} h={} trials={} successes={} rate={:.1}% errors={} time={:.1}s",
        cfg.variant,
        group.hirsch_length(),
        report.records.len(),
        report.successes,
        100.0 * report.success_rate,
        errors,
        report.total_seconds
    );
    if report.soundness_violations() > 0 {
        bail!("{} recovered keys failed verification", report.soundness_violations());
    }
    Ok(ExitCode::SUCCESS)
}
