use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use logmaj::divergences::divergence_report;
use logmaj::harness::{
    find_witness_with, run_suite, scan_region, Direction, GridRange, RegionMap, ScanConfig,
    SuiteConfig, SuiteReport, Witness, SUITE_NAMES,
};
use logmaj::matcore::{parse_hmat, write_hmat};
use logmaj::perturbation::{expansion_consistency, predict_violation};
use logmaj::Error;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "logmaj", version, about = "Log-majorization checks for P_alpha and Q_alpha,z")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one property suite, or all of them.
    Verify(VerifyArgs),
    /// Scan the (alpha, z) grid and write the region map as CSV.
    Scan(ScanArgs),
    /// Search for a pair violating one direction at a single (alpha, z).
    Witness(WitnessArgs),
    /// Renyi-type divergences of two matrices read from HMAT files.
    Divergence(DivergenceArgs),
    /// Analytic versus finite-difference coefficients of the 2x2 family.
    Expand(ExpandArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite id or `all`.
    #[arg(long)]
    suite: String,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value = "0.1:3:0.1", value_parser = parse_range)]
    alpha: GridRange,
    #[arg(long, default_value = "0.1:3:0.1", value_parser = parse_range)]
    z: GridRange,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Region map destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Witness sidecar destination.
    #[arg(long)]
    witnesses: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    z: f64,
    #[arg(long, value_parser = parse_direction)]
    direction: Direction,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dims: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct DivergenceArgs {
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "B")]
    b: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    z: f64,
    #[arg(long)]
    x: f64,
    #[arg(long)]
    y: f64,
    #[arg(long, default_value_t = 1e-3)]
    theta: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    GridRange::parse(s).map_err(|e| e.to_string())
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    Direction::parse(s).ok_or_else(|| format!("direction `{s}` must be pq or qp"))
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn verify(args: VerifyArgs) -> Outcome {
    if args.format == Format::Csv {
        return Err(usage("verify supports --format text or json"));
    }
    let names: Vec<&str> = if args.suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let cfg = SuiteConfig {
        samples: args.sampling.samples,
        dims: args.sampling.dims,
        seed: args.sampling.seed,
        ..SuiteConfig::default()
    };
    let reports: Vec<SuiteReport> = names
        .iter()
        .map(|n| run_suite(n, &cfg))
        .collect::<logmaj::Result<_>>()?;
    for r in &reports {
        for f in &r.failures {
            eprintln!(
                "{}: case {} failed with margin {:e}: {} [replay: --suite {} --seed {}]",
                r.suite_name, f.case_id, f.margin, f.description, r.suite_name, r.seed
            );
        }
    }
    match args.format {
        Format::Json => print!("{}", to_json(&reports)),
        _ => {
            for r in &reports {
                println!(
                    "{}: {} cases={} failures={} warnings={} seed={}",
                    r.suite_name,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.cases_run,
                    r.failures.len(),
                    r.warnings,
                    r.seed
                );
                for o in &r.observations {
                    println!("  {o}");
                }
            }
        }
    }
    Ok(if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        EXIT_VIOLATION
    })
}

#[derive(Serialize)]
struct CellRow {
    alpha: f64,
    z: f64,
    predicted: &'static str,
    pq_status: String,
    qp_status: String,
    samples: usize,
}

#[derive(Serialize)]
struct WitnessRow {
    id: usize,
    alpha: f64,
    z: f64,
    direction: &'static str,
    violated_at_k: usize,
    margin: f64,
    source: String,
}

impl WitnessRow {
    fn new(id: usize, w: &Witness) -> Self {
        Self {
            id,
            alpha: w.alpha,
            z: w.z,
            direction: w.direction.label(),
            violated_at_k: w.violated_at_k,
            margin: w.margin,
            source: w.source.describe(),
        }
    }
}

#[derive(Serialize)]
struct MapJson {
    cells: Vec<CellRow>,
    witnesses: Vec<WitnessRow>,
}

fn map_json(map: &RegionMap) -> String {
    let cells = map
        .cells
        .iter()
        .map(|c| CellRow {
            alpha: c.alpha,
            z: c.z,
            predicted: c.predicted.label(),
            pq_status: c.pq.label(),
            qp_status: c.qp.label(),
            samples: c.samples_tried,
        })
        .collect();
    let witnesses = map
        .witnesses
        .iter()
        .enumerate()
        .map(|(i, w)| WitnessRow::new(i + 1, w))
        .collect();
    to_json(&MapJson { cells, witnesses })
}

fn scan(args: ScanArgs) -> Outcome {
    let cfg = ScanConfig {
        alpha: args.alpha,
        z: args.z,
        dims: args.sampling.dims,
        samples: args.sampling.samples,
        seed: args.sampling.seed,
    };
    let map = scan_region(&cfg)?;
    let body = match args.format {
        Format::Csv => map.to_csv()?,
        Format::Json => map_json(&map),
        Format::Text => return Err(usage("scan supports --format csv or json")),
    };
    write_output(args.out.as_deref(), &body)?;
    if let Some(path) = &args.witnesses {
        write_output(Some(path), &map.witness_sidecar())?;
    }
    let (covered, gaps) = map.gap_coverage();
    eprintln!(
        "{} cells ({} skipped), {} witnesses, gap cells with both directions: {covered}/{gaps}, warnings: {}",
        map.cells.len(),
        map.skipped,
        map.witnesses.len(),
        map.warnings()
    );
    let unsound = map.soundness_violations();
    for (c, d) in &unsound {
        eprintln!(
            "violation in predicted {} cell alpha={} z={} direction {} [replay: --seed {}]",
            c.predicted.label(),
            c.alpha,
            c.z,
            d.label(),
            cfg.seed
        );
    }
    Ok(if unsound.is_empty() { 0 } else { EXIT_VIOLATION })
}

fn witness(args: WitnessArgs) -> Outcome {
    if args.dims.is_empty() || args.dims.iter().any(|d| !(2..=4).contains(d)) {
        return Err(usage("dims must be drawn from 2, 3, 4"));
    }
    let search = find_witness_with(args.alpha, args.z, args.direction, args.budget, args.seed, &args.dims)?;
    match (&search.witness, args.format) {
        (Some(w), Format::Json) => print!("{}", to_json(&WitnessRow::new(1, w))),
        (None, Format::Json) => print!("{}", to_json(&serde_json::json!({ "found": false, "tried": search.tried }))),
        (Some(w), _) => {
            println!(
                "WITNESS {} {} {} {}",
                w.alpha,
                w.z,
                w.direction.label(),
                w.source.describe()
            );
            print!("{}{}", write_hmat(&w.a), write_hmat(&w.b));
            eprintln!(
                "violation at k={} with margin {:e} after {} candidates",
                w.violated_at_k, w.margin, search.tried
            );
        }
        (None, _) => println!("not found after {} candidates", search.tried),
    }
    Ok(0)
}

fn read_matrix(path: &Path) -> Result<logmaj::HermitianMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_hmat(&text).map_err(|e| {
        let f = Failure::from(e);
        usage(format!("{}: {}", path.display(), f.message))
    })
}

fn divergence(args: DivergenceArgs) -> Outcome {
    let a = read_matrix(&args.a)?;
    let b = read_matrix(&args.b)?;
    let r = divergence_report(&a, &b, args.alpha, args.z)?;
    match args.format {
        Format::Json => print!("{}", to_json(&r)),
        _ => {
            println!("petz       {:.12e}", r.d_petz);
            println!("sandwiched {:.12e}", r.d_sandwiched);
            println!("maximal    {:.12e}", r.d_maximal);
            if let (Some(z), Some(d)) = (r.z, r.d_alpha_z) {
                println!("alpha-z    {d:.12e} (z = {z})");
            }
            println!("ordering   {}", if r.ordering_satisfied { "ok" } else { "violated" });
        }
    }
    Ok(if r.ordering_satisfied { 0 } else { EXIT_VIOLATION })
}

fn expand(args: ExpandArgs) -> Outcome {
    let r = expansion_consistency(args.alpha, args.z, args.x, args.y, args.theta)?;
    let prediction = predict_violation(args.alpha, args.z, args.x, args.y)?;
    match args.format {
        Format::Json => print!(
            "{}",
            to_json(&serde_json::json!({ "report": r, "prediction": prediction }))
        ),
        _ => {
            println!("            analytic            finite-difference");
            println!("c_P  {:>20.12e} {:>20.12e}", r.analytic.c_p, r.finite_difference_p);
            println!("c_Q  {:>20.12e} {:>20.12e}", r.analytic.c_q, r.finite_difference_q);
            println!("s1   {:>20.12e}", r.analytic.s1);
            println!("s2   {:>20.12e}", r.analytic.s2);
            println!("prediction {prediction:?}");
            println!("consistency {}", if r.passed { "ok" } else { "mismatch" });
        }
    }
    Ok(if r.passed { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Scan(a) => scan(a),
        Command::Witness(a) => witness(a),
        Command::Divergence(a) => divergence(a),
        Command::Expand(a) => expand(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
