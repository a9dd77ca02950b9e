use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use quasihex::exact::{format_rational, parse_rational};
use quasihex::families::FamilySpec;
use quasihex::formulas::{self, FormulaResult};
use quasihex::graph::{dual_graph, Counter, MatchGraph, Oracle};
use quasihex::lattice::{build, region_stats, Region, RegionKind, RegionParams};
use quasihex::transforms::{replay, Pipeline};
use quasihex::verify::{run_sweep, Check, SweepSpec};
use quasihex::{Error, ExactCount};

const EXIT_INVALID: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "quasihex",
    version,
    about = "Exact tiling counts for quasi-hexagonal lattice regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a region or print its statistics.
    Region {
        #[command(subcommand)]
        action: RegionAction,
    },
    /// Build a named graph family.
    Families {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Count the tilings of a region, or the perfect matchings of a graph.
    Count(CountArgs),
    /// Evaluate a closed-form count.
    Formula {
        #[command(subcommand)]
        action: FormulaAction,
    },
    /// Replay a transformation pipeline on a region.
    Transform {
        #[command(subcommand)]
        action: TransformAction,
    },
    /// Compare closed forms with brute-force counts over parameter grids.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum RegionAction {
    /// Construct a region and write it as JSON.
    Build {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the statistics of a region.
    Stats {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum FamilyAction {
    /// Construct a family graph and write it as JSON.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FormulaAction {
    /// Evaluate a formula on integer arguments.
    Eval {
        /// macmahon, kasteleyn, aztec-diamond, gamma, aztec-dent or half-hexagon-dent.
        #[arg(long)]
        name: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        args: Vec<i64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum TransformAction {
    /// Run a pipeline and write its trace.
    Replay {
        #[command(flatten)]
        region: RegionArgs,
        /// symmetric, douglas or asymmetric-odd.
        #[arg(long)]
        pipeline: String,
        /// Where to write the trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Include the graphs before and after every step.
        #[arg(long)]
        full: bool,
        /// Check every step against exact counts.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 40)]
        max_oracle_vertices: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Clone, Default)]
struct RegionArgs {
    /// A region JSON file written by `region build`.
    #[arg(long, conflicts_with_all = ["kind", "a", "d", "c", "dp"])]
    region: Option<PathBuf>,
    /// symmetric, douglas or asymmetric.
    #[arg(long)]
    kind: Option<String>,
    /// Side length of the base.
    #[arg(long)]
    a: Option<u32>,
    /// Distances between drawn diagonals above the upper marked diagonal.
    #[arg(long, value_delimiter = ',')]
    d: Vec<u32>,
    /// Distances between the drawn diagonals of the middle band.
    #[arg(long, value_delimiter = ',')]
    c: Vec<u32>,
    /// Distances between drawn diagonals below the lower marked diagonal.
    #[arg(long, value_delimiter = ',')]
    dp: Vec<u32>,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// ar, ar-baseless, ar-combed, ar-combed-baseless, lr, rr, tlr, l, lbar,
    /// half-honeycomb, hexagon-dual, gamma or grid.
    #[arg(long)]
    family: String,
    /// Comma-separated integer parameters of the family.
    #[arg(long, value_delimiter = ',')]
    params: Vec<u32>,
    /// Uniform edge weight, e.g. `1/2`.
    #[arg(long)]
    weight: Option<String>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    region: RegionArgs,
    /// A graph JSON file.
    #[arg(long, conflicts_with_all = ["region", "kind", "family"])]
    graph: Option<PathBuf>,
    /// A named graph family, as for `families build`.
    #[arg(long, conflicts_with_all = ["region", "kind"])]
    family: Option<String>,
    /// Comma-separated integer parameters of the family.
    #[arg(long, value_delimiter = ',', requires = "family")]
    params: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long, default_value_t = 40)]
    max_oracle_vertices: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Checks to run; all of them by default.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    #[arg(long, default_value_t = 3)]
    max_side: u32,
    #[arg(long, default_value_t = 3)]
    max_distance: u32,
    #[arg(long, default_value_t = 2)]
    max_layers: usize,
    #[arg(long, default_value_t = 40)]
    max_oracle_vertices: usize,
    /// Random graphs for the counter check.
    #[arg(long, default_value_t = 100)]
    random_graphs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Oracle,
    Counter,
    Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// What went wrong, with the exit code it maps to.
enum Failure {
    Lib(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::ResourceLimit(_) | Error::PrecisionLoss(_)) => EXIT_RESOURCE,
            Failure::Lib(_) => EXIT_INVALID,
            Failure::Io(_) => 1,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) | Failure::Mismatch(m) => m.clone(),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;
type LazyFormula = Box<dyn Fn() -> quasihex::Result<FormulaResult>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Region {
            action: RegionAction::Build { region, out },
        } => {
            let r = region.load()?;
            emit(out.as_deref(), &r.to_json()?)
        }
        Command::Region {
            action: RegionAction::Stats { region, format },
        } => {
            let stats = region_stats(&region.load()?);
            match format {
                Format::Text => {
                    println!(
                        "h = {}  h' = {}  m = {}  n = {}  q = {}",
                        stats.h, stats.h_prime, stats.m, stats.n, stats.q
                    );
                    println!("C = {}  C' = {}", stats.c_upper, stats.c_lower);
                    println!("bottom row: {}", stats.bottom_row_color);
                    println!("layer widths: {:?}", stats.layer_widths);
                    if let (Some(phi), Some(h0)) = (stats.slope, stats.h0) {
                        println!("slope = {phi}  middle height = {h0}");
                    }
                    Ok(())
                }
                _ => emit(None, &to_json(&stats)?),
            }
        }
        Command::Families {
            action: FamilyAction::Build { family, out },
        } => {
            let g = family.build()?;
            emit(out.as_deref(), &g.to_json()?)
        }
        Command::Count(args) => count(args),
        Command::Formula {
            action: FormulaAction::Eval { name, args, json },
        } => {
            let value = eval_formula(&name, &args)?;
            if json {
                println!(
                    "{}",
                    json!({ "name": name, "args": args, "value": value.to_string() })
                );
            } else {
                println!("{value}");
            }
            Ok(())
        }
        Command::Transform {
            action:
                TransformAction::Replay {
                    region,
                    pipeline,
                    trace,
                    full,
                    check,
                    max_oracle_vertices,
                    format,
                },
        } => replay_cmd(
            &region,
            &pipeline,
            trace.as_deref(),
            full,
            check,
            max_oracle_vertices,
            format,
        ),
        Command::Verify(args) => verify(args),
    }
}

impl RegionArgs {
    fn load(&self) -> CliResult<Region> {
        if let Some(path) = &self.region {
            return Ok(Region::from_json(&read(path)?)?);
        }
        let kind: RegionKind = self
            .kind
            .as_deref()
            .ok_or_else(|| {
                Error::InvalidParams("give --region or --kind with its parameters".into())
            })?
            .parse()?;
        let a = self
            .a
            .ok_or_else(|| Error::InvalidParams("--a is required".into()))?;
        let params = RegionParams {
            kind,
            a,
            d: self.d.clone(),
            c: self.c.clone(),
            dprime: self.dp.clone(),
        };
        Ok(build(&params)?)
    }

    fn given(&self) -> bool {
        self.region.is_some() || self.kind.is_some()
    }
}

impl FamilyArgs {
    fn build(&self) -> CliResult<MatchGraph> {
        let spec = FamilySpec::parse(&self.family, &self.params)?;
        Ok(match &self.weight {
            Some(w) => spec.build_weighted(&parse_rational(w)?)?,
            None => spec.build()?,
        })
    }
}

#[derive(Serialize)]
struct CountOutput {
    method: &'static str,
    value: String,
    vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponent: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rest: Option<String>,
}

fn count(args: CountArgs) -> CliResult {
    let (graph, formula): (Option<MatchGraph>, Option<LazyFormula>) =
        if let Some(path) = &args.graph {
            (Some(MatchGraph::from_json(&read(path)?)?), None)
        } else if let Some(family) = &args.family {
            let spec = FamilySpec::parse(family, &args.params)?;
            let f = family_formula(&spec);
            (Some(spec.build()?), f)
        } else if args.region.given() {
            let region = args.region.load()?;
            let g = dual_graph(&region);
            (
                Some(g),
                Some(Box::new(move || formulas::count_region(&region))),
            )
        } else {
            return Err(
                Error::InvalidParams("give --region, --kind, --family or --graph".into()).into(),
            );
        };

    let use_formula = match (args.method, &formula) {
        (Method::Formula, None) => {
            return Err(Error::InvalidParams("no closed form applies to this input".into()).into())
        }
        (Method::Formula, Some(_)) => true,
        (Method::Auto, Some(_)) => true,
        _ => false,
    };
    let mut out = None;
    if use_formula {
        match (formula.as_ref().expect("checked above"))() {
            Ok(r) => {
                out = Some(CountOutput {
                    method: "formula",
                    value: r.value.to_string(),
                    vertices: graph.as_ref().map(MatchGraph::vertex_count),
                    exponent: r.exponent,
                    rest: r.rest.as_ref().map(format_rational),
                })
            }
            Err(Error::PreconditionFailed(_)) if args.method == Method::Auto => {}
            Err(e) => return Err(e.into()),
        }
    }
    let out = match out {
        Some(o) => o,
        None => {
            let g = graph.expect("every input yields a graph");
            let (method, value): (&'static str, ExactCount) = if args.method == Method::Oracle {
                (
                    "oracle",
                    Oracle::with_max_vertices(args.max_oracle_vertices).count(&g)?,
                )
            } else {
                ("counter", Counter::default().count(&g)?)
            };
            CountOutput {
                method,
                value: value.to_string(),
                vertices: Some(g.vertex_count()),
                exponent: None,
                rest: None,
            }
        }
    };
    match args.format {
        Format::Text => println!("{}", out.value),
        _ => println!("{}", to_json(&out)?),
    }
    Ok(())
}

fn family_formula(spec: &FamilySpec) -> Option<LazyFormula> {
    let plain = |v: BigInt| FormulaResult::plain(v);
    match *spec {
        FamilySpec::HexagonDual { a, b, c } => Some(Box::new(move || {
            Ok(plain(
                formulas::macmahon(a as u64, b as u64, c as u64).into(),
            ))
        })),
        FamilySpec::Gamma { a, b, c, d, e } => Some(Box::new(move || {
            Ok(plain(formulas::gamma_count(a, b, c, d, e)?))
        })),
        FamilySpec::Grid { rows, cols } if rows % 2 == 0 && cols % 2 == 0 => {
            Some(Box::new(move || {
                Ok(plain(
                    formulas::kasteleyn_rectangle(rows / 2, cols / 2)?.into(),
                ))
            }))
        }
        FamilySpec::Ar {
            m,
            n,
            variant: quasihex::families::ArVariant::Plain,
        } if m == n => Some(Box::new(move || {
            Ok(plain(formulas::aztec_diamond(m as u64).into()))
        })),
        _ => None,
    }
}

fn eval_formula(name: &str, args: &[i64]) -> CliResult<BigInt> {
    let want = |k: usize| -> CliResult<Vec<u32>> {
        if args.len() != k {
            return Err(Error::InvalidParams(format!(
                "`{name}` takes {k} arguments, got {}",
                args.len()
            ))
            .into());
        }
        args.iter()
            .map(|&x| {
                u32::try_from(x).map_err(|_| {
                    Failure::from(Error::InvalidParams(format!("negative argument {x}")))
                })
            })
            .collect()
    };
    let head = |k: usize| -> CliResult<(usize, usize)> {
        if args.len() < k || args[0] < 0 || args[1] < 0 {
            return Err(Error::InvalidParams(format!(
                "`{name}` takes two sizes followed by labels"
            ))
            .into());
        }
        Ok((args[0] as usize, args[1] as usize))
    };
    Ok(match name {
        "macmahon" => {
            let v = want(3)?;
            formulas::macmahon(v[0] as u64, v[1] as u64, v[2] as u64).into()
        }
        "kasteleyn" => {
            let v = want(2)?;
            formulas::kasteleyn_rectangle(v[0], v[1])?.into()
        }
        "aztec-diamond" => formulas::aztec_diamond(want(1)?[0] as u64).into(),
        "gamma" => {
            let v = want(5)?;
            formulas::gamma_count(v[0], v[1], v[2], v[3], v[4])?
        }
        "aztec-dent" => {
            let (m, n) = head(2)?;
            formulas::aztec_dent(m, n, &args[2..])?
        }
        "half-hexagon-dent" => {
            let (a, b) = head(2)?;
            formulas::v_product(a, b, &args[2..])?
        }
        other => return Err(Error::InvalidParams(format!("unknown formula `{other}`")).into()),
    })
}

#[derive(Serialize)]
struct ReplayOutput<'a> {
    pipeline: String,
    #[serde(flatten)]
    summary: &'a quasihex::transforms::TraceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    checked: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a quasihex::transforms::TransformTrace>,
}

fn replay_cmd(
    region: &RegionArgs,
    pipeline: &str,
    trace_path: Option<&Path>,
    full: bool,
    check: bool,
    max_oracle_vertices: usize,
    format: Format,
) -> CliResult {
    let pipeline: Pipeline = pipeline.parse()?;
    let trace = replay(&region.load()?, pipeline)?;
    let summary = trace.summary();
    let checked = if check {
        let oracle = Oracle::with_max_vertices(max_oracle_vertices);
        let counter = Counter::default();
        Some(
            trace
                .steps
                .iter()
                .map(|s| s.check(&oracle, &counter))
                .collect::<quasihex::Result<Vec<bool>>>()?,
        )
    } else {
        None
    };
    let output = ReplayOutput {
        pipeline: pipeline.to_string(),
        summary: &summary,
        checked: checked.clone(),
        trace: full.then_some(&trace),
    };
    if let Some(path) = trace_path {
        write(path, &to_json(&output)?)?;
    }
    match format {
        Format::Text => {
            for (i, s) in summary.steps.iter().enumerate() {
                let mark = match &checked {
                    Some(c) if c[i] => "  ok",
                    Some(_) => "  FAILED",
                    None => "",
                };
                println!(
                    "{:>3}  {:<22} mu = {:<12} cumulative = {:<14} {} -> {} vertices{mark}",
                    i + 1,
                    s.name,
                    s.multiplier.to_string(),
                    s.cumulative.to_string(),
                    s.vertices_before,
                    s.vertices_after
                );
            }
            if let Some(c) = &summary.closing {
                println!("closing: {} = {}", c.description, c.value);
            }
            if let Some(p) = &summary.predicted {
                println!("predicted count: {p}");
            }
        }
        _ => {
            if trace_path.is_none() {
                println!("{}", to_json(&output)?);
            }
        }
    }
    if checked.is_some_and(|c| c.iter().any(|ok| !ok)) {
        return Err(Failure::Mismatch(
            "a rewrite step does not preserve the weighted count".into(),
        ));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult {
    let checks = if args.checks.is_empty() {
        Check::ALL.to_vec()
    } else {
        args.checks
            .iter()
            .map(|c| c.parse())
            .collect::<quasihex::Result<Vec<Check>>>()?
    };
    let sweep = SweepSpec {
        checks,
        max_side: args.max_side,
        max_distance: args.max_distance,
        max_layers: args.max_layers,
        max_oracle_vertices: args.max_oracle_vertices,
        random_graphs: args.random_graphs,
        seed: args.seed,
    };
    let report = run_sweep(&sweep);
    let body = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    emit(args.out.as_deref(), &body)?;
    let s = &report.summary;
    eprintln!(
        "{} cases: {} matched, {} mismatched, {} skipped, {} errors",
        s.total, s.matched, s.mismatched, s.skipped, s.errors
    );
    if report.all_match() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} cases disagree",
            s.mismatched + s.errors
        )))
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Lib(e.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, body: &str) -> CliResult {
    fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, body: &str) -> CliResult {
    match out {
        Some(path) => write(path, body),
        None => {
            print!("{body}");
            if !body.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}
