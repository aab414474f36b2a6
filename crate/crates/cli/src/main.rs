mod output;

use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use potts_core::fixed_points::{
    all_fixed_points, newton_fixed_points, same_point_set, symmetric_analysis,
};
use potts_core::oracle::MAX_ORACLE_DEPTH;
use potts_core::phase::{
    critical_beta_bracket, find_regime, region_bounds, scan_with_progress, verify, Classification,
    GridSpec, ParamBase, SearchSpace,
};
use potts_core::recursion::{iterate, recurse, IterateOptions, RatioPoint};
use potts_core::{
    classify, exact_partition_vector, thetas_from, BoundarySpec, CayleyTree, Error, Fixture,
    ModelParams, ThetaParams, TripleDeltaVariant,
};

use output::{envelope, fixpoints_csv, scan_csv, Format};

const THETA_ARGS: [&str; 4] = ["theta", "theta1", "theta2", "theta3"];

/// Depth above which enumeration needs `--long`.
const QUICK_ENUMERATION_DEPTH: u32 = 2;

#[derive(Parser)]
#[command(
    name = "potts",
    version,
    about = "Three-state Potts model with competing interactions on the Cayley tree of order two"
)]
struct Cli {
    /// Nearest-neighbor coupling
    #[arg(long = "J", global = true, conflicts_with_all = THETA_ARGS, allow_hyphen_values = true)]
    j: Option<f64>,
    /// One-level second-neighbor coupling
    #[arg(long = "J1", global = true, conflicts_with_all = THETA_ARGS, allow_hyphen_values = true)]
    j1: Option<f64>,
    /// Triple coupling
    #[arg(long = "J2", global = true, conflicts_with_all = THETA_ARGS, allow_hyphen_values = true)]
    j2: Option<f64>,
    /// External field
    #[arg(long = "h", global = true, conflicts_with_all = THETA_ARGS, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Inverse temperature
    #[arg(long, global = true, conflicts_with_all = THETA_ARGS)]
    beta: Option<f64>,

    #[arg(long, global = true)]
    theta: Option<f64>,
    #[arg(long, global = true)]
    theta1: Option<f64>,
    #[arg(long, global = true)]
    theta2: Option<f64>,
    #[arg(long, global = true)]
    theta3: Option<f64>,

    /// Tree depth, or number of recursion steps
    #[arg(long, global = true, default_value_t = 1)]
    depth: u32,
    /// free, 1, 2 or 3
    #[arg(long, global = true, default_value = "free")]
    boundary: BoundarySpec,
    /// averaged or strict
    #[arg(long = "delta-variant", global = true, default_value = "averaged")]
    delta_variant: TripleDeltaVariant,
    #[arg(long, global = true, default_value_t = potts_core::recursion::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long = "max-iter", global = true, default_value_t = potts_core::recursion::DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Allow depth-3 enumeration
    #[arg(long, global = true)]
    long: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sizes of the tree and its interaction lists
    TreeInfo,
    /// Partition functions by enumeration
    Exact,
    /// Partition functions by recursion
    Recurse,
    /// Iterate the ratio map
    Iterate(IterateArgs),
    /// Analysis of the diagonal u = v
    Symmetric,
    /// All fixed points with residuals and stability
    Fixpoints,
    /// Classify every node of a parameter grid
    Scan(ScanArgs),
    /// Search for a point with a given classification
    FindRegime(FindRegimeArgs),
    /// Bracket a change in the number of fixed points in beta
    CriticalBeta(CriticalBetaArgs),
    /// Compare recursion with enumeration on random draws
    Verify(VerifyArgs),
}

#[derive(Args)]
struct IterateArgs {
    /// Starting u (default: from --boundary, or 1)
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// axis=min:max:steps entries separated by commas
    #[arg(long)]
    grid: GridSpec,
}

#[derive(Args)]
struct FindRegimeArgs {
    /// unique, symmetric-multi, five-solution or other
    #[arg(long)]
    target: Classification,
    /// Maximum number of classifications
    #[arg(long, default_value_t = 5000)]
    budget: usize,
    #[arg(long = "theta-tilde-min", default_value_t = SearchSpace::default().theta_tilde.0)]
    theta_tilde_min: f64,
    #[arg(long = "theta-tilde-max", default_value_t = SearchSpace::default().theta_tilde.1)]
    theta_tilde_max: f64,
    /// Print the point as a regression fixture instead
    #[arg(long)]
    fixture: bool,
}

#[derive(Args)]
struct CriticalBetaArgs {
    #[arg(long = "beta-min")]
    beta_min: f64,
    #[arg(long = "beta-max")]
    beta_max: f64,
    #[arg(long, default_value_t = 1e-6)]
    width: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 20)]
    draws: usize,
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Bad arguments or parameters.
    Usage(String),
    /// A mandatory result could not be produced.
    NoResult(String),
    /// A verification ran and failed; its report is still printed.
    Verification(Value),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::NoResult(_) => 3,
            Failure::Verification(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRegime(_) | Error::NoTransition { .. } | Error::NotAFixedPoint(_) => {
                Failure::NoResult(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl Cli {
    fn has_couplings(&self) -> bool {
        [self.j, self.j1, self.j2, self.h, self.beta]
            .iter()
            .any(Option::is_some)
    }

    fn model(&self) -> Result<ModelParams, Error> {
        if self.has_couplings() {
            ModelParams::new(
                self.j.unwrap_or(0.0),
                self.j1.unwrap_or(0.0),
                self.j2.unwrap_or(0.0),
                self.h.unwrap_or(0.0),
                self.beta.unwrap_or(1.0),
            )
        } else {
            Ok(ModelParams::from_thetas(&self.thetas()?))
        }
    }

    fn thetas(&self) -> Result<ThetaParams, Error> {
        if self.has_couplings() {
            thetas_from(&self.model()?)
        } else {
            ThetaParams::new(
                self.theta.unwrap_or(1.0),
                self.theta1.unwrap_or(1.0),
                self.theta2.unwrap_or(1.0),
                self.theta3.unwrap_or(1.0),
            )
        }
    }

    fn base(&self) -> Result<ParamBase, Error> {
        Ok(if self.has_couplings() {
            ParamBase::Model(self.model()?)
        } else {
            ParamBase::Thetas(self.thetas()?)
        })
    }

    fn check_enumeration_depth(&self) -> Result<(), Failure> {
        if self.depth > MAX_ORACLE_DEPTH {
            return Err(Error::DepthCap {
                depth: self.depth,
                cap: MAX_ORACLE_DEPTH,
            }
            .into());
        }
        if self.depth > QUICK_ENUMERATION_DEPTH && !self.long {
            return Err(Failure::Usage(format!(
                "depth {} enumeration takes minutes; pass --long",
                self.depth
            )));
        }
        Ok(())
    }

    fn json_only(&self, command: &str) -> Result<(), Failure> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(Failure::Usage(format!("{command} has no CSV output"))),
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let json_out = |command: &str, body: Value| -> Result<String, Failure> {
        cli.json_only(command)?;
        Ok(serde_json::to_string_pretty(&envelope(command, body)).unwrap())
    };
    match &cli.command {
        Command::TreeInfo => {
            let tree = CayleyTree::new(cli.depth)?;
            let lists = tree.interaction_lists();
            json_out(
                "tree-info",
                json!({
                    "depth": tree.depth(),
                    "vertices": tree.vertex_count(),
                    "leaves": tree.leaves().len(),
                    "nn_edges": lists.nn_edges.len(),
                    "second_neighbor_pairs": lists.second_pairs.len(),
                    "triples": lists.triples.len(),
                }),
            )
        }
        Command::Exact => {
            cli.check_enumeration_depth()?;
            let params = cli.model()?;
            let pv = exact_partition_vector(cli.depth, &params, cli.boundary, cli.delta_variant)?;
            json_out(
                "exact",
                json!({
                    "params": params,
                    "depth": cli.depth,
                    "boundary": cli.boundary,
                    "delta_variant": cli.delta_variant,
                    "log_z": pv.log_z,
                    "marginal": pv.marginal(),
                    "ratios": pv.ratios(),
                }),
            )
        }
        Command::Recurse => {
            let thetas = cli.thetas()?;
            let pv = recurse(cli.depth, &thetas, cli.boundary, cli.delta_variant);
            json_out(
                "recurse",
                json!({
                    "thetas": thetas,
                    "steps": cli.depth,
                    "boundary": cli.boundary,
                    "delta_variant": cli.delta_variant,
                    "log_z": pv.log_z,
                    "ratios": pv.ratios(),
                }),
            )
        }
        Command::Iterate(args) => {
            let thetas = cli.thetas()?;
            let start = match (args.u, args.v) {
                (Some(u), Some(v)) => RatioPoint::new(u, v)?,
                (None, None) => potts_core::base_partition(cli.boundary, &thetas).ratios(),
                _ => return Err(Failure::Usage("give both --u and --v, or neither".into())),
            };
            let opts = IterateOptions {
                tol: cli.tol,
                max_iter: cli.max_iter,
            };
            let result = iterate(start, &thetas, &opts)?;
            let text = json_out(
                "iterate",
                json!({ "thetas": thetas, "start": start, "result": result }),
            )?;
            if result.converged {
                Ok(text)
            } else {
                println!("{text}");
                Err(Failure::NoResult("iteration did not converge".into()))
            }
        }
        Command::Symmetric => {
            let thetas = cli.thetas()?;
            json_out(
                "symmetric",
                json!({ "thetas": thetas, "analysis": symmetric_analysis(&thetas) }),
            )
        }
        Command::Fixpoints => {
            let thetas = cli.thetas()?;
            let fps = all_fixed_points(&thetas);
            if cli.format == Format::Csv {
                return Ok(fixpoints_csv(&fps));
            }
            let points: Vec<RatioPoint> = fps.iter().map(|f| f.point).collect();
            let newton_agrees = same_point_set(&points, &newton_fixed_points(&thetas), 1e-8);
            json_out(
                "fixpoints",
                json!({ "thetas": thetas, "fixed_points": fps, "newton_agrees": newton_agrees }),
            )
        }
        Command::Scan(args) => {
            let base = cli.base()?;
            let show = std::io::stderr().is_terminal();
            let points = scan_with_progress(&base, &args.grid, |done, total| {
                if show && (done == total || done % (total / 20).max(1) == 0) {
                    eprint!("\rscanned {done}/{total}");
                    if done == total {
                        eprintln!();
                    }
                }
            })?;
            match cli.format {
                Format::Csv => Ok(scan_csv(&points)),
                Format::Json => json_out("scan", json!({ "grid": args.grid, "points": points })),
            }
        }
        Command::FindRegime(args) => {
            let space = SearchSpace {
                theta_tilde: (args.theta_tilde_min, args.theta_tilde_max),
                ..SearchSpace::default()
            };
            let found = find_regime(args.target, args.budget, &space, cli.seed)?;
            let Some(thetas) = found else {
                println!(
                    "{}",
                    json_out(
                        "find-regime",
                        json!({ "target": args.target, "found": false })
                    )?
                );
                return Err(Failure::NoResult(format!(
                    "no {} point within a budget of {}",
                    args.target, args.budget
                )));
            };
            if args.fixture {
                cli.json_only("find-regime")?;
                let provenance = format!(
                    "find-regime --target {} --budget {} --seed {}",
                    args.target, args.budget, cli.seed
                );
                return Ok(Fixture::build(&thetas, provenance).to_json());
            }
            json_out(
                "find-regime",
                json!({
                    "target": args.target,
                    "found": true,
                    "thetas": thetas,
                    "phase": classify(&thetas),
                    "bounds": region_bounds(&thetas),
                }),
            )
        }
        Command::CriticalBeta(args) => {
            let params = cli.model()?;
            let bracket = critical_beta_bracket(&params, args.beta_min, args.beta_max, args.width)?;
            json_out(
                "critical-beta",
                json!({ "params": params, "bracket": bracket }),
            )
        }
        Command::Verify(args) => {
            cli.check_enumeration_depth()?;
            let report = verify(cli.depth, args.draws, cli.seed)?;
            let body = envelope("verify", &report);
            cli.json_only("verify")?;
            if report.passed {
                Ok(serde_json::to_string_pretty(&body).unwrap())
            } else {
                Err(Failure::Verification(body))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            let _ = write!(stdout, "{text}");
            if !text.ends_with('\n') {
                let _ = writeln!(stdout);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::NoResult(msg) => eprintln!("error: {msg}"),
                Failure::Verification(report) => {
                    println!("{}", serde_json::to_string_pretty(report).unwrap());
                    eprintln!("error: verification failed");
                }
            }
            ExitCode::from(failure.code())
        }
    }
}
