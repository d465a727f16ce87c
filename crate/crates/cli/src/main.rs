use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use constrank::analysis::analyze;
use constrank::annihilator::{exact_annihilator, potential_operator, verify_exactness};
use constrank::harness::{
    blowup_experiment, bump_family, default_lorentz_q, hardy_experiment, linfty_condition, potential_failure_demo,
    sobolev_ratio_experiment, BlowupNorm, ExperimentConfig, LInftyConditionReport, RatioTable, TargetNorm,
    Thresholds, DEFAULT_BLOWUP_SIZE, DEFAULT_EPS, DEFAULT_FAMILY_SIZE,
};
use constrank::operator::{builtin, parse_operator, serialize_operator, BUILTIN_NAMES};
use constrank::rank::{constant_rank, DEFAULT_RANK_TOL, DEFAULT_SAMPLES};
use constrank::sphere::DEFAULT_SEED;
use constrank::{Error, Grid64, Operator};

/// Header of the CSV written by `verify --experiment linfty`.
const LINFTY_CSV_HEADER: &str = "basis,multi_index,component,integral";

const SAMPLING_CAVEAT: &str = "note: sampling can refute constant rank but cannot certify it";

#[derive(Parser)]
#[command(name = "constrank", version, about = "Analyze constant-rank differential operators and probe their L1 estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank profile, ellipticity and cancellation report.
    Analyze {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Build the exact annihilator and check exactness.
    Annihilate {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        sampling: Sampling,
        /// Where to write the annihilator in operator-file format.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the potential operator here.
        #[arg(long)]
        potential: Option<PathBuf>,
    },
    /// Run a numerical experiment and print its verdict.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OperatorArgs {
    /// Catalog operator name.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    builtin: Option<String>,
    /// Operator definition file (JSON).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Spatial dimension for builtins.
    #[arg(long, default_value_t = 3)]
    n: usize,
}

#[derive(Args)]
struct Sampling {
    /// Number of sampled directions.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Sobolev,
    Lorentz,
    Hardy,
    Blowup,
    Linfty,
    PotentialDemo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BlowupKind {
    Lorentz,
    Hardy,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Derivative order j on the left-hand side.
    #[arg(long, default_value_t = 1)]
    j: usize,
    /// Secondary exponent (Lorentz q or Hardy q).
    #[arg(long)]
    q: Option<f64>,
    /// Grid sizes for sweeps over N.
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 32, 64])]
    sizes: Vec<usize>,
    /// Mollifier radii for the blowup family.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_EPS)]
    eps: Vec<f64>,
    /// Grid size for blowup and the potential demo.
    #[arg(long, default_value_t = DEFAULT_BLOWUP_SIZE)]
    size: usize,
    /// Norm measured on the blowup family.
    #[arg(long, value_enum, default_value_t = BlowupKind::Lorentz)]
    norm: BlowupKind,
    /// Test fields per grid size.
    #[arg(long, default_value_t = DEFAULT_FAMILY_SIZE)]
    family_size: usize,
    /// Quadrature nodes for the L-infinity condition.
    #[arg(long)]
    quadrature: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything that aborts a command, with its exit status.
enum Failure {
    Config(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn load_operator(args: &OperatorArgs) -> Result<Operator, Failure> {
    match (&args.builtin, &args.file) {
        (Some(name), None) => builtin(name, args.n).map_err(|e| match e {
            Error::UnknownBuiltin(_) => {
                Failure::Config(format!("{e}; available: {}", BUILTIN_NAMES.join(", ")))
            }
            e => e.into(),
        }),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_operator(&text)?)
        }
        _ => Err(Failure::Config("exactly one of --builtin or --file is required".into())),
    }
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_analyze(op: &OperatorArgs, s: &Sampling) -> CmdResult {
    let op = load_operator(op)?;
    println!("{}", analyze(&op, s.samples, s.tol)?);
    println!("{SAMPLING_CAVEAT}");
    Ok(())
}

fn cmd_annihilate(op: &OperatorArgs, s: &Sampling, out: Option<&Path>, potential: Option<&Path>) -> CmdResult {
    let op = load_operator(op)?;
    let r = constant_rank(&op, s.samples, s.tol)?.r;
    let ann = exact_annihilator(&op)?;
    println!("operator: {} (k = {}, rank {r})", op.name(), op.k());
    print!("annihilator: order {}", ann.operator.k());
    if ann.is_zero {
        print!(", zero operator (B(ξ) is onto)");
    }
    println!(", {} -> {}", ann.operator.dim_v(), ann.operator.dim_w());
    let report = verify_exactness(&op, &ann.operator, s.samples, 1e-8)?;
    println!(
        "exactness: A·B ≡ 0 {}, dim im B = dim ker A {}, max angle {:.3e}",
        if report.exact_product_zero { "yes" } else { "no" },
        if report.dims_agree { "yes" } else { "no" },
        report.max_angle
    );
    println!("exactness {}", if report.pass { "PASS" } else { "FAIL" });
    if let Some(path) = out {
        write_file(path, &serialize_operator(&ann.operator))?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = potential {
        let pot = potential_operator(&op)?;
        if pot.is_zero {
            println!("potential is zero (B is elliptic)");
        }
        write_file(path, &serialize_operator(&pot.operator))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn linfty_csv(report: &LInftyConditionReport) -> String {
    let mut out = String::from(LINFTY_CSV_HEADER);
    out.push('\n');
    for (i, per_basis) in report.integrals.iter().enumerate() {
        for (beta, vector) in report.multi_indices.iter().zip(per_basis) {
            let label: Vec<String> = beta.entries().iter().map(|a| a.to_string()).collect();
            for (c, v) in vector.iter().enumerate() {
                let _ = writeln!(out, "{i},{},{c},{v:e}", label.join(" "));
            }
        }
    }
    out
}

fn emit_table(table: &RatioTable, out: Option<&Path>) -> CmdResult {
    if let Some(path) = out {
        write_file(path, &table.to_csv())?;
    }
    println!("{table}");
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let op = load_operator(&a.op)?;
    constant_rank(&op, a.sampling.samples, a.sampling.tol)?;
    let n = op.n();
    let cfg = |target| ExperimentConfig {
        j: a.j,
        target,
        sizes: a.sizes.clone(),
        family_size: a.family_size,
        seed: a.seed,
        thresholds: Thresholds::default(),
    };
    let lorentz_q = || a.q.unwrap_or_else(|| default_lorentz_q(n, a.j));
    match a.experiment {
        Experiment::Sobolev => emit_table(&sobolev_ratio_experiment(&op, &cfg(TargetNorm::Lp))?, a.out.as_deref()),
        Experiment::Lorentz => emit_table(
            &sobolev_ratio_experiment(&op, &cfg(TargetNorm::Lorentz(lorentz_q())))?,
            a.out.as_deref(),
        ),
        Experiment::Hardy => emit_table(&hardy_experiment(&op, a.q.unwrap_or(1.0), &cfg(TargetNorm::Lp))?, a.out.as_deref()),
        Experiment::Blowup => {
            let norm = match a.norm {
                BlowupKind::Lorentz => BlowupNorm::Lorentz(lorentz_q()),
                BlowupKind::Hardy => BlowupNorm::Hardy(a.q.unwrap_or(1.0)),
            };
            let table = blowup_experiment(&op, a.j, norm, &a.eps, a.size, Thresholds::default())?;
            emit_table(&table, a.out.as_deref())
        }
        Experiment::Linfty => {
            let report = linfty_condition(&op, a.quadrature)?;
            if let Some(path) = &a.out {
                write_file(path, &linfty_csv(&report))?;
            }
            println!("{report}");
            Ok(())
        }
        Experiment::PotentialDemo => {
            let grid = Grid64::new(n, *a.sizes.first().ok_or_else(|| Failure::Config("--sizes is empty".into()))?)?;
            let psi = bump_family(&grid, op.dim_v(), 1, a.seed)?.remove(0).field;
            let report = potential_failure_demo(&op, &psi)?;
            if let Some(path) = &a.out {
                let csv = format!(
                    "N,u_l1,operator_l1,lhs,contradiction\n{},{:e},{:e},{:e},{}\n",
                    grid.size(),
                    report.scale,
                    report.operator_l1,
                    report.lhs,
                    report.contradiction
                );
                write_file(path, &csv)?;
            }
            println!("{report}");
            Ok(())
        }
    }
}

fn format_witness(xi: &[f64]) -> String {
    let parts: Vec<String> = xi.iter().map(|v| format!("{}", (v * 1e12).round() / 1e12 + 0.0)).collect();
    format!("({})", parts.join(","))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Analyze { op, sampling } => cmd_analyze(op, sampling),
        Command::Annihilate { op, sampling, out, potential } => {
            cmd_annihilate(op, sampling, out.as_deref(), potential.as_deref())
        }
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(Error::NonConstantRank { min_rank, max_rank, witness })) => {
            println!("non-constant rank (witness ξ={})", format_witness(&witness));
            println!("rank varies between {min_rank} and {max_rank}");
            println!("{SAMPLING_CAVEAT}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
