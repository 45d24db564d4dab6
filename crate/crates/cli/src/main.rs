//! `luceopt`: solve, price, verify, gen and bench.
//!
//! Exit status is 0 on success, 1 for bad input or a failed verification,
//! and 2 when the problem has no feasible or tractable answer.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use luceopt_core::harness::{
    emit_report, generate_assortment_instance, generate_pricing_instance, run_benchmark,
    AssortmentExperimentConfig, BenchConfig, PricingExperimentConfig, ReportFormat,
};
use luceopt_core::verify::{run_suite, Suite};
use luceopt_core::{
    fixed_price_policy, quasi_same_price_policy, solve_assortment_2slm, solve_capacitated_attcorr,
    solve_capacitated_auto, solve_capacitated_bruteforce, solve_capacitated_tree, solve_japtlm,
    AssortmentSolution, CapacitatedProblem, Error, InstanceFile, Method, DEFAULT_EPS,
};

#[derive(Parser)]
#[command(
    name = "luceopt",
    version,
    about = "Assortment and pricing under the two-stage Luce model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Revenue-maximizing assortment for an instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Maximum number of offered products.
        #[arg(long)]
        capacity: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
    },
    /// Prices under the threshold model; products need a `utility`.
    Price {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Policy::TlmOpt)]
        policy: Policy,
    },
    /// Compare solvers against brute-force oracles on random instances.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Write random instance files.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a0: f64,
        /// Edge probability for assortment instances.
        #[arg(long, default_value_t = 0.0)]
        density: f64,
        /// Threshold; when given, pricing instances are generated instead.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a benchmark config and write the gap table (CSV, or markdown for `.md`).
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to CSV on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Bruteforce,
    Tree,
    Attcorr,
    Unconstrained,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    TlmOpt,
    Fixed,
    Quasi,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Assortment,
    Capacitated,
    Pricing,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. }
            | Error::ProblemTooLarge(_)
            | Error::NotATree(_)
            | Error::NotAttractivenessCorrelated
            | Error::ZeroOutsideOption
            | Error::NoFeasibleCandidate(_)
            | Error::InfeasibleNetwork => 2,
            _ => 1,
        };
        let message = match e {
            Error::ProblemTooLarge(n) => {
                format!("NP-hard, no exact method at this size ({n} products)")
            }
            other => other.to_string(),
        };
        Self { code, message }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn solve(instance: &Path, capacity: Option<usize>, method: MethodArg, eps: f64) -> CliResult<()> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Failure::input("--eps must be positive"));
    }
    let file = InstanceFile::from_json(&read(instance)?)?;
    let inst = file.to_instance()?;
    let n = inst.len();
    let (sol, used): (AssortmentSolution, Method) = match (method, capacity) {
        (MethodArg::Unconstrained, Some(_)) => {
            return Err(Failure::input(
                "--method unconstrained does not take --capacity",
            ));
        }
        (MethodArg::Unconstrained, None) | (MethodArg::Auto, None) => {
            (solve_assortment_2slm(&inst, eps), Method::Unconstrained)
        }
        (m, c) => {
            let prob = CapacitatedProblem::new(inst, c.unwrap_or(n.max(1)))?;
            match m {
                MethodArg::Auto => solve_capacitated_auto(&prob, eps)?,
                MethodArg::Bruteforce => (solve_capacitated_bruteforce(&prob)?, Method::BruteForce),
                MethodArg::Tree => (solve_capacitated_tree(&prob, eps)?, Method::Tree),
                _ => (solve_capacitated_attcorr(&prob, eps)?, Method::AttCorr),
            }
        }
    };
    let ids = file.ids();
    let mut chosen: Vec<usize> = sol.assortment.iter().map(|&i| ids[i]).collect();
    chosen.sort_unstable();
    println!(
        "{}",
        json!({"assortment": chosen, "revenue": sol.revenue, "method": used.name()})
    );
    Ok(())
}

fn price(instance: &Path, policy: Policy) -> CliResult<()> {
    let file = InstanceFile::from_json(&read(instance)?)?;
    let (inst, order) = file.to_priced_instance()?;
    let sol = match policy {
        Policy::TlmOpt => solve_japtlm(&inst)?,
        Policy::Fixed => fixed_price_policy(&inst, inst.len())?,
        Policy::Quasi => quasi_same_price_policy(&inst)?,
    };
    let ids = file.ids();
    let offered: Vec<usize> = order[..sol.k].iter().map(|&pos| ids[pos]).collect();
    println!(
        "{}",
        json!({
            "k": sol.k,
            "prices": sol.prices,
            "revenue": sol.revenue,
            "k1": sol.k1,
            "k2": sol.k2,
            "mode": sol.mode.name(),
            "ids": offered,
        })
    );
    Ok(())
}

fn verify(suite: SuiteArg, count: usize, seed: u64, max_n: usize) -> CliResult<()> {
    let (suite, name) = match suite {
        SuiteArg::Assortment => (Suite::Assortment, "assortment"),
        SuiteArg::Capacitated => (Suite::Capacitated, "capacitated"),
        SuiteArg::Pricing => (Suite::Pricing, "pricing"),
    };
    // every failure here is a flag problem, so it maps to 1
    let report = run_suite(suite, count, seed, max_n).map_err(|e| Failure::input(e.to_string()))?;
    for m in &report.mismatches {
        eprintln!("{m}");
    }
    println!(
        "{}",
        json!({"suite": name, "cases": report.cases, "mismatches": report.mismatches.len()})
    );
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::input(format!(
            "{} of {} cases disagree",
            report.mismatches.len(),
            report.cases
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    n: usize,
    a0: f64,
    density: f64,
    t: Option<f64>,
    seed: u64,
    count: usize,
    out: &Path,
) -> CliResult<()> {
    fs::create_dir_all(out).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    let files: Vec<String> = match t {
        Some(t) => {
            let cfg = PricingExperimentConfig {
                n,
                t,
                a0,
                count,
                seed,
                cell: 0,
            };
            cfg.validate()?;
            (0..count as u32)
                .map(|i| {
                    InstanceFile::from_priced_instance(&generate_pricing_instance(&cfg, i))
                        .to_json()
                })
                .collect()
        }
        None => {
            let cfg = AssortmentExperimentConfig {
                n,
                a0,
                d: density,
                count,
                seed,
                cell: 0,
            };
            cfg.validate()?;
            (0..count as u32)
                .map(|i| {
                    InstanceFile::from_instance(&generate_assortment_instance(&cfg, i)).to_json()
                })
                .collect()
        }
    };
    for (i, text) in files.iter().enumerate() {
        let path = out.join(format!("instance_{i:04}.json"));
        write(&path, text)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn bench(config: &Path, out: Option<&Path>) -> CliResult<()> {
    let cfg = BenchConfig::from_json(&read(config)?)?;
    let rows = run_benchmark(&cfg)?;
    let format = out.map_or(ReportFormat::Csv, ReportFormat::from_path);
    let mut buffer = Vec::new();
    emit_report(&rows, cfg.experiment, format, &mut buffer)
        .map_err(|e| Failure::input(e.to_string()))?;
    let text = String::from_utf8(buffer).expect("reports are UTF-8");
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("LUCEOPT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Failure::input(format!(
                "LUCEOPT_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Solve {
            instance,
            capacity,
            method,
            eps,
        } => solve(&instance, capacity, method, eps),
        Command::Price { instance, policy } => price(&instance, policy),
        Command::Verify {
            suite,
            count,
            seed,
            max_n,
        } => verify(suite, count, seed, max_n),
        Command::Gen {
            n,
            a0,
            density,
            t,
            seed,
            count,
            out,
        } => gen(n, a0, density, t, seed, count, &out),
        Command::Bench { config, out } => bench(&config, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
