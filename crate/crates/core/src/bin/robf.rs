use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use robf::error::Error;
use robf::generate::{generate_minsat_robf, generate_random, random_feasible_x, FeasibleKind, MinsatInstance, MinsatOptions, RandomSpec};
use robf::io::{read_instance_file, write_instance, LoadedInstance};
use robf::mip::export_mip;
use robf::solvers::{solve, MethodChoice, SolveOptions, DEFAULT_BUDGET};
use robf::verify::{check_nonempty, check_supermodular, triple_agreement, SUPERMODULAR_MAX_K};
use robf::evaluate;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "robf", version, about = "Minimize the generalized Hurwicz criterion under belief-function uncertainty")]
struct Cli {
    /// Seed for random instances and random test points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the instance's alpha.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the report.
    Solve(SolveArgs),
    /// Evaluate a solution.
    Evaluate {
        instance: PathBuf,
        /// Solution as a JSON array, inline or in a file.
        #[arg(long)]
        x: String,
    },
    /// Replace fuzzy focal elements by their crisp reduction.
    ReduceFuzzy { instance: PathBuf },
    /// Cross-check the expectation formulas against the LP oracles.
    Verify {
        instance: PathBuf,
        /// Solution as a JSON array, inline or in a file; random if omitted.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Write the big-M mixed-integer model in LP format.
    ExportMip {
        instance: PathBuf,
        #[arg(long)]
        big_m: Option<f64>,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// auto, decomposition, exhaustive, alpha1, z2, approx-v or approx-mean.
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Also write the MIP model to this path.
    #[arg(long)]
    export_mip: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Seeded random instance.
    Random {
        #[arg(long, default_value_t = 4)]
        scenarios: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        focal: usize,
        #[arg(long, default_value_t = 2)]
        max_focal_size: usize,
        #[arg(long, value_enum, default_value = "polytope")]
        feasible: KindArg,
        /// Items to pick for selection sets.
        #[arg(long, default_value_t = 1)]
        p: usize,
    },
    /// Reduction instance from a MINSAT file.
    Minsat {
        input: PathBuf,
        /// Fail instead of writing the compact OWA mass form.
        #[arg(long)]
        explicit_only: bool,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum KindArg {
    Polytope,
    Selection,
}

enum Failure {
    Data(Error),
    Budget(Error),
    Verify(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e),
            other => Failure::Data(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable output"));
}

fn load(path: &Path, alpha: Option<f64>) -> CliResult<LoadedInstance> {
    let mut loaded = read_instance_file(path)?;
    if let Some(a) = alpha {
        loaded.instance = loaded.instance.with_alpha(a);
        loaded.instance.check()?;
    }
    Ok(loaded)
}

fn parse_x(arg: &str) -> CliResult<Vec<f64>> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Data(Error::Parse(format!("{arg}: {e}"))))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Data(Error::Parse(format!("solution: {e}"))))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(args) => {
            let inst = load(&args.instance, cli.alpha)?.instance;
            let choice: MethodChoice = args.method.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            if let Some(path) = &args.export_mip {
                let model = export_mip(&inst, None)?;
                std::fs::write(path, model.to_lp_string())
                    .map_err(|e| Failure::Data(Error::Parse(format!("{}: {e}", path.display()))))?;
            }
            let opts = SolveOptions { budget: args.budget, threads: args.threads };
            print_json(&solve(&inst, choice, &opts)?);
        }
        Command::Evaluate { instance, x } => {
            let inst = load(&instance, cli.alpha)?.instance;
            let eval = evaluate(&inst, &parse_x(&x)?)?;
            print_json(&json!({
                "upper": eval.upper_expectation,
                "lower": eval.lower_expectation,
                "hurwicz": eval.hurwicz,
                "per_scenario": eval.per_scenario_costs,
            }));
        }
        Command::ReduceFuzzy { instance } => {
            let loaded = load(&instance, cli.alpha)?;
            if loaded.fuzzy.is_none() {
                log::warn!("instance has no fuzzy focal elements; writing it unchanged");
            }
            print!("{}", write_instance(&loaded.instance));
        }
        Command::Verify { instance, x, tol } => {
            let inst = load(&instance, cli.alpha)?.instance;
            let x = match x {
                Some(arg) => parse_x(&arg)?,
                None => random_feasible_x(&inst.feasible, &mut ChaCha8Rng::seed_from_u64(cli.seed))?,
            };
            let agreement = triple_agreement(&inst, &x, tol)?;
            let mass = inst.mass.explicit()?;
            let nonempty = check_nonempty(&mass).ok().map(|r| r.nonempty);
            let supermodular = if mass.num_scenarios <= SUPERMODULAR_MAX_K { Some(check_supermodular(&mass)?) } else { None };
            let ok = agreement.agree && nonempty != Some(false) && supermodular != Some(false);
            print_json(&json!({
                "x": x,
                "agreement": agreement,
                "nonempty": nonempty,
                "supermodular": supermodular,
                "ok": ok,
            }));
            if !ok {
                return Err(Failure::Verify(format!("oracles disagree (max gap {:e})", agreement.max_gap)));
            }
        }
        Command::Gen(GenCommand::Random { scenarios, dim, focal, max_focal_size, feasible, p }) => {
            let spec = RandomSpec {
                num_scenarios: scenarios,
                dim,
                num_focal: focal,
                max_focal_size,
                feasible: match feasible {
                    KindArg::Polytope => FeasibleKind::Polytope,
                    KindArg::Selection => FeasibleKind::Selection,
                },
                p,
                alpha: cli.alpha.unwrap_or(0.5),
            };
            print!("{}", write_instance(&generate_random(&spec, cli.seed)?));
        }
        Command::Gen(GenCommand::Minsat { input, explicit_only }) => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Failure::Data(Error::Parse(format!("{}: {e}", input.display()))))?;
            let ms: MinsatInstance = serde_json::from_str(&text).map_err(|e| Failure::Data(Error::Parse(e.to_string())))?;
            let red = generate_minsat_robf(&ms, &MinsatOptions { allow_implicit: !explicit_only })?;
            let mut inst = red.instance;
            if let Some(a) = cli.alpha {
                inst = inst.with_alpha(a);
                inst.check()?;
            }
            print!("{}", write_instance(&inst));
        }
        Command::ExportMip { instance, big_m, output } => {
            let inst = load(&instance, cli.alpha)?.instance;
            let text = export_mip(&inst, big_m)?.to_lp_string();
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Data(Error::Parse(format!("{}: {e}", path.display()))))?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Budget(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
