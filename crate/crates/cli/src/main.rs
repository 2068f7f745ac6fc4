use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nottingham::acceptance::{self, Settings};
use nottingham::characters::validate_type;
use nottingham::equivalence::{
    bound_b, classify, power_conjugacy_oracle, power_conjugacy_predicate, ClassReport,
    CountMethod,
};
use nottingham::reduction::{reduce, verify_witness};
use nottingham::search::DEFAULT_BUDGET;
use nottingham::{Character, Error, Prime, SearchConfig};

#[derive(Parser, Debug)]
#[command(
    name = "nottingham",
    version,
    about = "Order p^2 torsion in the Nottingham group: reduction, classification and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Largest search space p^m attempted by exhaustive searches.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u64,

    /// Worker threads; 1 runs every search sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = acceptance::DEFAULT_SEED, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    OraclePartition,
    CanonicalReduce,
}

impl From<Method> for CountMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::OraclePartition => CountMethod::OraclePartition,
            Method::CanonicalReduce => CountMethod::CanonicalReduce,
        }
    }
}

#[derive(Args, Debug)]
struct TypeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a character and print the certifying witness.
    Reduce {
        #[arg(long)]
        p: u32,
        /// Character literal, e.g. "1:1,2:3,4:3".
        #[arg(long = "char")]
        character: String,
    },
    /// Strict classes of a type.
    Classify {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value_t = Method::OraclePartition)]
        method: Method,
    },
    /// The bound B(p,l,m) = p^k (p-1)^epsilon.
    Bound {
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Class counts over a grid of types, as CSV.
    Tables {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        max_l: usize,
        #[arg(long, default_value_t = 10)]
        max_m: usize,
        #[arg(long, value_enum, default_value_t = Method::OraclePartition)]
        method: Method,
    },
    /// Whether an element is conjugate to its n-th power.
    PowerConj {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        n: i64,
        /// Character for the oracle; defaults to the first reduced form.
        #[arg(long = "char")]
        character: Option<String>,
    },
    /// Run the acceptance suite.
    Verify {
        /// Sampled characters per type in the power-conjugacy sweep.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Cases per randomized property.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

enum Failure {
    Verification(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Budget { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn search_config(cli: &Cli) -> Result<SearchConfig, Failure> {
    let mut cfg = SearchConfig::with_budget(cli.budget);
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()).into());
        }
        cfg.parallel = jobs > 1;
        #[cfg(feature = "parallel")]
        if jobs > 1 {
            // only fails if a pool already exists, which cannot happen here
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = search_config(cli)?;
    match &cli.command {
        Command::Reduce { p, character } => cmd_reduce(cli.format, *p, character),
        Command::Classify { ty, method } => {
            let report = classify(Prime::new(ty.p)?, ty.l, ty.m, (*method).into(), &cfg)?;
            print_report(cli.format, &report);
            Ok(())
        }
        Command::Bound { ty } => cmd_bound(cli.format, ty),
        Command::Tables {
            p,
            max_l,
            max_m,
            method,
        } => cmd_tables(Prime::new(*p)?, *max_l, *max_m, (*method).into(), &cfg),
        Command::PowerConj { ty, n, character } => {
            cmd_power_conj(cli.format, ty, *n, character.as_deref(), &cfg)
        }
        Command::Verify { samples, cases } => {
            let settings = Settings {
                seed: cli.seed,
                search: cfg,
                samples_per_type: *samples,
                property_cases: *cases,
            };
            cmd_verify(cli.format, &settings)
        }
    }
}

fn cmd_reduce(format: Format, p: u32, literal: &str) -> Result<(), Failure> {
    let prime = Prime::new(p)?;
    let chi = Character::parse_literal(literal, prime)?;
    let ty = chi.break_sequence()?;
    let (form, witness) = reduce(&chi)?;
    let target = form.to_character();
    let check = verify_witness(&chi, &target, &witness.u);
    match format {
        Format::Text => {
            println!("type: {ty}");
            println!("reduced form: {}", target.literal());
            println!("witness: {witness}");
            println!("check: {check:?}");
        }
        Format::Json => println!(
            "{}",
            json!({
                "p": p,
                "input": chi.literal(),
                "type": {"l": ty.l, "m": ty.m},
                "reduced": target.literal(),
                "witness": witness.u.product_form(),
                "kernel_value": witness.kernel_value,
                "check": check,
            })
        ),
        Format::Csv => {
            println!("p,input,reduced,witness,valid");
            println!(
                "{p},\"{}\",\"{}\",\"{}\",{}",
                chi.literal(),
                target.literal(),
                witness.u.product_form(),
                check.is_valid()
            );
        }
    }
    if check.is_valid() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{check:?}")))
    }
}

fn print_report(format: Format, report: &ClassReport) {
    match format {
        Format::Text => print!("{report}"),
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            println!("{}", ClassReport::CSV_HEADER);
            println!("{}", report.csv_row());
        }
    }
}

fn cmd_bound(format: Format, ty: &TypeArgs) -> Result<(), Failure> {
    let b = bound_b(Prime::new(ty.p)?, ty.l, ty.m)?;
    match format {
        Format::Text => println!(
            "B({},{},{}) = {} (k = {}, epsilon = {})",
            ty.p, ty.l, ty.m, b.value, b.k, b.epsilon
        ),
        Format::Json => println!(
            "{}",
            json!({"p": ty.p, "l": ty.l, "m": ty.m, "B": b.value, "k": b.k, "epsilon": b.epsilon})
        ),
        Format::Csv => {
            println!("p,l,m,B,k,epsilon");
            println!("{},{},{},{},{},{}", ty.p, ty.l, ty.m, b.value, b.k, b.epsilon);
        }
    }
    Ok(())
}

/// Types over budget keep their row with an empty count and method
/// `over-budget`, so the table never passes off a missing value as data.
fn cmd_tables(
    prime: Prime,
    max_l: usize,
    max_m: usize,
    method: CountMethod,
    cfg: &SearchConfig,
) -> Result<(), Failure> {
    println!("p,l,m,valid,B,d,method,runtime_ms");
    for l in 1..=max_l {
        for m in 1..=max_m {
            if !validate_type(prime, l, m) {
                println!("{prime},{l},{m},false,,,,");
                continue;
            }
            let start = Instant::now();
            let b = bound_b(prime, l, m)?.value;
            match classify(prime, l, m, method, cfg) {
                Ok(r) => println!("{prime},{l},{m},true,{b},{},{method},{}", r.class_count(), start.elapsed().as_millis()),
                Err(Error::Budget { .. }) => println!("{prime},{l},{m},true,{b},,over-budget,"),
                Err(Error::Domain(_)) => println!("{prime},{l},{m},true,{b},,not-applicable,"),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn cmd_power_conj(
    format: Format,
    ty: &TypeArgs,
    n: i64,
    literal: Option<&str>,
    cfg: &SearchConfig,
) -> Result<(), Failure> {
    let prime = Prime::new(ty.p)?;
    let predicate = power_conjugacy_predicate(prime, ty.l, ty.m, n)?;
    let chi = match literal {
        Some(s) => {
            let chi = Character::parse_literal(s, prime)?;
            let found = chi.break_sequence()?;
            if (found.l, found.m) != (ty.l, ty.m) {
                return Err(Error::Usage(format!(
                    "character has type {found}, not <{},{}>",
                    ty.l, ty.m
                ))
                .into());
            }
            chi
        }
        None => nottingham::characters::enumerate_reduced_forms(prime, ty.l, ty.m)?[0].to_character(),
    };
    // the oracle is skipped, not failed, when it does not apply or is over budget
    let oracle = match power_conjugacy_oracle(&chi, n, cfg) {
        Ok(r) => Ok(r),
        Err(e @ (Error::Budget { .. } | Error::Domain(_))) => Err(e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let disagree = matches!(&oracle, Ok(r) if r.conjugate() != predicate);
    match format {
        Format::Text => {
            println!("predicate: {predicate}");
            println!("character: {}", chi.literal());
            match &oracle {
                Ok(r) => {
                    println!("oracle: {}", r.conjugate());
                    if let Some(w) = &r.witness {
                        println!("witness: {w}");
                    }
                }
                Err(why) => println!("oracle: skipped ({why})"),
            }
        }
        Format::Json => {
            let (value, witness, note) = match &oracle {
                Ok(r) => (
                    json!(r.conjugate()),
                    json!(r.witness.as_ref().map(|w| w.u.product_form())),
                    json!(null),
                ),
                Err(why) => (json!(null), json!(null), json!(why)),
            };
            println!(
                "{}",
                json!({
                    "p": ty.p, "l": ty.l, "m": ty.m, "n": n,
                    "character": chi.literal(),
                    "predicate": predicate,
                    "oracle": value,
                    "witness": witness,
                    "oracle_note": note,
                })
            );
        }
        Format::Csv => {
            println!("p,l,m,n,character,predicate,oracle");
            let value = oracle.as_ref().map(|r| r.conjugate().to_string()).unwrap_or_default();
            println!("{},{},{},{n},\"{}\",{predicate},{value}", ty.p, ty.l, ty.m, chi.literal());
        }
    }
    if disagree {
        Err(Failure::Verification("oracle disagrees with the predicate".into()))
    } else {
        Ok(())
    }
}

fn cmd_verify(format: Format, settings: &Settings) -> Result<(), Failure> {
    let outcomes = acceptance::run_all(settings);
    match format {
        Format::Text => {
            for o in &outcomes {
                println!("{o}");
                for d in &o.details {
                    println!("    {d}");
                }
            }
        }
        Format::Json => {
            let rows: Vec<_> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "criterion": o.id,
                        "title": o.title,
                        "passed": o.passed,
                        "details": o.details,
                    })
                })
                .collect();
            println!("{}", serde_json::Value::Array(rows));
        }
        Format::Csv => {
            println!("criterion,passed,runtime_ms");
            for o in &outcomes {
                println!("{},{},{}", o.id, o.passed, o.elapsed.as_millis());
            }
        }
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("criteria {}", failed.join(", "))))
    }
}
