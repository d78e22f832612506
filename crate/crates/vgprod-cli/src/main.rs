//! `vgprod`: evaluate densities, distribution and characteristic functions,
//! tail approximations, quantiles and sign probabilities for products of
//! variance-gamma random variables; draw reproducible samples; run the
//! built-in validation suites.

mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{build_job, FamilySpec, Job, JobFile, Quantity};
use output::Row;
use vgprod::grid::eval_grid;
use vgprod::oracle::mc_product_sample;
use vgprod::product::{quantile_numeric, tail_asymptotic_cdf, Tail};
use vgprod::special_cases::{
    al_product_cdf, al_product_cf, al_product_pdf, correlated_normal_product_pdf,
    mixed_product_cdf, mixed_product_cf, mixed_product_pdf,
};
use vgprod::validation::{run_suite, SUITES};
use vgprod::{EvalResult, EvalResultC};

#[derive(Parser)]
#[command(
    name = "vgprod",
    about = "Products of variance-gamma random variables: exact distributions and validation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JobArgs {
    /// Job description file (TOML; see README for the schema)
    #[arg(long, value_name = "FILE")]
    config: String,
    /// Override the file's tolerance (allowed range [1e-14, 1e-2])
    #[arg(long)]
    tol: Option<f64>,
    /// Override the file's sampling seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the file's output path (default: stdout)
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured quantity over the grid
    Eval(JobArgs),
    /// Draw reproducible samples (forces quantity = sample)
    Sample(JobArgs),
    /// Run a named validation suite
    Validate {
        /// identities | oracle-equivalence | normalization | asymptotics | montecarlo
        #[arg(long)]
        suite: String,
        /// Seed for the Monte Carlo suite (deterministic default)
        #[arg(long, default_value_t = 20240817)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match cli.command {
        Command::Eval(args) => run_job_command(args, None),
        Command::Sample(args) => run_job_command(args, Some(Quantity::Sample)),
        Command::Validate { suite, seed } => run_validate(&suite, seed),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn run_job_command(args: JobArgs, force: Option<Quantity>) -> ExitCode {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", args.config)),
    };
    let file: JobFile = match toml::from_str(&text) {
        Ok(f) => f,
        Err(e) => return fail(format!("config parse error: {e}")),
    };
    let job = match build_job(file, args.tol, args.seed, args.out, force) {
        Ok(j) => j,
        Err(e) => return fail(e),
    };
    let (rows, input_name) = match evaluate(&job) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let any_unconverged = rows.iter().any(|r| r.converged == Some(false));
    let write = |rows: &[Row]| -> std::io::Result<()> {
        match &job.out_path {
            Some(path) => output::write_rows(
                std::io::BufWriter::new(std::fs::File::create(path)?),
                rows,
                job.format,
                input_name,
            ),
            None => output::write_rows(std::io::stdout().lock(), rows, job.format, input_name),
        }
    };
    if let Err(e) = write(&rows) {
        return fail(format!("output error: {e}"));
    }
    if any_unconverged {
        eprintln!("warning: some rows did not reach the requested tolerance (converged=false)");
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn eval_row(r: Result<EvalResult, vgprod::Error>, input: f64) -> Result<Row, String> {
    let r = r.map_err(|e| e.to_string())?;
    Ok(Row {
        input,
        value: r.value,
        im: None,
        abs_err: Some(r.abs_err),
        converged: Some(r.converged),
    })
}

fn eval_row_c(r: Result<EvalResultC, vgprod::Error>, input: f64) -> Result<Row, String> {
    let r = r.map_err(|e| e.to_string())?;
    Ok(Row {
        input,
        value: r.value.re,
        im: Some(r.value.im),
        abs_err: Some(r.abs_err),
        converged: Some(r.converged),
    })
}

fn plain_row(input: f64, value: f64) -> Row {
    Row {
        input,
        value,
        im: None,
        abs_err: None,
        converged: None,
    }
}

type Rows = Result<Vec<Row>, String>;

fn evaluate(job: &Job) -> Result<(Vec<Row>, &'static str), String> {
    let embedded = job.spec.embedded();
    let tol = job.tol;
    let collect = |rows: Vec<Result<Row, String>>| -> Rows { rows.into_iter().collect() };
    match job.quantity {
        Quantity::Pdf => {
            let rows = collect(eval_grid(&job.grid, |z| match &job.spec {
                FamilySpec::Generic(s) => eval_row(s.pdf(z, tol), z),
                FamilySpec::Laplace(s) => eval_row(al_product_pdf(s, z, tol), z),
                FamilySpec::NormalLaplace(s) => eval_row(mixed_product_pdf(s, z, tol), z),
                FamilySpec::CorrelatedNormal(s) => {
                    eval_row(correlated_normal_product_pdf(s, z, tol), z)
                }
            }))?;
            Ok((rows, "z"))
        }
        Quantity::Cdf => {
            let rows = collect(eval_grid(&job.grid, |z| match &job.spec {
                FamilySpec::Laplace(s) => eval_row(al_product_cdf(s, z, tol), z),
                FamilySpec::NormalLaplace(s) => eval_row(mixed_product_cdf(s, z, tol), z),
                _ => {
                    if embedded.is_symmetric() {
                        eval_row(embedded.cdf_symmetric(z, tol), z)
                    } else {
                        eval_row(embedded.cdf_numeric(z, tol), z)
                    }
                }
            }))?;
            Ok((rows, "z"))
        }
        Quantity::Cf => {
            let rows = collect(eval_grid(&job.grid, |t| match &job.spec {
                FamilySpec::Laplace(s) => eval_row_c(al_product_cf(s, t, tol), t),
                FamilySpec::NormalLaplace(s) => {
                    eval_row(mixed_product_cf(s, t, tol), t)
                }
                _ => eval_row_c(embedded.cf(t, tol), t),
            }))?;
            Ok((rows, "t"))
        }
        Quantity::Tail => {
            let rows = collect(eval_grid(&job.grid, |z| {
                let side = if z > 0.0 { Tail::Upper } else { Tail::Lower };
                tail_asymptotic_cdf(&embedded, z, side)
                    .map(|v| plain_row(z, v))
                    .map_err(|e| e.to_string())
            }))?;
            Ok((rows, "z"))
        }
        Quantity::Quantile => {
            let rows = collect(eval_grid(&job.grid, |p| {
                quantile_numeric(&embedded, p, tol)
                    .map(|q| plain_row(p, q))
                    .map_err(|e| e.to_string())
            }))?;
            Ok((rows, "p"))
        }
        Quantity::ProbNonpositive => {
            Ok((vec![plain_row(0.0, embedded.prob_nonpositive())], "z"))
        }
        Quantity::Sample => {
            let n = job.grid.len();
            let batch = match &job.spec {
                FamilySpec::CorrelatedNormal(s) => s.sample(n, job.seed),
                _ => mc_product_sample(&embedded, n, job.seed),
            };
            let rows = batch
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| plain_row(i as f64, v))
                .collect();
            Ok((rows, "index"))
        }
    }
}

fn run_validate(suite: &str, seed: u64) -> ExitCode {
    let reports = match run_suite(suite, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("available suites: {}", SUITES.join(", "));
            return ExitCode::from(1);
        }
    };
    let mut all_pass = true;
    println!("{:<55} {:>12} {:>12}  verdict", "check", "discrepancy", "threshold");
    for r in &reports {
        all_pass &= r.pass;
        println!(
            "{:<55} {:>12.3e} {:>12.3e}  {}",
            r.name,
            r.discrepancy,
            r.threshold,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
