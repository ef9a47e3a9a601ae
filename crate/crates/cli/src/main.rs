//! Command-line front end: factor polynomials, run desk-scale benchmarks,
//! and recover exact rationals from decimal approximations.

mod bench;
mod report;

use bench::{run_bench, BenchSpec};
use clap::{Parser, Subcommand};
use dashu_int::UBig;
use nullstelle::num::{ceil_log2_rbig, parse_decimal, Ctx};
use nullstelle::recover::recover_rational;
use nullstelle::{factorize, Error, FactorConfig, DEFAULT_SEED};
use report::{DiagnosticsReport, FactorReport};
use std::io::Read;
use std::process::ExitCode;
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(
    name = "nullstelle",
    version,
    about = "Exact multivariate polynomial factorization over Q by variety sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a polynomial read from a file or stdin
    Factor {
        /// Ordered, comma-separated variable names
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        /// RNG seed for sampling decisions
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Working precision override in bits
        #[arg(long)]
        precision_bits: Option<usize>,
        /// Denominator bound override (defaults to the lcm of coefficient
        /// denominators of the monic input)
        #[arg(long)]
        denominator_bound: Option<u64>,
        /// Cap on the candidate factor total degree
        #[arg(long)]
        max_factor_degree: Option<u32>,
        /// Output format
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
        /// Abort after this many seconds
        #[arg(long)]
        timeout: Option<u64>,
        /// Input file, or `-` for stdin
        #[arg(default_value = "-")]
        input: String,
    },
    /// Generate seeded random monic products and factor them
    Bench {
        #[arg(long)]
        nvars: usize,
        #[arg(long)]
        nfactors: usize,
        #[arg(long)]
        factor_degree: u32,
        #[arg(long)]
        denom_max: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Per-trial timeout in seconds
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
    },
    /// Recover the exact rational a decimal approximates
    Recover {
        /// Decimal approximation, e.g. 0.6667
        #[arg(long)]
        value: String,
        /// Denominator upper bound (at least 2)
        #[arg(long)]
        bound: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Factor {
            vars,
            seed,
            precision_bits,
            denominator_bound,
            max_factor_degree,
            format,
            timeout,
            input,
        } => cmd_factor(
            vars,
            seed,
            precision_bits,
            denominator_bound,
            max_factor_degree,
            &format,
            timeout,
            &input,
        ),
        Command::Bench {
            nvars,
            nfactors,
            factor_degree,
            denom_max,
            trials,
            workers,
            seed,
            timeout,
            format,
        } => cmd_bench(
            BenchSpec {
                nvars,
                nfactors,
                factor_degree,
                denom_max,
                trials,
                workers,
                seed,
                timeout: Duration::from_secs(timeout),
            },
            &format,
        ),
        Command::Recover { value, bound } => cmd_recover(&value, bound),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_factor(
    vars: Vec<String>,
    seed: u64,
    precision_bits: Option<usize>,
    denominator_bound: Option<u64>,
    max_factor_degree: Option<u32>,
    format: &str,
    timeout: Option<u64>,
    input: &str,
) -> ExitCode {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let poly = match nullstelle::parse_poly(text.trim(), &names) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let config = FactorConfig {
        seed,
        precision_bits,
        denominator_bound: denominator_bound.map(UBig::from),
        max_factor_degree,
        assume_squarefree: false,
        deadline: timeout.map(|s| Instant::now() + Duration::from_secs(s)),
    };
    let started = Instant::now();
    let result = match factorize(&poly, &config) {
        Ok(r) => r,
        Err(Error::Timeout) => {
            eprintln!("error: timed out");
            return ExitCode::from(3);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let time_ms = started.elapsed().as_millis() as u64;

    let report = FactorReport {
        input: text.trim().to_string(),
        unit: result.unit.to_string(),
        factors: result.factors.iter().map(|p| p.render(&vars)).collect(),
        complete: result.complete,
        diagnostics: DiagnosticsReport {
            precision_bits: result.diagnostics.precision_bits as u64,
            l: u64::try_from(&result.diagnostics.denominator_bound).unwrap_or(u64::MAX),
            residuals: result.diagnostics.residuals.clone(),
            seed: result.diagnostics.seed,
            time_ms,
        },
    };
    if format == "json" {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("input: {}", report.input);
        println!("unit: {}", report.unit);
        for f in &report.factors {
            println!("factor: {f}");
        }
        println!("complete: {}", report.complete);
        println!(
            "precision: {} bits, L = {}, seed = {}, {} ms",
            report.diagnostics.precision_bits,
            report.diagnostics.l,
            report.diagnostics.seed,
            report.diagnostics.time_ms
        );
        if !result.diagnostics.notes.is_empty() {
            for n in &result.diagnostics.notes {
                println!("note: {n}");
            }
        }
    }
    if result.complete {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_bench(spec: BenchSpec, format: &str) -> ExitCode {
    let report = run_bench(&spec);
    if format == "json" {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("trial  ok  exact  complete  found/expected  time_ms  error");
        for t in &report.trials {
            println!(
                "{:>5}  {:>2}  {:>5}  {:>8}  {:>6}/{:<8} {:>7}  {}",
                t.trial,
                if t.success { "y" } else { "n" },
                if t.verified_exact { "y" } else { "n" },
                if t.complete { "y" } else { "n" },
                t.factors_found,
                t.factors_expected,
                t.time_ms,
                t.error.as_deref().unwrap_or("-")
            );
        }
        println!(
            "success rate: {:.1}%  median time: {} ms",
            report.success_rate * 100.0,
            report.median_time_ms
        );
    }
    ExitCode::SUCCESS
}

fn cmd_recover(value: &str, bound: u64) -> ExitCode {
    let Some(rational) = parse_decimal(value) else {
        eprintln!("error: `{value}` is not a decimal number");
        return ExitCode::from(1);
    };
    if bound < 2 {
        eprintln!("error: bound must be at least 2");
        return ExitCode::from(1);
    }
    // enough precision to hold the decimal exactly plus the budget margin
    let digit_bits = ceil_log2_rbig(
        &(dashu_ratio::RBig::from(1 + value.len() as i64) * dashu_ratio::RBig::from(10i64.pow(2))),
    )
    .max(1) as usize;
    let bits = (4 * value.len() + 64).max(64 + digit_bits);
    let ctx = Ctx::new(bits);
    let x = ctx.from_rbig(&rational);
    match recover_rational(&x, &UBig::from(bound)) {
        Ok(r) => {
            println!("{r}");
            ExitCode::SUCCESS
        }
        Err(e @ Error::BoundViolated { .. }) | Err(e @ Error::DivergentExpansion { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
    }
}
