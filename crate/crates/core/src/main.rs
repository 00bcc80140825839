use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rarita_core::checks::{run_checks, CheckConfig};
use rarita_core::clifford::Blade;
use rarita_core::kernel_io::{self, Kernel};
use rarita_core::monogenic::{basis_p_sigma, build_zk};
use rarita_core::poly::Space;
use rarita_core::rarita::build_ek;
use rarita_core::report;
use rarita_core::scalar::{rational_from_decimal, Scalar, ScalarMode, Q};
use rarita_core::{Error, Result};

#[derive(Parser)]
#[command(name = "rarita", version, about = "Rarita-Schwinger kernels and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Zk,
    Ek,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate and write a kernel file.
    GenKernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run named checks (or `all`).
    Check {
        #[arg(required = true)]
        names: Vec<String>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 24)]
        quad_order: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate E_k(x, u, v); prints one `blade,value` line per nonzero blade.
    EvalEk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
}

/// Failures that map to exit code 1 rather than 2.
enum Failure {
    Checks,
    Validation(String),
}

/// Prints a line, ignoring a closed pipe.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn parse_point(s: &str, n: usize) -> Result<Vec<Q>> {
    let v: Vec<Q> = s.split(',').map(rational_from_decimal).collect::<Result<_>>()?;
    if v.len() != n {
        return Err(Error::DimensionMismatch(n, v.len()));
    }
    Ok(v)
}

fn gen_kernel(n: usize, k: u32, kind: KindArg, out: &PathBuf) -> Result<std::result::Result<(), Failure>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let z = build_zk(n, k)?;
    let kernel = match kind {
        KindArg::Zk => {
            for (s, p) in basis_p_sigma::<Q>(n, k) {
                let r = z.reproduce(&p.rename(Space::U, Space::V))?;
                let diff = &r - &p;
                if !diff.is_zero() {
                    return Ok(Err(Failure::Validation(format!(
                        "reproducing property fails for σ = {s:?}: max residual {:e}",
                        diff.max_abs()
                    ))));
                }
            }
            Kernel::Zk((*z).clone())
        }
        KindArg::Ek => {
            let e = build_ek(&z)?;
            for (label, r) in [("left", e.left_annihilation()?), ("right", e.right_annihilation_check()?)] {
                if !r.is_zero() {
                    return Ok(Err(Failure::Validation(format!(
                        "{label} annihilation fails: max residual {:e}",
                        r.numerator().max_abs()
                    ))));
                }
            }
            Kernel::Ek(e)
        }
    };
    kernel_io::save(&kernel, out)?;
    emit(&format!("wrote {}", out.display()));
    Ok(Ok(()))
}

fn eval_ek(n: usize, k: u32, x: &str, u: &str, v: &str) -> Result<()> {
    let (x, u, v) = (parse_point(x, n)?, parse_point(u, n)?, parse_point(v, n)?);
    let e = build_ek(&*build_zk(n, k)?)?;
    let num = e.f_prime.numerator().evaluate(&[(Space::X, &x), (Space::U, &u), (Space::V, &v)])?;
    let r2: f64 = x.iter().map(|c| c.to_f64().powi(2)).sum();
    if r2 == 0.0 {
        return Err(Error::Singular);
    }
    let scale = e.float_scale() / r2.sqrt().powi(e.f_prime.power() as i32);
    for b in 0..(1u16 << n) {
        let c = num.coeff(Blade(b));
        if !c.is_zero() {
            emit(&format!("{b},{:e}", c.to_f64() * scale));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<std::result::Result<(), Failure>> {
    match cli.command {
        Command::GenKernel { n, k, kind, out } => gen_kernel(n, k, kind, &out),
        Command::Check { names, n, k, tol, quad_order, seed, mode, report: path } => {
            let mode = match mode {
                ModeArg::Exact => ScalarMode::Exact,
                ModeArg::Float => ScalarMode::Float,
            };
            let cfg = CheckConfig { n, k, tol, quad_order, seed, mode };
            let results = run_checks(&names, &cfg)?;
            for r in &results {
                emit(&report::line(r));
            }
            let (pass, fail, skip) = report::summary(&results);
            emit(&format!("{pass} pass, {fail} fail, {skip} skipped"));
            if let Some(path) = path {
                report::write(&results, &path)?;
            }
            Ok(if report::all_passed(&results) { Ok(()) } else { Err(Failure::Checks) })
        }
        Command::EvalEk { n, k, x, u, v } => eval_ek(n, k, &x, &u, &v).map(Ok),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Checks)) => ExitCode::from(1),
        Ok(Err(Failure::Validation(msg))) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
