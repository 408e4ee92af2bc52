//! `qmod` — compute generalized Dedekind sums, TQFT signatures, and run the
//! verification suites from the command line.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad
//! input, 3 I/O error.

mod fmt;
mod sweep;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmod_core::dedekind::{s_odd_exact, s_odd_float, GammaMatrix};
use qmod_core::periodic::map_from_json;
use qmod_core::qseries::{Extrapolation, Params, DEFAULT_RADIAL_GRID};
use qmod_core::rational::{rational_string, ReducedFraction};
use qmod_core::suites::{self, SuiteReport};
use qmod_core::tqft::{sigma2_cot3, sigma2_exact, sigma2_trig, Sigma2Argument};
use qmod_core::Error;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qmod",
    version,
    about = "Generalized Dedekind sums, Eisenstein L-values, and SU(2)-TQFT signatures"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Numerical precision regime for q-series evaluations.
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
    /// Override the default tolerance of the selected verification suite.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Emit machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for sweeps and suites (default: QMOD_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    /// IEEE doubles with 1e-14 series tails and Im(tau) >= 1e-4.
    Double,
    /// Tighter tails and a lower floor for near-real arguments.
    Extended,
}

impl GlobalOpts {
    fn params(&self) -> Params {
        match self.precision {
            PrecisionArg::Double => Params::default(),
            PrecisionArg::Extended => Params::extended(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the genus-2 signature sigma2(r/p).
    Sigma2 {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        p: i64,
        #[arg(long, value_enum, default_value_t = Sigma2Method::Exact)]
        method: Sigma2Method,
        /// Print per-method intermediate quantities.
        #[arg(long)]
        verbose: bool,
    },
    /// Evaluate the level-2 Dedekind sum S_g^odd(r/p).
    Dedekind {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        p: i64,
        /// Print the exact rational (default).
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Print a decimal approximation instead.
        #[arg(long)]
        float: bool,
    },
    /// Run a verification suite; exits 0 iff every check passes.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Emit figure-ready CSV sweeps over coprime pairs.
    Sweep {
        /// Which sum: 0 or 2.
        #[arg(long)]
        g: u32,
        #[arg(long)]
        pmax: i64,
        #[arg(long, value_enum, default_value_t = sweep::Transform::None)]
        transform: sweep::Transform,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sigma2Method {
    Exact,
    Trig,
    Cot3,
    Radial,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Exact sweep of the shear-difference identity for sigma2.
    MainTheorem {
        #[arg(long, default_value_t = 99)]
        pmax: i64,
    },
    /// Reciprocity defects: exact level-2 family, plus a seeded random-map
    /// float family when --level is given.
    Reciprocity {
        /// Even g of the level-2 family (weight g+2); repeatable.
        #[arg(long, num_args = 0.., default_values_t = vec![0u32, 2, 4])]
        g: Vec<u32>,
        /// Single matrix "a,b,c,d"; when omitted a word ball is used.
        #[arg(long)]
        gamma: Option<String>,
        /// Word-ball radius used when --gamma is omitted.
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 25)]
        pmax: i64,
        /// Run the float family on these levels as well (e.g. --level 3 4).
        #[arg(long, num_args = 0..)]
        level: Vec<u32>,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        /// Random arguments per (level, weight, gamma) cell.
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
    /// Mutual oracle: Bernoulli route vs cotangent route for L-values.
    Lfunc {
        #[arg(long, num_args = 0.., default_values_t = vec![2u32, 3, 4])]
        level: Vec<u32>,
        #[arg(long, num_args = 0.., default_values_t = vec![2u32, 3, 4, 5, 6])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        cases: usize,
        /// JSON file with a custom chi map ({"N": n, "values": [[re,im],..]}).
        #[arg(long, requires = "psi")]
        chi: Option<std::path::PathBuf>,
        /// JSON file with a custom psi map.
        #[arg(long, requires = "chi")]
        psi: Option<std::path::PathBuf>,
    },
    /// Theta-function identities and weight-0/-2 shear constants.
    Theta,
    /// Eichler transformation residuals over a word ball.
    Eichler {
        #[arg(long, num_args = 0.., default_values_t = vec![2u32, 4, 6])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Radial limits: vertical-limit constants and radial sigma2.
    Asymptotic,
    /// Closed-form sine/cosine identity sweep.
    TrigIdentities {
        #[arg(long, default_value_t = 99)]
        pmax: i64,
    },
    /// Exact vs floating S_g^odd over all coprime pairs.
    SOdd {
        #[arg(long, default_value_t = 99)]
        pmax: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .global
        .threads
        .or_else(|| std::env::var("QMOD_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sigma2 { r, p, method, verbose } => sigma2_cmd(&cli.global, r, p, method, verbose),
        Command::Dedekind { g, r, p, float, .. } => dedekind_cmd(g, r, p, float),
        Command::Verify { suite } => verify_cmd(&cli.global, suite),
        Command::Sweep { g, pmax, transform, out } => {
            match sweep::run(g, pmax, transform, out.as_deref()) {
                Ok(()) => Ok(ExitCode::SUCCESS),
                Err(sweep::SweepError::Io(e)) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(3))
                }
                Err(sweep::SweepError::Core(e)) => Err(e),
            }
        }
    }
}

fn sigma2_cmd(
    global: &GlobalOpts,
    r: i64,
    p: i64,
    method: Sigma2Method,
    verbose: bool,
) -> Result<ExitCode, Error> {
    let arg = Sigma2Argument::new(r, p)?;
    match method {
        Sigma2Method::Exact => {
            if verbose {
                let s0 = s_odd_exact(0, arg.x())?;
                let s2 = s_odd_exact(2, arg.x())?;
                println!("S_0^odd({}) = {}", arg.x(), rational_string(&s0));
                println!("S_2^odd({}) = {}", arg.x(), rational_string(&s2));
            }
            println!("{}", sigma2_exact(&arg)?);
        }
        Sigma2Method::Trig => {
            if verbose {
                println!("{} summands over odd n <= p-2", (p - 1) / 2);
            }
            println!("{}", fmt::sig(sigma2_trig(&arg), 12));
        }
        Sigma2Method::Cot3 => {
            if verbose {
                println!("{} summands over odd n <= p-2", (p - 1) / 2);
            }
            println!("{}", fmt::sig(sigma2_cot3(&arg), 12));
        }
        Sigma2Method::Radial => {
            let rep = qmod_core::qseries::radial_limit_sigma2_with(
                &arg,
                &DEFAULT_RADIAL_GRID,
                Extrapolation::LinearFit,
                &global.params(),
            )?;
            if verbose {
                println!(
                    "grid {:?}, |Im| = {:.2e}, fit residual = {:.2e}",
                    DEFAULT_RADIAL_GRID, rep.imaginary_part, rep.fit_residual
                );
            }
            println!("{}", fmt::sig(rep.limit, 12));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn dedekind_cmd(g: u32, r: i64, p: i64, float: bool) -> Result<ExitCode, Error> {
    let x = ReducedFraction::new(r, p)?;
    if float {
        println!("{}", fmt::sig(s_odd_float(g, &x)?, 12));
    } else {
        println!("{}", rational_string(&s_odd_exact(g, &x)?));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_gamma(text: &str) -> Result<GammaMatrix, Error> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Domain(format!("bad --gamma '{text}': {e}")))?;
    if parts.len() != 4 {
        return Err(Error::Domain(format!(
            "--gamma needs four integers a,b,c,d, got '{text}'"
        )));
    }
    GammaMatrix::new(parts[0], parts[1], parts[2], parts[3])
}

fn verify_cmd(global: &GlobalOpts, suite: VerifySuite) -> Result<ExitCode, Error> {
    let reports: Vec<SuiteReport> = match suite {
        VerifySuite::MainTheorem { pmax } => vec![suites::main_theorem_suite(pmax)?],
        VerifySuite::Reciprocity { g, gamma, radius, pmax, level, seed, cases } => {
            let weights: Vec<u32> = g.iter().map(|g| g + 2).collect();
            let mut reports = Vec::new();
            if let Some(text) = gamma {
                let m = parse_gamma(&text)?;
                reports.push(suites::reciprocity_single_gamma(&weights, m, pmax)?);
            } else {
                reports.push(suites::reciprocity_exact_suite(&weights, radius, pmax)?);
            }
            if !level.is_empty() {
                let tol = global.tolerance.unwrap_or(1e-6);
                reports.push(suites::reciprocity_float_suite(
                    &level,
                    &[3, 4, 5],
                    seed,
                    cases,
                    tol,
                )?);
            }
            reports
        }
        VerifySuite::Lfunc { level, k, seed, cases, chi, psi } => {
            let tol = global.tolerance.unwrap_or(1e-9);
            let maps = match (chi, psi) {
                (Some(cpath), Some(ppath)) => {
                    let read = |path: &std::path::Path| {
                        std::fs::read_to_string(path)
                            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
                    };
                    Some((map_from_json(&read(&cpath)?)?, map_from_json(&read(&ppath)?)?))
                }
                _ => None,
            };
            vec![suites::lfunc_suite(&level, &k, seed, cases, tol, maps)?]
        }
        VerifySuite::Theta => vec![suites::theta_suite(global.tolerance.unwrap_or(1e-12))?],
        VerifySuite::Eichler { k, radius } => {
            vec![suites::eichler_suite(&k, radius, global.tolerance.unwrap_or(1e-10))?]
        }
        VerifySuite::Asymptotic => vec![suites::asymptotic_suite(
            global.tolerance.unwrap_or(1e-4),
            1e-3,
        )?],
        VerifySuite::TrigIdentities { pmax } => vec![suites::trig_suite(pmax)?],
        VerifySuite::SOdd { pmax } => vec![suites::s_odd_consistency_suite(pmax)?],
    };

    let all_ok = reports.iter().all(|r| r.all_passed());
    if global.json {
        let doc = serde_json::json!({
            "ok": all_ok,
            "suites": reports,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for rep in &reports {
            println!(
                "suite {:<18} {:>6} passed {:>4} failed  ({:.2}s)",
                rep.suite, rep.passed, rep.failed, rep.elapsed_seconds
            );
            for case in rep.cases.iter().filter(|c| !c.ok).take(10) {
                println!("  FAIL {} (error {:.3e})", case.label, case.error);
            }
        }
        println!("{}", if all_ok { "all checks passed" } else { "CHECKS FAILED" });
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
