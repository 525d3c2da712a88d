use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use kdist::applications::{
    corr_confidence_limits, corr_sampling_cdf, mcorr_sampling_cdf, p_rep, predictive_f_params,
    prob_replication_below, prob_replication_exceeds,
};
use kdist::bench::{kprime_rows, ksquare_rows, write_csv};
use kdist::kprime::{kprime_cdf, kprime_quantile, KPrimeParams};
use kdist::ksquare::{ksquare_cdf, ksquare_quantile, KSquareParams};
use kdist::{Error, EvalOptions, EvalReport, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser)]
#[command(
    name = "kdist",
    version,
    about = "K-prime and K-square distribution functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Eval {
    /// Absolute error bound on the series.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// method1, method2, hybrid or auto.
    #[arg(long, default_value = "auto")]
    strategy: Strategy,
    #[arg(long = "max-iter", default_value_t = 200_000)]
    max_iter: u64,
    /// Print evaluation diagnostics after the value.
    #[arg(long)]
    report: bool,
}

impl Eval {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            tolerance: self.tol,
            strategy: self.strategy,
            max_iterations: self.max_iter,
            ..EvalOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pr(K'_{q,r}(a) < x)
    Kprime {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// Pr(K²_{p,q,r}(a²) < x)
    Ksquare {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// x with Pr(K'_{q,r}(a) < x) = prob
    KprimeQuantile {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        prob: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// x with Pr(K²_{p,q,r}(a²) < x) = prob
    KsquareQuantile {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
        #[arg(long, allow_hyphen_values = true)]
        prob: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// Probability that a replication has the same sign
    Prep {
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long)]
        n1: u64,
    },
    /// Predictive probability that a replication's t exceeds a threshold
    PredictT {
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        threshold: f64,
        /// Report Pr(t < threshold) instead.
        #[arg(long)]
        below: bool,
        #[command(flatten)]
        eval: Eval,
    },
    /// Predictive probability that a future F exceeds a threshold
    PredictF {
        #[arg(long, allow_hyphen_values = true)]
        f0: f64,
        #[arg(long)]
        g: u64,
        #[arg(long, allow_hyphen_values = true)]
        n0: f64,
        #[arg(long, allow_hyphen_values = true)]
        n: f64,
        #[arg(long, allow_hyphen_values = true)]
        threshold: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// Pr(r < robs | rho) for a bivariate normal sample of size n
    Corr {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, allow_hyphen_values = true)]
        robs: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// Equal-tailed confidence limits for rho
    CorrCi {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        robs: f64,
        #[arg(long, default_value_t = 0.95, allow_hyphen_values = true)]
        level: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// Pr(R² < r2obs | rho2) for n observations of m variables
    Mcorr {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        rho2: f64,
        #[arg(long, allow_hyphen_values = true)]
        r2obs: f64,
        #[command(flatten)]
        eval: Eval,
    },
    /// Iteration counts of the summation strategies on the reference inputs, as CSV
    Bench {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Six significant digits, trailing zeros dropped.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn print_report(out: &mut impl Write, rep: &EvalReport) -> io::Result<()> {
    writeln!(out, "iterations: {}", rep.iterations)?;
    writeln!(out, "achieved_bound: {:e}", rep.achieved_bound)?;
    writeln!(out, "start_index: {}", rep.start_index)?;
    writeln!(out, "strategy_used: {:?}", rep.strategy_used)?;
    writeln!(out, "underflow_adjusted: {}", rep.underflow_adjusted)?;
    writeln!(out, "converged: {}", rep.converged)
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit_report(out: &mut impl Write, rep: EvalReport, eval: &Eval) -> io::Result<()> {
    writeln!(out, "{}", format_value(rep.value))?;
    if eval.report {
        print_report(out, &rep)?;
    }
    Ok(())
}

fn execute(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Kprime { q, r, a, x, eval } => {
            let rep = kprime_cdf(&KPrimeParams::new(q, r, a)?, x, &eval.options())?;
            emit_report(out, rep, &eval)?;
        }
        Command::Ksquare {
            p,
            q,
            r,
            a2,
            x,
            eval,
        } => {
            let rep = ksquare_cdf(&KSquareParams::new(p, q, r, a2)?, x, &eval.options())?;
            emit_report(out, rep, &eval)?;
        }
        Command::KprimeQuantile {
            q,
            r,
            a,
            prob,
            eval,
        } => {
            let x = kprime_quantile(&KPrimeParams::new(q, r, a)?, prob, &eval.options())?;
            writeln!(out, "{}", format_value(x))?;
        }
        Command::KsquareQuantile {
            p,
            q,
            r,
            a2,
            prob,
            eval,
        } => {
            let x = ksquare_quantile(&KSquareParams::new(p, q, r, a2)?, prob, &eval.options())?;
            writeln!(out, "{}", format_value(x))?;
        }
        Command::Prep { t1, n1 } => {
            writeln!(out, "{}", format_value(p_rep(t1, n1)?))?;
        }
        Command::PredictT {
            t1,
            n1,
            n,
            threshold,
            below,
            eval,
        } => {
            let o = eval.options();
            let v = if below {
                prob_replication_below(t1, n1, n, threshold, &o)?
            } else {
                prob_replication_exceeds(t1, n1, n, threshold, &o)?
            };
            writeln!(out, "{}", format_value(v))?;
        }
        Command::PredictF {
            f0,
            g,
            n0,
            n,
            threshold,
            eval,
        } => {
            let v = predictive_f_params(f0, g, n0, n)?.sf(threshold, &eval.options())?;
            writeln!(out, "{}", format_value(v))?;
        }
        Command::Corr { n, rho, robs, eval } => {
            writeln!(
                out,
                "{}",
                format_value(corr_sampling_cdf(n, rho, robs, &eval.options())?)
            )?;
        }
        Command::CorrCi {
            n,
            robs,
            level,
            eval,
        } => {
            let (lo, hi) = corr_confidence_limits(n, robs, level, &eval.options())?;
            writeln!(out, "{} {}", format_value(lo), format_value(hi))?;
        }
        Command::Mcorr {
            n,
            m,
            rho2,
            r2obs,
            eval,
        } => {
            let v = mcorr_sampling_cdf(n, m, rho2, r2obs, &eval.options())?;
            writeln!(out, "{}", format_value(v))?;
        }
        Command::Bench {
            table,
            tol,
            out: path,
        } => {
            EvalOptions::with_tolerance(tol).validate()?;
            let rows = if table == 1 {
                kprime_rows(tol)?
            } else {
                ksquare_rows(tol)?
            };
            match path {
                Some(p) => write_csv(&rows, File::create(p)?)?,
                None => write_csv(&rows, &mut *out)?,
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => EXIT_DOMAIN,
        Error::NotConverged(_) | Error::SearchFailed(_) | Error::Underflow { .. } => {
            EXIT_NOT_CONVERGED
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}
