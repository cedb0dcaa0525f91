//! `infogain`: frontier curves, optimizer runs, scenario reports and the
//! outcome-count experiment as CSV or `key=value` text.

mod format;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use infogain::frontier::{d1, frontier_curve, saturation_point, FrontierPoint};
use infogain::optimizer::{davies_experiment, lambda_zero_study, maximize_merit, MeritConfig};
use infogain::scenario::scenario_report;
use infogain::SeededRng;

use format::{flag, sig9};

const EXIT_CONFIG: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "infogain",
    version,
    about = "Information gain versus disturbance for two non-orthogonal qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic tradeoff curve as CSV.
    Frontier {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Number of samples over φ ∈ [0, π/4].
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Maximise the penalised figure of merit at one tolerated disturbance.
    Optimize {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Tolerated disturbance.
        #[arg(long)]
        dtol: f64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Three-party informations under the maximal-information attack.
    Scenario {
        #[command(flatten)]
        alpha: AlphaArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Best information against number of POVM outcomes for random state pairs.
    Davies {
        /// Hilbert-space dimension (2, 3 or 4).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Optimiser λ over an evenly spaced tolerance grid on [0, D₁].
    LambdaStudy {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Number of grid points.
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct AlphaArg {
    /// Half the angle between the two signal states, in degrees, within [0, 45].
    #[arg(long = "alpha-deg", allow_negative_numbers = true)]
    alpha_deg: f64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    /// Penalty weight of the first stage.
    #[arg(long, default_value_t = 1000.0)]
    penalty: f64,
    /// Weight of the last continuation stage; `none` keeps the first weight.
    #[arg(long = "final-penalty", default_value = "1e20")]
    final_penalty: String,
}

#[derive(Args)]
struct OutArg {
    /// Output file, or `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

enum Failure {
    Config(String),
    NotConverged,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

impl AlphaArg {
    fn radians(&self) -> Result<f64, Failure> {
        if !(0.0..=45.0).contains(&self.alpha_deg) {
            return Err(Failure::Config(format!(
                "--alpha-deg must lie in [0, 45], got {}",
                self.alpha_deg
            )));
        }
        Ok(self.alpha_deg.to_radians())
    }
}

impl SearchArgs {
    fn config(&self, alpha: f64, d_tol: f64) -> Result<MeritConfig, Failure> {
        if self.restarts == 0 {
            return Err(Failure::Config("--restarts must be at least 1".into()));
        }
        let last = match self.final_penalty.as_str() {
            "none" => None,
            s => Some(s.parse::<f64>().map_err(|_| {
                Failure::Config(format!(
                    "--final-penalty: expected a number or `none`, got `{s}`"
                ))
            })?),
        };
        Ok(MeritConfig::new(alpha, d_tol)?
            .with_penalty(self.penalty)?
            .with_final_penalty(last)?)
    }
}

fn check_points(points: usize) -> Result<(), Failure> {
    if points < 2 {
        return Err(Failure::Config("--points must be at least 2".into()));
    }
    Ok(())
}

fn frontier_row(buf: &mut String, p: &FrontierPoint) {
    let _ = writeln!(
        buf,
        "{},{},{},{},{}",
        sig9(p.phi),
        sig9(p.theta0),
        sig9(p.d0),
        sig9(p.information),
        flag(p.saturated)
    );
}

fn cmd_frontier(alpha_deg: &AlphaArg, points: usize) -> Result<String, Failure> {
    let alpha = alpha_deg.radians()?;
    check_points(points)?;
    let mut buf = String::from("phi_rad,theta0_rad,D,I_nats,saturated\n");
    if alpha_deg.alpha_deg == 45.0 {
        // Identical signals: the curve collapses to the origin.
        let _ = writeln!(buf, "0,0,0,0,1");
        return Ok(buf);
    }
    for p in frontier_curve(alpha, points)? {
        frontier_row(&mut buf, &p);
    }
    if let Some(p) = saturation_point(alpha) {
        frontier_row(&mut buf, &p);
    }
    Ok(buf)
}

fn cmd_optimize(
    alpha: &AlphaArg,
    dtol: f64,
    search: &SearchArgs,
) -> Result<(String, bool), Failure> {
    let alpha = alpha.radians()?;
    let cfg = search.config(alpha, dtol)?;
    let r = maximize_merit(&cfg, &mut SeededRng::new(search.seed), search.restarts)?;
    let mut buf = String::new();
    for (k, v) in [
        ("lambda", r.params.lambda),
        ("mu", r.params.mu),
        ("theta", r.params.theta),
        ("phi", r.params.phi),
        ("D", r.disturbance),
        ("I_nats", r.information),
        ("merit", r.merit),
    ] {
        let _ = writeln!(buf, "{k}={}", sig9(v));
    }
    let _ = writeln!(buf, "converged={}", r.converged);
    let _ = writeln!(buf, "seed={}", search.seed);
    Ok((buf, r.converged))
}

fn cmd_scenario(alpha: &AlphaArg) -> Result<String, Failure> {
    let r = scenario_report(alpha.radians()?)?;
    let mut buf = String::new();
    for (k, v) in [
        ("theta_deg", r.theta.to_degrees()),
        ("I_AE", r.i_ae),
        ("I_EB", r.i_eb),
        ("I_AB", r.i_ab),
        ("z_AB", r.z_ab),
        ("D", r.disturbance),
    ] {
        let _ = writeln!(buf, "{k}={}", sig9(v));
    }
    let _ = writeln!(buf, "degenerate={}", r.degenerate);
    Ok(buf)
}

fn cmd_davies(dim: usize, trials: usize, seed: u64) -> Result<String, Failure> {
    let rows = davies_experiment(&[dim], trials, &mut SeededRng::new(seed))?;
    let mut buf = String::from("trial,dim,I_at_N,max_improvement_beyond_N\n");
    for t in rows {
        let _ = writeln!(
            buf,
            "{},{},{},{}",
            t.trial,
            t.dim,
            sig9(t.information_at_dim()),
            sig9(t.improvement())
        );
    }
    Ok(buf)
}

fn cmd_lambda_study(
    alpha: &AlphaArg,
    points: usize,
    search: &SearchArgs,
) -> Result<(String, bool), Failure> {
    let alpha = alpha.radians()?;
    check_points(points)?;
    search.config(alpha, 0.0)?;
    let top = d1(alpha);
    let grid: Vec<f64> = (0..points)
        .map(|k| top * k as f64 / (points - 1) as f64)
        .collect();
    let rows = lambda_zero_study(
        alpha,
        &grid,
        &mut SeededRng::new(search.seed),
        search.restarts,
    )?;
    let mut buf = String::from("d_tol,lambda,abs_sin_lambda,D,I_nats,converged\n");
    for r in &rows {
        let _ = writeln!(
            buf,
            "{},{},{},{},{},{}",
            sig9(r.d_tol),
            sig9(r.lambda),
            sig9(r.abs_sin_lambda),
            sig9(r.disturbance),
            sig9(r.information),
            flag(r.converged)
        );
    }
    Ok((buf, rows.iter().all(|r| r.converged)))
}

fn emit(out: &OutArg, text: &str) -> Result<(), Failure> {
    let result = if out.out.as_os_str() == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
    } else {
        std::fs::write(&out.out, text)
    };
    result.map_err(|e| Failure::Config(format!("cannot write {}: {e}", out.out.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (text, out, converged) = match &cli.command {
        Command::Frontier { alpha, points, out } => (cmd_frontier(alpha, *points)?, out, true),
        Command::Optimize {
            alpha,
            dtol,
            search,
            out,
        } => {
            let (text, ok) = cmd_optimize(alpha, *dtol, search)?;
            (text, out, ok)
        }
        Command::Scenario { alpha, out } => (cmd_scenario(alpha)?, out, true),
        Command::Davies {
            dim,
            trials,
            seed,
            out,
        } => (cmd_davies(*dim, *trials, *seed)?, out, true),
        Command::LambdaStudy {
            alpha,
            points,
            search,
            out,
        } => {
            let (text, ok) = cmd_lambda_study(alpha, *points, search)?;
            (text, out, ok)
        }
    };
    emit(out, &text)?;
    if converged {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::NotConverged) => {
            eprintln!("error: search did not converge");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
    }
}
