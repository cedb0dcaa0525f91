//! Maximisation of the figure of merit over probe interactions.
//!
//! The search variable joins the four interaction angles with six Givens
//! angles of a real orthonormal measurement basis on the probe, so one
//! Powell run maximises over interaction and measurement together. The
//! reported measurement is then refined with [`super::povm`].

use std::f64::consts::PI;

use rayon::prelude::*;

use super::povm::{frame_to_povm, optimize_frame};
use super::powell::{powell_maximize, PowellOptions, PowellResult};
use crate::channel::{amplitudes, disturbance_from_amplitudes, probe_state_real};
use crate::error::{invalid, Result};
use crate::infotheory::{mutual_information, Ensemble, Povm};
use crate::matcore::{Matrix, SeededRng};
use crate::model::{ProbeParams, Signal, SignalPair};

const DIM: usize = 10;
const GIVENS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// `λ` and `μ` are set to zero when `|sin λ|` falls below this.
pub const LAMBDA_SNAP: f64 = 1e-6;
/// Restarts kept for the higher-weight penalty stages.
const CONTINUED_RESTARTS: usize = 3;
const PENALTY_GROWTH: f64 = 100.0;
/// Fresh-direction Powell restarts per penalty stage.
const STAGE_RESTARTS: usize = 4;
/// Relative merit margin within which a `λ = 0` optimum is preferred.
const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeritMode {
    /// `M = I − w (D − D_tol)²`.
    Penalty,
    /// `M = I − k D`.
    Linear { k: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeritConfig {
    pub alpha: f64,
    pub d_tol: f64,
    /// Penalty weight `w`; the first stage uses it.
    pub penalty_weight: f64,
    /// When set above `penalty_weight`, the search is continued through
    /// stages with `w` multiplied by 100 each time, ending at this value.
    pub final_penalty_weight: Option<f64>,
    pub mode: MeritMode,
    pub max_iterations: usize,
}

impl MeritConfig {
    pub const DEFAULT_PENALTY: f64 = 1000.0;
    pub const DEFAULT_FINAL_PENALTY: f64 = 1e20;

    pub fn new(alpha: f64, d_tol: f64) -> Result<Self> {
        let cfg = Self {
            alpha,
            d_tol,
            penalty_weight: Self::DEFAULT_PENALTY,
            final_penalty_weight: Some(Self::DEFAULT_FINAL_PENALTY),
            mode: MeritMode::Penalty,
            max_iterations: 500,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Linear merit `I − k D`.
    pub fn linear(alpha: f64, k: f64) -> Result<Self> {
        let cfg = Self {
            d_tol: 0.0,
            final_penalty_weight: None,
            mode: MeritMode::Linear { k },
            ..Self::new(alpha, 0.0)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_penalty(mut self, weight: f64) -> Result<Self> {
        self.penalty_weight = weight;
        self.validate()?;
        Ok(self)
    }

    pub fn with_final_penalty(mut self, weight: Option<f64>) -> Result<Self> {
        self.final_penalty_weight = weight;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        SignalPair::new(self.alpha)?;
        if !(0.0..=0.5).contains(&self.d_tol) {
            return Err(invalid(format!("d_tol {} outside [0, 1/2]", self.d_tol)));
        }
        if !(self.penalty_weight > 0.0 && self.penalty_weight.is_finite()) {
            return Err(invalid("penalty weight must be positive"));
        }
        if let Some(w) = self.final_penalty_weight {
            if !(w > 0.0 && w.is_finite()) {
                return Err(invalid("final penalty weight must be positive"));
            }
        }
        if let MeritMode::Linear { k } = self.mode {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(invalid("linear merit slope must be non-negative"));
            }
        }
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations must be positive"));
        }
        Ok(())
    }

    /// Penalty weights of the successive stages.
    pub fn penalty_schedule(&self) -> Vec<f64> {
        let mut out = vec![self.penalty_weight];
        if let (MeritMode::Penalty, Some(last)) = (self.mode, self.final_penalty_weight) {
            let mut w = self.penalty_weight;
            while w * PENALTY_GROWTH < last {
                w *= PENALTY_GROWTH;
                out.push(w);
            }
            if last > w {
                out.push(last);
            }
        }
        out
    }

    /// The figure of merit at weight `w`.
    pub fn merit(&self, information: f64, disturbance: f64, w: f64) -> f64 {
        match self.mode {
            MeritMode::Penalty => information - w * (disturbance - self.d_tol).powi(2),
            MeritMode::Linear { k } => information - k * disturbance,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeReport {
    pub params: ProbeParams,
    pub povm: Povm,
    pub information: f64,
    pub disturbance: f64,
    pub merit: f64,
    /// Weight used for `merit`; the slope `k` in linear mode.
    pub penalty_weight: f64,
    pub restarts: usize,
    pub best_restart: usize,
    pub converged: bool,
    /// Seed of each restart, in restart order.
    pub seeds: Vec<u64>,
}

impl OptimizeReport {
    pub fn abs_sin_lambda(&self) -> f64 {
        self.params.lambda.sin().abs()
    }
}

/// Columns of `G₀₁(g₀) G₀₂(g₁) … G₂₃(g₅)`.
fn givens_basis(g: &[f64]) -> [[f64; 4]; 4] {
    let mut w = [[0.0; 4]; 4];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (&(p, q), &angle) in GIVENS_PAIRS.iter().zip(g) {
        let (s, c) = angle.sin_cos();
        for row in w.iter_mut() {
            let (a, b) = (row[p], row[q]);
            row[p] = c * a - s * b;
            row[q] = s * a + c * b;
        }
    }
    w
}

/// Fast evaluation of `(I, D)` at a joint search point.
#[derive(Clone, Copy)]
struct Evaluator {
    signals: [[f64; 2]; 2],
}

impl Evaluator {
    fn new(alpha: f64) -> Result<Self> {
        let pair = SignalPair::new(alpha)?;
        Ok(Self {
            signals: [pair.state(Signal::Zero), pair.state(Signal::One)],
        })
    }

    fn eval(&self, x: &[f64]) -> (f64, f64) {
        let a = ProbeParams::new(x[0], x[1], x[2], x[3]).tensor();
        let w = givens_basis(&x[4..DIM]);
        let mut table = [[0.0; 2]; 4];
        let mut disturbance = 0.0;
        for (i, &signal) in self.signals.iter().enumerate() {
            let y = amplitudes(signal, &a);
            disturbance += 0.5 * disturbance_from_amplitudes(signal, &y);
            for (mu, row) in table.iter_mut().enumerate() {
                let mut p = 0.0;
                for yn in &y {
                    let amp: f64 = (0..4).map(|b| yn[b] * w[b][mu]).sum();
                    p += amp * amp;
                }
                row[i] = p;
            }
        }
        (equiprobable_information(&table), disturbance)
    }
}

/// Mutual information of an equiprobable binary source from `P[μ][i]`.
fn equiprobable_information(table: &[[f64; 2]; 4]) -> f64 {
    let term = |p: f64, q: f64| if p > 0.0 { p * (p / q).ln() } else { 0.0 };
    let mut total = 0.0;
    for row in table {
        let q = 0.5 * (row[0] + row[1]);
        if q > 0.0 {
            total += 0.5 * (term(row[0], q) + term(row[1], q));
        }
    }
    total.max(0.0)
}

fn probe_ensemble(alpha: f64, p: &ProbeParams) -> Result<Ensemble> {
    let pair = SignalPair::new(alpha)?;
    let a = p.tensor();
    let states = Signal::BOTH
        .iter()
        .map(|&s| {
            let r = probe_state_real(&amplitudes(pair.state(s), &a));
            Matrix::from_fn(4, 4, |i, j| r[i][j].into())
        })
        .collect();
    Ensemble::equiprobable(states)
}

fn average_disturbance(alpha: f64, p: &ProbeParams) -> Result<f64> {
    let pair = SignalPair::new(alpha)?;
    let a = p.tensor();
    Ok(Signal::BOTH
        .iter()
        .map(|&s| {
            let c = pair.state(s);
            0.5 * disturbance_from_amplitudes(c, &amplitudes(c, &a))
        })
        .sum())
}

fn reduce_half_turn(x: f64) -> f64 {
    x - PI * (x / PI).round()
}

/// Free coordinates of a search point.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Space {
    Full,
    /// `λ = μ = 0` held fixed.
    LambdaZero,
}

impl Space {
    fn fixed(self) -> usize {
        match self {
            Space::Full => 0,
            Space::LambdaZero => 2,
        }
    }

    fn embed(self, s: &[f64]) -> [f64; DIM] {
        let mut x = [0.0; DIM];
        x[self.fixed()..].copy_from_slice(s);
        x
    }

    fn project(self, x: &[f64]) -> Vec<f64> {
        x[self.fixed()..].to_vec()
    }
}

struct Run {
    result: PowellResult,
    converged: bool,
}

/// One penalty stage. Powell is restarted with fresh axis directions until
/// a restart no longer improves the merit.
fn stage(cfg: &MeritConfig, ev: &Evaluator, space: Space, s0: &[f64], w: f64) -> PowellResult {
    let opts = PowellOptions {
        max_iterations: cfg.max_iterations,
        ..PowellOptions::default()
    };
    let run = |start: &[f64]| {
        powell_maximize(
            |s| {
                let (i, d) = ev.eval(&space.embed(s));
                cfg.merit(i, d, w)
            },
            start,
            &opts,
        )
    };
    let mut best = run(s0);
    for _ in 0..STAGE_RESTARTS {
        if !best.converged {
            break;
        }
        let next = run(&best.x);
        let gain = next.value - best.value;
        let evaluations = best.evaluations + next.evaluations;
        let iterations = best.iterations + next.iterations;
        let done = gain <= opts.tolerance * next.value.abs().max(1.0);
        if gain > 0.0 {
            best = PowellResult {
                evaluations,
                iterations,
                ..next
            };
        }
        if done {
            break;
        }
    }
    best
}

/// Multi-start staged search; returns the winning restart index and run,
/// with the run's point embedded in the full ten coordinates.
fn search(
    cfg: &MeritConfig,
    ev: &Evaluator,
    space: Space,
    seeds: &[u64],
    schedule: &[f64],
) -> (usize, Run) {
    let first: Vec<Run> = seeds
        .par_iter()
        .map(|&seed| {
            let mut r = SeededRng::new(seed);
            let x0: Vec<f64> = (0..DIM).map(|_| r.uniform_in(-PI, PI)).collect();
            let result = stage(cfg, ev, space, &space.project(&x0), schedule[0]);
            Run {
                converged: result.converged,
                result,
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| {
        first[b]
            .result
            .value
            .total_cmp(&first[a].result.value)
            .then(a.cmp(&b))
    });
    order.truncate(if schedule.len() > 1 {
        CONTINUED_RESTARTS
    } else {
        1
    });

    let continued: Vec<(usize, Run)> = order
        .par_iter()
        .map(|&k| {
            let mut run = Run {
                result: first[k].result.clone(),
                converged: first[k].converged,
            };
            for &w in &schedule[1..] {
                let next = stage(cfg, ev, space, &run.result.x, w);
                run.converged = next.converged;
                run.result = next;
            }
            (k, run)
        })
        .collect();

    let (k, mut run) = continued
        .into_iter()
        .reduce(|acc, cand| {
            let better = cand.1.result.value > acc.1.result.value
                || (cand.1.result.value == acc.1.result.value && cand.0 < acc.0);
            if better {
                cand
            } else {
                acc
            }
        })
        .expect("at least one restart");
    run.result.x = space.embed(&run.result.x).to_vec();
    (k, run)
}

/// Best of `restarts` Powell searches from uniformly random angles.
///
/// Each restart draws its start from its own derived seed. The first penalty
/// stage runs for every restart; the best few continue through the
/// remaining stages. Ties go to the lowest restart index.
///
/// If the winner has `λ ≠ 0`, the search is repeated with `λ = μ = 0` held
/// fixed, and that result is reported when its merit is as high within a
/// relative `1e−10`. Near `D_tol = 0` the unconstrained search can stall on
/// the non-interacting probes at `λ = π/2`.
pub fn maximize_merit(
    cfg: &MeritConfig,
    rng: &mut SeededRng,
    restarts: usize,
) -> Result<OptimizeReport> {
    cfg.validate()?;
    if restarts == 0 {
        return Err(invalid("need at least one restart"));
    }
    let ev = Evaluator::new(cfg.alpha)?;
    let schedule = cfg.penalty_schedule();
    let seeds: Vec<u64> = (0..restarts as u64).map(|k| rng.derived_seed(k)).collect();

    let (mut best_restart, mut best) = search(cfg, &ev, Space::Full, &seeds, &schedule);
    if best.result.x[0].sin().abs() >= LAMBDA_SNAP {
        let (k, sub) = search(cfg, &ev, Space::LambdaZero, &seeds, &schedule);
        let slack = TIE_TOL * best.result.value.abs().max(1.0);
        if sub.result.value >= best.result.value - slack {
            best_restart = k;
            best = sub;
        }
    }
    let w_final = *schedule.last().expect("nonempty schedule");
    let x = &best.result.x;
    let mut params = ProbeParams::new(reduce_half_turn(x[0]), x[1], x[2], x[3]);
    let snapped = params.lambda.sin().abs() < LAMBDA_SNAP;
    if snapped {
        params.lambda = 0.0;
        params.mu = 0.0;
    }

    let ensemble = probe_ensemble(cfg.alpha, &params)?;
    let povm = if snapped {
        // With λ = 0 both probe states live on span{v₁, v₂} and are swapped by
        // v₁ ↔ v₂, so the computational basis is an optimal measurement.
        Povm::from_basis(&Matrix::identity(4))?
    } else {
        let g = givens_basis(&x[4..DIM]);
        let w0 = Matrix::from_fn(4, 4, |r, c| g[r][c].into());
        let (w, _) = optimize_frame(&ensemble, 4, &mut rng.derive(u64::MAX), 0, Some(&w0))?;
        frame_to_povm(&w)?
    };
    let information = mutual_information(&ensemble, &povm)?;
    let disturbance = average_disturbance(cfg.alpha, &params)?;
    let weight = match cfg.mode {
        MeritMode::Penalty => w_final,
        MeritMode::Linear { k } => k,
    };
    Ok(OptimizeReport {
        params,
        povm,
        information,
        disturbance,
        merit: cfg.merit(information, disturbance, w_final),
        penalty_weight: weight,
        restarts,
        best_restart,
        converged: best.converged,
        seeds,
    })
}

/// One row of [`lambda_zero_study`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaStudyRow {
    pub d_tol: f64,
    /// `λ` of the best restart reduced to `[−π/2, π/2]`.
    pub lambda: f64,
    pub abs_sin_lambda: f64,
    pub disturbance: f64,
    pub information: f64,
    pub converged: bool,
}

/// Runs [`maximize_merit`] at each tolerated disturbance and records the `λ`
/// of the optimum. Grid point `j` uses the child generator `rng.derive(j)`.
pub fn lambda_zero_study(
    alpha: f64,
    d_tol_grid: &[f64],
    rng: &mut SeededRng,
    restarts: usize,
) -> Result<Vec<LambdaStudyRow>> {
    d_tol_grid
        .iter()
        .enumerate()
        .map(|(j, &d_tol)| {
            let cfg = MeritConfig::new(alpha, d_tol)?;
            let r = maximize_merit(&cfg, &mut rng.derive(j as u64), restarts)?;
            Ok(LambdaStudyRow {
                d_tol,
                lambda: r.params.lambda,
                abs_sin_lambda: r.abs_sin_lambda(),
                disturbance: r.disturbance,
                information: r.information,
                converged: r.converged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::disturbance_closed_form;
    use crate::frontier::{d1, frontier_information, max_information, min_disturbance};
    use crate::infotheory::information_from_z;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn givens_basis_is_orthogonal() {
        let w = givens_basis(&[0.3, -1.2, 2.0, 0.7, 0.1, -2.5]);
        for a in 0..4 {
            for b in 0..4 {
                let dot: f64 = (0..4).map(|r| w[r][a] * w[r][b]).sum();
                assert!((dot - if a == b { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn evaluator_matches_library() {
        let ev = Evaluator::new(0.5).unwrap();
        let mut rng = SeededRng::new(9);
        for _ in 0..50 {
            let x: Vec<f64> = (0..DIM).map(|_| rng.uniform_in(-PI, PI)).collect();
            let (i, d) = ev.eval(&x);
            let p = ProbeParams::new(x[0], x[1], x[2], x[3]);
            assert!((d - disturbance_closed_form(0.5, &p)).abs() < 1e-12);
            let g = givens_basis(&x[4..]);
            let basis = Matrix::from_fn(4, 4, |r, c| g[r][c].into());
            let povm = Povm::from_basis(&basis).unwrap();
            let e = probe_ensemble(0.5, &p).unwrap();
            assert!((i - mutual_information(&e, &povm).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_zero_identity_basis_gives_closed_form() {
        for (alpha, theta, phi) in [(PI / 5.0, 0.7, 0.0), (0.2, -0.3, 0.5)] {
            let x = [0.0, 0.0, theta, phi, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
            let (i, _) = Evaluator::new(alpha).unwrap().eval(&x);
            let z = (2.0 * alpha).cos() * (2.0 * phi).cos();
            assert!((i - information_from_z(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn schedule() {
        let cfg = MeritConfig::new(0.3, 0.01).unwrap();
        let s = cfg.penalty_schedule();
        assert_eq!(s.first(), Some(&1000.0));
        assert_eq!(s.last(), Some(&1e20));
        let plain = cfg.with_final_penalty(None).unwrap();
        assert_eq!(plain.penalty_schedule(), vec![1000.0]);
        assert!(MeritConfig::new(0.3, 0.6).is_err());
        assert!(cfg.with_penalty(0.0).is_err());
        assert!(maximize_merit(&cfg, &mut SeededRng::new(1), 0).is_err());
    }

    #[test]
    fn reaches_maximal_information() {
        let alpha = PI / 5.0;
        let cfg = MeritConfig::new(alpha, d1(alpha)).unwrap();
        let r = maximize_merit(&cfg, &mut SeededRng::new(11), 8).unwrap();
        assert!(
            (r.information - max_information(alpha)).abs() < 1e-4,
            "{r:?}"
        );
        assert!((r.information - 0.048536).abs() < 1e-4);
        assert!((r.disturbance - d1(alpha)).abs() < 1e-4);
        assert!(r.abs_sin_lambda() < 1e-3);
        assert!(r.converged);
    }

    #[test]
    fn zero_tolerance_forces_no_information() {
        let cfg = MeritConfig::new(FRAC_PI_8, 0.0).unwrap();
        let r = maximize_merit(&cfg, &mut SeededRng::new(12), 8).unwrap();
        assert!(r.information < 1e-6 && r.disturbance < 1e-6, "{r:?}");
    }

    #[test]
    fn interior_point_on_frontier() {
        let alpha = FRAC_PI_8;
        let d = min_disturbance(alpha, FRAC_PI_8);
        let cfg = MeritConfig::new(alpha, d).unwrap();
        let r = maximize_merit(&cfg, &mut SeededRng::new(13), 8).unwrap();
        assert!(
            (r.information - frontier_information(alpha, d)).abs() < 1e-4,
            "{r:?}"
        );
        assert!(r.information <= frontier_information(alpha, r.disturbance) + 1e-4);
    }

    #[test]
    fn report_is_consistent_and_deterministic() {
        let cfg = MeritConfig::new(0.4, 0.01).unwrap();
        let a = maximize_merit(&cfg, &mut SeededRng::new(14), 4).unwrap();
        let b = maximize_merit(&cfg, &mut SeededRng::new(14), 4).unwrap();
        assert_eq!(a.information.to_bits(), b.information.to_bits());
        assert_eq!(a.params, b.params);
        assert_eq!(a.seeds, b.seeds);
        assert_eq!(
            a.merit,
            a.information - a.penalty_weight * (a.disturbance - cfg.d_tol).powi(2)
        );
        let e = probe_ensemble(0.4, &a.params).unwrap();
        assert!((mutual_information(&e, &a.povm).unwrap() - a.information).abs() < 1e-10);
        assert!((disturbance_closed_form(0.4, &a.params) - a.disturbance).abs() < 1e-10);
    }

    #[test]
    fn linear_mode() {
        let cfg = MeritConfig::linear(FRAC_PI_8, 0.5).unwrap();
        let r = maximize_merit(&cfg, &mut SeededRng::new(15), 4).unwrap();
        assert_eq!(r.merit, r.information - 0.5 * r.disturbance);
        assert!(r.information <= frontier_information(FRAC_PI_8, r.disturbance) + 1e-4);
        assert!(r.information > 0.0);
    }
}
