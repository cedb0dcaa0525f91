//! Rank-one POVM optimisation.
//!
//! A rank-one POVM with `n` outcomes on a `d`-dimensional space is a `d × n`
//! frame `W = [w_1 … w_n]` with `W W† = I`. Mutual information is maximised by
//! Riemannian conjugate-gradient ascent on that set: the Euclidean gradient with
//! respect to `w_μ` is `G_μ w_μ` with `G_μ = Σ_i p_i ln(P_{μi}/q_μ) ρ_i`, it is
//! projected onto the tangent space, and each step is retracted by the polar
//! map `W → (W W†)^{-1/2} W`.

use crate::error::{Error, Result};
use crate::infotheory::{mutual_information_from_table, Ensemble, Povm};
use crate::matcore::{Matrix, SeededRng, C64};

const MAX_ITERATIONS: usize = 4000;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
const STALL_TOL: f64 = 1e-15;
const STALL_ROUNDS: usize = 5;
const SINGULAR_TOL: f64 = 1e-12;

/// Likelihood table `P[μ][i] = w_μ† ρ_i w_μ`.
fn table(states: &[Matrix], w: &Matrix) -> Vec<Vec<f64>> {
    (0..w.cols())
        .map(|mu| {
            let col = w.column(mu);
            states
                .iter()
                .map(|rho| rho.quad_form(&col).re.max(0.0))
                .collect()
        })
        .collect()
}

fn information(e: &Ensemble, w: &Matrix) -> f64 {
    mutual_information_from_table(&table(e.states(), w), e.priors())
}

/// `(W W†)^{-1/2} W`, or an error when `W W†` is singular.
fn retract(w: &Matrix) -> Result<Matrix> {
    let s = w * &w.adjoint();
    let eig = s.hermitian_eigenvalues();
    let smallest = eig.first().copied().unwrap_or(0.0);
    if smallest <= SINGULAR_TOL * eig.last().copied().unwrap_or(1.0).max(1.0) {
        return Err(Error::DegenerateFrame(format!(
            "frame operator is singular (smallest eigenvalue {smallest:e})"
        )));
    }
    let inv_sqrt = s.hermitian_map(|x| 1.0 / x.sqrt());
    let out = &inv_sqrt * w;
    if w.is_real() {
        Ok(Matrix::from_fn(out.rows(), out.cols(), |r, c| {
            out[(r, c)].re.into()
        }))
    } else {
        Ok(out)
    }
}

/// Riemannian gradient of the information at `w`.
fn gradient(e: &Ensemble, w: &Matrix) -> Matrix {
    let d = w.rows();
    let n = w.cols();
    let p = table(e.states(), w);
    let mut grad = Matrix::zeros(d, n);
    for mu in 0..n {
        let q: f64 = p[mu].iter().zip(e.priors()).map(|(a, b)| a * b).sum();
        if q <= 1e-300 {
            continue;
        }
        let col = w.column(mu);
        for (i, rho) in e.states().iter().enumerate() {
            let weight = e.priors()[i] * (p[mu][i].max(1e-300) / q).ln();
            let v = rho.mul_vec(&col);
            for r in 0..d {
                grad[(r, mu)] += v[r] * weight;
            }
        }
    }
    tangent(w, &grad)
}

/// Projection onto the tangent space at `w`: `Δ − ½ (Δ W† + W Δ†) W`.
fn tangent(w: &Matrix, d: &Matrix) -> Matrix {
    let sym = &(d * &w.adjoint()) + &(w * &d.adjoint());
    d - &(&sym * w).scale(0.5)
}

/// Real inner product `Re Tr(A† B)`.
fn inner(a: &Matrix, b: &Matrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// Polak–Ribière conjugate-gradient ascent from the frame `w0` (which must
/// satisfy `W W† = I`), with directions carried over by tangent projection.
pub(crate) fn ascend(e: &Ensemble, w0: Matrix) -> Result<(Matrix, f64)> {
    let mut w = w0;
    let mut value = information(e, &w);
    let mut g = gradient(e, &w);
    let mut g2 = inner(&g, &g);
    let mut dir = g.clone();
    let mut step = 1.0;
    let mut stalled = 0;
    for _ in 0..MAX_ITERATIONS {
        if g2 < 1e-28 {
            break;
        }
        let mut slope = inner(&g, &dir);
        if slope <= 0.0 {
            dir = g.clone();
            slope = g2;
        }
        let mut accepted = None;
        while step >= MIN_STEP {
            if let Ok(trial) = retract(&(&w + &dir.scale(step))) {
                let v = information(e, &trial);
                if v >= value + ARMIJO * step * slope {
                    accepted = Some((trial, v));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((next, v)) = accepted else {
            if dir == g {
                break;
            }
            dir = g.clone();
            step = 1.0;
            continue;
        };
        let gain = v - value;
        w = next;
        value = v;
        step = (step * 2.0).min(1e3);

        let g_next = gradient(e, &w);
        let g_old = tangent(&w, &g);
        let beta = (inner(&g_next, &(&g_next - &g_old)) / g2).max(0.0);
        dir = &g_next + &tangent(&w, &dir).scale(beta);
        g = g_next;
        g2 = inner(&g, &g);

        if gain < STALL_TOL * value.max(1e-3) {
            stalled += 1;
            if stalled >= STALL_ROUNDS {
                break;
            }
        } else {
            stalled = 0;
        }
    }
    Ok((w, value))
}

/// A random frame with `n` outcomes, real when `real` is set.
pub(crate) fn random_frame(
    rng: &mut SeededRng,
    dim: usize,
    n: usize,
    real: bool,
) -> Result<Matrix> {
    let g = Matrix::from_fn(dim, n, |_, _| {
        if real {
            C64::new(rng.gaussian(), 0.0)
        } else {
            rng.complex_gaussian()
        }
    });
    retract(&g)
}

pub(crate) fn frame_to_povm(w: &Matrix) -> Result<Povm> {
    Povm::from_frame((0..w.cols()).map(|j| w.column(j)).collect())
}

/// Best rank-one POVM with `n_outcomes` outcomes over `restarts` random starts.
///
/// Real ensembles are searched over real frames.
pub fn optimize_povm(
    e: &Ensemble,
    n_outcomes: usize,
    rng: &mut SeededRng,
    restarts: usize,
) -> Result<(Povm, f64)> {
    let (w, value) = optimize_frame(e, n_outcomes, rng, restarts, None)?;
    Ok((frame_to_povm(&w)?, value))
}

/// Like [`optimize_povm`] but returns the frame and can also start from `warm`.
pub(crate) fn optimize_frame(
    e: &Ensemble,
    n_outcomes: usize,
    rng: &mut SeededRng,
    restarts: usize,
    warm: Option<&Matrix>,
) -> Result<(Matrix, f64)> {
    let dim = e.dim();
    if n_outcomes < dim {
        return Err(Error::DegenerateFrame(format!(
            "{n_outcomes} rank-one outcomes cannot resolve the identity in dimension {dim}"
        )));
    }
    let real = e.is_real();
    let mut best: Option<(Matrix, f64)> = None;
    let mut consider = |cand: (Matrix, f64)| {
        if best.as_ref().is_none_or(|b| cand.1 > b.1) {
            best = Some(cand);
        }
    };
    if let Some(w) = warm {
        consider(ascend(e, w.clone())?);
    }
    for _ in 0..restarts.max(if warm.is_some() { 0 } else { 1 }) {
        let w0 = random_frame(rng, dim, n_outcomes, real)?;
        consider(ascend(e, w0)?);
    }
    Ok(best.expect("at least one start"))
}
