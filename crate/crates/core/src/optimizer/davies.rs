//! Outcome-count experiment on random pairs of density matrices.
//!
//! For `N`-dimensional states the optimal rank-one POVM needs between `N`
//! and `N²` outcomes. Each trial draws two random states and records the
//! best information found for every outcome count in that range.

use rayon::prelude::*;

use super::povm::optimize_frame;
use crate::error::{invalid, Result};
use crate::infotheory::Ensemble;
use crate::matcore::{random_density_matrix, Matrix, SeededRng, C64};

/// Random starts per outcome count.
const RESTARTS: usize = 6;

#[derive(Debug, Clone)]
pub struct DaviesTrial {
    pub trial: usize,
    pub dim: usize,
    pub seed: u64,
    pub ranks: [usize; 2],
    pub states: [Matrix; 2],
    /// Best information for `N_w = N, N + 1, …, N²`.
    pub best_information: Vec<f64>,
}

impl DaviesTrial {
    pub fn information_at_dim(&self) -> f64 {
        self.best_information[0]
    }

    /// `max_{N_w > N} I(N_w) − I(N)`.
    pub fn improvement(&self) -> f64 {
        let top = self
            .best_information
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        top - self.best_information[0]
    }
}

/// Best information for every outcome count from `dim` to `dim²`.
///
/// Each count is warm-started from the previous optimum padded with a zero
/// outcome, so the sequence never decreases.
pub fn outcome_sweep(e: &Ensemble, rng: &mut SeededRng) -> Result<Vec<f64>> {
    let dim = e.dim();
    let mut out = Vec::with_capacity(dim * dim - dim + 1);
    let mut previous: Option<Matrix> = None;
    for n in dim..=dim * dim {
        let warm = previous.as_ref().map(|w| {
            Matrix::from_fn(dim, n, |r, c| {
                if c + 1 < n {
                    w[(r, c)]
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        });
        let (w, value) = optimize_frame(e, n, rng, RESTARTS, warm.as_ref())?;
        out.push(value);
        previous = Some(w);
    }
    Ok(out)
}

fn run_trial(dim: usize, trial: usize, seed: u64) -> Result<DaviesTrial> {
    let mut rng = SeededRng::new(seed);
    let ranks = [rng.integer_in(1, dim), rng.integer_in(1, dim)];
    let states = [
        random_density_matrix(&mut rng, dim, ranks[0])?,
        random_density_matrix(&mut rng, dim, ranks[1])?,
    ];
    let e = Ensemble::equiprobable(states.to_vec())?;
    let best_information = outcome_sweep(&e, &mut rng)?;
    Ok(DaviesTrial {
        trial,
        dim,
        seed,
        ranks,
        states,
        best_information,
    })
}

/// `trials` random equiprobable pairs for each dimension in `dims`.
///
/// Trial `t` of the `k`-th dimension uses the child seed
/// `rng.derived_seed(k · 2³² + t)`. Results are ordered by dimension, then trial.
pub fn davies_experiment(
    dims: &[usize],
    trials: usize,
    rng: &mut SeededRng,
) -> Result<Vec<DaviesTrial>> {
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    if let Some(d) = dims.iter().find(|d| !(2..=4).contains(*d)) {
        return Err(invalid(format!("unsupported dimension {d}; use 2, 3 or 4")));
    }
    let jobs: Vec<(usize, usize, u64)> = dims
        .iter()
        .enumerate()
        .flat_map(|(k, &dim)| (0..trials).map(move |t| (dim, t, ((k as u64) << 32) + t as u64)))
        .map(|(dim, t, index)| (dim, t, rng.derived_seed(index)))
        .collect();
    jobs.par_iter()
        .map(|&(dim, t, seed)| run_trial(dim, t, seed))
        .collect()
}
