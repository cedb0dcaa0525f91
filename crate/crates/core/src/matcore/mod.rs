//! Small dense linear algebra: complex matrices, the 2 ⊗ 4 bipartite index,
//! partial traces, seeded random density matrices and Gram–Schmidt.

pub mod eigen;
mod matrix;
mod rng;

pub use matrix::{Matrix, C64};
pub use rng::SeededRng;

use crate::error::{invalid, Error, Result};

/// Joint index of the system (dimension `dim_a`) and probe (dimension `dim_e`).
///
/// The joint basis vector `|e_m⟩ ⊗ |v_β⟩` sits at `m · dim_e + β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteIndex {
    pub dim_a: usize,
    pub dim_e: usize,
}

impl BipartiteIndex {
    /// The qubit ⊗ four-level probe layout.
    pub const QUBIT_PROBE: BipartiteIndex = BipartiteIndex { dim_a: 2, dim_e: 4 };

    pub fn joint_dim(&self) -> usize {
        self.dim_a * self.dim_e
    }

    pub fn flatten(&self, system: usize, probe: usize) -> usize {
        debug_assert!(system < self.dim_a && probe < self.dim_e);
        system * self.dim_e + probe
    }

    pub fn unflatten(&self, joint: usize) -> (usize, usize) {
        (joint / self.dim_e, joint % self.dim_e)
    }
}

/// Which factor of the system ⊗ probe space is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOut {
    /// Trace over the probe; leaves the 2 × 2 state received downstream.
    Probe,
    /// Trace over the system; leaves the 4 × 4 probe state.
    System,
}

const STATE_TOL: f64 = 1e-12;

/// Partial trace of an 8 × 8 density matrix over the qubit ⊗ probe split.
pub fn partial_trace(rho: &Matrix, side: TraceOut) -> Result<Matrix> {
    let idx = BipartiteIndex::QUBIT_PROBE;
    let n = idx.joint_dim();
    if rho.rows() != n || rho.cols() != n {
        return Err(invalid(format!(
            "partial trace expects {n}x{n}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if rho.hermitian_residual() >= STATE_TOL {
        return Err(invalid("partial trace input is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() >= STATE_TOL || tr.im.abs() >= STATE_TOL {
        return Err(invalid(format!("partial trace input has trace {tr}")));
    }
    Ok(match side {
        TraceOut::Probe => Matrix::from_fn(idx.dim_a, idx.dim_a, |m, k| {
            (0..idx.dim_e)
                .map(|b| rho[(idx.flatten(m, b), idx.flatten(k, b))])
                .sum()
        }),
        TraceOut::System => Matrix::from_fn(idx.dim_e, idx.dim_e, |b, g| {
            (0..idx.dim_a)
                .map(|m| rho[(idx.flatten(m, b), idx.flatten(m, g))])
                .sum()
        }),
    })
}

/// Random density matrix `G G† / Tr(G G†)` with `G` a `dim × rank` complex
/// Ginibre matrix; the result has rank `rank` with probability one.
pub fn random_density_matrix(rng: &mut SeededRng, dim: usize, rank: usize) -> Result<Matrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(invalid(format!(
            "need 1 <= rank <= dim, got rank {rank}, dim {dim}"
        )));
    }
    let g = Matrix::from_fn(dim, rank, |_, _| rng.complex_gaussian());
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    let mut rho = w.scale(1.0 / tr);
    // Symmetrise away rounding so the Hermitian residual is exactly zero.
    let adj = rho.adjoint();
    rho = (&rho + &adj).scale(0.5);
    Ok(rho)
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass.
pub fn gram_orthonormalize(vectors: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    const DEPENDENCE_TOL: f64 = 1e-10;
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let dim = first.len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(invalid("vectors of unequal length"));
    }
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let original = norm(v);
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm(&w);
        if original == 0.0 || n <= DEPENDENCE_TOL * original {
            return Err(Error::DegenerateInput(format!(
                "vector {k} is linearly dependent on its predecessors"
            )));
        }
        basis.push(w.into_iter().map(|z| z / n).collect());
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn flatten_roundtrip() {
        let idx = BipartiteIndex::QUBIT_PROBE;
        for m in 0..2 {
            for b in 0..4 {
                let k = idx.flatten(m, b);
                assert_eq!(k, 4 * m + b);
                assert_eq!(idx.unflatten(k), (m, b));
            }
        }
    }

    #[test]
    fn product_state_traces() {
        let rho = Matrix::identity(2)
            .scale(0.5)
            .kron(&Matrix::identity(4).scale(0.25));
        let b = partial_trace(&rho, TraceOut::Probe).unwrap();
        assert!(b.max_abs_diff(&Matrix::identity(2).scale(0.5)) < 1e-15);
        let e = partial_trace(&rho, TraceOut::System).unwrap();
        assert!(e.max_abs_diff(&Matrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_input() {
        assert!(matches!(
            partial_trace(&Matrix::identity(4), TraceOut::Probe),
            Err(Error::InvalidArgument(_))
        ));
        assert!(partial_trace(&Matrix::identity(8), TraceOut::Probe).is_err());
    }

    #[test]
    fn random_pure_state_is_a_projector() {
        let mut rng = SeededRng::new(11);
        let rho = random_density_matrix(&mut rng, 2, 1).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!((&rho * &rho).max_abs_diff(&rho) < 1e-10);
    }

    #[test]
    fn random_full_rank_state() {
        let mut rng = SeededRng::new(12);
        let rho = random_density_matrix(&mut rng, 4, 4).unwrap();
        assert!(rho.hermitian_eigenvalues().iter().all(|&x| x > 0.0));
        assert_eq!(rho.numerical_rank(1e-12), 4);
    }

    #[test]
    fn random_state_is_deterministic() {
        let a = random_density_matrix(&mut SeededRng::new(5), 3, 2).unwrap();
        let b = random_density_matrix(&mut SeededRng::new(5), 3, 2).unwrap();
        let bits = |m: &Matrix| -> Vec<(u64, u64)> {
            m.entries()
                .iter()
                .map(|z| (z.re.to_bits(), z.im.to_bits()))
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn rank_above_dim_is_rejected() {
        assert!(random_density_matrix(&mut SeededRng::new(1), 2, 3).is_err());
    }

    #[test]
    fn gram_schmidt_simple() {
        let out = gram_orthonormalize(&[vec![c(1.0), c(0.0)], vec![c(1.0), c(1.0)]]).unwrap();
        assert!((out[0][0] - c(1.0)).norm() < 1e-15 && out[0][1].norm() < 1e-15);
        assert!(out[1][0].norm() < 1e-15 && (out[1][1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn gram_schmidt_keeps_orthonormal_input() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let input = vec![vec![c(s), c(s)], vec![c(s), c(-s)]];
        let out = gram_orthonormalize(&input).unwrap();
        for (u, v) in out.iter().zip(&input) {
            for (a, b) in u.iter().zip(v) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_schmidt_random_basis() {
        let mut rng = SeededRng::new(3);
        let vs: Vec<Vec<C64>> = (0..4)
            .map(|_| (0..4).map(|_| rng.complex_gaussian()).collect())
            .collect();
        let out = gram_orthonormalize(&vs).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let g = inner(&out[i], &out[j]);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(expected)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let r = gram_orthonormalize(&[vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]);
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }
}
