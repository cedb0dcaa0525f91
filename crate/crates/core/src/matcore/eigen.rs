//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! A complex Hermitian `H = A + iB` is handled through its real embedding
//! `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
//! doubled. Functions of `H` are read back from the blocks of `f(embedding)`.

use super::matrix::{Matrix, C64};

const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric `n × n` row-major matrix.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns of a row-major `n × n` matrix.
pub fn symmetric_eigen(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // f64::signum(0.0) == 1.0, so theta == 0 gives a 45° rotation.
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + col] = v[row * n + src];
        }
    }
    (values, vectors)
}

fn embedding(h: &Matrix) -> (Vec<f64>, usize) {
    let n = h.rows();
    if h.is_real() {
        return (h.real_parts(), n);
    }
    let m = 2 * n;
    let mut e = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            e[i * m + j] = z.re;
            e[(i + n) * m + (j + n)] = z.re;
            e[(i + n) * m + j] = z.im;
            e[i * m + (j + n)] = -z.im;
        }
    }
    (e, m)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &Matrix) -> Vec<f64> {
    assert!(h.is_square(), "eigenvalues need a square matrix");
    let n = h.rows();
    let (e, m) = embedding(h);
    let (values, _) = symmetric_eigen(e, m);
    if m == n {
        return values;
    }
    values
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect()
}

/// `V f(Λ) V†` for a Hermitian matrix.
pub fn hermitian_map(h: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    assert!(h.is_square(), "matrix functions need a square matrix");
    let n = h.rows();
    let (e, m) = embedding(h);
    let (values, vectors) = symmetric_eigen(e, m);
    let mapped: Vec<f64> = values.iter().map(|&x| f(x)).collect();
    let entry = |i: usize, j: usize| -> f64 {
        (0..m)
            .map(|k| vectors[i * m + k] * mapped[k] * vectors[j * m + k])
            .sum()
    };
    if m == n {
        Matrix::from_fn(n, n, |i, j| C64::new(entry(i, j), 0.0))
    } else {
        Matrix::from_fn(n, n, |i, j| C64::new(entry(i, j), entry(i + n, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalises_real_symmetric() {
        let a = vec![4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let (vals, vecs) = symmetric_eigen(a.clone(), 3);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i * 3 + j] * vecs[j * 3 + k]).sum();
                assert!((av - vals[k] * vecs[i * 3 + k]).abs() < 1e-13);
            }
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
        let trace: f64 = vals.iter().sum();
        assert!((trace - 9.0).abs() < 1e-13);
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // Pauli-Y has eigenvalues ±1.
        let y = Matrix::from_complex(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let vals = hermitian_eigenvalues(&y);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let sq = hermitian_map(&y, |x| x * x);
        assert!(sq.max_abs_diff(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn degenerate_spectrum_map_is_exact() {
        let id = Matrix::identity(3).scale(4.0);
        let r = hermitian_map(&id, f64::sqrt);
        assert!(r.max_abs_diff(&Matrix::identity(3).scale(2.0)) < 1e-15);
    }
}
