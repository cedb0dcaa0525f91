//! Shannon entropy, POVMs and mutual information.
//!
//! Logarithms are natural throughout. A POVM outcome `μ` has likelihoods
//! `P_{μi} = Tr(E_μ ρ_i)`; Bayes's rule turns these into posteriors
//! `Q_{iμ} = P_{μi} p_i / q_μ` with `q_μ = Σ_j P_{μj} p_j`, and the mutual
//! information is the prior entropy minus the average posterior entropy.

use crate::error::{invalid, Error, Result};
use crate::matcore::{Matrix, C64};

/// Completeness residual accepted as-is.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Completeness residual up to which a POVM is renormalised instead of rejected.
pub const RENORMALIZE_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-10;
const DISTRIBUTION_TOL: f64 = 1e-9;
/// Outcomes rarer than this carry no information.
const NEGLIGIBLE_OUTCOME: f64 = 1e-15;

/// Natural-log Shannon entropy with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!(
            "negative or non-finite entry in {p:?}"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(entropy_unchecked(p))
}

fn entropy_unchecked(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// A POVM: positive operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<Matrix>,
    frame: Option<Vec<Vec<C64>>>,
    renormalized: bool,
}

impl Povm {
    /// Validates completeness and positivity.
    ///
    /// A completeness residual between [`COMPLETENESS_TOL`] and
    /// [`RENORMALIZE_TOL`] is corrected by `E_μ → S^{-1/2} E_μ S^{-1/2}` with
    /// `S = Σ E_μ`, and [`Povm::was_renormalized`] reports it.
    pub fn new(elements: Vec<Matrix>) -> Result<Self> {
        let dim = validate_elements(&elements)?;
        let sum = elements
            .iter()
            .fold(Matrix::zeros(dim, dim), |acc, e| &acc + e);
        let residual = sum.max_abs_diff(&Matrix::identity(dim));
        if residual <= COMPLETENESS_TOL {
            return Ok(Self {
                elements,
                frame: None,
                renormalized: false,
            });
        }
        if residual > RENORMALIZE_TOL {
            return Err(invalid(format!(
                "POVM elements sum to identity only within {residual:e}"
            )));
        }
        let inv_sqrt = sum.hermitian_map(|x| 1.0 / x.sqrt());
        let elements = elements
            .iter()
            .map(|e| &(&inv_sqrt * e) * &inv_sqrt)
            .collect();
        Ok(Self {
            elements,
            frame: None,
            renormalized: true,
        })
    }

    /// Rank-one POVM `E_μ = |w_μ⟩⟨w_μ|`.
    pub fn from_frame(frame: Vec<Vec<C64>>) -> Result<Self> {
        let elements = frame.iter().map(|w| Matrix::outer(w)).collect();
        let mut povm = Self::new(elements)?;
        if !povm.renormalized {
            povm.frame = Some(frame);
        }
        Ok(povm)
    }

    /// Projective measurement onto the columns of a unitary (or orthogonal) matrix.
    pub fn from_basis(basis: &Matrix) -> Result<Self> {
        Self::from_frame((0..basis.cols()).map(|j| basis.column(j)).collect())
    }

    /// The two-outcome trivial measurement `{I/2, I/2}`.
    pub fn uninformative(dim: usize) -> Self {
        let half = Matrix::identity(dim).scale(0.5);
        Self {
            elements: vec![half.clone(), half],
            frame: None,
            renormalized: false,
        }
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn frame(&self) -> Option<&[Vec<C64>]> {
        self.frame.as_deref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// Adds a zero element; the statistics of the other outcomes are unchanged.
    pub fn with_null_outcome(mut self) -> Self {
        let d = self.dim();
        self.elements.push(Matrix::zeros(d, d));
        if let Some(f) = self.frame.as_mut() {
            f.push(vec![C64::new(0.0, 0.0); d]);
        }
        self
    }
}

fn validate_elements(elements: &[Matrix]) -> Result<usize> {
    let Some(first) = elements.first() else {
        return Err(invalid("POVM with no elements"));
    };
    let dim = first.rows();
    for (k, e) in elements.iter().enumerate() {
        if e.rows() != dim || e.cols() != dim {
            return Err(invalid(format!("POVM element {k} has the wrong shape")));
        }
        if !e.is_hermitian(PSD_TOL) {
            return Err(invalid(format!("POVM element {k} is not Hermitian")));
        }
        if e.min_eigenvalue() < -PSD_TOL {
            return Err(invalid(format!("POVM element {k} is not positive")));
        }
    }
    Ok(dim)
}

/// States with prior probabilities.
#[derive(Debug, Clone)]
pub struct Ensemble {
    states: Vec<Matrix>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<Matrix>, priors: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != priors.len() {
            return Err(invalid("need one prior per state and at least one state"));
        }
        let dim = states[0].rows();
        if states.iter().any(|s| s.rows() != dim || s.cols() != dim) {
            return Err(invalid(
                "ensemble states must be square and of equal dimension",
            ));
        }
        if priors.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidDistribution("negative prior".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("priors sum to {total}")));
        }
        Ok(Self { states, priors })
    }

    pub fn equiprobable(states: Vec<Matrix>) -> Result<Self> {
        let n = states.len();
        Self::new(states, vec![1.0 / n as f64; n])
    }

    pub fn states(&self) -> &[Matrix] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn dim(&self) -> usize {
        self.states[0].rows()
    }

    /// True when every state has exactly real entries.
    pub fn is_real(&self) -> bool {
        self.states.iter().all(Matrix::is_real)
    }
}

/// `P[μ][i] = Tr(E_μ ρ_i)`.
pub fn povm_outcome_probabilities(e: &Ensemble, m: &Povm) -> Result<Vec<Vec<f64>>> {
    if e.dim() != m.dim() {
        return Err(invalid(format!(
            "ensemble dimension {} but POVM dimension {}",
            e.dim(),
            m.dim()
        )));
    }
    Ok(m.elements()
        .iter()
        .map(|el| e.states().iter().map(|rho| (el * rho).trace().re).collect())
        .collect())
}

/// Mutual information from a likelihood table `P[μ][i]` and priors `p_i`.
pub fn mutual_information_from_table(table: &[Vec<f64>], priors: &[f64]) -> f64 {
    let prior_entropy = entropy_unchecked(priors);
    let mut posterior_entropy = 0.0;
    let mut posterior = vec![0.0; priors.len()];
    for row in table {
        let q: f64 = row
            .iter()
            .zip(priors)
            .map(|(&p, &pi)| p.max(0.0) * pi)
            .sum();
        if q < NEGLIGIBLE_OUTCOME {
            continue;
        }
        for (i, (&p, &pi)) in row.iter().zip(priors).enumerate() {
            posterior[i] = p.max(0.0) * pi / q;
        }
        posterior_entropy += q * entropy_unchecked(&posterior);
    }
    (prior_entropy - posterior_entropy).clamp(0.0, prior_entropy)
}

pub fn mutual_information(e: &Ensemble, m: &Povm) -> Result<f64> {
    let table = povm_outcome_probabilities(e, m)?;
    Ok(mutual_information_from_table(&table, e.priors()))
}

/// `[(1+z) ln(1+z) + (1−z) ln(1−z)] / 2`, the information of a binary
/// symmetric channel with crossover `(1−z)/2`.
pub fn information_from_z(z: f64) -> f64 {
    let z = z.abs().min(1.0);
    let plus = (1.0 + z) * z.ln_1p();
    let minus = if z < 1.0 {
        (1.0 - z) * (-z).ln_1p()
    } else {
        0.0
    };
    0.5 * (plus + minus)
}

/// Qubit state pair `((a, c), (c, b))` and `((b, c), (c, a))` with `a + b = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricPair {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SymmetricPair {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if (a + b - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPair(format!("a + b = {}", a + b)));
        }
        if a * b - c * c < -1e-12 {
            return Err(Error::InvalidPair(format!(
                "determinant {} < 0",
                a * b - c * c
            )));
        }
        if 1.0 - 4.0 * a * b < -1e-12 {
            return Err(Error::InvalidPair(format!(
                "1 - 4ab = {}",
                1.0 - 4.0 * a * b
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.b - self.c * self.c
    }

    /// `z = (1 − 4ab)^{1/2}`.
    pub fn z(&self) -> f64 {
        (1.0 - 4.0 * self.a * self.b).max(0.0).sqrt()
    }

    pub fn states(&self) -> (Matrix, Matrix) {
        let first = Matrix::from_real(2, 2, &[self.a, self.c, self.c, self.b]).expect("2x2");
        let second = Matrix::from_real(2, 2, &[self.b, self.c, self.c, self.a]).expect("2x2");
        (first, second)
    }

    pub fn ensemble(&self) -> Ensemble {
        let (r0, r1) = self.states();
        Ensemble::equiprobable(vec![r0, r1]).expect("valid priors")
    }
}

/// Accessible information of an equiprobable symmetric pair.
pub fn accessible_info_symmetric(sp: &SymmetricPair) -> f64 {
    information_from_z(sp.z())
}
