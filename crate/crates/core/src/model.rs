//! Signal pair and probe interaction.
//!
//! The probe is a four-level system whose basis index `β` is written as a pair
//! of bits `rs` with `β = 2r + s`. The interaction coefficients `A_{mnrs}`
//! (input system state `m`, output system state `n`, probe state `rs`) are
//! stored flat at `K = 8m + 4n + 2r + s`.
//!
//! Under the 0↔1 label symmetry `A_{mnrs} = A_{m̄n̄r̄s̄}`, i.e. `X_{15−K} = X_K`,
//! so eight coefficients describe the whole tensor, and a suitable probe basis
//! makes `X_4 = X_7 = 0`. The remaining six are spanned by four angles.

use std::f64::consts::FRAC_PI_4;

use crate::error::{invalid, Error, Result};

const UNITARITY_TOL: f64 = 1e-9;

/// Flat index `K = 8m + 4n + 2r + s` of `A_{mnrs}`.
pub fn index_map(m: usize, n: usize, r: usize, s: usize) -> Result<usize> {
    if m > 1 || n > 1 || r > 1 || s > 1 {
        return Err(invalid(format!(
            "binary index out of range: ({m},{n},{r},{s})"
        )));
    }
    Ok(8 * m + 4 * n + 2 * r + s)
}

/// Which of the two signal states was sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    Zero,
    One,
}

impl Signal {
    pub const BOTH: [Signal; 2] = [Signal::Zero, Signal::One];

    pub fn index(self) -> usize {
        match self {
            Signal::Zero => 0,
            Signal::One => 1,
        }
    }
}

/// Two equiprobable real qubit states
/// `|0⟩ = cos α |e₀⟩ + sin α |e₁⟩` and `|1⟩ = sin α |e₀⟩ + cos α |e₁⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPair {
    alpha: f64,
}

impl SignalPair {
    /// `alpha` must lie in `[0, π/4]`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4 + 1e-15).contains(&alpha) {
            return Err(invalid(format!("alpha {alpha} outside [0, pi/4]")));
        }
        Ok(Self {
            alpha: alpha.min(FRAC_PI_4),
        })
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::new(deg.to_radians())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `S = ⟨0|1⟩ = sin 2α`.
    pub fn overlap(&self) -> f64 {
        (2.0 * self.alpha).sin()
    }

    pub fn state(&self, signal: Signal) -> [f64; 2] {
        let (s, c) = self.alpha.sin_cos();
        match signal {
            Signal::Zero => [c, s],
            Signal::One => [s, c],
        }
    }

    pub fn priors(&self) -> [f64; 2] {
        [0.5, 0.5]
    }
}

/// The four interaction angles `(λ, μ, θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProbeParams {
    pub lambda: f64,
    pub mu: f64,
    pub theta: f64,
    pub phi: f64,
}

impl ProbeParams {
    pub fn new(lambda: f64, mu: f64, theta: f64, phi: f64) -> Self {
        Self {
            lambda,
            mu,
            theta,
            phi,
        }
    }

    /// The `λ = 0` family, where the probe effectively has two dimensions.
    pub fn two_dimensional(theta: f64, phi: f64) -> Self {
        Self::new(0.0, 0.0, theta, phi)
    }

    /// The no-disturbance interaction (`φ = π/4`, `θ = λ = 0`).
    pub fn identity() -> Self {
        Self::two_dimensional(0.0, FRAC_PI_4)
    }

    pub fn coefficients(&self) -> CoefficientVector {
        build_coefficients(self)
    }

    pub fn tensor(&self) -> InteractionTensor {
        self.coefficients().expand_unchecked()
    }
}

/// Coefficients `X_0 … X_7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientVector(pub [f64; 8]);

/// Maps the four angles to the six free coefficients; `X_4 = X_7 = 0`.
pub fn build_coefficients(p: &ProbeParams) -> CoefficientVector {
    let (sl, cl) = p.lambda.sin_cos();
    let (sm, cm) = p.mu.sin_cos();
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    CoefficientVector([
        sl * cm,
        cl * ct * cp,
        cl * ct * sp,
        sl * sm,
        0.0,
        cl * st * cp,
        -cl * st * sp,
        0.0,
    ])
}

impl CoefficientVector {
    /// `Σ X_K² − 1`.
    pub fn norm_residual(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>() - 1.0
    }

    /// `Σ X_K X_{7−K}`: overlap of the two rows of the isometry.
    pub fn orthogonality_residual(&self) -> f64 {
        (0..8).map(|k| self.0[k] * self.0[7 - k]).sum()
    }

    fn expand_unchecked(&self) -> InteractionTensor {
        let mut a = [0.0; 16];
        for k in 0..8 {
            a[k] = self.0[k];
            a[15 - k] = self.0[k];
        }
        InteractionTensor(a)
    }
}

/// Expands `X` to the full tensor with `A_K = A_{15−K} = X_K`.
pub fn expand_tensor(x: &CoefficientVector) -> Result<InteractionTensor> {
    let nr = x.norm_residual();
    let or = x.orthogonality_residual();
    if nr.abs() > UNITARITY_TOL || or.abs() > UNITARITY_TOL {
        return Err(Error::InvalidCoefficients(format!(
            "norm residual {nr:e}, orthogonality residual {or:e}"
        )));
    }
    Ok(x.expand_unchecked())
}

/// The interaction coefficients `A_{mnβ}` of the system ⊗ probe isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionTensor(pub [f64; 16]);

impl InteractionTensor {
    /// `A_{mnβ}` with `β = 2r + s`.
    #[inline]
    pub fn get(&self, m: usize, n: usize, beta: usize) -> f64 {
        self.0[8 * m + 4 * n + beta]
    }

    /// Gram matrix of the two input rows, `G_{mm'} = Σ_{nβ} A_{mnβ} A_{m'nβ}`.
    pub fn row_gram(&self) -> [[f64; 2]; 2] {
        std::array::from_fn(|m| {
            std::array::from_fn(|mp| (0..8).map(|k| self.0[8 * m + k] * self.0[8 * mp + k]).sum())
        })
    }

    /// `max |G − I|` over the row Gram matrix.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.row_gram();
        let mut worst: f64 = 0.0;
        for (m, row) in g.iter().enumerate() {
            for (mp, &v) in row.iter().enumerate() {
                let target = if m == mp { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    /// Exact check of `A[K] == A[15 − K]`.
    pub fn is_label_symmetric(&self) -> bool {
        (0..8).all(|k| self.0[k] == self.0[15 - k])
    }
}
