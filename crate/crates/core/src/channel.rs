//! Propagation of a signal through the probe interaction.
//!
//! For an input `|ψ⟩ = Σ_m c_m |e_m⟩` the joint output is
//! `Σ_{nβ} Y_{nβ} |e_n, v_β⟩` with `Y_{nβ} = Σ_m c_m A_{mnβ}`. The receiver's
//! state is `(ρ_B)_{mn} = Σ_β Y_{mβ} Y_{nβ}`, the probe's state is
//! `(ρ_E)_{βγ} = Σ_n Y_{nβ} Y_{nγ}`, and the disturbance is
//! `D = 1 − Σ_β Z_β²` with `Z_β = Σ_n c_n Y_{nβ}`.

use crate::error::{invalid, Result};
use crate::matcore::{partial_trace, BipartiteIndex, Matrix, TraceOut};
use crate::model::{InteractionTensor, ProbeParams};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PropagationResult {
    /// `Y_{nβ}`, indexed `[n][β]`.
    pub y: [[f64; 4]; 2],
    pub rho_b: Matrix,
    pub rho_e: Matrix,
    pub z: [f64; 4],
    pub disturbance: f64,
}

fn check_normalized(signal: [f64; 2]) -> Result<()> {
    let n2 = signal[0] * signal[0] + signal[1] * signal[1];
    if (n2.sqrt() - 1.0).abs() > NORM_TOL {
        return Err(invalid(format!("signal norm {} is not 1", n2.sqrt())));
    }
    Ok(())
}

/// `Y_{nβ} = Σ_m c_m A_{mnβ}`.
#[inline]
pub fn amplitudes(signal: [f64; 2], a: &InteractionTensor) -> [[f64; 4]; 2] {
    let mut y = [[0.0; 4]; 2];
    for (n, row) in y.iter_mut().enumerate() {
        for (beta, v) in row.iter_mut().enumerate() {
            *v = signal[0] * a.get(0, n, beta) + signal[1] * a.get(1, n, beta);
        }
    }
    y
}

/// Probe state `(ρ_E)_{βγ} = Σ_n Y_{nβ} Y_{nγ}` as a dense real 4 × 4 array.
#[inline]
pub fn probe_state_real(y: &[[f64; 4]; 2]) -> [[f64; 4]; 4] {
    let mut r = [[0.0; 4]; 4];
    for b in 0..4 {
        for g in b..4 {
            let v = y[0][b] * y[0][g] + y[1][b] * y[1][g];
            r[b][g] = v;
            r[g][b] = v;
        }
    }
    r
}

/// `D = 1 − Σ_β Z_β²`, evaluated as `⟨ψ⊥|ρ_B|ψ⊥⟩ = Σ_β (Σ_n ψ⊥_n Y_{nβ})²`
/// with `ψ⊥ = (−c₁, c₀)`. The two agree whenever `Tr ρ_B = 1`, and the
/// second has no cancellation when `D` is small.
#[inline]
pub fn disturbance_from_amplitudes(signal: [f64; 2], y: &[[f64; 4]; 2]) -> f64 {
    y[0].iter()
        .zip(&y[1])
        .map(|(y0, y1)| (-signal[1] * y0 + signal[0] * y1).powi(2))
        .sum()
}

pub fn propagate(signal: [f64; 2], a: &InteractionTensor) -> Result<PropagationResult> {
    check_normalized(signal)?;
    let y = amplitudes(signal, a);
    let rho_b = Matrix::from_fn(2, 2, |m, n| {
        (0..4).map(|b| y[m][b] * y[n][b]).sum::<f64>().into()
    });
    let pe = probe_state_real(&y);
    let rho_e = Matrix::from_fn(4, 4, |b, g| pe[b][g].into());
    let mut z = [0.0; 4];
    for (beta, zb) in z.iter_mut().enumerate() {
        *zb = signal[0] * y[0][beta] + signal[1] * y[1][beta];
    }
    let disturbance = 1.0 - z.iter().map(|v| v * v).sum::<f64>();
    Ok(PropagationResult {
        y,
        rho_b,
        rho_e,
        z,
        disturbance,
    })
}

/// The joint output vector, indexed by `4n + β`.
pub fn joint_state(signal: [f64; 2], a: &InteractionTensor) -> [f64; 8] {
    let y = amplitudes(signal, a);
    let idx = BipartiteIndex::QUBIT_PROBE;
    let mut psi = [0.0; 8];
    for (n, row) in y.iter().enumerate() {
        for (beta, &v) in row.iter().enumerate() {
            psi[idx.flatten(n, beta)] = v;
        }
    }
    psi
}

/// Receiver's state obtained by tracing the probe out of `|ψ′⟩⟨ψ′|`.
pub fn traced_receiver_state(signal: [f64; 2], a: &InteractionTensor) -> Result<Matrix> {
    check_normalized(signal)?;
    let rho = Matrix::outer_real(&joint_state(signal, a));
    partial_trace(&rho, TraceOut::Probe)
}

/// `D = 1 − ⟨ψ|ρ_B|ψ⟩` with `ρ_B` from an explicit partial trace.
pub fn fidelity_disturbance(signal: [f64; 2], a: &InteractionTensor) -> Result<f64> {
    let rho_b = traced_receiver_state(signal, a)?;
    let psi = [signal[0].into(), signal[1].into()];
    Ok(1.0 - rho_b.quad_form(&psi).re)
}

/// Closed-form disturbance for arbitrary `(λ, μ, θ, φ)`.
pub fn disturbance_closed_form(alpha: f64, p: &ProbeParams) -> f64 {
    let s = (2.0 * alpha).sin();
    let cl2 = p.lambda.cos().powi(2);
    let sl2 = p.lambda.sin().powi(2);
    cl2 * p.theta.sin().powi(2) - 0.5 * s * cl2 * (2.0 * p.theta).sin() * (2.0 * p.phi).cos()
        + 0.5
            * s
            * s
            * (sl2 * (1.0 - (2.0 * p.mu).sin())
                + cl2 * (2.0 * p.theta).cos() * (1.0 - (2.0 * p.phi).sin()))
}

/// Disturbance restricted to `λ = 0`.
pub fn disturbance_lambda_zero(alpha: f64, theta: f64, phi: f64) -> f64 {
    let s = (2.0 * alpha).sin();
    theta.sin().powi(2) - 0.5 * s * (2.0 * theta).sin() * (2.0 * phi).cos()
        + 0.5 * s * s * (2.0 * theta).cos() * (1.0 - (2.0 * phi).sin())
}

/// State handed downstream when the probe is later found in `|v_β⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    pub outcome: usize,
    /// Unnormalised amplitudes `Σ_{mn} c_m A_{mnβ} |e_n⟩`.
    pub state: [f64; 2],
    /// Squared norm of `state`, the probability of this outcome.
    pub probability: f64,
}

impl ConditionalState {
    /// Normalised state, or `None` for a zero-probability outcome.
    pub fn normalized(&self) -> Option<[f64; 2]> {
        if self.probability <= 0.0 {
            return None;
        }
        let n = self.probability.sqrt();
        Some([self.state[0] / n, self.state[1] / n])
    }
}

pub fn conditional_states(
    signal: [f64; 2],
    a: &InteractionTensor,
) -> Result<Vec<ConditionalState>> {
    check_normalized(signal)?;
    let y = amplitudes(signal, a);
    Ok((0..4)
        .map(|beta| {
            let state = [y[0][beta], y[1][beta]];
            ConditionalState {
                outcome: beta,
                state,
                probability: state[0] * state[0] + state[1] * state[1],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::theta_min;
    use crate::matcore::SeededRng;
    use crate::model::{Signal, SignalPair};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn pair(alpha: f64) -> SignalPair {
        SignalPair::new(alpha).unwrap()
    }

    #[test]
    fn identity_interaction_has_no_disturbance() {
        let a = ProbeParams::identity().tensor();
        for alpha in [0.0, 0.3, PI / 5.0, FRAC_PI_4] {
            let c = pair(alpha).state(Signal::Zero);
            let r = propagate(c, &a).unwrap();
            assert!(r.disturbance.abs() < 1e-14);
            let proj = Matrix::outer_real(&c);
            assert!(r.rho_b.max_abs_diff(&proj) < 1e-14);
        }
    }

    #[test]
    fn copying_interaction_disturbance() {
        let alpha = PI / 5.0;
        let a = ProbeParams::default().tensor();
        let r = propagate(pair(alpha).state(Signal::Zero), &a).unwrap();
        assert!((r.disturbance - 0.452254).abs() < 1e-6);
        let s = pair(alpha).overlap();
        assert!((r.disturbance - s * s / 2.0).abs() < 1e-14);
    }

    #[test]
    fn probe_diagonal_at_optimal_theta() {
        let alpha = PI / 5.0;
        let theta = theta_min(alpha, 0.0);
        let a = ProbeParams::two_dimensional(theta, 0.0).tensor();
        let r = propagate(pair(alpha).state(Signal::Zero), &a).unwrap();
        let c2a = (2.0 * alpha).cos();
        assert!((r.rho_e[(1, 1)].re - (1.0 + c2a) / 2.0).abs() < 1e-12);
        assert!((r.rho_e[(2, 2)].re - (1.0 - c2a) / 2.0).abs() < 1e-12);
        assert!((r.rho_e[(1, 1)].re - 0.654508).abs() < 1e-6);
        assert!((r.rho_e[(2, 2)].re - 0.345492).abs() < 1e-6);
    }

    #[test]
    fn closed_form_examples() {
        assert!(disturbance_closed_form(0.4, &ProbeParams::identity()).abs() < 1e-15);
        let d = disturbance_closed_form(PI / 5.0, &ProbeParams::default());
        assert!((d - 0.452254).abs() < 1e-6);
        // S² = 1/2 at α = π/8.
        let alpha = FRAC_PI_8;
        let theta = theta_min(alpha, 0.0);
        let d = disturbance_closed_form(alpha, &ProbeParams::two_dimensional(theta, 0.0));
        assert!((d - (1.0 - 0.75f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((d - 0.0669873).abs() < 1e-7);
    }

    #[test]
    fn three_disturbance_routes_agree() {
        let mut rng = SeededRng::new(77);
        for _ in 0..500 {
            let alpha = rng.uniform_in(0.0, FRAC_PI_4);
            let p = ProbeParams::new(
                rng.uniform_in(-PI, PI),
                rng.uniform_in(-PI, PI),
                rng.uniform_in(-PI, PI),
                rng.uniform_in(-PI, PI),
            );
            let a = p.tensor();
            let closed = disturbance_closed_form(alpha, &p);
            for sig in Signal::BOTH {
                let c = pair(alpha).state(sig);
                let r = propagate(c, &a).unwrap();
                let f = fidelity_disturbance(c, &a).unwrap();
                assert!((r.disturbance - closed).abs() < 1e-12);
                assert!((r.disturbance - f).abs() < 1e-12);
                let traced = traced_receiver_state(c, &a).unwrap();
                assert!(traced.max_abs_diff(&r.rho_b) < 1e-12);
            }
            if p.lambda != 0.0 {
                let flipped = ProbeParams {
                    lambda: -p.lambda,
                    ..p
                };
                assert!((disturbance_closed_form(alpha, &flipped) - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_zero_form_matches_general_form() {
        for (alpha, theta, phi) in [(0.2, 0.3, 0.1), (0.7, -0.4, 0.9), (PI / 5.0, 1.1, 0.0)] {
            let general = disturbance_closed_form(alpha, &ProbeParams::two_dimensional(theta, phi));
            assert!((general - disturbance_lambda_zero(alpha, theta, phi)).abs() < 1e-14);
        }
    }

    #[test]
    fn probe_states_have_swapped_diagonal_at_lambda_zero() {
        let alpha = 0.5;
        let a = ProbeParams::two_dimensional(0.3, 0.2).tensor();
        let r0 = propagate(pair(alpha).state(Signal::Zero), &a).unwrap();
        let r1 = propagate(pair(alpha).state(Signal::One), &a).unwrap();
        // Restricted to the {01, 10} block: ((a, c), (c, b)) and ((b, c), (c, a)).
        assert!((r0.rho_e[(1, 1)] - r1.rho_e[(2, 2)]).norm() < 1e-12);
        assert!((r0.rho_e[(2, 2)] - r1.rho_e[(1, 1)]).norm() < 1e-12);
        assert!((r0.rho_e[(1, 2)] - r1.rho_e[(1, 2)]).norm() < 1e-12);
        for k in [0, 3] {
            for j in 0..4 {
                assert_eq!(r0.rho_e[(k, j)].norm(), 0.0);
            }
        }
    }

    #[test]
    fn unnormalized_signal_rejected() {
        let a = ProbeParams::identity().tensor();
        assert!(propagate([1.0, 1.0], &a).is_err());
    }

    #[test]
    fn conditional_states_identity() {
        let alpha = 0.3;
        let c = pair(alpha).state(Signal::Zero);
        let cs = conditional_states(c, &ProbeParams::identity().tensor()).unwrap();
        assert!(cs[0].probability.abs() < 1e-30 && cs[3].probability.abs() < 1e-30);
        for k in [1, 2] {
            assert!((cs[k].probability - 0.5).abs() < 1e-15);
            let n = cs[k].normalized().unwrap();
            assert!((n[0] - c[0]).abs() < 1e-15 && (n[1] - c[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn conditional_probability_formula() {
        let alpha = 0.4;
        let (theta, phi) = (0.3, 0.2);
        let c = pair(alpha).state(Signal::Zero);
        let a = ProbeParams::two_dimensional(theta, phi).tensor();
        let cs = conditional_states(c, &a).unwrap();
        let expected =
            alpha.cos().powi(2) * phi.cos().powi(2) + alpha.sin().powi(2) * phi.sin().powi(2);
        assert!((cs[1].probability - expected).abs() < 1e-14);
        let total: f64 = cs.iter().map(|s| s.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let r = propagate(c, &a).unwrap();
        let mut sum = Matrix::zeros(2, 2);
        for s in &cs {
            sum = &sum + &Matrix::outer_real(&s.state);
        }
        assert!(sum.max_abs_diff(&r.rho_b) < 1e-12);
    }

    #[test]
    fn conditional_state_at_phi_zero() {
        let alpha = 0.5;
        let theta = 0.35;
        let c = pair(alpha).state(Signal::Zero);
        let cs = conditional_states(c, &ProbeParams::two_dimensional(theta, 0.0).tensor()).unwrap();
        let n = cs[1].normalized().unwrap();
        assert!((n[0] - theta.cos()).abs() < 1e-14 && (n[1] - theta.sin()).abs() < 1e-14);
        assert!((cs[1].probability - alpha.cos().powi(2)).abs() < 1e-14);
    }
}
