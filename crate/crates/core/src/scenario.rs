//! Three-party informations under the maximal-information attack.
//!
//! At `φ = 0` the probe learns `I_max`, and the receiver is left with the
//! pair of states Eve would have produced by resending pure signals at a
//! larger angle `θ`, `tan 2θ = S / (1 − S²)`.

use std::f64::consts::FRAC_PI_4;

use crate::channel::disturbance_lambda_zero;
use crate::error::{invalid, Result};
use crate::frontier::max_information;
use crate::infotheory::{accessible_info_symmetric, SymmetricPair};
use crate::model::{ProbeParams, Signal, SignalPair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResendAngle {
    pub theta: f64,
    /// Set at `α = π/4`, where the angle is only defined as a limit.
    pub degenerate: bool,
}

/// `θ = ½ atan2(S, 1 − S²)` with `S = sin 2α`.
pub fn resend_angle(alpha: f64) -> Result<ResendAngle> {
    let pair = SignalPair::new(alpha)?;
    if pair.alpha() >= FRAC_PI_4 {
        return Ok(ResendAngle {
            theta: FRAC_PI_4,
            degenerate: true,
        });
    }
    let s = pair.overlap();
    Ok(ResendAngle {
        theta: 0.5 * s.atan2(1.0 - s * s),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioReport {
    pub alpha: f64,
    pub theta: f64,
    /// Sender to eavesdropper.
    pub i_ae: f64,
    /// Eavesdropper's resent states to receiver.
    pub i_eb: f64,
    /// Sender to receiver.
    pub i_ab: f64,
    pub disturbance: f64,
    pub z_ab: f64,
    pub degenerate: bool,
}

pub fn scenario_report(alpha: f64) -> Result<ScenarioReport> {
    let r = resend_angle(alpha)?;
    let mut report = scenario_report_with_theta(alpha, r.theta)?;
    report.degenerate = r.degenerate;
    Ok(report)
}

/// Same report with the probe angle `θ` chosen freely; `θ = 0` is the
/// orthogonal-resend variant.
pub fn scenario_report_with_theta(alpha: f64, theta: f64) -> Result<ScenarioReport> {
    if !theta.is_finite() {
        return Err(invalid("theta must be finite"));
    }
    let pair = SignalPair::new(alpha)?;
    let alpha = pair.alpha();
    let bob = bob_reduced_pair(alpha, theta, 0.0)?;
    let z_ab = bob.z();
    Ok(ScenarioReport {
        alpha,
        theta,
        i_ae: max_information(alpha),
        i_eb: max_information(theta),
        i_ab: accessible_info_symmetric(&bob),
        disturbance: disturbance_lambda_zero(alpha, theta, 0.0),
        z_ab,
        degenerate: false,
    })
}

/// Receiver's states `((a, c), (c, b))` and `((b, c), (c, a))` for the
/// `λ = 0` attack with angles `(θ, φ)`.
pub fn bob_reduced_pair(alpha: f64, theta: f64, phi: f64) -> Result<SymmetricPair> {
    let pair = SignalPair::new(alpha)?;
    let [c0, c1] = pair.state(Signal::Zero);
    let x = ProbeParams::two_dimensional(theta, phi).coefficients().0;
    let u1 = c0 * x[1] + c1 * x[6];
    let u2 = c0 * x[2] + c1 * x[5];
    let v1 = c0 * x[5] + c1 * x[2];
    let v2 = c0 * x[6] + c1 * x[1];
    let a = u1 * u1 + u2 * u2;
    let b = v1 * v1 + v2 * v2;
    let c = u1 * v1 + u2 * v2;
    SymmetricPair::new(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::propagate;
    use std::f64::consts::{FRAC_PI_8, LN_2, PI};

    #[test]
    fn resend_angle_examples() {
        let t = resend_angle(22.5f64.to_radians()).unwrap();
        assert!((t.theta.to_degrees() - 27.3678).abs() < 1e-4);
        let t = resend_angle(36f64.to_radians()).unwrap();
        assert!((t.theta.to_degrees() - 42.1332).abs() < 1e-4);
        assert_eq!(resend_angle(0.0).unwrap().theta, 0.0);
        let d = resend_angle(FRAC_PI_4).unwrap();
        assert!(d.degenerate && d.theta == FRAC_PI_4);
        assert!(resend_angle(1.0).is_err());
    }

    #[test]
    fn resend_angle_grows_with_alpha() {
        let mut prev = -1.0;
        for k in 0..200 {
            let alpha = FRAC_PI_4 * k as f64 / 200.0;
            let t = resend_angle(alpha).unwrap().theta;
            assert!(t >= alpha - 1e-15);
            if k > 0 {
                assert!(t > alpha);
            }
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn pi_over_five_report() {
        let r = scenario_report(PI / 5.0).unwrap();
        assert!((r.i_ae - 0.048536).abs() < 1e-6);
        assert!((r.i_eb - 0.0049987).abs() < 1e-7);
        assert!((r.z_ab - 0.0308718).abs() < 1e-7);
        assert!((r.i_ab - 0.0004766).abs() < 1e-7);
        let ratio = r.i_eb / r.i_ae;
        assert!((0.098..=0.108).contains(&ratio));
        assert!(!r.degenerate);
    }

    #[test]
    fn orthogonal_resend_variant() {
        let r = scenario_report_with_theta(PI / 5.0, 0.0).unwrap();
        assert!((r.disturbance - 0.452254).abs() < 1e-6);
        assert!((r.i_ab - r.i_ae).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_signals() {
        let r = scenario_report(0.0).unwrap();
        for i in [r.i_ae, r.i_eb, r.i_ab] {
            assert!((i - LN_2).abs() < 1e-12);
        }
        assert!(r.disturbance.abs() < 1e-15);
    }

    #[test]
    fn information_degrades_along_the_chain() {
        for k in 1..45 {
            let alpha = (k as f64).to_radians();
            let r = scenario_report(alpha).unwrap();
            assert!(r.i_ab < r.i_eb && r.i_eb < r.i_ae, "{k}: {r:?}");
            let expected = (2.0 * alpha).cos() * (2.0 * r.theta).cos();
            assert!((r.z_ab - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn bob_pair_is_independent_of_phi() {
        for (alpha, theta) in [
            (PI / 5.0, 42.1332f64.to_radians()),
            (0.3, 0.5),
            (FRAC_PI_8, 0.1),
        ] {
            let z: Vec<f64> = [0.0, FRAC_PI_8, FRAC_PI_4]
                .iter()
                .map(|&phi| bob_reduced_pair(alpha, theta, phi).unwrap().z())
                .collect();
            assert!((z[0] - z[1]).abs() < 1e-10 && (z[0] - z[2]).abs() < 1e-10);
            let expected = (2.0 * alpha).cos() * (2.0 * theta).cos();
            assert!((z[0] - expected.abs()).abs() < 1e-10);
        }
        let z = bob_reduced_pair(PI / 5.0, 42.1332f64.to_radians(), 0.0)
            .unwrap()
            .z();
        assert!((z - 0.0308718).abs() < 1e-6);
        let z = bob_reduced_pair(0.4, 0.0, 0.3).unwrap().z();
        assert!((z - 0.8_f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn bob_pair_matches_propagation() {
        for (alpha, theta, phi) in [(PI / 5.0, 0.7, 0.0), (0.2, 0.3, 0.6), (0.5, -0.4, 0.1)] {
            let sp = bob_reduced_pair(alpha, theta, phi).unwrap();
            let pair = SignalPair::new(alpha).unwrap();
            let a = ProbeParams::two_dimensional(theta, phi).tensor();
            let r0 = propagate(pair.state(Signal::Zero), &a).unwrap().rho_b;
            let r1 = propagate(pair.state(Signal::One), &a).unwrap().rho_b;
            let (s0, s1) = sp.states();
            assert!(r0.max_abs_diff(&s0) < 1e-12);
            assert!(r1.max_abs_diff(&s1) < 1e-12);
        }
    }
}
