//! Analytic information/disturbance tradeoff for the `λ = 0` probe family.
//!
//! With `S = sin 2α`, the probe states give `z = cos 2α cos 2φ` and
//! `I(z) = [(1+z) ln(1+z) + (1−z) ln(1−z)] / 2` independently of `θ`, while the
//! disturbance is minimised over `θ` at
//! `tan 2θ₀ = S cos 2φ / [1 − S²(1 − sin 2φ)]`, giving
//! `2D₀ = 1 − {S² cos² 2φ + [1 − S²(1 − sin 2φ)]²}^{1/2}`.
//!
//! Writing `u = 1 − sin 2φ = 2 sin²(π/4 − φ)`, the braces equal
//! `1 − S²(1 − S²) u²`, which lets `D₀` be evaluated without cancellation
//! near `φ = π/4`.

use std::f64::consts::{FRAC_PI_4, LN_2};

use crate::error::{invalid, Result};
use crate::infotheory::information_from_z;

/// One point of the tradeoff curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub phi: f64,
    pub theta0: f64,
    pub d0: f64,
    pub z: f64,
    pub information: f64,
    /// Set on the flat continuation beyond `D₁`, where extra disturbance buys
    /// no extra information.
    pub saturated: bool,
}

fn overlap(alpha: f64) -> f64 {
    (2.0 * alpha).sin()
}

/// Angle `θ₀ ∈ [0, π/2)` minimising the disturbance at fixed `φ`.
pub fn theta_min(alpha: f64, phi: f64) -> f64 {
    let s = overlap(alpha);
    let u = 2.0 * (FRAC_PI_4 - phi).sin().powi(2);
    let mut two_theta = (s * (2.0 * phi).cos()).atan2(1.0 - s * s * u);
    if two_theta < 0.0 {
        two_theta += std::f64::consts::PI;
    }
    0.5 * two_theta
}

/// Minimal disturbance `D₀(φ)`.
pub fn min_disturbance(alpha: f64, phi: f64) -> f64 {
    let s2 = overlap(alpha).powi(2);
    let u = 2.0 * (FRAC_PI_4 - phi).sin().powi(2);
    let gap = s2 * (1.0 - s2) * u * u;
    0.5 * gap / (1.0 + (1.0 - gap).sqrt())
}

/// `I_max = ln 2 + cos²α ln cos²α + sin²α ln sin²α`.
pub fn max_information(alpha: f64) -> f64 {
    let c2 = alpha.cos().powi(2);
    let s2 = alpha.sin().powi(2);
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    LN_2 + xlnx(c2) + xlnx(s2)
}

/// `D₁ = [1 − (1 − S² + S⁴)^{1/2}] / 2`, the least disturbance compatible with `I_max`.
pub fn d1(alpha: f64) -> f64 {
    min_disturbance(alpha, 0.0)
}

/// `z` as a function of the minimal disturbance:
/// `z = cos 2α [1 − (1 − √(D₀(1−D₀) / D₁(1−D₁)))²]^{1/2}`, capped at `cos 2α`.
pub fn frontier_z(alpha: f64, d0: f64) -> f64 {
    let c = (2.0 * alpha).cos();
    let top = d1(alpha);
    if top <= 0.0 {
        // α = 0: any probe reaches the cap without disturbance; α = π/4: c = 0.
        return c;
    }
    if d0 >= top {
        return c;
    }
    let d0 = d0.max(0.0);
    let ratio = (d0 * (1.0 - d0) / (top * (1.0 - top))).sqrt();
    c * (1.0 - (1.0 - ratio).powi(2)).max(0.0).sqrt()
}

/// Largest information obtainable at disturbance `d`, flat beyond `D₁`.
pub fn frontier_information(alpha: f64, d: f64) -> f64 {
    information_from_z(frontier_z(alpha, d))
}

pub fn frontier_point(alpha: f64, phi: f64) -> FrontierPoint {
    let z = (2.0 * alpha).cos() * (2.0 * phi).cos();
    FrontierPoint {
        phi,
        theta0: theta_min(alpha, phi),
        d0: min_disturbance(alpha, phi),
        z,
        information: information_from_z(z),
        saturated: false,
    }
}

/// `n_points` samples with `φ` running from `π/4` down to `0`, so that `D₀`
/// increases from `0` to `D₁`.
pub fn frontier_curve(alpha: f64, n_points: usize) -> Result<Vec<FrontierPoint>> {
    if n_points < 2 {
        return Err(invalid("a frontier needs at least two points"));
    }
    let last = (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|k| {
            let phi = if k + 1 == n_points {
                0.0
            } else {
                FRAC_PI_4 * (1.0 - k as f64 / last)
            };
            frontier_point(alpha, phi)
        })
        .collect())
}

/// End of the flat continuation: the `φ = θ = 0` probe keeps `I_max` but
/// disturbs by `S²/2`. `None` when that coincides with `D₁`.
pub fn saturation_point(alpha: f64) -> Option<FrontierPoint> {
    let s = overlap(alpha);
    let d = 0.5 * s * s;
    if d - d1(alpha) <= 1e-15 {
        return None;
    }
    let z = (2.0 * alpha).cos();
    Some(FrontierPoint {
        phi: 0.0,
        theta0: 0.0,
        d0: d,
        z,
        information: information_from_z(z),
        saturated: true,
    })
}

/// Exact and leading-order values near `D₀ → 0`, at `φ = π/4 − ε/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotics {
    pub epsilon: f64,
    pub information: f64,
    pub d0: f64,
    /// `(ε cos 2α)² / 2`.
    pub information_approx: f64,
    /// `(I tan 2α)² / 4` at the approximate `I`, i.e. `ε⁴ (S² − S⁴) / 16`.
    pub d0_approx: f64,
}

impl Asymptotics {
    pub fn information_rel_error(&self) -> f64 {
        rel_error(self.information, self.information_approx)
    }

    pub fn d0_rel_error(&self) -> f64 {
        rel_error(self.d0, self.d0_approx)
    }
}

fn rel_error(exact: f64, approx: f64) -> f64 {
    if exact == 0.0 && approx == 0.0 {
        0.0
    } else {
        (exact - approx).abs() / exact.abs().max(approx.abs())
    }
}

pub fn asymptotic_check(alpha: f64, epsilon: f64) -> Result<Asymptotics> {
    if !(epsilon > 0.0 && epsilon < 0.1) {
        return Err(invalid(format!("epsilon {epsilon} outside (0, 0.1)")));
    }
    let exact = frontier_point(alpha, FRAC_PI_4 - 0.5 * epsilon);
    let c = (2.0 * alpha).cos();
    let s2 = overlap(alpha).powi(2);
    let information_approx = 0.5 * (epsilon * c).powi(2);
    // (I tan2α)²/4 rewritten with tan2α·cos2α = S, finite at α = π/4.
    let d0_approx = epsilon.powi(4) * s2 * (1.0 - s2) / 16.0;
    Ok(Asymptotics {
        epsilon,
        information: exact.information,
        d0: exact.d0,
        information_approx,
        d0_approx,
    })
}
