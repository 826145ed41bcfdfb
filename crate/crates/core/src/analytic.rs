//! Closed-form solutions for the single-channel models.
//!
//! The deterministic integrator of the master equation is the ground truth;
//! the published closed forms contain two misprints (see TYPO_NOTES.md at the
//! repository root), and the corrected versions implemented here match the
//! integrator to better than 1e-9. The misprinted originals are kept as
//! `printed_*` functions so the discrepancy can be demonstrated.

use crate::error::Result;
use crate::linalg::C64;
use crate::qstate::{BlochVector, DensityMatrix, PureStateAngles, from_bloch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Underdamped,
    Critical,
    Overdamped,
}

/// The oscillation parameter epsilon with eps^2 = omega^2 - k2^2, carried as
/// |eps| plus the regime so the hyperbolic continuation is explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonValue {
    pub regime: Regime,
    pub value: f64,
}

pub fn epsilon(omega: f64, k2: f64) -> EpsilonValue {
    let d = omega * omega - k2 * k2;
    if d > 0.0 {
        EpsilonValue { regime: Regime::Underdamped, value: d.sqrt() }
    } else if d < 0.0 {
        EpsilonValue { regime: Regime::Overdamped, value: (-d).sqrt() }
    } else {
        EpsilonValue { regime: Regime::Critical, value: 0.0 }
    }
}

/// cos(eps t) continued across regimes (cosh below critical damping).
fn damped_cos(eps2: f64, t: f64) -> f64 {
    let e = eps2.abs().sqrt();
    if (e * t).abs() < 1e-4 {
        // series in eps^2 t^2, valid in every regime
        let x = eps2 * t * t;
        return 1.0 - x / 2.0 + x * x / 24.0;
    }
    if eps2 > 0.0 { (e * t).cos() } else { (e * t).cosh() }
}

/// sin(eps t)/eps continued across regimes (sinh/|eps|, limit t at eps = 0).
fn damped_sinc(eps2: f64, t: f64) -> f64 {
    let e = eps2.abs().sqrt();
    if (e * t).abs() < 1e-4 {
        let x = eps2 * t * t;
        return t * (1.0 - x / 6.0 + x * x / 120.0);
    }
    if eps2 > 0.0 { (e * t).sin() / e } else { (e * t).sinh() / e }
}

fn initial_bloch(angles: &PureStateAngles) -> (f64, f64, f64) {
    let (st, ct) = (angles.theta().sin(), angles.theta().cos());
    (st * angles.phi().cos(), -st * angles.phi().sin(), ct)
}

/// Dephasing-channel state: coherence decays as e^{-2 k1 t} while it
/// precesses at omega; populations are frozen.
pub fn dephasing_solution(
    angles: &PureStateAngles,
    k1: f64,
    omega: f64,
    t: f64,
) -> Result<DensityMatrix> {
    let (sx0, sy0, sz0) = initial_bloch(angles);
    let damp = (-2.0 * k1 * t).exp();
    let (s, c) = (omega * t).sin_cos();
    // (Sx + i Sy)(t) = e^{-2 k1 t} e^{-i omega t} (Sx0 + i Sy0)
    let sx = damp * (sx0 * c + sy0 * s);
    let sy = damp * (sy0 * c - sx0 * s);
    from_bloch(&BlochVector::new(sx, sy, sz0))
}

/// P_l for the dephasing channel from |+x>: (1 + e^{-2 k1 t} cos omega t)/2.
pub fn dephasing_left_prob(k1: f64, omega: f64, t: f64) -> f64 {
    0.5 * (1.0 + (-2.0 * k1 * t).exp() * (omega * t).cos())
}

/// Dephasing purity cos^2 theta + e^{-4 k1 t} sin^2 theta.
pub fn dephasing_purity(theta: f64, k1: f64, t: f64) -> f64 {
    let (st, ct) = (theta.sin(), theta.cos());
    ct * ct + (-4.0 * k1 * t).exp() * st * st
}

fn spinflip_bloch(angles: &PureStateAngles, k2: f64, omega: f64, t: f64) -> BlochVector {
    let (sx0, sy0, sz0) = initial_bloch(angles);
    let eps2 = omega * omega - k2 * k2;
    let c = damped_cos(eps2, t);
    let s = damped_sinc(eps2, t);
    let damp = (-k2 * t).exp();
    let sx = damp * (sx0 * c + (omega * sy0 + k2 * sx0) * s);
    let sy = damp * (sy0 * c - (omega * sx0 + k2 * sy0) * s);
    let sz = (-2.0 * k2 * t).exp() * sz0;
    BlochVector::new(sx, sy, sz)
}

/// Spin-flip-channel state; valid in all damping regimes via the hyperbolic
/// continuation of cos(eps t) and sin(eps t)/eps.
pub fn spinflip_solution(
    angles: &PureStateAngles,
    k2: f64,
    omega: f64,
    t: f64,
) -> Result<DensityMatrix> {
    from_bloch(&spinflip_bloch(angles, k2, omega, t))
}

/// P_l for the spin-flip channel from |+x>:
/// (1 + e^{-k2 t} (cos eps t + (k2/eps) sin eps t))/2.
pub fn spinflip_left_prob(k2: f64, omega: f64, t: f64) -> f64 {
    let eps2 = omega * omega - k2 * k2;
    0.5 * (1.0 + (-k2 * t).exp() * (damped_cos(eps2, t) + k2 * damped_sinc(eps2, t)))
}

/// Spin-flip purity |c(t)|^2 + e^{-4 k2 t} cos^2 theta.
pub fn spinflip_purity(angles: &PureStateAngles, k2: f64, omega: f64, t: f64) -> f64 {
    let b = spinflip_bloch(angles, k2, omega, t);
    b.norm_sq()
}

/// The coherence rho01(t) of the dephasing channel as printed in the source
/// formulas, with the doubled phase e^{-2(k1 + i omega) t}. Kept only for the
/// misprint adjudication; see TYPO_NOTES.md.
pub fn printed_dephasing_coherence(
    angles: &PureStateAngles,
    k1: f64,
    omega: f64,
    t: f64,
) -> C64 {
    let amp = 0.5 * angles.theta().sin();
    C64::from_polar(amp, -angles.phi()) * (C64::new(-2.0 * k1, -2.0 * omega) * t).exp()
}

/// The corrected coherence rho01(t) = e^{-i phi} sin(theta)/2 * e^{-(2 k1 + i omega) t}.
pub fn dephasing_coherence(angles: &PureStateAngles, k1: f64, omega: f64, t: f64) -> C64 {
    let amp = 0.5 * angles.theta().sin();
    C64::from_polar(amp, -angles.phi()) * (C64::new(-2.0 * k1, -omega) * t).exp()
}

/// Spin-flip P_l as printed, with (1 + e^{-k2 t}) multiplying the whole
/// oscillation, which fails to settle at 1/2. Kept only for the misprint
/// adjudication; see TYPO_NOTES.md.
pub fn printed_spinflip_left_prob(k2: f64, omega: f64, t: f64) -> f64 {
    let eps2 = omega * omega - k2 * k2;
    0.5 * (1.0 + (-k2 * t).exp()) * (damped_cos(eps2, t) + k2 * damped_sinc(eps2, t))
}
