//! Two-level state representations for the reduced double-well system.
//!
//! Basis convention: index 0 is the symmetric doublet state |s>, index 1 the
//! antisymmetric state |a>, i.e. the sigma_z eigenbasis with
//! sigma_z = |s><s| - |a><a|. The localized states are |+-x> = (|s> +- |a>)/sqrt(2).
//!
//! Well labeling: **|+x> is the left well**, so the left-probability of the
//! equatorial initial state (theta = pi/2, phi = 0) is exactly 1 at t = 0.
//! All rates and frequencies share inverse-time units with hbar = 1.

use crate::error::{Error, Result};
use crate::linalg::{C64, Mat2, ZERO};

const TRACE_TOL: f64 = 1e-12;
const HERM_TOL: f64 = 1e-14;
const POS_TOL: f64 = 1e-10;

/// 2x2 Hermitian, unit-trace, positive matrix: the system state.
///
/// Construction validates the invariants; operations never renormalize an
/// invalid state, they reject it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    elements: Mat2,
}

impl DensityMatrix {
    pub fn new(elements: Mat2) -> Result<Self> {
        let herm = elements.hermitian_defect();
        if herm > HERM_TOL {
            return Err(Error::InvalidState(format!(
                "Hermitian defect {herm:.3e} exceeds {HERM_TOL:.0e}"
            )));
        }
        let trace = elements.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {trace} deviates from 1 beyond {TRACE_TOL:.0e}"
            )));
        }
        // symmetrize within the checked tolerance so the stored matrix is
        // exactly Hermitian
        let sym = elements.add(&elements.adjoint()).scale(C64::new(0.5, 0.0));
        let eigs = sym.hermitian_eigenvalues();
        if eigs[0] < -POS_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(DensityMatrix { elements: sym })
    }

    pub fn elements(&self) -> &Mat2 {
        &self.elements
    }

    /// The maximally mixed state I/2.
    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            elements: Mat2([
                [C64::new(0.5, 0.0), ZERO],
                [ZERO, C64::new(0.5, 0.0)],
            ]),
        }
    }
}

/// Bloch parametrization (Sx, Sy, Sz) of a qubit state,
/// rho = (I + Sx sigma_x' ...)/2 with rho01 = (Sx + i Sy)/2, Sz = rho00 - rho11.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        BlochVector { sx, sy, sz }
    }

    pub fn norm_sq(&self) -> f64 {
        self.sx * self.sx + self.sy * self.sy + self.sz * self.sz
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let dx = self.sx - other.sx;
        let dy = self.sy - other.sy;
        let dz = self.sz - other.sz;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Spherical angles of a pure state, theta in [0, pi], phi in [0, 2 pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateAngles {
    theta: f64,
    phi: f64,
}

impl PureStateAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::AngleOutOfRange(format!("theta = {theta}")));
        }
        if !phi.is_finite() || !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::AngleOutOfRange(format!("phi = {phi}")));
        }
        Ok(PureStateAngles { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Pure initial state with the spin along (theta, phi):
/// rho = 1/2 [[1+cos t, e^{-i phi} sin t], [e^{i phi} sin t, 1-cos t]].
pub fn make_initial_state(angles: PureStateAngles) -> DensityMatrix {
    let (st, ct) = (angles.theta.sin(), angles.theta.cos());
    let phase = C64::from_polar(1.0, -angles.phi);
    let off = phase * C64::new(0.5 * st, 0.0);
    let m = Mat2([
        [C64::new(0.5 * (1.0 + ct), 0.0), off],
        [off.conj(), C64::new(0.5 * (1.0 - ct), 0.0)],
    ]);
    DensityMatrix::new(m).expect("pure state construction is always valid")
}

pub fn to_bloch(rho: &DensityMatrix) -> BlochVector {
    let m = rho.elements();
    BlochVector {
        sx: 2.0 * m.0[0][1].re,
        sy: 2.0 * m.0[0][1].im,
        sz: m.0[0][0].re - m.0[1][1].re,
    }
}

pub fn from_bloch(s: &BlochVector) -> Result<DensityMatrix> {
    let n2 = s.norm_sq();
    if n2 > 1.0 + 1e-10 {
        return Err(Error::UnphysicalBloch(n2.sqrt()));
    }
    let m = Mat2([
        [
            C64::new(0.5 * (1.0 + s.sz), 0.0),
            C64::new(0.5 * s.sx, 0.5 * s.sy),
        ],
        [
            C64::new(0.5 * s.sx, -0.5 * s.sy),
            C64::new(0.5 * (1.0 - s.sz), 0.0),
        ],
    ]);
    DensityMatrix::new(m)
}

/// Purity zeta = 2 tr rho^2 - 1, the squared Bloch norm; 1 for pure states,
/// 0 for the maximally mixed state.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.elements();
    let tr_sq = m.mul(m).trace().re;
    2.0 * tr_sq - 1.0
}

/// Probability to find the particle in the left well, P_l = (1 + Sx)/2.
pub fn left_probability(rho: &DensityMatrix) -> f64 {
    0.5 * (1.0 + to_bloch(rho).sx)
}
