//! Lindblad generator construction and deterministic propagation.
//!
//! The generator is d rho/dt = -i (omega/2) [sigma_z, rho]
//! + sum_k (G_k rho G_k^+ - 1/2 {G_k^+ G_k, rho}) with jump operators
//! G_1 = sqrt(k1) sigma_z (dephasing) and G_2 = sqrt(k2) sigma_x (spin flip).
//! Rates enter without rescaling, so the coherence of the dephasing channel
//! decays as e^{-2 k1 t}.

use crate::error::{Error, Result};
use crate::linalg::{C64, I, Mat2, Mat4, sigma_x, sigma_z};
use crate::qstate::{BlochVector, DensityMatrix, to_bloch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Dephasing,
    SpinFlip,
    Custom,
}

/// One decoherence channel: a named jump-operator family with a rate.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    kind: ChannelKind,
    rate: f64,
    custom_operator: Option<Mat2>,
}

impl ChannelSpec {
    pub fn dephasing(rate: f64) -> Result<Self> {
        Self::validated(ChannelKind::Dephasing, rate, None)
    }

    pub fn spin_flip(rate: f64) -> Result<Self> {
        Self::validated(ChannelKind::SpinFlip, rate, None)
    }

    /// Custom channel with jump operator sqrt(rate) * operator.
    pub fn custom(rate: f64, operator: Mat2) -> Result<Self> {
        Self::validated(ChannelKind::Custom, rate, Some(operator))
    }

    fn validated(kind: ChannelKind, rate: f64, op: Option<Mat2>) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::Config(format!("channel rate must be >= 0, got {rate}")));
        }
        Ok(ChannelSpec { kind, rate, custom_operator: op })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// The jump operator G_k including its sqrt(rate) prefactor.
    pub fn jump_operator(&self) -> Mat2 {
        let s = C64::new(self.rate.sqrt(), 0.0);
        match self.kind {
            ChannelKind::Dephasing => sigma_z().scale(s),
            ChannelKind::SpinFlip => sigma_x().scale(s),
            ChannelKind::Custom => self
                .custom_operator
                .as_ref()
                .expect("custom channel carries its operator")
                .scale(s),
        }
    }
}

/// Tunnelling frequency plus the list of decoherence channels.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    omega: f64,
    channels: Vec<ChannelSpec>,
}

impl ModelSpec {
    pub fn new(omega: f64, channels: Vec<ChannelSpec>) -> Result<Self> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::Config(format!("omega must be finite and >= 0, got {omega}")));
        }
        Ok(ModelSpec { omega, channels })
    }

    pub fn unitary(omega: f64) -> Result<Self> {
        Self::new(omega, Vec::new())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn channels(&self) -> &[ChannelSpec] {
        &self.channels
    }

    pub fn total_rate(&self) -> f64 {
        self.channels.iter().map(|c| c.rate).sum()
    }

    /// Default integrator step: at least 1000 samples per fastest timescale.
    pub fn default_step(&self) -> f64 {
        let fastest = self.omega.max(2.0 * self.total_rate()).max(1.0);
        2.0 * std::f64::consts::PI / (1000.0 * fastest)
    }
}

/// Which back end produced a time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Analytic,
    Rk4,
    Exact,
    Trajectories,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Rk4 => "rk4",
            Backend::Exact => "exact",
            Backend::Trajectories => "trajectories",
        }
    }
}

/// Sampled Bloch-vector evolution on an increasing time grid.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub states: Vec<BlochVector>,
    pub provenance: Backend,
}

/// 4x4 matrix form of the generator acting on the column-stacked state
/// vec(rho) = (rho00, rho10, rho01, rho11).
#[derive(Debug, Clone, Copy)]
pub struct Superoperator {
    pub matrix: Mat4,
}

impl Superoperator {
    /// Largest deviation of the trace row (row 0 + row 3) from zero.
    pub fn trace_defect(&self) -> f64 {
        (0..4)
            .map(|j| (self.matrix.0[0][j] + self.matrix.0[3][j]).norm())
            .fold(0.0f64, f64::max)
    }
}

fn rhs_matrix(m: &Mat2, model: &ModelSpec) -> Mat2 {
    let half_omega = C64::new(0.5 * model.omega, 0.0);
    let mut out = sigma_z().commutator(m).scale(-I * half_omega);
    for ch in model.channels() {
        if ch.rate == 0.0 {
            continue;
        }
        let g = ch.jump_operator();
        let gd = g.adjoint();
        let gdg = gd.mul(&g);
        let sandwich = g.mul(m).mul(&gd);
        let anti = gdg.anticommutator(m).scale(C64::new(0.5, 0.0));
        out = out.add(&sandwich.sub(&anti));
    }
    out
}

/// Right-hand side of the master equation, d rho/dt.
pub fn lindblad_rhs(rho: &DensityMatrix, model: &ModelSpec) -> Mat2 {
    rhs_matrix(rho.elements(), model)
}

/// Matrix form of the generator on column-stacked states.
pub fn build_liouvillian(model: &ModelSpec) -> Superoperator {
    let mut matrix = Mat4::zero();
    // apply the generator to each matrix unit E_ij
    for col in 0..4 {
        let (i, j) = [(0, 0), (1, 0), (0, 1), (1, 1)][col];
        let mut e = Mat2::zero();
        e.0[i][j] = crate::linalg::ONE;
        let image = rhs_matrix(&e, model).stack();
        for row in 0..4 {
            matrix.0[row][col] = image.0[row];
        }
    }
    Superoperator { matrix }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::Config("empty time grid".into()));
    }
    if t_grid[0] < 0.0 {
        return Err(Error::Config("time grid must start at t >= 0".into()));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Config(format!(
                "time grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn emit(m: &Mat2, t: f64) -> Result<BlochVector> {
    let rho = DensityMatrix::new(*m).map_err(|e| Error::Numerical {
        time: t,
        what: e.to_string(),
    })?;
    Ok(to_bloch(&rho))
}

fn rk4_step(m: &Mat2, model: &ModelSpec, h: f64) -> Mat2 {
    let hh = C64::new(h, 0.0);
    let half = C64::new(0.5 * h, 0.0);
    let k1 = rhs_matrix(m, model);
    let k2 = rhs_matrix(&m.add(&k1.scale(half)), model);
    let k3 = rhs_matrix(&m.add(&k2.scale(half)), model);
    let k4 = rhs_matrix(&m.add(&k3.scale(hh)), model);
    let incr = k1
        .add(&k2.scale(C64::new(2.0, 0.0)))
        .add(&k3.scale(C64::new(2.0, 0.0)))
        .add(&k4)
        .scale(C64::new(h / 6.0, 0.0));
    m.add(&incr)
}

/// Classical fixed-step 4th-order integration of the master equation,
/// sampled onto `t_grid` (one partial step lands exactly on each grid time).
pub fn evolve_rk4(
    rho0: &DensityMatrix,
    model: &ModelSpec,
    t_grid: &[f64],
    step: f64,
) -> Result<TimeSeries> {
    if !(step > 0.0) {
        return Err(Error::Config(format!("step must be > 0, got {step}")));
    }
    check_grid(t_grid)?;

    let mut states = Vec::with_capacity(t_grid.len());
    let mut m = *rho0.elements();
    let mut t = 0.0f64;
    let eps = step * 1e-9;
    for &target in t_grid {
        while t + step <= target + eps {
            m = rk4_step(&m, model, step);
            t += step;
        }
        let rem = target - t;
        if rem > eps {
            m = rk4_step(&m, model, rem);
            t = target;
        }
        states.push(emit(&m, target)?);
    }
    Ok(TimeSeries {
        times: t_grid.to_vec(),
        states,
        provenance: Backend::Rk4,
    })
}

/// Propagation by the exact matrix exponential of t * Liouvillian.
pub fn evolve_exact(
    rho0: &DensityMatrix,
    model: &ModelSpec,
    t_grid: &[f64],
) -> Result<TimeSeries> {
    check_grid(t_grid)?;
    let gen = build_liouvillian(model).matrix;
    let v0 = rho0.elements().stack();
    let mut states = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let v = if t == 0.0 {
            v0
        } else {
            gen.scale(C64::new(t, 0.0)).expm().apply(&v0)
        };
        states.push(emit(&v.unstack(), t)?);
    }
    Ok(TimeSeries {
        times: t_grid.to_vec(),
        states,
        provenance: Backend::Exact,
    })
}

/// Uniform grid of `n` samples covering [0, t_end].
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && t_end > 0.0);
    (0..n)
        .map(|i| t_end * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::qstate::{PureStateAngles, from_bloch, make_initial_state};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn plus_x() -> DensityMatrix {
        make_initial_state(PureStateAngles::new(PI / 2.0, 0.0).unwrap())
    }

    fn bloch_rhs(rho: &DensityMatrix, model: &ModelSpec) -> (f64, f64, f64) {
        let d = lindblad_rhs(rho, model);
        (2.0 * d.0[0][1].re, 2.0 * d.0[0][1].im, (d.0[0][0] - d.0[1][1]).re)
    }

    #[test]
    fn dephasing_pointer_state_is_stationary() {
        let model = ModelSpec::new(3.0, vec![ChannelSpec::dephasing(1.5).unwrap()]).unwrap();
        let rho = make_initial_state(PureStateAngles::new(0.0, 0.0).unwrap());
        assert!(lindblad_rhs(&rho, &model).max_abs() < 1e-14);
    }

    #[test]
    fn dephasing_rate_on_equator() {
        let model = ModelSpec::new(0.0, vec![ChannelSpec::dephasing(1.0).unwrap()]).unwrap();
        let (dx, dy, dz) = bloch_rhs(&plus_x(), &model);
        assert_abs_diff_eq!(dx, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dz, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn spinflip_rate_on_pole() {
        let model = ModelSpec::new(0.0, vec![ChannelSpec::spin_flip(1.0).unwrap()]).unwrap();
        let rho = from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let (dx, dy, dz) = bloch_rhs(&rho, &model);
        assert_abs_diff_eq!(dx, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dy, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dz, -2.0, epsilon = 1e-14);
    }

    #[test]
    fn rhs_is_hermitian_and_traceless() {
        let model = ModelSpec::new(
            7.0,
            vec![
                ChannelSpec::dephasing(0.4).unwrap(),
                ChannelSpec::spin_flip(0.9).unwrap(),
            ],
        )
        .unwrap();
        let rho = make_initial_state(PureStateAngles::new(1.1, 0.3).unwrap());
        let d = lindblad_rhs(&rho, &model);
        assert!(d.hermitian_defect() < 1e-14);
        assert!(d.trace().norm() < 1e-14);
    }

    #[test]
    fn liouvillian_zero_for_empty_model() {
        let gen = build_liouvillian(&ModelSpec::unitary(0.0).unwrap());
        assert!(gen.matrix.norm_1() == 0.0);
    }

    #[test]
    fn liouvillian_matches_rhs_on_random_inputs() {
        let mut seed = 42u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let model = ModelSpec::new(
                20.0 * next(),
                vec![
                    ChannelSpec::dephasing(3.0 * next()).unwrap(),
                    ChannelSpec::spin_flip(3.0 * next()).unwrap(),
                ],
            )
            .unwrap();
            let theta = PI * next();
            let phi = 2.0 * PI * next() * 0.999999;
            let rho = make_initial_state(PureStateAngles::new(theta, phi).unwrap());
            let direct = lindblad_rhs(&rho, &model);
            let via_matrix = build_liouvillian(&model)
                .matrix
                .apply(&rho.elements().stack())
                .unstack();
            assert!(direct.sub(&via_matrix).max_abs() < 1e-13);
        }
    }

    #[test]
    fn liouvillian_trace_row_vanishes() {
        let model = ModelSpec::new(
            10.0,
            vec![
                ChannelSpec::dephasing(1.0).unwrap(),
                ChannelSpec::spin_flip(0.5).unwrap(),
            ],
        )
        .unwrap();
        assert!(build_liouvillian(&model).trace_defect() < 1e-12);
    }

    #[test]
    fn dephasing_generator_eigenvalues() {
        // coherence units E01/E10 are eigenvectors with -2 k1 -+ i omega,
        // identity and sigma_z map to zero
        let (k1, omega) = (0.7, 5.0);
        let gen = build_liouvillian(
            &ModelSpec::new(omega, vec![ChannelSpec::dephasing(k1).unwrap()]).unwrap(),
        )
        .matrix;
        let mut e01 = Mat2::zero();
        e01.0[0][1] = ONE;
        let img = gen.apply(&e01.stack()).unstack();
        let expected = e01.scale(C64::new(-2.0 * k1, -omega));
        assert!(img.sub(&expected).max_abs() < 1e-13);

        let mut e10 = Mat2::zero();
        e10.0[1][0] = ONE;
        let img = gen.apply(&e10.stack()).unstack();
        let expected = e10.scale(C64::new(-2.0 * k1, omega));
        assert!(img.sub(&expected).max_abs() < 1e-13);

        assert!(gen.apply(&sigma_z().stack()).unstack().max_abs() < 1e-13);
        assert!(gen.apply(&crate::linalg::identity2().stack()).unstack().max_abs() < 1e-13);
    }

    #[test]
    fn rk4_unitary_periodicity() {
        let model = ModelSpec::unitary(10.0).unwrap();
        let period = 2.0 * PI / 10.0;
        let series = evolve_rk4(&plus_x(), &model, &[period], model.default_step()).unwrap();
        let b = series.states[0];
        assert!((b.sx - 1.0).abs() < 1e-8 && b.sy.abs() < 1e-8 && b.sz.abs() < 1e-8);
    }

    #[test]
    fn rk4_dephasing_frozen_value() {
        // oracle value e^{-0.2} cos(1), frozen from an independent
        // high-resolution integration of the Bloch equations of motion
        let model = ModelSpec::new(10.0, vec![ChannelSpec::dephasing(1.0).unwrap()]).unwrap();
        let series = evolve_rk4(&plus_x(), &model, &[0.1], 1e-5).unwrap();
        assert_abs_diff_eq!(series.states[0].sx, 0.4423621137731921, epsilon = 1e-10);
    }

    #[test]
    fn rk4_spinflip_frozen_left_probability() {
        let model = ModelSpec::new(10.0, vec![ChannelSpec::spin_flip(1.0).unwrap()]).unwrap();
        let series = evolve_rk4(&plus_x(), &model, &[0.1], 1e-5).unwrap();
        let p_left = 0.5 * (1.0 + series.states[0].sx);
        assert_abs_diff_eq!(p_left, 0.7844859454730498, epsilon = 1e-10);
    }

    #[test]
    fn exact_at_zero_is_identity() {
        let rho0 = make_initial_state(PureStateAngles::new(1.2, 0.7).unwrap());
        let model = ModelSpec::new(4.0, vec![ChannelSpec::dephasing(0.3).unwrap()]).unwrap();
        let series = evolve_exact(&rho0, &model, &[0.0]).unwrap();
        let b0 = to_bloch(&rho0);
        assert_eq!(series.states[0], b0);
    }

    #[test]
    fn exact_dephasing_purity_decay() {
        let k1 = 1.0;
        let model = ModelSpec::new(10.0, vec![ChannelSpec::dephasing(k1).unwrap()]).unwrap();
        let grid = uniform_grid(2.0, 21);
        let series = evolve_exact(&plus_x(), &model, &grid).unwrap();
        for (t, b) in grid.iter().zip(&series.states) {
            assert_abs_diff_eq!(b.norm_sq(), (-4.0 * k1 * t).exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn exact_spinflip_mixes_completely() {
        let model = ModelSpec::new(10.0, vec![ChannelSpec::spin_flip(1.0).unwrap()]).unwrap();
        let rho0 = make_initial_state(PureStateAngles::new(0.9, 2.5).unwrap());
        let series = evolve_exact(&rho0, &model, &[30.0]).unwrap();
        assert!(series.states[0].norm_sq().sqrt() < 1e-10);
    }

    #[test]
    fn exact_agrees_with_small_step_rk4() {
        let model = ModelSpec::new(
            10.0,
            vec![
                ChannelSpec::dephasing(0.5).unwrap(),
                ChannelSpec::spin_flip(0.25).unwrap(),
            ],
        )
        .unwrap();
        let rho0 = make_initial_state(PureStateAngles::new(1.0, 0.5).unwrap());
        let grid = uniform_grid(1.0, 11);
        let exact = evolve_exact(&rho0, &model, &grid).unwrap();
        let rk4 = evolve_rk4(&rho0, &model, &grid, 1e-4).unwrap();
        for (a, b) in exact.states.iter().zip(&rk4.states) {
            assert!(a.distance(b) < 1e-8);
        }
    }

    #[test]
    fn dephasing_conserves_sz() {
        let model = ModelSpec::new(6.0, vec![ChannelSpec::dephasing(0.8).unwrap()]).unwrap();
        let rho0 = make_initial_state(PureStateAngles::new(1.0, 0.0).unwrap());
        let sz0 = to_bloch(&rho0).sz;
        let series = evolve_exact(&rho0, &model, &uniform_grid(5.0, 26)).unwrap();
        for b in &series.states {
            assert!((b.sz - sz0).abs() <= 1e-10);
        }
    }

    #[test]
    fn spinflip_without_precession_conserves_sx() {
        let model = ModelSpec::new(0.0, vec![ChannelSpec::spin_flip(0.8).unwrap()]).unwrap();
        let rho0 = make_initial_state(PureStateAngles::new(1.0, 0.4).unwrap());
        let sx0 = to_bloch(&rho0).sx;
        let series = evolve_exact(&rho0, &model, &uniform_grid(5.0, 26)).unwrap();
        for b in &series.states {
            assert!((b.sx - sx0).abs() <= 1e-10);
        }
    }

    #[test]
    fn exact_is_a_semigroup() {
        let model = ModelSpec::new(
            8.0,
            vec![ChannelSpec::spin_flip(0.6).unwrap()],
        )
        .unwrap();
        let gen = build_liouvillian(&model).matrix;
        let (t1, t2) = (0.37, 0.91);
        let p1 = gen.scale(C64::new(t1, 0.0)).expm();
        let p2 = gen.scale(C64::new(t2, 0.0)).expm();
        let p12 = gen.scale(C64::new(t1 + t2, 0.0)).expm();
        let composed = p2.mul(&p1);
        let mut diff = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                diff = diff.max((p12.0[i][j] - composed.0[i][j]).norm());
            }
        }
        assert!(diff < 1e-10, "semigroup defect {diff}");
    }

    #[test]
    fn rk4_halving_step_reduces_error_16x() {
        let model = ModelSpec::new(10.0, vec![ChannelSpec::dephasing(1.0).unwrap()]).unwrap();
        let grid = uniform_grid(1.0, 11);
        let exact = evolve_exact(&plus_x(), &model, &grid).unwrap();
        let max_err = |step: f64| -> f64 {
            let s = evolve_rk4(&plus_x(), &model, &grid, step).unwrap();
            s.states
                .iter()
                .zip(&exact.states)
                .map(|(a, b)| a.distance(b))
                .fold(0.0f64, f64::max)
        };
        let e1 = max_err(0.01);
        let e2 = max_err(0.005);
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() <= 16.0 * 0.3, "ratio {ratio}");
    }

    #[test]
    fn grid_validation() {
        let model = ModelSpec::unitary(1.0).unwrap();
        assert!(evolve_exact(&plus_x(), &model, &[]).is_err());
        assert!(evolve_exact(&plus_x(), &model, &[0.0, 0.0]).is_err());
        assert!(evolve_exact(&plus_x(), &model, &[-1.0, 0.0]).is_err());
        assert!(evolve_rk4(&plus_x(), &model, &[1.0], 0.0).is_err());
    }
}
