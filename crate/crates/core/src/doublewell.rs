//! First-principles 1D eigensolver for the box-plus-barrier potential.
//!
//! Second-order central finite differences with Dirichlet walls at +-x_max,
//! lowest levels by bisection on the tridiagonal Sturm sequence followed by
//! inverse iteration. Supplies the tunnelling frequency
//! omega = (E_0a - E_0s)/hbar for the two-level reduction, together with a
//! validity diagnostic (doublet splitting over doublet gap).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierShape {
    Rectangular,
    Gaussian,
}

/// Symmetric double-well geometry: hard walls at +-x_max and a central
/// barrier of height v0.
#[derive(Debug, Clone, Copy)]
pub struct PotentialSpec {
    pub x_max: f64,
    pub v0: f64,
    pub barrier_half_width: f64,
    pub barrier_shape: BarrierShape,
    pub mass: f64,
    pub hbar: f64,
}

impl PotentialSpec {
    pub fn new(
        x_max: f64,
        v0: f64,
        barrier_half_width: f64,
        barrier_shape: BarrierShape,
    ) -> Result<Self> {
        let spec = PotentialSpec {
            x_max,
            v0,
            barrier_half_width,
            barrier_shape,
            mass: 1.0,
            hbar: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > 0.0) {
            return Err(Error::Config(format!("x_max must be > 0, got {}", self.x_max)));
        }
        if !(self.v0 >= 0.0) {
            return Err(Error::Config(format!("v0 must be >= 0, got {}", self.v0)));
        }
        if !(self.barrier_half_width > 0.0 && self.barrier_half_width < self.x_max) {
            return Err(Error::Config(format!(
                "barrier_half_width must lie in (0, x_max), got {}",
                self.barrier_half_width
            )));
        }
        if !(self.mass > 0.0 && self.hbar > 0.0) {
            return Err(Error::Config("mass and hbar must be > 0".into()));
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.barrier_shape {
            BarrierShape::Rectangular => {
                if x.abs() <= self.barrier_half_width {
                    self.v0
                } else {
                    0.0
                }
            }
            BarrierShape::Gaussian => {
                let w = self.barrier_half_width;
                self.v0 * (-x * x / (2.0 * w * w)).exp()
            }
        }
    }
}

/// Symmetric tridiagonal discretized Hamiltonian on the interior grid.
#[derive(Debug, Clone)]
pub struct TridiagonalHamiltonian {
    pub diagonal: Vec<f64>,
    pub off_diagonal: f64,
    pub grid: Vec<f64>,
    pub spacing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    pub fn label(&self) -> &'static str {
        match self {
            Parity::Symmetric => "s",
            Parity::Antisymmetric => "a",
        }
    }
}

/// Low-lying spectrum: energies ascending, parities, unit-normalized
/// wavefunction samples on the interior grid.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub energies: Vec<f64>,
    pub parities: Vec<Parity>,
    pub wavefunctions: Vec<Vec<f64>>,
    pub grid: Vec<f64>,
    pub spacing: f64,
}

/// First-doublet map: tunnelling frequency and two-level validity diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DoubletMap {
    pub omega: f64,
    pub splitting: f64,
    pub gap: f64,
    pub validity_ratio: f64,
    /// Set when validity_ratio > 0.05, i.e. the two-level reduction is suspect.
    pub suspect: bool,
}

pub fn build_hamiltonian(potential: &PotentialSpec, n_grid: usize) -> Result<TridiagonalHamiltonian> {
    potential.validate()?;
    if n_grid < 64 {
        return Err(Error::Config(format!("n_grid must be >= 64, got {n_grid}")));
    }
    let h = 2.0 * potential.x_max / (n_grid as f64 + 1.0);
    let kin = potential.hbar * potential.hbar / (potential.mass * h * h);
    let grid: Vec<f64> = (0..n_grid)
        .map(|i| -potential.x_max + (i as f64 + 1.0) * h)
        .collect();
    let diagonal = grid.iter().map(|&x| kin + potential.value(x)).collect();
    Ok(TridiagonalHamiltonian {
        diagonal,
        off_diagonal: -0.5 * kin,
        grid,
        spacing: h,
    })
}

/// Number of eigenvalues strictly below lambda (Sturm sequence sign count).
fn count_below(t: &TridiagonalHamiltonian, lambda: f64) -> usize {
    let off_sq = t.off_diagonal * t.off_diagonal;
    let mut count = 0usize;
    let mut d = f64::INFINITY;
    for &a in &t.diagonal {
        d = a - lambda - if d == 0.0 { off_sq / f64::MIN_POSITIVE } else { off_sq / d };
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigenvalue(t: &TridiagonalHamiltonian, index: usize) -> f64 {
    let bound = t
        .diagonal
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| {
            (lo.min(a), hi.max(a))
        });
    let radius = 2.0 * t.off_diagonal.abs();
    let mut lo = bound.0 - radius;
    let mut hi = bound.1 + radius;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(t, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve (T - lambda I) x = b for a tridiagonal T using banded LU with
/// partial pivoting (fill-in limited to the second superdiagonal).
fn shifted_solve(t: &TridiagonalHamiltonian, lambda: f64, b: &[f64]) -> Vec<f64> {
    let n = t.diagonal.len();
    let e = t.off_diagonal;
    let mut sub = vec![e; n.saturating_sub(1)];
    let mut diag: Vec<f64> = t.diagonal.iter().map(|&a| a - lambda).collect();
    let mut sup = vec![e; n.saturating_sub(1)];
    let mut sup2 = vec![0.0f64; n.saturating_sub(2).max(1)];
    let mut x = b.to_vec();

    for i in 0..n - 1 {
        if sub[i].abs() > diag[i].abs() {
            // pivot: swap row i and i+1
            std::mem::swap(&mut diag[i], &mut sub[i]);
            {
                let (a, b2) = (sup[i], diag[i + 1]);
                sup[i] = b2;
                diag[i + 1] = a;
            }
            if i + 2 < n {
                let keep = sup[i + 1];
                if i < sup2.len() {
                    sup2[i] = keep;
                }
                sup[i + 1] = 0.0;
            }
            x.swap(i, i + 1);
        }
        let pivot = if diag[i] == 0.0 { f64::MIN_POSITIVE } else { diag[i] };
        let m = sub[i] / pivot;
        diag[i + 1] -= m * sup[i];
        if i + 2 < n && i < sup2.len() {
            sup[i + 1] -= m * sup2[i];
        }
        x[i + 1] -= m * x[i];
    }

    // back substitution
    for i in (0..n).rev() {
        let mut v = x[i];
        if i + 1 < n {
            v -= sup[i] * x[i + 1];
        }
        if i + 2 < n && i < sup2.len() {
            v -= sup2[i] * x[i + 2];
        }
        let pivot = if diag[i] == 0.0 { f64::MIN_POSITIVE } else { diag[i] };
        x[i] = v / pivot;
    }
    x
}

fn residual(t: &TridiagonalHamiltonian, lambda: f64, v: &[f64]) -> f64 {
    let n = v.len();
    let e = t.off_diagonal;
    let mut r2 = 0.0f64;
    for i in 0..n {
        let mut y = (t.diagonal[i] - lambda) * v[i];
        if i > 0 {
            y += e * v[i - 1];
        }
        if i + 1 < n {
            y += e * v[i + 1];
        }
        r2 += y * y;
    }
    let norm2: f64 = v.iter().map(|a| a * a).sum();
    (r2 / norm2).sqrt()
}

/// Lowest `n_levels` eigenpairs with parity labels.
pub fn solve_spectrum(
    potential: &PotentialSpec,
    n_grid: usize,
    n_levels: usize,
) -> Result<SpectrumResult> {
    if n_levels == 0 || n_levels > 12 {
        return Err(Error::Config(format!("n_levels must be in 1..=12, got {n_levels}")));
    }
    let t = build_hamiltonian(potential, n_grid)?;
    let n = t.diagonal.len();
    let h = t.spacing;

    let mut energies = Vec::with_capacity(n_levels);
    let mut parities = Vec::with_capacity(n_levels);
    let mut wavefunctions = Vec::with_capacity(n_levels);

    for level in 0..n_levels {
        let lambda = bisect_eigenvalue(&t, level);
        // offset the shift slightly so the factorization stays finite; the
        // offset is far below any level spacing
        let shift = lambda + lambda.abs().max(1.0) * 1e-11;

        // inverse iteration from a deterministic start vector
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let s = (i as u64)
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407 + level as u64);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect();
        let mut converged = false;
        for _ in 0..8 {
            let mut w = shifted_solve(&t, shift, &v);
            let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            for a in &mut w {
                *a /= norm;
            }
            v = w;
            if residual(&t, lambda, &v) <= 1e-8 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical {
                time: 0.0,
                what: format!("inverse iteration did not converge for level {level}"),
            });
        }

        // unit L2 norm under the trapezoid rule (walls contribute zero)
        let norm = (h * v.iter().map(|a| a * a).sum::<f64>()).sqrt();
        for a in &mut v {
            *a /= norm;
        }

        // parity by the sign of the overlap with the mirrored wavefunction
        let overlap: f64 = h * (0..n).map(|i| v[i] * v[n - 1 - i]).sum::<f64>();
        let parity = if overlap > 0.5 {
            Parity::Symmetric
        } else if overlap < -0.5 {
            Parity::Antisymmetric
        } else {
            return Err(Error::Structure(format!(
                "parity of level {level} is ambiguous (overlap {overlap:.3})"
            )));
        };

        // fix the global sign: symmetric states positive at the center,
        // antisymmetric states positive on the right
        let pivot = if parity == Parity::Symmetric { n / 2 } else { 3 * n / 4 };
        if v[pivot] < 0.0 {
            for a in &mut v {
                *a = -*a;
            }
        }

        energies.push(lambda);
        parities.push(parity);
        wavefunctions.push(v);
    }

    for w in energies.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Numerical {
                time: 0.0,
                what: "energies not strictly increasing".into(),
            });
        }
    }

    Ok(SpectrumResult {
        energies,
        parities,
        wavefunctions,
        grid: t.grid,
        spacing: h,
    })
}

/// Tunnelling frequency omega = (E_0a - E_0s)/hbar and validity diagnostics
/// from the lowest doublet.
pub fn extract_doublet(spectrum: &SpectrumResult, hbar: f64) -> Result<DoubletMap> {
    if spectrum.energies.len() < 3 {
        return Err(Error::Structure("need at least 3 levels to extract a doublet".into()));
    }
    let expected = [Parity::Symmetric, Parity::Antisymmetric, Parity::Symmetric];
    for (i, p) in expected.iter().enumerate() {
        if spectrum.parities[i] != *p {
            return Err(Error::Structure(format!(
                "unexpected parity ordering at level {i}: got {}, want {}",
                spectrum.parities[i].label(),
                p.label()
            )));
        }
    }
    let splitting = spectrum.energies[1] - spectrum.energies[0];
    let gap = spectrum.energies[2] - spectrum.energies[0];
    let validity_ratio = splitting / gap;
    Ok(DoubletMap {
        omega: splitting / hbar,
        splitting,
        gap,
        validity_ratio,
        suspect: validity_ratio > 0.05,
    })
}

/// Position densities |psi_s +- psi_a|^2 / 2 of the localized combinations.
#[derive(Debug, Clone)]
pub struct LocalizedDensities {
    pub grid: Vec<f64>,
    pub spacing: f64,
    /// density of (|s> + |a>)/sqrt(2)
    pub plus: Vec<f64>,
    /// density of (|s> - |a>)/sqrt(2)
    pub minus: Vec<f64>,
}

impl LocalizedDensities {
    /// Fraction of the density's weight at x < 0.
    pub fn left_weight(&self, which_plus: bool) -> f64 {
        let d = if which_plus { &self.plus } else { &self.minus };
        let left: f64 = self
            .grid
            .iter()
            .zip(d)
            .filter(|(x, _)| **x < 0.0)
            .map(|(_, v)| v)
            .sum();
        let total: f64 = d.iter().sum();
        left / total
    }
}

pub fn localized_states(spectrum: &SpectrumResult) -> Result<LocalizedDensities> {
    if spectrum.wavefunctions.len() < 2 {
        return Err(Error::Structure("need the lowest doublet".into()));
    }
    let s = &spectrum.wavefunctions[0];
    let a = &spectrum.wavefunctions[1];
    let plus: Vec<f64> = s.iter().zip(a).map(|(x, y)| 0.5 * (x + y) * (x + y)).collect();
    let minus: Vec<f64> = s.iter().zip(a).map(|(x, y)| 0.5 * (x - y) * (x - y)).collect();
    Ok(LocalizedDensities {
        grid: spectrum.grid.clone(),
        spacing: spectrum.spacing,
        plus,
        minus,
    })
}
