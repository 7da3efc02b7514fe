//! Linear quantum Langevin models in drift/diffusion form and their
//! steady-state covariance matrices.
//!
//! A model `du/dt = A u + noise` with symmetrized white-noise strength `D`
//! (`<{n_i(t), n_j(t')}>/2 = D_ij delta(t - t')`) has the stationary
//! covariance `V` solving `A V + V A^T + D = 0`. Cavity quadratures are
//! `X = (a + a^dag)/sqrt 2`, `P = i (a^dag - a)/sqrt 2`.

use nalgebra::{DMatrix, Matrix4};

use crate::error::{Error, Result};
use crate::gaussian::{Cov1D, Cov2D};
use crate::linalg;
use crate::params::{bright_dark, planck, SystemParams1D, SystemParams2D, SystemParamsRWA};
use crate::warning::{Warning, MUCH_SMALLER};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub const QUADRATURE_CONVENTION: &str =
    "X_c = (a + a^dag)/sqrt2, P_c = i(a^dag - a)/sqrt2; D is the symmetrized white-noise strength";

/// Mechanical noise model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    /// Only cavity vacuum noise; mechanical damping stays in the drift.
    VacuumOnly,
    /// Brownian noise replaced by its symmetrized value at the mode frequency.
    MarkovianThermal,
}

/// Drift and diffusion matrices of a linear stochastic system.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub drift: DMatrix<f64>,
    pub diffusion: DMatrix<f64>,
    pub labels: Vec<String>,
    pub convention_note: String,
    pub hbar: f64,
    pub warnings: Vec<Warning>,
}

impl LinearSystem {
    pub fn new(
        drift: DMatrix<f64>,
        diffusion: DMatrix<f64>,
        labels: Vec<String>,
        convention_note: impl Into<String>,
        hbar: f64,
    ) -> Result<Self> {
        let n = drift.nrows();
        if drift.ncols() != n || diffusion.nrows() != n || diffusion.ncols() != n {
            return Err(Error::InvalidParams("drift and diffusion must be square and of equal size".into()));
        }
        if n % 2 != 0 || labels.len() != n {
            return Err(Error::InvalidParams(format!(
                "need an even dimension with one label per variable, got n = {n}, {} labels",
                labels.len()
            )));
        }
        let scale = diffusion.amax();
        if (&diffusion - diffusion.transpose()).amax() > 1e-14 * scale {
            return Err(Error::InvalidParams("diffusion matrix is not symmetric".into()));
        }
        let min_eig = diffusion.clone().symmetric_eigenvalues().min();
        if min_eig < -1e-12 * scale {
            return Err(Error::InvalidParams(format!(
                "diffusion matrix is not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(LinearSystem {
            drift,
            diffusion,
            labels,
            convention_note: convention_note.into(),
            hbar,
            warnings: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Bright mode and cavity: variables `(x_b, p_b, X_c, P_c)`.
pub fn build_1d(p: &SystemParams1D, noise: NoiseMode) -> Result<LinearSystem> {
    p.validate()?;
    let (m, hbar) = (p.mass, p.hbar);
    let mut a = DMatrix::zeros(4, 4);
    a[(0, 1)] = 1.0 / m;
    a[(1, 0)] = -m * p.omega_b * p.omega_b;
    a[(1, 1)] = -p.gamma_b;
    a[(1, 2)] = -SQRT_2 * hbar * p.lambda_o;
    a[(2, 2)] = -0.5 * p.kappa;
    a[(2, 3)] = p.delta;
    a[(3, 2)] = -p.delta;
    a[(3, 3)] = -0.5 * p.kappa;
    a[(3, 0)] = -SQRT_2 * p.lambda_o;

    let mut d = DMatrix::zeros(4, 4);
    d[(2, 2)] = 0.5 * p.kappa;
    d[(3, 3)] = 0.5 * p.kappa;
    if noise == NoiseMode::MarkovianThermal {
        let n_th = planck(p.omega_b, p.thermal_energy, hbar)?;
        d[(1, 1)] = 2.0 * m * p.gamma_b * hbar * p.omega_b * (n_th + 0.5);
    }
    LinearSystem::new(a, d, labels(&["x_b", "p_b", "X_c", "P_c"]), QUADRATURE_CONVENTION, hbar)
}

/// Bright mode, dark mode and cavity: variables
/// `(x_b, p_b, x_d, p_d, X_c, P_c)`.
pub fn build_2d(p: &SystemParams2D, noise: NoiseMode) -> Result<LinearSystem> {
    p.validate()?;
    let bd = bright_dark(p);
    if noise == NoiseMode::MarkovianThermal && p.gamma_x != p.gamma_y && bd.eta_m != 0.0 {
        return Err(Error::CorrelatedBathUnsupported);
    }
    let (m, hbar) = (p.mass, p.hbar);
    let cross = m * bd.omega_bar_m * bd.delta_m;
    let mut a = DMatrix::zeros(6, 6);
    a[(0, 1)] = 1.0 / m;
    a[(1, 0)] = -m * bd.omega_b * bd.omega_b;
    a[(1, 1)] = -bd.gamma_b;
    a[(1, 2)] = -cross;
    a[(1, 3)] = -bd.eta_m;
    a[(1, 4)] = -SQRT_2 * hbar * p.lambda_o;
    a[(2, 3)] = 1.0 / m;
    a[(3, 0)] = -cross;
    a[(3, 1)] = -bd.eta_m;
    a[(3, 2)] = -m * bd.omega_d * bd.omega_d;
    a[(3, 3)] = -bd.gamma_d;
    a[(4, 4)] = -0.5 * p.kappa;
    a[(4, 5)] = p.delta;
    a[(5, 4)] = -p.delta;
    a[(5, 5)] = -0.5 * p.kappa;
    a[(5, 0)] = -SQRT_2 * p.lambda_o;

    let mut d = DMatrix::zeros(6, 6);
    d[(4, 4)] = 0.5 * p.kappa;
    d[(5, 5)] = 0.5 * p.kappa;
    if noise == NoiseMode::MarkovianThermal {
        let nb = planck(bd.omega_b, p.thermal_energy, hbar)?;
        let nd = planck(bd.omega_d, p.thermal_energy, hbar)?;
        d[(1, 1)] = 2.0 * m * bd.gamma_b * hbar * bd.omega_b * (nb + 0.5);
        d[(3, 3)] = 2.0 * m * bd.gamma_d * hbar * bd.omega_d * (nd + 0.5);
    }
    LinearSystem::new(
        a,
        d,
        labels(&["x_b", "p_b", "x_d", "p_d", "X_c", "P_c"]),
        QUADRATURE_CONVENTION,
        hbar,
    )
}

/// Write the real 2x2 block of `z -> c z` for `z = (X + iP)/sqrt 2`.
fn complex_block(a: &mut DMatrix<f64>, row: usize, col: usize, re: f64, im: f64) {
    a[(2 * row, 2 * col)] += re;
    a[(2 * row, 2 * col + 1)] -= im;
    a[(2 * row + 1, 2 * col)] += im;
    a[(2 * row + 1, 2 * col + 1)] += re;
}

/// Rotating-wave three-mode model over the quadratures of `(a, b_0, d_0)`,
/// written in the frame rotating at the drive detuning `Delta`. Mechanical
/// quadratures are in zero-point units, so the covariance uses `hbar = 1`.
pub fn build_rwa(p: &SystemParamsRWA) -> Result<LinearSystem> {
    p.validate()?;
    let mut a = DMatrix::zeros(6, 6);
    // cavity
    complex_block(&mut a, 0, 0, -0.5 * p.kappa, 0.0);
    complex_block(&mut a, 0, 1, 0.0, -p.g_o);
    // bright
    complex_block(&mut a, 1, 1, -0.5 * p.gamma_b, -(p.omega_b - p.delta));
    complex_block(&mut a, 1, 0, 0.0, -p.g_o);
    complex_block(&mut a, 1, 2, 0.0, -p.g_m);
    // dark
    complex_block(&mut a, 2, 2, -0.5 * p.gamma_d, -(p.omega_d - p.delta));
    complex_block(&mut a, 2, 1, 0.0, -p.g_m);

    let mut d = DMatrix::zeros(6, 6);
    let diag = [
        0.5 * p.kappa,
        p.gamma_b * (p.n_th_b + 0.5),
        p.gamma_d * (p.n_th_d + 0.5),
    ];
    for (k, v) in diag.iter().enumerate() {
        d[(2 * k, 2 * k)] = *v;
        d[(2 * k + 1, 2 * k + 1)] = *v;
    }
    let mut sys = LinearSystem::new(
        a,
        d,
        labels(&["X_c", "P_c", "X_b", "P_b", "X_d", "P_d"]),
        "RWA quadratures X = (c + c^dag)/sqrt2 in the frame rotating at Delta; mechanical units of zero-point motion",
        1.0,
    )?;
    let omega = p.omega_b.min(p.omega_d);
    if [p.kappa, p.g_o, p.g_m].iter().any(|&r| r > MUCH_SMALLER * omega) {
        sys.warnings.push(Warning::RwaRegimeViolated);
    }
    Ok(sys)
}

/// True iff every drift eigenvalue has real part below `-1e-12` times the
/// spectral radius.
pub fn stability(sys: &LinearSystem) -> bool {
    let eigs = linalg::eigenvalues(&sys.drift);
    let eps = 1e-12 * linalg::spectral_radius(&eigs);
    eigs.iter().all(|z| z.re < -eps)
}

/// Largest real part among the drift eigenvalues.
pub fn max_real_part(sys: &LinearSystem) -> f64 {
    linalg::eigenvalues(&sys.drift)
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Stationary covariance of a linear system.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub matrix: DMatrix<f64>,
    pub labels: Vec<String>,
    pub hbar: f64,
    /// `||A V + V A^T + D||_inf / ||D||_inf`.
    pub relative_residual: f64,
}

impl CovarianceMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.matrix[(i, j)])
    }

    /// Single mode formed by the variables at `i` and `i + 1`.
    pub fn mode(&self, i: usize) -> Cov1D {
        Cov1D {
            xx: self.matrix[(i, i)],
            pp: self.matrix[(i + 1, i + 1)],
            xp: self.matrix[(i, i + 1)],
            hbar: self.hbar,
        }
    }

    /// Two-mode block formed by the variables at `i..i+2` and `j..j+2`.
    pub fn two_mode(&self, i: usize, j: usize, label: &str) -> Result<Cov2D> {
        let idx = [i, i + 1, j, j + 1];
        let m = Matrix4::from_fn(|r, c| self.matrix[(idx[r], idx[c])]);
        Cov2D::new(0.5 * (m + m.transpose()), self.hbar, label)
    }
}

/// Solve `A V + V A^T + D = 0` for a stable system.
pub fn steady_covariance(sys: &LinearSystem) -> Result<CovarianceMatrix> {
    if !stability(sys) {
        return Err(Error::UnstableSystem {
            max_real_part: max_real_part(sys),
        });
    }
    let v = linalg::solve_lyapunov(&sys.drift, &sys.diffusion)?;
    let v = 0.5 * (&v + v.transpose());
    let dnorm = linalg::norm_inf(&sys.diffusion);
    let residual = linalg::norm_inf(&linalg::lyapunov_residual(&sys.drift, &v, &sys.diffusion));
    let relative_residual = if dnorm > 0.0 { residual / dnorm } else { residual };
    if relative_residual > 1e-10 {
        return Err(Error::SolveFailure(format!(
            "Lyapunov residual {relative_residual:e} exceeds 1e-10 relative"
        )));
    }
    Ok(CovarianceMatrix {
        matrix: v,
        labels: sys.labels.clone(),
        hbar: sys.hbar,
        relative_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Coupling;
    use approx::assert_relative_eq;

    #[test]
    fn decoupled_limit_is_block_diagonal() {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Lambda(0.0));
        let sys = build_1d(&p, NoiseMode::VacuumOnly).unwrap();
        for i in 0..2 {
            for j in 2..4 {
                assert_eq!(sys.drift[(i, j)], 0.0);
                assert_eq!(sys.drift[(j, i)], 0.0);
            }
        }
        assert_eq!(sys.diffusion[(0, 0)], 0.0);
        assert_eq!(sys.diffusion[(1, 1)], 0.0);
        assert_eq!(sys.diffusion[(2, 2)], 0.1);
    }

    #[test]
    fn invalid_kappa() {
        let p = SystemParams1D::new(1.0, 0.0, 1.0, Coupling::Rate(0.1));
        assert!(matches!(build_1d(&p, NoiseMode::VacuumOnly), Err(Error::InvalidParams(_))));
        let p = SystemParams1D::new(0.0, 0.2, 1.0, Coupling::Rate(0.1));
        assert!(matches!(build_1d(&p, NoiseMode::VacuumOnly), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn stable_parameters_have_left_half_plane_spectrum() {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(0.3)).with_gamma(1e-3);
        let sys = build_1d(&p, NoiseMode::VacuumOnly).unwrap();
        assert!(stability(&sys));
        assert!(max_real_part(&sys) < 0.0);
    }

    #[test]
    fn stability_of_simple_matrices() {
        let a = DMatrix::from_diagonal_element(2, 2, -0.5);
        let sys = LinearSystem::new(a, DMatrix::identity(2, 2), labels(&["x", "p"]), "", 1.0).unwrap();
        assert!(stability(&sys));
        let v = steady_covariance(&sys).unwrap();
        assert_relative_eq!(v.matrix, DMatrix::identity(2, 2), epsilon = 1e-15);

        let rot = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let sys = LinearSystem::new(rot, DMatrix::identity(2, 2), labels(&["x", "p"]), "", 1.0).unwrap();
        assert!(!stability(&sys));
        assert!(matches!(steady_covariance(&sys), Err(Error::UnstableSystem { .. })));
    }

    #[test]
    fn beyond_spring_instability() {
        // 2 g_o^2 = 2 * 2 * 0.51^2 / 1.01 > 1
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(0.51));
        assert!(!stability(&build_1d(&p, NoiseMode::VacuumOnly).unwrap()));
    }

    #[test]
    fn thermal_oscillator_variance() {
        // Weakly coupled damped oscillator relaxes to its bath.
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Lambda(0.0))
            .with_gamma(1e-3)
            .with_bath_occupation(4.0)
            .unwrap();
        let v = steady_covariance(&build_1d(&p, NoiseMode::MarkovianThermal).unwrap()).unwrap();
        assert_relative_eq!(v.get("p_b", "p_b").unwrap(), 4.5, max_relative = 1e-10);
        assert_relative_eq!(v.get("x_b", "x_b").unwrap(), 4.5, max_relative = 1e-10);
        assert_relative_eq!(v.get("X_c", "X_c").unwrap(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn aligned_trap_decouples_dark_mode() {
        let p = SystemParams2D::new(1.1, 0.9, 0.0, 0.2, 1.0, 0.3).with_damping(0.01, 0.02);
        let sys = build_2d(&p, NoiseMode::VacuumOnly).unwrap();
        for i in [2usize, 3] {
            for j in [0usize, 1, 4, 5] {
                assert_eq!(sys.drift[(i, j)], 0.0);
                assert_eq!(sys.drift[(j, i)], 0.0);
            }
        }
    }

    #[test]
    fn equal_damping_has_no_dissipative_coupling() {
        let p = SystemParams2D::new(1.1, 0.9, 0.6, 0.2, 1.0, 0.3).with_damping(0.01, 0.01);
        let sys = build_2d(&p, NoiseMode::MarkovianThermal).unwrap();
        assert_eq!(sys.drift[(1, 3)], 0.0);
        assert_eq!(sys.drift[(3, 1)], 0.0);
    }

    #[test]
    fn correlated_bath_refused() {
        let p = SystemParams2D::new(1.1, 0.9, 0.6, 0.2, 1.0, 0.3).with_damping(0.01, 0.02);
        assert_eq!(
            build_2d(&p, NoiseMode::MarkovianThermal).unwrap_err(),
            Error::CorrelatedBathUnsupported
        );
        assert!(build_2d(&p, NoiseMode::VacuumOnly).is_ok());
    }

    #[test]
    fn rwa_without_coupling_is_vacuum() {
        let p = SystemParamsRWA::resonant(1.0, 0.01, 1e-4, 0.0, 0.0, 0.0);
        let v = steady_covariance(&build_rwa(&p).unwrap()).unwrap();
        assert_relative_eq!(v.matrix, DMatrix::from_diagonal_element(6, 6, 0.5), epsilon = 1e-12);
    }

    #[test]
    fn rwa_resonant_bright_dark_correlation_is_imaginary() {
        let p = SystemParamsRWA::resonant(1.0, 0.01, 1e-5, 100.0, 0.01, 0.006);
        let v = steady_covariance(&build_rwa(&p).unwrap()).unwrap();
        let re = 0.5 * (v.get("X_b", "X_d").unwrap() + v.get("P_b", "P_d").unwrap());
        let scale = v.get("X_b", "X_b").unwrap();
        assert!(re.abs() < 1e-10 * scale, "Re<b^dag d> = {re:e}");
    }

    #[test]
    fn labels_must_match_dimension() {
        let r = LinearSystem::new(
            DMatrix::identity(2, 2),
            DMatrix::identity(2, 2),
            labels(&["x"]),
            "",
            1.0,
        );
        assert!(r.is_err());
    }
}
