//! Purity, occupation numbers and decompositions of Gaussian states,
//! computed from covariance matrices alone.
//!
//! Single-mode states are described by the symmetrized second moments
//! `<dx^2>`, `<dp^2>` and `<{dx, dp}>/2`. Two-mode states use a 4x4 matrix
//! ordered `(x_1, p_1, x_2, p_2)`.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Relative tolerance on the uncertainty bound before an input is rejected.
pub const UNCERTAINTY_RTOL: f64 = 1e-9;

/// Single-mode covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cov1D {
    pub xx: f64,
    pub pp: f64,
    /// Symmetrized cross moment `<{dx, dp}>/2`.
    pub xp: f64,
    pub hbar: f64,
}

impl Cov1D {
    pub fn new(xx: f64, pp: f64, xp: f64) -> Self {
        Cov1D { xx, pp, xp, hbar: 1.0 }
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    /// Thermal state of an oscillator with `m omega = m_omega`.
    pub fn thermal(n: f64, m_omega: f64, hbar: f64) -> Self {
        let s = (2.0 * n + 1.0) * hbar / 2.0;
        Cov1D {
            xx: s / m_omega,
            pp: s * m_omega,
            xp: 0.0,
            hbar,
        }
    }

    /// `xx pp - xp^2`, evaluated with a fused difference of products.
    pub fn det(&self) -> f64 {
        let w = self.xp * self.xp;
        let e = (-self.xp).mul_add(self.xp, w);
        self.xx.mul_add(self.pp, -w) + e
    }

    /// Determinant checked against `(hbar/2)^2` and clamped up to it when the
    /// shortfall is within the relative tolerance.
    fn checked_det(&self) -> Result<f64> {
        if !(self.hbar > 0.0) {
            return Err(Error::InvalidCovariance(format!("hbar must be > 0, got {}", self.hbar)));
        }
        if !(self.xx >= 0.0 && self.pp >= 0.0) || !self.xp.is_finite() {
            return Err(Error::InvalidCovariance(format!(
                "variances must be non-negative and finite: xx = {}, pp = {}, xp = {}",
                self.xx, self.pp, self.xp
            )));
        }
        let bound = 0.25 * self.hbar * self.hbar;
        let det = self.det();
        if det < bound * (1.0 - UNCERTAINTY_RTOL) {
            return Err(Error::UncertaintyViolation {
                quantity: "xx*pp - xp^2",
                value: det,
                bound,
            });
        }
        Ok(det.max(bound))
    }
}

/// Thermal occupation in the diagonal basis and purity.
pub fn occupation_and_purity_1d(cov: &Cov1D) -> Result<(f64, f64)> {
    let det = cov.checked_det()?;
    let two_n_plus_one = 2.0 * det.sqrt() / cov.hbar;
    Ok((0.5 * (two_n_plus_one - 1.0), 1.0 / two_n_plus_one))
}

/// Parameters of the representation `rho = U rho_th U^dagger`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition1D {
    pub n_bar: f64,
    pub purity: f64,
    /// Squeezing angle in `[-pi/2, pi/2]`.
    pub theta: f64,
    pub x_zpf: f64,
    pub p_zpf: f64,
    /// Complex `M Omega = exp(-i theta) p_zpf / x_zpf`.
    pub m_omega: Complex64,
    /// `Re(M Omega) / hbar`.
    pub lambda_re: f64,
    pub hbar: f64,
}

impl Decomposition1D {
    /// Covariance reconstructed from the decomposition.
    pub fn covariance(&self) -> Cov1D {
        let s = 2.0 * self.n_bar + 1.0;
        let xx = self.x_zpf * self.x_zpf * s;
        let pp = self.p_zpf * self.p_zpf * s;
        Cov1D {
            xx,
            pp,
            xp: self.theta.sin() * (xx * pp).sqrt(),
            hbar: self.hbar,
        }
    }
}

pub fn decompose_1d(cov: &Cov1D) -> Result<Decomposition1D> {
    let det = cov.checked_det()?;
    if cov.xx == 0.0 || cov.pp == 0.0 {
        return Err(Error::DegenerateState(format!(
            "zero variance: xx = {}, pp = {}",
            cov.xx, cov.pp
        )));
    }
    let root = 2.0 * det.sqrt();
    let two_n_plus_one = root / cov.hbar;
    let sin_theta = (cov.xp / (cov.xx * cov.pp).sqrt()).clamp(-1.0, 1.0);
    let theta = sin_theta.asin();
    let x_zpf = (cov.hbar * cov.xx / root).sqrt();
    let p_zpf = (cov.hbar * cov.pp / root).sqrt();
    let m_omega = Complex64::from_polar(p_zpf / x_zpf, -theta);
    Ok(Decomposition1D {
        n_bar: 0.5 * (two_n_plus_one - 1.0),
        purity: 1.0 / two_n_plus_one,
        theta,
        x_zpf,
        p_zpf,
        m_omega,
        lambda_re: m_omega.re / cov.hbar,
        hbar: cov.hbar,
    })
}

/// Normalized Hermite functions `H_k(y) / sqrt(2^k k!)` for `k = 0..=n`
/// via the stable three-term recurrence.
fn scaled_hermite(n: usize, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * y;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Position-space wavefunction of the `n`-th state `U|n>` centred at `x0`.
pub fn wavefunction(n: usize, dec: &Decomposition1D, x0: f64, x: f64) -> Result<Complex64> {
    if !(dec.lambda_re > 0.0) {
        return Err(Error::DegenerateState(format!(
            "wavefunction needs Re(M Omega) > 0, got lambda = {}",
            dec.lambda_re
        )));
    }
    let u = x - x0;
    let lambda = dec.lambda_re;
    let norm = (lambda / std::f64::consts::PI).powf(0.25);
    let gauss = (-dec.m_omega * (u * u) / (2.0 * dec.hbar)).exp();
    Ok(gauss * (norm * scaled_hermite(n, lambda.sqrt() * u)))
}

/// Two-mode covariance ordered `(x_b, p_b, x_d, p_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cov2D {
    pub matrix: Matrix4<f64>,
    pub hbar: f64,
    pub basis_label: String,
}

impl Cov2D {
    pub fn new(matrix: Matrix4<f64>, hbar: f64, basis_label: impl Into<String>) -> Result<Self> {
        let cov = Cov2D {
            matrix,
            hbar,
            basis_label: basis_label.into(),
        };
        cov.check_symmetric()?;
        Ok(cov)
    }

    /// Block-diagonal covariance of two independent modes.
    pub fn product(a: &Cov1D, b: &Cov1D) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = a.xx;
        m[(1, 1)] = a.pp;
        m[(0, 1)] = a.xp;
        m[(1, 0)] = a.xp;
        m[(2, 2)] = b.xx;
        m[(3, 3)] = b.pp;
        m[(2, 3)] = b.xp;
        m[(3, 2)] = b.xp;
        Cov2D::new(m, a.hbar, "product")
    }

    /// Single-mode block of mode `k` (0 or 1).
    pub fn mode(&self, k: usize) -> Cov1D {
        let i = 2 * k;
        Cov1D {
            xx: self.matrix[(i, i)],
            pp: self.matrix[(i + 1, i + 1)],
            xp: self.matrix[(i, i + 1)],
            hbar: self.hbar,
        }
    }

    fn check_symmetric(&self) -> Result<()> {
        if !(self.hbar > 0.0) {
            return Err(Error::InvalidCovariance(format!("hbar must be > 0, got {}", self.hbar)));
        }
        let scale = self.matrix.amax();
        if !scale.is_finite() {
            return Err(Error::InvalidCovariance("non-finite entries".into()));
        }
        let asym = (self.matrix - self.matrix.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::InvalidCovariance(format!("matrix not symmetric (|V - V^T| = {asym:e})")));
        }
        Ok(())
    }

    fn symmetrized(&self) -> Matrix4<f64> {
        0.5 * (self.matrix + self.matrix.transpose())
    }
}

/// Two-mode purity and occupations in the diagonal (thermal) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary2D {
    pub purity_2d: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    /// Product of the purities of the two reduced single-mode states.
    pub purity_product_1d: f64,
}

pub fn purity_2d_general(cov: &Cov2D) -> Result<Summary2D> {
    cov.check_symmetric()?;
    let v = cov.symmetrized();
    let half = 0.5 * cov.hbar;
    let eig = v.symmetric_eigenvalues();
    let vmax = eig.amax();
    if eig.min() < -1e-12 * vmax {
        return Err(Error::InvalidCovariance(format!(
            "matrix not positive semidefinite (smallest eigenvalue {:e})",
            eig.min()
        )));
    }
    let dv = DMatrix::from_column_slice(4, 4, v.as_slice());
    let nus = linalg::symplectic_eigenvalues(&dv)?;
    let mut clamped = [0.0; 2];
    for (slot, &nu) in clamped.iter_mut().zip(&nus) {
        if nu < half * (1.0 - UNCERTAINTY_RTOL) {
            return Err(Error::UncertaintyViolation {
                quantity: "symplectic eigenvalue",
                value: nu,
                bound: half,
            });
        }
        *slot = nu.max(half);
    }
    let det = v.determinant().max(half.powi(4));
    let purity_2d = half * half / det.sqrt();
    let (nu_minus, nu_plus) = (clamped[0], clamped[1]);
    let (_, mu_1) = occupation_and_purity_1d(&cov.mode(0))?;
    let (_, mu_2) = occupation_and_purity_1d(&cov.mode(1))?;
    Ok(Summary2D {
        purity_2d: purity_2d.min(1.0),
        n_plus: nu_plus / cov.hbar - 0.5,
        n_minus: nu_minus / cov.hbar - 0.5,
        purity_product_1d: mu_1 * mu_2,
    })
}

/// Relative tolerance for the structural assumptions of the reduced formula.
pub const REDUCED_ASSUMPTION_RTOL: f64 = 1e-9;

/// Purity from the aggregates `A_xx`, `A_pp`, `A_xp`, `B_xp`, valid when
/// `<{x, p_x}> = <{y, p_y}> = 0` and `<y p_x> = -<x p_y>`.
pub fn purity_2d_reduced(cov: &Cov2D) -> Result<f64> {
    cov.check_symmetric()?;
    let v = cov.symmetrized();
    let scale = |i: usize, j: usize| (v[(i, i)] * v[(j, j)]).sqrt().max(f64::MIN_POSITIVE);
    let checks = [
        ("<{x, p_x}>/2", v[(0, 1)].abs(), scale(0, 1)),
        ("<{y, p_y}>/2", v[(2, 3)].abs(), scale(2, 3)),
        (
            "<y p_x> + <x p_y>",
            (v[(2, 1)] + v[(0, 3)]).abs(),
            scale(2, 1).max(scale(0, 3)),
        ),
    ];
    for (name, value, s) in checks {
        if value > REDUCED_ASSUMPTION_RTOL * s {
            return Err(Error::AssumptionViolated(format!(
                "{name} = {value:e} is not zero; use the general purity"
            )));
        }
    }
    let (xx, pxpx, yy, pypy) = (v[(0, 0)], v[(1, 1)], v[(2, 2)], v[(3, 3)]);
    let xy = v[(0, 2)];
    let pxpy = v[(1, 3)];
    let xpy = v[(0, 3)];
    let a_xx = xx * yy - xy * xy;
    let a_pp = pxpx * pypy - pxpy * pxpy;
    let a_xp = xx * pypy + yy * pxpx - 2.0 * xy * pxpy;
    let b_xp = xpy * xpy;
    let inner = a_xx * a_pp - a_xp * b_xp + b_xp * b_xp;
    let half = 0.5 * cov.hbar;
    let bound = half.powi(4);
    if inner < bound * (1.0 - UNCERTAINTY_RTOL) {
        return Err(Error::UncertaintyViolation {
            quantity: "det V",
            value: inner,
            bound,
        });
    }
    Ok(half * half / inner.max(bound).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_is_pure() {
        let (n, mu) = occupation_and_purity_1d(&Cov1D::new(0.5, 0.5, 0.0)).unwrap();
        assert_eq!(n, 0.0);
        assert_eq!(mu, 1.0);
    }

    #[test]
    fn thermal_three() {
        let (n, mu) = occupation_and_purity_1d(&Cov1D::new(3.5, 3.5, 0.0)).unwrap();
        assert_relative_eq!(n, 3.0, max_relative = 1e-15);
        assert_relative_eq!(mu, 1.0 / 7.0, max_relative = 1e-15);
    }

    #[test]
    fn squeezed_vacuum_is_pure() {
        let r = (-2.0f64).exp();
        let (n, mu) = occupation_and_purity_1d(&Cov1D::new(0.5 * r, 0.5 / r, 0.0)).unwrap();
        assert!(n.abs() < 1e-15);
        assert_relative_eq!(mu, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn below_bound_is_rejected_and_near_bound_clamped() {
        let err = occupation_and_purity_1d(&Cov1D::new(0.4, 0.5, 0.0)).unwrap_err();
        assert!(matches!(err, Error::UncertaintyViolation { .. }));
        let (n, mu) = occupation_and_purity_1d(&Cov1D::new(0.5 * (1.0 - 1e-11), 0.5, 0.0)).unwrap();
        assert_eq!(n, 0.0);
        assert_eq!(mu, 1.0);
    }

    #[test]
    fn decompose_vacuum() {
        let d = decompose_1d(&Cov1D::new(0.5, 0.5, 0.0)).unwrap();
        assert_eq!(d.theta, 0.0);
        assert_relative_eq!(d.x_zpf, 0.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(d.p_zpf, 0.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(d.m_omega.re, 1.0, max_relative = 1e-15);
        assert_eq!(d.m_omega.im, 0.0);
    }

    #[test]
    fn decompose_ground_state_of_heavier_oscillator() {
        let d = decompose_1d(&Cov1D::new(0.25, 1.0, 0.0)).unwrap();
        assert_relative_eq!(d.m_omega.re, 2.0, max_relative = 1e-15);
        assert_eq!(d.n_bar, 0.0);
    }

    #[test]
    fn decompose_degenerate() {
        let c = Cov1D { xx: 0.0, pp: f64::INFINITY, xp: 0.0, hbar: 1.0 };
        assert!(decompose_1d(&c).is_err());
    }

    #[test]
    fn wavefunction_peak_and_node() {
        let d = decompose_1d(&Cov1D::new(0.5, 0.5, 0.0)).unwrap();
        let psi = wavefunction(0, &d, 0.0, 0.0).unwrap();
        assert_relative_eq!(psi.re, std::f64::consts::PI.powf(-0.25), max_relative = 1e-15);
        let node = wavefunction(1, &d, 0.7, 0.7).unwrap();
        assert_eq!(node.norm(), 0.0);
    }

    #[test]
    fn hermite_recurrence_matches_closed_form() {
        // H_3(y) = 8y^3 - 12y, H_4(y) = 16y^4 - 48y^2 + 12
        let y: f64 = 0.37;
        let h3 = (8.0 * y.powi(3) - 12.0 * y) / (8.0f64 * 6.0).sqrt();
        let h4 = (16.0 * y.powi(4) - 48.0 * y * y + 12.0) / (16.0f64 * 24.0).sqrt();
        assert_relative_eq!(scaled_hermite(3, y), h3, max_relative = 1e-14);
        assert_relative_eq!(scaled_hermite(4, y), h4, max_relative = 1e-14);
        // large n does not overflow
        assert!(scaled_hermite(300, 1.0).is_finite());
    }

    #[test]
    fn two_mode_vacuum_and_thermal_product() {
        let vac = Cov2D::new(Matrix4::identity() * 0.5, 1.0, "bright/dark").unwrap();
        let s = purity_2d_general(&vac).unwrap();
        assert_relative_eq!(s.purity_2d, 1.0, max_relative = 1e-15);
        assert!(s.n_plus.abs() < 1e-14 && s.n_minus.abs() < 1e-14);
        assert_relative_eq!(purity_2d_reduced(&vac).unwrap(), 1.0, max_relative = 1e-15);

        let th = Cov2D::product(&Cov1D::thermal(1.0, 1.0, 1.0), &Cov1D::thermal(2.0, 1.0, 1.0)).unwrap();
        let s = purity_2d_general(&th).unwrap();
        assert_relative_eq!(s.purity_2d, 1.0 / 15.0, max_relative = 1e-14);
        assert_relative_eq!(s.n_plus, 2.0, max_relative = 1e-12);
        assert_relative_eq!(s.n_minus, 1.0, max_relative = 1e-12);
        assert_relative_eq!(s.purity_product_1d, 1.0 / 15.0, max_relative = 1e-14);
    }

    #[test]
    fn reduced_formula_rejects_xp_correlations() {
        let mut m = Matrix4::identity() * 0.6;
        m[(0, 1)] = 0.1;
        m[(1, 0)] = 0.1;
        let c = Cov2D::new(m, 1.0, "test").unwrap();
        assert!(matches!(purity_2d_reduced(&c), Err(Error::AssumptionViolated(_))));
        assert!(purity_2d_general(&c).is_ok());
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let mut m = Matrix4::identity() * 0.6;
        m[(0, 2)] = 0.1;
        assert!(matches!(Cov2D::new(m, 1.0, "x"), Err(Error::InvalidCovariance(_))));
    }

    #[test]
    fn sub_vacuum_two_mode_rejected() {
        let c = Cov2D::new(Matrix4::identity() * 0.4, 1.0, "x").unwrap();
        assert!(matches!(
            purity_2d_general(&c),
            Err(Error::UncertaintyViolation { .. })
        ));
    }
}
