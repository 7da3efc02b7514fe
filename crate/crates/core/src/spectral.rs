//! Frequency-domain solution of the single-mode model with coloured
//! Brownian noise.
//!
//! Fourier convention `f[w] = int dt e^{i w t} f(t)`; spectral densities are
//! normalized so that `<x^2> = int dw/2pi S_xx(w)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::Cov1D;
use crate::linalg;
use crate::params::SystemParams1D;
use crate::quadrature;

/// Bare cavity susceptibility `1 / (kappa/2 - i (w - Delta))`.
pub fn cavity_susceptibility(omega: f64, kappa: f64, delta: f64) -> Complex64 {
    1.0 / Complex64::new(0.5 * kappa, -(omega - delta))
}

/// Inverse mechanical response including the optical self-energy.
fn inverse_response(omega: f64, p: &SystemParams1D) -> Complex64 {
    let chi = cavity_susceptibility(omega, p.kappa, p.delta);
    let chi_neg = cavity_susceptibility(-omega, p.kappa, p.delta).conj();
    let bare = Complex64::new(
        p.mass * (p.omega_b * p.omega_b - omega * omega),
        -p.mass * omega * p.gamma_b,
    );
    bare - Complex64::i() * (p.hbar * p.lambda_o * p.lambda_o) * (chi - chi_neg)
}

/// Mechanical response function `R_b(w)`.
pub fn mechanical_response(omega: f64, p: &SystemParams1D) -> Complex64 {
    1.0 / inverse_response(omega, p)
}

/// Symmetric threshold on `hbar w / 2 kT` below which the coth is expanded.
const COTH_SERIES_BELOW: f64 = 1e-4;

/// Brownian force noise spectrum `hbar m gamma w [coth(hbar w / 2kT) + 1]`.
pub fn brownian_psd(omega: f64, gamma: f64, thermal_energy: f64, mass: f64, hbar: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    let quantum = hbar * mass * gamma * omega;
    if thermal_energy <= 0.0 {
        return if omega > 0.0 { 2.0 * quantum } else { 0.0 };
    }
    let y = hbar * omega / (2.0 * thermal_energy);
    // hbar m gamma w coth(y) = 2 m gamma kT * y coth(y)
    let classical = 2.0 * mass * gamma * thermal_energy;
    let y_coth_y = if y.abs() < COTH_SERIES_BELOW {
        let y2 = y * y;
        1.0 + y2 / 3.0 - y2 * y2 / 45.0
    } else {
        y / y.tanh()
    };
    classical * y_coth_y + quantum
}

/// Real characteristic polynomial of the bright-mode/cavity drift in the
/// Laplace variable `s = -i w`, coefficients ascending:
/// `m (s^2 + gamma s + w_b^2)((s + kappa/2)^2 + Delta^2) - 2 hbar lambda^2 Delta`.
pub fn characteristic_polynomial(p: &SystemParams1D) -> [f64; 5] {
    let q = [
        0.25 * p.kappa * p.kappa + p.delta * p.delta,
        p.kappa,
        1.0,
    ];
    let r = [p.omega_b * p.omega_b, p.gamma_b, 1.0];
    let mut c = [0.0; 5];
    for (i, qi) in q.iter().enumerate() {
        for (j, rj) in r.iter().enumerate() {
            c[i + j] += p.mass * qi * rj;
        }
    }
    c[0] -= 2.0 * p.hbar * p.lambda_o * p.lambda_o * p.delta;
    c
}

/// Poles of `R_b(w)` in the complex frequency plane (lower half-plane for
/// stable systems), from companion-matrix roots.
pub fn response_poles(p: &SystemParams1D) -> Result<Vec<Complex64>> {
    let roots = linalg::poly_roots(&characteristic_polynomial(p))?;
    Ok(roots.into_iter().map(|s| Complex64::i() * s).collect())
}

fn check_stable(p: &SystemParams1D) -> Result<Vec<Complex64>> {
    p.validate()?;
    let poles = response_poles(p)?;
    let radius = poles.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let worst = poles.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    if worst >= -1e-12 * radius {
        return Err(Error::UnstableSystem { max_real_part: worst });
    }
    Ok(poles)
}

fn backaction_psd(omega: f64, p: &SystemParams1D) -> f64 {
    let r2 = mechanical_response(omega, p).norm_sqr();
    let chi2 = cavity_susceptibility(omega, p.kappa, p.delta).norm_sqr();
    r2 * p.kappa * (p.hbar * p.lambda_o).powi(2) * chi2
}

fn thermal_psd(omega: f64, p: &SystemParams1D) -> f64 {
    let r2 = mechanical_response(omega, p).norm_sqr();
    r2 * brownian_psd(omega, p.gamma_b, p.thermal_energy, p.mass, p.hbar)
}

/// Position spectral density `|R_b|^2 [S_N + kappa hbar^2 lambda^2 |chi_c|^2]`.
pub fn position_psd(omega: f64, p: &SystemParams1D) -> Result<f64> {
    check_stable(p)?;
    Ok(backaction_psd(omega, p) + thermal_psd(omega, p))
}

/// Integration control for the spectral moments.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqGrid {
    /// Extra finite segments to cover; extended automatically to ten times
    /// the largest pole modulus.
    pub segments: Vec<(f64, f64)>,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for FreqGrid {
    fn default() -> Self {
        FreqGrid {
            segments: Vec::new(),
            rel_tol: 1e-10,
            abs_tol: 1e-15,
        }
    }
}

impl FreqGrid {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        FreqGrid {
            rel_tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParams("quadrature tolerances must be > 0".into()));
        }
        let mut last = f64::NEG_INFINITY;
        for &(lo, hi) in &self.segments {
            if !(lo < hi) || lo < last {
                return Err(Error::InvalidParams(
                    "frequency segments must be ordered and non-overlapping".into(),
                ));
            }
            last = hi;
        }
        Ok(())
    }
}

/// Moments from frequency integration, with quadrature error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMoments {
    pub cov: Cov1D,
    pub xx_error: f64,
    pub pp_error: f64,
    /// `Im <x p>`, which must equal `hbar/2`.
    pub commutator: f64,
    /// Frequency up to which the Brownian contribution is integrated.
    pub cutoff: f64,
    pub evaluations: usize,
}

const MAX_PANELS: usize = 20_000;

/// Integral over the whole real axis: finite breakpoints plus the two tails
/// mapped onto `(0, 1]` through `w = W / t`.
fn integrate_line<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], cutoff: f64, grid: &FreqGrid) -> Result<quadrature::Estimate> {
    let core = quadrature::integrate(f, breaks, grid.rel_tol, grid.abs_tol, MAX_PANELS)?;
    let upper = |t: f64| {
        let w = cutoff / t;
        f(w) * cutoff / (t * t)
    };
    let lower = |t: f64| {
        let w = -cutoff / t;
        f(w) * cutoff / (t * t)
    };
    let tol = grid.abs_tol.max(grid.rel_tol * core.value.abs());
    let hi = quadrature::integrate(upper, &[0.0, 1.0], grid.rel_tol, tol, MAX_PANELS)?;
    let lo = quadrature::integrate(lower, &[0.0, 1.0], grid.rel_tol, tol, MAX_PANELS)?;
    Ok(quadrature::Estimate {
        value: core.value + hi.value + lo.value,
        error: core.error + hi.error + lo.error,
        evaluations: core.evaluations + hi.evaluations + lo.evaluations,
    })
}

fn breakpoints(poles: &[Complex64], grid: &FreqGrid) -> (Vec<f64>, f64) {
    let radius = poles.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut cutoff = 10.0 * radius;
    for &(lo, hi) in &grid.segments {
        cutoff = cutoff.max(lo.abs()).max(hi.abs());
    }
    let mut pts = vec![-cutoff, 0.0, cutoff];
    for z in poles {
        let (c, w) = (z.re.abs(), z.im.abs());
        for x in [c, c - 2.0 * w, c + 2.0 * w, c - 20.0 * w, c + 20.0 * w] {
            if x.abs() < cutoff {
                pts.push(x);
                pts.push(-x);
            }
        }
    }
    for &(lo, hi) in &grid.segments {
        pts.push(lo);
        pts.push(hi);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * cutoff);
    (pts, cutoff)
}

/// Position and momentum variances from adaptive quadrature of `S_xx` and
/// `m^2 w^2 S_xx`.
///
/// Everything is integrated over the whole real line except the Brownian part
/// of the momentum spectrum, which decays only as `1/w` (ohmic bath) and is
/// cut off at the grid cutoff.
pub fn integrate_moments(p: &SystemParams1D, grid: &FreqGrid) -> Result<SpectralMoments> {
    grid.validate()?;
    let poles = check_stable(p)?;
    let (breaks, cutoff) = breakpoints(&poles, grid);
    let m2 = p.mass * p.mass;

    let ba_x = integrate_line(&|w| backaction_psd(w, p), &breaks, cutoff, grid)?;
    let ba_p = integrate_line(&|w| m2 * w * w * backaction_psd(w, p), &breaks, cutoff, grid)?;
    let ba_c = integrate_line(&|w| p.mass * w * backaction_psd(w, p), &breaks, cutoff, grid)?;
    let mut xx = ba_x.value;
    let mut pp = ba_p.value;
    let mut comm = ba_c.value;
    let mut xx_err = ba_x.error;
    let mut pp_err = ba_p.error;
    let mut evaluations = ba_x.evaluations + ba_p.evaluations + ba_c.evaluations;
    if p.gamma_b > 0.0 {
        let tx = integrate_line(&|w| thermal_psd(w, p), &breaks, cutoff, grid)?;
        let tp = quadrature::integrate(
            |w| m2 * w * w * thermal_psd(w, p),
            &breaks,
            grid.rel_tol,
            grid.abs_tol,
            MAX_PANELS,
        )?;
        let tc = integrate_line(&|w| p.mass * w * thermal_psd(w, p), &breaks, cutoff, grid)?;
        xx += tx.value;
        pp += tp.value;
        comm += tc.value;
        xx_err += tx.error;
        pp_err += tp.error;
        evaluations += tx.evaluations + tp.evaluations + tc.evaluations;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let (xx, pp, comm) = (xx / two_pi, pp / two_pi, comm / two_pi);
    let half = 0.5 * p.hbar;
    // The symmetrized cross spectrum vanishes identically; what the
    // integration can check is the commutator sum rule Im<x p> = hbar/2.
    let comm_tol = 1e-6 * half + 10.0 * (xx_err + pp_err) / two_pi;
    if (comm - half).abs() > comm_tol {
        return Err(Error::QuadratureFailure {
            estimate: comm,
            error: (comm - half).abs(),
            requested: comm_tol,
        });
    }
    Ok(SpectralMoments {
        cov: Cov1D {
            xx,
            pp,
            xp: 0.0,
            hbar: p.hbar,
        },
        xx_error: xx_err / two_pi,
        pp_error: pp_err / two_pi,
        commutator: comm,
        cutoff,
        evaluations,
    })
}

/// Exact moments of the backaction-only spectrum (`gamma_b = 0`) by the
/// residue theorem, closing the contour in the upper half-plane.
pub fn residue_moments(p: &SystemParams1D) -> Result<Cov1D> {
    if p.gamma_b != 0.0 {
        return Err(Error::InvalidParams("residue moments require gamma_b = 0".into()));
    }
    check_stable(p)?;
    let c = characteristic_polynomial(p);
    let roots = linalg::poly_roots(&c)?;
    let eval = |s: Complex64| linalg::poly_eval(&c, s);
    let deriv = |s: Complex64| {
        (1..c.len()).rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * s + c[k] * k as f64)
    };
    let amp = p.kappa * (p.hbar * p.lambda_o).powi(2);
    let numerator = |z: Complex64| amp * (0.25 * p.kappa * p.kappa + (z + p.delta) * (z + p.delta));
    let mut xx = Complex64::new(0.0, 0.0);
    let mut pp = Complex64::new(0.0, 0.0);
    for s in roots {
        // zero of P(w) = p(-i w) at w_k = i s; the conjugate zero of
        // conj(P(conj w)) sits at z = conj(w_k) in the upper half-plane.
        let w_k = Complex64::i() * s;
        let z = w_k.conj();
        let p_at_z = eval(-Complex64::i() * z);
        let pbar_prime = (-Complex64::i() * deriv(s)).conj();
        let res = numerator(z) / (p_at_z * pbar_prime);
        xx += res;
        pp += res * (p.mass * p.mass) * z * z;
    }
    // int dw/2pi f = (2 pi i / 2 pi) sum Res
    let xx = (Complex64::i() * xx).re;
    let pp = (Complex64::i() * pp).re;
    Ok(Cov1D {
        xx,
        pp,
        xp: 0.0,
        hbar: p.hbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Coupling;
    use approx::assert_relative_eq;

    #[test]
    fn susceptibility_values() {
        assert_relative_eq!(cavity_susceptibility(1.3, 0.2, 1.3).re, 10.0, max_relative = 1e-15);
        assert!(cavity_susceptibility(1e12, 0.2, 1.3).norm() < 1e-11);
        assert!(cavity_susceptibility(-1e12, 0.2, 1.3).norm() < 1e-11);
        let peak = cavity_susceptibility(1.3, 0.2, 1.3).norm_sqr();
        assert_relative_eq!(cavity_susceptibility(1.4, 0.2, 1.3).norm_sqr(), 0.5 * peak, max_relative = 1e-13);
        assert_relative_eq!(cavity_susceptibility(1.2, 0.2, 1.3).norm_sqr(), 0.5 * peak, max_relative = 1e-13);
    }

    #[test]
    fn static_compliance() {
        let p = SystemParams1D::new(2.0, 0.2, 1.0, Coupling::Lambda(0.0)).with_units(3.0, 1.0);
        let r = mechanical_response(0.0, &p);
        assert_relative_eq!(r.re, 1.0 / (3.0 * 4.0), max_relative = 1e-15);
        assert_eq!(r.im, 0.0);
    }

    #[test]
    fn bare_response_peaks_at_resonance() {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Lambda(0.0)).with_gamma(1e-3);
        let peak = (0..2001)
            .map(|k| 0.9 + 0.2 * k as f64 / 2000.0)
            .max_by(|a, b| {
                mechanical_response(*a, &p)
                    .norm()
                    .total_cmp(&mechanical_response(*b, &p).norm())
            })
            .unwrap();
        assert!((peak - 1.0).abs() < 1e-3);
    }

    #[test]
    fn brownian_limits() {
        assert_relative_eq!(brownian_psd(0.7, 0.01, 0.0, 2.0, 1.0), 2.0 * 2.0 * 0.01 * 0.7, max_relative = 1e-15);
        assert_eq!(brownian_psd(-0.7, 0.01, 0.0, 2.0, 1.0), 0.0);
        let classical = 2.0 * 2.0 * 0.01 * 1e3;
        assert_relative_eq!(brownian_psd(0.7, 0.01, 1e3, 2.0, 1.0), classical, max_relative = 1e-3);
        assert_relative_eq!(brownian_psd(-0.7, 0.01, 1e3, 2.0, 1.0), classical, max_relative = 1e-3);
        assert_eq!(brownian_psd(0.0, 0.01, 1e3, 2.0, 1.0), classical);
        // series and closed form agree across the switch
        let kt = 1.0;
        let y = COTH_SERIES_BELOW;
        let w = 2.0 * kt * y;
        let below = brownian_psd(w * (1.0 - 1e-9), 0.01, kt, 1.0, 1.0);
        let above = brownian_psd(w * (1.0 + 1e-9), 0.01, kt, 1.0, 1.0);
        assert_relative_eq!(below, above, max_relative = 1e-8);
    }

    #[test]
    fn normal_mode_poles() {
        let p = SystemParams1D::new(1.0, 1e-9, 1.0, Coupling::Rate(0.1));
        let mut re: Vec<f64> = response_poles(&p)
            .unwrap()
            .iter()
            .filter(|z| z.re > 0.0)
            .map(|z| z.re)
            .collect();
        re.sort_by(f64::total_cmp);
        assert_eq!(re.len(), 2);
        assert_relative_eq!(re[0], 0.8f64.sqrt(), max_relative = 1e-7);
        assert_relative_eq!(re[1], 1.2f64.sqrt(), max_relative = 1e-7);
    }

    #[test]
    fn unstable_parameters_are_rejected() {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(0.51));
        assert!(matches!(position_psd(1.0, &p), Err(Error::UnstableSystem { .. })));
    }

    #[test]
    fn vacuum_oscillator_moments() {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Lambda(0.0)).with_gamma(1e-4);
        let m = integrate_moments(&p, &FreqGrid::default()).unwrap();
        assert_relative_eq!(m.cov.xx, 0.5, max_relative = 1e-3);
        assert_relative_eq!(m.commutator, 0.5, max_relative = 1e-6);
    }

    #[test]
    fn bad_grid_rejected() {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(0.1));
        let g = FreqGrid {
            segments: vec![(1.0, 0.5)],
            ..Default::default()
        };
        assert!(integrate_moments(&p, &g).is_err());
        let g = FreqGrid {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate_moments(&p, &g).is_err());
    }
}
