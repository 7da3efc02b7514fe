//! Analytic results for sideband cooling: weak and strong coupling, the
//! exact quantum-backaction limits in one and two dimensions, and the
//! rotating-wave purity optimum.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::gaussian::{purity_2d_reduced, Cov2D};
use crate::params::{bright_dark, g_o_squared, planck, BrightDark, SystemParams1D, SystemParams2D, SystemParamsRWA};
use crate::spectral::cavity_susceptibility;
use crate::warning::{Warning, MUCH_SMALLER};

/// Weak-coupling renormalized oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakCouplingResult {
    pub omega_tilde: f64,
    pub gamma_tilde: f64,
    pub n_bar: f64,
    pub x_zpf_eff: f64,
    /// Every optical-spring fixed point found on `(0, 10 max(omega_b, Delta, kappa)]`.
    pub fixed_points: Vec<f64>,
    pub warnings: Vec<Warning>,
}

/// Damping applied to the optical-spring fixed-point iteration.
pub const SPRING_DAMPING: f64 = 0.5;
const SPRING_MAX_ITER: usize = 10_000;
const SPRING_RTOL: f64 = 1e-12;

/// `chi_c(w) - chi_c^*(-w)`.
fn self_energy_kernel(omega: f64, p: &SystemParams1D) -> num_complex::Complex64 {
    cavity_susceptibility(omega, p.kappa, p.delta) - cavity_susceptibility(-omega, p.kappa, p.delta).conj()
}

/// Right-hand side of the implicit optical-spring equation for `w~^2`.
fn spring_rhs(omega: f64, p: &SystemParams1D) -> f64 {
    p.omega_b * p.omega_b + p.hbar * p.lambda_o * p.lambda_o / p.mass * self_energy_kernel(omega, p).im
}

/// All positive solutions of `w^2 = spring_rhs(w)` found by a sign scan with
/// bisection refinement.
pub fn spring_fixed_points(p: &SystemParams1D) -> Vec<f64> {
    let top = 10.0 * p.omega_b.max(p.delta.abs()).max(p.kappa);
    let steps = 20_000;
    let h = |w: f64| w * w - spring_rhs(w, p);
    let mut found = Vec::new();
    let mut prev_w = top / steps as f64;
    let mut prev_h = h(prev_w);
    for k in 2..=steps {
        let w = top * k as f64 / steps as f64;
        let hw = h(w);
        if hw == 0.0 {
            found.push(w);
        } else if prev_h.signum() != hw.signum() && prev_h != 0.0 {
            let (mut a, mut b, mut ha) = (prev_w, w, prev_h);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let hm = h(mid);
                if hm.signum() == ha.signum() {
                    a = mid;
                    ha = hm;
                } else {
                    b = mid;
                }
                if b - a <= 1e-15 * b {
                    break;
                }
            }
            found.push(0.5 * (a + b));
        }
        prev_w = w;
        prev_h = hw;
    }
    found
}

/// Weak-coupling frequency, linewidth and occupation. The effective
/// frequency comes from the damped fixed-point iteration seeded at the bare
/// frequency, i.e. the root continuously connected to `omega_b`.
pub fn weak_coupling(p: &SystemParams1D) -> Result<WeakCouplingResult> {
    p.validate()?;
    let mut w = p.omega_b;
    let mut converged = false;
    for _ in 0..SPRING_MAX_ITER {
        let rhs = spring_rhs(w, p);
        if !(rhs > 0.0) {
            break;
        }
        let next = (1.0 - SPRING_DAMPING) * w + SPRING_DAMPING * rhs.sqrt();
        let done = (next - w).abs() <= SPRING_RTOL * next;
        w = next;
        if done {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::FixedPointDivergence {
            iterations: SPRING_MAX_ITER,
        });
    }
    let lambda2 = p.lambda_o * p.lambda_o;
    let gamma_tilde = p.gamma_b + p.hbar * lambda2 / (p.mass * w) * self_energy_kernel(w, p).re;
    if !(gamma_tilde > 0.0) {
        return Err(Error::UnstableRegime(format!(
            "effective linewidth {gamma_tilde:e} is not positive (heating detuning)"
        )));
    }
    let x_zpf2 = p.hbar / (2.0 * p.mass * w);
    let n_th = planck(w, p.thermal_energy, p.hbar)?;
    let chi_neg = cavity_susceptibility(-w, p.kappa, p.delta).norm_sqr();
    let n_bar = (p.gamma_b * n_th + p.kappa * lambda2 * x_zpf2 * chi_neg) / gamma_tilde;

    let fixed_points = spring_fixed_points(p);
    let mut warnings = Vec::new();
    if gamma_tilde > MUCH_SMALLER * p.kappa {
        warnings.push(Warning::LinewidthNotSmallVsKappa);
    }
    if gamma_tilde > MUCH_SMALLER * w {
        warnings.push(Warning::LinewidthNotSmallVsFrequency);
    }
    if fixed_points.len() > 1 {
        warnings.push(Warning::MultipleSpringFixedPoints);
    }
    Ok(WeakCouplingResult {
        omega_tilde: w,
        gamma_tilde,
        n_bar,
        x_zpf_eff: x_zpf2.sqrt(),
        fixed_points,
        warnings,
    })
}

/// Normal-mode description at `Delta = omega_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongCouplingResult {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    /// Occupation in the diagonal basis.
    pub n_bar: f64,
    /// Phonon number with respect to the bare oscillator.
    pub n_bar_0: f64,
    pub warnings: Vec<Warning>,
}

/// Relative tolerance on `Delta = omega_b` for the strong-coupling formulas.
pub const RESONANCE_RTOL: f64 = 1e-9;

pub fn strong_coupling(p: &SystemParams1D) -> Result<StrongCouplingResult> {
    p.validate()?;
    let wb = p.omega_b;
    if (p.delta - wb).abs() > RESONANCE_RTOL * wb {
        return Err(Error::InvalidRegime(format!(
            "strong-coupling formulas assume Delta = omega_b (Delta = {}, omega_b = {wb})",
            p.delta
        )));
    }
    let g = p.g_o();
    if 2.0 * g >= wb {
        return Err(Error::InvalidRegime(format!(
            "lower normal mode is not real: 2 G_o = {} >= omega_b = {wb}",
            2.0 * g
        )));
    }
    let omega_plus = wb * (1.0 + 2.0 * g / wb).sqrt();
    let omega_minus = wb * (1.0 - 2.0 * g / wb).sqrt();
    let kappa_pm = 0.5 * p.kappa;
    // The mechanical frequency in the denominator is read as the bare omega_b.
    let occ = |w: f64| -> Result<f64> {
        let n_th = planck(w, p.thermal_energy, p.hbar)?;
        Ok((0.5 * p.gamma_b * n_th + p.kappa * (w - wb).powi(2) / (8.0 * wb * w)) / kappa_pm)
    };
    let n_plus = occ(omega_plus)?;
    let n_minus = occ(omega_minus)?;
    let (sp, sm) = (2.0 * n_plus + 1.0, 2.0 * n_minus + 1.0);
    let cross = 2.0 * wb * wb / (omega_plus * omega_minus);
    let two_n_plus_one = 0.5 * (sm * sm + sp * sp + cross * sm * sp).sqrt();
    let two_n0_plus_one = 0.25
        * [(omega_plus, sp), (omega_minus, sm)]
            .iter()
            .map(|&(w, s)| (wb * wb + w * w) / (wb * w) * s)
            .sum::<f64>();
    let mut warnings = Vec::new();
    if omega_minus < 10.0 * p.kappa {
        warnings.push(Warning::LowerNormalModeUnresolved);
    }
    if kappa_pm > MUCH_SMALLER * (omega_plus - omega_minus) {
        warnings.push(Warning::NormalModesOverlap);
    }
    Ok(StrongCouplingResult {
        omega_plus,
        omega_minus,
        kappa_plus: kappa_pm,
        kappa_minus: kappa_pm,
        n_plus,
        n_minus,
        n_bar: 0.5 * (two_n_plus_one - 1.0),
        n_bar_0: 0.5 * (two_n0_plus_one - 1.0),
        warnings,
    })
}

/// Exact single-mode steady state when only cavity vacuum noise acts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backaction1DResult {
    pub xx: f64,
    pub pp: f64,
    pub n_bar: f64,
    pub purity: f64,
    /// Real `M Omega` of the diagonal-basis wavefunctions.
    pub m_omega: f64,
    /// Bare-frequency phonon number.
    pub n_bar_0: f64,
    /// Weak-coupling limit of the occupation.
    pub n_min_weak: f64,
}

/// Lowest occupation reachable at vanishing coupling,
/// `((kappa/2)^2 + (Delta - omega_b)^2) / (4 omega_b Delta)`.
pub fn minimal_occupation_weak(p: &SystemParams1D) -> f64 {
    (0.25 * p.kappa * p.kappa + (p.delta - p.omega_b).powi(2)) / (4.0 * p.omega_b * p.delta)
}

/// Phonon number with respect to the bare oscillator of frequency `omega`.
pub fn bare_phonon_number(xx: f64, pp: f64, omega: f64, mass: f64, hbar: f64) -> f64 {
    let x0 = hbar / (2.0 * mass * omega);
    let p0 = hbar * mass * omega / 2.0;
    0.5 * (0.5 * (xx / x0 + pp / p0) - 1.0)
}

/// Closed-form quantum-backaction limit. Intrinsic damping is ignored.
pub fn backaction_1d(p: &SystemParams1D) -> Result<Backaction1DResult> {
    p.validate()?;
    if !(p.delta > 0.0) {
        return Err(Error::InvalidRegime(format!("backaction limit needs Delta > 0, got {}", p.delta)));
    }
    let g2 = g_o_squared(p);
    let wb2 = p.omega_b * p.omega_b;
    let stiff = wb2 - 2.0 * g2;
    if !(stiff > 0.0) {
        return Err(Error::UnstableRegime(format!(
            "omega_b^2 <= 2 g_o^2 ({wb2:e} <= {:e})",
            2.0 * g2
        )));
    }
    let (m, hbar, delta) = (p.mass, p.hbar, p.delta);
    let k = 0.25 * p.kappa * p.kappa + delta * delta;
    let xx = hbar / (4.0 * m * delta) * (1.0 + k / stiff);
    let pp = hbar * m * (k + wb2) / (4.0 * delta);
    let two_n_plus_one = ((k + wb2 - 2.0 * g2) * (k + wb2) / (4.0 * delta * delta * stiff)).sqrt();
    let m_omega = m * ((k + wb2) * stiff / (k + wb2 - 2.0 * g2)).sqrt();
    Ok(Backaction1DResult {
        xx,
        pp,
        n_bar: 0.5 * (two_n_plus_one - 1.0),
        purity: 1.0 / two_n_plus_one,
        m_omega,
        n_bar_0: bare_phonon_number(xx, pp, p.omega_b, m, hbar),
        n_min_weak: minimal_occupation_weak(p),
    })
}

/// Rotating-wave optimum of the bright-dark coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct RwaOptimum {
    pub g_m_opt: f64,
    pub purity_approx: f64,
    pub warnings: Vec<Warning>,
}

/// `G_m = G_o / sqrt 2` and `1/mu = 1 + 4 n_B (1/C_o + gamma_tot/kappa)`.
pub fn rwa_optimum(p: &SystemParamsRWA) -> Result<RwaOptimum> {
    p.validate()?;
    let gamma_tot = p.gamma_tot();
    let n_th = p.n_th_b;
    let inv_coop = if gamma_tot == 0.0 {
        0.0
    } else {
        p.kappa * gamma_tot / (4.0 * p.g_o * p.g_o)
    };
    let inv_mu = if n_th == 0.0 {
        1.0
    } else {
        1.0 + 4.0 * n_th * (inv_coop + gamma_tot / p.kappa)
    };
    let mut warnings = Vec::new();
    if inv_coop > MUCH_SMALLER {
        warnings.push(Warning::LowCooperativity);
    }
    let g_m_opt = p.g_o / std::f64::consts::SQRT_2;
    if p.g_o * p.g_o < 10.0 * g_m_opt * g_m_opt * gamma_tot / p.kappa {
        warnings.push(Warning::WeakDarkCoupling);
    }
    let omega = p.omega_b.min(p.omega_d);
    if [p.kappa, p.g_o, g_m_opt].iter().any(|&r| r > MUCH_SMALLER * omega) {
        warnings.push(Warning::RwaRegimeViolated);
    }
    Ok(RwaOptimum {
        g_m_opt,
        purity_approx: 1.0 / inv_mu,
        warnings,
    })
}

/// Exact two-mode backaction-limit moments and purities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backaction2DResult {
    pub xx_b: f64,
    pub xx_d: f64,
    pub pp_b: f64,
    pub pp_d: f64,
    pub x_b_x_d: f64,
    pub p_b_p_d: f64,
    pub purity_2d: f64,
    pub purity_product: f64,
    pub hbar: f64,
}

impl Backaction2DResult {
    /// Covariance matrix in the `(x_b, p_b, x_d, p_d)` ordering.
    pub fn covariance(&self) -> Result<Cov2D> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.xx_b;
        m[(1, 1)] = self.pp_b;
        m[(2, 2)] = self.xx_d;
        m[(3, 3)] = self.pp_d;
        m[(0, 2)] = self.x_b_x_d;
        m[(2, 0)] = self.x_b_x_d;
        m[(1, 3)] = self.p_b_p_d;
        m[(3, 1)] = self.p_b_p_d;
        Cov2D::new(m, self.hbar, "bright/dark")
    }
}

/// Drive and units shared by the bright/dark description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub kappa: f64,
    pub delta: f64,
    pub lambda_o: f64,
    pub mass: f64,
    pub hbar: f64,
}

/// Backaction limit of the 2D oscillator. Mechanical damping is ignored.
pub fn backaction_2d(p: &SystemParams2D) -> Result<Backaction2DResult> {
    p.validate()?;
    let drive = Drive {
        kappa: p.kappa,
        delta: p.delta,
        lambda_o: p.lambda_o,
        mass: p.mass,
        hbar: p.hbar,
    };
    backaction_2d_bright_dark(&bright_dark(p), &drive)
}

pub fn backaction_2d_bright_dark(bd: &BrightDark, drive: &Drive) -> Result<Backaction2DResult> {
    let (m, hbar, delta) = (drive.mass, drive.hbar, drive.delta);
    if !(delta > 0.0) {
        return Err(Error::InvalidRegime(format!("backaction limit needs Delta > 0, got {delta}")));
    }
    let k = 0.25 * drive.kappa * drive.kappa + delta * delta;
    let g2 = hbar * drive.lambda_o * drive.lambda_o * delta / (m * k);
    if bd.delta_m == 0.0 || g2 == 0.0 {
        return Err(Error::UndampedDarkMode);
    }
    let stiff = bd.omega_b * bd.omega_b - 2.0 * g2;
    let wd2 = bd.omega_d * bd.omega_d;
    let cross = bd.omega_bar_m * bd.delta_m;
    let den = stiff * wd2 - cross * cross;
    if !(den > 0.0) || !(stiff > 0.0) {
        return Err(Error::UnstableRegime(format!(
            "(omega_b^2 - 2 g_o^2) omega_d^2 <= (omega_bar_m delta_m)^2 ({:e} <= {:e})",
            stiff * wd2,
            cross * cross
        )));
    }
    let x_unit = hbar / (4.0 * m * delta);
    let xx_b = x_unit * (1.0 + k * wd2 / den);
    let xx_d = x_unit * (1.0 + k * stiff / den);
    let pp_b = hbar * m * (k + bd.omega_b * bd.omega_b) / (4.0 * delta);
    let pp_d = hbar * m * (k + wd2) / (4.0 * delta);
    let x_b_x_d = -x_unit * k * cross / den;
    let p_b_p_d = hbar * m * cross / (4.0 * delta);
    let mut out = Backaction2DResult {
        xx_b,
        xx_d,
        pp_b,
        pp_d,
        x_b_x_d,
        p_b_p_d,
        purity_2d: 0.0,
        purity_product: hbar * hbar / (4.0 * (xx_b * pp_b * xx_d * pp_d).sqrt()),
        hbar,
    };
    out.purity_2d = purity_2d_reduced(&out.covariance()?)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Coupling;
    use approx::assert_relative_eq;

    fn one_d(kappa: f64, delta: f64, g_o: f64) -> SystemParams1D {
        SystemParams1D::new(1.0, kappa, delta, Coupling::Rate(g_o))
    }

    #[test]
    fn uncoupled_weak_limit() {
        let p = one_d(0.2, 1.0, 0.0).with_gamma(1e-3).with_bath_occupation(3.0).unwrap();
        let r = weak_coupling(&p).unwrap();
        assert_eq!(r.omega_tilde, 1.0);
        assert_eq!(r.gamma_tilde, 1e-3);
        assert_relative_eq!(r.n_bar, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn bad_side_detuning_is_unstable_regime() {
        let p = one_d(0.2, -1.0, 0.01);
        assert!(matches!(weak_coupling(&p), Err(Error::UnstableRegime(_))));
    }

    #[test]
    fn fast_cavity_weak_limit_is_finite() {
        let p = one_d(20.0, 10.0, 0.01);
        let r = weak_coupling(&p).unwrap();
        assert!(r.n_bar > 0.0 && r.n_bar.is_finite());
    }

    #[test]
    fn resolved_sideband_weak_occupation() {
        let p = one_d(0.2, 1.0, 0.02);
        let r = weak_coupling(&p).unwrap();
        let w = r.omega_tilde;
        let expected = (0.01 + (1.0 - w).powi(2)) / (4.0 * w);
        assert_relative_eq!(r.n_bar, expected, max_relative = 1e-12);
        assert_eq!(r.fixed_points.len(), 1);
        assert_relative_eq!(r.fixed_points[0], w, max_relative = 1e-10);
    }

    #[test]
    fn normal_mode_frequencies() {
        let r = strong_coupling(&one_d(0.02, 1.0, 0.1)).unwrap();
        assert_relative_eq!(r.omega_plus, 1.2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.omega_minus, 0.8f64.sqrt(), max_relative = 1e-15);
        assert!((r.omega_plus - 1.09545).abs() < 5e-6);
        assert!((r.omega_minus - 0.89443).abs() < 5e-6);
        assert_eq!(r.kappa_plus, 0.01);
    }

    #[test]
    fn strong_coupling_average_of_normal_modes() {
        let p = one_d(1e-3, 1.0, 1e-3).with_gamma(1e-5).with_bath_occupation(1e3).unwrap();
        let r = strong_coupling(&p).unwrap();
        assert!(r.n_plus > 5.0);
        assert_relative_eq!(r.n_bar, 0.5 * (r.n_plus + r.n_minus), max_relative = 1e-3);
        assert!(r.n_bar_0 >= r.n_bar);
    }

    #[test]
    fn strong_coupling_regime_errors() {
        assert!(matches!(strong_coupling(&one_d(0.02, 1.1, 0.1)), Err(Error::InvalidRegime(_))));
        assert!(matches!(strong_coupling(&one_d(0.02, 1.0, 0.5)), Err(Error::InvalidRegime(_))));
    }

    #[test]
    fn backaction_reference_point() {
        let r = backaction_1d(&one_d(0.2, 1.0, 0.4)).unwrap();
        assert!((r.xx - 0.9393).abs() < 5e-5);
        assert!((r.pp - 0.5025).abs() < 5e-5);
        assert!((r.n_bar - 0.1870).abs() < 5e-5);
        assert!((r.purity - 0.7278).abs() < 5e-5);
        assert!((r.n_bar_0 - 0.2209).abs() < 5e-5);
        assert!(r.n_bar_0 > r.n_bar);
        assert_relative_eq!(r.purity * (2.0 * r.n_bar + 1.0), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn backaction_weak_limit() {
        let r = backaction_1d(&one_d(0.2, 1.0, 1e-9)).unwrap();
        assert_relative_eq!(r.n_min_weak, 0.0025, max_relative = 1e-14);
        assert_relative_eq!(r.n_bar, 0.0025, max_relative = 1e-9);
        let r = backaction_1d(&one_d(1e-6, 1.0, 1e-9)).unwrap();
        assert!(r.n_bar < 1e-12);
        assert!((1.0 - r.purity) < 1e-12);
    }

    #[test]
    fn backaction_m_omega_reduces_to_bare() {
        let r = backaction_1d(&one_d(0.3, 1.2, 0.0)).unwrap();
        assert_relative_eq!(r.m_omega, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn backaction_instability() {
        let e = backaction_1d(&one_d(0.2, 1.0, 0.51)).unwrap_err();
        assert!(e.is_instability());
        assert!(e.to_string().contains("omega_b^2 <= 2 g_o^2"));
    }

    #[test]
    fn rwa_asymptote() {
        let p = SystemParamsRWA::resonant(1.0, 0.01, 1e-11, 0.05 * 0.01 / 1e-11, 1e3, 0.0);
        let r = rwa_optimum(&p).unwrap();
        assert_relative_eq!(r.purity_approx, 1.0 / 1.2, max_relative = 1e-9);
        let p = SystemParamsRWA::resonant(1.0, 0.01, 1e-9, 0.0, 0.001, 0.0);
        assert_eq!(rwa_optimum(&p).unwrap().purity_approx, 1.0);
        // C_o = 4 n_B
        let n: f64 = 7.0;
        let (kappa, gamma) = (0.01, 1e-6);
        let g_o = (n * kappa * gamma).sqrt();
        let p = SystemParamsRWA::resonant(1.0, kappa, gamma, n, g_o, 0.0);
        let r = rwa_optimum(&p).unwrap();
        assert_relative_eq!(1.0 / r.purity_approx, 2.0 + 4.0 * n * gamma / kappa, max_relative = 1e-12);
        assert_relative_eq!(r.g_m_opt, g_o / 2f64.sqrt(), max_relative = 1e-15);
    }

    fn fig4_point(g_o: f64) -> SystemParams2D {
        SystemParams2D::diagonal_resonant(1.0, g_o / 2f64.sqrt(), 0.2, 1.0, g_o).unwrap()
    }

    #[test]
    fn backaction_2d_reference_point() {
        let r = backaction_2d(&fig4_point(0.2)).unwrap();
        assert!((r.purity_2d - 0.919).abs() < 1e-3, "{}", r.purity_2d);
        assert!((r.purity_product - 0.897).abs() < 1e-3, "{}", r.purity_product);
        assert!((r.x_b_x_d + 0.0938).abs() < 5e-5);
        assert!((r.p_b_p_d - 0.0707).abs() < 5e-5);
    }

    #[test]
    fn p_b_p_d_independent_of_drive() {
        let a = backaction_2d(&SystemParams2D::diagonal_resonant(1.0, 0.1, 0.2, 1.0, 0.2).unwrap()).unwrap();
        let b = backaction_2d(&SystemParams2D::diagonal_resonant(1.0, 0.1, 0.7, 1.0, 0.05).unwrap()).unwrap();
        assert_relative_eq!(a.p_b_p_d, b.p_b_p_d, max_relative = 1e-14);
        assert_relative_eq!(a.p_b_p_d, 2.0 * 0.1 / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn small_coupling_purities_agree() {
        let r = backaction_2d(&fig4_point(0.01)).unwrap();
        assert!(((r.purity_2d - r.purity_product) / r.purity_2d).abs() < 0.01);
    }

    #[test]
    fn undamped_dark_mode() {
        let p = SystemParams2D::new(1.0, 1.0, 0.4, 0.2, 1.0, 0.3);
        assert_eq!(backaction_2d(&p).unwrap_err(), Error::UndampedDarkMode);
        let p = SystemParams2D::new(1.1, 0.9, 0.4, 0.2, 1.0, 0.0);
        assert_eq!(backaction_2d(&p).unwrap_err(), Error::UndampedDarkMode);
    }

    #[test]
    fn backaction_2d_instability() {
        let e = backaction_2d(&fig4_point(0.45)).unwrap_err();
        assert!(e.is_instability());
    }
}
