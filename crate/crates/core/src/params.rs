//! Physical parameter records and the derived mode quantities.
//!
//! All quantities are expressed in a single consistent unit system. The
//! default is the dimensionless frame `hbar = m = 1` with frequencies in
//! units of a reference frequency; SI values work just as well as long as
//! every field uses them. Temperature enters as the thermal energy `k_B T`
//! in the same energy unit as `hbar * omega`.

use crate::error::{Error, Result};

/// Boltzmann constant in J/K.
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;
/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Thermal energy `k_B T` for a temperature in kelvin, in joules.
pub fn thermal_energy_from_kelvin(kelvin: f64) -> f64 {
    BOLTZMANN_SI * kelvin
}

/// Thermal energy for which the Bose occupation at `omega` equals `n`.
pub fn thermal_energy_from_occupation(n: f64, omega: f64, hbar: f64) -> Result<f64> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::InvalidParams(format!("occupation must be >= 0, got {n}")));
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidParams(format!("omega must be > 0, got {omega}")));
    }
    if n == 0.0 {
        return Ok(0.0);
    }
    Ok(hbar * omega / (1.0 / n).ln_1p())
}

/// Bose-Einstein occupation `1 / (exp(hbar omega / kT) - 1)`.
pub fn planck(omega: f64, thermal_energy: f64, hbar: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParams(format!(
            "Planck occupation needs omega > 0, got {omega}"
        )));
    }
    if thermal_energy <= 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (hbar * omega / thermal_energy).exp_m1())
}

/// How the optomechanical coupling is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Force gradient per photon quadrature, `lambda_o`.
    Lambda(f64),
    /// Drive-enhanced coupling rate `G_o = lambda_o sqrt(hbar / 2 m omega)`.
    Rate(f64),
}

fn lambda_from_rate(g_o: f64, omega: f64, mass: f64, hbar: f64) -> f64 {
    g_o * (2.0 * mass * omega / hbar).sqrt()
}

fn rate_from_lambda(lambda_o: f64, omega: f64, mass: f64, hbar: f64) -> f64 {
    lambda_o * (hbar / (2.0 * mass * omega)).sqrt()
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")))
    }
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")))
    }
}

/// A single mechanical mode coupled to one cavity mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams1D {
    pub omega_b: f64,
    pub gamma_b: f64,
    pub kappa: f64,
    pub delta: f64,
    pub lambda_o: f64,
    pub mass: f64,
    pub hbar: f64,
    /// `k_B T` of the mechanical bath.
    pub thermal_energy: f64,
}

impl SystemParams1D {
    /// Dimensionless parameters (`hbar = m = 1`), zero temperature, no
    /// intrinsic damping.
    pub fn new(omega_b: f64, kappa: f64, delta: f64, coupling: Coupling) -> Self {
        let mut p = SystemParams1D {
            omega_b,
            gamma_b: 0.0,
            kappa,
            delta,
            lambda_o: 0.0,
            mass: 1.0,
            hbar: 1.0,
            thermal_energy: 0.0,
        };
        p.set_coupling(coupling);
        p
    }

    /// Build from both `lambda_o` and `G_o`, which must agree to 1e-9.
    pub fn with_both_couplings(
        omega_b: f64,
        kappa: f64,
        delta: f64,
        lambda_o: f64,
        g_o: f64,
    ) -> Result<Self> {
        let p = Self::new(omega_b, kappa, delta, Coupling::Lambda(lambda_o));
        let implied = p.g_o();
        if (implied - g_o).abs() > 1e-9 * implied.abs().max(g_o.abs()) {
            return Err(Error::InvalidParams(format!(
                "lambda_o = {lambda_o} implies G_o = {implied}, but G_o = {g_o} was given"
            )));
        }
        Ok(p)
    }

    pub fn set_coupling(&mut self, coupling: Coupling) {
        self.lambda_o = match coupling {
            Coupling::Lambda(l) => l,
            Coupling::Rate(g) => lambda_from_rate(g, self.omega_b, self.mass, self.hbar),
        };
    }

    pub fn with_gamma(mut self, gamma_b: f64) -> Self {
        self.gamma_b = gamma_b;
        self
    }

    pub fn with_thermal_energy(mut self, kt: f64) -> Self {
        self.thermal_energy = kt;
        self
    }

    /// Set the bath temperature through its occupation at `omega_b`.
    pub fn with_bath_occupation(mut self, n: f64) -> Result<Self> {
        self.thermal_energy = thermal_energy_from_occupation(n, self.omega_b, self.hbar)?;
        Ok(self)
    }

    /// Change mass and hbar while keeping `G_o` fixed.
    pub fn with_units(mut self, mass: f64, hbar: f64) -> Self {
        let g = self.g_o();
        self.mass = mass;
        self.hbar = hbar;
        self.set_coupling(Coupling::Rate(g));
        self
    }

    pub fn g_o(&self) -> f64 {
        rate_from_lambda(self.lambda_o, self.omega_b, self.mass, self.hbar)
    }

    /// Bath occupation at the bare mechanical frequency.
    pub fn bath_occupation(&self) -> f64 {
        planck(self.omega_b, self.thermal_energy, self.hbar).unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("omega_b", self.omega_b)?;
        check_positive("kappa", self.kappa)?;
        check_non_negative("gamma_b", self.gamma_b)?;
        check_non_negative("lambda_o", self.lambda_o)?;
        check_positive("mass", self.mass)?;
        check_positive("hbar", self.hbar)?;
        check_non_negative("thermal_energy", self.thermal_energy)?;
        if !self.delta.is_finite() {
            return Err(Error::InvalidParams("delta must be finite".into()));
        }
        Ok(())
    }
}

/// Effective 1D optomechanical coupling `g_o^2 = 2 G_o^2 Delta omega_b / ((kappa/2)^2 + Delta^2)`.
pub fn g_o_squared(p: &SystemParams1D) -> f64 {
    p.hbar * p.lambda_o * p.lambda_o * p.delta
        / (p.mass * (0.25 * p.kappa * p.kappa + p.delta * p.delta))
}

/// A two-dimensional oscillator in a trap with principal axes (x, y); the
/// cavity axis is rotated by `phi` from x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams2D {
    pub omega_x: f64,
    pub omega_y: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub phi: f64,
    pub kappa: f64,
    pub delta: f64,
    pub lambda_o: f64,
    pub mass: f64,
    pub hbar: f64,
    pub thermal_energy: f64,
}

impl SystemParams2D {
    pub fn new(omega_x: f64, omega_y: f64, phi: f64, kappa: f64, delta: f64, lambda_o: f64) -> Self {
        SystemParams2D {
            omega_x,
            omega_y,
            gamma_x: 0.0,
            gamma_y: 0.0,
            phi,
            kappa,
            delta,
            lambda_o,
            mass: 1.0,
            hbar: 1.0,
            thermal_energy: 0.0,
        }
    }

    /// Trap at `phi = pi/4` with degenerate bright and dark frequencies
    /// `omega_b = omega_d` and bright-dark coupling rate `g_m`; the
    /// optomechanical coupling is set through `G_o`.
    pub fn diagonal_resonant(omega_b: f64, g_m: f64, kappa: f64, delta: f64, g_o: f64) -> Result<Self> {
        check_positive("omega_b", omega_b)?;
        check_non_negative("g_m", g_m)?;
        if 2.0 * g_m >= omega_b {
            return Err(Error::InvalidParams(format!(
                "diagonal trap needs 2 G_m < omega_b, got G_m = {g_m}, omega_b = {omega_b}"
            )));
        }
        let omega_x = (omega_b * omega_b + 2.0 * g_m * omega_b).sqrt();
        let omega_y = (omega_b * omega_b - 2.0 * g_m * omega_b).sqrt();
        let lambda_o = lambda_from_rate(g_o, omega_b, 1.0, 1.0);
        Ok(Self::new(
            omega_x,
            omega_y,
            std::f64::consts::FRAC_PI_4,
            kappa,
            delta,
            lambda_o,
        ))
    }

    pub fn with_damping(mut self, gamma_x: f64, gamma_y: f64) -> Self {
        self.gamma_x = gamma_x;
        self.gamma_y = gamma_y;
        self
    }

    pub fn with_thermal_energy(mut self, kt: f64) -> Self {
        self.thermal_energy = kt;
        self
    }

    /// `G_o` relative to the bright-mode frequency.
    pub fn g_o(&self) -> f64 {
        let bd = bright_dark(self);
        rate_from_lambda(self.lambda_o, bd.omega_b, self.mass, self.hbar)
    }

    /// The 1D problem of the bright mode alone, ignoring bright-dark coupling.
    pub fn bright_mode_1d(&self) -> SystemParams1D {
        let bd = bright_dark(self);
        SystemParams1D {
            omega_b: bd.omega_b,
            gamma_b: bd.gamma_b,
            kappa: self.kappa,
            delta: self.delta,
            lambda_o: self.lambda_o,
            mass: self.mass,
            hbar: self.hbar,
            thermal_energy: self.thermal_energy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("omega_x", self.omega_x)?;
        check_positive("omega_y", self.omega_y)?;
        check_non_negative("gamma_x", self.gamma_x)?;
        check_non_negative("gamma_y", self.gamma_y)?;
        check_positive("kappa", self.kappa)?;
        check_non_negative("lambda_o", self.lambda_o)?;
        check_positive("mass", self.mass)?;
        check_positive("hbar", self.hbar)?;
        check_non_negative("thermal_energy", self.thermal_energy)?;
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.phi) {
            return Err(Error::InvalidParams(format!(
                "phi must lie in [0, pi/2], got {}",
                self.phi
            )));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParams("delta must be finite".into()));
        }
        Ok(())
    }
}

/// Bright/dark mode frequencies, rates and couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrightDark {
    pub omega_b: f64,
    pub omega_d: f64,
    pub gamma_b: f64,
    pub gamma_d: f64,
    pub delta_m: f64,
    pub eta_m: f64,
    pub omega_bar_m: f64,
    pub g_m: f64,
}

/// Rotate the trap description into the bright/dark frame.
pub fn bright_dark(p: &SystemParams2D) -> BrightDark {
    let (s, c) = p.phi.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let sin2phi = (2.0 * p.phi).sin();
    let wx2 = p.omega_x * p.omega_x;
    let wy2 = p.omega_y * p.omega_y;
    let omega_b = (c2 * wx2 + s2 * wy2).sqrt();
    let omega_d = (s2 * wx2 + c2 * wy2).sqrt();
    let omega_bar_m = 0.5 * (p.omega_x + p.omega_y);
    let delta_m = (p.omega_x - p.omega_y) * sin2phi;
    BrightDark {
        omega_b,
        omega_d,
        gamma_b: c2 * p.gamma_x + s2 * p.gamma_y,
        gamma_d: s2 * p.gamma_x + c2 * p.gamma_y,
        delta_m,
        eta_m: 0.5 * (p.gamma_x - p.gamma_y) * sin2phi,
        omega_bar_m,
        g_m: omega_bar_m * delta_m / (2.0 * (omega_b * omega_d).sqrt()),
    }
}

/// Parameters of the rotating-wave three-mode model (cavity, bright and
/// dark phonon modes). Bath occupations are given directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParamsRWA {
    pub omega_b: f64,
    pub omega_d: f64,
    pub gamma_b: f64,
    pub gamma_d: f64,
    pub kappa: f64,
    pub delta: f64,
    pub g_o: f64,
    pub g_m: f64,
    pub n_th_b: f64,
    pub n_th_d: f64,
}

impl SystemParamsRWA {
    /// Fully resonant configuration `Delta = omega_b = omega_d` with equal
    /// bright and dark damping `gamma_tot / 2` and a common bath occupation.
    pub fn resonant(omega: f64, kappa: f64, gamma_tot: f64, n_th: f64, g_o: f64, g_m: f64) -> Self {
        SystemParamsRWA {
            omega_b: omega,
            omega_d: omega,
            gamma_b: 0.5 * gamma_tot,
            gamma_d: 0.5 * gamma_tot,
            kappa,
            delta: omega,
            g_o,
            g_m,
            n_th_b: n_th,
            n_th_d: n_th,
        }
    }

    pub fn gamma_tot(&self) -> f64 {
        self.gamma_b + self.gamma_d
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("kappa", self.kappa)?;
        check_non_negative("omega_b", self.omega_b)?;
        check_non_negative("omega_d", self.omega_d)?;
        check_non_negative("gamma_b", self.gamma_b)?;
        check_non_negative("gamma_d", self.gamma_d)?;
        check_non_negative("g_o", self.g_o)?;
        check_non_negative("g_m", self.g_m)?;
        check_non_negative("n_th_b", self.n_th_b)?;
        check_non_negative("n_th_d", self.n_th_d)?;
        if !self.delta.is_finite() {
            return Err(Error::InvalidParams("delta must be finite".into()));
        }
        Ok(())
    }
}

/// Optomechanical cooperativity `4 G_o^2 / (kappa gamma_tot)`.
pub fn cooperativity(p: &SystemParamsRWA) -> Result<f64> {
    check_positive("kappa", p.kappa)?;
    check_positive("gamma_tot", p.gamma_tot())?;
    Ok(4.0 * p.g_o * p.g_o / (p.kappa * p.gamma_tot()))
}
