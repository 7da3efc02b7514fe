//! Parameter records and per-solver output columns.

use optomech::closed_form::bare_phonon_number;
use optomech::langevin::max_real_part;
use optomech::{
    backaction_1d, backaction_2d, build_1d, build_2d, build_rwa, cooperativity, integrate_moments,
    occupation_and_purity_1d, purity_2d_general, rwa_optimum, steady_covariance, strong_coupling,
    weak_coupling, Coupling, Error, FreqGrid, NoiseMode, SystemParams1D, SystemParams2D, SystemParamsRWA,
    Warning,
};

use crate::config::{ModelKind, Params, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

const fn col(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

const ONE_D_CLOSED: [Column; 7] = [
    col("n_bar", "1"),
    col("purity", "1"),
    col("n_bar_0", "1"),
    col("xx", "L^2"),
    col("pp", "P^2"),
    col("m_omega", "P/L"),
    col("n_min_weak", "1"),
];

const ONE_D_LYAPUNOV: [Column; 8] = [
    col("n_bar", "1"),
    col("purity", "1"),
    col("n_bar_0", "1"),
    col("xx", "L^2"),
    col("pp", "P^2"),
    col("xp", "L*P"),
    col("max_re_eig", "omega_ref"),
    col("residual", "1"),
];

const ONE_D_SPECTRAL: [Column; 9] = [
    col("n_bar", "1"),
    col("purity", "1"),
    col("n_bar_0", "1"),
    col("xx", "L^2"),
    col("pp", "P^2"),
    col("xx_err", "L^2"),
    col("pp_err", "P^2"),
    col("commutator", "L*P"),
    col("cutoff", "omega_ref"),
];

const ONE_D_WEAK: [Column; 5] = [
    col("omega_tilde", "omega_ref"),
    col("gamma_tilde", "omega_ref"),
    col("n_bar", "1"),
    col("x_zpf_eff", "L"),
    col("spring_fixed_points", "1"),
];

const ONE_D_STRONG: [Column; 8] = [
    col("omega_plus", "omega_ref"),
    col("omega_minus", "omega_ref"),
    col("kappa_plus", "omega_ref"),
    col("kappa_minus", "omega_ref"),
    col("n_plus", "1"),
    col("n_minus", "1"),
    col("n_bar", "1"),
    col("n_bar_0", "1"),
];

const TWO_D_CLOSED: [Column; 8] = [
    col("purity_2d", "1"),
    col("purity_product", "1"),
    col("xx_b", "L^2"),
    col("xx_d", "L^2"),
    col("pp_b", "P^2"),
    col("pp_d", "P^2"),
    col("x_b_x_d", "L^2"),
    col("p_b_p_d", "P^2"),
];

const TWO_D_LYAPUNOV: [Column; 11] = [
    col("purity_2d", "1"),
    col("purity_product", "1"),
    col("n_plus", "1"),
    col("n_minus", "1"),
    col("xx_b", "L^2"),
    col("xx_d", "L^2"),
    col("pp_b", "P^2"),
    col("pp_d", "P^2"),
    col("x_b_x_d", "L^2"),
    col("p_b_p_d", "P^2"),
    col("max_re_eig", "omega_ref"),
];

const RWA_LYAPUNOV: [Column; 8] = [
    col("purity_2d", "1"),
    col("n_b", "1"),
    col("n_d", "1"),
    col("re_bd", "1"),
    col("im_bd", "1"),
    col("n_plus", "1"),
    col("n_minus", "1"),
    col("max_re_eig", "omega_ref"),
];

const RWA_ASYMPTOTE: [Column; 3] = [
    col("purity_approx", "1"),
    col("g_m_opt", "omega_ref"),
    col("cooperativity", "1"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub values: Vec<f64>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    pub model: ModelKind,
    pub solver: Solver,
    /// Relative quadrature tolerance for the spectral solver.
    pub tolerance: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn get(p: &Params, key: &str, default: f64) -> f64 {
    p.get(key).copied().unwrap_or(default)
}

fn noise_for(gamma: f64) -> NoiseMode {
    if gamma > 0.0 {
        NoiseMode::MarkovianThermal
    } else {
        NoiseMode::VacuumOnly
    }
}

pub fn params_1d(p: &Params) -> Result<SystemParams1D, Error> {
    let omega_b = get(p, "omega_b", 1.0);
    let kappa = get(p, "kappa", 0.2);
    let delta = get(p, "delta", omega_b);
    let mass = get(p, "mass", 1.0);
    let hbar = get(p, "hbar", 1.0);
    if !(mass > 0.0 && hbar > 0.0) {
        return Err(invalid("mass and hbar must be > 0"));
    }
    let mut sp = SystemParams1D::new(omega_b, kappa, delta, Coupling::Rate(get(p, "G_o", 0.0))).with_units(mass, hbar);
    if let Some(&lambda) = p.get("lambda_o") {
        sp.set_coupling(Coupling::Lambda(lambda));
        if let Some(&g) = p.get("G_o") {
            let implied = sp.g_o();
            if (implied - g).abs() > 1e-9 * implied.abs().max(g.abs()) {
                return Err(invalid(format!("lambda_o = {lambda} implies G_o = {implied}, but G_o = {g} was given")));
            }
        }
    }
    sp = sp.with_gamma(get(p, "gamma_b", 0.0));
    match (p.get("n_B"), p.get("kT")) {
        (Some(_), Some(_)) => return Err(invalid("give either n_B or kT, not both")),
        (Some(&n), None) => sp = sp.with_bath_occupation(n)?,
        (None, Some(&kt)) => sp = sp.with_thermal_energy(kt),
        (None, None) => {}
    }
    sp.validate()?;
    Ok(sp)
}

pub fn params_2d(p: &Params) -> Result<SystemParams2D, Error> {
    let kappa = get(p, "kappa", 0.2);
    let mut sp = if let Some(&g_m) = p.get("G_m") {
        for k in ["omega_x", "omega_y", "phi", "lambda_o", "mass", "hbar"] {
            if p.contains_key(k) {
                return Err(invalid(format!("G_m selects the diagonal resonant trap; '{k}' cannot be combined with it")));
            }
        }
        let omega_b = get(p, "omega_b", 1.0);
        SystemParams2D::diagonal_resonant(omega_b, g_m, kappa, get(p, "delta", omega_b), get(p, "G_o", 0.0))?
    } else {
        if p.contains_key("omega_b") {
            return Err(invalid("omega_b is only used together with G_m; give omega_x and omega_y"));
        }
        let mut sp = SystemParams2D::new(
            get(p, "omega_x", 1.0),
            get(p, "omega_y", 1.0),
            get(p, "phi", std::f64::consts::FRAC_PI_4),
            kappa,
            0.0,
            0.0,
        );
        sp.mass = get(p, "mass", 1.0);
        sp.hbar = get(p, "hbar", 1.0);
        sp.validate()?;
        let bd = optomech::bright_dark(&sp);
        sp.delta = get(p, "delta", bd.omega_b);
        sp.lambda_o = match (p.get("lambda_o"), p.get("G_o")) {
            (Some(_), Some(_)) => return Err(invalid("give either lambda_o or G_o, not both")),
            (Some(&l), None) => l,
            (None, g) => g.copied().unwrap_or(0.0) * (2.0 * sp.mass * bd.omega_b / sp.hbar).sqrt(),
        };
        sp
    };
    sp = sp.with_damping(get(p, "gamma_x", 0.0), get(p, "gamma_y", 0.0));
    let omega_bright = optomech::bright_dark(&sp).omega_b;
    match (p.get("n_B"), p.get("kT")) {
        (Some(_), Some(_)) => return Err(invalid("give either n_B or kT, not both")),
        (Some(&n), None) => {
            sp.thermal_energy = optomech::params::thermal_energy_from_occupation(n, omega_bright, sp.hbar)?;
        }
        (None, Some(&kt)) => sp.thermal_energy = kt,
        (None, None) => {}
    }
    sp.validate()?;
    Ok(sp)
}

pub fn params_rwa(p: &Params) -> Result<SystemParamsRWA, Error> {
    let omega = get(p, "omega", 1.0);
    let kappa = get(p, "kappa", 1e-3);
    let mut sp = SystemParamsRWA::resonant(
        omega,
        kappa,
        get(p, "gamma_tot", 1e-9 * kappa),
        get(p, "n_B", 0.0),
        get(p, "G_o", 0.0),
        get(p, "G_m", 0.0),
    );
    sp.omega_d = get(p, "omega_d", omega);
    sp.delta = get(p, "delta", omega);
    sp.validate()?;
    Ok(sp)
}

/// Attach the violated closed-form inequality to a Lyapunov instability.
fn name_condition(e: Error, sp: &SystemParams1D) -> Error {
    match (&e, backaction_1d(sp)) {
        (Error::UnstableSystem { max_real_part }, Err(Error::UnstableRegime(cond))) => {
            Error::UnstableRegime(format!("{cond}; drift eigenvalue real part {max_real_part:e}"))
        }
        _ => e,
    }
}

fn sorted(mut w: Vec<Warning>) -> Vec<Warning> {
    w.sort();
    w.dedup();
    w
}

impl Evaluator {
    pub fn columns(&self) -> &'static [Column] {
        match (self.model, self.solver) {
            (ModelKind::OneD, Solver::ClosedForm) => &ONE_D_CLOSED,
            (ModelKind::OneD, Solver::Lyapunov) => &ONE_D_LYAPUNOV,
            (ModelKind::OneD, Solver::Spectral) => &ONE_D_SPECTRAL,
            (ModelKind::OneD, Solver::Weak) => &ONE_D_WEAK,
            (ModelKind::OneD, Solver::Strong) => &ONE_D_STRONG,
            (ModelKind::TwoD, Solver::ClosedForm) => &TWO_D_CLOSED,
            (ModelKind::TwoD, _) => &TWO_D_LYAPUNOV,
            (ModelKind::Rwa, Solver::Asymptote) => &RWA_ASYMPTOTE,
            (ModelKind::Rwa, _) => &RWA_LYAPUNOV,
            (ModelKind::OneD, Solver::Asymptote) => &[],
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns().iter().position(|c| c.name == name)
    }

    pub fn evaluate(&self, p: &Params) -> Result<Point, Error> {
        let point = match (self.model, self.solver) {
            (ModelKind::OneD, s) => self.eval_1d(s, &params_1d(p)?)?,
            (ModelKind::TwoD, s) => eval_2d(s, &params_2d(p)?)?,
            (ModelKind::Rwa, s) => eval_rwa(s, &params_rwa(p)?)?,
        };
        debug_assert_eq!(point.values.len(), self.columns().len());
        Ok(point)
    }

    fn eval_1d(&self, solver: Solver, sp: &SystemParams1D) -> Result<Point, Error> {
        let bare = |xx: f64, pp: f64| bare_phonon_number(xx, pp, sp.omega_b, sp.mass, sp.hbar);
        match solver {
            Solver::ClosedForm => {
                let r = backaction_1d(sp)?;
                Ok(Point {
                    values: vec![r.n_bar, r.purity, r.n_bar_0, r.xx, r.pp, r.m_omega, r.n_min_weak],
                    warnings: Vec::new(),
                })
            }
            Solver::Lyapunov => {
                let sys = build_1d(sp, noise_for(sp.gamma_b))?;
                let cov = steady_covariance(&sys).map_err(|e| name_condition(e, sp))?;
                let m = cov.mode(0);
                let (n, mu) = occupation_and_purity_1d(&m)?;
                Ok(Point {
                    values: vec![n, mu, bare(m.xx, m.pp), m.xx, m.pp, m.xp, max_real_part(&sys), cov.relative_residual],
                    warnings: sys.warnings.clone(),
                })
            }
            Solver::Spectral => {
                let grid = self.tolerance.map(FreqGrid::with_rel_tol).unwrap_or_default();
                let s = integrate_moments(sp, &grid)?;
                let (n, mu) = occupation_and_purity_1d(&s.cov)?;
                Ok(Point {
                    values: vec![
                        n,
                        mu,
                        bare(s.cov.xx, s.cov.pp),
                        s.cov.xx,
                        s.cov.pp,
                        s.xx_error,
                        s.pp_error,
                        s.commutator,
                        s.cutoff,
                    ],
                    warnings: Vec::new(),
                })
            }
            Solver::Weak => {
                let r = weak_coupling(sp)?;
                Ok(Point {
                    values: vec![
                        r.omega_tilde,
                        r.gamma_tilde,
                        r.n_bar,
                        r.x_zpf_eff,
                        r.fixed_points.len() as f64,
                    ],
                    warnings: sorted(r.warnings),
                })
            }
            Solver::Strong => {
                let r = strong_coupling(sp)?;
                Ok(Point {
                    values: vec![
                        r.omega_plus,
                        r.omega_minus,
                        r.kappa_plus,
                        r.kappa_minus,
                        r.n_plus,
                        r.n_minus,
                        r.n_bar,
                        r.n_bar_0,
                    ],
                    warnings: sorted(r.warnings),
                })
            }
            Solver::Asymptote => Err(invalid("asymptote solver needs the rwa model")),
        }
    }
}

fn eval_2d(solver: Solver, sp: &SystemParams2D) -> Result<Point, Error> {
    if solver == Solver::ClosedForm {
        let r = backaction_2d(sp)?;
        return Ok(Point {
            values: vec![r.purity_2d, r.purity_product, r.xx_b, r.xx_d, r.pp_b, r.pp_d, r.x_b_x_d, r.p_b_p_d],
            warnings: Vec::new(),
        });
    }
    let sys = build_2d(sp, noise_for(sp.gamma_x.max(sp.gamma_y)))?;
    let cov = steady_covariance(&sys)?;
    let s = purity_2d_general(&cov.two_mode(0, 2, "bright/dark")?)?;
    let v = |a: &str, b: &str| cov.get(a, b).unwrap_or(f64::NAN);
    Ok(Point {
        values: vec![
            s.purity_2d,
            s.purity_product_1d,
            s.n_plus,
            s.n_minus,
            v("x_b", "x_b"),
            v("x_d", "x_d"),
            v("p_b", "p_b"),
            v("p_d", "p_d"),
            v("x_b", "x_d"),
            v("p_b", "p_d"),
            max_real_part(&sys),
        ],
        warnings: sys.warnings.clone(),
    })
}

fn eval_rwa(solver: Solver, sp: &SystemParamsRWA) -> Result<Point, Error> {
    if solver == Solver::Asymptote {
        let r = rwa_optimum(sp)?;
        let c = cooperativity(sp).unwrap_or(f64::INFINITY);
        return Ok(Point {
            values: vec![r.purity_approx, r.g_m_opt, c],
            warnings: sorted(r.warnings),
        });
    }
    let sys = build_rwa(sp)?;
    let cov = steady_covariance(&sys)?;
    let s = purity_2d_general(&cov.two_mode(2, 4, "bright/dark RWA")?)?;
    let v = |a: &str, b: &str| cov.get(a, b).unwrap_or(f64::NAN);
    let occ = |x: &str, p: &str| 0.5 * (v(x, x) + v(p, p) - 1.0);
    Ok(Point {
        values: vec![
            s.purity_2d,
            occ("X_b", "P_b"),
            occ("X_d", "P_d"),
            0.5 * (v("X_b", "X_d") + v("P_b", "P_d")),
            0.5 * (v("X_b", "P_d") - v("P_b", "X_d")),
            s.n_plus,
            s.n_minus,
            max_real_part(&sys),
        ],
        warnings: sys.warnings.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn solvers_agree_at_reference_point() {
        let p = params(&[("G_o", 0.4)]);
        let cf = Evaluator { model: ModelKind::OneD, solver: Solver::ClosedForm, tolerance: None };
        let ly = Evaluator { solver: Solver::Lyapunov, ..cf };
        let a = cf.evaluate(&p).unwrap();
        let b = ly.evaluate(&p).unwrap();
        assert!((a.values[0] - 0.1870).abs() < 1e-4);
        assert!((a.values[0] - b.values[0]).abs() < 1e-10);
        assert!((a.values[2] - b.values[2]).abs() < 1e-10);
    }

    #[test]
    fn two_d_solvers_agree() {
        let p = params(&[("G_o", 0.2), ("G_m", 0.2 / 2f64.sqrt())]);
        let cf = Evaluator { model: ModelKind::TwoD, solver: Solver::ClosedForm, tolerance: None };
        let ly = Evaluator { solver: Solver::Lyapunov, ..cf };
        let a = cf.evaluate(&p).unwrap();
        let b = ly.evaluate(&p).unwrap();
        assert!((a.values[0] - b.values[0]).abs() < 1e-9);
        assert!((a.values[1] - b.values[1]).abs() < 1e-9);
    }

    #[test]
    fn conflicting_couplings_rejected() {
        let p = params(&[("G_o", 0.4), ("lambda_o", 0.1)]);
        assert!(matches!(params_1d(&p), Err(Error::InvalidParams(_))));
        assert!(params_2d(&params(&[("G_m", 0.1), ("phi", 0.3)])).is_err());
    }
}
