//! Cross-solver validation suite.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use optomech::closed_form::bare_phonon_number;
use optomech::optimize::{maximize, SearchOptions};
use optomech::{
    backaction_1d, backaction_2d, build_1d, build_2d, build_rwa, integrate_moments, occupation_and_purity_1d,
    purity_2d_general, purity_2d_reduced, residue_moments, rwa_optimum, stability, steady_covariance,
    strong_coupling, weak_coupling, Coupling, Cov1D, Error, FreqGrid, LinearSystem, NoiseMode, SystemParams1D,
    SystemParams2D, SystemParamsRWA,
};

use crate::figure::fig3_params;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub note: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

/// Test hook: scales the diffusion matrix of the Lyapunov solves used by the
/// Lyapunov-vs-closed-form check by `1 + perturb_diffusion`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Hooks {
    pub perturb_diffusion: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

struct Acc {
    worst: f64,
    cases: usize,
}

impl Acc {
    fn new() -> Self {
        Acc { worst: 0.0, cases: 0 }
    }
    fn add(&mut self, e: f64) {
        // NaN counts as a failure
        self.worst = if e.is_nan() { f64::INFINITY } else { self.worst.max(e) };
    }
    fn case(&mut self) {
        self.cases += 1;
    }
    fn fail(&mut self) {
        self.worst = f64::INFINITY;
    }
    fn finish(self, name: &'static str, tolerance: f64, note: impl Into<String>) -> CheckResult {
        CheckResult {
            name,
            max_error: self.worst,
            tolerance,
            cases: self.cases,
            note: note.into(),
        }
    }
}

fn grid_1d() -> Vec<SystemParams1D> {
    let mut out = Vec::new();
    for &delta in &[0.5, 1.0, 2.0] {
        for &kappa in &[0.05, 0.2, 1.0] {
            for &g in &[0.02, 0.1, 0.3] {
                out.push(SystemParams1D::new(1.0, kappa, delta, Coupling::Rate(g)));
            }
        }
    }
    out
}

fn lyapunov_mode(sys: &LinearSystem) -> Result<Cov1D, Error> {
    Ok(steady_covariance(sys)?.mode(0))
}

fn lyapunov_vs_closed_form_1d(h: Hooks) -> CheckResult {
    let mut acc = Acc::new();
    for p in grid_1d() {
        let mut sys = build_1d(&p, NoiseMode::VacuumOnly).expect("valid grid");
        if h.perturb_diffusion != 0.0 {
            sys.diffusion *= 1.0 + h.perturb_diffusion;
        }
        match (backaction_1d(&p), lyapunov_mode(&sys)) {
            (Ok(cf), Ok(m)) => {
                let (n, _) = occupation_and_purity_1d(&m).unwrap_or((f64::NAN, f64::NAN));
                acc.add(rel(cf.xx, m.xx));
                acc.add(rel(cf.pp, m.pp));
                acc.add(rel(cf.n_bar, n));
                acc.add(rel(cf.n_bar_0, bare_phonon_number(m.xx, m.pp, p.omega_b, p.mass, p.hbar)));
            }
            (Err(a), Err(b)) if a.is_instability() && b.is_instability() => {}
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("lyapunov_vs_closed_form_1d", 1e-9, "xx, pp, n_bar, n_bar_0 over Delta x kappa x G_o")
}

fn residues_vs_lyapunov_1d() -> CheckResult {
    let mut acc = Acc::new();
    for p in grid_1d() {
        let sys = build_1d(&p, NoiseMode::VacuumOnly).expect("valid grid");
        match (residue_moments(&p), lyapunov_mode(&sys)) {
            (Ok(r), Ok(m)) => {
                acc.add(rel(r.xx, m.xx));
                acc.add(rel(r.pp, m.pp));
            }
            (Err(a), Err(b)) if a.is_instability() && b.is_instability() => {}
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("residues_vs_lyapunov_1d", 1e-9, "pole-sum moments")
}

fn spectral_vs_lyapunov_1d() -> CheckResult {
    let mut acc = Acc::new();
    for &(kappa, g) in &[(0.2, 0.05), (0.2, 0.2), (0.2, 0.4), (1.0, 0.3)] {
        let p = SystemParams1D::new(1.0, kappa, 1.0, Coupling::Rate(g));
        let sys = build_1d(&p, NoiseMode::VacuumOnly).expect("valid");
        match (integrate_moments(&p, &FreqGrid::with_rel_tol(1e-10)), lyapunov_mode(&sys)) {
            (Ok(s), Ok(m)) => {
                acc.add(rel(s.cov.xx, m.xx));
                acc.add(rel(s.cov.pp, m.pp));
            }
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("spectral_vs_lyapunov_1d", 1e-7, "frequency integration of S_xx")
}

fn thermal_oscillator() -> CheckResult {
    let mut acc = Acc::new();
    for &n_b in &[0.0, 0.3, 3.0, 100.0] {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(0.0))
            .with_gamma(0.01)
            .with_bath_occupation(n_b)
            .expect("valid");
        match build_1d(&p, NoiseMode::MarkovianThermal).and_then(|s| lyapunov_mode(&s)) {
            Ok(m) => match occupation_and_purity_1d(&m) {
                Ok((n, _)) => acc.add((n - n_b).abs() / n_b.max(1.0)),
                Err(_) => acc.fail(),
            },
            Err(_) => acc.fail(),
        }
        acc.case();
    }
    acc.finish("thermal_oscillator", 1e-10, "uncoupled oscillator reaches the bath occupation")
}

fn states_2d() -> Vec<SystemParams2D> {
    let mut out = Vec::new();
    for &g in &[0.05, 0.2, 0.3] {
        out.push(SystemParams2D::diagonal_resonant(1.0, g / SQRT_2, 0.2, 1.0, g).expect("valid"));
    }
    out.push(SystemParams2D::new(1.1, 0.9, 0.6, 0.2, 1.0, 0.3));
    out.push(SystemParams2D::new(1.2, 0.8, FRAC_PI_4, 0.5, 1.1, 0.2));
    out
}

fn closed_form_vs_lyapunov_2d() -> CheckResult {
    let mut acc = Acc::new();
    for p in states_2d() {
        let ly = build_2d(&p, NoiseMode::VacuumOnly).and_then(|s| steady_covariance(&s));
        match (backaction_2d(&p), ly) {
            (Ok(cf), Ok(c)) => {
                let v = |a: &str, b: &str| c.get(a, b).unwrap_or(f64::NAN);
                let scale = v("x_b", "x_b").abs().max(v("p_b", "p_b").abs());
                for (x, y) in [
                    (cf.xx_b, v("x_b", "x_b")),
                    (cf.xx_d, v("x_d", "x_d")),
                    (cf.pp_b, v("p_b", "p_b")),
                    (cf.pp_d, v("p_d", "p_d")),
                    (cf.x_b_x_d, v("x_b", "x_d")),
                    (cf.p_b_p_d, v("p_b", "p_d")),
                ] {
                    acc.add((x - y).abs() / scale);
                }
            }
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("closed_form_vs_lyapunov_2d", 1e-8, "six bright/dark moments, phi = pi/4 and 0.6")
}

fn purity_forms() -> (CheckResult, CheckResult) {
    let mut symp = Acc::new();
    let mut red = Acc::new();
    let mut covs = Vec::new();
    for p in states_2d() {
        if let Ok(c) = build_2d(&p, NoiseMode::VacuumOnly).and_then(|s| steady_covariance(&s)) {
            let diagonal = (p.phi - FRAC_PI_4).abs() < 1e-15;
            covs.push((c.two_mode(0, 2, "bright/dark"), diagonal));
        } else {
            symp.fail();
        }
    }
    for &(a, b) in &[(0.5, 0.3), (2.0, 1.4), (5.0, 3.5)] {
        let p = fig3_params(a * 1e-3, b * 1e-3);
        match build_rwa(&p).and_then(|s| steady_covariance(&s)) {
            Ok(c) => covs.push((c.two_mode(2, 4, "bright/dark RWA"), true)),
            Err(_) => symp.fail(),
        }
    }
    for (cov, reduced_applies) in covs {
        let Ok(cov) = cov else {
            symp.fail();
            continue;
        };
        match purity_2d_general(&cov) {
            Ok(s) => {
                let from_nu = 1.0 / ((2.0 * s.n_plus + 1.0) * (2.0 * s.n_minus + 1.0));
                symp.add(rel(from_nu, s.purity_2d));
                if reduced_applies {
                    match purity_2d_reduced(&cov) {
                        Ok(r) => red.add(rel(r, s.purity_2d)),
                        Err(_) => red.fail(),
                    }
                    red.case();
                }
            }
            Err(_) => symp.fail(),
        }
        symp.case();
    }
    (
        symp.finish("symplectic_vs_determinant_purity", 1e-10, "symplectic eigenvalues vs det V"),
        red.finish("reduced_vs_general_purity_2d", 1e-10, "aggregate formula vs general"),
    )
}

fn rwa_vs_full_2d() -> CheckResult {
    let mut acc = Acc::new();
    let kappa = 1e-3;
    for &g in &[2e-3, 5e-3, 1e-2] {
        let full = SystemParams2D::diagonal_resonant(1.0, g / SQRT_2, kappa, 1.0, g)
            .and_then(|p| build_2d(&p, NoiseMode::VacuumOnly))
            .and_then(|s| steady_covariance(&s))
            .and_then(|c| purity_2d_general(&c.two_mode(0, 2, "bright/dark")?));
        let rwa = build_rwa(&SystemParamsRWA::resonant(1.0, kappa, 0.0, 0.0, g, g / SQRT_2))
            .and_then(|s| steady_covariance(&s))
            .and_then(|c| purity_2d_general(&c.two_mode(2, 4, "bright/dark RWA")?));
        match (full, rwa) {
            (Ok(a), Ok(b)) => acc.add(rel(a.purity_2d, b.purity_2d)),
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("rwa_vs_full_2d", 1e-2, "mu_2D, kappa = 1e-3 omega_b")
}

fn weak_coupling_vs_exact() -> CheckResult {
    let mut acc = Acc::new();
    for &g in &[0.001, 0.002, 0.005] {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(g))
            .with_gamma(1e-6)
            .with_bath_occupation(10.0)
            .expect("valid");
        let exact = build_1d(&p, NoiseMode::MarkovianThermal)
            .and_then(|s| lyapunov_mode(&s))
            .and_then(|m| occupation_and_purity_1d(&m));
        match (weak_coupling(&p), exact) {
            (Ok(w), Ok((n, _))) => acc.add(rel(w.n_bar, n)),
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("weak_coupling_vs_exact", 1e-2, "n_B = 10, G_o / kappa <= 0.025")
}

fn strong_coupling_vs_exact() -> CheckResult {
    let mut acc = Acc::new();
    for &(kappa, g) in &[(0.002, 0.1), (0.002, 0.2)] {
        let p = SystemParams1D::new(1.0, kappa, 1.0, Coupling::Rate(g));
        match (strong_coupling(&p), backaction_1d(&p)) {
            (Ok(s), Ok(e)) => {
                acc.add(rel(s.n_bar, e.n_bar));
                acc.add(rel(s.n_bar_0, e.n_bar_0));
            }
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("strong_coupling_vs_exact", 1e-3, "kappa << G_o << omega_b")
}

fn stability_boundary() -> CheckResult {
    let mut acc = Acc::new();
    let step = 1e-3;
    for &(kappa, delta) in &[(0.2f64, 1.0f64), (1.0, 1.0), (0.1, 0.6), (0.5, 2.0)] {
        let g_c: f64 = ((0.25 * kappa * kappa + delta * delta) / (4.0 * delta)).sqrt();
        let n = (2.0 * g_c / step) as usize;
        let flags: Vec<bool> = (1..=n)
            .map(|i| {
                let p = SystemParams1D::new(1.0, kappa, delta, Coupling::Rate(i as f64 * step));
                build_1d(&p, NoiseMode::VacuumOnly).map(|s| stability(&s)).unwrap_or(false)
            })
            .collect();
        match flags.iter().position(|s| !s) {
            Some(flip) if flags[flip..].iter().all(|s| !s) => {
                acc.add((((flip + 1) as f64 * step - g_c) / step).abs());
            }
            _ => acc.fail(),
        }
        acc.case();
    }
    acc.finish("stability_boundary", 1.0, "grid cells between the flag flip and omega_b^2 = 2 g_o^2")
}

fn rwa_optimum_location() -> CheckResult {
    let mut acc = Acc::new();
    let kappa = 1e-3;
    for &ratio in &[2.0, 5.0] {
        let g_o = ratio * kappa;
        let f = |x: &[f64]| {
            let p = fig3_params(g_o, x[0]);
            let c = steady_covariance(&build_rwa(&p).ok()?).ok()?;
            purity_2d_general(&c.two_mode(2, 4, "rwa").ok()?).ok().map(|s| s.purity_2d)
        };
        match maximize(f, &[(0.05 * g_o, 1.5 * g_o)], &SearchOptions::default()) {
            Ok(m) => {
                acc.add(rel(m.x[0], g_o / SQRT_2));
                let predicted = rwa_optimum(&fig3_params(g_o, m.x[0])).map(|r| r.g_m_opt);
                if predicted.map(|g| rel(g, g_o / SQRT_2) > 1e-12).unwrap_or(true) {
                    acc.fail();
                }
            }
            Err(_) => acc.fail(),
        }
        acc.case();
    }
    acc.finish("rwa_optimum_location", 0.05, "argmax over G_m vs G_o / sqrt 2")
}

fn sideband_monotone() -> CheckResult {
    let mut acc = Acc::new();
    for i in 1..=90 {
        let p = SystemParams1D::new(1.0, 0.2, 1.0, Coupling::Rate(0.005 * i as f64));
        match backaction_1d(&p) {
            Ok(r) => acc.add(((r.n_bar - r.n_bar_0) / r.n_bar).max(0.0)),
            Err(_) => acc.fail(),
        }
        acc.case();
    }
    acc.finish("bare_number_exceeds_occupation", 0.0, "n_bar_0 >= n_bar on (0, 0.45]")
}

pub fn run(hooks: Hooks) -> Vec<CheckResult> {
    let (symp, red) = purity_forms();
    vec![
        lyapunov_vs_closed_form_1d(hooks),
        residues_vs_lyapunov_1d(),
        spectral_vs_lyapunov_1d(),
        thermal_oscillator(),
        closed_form_vs_lyapunov_2d(),
        symp,
        red,
        rwa_vs_full_2d(),
        weak_coupling_vs_exact(),
        strong_coupling_vs_exact(),
        stability_boundary(),
        rwa_optimum_location(),
        sideband_monotone(),
    ]
}

pub fn render(results: &[CheckResult]) -> String {
    let mut out = format!("{:<34} {:>6} {:>12} {:>10}  {}\n", "check", "cases", "max error", "tolerance", "result");
    for r in results {
        out.push_str(&format!(
            "{:<34} {:>6} {:>12.3e} {:>10.1e}  {}  ({})\n",
            r.name,
            r.cases,
            r.max_error,
            r.tolerance,
            if r.passed() { "PASS" } else { "FAIL" },
            r.note
        ));
    }
    out
}
