//! Figure reproduction: CSV data, a gnuplot script, and an oracle check of
//! every plotted curve before anything is written.

use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use optomech::closed_form::bare_phonon_number;
use optomech::{
    backaction_1d, backaction_2d, build_1d, build_2d, build_rwa, occupation_and_purity_1d, purity_2d_general,
    purity_2d_reduced, rwa_optimum, steady_covariance, strong_coupling, Coupling, NoiseMode, SystemParams1D,
    SystemParams2D, SystemParamsRWA,
};

use crate::csv::{num, write_atomic, Table};
use crate::error::{CliError, CliResult};
use crate::sweep::{with_pool, Axis, Scale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
}

pub const DEFAULT_ORACLE_TOL: f64 = 1e-8;

pub const FIG2_KAPPA: f64 = 0.2;
pub const FIG2_POINTS: usize = 200;
pub const FIG3_KAPPA: f64 = 1e-3;
pub const FIG3_GAMMA_OVER_KAPPA: f64 = 1e-9;
pub const FIG3_HEAT_OVER_KAPPA: f64 = 0.05;
pub const FIG3_POINTS: usize = 50;
pub const FIG4_KAPPA: f64 = 0.2;
pub const FIG4_POINTS: usize = 80;

/// Files written by one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
    pub max_oracle_error: f64,
}

struct Oracle {
    tol: f64,
    worst: f64,
}

impl Oracle {
    fn new(tol: f64) -> Self {
        Oracle { tol, worst: 0.0 }
    }

    fn check(&mut self, what: &str, at: f64, value: f64, reference: f64) -> CliResult<()> {
        let scale = value.abs().max(reference.abs()).max(1e-300);
        let err = (value - reference).abs() / scale;
        self.worst = self.worst.max(err);
        if !(err <= self.tol) {
            return Err(CliError::Oracle(format!(
                "{what} at {at}: {value} vs oracle {reference} (relative {err:e} > {:e})",
                self.tol
            )));
        }
        Ok(())
    }
}

pub fn run(id: FigureId, out_dir: &Path, tol: Option<f64>, jobs: Option<usize>) -> CliResult<FigureOutput> {
    std::fs::create_dir_all(out_dir)?;
    let mut oracle = Oracle::new(tol.unwrap_or(DEFAULT_ORACLE_TOL));
    let outputs: Vec<(&str, String)> = match id {
        FigureId::Fig2 => fig2(&mut oracle)?,
        FigureId::Fig3 => fig3(&mut oracle, jobs)?,
        FigureId::Fig4 => fig4(&mut oracle)?,
    };
    let mut files = Vec::new();
    for (name, content) in outputs {
        let path = out_dir.join(name);
        write_atomic(&path, &content)?;
        files.push(path);
    }
    Ok(FigureOutput {
        files,
        max_oracle_error: oracle.worst,
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    Axis {
        name: String::new(),
        lo,
        hi,
        count: n,
        scale: Scale::Log,
    }
    .values()
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    Axis {
        name: String::new(),
        lo,
        hi,
        count: n,
        scale: Scale::Linear,
    }
    .values()
}

fn fig2(oracle: &mut Oracle) -> CliResult<Vec<(&'static str, String)>> {
    let mut t = Table::new(
        ["G_o", "n_bar", "n_bar_0", "n_bar_strong", "n_bar_0_strong", "strong_valid"],
        ["omega_ref", "1", "1", "1", "1", "bool"],
    );
    for g in log_grid(1e-4, 0.49, FIG2_POINTS) {
        let p = SystemParams1D::new(1.0, FIG2_KAPPA, 1.0, Coupling::Rate(g));
        let exact = backaction_1d(&p)?;
        let cov = steady_covariance(&build_1d(&p, NoiseMode::VacuumOnly)?)?.mode(0);
        let (n_ly, _) = occupation_and_purity_1d(&cov)?;
        oracle.check("fig2 n_bar", g, exact.n_bar, n_ly)?;
        oracle.check(
            "fig2 n_bar_0",
            g,
            exact.n_bar_0,
            bare_phonon_number(cov.xx, cov.pp, p.omega_b, p.mass, p.hbar),
        )?;
        if exact.n_bar_0 < exact.n_bar {
            return Err(CliError::Oracle(format!(
                "fig2 at G_o = {g}: n_bar_0 = {} below n_bar = {}",
                exact.n_bar_0, exact.n_bar
            )));
        }
        let mut row = vec![num(g), num(exact.n_bar), num(exact.n_bar_0)];
        match strong_coupling(&p) {
            Ok(s) => {
                let valid = g > FIG2_KAPPA && s.warnings.is_empty();
                row.extend([num(s.n_bar), num(s.n_bar_0), u8::from(valid).to_string()]);
            }
            Err(_) => row.extend([String::new(), String::new(), "0".to_string()]),
        }
        t.push(row);
    }
    let gp = format!(
        "{}set logscale x\nset xlabel 'G_o / omega_b'\nset ylabel 'occupation'\nset key top left\n\
plot 'fig2.csv' skip 2 using 1:2 with lines lw 2 title 'n_b (exact)', \\\n\
     '' skip 2 using 1:3 with lines lw 2 title 'n_b,0', \\\n\
     '' skip 2 using 1:($6 > 0 ? $4 : 1/0) with lines dt 2 title 'n_b (strong coupling)', \\\n\
     '' skip 2 using 1:($6 > 0 ? $5 : 1/0) with lines dt 3 title 'n_b,0 (strong coupling)'\n",
        preamble("fig2")
    );
    Ok(vec![("fig2.csv", t.render()), ("fig2.gp", gp)])
}

fn preamble(name: &str) -> String {
    format!("set datafile separator ','\nset terminal pngcairo size 900,650\nset output '{name}.png'\n")
}

pub fn fig3_params(g_o: f64, g_m: f64) -> SystemParamsRWA {
    let gamma_tot = FIG3_GAMMA_OVER_KAPPA * FIG3_KAPPA;
    let n_b = FIG3_HEAT_OVER_KAPPA * FIG3_KAPPA / gamma_tot;
    SystemParamsRWA::resonant(1.0, FIG3_KAPPA, gamma_tot, n_b, g_o, g_m)
}

/// Exact purity, checked against the reduced formula.
fn rwa_purity(p: &SystemParamsRWA) -> CliResult<(f64, f64)> {
    let sys = build_rwa(p)?;
    let cov = steady_covariance(&sys)?.two_mode(2, 4, "bright/dark RWA")?;
    let general = purity_2d_general(&cov)?.purity_2d;
    let reduced = purity_2d_reduced(&cov)?;
    Ok((general, reduced))
}

fn fig3(oracle: &mut Oracle, jobs: Option<usize>) -> CliResult<Vec<(&'static str, String)>> {
    let axis = log_grid(0.05, 5.0, FIG3_POINTS);
    let cells: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&a| axis.iter().map(move |&b| (a, b)))
        .collect();
    let values: Vec<CliResult<(f64, f64)>> = with_pool(jobs, || {
        cells
            .par_iter()
            .map(|&(a, b)| rwa_purity(&fig3_params(a * FIG3_KAPPA, b * FIG3_KAPPA)))
            .collect()
    })?;
    let mut map = Table::new(["G_o_over_kappa", "G_m_over_kappa", "purity_2d"], ["1", "1", "1"]);
    for (&(a, b), v) in cells.iter().zip(values) {
        let (general, reduced) = v?;
        oracle.check("fig3 purity", a, general, reduced)?;
        map.push_numbers(&[a, b, general]);
    }

    let mut line = Table::new(
        ["G_o_over_kappa", "G_m_over_kappa", "purity_2d", "purity_asymptote"],
        ["1", "1", "1", "1"],
    );
    for &a in &axis {
        let b = a / SQRT_2;
        let p = fig3_params(a * FIG3_KAPPA, b * FIG3_KAPPA);
        let (general, reduced) = rwa_purity(&p)?;
        oracle.check("fig3 line purity", a, general, reduced)?;
        let approx = rwa_optimum(&p)?.purity_approx;
        line.push_numbers(&[a, b, general, approx]);
    }
    let gp = format!(
        "{}set logscale xy\nset xlabel 'G_o / kappa'\nset ylabel 'G_m / kappa'\nset cblabel 'mu_2D'\n\
set xrange [0.05:5]\nset yrange [0.05:5]\nset palette rgbformulae 33,13,10\n\
plot 'fig3.csv' skip 2 using 1:2:3 with points pt 5 ps 1.2 palette notitle, \\\n\
     'fig3_line.csv' skip 2 using 1:2 with lines lw 2 lc rgb 'white' title 'G_o / G_m = sqrt(2)'\n",
        preamble("fig3")
    );
    Ok(vec![
        ("fig3.csv", map.render()),
        ("fig3_line.csv", line.render()),
        ("fig3.gp", gp),
    ])
}

pub fn fig4_params(g_o: f64) -> CliResult<SystemParams2D> {
    Ok(SystemParams2D::diagonal_resonant(1.0, g_o / SQRT_2, FIG4_KAPPA, 1.0, g_o)?)
}

fn fig4(oracle: &mut Oracle) -> CliResult<Vec<(&'static str, String)>> {
    let mut t = Table::new(
        ["G_o", "G_m", "one_minus_mu_2d", "one_minus_mu_product"],
        ["omega_ref", "omega_ref", "1", "1"],
    );
    for g in lin_grid(0.005, 0.4, FIG4_POINTS) {
        let p = fig4_params(g)?;
        let exact = backaction_2d(&p)?;
        let cov = steady_covariance(&build_2d(&p, NoiseMode::VacuumOnly)?)?;
        let s = purity_2d_general(&cov.two_mode(0, 2, "bright/dark")?)?;
        let (a, b) = (1.0 - exact.purity_2d, 1.0 - exact.purity_product);
        oracle.check("fig4 1 - mu_2d", g, a, 1.0 - s.purity_2d)?;
        oracle.check("fig4 1 - mu_b mu_d", g, b, 1.0 - s.purity_product_1d)?;
        t.push_numbers(&[g, g / SQRT_2, a, b]);
    }
    let gp = format!(
        "{}set xlabel 'G_o / omega_b'\nset ylabel '1 - mu'\nset key top left\n\
plot 'fig4.csv' skip 2 using 1:3 with lines lw 2 title '1 - mu_2D', \\\n\
     '' skip 2 using 1:4 with lines lw 2 dt 2 title '1 - mu_b mu_d'\n",
        preamble("fig4")
    );
    Ok(vec![("fig4.csv", t.render()), ("fig4.gp", gp)])
}
