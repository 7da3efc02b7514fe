//! Purity optimization over 1 to 3 free parameters.

use optomech::optimize::{maximize, Maximum, SearchOptions};

use crate::config::{check_key, parse_number, RunConfig};
use crate::error::{CliError, CliResult};
use crate::model::Evaluator;

const RESERVED: [&str; 3] = ["objective", "sense", "grid"];

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeSpec {
    pub free: Vec<(String, f64, f64)>,
    pub objective: String,
    pub minimize: bool,
    pub grid: usize,
}

impl OptimizeSpec {
    pub fn from_config(cfg: &RunConfig, ev: &Evaluator) -> CliResult<Self> {
        let raw = &cfg.raw;
        let mut free = Vec::new();
        for (k, v) in raw.section("optimize") {
            if RESERVED.contains(&k.as_str()) {
                continue;
            }
            check_key(cfg.model, k)?;
            let (lo, hi) = v
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("[optimize] {k} = {v}: expected lo:hi")))?;
            let (lo, hi) = (parse_number(k, lo.trim())?, parse_number(k, hi.trim())?);
            if !(lo < hi) {
                return Err(CliError::Config(format!("[optimize] {k}: need lo < hi")));
            }
            free.push((k.clone(), lo, hi));
        }
        if free.is_empty() || free.len() > 3 {
            return Err(CliError::Config(format!(
                "optimize needs 1 to 3 bounded parameters in [optimize], got {}",
                free.len()
            )));
        }
        let default_objective = ["purity", "purity_2d", "purity_approx"]
            .into_iter()
            .find(|c| ev.column_index(c).is_some())
            .unwrap_or("n_bar");
        let objective = raw.get("optimize", "objective").unwrap_or(default_objective).to_string();
        if ev.column_index(&objective).is_none() {
            let names: Vec<&str> = ev.columns().iter().map(|c| c.name).collect();
            return Err(CliError::Config(format!(
                "objective '{objective}' is not an output of {}/{} ({})",
                cfg.model.name(),
                cfg.solver.name(),
                names.join(", ")
            )));
        }
        let minimize = match raw.get("optimize", "sense") {
            Some("min") => true,
            Some("max") => false,
            Some(s) => return Err(CliError::Config(format!("[optimize] sense must be min or max, got '{s}'"))),
            None => objective.starts_with("n_"),
        };
        let grid = match raw.get("optimize", "grid") {
            Some(g) => g
                .parse::<usize>()
                .ok()
                .filter(|&g| g >= 2)
                .ok_or_else(|| CliError::Config(format!("[optimize] grid must be an integer >= 2, got '{g}'")))?,
            None => SearchOptions::default().grid,
        };
        Ok(OptimizeSpec {
            free,
            objective,
            minimize,
            grid,
        })
    }
}

pub fn run(cfg: &RunConfig, ev: &Evaluator, spec: &OptimizeSpec) -> CliResult<Maximum> {
    let idx = ev.column_index(&spec.objective).expect("objective checked");
    let sign = if spec.minimize { -1.0 } else { 1.0 };
    let f = |x: &[f64]| {
        let mut p = cfg.params.clone();
        for ((name, _, _), &v) in spec.free.iter().zip(x) {
            p.insert(name.clone(), v);
        }
        ev.evaluate(&p).ok().map(|pt| sign * pt.values[idx])
    };
    let bounds: Vec<(f64, f64)> = spec.free.iter().map(|&(_, lo, hi)| (lo, hi)).collect();
    let opts = SearchOptions {
        grid: spec.grid,
        ..Default::default()
    };
    let mut m = maximize(f, &bounds, &opts)?;
    m.value *= sign;
    Ok(m)
}
