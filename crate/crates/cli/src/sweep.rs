//! Grid sweeps over one or two parameters.

use rayon::prelude::*;

use crate::config::{check_key, parse_number, unit_of, Params, RunConfig};
use crate::csv::{num, Table};
use crate::error::{CliError, CliResult};
use crate::model::{Evaluator, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub scale: Scale,
}

impl Axis {
    /// Parse `lin:lo:hi:count` or `log:lo:hi:count`.
    pub fn parse(name: &str, spec: &str) -> CliResult<Self> {
        let bad = |why: &str| CliError::Config(format!("sweep axis '{name} = {spec}': {why}"));
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        let [scale, lo, hi, count] = parts[..] else {
            return Err(bad("expected lin:lo:hi:count or log:lo:hi:count"));
        };
        let scale = match scale {
            "lin" | "linear" => Scale::Linear,
            "log" => Scale::Log,
            _ => return Err(bad("scale must be lin or log")),
        };
        let lo = parse_number(name, lo)?;
        let hi = parse_number(name, hi)?;
        let count: usize = count.parse().map_err(|_| bad("count must be an integer"))?;
        if count < 2 {
            return Err(bad("count must be at least 2"));
        }
        if !(lo < hi) {
            return Err(bad("need lo < hi"));
        }
        if scale == Scale::Log && lo <= 0.0 {
            return Err(bad("log axis needs lo > 0"));
        }
        Ok(Axis {
            name: name.to_string(),
            lo,
            hi,
            count,
            scale,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i + 1 == self.count {
                    return self.hi;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.lo + t * (self.hi - self.lo),
                    Scale::Log => (self.lo.ln() + t * (self.hi.ln() - self.lo.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
}

impl SweepSpec {
    pub fn from_config(cfg: &RunConfig) -> CliResult<Self> {
        let mut axes = Vec::new();
        for (k, v) in cfg.raw.section("sweep") {
            check_key(cfg.model, k)?;
            axes.push(Axis::parse(k, v)?);
        }
        if axes.is_empty() || axes.len() > 2 {
            return Err(CliError::Config(format!(
                "a sweep needs 1 or 2 axes in [sweep], got {}",
                axes.len()
            )));
        }
        if axes.len() == 2 && axes[0].name == axes[1].name {
            return Err(CliError::Config("sweep axes must differ".into()));
        }
        Ok(SweepSpec { axes })
    }

    /// Grid points in row-major order: the last axis varies fastest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let values: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let mut out = vec![Vec::new()];
        for vals in &values {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    vals.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok(Point),
    Unstable(String),
    Invalid(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Ok(_) => "ok",
            Status::Unstable(_) => "unstable",
            Status::Invalid(_) => "invalid",
        }
    }
}

pub fn evaluate_status(ev: &Evaluator, params: &Params) -> Status {
    match ev.evaluate(params) {
        Ok(p) => Status::Ok(p),
        Err(e) if e.is_instability() || matches!(e, optomech::Error::InvalidRegime(_)) => {
            Status::Unstable(e.to_string())
        }
        Err(e) => Status::Invalid(e.to_string()),
    }
}

pub fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    let pool = b
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Run the sweep. Rows are in grid order whatever the worker count.
pub fn run(cfg: &RunConfig, spec: &SweepSpec, jobs: Option<usize>) -> CliResult<Table> {
    let ev = Evaluator {
        model: cfg.model,
        solver: cfg.solver,
        tolerance: cfg.tolerance,
    };
    let points = spec.points();
    let results: Vec<Status> = with_pool(jobs, || {
        points
            .par_iter()
            .map(|x| {
                let mut p = cfg.params.clone();
                for (axis, &v) in spec.axes.iter().zip(x) {
                    p.insert(axis.name.clone(), v);
                }
                evaluate_status(&ev, &p)
            })
            .collect()
    })?;

    let columns = ev.columns();
    let provenance = format!("{}/{}", cfg.model.name(), cfg.solver.name());
    let header = spec
        .axes
        .iter()
        .map(|a| a.name.clone())
        .chain(["status".to_string(), "warnings".to_string()])
        .chain(columns.iter().map(|c| c.name.to_string()));
    let units = spec
        .axes
        .iter()
        .map(|a| unit_of(cfg.model, &a.name).to_string())
        .chain([provenance, "-".to_string()])
        .chain(columns.iter().map(|c| c.unit.to_string()));
    let mut table = Table::new(header, units);
    for (x, status) in points.iter().zip(&results) {
        let mut row: Vec<String> = x.iter().map(|&v| num(v)).collect();
        row.push(status.label().to_string());
        match status {
            Status::Ok(p) => {
                row.push(p.warnings.iter().map(|w| w.code()).collect::<Vec<_>>().join(";"));
                row.extend(p.values.iter().map(|&v| num(v)));
            }
            _ => {
                row.push(String::new());
                row.extend(columns.iter().map(|_| String::new()));
            }
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_endpoints_are_exact() {
        let a = Axis::parse("G_o", "log:1e-4:0.49:7").unwrap();
        let v = a.values();
        assert_eq!(v[0], 1e-4);
        assert_eq!(v[6], 0.49);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bad_axes() {
        for s in ["lin:1:0:5", "lin:0:1:1", "log:0:1:5", "cubic:0:1:5", "lin:0:1"] {
            assert!(Axis::parse("G_o", s).is_err(), "{s}");
        }
    }

    #[test]
    fn row_major_points() {
        let spec = SweepSpec {
            axes: vec![
                Axis::parse("a", "lin:0:1:2").unwrap(),
                Axis::parse("b", "lin:0:2:3").unwrap(),
            ],
        };
        let p = spec.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[1], vec![0.0, 1.0]);
        assert_eq!(p[3], vec![1.0, 0.0]);
    }
}
