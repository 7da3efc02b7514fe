//! Plain-text `key = value` configuration with `[section]` headers.

use std::collections::BTreeMap;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = RawConfig::default();
        let mut current = String::from("params");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::Config(format!("line {}: unterminated section header", lineno + 1)))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(CliError::Config(format!(
                        "line {}: unknown section [{name}] (expected one of {})",
                        lineno + 1,
                        SECTIONS.join(", ")
                    )));
                }
                current = name.to_string();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(&current, k.trim(), v.trim());
        }
        Ok(cfg)
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) {
        let sec = match self.sections.iter_mut().position(|(s, _)| s == section) {
            Some(i) => &mut self.sections[i].1,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                &mut self.sections.last_mut().unwrap().1
            }
        };
        match sec.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value.to_string(),
            None => sec.push((key.to_string(), value.to_string())),
        }
    }

    /// Apply a `--param KEY=VALUE` override. `section.key` addresses any
    /// section; bare `model`/`solver` go to `[model]`; other bare keys to
    /// `[params]`.
    pub fn apply_override(&mut self, spec: &str) -> CliResult<()> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--param expects KEY=VALUE, got '{spec}'")))?;
        let (k, v) = (k.trim(), v.trim());
        if let Some((section, key)) = k.split_once('.') {
            if !SECTIONS.contains(&section) {
                return Err(CliError::Config(format!("--param: unknown section '{section}'")));
            }
            self.set(section, key, v);
        } else if k == "model" {
            self.set("model", "kind", v);
        } else if k == "solver" {
            self.set("model", "solver", v);
        } else {
            self.set("params", k, v);
        }
        Ok(())
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section)
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn section(&self, name: &str) -> &[(String, String)] {
        self.sections
            .iter()
            .find(|(s, _)| s == name)
            .map(|(_, e)| e.as_slice())
            .unwrap_or(&[])
    }
}

pub const SECTIONS: [&str; 4] = ["model", "params", "sweep", "optimize"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    OneD,
    TwoD,
    Rwa,
}

impl ModelKind {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oned" | "1d" => Ok(ModelKind::OneD),
            "twod" | "2d" => Ok(ModelKind::TwoD),
            "rwa" => Ok(ModelKind::Rwa),
            _ => Err(CliError::Config(format!("unknown model '{s}' (oneD, twoD, rwa)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::OneD => "oneD",
            ModelKind::TwoD => "twoD",
            ModelKind::Rwa => "rwa",
        }
    }

    pub fn default_solver(self) -> Solver {
        match self {
            ModelKind::OneD => Solver::ClosedForm,
            ModelKind::TwoD | ModelKind::Rwa => Solver::Lyapunov,
        }
    }

    pub fn solvers(self) -> &'static [Solver] {
        match self {
            ModelKind::OneD => &[
                Solver::ClosedForm,
                Solver::Lyapunov,
                Solver::Spectral,
                Solver::Weak,
                Solver::Strong,
            ],
            ModelKind::TwoD => &[Solver::ClosedForm, Solver::Lyapunov],
            ModelKind::Rwa => &[Solver::Lyapunov, Solver::Asymptote],
        }
    }

    pub fn keys(self) -> &'static [(&'static str, &'static str)] {
        match self {
            ModelKind::OneD => &KEYS_1D,
            ModelKind::TwoD => &KEYS_2D,
            ModelKind::Rwa => &KEYS_RWA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    ClosedForm,
    Lyapunov,
    Spectral,
    Weak,
    Strong,
    Asymptote,
}

impl Solver {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "closed_form" | "exact" => Ok(Solver::ClosedForm),
            "lyapunov" => Ok(Solver::Lyapunov),
            "spectral" => Ok(Solver::Spectral),
            "weak" | "weak_coupling" => Ok(Solver::Weak),
            "strong" | "strong_coupling" => Ok(Solver::Strong),
            "asymptote" => Ok(Solver::Asymptote),
            _ => Err(CliError::Config(format!(
                "unknown solver '{s}' (closed_form, lyapunov, spectral, weak, strong, asymptote)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Solver::ClosedForm => "closed_form",
            Solver::Lyapunov => "lyapunov",
            Solver::Spectral => "spectral",
            Solver::Weak => "weak",
            Solver::Strong => "strong",
            Solver::Asymptote => "asymptote",
        }
    }
}

/// Parameter keys and units per model. Frequencies and rates are in units of
/// the reference frequency `omega_ref`; L and P are the length and momentum
/// units fixed by `mass` and `hbar`.
pub const KEYS_1D: [(&str, &str); 10] = [
    ("omega_b", "omega_ref"),
    ("kappa", "omega_ref"),
    ("delta", "omega_ref"),
    ("G_o", "omega_ref"),
    ("lambda_o", "omega_ref/L"),
    ("gamma_b", "omega_ref"),
    ("n_B", "1"),
    ("kT", "hbar*omega_ref"),
    ("mass", "M"),
    ("hbar", "L*P"),
];

pub const KEYS_2D: [(&str, &str); 15] = [
    ("omega_b", "omega_ref"),
    ("G_m", "omega_ref"),
    ("omega_x", "omega_ref"),
    ("omega_y", "omega_ref"),
    ("phi", "rad"),
    ("kappa", "omega_ref"),
    ("delta", "omega_ref"),
    ("G_o", "omega_ref"),
    ("lambda_o", "omega_ref/L"),
    ("gamma_x", "omega_ref"),
    ("gamma_y", "omega_ref"),
    ("n_B", "1"),
    ("kT", "hbar*omega_ref"),
    ("mass", "M"),
    ("hbar", "L*P"),
];

pub const KEYS_RWA: [(&str, &str); 8] = [
    ("omega", "omega_ref"),
    ("omega_d", "omega_ref"),
    ("delta", "omega_ref"),
    ("kappa", "omega_ref"),
    ("gamma_tot", "omega_ref"),
    ("n_B", "1"),
    ("G_o", "omega_ref"),
    ("G_m", "omega_ref"),
];

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub solver: Solver,
    pub params: Params,
    pub raw: RawConfig,
    pub tolerance: Option<f64>,
}

pub fn parse_number(key: &str, v: &str) -> CliResult<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| CliError::Config(format!("'{key}': cannot parse '{v}' as a number")))?;
    if !x.is_finite() {
        return Err(CliError::Config(format!("'{key}' must be finite, got '{v}'")));
    }
    Ok(x)
}

pub fn check_key(model: ModelKind, key: &str) -> CliResult<()> {
    if model.keys().iter().any(|(k, _)| *k == key) {
        Ok(())
    } else {
        let known: Vec<&str> = model.keys().iter().map(|(k, _)| *k).collect();
        Err(CliError::Config(format!(
            "unknown parameter '{key}' for model {} (known: {})",
            model.name(),
            known.join(", ")
        )))
    }
}

pub fn unit_of(model: ModelKind, key: &str) -> &'static str {
    model.keys().iter().find(|(k, _)| *k == key).map(|(_, u)| *u).unwrap_or("1")
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig, solver_flag: Option<&str>, tolerance: Option<f64>) -> CliResult<Self> {
        let model = ModelKind::parse(raw.get("model", "kind").unwrap_or("oneD"))?;
        let solver = match solver_flag.or(raw.get("model", "solver")) {
            Some(s) => Solver::parse(s)?,
            None => model.default_solver(),
        };
        if !model.solvers().contains(&solver) {
            return Err(CliError::Config(format!(
                "solver {} is not available for model {}",
                solver.name(),
                model.name()
            )));
        }
        for (k, _) in raw.section("model") {
            if k != "kind" && k != "solver" {
                return Err(CliError::Config(format!("unknown key '{k}' in [model] (kind, solver)")));
            }
        }
        let mut params = Params::new();
        for (k, v) in raw.section("params") {
            check_key(model, k)?;
            params.insert(k.clone(), parse_number(k, v)?);
        }
        if let Some(t) = tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("--tolerance must be > 0, got {t}")));
            }
        }
        Ok(RunConfig {
            model,
            solver,
            params,
            raw,
            tolerance,
        })
    }
}
