mod config;
mod csv;
mod error;
mod figure;
mod model;
mod optimize;
mod sweep;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{unit_of, RawConfig, RunConfig};
use csv::{num, write_atomic, Table};
use error::{CliError, CliResult};
use figure::FigureId;
use model::Evaluator;

const KEYS_HELP: &str = "\
CONFIG FILE
  Plain text, one `key = value` per line, `#` starts a comment. Sections:

  [model]     kind = oneD | twoD | rwa          (default oneD)
              solver = closed_form | lyapunov | spectral | weak | strong | asymptote
                oneD: closed_form (default), lyapunov, spectral, weak, strong
                twoD: lyapunov (default), closed_form
                rwa:  lyapunov (default), asymptote
  [params]    model parameters (below); keys before any header also land here
  [sweep]     NAME = lin:LO:HI:COUNT | log:LO:HI:COUNT   (1 or 2 axes)
  [optimize]  NAME = LO:HI for each free parameter (1 to 3)
              objective = output column (default purity / purity_2d / purity_approx)
              sense = max | min, grid = points per axis (default 21)

PARAMETERS (frequencies in units of omega_ref; L, P, M are the code units set by mass and hbar)
  oneD  omega_b [1], kappa [0.2], delta [omega_b], G_o [0] or lambda_o, gamma_b [0],
        n_B (bath occupation at omega_b) or kT (k_B T in hbar*omega_ref), mass [1], hbar [1]
  twoD  G_m with omega_b [1] selects the diagonal trap with omega_d = omega_b;
        otherwise omega_x [1], omega_y [1], phi [pi/4], mass [1], hbar [1], lambda_o;
        kappa [0.2], delta [bright frequency], G_o [0], gamma_x [0], gamma_y [0], n_B or kT
  rwa   omega [1], omega_d [omega], delta [omega], kappa [1e-3], gamma_tot [1e-9 kappa],
        n_B [0], G_o [0], G_m [0]

OVERRIDES
  --param KEY=VALUE sets [params] KEY; `model=` and `solver=` set [model];
  SECTION.KEY=VALUE addresses any section. Flags win over the file.

EXIT CODES
  0 ok, 1 validation failure, 2 usage or config error, 3 unstable or invalid regime,
  4 figure oracle mismatch";

#[derive(Debug, Parser)]
#[command(name = "optomech", version, about = "Gaussian steady states of linearized cavity optomechanics")]
#[command(after_long_help = KEYS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (point, sweep, optimize) or directory (figure)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override a configuration value, repeatable
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Solver name, overrides [model] solver
    #[arg(long, global = true, value_name = "NAME")]
    solver: Option<String>,
    /// Worker threads for sweeps and figure maps
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Quadrature relative tolerance (spectral solver) and figure oracle tolerance
    #[arg(long, global = true, value_name = "X")]
    tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one parameter point
    Point,
    /// Evaluate a 1- or 2-axis grid and write CSV
    Sweep,
    /// Reproduce a figure: CSV plus gnuplot script, oracle-checked
    Figure {
        #[arg(value_enum)]
        id: FigureId,
    },
    /// Maximize purity (or another output) over bounded parameters
    Optimize,
    /// Run the cross-solver validation suite
    Validate {
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_diffusion: f64,
    },
}

fn load(cli: &Cli) -> CliResult<RunConfig> {
    let mut raw = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for spec in &cli.params {
        raw.apply_override(spec)?;
    }
    RunConfig::from_raw(raw, cli.solver.as_deref(), cli.tolerance)
}

fn evaluator(cfg: &RunConfig) -> Evaluator {
    Evaluator {
        model: cfg.model,
        solver: cfg.solver,
        tolerance: cfg.tolerance,
    }
}

fn emit(cli: &Cli, content: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_point(cli: &Cli) -> CliResult<()> {
    let cfg = load(cli)?;
    let ev = evaluator(&cfg);
    let point = ev.evaluate(&cfg.params)?;
    println!("model = {}", cfg.model.name());
    println!("solver = {}", cfg.solver.name());
    println!("unit frame: frequencies in omega_ref; L, P, M are the units fixed by mass and hbar");
    for (k, v) in &cfg.params {
        println!("param {k} = {} {}", num(*v), unit_of(cfg.model, k));
    }
    for (c, v) in ev.columns().iter().zip(&point.values) {
        println!("{} = {} {}", c.name, num(*v), c.unit);
    }
    let warnings: Vec<&str> = point.warnings.iter().map(|w| w.code()).collect();
    println!("warnings = {}", if warnings.is_empty() { "none".into() } else { warnings.join(";") });
    if let Some(path) = &cli.out {
        let mut t = Table::new(
            ev.columns().iter().map(|c| c.name),
            ev.columns().iter().map(|c| c.unit),
        );
        t.push_numbers(&point.values);
        write_atomic(path, &t.render())?;
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli) -> CliResult<()> {
    let cfg = load(cli)?;
    let spec = sweep::SweepSpec::from_config(&cfg)?;
    let table = sweep::run(&cfg, &spec, cli.jobs)?;
    emit(cli, &table.render())?;
    if cli.out.is_some() {
        let unstable = table.rows.iter().filter(|r| r[spec.axes.len()] != "ok").count();
        eprintln!("{} rows, {} not ok", table.rows.len(), unstable);
    }
    Ok(())
}

fn cmd_figure(cli: &Cli, id: FigureId) -> CliResult<()> {
    if !cli.params.is_empty() || cli.config.is_some() || cli.solver.is_some() {
        return Err(CliError::Config(
            "figure parameters are fixed; --config, --param and --solver do not apply".into(),
        ));
    }
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let out = figure::run(id, &dir, cli.tolerance, cli.jobs)?;
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    println!("max oracle relative error = {:.3e}", out.max_oracle_error);
    Ok(())
}

fn cmd_optimize(cli: &Cli) -> CliResult<()> {
    let cfg = load(cli)?;
    let ev = evaluator(&cfg);
    let spec = optimize::OptimizeSpec::from_config(&cfg, &ev)?;
    let m = optimize::run(&cfg, &ev, &spec)?;
    println!("model = {}", cfg.model.name());
    println!("solver = {}", cfg.solver.name());
    println!(
        "objective = {} ({})",
        spec.objective,
        if spec.minimize { "min" } else { "max" }
    );
    for ((name, lo, hi), x) in spec.free.iter().zip(&m.x) {
        println!("best {name} = {} {} in [{}, {}]", num(*x), unit_of(cfg.model, name), num(*lo), num(*hi));
    }
    println!("best {} = {}", spec.objective, num(m.value));
    println!("evaluations = {}", m.evaluations);
    if let Some(path) = &cli.out {
        let mut names: Vec<String> = spec.free.iter().map(|f| f.0.clone()).collect();
        let mut units: Vec<String> = spec.free.iter().map(|f| unit_of(cfg.model, &f.0).to_string()).collect();
        names.extend([spec.objective.clone(), "evaluations".to_string()]);
        units.extend(["1".to_string(), "1".to_string()]);
        let mut t = Table::new(names, units);
        let mut row = m.x.clone();
        row.extend([m.value, m.evaluations as f64]);
        t.push_numbers(&row);
        write_atomic(path, &t.render())?;
    }
    Ok(())
}

fn cmd_validate(cli: &Cli, perturb_diffusion: f64) -> CliResult<()> {
    let results = validate::run(validate::Hooks { perturb_diffusion });
    let table = validate::render(&results);
    print!("{table}");
    if let Some(path) = &cli.out {
        write_atomic(path, &table)?;
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Point => cmd_point(&cli),
        Command::Sweep => cmd_sweep(&cli),
        Command::Figure { id } => cmd_figure(&cli, *id),
        Command::Optimize => cmd_optimize(&cli),
        Command::Validate { perturb_diffusion } => cmd_validate(&cli, *perturb_diffusion),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
