//! `burplan` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 usage error,
//! 3 planning finished without a solution.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bench::{
    render_cspace, render_workspace, run_sweep, ExpansionRecord, ParamOverrides, RunManifest, SnapRadius, SweepSpec,
    DEFAULT_SWEEP_DEG,
};
use crate::error::{Error, Result};
use crate::planner::{ara_star_observed, PlanResult, PlannerParams, Problem};
use crate::primitives::Mode;
use crate::workspace::Scenario;

const EXIT_INVALID: i32 = 1;
const EXIT_NO_SOLUTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "burplan",
    version,
    about = "ARA* planning with bur and fixed motion primitives"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan one query and write a run file.
    Plan(PlanArgs),
    /// Sweep scenarios, primitive lengths and modes.
    Bench(BenchArgs),
    /// Render a run file as SVG.
    Plot(PlotArgs),
    /// Check a scenario file.
    Validate(ValidateArgs),
}

/// Planner parameter overrides shared by `plan` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Initial inflation factor [default: 10 for 2 joints, 50 otherwise].
    #[arg(long)]
    pub eps: Option<f64>,
    /// Inflation decrement per pass [default: 0.5].
    #[arg(long)]
    pub deps: Option<f64>,
    /// Budget for the first solution, seconds [default: 5 or 60].
    #[arg(long)]
    pub tplan_s: Option<f64>,
    /// Budget for improvement after the first solution, seconds [default: 1 or 40].
    #[arg(long)]
    pub trepair_s: Option<f64>,
    /// Clearance below which burs degrade to fixed primitives, meters [default: 0.03].
    #[arg(long)]
    pub dcrit_m: Option<f64>,
    /// Goal-snap gate in degrees, or "unbounded" [default: twice the primitive length].
    #[arg(long, value_parser = parse_snap)]
    pub snap_radius_deg: Option<SnapRadius>,
    /// Use the literal INCONS handling instead of the standard one.
    #[arg(long)]
    pub literal_incons: bool,
    /// Emit only bur spine endpoints, without goal-aligned points.
    #[arg(long)]
    pub no_goal_align: bool,
}

impl ParamArgs {
    pub fn overrides(&self) -> ParamOverrides {
        ParamOverrides {
            epsilon: self.eps,
            delta_epsilon: self.deps,
            t_plan_s: self.tplan_s,
            t_repair_s: self.trepair_s,
            d_crit_m: self.dcrit_m,
            snap_radius: self.snap_radius_deg.unwrap_or_default(),
            literal_incons: self.literal_incons,
            no_goal_align: self.no_goal_align,
        }
    }
}

fn parse_snap(s: &str) -> std::result::Result<SnapRadius, String> {
    if s.eq_ignore_ascii_case("unbounded") {
        return Ok(SnapRadius::Unbounded);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(SnapRadius::Degrees(v)),
        _ => Err(format!(
            "expected a non-negative number of degrees or \"unbounded\", got {s:?}"
        )),
    }
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, default_value = "bur", value_parser = parse_mode)]
    pub mode: Mode,
    /// Primitive length, degrees.
    #[arg(long, default_value_t = 4.0)]
    pub mprim_deg: f64,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Run file to write (JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Scenario files; repeat for several.
    #[arg(long, required = true, num_args = 1..)]
    pub scenario: Vec<PathBuf>,
    /// Modes to run.
    #[arg(long, value_delimiter = ',', default_values = ["fixed", "bur"], value_parser = parse_mode)]
    pub mode: Vec<Mode>,
    /// Primitive lengths, degrees [default: 4,5,...,12].
    #[arg(long, value_delimiter = ',')]
    pub mprim_deg: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Run cells one after another.
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    pub params: ParamArgs,
    /// CSV output; printed to stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Directory for the run manifest and paired tables.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Run file written by `plan`.
    #[arg(long)]
    pub run: PathBuf,
    /// SVG output.
    #[arg(long)]
    pub out: PathBuf,
    /// Draw the C-space with expansions instead of the workspace (2 joints only).
    #[arg(long)]
    pub cspace: bool,
    /// C-space sampling resolution, degrees.
    #[arg(long, default_value_t = 2.0)]
    pub resolution_deg: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
}

/// Contents of a run file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunFile {
    pub scenario_path: String,
    /// Verbatim scenario text, so the run can be re-rendered on its own.
    pub scenario_source: String,
    pub mode: Mode,
    pub m_prim_deg: f64,
    pub params: PlannerParams,
    pub result: PlanResult,
    pub expansions: Vec<ExpansionRecord>,
}

impl RunFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn problem(&self) -> Result<Problem> {
        Problem::new(Scenario::from_toml_str(&self.scenario_source)?)
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

/// Runs a parsed command, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Plan(a) => plan(a, out),
        Command::Bench(a) => bench(a, out),
        Command::Plot(a) => plot(a, out),
        Command::Validate(a) => validate(a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Output(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Output(e.to_string()))
}

fn plan(a: PlanArgs, out: &mut dyn Write) -> Result<i32> {
    let source = fs::read_to_string(&a.scenario).map_err(|e| Error::io(&a.scenario, e))?;
    let scenario = Scenario::from_toml_str(&source)?;
    let params = a.params.overrides().resolve(scenario.dof(), a.mprim_deg, a.mode)?;
    if a.dry_run {
        emit(out, &to_json(&params)?)?;
        emit(out, "\n")?;
        return Ok(0);
    }
    let problem = Problem::new(scenario)?;
    let mut expansions = Vec::new();
    let result = ara_star_observed(&problem, &params, &mut |e| {
        expansions.push(ExpansionRecord::from_event(e))
    })?;

    let mut report = format!(
        "{} {} m_prim={}deg: {} cost={:.6} eps'={:.3} n_init={} t_init={:.3}ms",
        problem.name(),
        a.mode,
        a.mprim_deg,
        result.status.as_str(),
        result.cost,
        result.eps_prime_final,
        result.n_init,
        result.t_init.as_secs_f64() * 1e3
    );
    if let (Some(n), Some(t)) = (result.n_final, result.t_final) {
        report.push_str(&format!(" n_final={n} t_final={:.3}ms", t.as_secs_f64() * 1e3));
    }
    report.push('\n');
    emit(out, &report)?;

    let code = if result.is_solved() { 0 } else { EXIT_NO_SOLUTION };
    if let Some(path) = &a.out {
        let run = RunFile {
            scenario_path: a.scenario.display().to_string(),
            scenario_source: source,
            mode: a.mode,
            m_prim_deg: a.mprim_deg,
            params,
            result,
            expansions,
        };
        write_file(path, &to_json(&run)?)?;
    }
    Ok(code)
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let mut problems = Vec::with_capacity(a.scenario.len());
    for path in &a.scenario {
        problems.push(Problem::new(Scenario::load(path)?)?);
    }
    let spec = SweepSpec {
        scenarios: problems,
        m_prim_deg: if a.mprim_deg.is_empty() {
            DEFAULT_SWEEP_DEG.to_vec()
        } else {
            a.mprim_deg.clone()
        },
        modes: a.mode.clone(),
        repetitions: a.reps,
        overrides: a.params.overrides(),
        serial: a.serial,
    };
    spec.validate()?;
    if a.dry_run {
        let mut cfg = serde_json::Map::new();
        for p in &spec.scenarios {
            let mut per = serde_json::Map::new();
            for &m in &spec.m_prim_deg {
                for &mode in &spec.modes {
                    let params = spec.overrides.resolve(p.dof(), m, mode)?;
                    per.insert(
                        format!("{mode}@{m}"),
                        serde_json::to_value(params).expect("params serialize"),
                    );
                }
            }
            cfg.insert(p.name().to_string(), per.into());
        }
        emit(out, &to_json(&cfg)?)?;
        emit(out, "\n")?;
        return Ok(0);
    }

    let outcome = run_sweep(&spec)?;
    let csv = outcome.to_csv_string();
    match &a.csv {
        Some(path) => write_file(path, &csv)?,
        None => emit(out, &csv)?,
    }
    let tables = outcome.paired_tables();
    if let Some(dir) = &a.out {
        write_file(
            &dir.join("manifest.json"),
            &to_json(&RunManifest::for_sweep(&spec, &outcome))?,
        )?;
        write_file(&dir.join("tables.txt"), &tables)?;
    }
    if a.csv.is_some() {
        emit(out, &tables)?;
    }
    Ok(0)
}

fn plot(a: PlotArgs, out: &mut dyn Write) -> Result<i32> {
    let run = RunFile::load(&a.run)?;
    let problem = run.problem()?;
    let svg = if a.cspace {
        render_cspace(&problem, &run.expansions, a.resolution_deg)?
    } else {
        render_workspace(&problem, &run.result.path)?
    };
    write_file(&a.out, &svg)?;
    emit(out, &format!("wrote {}\n", a.out.display()))?;
    Ok(0)
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let checked = Scenario::load(&a.scenario).and_then(Problem::new);
    match checked {
        Ok(p) => {
            emit(
                out,
                &format!(
                    "ok: {} ({}, {} joints, {} occupied cells)\n",
                    p.name(),
                    p.scenario.tier,
                    p.dof(),
                    p.grid.occupied_count()
                ),
            )?;
            Ok(0)
        }
        Err(e) => {
            emit(out, &format!("invalid: {e}\n"))?;
            Ok(EXIT_INVALID)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_radius_parsing() {
        assert_eq!(parse_snap("unbounded"), Ok(SnapRadius::Unbounded));
        assert_eq!(parse_snap("8"), Ok(SnapRadius::Degrees(8.0)));
        assert!(parse_snap("-1").is_err());
        assert!(parse_snap("wide").is_err());
    }

    #[test]
    fn bench_defaults() {
        let cli = Cli::try_parse_from(["burplan", "bench", "--scenario", "a.toml"]).unwrap();
        let Command::Bench(b) = cli.command else { panic!() };
        assert_eq!(b.mode, vec![Mode::Fixed, Mode::Bur]);
        assert_eq!(b.reps, 1);
        assert!(b.mprim_deg.is_empty());
    }

    #[test]
    fn rejects_unknown_mode() {
        assert!(Cli::try_parse_from(["burplan", "plan", "--scenario", "a.toml", "--mode", "rrt"]).is_err());
    }
}
