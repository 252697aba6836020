//! Benchmark harness: repeated runs over scenarios, primitive lengths and
//! modes, aggregated into CSV rows and paired fixed/bur tables.

mod render;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use render::{
    cspace_obstacle_raster, render_cspace, render_workspace, CspaceRaster, ExpansionEdge, ExpansionRecord,
};

use crate::error::{Error, Result};
use crate::planner::{ara_star, InconsPolicy, PlanResult, PlanStatus, PlannerParams, Problem};
use crate::primitives::{Mode, PrimitiveParams};

/// CSV header of sweep output.
pub const CSV_HEADER: [&str; 9] = [
    "scenario",
    "mode",
    "m_prim_deg",
    "t_init_ms",
    "n_init",
    "t_final_ms",
    "n_final",
    "c_rad",
    "status",
];

/// Primitive lengths swept by default, degrees.
pub const DEFAULT_SWEEP_DEG: [f64; 9] = [4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0];

/// Goal-snap gate selection.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapRadius {
    /// Twice the primitive length.
    #[default]
    Default,
    Degrees(f64),
    Unbounded,
}

/// User overrides on top of the per-DoF defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamOverrides {
    pub epsilon: Option<f64>,
    pub delta_epsilon: Option<f64>,
    pub t_plan_s: Option<f64>,
    pub t_repair_s: Option<f64>,
    pub d_crit_m: Option<f64>,
    pub snap_radius: SnapRadius,
    pub literal_incons: bool,
    /// Emit only spine endpoints in bur mode.
    pub no_goal_align: bool,
}

impl ParamOverrides {
    /// Effective parameters for a robot with `dof` joints.
    pub fn resolve(&self, dof: usize, m_prim_deg: f64, mode: Mode) -> Result<PlannerParams> {
        let mut prim = PrimitiveParams::from_degrees(m_prim_deg, mode);
        if let Some(d) = self.d_crit_m {
            prim.d_crit = d;
        }
        prim.goal_align = !self.no_goal_align;
        prim.snap_radius = match self.snap_radius {
            SnapRadius::Default => prim.snap_radius,
            SnapRadius::Degrees(d) => d.to_radians(),
            SnapRadius::Unbounded => f64::INFINITY,
        };
        let mut params = PlannerParams::for_dof(dof, prim);
        if let Some(e) = self.epsilon {
            params.epsilon_init = e;
        }
        if let Some(d) = self.delta_epsilon {
            params.delta_epsilon = d;
        }
        if let Some(t) = self.t_plan_s {
            params.t_plan = seconds(t, "t_plan")?;
        }
        if let Some(t) = self.t_repair_s {
            params.t_repair = seconds(t, "t_repair")?;
        }
        if self.literal_incons {
            params.incons_policy = InconsPolicy::Literal;
        }
        params.validate()?;
        Ok(params)
    }
}

fn seconds(v: f64, what: &str) -> Result<Duration> {
    Duration::try_from_secs_f64(v)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| Error::InvalidParameter(format!("{what} must be a positive number of seconds")))
}

/// One CSV row: a single run or the aggregate of repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub scenario: String,
    pub mode: Mode,
    pub m_prim_deg: f64,
    pub t_init_ms: Option<f64>,
    pub n_init: Option<f64>,
    pub t_final_ms: Option<f64>,
    pub n_final: Option<f64>,
    pub c_rad: Option<f64>,
    pub status: String,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl BenchmarkRecord {
    fn from_result(scenario: &str, mode: Mode, m_prim_deg: f64, result: &PlanResult) -> Self {
        let solved = result.is_solved();
        let optimal = result.status == PlanStatus::SolvedOptimal;
        BenchmarkRecord {
            scenario: scenario.to_string(),
            mode,
            m_prim_deg,
            t_init_ms: solved.then(|| ms(result.t_init)),
            n_init: solved.then_some(result.n_init as f64),
            t_final_ms: result.t_final.filter(|_| optimal).map(ms),
            n_final: result.n_final.filter(|_| optimal).map(|n| n as f64),
            c_rad: optimal.then_some(result.cost),
            status: result.status.as_str().to_string(),
        }
    }

    fn invalid(scenario: &str, mode: Mode, m_prim_deg: f64) -> Self {
        BenchmarkRecord {
            scenario: scenario.to_string(),
            mode,
            m_prim_deg,
            t_init_ms: None,
            n_init: None,
            t_final_ms: None,
            n_final: None,
            c_rad: None,
            status: "INVALID".to_string(),
        }
    }

    /// CSV fields in [`CSV_HEADER`] order. Absent values are empty.
    pub fn csv_fields(&self) -> [String; 9] {
        let opt = |v: Option<f64>, f: fn(f64) -> String| v.map(f).unwrap_or_default();
        [
            self.scenario.clone(),
            self.mode.to_string(),
            format!("{}", self.m_prim_deg),
            opt(self.t_init_ms, |v| format!("{v:.3}")),
            opt(self.n_init, format_count),
            opt(self.t_final_ms, |v| format!("{v:.3}")),
            opt(self.n_final, format_count),
            opt(self.c_rad, |v| format!("{v:.6}")),
            self.status.clone(),
        ]
    }
}

// Integral means print without a fractional part.
fn format_count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as u64)
    } else {
        format!("{v:.2}")
    }
}

/// Runs one query and summarizes it. Timing covers the search only.
pub fn run_single(problem: &Problem, params: &PlannerParams) -> (BenchmarkRecord, Option<PlanResult>) {
    let m_deg = params.primitives.m_prim.to_degrees();
    let mode = params.primitives.mode;
    match ara_star(problem, params) {
        Ok(result) => (
            BenchmarkRecord::from_result(problem.name(), mode, round_deg(m_deg), &result),
            Some(result),
        ),
        Err(_) => (BenchmarkRecord::invalid(problem.name(), mode, round_deg(m_deg)), None),
    }
}

fn round_deg(d: f64) -> f64 {
    (d * 1e9).round() / 1e9
}

/// What to run.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scenarios: Vec<Problem>,
    pub m_prim_deg: Vec<f64>,
    pub modes: Vec<Mode>,
    pub repetitions: usize,
    pub overrides: ParamOverrides,
    /// Run cells one after another instead of in parallel.
    pub serial: bool,
}

impl SweepSpec {
    /// Both modes over the default 4..=12 degree sweep, one repetition.
    pub fn new(scenarios: Vec<Problem>) -> Self {
        SweepSpec {
            scenarios,
            m_prim_deg: DEFAULT_SWEEP_DEG.to_vec(),
            modes: vec![Mode::Fixed, Mode::Bur],
            repetitions: 1,
            overrides: ParamOverrides::default(),
            serial: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
        }
        if self.m_prim_deg.is_empty() || self.m_prim_deg.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::InvalidParameter("primitive lengths must be positive".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter("at least one mode is required".into()));
        }
        for p in &self.scenarios {
            for &m in &self.m_prim_deg {
                for &mode in &self.modes {
                    self.overrides.resolve(p.dof(), m, mode)?;
                }
            }
        }
        Ok(())
    }
}

/// All runs of one (scenario, primitive length, mode) cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub scenario: String,
    pub mode: Mode,
    pub m_prim_deg: f64,
    pub params: PlannerParams,
    pub runs: Vec<PlanResult>,
    pub record: BenchmarkRecord,
}

/// Sweep output in scenario, primitive length, mode order.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub cells: Vec<CellResult>,
    pub elapsed: Duration,
}

impl SweepOutcome {
    pub fn records(&self) -> impl Iterator<Item = &BenchmarkRecord> {
        self.cells.iter().map(|c| &c.record)
    }

    pub fn record(&self, scenario: &str, mode: Mode, m_prim_deg: f64) -> Option<&BenchmarkRecord> {
        self.records()
            .find(|r| r.scenario == scenario && r.mode == mode && r.m_prim_deg == m_prim_deg)
    }

    /// Writes the CSV table.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(self.records(), out)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// `n_final` at the finest primitive length divided by `n_final` at the
    /// coarsest, per mode. Lower means less sensitive to resolution.
    pub fn resolution_ratio(&self, scenario: &str, mode: Mode) -> Option<f64> {
        let rows: Vec<_> = self
            .records()
            .filter(|r| r.scenario == scenario && r.mode == mode)
            .collect();
        let fine = rows.iter().min_by(|a, b| a.m_prim_deg.total_cmp(&b.m_prim_deg))?;
        let coarse = rows.iter().max_by(|a, b| a.m_prim_deg.total_cmp(&b.m_prim_deg))?;
        if fine.m_prim_deg == coarse.m_prim_deg {
            return None;
        }
        Some(fine.n_final? / coarse.n_final?)
    }

    /// Per-scenario paired "fixed / bur" tables with a resolution
    /// sensitivity footer.
    pub fn paired_tables(&self) -> String {
        let mut out = String::new();
        let mut scenarios: Vec<&str> = Vec::new();
        for c in &self.cells {
            if !scenarios.contains(&c.scenario.as_str()) {
                scenarios.push(&c.scenario);
            }
        }
        for name in scenarios {
            out.push_str(&paired_table(self.records().filter(|r| r.scenario == name), name));
            let ratio = |mode| {
                self.resolution_ratio(name, mode)
                    .map(|r| format!("{r:.3}"))
                    .unwrap_or_else(|| "-".into())
            };
            let _ = writeln!(
                out,
                "n_final ratio finest/coarsest: fixed {} / bur {}\n",
                ratio(Mode::Fixed),
                ratio(Mode::Bur)
            );
        }
        out
    }
}

/// Writes records as CSV with [`CSV_HEADER`].
pub fn write_csv<'a, W: Write>(records: impl IntoIterator<Item = &'a BenchmarkRecord>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in records {
        w.write_record(r.csv_fields()).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}

/// Text table with one row per primitive length and "fixed / bur" columns.
pub fn paired_table<'a>(records: impl IntoIterator<Item = &'a BenchmarkRecord>, scenario: &str) -> String {
    let mut rows: BTreeMap<u64, [Option<&BenchmarkRecord>; 2]> = BTreeMap::new();
    for r in records {
        let slot = rows.entry((r.m_prim_deg * 1e6).round() as u64).or_default();
        slot[if r.mode == Mode::Fixed { 0 } else { 1 }] = Some(r);
    }
    let mut out = String::new();
    let _ = writeln!(out, "{scenario} (fixed / bur)");
    let _ = writeln!(
        out,
        "{:>6} | {:>19} | {:>15} | {:>19} | {:>15} | {:>15}",
        "m_prim", "t_init [ms]", "n_init", "t_final [ms]", "n_final", "c"
    );
    let pair = |a: Option<String>, b: Option<String>| {
        format!(
            "{} / {}",
            a.unwrap_or_else(|| "-".into()),
            b.unwrap_or_else(|| "-".into())
        )
    };
    for (key, [fixed, bur]) in rows {
        let get = |r: Option<&BenchmarkRecord>, f: fn(&BenchmarkRecord) -> Option<String>| r.and_then(f);
        let _ = writeln!(
            out,
            "{:>6} | {:>19} | {:>15} | {:>19} | {:>15} | {:>15}",
            key as f64 / 1e6,
            pair(
                get(fixed, |r| r.t_init_ms.map(|v| format!("{v:.2}"))),
                get(bur, |r| r.t_init_ms.map(|v| format!("{v:.2}")))
            ),
            pair(
                get(fixed, |r| r.n_init.map(format_count)),
                get(bur, |r| r.n_init.map(format_count))
            ),
            pair(
                get(fixed, |r| r.t_final_ms.map(|v| format!("{v:.2}"))),
                get(bur, |r| r.t_final_ms.map(|v| format!("{v:.2}")))
            ),
            pair(
                get(fixed, |r| r.n_final.map(format_count)),
                get(bur, |r| r.n_final.map(format_count))
            ),
            pair(
                get(fixed, |r| r.c_rad.map(|v| format!("{v:.2}"))),
                get(bur, |r| r.c_rad.map(|v| format!("{v:.2}")))
            ),
        );
    }
    out
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Averages repeated runs of one cell. Times and counts are means over the
/// runs that produced them; the path cost comes from a converged run.
pub fn aggregate(scenario: &str, mode: Mode, m_prim_deg: f64, runs: &[PlanResult]) -> BenchmarkRecord {
    let singles: Vec<_> = runs
        .iter()
        .map(|r| BenchmarkRecord::from_result(scenario, mode, m_prim_deg, r))
        .collect();
    let Some(first) = singles.first() else {
        return BenchmarkRecord::invalid(scenario, mode, m_prim_deg);
    };
    BenchmarkRecord {
        scenario: scenario.to_string(),
        mode,
        m_prim_deg,
        t_init_ms: mean(singles.iter().filter_map(|r| r.t_init_ms)),
        n_init: mean(singles.iter().filter_map(|r| r.n_init)),
        t_final_ms: mean(singles.iter().filter_map(|r| r.t_final_ms)),
        n_final: mean(singles.iter().filter_map(|r| r.n_final)),
        c_rad: singles.iter().find_map(|r| r.c_rad),
        status: first.status.clone(),
    }
}

/// Runs every cell of the sweep. Cells run in parallel unless
/// `spec.serial`; the repetitions of one cell always run sequentially.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    let clock = Instant::now();
    let mut jobs = Vec::new();
    for problem in &spec.scenarios {
        for &m in &spec.m_prim_deg {
            for &mode in &spec.modes {
                let params = spec.overrides.resolve(problem.dof(), m, mode)?;
                jobs.push((problem, m, mode, params));
            }
        }
    }
    let run_cell = |(problem, m, mode, params): &(&Problem, f64, Mode, PlannerParams)| -> CellResult {
        let runs: Vec<PlanResult> = (0..spec.repetitions)
            .filter_map(|_| run_single(problem, params).1)
            .collect();
        let record = aggregate(problem.name(), *mode, *m, &runs);
        CellResult {
            scenario: problem.name().to_string(),
            mode: *mode,
            m_prim_deg: *m,
            params: *params,
            runs,
            record,
        }
    };
    let cells = if spec.serial {
        jobs.iter().map(run_cell).collect()
    } else {
        jobs.par_iter().map(run_cell).collect()
    };
    Ok(SweepOutcome {
        cells,
        elapsed: clock.elapsed(),
    })
}

/// Machine-readable description of a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub determinism: String,
    pub scenarios: Vec<String>,
    pub m_prim_deg: Vec<f64>,
    pub modes: Vec<Mode>,
    pub repetitions: usize,
    pub serial: bool,
    pub overrides: ParamOverrides,
    pub elapsed_s: f64,
}

impl RunManifest {
    pub fn for_sweep(spec: &SweepSpec, outcome: &SweepOutcome) -> Self {
        RunManifest {
            tool: "burplan".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            determinism: "search is deterministic (ties broken by h, then lattice coordinate); \
                          only timing columns vary between identical runs, unless a budget expires"
                .into(),
            scenarios: spec.scenarios.iter().map(|p| p.name().to_string()).collect(),
            m_prim_deg: spec.m_prim_deg.clone(),
            modes: spec.modes.clone(),
            repetitions: spec.repetitions,
            serial: spec.serial,
            overrides: spec.overrides,
            elapsed_s: outcome.elapsed.as_secs_f64(),
        }
    }
}
