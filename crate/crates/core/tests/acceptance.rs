//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero when any fails.
//!
//! cargo test --test acceptance

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bur_planner::bench::{run_sweep, ParamOverrides, SweepOutcome, SweepSpec, CSV_HEADER};
use bur_planner::planner::{ara_star, ara_star_observed, PlanResult, PlanStatus, Problem};
use bur_planner::primitives::{Lattice, Mode, Provenance, SuccessorContext};
use bur_planner::robot::{clearance, forward_kinematics, in_collision};
use bur_planner::workspace::{Obstacle, OccupancyGrid, Point, Scenario};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Shared) -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Runs shared between criteria.
struct Shared {
    sweep_2dof: SweepOutcome,
    runs: Vec<(String, PlanResult)>,
    small: Vec<(Problem, f64)>,
}

fn sweep_2dof() -> SweepOutcome {
    let scenes = ["2dof_easy", "2dof_medium", "2dof_hard"].map(shipped).to_vec();
    let mut spec = SweepSpec::new(scenes);
    spec.serial = true;
    run_sweep(&spec).expect("2-DoF sweep")
}

fn overrides(t_plan_s: f64, t_repair_s: f64) -> ParamOverrides {
    ParamOverrides {
        t_plan_s: Some(t_plan_s),
        t_repair_s: Some(t_repair_s),
        ..ParamOverrides::default()
    }
}

fn c1_spine_safety(sh: &mut Shared) -> Outcome {
    let clock = Instant::now();
    let mut edges = 0usize;
    for name in SHIPPED {
        let p = shipped(name);
        for m in 4..=12 {
            let params = overrides(5.0, 0.5).resolve(p.dof(), m as f64, Mode::Bur).unwrap();
            let mut bur = Vec::new();
            let r = ara_star_observed(&p, &params, &mut |e| {
                for s in e.successors.iter().filter(|s| s.provenance == Provenance::Bur) {
                    bur.push((e.q.clone(), s.q.clone()));
                }
            })
            .unwrap();
            for (a, b) in &bur {
                if let Some(q) = dense_violation(&p, a, b) {
                    return Err(format!("{name} at {m} deg: {a:?} -> {b:?} collides at {q:?}"));
                }
            }
            edges += bur.len();
            sh.runs.push((format!("{name}@{m} bur"), r));
        }
    }
    let t = clock.elapsed();
    ensure!(edges >= 10_000, "only {edges} bur edges exercised");
    ensure!(t < Duration::from_secs(300), "took {:.1} s", t.as_secs_f64());
    Ok(format!("{edges} bur edges, 0 violations, {:.1} s", t.as_secs_f64()))
}

fn random_obstacle(rng: &mut StdRng) -> Obstacle {
    let (x, y) = (rng.gen_range(-1.0..0.8), rng.gen_range(-1.0..0.8));
    if rng.gen_bool(0.5) {
        Obstacle::Rect {
            min: Point::new(x, y),
            max: Point::new(x + rng.gen_range(0.0..0.3), y + rng.gen_range(0.0..0.3)),
        }
    } else {
        Obstacle::Circle {
            center: Point::new(x, y),
            radius: rng.gen_range(0.0..0.2),
        }
    }
}

fn c2_clearance_oracle(_: &mut Shared) -> Outcome {
    let clock = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let robots = [shipped("2dof_easy"), shipped("7dof_easy")];
    let mut collisions = 0;
    for k in 0..200 {
        let cell = [0.01, 0.02, 0.05, 0.1][k % 4];
        let obstacles: Vec<_> = (0..rng.gen_range(0..8)).map(|_| random_obstacle(&mut rng)).collect();
        let grid = OccupancyGrid::rasterize(Point::new(-1.0, -1.0), Point::new(1.0, 1.0), cell, &obstacles).unwrap();
        let p = &robots[k % 2];
        let q: Vec<f64> = (0..p.dof()).map(|_| rng.gen_range(-PI..PI)).collect();
        let got = clearance(&p.chain, &p.model, &grid, &q, 1.0).unwrap();
        let spheres = forward_kinematics(&p.chain, &p.model, &q).unwrap().spheres;
        let mut want = brute_clearance(&grid, &spheres);
        if grid.is_empty() {
            want = 1.0;
        }
        ensure!(got.d_c == want, "instance {k}: {} vs brute force {want}", got.d_c);
        ensure!(
            got.in_collision == in_collision(&p.chain, &p.model, &grid, &q),
            "instance {k}: collision flag"
        );
        collisions += usize::from(got.in_collision);
    }
    let t = clock.elapsed();
    ensure!(t < Duration::from_secs(30), "took {:.1} s", t.as_secs_f64());
    Ok(format!(
        "200 instances exact ({collisions} in collision), {:.2} s",
        t.as_secs_f64()
    ))
}

fn c3_optimality(sh: &mut Shared) -> Outcome {
    let clock = Instant::now();
    sh.small = small_solvable_scenarios(20);
    for (p, c_star) in &sh.small {
        let params = ParamOverrides {
            epsilon: Some(1.0),
            ..ParamOverrides::default()
        }
        .resolve(2, 4.0, Mode::Fixed)
        .unwrap();
        let r = ara_star(p, &params).unwrap();
        ensure!(r.is_solved(), "{}: no solution", p.name());
        let c = r.iterations[0].cost;
        ensure!((c - c_star).abs() <= 1e-9, "{}: {c} vs Dijkstra {c_star}", p.name());
        sh.runs.push((format!("{} eps=1", p.name()), r));
    }
    let t = clock.elapsed();
    ensure!(t < Duration::from_secs(120), "took {:.1} s", t.as_secs_f64());
    Ok(format!("20 scenarios match Dijkstra, {:.2} s", t.as_secs_f64()))
}

fn c4_bounded_suboptimality(sh: &mut Shared) -> Outcome {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (p, c_star) in &sh.small {
        for eps in [1.5, 3.0, 10.0] {
            let params = ParamOverrides {
                epsilon: Some(eps),
                ..ParamOverrides::default()
            }
            .resolve(2, 4.0, Mode::Fixed)
            .unwrap();
            let r = ara_star(p, &params).unwrap();
            for it in &r.iterations {
                ensure!(
                    it.cost <= it.eps_prime * c_star + 1e-9,
                    "{} eps={eps}: cost {} > {} * {c_star}",
                    p.name(),
                    it.cost,
                    it.eps_prime
                );
                worst = worst.max(it.cost / c_star);
                checked += 1;
            }
            sh.runs.push((format!("{} eps={eps}", p.name()), r));
        }
    }
    Ok(format!("{checked} solutions within bound, worst cost/c* {worst:.4}"))
}

fn c5_cost_equality(sh: &mut Shared) -> Outcome {
    let out = &sh.sweep_2dof;
    let mut compared = 0;
    for fixed in out.cells.iter().filter(|c| c.mode == Mode::Fixed) {
        let bur = out
            .cells
            .iter()
            .find(|c| c.mode == Mode::Bur && c.scenario == fixed.scenario && c.m_prim_deg == fixed.m_prim_deg)
            .unwrap();
        let converged = |r: &PlanResult| r.status == PlanStatus::SolvedOptimal;
        if !(converged(&fixed.runs[0]) && converged(&bur.runs[0])) {
            continue;
        }
        let (a, b) = (fixed.runs[0].cost, bur.runs[0].cost);
        ensure!(
            (a - b).abs() <= 1e-9,
            "{} at {} deg: fixed {a:.9} / bur {b:.9}",
            fixed.scenario,
            fixed.m_prim_deg
        );
        compared += 1;
    }
    ensure!(compared > 0, "no cell converged in both modes");
    Ok(format!("{compared} of 27 cells converged in both modes, all equal"))
}

fn c6_degradation(_: &mut Shared) -> Outcome {
    let p = Problem::new(Scenario::load(data_path("corridor_2dof.toml")).unwrap()).unwrap();
    let params = ParamOverrides::default().resolve(2, 4.0, Mode::Bur).unwrap();
    let lattice = Lattice::new(p.q_start.clone(), params.primitives.m_prim);
    let ctx = SuccessorContext {
        chain: &p.chain,
        model: &p.model,
        grid: &p.grid,
        lattice: &lattice,
        params: &params.primitives,
        check_step: p.check_step,
    };
    let mut expansions = 0;
    let mut failure = None;
    let r = ara_star_observed(&p, &params, &mut |e| {
        expansions += 1;
        if failure.is_some() {
            return;
        }
        let d_c = e.clearance.unwrap_or(f64::INFINITY);
        let lattice_part: Vec<_> = e.successors.iter().filter(|s| s.coord.is_some()).cloned().collect();
        if d_c >= 0.03 {
            failure = Some(format!("clearance {d_c} at {:?}", e.q));
        } else if lattice_part != ctx.fixed_successors(e.q, e.coord).entries {
            failure = Some(format!("successor sets differ at {:?}", e.q));
        }
    })
    .unwrap();
    if let Some(f) = failure {
        return Err(f);
    }
    ensure!(r.is_solved(), "corridor not solved");
    Ok(format!("{expansions} expansions, every set identical to fixed"))
}

fn c7_efficiency(sh: &mut Shared) -> Outcome {
    let p = shipped("7dof_easy");
    let mut n = [0u64; 2];
    let mut t = [Duration::ZERO; 2];
    for (k, mode) in [Mode::Fixed, Mode::Bur].into_iter().enumerate() {
        let params = ParamOverrides {
            t_repair_s: Some(1.0),
            ..ParamOverrides::default()
        }
        .resolve(7, 4.0, mode)
        .unwrap();
        let r = ara_star(&p, &params).unwrap();
        ensure!(r.is_solved(), "{mode}: no first solution");
        n[k] = r.n_init;
        t[k] = r.t_init;
        sh.runs.push((format!("7dof_easy@4 {mode}"), r));
    }
    ensure!(t[1] < Duration::from_secs(60), "bur t_init {:.1} s", t[1].as_secs_f64());
    ensure!(n[1] as f64 <= 0.8 * n[0] as f64, "n_init fixed {} / bur {}", n[0], n[1]);
    Ok(format!(
        "n_init fixed {} / bur {} ({:.0}% fewer), t_init bur {:.1} ms",
        n[0],
        n[1],
        100.0 * (1.0 - n[1] as f64 / n[0] as f64),
        t[1].as_secs_f64() * 1e3
    ))
}

fn c8_monotonicity(sh: &mut Shared) -> Outcome {
    let sweep = sh.sweep_2dof.cells.iter().flat_map(|c| {
        c.runs
            .iter()
            .map(move |r| (format!("{}@{} {}", c.scenario, c.m_prim_deg, c.mode), r))
    });
    let extra = sh.runs.iter().map(|(n, r)| (n.clone(), r));
    let mut total = 0;
    for (name, r) in sweep.chain(extra) {
        for w in r.iterations.windows(2) {
            ensure!(
                w[1].cost <= w[0].cost,
                "{name}: cost rose {} -> {}",
                w[0].cost,
                w[1].cost
            );
            ensure!(
                w[1].eps_prime <= w[0].eps_prime,
                "{name}: eps' rose {} -> {}",
                w[0].eps_prime,
                w[1].eps_prime
            );
        }
        if r.is_solved() {
            ensure!(r.eps_prime_final >= 1.0, "{name}: final eps' {}", r.eps_prime_final);
        }
        total += 1;
    }
    Ok(format!("{total} runs monotone"))
}

fn c9_resolution(sh: &mut Shared) -> Outcome {
    let out = &sh.sweep_2dof;
    let fixed = out
        .resolution_ratio("2dof_easy", Mode::Fixed)
        .ok_or("fixed ratio unavailable")?;
    let bur = out
        .resolution_ratio("2dof_easy", Mode::Bur)
        .ok_or("bur ratio unavailable")?;
    ensure!(bur < fixed, "n_final ratio 4/12 deg: fixed {fixed:.3} / bur {bur:.3}");
    Ok(format!("n_final ratio 4/12 deg: fixed {fixed:.3} / bur {bur:.3}"))
}

fn non_timing(csv_text: &str) -> Vec<Vec<String>> {
    let keep: Vec<usize> = CSV_HEADER
        .iter()
        .enumerate()
        .filter(|(_, h)| !h.starts_with("t_"))
        .map(|(i, _)| i)
        .collect();
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| {
            let r = r.unwrap();
            keep.iter().map(|&i| r[i].to_string()).collect()
        })
        .collect()
}

fn c10_determinism(sh: &mut Shared) -> Outcome {
    let again = sweep_2dof();
    let (a, b) = (
        non_timing(&sh.sweep_2dof.to_csv_string()),
        non_timing(&again.to_csv_string()),
    );
    ensure!(a.len() == b.len(), "row counts differ");
    for (x, y) in a.iter().zip(&b) {
        ensure!(x == y, "rows differ: {x:?} vs {y:?}");
    }
    Ok(format!("{} rows identical outside timing columns", a.len()))
}

fn main() -> ExitCode {
    let clock = Instant::now();
    let mut sh = Shared {
        sweep_2dof: sweep_2dof(),
        runs: Vec::new(),
        small: Vec::new(),
    };
    let criteria: [Criterion; 10] = [
        ("spine safety", c1_spine_safety),
        ("clearance oracle", c2_clearance_oracle),
        ("optimality oracle", c3_optimality),
        ("bounded suboptimality", c4_bounded_suboptimality),
        ("cost equality at convergence", c5_cost_equality),
        ("degradation", c6_degradation),
        ("efficiency trend", c7_efficiency),
        ("anytime monotonicity", c8_monotonicity),
        ("resolution sensitivity", c9_resolution),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let (tag, detail) = match check(&mut sh) {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {name:<30} {tag}  {detail}", k + 1);
    }
    println!(
        "acceptance: {}/10 passed in {:.1} s",
        10 - failed,
        clock.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
