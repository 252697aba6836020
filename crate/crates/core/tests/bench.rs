mod common;

use bur_planner::bench::{
    cspace_obstacle_raster, render_cspace, render_workspace, run_sweep, ExpansionRecord, ParamOverrides, SweepSpec,
};
use bur_planner::planner::ara_star_observed;
use bur_planner::primitives::{Mode, Provenance};
use bur_planner::Error;

use common::*;

#[test]
fn sweep_rows_costs_and_counts() {
    let mut spec = SweepSpec::new(vec![shipped("2dof_easy")]);
    spec.serial = true;
    let outcome = run_sweep(&spec).unwrap();
    for mode in [Mode::Fixed, Mode::Bur] {
        assert_eq!(outcome.records().filter(|r| r.mode == mode).count(), 9);
    }
    for cell in &outcome.cells {
        let run = &cell.runs[0];
        let recomputed: f64 = run.path.windows(2).map(|w| w[0].distance(&w[1])).sum();
        assert!((recomputed - cell.record.c_rad.unwrap()).abs() < 1e-9);
        for n in [cell.record.n_init, cell.record.n_final].into_iter().flatten() {
            assert_eq!(n, n.round());
        }
    }
    let text = outcome.paired_tables();
    assert!(text.contains("2dof_easy (fixed / bur)"));
    assert!(text.contains("n_final ratio finest/coarsest"));
}

#[test]
fn bur_edges_are_multiples_of_the_fixed_step() {
    let p = shipped("2dof_medium");
    let params = ParamOverrides::default().resolve(2, 6.0, Mode::Bur).unwrap();
    let m = params.primitives.m_prim;
    let mut log = Vec::new();
    ara_star_observed(&p, &params, &mut |e| log.push(ExpansionRecord::from_event(e))).unwrap();
    let mut bur = 0;
    for rec in &log {
        for s in rec.successors.iter().filter(|s| s.provenance != Provenance::GoalSnap) {
            let k = s.cost / m;
            assert!((k - k.round()).abs() < 1e-9 && k >= 1.0 - 1e-9);
            bur += usize::from(s.provenance == Provenance::Bur && k > 1.5);
        }
    }
    assert!(bur > 0, "no multi-step bur edges logged");
}

#[test]
fn workspace_render_trace_avoids_obstacles() {
    let p = shipped("2dof_hard");
    let params = ParamOverrides::default().resolve(2, 4.0, Mode::Bur).unwrap();
    let r = bur_planner::planner::ara_star(&p, &params).unwrap();
    assert!(r.is_solved());
    for q in &r.path {
        let tip = p.chain.joint_positions(q).unwrap().last().copied().unwrap();
        assert!(p.scenario.obstacles.iter().all(|o| !o.contains(tip)));
    }
    let svg = render_workspace(&p, &r.path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), r.path.len() + 1);
    assert!(svg.contains("stroke-dasharray"));
}

#[test]
fn cspace_render_matches_raster() {
    let p = shipped("2dof_medium");
    let raster = cspace_obstacle_raster(&p, 3.0).unwrap();
    assert!(raster.blocked_count() > 0);
    let svg = render_cspace(&p, &[], 3.0).unwrap();
    let cw = 720.0 / raster.cols as f64;
    let covered: f64 = svg
        .lines()
        .filter(|l| l.contains(r#"class="cobs""#))
        .map(|l| {
            let w = l.split("width=\"").nth(1).unwrap().split('"').next().unwrap();
            w.parse::<f64>().unwrap() / cw
        })
        .sum();
    assert!((covered - raster.blocked_count() as f64).abs() < 1e-3 * raster.rows as f64);
    assert_eq!(render_cspace(&p, &[], 3.0).unwrap(), svg);
}

#[test]
fn cspace_needs_two_joints() {
    let p = shipped("7dof_easy");
    assert!(matches!(cspace_obstacle_raster(&p, 2.0), Err(Error::Unsupported(_))));
}
