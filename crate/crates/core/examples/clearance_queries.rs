//! Clearance, moment arms and bur spine lengths along a sweep of the
//! first joint.
//!
//! cargo run --example clearance_queries

use bur_planner::prelude::*;
use bur_planner::primitives::{discretize_spine, spine_length};
use bur_planner::robot::{clearance, forward_kinematics, moment_arms};

fn main() -> Result<()> {
    let path = format!("{}/scenarios/2dof_medium.toml", env!("CARGO_MANIFEST_DIR"));
    let p = Problem::new(Scenario::load(path)?)?;
    let m = 4f64.to_radians();
    println!(
        "{:>6} {:>6} {:>8} {:>7} {:>7} {:>9} {:>9}",
        "q1", "q2", "d_c [m]", "r1", "r2", "spine1", "spine2"
    );
    for q1 in (-180..180).step_by(30) {
        let q = Configuration::from_degrees(&[q1 as f64, 40.0]);
        let c = clearance(&p.chain, &p.model, &p.grid, &q, 1.0)?;
        let arms = moment_arms(&forward_kinematics(&p.chain, &p.model, &q)?);
        let spine = |r: f64| {
            if c.in_collision {
                "-".to_string()
            } else {
                format!("{:.1} deg", discretize_spine(spine_length(c.d_c, r), m).to_degrees())
            }
        };
        println!(
            "{q1:>6} {:>6} {:>8.4} {:>7.3} {:>7.3} {:>9} {:>9}",
            40,
            c.d_c,
            arms[0],
            arms[1],
            spine(arms[0]),
            spine(arms[1])
        );
    }
    Ok(())
}
