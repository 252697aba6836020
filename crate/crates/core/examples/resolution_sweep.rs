//! The 4..12 degree sweep on the 2-DoF scenarios, printed as paired
//! fixed / bur tables with the resolution sensitivity ratios.
//!
//! cargo run --release --example resolution_sweep

use bur_planner::bench::{run_sweep, SweepSpec};
use bur_planner::prelude::*;

fn main() -> Result<()> {
    let mut scenes = Vec::new();
    for name in ["2dof_easy", "2dof_medium", "2dof_hard"] {
        let path = format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
        scenes.push(Problem::new(Scenario::load(path)?)?);
    }
    let outcome = run_sweep(&SweepSpec::new(scenes))?;
    print!("{}", outcome.paired_tables());
    println!("sweep took {:.1} s", outcome.elapsed.as_secs_f64());
    Ok(())
}
