//! Writes workspace and C-space SVGs for a 2-DoF scenario planned in both
//! modes.
//!
//! cargo run --example render_cspace -- [scenario] [out_dir]

use bur_planner::bench::{render_cspace, render_workspace, ExpansionRecord};
use bur_planner::planner::ara_star_observed;
use bur_planner::prelude::*;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "2dof_hard".into());
    let out = std::path::PathBuf::from(args.next().unwrap_or_else(|| "target/svg".into()));
    std::fs::create_dir_all(&out)?;

    let path = format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    let problem = Problem::new(Scenario::load(path)?)?;
    for mode in [Mode::Fixed, Mode::Bur] {
        let params = PlannerParams::for_dof(2, PrimitiveParams::from_degrees(6.0, mode));
        let mut log = Vec::new();
        let r = ara_star_observed(&problem, &params, &mut |e| log.push(ExpansionRecord::from_event(e)))?;
        for (kind, svg) in [
            ("cspace", render_cspace(&problem, &log, 2.0)?),
            ("workspace", render_workspace(&problem, &r.path)?),
        ] {
            let file = out.join(format!("{name}_{mode}_{kind}.svg"));
            std::fs::write(&file, svg)?;
            println!("wrote {} ({} expansions)", file.display(), log.len());
        }
    }
    Ok(())
}
