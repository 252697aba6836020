//! Fixed primitives against burs on every shipped scenario at one
//! primitive length: first-solution expansions and converged cost.
//!
//! cargo run --release --example compare_primitives -- [m_prim_deg]

use std::time::Duration;

use bur_planner::prelude::*;

fn main() -> Result<()> {
    let m_deg: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("degrees"))
        .unwrap_or(4.0);
    println!(
        "{:<12} {:>16} {:>20} {:>20}",
        "scenario", "n_init fixed/bur", "t_init ms fixed/bur", "c fixed/bur"
    );
    for name in [
        "2dof_easy",
        "2dof_medium",
        "2dof_hard",
        "7dof_easy",
        "7dof_medium",
        "7dof_hard",
    ] {
        let path = format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
        let problem = Problem::new(Scenario::load(path)?)?;
        let run = |mode| {
            let mut params = PlannerParams::for_dof(problem.dof(), PrimitiveParams::from_degrees(m_deg, mode));
            // Keep the 7-DoF improvement phase short for a quick comparison.
            params.t_repair = params.t_repair.min(Duration::from_secs(2));
            ara_star(&problem, &params)
        };
        let (f, b) = (run(Mode::Fixed)?, run(Mode::Bur)?);
        println!(
            "{name:<12} {:>16} {:>20} {:>20}",
            format!("{} / {}", f.n_init, b.n_init),
            format!(
                "{:.1} / {:.1}",
                f.t_init.as_secs_f64() * 1e3,
                b.t_init.as_secs_f64() * 1e3
            ),
            format!("{:.3} / {:.3}", f.cost, b.cost),
        );
    }
    Ok(())
}
