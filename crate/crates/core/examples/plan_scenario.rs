//! Plans one shipped scenario in bur mode and prints the path.
//!
//! cargo run --example plan_scenario -- [scenario] [m_prim_deg]

use bur_planner::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "2dof_medium".into());
    let m_deg: f64 = args.next().map(|s| s.parse().expect("degrees")).unwrap_or(6.0);

    let path = format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    let problem = Problem::new(Scenario::load(path)?)?;
    let params = PlannerParams::for_dof(problem.dof(), PrimitiveParams::from_degrees(m_deg, Mode::Bur));
    let r = ara_star(&problem, &params)?;

    println!(
        "{name}: {} cost {:.4} rad, eps' {:.2}",
        r.status.as_str(),
        r.cost,
        r.eps_prime_final
    );
    println!(
        "n_init {} in {:.2} ms, {} passes",
        r.n_init,
        r.t_init.as_secs_f64() * 1e3,
        r.iterations.len()
    );
    for (q, (prov, cost)) in r.path.iter().skip(1).zip(&r.edges) {
        let deg: Vec<String> = q.to_degrees().iter().map(|d| format!("{d:7.2}")).collect();
        println!("  {:<9} {cost:.4}  [{}]", format!("{prov:?}"), deg.join(" "));
    }
    Ok(())
}
