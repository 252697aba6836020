//! How the solution improves pass by pass as the inflation factor shrinks.
//!
//! cargo run --release --example anytime_schedule -- [scenario] [mode]

use bur_planner::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "2dof_hard".into());
    let mode: Mode = args.next().unwrap_or_else(|| "bur".into()).parse()?;

    let path = format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    let problem = Problem::new(Scenario::load(path)?)?;
    let params = PlannerParams::for_dof(problem.dof(), PrimitiveParams::from_degrees(4.0, mode));
    let r = ara_star(&problem, &params)?;

    println!(
        "{name} {mode}: eps {} -> 1 in steps of {}",
        params.epsilon_init, params.delta_epsilon
    );
    println!(
        "{:>5} {:>7} {:>7} {:>10} {:>11} {:>10}",
        "pass", "eps", "eps'", "cost", "expansions", "ms"
    );
    for (k, it) in r.iterations.iter().enumerate() {
        println!(
            "{:>5} {:>7.2} {:>7.3} {:>10.4} {:>11} {:>10.2}",
            k + 1,
            it.epsilon,
            it.eps_prime,
            it.cost,
            it.expansions,
            it.elapsed.as_secs_f64() * 1e3
        );
    }
    println!("{}", r.status.as_str());
    Ok(())
}
