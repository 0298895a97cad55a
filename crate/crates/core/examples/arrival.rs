//! Prints when the directed-ring and Moebius-ladder walks first reach the
//! far side of the graph, for a few phases.
//!
//!     cargo run --release -p dqwalk --example arrival

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqwalk::{
    arrival_time, build_moebius_ladder, build_ring, run_walk, CouplingSeries, InitialState, Phase,
    Substrate, TimeGrid,
};

fn main() -> dqwalk::Result<()> {
    let grid = TimeGrid::new(0.0, 40.0, 4001)?;
    let i0 = 100;
    for (name, g) in [
        ("ring 200", build_ring(200, true)?),
        ("ladder 202", build_moebius_ladder(202, true)?),
    ] {
        let n = g.node_count();
        let psi = InitialState::localized(n, i0)?;
        for alpha in [0.0, FRAC_PI_4, FRAC_PI_2] {
            let r = run_walk(
                Substrate::auto(&g),
                Phase::new(alpha)?,
                &CouplingSeries::Exp,
                &psi,
                &grid,
            )?;
            let far = (i0 + n / 2) % n;
            let arrivals: Vec<String> = [far, (far + n - 1) % n, (far + 1) % n]
                .iter()
                .map(|&i| match arrival_time(&r, i, 0.01) {
                    Some(t) => format!("node {i}: {t:.2}"),
                    None => format!("node {i}: never"),
                })
                .collect();
            println!("{name:>10}  alpha = {alpha:.4}  {}", arrivals.join("  "));
        }
    }
    Ok(())
}
