//! Branch-and-prune on a small system with the default pipeline, then with
//! HC4 alone, with and without Newton probing from cell midpoints.
//!
//! ```text
//! cargo run --release --example solve_system
//! ```

use boxsolve::parse_system;
use boxsolve::solver::{solve, SolverConfig};

fn main() {
    let sys = parse_system(
        "name trig_circle
         vars x, y
         box [-2, 2]^2
         eq sin(3*x) + y - 0.2
         eq x^2 + y^2 - 1",
    )
    .unwrap();

    let runs = [("hc4,bc3,3b,hs", false), ("hc4", false), ("hc4", true)];
    for (pipeline, probe) in runs {
        let cfg = SolverConfig { pipeline: pipeline.parse().unwrap(), probe, ..SolverConfig::default() };
        let r = solve(&sys, &cfg).unwrap();
        println!(
            "{pipeline} probe={probe}: {} in {:.3}s, {} cells, {} bisections, {} probe hits",
            r.status,
            r.stats.wall_time.as_secs_f64(),
            r.stats.cells,
            r.stats.bisections,
            r.stats.probe_hits
        );
        for b in &r.certified {
            println!("  root in {b}");
        }
        for b in &r.unknown {
            println!("  unresolved {b}");
        }
    }
}
