//! Search effort under each bisection rule and node order. The certified
//! roots do not depend on the strategy; the number of cells does.

use boxsolve::generators::{gen_kuramoto, KuramotoParams};
use boxsolve::solver::{choose_bisection_var, smear_values, solve, BisectState, Bisector, NodeSelection, SolverConfig};

fn main() {
    let sys = gen_kuramoto(&KuramotoParams::new(4, 3)).unwrap().system;
    let b = sys.initial_box();
    println!("smear matrix on the initial box:{}", smear_values(&sys, b));
    for name in ["rr", "lf", "maxsmear", "sumsmear", "smearrel"] {
        let policy: Bisector = name.parse().unwrap();
        let v = choose_bisection_var(&sys, b, &policy, &mut BisectState::default(), 1e-6);
        print!("{name:>9}: first split on {:<3}", sys.variables()[v]);
        for sel in [NodeSelection::Dfs, NodeSelection::Bfs, NodeSelection::MinMidResidual] {
            let cfg = SolverConfig { bisector: policy.clone(), node_selection: sel, ..SolverConfig::default() };
            let r = solve(&sys, &cfg).unwrap();
            print!("  {sel:?}: {} roots / {} cells", r.certified.len(), r.stats.cells);
        }
        println!();
    }
}
