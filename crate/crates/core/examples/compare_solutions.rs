//! Cross-checking two runs on the same instance: roots found by both are
//! matched, and roots found by only one side are either explained by an
//! unresolved box on the other side or reported as discrepancies.

use boxsolve::bench::{compare_results, SolutionSet};
use boxsolve::parse_system;
use boxsolve::solver::{solve, NodeSelection, SolverConfig};
use boxsolve::IntervalBox;

fn main() {
    let sys = parse_system("vars x, y\nbox [-2, 2]^2\neq x^2 + y^2 - 1\neq y - x^3 + 0.1").unwrap();
    let dfs = solve(&sys, &SolverConfig::default()).unwrap();
    let bfs = solve(&sys, &SolverConfig { node_selection: NodeSelection::Bfs, bisector: "rr".parse().unwrap(), ..SolverConfig::default() })
        .unwrap();

    let a = SolutionSet { certified: dfs.certified.clone(), unknown: dfs.unknown.clone() };
    let b = SolutionSet { certified: bfs.certified.clone(), unknown: bfs.unknown.clone() };
    let rep = compare_results(&a, &b, 1e-5);
    println!("dfs/smearrel vs bfs/rr: {rep:?}, consistent: {}", rep.is_consistent());

    // A root reported inside one of the other side's unresolved boxes is a
    // suspect, not a contradiction.
    let mut c = b.clone();
    let extra = IntervalBox::from_bounds(&[(1.5, 1.5 + 1e-9), (0.0, 1e-9)]);
    c.certified.push(extra.clone());
    let mut d = a.clone();
    d.unknown.push(extra.inflate(2.0));
    println!("with an explained extra root: {:?}", compare_results(&d, &c, 1e-5));
    println!("with an unexplained extra root: {:?}", compare_results(&a, &c, 1e-5));
}
