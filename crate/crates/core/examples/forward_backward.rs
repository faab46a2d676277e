//! Forward-backward revision of one constraint, showing the enclosure of
//! every node of the expression after the backward sweep.

use boxsolve::contract::{hc4_revise_with_nodes, propagate, ContractionOutcome};
use boxsolve::parse_system;

fn main() {
    let sys = parse_system("nonsquare\nvars x, y, z\nbox x in [-5, 5]\nbox y in [-5, 5]\nbox z in [2, 10]\neq 2^x - (z + y^2)")
        .unwrap();
    let c = &sys.equations()[0];
    let b = sys.initial_box();
    let mut nodes = Vec::new();
    match hc4_revise_with_nodes(c.expr(), c.relation(), b, &mut nodes) {
        ContractionOutcome::Contracted(r) => {
            println!("{b} -> {r}");
            for (k, (n, iv)) in c.expr().nodes().iter().zip(&nodes).enumerate() {
                println!("  node {k:>2} {:<12} {iv}", format!("{:?}", n.op));
            }
        }
        other => println!("{other:?}"),
    }

    // Propagation revises every constraint until no domain shrinks by more
    // than tau.
    let circle = parse_system("vars x, y\nbox [-10, 10]^2\neq x^2 + y^2 - 1\neq x - 2*y").unwrap();
    println!("{}", propagate(&circle, circle.initial_box(), 0.01).hull().unwrap());
}
