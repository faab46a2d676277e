//! The available contractors applied to the same box, and a pipeline that
//! chains them.

use boxsolve::contract::{Benhamou, Contractor, HansenSengupta, Hc4, Krawczyk, Shave3B};
use boxsolve::parse_system;
use boxsolve::solver::PipelineSpec;

fn main() {
    let sys = parse_system("vars x, y\nbox [-2, 2]^2\neq x^2 + y^2 - 1\neq x*y - 0.3").unwrap();
    let b = boxsolve::IntervalBox::from_bounds(&[(0.2, 1.2), (0.1, 0.6)]);
    let stages: Vec<Box<dyn Contractor>> = vec![
        Box::new(Hc4::default()),
        Box::new(Benhamou::default()),
        Box::new(Shave3B::default()),
        Box::new(HansenSengupta),
        Box::new(Krawczyk),
    ];
    println!("input {b}");
    for c in &stages {
        match c.contract(&sys, &b).hull() {
            Some(h) => println!("{:>16}: {h}", c.name()),
            None => println!("{:>16}: empty", c.name()),
        }
    }

    let pipeline = "hc4,bc3,3b,hs".parse::<PipelineSpec>().unwrap().build(1e-8);
    let mut counts = Default::default();
    let out = pipeline.contract_counted(&sys, &b, &mut counts);
    println!("pipeline {:?}: {:?}", pipeline.stage_names(), out.hull());
    println!("calls {counts:?}");
}
