//! Reading a system from text and evaluating it in several ways.

use boxsolve::expr::{eval_horner, eval_mean_value};
use boxsolve::{parse_system, IntervalBox};

const TEXT: &str = "
name demo
vars x, y
box x in [-1, 2]
box y in [0, 1]
eq x^3 - 2*x*y + y^2 - 0.5
eq exp(x) - 3*y
";

fn main() {
    let sys = parse_system(TEXT).expect("valid system");
    println!("{sys}");

    let b = IntervalBox::from_bounds(&[(0.5, 0.75), (0.25, 0.5)]);
    for (k, c) in sys.equations().iter().enumerate() {
        let natural = c.expr().eval(&b);
        let mean_value = eval_mean_value(c.expr(), c.gradient(), &b).unwrap();
        print!("f{k} over {b}: natural {natural}, mean value {mean_value}");
        match eval_horner(c.expr(), &b) {
            Ok(h) => println!(", horner {h}"),
            Err(_) => println!(" (not polynomial)"),
        }
    }

    let x = [0.6, 0.6];
    println!("residual at {x:?}: {:?}", sys.residual(&x));
    println!("jacobian at {x:?}:{}", sys.jacobian_point(&x));
    let j = sys.jacobian(&b);
    println!("interval jacobian over {b}:");
    for i in 0..j.nrows() {
        let row: Vec<String> = j.row(i).iter().map(|v| v.to_string()).collect();
        println!("  {}", row.join("  "));
    }
}
