//! Outward-rounded interval arithmetic: every result encloses all real
//! values of the operation over its operands.

use boxsolve::interval::{extended_divide, ExtendedQuotient};
use boxsolve::{Interval, IntervalBox};

fn main() {
    let a = Interval::new(1.0, 2.0);
    let b = Interval::new(-3.0, 0.5);
    println!("a = {a}, b = {b}");
    println!("a + b = {}", a + b);
    println!("a - b = {}", a - b);
    println!("a * b = {}", a * b);
    println!("a / [2, 4] = {}", a / Interval::new(2.0, 4.0));

    // 0.1 is not a double, so its enclosure has nonzero width
    let tenth = Interval::point(1.0) / Interval::point(10.0);
    println!("1/10 in {tenth}, width {:e}", tenth.wid());

    println!("sin([0, pi]) = {}", Interval::new(0.0, std::f64::consts::PI).sin());
    println!("exp([-1, 1]) = {}", Interval::new(-1.0, 1.0).exp());
    println!("[-2, 3]^2 = {}", Interval::new(-2.0, 3.0).powi(2));
    println!("sqrt([4, 9]) = {}", Interval::new(4.0, 9.0).sqrt());

    // Division by an interval containing zero can split into two pieces.
    match extended_divide(Interval::new(1.0, 2.0), Interval::new(-1.0, 1.0)) {
        ExtendedQuotient::Two(l, r) => println!("[1,2] / [-1,1] = {l} u {r}"),
        other => println!("[1,2] / [-1,1] = {other:?}"),
    }

    let bx = IntervalBox::from_bounds(&[(0.0, 4.0), (-1.0, 1.0)]);
    let (left, right) = bx.bisect(bx.widest_dim(), None);
    println!("{bx} splits into {left} and {right}");
}
