//! Proving that a box holds exactly one root, and what happens at a double
//! root where no such proof exists.

use boxsolve::certify::{dedup_solutions, hansen_sengupta_test, inflate_and_certify, krawczyk_test, miranda_test, Certifier};
use boxsolve::{parse_system, IntervalBox};

fn main() {
    let sys = parse_system("vars x, y\nbox [-2, 2]^2\neq x^2 + y^2 - 1\neq x - y").unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let b = IntervalBox::from_bounds(&[(r - 1e-3, r + 1e-3), (r - 1e-3, r + 1e-3)]);
    println!("krawczyk:        {:?}", krawczyk_test(&sys, &b));
    println!("hansen-sengupta: {:?}", hansen_sengupta_test(&sys, &b));
    println!("miranda:         {:?}", miranda_test(&sys, &b, true));

    // A tiny box next to the root fails; inflating it brings the root in.
    let off = IntervalBox::from_bounds(&[(r + 1e-9, r + 2e-9), (r + 1e-9, r + 2e-9)]);
    println!("off-root box: {:?}", hansen_sengupta_test(&sys, &off).is_unique());
    let grown = inflate_and_certify(&sys, &off, 4.0, 8, Certifier::HansenSengupta).unwrap();
    println!("after inflation: {:?}", grown.certified_box());

    let double = parse_system("vars x\nbox [-1, 1]\neq x^2").unwrap();
    let near0 = IntervalBox::from_bounds(&[(-1e-4, 1e-4)]);
    println!("x^2 near 0: {:?}", hansen_sengupta_test(&double, &near0));

    let dup = [b.clone(), b.inflate(1.0001), IntervalBox::from_bounds(&[(-0.8, -0.6), (-0.8, -0.6)])];
    println!("{} boxes after deduplication", dedup_solutions(&dup, 1e-6).len());
}
