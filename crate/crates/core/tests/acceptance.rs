//! End-to-end acceptance checks. Each check prints one PASS/FAIL line and the
//! process exits non-zero if any of them fails.

mod common;

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use boxsolve::bench::{
    load_sdd, summarize, write_sdd, Category, FamilyEntry, OutputFile, RunRecord, SddInstance, SddTree, SolutionFile,
};
use boxsolve::certify::{dedup_solutions, hansen_sengupta_test, krawczyk_test};
use boxsolve::contract::{hc4_revise_with_nodes, Benhamou, ContractionOutcome, Contractor, HansenSengupta, Hc4, Krawczyk, Shave3B};
use boxsolve::generators::{
    constructed_orbit, gen_kuramoto, gen_orbit, gen_planar_robot, gen_robot, KuramotoParams, RobotMode, RobotParams,
};
use boxsolve::solver::{solve, Bisector, NodeSelection, SolveStatus, SolverConfig};
use boxsolve::{parse_system, Interval, IntervalBox, System};
use common::{damped_newton, inf_norm, kuramoto_oracle, newton_polish, orbit_residual, parse_omega, two_link_ik, PlainSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(tau);
    d.min(tau - d)
}

fn propagation_figure() -> Outcome {
    let sys = parse_system("nonsquare\nvars x, y, z\nbox x in [-5, 5]\nbox y in [-5, 5]\nbox z in [2, 10]\neq 2^x - (z + y^2)").unwrap();
    let c = &sys.equations()[0];
    let b = sys.initial_box().clone();
    let mut nodes = Vec::new();
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..20 {
        let t = Instant::now();
        let r = hc4_revise_with_nodes(c.expr(), c.relation(), &b, &mut nodes);
        best = best.min(t.elapsed());
        out = Some(r);
    }
    let ContractionOutcome::Contracted(r) = out.unwrap() else {
        return outcome(false, "revision reported an empty box");
    };
    let e = c.expr();
    let root = e.nodes()[e.root()];
    let lhs = nodes[root.a];
    let ulp_close = |v: f64, t: f64| v == t || v.next_up() == t || v.next_down() == t;
    let x_ok = ulp_close(r[0].lo(), 1.0) && ulp_close(r[0].hi(), 5.0);
    let y_ok = r[1] == b[1];
    let node_ok = lhs == Interval::new(2.0, 32.0);
    let time_ok = best < Duration::from_millis(1);
    outcome(
        x_ok && y_ok && node_ok && time_ok,
        format!("x={} y={} z={} node={} time={:?}", r[0], r[1], r[2], lhs, best),
    )
}

fn two_link_robot() -> Outcome {
    let mut p = RobotParams::new(2, RobotMode::PlanarTrig, 0);
    p.lengths = Some(vec![1.0, 1.0]);
    p.end = Some(vec![1.0, 1.0]);
    let sys = gen_planar_robot(&p).unwrap().system;
    let t = Instant::now();
    let r = solve(&sys, &SolverConfig::default()).unwrap();
    let el = t.elapsed();
    let ik = two_link_ik(1.0, 1.0, 1.0, 1.0);
    let mut worst = 0.0f64;
    let matched = r.certified.len() == ik.len()
        && ik.iter().all(|q| {
            r.certified.iter().any(|b| {
                let m = b.mid();
                let d = angle_diff(m[0], q[0]).max(angle_diff(m[1], q[1]));
                if d < 1e-6 {
                    worst = worst.max(d);
                }
                d < 1e-6
            })
        });
    outcome(
        r.certified.len() == 2 && matched && el < Duration::from_secs(1),
        format!("{} certified, max angle error {:.1e}, {:?}", r.certified.len(), worst, el),
    )
}

fn kuramoto_small() -> Outcome {
    let t = Instant::now();
    let mut agree = 0;
    let mut mismatches = Vec::new();
    for seed in 0..50u64 {
        let sys = gen_kuramoto(&KuramotoParams::new(3, seed)).unwrap().system;
        let omega = parse_omega(&sys.metadata()["omega"]);
        let oracle = kuramoto_oracle(&omega, 10_000, 1000 + seed);
        let r = solve(&sys, &SolverConfig::default()).unwrap();
        let contained = oracle.iter().all(|p| r.certified.iter().any(|b| b.inflate_abs_all(1e-8).contains_point(p)));
        if r.status == SolveStatus::Complete && r.certified.len() == oracle.len() && contained {
            agree += 1;
        } else {
            mismatches.push(format!("seed {seed}: {} vs {}", r.certified.len(), oracle.len()));
        }
    }
    let el = t.elapsed();
    outcome(
        agree == 50 && el < Duration::from_secs(300),
        format!("{agree}/50 agree with the oracle, {:.1}s {}", el.as_secs_f64(), mismatches.join("; ")),
    )
}

fn orbit() -> Outcome {
    let cfg = SolverConfig {
        pipeline: "hc4,3b,hs".parse().unwrap(),
        node_selection: NodeSelection::Bfs,
        probe: true,
        timeout: Duration::from_secs(25),
        ..SolverConfig::default()
    };
    let t = Instant::now();
    let mut hits = 0;
    let mut notes = Vec::new();
    for seed in 0..10u64 {
        let c = constructed_orbit(seed);
        let inst = gen_orbit(&c.params).unwrap();
        let (p, u) = (c.params.p, c.params.u);
        let plain = PlainSystem::new(14, move |x: &[f64]| orbit_residual(&p, &u, x));
        let r = solve(&inst.system, &cfg).unwrap();
        let target = c.conic();
        let found = r.certified.iter().any(|b| {
            let x = newton_polish(&plain, &b.mid());
            (0..5).all(|k| (x[9 + k] - target[k]).abs() <= 1e-4)
        });
        if found {
            hits += 1;
        }
        notes.push(format!("{seed}:{}{}", r.certified.len(), if found { "" } else { "!" }));
    }
    let el = t.elapsed();
    outcome(
        hits == 10 && el < Duration::from_secs(600),
        format!("{hits}/10 constructions recovered, {:.1}s [{}]", el.as_secs_f64(), notes.join(" ")),
    )
}

/// (system, point with residual ≤ 1e-12) pairs drawn from the generators.
fn soundness_pool() -> Vec<(System, Vec<f64>)> {
    let mut pool = Vec::new();
    for seed in 0..6u64 {
        for (m, mode) in [(2, RobotMode::PlanarTrig), (3, RobotMode::PlanarTrig), (2, RobotMode::PlanarPoly), (2, RobotMode::SpatialTrig)] {
            let inst = gen_robot(&RobotParams::new(m, mode, seed)).unwrap();
            pool.push((inst.system, inst.witness.unwrap()));
        }
    }
    for seed in 0..4u64 {
        let sys = gen_kuramoto(&KuramotoParams::new(3, seed)).unwrap().system;
        for p in kuramoto_oracle(&parse_omega(&sys.metadata()["omega"]), 200, seed) {
            pool.push((sys.clone(), p));
        }
    }
    for seed in 0..3u64 {
        let c = constructed_orbit(seed);
        pool.push((gen_orbit(&c.params).unwrap().system, c.root.to_vec()));
    }
    pool.retain(|(s, p)| inf_norm(&s.residual(p)) <= 1e-12);
    pool
}

fn soundness_fuzz() -> Outcome {
    let pool = soundness_pool();
    let contractors: Vec<Box<dyn Contractor>> = vec![
        Box::new(Hc4::default()),
        Box::new(Benhamou::default()),
        Box::new(Shave3B::default()),
        Box::new(HansenSengupta),
        Box::new(Krawczyk),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut lost = 0;
    let mut false_empty = 0;
    let trials = 10_000;
    for k in 0..trials {
        let (sys, p) = &pool[rng.random_range(0..pool.len())];
        let c = &contractors[k % contractors.len()];
        let bounds: Vec<(f64, f64)> = p
            .iter()
            .map(|&v| {
                let lo = 10f64.powf(rng.random_range(-6.0..0.5));
                let hi = 10f64.powf(rng.random_range(-6.0..0.5));
                (v - lo, v + hi)
            })
            .collect();
        let b = IntervalBox::from_bounds(&bounds).intersect(sys.initial_box());
        match c.contract(sys, &b) {
            ContractionOutcome::Empty => false_empty += 1,
            out => {
                if !out.boxes().iter().any(|o| o.contains_point(p)) {
                    lost += 1;
                }
            }
        }
    }
    outcome(
        lost == 0 && false_empty == 0,
        format!("{trials} trials over {} points: {lost} points lost, {false_empty} false empties", pool.len()),
    )
}

/// Near-linear system Ax + δ·(x_{i+1}² − x*_{i+1}²) − Ax* with root x*, in
/// text form and as a plain closure.
fn near_linear(n: usize, rng: &mut ChaCha8Rng) -> (System, Vec<f64>, Vec<Vec<f64>>, f64) {
    let root: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rng.random_range(1.0..2.0) } else { rng.random_range(-0.5..0.5) }).collect())
        .collect();
    let delta = rng.random_range(0.0..0.2);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut text = format!("vars {}\nbox [-3, 3]^{n}\n", names.join(", "));
    for i in 0..n {
        let k = (i + 1) % n;
        let rhs: f64 = (0..n).map(|j| a[i][j] * root[j]).sum::<f64>() + delta * root[k] * root[k];
        let lin: Vec<String> = (0..n).map(|j| format!("({:?})*{}", a[i][j], names[j])).collect();
        text += &format!("eq {} + ({delta:?})*{}^2 - ({rhs:?})\n", lin.join(" + "), names[k]);
    }
    (parse_system(&text).unwrap(), root, a, delta)
}

fn verification_ordering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut hs, mut kr, mut bad) = (0, 0, 0);
    for _ in 0..500 {
        let n = rng.random_range(2..=4);
        let (sys, root, a, delta) = near_linear(n, &mut rng);
        let plain = PlainSystem::new(n, |x: &[f64]| {
            (0..n)
                .map(|i| {
                    let k = (i + 1) % n;
                    (0..n).map(|j| a[i][j] * (x[j] - root[j])).sum::<f64>() + delta * (x[k] * x[k] - root[k] * root[k])
                })
                .collect()
        });
        let r = 10f64.powf(rng.random_range(-4.0..-0.3));
        let bounds: Vec<(f64, f64)> = root
            .iter()
            .map(|&v| {
                let c = v + rng.random_range(-1.5..1.5) * r;
                (c - r, c + r)
            })
            .collect();
        let b = IntervalBox::from_bounds(&bounds);
        let verdicts = [hansen_sengupta_test(&sys, &b), krawczyk_test(&sys, &b)];
        hs += verdicts[0].is_unique() as usize;
        kr += verdicts[1].is_unique() as usize;
        for v in &verdicts {
            if let Some(cb) = v.certified_box() {
                let z = damped_newton(&plain, &cb.mid(), 1e-12, 50);
                let tol = 1e-9 * cb.max_width().max(1e-9);
                let inside = z.is_some_and(|z| cb.inflate_abs_all(tol).contains_point(&z));
                if !inside {
                    bad += 1;
                }
            }
        }
    }
    outcome(hs >= kr && bad == 0 && hs > 0, format!("HS {hs}, Krawczyk {kr}, false certificates {bad}"))
}

trait InflateAll {
    fn inflate_abs_all(&self, r: f64) -> IntervalBox;
}

impl InflateAll for IntervalBox {
    fn inflate_abs_all(&self, r: f64) -> IntervalBox {
        IntervalBox::new(self.iter().map(|c| c.inflate_abs(r)).collect())
    }
}

fn invariance_suite() -> Vec<System> {
    let texts = [
        "vars x, y; box [-2, 2]^2; eq x^2 + y^2 - 1; eq x - y",
        "vars x, y; box [-2, 2]^2; eq (x - 1)^2 + y^2 - 1; eq x^2 + y^2 - 1",
        "vars x, y; box [-3, 3]^2; eq x^2 + 4*y^2 - 4; eq x*y - 0.5",
        "vars x, y; box [-2, 2]^2; eq sin(3*x) + y - 0.2; eq x^2 + y^2 - 1",
        "vars x, y, z; box [-2, 2]^3; eq x^2 + y^2 + z^2 - 1; eq x - y; eq y - z + 0.1",
        "vars x, y; box [-2, 2]^2; eq exp(x) + y - 2; eq x - y^2",
        "vars x; box [-2, 2]; eq x^3 - x - 0.1",
        "vars x, y; box [-2, 2]^2; eq cos(x) - y; eq x^2 + y - 1.5",
    ];
    let mut out: Vec<System> = texts.iter().map(|t| parse_system(t).unwrap()).collect();
    out.push(gen_kuramoto(&KuramotoParams::new(3, 0)).unwrap().system);
    let mut p = RobotParams::new(2, RobotMode::PlanarTrig, 0);
    p.lengths = Some(vec![1.0, 1.0]);
    p.end = Some(vec![1.0, 1.0]);
    out.push(gen_planar_robot(&p).unwrap().system);
    out
}

fn strategy_invariance() -> Outcome {
    let eps = 1e-6;
    let mut failures = Vec::new();
    let mut total_roots = 0;
    for (k, sys) in invariance_suite().iter().enumerate() {
        let mut reference: Option<Vec<Vec<f64>>> = None;
        for bis in [Bisector::RoundRobin, Bisector::LargestFirst, Bisector::SumSmear, Bisector::SmearRel] {
            for sel in [NodeSelection::Dfs, NodeSelection::Bfs] {
                let cfg = SolverConfig { eps, bisector: bis.clone(), node_selection: sel, ..SolverConfig::default() };
                let r = solve(sys, &cfg).unwrap();
                if r.status != SolveStatus::Complete {
                    failures.push(format!("system {k} {bis:?}/{sel:?} incomplete"));
                    continue;
                }
                let mids: Vec<Vec<f64>> = dedup_solutions(&r.certified, 10.0 * eps).iter().map(|b| b.mid()).collect();
                match &reference {
                    None => {
                        total_roots += mids.len();
                        reference = Some(mids);
                    }
                    Some(rf) => {
                        let same = rf.len() == mids.len()
                            && rf.iter().all(|a| mids.iter().any(|m| a.iter().zip(m).all(|(u, v)| (u - v).abs() <= 10.0 * eps)));
                        if !same {
                            failures.push(format!("system {k} {bis:?}/{sel:?}: {} vs {}", mids.len(), rf.len()));
                        }
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty() && total_roots > 0,
        format!("10 systems x 8 strategies, {total_roots} roots {}", failures.join("; ")),
    )
}

fn double_root() -> Outcome {
    let sys = parse_system("vars x; box [-1, 1]; eq x^2").unwrap();
    let cfg = SolverConfig::default();
    let r = solve(&sys, &cfg).unwrap();
    let good = r.unknown.iter().filter(|b| b.contains_point(&[0.0]) && b.max_width() < cfg.eps).count();
    outcome(
        r.certified.is_empty() && good >= 1,
        format!("{} certified, {} unknown ({good} around 0 below eps)", r.certified.len(), r.unknown.len()),
    )
}

fn kuramoto_six() -> Outcome {
    let sys = gen_kuramoto(&KuramotoParams::new(6, 0)).unwrap().system;
    let cfg = SolverConfig { timeout: Duration::from_secs(120), ..SolverConfig::default() };
    let r = solve(&sys, &cfg).unwrap();
    let el = r.stats.wall_time;
    outcome(
        r.status == SolveStatus::Complete && el < Duration::from_secs(120),
        format!("{} in {:.1}s, {} certified, {} cells", r.status, el.as_secs_f64(), r.certified.len(), r.stats.cells),
    )
}

fn synthetic_tree() -> SddTree {
    let mut instances = Vec::new();
    let b = |lo: f64, hi: f64| IntervalBox::from_bounds(&[(lo, hi), (lo * 0.5, hi * 0.5)]);
    for k in 0..20 {
        let (cat, id) = match k % 3 {
            0 => (Category::Polynomial, format!("non-parametric/polynomial/p{k:02}")),
            1 => (Category::NonPolynomial, format!("non-parametric/non-polynomial/q{k:02}")),
            _ => (Category::Family("circles".into()), format!("parametric/circles/instances/{k:05}")),
        };
        let text = if k % 3 == 1 {
            format!("name q{k}\nvars x, y\nbox [-2, 2]^2\neq sin(x) - y + 0.{k}\neq x^2 + y^2 - 1\n")
        } else {
            format!("name p{k}\nvars x, y\nbox [-2, 2]^2\neq x^2 + y^2 - {}\neq x - y\n", k + 1)
        };
        let mut inst = SddInstance::new(id, cat, text);
        if k % 2 == 0 {
            inst.output = Some(OutputFile {
                solver: "ref".into(),
                config: format!("cfg{k}"),
                status: "complete".into(),
                wall_time: 0.125 * k as f64,
                parse_time: 0.001,
                certified: 2,
                unknown: k % 4,
                cells: 10 * k as u64,
                extra: vec![("note".into(), format!("run {k}"))],
            });
            inst.solution = Some(SolutionFile {
                solver: "ref".into(),
                config: format!("cfg{k}"),
                variables: vec!["x".into(), "y".into()],
                certified: vec![b(0.5, 0.75 + k as f64 * 1e-3), b(-0.75, -0.5)],
                unknown: (0..k % 4).map(|j| b(j as f64, j as f64 + 1e-7)).collect(),
            });
        }
        if k % 5 == 0 {
            inst.info = Some(format!("seed={k}\n"));
        }
        instances.push(inst);
    }
    let families = vec![FamilyEntry {
        name: "circles".into(),
        parameter: Some("r = k + 1\n".into()),
        parametric_sys: Some("vars x, y\neq x^2 + y^2 - r\neq x - y\n".into()),
    }];
    SddTree { instances, families, skipped: Vec::new() }
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
    let mut entries: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_files(root, &p, out);
        } else {
            out.push((p.strip_prefix(root).unwrap().display().to_string(), fs::read(&p).unwrap()));
        }
    }
}

fn record(status: &str, wall_time: f64) -> RunRecord {
    RunRecord {
        instance: "i".into(),
        config: "c".into(),
        status: status.into(),
        wall_time,
        parse_time: 0.0,
        certified: 1,
        unknown: 0,
        cells: 1,
        message: String::new(),
    }
}

fn dataset_round_trip() -> Outcome {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let tree = synthetic_tree();
    write_sdd(&tree, first.path()).unwrap();
    let loaded = load_sdd(first.path()).unwrap();
    write_sdd(&loaded, second.path()).unwrap();
    let (mut fa, mut fb) = (Vec::new(), Vec::new());
    collect_files(first.path(), first.path(), &mut fa);
    collect_files(second.path(), second.path(), &mut fb);
    let files_same = fa == fb && !fa.is_empty();
    let loaded_all = loaded.instances.len() == 20 && loaded.skipped.is_empty();

    let records = vec![
        record("complete", 0.2),
        record("complete", 1.0),
        record("complete", 1.5),
        record("target-reached", 10.0),
        record("complete", 10.5),
        record("complete", 100.0),
        record("complete", 999.0),
        record("complete", 1000.0),
        record("complete", 1500.0),
        record("timeout", 30.0),
        record("timeout", 1000.0),
        record("error", 0.0),
    ];
    let s = summarize(&records);
    let bins_ok = s.bins == [2, 2, 2, 2, 3, 1];
    outcome(
        files_same && loaded_all && bins_ok,
        format!("{} files byte-identical: {files_same}, instances {}, bins {:?}", fa.len(), loaded.instances.len(), s.bins),
    )
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("hc4 propagation figure", propagation_figure),
        ("two-link robot", two_link_robot),
        ("kuramoto N=3 oracle", kuramoto_small),
        ("orbit constructions", orbit),
        ("contractor soundness fuzz", soundness_fuzz),
        ("verification ordering", verification_ordering),
        ("strategy invariance", strategy_invariance),
        ("double root", double_root),
        ("kuramoto N=6 timing", kuramoto_six),
        ("dataset round trip", dataset_round_trip),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in checks.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
