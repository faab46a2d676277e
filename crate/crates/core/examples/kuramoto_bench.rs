//! A small benchmark run: generate a dataset directory, solve every
//! instance, then print the timing summary.
//!
//! ```text
//! cargo run --release --example kuramoto_bench -- /tmp/kuramoto-data
//! ```

use std::path::PathBuf;

use boxsolve::bench::{load_sdd, run_benchmark, summarize, write_instance, Category, SddInstance};
use boxsolve::generators::{gen_kuramoto, KuramotoParams};
use boxsolve::solver::SolverConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("boxsolve-kuramoto"));
    for seed in 0..8 {
        let sys = gen_kuramoto(&KuramotoParams::new(4, seed))?.system;
        let id = format!("parametric/kuramoto-n4/instances/{seed:05}");
        let mut inst = SddInstance::new(id, Category::Family("kuramoto-n4".into()), sys.to_text());
        inst.info = Some(format!("seed={seed}\n"));
        write_instance(&inst, &root)?;
    }

    let tree = load_sdd(&root)?;
    let records = run_benchmark(&root, &tree.instances, &SolverConfig::default(), 1)?;
    for r in &records {
        println!("{:<45} {:>9} {:>3} roots {:.3}s", r.instance, r.status, r.certified, r.wall_time);
    }
    println!("{}", summarize(&records).report());
    println!("outputs written under {}", root.display());
    Ok(())
}
