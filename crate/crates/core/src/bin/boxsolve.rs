use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use boxsolve::bench::{
    self, compare_results, fmt_box, load_sdd, read_records_csv, run_benchmark, summarize, write_records_csv,
    write_sdd, Category, ConfigFile, SddInstance, SddTree, SolutionSet,
};
use boxsolve::generators::{self, FlashConfig, FlashParams, KuramotoParams, OrbitParams, RobotMode, RobotParams};
use boxsolve::solver::{solve, SolverConfig};
use boxsolve::System;

#[derive(Parser)]
#[command(name = "boxsolve", version, about = "Certified real-root solver for square nonlinear systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one system file.
    Solve(SolveArgs),
    /// Solve every instance of a dataset tree and write per-instance results.
    Bench(BenchArgs),
    /// Generate seeded instances of a parametric family.
    Gen(GenArgs),
    /// Cross-check the solution files of two dataset trees.
    Compare(CompareArgs),
    /// Summarize a records.csv file.
    Report(ReportArgs),
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Bisection precision.
    #[arg(short = 'e', long = "eps", default_value_t = 1e-6)]
    eps: f64,
    /// Time limit in seconds.
    #[arg(long, default_value_t = 1000.0)]
    timeout: f64,
    /// rr, lf, maxsmear, sumsmear, smearrel, gap or gap:<fallback>.
    #[arg(long, default_value = "smearrel")]
    bisector: String,
    /// dfs, bfs or mmr.
    #[arg(long = "node-select", default_value = "dfs")]
    node_select: String,
    /// Comma-separated stages from hc4, bc3, 3b, hs, krawczyk; `+fp` iterates to a fixed point.
    #[arg(long, default_value = "hc4,bc3,3b,hs")]
    pipeline: String,
    /// `all` or the number of certified roots after which to stop.
    #[arg(long, default_value = "all")]
    number: String,
    /// hs or krawczyk.
    #[arg(long, default_value = "hs")]
    certifier: String,
    /// Run Newton from cell midpoints and certify what it converges to.
    #[arg(long)]
    probe: bool,
}

#[derive(Args)]
struct BenchArgs {
    root: PathBuf,
    /// TOML solver config; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Where to write the run records; defaults to <root>/records.csv.
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// robot, stewart, kuramoto, flash or orbit.
    family: String,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Seed of the first instance; instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dataset root to write into.
    #[arg(long, required_unless_present = "template")]
    out: Option<PathBuf>,
    /// Robot link count.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// planar-trig, planar-poly, spatial-trig or spatial-poly.
    #[arg(long, default_value = "planar-trig")]
    mode: String,
    /// Kuramoto oscillator count.
    #[arg(long = "oscillators", short = 'n', default_value_t = 6)]
    oscillators: usize,
    /// Flash correlation config (TOML); see `gen flash --template`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the flash config template and exit.
    #[arg(long)]
    template: bool,
    /// Orbit: omit the b^2 - 4ac < 0 side constraint.
    #[arg(long)]
    no_elliptic: bool,
    #[arg(long, default_value_t = 1e6)]
    lambda_max: f64,
    #[arg(long, default_value_t = 100.0)]
    rho_max: f64,
    #[arg(long, default_value_t = 10.0)]
    coef_max: f64,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
}

#[derive(Args)]
struct ReportArgs {
    records: PathBuf,
    /// Directory for bins.csv, cumulative.csv, root_counts.csv and report.txt.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Usage problems exit with 1, failures on instances with 2.
enum Failure {
    Usage(String),
    Instance(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn instance(e: impl std::fmt::Display) -> Failure {
    Failure::Instance(e.to_string())
}

fn solver_config(a: &SolveArgs) -> Result<SolverConfig, Failure> {
    let mut cfg = SolverConfig { eps: a.eps, ..SolverConfig::default() };
    cfg.timeout = Duration::try_from_secs_f64(a.timeout).map_err(usage)?;
    cfg.bisector = a.bisector.parse().map_err(usage)?;
    cfg.node_selection = a.node_select.parse().map_err(usage)?;
    cfg.pipeline = a.pipeline.parse().map_err(usage)?;
    cfg.target = a.number.parse().map_err(usage)?;
    cfg.certifier = a.certifier.parse().map_err(usage)?;
    cfg.probe = a.probe;
    Ok(cfg)
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let cfg = solver_config(&a)?;
    let text = std::fs::read_to_string(&a.file).map_err(|e| usage(format!("{}: {e}", a.file.display())))?;
    let sys = boxsolve::parse_system(&text).map_err(|e| instance(format!("{}: {e}", a.file.display())))?;
    let rep = solve(&sys, &cfg).map_err(instance)?;
    println!("variables {}", sys.variables().join(", "));
    println!(
        "status {}  certified {}  unknown {}  cells {}  time {:.3}s",
        rep.status,
        rep.certified.len(),
        rep.unknown.len(),
        rep.stats.cells,
        rep.stats.wall_time.as_secs_f64()
    );
    for b in &rep.certified {
        println!("certified {}", fmt_box(b));
    }
    for b in &rep.unknown {
        println!("unknown {}", fmt_box(b));
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            ConfigFile::from_toml(&text).and_then(|c| c.to_solver_config()).map_err(usage)?
        }
        None => SolverConfig::default(),
    };
    if a.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let tree = load_sdd(&a.root).map_err(usage)?;
    for s in &tree.skipped {
        eprintln!("skipped {}: {}", s.path.display(), s.reason);
    }
    let records = run_benchmark(&a.root, &tree.instances, &cfg, a.jobs).map_err(instance)?;
    let path = a.records.unwrap_or_else(|| a.root.join("records.csv"));
    write_records_csv(&path, &records).map_err(instance)?;
    let errors = records.iter().filter(|r| r.is_error()).count();
    for r in records.iter().filter(|r| r.is_error()) {
        eprintln!("error {}: {}", r.instance, r.message);
    }
    print!("{}", summarize(&records).report());
    println!("records written to {}", path.display());
    if errors + tree.skipped.len() > 0 {
        return Err(instance(format!("{errors} failed runs, {} skipped entries", tree.skipped.len())));
    }
    Ok(())
}

fn generate_one(a: &GenArgs, k: usize, flash: Option<&FlashConfig>) -> Result<(String, System, String), Failure> {
    let seed = a.seed.wrapping_add(k as u64);
    let (label, inst) = match a.family.as_str() {
        "robot" => {
            let mode: RobotMode = a.mode.parse().map_err(usage)?;
            let inst = generators::gen_robot(&RobotParams::new(a.m, mode, seed)).map_err(usage)?;
            (format!("robot-{}-m{}", mode.name(), a.m), inst)
        }
        "stewart" => ("stewart".to_string(), generators::gen_stewart(&generators::StewartParams::sample(seed)).map_err(usage)?),
        "kuramoto" => {
            let inst = generators::gen_kuramoto(&KuramotoParams::new(a.oscillators, seed)).map_err(usage)?;
            (format!("kuramoto-n{}", a.oscillators), inst)
        }
        "flash" => {
            let cfg = flash.ok_or_else(|| usage("flash needs --config with correlation coefficients"))?;
            let p = FlashParams::grid_point(cfg, (a.seed as usize).wrapping_add(k));
            ("flash".to_string(), generators::gen_flash(&p).map_err(usage)?)
        }
        "orbit" => {
            let mut p = OrbitParams::sample(seed);
            p.elliptic = !a.no_elliptic;
            p.bounds = generators::OrbitBounds { lambda_max: a.lambda_max, rho_max: a.rho_max, coef_max: a.coef_max };
            ("orbit".to_string(), generators::gen_orbit(&p).map_err(usage)?)
        }
        other => return Err(usage(format!("unknown family '{other}'"))),
    };
    let mut info = String::new();
    for (k, v) in inst.system.metadata() {
        info.push_str(&format!("{k}={v}\n"));
    }
    Ok((label, inst.system, info))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    if a.template {
        print!("{}", generators::FLASH_TEMPLATE);
        return Ok(());
    }
    let Some(out) = a.out.clone() else {
        return Err(usage("--out is required".to_string()));
    };
    let flash = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            Some(FlashConfig::from_toml(&text).map_err(usage)?)
        }
        None => None,
    };
    let (parameter, parametric) =
        generators::family_files(&a.family).ok_or_else(|| usage(format!("unknown family '{}'", a.family)))?;
    let mut tree = SddTree::default();
    let mut label = a.family.clone();
    for k in 0..a.count {
        let (l, sys, info) = generate_one(&a, k, flash.as_ref())?;
        label = l;
        let id = format!("{}/{}/instances/{:05}", bench::PARAMETRIC_DIR, label, k);
        let mut inst = SddInstance::new(id, Category::Family(label.clone()), sys.to_text());
        inst.info = Some(info);
        tree.instances.push(inst);
    }
    tree.families.push(bench::FamilyEntry {
        name: label.clone(),
        parameter: Some(parameter.to_string()),
        parametric_sys: Some(parametric.to_string()),
    });
    write_sdd(&tree, &out).map_err(instance)?;
    println!("wrote {} {} instances under {}", a.count, label, out.display());
    Ok(())
}

fn solutions(root: &Path) -> Result<std::collections::BTreeMap<String, SolutionSet>, Failure> {
    let tree = load_sdd(root).map_err(usage)?;
    Ok(tree.instances.iter().filter_map(|i| i.solution.as_ref().map(|s| (i.id.clone(), SolutionSet::from(s)))).collect())
}

fn cmd_compare(a: CompareArgs) -> CmdResult {
    let sa = solutions(&a.a)?;
    let sb = solutions(&a.b)?;
    let (mut matched, mut suspect, mut discrepant, mut shared) = (0, 0, 0, 0);
    for (id, x) in &sa {
        let Some(y) = sb.get(id) else { continue };
        shared += 1;
        let r = compare_results(x, y, a.tol);
        matched += r.matched;
        suspect += r.consistent_suspect.iter().sum::<usize>();
        discrepant += r.discrepancy.iter().sum::<usize>();
        if !r.is_consistent() {
            println!(
                "discrepancy {id}: matched {} only-in-A {} only-in-B {}",
                r.matched, r.discrepancy[0], r.discrepancy[1]
            );
        }
    }
    println!("instances {shared}  matched {matched}  consistent-suspect {suspect}  discrepancy {discrepant}");
    if discrepant > 0 {
        return Err(instance(format!("{discrepant} unmatched certified roots")));
    }
    Ok(())
}

fn cmd_report(a: ReportArgs) -> CmdResult {
    let recs = read_records_csv(&a.records).map_err(usage)?;
    let s = summarize(&recs);
    print!("{}", s.report());
    if let Some(dir) = &a.out {
        s.write(dir).map_err(instance)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Compare(a) => cmd_compare(a),
        Cmd::Report(a) => cmd_report(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Instance(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
