//! `wopgtsp` command-line front end.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use wopgtsp::cmcs::{self, builtin, compute_budget, format_seconds, Budget, Configuration};
use wopgtsp::gen::{self, ManifestEntry, TestbedKind, TestbedSpec};
use wopgtsp::harness::{run_bench, BenchOptions};
use wopgtsp::seed::rng_from_seed;
use wopgtsp::trainer::{self, EvalBudget, EvalOptions};
use wopgtsp::verify::{verify_instance, verify_random, VerifyReport};
use wopgtsp::{gtsplib, ComponentKind, GeneratorParams, Instance, Solution};

const MANIFEST: &str = "manifest.tsv";
const EXTENSION: &str = "gtsp";

#[derive(Parser)]
#[command(
    name = "wopgtsp",
    version,
    about = "Warehouse order picking as a generalized TSP, solved with CMCS"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one random instance.
    Gen {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a 30-instance testbed and its manifest.
    Testbed {
        /// medium or large
        kind: TestbedKind,
        #[arg(long, default_value_t = 1000)]
        base_seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run a configuration on one instance.
    Solve {
        instance: PathBuf,
        /// Built-in name (conf1, conf2) or a configuration file.
        #[arg(short, long, default_value = "conf2")]
        config: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solution file; defaults to `<instance>.sol`.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Select the best configuration over a directory of instances.
    Train {
        instances: PathBuf,
        #[command(flatten)]
        budget: TrainBudget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Worker threads, 0 for one per core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Component pool, comma separated.
        #[arg(long, default_value = "CO,IHC,OM,VM", value_delimiter = ',')]
        pool: Vec<ComponentKind>,
        /// Components per configuration.
        #[arg(long, default_value_t = 3)]
        size: usize,
        /// Output directory for `report.tsv` and `winner.cmcs`.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Compare configurations on a testbed directory.
    Bench {
        testbed: PathBuf,
        #[arg(long, default_value = "conf1,conf2", value_delimiter = ',')]
        configs: Vec<String>,
        /// Defaults to the testbed's alpha when a manifest names a known kind.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        iters: Option<u64>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run instances one at a time.
        #[arg(long)]
        serial: bool,
        /// Output file for the tab-separated table.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Oracle and invariant checks on small instances.
    Verify {
        /// Instance file; omit to use --random.
        instance: Option<PathBuf>,
        /// Number of random instances to check.
        #[arg(long, conflicts_with = "instance")]
        random: Option<usize>,
        #[arg(long, default_value_t = 6)]
        clusters: usize,
        #[arg(long, default_value_t = 3)]
        max_cluster_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct BudgetArgs {
    /// Time budget alpha * n * m seconds.
    #[arg(long)]
    alpha: Option<f64>,
    /// Time budget in seconds.
    #[arg(long)]
    time: Option<f64>,
    /// Iteration budget.
    #[arg(long)]
    iters: Option<u64>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TrainBudget {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    iters: Option<u64>,
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, io::Error),
    Format(String),
    Verification(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Io(..) => 3,
            CliError::Format(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Format(msg) | CliError::Verification(msg) | CliError::Other(msg) => {
                f.write_str(msg)
            }
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = read_file(path)?;
    gtsplib::parse(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn load_config(spec: &str) -> Result<Configuration> {
    if let Some(c) = builtin(spec) {
        return Ok(c);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Other(format!(
            "unknown configuration `{spec}` (use conf1, conf2 or a file path)"
        )));
    }
    let config = Configuration::from_text(&read_file(path)?)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    Ok(config)
}

/// Instances of a directory, in manifest order when a manifest exists and
/// by file name otherwise.
fn load_dir(dir: &Path) -> Result<(Vec<Instance>, Vec<ManifestEntry>)> {
    let manifest_path = dir.join(MANIFEST);
    if manifest_path.exists() {
        let entries = gen::parse_manifest(&read_file(&manifest_path)?)
            .map_err(|e| CliError::Format(format!("{}: {e}", manifest_path.display())))?;
        let instances = entries
            .iter()
            .map(|e| load_instance(&dir.join(format!("{}.{EXTENSION}", e.name))))
            .collect::<Result<Vec<_>>>()?;
        return Ok((instances, entries));
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Io(dir.to_path_buf(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == EXTENSION))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Other(format!(
            "{}: no .{EXTENSION} files",
            dir.display()
        )));
    }
    let instances = paths
        .iter()
        .map(|p| load_instance(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((instances, Vec::new()))
}

/// Tour file: name, cost, then the 1-based visited nodes.
fn solution_text(instance: &Instance, solution: &Solution) -> String {
    let mut out = format!(
        "NAME : {}\nTYPE : TOUR\nCOST : {}\nDIMENSION : {}\nTOUR_SECTION\n",
        instance.name(),
        solution.cost(),
        instance.m()
    );
    for node in solution.tour() {
        out.push_str(&format!("{}\n", node + 1));
    }
    out.push_str("-1\nEOF\n");
    out
}

fn cmd_gen(n: usize, m: usize, seed: u64, out: Option<PathBuf>) -> Result<()> {
    let inst = gen::generate(GeneratorParams::new(n, m, seed))
        .map_err(|e| CliError::Other(e.to_string()))?;
    let text = gtsplib::to_string(&inst);
    match out {
        Some(path) => write_file(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_testbed(kind: TestbedKind, base_seed: u64, out: &Path) -> Result<()> {
    let spec = TestbedSpec::new(kind, base_seed);
    let instances = gen::build_testbed(&spec).map_err(|e| CliError::Other(e.to_string()))?;
    for inst in &instances {
        write_file(
            &out.join(format!("{}.{EXTENSION}", inst.name())),
            &gtsplib::to_string(inst),
        )?;
    }
    write_file(&out.join(MANIFEST), &gen::write_manifest(&spec.manifest()))?;
    println!(
        "wrote {} {kind} instances to {}",
        instances.len(),
        out.display()
    );
    Ok(())
}

fn cmd_solve(
    path: &Path,
    config: &str,
    budget: &BudgetArgs,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<()> {
    let inst = load_instance(path)?;
    let config = load_config(config)?;
    let budget = match (budget.alpha, budget.time, budget.iters) {
        (_, _, Some(k)) => Budget::Iterations(k),
        (_, Some(t), _) => Budget::seconds(t),
        (alpha, None, None) => {
            Budget::from_alpha(&inst, alpha.unwrap_or(TestbedKind::Large.alpha()))
        }
    };
    let mut rng = rng_from_seed(seed);
    let init =
        Solution::random_initial(&inst, &mut rng).map_err(|e| CliError::Other(e.to_string()))?;
    info!(
        "{}: {} from initial cost {}",
        inst.name(),
        config.describe(),
        init.cost()
    );
    let res = cmcs::run(&config, &inst, init, budget, &mut rng);
    println!("{}", res.best_cost);
    info!(
        "{} iterations, {} improvements in {:.4} s",
        res.iterations,
        res.improvements,
        res.elapsed.as_secs_f64()
    );
    let out = out.unwrap_or_else(|| path.with_extension("sol"));
    write_file(&out, &solution_text(&inst, &res.best_solution))
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    dir: &Path,
    budget: &TrainBudget,
    seed: u64,
    repeats: usize,
    threads: usize,
    pool: &[ComponentKind],
    size: usize,
    out: &Path,
) -> Result<()> {
    let (instances, _) = load_dir(dir)?;
    let budget = match (budget.alpha, budget.iters) {
        (_, Some(k)) => EvalBudget::Iterations(k),
        (Some(a), None) => EvalBudget::Alpha(a),
        (None, None) => unreachable!("clap requires one budget flag"),
    };
    let configs = trainer::enumerate_meaningful(pool, size);
    if configs.is_empty() {
        return Err(CliError::Other("the pool yields no configurations".into()));
    }
    println!(
        "{} configurations x {} instances",
        configs.len(),
        instances.len()
    );
    let opts = EvalOptions {
        repeats,
        threads,
        ..EvalOptions::new(budget, seed)
    };
    let report = trainer::train(&configs, &instances, &opts);
    write_file(&out.join("report.tsv"), &report.to_tsv())?;
    let mut winner = report.winner().clone();
    winner.name = "winner".into();
    write_file(&out.join("winner.cmcs"), &winner.to_text())?;
    println!("winner: {}", winner.describe());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    dir: &Path,
    configs: &[String],
    alpha: Option<f64>,
    iters: Option<u64>,
    repeats: usize,
    seed: u64,
    serial: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let (instances, manifest) = load_dir(dir)?;
    let configs = configs
        .iter()
        .map(|c| load_config(c))
        .collect::<Result<Vec<_>>>()?;
    let alpha = match alpha {
        Some(a) => a,
        None => testbed_alpha(&manifest).ok_or_else(|| {
            CliError::Other("cannot infer alpha from the testbed; pass --alpha".into())
        })?,
    };
    info!(
        "alpha {alpha}, total budget {} s per repeat and configuration",
        format_seconds(
            instances
                .iter()
                .map(|i| compute_budget(i.n(), i.m(), alpha))
                .sum()
        )
    );
    let opts = BenchOptions {
        serial,
        iterations: iters,
        ..BenchOptions::new(alpha, repeats, seed)
    };
    let table = run_bench(&instances, &configs, &opts);
    print!("{}", table.render());
    if let Some(path) = out {
        write_file(&path, &table.to_tsv())?;
    }
    Ok(())
}

fn testbed_alpha(manifest: &[ManifestEntry]) -> Option<f64> {
    let pairs: Vec<(usize, usize)> = manifest.iter().map(|e| (e.n, e.m)).collect();
    [TestbedKind::Medium, TestbedKind::Large]
        .into_iter()
        .find(|k| !pairs.is_empty() && pairs == k.pairs())
        .map(TestbedKind::alpha)
}

fn cmd_verify(
    instance: Option<PathBuf>,
    random: Option<usize>,
    clusters: usize,
    max_cluster_size: usize,
    seed: u64,
) -> Result<()> {
    let report = match (instance, random) {
        (Some(path), _) => {
            let inst = load_instance(&path)?;
            let mut report = VerifyReport::default();
            verify_instance(&inst, seed, &mut report);
            report
        }
        (None, count) => verify_random(count.unwrap_or(10), clusters, max_cluster_size, seed),
    };
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Verification(format!("{failed} checks failed")))
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { n, m, seed, out } => cmd_gen(n, m, seed, out),
        Command::Testbed {
            kind,
            base_seed,
            out,
        } => cmd_testbed(kind, base_seed, &out),
        Command::Solve {
            instance,
            config,
            budget,
            seed,
            out,
        } => cmd_solve(&instance, &config, &budget, seed, out),
        Command::Train {
            instances,
            budget,
            seed,
            repeats,
            threads,
            pool,
            size,
            out,
        } => cmd_train(
            &instances, &budget, seed, repeats, threads, &pool, size, &out,
        ),
        Command::Bench {
            testbed,
            configs,
            alpha,
            iters,
            repeats,
            seed,
            serial,
            out,
        } => cmd_bench(&testbed, &configs, alpha, iters, repeats, seed, serial, out),
        Command::Verify {
            instance,
            random,
            clusters,
            max_cluster_size,
            seed,
        } => cmd_verify(instance, random, clusters, max_cluster_size, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
