use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use sputnik_moea::cloud;
use sputnik_moea::Strategy;

use sputnik_bench::plot::emit_plot_data;
use sputnik_bench::summary::{compare_strategies, summary_table, write_summary_csv};
use sputnik_bench::{
    load_instance, run_experiment, stagnation_run, Algorithm, BenchError, InstanceSource,
    RunConfig, RunOutput, RunTrace,
};

/// Benchmark harness comparing adaptive mutation-operator selection
/// strategies on the cloud placement problem.
#[derive(Parser)]
#[command(name = "sputnik-bench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one seeded run and write its trace CSV.
    Run(RunArgs),
    /// Run all strategies over repeated seeds and summarize.
    Compare(CompareArgs),
    /// Build plot data and an SVG chart from trace CSVs.
    Plot(PlotArgs),
    /// Generate a problem instance file.
    GenInstance(GenInstanceArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the trace CSV.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Run until the hypervolume stagnates for this many generations
    /// instead of a fixed generation count (the config's generation count
    /// becomes a hard cap).
    #[arg(long)]
    stagnation_window: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    /// JSON run configuration used as the template for every cell.
    #[arg(long)]
    config: PathBuf,
    /// Seeds per (algorithm, strategy) cell: seed, seed+1, ...
    #[arg(long)]
    repeats: usize,
    /// Output directory for traces, summary.csv, plot data, and chart.
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated host algorithms (defaults to the config's).
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<String>,
    /// Anchor the 90% threshold to a long random-strategy reference run of
    /// this many generations instead of only the batch best.
    #[arg(long)]
    reference_generations: Option<usize>,
}

#[derive(Args)]
struct PlotArgs {
    /// Directory holding trace-*.csv files.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output SVG path; the long-format CSV lands next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenInstanceArgs {
    #[arg(long)]
    vms: usize,
    #[arg(long)]
    components: usize,
    #[arg(long)]
    public_fraction: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Plot(args) => cmd_plot(args),
        Command::GenInstance(args) => cmd_gen_instance(args),
    };
    if let Err(error) = result {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}

fn trace_file_name(output: &RunOutput) -> String {
    format!(
        "trace-{}-{}-seed{}.csv",
        output.algorithm.name(),
        output.strategy.name(),
        output.seed
    )
}

fn write_trace(dir: &Path, output: &RunOutput) -> Result<PathBuf, BenchError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| BenchError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(trace_file_name(output));
    let file = File::create(&path)
        .map_err(|e| BenchError::Runtime(format!("cannot create {}: {e}", path.display())))?;
    output.trace.write_csv(file)?;
    Ok(path)
}

fn cmd_run(args: RunArgs) -> Result<(), BenchError> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let output = match args.stagnation_window {
        Some(window) => stagnation_run(&config, window)?,
        None => run_experiment(&config)?,
    };
    let path = write_trace(&args.out, &output)?;
    println!(
        "{} generations, final hypervolume {:.4}{} -> {}",
        output.trace.rows.len(),
        output.trace.final_hypervolume(),
        if output.reached_cap {
            " (stopped by generation cap)"
        } else {
            ""
        },
        path.display()
    );
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), BenchError> {
    let base = RunConfig::load(&args.config)?;
    let algorithms: Vec<Algorithm> = if args.algorithms.is_empty() {
        vec![base.algorithm]
    } else {
        args.algorithms
            .iter()
            .map(|name| Algorithm::from_str(name))
            .collect::<Result<_, _>>()?
    };
    let mut configs = Vec::new();
    for &algorithm in &algorithms {
        for strategy in [Strategy::Random, Strategy::Elitist, Strategy::Caste] {
            configs.push(base.with_algorithm(algorithm).with_strategy(strategy));
        }
    }
    let reference_hv = match args.reference_generations {
        Some(generations) => {
            let mut reference = base.with_strategy(Strategy::Random);
            reference.generations = generations;
            let output = run_experiment(&reference)?;
            let best = output
                .trace
                .hypervolume_series()
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            println!("reference run: {generations} generations, best hypervolume {best:.4}");
            Some(best)
        }
        None => None,
    };
    let (outputs, summaries) = compare_strategies(&configs, args.repeats, reference_hv)?;

    for output in &outputs {
        write_trace(&args.out, output)?;
    }
    let summary_path = args.out.join("summary.csv");
    let file = File::create(&summary_path).map_err(|e| {
        BenchError::Runtime(format!("cannot create {}: {e}", summary_path.display()))
    })?;
    write_summary_csv(&summaries, file)?;

    let csv_path = args.out.join("plot_data.csv");
    let svg_path = args.out.join("hypervolume.svg");
    emit_plot_files(&outputs, &csv_path, &svg_path)?;

    print!("{}", summary_table(&summaries));
    println!(
        "{} runs -> {} (summary.csv, plot_data.csv, hypervolume.svg)",
        outputs.len(),
        args.out.display()
    );
    Ok(())
}

fn emit_plot_files(
    outputs: &[RunOutput],
    csv_path: &Path,
    svg_path: &Path,
) -> Result<(), BenchError> {
    let csv_file = File::create(csv_path)
        .map_err(|e| BenchError::Runtime(format!("cannot create {}: {e}", csv_path.display())))?;
    let svg_file = File::create(svg_path)
        .map_err(|e| BenchError::Runtime(format!("cannot create {}: {e}", svg_path.display())))?;
    emit_plot_data(outputs, csv_file, svg_file)
}

/// Recovers (algorithm, strategy, seed) from a trace file name written by
/// `run` or `compare`.
fn parse_trace_name(name: &str) -> Option<(Algorithm, Strategy, u64)> {
    let stem = name.strip_prefix("trace-")?.strip_suffix(".csv")?;
    let (rest, seed_part) = stem.rsplit_once("-seed")?;
    let seed: u64 = seed_part.parse().ok()?;
    let (algorithm_part, strategy_part) = rest.rsplit_once('-')?;
    let algorithm = Algorithm::from_str(algorithm_part).ok()?;
    let strategy = Strategy::from_str(strategy_part).ok()?;
    Some((algorithm, strategy, seed))
}

fn cmd_plot(args: PlotArgs) -> Result<(), BenchError> {
    let entries = std::fs::read_dir(&args.input)
        .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", args.input.display())))?;
    let mut outputs = Vec::new();
    let mut names: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .collect();
    names.sort();
    for path in names {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some((algorithm, strategy, seed)) = parse_trace_name(name) else {
            continue;
        };
        let file = File::open(&path)
            .map_err(|e| BenchError::Runtime(format!("cannot open {}: {e}", path.display())))?;
        outputs.push(RunOutput {
            algorithm,
            strategy,
            seed,
            trace: RunTrace::read_csv(file)?,
            reached_cap: false,
        });
    }
    if outputs.is_empty() {
        return Err(BenchError::Config(format!(
            "no trace-*.csv files in {}",
            args.input.display()
        )));
    }
    let csv_path = args.out.with_extension("csv");
    emit_plot_files(&outputs, &csv_path, &args.out)?;
    println!(
        "{} traces -> {} and {}",
        outputs.len(),
        csv_path.display(),
        args.out.display()
    );
    Ok(())
}

fn cmd_gen_instance(args: GenInstanceArgs) -> Result<(), BenchError> {
    if args.vms < 1 || args.components < 1 {
        return Err(BenchError::Config(
            "gen-instance needs --vms >= 1 and --components >= 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&args.public_fraction) {
        return Err(BenchError::Config(format!(
            "--public-fraction must be in [0, 1], got {}",
            args.public_fraction
        )));
    }
    let instance =
        cloud::random_instance(args.vms, args.components, args.public_fraction, args.seed);
    instance
        .save(&args.out)
        .map_err(|e| BenchError::Runtime(e.to_string()))?;
    // Round-trip check so a written file is immediately usable.
    load_instance(&InstanceSource::Path {
        path: args.out.clone(),
    })?;
    println!(
        "instance with {} VMs / {} components -> {}",
        args.vms,
        args.components,
        args.out.display()
    );
    Ok(())
}
