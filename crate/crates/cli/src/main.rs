use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use epa_core::attack::{AttackContext, AttackScale, Chromosome, Engine, GaConfig, Objective};
use epa_core::detect::{modularity, Detector};
use epa_core::experiment::{
    emit_report, parse_config, run_experiment_on, summarize, write_csv, write_json, DatasetSpec,
    ExperimentConfig, Method, OutputFormat, ScaleKind, TargetSelector,
};
use epa_core::graph::{
    generate_planted_partition, write_edge_list, write_gml, Dataset, GraphFormat,
};
use epa_core::metrics::{ari, nmi};
use epa_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "epa",
    version,
    about = "Evolutionary perturbation attacks on community detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run community detection on a dataset.
    Detect(DetectArgs),
    /// Attack a dataset and evaluate the result.
    Attack(AttackArgs),
    /// Write a planted-partition graph.
    Generate(GenerateArgs),
    /// Time detection, fitness evaluation and a short search.
    Bench(BenchArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// Edge-list or GML file.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// File format; inferred from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<GraphFormat>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    data: DatasetArgs,
    /// Detector to run; all of them when omitted.
    #[arg(long)]
    detector: Option<Detector>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AttackArgs {
    /// TOML experiment config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    #[arg(long, value_parser = parse_scale)]
    scale: Option<ScaleKind>,
    /// `size:R` or `index:I` for communities; `degree:R`, `betweenness:R`,
    /// `combined:R` or `node:V` for nodes.
    #[arg(long, value_parser = parse_target)]
    target: Option<TargetSelector>,
    /// Budget as a percentage of the links.
    #[arg(long)]
    budget_pct: Option<f64>,
    /// Budget as a number of rewirings.
    #[arg(long)]
    budget: Option<usize>,
    /// Attenuation factor.
    #[arg(long)]
    c: Option<f64>,
    /// Target-node success threshold.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Base seed; repetition r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Start every chromosome at the full budget.
    #[arg(long)]
    fixed_budget: bool,
    /// Comma-separated detectors to evaluate.
    #[arg(long, value_delimiter = ',')]
    detectors: Option<Vec<Detector>>,
    /// Output file; rows go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_out_format)]
    out_format: Option<OutputFormat>,
    /// Leave the walltime column empty.
    #[arg(long)]
    omit_walltime: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Comma-separated community sizes.
    #[arg(long, value_delimiter = ',', default_value = "32,32,32,32")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.3)]
    p_in: f64,
    #[arg(long, default_value_t = 0.02)]
    p_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; GML unless the extension or `--format` says otherwise.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_format)]
    format: Option<GraphFormat>,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset to time; a 4x32 planted partition when omitted.
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 20)]
    generations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_format(s: &str) -> Result<GraphFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scale(s: &str) -> Result<ScaleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> Result<TargetSelector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_out_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let result = match cli.command {
        Command::Detect(args) => detect(args),
        Command::Attack(args) => attack(args),
        Command::Generate(args) => generate(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Config { .. } | Error::InvalidArgument(_)) => EXIT_CONFIG,
        Some(Error::Infeasible(_)) => EXIT_INFEASIBLE,
        _ => 1,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("EPA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| Error::Config {
        key: "EPA_THREADS".into(),
        message: format!("expected a positive integer, got `{value}`"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn load(data: &DatasetArgs) -> Result<(DatasetSpec, Dataset)> {
    let path = data
        .dataset
        .clone()
        .ok_or_else(|| Error::config("dataset", "`--dataset` is required"))?;
    let spec = DatasetSpec {
        name: None,
        path: Some(path),
        format: data.format,
        planted: None,
    };
    let dataset = spec.load()?;
    Ok((spec, dataset))
}

fn detect(args: DetectArgs) -> Result<ExitCode> {
    let (_, dataset) = load(&args.data)?;
    let g = &dataset.graph;
    let detectors = match args.detector {
        Some(d) => vec![d],
        None => Detector::ALL.to_vec(),
    };
    let mut out = io::stdout().lock();
    writeln!(out, "nodes {} links {}", g.node_count(), g.edge_count())?;
    writeln!(out, "detector,communities,modularity,nmi_gt,ari_gt")?;
    for d in detectors {
        let p = d.detect(g, args.seed);
        let (n, a) = match &dataset.ground_truth {
            Some(gt) => (nmi(gt, &p)?.to_string(), ari(gt, &p)?.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{d},{},{},{n},{a}",
            p.community_count(),
            modularity(g, &p)?
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn attack(args: AttackArgs) -> Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => parse_config(path).with_context(|| format!("reading {}", path.display()))?,
        None => {
            let path = args
                .data
                .dataset
                .clone()
                .ok_or_else(|| Error::config("dataset", "give `--dataset` or `--config`"))?;
            let spec = DatasetSpec {
                name: None,
                path: Some(path),
                format: None,
                planted: None,
            };
            ExperimentConfig::new(spec, Method::Epa)
        }
    };
    if let Some(path) = &args.data.dataset {
        config.dataset.path = Some(path.clone());
        config.dataset.planted = None;
    }
    if let Some(f) = args.data.format {
        config.dataset.format = Some(f);
    }
    if let Some(m) = args.method {
        config.attack.method = m;
    }
    if let Some(s) = args.scale {
        config.attack.scale = s;
    }
    if let Some(t) = args.target {
        config.attack.target = Some(t);
        if args.scale.is_none() {
            config.attack.scale = t.scale();
        }
    }
    if let Some(b) = args.budget {
        config.attack.budget = Some(b);
        config.attack.budget_pct = None;
    }
    if let Some(k) = args.budget_pct {
        config.attack.budget_pct = Some(k);
        config.attack.budget = None;
    }
    let ga: &mut GaConfig = &mut config.ga;
    if let Some(c) = args.c {
        ga.c = c;
    }
    if let Some(e) = args.epsilon {
        ga.epsilon = e;
    }
    if let Some(p) = args.population {
        ga.population = p;
    }
    if let Some(g) = args.generations {
        ga.generations = g;
    }
    if args.fixed_budget {
        ga.fixed_budget = true;
    }
    if let Some(s) = args.seed {
        config.base_seed = s;
    }
    if let Some(r) = args.reps {
        config.repetitions = r;
    }
    if let Some(d) = args.detectors {
        config.detectors = d;
    }
    if let Some(o) = args.out {
        config.output = Some(o);
    }
    if let Some(f) = args.out_format {
        config.output_format = f;
    }
    if args.omit_walltime {
        config.omit_walltime = true;
    }
    config.validate()?;

    let dataset = config.dataset.load()?;
    let rows = run_experiment_on(&config, &dataset)?;
    match &config.output {
        Some(path) => {
            let summary = emit_report(&rows, config.output_format, path)?;
            info!("wrote {} and {}", path.display(), summary.display());
        }
        None => {
            match config.output_format {
                OutputFormat::Csv => write_csv(&rows, io::stdout().lock())?,
                OutputFormat::Json => write_json(&rows, io::stdout().lock())?,
            }
            let mut err = io::stderr().lock();
            for s in summarize(&rows) {
                writeln!(
                    err,
                    "{:>6} {:>9} {:>22} n={:<3} mean={:.4} std={:.4}",
                    s.method, s.detector, s.metric, s.count, s.mean, s.std
                )?;
            }
        }
    }
    let failed: Vec<&str> = rows.iter().filter_map(|r| r.error.as_deref()).collect();
    if !failed.is_empty() && failed.len() == rows.len() {
        eprintln!("error: every repetition failed: {}", failed[0]);
        return Ok(ExitCode::from(EXIT_INFEASIBLE));
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    let (graph, truth) = generate_planted_partition(&args.sizes, args.p_in, args.p_out, args.seed)?;
    let format = args
        .format
        .unwrap_or_else(|| GraphFormat::from_path(&args.out));
    let file = std::fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let out = io::BufWriter::new(file);
    match format {
        GraphFormat::Gml => write_gml(&graph, Some(&truth), out)?,
        GraphFormat::EdgeList => write_edge_list(&graph, out)?,
    }
    println!(
        "wrote {} ({} nodes, {} links, {} communities)",
        args.out.display(),
        graph.node_count(),
        graph.edge_count(),
        truth.community_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let graph = match &args.data.dataset {
        Some(_) => load(&args.data)?.1.graph,
        None => generate_planted_partition(&[32; 4], 0.3, 0.02, args.seed)?.0,
    };
    let reps = args.reps.max(1);
    let time = |label: &str, f: &mut dyn FnMut()| {
        let start = Instant::now();
        for _ in 0..reps {
            f();
        }
        let per = start.elapsed().as_secs_f64() / reps as f64;
        println!("{label:<24} {:>10.3} ms", per * 1e3);
    };
    println!("nodes {} links {}", graph.node_count(), graph.edge_count());
    for d in Detector::ALL {
        time(d.name(), &mut || {
            d.detect(&graph, args.seed);
        });
    }
    let config = GaConfig {
        seed: args.seed,
        generations: args.generations,
        ..GaConfig::default()
    };
    let ctx = AttackContext::new(&graph, AttackScale::Global, &config, Objective::Entropy)?;
    let probe = probe_chromosome(&ctx);
    time("fitness", &mut || {
        ctx.evaluate(&probe).expect("probe chromosome is valid");
    });
    let start = Instant::now();
    let (_, fitness, _) = Engine::new(&ctx).run(|_| {})?;
    println!(
        "{:<24} {:>10.3} s (best fitness {fitness:.4})",
        format!("search x{}", args.generations),
        start.elapsed().as_secs_f64()
    );
    Ok(ExitCode::SUCCESS)
}

fn probe_chromosome(ctx: &AttackContext<'_>) -> Chromosome {
    Chromosome::new(
        vec![ctx.add_pool().genes()[0]],
        vec![ctx.del_pool().genes()[0]],
    )
}
