use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use fairfilter::graph::load_edge_list;
use fairfilter::{apply_filter, normalize, FilterSpec, Graph, Normalization, OptimizerSettings, SensitiveGroups};
use fairfilter_harness::config::ExperimentConfig;
use fairfilter_harness::grid::{average_fractions, read_csv, write_csv};
use fairfilter_harness::methods::run_method;
use fairfilter_harness::report::{render_text, summarize, write_summary_csv};
use fairfilter_harness::{run_grid, Method};

#[derive(Parser)]
#[command(name = "fairfilter", version, about = "Fairness-aware graph filter experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a graph filter on a prior and write node scores.
    Filter(FilterArgs),
    /// Like `filter`, followed by a fairness-aware approach.
    Fair {
        #[command(flatten)]
        base: FilterArgs,
        #[arg(long)]
        method: String,
        /// File listing sensitive node ids, one per line.
        #[arg(long)]
        sensitive: PathBuf,
    },
    /// Run an experiment grid from a TOML config and write the results CSV.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict the grid to one fraction.
        #[arg(long)]
        fraction: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Also write rows averaged over split fractions.
        #[arg(long)]
        averaged: Option<PathBuf>,
        /// Write zero timings so output is byte-reproducible.
        #[arg(long)]
        no_wall_time: bool,
    },
    /// Summarize a results CSV.
    Report {
        #[arg(long)]
        results: PathBuf,
        /// Optional CSV copy of the summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FilterArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    graph: PathBuf,
    /// Filter name such as PPR.85, HK3 or PPR.99S.
    #[arg(long, default_value = "PPR.85")]
    filter: String,
    /// Prior file: `node_id [value]` per line, value defaulting to 1.
    #[arg(long)]
    prior: PathBuf,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn read_prior(path: &Path, graph: &Graph) -> anyhow::Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut q = vec![0.0; graph.node_count()];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let id = tokens.next().unwrap();
        let v = graph
            .index_of(id)
            .with_context(|| format!("line {}: unknown node `{id}`", i + 1))?;
        q[v] = match tokens.next() {
            Some(x) => x.parse().with_context(|| format!("line {}: bad value", i + 1))?,
            None => 1.0,
        };
    }
    Ok(q)
}

fn read_sensitive(path: &Path, graph: &Graph) -> anyhow::Result<SensitiveGroups> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut nodes = Vec::new();
    for id in text.split_whitespace().filter(|t| !t.starts_with('#')) {
        nodes.push(graph.index_of(id).with_context(|| format!("unknown node `{id}`"))?);
    }
    Ok(SensitiveGroups::new(graph.node_count(), &nodes)?)
}

fn write_scores(path: &Path, graph: &Graph, scores: &[f64]) -> anyhow::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (v, s) in scores.iter().enumerate() {
        writeln!(out, "{} {}", graph.node_id(v), s)?;
    }
    out.flush()?;
    Ok(())
}

fn filter_spec(args: &FilterArgs) -> anyhow::Result<FilterSpec> {
    let spec: FilterSpec = args.filter.parse()?;
    Ok(match args.tolerance {
        Some(t) => spec.with_tolerance(t)?,
        None => spec,
    })
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Filter(args) => {
            let graph = load_edge_list(&args.graph)?;
            let q = read_prior(&args.prior, &graph)?;
            let w = normalize(&graph, Normalization::Symmetric);
            let scores = apply_filter(&filter_spec(&args)?, &w, &q)?;
            write_scores(&args.out, &graph, &scores)?;
        }
        Command::Fair {
            base,
            method,
            sensitive,
        } => {
            let method: Method = method.parse()?;
            let graph = load_edge_list(&base.graph)?;
            let q = read_prior(&base.prior, &graph)?;
            let groups = read_sensitive(&sensitive, &graph)?;
            let w = normalize(&graph, Normalization::Symmetric);
            let out = run_method(
                method,
                &filter_spec(&base)?,
                &graph,
                &w,
                &q,
                &groups,
                &OptimizerSettings::default(),
            )?;
            if let Some(p) = out.params {
                log::info!("tuned parameters {p:?}, loss {:?}", out.final_loss);
            }
            write_scores(&base.out, &graph, &out.posterior)?;
        }
        Command::Eval {
            config,
            out,
            workers,
            seed,
            fraction,
            tolerance,
            averaged,
            no_wall_time,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = tolerance {
                cfg.tolerance = Some(t);
            }
            if let Some(f) = fraction {
                cfg.fractions = Some(vec![f]);
            }
            if no_wall_time {
                cfg.record_wall_time = false;
            }
            let mut grid = cfg.grid_config()?;
            if let Some(w) = workers {
                grid.workers = w;
            }
            let base = config.parent().unwrap_or(Path::new("."));
            let graphs = cfg.load_graphs(base)?;
            if graphs.is_empty() {
                bail!("the config lists no graphs");
            }
            let results = run_grid(&graphs, &grid)?;
            write_csv(BufWriter::new(File::create(&out)?), &results)?;
            if let Some(path) = averaged {
                write_csv(BufWriter::new(File::create(path)?), &average_fractions(&results))?;
            }
            let failed = results.iter().filter(|r| r.failed()).count();
            eprintln!("{} cells written to {}, {failed} failed", results.len(), out.display());
        }
        Command::Report { results, out } => {
            let rows = read_csv(File::open(&results)?)?;
            let reports = summarize(&average_fractions(&rows))?;
            print!("{}", render_text(&reports));
            if let Some(path) = out {
                write_summary_csv(BufWriter::new(File::create(path)?), &reports)?;
            }
        }
    }
    Ok(())
}
