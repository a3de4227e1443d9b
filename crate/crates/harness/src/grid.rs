//! The experiment grid: graphs × filters × methods × split fractions.

use std::io::{Read, Write};
use std::time::Instant;

use fairfilter::metrics::prule_on_subset;
use fairfilter::{auc, normalize, EditParams, FilterSpec, Graph, Normalization, NormalizedAdjacency, OptimizerSettings, SensitiveGroups};
use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::methods::{run_method, Method};
use crate::sbm::Benchmark;
use crate::seeds::cell_seed;
use crate::split::{split, SplitSpec};

pub const CSV_HEADER: [&str; 14] = [
    "graph",
    "filter",
    "method",
    "fraction",
    "seed",
    "auc",
    "prule",
    "wall_time_s",
    "a_S",
    "a_Sp",
    "b_S",
    "b_Sp",
    "a0",
    "final_loss",
];

/// A loaded graph with everything the cells need, read-only once built.
#[derive(Debug, Clone)]
pub struct GraphEntry {
    pub id: String,
    pub graph: Graph,
    pub w: NormalizedAdjacency,
    pub groups: SensitiveGroups,
    pub positives: Vec<bool>,
}

impl GraphEntry {
    pub fn new(id: impl Into<String>, bench: Benchmark) -> Self {
        let w = normalize(&bench.graph, Normalization::Symmetric);
        Self {
            id: id.into(),
            graph: bench.graph,
            w,
            groups: bench.groups,
            positives: bench.positives,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridConfig {
    pub filters: Vec<FilterSpec>,
    pub methods: Vec<Method>,
    pub fractions: Vec<f64>,
    pub seed: u64,
    pub workers: usize,
    pub record_wall_time: bool,
    pub optimizer: OptimizerSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentCell {
    pub graph: usize,
    pub filter: FilterSpec,
    pub method: Method,
    pub fraction: f64,
    pub fraction_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub graph: String,
    pub filter: String,
    pub method: String,
    pub fraction: f64,
    pub seed: u64,
    pub auc: f64,
    pub prule: f64,
    pub wall_time_s: f64,
    pub params: Option<EditParams>,
    pub final_loss: Option<f64>,
    pub failure: Option<String>,
}

impl CellResult {
    pub fn failed(&self) -> bool {
        !(self.auc.is_finite() && self.prule.is_finite())
    }
}

/// Splits, runs the method and scores the held-out nodes of one cell.
pub fn run_cell(
    entry: &GraphEntry,
    cell: &ExperimentCell,
    global_seed: u64,
    settings: &OptimizerSettings,
    record_wall_time: bool,
) -> CellResult {
    let seed = cell_seed(global_seed, &entry.id, cell.fraction_index);
    let start = Instant::now();
    let outcome = evaluate(entry, cell, seed, settings);
    let wall_time_s = if record_wall_time {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let mut result = CellResult {
        graph: entry.id.clone(),
        filter: cell.filter.to_string(),
        method: cell.method.to_string(),
        fraction: cell.fraction,
        seed,
        auc: f64::NAN,
        prule: f64::NAN,
        wall_time_s,
        params: None,
        final_loss: None,
        failure: None,
    };
    match outcome {
        Ok((auc, prule, params, final_loss)) => {
            result.auc = auc;
            result.prule = prule;
            result.params = params;
            result.final_loss = final_loss;
        }
        Err(e) => {
            log::warn!(
                "cell {} / {} / {} / {} failed: {e}",
                result.graph,
                result.filter,
                result.method,
                result.fraction
            );
            result.failure = Some(e.to_string());
        }
    }
    result
}

type Scored = (f64, f64, Option<EditParams>, Option<f64>);

fn evaluate(
    entry: &GraphEntry,
    cell: &ExperimentCell,
    seed: u64,
    settings: &OptimizerSettings,
) -> Result<Scored> {
    let s = split(&entry.positives, &SplitSpec::new(cell.fraction, seed)?)?;
    let out = run_method(
        cell.method,
        &cell.filter,
        &entry.graph,
        &entry.w,
        &s.prior,
        &entry.groups,
        settings,
    )?;
    let auc = auc(&out.posterior, &entry.positives, &s.test)?;
    let prule = prule_on_subset(&out.posterior, &entry.groups, &s.test)?;
    Ok((auc, prule, out.params, out.final_loss))
}

pub fn cells(graphs: &[GraphEntry], config: &GridConfig) -> Vec<ExperimentCell> {
    let mut out = Vec::new();
    for graph in 0..graphs.len() {
        for filter in &config.filters {
            for &method in &config.methods {
                for (fraction_index, &fraction) in config.fractions.iter().enumerate() {
                    out.push(ExperimentCell {
                        graph,
                        filter: *filter,
                        method,
                        fraction,
                        fraction_index,
                    });
                }
            }
        }
    }
    out
}

/// Runs every cell on a pool of `config.workers` threads. The output follows
/// the canonical graph, filter, method, fraction order of the configuration.
pub fn run_grid(graphs: &[GraphEntry], config: &GridConfig) -> Result<Vec<CellResult>> {
    if config.methods.is_empty() {
        log::warn!("no methods configured; the grid is empty");
    }
    let cells = cells(graphs, config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                run_cell(
                    &graphs[cell.graph],
                    cell,
                    config.seed,
                    &config.optimizer,
                    config.record_wall_time,
                )
            })
            .collect()
    }))
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    sum / count as f64
}

/// Averages consecutive cells that share graph, filter and method. A failed
/// cell makes the averaged measures NaN. Tuned parameters are dropped.
pub fn average_fractions(results: &[CellResult]) -> Vec<CellResult> {
    let mut out: Vec<CellResult> = Vec::new();
    let mut i = 0;
    while i < results.len() {
        let head = &results[i];
        let mut j = i;
        while j < results.len()
            && results[j].graph == head.graph
            && results[j].filter == head.filter
            && results[j].method == head.method
        {
            j += 1;
        }
        let group = &results[i..j];
        out.push(CellResult {
            graph: head.graph.clone(),
            filter: head.filter.clone(),
            method: head.method.clone(),
            fraction: mean(group.iter().map(|r| r.fraction)),
            seed: head.seed,
            auc: mean(group.iter().map(|r| r.auc)),
            prule: mean(group.iter().map(|r| r.prule)),
            wall_time_s: mean(group.iter().map(|r| r.wall_time_s)),
            params: None,
            final_loss: None,
            failure: group.iter().find_map(|r| r.failure.clone()),
        });
        i = j;
    }
    out
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

pub fn write_csv<W: Write>(writer: W, results: &[CellResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in results {
        let p = r.params;
        w.write_record([
            r.graph.clone(),
            r.filter.clone(),
            r.method.clone(),
            r.fraction.to_string(),
            r.seed.to_string(),
            r.auc.to_string(),
            r.prule.to_string(),
            r.wall_time_s.to_string(),
            opt(p.map(|p| p.a_s)),
            opt(p.map(|p| p.a_sp)),
            opt(p.map(|p| p.b_s)),
            opt(p.map(|p| p.b_sp)),
            opt(p.map(|p| p.a0)),
            opt(r.final_loss),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<CellResult>> {
    let mut rd = csv::Reader::from_reader(reader);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(HarnessError::Config(format!("unexpected results header {header:?}")));
    }
    let num = |s: &str, col: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| HarnessError::Config(format!("bad number `{s}` in column {col}")))
    };
    let optnum = |s: &str, col: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s, col).map(Some)
        }
    };
    let mut out = Vec::new();
    for record in rd.records() {
        let rec = record?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let params = match (
            optnum(f(8), "a_S")?,
            optnum(f(9), "a_Sp")?,
            optnum(f(10), "b_S")?,
            optnum(f(11), "b_Sp")?,
            optnum(f(12), "a0")?,
        ) {
            (Some(a_s), Some(a_sp), Some(b_s), Some(b_sp), Some(a0)) => Some(EditParams {
                a_s,
                a_sp,
                b_s,
                b_sp,
                a0,
            }),
            _ => None,
        };
        let auc = num(f(5), "auc")?;
        let prule = num(f(6), "prule")?;
        out.push(CellResult {
            graph: f(0).to_string(),
            filter: f(1).to_string(),
            method: f(2).to_string(),
            fraction: num(f(3), "fraction")?,
            seed: f(4)
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad seed `{}`", f(4))))?,
            auc,
            prule,
            wall_time_s: num(f(7), "wall_time_s")?,
            params,
            final_loss: optnum(f(13), "final_loss")?,
            failure: (!(auc.is_finite() && prule.is_finite())).then(|| "recorded as failed".into()),
        });
    }
    Ok(out)
}
