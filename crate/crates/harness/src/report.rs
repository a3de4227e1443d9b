//! Summary tables: per-approach means, share of fair settings, and rank
//! statistics, separated by post-processing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use fairfilter::stats::{
    critical_difference, friedman, FriedmanOutcome, ScoreMatrix, NEMENYI_ALPHA,
};
use fairfilter::FilterSpec;

use crate::error::{HarnessError, Result};
use crate::grid::CellResult;

pub const FAIR_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PostGroup {
    Plain,
    Sweep,
}

impl PostGroup {
    pub fn label(self) -> &'static str {
        match self {
            PostGroup::Plain => "no post-processing",
            PostGroup::Sweep => "sweep ratio",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproachSummary {
    pub method: String,
    pub mean_auc: f64,
    pub mean_prule: f64,
    /// Share of settings whose pRule reaches the 80% bar.
    pub fair_share: f64,
    pub auc_rank: f64,
    pub prule_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupReport {
    pub group: PostGroup,
    pub settings: usize,
    pub skipped: usize,
    pub approaches: Vec<ApproachSummary>,
    /// Absent with fewer than three approaches or two settings.
    pub auc_friedman: Option<FriedmanOutcome>,
    pub prule_friedman: Option<FriedmanOutcome>,
    pub critical_difference: Option<f64>,
}

fn group_of(filter: &str) -> Result<PostGroup> {
    let spec: FilterSpec = filter.parse()?;
    Ok(if spec.sweep {
        PostGroup::Sweep
    } else {
        PostGroup::Plain
    })
}

/// Summarizes rows already averaged over split fractions. A setting is a
/// (graph, filter) pair; settings where any approach failed are skipped.
pub fn summarize(rows: &[CellResult]) -> Result<Vec<GroupReport>> {
    if rows.is_empty() {
        return Err(HarnessError::Config("no results to summarize".into()));
    }
    let mut methods: Vec<String> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method.clone());
        }
    }
    let k = methods.len();
    // group -> (graph, filter) -> per-method (auc, prule)
    let mut table: BTreeMap<PostGroup, BTreeMap<(String, String), Vec<Option<(f64, f64)>>>> =
        BTreeMap::new();
    for r in rows {
        let slot = table
            .entry(group_of(&r.filter)?)
            .or_default()
            .entry((r.graph.clone(), r.filter.clone()))
            .or_insert_with(|| vec![None; k]);
        let j = methods.iter().position(|m| *m == r.method).unwrap();
        slot[j] = (!r.failed()).then_some((r.auc, r.prule));
    }

    let mut reports = Vec::new();
    for (group, settings) in table {
        let total = settings.len();
        let complete: Vec<Vec<(f64, f64)>> = settings
            .into_values()
            .filter_map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect();
        let skipped = total - complete.len();
        if skipped > 0 {
            log::warn!("{skipped} {} settings have failed cells and are left out", group.label());
        }
        if complete.is_empty() {
            continue;
        }
        let aucs = ScoreMatrix::new(complete.iter().map(|r| r.iter().map(|x| x.0).collect()).collect())?;
        let prules = ScoreMatrix::new(complete.iter().map(|r| r.iter().map(|x| x.1).collect()).collect())?;
        let n = complete.len();
        let (auc_means, prule_means) = (aucs.column_means(), prules.column_means());
        let (auc_ranks, prule_ranks) = (aucs.average_ranks(), prules.average_ranks());
        let approaches = methods
            .iter()
            .enumerate()
            .map(|(j, m)| ApproachSummary {
                method: m.clone(),
                mean_auc: auc_means[j],
                mean_prule: prule_means[j],
                fair_share: complete.iter().filter(|r| r[j].1 >= FAIR_THRESHOLD).count() as f64
                    / n as f64,
                auc_rank: auc_ranks[j],
                prule_rank: prule_ranks[j],
            })
            .collect();
        let testable = k >= 3 && n >= 2;
        reports.push(GroupReport {
            group,
            settings: n,
            skipped,
            approaches,
            auc_friedman: if testable { Some(friedman(&aucs)?) } else { None },
            prule_friedman: if testable { Some(friedman(&prules)?) } else { None },
            critical_difference: critical_difference(k, n, NEMENYI_ALPHA).ok(),
        });
    }
    Ok(reports)
}

fn friedman_line(name: &str, f: &Option<FriedmanOutcome>) -> String {
    match f {
        Some(f) => format!(
            "{name}: Friedman chi2 = {:.3}, p = {:.3e}, {}\n",
            f.statistic,
            f.p_value,
            if f.reject { "reject" } else { "no reject" }
        ),
        None => format!("{name}: Friedman skipped\n"),
    }
}

pub fn render_text(reports: &[GroupReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "== {} ({} settings) ==", r.group.label(), r.settings);
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>6} {:>6} {:>8} {:>8}",
            "method", "AUC", "pRule", "80%", "AUC rk", "pRule rk"
        );
        for a in &r.approaches {
            let _ = writeln!(
                out,
                "{:<12} {:>6.3} {:>6.3} {:>6.2} {:>8.2} {:>8.2}",
                a.method, a.mean_auc, a.mean_prule, a.fair_share, a.auc_rank, a.prule_rank
            );
        }
        out.push_str(&friedman_line("AUC", &r.auc_friedman));
        out.push_str(&friedman_line("pRule", &r.prule_friedman));
        if let Some(cd) = r.critical_difference {
            let _ = writeln!(out, "Nemenyi CD (alpha 0.05) = {cd:.3}");
        }
        out.push('\n');
    }
    out
}

pub fn write_summary_csv<W: Write>(writer: W, reports: &[GroupReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "group", "method", "auc", "prule", "fair_share", "auc_rank", "prule_rank",
    ])?;
    for r in reports {
        for a in &r.approaches {
            w.write_record([
                r.group.label().to_string(),
                a.method.clone(),
                a.mean_auc.to_string(),
                a.mean_prule.to_string(),
                a.fair_share.to_string(),
                a.auc_rank.to_string(),
                a.prule_rank.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
