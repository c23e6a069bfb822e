use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::aggregate::combo_slug;
use super::svg::{boxplot, heatmap, line_plot, Box5, Series};
use super::{write_file, BenchError, Result};
use crate::aggregation::{rank_from_qualities, Strategy};
use crate::analysis::{
    replicability_curve, sensitivity_matrix, tuning_gain, AnalysisError, Factor, GainSummary,
    QualityGrid, ReplicabilityOptions,
};
use crate::models::{EvaluationRecord, Tuning};
use crate::util::quantile_sorted;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Sensitivity,
    Replicability,
    Ranks,
    TuningGain,
}

impl ReportKind {
    pub const ALL: [ReportKind; 4] = [
        ReportKind::Sensitivity,
        ReportKind::Replicability,
        ReportKind::Ranks,
        ReportKind::TuningGain,
    ];
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportKind::Sensitivity => "sensitivity",
            ReportKind::Replicability => "replicability",
            ReportKind::Ranks => "ranks",
            ReportKind::TuningGain => "tuning-gain",
        })
    }
}

impl FromStr for ReportKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ReportKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown report kind `{s}`"))
    }
}

/// Files written by a report plus notes on anything skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportOutput {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

/// Writes the CSV and SVG files of one report kind into `dir`.
pub fn report(
    records: &[EvaluationRecord],
    kind: ReportKind,
    dir: &Path,
    seed: u64,
) -> Result<ReportOutput> {
    let grid = QualityGrid::from_records(records);
    if grid.is_empty() {
        return Err(BenchError::MissingPrerequisite {
            kind: kind.to_string(),
            reason: "the store is empty".into(),
        });
    }
    match kind {
        ReportKind::Sensitivity => sensitivity(&grid, dir),
        ReportKind::Replicability => replicability(&grid, dir, seed),
        ReportKind::Ranks => ranks(&grid, dir),
        ReportKind::TuningGain => gains(records, dir),
    }
}

fn sensitivity(grid: &QualityGrid, dir: &Path) -> Result<ReportOutput> {
    let mut out = ReportOutput::default();
    for factor in Factor::ALL {
        match sensitivity_matrix(grid, factor, &Strategy::all()) {
            Ok(r) => {
                out.files.push(write_file(
                    dir,
                    &format!("sensitivity_{factor}.csv"),
                    &r.to_csv(),
                )?);
                let n = r.values.len();
                let cells: Vec<Vec<Option<f64>>> = (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| if a <= b { r.rho[a][b] } else { r.jaccard[a][b] })
                            .collect()
                    })
                    .collect();
                let title = format!("Sensitivity to {factor}: rho (upper), J (lower)");
                out.files.push(write_file(
                    dir,
                    &format!("sensitivity_{factor}.svg"),
                    &heatmap(&title, &r.values, &cells),
                )?);
                if r.degenerate_spearman > 0 {
                    out.notes.push(format!(
                        "{factor}: {} constant-rank Spearman comparisons used the tie convention",
                        r.degenerate_spearman
                    ));
                }
            }
            Err(AnalysisError::InsufficientData(why)) => {
                out.notes.push(format!("{factor}: skipped ({why})"))
            }
            Err(e) => return Err(e.into()),
        }
    }
    if out.files.is_empty() {
        return Err(BenchError::MissingPrerequisite {
            kind: "sensitivity".into(),
            reason: "every factor takes a single value in the store".into(),
        });
    }
    Ok(out)
}

fn replicability(grid: &QualityGrid, dir: &Path, seed: u64) -> Result<ReportOutput> {
    let half = grid.datasets.len() / 2;
    if half == 0 {
        return Err(BenchError::MissingPrerequisite {
            kind: "replicability".into(),
            reason: "need at least two datasets for disjoint samples".into(),
        });
    }
    let options = ReplicabilityOptions {
        sizes: (1..=half).collect(),
        seed,
        ..Default::default()
    };
    let curve = replicability_curve(grid, &options)?;
    let mut out = ReportOutput::default();
    out.files
        .push(write_file(dir, "replicability.csv", &curve.to_csv())?);
    let series = [("rho", &curve.rho), ("J", &curve.jaccard)].map(|(label, pts)| Series {
        label: format!("{label}-replicability"),
        points: pts
            .iter()
            .map(|p| (p.size as f64, p.mean, p.ci_low, p.ci_high))
            .collect(),
    });
    out.files.push(write_file(
        dir,
        "replicability.svg",
        &line_plot("Replicability", "sample size", &series),
    )?);
    if curve.degenerate_spearman > 0 {
        out.notes.push(format!(
            "{} constant-rank Spearman comparisons used the tie convention",
            curve.degenerate_spearman
        ));
    }
    Ok(out)
}

fn five(mut xs: Vec<f64>) -> Box5 {
    xs.sort_by(f64::total_cmp);
    let q = |p| quantile_sorted(&xs, p);
    (xs[0], q(0.25), q(0.5), q(0.75), xs[xs.len() - 1])
}

fn ranks(grid: &QualityGrid, dir: &Path) -> Result<ReportOutput> {
    let mut long = csv::Writer::from_writer(Vec::new());
    long.write_record(["combo", "dataset", "encoder", "rank"])
        .unwrap();
    let mut per_encoder: Vec<Vec<f64>> = vec![Vec::new(); grid.encoders.len()];
    for (combo, table) in &grid.tables {
        for (j, dataset) in grid.datasets.iter().enumerate() {
            let Ok(order) = rank_from_qualities(&table.column(j)) else {
                continue;
            };
            for (i, encoder) in grid.encoders.iter().enumerate() {
                if let Some(r) = order.rank(i) {
                    long.write_record([
                        combo_slug(combo),
                        dataset.clone(),
                        encoder.clone(),
                        format!("{r}"),
                    ])
                    .unwrap();
                    per_encoder[i].push(r);
                }
            }
        }
    }
    let mut summary = csv::Writer::from_writer(Vec::new());
    summary
        .write_record(["encoder", "count", "min", "q1", "median", "q3", "max"])
        .unwrap();
    let mut groups = Vec::new();
    for (encoder, rs) in grid.encoders.iter().zip(per_encoder) {
        if rs.is_empty() {
            summary
                .write_record([encoder.as_str(), "0", "", "", "", "", ""])
                .unwrap();
            continue;
        }
        let count = rs.len();
        let b = five(rs);
        let mut row = vec![encoder.clone(), count.to_string()];
        row.extend([b.0, b.1, b.2, b.3, b.4].map(|x| format!("{x:.6}")));
        summary.write_record(&row).unwrap();
        groups.push((encoder.clone(), b));
    }
    let text = |w: csv::Writer<Vec<u8>>| String::from_utf8(w.into_inner().unwrap()).unwrap();
    let mut out = ReportOutput::default();
    out.files.push(write_file(dir, "ranks.csv", &text(long))?);
    out.files
        .push(write_file(dir, "ranks_summary.csv", &text(summary))?);
    let svg = boxplot(
        "Ranks of encoders",
        "rank (1 = best)",
        &groups,
        1.0,
        grid.encoders.len().max(2) as f64,
    );
    out.files.push(write_file(dir, "ranks.svg", &svg)?);
    Ok(out)
}

fn gains(records: &[EvaluationRecord], dir: &Path) -> Result<ReportOutput> {
    let present: Vec<Tuning> = Tuning::ALL
        .into_iter()
        .filter(|t| records.iter().any(|r| r.tuning == *t))
        .collect();
    if present.len() < 2 {
        return Err(BenchError::MissingPrerequisite {
            kind: "tuning-gain".into(),
            reason: "the store holds a single tuning strategy".into(),
        });
    }
    let mut out = ReportOutput::default();
    for (k, &b) in present.iter().enumerate() {
        for &a in &present[k + 1..] {
            let stem = format!("tuning_gain_{a}_vs_{b}");
            match tuning_gain(records, a, b) {
                Ok(g) => {
                    out.files
                        .push(write_file(dir, &format!("{stem}.csv"), &g.deltas_csv())?);
                    out.files.push(write_file(
                        dir,
                        &format!("{stem}_summary.csv"),
                        &g.summary_csv(),
                    )?);
                    let groups: Vec<(String, Box5)> = g
                        .summaries
                        .iter()
                        .filter(|s| s.factor == "model" || s.factor == "all")
                        .map(|s: &GainSummary| {
                            (s.value.clone(), (s.min, s.q1, s.median, s.q3, s.max))
                        })
                        .collect();
                    let lo = groups.iter().map(|g| g.1 .0).fold(0.0, f64::min);
                    let hi = groups.iter().map(|g| g.1 .4).fold(0.0, f64::max);
                    let svg = boxplot(&format!("{a} minus {b}"), "quality delta", &groups, lo, hi);
                    out.files
                        .push(write_file(dir, &format!("{stem}.svg"), &svg)?);
                }
                Err(AnalysisError::NoSharedFactors) => {
                    out.notes.push(format!("{a} vs {b}: no shared evaluations"))
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(out)
}
