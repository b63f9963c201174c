use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{OutputFormat, ResultRow};
use crate::detect::Detector;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "dataset",
    "method",
    "scale",
    "detector",
    "seed",
    "budget",
    "nmi",
    "ari",
    "h",
    "delta",
    "degree_increment_pct",
    "walltime_s",
];

/// Mean and sample standard deviation of one metric over the rows of one
/// (method, detector) group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: String,
    pub detector: String,
    pub metric: String,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
}

fn metric_values(row: &ResultRow) -> [(&'static str, Option<f64>); 9] {
    [
        ("budget", row.budget.map(|b| b as f64)),
        ("nmi", row.nmi),
        ("ari", row.ari),
        ("h", row.h),
        ("delta", row.delta.map(|d| if d { 1.0 } else { 0.0 })),
        ("degree_increment_pct", row.degree_increment_pct),
        ("walltime_s", row.walltime_s),
        ("nmi_gt", row.nmi_gt),
        ("ari_gt", row.ari_gt),
    ]
}

/// Per (method, detector) means and standard deviations of every metric
/// present in the rows. Rows carrying an error are skipped.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    type Key = (String, Option<Detector>, String);
    let mut groups: BTreeMap<Key, BTreeMap<usize, (&'static str, Vec<f64>)>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.error.is_none()) {
        let key = (
            row.method.clone(),
            row.detector.parse().ok(),
            row.detector.clone(),
        );
        let entry = groups.entry(key).or_default();
        for (i, (name, value)) in metric_values(row).into_iter().enumerate() {
            if let Some(v) = value {
                entry.entry(i).or_insert((name, Vec::new())).1.push(v);
            }
        }
    }
    let mut out = Vec::new();
    for ((method, _, detector), metrics) in groups {
        for (_, (name, values)) in metrics {
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let std = if count > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
            } else {
                0.0
            };
            out.push(SummaryRow {
                method: method.clone(),
                detector: detector.clone(),
                metric: name.to_string(),
                count,
                mean,
                std,
            });
        }
    }
    out
}

fn field<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows as CSV. The twelve standard columns always come first;
/// `nmi_gt,ari_gt` follow when any row has ground-truth metrics and `error`
/// when any row failed.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let with_gt = rows
        .iter()
        .any(|r| r.nmi_gt.is_some() || r.ari_gt.is_some());
    let with_error = rows.iter().any(|r| r.error.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if with_gt {
        header.extend(["nmi_gt", "ari_gt"]);
    }
    if with_error {
        header.push("error");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.dataset.clone(),
            r.method.clone(),
            r.scale.clone(),
            r.detector.clone(),
            r.seed.to_string(),
            field(&r.budget),
            field(&r.nmi),
            field(&r.ari),
            field(&r.h),
            r.delta
                .map(|d| if d { "1" } else { "0" }.to_string())
                .unwrap_or_default(),
            field(&r.degree_increment_pct),
            field(&r.walltime_s),
        ];
        if with_gt {
            rec.push(field(&r.nmi_gt));
            rec.push(field(&r.ari_gt));
        }
        if with_error {
            rec.push(r.error.clone().unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(summary: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in summary {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

/// Path of the summary written next to `path`: `runs.csv` becomes
/// `runs.summary.csv`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.summary.{}", ext.to_string_lossy()),
        None => format!("{stem}.summary"),
    };
    path.with_file_name(name)
}

/// Writes the rows to `path` and their summary to [`summary_path`].
/// Returns the summary path.
pub fn emit_report(rows: &[ResultRow], format: OutputFormat, path: &Path) -> Result<PathBuf> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no result rows to write".into()));
    }
    let summary = summarize(rows);
    let summary_file = summary_path(path);
    let rows_out = BufWriter::new(File::create(path)?);
    let summary_out = BufWriter::new(File::create(&summary_file)?);
    match format {
        OutputFormat::Csv => {
            write_csv(rows, rows_out)?;
            write_summary_csv(&summary, summary_out)?;
        }
        OutputFormat::Json => {
            write_json(rows, rows_out)?;
            write_json(&summary, summary_out)?;
        }
    }
    Ok(summary_file)
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(seed: u64, detector: &str, nmi: f64) -> ResultRow {
        ResultRow {
            dataset: "toy".into(),
            method: "epa".into(),
            scale: "global".into(),
            detector: detector.into(),
            seed,
            budget: Some(3),
            nmi: Some(nmi),
            ari: Some(0.5),
            h: None,
            delta: None,
            degree_increment_pct: None,
            walltime_s: None,
            nmi_gt: None,
            ari_gt: None,
            error: None,
        }
    }

    #[test]
    fn single_row_csv() {
        let mut buf = Vec::new();
        write_csv(&[row(1, "louvain", 0.25)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "toy,epa,global,louvain,1,3,0.25,0.5,,,,");
    }

    #[test]
    fn summary_statistics() {
        let rows = [
            row(0, "louvain", 0.2),
            row(1, "louvain", 0.4),
            row(0, "greedy", 1.0),
        ];
        let s = summarize(&rows);
        let nmi = s
            .iter()
            .find(|s| s.detector == "louvain" && s.metric == "nmi")
            .unwrap();
        assert_eq!(nmi.count, 2);
        assert!((nmi.mean - 0.3).abs() < 1e-12);
        assert!((nmi.std - (0.02f64).sqrt()).abs() < 1e-12);
        assert!(s.iter().all(|r| r.metric != "h"));
    }

    #[test]
    fn summary_path_is_a_sibling() {
        assert_eq!(
            summary_path(Path::new("/tmp/a/runs.csv")),
            PathBuf::from("/tmp/a/runs.summary.csv")
        );
        assert_eq!(summary_path(Path::new("out")), PathBuf::from("out.summary"));
    }
}
