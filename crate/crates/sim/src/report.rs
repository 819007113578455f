use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ReportFormat;
use crate::error::Result;
use crate::runner::RoundReport;

/// One flat row per round; the summary row carries column means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub round: String,
    pub n: f64,
    pub d: f64,
    pub k: f64,
    pub attack: String,
    pub flagged: String,
    pub honest_count: f64,
    pub aggregate_correct: f64,
    pub honest_excluded: f64,
    pub attackers_passed: f64,
    pub max_exposure: f64,
    pub t_commit: f64,
    pub t_proof_gen: f64,
    pub t_proof_ver: f64,
    pub t_prep: f64,
    pub t_aggregation: f64,
    pub exp_proof_gen: f64,
    pub exp_proof_ver: f64,
    pub exp_prep: f64,
    pub bytes_per_client_mean: f64,
    pub bytes_total: f64,
}

impl ReportRow {
    pub fn from_report(r: &RoundReport) -> Self {
        let flagged = r.flagged.iter().map(|(i, why)| format!("{i}:{why}")).collect::<Vec<_>>().join(";");
        let bytes = r.bytes_per_client.values().sum::<usize>() as f64 / r.bytes_per_client.len().max(1) as f64;
        ReportRow {
            round: r.round.to_string(),
            n: r.n as f64,
            d: r.d as f64,
            k: r.k as f64,
            attack: r.attack.clone(),
            flagged,
            honest_count: r.honest_set.len() as f64,
            aggregate_correct: r.aggregate_correct as u8 as f64,
            honest_excluded: r.honest_excluded as f64,
            attackers_passed: r.attackers_passed as f64,
            max_exposure: r.max_exposure as f64,
            t_commit: r.timings.commit,
            t_proof_gen: r.timings.proof_gen,
            t_proof_ver: r.timings.proof_ver,
            t_prep: r.timings.prep,
            t_aggregation: r.timings.aggregation,
            exp_proof_gen: r.exponentiations.proof_gen,
            exp_proof_ver: r.exponentiations.proof_ver,
            exp_prep: r.exponentiations.prep,
            bytes_per_client_mean: bytes,
            bytes_total: r.bytes_total as f64,
        }
    }

    fn summary(rows: &[ReportRow]) -> Self {
        let mean = |f: fn(&ReportRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
        ReportRow {
            round: "mean".into(),
            n: mean(|r| r.n),
            d: mean(|r| r.d),
            k: mean(|r| r.k),
            attack: String::new(),
            flagged: String::new(),
            honest_count: mean(|r| r.honest_count),
            aggregate_correct: mean(|r| r.aggregate_correct),
            honest_excluded: mean(|r| r.honest_excluded),
            attackers_passed: mean(|r| r.attackers_passed),
            max_exposure: mean(|r| r.max_exposure),
            t_commit: mean(|r| r.t_commit),
            t_proof_gen: mean(|r| r.t_proof_gen),
            t_proof_ver: mean(|r| r.t_proof_ver),
            t_prep: mean(|r| r.t_prep),
            t_aggregation: mean(|r| r.t_aggregation),
            exp_proof_gen: mean(|r| r.exp_proof_gen),
            exp_proof_ver: mean(|r| r.exp_proof_ver),
            exp_prep: mean(|r| r.exp_prep),
            bytes_per_client_mean: mean(|r| r.bytes_per_client_mean),
            bytes_total: mean(|r| r.bytes_total),
        }
    }
}

/// Data rows followed by the summary row.
pub fn report_rows(reports: &[RoundReport]) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = reports.iter().map(ReportRow::from_report).collect();
    if !rows.is_empty() {
        rows.push(ReportRow::summary(&rows));
    }
    rows
}

pub fn write_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(rows: &[ReportRow], path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(rows)?)?;
    Ok(())
}

/// Writes `rounds.csv` / `rounds.json` and, if asked, one binary transcript
/// per round. Returns the paths written.
pub fn emit_report(
    reports: &[RoundReport],
    dir: &Path,
    formats: &[ReportFormat],
    transcripts: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let rows = report_rows(reports);
    let mut written = Vec::new();
    for f in formats {
        let path = match f {
            ReportFormat::Csv => dir.join("rounds.csv"),
            ReportFormat::Json => dir.join("rounds.json"),
        };
        match f {
            ReportFormat::Csv => write_csv(&rows, &path)?,
            ReportFormat::Json => write_json(&rows, &path)?,
        }
        written.push(path);
    }
    if transcripts {
        for r in reports {
            let path = dir.join(format!("round_{:04}.bin", r.round));
            fs::write(&path, &r.transcript)?;
            written.push(path);
        }
    }
    Ok(written)
}
