//! Result records, the printed summary and CSV/JSON files.

use std::io::Write;
use std::path::Path;

use prodcode::{BerPoint, DecoderVariant, ThresholdResult};
use serde::Serialize;

use crate::config::{Format, Mode, Resolved, TValue};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const NCG_CONVENTION: &str =
    "ncg_db = Eb/N0 needed by uncoded BPSK for the target BER (Q(sqrt(2 Eb/N0)) = target) minus the coded threshold";

pub const CURVE_COLUMNS: [&str; 10] = [
    "run",
    "variant",
    "erasure_threshold",
    "ebn0_db",
    "frames",
    "bits",
    "bit_errors",
    "frame_errors",
    "ber",
    "stop_reason",
];

pub const THRESHOLD_COLUMNS: [&str; 11] = [
    "run",
    "variant",
    "erasure_threshold",
    "t_label",
    "target_ber",
    "estimate_db",
    "lo_db",
    "hi_db",
    "probes",
    "gain_db",
    "ncg_db",
];

#[derive(Clone, Debug, Serialize)]
pub struct CurveResult {
    pub name: String,
    pub variant: DecoderVariant,
    pub erasure_threshold: f64,
    pub points: Vec<BerPoint>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdRow {
    pub name: String,
    pub variant: DecoderVariant,
    pub erasure_threshold: f64,
    /// The sweep value as written (sweep-t mode).
    pub t_label: Option<TValue>,
    /// Baseline threshold minus this threshold.
    pub gain_db: Option<f64>,
    /// Net coding gain at the search target BER.
    pub ncg_at_target_db: f64,
    pub result: ThresholdResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct NcgRow {
    pub threshold_db: f64,
    pub target_ber: f64,
    pub uncoded_db: f64,
    pub ncg_db: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Results {
    Curves(Vec<CurveResult>),
    Thresholds(Vec<ThresholdRow>),
}

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config: &'a Resolved,
    ncg_convention: &'static str,
    results: &'a Results,
    ncg: &'a [NcgRow],
}

fn stop_name(p: &BerPoint) -> String {
    serde_json::to_value(p.stop_reason)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn print_summary(out: &mut dyn Write, r: &Resolved, results: &Results, ncg: &[NcgRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "code ({}, {}, {}){}  rate {:.4}  seed {}",
        r.code.n,
        r.code.k,
        r.code.t,
        if r.code.even_weight { " even-weight" } else { "" },
        r.code.rate,
        r.seed
    )?;
    match results {
        Results::Curves(curves) => {
            writeln!(
                out,
                "{:<12} {:>8} {:>9} {:>12} {:>12} {:>10}",
                "run", "T", "Eb/N0 dB", "frames", "frame errs", "BER"
            )?;
            for c in curves {
                for p in &c.points {
                    writeln!(
                        out,
                        "{:<12} {:>8.4} {:>9.3} {:>12} {:>12} {:>10.3e}",
                        c.name, c.erasure_threshold, p.ebn0_db, p.frames, p.frame_errors, p.ber
                    )?;
                }
            }
        }
        Results::Thresholds(rows) => {
            let baseline = r.threshold.baseline.as_deref().unwrap_or_default();
            writeln!(
                out,
                "target BER {:.1e}, resolution {} dB{}",
                r.threshold.target_ber,
                r.threshold.resolution_db,
                if r.mode == Mode::Threshold {
                    format!(", gains vs {baseline}")
                } else {
                    String::new()
                }
            )?;
            writeln!(
                out,
                "{:<12} {:>8} {:>12} {:>10} {:>10}",
                "run", "T", "threshold dB", "gain dB", "NCG dB"
            )?;
            for row in rows {
                let gain = row.gain_db.map_or("-".to_string(), |g| format!("{g:.3}"));
                writeln!(
                    out,
                    "{:<12} {:>8.4} {:>12.3} {:>10} {:>10.3}",
                    row.name, row.erasure_threshold, row.result.estimate_db, gain, row.ncg_at_target_db
                )?;
            }
            if r.mode == Mode::SweepT && !rows.is_empty() {
                let best = rows
                    .iter()
                    .min_by(|a, b| a.result.estimate_db.total_cmp(&b.result.estimate_db))
                    .expect("nonempty");
                let max = rows.iter().map(|x| x.result.estimate_db).fold(f64::MIN, f64::max);
                writeln!(
                    out,
                    "best T {:.4} at {:.3} dB, spread {:.3} dB",
                    best.erasure_threshold,
                    best.result.estimate_db,
                    max - best.result.estimate_db
                )?;
            }
        }
    }
    if !ncg.is_empty() {
        print_ncg(out, ncg)?;
    }
    Ok(())
}

pub fn print_ncg(out: &mut dyn Write, rows: &[NcgRow]) -> std::io::Result<()> {
    writeln!(out, "{:>12} {:>12} {:>12} {:>10}", "threshold dB", "target BER", "uncoded dB", "NCG dB")?;
    for r in rows {
        writeln!(
            out,
            "{:>12.3} {:>12.1e} {:>12.3} {:>10.3}",
            r.threshold_db, r.target_ber, r.uncoded_db, r.ncg_db
        )?;
    }
    Ok(())
}

pub fn write_file(path: &Path, format: Format, r: &Resolved, results: &Results, ncg: &[NcgRow]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Runtime(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    match format {
        Format::Json => {
            let doc = Document {
                schema_version: SCHEMA_VERSION,
                tool: "prodcode",
                version: env!("CARGO_PKG_VERSION"),
                seed: r.seed,
                config: r,
                ncg_convention: NCG_CONVENTION,
                results,
                ncg,
            };
            serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| CliError::Runtime(e.to_string()))?;
            writeln!(w).map_err(io)?;
        }
        Format::Csv => {
            let config = serde_json::to_string(r).map_err(|e| CliError::Runtime(e.to_string()))?;
            writeln!(w, "# schema_version: {SCHEMA_VERSION}").map_err(io)?;
            writeln!(w, "# config: {config}").map_err(io)?;
            write_csv(&mut w, results).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        }
    }
    w.flush().map_err(io)
}

fn write_csv(w: &mut dyn Write, results: &Results) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    match results {
        Results::Curves(curves) => {
            csv.write_record(CURVE_COLUMNS)?;
            for c in curves {
                for p in &c.points {
                    csv.write_record([
                        c.name.clone(),
                        c.variant.to_string(),
                        c.erasure_threshold.to_string(),
                        p.ebn0_db.to_string(),
                        p.frames.to_string(),
                        p.payload_bits.to_string(),
                        p.bit_errors.to_string(),
                        p.frame_errors.to_string(),
                        format!("{:e}", p.ber),
                        stop_name(p),
                    ])?;
                }
            }
        }
        Results::Thresholds(rows) => {
            csv.write_record(THRESHOLD_COLUMNS)?;
            for row in rows {
                let res = &row.result;
                csv.write_record([
                    row.name.clone(),
                    row.variant.to_string(),
                    row.erasure_threshold.to_string(),
                    row.t_label.map(|t| t.to_string()).unwrap_or_default(),
                    format!("{:e}", res.target_ber),
                    res.estimate_db.to_string(),
                    res.bracket.0.to_string(),
                    res.bracket.1.to_string(),
                    res.probes.len().to_string(),
                    row.gain_db.map(|g| g.to_string()).unwrap_or_default(),
                    row.ncg_at_target_db.to_string(),
                ])?;
            }
        }
    }
    csv.flush()?;
    Ok(())
}
