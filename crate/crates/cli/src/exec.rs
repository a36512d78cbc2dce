//! Command execution.

use std::io::Write;

use prodcode::simkit::uncoded_requirement_db;
use prodcode::{ncg_db, ChannelConfig64, DecoderVariant, MonteCarlo};

use crate::args::{Cli, CodeFlags, Command, CommonFlags, SearchFlags};
use crate::config::{
    parse_bracket, CodeSpec, DecoderSpec, ExperimentConfig, Format, Grid, Mode, NcgSpec, Resolved, StopSpec,
    SweepSpec, TValue,
};
use crate::output::{self, CurveResult, NcgRow, Results, ThresholdRow};
use crate::{selftest, CliError};

pub fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, common } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_toml(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            apply_common(&mut cfg, &common)?;
            execute(&cfg, out, err)
        }
        Command::Ber { code, ebn0, common } => {
            let mut cfg = from_code_flags(Mode::Ber, &code)?;
            cfg.ebn0 = Some(Grid::Range(ebn0));
            apply_common(&mut cfg, &common)?;
            execute(&cfg, out, err)
        }
        Command::Threshold { code, search, common } => {
            let mut cfg = from_code_flags(Mode::Threshold, &code)?;
            apply_search(&mut cfg, &search)?;
            apply_common(&mut cfg, &common)?;
            execute(&cfg, out, err)
        }
        Command::SweepT {
            code,
            values,
            search,
            common,
        } => {
            let mut cfg = from_code_flags(Mode::SweepT, &code)?;
            cfg.sweep_t = Some(SweepSpec {
                values: values.iter().map(|v| v.parse()).collect::<Result<_, _>>()?,
            });
            apply_search(&mut cfg, &search)?;
            apply_common(&mut cfg, &common)?;
            execute(&cfg, out, err)
        }
        Command::Ncg {
            thresholds_db,
            target_ber,
        } => {
            let rows = ncg_rows(&NcgSpec {
                target_ber,
                thresholds_db,
            })?;
            output::print_ncg(out, &rows).map_err(io_err)
        }
        Command::Selftest { seed, inject_fault } => {
            let fault = match inject_fault.as_deref() {
                None => None,
                Some(f) => Some(f.parse::<selftest::Fault>()?),
            };
            selftest::run(seed, fault, out)
        }
    }
}

fn from_code_flags(mode: Mode, flags: &CodeFlags) -> Result<ExperimentConfig, CliError> {
    let code = CodeSpec::parse_short(&flags.code)?;
    let t = flags.erasure_threshold.as_deref().map(str::parse::<TValue>).transpose()?;
    let mut decoders = Vec::new();
    for name in &flags.decoder {
        let variant: DecoderVariant = name.parse().map_err(|e: prodcode::Error| CliError::Config(e.to_string()))?;
        let mut spec = DecoderSpec::new(variant, flags.iters);
        if variant == DecoderVariant::Drsd {
            spec.drsd_iterations = flags.drsd_iters;
            spec.anchor_threshold = flags.anchor_threshold;
        }
        if variant != DecoderVariant::Ibdd {
            spec.erasure_threshold = t;
        }
        decoders.push(spec);
    }
    let mut cfg = ExperimentConfig::new(mode, code, decoders);
    let d = StopSpec::default();
    cfg.stop = StopSpec {
        min_frame_errors: flags.min_frame_errors.unwrap_or(d.min_frame_errors),
        max_frames: flags.max_frames.unwrap_or(d.max_frames),
    };
    Ok(cfg)
}

fn apply_search(cfg: &mut ExperimentConfig, search: &SearchFlags) -> Result<(), CliError> {
    cfg.threshold.target_ber = search.target_ber;
    if let Some(b) = &search.bracket {
        cfg.threshold.bracket = parse_bracket(b)?;
    }
    if let Some(r) = search.resolution {
        cfg.threshold.resolution_db = r;
    }
    if !search.ncg_thresholds_db.is_empty() {
        cfg.ncg = Some(NcgSpec {
            target_ber: search.ncg_target_ber,
            thresholds_db: search.ncg_thresholds_db.clone(),
        });
    }
    Ok(())
}

fn apply_common(cfg: &mut ExperimentConfig, common: &CommonFlags) -> Result<(), CliError> {
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(p) = &common.out {
        cfg.output.path = Some(p.clone());
        if common.format.is_none() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            cfg.output.format = Format::Json;
        }
    }
    if let Some(f) = &common.format {
        cfg.output.format = f.parse()?;
    }
    Ok(())
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Runtime(format!("write failed: {e}"))
}

fn ncg_rows(spec: &NcgSpec) -> Result<Vec<NcgRow>, CliError> {
    let uncoded = uncoded_requirement_db(spec.target_ber).map_err(|e| CliError::Config(e.to_string()))?;
    spec.thresholds_db
        .iter()
        .map(|&th| {
            Ok(NcgRow {
                threshold_db: th,
                target_ber: spec.target_ber,
                uncoded_db: uncoded,
                ncg_db: ncg_db(th, spec.target_ber).map_err(|e| CliError::Config(e.to_string()))?,
            })
        })
        .collect()
}

/// Resolves and runs an experiment, printing a summary to `out` and
/// progress to `err`, and writing the result file if one is configured.
pub fn execute(cfg: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let r = cfg.resolve()?;
    let mc = MonteCarlo::new(r.stop, r.workers)?;
    let results = match r.mode {
        Mode::Ber => Results::Curves(run_curves(&r, &mc, err)?),
        Mode::Threshold => Results::Thresholds(run_thresholds(&r, &mc, err)?),
        Mode::SweepT => Results::Thresholds(run_sweep(&r, &mc, err)?),
    };
    let ncg = r.ncg.as_ref().map(ncg_rows).transpose()?.unwrap_or_default();
    output::print_summary(out, &r, &results, &ncg).map_err(io_err)?;
    if let Some(path) = &r.output.path {
        output::write_file(path, r.output.format, &r, &results, &ncg)?;
        writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    }
    Ok(())
}

fn channel(r: &Resolved, erasure_threshold: f64) -> ChannelConfig64 {
    ChannelConfig64 {
        ebn0_db: 0.0,
        rate: r.product.rate(),
        erasure_threshold,
        seed: r.seed,
    }
}

fn run_curves(r: &Resolved, mc: &MonteCarlo, err: &mut dyn Write) -> Result<Vec<CurveResult>, CliError> {
    let mut curves = Vec::new();
    for d in &r.decoders {
        let chan = channel(r, d.config.erasure_threshold);
        let mut points = Vec::new();
        for &db in &r.ebn0 {
            let p = mc.run_ber_point(&r.product, &d.config, &ChannelConfig64 { ebn0_db: db, ..chan })?;
            let _ = writeln!(
                err,
                "{:<12} {:>7.3} dB  ber {:.3e}  frames {}  frame errors {}",
                d.name, db, p.ber, p.frames, p.frame_errors
            );
            points.push(p);
        }
        let warnings = prodcode::simkit::monotonicity_warnings(&points);
        for w in &warnings {
            let _ = writeln!(err, "warning: {}: {w}", d.name);
        }
        curves.push(CurveResult {
            name: d.name.clone(),
            variant: d.config.variant,
            erasure_threshold: d.config.erasure_threshold,
            points,
            warnings,
        });
    }
    Ok(curves)
}

fn search_one(
    r: &Resolved,
    mc: &MonteCarlo,
    name: &str,
    config: &prodcode::DecoderConfig64,
    err: &mut dyn Write,
) -> Result<ThresholdRow, CliError> {
    let th = &r.threshold;
    let result = mc.threshold_search(
        &r.product,
        config,
        &channel(r, config.erasure_threshold),
        th.target_ber,
        th.bracket,
        th.resolution_db,
    )?;
    let _ = writeln!(
        err,
        "{:<12} T = {:.4}  threshold {:.3} dB ({} probes)",
        name,
        config.erasure_threshold,
        result.estimate_db,
        result.probes.len()
    );
    for w in &result.warnings {
        let _ = writeln!(err, "warning: {name}: {w}");
    }
    let ncg = ncg_db(result.estimate_db, th.target_ber)?;
    Ok(ThresholdRow {
        name: name.to_string(),
        variant: config.variant,
        erasure_threshold: config.erasure_threshold,
        t_label: None,
        gain_db: None,
        ncg_at_target_db: ncg,
        result,
    })
}

fn run_thresholds(r: &Resolved, mc: &MonteCarlo, err: &mut dyn Write) -> Result<Vec<ThresholdRow>, CliError> {
    let mut rows = r
        .decoders
        .iter()
        .map(|d| search_one(r, mc, &d.name, &d.config, err))
        .collect::<Result<Vec<_>, _>>()?;
    let baseline = r.threshold.baseline.as_deref().unwrap_or(&r.decoders[0].name);
    let base = rows
        .iter()
        .find(|row| row.name == baseline)
        .map(|row| row.result.estimate_db)
        .expect("baseline resolved to a decoder");
    for row in &mut rows {
        row.gain_db = Some(base - row.result.estimate_db);
    }
    Ok(rows)
}

fn run_sweep(r: &Resolved, mc: &MonteCarlo, err: &mut dyn Write) -> Result<Vec<ThresholdRow>, CliError> {
    let d = &r.decoders[0];
    let mut rows = Vec::new();
    for v in &r.sweep_t {
        let mut config = d.config;
        config.erasure_threshold = v.value;
        let mut row = search_one(r, mc, &d.name, &config, err)?;
        row.t_label = Some(v.label);
        rows.push(row);
    }
    Ok(rows)
}
