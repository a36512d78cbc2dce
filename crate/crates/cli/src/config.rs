//! Experiment configuration: the TOML file format, flag-built configs, and
//! resolution into fully specified runs.

use std::path::PathBuf;

use prodcode::defaults::{default_anchor_threshold, default_erasure_threshold};
use prodcode::{ComponentCode, DecoderConfig64, DecoderVariant, ProductCode, StoppingRule};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ITERATIONS: usize = 20;
pub const DEFAULT_GRID: &str = "3.0:0.25:5.0";
pub const DEFAULT_TARGET_BER: f64 = 1e-4;
pub const DEFAULT_BRACKET: (f64, f64) = (2.0, 7.0);
pub const DEFAULT_NCG_TARGET: f64 = 1e-15;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Ber,
    Threshold,
    SweepT,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// The on-disk experiment description. Only `code` and at least one
/// `[[decoder]]` are required.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub mode: Mode,
    pub code: CodeSpec,
    #[serde(rename = "decoder")]
    pub decoders: Vec<DecoderSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub stop: StopSpec,
    /// Eb/N0 grid for BER mode: `"start:step:stop"` or a list.
    #[serde(default)]
    pub ebn0: Option<Grid>,
    #[serde(default)]
    pub threshold: ThresholdSpec,
    #[serde(default)]
    pub sweep_t: Option<SweepSpec>,
    #[serde(default)]
    pub ncg: Option<NcgSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    /// Component length `2^nu - 1`; give this or `nu`.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub nu: Option<u32>,
    pub t: usize,
    #[serde(default)]
    pub even_weight: bool,
}

impl CodeSpec {
    /// Parses `n,t[,even|plain]`.
    pub fn parse_short(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || CliError::Config(format!("code `{s}`: expected n,t[,even|plain]"));
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let n = parts[0].parse().map_err(|_| bad())?;
        let t = parts[1].parse().map_err(|_| bad())?;
        let even_weight = match parts.get(2).copied() {
            None | Some("plain") | Some("odd") => false,
            Some("even") => true,
            Some(_) => return Err(bad()),
        };
        Ok(Self {
            n: Some(n),
            nu: None,
            t,
            even_weight,
        })
    }

    pub fn degree(&self) -> Result<u32, CliError> {
        let from_n = |n: usize| -> Result<u32, CliError> {
            let m = n + 1;
            if m.is_power_of_two() {
                Ok(m.trailing_zeros())
            } else {
                Err(CliError::Config(format!("component length {n} is not of the form 2^nu - 1")))
            }
        };
        match (self.n, self.nu) {
            (Some(n), Some(nu)) => {
                let d = from_n(n)?;
                if d != nu {
                    return Err(CliError::Config(format!("n = {n} does not match nu = {nu}")));
                }
                Ok(nu)
            }
            (Some(n), None) => from_n(n),
            (None, Some(nu)) => Ok(nu),
            (None, None) => Err(CliError::Config("code needs `n` or `nu`".into())),
        }
    }
}

/// An erasure threshold: absolute, or a multiple of the bundled default
/// written like `"1.1x"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TValueRepr", into = "TValueRepr")]
pub enum TValue {
    Absolute(f64),
    Relative(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum TValueRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<TValueRepr> for TValue {
    type Error = CliError;

    fn try_from(r: TValueRepr) -> Result<Self, CliError> {
        match r {
            TValueRepr::Number(x) => Ok(TValue::Absolute(x)),
            TValueRepr::Text(s) => s.parse(),
        }
    }
}

impl From<TValue> for TValueRepr {
    fn from(v: TValue) -> Self {
        match v {
            TValue::Absolute(x) => TValueRepr::Number(x),
            TValue::Relative(x) => TValueRepr::Text(format!("{x}x")),
        }
    }
}

impl std::str::FromStr for TValue {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        let bad = || CliError::Config(format!("erasure threshold `{s}`: expected a number or a multiple like 1.1x"));
        let value = if let Some(m) = s.strip_suffix(['x', 'X']) {
            TValue::Relative(m.parse().map_err(|_| bad())?)
        } else {
            TValue::Absolute(s.parse().map_err(|_| bad())?)
        };
        match value {
            TValue::Absolute(x) | TValue::Relative(x) if !(x >= 0.0 && x.is_finite()) => Err(bad()),
            v => Ok(v),
        }
    }
}

impl std::fmt::Display for TValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TValue::Absolute(x) => write!(f, "{x}"),
            TValue::Relative(x) => write!(f, "{x}x"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderSpec {
    /// Label used in outputs and as a baseline reference; defaults to the
    /// variant name.
    #[serde(default)]
    pub name: Option<String>,
    pub variant: DecoderVariant,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    /// Leading scored iterations (DRSD); defaults to four fifths.
    #[serde(default)]
    pub drsd_iterations: Option<usize>,
    #[serde(default)]
    pub anchor_threshold: Option<u8>,
    #[serde(default)]
    pub erasure_threshold: Option<TValue>,
}

fn default_iterations() -> usize {
    DEFAULT_ITERATIONS
}

impl DecoderSpec {
    pub fn new(variant: DecoderVariant, iterations: usize) -> Self {
        Self {
            name: None,
            variant,
            iterations,
            drsd_iterations: None,
            anchor_threshold: None,
            erasure_threshold: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StopSpec {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopSpec {
    fn default() -> Self {
        let d = StoppingRule::default();
        Self {
            min_frame_errors: d.min_frame_errors,
            max_frames: d.max_frames,
        }
    }
}

/// Eb/N0 values in dB.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range(String),
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            Grid::List(v) if v.is_empty() => Err(CliError::Config("empty Eb/N0 grid".into())),
            Grid::List(v) => Ok(v.clone()),
            Grid::Range(s) => parse_grid(s),
        }
    }
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("Eb/N0 grid `{s}`: expected start:step:stop or a comma list"));
    if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let [start, step, stop] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 10_000 {
            return Err(bad());
        }
        Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect())
    } else {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if v.is_empty() {
            return Err(bad());
        }
        Ok(v)
    }
}

/// Parses `lo:hi`.
pub fn parse_bracket(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("bracket `{s}`: expected lo:hi"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdSpec {
    pub target_ber: f64,
    pub bracket: (f64, f64),
    pub resolution_db: f64,
    /// Decoder name that gains are reported against; the first decoder if
    /// unset.
    pub baseline: Option<String>,
}

impl Default for ThresholdSpec {
    fn default() -> Self {
        Self {
            target_ber: DEFAULT_TARGET_BER,
            bracket: DEFAULT_BRACKET,
            resolution_db: prodcode::simkit::DEFAULT_RESOLUTION_DB,
            baseline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub values: Vec<TValue>,
}

/// Net coding gain at user-supplied (extrapolated) thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NcgSpec {
    #[serde(default = "default_ncg_target")]
    pub target_ber: f64,
    pub thresholds_db: Vec<f64>,
}

fn default_ncg_target() -> f64 {
    DEFAULT_NCG_TARGET
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Parses TOML; errors carry line and column.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn new(mode: Mode, code: CodeSpec, decoders: Vec<DecoderSpec>) -> Self {
        Self {
            mode,
            code,
            decoders,
            seed: DEFAULT_SEED,
            workers: 0,
            stop: StopSpec::default(),
            ebn0: None,
            threshold: ThresholdSpec::default(),
            sweep_t: None,
            ncg: None,
            output: OutputSpec::default(),
        }
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let nu = self.code.degree()?;
        let component = ComponentCode::bch(nu, self.code.t, self.code.even_weight)
            .map_err(|e| CliError::Config(format!("code: {e}")))?;
        let code = ResolvedCode {
            n: component.n(),
            k: component.k(),
            nu,
            t: component.t(),
            even_weight: component.is_even_weight(),
            design_distance: component.design_distance(),
            rate: (component.k() * component.k()) as f64 / (component.n() * component.n()) as f64,
        };
        let product = ProductCode::new(component);

        if self.decoders.is_empty() {
            return Err(CliError::Config("at least one [[decoder]] is required".into()));
        }
        let table_t = default_erasure_threshold(nu, code.t, code.even_weight);
        // a sweep overrides the decoder's T, so an absolute sweep value is
        // enough when the code has no bundled default
        let fallback_t = match (self.mode, &self.sweep_t) {
            (Mode::SweepT, Some(s)) => table_t.or_else(|| {
                s.values.iter().find_map(|v| match v {
                    TValue::Absolute(x) => Some(*x),
                    TValue::Relative(_) => None,
                })
            }),
            _ => table_t,
        };
        let mut decoders = Vec::new();
        for spec in &self.decoders {
            let d = resolve_decoder(spec, &code, table_t, fallback_t)?;
            if decoders.iter().any(|o: &ResolvedDecoder| o.name == d.name) {
                return Err(CliError::Config(format!("duplicate decoder name `{}`", d.name)));
            }
            decoders.push(d);
        }

        let stop = StoppingRule {
            min_frame_errors: self.stop.min_frame_errors,
            max_frames: self.stop.max_frames,
            target_ber: None,
        };
        if stop.max_frames == 0 {
            return Err(CliError::Config("stop.max_frames must be positive".into()));
        }

        let ebn0 = match (&self.ebn0, self.mode) {
            (Some(g), _) => g.values()?,
            (None, Mode::Ber) => parse_grid(DEFAULT_GRID)?,
            (None, _) => Vec::new(),
        };

        let th = &self.threshold;
        if !(th.target_ber > 0.0 && th.target_ber < 0.5) {
            return Err(CliError::Config(format!("threshold.target_ber {} outside (0, 0.5)", th.target_ber)));
        }
        if !(th.bracket.0 < th.bracket.1) {
            return Err(CliError::Config("threshold.bracket must be increasing".into()));
        }
        if !(th.resolution_db > 0.0) {
            return Err(CliError::Config("threshold.resolution_db must be positive".into()));
        }
        let baseline = match &th.baseline {
            Some(b) if !decoders.iter().any(|d| &d.name == b) => {
                return Err(CliError::Config(format!("baseline `{b}` is not a decoder name")));
            }
            Some(b) => b.clone(),
            None => decoders[0].name.clone(),
        };

        let sweep = match self.mode {
            Mode::SweepT => {
                let spec = self
                    .sweep_t
                    .as_ref()
                    .ok_or_else(|| CliError::Config("sweep-t mode needs [sweep_t] values".into()))?;
                if spec.values.is_empty() {
                    return Err(CliError::Config("sweep_t.values is empty".into()));
                }
                if decoders.len() != 1 || decoders[0].config.variant == DecoderVariant::Ibdd {
                    return Err(CliError::Config(
                        "sweep-t needs exactly one decoder that uses erasures".into(),
                    ));
                }
                spec.values
                    .iter()
                    .map(|&v| Ok((v, absolute_t(v, table_t)?)))
                    .collect::<Result<Vec<_>, CliError>>()?
            }
            _ => Vec::new(),
        };

        if let Some(n) = &self.ncg {
            if !(n.target_ber > 0.0 && n.target_ber < 0.5) {
                return Err(CliError::Config(format!("ncg.target_ber {} outside (0, 0.5)", n.target_ber)));
            }
        }

        Ok(Resolved {
            mode: self.mode,
            code,
            decoders,
            seed: self.seed,
            workers: self.workers,
            stop,
            ebn0,
            threshold: ThresholdSpec {
                baseline: Some(baseline),
                ..th.clone()
            },
            sweep_t: sweep
                .into_iter()
                .map(|(label, value)| SweepValue { label, value })
                .collect(),
            ncg: self.ncg.clone(),
            output: self.output.clone(),
            product,
        })
    }
}

fn absolute_t(v: TValue, table: Option<f64>) -> Result<f64, CliError> {
    match v {
        TValue::Absolute(x) => Ok(x),
        TValue::Relative(m) => table.map(|t| m * t).ok_or_else(|| {
            CliError::Config(format!(
                "relative erasure threshold {v} needs a bundled default for this code"
            ))
        }),
    }
}

fn resolve_decoder(
    spec: &DecoderSpec,
    code: &ResolvedCode,
    table_t: Option<f64>,
    fallback_t: Option<f64>,
) -> Result<ResolvedDecoder, CliError> {
    if spec.iterations == 0 {
        return Err(CliError::Config("decoder iterations must be positive".into()));
    }
    let erasure_threshold = match (spec.variant, spec.erasure_threshold) {
        (DecoderVariant::Ibdd, None) => 0.0,
        (DecoderVariant::Ibdd, Some(_)) => {
            return Err(CliError::Config("ibdd takes no erasure threshold".into()));
        }
        (_, Some(v)) => absolute_t(v, table_t)?,
        (_, None) => fallback_t.ok_or_else(|| {
            CliError::Config(format!(
                "no bundled erasure threshold for ({}, t={}, {}); set erasure_threshold",
                code.n,
                code.t,
                if code.even_weight { "even" } else { "plain" }
            ))
        })?,
    };
    let mut config = DecoderConfig64::for_variant(
        spec.variant,
        spec.iterations,
        &ComponentCode::bch(code.nu, code.t, code.even_weight).map_err(|e| CliError::Config(e.to_string()))?,
        erasure_threshold,
    );
    if spec.variant == DecoderVariant::Drsd {
        if let Some(d) = spec.drsd_iterations {
            config.drsd_iterations = d;
        }
        config.initial_anchor_threshold = spec
            .anchor_threshold
            .unwrap_or_else(|| default_anchor_threshold(code.n, code.t));
    } else if spec.drsd_iterations.is_some() || spec.anchor_threshold.is_some() {
        return Err(CliError::Config(format!(
            "drsd_iterations and anchor_threshold only apply to drsd, not {}",
            spec.variant
        )));
    }
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ResolvedDecoder {
        name: spec.name.clone().unwrap_or_else(|| spec.variant.name().to_string()),
        config,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedCode {
    pub n: usize,
    pub k: usize,
    pub nu: u32,
    pub t: usize,
    pub even_weight: bool,
    pub design_distance: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedDecoder {
    pub name: String,
    pub config: DecoderConfig64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepValue {
    pub label: TValue,
    pub value: f64,
}

/// A configuration with every default filled in; this is what result files
/// embed.
#[derive(Clone, Debug, Serialize)]
pub struct Resolved {
    pub mode: Mode,
    pub code: ResolvedCode,
    pub decoders: Vec<ResolvedDecoder>,
    pub seed: u64,
    pub workers: usize,
    pub stop: StoppingRule,
    pub ebn0: Vec<f64>,
    pub threshold: ThresholdSpec,
    pub sweep_t: Vec<SweepValue>,
    pub ncg: Option<NcgSpec>,
    pub output: OutputSpec,
    #[serde(skip)]
    pub product: ProductCode,
}
