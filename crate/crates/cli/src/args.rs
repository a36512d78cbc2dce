//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "prodcode", version, about = "Monte Carlo simulation of product-code decoders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment described by a TOML file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// BER curve over an Eb/N0 grid.
    Ber {
        #[command(flatten)]
        code: CodeFlags,
        /// Eb/N0 grid in dB: start:step:stop or a comma list.
        #[arg(long, default_value = crate::config::DEFAULT_GRID)]
        ebn0: String,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Noise threshold at a target BER; gains are relative to the first decoder.
    Threshold {
        #[command(flatten)]
        code: CodeFlags,
        #[command(flatten)]
        search: SearchFlags,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Noise thresholds for a list of erasure thresholds.
    #[command(name = "sweep-t", alias = "sweep-T")]
    SweepT {
        #[command(flatten)]
        code: CodeFlags,
        /// Erasure thresholds: absolute values or multiples of the bundled
        /// default such as 0.9x,1.0x,1.1x.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[command(flatten)]
        search: SearchFlags,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Net coding gain for given coded thresholds.
    Ncg {
        /// Coded Eb/N0 thresholds in dB.
        #[arg(long = "threshold-db", value_delimiter = ',', required = true, allow_negative_numbers = true)]
        thresholds_db: Vec<f64>,
        #[arg(long, default_value_t = crate::config::DEFAULT_NCG_TARGET)]
        target_ber: f64,
    },
    /// Fast invariant checks of the coding primitives.
    Selftest {
        #[arg(long, default_value_t = crate::config::DEFAULT_SEED)]
        seed: u64,
        /// Deliberately break a component (test hook).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct CodeFlags {
    /// Component code as n,t[,even|plain].
    #[arg(long)]
    pub code: String,
    /// Decoder variants (ibdd, iter-eaed, drsd, genie-eaed), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub decoder: Vec<String>,
    #[arg(long, default_value_t = crate::config::DEFAULT_ITERATIONS)]
    pub iters: usize,
    /// Scored iterations for drsd (default: four fifths of --iters).
    #[arg(long)]
    pub drsd_iters: Option<usize>,
    /// Initial anchor threshold for drsd.
    #[arg(long)]
    pub anchor_threshold: Option<u8>,
    /// Erasure threshold T, absolute or relative like 1.1x.
    #[arg(long = "erasure-threshold")]
    pub erasure_threshold: Option<String>,
    #[arg(long)]
    pub min_frame_errors: Option<u64>,
    #[arg(long)]
    pub max_frames: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SearchFlags {
    #[arg(long, default_value_t = crate::config::DEFAULT_TARGET_BER)]
    pub target_ber: f64,
    /// Initial Eb/N0 bracket lo:hi in dB.
    #[arg(long)]
    pub bracket: Option<String>,
    /// Stop bisecting once the bracket is this narrow (dB).
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Also report NCG at these extrapolated thresholds (dB).
    #[arg(long = "ncg-threshold-db", value_delimiter = ',')]
    pub ncg_thresholds_db: Vec<f64>,
    #[arg(long, default_value_t = crate::config::DEFAULT_NCG_TARGET)]
    pub ncg_target_ber: f64,
}

#[derive(Debug, Args)]
pub struct CommonFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json (default: from the file extension, else csv).
    #[arg(long)]
    pub format: Option<String>,
}
