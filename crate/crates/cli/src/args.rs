use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rdhei_core::{LmrConfig, Method, SecretKey};

#[derive(Debug, Parser)]
#[command(
    name = "rdhei",
    version,
    about = "Reversible data hiding in encrypted grayscale PGM images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report the chosen b and embedding rate without writing anything
    Capacity {
        image: PathBuf,
        #[arg(long)]
        method: Method,
        /// Image key; with it, the exact capacity and (for LMR) the fit are checked
        #[arg(long, env = "RDHEI_KEY1", hide_env_values = true)]
        key1: Option<SecretKey>,
        #[command(flatten)]
        lmr: LmrArgs,
    },

    /// Encrypt an image and reserve room for a message (content owner, K1)
    Encode {
        image: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long, env = "RDHEI_KEY1", hide_env_values = true)]
        key1: SecretKey,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        lmr: LmrArgs,
    },

    /// Embed a message into an encrypted image (data hider, K2)
    Hide {
        image: PathBuf,
        #[arg(long, env = "RDHEI_KEY2", hide_env_values = true)]
        key2: SecretKey,
        /// File holding the message bytes
        #[arg(long)]
        message: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Skip detection and assume this layout
        #[arg(long)]
        method: Option<Method>,
    },

    /// Read the hidden message back (receiver, K2)
    Extract {
        image: PathBuf,
        #[arg(long, env = "RDHEI_KEY2", hide_env_values = true)]
        key2: SecretKey,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        method: Option<Method>,
    },

    /// Recover the original image (receiver, K1)
    Recover {
        image: PathBuf,
        /// Skip detection and assume this layout
        #[arg(long)]
        method: Option<Method>,
        #[arg(long, env = "RDHEI_KEY1", hide_env_values = true)]
        key1: SecretKey,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        lmr: LmrArgs,
    },

    /// Print image statistics as JSON; with a second image, compare against the first
    Analyze {
        image: PathBuf,
        other: Option<PathBuf>,
    },

    /// Run encode, hide, extract and recover in memory and check the results
    Roundtrip {
        image: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long, env = "RDHEI_KEY1", hide_env_values = true)]
        key1: SecretKey,
        #[arg(long, env = "RDHEI_KEY2", hide_env_values = true)]
        key2: SecretKey,
        #[arg(long)]
        message: PathBuf,
        #[command(flatten)]
        lmr: LmrArgs,
    },

    /// Run the full pipeline over every PGM in a directory
    Bench {
        dir: PathBuf,
        #[arg(long)]
        method: Method,
        /// CSV report path
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON report path
        #[arg(long)]
        json: Option<PathBuf>,
        /// Seed of the master key from which per-image keys are derived
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        lmr: LmrArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct LmrArgs {
    /// Smallest LMR rotation block exponent (blocks of 2^e x 2^e); must match between encode and recover
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=31))]
    pub lmr_min_exp: u32,
}

impl LmrArgs {
    pub fn config(self) -> LmrConfig {
        LmrConfig {
            min_block_exponent: self.lmr_min_exp,
        }
    }
}
