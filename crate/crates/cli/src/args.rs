use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringlab_analyzer::{Precision, TableId};
use ringlab_core::codec::{CompressionRates, Rate};
use ringlab_core::ecc::{EccOption, EccScheme};
use ringlab_core::kem::KemConfig;
use ringlab_core::preset::{Preset, PRESET_NAMES};
use ringlab_core::ParamSet;
use serde_json::{json, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "ringlab", version, about = "Decryption-failure analysis and KEM experiments for Ring-LWE with ATE/BCH coding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact noise distributions, failure rates and tables.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Key generation, encapsulation and roundtrip experiments.
    #[command(subcommand)]
    Kem(Kem),
    /// Compare a sampled total-noise histogram with the analytic distribution.
    Montecarlo(MonteCarloArgs),
    /// Rényi divergence of the centered binomial from the rounded Gaussian.
    Renyi(RenyiArgs),
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// One of the standard result tables as JSON or CSV.
    Table(TableArgs),
    /// Total, difference and compression noise as CSV of log2 weights.
    Noise(NoiseArgs),
    /// Cross-over probability and failure rate of one configuration.
    Dfr(DfrArgs),
}

#[derive(Debug, Subcommand)]
pub enum Kem {
    Keygen(KeygenArgs),
    Encaps(EncapsArgs),
    Decaps(DecapsArgs),
    /// Repeated encrypt/decrypt with failure counts and the analytic prediction.
    Roundtrip(RoundtripArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct PrecisionArg {
    /// Working precision in bits; results are re-checked at twice this.
    #[arg(long, env = "RINGLAB_PRECISION", default_value_t = 512)]
    pub precision: u32,
}

impl PrecisionArg {
    pub fn get(&self) -> Result<Precision> {
        Precision::bits(self.precision).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Table number (2-5) or name (bandwidth, crossover, options1024, options512).
    #[arg(long)]
    pub id: TableId,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

/// Ring and rate selection; flags override the preset.
#[derive(Debug, Args, Clone, Default)]
pub struct ParamArgs {
    #[arg(long, value_parser = PRESET_NAMES)]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Rate for v': a power of two, or `q` for none.
    #[arg(long)]
    pub rv: Option<Rate>,
    /// Rate for û: a power of two, or `q` for none.
    #[arg(long)]
    pub ru: Option<Rate>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct SchemeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// newhope, option1 .. option4.
    #[arg(long)]
    pub option: Option<EccOption>,
    /// ATE only, with this many copies per bit.
    #[arg(long, conflicts_with = "option")]
    pub m: Option<usize>,
}

impl ParamArgs {
    fn preset(&self) -> Result<Preset> {
        Ok(Preset::by_name(self.preset.as_deref().unwrap_or("newhope1024"))?)
    }

    /// Parameters and rates, with `forced_n` standing in for an absent `--n`.
    fn resolve_with(&self, forced_n: Option<usize>) -> Result<(ParamSet, CompressionRates)> {
        let base = self.preset()?;
        let n = self.n.or(forced_n).unwrap_or(base.params.n());
        let q = self.q.unwrap_or(base.params.q());
        let k = self.k.unwrap_or(base.params.k());
        let rates = CompressionRates::new(self.rv.unwrap_or(base.rates.v), self.ru.unwrap_or(base.rates.u));
        let params = ParamSet::new(n, q, k)?;
        rates.validate(&params)?;
        Ok((params, rates))
    }

    pub fn resolve(&self) -> Result<(ParamSet, CompressionRates)> {
        self.resolve_with(None)
    }
}

impl SchemeArgs {
    pub fn resolve(&self) -> Result<KemConfig> {
        let base = self.params.preset()?;
        let option = self.option.unwrap_or(base.option);
        let forced_n = match option {
            EccOption::Option4 if self.option.is_some() => Some(512),
            EccOption::Option1 | EccOption::Option2 | EccOption::Option3 if self.option.is_some() => Some(1024),
            _ => None,
        };
        if let (Some(want), Some(n)) = (forced_n, self.params.n) {
            if n != want {
                return Err(CliError::Usage(format!("{option} forces n = {want}, got --n {n}")));
            }
        }
        let (params, rates) = self.params.resolve_with(forced_n)?;
        let scheme = match self.m {
            Some(m) => EccScheme::ate_only(m, &params)?,
            None => EccScheme::for_option(option, &params)?,
        };
        Ok(KemConfig::new(params, rates, scheme)?)
    }
}

pub fn config_json(cfg: &KemConfig) -> Value {
    json!({
        "n": cfg.params.n(),
        "q": cfg.params.q(),
        "k": cfg.params.k(),
        "rv": cfg.rates.v.to_string(),
        "ru": cfg.rates.u.to_string(),
        "scheme": cfg.scheme.id(),
    })
}

pub fn params_json(params: &ParamSet, rates: CompressionRates) -> Value {
    json!({
        "n": params.n(),
        "q": params.q(),
        "k": params.k(),
        "rv": rates.v.to_string(),
        "ru": rates.u.to_string(),
    })
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Args)]
pub struct DfrArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// 32-byte seed in hex.
    #[arg(long)]
    pub seed: String,
    /// Also write `<prefix>.pk` and `<prefix>.sk` key files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EncapsArgs {
    /// Public key file written by `kem keygen --out`.
    #[arg(long)]
    pub pk: PathBuf,
    /// 32 bytes of randomness in hex; read from the OS when absent.
    #[arg(long)]
    pub entropy: Option<String>,
    /// Also write the ciphertext file `<prefix>.ct`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecapsArgs {
    #[arg(long)]
    pub sk: PathBuf,
    #[arg(long)]
    pub pk: PathBuf,
    #[arg(long)]
    pub ct: PathBuf,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Skip the analytic prediction.
    #[arg(long)]
    pub no_predict: bool,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 257)]
    pub q: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value = "4")]
    pub rv: Rate,
    #[arg(long, default_value = "q")]
    pub ru: Rate,
    /// Number of tapped coefficients (rounded up to whole polynomials).
    #[arg(long, default_value_t = 1_000_000)]
    pub coefficients: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Args)]
pub struct RenyiArgs {
    /// Order of the divergence, greater than 1.
    #[arg(long)]
    pub a: f64,
    /// Binomial parameters: a single value, `lo..hi` (inclusive) or a comma list.
    #[arg(long, value_parser = parse_k_list, default_value = "2..16")]
    pub k: KList,
    /// Significant decimal digits printed.
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct KList(pub Vec<u32>);

fn parse_k_list(s: &str) -> std::result::Result<KList, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad k `{t}`"));
    let ks = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    if ks.contains(&0) {
        return Err("k must be positive".into());
    }
    Ok(KList(ks))
}

pub fn parse_seed(hex_str: &str) -> Result<[u8; 32]> {
    let bytes = hex::decode(hex_str.trim()).map_err(|e| CliError::Usage(format!("bad hex: {e}")))?;
    bytes.try_into().map_err(|_| CliError::Usage("expected exactly 32 bytes (64 hex digits)".into()))
}
