//! Failure-rate and bandwidth tables over the standard parameter grids.

use std::fmt;
use std::str::FromStr;

use ringlab_core::codec::{ciphertext_size, CompressionRates, Rate};
use ringlab_core::ecc::{EccOption, EccScheme};
use ringlab_core::ParamSet;

use crate::bigprob::{BigProb, Precision};
use crate::channel::{crossover_probabilities, dfr_scheme, SuperChannel};
use crate::error::{AnalyzerError, Result};
use crate::noise::Analyzer;

/// Largest accepted relative disagreement in `log2` between a result and
/// its recomputation at twice the precision.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    /// ATE-only failure rates and ciphertext reduction across compression rates.
    Bandwidth,
    /// Super-channel cross-over probabilities of the coding options at `(8, q)`.
    Crossover,
    /// Coding options 1–3 across compression rates at `n = 1024`.
    Options1024,
    /// Option 4 across compression rates at `n = 512`.
    Options512,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::Bandwidth, TableId::Crossover, TableId::Options1024, TableId::Options512];

    pub fn number(self) -> u32 {
        match self {
            TableId::Bandwidth => 2,
            TableId::Crossover => 3,
            TableId::Options1024 => 4,
            TableId::Options512 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableId::Bandwidth => "bandwidth",
            TableId::Crossover => "crossover",
            TableId::Options1024 => "options1024",
            TableId::Options512 => "options512",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::Bandwidth => "DFR and ciphertext reduction of ATE-only NewHope under various compression rates",
            TableId::Crossover => "Cross-over probability of the super channel at rates (8, q)",
            TableId::Options1024 => "DFR and ciphertext size with Options 1-3, n = 1024",
            TableId::Options512 => "DFR and ciphertext size with Option 4, n = 512",
        }
    }

    /// Every `(n, rates, schemes)` group of the table, in row order.
    pub fn grid(self) -> Result<Vec<Group>> {
        let n1024 = ParamSet::newhope1024();
        let n512 = ParamSet::newhope512();
        let opts = |params: &ParamSet, list: &[EccOption]| -> Result<Vec<EccScheme>> {
            list.iter().map(|&o| Ok(EccScheme::for_option(o, params)?)).collect()
        };
        let groups = |params: &ParamSet, rates: &[(u32, u32)], list: &[EccOption]| -> Result<Vec<Group>> {
            let schemes = opts(params, list)?;
            rates
                .iter()
                .map(|&(v, u)| Ok(Group { params: params.clone(), rates: rate_pair(v, u)?, schemes: schemes.clone() }))
                .collect()
        };
        use EccOption::*;
        let q = 0;
        Ok(match self {
            TableId::Bandwidth => {
                let mut g = groups(&n1024, &[(8, q), (4, q), (8, 1024)], &[NewHope])?;
                g.extend(groups(&n512, &[(8, q), (4, q), (4, 2048), (8, 1024)], &[NewHope])?);
                g
            }
            TableId::Crossover => {
                let mut g = groups(&n1024, &[(8, q)], &[NewHope, Option1, Option2, Option3])?;
                g.extend(groups(&n512, &[(8, q)], &[Option4])?);
                g
            }
            TableId::Options1024 => groups(
                &n1024,
                &[(8, 512), (8, 256), (8, 128), (4, 512), (4, 256), (4, 128)],
                &[NewHope, Option1, Option2, Option3],
            )?,
            TableId::Options512 => {
                groups(&n512, &[(8, 512), (8, 256), (8, 128), (4, 1024), (4, 512), (4, 256)], &[NewHope, Option4])?
            }
        })
    }
}

/// `0` stands for the uncompressed rate `q`.
fn rate_pair(v: u32, u: u32) -> Result<CompressionRates> {
    let rate = |r: u32| if r == 0 { Ok(Rate::Full) } else { Rate::new(r) };
    Ok(CompressionRates::new(rate(v)?, rate(u)?))
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = AnalyzerError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "2" | "bandwidth" => Ok(TableId::Bandwidth),
            "3" | "crossover" => Ok(TableId::Crossover),
            "4" | "options1024" => Ok(TableId::Options1024),
            "5" | "options512" => Ok(TableId::Options512),
            other => Err(AnalyzerError::Domain(format!("unknown table `{other}` (expected 2-5 or a table name)"))),
        }
    }
}

/// Schemes evaluated over one noise distribution.
#[derive(Debug, Clone)]
pub struct Group {
    pub params: ParamSet,
    pub rates: CompressionRates,
    pub schemes: Vec<EccScheme>,
}

/// Channel and failure rate of one scheme.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub scheme: EccScheme,
    pub channel: SuperChannel,
    pub dfr: BigProb,
}

/// Evaluates several schemes over the total noise of `(params, rates)`,
/// sharing the noise and distance distributions between them.
pub fn evaluate(analyzer: &mut Analyzer, params: &ParamSet, rates: CompressionRates, schemes: &[EccScheme]) -> Result<Vec<Evaluation>> {
    let total = analyzer.total_noise(params, rates)?;
    let mut ms: Vec<usize> = schemes.iter().map(EccScheme::repetitions).collect();
    ms.sort_unstable();
    ms.dedup();
    let channels = crossover_probabilities(&total, &ms)?;
    schemes
        .iter()
        .map(|s| {
            let channel = channels[ms.binary_search(&s.repetitions()).expect("listed")].clone();
            let dfr = dfr_scheme(&channel, s)?;
            Ok(Evaluation { scheme: s.clone(), channel, dfr })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub params: ParamSet,
    pub rates: CompressionRates,
    pub scheme: EccScheme,
    pub crossover: BigProb,
    pub dfr: BigProb,
    /// `log2` of the failure rate at the working precision.
    pub log2_dfr: f64,
    /// The same quantity recomputed at twice the precision.
    pub log2_dfr_check: f64,
    pub log2_crossover: f64,
    pub log2_crossover_check: f64,
    pub ciphertext_bytes: usize,
    /// Ciphertext saving relative to `(8, q)` at the same `n`, in percent.
    pub reduction_percent: f64,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub id: TableId,
    pub precision: Precision,
    pub rows: Vec<TableRow>,
}

/// Generates tables, keeping the expensive noise distributions cached at
/// the working precision and at its double.
#[derive(Debug)]
pub struct TableGenerator {
    work: Analyzer,
    check: Analyzer,
}

impl TableGenerator {
    pub fn new(prec: Precision) -> Result<Self> {
        Ok(Self { work: Analyzer::new(prec), check: Analyzer::new(prec.doubled()?) })
    }

    pub fn precision(&self) -> Precision {
        self.work.precision()
    }

    pub fn generate(&mut self, id: TableId) -> Result<Table> {
        let mut rows = Vec::new();
        for g in id.grid()? {
            let work = evaluate(&mut self.work, &g.params, g.rates, &g.schemes)?;
            let check = evaluate(&mut self.check, &g.params, g.rates, &g.schemes)?;
            let base = ciphertext_size(&g.params, CompressionRates::newhope()) as f64;
            let bytes = ciphertext_size(&g.params, g.rates);
            for (w, c) in work.into_iter().zip(check) {
                let what = format!("{} n={} {} {}", id, g.params.n(), g.rates, w.scheme.id());
                let log2_dfr = converged(&format!("DFR of {what}"), &w.dfr, &c.dfr)?;
                let log2_crossover = converged(&format!("cross-over of {what}"), &w.channel.p, &c.channel.p)?;
                rows.push(TableRow {
                    params: g.params.clone(),
                    rates: g.rates,
                    scheme: w.scheme,
                    crossover: w.channel.p,
                    dfr: w.dfr,
                    log2_dfr: log2_dfr.0,
                    log2_dfr_check: log2_dfr.1,
                    log2_crossover: log2_crossover.0,
                    log2_crossover_check: log2_crossover.1,
                    ciphertext_bytes: bytes,
                    reduction_percent: 100.0 * (1.0 - bytes as f64 / base),
                });
            }
        }
        Ok(Table { id, precision: self.precision(), rows })
    }
}

/// One-shot [`TableGenerator::generate`].
pub fn generate_table(id: TableId, prec: Precision) -> Result<Table> {
    TableGenerator::new(prec)?.generate(id)
}

/// `log2` at both precisions, or `NotConverged` if they disagree.
pub fn converged(what: &str, low: &BigProb, high: &BigProb) -> Result<(f64, f64)> {
    let (a, b) = (low.log2(), high.log2());
    let ok = if a.is_finite() && b.is_finite() {
        (a - b).abs() <= CONVERGENCE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
    } else {
        a == b
    };
    if ok {
        Ok((a, b))
    } else {
        Err(AnalyzerError::NotConverged {
            what: what.to_string(),
            low: a,
            high: b,
            low_bits: low.precision().total_bits(),
            high_bits: high.precision().total_bits(),
        })
    }
}
