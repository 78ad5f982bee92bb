//! Named parameter bundles.

use crate::codec::{CompressionRates, Rate};
use crate::ecc::{EccOption, EccScheme};
use crate::error::{Error, Result};
use crate::kem::KemConfig;
use crate::ring::ParamSet;

pub const PRESET_NAMES: [&str; 7] = ["newhope512", "newhope1024", "option1", "option2", "option3", "option4", "toy-weak"];

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub params: ParamSet,
    pub rates: CompressionRates,
    pub option: EccOption,
}

impl Preset {
    /// `toy-weak` is a deliberately noisy instance (n = 256, q = 7681, k = 2,
    /// `v'` sent with one bit per coefficient, one ATE copy per bit) whose
    /// per-bit error is near `5·10^-3`, so failures show up within a few
    /// thousand roundtrips.
    pub fn by_name(name: &str) -> Result<Self> {
        let name = PRESET_NAMES
            .iter()
            .find(|&&p| p == name)
            .ok_or_else(|| Error::InvalidParams(format!("unknown preset `{name}` (known: {})", PRESET_NAMES.join(", "))))?;
        let (params, rates, option) = match *name {
            "newhope512" => (ParamSet::newhope512(), CompressionRates::newhope(), EccOption::NewHope),
            "newhope1024" => (ParamSet::newhope1024(), CompressionRates::newhope(), EccOption::NewHope),
            "option1" => (ParamSet::newhope1024(), CompressionRates::newhope(), EccOption::Option1),
            "option2" => (ParamSet::newhope1024(), CompressionRates::newhope(), EccOption::Option2),
            "option3" => (ParamSet::newhope1024(), CompressionRates::newhope(), EccOption::Option3),
            "option4" => (ParamSet::newhope512(), CompressionRates::newhope(), EccOption::Option4),
            _ => (ParamSet::new(256, 7681, 2)?, CompressionRates::new(Rate::Pow2(2), Rate::Full), EccOption::NewHope),
        };
        Ok(Preset { name, params, rates, option })
    }

    pub fn config(&self) -> Result<KemConfig> {
        KemConfig::new(self.params.clone(), self.rates, EccScheme::for_option(self.option, &self.params)?)
    }
}

pub fn preset(name: &str) -> Result<KemConfig> {
    Preset::by_name(name)?.config()
}
