//! Lossy coefficient compression and tight bit-packing.
//!
//! Wire format: coefficients are written in index order, each as a
//! `bits`-wide little-endian field, fields packed back to back starting at
//! bit 0 of byte 0. Trailing pad bits in the last byte are zero. For example
//! `[1, 2, 3, 4]` at 3 bits packs to `[0xd1, 0x08]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{ModPoly, ParamSet};

/// Compression rate `r`: a power of two, or `Full` (no compression).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rate {
    Full,
    Pow2(u32),
}

impl Rate {
    pub fn new(r: u32) -> Result<Rate> {
        if r < 2 || !r.is_power_of_two() {
            return Err(Error::InvalidParams(format!("rate {r} is not a power of two >= 2")));
        }
        Ok(Rate::Pow2(r))
    }

    /// Checks the rate against `2^⌈log2 q⌉`.
    pub fn validate(self, params: &ParamSet) -> Result<()> {
        match self {
            Rate::Full => Ok(()),
            Rate::Pow2(r) if r >= 2 && r.is_power_of_two() && r.trailing_zeros() <= params.q_bits() => Ok(()),
            Rate::Pow2(r) => Err(Error::InvalidParams(format!("rate {r} out of range for q = {}", params.q()))),
        }
    }

    /// Bits per transmitted coefficient.
    pub fn bits(self, params: &ParamSet) -> u32 {
        match self {
            Rate::Full => params.q_bits(),
            Rate::Pow2(r) => r.trailing_zeros(),
        }
    }

    pub fn is_full(self) -> bool {
        matches!(self, Rate::Full)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Full => f.write_str("q"),
            Rate::Pow2(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rate> {
        match s.trim() {
            "q" | "full" | "Q" => Ok(Rate::Full),
            other => {
                let r: u32 = other.parse().map_err(|_| Error::InvalidParams(format!("bad rate `{other}`")))?;
                Rate::new(r)
            }
        }
    }
}

/// `(r_v, r_u)`: rates for `v'` and `û`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompressionRates {
    pub v: Rate,
    pub u: Rate,
}

impl CompressionRates {
    pub fn new(v: Rate, u: Rate) -> Self {
        Self { v, u }
    }

    /// NewHope's `(8, q)`.
    pub fn newhope() -> Self {
        Self { v: Rate::Pow2(8), u: Rate::Full }
    }

    pub fn validate(&self, params: &ParamSet) -> Result<()> {
        self.v.validate(params)?;
        self.u.validate(params)
    }
}

impl fmt::Display for CompressionRates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.u)
    }
}

/// Compressed coefficients in `[0, r)`; for `Rate::Full`, in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedPoly {
    pub rate: Rate,
    pub coeffs: Vec<u32>,
}

/// `⌊num/den⌉` with ties rounded up.
fn round_div(num: u64, den: u64) -> u64 {
    (2 * num + den) / (2 * den)
}

/// Compresses one coefficient: `⌊x·r/q⌉ mod r`.
pub fn compress_coeff(x: u32, r: u32, q: u32) -> u32 {
    (round_div(x as u64 * r as u64, q as u64) % r as u64) as u32
}

/// Decompresses one coefficient: `⌊h·q/r⌉`.
pub fn decompress_coeff(h: u32, r: u32, q: u32) -> u32 {
    round_div(h as u64 * q as u64, r as u64) as u32
}

pub fn compress(p: &ModPoly, rate: Rate) -> CompressedPoly {
    let q = p.params().q();
    let coeffs = match rate {
        Rate::Full => p.coeffs().to_vec(),
        Rate::Pow2(r) => p.coeffs().iter().map(|&x| compress_coeff(x, r, q)).collect(),
    };
    CompressedPoly { rate, coeffs }
}

pub fn decompress(h: &CompressedPoly, params: &ParamSet) -> Result<ModPoly> {
    match h.rate {
        Rate::Full => ModPoly::from_coeffs(params, h.coeffs.clone()),
        Rate::Pow2(r) => {
            if h.coeffs.len() != params.n() {
                return Err(Error::Malformed(format!("expected {} coefficients", params.n())));
            }
            if let Some(c) = h.coeffs.iter().find(|&&c| c >= r) {
                return Err(Error::Malformed(format!("compressed coefficient {c} >= rate {r}")));
            }
            let q = params.q();
            ModPoly::from_coeffs(params, h.coeffs.iter().map(|&c| decompress_coeff(c, r, q)).collect())
        }
    }
}

/// Tightly packed coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedPoly {
    pub bits_per_coeff: u32,
    pub bytes: Vec<u8>,
}

pub fn packed_len(count: usize, bits: u32) -> usize {
    (count * bits as usize).div_ceil(8)
}

pub fn pack(values: &[u32], bits: u32) -> Result<PackedPoly> {
    if bits == 0 || bits > 32 {
        return Err(Error::Encode(format!("unsupported field width {bits}")));
    }
    let mut bytes = vec![0u8; packed_len(values.len(), bits)];
    let mut bitpos = 0usize;
    for &v in values {
        if bits < 32 && v >> bits != 0 {
            return Err(Error::Encode(format!("value {v} does not fit in {bits} bits")));
        }
        for b in 0..bits as usize {
            if (v >> b) & 1 == 1 {
                let at = bitpos + b;
                bytes[at / 8] |= 1 << (at % 8);
            }
        }
        bitpos += bits as usize;
    }
    Ok(PackedPoly { bits_per_coeff: bits, bytes })
}

pub fn unpack(packed: &PackedPoly, count: usize) -> Result<Vec<u32>> {
    let bits = packed.bits_per_coeff;
    if bits == 0 || bits > 32 {
        return Err(Error::Decode(format!("unsupported field width {bits}")));
    }
    let need = packed_len(count, bits);
    if packed.bytes.len() < need {
        return Err(Error::Decode(format!("need {need} bytes, got {}", packed.bytes.len())));
    }
    let mut out = Vec::with_capacity(count);
    let mut bitpos = 0usize;
    for _ in 0..count {
        let mut v = 0u32;
        for b in 0..bits as usize {
            let at = bitpos + b;
            v |= (((packed.bytes[at / 8] >> (at % 8)) & 1) as u32) << b;
        }
        out.push(v);
        bitpos += bits as usize;
    }
    Ok(out)
}

/// Packs a full-width polynomial at `⌈log2 q⌉` bits per coefficient.
pub fn pack_poly(p: &ModPoly) -> PackedPoly {
    pack(p.coeffs(), p.params().q_bits()).expect("canonical coefficients fit q_bits")
}

pub fn unpack_poly(packed: &PackedPoly, params: &ParamSet) -> Result<ModPoly> {
    let v = unpack(packed, params.n())?;
    ModPoly::from_coeffs(params, v).map_err(|e| Error::Decode(e.to_string()))
}

pub fn pack_compressed(h: &CompressedPoly, params: &ParamSet) -> Result<PackedPoly> {
    pack(&h.coeffs, h.rate.bits(params))
}

pub fn unpack_compressed(packed: &PackedPoly, rate: Rate, params: &ParamSet) -> Result<CompressedPoly> {
    if packed.bits_per_coeff != rate.bits(params) {
        return Err(Error::Decode("field width does not match rate".into()));
    }
    Ok(CompressedPoly { rate, coeffs: unpack(packed, params.n())? })
}

/// Ciphertext bytes: `⌈n·bits(r_v)/8⌉ + ⌈n·bits(r_u)/8⌉`.
pub fn ciphertext_size(params: &ParamSet, rates: CompressionRates) -> usize {
    packed_len(params.n(), rates.v.bits(params)) + packed_len(params.n(), rates.u.bits(params))
}
