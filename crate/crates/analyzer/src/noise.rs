//! Compression, difference and total noise of the decryption channel.

use std::collections::HashMap;

use ringlab_core::codec::{compress_coeff, decompress_coeff, CompressionRates, Rate};
use ringlab_core::ParamSet;

use crate::bigprob::Precision;
use crate::error::Result;
use crate::pmf::Pmf;

/// Exact distribution of `decompress(compress(x)) − x` (centered) for `x`
/// uniform on `[0, q)`, enumerated through the codec.
pub fn compression_noise(q: u32, rate: Rate, prec: Precision) -> Result<Pmf> {
    let r = match rate {
        Rate::Full => return Ok(Pmf::point(0, prec)),
        Rate::Pow2(r) => r,
    };
    let half = (q / 2) as i64;
    let mut counts = vec![0u64; q as usize];
    for x in 0..q {
        let y = decompress_coeff(compress_coeff(x, r, q), r, q);
        let mut e = (y as i64 - x as i64).rem_euclid(q as i64);
        if e > half {
            e -= q as i64;
        }
        counts[(e + half) as usize] += 1;
    }
    Pmf::from_counts(-half, &counts, prec)
}

/// Difference noise `es' − e's + e''` of one coefficient, folded mod q:
/// `2n` iid products of two `ψ_k` draws plus one more `ψ_k`.
pub fn difference_noise(params: &ParamSet, prec: Precision) -> Result<Pmf> {
    let psi = Pmf::binomial(params.k(), prec)?;
    let prod = psi.product(&psi)?;
    prod.power_folded(2 * params.n() as u64, params.q())?.convolve(&psi)?.fold(params.q())
}

/// Contribution of the `û` rounding error: `n` iid products of one
/// compression-noise draw and one `ψ_k` draw, folded mod q.
pub fn u_noise(params: &ParamSet, rate_u: Rate, prec: Precision) -> Result<Pmf> {
    let q = params.q();
    if rate_u.is_full() {
        return Pmf::point(0, prec).fold(q);
    }
    let psi = Pmf::binomial(params.k(), prec)?;
    compression_noise(q, rate_u, prec)?.product(&psi)?.power_folded(params.n() as u64, q)
}

/// Total noise `n_d + n_c − n_u·s` of one coefficient, folded mod q.
pub fn total_noise(params: &ParamSet, rates: CompressionRates, prec: Precision) -> Result<Pmf> {
    Analyzer::new(prec).total_noise(params, rates)
}

type ParamKey = (usize, u32, u32);

fn key(params: &ParamSet) -> ParamKey {
    (params.n(), params.q(), params.k())
}

/// Caches the expensive intermediate distributions at one precision.
#[derive(Debug)]
pub struct Analyzer {
    prec: Precision,
    difference: HashMap<ParamKey, Pmf>,
    u_term: HashMap<(ParamKey, Rate), Pmf>,
    difference_u: HashMap<(ParamKey, Rate), Pmf>,
    compression: HashMap<(u32, Rate), Pmf>,
}

impl Analyzer {
    pub fn new(prec: Precision) -> Self {
        Self {
            prec,
            difference: HashMap::new(),
            u_term: HashMap::new(),
            difference_u: HashMap::new(),
            compression: HashMap::new(),
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn compression_noise(&mut self, q: u32, rate: Rate) -> Result<Pmf> {
        if let Some(p) = self.compression.get(&(q, rate)) {
            return Ok(p.clone());
        }
        let p = compression_noise(q, rate, self.prec)?;
        self.compression.insert((q, rate), p.clone());
        Ok(p)
    }

    pub fn difference_noise(&mut self, params: &ParamSet) -> Result<Pmf> {
        if let Some(p) = self.difference.get(&key(params)) {
            return Ok(p.clone());
        }
        let p = difference_noise(params, self.prec)?;
        self.difference.insert(key(params), p.clone());
        Ok(p)
    }

    pub fn u_noise(&mut self, params: &ParamSet, rate_u: Rate) -> Result<Pmf> {
        let k = (key(params), rate_u);
        if let Some(p) = self.u_term.get(&k) {
            return Ok(p.clone());
        }
        let p = u_noise(params, rate_u, self.prec)?;
        self.u_term.insert(k, p.clone());
        Ok(p)
    }

    fn difference_with_u(&mut self, params: &ParamSet, rate_u: Rate) -> Result<Pmf> {
        let k = (key(params), rate_u);
        if let Some(p) = self.difference_u.get(&k) {
            return Ok(p.clone());
        }
        let nd = self.difference_noise(params)?;
        let p = if rate_u.is_full() { nd } else { nd.convolve(&self.u_noise(params, rate_u)?)? };
        self.difference_u.insert(k, p.clone());
        Ok(p)
    }

    pub fn total_noise(&mut self, params: &ParamSet, rates: CompressionRates) -> Result<Pmf> {
        rates.validate(params)?;
        let base = self.difference_with_u(params, rates.u)?;
        base.convolve(&self.compression_noise(params.q(), rates.v)?)?.fold(params.q())
    }
}
