//! Additive threshold encoding: `m`-fold repetition onto the poles
//! `{0, ⌊q/2⌋}` with an interleaved layout, decoded by comparing the summed
//! distance to `⌊q/2⌋` against `m·q/4`.

use crate::error::{Error, Result};
use crate::ring::{ModPoly, ParamSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AteParams {
    /// Repetition count.
    pub m: usize,
    /// Bits per block; bit `i` sits at coefficients `i + j·block_len`.
    pub block_len: usize,
}

impl AteParams {
    pub fn new(m: usize, block_len: usize) -> Result<Self> {
        if m == 0 || block_len == 0 {
            return Err(Error::InvalidParams("ATE needs m >= 1 and a non-empty block".into()));
        }
        Ok(Self { m, block_len })
    }

    pub fn coefficients_used(&self) -> usize {
        self.m * self.block_len
    }

    fn check(&self, params: &ParamSet) -> Result<()> {
        if self.coefficients_used() > params.n() {
            return Err(Error::Capacity { needed: self.coefficients_used(), available: params.n() });
        }
        Ok(())
    }
}

pub fn ate_encode(bits: &[bool], ate: AteParams, params: &ParamSet) -> Result<ModPoly> {
    ate.check(params)?;
    if bits.len() != ate.block_len {
        return Err(Error::Encode(format!("expected {} bits, got {}", ate.block_len, bits.len())));
    }
    let pole = params.half_q();
    let mut coeffs = vec![0u32; params.n()];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            for j in 0..ate.m {
                coeffs[i + j * ate.block_len] = pole;
            }
        }
    }
    ModPoly::from_coeffs(params, coeffs)
}

/// Summed distance `t = Σ_j |v_{i+jB} − ⌊q/2⌋|` for bit `i`.
pub fn ate_distance(v: &ModPoly, ate: AteParams, bit: usize) -> u64 {
    let pole = v.params().half_q() as i64;
    (0..ate.m)
        .map(|j| (v.coeffs()[bit + j * ate.block_len] as i64 - pole).unsigned_abs())
        .sum()
}

/// Decision rule: one iff `4t < m·q`. A tie decodes to zero.
pub fn ate_decide(t: u64, m: usize, q: u32) -> bool {
    4 * t < m as u64 * q as u64
}

pub fn ate_decode(v: &ModPoly, ate: AteParams) -> Result<Vec<bool>> {
    ate.check(v.params())?;
    let q = v.params().q();
    Ok((0..ate.block_len).map(|i| ate_decide(ate_distance(v, ate, i), ate.m, q)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_bits_encode_to_zero() {
        let p = ParamSet::newhope1024();
        let ate = AteParams::new(4, 256).unwrap();
        assert_eq!(ate_encode(&[false; 256], ate, &p).unwrap(), ModPoly::zero(&p));
    }

    #[test]
    fn interleaved_layout() {
        let p = ParamSet::new(8, 17, 0).unwrap();
        let ate = AteParams::new(2, 4).unwrap();
        let v = ate_encode(&[true, false, false, false], ate, &p).unwrap();
        assert_eq!(v.coeffs(), &[8, 0, 0, 0, 8, 0, 0, 0]);
    }

    #[test]
    fn newhope_positions() {
        let p = ParamSet::newhope1024();
        let ate = AteParams::new(4, 256).unwrap();
        let mut bits = vec![false; 256];
        bits[17] = true;
        let v = ate_encode(&bits, ate, &p).unwrap();
        let hot: Vec<usize> = v.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect();
        assert_eq!(hot, vec![17, 273, 529, 785]);
    }

    #[test]
    fn noiseless_poles() {
        let p = ParamSet::newhope1024();
        let ate = AteParams::new(4, 256).unwrap();
        let ones = ate_encode(&[true; 256], ate, &p).unwrap();
        assert_eq!(ate_distance(&ones, ate, 0), 0);
        assert!(ate_decode(&ones, ate).unwrap().iter().all(|&b| b));
        let zeros = ModPoly::zero(&p);
        assert_eq!(ate_distance(&zeros, ate, 0), 24576);
        assert!(ate_decode(&zeros, ate).unwrap().iter().all(|&b| !b));
    }

    #[test]
    fn one_flipped_copy_is_tolerated() {
        let p = ParamSet::newhope1024();
        let ate = AteParams::new(4, 256).unwrap();
        let mut bits = vec![false; 256];
        bits[3] = true;
        let v = ate_encode(&bits, ate, &p).unwrap();
        let mut c = v.coeffs().to_vec();
        c[3 + 512] = 0; // one copy of a one moved to the zero pole
        c[4 + 256] = 6144; // one copy of a zero moved to the one pole
        let w = ModPoly::from_coeffs(&p, c).unwrap();
        assert_eq!(ate_decode(&w, ate).unwrap(), bits);
    }

    #[test]
    fn tie_decodes_to_zero() {
        assert!(!ate_decide(12289, 4, 12289));
        assert!(ate_decide(3, 1, 13));
        assert!(!ate_decide(4, 1, 16));
    }

    #[test]
    fn capacity_error() {
        let p = ParamSet::new(16, 257, 1).unwrap();
        let ate = AteParams::new(3, 8).unwrap();
        assert!(matches!(ate_encode(&[false; 8], ate, &p), Err(Error::Capacity { .. })));
    }
}
