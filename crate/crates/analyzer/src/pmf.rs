//! Probability mass functions over contiguous integer supports.

use std::fmt;

use dashu_int::UBig;

use crate::bigprob::{from_int_limbs, BigProb, Precision, ZERO_EXP};
use crate::error::{AnalyzerError, Result};

/// A distribution on `offset .. offset + len`, or on `Z_q` when folded.
///
/// Folded distributions are stored over the centered representatives
/// `-(q-1)/2 ..= q-1-(q-1)/2`; [`Pmf::weight`] accepts any representative.
/// Weights are kept as a struct of arrays (one exponent and `L` limbs per
/// entry) so the convolution kernel walks flat memory.
#[derive(Clone, PartialEq, Eq)]
pub struct Pmf {
    prec: Precision,
    offset: i64,
    exps: Vec<i64>,
    mants: Vec<u64>,
    modulus: Option<u32>,
}

fn center_offset(q: u32) -> i64 {
    -(((q - 1) / 2) as i64)
}

impl Pmf {
    /// Builds a distribution from explicit weights and checks normalization.
    pub fn from_weights(offset: i64, weights: &[BigProb], prec: Precision) -> Result<Self> {
        if weights.is_empty() {
            return Err(AnalyzerError::Domain("empty support".into()));
        }
        let mut pmf = Self::with_len(prec, offset, weights.len());
        for (i, w) in weights.iter().enumerate() {
            if w.precision() != prec {
                return Err(AnalyzerError::PrecisionMismatch);
            }
            pmf.set(i, w);
        }
        pmf.trim();
        pmf.checked("from_weights")
    }

    /// Builds `counts[i] / total` on `offset + i`.
    pub fn from_counts(offset: i64, counts: &[u64], prec: Precision) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(AnalyzerError::Domain("all counts are zero".into()));
        }
        let w: Vec<BigProb> = counts.iter().map(|&c| BigProb::from_ratio(c, total, prec)).collect();
        Self::from_weights(offset, &w, prec)
    }

    pub fn point(value: i64, prec: Precision) -> Self {
        let mut pmf = Self::with_len(prec, value, 1);
        pmf.set(0, &BigProb::one(prec));
        pmf
    }

    /// Centered binomial `ψ_k`: weight of `x` is `C(2k, k+x) / 4^k`.
    pub fn binomial(k: u32, prec: Precision) -> Result<Self> {
        let k = k as u64;
        let mut weights = Vec::with_capacity(2 * k as usize + 1);
        // C(2k, j) built incrementally; exact while it fits a u64 mantissa chain.
        let mut c = BigProb::one(prec);
        for j in 0..=2 * k {
            weights.push(c.mul_pow2(-2 * k as i64));
            c = c.mul_u64(2 * k - j).div_u64(j + 1);
        }
        Self::from_weights(-(k as i64), &weights, prec)
    }

    fn with_len(prec: Precision, offset: i64, len: usize) -> Self {
        Self {
            prec,
            offset,
            exps: vec![ZERO_EXP; len],
            mants: vec![0; len * prec.limbs()],
            modulus: None,
        }
    }

    fn set(&mut self, i: usize, w: &BigProb) {
        let l = self.prec.limbs();
        let (e, m) = w.parts();
        self.exps[i] = if w.is_zero() { ZERO_EXP } else { e };
        self.mants[i * l..(i + 1) * l].copy_from_slice(m);
    }

    fn get(&self, i: usize) -> BigProb {
        let l = self.prec.limbs();
        BigProb::from_parts(self.exps[i], self.mants[i * l..(i + 1) * l].to_vec())
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Smallest stored value (a centered representative when folded).
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn max_value(&self) -> i64 {
        self.offset + self.len() as i64 - 1
    }

    /// The modulus, if this distribution lives on `Z_q`.
    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    pub fn is_folded(&self) -> bool {
        self.modulus.is_some()
    }

    /// Probability of `x` (reduced mod q when folded).
    pub fn weight(&self, x: i64) -> BigProb {
        let x = match self.modulus {
            Some(q) => {
                let r = x.rem_euclid(q as i64);
                if r > (q as i64 - 1) / 2 {
                    r - q as i64
                } else {
                    r
                }
            }
            None => x,
        };
        let idx = x - self.offset;
        if idx < 0 || idx >= self.len() as i64 {
            BigProb::zero(self.prec)
        } else {
            self.get(idx as usize)
        }
    }

    /// `(value, weight)` over the stored support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, BigProb)> + '_ {
        (0..self.len()).map(move |i| (self.offset + i as i64, self.get(i)))
    }

    /// Folded weights indexed by residue `0..q`.
    pub fn residues(&self) -> Result<Vec<BigProb>> {
        let q = self.modulus.ok_or_else(|| AnalyzerError::Domain("distribution is not folded".into()))?;
        Ok((0..q as i64).map(|x| self.weight(x)).collect())
    }

    pub fn total_mass(&self) -> BigProb {
        (0..self.len()).fold(BigProb::zero(self.prec), |acc, i| acc.add(&self.get(i)))
    }

    /// Mass of the values satisfying `pred`.
    pub fn mass_where(&self, pred: impl Fn(i64) -> bool) -> BigProb {
        self.iter().filter(|(x, _)| pred(*x)).fold(BigProb::zero(self.prec), |acc, (_, w)| acc.add(&w))
    }

    pub fn mean_f64(&self) -> f64 {
        self.iter().map(|(x, w)| x as f64 * w.to_f64()).sum()
    }

    pub fn variance_f64(&self) -> f64 {
        let mu = self.mean_f64();
        self.iter().map(|(x, w)| (x as f64 - mu).powi(2) * w.to_f64()).sum()
    }

    /// Exact mirror symmetry about zero.
    pub fn is_symmetric(&self) -> bool {
        if self.offset != -self.max_value() {
            return false;
        }
        let l = self.prec.limbs();
        let n = self.len();
        (0..n / 2).all(|i| {
            let j = n - 1 - i;
            self.exps[i] == self.exps[j] && self.mants[i * l..(i + 1) * l] == self.mants[j * l..(j + 1) * l]
        })
    }

    /// Re-evaluates the stored weights at another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut out = Self::with_len(prec, self.offset, self.len());
        out.modulus = self.modulus;
        for i in 0..self.len() {
            out.set(i, &self.get(i).with_precision(prec));
        }
        out
    }

    fn trim(&mut self) {
        if self.modulus.is_some() {
            return;
        }
        let l = self.prec.limbs();
        let first = self.exps.iter().position(|&e| e != ZERO_EXP);
        let last = self.exps.iter().rposition(|&e| e != ZERO_EXP);
        if let (Some(a), Some(b)) = (first, last) {
            if a > 0 || b + 1 < self.len() {
                self.exps = self.exps[a..=b].to_vec();
                self.mants = self.mants[a * l..(b + 1) * l].to_vec();
                self.offset += a as i64;
            }
        }
    }

    /// Asserts the normalization invariant `|Σ − 1| ≤ 2^(−P/2)`.
    fn checked(self, op: &'static str) -> Result<Self> {
        let total = self.total_mass();
        let one = BigProb::one(self.prec);
        let diff = total.checked_sub(&one).or_else(|| one.checked_sub(&total)).expect("ordered");
        let bound = -(self.prec.total_bits() as f64) / 2.0;
        if !diff.is_zero() && diff.log2() > bound {
            return Err(AnalyzerError::Normalization { op, log2_error: diff.log2() });
        }
        Ok(self)
    }

    fn same_precision(&self, other: &Self) -> Result<()> {
        if self.prec != other.prec {
            return Err(AnalyzerError::PrecisionMismatch);
        }
        Ok(())
    }

    fn common_modulus(&self, other: &Self) -> Result<Option<u32>> {
        match (self.modulus, other.modulus) {
            (Some(a), Some(b)) if a != b => Err(AnalyzerError::ModulusMismatch(a, b)),
            (a, b) => Ok(a.or(b)),
        }
    }

    /// Distribution of `X·Y` for independent `X ~ self`, `Y ~ other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.same_precision(other)?;
        if self.is_folded() || other.is_folded() {
            return Err(AnalyzerError::Domain("product of folded distributions".into()));
        }
        let corners = [
            self.offset * other.offset,
            self.offset * other.max_value(),
            self.max_value() * other.offset,
            self.max_value() * other.max_value(),
        ];
        let lo = *corners.iter().min().expect("four corners");
        let hi = *corners.iter().max().expect("four corners");
        let mut acc = vec![BigProb::zero(self.prec); (hi - lo + 1) as usize];
        for (x, wx) in self.iter().filter(|(_, w)| !w.is_zero()) {
            for (y, wy) in other.iter().filter(|(_, w)| !w.is_zero()) {
                let slot = &mut acc[(x * y - lo) as usize];
                *slot = slot.add(&wx.mul(&wy));
            }
        }
        Self::from_weights(lo, &acc, self.prec)
    }

    /// Distribution of `X + Y`. Folded if either operand is folded.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_precision(other)?;
        let modulus = self.common_modulus(other)?;
        let mut out = convolve_linear(self, other);
        out.trim();
        let out = match modulus {
            Some(q) => out.fold_unchecked(q),
            None => out,
        };
        out.checked("convolve")
    }

    /// Distribution of `X_1 + … + X_t` for iid `X_i ~ self` by square-and-multiply.
    /// Folded inputs stay folded.
    pub fn power(&self, t: u64) -> Result<Self> {
        self.power_inner(t, None)
    }

    /// Like [`Pmf::power`], but folds mod `q` as soon as the support outgrows `q`.
    pub fn power_folded(&self, t: u64, q: u32) -> Result<Self> {
        self.power_inner(t, Some(q))
    }

    fn power_inner(&self, mut t: u64, fold_at: Option<u32>) -> Result<Self> {
        if t < 1 {
            return Err(AnalyzerError::Domain("power exponent must be at least 1".into()));
        }
        let shrink = |p: Self| -> Result<Self> {
            match fold_at {
                Some(q) if !p.is_folded() && p.len() > q as usize => p.fold(q),
                _ => Ok(p),
            }
        };
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        loop {
            if t & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => shrink(r.convolve(&base)?)?,
                });
            }
            t >>= 1;
            if t == 0 {
                break;
            }
            base = shrink(base.convolve(&base)?)?;
        }
        let out = result.expect("t >= 1");
        match fold_at {
            Some(q) if !out.is_folded() => out.fold(q),
            _ => Ok(out),
        }
    }

    /// Distribution of `X mod q`.
    pub fn fold(&self, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(AnalyzerError::Domain("modulus must be at least 2".into()));
        }
        if let Some(m) = self.modulus {
            if m != q {
                return Err(AnalyzerError::ModulusMismatch(m, q));
            }
            return Ok(self.clone());
        }
        self.fold_unchecked(q).checked("fold")
    }

    fn fold_unchecked(&self, q: u32) -> Self {
        let off = center_offset(q);
        let mut acc = vec![BigProb::zero(self.prec); q as usize];
        for i in 0..self.len() {
            if self.exps[i] == ZERO_EXP {
                continue;
            }
            let x = self.offset + i as i64;
            let idx = (x - off).rem_euclid(q as i64) as usize;
            acc[idx] = acc[idx].add(&self.get(i));
        }
        let mut out = Self::with_len(self.prec, off, q as usize);
        out.modulus = Some(q);
        for (i, w) in acc.iter().enumerate() {
            out.set(i, w);
        }
        out
    }

    /// Distribution of `|X|` (unfolded input) or, for a folded input, of the
    /// distance `|((c + X) mod q) − ⌊q/2⌋|` used by threshold decoding.
    pub fn pole_distance(&self, c: u32) -> Result<Self> {
        let q = self.modulus.ok_or_else(|| AnalyzerError::Domain("distribution is not folded".into()))?;
        let h = (q / 2) as i64;
        let mut acc = vec![BigProb::zero(self.prec); h as usize + 1];
        for (x, w) in self.iter() {
            let y = (c as i64 + x).rem_euclid(q as i64);
            let d = (y - h).unsigned_abs() as usize;
            acc[d] = acc[d].add(&w);
        }
        Self::from_weights(0, &acc, self.prec)
    }

    /// `log2` weight per stored value.
    pub fn log2_weights(&self) -> Vec<(i64, f64)> {
        self.iter().map(|(x, w)| (x, w.log2())).collect()
    }

    /// Cumulative sums `S[i] = Σ_{j ≤ i} w_j` over the stored order.
    pub(crate) fn prefix_sums(&self) -> Vec<BigProb> {
        let mut acc = BigProb::zero(self.prec);
        (0..self.len())
            .map(|i| {
                acc = acc.add(&self.get(i));
                acc.clone()
            })
            .collect()
    }

    /// Suffix sums `S[i] = Σ_{j ≥ i} w_j` over the stored order.
    pub(crate) fn suffix_sums(&self) -> Vec<BigProb> {
        let mut acc = BigProb::zero(self.prec);
        let mut out: Vec<BigProb> = (0..self.len())
            .rev()
            .map(|i| {
                acc = acc.add(&self.get(i));
                acc.clone()
            })
            .collect();
        out.reverse();
        out
    }
}

impl fmt::Debug for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pmf")
            .field("support", &(self.offset, self.max_value()))
            .field("modulus", &self.modulus)
            .field("precision", &self.prec.total_bits())
            .finish()
    }
}

/// Bits of dynamic range below an operand's largest weight that are carried
/// exactly; anything smaller keeps only its absolute value to within
/// `2^-(P + RANGE_CAP)` of the largest weight.
const RANGE_CAP: i64 = 1024;
const GUARD_BITS: i64 = 64;

/// Fixed-point image of a weight vector: `A_i = ⌊w_i · 2^(width − top)⌋`.
struct FixedPoint {
    width: i64,
    top: i64,
}

impl FixedPoint {
    fn of(p: &Pmf) -> Self {
        let nonzero = p.exps.iter().copied().filter(|&e| e != ZERO_EXP);
        let top = nonzero.clone().max().expect("normalized distribution has mass");
        let bottom = nonzero.min().expect("normalized distribution has mass");
        let width = p.prec.total_bits() as i64 + (top - bottom).min(RANGE_CAP) + GUARD_BITS;
        Self { width, top }
    }

    /// Packs every `A_i` into its own `slot`-bit field of one big integer.
    fn pack(&self, p: &Pmf, slot: i64) -> UBig {
        let l = p.prec.limbs();
        let mut words = vec![0u64; ((p.len() as i64 * slot) / 64) as usize + 2];
        for i in 0..p.len() {
            let e = p.exps[i];
            if e == ZERO_EXP {
                continue;
            }
            let field = slot * i as i64;
            // Bit position of the mantissa's least significant bit.
            let lsb = field + self.width - self.top + e - 64 * l as i64;
            for (j, &limb) in p.mants[i * l..(i + 1) * l].iter().enumerate() {
                let mut v = limb;
                let mut pos = lsb + 64 * j as i64;
                if pos + 64 <= field || v == 0 {
                    continue;
                }
                if pos < field {
                    v >>= (field - pos) as u32;
                    pos = field;
                }
                let li = (pos / 64) as usize;
                let off = (pos % 64) as u32;
                words[li] |= v << off;
                if off > 0 {
                    words[li + 1] |= v >> (64 - off);
                }
            }
        }
        UBig::from_words(&words)
    }
}

/// Linear convolution by Kronecker substitution: both operands become
/// fixed-point integers packed into wide fields, one big-integer product
/// yields every output sum exactly, and each field is rounded back to `P` bits.
fn convolve_linear(a: &Pmf, b: &Pmf) -> Pmf {
    let prec = a.prec;
    let l = prec.limbs();
    let lo = a.len() + b.len() - 1;
    let fa = FixedPoint::of(a);
    let fb = FixedPoint::of(b);
    let count_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as i64;
    let slot = fa.width + fb.width + count_bits + 1;
    let x = fa.pack(a, slot);
    let z = if a == b { x.sqr() } else { x * fb.pack(b, slot) };
    let words = z.as_words();
    let word_at = |i: usize| words.get(i).copied().unwrap_or(0);
    let bits_at = |pos: i64| {
        let li = (pos / 64) as usize;
        let off = (pos % 64) as u32;
        if off == 0 {
            word_at(li)
        } else {
            (word_at(li) >> off) | (word_at(li + 1) << (64 - off))
        }
    };
    let scale = fa.top + fb.top - fa.width - fb.width;
    let field_words = (slot as usize).div_ceil(64);
    let mut field = vec![0u64; field_words];
    let mut out = Pmf::with_len(prec, a.offset + b.offset, lo);
    for k in 0..lo {
        let start = slot * k as i64;
        for (j, f) in field.iter_mut().enumerate() {
            *f = bits_at(start + 64 * j as i64);
        }
        let tail = slot - 64 * (field_words as i64 - 1);
        if tail < 64 {
            field[field_words - 1] &= (1u64 << tail) - 1;
        }
        let v = from_int_limbs(&field, scale, l);
        out.set(k, &v);
    }
    out
}
