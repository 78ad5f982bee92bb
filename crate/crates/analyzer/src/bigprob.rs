//! Non-negative binary floating point with a fixed number of 64-bit limbs
//! and an unbounded exponent.
//!
//! A value is `0.m × 2^exp` where `m` is the mantissa read as a fraction of
//! `2^(64·L)`. Non-zero values keep the top mantissa bit set. All operations
//! truncate.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{AnalyzerError, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 512;
pub const MIN_PRECISION_BITS: u32 = 256;
pub const MAX_PRECISION_BITS: u32 = 2048;

/// Exponent stored for zero; small enough that sums of two stay far below any real exponent.
pub(crate) const ZERO_EXP: i64 = i64::MIN / 4;

/// Working precision, a whole number of 64-bit limbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    limbs: usize,
}

impl Precision {
    /// Precision of `bits` bits, rounded up to a multiple of 64.
    pub fn bits(bits: u32) -> Result<Self> {
        if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&bits) {
            return Err(AnalyzerError::InvalidPrecision(bits));
        }
        Ok(Self { limbs: bits.div_ceil(64) as usize })
    }

    pub fn limbs(self) -> usize {
        self.limbs
    }

    pub fn total_bits(self) -> u32 {
        64 * self.limbs as u32
    }

    pub fn doubled(self) -> Result<Self> {
        Self::bits(2 * self.total_bits())
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { limbs: (DEFAULT_PRECISION_BITS / 64) as usize }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.total_bits())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigProb {
    exp: i64,
    /// Little-endian limbs; `mant[L-1]` is the most significant.
    mant: Vec<u64>,
}

impl BigProb {
    pub fn zero(prec: Precision) -> Self {
        Self { exp: ZERO_EXP, mant: vec![0; prec.limbs] }
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_u64(1, prec)
    }

    pub fn from_u64(v: u64, prec: Precision) -> Self {
        from_int_limbs(&[v], 0, prec.limbs)
    }

    pub fn from_ratio(num: u64, den: u64, prec: Precision) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_u64(num, prec).div_u64(den)
    }

    /// `2^e`.
    pub fn pow2(e: i64, prec: Precision) -> Self {
        let mut one = Self::one(prec);
        one.exp += e;
        one
    }

    pub(crate) fn from_parts(exp: i64, mant: Vec<u64>) -> Self {
        Self { exp, mant }
    }

    pub(crate) fn parts(&self) -> (i64, &[u64]) {
        (self.exp, &self.mant)
    }

    pub fn precision(&self) -> Precision {
        Precision { limbs: self.mant.len() }
    }

    pub fn is_zero(&self) -> bool {
        self.mant[self.mant.len() - 1] == 0
    }

    /// Binary exponent: the value lies in `[2^(e-1), 2^e)`.
    pub fn exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.exp)
    }

    /// Re-rounds (truncates or zero-extends) to another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let l = self.mant.len();
        let mut mant = vec![0u64; prec.limbs];
        for (j, m) in mant.iter_mut().enumerate().rev() {
            let src = l as isize - (prec.limbs - j) as isize;
            if src >= 0 {
                *m = self.mant[src as usize];
            }
        }
        Self { exp: self.exp, mant }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.mant.len();
        assert_eq!(l, other.mant.len(), "precision mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.precision());
        }
        let mut prod = vec![0u64; 2 * l];
        for (i, &a) in self.mant.iter().enumerate() {
            let mut carry = 0u64;
            for (j, &b) in other.mant.iter().enumerate() {
                let t = a as u128 * b as u128 + prod[i + j] as u128 + carry as u128;
                prod[i + j] = t as u64;
                carry = (t >> 64) as u64;
            }
            prod[i + l] = carry;
        }
        from_int_limbs(&prod, self.exp + other.exp - 128 * l as i64, l)
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.mant.len();
        assert_eq!(l, other.mant.len(), "precision mismatch");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (big, small) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let shift = (big.exp - small.exp) as u64;
        // One guard limb below, one carry limb above.
        let mut acc = vec![0u64; l + 2];
        acc[1..=l].copy_from_slice(&big.mant);
        add_shifted(&mut acc, &small.mant, 1, shift);
        from_int_limbs(&acc, big.exp - 64 * (l as i64 + 1), l)
    }

    /// `self − other`, or `None` when the difference would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let l = self.mant.len();
        assert_eq!(l, other.mant.len(), "precision mismatch");
        match self.cmp(other) {
            Ordering::Less => return None,
            Ordering::Equal => return Some(Self::zero(self.precision())),
            Ordering::Greater => {}
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        let shift = (self.exp - other.exp) as u64;
        let mut a = vec![0u64; l + 1];
        a[1..].copy_from_slice(&self.mant);
        let mut b = vec![0u64; l + 1];
        add_shifted(&mut b, &other.mant, 0, shift);
        let mut borrow = false;
        for (x, y) in a.iter_mut().zip(&b) {
            let (d1, o1) = x.overflowing_sub(*y);
            let (d2, o2) = d1.overflowing_sub(borrow as u64);
            *x = d2;
            borrow = o1 || o2;
        }
        Some(from_int_limbs(&a, self.exp - 64 * (l as i64 + 1), l))
    }

    pub fn mul_u64(&self, v: u64) -> Self {
        let l = self.mant.len();
        if v == 0 || self.is_zero() {
            return Self::zero(self.precision());
        }
        let mut out = vec![0u64; l + 1];
        let mut carry = 0u64;
        for (o, &m) in out.iter_mut().zip(&self.mant) {
            let t = m as u128 * v as u128 + carry as u128;
            *o = t as u64;
            carry = (t >> 64) as u64;
        }
        out[l] = carry;
        from_int_limbs(&out, self.exp - 64 * l as i64, l)
    }

    pub fn div_u64(&self, v: u64) -> Self {
        assert!(v != 0, "division by zero");
        let l = self.mant.len();
        if self.is_zero() {
            return self.clone();
        }
        // Two extra low limbs keep the quotient at full precision after renormalizing.
        let mut num = vec![0u64; l + 2];
        num[2..].copy_from_slice(&self.mant);
        let mut rem = 0u128;
        for x in num.iter_mut().rev() {
            let cur = (rem << 64) | *x as u128;
            *x = (cur / v as u128) as u64;
            rem = cur % v as u128;
        }
        from_int_limbs(&num, self.exp - 64 * (l as i64 + 2), l)
    }

    pub fn powi(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplies by `2^e` exactly.
    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { exp: self.exp + e, mant: self.mant.clone() }
    }

    /// `log2` of the value; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let l = self.mant.len();
        let hi = self.mant[l - 1] as f64 + self.mant[l - 2] as f64 / 18446744073709551616.0;
        self.exp as f64 - 64.0 + hi.log2()
    }

    pub fn log10(&self) -> f64 {
        self.log2() * std::f64::consts::LOG10_2
    }

    /// Nearest `f64`; underflows to zero below the subnormal range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let l = self.mant.len();
        let top = self.mant[l - 1] as f64 / 18446744073709551616.0;
        if self.exp > 1100 {
            return f64::INFINITY;
        }
        if self.exp < -1200 {
            return 0.0;
        }
        // Two steps so that 2^exp itself never underflows before the product.
        let half = self.exp / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((self.exp - half) as i32)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let lg = self.log10();
        let mut e10 = lg.floor();
        let mut m = 10f64.powf(lg - e10);
        let scale = 10f64.powi(digits.saturating_sub(1) as i32);
        if (m * scale).round() / scale >= 10.0 {
            m /= 10.0;
            e10 += 1.0;
        }
        format!("{:.*}e{}", digits.saturating_sub(1), m, e10 as i64)
    }

    /// Relative difference `|a − b| / max(a, b)` as `f64`.
    pub fn relative_diff(&self, other: &Self) -> f64 {
        let (hi, lo) = if self >= other { (self, other) } else { (other, self) };
        if hi.is_zero() {
            return 0.0;
        }
        let diff = hi.checked_sub(lo).expect("ordered");
        if diff.is_zero() {
            0.0
        } else {
            (diff.log2() - hi.log2()).exp2()
        }
    }
}

impl PartialOrd for BigProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigProb {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        self.exp.cmp(&other.exp).then_with(|| self.mant.iter().rev().cmp(other.mant.iter().rev()))
    }
}

impl fmt::Debug for BigProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigProb({}, log2={:.6})", self.to_sci(6), self.log2())
    }
}

impl fmt::Display for BigProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(f.precision().unwrap_or(6)))
    }
}

/// Adds `src >> shift` into `acc`, where unshifted `src` would occupy the
/// limbs just below `acc.len() - top_gap`. Bits shifted out are dropped.
fn add_shifted(acc: &mut [u64], src: &[u64], top_gap: usize, shift: u64) {
    let w = acc.len();
    let l = src.len();
    // Position (in limbs, from acc[0]) of src[0] before shifting.
    let base = (w - top_gap) as i64 - l as i64;
    let ls = (shift / 64) as i64;
    let bs = (shift % 64) as u32;
    let mut carry = false;
    for (j, slot) in acc.iter_mut().enumerate() {
        // Limb j of (src placed at base) >> shift.
        let k = j as i64 - base + ls;
        let lo = limb_at(src, k);
        let v = if bs == 0 { lo } else { (lo >> bs) | (limb_at(src, k + 1) << (64 - bs)) };
        let (s1, o1) = slot.overflowing_add(v);
        let (s2, o2) = s1.overflowing_add(carry as u64);
        *slot = s2;
        carry = o1 || o2;
    }
    debug_assert!(!carry, "accumulator overflow");
}

#[inline]
fn limb_at(src: &[u64], k: i64) -> u64 {
    if k >= 0 && (k as usize) < src.len() {
        src[k as usize]
    } else {
        0
    }
}

/// Rounds the integer `z·2^base` (little-endian limbs) down to `l` limbs.
pub(crate) fn from_int_limbs(z: &[u64], base: i64, l: usize) -> BigProb {
    let Some(top) = z.iter().rposition(|&x| x != 0) else {
        return BigProb { exp: ZERO_EXP, mant: vec![0; l] };
    };
    let lz = z[top].leading_zeros();
    let bitlen = 64 * top as i64 + 64 - lz as i64;
    let mut mant = vec![0u64; l];
    for (j, m) in mant.iter_mut().enumerate() {
        let idx = top as i64 + 1 - l as i64 + j as i64;
        let hi = if idx >= 0 { z[idx as usize] } else { 0 };
        let lo = if idx >= 1 { z[idx as usize - 1] } else { 0 };
        *m = if lz == 0 { hi } else { (hi << lz) | (lo >> (64 - lz)) };
    }
    BigProb { exp: base + bitlen, mant }
}
