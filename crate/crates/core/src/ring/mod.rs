//! Arithmetic in `Z_q[x]/(x^n + 1)`.
//!
//! Coefficients are always kept in canonical form `[0, q)`. Multiplication has
//! a schoolbook reference path that works for any modulus and an NTT fast path
//! that requires `q ≡ 1 (mod 2n)`.

mod ntt;
mod sample;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use ntt::NttTables;
pub use sample::{sample_binomial, sample_uniform, Xof};

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u32 = 1 << 30;

/// Ring dimension `n`, prime modulus `q` and centered-binomial parameter `k`.
///
/// Cloning is cheap: the precomputed NTT tables are shared behind an `Arc`.
#[derive(Clone)]
pub struct ParamSet {
    inner: Arc<ParamInner>,
}

struct ParamInner {
    n: usize,
    q: u32,
    k: u32,
    ntt: Option<NttTables>,
}

impl ParamSet {
    pub fn new(n: usize, q: u32, k: u32) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidParams(format!("n = {n} is not a power of two >= 2")));
        }
        if q < 3 || q > MAX_MODULUS || !is_prime(q as u64) {
            return Err(Error::InvalidParams(format!("q = {q} is not an odd prime below 2^30")));
        }
        if k > q / 8 {
            return Err(Error::InvalidParams(format!("k = {k} exceeds q/8")));
        }
        let ntt = NttTables::new(n, q).ok();
        Ok(Self { inner: Arc::new(ParamInner { n, q, k, ntt }) })
    }

    /// NewHope-1024 defaults.
    pub fn newhope1024() -> Self {
        Self::new(1024, 12289, 8).expect("valid defaults")
    }

    /// NewHope-512 defaults.
    pub fn newhope512() -> Self {
        Self::new(512, 12289, 8).expect("valid defaults")
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// `⌈log2 q⌉`, the width of an uncompressed coefficient.
    pub fn q_bits(&self) -> u32 {
        32 - (self.inner.q - 1).leading_zeros()
    }

    /// `⌊q/2⌋`, the ATE pole for a one bit.
    pub fn half_q(&self) -> u32 {
        self.inner.q / 2
    }

    pub fn supports_ntt(&self) -> bool {
        self.inner.ntt.is_some()
    }

    pub fn ntt_tables(&self) -> Result<&NttTables> {
        self.inner.ntt.as_ref().ok_or(Error::UnsupportedModulus { q: self.q(), order: 2 * self.n() })
    }

    /// Same copy of the tables or equal `(n, q, k)`.
    pub fn same_as(&self, other: &ParamSet) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n() && self.q() == other.q() && self.k() == other.k())
    }

    /// Centered representative of `x mod q` in `(-q/2, q/2]`.
    pub fn center(&self, x: u32) -> i64 {
        let q = self.q() as i64;
        let x = x as i64;
        if x > q / 2 {
            x - q
        } else {
            x
        }
    }

    /// Reduces a signed integer into `[0, q)`.
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.q() as i64) as u32
    }
}

impl PartialEq for ParamSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for ParamSet {}

impl fmt::Debug for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamSet")
            .field("n", &self.n())
            .field("q", &self.q())
            .field("k", &self.k())
            .finish()
    }
}

/// An element of `R_q`, coefficients in `[0, q)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModPoly {
    params: ParamSet,
    coeffs: Vec<u32>,
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly(n={}, q={}, {:?})", self.params.n(), self.params.q(), self.coeffs)
    }
}

impl ModPoly {
    pub fn zero(params: &ParamSet) -> Self {
        Self { params: params.clone(), coeffs: vec![0; params.n()] }
    }

    /// Builds a polynomial from canonical coefficients.
    pub fn from_coeffs(params: &ParamSet, coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() != params.n() {
            return Err(Error::Malformed(format!(
                "expected {} coefficients, got {}",
                params.n(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= params.q()) {
            return Err(Error::Malformed(format!("coefficient {c} is not below q = {}", params.q())));
        }
        Ok(Self { params: params.clone(), coeffs })
    }

    /// Builds a polynomial from arbitrary integers, reducing each mod q.
    pub fn from_signed(params: &ParamSet, values: &[i64]) -> Result<Self> {
        let coeffs = values.iter().map(|&v| params.reduce(v)).collect();
        Self::from_coeffs(params, coeffs)
    }

    pub(crate) fn from_raw(params: &ParamSet, coeffs: Vec<u32>) -> Self {
        debug_assert_eq!(coeffs.len(), params.n());
        debug_assert!(coeffs.iter().all(|&c| c < params.q()));
        Self { params: params.clone(), coeffs }
    }

    /// The constant polynomial `c`.
    pub fn constant(params: &ParamSet, c: u32) -> Self {
        let mut p = Self::zero(params);
        p.coeffs[0] = c % params.q();
        p
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    /// Centered representatives of every coefficient.
    pub fn centered(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| self.params.center(c)).collect()
    }

    fn check(&self, other: &ModPoly) -> Result<()> {
        if self.params.same_as(&other.params) {
            Ok(())
        } else {
            Err(Error::ParamMismatch)
        }
    }

    pub fn add(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let q = self.params.q();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= q {
                    s - q
                } else {
                    s
                }
            })
            .collect();
        Ok(Self::from_raw(&self.params, coeffs))
    }

    pub fn sub(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let q = self.params.q();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| if a >= b { a - b } else { a + q - b })
            .collect();
        Ok(Self::from_raw(&self.params, coeffs))
    }

    /// Coefficient-wise product (`a ∘ b`), used on NTT-domain operands.
    pub fn pointwise_mul(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let q = self.params.q() as u64;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a as u64 * b as u64 % q) as u32)
            .collect();
        Ok(Self::from_raw(&self.params, coeffs))
    }

    /// Negacyclic product by direct convolution. Works for every modulus.
    pub fn mul_schoolbook(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let n = self.params.n();
        let q = self.params.q() as u64;
        // accumulate positive and negative wraps separately to stay unsigned
        let mut acc = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = a as u64 * b as u64 % q;
                let idx = i + j;
                if idx < n {
                    acc[idx] = (acc[idx] + prod) % q;
                } else {
                    acc[idx - n] = (acc[idx - n] + q - prod) % q;
                }
            }
        }
        Ok(Self::from_raw(&self.params, acc.into_iter().map(|c| c as u32).collect()))
    }

    /// Negacyclic product through the NTT.
    pub fn mul_ntt(&self, other: &ModPoly) -> Result<ModPoly> {
        self.check(other)?;
        let a = self.ntt_forward()?;
        let b = other.ntt_forward()?;
        a.pointwise_mul(&b)?.ntt_inverse()
    }

    /// NTT when available, schoolbook otherwise.
    pub fn mul(&self, other: &ModPoly) -> Result<ModPoly> {
        if self.params.supports_ntt() {
            self.mul_ntt(other)
        } else {
            self.mul_schoolbook(other)
        }
    }

    pub fn ntt_forward(&self) -> Result<ModPoly> {
        let tables = self.params.ntt_tables()?;
        let mut c = self.coeffs.clone();
        tables.forward(&mut c);
        Ok(Self::from_raw(&self.params, c))
    }

    pub fn ntt_inverse(&self) -> Result<ModPoly> {
        let tables = self.params.ntt_tables()?;
        let mut c = self.coeffs.clone();
        tables.inverse(&mut c);
        Ok(Self::from_raw(&self.params, c))
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    r
}

pub(crate) fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            out.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}
