use super::{pow_mod, prime_factors};
use crate::error::{Error, Result};

/// Precomputed tables for the negacyclic NTT over `Z_q[x]/(x^n + 1)`.
///
/// The transform evaluates `a` at the odd powers of a fixed primitive `2n`-th
/// root of unity `γ`: output coefficient `i` is `a(γ^(2i+1))`, in natural order.
/// `γ = g^((q-1)/2n)` where `g` is the smallest generator of `Z_q^*`.
#[derive(Debug, Clone)]
pub struct NttTables {
    n: usize,
    q: u64,
    gamma: u64,
    twist: Vec<u64>,
    untwist: Vec<u64>,
    /// `ω^j` for `j < n/2`, `ω = γ²`.
    omega_pows: Vec<u64>,
    omega_inv_pows: Vec<u64>,
    n_inv: u64,
}

impl NttTables {
    pub fn new(n: usize, q: u32) -> Result<Self> {
        let q64 = q as u64;
        let order = 2 * n as u64;
        if (q64 - 1) % order != 0 {
            return Err(Error::UnsupportedModulus { q, order: 2 * n });
        }
        let g = smallest_generator(q64);
        let gamma = pow_mod(g, (q64 - 1) / order, q64);
        let gamma_inv = pow_mod(gamma, q64 - 2, q64);
        let omega = gamma * gamma % q64;
        let omega_inv = gamma_inv * gamma_inv % q64;
        let powers = |base: u64, len: usize| {
            let mut v = Vec::with_capacity(len);
            let mut x = 1u64;
            for _ in 0..len {
                v.push(x);
                x = x * base % q64;
            }
            v
        };
        Ok(Self {
            n,
            q: q64,
            gamma,
            twist: powers(gamma, n),
            untwist: powers(gamma_inv, n),
            omega_pows: powers(omega, n / 2),
            omega_inv_pows: powers(omega_inv, n / 2),
            n_inv: pow_mod(n as u64, q64 - 2, q64),
        })
    }

    /// The primitive `2n`-th root of unity used by the transform.
    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn forward(&self, a: &mut [u32]) {
        debug_assert_eq!(a.len(), self.n);
        let mut v: Vec<u64> = a.iter().zip(&self.twist).map(|(&x, &t)| x as u64 * t % self.q).collect();
        self.cyclic(&mut v, &self.omega_pows);
        for (dst, src) in a.iter_mut().zip(v) {
            *dst = src as u32;
        }
    }

    pub fn inverse(&self, a: &mut [u32]) {
        debug_assert_eq!(a.len(), self.n);
        let mut v: Vec<u64> = a.iter().map(|&x| x as u64).collect();
        self.cyclic(&mut v, &self.omega_inv_pows);
        for ((dst, src), &t) in a.iter_mut().zip(v).zip(&self.untwist) {
            *dst = (src * self.n_inv % self.q * t % self.q) as u32;
        }
    }

    /// In-place cyclic transform: bit-reversal followed by radix-2 butterflies.
    fn cyclic(&self, v: &mut [u64], roots: &[u64]) {
        let n = self.n;
        let q = self.q;
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                v.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for j in 0..half {
                    let w = roots[j * step];
                    let u = v[start + j];
                    let t = v[start + j + half] * w % q;
                    v[start + j] = (u + t) % q;
                    v[start + j + half] = (u + q - t) % q;
                }
            }
            len <<= 1;
        }
    }
}

fn smallest_generator(q: u64) -> u64 {
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1))
        .expect("prime modulus has a generator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_has_exact_order() {
        for (n, q) in [(1024usize, 12289u32), (512, 12289), (16, 257), (4, 17)] {
            let t = NttTables::new(n, q).unwrap();
            let g = t.gamma();
            assert_eq!(pow_mod(g, 2 * n as u64, q as u64), 1);
            assert_eq!(pow_mod(g, n as u64, q as u64), q as u64 - 1);
        }
        // 11 is the smallest generator mod 12289
        assert_eq!(smallest_generator(12289), 11);
        assert_eq!(NttTables::new(1024, 12289).unwrap().gamma(), pow_mod(11, 6, 12289));
    }

    #[test]
    fn evaluates_at_odd_powers() {
        let n = 8;
        let q = 17u64;
        let t = NttTables::new(n, 17).unwrap();
        let a: Vec<u32> = vec![3, 1, 4, 1, 5, 9, 2, 6];
        let mut f = a.clone();
        t.forward(&mut f);
        for (i, &fi) in f.iter().enumerate() {
            let x = pow_mod(t.gamma(), 2 * i as u64 + 1, q);
            let mut acc = 0u64;
            for (j, &c) in a.iter().enumerate() {
                acc = (acc + c as u64 * pow_mod(x, j as u64, q)) % q;
            }
            assert_eq!(fi as u64, acc);
        }
    }

    #[test]
    fn unsupported_modulus() {
        assert!(NttTables::new(1024, 7681).is_err());
        assert!(NttTables::new(256, 7681).is_ok());
    }
}
