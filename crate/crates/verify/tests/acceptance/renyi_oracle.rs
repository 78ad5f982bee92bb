//! Decimal fixed-point evaluation of `R_a(ψ_k ‖ ξ_k)` for integer orders,
//! independent of the library's binary floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// 200 digits plus guard digits.
pub const DIGITS: u32 = 220;

struct Fixed {
    scale: BigInt,
}

impl Fixed {
    fn new() -> Self {
        Self { scale: BigInt::from(10).pow(DIGITS) }
    }

    fn int(&self, x: i64) -> BigInt {
        BigInt::from(x) * &self.scale
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b / &self.scale
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * &self.scale / b
    }

    fn sqrt(&self, a: &BigInt) -> BigInt {
        (a * &self.scale).sqrt()
    }

    fn atan_inv(&self, den: i64) -> BigInt {
        let x = &self.scale / BigInt::from(den);
        let x2 = self.mul(&x, &x);
        let (mut pow, mut sum, mut k) = (x.clone(), x, 1i64);
        loop {
            pow = self.mul(&pow, &x2);
            let term = &pow / BigInt::from(2 * k + 1);
            if term.is_zero() {
                return sum;
            }
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
    }

    /// Machin: π = 16·atan(1/5) − 4·atan(1/239).
    fn pi(&self) -> BigInt {
        self.atan_inv(5) * 16 - self.atan_inv(239) * 4
    }

    fn erf(&self, z: &BigInt, sqrt_pi: &BigInt) -> BigInt {
        let z2 = self.mul(z, z);
        let (mut pow, mut sum, mut n) = (z.clone(), z.clone(), 0i64);
        loop {
            n += 1;
            pow = -self.mul(&pow, &z2) / BigInt::from(n);
            let term = &pow / BigInt::from(2 * n + 1);
            if term.is_zero() && pow.abs() < self.scale {
                break;
            }
            sum += term;
        }
        self.div(&(sum * 2), sqrt_pi)
    }
}

fn binomial(n: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::one(), |c, i| c * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Decimal digits of the divergence scaled by `10^DIGITS` (truncated).
pub fn renyi_digits(k: i64, a: u32) -> String {
    let f = Fixed::new();
    let sqrt_pi = f.sqrt(&f.pi());
    let sqrt_k = f.sqrt(&f.int(k));
    let four_k = BigInt::from(4).pow(k as u32);
    let mut sum = BigInt::zero();
    for x in -k..=k {
        let p = binomial(2 * k, k + x) * &f.scale / &four_k;
        let hi = f.div(&f.int(2 * x + 1), &(&sqrt_k * 2));
        let lo = f.div(&f.int(2 * x - 1), &(&sqrt_k * 2));
        let q: BigInt = (f.erf(&hi, &sqrt_pi) - f.erf(&lo, &sqrt_pi)) / BigInt::from(2);
        sum += p.pow(a) / q.pow(a - 1);
    }
    (sum * f.scale.pow(a - 2)).nth_root(a - 1).to_string()
}
