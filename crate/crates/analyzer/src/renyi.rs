//! Rényi divergence between the centered binomial `ψ_k` and the rounded
//! Gaussian `ξ_k` of the same variance.

use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use crate::error::{AnalyzerError, Result};

/// Binary floating-point real used for the divergence.
pub type Real = FBig<HalfEven, 2>;

/// Working precision in bits. The erf differences in the far tails cancel
/// about 30 bits, so this leaves well over 50 significant digits.
pub const RENYI_BITS: usize = 384;

fn real(x: i64) -> Real {
    Real::from(x).with_precision(RENYI_BITS).value()
}

fn ratio(a: i64, b: i64) -> Real {
    real(a) / real(b)
}

/// `atan(1/x)` by its Taylor series.
fn atan_inv(x: i64) -> Real {
    let eps = real(1) >> (RENYI_BITS as isize + 8);
    let x2 = real(x * x);
    let mut pow = ratio(1, x);
    let mut sum = pow.clone();
    let mut k = 1i64;
    loop {
        pow = pow / &x2;
        let term = &pow / real(2 * k + 1);
        if term < eps {
            return sum;
        }
        sum = if k % 2 == 1 { sum - term } else { sum + term };
        k += 1;
    }
}

/// π from Machin's formula.
pub fn pi() -> Real {
    atan_inv(5) * real(16) - atan_inv(239) * real(4)
}

/// `erf(z)` for `z ≥ 0`, from the series with positive terms
/// `erf z = 2/√π · e^{−z²} · Σ 2ⁿ z^{2n+1} / (1·3·…·(2n+1))`.
fn erf_nonneg(z: &Real, sqrt_pi: &Real) -> Real {
    let eps = real(1) >> (RENYI_BITS as isize + 8);
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = term.clone();
    let mut n = 0i64;
    loop {
        n += 1;
        term = term * &z2 * real(2) / real(2 * n + 1);
        sum += &term;
        if &term < &(&sum * &eps) {
            break;
        }
    }
    sum * real(2) * (-z2).exp() / sqrt_pi
}

/// Error function to working precision.
pub fn erf(z: &Real) -> Real {
    let sqrt_pi = pi().sqrt();
    erf_signed(z, &sqrt_pi)
}

fn erf_signed(z: &Real, sqrt_pi: &Real) -> Real {
    if z < &real(0) {
        -erf_nonneg(&-z.clone(), sqrt_pi)
    } else {
        erf_nonneg(z, sqrt_pi)
    }
}

/// Probabilities of `ψ_k` over `−k..=k`: `C(2k, k+x) / 4^k`.
pub fn binomial_weights(k: u32) -> Vec<Real> {
    let k = k as i64;
    let denom = real(1) << (2 * k as isize);
    let mut c = real(1);
    let mut out = Vec::with_capacity(2 * k as usize + 1);
    for i in 0..=2 * k {
        out.push(&c / &denom);
        c = c * real(2 * k - i) / real(i + 1);
    }
    out
}

/// Probabilities of `ξ_k = ⌊N(0, k/2)⌉` over `−k..=k`:
/// `Φ((x+½)/σ) − Φ((x−½)/σ) = ½[erf((x+½)/√k) − erf((x−½)/√k)]`.
pub fn rounded_gaussian_weights(k: u32) -> Vec<Real> {
    let sqrt_pi = pi().sqrt();
    let sqrt_k = real(k as i64).sqrt();
    let k = k as i64;
    (-k..=k)
        .map(|x| {
            let hi = erf_signed(&(ratio(2 * x + 1, 2) / &sqrt_k), &sqrt_pi);
            let lo = erf_signed(&(ratio(2 * x - 1, 2) / &sqrt_k), &sqrt_pi);
            (hi - lo) / real(2)
        })
        .collect()
}

/// `R_a(P‖Q) = (Σ P(x)^a / Q(x)^{a−1})^{1/(a−1)}` over the support of `P`.
pub fn renyi_divergence_weights(p: &[Real], q: &[Real], a: f64) -> Result<Real> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(AnalyzerError::Domain(format!("Rényi order must exceed 1, got {a}")));
    }
    if p.len() != q.len() {
        return Err(AnalyzerError::Domain("distributions differ in support".into()));
    }
    let zero = real(0);
    let integral = a.fract() == 0.0 && a < 1e6;
    let a_real = Real::try_from(a).expect("finite").with_precision(RENYI_BITS).value();
    let am1 = &a_real - real(1);
    let mut sum = real(0);
    for (pi, qi) in p.iter().zip(q) {
        if pi <= &zero {
            continue;
        }
        if qi <= &zero {
            return Err(AnalyzerError::Domain("Q vanishes on the support of P".into()));
        }
        let ratio = pi / qi;
        let term = if integral {
            pi * ratio.powi(IBig::from(a as i64 - 1))
        } else {
            pi * ratio.powf(&am1)
        };
        sum += term;
    }
    Ok(if integral { sum.nth_root(a as usize - 1) } else { (sum.ln() / am1).exp() })
}

/// `R_a(ψ_k ‖ ξ_k)`.
pub fn renyi_divergence(k: u32, a: f64) -> Result<Real> {
    if k == 0 {
        return Err(AnalyzerError::Domain("binomial parameter must be positive".into()));
    }
    renyi_divergence_weights(&binomial_weights(k), &rounded_gaussian_weights(k), a)
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal_string(x: &Real, digits: usize) -> String {
    x.to_decimal().value().with_precision(digits).value().to_string()
}
