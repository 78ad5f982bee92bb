//! The ATE super channel and block failure rates.

use ringlab_core::ecc::EccScheme;

use crate::bigprob::BigProb;
use crate::error::{AnalyzerError, Result};
use crate::pmf::Pmf;

/// Binary symmetric channel seen by the outer code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperChannel {
    /// Cross-over probability averaged over equiprobable bits.
    pub p: BigProb,
    /// `Pr(decode 1 | sent 0)`.
    pub p_zero: BigProb,
    /// `Pr(decode 0 | sent 1)`.
    pub p_one: BigProb,
    pub m: usize,
    pub q: u32,
}

/// Cross-over probability of `m`-fold threshold decoding over a folded total
/// noise distribution. Uses the decoder's rule: bit 1 iff `4·Σ|v − ⌊q/2⌋| < m·q`.
pub fn crossover_probability(total: &Pmf, m: usize) -> Result<SuperChannel> {
    Ok(crossover_probabilities(total, &[m])?.remove(0))
}

/// [`crossover_probability`] for several repetition counts, sharing the
/// distance-sum distributions between them.
pub fn crossover_probabilities(total: &Pmf, ms: &[usize]) -> Result<Vec<SuperChannel>> {
    let q = total.modulus().ok_or_else(|| AnalyzerError::Domain("total noise must be folded".into()))?;
    if ms.contains(&0) {
        return Err(AnalyzerError::Domain("repetition count must be positive".into()));
    }
    let mut one = DistanceSums::new(total.pole_distance(q / 2)?);
    let mut zero = DistanceSums::new(total.pole_distance(0)?);
    ms.iter()
        .map(|&m| {
            // Smallest distance sum that decodes to 0.
            let threshold = (m as u64 * q as u64).div_ceil(4) as i64;
            let p_one = one.tail(m, threshold, Tail::AtLeast)?;
            let p_zero = zero.tail(m, threshold, Tail::Below)?;
            let p = p_one.add(&p_zero).mul_pow2(-1);
            Ok(SuperChannel { p, p_zero, p_one, m, q })
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Tail {
    AtLeast,
    Below,
}

/// Distributions of sums of `j` iid pole distances, built on demand.
struct DistanceSums {
    powers: Vec<Pmf>,
}

impl DistanceSums {
    fn new(d: Pmf) -> Self {
        Self { powers: vec![d] }
    }

    fn power(&mut self, j: usize) -> Result<&Pmf> {
        while self.powers.len() < j {
            let next = self.powers.last().expect("non-empty").convolve(&self.powers[0])?;
            self.powers.push(next);
        }
        Ok(&self.powers[j - 1])
    }

    /// `Pr(D_1 + … + D_m ≥ T)` or `Pr(… < T)`.
    ///
    /// Splits the sum into two halves and combines one half's distribution
    /// with the other half's cumulative sums, so the `m`-fold distribution is
    /// never materialized.
    fn tail(&mut self, m: usize, threshold: i64, tail: Tail) -> Result<BigProb> {
        let pred = |s: i64| match tail {
            Tail::AtLeast => s >= threshold,
            Tail::Below => s < threshold,
        };
        if m == 1 {
            return Ok(self.power(1)?.mass_where(pred));
        }
        let m1 = m / 2;
        let a = self.power(m1)?.clone();
        let b = self.power(m - m1)?;
        let cum = match tail {
            Tail::Below => b.prefix_sums(),
            Tail::AtLeast => b.suffix_sums(),
        };
        let mut total = BigProb::zero(b.precision());
        for (x, w) in a.iter() {
            if w.is_zero() {
                continue;
            }
            // Position in `b` of the first value that completes the event.
            let idx = match tail {
                // Need b ≤ T − 1 − x.
                Tail::Below => {
                    let i = threshold - 1 - x - b.offset();
                    if i < 0 {
                        continue;
                    }
                    (i as usize).min(b.len() - 1)
                }
                // Need b ≥ T − x.
                Tail::AtLeast => {
                    let i = (threshold - x - b.offset()).max(0);
                    if i as usize >= b.len() {
                        continue;
                    }
                    i as usize
                }
            };
            total = total.add(&w.mul(&cum[idx]));
        }
        Ok(total)
    }
}

/// `Pr(more than t of n independent bits flip)` with flip probability `p`,
/// summed directly over the upper tail.
pub fn binomial_tail(p: &BigProb, n: usize, t: usize) -> Result<BigProb> {
    let prec = p.precision();
    let one = BigProb::one(prec);
    let not_p = one.checked_sub(p).ok_or_else(|| AnalyzerError::Domain("probability exceeds 1".into()))?;
    if t >= n || p.is_zero() {
        return Ok(BigProb::zero(prec));
    }
    // (1-p)^j for j = 0..=n.
    let mut not_p_pows = Vec::with_capacity(n + 1);
    let mut acc = one.clone();
    for _ in 0..=n {
        not_p_pows.push(acc.clone());
        acc = acc.mul(&not_p);
    }
    let mut binom = one.clone();
    let mut p_pow = one;
    let mut total = BigProb::zero(prec);
    for i in 0..=n {
        if i > t {
            total = total.add(&binom.mul(&p_pow).mul(&not_p_pows[n - i]));
        }
        binom = binom.mul_u64((n - i) as u64).div_u64(i as u64 + 1);
        p_pow = p_pow.mul(p);
    }
    Ok(total)
}

/// Failure rate of ATE alone: `1 − (1 − p)^nbits`.
pub fn dfr_ate(channel: &SuperChannel, nbits: usize) -> Result<BigProb> {
    binomial_tail(&channel.p, nbits, 0)
}

/// Failure rate of a `Ct`-error-correcting outer code over `cn` channel bits.
pub fn dfr_bch(channel: &SuperChannel, cn: usize, ct: usize) -> Result<BigProb> {
    binomial_tail(&channel.p, cn, ct)
}

/// Failure rate of a scheme, counting every bit that crosses the channel
/// (including transmitted pad bits, which the decoder checks).
pub fn dfr_scheme(channel: &SuperChannel, scheme: &EccScheme) -> Result<BigProb> {
    binomial_tail(&channel.p, scheme.channel_bits(), scheme.correctable())
}
