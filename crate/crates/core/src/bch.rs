//! Narrow-sense binary BCH codes over GF(2^m) with optional shortening.
//!
//! Bit layout: a transmitted word of length `Cn` holds the `Ck` message bits
//! first, then the `deg g` parity bits. Transmitted index `j` is the
//! coefficient of `x^(Cn-1-j)`, so the shortened (always zero) message
//! positions are the highest powers `x^(Cn)..x^(2^m-2)` and are never sent.
//!
//! Decoding computes the `2t` syndromes, finds the error locator with
//! Berlekamp–Massey and locates errors with a Chien search restricted to the
//! transmitted positions. It is not constant-time.

use crate::error::{Error, Result};

/// Primitive polynomials used for each extension degree, as bit masks
/// (`x^4 + x + 1` is `0x13`).
pub const PRIMITIVE_POLYNOMIALS: [(u32, u32); 15] = [
    (2, 0x7),
    (3, 0xb),
    (4, 0x13),
    (5, 0x25),
    (6, 0x43),
    (7, 0x89),
    (8, 0x11d),
    (9, 0x211),
    (10, 0x409),
    (11, 0x805),
    (12, 0x1053),
    (13, 0x201b),
    (14, 0x4443),
    (15, 0x8003),
    (16, 0x1100b),
];

/// GF(2^m) with log/antilog tables.
#[derive(Debug, Clone)]
pub struct GfField {
    m: u32,
    poly: u32,
    order: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl GfField {
    pub fn new(m: u32) -> Result<Self> {
        let poly = PRIMITIVE_POLYNOMIALS
            .iter()
            .find(|(deg, _)| *deg == m)
            .map(|&(_, p)| p)
            .ok_or_else(|| Error::InvalidParams(format!("no primitive polynomial for m = {m}")))?;
        Self::with_polynomial(m, poly)
    }

    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self> {
        let order = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; order + 1];
        let mut x: u32 = 1;
        for i in 0..order {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParams(format!("{poly:#x} is not primitive")));
            }
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::InvalidParams(format!("{poly:#x} is not primitive")));
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, poly, order, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn primitive_polynomial(&self) -> u32 {
        self.poly
    }

    /// Multiplicative order `2^m − 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `α^e` for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> u16 {
        self.exp[e.rem_euclid(self.order as i64) as usize]
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        self.exp[(self.order - self.log[a as usize] as usize) % self.order]
    }

    pub fn log(&self, a: u16) -> usize {
        self.log[a as usize] as usize
    }
}

/// A (possibly shortened) narrow-sense binary BCH code `BCH(Cn, Ck, Ct)`.
#[derive(Debug, Clone)]
pub struct BchSpec {
    field: GfField,
    t: usize,
    shorten: usize,
    /// Generator coefficients over GF(2), index = power.
    generator: Vec<bool>,
}

impl BchSpec {
    pub fn new(m: u32, t: usize, shorten: usize) -> Result<Self> {
        if m < 2 || t == 0 || t >= 1usize << (m - 1) {
            return Err(Error::InvalidParams(format!("need 1 <= t < 2^(m-1), got m={m}, t={t}")));
        }
        let field = GfField::new(m)?;
        let n_full = field.order();
        let generator = generator_polynomial(&field, t);
        let deg = generator.len() - 1;
        if deg + shorten >= n_full {
            return Err(Error::InfeasibleCode(format!(
                "m={m}, t={t}, shorten={shorten} leaves no message bits"
            )));
        }
        let spec = Self { field, t, shorten, generator };
        assert!(spec.generator_divides_cyclic(), "generator must divide x^n + 1");
        Ok(spec)
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    /// Full (unshortened) length `2^m − 1`.
    pub fn n_full(&self) -> usize {
        self.field.order()
    }

    /// Transmitted length `Cn`.
    pub fn cn(&self) -> usize {
        self.n_full() - self.shorten
    }

    /// Message length `Ck`.
    pub fn ck(&self) -> usize {
        self.n_full() - self.parity_len() - self.shorten
    }

    /// Designed correction capability `Ct`.
    pub fn ct(&self) -> usize {
        self.t
    }

    pub fn shorten(&self) -> usize {
        self.shorten
    }

    pub fn parity_len(&self) -> usize {
        self.generator.len() - 1
    }

    pub fn generator(&self) -> &[bool] {
        &self.generator
    }

    fn generator_divides_cyclic(&self) -> bool {
        // x^n + 1 mod g
        let n = self.n_full();
        let mut dividend = vec![false; n + 1];
        dividend[0] = true;
        dividend[n] = true;
        poly2_rem(&dividend, &self.generator).iter().all(|&b| !b)
    }

    /// Systematic encoding: message bits followed by the parity of
    /// `x^(deg g)·msg mod g`.
    pub fn encode(&self, msg: &[bool]) -> Result<Vec<bool>> {
        if msg.len() != self.ck() {
            return Err(Error::Encode(format!("expected {} message bits, got {}", self.ck(), msg.len())));
        }
        let r = self.parity_len();
        let g = &self.generator;
        let mut rem = vec![false; r];
        for &bit in msg {
            let feedback = bit ^ rem[r - 1];
            rem.copy_within(0..r - 1, 1);
            rem[0] = false;
            if feedback {
                for (slot, &gi) in rem.iter_mut().zip(&g[..r]) {
                    *slot ^= gi;
                }
            }
        }
        let mut word = msg.to_vec();
        word.extend(rem.iter().rev());
        Ok(word)
    }

    /// `S_1 .. S_2t` of a transmitted word.
    pub fn syndromes(&self, word: &[bool]) -> Vec<u16> {
        let cn = self.cn();
        let f = &self.field;
        let mut s = vec![0u16; 2 * self.t];
        for (j, _) in word.iter().enumerate().filter(|(_, &b)| b) {
            let power = (cn - 1 - j) as i64;
            for (i, si) in s.iter_mut().enumerate() {
                *si ^= f.alpha_pow((i as i64 + 1) * power);
            }
        }
        s
    }

    /// Decodes a transmitted word into `(message, corrected bit count)`.
    ///
    /// Returns [`Error::DecodeFailure`] when the locator's roots do not match
    /// its degree inside the transmitted positions.
    pub fn decode(&self, received: &[bool]) -> Result<(Vec<bool>, usize)> {
        if received.len() != self.cn() {
            return Err(Error::Decode(format!("expected {} bits, got {}", self.cn(), received.len())));
        }
        let syn = self.syndromes(received);
        if syn.iter().all(|&s| s == 0) {
            return Ok((received[..self.ck()].to_vec(), 0));
        }
        let locator = berlekamp_massey(&self.field, &syn);
        let degree = locator.len() - 1;
        if degree > self.t {
            return Err(Error::DecodeFailure);
        }
        let cn = self.cn();
        let f = &self.field;
        let mut word = received.to_vec();
        let mut found = 0;
        for power in 0..cn {
            // σ(α^-p) == 0 marks an error at x^p
            let x = f.alpha_pow(-(power as i64));
            let mut acc = 0u16;
            let mut xp = 1u16;
            for &c in &locator {
                acc ^= f.mul(c, xp);
                xp = f.mul(xp, x);
            }
            if acc == 0 {
                found += 1;
                let j = cn - 1 - power;
                word[j] = !word[j];
            }
        }
        if found != degree {
            return Err(Error::DecodeFailure);
        }
        Ok((word[..self.ck()].to_vec(), found))
    }
}

/// Error-locator polynomial `σ` (index = power, `σ_0 = 1`), trimmed to its degree.
fn berlekamp_massey(f: &GfField, syn: &[u16]) -> Vec<u16> {
    let mut c = vec![1u16];
    let mut b = vec![1u16];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = 1u16;
    for n in 0..syn.len() {
        let mut d = syn[n];
        for i in 1..=l.min(c.len() - 1) {
            d ^= f.mul(c[i], syn[n - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = f.mul(d, f.inv(last));
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + shift] ^= f.mul(coef, bi);
        }
        if 2 * l <= n {
            b = c;
            l = n + 1 - l;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    c.truncate(l + 1);
    c.resize(l + 1, 0);
    c
}

/// `lcm` of the minimal polynomials of `α, α^2, .., α^(2t)`.
fn generator_polynomial(f: &GfField, t: usize) -> Vec<bool> {
    let n = f.order();
    let mut seen = vec![false; n];
    // product over GF(2^m), coefficients end up in {0, 1}
    let mut g: Vec<u16> = vec![1];
    for i in 1..=2 * t {
        let i = i % n;
        if seen[i] {
            continue;
        }
        let mut c = i;
        loop {
            seen[c] = true;
            // multiply by (x + α^c)
            let root = f.alpha_pow(c as i64);
            let mut next = vec![0u16; g.len() + 1];
            for (k, &gk) in g.iter().enumerate() {
                next[k + 1] ^= gk;
                next[k] ^= f.mul(gk, root);
            }
            g = next;
            c = (c * 2) % n;
            if c == i {
                break;
            }
        }
    }
    g.into_iter()
        .map(|c| {
            debug_assert!(c <= 1, "generator coefficient outside GF(2)");
            c == 1
        })
        .collect()
}

/// Remainder of binary polynomials (index = power).
fn poly2_rem(a: &[bool], g: &[bool]) -> Vec<bool> {
    let dg = g.len() - 1;
    let mut r = a.to_vec();
    for i in (dg..r.len()).rev() {
        if r[i] {
            for (k, &gk) in g.iter().enumerate() {
                r[i - dg + k] ^= gk;
            }
        }
    }
    r.truncate(dg);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_sanity() {
        for m in 2..=16 {
            let f = GfField::new(m).unwrap();
            assert_eq!(f.alpha_pow(f.order() as i64), 1);
            for j in 1..f.order() {
                assert_ne!(f.alpha_pow(j as i64), 1, "m={m} j={j}");
            }
        }
        assert!(GfField::with_polynomial(4, 0x1f).is_err());
    }

    #[test]
    fn hamming_15_11() {
        let c = BchSpec::new(4, 1, 0).unwrap();
        assert_eq!((c.cn(), c.ck(), c.ct()), (15, 11, 1));
        // g = x^4 + x + 1
        assert_eq!(c.generator(), &[true, true, false, false, true]);
    }

    #[test]
    fn bch_15_7_2_generator() {
        let c = BchSpec::new(4, 2, 0).unwrap();
        assert_eq!((c.cn(), c.ck()), (15, 7));
        // (x^4+x+1)(x^4+x^3+x^2+x+1) = x^8 + x^7 + x^6 + x^4 + 1
        let g: Vec<usize> = c.generator().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        assert_eq!(g, vec![0, 4, 6, 7, 8]);
    }

    #[test]
    fn long_division_by_hand() {
        // msg x^10 (first message bit) -> x^14 mod (x^4+x+1) = x^3 + 1
        // (x^4 = x+1, x^8 = x^2+1, x^12 = x^3+x^2+x+1, x^14 = x^3+1)
        let c = BchSpec::new(4, 1, 0).unwrap();
        let mut msg = vec![false; 11];
        msg[0] = true;
        let cw = c.encode(&msg).unwrap();
        // parity bits are x^3, x^2, x^1, x^0
        assert_eq!(&cw[11..], &[true, false, false, true]);
        assert!(c.syndromes(&cw).iter().all(|&s| s == 0));
    }

    #[test]
    fn wrong_lengths() {
        let c = BchSpec::new(4, 1, 0).unwrap();
        assert!(c.encode(&[false; 10]).is_err());
        assert!(c.decode(&[false; 14]).is_err());
    }

    #[test]
    fn infeasible() {
        assert!(matches!(BchSpec::new(4, 1, 11), Err(Error::InfeasibleCode(_))));
        assert!(BchSpec::new(4, 8, 0).is_err());
    }

    #[test]
    fn clean_codeword_decodes_without_corrections() {
        let c = BchSpec::new(9, 9, 170).unwrap();
        let msg: Vec<bool> = (0..c.ck()).map(|i| i % 3 == 0).collect();
        let cw = c.encode(&msg).unwrap();
        assert_eq!(c.decode(&cw).unwrap(), (msg, 0));
    }

    #[test]
    fn shortened_code_corrects_t() {
        let c = BchSpec::new(9, 9, 170).unwrap();
        assert_eq!((c.cn(), c.ck()), (341, 260));
        let msg: Vec<bool> = (0..c.ck()).map(|i| i % 5 == 1).collect();
        let mut cw = c.encode(&msg).unwrap();
        for p in [0, 17, 100, 200, 259, 260, 300, 339, 340] {
            cw[p] = !cw[p];
        }
        assert_eq!(c.decode(&cw).unwrap(), (msg, 9));
    }

    #[test]
    fn published_code_dimensions() {
        let c = BchSpec::new(9, 30, 0).unwrap();
        assert_eq!((c.cn(), c.ck(), c.ct()), (511, 259, 30));
        let c = BchSpec::new(10, 106, 0).unwrap();
        assert_eq!((c.cn(), c.ck(), c.ct()), (1023, 258, 106));
        let c = BchSpec::new(9, 9, 0).unwrap();
        assert_eq!((c.cn(), c.ck()), (511, 430));
    }
}
