use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use super::{ModPoly, ParamSet};

/// Deterministic extendable-output stream (SHAKE256 over `seed ∥ domain`).
///
/// Bits are consumed least-significant first within each byte.
pub struct Xof {
    reader: <Shake256 as ExtendableOutput>::Reader,
    buf: [u8; 136],
    pos: usize,
    bit_buf: u64,
    bit_count: u32,
}

impl Xof {
    pub fn new(seed: &[u8]) -> Self {
        let mut h = Shake256::default();
        h.update(seed);
        Self { reader: h.finalize_xof(), buf: [0; 136], pos: 136, bit_buf: 0, bit_count: 0 }
    }

    /// A stream separated from other uses of the same seed by a one-byte tag.
    pub fn with_domain(seed: &[u8], domain: u8) -> Self {
        let mut h = Shake256::default();
        h.update(seed);
        h.update(&[domain]);
        Self { reader: h.finalize_xof(), buf: [0; 136], pos: 136, bit_buf: 0, bit_count: 0 }
    }

    pub fn next_byte(&mut self) -> u8 {
        if self.pos == self.buf.len() {
            self.reader.read(&mut self.buf);
            self.pos = 0;
        }
        let b = self.buf[self.pos];
        self.pos += 1;
        b
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        for b in out {
            *b = self.next_byte();
        }
    }

    /// Next `count <= 32` bits as an integer, first bit in the lowest position.
    pub fn next_bits(&mut self, count: u32) -> u32 {
        debug_assert!(count <= 32);
        while self.bit_count < count {
            self.bit_buf |= (self.next_byte() as u64) << self.bit_count;
            self.bit_count += 8;
        }
        let v = (self.bit_buf & ((1u64 << count) - 1)) as u32;
        self.bit_buf >>= count;
        self.bit_count -= count;
        v
    }
}

/// Centered binomial polynomial: each coefficient is `Σ b_i − Σ b'_i` over
/// `k` bits each, taking `k` bits for the positive half then `k` for the
/// negative half, coefficient by coefficient.
pub fn sample_binomial(xof: &mut Xof, params: &ParamSet) -> ModPoly {
    let k = params.k();
    let coeffs = (0..params.n())
        .map(|_| {
            let mut pos = 0i64;
            let mut neg = 0i64;
            for _ in 0..k {
                pos += xof.next_bits(1) as i64;
            }
            for _ in 0..k {
                neg += xof.next_bits(1) as i64;
            }
            params.reduce(pos - neg)
        })
        .collect();
    ModPoly::from_raw(params, coeffs)
}

/// Uniform polynomial by rejection: draw `⌈log2 q⌉`-bit chunks, reject `>= q`.
pub fn sample_uniform(xof: &mut Xof, params: &ParamSet) -> ModPoly {
    let bits = params.q_bits();
    let q = params.q();
    let mut coeffs = Vec::with_capacity(params.n());
    while coeffs.len() < params.n() {
        let c = xof.next_bits(bits);
        if c < q {
            coeffs.push(c);
        }
    }
    ModPoly::from_raw(params, coeffs)
}
