//! NewHope-style IND-CPA encryption and a Fujisaki–Okamoto KEM on top.
//!
//! XOF streams are separated by one-byte domain tags: `0` for `â`, `1`/`2`
//! for `s`/`e` at key generation, `3`/`4`/`5` for `s'`/`e'`/`e''` at
//! encryption. Public key bytes are `b̂` packed at `⌈log2 q⌉` bits followed
//! by the 32-byte public seed; ciphertext bytes are packed `û` followed by
//! packed `h`.

use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Digest, Sha3_256, Shake256};

use crate::codec::{
    compress, decompress, pack_compressed, pack_poly, packed_len, unpack_compressed, unpack_poly,
    CompressionRates, PackedPoly, Rate,
};
use crate::ecc::{bits_to_bytes, bytes_to_bits, EccScheme, SECRET_BYTES};
use crate::error::{Error, Result};
use crate::ring::{sample_binomial, sample_uniform, ModPoly, ParamSet, Xof};

const DOMAIN_A: u8 = 0;
const DOMAIN_S: u8 = 1;
const DOMAIN_E: u8 = 2;
const DOMAIN_S1: u8 = 3;
const DOMAIN_E1: u8 = 4;
const DOMAIN_E2: u8 = 5;

pub type Seed = [u8; 32];

/// Everything that fixes the shape of keys and ciphertexts.
#[derive(Debug, Clone)]
pub struct KemConfig {
    pub params: ParamSet,
    pub rates: CompressionRates,
    pub scheme: EccScheme,
}

impl KemConfig {
    pub fn new(params: ParamSet, rates: CompressionRates, scheme: EccScheme) -> Result<Self> {
        params.ntt_tables()?;
        rates.validate(&params)?;
        scheme.validate(&params)?;
        Ok(Self { params, rates, scheme })
    }

    pub fn ciphertext_len(&self) -> usize {
        crate::codec::ciphertext_size(&self.params, self.rates)
    }

    pub fn public_key_len(&self) -> usize {
        packed_len(self.params.n(), self.params.q_bits()) + 32
    }

    pub fn header(&self, kind: &str) -> KeyFileHeader {
        KeyFileHeader {
            kind: kind.to_string(),
            n: self.params.n(),
            q: self.params.q(),
            k: self.params.k(),
            r_v: self.rates.v.to_string(),
            r_u: self.rates.u.to_string(),
            scheme: self.scheme.id(),
        }
    }

    pub fn from_header(h: &KeyFileHeader) -> Result<Self> {
        let params = ParamSet::new(h.n, h.q, h.k)?;
        let rates = CompressionRates::new(h.r_v.parse()?, h.r_u.parse()?);
        let scheme = EccScheme::from_id(&h.scheme, &params)?;
        Self::new(params, rates, scheme)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    /// `b̂ = â∘ŝ + ê`, NTT domain.
    pub b_hat: ModPoly,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    /// `ŝ`, NTT domain.
    pub s_hat: ModPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub u: PackedPoly,
    pub h: PackedPoly,
}

impl PublicKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = pack_poly(&self.b_hat).bytes;
        out.extend_from_slice(&self.seed);
        out
    }

    pub fn from_bytes(bytes: &[u8], params: &ParamSet) -> Result<Self> {
        let poly_len = packed_len(params.n(), params.q_bits());
        if bytes.len() != poly_len + 32 {
            return Err(Error::Decode(format!("public key must be {} bytes", poly_len + 32)));
        }
        let b_hat = unpack_poly(
            &PackedPoly { bits_per_coeff: params.q_bits(), bytes: bytes[..poly_len].to_vec() },
            params,
        )?;
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&bytes[poly_len..]);
        Ok(Self { b_hat, seed })
    }

    fn digest(&self) -> [u8; 32] {
        Sha3_256::digest(self.to_bytes()).into()
    }
}

impl SecretKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        pack_poly(&self.s_hat).bytes
    }

    pub fn from_bytes(bytes: &[u8], params: &ParamSet) -> Result<Self> {
        if bytes.len() != packed_len(params.n(), params.q_bits()) {
            return Err(Error::Decode("secret key has the wrong length".into()));
        }
        let s_hat = unpack_poly(&PackedPoly { bits_per_coeff: params.q_bits(), bytes: bytes.to_vec() }, params)?;
        Ok(Self { s_hat })
    }
}

impl Ciphertext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.u.bytes.clone();
        out.extend_from_slice(&self.h.bytes);
        out
    }

    pub fn from_bytes(bytes: &[u8], config: &KemConfig) -> Result<Self> {
        let n = config.params.n();
        let ub = config.rates.u.bits(&config.params);
        let vb = config.rates.v.bits(&config.params);
        let ul = packed_len(n, ub);
        if bytes.len() != ul + packed_len(n, vb) {
            return Err(Error::Decode(format!("ciphertext must be {} bytes", config.ciphertext_len())));
        }
        Ok(Self {
            u: PackedPoly { bits_per_coeff: ub, bytes: bytes[..ul].to_vec() },
            h: PackedPoly { bits_per_coeff: vb, bytes: bytes[ul..].to_vec() },
        })
    }

    pub fn len(&self) -> usize {
        self.u.bytes.len() + self.h.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn shake(parts: &[&[u8]], out: &mut [u8]) {
    let mut h = Shake256::default();
    for p in parts {
        h.update(p);
    }
    h.finalize_xof().read(out);
}

/// Deterministic key generation from a 32-byte seed.
pub fn keygen(seed: &Seed, params: &ParamSet) -> Result<KeyPair> {
    let mut z = [0u8; 64];
    shake(&[seed], &mut z);
    let mut public_seed = [0u8; 32];
    public_seed.copy_from_slice(&z[..32]);
    let noise_seed = &z[32..];
    let a_hat = sample_uniform(&mut Xof::with_domain(&public_seed, DOMAIN_A), params);
    let s = sample_binomial(&mut Xof::with_domain(noise_seed, DOMAIN_S), params);
    let e = sample_binomial(&mut Xof::with_domain(noise_seed, DOMAIN_E), params);
    let s_hat = s.ntt_forward()?;
    let b_hat = a_hat.pointwise_mul(&s_hat)?.add(&e.ntt_forward()?)?;
    Ok(KeyPair { pk: PublicKey { b_hat, seed: public_seed }, sk: SecretKey { s_hat } })
}

/// Encrypts an already encoded message polynomial `v`.
/// Needs no coding scheme, so it also runs on rings too small to carry a secret.
pub fn encrypt_poly(pk: &PublicKey, v: &ModPoly, coin: &Seed, params: &ParamSet, rates: CompressionRates) -> Result<Ciphertext> {
    rates.validate(params)?;
    let a_hat = sample_uniform(&mut Xof::with_domain(&pk.seed, DOMAIN_A), params);
    let s1 = sample_binomial(&mut Xof::with_domain(coin, DOMAIN_S1), params);
    let e1 = sample_binomial(&mut Xof::with_domain(coin, DOMAIN_E1), params);
    let e2 = sample_binomial(&mut Xof::with_domain(coin, DOMAIN_E2), params);
    let t_hat = s1.ntt_forward()?;
    let u_hat = a_hat.pointwise_mul(&t_hat)?.add(&e1.ntt_forward()?)?;
    let v1 = pk.b_hat.pointwise_mul(&t_hat)?.ntt_inverse()?.add(&e2)?.add(v)?;
    Ok(Ciphertext {
        u: pack_compressed(&compress(&u_hat, rates.u), params)?,
        h: pack_compressed(&compress(&v1, rates.v), params)?,
    })
}

pub fn encrypt(pk: &PublicKey, secret: &[u8; SECRET_BYTES], coin: &Seed, config: &KemConfig) -> Result<Ciphertext> {
    let v = config.scheme.encode(&bytes_to_bits(secret), &config.params)?;
    encrypt_poly(pk, &v, coin, &config.params, config.rates)
}

/// `v'' = decompress(h) − INTT(decompress(û) ∘ ŝ)`.
pub fn decrypt_poly(sk: &SecretKey, ct: &Ciphertext, params: &ParamSet, rates: CompressionRates) -> Result<ModPoly> {
    let u = decompress(&unpack_compressed(&ct.u, rates.u, params)?, params)?;
    let v1 = decompress(&unpack_compressed(&ct.h, rates.v, params)?, params)?;
    v1.sub(&u.pointwise_mul(&sk.s_hat)?.ntt_inverse()?)
}

pub fn decrypt(sk: &SecretKey, ct: &Ciphertext, config: &KemConfig) -> Result<[u8; SECRET_BYTES]> {
    let bits = config.scheme.decode(&decrypt_poly(sk, ct, &config.params, config.rates)?)?;
    let mut out = [0u8; SECRET_BYTES];
    out.copy_from_slice(&bits_to_bytes(&bits));
    Ok(out)
}

/// Centered per-coefficient total noise `v'' − v`, given the true encoded `v`.
pub fn noise_tap(sk: &SecretKey, ct: &Ciphertext, v: &ModPoly, params: &ParamSet, rates: CompressionRates) -> Result<Vec<i64>> {
    Ok(decrypt_poly(sk, ct, params, rates)?.sub(v)?.centered())
}

/// KEM secret key: the PKE key plus the implicit-rejection secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KemSecretKey {
    pub sk: SecretKey,
    pub reject: Seed,
}

impl KemSecretKey {
    /// Packed `ŝ` followed by the 32-byte rejection secret.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.sk.to_bytes();
        out.extend_from_slice(&self.reject);
        out
    }

    pub fn from_bytes(bytes: &[u8], params: &ParamSet) -> Result<Self> {
        let split = bytes.len().checked_sub(32).ok_or_else(|| Error::Decode("secret key too short".into()))?;
        let mut reject = [0u8; 32];
        reject.copy_from_slice(&bytes[split..]);
        Ok(Self { sk: SecretKey::from_bytes(&bytes[..split], params)?, reject })
    }
}

pub fn kem_keygen(seed: &Seed, params: &ParamSet) -> Result<(PublicKey, KemSecretKey)> {
    let kp = keygen(seed, params)?;
    let mut reject = [0u8; 32];
    shake(&[seed, b"reject"], &mut reject);
    Ok((kp.pk, KemSecretKey { sk: kp.sk, reject }))
}

fn derive(mu: &[u8; SECRET_BYTES], pk: &PublicKey) -> (Seed, Seed) {
    let mut buf = [0u8; 64];
    shake(&[mu, &pk.digest()], &mut buf);
    let (mut kbar, mut coin) = ([0u8; 32], [0u8; 32]);
    kbar.copy_from_slice(&buf[..32]);
    coin.copy_from_slice(&buf[32..]);
    (kbar, coin)
}

fn final_key(prefix: &Seed, ct: &Ciphertext) -> Seed {
    let ct_hash: [u8; 32] = Sha3_256::digest(ct.to_bytes()).into();
    let mut key = [0u8; 32];
    shake(&[prefix, &ct_hash], &mut key);
    key
}

/// Encapsulates against `pk` using 32 bytes of caller-provided randomness.
pub fn kem_encapsulate(pk: &PublicKey, entropy: &Seed, config: &KemConfig) -> Result<(Ciphertext, Seed)> {
    let mut mu = [0u8; SECRET_BYTES];
    shake(&[entropy], &mut mu);
    let (kbar, coin) = derive(&mu, pk);
    let ct = encrypt(pk, &mu, &coin, config)?;
    let key = final_key(&kbar, &ct);
    Ok((ct, key))
}

/// Decapsulates with implicit rejection: a ciphertext that does not
/// re-encrypt identically yields a pseudorandom key derived from the
/// rejection secret.
pub fn kem_decapsulate(sk: &KemSecretKey, pk: &PublicKey, ct: &Ciphertext, config: &KemConfig) -> Seed {
    let mu = decrypt(&sk.sk, ct, config).unwrap_or([0u8; SECRET_BYTES]);
    let (kbar, coin) = derive(&mu, pk);
    let matches = encrypt(pk, &mu, &coin, config).map(|c| c == *ct).unwrap_or(false);
    if matches {
        final_key(&kbar, ct)
    } else {
        final_key(&sk.reject, ct)
    }
}

/// JSON header written on the first line of stored key/ciphertext files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyFileHeader {
    pub kind: String,
    pub n: usize,
    pub q: u32,
    pub k: u32,
    pub r_v: String,
    pub r_u: String,
    pub scheme: String,
}

pub fn write_key_file(header: &KeyFileHeader, body: &[u8]) -> Vec<u8> {
    let mut out = serde_json::to_vec(header).expect("header serializes");
    out.push(b'\n');
    out.extend_from_slice(body);
    out
}

pub fn read_key_file(bytes: &[u8]) -> Result<(KeyFileHeader, Vec<u8>)> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Decode("missing header line".into()))?;
    let header: KeyFileHeader =
        serde_json::from_slice(&bytes[..nl]).map_err(|e| Error::Decode(format!("bad header: {e}")))?;
    Ok((header, bytes[nl + 1..].to_vec()))
}

/// Rate of a ciphertext component; convenience for reports.
pub fn component_bits(rate: Rate, params: &ParamSet) -> u32 {
    rate.bits(params)
}
