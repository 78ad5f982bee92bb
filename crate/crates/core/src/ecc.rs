//! Error-correction pipelines for the 256-bit shared secret: ATE alone, or an
//! outer BCH code concatenated with an inner ATE.
//!
//! Encoding chain: `secret ∥ msg_pad zeros → BCH → ∥ cw_pad zeros → ATE`.
//! Decoding reverses it and rejects words whose pad bits are not zero.

use std::fmt;
use std::str::FromStr;

use crate::ate::{ate_decode, ate_encode, AteParams};
use crate::bch::BchSpec;
use crate::error::{Error, Result};
use crate::ring::{ModPoly, ParamSet};

pub const SECRET_BITS: usize = 256;
pub const SECRET_BYTES: usize = SECRET_BITS / 8;

/// Named configurations: NewHope's plain ATE and the four concatenated options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EccOption {
    NewHope,
    Option1,
    Option2,
    Option3,
    Option4,
}

impl EccOption {
    pub const ALL: [EccOption; 5] =
        [EccOption::NewHope, EccOption::Option1, EccOption::Option2, EccOption::Option3, EccOption::Option4];

    pub fn id(self) -> &'static str {
        match self {
            EccOption::NewHope => "newhope",
            EccOption::Option1 => "option1",
            EccOption::Option2 => "option2",
            EccOption::Option3 => "option3",
            EccOption::Option4 => "option4",
        }
    }
}

impl fmt::Display for EccOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for EccOption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "newhope" | "ate" | "0" => Ok(EccOption::NewHope),
            "option1" | "1" => Ok(EccOption::Option1),
            "option2" | "2" => Ok(EccOption::Option2),
            "option3" | "3" => Ok(EccOption::Option3),
            "option4" | "4" => Ok(EccOption::Option4),
            other => Err(Error::InvalidParams(format!("unknown ECC option `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum EccScheme {
    AteOnly { m: usize },
    Concat { bch: BchSpec, m: usize, msg_pad: usize, cw_pad: usize },
}

impl EccScheme {
    pub fn ate_only(m: usize, params: &ParamSet) -> Result<Self> {
        let s = EccScheme::AteOnly { m };
        s.validate(params)?;
        Ok(s)
    }

    pub fn concat(bch: BchSpec, m: usize, msg_pad: usize, cw_pad: usize, params: &ParamSet) -> Result<Self> {
        let s = EccScheme::Concat { bch, m, msg_pad, cw_pad };
        s.validate(params)?;
        Ok(s)
    }

    pub fn for_option(option: EccOption, params: &ParamSet) -> Result<Self> {
        let n = params.n();
        let need = |want: usize| {
            if n == want {
                Ok(())
            } else {
                Err(Error::SchemeMismatch(format!("{option} requires n = {want}, got n = {n}")))
            }
        };
        match option {
            EccOption::NewHope => {
                if n < SECRET_BITS {
                    return Err(Error::SchemeMismatch(format!("n = {n} cannot carry {SECRET_BITS} bits")));
                }
                Self::ate_only(n / SECRET_BITS, params)
            }
            EccOption::Option1 => {
                need(1024)?;
                Self::concat(BchSpec::new(9, 9, 170)?, 3, 4, 0, params)
            }
            EccOption::Option2 => {
                need(1024)?;
                Self::concat(BchSpec::new(9, 30, 0)?, 2, 3, 1, params)
            }
            EccOption::Option3 => {
                need(1024)?;
                Self::concat(BchSpec::new(10, 106, 0)?, 1, 2, 1, params)
            }
            EccOption::Option4 => {
                need(512)?;
                Self::concat(BchSpec::new(9, 30, 0)?, 1, 3, 1, params)
            }
        }
    }

    pub fn validate(&self, params: &ParamSet) -> Result<()> {
        let used = self.ate_params().coefficients_used();
        if self.repetitions() == 0 || used > params.n() {
            return Err(Error::Capacity { needed: used, available: params.n() });
        }
        if let EccScheme::Concat { bch, msg_pad, .. } = self {
            if SECRET_BITS + msg_pad != bch.ck() {
                return Err(Error::SchemeMismatch(format!(
                    "256 + {msg_pad} pad bits != code dimension {}",
                    bch.ck()
                )));
            }
        }
        Ok(())
    }

    /// Short identifier: `ate<m>` or the matching option name.
    pub fn id(&self) -> String {
        match self {
            EccScheme::AteOnly { m } => format!("ate{m}"),
            EccScheme::Concat { bch, m, msg_pad, cw_pad } => {
                match (bch.n_full(), bch.ct(), bch.shorten(), m, msg_pad, cw_pad) {
                    (511, 9, 170, 3, 4, 0) => "option1".into(),
                    (511, 30, 0, 2, 3, 1) => "option2".into(),
                    (1023, 106, 0, 1, 2, 1) => "option3".into(),
                    (511, 30, 0, 1, 3, 1) => "option4".into(),
                    _ => format!("bch({},{},{})+ate{m}", bch.cn(), bch.ck(), bch.ct()),
                }
            }
        }
    }

    /// Parses `ate<m>` or an option name.
    pub fn from_id(id: &str, params: &ParamSet) -> Result<Self> {
        if let Some(m) = id.strip_prefix("ate") {
            let m = m.parse().map_err(|_| Error::InvalidParams(format!("bad scheme id `{id}`")))?;
            return Self::ate_only(m, params);
        }
        Self::for_option(id.parse()?, params)
    }

    pub fn repetitions(&self) -> usize {
        match self {
            EccScheme::AteOnly { m } | EccScheme::Concat { m, .. } => *m,
        }
    }

    /// Bits crossing the ATE channel per secret.
    pub fn channel_bits(&self) -> usize {
        match self {
            EccScheme::AteOnly { .. } => SECRET_BITS,
            EccScheme::Concat { bch, cw_pad, .. } => bch.cn() + cw_pad,
        }
    }

    /// Outer-code correction capability (0 for ATE only).
    pub fn correctable(&self) -> usize {
        match self {
            EccScheme::AteOnly { .. } => 0,
            EccScheme::Concat { bch, .. } => bch.ct(),
        }
    }

    pub fn ate_params(&self) -> AteParams {
        AteParams { m: self.repetitions(), block_len: self.channel_bits() }
    }

    /// Bits handed to the ATE encoder.
    pub fn encode_bits(&self, secret: &[bool]) -> Result<Vec<bool>> {
        if secret.len() != SECRET_BITS {
            return Err(Error::Encode(format!("secret must be {SECRET_BITS} bits")));
        }
        match self {
            EccScheme::AteOnly { .. } => Ok(secret.to_vec()),
            EccScheme::Concat { bch, msg_pad, cw_pad, .. } => {
                let mut msg = secret.to_vec();
                msg.resize(SECRET_BITS + msg_pad, false);
                let mut cw = bch.encode(&msg)?;
                cw.resize(cw.len() + cw_pad, false);
                Ok(cw)
            }
        }
    }

    /// Inverse of [`encode_bits`](Self::encode_bits) on hard-decided channel bits.
    pub fn decode_bits(&self, channel: &[bool]) -> Result<Vec<bool>> {
        match self {
            EccScheme::AteOnly { .. } => Ok(channel.to_vec()),
            EccScheme::Concat { bch, .. } => {
                let cn = bch.cn();
                if channel.len() < cn {
                    return Err(Error::Decode("channel word too short".into()));
                }
                if channel[cn..].iter().any(|&b| b) {
                    return Err(Error::DecodeFailure);
                }
                let (msg, _) = bch.decode(&channel[..cn])?;
                if msg[SECRET_BITS..].iter().any(|&b| b) {
                    return Err(Error::DecodeFailure);
                }
                Ok(msg[..SECRET_BITS].to_vec())
            }
        }
    }

    pub fn encode(&self, secret: &[bool], params: &ParamSet) -> Result<ModPoly> {
        self.validate(params)?;
        ate_encode(&self.encode_bits(secret)?, self.ate_params(), params)
    }

    pub fn decode(&self, v: &ModPoly) -> Result<Vec<bool>> {
        self.decode_bits(&ate_decode(v, self.ate_params())?)
    }
}

pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes.iter().flat_map(|&b| (0..8).map(move |i| (b >> i) & 1 == 1)).collect()
}

pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i)))
        .collect()
}
