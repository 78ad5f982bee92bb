//! Ring-LWE public-key encryption and KEM with configurable ciphertext
//! compression and concatenated error correction (repetition/threshold inner
//! code, BCH outer code).

pub mod ate;
pub mod bch;
pub mod codec;
pub mod ecc;
mod error;
pub mod kem;
pub mod preset;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{ModPoly, ParamSet, Xof};
