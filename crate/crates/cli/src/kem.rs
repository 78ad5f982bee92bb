use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use ringlab_analyzer::{binomial_z, predict, roundtrips, Analyzer};
use ringlab_core::kem::{
    kem_decapsulate, kem_encapsulate, kem_keygen, read_key_file, write_key_file, Ciphertext, KemConfig, KemSecretKey,
    PublicKey,
};
use serde_json::json;

use crate::args::{config_json, parse_seed, DecapsArgs, EncapsArgs, KeygenArgs, RoundtripArgs};
use crate::error::{CliError, Result};
use crate::output::{csv_provenance, emit, prob_text, provenance, read_bytes, write_bytes};

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut p = prefix.as_os_str().to_owned();
    p.push(".");
    p.push(ext);
    PathBuf::from(p)
}

fn load(path: &Path, kind: &str) -> Result<(KemConfig, Vec<u8>)> {
    let (header, body) =
        read_key_file(&read_bytes(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if header.kind != kind {
        return Err(CliError::Usage(format!("{} holds a {} file, expected {kind}", path.display(), header.kind)));
    }
    Ok((KemConfig::from_header(&header)?, body))
}

fn malformed(path: &Path) -> impl Fn(ringlab_core::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

pub fn keygen(args: &KeygenArgs) -> Result<()> {
    let cfg = args.scheme.resolve()?;
    let seed = parse_seed(&args.seed)?;
    let (pk, sk) = kem_keygen(&seed, &cfg.params)?;
    let (pk_bytes, sk_bytes) = (pk.to_bytes(), sk.to_bytes());
    if let Some(prefix) = &args.out {
        write_bytes(&with_ext(prefix, "pk"), &write_key_file(&cfg.header("public"), &pk_bytes))?;
        write_bytes(&with_ext(prefix, "sk"), &write_key_file(&cfg.header("secret"), &sk_bytes))?;
    }
    let mut out = csv_provenance(&provenance("kem keygen", config_json(&cfg)));
    out += &format!("public_key: {}\nsecret_key: {}\n", hex::encode(pk_bytes), hex::encode(sk_bytes));
    emit(None, &out)
}

fn os_entropy() -> Result<[u8; 32]> {
    let mut buf = [0u8; 32];
    File::open("/dev/urandom")?.read_exact(&mut buf)?;
    Ok(buf)
}

pub fn encaps(args: &EncapsArgs) -> Result<()> {
    let (cfg, body) = load(&args.pk, "public")?;
    let pk = PublicKey::from_bytes(&body, &cfg.params).map_err(malformed(&args.pk))?;
    let entropy = match &args.entropy {
        Some(h) => parse_seed(h)?,
        None => os_entropy()?,
    };
    let (ct, key) = kem_encapsulate(&pk, &entropy, &cfg)?;
    if let Some(prefix) = &args.out {
        write_bytes(&with_ext(prefix, "ct"), &write_key_file(&cfg.header("ciphertext"), &ct.to_bytes()))?;
    }
    let mut out = csv_provenance(&provenance("kem encaps", config_json(&cfg)));
    out += &format!("ciphertext: {}\nshared_key: {}\n", hex::encode(ct.to_bytes()), hex::encode(key));
    emit(None, &out)
}

pub fn decaps(args: &DecapsArgs) -> Result<()> {
    let (cfg, sk_body) = load(&args.sk, "secret")?;
    let (pk_cfg, pk_body) = load(&args.pk, "public")?;
    let (ct_cfg, ct_body) = load(&args.ct, "ciphertext")?;
    if cfg.header("") != pk_cfg.header("") || cfg.header("") != ct_cfg.header("") {
        return Err(CliError::Usage("key and ciphertext files use different parameters".into()));
    }
    let sk = KemSecretKey::from_bytes(&sk_body, &cfg.params).map_err(malformed(&args.sk))?;
    let pk = PublicKey::from_bytes(&pk_body, &cfg.params).map_err(malformed(&args.pk))?;
    let ct = Ciphertext::from_bytes(&ct_body, &cfg).map_err(malformed(&args.ct))?;
    let key = kem_decapsulate(&sk, &pk, &ct, &cfg);
    let mut out = csv_provenance(&provenance("kem decaps", config_json(&cfg)));
    out += &format!("shared_key: {}\n", hex::encode(key));
    emit(None, &out)
}

pub fn roundtrip(args: &RoundtripArgs) -> Result<()> {
    let cfg = args.scheme.resolve()?;
    let stats = roundtrips(&cfg, args.trials, args.seed)?;
    let mut settings = config_json(&cfg);
    settings["trials"] = json!(args.trials);
    settings["seed"] = json!(args.seed);
    let mut out = csv_provenance(&provenance("kem roundtrip", settings));
    out += &format!("trials: {}\nfailures: {}\n", stats.trials, stats.block_failures);
    out += &format!("bit_errors: {} of {} channel bits\n", stats.bit_errors, stats.channel_bits);
    out += &format!("failure_rate: {:.6e}\nbit_error_rate: {:.6e}\n", stats.block_failure_rate(), stats.bit_error_rate());
    if !args.no_predict {
        let pred = predict(&mut Analyzer::new(args.precision.get()?), &cfg)?;
        let (pb, pf) = (pred.bit_error.to_f64(), pred.block_failure.to_f64());
        out += &format!("predicted_failure_rate: {}\npredicted_bit_error_rate: {}\n", prob_text(&pred.block_failure), prob_text(&pred.bit_error));
        if pf > 0.0 && pf < 1.0 && pb > 0.0 {
            let zf = binomial_z(stats.block_failures, stats.trials, pf);
            let zb = binomial_z(stats.bit_errors, stats.channel_bits, pb);
            out += &format!("z_failures: {zf:.3}\nz_bit_errors: {zb:.3}\n");
        }
    }
    emit(None, &out)
}
