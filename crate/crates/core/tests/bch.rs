use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use ringlab_core::bch::BchSpec;
use ringlab_core::Error;

/// `(m, t, shorten)` of the published codes: BCH(341,260,9), its parent
/// BCH(511,430,9), BCH(511,259,30) and BCH(1023,258,106).
const REFERENCE_CODES: [(u32, usize, usize); 4] = [(9, 9, 170), (9, 9, 0), (9, 30, 0), (10, 106, 0)];

fn random_bits(rng: &mut ChaCha20Rng, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.gen()).collect()
}

#[test]
fn option_codes_correct_up_to_t_errors() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    for (m, t, shorten) in REFERENCE_CODES {
        let code = BchSpec::new(m, t, shorten).unwrap();
        for trial in 0..1000 {
            let msg = random_bits(&mut rng, code.ck());
            let mut word = code.encode(&msg).unwrap();
            // Every tenth trial uses exactly t errors.
            let weight = if trial % 10 == 0 { t } else { rng.gen_range(0..=t) };
            for pos in sample(&mut rng, code.cn(), weight) {
                word[pos] = !word[pos];
            }
            let (decoded, fixed) = code.decode(&word).unwrap();
            assert_eq!(decoded, msg, "BCH({},{},{}) trial {trial}", code.cn(), code.ck(), t);
            assert_eq!(fixed, weight);
        }
    }
}

#[test]
fn codewords_form_a_linear_code() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for (m, t, shorten) in REFERENCE_CODES {
        let code = BchSpec::new(m, t, shorten).unwrap();
        let a = random_bits(&mut rng, code.ck());
        let b = random_bits(&mut rng, code.ck());
        let sum: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ca = code.encode(&a).unwrap();
        let cb = code.encode(&b).unwrap();
        let xor: Vec<bool> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        assert_eq!(xor, code.encode(&sum).unwrap());
        assert!(code.syndromes(&xor).iter().all(|&s| s == 0));
        assert!(code.encode(&vec![false; code.ck()]).unwrap().iter().all(|&b| !b));
    }
}

fn patterns(n: usize, weight: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, weight, &mut Vec::new(), &mut out);
    out
}

#[test]
fn bch_15_7_2_exhaustive() {
    let code = BchSpec::new(4, 2, 0).unwrap();
    assert_eq!((code.cn(), code.ck(), code.ct()), (15, 7, 2));
    for m in 0u32..128 {
        let msg: Vec<bool> = (0..7).map(|i| (m >> i) & 1 == 1).collect();
        let cw = code.encode(&msg).unwrap();
        for w in 0..=2 {
            for pat in patterns(15, w) {
                let mut word = cw.clone();
                pat.iter().for_each(|&i| word[i] = !word[i]);
                assert_eq!(code.decode(&word).unwrap(), (msg.clone(), w), "msg {m} errors {pat:?}");
            }
        }
        // Beyond t: either a reported failure or a codeword within distance t.
        for pat in patterns(15, 3) {
            let mut word = cw.clone();
            pat.iter().for_each(|&i| word[i] = !word[i]);
            match code.decode(&word) {
                Err(Error::DecodeFailure) => {}
                Ok((other, fixed)) => {
                    let re = code.encode(&other).unwrap();
                    let dist = re.iter().zip(&word).filter(|(a, b)| a != b).count();
                    assert!(fixed <= 2 && dist == fixed, "msg {m} errors {pat:?}");
                    assert_ne!(other, msg);
                }
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
}

#[test]
fn beyond_capability_never_panics() {
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    for (m, t, shorten) in REFERENCE_CODES {
        let code = BchSpec::new(m, t, shorten).unwrap();
        let mut failures = 0;
        for _ in 0..100 {
            let msg = random_bits(&mut rng, code.ck());
            let mut word = code.encode(&msg).unwrap();
            let weight = t + 1 + rng.gen_range(0..t);
            for pos in sample(&mut rng, code.cn(), weight) {
                word[pos] = !word[pos];
            }
            match code.decode(&word) {
                Err(Error::DecodeFailure) => failures += 1,
                Ok((other, _)) => assert_ne!(other, msg),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(failures > 0);
    }
}
