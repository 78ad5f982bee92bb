use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use ringlab_core::kem::keygen;
use ringlab_core::ring::{sample_binomial, sample_uniform};
use ringlab_core::{ModPoly, ParamSet, Xof};

/// NTT-friendly parameter sets exercised alongside the defaults.
const TOY: [(usize, u32); 5] = [(16, 257), (32, 257), (128, 257), (256, 7681), (512, 12289)];

fn random_poly(rng: &mut ChaCha20Rng, params: &ParamSet) -> ModPoly {
    let coeffs = (0..params.n()).map(|_| rng.gen_range(0..params.q())).collect();
    ModPoly::from_coeffs(params, coeffs).unwrap()
}

fn check_ntt_against_schoolbook(params: &ParamSet, pairs: usize, seed: u64) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let a = random_poly(&mut rng, params);
        let b = random_poly(&mut rng, params);
        assert_eq!(a.mul_ntt(&b).unwrap(), a.mul_schoolbook(&b).unwrap(), "{params:?}");
        assert_eq!(a.ntt_forward().unwrap().ntt_inverse().unwrap(), a);
    }
}

#[test]
fn ntt_matches_schoolbook_at_n1024() {
    check_ntt_against_schoolbook(&ParamSet::newhope1024(), 100, 1);
}

#[test]
fn ntt_matches_schoolbook_on_toy_presets() {
    for (i, (n, q)) in TOY.into_iter().enumerate() {
        check_ntt_against_schoolbook(&ParamSet::new(n, q, 2).unwrap(), 100, 10 + i as u64);
    }
}

#[test]
fn constant_transforms_to_constant_vector() {
    let p = ParamSet::newhope1024();
    let c = ModPoly::constant(&p, 4321);
    assert!(c.ntt_forward().unwrap().coeffs().iter().all(|&x| x == 4321));
}

#[test]
fn binomial_sampler_frequencies() {
    // k = 2: {0: 6/16, ±1: 4/16, ±2: 1/16} from the 16 equally likely bit patterns.
    let params = ParamSet::new(1024, 12289, 2).unwrap();
    let mut counts = [0u64; 5];
    let polys = 1000;
    for i in 0..polys {
        let p = sample_binomial(&mut Xof::with_domain(&(i as u32).to_le_bytes(), 1), &params);
        for x in p.centered() {
            assert!(x.abs() <= 2);
            counts[(x + 2) as usize] += 1;
        }
    }
    let total = (polys * params.n()) as f64;
    for (c, want) in counts.iter().zip([1.0, 4.0, 6.0, 4.0, 1.0]) {
        let p = want / 16.0;
        let sigma = (total * p * (1.0 - p)).sqrt();
        assert!((*c as f64 - total * p).abs() < 3.0 * sigma, "counts {counts:?}");
    }
}

#[test]
fn uniform_sampler_chi_square() {
    let params = ParamSet::newhope1024();
    let q = params.q() as u64;
    let buckets = 16u64;
    let mut counts = vec![0u64; buckets as usize];
    let polys = 977; // ≈ 10^6 coefficients
    for i in 0..polys {
        let p = sample_uniform(&mut Xof::with_domain(&(i as u32).to_le_bytes(), 0), &params);
        for &x in p.coeffs() {
            assert!((x as u64) < q);
            counts[(x as u64 * buckets / q) as usize] += 1;
        }
    }
    let total = (polys * params.n()) as f64;
    let chi2: f64 = (0..buckets)
        .map(|b| {
            // Values x with ⌊16x/q⌋ = b.
            let width = ((b + 1) * q).div_ceil(buckets) - (b * q).div_ceil(buckets);
            let expect = total * width as f64 / q as f64;
            (counts[b as usize] as f64 - expect).powi(2) / expect
        })
        .sum();
    // Upper 1% point of χ² with 15 degrees of freedom.
    assert!(chi2 < 30.578, "chi2 = {chi2}");
}

#[test]
fn public_key_relation_via_schoolbook() {
    for (n, q) in [(16, 257), (256, 7681)] {
        let params = ParamSet::new(n, q, 4).unwrap();
        let kp = keygen(&[7u8; 32], &params).unwrap();
        let a = sample_uniform(&mut Xof::with_domain(&kp.pk.seed, 0), &params).ntt_inverse().unwrap();
        let s = kp.sk.s_hat.ntt_inverse().unwrap();
        let b = kp.pk.b_hat.ntt_inverse().unwrap();
        let e = b.sub(&a.mul_schoolbook(&s).unwrap()).unwrap();
        assert!(e.centered().iter().all(|x| x.abs() <= 4));
        assert!(s.centered().iter().all(|x| x.abs() <= 4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ntt_roundtrip(seed in any::<u64>(), which in 0usize..TOY.len()) {
        let (n, q) = TOY[which];
        let params = ParamSet::new(n, q, 2).unwrap();
        let a = random_poly(&mut ChaCha20Rng::seed_from_u64(seed), &params);
        prop_assert_eq!(a.ntt_forward().unwrap().ntt_inverse().unwrap(), a);
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let params = ParamSet::new(16, 257, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (a, b, c) = (random_poly(&mut rng, &params), random_poly(&mut rng, &params), random_poly(&mut rng, &params));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a.clone());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn samplers_are_deterministic_and_bounded(seed in any::<[u8; 8]>(), k in 0u32..12) {
        let params = ParamSet::new(256, 7681, k).unwrap();
        let a = sample_binomial(&mut Xof::new(&seed), &params);
        prop_assert_eq!(&a, &sample_binomial(&mut Xof::new(&seed), &params));
        prop_assert!(a.centered().iter().all(|x| x.unsigned_abs() <= k as u64));
        let u = sample_uniform(&mut Xof::new(&seed), &params);
        prop_assert_eq!(u, sample_uniform(&mut Xof::new(&seed), &params));
    }
}
