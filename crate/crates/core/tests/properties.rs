use proptest::prelude::*;

use lsc_core::codes::CodeSpec;
use lsc_core::container::Container;
use lsc_core::gf::FieldSpec;
use lsc_core::lsc::{decode_list, encode};
use lsc_core::scheme::{derive_complement, two_phase_encrypt, InnerCipher};
use lsc_core::secrecy::{LeakageAnalyzer, SourceModel};
use num_rational::Ratio;

fn small_code() -> impl Strategy<Value = (u32, usize, usize, u64)> {
    (prop::sample::select(vec![2u32, 3, 5]), 2usize..=4)
        .prop_flat_map(|(q, n)| (Just(q), Just(n), 1..n, any::<u64>()))
}

fn pmf(q: u32) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, q as usize).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_hold_for_random_codes_and_sources(
        (q, n, k, seed) in small_code(),
        weights in prop::collection::vec(0.05f64..1.0, 5),
        frac in 0.0f64..0.9,
    ) {
        let f = FieldSpec::prime(q).unwrap();
        let code = CodeSpec::random_full_rank(&f, n, k, seed).unwrap();
        let w = &weights[..q as usize];
        let s: f64 = w.iter().sum();
        let src = SourceModel::new(&f, w.iter().map(|x| x / s).collect()).unwrap();
        let eps = frac * src.entropy_bits();
        let r = LeakageAnalyzer::new(&code, &src).unwrap().report(eps).unwrap();
        prop_assert!(r.measured_total_leak <= r.leakage_bound + 1e-9);
        prop_assert!(r.mu_epsilon_f64() <= r.secrecy_bound + 1e-12);
        prop_assert!(r.mu_zero <= r.mu_epsilon);
    }

    #[test]
    fn mds_codes_hide_k_symbols((q, n, k, seed) in small_code()) {
        let f = FieldSpec::prime(q).unwrap();
        let code = CodeSpec::random_full_rank(&f, n, k, seed).unwrap();
        let mu = LeakageAnalyzer::new(&code, &SourceModel::uniform(&f)).unwrap().mu_epsilon(0.0).unwrap();
        if code.is_mds().unwrap() {
            prop_assert_eq!(mu, Ratio::new(k, n));
        } else {
            prop_assert!(mu < Ratio::new(k, n));
        }
    }

    #[test]
    fn uniform_output_entropy_is_redundancy((q, n, k, seed) in small_code()) {
        let f = FieldSpec::prime(q).unwrap();
        let code = CodeSpec::random_full_rank(&f, n, k, seed).unwrap();
        let src = SourceModel::uniform(&f);
        let an = LeakageAnalyzer::new(&code, &src).unwrap();
        let want = (n - k) as f64 * (q as f64).log2();
        prop_assert!((an.output_entropy_bits() - want).abs() < 1e-9);
    }

    #[test]
    fn coset_mates_share_phase_one_bytes(
        (q, n, k, seed) in small_code(),
        xs in prop::collection::vec(0u64..5, 4),
        pick in any::<prop::sample::Index>(),
        key_seed: u64,
    ) {
        let f = FieldSpec::prime(q).unwrap();
        let code = CodeSpec::random_full_rank(&f, n, k, seed).unwrap();
        let d = derive_complement(&code).unwrap();
        let x: Vec<_> = xs[..n].iter().map(|&v| f.reduce(v)).collect();
        let s = encode(&code, &x).unwrap();
        let mates: Vec<_> = decode_list(&code, &s).unwrap().members().unwrap().collect();
        let mate = pick.get(&mates);
        let cipher = InnerCipher::PrgStream { seed: key_seed };
        let a = two_phase_encrypt(&x, &code, &d, &cipher).unwrap();
        let b = two_phase_encrypt(mate, &code, &d, &cipher).unwrap();
        prop_assert_eq!(
            Container::phase1(&code, &a).to_bytes(),
            Container::phase1(&code, &b).to_bytes()
        );
    }

    #[test]
    fn source_entropy_is_bounded_by_log_q(w in pmf(5)) {
        let f = FieldSpec::prime(5).unwrap();
        let h = SourceModel::new(&f, w).unwrap().entropy_bits();
        prop_assert!(h >= 0.0 && h <= 5f64.log2() + 1e-12);
    }
}
