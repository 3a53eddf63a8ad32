use poolcore::centrality::{chi_pc, chi_pr, closed_form_profile, generic_profile, DEFAULT_TOL};
use poolcore::divergence::{beta_divergence_w, find_a, BetaAlt};
use poolcore::pooling::{
    chi_pool, fisher_pool, gamma_pool, ord_pool, pearson_pool, stouffer_pool, tippett, MethodKind, MethodSpec,
};
use poolcore::sampling::{gen_h3, AlternativeSpec};
use poolcore::specfun::{chi2_cdf, chi2_isf, chi2_quantile, chi2_sf, normal_cdf, normal_quantile};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p_vec(max_m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 1..=max_m)
}

fn closed_methods() -> Vec<MethodSpec> {
    let kinds = [
        MethodKind::Order { k: 1 },
        MethodKind::Stouffer,
        MethodKind::Fisher,
        MethodKind::Pearson,
        MethodKind::Gamma { k: 0.7, theta: 3.0 },
        MethodKind::Chi { kappa: 1e-4 },
        MethodKind::Chi { kappa: 0.3 },
        MethodKind::Chi { kappa: 2.0 },
        MethodKind::Chi { kappa: 50.0 },
        MethodKind::Chi { kappa: 1e4 },
    ];
    kinds.into_iter().map(|k| MethodSpec::new(k).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pooled_values_are_probabilities(p in p_vec(12)) {
        for m in closed_methods() {
            let v = m.pool(&p, None).unwrap();
            prop_assert!((0.0..=1.0).contains(&v), "{} gave {v}", m.label());
        }
    }

    #[test]
    fn symmetry_is_exact(p in p_vec(12), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut q = p.clone();
        q.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for m in closed_methods() {
            prop_assert_eq!(m.pool(&p, None).unwrap(), m.pool(&q, None).unwrap(), "{}", m.label());
        }
        let k = p.len().div_ceil(2);
        prop_assert_eq!(ord_pool(&p, k).unwrap(), ord_pool(&q, k).unwrap());
    }

    #[test]
    fn monotone_in_each_coordinate(p in p_vec(10), i in any::<prop::sample::Index>(), up in any::<bool>()) {
        let i = i.index(p.len());
        let mut q = p.clone();
        q[i] = if up { (q[i] + 1e-3).min(1.0) } else { (q[i] - 1e-3).max(0.0) };
        let (lo, hi) = if up { (&p, &q) } else { (&q, &p) };
        for m in closed_methods() {
            let a = m.pool(lo, None).unwrap();
            let b = m.pool(hi, None).unwrap();
            prop_assert!(a <= b, "{}: {a} > {b}", m.label());
        }
    }

    #[test]
    fn single_value_identity(x in 1e-12f64..1.0) {
        let p = [x];
        for v in [
            stouffer_pool(&p),
            fisher_pool(&p),
            pearson_pool(&p),
            gamma_pool(&p, 0.4, 2.5).unwrap(),
            chi_pool(&p, 1e-3).unwrap(),
            chi_pool(&p, 7.0).unwrap(),
            chi_pool(&p, 1e5).unwrap(),
            tippett(&p),
        ] {
            prop_assert!((v - x).abs() <= 1e-10, "{v} vs {x}");
        }
    }

    #[test]
    fn family_identities(p in p_vec(12)) {
        let fisher = fisher_pool(&p);
        prop_assert!((chi_pool(&p, 2.0).unwrap() - fisher).abs() <= 1e-12);
        prop_assert!((gamma_pool(&p, 1.0, 2.0).unwrap() - fisher).abs() <= 1e-12);
        let p_min = p.iter().copied().fold(1.0, f64::min);
        let closed = 1.0 - (1.0 - p_min).powi(p.len() as i32);
        prop_assert!((ord_pool(&p, 1).unwrap() - closed).abs() <= 1e-12);
        let flipped: Vec<f64> = p.iter().map(|x| 1.0 - x).collect();
        prop_assert!((pearson_pool(&p) - (1.0 - fisher_pool(&flipped))).abs() <= 1e-12);
    }

    #[test]
    fn central_level_dominates_marginal(ln_kappa in -9.0f64..9.0, m in 2usize..=20, alpha in 0.005f64..0.2) {
        let kappa = ln_kappa.exp();
        let pc = chi_pc(kappa, m, alpha).unwrap();
        let pr = chi_pr(kappa, m, alpha).unwrap();
        prop_assert!(pc >= pr, "κ={kappa} M={m} α={alpha}: {pc} < {pr}");
        prop_assert!(pc > 0.0 && pc <= 1.0);
    }

    #[test]
    fn chi2_round_trip(ln_kappa in (1e-8f64).ln()..(1e6f64).ln(), q in 1e-6f64..(1.0 - 1e-6)) {
        let kappa = ln_kappa.exp();
        // quantiles below the smallest normal double lose their precision
        let x = chi2_quantile(q, kappa).unwrap();
        if x >= f64::MIN_POSITIVE {
            prop_assert!((chi2_cdf(x, kappa).unwrap() - q).abs() <= 1e-9, "κ={kappa} q={q} x={x}");
        }
        let y = chi2_isf(q, kappa).unwrap();
        if y >= f64::MIN_POSITIVE {
            prop_assert!((chi2_sf(y, kappa).unwrap() - q).abs() <= 1e-9 * q.max(1e-3) / 1e-3);
        }
    }

    #[test]
    fn chi2_complements(ln_kappa in -8.0f64..14.0, x in 0.0f64..1e4) {
        let kappa = ln_kappa.exp();
        let (c, s) = (chi2_cdf(x, kappa).unwrap(), chi2_sf(x, kappa).unwrap());
        prop_assert!((c + s - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn normal_round_trip(q in 1e-15f64..(1.0 - 1e-12)) {
        let z = normal_quantile(q);
        prop_assert!((normal_cdf(z) - q).abs() <= 1e-14 * q.max(1e-3) / 1e-3);
    }

    #[test]
    fn divergence_inverse(ln_d in -4.0f64..4.0, w in 0.01f64..=1.0) {
        match find_a(ln_d.exp(), w) {
            Ok(a) => {
                let d = beta_divergence_w(a, w).unwrap();
                prop_assert!((d.ln() - ln_d).abs() <= 1e-6, "w={w} a={a} D={d}");
            }
            Err(poolcore::Error::UnreachableDivergence { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn prevalence_count(eta in 0.0f64..=1.0, m in 1usize..200, seed in any::<u64>()) {
        let alt = BetaAlt::from_shapes(0.01, 1.0).unwrap();
        let spec = AlternativeSpec::new(eta, alt, m).unwrap();
        let want = (m as f64 * eta + 0.5).floor() as usize;
        prop_assert_eq!(spec.n_alt(), want.min(m));
        let p = gen_h3(&spec, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(p.m(), m);
        prop_assert!(p.as_slice().iter().all(|x| (0.0..=1.0).contains(x)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_and_generic_profiles_agree(ln_kappa in -4.0f64..6.0, m in 2usize..=10) {
        let spec = MethodSpec::new(MethodKind::Chi { kappa: ln_kappa.exp() }).unwrap();
        let closed = closed_form_profile(&spec, m, 0.05).unwrap().unwrap();
        let generic = generic_profile(&spec, m, 0.05, None, DEFAULT_TOL).unwrap();
        prop_assert!((closed.p_c - generic.p_c).abs() <= 1e-6);
        prop_assert!((closed.p_r.unwrap() - generic.p_r.unwrap()).abs() <= 1e-6);
    }
}
