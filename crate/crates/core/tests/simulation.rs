use poolcore::divergence::BetaAlt;
use poolcore::pooling::{simulate_hr_table, MethodSpec};
use poolcore::rng::cell_seed;
use poolcore::sampling::{spec_from_divergence, AlternativeSpec};
use poolcore::simulation::{
    alt_frequency_map, atlas, default_ln_kappa_grid, gaussian_smooth, kappa_curve, kappa_sweep, max_power_mask, median_curve,
    power_estimate, power_estimates, power_surface, select_tests, simulate_sweep_null, two_proportion_z,
    AtlasConfig, Grid2, SurfaceConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn methods(labels: &[&str]) -> Vec<MethodSpec> {
    labels.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn size_equals_level_under_null() {
    let ms = methods(&["tippett", "stouffer", "fisher", "pearson", "chi(kappa=0.01)", "chi(kappa=100)", "hr(w=0.3)"]);
    let table = simulate_hr_table(0.3, 10, 20_000, 1).unwrap();
    let mut tables = vec![None; ms.len()];
    tables[6] = Some(&table);
    let spec = AlternativeSpec::new(0.0, BetaAlt::from_shapes(0.1, 1.0).unwrap(), 10).unwrap();
    for e in power_estimates(&ms, &tables, &spec, 0.05, 4000, 7).unwrap() {
        let se = (0.05 * 0.95 / 4000f64).sqrt();
        assert!((e.power - 0.05).abs() <= 3.0 * se, "{e:?}");
    }
    let h4_null = AlternativeSpec::new(1.0, BetaAlt::uniform(), 10).unwrap();
    let e = power_estimate(&ms[2], &h4_null, 0.05, 4000, None, 8).unwrap();
    assert!((e.power - 0.05).abs() <= 3.0 * (0.05 * 0.95 / 4000f64).sqrt());
}

#[test]
fn standard_error_is_binomial() {
    let spec = spec_from_divergence(0.5, 1.0, 0.5, 10).unwrap();
    let e = power_estimate(&"fisher".parse().unwrap(), &spec, 0.05, 1000, None, 3).unwrap();
    assert!((e.se - (e.power * (1.0 - e.power) / 1000.0).sqrt()).abs() < 1e-15);
    assert_eq!(e.n_sim, 1000);
}

#[test]
fn strong_h4_alternative_saturates() {
    let spec = spec_from_divergence(1.0, 3f64.exp(), 1.0, 20).unwrap();
    let e = power_estimate(&"chi(kappa=2)".parse().unwrap(), &spec, 0.05, 2000, None, 5).unwrap();
    assert!(e.power >= 0.99, "{e:?}");
}

#[test]
fn hr_needs_table() {
    let spec = spec_from_divergence(0.5, 1.0, 0.5, 10).unwrap();
    let hr: MethodSpec = "hr(w=0.5)".parse().unwrap();
    assert!(power_estimate(&hr, &spec, 0.05, 1000, None, 1).is_err());
    let wrong = simulate_hr_table(0.5, 9, 1000, 1).unwrap();
    assert!(power_estimate(&hr, &spec, 0.05, 1000, Some(&wrong), 1).is_err());
    assert!(power_estimate(&"fisher".parse().unwrap(), &spec, 0.05, 99, None, 1).is_err());
}

#[test]
fn degenerate_surface_is_one_estimate() {
    let ms = methods(&["fisher"]);
    let tables = [None];
    let grid = power_surface(&SurfaceConfig {
        methods: &ms,
        tables: &tables,
        eta: &[0.5],
        ln_divergence: &[0.5],
        ln_w: &[-1.0],
        m: 10,
        alpha: 0.05,
        n_sim: 1500,
        seed: 99,
    })
    .unwrap();
    let spec = spec_from_divergence(0.5, 0.5f64.exp(), (-1f64).exp(), 10).unwrap();
    let direct = power_estimate(&ms[0], &spec, 0.05, 1500, None, cell_seed(99, &[0, 0, 0])).unwrap();
    assert_eq!(grid.get(0, 0, 0, 0).unwrap(), direct);
}

#[test]
fn monotone_in_prevalence_and_divergence() {
    let ms = methods(&["chi(kappa=2)"]);
    let tables = [None];
    let eta: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let ln_d = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let grid = power_surface(&SurfaceConfig {
        methods: &ms,
        tables: &tables,
        eta: &eta,
        ln_divergence: &ln_d,
        ln_w: &[0.0],
        m: 10,
        alpha: 0.05,
        n_sim: 2000,
        seed: 11,
    })
    .unwrap();
    let id2 = 4;
    for (ie, e) in eta.iter().enumerate().skip(1) {
        let (a, b) = (grid.get(ie - 1, id2, 0, 0).unwrap(), grid.get(ie, id2, 0, 0).unwrap());
        assert!(b.power >= a.power - 3.0 * (a.se * a.se + b.se * b.se).sqrt(), "η={e}");
    }
    let ie1 = eta.len() - 1;
    for (id, d) in ln_d.iter().enumerate().skip(1) {
        let (a, b) = (grid.get(ie1, id - 1, 0, 0).unwrap(), grid.get(ie1, id, 0, 0).unwrap());
        assert!(b.power >= a.power - 3.0 * (a.se * a.se + b.se * b.se).sqrt(), "ln D={d}");
    }
}

#[test]
fn unreachable_cells_are_absent() {
    let ms = methods(&["fisher"]);
    let tables = [None];
    let grid = power_surface(&SurfaceConfig {
        methods: &ms,
        tables: &tables,
        eta: &[1.0],
        ln_divergence: &[0.0, 7.0],
        ln_w: &[0.0],
        m: 5,
        alpha: 0.05,
        n_sim: 200,
        seed: 1,
    })
    .unwrap();
    assert!(grid.get(0, 0, 0, 0).is_some());
    assert!(grid.get(0, 1, 0, 0).is_none());
    let csv = grid.to_csv();
    assert!(csv.starts_with("eta,ln_divergence,ln_w,method,kappa_or_w,power,se,n_sim\n"));
    assert!(csv.lines().nth(2).unwrap().contains("absent"));
}

#[test]
fn surface_independent_of_thread_count() {
    let ms = methods(&["chi(kappa=0.1)", "stouffer"]);
    let tables = [None, None];
    let cfg = SurfaceConfig {
        methods: &ms,
        tables: &tables,
        eta: &[0.2, 0.8],
        ln_divergence: &[-1.0, 1.0],
        ln_w: &[-3.0, 0.0],
        m: 8,
        alpha: 0.05,
        n_sim: 2500,
        seed: 2024,
    };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| power_surface(&cfg)).unwrap();
    let b = four.install(|| power_surface(&cfg)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
    let ta = one.install(|| simulate_hr_table(0.5, 4, 3500, 3)).unwrap();
    let tb = four.install(|| simulate_hr_table(0.5, 4, 3500, 3)).unwrap();
    assert_eq!(ta, tb);
}

#[test]
fn smoothing_reduces_noise_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = Grid2::from_vec(30, 40, (0..1200).map(|_| rng.random::<f64>()).collect()).unwrap();
    let smooth = gaussian_smooth(&noise, 1.0).unwrap();
    let var = |g: &Grid2<f64>| {
        let mean = g.data.iter().sum::<f64>() / g.data.len() as f64;
        g.data.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / g.data.len() as f64
    };
    assert!(var(&smooth) < var(&noise));
}

#[test]
fn mask_and_frequency_contracts() {
    assert!((two_proportion_z(0.50, 0.48, 10_000) - 2.83).abs() < 0.01);
    let a = Grid2::from_vec(1, 2, vec![0.5, 0.9]).unwrap();
    let b = Grid2::from_vec(1, 2, vec![0.5, 0.2]).unwrap();
    let masks = max_power_mask(&[a, b], 1000, 0.95).unwrap();
    assert_eq!(masks[0].data, vec![true, true]);
    assert_eq!(masks[1].data, vec![true, false]);
    let layers = vec![masks[1].clone(), masks[0].clone(), masks[1].clone()];
    let f = alt_frequency_map(&layers, None).unwrap();
    assert!(f.counts.data.iter().all(|&c| c <= 3));
    assert_eq!(f.counts.data, vec![3, 1]);
    assert!(max_power_mask(&[Grid2::filled(1, 1, 0.5), Grid2::filled(2, 1, 0.5)], 10, 0.95).is_err());
}

#[test]
fn atlas_small_kappa_prefers_low_prevalence() {
    let cfg = AtlasConfig {
        kappas: vec![(-4f64).exp(), 4f64.exp()],
        eta: vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        ln_divergence: vec![-1.0, 0.0, 1.0, 2.0, 3.0],
        ln_w: vec![-3.0, -1.5, 0.0],
        m: 10,
        alpha: 0.05,
        n_sim: 1000,
        seed: 31,
        sigma: 1.0,
        confidence: 0.95,
        mask_corners: true,
    };
    let at = atlas(&cfg).unwrap();
    let mean_eta = |rows: &[u32]| {
        let total: u32 = rows.iter().sum();
        rows.iter().zip(&cfg.eta).map(|(&c, e)| c as f64 * e).sum::<f64>() / total as f64
    };
    let small = mean_eta(&at.frequency[0].row_sums);
    let large = mean_eta(&at.frequency[1].row_sums);
    assert!(small < large, "small κ mean η {small}, large κ {large}");
    for f in &at.frequency {
        assert!(f.counts.data.iter().all(|&c| c as usize <= cfg.ln_w.len()));
    }
    let csv = at.to_csv();
    assert!(csv.starts_with("kappa,"));
    assert_eq!(csv, atlas(&cfg).unwrap().to_csv());
}

#[test]
fn sweep_constant_half() {
    // Σ F⁻¹(1/2; κ) = M·median(χ²_κ) lies below the null mean Mκ, so the
    // pooled value exceeds 1/2, tends to 1/2 as κ → ∞ (Stouffer) and to
    // 1 − 2^−M as κ → 0 (Tippett)
    let grid = default_ln_kappa_grid();
    let p = vec![0.5; 200];
    let curve = kappa_curve(&p, &grid);
    assert!(curve.windows(2).all(|w| w[1] <= w[0]));
    assert!(curve.iter().all(|&v| v > 0.5));
    assert!(curve[64] < 0.6);
    assert_eq!(curve[0], 1.0);
    let s = kappa_sweep(&p, &grid, None).unwrap();
    assert_eq!(s.index_min, 64);
    assert_eq!(s.pooled[s.index_min], s.p_min);
    assert!(s.to_csv().starts_with("ln_kappa,pooled_p\n"));
    assert!(s.summary().contains("kappa_min="));
}

#[test]
fn null_median_curve_is_flat() {
    // every χ²_κ pooled value is uniform under the null, so the pointwise
    // median over replicates sits at 1/2 for every κ
    let grid = default_ln_kappa_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let curves: Vec<Vec<f64>> = (0..400)
        .map(|_| {
            let p: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
            kappa_curve(&p, &grid)
        })
        .collect();
    for (t, v) in grid.iter().zip(median_curve(&curves)) {
        assert!((v - 0.5).abs() < 0.08, "ln κ={t}: {v}");
    }
}

#[test]
fn sweep_null_refs() {
    let grid = default_ln_kappa_grid();
    let null = simulate_sweep_null(&grid, 20, 2000, 77).unwrap();
    let p = vec![0.3; 20];
    let s = kappa_sweep(&p, &grid, Some(&null)).unwrap();
    let r = s.null_refs.unwrap();
    assert!(r.q001 <= r.q01 && r.q01 <= r.q05);
    // the minimum over κ is anti-conservative: its 5% point is below 0.05
    assert!(r.q05 < 0.05);
    assert!(s.summary().contains("null_ref_q05="));
    assert!(kappa_sweep(&[0.3; 19], &grid, Some(&null)).is_err());
}

#[test]
fn select_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
    let sel = select_tests(&p, 0.01, 0.05).unwrap();
    assert_eq!(sel.len(), 5);
    let mut sorted = p.clone();
    sorted.sort_by(f64::total_cmp);
    let chosen: Vec<f64> = sel.iter().map(|&i| p[i]).collect();
    assert_eq!(chosen, sorted[..5].to_vec());
    assert_eq!(select_tests(&p, 5.0, 0.05).unwrap(), sel);
    assert_eq!(select_tests(&p, 2.0, 1.0).unwrap().len(), 100);
}
