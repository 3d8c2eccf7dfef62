use eedesign_core::analytic::{ee_density_limit, energy_efficiency, se_lower_bound};
use eedesign_core::optimizer::{AlternatingOptions, DesignProblem, DEFAULT_K_RANGE, DEFAULT_M_RANGE};
use eedesign_core::{HardwareProfile, PropagationParams};
use proptest::prelude::*;

fn problem(gamma: f64, lambda: f64) -> DesignProblem {
    DesignProblem::new(PropagationParams::reference(), HardwareProfile::reference(), gamma, lambda).unwrap()
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rho_star_inverts_the_bound(
        gamma in 0.05f64..8.0,
        log_lambda in -7.0f64..-1.0,
        k in 1u32..60,
        extra in 0.0f64..1.0,
    ) {
        let p = problem(gamma, 10f64.powf(log_lambda));
        let m_min = k as f64 * p.min_feasible_beta();
        let m = (m_min + 1.0 + extra * 2000.0).ceil() as u32;
        let rho = p.rho_star(m, k).unwrap();
        let se = se_lower_bound(&p.propagation, &p.design(m, k).unwrap()).unwrap();
        prop_assert!(rho > 0.0);
        prop_assert!((se - gamma).abs() <= 1e-9 * gamma, "se {} gamma {}", se, gamma);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ee_is_nondecreasing_in_ap_density(
        gamma in 0.5f64..6.0,
        k in 1u32..40,
        headroom in 1.0f64..200.0,
    ) {
        let base = problem(gamma, 1e-4);
        let m = (k as f64 * base.min_feasible_beta() + headroom).ceil() as u32;
        let mut last = 0.0;
        for lambda in geometric(1e-7, 1e-1, 50) {
            let ee = base.with_lambda(lambda).unwrap().ee(m, k).unwrap();
            prop_assert!(ee >= last * (1.0 - 1e-12), "EE fell at lambda {}", lambda);
            last = ee;
        }
        let limit = ee_density_limit(&base.hardware, m, k, gamma);
        prop_assert!(last <= limit);
    }

    #[test]
    fn rounding_in_m_beats_neighbours(
        gamma in 0.5f64..6.0,
        log_lambda in -6.0f64..-2.0,
        k in 1u32..40,
    ) {
        let p = problem(gamma, 10f64.powf(log_lambda));
        let m_real = p.m_star(k).unwrap();
        let m = p.best_integer_m(k).unwrap();
        let best = p.ee(m, k).unwrap();
        let lo = m_real.floor() as i64;
        for cand in [lo - 2, lo - 1, lo, lo + 1, lo + 2, lo + 3] {
            if cand < 1 {
                continue;
            }
            if let Ok(v) = p.ee(cand as u32, k) {
                prop_assert!(best >= v * (1.0 - 1e-12), "M = {} beats {}", cand, m);
            }
        }
    }

    #[test]
    fn rounding_in_k_beats_neighbours_at_real_antenna_ratio(
        gamma in 0.5f64..6.0,
        log_lambda in -6.0f64..-2.0,
        offset in 0.5f64..20.0,
    ) {
        let p = problem(gamma, 10f64.powf(log_lambda));
        let beta = p.min_feasible_beta() + offset;
        let k_real = p.k_star(beta).unwrap();
        let ee = |k: f64| p.ee_relaxed(beta * k, k);
        let lo = k_real.floor().max(1.0);
        let best = [lo, lo + 1.0].into_iter().filter_map(ee).fold(0.0, f64::max);
        for cand in [lo - 2.0, lo - 1.0, lo + 2.0, lo + 3.0] {
            if cand >= 1.0 {
                if let Some(v) = ee(cand) {
                    prop_assert!(best >= v * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn argmax_survives_common_energy_scaling(factor in 0.01f64..100.0, gamma in 1.0f64..5.0) {
        let p = problem(gamma, 1e-4);
        let mut scaled = p;
        scaled.hardware = p.hardware.scaled(factor);
        let a = p.grid_search(2..=250, 1..=30).unwrap();
        let b = scaled.grid_search(2..=250, 1..=30).unwrap();
        prop_assert_eq!((a.best.m, a.best.k), (b.best.m, b.best.k));
        prop_assert!((a.best_ee / b.best_ee - factor).abs() < 1e-9 * factor);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn alternating_is_monotone_and_near_grid_optimum(
        gamma in 0.5f64..6.0,
        log_lambda in -6.0f64..-2.0,
    ) {
        let p = problem(gamma, 10f64.powf(log_lambda));
        let grid = p.grid_search(DEFAULT_M_RANGE, DEFAULT_K_RANGE).unwrap();
        // Start from the smallest feasible single-user design.
        let start_m = (p.min_feasible_beta().floor() as u32 + 1).max(2);
        let out = p.alternating_optimize(start_m, 1, &AlternatingOptions::default()).unwrap();
        for w in out.trajectory.windows(2) {
            prop_assert!(w[1].ee >= w[0].ee * (1.0 - 1e-12));
        }
        // The grid only covers M <= 400; the alternating result may leave it.
        prop_assert!(out.ee >= 0.99 * grid.best_ee, "{} vs {}", out.ee, grid.best_ee);
    }
}

#[test]
fn ee_in_megabit_per_joule_range() {
    // bit/symbol/m^2 over J/symbol/m^2 lands in the Mbit/J range for the
    // reference deployment.
    let p = problem(3.0, 1e-4);
    let d = p.design(193, 21).unwrap();
    let ee = energy_efficiency(&p.propagation, &p.hardware, &d).unwrap();
    assert!((1e6..1e7).contains(&ee), "{ee}");
}
