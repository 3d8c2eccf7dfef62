use eedesign_core::analytic::se_lower_bound;
use eedesign_core::mc::channel::{distributional_desired_gain, explicit_desired_gain};
use eedesign_core::mc::rng::{substream, Purpose};
use eedesign_core::mc::{estimate_ergodic_se, PrecoderMode, SimulationConfig};
use eedesign_core::stats::ks_two_sample;
use eedesign_core::{DesignPoint, PropagationParams};

fn config(eps: f64, d: DesignPoint, trials: usize, seed: u64) -> SimulationConfig {
    let mut p = PropagationParams::reference();
    p.epsilon = eps;
    SimulationConfig::new(p, d, trials, seed).unwrap()
}

#[test]
fn single_cell_se_matches_quadrature() {
    // E{log2(1 + rho v(d) X / sigma2)}, X ~ Gamma(3), d Rayleigh, evaluated
    // by adaptive quadrature at 40 digits.
    let mut c = config(0.0, DesignPoint::new(1e-9, 1e-4, 4, 2), 100_000, 21);
    c.include_interference = false;
    let e = estimate_ergodic_se(&c).unwrap();
    assert!(e.se.covers(6.057_996_578_989_083_5), "{:?}", e.se);
}

#[test]
fn mc_sits_above_the_bound() {
    let designs = [
        DesignPoint::new(1e-12, 1e-4, 100, 10),
        DesignPoint::new(1e-10, 1e-5, 20, 4),
        DesignPoint::new(1e-14, 1e-3, 64, 16),
        DesignPoint::new(1e-9, 1e-6, 8, 1),
    ];
    for (i, d) in designs.into_iter().enumerate() {
        let c = config(0.05, d, 3000, 100 + i as u64);
        let e = estimate_ergodic_se(&c).unwrap();
        let bound = se_lower_bound(&c.propagation, &d).unwrap();
        assert!(e.se.upper() >= bound, "{d:?}: {:?} vs {bound}", e.se);
    }
}

#[test]
fn ideal_hardware_gives_higher_se() {
    let d = DesignPoint::new(1e-12, 1e-4, 100, 10);
    let ideal = estimate_ergodic_se(&config(0.0, d, 3000, 5)).unwrap();
    let impaired = estimate_ergodic_se(&config(0.05, d, 3000, 5)).unwrap();
    assert!(ideal.se.mean > impaired.se.mean);
}

#[test]
fn identical_results_for_any_worker_count() {
    let d = DesignPoint::new(1e-12, 1e-4, 40, 6);
    let c = config(0.05, d, 1500, 77);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_ergodic_se(&c).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.se.mean.to_bits(), four.se.mean.to_bits());
    assert_eq!(one.se.half_width.to_bits(), four.se.half_width.to_bits());
    assert_eq!(one, run(1));
}

#[test]
fn doubling_the_window_changes_little() {
    let d = DesignPoint::new(1e-12, 1e-4, 100, 10);
    let c = config(0.05, d, 4000, 9);
    let mut wide = c;
    wide.window_radius *= 2.0;
    let a = estimate_ergodic_se(&c).unwrap().se;
    let b = estimate_ergodic_se(&wide).unwrap().se;
    let allowed = 1e-3 * a.mean + a.half_width + b.half_width;
    assert!((a.mean - b.mean).abs() <= allowed, "{a:?} vs {b:?}");
}

#[test]
fn explicit_and_distributional_desired_gain_agree() {
    let (m, k) = (8, 3);
    let n = 100_000u64;
    let mut rng = substream(123, Purpose::Probe, 0);
    let explicit: Vec<f64> = (0..n)
        .map(|_| explicit_desired_gain(&mut rng, m, k, 1.0).unwrap())
        .collect();
    let mut rng = substream(123, Purpose::Probe, 1);
    let law: Vec<f64> = (0..n)
        .map(|_| distributional_desired_gain(&mut rng, m, k, 1.0))
        .collect();
    let ks = ks_two_sample(&explicit, &law);
    assert!(ks.passes(0.01), "{ks:?}");
}

#[test]
fn explicit_mode_estimate_matches_distributional() {
    let d = DesignPoint::new(1e-12, 1e-4, 12, 3);
    let mut a = config(0.05, d, 400, 11);
    a.window_radius = 400.0;
    let mut b = a;
    b.precoder_mode = PrecoderMode::ExplicitZf;
    let ea = estimate_ergodic_se(&a).unwrap().se;
    let eb = estimate_ergodic_se(&b).unwrap().se;
    assert!((ea.mean - eb.mean).abs() <= ea.half_width + eb.half_width, "{ea:?} {eb:?}");
}
