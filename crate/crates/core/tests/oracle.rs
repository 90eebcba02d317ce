mod common;

use chipfire::chip_core::{default_budget, simulate_to_cycle, ChipConfig};
use chipfire::circle_lift::{lift_from_config, Q};
use common::{all_configs, naive_alphas, naive_cycle, naive_lift_at};

fn summary_of(h: &[u64]) -> (u64, u64, (u64, u64)) {
    let c = ChipConfig::new(h.to_vec()).unwrap();
    let s = simulate_to_cycle(&c, default_budget(c.n())).unwrap();
    (s.transient, s.period, (s.activity.num(), s.activity.den()))
}

#[test]
fn detector_matches_hashing_exhaustively_small() {
    for n in 1..=4 {
        for h in all_configs(n, 2 * n as u64 - 1) {
            let naive = naive_cycle(&h);
            assert_eq!(
                summary_of(&h),
                (naive.transient, naive.period, naive.activity),
                "{h:?}"
            );
        }
    }
}

#[test]
fn detector_matches_hashing_beyond_preconfined() {
    // Tall vertices force long unconfined transients.
    for n in 2..=4 {
        for h in all_configs(n, 3 * n as u64) {
            let naive = naive_cycle(&h);
            assert_eq!(
                summary_of(&h),
                (naive.transient, naive.period, naive.activity),
                "{h:?}"
            );
        }
    }
}

#[test]
fn lift_matches_definition_at_grid_points() {
    for n in 1..=3 {
        for h in all_configs(n, 2 * n as u64 - 1) {
            let f = lift_from_config(&ChipConfig::new(h.clone()).unwrap()).unwrap();
            let den = 4 * n as i128;
            for num in -den..=2 * den {
                let (a, b) = naive_lift_at(&h, num, den);
                assert_eq!(
                    f.eval(Q::new(num, den)),
                    Q::new(a, b),
                    "{h:?} at {num}/{den}"
                );
            }
        }
    }
}

#[test]
fn lift_orbit_matches_alpha() {
    for n in 1..=4 {
        for h in all_configs(n, 2 * n as u64 - 1) {
            let f = lift_from_config(&ChipConfig::new(h.clone()).unwrap()).unwrap();
            let alphas = naive_alphas(&h, 2 * n);
            let mut x = Q::from_integer(0);
            for (t, &a) in alphas.iter().enumerate().skip(1) {
                x = f.eval(x);
                assert_eq!(x, Q::new(a as i128, n as i128), "{h:?} t={t}");
            }
        }
    }
}
