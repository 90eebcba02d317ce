//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use chipfire::chip_core::{default_budget, simulate_to_cycle, ChipConfig};
use chipfire::circle_lift::{
    lift_from_config, stair_interval, update_lift, CdfSpec, RotationOptions, Q,
};
use chipfire::laws::{check_law, pq_construction, random_preconfined, FamilySpec, Law, LawParams};
use chipfire::rational::Rational;
use chipfire::staircase::{census, limit_staircase, phase_diagram, PhaseDiagram};
use common::{all_configs, naive_alphas, naive_cycle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE_TIME: Duration = Duration::from_secs(1);
const CENSUS_TIME: Duration = Duration::from_secs(600);
const LAWS_TIME: Duration = Duration::from_secs(120);
/// Half-width allowed around 1/6 for the 1/2 stair.
const STAIR_WIDTH_TOL: f64 = 0.002;
/// Stairs narrower than this are not compared against the limit.
const MIN_STAIR_WIDTH: f64 = 0.01;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn expand(spec: &[(&str, usize)]) -> Vec<Rational> {
    spec.iter()
        .flat_map(|&(v, c)| std::iter::repeat_n(r(v), c))
        .collect()
}

fn n100_list() -> Vec<Rational> {
    expand(&[
        ("0", 26),
        ("1/6", 1),
        ("1/5", 2),
        ("1/4", 3),
        ("2/7", 1),
        ("1/3", 7),
        ("2/5", 2),
        ("1/2", 17),
        ("3/5", 2),
        ("2/3", 7),
        ("5/7", 1),
        ("3/4", 3),
        ("4/5", 2),
        ("5/6", 1),
        ("1", 26),
    ])
}

fn exact_tables() -> Outcome {
    let start = Instant::now();
    let d10 = phase_diagram(&FamilySpec::Slope2, 10, None).unwrap();
    let d100 = phase_diagram(&FamilySpec::Slope2, 100, None).unwrap();
    let elapsed = start.elapsed();
    let want10 = expand(&[("0", 4), ("1/3", 1), ("1/2", 2), ("2/3", 1), ("1", 3)]);
    let want100 = n100_list();
    let ok10 = d10.activities() == want10;
    let ok100 = d100.activities() == want100;
    let mismatches: Vec<usize> = (0..=100)
        .filter(|&k| d100.rows[k].activity != want100[k])
        .collect();
    Outcome {
        name: "exact tables n=10, n=100",
        pass: ok10 && ok100 && want100.len() == 101 && elapsed < TABLE_TIME,
        detail: format!("n=10 {ok10}, n=100 {ok100} (mismatched k {mismatches:?}), {elapsed:.2?}"),
    }
}

fn census_reproduction() -> (Outcome, PhaseDiagram) {
    let start = Instant::now();
    let diagram = phase_diagram(&FamilySpec::Slope2, 10_000, None).unwrap();
    let big = census(&diagram);
    let mid = census(&phase_diagram(&FamilySpec::Slope2, 1_000, None).unwrap());
    let elapsed = start.elapsed();
    let halves = big.count(r("1/2"));
    let thirds = big.count(r("1/3"));
    let thirteenths: Vec<usize> = (1..=12).map(|p| big.count(Rational::new(p, 13))).collect();
    let pass = halves == 1667
        && thirds == 714
        && thirteenths.iter().all(|&c| c == 1)
        && big.max_denominator() == 13
        && mid.max_denominator() == 11
        && elapsed < CENSUS_TIME;
    let outcome = Outcome {
        name: "census n=10000, n=1000",
        pass,
        detail: format!(
            "1/2:{halves} 1/3:{thirds} p/13:{thirteenths:?} maxden {} / {}, {elapsed:.2?}",
            big.max_denominator(),
            mid.max_denominator()
        ),
    };
    (outcome, diagram)
}

fn lift_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = None;
    for i in 0..200 {
        let n = rng.gen_range(1..=64);
        let c = random_preconfined(n, &mut rng);
        let f = lift_from_config(&c).unwrap();
        let alphas = naive_alphas(c.heights(), 2 * n);
        let mut x = Q::from_integer(0);
        for (t, &a) in alphas.iter().enumerate().skip(1) {
            x = f.eval(x);
            if x != Q::new(a as i128, n as i128) {
                bad.get_or_insert(format!("sample {i}, n={n}, t={t}"));
            }
        }
    }
    Outcome {
        name: "lift orbit f^t(0) = alpha_t/n",
        pass: bad.is_none(),
        detail: bad.unwrap_or_else(|| "200 configurations, t <= 2n".into()),
    }
}

fn law_suite() -> Outcome {
    let start = Instant::now();
    let params = LawParams {
        n_min: 2,
        n_max: 64,
        trials: 100,
        seed: 42,
    };
    let laws = [
        Law::PeriodBound,
        Law::Divisibility,
        Law::Interlacing,
        Law::DenominatorLemma,
        Law::Conjugation,
        Law::Reflection,
        Law::U2Lemma,
        Law::Congruence,
        Law::Period2Window,
    ];
    let mut failed = Vec::new();
    let mut checked = 0;
    let mut window_ok = false;
    for law in laws {
        let rep = check_law(law, &params).unwrap();
        checked += rep.checked;
        if !rep.passed || rep.checked == 0 {
            failed.push(format!("{law}: {:?}", rep.counterexample));
        }
        if law == Law::Period2Window {
            // Every n in 3..=64 with 100 random totals each.
            window_ok = rep.checked >= 62 * 100;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        name: "law suite",
        pass: failed.is_empty() && window_ok && elapsed < LAWS_TIME,
        detail: format!("{checked} instances, failures {failed:?}, {elapsed:.2?}"),
    }
}

fn functoriality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut bad = None;
    for i in 0..100 {
        let n = rng.gen_range(1..=64);
        let c = random_preconfined(n, &mut rng);
        let lhs = lift_from_config(&c.update().0).unwrap();
        let rhs = update_lift(&lift_from_config(&c).unwrap());
        // Exact equality, cross-checked on every knot of either side.
        let knots_agree = lhs
            .knots()
            .chain(rhs.knots())
            .all(|(x, _)| lhs.eval(x) == rhs.eval(x));
        if !(lhs.same_function(&rhs, 0.0) && knots_agree) {
            bad.get_or_insert(format!("sample {i}, n={n}"));
        }
    }
    Outcome {
        name: "functoriality",
        pass: bad.is_none(),
        detail: bad.unwrap_or_else(|| "100 configurations".into()),
    }
}

fn staircase_convergence(big: &PhaseDiagram) -> Outcome {
    let opts = RotationOptions::default();
    // y_i = i/20 hits 0.1, 0.45, 0.5, 0.55 and 0.9.
    let points = limit_staircase(&CdfSpec::Slope2, 21, &opts).unwrap();
    let n = big.n;
    let counts = census(big);
    let mut notes = Vec::new();
    let mut pass = true;
    for i in [2, 9, 10, 11, 18] {
        let p = &points[i];
        let k = (n as f64 * p.y).floor() as usize;
        let a = big.rows[k].activity;
        let width = counts.count(a) as f64 / n as f64;
        let ok = match p.estimate.snapped {
            Some(s) => {
                let inside = p.estimate.contains(s.to_f64());
                inside && (width < MIN_STAIR_WIDTH || s == a)
            }
            None => false,
        };
        pass &= ok;
        notes.push(format!(
            "y={:.2}: limit {:?} vs s_n {a} (stair {width:.4})",
            p.y,
            p.estimate.snapped.map(|s| s.to_string())
        ));
    }
    let stair = stair_interval(&CdfSpec::Slope2, 1, 2, 1e-4, &opts).unwrap();
    let width_ok = (stair.width - 0.1667).abs() <= STAIR_WIDTH_TOL;
    notes.push(format!("stair 1/2 width {:.5}", stair.width));
    Outcome {
        name: "staircase convergence",
        pass: pass && width_ok,
        detail: notes.join("; "),
    }
}

fn pq_construction_check() -> Outcome {
    let mut bad = None;
    let mut count = 0;
    for n in 2..=40usize {
        for q in 2..=n as u64 {
            for p in 1..=q / 2 {
                if common::gcd(p, q) != 1 {
                    continue;
                }
                count += 1;
                let c = pq_construction(n, p, q).unwrap();
                let naive = naive_cycle(c.heights());
                let s = simulate_to_cycle(&c, default_budget(n)).unwrap();
                let ok = naive.activity == (p, q)
                    && naive.period == q
                    && s.activity == Rational::new(p, q)
                    && s.period == q;
                if !ok {
                    bad.get_or_insert(format!("n={n} p/q={p}/{q}: got {:?}", naive));
                }
            }
        }
    }
    Outcome {
        name: "pq construction n <= 40",
        pass: bad.is_none(),
        detail: bad.unwrap_or_else(|| format!("{count} (n, p, q) triples")),
    }
}

fn brute_force_equivalence() -> Outcome {
    let mut bad = None;
    let mut count = 0;
    for n in 1..=5usize {
        for h in all_configs(n, 2 * n as u64 - 1) {
            count += 1;
            let naive = naive_cycle(&h);
            let c = ChipConfig::new(h.clone()).unwrap();
            let s = simulate_to_cycle(&c, default_budget(n)).unwrap();
            let ours = (s.transient, s.period, (s.activity.num(), s.activity.den()));
            if ours != (naive.transient, naive.period, naive.activity) {
                bad.get_or_insert(format!("{h:?}: {ours:?} vs {naive:?}"));
            }
        }
    }
    Outcome {
        name: "brute-force cycle detector equivalence n <= 5",
        pass: bad.is_none(),
        detail: bad.unwrap_or_else(|| format!("{count} configurations, exhaustive")),
    }
}

/// Monotone snapped values, endpoints 0 and 1, and stairs at 1/2 and 1/3.
fn qualitative_staircases() -> Outcome {
    let opts = RotationOptions::default();
    let tol = 1e-3;
    let mut notes = Vec::new();
    let mut pass = true;
    for cdf in [CdfSpec::Sqrt, CdfSpec::Sine] {
        let pts = limit_staircase(&cdf, 33, &opts).unwrap();
        let values: Vec<f64> = pts.iter().map(|p| p.estimate.value).collect();
        let monotone = values.windows(2).all(|w| w[0] <= w[1] + 1e-9);
        let ends = pts[0].estimate.snapped == Some(Rational::ZERO)
            && pts[32].estimate.snapped == Some(Rational::ONE);
        let half = stair_interval(&cdf, 1, 2, tol, &opts).map(|s| s.width);
        let third = stair_interval(&cdf, 1, 3, tol, &opts).map(|s| s.width);
        let ok = monotone && ends && half.is_ok() && third.is_ok();
        pass &= ok;
        notes.push(format!(
            "{cdf}: monotone {monotone}, endpoints {ends}, stairs 1/2 {:?} 1/3 {:?}",
            half.ok(),
            third.ok()
        ));
    }
    Outcome {
        name: "sqrt/sine staircases (qualitative)",
        pass,
        detail: notes.join("; "),
    }
}

#[test]
fn acceptance() {
    let (census_outcome, big) = census_reproduction();
    let outcomes = [
        exact_tables(),
        census_outcome,
        lift_oracle(),
        law_suite(),
        functoriality(),
        staircase_convergence(&big),
        pq_construction_check(),
        brute_force_equivalence(),
        qualitative_staircases(),
    ];
    for o in &outcomes {
        println!(
            "{} {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| o.name)
        .collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
