use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::chip_core::{
    default_budget, simulate_to_cycle, ChipConfig, Evolution, SimulationSummary,
};
use crate::circle_lift::{lift_from_config, update_lift, Q};
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::families::{conjugate, pq_construction, reflect, slope2_config};
use super::sampling::{
    random_by_total, random_composition, random_confined, random_general, random_preconfined,
};
use super::{Failure, Instance, Law, LawParams, Outcome};

type Check = std::result::Result<Outcome, Failure>;

/// `n` of the denominator-lemma sweep.
const SWEEP_N: usize = 100;

fn fail(c: &ChipConfig, detail: impl Into<String>) -> Failure {
    Failure {
        heights: c.heights().to_vec(),
        detail: detail.into(),
    }
}

fn summary(c: &ChipConfig) -> std::result::Result<SimulationSummary, Failure> {
    simulate_to_cycle(c, default_budget(c.n())).map_err(|e| fail(c, e.to_string()))
}

pub(crate) fn instances(law: Law, params: &LawParams) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    let mut push = |n: usize, tag: u64| {
        let index = out.len();
        out.push(Instance { index, n, tag });
    };
    match law {
        Law::Period2Window => {
            for n in params.n_min.max(3)..=params.n_max {
                // Boundary totals first, then random ones.
                push(n, (n * n - n + 1) as u64);
                push(n, (n * n - 1) as u64);
                for _ in 0..params.trials {
                    push(n, 0);
                }
            }
        }
        Law::PqConstruction => {
            for n in params.n_min.max(2)..=params.n_max {
                for q in 2..=n as u64 {
                    for p in 1..=q / 2 {
                        if p.gcd(&q) == 1 {
                            push(n, p << 32 | q);
                        }
                    }
                }
            }
        }
        Law::DenominatorLemma => {
            for k in 0..=SWEEP_N as u64 {
                push(SWEEP_N, k + 1);
            }
            random_sizes(params, &mut push);
        }
        _ => random_sizes(params, &mut push),
    }
    if out.is_empty() {
        return Err(Error::InvalidParams(format!(
            "no instances of {law} for n in {}..={}",
            params.n_min, params.n_max
        )));
    }
    Ok(out)
}

/// `trials` instances with `n` spread evenly over `n_min..=n_max`.
fn random_sizes(params: &LawParams, push: &mut impl FnMut(usize, u64)) {
    let span = params.n_max - params.n_min + 1;
    for i in 0..params.trials {
        push(params.n_min + i % span, 0);
    }
}

pub(crate) fn run(law: Law, inst: &Instance, rng: &mut ChaCha8Rng) -> Check {
    let n = inst.n;
    match law {
        Law::Conservation => conservation(&random_general(n, rng)),
        Law::Congruence => congruence(&random_general(n, rng)),
        Law::OdometerIdentity => odometer_identity(&random_general(n, rng)),
        Law::ConstantOdometer => constant_odometer(&random_preconfined(n, rng)),
        Law::Interlacing => interlacing(&random_confined(n, rng)),
        Law::Divisibility => divisibility(&random_confined(n, rng)),
        Law::PeriodBound => period_bound(&random_general(n, rng)),
        Law::ConfinementAbsorption => confinement_absorption(&random_by_total(n, rng)),
        Law::DenominatorLemma => {
            let c = if inst.tag > 0 {
                slope2_config(n)
                    .and_then(|c| c.add_to_all(inst.tag - 1))
                    .expect("slope2 sweep")
            } else {
                random_by_total(n, rng)
            };
            denominator_lemma(&c)
        }
        Law::Conjugation => conjugation(&random_preconfined(n, rng), rng),
        Law::Reflection => reflection(&random_preconfined(n, rng)),
        Law::U2Lemma => u2_lemma(n, rng),
        Law::Period2Window => {
            let total = if inst.tag > 0 {
                inst.tag
            } else {
                rng.gen_range((n * n - n + 1) as u64..=(n * n - 1) as u64)
            };
            period2_window(&random_composition(n, total, rng))
        }
        Law::PqConstruction => pq(n, inst.tag >> 32, inst.tag & 0xFFFF_FFFF),
        Law::Functoriality => functoriality(&random_preconfined(n, rng)),
        Law::LiftOrbit => lift_orbit(&random_preconfined(n, rng)),
    }
}

fn horizon(n: usize) -> u64 {
    3 * n as u64 + 4
}

fn conservation(c: &ChipConfig) -> Check {
    let total = c.total_chips();
    let mut run = Evolution::new(c);
    for _ in 0..horizon(c.n()) {
        run.step();
        let now: u64 = run.heights().iter().sum();
        if now != total {
            return Err(fail(c, format!("total {now} != {total} at t={}", run.t())));
        }
    }
    Ok(Outcome::Checked)
}

fn congruence(c: &ChipConfig) -> Check {
    let n = c.n() as i128;
    let h0: Vec<i128> = c.heights().iter().map(|&h| h as i128).collect();
    let mut run = Evolution::new(c);
    for _ in 0..horizon(c.n()) {
        run.step();
        let h = run.heights();
        let base = h[0] as i128 - h0[0];
        for v in 1..h.len() {
            if (h[v] as i128 - h0[v] - base).rem_euclid(n) != 0 {
                return Err(fail(
                    c,
                    format!("vertices 1,{} drift mod n at t={}", v + 1, run.t()),
                ));
            }
        }
    }
    Ok(Outcome::Checked)
}

fn odometer_identity(c: &ChipConfig) -> Check {
    let n = c.n() as i128;
    let mut run = Evolution::new(c);
    for _ in 0..horizon(c.n()) {
        run.step();
        for v in 0..c.n() {
            let lhs = run.heights()[v] as i128 - c.heights()[v] as i128;
            let rhs = run.alpha() as i128 - n * run.u()[v] as i128;
            if lhs != rhs {
                return Err(fail(
                    c,
                    format!("vertex {} at t={}: {lhs} != {rhs}", v + 1, run.t()),
                ));
            }
        }
    }
    Ok(Outcome::Checked)
}

/// Checks `pred(start, run)` over `1..=steps` updates from `start`.
fn along_orbit(
    c: &ChipConfig,
    start: &ChipConfig,
    steps: u64,
    mut pred: impl FnMut(&Evolution) -> Option<String>,
) -> std::result::Result<(), Failure> {
    let mut run = Evolution::new(start);
    for _ in 0..steps {
        run.step();
        if let Some(msg) = pred(&run) {
            return Err(fail(c, format!("t={}: {msg}", run.t())));
        }
    }
    Ok(())
}

/// Tests both `σ` and the first recurrent state of its orbit, so that the
/// "returns to itself" side of an equivalence is exercised.
fn on_sigma_and_cycle(
    c: &ChipConfig,
    mut pred: impl FnMut(&ChipConfig, &Evolution) -> Option<String>,
) -> Check {
    let s = summary(c)?;
    let recurrent = c.update_times(s.transient);
    for start in [c, &recurrent] {
        let steps = horizon(c.n()).max(2 * s.period + 1);
        along_orbit(c, start, steps, |run| pred(start, run))?;
    }
    Ok(Outcome::Checked)
}

fn constant_odometer(c: &ChipConfig) -> Check {
    on_sigma_and_cycle(c, |start, run| {
        let returned = run.heights() == start.heights();
        let constant = run.u().iter().all(|&u| u == run.u()[0]);
        (returned != constant).then(|| format!("returned={returned} constant_odometer={constant}"))
    })
}

fn divisibility(c: &ChipConfig) -> Check {
    let n = c.n() as u64;
    on_sigma_and_cycle(c, |start, run| {
        debug_assert!(start.is_confined());
        let returned = run.heights() == start.heights();
        let divides = run.alpha() % n == 0;
        (returned != divides).then(|| format!("returned={returned} n|alpha={divides}"))
    })
}

fn interlacing(c: &ChipConfig) -> Check {
    let h = c.heights();
    let mut run = Evolution::new(c);
    for _ in 0..horizon(c.n()) {
        run.step();
        let u = run.u();
        for v in 0..h.len() {
            for w in 0..h.len() {
                if h[v] <= h[w] && !(u[v] <= u[w] && u[w] <= u[v] + 1) {
                    return Err(fail(
                        c,
                        format!("t={}: u({})={} u({})={}", run.t(), v + 1, u[v], w + 1, u[w]),
                    ));
                }
            }
        }
    }
    Ok(Outcome::Checked)
}

fn period_bound(c: &ChipConfig) -> Check {
    let s = summary(c)?;
    let distinct = c.distinct_heights() as u64;
    if s.period > distinct || distinct > c.n() as u64 {
        return Err(fail(
            c,
            format!("period {} > {distinct} distinct heights", s.period),
        ));
    }
    Ok(Outcome::Checked)
}

fn confinement_absorption(c: &ChipConfig) -> Check {
    let s = summary(c)?;
    if s.activity == Rational::ONE {
        return Ok(Outcome::Vacuous);
    }
    let mut state = c.update_times(s.transient);
    for t in s.transient..=s.transient + s.period {
        if !state.is_confined() {
            return Err(fail(c, format!("recurrent state at t={t} is not confined")));
        }
        state = state.update().0;
    }
    Ok(Outcome::Checked)
}

fn denominator_lemma(c: &ChipConfig) -> Check {
    let s = summary(c)?;
    if s.period != s.activity.den() {
        return Err(fail(
            c,
            format!("activity {} but period {}", s.activity, s.period),
        ));
    }
    Ok(Outcome::Checked)
}

fn conjugation(c: &ChipConfig, rng: &mut ChaCha8Rng) -> Check {
    let n = c.n();
    if conjugate(c, n).ok().as_ref() != Some(c) {
        return Err(fail(c, "c^n σ != σ"));
    }
    let valid: Vec<usize> = (1..=n).filter(|&j| conjugate(c, j).is_ok()).collect();
    let j = valid[rng.gen_range(0..valid.len())];
    let cj = conjugate(c, j).expect("valid j");
    let (a, b) = (summary(c)?.activity, summary(&cj)?.activity);
    if a != b {
        return Err(fail(c, format!("j={j}: a(σ)={a} but a(c^jσ)={b}")));
    }
    Ok(Outcome::Checked)
}

fn reflection(c: &ChipConfig) -> Check {
    let tau = reflect(c).map_err(|e| fail(c, e.to_string()))?;
    let (a, b) = (summary(c)?.activity, summary(&tau)?.activity);
    if a.num() * b.den() + b.num() * a.den() != a.den() * b.den() {
        return Err(fail(c, format!("a(σ)={a}, a(τ)={b}")));
    }
    Ok(Outcome::Checked)
}

/// Samples until `u_2(σ, ·) ≥ 1`; instances that never meet it are vacuous.
fn u2_lemma(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let n64 = n as u64;
    for _ in 0..64 {
        let lo = rng.gen_range(0..n64);
        let c =
            ChipConfig::new((0..n).map(|_| rng.gen_range(lo..2 * n64)).collect()).expect("n >= 1");
        let mut run = Evolution::new(&c);
        run.advance(2);
        if run.u().contains(&0) {
            continue;
        }
        let mut run = Evolution::new(&c);
        for t in 1..=horizon(n) {
            run.advance(2);
            if let Some(v) = run.u().iter().position(|&u| u < t) {
                return Err(fail(
                    &c,
                    format!("u_{}({}) = {} < {t}", 2 * t, v + 1, run.u()[v]),
                ));
            }
        }
        return Ok(Outcome::Checked);
    }
    Ok(Outcome::Vacuous)
}

fn period2_window(c: &ChipConfig) -> Check {
    let s = summary(c)?;
    if s.period != 2 || s.activity != Rational::new(1, 2) {
        return Err(fail(
            c,
            format!(
                "|σ|={}: period {} activity {}",
                c.total_chips(),
                s.period,
                s.activity
            ),
        ));
    }
    Ok(Outcome::Checked)
}

fn pq(n: usize, p: u64, q: u64) -> Check {
    let c = pq_construction(n, p, q).map_err(|e| Failure {
        heights: vec![],
        detail: e.to_string(),
    })?;
    let s = summary(&c)?;
    if s.activity != Rational::new(p, q) || s.period != q {
        return Err(fail(
            &c,
            format!("p/q={p}/{q}: activity {} period {}", s.activity, s.period),
        ));
    }
    Ok(Outcome::Checked)
}

fn functoriality(c: &ChipConfig) -> Check {
    let f = lift_from_config(c).map_err(|e| fail(c, e.to_string()))?;
    let (next, _) = c.update();
    let g = lift_from_config(&next).map_err(|e| fail(c, e.to_string()))?;
    if !g.same_function(&update_lift(&f), 0.0) {
        return Err(fail(c, "lift(Uσ) != U(lift(σ))"));
    }
    Ok(Outcome::Checked)
}

fn lift_orbit(c: &ChipConfig) -> Check {
    let n = c.n();
    let f = lift_from_config(c).map_err(|e| fail(c, e.to_string()))?;
    let mut run = Evolution::new(c);
    let mut x = Q::from_integer(0);
    for t in 1..=2 * n as u64 {
        run.step();
        x = f.eval(x);
        let want = Q::new(run.alpha() as i128, n as i128);
        if x != want {
            return Err(fail(c, format!("t={t}: f^t(0)={x} but α_t/n={want}")));
        }
    }
    Ok(Outcome::Checked)
}
