//! Parallel chip-firing on the complete graph `K_n`.
//!
//! A vertex holding at least `n` chips is unstable and fires by sending one
//! chip to every vertex, itself included. The parallel update fires every
//! unstable vertex at once, so a vertex gains `r` chips (the number of
//! unstable vertices) and additionally loses `n` if it fired.
//!
//! Vertices are labelled `1..=n` in the mathematical statements; slices here
//! are 0-indexed, so vertex `v` lives at index `v - 1`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Chips per vertex on `K_n`, with `n = heights.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChipConfig {
    heights: Vec<u64>,
}

impl ChipConfig {
    pub fn new(heights: Vec<u64>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::InvalidConfig("need at least one vertex".into()));
        }
        heights
            .iter()
            .try_fold(0u64, |acc, &h| acc.checked_add(h))
            .ok_or_else(|| Error::InvalidConfig("total chip count overflows u64".into()))?;
        Ok(ChipConfig { heights })
    }

    pub fn constant(n: usize, height: u64) -> Result<Self> {
        Self::new(vec![height; n])
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0)
    }

    pub fn n(&self) -> usize {
        self.heights.len()
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    pub fn into_heights(self) -> Vec<u64> {
        self.heights
    }

    pub fn total_chips(&self) -> u64 {
        self.heights.iter().sum()
    }

    pub fn min_height(&self) -> u64 {
        *self.heights.iter().min().expect("nonempty")
    }

    pub fn max_height(&self) -> u64 {
        *self.heights.iter().max().expect("nonempty")
    }

    /// `σ + k`: `k` extra chips on every vertex.
    pub fn add_to_all(&self, k: u64) -> Result<Self> {
        let heights = self
            .heights
            .iter()
            .map(|&h| h.checked_add(k))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidConfig("height overflows u64".into()))?;
        Self::new(heights)
    }

    /// Number of unstable vertices, `#{v : σ(v) ≥ n}`.
    pub fn firing_count(&self) -> usize {
        firing_count_of(&self.heights)
    }

    /// Number of distinct values among the heights.
    pub fn distinct_heights(&self) -> usize {
        let mut sorted = self.heights.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len()
    }

    /// Every height is at most `2n - 1`.
    pub fn is_preconfined(&self) -> bool {
        is_preconfined_slice(&self.heights)
    }

    /// Preconfined, and the height spread is at most `n - 1`.
    pub fn is_confined(&self) -> bool {
        let confined = is_confined_slice(&self.heights);
        debug_assert!(!confined || self.is_preconfined());
        confined
    }

    pub fn is_stable(&self) -> bool {
        self.firing_count() == 0
    }

    /// One parallel update. Returns `Uσ` and the number of vertices fired.
    pub fn update(&self) -> (ChipConfig, usize) {
        let mut heights = self.heights.clone();
        let fired = step_in_place(&mut heights);
        (ChipConfig { heights }, fired)
    }

    /// `U^t σ`.
    pub fn update_times(&self, t: u64) -> ChipConfig {
        let mut heights = self.heights.clone();
        for _ in 0..t {
            step_in_place(&mut heights);
        }
        ChipConfig { heights }
    }
}

/// Applies `U` to `heights` in place and returns the number of firings.
pub fn step_in_place(heights: &mut [u64]) -> usize {
    let n = heights.len() as u64;
    let r = firing_count_of(heights);
    let gain = r as u64;
    for h in heights.iter_mut() {
        if *h >= n {
            *h = *h - n + gain;
        } else {
            *h += gain;
        }
    }
    r
}

fn firing_count_of(heights: &[u64]) -> usize {
    let n = heights.len() as u64;
    heights.iter().filter(|&&h| h >= n).count()
}

fn is_preconfined_slice(heights: &[u64]) -> bool {
    let limit = 2 * heights.len() as u64 - 1;
    heights.iter().all(|&h| h <= limit)
}

fn is_confined_slice(heights: &[u64]) -> bool {
    let n = heights.len() as u64;
    let (lo, hi) = heights
        .iter()
        .fold((u64::MAX, 0), |(lo, hi), &h| (lo.min(h), hi.max(h)));
    hi < 2 * n && hi - lo < n
}

/// `U σ` together with `r(σ)`.
pub fn parallel_update(c: &ChipConfig) -> (ChipConfig, usize) {
    c.update()
}

pub fn firing_count(c: &ChipConfig) -> usize {
    c.firing_count()
}

pub fn distinct_heights(c: &ChipConfig) -> usize {
    c.distinct_heights()
}

pub fn is_confined(c: &ChipConfig) -> bool {
    c.is_confined()
}

pub fn is_preconfined(c: &ChipConfig) -> bool {
    c.is_preconfined()
}

/// Firings at step `t` and the cumulative count before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    /// `r_t`, vertices fired by the update applied to `U^t σ`.
    pub fired: u64,
    /// `α_t`, total firings in the first `t` updates.
    pub alpha: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub n: usize,
    pub transient: u64,
    pub period: u64,
    pub activity: Rational,
    /// Steps `0..=witness.1`.
    pub alpha_trace: Vec<StepRecord>,
    /// `(s, t)` with `U^s σ = U^t σ`.
    pub cycle_witness: (u64, u64),
}

/// Default update budget, `64·n²`.
pub fn default_budget(n: usize) -> u64 {
    64 * (n as u64) * (n as u64)
}

/// Runs `σ` until its eventual cycle is certified.
///
/// Fixed points are caught directly: `r_t = 0` is a stable state and
/// `r_t = n` a full-firing one. Otherwise, once the state is confined, two
/// confined states `U^s σ` and `U^t σ` coincide exactly when
/// `α_s ≡ α_t (mod n)`, so the first repeated residue gives both the
/// transient and the minimal period while storing one entry per step.
pub fn simulate_to_cycle(c: &ChipConfig, max_steps: u64) -> Result<SimulationSummary> {
    if max_steps == 0 {
        return Err(Error::InvalidParams("max_steps must be at least 1".into()));
    }
    let n = c.n();
    let n64 = n as u64;
    let mut heights = c.heights.clone();
    let mut alpha: u64 = 0;
    let mut trace = Vec::new();
    let mut confined = false;
    let mut seen: HashMap<u64, (u64, u64)> = HashMap::new();

    for t in 0..=max_steps {
        let r = firing_count_of(&heights) as u64;
        trace.push(StepRecord { t, fired: r, alpha });

        if r == 0 || r == n64 {
            return Ok(SimulationSummary {
                n,
                transient: t,
                period: 1,
                activity: Rational::new(r, n64),
                alpha_trace: trace,
                cycle_witness: (t, t + 1),
            });
        }

        if !confined {
            confined = is_confined_slice(&heights);
        }
        if confined {
            debug_assert!(heights.iter().all(|&h| h < 2 * n64));
            if let Some(&(s, alpha_s)) = seen.get(&(alpha % n64)) {
                let period = t - s;
                return Ok(SimulationSummary {
                    n,
                    transient: s,
                    period,
                    activity: Rational::from_u128(
                        (alpha - alpha_s) as u128,
                        period as u128 * n64 as u128,
                    ),
                    alpha_trace: trace,
                    cycle_witness: (s, t),
                });
            }
            seen.insert(alpha % n64, (t, alpha));
        }

        if t == max_steps {
            break;
        }
        step_in_place(&mut heights);
        alpha += r;
    }
    Err(Error::BudgetExceeded { steps: max_steps })
}

pub fn activity(c: &ChipConfig, max_steps: u64) -> Result<Rational> {
    simulate_to_cycle(c, max_steps).map(|s| s.activity)
}

/// Per-vertex firing counts `u_t(σ, v)` after `t` updates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdometerTrace {
    pub t: u64,
    pub u: Vec<u64>,
    pub alpha: u64,
}

pub fn odometer(c: &ChipConfig, t: u64) -> OdometerTrace {
    let mut run = Evolution::new(c);
    run.advance(t);
    run.odometer()
}

/// Step-by-step orbit of a configuration with its odometer.
#[derive(Clone, Debug)]
pub struct Evolution {
    heights: Vec<u64>,
    u: Vec<u64>,
    alpha: u64,
    t: u64,
}

impl Evolution {
    pub fn new(c: &ChipConfig) -> Self {
        Evolution {
            heights: c.heights.clone(),
            u: vec![0; c.n()],
            alpha: 0,
            t: 0,
        }
    }

    /// Applies one update and returns the number of firings.
    pub fn step(&mut self) -> u64 {
        let n = self.heights.len() as u64;
        for (h, u) in self.heights.iter().zip(self.u.iter_mut()) {
            if *h >= n {
                *u += 1;
            }
        }
        let r = step_in_place(&mut self.heights) as u64;
        self.alpha += r;
        self.t += 1;
        r
    }

    pub fn advance(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    pub fn config(&self) -> ChipConfig {
        ChipConfig {
            heights: self.heights.clone(),
        }
    }

    pub fn u(&self) -> &[u64] {
        &self.u
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn odometer(&self) -> OdometerTrace {
        OdometerTrace {
            t: self.t,
            u: self.u.clone(),
            alpha: self.alpha,
        }
    }
}
