//! Reference implementations kept deliberately naive: full-state hashing for
//! cycles, and plain `u64` arithmetic for the update.
#![allow(dead_code)]

use std::collections::HashMap;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn reduce(p: u64, q: u64) -> (u64, u64) {
    let g = gcd(p, q);
    (p / g, q / g)
}

/// One parallel update; returns the number of vertices that fired.
pub fn naive_step(h: &mut [u64]) -> u64 {
    let n = h.len() as u64;
    let fired: Vec<bool> = h.iter().map(|&x| x >= n).collect();
    let r = fired.iter().filter(|&&f| f).count() as u64;
    for (x, f) in h.iter_mut().zip(fired) {
        if f {
            *x -= n;
        }
        *x += r;
    }
    r
}

/// `α_0, …, α_t`.
pub fn naive_alphas(h: &[u64], t: usize) -> Vec<u64> {
    let mut h = h.to_vec();
    let mut out = vec![0];
    for _ in 0..t {
        let r = naive_step(&mut h);
        out.push(out.last().unwrap() + r);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NaiveCycle {
    pub transient: u64,
    pub period: u64,
    /// Reduced `(p, q)`.
    pub activity: (u64, u64),
}

/// First repeated state by hashing whole configurations.
pub fn naive_cycle(h: &[u64]) -> NaiveCycle {
    let n = h.len() as u64;
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut alphas = vec![0u64];
    let mut state = h.to_vec();
    let mut t = 0u64;
    loop {
        if let Some(&s) = seen.get(&state) {
            let m = t - s;
            let fired = alphas[t as usize] - alphas[s as usize];
            return NaiveCycle {
                transient: s,
                period: m,
                activity: reduce(fired, m * n),
            };
        }
        seen.insert(state.clone(), t);
        let r = naive_step(&mut state);
        alphas.push(alphas.last().unwrap() + r);
        t += 1;
    }
}

/// All height vectors of length `n` with entries in `0..=top`.
pub fn all_configs(n: usize, top: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (top + 1).pow(n as u32);
    (0..total).map(move |mut i| {
        (0..n)
            .map(|_| {
                let h = i % (top + 1);
                i /= top + 1;
                h
            })
            .collect()
    })
}

/// The lift of a preconfined configuration, evaluated from its definition:
/// `f(0) = r/n` and slope `c_{n-1-k} + c_{2n-1-k}` on `[k/n, (k+1)/n]`.
/// Returns `f(x)` for rational `x = num/den` as a rational `(num, den)` with
/// `den = n * den_x`, computed in `i128`.
pub fn naive_lift_at(h: &[u64], num: i128, den: i128) -> (i128, i128) {
    let n = h.len() as i128;
    let count = |height: i128| h.iter().filter(|&&x| x as i128 == height).count() as i128;
    let r = h.iter().filter(|&&x| x as i128 >= n).count() as i128;
    let whole = num.div_euclid(den);
    let frac = num.rem_euclid(den);
    // f(frac/den) in units of 1/(n·den).
    let mut acc = r * den;
    for k in 0..n {
        let lo = k * den;
        let hi = (k + 1) * den;
        let x = frac * n;
        if x <= lo {
            break;
        }
        let slope = count(n - 1 - k) + count(2 * n - 1 - k);
        acc += slope * (x.min(hi) - lo);
    }
    (acc + whole * n * den, n * den)
}
