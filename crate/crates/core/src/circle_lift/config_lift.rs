use std::collections::HashMap;

use crate::chip_core::{self, ChipConfig};
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::lift::{ExactLift, MonotoneLift};
use super::scalar::{Scalar, Q};

/// The lift `f` attached to a preconfined configuration.
///
/// Vertex `v` spreads mass `1/n` uniformly over `[σ(v)/n, (σ(v)+1)/n)`, so
/// the height distribution `μ` has density `c_h` (the number of vertices at
/// height `h`) on `[h/n, (h+1)/n)`. On `[0, 1]`,
/// `f(y) = μ[1,2) + μ(1-y, 1] + μ(2-y, 2]`, which is linear on each
/// `[k/n, (k+1)/n]` with integer slope `c_{n-1-k} + c_{2n-1-k}` and starts
/// at `f(0) = r(σ)/n`.
pub fn lift_from_config(c: &ChipConfig) -> Result<ExactLift> {
    let n = c.n();
    let limit = 2 * n as u64 - 1;
    if let Some((v, &h)) = c.heights().iter().enumerate().find(|(_, &h)| h > limit) {
        return Err(Error::NotPreconfined {
            vertex: v + 1,
            height: h,
            limit,
        });
    }
    let mut counts = vec![0i128; 2 * n];
    for &h in c.heights() {
        counts[h as usize] += 1;
    }
    let n128 = n as i128;
    let mut value = c.firing_count() as i128;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for k in 0..n {
        xs.push(Q::new(k as i128, n128));
        ys.push(Q::new(value, n128));
        value += counts[n - 1 - k] + counts[2 * n - 1 - k];
    }
    debug_assert_eq!(value, c.firing_count() as i128 + n128);
    MonotoneLift::new(xs, ys)
}

/// Rotation number of an exact lift whose orbit of `0` is eventually
/// periodic modulo 1, read off the first repeat: if
/// `f^t(0) = f^s(0) + k` then `ρ = k / (t - s)`.
///
/// Integer-slope lifts with knots on a grid `1/N` map the grid to itself,
/// so the repeat occurs within `N + 1` iterations.
pub fn rotation_number_from_orbit(f: &ExactLift, max_iter: u64) -> Option<Rational> {
    let mut seen: HashMap<Q, (u64, Q)> = HashMap::new();
    let mut x = Q::zero();
    for t in 0..=max_iter {
        let frac = x.fract_part();
        if let Some(&(s, xs)) = seen.get(&frac) {
            let k = x - xs;
            debug_assert!(k.is_integer());
            let k = u64::try_from(*k.numer()).ok()?;
            return Some(Rational::new(k, t - s));
        }
        seen.insert(frac, (t, x));
        x = f.eval(x);
    }
    None
}

/// Exact rotation number of `lift_from_config(c)`, computed both from the
/// chip-firing simulation and from the lift's own orbit; the two agree.
pub fn rotation_number_exact(c: &ChipConfig, max_steps: u64) -> Result<Rational> {
    let f = lift_from_config(c)?;
    let simulated = chip_core::activity(c, max_steps)?;
    let orbit = rotation_number_from_orbit(&f, c.n() as u64 + 1)
        .expect("grid orbit repeats within n + 1 iterations");
    assert_eq!(
        simulated,
        orbit,
        "activity and rotation number disagree for {:?}",
        c.heights()
    );
    Ok(orbit)
}
