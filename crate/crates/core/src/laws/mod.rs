//! Configuration families, symmetry transformations, and the structural
//! laws of parallel chip-firing on `K_n` as executable checks.

mod checks;
mod families;
mod sampling;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use families::{
    conjugate, pq_construction, realize_activity, reflect, slope2_config, FamilySpec,
};
pub use sampling::{
    random_by_total, random_composition, random_confined, random_general, random_preconfined,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// Total chips are preserved by every update.
    Conservation,
    /// `U^tσ(v) - U^tσ(w) ≡ σ(v) - σ(w) (mod n)`.
    Congruence,
    /// `U^tσ(v) - σ(v) = α_t - n·u_t(σ, v)`.
    OdometerIdentity,
    /// `U^tσ = σ` iff `u_t(σ, ·)` is constant.
    ConstantOdometer,
    /// Confined `σ(v) ≤ σ(w)` gives `u_t(v) ≤ u_t(w) ≤ u_t(v) + 1`.
    Interlacing,
    /// Confined `σ`: `U^tσ = σ` iff `n | α_t`.
    Divisibility,
    /// Eventual period at most the number of distinct heights.
    PeriodBound,
    /// Activity below 1 means every recurrent state is confined.
    ConfinementAbsorption,
    /// Activity `p/q` in lowest terms means eventual period `q`.
    DenominatorLemma,
    /// `a(c^j σ) = a(σ)`, and `c^n σ = σ`.
    Conjugation,
    /// `a(σ) + a(2n - 1 - σ) = 1`.
    Reflection,
    /// `u_2(σ, ·) ≥ 1` gives `u_{2t}(σ, ·) ≥ t`.
    U2Lemma,
    /// `n² - n < |σ| < n²` gives eventual period 2.
    Period2Window,
    /// The `p/q` construction has activity `p/q` and period `q`.
    PqConstruction,
    /// The configuration lift intertwines the two updates.
    Functoriality,
    /// `f^t(0) = α_t / n` for the configuration lift.
    LiftOrbit,
}

impl Law {
    pub const ALL: [Law; 16] = [
        Law::Conservation,
        Law::Congruence,
        Law::OdometerIdentity,
        Law::ConstantOdometer,
        Law::Interlacing,
        Law::Divisibility,
        Law::PeriodBound,
        Law::ConfinementAbsorption,
        Law::DenominatorLemma,
        Law::Conjugation,
        Law::Reflection,
        Law::U2Lemma,
        Law::Period2Window,
        Law::PqConstruction,
        Law::Functoriality,
        Law::LiftOrbit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Conservation => "conservation",
            Law::Congruence => "congruence",
            Law::OdometerIdentity => "odometer_identity",
            Law::ConstantOdometer => "constant_odometer",
            Law::Interlacing => "interlacing",
            Law::Divisibility => "divisibility",
            Law::PeriodBound => "period_bound",
            Law::ConfinementAbsorption => "confinement_absorption",
            Law::DenominatorLemma => "denominator_lemma",
            Law::Conjugation => "conjugation",
            Law::Reflection => "reflection",
            Law::U2Lemma => "u2_lemma",
            Law::Period2Window => "period2_window",
            Law::PqConstruction => "pq_construction",
            Law::Functoriality => "functoriality",
            Law::LiftOrbit => "lift_orbit",
        }
    }

    /// A named suite: one law, or `all`.
    pub fn suite(name: &str) -> Result<Vec<Law>> {
        if name == "all" {
            Ok(Law::ALL.to_vec())
        } else {
            Ok(vec![name.parse()?])
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawParams {
    pub n_min: usize,
    pub n_max: usize,
    /// Random instances; for `period2_window` this is per `n`, and
    /// `pq_construction` is exhaustive and ignores it.
    pub trials: usize,
    pub seed: u64,
}

impl Default for LawParams {
    fn default() -> Self {
        LawParams {
            n_min: 2,
            n_max: 64,
            trials: 100,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: usize,
    pub n: usize,
    pub heights: Vec<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: Law,
    pub instances: usize,
    /// Instances where the hypothesis held and the conclusion was tested.
    pub checked: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

/// One instance of a law: its index fixes the random stream.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Instance {
    pub index: usize,
    pub n: usize,
    /// Law-specific selector (e.g. `k` in a sweep, `(p, q)` packed).
    pub tag: u64,
}

pub(crate) enum Outcome {
    Checked,
    Vacuous,
}

pub(crate) struct Failure {
    pub heights: Vec<u64>,
    pub detail: String,
}

fn mix(seed: u64, law: Law, index: usize) -> u64 {
    // splitmix64 finalizer over the combined key.
    let mut z =
        seed ^ ((law as u64 + 1) << 48) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `law` on deterministic pseudo-random instances derived from `seed`.
/// The report does not depend on the number of worker threads.
pub fn check_law(law: Law, params: &LawParams) -> Result<LawReport> {
    if params.n_min < 1 || params.n_min > params.n_max {
        return Err(Error::InvalidParams(format!(
            "need 1 <= n_min <= n_max, got {}..={}",
            params.n_min, params.n_max
        )));
    }
    let instances = checks::instances(law, params)?;
    let results: Vec<std::result::Result<Outcome, Failure>> = instances
        .par_iter()
        .map(|inst| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(params.seed, law, inst.index));
            checks::run(law, inst, &mut rng)
        })
        .collect();

    let mut checked = 0;
    let mut counterexample = None;
    for (inst, res) in instances.iter().zip(results) {
        match res {
            Ok(Outcome::Checked) => checked += 1,
            Ok(Outcome::Vacuous) => {}
            Err(f) => {
                counterexample.get_or_insert(Counterexample {
                    instance: inst.index,
                    n: inst.n,
                    heights: f.heights,
                    detail: f.detail,
                });
            }
        }
    }
    Ok(LawReport {
        law,
        instances: instances.len(),
        checked,
        passed: counterexample.is_none(),
        counterexample,
    })
}

pub fn check_suite(name: &str, params: &LawParams) -> Result<Vec<LawReport>> {
    Law::suite(name)?
        .into_iter()
        .map(|law| check_law(law, params))
        .collect()
}
