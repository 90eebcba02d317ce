//! Phase diagrams `k ↦ a(σ_n + k)`, their activity census, and the limiting
//! devil's staircase `y ↦ ρ(Φ_y)`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chip_core::{default_budget, simulate_to_cycle};
use crate::circle_lift::{
    lift_from_cdf, lift_from_config, rotation_number_numeric, CdfSpec, PhiFamily, RotationEstimate,
    RotationOptions,
};
use crate::error::{Error, Result};
use crate::laws::FamilySpec;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub k: u64,
    pub activity: Rational,
    pub period: u64,
    pub transient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub n: usize,
    pub family: FamilySpec,
    /// One row per `k = 0..=n`.
    pub rows: Vec<PhaseRow>,
}

impl PhaseDiagram {
    pub fn activities(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.activity).collect()
    }

    pub fn census(&self) -> Census {
        census(self)
    }

    /// Activities never decrease as chips are added.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].activity <= w[1].activity)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["k", "activity_num", "activity_den", "period", "transient"])?;
        for r in &self.rows {
            out.write_record(&[
                r.k.to_string(),
                r.activity.num().to_string(),
                r.activity.den().to_string(),
                r.period.to_string(),
                r.transient.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads rows written by [`PhaseDiagram::write_csv`]; `n` is the last `k`.
    pub fn read_csv<R: Read>(r: R, family: FamilySpec) -> Result<Self> {
        let mut input = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for rec in input.records() {
            let rec = rec?;
            let field = |i: usize| -> Result<u64> {
                rec.get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad field {i} in row {}", rows.len() + 1)))
            };
            rows.push(PhaseRow {
                k: field(0)?,
                activity: Rational::try_new(field(1)?, field(2)?)?,
                period: field(3)?,
                transient: field(4)?,
            });
        }
        let n = rows.last().map(|r| r.k as usize).unwrap_or(0);
        Ok(PhaseDiagram { n, family, rows })
    }
}

/// Runs `σ_n + k` for every `k = 0..=n`, in parallel. The budget defaults to
/// `64·n²` updates per `k`.
pub fn phase_diagram(family: &FamilySpec, n: usize, budget: Option<u64>) -> Result<PhaseDiagram> {
    let base = family.config(n)?;
    let budget = budget.unwrap_or_else(|| default_budget(n));
    let rows = (0..=n as u64)
        .into_par_iter()
        .map(|k| {
            let s = simulate_to_cycle(&base.add_to_all(k)?, budget).map_err(|e| match e {
                Error::BudgetExceeded { steps } => Error::BudgetExceededAt { k, steps },
                e => e,
            })?;
            Ok(PhaseRow {
                k,
                activity: s.activity,
                period: s.period,
                transient: s.transient,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram {
        n,
        family: family.clone(),
        rows,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub counts: BTreeMap<Rational, usize>,
    /// Rows whose period equals the activity denominator.
    pub period_matches: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, r: Rational) -> usize {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn max_denominator(&self) -> u64 {
        self.counts.keys().map(|r| r.den()).max().unwrap_or(0)
    }

    /// Values grouped by denominator.
    pub fn by_denominator(&self) -> BTreeMap<u64, Vec<(Rational, usize)>> {
        let mut out: BTreeMap<u64, Vec<(Rational, usize)>> = BTreeMap::new();
        for (&r, &c) in &self.counts {
            out.entry(r.den()).or_default().push((r, c));
        }
        out
    }

    /// Share of rows whose reduced activity has denominator `q`.
    pub fn denominator_fraction(&self, q: u64) -> f64 {
        let hits: usize = self
            .counts
            .iter()
            .filter(|(r, _)| r.den() == q)
            .map(|(_, &c)| c)
            .sum();
        match self.total() {
            0 => 0.0,
            t => hits as f64 / t as f64,
        }
    }

    pub fn fraction_with_period(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => self.period_matches as f64 / t as f64,
        }
    }
}

pub fn census(d: &PhaseDiagram) -> Census {
    let mut c = Census::default();
    for r in &d.rows {
        *c.counts.entry(r.activity).or_default() += 1;
        if r.period == r.activity.den() {
            c.period_matches += 1;
        }
    }
    c
}

/// `ρ(Φ_y)`.
pub fn limit_value(cdf: &CdfSpec, y: f64, opts: &RotationOptions) -> Result<RotationEstimate> {
    Ok(rotation_number_numeric(
        &lift_from_cdf(cdf, y, opts.cdf_grid)?,
        opts,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircasePoint {
    pub y: f64,
    pub estimate: RotationEstimate,
}

/// `ρ(Φ_y)` at `y_i = i / (grid - 1)`, `i = 0..grid`.
pub fn limit_staircase(
    cdf: &CdfSpec,
    grid: usize,
    opts: &RotationOptions,
) -> Result<Vec<StaircasePoint>> {
    if grid < 2 {
        return Err(Error::InvalidParams(format!(
            "staircase grid must be >= 2, got {grid}"
        )));
    }
    let family = PhiFamily::new(cdf, opts.cdf_grid)?;
    Ok((0..grid)
        .into_par_iter()
        .map(|i| {
            let y = i as f64 / (grid - 1) as f64;
            StaircasePoint {
                y,
                estimate: rotation_number_numeric(&family.at(y), opts),
            }
        })
        .collect())
}

pub fn write_staircase_csv<W: Write>(points: &[StaircasePoint], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["y", "rot_lower", "rot_upper", "snapped_num", "snapped_den"])?;
    for p in points {
        let (num, den) = p
            .estimate
            .snapped
            .map_or((String::new(), String::new()), |r| {
                (r.num().to_string(), r.den().to_string())
            });
        out.write_record(&[
            p.y.to_string(),
            p.estimate.lower.to_string(),
            p.estimate.upper.to_string(),
            num,
            den,
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// One `(n, y)` comparison of `a(σ_n + ⌊ny⌋)` against `ρ(Φ_y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub n: usize,
    pub y: f64,
    pub k: u64,
    pub activity: Rational,
    pub limit: RotationEstimate,
    /// Distance from the activity to the bracket of `ρ(Φ_y)` (0 inside).
    pub deviation: f64,
    /// The activity equals the snapped limit.
    pub exact_match: bool,
    /// `sup |f_{n,y} - Φ∘R_y|` over `[0, 1]`.
    pub lift_distance: f64,
}

pub fn convergence_report(
    family: &FamilySpec,
    cdf: &CdfSpec,
    n_list: &[usize],
    y_list: &[f64],
    opts: &RotationOptions,
) -> Result<Vec<ConvergencePoint>> {
    let phi = PhiFamily::new(cdf, opts.cdf_grid)?;
    let mut jobs = Vec::new();
    for &n in n_list {
        for &y in y_list {
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::InvalidParams(format!("y = {y} outside [0, 1]")));
            }
            jobs.push((n, y));
        }
    }
    jobs.into_par_iter()
        .map(|(n, y)| {
            let k = (n as f64 * y).floor() as u64;
            let c = family.config(n)?.add_to_all(k)?;
            let s = simulate_to_cycle(&c, default_budget(n))?;
            let limit = rotation_number_numeric(&phi.at(y), opts);
            let a = s.activity.to_f64();
            let deviation = (limit.lower - a).max(a - limit.upper).max(0.0);
            let lift_distance = match lift_from_config(&c) {
                Ok(f) => f.to_f64().sup_distance(&phi.base().translate(y, 0.0)),
                Err(_) => f64::INFINITY,
            };
            Ok(ConvergencePoint {
                n,
                y,
                k,
                activity: s.activity,
                limit,
                deviation,
                exact_match: limit.snapped == Some(s.activity),
                lift_distance,
            })
        })
        .collect()
}
