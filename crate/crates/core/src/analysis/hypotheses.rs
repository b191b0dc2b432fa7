use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::matrix::substitution_matrix;
use super::AnalysisError;
use crate::engine::{inflate_patch_with, InflateOptions, Patch};
use crate::geom::{Mode, Point, UnitRotation};
use crate::rules::InflationRule;

/// Largest order a root of unity can have in a field of degree at most 4
/// over the rationals (`φ(q) ≤ 4` forces `q ≤ 12`).
pub const MAX_ROOT_ORDER: u32 = 12;
/// Denominator bound for the continued-fraction test in approximate mode.
pub const APPROX_DENOMINATOR_BOUND: i64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RotationVerdict {
    /// `u` is a root of unity of this order.
    Rational { order: u32 },
    /// Proven: `u^q ≠ 1` for every order a root of unity in the field can have.
    Irrational { max_order_checked: u32 },
    /// Approximate input with no small-denominator fraction near `arg(u)/π`.
    Undecided { nearest: (i64, i64), error: f64 },
}

impl RotationVerdict {
    pub fn is_irrational(&self) -> bool {
        matches!(self, RotationVerdict::Irrational { .. })
    }

    pub fn method(&self) -> &'static str {
        match self {
            RotationVerdict::Rational { .. } => "exact power test",
            RotationVerdict::Irrational { .. } => "field-degree bound",
            RotationVerdict::Undecided { .. } => "continued fraction",
        }
    }
}

/// Decides whether the rotation `u` is by a rational multiple of π.
///
/// Exact values lie in `Q(√D, i)`, of degree at most 4, where a root of
/// unity has order `q` with `φ(q) ≤ 4`; every such `q` is at most 12, so
/// checking `u^q = 1` for `q ≤ 12` is conclusive.
pub fn is_rational_multiple_of_pi(u: &UnitRotation) -> Result<RotationVerdict, AnalysisError> {
    if u.reflects() {
        return Err(AnalysisError::NotARotation);
    }
    let z = u.value();
    if z.mode() == Some(Mode::Exact) {
        let mut p = Point::one();
        for q in 1..=MAX_ROOT_ORDER {
            p = p.cmul(z);
            if p == Point::one() {
                return Ok(RotationVerdict::Rational { order: q });
            }
        }
        return Ok(RotationVerdict::Irrational { max_order_checked: MAX_ROOT_ORDER });
    }
    let x = u.angle() / std::f64::consts::PI;
    let (p, q) = best_fraction(x, APPROX_DENOMINATOR_BOUND);
    let error = (x - p as f64 / q as f64).abs();
    if error <= crate::geom::tolerance() {
        // e^{iπp/q} with p/q reduced has order q when p is even, else 2q.
        let order = if p.is_even() { q } else { 2 * q };
        return Ok(RotationVerdict::Rational { order: order as u32 });
    }
    Ok(RotationVerdict::Undecided { nearest: (p, q), error })
}

/// Best rational approximation with denominator at most `bound`, from the
/// continued-fraction convergents.
fn best_fraction(x: f64, bound: i64) -> (i64, i64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as i64 * q1 + q0);
        if q2 > bound {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        (x.round() as i64, 1)
    } else {
        (p1, q1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MissingType {
    pub seed_type: usize,
    pub missing_type: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationWitness {
    pub seed_type: usize,
    pub tile_type: usize,
    pub reflected: bool,
    /// Indices into the canonical order of `F^r(P_seed)`.
    pub tiles: (usize, usize),
    /// Relative rotation as a unit complex number `(re, im)`.
    pub relative: (f64, f64),
    pub angle: f64,
    #[serde(flatten)]
    pub verdict: RotationVerdict,
    pub method: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub r: u32,
    pub a_holds: bool,
    pub a_missing: Vec<MissingType>,
    pub b_holds: bool,
    pub b_witness: Option<RotationWitness>,
    /// Distinct relative rotations examined.
    pub b_pairs_tested: usize,
    /// Relative rotations that could not be classified (approximate mode).
    pub b_undecided: usize,
    /// True when `b_holds` is false after examining every pair.
    pub b_exhaustive: bool,
}

/// Checks hypotheses (a) and (b) of the unique-ergodicity theorem at `r`.
pub fn check_hypotheses(rule: &InflationRule, r: u32, cap: usize) -> Result<HypothesisReport, AnalysisError> {
    if r == 0 {
        return Err(AnalysisError::InvalidIterations);
    }
    let a = substitution_matrix(rule);
    let ar = a.power(r);
    let n = rule.type_count();
    let a_missing: Vec<MissingType> = (0..n)
        .flat_map(|k| (0..n).map(move |j| (k, j)))
        .filter(|&(k, j)| ar[j][k].is_zero())
        .map(|(k, j)| MissingType { seed_type: k, missing_type: j })
        .collect();

    let mut pairs = 0usize;
    let mut undecided = 0usize;
    let mut witness = None;
    'seeds: for k in 0..n {
        let patch = inflate_patch_with(rule, &Patch::seed(rule, k)?, r, InflateOptions { cap, threads: None })?;
        // First tile of each distinct rotation, per (type, reflection) class.
        let mut firsts: HashMap<(usize, bool), Vec<(usize, UnitRotation)>> = HashMap::new();
        let mut order: Vec<(usize, bool)> = Vec::new();
        for (i, t) in patch.tiles.iter().enumerate() {
            let key = (t.tile_type, t.pose.rot.reflects());
            let list = firsts.entry(key).or_insert_with(|| {
                order.push(key);
                Vec::new()
            });
            if !list.iter().any(|(_, u)| u.same(&t.pose.rot)) {
                list.push((i, t.pose.rot.clone()));
            }
        }
        for key in order {
            let list = &firsts[&key];
            let (i0, u0) = &list[0];
            // Relative rotations of all pairs are generated by those against
            // the first: if each of these is a root of unity, so is every
            // quotient of two of them.
            for (i, u) in &list[1..] {
                pairs += 1;
                let rel = u.direct_part().compose(&u0.direct_part().inverse());
                let verdict = is_rational_multiple_of_pi(&rel)?;
                match verdict {
                    RotationVerdict::Irrational { .. } => {
                        witness = Some(RotationWitness {
                            seed_type: k,
                            tile_type: key.0,
                            reflected: key.1,
                            tiles: (*i0, *i),
                            relative: rel.value().to_f64(),
                            angle: rel.angle(),
                            method: verdict.method(),
                            verdict,
                        });
                        break 'seeds;
                    }
                    RotationVerdict::Undecided { .. } => undecided += 1,
                    RotationVerdict::Rational { .. } => {}
                }
            }
        }
    }
    Ok(HypothesisReport {
        r,
        a_holds: a_missing.is_empty(),
        a_missing,
        b_holds: witness.is_some(),
        b_exhaustive: witness.is_none(),
        b_witness: witness,
        b_pairs_tested: pairs,
        b_undecided: undecided,
    })
}
