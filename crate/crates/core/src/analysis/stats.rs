use std::collections::HashSet;
use std::f64::consts::TAU;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::matrix::{
    handedness_matrix, handedness_sum, perron_vector, substitution_matrix, sum_of_column_power, twisted_matrix,
    TwistConvention,
};
use super::AnalysisError;
use crate::engine::{inflate_patch_with, InflateOptions, Patch};
use crate::geom::UnitRotation;
use crate::rules::InflationRule;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylSum {
    pub seed_type: usize,
    pub r: u32,
    pub m: i64,
    pub tiles: usize,
    /// `(1/N) Σ e^{i m θ_n}` over the enumerated patch.
    pub value: Complex64,
    /// `1ᵀ A[m]^r e_k / 1ᵀ A^r e_k` under each reflection convention; these
    /// equal `value` only for rules without reflections.
    pub matrix_plain: Complex64,
    pub matrix_conjugate_reflected: Complex64,
    /// Prediction from the [`handedness_matrix`](super::handedness_matrix);
    /// equal to `value` for every rule.
    pub matrix_handedness: Complex64,
    pub reflection_convention: &'static str,
}

impl WeylSum {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

/// Weyl sum over the tile orientations of `F^r(P_k)`.
///
/// `θ_n` is the angle of the tile relative to its prototile in the
/// unexpanded patch; reflected tiles contribute `e^{−i m θ_n}`.
pub fn weyl_sum(rule: &InflationRule, k: usize, r: u32, m: i64, cap: usize) -> Result<WeylSum, AnalysisError> {
    if m == 0 {
        return Err(AnalysisError::UseCountInstead);
    }
    let patch = inflate_patch_with(rule, &Patch::seed(rule, k)?, r, InflateOptions { cap, threads: None })?;
    let n = patch.len();
    let total: Complex64 = patch
        .tiles
        .iter()
        .map(|t| {
            let u = t.literal_rotation(rule);
            let sign = if u.reflects() { -1 } else { 1 };
            super::matrix::unit_power(u.value(), sign * m)
        })
        .sum();
    let a = substitution_matrix(rule).to_complex();
    let denom = sum_of_column_power(&a, k, r);
    let predict = |c| sum_of_column_power(&twisted_matrix(rule, m, c).entries, k, r) / denom;
    Ok(WeylSum {
        seed_type: k,
        r,
        m,
        tiles: n,
        value: total / n as f64,
        matrix_plain: predict(TwistConvention::Plain),
        matrix_conjugate_reflected: predict(TwistConvention::ConjugateReflected),
        matrix_handedness: handedness_sum(&handedness_matrix(rule, m), k, r) / denom,
        reflection_convention: "reflected tiles contribute exp(-i m theta)",
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationHistogram {
    pub bins: usize,
    pub direct: Vec<u64>,
    pub reflected: Vec<u64>,
}

impl OrientationHistogram {
    pub fn total(&self) -> u64 {
        self.direct.iter().chain(&self.reflected).sum()
    }
}

/// Counts pose angles, taken mod 2π, in `bins` equal bins starting at 0.
pub fn orientation_histogram(patch: &Patch, bins: usize) -> OrientationHistogram {
    let bins = bins.max(1);
    let mut h = OrientationHistogram { bins, direct: vec![0; bins], reflected: vec![0; bins] };
    for t in &patch.tiles {
        let a = t.pose.rot.angle().rem_euclid(TAU);
        let b = ((a / TAU * bins as f64) as usize).min(bins - 1);
        if t.pose.rot.reflects() {
            h.reflected[b] += 1;
        } else {
            h.direct[b] += 1;
        }
    }
    h
}

/// Number of distinct exact tile orientations in the patch.
pub fn distinct_rotations(patch: &Patch) -> usize {
    patch.tiles.iter().map(|t| &t.pose.rot).collect::<HashSet<&UnitRotation>>().len()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub r: u32,
    /// `ν_r(k)` for each seed type `k`.
    pub frequencies: Vec<Vec<f64>>,
    /// Largest `‖ν_r(k) − ν_r(k′)‖₁` over seed pairs.
    pub max_seed_gap: f64,
    /// Largest `‖ν_r(k) − perron‖₁` over seeds.
    pub max_perron_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyTable {
    pub perron: Vec<f64>,
    pub rows: Vec<FrequencyRow>,
}

/// Type frequencies `ν_r(k) = A^r e_k / 1ᵀA^r e_k` for `r = 1..=r_max`.
pub fn frequency_convergence(rule: &InflationRule, r_max: u32) -> Result<FrequencyTable, AnalysisError> {
    let a = substitution_matrix(rule);
    if !a.is_primitive() {
        return Err(AnalysisError::ReducibleMatrix);
    }
    let perron = perron_vector(&a)?;
    let n = a.size();
    let l1 = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<f64>();
    let rows = (1..=r_max)
        .map(|r| {
            let frequencies: Vec<Vec<f64>> = (0..n).map(|k| normalize(&a.column_power(k, r))).collect();
            let mut seed_gap: f64 = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    seed_gap = seed_gap.max(l1(&frequencies[i], &frequencies[j]));
                }
            }
            let perron_gap = frequencies.iter().map(|f| l1(f, &perron)).fold(0.0, f64::max);
            FrequencyRow { r, frequencies, max_seed_gap: seed_gap, max_perron_gap: perron_gap }
        })
        .collect();
    Ok(FrequencyTable { perron, rows })
}

fn normalize(v: &[BigUint]) -> Vec<f64> {
    let total: BigUint = v.iter().sum();
    let total = BigInt::from(total);
    v.iter().map(|x| BigRational::new(BigInt::from(x.clone()), total.clone()).to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::inflate_patch;
    use crate::rules::{builtin, Builtin};

    #[test]
    fn square_statistics() {
        let rule = builtin(Builtin::Square);
        let w = weyl_sum(&rule, 0, 3, 1, 1000).unwrap();
        assert!((w.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(weyl_sum(&rule, 0, 3, 0, 1000), Err(AnalysisError::UseCountInstead));
        let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 3).unwrap();
        let h = orientation_histogram(&p, 8);
        assert_eq!(h.direct[0], 64);
        assert_eq!(h.total(), 64);
        let f = frequency_convergence(&rule, 4).unwrap();
        assert!(f.rows.iter().all(|row| row.frequencies == vec![vec![1.0]]));
    }

    #[test]
    fn single_tile_histogram() {
        let rule = builtin(Builtin::Pinwheel);
        let h = orientation_histogram(&Patch::seed(&rule, 1).unwrap(), 12);
        assert_eq!(h.direct.iter().filter(|&&c| c == 1).count(), 1);
        assert_eq!(h.total(), 1);
    }

    #[test]
    fn reducible_matrix_is_rejected() {
        let rule = crate::analysis::tests::halving_rule(&[[0, 1], [1, 1]]);
        assert!(crate::rules::validate_rule(&rule).passed());
        assert_eq!(frequency_convergence(&rule, 3), Err(AnalysisError::ReducibleMatrix));
    }
}
