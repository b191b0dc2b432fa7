//! Substitution matrix, twisted matrices, hypothesis checks, Weyl sums and
//! frequency statistics.

mod hypotheses;
mod matrix;
mod stats;

pub use hypotheses::{
    check_hypotheses, is_rational_multiple_of_pi, HypothesisReport, MissingType, RotationVerdict, RotationWitness,
    APPROX_DENOMINATOR_BOUND, MAX_ROOT_ORDER,
};
pub use matrix::{
    handedness_matrix, handedness_sum, mat_vec, perron_vector, spectral_radius, substitution_matrix,
    sum_of_column_power, twisted_matrix, unit_power, AngleTable, SubstitutionMatrix, TwistConvention, TwistedMatrix,
    SPECTRAL_MAX_ITERATIONS, SPECTRAL_TOLERANCE, TWIST_CONVENTIONS,
};
pub use stats::{
    distinct_rotations, frequency_convergence, orientation_histogram, weyl_sum, FrequencyRow, FrequencyTable,
    OrientationHistogram, WeylSum,
};

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::engine::EngineError;
use crate::rules::{rule_hash, InflationRule};

pub const ANALYSIS_SCHEMA: &str = "tessella.analysis/1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("a reflection is not a rotation")]
    NotARotation,
    #[error("m = 0 gives the tile count; use the substitution matrix instead")]
    UseCountInstead,
    #[error("power iteration did not converge after {iterations} steps (last estimate {last})")]
    SpectralNoConverge { last: f64, iterations: usize },
    #[error("substitution matrix is not primitive")]
    ReducibleMatrix,
    #[error("the number of inflations must be at least 1")]
    InvalidIterations,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn complex_matrix_json(m: &[Vec<Complex64>]) -> Value {
    json!(m.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn spectral_json(m: &[Vec<Complex64>]) -> Value {
    match spectral_radius(m) {
        Ok(x) => json!(x),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Everything the analysis module computes for one rule, as a JSON report.
pub fn analysis_report(
    rule: &InflationRule,
    r: u32,
    ms: &[i64],
    seed_type: usize,
    cap: usize,
) -> Result<Value, AnalysisError> {
    if ms.contains(&0) {
        return Err(AnalysisError::UseCountInstead);
    }
    let a = substitution_matrix(rule);
    let mut a_m = Map::new();
    let mut rho_m = Map::new();
    for &m in ms {
        let mut per = Map::new();
        let mut rho = Map::new();
        for c in TWIST_CONVENTIONS {
            let t = twisted_matrix(rule, m, c);
            let key = serde_json::to_value(c).expect("convention").as_str().unwrap_or_default().to_string();
            per.insert(key.clone(), complex_matrix_json(&t.entries));
            rho.insert(key, spectral_json(&t.entries));
        }
        rho.insert("handedness".to_string(), spectral_json(&handedness_matrix(rule, m)));
        a_m.insert(m.to_string(), Value::Object(per));
        rho_m.insert(m.to_string(), Value::Object(rho));
    }
    let hyp = check_hypotheses(rule, r, cap)?;
    let weyl = ms
        .iter()
        .map(|&m| {
            weyl_sum(rule, seed_type, r, m, cap).map(|w| json!({ "m": m, "r": r, "value": w, "modulus": w.modulus() }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let frequencies = match frequency_convergence(rule, r) {
        Ok(t) => json!(t),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(json!({
        "schema": ANALYSIS_SCHEMA,
        "rule_hash": rule_hash(rule),
        "A": a.a,
        "A_m": a_m,
        "spectral": { "rho_A": spectral_json(&a.to_complex()), "rho_A_m": rho_m },
        "hypotheses": hyp,
        "theorem_hypotheses_certified": hyp.a_holds && hyp.b_holds,
        "weyl": weyl,
        "frequencies": frequencies,
    }))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geom::{Isometry, Point, Polygon, Rational, Scalar};
    use crate::rules::{builtin, validate_rule, Builtin, Child, Prototile};

    /// Two copies of the right isosceles triangle with hypotenuse `[0, 2]`,
    /// each halved by its altitude; `types[j]` gives the child types of `P_j`.
    pub(crate) fn halving_rule(types: &[[usize; 2]]) -> InflationRule {
        let corners = [Point::int(0, 0), Point::int(2, 0), Point::int(1, 1)];
        let shape = Polygon::new(corners.to_vec()).unwrap();
        let lambda = Scalar::surd(Rational::ZERO, Rational::new(1, 2), 2);
        let src: Vec<Point> = corners.iter().map(|p| p.scale(&lambda)).collect();
        let targets = [
            [Point::int(1, 1), Point::int(0, 0), Point::int(1, 0)],
            [Point::int(2, 0), Point::int(1, 1), Point::int(1, 0)],
        ];
        let children = types
            .iter()
            .map(|ts| {
                ts.iter()
                    .zip(&targets)
                    .map(|(&t, dst)| Child {
                        child_type: t,
                        pose: Isometry::from_correspondence(&src, dst, false).unwrap(),
                    })
                    .collect()
            })
            .collect();
        InflationRule {
            name: None,
            radicand: 2,
            lambda,
            expansion: Point::int(1, 1),
            prototiles: (0..types.len())
                .map(|id| Prototile { id, name: format!("half{id}"), shape: shape.clone() })
                .collect(),
            children,
        }
    }

    #[test]
    fn hypotheses_on_builtins() {
        let pw = builtin(Builtin::Pinwheel);
        let rep = check_hypotheses(&pw, 2, 1000).unwrap();
        assert!(rep.a_holds && rep.b_holds);
        let w = rep.b_witness.unwrap();
        assert!(w.verdict.is_irrational());

        let sq = builtin(Builtin::Square);
        let rep = check_hypotheses(&sq, 1, 1000).unwrap();
        assert!(rep.a_holds && !rep.b_holds && rep.b_exhaustive);
    }

    #[test]
    fn missing_type_witness() {
        let rule = halving_rule(&[[0, 1], [1, 1]]);
        assert!(validate_rule(&rule).passed());
        let rep = check_hypotheses(&rule, 3, 1000).unwrap();
        assert!(!rep.a_holds);
        assert_eq!(rep.a_missing, vec![MissingType { seed_type: 1, missing_type: 0 }]);
        // The halving rule only ever rotates by multiples of π/4.
        assert!(!rep.b_holds && rep.b_exhaustive);
    }

    #[test]
    fn report_shape() {
        let rule = builtin(Builtin::Pinwheel);
        let v = analysis_report(&rule, 2, &[1, 2], 0, 1000).unwrap();
        assert_eq!(v["schema"], ANALYSIS_SCHEMA);
        assert_eq!(v["A"], json!([[2, 3], [3, 2]]));
        assert_eq!(v["theorem_hypotheses_certified"], json!(true));
        assert!(v["A_m"]["1"]["plain"].is_array());
        assert!(v["spectral"]["rho_A_m"]["2"]["handedness"].as_f64().unwrap() < 5.0);
        assert_eq!(analysis_report(&rule, 2, &[0], 0, 1000), Err(AnalysisError::UseCountInstead));
    }
}
