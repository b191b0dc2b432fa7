use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use tessella_core::analysis::{
    analysis_report, check_hypotheses, distinct_rotations, frequency_convergence, handedness_matrix, handedness_sum,
    is_rational_multiple_of_pi, orientation_histogram, spectral_radius, substitution_matrix, twisted_matrix, weyl_sum,
    AnalysisError, RotationVerdict, TwistConvention, TWIST_CONVENTIONS,
};
use tessella_core::engine::{inflate_patch, Patch};
use tessella_core::geom::{Point, Scalar, UnitRotation};
use tessella_core::rules::{builtin, folded_pinwheel, Builtin};

/// Largest root modulus of the characteristic polynomial of a 2×2 matrix.
fn radius_2x2(m: &[Vec<Complex64>]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) / 2.0).norm().max(((tr - disc) / 2.0).norm())
}

#[test]
fn spectral_radius_of_a_matches_eigen_decomposition() {
    for rule in [builtin(Builtin::Square), builtin(Builtin::Pinwheel), folded_pinwheel()] {
        let a = substitution_matrix(&rule);
        let n = a.size();
        let dm = DMatrix::from_fn(n, n, |j, k| a.a[j][k] as f64);
        let oracle = dm.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let rho = spectral_radius(&a.to_complex()).unwrap();
        assert!((rho - oracle).abs() < 1e-9, "{rho} vs {oracle}");
    }
}

#[test]
fn twisted_radii_match_closed_form() {
    let rule = builtin(Builtin::Pinwheel);
    for m in -8..=8 {
        for c in TWIST_CONVENTIONS {
            let t = twisted_matrix(&rule, m, c);
            let rho = spectral_radius(&t.entries).unwrap();
            assert!((rho - radius_2x2(&t.entries)).abs() < 1e-8, "m={m}: {rho}");
            if m != 0 {
                assert!(rho < 5.0 - 1e-6);
            }
        }
    }
}

#[test]
fn weyl_sums_match_matrix_prediction() {
    let rule = builtin(Builtin::Pinwheel);
    for k in 0..2 {
        for r in 1..=5 {
            for m in [-3, -1, 1, 2, 5] {
                let w = weyl_sum(&rule, k, r, m, 100_000).unwrap();
                assert!((w.value - w.matrix_plain).norm() < 1e-9, "k={k} r={r} m={m}: {w:?}");
                assert!((w.value - w.matrix_conjugate_reflected).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn handedness_matrix_predicts_reflected_rules() {
    let rule = folded_pinwheel();
    for r in 1..=4 {
        for m in [-2, 1, 3] {
            let w = weyl_sum(&rule, 0, r, m, 100_000).unwrap();
            assert!((w.value - w.matrix_handedness).norm() < 1e-9, "r={r} m={m}: {w:?}");
        }
    }
    let pinwheel = builtin(Builtin::Pinwheel);
    let w = weyl_sum(&pinwheel, 1, 3, 2, 100_000).unwrap();
    assert!((w.value - w.matrix_handedness).norm() < 1e-9);
}

#[test]
fn handedness_matrix_keeps_counts_at_zero_frequency() {
    let rule = folded_pinwheel();
    let b = handedness_matrix(&rule, 0);
    assert!((handedness_sum(&b, 0, 4) - Complex64::new(625.0, 0.0)).norm() < 1e-9);
    let rho = spectral_radius(&handedness_matrix(&rule, 1)).unwrap();
    assert!(rho < 5.0 - 1e-6, "{rho}");
}

#[test]
fn weyl_sum_rejects_zero_frequency() {
    let rule = builtin(Builtin::Pinwheel);
    assert_eq!(weyl_sum(&rule, 0, 2, 0, 1000), Err(AnalysisError::UseCountInstead));
}

#[test]
fn pinwheel_orientations_keep_multiplying() {
    let rule = builtin(Builtin::Pinwheel);
    let seed = Patch::seed(&rule, 0).unwrap();
    let counts: Vec<usize> = (1..=5).map(|r| distinct_rotations(&inflate_patch(&rule, &seed, r).unwrap())).collect();
    assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    let square = builtin(Builtin::Square);
    let sq = inflate_patch(&square, &Patch::seed(&square, 0).unwrap(), 4).unwrap();
    assert_eq!(distinct_rotations(&sq), 1);
}

#[test]
fn histogram_counts_every_tile() {
    let rule = folded_pinwheel();
    let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 3).unwrap();
    let h = orientation_histogram(&p, 36);
    assert_eq!(h.total(), p.len() as u64);
    assert!(h.reflected.iter().sum::<u64>() > 0);
}

#[test]
fn hypotheses_also_hold_for_the_folded_rule() {
    let rep = check_hypotheses(&folded_pinwheel(), 2, 10_000).unwrap();
    assert!(rep.a_holds && rep.b_holds);
}

#[test]
fn frequencies_approach_perron_vector() {
    let table = frequency_convergence(&builtin(Builtin::Pinwheel), 8).unwrap();
    let gaps: Vec<f64> = table.rows.iter().map(|r| r.max_perron_gap).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    let seed_gaps: Vec<f64> = table.rows.iter().map(|r| r.max_seed_gap).collect();
    assert!(seed_gaps.windows(2).all(|w| w[1] <= w[0]), "{seed_gaps:?}");
}

#[test]
fn report_lists_both_conventions() {
    let v = analysis_report(&folded_pinwheel(), 2, &[1, -2], 0, 10_000).unwrap();
    for m in ["1", "-2"] {
        assert!(v["A_m"][m]["plain"].is_array());
        assert!(v["A_m"][m]["conjugate_reflected"].is_array());
    }
}

#[test]
fn pythagorean_rotations_are_irrational() {
    for (a, b, c) in [(3, 4, 5), (5, 12, 13), (8, 15, 17)] {
        let u = UnitRotation::new(Point::new(Scalar::ratio(a, c), Scalar::ratio(b, c)), false).unwrap();
        assert!(is_rational_multiple_of_pi(&u).unwrap().is_irrational(), "{a}/{c}");
    }
    let i = UnitRotation::quarter_turns(1);
    assert_eq!(is_rational_multiple_of_pi(&i).unwrap(), RotationVerdict::Rational { order: 4 });
}

proptest! {
    #[test]
    fn twisted_entries_are_bounded(m in -200i64..200) {
        for rule in [builtin(Builtin::Pinwheel), folded_pinwheel()] {
            let a = substitution_matrix(&rule);
            for c in [TwistConvention::Plain, TwistConvention::ConjugateReflected] {
                let t = twisted_matrix(&rule, m, c);
                for (row, arow) in t.entries.iter().zip(&a.a) {
                    for (z, &bound) in row.iter().zip(arow) {
                        prop_assert!(z.norm() <= bound as f64 + 1e-9);
                    }
                }
            }
        }
    }
}
