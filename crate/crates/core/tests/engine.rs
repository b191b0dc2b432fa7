use num_bigint::BigUint;
use proptest::prelude::*;
use tessella_core::analysis::substitution_matrix;
use tessella_core::engine::{
    find_overlap, inflate_patch, inflate_patch_with, projected_count, read_patch, spot_check_overlap, write_patch,
    EngineError, InflateOptions, Patch, Tile,
};
use tessella_core::geom::{Isometry, Point, Scalar, UnitRotation};
use tessella_core::rules::{builtin, folded_pinwheel, Builtin, InflationRule};

fn rules() -> Vec<InflationRule> {
    vec![builtin(Builtin::Square), builtin(Builtin::Pinwheel), folded_pinwheel()]
}

fn total_area(rule: &InflationRule, patch: &Patch) -> Scalar {
    patch.polygons(rule).iter().fold(Scalar::zero(), |acc, p| &acc + &p.area())
}

#[test]
fn counts_follow_the_substitution_matrix() {
    for rule in rules() {
        let a = substitution_matrix(&rule);
        for k in 0..rule.type_count() {
            let seed = Patch::seed(&rule, k).unwrap();
            for r in 0..=5 {
                let p = inflate_patch(&rule, &seed, r).unwrap();
                let by_type: Vec<BigUint> = p.type_counts(rule.type_count()).into_iter().map(BigUint::from).collect();
                assert_eq!(by_type, a.column_power(k, r));
            }
        }
    }
}

#[test]
fn area_is_conserved() {
    for rule in rules() {
        let seed = Patch::seed(&rule, 0).unwrap();
        let base = total_area(&rule, &seed);
        let growth = rule.expansion.norm_sq();
        for r in 0..=3 {
            let p = inflate_patch(&rule, &seed, r).unwrap();
            assert!(total_area(&rule, &p).same(&(&base * &growth.pow(r))));
        }
    }
}

#[test]
fn inflated_patches_do_not_overlap() {
    for rule in rules() {
        let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 3).unwrap();
        assert_eq!(find_overlap(&rule, &p), None);
        assert_eq!(spot_check_overlap(&rule, &p, 100, 7), None);
    }
}

#[test]
fn deliberate_overlap_is_found() {
    let rule = builtin(Builtin::Square);
    let shift = Isometry::translation(Point::new(Scalar::ratio(1, 2), Scalar::zero()));
    let p = Patch::from_tiles(vec![Tile::new(0, Isometry::identity(), 0), Tile::new(0, shift, 0)], 0);
    assert!(find_overlap(&rule, &p).is_some());
}

#[test]
fn output_is_deterministic() {
    let rule = builtin(Builtin::Pinwheel);
    let seed = Patch::seed(&rule, 1).unwrap();
    let runs: Vec<Patch> = [Some(1), Some(3), None]
        .into_iter()
        .map(|threads| inflate_patch_with(&rule, &seed, 4, InflateOptions { cap: 10_000, threads }).unwrap())
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn inflating_in_steps_matches_one_go() {
    let rule = folded_pinwheel();
    let seed = Patch::seed(&rule, 0).unwrap();
    let two_then_one = inflate_patch(&rule, &inflate_patch(&rule, &seed, 2).unwrap(), 1).unwrap();
    assert_eq!(two_then_one, inflate_patch(&rule, &seed, 3).unwrap());
}

#[test]
fn cap_rejects_before_work() {
    let rule = builtin(Builtin::Pinwheel);
    let err =
        inflate_patch_with(&rule, &Patch::seed(&rule, 0).unwrap(), 10, InflateOptions { cap: 1000, threads: None });
    assert_eq!(err, Err(EngineError::PatchTooLarge { projected: 9_765_625, cap: 1000 }));
}

#[test]
fn patch_files_round_trip() {
    for rule in rules() {
        let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 2).unwrap();
        let v = write_patch(&rule, &p);
        let text = serde_json::to_string(&v).unwrap();
        let back = read_patch(&rule, &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
    }
    let pinwheel = builtin(Builtin::Pinwheel);
    let v = write_patch(&pinwheel, &Patch::seed(&pinwheel, 0).unwrap());
    assert!(matches!(read_patch(&builtin(Builtin::Square), &v), Err(EngineError::RuleMismatch { .. })));
}

#[test]
fn transformed_patch_is_congruent() {
    let rule = builtin(Builtin::Pinwheel);
    let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 2).unwrap();
    let g = Isometry::new(UnitRotation::quarter_turns(1), Point::int(3, -2));
    let moved = p.transform(&g);
    assert_eq!(moved.len(), p.len());
    assert!(total_area(&rule, &moved).same(&total_area(&rule, &p)));
    assert_eq!(find_overlap(&rule, &moved), None);
}

proptest! {
    #[test]
    fn projection_matches_enumeration(k in 0usize..2, r in 0u32..5) {
        let rule = builtin(Builtin::Pinwheel);
        let seed = Patch::seed(&rule, k).unwrap();
        let mut counts = vec![0; 2];
        counts[k] = 1;
        prop_assert_eq!(projected_count(&rule, &counts, r), inflate_patch(&rule, &seed, r).unwrap().len() as u128);
    }
}
