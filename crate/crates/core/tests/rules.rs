use tessella_core::geom::{Mode, Scalar};
use tessella_core::rules::{
    builtin, folded_pinwheel, parse_rule, parse_rule_with, rule_hash, serialize_rule, serialize_rule_compact,
    validate_rule, Builtin, ParseOptions, PrototileStatus, RuleError,
};

#[test]
fn builtins_survive_a_round_trip() {
    for rule in [builtin(Builtin::Square), builtin(Builtin::Pinwheel), folded_pinwheel()] {
        let text = serialize_rule(&rule);
        let back = parse_rule(&text).unwrap();
        assert_eq!(back, rule);
        assert_eq!(rule_hash(&back), rule_hash(&rule));
        assert_eq!(parse_rule(&serialize_rule_compact(&rule)).unwrap(), rule);
    }
}

#[test]
fn hashes_tell_rules_apart() {
    let hashes: Vec<String> =
        [builtin(Builtin::Square), builtin(Builtin::Pinwheel), folded_pinwheel()].iter().map(rule_hash).collect();
    assert_eq!(hashes.iter().collect::<std::collections::HashSet<_>>().len(), 3);
    assert!(hashes.iter().all(|h| h.len() == 64));
}

#[test]
fn removing_a_child_leaves_a_gap() {
    let mut rule = builtin(Builtin::Pinwheel);
    rule.children[0].pop();
    let report = validate_rule(&rule);
    assert!(!report.passed());
    let failure = report.first_failure().unwrap();
    assert_eq!(failure.id, 0);
    assert_eq!(failure.status, PrototileStatus::Gap { area: Scalar::ratio(1, 5) });
    assert_eq!(report.to_json()["prototiles"][0]["status"], "gap");
}

#[test]
fn duplicated_child_overlaps() {
    let mut rule = builtin(Builtin::Square);
    let extra = rule.children[0][0].clone();
    rule.children[0].push(extra);
    assert!(matches!(
        validate_rule(&rule).first_failure().unwrap().status,
        PrototileStatus::Overlap { first: 0, second: 4, .. }
    ));
}

#[test]
fn pinwheel_uses_direct_poses_only() {
    assert!(!builtin(Builtin::Pinwheel).has_reflections());
    assert!(folded_pinwheel().has_reflections());
    assert!(validate_rule(&folded_pinwheel()).passed());
}

#[test]
fn approximate_copy_still_validates() {
    let rule = builtin(Builtin::Pinwheel).to_approx();
    assert_eq!(rule.mode(), Mode::Approx);
    assert!(validate_rule(&rule).passed());
    let text = serialize_rule(&rule);
    let back = parse_rule_with(&text, ParseOptions { mode: Some(Mode::Approx) }).unwrap();
    assert_eq!(back.mode(), Mode::Approx);
    assert!(matches!(
        parse_rule_with(&text, ParseOptions { mode: Some(Mode::Exact) }),
        Err(RuleError::FloatLiteral { .. })
    ));
}

#[test]
fn unknown_builtin_name() {
    assert_eq!("penrose".parse::<Builtin>(), Err(RuleError::UnknownBuiltin("penrose".into())));
}
