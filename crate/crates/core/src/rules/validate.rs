use serde_json::{json, Value};

use super::format::scalar_json;
use super::InflationRule;
use crate::geom::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrototileStatus {
    Pass,
    /// Child `child` is not contained in the parent prototile.
    OutOfBounds {
        child: usize,
    },
    /// Children `first` and `second` overlap in `area`.
    Overlap {
        first: usize,
        second: usize,
        area: Scalar,
    },
    /// The children leave `area` of the parent uncovered (negative: excess).
    Gap {
        area: Scalar,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrototileReport {
    pub id: usize,
    pub status: PrototileStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleValidationReport {
    pub prototiles: Vec<PrototileReport>,
}

impl RuleValidationReport {
    pub fn passed(&self) -> bool {
        self.prototiles.iter().all(|p| p.status == PrototileStatus::Pass)
    }

    pub fn first_failure(&self) -> Option<&PrototileReport> {
        self.prototiles.iter().find(|p| p.status != PrototileStatus::Pass)
    }

    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .prototiles
            .iter()
            .map(|p| match &p.status {
                PrototileStatus::Pass => json!({ "prototile": p.id, "status": "pass" }),
                PrototileStatus::OutOfBounds { child } => {
                    json!({ "prototile": p.id, "status": "out_of_bounds", "child": child })
                }
                PrototileStatus::Overlap { first, second, area } => json!({
                    "prototile": p.id, "status": "overlap", "children": [first, second],
                    "area": scalar_json(area), "area_f64": area.to_f64(),
                }),
                PrototileStatus::Gap { area } => json!({
                    "prototile": p.id, "status": "gap", "area": scalar_json(area), "area_f64": area.to_f64(),
                }),
            })
            .collect();
        json!({ "passed": self.passed(), "prototiles": items })
    }
}

/// Checks that each prototile is exactly the interior-disjoint union of its
/// children: every child lies inside the parent, no two children overlap, and
/// the child areas add up to the parent area.
pub fn validate_rule(rule: &InflationRule) -> RuleValidationReport {
    let prototiles =
        (0..rule.type_count()).map(|j| PrototileReport { id: j, status: check_prototile(rule, j) }).collect();
    RuleValidationReport { prototiles }
}

fn check_prototile(rule: &InflationRule, j: usize) -> PrototileStatus {
    let parent = &rule.prototiles[j].shape;
    let kids: Vec<_> = (0..rule.children[j].len()).map(|k| rule.child_polygon(j, k)).collect();
    if let Some(k) = kids.iter().position(|c| !parent.contains(c)) {
        return PrototileStatus::OutOfBounds { child: k };
    }
    for a in 0..kids.len() {
        for b in a + 1..kids.len() {
            let o = kids[a].interiors_overlap(&kids[b]);
            if o.overlaps {
                return PrototileStatus::Overlap { first: a, second: b, area: o.area };
            }
        }
    }
    let covered = kids.iter().fold(Scalar::zero(), |acc, c| &acc + &c.area());
    let gap = &parent.area() - &covered;
    if gap.is_zero() {
        PrototileStatus::Pass
    } else {
        PrototileStatus::Gap { area: gap }
    }
}
