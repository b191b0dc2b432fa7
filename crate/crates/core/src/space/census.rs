use std::cmp::Ordering;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{grow, segments_share_length, GridIndex};
use crate::engine::Patch;
use crate::geom::{Isometry, Polygon};
use crate::rules::format::{point_json, rotation_json};
use crate::rules::InflationRule;

/// Two tiles meeting along an edge segment, up to congruence: tile `b` sits
/// at `relative_pose` in the frame of prototile `type_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyConfiguration {
    pub type_a: usize,
    pub type_b: usize,
    pub relative_pose: Isometry,
    pub count: usize,
}

/// Distinct configurations of edge-sharing tile pairs, with multiplicities.
pub fn adjacency_census(rule: &InflationRule, patch: &Patch) -> Vec<AdjacencyConfiguration> {
    let polys = patch.polygons(rule);
    let boxes: Vec<[f64; 4]> = polys.iter().map(|p| p.bbox().to_f64()).collect();
    let grid = GridIndex::new(&boxes);
    let symmetries: Vec<Vec<Isometry>> = rule.prototiles.iter().map(|p| p.shape.symmetries()).collect();
    let mut forms: Vec<(usize, usize, Isometry)> = (0..polys.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut found = Vec::new();
            for j in grid.query(&grow(boxes[i], 1e-9)) {
                if j > i && share_edge(&polys[i], &polys[j]) {
                    found.push(canonical(&symmetries, patch, i, j));
                }
            }
            found
        })
        .collect();
    forms.sort_by(cmp_form);
    let mut out: Vec<AdjacencyConfiguration> = Vec::new();
    for (a, b, g) in forms {
        match out.last_mut() {
            Some(last) if last.type_a == a && last.type_b == b && last.relative_pose == g => last.count += 1,
            _ => out.push(AdjacencyConfiguration { type_a: a, type_b: b, relative_pose: g, count: 1 }),
        }
    }
    out
}

fn cmp_form(x: &(usize, usize, Isometry), y: &(usize, usize, Isometry)) -> Ordering {
    x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then_with(|| x.2.canonical_cmp(&y.2))
}

fn share_edge(p: &Polygon, q: &Polygon) -> bool {
    p.edges().any(|(a, b)| q.edges().any(|(c, d)| segments_share_length(a, b, c, d)))
}

/// Smallest description of the pair over both orderings and every way of
/// writing each tile as an image of its prototile.
fn canonical(symmetries: &[Vec<Isometry>], patch: &Patch, i: usize, j: usize) -> (usize, usize, Isometry) {
    let (ti, tj) = (&patch.tiles[i], &patch.tiles[j]);
    let mut orders = vec![(ti, tj)];
    if ti.tile_type == tj.tile_type {
        orders.push((tj, ti));
    } else if ti.tile_type > tj.tile_type {
        orders = vec![(tj, ti)];
    }
    let mut best: Option<(usize, usize, Isometry)> = None;
    for (x, y) in orders {
        let rel = &x.pose.inverse() * &y.pose;
        for sa in &symmetries[x.tile_type] {
            let left = &sa.inverse() * &rel;
            for sb in &symmetries[y.tile_type] {
                let cand = (x.tile_type, y.tile_type, &left * sb);
                if best.as_ref().is_none_or(|b| cmp_form(&cand, b) == Ordering::Less) {
                    best = Some(cand);
                }
            }
        }
    }
    best.expect("identity is a symmetry")
}

pub fn census_json(rule: &InflationRule, census: &[AdjacencyConfiguration]) -> Value {
    json!(census
        .iter()
        .map(|c| json!({
            "type_a": c.type_a,
            "type_b": c.type_b,
            "relative_pose": {
                "rot": rotation_json(&c.relative_pose.rot, &rule.lambda),
                "reflect": c.relative_pose.rot.reflects(),
                "trans": point_json(&c.relative_pose.trans),
            },
            "count": c.count,
        }))
        .collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::inflate_patch;
    use crate::rules::{builtin, Builtin};

    #[test]
    fn square_grid_has_one_configuration() {
        let rule = builtin(Builtin::Square);
        let seed = Patch::seed(&rule, 0).unwrap();
        assert!(adjacency_census(&rule, &seed).is_empty());
        let p2 = inflate_patch(&rule, &seed, 2).unwrap();
        let c2 = adjacency_census(&rule, &p2);
        // Side neighbours of a unit square are all congruent: 2·4·3 = 24 pairs.
        assert_eq!(c2.len(), 1);
        assert_eq!(c2[0].count, 24);
        let c4 = adjacency_census(&rule, &inflate_patch(&rule, &seed, 4).unwrap());
        assert_eq!(c4.len(), 1);
        assert_eq!(c4[0].relative_pose, c2[0].relative_pose);
    }
}
