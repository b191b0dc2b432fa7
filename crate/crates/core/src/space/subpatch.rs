use super::{grow, GridIndex, SpaceError};
use crate::engine::{inflate_patch_with, InflateOptions, Patch};
use crate::geom::{congruences, Isometry, Polygon};
use crate::rules::InflationRule;

pub const MAX_QUERY_TILES: usize = 64;

/// An isometry placing the query inside `F^r(P_seed)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubpatchMatch {
    pub seed_type: usize,
    pub isometry: Isometry,
    /// For each query tile, the index of its image in the canonical
    /// `F^r(P_seed)`.
    pub images: Vec<usize>,
}

/// Searches for an isometry mapping every tile of `query` onto a tile of the
/// same type in `F^r(P)` for some prototile `P`.
///
/// Any such isometry sends the first query tile onto some tile of `F^r(P)`,
/// so trying every congruence between the first tile and each same-type
/// target tile (direct and reflected) is exhaustive. Returns `None` when no
/// placement exists.
pub fn congruent_subpatch(
    rule: &InflationRule,
    query: &Patch,
    r: u32,
    cap: usize,
) -> Result<Option<SubpatchMatch>, SpaceError> {
    if query.len() > MAX_QUERY_TILES {
        return Err(SpaceError::QueryTooLarge(query.len()));
    }
    if query.is_empty() {
        return Ok(Some(SubpatchMatch { seed_type: 0, isometry: Isometry::identity(), images: Vec::new() }));
    }
    let q_polys = query.polygons(rule);
    let anchor_type = query.tiles[0].tile_type;
    for k in 0..rule.type_count() {
        let target = inflate_patch_with(rule, &Patch::seed(rule, k)?, r, InflateOptions { cap, threads: None })?;
        let t_polys = target.polygons(rule);
        let grid = GridIndex::new(&t_polys.iter().map(|p| p.bbox().to_f64()).collect::<Vec<_>>());
        for (ti, tile) in target.tiles.iter().enumerate() {
            if tile.tile_type != anchor_type {
                continue;
            }
            for g in congruences(&q_polys[0], &t_polys[ti]) {
                if let Some(images) = place_all(&g, query, &q_polys, &target, &t_polys, &grid) {
                    return Ok(Some(SubpatchMatch { seed_type: k, isometry: g, images }));
                }
            }
        }
    }
    Ok(None)
}

fn place_all(
    g: &Isometry,
    query: &Patch,
    q_polys: &[Polygon],
    target: &Patch,
    t_polys: &[Polygon],
    grid: &GridIndex,
) -> Option<Vec<usize>> {
    let mut images = Vec::with_capacity(q_polys.len());
    for (qt, qp) in query.tiles.iter().zip(q_polys) {
        let moved = qp.transform(g);
        let hit = grid
            .query(&grow(moved.bbox().to_f64(), 1e-9))
            .into_iter()
            .find(|&j| target.tiles[j].tile_type == qt.tile_type && t_polys[j].same_set(&moved))?;
        if images.contains(&hit) {
            return None;
        }
        images.push(hit);
    }
    Some(images)
}
