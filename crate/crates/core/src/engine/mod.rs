//! The inflation function on tiles and patches.
//!
//! Patches live in an expanding frame: one inflation multiplies every
//! coordinate by the rule's expansion `s` (with `|s| = 1/λ`) instead of
//! shrinking children by `λ`. Tiles therefore keep the size of their
//! prototile, and a patch after `r` steps is `s^r` times the literal one.

mod boundary;
mod export;

pub use boundary::{boundary_ratio, boundary_ratio_with, BoundaryMethod, BoundaryRatioReport, MONTE_CARLO_SEED};
pub use export::{patch_rule_hash, read_patch, write_patch, PATCH_SCHEMA};

use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{Isometry, Point, Polygon, UnitRotation};
use crate::rules::{InflationRule, RuleError};

/// Default bound on the number of tiles a single inflation may produce.
pub const DEFAULT_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("tile type {0} is not defined by the rule")]
    UnknownTileType(usize),
    #[error("inflation would produce {projected} tiles, above the cap of {cap}")]
    PatchTooLarge { projected: u128, cap: usize },
    #[error("patch file: {0}")]
    Format(#[from] RuleError),
    #[error("patch was built with rule {found}, not {expected}")]
    RuleMismatch { expected: String, found: String },
}

/// A congruent copy of a prototile.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tile {
    pub tile_type: usize,
    /// Maps the prototile onto the tile.
    pub pose: Isometry,
    /// Number of expansions applied to the frame the pose is expressed in.
    pub gen_scale: u32,
}

impl Tile {
    pub fn new(tile_type: usize, pose: Isometry, gen_scale: u32) -> Tile {
        Tile { tile_type, pose, gen_scale }
    }

    pub fn polygon(&self, rule: &InflationRule) -> Polygon {
        rule.prototiles[self.tile_type].shape.transform(&self.pose)
    }

    /// Rotation relative to the prototile after undoing the frame's
    /// expansion, i.e. the orientation the tile has in the unexpanded patch.
    pub fn literal_rotation(&self, rule: &InflationRule) -> UnitRotation {
        let back = rule.expansion_unit().conj().cpow(self.gen_scale);
        UnitRotation::new(back.cmul(self.pose.rot.value()), self.pose.rot.reflects()).expect("product of unit numbers")
    }

    pub fn canonical_cmp(&self, o: &Tile) -> Ordering {
        self.tile_type
            .cmp(&o.tile_type)
            .then_with(|| self.pose.canonical_cmp(&o.pose))
            .then_with(|| self.gen_scale.cmp(&o.gen_scale))
    }
}

/// A finite collection of interior-disjoint tiles sharing one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub tiles: Vec<Tile>,
    pub scale_exponent: u32,
    /// Prototile the patch was grown from, if any.
    pub seed_type: Option<usize>,
    /// Inflations applied since the seed.
    pub r: u32,
}

impl Patch {
    /// The prototile `tile_type` in its defining pose.
    pub fn seed(rule: &InflationRule, tile_type: usize) -> Result<Patch, EngineError> {
        if tile_type >= rule.type_count() {
            return Err(EngineError::UnknownTileType(tile_type));
        }
        let pose = match rule.mode() {
            crate::geom::Mode::Exact => Isometry::identity(),
            crate::geom::Mode::Approx => Isometry::identity().to_approx(),
        };
        Ok(Patch { tiles: vec![Tile::new(tile_type, pose, 0)], scale_exponent: 0, seed_type: Some(tile_type), r: 0 })
    }

    pub fn from_tiles(mut tiles: Vec<Tile>, scale_exponent: u32) -> Patch {
        tiles.sort_by(Tile::canonical_cmp);
        Patch { tiles, scale_exponent, seed_type: None, r: 0 }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn polygons(&self, rule: &InflationRule) -> Vec<Polygon> {
        self.tiles.iter().map(|t| t.polygon(rule)).collect()
    }

    /// Per-type tile counts.
    pub fn type_counts(&self, types: usize) -> Vec<u64> {
        let mut c = vec![0u64; types];
        for t in &self.tiles {
            c[t.tile_type] += 1;
        }
        c
    }

    /// Image of the patch under `g` (same frame, same order rules).
    pub fn transform(&self, g: &Isometry) -> Patch {
        let mut tiles: Vec<Tile> =
            self.tiles.iter().map(|t| Tile::new(t.tile_type, g * &t.pose, t.gen_scale)).collect();
        tiles.sort_by(Tile::canonical_cmp);
        Patch { tiles, ..self.clone() }
    }
}

/// Precomputed child placements in the expanding frame.
struct Inflater {
    s: Point,
    /// `s / s̄`, the extra rotation picked up by reflected poses.
    s_ratio: Point,
    /// Per prototile: `(child type, z ↦ s·C(λz))`.
    placements: Vec<Vec<(usize, Isometry)>>,
}

impl Inflater {
    fn new(rule: &InflationRule) -> Inflater {
        let s = rule.expansion.clone();
        let rho = rule.expansion_unit();
        let s_ratio = s.cdiv(&s.conj()).expect("nonzero expansion");
        let placements = rule
            .children
            .iter()
            .map(|cs| {
                cs.iter()
                    .map(|c| {
                        let rot = UnitRotation::new(rho.cmul(c.pose.rot.value()), c.pose.rot.reflects())
                            .expect("product of unit numbers");
                        (c.child_type, Isometry::new(rot, c.pose.trans.cmul(&s)))
                    })
                    .collect()
            })
            .collect();
        Inflater { s, s_ratio, placements }
    }

    fn children(&self, tile: &Tile) -> impl Iterator<Item = Tile> + '_ {
        // The parent pose carried into the expanded frame: z ↦ s·g(z/s).
        let g = &tile.pose;
        let u = if g.rot.reflects() { g.rot.value().cmul(&self.s_ratio) } else { g.rot.value().clone() };
        let outer = Isometry::new(
            UnitRotation::new(u, g.rot.reflects()).expect("product of unit numbers"),
            g.trans.cmul(&self.s),
        );
        let gen = tile.gen_scale + 1;
        self.placements[tile.tile_type].iter().map(move |(n, e)| Tile::new(*n, &outer * e, gen))
    }
}

/// `F` applied to one tile: its children in the expanded frame.
pub fn inflate_tile(rule: &InflationRule, tile: &Tile) -> Result<Vec<Tile>, EngineError> {
    if tile.tile_type >= rule.type_count() {
        return Err(EngineError::UnknownTileType(tile.tile_type));
    }
    Ok(Inflater::new(rule).children(tile).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InflateOptions {
    pub cap: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for InflateOptions {
    fn default() -> Self {
        InflateOptions { cap: DEFAULT_CAP, threads: None }
    }
}

/// Number of tiles `F^r` turns the given per-type counts into.
pub fn projected_count(rule: &InflationRule, counts: &[u64], r: u32) -> u128 {
    let mut v: Vec<u128> = counts.iter().map(|&c| c as u128).collect();
    for _ in 0..r {
        let mut next = vec![0u128; v.len()];
        for (k, cs) in rule.children.iter().enumerate() {
            for c in cs {
                next[c.child_type] = next[c.child_type].saturating_add(v[k]);
            }
        }
        v = next;
    }
    v.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

pub fn inflate_patch(rule: &InflationRule, patch: &Patch, r: u32) -> Result<Patch, EngineError> {
    inflate_patch_with(rule, patch, r, InflateOptions::default())
}

/// `F^r` applied tile by tile; the result is in canonical order and does
/// not depend on the number of workers.
pub fn inflate_patch_with(
    rule: &InflationRule,
    patch: &Patch,
    r: u32,
    opts: InflateOptions,
) -> Result<Patch, EngineError> {
    if let Some(t) = patch.tiles.iter().find(|t| t.tile_type >= rule.type_count()) {
        return Err(EngineError::UnknownTileType(t.tile_type));
    }
    let projected = projected_count(rule, &patch.type_counts(rule.type_count()), r);
    if projected > opts.cap as u128 {
        return Err(EngineError::PatchTooLarge { projected, cap: opts.cap });
    }
    let run = || {
        let inflater = Inflater::new(rule);
        let mut tiles = patch.tiles.clone();
        for _ in 0..r {
            tiles = tiles.par_iter().flat_map_iter(|t| inflater.children(t)).collect();
        }
        tiles.par_sort_unstable_by(Tile::canonical_cmp);
        tiles
    };
    let tiles = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(run),
        None => run(),
    };
    Ok(Patch { tiles, scale_exponent: patch.scale_exponent + r, seed_type: patch.seed_type, r: patch.r + r })
}

/// Exhaustive pairwise interior-disjointness check; returns the first
/// overlapping pair.
pub fn find_overlap(rule: &InflationRule, patch: &Patch) -> Option<(usize, usize)> {
    let polys = patch.polygons(rule);
    let boxes: Vec<_> = polys.iter().map(Polygon::bbox).collect();
    (0..polys.len()).into_par_iter().find_map_first(|i| {
        (i + 1..polys.len())
            .find(|&j| boxes[i].interiors_meet(&boxes[j]) && !polys[i].interiors_disjoint(&polys[j]))
            .map(|j| (i, j))
    })
}

/// Checks `samples` random tile pairs for interior overlap.
pub fn spot_check_overlap(rule: &InflationRule, patch: &Patch, samples: usize, seed: u64) -> Option<(usize, usize)> {
    let n = patch.len();
    if n < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).find_map(|_| {
        let pick = sample(&mut rng, n, 2);
        let (i, j) = (pick.index(0).min(pick.index(1)), pick.index(0).max(pick.index(1)));
        let (a, b) = (patch.tiles[i].polygon(rule), patch.tiles[j].polygon(rule));
        (!a.interiors_disjoint(&b)).then_some((i, j))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Scalar;
    use crate::rules::{builtin, folded_pinwheel, Builtin};

    #[test]
    fn square_children() {
        let rule = builtin(Builtin::Square);
        let seed = Patch::seed(&rule, 0).unwrap();
        let kids = inflate_tile(&rule, &seed.tiles[0]).unwrap();
        assert_eq!(kids.len(), 4);
        let mut corners: Vec<Point> = kids.iter().map(|t| t.pose.trans.clone()).collect();
        corners.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(corners, vec![Point::int(0, 0), Point::int(0, 1), Point::int(1, 0), Point::int(1, 1)]);
        assert!(kids.iter().all(|t| t.pose.rot.is_identity() && t.gen_scale == 1));
    }

    #[test]
    fn unknown_type() {
        let rule = builtin(Builtin::Square);
        let t = Tile::new(3, Isometry::identity(), 0);
        assert_eq!(inflate_tile(&rule, &t), Err(EngineError::UnknownTileType(3)));
        assert!(Patch::seed(&rule, 1).is_err());
    }

    #[test]
    fn children_tile_the_expanded_parent() {
        for rule in [builtin(Builtin::Pinwheel), folded_pinwheel(), builtin(Builtin::Square)] {
            for k in 0..rule.type_count() {
                let seed = Patch::seed(&rule, k).unwrap();
                let parent = rule.prototiles[k].shape.cmul(&rule.expansion);
                let kids = inflate_tile(&rule, &seed.tiles[0]).unwrap();
                let mut area = Scalar::zero();
                for t in &kids {
                    let p = t.polygon(&rule);
                    assert!(parent.contains(&p));
                    area = &area + &p.area();
                }
                assert_eq!(area, &rule.prototiles[k].shape.area() * &rule.expansion.norm_sq());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let rule = builtin(Builtin::Pinwheel);
        let seed = Patch::seed(&rule, 0).unwrap();
        let err = inflate_patch_with(&rule, &seed, 3, InflateOptions { cap: 100, threads: None }).unwrap_err();
        assert_eq!(err, EngineError::PatchTooLarge { projected: 125, cap: 100 });
    }

    #[test]
    fn reflected_parents_inflate_consistently() {
        // F(F(P)) computed in one go or by re-inflating the children one at
        // a time must agree, including for reflected poses.
        let rule = folded_pinwheel();
        let seed = Patch::seed(&rule, 0).unwrap();
        let two = inflate_patch(&rule, &seed, 2).unwrap();
        assert_eq!(two.len(), 25);
        assert_eq!(find_overlap(&rule, &two), None);
        let parent = rule.prototiles[0].shape.cmul(&rule.expansion.cpow(2));
        assert!(two.polygons(&rule).iter().all(|p| parent.contains(p)));
    }
}
