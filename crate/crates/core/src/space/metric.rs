use rayon::prelude::*;
use serde::Serialize;

use super::{grow, GridIndex, SpaceError};
use crate::engine::Patch;
use crate::geom::polygon::seg_dist;
use crate::geom::{orient, FloatPolygon, Point};
use crate::rules::InflationRule;

/// Smallest distance the metric reports; anything closer is indistinguishable.
pub const EPSILON_FLOOR: f64 = 1e-3;
/// Largest distance the metric reports.
pub const EPSILON_CEILING: f64 = 1.0;
/// Bisection stops once the bracket is this narrow.
pub const EPSILON_RESOLUTION: f64 = 1e-6;

/// A patch seen from a reference point, with the radius of the disk around
/// that point it is known to cover.
#[derive(Clone, Debug)]
pub struct CenteredPatch {
    pub patch: Patch,
    pub origin: Point,
    pub radius: f64,
    /// Tile outlines translated so the origin sits at `(0, 0)`.
    polys: Vec<FloatPolygon>,
    /// Distance from the origin to each tile.
    reach: Vec<f64>,
    grid: GridIndex,
}

impl CenteredPatch {
    /// Computes the covered radius from the tile outlines.
    pub fn new(rule: &InflationRule, patch: Patch, origin: Point) -> CenteredPatch {
        let radius = coverage_radius(&patch.polygons(rule), &origin);
        CenteredPatch::with_radius(rule, patch, origin, radius)
    }

    /// Uses a radius supplied by the caller, e.g. for a patch that was
    /// edited after its coverage was measured.
    pub fn with_radius(rule: &InflationRule, patch: Patch, origin: Point, radius: f64) -> CenteredPatch {
        let exact = patch.polygons(rule);
        let (ox, oy) = origin.to_f64();
        let polys: Vec<FloatPolygon> = exact.iter().map(|p| FloatPolygon::from(p).translate(-ox, -oy)).collect();
        let reach = polys.iter().map(|p| p.distance_to((0.0, 0.0))).collect();
        let grid = GridIndex::new(&polys.iter().map(FloatPolygon::bbox).collect::<Vec<_>>());
        CenteredPatch { patch, origin, radius, polys, reach, grid }
    }

    pub fn tile_outlines(&self) -> &[FloatPolygon] {
        &self.polys
    }

    /// Smallest Hausdorff distance from tile `i` to a tile of `other` lying
    /// within [`EPSILON_CEILING`]; infinite when there is none.
    fn nearest_match(&self, i: usize, other: &CenteredPatch) -> f64 {
        let p = &self.polys[i];
        other
            .grid
            .query(&grow(p.bbox(), EPSILON_CEILING))
            .into_iter()
            .map(|j| p.hausdorff(&other.polys[j]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Distance from `origin` to the boundary of the union of the tiles, or 0 if
/// the origin is not covered.
fn coverage_radius(polys: &[crate::geom::Polygon], origin: &Point) -> f64 {
    if !polys.iter().any(|p| p.contains_point(origin)) {
        return 0.0;
    }
    let boxes: Vec<[f64; 4]> = polys.iter().map(|p| p.bbox().to_f64()).collect();
    let grid = GridIndex::new(&boxes);
    let o = origin.to_f64();
    (0..polys.len())
        .into_par_iter()
        .map(|i| {
            let mut best = f64::INFINITY;
            for (a, b) in polys[i].edges() {
                let (af, bf) = (a.to_f64(), b.to_f64());
                let ebox = grow([af.0.min(bf.0), af.1.min(bf.1), af.0.max(bf.0), af.1.max(bf.1)], 1e-9);
                // Parameter intervals of ab covered by edges of other tiles.
                let v = b - a;
                let len2 = v.dot(&v).to_f64();
                let mut covered: Vec<(f64, f64)> = Vec::new();
                for j in grid.query(&ebox) {
                    if j == i {
                        continue;
                    }
                    for (c, d) in polys[j].edges() {
                        if orient(a, b, c) == 0 && orient(a, b, d) == 0 {
                            let tc = (c - a).dot(&v).to_f64() / len2;
                            let td = (d - a).dot(&v).to_f64() / len2;
                            let (lo, hi) = (tc.min(td).max(0.0), tc.max(td).min(1.0));
                            if hi > lo {
                                covered.push((lo, hi));
                            }
                        }
                    }
                }
                covered.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mut t = 0.0;
                let at = |s: f64| (af.0 + s * (bf.0 - af.0), af.1 + s * (bf.1 - af.1));
                for (lo, hi) in covered.into_iter().chain(std::iter::once((1.0, 1.0))) {
                    if lo > t + 1e-12 {
                        best = best.min(seg_dist(at(t), at(lo), o));
                    }
                    t = t.max(hi);
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub epsilon: f64,
    /// Radius of the disk the comparison was made on at `epsilon`.
    pub radius_used: f64,
    pub floor_hit: bool,
    /// The patches differ by more than the ceiling even on the unit disk.
    pub ceiling_hit: bool,
    /// `radius_used < 1/epsilon`: the disk was cut down to what the patches cover.
    pub truncated: bool,
}

/// Truncated tiling metric: the smallest `ε` such that on the disk of radius
/// `min(1/ε, coverage)` every tile of either patch has a tile of the other
/// within Hausdorff distance `ε`.
pub fn patch_distance(t: &CenteredPatch, u: &CenteredPatch) -> Result<MetricReport, SpaceError> {
    let coverage = t.radius.min(u.radius);
    if coverage < 1.0 / EPSILON_CEILING {
        return Err(SpaceError::InsufficientRadius { required: 1.0 / EPSILON_CEILING, available: coverage });
    }
    let relevant = |p: &CenteredPatch, q: &CenteredPatch| -> Vec<(f64, f64)> {
        (0..p.polys.len())
            .into_par_iter()
            .filter(|&i| p.reach[i] <= coverage)
            .map(|i| (p.reach[i], p.nearest_match(i, q)))
            .collect()
    };
    let mut pairs = relevant(t, u);
    pairs.extend(relevant(u, t));
    let radius = |eps: f64| (1.0 / eps).min(coverage);
    let holds = |eps: f64| {
        let r = radius(eps);
        pairs.iter().all(|&(reach, h)| reach > r || h <= eps)
    };
    let report = |eps: f64, floor_hit, ceiling_hit| MetricReport {
        epsilon: eps,
        radius_used: radius(eps),
        floor_hit,
        ceiling_hit,
        truncated: radius(eps) < 1.0 / eps,
    };
    if holds(EPSILON_FLOOR) {
        return Ok(report(EPSILON_FLOOR, true, false));
    }
    if !holds(EPSILON_CEILING) {
        return Ok(report(EPSILON_CEILING, false, true));
    }
    let (mut lo, mut hi) = (EPSILON_FLOOR, EPSILON_CEILING);
    while hi - lo > EPSILON_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(report(hi, false, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{inflate_patch, Tile};
    use crate::geom::{Isometry, Scalar, UnitRotation};
    use crate::rules::{builtin, Builtin};

    fn square_grid(n: u32) -> (InflationRule, Patch) {
        let rule = builtin(Builtin::Square);
        let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), n).unwrap();
        (rule, p)
    }

    #[test]
    fn coverage_of_square_grid() {
        let (rule, p) = square_grid(4);
        let c = CenteredPatch::new(&rule, p.clone(), Point::int(8, 8));
        assert!((c.radius - 8.0).abs() < 1e-12);
        let off = CenteredPatch::new(&rule, p, Point::int(20, 8));
        assert_eq!(off.radius, 0.0);
    }

    #[test]
    fn identical_and_shifted() {
        let (rule, p) = square_grid(5);
        let t = CenteredPatch::new(&rule, p.clone(), Point::int(16, 16));
        assert!(patch_distance(&t, &t).unwrap().floor_hit);
        let shifted = p.transform(&Isometry::translation(Point::new(Scalar::ratio(1, 10), Scalar::zero())));
        let u = CenteredPatch::new(&rule, shifted, Point::int(16, 16));
        let d = patch_distance(&t, &u).unwrap();
        assert!((d.epsilon - 0.1).abs() < 2e-6, "{d:?}");
        assert_eq!(d, patch_distance(&u, &t).unwrap());
    }

    #[test]
    fn one_rotated_tile() {
        let (rule, p) = square_grid(5);
        let origin = Point::int(16, 16);
        let t = CenteredPatch::new(&rule, p.clone(), origin.clone());
        // Rotate the tile with corner (16,16) about its centre by 0.5 rad.
        let mut tiles = p.tiles.clone();
        let idx = tiles.iter().position(|t| t.pose.trans == Point::int(16, 16)).unwrap();
        let c = Point::approx(16.5, 16.5);
        let rot =
            Isometry::new(UnitRotation::from_angle(0.5, false), &c - &UnitRotation::from_angle(0.5, false).apply(&c));
        let old = tiles[idx].clone();
        tiles[idx] = Tile::new(0, &rot * &old.pose.to_approx(), old.gen_scale);
        let gap = crate::geom::hausdorff_distance(&old.polygon(&rule), &tiles[idx].polygon(&rule));
        let u = CenteredPatch::with_radius(&rule, Patch::from_tiles(tiles, p.scale_exponent), origin, t.radius);
        let d = patch_distance(&t, &u).unwrap();
        assert!(d.epsilon >= gap - 2e-6, "{} < {gap}", d.epsilon);
    }

    #[test]
    fn small_patches_are_rejected() {
        let rule = builtin(Builtin::Square);
        let p = Patch::seed(&rule, 0).unwrap();
        let c = CenteredPatch::new(&rule, p, Point::new(Scalar::ratio(1, 2), Scalar::ratio(1, 2)));
        assert!(matches!(patch_distance(&c, &c), Err(SpaceError::InsufficientRadius { .. })));
    }
}
