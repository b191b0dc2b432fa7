//! Surface-to-volume ratio of a dilated tile: the share of `tP` lying
//! within distance 1 of its boundary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geom::polygon::seg_dist;
use crate::geom::Polygon;

/// Seed used by the Monte Carlo path unless another is given.
pub const MONTE_CARLO_SEED: u64 = 0x7e55_e11a;
const MONTE_CARLO_SAMPLES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BoundaryMethod {
    /// Convex input: inset computed by offsetting every edge.
    EdgeOffset,
    MonteCarlo {
        samples: usize,
        seed: u64,
        std_error: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryRatioReport {
    pub t: f64,
    pub ratio: f64,
    #[serde(flatten)]
    pub method: BoundaryMethod,
}

pub fn boundary_ratio(p: &Polygon, t: f64) -> BoundaryRatioReport {
    boundary_ratio_with(p, t, MONTE_CARLO_SEED, MONTE_CARLO_SAMPLES)
}

/// `[area(tP) − area(inset(tP, 1))] / area(tP)`.
pub fn boundary_ratio_with(p: &Polygon, t: f64, seed: u64, samples: usize) -> BoundaryRatioReport {
    assert!(t > 0.0, "dilation must be positive");
    let pts: Vec<(f64, f64)> = p.to_f64().into_iter().map(|(x, y)| (t * x, t * y)).collect();
    let area = shoelace(&pts);
    if p.is_convex() {
        let inner = shoelace(&inset(&pts, 1.0));
        return BoundaryRatioReport { t, ratio: (area - inner) / area, method: BoundaryMethod::EdgeOffset };
    }
    let (near, inside) = monte_carlo(&pts, seed, samples);
    let ratio = near as f64 / inside as f64;
    let std_error = (ratio * (1.0 - ratio) / inside as f64).sqrt();
    BoundaryRatioReport { t, ratio, method: BoundaryMethod::MonteCarlo { samples, seed, std_error } }
}

fn shoelace(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let s: f64 = (0..n).map(|i| pts[i].0 * pts[(i + 1) % n].1 - pts[(i + 1) % n].0 * pts[i].1).sum();
    (s / 2.0).max(0.0)
}

/// Intersection of the inward half-planes `n·(x − a) ≥ d` over all edges of
/// a convex counter-clockwise polygon.
fn inset(pts: &[(f64, f64)], d: f64) -> Vec<(f64, f64)> {
    let n = pts.len();
    let mut poly = pts.to_vec();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len = dx.hypot(dy);
        let (nx, ny) = (-dy / len, dx / len);
        let side = |p: (f64, f64)| nx * (p.0 - a.0) + ny * (p.1 - a.1) - d;
        let mut next = Vec::with_capacity(poly.len() + 1);
        for k in 0..poly.len() {
            let (p, q) = (poly[k], poly[(k + 1) % poly.len()]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                next.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let w = sp / (sp - sq);
                next.push((p.0 + w * (q.0 - p.0), p.1 + w * (q.1 - p.1)));
            }
        }
        poly = next;
        if poly.is_empty() {
            break;
        }
    }
    poly
}

fn monte_carlo(pts: &[(f64, f64)], seed: u64, samples: usize) -> (usize, usize) {
    let fp = crate::geom::FloatPolygon::new(pts.to_vec());
    let [x0, y0, x1, y1] = fp.bbox();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = pts.len();
    let (mut near, mut inside) = (0usize, 0usize);
    while inside < samples {
        let p = (rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        if !fp.contains(p) {
            continue;
        }
        inside += 1;
        if (0..n).any(|i| seg_dist(pts[i], pts[(i + 1) % n], p) <= 1.0) {
            near += 1;
        }
    }
    (near, inside)
}
