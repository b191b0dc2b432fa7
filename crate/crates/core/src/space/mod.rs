//! Probes of the tiling space at desk scale: a truncated patch metric,
//! congruent-subpatch search and an adjacency census.

mod census;
mod metric;
mod subpatch;

pub use census::{adjacency_census, census_json, AdjacencyConfiguration};
pub use metric::{patch_distance, CenteredPatch, MetricReport, EPSILON_CEILING, EPSILON_FLOOR, EPSILON_RESOLUTION};
pub use subpatch::{congruent_subpatch, SubpatchMatch, MAX_QUERY_TILES};

use std::collections::HashMap;

use thiserror::Error;

use crate::engine::EngineError;
use crate::geom::{orient, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("patch covers only radius {available} around its origin; at least {required} is needed")]
    InsufficientRadius { required: f64, available: f64 },
    #[error("query has {0} tiles; at most {MAX_QUERY_TILES} are supported")]
    QueryTooLarge(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Uniform grid over bounding boxes.
#[derive(Clone, Debug)]
pub(crate) struct GridIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl GridIndex {
    pub(crate) fn new(boxes: &[[f64; 4]]) -> GridIndex {
        let mean = if boxes.is_empty() {
            1.0
        } else {
            boxes.iter().map(|b| (b[2] - b[0]).max(b[3] - b[1])).sum::<f64>() / boxes.len() as f64
        };
        let mut g = GridIndex { cell: mean.max(1e-9), cells: HashMap::new() };
        for (i, b) in boxes.iter().enumerate() {
            for key in g.keys(b) {
                g.cells.entry(key).or_default().push(i);
            }
        }
        g
    }

    fn keys(&self, b: &[f64; 4]) -> impl Iterator<Item = (i64, i64)> {
        let c = self.cell;
        let (x0, y0) = ((b[0] / c).floor() as i64, (b[1] / c).floor() as i64);
        let (x1, y1) = ((b[2] / c).floor() as i64, (b[3] / c).floor() as i64);
        (x0..=x1).flat_map(move |x| (y0..=y1).map(move |y| (x, y)))
    }

    /// Indices whose boxes may meet `b` (sorted, without duplicates).
    pub(crate) fn query(&self, b: &[f64; 4]) -> Vec<usize> {
        let mut out: Vec<usize> = self.keys(b).filter_map(|k| self.cells.get(&k)).flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub(crate) fn grow(b: [f64; 4], d: f64) -> [f64; 4] {
    [b[0] - d, b[1] - d, b[2] + d, b[3] + d]
}

/// Whether segments `ab` and `cd` are collinear and share a piece of
/// positive length.
pub(crate) fn segments_share_length(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    if orient(a, b, c) != 0 || orient(a, b, d) != 0 {
        return false;
    }
    let v = b - a;
    let len = v.dot(&v);
    let (tc, td) = ((c - a).dot(&v), (d - a).dot(&v));
    let (lo, hi) = if tc.cmp_value(&td).is_le() { (tc, td) } else { (td, tc) };
    let start = if lo.is_negative() { crate::geom::Scalar::zero() } else { lo };
    let end = if hi.cmp_value(&len).is_gt() { len } else { hi };
    (&end - &start).is_positive()
}
