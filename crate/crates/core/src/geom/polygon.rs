use std::cmp::Ordering;

use super::isometry::Isometry;
use super::point::{orient, Point};
use super::scalar::{tolerance, Mode, Scalar};
use super::GeomError;

/// A simple polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// Axis-aligned bounding box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    /// True when the open boxes intersect.
    pub fn interiors_meet(&self, o: &BBox) -> bool {
        self.min.x.cmp_value(&o.max.x) == Ordering::Less
            && o.min.x.cmp_value(&self.max.x) == Ordering::Less
            && self.min.y.cmp_value(&o.max.y) == Ordering::Less
            && o.min.y.cmp_value(&self.max.y) == Ordering::Less
    }

    pub fn to_f64(&self) -> [f64; 4] {
        let (a, b) = self.min.to_f64();
        let (c, d) = self.max.to_f64();
        [a, b, c, d]
    }
}

/// Result of [`Polygon::interiors_overlap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub overlaps: bool,
    pub area: Scalar,
}

impl Polygon {
    /// Validates: at least three vertices, no repeated consecutive vertices,
    /// simple, counter-clockwise with positive area, one arithmetic mode.
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        let mode = vertices[0].mode().ok_or(GeomError::ModeMismatch)?;
        if vertices.iter().any(|v| v.mode() != Some(mode)) {
            return Err(GeomError::ModeMismatch);
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i].same(&vertices[(i + 1) % n]) {
                return Err(GeomError::RepeatedVertex(i));
            }
        }
        let p = Polygon { vertices };
        if let Some((i, j)) = p.self_intersection() {
            return Err(GeomError::SelfIntersecting(i, j));
        }
        match p.signed_area2().sign() {
            0 => Err(GeomError::DegenerateGeometry),
            s if s < 0 => Err(GeomError::NotCounterClockwise),
            _ => Ok(p),
        }
    }

    /// Like [`Polygon::new`] but accepts either orientation.
    pub fn from_ring(mut vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        match Polygon::new(vertices.clone()) {
            Err(GeomError::NotCounterClockwise) => {
                vertices.reverse();
                Polygon::new(vertices)
            }
            other => other,
        }
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Polygon {
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.vertices[0].x.mode()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Twice the signed shoelace area.
    pub fn signed_area2(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, b) in self.edges() {
            acc = &acc + &a.cross(b);
        }
        acc
    }

    pub fn area(&self) -> Scalar {
        &self.signed_area2() * &Scalar::ratio(1, 2)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let mut cx = Scalar::zero();
        let mut cy = Scalar::zero();
        for (a, b) in self.edges() {
            let c = a.cross(b);
            cx = &cx + &(&(&a.x + &b.x) * &c);
            cy = &cy + &(&(&a.y + &b.y) * &c);
        }
        let k = (&self.signed_area2() * &Scalar::int(3)).recip().expect("positive area");
        Point::new(&cx * &k, &cy * &k)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], &self.vertices[(i + 2) % n]) >= 0)
    }

    pub fn bbox(&self) -> BBox {
        let mut min = self.vertices[0].clone();
        let mut max = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            if v.x.cmp_value(&min.x) == Ordering::Less {
                min.x = v.x.clone();
            }
            if v.y.cmp_value(&min.y) == Ordering::Less {
                min.y = v.y.clone();
            }
            if v.x.cmp_value(&max.x) == Ordering::Greater {
                max.x = v.x.clone();
            }
            if v.y.cmp_value(&max.y) == Ordering::Greater {
                max.y = v.y.clone();
            }
        }
        BBox { min, max }
    }

    /// Image under an isometry; vertex order is reversed for reflections so
    /// the result stays counter-clockwise.
    pub fn transform(&self, g: &Isometry) -> Polygon {
        let mut v: Vec<Point> = self.vertices.iter().map(|p| g.apply(p)).collect();
        if !g.is_direct() {
            v.reverse();
        }
        Polygon { vertices: v }
    }

    /// Image under `z ↦ g(λz)` for positive `λ`.
    pub fn transform_scaled(&self, g: &Isometry, lambda: &Scalar) -> Polygon {
        let mut v: Vec<Point> = self.vertices.iter().map(|p| g.apply_scaled(lambda, p)).collect();
        if !g.is_direct() {
            v.reverse();
        }
        Polygon { vertices: v }
    }

    /// Image under multiplication by the complex number `s`.
    pub fn cmul(&self, s: &Point) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|p| p.cmul(s)).collect() }
    }

    pub fn to_approx(&self) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(Point::to_approx).collect() }
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.vertices.iter().map(Point::to_f64).collect()
    }

    /// Same point set (vertex lists equal up to rotation of the list).
    pub fn same_set(&self, o: &Polygon) -> bool {
        let n = self.len();
        if n != o.len() {
            return false;
        }
        (0..n).any(|s| (0..n).all(|i| self.vertices[i].same(&o.vertices[(i + s) % n])))
    }

    /// Point-in-polygon for the closed region; `Some(true)` inside,
    /// `Some(false)` outside, `None` on the boundary.
    pub fn locate(&self, p: &Point) -> Option<bool> {
        for (a, b) in self.edges() {
            if on_segment(a, b, p) {
                return None;
            }
        }
        // Crossing number with half-open rule on y.
        let mut inside = false;
        for (a, b) in self.edges() {
            let ay = a.y.cmp_value(&p.y) == Ordering::Greater;
            let by = b.y.cmp_value(&p.y) == Ordering::Greater;
            if ay != by {
                // Does the edge cross the ray to +x?
                let o = orient(a, b, p);
                if (o > 0) == by {
                    // b above p and p left of a→b, or b below and p right
                    inside = !inside;
                }
            }
        }
        Some(inside)
    }

    /// Whether the closed region contains `p`.
    pub fn contains_point(&self, p: &Point) -> bool {
        self.locate(p) != Some(false)
    }

    /// Decomposes into triangles (ear clipping). Collinear vertices are
    /// dropped without emitting degenerate triangles.
    pub fn triangulate(&self) -> Vec<Polygon> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        let v = &self.vertices;
        let mut out = Vec::new();
        let mut guard = 0usize;
        while idx.len() > 3 && guard < 4 * self.len() * self.len() + 16 {
            guard += 1;
            let m = idx.len();
            let mut clipped = false;
            for i in 0..m {
                let (ia, ib, ic) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
                let o = orient(&v[ia], &v[ib], &v[ic]);
                if o == 0 {
                    idx.remove(i);
                    clipped = true;
                    break;
                }
                if o < 0 {
                    continue;
                }
                let blocked = idx.iter().any(|&j| {
                    j != ia
                        && j != ib
                        && j != ic
                        && orient(&v[ia], &v[ib], &v[j]) >= 0
                        && orient(&v[ib], &v[ic], &v[j]) >= 0
                        && orient(&v[ic], &v[ia], &v[j]) >= 0
                });
                if !blocked {
                    out.push(Polygon::new_unchecked(vec![v[ia].clone(), v[ib].clone(), v[ic].clone()]));
                    idx.remove(i);
                    clipped = true;
                    break;
                }
            }
            if !clipped {
                break;
            }
        }
        if idx.len() == 3 && orient(&v[idx[0]], &v[idx[1]], &v[idx[2]]) > 0 {
            out.push(Polygon::new_unchecked(idx.iter().map(|&i| v[i].clone()).collect()));
        }
        out
    }

    /// Convex pieces: the polygon itself when convex, otherwise triangles.
    pub fn convex_pieces(&self) -> Vec<Polygon> {
        if self.is_convex() {
            vec![self.clone()]
        } else {
            self.triangulate()
        }
    }

    /// Area of the intersection of the two closed regions.
    pub fn intersection_area(&self, o: &Polygon) -> Scalar {
        if !self.bbox().interiors_meet(&o.bbox()) {
            return Scalar::zero();
        }
        let mut total = Scalar::zero();
        for a in self.convex_pieces() {
            for b in o.convex_pieces() {
                if a.bbox().interiors_meet(&b.bbox()) {
                    total = &total + &clipped_area(&a, &b);
                }
            }
        }
        total
    }

    /// Whether the interiors intersect in positive area, with that area.
    pub fn interiors_overlap(&self, o: &Polygon) -> Overlap {
        let area = self.intersection_area(o);
        Overlap { overlaps: area.is_positive(), area }
    }

    /// Cheap disjointness test for convex polygons via separating edge
    /// normals; falls back to the area computation otherwise.
    pub fn interiors_disjoint(&self, o: &Polygon) -> bool {
        if !self.bbox().interiors_meet(&o.bbox()) {
            return true;
        }
        if self.is_convex() && o.is_convex() {
            return separated_by_edge(self, o) || separated_by_edge(o, self);
        }
        !self.interiors_overlap(o).overlaps
    }

    /// Whether `o ⊆ self` (boundary contact allowed).
    pub fn contains(&self, o: &Polygon) -> bool {
        if self.is_convex() {
            return o.vertices.iter().all(|p| self.edges().all(|(a, b)| orient(a, b, p) >= 0));
        }
        (&o.area() - &self.intersection_area(o)).is_zero()
    }

    /// Finds a pair of non-adjacent edges that touch, or adjacent edges that
    /// fold back onto each other.
    fn self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let v = &self.vertices;
        for i in 0..n {
            let (a, b) = (&v[i], &v[(i + 1) % n]);
            for j in (i + 1)..n {
                let (c, d) = (&v[j], &v[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Shared vertex; they only conflict if collinear and overlapping.
                    let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    if orient(p, shared, q) == 0 && (p - shared).dot(&(q - shared)).is_positive() {
                        return Some((i, j));
                    }
                    continue;
                }
                if segments_touch(a, b, c, d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// All isometries mapping the polygon onto itself.
    pub fn symmetries(&self) -> Vec<Isometry> {
        congruences(self, self)
    }
}

/// All isometries `g` with `g(src) = dst` as point sets.
pub fn congruences(src: &Polygon, dst: &Polygon) -> Vec<Isometry> {
    let n = src.len();
    if n != dst.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for reflect in [false, true] {
        for shift in 0..n {
            let target: Vec<Point> = if reflect {
                (0..n).map(|i| dst.vertices[(shift + n - i) % n].clone()).collect()
            } else {
                (0..n).map(|i| dst.vertices[(shift + i) % n].clone()).collect()
            };
            if let Some(g) = Isometry::from_correspondence(&src.vertices, &target, reflect) {
                out.push(g);
            }
        }
    }
    out
}

fn separated_by_edge(p: &Polygon, q: &Polygon) -> bool {
    // Edge line of a CCW convex polygon: q lies in the closed outer half-plane.
    p.edges().any(|(a, b)| q.vertices.iter().all(|v| orient(a, b, v) <= 0))
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0 && !(a - p).dot(&(b - p)).is_positive()
}

fn segments_touch(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Sutherland-Hodgman clip of `subject` by the convex CCW polygon `clip`;
/// returns the area of the result.
fn clipped_area(subject: &Polygon, clip: &Polygon) -> Scalar {
    let mut pts: Vec<Point> = subject.vertices.clone();
    for (a, b) in clip.edges() {
        if pts.is_empty() {
            break;
        }
        let side: Vec<Scalar> = pts.iter().map(|p| (b - a).cross(&(p - a))).collect();
        let mut next = Vec::with_capacity(pts.len() + 2);
        let m = pts.len();
        for i in 0..m {
            let j = (i + 1) % m;
            let (si, sj) = (&side[i], &side[j]);
            let (in_i, in_j) = (si.sign() >= 0, sj.sign() >= 0);
            if in_i {
                next.push(pts[i].clone());
            }
            if (si.sign() > 0 && sj.sign() < 0) || (si.sign() < 0 && sj.sign() > 0) {
                let t = si / &(si - sj);
                next.push(&pts[i] + &(&pts[j] - &pts[i]).scale(&t));
            }
            let _ = in_j;
        }
        pts = next;
    }
    if pts.len() < 3 {
        return Scalar::zero();
    }
    let mut acc = Scalar::zero();
    let m = pts.len();
    for i in 0..m {
        acc = &acc + &pts[i].cross(&pts[(i + 1) % m]);
    }
    &acc * &Scalar::ratio(1, 2)
}

/// Shoelace area; errors for a degenerate polygon.
pub fn polygon_area(p: &Polygon) -> Result<Scalar, GeomError> {
    let a = p.area();
    if a.is_positive() {
        Ok(a)
    } else {
        Err(GeomError::DegenerateGeometry)
    }
}

/// Boundary samples per edge used by [`hausdorff_distance`] for non-convex input.
pub const HAUSDORFF_EDGE_SAMPLES: usize = 64;
/// Interior lattice resolution (per axis) used for non-convex input.
pub const HAUSDORFF_INTERIOR_GRID: usize = 32;

/// Hausdorff distance between the two closed regions.
///
/// For a convex source region the directed distance `sup_{p∈P} d(p, Q)` is
/// attained at a vertex, so vertices suffice. Non-convex regions are sampled:
/// every edge at [`HAUSDORFF_EDGE_SAMPLES`] points plus an interior lattice of
/// [`HAUSDORFF_INTERIOR_GRID`]² bounding-box points that fall inside.
pub fn hausdorff_distance(p: &Polygon, q: &Polygon) -> f64 {
    let pf = FloatPolygon::from(p);
    let qf = FloatPolygon::from(q);
    pf.directed_hausdorff(&qf).max(qf.directed_hausdorff(&pf))
}

/// A polygon in plain doubles, for metric computations.
#[derive(Clone, Debug)]
pub struct FloatPolygon {
    pub pts: Vec<(f64, f64)>,
    pub convex: bool,
}

impl From<&Polygon> for FloatPolygon {
    fn from(p: &Polygon) -> Self {
        FloatPolygon { pts: p.to_f64(), convex: p.is_convex() }
    }
}

impl FloatPolygon {
    pub fn new(pts: Vec<(f64, f64)>) -> FloatPolygon {
        let n = pts.len();
        let convex = (0..n).all(|i| {
            let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
            (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0) >= -tolerance()
        });
        FloatPolygon { pts, convex }
    }

    pub fn translate(&self, dx: f64, dy: f64) -> FloatPolygon {
        FloatPolygon { pts: self.pts.iter().map(|&(x, y)| (x + dx, y + dy)).collect(), convex: self.convex }
    }

    pub fn bbox(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for &(x, y) in &self.pts {
            b[0] = b[0].min(x);
            b[1] = b[1].min(y);
            b[2] = b[2].max(x);
            b[3] = b[3].max(y);
        }
        b
    }

    pub fn max_norm(&self) -> f64 {
        self.pts.iter().map(|&(x, y)| x.hypot(y)).fold(0.0, f64::max)
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        let n = self.pts.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            if seg_dist(a, b, p) <= tolerance() {
                return true;
            }
            if (a.1 > p.1) != (b.1 > p.1) {
                let x = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
                if p.0 < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from `p` to the closed region.
    pub fn distance_to(&self, p: (f64, f64)) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        let n = self.pts.len();
        (0..n).map(|i| seg_dist(self.pts[i], self.pts[(i + 1) % n], p)).fold(f64::INFINITY, f64::min)
    }

    fn samples(&self) -> Vec<(f64, f64)> {
        if self.convex {
            return self.pts.clone();
        }
        let n = self.pts.len();
        let mut out = Vec::with_capacity(n * HAUSDORFF_EDGE_SAMPLES);
        for i in 0..n {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            for s in 0..HAUSDORFF_EDGE_SAMPLES {
                let t = s as f64 / HAUSDORFF_EDGE_SAMPLES as f64;
                out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            }
        }
        let bb = self.bbox();
        let g = HAUSDORFF_INTERIOR_GRID;
        for i in 0..g {
            for j in 0..g {
                let p = (
                    bb[0] + (i as f64 + 0.5) / g as f64 * (bb[2] - bb[0]),
                    bb[1] + (j as f64 + 0.5) / g as f64 * (bb[3] - bb[1]),
                );
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn directed_hausdorff(&self, other: &FloatPolygon) -> f64 {
        self.samples().into_iter().map(|p| other.distance_to(p)).fold(0.0, f64::max)
    }

    pub fn hausdorff(&self, other: &FloatPolygon) -> f64 {
        self.directed_hausdorff(other).max(other.directed_hausdorff(self))
    }
}

pub(crate) fn seg_dist(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::isometry::UnitRotation;
    use proptest::prelude::*;

    fn poly(pts: &[(i64, i64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap()
    }

    fn unit_square() -> Polygon {
        poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    fn shifted(p: &Polygon, dx: Scalar, dy: Scalar) -> Polygon {
        p.transform(&Isometry::translation(Point::new(dx, dy)))
    }

    #[test]
    fn areas() {
        assert_eq!(polygon_area(&unit_square()).unwrap(), Scalar::one());
        assert_eq!(polygon_area(&poly(&[(0, 0), (2, 0), (2, 1)])).unwrap(), Scalar::one());
        let big =
            Polygon::new(unit_square().vertices().iter().map(|v| v.scale(&Scalar::ratio(7, 3))).collect()).unwrap();
        assert_eq!(big.area(), Scalar::ratio(49, 9));
    }

    #[test]
    fn rejects_invalid_polygons() {
        let pts = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| Point::int(x, y)).collect::<Vec<_>>();
        assert_eq!(Polygon::new(pts(&[(0, 0), (1, 0)])), Err(GeomError::TooFewVertices(2)));
        assert_eq!(Polygon::new(pts(&[(0, 0), (1, 0), (1, 0), (0, 1)])), Err(GeomError::RepeatedVertex(1)));
        assert_eq!(Polygon::new(pts(&[(0, 0), (0, 1), (1, 0)])), Err(GeomError::NotCounterClockwise));
        assert!(matches!(Polygon::new(pts(&[(0, 0), (2, 2), (2, 0), (0, 2)])), Err(GeomError::SelfIntersecting(..))));
        assert!(Polygon::new(pts(&[(0, 0), (1, 0), (2, 0)])).is_err());
        assert!(Polygon::from_ring(pts(&[(0, 0), (0, 1), (1, 0)])).is_ok());
    }

    #[test]
    fn overlap_cases() {
        let sq = unit_square();
        let o = sq.interiors_overlap(&sq);
        assert!(o.overlaps);
        assert_eq!(o.area, Scalar::one());

        let neighbour = shifted(&sq, Scalar::one(), Scalar::zero());
        let o = sq.interiors_overlap(&neighbour);
        assert!(!o.overlaps);
        assert_eq!(o.area, Scalar::zero());
        assert!(sq.interiors_disjoint(&neighbour));

        // Rectangle-intersection oracle: [0,1]² ∩ [1/2,3/2]×[0,1] has width 1/2.
        let half = shifted(&sq, Scalar::ratio(1, 2), Scalar::zero());
        let width = Scalar::one() - Scalar::ratio(1, 2);
        let o = sq.interiors_overlap(&half);
        assert!(o.overlaps);
        assert_eq!(o.area, &width * &Scalar::one());
        assert!(!sq.interiors_disjoint(&half));
    }

    #[test]
    fn overlap_of_non_convex_shapes() {
        // L-shape of area 3 vs the unit square in its notch: touching only.
        let l = poly(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        assert_eq!(l.area(), Scalar::int(3));
        let notch = poly(&[(1, 1), (2, 1), (2, 2), (1, 2)]);
        assert!(!l.interiors_overlap(&notch).overlaps);
        let inside = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(l.interiors_overlap(&inside).area, Scalar::one());
        assert!(l.contains(&inside));
        assert!(!l.contains(&notch));
        assert_eq!(l.triangulate().iter().map(|t| t.area()).fold(Scalar::zero(), |a, b| a + b), Scalar::int(3));
    }

    #[test]
    fn containment() {
        let sq = unit_square();
        assert!(sq.contains(&sq));
        let quarter =
            poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]).transform_scaled(&Isometry::identity(), &Scalar::ratio(1, 2));
        assert!(!quarter.contains(&sq));
        assert!(sq.contains(&quarter));
    }

    #[test]
    fn locate_points() {
        let sq = unit_square();
        assert_eq!(sq.locate(&Point::new(Scalar::ratio(1, 2), Scalar::ratio(1, 2))), Some(true));
        assert_eq!(sq.locate(&Point::int(1, 0)), None);
        assert_eq!(sq.locate(&Point::new(Scalar::ratio(1, 2), Scalar::int(0))), None);
        assert_eq!(sq.locate(&Point::int(2, 0)), Some(false));
        assert_eq!(sq.locate(&Point::new(Scalar::int(-1), Scalar::ratio(1, 2))), Some(false));
    }

    #[test]
    fn hausdorff_cases() {
        let sq = unit_square();
        assert_eq!(hausdorff_distance(&sq, &sq), 0.0);
        let d = shifted(&sq, Scalar::ratio(3, 100), Scalar::zero());
        assert!((hausdorff_distance(&sq, &d) - 0.03).abs() < 1e-12);
        // Concentric square of side 1 + 2h: the far corner is h√2 away.
        let h = 0.125;
        let big = poly(&[(0, 0), (1, 0), (1, 1), (0, 1)])
            .transform_scaled(&Isometry::translation(Point::approx(-h, -h)), &Scalar::approx(1.0 + 2.0 * h));
        assert!((hausdorff_distance(&sq, &big) - h * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn symmetries_of_square_and_triangle() {
        assert_eq!(unit_square().symmetries().len(), 8);
        assert_eq!(poly(&[(0, 0), (2, 0), (2, 1)]).symmetries().len(), 1);
    }

    fn arb_triangle() -> impl Strategy<Value = Polygon> {
        (-6.0f64..6.0, -6.0f64..6.0, 0.5f64..3.0, 0.0f64..std::f64::consts::TAU, 0.3f64..2.0, 0.3f64..2.8).prop_map(
            |(x, y, r, th, s, spread)| {
                let pts = [0.0, spread, spread + 1.9]
                    .iter()
                    .map(|a| Point::approx(x + r * (th + a).cos(), y + r * s * (th + a).sin()))
                    .collect();
                Polygon::from_ring(pts).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn area_invariant_under_isometries(g in crate::geom::isometry::tests::arb_isometry()) {
            let p = poly(&[(0, 0), (3, 0), (3, 1), (1, 1), (1, 2), (0, 2)]);
            prop_assert_eq!(p.transform(&g).area(), p.area());
            prop_assert_eq!(Polygon::new(p.transform(&g).vertices().to_vec()).map(|q| q.area()), Ok(p.area()));
        }

        #[test]
        fn hausdorff_triangle_inequality(a in arb_triangle(), b in arb_triangle(), c in arb_triangle()) {
            let ab = hausdorff_distance(&a, &b);
            let bc = hausdorff_distance(&b, &c);
            let ac = hausdorff_distance(&a, &c);
            prop_assert!(ac <= ab + bc + 8.0 * tolerance());
            prop_assert!((ab - hausdorff_distance(&b, &a)).abs() == 0.0);
        }

        #[test]
        fn rotation_keeps_polygons_valid(q in 0i32..4) {
            let g = Isometry::rotation(UnitRotation::quarter_turns(q));
            let p = unit_square().transform(&g);
            prop_assert!(Polygon::new(p.vertices().to_vec()).is_ok());
        }
    }
}
