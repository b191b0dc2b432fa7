use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use super::point::Point;
use super::scalar::{tolerance, Mode, Scalar};
use super::GeomError;

/// The linear part of a plane congruence: multiplication by a unit complex
/// number `u`, optionally preceded by complex conjugation (reflection in the
/// x-axis).
///
/// `u` is held as its exact value; the `g / (√L)^k` form used in files is
/// recovered by [`UnitRotation::to_scaled_integral`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitRotation {
    u: Point,
    reflect: bool,
}

impl UnitRotation {
    pub fn identity() -> UnitRotation {
        UnitRotation { u: Point::one(), reflect: false }
    }

    /// Rotation by `π/2 · quarter_turns`.
    pub fn quarter_turns(quarter_turns: i32) -> UnitRotation {
        let u = match quarter_turns.rem_euclid(4) {
            0 => Point::int(1, 0),
            1 => Point::int(0, 1),
            2 => Point::int(-1, 0),
            _ => Point::int(0, -1),
        };
        UnitRotation { u, reflect: false }
    }

    /// Checks `|u| = 1` (exactly, or within `4·ε_geom` in approximate mode).
    pub fn new(u: Point, reflect: bool) -> Result<UnitRotation, GeomError> {
        let n = u.norm_sq();
        let unit = match n {
            Scalar::Exact(_) => n == Scalar::one(),
            Scalar::Approx(x) => (x - 1.0).abs() <= 4.0 * tolerance(),
        };
        if !unit {
            return Err(GeomError::NotUnitRotation { norm_sq: n.to_f64() });
        }
        if u.mode().is_none() {
            return Err(GeomError::ModeMismatch);
        }
        Ok(UnitRotation { u, reflect })
    }

    /// Approximate rotation by `angle` radians.
    pub fn from_angle(angle: f64, reflect: bool) -> UnitRotation {
        UnitRotation { u: Point::approx(angle.cos(), angle.sin()), reflect }
    }

    /// `u = g · λ^k`, i.e. `g / (√L)^k` with `L = λ⁻²`.
    pub fn from_scaled_integral(g: Point, k: u32, lambda: &Scalar, reflect: bool) -> Result<UnitRotation, GeomError> {
        let u = g.scale(&lambda.pow(k));
        UnitRotation::new(u, reflect)
    }

    /// Minimal `k ≤ max_k` such that `g = u / λ^k` has integral components,
    /// returning `(g, k)`; falls back to `(u, 0)` when there is none.
    pub fn to_scaled_integral(&self, lambda: &Scalar, max_k: u32) -> (Point, u32) {
        if let Some(inv) = lambda.recip() {
            let mut g = self.u.clone();
            for k in 0..=max_k {
                if g.x.is_integral() && g.y.is_integral() {
                    return (g, k);
                }
                g = g.scale(&inv);
            }
        }
        (self.u.clone(), 0)
    }

    pub fn value(&self) -> &Point {
        &self.u
    }

    pub fn reflects(&self) -> bool {
        self.reflect
    }

    pub fn mode(&self) -> Mode {
        self.u.x.mode()
    }

    pub fn to_approx(&self) -> UnitRotation {
        UnitRotation { u: self.u.to_approx(), reflect: self.reflect }
    }

    /// The same rotation without the reflection flag.
    pub fn direct_part(&self) -> UnitRotation {
        UnitRotation { u: self.u.clone(), reflect: false }
    }

    /// Acts on a vector.
    pub fn apply(&self, z: &Point) -> Point {
        if self.reflect {
            self.u.cmul(&z.conj())
        } else {
            self.u.cmul(z)
        }
    }

    pub fn compose(&self, other: &UnitRotation) -> UnitRotation {
        UnitRotation { u: self.apply(&other.u), reflect: self.reflect ^ other.reflect }
    }

    pub fn inverse(&self) -> UnitRotation {
        if self.reflect {
            // (z ↦ u·z̄)⁻¹ = (w ↦ u·w̄)
            self.clone()
        } else {
            UnitRotation { u: self.u.conj(), reflect: false }
        }
    }

    pub fn pow(&self, n: u32) -> UnitRotation {
        let mut acc = UnitRotation::identity();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        !self.reflect && self.u.same(&Point::one())
    }

    /// `arg(u)` in `(−π, π]`.
    pub fn angle(&self) -> f64 {
        let (x, y) = self.u.to_f64();
        y.atan2(x)
    }

    pub fn same(&self, o: &UnitRotation) -> bool {
        self.reflect == o.reflect && self.u.same(&o.u)
    }

    pub fn canonical_cmp(&self, o: &UnitRotation) -> Ordering {
        self.reflect.cmp(&o.reflect).then_with(|| self.u.canonical_cmp(&o.u))
    }
}

impl fmt::Debug for UnitRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", if self.reflect { "conj·" } else { "" }, self.u)
    }
}

/// A congruence of the plane, `z ↦ u·z + t` or `z ↦ u·z̄ + t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    pub rot: UnitRotation,
    pub trans: Point,
}

impl Isometry {
    pub fn identity() -> Isometry {
        Isometry { rot: UnitRotation::identity(), trans: Point::origin() }
    }

    pub fn new(rot: UnitRotation, trans: Point) -> Isometry {
        Isometry { rot, trans }
    }

    pub fn translation(t: Point) -> Isometry {
        Isometry { rot: UnitRotation::identity(), trans: t }
    }

    pub fn rotation(rot: UnitRotation) -> Isometry {
        Isometry { rot, trans: Point::origin() }
    }

    /// Reflection in the x-axis.
    pub fn conjugation() -> Isometry {
        Isometry { rot: UnitRotation { u: Point::one(), reflect: true }, trans: Point::origin() }
    }

    /// `None` when the components mix modes.
    pub fn mode(&self) -> Option<Mode> {
        let m = self.rot.u.mode()?;
        (self.trans.mode()? == m).then_some(m)
    }

    pub fn to_approx(&self) -> Isometry {
        Isometry { rot: self.rot.to_approx(), trans: self.trans.to_approx() }
    }

    pub fn is_direct(&self) -> bool {
        !self.rot.reflect
    }

    pub fn apply(&self, p: &Point) -> Point {
        &self.rot.apply(p) + &self.trans
    }

    /// `z ↦ g(λ·z)`: the similarity that places a prototile shrunk by `λ`.
    pub fn apply_scaled(&self, lambda: &Scalar, p: &Point) -> Point {
        &self.rot.apply(&p.scale(lambda)) + &self.trans
    }

    /// `self ∘ other`, with the mode check of the public contract.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, GeomError> {
        match (self.mode(), other.mode()) {
            (Some(a), Some(b)) if a == b => Ok(self * other),
            _ => Err(GeomError::ModeMismatch),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let rot = self.rot.inverse();
        let trans = -&rot.apply(&self.trans);
        Isometry { rot, trans }
    }

    pub fn same(&self, o: &Isometry) -> bool {
        self.rot.same(&o.rot) && self.trans.same(&o.trans)
    }

    pub fn is_identity(&self) -> bool {
        self.rot.is_identity() && self.trans.is_zero()
    }

    pub fn canonical_cmp(&self, o: &Isometry) -> Ordering {
        self.rot.canonical_cmp(&o.rot).then_with(|| self.trans.canonical_cmp(&o.trans))
    }

    /// The isometry taking `src[i]` to `dst[i]` for every `i`, if one exists
    /// with the requested handedness.
    pub fn from_correspondence(src: &[Point], dst: &[Point], reflect: bool) -> Option<Isometry> {
        if src.len() < 2 || src.len() != dst.len() {
            return None;
        }
        let ds = &src[1] - &src[0];
        let dd = &dst[1] - &dst[0];
        let ds = if reflect { ds.conj() } else { ds };
        let u = dd.cdiv(&ds)?;
        let rot = UnitRotation::new(u, reflect).ok()?;
        let trans = &dst[0] - &rot.apply(&src[0]);
        let g = Isometry { rot, trans };
        src.iter().zip(dst).all(|(s, d)| g.apply(s).same(d)).then_some(g)
    }
}

impl Mul<&Isometry> for &Isometry {
    type Output = Isometry;

    /// Composition `self ∘ rhs`.
    fn mul(self, rhs: &Isometry) -> Isometry {
        Isometry { rot: self.rot.compose(&rhs.rot), trans: self.apply(&rhs.trans) }
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry[{:?} + {:?}]", self.rot, self.trans)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geom::rational::Rational;
    use proptest::prelude::*;

    fn rot(re: (i64, i64), im: (i64, i64)) -> UnitRotation {
        UnitRotation::new(Point::new(Scalar::ratio(re.0, re.1), Scalar::ratio(im.0, im.1)), false).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let h = Isometry::new(rot((3, 5), (4, 5)), Point::int(2, -7));
        assert_eq!(&Isometry::identity() * &h, h);
        assert_eq!(&h * &Isometry::identity(), h);
    }

    #[test]
    fn quarter_turn_squared_is_half_turn() {
        let q = Isometry::rotation(UnitRotation::quarter_turns(1));
        let h = q.compose(&q).unwrap();
        assert_eq!(h, Isometry::rotation(UnitRotation::quarter_turns(2)));
        assert_eq!(h.apply(&Point::int(1, 0)), Point::int(-1, 0));
    }

    #[test]
    fn two_plus_i_over_root_five_inverts_exactly() {
        // u = (2+i)/√5: g·ḡ = 5 = (√5)², so u·ū = 1 exactly.
        let g = Point::int(2, 1);
        assert_eq!(g.cmul(&g.conj()), Point::int(5, 0));
        let lambda = Scalar::surd(Rational::ZERO, Rational::new(1, 5), 5);
        let u = UnitRotation::from_scaled_integral(g.clone(), 1, &lambda, false).unwrap();
        let iso = Isometry::new(u.clone(), Point::int(1, 1));
        assert!((&iso * &iso.inverse()).is_identity());
        assert!((&iso.inverse() * &iso).is_identity());
        assert_eq!(u.to_scaled_integral(&lambda, 16), (g, 1));
    }

    #[test]
    fn non_unit_rotation_rejected() {
        assert!(UnitRotation::new(Point::int(2, 1), false).is_err());
    }

    #[test]
    fn mixed_modes_are_rejected() {
        let a = Isometry::translation(Point::int(1, 0));
        let b = Isometry::translation(Point::approx(1.0, 0.0));
        assert_eq!(a.compose(&b), Err(GeomError::ModeMismatch));
    }

    #[test]
    fn correspondence_recovers_reflection() {
        let tri = [Point::int(0, 0), Point::int(2, 0), Point::int(2, 1)];
        let g = Isometry::new(
            UnitRotation::new(Point::new(Scalar::ratio(-3, 5), Scalar::ratio(4, 5)), true).unwrap(),
            Point::new(Scalar::ratio(1, 3), Scalar::int(2)),
        );
        let img: Vec<Point> = tri.iter().map(|p| g.apply(p)).collect();
        assert_eq!(Isometry::from_correspondence(&tri, &img, true), Some(g));
        assert_eq!(Isometry::from_correspondence(&tri, &img, false), None);
    }

    /// Exact unit complex numbers from Pythagorean triples.
    pub(crate) fn arb_isometry() -> impl Strategy<Value = Isometry> {
        (1i64..12, 0i64..12, 0u8..4, any::<bool>(), -20i64..20, 1i64..7, -20i64..20, 1i64..7).prop_map(
            |(m, n, quarter, reflect, tx, dx, ty, dy)| {
                let (a, b, c) = (m * m - n * n, 2 * m * n, m * m + n * n);
                let u = Point::new(Scalar::ratio(a, c), Scalar::ratio(b, c));
                let r = UnitRotation::new(u, reflect).unwrap().compose(&UnitRotation::quarter_turns(quarter as i32));
                Isometry::new(r, Point::new(Scalar::ratio(tx, dx), Scalar::ratio(ty, dy)))
            },
        )
    }

    proptest! {
        #[test]
        fn group_laws(f in arb_isometry(), g in arb_isometry(), h in arb_isometry()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert!((&g * &g.inverse()).is_identity());
            let p = Point::new(Scalar::ratio(3, 7), Scalar::ratio(-5, 2));
            prop_assert_eq!((&f * &g).apply(&p), f.apply(&g.apply(&p)));
        }

        #[test]
        fn distances_preserved_in_approx_mode(g in arb_isometry(), x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0, w in -5.0f64..5.0) {
            let g = g.to_approx();
            let p = Point::approx(x, y);
            let q = Point::approx(z, w);
            let d0 = p.distance_f64(&q);
            let d1 = g.apply(&p).distance_f64(&g.apply(&q));
            prop_assert!((d0 - d1).abs() <= 4.0 * tolerance());
        }
    }
}
