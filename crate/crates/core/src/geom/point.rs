use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::scalar::{Mode, Scalar};

/// A point of the plane. Points double as complex numbers `x + iy`; the
/// `c*` methods are complex arithmetic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Point {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Point {
        Point { x: Scalar::int(x), y: Scalar::int(y) }
    }

    pub fn approx(x: f64, y: f64) -> Point {
        Point { x: Scalar::approx(x), y: Scalar::approx(y) }
    }

    pub fn origin() -> Point {
        Point::int(0, 0)
    }

    /// The complex number 1.
    pub fn one() -> Point {
        Point::int(1, 0)
    }

    /// `None` when the coordinates disagree on the mode.
    pub fn mode(&self) -> Option<Mode> {
        let m = self.x.mode();
        (m == self.y.mode()).then_some(m)
    }

    pub fn to_approx(&self) -> Point {
        Point { x: self.x.to_approx(), y: self.y.to_approx() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn cmul(&self, o: &Point) -> Point {
        if o.y.is_exact() && o.y.is_zero() {
            return self.scale(&o.x);
        }
        if self.y.is_exact() && self.y.is_zero() {
            return o.scale(&self.x);
        }
        Point { x: &(&self.x * &o.x) - &(&self.y * &o.y), y: &(&self.x * &o.y) + &(&self.y * &o.x) }
    }

    pub fn conj(&self) -> Point {
        Point { x: self.x.clone(), y: -&self.y }
    }

    pub fn scale(&self, s: &Scalar) -> Point {
        Point { x: &self.x * s, y: &self.y * s }
    }

    /// `|z|²`.
    pub fn norm_sq(&self) -> Scalar {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    pub fn cinv(&self) -> Option<Point> {
        let n = self.norm_sq().recip()?;
        Some(self.conj().scale(&n))
    }

    pub fn cdiv(&self, o: &Point) -> Option<Point> {
        Some(self.cmul(&o.cinv()?))
    }

    pub fn cpow(&self, exp: u32) -> Point {
        let mut acc = Point::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.cmul(&base);
            }
            base = base.cmul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &(&self.x * &o.x) + &(&self.y * &o.y)
    }

    /// z-component of the cross product.
    pub fn cross(&self, o: &Point) -> Scalar {
        &(&self.x * &o.y) - &(&self.y * &o.x)
    }

    /// Mode-aware coordinate equality.
    pub fn same(&self, o: &Point) -> bool {
        self.x.same(&o.x) && self.y.same(&o.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn canonical_cmp(&self, o: &Point) -> std::cmp::Ordering {
        self.x.canonical_cmp(&o.x).then_with(|| self.y.canonical_cmp(&o.y))
    }

    pub fn distance_f64(&self, o: &Point) -> f64 {
        let (a, b) = self.to_f64();
        let (c, d) = o.to_f64();
        (a - c).hypot(b - d)
    }

    pub fn radicand(&self) -> u32 {
        self.x.radicand().max(self.y.radicand())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        &self + &o
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point { x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        &self - &o
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point { x: -&self.x, y: -&self.y }
    }
}

/// Sign of the orientation determinant of `(a, b, c)`: positive when
/// counter-clockwise. Exact in exact mode; `ε_geom`-snapped otherwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    (b - a).cross(&(c - a)).sign()
}
