use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use super::rational::Rational;

/// Default geometric tolerance for approximate mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current process-wide tolerance `ε_geom` used by approximate-mode comparisons.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets `ε_geom`. Non-positive or non-finite values are ignored.
pub fn set_tolerance(eps: f64) {
    if eps.is_finite() && eps > 0.0 {
        TOLERANCE_BITS.store(eps.to_bits(), AtomicOrdering::Relaxed);
    }
}

/// Arithmetic mode of a [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Approx => f.write_str("approx"),
        }
    }
}

/// An element `rat + irr·√radicand` of a real quadratic field.
///
/// Canonical form: `radicand == 1` exactly when `irr == 0`, so a value has a
/// single representation no matter which field it was computed in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    rat: Rational,
    irr: Rational,
    radicand: u32,
}

impl Surd {
    pub fn rational(r: Rational) -> Surd {
        Surd { rat: r, irr: Rational::ZERO, radicand: 1 }
    }

    /// `rat + irr·√radicand`; `radicand` must be square-free.
    pub fn new(rat: Rational, irr: Rational, radicand: u32) -> Surd {
        assert!(radicand >= 1, "radicand must be positive");
        if radicand == 1 {
            return Surd::rational(&rat + &irr);
        }
        if irr.is_zero() {
            return Surd::rational(rat);
        }
        Surd { rat, irr, radicand }
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn irr(&self) -> &Rational {
        &self.irr
    }

    /// 1 for rationals.
    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    fn join_radicand(&self, other: &Surd) -> u32 {
        match (self.radicand, other.radicand) {
            (1, d) | (d, 1) => d,
            (a, b) if a == b => a,
            (a, b) => panic!("mixing quadratic fields Q(√{a}) and Q(√{b})"),
        }
    }

    pub fn signum(&self) -> i32 {
        let sa = self.rat.signum();
        let sb = self.irr.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare rat² with irr²·D.
        let lhs = &self.rat * &self.rat;
        let rhs = &(&self.irr * &self.irr) * &Rational::from(self.radicand as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn conjugate(&self) -> Surd {
        Surd { rat: self.rat.clone(), irr: -&self.irr, radicand: self.radicand }
    }

    pub fn recip(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        if self.irr.is_zero() {
            return self.rat.recip().map(Surd::rational);
        }
        let d = Rational::from(self.radicand as i64);
        let norm = &(&self.rat * &self.rat) - &(&(&self.irr * &self.irr) * &d);
        let inv = norm.recip()?;
        Some(Surd::new(&self.rat * &inv, -&(&self.irr * &inv), self.radicand))
    }

    pub fn to_f64(&self) -> f64 {
        if self.irr.is_zero() {
            self.rat.to_f64()
        } else {
            self.rat.to_f64() + self.irr.to_f64() * (self.radicand as f64).sqrt()
        }
    }

    pub fn is_integral(&self) -> bool {
        self.rat.is_integer() && self.irr.is_integer()
    }

    fn add(&self, o: &Surd) -> Surd {
        if o.irr.is_zero() && self.irr.is_zero() {
            return Surd::rational(&self.rat + &o.rat);
        }
        let d = self.join_radicand(o);
        Surd::new(&self.rat + &o.rat, &self.irr + &o.irr, d)
    }

    fn sub(&self, o: &Surd) -> Surd {
        if o.irr.is_zero() && self.irr.is_zero() {
            return Surd::rational(&self.rat - &o.rat);
        }
        let d = self.join_radicand(o);
        Surd::new(&self.rat - &o.rat, &self.irr - &o.irr, d)
    }

    fn mul(&self, o: &Surd) -> Surd {
        match (self.irr.is_zero(), o.irr.is_zero()) {
            (true, true) => Surd::rational(&self.rat * &o.rat),
            (true, false) => Surd::new(&self.rat * &o.rat, &self.rat * &o.irr, o.radicand),
            (false, true) => Surd::new(&self.rat * &o.rat, &self.irr * &o.rat, self.radicand),
            (false, false) => {
                let d = self.join_radicand(o);
                let dd = Rational::from(d as i64);
                let rat = &(&self.rat * &o.rat) + &(&(&self.irr * &o.irr) * &dd);
                let irr = &(&self.rat * &o.irr) + &(&self.irr * &o.rat);
                Surd::new(rat, irr, d)
            }
        }
    }

    fn neg(&self) -> Surd {
        Surd { rat: -&self.rat, irr: -&self.irr, radicand: self.radicand }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else {
            write!(f, "{} + {}·√{}", self.rat, self.irr, self.radicand)
        }
    }
}

/// A coordinate value: exact quadratic-field element or tolerance-carrying double.
///
/// `PartialEq`/`Eq`/`Hash` are structural (bitwise for doubles). Geometric
/// code compares through [`Scalar::same`] and [`Scalar::sign`], which honour
/// `ε_geom` in approximate mode. Binary operations on mixed modes promote to
/// approximate; mode-checked entry points report a mismatch instead.
#[derive(Clone)]
pub enum Scalar {
    Exact(Surd),
    Approx(f64),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(Surd::rational(Rational::ZERO))
    }

    pub fn one() -> Scalar {
        Scalar::Exact(Surd::rational(Rational::ONE))
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Exact(Surd::rational(Rational::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Exact(Surd::rational(Rational::new(n, d)))
    }

    pub fn rational(r: Rational) -> Scalar {
        Scalar::Exact(Surd::rational(r))
    }

    pub fn surd(rat: Rational, irr: Rational, radicand: u32) -> Scalar {
        Scalar::Exact(Surd::new(rat, irr, radicand))
    }

    /// Exact `√radicand`.
    pub fn sqrt_of(radicand: u32) -> Scalar {
        Scalar::surd(Rational::ZERO, Rational::ONE, radicand)
    }

    pub fn approx(x: f64) -> Scalar {
        Scalar::Approx(x)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Approx(_) => Mode::Approx,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_surd(&self) -> Option<&Surd> {
        match self {
            Scalar::Exact(s) => Some(s),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(s) => s.to_f64(),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_f64())
    }

    /// Sign, with `|x| ≤ ε_geom` counted as zero in approximate mode.
    pub fn sign(&self) -> i32 {
        match self {
            Scalar::Exact(s) => s.signum(),
            Scalar::Approx(x) => {
                if x.abs() <= tolerance() {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Exact zero test (tolerance-aware in approximate mode).
    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Mode-aware equality: structural when exact, `|x − y| ≤ ε_geom` otherwise.
    pub fn same(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tolerance(),
        }
    }

    /// Numeric comparison (tolerance-aware in approximate mode).
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self - other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// A total order on representations, used for canonical sorting.
    /// Not numeric for irrational values.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                a.rat.cmp(&b.rat).then_with(|| a.irr.cmp(&b.irr)).then(a.radicand.cmp(&b.radicand))
            }
            (Scalar::Approx(a), Scalar::Approx(b)) => a.total_cmp(b),
            (Scalar::Exact(_), Scalar::Approx(_)) => Ordering::Less,
            (Scalar::Approx(_), Scalar::Exact(_)) => Ordering::Greater,
        }
    }

    pub fn recip(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(s) => s.recip().map(Scalar::Exact),
            Scalar::Approx(x) => {
                if *x == 0.0 {
                    None
                } else {
                    Some(Scalar::Approx(1.0 / x))
                }
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn min_value<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other.cmp_value(self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn max_value<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other.cmp_value(self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// The radicand of the field this value needs (1 for rationals and doubles).
    pub fn radicand(&self) -> u32 {
        match self {
            Scalar::Exact(s) => s.radicand,
            Scalar::Approx(_) => 1,
        }
    }

    /// Rational with integral numerator parts (`a + b√D` with integer a, b).
    pub fn is_integral(&self) -> bool {
        match self {
            Scalar::Exact(s) => s.is_integral(),
            Scalar::Approx(x) => (x - x.round()).abs() <= tolerance(),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Exact(s) => {
                0u8.hash(state);
                s.hash(state);
            }
            Scalar::Approx(x) => {
                1u8.hash(state);
                x.to_bits().hash(state);
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(s) => write!(f, "{s}"),
            Scalar::Approx(x) => write!(f, "~{x}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(s) => write!(f, "{s}"),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(s) => Scalar::Exact(s.neg()),
            Scalar::Approx(x) => Scalar::Approx(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:tt, $exact:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact($exact(a, b)),
                    _ => Scalar::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    };
}

scalar_binop!(Add, add, +, |a: &Surd, b: &Surd| a.add(b));
scalar_binop!(Sub, sub, -, |a: &Surd, b: &Surd| a.sub(b));
scalar_binop!(Mul, mul, *, |a: &Surd, b: &Surd| a.mul(b));
scalar_binop!(Div, div, /, |a: &Surd, b: &Surd| a.mul(&b.recip().expect("division by zero")));
