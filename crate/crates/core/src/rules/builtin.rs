use std::fmt;
use std::str::FromStr;

use super::{Child, InflationRule, Prototile, RuleError};
use crate::geom::{Isometry, Point, Polygon, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Square,
    Pinwheel,
}

pub const BUILTIN_NAMES: [&str; 2] = ["square", "pinwheel"];

impl FromStr for Builtin {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Builtin, RuleError> {
        match s {
            "square" => Ok(Builtin::Square),
            "pinwheel" => Ok(Builtin::Pinwheel),
            other => Err(RuleError::UnknownBuiltin(other.to_string())),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Builtin::Square => "square",
            Builtin::Pinwheel => "pinwheel",
        })
    }
}

pub fn builtin(which: Builtin) -> InflationRule {
    match which {
        Builtin::Square => square(),
        Builtin::Pinwheel => pinwheel(false),
    }
}

/// Pinwheel variant with a single prototile: the mirror-image children are
/// placed by reflections instead of being a second tile type.
pub fn folded_pinwheel() -> InflationRule {
    pinwheel(true)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn pt(x: Scalar, y: Scalar) -> Point {
    Point::new(x, y)
}

fn square() -> InflationRule {
    let shape = Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)])
        .expect("unit square");
    let children = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(x, y)| Child { child_type: 0, pose: Isometry::translation(pt(q(x, 2), q(y, 2))) })
        .collect();
    InflationRule {
        name: Some("square".into()),
        radicand: 1,
        lambda: q(1, 2),
        expansion: Point::int(2, 0),
        prototiles: vec![Prototile { id: 0, name: "square".into(), shape }],
        children: vec![children],
    }
}

/// A pinwheel triangle with its vertices labelled: end of the long leg, the
/// right angle, end of the short leg.
struct Labelled {
    shape: Polygon,
    corners: [Point; 3],
}

fn pinwheel(folded: bool) -> InflationRule {
    let (a, b, c) = (Point::int(0, 0), Point::int(2, 0), Point::int(2, 1));
    let right = Labelled {
        shape: Polygon::new(vec![a.clone(), b.clone(), c.clone()]).expect("triangle"),
        corners: [a.clone(), b.clone(), c.clone()],
    };
    let left = Labelled {
        shape: Polygon::new(vec![a.conj(), c.conj(), b.conj()]).expect("triangle"),
        corners: [a.conj(), b.conj(), c.conj()],
    };
    let types = if folded { vec![right] } else { vec![right, left] };
    let lambda = Scalar::surd(Rational::ZERO, Rational::new(1, 5), 5);

    // The decomposition of the triangle inflated by s = 2 + i, whose
    // corners are 0, B = 4 + 2i (right angle) and C = 3 + 4i. The altitude
    // from B meets the hypotenuse at H; triangle HBC is one child, and the
    // double-size triangle 0HB splits into four.
    let h = pt(q(12, 5), q(16, 5));
    let frame = |x: i64, y: i64| {
        // H + x·(−3 − 4i)/5 + y·(4 − 3i)/5: a direct frame at H with the
        // x axis towards 0 and the y axis towards B.
        pt(&h.x + &(&q(-3 * x, 5) + &q(4 * y, 5)), &h.y + &(&q(-4 * x, 5) + &q(-3 * y, 5)))
    };
    let expanded: Vec<[Point; 3]> = vec![
        [Point::int(4, 2), h.clone(), Point::int(3, 4)],
        [frame(0, 0), frame(2, 0), frame(2, 1)],
        [frame(2, 1), frame(0, 1), frame(0, 0)],
        [frame(2, 1), frame(0, 1), frame(0, 2)],
        [frame(4, 0), frame(2, 0), frame(2, 1)],
    ];
    // Back to the prototile's own scale: divide by s, i.e. multiply by (2 − i)/5.
    let shrink = pt(q(2, 5), q(-1, 5));
    let targets: Vec<[Point; 3]> = expanded.iter().map(|t| t.clone().map(|p| p.cmul(&shrink))).collect();

    let mut children = Vec::new();
    for parent in 0..2 {
        if folded && parent == 1 {
            break;
        }
        let list = targets
            .iter()
            .map(|t| {
                let t = if parent == 1 { t.clone().map(|p| p.conj()) } else { t.clone() };
                place(&types, &lambda, &t)
            })
            .collect();
        children.push(list);
    }
    let names = ["right", "left"];
    InflationRule {
        name: Some(if folded { "pinwheel-folded" } else { "pinwheel" }.into()),
        radicand: 5,
        lambda,
        expansion: Point::int(2, 1),
        prototiles: types
            .into_iter()
            .enumerate()
            .map(|(id, t)| Prototile { id, name: names[id].into(), shape: t.shape })
            .collect(),
        children,
    }
}

/// Finds the prototile and pose placing a λ-scaled copy onto `target`,
/// preferring a direct placement.
fn place(types: &[Labelled], lambda: &Scalar, target: &[Point; 3]) -> Child {
    for reflect in [false, true] {
        for (n, t) in types.iter().enumerate() {
            let src: Vec<Point> = t.corners.iter().map(|p| p.scale(lambda)).collect();
            if let Some(pose) = Isometry::from_correspondence(&src, target, reflect) {
                return Child { child_type: n, pose };
            }
        }
    }
    unreachable!("every pinwheel child is congruent to a prototile")
}
