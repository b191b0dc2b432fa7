//! Prototile sets and inflation rules: data model, file format, validation
//! and the built-in square and pinwheel rules.

mod builtin;
pub(crate) mod format;
mod validate;

pub use builtin::{builtin, folded_pinwheel, Builtin, BUILTIN_NAMES};
pub use format::{parse_rule, parse_rule_with, rule_hash, serialize_rule, serialize_rule_compact, ParseOptions};
pub use validate::{validate_rule, PrototileReport, PrototileStatus, RuleValidationReport};

use thiserror::Error;

use crate::geom::{GeomError, Isometry, Mode, Point, Polygon, Scalar};

/// A reference shape, identified by its index in the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prototile {
    pub id: usize,
    pub name: String,
    pub shape: Polygon,
}

/// One piece of a prototile's decomposition.
///
/// `pose` is taken in the child frame: the child's region is
/// `{ pose(λ·z) : z ∈ P_child_type }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub child_type: usize,
    pub pose: Isometry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflationRule {
    pub name: Option<String>,
    pub radicand: u32,
    /// The dilation factor λ, in (0, 1).
    pub lambda: Scalar,
    /// Complex expansion `s` with `|s| = 1/λ` used when iterating; its
    /// argument only rotates the whole patch.
    pub expansion: Point,
    pub prototiles: Vec<Prototile>,
    pub children: Vec<Vec<Child>>,
}

impl InflationRule {
    pub fn mode(&self) -> Mode {
        self.lambda.mode()
    }

    pub fn type_count(&self) -> usize {
        self.prototiles.len()
    }

    /// Region of child `k` of prototile `j`, in the coordinates of `P_j`.
    pub fn child_polygon(&self, j: usize, k: usize) -> Polygon {
        let c = &self.children[j][k];
        self.prototiles[c.child_type].shape.transform_scaled(&c.pose, &self.lambda)
    }

    /// `s·λ`, the unit rotation hidden in the expansion.
    pub fn expansion_unit(&self) -> Point {
        self.expansion.scale(&self.lambda)
    }

    /// Whether any child pose reverses orientation.
    pub fn has_reflections(&self) -> bool {
        self.children.iter().flatten().any(|c| !c.pose.is_direct())
    }

    /// The same rule with every number converted to floating point.
    pub fn to_approx(&self) -> InflationRule {
        InflationRule {
            name: self.name.clone(),
            radicand: self.radicand,
            lambda: self.lambda.to_approx(),
            expansion: self.expansion.to_approx(),
            prototiles: self
                .prototiles
                .iter()
                .map(|p| Prototile { id: p.id, name: p.name.clone(), shape: p.shape.to_approx() })
                .collect(),
            children: self
                .children
                .iter()
                .map(|cs| cs.iter().map(|c| Child { child_type: c.child_type, pose: c.pose.to_approx() }).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: child type {child_type} does not name one of the {count} prototiles")]
    UnknownPrototile { path: String, child_type: i64, count: usize },
    #[error("lambda = {0} is outside (0, 1)")]
    LambdaOutOfRange(String),
    #[error("radicand {0} is not a positive square-free integer")]
    UnsupportedRadicand(i64),
    #[error("{path}: floating-point literal in exact mode")]
    FloatLiteral { path: String },
    #[error("{path}: {source}")]
    Geometry { path: String, source: GeomError },
    #[error("expansion has |s|^2 = {norm_sq}, expected 1/lambda^2")]
    BadExpansion { norm_sq: f64 },
    #[error("unknown builtin rule '{0}'")]
    UnknownBuiltin(String),
}
