//! JSON rule files.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::{Child, InflationRule, Prototile, RuleError};
use crate::geom::{Isometry, Mode, Point, Polygon, Rational, Scalar, UnitRotation};

/// Largest `k` tried when writing a rotation as `g·λ^k`.
const MAX_ROTATION_EXPONENT: u32 = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// `None` parses exactly unless the file has floating-point literals, in
    /// which case it falls back to approximate mode with a warning.
    /// `Some(Exact)` rejects such literals.
    pub mode: Option<Mode>,
}

pub fn parse_rule(text: &str) -> Result<InflationRule, RuleError> {
    parse_rule_with(text, ParseOptions::default())
}

pub fn parse_rule_with(text: &str, opts: ParseOptions) -> Result<InflationRule, RuleError> {
    let root: Value = serde_json::from_str(text).map_err(|e| RuleError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let float_at = find_float(&root, "$");
    let mode = match (opts.mode, float_at) {
        (Some(Mode::Exact), Some(path)) => return Err(RuleError::FloatLiteral { path }),
        (Some(m), _) => m,
        (None, Some(path)) => {
            log::warn!("{path}: floating-point literal; falling back to approximate arithmetic");
            Mode::Approx
        }
        (None, None) => Mode::Exact,
    };
    Parser { mode, radicand: 1 }.rule(&root)
}

pub(crate) fn find_float(v: &Value, path: &str) -> Option<String> {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => Some(path.to_string()),
        Value::Array(items) => items.iter().enumerate().find_map(|(i, x)| find_float(x, &format!("{path}[{i}]"))),
        Value::Object(m) => m.iter().find_map(|(k, x)| find_float(x, &format!("{path}.{k}"))),
        _ => None,
    }
}

pub(crate) fn schema(path: &str, message: impl Into<String>) -> RuleError {
    RuleError::Schema { path: path.to_string(), message: message.into() }
}

pub(crate) struct Parser {
    pub(crate) mode: Mode,
    pub(crate) radicand: u32,
}

impl Parser {
    fn rule(&mut self, root: &Value) -> Result<InflationRule, RuleError> {
        let obj = root.as_object().ok_or_else(|| schema("$", "expected an object"))?;
        let radicand = match obj.get("radicand") {
            None => 1,
            Some(v) => v.as_i64().ok_or_else(|| schema("$.radicand", "expected an integer"))?,
        };
        if radicand < 1 || radicand > u32::MAX as i64 || !is_square_free(radicand as u64) {
            return Err(RuleError::UnsupportedRadicand(radicand));
        }
        self.radicand = radicand as u32;

        let lambda = self.scalar(field(obj, "lambda", "$")?, "$.lambda")?;
        if !(lambda.is_positive() && (&lambda - &Scalar::one()).is_negative()) {
            return Err(RuleError::LambdaOutOfRange(format!("{lambda}")));
        }

        let expansion = match obj.get("expansion") {
            Some(v) => self.point(v, "$.expansion")?,
            None => Point::new(lambda.recip().expect("lambda is positive"), self.zero()),
        };
        let norm = &expansion.norm_sq() * &(&lambda * &lambda);
        if !norm.same(&Scalar::one()) {
            return Err(RuleError::BadExpansion { norm_sq: expansion.norm_sq().to_f64() });
        }

        let name = match obj.get("name") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(schema("$.name", "expected a string")),
        };

        let protos =
            field(obj, "prototiles", "$")?.as_array().ok_or_else(|| schema("$.prototiles", "expected an array"))?;
        if protos.is_empty() {
            return Err(schema("$.prototiles", "at least one prototile is required"));
        }
        let mut prototiles = Vec::with_capacity(protos.len());
        for (j, p) in protos.iter().enumerate() {
            let path = format!("$.prototiles[{j}]");
            let po = p.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
            let name = match po.get("name") {
                None => format!("P{j}"),
                Some(Value::String(s)) => s.clone(),
                Some(_) => return Err(schema(&format!("{path}.name"), "expected a string")),
            };
            let vpath = format!("{path}.vertices");
            let verts = field(po, "vertices", &path)?
                .as_array()
                .ok_or_else(|| schema(&vpath, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, v)| self.point(v, &format!("{vpath}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let shape = Polygon::new(verts).map_err(|source| RuleError::Geometry { path: vpath, source })?;
            prototiles.push(Prototile { id: j, name, shape });
        }

        let lists = field(obj, "children", "$")?.as_array().ok_or_else(|| schema("$.children", "expected an array"))?;
        if lists.len() != prototiles.len() {
            return Err(schema(
                "$.children",
                format!("expected {} child lists, found {}", prototiles.len(), lists.len()),
            ));
        }
        let mut children = Vec::with_capacity(lists.len());
        for (j, list) in lists.iter().enumerate() {
            let lpath = format!("$.children[{j}]");
            let items = list.as_array().ok_or_else(|| schema(&lpath, "expected an array"))?;
            if items.is_empty() {
                return Err(schema(&lpath, "a prototile needs at least one child"));
            }
            let mut out = Vec::with_capacity(items.len());
            for (k, c) in items.iter().enumerate() {
                out.push(self.child(c, &format!("{lpath}[{k}]"), &lambda, prototiles.len())?);
            }
            children.push(out);
        }

        Ok(InflationRule { name, radicand: self.radicand, lambda, expansion, prototiles, children })
    }

    fn child(&self, v: &Value, path: &str, lambda: &Scalar, count: usize) -> Result<Child, RuleError> {
        let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
        let tpath = format!("{path}.type");
        let t = field(obj, "type", path)?.as_i64().ok_or_else(|| schema(&tpath, "expected an integer"))?;
        if t < 0 || t as usize >= count {
            return Err(RuleError::UnknownPrototile { path: tpath, child_type: t, count });
        }
        let ppath = format!("{path}.pose");
        let pose = field(obj, "pose", path)?.as_object().ok_or_else(|| schema(&ppath, "expected an object"))?;
        let reflect = match pose.get("reflect") {
            None => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(schema(&format!("{ppath}.reflect"), "expected a boolean")),
        };
        let rpath = format!("{ppath}.rot");
        let rot = match pose.get("rot") {
            None => UnitRotation::new(Point::new(self.one(), self.zero()), reflect).expect("unit"),
            Some(r) => {
                let ro = r.as_object().ok_or_else(|| schema(&rpath, "expected {g_re, g_im, k}"))?;
                let g = Point::new(
                    self.scalar(field(ro, "g_re", &rpath)?, &format!("{rpath}.g_re"))?,
                    self.scalar(field(ro, "g_im", &rpath)?, &format!("{rpath}.g_im"))?,
                );
                let k = match ro.get("k") {
                    None => 0,
                    Some(v) => v
                        .as_u64()
                        .filter(|&k| k <= u32::MAX as u64)
                        .ok_or_else(|| schema(&format!("{rpath}.k"), "expected a non-negative integer"))?
                        as u32,
                };
                UnitRotation::from_scaled_integral(g, k, lambda, reflect)
                    .map_err(|source| RuleError::Geometry { path: rpath.clone(), source })?
            }
        };
        let trans = match pose.get("trans") {
            None => Point::new(self.zero(), self.zero()),
            Some(t) => self.point(t, &format!("{ppath}.trans"))?,
        };
        Ok(Child { child_type: t as usize, pose: Isometry::new(rot, trans) })
    }

    fn zero(&self) -> Scalar {
        self.cast(Scalar::zero())
    }

    fn one(&self) -> Scalar {
        self.cast(Scalar::one())
    }

    fn cast(&self, s: Scalar) -> Scalar {
        match self.mode {
            Mode::Exact => s,
            Mode::Approx => s.to_approx(),
        }
    }

    pub(crate) fn point(&self, v: &Value, path: &str) -> Result<Point, RuleError> {
        match v {
            Value::Object(o) => Ok(Point::new(
                self.scalar(field(o, "x", path)?, &format!("{path}.x"))?,
                self.scalar(field(o, "y", path)?, &format!("{path}.y"))?,
            )),
            Value::Array(a) if a.len() == 2 => {
                Ok(Point::new(self.scalar(&a[0], &format!("{path}[0]"))?, self.scalar(&a[1], &format!("{path}[1]"))?))
            }
            _ => Err(schema(path, "expected a point {x, y}")),
        }
    }

    pub(crate) fn scalar(&self, v: &Value, path: &str) -> Result<Scalar, RuleError> {
        let s = match v {
            Value::Number(n) => match n.as_i64() {
                Some(i) => Scalar::int(i),
                None => match n.as_f64() {
                    Some(x) if self.mode == Mode::Approx => Scalar::approx(x),
                    _ => return Err(RuleError::FloatLiteral { path: path.to_string() }),
                },
            },
            Value::String(s) => Scalar::rational(rational(s, path)?),
            Value::Object(o) => {
                let part = |key: &str| -> Result<Rational, RuleError> {
                    match o.get(key) {
                        None => Ok(Rational::ZERO),
                        Some(Value::String(s)) => rational(s, &format!("{path}.{key}")),
                        Some(Value::Number(n)) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap())),
                        Some(Value::Number(_)) if self.mode == Mode::Approx => {
                            Err(schema(&format!("{path}.{key}"), "use a plain number for approximate values"))
                        }
                        Some(_) => Err(schema(&format!("{path}.{key}"), "expected \"a/b\"")),
                    }
                };
                if let Some(k) = o.keys().find(|k| *k != "rat" && *k != "irr") {
                    return Err(schema(path, format!("unexpected key '{k}'")));
                }
                let (rat, irr) = (part("rat")?, part("irr")?);
                if !irr.is_zero() && self.radicand == 1 {
                    return Err(schema(path, "irrational part requires a radicand other than 1"));
                }
                Scalar::surd(rat, irr, self.radicand)
            }
            _ => return Err(schema(path, "expected a number, \"a/b\" or {rat, irr}")),
        };
        Ok(self.cast(s))
    }
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, RuleError> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing key '{key}'")))
}

fn rational(s: &str, path: &str) -> Result<Rational, RuleError> {
    s.trim().parse().map_err(|e| schema(path, format!("{e}")))
}

fn is_square_free(n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Approx(x) => json!(x),
        Scalar::Exact(q) if q.is_rational() => Value::String(q.rat().to_string()),
        Scalar::Exact(q) => json!({ "rat": q.rat().to_string(), "irr": q.irr().to_string() }),
    }
}

pub(crate) fn point_json(p: &Point) -> Value {
    json!({ "x": scalar_json(&p.x), "y": scalar_json(&p.y) })
}

pub(crate) fn rotation_json(rot: &UnitRotation, lambda: &Scalar) -> Value {
    let (g, k) = rot.to_scaled_integral(lambda, MAX_ROTATION_EXPONENT);
    json!({ "g_re": scalar_json(&g.x), "g_im": scalar_json(&g.y), "k": k })
}

fn rule_value(rule: &InflationRule) -> Value {
    let mut obj = Map::new();
    if let Some(name) = &rule.name {
        obj.insert("name".into(), json!(name));
    }
    obj.insert("radicand".into(), json!(rule.radicand));
    obj.insert("lambda".into(), scalar_json(&rule.lambda));
    obj.insert("expansion".into(), point_json(&rule.expansion));
    obj.insert(
        "prototiles".into(),
        Value::Array(
            rule.prototiles
                .iter()
                .map(|p| json!({ "name": p.name, "vertices": p.shape.vertices().iter().map(point_json).collect::<Vec<_>>() }))
                .collect(),
        ),
    );
    obj.insert(
        "children".into(),
        Value::Array(
            rule.children
                .iter()
                .map(|cs| {
                    Value::Array(
                        cs.iter()
                            .map(|c| {
                                json!({
                                    "type": c.child_type,
                                    "pose": {
                                        "rot": rotation_json(&c.pose.rot, &rule.lambda),
                                        "reflect": c.pose.rot.reflects(),
                                        "trans": point_json(&c.pose.trans),
                                    }
                                })
                            })
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    Value::Object(obj)
}

/// Pretty-printed rule file.
pub fn serialize_rule(rule: &InflationRule) -> String {
    serde_json::to_string_pretty(&rule_value(rule)).expect("rule serializes")
}

/// Single-line canonical form (sorted keys); the input to [`rule_hash`].
pub fn serialize_rule_compact(rule: &InflationRule) -> String {
    serde_json::to_string(&rule_value(rule)).expect("rule serializes")
}

/// Hex SHA-256 of the canonical serialization.
pub fn rule_hash(rule: &InflationRule) -> String {
    hex::encode(Sha256::digest(serialize_rule_compact(rule).as_bytes()))
}
