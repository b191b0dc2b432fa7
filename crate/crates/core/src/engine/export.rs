//! Patch files.

use serde_json::{json, Value};

use super::{EngineError, Patch, Tile};
use crate::geom::{Isometry, Point, UnitRotation};
use crate::rules::format::{field, find_float, point_json, rotation_json, schema, Parser};
use crate::rules::{rule_hash, InflationRule, RuleError};

pub const PATCH_SCHEMA: &str = "tessella.patch/1";

pub fn write_patch(rule: &InflationRule, patch: &Patch) -> Value {
    let tiles: Vec<Value> = patch
        .tiles
        .iter()
        .map(|t| {
            json!({
                "type": t.tile_type,
                "rot": rotation_json(&t.pose.rot, &rule.lambda),
                "reflect": t.pose.rot.reflects(),
                "trans": point_json(&t.pose.trans),
            })
        })
        .collect();
    json!({
        "schema": PATCH_SCHEMA,
        "rule_hash": rule_hash(rule),
        "seed_type": patch.seed_type,
        "r": patch.r,
        "scale_exponent": patch.scale_exponent,
        "tiles": tiles,
    })
}

/// The `rule_hash` recorded in a patch file, if present.
pub fn patch_rule_hash(v: &Value) -> Option<&str> {
    v.get("rule_hash").and_then(Value::as_str)
}

pub fn read_patch(rule: &InflationRule, v: &Value) -> Result<Patch, EngineError> {
    let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    if let Some(found) = obj.get("rule_hash").and_then(Value::as_str) {
        let expected = rule_hash(rule);
        if found != expected {
            return Err(EngineError::RuleMismatch { expected, found: found.to_string() });
        }
    }
    if find_float(v, "$").is_some() && rule.mode() == crate::geom::Mode::Exact {
        return Err(RuleError::FloatLiteral { path: find_float(v, "$").unwrap_or_default() }.into());
    }
    let parser = Parser { mode: rule.mode(), radicand: rule.radicand };
    let uint = |key: &str| -> Result<Option<u64>, RuleError> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => {
                x.as_u64().map(Some).ok_or_else(|| schema(&format!("$.{key}"), "expected a non-negative integer"))
            }
        }
    };
    let seed_type = uint("seed_type")?.map(|x| x as usize);
    let r = uint("r")?.unwrap_or(0) as u32;
    let scale_exponent = uint("scale_exponent")?.unwrap_or(0) as u32;
    let items = field(obj, "tiles", "$")?.as_array().ok_or_else(|| schema("$.tiles", "expected an array"))?;
    let mut tiles = Vec::with_capacity(items.len());
    for (i, t) in items.iter().enumerate() {
        let path = format!("$.tiles[{i}]");
        let to = t.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
        let tile_type = field(to, "type", &path)?
            .as_u64()
            .ok_or_else(|| schema(&format!("{path}.type"), "expected a tile type"))? as usize;
        if tile_type >= rule.type_count() {
            return Err(EngineError::UnknownTileType(tile_type));
        }
        let reflect = to.get("reflect").and_then(Value::as_bool).unwrap_or(false);
        let rpath = format!("{path}.rot");
        let ro = field(to, "rot", &path)?.as_object().ok_or_else(|| schema(&rpath, "expected {g_re, g_im, k}"))?;
        let g = Point::new(
            parser.scalar(field(ro, "g_re", &rpath)?, &format!("{rpath}.g_re"))?,
            parser.scalar(field(ro, "g_im", &rpath)?, &format!("{rpath}.g_im"))?,
        );
        let k = ro.get("k").and_then(Value::as_u64).unwrap_or(0) as u32;
        let rot = UnitRotation::from_scaled_integral(g, k, &rule.lambda, reflect)
            .map_err(|source| RuleError::Geometry { path: rpath, source })?;
        let trans = parser.point(field(to, "trans", &path)?, &format!("{path}.trans"))?;
        tiles.push(Tile::new(tile_type, Isometry::new(rot, trans), scale_exponent));
    }
    tiles.sort_by(Tile::canonical_cmp);
    Ok(Patch { tiles, scale_exponent, seed_type, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::inflate_patch;
    use crate::rules::{builtin, Builtin};

    #[test]
    fn round_trip() {
        for which in [Builtin::Square, Builtin::Pinwheel] {
            let rule = builtin(which);
            let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 3).unwrap();
            let v = write_patch(&rule, &p);
            let text = serde_json::to_string(&v).unwrap();
            let back = read_patch(&rule, &serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn hash_mismatch_is_reported() {
        let sq = builtin(Builtin::Square);
        let pw = builtin(Builtin::Pinwheel);
        let v = write_patch(&sq, &Patch::seed(&sq, 0).unwrap());
        assert!(matches!(read_patch(&pw, &v), Err(EngineError::RuleMismatch { .. })));
    }
}
