use std::f64::consts::TAU;
use std::fmt::Write;

use clap::ValueEnum;
use tessella_core::engine::Patch;
use tessella_core::rules::{rule_hash, InflationRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ColorBy {
    Type,
    AngleHue,
    Handedness,
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub color_by: ColorBy,
    pub stroke_width: f64,
    /// Tiles are numbered when the patch has at most this many.
    pub label_max: usize,
}

const PALETTE: [&str; 8] = ["#e4572e", "#29335c", "#f3a712", "#669bbc", "#a8c686", "#8d6a9f", "#c0c0c0", "#4c956c"];
const DIRECT: &str = "#669bbc";
const REFLECTED: &str = "#e4572e";

/// Shortest decimal form with at most six places.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn fill(spec: &RenderSpec, tile_type: usize, angle: f64, reflects: bool) -> String {
    match spec.color_by {
        ColorBy::Type => PALETTE[tile_type % PALETTE.len()].to_string(),
        ColorBy::AngleHue => format!("hsl({},65%,60%)", num(angle.rem_euclid(TAU) / TAU * 360.0)),
        ColorBy::Handedness => (if reflects { REFLECTED } else { DIRECT }).to_string(),
    }
}

/// SVG with one `<path>` per tile. The y axis points up, as in the patch.
pub fn render_svg(rule: &InflationRule, patch: &Patch, spec: &RenderSpec) -> String {
    let outlines: Vec<Vec<(f64, f64)>> = patch.polygons(rule).iter().map(|p| p.to_f64()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in outlines.iter().flatten() {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if outlines.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = spec.stroke_width;
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(x0 - pad),
        num(-y1 - pad),
        num(w),
        num(h),
        num(w),
        num(h)
    )
    .unwrap();
    writeln!(
        out,
        "<!-- tessella patch: rule_hash={} scale_exponent={} r={} tiles={} -->",
        rule_hash(rule),
        patch.scale_exponent,
        patch.r,
        patch.len()
    )
    .unwrap();
    writeln!(out, r##"<g stroke="#202020" stroke-width="{}" stroke-linejoin="round">"##, num(spec.stroke_width))
        .unwrap();
    for (tile, pts) in patch.tiles.iter().zip(&outlines) {
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(x), num(-y));
        }
        d.push_str(" Z");
        let color = fill(spec, tile.tile_type, tile.pose.rot.angle(), tile.pose.rot.reflects());
        writeln!(out, r#"<path d="{d}" fill="{color}"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if patch.len() <= spec.label_max {
        let size = num(spec.stroke_width * 8.0);
        writeln!(out, r#"<g font-family="sans-serif" font-size="{size}" text-anchor="middle">"#).unwrap();
        for (i, pts) in outlines.iter().enumerate() {
            let n = pts.len() as f64;
            let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
            writeln!(out, r#"<text x="{}" y="{}">{i}</text>"#, num(cx), num(-cy)).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tessella_core::engine::inflate_patch;
    use tessella_core::rules::{builtin, folded_pinwheel, Builtin};

    fn spec(color_by: ColorBy) -> RenderSpec {
        RenderSpec { color_by, stroke_width: 0.02, label_max: 0 }
    }

    #[test]
    fn numbers_are_trimmed() {
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-0.0000001), "0");
        assert_eq!(num(0.25), "0.25");
    }

    #[test]
    fn one_path_per_tile() {
        let rule = builtin(Builtin::Pinwheel);
        let p = inflate_patch(&rule, &Patch::seed(&rule, 0).unwrap(), 2).unwrap();
        let svg = render_svg(&rule, &p, &spec(ColorBy::Type));
        assert_eq!(svg.matches("<path").count(), 25);
        assert!(svg.contains("scale_exponent=2"));
        assert_eq!(svg, render_svg(&rule, &p, &spec(ColorBy::Type)));
    }

    #[test]
    fn handedness_colors() {
        let sq = builtin(Builtin::Square);
        let p = inflate_patch(&sq, &Patch::seed(&sq, 0).unwrap(), 2).unwrap();
        let svg = render_svg(&sq, &p, &spec(ColorBy::Handedness));
        assert_eq!(svg.matches(DIRECT).count(), 16);
        assert!(!svg.contains(REFLECTED));
        let folded = folded_pinwheel();
        let p = inflate_patch(&folded, &Patch::seed(&folded, 0).unwrap(), 2).unwrap();
        assert!(render_svg(&folded, &p, &spec(ColorBy::Handedness)).contains(REFLECTED));
    }

    #[test]
    fn labels_only_for_small_patches() {
        let sq = builtin(Builtin::Square);
        let p = inflate_patch(&sq, &Patch::seed(&sq, 0).unwrap(), 1).unwrap();
        let labelled = RenderSpec { label_max: 4, ..spec(ColorBy::AngleHue) };
        assert_eq!(render_svg(&sq, &p, &labelled).matches("<text").count(), 4);
        assert_eq!(render_svg(&sq, &p, &spec(ColorBy::AngleHue)).matches("<text").count(), 0);
    }
}
