//! `tessella`: validate, inflate, analyze and render inflation tilings.

mod render;

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tessella_core::analysis::{analysis_report, check_hypotheses, weyl_sum, AnalysisError};
use tessella_core::engine::{
    inflate_patch_with, patch_rule_hash, read_patch, write_patch, EngineError, InflateOptions, Patch, DEFAULT_CAP,
};
use tessella_core::geom::{set_tolerance, Mode, Point, Rational, Scalar};
use tessella_core::rules::{
    builtin, parse_rule_with, rule_hash, validate_rule, Builtin, InflationRule, ParseOptions, RuleError,
};
use tessella_core::space::{adjacency_census, census_json, patch_distance, CenteredPatch, SpaceError};

use render::{render_svg, ColorBy, RenderSpec};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "tessella", version, about = "Exact inflation tilings: validate, inflate, analyze, render")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that every prototile is exactly tiled by its children.
    Validate(RuleArgs),
    /// Apply the inflation r times to a single prototile.
    Inflate {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        grow: GrowArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Substitution matrix, twisted matrices, hypotheses, Weyl sums and frequencies.
    Analyze {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        grow: GrowArgs,
        #[command(flatten)]
        freq: FrequencyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check the hypotheses of the unique-ergodicity theorem at r.
    Hypotheses {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        grow: GrowArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weyl sums of tile orientations over F^r of a prototile.
    Weyl {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        grow: GrowArgs,
        #[command(flatten)]
        freq: FrequencyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Edge-sharing tile pairs up to congruence, from a patch file or F^r.
    Census {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        grow: GrowArgs,
        /// Patch file to examine instead of F^r of the seed type.
        #[arg(long)]
        patch: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Truncated tiling distance between two patch files.
    Metric {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        patch: PathBuf,
        #[arg(long)]
        against: PathBuf,
        /// Reference point `x,y` (integers, fractions or decimals); defaults
        /// to the centre of the first patch's bounding box.
        #[arg(long)]
        origin: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw a patch file as SVG.
    Render {
        /// Patch file written by `inflate`.
        patch: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct RuleArgs {
    /// Built-in rule: square or pinwheel.
    #[arg(long, conflicts_with = "rule")]
    builtin: Option<String>,
    /// Rule file (JSON).
    #[arg(long)]
    rule: Option<PathBuf>,
    /// Arithmetic: exact, float, or chosen from the rule file.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Comparison tolerance in float mode.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct GrowArgs {
    #[arg(short = 'r', default_value_t = 2)]
    r: u32,
    #[arg(long = "seed-type", default_value_t = 0)]
    seed_type: usize,
    /// Largest patch the engine may build.
    #[arg(long, env = "TESSELLA_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args, Debug, Clone)]
struct FrequencyArgs {
    /// Angular frequencies, comma separated.
    #[arg(short = 'm', value_delimiter = ',', allow_hyphen_values = true, default_value = "1,2,3,4")]
    m: Vec<i64>,
}

#[derive(Args, Debug, Clone)]
struct RenderArgs {
    #[arg(long = "color-by", value_enum, default_value_t = ColorBy::Type)]
    color_by: ColorBy,
    #[arg(long = "stroke-width", default_value_t = 0.02)]
    stroke_width: f64,
    /// Number the tiles when there are at most this many.
    #[arg(long = "label-max", default_value_t = 0)]
    label_max: usize,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

/// A message and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<RuleError> for Failure {
    fn from(e: RuleError) -> Failure {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        let code = match e {
            EngineError::PatchTooLarge { .. } => EXIT_CAP,
            EngineError::Format(_) => EXIT_PARSE,
            EngineError::UnknownTileType(_) | EngineError::RuleMismatch { .. } => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Failure {
        match e {
            AnalysisError::Engine(inner) => inner.into(),
            AnalysisError::UseCountInstead | AnalysisError::InvalidIterations | AnalysisError::NotARotation => {
                Failure::new(EXIT_INVALID, e.to_string())
            }
            other => Failure::new(EXIT_FAILURE, other.to_string()),
        }
    }
}

impl From<SpaceError> for Failure {
    fn from(e: SpaceError) -> Failure {
        match e {
            SpaceError::Engine(inner) => inner.into(),
            other => Failure::new(EXIT_INVALID, other.to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display()))),
        None => write_stdout(text),
    }
}

/// Writes to standard output; a reader that hung up early is not an error.
fn write_stdout(text: &str) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::new(EXIT_IO, format!("standard output: {e}"))),
        _ => Ok(()),
    }
}

fn emit_json(out: &OutArgs, v: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    emit(out, &text)
}

impl RuleArgs {
    fn given(&self) -> bool {
        self.builtin.is_some() || self.rule.is_some()
    }

    fn load(&self) -> Result<InflationRule, Failure> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::new(EXIT_INVALID, format!("tolerance must be positive, got {t}")));
            }
            set_tolerance(t);
        }
        let mode = self.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Approx,
        });
        let rule = match (&self.builtin, &self.rule) {
            (Some(name), _) => builtin(name.parse::<Builtin>()?),
            (None, Some(path)) => return Ok(parse_rule_with(&read_text(path)?, ParseOptions { mode })?),
            (None, None) => return Err(Failure::new(EXIT_INVALID, "one of --builtin or --rule is required")),
        };
        Ok(if mode == Some(Mode::Approx) { rule.to_approx() } else { rule })
    }

    /// Loads the rule and refuses to continue if it does not validate.
    fn load_valid(&self) -> Result<InflationRule, Failure> {
        let rule = self.load()?;
        let report = validate_rule(&rule);
        if let Some(f) = report.first_failure() {
            return Err(Failure::new(
                EXIT_INVALID,
                format!("rule does not validate: prototile {}: {:?}", f.id, f.status),
            ));
        }
        Ok(rule)
    }
}

impl GrowArgs {
    fn inflate(&self, rule: &InflationRule) -> Result<Patch, Failure> {
        let seed = Patch::seed(rule, self.seed_type)?;
        Ok(inflate_patch_with(rule, &seed, self.r, InflateOptions { cap: self.cap, threads: None })?)
    }
}

impl RenderArgs {
    fn spec(&self) -> RenderSpec {
        RenderSpec { color_by: self.color_by, stroke_width: self.stroke_width, label_max: self.label_max }
    }
}

fn read_patch_file(rule: &InflationRule, path: &Path) -> Result<Patch, Failure> {
    let v = parse_json(&read_text(path)?, path)?;
    Ok(read_patch(rule, &v)?)
}

fn parse_json(text: &str, path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| {
        Failure::new(EXIT_PARSE, format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

/// Rules a patch file may have been written for when none is named.
fn known_rules() -> Vec<InflationRule> {
    [Builtin::Square, Builtin::Pinwheel].into_iter().flat_map(|b| [builtin(b), builtin(b).to_approx()]).collect()
}

fn rule_for_patch(args: &RuleArgs, v: &Value) -> Result<InflationRule, Failure> {
    if args.given() {
        return args.load();
    }
    let hash = patch_rule_hash(v)
        .ok_or_else(|| Failure::new(EXIT_INVALID, "patch names no rule; pass --builtin or --rule"))?;
    known_rules()
        .into_iter()
        .find(|r| rule_hash(r) == hash)
        .ok_or_else(|| Failure::new(EXIT_INVALID, format!("no built-in rule has hash {hash}; pass --rule")))
}

/// `a`, `a/b` or a decimal such as `-1.25`, as an exact rational.
fn parse_coordinate(s: &str) -> Option<Rational> {
    if let Ok(q) = s.parse::<Rational>() {
        return Some(q);
    }
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.')?;
    if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let whole = if whole.is_empty() { "0" } else { whole };
    let digits: Rational = format!("{whole}{frac}").parse().ok()?;
    let scale = Rational::new(10i64.pow(frac.len() as u32), 1);
    Some(&(&digits / &scale) * &Rational::new(sign, 1))
}

fn parse_origin(s: &str, mode: Mode) -> Result<Point, Failure> {
    let bad = || Failure::new(EXIT_PARSE, format!("origin `{s}`: expected x,y"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    match mode {
        Mode::Exact => Ok(Point::new(
            Scalar::rational(parse_coordinate(x).ok_or_else(bad)?),
            Scalar::rational(parse_coordinate(y).ok_or_else(bad)?),
        )),
        Mode::Approx => {
            let f = |v: &str| v.trim().parse::<f64>().ok().or_else(|| parse_coordinate(v).map(|q| q.to_f64()));
            Ok(Point::approx(f(x).ok_or_else(bad)?, f(y).ok_or_else(bad)?))
        }
    }
}

fn bbox_centre(rule: &InflationRule, patch: &Patch) -> Point {
    let polys = patch.polygons(rule);
    let mut boxes = polys.iter().map(|p| p.bbox());
    let Some(first) = boxes.next() else {
        return Point::origin();
    };
    let (mut lo, mut hi) = (first.min, first.max);
    for b in boxes {
        lo = Point::new(lo.x.min_value(&b.min.x).clone(), lo.y.min_value(&b.min.y).clone());
        hi = Point::new(hi.x.max_value(&b.max.x).clone(), hi.y.max_value(&b.max.y).clone());
    }
    (&lo + &hi).scale(&Scalar::ratio(1, 2))
}

fn validate(args: &RuleArgs) -> Result<(), Failure> {
    let rule = args.load()?;
    let report = validate_rule(&rule);
    let mut v = report.to_json();
    v["schema"] = json!("tessella.validation/1");
    v["rule_hash"] = json!(rule_hash(&rule));
    let mut text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    if report.passed() {
        text.push('\n');
        write_stdout(&text)
    } else {
        eprintln!("{text}");
        Err(Failure::new(EXIT_INVALID, "validation failed"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate(args) => validate(&args),
        Command::Inflate { rule, grow, format, render, out } => {
            let rule = rule.load_valid()?;
            let patch = grow.inflate(&rule)?;
            eprintln!("{} tiles", patch.len());
            match format {
                Format::Json => emit_json(&out, &write_patch(&rule, &patch)),
                Format::Svg => emit(&out, &render_svg(&rule, &patch, &render.spec())),
            }
        }
        Command::Analyze { rule, grow, freq, out } => {
            let rule = rule.load_valid()?;
            let report = analysis_report(&rule, grow.r, &freq.m, grow.seed_type, grow.cap)?;
            let yes = |b: &Value| if b.as_bool() == Some(true) { "holds" } else { "fails" };
            eprintln!(
                "hypotheses at r = {}: a {}, b {}; {}",
                grow.r,
                yes(&report["hypotheses"]["a_holds"]),
                yes(&report["hypotheses"]["b_holds"]),
                if report["theorem_hypotheses_certified"] == json!(true) { "certified" } else { "not certified" }
            );
            emit_json(&out, &report)
        }
        Command::Hypotheses { rule, grow, out } => {
            let rule = rule.load_valid()?;
            let rep = check_hypotheses(&rule, grow.r, grow.cap)?;
            let mut v = json!(rep);
            v["schema"] = json!("tessella.hypotheses/1");
            v["rule_hash"] = json!(rule_hash(&rule));
            v["certified"] = json!(rep.a_holds && rep.b_holds);
            emit_json(&out, &v)
        }
        Command::Weyl { rule, grow, freq, out } => {
            let rule = rule.load_valid()?;
            let sums = freq
                .m
                .iter()
                .map(|&m| {
                    weyl_sum(&rule, grow.seed_type, grow.r, m, grow.cap)
                        .map(|w| json!({ "modulus": w.modulus(), "sum": w }))
                })
                .collect::<Result<Vec<_>, _>>()?;
            emit_json(&out, &json!({ "schema": "tessella.weyl/1", "rule_hash": rule_hash(&rule), "sums": sums }))
        }
        Command::Census { rule, grow, patch, out } => {
            let rule = rule.load_valid()?;
            let patch = match &patch {
                Some(path) => read_patch_file(&rule, path)?,
                None => grow.inflate(&rule)?,
            };
            let census = adjacency_census(&rule, &patch);
            emit_json(
                &out,
                &json!({
                    "schema": "tessella.census/1",
                    "rule_hash": rule_hash(&rule),
                    "tiles": patch.len(),
                    "configurations": census_json(&rule, &census),
                }),
            )
        }
        Command::Metric { rule, patch, against, origin, out } => {
            let first = parse_json(&read_text(&patch)?, &patch)?;
            let rule = rule_for_patch(&rule, &first)?;
            let p = read_patch(&rule, &first)?;
            let q = read_patch_file(&rule, &against)?;
            let origin = match &origin {
                Some(s) => parse_origin(s, rule.mode())?,
                None => bbox_centre(&rule, &p),
            };
            let t = CenteredPatch::new(&rule, p, origin.clone());
            let u = CenteredPatch::new(&rule, q, origin.clone());
            let report = patch_distance(&t, &u)?;
            let (ox, oy) = origin.to_f64();
            emit_json(
                &out,
                &json!({
                    "schema": "tessella.metric/1",
                    "rule_hash": rule_hash(&rule),
                    "origin": [ox, oy],
                    "coverage": [t.radius, u.radius],
                    "distance": report,
                }),
            )
        }
        Command::Render { patch, rule, format, render, out } => {
            if format != Format::Svg {
                return Err(Failure::new(EXIT_INVALID, "render only writes SVG"));
            }
            let v = parse_json(&read_text(&patch)?, &patch)?;
            let rule = rule_for_patch(&rule, &v)?;
            let p = read_patch(&rule, &v)?;
            emit(&out, &render_svg(&rule, &p, &render.spec()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tessella: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
