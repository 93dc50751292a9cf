//! Flat `key = value` scenario files.
//!
//! ```text
//! # Munk channel, 100 Hz
//! method = sssp
//! frequency = 100
//! depth = 4000
//! n = 2048
//! range_step = 100
//! range = 25000
//! pade_order = 4
//! starter = modal
//! source_depth = 1100
//! outputs = tl_grid, slice:1300, image
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::env::EddyModel;
use crate::propagators::{RangeSampling, Sponge};

/// Marching scheme or reference used to produce the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Sssp,
    FdSsp,
    Modes,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Sssp => "sssp",
            Method::FdSsp => "fdssp",
            Method::Modes => "modes",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sssp" => Ok(Method::Sssp),
            "fdssp" | "fd-ssp" | "ssp" => Ok(Method::FdSsp),
            "modes" | "modes-reference" => Ok(Method::Modes),
            other => Err(format!("unknown method '{other}' (expected sssp, fdssp or modes)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Starter {
    Modal,
    Greene,
}

impl Starter {
    pub fn as_str(self) -> &'static str {
        match self {
            Starter::Modal => "modal",
            Starter::Greene => "greene",
        }
    }
}

impl FromStr for Starter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "modal" => Ok(Starter::Modal),
            "greene" => Ok(Starter::Greene),
            other => Err(format!("unknown starter '{other}' (expected modal or greene)")),
        }
    }
}

/// One requested artifact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Output {
    /// Complex field history as a binary dump.
    FullField,
    /// TL on the full (decimated) range-depth grid as CSV.
    TlGrid,
    /// TL against range at the grid node nearest to the given depth.
    DepthSlice(f64),
    /// TL as an 8-bit graymap.
    Image,
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::FullField => f.write_str("full_field"),
            Output::TlGrid => f.write_str("tl_grid"),
            Output::DepthSlice(z) => write!(f, "slice:{z}"),
            Output::Image => f.write_str("image"),
        }
    }
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(z) = s.strip_prefix("slice:") {
            return z
                .trim()
                .parse::<f64>()
                .map(Output::DepthSlice)
                .map_err(|_| format!("bad slice depth in '{s}'"));
        }
        match s.to_ascii_lowercase().as_str() {
            "full_field" => Ok(Output::FullField),
            "tl_grid" => Ok(Output::TlGrid),
            "image" => Ok(Output::Image),
            other => Err(format!("unknown output '{other}'")),
        }
    }
}

/// Image display normalization; stored data are never rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalize {
    #[default]
    None,
    /// Shift TL so that the loudest sample of the image sits at 0 dB.
    Max,
}

impl FromStr for Normalize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Normalize::None),
            "max" => Ok(Normalize::Max),
            other => Err(format!("unknown normalize mode '{other}' (expected none or max)")),
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub method: Method,
    /// Hz.
    pub frequency: f64,
    /// Waveguide depth H (m).
    pub depth: f64,
    /// Depth intervals N; the grid has N + 1 nodes.
    pub intervals: usize,
    /// Range step h (m).
    pub range_step: f64,
    /// Range extent R (m).
    pub range: f64,
    pub pade_order: usize,
    /// Neumann cutoff M.
    pub neumann_terms: usize,
    pub starter: Starter,
    pub source_depth: f64,
    pub c0: f64,
    pub eddy: Option<EddyModel>,
    pub sponge: Option<Sponge>,
    pub sampling: RangeSampling,
    pub outputs: Vec<Output>,
    pub tl_min: f64,
    pub tl_max: f64,
    pub normalize: Normalize,
    /// Keep every k-th range column in the outputs.
    pub range_decimation: usize,
    /// Keep every k-th depth node in the outputs.
    pub depth_decimation: usize,
}

impl ScenarioConfig {
    /// Canonical text form; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("method", self.method.as_str().into());
        kv("frequency", self.frequency.to_string());
        kv("depth", self.depth.to_string());
        kv("n", self.intervals.to_string());
        kv("range_step", self.range_step.to_string());
        kv("range", self.range.to_string());
        kv("pade_order", self.pade_order.to_string());
        kv("neumann_terms", self.neumann_terms.to_string());
        kv("starter", self.starter.as_str().into());
        kv("source_depth", self.source_depth.to_string());
        kv("c0", self.c0.to_string());
        match &self.eddy {
            None => kv("eddy", "none".into()),
            Some(e) => {
                kv("eddy", "custom".into());
                kv("eddy_beta", e.beta.to_string());
                kv("eddy_rx", e.r_x.to_string());
                kv("eddy_ry", e.r_y.to_string());
                kv("eddy_rz", e.r_z.to_string());
                kv("eddy_x0", e.x0.to_string());
                kv("eddy_y0", e.y0.to_string());
                kv("eddy_z0", e.z0.to_string());
                kv("eddy_cm", e.c_m.to_string());
            }
        }
        if let Some(sp) = &self.sponge {
            kv("sponge_thickness", sp.thickness.to_string());
            kv("sponge_smax", sp.s_max.to_string());
        }
        kv(
            "sampling",
            match self.sampling {
                RangeSampling::Start => "start".into(),
                RangeSampling::Midpoint => "midpoint".into(),
            },
        );
        let outs: Vec<String> = self.outputs.iter().map(|o| o.to_string()).collect();
        kv("outputs", outs.join(", "));
        kv("tl_min", self.tl_min.to_string());
        kv("tl_max", self.tl_max.to_string());
        kv(
            "normalize",
            match self.normalize {
                Normalize::None => "none".into(),
                Normalize::Max => "max".into(),
            },
        );
        kv("range_decimation", self.range_decimation.to_string());
        kv("depth_decimation", self.depth_decimation.to_string());
        s
    }

    /// Number of marching steps covering the range extent.
    pub fn steps(&self) -> usize {
        (self.range / self.range_step - 1e-9).ceil().max(0.0) as usize
    }
}

/// Problem found while reading a scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseIssue {
    /// 1-based line number; 0 for command-line overrides.
    pub line: usize,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "override")?;
        } else {
            write!(f, "line {}", self.line)?;
        }
        if let Some(k) = &self.key {
            write!(f, " ({k})")?;
        }
        write!(f, ": {}", self.message)
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| format!("\n  - {i}")).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("could not parse scenario:{}", join(.0))]
    Parse(Vec<ParseIssue>),
    #[error("invalid scenario:{}", join(.0))]
    Validation(Vec<String>),
}

const KEYS: &[&str] = &[
    "method",
    "frequency",
    "depth",
    "n",
    "range_step",
    "range",
    "pade_order",
    "neumann_terms",
    "starter",
    "source_depth",
    "c0",
    "eddy",
    "eddy_beta",
    "eddy_rx",
    "eddy_ry",
    "eddy_rz",
    "eddy_x0",
    "eddy_y0",
    "eddy_z0",
    "eddy_cm",
    "sponge_thickness",
    "sponge_smax",
    "sampling",
    "outputs",
    "tl_min",
    "tl_max",
    "normalize",
    "range_decimation",
    "depth_decimation",
];

const REQUIRED: &[&str] =
    &["method", "frequency", "depth", "n", "range_step", "range", "pade_order", "starter", "source_depth"];

/// Raw key/value pairs with the line each came from.
#[derive(Debug, Clone, Default)]
struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

fn split_pair(s: &str) -> Option<(String, String)> {
    let (k, v) = s.split_once('=')?;
    let k = k.trim().to_ascii_lowercase();
    if k.is_empty() {
        return None;
    }
    Some((k, v.trim().to_string()))
}

fn read_raw(text: &str, issues: &mut Vec<ParseIssue>) -> RawConfig {
    let mut raw = RawConfig::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = split_pair(content) else {
            issues.push(ParseIssue { line: line_no, key: None, message: format!("expected 'key = value', got '{content}'") });
            continue;
        };
        if !KEYS.contains(&key.as_str()) {
            issues.push(ParseIssue { line: line_no, key: Some(key), message: "unknown key".into() });
            continue;
        }
        if let Some((first, _)) = raw.entries.get(&key) {
            issues.push(ParseIssue {
                line: line_no,
                key: Some(key.clone()),
                message: format!("duplicate key (first set on line {first})"),
            });
            continue;
        }
        raw.entries.insert(key, (line_no, value));
    }
    raw
}

struct Reader<'a> {
    raw: &'a RawConfig,
    issues: Vec<ParseIssue>,
}

impl Reader<'_> {
    fn get<T: FromStr>(&mut self, key: &str) -> Option<T> {
        let (line, value) = self.raw.entries.get(key)?;
        match value.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.issues.push(ParseIssue {
                    line: *line,
                    key: Some(key.into()),
                    message: format!("cannot parse '{value}'"),
                });
                None
            }
        }
    }

    fn get_with<T>(&mut self, key: &str, f: impl Fn(&str) -> Result<T, String>) -> Option<T> {
        let (line, value) = self.raw.entries.get(key)?;
        match f(value) {
            Ok(v) => Some(v),
            Err(message) => {
                self.issues.push(ParseIssue { line: *line, key: Some(key.into()), message });
                None
            }
        }
    }
}

/// Parses and validates a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_config_with_overrides(text, &[])
}

/// Like [`parse_config`], with `key=value` overrides applied on top of the
/// file contents (later overrides win).
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<ScenarioConfig, ConfigError> {
    let mut issues = Vec::new();
    let mut raw = read_raw(text, &mut issues);
    for o in overrides {
        match split_pair(o) {
            Some((k, v)) if KEYS.contains(&k.as_str()) => {
                raw.entries.insert(k, (0, v));
            }
            Some((k, _)) => issues.push(ParseIssue { line: 0, key: Some(k), message: "unknown key".into() }),
            None => issues.push(ParseIssue { line: 0, key: None, message: format!("expected key=value, got '{o}'") }),
        }
    }
    build(&raw, issues)
}

fn build(raw: &RawConfig, issues: Vec<ParseIssue>) -> Result<ScenarioConfig, ConfigError> {
    let mut r = Reader { raw, issues };
    let mut errors = Vec::new();
    for key in REQUIRED {
        if !raw.entries.contains_key(*key) {
            errors.push(format!("{key}: missing required key"));
        }
    }

    let method = r.get::<Method>("method");
    let frequency = r.get::<f64>("frequency");
    let depth = r.get::<f64>("depth");
    let intervals = r.get::<usize>("n");
    let range_step = r.get::<f64>("range_step");
    let range = r.get::<f64>("range");
    let pade_order = r.get::<usize>("pade_order");
    let neumann_terms = r.get::<usize>("neumann_terms").unwrap_or(2);
    let starter = r.get::<Starter>("starter");
    let source_depth = r.get::<f64>("source_depth");
    let c0 = r.get::<f64>("c0").unwrap_or(1500.0);

    let eddy_kind = r.get_with("eddy", |s| match s.to_ascii_lowercase().as_str() {
        "none" | "off" => Ok(None),
        "warm" => Ok(Some(EddyModel::warm())),
        "custom" => Ok(Some(EddyModel { beta: f64::NAN, ..EddyModel::warm() })),
        other => Err(format!("unknown eddy '{other}' (expected none, warm or custom)")),
    });
    let mut eddy = eddy_kind.flatten();
    let eddy_fields = ["eddy_beta", "eddy_rx", "eddy_ry", "eddy_rz", "eddy_x0", "eddy_y0", "eddy_z0", "eddy_cm"];
    let custom = raw.entries.get("eddy").is_some_and(|(_, v)| v.eq_ignore_ascii_case("custom"));
    for key in eddy_fields {
        let Some(v) = r.get::<f64>(key) else {
            if custom && !raw.entries.contains_key(key) {
                errors.push(format!("{key}: required when eddy = custom"));
            }
            continue;
        };
        match eddy.as_mut() {
            None => errors.push(format!("{key}: set but no eddy is configured")),
            Some(e) => match key {
                "eddy_beta" => e.beta = v,
                "eddy_rx" => e.r_x = v,
                "eddy_ry" => e.r_y = v,
                "eddy_rz" => e.r_z = v,
                "eddy_x0" => e.x0 = v,
                "eddy_y0" => e.y0 = v,
                "eddy_z0" => e.z0 = v,
                _ => e.c_m = v,
            },
        }
    }
    if let Some(e) = &eddy {
        if e.beta.is_finite() {
            if let Err(err) = e.validate() {
                errors.push(format!("eddy: {err}"));
            }
        }
    }

    let sponge = match (r.get::<f64>("sponge_thickness"), r.get::<f64>("sponge_smax")) {
        (Some(thickness), Some(s_max)) => Some(Sponge { thickness, s_max }),
        (None, None) => None,
        _ => {
            if raw.entries.contains_key("sponge_thickness") != raw.entries.contains_key("sponge_smax") {
                errors.push("sponge: sponge_thickness and sponge_smax must be given together".into());
            }
            None
        }
    };
    let sampling = r
        .get_with("sampling", |s| match s.to_ascii_lowercase().as_str() {
            "start" => Ok(RangeSampling::Start),
            "midpoint" => Ok(RangeSampling::Midpoint),
            other => Err(format!("unknown sampling '{other}' (expected start or midpoint)")),
        })
        .unwrap_or_default();
    let outputs = r
        .get_with("outputs", |s| {
            s.split(',').filter(|p| !p.trim().is_empty()).map(Output::from_str).collect::<Result<Vec<_>, _>>()
        })
        .unwrap_or_else(|| vec![Output::TlGrid]);
    let tl_min = r.get::<f64>("tl_min").unwrap_or(20.0);
    let tl_max = r.get::<f64>("tl_max").unwrap_or(80.0);
    let normalize = r.get::<Normalize>("normalize").unwrap_or_default();
    let range_decimation = r.get::<usize>("range_decimation").unwrap_or(1);
    let depth_decimation = r.get::<usize>("depth_decimation").unwrap_or(1);

    if !r.issues.is_empty() {
        return Err(ConfigError::Parse(r.issues));
    }

    let positive = |errors: &mut Vec<String>, key: &str, v: Option<f64>| {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                errors.push(format!("{key}: must be positive, got {v}"));
            }
        }
    };
    positive(&mut errors, "frequency", frequency);
    positive(&mut errors, "depth", depth);
    positive(&mut errors, "range_step", range_step);
    positive(&mut errors, "c0", Some(c0));
    if let Some(v) = range {
        if !(v.is_finite() && v >= 0.0) {
            errors.push(format!("range: must be >= 0, got {v}"));
        }
    }
    if let Some(n) = intervals {
        if n < 2 {
            errors.push(format!("n: need at least 2 depth intervals, got {n}"));
        }
    }
    if let Some(p) = pade_order {
        if p == 0 {
            errors.push("pade_order: must be at least 1".into());
        }
    }
    if let (Some(zs), Some(h)) = (source_depth, depth) {
        if !(zs > 0.0 && zs < h) {
            errors.push(format!("source_depth: must lie in (0, {h}), got {zs}"));
        }
    } else if let Some(zs) = source_depth {
        if zs.is_nan() || zs <= 0.0 {
            errors.push(format!("source_depth: must be positive, got {zs}"));
        }
    }
    for o in &outputs {
        if let Output::DepthSlice(z) = o {
            let bad = !z.is_finite() || *z < 0.0 || depth.is_some_and(|h| *z > h);
            if bad {
                errors.push(format!("outputs: slice depth {z} outside [0, H]"));
            }
        }
    }
    if outputs.is_empty() {
        errors.push("outputs: at least one output is required".into());
    }
    if !(tl_min.is_finite() && tl_max.is_finite() && tl_min < tl_max) {
        errors.push(format!("tl_min/tl_max: need tl_min < tl_max, got [{tl_min}, {tl_max}]"));
    }
    if range_decimation == 0 {
        errors.push("range_decimation: must be at least 1".into());
    }
    if depth_decimation == 0 {
        errors.push("depth_decimation: must be at least 1".into());
    }
    if let (Some(sp), Some(h)) = (&sponge, depth) {
        if !(sp.thickness > 0.0 && sp.thickness < 0.5 * h) {
            errors.push(format!("sponge_thickness: must lie in (0, H/2), got {}", sp.thickness));
        }
        if !(sp.s_max.is_finite() && sp.s_max >= 0.0) {
            errors.push(format!("sponge_smax: must be >= 0, got {}", sp.s_max));
        }
    }
    if method == Some(Method::Modes) {
        if eddy.is_some() {
            errors.push("method: the normal-mode reference needs a range-independent medium (remove eddy)".into());
        }
        if starter == Some(Starter::Greene) {
            errors.push("starter: the normal-mode reference is defined for the modal starter only".into());
        }
    }

    if !errors.is_empty() {
        return Err(ConfigError::Validation(errors));
    }
    Ok(ScenarioConfig {
        method: method.unwrap(),
        frequency: frequency.unwrap(),
        depth: depth.unwrap(),
        intervals: intervals.unwrap(),
        range_step: range_step.unwrap(),
        range: range.unwrap(),
        pade_order: pade_order.unwrap(),
        neumann_terms,
        starter: starter.unwrap(),
        source_depth: source_depth.unwrap(),
        c0,
        eddy,
        sponge,
        sampling,
        outputs,
        tl_min,
        tl_max,
        normalize,
        range_decimation,
        depth_decimation,
    })
}
