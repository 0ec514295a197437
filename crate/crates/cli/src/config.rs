//! Key/value config files and their decoding into a validated [`RunConfig`].
//!
//! ```text
//! # shared by every command
//! seed = 7
//! out_dir = results
//!
//! [converge]
//! thm = 2
//! alpha = 1.2
//! gammas = 0.1, 0.01, 0.001
//! ```
//!
//! Keys before the first section apply to every command; a `[command]`
//! section applies to that command only. Command-line flags override both.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use fraclab_core::operators::GeneratorForm;
use fraclab_core::symbols::Theorem;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Diagnostic for a skew pair that does not sum to one.
pub const SKEW_CONSTRAINT: &str = "we obviously assume that p+q=1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown key `{key}`")]
    UnknownKey { key: String },

    #[error("key `{key}`: cannot read {value:?}: {message}")]
    Value {
        key: String,
        value: String,
        message: String,
    },

    #[error("missing required key `{key}` for `{command}`")]
    Missing { key: String, command: String },

    #[error("{0}")]
    Range(String),

    #[error("p = {p}, q = {q} sum to {sum}; {SKEW_CONSTRAINT}")]
    Skew { p: f64, q: f64, sum: f64 },

    #[error("cannot read config file {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Symbol,
    Simulate,
    Converge,
    Operator,
    Verify,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Symbol,
        Command::Simulate,
        Command::Converge,
        Command::Operator,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Symbol => "symbol",
            Command::Simulate => "simulate",
            Command::Converge => "converge",
            Command::Operator => "operator",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::Value {
                key: "command".into(),
                value: s.into(),
                message: "unknown command".into(),
            })
    }
}

/// One `key = value` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub section: Option<Command>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// A parsed config file, entries in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigText {
    pub entries: Vec<Entry>,
}

impl ConfigText {
    /// Values for `command`: global keys, then the command's own section.
    pub fn values_for(&self, command: Command) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for e in self.entries.iter().filter(|e| e.section.is_none()) {
            out.insert(e.key.clone(), e.value.clone());
        }
        for e in self.entries.iter().filter(|e| e.section == Some(command)) {
            out.insert(e.key.clone(), e.value.clone());
        }
        out
    }
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && k.bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
        && k.as_bytes()[0].is_ascii_lowercase()
}

/// Parses config text. Comments start with `#`; blank lines are ignored.
pub fn parse_config_text(text: &str) -> Result<ConfigText, ConfigError> {
    let mut section = None;
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    message: "unterminated section header".into(),
                })?
                .trim();
            section = Some(name.parse::<Command>().map_err(|_| ConfigError::Syntax {
                line,
                message: format!("unknown section [{name}]"),
            })?);
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: "expected `key = value`".into(),
        })?;
        let (key, value) = (k.trim(), v.trim());
        if !valid_key(key) {
            return Err(ConfigError::Syntax {
                line,
                message: format!("invalid key {key:?}"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: format!("empty value for `{key}`"),
            });
        }
        if entries.iter().any(|e| e.section == section && e.key == key) {
            return Err(ConfigError::Syntax {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        entries.push(Entry {
            section,
            key: key.into(),
            value: value.into(),
            line,
        });
    }
    Ok(ConfigText { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Walk,
    Limit,
}

/// `points` uniform values on `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

/// Test-function parameters for the `operator` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionConfig {
    pub family: String,
    pub center: f64,
    pub width: f64,
    pub frequency: f64,
    pub phase: f64,
    pub value: f64,
}

/// Every knob of one run, validated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub theorem: Option<Theorem>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub gammas: Vec<f64>,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub xi: Axis,
    pub x: Axis,
    pub source: Source,
    pub operator: Option<String>,
    pub function: FunctionConfig,
    pub form: GeneratorForm,
    /// Largest admissible sup CF error at the last sweep scale.
    pub cf_tol: f64,
    pub out_dir: PathBuf,
    pub format: Format,
    pub threads: Option<usize>,
}

pub const KEYS: &[&str] = &[
    "thm",
    "alpha",
    "beta",
    "gamma",
    "gammas",
    "lambda",
    "p",
    "q",
    "t",
    "d",
    "n",
    "seed",
    "xi_min",
    "xi_max",
    "xi_points",
    "x_min",
    "x_max",
    "x_points",
    "source",
    "operator",
    "function",
    "center",
    "width",
    "frequency",
    "phase",
    "value",
    "form",
    "cf_tol",
    "out_dir",
    "format",
    "threads",
];

pub const OPERATORS: &[&str] = &[
    "weyl_left",
    "weyl_right",
    "riesz",
    "frac_laplacian",
    "bochner",
    "frac_multiplier",
    "symbol",
    "generator",
];

pub const FAMILIES: &[&str] = &[
    "gaussian",
    "modulated",
    "cosine",
    "constant",
    "linear",
    "quadratic",
];

struct Reader<'a> {
    kv: &'a BTreeMap<String, String>,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.kv.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| ConfigError::Value {
                    key: key.into(),
                    value: v.into(),
                    message: e.to_string(),
                })
            })
            .transpose()
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.parse::<f64>(key)?;
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(ConfigError::Value {
                    key: key.into(),
                    value: x.to_string(),
                    message: "must be finite".into(),
                });
            }
        }
        Ok(v)
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let Some(v) = self.raw(key) else {
            return Ok(Vec::new());
        };
        v.split(',')
            .map(|s| {
                let s = s.trim();
                match s.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(x),
                    _ => Err(ConfigError::Value {
                        key: key.into(),
                        value: v.into(),
                        message: format!("bad entry {s:?}"),
                    }),
                }
            })
            .collect()
    }

    fn choice(&self, key: &str, allowed: &[&str]) -> Result<Option<String>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) if allowed.contains(&v) => Ok(Some(v.to_string())),
            Some(v) => Err(ConfigError::Value {
                key: key.into(),
                value: v.into(),
                message: format!("expected one of {}", allowed.join(", ")),
            }),
        }
    }
}

fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::Range(format!("{key} = {v} must be positive")))
    }
}

fn missing(key: &str, command: Command) -> ConfigError {
    ConfigError::Missing {
        key: key.into(),
        command: command.name().into(),
    }
}

/// Checks `alpha` against the theorem's hypothesis and `p + q = 1`.
pub fn check_theorem(
    theorem: Theorem,
    alpha: f64,
    p: f64,
    q: f64,
    d: usize,
) -> Result<(), ConfigError> {
    let hi = theorem.alpha_upper();
    if !(alpha > 0.0 && alpha < hi) {
        return Err(ConfigError::Range(format!(
            "theorem {} requires alpha in (0, {hi}), got alpha = {alpha}",
            theorem.number()
        )));
    }
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(ConfigError::Range(format!(
            "p = {p} and q = {q} must lie in [0, 1]"
        )));
    }
    let sum = p + q;
    if (sum - 1.0).abs() > 1e-12 {
        return Err(ConfigError::Skew { p, q, sum });
    }
    match theorem {
        Theorem::Thm2 if p != 0.5 || q != 0.5 => Err(ConfigError::Range(format!(
            "theorem 2 requires symmetric jumps p = q = 1/2, got p = {p}, q = {q}"
        ))),
        Theorem::Thm3 if !(1..=3).contains(&d) => Err(ConfigError::Range(format!(
            "theorem 3 supports d = 1, 2, 3, got d = {d}"
        ))),
        Theorem::Thm1 | Theorem::Thm2 if d != 1 => Err(ConfigError::Range(format!(
            "theorem {} is one-dimensional, got d = {d}",
            theorem.number()
        ))),
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Decodes and validates merged key/value pairs for `command`.
    /// `default_out_dir` is used when no `out_dir` key is present.
    pub fn from_kv(
        command: Command,
        kv: &BTreeMap<String, String>,
        default_out_dir: PathBuf,
    ) -> Result<Self, ConfigError> {
        if let Some(k) = kv.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::UnknownKey { key: k.clone() });
        }
        let r = Reader { kv };
        let theorem = match r.parse::<u8>("thm")? {
            Some(n) => Some(Theorem::from_number(n).map_err(|e| ConfigError::Value {
                key: "thm".into(),
                value: n.to_string(),
                message: e.to_string(),
            })?),
            None => None,
        };
        let (p, q) = match (r.real("p")?, r.real("q")?) {
            (Some(p), Some(q)) => (p, q),
            (Some(p), None) => (p, 1.0 - p),
            (None, Some(q)) => (1.0 - q, q),
            (None, None) if theorem == Some(Theorem::Thm1) => (1.0, 0.0),
            (None, None) => (0.5, 0.5),
        };
        let d = r
            .parse::<usize>("d")?
            .unwrap_or(if theorem == Some(Theorem::Thm3) { 2 } else { 1 });
        let default_xi_points = if d >= 3 { 21 } else { 101 };
        let xi = Axis {
            min: r.real("xi_min")?.unwrap_or(-5.0),
            max: r.real("xi_max")?.unwrap_or(5.0),
            points: r.parse("xi_points")?.unwrap_or(default_xi_points),
        };
        let x = Axis {
            min: r.real("x_min")?.unwrap_or(-3.0),
            max: r.real("x_max")?.unwrap_or(3.0),
            points: r.parse("x_points")?.unwrap_or(61),
        };
        for (name, a) in [("xi", xi), ("x", x)] {
            if !(a.max > a.min) || a.points < 2 {
                return Err(ConfigError::Range(format!(
                    "{name} grid needs {name}_min < {name}_max and at least 2 points"
                )));
            }
        }
        let form = match r
            .choice("form", &["compensated", "symmetric", "uncompensated"])?
            .as_deref()
        {
            Some("symmetric") => GeneratorForm::Symmetric,
            Some("uncompensated") => GeneratorForm::Uncompensated,
            _ => GeneratorForm::Compensated,
        };
        let format = match r.choice("format", &["csv", "json", "both"])?.as_deref() {
            Some("json") => Format::Json,
            Some("both") => Format::Both,
            _ => Format::Csv,
        };
        let source = match r.choice("source", &["walk", "limit"])?.as_deref() {
            Some("limit") => Source::Limit,
            _ => Source::Walk,
        };
        let cfg = RunConfig {
            command,
            theorem,
            alpha: r.real("alpha")?,
            beta: r.real("beta")?,
            gamma: r.real("gamma")?,
            gammas: r.list("gammas")?,
            lambda: positive("lambda", r.real("lambda")?.unwrap_or(1.0))?,
            p,
            q,
            t: positive("t", r.real("t")?.unwrap_or(1.0))?,
            d,
            n: r.parse("n")?.unwrap_or(10_000),
            seed: r.parse("seed")?.unwrap_or(0),
            xi,
            x,
            source,
            operator: r.choice("operator", OPERATORS)?,
            function: FunctionConfig {
                family: r
                    .choice("function", FAMILIES)?
                    .unwrap_or_else(|| "gaussian".into()),
                center: r.real("center")?.unwrap_or(0.0),
                width: positive("width", r.real("width")?.unwrap_or(1.0))?,
                frequency: r.real("frequency")?.unwrap_or(1.0),
                phase: r.real("phase")?.unwrap_or(0.0),
                value: r.real("value")?.unwrap_or(1.0),
            },
            form,
            cf_tol: positive("cf_tol", r.real("cf_tol")?.unwrap_or(0.02))?,
            out_dir: r
                .raw("out_dir")
                .map(PathBuf::from)
                .unwrap_or(default_out_dir),
            format,
            threads: r.parse("threads")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn require_theorem(&self) -> Result<(Theorem, f64), ConfigError> {
        let th = self.theorem.ok_or_else(|| missing("thm", self.command))?;
        let alpha = self.alpha.ok_or_else(|| missing("alpha", self.command))?;
        check_theorem(th, alpha, self.p, self.q, self.d)?;
        Ok((th, alpha))
    }

    /// Command-specific requirements and the theorem hypotheses.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.threads == Some(0) {
            return Err(ConfigError::Range("threads must be at least 1".into()));
        }
        if let Some(g) = self.gamma {
            positive("gamma", g)?;
        }
        match self.command {
            Command::Symbol => {
                self.require_theorem()?;
            }
            Command::Simulate => {
                self.require_theorem()?;
                if self.source == Source::Walk && self.gamma.is_none() {
                    return Err(missing("gamma", self.command));
                }
                if self.n == 0 {
                    return Err(ConfigError::Range("n must be at least 1".into()));
                }
            }
            Command::Converge => {
                self.require_theorem()?;
                if self.gammas.is_empty() {
                    return Err(missing("gammas", self.command));
                }
                if self.gammas.iter().any(|g| *g <= 0.0)
                    || self.gammas.windows(2).any(|w| w[1] >= w[0])
                {
                    return Err(ConfigError::Range(
                        "gammas must be positive and strictly decreasing".into(),
                    ));
                }
                if self.n < 2 {
                    return Err(ConfigError::Range("n must be at least 2".into()));
                }
            }
            Command::Operator => {
                let op = self
                    .operator
                    .as_deref()
                    .ok_or_else(|| missing("operator", self.command))?;
                match op {
                    "riesz" => {
                        self.beta.ok_or_else(|| missing("beta", self.command))?;
                    }
                    "symbol" | "generator" => {
                        self.require_theorem()?;
                        if op == "generator" {
                            self.gamma.ok_or_else(|| missing("gamma", self.command))?;
                        }
                    }
                    _ => {
                        self.alpha.ok_or_else(|| missing("alpha", self.command))?;
                    }
                }
                if matches!(op, "weyl_left" | "weyl_right" | "riesz" | "generator") && self.d != 1 {
                    return Err(ConfigError::Range(format!(
                        "operator {op} is one-dimensional, got d = {}",
                        self.d
                    )));
                }
            }
            Command::Verify => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn sections_layer_over_globals() {
        let text = "seed = 3\nn = 10 # trailing\n[converge]\nn = 20\n[symbol]\nalpha = 0.4\n";
        let c = parse_config_text(text).unwrap();
        let v = c.values_for(Command::Converge);
        assert_eq!(v["seed"], "3");
        assert_eq!(v["n"], "20");
        assert!(!v.contains_key("alpha"));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        assert!(matches!(
            parse_config_text("a = 1\nnonsense\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_config_text("[plot]\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_config_text("a = 1\na = 2\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_config_text("Bad = 1\n"),
            Err(ConfigError::Syntax { .. })
        ));
    }

    #[test]
    fn skew_message_names_the_constraint() {
        let e = RunConfig::from_kv(
            Command::Symbol,
            &kv(&[("thm", "1"), ("alpha", "0.5"), ("p", "0.7"), ("q", "0.4")]),
            "out".into(),
        )
        .unwrap_err();
        assert!(e.to_string().contains(SKEW_CONSTRAINT), "{e}");
    }

    #[test]
    fn range_error_cites_the_interval() {
        let e = RunConfig::from_kv(
            Command::Symbol,
            &kv(&[("thm", "1"), ("alpha", "1.5")]),
            "out".into(),
        )
        .unwrap_err();
        assert!(e.to_string().contains("(0, 1)"), "{e}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let e =
            RunConfig::from_kv(Command::Verify, &kv(&[("alhpa", "1")]), "out".into()).unwrap_err();
        assert_eq!(
            e,
            ConfigError::UnknownKey {
                key: "alhpa".into()
            }
        );
    }
}
