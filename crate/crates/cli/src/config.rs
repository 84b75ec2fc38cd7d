//! Experiment configuration: a line-oriented `key = value` format with
//! `[section]` headers and `#` comments.
//!
//! ```text
//! [field]
//! q0 = 3
//! s = 2
//! m = 2
//!
//! [code]
//! lengths = 2, 2, 2
//! k = 3
//!
//! [channel]
//! t = 1
//! rho = 1
//!
//! [campaign]
//! kind = reliability
//! trials = 1000
//! seed = 7
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use msrd::gf::TowerParams;
use msrd::lrs::{CodeSpec, NestedPair};
use msrd::sumrank::BlockShape;
use msrd::FieldTower;

/// A configuration problem, located at a 1-based line and column (line 0
/// means the file as a whole).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            0 => write!(f, "{}", self.msg),
            _ => write!(f, "{}:{}: {}", self.line, self.col, self.msg),
        }
    }
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError { line, col, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CampaignKind {
    Reliability,
    Secrecy,
    Complexity,
    Bounds,
}

impl FromStr for CampaignKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reliability" => Ok(Self::Reliability),
            "secrecy" => Ok(Self::Secrecy),
            "complexity" => Ok(Self::Complexity),
            "bounds" => Ok(Self::Bounds),
            _ => Err(format!("unknown campaign kind `{s}` (expected reliability, secrecy, complexity or bounds)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Coherent,
    Noncoherent,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "coherent" => Ok(Self::Coherent),
            "noncoherent" => Ok(Self::Noncoherent),
            _ => Err(format!("unknown channel mode `{s}` (expected coherent or noncoherent)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub tower: FieldTower,
    pub code: CodeSpec,
    /// Inner dimension for secrecy campaigns.
    pub k2: usize,
    pub t: usize,
    pub rho: usize,
    pub mu: usize,
    pub out_shape: Option<Vec<usize>>,
    pub mode: Mode,
    pub kind: CampaignKind,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Largest n for complexity sweeps.
    pub max_n: usize,
}

/// A parsed value with its position, for later diagnostics.
#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    col: usize,
}

const KEYS: &[(&str, &[&str])] = &[
    ("field", &["q0", "s", "m", "r", "modq", "modqm"]),
    ("code", &["lengths", "k", "k2"]),
    ("channel", &["t", "rho", "mu", "out", "mode"]),
    ("campaign", &["kind", "trials", "seed", "out", "max_n"]),
];

struct Sections {
    entries: HashMap<(String, String), Entry>,
    headers: HashMap<String, usize>,
}

impl Sections {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn parse<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(e) = self.get(section, key) else { return Ok(None) };
        e.value
            .parse()
            .map(Some)
            .map_err(|why| err_at(e.line, e.col, format!("invalid value for `{key}`: {why}")))
    }

    fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.parse(section, key)?.ok_or_else(|| {
            let line = self.headers.get(section).copied().unwrap_or(0);
            err_at(line, 1, format!("missing required key `{key}` in [{section}]"))
        })
    }

    fn list(&self, section: &str, key: &str) -> Result<Option<Vec<usize>>, ConfigError> {
        let Some(e) = self.get(section, key) else { return Ok(None) };
        let mut out = Vec::new();
        let mut offset = 0;
        for part in e.value.split(',') {
            let trimmed = part.trim();
            let col = e.col + offset + (part.len() - part.trim_start().len());
            out.push(trimmed.parse().map_err(|_| err_at(e.line, col, format!("`{trimmed}` is not a non-negative integer in `{key}`")))?);
            offset += part.len() + 1;
        }
        Ok(Some(out))
    }

    /// Position for errors about the section as a whole.
    fn at(&self, section: &str, key: &str) -> (usize, usize) {
        match self.get(section, key) {
            Some(e) => (e.line, e.col),
            None => (self.headers.get(section).copied().unwrap_or(0), 1),
        }
    }
}

fn tokenize(text: &str) -> Result<Sections, ConfigError> {
    let mut entries = HashMap::new();
    let mut headers = HashMap::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err_at(line, indent + body.len(), "section header is missing `]`"))?
                .trim();
            if !KEYS.iter().any(|(s, _)| *s == name) {
                return Err(err_at(line, indent + 2, format!("unknown section [{name}]")));
            }
            if headers.insert(name.to_string(), line).is_some() {
                return Err(err_at(line, indent + 1, format!("section [{name}] appears twice")));
            }
            section = Some(name.to_string());
            continue;
        }
        let Some(eq) = body.find('=') else {
            return Err(err_at(line, indent + 1, "expected `key = value`"));
        };
        let Some(sec) = &section else {
            return Err(err_at(line, indent + 1, "key outside of any [section]"));
        };
        let key = body[..eq].trim();
        let allowed = KEYS.iter().find(|(s, _)| s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !allowed.contains(&key) {
            return Err(err_at(line, indent + 1, format!("unknown key `{key}` in [{sec}] (expected one of {})", allowed.join(", "))));
        }
        let after = &body[eq + 1..];
        let value = after.trim();
        if value.is_empty() {
            return Err(err_at(line, indent + eq + 2, format!("missing value for `{key}`")));
        }
        let col = indent + eq + 2 + (after.len() - after.trim_start().len());
        let prev = entries.insert((sec.clone(), key.to_string()), Entry { value: value.to_string(), line, col });
        if prev.is_some() {
            return Err(err_at(line, indent + 1, format!("duplicate key `{key}` in [{sec}]")));
        }
    }
    Ok(Sections { entries, headers })
}

impl ExperimentConfig {
    /// Parses and validates; every code and channel invariant is checked
    /// here, before any trial runs.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let s = tokenize(text)?;
        let params = TowerParams {
            q0: s.require("field", "q0")?,
            s: s.parse("field", "s")?.unwrap_or(1),
            m: s.require("field", "m")?,
            r: s.parse("field", "r")?.unwrap_or(1),
            modq: s.list("field", "modq")?.map(|v| v.into_iter().map(|c| c as u16).collect()),
            modqm: s.list("field", "modqm")?.map(|v| v.into_iter().map(|c| c as u16).collect()),
        };
        let tower = params.build().map_err(|e| {
            let (line, col) = s.at("field", "q0");
            err_at(line, col, e.to_string())
        })?;

        let lengths = s.list("code", "lengths")?.ok_or_else(|| {
            err_at(s.headers.get("code").copied().unwrap_or(0), 1, "missing required key `lengths` in [code]")
        })?;
        let (line, col) = s.at("code", "lengths");
        let shape = BlockShape::new(lengths).map_err(|e| err_at(line, col, e.to_string()))?;
        let n = shape.n();
        let k: usize = s.parse("code", "k")?.unwrap_or(n / 2);
        let code = CodeSpec::new(&tower, shape.clone(), k).map_err(|e| {
            let (line, col) = match e {
                msrd::Error::Config(ref m) if m.contains("shots") || m.contains("n_i") => (line, col),
                _ => s.at("code", "k"),
            };
            err_at(line, col, e.to_string())
        })?;

        let t: usize = s.parse("channel", "t")?.unwrap_or(0);
        let rho: usize = s.parse("channel", "rho")?.unwrap_or(0);
        let mu: usize = s.parse("channel", "mu")?.unwrap_or(0);
        let k2: usize = s.parse("code", "k2")?.unwrap_or(mu.min(k.saturating_sub(1)));
        if k2 > 0 && k2 >= k {
            let (line, col) = s.at("code", "k2");
            return Err(err_at(line, col, format!("need k2 < k = {k}, got {k2}")));
        }
        if rho > n {
            let (line, col) = s.at("channel", "rho");
            return Err(err_at(line, col, format!("ρ = {rho} exceeds n = {n}")));
        }
        if mu > n {
            let (line, col) = s.at("channel", "mu");
            return Err(err_at(line, col, format!("μ = {mu} exceeds n = {n}")));
        }
        let out_shape = s.list("channel", "out")?;
        if let Some(o) = &out_shape {
            if o.len() != shape.ell() {
                let (line, col) = s.at("channel", "out");
                return Err(err_at(line, col, format!("`out` needs one width per shot ({} shots)", shape.ell())));
            }
        }
        let mode = s.parse("channel", "mode")?.unwrap_or(Mode::Coherent);
        let kind = s.require("campaign", "kind")?;
        Ok(Self {
            tower,
            code,
            k2,
            t,
            rho,
            mu,
            out_shape,
            mode,
            kind,
            trials: s.parse("campaign", "trials")?.unwrap_or(1000),
            seed: s.parse("campaign", "seed")?.unwrap_or(0),
            out: s.parse::<String>("campaign", "out")?.map(PathBuf::from),
            max_n: s.parse("campaign", "max_n")?.unwrap_or(64),
        })
    }

    pub fn pair(&self) -> msrd::Result<NestedPair> {
        NestedPair::new(self.code.clone(), self.k2)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} campaign: q = {}, m = {}, r = {}, n = {:?} (n = {}), k = {}, t = {}, ρ = {}, μ = {}",
            match self.kind {
                CampaignKind::Reliability => "reliability",
                CampaignKind::Secrecy => "secrecy",
                CampaignKind::Complexity => "complexity",
                CampaignKind::Bounds => "bounds",
            },
            self.tower.q(),
            self.tower.m(),
            self.tower.r(),
            self.code.shape().lengths(),
            self.code.n(),
            self.code.k(),
            self.t,
            self.rho,
            self.mu
        )
    }
}
