//! Run configuration: defaults, then a flat `key = value` file, then command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// The additive function an `ek` run reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Omega,
    CurveG,
}

impl FromStr for FunctionKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "omega" => Ok(FunctionKind::Omega),
            "curve-g" => Ok(FunctionKind::CurveG),
            _ => Err(CliError::Config(format!("unknown function {s:?} (expected omega or curve-g)"))),
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionKind::Omega => "omega",
            FunctionKind::CurveG => "curve-g",
        })
    }
}

/// A prime ideal named by its rational prime and conjugate index.
pub type PrimeToken = (u64, u8);

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub curve: (i64, i64),
    /// `None` for `Q`, else `m` of `Q(√m)`.
    pub field: Option<i64>,
    pub x: Vec<u64>,
    pub k_list: Vec<u32>,
    pub r_list: Vec<i32>,
    pub seed: u64,
    pub output: PathBuf,
    pub function: FunctionKind,
    pub q: Vec<PrimeToken>,
    /// `None`: every squarefree divisor of `q`.
    pub d: Option<Vec<PrimeToken>>,
    pub threads: Option<usize>,
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            curve: (1, -1),
            field: None,
            x: vec![10_000],
            k_list: vec![1, 2, 3, 4],
            r_list: vec![1, 2],
            seed: 0,
            output: PathBuf::from("out"),
            function: FunctionKind::Omega,
            q: Vec::new(),
            d: None,
            threads: None,
            svg: true,
        }
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {value:?}")))
}

fn list<T: FromStr>(key: &str, value: &str) -> CliResult<Vec<T>> {
    value.split(',').map(|v| number(key, v)).collect()
}

/// `p:idx` tokens separated by commas; `1` or the empty string for the unit ideal.
pub fn parse_ideal_spec(spec: &str) -> CliResult<Vec<PrimeToken>> {
    let spec = spec.trim();
    if spec.is_empty() || spec == "1" {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|tok| {
            let (p, idx) = tok
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("ideal token {tok:?} is not p:idx")))?;
            Ok((number("prime", p)?, number("index", idx)?))
        })
        .collect()
}

impl RunConfig {
    /// Sets one key. Keys: `a b field X k r seed out f q d threads svg`.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "a" => self.curve.0 = number(key, value)?,
            "b" => self.curve.1 = number(key, value)?,
            "field" => {
                self.field = match value.trim() {
                    "Q" | "q" => None,
                    v => Some(number(key, v)?),
                }
            }
            "X" => self.x = list(key, value)?,
            "k" => self.k_list = list(key, value)?,
            "r" => self.r_list = list(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "out" => self.output = PathBuf::from(value.trim()),
            "f" => self.function = value.trim().parse()?,
            "q" => self.q = parse_ideal_spec(value)?,
            "d" => self.d = Some(parse_ideal_spec(value)?),
            "threads" => self.threads = Some(number(key, value)?),
            "svg" => self.svg = number(key, value)?,
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Checks the constraints shared by every command.
    pub fn validate(&self) -> CliResult<()> {
        if self.x.is_empty() || self.x.iter().any(|&x| x < 2) {
            return Err(CliError::Config("every X must be at least 2".into()));
        }
        if self.k_list.contains(&0) {
            return Err(CliError::Config("moment orders must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        Ok(())
    }

    /// The single cutoff of commands that take one.
    pub fn single_x(&self) -> CliResult<u64> {
        match self.x.as_slice() {
            [x] => Ok(*x),
            _ => Err(CliError::Config(format!("this command takes one X, got {:?}", self.x))),
        }
    }
}
