//! JSON file formats for channel specifications and MUB tables.
//!
//! Channel spec:
//!
//! ```json
//! {"schema_version": 1, "kind": "gpc", "d": 2, "mub": "builtin",
//!  "p": ["1 - 0.75*(1-exp(-1*t))", "0.25*(1-exp(-1*t))", "...", "..."]}
//! ```
//!
//! For `"kind": "weyl"` the field `p` is a `d x d` array indexed `[i][j]`.
//! `mub` is either `"builtin"` or a path to a MUB table, resolved relative to
//! the spec file.
//!
//! MUB table: `{"schema_version": 1, "d": 3, "bases": [[[[re, im], …], …], …]}`
//! with `bases[α][k][m]` the `m`-th component of the `k`-th vector of basis `α`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{Channel, ChannelError, GeneralizedPauli, Weyl};
use crate::expr::{parse_expr, Expr, ExprError};
use crate::mub::{load_mub_table, mub_family, weyl_set, MubError, Mubs};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{location}: {source}")]
    Expr { location: String, source: ExprError },
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Mub(#[from] MubError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Gpc,
    Weyl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbabilitySpec {
    Flat(Vec<String>),
    Square(Vec<Vec<String>>),
}

fn builtin() -> String {
    "builtin".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub schema_version: u32,
    pub kind: ChannelKind,
    pub d: usize,
    pub p: ProbabilitySpec,
    #[serde(default = "builtin")]
    pub mub: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubTable {
    pub schema_version: u32,
    pub d: usize,
    pub bases: Vec<Vec<Vec<[f64; 2]>>>,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

fn check_version(v: u32) -> Result<(), IoError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(IoError::Schema(format!(
            "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
        )))
    }
}

fn parse_at(text: &str, location: String) -> Result<Expr<f64>, IoError> {
    parse_expr(text).map_err(|source| IoError::Expr { location, source })
}

impl ChannelSpec {
    pub fn from_channel(ch: &Channel<f64>, mub: &str) -> Self {
        let strings: Vec<String> = ch.p().iter().map(|e| e.to_string()).collect();
        let d = ch.dim();
        match ch {
            Channel::Gpc(_) => ChannelSpec {
                schema_version: SCHEMA_VERSION,
                kind: ChannelKind::Gpc,
                d,
                p: ProbabilitySpec::Flat(strings),
                mub: mub.into(),
            },
            Channel::Weyl(_) => ChannelSpec {
                schema_version: SCHEMA_VERSION,
                kind: ChannelKind::Weyl,
                d,
                p: ProbabilitySpec::Square(strings.chunks(d).map(|r| r.to_vec()).collect()),
                mub: mub.into(),
            },
        }
    }

    /// Build the channel; `base` resolves a relative MUB table path.
    pub fn build(&self, base: Option<&Path>) -> Result<Channel<f64>, IoError> {
        check_version(self.schema_version)?;
        let d = self.d;
        if d < 2 {
            return Err(IoError::Schema(format!("d = {d} < 2")));
        }
        match (self.kind, &self.p) {
            (ChannelKind::Gpc, ProbabilitySpec::Flat(items)) => {
                if items.len() != d + 2 {
                    return Err(IoError::Schema(format!(
                        "gpc needs {} entries in p, found {}",
                        d + 2,
                        items.len()
                    )));
                }
                let p = items
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_at(s, format!("p[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let mubs = self.load_mubs(base)?;
                Ok(Channel::Gpc(GeneralizedPauli::new(mubs, p)?))
            }
            (ChannelKind::Weyl, ProbabilitySpec::Square(rows)) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(IoError::Schema(format!("weyl needs a {d}x{d} array in p")));
                }
                let mut p = Vec::with_capacity(d * d);
                for (i, row) in rows.iter().enumerate() {
                    for (j, s) in row.iter().enumerate() {
                        p.push(parse_at(s, format!("p[{i}][{j}]"))?);
                    }
                }
                Ok(Channel::Weyl(Weyl::new(Arc::new(weyl_set(d)), p)?))
            }
            (ChannelKind::Gpc, _) => Err(IoError::Schema("gpc expects p as a flat array".into())),
            (ChannelKind::Weyl, _) => {
                Err(IoError::Schema("weyl expects p as a square array".into()))
            }
        }
    }

    fn load_mubs(&self, base: Option<&Path>) -> Result<Arc<Mubs<f64>>, IoError> {
        if self.mub == "builtin" {
            return Ok(Arc::new(mub_family(self.d)?));
        }
        let mut path = PathBuf::from(&self.mub);
        if path.is_relative() {
            if let Some(dir) = base {
                path = dir.join(path);
            }
        }
        let mubs = load_mub_file(&path)?;
        if mubs.dim() != self.d {
            return Err(IoError::Schema(format!(
                "MUB table has d = {}, spec has d = {}",
                mubs.dim(),
                self.d
            )));
        }
        Ok(Arc::new(mubs))
    }
}

pub fn load_channel(path: &Path) -> Result<Channel<f64>, IoError> {
    let text = read(path)?;
    let spec: ChannelSpec = serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_owned(),
        source,
    })?;
    spec.build(path.parent())
}

pub fn save_channel(path: &Path, ch: &Channel<f64>, mub: &str) -> Result<(), IoError> {
    let spec = ChannelSpec::from_channel(ch, mub);
    let text = serde_json::to_string_pretty(&spec).expect("channel spec serializes");
    write(path, &(text + "\n"))
}

impl MubTable {
    pub fn from_mubs(m: &Mubs<f64>) -> Self {
        let bases = m
            .bases()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        MubTable {
            schema_version: SCHEMA_VERSION,
            d: m.dim(),
            bases,
        }
    }

    pub fn build(&self) -> Result<Mubs<f64>, IoError> {
        check_version(self.schema_version)?;
        let bases = self
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| v.iter().map(|[re, im]| Complex::new(*re, *im)).collect())
                    .collect()
            })
            .collect();
        Ok(load_mub_table(self.d, bases)?)
    }
}

pub fn load_mub_file(path: &Path) -> Result<Mubs<f64>, IoError> {
    let text = read(path)?;
    let table: MubTable = serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_owned(),
        source,
    })?;
    table.build()
}

pub fn save_mub_file(path: &Path, m: &Mubs<f64>) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(&MubTable::from_mubs(m)).expect("MUB table serializes");
    write(path, &(text + "\n"))
}
