//! Group selection, matrix files and flag parsing.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use soergel::coxeter::{CoxeterMatrix, Preset, RealizationChoice};
use soergel::field::parse_scalar;
use soergel::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Q2,
    Q3,
    Q5,
}

impl FieldKind {
    pub fn parse(text: &str) -> Result<FieldKind> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        Ok(match t.as_str() {
            "q" | "rational" | "rationals" => FieldKind::Rational,
            "q2" | "q(sqrt2)" | "q(sqrt(2))" => FieldKind::Q2,
            "q3" | "q(sqrt3)" | "q(sqrt(3))" => FieldKind::Q3,
            "q5" | "q(sqrt5)" | "q(sqrt(5))" => FieldKind::Q5,
            _ => bail!("unknown field {text:?} (expected Q, Q2, Q3 or Q5)"),
        })
    }

    pub fn from_radicand(d: i64) -> Result<FieldKind> {
        Ok(match d {
            0 => FieldKind::Rational,
            2 => FieldKind::Q2,
            3 => FieldKind::Q3,
            5 => FieldKind::Q5,
            _ => bail!("no supported field contains the geometric realization (radicand {d})"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Geometric,
    Cartan,
    Explicit,
}

/// A TOML matrix file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rank: usize,
    /// Coxeter matrix; `0` or `"inf"` for infinity.
    pub entries: Vec<Vec<toml::Value>>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    pub field: Option<String>,
    /// Integer Cartan matrix for `mode = "cartan"`.
    pub cartan: Option<Vec<Vec<i64>>>,
    pub alpha: Option<Vec<Vec<toml::Value>>>,
    pub alphavee: Option<Vec<Vec<toml::Value>>>,
    pub rho: Option<Vec<toml::Value>>,
}

fn default_mode() -> Mode {
    Mode::Geometric
}

fn order_entry(v: &toml::Value) -> Result<Option<u32>> {
    match v {
        toml::Value::Integer(0) => Ok(None),
        toml::Value::Integer(n) if *n > 0 => Ok(Some(*n as u32)),
        toml::Value::String(s) if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "oo") => Ok(None),
        _ => bail!("bad Coxeter matrix entry {v}"),
    }
}

fn scalar_entry<F: Scalar>(v: &toml::Value) -> Result<F> {
    match v {
        toml::Value::Integer(n) => Ok(F::from_i64(*n)),
        toml::Value::String(s) => parse_scalar(s).ok_or_else(|| anyhow!("cannot read {s:?} in {}", F::field_name())),
        _ => bail!("bad scalar {v}"),
    }
}

impl MatrixFile {
    pub fn load(path: &Path) -> Result<MatrixFile> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: MatrixFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if file.entries.len() != file.rank || file.entries.iter().any(|r| r.len() != file.rank) {
            bail!("entries must be a {0}x{0} matrix", file.rank);
        }
        Ok(file)
    }

    pub fn coxeter_matrix(&self) -> Result<CoxeterMatrix> {
        let e = self.entries.iter().map(|r| r.iter().map(order_entry).collect()).collect::<Result<Vec<Vec<_>>>>()?;
        Ok(CoxeterMatrix::new(e)?)
    }

    pub fn field(&self) -> Result<FieldKind> {
        match &self.field {
            Some(f) => FieldKind::parse(f),
            None if self.mode == Mode::Geometric => FieldKind::from_radicand(self.coxeter_matrix()?.geometric_radicand()?),
            None => Ok(FieldKind::Rational),
        }
    }

    pub fn realization<F: Scalar>(&self) -> Result<RealizationChoice<F>> {
        let rows = |name: &str, m: &Option<Vec<Vec<toml::Value>>>| -> Result<Vec<Vec<F>>> {
            let m = m.as_ref().ok_or_else(|| anyhow!("mode = \"explicit\" needs `{name}`"))?;
            m.iter().map(|r| r.iter().map(scalar_entry).collect()).collect()
        };
        Ok(match self.mode {
            Mode::Geometric => RealizationChoice::Geometric,
            Mode::Cartan => RealizationChoice::Cartan(self.cartan.clone().ok_or_else(|| anyhow!("mode = \"cartan\" needs `cartan`"))?),
            Mode::Explicit => RealizationChoice::Explicit {
                roots: rows("alpha", &self.alpha)?,
                coroots: rows("alphavee", &self.alphavee)?,
                rho: self.rho.as_ref().map(|r| r.iter().map(scalar_entry).collect()).transpose()?,
            },
        })
    }
}

/// Where the group comes from.
#[derive(Clone, Debug)]
pub enum GroupSource {
    Preset(Preset),
    File(Box<MatrixFile>),
}

impl GroupSource {
    pub fn name(&self) -> String {
        match self {
            GroupSource::Preset(p) => p.name(),
            GroupSource::File(f) => f.coxeter_matrix().map(|m| m.to_string()).unwrap_or_default(),
        }
    }

    pub fn field(&self) -> Result<FieldKind> {
        match self {
            GroupSource::Preset(p) => FieldKind::from_radicand(p.radicand()),
            GroupSource::File(f) => f.field(),
        }
    }
}

/// A word as comma separated generator indices; `e` or the empty string is the
/// identity.
pub fn parse_word(text: &str, rank: usize) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            let s: usize = x.trim().parse().with_context(|| format!("bad letter {x:?} in word {text:?}"))?;
            if s >= rank {
                bail!("letter {s} out of range for rank {rank}");
            }
            Ok(s)
        })
        .collect()
}

pub fn format_word(w: &[usize]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_zeta_grid<F: Scalar>(text: &str) -> Result<Vec<F>> {
    text.split(',')
        .map(|z| {
            let v: F = parse_scalar(z).ok_or_else(|| anyhow!("bad zeta value {z:?}"))?;
            if v.sign() < 0 {
                bail!("zeta values must be nonnegative, got {z}");
            }
            Ok(v)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Coxeter,
    Hecke,
    Soergel,
    Hodge,
    Sweep,
    Rouquier,
}

pub const ALL_CHECKS: [Check; 6] = [Check::Coxeter, Check::Hecke, Check::Soergel, Check::Hodge, Check::Sweep, Check::Rouquier];

pub fn parse_checks(text: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for c in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let check = match c {
            "all" => {
                out.extend(ALL_CHECKS);
                continue;
            }
            "coxeter" => Check::Coxeter,
            "hecke" => Check::Hecke,
            "soergel" => Check::Soergel,
            "hodge" => Check::Hodge,
            "sweep" | "sweeps" => Check::Sweep,
            "rouquier" => Check::Rouquier,
            _ => bail!("unknown check {c:?}"),
        };
        out.push(check);
    }
    out.sort();
    out.dedup();
    Ok(out)
}
