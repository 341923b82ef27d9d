//! JSON documents describing a datum: a built-in, a Dirichlet L-function, a
//! gamma specification with coefficient and zero files, or a weighted
//! combination of other documents.
//!
//! ```json
//! {"kind": "combo", "terms": [
//!     {"weight": 1.0,  "spec": {"kind": "builtin", "name": "zeta"}},
//!     {"weight": -1.0, "spec": {"kind": "builtin", "name": "zeta"}}
//! ]}
//! ```
//!
//! Relative file names resolve against the directory of the document.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::coefficients::{CoefficientStream, StreamKind};
use crate::datum::{LDatum, ZeroData};
use crate::error::{Error, Result};
use crate::instances::{
    build_dirichlet, build_from_spec, build_zeta, bundled_zeta_zeros, read_zero_table,
};

pub const MAX_DEPTH: usize = 8;

/// A shift written either as a real number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shift {
    Real(f64),
    Complex([f64; 2]),
}

impl Shift {
    pub fn value(&self) -> Complex64 {
        match *self {
            Shift::Real(x) => Complex64::new(x, 0.0),
            Shift::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComboTerm {
    pub weight: f64,
    pub spec: DatumSpecDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatumSpecDocument {
    /// `name` is "zeta". Without `zero_file` the bundled table is used.
    Builtin {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_max: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zeros_limit: Option<usize>,
    },
    Dirichlet {
        q: u64,
        index: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mirrored: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_max: Option<f64>,
    },
    GammaSpec {
        log_q: f64,
        shifts: Vec<Shift>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeff_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mirrored: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_max: Option<f64>,
    },
    Combo {
        terms: Vec<ComboTerm>,
    },
}

impl DatumSpecDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: DatumSpecDocument =
            serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        doc.check_depth(1)?;
        Ok(doc)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Ok(Self::parse(&text)?.resolved(base))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    fn check_depth(&self, depth: usize) -> Result<()> {
        if let DatumSpecDocument::Combo { terms } = self {
            if depth > MAX_DEPTH {
                return Err(Error::Spec(format!("combo nesting deeper than {MAX_DEPTH}")));
            }
            if terms.is_empty() {
                return Err(Error::Spec("combo without terms".into()));
            }
            for t in terms {
                if !t.weight.is_finite() {
                    return Err(Error::Spec(format!("non-finite weight {}", t.weight)));
                }
                t.spec.check_depth(depth + 1)?;
            }
        }
        Ok(())
    }

    /// Copy with every relative file name joined onto `base`.
    pub fn resolved(&self, base: &Path) -> Self {
        let fix = |p: &Option<PathBuf>| p.as_ref().map(|p| if p.is_relative() { base.join(p) } else { p.clone() });
        match self {
            DatumSpecDocument::Builtin { name, zero_file, t_max, zeros_limit } => DatumSpecDocument::Builtin {
                name: name.clone(),
                zero_file: fix(zero_file),
                t_max: *t_max,
                zeros_limit: *zeros_limit,
            },
            DatumSpecDocument::Dirichlet { q, index, zero_file, mirrored, t_max } => DatumSpecDocument::Dirichlet {
                q: *q,
                index: *index,
                zero_file: fix(zero_file),
                mirrored: *mirrored,
                t_max: *t_max,
            },
            DatumSpecDocument::GammaSpec { log_q, shifts, coeff_file, zero_file, mirrored, t_max } => {
                DatumSpecDocument::GammaSpec {
                    log_q: *log_q,
                    shifts: shifts.clone(),
                    coeff_file: fix(coeff_file),
                    zero_file: fix(zero_file),
                    mirrored: *mirrored,
                    t_max: *t_max,
                }
            }
            DatumSpecDocument::Combo { terms } => DatumSpecDocument::Combo {
                terms: terms
                    .iter()
                    .map(|t| ComboTerm { weight: t.weight, spec: t.spec.resolved(base) })
                    .collect(),
            },
        }
    }

    pub fn build(&self) -> Result<LDatum> {
        match self {
            DatumSpecDocument::Builtin { name, zero_file, t_max, zeros_limit } => {
                if name != "zeta" {
                    return Err(Error::Spec(format!("unknown builtin {name:?}")));
                }
                let mut table = match zero_file {
                    Some(p) => {
                        let t = t_max.ok_or_else(|| Error::Spec("zero_file needs t_max".into()))?;
                        read_zero_table(p, true, t)?
                    }
                    None => bundled_zeta_zeros()?,
                };
                if let Some(n) = zeros_limit {
                    table = table.first(*n);
                }
                build_zeta().with_zero_table(table)
            }
            DatumSpecDocument::Dirichlet { q, index, zero_file, mirrored, t_max } => {
                let d = build_dirichlet(*q, *index)?;
                match zeros(zero_file, *mirrored, *t_max)? {
                    Some(z) => d.with_zero_table(z),
                    None => Ok(d),
                }
            }
            DatumSpecDocument::GammaSpec { log_q, shifts, coeff_file, zero_file, mirrored, t_max } => {
                let (f, f1) = match coeff_file {
                    Some(p) => read_coefficients(p)?,
                    None => (CoefficientStream::zero(StreamKind::F), None),
                };
                let z = zeros(zero_file, *mirrored, *t_max)?.unwrap_or_else(ZeroData::empty);
                let d = build_from_spec(*log_q, shifts.iter().map(Shift::value).collect(), f.clone(), z)?;
                match f1 {
                    // an explicit n = 1 row overrides the archimedean value
                    Some(v) => {
                        let zeros = d.zeros().clone();
                        Ok(LDatum::new(d.f().with_head(v), d.kernel().clone(), zeros)?)
                    }
                    None => Ok(d),
                }
            }
            DatumSpecDocument::Combo { terms } => {
                let built: Vec<(f64, LDatum)> = terms
                    .iter()
                    .map(|t| Ok((t.weight, t.spec.build()?)))
                    .collect::<Result<_>>()?;
                let refs: Vec<(f64, &LDatum)> = built.iter().map(|(w, d)| (*w, d)).collect();
                LDatum::combine(&refs)
            }
        }
    }
}

fn zeros(file: &Option<PathBuf>, mirrored: Option<bool>, t_max: Option<f64>) -> Result<Option<ZeroData>> {
    let mirrored = mirrored.unwrap_or(true);
    match (file, t_max) {
        (Some(p), Some(t)) => Ok(Some(read_zero_table(p, mirrored, t)?)),
        (Some(_), None) => Err(Error::Spec("zero_file needs t_max".into())),
        (None, Some(t)) => Ok(Some(ZeroData::new(Vec::new(), t, mirrored)?)),
        (None, None) => Ok(None),
    }
}

/// Coefficient file: rows `n re [im]`, `#` comments; missing n are zero.
/// Returns the stream (with f(1) = 0) and the n = 1 value if present.
pub fn parse_coefficients(text: &str) -> Result<(CoefficientStream, Option<Complex64>)> {
    let mut rows: Vec<(u64, Complex64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse { line, message: "expected `n re [im]`".into() });
        }
        let n: u64 = fields[0]
            .parse()
            .map_err(|e| Error::Parse { line, message: format!("index {:?}: {e}", fields[0]) })?;
        if n == 0 {
            return Err(Error::Parse { line, message: "index must be >= 1".into() });
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse { line, message: format!("bad number {s:?}") })
        };
        let re = num(fields[1])?;
        let im = if fields.len() == 3 { num(fields[2])? } else { 0.0 };
        rows.push((n, Complex64::new(re, im)));
    }
    let len = rows.iter().map(|r| r.0).max().unwrap_or(0) as usize;
    let mut table = vec![Complex64::new(0.0, 0.0); len];
    let mut head = None;
    for (n, v) in rows {
        if n == 1 {
            head = Some(v);
        } else {
            table[(n - 1) as usize] = v;
        }
    }
    Ok((CoefficientStream::from_table(StreamKind::F, table), head))
}

pub fn read_coefficients(path: &Path) -> Result<(CoefficientStream, Option<Complex64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_coefficients(&text)
}
