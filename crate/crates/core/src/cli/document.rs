//! JSON documents declaring a basis, named constants and named maps.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Deserialize;

use crate::iet::{Iet, IetError, PiLambda};
use crate::scalar::{parse_rational, Basis, Generator, Scalar, ScalarError};

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid basis: {0}")]
    Basis(#[from] ScalarError),
    #[error("{0}")]
    Invalid(String),
}

impl DocumentError {
    /// Read and syntax problems are usage errors; everything else is a
    /// validation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            DocumentError::Io { .. } | DocumentError::Parse { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Coords(Vec<String>),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstant {
    name: String,
    value: RawScalar,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIet {
    name: String,
    pi: Option<Vec<usize>>,
    lambda: Option<Vec<RawScalar>>,
    cuts: Option<Vec<RawScalar>>,
    trans: Option<Vec<RawScalar>>,
    artificial_zero: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    basis: Option<Vec<String>>,
    #[serde(default)]
    constants: Vec<RawConstant>,
    #[serde(default)]
    iets: Vec<RawIet>,
}

/// A loaded document. Each map keeps its own validation outcome so that one
/// bad definition does not hide the others.
#[derive(Debug)]
pub struct Document {
    pub basis: Arc<Basis>,
    pub constants: Vec<(String, Scalar)>,
    pub iets: Vec<(String, Result<Iet, IetError>)>,
}

impl Document {
    pub fn load(path: &Path, basis_depth: u32) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path).map_err(|e| DocumentError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, basis_depth)
    }

    pub fn parse(text: &str, basis_depth: u32) -> Result<Self, DocumentError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let descriptors = raw.basis.unwrap_or_else(|| vec!["1".to_string()]);
        let mut generators = Vec::with_capacity(descriptors.len());
        for d in &descriptors {
            let g = Generator::parse(d, &generators)?;
            generators.push(g);
        }
        let basis = Basis::with_max_depth(generators, basis_depth)?;

        let mut names = HashSet::new();
        let mut claim = |name: &str| {
            if names.insert(name.to_string()) {
                Ok(())
            } else {
                Err(DocumentError::Invalid(format!("duplicate name {name:?}")))
            }
        };
        let mut doc = Document {
            basis,
            constants: Vec::new(),
            iets: Vec::new(),
        };
        for c in raw.constants {
            claim(&c.name)?;
            let value = doc
                .scalar(&c.value)
                .map_err(|e| DocumentError::Invalid(format!("constant {:?}: {e}", c.name)))?;
            doc.constants.push((c.name, value));
        }
        for m in raw.iets {
            claim(&m.name)?;
            let built = doc
                .build(&m)
                .map_err(|e| DocumentError::Invalid(format!("map {:?}: {e}", m.name)))?;
            doc.iets.push((m.name, built));
        }
        Ok(doc)
    }

    fn scalar(&self, raw: &RawScalar) -> Result<Scalar, String> {
        match raw {
            RawScalar::Coords(parts) => {
                if parts.len() > self.basis.len() {
                    return Err(format!(
                        "{} coordinates given for a basis of size {}",
                        parts.len(),
                        self.basis.len()
                    ));
                }
                let mut coords = Vec::with_capacity(self.basis.len());
                for p in parts {
                    coords.push(parse_rational(p).ok_or_else(|| format!("malformed rational {p:?}"))?);
                }
                coords.resize(self.basis.len(), BigRational::from_integer(0.into()));
                self.basis.scalar(coords).map_err(|e| e.to_string())
            }
            RawScalar::Text(t) => {
                if let Some((_, v)) = self.constants.iter().find(|(n, _)| n == t) {
                    return Ok(v.clone());
                }
                parse_rational(t)
                    .map(|q| self.basis.rational_scalar(q))
                    .ok_or_else(|| format!("{t:?} is neither a rational nor a known constant"))
            }
        }
    }

    fn scalars(&self, raw: &[RawScalar]) -> Result<Vec<Scalar>, String> {
        raw.iter().map(|r| self.scalar(r)).collect()
    }

    /// Scalar syntax problems abort loading; map invariants are recorded.
    fn build(&self, raw: &RawIet) -> Result<Result<Iet, IetError>, String> {
        match (&raw.pi, &raw.lambda, &raw.cuts, &raw.trans) {
            (Some(pi), Some(lambda), None, None) => {
                if raw.artificial_zero.is_some() {
                    return Err("artificial_zero applies to the cuts form only".into());
                }
                let lambda = self.scalars(lambda)?;
                let data = PiLambda { pi: pi.clone(), lambda };
                Ok(Iet::from_pi_lambda(&data))
            }
            (None, None, Some(cuts), Some(trans)) => {
                let cuts = self.scalars(cuts)?;
                let trans = self.scalars(trans)?;
                Ok(Iet::from_cuts(cuts, trans).and_then(|f| match raw.artificial_zero {
                    Some(flag) if flag != f.artificial_zero() => Err(IetError::ArtificialFlag {
                        flag,
                        actual: if f.artificial_zero() {
                            "continuous"
                        } else {
                            "discontinuous"
                        },
                    }),
                    _ => Ok(f),
                }))
            }
            _ => Err("give either pi and lambda, or cuts and trans".into()),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Result<Iet, IetError>> {
        self.iets.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn descriptors(&self) -> Vec<String> {
        self.basis.generators().iter().map(ToString::to_string).collect()
    }
}
