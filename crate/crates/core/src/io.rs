//! JSON file formats for states, operators and bases.
//!
//! Complex numbers are always `[re, im]` pairs. Every document carries a
//! `format` field naming its schema and version.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bases::BasisSet;
use crate::error::{Error, Result};
use crate::tensor_core::{CMatrix, GlobalOperator, LocalOperatorList, Mat2, PureState, C64};

pub const STATE_FORMAT: &str = "spinform.state/1";
pub const OPERATOR_FORMAT: &str = "spinform.operator/1";
pub const BASIS_FORMAT: &str = "spinform.basis/1";

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format: String,
    pub n: usize,
    pub amplitudes: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OperatorBody {
    Global { n: usize, matrix: Vec<Vec<Pair>> },
    Local { n: usize, ops: Vec<[[Pair; 2]; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub format: String,
    #[serde(flatten)]
    pub body: OperatorBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisFile {
    pub format: String,
    pub n: usize,
    pub ordering: String,
    pub vectors: Vec<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// An operator as read from disk: either dense or a list of local factors.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Global(GlobalOperator),
    Local(LocalOperatorList),
}

impl Operator {
    pub fn n(&self) -> usize {
        match self {
            Operator::Global(m) => m.n(),
            Operator::Local(l) => l.n(),
        }
    }

    pub fn to_global(&self) -> Result<GlobalOperator> {
        match self {
            Operator::Global(m) => Ok(m.clone()),
            Operator::Local(l) => crate::tensor_core::expand_local(l),
        }
    }
}

fn pair(c: &C64) -> Pair {
    [c.re, c.im]
}

fn complex(p: &Pair) -> Result<C64> {
    if !p[0].is_finite() || !p[1].is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(C64::new(p[0], p[1]))
}

fn check_format(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Format(format!(
            "unsupported format {found:?}, expected {expected:?}"
        )));
    }
    Ok(())
}

fn vector(n: usize, pairs: &[Pair]) -> Result<PureState> {
    let amp = pairs.iter().map(complex).collect::<Result<Vec<_>>>()?;
    PureState::new(n, amp)
}

impl StateFile {
    pub fn from_state(psi: &PureState) -> Self {
        Self {
            format: STATE_FORMAT.to_string(),
            n: psi.n(),
            amplitudes: psi.amplitudes().iter().map(pair).collect(),
            label: None,
            seed: None,
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        check_format(&self.format, STATE_FORMAT)?;
        vector(self.n, &self.amplitudes)
    }
}

impl OperatorFile {
    pub fn from_operator(op: &Operator) -> Self {
        let body = match op {
            Operator::Global(m) => OperatorBody::Global {
                n: m.n(),
                matrix: m
                    .matrix()
                    .row_iter()
                    .map(|r| r.iter().map(pair).collect())
                    .collect(),
            },
            Operator::Local(l) => OperatorBody::Local {
                n: l.n(),
                ops: l
                    .ops()
                    .iter()
                    .map(|a| {
                        [
                            [pair(&a[(0, 0)]), pair(&a[(0, 1)])],
                            [pair(&a[(1, 0)]), pair(&a[(1, 1)])],
                        ]
                    })
                    .collect(),
            },
        };
        Self {
            format: OPERATOR_FORMAT.to_string(),
            body,
            seed: None,
        }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        check_format(&self.format, OPERATOR_FORMAT)?;
        match &self.body {
            OperatorBody::Global { n, matrix } => {
                let dim = matrix.len();
                if let Some(row) = matrix.iter().find(|r| r.len() != dim) {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: row.len(),
                    });
                }
                let mut entries = Vec::with_capacity(dim * dim);
                for row in matrix {
                    for p in row {
                        entries.push(complex(p)?);
                    }
                }
                let m = CMatrix::from_row_slice(dim, dim, &entries);
                Ok(Operator::Global(GlobalOperator::new(*n, m)?))
            }
            OperatorBody::Local { n, ops } => {
                if ops.len() != *n {
                    return Err(Error::DimensionMismatch {
                        expected: *n,
                        actual: ops.len(),
                    });
                }
                let mats = ops
                    .iter()
                    .map(|a| {
                        Ok(Mat2::new(
                            complex(&a[0][0])?,
                            complex(&a[0][1])?,
                            complex(&a[1][0])?,
                            complex(&a[1][1])?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Operator::Local(LocalOperatorList::new(mats)?))
            }
        }
    }
}

impl BasisFile {
    pub fn from_basis(b: &BasisSet) -> Self {
        Self {
            format: BASIS_FORMAT.to_string(),
            n: b.n(),
            ordering: b.ordering().to_string(),
            vectors: b
                .vectors()
                .iter()
                .map(|v| v.amplitudes().iter().map(pair).collect())
                .collect(),
            seed: None,
        }
    }

    pub fn to_basis(&self) -> Result<BasisSet> {
        check_format(&self.format, BASIS_FORMAT)?;
        let vectors = self
            .vectors
            .iter()
            .map(|v| vector(self.n, v))
            .collect::<Result<Vec<_>>>()?;
        BasisSet::new(self.n, vectors, self.ordering.clone())
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types always serialize")
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn parse_state(text: &str) -> Result<PureState> {
    parse::<StateFile>(text)?.to_state()
}

pub fn render_state(file: &StateFile) -> String {
    render(file)
}

pub fn read_state(path: &Path) -> Result<PureState> {
    parse_state(&read_text(path)?)
}

pub fn parse_operator(text: &str) -> Result<Operator> {
    parse::<OperatorFile>(text)?.to_operator()
}

pub fn render_operator(file: &OperatorFile) -> String {
    render(file)
}

pub fn read_operator(path: &Path) -> Result<Operator> {
    parse_operator(&read_text(path)?)
}

pub fn parse_basis(text: &str) -> Result<BasisSet> {
    parse::<BasisFile>(text)?.to_basis()
}

pub fn render_basis(file: &BasisFile) -> String {
    render(file)
}

pub fn read_basis(path: &Path) -> Result<BasisSet> {
    parse_basis(&read_text(path)?)
}
