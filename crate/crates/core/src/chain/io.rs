//! JSON serialization of chains.
//!
//! The on-disk format spells every scalar as a string to keep rationals
//! exact: a polynomial is its coefficient list in ascending degree
//! (`["-1/2", "0", "3"]` is `3t^2 - 1/2`, `[]` is zero), a matrix is a list
//! of rows of polynomials, and each map family is a list of `n - 1`
//! matrices. Unknown fields are rejected so that typos fail loudly instead
//! of being ignored.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_rational, Poly, Rational};
use crate::linalg::Matrix;

use super::{ChainError, LinkedChain};

/// A polynomial as coefficient strings, constant term first.
pub type PolyRepr = Vec<String>;
/// A matrix as rows of polynomials.
pub type MatrixRepr = Vec<Vec<PolyRepr>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub r: usize,
    pub m: usize,
    pub n: usize,
    pub s: PolyRepr,
    pub f_fwd: Vec<MatrixRepr>,
    pub f_bwd: Vec<MatrixRepr>,
    pub g_fwd: Vec<MatrixRepr>,
    pub g_bwd: Vec<MatrixRepr>,
    /// Extra rational points to report fiber dimensions at, beyond the
    /// roots of `s`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_points: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ChainIoError {
    #[error("chain file is not valid JSON: {0}")]
    Syntax(String),
    #[error("chain file field {field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Shape(#[from] ChainError),
}

impl ChainFile {
    pub fn from_chain(chain: &LinkedChain, extra_points: &[Rational]) -> ChainFile {
        let family = |maps: &[Matrix<Poly>]| maps.iter().map(matrix_repr).collect();
        ChainFile {
            r: chain.r(),
            m: chain.m(),
            n: chain.n(),
            s: chain.s().to_coeff_strings(),
            f_fwd: family(chain.family(super::Family::FFwd)),
            f_bwd: family(chain.family(super::Family::FBwd)),
            g_fwd: family(chain.family(super::Family::GFwd)),
            g_bwd: family(chain.family(super::Family::GBwd)),
            extra_points: extra_points.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn into_chain(self) -> Result<(LinkedChain, Vec<Rational>), ChainIoError> {
        let s = parse_poly(&self.s, "s")?;
        let family = |name: &str, reprs: &[MatrixRepr]| -> Result<Vec<Matrix<Poly>>, ChainIoError> {
            reprs
                .iter()
                .enumerate()
                .map(|(k, repr)| parse_matrix(repr, &format!("{name}[{k}]")))
                .collect()
        };
        let chain = LinkedChain::new(
            self.r,
            self.m,
            self.n,
            s,
            family("f_fwd", &self.f_fwd)?,
            family("f_bwd", &self.f_bwd)?,
            family("g_fwd", &self.g_fwd)?,
            family("g_bwd", &self.g_bwd)?,
        )?;
        let extra = self
            .extra_points
            .iter()
            .enumerate()
            .map(|(k, txt)| {
                parse_rational(txt).map_err(|e| ChainIoError::Field {
                    field: format!("extra_points[{k}]"),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((chain, extra))
    }
}

fn matrix_repr(m: &Matrix<Poly>) -> MatrixRepr {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_coeff_strings()).collect())
        .collect()
}

fn parse_poly(repr: &[String], field: &str) -> Result<Poly, ChainIoError> {
    Poly::from_coeff_strings(repr).map_err(|e| ChainIoError::Field {
        field: field.to_string(),
        message: e.to_string(),
    })
}

fn parse_matrix(repr: &MatrixRepr, field: &str) -> Result<Matrix<Poly>, ChainIoError> {
    let rows = repr
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, entry)| parse_poly(entry, &format!("{field}[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows).map_err(|_| ChainIoError::Field {
        field: field.to_string(),
        message: "rows have unequal lengths".to_string(),
    })
}

/// Parses a chain plus extra report points from JSON text.
pub fn parse_chain_json(text: &str) -> Result<(LinkedChain, Vec<Rational>), ChainIoError> {
    let file: ChainFile =
        serde_json::from_str(text).map_err(|e| ChainIoError::Syntax(e.to_string()))?;
    file.into_chain()
}

/// Renders a chain as pretty-printed JSON with a trailing newline. The
/// output is deterministic: field order is fixed and scalars are reduced.
pub fn chain_to_json(chain: &LinkedChain, extra_points: &[Rational]) -> String {
    let file = ChainFile::from_chain(chain, extra_points);
    let mut text = serde_json::to_string_pretty(&file).expect("chain serialization cannot fail");
    text.push('\n');
    text
}
