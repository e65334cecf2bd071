//! JSON encoding of polynomials and matrices.
//!
//! `{ "vars": [..], "terms": [ { "coef": "<decimal>", "exps": [..] } ] }`
//! with terms sorted descending in the context's order; matrices are
//! `{ "rows": r, "cols": c, "entries": [polynomial, ..] }` in row-major order.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, Polynomial, QuotientElement, RingContext};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<PolyJson>,
}

impl RingContext {
    pub fn to_json(&self, p: &Polynomial) -> PolyJson {
        PolyJson {
            vars: self.names().to_vec(),
            terms: p
                .terms()
                .iter()
                .map(|(c, m)| TermJson {
                    coef: c.to_string(),
                    exps: m.exponents().to_vec(),
                })
                .collect(),
        }
    }

    /// Decodes a polynomial whose variable list must match this context
    /// exactly. The result is canonical (not reduced).
    pub fn from_json(&self, j: &PolyJson) -> Result<Polynomial, PolyError> {
        if j.vars.as_slice() != self.names() {
            if let Some(v) = j.vars.iter().find(|v| !self.names().contains(v)) {
                return Err(PolyError::UnknownVariable(v.clone()));
            }
            return Err(PolyError::Json(format!(
                "variable list {:?} does not match context {:?}",
                j.vars,
                self.names()
            )));
        }
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exps.len() != self.nvars() {
                return Err(PolyError::ArityMismatch {
                    expected: self.nvars(),
                    found: t.exps.len(),
                });
            }
            let c: BigInt = t
                .coef
                .parse()
                .map_err(|_| PolyError::Json(format!("bad coefficient {:?}", t.coef)))?;
            terms.push((c, Monomial::new(t.exps.clone())));
        }
        Ok(self.canonical(terms))
    }
}

impl QuotientElement {
    pub fn to_json(&self) -> PolyJson {
        self.context().to_json(self.value())
    }

    pub fn from_json(ctx: &Arc<RingContext>, j: &PolyJson) -> Result<Self, PolyError> {
        Ok(QuotientElement::new(ctx, ctx.from_json(j)?))
    }
}

impl Matrix<QuotientElement> {
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.entries().iter().map(|e| e.to_json()).collect(),
        }
    }

    pub fn from_json(ctx: &Arc<RingContext>, j: &MatrixJson) -> Result<Self, PolyError> {
        let entries = j
            .entries
            .iter()
            .map(|e| QuotientElement::from_json(ctx, e))
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::new(j.rows, j.cols, entries)
    }
}
