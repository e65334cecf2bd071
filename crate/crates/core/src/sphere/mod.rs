//! A rewriting calculus on pointed motivic-space expressions.
//!
//! Terms are built from `pt`, `S1`, `Gm`, `P1`, smash products, the
//! quadrics `Qodd(m)` / `Qeven(m)` and the open pieces `X(n)`. Every rule
//! preserves a formal class in `ℤ[s, t]`; for sphere terms that class is the
//! monomial `s^i t^j` of the bidegree `(i, j)`.

mod derive;
mod rules;
mod term;

pub use derive::{derive_contractible, derive_even, DerivationTrace, TraceJson, TraceStep, TraceStepJson};
pub use rules::{names, IntPat, Pat, Rule, RuleSet};
pub use term::{bidegree, parse_term, ClassPoly, Term};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not a sphere term: {0}")]
    NonSphereTerm(String),
    #[error("rule {name} rejected: {detail}")]
    UnsoundRule { name: String, detail: String },
    #[error("trace replay failed at step {step}: {detail}")]
    Replay { step: usize, detail: String },
    #[error("{0}")]
    InvalidArgument(String),
}

/// Whether `S^i_s ∧ Gm^j` has a smooth affine model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SmoothModelVerdict {
    SmoothModel { witness: String },
    NotSmooth,
    OpenCase,
}

impl SmoothModelVerdict {
    pub fn witness(&self) -> Option<Term> {
        match self {
            SmoothModelVerdict::SmoothModel { witness } => parse_term(witness).ok(),
            _ => None,
        }
    }

    pub fn reason(&self, i: u32, j: u32) -> String {
        match self {
            SmoothModelVerdict::SmoothModel { witness } if i == j => {
                format!("{witness} is A1-equivalent to P1^{i}")
            }
            SmoothModelVerdict::SmoothModel { witness } => {
                format!("{witness} is A1-equivalent to A^{j} minus the origin")
            }
            SmoothModelVerdict::NotSmooth => {
                "i > j: spheres with more simplicial than Gm weight are not smooth schemes".into()
            }
            SmoothModelVerdict::OpenCase => "i < j - 1: no smooth model is known".into(),
        }
    }
}

impl fmt::Display for SmoothModelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothModelVerdict::SmoothModel { witness } => write!(f, "SmoothModel({witness})"),
            SmoothModelVerdict::NotSmooth => write!(f, "NotSmooth"),
            SmoothModelVerdict::OpenCase => write!(f, "OpenCase"),
        }
    }
}

pub fn classify_smooth_model(i: u32, j: u32) -> SmoothModelVerdict {
    if i > j {
        SmoothModelVerdict::NotSmooth
    } else if i == j {
        SmoothModelVerdict::SmoothModel {
            witness: Term::QuadEven(i).to_string(),
        }
    } else if i + 1 == j {
        SmoothModelVerdict::SmoothModel {
            witness: Term::QuadOdd(j).to_string(),
        }
    } else {
        SmoothModelVerdict::OpenCase
    }
}

/// Sphere terms are equivalent exactly when their bidegrees agree.
pub fn equivalent(a: &Term, b: &Term) -> Result<bool, SphereError> {
    Ok(bidegree(a)? == bidegree(b)?)
}

/// `S1^i /\ Gm^j`, with `Qeven(0)` standing for `S^0`.
pub fn sphere_normal_form(t: &Term) -> Result<Term, SphereError> {
    Ok(match bidegree(t)? {
        (0, 0) => Term::QuadEven(0),
        (i, 0) => Term::power(Term::S1, i),
        (0, j) => Term::power(Term::Gm, j),
        (i, j) => Term::smash(Term::power(Term::S1, i), Term::power(Term::Gm, j)),
    })
}
