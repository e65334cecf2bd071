use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::SuslinError;
use crate::linalg::RingMatrix;
use crate::poly::{same_context, PolyJson, QuotientElement, RingContext};
use crate::ring::RingElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Row,
    Col,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// `line_i += scalar · line_j`.
    AddMultiple,
    /// `line_i ← line_j`, `line_j ← −line_i`. Determinant one; the scalar
    /// is unused and stored as zero.
    SwapWithSign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryStep {
    pub side: Side,
    pub kind: StepKind,
    pub i: usize,
    pub j: usize,
    pub scalar: QuotientElement,
}

/// Replayable list of elementary row and column operations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ElementaryCertificate {
    pub steps: Vec<ElementaryStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub side: Side,
    pub kind: StepKind,
    pub i: usize,
    pub j: usize,
    pub scalar: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub steps: Vec<StepJson>,
}

/// Applies one step in place. Indices and the scalar's ring are checked.
pub(crate) fn apply_step(m: &mut RingMatrix, step: &ElementaryStep) -> Result<(), SuslinError> {
    let bound = match step.side {
        Side::Row => m.rows(),
        Side::Col => m.cols(),
    };
    if step.i >= bound || step.j >= bound || step.i == step.j {
        return Err(SuslinError::InvalidCertificate(format!(
            "step indices ({}, {}) invalid for dimension {bound}",
            step.i, step.j
        )));
    }
    if !same_context(step.scalar.context(), m.get(0, 0).context()) {
        return Err(SuslinError::InvalidCertificate(
            "scalar lives in a different ring".into(),
        ));
    }
    let len = match step.side {
        Side::Row => m.cols(),
        Side::Col => m.rows(),
    };
    let at = |k: usize, line: usize| match step.side {
        Side::Row => (line, k),
        Side::Col => (k, line),
    };
    match step.kind {
        StepKind::AddMultiple => {
            if step.scalar.is_zero() {
                return Ok(());
            }
            for k in 0..len {
                let (ri, ci) = at(k, step.i);
                let (rj, cj) = at(k, step.j);
                let src = m.get(rj, cj);
                if src.is_zero() {
                    continue;
                }
                let v = m.get(ri, ci).plus(&step.scalar.times(src));
                m.set(ri, ci, v);
            }
        }
        StepKind::SwapWithSign => {
            for k in 0..len {
                let (ri, ci) = at(k, step.i);
                let (rj, cj) = at(k, step.j);
                let old_i = m.get(ri, ci).clone();
                let old_j = m.get(rj, cj).clone();
                m.set(ri, ci, old_j);
                m.set(rj, cj, old_i.negated());
            }
        }
    }
    Ok(())
}

impl ElementaryCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step, in order, to a copy of `m`.
    pub fn replay(&self, m: &RingMatrix) -> Result<RingMatrix, SuslinError> {
        let mut out = m.clone();
        for step in &self.steps {
            apply_step(&mut out, step)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    side: s.side,
                    kind: s.kind,
                    i: s.i,
                    j: s.j,
                    scalar: s.scalar.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(ctx: &Arc<RingContext>, j: &CertificateJson) -> Result<Self, SuslinError> {
        let steps = j
            .steps
            .iter()
            .map(|s| {
                Ok(ElementaryStep {
                    side: s.side,
                    kind: s.kind,
                    i: s.i,
                    j: s.j,
                    scalar: QuotientElement::from_json(ctx, &s.scalar)?,
                })
            })
            .collect::<Result<Vec<_>, SuslinError>>()?;
        Ok(ElementaryCertificate { steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn setup() -> (Arc<RingContext>, RingMatrix) {
        let ctx = Arc::new(RingContext::free(&["a", "b"]).unwrap());
        let e = |s: &str| QuotientElement::parse(&ctx, s).unwrap();
        let m = Matrix::new(2, 2, vec![e("a"), e("b"), e("1"), e("0")]).unwrap();
        (ctx.clone(), m)
    }

    #[test]
    fn add_multiple_and_swap() {
        let (ctx, m) = setup();
        let e = |s: &str| QuotientElement::parse(&ctx, s).unwrap();
        let cert = ElementaryCertificate {
            steps: vec![
                ElementaryStep {
                    side: Side::Row,
                    kind: StepKind::AddMultiple,
                    i: 0,
                    j: 1,
                    scalar: e("-a"),
                },
                ElementaryStep {
                    side: Side::Col,
                    kind: StepKind::SwapWithSign,
                    i: 0,
                    j: 1,
                    scalar: e("0"),
                },
            ],
        };
        let out = cert.replay(&m).unwrap();
        // rows: [0, b], [1, 0]; then columns swapped with the old column 0 negated
        let expected = Matrix::new(2, 2, vec![e("b"), e("0"), e("0"), e("-1")]).unwrap();
        assert_eq!(out, expected);
        assert_eq!(out.det().unwrap(), m.det().unwrap());
    }

    #[test]
    fn invalid_steps_are_rejected() {
        let (ctx, m) = setup();
        let bad = ElementaryCertificate {
            steps: vec![ElementaryStep {
                side: Side::Row,
                kind: StepKind::AddMultiple,
                i: 1,
                j: 1,
                scalar: QuotientElement::one(&ctx),
            }],
        };
        assert!(matches!(bad.replay(&m), Err(SuslinError::InvalidCertificate(_))));
    }
}
