//! Suslin's matrices attached to a unimodular pair `(x, y)`.
//!
//! `α1 = (x1)` and
//!
//! ```text
//! α_{n+1}((x1, x'), (y1, y')) = [  x1·I          α_n(x', y') ]
//!                               [ −α_n(y', x')ᵀ   y1·I       ]
//! ```
//!
//! so that `α_n(x, y) · α_n(y, x)ᵀ = (Σ xi yi) · I`.

mod beta;
mod certificate;
mod hopf;

pub use beta::{alpha_on_quadric, check_beta, suslin_beta, suslin_beta_with, SearchLimits};
pub use certificate::{CertificateJson, ElementaryCertificate, ElementaryStep, Side, StepJson, StepKind};
pub use hopf::{hopf_nu_check, HopfCertificate, HopfSpecialization};

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{Matrix, RingMatrix};
use crate::poly::{PolyError, QuotientElement, RingContext};
use crate::quadric::{make_quadric, Parity, QuadricError};
use crate::ring::RingElem;

pub const MAX_ALPHA_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuslinError {
    #[error("n = {n} outside the supported range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
    #[error("alpha_{n} fails its defining identity at entry ({row}, {col}): {detail}")]
    VerificationFailed {
        n: usize,
        row: usize,
        col: usize,
        detail: String,
    },
    #[error("no elementary reduction of alpha_{n} found: {detail}")]
    ReductionNotFound { n: usize, detail: String },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
}

fn check_range(n: usize, min: usize, max: usize) -> Result<(), SuslinError> {
    if (min..=max).contains(&n) {
        Ok(())
    } else {
        Err(SuslinError::OutOfRange { n, min, max })
    }
}

/// The block recursion over arbitrary ring elements.
pub fn alpha_of(xs: &[QuotientElement], ys: &[QuotientElement]) -> RingMatrix {
    assert!(!xs.is_empty() && xs.len() == ys.len());
    if xs.len() == 1 {
        return Matrix::new(1, 1, vec![xs[0].clone()]).unwrap();
    }
    let upper = alpha_of(&xs[1..], &ys[1..]);
    let lower = alpha_of(&ys[1..], &xs[1..]).transpose().neg();
    let h = upper.rows();
    let zero = xs[0].zero_like();
    Matrix::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
        (true, true) => {
            if i == j {
                xs[0].clone()
            } else {
                zero.clone()
            }
        }
        (true, false) => upper.get(i, j - h).clone(),
        (false, true) => lower.get(i - h, j).clone(),
        (false, false) => {
            if i == j {
                ys[0].clone()
            } else {
                zero.clone()
            }
        }
    })
}

/// `(x1..xn, y1..yn)` as elements of `ctx`, which must carry those names.
fn unimodular_vectors(ctx: &Arc<RingContext>, n: usize) -> (Vec<QuotientElement>, Vec<QuotientElement>) {
    let v = |p: char, i: usize| QuotientElement::var(ctx, &format!("{p}{i}")).unwrap();
    (
        (1..=n).map(|i| v('x', i)).collect(),
        (1..=n).map(|i| v('y', i)).collect(),
    )
}

/// The free ring `Z[x1..xn, y1..yn]` in the quadric variable order.
pub fn free_pair_ring(n: usize) -> Result<Arc<RingContext>, SuslinError> {
    check_range(n, 1, usize::MAX)?;
    Ok(make_quadric(Parity::Odd, n)?.free_context())
}

/// `αn` with entries in `ctx` (free ring or `O(Q_{2n-1})`).
pub fn alpha_in(ctx: &Arc<RingContext>, n: usize) -> Result<RingMatrix, SuslinError> {
    check_range(n, 1, MAX_ALPHA_N)?;
    let (xs, ys) = unimodular_vectors(ctx, n);
    Ok(alpha_of(&xs, &ys))
}

/// `αn(x, y)` over the free ring, verified against its defining identity.
pub fn suslin_alpha(n: usize) -> Result<RingMatrix, SuslinError> {
    check_range(n, 1, MAX_ALPHA_N)?;
    let ctx = free_pair_ring(n)?;
    let alpha = alpha_in(&ctx, n)?;
    check_identity(&ctx, n, &alpha)?;
    Ok(alpha)
}

fn check_identity(ctx: &Arc<RingContext>, n: usize, alpha: &RingMatrix) -> Result<(), SuslinError> {
    let (xs, ys) = unimodular_vectors(ctx, n);
    let swapped = alpha_of(&ys, &xs);
    let product = alpha.mul(&swapped.transpose())?;
    let s = sum_xy(&xs, &ys);
    let zero = s.zero_like();
    for i in 0..product.rows() {
        for j in 0..product.cols() {
            let expected = if i == j { &s } else { &zero };
            if product.get(i, j) != expected {
                return Err(SuslinError::VerificationFailed {
                    n,
                    row: i,
                    col: j,
                    detail: format!("got {}, expected {}", product.get(i, j), expected),
                });
            }
        }
    }
    Ok(())
}

fn sum_xy(xs: &[QuotientElement], ys: &[QuotientElement]) -> QuotientElement {
    xs.iter()
        .zip(ys)
        .fold(xs[0].zero_like(), |acc, (x, y)| acc.plus(&x.times(y)))
}

#[derive(Clone, Debug)]
pub struct SuslinCertificate {
    pub n: usize,
    /// `Σ xi yi` in the free ring.
    pub pairing: QuotientElement,
    pub identity_holds: bool,
    /// `det αn`, for `2 ≤ n ≤ 4`.
    pub det: Option<QuotientElement>,
    /// `(Σ xi yi)^(2^(n-2))`, for `2 ≤ n ≤ 4`.
    pub expected_det: Option<QuotientElement>,
}

impl SuslinCertificate {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.det == self.expected_det
    }
}

/// Checks `αn(x,y)·αn(y,x)ᵀ = (Σ xi yi)·I` for `1 ≤ n ≤ 5` and
/// `det αn = (Σ xi yi)^(2^(n-2))` for `2 ≤ n ≤ 4`.
pub fn verify_suslin(n: usize) -> Result<SuslinCertificate, SuslinError> {
    let alpha = suslin_alpha(n)?;
    let ctx = alpha.get(0, 0).context().clone();
    let (xs, ys) = unimodular_vectors(&ctx, n);
    let pairing = sum_xy(&xs, &ys);
    let (det, expected_det) = if (2..=4).contains(&n) {
        let det = alpha.det()?;
        let expected = pairing.pow(1 << (n - 2));
        if det != expected {
            return Err(SuslinError::VerificationFailed {
                n,
                row: 0,
                col: 0,
                detail: format!("determinant {det} differs from {expected}"),
            });
        }
        (Some(det), Some(expected))
    } else {
        (None, None)
    };
    Ok(SuslinCertificate {
        n,
        pairing,
        identity_holds: true,
        det,
        expected_det,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_matrix(ctx: &Arc<RingContext>, n: usize, src: &[&str]) -> RingMatrix {
        Matrix::new(
            n,
            n,
            src.iter().map(|s| QuotientElement::parse(ctx, s).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn alpha_small_cases() {
        let a1 = suslin_alpha(1).unwrap();
        assert_eq!(a1.to_string(), "[x1]\n");
        let a2 = suslin_alpha(2).unwrap();
        let ctx = a2.get(0, 0).context().clone();
        assert_eq!(a2, parse_matrix(&ctx, 2, &["x1", "x2", "-y2", "y1"]));
    }

    #[test]
    fn alpha_three_matches_hand_expansion() {
        let a3 = suslin_alpha(3).unwrap();
        let ctx = a3.get(0, 0).context().clone();
        let expected = parse_matrix(
            &ctx,
            4,
            &[
                "x1", "0", "x2", "x3", //
                "0", "x1", "-y3", "y2", //
                "-y2", "x3", "y1", "0", //
                "-y3", "-x2", "0", "y1",
            ],
        );
        assert_eq!(a3, expected);
    }

    #[test]
    fn identities_and_determinants() {
        for n in 1..=4 {
            let cert = verify_suslin(n).unwrap();
            assert!(cert.holds(), "n={n}");
        }
        let c2 = verify_suslin(2).unwrap();
        assert_eq!(c2.det.unwrap().to_string(), "x2*y2 + x1*y1");
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(suslin_alpha(0), Err(SuslinError::OutOfRange { .. })));
        assert!(matches!(suslin_alpha(6), Err(SuslinError::OutOfRange { .. })));
    }

    #[test]
    fn broken_matrix_is_reported_with_entry() {
        let ctx = free_pair_ring(2).unwrap();
        let mut a = alpha_in(&ctx, 2).unwrap();
        a.set(1, 0, QuotientElement::parse(&ctx, "y2").unwrap());
        match check_identity(&ctx, 2, &a) {
            Err(SuslinError::VerificationFailed { row, col, .. }) => {
                assert_eq!((row, col), (1, 0));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
