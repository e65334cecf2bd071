//! The split affine quadrics
//!
//! ```text
//! Q_{2m-1} = Spec Z[x1..xm, y1..ym] / (Σ xi yi - 1)
//! Q_{2m}   = Spec Z[x1..xm, y1..ym, z] / (Σ xi yi - z(1+z))
//! ```
//!
//! Variables are declared in the precedence `xm > … > x1 > ym > … > y1 > z`
//! so that under graded-lex the leading monomial of either relation is
//! `xm·ym`; reduction eliminates `xm·ym` and never touches `z`-only terms.

mod chart;
mod hom;
mod localized;

pub use chart::{chart_un, subscheme_data, ChartCertificate, SubschemeName, SubschemeRecord};
pub use hom::{psi, LocalizingHom, PsiCertificate};
pub use localized::{LocalizedElement, LocalizedJson};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::{PolyError, Polynomial, QuotientElement, RingContext};
use crate::ring::RingElem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadricError {
    #[error("invalid quadric dimension: {0}")]
    InvalidDimension(String),
    #[error("element does not live in the source ring of the homomorphism")]
    ContextMismatch,
    #[error("ring has no variable `z`; localization needs an even quadric")]
    NotEven,
    #[error("unknown subscheme `{0}` (expected E_n, Z_n or X_complement_check)")]
    UnknownSubscheme(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

/// `O(Q_{2m-1})` (odd) or `O(Q_{2m})` (even).
#[derive(Clone, Debug)]
pub struct QuadricRing {
    parity: Parity,
    m: usize,
    ctx: Arc<RingContext>,
}

/// Variable names in precedence order: `xm..x1, ym..y1[, z]`.
pub fn quadric_variable_names(m: usize, with_z: bool) -> Vec<String> {
    let mut names: Vec<String> = (1..=m).rev().map(|i| format!("x{i}")).collect();
    names.extend((1..=m).rev().map(|i| format!("y{i}")));
    if with_z {
        names.push("z".to_string());
    }
    names
}

/// `Σ xi yi - 1` or `Σ xi yi - z - z²` in `ctx`, which must carry the
/// quadric variable names.
fn quadric_relation(ctx: &RingContext, parity: Parity, m: usize) -> Polynomial {
    let mut rel = Polynomial::zero();
    for i in 1..=m {
        let xy = ctx.mul(&ctx.var(&format!("x{i}")).unwrap(), &ctx.var(&format!("y{i}")).unwrap());
        rel = ctx.add(&rel, &xy);
    }
    let tail = match parity {
        Parity::Odd => ctx.one(),
        Parity::Even => {
            let z = ctx.var("z").unwrap();
            ctx.add(&z, &ctx.mul(&z, &z))
        }
    };
    ctx.sub(&rel, &tail)
}

/// Builds the coordinate ring of `Q_{2m-1}` (odd, `m ≥ 1`) or `Q_{2m}`
/// (even, `m ≥ 0`; `Q_0` is the two-point scheme `z(1+z) = 0`).
pub fn make_quadric(parity: Parity, m: usize) -> Result<QuadricRing, QuadricError> {
    if parity == Parity::Odd && m == 0 {
        return Err(QuadricError::InvalidDimension("odd quadrics need m >= 1".into()));
    }
    let names = quadric_variable_names(m, parity == Parity::Even);
    let free = RingContext::free(&names)?;
    let rel = quadric_relation(&free, parity, m);
    let ctx = free.with_relation(rel)?;
    Ok(QuadricRing {
        parity,
        m,
        ctx: Arc::new(ctx),
    })
}

impl QuadricRing {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension index: `2m - 1` or `2m`.
    pub fn dimension(&self) -> usize {
        match self.parity {
            Parity::Odd => 2 * self.m - 1,
            Parity::Even => 2 * self.m,
        }
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    /// Ambient polynomial ring with the same variables and no relation.
    pub fn free_context(&self) -> Arc<RingContext> {
        Arc::new(self.ctx.without_relation())
    }

    pub fn relation(&self) -> &Polynomial {
        self.ctx.relation().expect("quadric rings carry a relation")
    }

    pub fn x(&self, i: usize) -> QuotientElement {
        QuotientElement::var(&self.ctx, &format!("x{i}")).expect("1 <= i <= m")
    }

    pub fn y(&self, i: usize) -> QuotientElement {
        QuotientElement::var(&self.ctx, &format!("y{i}")).expect("1 <= i <= m")
    }

    pub fn z(&self) -> Option<QuotientElement> {
        QuotientElement::var(&self.ctx, "z").ok()
    }

    /// `(1,0,…,0, 1,0,…,0)` on `Q_{2m-1}`; the point "0" on `Q_{2m}`.
    pub fn base_point(&self) -> BasePoint {
        let mut coords = vec![BigInt::from(0); self.ctx.nvars()];
        if self.parity == Parity::Odd {
            coords[self.ctx.var_index("x1").unwrap()] = BigInt::from(1);
            coords[self.ctx.var_index("y1").unwrap()] = BigInt::from(1);
        }
        BasePoint { coords }
    }
}

impl fmt::Display for QuadricRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z[{}]/({})",
            self.ctx.names().join(","),
            self.ctx.display(self.relation())
        )
    }
}

/// An integer point, one coordinate per context variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    pub coords: Vec<BigInt>,
}

impl BasePoint {
    /// Value of `p` at this point.
    pub fn eval(&self, ctx: &RingContext, p: &Polynomial) -> BigInt {
        ctx.eval(p, &self.coords, &BigInt::from(1))
    }

    pub fn satisfies(&self, ctx: &RingContext) -> bool {
        match ctx.relation() {
            Some(rel) => RingElem::is_zero(&self.eval(ctx, rel)),
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_one_is_the_hyperbola() {
        let q = make_quadric(Parity::Odd, 1).unwrap();
        assert_eq!(q.ctx.names(), &["x1", "y1"]);
        assert_eq!(q.ctx.display(q.relation()).to_string(), "x1*y1 - 1");
        assert_eq!(q.dimension(), 1);
    }

    #[test]
    fn even_two_relation() {
        let q = make_quadric(Parity::Even, 2).unwrap();
        assert_eq!(q.ctx.names(), &["x2", "x1", "y2", "y1", "z"]);
        assert_eq!(q.ctx.relation_lead().unwrap().exponents(), &[1, 0, 1, 0, 0]);
        let expected = q.ctx.parse("x1*y1 + x2*y2 - z - z^2").unwrap();
        assert_eq!(q.relation(), &expected);
    }

    #[test]
    fn even_zero_is_two_points() {
        let q = make_quadric(Parity::Even, 0).unwrap();
        assert_eq!(q.ctx.names(), &["z"]);
        assert_eq!(q.ctx.display(q.relation()).to_string(), "-z^2 - z");
        // both points 0 and -1 lie on it
        for v in [0, -1] {
            let p = BasePoint {
                coords: vec![BigInt::from(v)],
            };
            assert!(p.satisfies(&q.ctx));
        }
        let off = BasePoint {
            coords: vec![BigInt::from(1)],
        };
        assert!(!off.satisfies(&q.ctx));
    }

    #[test]
    fn invalid_dimensions() {
        assert!(matches!(
            make_quadric(Parity::Odd, 0),
            Err(QuadricError::InvalidDimension(_))
        ));
    }

    #[test]
    fn relation_reduces_to_zero_in_own_context() {
        for m in 1..=4 {
            for parity in [Parity::Odd, Parity::Even] {
                let q = make_quadric(parity, m).unwrap();
                assert!(q.ctx.reduce(q.relation()).is_zero());
                assert_eq!(q.ctx.nvars(), if parity == Parity::Odd { 2 * m } else { 2 * m + 1 });
            }
        }
    }

    #[test]
    fn base_points_lie_on_quadrics() {
        for m in 1..=6 {
            let odd = make_quadric(Parity::Odd, m).unwrap();
            assert!(odd.base_point().satisfies(&odd.ctx));
            let even = make_quadric(Parity::Even, m).unwrap();
            assert!(even.base_point().satisfies(&even.ctx));
        }
    }
}
