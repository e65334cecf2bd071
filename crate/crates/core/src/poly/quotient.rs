use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

use super::{PolyError, Polynomial, RingContext};
use crate::ring::RingElem;

/// An element of `ctx`, stored as the normal form of a representative.
#[derive(Clone, Debug)]
pub struct QuotientElement {
    ctx: Arc<RingContext>,
    value: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn same_context(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Reduces `p` into `ctx`. Fails if `p` was built over a different number of
/// variables.
pub fn normal_form(p: &Polynomial, ctx: &Arc<RingContext>) -> Result<QuotientElement, PolyError> {
    ctx.check_arity(p)?;
    // re-canonicalize: `p` may come from another context with a different order
    let canon = ctx.canonical(p.terms().iter().cloned());
    Ok(QuotientElement {
        ctx: ctx.clone(),
        value: ctx.reduce(&canon),
    })
}

pub fn ring_arith(a: &QuotientElement, b: &QuotientElement, op: ArithOp) -> Result<QuotientElement, PolyError> {
    if !same_context(&a.ctx, &b.ctx) {
        return Err(PolyError::ContextMismatch);
    }
    let ctx = &a.ctx;
    let value = match op {
        ArithOp::Add => ctx.add(&a.value, &b.value),
        ArithOp::Sub => ctx.sub(&a.value, &b.value),
        ArithOp::Mul => ctx.mul_reduced(&a.value, &b.value),
    };
    Ok(QuotientElement {
        ctx: ctx.clone(),
        value,
    })
}

impl QuotientElement {
    /// Wraps `value` after reducing it.
    pub fn new(ctx: &Arc<RingContext>, value: Polynomial) -> Self {
        QuotientElement {
            value: ctx.reduce(&value),
            ctx: ctx.clone(),
        }
    }

    pub fn parse(ctx: &Arc<RingContext>, src: &str) -> Result<Self, PolyError> {
        Ok(Self::new(ctx, ctx.parse(src)?))
    }

    pub fn var(ctx: &Arc<RingContext>, name: &str) -> Result<Self, PolyError> {
        Ok(Self::new(ctx, ctx.var(name)?))
    }

    pub fn constant(ctx: &Arc<RingContext>, c: impl Into<BigInt>) -> Self {
        Self::new(ctx, ctx.constant(c))
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        QuotientElement {
            ctx: ctx.clone(),
            value: Polynomial::zero(),
        }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn value(&self) -> &Polynomial {
        &self.value
    }

    pub fn into_value(self) -> Polynomial {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn pow(&self, e: u32) -> Self {
        QuotientElement {
            ctx: self.ctx.clone(),
            value: self.ctx.pow_reduced(&self.value, e),
        }
    }

    fn checked(&self, rhs: &Self, op: ArithOp) -> Self {
        match ring_arith(self, rhs, op) {
            Ok(v) => v,
            Err(_) => panic!("ring operation on elements of different contexts"),
        }
    }
}

impl PartialEq for QuotientElement {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.value == other.value
    }
}

impl Eq for QuotientElement {}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ctx.display(&self.value))
    }
}

// The operator impls panic on mixed contexts; use `ring_arith` for the
// checked variant.
impl Add for &QuotientElement {
    type Output = QuotientElement;
    fn add(self, rhs: Self) -> QuotientElement {
        self.checked(rhs, ArithOp::Add)
    }
}

impl Sub for &QuotientElement {
    type Output = QuotientElement;
    fn sub(self, rhs: Self) -> QuotientElement {
        self.checked(rhs, ArithOp::Sub)
    }
}

impl Mul for &QuotientElement {
    type Output = QuotientElement;
    fn mul(self, rhs: Self) -> QuotientElement {
        self.checked(rhs, ArithOp::Mul)
    }
}

impl Neg for &QuotientElement {
    type Output = QuotientElement;
    fn neg(self) -> QuotientElement {
        QuotientElement {
            ctx: self.ctx.clone(),
            value: self.ctx.neg(&self.value),
        }
    }
}

impl RingElem for QuotientElement {
    fn zero_like(&self) -> Self {
        QuotientElement::zero(&self.ctx)
    }

    fn one_like(&self) -> Self {
        QuotientElement::one(&self.ctx)
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negated(&self) -> Self {
        -self
    }

    fn scaled(&self, c: &BigInt) -> Self {
        QuotientElement {
            ctx: self.ctx.clone(),
            value: self.ctx.scale(&self.value, c),
        }
    }
}
