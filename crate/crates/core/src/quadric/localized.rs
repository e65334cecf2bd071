use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::QuadricError;
use crate::poly::{PolyJson, Polynomial, QuotientElement, RingContext};
use crate::ring::RingElem;

/// `num / (z^a (1+z)^b)`: a section over `D_{z(1+z)}` of an even quadric.
///
/// `z` and `1+z` are nonzerodivisors in `O(Q_{2m})` for `m ≥ 1` (the
/// relation is irreducible over ℤ), so equality is decided by
/// cross-multiplication. The stored form has literal factors of `z` and
/// `1+z` cancelled against the denominator; no further gcd normalization is
/// attempted.
#[derive(Clone, Debug)]
pub struct LocalizedElement {
    num: QuotientElement,
    z_pow: u32,
    one_plus_z_pow: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedJson {
    pub num: PolyJson,
    pub z_pow: u32,
    pub one_plus_z_pow: u32,
}

fn z_index(ctx: &RingContext) -> Result<usize, QuadricError> {
    ctx.var_index("z").map_err(|_| QuadricError::NotEven)
}

/// `z^a (1+z)^b` in `ctx`.
pub(crate) fn denominator_poly(ctx: &RingContext, a: u32, b: u32) -> Polynomial {
    let zi = z_index(ctx).expect("localized rings have z");
    let z = ctx.var_at(zi);
    let one_plus_z = ctx.add(&ctx.one(), &z);
    ctx.mul(&ctx.pow(&z, a), &ctx.pow(&one_plus_z, b))
}

impl LocalizedElement {
    /// `num / (z^a (1+z)^b)`, with literal cancellation applied.
    pub fn new(num: QuotientElement, z_pow: u32, one_plus_z_pow: u32) -> Result<Self, QuadricError> {
        z_index(num.context())?;
        Ok(Self::new_unchecked(num, z_pow, one_plus_z_pow))
    }

    fn new_unchecked(num: QuotientElement, z_pow: u32, one_plus_z_pow: u32) -> Self {
        let mut out = LocalizedElement {
            num,
            z_pow,
            one_plus_z_pow,
        };
        out.cancel();
        out
    }

    pub fn from_element(num: QuotientElement) -> Result<Self, QuadricError> {
        Self::new(num, 0, 0)
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Result<Self, QuadricError> {
        Self::from_element(QuotientElement::zero(ctx))
    }

    pub fn one(ctx: &Arc<RingContext>) -> Result<Self, QuadricError> {
        Self::from_element(QuotientElement::one(ctx))
    }

    /// `c · z^a (1+z)^b` for possibly negative exponents.
    pub fn unit(ctx: &Arc<RingContext>, c: i64, a: i64, b: i64) -> Result<Self, QuadricError> {
        let (na, da) = (a.max(0) as u32, (-a).max(0) as u32);
        let (nb, db) = (b.max(0) as u32, (-b).max(0) as u32);
        let num = ctx.scale(&denominator_poly(ctx, na, nb), &BigInt::from(c));
        Self::new(QuotientElement::new(ctx, num), da, db)
    }

    pub fn numerator(&self) -> &QuotientElement {
        &self.num
    }

    pub fn z_pow(&self) -> u32 {
        self.z_pow
    }

    pub fn one_plus_z_pow(&self) -> u32 {
        self.one_plus_z_pow
    }

    pub fn context(&self) -> &Arc<RingContext> {
        self.num.context()
    }

    fn cancel(&mut self) {
        let ctx = self.num.context().clone();
        let zi = z_index(&ctx).expect("checked on construction");
        if self.num.is_zero() {
            self.z_pow = 0;
            self.one_plus_z_pow = 0;
            return;
        }
        while self.z_pow > 0 {
            match ctx.div_by_var(self.num.value(), zi) {
                Some(q) => {
                    self.num = QuotientElement::new(&ctx, q);
                    self.z_pow -= 1;
                }
                None => break,
            }
        }
        while self.one_plus_z_pow > 0 {
            match ctx.div_by_one_plus_var(self.num.value(), zi) {
                Some(q) => {
                    self.num = QuotientElement::new(&ctx, q);
                    self.one_plus_z_pow -= 1;
                }
                None => break,
            }
        }
    }

    /// Numerator after rescaling to the denominator `z^a (1+z)^b`, which must
    /// be a multiple of the current one.
    fn numerator_over(&self, a: u32, b: u32) -> QuotientElement {
        let ctx = self.context();
        let factor = denominator_poly(ctx, a - self.z_pow, b - self.one_plus_z_pow);
        QuotientElement::new(ctx, ctx.mul(self.num.value(), &factor))
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        crate::poly::same_context(self.context(), other.context())
    }

    /// Cross-multiplication: `n1·D2 − n2·D1` reduces to zero.
    pub fn equals(&self, other: &Self) -> bool {
        if !self.same_ring(other) {
            return false;
        }
        let a = self.z_pow.max(other.z_pow);
        let b = self.one_plus_z_pow.max(other.one_plus_z_pow);
        self.numerator_over(a, b) == other.numerator_over(a, b)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    pub fn to_json(&self) -> LocalizedJson {
        LocalizedJson {
            num: self.num.to_json(),
            z_pow: self.z_pow,
            one_plus_z_pow: self.one_plus_z_pow,
        }
    }

    pub fn from_json(ctx: &Arc<RingContext>, j: &LocalizedJson) -> Result<Self, QuadricError> {
        let num = QuotientElement::from_json(ctx, &j.num)?;
        Self::new(num, j.z_pow, j.one_plus_z_pow)
    }
}

impl PartialEq for LocalizedElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = match (self.z_pow, self.one_plus_z_pow) {
            (0, 0) => return write!(f, "{}", self.num),
            (a, 0) => pow_str("z", a),
            (0, b) => pow_str("(1+z)", b),
            (a, b) => format!("({}*{})", pow_str("z", a), pow_str("(1+z)", b)),
        };
        if self.num.value().num_terms() > 1 {
            write!(f, "({})/{}", self.num, den)
        } else {
            write!(f, "{}/{}", self.num, den)
        }
    }
}

fn pow_str(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

impl RingElem for LocalizedElement {
    fn zero_like(&self) -> Self {
        Self::new_unchecked(self.num.zero_like(), 0, 0)
    }

    fn one_like(&self) -> Self {
        Self::new_unchecked(self.num.one_like(), 0, 0)
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        let a = self.z_pow.max(rhs.z_pow);
        let b = self.one_plus_z_pow.max(rhs.one_plus_z_pow);
        Self::new_unchecked(&self.numerator_over(a, b) + &rhs.numerator_over(a, b), a, b)
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    fn times(&self, rhs: &Self) -> Self {
        Self::new_unchecked(
            &self.num * &rhs.num,
            self.z_pow + rhs.z_pow,
            self.one_plus_z_pow + rhs.one_plus_z_pow,
        )
    }

    fn negated(&self) -> Self {
        LocalizedElement {
            num: -&self.num,
            ..self.clone()
        }
    }

    fn scaled(&self, c: &BigInt) -> Self {
        Self::new_unchecked(self.num.scaled(c), self.z_pow, self.one_plus_z_pow)
    }
}
