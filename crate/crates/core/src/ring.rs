use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Commutative ring element with an implicit ring carried by the value.
///
/// `zero_like`/`one_like` produce constants of the same ring as `self`, which
/// lets matrix code work over quotient and localized rings without threading
/// a context through every call.
pub trait RingElem: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplication by an integer.
    fn scaled(&self, c: &BigInt) -> Self;
}

impl RingElem for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }

    fn one_like(&self) -> Self {
        BigInt::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
        self * c
    }
}
