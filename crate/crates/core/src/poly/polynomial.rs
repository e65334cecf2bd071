use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Monomial;

/// A sparse polynomial in canonical form: no zero coefficients, one term per
/// monomial, monomials strictly descending in the order of the context that
/// built it. Canonical form makes structural equality the ring equality, so
/// polynomials are only ever produced through a [`RingContext`](super::RingContext).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    pub(crate) terms: Vec<(BigInt, Monomial)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(BigInt, Monomial)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<&(BigInt, Monomial)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(_, m)| m.degree()).max().unwrap_or(0)
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(c, m)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Largest exponent of variable `index` across all terms.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.iter().map(|(_, m)| m.exponents()[index]).max().unwrap_or(0)
    }

    pub(crate) fn from_sorted(terms: Vec<(BigInt, Monomial)>) -> Self {
        Polynomial { terms }
    }
}
