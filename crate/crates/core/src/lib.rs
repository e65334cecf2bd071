//! Exact algebra on split affine quadrics: presented polynomial rings,
//! Suslin matrices, clutching cocycles on even quadrics, and a rewriting
//! calculus for the sphere identifications of the quadrics.

pub mod clutch;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod quadric;
pub mod ring;
pub mod sphere;
pub mod suite;
pub mod suslin;

pub use linalg::{Matrix, RingMatrix};
pub use poly::{Polynomial, QuotientElement, RingContext};
pub use ring::RingElem;
