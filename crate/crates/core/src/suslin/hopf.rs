use std::sync::Arc;

use num_bigint::BigInt;

use super::SuslinError;
use crate::poly::{Polynomial, RingContext};
use crate::quadric::{make_quadric, Parity};

/// An integer point `(M1, M2)` with `det M1 − det M2 = 1` and its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfSpecialization {
    /// `[a, b, c, d]` row-major.
    pub m1: [i64; 4],
    /// `[e, f, g, h]` row-major.
    pub m2: [i64; 4],
    /// Image coordinates in the order of the `Q4` ring variables.
    pub image: Vec<(String, BigInt)>,
    /// The `Q4` relation evaluated at the image.
    pub residual: BigInt,
}

/// Evidence that `(M1, M2) ↦ (M1·M2, det M2)` lands in `Q4`.
#[derive(Clone, Debug)]
pub struct HopfCertificate {
    /// `ℤ[a..h] / (ad − bc − (eh − fg) − 1)`.
    pub source: Arc<RingContext>,
    /// Images of the `Q4` coordinates, as polynomials in `a..h`.
    pub images: Vec<(String, Polynomial)>,
    /// The `Q4` relation pulled back and reduced in the source ring.
    pub relation_image: Polynomial,
    pub specializations: Vec<HopfSpecialization>,
}

impl HopfCertificate {
    pub fn holds(&self) -> bool {
        self.relation_image.is_zero() && self.specializations.iter().all(|s| s.residual == BigInt::from(0))
    }
}

fn source_ring() -> Result<Arc<RingContext>, SuslinError> {
    let free = RingContext::free(&["a", "b", "c", "d", "e", "f", "g", "h"])?;
    let rel = free.parse("a*d - b*c - (e*h - f*g) - 1")?;
    Ok(Arc::new(free.with_relation(rel)?))
}

pub fn hopf_nu_check() -> Result<HopfCertificate, SuslinError> {
    let src = source_ring()?;
    let p = |s: &str| src.parse(s);
    // M1·M2 = [[p, q], [r, s]]
    let named = [
        ("x1", p("a*e + b*g")?),
        ("x2", p("a*f + b*h")?),
        ("y1", p("c*f + d*h")?),
        ("y2", p("-(c*e + d*g)")?),
        ("z", p("e*h - f*g")?),
    ];
    let q4 = make_quadric(Parity::Even, 2)?;
    let qctx = q4.context();
    let images: Vec<(String, Polynomial)> = qctx
        .names()
        .iter()
        .map(|v| {
            let (_, im) = named.iter().find(|(n, _)| n == v).expect("Q4 coordinate");
            (v.clone(), im.clone())
        })
        .collect();
    let polys: Vec<Polynomial> = images.iter().map(|(_, p)| p.clone()).collect();
    let pulled = qctx.substitute(q4.relation(), &polys, &src);
    let relation_image = src.reduce(&pulled);

    let points = [
        ([1, 0, 0, 1], [0, 0, 0, 0]),
        ([2, 0, 0, 1], [1, 0, 0, 1]),
        ([3, 1, 2, 1], [1, 2, 1, 2]),
    ];
    let specializations = points
        .iter()
        .map(|&(m1, m2)| {
            let vals: Vec<BigInt> = m1.iter().chain(m2.iter()).map(|&v| BigInt::from(v)).collect();
            let at = |q: &Polynomial| src.eval(q, &vals, &BigInt::from(1));
            let image: Vec<(String, BigInt)> = images.iter().map(|(n, q)| (n.clone(), at(q))).collect();
            let coords: Vec<BigInt> = image.iter().map(|(_, v)| v.clone()).collect();
            let residual = qctx.eval(q4.relation(), &coords, &BigInt::from(1));
            HopfSpecialization {
                m1,
                m2,
                image,
                residual,
            }
        })
        .collect();
    Ok(HopfCertificate {
        source: src,
        images,
        relation_image,
        specializations,
    })
}
