use std::sync::Arc;

use super::localized::denominator_poly;
use super::{make_quadric, LocalizedElement, Parity, QuadricError, QuadricRing};
use crate::poly::{same_context, Polynomial, QuotientElement, RingContext};
use crate::ring::RingElem;

/// A ring homomorphism from a presented ring into the localization of an
/// even quadric at `z(1+z)`, given by the images of the source variables.
#[derive(Clone, Debug)]
pub struct LocalizingHom {
    source: Arc<RingContext>,
    target: QuadricRing,
    images: Vec<LocalizedElement>,
}

impl LocalizingHom {
    pub fn new(
        source: Arc<RingContext>,
        target: QuadricRing,
        images: Vec<LocalizedElement>,
    ) -> Result<Self, QuadricError> {
        if images.len() != source.nvars() || images.iter().any(|im| !same_context(im.context(), target.context())) {
            return Err(QuadricError::ContextMismatch);
        }
        Ok(LocalizingHom { source, target, images })
    }

    pub fn source(&self) -> &Arc<RingContext> {
        &self.source
    }

    pub fn target(&self) -> &QuadricRing {
        &self.target
    }

    /// Image of source variable `i` (in the source's storage order).
    pub fn images(&self) -> &[LocalizedElement] {
        &self.images
    }

    pub fn image_of(&self, name: &str) -> Result<&LocalizedElement, QuadricError> {
        Ok(&self.images[self.source.var_index(name)?])
    }

    /// Substitutes the images into a representative of `p`. Terms are
    /// combined over the common denominator before normalizing.
    pub fn apply(&self, p: &QuotientElement) -> Result<LocalizedElement, QuadricError> {
        if !same_context(p.context(), &self.source) {
            return Err(QuadricError::ContextMismatch);
        }
        Ok(self.apply_poly(p.value()))
    }

    /// Substitution on a polynomial over the source variables (no relation
    /// reduction on the source side).
    pub fn apply_poly(&self, p: &Polynomial) -> LocalizedElement {
        let tctx = self.target.context();
        if p.is_zero() {
            return LocalizedElement::zero(tctx).unwrap();
        }
        let mut terms = Vec::with_capacity(p.num_terms());
        let (mut a_max, mut b_max) = (0, 0);
        for (c, m) in p.terms() {
            let mut num = tctx.constant(c.clone());
            let (mut a, mut b) = (0, 0);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let im = &self.images[i];
                num = tctx.mul_reduced(&num, &tctx.pow_reduced(im.numerator().value(), e));
                a += e * im.z_pow();
                b += e * im.one_plus_z_pow();
            }
            a_max = a_max.max(a);
            b_max = b_max.max(b);
            terms.push((num, a, b));
        }
        let mut total = Polynomial::zero();
        for (num, a, b) in terms {
            let lifted = tctx.mul(&num, &denominator_poly(tctx, a_max - a, b_max - b));
            total = tctx.add(&total, &lifted);
        }
        LocalizedElement::new(QuotientElement::new(tctx, total), a_max, b_max).unwrap()
    }
}

/// Evidence that `ψn` is well defined: the image of `Σ xi yi − 1` has
/// numerator exactly the `Q_{2n}` relation over the denominator `z(1+z)`,
/// and therefore vanishes.
#[derive(Clone, Debug)]
pub struct PsiCertificate {
    pub n: usize,
    /// Image of the source relation computed in the free ring on the target
    /// variables, before any reduction.
    pub raw_numerator: Polynomial,
    pub raw_z_pow: u32,
    pub raw_one_plus_z_pow: u32,
    /// The raw numerator equals the target quadric's relation.
    pub numerator_is_target_relation: bool,
    /// The image as a localized element of `O(Q_{2n})`.
    pub image: LocalizedElement,
}

impl PsiCertificate {
    pub fn holds(&self) -> bool {
        self.numerator_is_target_relation && self.image.is_zero()
    }
}

/// The chart map `ψn: D_{z(1+z)} ⊂ Q_{2n} → Q_{2n-1}` on coordinate rings:
/// `xi ↦ xi/z`, `yi ↦ yi/(1+z)`.
pub fn psi(n: usize) -> Result<(LocalizingHom, PsiCertificate), QuadricError> {
    if n == 0 {
        return Err(QuadricError::InvalidDimension("psi needs n >= 1".into()));
    }
    let source = make_quadric(Parity::Odd, n)?;
    let target = make_quadric(Parity::Even, n)?;
    let tctx = target.context().clone();
    let images = source
        .context()
        .names()
        .iter()
        .map(|name| {
            let v = QuotientElement::var(&tctx, name).unwrap();
            let (a, b) = if name.starts_with('x') { (1, 0) } else { (0, 1) };
            LocalizedElement::new(v, a, b).unwrap()
        })
        .collect();
    let hom = LocalizingHom::new(source.context().clone(), target.clone(), images)?;

    // Σ (xi/z)(yi/(1+z)) − 1 over the common denominator z(1+z), in the free
    // ring so the identity is visible before reduction.
    let free = target.free_context();
    let mut raw = Polynomial::zero();
    for i in 1..=n {
        let xy = free.mul(
            &free.var(&format!("x{i}")).unwrap(),
            &free.var(&format!("y{i}")).unwrap(),
        );
        raw = free.add(&raw, &xy);
    }
    raw = free.sub(&raw, &denominator_poly(&free, 1, 1));
    let numerator_is_target_relation = &raw == target.relation();
    let image = hom.apply_poly(source.relation());
    let cert = PsiCertificate {
        n,
        raw_numerator: raw,
        raw_z_pow: 1,
        raw_one_plus_z_pow: 1,
        numerator_is_target_relation,
        image,
    };
    Ok((hom, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_one_images() {
        let (h, cert) = psi(1).unwrap();
        assert!(cert.holds());
        assert_eq!(h.image_of("x1").unwrap().to_string(), "x1/z");
        assert_eq!(h.image_of("y1").unwrap().to_string(), "y1/(1+z)");
        let one = QuotientElement::one(h.source());
        assert!(h.apply(&one).unwrap().numerator().value().is_one());
    }

    #[test]
    fn psi_two_relation_image() {
        let (h, cert) = psi(2).unwrap();
        assert!(cert.numerator_is_target_relation);
        let free = h.target().free_context();
        assert_eq!(free.display(&cert.raw_numerator).to_string(), "x2*y2 + x1*y1 - z^2 - z");
        assert!(cert.image.is_zero());
        let x1y2 = QuotientElement::parse(h.source(), "x1*y2").unwrap();
        assert_eq!(h.apply(&x1y2).unwrap().to_string(), "x1*y2/(z*(1+z))");
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let (h, _) = psi(2).unwrap();
        let (h1, _) = psi(1).unwrap();
        let wrong = QuotientElement::one(h1.source());
        assert!(matches!(h.apply(&wrong), Err(QuadricError::ContextMismatch)));
    }
}
