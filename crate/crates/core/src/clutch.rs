//! Clutching cocycles: a matrix-valued map `f` on `Q_{2n-1}` pulled back
//! along `ψn` to a transition matrix on `D_{z(1+z)} ⊂ Q_{2n}`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Matrix, RingMatrix};
use crate::par::{self, Execution};
use crate::poly::{same_context, MatrixJson, PolyError, Polynomial, QuotientElement, RingContext};
use crate::quadric::{make_quadric, psi, LocalizedElement, LocalizedJson, Parity, QuadricError};
use crate::ring::RingElem;
use crate::suslin::{suslin_beta, SuslinError};

pub const PROVENANCE_BETA: &str = "Suslin beta";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClutchError {
    #[error("determinant {0} is not a unit of the quadric ring")]
    NonUnitDeterminant(String),
    #[error("map is not pointed: value at the base point has determinant {0}")]
    NotPointed(String),
    #[error("matrix entries do not live in O(Q_{expected})")]
    ContextMismatch { expected: usize },
    #[error("invalid cocycle: {check} check failed ({detail})")]
    InvalidCocycle { check: String, detail: String },
    #[error("line maps are defined on Q_1 only (got n = {0})")]
    LineNeedsQ1(usize),
    #[error("cocycle JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Suslin(#[from] SuslinError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn invalid(check: &str, detail: impl Into<String>) -> ClutchError {
    ClutchError::InvalidCocycle {
        check: check.into(),
        detail: detail.into(),
    }
}

/// `sign · x1^x1_pow · z^z_pow · (1+z)^one_plus_z_pow` in `O(Q_{2n})[1/(z(1+z))]`.
///
/// A nonzero `x1_pow` only occurs for `n = 1`, where `x1·y1 = z(1+z)` makes
/// `x1` a unit with inverse `y1/(z(1+z))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitDecomposition {
    pub sign: i32,
    pub x1_pow: i64,
    pub z_pow: i64,
    pub one_plus_z_pow: i64,
}

impl UnitDecomposition {
    pub const ONE: UnitDecomposition = UnitDecomposition {
        sign: 1,
        x1_pow: 0,
        z_pow: 0,
        one_plus_z_pow: 0,
    };

    pub fn inverse(&self) -> Self {
        UnitDecomposition {
            sign: self.sign,
            x1_pow: -self.x1_pow,
            z_pow: -self.z_pow,
            one_plus_z_pow: -self.one_plus_z_pow,
        }
    }

    pub fn to_element(&self, ctx: &Arc<RingContext>) -> Result<LocalizedElement, ClutchError> {
        let base = LocalizedElement::unit(ctx, self.sign as i64, self.z_pow, self.one_plus_z_pow)?;
        if self.x1_pow == 0 {
            return Ok(base);
        }
        let e = self.x1_pow.unsigned_abs() as u32;
        let part = if self.x1_pow > 0 {
            LocalizedElement::from_element(QuotientElement::var(ctx, "x1")?.pow(e))?
        } else {
            let y = LocalizedElement::from_element(QuotientElement::var(ctx, "y1")?.pow(e))?;
            y.times(&LocalizedElement::unit(ctx, 1, -(e as i64), -(e as i64))?)
        };
        Ok(base.times(&part))
    }
}

impl fmt::Display for UnitDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}1 * x1^{} * z^{} * (1+z)^{}",
            if self.sign < 0 { "-" } else { "+" },
            self.x1_pow,
            self.z_pow,
            self.one_plus_z_pow
        )
    }
}

/// `±1`, or for a single-variable pair `±x1^e` / `±y1^e`, read off a reduced
/// polynomial. Returns the sign and the signed exponent of `x1`.
fn unit_monomial(ctx: &RingContext, p: &Polynomial, allow_x1: bool) -> Option<(i32, i64)> {
    if p.num_terms() != 1 {
        return None;
    }
    let (c, m) = &p.terms()[0];
    if !c.abs().is_one() {
        return None;
    }
    let sign = if c.is_negative() { -1 } else { 1 };
    if m.is_one() {
        return Some((sign, 0));
    }
    if !allow_x1 {
        return None;
    }
    let x1 = ctx.var_index("x1").ok()?;
    let y1 = ctx.var_index("y1").ok()?;
    let exps = m.exponents();
    let others_zero = exps.iter().enumerate().all(|(i, &e)| e == 0 || i == x1 || i == y1);
    match (exps[x1], exps[y1]) {
        (a, 0) if others_zero => Some((sign, a as i64)),
        (0, b) if others_zero => Some((sign, -(b as i64))),
        _ => None,
    }
}

/// Recognizes `d` as `±x1^e z^a (1+z)^b` by stripping literal `z` and `1+z`
/// factors from its numerator; the result is confirmed by cross-multiplication.
pub fn decompose_unit(d: &LocalizedElement, n: usize) -> Option<UnitDecomposition> {
    let ctx = d.context();
    let zi = ctx.var_index("z").ok()?;
    let mut num = d.numerator().value().clone();
    let (mut zc, mut oc) = (0i64, 0i64);
    while let Some(q) = ctx.div_by_var(&num, zi) {
        num = ctx.reduce(&q);
        zc += 1;
    }
    while let Some(q) = ctx.div_by_one_plus_var(&num, zi) {
        num = ctx.reduce(&q);
        oc += 1;
    }
    let (sign, x1_pow) = unit_monomial(ctx, &num, n == 1)?;
    // y1^e = x1^(-e) z^e (1+z)^e
    let shift = (-x1_pow).max(0);
    let unit = UnitDecomposition {
        sign,
        x1_pow,
        z_pow: zc - d.z_pow() as i64 + shift,
        one_plus_z_pow: oc - d.one_plus_z_pow() as i64 + shift,
    };
    (unit.to_element(ctx).ok()? == *d).then_some(unit)
}

/// Sign and `x1` exponent of a unit of `O(Q_{2n-1})` of the recognized shape.
fn source_unit(det: &QuotientElement, n: usize) -> Option<(i32, i64)> {
    unit_monomial(det.context(), det.value(), n == 1)
}

#[derive(Clone, Debug)]
pub struct Cocycle {
    pub n: usize,
    pub rank: usize,
    pub matrix: Matrix<LocalizedElement>,
    pub provenance: String,
    /// The map on `Q_{2n-1}` the cocycle was built from, when known.
    pub source: Option<RingMatrix>,
    pub det: LocalizedElement,
    pub unit: UnitDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<LocalizedJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleJson {
    pub n: usize,
    pub rank: usize,
    pub provenance: String,
    pub matrix: LocalizedMatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<MatrixJson>,
    pub det: LocalizedJson,
    pub unit: UnitDecomposition,
}

fn odd_context(n: usize) -> Result<Arc<RingContext>, ClutchError> {
    Ok(make_quadric(Parity::Odd, n)?.context().clone())
}

fn even_context(n: usize) -> Result<Arc<RingContext>, ClutchError> {
    Ok(make_quadric(Parity::Even, n)?.context().clone())
}

fn pull_back(f: &RingMatrix, n: usize) -> Result<Matrix<LocalizedElement>, ClutchError> {
    let (hom, _) = psi(n)?;
    let images = par::map(Execution::default(), f.entries(), |e| hom.apply(e));
    let entries = images.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::new(f.rows(), f.cols(), entries)?)
}

fn adjugate_identity(g: &Matrix<LocalizedElement>, det: &LocalizedElement) -> Result<bool, ClutchError> {
    let lhs = g.mul(&g.adjugate()?)?;
    Ok(lhs == Matrix::scalar_like(g.rows(), det))
}

/// `f ∘ ψn` for a pointed `f: Q_{2n-1} → GL_r` with unit determinant.
pub fn clutch_cocycle(f: &RingMatrix, n: usize) -> Result<Cocycle, ClutchError> {
    build_cocycle(f, n, "explicit map")
}

pub fn build_cocycle(f: &RingMatrix, n: usize, provenance: &str) -> Result<Cocycle, ClutchError> {
    let src = odd_context(n)?;
    if f.entries().iter().any(|e| !same_context(e.context(), &src)) {
        return Err(ClutchError::ContextMismatch { expected: 2 * n - 1 });
    }
    let det_f = f.det()?;
    if source_unit(&det_f, n).is_none() {
        return Err(ClutchError::NonUnitDeterminant(det_f.to_string()));
    }
    let q = make_quadric(Parity::Odd, n)?;
    let pt = q.base_point();
    let at_base = f.map(|e| pt.eval(&src, e.value()));
    let base_det = at_base.det()?;
    if !base_det.abs().is_one() {
        return Err(ClutchError::NotPointed(base_det.to_string()));
    }

    let g = pull_back(f, n)?;
    let det = g.det()?;
    let unit = decompose_unit(&det, n).ok_or_else(|| ClutchError::NonUnitDeterminant(det.to_string()))?;
    if !adjugate_identity(&g, &det)? {
        return Err(invalid("adjugate", "g * adj(g) differs from det(g) * I"));
    }
    Ok(Cocycle {
        n,
        rank: f.rows(),
        matrix: g,
        provenance: provenance.to_string(),
        source: Some(f.clone()),
        det,
        unit,
    })
}

/// The degree-`d` map `Q1 → Gm`: `x1^d`, or `y1^(-d)` for negative `d`.
pub fn line_map(d: i64) -> Result<RingMatrix, ClutchError> {
    let ctx = odd_context(1)?;
    let e = d.unsigned_abs() as u32;
    let v = if d >= 0 { "x1" } else { "y1" };
    let entry = QuotientElement::var(&ctx, v)?.pow(e);
    Ok(Matrix::new(1, 1, vec![entry])?)
}

pub fn line_cocycle(d: i64, n: usize) -> Result<Cocycle, ClutchError> {
    if n != 1 {
        return Err(ClutchError::LineNeedsQ1(n));
    }
    build_cocycle(&line_map(d)?, 1, &format!("line map of degree {d}"))
}

/// The clutching cocycle of `βn`.
pub fn generator_bundle(n: usize) -> Result<Cocycle, ClutchError> {
    let (beta, _) = suslin_beta(n)?;
    let c = build_cocycle(&beta, n, PROVENANCE_BETA)?;
    if n == 2 && c.unit != UnitDecomposition::ONE {
        return Err(invalid("determinant", format!("expected 1, got {}", c.det)));
    }
    Ok(c)
}

/// Outcome of re-checking a cocycle from its entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleCertificate {
    pub n: usize,
    pub rank: usize,
    pub unit: UnitDecomposition,
    pub det: String,
    pub adjugate_identity: bool,
    pub inverse_identity: bool,
    /// The entries were recomputed from the recorded source map.
    pub source_checked: bool,
}

/// Re-derives every invariant of `c` from scratch.
pub fn verify_cocycle(c: &Cocycle) -> Result<CocycleCertificate, ClutchError> {
    let ctx = even_context(c.n)?;
    let g = &c.matrix;
    if !g.is_square() || g.rows() != c.rank {
        return Err(invalid(
            "shape",
            format!("{}x{} matrix for rank {}", g.rows(), g.cols(), c.rank),
        ));
    }
    if g.entries().iter().any(|e| !same_context(e.context(), &ctx)) {
        return Err(invalid("ring", format!("entries must live over Q_{}", 2 * c.n)));
    }
    let source_checked = match &c.source {
        Some(f) => {
            if f.rows() != c.rank || !f.is_square() {
                return Err(invalid("source", "source shape differs from the cocycle"));
            }
            let expected = pull_back(f, c.n)?;
            if let Some(k) = (0..g.entries().len()).find(|&k| g.entries()[k] != expected.entries()[k]) {
                return Err(invalid(
                    "transition",
                    format!(
                        "entry ({}, {}) is {}, pulled back source gives {}",
                        k / c.rank,
                        k % c.rank,
                        g.entries()[k],
                        expected.entries()[k]
                    ),
                ));
            }
            true
        }
        None => false,
    };
    let det = g.det()?;
    if det != c.det {
        return Err(invalid(
            "determinant",
            format!("recorded {}, recomputed {}", c.det, det),
        ));
    }
    let unit = decompose_unit(&det, c.n)
        .ok_or_else(|| invalid("unit", format!("{det} is not of the form ±x1^e z^a (1+z)^b")))?;
    if unit != c.unit {
        return Err(invalid(
            "unit decomposition",
            format!("recorded {}, recomputed {}", c.unit, unit),
        ));
    }
    if !adjugate_identity(g, &det)? {
        return Err(invalid("adjugate", "g * adj(g) differs from det(g) * I"));
    }
    let inv = c.inverse()?;
    let inverse_identity = inv.mul(g)? == Matrix::identity_like(c.rank, &det);
    if !inverse_identity {
        return Err(invalid("inverse", "adj(g) / det(g) is not a left inverse"));
    }
    Ok(CocycleCertificate {
        n: c.n,
        rank: c.rank,
        unit,
        det: det.to_string(),
        adjugate_identity: true,
        inverse_identity,
        source_checked,
    })
}

impl Cocycle {
    /// `adj(g) · det(g)^(-1)`, division free.
    pub fn inverse(&self) -> Result<Matrix<LocalizedElement>, ClutchError> {
        let det_inv = self.unit.inverse().to_element(self.det.context())?;
        Ok(self.matrix.adjugate()?.scale(&det_inv))
    }

    /// Entrywise product, for cocycles on the same quadric.
    pub fn compose(&self, other: &Cocycle) -> Result<Matrix<LocalizedElement>, ClutchError> {
        if self.n != other.n {
            return Err(ClutchError::ContextMismatch { expected: 2 * self.n });
        }
        Ok(self.matrix.mul(&other.matrix)?)
    }

    pub fn to_json(&self) -> CocycleJson {
        CocycleJson {
            n: self.n,
            rank: self.rank,
            provenance: self.provenance.clone(),
            matrix: LocalizedMatrixJson {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
                entries: self.matrix.entries().iter().map(|e| e.to_json()).collect(),
            },
            source: self.source.as_ref().map(|f| f.to_json()),
            det: self.det.to_json(),
            unit: self.unit,
        }
    }

    /// Decodes without checking invariants; see [`verify_cocycle`].
    pub fn from_json(j: &CocycleJson) -> Result<Self, ClutchError> {
        if j.n == 0 {
            return Err(ClutchError::Json("n must be positive".into()));
        }
        let ctx = even_context(j.n)?;
        let entries = j
            .matrix
            .entries
            .iter()
            .map(|e| LocalizedElement::from_json(&ctx, e))
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = Matrix::new(j.matrix.rows, j.matrix.cols, entries)?;
        let source = match &j.source {
            Some(s) => Some(RingMatrix::from_json(&odd_context(j.n)?, s)?),
            None => None,
        };
        Ok(Cocycle {
            n: j.n,
            rank: j.rank,
            matrix,
            provenance: j.provenance.clone(),
            source,
            det: LocalizedElement::from_json(&ctx, &j.det)?,
            unit: j.unit,
        })
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "cocycle on Q_{} (rank {}, {})",
            2 * self.n,
            self.rank,
            self.provenance
        )?;
        write!(f, "{}", self.matrix)?;
        writeln!(f, "det = {} = {}", self.det, self.unit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc(ctx: &Arc<RingContext>, s: &str, a: u32, b: u32) -> LocalizedElement {
        LocalizedElement::new(QuotientElement::parse(ctx, s).unwrap(), a, b).unwrap()
    }

    #[test]
    fn line_cocycles() {
        let c = line_cocycle(1, 1).unwrap();
        assert_eq!(c.matrix.get(0, 0).to_string(), "x1/z");
        let d = line_cocycle(-1, 1).unwrap();
        assert_eq!(d.matrix.get(0, 0).to_string(), "y1/(1+z)");
        let prod = c.compose(&d).unwrap();
        assert_eq!(prod.get(0, 0), &LocalizedElement::one(c.det.context()).unwrap());
        assert_eq!(c.unit.x1_pow, 1);
        assert_eq!(d.unit.x1_pow, -1);
        assert!(verify_cocycle(&c).is_ok());
        assert!(verify_cocycle(&d).is_ok());
    }

    #[test]
    fn beta_two_cocycle_has_unit_det() {
        let c = generator_bundle(2).unwrap();
        let ctx = c.det.context().clone();
        assert_eq!(c.matrix.get(0, 0), &loc(&ctx, "x1", 1, 0));
        assert_eq!(c.matrix.get(1, 0), &loc(&ctx, "-y2", 0, 1));
        assert_eq!(c.unit, UnitDecomposition::ONE);
        let cert = verify_cocycle(&c).unwrap();
        assert!(cert.source_checked && cert.inverse_identity);
    }

    #[test]
    fn identity_cocycle() {
        let ctx = odd_context(2).unwrap();
        let id = RingMatrix::identity_like(3, &QuotientElement::one(&ctx));
        let c = clutch_cocycle(&id, 2).unwrap();
        assert_eq!(verify_cocycle(&c).unwrap().unit, UnitDecomposition::ONE);
    }

    #[test]
    fn corrupted_sign_is_rejected() {
        let mut c = generator_bundle(2).unwrap();
        let flipped = c.matrix.get(0, 1).negated();
        c.matrix.set(0, 1, flipped);
        assert!(matches!(verify_cocycle(&c), Err(ClutchError::InvalidCocycle { .. })));
        c.source = None;
        assert!(matches!(verify_cocycle(&c), Err(ClutchError::InvalidCocycle { .. })));
    }

    #[test]
    fn non_units_and_unpointed_maps_are_rejected() {
        let ctx = odd_context(2).unwrap();
        let x1 = QuotientElement::var(&ctx, "x1").unwrap();
        let f = Matrix::new(1, 1, vec![x1]).unwrap();
        assert!(matches!(clutch_cocycle(&f, 2), Err(ClutchError::NonUnitDeterminant(_))));
        let two = QuotientElement::constant(&ctx, 2);
        let f = Matrix::scalar_like(2, &two);
        assert!(clutch_cocycle(&f, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = generator_bundle(2).unwrap();
        let j = c.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = Cocycle::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json(), j);
        assert!(verify_cocycle(&back).is_ok());
    }

    #[test]
    fn beta_three_cocycle() {
        let c = generator_bundle(3).unwrap();
        assert_eq!(c.rank, 3);
        assert_eq!(c.unit.x1_pow, 0);
        assert!(verify_cocycle(&c).is_ok());
    }
}
