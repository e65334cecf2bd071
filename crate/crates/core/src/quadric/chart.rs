use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{make_quadric, Parity, QuadricError};
use crate::poly::{Polynomial, RingContext};

/// Round-trip evidence for `Un = {xn ≠ 0} ≅ A^{2n-1} × Gm`.
///
/// The chart ring has coordinates `xn` (on `Gm`) and
/// `x1..x(n-1), y1..y(n-1), z`; the inverse map recovers
/// `yn = (z(1+z) − Σ_{i<n} xi yi) / xn`.
#[derive(Clone, Debug)]
pub struct ChartCertificate {
    pub n: usize,
    pub chart_context: Arc<RingContext>,
    pub quadric_context: Arc<RingContext>,
    /// Numerator of `yn` over `xn`, in the chart ring.
    pub yn_numerator: Polynomial,
    /// Numerator of the image of the `Q_{2n}` relation in the chart ring
    /// localized at `xn`; must be literally zero.
    pub relation_image_numerator: Polynomial,
    /// For each chart generator `v`: numerator of `v − (chart ∘ inverse)(v)`.
    pub chart_residuals: Vec<(String, Polynomial)>,
    /// For each quadric generator `g`: numerator of `g − (inverse ∘ chart)(g)`
    /// reduced in `O(Q_{2n})`.
    pub quadric_residuals: Vec<(String, Polynomial)>,
}

impl ChartCertificate {
    pub fn is_identity(&self) -> bool {
        self.relation_image_numerator.is_zero()
            && self.chart_residuals.iter().all(|(_, r)| r.is_zero())
            && self.quadric_residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// Substitutes fractions `num / xn^k` (numerators in `ctx`, `xn` at index
/// `xn_idx`) into `p` and returns the result over the common denominator.
fn eval_over_xn(ctx: &RingContext, p: &Polynomial, images: &[(Polynomial, u32)], xn_idx: usize) -> (Polynomial, u32) {
    let xn = ctx.var_at(xn_idx);
    let mut parts = Vec::new();
    let mut k_max = 0;
    for (c, m) in p.terms() {
        let mut num = ctx.constant(c.clone());
        let mut k = 0;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                num = ctx.mul(&num, &ctx.pow(&images[i].0, e));
                k += e * images[i].1;
            }
        }
        k_max = k_max.max(k);
        parts.push((num, k));
    }
    let mut total = Polynomial::zero();
    for (num, k) in parts {
        total = ctx.add(&total, &ctx.mul(&num, &ctx.pow(&xn, k_max - k)));
    }
    (total, k_max)
}

pub fn chart_un(n: usize) -> Result<ChartCertificate, QuadricError> {
    if n == 0 {
        return Err(QuadricError::InvalidDimension("chart U_n needs n >= 1".into()));
    }
    let q = make_quadric(Parity::Even, n)?;
    let qctx = q.context().clone();
    let yn_name = format!("y{n}");
    let xn_name = format!("x{n}");
    let chart_names: Vec<String> = qctx.names().iter().filter(|v| **v != yn_name).cloned().collect();
    let cctx = Arc::new(RingContext::free(&chart_names)?);
    let c_xn = cctx.var_index(&xn_name)?;

    // yn numerator: z + z^2 − Σ_{i<n} xi yi
    let z = cctx.var("z")?;
    let mut yn_num = cctx.add(&z, &cctx.mul(&z, &z));
    for i in 1..n {
        let xy = cctx.mul(&cctx.var(&format!("x{i}"))?, &cctx.var(&format!("y{i}"))?);
        yn_num = cctx.sub(&yn_num, &xy);
    }

    // inverse map O(Q) → chart[1/xn], indexed by quadric variable
    let inverse: Vec<(Polynomial, u32)> = qctx
        .names()
        .iter()
        .map(|v| {
            if *v == yn_name {
                (yn_num.clone(), 1)
            } else {
                (cctx.var(v).unwrap(), 0)
            }
        })
        .collect();
    let (relation_image_numerator, _) = eval_over_xn(&cctx, q.relation(), &inverse, c_xn);

    // chart → quadric → chart: every chart generator maps to itself
    let chart_residuals = chart_names
        .iter()
        .map(|v| {
            let g = cctx.var(v).unwrap();
            let qv = qctx.var(v).unwrap();
            let (num, k) = eval_over_xn(&cctx, &qv, &inverse, c_xn);
            let lhs = cctx.mul(&g, &cctx.pow(&cctx.var_at(c_xn), k));
            (v.clone(), cctx.sub(&lhs, &num))
        })
        .collect();

    // quadric → chart → quadric, checked in O(Q_{2n})[1/xn]
    let q_xn = qctx.var(&xn_name)?;
    let forward: Vec<Polynomial> = chart_names.iter().map(|v| qctx.var(v).unwrap()).collect();
    let quadric_residuals = qctx
        .names()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (num, k) = &inverse[i];
            let back = cctx.substitute(num, &forward, &qctx);
            let lhs = qctx.mul(&qctx.var(v).unwrap(), &qctx.pow(&q_xn, *k));
            (v.clone(), qctx.reduce(&qctx.sub(&lhs, &back)))
        })
        .collect();

    Ok(ChartCertificate {
        n,
        chart_context: cctx,
        quadric_context: qctx,
        yn_numerator: yn_num,
        relation_image_numerator,
        chart_residuals,
        quadric_residuals,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubschemeName {
    /// `E_n = {x1 = … = xn = 0, z = −1} ≅ A^n`.
    E,
    /// `Z_n = {xn = 0} ≅ Q_{2n-2} × A^1`.
    Z,
    /// `E_n ⊂ Z_n`, and the point "0" of `Z_n` lies in `X_{2n} = Q_{2n} ∖ E_n`.
    XComplementCheck,
}

impl FromStr for SubschemeName {
    type Err = QuadricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E_n" | "E" => Ok(SubschemeName::E),
            "Z_n" | "Z" => Ok(SubschemeName::Z),
            "X_complement_check" => Ok(SubschemeName::XComplementCheck),
            _ => Err(QuadricError::UnknownSubscheme(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SubschemeRecord {
    pub name: SubschemeName,
    pub n: usize,
    /// Variable assignments defining the subscheme, as `(name, value)`.
    pub substitution: Vec<(String, String)>,
    /// The `Q_{2n}` relation after substitution.
    pub residual: String,
    pub free_coordinates: Vec<String>,
    pub holds: bool,
}

pub fn subscheme_data(name: SubschemeName, n: usize) -> Result<SubschemeRecord, QuadricError> {
    if n == 0 {
        return Err(QuadricError::InvalidDimension("subschemes need n >= 1".into()));
    }
    let q = make_quadric(Parity::Even, n)?;
    let free = q.free_context();
    let names = free.names().to_vec();

    let e_images: Vec<Polynomial> = names
        .iter()
        .map(|v| match v.as_str() {
            "z" => free.constant(-1),
            v if v.starts_with('x') => Polynomial::zero(),
            v => free.var(v).unwrap(),
        })
        .collect();
    let e_subst: Vec<(String, String)> = names
        .iter()
        .filter(|v| v.starts_with('x') || *v == "z")
        .map(|v| (v.clone(), if v == "z" { "-1".into() } else { "0".into() }))
        .collect();
    let xn = format!("x{n}");
    let yn = format!("y{n}");

    let record = match name {
        SubschemeName::E => {
            let residual = free.substitute(q.relation(), &e_images, &free);
            SubschemeRecord {
                name,
                n,
                substitution: e_subst,
                residual: free.display(&residual).to_string(),
                free_coordinates: (1..=n).map(|i| format!("y{i}")).collect(),
                holds: residual.is_zero(),
            }
        }
        SubschemeName::Z => {
            let images: Vec<Polynomial> = names
                .iter()
                .map(|v| {
                    if *v == xn {
                        Polynomial::zero()
                    } else {
                        free.var(v).unwrap()
                    }
                })
                .collect();
            let residual = free.substitute(q.relation(), &images, &free);
            let smaller = make_quadric(Parity::Even, n - 1)?;
            let embed: Vec<Polynomial> = smaller.context().names().iter().map(|v| free.var(v).unwrap()).collect();
            let expected = smaller.context().substitute(smaller.relation(), &embed, &free);
            let yn_idx = free.var_index(&yn)?;
            let mut coords: Vec<String> = smaller.context().names().to_vec();
            coords.push(yn.clone());
            SubschemeRecord {
                name,
                n,
                substitution: vec![(xn.clone(), "0".into())],
                residual: free.display(&residual).to_string(),
                free_coordinates: coords,
                holds: residual == expected && residual.degree_in(yn_idx) == 0,
            }
        }
        SubschemeName::XComplementCheck => {
            // xn vanishes on E_n, so E_n ⊂ Z_n
            let xn_on_e = free.substitute(&free.var(&xn)?, &e_images, &free);
            // the point "0" is on Q_{2n} but not on E_n (z = 0 ≠ −1)
            let zero_pt = q.base_point();
            let on_q = zero_pt.satisfies(q.context());
            let z_idx = free.var_index("z")?;
            let in_e = zero_pt.coords[z_idx] == BigInt::from(-1)
                && names
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.starts_with('x'))
                    .all(|(i, _)| zero_pt.coords[i] == BigInt::from(0));
            SubschemeRecord {
                name,
                n,
                substitution: e_subst,
                residual: free.display(&xn_on_e).to_string(),
                free_coordinates: (1..=n).map(|i| format!("y{i}")).collect(),
                holds: xn_on_e.is_zero() && on_q && !in_e,
            }
        }
    };
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_n1() {
        let c = chart_un(1).unwrap();
        assert_eq!(c.chart_context.names(), &["x1", "z"]);
        assert_eq!(c.chart_context.display(&c.yn_numerator).to_string(), "z^2 + z");
        assert!(c.is_identity());
    }

    #[test]
    fn chart_relation_image_vanishes() {
        for n in 1..=4 {
            let c = chart_un(n).unwrap();
            assert!(c.relation_image_numerator.is_zero(), "n={n}");
            assert!(c.is_identity(), "n={n}");
            assert_eq!(c.quadric_residuals.len(), 2 * n + 1);
        }
    }

    #[test]
    fn e_n_lies_on_quadric() {
        for n in [1, 2, 5] {
            let r = subscheme_data(SubschemeName::E, n).unwrap();
            assert!(r.holds);
            assert_eq!(r.residual, "0");
            assert_eq!(r.free_coordinates.len(), n);
        }
    }

    #[test]
    fn z_n_is_smaller_quadric() {
        let r = subscheme_data(SubschemeName::Z, 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.residual, "x2*y2 + x1*y1 - z^2 - z");
        assert!(!r.residual.contains("y3"));
        assert!(r.free_coordinates.contains(&"y3".to_string()));
    }

    #[test]
    fn complement_check_and_names() {
        assert!(subscheme_data(SubschemeName::XComplementCheck, 3).unwrap().holds);
        assert!(matches!(
            "W_n".parse::<SubschemeName>(),
            Err(QuadricError::UnknownSubscheme(_))
        ));
    }
}
