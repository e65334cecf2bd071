//! Independent numeric oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quadric_clutch::poly::{Polynomial, RingContext};
use quadric_clutch::quadric::LocalizedElement;
use quadric_clutch::RingMatrix;
use rand::Rng;

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Coordinates in context order from `(name, value)` pairs; missing names are 0.
pub fn point(ctx: &RingContext, values: &[(&str, BigInt)]) -> Vec<BigInt> {
    let mut coords = vec![BigInt::zero(); ctx.nvars()];
    for (name, v) in values {
        coords[ctx.var_index(name).unwrap()] = v.clone();
    }
    coords
}

/// Horner-free direct evaluation, term by term.
pub fn eval(p: &Polynomial, coords: &[BigInt]) -> BigInt {
    p.terms()
        .iter()
        .map(|(c, m)| {
            m.exponents()
                .iter()
                .zip(coords)
                .fold(c.clone(), |acc, (&e, x)| acc * x.pow(e))
        })
        .sum()
}

pub fn eval_localized(e: &LocalizedElement, coords: &[BigInt], z: &BigInt) -> BigRational {
    let num = eval(e.numerator().value(), coords);
    let den = z.pow(e.z_pow()) * (z + 1u32).pow(e.one_plus_z_pow());
    BigRational::new(num, den)
}

pub fn eval_matrix(m: &RingMatrix, coords: &[BigInt]) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| eval(m.get(i, j).value(), coords)).collect())
        .collect()
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// A random integer point on `Σ xi yi = 1` with `x1 = 1`.
pub fn odd_point(rng: &mut impl Rng, m: usize) -> Vec<(String, BigInt)> {
    let mut vals = Vec::new();
    let mut rest = big(0);
    for i in 2..=m {
        let (x, y) = (big(rng.gen_range(-5..=5)), big(rng.gen_range(-5..=5)));
        rest += &x * &y;
        vals.push((format!("x{i}"), x));
        vals.push((format!("y{i}"), y));
    }
    vals.push(("x1".into(), big(1)));
    vals.push(("y1".into(), big(1) - rest));
    vals
}

/// A random integer point on `Σ xi yi = z + z^2` with `x1 = 1` and `z ∉ {0, -1}`.
pub fn even_point(rng: &mut impl Rng, m: usize) -> (Vec<(String, BigInt)>, BigInt) {
    let z = loop {
        let z = rng.gen_range(-6i64..=6);
        if z != 0 && z != -1 {
            break big(z);
        }
    };
    let mut vals = Vec::new();
    let mut rest = big(0);
    for i in 2..=m {
        let (x, y) = (big(rng.gen_range(-5..=5)), big(rng.gen_range(-5..=5)));
        rest += &x * &y;
        vals.push((format!("x{i}"), x));
        vals.push((format!("y{i}"), y));
    }
    vals.push(("x1".into(), big(1)));
    vals.push(("y1".into(), &z + &z * &z - rest));
    vals.push(("z".into(), z.clone()));
    (vals, z)
}

pub fn coords_of(ctx: &Arc<RingContext>, vals: &[(String, BigInt)]) -> Vec<BigInt> {
    let pairs: Vec<(&str, BigInt)> = vals.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    point(ctx, &pairs)
}
