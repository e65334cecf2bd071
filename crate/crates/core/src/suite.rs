//! Seeded invariant suites behind the `check` command.
//!
//! Each check gets its own ChaCha8 stream seeded from the run seed and the
//! check's position in the full declared list, so a check's samples do not
//! depend on which suites were selected or on scheduling.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clutch::{build_cocycle, generator_bundle, line_cocycle, verify_cocycle, ClutchError, UnitDecomposition};
use crate::linalg::{Matrix, RingMatrix};
use crate::par::{self, Execution};
use crate::poly::{
    normal_form, ring_arith, ArithOp, CoeffDomain, Monomial, MonomialOrder, Polynomial, QuotientElement, RingContext,
};
use crate::quadric::{chart_un, make_quadric, psi, subscheme_data, LocalizedElement, Parity, SubschemeName};
use crate::ring::RingElem;
use crate::sphere::{
    bidegree, classify_smooth_model, derive_contractible, derive_even, parse_term, RuleSet, SmoothModelVerdict, Term,
};
use crate::suslin::{check_beta, hopf_nu_check, suslin_beta, verify_suslin, SuslinError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Poly,
    Suslin,
    Clutch,
    Sphere,
}

impl Suite {
    fn includes(self, group: Suite) -> bool {
        self == Suite::All || self == group
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Suite::All),
            "poly" => Ok(Suite::Poly),
            "suslin" => Ok(Suite::Suslin),
            "clutch" => Ok(Suite::Clutch),
            "sphere" => Ok(Suite::Sphere),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::All => "all",
            Suite::Poly => "poly",
            Suite::Suslin => "suslin",
            Suite::Clutch => "clutch",
            Suite::Sphere => "sphere",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    pub elapsed_ms: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        self.failed == 0
    }

    /// Zeroes the timings so that reports of equal runs compare equal.
    pub fn without_timings(mut self) -> Self {
        for c in &mut self.checks {
            c.elapsed_ms = 0;
        }
        self
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            writeln!(f, "{tag} {:<32} {:>6} ms  {}", c.name, c.elapsed_ms, c.detail)?;
        }
        writeln!(
            f,
            "suite {} seed {}: {} passed, {} failed, {} skipped",
            self.suite, self.seed, self.passed, self.failed, self.skipped
        )
    }
}

/// What a check body reports.
enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type CheckFn = fn(&mut ChaCha8Rng) -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Outcome::Fail(format!($($fmt)+));
        }
    };
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Outcome::Fail(err.to_string()),
        }
    };
}

const CHECKS: &[(Suite, &str, CheckFn)] = &[
    (Suite::Poly, "poly.ring_axioms", poly_ring_axioms),
    (Suite::Poly, "poly.quotient_ring_axioms", poly_quotient_ring_axioms),
    (Suite::Poly, "poly.normal_form_idempotent", poly_normal_form_idempotent),
    (Suite::Poly, "poly.homomorphism_law", poly_homomorphism_law),
    (Suite::Poly, "poly.det_multiplicative", poly_det_multiplicative),
    (Suite::Poly, "poly.adjugate_identity", poly_adjugate_identity),
    (Suite::Poly, "poly.prime_field_agreement", poly_prime_field_agreement),
    (Suite::Suslin, "suslin.alpha_identities", suslin_alpha_identities),
    (Suite::Suslin, "suslin.beta2_ground_truth", suslin_beta2),
    (Suite::Suslin, "suslin.beta3_certificate", suslin_beta3),
    (Suite::Suslin, "suslin.beta4_best_effort", suslin_beta4),
    (Suite::Suslin, "suslin.hopf_nu", suslin_hopf),
    (Suite::Clutch, "clutch.psi_identity", clutch_psi),
    (Suite::Clutch, "clutch.apply_hom_law", clutch_apply_hom_law),
    (Suite::Clutch, "clutch.localized_equality", clutch_localized_equality),
    (Suite::Clutch, "clutch.nonzerodivisors", clutch_nonzerodivisors),
    (Suite::Clutch, "clutch.charts_and_subschemes", clutch_charts),
    (Suite::Clutch, "clutch.generator_bundles", clutch_generators),
    (Suite::Clutch, "clutch.negative_control", clutch_negative_control),
    (Suite::Clutch, "clutch.functoriality", clutch_functoriality),
    (Suite::Clutch, "clutch.line_group_law", clutch_line_group_law),
    (Suite::Sphere, "sphere.rules_sound", sphere_rules_sound),
    (Suite::Sphere, "sphere.derive_even", sphere_derive_even),
    (Suite::Sphere, "sphere.derive_contractible", sphere_derive_contractible),
    (Suite::Sphere, "sphere.trace_corruption", sphere_trace_corruption),
    (Suite::Sphere, "sphere.bidegrees", sphere_bidegrees),
    (Suite::Sphere, "sphere.classifier_table", sphere_classifier),
    (Suite::Sphere, "sphere.parse_round_trip", sphere_parse_round_trip),
];

/// Names of the checks `suite` runs, in report order.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    CHECKS
        .iter()
        .filter(|(g, _, _)| suite.includes(*g))
        .map(|(_, n, _)| *n)
        .collect()
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    run_suite_with(suite, seed, Execution::default())
}

pub fn run_suite_with(suite: Suite, seed: u64, exec: Execution) -> SuiteReport {
    let selected: Vec<(usize, &(Suite, &str, CheckFn))> = CHECKS
        .iter()
        .enumerate()
        .filter(|(_, (g, _, _))| suite.includes(*g))
        .collect();
    let checks = par::map(exec, &selected, |(index, (_, name, body))| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(*index as u64));
        let start = Instant::now();
        let outcome = body(&mut rng);
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, detail) = match outcome {
            Outcome::Pass(d) => (CheckStatus::Pass, d),
            Outcome::Fail(d) => (CheckStatus::Fail, d),
            Outcome::Skip(d) => (CheckStatus::Skipped, d),
        };
        CheckRecord {
            name: name.to_string(),
            status,
            elapsed_ms,
            detail,
        }
    });
    let count = |s: CheckStatus| checks.iter().filter(|c| c.status == s).count();
    SuiteReport {
        suite,
        seed,
        passed: count(CheckStatus::Pass),
        failed: count(CheckStatus::Fail),
        skipped: count(CheckStatus::Skipped),
        checks,
    }
}

/// Random polynomial with up to `max_terms` terms of total degree at most
/// `max_deg` and coefficients in `-9..=9`, canonical in `ctx` but unreduced.
pub fn random_poly(rng: &mut impl Rng, ctx: &RingContext, max_terms: usize, max_deg: u32) -> Polynomial {
    let nvars = ctx.nvars();
    let terms = (0..rng.gen_range(0..=max_terms)).map(|_| {
        let mut exps = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_deg) {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        (BigInt::from(rng.gen_range(-9i64..=9)), Monomial::new(exps))
    });
    ctx.canonical(terms)
}

pub fn random_element(rng: &mut impl Rng, ctx: &Arc<RingContext>, max_terms: usize, max_deg: u32) -> QuotientElement {
    QuotientElement::new(ctx, random_poly(rng, ctx, max_terms, max_deg))
}

fn random_matrix(rng: &mut impl Rng, ctx: &Arc<RingContext>, n: usize, max_terms: usize, max_deg: u32) -> RingMatrix {
    Matrix::from_fn(n, n, |_, _| random_element(rng, ctx, max_terms, max_deg))
}

fn eight_var_ring() -> Arc<RingContext> {
    Arc::new(RingContext::free(&["a", "b", "c", "d", "e", "f", "g", "h"]).unwrap())
}

fn quadric(parity: Parity, m: usize) -> Arc<RingContext> {
    make_quadric(parity, m).unwrap().context().clone()
}

const SAMPLES: usize = 200;

fn ring_axioms(rng: &mut ChaCha8Rng, pick_ctx: impl Fn(&mut ChaCha8Rng) -> Arc<RingContext>) -> Outcome {
    for k in 0..SAMPLES {
        let ctx = pick_ctx(rng);
        let [a, b, c] = [0, 1, 2].map(|_| random_element(rng, &ctx, 4, 4));
        ensure!(
            &(&a + &b) + &c == &a + &(&b + &c),
            "sample {k}: addition is not associative"
        );
        ensure!(
            &(&a * &b) * &c == &a * &(&b * &c),
            "sample {k}: multiplication is not associative"
        );
        ensure!(&a + &b == &b + &a, "sample {k}: addition is not commutative");
        ensure!(&a * &b == &b * &a, "sample {k}: multiplication is not commutative");
        ensure!(
            &a * &(&b + &c) == &(&a * &b) + &(&a * &c),
            "sample {k}: distributivity fails"
        );
        ensure!((&a + &a.negated()).is_zero(), "sample {k}: a + (-a) is not zero");
    }
    Outcome::Pass(format!("{SAMPLES} samples"))
}

fn poly_ring_axioms(rng: &mut ChaCha8Rng) -> Outcome {
    let full = eight_var_ring();
    ring_axioms(rng, |rng| {
        // between one and eight variables
        let k = rng.gen_range(1..=8);
        if k == 8 {
            full.clone()
        } else {
            Arc::new(RingContext::free(&full.names()[..k]).unwrap())
        }
    })
}

fn poly_quotient_ring_axioms(rng: &mut ChaCha8Rng) -> Outcome {
    let rings = [
        quadric(Parity::Odd, 2),
        quadric(Parity::Even, 2),
        quadric(Parity::Odd, 3),
    ];
    ring_axioms(rng, |rng| rings[rng.gen_range(0..rings.len())].clone())
}

fn poly_normal_form_idempotent(rng: &mut ChaCha8Rng) -> Outcome {
    let rings = [quadric(Parity::Odd, 2), quadric(Parity::Even, 3)];
    for k in 0..SAMPLES {
        let ctx = &rings[k % 2];
        let p = random_poly(rng, ctx, 5, 4);
        let once = attempt!(normal_form(&p, ctx));
        let twice = attempt!(normal_form(once.value(), ctx));
        ensure!(once == twice, "sample {k}: normal form of {once} is not stable");
        let lead = ctx.relation_lead().unwrap();
        ensure!(
            once.value().terms().iter().all(|(_, m)| !lead.divides(m)),
            "sample {k}: normal form still divisible by the leading monomial"
        );
    }
    Outcome::Pass(format!("{SAMPLES} samples"))
}

fn poly_homomorphism_law(rng: &mut ChaCha8Rng) -> Outcome {
    let rings = [quadric(Parity::Odd, 2), quadric(Parity::Even, 2)];
    for k in 0..SAMPLES {
        let ctx = &rings[k % 2];
        let p = random_poly(rng, ctx, 4, 4);
        let q = random_poly(rng, ctx, 4, 4);
        let (np, nq) = (attempt!(normal_form(&p, ctx)), attempt!(normal_form(&q, ctx)));
        let prod = attempt!(normal_form(&ctx.mul(&p, &q), ctx));
        ensure!(
            prod == attempt!(ring_arith(&np, &nq, ArithOp::Mul)),
            "sample {k}: normal form does not commute with multiplication"
        );
        let sum = attempt!(normal_form(&ctx.add(&p, &q), ctx));
        ensure!(
            sum == attempt!(ring_arith(&np, &nq, ArithOp::Add)),
            "sample {k}: normal form does not commute with addition"
        );
    }
    Outcome::Pass(format!("{SAMPLES} samples"))
}

fn poly_det_multiplicative(rng: &mut ChaCha8Rng) -> Outcome {
    let ctx = quadric(Parity::Odd, 2);
    let mut count = 0;
    for n in 1..=4 {
        for _ in 0..5 {
            let a = random_matrix(rng, &ctx, n, 2, 1);
            let b = random_matrix(rng, &ctx, n, 2, 1);
            let lhs = attempt!(attempt!(a.mul(&b)).det());
            let rhs = attempt!(a.det()).times(&attempt!(b.det()));
            ensure!(lhs == rhs, "{n}x{n}: det(AB) = {lhs}, det(A)det(B) = {rhs}");
            count += 1;
        }
    }
    Outcome::Pass(format!("{count} pairs up to 4x4"))
}

fn poly_adjugate_identity(rng: &mut ChaCha8Rng) -> Outcome {
    let ctx = quadric(Parity::Even, 2);
    for k in 0..20 {
        let m = random_matrix(rng, &ctx, 3, 3, 2);
        let adj = attempt!(m.adjugate());
        let det = attempt!(m.det());
        ensure!(
            attempt!(m.mul(&adj)) == Matrix::scalar_like(3, &det),
            "sample {k}: M adj(M) != det(M) I"
        );
    }
    Outcome::Pass("20 random 3x3 matrices".into())
}

fn poly_prime_field_agreement(rng: &mut ChaCha8Rng) -> Outcome {
    let p = 7u64;
    let z_ctx = quadric(Parity::Even, 2);
    let f_ctx = Arc::new(attempt!(attempt!(RingContext::new(
        z_ctx.names(),
        MonomialOrder::GradedLex,
        CoeffDomain::PrimeField(p)
    ))
    .with_relation(z_ctx.relation().unwrap().clone())));
    let modp = |q: &Polynomial| f_ctx.canonical(q.terms().iter().cloned());
    for k in 0..SAMPLES / 4 {
        let a = random_poly(rng, &z_ctx, 4, 3);
        let b = random_poly(rng, &z_ctx, 4, 3);
        let over_z = z_ctx.mul_reduced(&a, &b);
        let over_f = f_ctx.mul_reduced(&modp(&a), &modp(&b));
        ensure!(modp(&over_z) == over_f, "sample {k}: reduction mod {p} disagrees");
    }
    Outcome::Pass(format!("{} samples mod {p}", SAMPLES / 4))
}

fn suslin_alpha_identities(_: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=5 {
        let cert = attempt!(verify_suslin(n));
        ensure!(cert.holds(), "alpha_{n} certificate does not hold");
    }
    Outcome::Pass("identity n = 1..5, determinant n = 2..4".into())
}

fn suslin_beta2(_: &mut ChaCha8Rng) -> Outcome {
    let (b, cert) = attempt!(suslin_beta(2));
    let ctx = b.get(0, 0).context().clone();
    let e = |s: &str| QuotientElement::parse(&ctx, s).unwrap();
    let expected = Matrix::new(2, 2, vec![e("x1"), e("x2"), e("-y2"), e("y1")]).unwrap();
    ensure!(b == expected, "beta_2 = {b}");
    ensure!(cert.is_empty(), "beta_2 needs no steps");
    ensure!(attempt!(b.det()).value().is_one(), "det beta_2 is not 1");
    Outcome::Pass("beta_2 = [[x1, x2], [-y2, y1]], det 1".into())
}

fn unit_det(b: &RingMatrix) -> Option<BigInt> {
    let d = b.det().ok()?;
    d.value()
        .as_constant()
        .filter(|c| c == &BigInt::from(1) || c == &BigInt::from(-1))
}

fn suslin_beta3(_: &mut ChaCha8Rng) -> Outcome {
    let (b, cert) = attempt!(suslin_beta(3));
    attempt!(check_beta(3, &b, &cert));
    let Some(d) = unit_det(&b) else {
        return Outcome::Fail("det beta_3 is not a unit".into());
    };
    Outcome::Pass(format!("{} steps, det {d}", cert.len()))
}

fn suslin_beta4(_: &mut ChaCha8Rng) -> Outcome {
    match suslin_beta(4) {
        Ok((b, cert)) => {
            attempt!(check_beta(4, &b, &cert));
            ensure!(unit_det(&b).is_some(), "det beta_4 is not a unit");
            Outcome::Pass(format!("{} steps", cert.len()))
        }
        Err(e @ SuslinError::ReductionNotFound { .. }) => Outcome::Skip(e.to_string()),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn suslin_hopf(_: &mut ChaCha8Rng) -> Outcome {
    let cert = attempt!(hopf_nu_check());
    ensure!(
        cert.holds(),
        "relation pulls back to {}",
        cert.source.display(&cert.relation_image)
    );
    Outcome::Pass(format!("{} integer points", cert.specializations.len()))
}

fn clutch_psi(_: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=6 {
        let (_, cert) = attempt!(psi(n));
        ensure!(cert.holds(), "psi_{n} does not respect the relation");
    }
    Outcome::Pass("n = 1..6".into())
}

fn clutch_apply_hom_law(rng: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=3 {
        let (h, _) = attempt!(psi(n));
        for k in 0..100 {
            let a = random_element(rng, h.source(), 3, 3);
            let b = random_element(rng, h.source(), 3, 3);
            let (ha, hb) = (attempt!(h.apply(&a)), attempt!(h.apply(&b)));
            ensure!(
                attempt!(h.apply(&(&a + &b))) == ha.plus(&hb),
                "n={n} sample {k}: not additive"
            );
            ensure!(
                attempt!(h.apply(&(&a * &b))) == ha.times(&hb),
                "n={n} sample {k}: not multiplicative"
            );
        }
    }
    Outcome::Pass("100 pairs for n = 1..3".into())
}

fn random_localized(rng: &mut ChaCha8Rng, ctx: &Arc<RingContext>) -> LocalizedElement {
    let num = random_element(rng, ctx, 3, 3);
    LocalizedElement::new(num, rng.gen_range(0..3), rng.gen_range(0..3)).unwrap()
}

fn clutch_localized_equality(rng: &mut ChaCha8Rng) -> Outcome {
    let ctx = quadric(Parity::Even, 2);
    for k in 0..SAMPLES / 2 {
        let a = random_localized(rng, &ctx);
        // the same element written over a larger denominator
        let (da, db) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let scale = attempt!(LocalizedElement::unit(&ctx, 1, da, db));
        let b = attempt!(LocalizedElement::new(
            a.numerator().clone(),
            a.z_pow(),
            a.one_plus_z_pow()
        ))
        .times(&scale)
        .times(&attempt!(LocalizedElement::unit(&ctx, 1, -da, -db)));
        let c = b.plus(&a.zero_like());
        ensure!(a.equals(&a.clone()), "sample {k}: not reflexive");
        ensure!(a.equals(&b) == b.equals(&a), "sample {k}: not symmetric");
        ensure!(a == b && b == c && a == c, "sample {k}: not transitive");
        let d = random_localized(rng, &ctx);
        if d.z_pow() == a.z_pow() && d.one_plus_z_pow() == a.one_plus_z_pow() {
            ensure!(
                (d == a) == (d.numerator() == a.numerator()),
                "sample {k}: equal denominators but equality disagrees with the numerators"
            );
        }
    }
    Outcome::Pass(format!("{} triples", SAMPLES / 2))
}

fn clutch_nonzerodivisors(rng: &mut ChaCha8Rng) -> Outcome {
    let mut tried = 0;
    for m in 1..=3 {
        let q = make_quadric(Parity::Even, m).unwrap();
        let ctx = q.context().clone();
        let z = q.z().unwrap();
        let one_plus_z = &z + &QuotientElement::one(&ctx);
        for k in 0..50 {
            let c = random_element(rng, &ctx, 4, 3);
            if c.is_zero() {
                continue;
            }
            tried += 1;
            ensure!(!(&c * &z).is_zero(), "m={m} sample {k}: {c} kills z");
            ensure!(!(&c * &one_plus_z).is_zero(), "m={m} sample {k}: {c} kills 1+z");
        }
    }
    Outcome::Pass(format!("{tried} nonzero samples"))
}

fn clutch_charts(_: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=4 {
        ensure!(attempt!(chart_un(n)).is_identity(), "chart U_{n} round trip fails");
    }
    for n in 1..=5 {
        for name in [SubschemeName::E, SubschemeName::Z, SubschemeName::XComplementCheck] {
            let r = attempt!(subscheme_data(name, n));
            ensure!(r.holds, "{name:?} at n={n}: residual {}", r.residual);
        }
    }
    for m in 1..=4 {
        let odd = make_quadric(Parity::Odd, m).unwrap();
        let even = make_quadric(Parity::Even, m).unwrap();
        ensure!(
            odd.base_point().satisfies(odd.context()),
            "base point of Q_{}",
            2 * m - 1
        );
        ensure!(even.base_point().satisfies(even.context()), "point 0 of Q_{}", 2 * m);
    }
    Outcome::Pass("charts n = 1..4, subschemes n = 1..5, base points".into())
}

fn clutch_generators(_: &mut ChaCha8Rng) -> Outcome {
    let mut units = Vec::new();
    for n in 1..=3 {
        let c = attempt!(generator_bundle(n));
        let cert = attempt!(verify_cocycle(&c));
        units.push(format!("n={n}: {}", cert.unit));
    }
    Outcome::Pass(units.join("; "))
}

fn clutch_negative_control(_: &mut ChaCha8Rng) -> Outcome {
    let mut c = attempt!(generator_bundle(2));
    let flipped = c.matrix.get(0, 1).negated();
    c.matrix.set(0, 1, flipped);
    match verify_cocycle(&c) {
        Err(ClutchError::InvalidCocycle { check, .. }) => Outcome::Pass(format!("rejected by the {check} check")),
        Err(e) => Outcome::Fail(format!("unexpected error {e}")),
        Ok(_) => Outcome::Fail("corrupted cocycle accepted".into()),
    }
}

/// A product of elementary matrices over `O(Q_{2n-1})`.
fn random_elementary_product(rng: &mut ChaCha8Rng, ctx: &Arc<RingContext>, size: usize) -> RingMatrix {
    let one = QuotientElement::one(ctx);
    let mut m = RingMatrix::identity_like(size, &one);
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..size);
        let j = (i + rng.gen_range(1..size)) % size;
        let mut e = RingMatrix::identity_like(size, &one);
        // unipotent, so the product has determinant 1 everywhere
        let s = random_element(rng, ctx, 2, 2);
        e.set(i, j, s);
        m = m.mul(&e).unwrap();
    }
    m
}

fn clutch_functoriality(rng: &mut ChaCha8Rng) -> Outcome {
    let mut count = 0;
    for n in 1..=2 {
        let ctx = quadric(Parity::Odd, n);
        for k in 0..5 {
            let f1 = random_elementary_product(rng, &ctx, 2);
            let f2 = random_elementary_product(rng, &ctx, 2);
            let c1 = attempt!(build_cocycle(&f1, n, "f1"));
            let c2 = attempt!(build_cocycle(&f2, n, "f2"));
            let c12 = attempt!(build_cocycle(&attempt!(f1.mul(&f2)), n, "f1 f2"));
            ensure!(
                c12.matrix == attempt!(c1.compose(&c2)),
                "n={n} sample {k}: cocycle of a product differs"
            );
            count += 1;
        }
    }
    Outcome::Pass(format!("{count} products of elementary matrices"))
}

fn clutch_line_group_law(_: &mut ChaCha8Rng) -> Outcome {
    for d1 in -3i64..=3 {
        for d2 in -3i64..=3 {
            let a = attempt!(line_cocycle(d1, 1));
            let b = attempt!(line_cocycle(d2, 1));
            let ab = attempt!(line_cocycle(d1 + d2, 1));
            ensure!(attempt!(a.compose(&b)) == ab.matrix, "degrees {d1} + {d2}");
            ensure!(
                ab.unit.x1_pow == d1 + d2,
                "degree of the composite is {}",
                ab.unit.x1_pow
            );
        }
    }
    let id = attempt!(line_cocycle(0, 1));
    ensure!(id.unit == UnitDecomposition::ONE, "degree 0 is not the trivial cocycle");
    Outcome::Pass("degrees -3..3".into())
}

fn sphere_rules_sound(_: &mut ChaCha8Rng) -> Outcome {
    let rules = RuleSet::standard();
    Outcome::Pass(format!("{} rules registered", rules.rules().len()))
}

fn sphere_derive_even(_: &mut ChaCha8Rng) -> Outcome {
    let rules = RuleSet::standard();
    for n in 1..=10 {
        let t = attempt!(derive_even(n));
        attempt!(t.replay(&rules));
        ensure!(t.goal.1 == Term::power(Term::P1, n), "n={n}: ends at {}", t.goal.1);
        ensure!(attempt!(bidegree(&t.goal.1)) == (n, n), "n={n}: bidegree");
    }
    Outcome::Pass("n = 1..10 replayed".into())
}

fn sphere_derive_contractible(_: &mut ChaCha8Rng) -> Outcome {
    let rules = RuleSet::standard();
    for n in 1..=6 {
        let t = attempt!(derive_contractible(n));
        attempt!(t.replay(&rules));
        ensure!(t.goal.1 == Term::Point, "n={n}: ends at {}", t.goal.1);
    }
    Outcome::Pass("n = 1..6 replayed".into())
}

fn sphere_trace_corruption(rng: &mut ChaCha8Rng) -> Outcome {
    let rules = RuleSet::standard();
    let trace = attempt!(derive_even(6));
    for k in 0..50 {
        let mut bad = trace.clone();
        let i = rng.gen_range(0..bad.steps.len());
        match rng.gen_range(0..4) {
            0 => bad.steps[i].after = Term::smash(bad.steps[i].after.clone(), Term::Gm),
            1 => bad.steps[i].rule = "octahedral".into(),
            2 => bad.steps[i].pos.push(0),
            _ => {
                bad.steps.remove(i);
            }
        }
        ensure!(bad.replay(&rules).is_err(), "corruption {k} at step {i} went unnoticed");
    }
    Outcome::Pass("50 corruptions detected".into())
}

fn sphere_bidegrees(_: &mut ChaCha8Rng) -> Outcome {
    for n in 1..=10 {
        ensure!(attempt!(bidegree(&Term::QuadEven(n))) == (n, n), "Qeven({n})");
        let s = Term::susp(Term::QuadOdd(n));
        ensure!(attempt!(bidegree(&s)) == (n, n), "Susp(Qodd({n}))");
    }
    Outcome::Pass("Qeven(n) and Susp(Qodd(n)) at (n, n) for n = 1..10".into())
}

fn sphere_classifier(_: &mut ChaCha8Rng) -> Outcome {
    for i in 0..=20 {
        for j in 0..=20 {
            let v = classify_smooth_model(i, j);
            let ok = match &v {
                SmoothModelVerdict::NotSmooth => i > j,
                SmoothModelVerdict::OpenCase => i + 1 < j,
                SmoothModelVerdict::SmoothModel { .. } => {
                    (i == j || i + 1 == j) && v.witness().and_then(|w| bidegree(&w).ok()) == Some((i, j))
                }
            };
            ensure!(ok, "({i}, {j}) -> {v}");
        }
    }
    Outcome::Pass("0 <= i, j <= 20".into())
}

fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..7) {
            0 => Term::S1,
            1 => Term::Gm,
            2 => Term::P1,
            3 => Term::Point,
            4 => Term::QuadOdd(rng.gen_range(1..5)),
            5 => Term::QuadEven(rng.gen_range(0..5)),
            _ => Term::X(rng.gen_range(1..5)),
        };
    }
    match rng.gen_range(0..4) {
        0 | 1 => Term::smash(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        2 => Term::susp(random_term(rng, depth - 1)),
        _ => Term::quot(Term::plus(random_term(rng, depth - 1)), random_term(rng, depth - 1)),
    }
}

fn sphere_parse_round_trip(rng: &mut ChaCha8Rng) -> Outcome {
    for k in 0..SAMPLES {
        let t = random_term(rng, 4);
        let s = t.to_string();
        let back = attempt!(parse_term(&s));
        ensure!(back == t, "sample {k}: {s} parses to {back}");
    }
    Outcome::Pass(format!("{SAMPLES} terms"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_order_and_grouping() {
        let all = check_names(Suite::All);
        assert_eq!(all.len(), CHECKS.len());
        assert!(check_names(Suite::Sphere).iter().all(|n| n.starts_with("sphere.")));
    }

    #[test]
    fn sphere_suite_is_deterministic() {
        let a = run_suite(Suite::Sphere, 7).without_timings();
        let b = run_suite_with(Suite::Sphere, 7, Execution::Sequential).without_timings();
        assert_eq!(a, b);
        assert!(a.success(), "{a}");
    }

    #[test]
    fn random_polys_respect_bounds() {
        let ctx = eight_var_ring();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_poly(&mut rng, &ctx, 4, 4);
            assert!(p.num_terms() <= 4 && p.total_degree() <= 4);
        }
    }
}
