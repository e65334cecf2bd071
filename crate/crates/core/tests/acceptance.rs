//! One PASS/FAIL line per acceptance criterion on the raw stdout handle.
//! The test fails if any criterion fails.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quadric_clutch::clutch::{generator_bundle, verify_cocycle, ClutchError, UnitDecomposition};
use quadric_clutch::linalg::Matrix;
use quadric_clutch::poly::QuotientElement;
use quadric_clutch::quadric::{make_quadric, psi, LocalizedElement, Parity};
use quadric_clutch::ring::RingElem;
use quadric_clutch::sphere::{
    bidegree, classify_smooth_model, derive_contractible, derive_even, RuleSet, SmoothModelVerdict, Term,
};
use quadric_clutch::suite::{run_suite, CheckStatus, Suite};
use quadric_clutch::suslin::{alpha_on_quadric, check_beta, hopf_nu_check, suslin_alpha, suslin_beta, verify_suslin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const PSI_LIMIT: Duration = Duration::from_secs(1);
const SUSLIN_LIMIT: Duration = Duration::from_secs(30);
const HOPF_LIMIT: Duration = Duration::from_secs(5);
const SUITE_LIMIT: Duration = Duration::from_secs(180);
const SEED: u64 = 20_240_117;
const POINTS: usize = 25;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! require {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(limit: Duration, elapsed: Duration, what: &str) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn psi_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut slowest = Duration::ZERO;
    for n in 1..=6 {
        let start = Instant::now();
        let (hom, cert) = psi(n).map_err(|e| e.to_string())?;
        let relation = make_quadric(Parity::Odd, n).unwrap().relation().clone();
        let image = hom.apply_poly(&relation);
        let elapsed = start.elapsed();
        within(PSI_LIMIT, elapsed, &format!("psi_{n}"))?;
        slowest = slowest.max(elapsed);
        require!(cert.holds(), "psi_{n} certificate fails");
        require!(
            image.numerator().is_zero(),
            "psi_{n} sends the relation to {}",
            image.numerator()
        );

        // oracle: the images of x_i, y_i at rational points of Q_{2n} pair to 1
        let tctx = hom.target().context().clone();
        for _ in 0..POINTS {
            let (vals, z) = even_point(&mut rng, n);
            let coords = coords_of(&tctx, &vals);
            let at = |name: &str| eval_localized(hom.image_of(name).unwrap(), &coords, &z);
            let pairing: BigRational = (1..=n).map(|i| at(&format!("x{i}")) * at(&format!("y{i}"))).sum();
            require!(pairing.is_one(), "psi_{n} at {vals:?}: pairing {pairing}");
        }
    }
    Ok(format!(
        "n = 1..6, slowest {slowest:?} (< {PSI_LIMIT:?}), {POINTS} rational points each"
    ))
}

fn suslin_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let start = Instant::now();
    for n in 1..=5 {
        let cert = verify_suslin(n).map_err(|e| e.to_string())?;
        require!(cert.holds(), "alpha_{n} certificate fails");
        // oracle: integer evaluation and a fraction-free determinant
        let alpha = suslin_alpha(n).unwrap();
        let ctx = alpha.get(0, 0).context().clone();
        for _ in 0..5 {
            let xs: Vec<BigInt> = (0..n).map(|_| big(rng.gen_range(-4..=4))).collect();
            let ys: Vec<BigInt> = (0..n).map(|_| big(rng.gen_range(-4..=4))).collect();
            let mut named = Vec::new();
            for i in 0..n {
                named.push((format!("x{}", i + 1), xs[i].clone()));
                named.push((format!("y{}", i + 1), ys[i].clone()));
            }
            let swapped: Vec<_> = named
                .iter()
                .map(|(k, v)| (k.replace('x', "t").replace('y', "x").replace('t', "y"), v.clone()))
                .collect();
            let a = eval_matrix(&alpha, &coords_of(&ctx, &named));
            let b = eval_matrix(&alpha, &coords_of(&ctx, &swapped));
            let pairing: BigInt = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
            for (i, row) in a.iter().enumerate() {
                for (j, col) in b.iter().enumerate() {
                    let entry: BigInt = row.iter().zip(col).map(|(p, q)| p * q).sum();
                    let expected = if i == j { pairing.clone() } else { BigInt::zero() };
                    require!(
                        entry == expected,
                        "alpha_{n} identity at ({i},{j}) for x={xs:?} y={ys:?}"
                    );
                }
            }
            if (2..=4).contains(&n) {
                let det = bareiss_det(a);
                require!(
                    det == pairing.pow(1 << (n - 2)),
                    "det alpha_{n} = {det} at x={xs:?} y={ys:?}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    within(SUSLIN_LIMIT, elapsed, "Suslin identities")?;
    Ok(format!(
        "identities n = 1..5, determinants n = 2..4, {elapsed:?} (< {SUSLIN_LIMIT:?})"
    ))
}

fn beta2_ground_truth() -> Verdict {
    let (beta, cert) = suslin_beta(2).map_err(|e| e.to_string())?;
    let q = make_quadric(Parity::Odd, 2).unwrap();
    let ctx = q.context().clone();
    let e = |s: &str| QuotientElement::parse(&ctx, s).unwrap();
    let expected = Matrix::new(2, 2, vec![e("x1"), e("x2"), e("-y2"), e("y1")]).unwrap();
    require!(beta == expected, "beta_2 =\n{beta}");
    check_beta(2, &beta, &cert).map_err(|e| e.to_string())?;
    let det = beta.det().unwrap();
    require!(det.value().is_one(), "det beta_2 reduces to {det}");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..POINTS {
        let coords = coords_of(&ctx, &odd_point(&mut rng, 2));
        require!(
            bareiss_det(eval_matrix(&beta, &coords)).is_one(),
            "det beta_2 is not 1 at {coords:?}"
        );
    }
    Ok("beta_2 = [[x1, x2], [-y2, y1]], det = 1 in O(Q3)".into())
}

fn beta3_certificate() -> Verdict {
    let (beta, cert) = suslin_beta(3).map_err(|e| e.to_string())?;
    check_beta(3, &beta, &cert).map_err(|e| e.to_string())?;
    let alpha = alpha_on_quadric(3).unwrap();
    let one = QuotientElement::one(alpha.get(0, 0).context());
    let replayed = cert.replay(&alpha).map_err(|e| e.to_string())?;
    require!(
        replayed == beta.direct_sum(&Matrix::identity_like(1, &one)),
        "replay gives\n{replayed}"
    );
    let det = beta.det().unwrap();
    let c = det.value().as_constant();
    require!(
        c == Some(BigInt::one()) || c == Some(-BigInt::one()),
        "det beta_3 = {det}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let ctx = alpha.get(0, 0).context().clone();
    for _ in 0..POINTS {
        let coords = coords_of(&ctx, &odd_point(&mut rng, 3));
        let d = bareiss_det(eval_matrix(&beta, &coords));
        require!(Some(d.clone()) == c, "det beta_3 = {d} at {coords:?}");
    }
    Ok(format!(
        "{} elementary steps, replay = beta_3 (+) I1, det {}",
        cert.len(),
        c.unwrap()
    ))
}

fn generator_cocycle() -> Verdict {
    let c = generator_bundle(2).map_err(|e| e.to_string())?;
    let ctx = make_quadric(Parity::Even, 2).unwrap().context().clone();
    let l = |s: &str, a, b| LocalizedElement::new(QuotientElement::parse(&ctx, s).unwrap(), a, b).unwrap();
    let expected = Matrix::new(2, 2, vec![l("x1", 1, 0), l("x2", 1, 0), l("-y2", 0, 1), l("y1", 0, 1)]).unwrap();
    require!(c.matrix == expected, "cocycle =\n{}", c.matrix);
    require!(c.unit == UnitDecomposition::ONE, "unit {}", c.unit);
    require!(
        (c.unit.sign, c.unit.z_pow, c.unit.one_plus_z_pow) == (1, 0, 0),
        "unit {}",
        c.unit
    );
    verify_cocycle(&c).map_err(|e| e.to_string())?;

    let mut bad = c.clone();
    let flipped = bad.matrix.get(1, 0).negated();
    bad.matrix.set(1, 0, flipped);
    match verify_cocycle(&bad) {
        Err(ClutchError::InvalidCocycle { check, .. }) => Ok(format!(
            "[[x1/z, x2/z], [-y2/(1+z), y1/(1+z)]], unit (+1, 0, 0); sign flip rejected by {check}"
        )),
        Err(e) => Err(format!("negative control failed with {e}")),
        Ok(_) => Err("negative control accepted".into()),
    }
}

fn hopf_nu() -> Verdict {
    let start = Instant::now();
    let cert = hopf_nu_check().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(HOPF_LIMIT, elapsed, "Hopf check")?;
    require!(
        cert.holds(),
        "relation image {}",
        cert.source.display(&cert.relation_image)
    );
    // oracle: integer pairs with det M1 - det M2 = 1
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let r = |rng: &mut ChaCha8Rng| big(rng.gen_range(-6..=6));
    for _ in 0..POINTS {
        let (e, f, g, h) = (r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng));
        let z = &e * &h - &f * &g;
        let (b, c) = (r(&mut rng), r(&mut rng));
        let (a, d) = (big(1), &z + 1 + &b * &c);
        let vals = [
            ("a", a),
            ("b", b),
            ("c", c),
            ("d", d),
            ("e", e),
            ("f", f),
            ("g", g),
            ("h", h),
        ];
        let coords = point(&cert.source, &vals);
        let at = |name: &str| {
            let (_, p) = cert.images.iter().find(|(n, _)| n == name).unwrap();
            eval(p, &coords)
        };
        let lhs = at("x1") * at("y1") + at("x2") * at("y2");
        let zi = at("z");
        require!(lhs == &zi + &zi * &zi, "image off Q4 at {vals:?}");
    }
    Ok(format!(
        "relation image 0, {POINTS} integer pairs, {elapsed:?} (< {HOPF_LIMIT:?})"
    ))
}

fn sphere_derivations() -> Verdict {
    let rules = RuleSet::standard();
    for n in 1..=10 {
        let t = derive_even(n).map_err(|e| e.to_string())?;
        t.replay(&rules).map_err(|e| e.to_string())?;
        require!(
            t.goal == (Term::QuadEven(n), Term::power(Term::P1, n)),
            "derive_even({n}) goal"
        );
        require!(bidegree(&Term::QuadEven(n)) == Ok((n, n)), "bidegree Qeven({n})");
        require!(
            bidegree(&Term::susp(Term::QuadOdd(n))) == Ok((n, n)),
            "bidegree Susp(Qodd({n}))"
        );
    }
    for n in 1..=6 {
        let t = derive_contractible(n).map_err(|e| e.to_string())?;
        t.replay(&rules).map_err(|e| e.to_string())?;
        require!(t.goal == (Term::X(n), Term::Point), "derive_contractible({n}) goal");
    }
    Ok("even n <= 10 and contractible n <= 6 replayed; bidegrees (n, n)".into())
}

fn classifier_table() -> Verdict {
    for i in 0..=20u32 {
        for j in 0..=20u32 {
            let v = classify_smooth_model(i, j);
            match &v {
                SmoothModelVerdict::NotSmooth => require!(i > j, "({i},{j}) NotSmooth"),
                SmoothModelVerdict::OpenCase => require!(i + 1 < j, "({i},{j}) OpenCase"),
                SmoothModelVerdict::SmoothModel { .. } => {
                    let w = v.witness().ok_or(format!("({i},{j}) witness unparsable"))?;
                    let quadric = if i == j { Term::QuadEven(i) } else { Term::QuadOdd(j) };
                    require!(i == j || i + 1 == j, "({i},{j}) SmoothModel");
                    require!(w == quadric, "({i},{j}) witness {w}");
                    require!(bidegree(&w) == Ok((i, j)), "({i},{j}) witness bidegree");
                }
            }
        }
    }
    Ok("441 cells, verdicts and witness bidegrees as expected".into())
}

fn algebra_suites() -> Verdict {
    let start = Instant::now();
    let report = run_suite(Suite::All, SEED);
    let elapsed = start.elapsed();
    within(SUITE_LIMIT, elapsed, "check --suite all")?;
    for name in [
        "poly.ring_axioms",
        "poly.normal_form_idempotent",
        "poly.homomorphism_law",
    ] {
        let rec = report
            .checks
            .iter()
            .find(|c| c.name == name)
            .ok_or(format!("{name} missing"))?;
        require!(rec.status == CheckStatus::Pass, "{name}: {}", rec.detail);
        require!(rec.detail.contains("200"), "{name} ran {}", rec.detail);
    }
    let failed: Vec<_> = report.checks.iter().filter(|c| c.status == CheckStatus::Fail).collect();
    require!(failed.is_empty(), "failing checks: {failed:?}");
    Ok(format!(
        "{} passed, {} skipped, {elapsed:?} (< {SUITE_LIMIT:?})",
        report.passed, report.skipped
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("psi-identity", psi_identity),
        ("suslin-identities", suslin_identities),
        ("beta2-ground-truth", beta2_ground_truth),
        ("beta3-certificate", beta3_certificate),
        ("generator-cocycle", generator_cocycle),
        ("hopf-nu", hopf_nu),
        ("sphere-derivations", sphere_derivations),
        ("classifier-table", classifier_table),
        ("algebra-suites", algebra_suites),
    ];
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failures = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => writeln!(out, "PASS {} {name}: {detail}", k + 1).unwrap(),
            Err(detail) => {
                writeln!(out, "FAIL {} {name}: {detail}", k + 1).unwrap();
                failures.push(*name);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
