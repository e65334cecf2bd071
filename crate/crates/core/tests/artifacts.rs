use quadric_clutch::clutch::{generator_bundle, line_cocycle, verify_cocycle, Cocycle, CocycleJson};
use quadric_clutch::par::Execution;
use quadric_clutch::quadric::{make_quadric, Parity};
use quadric_clutch::sphere::{derive_contractible, derive_even, DerivationTrace, RuleSet, TraceJson};
use quadric_clutch::suite::{run_suite, run_suite_with, Suite, SuiteReport};
use quadric_clutch::suslin::{check_beta, suslin_beta, CertificateJson, ElementaryCertificate};
use quadric_clutch::RingMatrix;

fn reparse<T: serde::Serialize + serde::de::DeserializeOwned>(v: &T) -> T {
    serde_json::from_str(&serde_json::to_string(v).unwrap()).unwrap()
}

#[test]
fn cocycle_json_round_trip_reverifies() {
    for c in [
        generator_bundle(1).unwrap(),
        generator_bundle(2).unwrap(),
        line_cocycle(-3, 1).unwrap(),
    ] {
        let back = Cocycle::from_json(&reparse(&c.to_json())).unwrap();
        assert_eq!(back.matrix, c.matrix);
        assert_eq!(back.unit, c.unit);
        verify_cocycle(&back).unwrap();
    }
}

#[test]
fn cocycle_json_without_source_still_verifies() {
    let c = generator_bundle(2).unwrap();
    let mut j: CocycleJson = c.to_json();
    j.source = None;
    let cert = verify_cocycle(&Cocycle::from_json(&j).unwrap()).unwrap();
    assert!(!cert.source_checked);
    assert!(cert.adjugate_identity && cert.inverse_identity);
}

#[test]
fn certificate_json_round_trip_replays() {
    let (beta, cert) = suslin_beta(3).unwrap();
    let ctx = make_quadric(Parity::Odd, 3).unwrap().context().clone();
    let j: CertificateJson = reparse(&cert.to_json());
    let back = ElementaryCertificate::from_json(&ctx, &j).unwrap();
    assert_eq!(back, cert);
    let beta_back = RingMatrix::from_json(&ctx, &reparse(&beta.to_json())).unwrap();
    check_beta(3, &beta_back, &back).unwrap();
}

#[test]
fn trace_json_round_trip_replays() {
    let rules = RuleSet::standard();
    for t in [derive_even(7).unwrap(), derive_contractible(4).unwrap()] {
        let j: TraceJson = reparse(&t.to_json());
        let back = DerivationTrace::from_json(&j).unwrap();
        assert_eq!(back, t);
        back.replay(&rules).unwrap();
    }
}

#[test]
fn serialization_is_byte_stable() {
    let a = serde_json::to_string(&generator_bundle(3).unwrap().to_json()).unwrap();
    let b = serde_json::to_string(&generator_bundle(3).unwrap().to_json()).unwrap();
    assert_eq!(a, b);
    let r1: SuiteReport = run_suite(Suite::Clutch, 11).without_timings();
    let r2 = run_suite_with(Suite::Clutch, 11, Execution::Sequential).without_timings();
    assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
}

#[test]
fn verdicts_do_not_depend_on_seed() {
    let names = |s| {
        run_suite(Suite::Poly, s)
            .checks
            .into_iter()
            .map(|c| (c.name, c.status))
            .collect::<Vec<_>>()
    };
    assert_eq!(names(1), names(2));
}
