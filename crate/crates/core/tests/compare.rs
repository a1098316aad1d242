use crepant::compare::{
    appendix_b_pipeline, theta_p112, theta_p1113, verify_specialization_p112, verify_theta_conjugation_p1113,
};
use crepant::givental::{u_matrix_reference, Pair};
use crepant::Scalar;

#[test]
fn theta_p1113_symbolic_properties() {
    let t = theta_p1113().unwrap();
    assert!(t.preserves_unit());
    let defects = t.pairing_defects();
    assert!(defects.is_empty(), "{defects:?}");
    assert!(t.grading_defects().is_empty(), "{:?}", t.grading_defects());
    assert!(t.q_dependent());
}

#[test]
fn theta_p112_is_u_at_infinity() {
    let t = theta_p112().unwrap();
    let u = u_matrix_reference(Pair::P112F2).at_infinity();
    assert_eq!(t.constant_matrix().unwrap(), u);
}

#[test]
fn theta_conjugates_products_p1113() {
    for qv in [1e-2, 1e-1] {
        let r = verify_theta_conjugation_p1113(qv, 30).unwrap();
        println!("{r:?}");
        assert!(r.max() <= 1e-8, "{r:?}");
    }
}

#[test]
fn appendix_pipeline() {
    let r = appendix_b_pipeline(30).unwrap();
    println!("{r:#?}");
    assert!(r.ok(1e-8));
}

#[test]
fn specialization_p112() {
    let r = verify_specialization_p112(0.04, 30).unwrap();
    println!("{r:?}");
    assert!(r.max() <= 1e-8, "{r:?}");
    assert!((r.q2.0).abs() < 1e-12 && (r.q2.1 - 0.2).abs() < 1e-12);
    assert!(verify_specialization_p112(0.0, 30).is_err());
    let _ = crepant::Cx::zero();
}
