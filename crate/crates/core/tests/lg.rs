use crepant::coh::ModelId;
use crepant::lg::*;
use crepant::mp::{with_digits, Cx};
use crepant::scalar::{q, Scalar};

fn c(x: f64) -> Cx {
    Cx::from_f64(x, 0.0)
}

#[test]
fn critical_point_counts() {
    with_digits(30, || {
        for (m, base) in [
            (ModelId::F2, vec![c(0.013), c(0.021)]),
            (ModelId::F3, vec![c(1e-3), c(1e-3)]),
            (ModelId::P112, vec![c(0.7)]),
            (ModelId::P1113, vec![c(0.3)]),
        ] {
            let lg = LgModel::new(m, Chart::Large, base).unwrap();
            let pts = lg.critical_points().unwrap();
            assert_eq!(pts.len(), m.algebra().dim());
            let ones = vec![Cx::one(); pts.len()];
            let s = residue_pairing(&ones, &ones, &pts).unwrap();
            eprintln!("{m}: <1,1> = {:e}", s.abs_f64());
            assert!(s.abs_f64() < 1e-8);
        }
    });
}

#[test]
fn gram_and_relations() {
    with_digits(30, || {
        for (m, qv) in [
            (ModelId::F2, vec![c(0.01), c(0.02)]),
            (ModelId::F3, vec![c(0.01), c(0.02)]),
            (ModelId::P112, vec![c(0.04)]),
            (ModelId::P1113, vec![c(0.01)]),
        ] {
            let g = gram_check(m, &qv, 16).unwrap();
            let r = ring_relations(m, &qv).unwrap();
            eprintln!("{m}: gram {:e} relations {:?}", g.max_deviation, r);
            assert!(g.max_deviation < 1e-8);
            assert!(r.iter().all(|x| x.1 < 1e-8));
        }
    });
}

#[test]
fn connection_sixth_power() {
    let m6 = connection_power_p1113(6);
    for (i, row) in m6.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if i == j {
                assert_eq!(e, &vec![q(0, 1), q(0, 1), q(0, 1), q(1, 27)]);
            } else {
                assert!(e.is_empty());
            }
        }
    }
}

#[test]
fn connection_eigenvalues_are_critical_values() {
    with_digits(30, || {
        let lg = LgModel::new(ModelId::P1113, Chart::Large, vec![c(1.0)]).unwrap();
        let vals: Vec<(f64, f64)> = lg.critical_points().unwrap().iter().map(|p| p.value.to_f64()).collect();
        for e in connection_eigenvalues_p1113(1.0) {
            let v = (6.0 * e.re, 6.0 * e.im);
            assert!(vals.iter().any(|w| (w.0 - v.0).hypot(w.1 - v.1) < 1e-8), "{v:?} not in {vals:?}");
        }
    });
}

#[test]
fn chart_change_preserves_critical_values() {
    with_digits(30, || {
        for (m, w) in [(ModelId::F2, 2i64), (ModelId::F3, 3)] {
            let (y1, y2) = (c(0.3), c(0.05));
            let r = y1.ln().scale_q(&q(1, w)).exp();
            let large = LgModel::new(m, Chart::Large, vec![y1.clone(), y2.clone()]).unwrap();
            let orb = LgModel::new(m, Chart::Orbifold, vec![r.inv().unwrap(), r.mul(&y2)]).unwrap();
            let a = large.critical_points().unwrap();
            let b = orb.critical_points().unwrap();
            for p in &a {
                assert!(b.iter().any(|o| o.value.sub(&p.value).abs_f64() < 1e-10));
            }
        }
    });
}
