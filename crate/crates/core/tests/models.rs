use crepant::coh::ModelId;
use crepant::mirror::{flat_compare_p1113, inverse_mirror_map, mirror_map};
use crepant::models::{box_operators, gw_extract, i_function, pf_check, pf_operators};
use crepant::scalar::{factorial, q, qi, Q};
use crepant::series::{CohSeries, PowerSeries};

fn fq(n: u32) -> Q {
    Q::from_integer(factorial(n))
}

#[test]
fn p1113_leading_terms() {
    let i = i_function(ModelId::P1113, &qi(1)).unwrap();
    let alg = ModelId::P1113.algebra();
    let t13 = alg.label_index("1_1/3").unwrap();
    let t23 = alg.label_index("1_2/3").unwrap();
    assert_eq!(i.coeff(&[1]).coeff(-4)[t13], qi(27));
    assert_eq!(i.coeff(&[2]).coeff(-5)[t23], q(27, 16));
    // y z⁻⁶/6 in the unit direction
    assert_eq!(i.coeff(&[3]).coeff(-6)[0], q(1, 6));
    assert_eq!(i.coeff(&[0]).terms.len(), 1);
}

#[test]
fn picard_fuchs_annihilates_all_models() {
    for (m, ord) in [(ModelId::F2, 6), (ModelId::F3, 5), (ModelId::P112, 4), (ModelId::P1113, 3)] {
        for (name, ok) in pf_check(m, &qi(ord)).unwrap() {
            assert!(ok, "{m}: {name}");
        }
    }
}

#[test]
fn box_builder_matches_hand_written_systems() {
    for m in ModelId::ALL {
        let built = box_operators(&m.charges()).unwrap();
        let hand = pf_operators(m);
        assert_eq!(built.len(), hand.len(), "{m}");
        for h in &hand {
            assert!(built.iter().any(|b| b.expand() == h.expand()), "{m}: {}", h.name);
        }
    }
}

/// (2k−1)!/(k!)² with the F3 variant (3k−1)!/(k!)³.
fn hyper(k: u32, w: u32) -> Q {
    fq(w * k - 1) / num_traits::pow(fq(k), w as usize)
}

#[test]
fn f3_mirror_map_closed_form() {
    let n = 8;
    let mm = mirror_map(ModelId::F3, n).unwrap();
    for k in 1..=n as u32 {
        let sign = if k % 2 == 0 { qi(1) } else { qi(-1) };
        assert_eq!(mm.f[0].coeff(&[k as i64, 0]), qi(3) * &sign * hyper(k, 3));
        assert_eq!(mm.f[1].coeff(&[k as i64, 0]), -sign * hyper(k, 3));
    }
    assert!(mm.f[0].terms.keys().all(|e| e[1] == 0));
}

#[test]
fn f2_mirror_map_closed_form() {
    let n = 10i64;
    let mm = mirror_map(ModelId::F2, n).unwrap();
    let qy = mm.q_over_y().unwrap();
    // √(1−4y) by the binomial series, then q1/y1 = 4/(1+√(1−4y))², q2/y2 = (1+√(1−4y))/2
    let mut s = vec![qi(0); n as usize + 1];
    let mut c = qi(1);
    for k in 0..=n as usize {
        s[k] = c.clone() * num_traits::pow(qi(-4), k);
        c = c * (q(1, 2) - qi(k as i64)) / qi(k as i64 + 1);
    }
    let root = PowerSeries::from_dense(&s);
    let one = PowerSeries::constant(1, n, qi(1));
    let a = one.add(&root);
    let q1 = a.mul(&a).inv().unwrap().scale(&qi(4));
    let q2 = a.scale(&q(1, 2));
    for k in 0..=n {
        assert_eq!(qy[0].coeff(&[k, 0]), q1.coeff(&[k]), "q1 at {k}");
        assert_eq!(qy[1].coeff(&[k, 0]), q2.coeff(&[k]), "q2 at {k}");
    }
}

#[test]
fn inverse_mirror_map_round_trip() {
    let n = 6;
    let v = inverse_mirror_map(ModelId::F2, n).unwrap();
    // y1 = q1/(1+q1)² ⇒ v1 = 1/(1+q1)²
    let one = PowerSeries::constant(2, n, qi(1));
    let q1 = PowerSeries::var(2, n, 0);
    let a = one.add(&q1);
    assert_eq!(v[0], a.mul(&a).inv().unwrap());
    assert_eq!(v[1], a);
}

#[test]
fn j_function_has_no_z_inverse_term() {
    for m in [ModelId::F2, ModelId::F3] {
        let j = gw_extract(m, 4).unwrap();
        for (e, c) in &j.series.terms {
            if e.iter().any(|&x| x != 0) {
                assert!(c.coeff(-1).iter().all(num_traits::Zero::is_zero), "{m} {e:?}");
                assert!(c.max_pow().unwrap() <= -2);
            }
        }
    }
}

#[test]
fn orbifold_potential_coefficients() {
    let fc = flat_compare_p1113(11).unwrap();
    let d = &fc.dfdt;
    assert_eq!(d[2], q(1, 2));
    assert_eq!(d[5], -qi(1) / (qi(9) * fq(5)));
    assert_eq!(d[8], qi(1) / (qi(3) * fq(8)));
    assert_eq!(d[11], -qi(1093) / (qi(243) * fq(11)));
    for k in [0, 1, 3, 4, 6, 7, 9, 10] {
        assert!(num_traits::Zero::is_zero(&d[k]));
    }
}

#[test]
fn series_json_round_trip() {
    let i = i_function(ModelId::P1113, &qi(2)).unwrap();
    let back = CohSeries::<Q>::from_json(&i.to_json()).unwrap();
    assert_eq!(back, i);
}
