//! Property tests for the algebraic invariants the rest of the crate relies on.

use proptest::prelude::*;

use crepant::coh::ModelId;
use crepant::compare::RatFn;
use crepant::givental::omega;
use crepant::mp::{with_digits, Cx};
use crepant::scalar::{ps, q, q_parse, q_to_string, qi, Scalar, K, Q};
use crepant::series::{compose, revert, LaurentZ};

fn rat() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn vec_q(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rat(), n)
}

/// Elements supported on classes whose products are all defined.
fn untwisted(m: ModelId, v: Vec<Q>) -> Vec<Q> {
    let alg = m.algebra();
    let twisted: Vec<bool> = (0..alg.dim()).map(|i| !alg.product_defined(i, i)).collect();
    v.into_iter().zip(twisted).map(|(x, t)| if t { qi(0) } else { x }).collect()
}

fn model() -> impl Strategy<Value = ModelId> {
    prop::sample::select(ModelId::ALL.to_vec())
}

fn laurent(dim: usize) -> impl Strategy<Value = LaurentZ<Q>> {
    prop::collection::vec((-3i32..=3, vec_q(dim)), 0..4).prop_map(move |ts| {
        let mut l = LaurentZ::zero(dim);
        for (k, v) in ts {
            l.add_at(k, &v);
        }
        l
    })
}

fn k_elem() -> impl Strategy<Value = K> {
    (rat(), rat(), rat(), rat()).prop_map(|(a, b, c, d)| K::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cup_product_is_associative_and_commutative(
        m in model(), a in vec_q(6), b in vec_q(6), c in vec_q(6)
    ) {
        let alg = m.algebra();
        let n = alg.dim();
        let a = untwisted(m, a[..n].to_vec());
        let b = untwisted(m, b[..n].to_vec());
        let c = alg_vec(&c, n);
        let ab = alg.mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &alg.mul(&b, &a).unwrap());
        let l = alg.mul(&ab, &c).unwrap();
        let r = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn pairing_is_symmetric_and_frobenius(m in model(), a in vec_q(6), b in vec_q(6), c in vec_q(6)) {
        let alg = m.algebra();
        let n = alg.dim();
        let a = untwisted(m, a[..n].to_vec());
        let b = alg_vec(&b, n);
        let c = alg_vec(&c, n);
        prop_assert_eq!(alg.pair(&b, &c), alg.pair(&c, &b));
        let lhs = alg.pair(&alg.mul(&a, &b).unwrap(), &c);
        let rhs = alg.pair(&b, &alg.mul(&a, &c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_is_antisymmetric(m in model(), f in laurent(6), g in laurent(6)) {
        let alg = m.algebra();
        let n = alg.dim();
        let f = restrict(&f, n);
        let g = restrict(&g, n);
        prop_assert_eq!(omega(&f, &g, &alg), omega(&g, &f, &alg).neg());
    }

    #[test]
    fn reversion_round_trips(tail in vec_q(7), a1 in rat().prop_filter("unit", |x| !x.is_zero())) {
        let mut f = vec![qi(0), a1];
        f.extend(tail);
        let n = f.len();
        let g = revert(&f, n).unwrap();
        let id = compose(&f, &g, n);
        let mut x = vec![qi(0); n];
        x[1] = qi(1);
        prop_assert_eq!(id, x.clone());
        prop_assert_eq!(compose(&g, &f, n), x);
    }

    #[test]
    fn series_inverse_and_exp(a in vec_q(8), c0 in rat().prop_filter("unit", |x| !x.is_zero())) {
        let n = a.len();
        let mut u = a.clone();
        u[0] = c0;
        let inv = ps::inv(&u, n).unwrap();
        let mut one = vec![qi(0); n];
        one[0] = qi(1);
        prop_assert_eq!(ps::mul(&u, &inv, n), one);
        let mut b = a.clone();
        b[0] = qi(0);
        let neg: Vec<Q> = b.iter().map(|x| -x).collect();
        let prod = ps::mul(&ps::exp(&b, n), &ps::exp(&neg, n), n);
        let mut one = vec![qi(0); n];
        one[0] = qi(1);
        prop_assert_eq!(prod, one);
    }

    #[test]
    fn number_field_axioms(a in k_elem(), b in k_elem(), c in k_elem()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        }
    }

    #[test]
    fn rational_text_round_trip(x in rat()) {
        prop_assert_eq!(q_parse(&q_to_string(&x)).unwrap(), x);
    }

    #[test]
    fn rational_functions_form_a_field(
        p in prop::collection::vec(-5i64..=5, 1..4),
        r in prop::collection::vec(-5i64..=5, 1..4),
        s in prop::collection::vec(-5i64..=5, 1..4),
    ) {
        let (p, r, s) = (RatFn::poly(&p), RatFn::poly(&r), RatFn::poly(&s));
        prop_assert!(p.mul(&r.add(&s)).sub(&p.mul(&r).add(&p.mul(&s))).is_zero());
        if !r.is_zero() {
            let f = p.div(&r).unwrap();
            prop_assert!(f.mul(&r).sub(&p).is_zero());
            // Euler operator is a derivation.
            let lhs = f.mul(&s).euler();
            let rhs = f.euler().mul(&s).add(&f.mul(&s.euler()));
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn complex_exp_log_round_trip(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        with_digits(30, || {
            let x = Cx::from_f64(re, im);
            let y = x.exp().ln();
            let d = y.sub(&x).abs_f64();
            assert!(d < 1e-25, "exp/ln residual {d}");
        });
    }
}

fn alg_vec(v: &[Q], n: usize) -> Vec<Q> {
    v[..n].to_vec()
}

fn restrict(l: &LaurentZ<Q>, n: usize) -> LaurentZ<Q> {
    let mut out = LaurentZ::zero(n);
    for (k, v) in &l.terms {
        out.add_at(*k, &v[..n]);
    }
    out
}
