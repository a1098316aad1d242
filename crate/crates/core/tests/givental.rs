use crepant::givental::*;
use crepant::scalar::{Const, Scalar};

fn show(u: &SympMap<Const>) -> String {
    let mut s = String::new();
    for r in 0..u.target.dim() {
        for c in 0..u.source.dim() {
            let e = u.entry(r, c);
            let t: Vec<String> = e.terms.iter().map(|(k, v)| format!("z^{k}·({})", v[0])).collect();
            s += &format!("[{}] ", t.join(" + "));
        }
        s += "\n";
    }
    s
}

#[test]
fn derived_matches_reference() {
    for pair in [Pair::P112F2, Pair::P1113F3] {
        let d = u_matrix_derived::<Const>(pair).unwrap();
        let p = u_matrix_reference(pair);
        eprintln!("{}\nderived:\n{}reference:\n{}", pair.name(), show(&d), show(&p));
        for (a, b) in d.cols.iter().zip(&p.cols) {
            assert_eq!(a.sub(b).terms.values().flatten().filter(|x| !x.is_zero()).count(), 0);
        }
    }
}

#[test]
fn reference_matrices_satisfy_all_properties() {
    for pair in [Pair::P112F2, Pair::P1113F3] {
        let u = u_matrix_reference(pair);
        assert!(check_symplectic(&u).is_empty(), "{}", pair.name());
        let g = check_grading(&u).unwrap();
        assert!(g.ok(), "{} {:?}", pair.name(), g);
        assert!(check_monodromy_equivariance(&u, pair).unwrap().is_empty());
        let (o, w) = check_opposite(&u);
        match pair {
            Pair::P1113F3 => {
                assert_eq!(o, Opposite::NotPreserved);
                assert_eq!(w.len(), 1);
                assert_eq!((w[0].0, w[0].1, w[0].2), (3, 4, 1));
            }
            Pair::P112F2 => assert_eq!(o, Opposite::Preserved),
        }
    }
}

#[test]
fn continuation_identity_exact_and_numeric() {
    for pair in [Pair::P112F2, Pair::P1113F3] {
        let ub = u_bar_derived::<Const>(pair).unwrap();
        for d in continuation_differences::<Const>(pair, &ub, 6).unwrap() {
            assert!(d.terms.values().flatten().all(|x| x.is_zero()), "{}", pair.name());
        }
    }
    let err = check_continuation_identity(Pair::P1113F3, 6, 40).unwrap();
    assert!(err <= 1e-20, "{err:e}");
}

#[test]
fn p112_factorizes_through_z_infinity() {
    use crepant::coh::{jet_apply, Analytic, ModelId};
    use crepant::series::LaurentZ;
    let u = u_matrix_reference(Pair::P112F2);
    let f2 = ModelId::F2.algebra();
    let p1 = f2.generator("p1").unwrap();
    let p2 = f2.generator("p2").unwrap();
    // −πi(p₂ − 2p₁)/(2z)
    let c = Const::pi().mul(&Const::i()).scale_q(&crepant::scalar::q(-1, 2));
    let x: Vec<Const> = p2.iter().zip(p1).map(|(b, a)| Const::from_q(&(b - a * crepant::scalar::qi(2))).mul(&c)).collect();
    let e = jet_apply::<Const>(&Analytic::Exp, &LaurentZ::mono(-1, x), &f2).unwrap();
    let inf = u.at_infinity();
    for j in 0..4 {
        let col: Vec<Const> = (0..4).map(|r| inf[r][j].clone()).collect();
        let lhs = LaurentZ::constant(col).mul(&e, &f2).unwrap();
        assert!(lhs.sub(&u.cols[j]).terms.values().flatten().all(|x| x.is_zero()));
    }
}
