//! Acceptance criteria 1–11, one PASS/FAIL line each. Exits nonzero when any
//! criterion fails.

use std::time::Instant;

use crepant::barnes::{barnes_integral, direct_sum, left_sum, relative_error, vanishing_residue_check};
use crepant::coh::ModelId;
use crepant::compare::{
    appendix_b_pipeline, theta_p1113, verify_specialization_p112, verify_theta_conjugation_p1113,
};
use crepant::givental::*;
use crepant::lg::{connection_power_p1113, gram_check, ring_relations, Chart, LgModel};
use crepant::mirror::{flat_compare_p1113, inverse_mirror_map, mirror_map};
use crepant::models::pf_check;
use crepant::mp::{with_digits, Cx};
use crepant::scalar::{factorial, q, qi, Const, Scalar, Q};
use crepant::series::PowerSeries;

type Outcome = Result<(bool, String), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_picard_fuchs() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for m in ModelId::ALL {
        for (name, ok) in pf_check(m, &qi(10)).map_err(err)? {
            if !ok {
                bad.push(format!("{m}:{name}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((bad.is_empty() && secs < 60.0, format!("order 10, 4 models, {secs:.1}s, failures {bad:?}")))
}

fn c2_mirror_maps() -> Outcome {
    let v = inverse_mirror_map(ModelId::F3, 6).map_err(err)?;
    let y1: Vec<Q> = (0..5).map(|k| v[0].coeff(&[k, 0])).collect();
    let y2: Vec<Q> = (1..6).map(|k| v[1].coeff(&[k, 0])).collect();
    let ok1 = y1 == [1, 6, 9, 56, -300].map(qi);
    let ok2 = y2 == [-2, 5, -32, 286, -3038].map(qi);
    // 𝔽₂: q₁/y₁ = 4/(1+√(1−4y₁))², q₂/y₂ = (1+√(1−4y₁))/2 through order 10
    let n = 10i64;
    let qy = mirror_map(ModelId::F2, n).map_err(err)?.q_over_y().map_err(err)?;
    let mut s = vec![qi(0); n as usize + 1];
    let mut c = qi(1);
    for (k, slot) in s.iter_mut().enumerate() {
        *slot = c.clone() * num_traits::pow(qi(-4), k);
        c = c * (q(1, 2) - qi(k as i64)) / qi(k as i64 + 1);
    }
    let a = PowerSeries::constant(1, n, qi(1)).add(&PowerSeries::from_dense(&s));
    let q1 = a.mul(&a).inv().map_err(err)?.scale(&qi(4));
    let q2 = a.scale(&q(1, 2));
    let ok3 = (0..=n).all(|k| qy[0].coeff(&[k, 0]) == q1.coeff(&[k]) && qy[1].coeff(&[k, 0]) == q2.coeff(&[k]));
    Ok((ok1 && ok2 && ok3, format!("F3 y1 {ok1}, F3 y2 {ok2}, F2 closed form to order 10 {ok3}")))
}

fn c3_u_matrices() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for pair in [Pair::P1113F3, Pair::P112F2] {
        let d = u_matrix_derived::<Const>(pair).map_err(err)?;
        let p = u_matrix_reference(pair);
        let nonzero: usize =
            d.cols.iter().zip(&p.cols).map(|(a, b)| a.sub(b).terms.values().flatten().filter(|x| !x.is_zero()).count()).sum();
        ok &= nonzero == 0;
        detail.push(format!("{} differing entries {nonzero}", pair.name()));
    }
    Ok((ok, detail.join(", ")))
}

fn c4_properties() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (pair, want) in [(Pair::P1113F3, Opposite::NotPreserved), (Pair::P112F2, Opposite::Preserved)] {
        let u = u_matrix_reference(pair);
        let s = check_symplectic(&u).len();
        let g = check_grading(&u).map_err(err)?.ok();
        let m = check_monodromy_equivariance(&u, pair).map_err(err)?.len();
        let (o, _) = check_opposite(&u);
        ok &= s == 0 && g && m == 0 && o == want;
        detail.push(format!("{}: symplectic defects {s}, grading {g}, monodromy defects {m}, opposite {o:?}", pair.name()));
    }
    Ok((ok, detail.join("; ")))
}

fn c5_continuation() -> Outcome {
    let start = Instant::now();
    let ub = u_bar_derived::<Const>(Pair::P1113F3).map_err(err)?;
    let exact = continuation_differences::<Const>(Pair::P1113F3, &ub, 6)
        .map_err(err)?
        .iter()
        .all(|d| d.terms.values().flatten().all(|x| x.is_zero()));
    let e = check_continuation_identity(Pair::P1113F3, 6, 40).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((exact && e <= 1e-20 && secs < 120.0, format!("exact through 𝔶₂⁶ {exact}, numeric {e:.2e} at 40 digits, {secs:.1}s")))
}

fn c6_barnes() -> Outcome {
    let (mut worst, mut vanish) = (0.0f64, true);
    with_digits(30, || -> Result<(), String> {
        for m in [0, 1, 2] {
            let small = Cx::from_f64(0.02, 0.0);
            let large = Cx::from_f64(0.05, 0.0);
            let e1 = relative_error(&barnes_integral(m, &small).map_err(err)?, &direct_sum(m, &small).map_err(err)?);
            let e2 = relative_error(&barnes_integral(m, &large).map_err(err)?, &left_sum(m, &large).map_err(err)?);
            worst = worst.max(e1).max(e2);
        }
        Ok(())
    })?;
    let alg = ModelId::F3.algebra();
    let p1 = alg.generator("p1").ok_or("p1")?.to_vec();
    for n in 0..=3 {
        vanish &= vanishing_residue_check::<Const>(n, &alg, &p1).map_err(err)?.is_zero();
    }
    Ok((worst <= 1e-10 && vanish, format!("max relative error {worst:.2e} (m = 0, 1, 2), residues vanish for n ≤ 3 {vanish}")))
}

fn c7_landau_ginzburg() -> Outcome {
    let c = |x: f64| Cx::from_f64(x, 0.0);
    with_digits(30, || {
        let mut counts = Vec::new();
        for (m, base) in [
            (ModelId::P112, vec![c(0.7)]),
            (ModelId::P1113, vec![c(0.3)]),
            (ModelId::F2, vec![c(0.013), c(0.021)]),
            (ModelId::F3, vec![c(1e-3), c(2e-3)]),
        ] {
            counts.push(LgModel::new(m, Chart::Large, base).map_err(err)?.critical_points().map_err(err)?.len());
        }
        let (mut gram, mut rel) = (0.0f64, 0.0f64);
        for (m, qv) in [
            (ModelId::F2, vec![c(0.01), c(0.02)]),
            (ModelId::F3, vec![c(0.01), c(0.02)]),
            (ModelId::P112, vec![c(0.04)]),
            (ModelId::P1113, vec![c(0.01)]),
        ] {
            gram = gram.max(gram_check(m, &qv, 16).map_err(err)?.max_deviation);
            rel = ring_relations(m, &qv).map_err(err)?.iter().fold(rel, |a, r| a.max(r.1));
        }
        let m6 = connection_power_p1113(6);
        let want = vec![qi(0), qi(0), qi(0), q(1, 27)];
        let sixth = m6
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, e)| if i == j { *e == want } else { e.is_empty() }));
        let ok = counts == [4, 6, 4, 6] && gram <= 1e-8 && rel <= 1e-8 && sixth;
        Ok((ok, format!("counts {counts:?}, Gram {gram:.1e}, relations {rel:.1e}, sixth power = (y/27)Id {sixth}")))
    })
}

fn c8_flat_series() -> Outcome {
    let fq = |n: u32| Q::from_integer(factorial(n));
    let d = flat_compare_p1113(11).map_err(err)?.dfdt;
    let want = [
        (2, q(1, 2)),
        (5, -qi(1) / (qi(9) * fq(5))),
        (8, qi(1) / (qi(3) * fq(8))),
        (11, -qi(1093) / (qi(243) * fq(11))),
    ];
    let ok = want.iter().all(|(k, v)| d[*k] == *v);
    Ok((ok, format!("coefficients of 𝔱₁^2,5,8,11: {}", want.iter().map(|(k, _)| d[*k].to_string()).collect::<Vec<_>>().join(", "))))
}

fn c9_appendix() -> Outcome {
    let r = appendix_b_pipeline(30).map_err(err)?;
    let s = verify_specialization_p112(0.04, 30).map_err(err)?;
    let ok = r.ok(1e-8) && s.max() <= 1e-8;
    Ok((
        ok,
        format!(
            "Gram exact {}, sampled {:.1e}, [φ1,φ2]=0 {}, identities {}, limit frame {}, basis map {}, specialization {:.1e}",
            r.gram_exact,
            r.gram_numeric,
            r.commutator_zero,
            r.identities.iter().all(|x| x.1),
            r.limit_ok,
            r.basis_map_ok,
            s.max()
        ),
    ))
}

fn c10_theta() -> Outcome {
    let mut worst = 0.0f64;
    for qv in [1e-2, 1e-1] {
        worst = worst.max(verify_theta_conjugation_p1113(qv, 30).map_err(err)?.max());
    }
    let t = theta_p1113().map_err(err)?;
    let pairing = t.pairing_defects().is_empty();
    let dep = t.q_dependent();
    Ok((worst <= 1e-8 && pairing && dep, format!("conjugation residual {worst:.1e}, symbolic pairing {pairing}, q-dependent {dep}")))
}

fn c11_lefschetz() -> Outcome {
    let hl = |m: ModelId| -> Result<bool, String> {
        let alg = m.algebra();
        let omega: Vec<Q> = alg.generators().iter().fold(vec![qi(0); alg.dim()], |acc, (_, v)| {
            acc.iter().zip(v).map(|(a, b)| a + b).collect()
        });
        Ok(alg.hard_lefschetz(&omega).map_err(err)?.iter().all(|x| x.1))
    };
    let (a, b, c) = (hl(ModelId::P112)?, hl(ModelId::F2)?, hl(ModelId::P1113)?);
    let var = |m: ModelId| m.algebra().variance();
    let v = [var(ModelId::P112), var(ModelId::F2), var(ModelId::P1113), var(ModelId::F3)];
    let ints = v.iter().all(|x| x.is_integer());
    let ok = a && b && !c && v[0] == v[1] && v[2] == v[3] && ints;
    Ok((ok, format!("HL P112 {a}, F2 {b}, P1113 {c}; variances P112/F2 {}/{}, P1113/F3 {}/{}", v[0], v[1], v[2], v[3])))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Picard-Fuchs annihilation", c1_picard_fuchs),
        ("mirror maps", c2_mirror_maps),
        ("U matrices from Gamma jets", c3_u_matrices),
        ("symplectic/grading/monodromy/opposite", c4_properties),
        ("continuation identity", c5_continuation),
        ("Barnes quadrature and vanishing residues", c6_barnes),
        ("Landau-Ginzburg", c7_landau_ginzburg),
        ("flat-coordinate series", c8_flat_series),
        ("F2 flat frame and P112 specialization", c9_appendix),
        ("Theta for P1113", c10_theta),
        ("hard Lefschetz and variances", c11_lefschetz),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok((p, d)) => (p, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail} [{secs:.1}s]", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
