//! Analytic continuation of the 𝔽_w I-functions (w = 2, 3) from the large
//! radius chart (y₁, y₂) to the orbifold chart (𝔶₁, 𝔶₂) = (y₁^{−1/w}, y₁^{1/w} y₂).
//!
//! For fixed y₂-degree l, the y₁-series is a sum of residues of
//! Γ(−𝔭₁/z + ws − l) Γ(s) Γ(1−s) / Γ(1 + p₁/z + s)^w · Y^{s+p₁/z} at the
//! integers s ≥ 0, where Y = (−1)^{w−1} y₁. Closing the contour to the left
//! picks up the poles at s = (l−k)/w + 𝔭₁/(wz) instead, which gives the
//! continued series below. For even w the branch y₁ = Y e^{−iπ} contributes
//! the extra factor i^{l−k} exp(iπ𝔭₁/(2z)).
//!
//! [`barnes_integral`] evaluates the contour integral numerically for 𝔽₃ so
//! that both closed forms can be compared against it on either side of the
//! conifold radius |y₁| = 1/27.

use std::sync::Arc;

use crate::coh::{jet_apply, jet_from_taylor, Analytic, GradedAlgebra, ModelId};
use crate::error::{Error, Result};
use crate::mp::{gamma_and_polygammas, gauss_legendre, par_map, Cx};
use crate::scalar::{q, qi, Scalar, SpecialField, K, Q};
use crate::series::{CohSeries, LaurentZ, Var};

fn fw(w: i64) -> Result<ModelId> {
    match w {
        2 => Ok(ModelId::F2),
        3 => Ok(ModelId::F3),
        _ => Err(Error::Unsupported(format!("𝔽_{w}"))),
    }
}

/// The classes p₁, p₂, 𝔭₁ = p₂ − w p₁ of 𝔽_w.
fn classes<R: Scalar>(alg: &GradedAlgebra, w: i64) -> (Vec<R>, Vec<R>, Vec<R>) {
    let p1: Vec<R> = alg.lift(alg.generator("p1").expect("p1"));
    let p2: Vec<R> = alg.lift(alg.generator("p2").expect("p2"));
    let pp: Vec<R> = p2.iter().zip(&p1).map(|(b, a)| b.sub(&a.scale_q(&qi(w)))).collect();
    (p1, p2, pp)
}

/// c·v/z as a Laurent element.
fn over_z<R: Scalar>(v: &[R], c: &R) -> LaurentZ<R> {
    LaurentZ::mono(-1, v.iter().map(|x| x.mul(c)).collect())
}

/// Coefficient of 𝔶₁^k 𝔶₂^{l} in z⁻¹I_{𝔽_w}, with the prefactor 𝔶₂^{p₂/z} split off.
pub fn continued_coefficient<R: SpecialField>(w: i64, k: i64, l: i64) -> Result<LaurentZ<R>> {
    let model = fw(w)?;
    let alg = model.algebra();
    let (p1, p2, pp) = classes::<R>(&alg, w);
    let one = R::one();
    let j = l - k;
    let collide = |e: Error| match e {
        Error::Pole(_) => Error::PoleCollision { k, l },
        e => e,
    };
    let jet = |f: Analytic, x: LaurentZ<R>| jet_apply(&f, &x, &alg).map_err(collide);
    let mut fact = qi(1);
    for i in 2..=k {
        fact *= qi(i);
    }
    let sign = if (k + l) % 2 == 0 { qi(1) } else { qi(-1) };
    let mut acc = LaurentZ::constant(alg.unit::<R>()).scale(&R::from_q(&(sign / fact)));
    let factors = vec![
        jet(Analytic::SinRatio { w, j }, over_z(&pp, &one))?,
        jet(Analytic::GammaPow { a: qi(1), power: w as i32 }, over_z(&p1, &one))?,
        jet(Analytic::GammaPow { a: qi(1), power: 1 }, over_z(&p2, &one))?,
        jet(Analytic::GammaPow { a: qi(1), power: 1 }, over_z(&pp, &one))?,
        jet(Analytic::GammaPow { a: qi(1) + q(j, w), power: -(w as i32) }, over_z(&p2, &R::from_q(&q(1, w))))?,
        jet(Analytic::GammaPow { a: qi(1 + l), power: -1 }, over_z(&p2, &one))?,
    ];
    for f in &factors {
        acc = acc.mul(f, &alg)?;
    }
    if w % 2 == 0 {
        // i^{l−k} exp(iπ𝔭₁/(2z))
        let i = R::from_k(&K::i());
        let rho = (0..j.rem_euclid(4)).fold(R::one(), |a, _| a.mul(&i));
        let ipi_half = i.mul(&R::pi()).scale_q(&q(1, 2));
        let e = jet(Analytic::Exp, over_z(&pp, &ipi_half))?;
        acc = acc.mul(&e, &alg)?.scale(&rho);
    }
    Ok(acc.shift(-2 * l as i32))
}

/// z⁻¹I_{𝔽_w} in the orbifold chart through total degree `order` in (𝔶₁, 𝔶₂).
pub fn continued_series<R: SpecialField>(w: i64, order: i64) -> Result<CohSeries<R>> {
    let alg = fw(w)?.algebra();
    let p2 = alg.generator("p2").expect("p2").to_vec();
    let vars = vec![Var::new("Y1", 1), Var::new("Y2", 1)];
    let pre = Some(vec![alg.zero::<Q>(), p2]);
    let mut s = CohSeries::new(alg.clone(), vars, pre, qi(order));
    let exps: Vec<(i64, i64)> = (0..=order).flat_map(|k| (0..=order - k).map(move |l| (k, l))).collect();
    let coeffs = par_map(&exps, |&(k, l)| continued_coefficient::<R>(w, k, l));
    for ((k, l), c) in exps.into_iter().zip(coeffs) {
        s.add_term(vec![k, l], &c?);
    }
    Ok(s)
}

/// The p-dependent part of the residue of the 𝔽₃ Barnes integrand at
/// s = −1 − n: Res Γ(s) · Γ(2 + n) · 1/Γ(−n + p₁/z)³. The remaining factors
/// are finite scalars there, so the residue vanishes exactly when this does.
/// The algebra and the class standing in for p₁ are parameters so that the
/// check can be run against algebras where p₁³ ≠ 0.
pub fn vanishing_residue_check<R: SpecialField>(n: i64, alg: &GradedAlgebra, p1: &[Q]) -> Result<LaurentZ<R>> {
    let mut fact = qi(1);
    for i in 2..=(n + 1) {
        fact *= qi(i);
    }
    // Res_{s=−1−n} Γ(s) = (−1)^{n+1}/(n+1)!, Γ(2+n) = (n+1)!
    let sign = if (n + 1) % 2 == 0 { qi(1) } else { qi(-1) };
    let scalar = sign / &fact * &fact;
    let x = over_z(&alg.lift::<R>(p1), &R::one());
    let g = jet_apply(&Analytic::GammaPow { a: qi(-n), power: -3 }, &x, alg)?;
    Ok(g.scale(&R::from_q(&scalar)))
}

/// Γ(b + x)^power for complex b and nilpotent x.
fn gamma_jet_cx(b: &Cx, power: i32, x: &LaurentZ<Cx>, alg: &GradedAlgebra) -> Result<LaurentZ<Cx>> {
    let d = alg.cdim();
    if b.is_nonpositive_integer() {
        let a = qi(b.re_f64().round() as i64);
        return jet_apply(&Analytic::GammaPow { a, power }, x, alg);
    }
    let (g, psi) = gamma_and_polygammas(b, d)?;
    let n = d as usize + 1;
    let mut lg = vec![Cx::zero(); n];
    let mut fact = qi(1);
    for (k, slot) in lg.iter_mut().enumerate().skip(1) {
        fact *= qi(k as i64);
        *slot = psi[k - 1].scale_q(&(qi(power as i64) / &fact));
    }
    let e = crate::scalar::ps::exp(&lg, n);
    let g0 = g.powi(power as i64);
    let c: Vec<Cx> = e.iter().map(|v| v.mul(&g0)).collect();
    jet_from_taylor(&c, x, alg)
}

struct F3Ctx {
    alg: Arc<GradedAlgebra>,
    p1: Vec<Cx>,
    p2: Vec<Cx>,
    pp: Vec<Cx>,
    ln_y: Cx,
}

impl F3Ctx {
    fn new(y1: &Cx) -> Self {
        let alg = ModelId::F3.algebra();
        let (p1, p2, pp) = classes::<Cx>(&alg, 3);
        F3Ctx { alg, p1, p2, pp, ln_y: y1.ln() }
    }

    fn exp_log(&self, cls: &[Cx], scale: &Q) -> Result<LaurentZ<Cx>> {
        let c = self.ln_y.scale_q(scale);
        jet_apply(&Analytic::Exp, &over_z(cls, &c), &self.alg)
    }

    /// Γ(−𝔭₁/z + 3s − m) Γ(s) Γ(1−s) / Γ(1 + p₁/z + s)³ · y₁^s.
    fn integrand(&self, s: &Cx, m: i64) -> Result<LaurentZ<Cx>> {
        let alg = &self.alg;
        let a = gamma_jet_cx(
            &s.scale_q(&qi(3)).sub(&Cx::from_i64(m)),
            1,
            &over_z(&self.pp, &Cx::from_i64(-1)),
            alg,
        )?;
        let c = gamma_jet_cx(&s.add(&Cx::one()), -3, &over_z(&self.p1, &Cx::one()), alg)?;
        let refl = Cx::pi().div(&Cx::pi().mul(s).sin())?;
        let ys = s.mul(&self.ln_y).exp();
        Ok(a.mul(&c, alg)?.scale(&refl.mul(&ys)))
    }

    /// (−1)^m sin(−π𝔭₁/z)/π.
    fn prefactor(&self, m: i64) -> Result<LaurentZ<Cx>> {
        let s = jet_apply(&Analytic::Sin { phase_sixths: 0 }, &over_z(&self.pp, &Cx::from_i64(-1)), &self.alg)?;
        let c = Cx::one().div(&Cx::pi())?;
        Ok(s.scale(&if m % 2 == 0 { c } else { c.neg() }))
    }

    /// y₁^{n+p₁/z} / (Γ(1 + p₁/z + n)³ Γ(1 + 𝔭₁/z + m − 3n)).
    fn direct_term(&self, n: i64, m: i64) -> Result<LaurentZ<Cx>> {
        let alg = &self.alg;
        let a = jet_apply(&Analytic::GammaPow { a: qi(1 + n), power: -3 }, &over_z(&self.p1, &Cx::one()), alg)?;
        let b = jet_apply(&Analytic::GammaPow { a: qi(1 + m - 3 * n), power: -1 }, &over_z(&self.pp, &Cx::one()), alg)?;
        let yn = self.ln_y.scale_q(&qi(n)).exp();
        a.mul(&b, alg)?.mul(&self.exp_log(&self.p1, &qi(1))?, alg).map(|v| v.scale(&yn))
    }

    /// Left residue at s = (m−j)/3 + 𝔭₁/(3z).
    fn left_term(&self, j: i64, m: i64) -> Result<LaurentZ<Cx>> {
        let alg = &self.alg;
        let mut fact = Cx::one();
        for i in 2..=j {
            fact = fact.mul(&Cx::from_i64(i));
        }
        let sign = if (m + j) % 2 == 0 { Cx::one() } else { Cx::from_i64(-1) };
        let r = jet_apply(&Analytic::SinRatio { w: 3, j: m - j }, &over_z(&self.pp, &Cx::one()), alg)?;
        let g = jet_apply(
            &Analytic::GammaPow { a: qi(1) + q(m - j, 3), power: -3 },
            &over_z(&self.p2, &Cx::from_q(&q(1, 3))),
            alg,
        )?;
        let yp = self.ln_y.scale_q(&q(m - j, 3)).exp();
        let e = self.exp_log(&self.p2, &q(1, 3))?;
        Ok(r.mul(&g, alg)?.mul(&e, alg)?.scale(&sign.mul(&yp).div(&fact)?))
    }
}

/// Relative size of the next term below which the series sums stop.
fn tiny() -> f64 {
    2f64.powi(-(crate::mp::bits() as i32))
}

/// Σ_n y₁^{n+p₁/z}/(Γ(1+p₁/z+n)³ Γ(1+𝔭₁/z+m−3n)) for |y₁| < 1/27.
pub fn direct_sum(m: i64, y1: &Cx) -> Result<LaurentZ<Cx>> {
    let ctx = F3Ctx::new(y1);
    let mut acc = LaurentZ::zero(ctx.alg.dim());
    let mut small = 0;
    for n in 0..100_000 {
        let t = ctx.direct_term(n, m)?;
        acc = acc.add(&t);
        let rel = t.max_magnitude() / acc.max_magnitude().max(f64::MIN_POSITIVE);
        small = if rel < tiny() { small + 1 } else { 0 };
        if small >= 4 {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence(f64::NAN))
}

/// The sum of left residues for |y₁| > 1/27.
pub fn left_sum(m: i64, y1: &Cx) -> Result<LaurentZ<Cx>> {
    let ctx = F3Ctx::new(y1);
    let mut acc = LaurentZ::zero(ctx.alg.dim());
    let mut small = 0;
    for j in 0..100_000 {
        let t = ctx.left_term(j, m)?;
        acc = acc.add(&t);
        let rel = t.max_magnitude() / acc.max_magnitude().max(f64::MIN_POSITIVE);
        small = if rel < tiny() { small + 1 } else { 0 };
        if small >= 4 {
            return Ok(acc);
        }
    }
    Err(Error::NoConvergence(f64::NAN))
}

/// Contour integral representation of the y₁-series of z⁻¹I_{𝔽₃} at fixed
/// y₂-degree m, evaluated at y₁ on the straight line Re s = m/3 + 1/6. Right
/// poles that fall to the left of the line are added back as direct terms.
pub fn barnes_integral(m: i64, y1: &Cx) -> Result<LaurentZ<Cx>> {
    let ctx = F3Ctx::new(y1);
    let c = q(2 * m + 1, 6);
    let cf = crate::scalar::q_to_f64(&c);
    let digits = crate::mp::bits() as f64 * std::f64::consts::LOG10_2;
    let tmax = ((digits * std::f64::consts::LN_10 + 10.0) / std::f64::consts::PI).ceil() + 6.0;
    // panels: width 0.1 up to |τ| = 1, then width 1
    let mut panels: Vec<(f64, f64)> = (0..10).map(|i| (i as f64 * 0.1, (i + 1) as f64 * 0.1)).collect();
    let mut a = 1.0;
    while a < tmax {
        panels.push((a, a + 1.0));
        a += 1.0;
    }
    let mirrored: Vec<(f64, f64)> = panels.iter().map(|&(a, b)| (-b, -a)).collect();
    panels.extend(mirrored);
    let order = ((digits * 0.6) as usize).clamp(20, 60);
    let (xs, ws) = gauss_legendre(order);
    let mut nodes: Vec<(Cx, Cx)> = Vec::with_capacity(panels.len() * order);
    let cx = Cx::from_q(&c);
    for (a, b) in &panels {
        let half = Cx::from_f64((b - a) / 2.0, 0.0);
        let mid = Cx::from_f64((a + b) / 2.0, 0.0);
        for (x, w) in xs.iter().zip(&ws) {
            let tau = mid.add(&half.mul(x));
            nodes.push((cx.add(&tau.mul(&Cx::i())), w.mul(&half)));
        }
    }
    if (cf - cf.round()).abs() < 1e-12 {
        return Err(Error::ContourPinch(format!("Re s = {cf}")));
    }
    let vals = par_map(&nodes, |(s, w)| ctx.integrand(s, m).map(|v| v.scale(w)));
    let mut integral = LaurentZ::zero(ctx.alg.dim());
    for v in vals {
        integral = integral.add(&v?);
    }
    // (1/2πi)∫ downward = −(1/2π)∫ dτ
    let k = Cx::from_f64(-1.0, 0.0).div(&Cx::pi().scale_q(&qi(2)))?;
    let integral = integral.scale(&k);
    let mut total = ctx
        .prefactor(m)?
        .mul(&integral, &ctx.alg)?
        .mul(&ctx.exp_log(&ctx.p1, &qi(1))?, &ctx.alg)?;
    let mut n = 0;
    while (n as f64) < cf {
        total = total.add(&ctx.direct_term(n, m)?);
        n += 1;
    }
    Ok(total)
}

/// max |a − b| / max |b| over all coefficients.
pub fn relative_error(a: &LaurentZ<Cx>, b: &LaurentZ<Cx>) -> f64 {
    a.sub(b).max_magnitude() / b.max_magnitude().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Const;

    #[test]
    fn leading_coefficient_is_unit() {
        let c = continued_coefficient::<Const>(3, 0, 0).unwrap();
        assert_eq!(c.coeff(0), ModelId::F3.algebra().unit::<Const>());
    }

    #[test]
    fn integral_matches_both_sums() {
        crate::mp::with_digits(30, || {
            for m in [0, 2] {
                let small = Cx::from_f64(0.02, 0.0);
                let b = barnes_integral(m, &small).unwrap();
                let d = direct_sum(m, &small).unwrap();
                let e1 = relative_error(&b, &d);
                let large = Cx::from_f64(0.05, 0.0);
                let b = barnes_integral(m, &large).unwrap();
                let l = left_sum(m, &large).unwrap();
                let e2 = relative_error(&b, &l);
                eprintln!("m={m} direct {e1:e} left {e2:e}");
                assert!(e1 < 1e-10 && e2 < 1e-10);
            }
        });
    }

    #[test]
    fn residue_vanishes_only_when_p1_cubed_is_zero() {
        let alg = ModelId::F3.algebra();
        let p1 = alg.generator("p1").unwrap().to_vec();
        for n in 0..4 {
            assert!(vanishing_residue_check::<Const>(n, &alg, &p1).unwrap().is_zero());
        }
        let fake = GradedAlgebra::truncated_polynomial(4);
        let p = fake.generator("p1").unwrap().to_vec();
        assert!(!vanishing_residue_check::<Const>(0, &fake, &p).unwrap().is_zero());
    }
}
