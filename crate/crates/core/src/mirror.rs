//! Mirror maps read off the z⁻¹ term of the I-function, their inverses, and
//! the flat-coordinate expansion at the orbifold point of 𝔽₃.

use crate::coh::ModelId;
use crate::error::{Error, Result};
use crate::linalg;
use crate::models::i_function;
use crate::scalar::{q, qi, Const, Scalar, Q};
use crate::series::{compose, revert, PowerSeries};

/// q_i = y_i exp(f_i(y)).
#[derive(Clone, Debug)]
pub struct MirrorMap {
    pub model: ModelId,
    pub order: i64,
    pub f: Vec<PowerSeries<Q>>,
}

impl MirrorMap {
    /// exp(f_i) = q_i / y_i.
    pub fn q_over_y(&self) -> Result<Vec<PowerSeries<Q>>> {
        self.f.iter().map(|s| s.exp()).collect()
    }
}

/// Coefficients a with Σ a_i g_i = c, or an error when c is outside the span.
fn in_span(gens: &[Vec<Q>], c: &[Q]) -> Result<Vec<Q>> {
    let g: linalg::Mat<Q> = (0..c.len()).map(|k| gens.iter().map(|v| v[k].clone()).collect()).collect();
    let gt = linalg::transpose(&g);
    let a = linalg::solve(&linalg::mat_mul(&gt, &g), &linalg::mat_vec(&gt, c))?;
    if linalg::mat_vec(&g, &a) != c {
        return Err(Error::Invalid("z⁻¹ coefficient is not a combination of the degree-2 generators".into()));
    }
    Ok(a)
}

pub fn mirror_map(model: ModelId, order: i64) -> Result<MirrorMap> {
    let alg = model.algebra();
    let nv = alg.generators().len();
    let mut f = vec![PowerSeries::zero(nv, order); nv];
    if model.is_orbifold() {
        return Ok(MirrorMap { model, order, f });
    }
    let i = i_function(model, &qi(order))?;
    let gens: Vec<Vec<Q>> = alg.generators().iter().map(|(_, g)| g.clone()).collect();
    for (e, v) in &i.terms {
        let c = v.coeff(-1);
        if c.iter().all(num_traits::Zero::is_zero) {
            continue;
        }
        if e.iter().all(|&x| x == 0) {
            return Err(Error::NonzeroConstant(0));
        }
        let a = in_span(&gens, &c)?;
        for (k, ak) in a.iter().enumerate() {
            f[k].add_term(e.clone(), ak);
        }
    }
    Ok(MirrorMap { model, order, f })
}

/// v_i(q) with y_i = q_i v_i(q), by fixed-point iteration v = exp(−f(q·v)).
pub fn inverse_mirror_map(model: ModelId, order: i64) -> Result<Vec<PowerSeries<Q>>> {
    let mm = mirror_map(model, order)?;
    let nv = mm.f.len();
    let neg_f: Vec<PowerSeries<Q>> = mm.f.iter().map(|s| s.scale(&qi(-1))).collect();
    let mut v = vec![PowerSeries::constant(nv, order, qi(1)); nv];
    for _ in 0..=order {
        let y: Vec<PowerSeries<Q>> = (0..nv).map(|i| PowerSeries::var(nv, order, i).mul(&v[i])).collect();
        v = neg_f.iter().map(|s| s.compose(&y)?.exp()).collect::<Result<_>>()?;
    }
    Ok(v)
}

/// Flat coordinate and potential derivative at the orbifold point of 𝔽₃, as
/// one-variable series.
#[derive(Clone, Debug)]
pub struct FlatCompare {
    /// 𝔱₁ as a series in 𝔶₁.
    pub t1_of_y: Vec<Q>,
    /// 3∂F/∂𝔱₁ as a series in 𝔶₁.
    pub dfdt_of_y: Vec<Q>,
    /// 3∂F/∂𝔱₁ as a series in 𝔱₁.
    pub dfdt: Vec<Q>,
    /// τ₁ = a·𝔱₁ + b·∂F/∂𝔱₁.
    pub tau1: (Const, Const),
    /// τ₂ + c·τ₁ = 𝔱₂.
    pub tau2_shift: Q,
}

/// Σ_n (−1)^n ∏_{k<n}(k + r)³ / (3n + s)! 𝔶^{3n+s}.
fn orbifold_series(r: &Q, s: i64, n: usize) -> Vec<Q> {
    let mut out = vec![qi(0); n];
    let mut m = 0i64;
    let mut prod = qi(1);
    while 3 * m + s < n as i64 {
        if m > 0 {
            let t = qi(m - 1) + r;
            prod *= &t * &t * &t;
        }
        let fact = Q::from_integer(crate::scalar::factorial((3 * m + s) as u32));
        let sign = if m % 2 == 0 { qi(1) } else { qi(-1) };
        out[(3 * m + s) as usize] = sign * &prod / fact;
        m += 1;
    }
    out
}

/// Expansions through 𝔱₁^{order}.
pub fn flat_compare_p1113(order: usize) -> Result<FlatCompare> {
    let n = order + 1;
    let t1_of_y = orbifold_series(&q(1, 3), 1, n);
    let dfdt_of_y = orbifold_series(&q(2, 3), 2, n);
    let y_of_t = revert(&t1_of_y, n)?;
    let dfdt = compose(&dfdt_of_y, &y_of_t, n);
    let two_sqrt3_pi = Const::sqrt3().mul(&Const::pi()).scale_q(&qi(2));
    let a = two_sqrt3_pi
        .div(&Const::gamma_two_thirds_cubed().scale_q(&qi(3)))?
        .neg();
    let b = two_sqrt3_pi.div(&Const::g())?;
    Ok(FlatCompare { t1_of_y, dfdt_of_y, dfdt, tau1: (a, b), tau2_shift: q(1, 3) })
}
