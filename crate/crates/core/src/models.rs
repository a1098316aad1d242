//! I-functions of the four toric models, their Picard–Fuchs (GKZ) operators,
//! and the resulting J-functions in flat coordinates.
//!
//! All four I-functions come from one hypergeometric formula driven by the
//! charge matrix: for a degree d and each coordinate j with divisor class
//! D_j = Σ_i Q_ij p_i and d_j = Σ_i Q_ij d_i, the factor is
//! ∏_{b≤0, b≡d_j} (D_j + bz) / ∏_{b≤d_j, b≡d_j} (D_j + bz), and the term
//! lands in the sector 𝟏_{⟨d⟩}. Series are stored as z⁻¹I, i.e. with the
//! leading z stripped.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coh::{GradedAlgebra, ModelId};
use crate::error::{Error, Result};
use crate::mirror;
use crate::scalar::{q, q_frac, q_to_string, qi, Q};
use crate::series::{CohSeries, LaurentZ, PowerSeries, Var};

/// Ramification needed so that all degrees are integral exponents.
pub fn ramification(model: ModelId) -> u32 {
    match model {
        ModelId::F2 | ModelId::F3 => 1,
        ModelId::P112 => 2,
        ModelId::P1113 => 3,
    }
}

pub fn base_vars(model: ModelId) -> Vec<Var> {
    let r = ramification(model);
    match model {
        ModelId::F2 | ModelId::F3 => vec![Var::new("y1", r), Var::new("y2", r)],
        _ => vec![Var::new("y", r)],
    }
}

/// 1/(c + mz) = Σ_j (−1)^j c^j / (mz)^{j+1}, for m ≠ 0 and nilpotent c.
fn inv_linear(alg: &GradedAlgebra, c: &[Q], m: &Q) -> Result<LaurentZ<Q>> {
    let mut acc = LaurentZ::zero(alg.dim());
    let mut pw: Vec<Q> = alg.unit();
    let mi = qi(1) / m;
    let mut coef = mi.clone();
    for j in 0..=alg.cdim() as i32 {
        if j > 0 {
            pw = alg.mul(&pw, c)?;
            coef = -&coef * &mi;
        }
        if pw.iter().all(num_traits::Zero::is_zero) {
            break;
        }
        acc.add_at(-(j + 1), &pw.iter().map(|x| x * &coef).collect::<Vec<_>>());
    }
    Ok(acc)
}

fn linear(alg: &GradedAlgebra, c: &[Q], m: &Q) -> LaurentZ<Q> {
    let mut s = LaurentZ::constant(c.to_vec());
    let mut u: Vec<Q> = alg.unit();
    for x in u.iter_mut() {
        *x *= m;
    }
    s.add_at(1, &u);
    s
}

/// Divisor classes D_j of the toric coordinates.
pub fn divisor_classes(model: ModelId) -> Vec<Vec<Q>> {
    let alg = model.algebra();
    let ch = model.charges();
    let ncoord = ch[0].len();
    (0..ncoord)
        .map(|j| {
            let mut v = vec![qi(0); alg.dim()];
            for (i, row) in ch.iter().enumerate() {
                for (vk, gk) in v.iter_mut().zip(&alg.generators()[i].1) {
                    *vk += qi(row[j]) * gk;
                }
            }
            v
        })
        .collect()
}

/// Coefficient of y^d in z⁻¹I (without the prefactor).
pub fn i_coefficient(model: ModelId, d: &[Q]) -> Result<LaurentZ<Q>> {
    let alg = model.algebra();
    let ch = model.charges();
    let divs = divisor_classes(model);
    let mut acc = LaurentZ::constant(alg.unit());
    for (j, dj_cls) in divs.iter().enumerate() {
        let dj: Q = ch.iter().zip(d).map(|(row, di)| qi(row[j]) * di).sum();
        let f = q_frac(&dj);
        if dj > qi(0) {
            let mut b = if num_traits::Zero::is_zero(&f) { qi(1) } else { f.clone() };
            while b <= dj {
                acc = acc.mul(&inv_linear(&alg, dj_cls, &b)?, &alg)?;
                b += qi(1);
            }
        } else if dj < qi(0) {
            let mut b = &dj + qi(1);
            while b <= qi(0) {
                acc = acc.mul(&linear(&alg, dj_cls, &b), &alg)?;
                b += qi(1);
            }
        }
    }
    let sector = q_frac(&d[0]);
    let k = alg
        .sector_unit(&sector)
        .ok_or_else(|| Error::Invalid(format!("no sector {}", q_to_string(&sector))))?;
    if k != 0 {
        acc = acc.mul_class(&alg.basis(k), &alg)?;
    }
    Ok(acc)
}

/// z⁻¹I truncated at total y-degree `order`.
pub fn i_function(model: ModelId, order: &Q) -> Result<CohSeries<Q>> {
    let alg = model.algebra();
    let vars = base_vars(model);
    let r = ramification(model) as i64;
    let prefactor: Vec<Vec<Q>> = alg.generators().iter().map(|(_, g)| g.clone()).collect();
    let mut s = CohSeries::new(alg.clone(), vars.clone(), Some(prefactor), order.clone());
    let top = crate::scalar::q_floor(&(order * qi(r)));
    let exps: Vec<Vec<i64>> = if vars.len() == 1 {
        (0..=top).map(|e| vec![e]).collect()
    } else {
        (0..=top).flat_map(|a| (0..=top - a).map(move |b| vec![a, b])).collect()
    };
    let coeffs = crate::mp::par_map(&exps, |e| {
        let d: Vec<Q> = e.iter().map(|x| q(*x, r)).collect();
        i_coefficient(model, &d)
    });
    for (e, c) in exps.into_iter().zip(coeffs) {
        s.add_term(e, &c?);
    }
    Ok(s)
}

/// Σ_i d_i D_i + m z.
#[derive(Clone, Debug, PartialEq)]
pub struct LinFactor {
    pub d: Vec<Q>,
    pub z: Q,
}

/// coeff · y^y · ∏ factors (variables on the left, derivatives on the right).
#[derive(Clone, Debug, PartialEq)]
pub struct PFTerm {
    pub coeff: Q,
    pub y: Vec<Q>,
    pub factors: Vec<LinFactor>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PFOperator {
    pub name: String,
    pub terms: Vec<PFTerm>,
}

/// Monomial key: (y-exponent, exponents of D_1..D_r and z).
type OpKey = (Vec<Q>, Vec<u32>);

impl PFOperator {
    pub fn apply(&self, f: &CohSeries<Q>) -> Result<CohSeries<Q>> {
        let mut acc: Option<CohSeries<Q>> = None;
        for t in &self.terms {
            let mut g = f.clone();
            for lf in t.factors.iter().rev() {
                g = g.apply_linear(&lf.d, &lf.z)?;
            }
            g = g.mul_monomial(&t.y)?.map(|x| x * &t.coeff);
            acc = Some(match acc {
                None => g,
                Some(a) => a.add(&g)?,
            });
        }
        acc.ok_or_else(|| Error::Invalid("empty operator".into()))
    }

    /// Expanded normal form as a polynomial in D_i and z.
    pub fn expand(&self) -> BTreeMap<OpKey, Q> {
        let mut out: BTreeMap<OpKey, Q> = BTreeMap::new();
        for t in &self.terms {
            let r = t.y.len();
            let mut poly: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
            poly.insert(vec![0; r + 1], t.coeff.clone());
            for lf in &t.factors {
                let mut next: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
                for (m, c) in &poly {
                    let slots: Vec<(usize, &Q)> = lf.d.iter().enumerate().chain(std::iter::once((r, &lf.z))).collect();
                    for (k, a) in slots {
                        if num_traits::Zero::is_zero(a) {
                            continue;
                        }
                        let mut m2 = m.clone();
                        m2[k] += 1;
                        *next.entry(m2).or_insert_with(|| qi(0)) += c * a;
                    }
                }
                poly = next;
            }
            for (m, c) in poly {
                if !num_traits::Zero::is_zero(&c) {
                    *out.entry((t.y.clone(), m)).or_insert_with(|| qi(0)) += c;
                }
            }
        }
        out.retain(|_, c| !num_traits::Zero::is_zero(c));
        out
    }
}

fn lf(d: &[i64], z: i64) -> LinFactor {
    LinFactor { d: d.iter().map(|&x| qi(x)).collect(), z: qi(z) }
}

fn term(coeff: i64, y: &[i64], factors: Vec<LinFactor>) -> PFTerm {
    PFTerm { coeff: qi(coeff), y: y.iter().map(|&x| qi(x)).collect(), factors }
}

/// The Picard–Fuchs systems written out by hand.
pub fn pf_operators(model: ModelId) -> Vec<PFOperator> {
    let op = |name: &str, terms: Vec<PFTerm>| PFOperator { name: name.to_string(), terms };
    match model {
        ModelId::F3 => {
            let e = |k: i64| lf(&[-3, 1], -k); // D2 − 3D1 − kz
            vec![
                op("D2(D2-3D1) - y2", vec![term(1, &[0, 0], vec![lf(&[0, 1], 0), e(0)]), term(-1, &[0, 1], vec![])]),
                op(
                    "D1^3 D2(D2-z)(D2-2z) - y1 y2^3",
                    vec![
                        term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[0, 1], 0), lf(&[0, 1], -1), lf(&[0, 1], -2)]),
                        term(-1, &[1, 3], vec![]),
                    ],
                ),
                op(
                    "D1^3 D2(D2-z) - y1 y2^2 (D2-3D1)",
                    vec![
                        term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[0, 1], 0), lf(&[0, 1], -1)]),
                        term(-1, &[1, 2], vec![e(0)]),
                    ],
                ),
                op(
                    "D1^3 D2 - y1 y2 (D2-3D1)(D2-3D1-z)",
                    vec![
                        term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[0, 1], 0)]),
                        term(-1, &[1, 1], vec![e(0), e(1)]),
                    ],
                ),
                op(
                    "D1^3 - y1 (D2-3D1)(D2-3D1-z)(D2-3D1-2z)",
                    vec![
                        term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[1, 0], 0)]),
                        term(-1, &[1, 0], vec![e(0), e(1), e(2)]),
                    ],
                ),
            ]
        }
        ModelId::F2 => {
            let e = |k: i64| lf(&[-2, 1], -k);
            vec![
                op("D2(D2-2D1) - y2", vec![term(1, &[0, 0], vec![lf(&[0, 1], 0), e(0)]), term(-1, &[0, 1], vec![])]),
                op(
                    "D1^2 D2(D2-z) - y1 y2^2",
                    vec![
                        term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[0, 1], 0), lf(&[0, 1], -1)]),
                        term(-1, &[1, 2], vec![]),
                    ],
                ),
                op(
                    "D1^2 D2 - y1 y2 (D2-2D1)",
                    vec![
                        term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0), lf(&[0, 1], 0)]),
                        term(-1, &[1, 1], vec![e(0)]),
                    ],
                ),
                op(
                    "D1^2 - y1 (D2-2D1)(D2-2D1-z)",
                    vec![term(1, &[0, 0], vec![lf(&[1, 0], 0), lf(&[1, 0], 0)]), term(-1, &[1, 0], vec![e(0), e(1)])],
                ),
            ]
        }
        ModelId::P1113 => vec![op(
            "D^3 (3D)(3D-z)(3D-2z) - y",
            vec![
                term(1, &[0], vec![lf(&[1], 0), lf(&[1], 0), lf(&[1], 0), lf(&[3], 0), lf(&[3], -1), lf(&[3], -2)]),
                term(-1, &[1], vec![]),
            ],
        )],
        ModelId::P112 => vec![op(
            "D^2 (2D)(2D-z) - y",
            vec![
                term(1, &[0], vec![lf(&[1], 0), lf(&[1], 0), lf(&[2], 0), lf(&[2], -1)]),
                term(-1, &[1], vec![]),
            ],
        )],
    }
}

/// GKZ box operator of a lattice vector ℓ:
/// ∏_{ℓ_j>0} ∏_{k<ℓ_j} (D_j − kz) − y^ℓ ∏_{ℓ_j<0} ∏_{k<−ℓ_j} (D_j − kz).
pub fn box_operator(charges: &[Vec<i64>], combo: &[i64]) -> PFOperator {
    let r = charges.len();
    let ncoord = charges[0].len();
    let ell: Vec<i64> = (0..ncoord).map(|j| (0..r).map(|i| combo[i] * charges[i][j]).sum()).collect();
    let dj = |j: usize| -> Vec<i64> { (0..r).map(|i| charges[i][j]).collect() };
    let block = |sign: i64| -> Vec<LinFactor> {
        let mut f = Vec::new();
        for (j, &l) in ell.iter().enumerate() {
            if l * sign > 0 {
                for k in 0..(l * sign) {
                    f.push(lf(&dj(j), -k));
                }
            }
        }
        f
    };
    PFOperator {
        name: format!("box{combo:?}"),
        terms: vec![term(1, &vec![0; r], block(1)), term(-1, combo, block(-1))],
    }
}

/// Box operators generating the system: for one-parameter models the single
/// charge row; for two-parameter models the fibre row r₂ together with
/// r₁ + k r₂ for k = 0, …, until the negative entry of r₁ is absorbed.
pub fn box_operators(charges: &[Vec<i64>]) -> Result<Vec<PFOperator>> {
    match charges.len() {
        1 => Ok(vec![box_operator(charges, &[1])]),
        2 => {
            let neg: Vec<usize> = (0..charges[0].len()).filter(|&j| charges[0][j] < 0).collect();
            if neg.len() != 1 || charges[1].iter().any(|&c| c < 0) || charges[1][neg[0]] <= 0 {
                return Err(Error::Unsupported("charge matrix shape".into()));
            }
            let n = -charges[0][neg[0]] / charges[1][neg[0]];
            let mut ops = vec![box_operator(charges, &[0, 1])];
            for k in 0..=n {
                ops.push(box_operator(charges, &[1, k]));
            }
            Ok(ops)
        }
        _ => Err(Error::Unsupported("more than two charge rows".into())),
    }
}

/// Applies every operator to z⁻¹I and reports whether the result vanishes
/// exactly through the truncation order.
pub fn pf_check(model: ModelId, order: &Q) -> Result<Vec<(String, bool)>> {
    let i = i_function(model, order)?;
    pf_operators(model)
        .iter()
        .map(|op| Ok((op.name.clone(), op.apply(&i)?.is_zero())))
        .collect()
}

/// z⁻¹J in flat coordinates: coefficients of q^d after the prefactor q^{P/z}.
#[derive(Clone, Debug)]
pub struct JTable {
    pub model: ModelId,
    pub order: i64,
    pub series: CohSeries<Q>,
}

impl JTable {
    /// Largest nonzero z-power in any positive-degree coefficient.
    pub fn max_z_power(&self) -> Option<i32> {
        self.series
            .terms
            .iter()
            .filter(|(e, _)| e.iter().any(|&x| x != 0))
            .filter_map(|(_, v)| v.max_pow())
            .max()
    }
}

/// Rewrites z⁻¹I in flat coordinates q, producing the J-function expansion.
pub fn gw_extract(model: ModelId, order: i64) -> Result<JTable> {
    let alg: Arc<GradedAlgebra> = model.algebra();
    let i = i_function(model, &qi(order))?;
    if model.is_orbifold() {
        // the mirror map is trivial for the weighted projective spaces
        return Ok(JTable { model, order, series: i });
    }
    let inv = mirror::inverse_mirror_map(model, order)?;
    // y_i = q_i v_i(q); prefactor y^{P/z} = q^{P/z} exp(Σ P_i log v_i / z)
    let nv = 2;
    let logs: Vec<PowerSeries<Q>> = inv.iter().map(|v| v.log()).collect::<Result<_>>()?;
    let vars = base_vars(model).iter().map(|v| Var::new(&v.name.replace('y', "q"), 1)).collect::<Vec<_>>();
    let lift = |s: &PowerSeries<Q>, cls: &[Q], zpow: i32| -> CohSeries<Q> {
        let mut out = CohSeries::new(alg.clone(), vars.clone(), None, qi(order));
        for (e, c) in &s.terms {
            out.add_term(e.clone(), &LaurentZ::mono(zpow, cls.iter().map(|x| x * c).collect()));
        }
        out
    };
    let mut x = CohSeries::new(alg.clone(), vars.clone(), None, qi(order));
    for (k, l) in logs.iter().enumerate() {
        x = x.add(&lift(l, &alg.generators()[k].1, -1))?;
    }
    // exp(x): x has positive q-degree so the sum stops at the order
    let one = {
        let mut s = CohSeries::new(alg.clone(), vars.clone(), None, qi(order));
        s.add_term(vec![0; nv], &LaurentZ::constant(alg.unit()));
        s
    };
    let mut ex = one.clone();
    let mut pw = one.clone();
    for k in 1..=order {
        pw = pw.mul(&x)?.map(|c| c / qi(k));
        ex = ex.add(&pw)?;
    }
    // Σ_e c_e q^e v^e
    let mut vpow: Vec<Vec<PowerSeries<Q>>> = inv.iter().map(|v| vec![PowerSeries::constant(nv, order, qi(1)), v.clone()]).collect();
    let mut body = CohSeries::new(alg.clone(), vars.clone(), None, qi(order));
    for (e, c) in &i.terms {
        let mut sc = PowerSeries::constant(nv, order, qi(1));
        for (k, &ek) in e.iter().enumerate() {
            while vpow[k].len() <= ek as usize {
                let next = vpow[k].last().expect("nonempty").mul(&inv[k]);
                vpow[k].push(next);
            }
            sc = sc.mul(&vpow[k][ek as usize]);
        }
        for (f, a) in &sc.terms {
            let g: Vec<i64> = f.iter().zip(e).map(|(x, y)| x + y).collect();
            body.add_term(g, &c.scale(a));
        }
    }
    let mut series = ex.mul(&body)?;
    series.prefactor = i.prefactor.clone();
    Ok(JTable { model, order, series })
}
