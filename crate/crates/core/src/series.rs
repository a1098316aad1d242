//! Truncated multivariate series in base coordinates whose coefficients are
//! Laurent polynomials in z with values in a cohomology algebra.
//!
//! A variable y_i carries a ramification index r_i: exponents are stored as
//! integers e_i meaning y_i^{e_i/r_i}. An optional prefactor
//! ∏ y_i^{P_i/z} is kept symbolically through the classes P_i, which is how
//! the log-derivatives z y_i∂_{y_i} pick up the extra P_i∘ term.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::coh::{GradedAlgebra, ModelId};
use crate::error::{Error, Result};
use crate::scalar::{q, q_parse, q_to_string, qi, Scalar, Q};

/// Σ_k c_k z^k with c_k algebra coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentZ<R: Scalar> {
    pub dim: usize,
    pub terms: BTreeMap<i32, Vec<R>>,
}

impl<R: Scalar> LaurentZ<R> {
    pub fn zero(dim: usize) -> Self {
        LaurentZ { dim, terms: BTreeMap::new() }
    }

    pub fn constant(v: Vec<R>) -> Self {
        Self::mono(0, v)
    }

    pub fn mono(k: i32, v: Vec<R>) -> Self {
        let mut s = LaurentZ::zero(v.len());
        s.add_at(k, &v);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i32) -> Vec<R> {
        self.terms.get(&k).cloned().unwrap_or_else(|| vec![R::zero(); self.dim])
    }

    pub fn min_pow(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_pow(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_at(&mut self, k: i32, v: &[R]) {
        let slot = self.terms.entry(k).or_insert_with(|| vec![R::zero(); v.len()]);
        for (a, b) in slot.iter_mut().zip(v) {
            if !b.is_zero() {
                *a = a.add(b);
            }
        }
        if slot.iter().all(|x| x.is_zero()) {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add_at(*k, v);
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        let mut r = LaurentZ::zero(self.dim);
        for (k, v) in &self.terms {
            let w: Vec<R> = v.iter().map(&f).collect();
            r.add_at(*k, &w);
        }
        r
    }

    pub fn map_into<S: Scalar>(&self, f: impl Fn(&R) -> S) -> LaurentZ<S> {
        let mut r = LaurentZ::zero(self.dim);
        for (k, v) in &self.terms {
            let w: Vec<S> = v.iter().map(&f).collect();
            r.add_at(*k, &w);
        }
        r
    }

    /// Multiplication by z^s.
    pub fn shift(&self, s: i32) -> Self {
        LaurentZ { dim: self.dim, terms: self.terms.iter().map(|(k, v)| (k + s, v.clone())).collect() }
    }

    /// z ↦ −z.
    pub fn flip_z(&self) -> Self {
        let mut r = LaurentZ::zero(self.dim);
        for (k, v) in &self.terms {
            let w: Vec<R> = if k % 2 == 0 { v.clone() } else { v.iter().map(|x| x.neg()).collect() };
            r.add_at(*k, &w);
        }
        r
    }

    /// z ∂_z.
    pub fn z_dz(&self) -> Self {
        let mut r = LaurentZ::zero(self.dim);
        for (k, v) in &self.terms {
            let c = R::from_i64(*k as i64);
            r.add_at(*k, &v.iter().map(|x| x.mul(&c)).collect::<Vec<_>>());
        }
        r
    }

    pub fn mul(&self, o: &Self, alg: &GradedAlgebra) -> Result<Self> {
        let mut r = LaurentZ::zero(self.dim);
        for (a, u) in &self.terms {
            for (b, v) in &o.terms {
                r.add_at(a + b, &alg.mul(u, v)?);
            }
        }
        Ok(r)
    }

    /// Multiplication by a fixed class.
    pub fn mul_class(&self, c: &[R], alg: &GradedAlgebra) -> Result<Self> {
        let mut r = LaurentZ::zero(self.dim);
        for (k, v) in &self.terms {
            r.add_at(*k, &alg.mul(c, v)?);
        }
        Ok(r)
    }

    /// Keeps only powers in [lo, hi].
    pub fn window(&self, lo: i32, hi: i32) -> Self {
        LaurentZ { dim: self.dim, terms: self.terms.range(lo..=hi).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().flatten().map(|x| x.magnitude()).fold(0.0, f64::max)
    }
}

/// Res_{z=0} of a Laurent element: its z⁻¹ coefficient.
pub fn residue_z<R: Scalar>(v: &LaurentZ<R>) -> Vec<R> {
    v.coeff(-1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub ram: u32,
}

impl Var {
    pub fn new(name: &str, ram: u32) -> Self {
        Var { name: name.to_string(), ram }
    }
}

#[derive(Clone, Debug)]
pub struct CohSeries<R: Scalar> {
    pub alg: Arc<GradedAlgebra>,
    pub vars: Vec<Var>,
    /// Class P_i multiplying log y_i / z in the prefactor, one per variable.
    pub prefactor: Option<Vec<Vec<Q>>>,
    /// Terms with Σ e_i/r_i > order are dropped.
    pub order: Q,
    pub terms: BTreeMap<Vec<i64>, LaurentZ<R>>,
}

impl<R: Scalar> PartialEq for CohSeries<R> {
    fn eq(&self, o: &Self) -> bool {
        self.alg.name == o.alg.name
            && self.vars == o.vars
            && self.prefactor == o.prefactor
            && self.order == o.order
            && self.terms == o.terms
    }
}

impl<R: Scalar> CohSeries<R> {
    pub fn new(alg: Arc<GradedAlgebra>, vars: Vec<Var>, prefactor: Option<Vec<Vec<Q>>>, order: Q) -> Self {
        CohSeries { alg, vars, prefactor, order, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Total degree Σ e_i/r_i of a stored exponent.
    pub fn degree(&self, e: &[i64]) -> Q {
        e.iter().zip(&self.vars).map(|(x, v)| q(*x, v.ram as i64)).sum()
    }

    pub fn add_term(&mut self, e: Vec<i64>, v: &LaurentZ<R>) {
        if self.degree(&e) > self.order || v.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(|| LaurentZ::zero(v.dim));
        *slot = slot.add(v);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[i64]) -> LaurentZ<R> {
        self.terms.get(e).cloned().unwrap_or_else(|| LaurentZ::zero(self.dim()))
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.alg.name != o.alg.name {
            return Err(Error::MixedAlgebra(self.alg.name.clone(), o.alg.name.clone()));
        }
        if self.vars != o.vars {
            return Err(Error::Incompatible("variables or ramification differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        if self.prefactor != o.prefactor {
            return Err(Error::Incompatible("prefactors differ".into()));
        }
        let order = self.order.clone().min(o.order.clone());
        let mut r = CohSeries::new(self.alg.clone(), self.vars.clone(), self.prefactor.clone(), order);
        for (e, v) in self.terms.iter().chain(&o.terms) {
            r.add_term(e.clone(), v);
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.map(|x| x.neg()))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        let mut r = CohSeries::new(self.alg.clone(), self.vars.clone(), self.prefactor.clone(), self.order.clone());
        for (e, v) in &self.terms {
            r.add_term(e.clone(), &v.map(&f));
        }
        r
    }

    pub fn map_into<S: Scalar>(&self, f: impl Fn(&R) -> S) -> CohSeries<S> {
        let mut r = CohSeries::new(self.alg.clone(), self.vars.clone(), self.prefactor.clone(), self.order.clone());
        for (e, v) in &self.terms {
            r.add_term(e.clone(), &v.map_into(&f));
        }
        r
    }

    pub fn truncate(&self, order: &Q) -> Self {
        let mut r = self.clone();
        r.order = order.clone().min(self.order.clone());
        let keep = r.order.clone();
        r.terms.retain(|e, _| {
            let d: Q = e.iter().zip(&self.vars).map(|(x, v)| q(*x, v.ram as i64)).sum();
            d <= keep
        });
        r
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let prefactor = match (&self.prefactor, &o.prefactor) {
            (Some(_), Some(_)) => return Err(Error::Incompatible("both factors carry a prefactor".into())),
            (Some(p), None) | (None, Some(p)) => Some(p.clone()),
            (None, None) => None,
        };
        let order = self.order.clone().min(o.order.clone());
        let mut r = CohSeries::new(self.alg.clone(), self.vars.clone(), prefactor, order);
        for (e1, a) in &self.terms {
            for (e2, b) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                if r.degree(&e) > r.order {
                    continue;
                }
                r.add_term(e, &a.mul(b, &self.alg)?);
            }
        }
        Ok(r)
    }

    /// Multiplication by the monomial ∏ y_i^{a_i} (a_i in units of y_i).
    pub fn mul_monomial(&self, a: &[Q]) -> Result<Self> {
        let shift: Vec<i64> = a
            .iter()
            .zip(&self.vars)
            .map(|(x, v)| {
                let t = x * qi(v.ram as i64);
                crate::scalar::q_as_int(&t).ok_or_else(|| Error::Incompatible(format!("exponent {x} not in the lattice")))
            })
            .collect::<Result<_>>()?;
        let mut r = CohSeries::new(self.alg.clone(), self.vars.clone(), self.prefactor.clone(), self.order.clone());
        for (e, v) in &self.terms {
            let f: Vec<i64> = e.iter().zip(&shift).map(|(x, s)| x + s).collect();
            r.add_term(f, v);
        }
        Ok(r)
    }

    /// D_i = z y_i ∂_{y_i}, including the prefactor contribution P_i∘.
    pub fn d_log(&self, i: usize) -> Result<Self> {
        let mut r = CohSeries::new(self.alg.clone(), self.vars.clone(), self.prefactor.clone(), self.order.clone());
        let pcls: Option<Vec<R>> = self.prefactor.as_ref().map(|p| self.alg.lift(&p[i]));
        let ram = self.vars[i].ram as i64;
        for (e, v) in &self.terms {
            let mut out = LaurentZ::zero(v.dim);
            if e[i] != 0 {
                out = v.shift(1).scale(&R::from_q(&q(e[i], ram)));
            }
            if let Some(pc) = &pcls {
                out = out.add(&v.mul_class(pc, &self.alg)?);
            }
            r.add_term(e.clone(), &out);
        }
        Ok(r)
    }

    /// Applies a linear combination Σ c_i D_i + m z.
    pub fn apply_linear(&self, c: &[Q], m: &Q) -> Result<Self> {
        let mut acc = self.map(|x| x.scale_q(&qi(0)));
        acc.terms.clear();
        for (i, ci) in c.iter().enumerate() {
            if num_traits::Zero::is_zero(ci) {
                continue;
            }
            let d = self.d_log(i)?.map(|x| x.scale_q(ci));
            acc = acc.add(&d)?;
        }
        if !num_traits::Zero::is_zero(m) {
            let mut zt = CohSeries::new(self.alg.clone(), self.vars.clone(), self.prefactor.clone(), self.order.clone());
            for (e, v) in &self.terms {
                zt.add_term(e.clone(), &v.shift(1).scale(&R::from_q(m)));
            }
            acc = acc.add(&zt)?;
        }
        Ok(acc)
    }

    /// Sets variable i to zero (keeps only terms with e_i = 0).
    pub fn restrict_zero(&self, i: usize) -> Self {
        let mut r = self.clone();
        r.terms.retain(|e, _| e[i] == 0);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude over all terms.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|v| v.max_magnitude()).fold(0.0, f64::max)
    }

    /// Scalar coefficients of 𝟏·z⁰ in a one-variable unramified series, as a
    /// dense vector indexed by exponent.
    pub fn scalar_coeffs(&self) -> Result<Vec<R>> {
        if self.vars.len() != 1 || self.vars[0].ram != 1 {
            return Err(Error::Incompatible("need a single unramified variable".into()));
        }
        let n = crate::scalar::q_floor(&self.order).max(0) as usize + 1;
        let mut out = vec![R::zero(); n];
        for (e, v) in &self.terms {
            for (k, c) in &v.terms {
                let scalar_only = c.iter().enumerate().all(|(j, x)| j == 0 || x.is_zero());
                if *k != 0 || !scalar_only || e[0] < 0 {
                    return Err(Error::Incompatible("series is not scalar".into()));
                }
                out[e[0] as usize] = c[0].clone();
            }
        }
        Ok(out)
    }

    pub fn from_scalar_coeffs(alg: Arc<GradedAlgebra>, var: Var, c: &[R]) -> Self {
        let order = qi(c.len() as i64 - 1);
        let mut s = CohSeries::new(alg.clone(), vec![var], None, order);
        for (k, x) in c.iter().enumerate() {
            if !x.is_zero() {
                let mut v = alg.zero::<R>();
                v[0] = x.clone();
                s.add_term(vec![k as i64], &LaurentZ::constant(v));
            }
        }
        s
    }

    /// Compositional inverse of a scalar one-variable series f = a₁y + ….
    pub fn revert(&self) -> Result<Self> {
        let c = self.scalar_coeffs()?;
        let r = revert(&c, c.len())?;
        Ok(Self::from_scalar_coeffs(self.alg.clone(), self.vars[0].clone(), &r))
    }
}

/// Compositional inverse g of f (f₀ = 0, f₁ a unit), first n coefficients.
pub fn revert<R: Scalar>(f: &[R], n: usize) -> Result<Vec<R>> {
    if f.first().is_some_and(|x| !x.is_zero()) {
        return Err(Error::NonzeroConstant(0));
    }
    let a1 = f.get(1).and_then(|x| x.inv()).ok_or(Error::NonUnitLeading)?;
    let mut g = vec![R::zero(); n];
    if n < 2 {
        return Ok(g);
    }
    g[1] = a1.clone();
    // Fix coefficients one order at a time: f(g(x)) = x mod x^{k+1}.
    for k in 2..n {
        let comp = compose(f, &g, k + 1);
        g[k] = comp[k].mul(&a1).neg();
    }
    Ok(g)
}

/// f(g(x)) truncated to n coefficients, g₀ = 0.
pub fn compose<R: Scalar>(f: &[R], g: &[R], n: usize) -> Vec<R> {
    use crate::scalar::ps;
    let mut out = vec![R::zero(); n];
    let mut pw = vec![R::zero(); n];
    if n > 0 {
        pw[0] = R::one();
    }
    for (k, fk) in f.iter().enumerate().take(n) {
        if k > 0 {
            pw = ps::mul(&pw, g, n);
        }
        if fk.is_zero() {
            continue;
        }
        for (o, p) in out.iter_mut().zip(&pw) {
            *o = o.add(&p.mul(fk));
        }
    }
    out
}

fn elem_json(alg: &GradedAlgebra, v: &[Q]) -> Vec<Value> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| json!({"class": alg.labels()[i], "val": q_to_string(c)}))
        .collect()
}

fn elem_parse(alg: &GradedAlgebra, items: &Value) -> Result<Vec<Q>> {
    let bad = |m: &str| Error::Parse(m.to_string());
    let mut v = vec![qi(0); alg.dim()];
    for it in items.as_array().ok_or_else(|| bad("class list"))? {
        let label = it["class"].as_str().ok_or_else(|| bad("class"))?;
        let k = alg.label_index(label).ok_or_else(|| bad(&format!("unknown class {label}")))?;
        v[k] += q_parse(it["val"].as_str().ok_or_else(|| bad("val"))?)?;
    }
    Ok(v)
}

impl CohSeries<Q> {
    /// JSON form; exponents are written as rationals in the original variables.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, v)| {
                let exp: Vec<String> =
                    e.iter().zip(&self.vars).map(|(x, var)| q_to_string(&q(*x, var.ram as i64))).collect();
                let mut z = Vec::new();
                for (k, c) in &v.terms {
                    for item in elem_json(&self.alg, c) {
                        z.push(json!([k, item]));
                    }
                }
                json!({"exp": exp, "z": z})
            })
            .collect();
        json!({
            "algebra": self.alg.name,
            "vars": self.vars.iter().map(|v| json!({"name": v.name, "ram": v.ram})).collect::<Vec<_>>(),
            "prefactor": self.prefactor.as_ref().map(|p| p.iter().map(|c| elem_json(&self.alg, c)).collect::<Vec<_>>()),
            "order": q_to_string(&self.order),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let model: ModelId = v["algebra"].as_str().ok_or_else(|| bad("algebra"))?.parse()?;
        let alg = model.algebra();
        let vars: Vec<Var> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("vars"))?
            .iter()
            .map(|x| {
                Ok(Var::new(
                    x["name"].as_str().ok_or_else(|| bad("name"))?,
                    x["ram"].as_u64().ok_or_else(|| bad("ram"))? as u32,
                ))
            })
            .collect::<Result<_>>()?;
        let prefactor = match &v["prefactor"] {
            Value::Null => None,
            Value::Array(a) => Some(a.iter().map(|c| elem_parse(&alg, c)).collect::<Result<Vec<_>>>()?),
            _ => return Err(bad("prefactor")),
        };
        let order = q_parse(v["order"].as_str().ok_or_else(|| bad("order"))?)?;
        let mut s = CohSeries::new(alg.clone(), vars.clone(), prefactor, order);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let e: Vec<i64> = t["exp"]
                .as_array()
                .ok_or_else(|| bad("exp"))?
                .iter()
                .zip(&vars)
                .map(|(x, var)| {
                    let r = q_parse(x.as_str().ok_or_else(|| bad("exp entry"))?)? * qi(var.ram as i64);
                    crate::scalar::q_as_int(&r).ok_or_else(|| bad("exponent off lattice"))
                })
                .collect::<Result<_>>()?;
            let mut lz = LaurentZ::zero(alg.dim());
            for item in t["z"].as_array().ok_or_else(|| bad("z"))? {
                let k = item[0].as_i64().ok_or_else(|| bad("z power"))? as i32;
                let cls = elem_parse(&alg, &Value::Array(vec![item[1].clone()]))?;
                lz.add_at(k, &cls);
            }
            s.add_term(e, &lz);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn revert_geometric() {
        // f = y/(1−y) ⇒ f⁻¹ = y/(1+y)
        let f: Vec<Q> = (0..8).map(|k| if k == 0 { qi(0) } else { qi(1) }).collect();
        let g = revert(&f, 8).unwrap();
        let expect: Vec<Q> = (0..8).map(|k| if k == 0 { qi(0) } else if k % 2 == 1 { qi(1) } else { qi(-1) }).collect();
        assert_eq!(g, expect);
        assert!(revert(&[qi(1), qi(1)], 3).is_err());
        assert_eq!(revert(&[qi(0), qi(0), qi(1)], 3), Err(Error::NonUnitLeading));
    }
}

/// Scalar multivariate power series in unramified variables, truncated at
/// total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<R: Scalar> {
    pub nvars: usize,
    pub order: i64,
    pub terms: BTreeMap<Vec<i64>, R>,
}

impl<R: Scalar> PowerSeries<R> {
    pub fn zero(nvars: usize, order: i64) -> Self {
        PowerSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: i64, c: R) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(vec![0; nvars], &c);
        s
    }

    /// The coordinate function y_i.
    pub fn var(nvars: usize, order: i64, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut s = Self::zero(nvars, order);
        s.add_term(e, &R::one());
        s
    }

    /// One-variable series from dense coefficients.
    pub fn from_dense(c: &[R]) -> Self {
        let mut s = Self::zero(1, c.len() as i64 - 1);
        for (k, x) in c.iter().enumerate() {
            s.add_term(vec![k as i64], x);
        }
        s
    }

    pub fn to_dense(&self, var: usize) -> Vec<R> {
        let mut out = vec![R::zero(); self.order.max(0) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().all(|(j, x)| j == var || *x == 0) {
                out[e[var] as usize] = c.clone();
            }
        }
        out
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: &R) {
        if e.iter().sum::<i64>() > self.order || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(R::zero);
        *slot = slot.add(c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[i64]) -> R {
        self.terms.get(e).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars, self.order.min(o.order));
        for (e, c) in self.terms.iter().chain(&o.terms) {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&R::from_i64(-1)))
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut r = Self::zero(self.nvars, self.order);
        for (e, x) in &self.terms {
            r.add_term(e.clone(), &x.mul(c));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars, self.order.min(o.order));
        for (e1, a) in &self.terms {
            for (e2, b) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                r.add_term(e, &a.mul(b));
            }
        }
        r
    }

    pub fn pow_u(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.order, R::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// exp of a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(0));
        }
        let mut acc = Self::constant(self.nvars, self.order, R::one());
        let mut pw = acc.clone();
        for k in 1..=self.order.max(0) {
            pw = pw.mul(self).scale(&R::from_q(&q(1, k)));
            acc = acc.add(&pw);
        }
        Ok(acc)
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != R::one() {
            return Err(Error::NonUnitLeading);
        }
        let h = self.sub(&Self::constant(self.nvars, self.order, R::one()));
        let mut acc = Self::zero(self.nvars, self.order);
        let mut pw = Self::constant(self.nvars, self.order, R::one());
        for k in 1..=self.order.max(0) {
            pw = pw.mul(&h);
            let c = if k % 2 == 1 { q(1, k) } else { q(-1, k) };
            acc = acc.add(&pw.scale(&R::from_q(&c)));
        }
        Ok(acc)
    }

    /// 1/f for f with unit constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term().inv().ok_or(Error::NonUnitLeading)?;
        let f = self.scale(&c0);
        let h = Self::constant(self.nvars, self.order, R::one()).sub(&f);
        let mut acc = Self::constant(self.nvars, self.order, R::one());
        let mut pw = acc.clone();
        for _ in 1..=self.order.max(0) {
            pw = pw.mul(&h);
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&c0))
    }

    /// f(g_1, …, g_n) for series g_i in a common set of variables, each without
    /// constant term.
    pub fn compose(&self, g: &[PowerSeries<R>]) -> Result<Self> {
        let nv = g[0].nvars;
        let order = g.iter().map(|s| s.order).min().unwrap_or(self.order);
        for (i, s) in g.iter().enumerate() {
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstant(i));
            }
        }
        let mut cache: Vec<Vec<PowerSeries<R>>> = g.iter().map(|s| vec![PowerSeries::constant(nv, order, R::one()), s.clone()]).collect();
        let mut acc = Self::zero(nv, order);
        for (e, c) in &self.terms {
            let mut t = PowerSeries::constant(nv, order, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().expect("nonempty").mul(&g[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][k as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}
