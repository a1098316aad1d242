//! Landau–Ginzburg mirrors: superpotentials on algebraic tori, their critical
//! points, residue pairings and the semisimple Jacobi rings.
//!
//! Hessians and gradients are taken in log coordinates of the fibre, matching
//! the dlog volume form. Critical points come from a per-model elimination to
//! one polynomial in a single fibre coordinate; its roots are seeded from the
//! companion matrix in double precision and then polished by Newton's method
//! at the working precision.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use crate::coh::ModelId;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::mirror::inverse_mirror_map;
use crate::mp::{par_map, Cx};
use crate::scalar::{q, Scalar, Q};
use crate::series::PowerSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// (y₁, y₂), or y for the orbifolds.
    Large,
    /// (𝔶₁, 𝔶₂) = (y₁^{−1/w}, y₁^{1/w} y₂).
    Orbifold,
}

/// c · base^b · w^a.
#[derive(Clone, Debug)]
struct Term {
    base: Vec<i64>,
    fiber: Vec<i64>,
    coeff: Cx,
}

#[derive(Clone, Debug)]
pub struct LgModel {
    pub model: ModelId,
    pub chart: Chart,
    pub base: Vec<Cx>,
    terms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub w: Vec<Cx>,
    pub value: Cx,
    pub hess: Cx,
}

fn cpow(x: &Cx, n: i64) -> Cx {
    x.powi(n)
}

impl LgModel {
    pub fn new(model: ModelId, chart: Chart, base: Vec<Cx>) -> Result<Self> {
        let nb = if model.is_orbifold() { 1 } else { 2 };
        if base.len() != nb {
            return Err(Error::Invalid(format!("{model} needs {nb} base coordinates")));
        }
        if model.is_orbifold() && chart == Chart::Orbifold {
            return Err(Error::Invalid("orbifold models have a single chart".into()));
        }
        // the orbifold chart extends over 𝔶₁ = 0
        let needed = if chart == Chart::Orbifold { &base[1..] } else { &base[..] };
        if needed.iter().any(|b| b.is_zero()) {
            return Err(Error::Discriminant);
        }
        // (base exponents, fibre exponents)
        let raw: Vec<(Vec<i64>, Vec<i64>)> = match (model, chart) {
            (ModelId::P112, _) => vec![
                (vec![0], vec![1, 0]),
                (vec![0], vec![0, 1]),
                (vec![1], vec![-1, -2]),
            ],
            (ModelId::P1113, _) => vec![
                (vec![0], vec![1, 0, 0]),
                (vec![0], vec![0, 1, 0]),
                (vec![0], vec![0, 0, 1]),
                (vec![1], vec![-1, -1, -3]),
            ],
            (ModelId::F2, Chart::Large) => vec![
                (vec![0, 0], vec![1, 0]),
                (vec![1, 2], vec![-1, -2]),
                (vec![0, 1], vec![0, -1]),
                (vec![0, 0], vec![0, 1]),
            ],
            (ModelId::F2, Chart::Orbifold) => vec![
                (vec![0, 0], vec![1, 0]),
                (vec![0, 2], vec![-1, -2]),
                (vec![1, 1], vec![0, -1]),
                (vec![0, 0], vec![0, 1]),
            ],
            (ModelId::F3, Chart::Large) => vec![
                (vec![0, 0], vec![1, 0, 0]),
                (vec![0, 0], vec![0, 1, 0]),
                (vec![1, 3], vec![-1, -1, -3]),
                (vec![0, 1], vec![0, 0, -1]),
                (vec![0, 0], vec![0, 0, 1]),
            ],
            (ModelId::F3, Chart::Orbifold) => vec![
                (vec![0, 0], vec![1, 0, 0]),
                (vec![0, 0], vec![0, 1, 0]),
                (vec![0, 3], vec![-1, -1, -3]),
                (vec![1, 1], vec![0, 0, -1]),
                (vec![0, 0], vec![0, 0, 1]),
            ],
        };
        let terms = raw
            .into_iter()
            .map(|(b, a)| {
                let coeff = b.iter().zip(&base).fold(Cx::one(), |acc, (e, x)| acc.mul(&cpow(x, *e)));
                Term { base: b, fiber: a, coeff }
            })
            .collect();
        Ok(LgModel { model, chart, base, terms })
    }

    pub fn fiber_dim(&self) -> usize {
        self.terms[0].fiber.len()
    }

    /// Number of critical points: the rank of the cohomology.
    pub fn expected_count(&self) -> usize {
        self.model.algebra().dim()
    }

    fn term_values(&self, w: &[Cx]) -> Vec<Cx> {
        self.terms
            .iter()
            .map(|t| t.fiber.iter().zip(w).fold(t.coeff.clone(), |acc, (e, x)| acc.mul(&cpow(x, *e))))
            .collect()
    }

    pub fn value(&self, w: &[Cx]) -> Cx {
        self.term_values(w).iter().fold(Cx::zero(), |a, b| a.add(b))
    }

    /// w_i ∂W/∂w_i.
    pub fn log_gradient(&self, w: &[Cx]) -> Vec<Cx> {
        let tv = self.term_values(w);
        (0..self.fiber_dim())
            .map(|i| {
                self.terms
                    .iter()
                    .zip(&tv)
                    .fold(Cx::zero(), |acc, (t, v)| acc.add(&v.scale_q(&Q::from_integer(t.fiber[i].into()))))
            })
            .collect()
    }

    pub fn log_hessian(&self, w: &[Cx]) -> Mat<Cx> {
        let tv = self.term_values(w);
        let n = self.fiber_dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.terms.iter().zip(&tv).fold(Cx::zero(), |acc, (t, v)| {
                            acc.add(&v.scale_q(&Q::from_integer((t.fiber[i] * t.fiber[j]).into())))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// b_j ∂W/∂b_j for the j-th base coordinate.
    pub fn base_log_derivative(&self, w: &[Cx], j: usize) -> Cx {
        let tv = self.term_values(w);
        self.terms
            .iter()
            .zip(&tv)
            .fold(Cx::zero(), |acc, (t, v)| acc.add(&v.scale_q(&Q::from_integer(t.base[j].into()))))
    }

    /// ∂W/∂b_j, defined also where b_j = 0.
    pub fn base_partial(&self, w: &[Cx], j: usize) -> Cx {
        self.terms.iter().filter(|t| t.base[j] != 0).fold(Cx::zero(), |acc, t| {
            let c = t.base.iter().enumerate().fold(Cx::from_i64(t.base[j]), |a, (k, e)| {
                a.mul(&cpow(&self.base[k], if k == j { e - 1 } else { *e }))
            });
            let v = t.fiber.iter().zip(w).fold(c, |a, (e, x)| a.mul(&cpow(x, *e)));
            acc.add(&v)
        })
    }

    /// Eliminant polynomial (coefficients low to high) in one fibre
    /// coordinate t, with the map from a root to the full critical point.
    fn elimination(&self) -> (Vec<Cx>, Box<dyn Fn(&Cx) -> Vec<Cx> + '_>) {
        match self.model {
            ModelId::P1113 | ModelId::P112 => {
                // P1113: u⁶ = y/27 at (u, u, 3u); P112: u⁴ = y/4 at (u, 2u)
                let (deg, k) = if self.model == ModelId::P1113 { (6, 27) } else { (4, 4) };
                let mut c = vec![Cx::zero(); deg + 1];
                c[0] = self.base[0].scale_q(&q(-1, k)).clone();
                c[deg] = Cx::one();
                let map: Box<dyn Fn(&Cx) -> Vec<Cx>> = if self.model == ModelId::P1113 {
                    Box::new(|u: &Cx| vec![u.clone(), u.clone(), u.scale_q(&Q::from_integer(3.into()))])
                } else {
                    Box::new(|u: &Cx| vec![u.clone(), u.scale_q(&Q::from_integer(2.into()))])
                };
                (c, map)
            }
            ModelId::F2 | ModelId::F3 => {
                // (t² − a)^w = w^w · r, first fibre coordinates (t − a/t)/w
                let w: i64 = if self.model == ModelId::F2 { 2 } else { 3 };
                let (b1, b2) = (&self.base[0], &self.base[1]);
                let (a, r) = match self.chart {
                    Chart::Large => (b2.clone(), b1.mul(&cpow(b2, w))),
                    Chart::Orbifold => (b1.mul(b2), cpow(b2, w)),
                };
                let mut c = vec![Cx::zero(); 2 * w as usize + 1];
                for k in 0..=w {
                    let binom = Q::from_integer(crate::scalar::binomial(w as u32, k as u32));
                    let sign = if (w - k) % 2 == 0 { binom } else { -binom };
                    c[2 * k as usize] = cpow(&a, w - k).scale_q(&sign);
                }
                c[0] = c[0].sub(&r.scale_q(&Q::from_integer(w.pow(w as u32).into())));
                let wq = q(1, w);
                let map: Box<dyn Fn(&Cx) -> Vec<Cx>> = Box::new(move |t: &Cx| {
                    let m = t.sub(&a.div(t).expect("nonzero root")).scale_q(&wq);
                    let mut v = vec![m.clone(); (w - 1) as usize];
                    v.push(t.clone());
                    v
                });
                (c, map)
            }
        }
    }

    fn newton(&self, mut w: Vec<Cx>, tol: f64) -> Result<Vec<Cx>> {
        for _ in 0..200 {
            let g = self.log_gradient(&w);
            let res = g.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
            if res < tol {
                return Ok(w);
            }
            let h = self.log_hessian(&w);
            let d = linalg::solve(&h, &g.iter().map(|x| x.neg()).collect::<Vec<_>>())?;
            w = w.iter().zip(&d).map(|(x, dx)| x.mul(&dx.exp())).collect();
        }
        let g = self.log_gradient(&w);
        Err(Error::NoConvergence(g.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)))
    }

    fn scale(&self) -> f64 {
        self.base.iter().map(|b| b.abs_f64()).fold(1.0, f64::max)
    }

    fn tolerance(&self) -> f64 {
        let digits = crate::mp::bits() as f64 * std::f64::consts::LOG10_2;
        10f64.powf(-(digits - 5.0).max(10.0)) * self.scale()
    }

    /// Exactly rank-many nondegenerate critical points.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>> {
        let n = self.expected_count();
        let tol = self.tolerance();
        let seeds = match self.elimination_seeds(tol) {
            Ok(s) if s.len() == n => s,
            _ => self.random_seeds(tol)?,
        };
        let pts: Vec<CriticalPoint> = par_map(&seeds, |w| -> Result<CriticalPoint> {
            let w = self.newton(w.clone(), tol)?;
            let hess = linalg::det(&self.log_hessian(&w));
            Ok(CriticalPoint { value: self.value(&w), w, hess })
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let pts = dedup(pts, self.scale() * 1e-12);
        if pts.len() != n {
            return Err(Error::RootCount { found: pts.len(), expected: n });
        }
        if pts.iter().any(|p| p.hess.abs_f64() < tol) {
            return Err(Error::SingularHessian);
        }
        Ok(pts)
    }

    fn elimination_seeds(&self, tol: f64) -> Result<Vec<Vec<Cx>>> {
        let (poly, map) = self.elimination();
        let roots = polish_roots(&poly, &companion_roots(&poly)?, tol)?;
        Ok(roots.iter().map(map).collect())
    }

    /// Newton from seeded random points on the torus, duplicates merged.
    fn random_seeds(&self, tol: f64) -> Result<Vec<Vec<Cx>>> {
        let mut rng = StdRng::seed_from_u64(0x1f2f3f);
        let s = self.scale();
        let mut found: Vec<Vec<Cx>> = Vec::new();
        for _ in 0..200 {
            let w: Vec<Cx> = (0..self.fiber_dim())
                .map(|_| {
                    let r: f64 = rng.random_range(0.05..2.0) * s;
                    let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    Cx::from_f64(r * th.cos(), r * th.sin())
                })
                .collect();
            if let Ok(p) = self.newton(w, tol) {
                if !found.iter().any(|f| dist(f, &p) < s * 1e-12) {
                    found.push(p);
                }
            }
        }
        Ok(found)
    }
}

fn dist(a: &[Cx], b: &[Cx]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.sub(y).abs_f64()).fold(0.0, f64::max)
}

fn dedup(pts: Vec<CriticalPoint>, sep: f64) -> Vec<CriticalPoint> {
    let mut out: Vec<CriticalPoint> = Vec::new();
    for p in pts {
        if !out.iter().any(|o| dist(&o.w, &p.w) < sep) {
            out.push(p);
        }
    }
    out
}

fn to_c64(x: &Cx) -> Complex64 {
    let (re, im) = x.to_f64();
    Complex64::new(re, im)
}

/// Roots of Σ c_k t^k from the eigenvalues of the companion matrix.
fn companion_roots(c: &[Cx]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = to_c64(&c[n]);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -to_c64(&c[i]) / lead;
    }
    schur_eigenvalues(m)
}

/// Eigenvalues from a bounded complex Schur iteration. Spectra of equal
/// modulus (roots of u⁶ = c) stall the unshifted iteration, so the matrix is
/// first moved by a complex multiple of the identity.
fn schur_eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    for shift in [Complex64::new(0.37, 0.61), Complex64::new(-0.53, 0.29), Complex64::new(0.0, 0.0)] {
        let s = shift * scale;
        let shifted = &m + DMatrix::<Complex64>::identity(n, n) * s;
        if let Some(v) = nalgebra::linalg::Schur::try_new(shifted, 1e-15, 10_000).and_then(|x| x.eigenvalues()) {
            return Ok(v.iter().map(|e| e - s).collect());
        }
    }
    Err(Error::NoConvergence(f64::NAN))
}

fn horner(c: &[Cx], t: &Cx) -> (Cx, Cx) {
    let mut p = Cx::zero();
    let mut dp = Cx::zero();
    for a in c.iter().rev() {
        dp = dp.mul(t).add(&p);
        p = p.mul(t).add(a);
    }
    (p, dp)
}

fn polish_roots(c: &[Cx], seeds: &[Complex64], tol: f64) -> Result<Vec<Cx>> {
    let scale = c.iter().map(|x| x.abs_f64()).fold(0.0, f64::max);
    par_map(seeds, |s| {
        let mut t = Cx::from_f64(s.re, s.im);
        for _ in 0..100 {
            let (p, dp) = horner(c, &t);
            if p.abs_f64() < tol * scale * 1e-3 {
                break;
            }
            t = t.sub(&p.div(&dp)?);
        }
        Ok(t)
    })
    .into_iter()
    .collect()
}

/// Σ_k f(σ_k) g(σ_k) / Hess W(σ_k).
pub fn residue_pairing(f: &[Cx], g: &[Cx], pts: &[CriticalPoint]) -> Result<Cx> {
    let mut acc = Cx::zero();
    for ((a, b), p) in f.iter().zip(g).zip(pts) {
        acc = acc.add(&a.mul(b).div(&p.hess).map_err(|_| Error::SingularHessian)?);
    }
    Ok(acc)
}

pub fn gram(frame: &[Vec<Cx>], pts: &[CriticalPoint]) -> Result<Mat<Cx>> {
    frame
        .iter()
        .map(|f| frame.iter().map(|g| residue_pairing(f, g, pts)).collect())
        .collect()
}

/// Evaluates a truncated series at a point.
pub fn eval_series(s: &PowerSeries<Q>, x: &[Cx]) -> Cx {
    s.terms.iter().fold(Cx::zero(), |acc, (e, c)| {
        let m = e.iter().zip(x).fold(Cx::from_q(c), |a, (k, v)| a.mul(&v.powi(*k)));
        acc.add(&m)
    })
}

/// Large-radius base point y(q) and the Jacobian J_ij = ∂log y_j/∂log q_i,
/// from the inverse mirror map truncated at `order`.
pub fn base_from_flat(model: ModelId, qv: &[Cx], order: i64) -> Result<(Vec<Cx>, Mat<Cx>)> {
    let n = qv.len();
    if model.is_orbifold() {
        return Ok((qv.to_vec(), linalg::identity(n)));
    }
    let v = inverse_mirror_map(model, order)?;
    let y: Vec<Cx> = (0..n).map(|j| qv[j].mul(&eval_series(&v[j], qv))).collect();
    let logs: Vec<PowerSeries<Q>> = v.iter().map(|s| s.log()).collect::<Result<_>>()?;
    let mut jac: Mat<Cx> = linalg::identity(n);
    for (i, row) in jac.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut d = PowerSeries::zero(n, order);
            for (e, c) in &logs[j].terms {
                if e[i] != 0 {
                    d.add_term(e.clone(), &(c * Q::from_integer(e[i].into())));
                }
            }
            *slot = slot.add(&eval_series(&d, qv));
        }
    }
    Ok((y, jac))
}

/// Values of the flat-frame functions at each critical point: for orbifolds
/// the powers of p = y∂_yW completed by the twisted sectors, for the
/// resolutions 1 and P_i = q_i∂_{q_i}W.
pub fn mirror_frame(lg: &LgModel, pts: &[CriticalPoint], jac: &Mat<Cx>) -> Vec<Vec<Cx>> {
    let y = &lg.base[0];
    let p: Vec<Cx> = pts.iter().map(|s| lg.base_log_derivative(&s.w, 0)).collect();
    let pow = |k: i64| p.iter().map(|x| x.powi(k)).collect::<Vec<_>>();
    let ypow = |r: &Q| y.ln().mul(&Cx::from_q(r)).exp();
    match lg.model {
        ModelId::P1113 => {
            let mut f: Vec<Vec<Cx>> = (0..4).map(pow).collect();
            let a = ypow(&q(-1, 3)).scale_q(&Q::from_integer(3.into()));
            let b = ypow(&q(-2, 3)).scale_q(&Q::from_integer(9.into()));
            f.push(pow(4).iter().map(|x| x.mul(&a)).collect());
            f.push(pow(5).iter().map(|x| x.mul(&b)).collect());
            f
        }
        ModelId::P112 => {
            let mut f: Vec<Vec<Cx>> = (0..3).map(pow).collect();
            let a = ypow(&q(-1, 2)).scale_q(&Q::from_integer(2.into()));
            f.push(pow(3).iter().map(|x| x.mul(&a)).collect());
            f
        }
        ModelId::F2 | ModelId::F3 => {
            let d: Vec<Vec<Cx>> = (0..2).map(|j| pts.iter().map(|s| lg.base_log_derivative(&s.w, j)).collect()).collect();
            let mut f = vec![vec![Cx::one(); pts.len()]];
            for row in jac {
                f.push((0..pts.len()).map(|k| row[0].mul(&d[0][k]).add(&row[1].mul(&d[1][k]))).collect());
            }
            f
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GramCheck {
    pub labels: Vec<String>,
    pub max_deviation: f64,
}

/// Residue-pairing Gram in the mirror frame against the Poincaré pairing.
/// For the resolutions the frame {1, P₁, P₂} is compared entrywise, together
/// with ⟨1, P_a P_b⟩ = ∫p_a p_b.
pub fn gram_check(model: ModelId, qv: &[Cx], order: i64) -> Result<GramCheck> {
    let (y, jac) = base_from_flat(model, qv, order)?;
    let lg = LgModel::new(model, Chart::Large, y)?;
    let pts = lg.critical_points()?;
    let frame = mirror_frame(&lg, &pts, &jac);
    let g = gram(&frame, &pts)?;
    let alg = model.algebra();
    let mut dev: f64 = 0.0;
    let mut labels = Vec::new();
    if model.is_orbifold() {
        for (i, row) in g.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                dev = dev.max(x.sub(&Cx::from_q(&alg.pairing_matrix()[i][j])).abs_f64());
            }
        }
        labels = alg.labels().to_vec();
    } else {
        let cls: Vec<Vec<Q>> = std::iter::once(alg.unit())
            .chain(alg.generators().iter().map(|(_, v)| v.clone()))
            .collect();
        for (i, row) in g.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                dev = dev.max(x.sub(&Cx::from_q(&alg.pair(&cls[i], &cls[j]))).abs_f64());
            }
        }
        let ones = vec![Cx::one(); pts.len()];
        for a in 1..3 {
            for b in 1..3 {
                let prod: Vec<Cx> = frame[a].iter().zip(&frame[b]).map(|(x, y)| x.mul(y)).collect();
                let v = residue_pairing(&ones, &prod, &pts)?;
                dev = dev.max(v.sub(&Cx::from_q(&alg.pair(&cls[a], &cls[b]))).abs_f64());
            }
        }
        labels.push("1".into());
        labels.extend(alg.generators().iter().map(|(n, _)| n.clone()));
    }
    Ok(GramCheck { labels, max_deviation: dev })
}

/// Jacobi-ring relations evaluated pointwise on the critical set, with p_i
/// the function y_i∂_{y_i}W at the large-radius base point y; each entry is
/// (relation, max residual over points). These are the z → 0 symbols of the
/// Picard–Fuchs operators, so they hold in the B-model coordinates.
pub fn ring_relations(model: ModelId, qv: &[Cx]) -> Result<Vec<(String, f64)>> {
    let lg = LgModel::new(model, Chart::Large, qv.to_vec())?;
    let pts = lg.critical_points()?;
    let frame = mirror_frame(&lg, &pts, &linalg::identity(qv.len()));
    let n = pts.len();
    let max = |f: &dyn Fn(usize) -> Cx| (0..n).map(|k| f(k).abs_f64()).fold(0.0, f64::max);
    let mut out = Vec::new();
    match model {
        ModelId::P1113 => {
            let r = qv[0].scale_q(&q(1, 27));
            out.push(("p^6 = y/27".into(), max(&|k| frame[1][k].powi(6).sub(&r))));
        }
        ModelId::P112 => {
            let r = qv[0].scale_q(&q(1, 4));
            out.push(("p^4 = y/4".into(), max(&|k| frame[1][k].powi(4).sub(&r))));
        }
        ModelId::F2 | ModelId::F3 => {
            let w: i64 = if model == ModelId::F2 { 2 } else { 3 };
            let e = |k: usize| frame[2][k].sub(&frame[1][k].scale_q(&Q::from_integer(w.into())));
            out.push((
                format!("p2 (p2 - {w}p1) = y2"),
                max(&|k| frame[2][k].mul(&e(k)).sub(&qv[1])),
            ));
            out.push((
                format!("p1^{w} = y1 (p2 - {w}p1)^{w}"),
                max(&|k| frame[1][k].powi(w).sub(&qv[0].mul(&e(k).powi(w)))),
            ));
        }
    }
    Ok(out)
}

/// The matrix of p∘ for ℙ(1,1,1,3) in the frame e₀…e₅, with t = y^{1/3}.
pub fn connection_matrix_p1113<R: Scalar>(t: &R) -> Mat<R> {
    let mut m: Mat<R> = linalg::zeros(6, 6);
    let t3 = t.scale_q(&q(1, 3));
    m[0][5] = t3.clone();
    m[1][0] = R::one();
    m[2][1] = R::one();
    m[3][2] = R::one();
    m[4][3] = t3.clone();
    m[5][4] = t3;
    m
}

/// Polynomials in t with rational coefficients, low degree first.
pub type PolyQ = Vec<Q>;

fn poly_mul(a: &PolyQ, b: &PolyQ) -> PolyQ {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::from_integer(0.into()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut p: PolyQ) -> PolyQ {
    while p.last().is_some_and(num_traits::Zero::is_zero) {
        p.pop();
    }
    p
}

/// k-th power of the connection matrix over ℚ[t].
pub fn connection_power_p1113(k: u32) -> Mat<PolyQ> {
    let one = vec![Q::from_integer(1.into())];
    let t3 = vec![Q::from_integer(0.into()), q(1, 3)];
    let mut m: Mat<PolyQ> = vec![vec![vec![]; 6]; 6];
    m[0][5] = t3.clone();
    m[1][0] = one.clone();
    m[2][1] = one.clone();
    m[3][2] = one;
    m[4][3] = t3.clone();
    m[5][4] = t3;
    let mut acc: Mat<PolyQ> = (0..6)
        .map(|i| (0..6).map(|j| if i == j { vec![Q::from_integer(1.into())] } else { vec![] }).collect())
        .collect();
    for _ in 0..k {
        acc = (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let mut s: PolyQ = vec![];
                        for (l, ml) in m.iter().enumerate() {
                            let p = poly_mul(&acc[i][l], &ml[j]);
                            if s.len() < p.len() {
                                s.resize(p.len(), Q::from_integer(0.into()));
                            }
                            for (x, y) in s.iter_mut().zip(&p) {
                                *x += y;
                            }
                        }
                        trim(s)
                    })
                    .collect()
            })
            .collect();
    }
    acc
}

/// Eigenvalues (double precision) of the connection matrix at t.
pub fn connection_eigenvalues_p1113(t: f64) -> Vec<Complex64> {
    let m = connection_matrix_p1113(&Cx::from_f64(t, 0.0));
    let d = DMatrix::from_fn(6, 6, |i, j| to_c64(&m[i][j]));
    schur_eigenvalues(d).unwrap_or_default()
}
