//! Comparisons between each orbifold and its crepant resolution.
//!
//! [`ThetaMap`] holds the linear maps Θ from orbifold to resolution
//! cohomology as Laurent polynomials in t = q^{1/root}. For ℙ(1,1,1,3)/𝔽₃
//! the conjugation of small quantum products is verified through the frame
//! of differential operators applied to the continued 𝔽₃ I-function at
//! 𝔶₁ = 0. For ℙ(1,1,2)/𝔽₂ the flat frame of the 𝔽₂ mirror is followed
//! symbolically in v = √q₁ (rational functions over ℚ) to the point
//! q₁ = −1, where the orbifold-chart superpotential is the ℙ(1,1,2) one.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::barnes::continued_coefficient;
use crate::coh::{GradedAlgebra, ModelId};
use crate::error::{Error, Result};
use crate::givental::Pair;
use crate::lg::{self, Chart, CriticalPoint, LgModel};
use crate::linalg::{self, Mat};
use crate::mp::{with_digits, Cx};
use crate::scalar::{q, qi, Atom, Const, Scalar, K, Q};
use crate::series::LaurentZ;

/// Θ(q) with entries Laurent polynomials in t = q^{1/root}.
#[derive(Clone, Debug)]
pub struct ThetaMap {
    pub pair: Pair,
    pub source: Arc<GradedAlgebra>,
    pub target: Arc<GradedAlgebra>,
    pub root: u32,
    /// cols[j][k]: coefficient of t^k in the image of source class j.
    pub cols: Vec<BTreeMap<i32, Vec<Const>>>,
}

/// Deviation of ⟨Θa, Θb⟩ from ⟨a, b⟩ at one power of t.
pub type PairingDefect = (usize, usize, i32, Const);

impl ThetaMap {
    /// deg t, from deg q = 2·Σ weights.
    pub fn degree_of_t(&self) -> Q {
        let w: i64 = self.pair.orbifold().charges()[0].iter().sum();
        q(2 * w, self.root as i64)
    }

    pub fn matrix_at(&self, t: &Cx) -> Mat<Cx> {
        let n = self.target.dim();
        let mut m: Mat<Cx> = linalg::zeros(n, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (k, v) in col {
                let tk = t.powi(*k as i64);
                for (r, c) in v.iter().enumerate() {
                    m[r][j] = m[r][j].add(&Cx::from_const(c).mul(&tk));
                }
            }
        }
        m
    }

    /// The t⁰ matrix when Θ does not depend on q.
    pub fn constant_matrix(&self) -> Option<Mat<Const>> {
        if self.q_dependent() {
            return None;
        }
        let n = self.target.dim();
        Some(
            (0..n)
                .map(|r| {
                    self.cols.iter().map(|c| c.get(&0).map(|v| v[r].clone()).unwrap_or_else(Const::zero)).collect()
                })
                .collect(),
        )
    }

    /// Symbolic pairing congruence: every nonzero power of t must pair to
    /// zero and t⁰ must reproduce the source pairing.
    pub fn pairing_defects(&self) -> Vec<PairingDefect> {
        let mut out = Vec::new();
        let g = self.source.pairing_matrix();
        for (a, ca) in self.cols.iter().enumerate() {
            for (b, cb) in self.cols.iter().enumerate() {
                let mut acc: BTreeMap<i32, Const> = BTreeMap::new();
                for (k, x) in ca {
                    for (l, y) in cb {
                        let e = acc.entry(k + l).or_insert_with(Const::zero);
                        *e = e.add(&self.target.pair(x, y));
                    }
                }
                let e = acc.entry(0).or_insert_with(Const::zero);
                *e = e.sub(&Const::from_q(&g[a][b]));
                out.extend(acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (a, b, k, v)));
            }
        }
        out
    }

    /// (source class, t power, target class) triples whose degrees disagree.
    pub fn grading_defects(&self) -> Vec<(usize, i32, usize)> {
        let dt = self.degree_of_t();
        let (ds, dg) = (self.source.degrees(), self.target.degrees());
        let mut out = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (k, v) in col {
                for (r, c) in v.iter().enumerate() {
                    if !c.is_zero() && &dg[r] + &dt * qi(*k as i64) != ds[j] {
                        out.push((j, *k, r));
                    }
                }
            }
        }
        out
    }

    pub fn preserves_unit(&self) -> bool {
        let u: Vec<Const> = self.target.unit();
        let c = &self.cols[0];
        c.len() == 1 && c.get(&0) == Some(&u)
    }

    /// Some entry carries a nonzero power of t, so ∂_q Θ ≠ 0.
    pub fn q_dependent(&self) -> bool {
        self.cols.iter().any(|c| c.iter().any(|(k, v)| *k != 0 && v.iter().any(|x| !x.is_zero())))
    }
}

fn lin(terms: &[(Const, &[Const])]) -> Vec<Const> {
    let n = terms[0].1.len();
    (0..n)
        .map(|r| terms.iter().fold(Const::zero(), |acc, (c, v)| acc.add(&c.mul(&v[r]))))
        .collect()
}

/// β₁ = 2π/(9Γ(1/3)³), β₂ = 2π/(9Γ(2/3)³).
pub fn betas() -> (Const, Const) {
    let c = Const::pi().mul(&Const::rat(2, 9));
    let b1 = c.mul(&Const::atom_pow(Atom::G, -1));
    let b2 = c.mul(&Const::gamma_two_thirds_cubed().inv().expect("monomial"));
    (b1, b2)
}

/// Θ(q) for ℙ(1,1,1,3) → 𝔽₃ at z = 0, with t = y^{1/3} and 𝔭₁ = p₂ − 3p₁.
pub fn theta_p1113() -> Result<ThetaMap> {
    let source = ModelId::P1113.algebra();
    let target = ModelId::F3.algebra();
    let p1: Vec<Const> = target.lift(target.generator("p1").expect("p1"));
    let p2: Vec<Const> = target.lift(target.generator("p2").expect("p2"));
    let one: Vec<Const> = target.unit();
    let pp = lin(&[(Const::one(), &p2), (Const::from_i64(-3), &p1)]);
    let pp2 = target.mul(&pp, &pp)?;
    let h = lin(&[(Const::rat(1, 3), &p2)]);
    let h2 = target.mul(&h, &h)?;
    let h3 = target.mul(&h2, &h)?;
    let (b1, b2) = betas();
    let s3 = Const::sqrt3();
    let col = |terms: Vec<(i32, Vec<Const>)>| terms.into_iter().collect::<BTreeMap<_, _>>();
    let cols = vec![
        col(vec![(0, one.clone())]),
        col(vec![(0, h)]),
        col(vec![(0, h2)]),
        col(vec![(0, h3), (1, lin(&[(s3.mul(&b1).neg(), &pp)]))]),
        col(vec![
            (0, lin(&[(Const::pi().mul(&Const::rat(2, 3)).mul(&b1), &pp2)])),
            (1, lin(&[(b1.mul(&b2.inv().expect("monomial")), &one)])),
        ]),
        col(vec![(0, lin(&[(s3.mul(&b2), &pp)]))]),
    ];
    Ok(ThetaMap { pair: Pair::P1113F3, source, target, root: 3, cols })
}

/// Θ for ℙ(1,1,2) → 𝔽₂; independent of q.
pub fn theta_p112() -> Result<ThetaMap> {
    let source = ModelId::P112.algebra();
    let target = ModelId::F2.algebra();
    let p1: Vec<Const> = target.lift(target.generator("p1").expect("p1"));
    let p2: Vec<Const> = target.lift(target.generator("p2").expect("p2"));
    let h = lin(&[(Const::rat(1, 2), &p2)]);
    let h2 = target.mul(&h, &h)?;
    let mi2 = Const::i().mul(&Const::rat(-1, 2));
    let tw = lin(&[(mi2.clone(), &p2), (mi2.mul(&Const::from_i64(-2)), &p1)]);
    let cols = [target.unit(), h, h2, tw].into_iter().map(|v| BTreeMap::from([(0, v)])).collect();
    Ok(ThetaMap { pair: Pair::P112F2, source, target, root: 2, cols })
}

fn as_k_matrix(m: &Mat<Const>) -> Result<Mat<K>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|c| c.as_k().ok_or_else(|| Error::Invalid(format!("entry {c} is transcendental"))))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// ℙ(1,1,1,3)/𝔽₃: continued frame at 𝔶₁ = 0

/// Series Σ_m t^m C_m (prefactor t^{p₂/z} implicit) in 𝔽₃ cohomology.
type TSeries = BTreeMap<i64, LaurentZ<Const>>;

struct F3Frame {
    alg: Arc<GradedAlgebra>,
    p2: Vec<Const>,
}

impl F3Frame {
    /// z·y∂_y with y = t³: t^m C ↦ t^m (mz + p₂)/3 · C.
    fn zd(&self, f: &TSeries) -> Result<TSeries> {
        let mut out = TSeries::new();
        for (m, c) in f {
            let v = c.shift(1).scale(&Const::from_i64(*m)).add(&c.mul_class(&self.p2, &self.alg)?);
            let v = v.scale(&Const::rat(1, 3));
            if !v.is_zero() {
                out.insert(*m, v);
            }
        }
        Ok(out)
    }

    /// 3t⁻¹·f.
    fn three_over_t(f: &TSeries) -> TSeries {
        f.iter().map(|(m, c)| (m - 1, c.scale(&Const::from_i64(3)))).collect()
    }

    /// P₀ … P₅ applied to the continued function.
    fn frame(&self, f: &TSeries) -> Result<Vec<TSeries>> {
        let mut out = vec![f.clone()];
        for _ in 0..3 {
            out.push(self.zd(out.last().expect("nonempty"))?);
        }
        out.push(Self::three_over_t(&self.zd(&out[3])?));
        out.push(Self::three_over_t(&self.zd(&out[4])?));
        Ok(out)
    }

    /// Σ t^m C_m times exp(p₂ log t / z), numerically.
    fn eval(&self, f: &TSeries, t: &Cx) -> Result<LaurentZ<Cx>> {
        let n = self.alg.dim();
        let mut s = LaurentZ::<Cx>::zero(n);
        for (m, c) in f {
            let tm = t.powi(*m);
            s = s.add(&c.map_into(|x| Cx::from_const(x).mul(&tm)));
        }
        let lt = t.ln();
        let x = LaurentZ::mono(-1, self.p2.iter().map(|c| Cx::from_const(c).mul(&lt)).collect());
        let mut term = LaurentZ::constant(self.alg.unit::<Cx>());
        let mut e = term.clone();
        for k in 1..=self.alg.cdim() as i64 + 1 {
            term = term.mul(&x, &self.alg)?.scale(&Cx::from_q(&q(1, k)));
            e = e.add(&term);
        }
        s.mul(&e, &self.alg)
    }
}

fn z_slice(cols: &[LaurentZ<Cx>], k: i32) -> Mat<Cx> {
    let n = cols[0].coeff(k).len();
    (0..n).map(|r| cols.iter().map(|c| c.coeff(k)[r].clone()).collect()).collect()
}

fn max_entry(m: &Mat<Cx>) -> f64 {
    m.iter().flatten().map(|x| x.abs_f64()).fold(0.0, f64::max)
}

/// Outcome of the frame computation at one value of q.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaCheck {
    pub q: f64,
    /// max |Θ A_ℙ Θ⁻¹ − A_𝔽₃|.
    pub residual: f64,
    /// max |[VG]₀ − Θ(q)|.
    pub theta_match: f64,
    /// Largest entry of the positive-z part of VG.
    pub positive_z: f64,
    /// max |Θᵀ G_𝔽₃ Θ − G_ℙ|.
    pub pairing: f64,
    pub terms_used: usize,
}

impl ThetaCheck {
    pub fn max(&self) -> f64 {
        [self.residual, self.theta_match, self.positive_z, self.pairing].into_iter().fold(0.0, f64::max)
    }
}

/// Builds the 𝔽₃ connection matrix in the gauged frame P_i(z∂)·I at
/// 𝔶₁ = 0, 𝔶₂ = q^{1/3}, and compares with Θ(q)·A_ℙ·Θ(q)⁻¹.
pub fn verify_theta_conjugation_p1113(qv: f64, digits: u32) -> Result<ThetaCheck> {
    if qv <= 0.0 {
        return Err(Error::Invalid("q must be positive".into()));
    }
    let alg = ModelId::F3.algebra();
    let fr = F3Frame { p2: alg.lift(alg.generator("p2").expect("p2")), alg: alg.clone() };
    // keep every t^m whose z-window can reach z ≥ −1 after six z-raising steps
    let mut f = TSeries::new();
    let mut m = 0;
    loop {
        let c = continued_coefficient::<Const>(3, 0, m)?;
        let top = c.max_pow().unwrap_or(i32::MIN);
        if top + 7 < -1 && m > 2 {
            break;
        }
        f.insert(m, c);
        m += 1;
        if m > 40 {
            return Err(Error::Invalid("continued series does not thin out in z".into()));
        }
    }
    let terms_used = f.len();
    let frame = fr.frame(&f)?;
    let dframe: Vec<TSeries> = frame.iter().map(|p| fr.zd(p)).collect::<Result<_>>()?;
    let theta = theta_p1113()?;
    let (b1, b2) = betas();
    let gauge = b1.mul(&b2.inv().expect("monomial"));
    with_digits(digits, || {
        let t = Cx::from_f64(qv.cbrt(), 0.0);
        let g = Cx::from_const(&gauge);
        let gauged = |cols: &[TSeries]| -> Result<Vec<LaurentZ<Cx>>> {
            let mut v: Vec<LaurentZ<Cx>> = cols.iter().map(|c| fr.eval(c, &t)).collect::<Result<_>>()?;
            v[4] = v[4].add(&v[5].shift(1).scale(&g));
            Ok(v)
        };
        let s = gauged(&frame)?;
        let ds = gauged(&dframe)?;
        let top = s.iter().filter_map(|c| c.max_pow()).max().unwrap_or(0);
        let positive_z = (1..=top).map(|k| max_entry(&z_slice(&s, k))).fold(0.0, f64::max);
        let th = theta.matrix_at(&t);
        let s0 = z_slice(&s, 0);
        let theta_match = max_entry(&linalg::mat_sub(&s0, &th));
        let th_inv = linalg::inverse(&th)?;
        let a_f = linalg::mat_mul(
            &linalg::mat_sub(
                &z_slice(&ds, 0),
                &linalg::mat_mul(&linalg::mat_mul(&z_slice(&s, -1), &th_inv), &z_slice(&ds, 1)),
            ),
            &th_inv,
        );
        let a_p = lg::connection_matrix_p1113(&t);
        let conj = linalg::mat_mul(&linalg::mat_mul(&th, &a_p), &th_inv);
        let residual = max_entry(&linalg::mat_sub(&conj, &a_f));
        let gf: Mat<Cx> = linalg::mat_map(theta.target.pairing_matrix(), Cx::from_q);
        let gp: Mat<Cx> = linalg::mat_map(theta.source.pairing_matrix(), Cx::from_q);
        let pulled = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&th), &gf), &th);
        let pairing = max_entry(&linalg::mat_sub(&pulled, &gp));
        Ok(ThetaCheck { q: qv, residual, theta_match, positive_z, pairing, terms_used })
    })
}

// ---------------------------------------------------------------------------
// Rational functions in one variable

type Poly = Vec<Q>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(num_traits::Zero::is_zero) {
        p.pop();
    }
    p
}

fn padd(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_else(|| qi(0)) + b.get(i).cloned().unwrap_or_else(|| qi(0))).collect())
}

fn pneg(a: &Poly) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![qi(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// (quotient, remainder); b nonzero.
fn pdivrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    let lead = b.last().expect("nonzero divisor").clone();
    let mut quo = vec![qi(0); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().expect("nonempty") / &lead;
        for (i, y) in b.iter().enumerate() {
            r[k + i] -= &c * y;
        }
        quo[k] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

fn pgcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = pdivrem(&x, &y).1;
        x = y;
        y = r;
    }
    x
}

/// Rational function of one variable v over ℚ, in lowest terms with a monic
/// denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let (num, den) = (trim(num), trim(den));
        if den.is_empty() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let g = pgcd(&num, &den);
        let g = if g.is_empty() { vec![qi(1)] } else { g };
        let (mut n, mut d) = (pdivrem(&num, &g).0, pdivrem(&den, &g).0);
        let lead = d.last().expect("nonzero").clone();
        n.iter_mut().for_each(|c| *c /= &lead);
        d.iter_mut().for_each(|c| *c /= &lead);
        Ok(RatFn { num: n, den: d })
    }

    pub fn poly(c: &[i64]) -> Self {
        RatFn::new(c.iter().map(|&x| qi(x)).collect(), vec![qi(1)]).expect("unit denominator")
    }

    pub fn constant(c: Q) -> Self {
        RatFn::new(vec![c], vec![qi(1)]).expect("unit denominator")
    }

    pub fn var() -> Self {
        Self::poly(&[0, 1])
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFn::new(padd(&pmul(&self.num, &o.den), &pmul(&o.num, &self.den)), pmul(&self.den, &o.den))
            .expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        RatFn { num: pneg(&self.num), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn::new(pmul(&self.num, &o.num), pmul(&self.den, &o.den)).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        RatFn::new(pmul(&self.num, &o.den), pmul(&self.den, &o.num))
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.mul(&RatFn::constant(c.clone()))
    }

    fn deriv(p: &Poly) -> Poly {
        trim(p.iter().enumerate().skip(1).map(|(i, c)| c * qi(i as i64)).collect())
    }

    /// v·d/dv.
    pub fn euler(&self) -> Self {
        let (n, d) = (&self.num, &self.den);
        let top = padd(&pmul(&Self::deriv(n), d), &pneg(&pmul(n, &Self::deriv(d))));
        RatFn::new(pmul(&vec![qi(0), qi(1)], &top), pmul(d, d)).expect("nonzero denominator")
    }

    pub fn as_constant(&self) -> Option<Q> {
        match (self.num.len(), self.den.len()) {
            (0, _) => Some(qi(0)),
            (1, 1) => Some(&self.num[0] / &self.den[0]),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn eval<R: Scalar>(&self, x: &R) -> Result<R> {
        let ev = |p: &Poly| p.iter().rev().fold(R::zero(), |acc, c| acc.mul(x).add(&R::from_q(c)));
        ev(&self.num).div(&ev(&self.den)).map_err(|_| Error::Discriminant)
    }
}

impl std::fmt::Display for RatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |p: &Poly| {
            let s: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(i, c)| match i {
                    0 => format!("{c}"),
                    1 => format!("{c}·v"),
                    _ => format!("{c}·v^{i}"),
                })
                .collect();
            if s.is_empty() {
                "0".to_string()
            } else {
                s.join(" + ")
            }
        };
        if self.den.len() == 1 {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "({})/({})", show(&self.num), show(&self.den))
        }
    }
}

// ---------------------------------------------------------------------------
// 𝔽₂ flat frame and the point q₁ = −1

/// Closed-form quantities in v = √q₁.
struct F2Closed {
    v: RatFn,
    /// y₁ = q₁/(1+q₁)²
    y1: RatFn,
    /// r = √(1 − 4y₁) = (1−q₁)/(1+q₁)
    r: RatFn,
    /// y₂/q₂ = 1 + q₁
    y2_over_q2: RatFn,
    /// 𝔶₁ = y₁^{−1/2}
    yy1: RatFn,
}

impl F2Closed {
    fn new() -> Self {
        let v = RatFn::var();
        let q1 = v.mul(&v);
        let one_p = RatFn::poly(&[1]).add(&q1);
        let y1 = q1.div(&one_p.mul(&one_p)).expect("nonzero");
        let r = RatFn::poly(&[1]).sub(&q1).div(&one_p).expect("nonzero");
        let yy1 = one_p.div(&v).expect("nonzero");
        F2Closed { v, y1, r, y2_over_q2: one_p, yy1 }
    }

    /// q₁∂_{q₁} = ½ v d/dv.
    fn q1d(f: &RatFn) -> RatFn {
        f.euler().scale(&q(1, 2))
    }

    /// q₁∂_{q₁} log f.
    fn q1dlog(f: &RatFn) -> RatFn {
        Self::q1d(f).div(f).expect("nonzero")
    }

    /// The coefficient of 1/Hess at the two values of s = w₄²/y₂ and the
    /// KS images: a·w₁ + b·y₂/w₄ = (w₄/s)(a(s−1)/2 + b) on the critical set.
    fn ks_gram(&self) -> Result<[[RatFn; 2]; 2]> {
        let v = &self.v;
        let den = RatFn::poly(&[1, 0, 1]);
        let s: Vec<RatFn> = [1i64, -1]
            .iter()
            .map(|e| {
                let lin = RatFn::poly(&[1, *e]);
                lin.mul(&lin).div(&den).expect("nonzero")
            })
            .collect();
        debug_assert!(s[0].sub(&RatFn::poly(&[1])).sub(&v.scale(&qi(2)).div(&den).expect("nonzero")).is_zero());
        let half = q(1, 2);
        // φ₁ ↦ w₁ + ½(1−r)·y₂/w₄, φ₂ ↦ 2w₁ + y₂/w₄
        let coeffs = [(qi(1), RatFn::poly(&[1]).sub(&self.r).scale(&half)), (qi(2), RatFn::poly(&[1]))];
        let c = |k: usize, s: &RatFn| s.sub(&RatFn::poly(&[1])).scale(&(&coeffs[k].0 * &half)).add(&coeffs[k].1);
        let entry = |a: usize, b: usize| -> Result<RatFn> {
            let mut acc = RatFn::poly(&[]);
            for si in &s {
                let d = si.mul(&si.sub(&RatFn::poly(&[1])));
                acc = acc.add(&c(a, si).mul(&c(b, si)).div(&d)?);
            }
            Ok(acc)
        };
        Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
    }
}

/// Result of following the 𝔽₂ flat frame.
#[derive(Clone, Debug, Serialize)]
pub struct AppendixB {
    pub gram_symbolic: Vec<Vec<String>>,
    pub gram_exact: bool,
    /// (y₁, y₂, max deviation) at each sample.
    pub gram_samples: Vec<(String, String, f64)>,
    pub gram_numeric: f64,
    pub commutator_zero: bool,
    pub identities: Vec<(String, bool)>,
    /// Components of φ₁, φ₂ on (∂_{𝔶₁}, 𝔶₂∂_{𝔶₂}) at q₁ = −1.
    pub limit_frame: Vec<Vec<String>>,
    pub limit_ok: bool,
    /// Images of p₁, p₂ in ℙ(1,1,2) cohomology.
    pub basis_map: Vec<String>,
    pub basis_map_ok: bool,
}

impl AppendixB {
    pub fn ok(&self, tol: f64) -> bool {
        self.gram_exact
            && self.gram_numeric <= tol
            && self.commutator_zero
            && self.identities.iter().all(|(_, b)| *b)
            && self.limit_ok
            && self.basis_map_ok
    }
}

pub const GRAM_SAMPLES: [(f64, f64, f64, f64); 5] = [
    (0.01, 0.0, 0.02, 0.0),
    (0.03, 0.0, -0.5, 0.1),
    (0.05, 0.02, 1.3, 0.0),
    (-0.07, 0.0, 0.4, -0.2),
    (0.12, -0.05, 2.0, 1.0),
];

fn ks_gram_numeric(y1: &Cx, y2: &Cx) -> Result<f64> {
    let lgm = LgModel::new(ModelId::F2, Chart::Large, vec![y1.clone(), y2.clone()])?;
    let pts = lgm.critical_points()?;
    let r = Cx::one().sub(&y1.scale_q(&qi(4))).sqrt();
    let half = Cx::from_q(&q(1, 2));
    let d = |j: usize| pts.iter().map(|s| lgm.base_log_derivative(&s.w, j)).collect::<Vec<_>>();
    let (d1, d2) = (d(0), d(1));
    let ks1: Vec<Cx> =
        d1.iter().zip(&d2).map(|(a, b)| r.mul(a).add(&Cx::one().sub(&r).mul(&half).mul(b))).collect();
    let g = lg::gram(&[ks1, d2], &pts)?;
    let want = [[0, 1], [1, 2]];
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            dev = dev.max(g[i][j].sub(&Cx::from_i64(want[i][j])).abs_f64());
        }
    }
    Ok(dev)
}

/// Symbolic and numeric checks of the 𝔽₂ flat frame φ₁ = r∂₁ + ½(1−r)∂₂,
/// φ₂ = ∂₂ (∂_i = y_i∂_{y_i}) and its limit at q₁ = −1.
pub fn appendix_b_pipeline(digits: u32) -> Result<AppendixB> {
    let cf = F2Closed::new();
    let one = RatFn::poly(&[1]);
    let half = q(1, 2);

    let gram = cf.ks_gram()?;
    let want = [[0, 1], [1, 2]];
    let gram_exact = (0..2).all(|i| (0..2).all(|j| gram[i][j].as_constant() == Some(qi(want[i][j]))));
    let gram_symbolic = gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();

    let gram_samples: Vec<(String, String, f64)> = with_digits(digits, || {
        GRAM_SAMPLES
            .iter()
            .map(|&(a, b, c, d)| {
                let dev = ks_gram_numeric(&Cx::from_f64(a, b), &Cx::from_f64(c, d))?;
                Ok((format!("{a}{b:+}i"), format!("{c}{d:+}i"), dev))
            })
            .collect::<Result<_>>()
    })?;
    let gram_numeric = gram_samples.iter().map(|s| s.2).fold(0.0, f64::max);

    // vector fields on (log y₁, log y₂) with coefficients in v; only ∂₁ sees v
    let dlogy1 = cf.y1.euler().div(&cf.y1)?;
    let d1 = |f: &RatFn| f.euler().div(&dlogy1).expect("nonzero");
    let phi1 = [cf.r.clone(), one.sub(&cf.r).scale(&half)];
    let phi2 = [RatFn::poly(&[]), one.clone()];
    let apply = |x: &[RatFn; 2], f: &RatFn| x[0].mul(&d1(f));
    let commutator_zero = (0..2).all(|j| apply(&phi1, &phi2[j]).sub(&apply(&phi2, &phi1[j])).is_zero());

    let q1 = cf.v.mul(&cf.v);
    let one_p = one.add(&q1);
    let mut identities = Vec::new();
    let mut ident = |name: &str, a: RatFn, b: RatFn| identities.push((name.to_string(), a.sub(&b).is_zero()));
    ident("1 - 4q1/(1+q1)^2 = ((1-q1)/(1+q1))^2", one.sub(&cf.y1.scale(&qi(4))), cf.r.mul(&cf.r));
    ident("q1 d/dq1 log y1 = r", F2Closed::q1dlog(&cf.y1), cf.r.clone());
    ident("q1 d/dq1 log y2 = (1-r)/2", F2Closed::q1dlog(&cf.y2_over_q2), one.sub(&cf.r).scale(&half));
    ident("q1 d/dq1 log y2 = q1/(1+q1)", F2Closed::q1dlog(&cf.y2_over_q2), q1.div(&one_p)?);
    ident("yy1^2 y1 = 1", cf.yy1.mul(&cf.yy1).mul(&cf.y1), one.clone());
    ident("(yy2/q2)^2 = y1 (y2/q2)^2", q1.clone(), cf.y1.mul(&cf.y2_over_q2).mul(&cf.y2_over_q2));

    // φ₁ = q₁∂_{q₁}𝔶₁·∂_{𝔶₁} + q₁∂_{q₁}log 𝔶₂·𝔶₂∂_{𝔶₂}; 𝔶₂ = v·q₂, φ₂ = 𝔶₂∂_{𝔶₂}
    let at = K::i().neg();
    let comp = [
        [F2Closed::q1d(&cf.yy1), F2Closed::q1dlog(&cf.v)],
        [RatFn::poly(&[]), one.clone()],
    ];
    let limit: Vec<Vec<K>> =
        comp.iter().map(|row| row.iter().map(|f| f.eval(&at)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let q1_at = q1.eval(&at)?;
    let yy1_at = cf.yy1.eval(&at)?;
    let limit_ok = q1_at == K::rational(qi(-1))
        && yy1_at.is_zero()
        && limit[0] == [K::i().neg(), K::rational(half.clone())]
        && limit[1] == [K::zero(), K::one()];
    let limit_frame = limit.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();

    // at 𝔶₁ = 0: ∂_{𝔶₁}W ↔ 𝟏_{1/2}, 𝔶₂∂_{𝔶₂}W ↔ 2p
    let src = ModelId::P112.algebra();
    let tw = src.label_index("1_1/2").expect("twisted sector");
    let dict = [src.basis::<K>(tw), src.basis::<K>(1).iter().map(|x| x.scale_q(&qi(2))).collect::<Vec<_>>()];
    let images: Vec<Vec<K>> = limit
        .iter()
        .map(|row| (0..src.dim()).map(|k| row[0].mul(&dict[0][k]).add(&row[1].mul(&dict[1][k]))).collect())
        .collect();
    let theta = theta_p112()?;
    let th = as_k_matrix(&theta.constant_matrix().expect("q-independent"))?;
    let th_inv = linalg::inverse(&th)?;
    let tgt = &theta.target;
    let basis_map_ok = ["p1", "p2"].iter().zip(&images).all(|(g, img)| {
        let v: Vec<K> = tgt.lift(tgt.generator(g).expect("generator"));
        linalg::mat_vec(&th_inv, &v) == *img
    });
    let basis_map = images.iter().map(|v| src.format_elem(v)).collect();

    Ok(AppendixB {
        gram_symbolic,
        gram_exact,
        gram_samples,
        gram_numeric,
        commutator_zero,
        identities,
        limit_frame,
        limit_ok,
        basis_map,
        basis_map_ok,
    })
}

/// Multiplication by f in the basis e_j, from values on the critical set:
/// E⁻¹ diag(f) E with E[σ][j] = e_j(σ).
fn mult_matrix(frame: &[Vec<Cx>], f: &[Cx]) -> Result<Mat<Cx>> {
    let e: Mat<Cx> = linalg::transpose(&frame.to_vec());
    let fe: Mat<Cx> = e.iter().zip(f).map(|(row, x)| row.iter().map(|y| y.mul(x)).collect()).collect();
    Ok(linalg::mat_mul(&linalg::inverse(&e)?, &fe))
}

fn pointwise(a: &[Cx], b: &[Cx]) -> Vec<Cx> {
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
}

fn combine(terms: &[(Cx, &[Cx])]) -> Vec<Cx> {
    (0..terms[0].1.len())
        .map(|k| terms.iter().fold(Cx::zero(), |acc, (c, v)| acc.add(&c.mul(&v[k]))))
        .collect()
}

/// Outcome of the comparison at q₁ = −1.
#[derive(Clone, Debug, Serialize)]
pub struct Specialization {
    pub q: f64,
    /// max |Θ A_ℙ(a) Θ⁻¹ − A_𝔽₂(Θa)| over a ∈ {p, 𝟏_{1/2}}.
    pub residual: f64,
    /// Gram of (1, P₁, P₂, Φ) against the 𝔽₂ Poincaré pairing.
    pub gram_f2: f64,
    /// Gram of the ℙ(1,1,2) frame against its Poincaré pairing.
    pub gram_p112: f64,
    pub q1: String,
    /// q₂ = 𝔶₂/√q₁ with √q₁ = −i, as (re, im).
    pub q2: (f64, f64),
    pub shift: String,
}

impl Specialization {
    pub fn max(&self) -> f64 {
        [self.residual, self.gram_f2, self.gram_p112].into_iter().fold(0.0, f64::max)
    }
}

fn gram_dev(frame: &[Vec<Cx>], pts: &[CriticalPoint], alg: &GradedAlgebra) -> Result<f64> {
    let g = lg::gram(frame, pts)?;
    let p = alg.pairing_matrix();
    let mut dev: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            dev = dev.max(x.sub(&Cx::from_q(&p[i][j])).abs_f64());
        }
    }
    Ok(dev)
}

/// At (𝔶₁, 𝔶₂) = (0, √q) the 𝔽₂ orbifold-chart superpotential is the
/// ℙ(1,1,2) one at y = q. The 𝔽₂ products are taken in the limit flat frame
/// P₁ = −i∂_{𝔶₁}W + ½𝔶₂∂_{𝔶₂}W, P₂ = 𝔶₂∂_{𝔶₂}W, completed by the unique Φ
/// with ⟨Φ,1⟩ = 1, ⟨Φ,P_i⟩ = 0, ⟨Φ,Φ⟩ = 0, and compared with the ℙ(1,1,2)
/// products transported by Θ.
pub fn verify_specialization_p112(qv: f64, digits: u32) -> Result<Specialization> {
    if qv == 0.0 {
        return Err(Error::Discriminant);
    }
    let theta = theta_p112()?;
    with_digits(digits, || {
        let yq = Cx::from_f64(qv, 0.0);
        let sq = yq.sqrt();
        let f2 = LgModel::new(ModelId::F2, Chart::Orbifold, vec![Cx::zero(), sq.clone()])?;
        let pts = f2.critical_points()?;
        let d1: Vec<Cx> = pts.iter().map(|s| f2.base_partial(&s.w, 0)).collect();
        let e2: Vec<Cx> = pts.iter().map(|s| f2.base_log_derivative(&s.w, 1)).collect();
        let mi = Cx::i().neg();
        let half = Cx::from_q(&q(1, 2));
        let p1 = combine(&[(mi.clone(), &d1), (half.clone(), &e2)]);
        let p2 = e2;
        let ones = vec![Cx::one(); pts.len()];
        let pair = |a: &[Cx], b: &[Cx]| lg::residue_pairing(a, b, &pts);
        let prod = pointwise(&p1, &p2);
        let g = lg::gram(&[p1.clone(), p2.clone()], &pts)?;
        let rhs = vec![pair(&prod, &p1)?.neg(), pair(&prod, &p2)?.neg()];
        let bc = linalg::solve(&g, &rhs)?;
        let x = combine(&[(Cx::one(), &prod), (bc[0].clone(), &p1), (bc[1].clone(), &p2)]);
        let a = pair(&x, &x)?.neg().div(&pair(&ones, &x)?.scale_q(&qi(2)))?;
        let phi = combine(&[(Cx::one(), &x), (a, &ones)]);
        let ff = vec![ones, p1, p2, phi];
        let gram_f2 = gram_dev(&ff, &pts, &ModelId::F2.algebra())?;

        let pm = LgModel::new(ModelId::P112, Chart::Large, vec![yq])?;
        let ppts = pm.critical_points()?;
        let fp = lg::mirror_frame(&pm, &ppts, &linalg::identity(1));
        let gram_p112 = gram_dev(&fp, &ppts, &ModelId::P112.algebra())?;

        let th = theta.matrix_at(&Cx::one());
        let th_inv = linalg::inverse(&th)?;
        let tw = theta.source.label_index("1_1/2").expect("twisted sector");
        let mut residual: f64 = 0.0;
        for src in [1, tw] {
            let ap = mult_matrix(&fp, &fp[src])?;
            let conj = linalg::mat_mul(&linalg::mat_mul(&th, &ap), &th_inv);
            let terms: Vec<(Cx, &[Cx])> = (0..ff.len()).map(|j| (th[j][src].clone(), ff[j].as_slice())).collect();
            let af = mult_matrix(&ff, &combine(&terms))?;
            residual = residual.max(max_entry(&linalg::mat_sub(&conj, &af)));
        }

        // √q₁ = −i: q₁ = −1, q₂ = 𝔶₂/√q₁
        let q2 = sq.div(&mi)?.to_f64();
        Ok(Specialization {
            q: qv,
            residual,
            gram_f2,
            gram_p112,
            q1: "-1".into(),
            q2,
            shift: "f(τ) = Θ(τ) + (πi/2)(p2 − 2p1)".into(),
        })
    })
}

/// Θ for the pair.
pub fn theta(pair: Pair) -> Result<ThetaMap> {
    match pair {
        Pair::P1113F3 => theta_p1113(),
        Pair::P112F2 => theta_p112(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratfn_normalizes() {
        let v = RatFn::var();
        let a = v.mul(&v).sub(&RatFn::poly(&[1])).div(&v.sub(&RatFn::poly(&[1]))).unwrap();
        assert_eq!(a, RatFn::poly(&[1, 1]));
        assert_eq!(a.eval(&qi(2)).unwrap(), qi(3));
        assert_eq!(v.mul(&v).euler(), v.mul(&v).scale(&qi(2)));
    }

    #[test]
    fn theta_p112_is_unitary_on_pairings() {
        let t = theta_p112().unwrap();
        assert!(t.preserves_unit());
        assert!(t.pairing_defects().is_empty());
        assert!(t.grading_defects().is_empty());
    }
}
