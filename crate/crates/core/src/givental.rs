//! Givental's symplectic space ℋ = H ⊗ ℂ((z⁻¹)) at Q = 1 and the
//! z-linear maps 𝕌: ℋ_X → ℋ_Y between an orbifold and its crepant resolution.
//!
//! A [`SympMap`] stores the images of the source basis vectors as Laurent
//! polynomials in z over the target algebra. Two conventions occur: Ū, which
//! carries I_X to the continued I_Y, and 𝕌(z) = Ū(−z). Every check below
//! states which one it expects; most properties hold for both.

use std::sync::Arc;

use serde::Serialize;

use crate::barnes::continued_coefficient;
use crate::coh::{GradedAlgebra, ModelId};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::models::i_function;
use crate::mp::Cx;
use crate::scalar::{q, qi, Const, Scalar, SpecialField, Q};
use crate::series::LaurentZ;

/// Ω(f, g) = Res_{z=0} ⟨f(−z), g(z)⟩ dz = Σ_{a+b=−1} (−1)^a ⟨f_a, g_b⟩.
pub fn omega<R: Scalar>(f: &LaurentZ<R>, g: &LaurentZ<R>, alg: &GradedAlgebra) -> R {
    let mut acc = R::zero();
    for (a, fa) in &f.terms {
        let gb = g.coeff(-1 - a);
        let v = alg.pair(fa, &gb);
        acc = if a.rem_euclid(2) == 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pair {
    P1113F3,
    P112F2,
}

impl Pair {
    pub fn orbifold(self) -> ModelId {
        match self {
            Pair::P1113F3 => ModelId::P1113,
            Pair::P112F2 => ModelId::P112,
        }
    }

    pub fn resolution(self) -> ModelId {
        match self {
            Pair::P1113F3 => ModelId::F3,
            Pair::P112F2 => ModelId::F2,
        }
    }

    /// w with 𝔶₂ = y^{1/w}; also the multiple of p matched with p₂.
    pub fn w(self) -> i64 {
        match self {
            Pair::P1113F3 => 3,
            Pair::P112F2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pair::P1113F3 => "p1113-f3",
            Pair::P112F2 => "p112-f2",
        }
    }
}

impl std::str::FromStr for Pair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1113-f3" | "p1113_f3" => Ok(Pair::P1113F3),
            "p112-f2" | "p112_f2" => Ok(Pair::P112F2),
            _ => Err(Error::Invalid(format!("unknown pair {s}"))),
        }
    }
}

/// Which side of the z ↦ −z flip a map lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// Ū: Ū(I_X) = I_Y continued.
    Bar,
    /// 𝕌(z) = Ū(−z).
    Full,
}

#[derive(Clone, Debug)]
pub struct SympMap<R: Scalar> {
    pub source: Arc<GradedAlgebra>,
    pub target: Arc<GradedAlgebra>,
    pub convention: Convention,
    /// cols[j] = image of the j-th source basis vector.
    pub cols: Vec<LaurentZ<R>>,
}

impl<R: Scalar> SympMap<R> {
    pub fn identity(alg: Arc<GradedAlgebra>) -> Self {
        let cols = (0..alg.dim()).map(|j| LaurentZ::constant(alg.basis(j))).collect();
        SympMap { source: alg.clone(), target: alg, convention: Convention::Full, cols }
    }

    /// Entry (r, c): coefficient of target φ_r in the image of source φ_c.
    pub fn entry(&self, r: usize, c: usize) -> LaurentZ<R> {
        let mut out = LaurentZ::zero(1);
        for (k, v) in &self.cols[c].terms {
            out.add_at(*k, &[v[r].clone()]);
        }
        out
    }

    /// The same map on the other side of z ↦ −z.
    pub fn flipped(&self) -> Self {
        let convention = match self.convention {
            Convention::Bar => Convention::Full,
            Convention::Full => Convention::Bar,
        };
        SympMap {
            source: self.source.clone(),
            target: self.target.clone(),
            convention,
            cols: self.cols.iter().map(|c| c.flip_z()).collect(),
        }
    }

    /// z-linear extension to ℋ_X.
    pub fn apply(&self, f: &LaurentZ<R>) -> LaurentZ<R> {
        let mut out = LaurentZ::zero(self.target.dim());
        for (k, v) in &f.terms {
            for (j, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&self.cols[j].scale(c).shift(*k));
                }
            }
        }
        out
    }

    pub fn map_into<S: Scalar>(&self, f: impl Fn(&R) -> S) -> SympMap<S> {
        SympMap {
            source: self.source.clone(),
            target: self.target.clone(),
            convention: self.convention,
            cols: self.cols.iter().map(|c| c.map_into(&f)).collect(),
        }
    }

    /// The z⁰ part, dropping negative powers: the map at z = ∞.
    pub fn at_infinity(&self) -> Mat<R> {
        let n = self.target.dim();
        (0..n).map(|r| self.cols.iter().map(|c| c.coeff(0)[r].clone()).collect()).collect()
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.cols.iter().zip(&o.cols).map(|(a, b)| a.sub(b).max_magnitude()).fold(0.0, f64::max)
    }
}

fn rows_to_map(pair: Pair, rows: Vec<Vec<LaurentZ<Const>>>) -> SympMap<Const> {
    let source = pair.orbifold().algebra();
    let target = pair.resolution().algebra();
    let n = target.dim();
    let cols = (0..source.dim())
        .map(|c| {
            let mut col = LaurentZ::zero(n);
            for (r, row) in rows.iter().enumerate() {
                for (k, v) in &row[c].terms {
                    let mut e = vec![Const::zero(); n];
                    e[r] = v[0].clone();
                    col.add_at(*k, &e);
                }
            }
            col
        })
        .collect();
    SympMap { source, target, convention: Convention::Full, cols }
}

fn zc(k: i32, c: Const) -> LaurentZ<Const> {
    LaurentZ::mono(k, vec![c])
}

fn z0() -> LaurentZ<Const> {
    LaurentZ::zero(1)
}

/// Reference matrices of 𝕌 (convention [`Convention::Full`]).
pub fn u_matrix_reference(pair: Pair) -> SympMap<Const> {
    let pi = Const::pi();
    let i = Const::i();
    let one = || zc(0, Const::one());
    match pair {
        Pair::P1113F3 => {
            let g = Const::g();
            let g23 = Const::gamma_two_thirds_cubed();
            let s3pi = Const::sqrt3().mul(&pi);
            let a = s3pi.scale_q(&q(2, 3)).div(&g).unwrap();
            let b = s3pi.scale_q(&q(2, 3)).div(&g23).unwrap();
            let pi2 = pi.mul(&pi);
            let c = pi2.scale_q(&q(2, 3)).div(&g).unwrap();
            let d = pi2.scale_q(&q(-2, 3)).div(&g23).unwrap();
            let s3pi3 = s3pi.mul(&pi2).scale_q(&q(2, 9));
            let e = s3pi3.div(&g).unwrap();
            let f = s3pi3.div(&g23).unwrap();
            let rows = vec![
                vec![one(), z0(), z0(), z0(), z0(), z0()],
                vec![z0(), one(), z0(), z0(), z0(), z0()],
                vec![z0(), z0(), one(), z0(), z0(), z0()],
                vec![z0(), z0(), z0(), z0(), zc(1, a), zc(0, b)],
                vec![zc(-2, pi2.scale_q(&q(-1, 3))), z0(), z0(), z0(), zc(0, c), zc(-1, d)],
                vec![zc(-3, Const::zeta3().scale_q(&qi(8))), z0(), z0(), one(), zc(-1, e), zc(-2, f)],
            ];
            rows_to_map(pair, rows)
        }
        Pair::P112F2 => {
            let pii = pi.mul(&i);
            let rows = vec![
                vec![one(), z0(), z0(), z0()],
                vec![zc(-1, pii.clone()), z0(), z0(), zc(0, i.clone())],
                vec![zc(-1, pii.scale_q(&q(-1, 2))), zc(0, Const::rat(1, 2)), z0(), zc(0, i.scale_q(&q(-1, 2)))],
                vec![zc(-2, pi.mul(&pi).scale_q(&q(1, 4))), z0(), zc(0, Const::rat(1, 2)), zc(-1, pi.scale_q(&q(1, 2)))],
            ];
            rows_to_map(pair, rows)
        }
    }
}

/// The source class matched with p₂: w·p.
fn source_p(pair: Pair) -> Vec<Q> {
    let alg = pair.orbifold().algebra();
    alg.generator("p").expect("p").iter().map(|x| x * qi(pair.w())).collect()
}

fn p2(pair: Pair) -> Vec<Q> {
    pair.resolution().algebra().generator("p2").expect("p2").to_vec()
}

/// The coefficient of y^{m/w} in z⁻¹I_X, as (z-power, scalar, sector index)
/// when it is a single scalar multiple of a twisted unit or of 1.
fn sector_monomial(pair: Pair, m: i64) -> Result<(i32, Q, usize)> {
    let x = pair.orbifold();
    let alg = x.algebra();
    let i = i_function(x, &q(m, pair.w()))?;
    let c = i.coeff(&[m]);
    let k = alg.sector_unit(&q(m, pair.w())).ok_or_else(|| Error::Invalid("sector".into()))?;
    let mut found = None;
    for (z, v) in &c.terms {
        for (j, x) in v.iter().enumerate() {
            if num_traits::Zero::is_zero(x) {
                continue;
            }
            if j != k || found.is_some() {
                return Err(Error::Invalid(format!("y^{m}/{} coefficient is not a monomial", pair.w())));
            }
            found = Some((*z, x.clone(), k));
        }
    }
    found.ok_or_else(|| Error::Invalid("zero coefficient".into()))
}

/// Ū built from the Γ- and sin-jets of the continued I-function: Ū(𝟏_{m/w})
/// is read off the 𝔶₂^m coefficient for m < w, and Ū(p^i) = (p₂/w)^i Ū(𝟏).
pub fn u_bar_derived<R: SpecialField>(pair: Pair) -> Result<SympMap<R>> {
    let source = pair.orbifold().algebra();
    let target = pair.resolution().algebra();
    let w = pair.w();
    let mut cols: Vec<Option<LaurentZ<R>>> = vec![None; source.dim()];
    for m in 0..w {
        let (zp, s, k) = sector_monomial(pair, m)?;
        let c = continued_coefficient::<R>(w, 0, m)?;
        cols[k] = Some(c.shift(-zp).scale(&R::from_q(&(qi(1) / s))));
    }
    let unit = cols[0].clone().expect("unit column");
    let p2w: Vec<R> = p2(pair).iter().map(|x| R::from_q(&(x / qi(w)))).collect();
    let mut cur = unit;
    for i in 1..=w as usize {
        cur = cur.mul_class(&p2w, &target)?;
        cols[i] = Some(cur.clone());
    }
    let cols = cols.into_iter().map(|c| c.expect("all columns filled")).collect();
    Ok(SympMap { source, target, convention: Convention::Bar, cols })
}

/// 𝕌 = Ū(−z) from the derived construction.
pub fn u_matrix_derived<R: SpecialField>(pair: Pair) -> Result<SympMap<R>> {
    Ok(u_bar_derived::<R>(pair)?.flipped())
}

/// A nonzero entry of a residual, (row, column, z-power, value).
pub type Residual<R> = Vec<(usize, usize, i32, R)>;

fn nonzero_residual<R: Scalar>(m: &[Vec<LaurentZ<R>>]) -> Residual<R> {
    let mut out = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            for (k, v) in &e.terms {
                if !v[0].is_zero() {
                    out.push((i, j, *k, v[0].clone()));
                }
            }
        }
    }
    out
}

/// Ω_Y(U z^a e_i, U z^b e_j) − Ω_X(z^a e_i, z^b e_j) for all a, b, packed as
/// the Laurent matrix ⟨U e_i(−z), U e_j(z)⟩_Y − G_X.
pub fn check_symplectic<R: Scalar>(u: &SympMap<R>) -> Residual<R> {
    let n = u.source.dim();
    let y = &u.target;
    let mut res = vec![vec![LaurentZ::zero(1); n]; n];
    for i in 0..n {
        let fi = u.cols[i].flip_z();
        for j in 0..n {
            let mut e = LaurentZ::zero(1);
            for (a, va) in &fi.terms {
                for (b, vb) in &u.cols[j].terms {
                    e.add_at(a + b, &[y.pair(va, vb)]);
                }
            }
            e.add_at(0, &[R::from_q(&u.source.pairing_matrix()[i][j]).neg()]);
            res[i][j] = e;
        }
    }
    nonzero_residual(&res)
}

#[derive(Clone, Debug, Serialize)]
pub struct GradingReport {
    /// (row, column, z-power, deg φ_r + 2k − deg e_c) for offending entries.
    pub inhomogeneous: Vec<(usize, usize, i32, String)>,
    /// Nonzero entries of U∘Gr_X − Gr_Y∘U.
    pub commutator_nonzero: usize,
}

impl GradingReport {
    pub fn ok(&self) -> bool {
        self.inhomogeneous.is_empty() && self.commutator_nonzero == 0
    }
}

/// Gr = 2z∂_z + Gr₀ − (2/z) c₁∪.
fn grading<R: Scalar>(f: &LaurentZ<R>, alg: &GradedAlgebra) -> Result<LaurentZ<R>> {
    let mut g0 = LaurentZ::zero(alg.dim());
    for (k, v) in &f.terms {
        let w: Vec<R> = v.iter().zip(alg.degrees()).map(|(x, d)| x.scale_q(d)).collect();
        g0.add_at(*k, &w);
    }
    let c1: Vec<R> = alg.lift(alg.c1());
    let c = f.mul_class(&c1, alg)?.shift(-1).scale(&R::from_i64(-2));
    Ok(f.z_dz().scale(&R::from_i64(2)).add(&g0).add(&c))
}

pub fn check_grading<R: Scalar>(u: &SympMap<R>) -> Result<GradingReport> {
    let (x, y) = (&u.source, &u.target);
    let mut inhomogeneous = Vec::new();
    for (c, col) in u.cols.iter().enumerate() {
        for (k, v) in &col.terms {
            for (r, e) in v.iter().enumerate() {
                let d = &y.degrees()[r] + qi(2 * *k as i64) - &x.degrees()[c];
                if !e.is_zero() && !num_traits::Zero::is_zero(&d) {
                    inhomogeneous.push((r, c, *k, crate::scalar::q_to_string(&d)));
                }
            }
        }
    }
    let mut commutator_nonzero = 0;
    for j in 0..x.dim() {
        let e = LaurentZ::constant(x.basis::<R>(j));
        let lhs = u.apply(&grading(&e, x)?);
        let rhs = grading(&u.cols[j], y)?;
        let d = lhs.sub(&rhs);
        commutator_nonzero += d.terms.values().flatten().filter(|v| !v.is_zero()).count();
    }
    Ok(GradingReport { inhomogeneous, commutator_nonzero })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum Opposite {
    Preserved,
    NotPreserved,
}

/// Scans for strictly positive powers of z; witnesses are (row, column, power).
pub fn check_opposite<R: Scalar>(u: &SympMap<R>) -> (Opposite, Vec<(usize, usize, i32, R)>) {
    let mut w = Vec::new();
    for (c, col) in u.cols.iter().enumerate() {
        for (k, v) in col.terms.iter().filter(|(k, _)| **k > 0) {
            for (r, e) in v.iter().enumerate() {
                if !e.is_zero() {
                    w.push((r, c, *k, e.clone()));
                }
            }
        }
    }
    (if w.is_empty() { Opposite::Preserved } else { Opposite::NotPreserved }, w)
}

/// U(w·p ∪ e_j) − p₂ ∪ U(e_j).
pub fn check_monodromy_equivariance<R: Scalar>(u: &SympMap<R>, pair: Pair) -> Result<Residual<R>> {
    let sp: Vec<R> = u.source.lift(&source_p(pair));
    let tp: Vec<R> = u.target.lift(&p2(pair));
    let n = u.source.dim();
    let mut out = Vec::new();
    for j in 0..n {
        let e = LaurentZ::constant(u.source.basis::<R>(j));
        let lhs = u.apply(&e.mul_class(&sp, &u.source)?);
        let rhs = u.cols[j].mul_class(&tp, &u.target)?;
        let d = lhs.sub(&rhs);
        for (k, v) in &d.terms {
            for (r, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out.push((r, j, *k, x.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// Ū applied to the y^{m/w} coefficient of z⁻¹I_X, minus the 𝔶₂^m
/// coefficient of the continued z⁻¹I_Y at 𝔶₁ = 0, for m = 0..=order.
pub fn continuation_differences<R: SpecialField>(pair: Pair, u_bar: &SympMap<R>, order: i64) -> Result<Vec<LaurentZ<R>>> {
    if u_bar.convention != Convention::Bar {
        return Err(Error::Invalid("continuation identity needs Ū".into()));
    }
    let w = pair.w();
    let i = i_function(pair.orbifold(), &q(order, w))?;
    let ms: Vec<i64> = (0..=order).collect();
    let diffs = crate::mp::par_map(&ms, |&m| -> Result<LaurentZ<R>> {
        let ix = i.coeff(&[m]).map_into(|x| R::from_q(x));
        let lhs = u_bar.apply(&ix);
        Ok(lhs.sub(&continued_coefficient::<R>(w, 0, m)?))
    });
    diffs.into_iter().collect()
}

/// Largest coefficient of the continuation differences at the given precision,
/// with Ū taken from the derived construction evaluated numerically.
pub fn check_continuation_identity(pair: Pair, order: i64, digits: u32) -> Result<f64> {
    crate::mp::with_digits(digits, || {
        let u = u_bar_derived::<Const>(pair)?.map_into(Cx::from_const);
        let d = continuation_differences::<Cx>(pair, &u, order)?;
        Ok(d.iter().map(|v| v.max_magnitude()).fold(0.0, f64::max))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_examples() {
        let alg = ModelId::P1113.algebra();
        let p = alg.basis::<Q>(1);
        let p2 = alg.basis::<Q>(2);
        let f = LaurentZ::mono(1, p.clone());
        let g = LaurentZ::mono(-2, p2.clone());
        assert_eq!(omega(&f, &g, &alg), q(-1, 3));
        assert_eq!(omega(&LaurentZ::constant(p.clone()), &LaurentZ::mono(-1, p2.clone()), &alg), q(1, 3));
        let h: LaurentZ<Q> = LaurentZ::constant(p.clone()).add(&LaurentZ::mono(2, p2));
        assert_eq!(omega(&h, &h, &alg), qi(0));
    }

    #[test]
    fn identity_passes_everything() {
        for m in ModelId::ALL {
            let u = SympMap::<Q>::identity(m.algebra());
            assert!(check_symplectic(&u).is_empty());
            assert!(check_grading(&u).unwrap().ok());
            assert_eq!(check_opposite(&u).0, Opposite::Preserved);
        }
    }
}
