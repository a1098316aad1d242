//! Graded cohomology algebras of the four spaces and functional calculus on
//! nilpotent elements.
//!
//! Elements are coordinate vectors in a fixed basis φ₀ = 𝟏, φ₁, …; products
//! are read off a table of structure constants. For the orbifolds the product
//! of two twisted-sector classes is left undefined (only the pairing between
//! them is used), and multiplying one by it is an error.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::{ps, q, q_to_string, qi, Scalar, SpecialField, K, Q};
use crate::series::LaurentZ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    F2,
    F3,
    P112,
    P1113,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [ModelId::F2, ModelId::F3, ModelId::P112, ModelId::P1113];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::F2 => "F2",
            ModelId::F3 => "F3",
            ModelId::P112 => "P112",
            ModelId::P1113 => "P1113",
        }
    }

    pub fn is_orbifold(self) -> bool {
        matches!(self, ModelId::P112 | ModelId::P1113)
    }

    /// The other member of the crepant-resolution pair.
    pub fn partner(self) -> ModelId {
        match self {
            ModelId::F2 => ModelId::P112,
            ModelId::P112 => ModelId::F2,
            ModelId::F3 => ModelId::P1113,
            ModelId::P1113 => ModelId::F3,
        }
    }

    /// Charge matrix of the toric GIT quotient, one row per ℂ* factor.
    pub fn charges(self) -> Vec<Vec<i64>> {
        match self {
            ModelId::F2 => vec![vec![1, 1, -2, 0], vec![0, 0, 1, 1]],
            ModelId::F3 => vec![vec![1, 1, 1, -3, 0], vec![0, 0, 0, 1, 1]],
            ModelId::P112 => vec![vec![1, 1, 2]],
            ModelId::P1113 => vec![vec![1, 1, 1, 3]],
        }
    }

    pub fn algebra(self) -> Arc<GradedAlgebra> {
        static CACHE: OnceLock<[Arc<GradedAlgebra>; 4]> = OnceLock::new();
        let all = CACHE.get_or_init(|| {
            [
                Arc::new(build_hirzebruch(2)),
                Arc::new(build_hirzebruch(3)),
                Arc::new(build_weighted(2)),
                Arc::new(build_weighted(3)),
            ]
        });
        all[self as usize].clone()
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F2" => Ok(ModelId::F2),
            "F3" => Ok(ModelId::F3),
            "P112" => Ok(ModelId::P112),
            "P1113" => Ok(ModelId::P1113),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }
}

/// Sparse structure-constant row: (basis index, coefficient).
type Sparse = Vec<(usize, Q)>;

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub name: String,
    labels: Vec<String>,
    /// Real degrees.
    degrees: Vec<Q>,
    /// table[i][j] = φ_i·φ_j, `None` when undefined.
    table: Vec<Vec<Option<Sparse>>>,
    pairing: Mat<Q>,
    duals: Mat<Q>,
    generators: Vec<(String, Vec<Q>)>,
    c1: Vec<Q>,
    /// Complex dimension.
    cdim: u32,
    /// Fractional sector → index of its identity class.
    sectors: BTreeMap<Q, usize>,
}

impl GradedAlgebra {
    /// Assembles an algebra and derives the dual basis from the pairing.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        labels: Vec<String>,
        degrees: Vec<Q>,
        table: Vec<Vec<Option<Sparse>>>,
        pairing: Mat<Q>,
        generators: Vec<(String, Vec<Q>)>,
        c1: Vec<Q>,
        cdim: u32,
        sectors: BTreeMap<Q, usize>,
    ) -> Result<Self> {
        let ginv = linalg::inverse(&pairing)?;
        // φ^j = Σ_k (G⁻¹)_{kj} φ_k
        let n = labels.len();
        let duals = (0..n).map(|j| (0..n).map(|k| ginv[k][j].clone()).collect()).collect();
        Ok(GradedAlgebra {
            name: name.to_string(),
            labels,
            degrees,
            table,
            pairing,
            duals,
            generators,
            c1,
            cdim,
            sectors,
        })
    }

    /// ℚ[p]/p^rank with ∫p^{rank−1} = 1, the generator named "p1". Used to
    /// probe checks that rely on a nilpotency order.
    pub fn truncated_polynomial(rank: usize) -> Self {
        let labels = (0..rank).map(|k| format!("p^{k}")).collect();
        let degrees = (0..rank).map(|k| qi(2 * k as i64)).collect();
        let table = (0..rank)
            .map(|i| (0..rank).map(|j| Some(if i + j < rank { vec![(i + j, qi(1))] } else { vec![] })).collect())
            .collect();
        let mut pairing = vec![vec![qi(0); rank]; rank];
        for i in 0..rank {
            pairing[i][rank - 1 - i] = qi(1);
        }
        let mut p = vec![qi(0); rank];
        p[1] = qi(1);
        let c1 = vec![qi(0); rank];
        let mut sectors = BTreeMap::new();
        sectors.insert(qi(0), 0);
        GradedAlgebra::new("trunc", labels, degrees, table, pairing, vec![("p1".into(), p)], c1, rank as u32, sectors)
            .expect("nondegenerate pairing")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn cdim(&self) -> u32 {
        self.cdim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, s: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == s)
    }

    pub fn degrees(&self) -> &[Q] {
        &self.degrees
    }

    pub fn pairing_matrix(&self) -> &Mat<Q> {
        &self.pairing
    }

    /// Coordinates of the dual basis φ^j.
    pub fn duals(&self) -> &Mat<Q> {
        &self.duals
    }

    pub fn generators(&self) -> &[(String, Vec<Q>)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&[Q]> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn c1(&self) -> &[Q] {
        &self.c1
    }

    pub fn sector_unit(&self, frac: &Q) -> Option<usize> {
        self.sectors.get(frac).copied()
    }

    pub fn basis<R: Scalar>(&self, i: usize) -> Vec<R> {
        (0..self.dim()).map(|j| if i == j { R::one() } else { R::zero() }).collect()
    }

    pub fn unit<R: Scalar>(&self) -> Vec<R> {
        self.basis(0)
    }

    pub fn zero<R: Scalar>(&self) -> Vec<R> {
        vec![R::zero(); self.dim()]
    }

    pub fn lift<R: Scalar>(&self, v: &[Q]) -> Vec<R> {
        v.iter().map(R::from_q).collect()
    }

    pub fn product_defined(&self, i: usize, j: usize) -> bool {
        self.table[i][j].is_some()
    }

    pub fn mul<R: Scalar>(&self, a: &[R], b: &[R]) -> Result<Vec<R>> {
        let n = self.dim();
        let mut out = vec![R::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let row = self.table[i][j]
                    .as_ref()
                    .ok_or_else(|| Error::UndefinedProduct(self.labels[i].clone(), self.labels[j].clone()))?;
                if row.is_empty() {
                    continue;
                }
                let xy = x.mul(y);
                for (k, c) in row {
                    out[*k] = out[*k].add(&xy.scale_q(c));
                }
            }
        }
        Ok(out)
    }

    pub fn pow<R: Scalar>(&self, a: &[R], k: u32) -> Result<Vec<R>> {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn pair<R: Scalar>(&self, a: &[R], b: &[R]) -> R {
        let mut s = R::zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let g = &self.pairing[i][j];
                if y.is_zero() || num_traits::Zero::is_zero(g) {
                    continue;
                }
                s = s.add(&x.mul(y).scale_q(g));
            }
        }
        s
    }

    /// Matrix of a∘ acting on coordinate vectors (column j = a·φ_j).
    pub fn cup_matrix<R: Scalar>(&self, a: &[R]) -> Result<Mat<R>> {
        let n = self.dim();
        let cols: Vec<Vec<R>> = (0..n).map(|j| self.mul(a, &self.basis(j))).collect::<Result<_>>()?;
        Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
    }

    /// Degree of a homogeneous element, `None` for zero or inhomogeneous input.
    pub fn degree_of<R: Scalar>(&self, a: &[R]) -> Option<Q> {
        let mut d: Option<Q> = None;
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match &d {
                None => d = Some(self.degrees[i].clone()),
                Some(e) if *e != self.degrees[i] => return None,
                _ => {}
            }
        }
        d
    }

    /// Every defined triple product associates.
    pub fn check_associative(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.basis::<Q>(i), self.basis::<Q>(j), self.basis::<Q>(k));
                    let l = self.mul(&a, &b).and_then(|ab| self.mul(&ab, &c));
                    let r = self.mul(&b, &c).and_then(|bc| self.mul(&a, &bc));
                    if let (Ok(l), Ok(r)) = (l, r) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// ⟨a·b, c⟩ = ⟨a, b·c⟩ whenever both products are defined.
    pub fn check_frobenius(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.basis::<Q>(i), self.basis::<Q>(j), self.basis::<Q>(k));
                    if let (Ok(ab), Ok(bc)) = (self.mul(&a, &b), self.mul(&b, &c)) {
                        if self.pair(&ab, &c) != self.pair(&a, &bc) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// deg(φ_i φ_j) = deg φ_i + deg φ_j for all nonzero defined products.
    pub fn check_degree_additive(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if let Some(Some(row)) = self.table[i].get(j) {
                    let d = &self.degrees[i] + &self.degrees[j];
                    if row.iter().any(|(k, _)| self.degrees[*k] != d) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Hard Lefschetz for ω: for each i ≥ 0 whether ω^i maps the degree n−i
    /// classes bijectively onto the degree n+i classes (n = complex dimension,
    /// degrees real).
    pub fn hard_lefschetz(&self, omega: &[Q]) -> Result<Vec<(u32, bool)>> {
        let n = qi(self.cdim as i64);
        let mut out = Vec::new();
        for i in 0..=self.cdim {
            let lo = &n - qi(i as i64);
            let hi = &n + qi(i as i64);
            let src: Vec<usize> = (0..self.dim()).filter(|&k| self.degrees[k] == lo).collect();
            let dst: Vec<usize> = (0..self.dim()).filter(|&k| self.degrees[k] == hi).collect();
            if src.len() != dst.len() {
                out.push((i, false));
                continue;
            }
            let wi = self.pow(omega, i)?;
            let mut m: Mat<Q> = Vec::new();
            for &s in &src {
                let img = self.mul(&wi, &self.basis(s))?;
                m.push(dst.iter().map(|&d| img[d].clone()).collect());
            }
            out.push((i, linalg::rank(&m) == src.len()));
        }
        Ok(out)
    }

    /// Σ (deg φ_i − n)² over the basis, degrees real and n the complex dimension.
    pub fn variance(&self) -> Q {
        let n = qi(self.cdim as i64);
        self.degrees.iter().map(|d| (d - &n) * (d - &n)).sum()
    }

    pub fn format_elem<R: Scalar + fmt::Display>(&self, a: &[R]) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| format!("({x})·[{}]", self.labels[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// JSON descriptor: labels, degrees, pairing, generators and products.
    pub fn descriptor(&self) -> serde_json::Value {
        let qs = |v: &[Q]| v.iter().map(q_to_string).collect::<Vec<_>>();
        let mut products = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let v = match &self.table[i][j] {
                    None => serde_json::Value::Null,
                    Some(row) => json!(row
                        .iter()
                        .map(|(k, c)| json!({"class": self.labels[*k], "val": q_to_string(c)}))
                        .collect::<Vec<_>>()),
                };
                products.push(json!({"a": self.labels[i], "b": self.labels[j], "product": v}));
            }
        }
        json!({
            "name": self.name,
            "dimension": self.cdim,
            "labels": self.labels,
            "degrees": qs(&self.degrees),
            "pairing": self.pairing.iter().map(|r| qs(r)).collect::<Vec<_>>(),
            "duals": self.duals.iter().map(|r| qs(r)).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(|(n, v)| json!({"name": n, "class": qs(v)})).collect::<Vec<_>>(),
            "c1": qs(&self.c1),
            "products": products,
        })
    }
}

fn sparse(v: &[Q]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// c₁ = Σ_i (row sum of charge row i)·gen_i.
fn c1_from_charges(charges: &[Vec<i64>], gens: &[(String, Vec<Q>)], n: usize) -> Vec<Q> {
    let mut c = vec![qi(0); n];
    for (row, (_, g)) in charges.iter().zip(gens) {
        let s: i64 = row.iter().sum();
        for (ck, gk) in c.iter_mut().zip(g) {
            *ck += qi(s) * gk;
        }
    }
    c
}

/// 𝔽_n: ℚ[p₁,p₂]/(p₁ⁿ, p₂² − n p₁p₂), ∫p₁^{n−1}p₂ = 1.
fn build_hirzebruch(n: i64) -> GradedAlgebra {
    // monomial basis p1^a p2^b, a < n, b ≤ 1, index a + n·b
    let nm = (2 * n) as usize;
    let idx = |a: i64, b: i64| (a + n * b) as usize;
    let mono_mul = |i: usize, j: usize| -> Vec<Q> {
        let (a1, b1) = (i as i64 % n, i as i64 / n);
        let (a2, b2) = (j as i64 % n, j as i64 / n);
        let mut out = vec![qi(0); nm];
        let (mut a, mut b, mut c) = (a1 + a2, b1 + b2, qi(1));
        if b == 2 {
            b = 1;
            a += 1;
            c = qi(n);
        }
        if a < n {
            out[idx(a, b)] = c;
        }
        out
    };
    let top = idx(n - 1, 1);
    let mono_pair = |i: usize, j: usize| mono_mul(i, j)[top].clone();

    // φ basis in monomial coordinates
    let mut phi: Vec<Vec<Q>> = Vec::new();
    let mut labels = Vec::new();
    let e = |pairs: &[(usize, Q)]| {
        let mut v = vec![qi(0); nm];
        for (k, c) in pairs {
            v[*k] += c;
        }
        v
    };
    if n == 2 {
        for (a, b, l) in [(0, 0, "1"), (1, 0, "p1"), (0, 1, "p2"), (1, 1, "p1p2")] {
            phi.push(e(&[(idx(a, b), qi(1))]));
            labels.push(l.to_string());
        }
    } else {
        let t = q(1, 3);
        phi.push(e(&[(idx(0, 0), qi(1))]));
        phi.push(e(&[(idx(0, 1), t.clone())]));
        phi.push(e(&[(idx(1, 1), t.clone())]));
        phi.push(e(&[(idx(0, 1), t.clone()), (idx(1, 0), qi(-1))]));
        // −p1(p2 − 3p1)/3 = −p1p2/3 + p1²
        phi.push(e(&[(idx(1, 1), -t.clone()), (idx(2, 0), qi(1))]));
        phi.push(e(&[(idx(2, 1), t.clone())]));
        for l in ["1", "p2/3", "p1p2/3", "(p2-3p1)/3", "-p1(p2-3p1)/3", "p1^2p2/3"] {
            labels.push(l.to_string());
        }
    }
    let degree_of_mono = |k: usize| qi(2 * ((k as i64 % n) + (k as i64 / n)));
    let degrees: Vec<Q> = phi
        .iter()
        .map(|v| degree_of_mono(v.iter().position(|c| !num_traits::Zero::is_zero(c)).expect("nonzero")))
        .collect();
    // C: columns φ_j in monomial coordinates
    let cmat: Mat<Q> = (0..nm).map(|i| (0..nm).map(|j| phi[j][i].clone()).collect()).collect();
    let cinv = linalg::inverse(&cmat).expect("φ basis is a basis");
    let mul_phi = |x: &[Q], y: &[Q]| -> Vec<Q> {
        let mut out = vec![qi(0); nm];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                if num_traits::Zero::is_zero(a) || num_traits::Zero::is_zero(b) {
                    continue;
                }
                for (k, c) in mono_mul(i, j).iter().enumerate() {
                    out[k] += a * b * c;
                }
            }
        }
        out
    };
    let table = (0..nm)
        .map(|i| {
            (0..nm)
                .map(|j| Some(sparse(&linalg::mat_vec(&cinv, &mul_phi(&phi[i], &phi[j])))))
                .collect()
        })
        .collect();
    let pairing = (0..nm)
        .map(|i| {
            (0..nm)
                .map(|j| {
                    let mut s = qi(0);
                    for (a, x) in phi[i].iter().enumerate() {
                        for (b, y) in phi[j].iter().enumerate() {
                            s += x * y * mono_pair(a, b);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let to_phi = |m: usize| linalg::mat_vec(&cinv, &e(&[(m, qi(1))]));
    let gens = vec![("p1".to_string(), to_phi(idx(1, 0))), ("p2".to_string(), to_phi(idx(0, 1)))];
    let model = if n == 2 { ModelId::F2 } else { ModelId::F3 };
    let c1 = c1_from_charges(&model.charges(), &gens, nm);
    let mut sectors = BTreeMap::new();
    sectors.insert(qi(0), 0);
    GradedAlgebra::new(model.name(), labels, degrees, table, pairing, gens, c1, n as u32, sectors)
        .expect("nondegenerate pairing")
}

/// ℙ(1,1,2) (w = 2) and ℙ(1,1,1,3) (w = 3): untwisted ℚ[p]/p^{w+1} with
/// ∫p^w = 1/w, plus twisted sectors 𝟏_{k/w} whose degree is twice the age.
fn build_weighted(w: i64) -> GradedAlgebra {
    let nu = (w + 1) as usize; // untwisted classes 1, p, …, p^w
    let nt = (w - 1) as usize; // twisted sectors k/w, k = 1..w−1
    let n = nu + nt;
    let model = if w == 2 { ModelId::P112 } else { ModelId::P1113 };
    let weights: Vec<i64> = model.charges()[0].clone();
    let mut labels: Vec<String> = (0..nu)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "p".to_string(),
            _ => format!("p^{k}"),
        })
        .collect();
    let mut degrees: Vec<Q> = (0..nu).map(|k| qi(2 * k as i64)).collect();
    let mut sectors = BTreeMap::new();
    sectors.insert(qi(0), 0);
    for k in 1..=nt as i64 {
        let f = q(k, w);
        labels.push(format!("1_{k}/{w}"));
        // age = Σ ⟨−f·w_j⟩
        let age: Q = weights.iter().map(|&wj| crate::scalar::q_frac(&(-&f * qi(wj)))).sum();
        degrees.push(age * qi(2));
        sectors.insert(f, nu + k as usize - 1);
    }
    let mut table: Vec<Vec<Option<Sparse>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (ti, tj) = (i >= nu, j >= nu);
            table[i][j] = match (ti, tj) {
                (false, false) => {
                    let k = i + j;
                    Some(if k < nu { vec![(k, qi(1))] } else { vec![] })
                }
                (true, false) => Some(if j == 0 { vec![(i, qi(1))] } else { vec![] }),
                (false, true) => Some(if i == 0 { vec![(j, qi(1))] } else { vec![] }),
                (true, true) => None,
            };
        }
    }
    let mut pairing = vec![vec![qi(0); n]; n];
    for i in 0..nu {
        pairing[i][nu - 1 - i] = q(1, w);
    }
    for a in 0..nt {
        pairing[nu + a][nu + nt - 1 - a] = q(1, w);
    }
    let mut p = vec![qi(0); n];
    p[1] = qi(1);
    let gens = vec![("p".to_string(), p)];
    let c1 = c1_from_charges(&model.charges(), &gens, n);
    GradedAlgebra::new(model.name(), labels, degrees, table, pairing, gens, c1, w as u32, sectors)
        .expect("nondegenerate pairing")
}

/// Scalar functions that can be applied to nilpotent elements through their
/// Taylor expansion at a base point.
#[derive(Clone, Debug, PartialEq)]
pub enum Analytic {
    /// e^x
    Exp,
    /// Σ c_k x^k
    Series(Vec<Q>),
    /// Γ(a + x)^power; for a a nonpositive integer only power < 0 is allowed.
    GammaPow { a: Q, power: i32 },
    /// sin(πx + phase·π/6)
    Sin { phase_sixths: i64 },
    /// sin(πx) / (w·sin(πx/w + jπ/w))
    SinRatio { w: i64, j: i64 },
}

fn sin_series<R: SpecialField>(scale: &Q, phase_sixths: i64, n: usize) -> Vec<R> {
    // sin(π·scale·x + θ) = sinθ cos(π s x) + cosθ sin(π s x)
    let (c, s) = K::cos_sin_pi_sixths(phase_sixths);
    let (c, s) = (R::from_k(&c), R::from_k(&s));
    let pis = R::pi().scale_q(scale);
    let mut out = Vec::with_capacity(n);
    let mut pk = R::one();
    let mut fact = qi(1);
    for k in 0..n {
        if k > 0 {
            pk = pk.mul(&pis);
            fact *= qi(k as i64);
        }
        let sign = if (k / 2) % 2 == 0 { qi(1) } else { qi(-1) };
        let base = if k % 2 == 0 { &s } else { &c };
        out.push(base.mul(&pk).scale_q(&(sign / &fact)));
    }
    out
}

/// First n Taylor coefficients of f at its base point.
pub fn taylor<R: SpecialField>(f: &Analytic, n: usize) -> Result<Vec<R>> {
    Ok(match f {
        Analytic::Exp => {
            let mut out = Vec::with_capacity(n);
            let mut fact = qi(1);
            for k in 0..n {
                if k > 0 {
                    fact *= qi(k as i64);
                }
                out.push(R::from_q(&(qi(1) / &fact)));
            }
            out
        }
        Analytic::Series(c) => (0..n).map(|k| c.get(k).map_or(R::zero(), R::from_q)).collect(),
        Analytic::GammaPow { a, power } => {
            if a.is_integer() && *a <= qi(0) {
                if *power > 0 {
                    return Err(Error::Pole(format!("Γ({})", q_to_string(a))));
                }
                // 1/Γ(x − N) = (−1)^N Γ(1 + N − x) sin(πx)/π
                let nn = -a;
                let g = taylor::<R>(&Analytic::GammaPow { a: qi(1) + &nn, power: 1 }, n)?;
                let g = ps::rescale(&g, &R::from_i64(-1));
                let s = sin_series::<R>(&qi(1), 0, n + 1);
                let ipi = R::pi().inv().ok_or(Error::Singular)?;
                let s: Vec<R> = s.iter().map(|x| x.mul(&ipi)).collect();
                let mut r = ps::mul(&g, &s, n);
                if crate::scalar::q_floor(&nn) % 2 != 0 {
                    r = r.iter().map(|x| x.neg()).collect();
                }
                return Ok(ps::pow_i(&r, power.abs(), n).expect("positive power"));
            }
            // Γ(a+x)^P = Γ(a)^P exp(P Σ_{k≥1} ψ^{(k−1)}(a) x^k / k!)
            let mut lg = vec![R::zero(); n];
            let mut fact = qi(1);
            for (k, slot) in lg.iter_mut().enumerate().skip(1) {
                fact *= qi(k as i64);
                *slot = R::polygamma(k as u32 - 1, a)?.scale_q(&(qi(*power as i64) / &fact));
            }
            let e = ps::exp(&lg, n);
            let g0 = R::gamma_pow(a, *power)?;
            e.iter().map(|x| x.mul(&g0)).collect()
        }
        Analytic::Sin { phase_sixths } => sin_series(&qi(1), *phase_sixths, n),
        Analytic::SinRatio { w, j } => {
            let num = sin_series::<R>(&qi(1), 0, n + 1);
            if (6 * j) % w != 0 {
                return Err(Error::Unsupported(format!("phase {j}π/{w}")));
            }
            let den: Vec<R> = sin_series::<R>(&q(1, *w), 6 * j / w, n + 1)
                .iter()
                .map(|x| x.scale_q(&qi(*w)))
                .collect();
            let (num, den) = if den[0].is_zero() { (num[1..].to_vec(), den[1..].to_vec()) } else { (num[..n].to_vec(), den[..n].to_vec()) };
            let inv = ps::inv(&den, n).ok_or(Error::NonUnitLeading)?;
            ps::mul(&num, &inv, n)
        }
    })
}

/// A nilpotent algebra element with Laurent-in-z coefficients.
#[derive(Clone, Debug)]
pub struct NilpotentJet<R: Scalar> {
    pub x: LaurentZ<R>,
    /// Powers beyond this vanish.
    pub order: usize,
}

impl<R: Scalar> NilpotentJet<R> {
    pub fn new(alg: &GradedAlgebra, x: LaurentZ<R>) -> Result<Self> {
        for v in x.terms.values() {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() && num_traits::Zero::is_zero(&alg.degrees()[i]) {
                    return Err(Error::Invalid("jet argument has a nonzero degree-0 part".into()));
                }
            }
        }
        Ok(NilpotentJet { x, order: alg.cdim() as usize })
    }
}

impl<R: SpecialField> NilpotentJet<R> {
    pub fn apply(&self, f: &Analytic, alg: &GradedAlgebra) -> Result<LaurentZ<R>> {
        let c = taylor::<R>(f, self.order + 1)?;
        jet_from_taylor(&c, &self.x, alg)
    }
}

/// Σ c_k x^k for given Taylor coefficients; x must be nilpotent.
pub fn jet_from_taylor<R: Scalar>(c: &[R], x: &LaurentZ<R>, alg: &GradedAlgebra) -> Result<LaurentZ<R>> {
    let jet = NilpotentJet::new(alg, x.clone())?;
    let mut acc = LaurentZ::zero(alg.dim());
    let mut pw = LaurentZ::constant(alg.unit());
    for (k, ck) in c.iter().enumerate().take(jet.order + 1) {
        if k > 0 {
            pw = pw.mul(&jet.x, alg)?;
            if pw.is_zero() {
                break;
            }
        }
        if !ck.is_zero() {
            acc = acc.add(&pw.scale(ck));
        }
    }
    Ok(acc)
}

/// f(x) for a nilpotent Laurent-in-z algebra element x.
pub fn jet_apply<R: SpecialField>(f: &Analytic, x: &LaurentZ<R>, alg: &GradedAlgebra) -> Result<LaurentZ<R>> {
    NilpotentJet::new(alg, x.clone())?.apply(f, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Const;

    #[test]
    fn ring_sizes_and_degrees() {
        let dims: Vec<usize> = ModelId::ALL.iter().map(|m| m.algebra().dim()).collect();
        assert_eq!(dims, vec![4, 6, 4, 6]);
        let p = ModelId::P1113.algebra();
        assert_eq!(p.degrees()[4], qi(4));
        assert_eq!(p.degrees()[5], qi(2));
    }

    #[test]
    fn sin_ratio_trivial_phase() {
        // sin(3u)/(3 sin u) = 1 − (4/3) sin²u, with u = πx/3
        let c = taylor::<Const>(&Analytic::SinRatio { w: 3, j: 0 }, 3).unwrap();
        assert_eq!(c[0], Const::one());
        assert!(c[1].is_zero());
        let expect = Const::pi().mul(&Const::pi()).scale_q(&q(-4, 27));
        assert_eq!(c[2], expect);
    }
}
