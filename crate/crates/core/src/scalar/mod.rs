//! Scalar fields: exact rationals, the number field ℚ(i, √3), the symbolic
//! constant field built on it, and (in [`crate::mp`]) high-precision complex
//! numbers.
//!
//! All arithmetic goes through the [`Scalar`] trait so that series and matrix
//! code can run unchanged over any of them.

mod kfield;
mod symbolic;

pub use kfield::K;
pub use symbolic::{Atom, Const, Monomial};

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Q = BigRational;

/// Ring operations shared by every coefficient field.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_q(q: &Q) -> Self;
    /// Multiplicative inverse when it exists in the representation.
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from_integer(BigInt::from(n)))
    }

    fn div(&self, o: &Self) -> Result<Self> {
        o.inv()
            .map(|i| self.mul(&i))
            .ok_or_else(|| Error::Invalid(format!("cannot invert {o:?}")))
    }

    fn scale_q(&self, q: &Q) -> Self {
        self.mul(&Self::from_q(q))
    }

    /// Size estimate used for pivot selection; exact fields only need 0 vs nonzero.
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn pow_u(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Fields that can host the transcendental constants appearing in Γ- and
/// sin-expansions at rational base points.
pub trait SpecialField: Scalar {
    fn from_k(k: &K) -> Self;
    fn pi() -> Self;
    /// Γ(a)^power for rational a > 0.
    fn gamma_pow(a: &Q, power: i32) -> Result<Self>;
    /// ψ^{(order)}(a) for rational a > 0.
    fn polygamma(order: u32, a: &Q) -> Result<Self>;
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Shorthand for `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats a rational as `"num/den"` (or `"num"` for integers).
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"num/den"`, `"num"` or a plain decimal integer.
pub fn q_parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Returns `Some(n)` when `x` is an integer fitting in i64.
pub fn q_as_int(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn q_floor(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("floor fits in i64")
}

/// Fractional part in [0, 1).
pub fn q_frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn lcm_u(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

/// Bernoulli numbers B_0..=B_n (B_1 = −1/2), exact and cached.
pub fn bernoulli(n: usize) -> Vec<Q> {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<Vec<Q>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![qi(1)]));
    let mut b = cache.lock().expect("bernoulli cache");
    while b.len() <= n {
        let m = b.len() as u32;
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut s = qi(0);
        for (k, bk) in b.iter().enumerate() {
            s += Q::from_integer(binomial(m + 1, k as u32)) * bk;
        }
        let next = -s / Q::from_integer(BigInt::from(m + 1));
        b.push(next);
    }
    b[..=n].to_vec()
}

/// Truncated power series helpers over any scalar; index = degree.
pub mod ps {
    use super::Scalar;

    pub fn mul<R: Scalar>(a: &[R], b: &[R], n: usize) -> Vec<R> {
        let mut out = vec![R::zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }

    /// exp of a series with zero constant term.
    pub fn exp<R: Scalar>(a: &[R], n: usize) -> Vec<R> {
        let mut out = vec![R::zero(); n];
        if n == 0 {
            return out;
        }
        out[0] = R::one();
        // E' = A' E
        for k in 1..n {
            let mut s = R::zero();
            for j in 1..=k {
                if j < a.len() && !a[j].is_zero() {
                    s = s.add(&a[j].mul(&out[k - j]).mul(&R::from_i64(j as i64)));
                }
            }
            out[k] = s.scale_q(&super::q(1, k as i64));
        }
        out
    }

    /// 1/a, requiring an invertible constant term.
    pub fn inv<R: Scalar>(a: &[R], n: usize) -> Option<Vec<R>> {
        let c0 = a.first()?.inv()?;
        let mut out = vec![R::zero(); n];
        if n == 0 {
            return Some(out);
        }
        out[0] = c0.clone();
        for k in 1..n {
            let mut s = R::zero();
            for j in 1..=k {
                if j < a.len() {
                    s = s.add(&a[j].mul(&out[k - j]));
                }
            }
            out[k] = s.mul(&c0).neg();
        }
        Some(out)
    }

    pub fn pow_i<R: Scalar>(a: &[R], e: i32, n: usize) -> Option<Vec<R>> {
        let base = if e < 0 { inv(a, n)? } else { a[..a.len().min(n)].to_vec() };
        let mut acc = vec![R::zero(); n];
        if n > 0 {
            acc[0] = R::one();
        }
        for _ in 0..e.unsigned_abs() {
            acc = mul(&acc, &base, n);
        }
        Some(acc)
    }

    /// Series in x for f(c·x) given f's coefficients.
    pub fn rescale<R: Scalar>(a: &[R], c: &R) -> Vec<R> {
        let mut p = R::one();
        a.iter()
            .map(|x| {
                let v = x.mul(&p);
                p = p.mul(c);
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli(12);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
        assert!(Scalar::is_zero(&b[11]));
    }

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "-7", "27/16", "-1093/97"] {
            assert_eq!(q_to_string(&q_parse(s).unwrap()), s);
        }
        assert!(q_parse("1/0").is_err());
    }

    #[test]
    fn series_exp_and_inverse() {
        let x = vec![qi(0), qi(1)];
        let e = ps::exp(&x, 6);
        assert_eq!(e[5], q(1, 120));
        let one_plus = vec![qi(1), qi(1)];
        let inv = ps::inv(&one_plus, 5).unwrap();
        assert_eq!(inv, vec![qi(1), qi(-1), qi(1), qi(-1), qi(1)]);
    }
}
