//! High-precision complex arithmetic on top of `astro-float`.
//!
//! Working precision is thread-local: every operation rounds to the current
//! precision of the calling thread. Parallel code captures the precision
//! before spawning and reinstates it in each task through [`with_bits`].

mod special;

pub use special::{
    euler_gamma, gamma, gamma_and_polygammas, gauss_legendre, polygamma, rgamma, zeta,
};

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::scalar::{Atom, Const, Scalar, SpecialField, K, Q};
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 32;

thread_local! {
    static BITS: Cell<usize> = const { Cell::new(0) };
    static CONSTS: RefCell<Option<Consts>> = const { RefCell::new(None) };
}

/// Bits needed for `digits` decimal digits plus guard bits.
pub fn digits_to_bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

/// Current working precision in bits (default: 50 digits).
pub fn bits() -> usize {
    BITS.with(|b| {
        if b.get() == 0 {
            b.set(digits_to_bits(50));
        }
        b.get()
    })
}

pub fn set_bits(p: usize) {
    BITS.with(|b| b.set(p));
}

pub fn set_digits(d: u32) {
    set_bits(digits_to_bits(d));
}

/// Runs `f` at precision `p`, restoring the previous precision afterwards.
pub fn with_bits<T>(p: usize, f: impl FnOnce() -> T) -> T {
    let old = bits();
    set_bits(p);
    let r = f();
    set_bits(old);
    r
}

pub fn with_digits<T>(d: u32, f: impl FnOnce() -> T) -> T {
    with_bits(digits_to_bits(d), f)
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| {
        let mut c = c.borrow_mut();
        let cc = c.get_or_insert_with(|| Consts::new().expect("astro-float constants"));
        f(cc)
    })
}

fn rf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, bits())
}

fn r_from_int(x: &num_bigint::BigInt) -> BigFloat {
    use num_traits::ToPrimitive;
    let p = bits();
    match x.to_i64() {
        Some(v) => BigFloat::from_i64(v, p),
        None => with_consts(|cc| BigFloat::parse(&x.to_string(), Radix::Dec, p, RM, cc)),
    }
}

fn r_from_q(x: &Q) -> BigFloat {
    let p = bits();
    if x.denom() == &num_bigint::BigInt::from(1) {
        return r_from_int(x.numer());
    }
    if let (Some(_), Some(_)) = (num_traits::ToPrimitive::to_i64(x.numer()), num_traits::ToPrimitive::to_i64(x.denom())) {
        return r_from_int(x.numer()).div(&r_from_int(x.denom()), p, RM);
    }
    let n = with_consts(|cc| BigFloat::parse(&x.numer().to_string(), Radix::Dec, p, RM, cc));
    let d = with_consts(|cc| BigFloat::parse(&x.denom().to_string(), Radix::Dec, p, RM, cc));
    n.div(&d, p, RM)
}

fn r_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((m, _, s, e, _)) => {
            let top = *m.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
            let v = top * 2f64.powi(e.clamp(-1100, 1100));
            if s == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

fn r_exponent(x: &BigFloat) -> i64 {
    if x.is_zero() {
        i64::MIN / 4
    } else {
        x.exponent().map(|e| e as i64).unwrap_or(0)
    }
}

fn r_atan2(y: &BigFloat, x: &BigFloat) -> BigFloat {
    let p = bits();
    let pi = with_consts(|cc| cc.pi(p, RM));
    if x.is_zero() {
        if y.is_zero() {
            return rf(0.0);
        }
        let h = pi.div(&rf(2.0), p, RM);
        return if y.is_negative() { h.neg() } else { h };
    }
    let base = with_consts(|cc| y.div(x, p, RM).atan(p, RM, cc));
    if x.is_positive() {
        base
    } else if y.is_negative() {
        base.sub(&pi, p, RM)
    } else {
        base.add(&pi, p, RM)
    }
}

/// Complex number with `BigFloat` parts.
#[derive(Clone)]
pub struct Cx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl PartialEq for Cx {
    fn eq(&self, o: &Self) -> bool {
        self.re.cmp(&o.re) == Some(0) && self.im.cmp(&o.im) == Some(0)
    }
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64();
        write!(f, "({a:e} {b:+e}i)")
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64();
        write!(f, "{a:.15e}{b:+.15e}i")
    }
}

impl Cx {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Cx { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Cx::new(rf(re), rf(im))
    }

    pub fn real(x: BigFloat) -> Self {
        Cx::new(x, rf(0.0))
    }

    pub fn i() -> Self {
        Cx::from_f64(0.0, 1.0)
    }

    pub fn parse(re: &str, im: &str) -> Result<Self> {
        let p = bits();
        let a = with_consts(|cc| BigFloat::parse(re, Radix::Dec, p, RM, cc));
        let b = with_consts(|cc| BigFloat::parse(im, Radix::Dec, p, RM, cc));
        if a.is_nan() || b.is_nan() {
            return Err(Error::Parse(format!("not a number: {re} + {im}i")));
        }
        Ok(Cx::new(a, b))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (r_to_f64(&self.re), r_to_f64(&self.im))
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        let p = digits_to_bits(digits);
        let fmt_part = |x: &BigFloat| {
            if x.is_zero() {
                return "0".to_string();
            }
            let mut y = x.clone();
            let _ = y.set_precision(p, RM);
            let s = with_consts(|cc| y.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
            trim_decimal(&s, digits as usize)
        };
        (fmt_part(&self.re), fmt_part(&self.im))
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), self.im.neg())
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = bits();
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(bits(), RM)
    }

    /// |z| as f64 without overflow for tiny values.
    pub fn abs_f64(&self) -> f64 {
        r_to_f64(&self.abs())
    }

    /// Binary exponent of max(|re|, |im|); very negative for 0.
    pub fn magnitude_exp(&self) -> i64 {
        r_exponent(&self.re).max(r_exponent(&self.im))
    }

    pub fn scale_f64(&self, x: f64) -> Self {
        self.mul(&Cx::from_f64(x, 0.0))
    }

    pub fn exp(&self) -> Self {
        let p = bits();
        with_consts(|cc| {
            let m = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            Cx::new(m.mul(&c, p, RM), m.mul(&s, p, RM))
        })
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = bits();
        let r = with_consts(|cc| self.norm_sqr().ln(p, RM, cc)).div(&rf(2.0), p, RM);
        Cx::new(r, r_atan2(&self.im, &self.re))
    }

    pub fn sin(&self) -> Self {
        // sin(a+bi) = sin a cosh b + i cos a sinh b
        let p = bits();
        with_consts(|cc| {
            let (sa, ca) = (self.re.sin(p, RM, cc), self.re.cos(p, RM, cc));
            let (sh, ch) = (self.im.sinh(p, RM, cc), self.im.cosh(p, RM, cc));
            Cx::new(sa.mul(&ch, p, RM), ca.mul(&sh, p, RM))
        })
    }

    pub fn cos(&self) -> Self {
        let p = bits();
        with_consts(|cc| {
            let (sa, ca) = (self.re.sin(p, RM, cc), self.re.cos(p, RM, cc));
            let (sh, ch) = (self.im.sinh(p, RM, cc), self.im.cosh(p, RM, cc));
            Cx::new(ca.mul(&ch, p, RM), sa.mul(&sh, p, RM).neg())
        })
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = bits();
        let r = self.abs();
        let two = rf(2.0);
        let a = r.add(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        let b = r.sub(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        if self.im.is_negative() {
            Cx::new(a, b.neg())
        } else {
            Cx::new(a, b)
        }
    }

    /// Principal power exp(e·ln z).
    pub fn pow(&self, e: &Cx) -> Self {
        if self.is_zero() {
            return if e.is_zero() { Cx::one() } else { Cx::zero() };
        }
        e.mul(&self.ln()).exp()
    }

    pub fn powi(&self, n: i64) -> Self {
        let v = self.pow_u(n.unsigned_abs() as u32);
        if n < 0 {
            Cx::one().div(&v).expect("nonzero base")
        } else {
            v
        }
    }

    pub fn cmp_abs(&self, o: &Cx) -> Ordering {
        match self.norm_sqr().cmp(&o.norm_sqr()) {
            Some(x) if x < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Exact check for a nonpositive integer value.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.im.is_zero() && !self.re.is_positive() && self.re.is_int()
    }

    pub fn pi() -> Self {
        let p = bits();
        Cx::real(with_consts(|cc| cc.pi(p, RM)))
    }

    pub fn re_f64(&self) -> f64 {
        r_to_f64(&self.re)
    }

    /// Evaluates a symbolic constant numerically.
    pub fn from_const(c: &Const) -> Self {
        let mut acc = Cx::zero();
        for (m, k) in c.terms() {
            let mut t = Cx::from_k(k);
            for (a, e) in &m.0 {
                t = t.mul(&atom_value(*a).powi(*e as i64));
            }
            acc = acc.add(&t);
        }
        acc
    }
}

fn trim_decimal(s: &str, digits: usize) -> String {
    // astro-float prints d.ddddde±x; keep `digits` significant digits.
    let (mant, exp) = s.split_once('e').unwrap_or((s, "+0"));
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let mut m: String = mant.chars().take(digits + 1).collect();
    if m.ends_with('.') {
        m.pop();
    }
    format!("{sign}{m}e{exp}")
}

fn atom_value(a: Atom) -> Cx {
    match a {
        Atom::Pi => Cx::pi(),
        Atom::G => gamma(&Cx::from_f64(1.0, 0.0).div(&Cx::from_f64(3.0, 0.0)).expect("3 ≠ 0"))
            .expect("Γ(1/3)")
            .pow_u(3),
        Atom::Zeta(n) => zeta(n),
        Atom::EulerGamma => euler_gamma(),
        Atom::Ln(n) => Cx::from_f64(n as f64, 0.0).ln(),
        Atom::Psi { order, num, den } => {
            let x = Cx::from_q(&crate::scalar::q(num as i64, den as i64));
            polygamma(order, &x).expect("ψ at positive rational")
        }
    }
}

impl Scalar for Cx {
    fn zero() -> Self {
        Cx::from_f64(0.0, 0.0)
    }
    fn one() -> Self {
        Cx::from_f64(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let p = bits();
        Cx::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }
    fn sub(&self, o: &Self) -> Self {
        let p = bits();
        Cx::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }
    fn mul(&self, o: &Self) -> Self {
        let p = bits();
        if self.im.is_zero() && o.im.is_zero() {
            return Cx::real(self.re.mul(&o.re, p, RM));
        }
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        Cx::new(ac.sub(&bd, p, RM), ad.add(&bc, p, RM))
    }
    fn neg(&self) -> Self {
        Cx::new(self.re.neg(), self.im.neg())
    }
    fn from_q(x: &Q) -> Self {
        Cx::real(r_from_q(x))
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = bits();
        let n = self.norm_sqr();
        Some(Cx::new(self.re.div(&n, p, RM), self.im.div(&n, p, RM).neg()))
    }
    fn div(&self, o: &Self) -> Result<Self> {
        o.inv()
            .map(|i| self.mul(&i))
            .ok_or_else(|| Error::Invalid("division by zero".into()))
    }
    fn magnitude(&self) -> f64 {
        self.abs_f64()
    }
}

impl SpecialField for Cx {
    fn from_k(k: &K) -> Self {
        let s3 = Cx::from_q(&crate::scalar::qi(3)).sqrt();
        let re = Cx::from_q(&k.a).add(&s3.mul(&Cx::from_q(&k.c)));
        let im = Cx::from_q(&k.b).add(&s3.mul(&Cx::from_q(&k.d)));
        Cx::new(re.re, im.re)
    }

    fn pi() -> Self {
        Cx::pi()
    }

    fn gamma_pow(a: &Q, power: i32) -> Result<Self> {
        let g = gamma(&Cx::from_q(a))?;
        Ok(g.powi(power as i64))
    }

    fn polygamma(order: u32, a: &Q) -> Result<Self> {
        polygamma(order, &Cx::from_q(a))
    }
}

/// Max-abs distance helper used by numeric comparisons.
pub fn max_abs_diff<'a>(a: impl IntoIterator<Item = &'a Cx>, b: impl IntoIterator<Item = &'a Cx>) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| x.sub(y).abs_f64())
        .fold(0.0, f64::max)
}

/// Maps `f` over `items` in parallel at the caller's precision, keeping order.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    use rayon::prelude::*;
    let p = bits();
    items.par_iter().map(|x| with_bits(p, || f(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_functions() {
        with_digits(40, || {
            let z = Cx::from_f64(0.3, -1.2);
            let back = z.exp().ln();
            assert!(back.sub(&z).abs_f64() < 1e-45);
            let s = z.sin();
            let c = z.cos();
            let one = s.mul(&s).add(&c.mul(&c));
            assert!(one.sub(&Cx::one()).abs_f64() < 1e-45);
            let r = z.sqrt();
            assert!(r.mul(&r).sub(&z).abs_f64() < 1e-45);
            let m1 = Cx::from_f64(-1.0, 0.0);
            assert!(m1.ln().sub(&Cx::pi().mul(&Cx::i())).abs_f64() < 1e-45);
        });
    }

    #[test]
    fn rational_and_k_conversion() {
        with_digits(30, || {
            let x = Cx::from_q(&crate::scalar::q(1, 3));
            assert!((x.re_f64() - 1.0 / 3.0).abs() < 1e-16);
            let a = Cx::from_k(&K::alpha());
            assert!(a.pow_u(3).sub(&Cx::one()).abs_f64() < 1e-35);
        });
    }

    #[test]
    fn decimal_output() {
        with_digits(30, || {
            let (re, im) = Cx::pi().to_decimal(10);
            assert_eq!(re, "3.141592653e+0");
            assert_eq!(im, "0");
        });
    }
}
