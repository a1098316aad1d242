//! Γ, ψ^{(n)}, ζ(n) and Gauss–Legendre nodes at the working precision.
//!
//! Γ and the polygammas use the Stirling asymptotic series after an upward
//! shift z → z + N that makes Re(z + N) ≥ R, with R chosen so the smallest
//! Stirling term is below the working epsilon; the shift is undone with the
//! recurrences Γ(z+1) = zΓ(z) and ψ^{(n)}(z+1) = ψ^{(n)}(z) + (−1)^n n!/z^{n+1}.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{bits, Cx};
use crate::error::{Error, Result};
use crate::scalar::{bernoulli, factorial, Scalar, Q};

thread_local! {
    static STIRLING: RefCell<HashMap<(usize, u32), Vec<Cx>>> = RefCell::new(HashMap::new());
    static GL: RefCell<HashMap<(usize, usize), (Vec<Cx>, Vec<Cx>)>> = RefCell::new(HashMap::new());
}

fn shift_radius() -> f64 {
    (0.12 * bits() as f64).max(20.0)
}

/// Number of Stirling terms needed at |w| ≥ R.
fn stirling_terms() -> usize {
    (std::f64::consts::PI * shift_radius()).ceil() as usize + 2
}

/// Coefficients c_k of the asymptotic series for ψ^{(n)} (n ≥ 1) or lnΓ / ψ.
///
/// Layout: n = u32::MAX → lnΓ coefficients B_{2k}/(2k(2k−1));
/// otherwise B_{2k}(2k+n−1)!/(2k)! (n = 0 gives B_{2k}/(2k)).
fn stirling_coeffs(n: u32) -> Vec<Cx> {
    let key = (bits(), n);
    if let Some(v) = STIRLING.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let kmax = stirling_terms();
    let b = bernoulli(2 * kmax);
    let v: Vec<Cx> = (1..=kmax)
        .map(|k| {
            let k = k as u32;
            let b2k = &b[2 * k as usize];
            let c: Q = if n == u32::MAX {
                b2k / Q::from_integer((2 * k * (2 * k - 1)).into())
            } else if n == 0 {
                b2k / Q::from_integer((2 * k).into())
            } else {
                b2k * Q::from_integer(factorial(2 * k + n - 1)) / Q::from_integer(factorial(2 * k))
            };
            Cx::from_q(&c)
        })
        .collect();
    STIRLING.with(|c| c.borrow_mut().insert(key, v.clone()));
    v
}

fn tiny_exp() -> i64 {
    -(bits() as i64) - 8
}

/// Γ(z) together with ψ^{(0)}(z), …, ψ^{(nmax)}(z).
pub fn gamma_and_polygammas(z: &Cx, nmax: u32) -> Result<(Cx, Vec<Cx>)> {
    if z.is_nonpositive_integer() {
        return Err(Error::Pole(format!("Γ at {z}")));
    }
    let r = shift_radius();
    let shift = (r - z.re_f64()).ceil().max(0.0) as i64;
    let w = z.add(&Cx::from_f64(shift as f64, 0.0));
    let iw = Cx::one().div(&w)?;
    let iw2 = iw.mul(&iw);
    let half = Cx::from_f64(0.5, 0.0);

    // lnΓ(w)
    let mut lg = w
        .sub(&half)
        .mul(&w.ln())
        .sub(&w)
        .add(&Cx::pi().scale_f64(2.0).ln().mul(&half));
    let mut pw = iw.clone();
    for c in stirling_coeffs(u32::MAX) {
        let t = c.mul(&pw);
        lg = lg.add(&t);
        if t.magnitude_exp() < tiny_exp() + lg.magnitude_exp().max(0) {
            break;
        }
        pw = pw.mul(&iw2);
    }

    // shift product ∏_{i<N}(z+i)
    let mut prod = Cx::one();
    let mut zi = z.clone();
    let mut recips = Vec::with_capacity(shift as usize);
    for _ in 0..shift {
        prod = prod.mul(&zi);
        recips.push(Cx::one().div(&zi)?);
        zi = zi.add(&Cx::one());
    }
    let g = lg.exp().div(&prod)?;

    let mut psis = Vec::with_capacity(nmax as usize + 1);
    for n in 0..=nmax {
        let mut s = if n == 0 {
            w.ln().sub(&iw.mul(&half))
        } else {
            // (n−1)!/w^n + n!/(2 w^{n+1})
            let a = Cx::from_q(&Q::from_integer(factorial(n - 1))).mul(&iw.pow_u(n));
            let b = Cx::from_q(&Q::from_integer(factorial(n))).mul(&iw.pow_u(n + 1)).mul(&half);
            a.add(&b)
        };
        let mut pw = iw.pow_u(n + 2);
        let scale = s.magnitude_exp();
        for c in stirling_coeffs(n) {
            let t = c.mul(&pw);
            if n == 0 {
                s = s.sub(&t);
            } else {
                s = s.add(&t);
            }
            if t.magnitude_exp() < tiny_exp() + scale {
                break;
            }
            pw = pw.mul(&iw2);
        }
        if n >= 1 && n % 2 == 0 {
            s = s.neg();
        }
        // ψ^{(n)}(z) = ψ^{(n)}(w) − Σ (−1)^n n!/(z+i)^{n+1}
        let nf = Cx::from_q(&Q::from_integer(factorial(n)));
        let mut corr = Cx::zero();
        for rcp in &recips {
            corr = corr.add(&rcp.pow_u(n + 1));
        }
        corr = corr.mul(&nf);
        if n % 2 == 1 {
            corr = corr.neg();
        }
        psis.push(s.sub(&corr));
    }
    Ok((g, psis))
}

pub fn gamma(z: &Cx) -> Result<Cx> {
    Ok(gamma_and_polygammas(z, 0)?.0)
}

/// 1/Γ(z), entire; zero at the poles of Γ.
pub fn rgamma(z: &Cx) -> Cx {
    match gamma(z) {
        Ok(g) => Cx::one().div(&g).unwrap_or_else(|_| Cx::zero()),
        Err(_) => Cx::zero(),
    }
}

pub fn polygamma(n: u32, z: &Cx) -> Result<Cx> {
    let (_, p) = gamma_and_polygammas(z, n)?;
    Ok(p[n as usize].clone())
}

/// ζ(n) = (−1)^n ψ^{(n−1)}(1)/(n−1)! for n ≥ 2.
pub fn zeta(n: u32) -> Cx {
    assert!(n >= 2, "zeta needs n ≥ 2");
    let v = polygamma(n - 1, &Cx::one()).expect("ψ at 1");
    let f = Cx::from_q(&Q::from_integer(factorial(n - 1)));
    let r = v.div(&f).expect("nonzero factorial");
    if n % 2 == 0 {
        r
    } else {
        r.neg()
    }
}

pub fn euler_gamma() -> Cx {
    polygamma(0, &Cx::one()).expect("ψ(1)").neg()
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<Cx>, Vec<Cx>) {
    let key = (bits(), n);
    if let Some(v) = GL.with(|c| c.borrow().get(&key).cloned()) {
        return v;
    }
    let mut xs = vec![Cx::zero(); n];
    let mut ws = vec![Cx::zero(); n];
    let eps_exp = -(bits() as i64) + 4;
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Cx::from_f64(guess, 0.0);
        let mut dp = Cx::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            dp = d;
            let dx = p.div(&dp).expect("P'_n ≠ 0 at a root");
            x = x.sub(&dx);
            if dx.magnitude_exp() < eps_exp {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        // w = 2/((1−x²) P'_n(x)²)
        let w = Cx::from_f64(2.0, 0.0)
            .div(&Cx::one().sub(&x.mul(&x)).mul(&dp.mul(&dp)))
            .expect("nonzero weight denominator");
        xs[i] = x.neg();
        ws[i] = w.clone();
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = w;
    }
    let v = (xs, ws);
    GL.with(|c| c.borrow_mut().insert(key, v.clone()));
    v
}

fn legendre(n: usize, x: &Cx) -> (Cx, Cx) {
    let mut p0 = Cx::one();
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = k as f64;
        let p2 = x
            .mul(&p1)
            .scale_f64(2.0 * kf - 1.0)
            .sub(&p0.scale_f64(kf - 1.0))
            .div(&Cx::from_f64(kf, 0.0))
            .expect("k ≠ 0");
        p0 = p1;
        p1 = p2;
    }
    // P'_n = n (x P_n − P_{n−1})/(x² − 1)
    let d = x
        .mul(&p1)
        .sub(&p0)
        .scale_f64(n as f64)
        .div(&x.mul(x).sub(&Cx::one()))
        .expect("x ≠ ±1");
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::with_digits;

    fn close(a: &Cx, b: &Cx, tol: f64) -> bool {
        a.sub(b).abs_f64() <= tol * b.abs_f64().max(1.0)
    }

    #[test]
    fn gamma_half_and_integers() {
        with_digits(40, || {
            let g = gamma(&Cx::from_f64(0.5, 0.0)).unwrap();
            assert!(close(&g.mul(&g), &Cx::pi(), 1e-38));
            let g5 = gamma(&Cx::from_f64(5.0, 0.0)).unwrap();
            assert!(close(&g5, &Cx::from_f64(24.0, 0.0), 1e-38));
            assert!(gamma(&Cx::from_f64(-2.0, 0.0)).is_err());
            assert!(rgamma(&Cx::from_f64(-2.0, 0.0)).is_zero());
        });
    }

    #[test]
    fn reflection_formula_complex() {
        with_digits(40, || {
            let z = Cx::from_f64(0.3, 2.7);
            let lhs = gamma(&z).unwrap().mul(&gamma(&Cx::one().sub(&z)).unwrap());
            let rhs = Cx::pi().div(&Cx::pi().mul(&z).sin()).unwrap();
            assert!(close(&lhs, &rhs, 1e-37));
        });
    }

    #[test]
    fn polygamma_special_values() {
        with_digits(40, || {
            // ψ'(1) = π²/6, ψ(1/2) = −γ − 2 ln 2
            let p1 = polygamma(1, &Cx::one()).unwrap();
            let pi = Cx::pi();
            assert!(close(&p1, &pi.mul(&pi).div(&Cx::from_i64(6)).unwrap(), 1e-38));
            let ph = polygamma(0, &Cx::from_f64(0.5, 0.0)).unwrap();
            let expect = euler_gamma().neg().sub(&Cx::from_f64(2.0, 0.0).ln().scale_f64(2.0));
            assert!(close(&ph, &expect, 1e-38));
            let eg = euler_gamma();
            let known = Cx::parse("0.5772156649015328606065120900824024310421", "0").unwrap();
            assert!(close(&eg, &known, 1e-38));
            let z3 = zeta(3);
            let known = Cx::parse("1.202056903159594285399738161511449990764986", "0").unwrap();
            assert!(close(&z3, &known, 1e-38));
        });
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        with_digits(30, || {
            let (x, w) = gauss_legendre(10);
            // ∫_{−1}^{1} x^18 dx = 2/19
            let s = x.iter().zip(&w).fold(Cx::zero(), |acc, (xi, wi)| acc.add(&wi.mul(&xi.pow_u(18))));
            assert!(close(&s, &Cx::from_f64(2.0 / 19.0, 0.0), 1e-15));
        });
    }
}
