use std::fmt;

use num_traits::One;

use super::{q, q_to_string, qi, Scalar, Q};

/// Element a + b·i + c·√3 + d·i√3 of ℚ(i, √3).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct K {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

// Q(√3) helpers on pairs (x, y) meaning x + y√3.
fn r3_mul(x: &(Q, Q), y: &(Q, Q)) -> (Q, Q) {
    (
        &x.0 * &y.0 + qi(3) * &x.1 * &y.1,
        &x.0 * &y.1 + &x.1 * &y.0,
    )
}

fn r3_inv(x: &(Q, Q)) -> Option<(Q, Q)> {
    let n = &x.0 * &x.0 - qi(3) * &x.1 * &x.1;
    if n.is_zero() {
        return None;
    }
    Some((&x.0 / &n, -&x.1 / &n))
}

impl K {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        K { a, b, c, d }
    }

    pub fn rational(a: Q) -> Self {
        K::new(a, qi(0), qi(0), qi(0))
    }

    pub fn i() -> Self {
        K::new(qi(0), qi(1), qi(0), qi(0))
    }

    pub fn sqrt3() -> Self {
        K::new(qi(0), qi(0), qi(1), qi(0))
    }

    /// α = e^{2πi/3}.
    pub fn alpha() -> Self {
        K::new(q(-1, 2), qi(0), qi(0), q(1, 2))
    }

    /// (cos, sin) of jπ/6.
    pub fn cos_sin_pi_sixths(j: i64) -> (K, K) {
        let j = j.rem_euclid(12);
        let half = q(1, 2);
        // cos(jπ/6) for j = 0..11 as (rational, √3 part)
        let cos_tab: [(Q, Q); 12] = [
            (qi(1), qi(0)),
            (qi(0), half.clone()),
            (half.clone(), qi(0)),
            (qi(0), qi(0)),
            (-half.clone(), qi(0)),
            (qi(0), -half.clone()),
            (qi(-1), qi(0)),
            (qi(0), -half.clone()),
            (-half.clone(), qi(0)),
            (qi(0), qi(0)),
            (half.clone(), qi(0)),
            (qi(0), half.clone()),
        ];
        let c = &cos_tab[j as usize];
        let s = &cos_tab[((j + 9) % 12) as usize]; // sin x = cos(x − π/2)
        (
            K::new(c.0.clone(), qi(0), c.1.clone(), qi(0)),
            K::new(s.0.clone(), qi(0), s.1.clone(), qi(0)),
        )
    }

    fn parts(&self) -> ((Q, Q), (Q, Q)) {
        ((self.a.clone(), self.c.clone()), (self.b.clone(), self.d.clone()))
    }

    fn from_parts(u: (Q, Q), v: (Q, Q)) -> Self {
        K::new(u.0, v.0, u.1, v.1)
    }

    pub fn conj(&self) -> Self {
        K::new(self.a.clone(), -&self.b, self.c.clone(), -&self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let s3 = 3f64.sqrt();
        let f = super::q_to_f64;
        (f(&self.a) + s3 * f(&self.c), f(&self.b) + s3 * f(&self.d))
    }
}

impl Scalar for K {
    fn zero() -> Self {
        K::rational(qi(0))
    }
    fn one() -> Self {
        K::rational(qi(1))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        K::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
    fn sub(&self, o: &Self) -> Self {
        K::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
    fn mul(&self, o: &Self) -> Self {
        let (u, v) = self.parts();
        let (u2, v2) = o.parts();
        let uu = r3_mul(&u, &u2);
        let vv = r3_mul(&v, &v2);
        let uv = r3_mul(&u, &v2);
        let vu = r3_mul(&v, &u2);
        K::from_parts(
            (&uu.0 - &vv.0, &uu.1 - &vv.1),
            (&uv.0 + &vu.0, &uv.1 + &vu.1),
        )
    }
    fn neg(&self) -> Self {
        K::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
    fn from_q(x: &Q) -> Self {
        K::rational(x.clone())
    }
    fn inv(&self) -> Option<Self> {
        // 1/(u + vi) = (u − vi)/(u² + v²)
        let (u, v) = self.parts();
        let uu = r3_mul(&u, &u);
        let vv = r3_mul(&v, &v);
        let n = r3_inv(&(&uu.0 + &vv.0, &uu.1 + &vv.1))?;
        let re = r3_mul(&u, &n);
        let im = r3_mul(&v, &n);
        Some(K::from_parts(re, (-im.0, -im.1)))
    }
}

impl fmt::Display for K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (&self.a, ""),
            (&self.b, "i"),
            (&self.c, "√3"),
            (&self.d, "i√3"),
        ];
        let mut first = true;
        for (x, unit) in parts {
            if x.is_zero() {
                continue;
            }
            let s = q_to_string(x);
            let (sign, mag) = match s.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", s),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if unit.is_empty() {
                write!(f, "{mag}")?;
            } else if x.abs_is_one() {
                write!(f, "{unit}")?;
            } else {
                write!(f, "{mag}{unit}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

trait AbsOne {
    fn abs_is_one(&self) -> bool;
}

impl AbsOne for Q {
    fn abs_is_one(&self) -> bool {
        self.is_one() || (-self).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_identities() {
        let i = K::i();
        let s = K::sqrt3();
        assert_eq!(i.mul(&i), K::from_i64(-1));
        assert_eq!(s.mul(&s), K::from_i64(3));
        let a = K::alpha();
        assert_eq!(a.mul(&a).mul(&a), K::one());
        let x = K::new(q(1, 2), qi(-3), q(2, 7), qi(5));
        assert_eq!(x.mul(&x.inv().unwrap()), K::one());
    }

    #[test]
    fn trig_table() {
        let (c, s) = K::cos_sin_pi_sixths(2);
        assert_eq!(c, K::rational(q(1, 2)));
        assert_eq!(s, K::new(qi(0), qi(0), q(1, 2), qi(0)));
        let (c, s) = K::cos_sin_pi_sixths(3);
        assert!(c.is_zero());
        assert_eq!(s, K::one());
        let (c, s) = K::cos_sin_pi_sixths(-2);
        assert_eq!(c, K::rational(q(1, 2)));
        assert_eq!(s, K::new(qi(0), qi(0), q(-1, 2), qi(0)));
    }
}
