use std::collections::BTreeMap;
use std::fmt;


use super::{bernoulli, factorial, q, qi, Scalar, SpecialField, K, Q};
use crate::error::{Error, Result};

/// Transcendental atoms. π, ζ(3) and g = Γ(1/3)³ are the genuine constants;
/// the others are intermediate quantities that must cancel in final results.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    Pi,
    G,
    Zeta(u32),
    EulerGamma,
    Ln(u32),
    /// ψ^{(order)}(num/den)
    Psi { order: u32, num: u32, den: u32 },
}

impl Atom {
    pub fn is_clean(&self) -> bool {
        matches!(self, Atom::Pi | Atom::G | Atom::Zeta(3))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pi => write!(f, "π"),
            Atom::G => write!(f, "Γ(1/3)³"),
            Atom::Zeta(n) => write!(f, "ζ({n})"),
            Atom::EulerGamma => write!(f, "γ"),
            Atom::Ln(n) => write!(f, "ln{n}"),
            Atom::Psi { order, num, den } => write!(f, "ψ{order}({num}/{den})"),
        }
    }
}

/// Laurent monomial in the atoms, sorted by atom, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub Vec<(Atom, i32)>);

impl Monomial {
    fn mul(&self, o: &Monomial) -> Monomial {
        let mut m: BTreeMap<Atom, i32> = self.0.iter().cloned().collect();
        for (a, e) in &o.0 {
            *m.entry(*a).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(a, e)| (*a, -e)).collect())
    }
}

/// Element of ℚ(i,√3)[π^±, ζ(3)^±, g^±, …]: a finite sum of K-multiples of
/// atom monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Const {
    terms: BTreeMap<Monomial, K>,
}

impl Const {
    pub fn from_k(k: K) -> Self {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert(Monomial::default(), k);
        }
        Const { terms }
    }

    pub fn atom_pow(a: Atom, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        let m = if e == 0 { Monomial::default() } else { Monomial(vec![(a, e)]) };
        terms.insert(m, K::one());
        Const { terms }
    }

    pub fn atom(a: Atom) -> Self {
        Self::atom_pow(a, 1)
    }

    pub fn pi() -> Self {
        Self::atom(Atom::Pi)
    }

    pub fn g() -> Self {
        Self::atom(Atom::G)
    }

    pub fn zeta3() -> Self {
        Self::atom(Atom::Zeta(3))
    }

    pub fn i() -> Self {
        Self::from_k(K::i())
    }

    pub fn sqrt3() -> Self {
        Self::from_k(K::sqrt3())
    }

    pub fn rat(n: i64, d: i64) -> Self {
        Self::from_k(K::rational(q(n, d)))
    }

    /// Γ(2/3)³ = 8π³/(3√3·g).
    pub fn gamma_two_thirds_cubed() -> Self {
        let c = K::new(qi(0), qi(0), q(8, 9), qi(0));
        Const::from_k(c)
            .mul(&Const::atom_pow(Atom::Pi, 3))
            .mul(&Const::atom_pow(Atom::G, -1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when only π, ζ(3) and g occur.
    pub fn is_clean(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|(a, _)| a.is_clean()))
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self.terms.keys().flat_map(|m| m.0.iter().map(|(a, _)| *a)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The coefficient when the constant is an element of K.
    pub fn as_k(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => {
                let (m, k) = self.terms.iter().next()?;
                m.0.is_empty().then(|| k.clone())
            }
            _ => None,
        }
    }

    pub fn as_q(&self) -> Option<Q> {
        self.as_k().filter(K::is_rational).map(|k| k.a)
    }

    pub fn conj(&self) -> Self {
        Const {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.conj())).collect(),
        }
    }

    fn insert(&mut self, m: Monomial, k: K) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !k.is_zero() {
                    e.insert(k);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&k);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

impl Scalar for Const {
    fn zero() -> Self {
        Const::default()
    }
    fn one() -> Self {
        Const::from_k(K::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, k) in &o.terms {
            r.insert(m.clone(), k.clone());
        }
        r
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = Const::default();
        for (m1, k1) in &self.terms {
            for (m2, k2) in &o.terms {
                r.insert(m1.mul(m2), k1.mul(k2));
            }
        }
        r
    }
    fn neg(&self) -> Self {
        Const {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k.neg())).collect(),
        }
    }
    fn from_q(x: &Q) -> Self {
        Const::from_k(K::rational(x.clone()))
    }
    fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, k) = self.terms.iter().next()?;
        let mut terms = BTreeMap::new();
        terms.insert(m.inv(), k.inv()?);
        Some(Const { terms })
    }
}

/// Splits a > 0 non-integer-or-positive rational as r + n with r ∈ (0, 1].
fn split_base(a: &Q) -> (Q, i64) {
    let fl = a.floor();
    let mut r = a - &fl;
    let mut n = super::q_floor(a);
    if r.is_zero() {
        r = qi(1);
        n -= 1;
    }
    (r, n)
}

/// ∏ factor such that Γ(r + n) = Γ(r)·factor.
fn gamma_shift_factor(r: &Q, n: i64) -> Q {
    let mut f = qi(1);
    if n >= 0 {
        for i in 0..n {
            f *= r + qi(i);
        }
    } else {
        for i in 1..=(-n) {
            f /= r - qi(i);
        }
    }
    f
}

fn is_nonpositive_int(a: &Q) -> bool {
    a.is_integer() && a <= &qi(0)
}

/// ζ(n) for n ≥ 2: rational multiple of π^n when n is even, an atom otherwise.
pub(crate) fn zeta_const(n: u32) -> Const {
    if n % 2 == 0 {
        // ζ(2k) = (−1)^{k+1} B_{2k} (2π)^{2k} / (2 (2k)!)
        let k = n / 2;
        let b = &bernoulli(n as usize)[n as usize];
        let sign = if k % 2 == 1 { qi(1) } else { qi(-1) };
        let c = sign * b * Q::from_integer(num_bigint::BigInt::from(2).pow(n))
            / (qi(2) * Q::from_integer(factorial(n)));
        Const::from_q(&c).mul(&Const::atom_pow(Atom::Pi, n as i32))
    } else {
        Const::atom(Atom::Zeta(n))
    }
}

impl SpecialField for Const {
    fn from_k(k: &K) -> Self {
        Const::from_k(k.clone())
    }

    fn pi() -> Self {
        Const::pi()
    }

    fn gamma_pow(a: &Q, power: i32) -> Result<Self> {
        if is_nonpositive_int(a) {
            return Err(Error::Pole(format!("Γ({a})")));
        }
        let (r, n) = split_base(a);
        let factor = Const::from_q(&gamma_shift_factor(&r, n)).pow_u(power.unsigned_abs());
        let base = if r == qi(1) {
            Const::one()
        } else if r == q(1, 2) && power % 2 == 0 {
            Const::atom_pow(Atom::Pi, power.abs() / 2)
        } else if r == q(1, 3) && power % 3 == 0 {
            Const::atom_pow(Atom::G, power.abs() / 3)
        } else if r == q(2, 3) && power % 3 == 0 {
            Const::gamma_two_thirds_cubed().pow_u((power.abs() / 3) as u32)
        } else {
            return Err(Error::Unsupported(format!("Γ({a})^{power}")));
        };
        let v = base.mul(&factor);
        if power < 0 {
            v.inv().ok_or_else(|| Error::Unsupported(format!("Γ({a})^{power}")))
        } else {
            Ok(v)
        }
    }

    fn polygamma(order: u32, a: &Q) -> Result<Self> {
        if is_nonpositive_int(a) {
            return Err(Error::Pole(format!("ψ({a})")));
        }
        let (r, n) = split_base(a);
        let sign = if order % 2 == 0 { qi(1) } else { qi(-1) };
        let jf = Q::from_integer(factorial(order));
        // ψ^{(j)}(x+1) = ψ^{(j)}(x) + (−1)^j j!/x^{j+1}
        let mut shift = qi(0);
        if n >= 0 {
            for i in 0..n {
                let x = &r + qi(i);
                shift += &sign * &jf / num_traits::pow(x, order as usize + 1);
            }
        } else {
            for i in 1..=(-n) {
                let x = &r - qi(i);
                shift -= &sign * &jf / num_traits::pow(x, order as usize + 1);
            }
        }
        let eg = Const::atom(Atom::EulerGamma);
        let base = if r == qi(1) {
            if order == 0 {
                eg.neg()
            } else {
                // (−1)^{j+1} j! ζ(j+1)
                zeta_const(order + 1).scale_q(&(-&sign * &jf))
            }
        } else if r == q(1, 2) {
            if order == 0 {
                eg.neg().sub(&Const::atom(Atom::Ln(2)).scale_q(&qi(2)))
            } else {
                let m = Q::from_integer(num_bigint::BigInt::from(2).pow(order + 1) - 1);
                zeta_const(order + 1).scale_q(&(-&sign * &jf * m))
            }
        } else if (r == q(1, 3) || r == q(2, 3)) && order == 0 {
            // ψ(1/3) = −γ − π/(2√3) − (3/2)ln3, ψ(2/3) = −γ + π/(2√3) − (3/2)ln3
            let s = if r == q(1, 3) { q(-1, 6) } else { q(1, 6) };
            let pi_part = Const::from_k(K::new(qi(0), qi(0), s, qi(0))).mul(&Const::pi());
            eg.neg()
                .add(&pi_part)
                .sub(&Const::atom(Atom::Ln(3)).scale_q(&q(3, 2)))
        } else if r == q(1, 3) || r == q(2, 3) {
            let num = if r == q(1, 3) { 1 } else { 2 };
            Const::atom(Atom::Psi { order, num, den: 3 })
        } else {
            return Err(Error::Unsupported(format!("ψ^({order})({a})")));
        };
        Ok(base.add(&Const::from_q(&shift)))
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, k) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let ks = k.to_string();
            let multi = [&k.a, &k.b, &k.c, &k.d].iter().filter(|x| !x.is_zero()).count() > 1;
            if m.0.is_empty() {
                write!(f, "{ks}")?;
                continue;
            }
            if multi {
                write!(f, "({ks})")?;
            } else if ks != "1" {
                if ks == "-1" {
                    write!(f, "-")?;
                } else {
                    write!(f, "{ks}")?;
                }
            }
            for (a, e) in &m.0 {
                if *e == 1 {
                    write!(f, "·{a}")?;
                } else {
                    write!(f, "·{a}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_reflection_identity_is_built_in() {
        // Γ(1/3)³ Γ(2/3)³ = 8π³/(3√3)
        let prod = Const::gamma_pow(&q(1, 3), 3)
            .unwrap()
            .mul(&Const::gamma_pow(&q(2, 3), 3).unwrap());
        let expect = Const::from_k(K::new(qi(0), qi(0), q(8, 9), qi(0))).mul(&Const::atom_pow(Atom::Pi, 3));
        assert_eq!(prod, expect);
    }

    #[test]
    fn shifted_gamma() {
        // Γ(4/3)³ = g/27
        assert_eq!(Const::gamma_pow(&q(4, 3), 3).unwrap(), Const::g().scale_q(&q(1, 27)));
        // Γ(3/2)² = π/4
        assert_eq!(Const::gamma_pow(&q(3, 2), 2).unwrap(), Const::pi().scale_q(&q(1, 4)));
        assert!(Const::gamma_pow(&qi(0), 1).is_err());
        // Γ(−1/3) = −3 Γ(2/3)
        assert_eq!(
            Const::gamma_pow(&q(-1, 3), 3).unwrap(),
            Const::gamma_pow(&q(2, 3), 3).unwrap().scale_q(&qi(-27))
        );
    }

    #[test]
    fn polygamma_values() {
        assert_eq!(Const::polygamma(1, &qi(1)).unwrap(), Const::pi().pow_u(2).scale_q(&q(1, 6)));
        assert_eq!(Const::polygamma(2, &qi(1)).unwrap(), Const::zeta3().scale_q(&qi(-2)));
        // ψ(2) = 1 − γ
        assert_eq!(
            Const::polygamma(0, &qi(2)).unwrap(),
            Const::one().sub(&Const::atom(Atom::EulerGamma))
        );
    }

    #[test]
    fn inverse_of_monomial() {
        let x = Const::sqrt3().mul(&Const::pi()).mul(&Const::g().inv().unwrap());
        assert_eq!(x.mul(&x.inv().unwrap()), Const::one());
        assert!(Const::pi().add(&Const::one()).inv().is_none());
    }
}
