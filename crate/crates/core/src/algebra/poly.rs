//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;

use rand::RngCore;

use super::field::Field;

/// A polynomial with little-endian coefficients and no trailing zeros.
///
/// The zero polynomial has no coefficients and degree `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    /// Wrap coefficients the caller has already trimmed.
    pub(crate) fn from_raw(coeffs: Vec<E>) -> Self {
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Degree first, then coefficients from the top down.
impl<E: Ord> Ord for Poly<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<E: Ord> PartialOrd for Poly<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The ring `K[X]` for a concrete field `K`.
#[derive(Clone, Debug)]
pub struct PolyRing<K: Field> {
    field: K,
}

impl<K: Field> PolyRing<K> {
    pub fn new(field: K) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    fn trim(&self, mut coeffs: Vec<K::Elem>) -> Poly<K::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: Vec<K::Elem>) -> Poly<K::Elem> {
        self.trim(coeffs)
    }

    pub fn zero(&self) -> Poly<K::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<K::Elem> {
        self.constant(self.field.one())
    }

    pub fn x(&self) -> Poly<K::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn constant(&self, c: K::Elem) -> Poly<K::Elem> {
        self.trim(vec![c])
    }

    pub fn monomial(&self, c: K::Elem, k: usize) -> Poly<K::Elem> {
        if self.field.is_zero(&c) {
            return self.zero();
        }
        let mut coeffs = vec![self.field.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_one(&self, a: &Poly<K::Elem>) -> bool {
        a.coeffs.len() == 1 && self.field.is_one(&a.coeffs[0])
    }

    pub fn is_monic(&self, a: &Poly<K::Elem>) -> bool {
        a.lc().is_some_and(|c| self.field.is_one(c))
    }

    pub fn add(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = self.field.add(c, s);
        }
        self.trim(coeffs)
    }

    pub fn neg(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&zero);
                let y = b.coeffs.get(i).unwrap_or(&zero);
                self.field.sub(x, y)
            })
            .collect();
        self.trim(coeffs)
    }

    pub fn scale(&self, a: &Poly<K::Elem>, c: &K::Elem) -> Poly<K::Elem> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Poly {
            coeffs: a.coeffs.iter().map(|x| self.field.mul(x, c)).collect(),
        }
    }

    /// Multiply by `X^k`.
    pub fn shift(&self, a: &Poly<K::Elem>, k: usize) -> Poly<K::Elem> {
        if a.is_zero() {
            return self.zero();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(a.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn mul(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut coeffs = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.field.mul(x, y);
                coeffs[i + j] = self.field.add(&coeffs[i + j], &t);
            }
        }
        self.trim(coeffs)
    }

    pub fn square(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        self.mul(a, a)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> (Poly<K::Elem>, Poly<K::Elem>) {
        let db = b.degree().expect("division by the zero polynomial");
        if a.coeffs.len() <= db {
            return (self.zero(), a.clone());
        }
        let inv_lc = self.field.inv(b.lc().unwrap()).unwrap();
        let mut rem = a.coeffs.clone();
        let mut quo = vec![self.field.zero(); a.coeffs.len() - db];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + db];
            if self.field.is_zero(c) {
                continue;
            }
            let t = self.field.mul(c, &inv_lc);
            for (j, bc) in b.coeffs.iter().enumerate() {
                let s = self.field.mul(&t, bc);
                rem[i + j] = self.field.sub(&rem[i + j], &s);
            }
            quo[i] = t;
        }
        rem.truncate(db);
        (self.trim(quo), self.trim(rem))
    }

    pub fn rem(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let db = b.degree().expect("division by the zero polynomial");
        if a.coeffs.len() <= db {
            return a.clone();
        }
        let inv_lc = self.field.inv(b.lc().unwrap()).unwrap();
        let mut rem = a.coeffs.clone();
        for i in (0..=(a.coeffs.len() - 1 - db)).rev() {
            let c = rem[i + db].clone();
            if self.field.is_zero(&c) {
                continue;
            }
            let t = self.field.mul(&c, &inv_lc);
            for (j, bc) in b.coeffs.iter().enumerate() {
                let s = self.field.mul(&t, bc);
                rem[i + j] = self.field.sub(&rem[i + j], &s);
            }
        }
        rem.truncate(db);
        self.trim(rem)
    }

    /// `a / b` when `b` divides `a`, otherwise `None`.
    pub fn div_exact(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Option<Poly<K::Elem>> {
        let (q, r) = self.divrem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, d: &Poly<K::Elem>, a: &Poly<K::Elem>) -> bool {
        self.rem(a, d).is_zero()
    }

    pub fn monic(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        match a.lc() {
            None => self.zero(),
            Some(c) => {
                let inv = self.field.inv(c).unwrap();
                self.scale(a, &inv)
            }
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
    pub fn ext_gcd(
        &self,
        a: &Poly<K::Elem>,
        b: &Poly<K::Elem>,
    ) -> (Poly<K::Elem>, Poly<K::Elem>, Poly<K::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => (r0, s0, t0),
            Some(c) => {
                let inv = self.field.inv(c).unwrap();
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly<K::Elem>, m: &Poly<K::Elem>) -> Option<Poly<K::Elem>> {
        let (g, s, _) = self.ext_gcd(&self.rem(a, m), m);
        if self.is_one(&g) {
            Some(self.rem(&s, m))
        } else if m.degree() == Some(0) {
            Some(self.zero())
        } else {
            None
        }
    }

    pub fn mulmod(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>, m: &Poly<K::Elem>) -> Poly<K::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &Poly<K::Elem>, mut e: u128, m: &Poly<K::Elem>) -> Poly<K::Elem> {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    /// `a^(Q^times) mod m` where `Q` is the field order.
    pub fn frobenius_mod(&self, a: &Poly<K::Elem>, times: usize, m: &Poly<K::Elem>) -> Poly<K::Elem> {
        let q = self.field.order() as u128;
        let mut h = self.rem(a, m);
        for _ in 0..times {
            h = self.powmod(&h, q, m);
        }
        h
    }

    pub fn pow(&self, a: &Poly<K::Elem>, mut e: u64) -> Poly<K::Elem> {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly<K::Elem>, x: &K::Elem) -> K::Elem {
        a.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    pub fn derivative(&self, a: &Poly<K::Elem>) -> Poly<K::Elem> {
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.mul(c, &self.field.from_int(i as i64)))
            .collect();
        self.trim(coeffs)
    }

    /// Uniform polynomial of degree at most `deg_bound`.
    pub fn random(&self, deg_bound: usize, rng: &mut dyn RngCore) -> Poly<K::Elem> {
        let coeffs = (0..=deg_bound).map(|_| self.field.random(rng)).collect();
        self.trim(coeffs)
    }

    /// Uniform monic polynomial of exact degree `deg`.
    pub fn random_monic(&self, deg: usize, rng: &mut dyn RngCore) -> Poly<K::Elem> {
        let mut coeffs: Vec<_> = (0..deg).map(|_| self.field.random(rng)).collect();
        coeffs.push(self.field.one());
        Poly { coeffs }
    }

    /// `(a o b)(X) = a(b(X))`.
    pub fn compose(&self, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
        a.coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, b), &self.constant(c.clone())))
    }

    /// Product of `X - r` over the given roots.
    pub fn from_roots(&self, roots: &[K::Elem]) -> Poly<K::Elem> {
        roots.iter().fold(self.one(), |acc, r| {
            self.mul(&acc, &self.from_coeffs(vec![self.field.neg(r), self.field.one()]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fq;

    fn ring5() -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(5).unwrap())
    }

    #[test]
    fn gcd_examples() {
        let r = ring5();
        let x2m1 = r.from_coeffs(vec![4, 0, 1]);
        let xm1 = r.from_coeffs(vec![4, 1]);
        assert_eq!(r.gcd(&x2m1, &xm1), xm1);
        let f = r.from_coeffs(vec![2, 0, 3]);
        assert_eq!(r.gcd(&f, &r.zero()), r.monic(&f));
        assert!(r.gcd(&r.zero(), &r.zero()).is_zero());
        // X^4 + 4X^3 + 1 and X are coprime
        let g = r.from_coeffs(vec![1, 0, 0, 4, 1]);
        assert!(r.is_one(&r.gcd(&g, &r.x())));
    }

    #[test]
    fn ordering_is_degree_first() {
        let r = ring5();
        let a = r.from_coeffs(vec![4, 1]);
        let b = r.from_coeffs(vec![0, 0, 1]);
        let c = r.from_coeffs(vec![0, 2]);
        assert!(a < b);
        assert!(a < c);
        assert!(r.zero() < a);
    }

    #[test]
    fn ext_gcd_bezout() {
        let r = ring5();
        let a = r.from_coeffs(vec![1, 2, 3, 4]);
        let b = r.from_coeffs(vec![3, 0, 1]);
        let (g, s, t) = r.ext_gcd(&a, &b);
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
    }

    #[test]
    fn divrem_reconstructs() {
        let r = ring5();
        let a = r.from_coeffs(vec![1, 2, 3, 4, 0, 2]);
        let b = r.from_coeffs(vec![3, 0, 2]);
        let (q, rem) = r.divrem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.deg() < b.deg());
        assert_eq!(r.rem(&a, &b), rem);
    }
}
