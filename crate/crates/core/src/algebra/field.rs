//! Finite fields of machine-word size.
//!
//! [`Fq`] is the base field `F_{p^k}`; its elements are stored as `u32`
//! indices whose base-`p` digits are the coefficients of the element in
//! the power basis `1, t, ..., t^{k-1}` of `F_p[t]/(modulus)`.
//! Multiplication in proper extensions goes through exp/log tables.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// The operations every coefficient field needs to support.
///
/// Implemented by the base field [`Fq`] and by residue fields
/// `F_q[X]/(u)` (see [`super::ResidueField`]).
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Ord + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of an integer under `Z -> F`.
    fn from_int(&self, k: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> u64;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The unique `p`-th root, `a^(order/p)`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, (self.order() / self.characteristic()) as u128)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest field order handled with tables.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Debug)]
struct Tables {
    // exp has 2(q-1) entries so that exp[log a + log b] never wraps
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field `F_{p^k}`.
#[derive(Clone, Debug)]
pub struct Fq {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

impl Fq {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// `F_{p^k}`; when `modulus` is absent for `k > 1` the first monic
    /// irreducible polynomial in enumeration order is used.
    /// `modulus` is given little-endian including its leading 1.
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::domain(format!("field order {p}^{k} exceeds word-size tables")))?
            as u32;
        if k == 1 {
            if let Some(m) = &modulus {
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::domain("modulus of a prime field must be monic linear"));
                }
            }
            return Ok(Fq {
                p,
                k,
                q,
                modulus: vec![0, 1],
                tables: None,
            });
        }
        let base = Fq::prime(p)?;
        let ring = super::PolyRing::new(base);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::domain("field modulus must be monic of degree k with residues mod p"));
                }
                let poly = ring.from_coeffs(m.clone());
                if !ring.is_irreducible(&poly) {
                    return Err(Error::domain("field modulus is not irreducible"));
                }
                m
            }
            None => {
                let mut found = None;
                for idx in 0..(p as u64).pow(k) {
                    let poly = ring.monic_from_index(k as usize, idx);
                    if ring.is_irreducible(&poly) {
                        found = Some(poly.coeffs().to_vec());
                        break;
                    }
                }
                found.expect("irreducible polynomials exist in every degree")
            }
        };
        let mut field = Fq {
            p,
            k,
            q,
            modulus,
            tables: None,
        };
        field.build_tables();
        Ok(field)
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    // schoolbook product of two residues in F_p[t]/(modulus), used only
    // while building the tables
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for i in 0..k {
                let sub = c * self.modulus[i] as u64 % p;
                prod[top - k + i] = (prod[top - k + i] + p - sub) % p;
            }
            prod[top] = 0;
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.undigits(&digits)
    }

    fn build_tables(&mut self) {
        let q = self.q as u64;
        let factors = prime_factors(q - 1);
        let slow_pow = |f: &Fq, a: u32, mut e: u64| {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = f.slow_mul(acc, base);
                }
                base = f.slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (2..self.q)
            .find(|&g| factors.iter().all(|&r| slow_pow(self, g, (q - 1) / r) != 1))
            .expect("multiplicative group is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        self.tables = Some(Arc::new(Tables { exp, log }));
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Little-endian modulus coefficients including the leading one.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient vector (length `k`) of an element.
    pub fn to_coeffs(&self, a: u32) -> Vec<u32> {
        self.digits(a)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::domain("coefficient vector does not describe a field element"));
        }
        Ok(self.undigits(coeffs))
    }

    /// The generator `t` of `F_p[t]/(modulus)` (equal to 0 when k = 1
    /// is meaningless, so only call for proper extensions).
    pub fn t(&self) -> u32 {
        if self.k == 1 {
            0
        } else {
            self.p
        }
    }

    /// Checked inverse.
    pub fn try_inv(&self, a: u32) -> Result<u32> {
        self.check(a)?;
        self.inv(&a).ok_or_else(|| Error::domain("inversion of zero"))
    }

    /// Reject an integer that is not a residue of this field.
    pub fn check(&self, a: u32) -> Result<()> {
        if a >= self.q {
            Err(Error::usage(format!("{a} is not an element of F_{}", self.q)))
        } else {
            Ok(())
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

impl Field for Fq {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let (mut a, mut b) = (*a, *b);
            let mut out = 0;
            let mut scale = 1;
            while a > 0 || b > 0 {
                out += ((a % self.p + b % self.p) % self.p) * scale;
                a /= self.p;
                b /= self.p;
                scale *= self.p;
            }
            out
        }
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if self.k == 1 {
            if *a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            *a
        } else {
            let mut a = *a;
            let mut out = 0;
            let mut scale = 1;
            while a > 0 {
                out += ((self.p - a % self.p) % self.p) * scale;
                a /= self.p;
                scale *= self.p;
            }
            out
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            if a >= b {
                a - b
            } else {
                a + self.p - b
            }
        } else {
            self.add(a, &self.neg(b))
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            None => ((*a as u64 * *b as u64) % self.p as u64) as u32,
            Some(t) => {
                if *a == 0 || *b == 0 {
                    0
                } else {
                    t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize]
                }
            }
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        match &self.tables {
            None => Some(self.pow(a, (self.p - 2) as u128)),
            Some(t) => {
                let n = self.q - 1;
                Some(t.exp[((n - t.log[*a as usize]) % n) as usize])
            }
        }
    }

    fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn order(&self) -> u64 {
        self.q as u64
    }

    fn random(&self, rng: &mut dyn RngCore) -> u32 {
        rng.gen_range(0..self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f = Fq::prime(5).unwrap();
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.pow(&2, 4), 1);
        assert!(f.try_inv(0).is_err());
        assert!(f.check(7).is_err());
    }

    #[test]
    fn extension_field_reduction() {
        // F_8 = F_2[t]/(t^3 + t + 1)
        let f = Fq::new(2, 3, Some(vec![1, 1, 0, 1])).unwrap();
        let t = f.t();
        let t2 = f.mul(&t, &t);
        // t * t^2 = t^3 = t + 1
        assert_eq!(f.to_coeffs(f.mul(&t, &t2)), vec![1, 1, 0]);
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(Fq::new(2, 2, Some(vec![1, 0, 1])).is_err());
        assert!(Fq::new(4, 1, None).is_err());
    }

    #[test]
    fn extension_field_axioms() {
        for (p, k) in [(2, 4), (3, 2), (5, 2)] {
            let f = Fq::new(p, k, None).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                assert_eq!(f.pow(&a, f.order() as u128), a);
                for b in f.elements().step_by(3) {
                    assert_eq!(f.sub(&f.add(&a, &b), &b), a);
                }
            }
        }
    }
}
