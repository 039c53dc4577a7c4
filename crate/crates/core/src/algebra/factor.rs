//! Factorization over finite fields: squarefree decomposition,
//! distinct-degree and equal-degree (Cantor–Zassenhaus) splitting.

use rand::RngCore;

use super::field::{prime_factors, Field};
use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

/// A factorization `lc * prod f_i^{e_i}` with monic irreducible `f_i`
/// sorted by the polynomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<E> {
    pub unit: E,
    pub factors: Vec<(Poly<E>, u32)>,
}

impl<K: Field> PolyRing<K> {
    /// The `idx`-th monic polynomial of degree `deg`, digits of `idx` in
    /// base `Q` giving the lower coefficients.
    pub fn monic_from_index(&self, deg: usize, mut idx: u64) -> Poly<K::Elem>
    where
        K: IndexedField,
    {
        let q = self.field().order();
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(self.field().element(idx % q));
            idx /= q;
        }
        coeffs.push(self.field().one());
        self.from_coeffs(coeffs)
    }

    /// Rabin's test.
    pub fn is_irreducible(&self, f: &Poly<K::Elem>) -> bool {
        let n = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let x = self.x();
        let f = self.monic(f);
        let mut frob = vec![x.clone()];
        // frob[i] = X^{Q^i} mod f
        for i in 1..=n {
            let next = self.frobenius_mod(&frob[i - 1], 1, &f);
            frob.push(next);
        }
        if frob[n] != x {
            return false;
        }
        for r in prime_factors(n as u64) {
            let h = self.sub(&frob[n / r as usize], &x);
            if !self.is_one(&self.gcd(&h, &f)) {
                return false;
            }
        }
        true
    }

    fn pth_root_poly(&self, f: &Poly<K::Elem>) -> Poly<K::Elem> {
        let p = self.field().characteristic() as usize;
        let coeffs = f
            .coeffs()
            .iter()
            .step_by(p)
            .map(|c| self.field().pth_root(c))
            .collect();
        self.from_coeffs(coeffs)
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
    /// `f = prod g^e`, each `g` squarefree (not necessarily irreducible).
    pub fn squarefree(&self, f: &Poly<K::Elem>) -> Vec<(Poly<K::Elem>, u32)> {
        let mut out = Vec::new();
        self.squarefree_into(&self.monic(f), 1, &mut out);
        out
    }

    fn squarefree_into(&self, f: &Poly<K::Elem>, mult: u32, out: &mut Vec<(Poly<K::Elem>, u32)>) {
        if f.degree().unwrap_or(0) == 0 {
            return;
        }
        let d = self.derivative(f);
        let mut a = self.gcd(f, &d);
        let mut b = self.div_exact(f, &a).unwrap();
        let mut i = 1;
        while !self.is_one(&b) {
            let c = self.gcd(&a, &b);
            let y = self.div_exact(&b, &c).unwrap();
            if !self.is_one(&y) {
                out.push((y, i * mult));
            }
            a = self.div_exact(&a, &c).unwrap();
            b = c;
            i += 1;
        }
        if !self.is_one(&a) {
            let p = self.field().characteristic() as u32;
            let root = self.pth_root_poly(&a);
            self.squarefree_into(&root, mult * p, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial,
    /// stopping after degree `max_deg`. Returns the `(product, degree)`
    /// pairs and the unfactored remainder (all of whose irreducible
    /// factors have degree `> max_deg`).
    pub fn ddf(
        &self,
        f: &Poly<K::Elem>,
        max_deg: usize,
    ) -> (Vec<(Poly<K::Elem>, usize)>, Poly<K::Elem>) {
        let mut rest = self.monic(f);
        let mut out = Vec::new();
        let x = self.x();
        let mut h = x.clone();
        let mut i = 0;
        while i < max_deg {
            let d = rest.degree().unwrap_or(0);
            if d < 2 * (i + 1) {
                // whatever is left is irreducible
                if d > 0 && d <= max_deg && d > i {
                    out.push((rest.clone(), d));
                    rest = self.one();
                }
                break;
            }
            i += 1;
            h = self.frobenius_mod(&h, 1, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if !self.is_one(&g) {
                rest = self.div_exact(&rest, &g).unwrap();
                h = self.rem(&h, &rest);
                out.push((g, i));
            }
        }
        (out, rest)
    }

    /// Split a monic squarefree product of irreducibles of degree `d`.
    pub fn edf(&self, f: &Poly<K::Elem>, d: usize, rng: &mut dyn RngCore) -> Vec<Poly<K::Elem>> {
        let n = f.degree().unwrap_or(0);
        if n == 0 {
            return Vec::new();
        }
        if n == d {
            return vec![self.monic(f)];
        }
        let p = self.field().characteristic();
        let q = self.field().order();
        loop {
            let a = self.random(n - 1, rng);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let candidate = if p == 2 {
                // trace map a + a^2 + ... + a^{2^{kd-1}}
                let k = q.trailing_zeros() as usize * d;
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..k {
                    t = self.mulmod(&t, &t, f);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                // a^{(Q^d - 1)/2} = (prod_{i<d} a^{Q^i})^{(Q-1)/2}
                let mut prod = self.rem(&a, f);
                let mut t = prod.clone();
                for _ in 1..d {
                    t = self.frobenius_mod(&t, 1, f);
                    prod = self.mulmod(&prod, &t, f);
                }
                let s = self.powmod(&prod, ((q - 1) / 2) as u128, f);
                self.sub(&s, &self.one())
            };
            let g = self.gcd(&candidate, f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.div_exact(f, &g).unwrap();
                let mut out = self.edf(&g, d, rng);
                out.extend(self.edf(&h, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization of a nonzero polynomial.
    pub fn factor(&self, f: &Poly<K::Elem>, rng: &mut dyn RngCore) -> Result<Factorization<K::Elem>> {
        let unit = f
            .lc()
            .cloned()
            .ok_or_else(|| Error::domain("cannot factor the zero polynomial"))?;
        let mut factors = Vec::new();
        for (g, e) in self.squarefree(f) {
            let deg = g.degree().unwrap();
            let (parts, rest) = self.ddf(&g, deg);
            debug_assert!(self.is_one(&rest));
            for (prod, d) in parts {
                for h in self.edf(&prod, d, rng) {
                    factors.push((h, e));
                }
            }
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }

    /// Whether every irreducible factor of `f` has degree at most `bound`.
    pub fn is_smooth(&self, f: &Poly<K::Elem>, bound: usize) -> bool {
        if f.is_zero() {
            return false;
        }
        self.squarefree(f).iter().all(|(g, _)| {
            let (_, rest) = self.ddf(g, bound);
            self.is_one(&rest)
        })
    }

    /// Factorization if `f` is `bound`-smooth, otherwise `None`.
    pub fn factor_if_smooth(
        &self,
        f: &Poly<K::Elem>,
        bound: usize,
        rng: &mut dyn RngCore,
    ) -> Option<Factorization<K::Elem>> {
        let unit = f.lc()?.clone();
        let sqf = self.squarefree(f);
        let mut staged = Vec::new();
        for (g, e) in &sqf {
            let (parts, rest) = self.ddf(g, bound);
            if !self.is_one(&rest) {
                return None;
            }
            staged.push((parts, *e));
        }
        let mut factors = Vec::new();
        for (parts, e) in staged {
            for (prod, d) in parts {
                for h in self.edf(&prod, d, rng) {
                    factors.push((h, e));
                }
            }
        }
        factors.sort();
        Some(Factorization { unit, factors })
    }

    /// Distinct roots of `f` in the coefficient field, sorted.
    pub fn roots(&self, f: &Poly<K::Elem>, rng: &mut dyn RngCore) -> Vec<K::Elem> {
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic(f);
        let xq = self.frobenius_mod(&self.x(), 1, &f);
        let g = self.gcd(&self.sub(&xq, &self.x()), &f);
        let mut roots: Vec<K::Elem> = self
            .edf(&g, 1, rng)
            .into_iter()
            .map(|lin| self.field().neg(&lin.coeffs()[0]))
            .collect();
        roots.sort();
        roots
    }

    /// Number of distinct roots of `f` in the degree-`ext` extension of
    /// the coefficient field.
    pub fn count_roots_in_extension(&self, f: &Poly<K::Elem>, ext: usize) -> usize {
        if f.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let f = self.monic(f);
        let h = self.frobenius_mod(&self.x(), ext, &f);
        self.gcd(&self.sub(&h, &self.x()), &f).degree().unwrap_or(0)
    }
}

/// A field whose elements can be enumerated by index.
pub trait IndexedField: Field {
    fn element(&self, idx: u64) -> Self::Elem;
    fn index_of(&self, e: &Self::Elem) -> u64;
}

impl IndexedField for super::Fq {
    fn element(&self, idx: u64) -> u32 {
        idx as u32
    }

    fn index_of(&self, e: &u32) -> u64 {
        *e as u64
    }
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`
/// (necklace formula).
pub fn count_irreducibles(q: u64, d: u32) -> u64 {
    fn mobius(mut n: u64) -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e == 0 {
            total += mobius((d / e) as u64) as i128 * (q as i128).pow(e);
        }
    }
    (total / d as i128) as u64
}

impl<K: IndexedField> PolyRing<K> {
    /// All monic irreducible polynomials of degree at most `bound`, in
    /// nondecreasing degree order (and polynomial order within a degree).
    pub fn irreducibles_up_to(&self, bound: usize) -> impl Iterator<Item = Poly<K::Elem>> + '_ {
        (1..=bound).flat_map(move |deg| self.irreducibles_of_degree(deg))
    }

    /// Monic irreducible polynomials of degree exactly `deg`.
    pub fn irreducibles_of_degree(&self, deg: usize) -> impl Iterator<Item = Poly<K::Elem>> + '_ {
        let q = self.field().order();
        (0..q.pow(deg as u32)).filter_map(move |idx| {
            let f = self.monic_from_index(deg, idx);
            self.is_irreducible(&f).then_some(f)
        })
    }
}
