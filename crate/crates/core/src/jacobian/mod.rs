//! Degree-zero divisor class group via ideal arithmetic in the
//! coordinate ring `A = F_q[X][Y]/(C)`.
//!
//! An ideal is stored as the lower-triangular Hermite normal form of its
//! `F_q[X]`-basis with respect to `1, Y, ..., Y^{n-1}`. The class of an
//! effective ideal `I` is `[div_aff(I) - deg(I) * inf]`; every class has
//! a unique effective representative of least degree (at most `g`),
//! which is what [`Jacobian::reduce`] returns.

use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::linear::{left_kernel, Echelon};
use crate::algebra::{Field, FqPoly, FqRing, PolyRing, ResidueField};
use crate::curve::{CurveModel, Divisor, Place};
use crate::error::{Error, Result};

/// Element of `A`: coefficients of `1, Y, ..., Y^{n-1}`.
pub type Elem = Vec<FqPoly>;

/// An ideal of `A` in canonical Hermite normal form. Row `j` has its
/// monic pivot in column `j`, zeros to the right, and entries in column
/// `c < j` reduced modulo the pivot of row `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ideal {
    rows: Vec<Vec<FqPoly>>,
}

impl Ideal {
    pub fn rows(&self) -> &[Vec<FqPoly>] {
        &self.rows
    }

    pub fn diagonal(&self, c: usize) -> &FqPoly {
        &self.rows[c][c]
    }

    /// Degree of the norm, i.e. of the associated effective divisor.
    pub fn degree(&self) -> usize {
        (0..self.rows.len())
            .map(|c| self.diagonal(c).degree().unwrap_or(0))
            .sum()
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == 0
    }
}

#[derive(Clone, Debug)]
pub struct Jacobian {
    model: CurveModel,
    n: usize,
}

impl Jacobian {
    pub fn new(model: &CurveModel) -> Self {
        Jacobian {
            model: model.clone(),
            n: model.n(),
        }
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    fn ring(&self) -> &FqRing {
        self.model.ring()
    }

    pub fn zero_elem(&self) -> Elem {
        vec![self.ring().zero(); self.n]
    }

    /// `c X^i Y^j` as an element, `j < n`.
    pub fn monomial(&self, c: u32, i: usize, j: usize) -> Elem {
        let mut e = self.zero_elem();
        e[j] = self.ring().monomial(c, i);
        e
    }

    /// Reduce a polynomial in `Y` of any degree modulo `C`.
    pub fn elem_from_coeffs(&self, mut coeffs: Vec<FqPoly>) -> Elem {
        let r = self.ring();
        let n = self.n;
        while coeffs.len() > n {
            let top = coeffs.pop().unwrap();
            let k = coeffs.len() - n;
            for j in 0..n {
                let cj = self.model.coeff_y(j);
                coeffs[k + j] = r.sub(&coeffs[k + j], &r.mul(&top, &cj));
            }
        }
        coeffs.resize(n, r.zero());
        coeffs
    }

    pub fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let r = self.ring();
        let mut prod = vec![r.zero(); 2 * self.n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = r.add(&prod[i + j], &r.mul(x, y));
                }
            }
        }
        self.elem_from_coeffs(prod)
    }

    /// Pole order at infinity, which is also the degree of its norm.
    pub fn weight(&self, a: &Elem) -> Option<usize> {
        a.iter()
            .enumerate()
            .filter_map(|(j, c)| c.degree().map(|i| self.model.weight(i, j)))
            .max()
    }

    fn sub_mul(&self, v: &mut Elem, q: &FqPoly, row: &Elem) {
        let r = self.ring();
        for (x, y) in v.iter_mut().zip(row) {
            if !y.is_zero() {
                *x = r.sub(x, &r.mul(q, y));
            }
        }
    }

    /// Hermite normal form of the module spanned by `gens`. When given,
    /// `modulus` must lie in the module; entries are then kept reduced
    /// modulo it.
    pub fn hnf(&self, gens: Vec<Elem>, modulus: Option<&FqPoly>) -> Result<Ideal> {
        let r = self.ring();
        let n = self.n;
        let red = |v: &mut Elem| {
            if let Some(d) = modulus {
                for x in v.iter_mut() {
                    *x = r.rem(x, d);
                }
            }
        };
        let mut pool: Vec<Elem> = gens
            .into_iter()
            .map(|mut v| {
                v.resize(n, r.zero());
                red(&mut v);
                v
            })
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let mut pivots: Vec<Elem> = vec![Vec::new(); n];
        for c in (0..n).rev() {
            let (mut active, rest): (Vec<Elem>, Vec<Elem>) =
                pool.into_iter().partition(|v| !v[c].is_zero());
            pool = rest;
            if let Some(d) = modulus {
                let mut e = self.zero_elem();
                e[c] = d.clone();
                active.push(e);
            }
            if active.is_empty() {
                return Err(Error::integrity("generators do not span a full-rank module"));
            }
            while active.len() > 1 {
                let (i, _) = active
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, v)| v[c].deg())
                    .unwrap();
                let p = active.swap_remove(i);
                let mut next = vec![];
                for mut v in active.drain(..) {
                    let q = r.divrem(&v[c], &p[c]).0;
                    self.sub_mul(&mut v, &q, &p);
                    red(&mut v);
                    if !v[c].is_zero() {
                        next.push(v);
                    } else if v.iter().any(|x| !x.is_zero()) {
                        pool.push(v);
                    }
                }
                next.push(p);
                active = next;
            }
            let mut p = active.pop().unwrap();
            let inv = r.field().inv(p[c].lc().unwrap()).unwrap();
            for x in p.iter_mut() {
                *x = r.scale(x, &inv);
            }
            if let Some(d) = modulus {
                for x in p[..c].iter_mut() {
                    *x = r.rem(x, d);
                }
            }
            pivots[c] = p;
        }
        for j in 0..n {
            for c in (0..j).rev() {
                let q = r.divrem(&pivots[j][c], &pivots[c][c]).0;
                if !q.is_zero() {
                    let pc = pivots[c].clone();
                    self.sub_mul(&mut pivots[j], &q, &pc);
                }
            }
        }
        Ok(Ideal { rows: pivots })
    }

    pub fn norm(&self, ideal: &Ideal) -> FqPoly {
        let r = self.ring();
        (0..self.n).fold(r.one(), |acc, c| r.mul(&acc, ideal.diagonal(c)))
    }

    pub fn identity(&self) -> Ideal {
        let r = self.ring();
        Ideal {
            rows: (0..self.n)
                .map(|j| {
                    let mut e = self.zero_elem();
                    e[j] = r.one();
                    e
                })
                .collect(),
        }
    }

    /// `f, fY, ..., fY^{n-1}`: an `F_q[X]`-basis of `fA`.
    fn y_multiples(&self, f: &Elem) -> Vec<Elem> {
        let mut out = vec![f.clone()];
        for _ in 1..self.n {
            let mut next = vec![self.ring().zero()];
            next.extend(out.last().unwrap().iter().cloned());
            out.push(self.elem_from_coeffs(next));
        }
        out
    }

    /// The principal ideal `fA`.
    pub fn principal(&self, f: &Elem) -> Result<Ideal> {
        if f.iter().all(|x| x.is_zero()) {
            return Err(Error::domain("the zero element generates no invertible ideal"));
        }
        self.hnf(self.y_multiples(f), None)
    }

    /// The ideal `(u, Y - v)` of an affine place.
    pub fn place_ideal(&self, place: &Place) -> Result<Ideal> {
        let (u, v) = place
            .uv()
            .ok_or_else(|| Error::domain("the place at infinity has no affine ideal"))?;
        if !self.model.vanishes_at(u, v) {
            return Err(Error::domain("(u, Y - v) is not a place of the curve"));
        }
        let r = self.ring();
        let v = r.rem(v, u);
        let mut vj = r.one();
        let mut rows = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut e = self.zero_elem();
            if j == 0 {
                e[0] = u.clone();
            } else {
                vj = r.mulmod(&vj, &v, u);
                e[0] = r.rem(&r.neg(&vj), u);
                e[j] = r.one();
            }
            rows.push(e);
        }
        Ok(Ideal { rows })
    }

    pub fn mul_ideals(&self, a: &Ideal, b: &Ideal) -> Ideal {
        if a.is_unit() {
            return b.clone();
        }
        if b.is_unit() {
            return a.clone();
        }
        let modulus = self.ring().mul(&self.norm(a), &self.norm(b));
        let mut gens = Vec::with_capacity(self.n * self.n);
        for x in &a.rows {
            for y in &b.rows {
                gens.push(self.mul_elem(x, y));
            }
        }
        self.hnf(gens, Some(&modulus))
            .expect("product of full-rank ideals has full rank")
    }

    /// Remainder of `v` modulo the ideal's lattice.
    pub fn rem_elem(&self, ideal: &Ideal, v: &Elem) -> Elem {
        let r = self.ring();
        let mut v = v.clone();
        for c in (0..self.n).rev() {
            if !v[c].is_zero() {
                let q = r.divrem(&v[c], ideal.diagonal(c)).0;
                if !q.is_zero() {
                    self.sub_mul(&mut v, &q, &ideal.rows[c]);
                }
            }
        }
        v
    }

    pub fn contains(&self, ideal: &Ideal, v: &Elem) -> bool {
        self.rem_elem(ideal, v).iter().all(|x| x.is_zero())
    }

    /// Coordinates over `F_q` of a reduced remainder in `A / I`.
    fn coords(&self, ideal: &Ideal, v: &Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(ideal.degree());
        for c in 0..self.n {
            for k in 0..ideal.diagonal(c).degree().unwrap_or(0) {
                out.push(v[c].coeff(k).copied().unwrap_or(0));
            }
        }
        out
    }

    fn monomial_of_weight(&self, w: usize) -> Option<(usize, usize)> {
        let (n, d) = (self.n, self.model.d());
        (0..n).find_map(|j| (w >= d * j && (w - d * j) % n == 0).then(|| ((w - d * j) / n, j)))
    }

    /// A nonzero element of least pole order at infinity in `I`.
    pub fn min_weight_element(&self, ideal: &Ideal) -> (Elem, usize) {
        let field = self.ring().field();
        let mut ech = Echelon::new(field);
        let mut monos = Vec::new();
        for w in 0.. {
            let Some((i, j)) = self.monomial_of_weight(w) else {
                continue;
            };
            monos.push((i, j));
            let rem = self.rem_elem(ideal, &self.monomial(1, i, j));
            if let Some(combo) = ech.insert(self.coords(ideal, &rem)) {
                let mut f = self.zero_elem();
                for (&(i, j), &c) in monos.iter().zip(&combo) {
                    if c != 0 {
                        f[j] = self.ring().add(&f[j], &self.ring().monomial(c, i));
                    }
                }
                return (f, w);
            }
        }
        unreachable!()
    }

    /// `(f) / I` for a nonzero `f` in `I`.
    pub fn quotient(&self, f: &Elem, ideal: &Ideal) -> Result<Ideal> {
        let fa = self.principal(f)?;
        if !self.contains(ideal, f) {
            return Err(Error::domain("f is not in the ideal"));
        }
        let basis: Vec<Elem> = (0..self.n)
            .flat_map(|c| {
                (0..fa.diagonal(c).degree().unwrap_or(0)).map(move |k| (k, c))
            })
            .map(|(k, c)| self.monomial(1, k, c))
            .collect();
        let mat: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| {
                ideal
                    .rows
                    .iter()
                    .flat_map(|row| {
                        let prod = self.rem_elem(&fa, &self.mul_elem(b, row));
                        self.coords(&fa, &prod)
                    })
                    .collect()
            })
            .collect();
        let field = self.ring().field();
        let mut gens: Vec<Elem> = left_kernel(field, &mat)
            .into_iter()
            .map(|k| {
                let mut e = self.zero_elem();
                for (b, c) in basis.iter().zip(k) {
                    if c != 0 {
                        for (x, y) in e.iter_mut().zip(b) {
                            *x = self.ring().add(x, &self.ring().scale(y, &c));
                        }
                    }
                }
                e
            })
            .collect();
        gens.extend(fa.rows.iter().cloned());
        let nf = self.norm(&fa);
        let q = self.hnf(gens, Some(&nf))?;
        let w = self.weight(f).unwrap_or(0);
        if q.degree() + ideal.degree() != w {
            return Err(Error::integrity(format!(
                "quotient degree {} + {} != weight {w}",
                q.degree(),
                ideal.degree()
            )));
        }
        Ok(q)
    }

    /// Reduced representative of `-[I]`.
    pub fn neg(&self, ideal: &Ideal) -> Ideal {
        if ideal.is_unit() {
            return self.identity();
        }
        let (f, _) = self.min_weight_element(ideal);
        self.quotient(&f, ideal).expect("f lies in I")
    }

    /// The unique least-degree effective ideal in the class of `I`.
    pub fn reduce(&self, ideal: &Ideal) -> Ideal {
        self.neg(&self.neg(ideal))
    }

    pub fn add(&self, a: &Ideal, b: &Ideal) -> Ideal {
        self.reduce(&self.mul_ideals(a, b))
    }

    pub fn sub(&self, a: &Ideal, b: &Ideal) -> Ideal {
        self.add(a, &self.neg(b))
    }

    pub fn double(&self, a: &Ideal) -> Ideal {
        self.add(a, a)
    }

    pub fn mul_scalar(&self, a: &Ideal, k: &BigInt) -> Ideal {
        let base = if k.sign() == Sign::Minus {
            self.neg(a)
        } else {
            self.reduce(a)
        };
        let mag = k.magnitude();
        let mut acc = self.identity();
        for i in (0..mag.bits()).rev() {
            acc = self.double(&acc);
            if mag.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    pub fn mul_u64(&self, a: &Ideal, k: u64) -> Ideal {
        self.mul_scalar(a, &BigInt::from(k))
    }

    /// Whether a stored ideal is in canonical form, is an ideal, and
    /// (optionally) is reduced.
    pub fn validate(&self, ideal: &Ideal, require_reduced: bool) -> Result<()> {
        let r = self.ring();
        let bad = |msg: &str| Err(Error::integrity(format!("invalid class representation: {msg}")));
        if ideal.rows.len() != self.n || ideal.rows.iter().any(|row| row.len() != self.n) {
            return bad("wrong shape");
        }
        for j in 0..self.n {
            if !r.is_monic(ideal.diagonal(j)) {
                return bad("pivot not monic");
            }
            for c in 0..self.n {
                let x = &ideal.rows[j][c];
                if c > j && !x.is_zero() {
                    return bad("not lower triangular");
                }
                if c < j && x.deg() >= ideal.diagonal(c).deg() {
                    return bad("entry not reduced");
                }
            }
        }
        if self.n > 1 {
            let y = self.monomial(1, 0, 1);
            if ideal
                .rows
                .iter()
                .any(|row| !self.contains(ideal, &self.mul_elem(row, &y)))
            {
                return bad("not closed under multiplication by Y");
            }
        }
        if require_reduced && &self.reduce(ideal) != ideal {
            return bad("not reduced");
        }
        Ok(())
    }

    /// Exact ideal of an effective divisor (the infinite place is ignored).
    pub fn ideal_of_effective(&self, divisor: &Divisor) -> Result<Ideal> {
        let mut acc = self.identity();
        for (p, e) in divisor.iter().filter(|(p, _)| !p.is_infinite()) {
            if e < 0 {
                return Err(Error::domain("divisor is not effective"));
            }
            let pi = self.place_ideal(p)?;
            for _ in 0..e {
                acc = self.mul_ideals(&acc, &pi);
            }
        }
        Ok(acc)
    }

    /// Reduced class of `D - deg(D) * inf`.
    pub fn class_of(&self, divisor: &Divisor) -> Result<Ideal> {
        let mut acc = self.identity();
        for (p, e) in divisor.iter().filter(|(p, _)| !p.is_infinite()) {
            let pi = self.reduce(&self.place_ideal(p)?);
            acc = self.add(&acc, &self.mul_scalar(&pi, &BigInt::from(e)));
        }
        Ok(acc)
    }

    /// Whether `I` is contained in the place `(u, Y - v)`.
    pub fn in_place(&self, ideal: &Ideal, u: &FqPoly, v: &FqPoly) -> bool {
        let r = self.ring();
        ideal.rows.iter().all(|row| {
            let s = row
                .iter()
                .rev()
                .fold(r.zero(), |acc, x| r.rem(&r.add(&r.mul(&acc, v), x), u));
            s.is_zero()
        })
    }

    /// `I * P^{-1}` for an unramified place `P = (u, Y - v)` containing
    /// `I`, computed as `I * P' / u` where `uA = P P'`.
    pub fn divide_by_place(&self, ideal: &Ideal, u: &FqPoly, v: &FqPoly) -> Result<Ideal> {
        let r = self.ring();
        let k = ResidueField::new(r, u)?;
        let over = PolyRing::new(k.clone());
        let c = self.model.poly().mod_u(&k);
        let lin = over.from_coeffs(vec![k.neg(&k.reduce(v)), k.one()]);
        let (h, rem) = over.divrem(&c, &lin);
        if !rem.is_zero() {
            return Err(Error::domain("(u, Y - v) is not a place of the curve"));
        }
        if over.divides(&lin, &h) {
            return Err(Error::RamifiedPlace);
        }
        let h_elem = self.elem_from_coeffs(h.coeffs().to_vec());
        let comp = self.hnf(self.y_multiples(&h_elem), Some(u))?;
        let prod = self.mul_ideals(ideal, &comp);
        let mut rows = prod.rows.clone();
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                *x = r
                    .div_exact(x, u)
                    .ok_or_else(|| Error::domain("ideal is not contained in the place"))?;
            }
        }
        Ok(Ideal { rows })
    }

    /// All prime ideals above `u`, of any inertia degree:
    /// `(u, h(Y))` for the irreducible factors `h` of `C mod u`.
    pub fn primes_over(&self, u: &FqPoly) -> Result<Vec<Ideal>> {
        let r = self.ring();
        let k = ResidueField::new(r, u)?;
        let over = PolyRing::new(k.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fac = over.factor(&self.model.poly().mod_u(&k), &mut rng)?;
        fac.factors
            .iter()
            .map(|(h, _)| {
                let h = self.elem_from_coeffs(h.coeffs().to_vec());
                self.hnf(self.y_multiples(&h), Some(u))
            })
            .collect()
    }

    /// Places and multiplicities of an effective ideal, or `None` if its
    /// support contains a ramified place or one of inertia degree > 1.
    pub fn decompose(&self, ideal: &Ideal) -> Result<Option<Divisor>> {
        let r = self.ring();
        let mut rest = ideal.clone();
        let mut div = Divisor::zero();
        if rest.is_unit() {
            return Ok(Some(div));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = r.factor(&self.norm(ideal), &mut rng)?;
        for (u, _) in &fac.factors {
            let k = ResidueField::new(r, u)?;
            let over = PolyRing::new(k.clone());
            for v in over.roots(&self.model.poly().mod_u(&k), &mut rng) {
                let ramified = !self.model.is_unramified_at(u, &v);
                while self.in_place(&rest, u, &v) {
                    if ramified {
                        return Ok(None);
                    }
                    rest = self.divide_by_place(&rest, u, &v)?;
                    div.add_term(Place::affine(u.clone(), v.clone()), 1);
                }
            }
        }
        Ok(rest.is_unit().then_some(div))
    }

    /// A class obtained from a random effective divisor of degree `g`.
    pub fn random_class(&self, rng: &mut dyn RngCore) -> Ideal {
        let g = self.model.genus();
        if g == 0 {
            return self.identity();
        }
        let r = self.ring();
        loop {
            let u = r.random_monic(g, rng);
            let Ok(fac) = r.factor(&u, rng) else { continue };
            let mut div = Divisor::zero();
            let mut ok = true;
            for (w, e) in &fac.factors {
                let k = ResidueField::new(r, w).expect("irreducible");
                let over = PolyRing::new(k.clone());
                let roots: Vec<FqPoly> = over
                    .roots(&self.model.poly().mod_u(&k), rng)
                    .into_iter()
                    .filter(|v| self.model.is_unramified_at(w, v))
                    .collect();
                if roots.is_empty() {
                    ok = false;
                    break;
                }
                let v = roots[rng.gen_range(0..roots.len())].clone();
                div.add_term(Place::affine(w.clone(), v), *e as i64);
            }
            if ok {
                return self.class_of(&div).expect("valid places");
            }
        }
    }

    /// Least `x` in `[0, bound)` with `x * base = target`, by baby-step
    /// giant-step.
    pub fn bsgs(&self, base: &Ideal, target: &Ideal, bound: u64) -> Option<u64> {
        let m = (bound as f64).sqrt().ceil().max(1.0) as u64;
        let mut table: HashMap<Ideal, u64> = HashMap::new();
        let base = self.reduce(base);
        let mut cur = self.identity();
        for j in 0..m {
            table.entry(cur.clone()).or_insert(j);
            cur = self.add(&cur, &base);
        }
        let giant = self.neg(&self.mul_u64(&base, m));
        let mut cur = self.reduce(target);
        for i in 0..=m {
            if let Some(&j) = table.get(&cur) {
                let x = i * m + j;
                return (x < bound).then_some(x);
            }
            cur = self.add(&cur, &giant);
        }
        None
    }

    /// Order of a class, given a multiple of it.
    pub fn order_dividing(&self, a: &Ideal, multiple: u64) -> u64 {
        let mut order = multiple;
        for p in crate::algebra::prime_factors(multiple) {
            while order % p == 0 && self.mul_u64(a, order / p).is_unit() {
                order /= p;
            }
        }
        order
    }

    pub fn is_zero_class(&self, a: &Ideal) -> bool {
        self.reduce(a).is_unit()
    }
}

#[cfg(test)]
mod tests;
