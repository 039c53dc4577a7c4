//! Polynomials in `Y` with coefficients in `F_q[X]`: resultants and
//! u-adic root lifting.

use super::field::{Field, Fq};
use super::poly::PolyRing;
use super::residue::{FqPoly, ResidueField};
use crate::error::{Error, Result};

/// `sum_j coeffs[j](X) * Y^j`, no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    coeffs: Vec<FqPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<FqPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    /// From `(i, j, c)` triples meaning `c X^i Y^j`; repeated monomials add up.
    pub fn from_terms(ring: &PolyRing<Fq>, terms: &[(usize, usize, u32)]) -> Self {
        let ny = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut coeffs = vec![ring.zero(); ny];
        for &(i, j, c) in terms {
            coeffs[j] = ring.add(&coeffs[j], &ring.monomial(c, i));
        }
        BiPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[FqPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&FqPoly> {
        self.coeffs.get(j)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_x(&self) -> i64 {
        self.coeffs.iter().map(|c| c.deg()).max().unwrap_or(-1)
    }

    pub fn d_dy(&self, ring: &PolyRing<Fq>) -> BiPoly {
        let f = ring.field();
        BiPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| ring.scale(c, &f.from_int(j as i64)))
                .collect(),
        )
    }

    pub fn d_dx(&self, ring: &PolyRing<Fq>) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|c| ring.derivative(c)).collect())
    }

    /// Specialize `X = x0` to get a polynomial in `Y` over `F_q`.
    pub fn at_x(&self, ring: &PolyRing<Fq>, x0: u32) -> FqPoly {
        ring.from_coeffs(self.coeffs.iter().map(|c| ring.eval(c, &x0)).collect())
    }

    /// Image in `(F_q[X]/(u))[Y]`.
    pub fn mod_u(&self, k: &ResidueField) -> super::Poly<FqPoly> {
        let over = PolyRing::new(k.clone());
        over.from_coeffs(self.coeffs.iter().map(|c| k.reduce(c)).collect())
    }

    /// `F(X, v(X)) mod m`.
    pub fn eval_y_mod(&self, ring: &PolyRing<Fq>, v: &FqPoly, m: &FqPoly) -> FqPoly {
        let v = ring.rem(v, m);
        self.coeffs.iter().rev().fold(ring.zero(), |acc, c| {
            ring.rem(&ring.add(&ring.mul(&acc, &v), c), m)
        })
    }

    /// `F(X, v(X))` exactly.
    pub fn eval_y(&self, ring: &PolyRing<Fq>, v: &FqPoly) -> FqPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, v), c))
    }
}

fn sylvester_rows<T: Clone>(f: &[T], g: &[T], zero: &T) -> Vec<Vec<T>> {
    // f, g given little-endian; rows use descending powers
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

fn check_resultant_args(f: &BiPoly, g: &BiPoly) -> Result<()> {
    if f.deg_y().unwrap_or(0) == 0 && g.deg_y().unwrap_or(0) == 0 {
        return Err(Error::domain("resultant needs positive Y-degree in at least one argument"));
    }
    Ok(())
}

/// Fraction-free (Bareiss) determinant over `F_q[X]`.
fn bareiss_det(ring: &PolyRing<Fq>, mut m: Vec<Vec<FqPoly>>) -> FqPoly {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    let mut sign_neg = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_neg = !sign_neg;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(&ring.mul(&m[k][k], &m[i][j]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = ring.div_exact(&t, &prev).expect("Bareiss division is exact");
            }
            m[i][k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_neg {
        ring.neg(&det)
    } else {
        det
    }
}

/// `Res_Y(f, g)` as the Sylvester determinant over `F_q[X]`.
///
/// Convention: rows of `f` first, coefficients in descending `Y`
/// powers, so that `Res(f, g) = lc(f)^{deg g} * prod g(alpha)` over the
/// roots `alpha` of `f`.
pub fn resultant_sylvester(ring: &PolyRing<Fq>, f: &BiPoly, g: &BiPoly) -> Result<FqPoly> {
    check_resultant_args(f, g)?;
    if f.is_zero() || g.is_zero() {
        return Ok(ring.zero());
    }
    let rows = sylvester_rows(f.coeffs(), g.coeffs(), &ring.zero());
    Ok(bareiss_det(ring, rows))
}

fn det_fq(field: &Fq, mut m: Vec<Vec<u32>>) -> u32 {
    let n = m.len();
    let mut det = field.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            m.swap(piv, k);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[k][k]);
        let inv = field.inv(&m[k][k]).unwrap();
        for i in k + 1..n {
            if m[i][k] == 0 {
                continue;
            }
            let factor = field.mul(&m[i][k], &inv);
            for j in k..n {
                let t = field.mul(&factor, &m[k][j]);
                m[i][j] = field.sub(&m[i][j], &t);
            }
        }
    }
    det
}

/// Degree bound for `deg_X Res_Y(f, g)`.
pub fn resultant_degree_bound(f: &BiPoly, g: &BiPoly) -> usize {
    let m = f.deg_y().unwrap_or(0);
    let n = g.deg_y().unwrap_or(0);
    let dx = |p: &BiPoly| p.deg_x().max(0) as usize;
    n * dx(f) + m * dx(g)
}

/// `Res_Y(f, g)` by evaluation at `X = 0, 1, ...` and interpolation.
/// Returns `None` when the field has too few points for the degree bound.
pub fn resultant_interpolation(ring: &PolyRing<Fq>, f: &BiPoly, g: &BiPoly) -> Result<Option<FqPoly>> {
    check_resultant_args(f, g)?;
    if f.is_zero() || g.is_zero() {
        return Ok(Some(ring.zero()));
    }
    let field = ring.field();
    let bound = resultant_degree_bound(f, g);
    if (field.order() as usize) < bound + 1 {
        return Ok(None);
    }
    let points: Vec<u32> = (0..=bound as u32).collect();
    let values: Vec<u32> = points
        .iter()
        .map(|&x0| {
            // keep the formal degrees: evaluate coefficientwise, no trimming
            let fv: Vec<u32> = f.coeffs().iter().map(|c| ring.eval(c, &x0)).collect();
            let gv: Vec<u32> = g.coeffs().iter().map(|c| ring.eval(c, &x0)).collect();
            det_fq(field, sylvester_rows(&fv, &gv, &0))
        })
        .collect();
    Ok(Some(interpolate(ring, &points, &values)))
}

/// Lagrange interpolation through distinct points.
pub fn interpolate(ring: &PolyRing<Fq>, xs: &[u32], ys: &[u32]) -> FqPoly {
    let field = ring.field();
    let mut acc = ring.zero();
    for (i, (&xi, yi)) in xs.iter().zip(ys).enumerate() {
        if *yi == 0 {
            continue;
        }
        let mut basis = ring.one();
        let mut denom = field.one();
        for (j, &xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = ring.mul(&basis, &ring.from_coeffs(vec![field.neg(&xj), 1]));
            denom = field.mul(&denom, &field.sub(&xi, &xj));
        }
        let c = field.mul(yi, &field.inv(&denom).unwrap());
        acc = ring.add(&acc, &ring.scale(&basis, &c));
    }
    acc
}

/// `Res_Y(f, g)`: interpolation when the field is large enough, the
/// Sylvester determinant otherwise.
pub fn resultant(ring: &PolyRing<Fq>, f: &BiPoly, g: &BiPoly) -> Result<FqPoly> {
    match resultant_interpolation(ring, f, g)? {
        Some(r) => Ok(r),
        None => resultant_sylvester(ring, f, g),
    }
}

/// Newton lifting of a simple root `v0` of `G(X, Y) mod u` to a root
/// modulo `u^e`.
pub fn lift_root(
    ring: &PolyRing<Fq>,
    g: &BiPoly,
    u: &FqPoly,
    v0: &FqPoly,
    e: usize,
) -> Result<FqPoly> {
    if e == 0 {
        return Err(Error::domain("lifting precision must be at least 1"));
    }
    if !g.eval_y_mod(ring, v0, u).is_zero() {
        return Err(Error::domain("v0 is not a root of G modulo u"));
    }
    let dg = g.d_dy(ring);
    if dg.eval_y_mod(ring, v0, u).is_zero() {
        return Err(Error::RamifiedPlace);
    }
    let mut v = ring.rem(v0, u);
    let mut prec = 1;
    while prec < e {
        prec = (2 * prec).min(e);
        let modulus = ring.pow(u, prec as u64);
        let val = g.eval_y_mod(ring, &v, &modulus);
        let der = dg.eval_y_mod(ring, &v, &modulus);
        let inv = ring
            .inv_mod(&der, &modulus)
            .ok_or_else(|| Error::integrity("derivative not invertible during lifting"))?;
        v = ring.rem(&ring.sub(&v, &ring.mul(&val, &inv)), &modulus);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (PolyRing<Fq>, BiPoly) {
        let ring = PolyRing::new(Fq::prime(5).unwrap());
        // Y^3 + X^4 + 1
        let c = BiPoly::from_terms(&ring, &[(0, 3, 1), (4, 0, 1), (0, 0, 1)]);
        (ring, c)
    }

    #[test]
    fn resultant_examples() {
        let (ring, c) = setup();
        let y = BiPoly::from_terms(&ring, &[(0, 1, 1)]);
        let y_plus_x = BiPoly::from_terms(&ring, &[(0, 1, 1), (1, 0, 1)]);
        let y_minus_4 = BiPoly::from_terms(&ring, &[(0, 1, 1), (0, 0, 1)]);
        for res in [resultant_sylvester, resultant] {
            assert_eq!(res(&ring, &y, &c).unwrap(), ring.from_coeffs(vec![1, 0, 0, 0, 1]));
            assert_eq!(res(&ring, &y_plus_x, &c).unwrap(), ring.from_coeffs(vec![1, 0, 0, 4, 1]));
            assert_eq!(res(&ring, &y_minus_4, &c).unwrap(), ring.monomial(1, 4));
        }
    }

    #[test]
    fn resultant_of_constants_is_domain_error() {
        let (ring, _) = setup();
        let a = BiPoly::from_terms(&ring, &[(2, 0, 1)]);
        let b = BiPoly::from_terms(&ring, &[(1, 0, 3)]);
        assert!(matches!(resultant(&ring, &a, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn lift_root_examples() {
        let (ring, c) = setup();
        let x = ring.x();
        let v = lift_root(&ring, &c, &x, &ring.constant(4), 5).unwrap();
        assert_eq!(v, ring.from_coeffs(vec![4, 0, 0, 0, 3]));
        let v1 = lift_root(&ring, &c, &x, &ring.constant(4), 1).unwrap();
        assert_eq!(v1, ring.constant(4));
        // Y^2 - X is ramified above X
        let g = BiPoly::from_terms(&ring, &[(0, 2, 1), (1, 0, 4)]);
        assert!(matches!(
            lift_root(&ring, &g, &x, &ring.zero(), 3),
            Err(Error::RamifiedPlace)
        ));
    }

    #[test]
    fn interpolation_agrees_with_sylvester_on_f7() {
        let ring = PolyRing::new(Fq::prime(7).unwrap());
        let f = BiPoly::from_terms(&ring, &[(0, 2, 1), (1, 1, 3), (0, 0, 2)]);
        let g = BiPoly::from_terms(&ring, &[(0, 2, 1), (2, 0, 1), (0, 1, 5)]);
        let a = resultant_sylvester(&ring, &f, &g).unwrap();
        let b = resultant_interpolation(&ring, &f, &g).unwrap().unwrap();
        assert_eq!(a, b);
    }
}
