//! Plane C_ab models `Y^n + F(X, Y)` over `F_q`: validation, genus,
//! places, point counts and the zeta function.

mod places;
mod zeta;

pub use places::{build_factor_base, places_up_to, Divisor, FactorBase, FactorBaseLine, Place};
pub use zeta::{
    class_number_bounds, counts_from_lpoly, zeta_from_counts, BoundsMode, ClassNumberBounds,
    ZetaData,
};

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    resultant, BiPoly, Field, FieldDescriptor, Fq, FqPoly, FqRing, PolyRing, ResidueField,
};
use crate::error::{Error, Rejection, Result};

/// A monomial coefficient as written in a curve file: either the
/// integer encoding of a field element or its coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Residue(u32),
    Vector(Vec<u32>),
}

/// Raw curve description, as stored in a curve file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default)]
    pub field_modulus: Option<Vec<u32>>,
    pub n: usize,
    pub d: usize,
    /// `[i, j, c]` for `c X^i Y^j`, `j < n`; the leading `Y^n` is implicit.
    pub monomials: Vec<(usize, usize, CoeffSpec)>,
}

fn one() -> u32 {
    1
}

impl CurveSpec {
    /// Convenience constructor for prime fields.
    pub fn prime(p: u32, n: usize, d: usize, monomials: &[(usize, usize, u32)]) -> Self {
        CurveSpec {
            p,
            k: 1,
            field_modulus: None,
            n,
            d,
            monomials: monomials
                .iter()
                .map(|&(i, j, c)| (i, j, CoeffSpec::Residue(c)))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Largest `q^i` for which point counting is attempted by default.
pub const DEFAULT_COUNT_CEILING: u64 = 1 << 22;

/// A validated C_ab curve `Y^n + F(X, Y)`.
#[derive(Clone, Debug)]
pub struct CurveModel {
    field: Fq,
    ring: FqRing,
    n: usize,
    d: usize,
    monomials: Vec<(usize, usize, u32)>,
    poly: BiPoly,
    genus: usize,
}

impl CurveModel {
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn ring(&self) -> &FqRing {
        &self.ring
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `(i, j, c)` terms of `F`, sorted, without the leading `Y^n`.
    pub fn monomials(&self) -> &[(usize, usize, u32)] {
        &self.monomials
    }

    /// The full defining polynomial `Y^n + F(X, Y)`.
    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    /// Coefficient of `Y^j` in the defining polynomial.
    pub fn coeff_y(&self, j: usize) -> FqPoly {
        self.poly.coeff(j).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Pole order at infinity of `X^i Y^j`.
    pub fn weight(&self, i: usize, j: usize) -> usize {
        self.n * i + self.d * j
    }

    pub fn spec(&self) -> CurveSpec {
        CurveSpec {
            p: self.field.p(),
            k: self.field.k(),
            field_modulus: (self.field.k() > 1).then(|| self.field.modulus().to_vec()),
            n: self.n,
            d: self.d,
            monomials: self
                .monomials
                .iter()
                .map(|&(i, j, c)| (i, j, CoeffSpec::Residue(c)))
                .collect(),
        }
    }

    pub fn field_descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::of(&self.field)
    }

    /// Projective point count over `F_{q^i}` of the nonsingular model.
    ///
    /// Affine points are grouped by the minimal polynomial `u` of their
    /// X-coordinate: each `u` of degree `w | i` contributes `w` times the
    /// number of roots of `C(x_u, Y)` lying in `F_{q^i}`.
    pub fn count_points(&self, i: usize, ceiling: u64) -> Result<u64> {
        if i == 0 {
            return Err(Error::usage("extension degree must be positive"));
        }
        if self.q().checked_pow(i as u32).is_none_or(|v| v > ceiling) {
            return Err(Error::Resource(format!(
                "q^{i} exceeds the point-counting ceiling {ceiling}"
            )));
        }
        let mut affine = 0u64;
        for w in (1..=i).filter(|w| i % w == 0) {
            let us: Vec<FqPoly> = self.ring.irreducibles_of_degree(w).collect();
            affine += us
                .par_iter()
                .map(|u| {
                    let k = ResidueField::new(&self.ring, u).expect("irreducible modulus");
                    let over = PolyRing::new(k.clone());
                    let g = self.poly.mod_u(&k);
                    (w * over.count_roots_in_extension(&g, i / w)) as u64
                })
                .sum::<u64>();
        }
        Ok(affine + 1)
    }

    /// `N_1, ..., N_upto`.
    pub fn point_counts(&self, upto: usize, ceiling: u64) -> Result<Vec<u64>> {
        (1..=upto).map(|i| self.count_points(i, ceiling)).collect()
    }

    pub fn zeta(&self, ceiling: u64) -> Result<ZetaData> {
        let counts = self.point_counts(self.genus, ceiling)?;
        zeta_from_counts(self.q(), self.genus, &counts)
    }

    /// Whether `(u, Y - v)` is a place of the curve: `C(X, v) = 0 mod u`.
    pub fn vanishes_at(&self, u: &FqPoly, v: &FqPoly) -> bool {
        self.poly.eval_y_mod(&self.ring, v, u).is_zero()
    }

    /// Whether `v` is a simple root of `C(X, Y) mod u`.
    pub fn is_unramified_at(&self, u: &FqPoly, v: &FqPoly) -> bool {
        !self.poly.d_dy(&self.ring).eval_y_mod(&self.ring, v, u).is_zero()
    }
}

fn coeff_value(field: &Fq, c: &CoeffSpec) -> Result<u32> {
    match c {
        CoeffSpec::Residue(r) => {
            if *r >= field.q() {
                Err(Error::usage(format!("coefficient {r} is not a residue of F_{}", field.q())))
            } else {
                Ok(*r)
            }
        }
        CoeffSpec::Vector(v) => field.from_coeffs(v),
    }
}

/// Validate a raw description and build the curve model.
pub fn validate_curve(spec: &CurveSpec) -> Result<CurveModel> {
    let field = Fq::new(spec.p, spec.k, spec.field_modulus.clone().filter(|_| spec.k > 1))
        .map_err(|e| Error::usage(format!("bad field: {e}")))?;
    let (n, d) = (spec.n, spec.d);
    if n == 0 || d == 0 {
        return Err(Error::usage("n and d must be positive"));
    }
    if n.gcd(&d) != 1 {
        return Err(Error::reject(
            Rejection::GcdViolation,
            format!("gcd({n}, {d}) = {}", n.gcd(&d)),
        ));
    }
    if n as u64 % field.characteristic() == 0 {
        return Err(Error::reject(
            Rejection::Inseparable,
            format!("characteristic {} divides n = {n}", field.p()),
        ));
    }
    let ring = PolyRing::new(field.clone());
    let mut terms: std::collections::BTreeMap<(usize, usize), u32> = Default::default();
    for (i, j, c) in &spec.monomials {
        if *j >= n {
            return Err(Error::usage(format!("monomial X^{i} Y^{j} has Y-degree >= n")));
        }
        let c = coeff_value(&field, c)?;
        let e = terms.entry((*i, *j)).or_insert(0);
        *e = field.add(e, &c);
    }
    terms.retain(|_, c| *c != 0);
    if !terms.contains_key(&(d, 0)) {
        return Err(Error::reject(
            Rejection::WeightViolation,
            format!("the X^{d} term is missing"),
        ));
    }
    if let Some(((i, j), _)) = terms
        .iter()
        .find(|((i, j), _)| (*i, *j) != (d, 0) && n * i + d * j >= n * d)
    {
        return Err(Error::reject(
            Rejection::WeightViolation,
            format!("monomial X^{i} Y^{j} has weight >= nd"),
        ));
    }
    let monomials: Vec<(usize, usize, u32)> = terms.into_iter().map(|((i, j), c)| (i, j, c)).collect();
    let mut all = monomials.clone();
    all.push((0, n, 1));
    let poly = BiPoly::from_terms(&ring, &all);
    let model = CurveModel {
        field,
        ring,
        n,
        d,
        monomials,
        poly,
        genus: (n - 1) * (d - 1) / 2,
    };
    if let Some(detail) = find_affine_singularity(&model)? {
        return Err(Error::reject(Rejection::SingularCurve, detail));
    }
    Ok(model)
}

/// Look for a common zero of `C`, `dC/dX`, `dC/dY`. Candidate
/// X-coordinates are roots of `gcd(Res_Y(C, C_Y), Res_Y(C, C_X))`;
/// each is confirmed by a gcd over its residue field.
fn find_affine_singularity(model: &CurveModel) -> Result<Option<String>> {
    let ring = model.ring();
    let c = model.poly();
    let cy = c.d_dy(ring);
    let cx = c.d_dx(ring);
    let r1 = resultant(ring, c, &cy)?;
    let candidates = if cx.is_zero() {
        r1
    } else {
        let r2 = resultant(ring, c, &cx)?;
        ring.gcd(&r1, &r2)
    };
    if candidates.is_zero() {
        return Ok(Some("resultants vanish identically".into()));
    }
    if candidates.degree() == Some(0) {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fac = ring.factor(&candidates, &mut rng)?;
    for (u, _) in fac.factors {
        let k = ResidueField::new(ring, &u)?;
        let over = PolyRing::new(k.clone());
        let g = over.gcd(&c.mod_u(&k), &cy.mod_u(&k));
        let g = over.gcd(&g, &cx.mod_u(&k));
        if g.degree().unwrap_or(0) > 0 {
            return Ok(Some(format!(
                "singular point above X-coordinate root of {:?}",
                u.coeffs()
            )));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn y3_x4_1() -> CurveModel {
        validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap()
    }

    #[test]
    fn validates_genus_three_example() {
        let c = y3_x4_1();
        assert_eq!(c.genus(), 3);
        assert_eq!(c.q(), 5);
    }

    #[test]
    fn rejection_reasons() {
        let gcd = validate_curve(&CurveSpec::prime(5, 2, 2, &[(2, 0, 1)])).unwrap_err();
        assert!(matches!(gcd, Error::Validation { reason: Rejection::GcdViolation, .. }));
        let sing = validate_curve(&CurveSpec::prime(5, 2, 3, &[(3, 0, 1)])).unwrap_err();
        assert!(matches!(sing, Error::Validation { reason: Rejection::SingularCurve, .. }));
        let insep = validate_curve(&CurveSpec::prime(3, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap_err();
        assert!(matches!(insep, Error::Validation { reason: Rejection::Inseparable, .. }));
        let weight = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (2, 2, 1)])).unwrap_err();
        assert!(matches!(weight, Error::Validation { reason: Rejection::WeightViolation, .. }));
    }

    // exhaustive (x, y) scan over F_{p^i} built as an independent table field
    fn brute_count(model: &CurveModel, i: u32) -> u64 {
        let big = Fq::new(model.field().p(), i, None).unwrap();
        let mut count = 1;
        for x in big.elements() {
            for y in big.elements() {
                let mut acc = big.pow(&y, model.n() as u128);
                for &(a, b, c) in model.monomials() {
                    let term = big.mul(&big.pow(&x, a as u128), &big.pow(&y, b as u128));
                    acc = big.add(&acc, &big.mul(&term, &big.from_int(c as i64)));
                }
                if acc == 0 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn point_counts_match_exhaustive_scan() {
        let c = y3_x4_1();
        assert_eq!(c.count_points(1, DEFAULT_COUNT_CEILING).unwrap(), 6);
        for i in 1..=3 {
            assert_eq!(c.count_points(i, DEFAULT_COUNT_CEILING).unwrap(), brute_count(&c, i as u32));
        }
        let e = validate_curve(&CurveSpec::prime(5, 2, 3, &[(3, 0, 1), (1, 0, 1), (0, 0, 1)])).unwrap();
        for i in 1..=2 {
            assert_eq!(e.count_points(i, DEFAULT_COUNT_CEILING).unwrap(), brute_count(&e, i as u32));
        }
    }

    #[test]
    fn point_count_ceiling() {
        let c = y3_x4_1();
        assert!(matches!(c.count_points(4, 100), Err(Error::Resource(_))));
    }

    #[test]
    fn curve_spec_json_round_trip() {
        let text = r#"{"p": 5, "k": 1, "field_modulus": null, "n": 3, "d": 4,
                       "monomials": [[4, 0, 1], [0, 0, [1]]]}"#;
        let spec = CurveSpec::from_json(text).unwrap();
        let c = validate_curve(&spec).unwrap();
        assert_eq!(c.monomials(), y3_x4_1().monomials());
    }
}
