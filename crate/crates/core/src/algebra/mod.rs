//! Exact arithmetic over small finite fields.

mod bivariate;
mod factor;
mod field;
pub mod linear;
mod poly;
mod residue;

pub use bivariate::{
    interpolate, lift_root, resultant, resultant_degree_bound, resultant_interpolation,
    resultant_sylvester, BiPoly,
};
pub use factor::{count_irreducibles, Factorization, IndexedField};
pub use field::{Field, Fq, MAX_FIELD_ORDER};
pub(crate) use field::prime_factors;
pub use poly::{Poly, PolyRing};
pub use residue::{FqPoly, ResidueField};

use serde::{Deserialize, Serialize};

pub type FqRing = PolyRing<Fq>;

impl<E: Serialize> Serialize for Poly<E> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<u32> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut coeffs = Vec::<u32>::deserialize(d)?;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        // the zero element of Fq is always 0
        Ok(Poly::from_raw(coeffs))
    }
}

/// Field descriptor `{p, k, modulus}` as it appears in files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

impl FieldDescriptor {
    pub fn of(field: &Fq) -> Self {
        FieldDescriptor {
            p: field.p(),
            k: field.k(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn build(&self) -> crate::Result<Fq> {
        let modulus = (self.k > 1).then(|| self.modulus.clone());
        Fq::new(self.p, self.k, modulus)
    }
}
