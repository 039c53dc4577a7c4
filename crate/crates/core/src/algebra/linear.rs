//! Dense linear algebra over `F_q`.

use super::field::{Field, Fq};

/// Incremental row echelon form that remembers, for every stored row,
/// which combination of inserted vectors produced it.
pub struct Echelon<'a> {
    field: &'a Fq,
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
    inserted: usize,
}

impl<'a> Echelon<'a> {
    pub fn new(field: &'a Fq) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    /// Insert `v`; if it is dependent on earlier vectors, return the
    /// dependency as coefficients of inserted vectors 0..=k (last one 1).
    pub fn insert(&mut self, v: Vec<u32>) -> Option<Vec<u32>> {
        let f = self.field;
        let k = self.inserted;
        self.inserted += 1;
        let mut v = v;
        let mut combo = vec![0u32; k + 1];
        combo[k] = 1;
        for (pivot, row, rc) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
                for (x, y) in combo.iter_mut().zip(rc) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => Some(combo),
            Some(p) => {
                let inv = f.inv(&v[p]).expect("nonzero");
                for x in v.iter_mut() {
                    *x = f.mul(x, &inv);
                }
                for x in combo.iter_mut() {
                    *x = f.mul(x, &inv);
                }
                // keep earlier rows reduced at the new pivot
                for (_, row, rc) in self.rows.iter_mut() {
                    let c = row[p];
                    if c != 0 {
                        for (x, y) in row.iter_mut().zip(&v) {
                            *x = f.sub(x, &f.mul(&c, y));
                        }
                        rc.resize(k + 1, 0);
                        for (x, y) in rc.iter_mut().zip(&combo) {
                            *x = f.sub(x, &f.mul(&c, y));
                        }
                    }
                }
                self.rows.push((p, v, combo));
                None
            }
        }
    }
}

/// Basis of `{x : x M = 0}` for the matrix with the given rows.
pub fn left_kernel(field: &Fq, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let m = rows.len();
    let mut ech = Echelon::new(field);
    let mut out = Vec::new();
    for r in rows {
        if let Some(mut combo) = ech.insert(r.clone()) {
            combo.resize(m, 0);
            out.push(combo);
        }
    }
    out
}

/// Rank of a matrix over `F_q`.
pub fn rank(field: &Fq, rows: &[Vec<u32>]) -> usize {
    rows.len() - left_kernel(field, rows).len()
}
