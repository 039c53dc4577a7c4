//! Exact integer linear algebra for relation matrices: rank, Smith
//! normal form with unimodular transforms, coordinates in the resulting
//! product of cyclic groups, and cyclic discrete logarithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::Relation;

/// Sparse `t x s` integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    t: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl RelationMatrix {
    pub fn new(t: usize, columns: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        if columns.iter().flatten().any(|&(i, _)| i >= t) {
            return Err(Error::domain("row index out of range"));
        }
        Ok(RelationMatrix { t, columns })
    }

    pub fn from_relations(t: usize, relations: &[Relation]) -> Result<Self> {
        Self::new(t, relations.iter().map(|r| r.exps.clone()).collect())
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let t = rows.len();
        let s = rows.first().map_or(0, |r| r.len());
        let columns = (0..s)
            .map(|j| {
                (0..t)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i, rows[i][j]))
                    .collect()
            })
            .collect();
        RelationMatrix { t, columns }
    }

    pub fn rows(&self) -> usize {
        self.t
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.columns
    }

    pub fn dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols()]; self.t];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, e) in col {
                m[i][j] += e;
            }
        }
        m
    }
}

/// Rank over `Q` by exact fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

const RANK_PRIMES: [u64; 4] = [
    2305843009213693951,
    4611686018427387847,
    1152921504606846883,
    9223372036854775783,
];

fn rank_mod(rows: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = powmod(a[rank][col], p - 2);
        for i in rank + 1..nrows {
            if a[i][col] != 0 {
                let f = mulmod(a[i][col], inv);
                for j in col..ncols {
                    let sub = mulmod(f, a[rank][j]);
                    a[i][j] = (a[i][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `Q`: the largest rank modulo a few word-size primes, or an
/// exact elimination when those disagree.
pub fn integer_rank(m: &RelationMatrix) -> usize {
    let dense = m.dense();
    let ranks: Vec<usize> = RANK_PRIMES.par_iter().map(|&p| rank_mod(&dense, p)).collect();
    let max = *ranks.iter().max().unwrap_or(&0);
    if ranks.iter().all(|&r| r == max) {
        max
    } else {
        bareiss_rank(&dense)
    }
}

/// `T R U = (S | 0)` with `S = diag(h_r, ..., h_1, 1, ..., 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// `h_1 | h_2 | ... | h_r`, all greater than one.
    pub factors: Vec<BigInt>,
    /// Diagonal of `S` in order.
    pub diagonal: Vec<BigInt>,
    pub t: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub t_inv: Vec<Vec<BigInt>>,
}

impl SnfResult {
    pub fn r(&self) -> usize {
        self.factors.len()
    }

    /// `h = prod h_i`.
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    /// Coordinates `(c_1, ..., c_r)` with `c_i` in `Z/h_i` of an
    /// exponent vector over the factor base.
    pub fn group_coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.t.len() {
            return Err(Error::domain(format!(
                "vector has length {}, expected {}",
                v.len(),
                self.t.len()
            )));
        }
        let r = self.r();
        Ok((1..=r)
            .map(|i| {
                let row = &self.t[r - i];
                let y: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
                y.mod_floor(&self.factors[i - 1])
            })
            .collect())
    }

    /// Column of `T^{-1}` giving generator `D_i` as a factor-base
    /// combination, coefficients reduced modulo `h_r`.
    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let r = self.r();
        let k = r - i;
        let hr = self.factors.last().cloned().unwrap_or_else(BigInt::one);
        self.t_inv.iter().map(|row| row[k].mod_floor(&hr)).collect()
    }

    pub fn to_file(&self) -> SnfFile {
        let s = |m: &Vec<Vec<BigInt>>| {
            m.iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect()
        };
        SnfFile {
            factors: self.factors.iter().map(|x| x.to_string()).collect(),
            h: self.order().to_string(),
            t: s(&self.t),
            u: s(&self.u),
            t_inv: s(&self.t_inv),
        }
    }

    /// Rebuild from a file, re-verifying the transforms against `m`.
    pub fn from_file(file: &SnfFile, m: &RelationMatrix) -> Result<Self> {
        let parse = |x: &String| {
            x.parse::<BigInt>()
                .map_err(|_| Error::usage(format!("bad integer {x:?} in SNF file")))
        };
        let pm = |m: &Vec<Vec<String>>| -> Result<Vec<Vec<BigInt>>> {
            m.iter().map(|r| r.iter().map(parse).collect()).collect()
        };
        let factors: Vec<BigInt> = file.factors.iter().map(parse).collect::<Result<_>>()?;
        let tn = m.rows();
        let r = factors.len();
        let mut diagonal: Vec<BigInt> = factors.iter().rev().cloned().collect();
        diagonal.resize(tn.max(r), BigInt::one());
        let res = SnfResult {
            factors,
            diagonal,
            t: pm(&file.t)?,
            u: pm(&file.u)?,
            t_inv: pm(&file.t_inv)?,
        };
        verify_snf(m, &res)?;
        Ok(res)
    }
}

/// Serialized Smith form, integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfFile {
    pub factors: Vec<String>,
    pub h: String,
    #[serde(rename = "T")]
    pub t: Vec<Vec<String>>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<String>>,
    #[serde(rename = "Tinv")]
    pub t_inv: Vec<Vec<String>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Working state: `a = T R U`, with `T` by rows, `U` and `T^{-1}` by
/// columns so that every elementary operation touches contiguous vectors.
struct Smith {
    a: Vec<Vec<BigInt>>,
    t: Vec<Vec<BigInt>>,
    u_cols: Vec<Vec<BigInt>>,
    tinv_cols: Vec<Vec<BigInt>>,
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

impl Smith {
    /// row_i -= q row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        let (src, dst) = two(&mut self.a, k, i);
        axpy(dst, q, src);
        let (src, dst) = two(&mut self.t, k, i);
        axpy(dst, q, src);
        let (src, dst) = two(&mut self.tinv_cols, i, k);
        axpy(dst, &-q, src);
    }

    /// col_j -= q col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            if !row[k].is_zero() {
                let v = q * &row[k];
                row[j] -= v;
            }
        }
        let (src, dst) = two(&mut self.u_cols, k, j);
        axpy(dst, q, src);
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        self.t.swap(i, k);
        self.tinv_cols.swap(i, k);
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        self.u_cols.swap(j, k);
    }

    fn negate_row(&mut self, k: usize) {
        for x in self.a[k].iter_mut().chain(self.t[k].iter_mut()) {
            *x = -&*x;
        }
        for x in self.tinv_cols[k].iter_mut() {
            *x = -&*x;
        }
    }
}

fn two<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (l, r) = v.split_at_mut(dst);
        (&l[src], &mut r[0])
    } else {
        let (l, r) = v.split_at_mut(src);
        (&r[0], &mut l[dst])
    }
}

/// Smith normal form of a full-row-rank matrix. The transforms are
/// checked by exact multiplication before returning.
pub fn smith_normal_form(m: &RelationMatrix) -> Result<SnfResult> {
    let tn = m.rows();
    let sn = m.cols();
    let mut st = Smith {
        a: m.dense(),
        t: identity(tn),
        u_cols: identity(sn),
        tinv_cols: identity(tn),
    };
    let mut rank = 0;
    for k in 0..tn.min(sn) {
        loop {
            // pivot of least absolute value
            let mut best: Option<(usize, usize)> = None;
            'scan: for i in k..tn {
                for j in k..sn {
                    let x = &st.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => {
                            let y = &st.a[bi][bj];
                            (x.bits(), x.magnitude()) < (y.bits(), y.magnitude())
                        }
                    };
                    if better {
                        best = Some((i, j));
                        if x.magnitude().is_one() {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != k {
                st.swap_rows(pi, k);
            }
            if pj != k {
                st.swap_cols(pj, k);
            }
            let mut clean = true;
            for i in k + 1..tn {
                if !st.a[i][k].is_zero() {
                    let q = st.a[i][k].div_floor(&st.a[k][k]);
                    st.row_sub(i, k, &q);
                    clean &= st.a[i][k].is_zero();
                }
            }
            for j in k + 1..sn {
                if !st.a[k][j].is_zero() {
                    let q = st.a[k][j].div_floor(&st.a[k][k]);
                    st.col_sub(j, k, &q);
                    clean &= st.a[k][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let p = st.a[k][k].clone();
            let bad = (k + 1..tn).find(|&i| st.a[i][k + 1..].iter().any(|x| !x.is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    // row_k += row_i
                    st.row_sub(k, i, &-BigInt::one());
                }
                None => break,
            }
        }
        if st.a[k][k].is_zero() {
            break;
        }
        if st.a[k][k].is_negative() {
            st.negate_row(k);
        }
        rank += 1;
    }
    if rank < tn {
        return Err(Error::RankFailure { rank, t: tn });
    }
    // ascending chain d_0 | d_1 | ...; reverse so S starts with h_r
    st.t.reverse();
    st.tinv_cols.reverse();
    st.u_cols[..tn].reverse();
    let diagonal: Vec<BigInt> = (0..tn).map(|k| st.a[tn - 1 - k][tn - 1 - k].clone()).collect();
    let factors: Vec<BigInt> = diagonal.iter().rev().filter(|x| !x.is_one()).cloned().collect();
    let res = SnfResult {
        factors,
        diagonal,
        t: st.t,
        u: transpose(&st.u_cols),
        t_inv: transpose(&st.tinv_cols),
    };
    verify_snf(m, &res)?;
    Ok(res)
}

fn transpose(cols: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = cols.first().map_or(0, |c| c.len());
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Exact check of `T R U = (S | 0)` and `T T^{-1} = I`.
pub fn verify_snf(m: &RelationMatrix, snf: &SnfResult) -> Result<()> {
    let tn = m.rows();
    let sn = m.cols();
    let shape_ok = snf.t.len() == tn
        && snf.t.iter().all(|r| r.len() == tn)
        && snf.t_inv.len() == tn
        && snf.t_inv.iter().all(|r| r.len() == tn)
        && snf.u.len() == sn
        && snf.u.iter().all(|r| r.len() == sn)
        && snf.diagonal.len() == tn;
    if !shape_ok {
        return Err(Error::integrity("SNF transforms have the wrong shape"));
    }
    for w in snf.factors.windows(2) {
        if !w[1].is_multiple_of(&w[0]) {
            return Err(Error::integrity("invariant factors do not form a divisibility chain"));
        }
    }
    // T R via sparse columns: (T R)[i][j] = sum_k T[i][k] R[k][j]
    let tr: Vec<Vec<BigInt>> = (0..tn)
        .into_par_iter()
        .map(|i| {
            m.columns()
                .iter()
                .map(|col| col.iter().map(|&(k, e)| &snf.t[i][k] * e).sum())
                .collect()
        })
        .collect();
    let ok = (0..tn).into_par_iter().all(|i| {
        (0..sn).all(|j| {
            let v: BigInt = (0..sn)
                .filter(|&k| !tr[i][k].is_zero())
                .map(|k| &tr[i][k] * &snf.u[k][j])
                .sum();
            let want = if i == j { snf.diagonal[i].clone() } else { BigInt::zero() };
            v == want
        })
    });
    if !ok {
        return Err(Error::integrity("T R U differs from (S | 0)"));
    }
    let inv_ok = (0..tn).into_par_iter().all(|i| {
        (0..tn).all(|j| {
            let v: BigInt = (0..tn).map(|k| &snf.t[i][k] * &snf.t_inv[k][j]).sum();
            v == if i == j { BigInt::one() } else { BigInt::zero() }
        })
    });
    if !inv_ok {
        return Err(Error::integrity("stored inverse of T is wrong"));
    }
    Ok(())
}

/// Least `x >= 0` with `x alpha_i = beta_i (mod h_i)` for all `i`.
pub fn solve_cyclic_dlog(alpha: &[BigInt], beta: &[BigInt], moduli: &[BigInt]) -> Option<BigInt> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for ((a, b), h) in alpha.iter().zip(beta).zip(moduli) {
        let a = a.mod_floor(h);
        let b = b.mod_floor(h);
        let g = a.gcd(h);
        if !b.is_multiple_of(&g) {
            return None;
        }
        let hg = h / &g;
        let xi = if hg.is_one() {
            BigInt::zero()
        } else {
            let ag = (&a / &g).mod_floor(&hg);
            let inv = mod_inverse(&ag, &hg)?;
            ((&b / &g) * inv).mod_floor(&hg)
        };
        // merge x = xi mod hg into x mod modulus
        let e = modulus.extended_gcd(&hg);
        let gg = e.gcd.clone();
        let diff = &xi - &x;
        if !diff.is_multiple_of(&gg) {
            return None;
        }
        let lcm = &modulus / &gg * &hg;
        let step = (&diff / &gg * &e.x).mod_floor(&(&hg / &gg));
        x = (&x + &modulus * step).mod_floor(&lcm);
        modulus = lcm;
    }
    Some(x)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

#[cfg(test)]
mod tests;
