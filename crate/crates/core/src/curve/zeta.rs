use serde::{Deserialize, Serialize};

use super::CurveModel;
use crate::error::{Error, Result};

/// L-polynomial and class number recovered from point counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaData {
    pub q: u64,
    pub genus: usize,
    pub counts: Vec<u64>,
    /// `a_0, ..., a_{2g}` with `L(T) = sum a_i T^i`.
    pub lpoly: Vec<i128>,
    pub class_number: i128,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Hasse-Weil interval `[(sqrt q - 1)^{2g}, (sqrt q + 1)^{2g}]`.
pub fn hasse_weil(q: u64, g: usize) -> (f64, f64) {
    let s = (q as f64).sqrt();
    ((s - 1.0).powi(2 * g as i32), (s + 1.0).powi(2 * g as i32))
}

/// Newton's identities: `a_1..a_m` from `S_1..S_m`.
fn newton(q: u64, counts: &[u64]) -> Result<Vec<i128>> {
    let s: Vec<i128> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| (q as i128).pow(i as u32 + 1) + 1 - n as i128)
        .collect();
    let mut a = vec![1i128];
    for k in 1..=counts.len() {
        let acc: i128 = (1..=k).map(|i| s[i - 1] * a[k - i]).sum();
        if acc % k as i128 != 0 {
            return Err(Error::integrity(format!(
                "point counts are inconsistent: {k} does not divide the Newton sum"
            )));
        }
        a.push(-acc / k as i128);
    }
    Ok(a)
}

/// Full L-polynomial, class number and sanity checks from `N_1..N_g`.
/// Extra counts beyond `g` are checked against the result.
pub fn zeta_from_counts(q: u64, genus: usize, counts: &[u64]) -> Result<ZetaData> {
    if counts.len() < genus {
        return Err(Error::usage(format!(
            "need {genus} point counts, got {}",
            counts.len()
        )));
    }
    let half = newton(q, &counts[..genus])?;
    let mut lpoly = vec![0i128; 2 * genus + 1];
    for i in 0..=genus {
        lpoly[i] = half[i];
        lpoly[2 * genus - i] = (q as i128).pow((genus - i) as u32) * half[i];
    }
    for (i, &a) in lpoly.iter().enumerate() {
        let bound = binomial(2 * genus, i) * (q as f64).powf(i as f64 / 2.0);
        if (a as f64).abs() > bound + 1e-6 {
            return Err(Error::integrity(format!("|a_{i}| = {} exceeds the Weil bound", a.abs())));
        }
    }
    let class_number: i128 = lpoly.iter().sum();
    let (lo, hi) = hasse_weil(q, genus);
    if (class_number as f64) < lo - 1e-6 || (class_number as f64) > hi + 1e-6 {
        return Err(Error::integrity(format!(
            "class number {class_number} outside the Hasse-Weil interval"
        )));
    }
    let check = counts_from_lpoly(&lpoly, q, counts.len());
    if check != counts {
        return Err(Error::integrity("L-polynomial does not reproduce the point counts"));
    }
    Ok(ZetaData {
        q,
        genus,
        counts: counts.to_vec(),
        lpoly,
        class_number,
    })
}

/// `N_1..N_upto` implied by an L-polynomial.
pub fn counts_from_lpoly(lpoly: &[i128], q: u64, upto: usize) -> Vec<u64> {
    let a = |k: usize| lpoly.get(k).copied().unwrap_or(0);
    let mut s: Vec<i128> = Vec::with_capacity(upto);
    for k in 1..=upto {
        let rest: i128 = (1..k).map(|i| s[i - 1] * a(k - i)).sum();
        s.push(-(k as i128) * a(k) - rest);
    }
    s.iter()
        .enumerate()
        .map(|(i, si)| ((q as i128).pow(i as u32 + 1) + 1 - si) as u64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsMode {
    /// All of `N_1..N_g`.
    Exact,
    /// Only `N_1..N_lambda`.
    Truncated(usize),
}

/// Closed interval `[lower, upper]` known to contain the class number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassNumberBounds {
    pub lower: i128,
    pub upper: i128,
    pub exact: Option<i128>,
}

impl ClassNumberBounds {
    pub fn from_counts(q: u64, genus: usize, counts: &[u64]) -> Result<Self> {
        if counts.len() >= genus {
            let h = zeta_from_counts(q, genus, counts)?.class_number;
            return Ok(ClassNumberBounds {
                lower: h,
                upper: h,
                exact: Some(h),
            });
        }
        let known = newton(q, counts)?;
        let qf = q as f64;
        let weight = |i: usize| {
            if i == genus {
                1.0
            } else {
                1.0 + qf.powi((genus - i) as i32)
            }
        };
        let mut centre = 1.0 + qf.powi(genus as i32);
        for (i, &a) in known.iter().enumerate().skip(1) {
            centre += a as f64 * weight(i);
        }
        let spread: f64 = (known.len()..=genus)
            .map(|i| binomial(2 * genus, i) * qf.powf(i as f64 / 2.0) * weight(i))
            .sum();
        let (hw_lo, hw_hi) = hasse_weil(q, genus);
        let lower = (centre - spread).max(hw_lo).ceil() as i128;
        let upper = (centre + spread).min(hw_hi).floor() as i128;
        Ok(ClassNumberBounds {
            lower: lower.max(1),
            upper,
            exact: None,
        })
    }

    /// Open interval `(h-, h+)` for the order check of the group
    /// structure: `(h/sqrt 2, sqrt 2 h)` when `h` is known, otherwise the
    /// closed bounds widened by one half.
    pub fn window(&self) -> (f64, f64) {
        match self.exact {
            Some(h) => {
                let h = h as f64;
                (h / 2f64.sqrt(), h * 2f64.sqrt())
            }
            None => (self.lower as f64 - 0.5, self.upper as f64 + 0.5),
        }
    }

    pub fn width_ratio(&self) -> f64 {
        self.upper as f64 / self.lower as f64
    }
}

/// Class number interval from point counts over `F_{q^i}`, `i <= g` or
/// `i <= lambda`.
pub fn class_number_bounds(model: &CurveModel, mode: BoundsMode, ceiling: u64) -> Result<ClassNumberBounds> {
    let m = match mode {
        BoundsMode::Exact => model.genus(),
        BoundsMode::Truncated(l) => l.min(model.genus()),
    };
    let counts = model.point_counts(m, ceiling)?;
    ClassNumberBounds::from_counts(model.q(), model.genus(), &counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{validate_curve, CurveSpec, DEFAULT_COUNT_CEILING};

    #[test]
    fn elliptic_curve_class_number_is_point_count() {
        let e = validate_curve(&CurveSpec::prime(5, 2, 3, &[(3, 0, 4), (1, 0, 4), (0, 0, 4)])).unwrap();
        let z = e.zeta(DEFAULT_COUNT_CEILING).unwrap();
        assert_eq!(z.class_number as u64, z.counts[0]);
        assert_eq!(z.lpoly[2], 5);
    }

    #[test]
    fn genus_zero() {
        let z = zeta_from_counts(7, 0, &[]).unwrap();
        assert_eq!(z.lpoly, vec![1]);
        assert_eq!(z.class_number, 1);
    }

    #[test]
    fn l_polynomial_reproduces_higher_counts() {
        let c = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap();
        let z = c.zeta(DEFAULT_COUNT_CEILING).unwrap();
        let more = c.point_counts(5, DEFAULT_COUNT_CEILING).unwrap();
        assert_eq!(counts_from_lpoly(&z.lpoly, 5, 5), more);
        let (lo, hi) = hasse_weil(5, 3);
        assert!((z.class_number as f64) >= lo && (z.class_number as f64) <= hi);
    }

    #[test]
    fn inconsistent_counts_are_rejected() {
        assert!(zeta_from_counts(5, 2, &[6, 7]).is_err());
    }

    #[test]
    fn truncated_bounds_contain_exact() {
        let c = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap();
        let h = c.zeta(DEFAULT_COUNT_CEILING).unwrap().class_number;
        for l in 0..=3 {
            let b = class_number_bounds(&c, BoundsMode::Truncated(l), DEFAULT_COUNT_CEILING).unwrap();
            assert!(b.lower <= h && h <= b.upper, "lambda {l}: {b:?} vs {h}");
            let (lo, hi) = b.window();
            assert!(lo < h as f64 && (h as f64) < hi);
        }
    }
}
