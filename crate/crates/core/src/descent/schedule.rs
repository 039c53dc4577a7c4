use serde::{Deserialize, Serialize};

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::relations::ParameterPlan;

/// `log_q L(alpha, c) = c (g ln q)^alpha (ln(g ln q))^(1 - alpha) / ln q`.
pub fn log_q_l(model: &CurveModel, alpha: f64, c: f64) -> f64 {
    let lq = (model.q() as f64).ln();
    let x = model.genus() as f64 * lq;
    c * x.powf(alpha) * x.ln().max(f64::MIN_POSITIVE).powf(1.0 - alpha) / lq
}

/// Degree bounds `delta_0 > delta_1 > ... > delta_K = B`. Smoothing
/// produces places of degree at most `delta_0`; a place of degree in
/// `(delta_{i+1}, delta_i]` is descended to degree `delta_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentSchedule {
    pub epsilon: f64,
    pub nu: f64,
    /// Constants `c_k` of the asymptotic schedule (empty when explicit
    /// bounds were given).
    pub c: Vec<f64>,
    pub bounds: Vec<usize>,
    /// `rho > (1/3 + epsilon) n0 / 2`.
    pub rho_condition: bool,
    /// `rho > c_K n0 (1/3 + epsilon) / nu`.
    pub final_condition: bool,
}

impl DescentSchedule {
    /// Explicit bounds; the last must equal the factor-base bound.
    pub fn explicit(bounds: Vec<usize>, fb_bound: usize) -> Result<Self> {
        if bounds.last() != Some(&fb_bound) {
            return Err(Error::usage(format!(
                "descent bounds must end with the factor-base bound {fb_bound}"
            )));
        }
        if bounds.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::usage("descent bounds must be strictly decreasing"));
        }
        Ok(DescentSchedule {
            epsilon: f64::NAN,
            nu: f64::NAN,
            c: Vec::new(),
            bounds,
            rho_condition: true,
            final_condition: true,
        })
    }

    /// Degree bound for smoothing.
    pub fn hm_bound(&self) -> usize {
        self.bounds[0]
    }

    /// The largest bound strictly below `k`.
    pub fn target_below(&self, k: usize) -> usize {
        *self
            .bounds
            .iter()
            .find(|&&b| b < k)
            .unwrap_or(self.bounds.last().unwrap())
    }

    /// Number of descent levels below smoothing.
    pub fn depth(&self) -> usize {
        self.bounds.len() - 1
    }
}

/// Bounds `ceil(log_q L(2/3 - (k+1) eps, c_k))` with `c_0 = (1/3 + eps)/nu`
/// and `c_{k+1} = c_k n0 (1/3 + eps) / nu`, for every level whose
/// exponent stays at least `1/3 + eps`, clamped to `[B + 1, g]` and
/// followed by `B`.
pub fn default_schedule(
    model: &CurveModel,
    plan: &ParameterPlan,
    epsilon: f64,
    nu: f64,
) -> Result<DescentSchedule> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 6.0) {
        return Err(Error::usage(format!("epsilon = {epsilon} must lie in (0, 1/6)")));
    }
    if !(nu > 0.0) {
        return Err(Error::usage(format!("nu = {nu} must be positive")));
    }
    let third = 1.0 / 3.0 + epsilon;
    let mut c = vec![third / nu];
    let mut k = 0;
    while 2.0 / 3.0 - (k as f64 + 2.0) * epsilon >= third - 1e-12 {
        let next = c[k] * plan.n0 * third / nu;
        c.push(next);
        k += 1;
    }
    let b = plan.bound;
    let g = model.genus();
    let mut bounds: Vec<usize> = Vec::new();
    if g > b {
        for (k, &ck) in c.iter().enumerate() {
            let alpha = 2.0 / 3.0 - (k as f64 + 1.0) * epsilon;
            let raw = log_q_l(model, alpha, ck).ceil().max(0.0) as usize;
            let clamped = raw.clamp(b + 1, g);
            if bounds.last().is_none_or(|&last| clamped < last) {
                bounds.push(clamped);
            }
        }
    }
    bounds.push(b);
    let ck = *c.last().unwrap();
    Ok(DescentSchedule {
        epsilon,
        nu,
        rho_condition: plan.rho > third * plan.n0 / 2.0,
        final_condition: plan.rho > ck * plan.n0 * third / nu,
        c,
        bounds,
    })
}
