use serde::{Deserialize, Serialize};

use crate::curve::CurveModel;
use crate::error::{Error, Result};

/// Explicit values that take precedence over the asymptotic formulas.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanOverrides {
    pub bound: Option<usize>,
    pub m: Option<usize>,
    pub relations: Option<usize>,
    pub rho: Option<f64>,
    pub sigma: Option<f64>,
}

fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Factor-base bound, sieving degree and relation target. The formula
/// constants are NaN (null in JSON) when `M <= 0` and explicit `B`, `m`
/// were supplied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterPlan {
    #[serde(deserialize_with = "nan_if_null")]
    pub n0: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub d0: f64,
    /// `log(g log q) / log q`.
    #[serde(deserialize_with = "nan_if_null")]
    pub big_m: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub rho: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub sigma: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub tau: f64,
    #[serde(rename = "B")]
    pub bound: usize,
    pub m: usize,
    /// Explicit relation target; `None` means `2t`.
    pub relations: Option<usize>,
}

/// Minimal search space `q^{2m}` per requested relation.
pub const SEARCH_SAFETY: f64 = 4.0;

/// Positive root of `sigma^2 - (4/9) n0 sigma - (4/9) d0 = 0`.
pub fn sigma_root(n0: f64, d0: f64) -> f64 {
    let b = 4.0 / 9.0 * n0;
    let c = 4.0 / 9.0 * d0;
    (b + (b * b + 4.0 * c).sqrt()) / 2.0
}

impl ParameterPlan {
    pub fn target_relations(&self, t: usize) -> usize {
        self.relations.unwrap_or(2 * t)
    }

    /// Upper bound `n m + d` on the degree of a norm.
    pub fn norm_degree_bound(&self, model: &CurveModel) -> usize {
        model.n() * self.m + model.d()
    }

    /// Refuse plans whose sampling space is too small for `s` relations.
    pub fn check_search_space(&self, q: u64, s: usize) -> Result<()> {
        let space = (q as f64).powi(2 * self.m as i32);
        if space < s as f64 * SEARCH_SAFETY {
            return Err(Error::Planner(format!(
                "search space q^(2m) = {space} is too small for {s} relations; increase m"
            )));
        }
        Ok(())
    }
}

pub fn plan_parameters(model: &CurveModel, overrides: &PlanOverrides) -> Result<ParameterPlan> {
    let g = model.genus() as f64;
    if model.genus() == 0 {
        return Err(Error::Planner("genus 0: the class group is trivial".into()));
    }
    let lq = (model.q() as f64).ln();
    let big_m = (g * lq).ln() / lq;
    let explicit = overrides.bound.is_some() && overrides.m.is_some();
    if big_m <= 0.0 && !explicit {
        return Err(Error::Planner(format!(
            "log_q(g log q) = {big_m:.4} is not positive; pass explicit B and m"
        )));
    }
    let big_m = if big_m > 0.0 { big_m } else { f64::NAN };
    let n0 = model.n() as f64 / (g.cbrt() * big_m.powf(-1.0 / 3.0));
    let d0 = model.d() as f64 / (g.powf(2.0 / 3.0) * big_m.cbrt());
    let sigma = overrides.sigma.unwrap_or_else(|| sigma_root(n0, d0));
    let tau = (n0 * sigma + d0) / 3.0;
    let rho = overrides.rho.unwrap_or_else(|| (tau / 3.0).sqrt());
    let scale = g.cbrt() * big_m.powf(2.0 / 3.0);
    let bound = overrides.bound.unwrap_or((rho * scale).ceil() as usize);
    let m = overrides.m.unwrap_or((sigma * scale).floor() as usize);
    if bound == 0 || m == 0 {
        return Err(Error::Planner(format!(
            "formulas give B = {bound}, m = {m}; both must be at least 1"
        )));
    }
    Ok(ParameterPlan {
        n0,
        d0,
        big_m,
        rho,
        sigma,
        tau,
        bound,
        m,
        relations: overrides.relations,
    })
}
