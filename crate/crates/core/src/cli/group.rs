use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{
    build_factor_base, class_number_bounds, BoundsMode, CurveModel, CurveSpec, FactorBase,
    FactorBaseLine,
};
use crate::error::{Error, Result};
use crate::linalg::{integer_rank, smith_normal_form, RelationMatrix, SnfFile, SnfResult};
use crate::relations::{
    collect_relations, plan_parameters, CollectionStats, ParameterPlan, PlanOverrides, Relation,
};

/// Inputs of the group-structure computation beyond the curve.
#[derive(Clone, Debug, Default)]
pub struct GroupConfig {
    pub overrides: PlanOverrides,
    pub seed: u64,
    pub max_trials: Option<u64>,
    pub ceiling: u64,
    /// Count points only over `F_{q^i}`, `i <= lambda`.
    pub truncate: Option<usize>,
    /// Use these relations instead of sampling.
    pub relations_in: Option<Vec<Relation>>,
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorBaseSummary {
    #[serde(rename = "B")]
    pub bound: usize,
    pub t: usize,
    pub ramified: usize,
    pub lines: Vec<FactorBaseLine>,
}

/// Output of `group-structure`, also the precomputation read by `dlog`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupStructure {
    pub curve: CurveSpec,
    pub genus: usize,
    pub q: u64,
    pub h: String,
    pub invariant_factors: Vec<String>,
    /// `(h-, h+)`.
    pub window: (f64, f64),
    /// Class number from the zeta function, when all counts were used.
    pub zeta_h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<ParameterPlan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_base: Option<FactorBaseSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<CollectionStats>,
    /// Generator `D_i` as `(factor-base index, coefficient)` pairs.
    #[serde(default)]
    pub generators: Vec<Vec<(usize, String)>>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snf: Option<SnfFile>,
}

/// Everything `dlog` needs, rebuilt and re-verified from a file.
pub struct Loaded {
    pub model: CurveModel,
    pub fb: FactorBase,
    pub snf: SnfResult,
    pub report: GroupStructure,
}

impl GroupStructure {
    pub fn load(self) -> Result<Loaded> {
        let model = crate::curve::validate_curve(&self.curve)?;
        let (Some(fbs), Some(snf)) = (&self.factor_base, &self.snf) else {
            return Err(Error::usage("precomputation has no factor base or Smith form"));
        };
        let fb = FactorBase::from_lines(&model, fbs.bound, &fbs.lines)?;
        let m = RelationMatrix::from_relations(fb.len(), &self.relations)?;
        let snf = SnfResult::from_file(snf, &m)?;
        Ok(Loaded {
            model,
            fb,
            snf,
            report: self,
        })
    }
}

fn trivial(model: &CurveModel) -> GroupStructure {
    GroupStructure {
        curve: model.spec(),
        genus: 0,
        q: model.q(),
        h: "1".into(),
        invariant_factors: Vec::new(),
        window: (1.0 / 2f64.sqrt(), 2f64.sqrt()),
        zeta_h: Some("1".into()),
        plan: None,
        factor_base: None,
        stats: None,
        generators: Vec::new(),
        relations: Vec::new(),
        snf: None,
    }
}

/// Group order and structure from relations over a factor base:
/// class-number window, factor base, relations, rank test, Smith form
/// and order test.
pub fn group_structure(model: &CurveModel, cfg: &GroupConfig) -> Result<GroupStructure> {
    if model.genus() == 0 {
        return Ok(trivial(model));
    }
    let mode = cfg.truncate.map_or(BoundsMode::Exact, BoundsMode::Truncated);
    let bounds = class_number_bounds(model, mode, cfg.ceiling)?;
    let (lo, hi) = bounds.window();
    let plan = plan_parameters(model, &cfg.overrides)?;
    let fb = build_factor_base(model, plan.bound)?;
    let t = fb.len();
    if !fb.ramified().is_empty() {
        log::warn!("{} ramified places of degree <= {} excluded", fb.ramified().len(), plan.bound);
    }
    let (relations, mut stats) = match &cfg.relations_in {
        Some(rels) => (rels.clone(), CollectionStats::default()),
        None => {
            let s = plan.target_relations(t);
            plan.check_search_space(model.q(), s)?;
            log::info!("collecting {s} relations over t = {t} places (B = {}, m = {})", plan.bound, plan.m);
            let set = collect_relations(model, &fb, plan.m, s, cfg.seed, cfg.max_trials)?;
            (set.relations, set.stats)
        }
    };
    if !cfg.timings {
        stats.seconds = None;
    }
    let m = RelationMatrix::from_relations(t, &relations)?;
    let rank = integer_rank(&m);
    if rank < t {
        return Err(Error::RankFailure { rank, t });
    }
    let snf = smith_normal_form(&m)?;
    let h = snf.order();
    let hf = h.to_f64().unwrap_or(f64::INFINITY);
    let exact_mismatch = bounds.exact.is_some_and(|e| h != BigInt::from(e));
    if !(hf > lo && hf < hi) || exact_mismatch {
        return Err(Error::OrderFailure {
            product: h.to_string(),
            lower: lo,
            upper: hi,
        });
    }
    let generators = (1..=snf.r())
        .map(|i| {
            snf.generator(i)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.to_string()))
                .collect()
        })
        .collect();
    Ok(GroupStructure {
        curve: model.spec(),
        genus: model.genus(),
        q: model.q(),
        h: h.to_string(),
        invariant_factors: snf.factors.iter().map(|f| f.to_string()).collect(),
        window: (lo, hi),
        zeta_h: bounds.exact.map(|e| e.to_string()),
        plan: Some(plan),
        factor_base: Some(FactorBaseSummary {
            bound: fb.bound(),
            t,
            ramified: fb.ramified().len(),
            lines: fb.lines(),
        }),
        stats: Some(stats),
        generators,
        relations,
        snf: Some(snf.to_file()),
    })
}
