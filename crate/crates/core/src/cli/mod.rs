//! Command-line driver: argument parsing, JSON input and output, and
//! the commands behind the `cabdlog` binary.

mod bench;
mod group;

pub use bench::{bench_smoothness, dickman_prediction, psi, SmoothnessCell, SmoothnessReport};
pub use group::{group_structure, FactorBaseSummary, GroupConfig, GroupStructure, Loaded};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{build_factor_base, validate_curve, CurveModel, CurveSpec, Divisor, DEFAULT_COUNT_CEILING};
use crate::descent::{
    default_schedule, discrete_log, verify_transcript, DescentBudget, DescentSchedule,
    DlogTranscript, Precomputation,
};
use crate::error::{Error, Result};
use crate::jacobian::{Ideal, Jacobian};
use crate::relations::{plan_parameters, PlanOverrides, Relation};

#[derive(Parser, Debug)]
#[command(name = "cabdlog", version, about = "Index calculus on Jacobians of C_ab curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Curve description (JSON).
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest field size `q^i` for point counting.
    #[arg(long, default_value_t = DEFAULT_COUNT_CEILING)]
    pub ceiling: u64,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PlanArgs {
    /// Factor-base degree bound.
    #[arg(long = "B")]
    pub bound: Option<usize>,
    /// Degree bound for a(X), b(X).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of relations to collect (default 2t).
    #[arg(long)]
    pub relations: Option<usize>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
}

impl PlanArgs {
    fn overrides(&self) -> PlanOverrides {
        PlanOverrides {
            bound: self.bound,
            m: self.m,
            relations: self.relations,
            rho: self.rho,
            sigma: self.sigma,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group order and invariant factors of the Jacobian.
    GroupStructure {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        plan: PlanArgs,
        /// Maximum number of candidate functions tested.
        #[arg(long)]
        budget: Option<u64>,
        /// Use only N_1..N_lambda for the class-number window.
        #[arg(long)]
        truncate: Option<usize>,
        /// Relations (JSON lines) to use instead of sampling.
        #[arg(long = "relations-in")]
        relations_in: Option<PathBuf>,
        /// Include wall-clock times in the output.
        #[arg(long)]
        timings: bool,
    },
    /// Discrete logarithm of D2 to the base D1.
    Dlog {
        #[command(flatten)]
        common: Common,
        /// Output of `group-structure`.
        #[arg(long)]
        precomp: Option<PathBuf>,
        /// identity | random[:seed] | gen:<i> | place:<i> | path to an ideal (JSON)
        #[arg(long, default_value = "gen:1")]
        d1: String,
        /// As for --d1, plus mul:<x> for x * D1.
        #[arg(long, default_value = "random")]
        d2: String,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        /// Explicit descent degree bounds, decreasing, ending with B.
        #[arg(long = "descent-bounds", value_delimiter = ',')]
        descent_bounds: Option<Vec<usize>>,
        /// Candidates tried per descent step.
        #[arg(long)]
        budget: Option<u64>,
        /// Randomizations tried when smoothing a class.
        #[arg(long = "hm-budget")]
        hm_budget: Option<u64>,
        #[arg(long = "lattice-degree")]
        lattice_degree: Option<usize>,
        #[arg(long = "max-nodes")]
        max_nodes: Option<usize>,
        /// Write the descent transcript here (otherwise it is inlined).
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Empirical smoothness of div(phi) against random polynomials.
    BenchSmoothness {
        #[command(flatten)]
        common: Common,
        #[arg(long = "grid-m", value_delimiter = ',', default_value = "1,2,3,4")]
        grid_m: Vec<usize>,
        #[arg(long = "grid-mu", value_delimiter = ',', default_value = "2,3,4,5,6")]
        grid_mu: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long = "u-min", default_value_t = 2.0)]
        u_min: f64,
        #[arg(long = "u-max", default_value_t = 6.0)]
        u_max: f64,
    },
    /// Exact point counts, L-polynomial and class number.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a dlog transcript without searching.
    VerifyTranscript {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        precomp: Option<PathBuf>,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// List the factor base.
    FactorBase {
        #[command(flatten)]
        common: Common,
        #[arg(long = "B")]
        bound: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_curve(common: &Common) -> Result<CurveModel> {
    let path = common
        .curve
        .as_ref()
        .ok_or_else(|| Error::usage("--curve is required"))?;
    validate_curve(&CurveSpec::from_json(&read(path)?)?)
}

fn load_precomp(path: Option<&PathBuf>) -> Result<Loaded> {
    let path = path.ok_or_else(|| Error::usage("--precomp is required (run group-structure first)"))?;
    let report: GroupStructure = serde_json::from_str(&read(path)?)?;
    report.load()
}

fn emit(common: &Common, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &common.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_relations(path: &Path) -> Result<Vec<Relation>> {
    read(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

/// Parse a class description. `base` is D1 when parsing D2.
pub fn parse_class(
    spec: &str,
    jac: &Jacobian,
    loaded: &Loaded,
    base: Option<&Ideal>,
    seed: u64,
) -> Result<Ideal> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::usage(format!("bad number {s:?} in class spec {spec:?}")))
    };
    match kind {
        "identity" => Ok(jac.identity()),
        "random" => {
            let s = if arg.is_empty() { seed } else { num(arg)? };
            Ok(jac.random_class(&mut ChaCha8Rng::seed_from_u64(s)))
        }
        "gen" => {
            let i = num(arg)? as usize;
            if i == 0 || i > loaded.snf.r() {
                return Err(Error::usage(format!("no generator {i}; the group has {}", loaded.snf.r())));
            }
            let v = loaded.snf.generator(i);
            let div = Divisor::from_terms(
                v.iter()
                    .enumerate()
                    .map(|(j, c)| (loaded.fb.place(j).clone(), i64::try_from(c).unwrap_or(0))),
            );
            jac.class_of(&div)
        }
        "place" => {
            let i = num(arg)? as usize;
            if i >= loaded.fb.len() {
                return Err(Error::usage(format!("factor base has {} places", loaded.fb.len())));
            }
            jac.class_of(&Divisor::from_terms([(loaded.fb.place(i).clone(), 1)]))
        }
        "mul" => {
            let b = base.ok_or_else(|| Error::usage("mul:<x> is only valid for --d2"))?;
            let x: BigInt = arg
                .parse()
                .map_err(|_| Error::usage(format!("bad multiplier in {spec:?}")))?;
            Ok(jac.mul_scalar(b, &x))
        }
        _ => {
            let ideal: Ideal = serde_json::from_str(&read(Path::new(spec))?)?;
            jac.validate(&ideal, false)?;
            Ok(jac.reduce(&ideal))
        }
    }
}

fn run_command(cmd: Command) -> Result<()> {
    match cmd {
        Command::GroupStructure {
            common,
            plan,
            budget,
            truncate,
            relations_in,
            timings,
        } => {
            let model = load_curve(&common)?;
            let cfg = GroupConfig {
                overrides: plan.overrides(),
                seed: common.seed,
                max_trials: budget,
                ceiling: common.ceiling,
                truncate,
                relations_in: relations_in.as_deref().map(read_relations).transpose()?,
                timings,
            };
            let out = group_structure(&model, &cfg)?;
            eprintln!("h = {} with invariant factors {:?}", out.h, out.invariant_factors);
            emit(&common, &out)
        }
        Command::Dlog {
            common,
            precomp,
            d1,
            d2,
            epsilon,
            nu,
            descent_bounds,
            budget,
            hm_budget,
            lattice_degree,
            max_nodes,
            transcript,
        } => {
            let loaded = load_precomp(precomp.as_ref())?;
            let jac = Jacobian::new(&loaded.model);
            let schedule = match descent_bounds {
                Some(b) => DescentSchedule::explicit(b, loaded.fb.bound())?,
                None => {
                    let plan = plan_parameters(
                        &loaded.model,
                        &PlanOverrides {
                            bound: Some(loaded.fb.bound()),
                            m: Some(1),
                            ..Default::default()
                        },
                    )?;
                    default_schedule(&loaded.model, &plan, epsilon, nu)?
                }
            };
            let defaults = DescentBudget::default();
            let budget = DescentBudget {
                hm_trials: hm_budget.unwrap_or(defaults.hm_trials),
                step_trials: budget.unwrap_or(defaults.step_trials),
                max_nodes: max_nodes.unwrap_or(defaults.max_nodes),
                lattice_degree,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let (s1, s2, s3) = {
                use rand::Rng;
                (rng.gen::<u64>(), rng.gen::<u64>(), rng.gen::<u64>())
            };
            let a = parse_class(&d1, &jac, &loaded, None, s1)?;
            let b = parse_class(&d2, &jac, &loaded, Some(&a), s2)?;
            let pre = Precomputation {
                jac: &jac,
                fb: &loaded.fb,
                snf: &loaded.snf,
            };
            let res = discrete_log(&pre, &a, &b, &schedule, &budget, s3)?;
            let nodes = res.transcript.d1.node_count() + res.transcript.d2.node_count();
            let tr_value = match &transcript {
                Some(p) => {
                    std::fs::write(p, serde_json::to_string_pretty(&res.transcript)? + "\n")?;
                    json!(p.display().to_string())
                }
                None => serde_json::to_value(&res.transcript)?,
            };
            eprintln!("x = {} (order of D1 = {}), verified", res.x, res.order);
            emit(
                &common,
                &json!({
                    "x": res.x.to_string(),
                    "order": res.order.to_string(),
                    "verified": true,
                    "schedule": schedule,
                    "nodes": nodes,
                    "hm_trials": [res.transcript.d1.hm_trials, res.transcript.d2.hm_trials],
                    "transcript": tr_value,
                }),
            )
        }
        Command::BenchSmoothness {
            common,
            grid_m,
            grid_mu,
            trials,
            u_min,
            u_max,
        } => {
            let model = load_curve(&common)?;
            let report = bench_smoothness(&model, &grid_m, &grid_mu, (u_min, u_max), trials, common.seed)?;
            for c in &report.cells {
                eprintln!(
                    "nu={:>3} mu={:>2} u={:.2}  phi={:.3e}  poly={:.3e}  exact={:.3e}  e^(-u log u)={:.3e}",
                    c.nu, c.mu, c.u, c.phi_probability, c.poly_probability, c.exact_probability, c.prediction
                );
            }
            emit(&common, &report)
        }
        Command::Oracle { common } => {
            let model = load_curve(&common)?;
            let z = model.zeta(common.ceiling)?;
            eprintln!("h = {}", z.class_number);
            emit(
                &common,
                &json!({
                    "genus": z.genus,
                    "q": z.q,
                    "N": z.counts,
                    "L": z.lpoly.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    "h": z.class_number.to_string(),
                }),
            )
        }
        Command::VerifyTranscript {
            common,
            precomp,
            transcript,
        } => {
            let loaded = load_precomp(precomp.as_ref())?;
            let path = transcript.ok_or_else(|| Error::usage("--transcript is required"))?;
            let tr: DlogTranscript = serde_json::from_str(&read(&path)?)?;
            let jac = Jacobian::new(&loaded.model);
            let pre = Precomputation {
                jac: &jac,
                fb: &loaded.fb,
                snf: &loaded.snf,
            };
            let x = verify_transcript(&pre, &tr)?;
            eprintln!("transcript verified, x = {x}");
            emit(&common, &json!({"verified": true, "x": x.to_string()}))
        }
        Command::FactorBase { common, bound } => {
            let model = load_curve(&common)?;
            let fb = build_factor_base(&model, bound)?;
            eprintln!("t = {} places of degree <= {bound}, {} ramified excluded", fb.len(), fb.ramified().len());
            emit(
                &common,
                &json!({
                    "B": bound,
                    "t": fb.len(),
                    "places": fb.lines(),
                    "ramified": fb.ramified(),
                }),
            )
        }
    }
}

/// Run the driver and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let report: Value = json!({
                "status": "error",
                "reason": e.reason(),
                "exit_code": e.exit_code(),
                "message": e.to_string(),
            });
            println!("{report}");
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
