use cab_core::curve::{build_factor_base, validate_curve, CurveSpec};
use cab_core::relations::{plan_parameters, PlanOverrides};
use serde_json::Value;

#[test]
fn planner_matches_golden_values() {
    let golden: Value = serde_json::from_str(include_str!("data/planner_g3_f5.json")).unwrap();
    let c = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap();
    let plan = plan_parameters(&c, &PlanOverrides::default()).unwrap();
    let close = |key: &str, got: f64| {
        let want = golden[key].as_f64().unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs(), "{key}: {got} vs {want}");
    };
    close("n0", plan.n0);
    close("d0", plan.d0);
    close("big_m", plan.big_m);
    close("rho", plan.rho);
    close("sigma", plan.sigma);
    close("tau", plan.tau);
    assert_eq!(plan.bound as u64, golden["B"].as_u64().unwrap());
    assert_eq!(plan.m as u64, golden["m"].as_u64().unwrap());
    let t = build_factor_base(&c, plan.bound).unwrap().len();
    assert_eq!(t as u64, golden["t"].as_u64().unwrap());
    assert_eq!(plan.target_relations(t) as u64, golden["s"].as_u64().unwrap());
}

#[test]
fn rho_and_sigma_overrides_move_the_bounds() {
    let c = validate_curve(&CurveSpec::prime(5, 3, 4, &[(4, 0, 1), (0, 0, 1)])).unwrap();
    let base = plan_parameters(&c, &PlanOverrides::default()).unwrap();
    let wide = plan_parameters(&c, &PlanOverrides { rho: Some(2.0 * base.rho), sigma: Some(2.0 * base.sigma), ..Default::default() }).unwrap();
    assert!(wide.bound >= base.bound && wide.m >= base.m);
    assert!((wide.tau - (wide.n0 * wide.sigma + wide.d0) / 3.0).abs() < 1e-12);
}
