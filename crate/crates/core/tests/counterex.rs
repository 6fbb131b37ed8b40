use pointwise_approx::counterex::*;
use pointwise_approx::smoothness::omega_k;
use pointwise_approx::*;

#[test]
fn case_i_ratio_grows_along_probes() {
    let inst = build_case_i(0);
    let rep = blowup_demo(&inst, 10, &minimax_fitter).unwrap();
    assert!(rep.nondecreasing(4, 12, 0.05));
    assert!(rep.ratio_at(12).unwrap() >= 2.0 * rep.ratio_at(4).unwrap());
    assert!(rep.slope > 0.0);
    // P(0) != 0, so the fit keeps one sign on a terminal stretch of probes
    assert!(rep.one_signed_from <= 12, "{}", rep.one_signed_from);
    for row in &rep.rows {
        if let Some(b) = row.sign_bound {
            assert!(row.ratio >= b * (1.0 - 1e-12), "m = {}", row.m);
        }
    }
    let csv = rep.to_csv();
    assert!(csv.starts_with("m,x_m,num,den,ratio\n"));
    assert_eq!(csv.lines().count(), rep.rows.len() + 1);
}

#[test]
fn case_i_sign_bound_on_half_probes() {
    // At x = e^{-m-1/2} the model is -x^{r+1}; a fit that is positive there
    // is off by at least x^{r+1}.
    let inst = build_case_i(1);
    let p = minimax_fitter(&inst, 8).unwrap();
    for m in 6..=14 {
        let x = (-(m as f64) - 0.5).exp();
        let fx = inst.model.eval(x);
        assert!((fx + x * x).abs() <= 1e-12 * x * x);
        if p.eval(x) > 0.0 {
            assert!((fx - p.eval(x)).abs() >= x * x);
        }
    }
}

#[test]
fn polynomial_control_has_no_divergence() {
    let mut inst = build_case_i(0);
    inst.model = FunctionModel::polynomial(&[0.2, -1.0, 0.5, 0.25]);
    let rep = blowup_demo(&inst, 6, &minimax_fitter).unwrap();
    for row in &rep.rows {
        assert!(row.num <= 1e-12, "m = {}: {}", row.m, row.num);
    }
}

#[test]
fn case_ii_sandwich_and_trends() {
    let inst = build_case_ii(2, 0, Epsilon::root(2), 5).unwrap();
    let seq = inst.sequence().unwrap();
    assert_eq!(seq.ln_even[0], 0.0);
    assert!(seq.ordering_holds());
    assert!(seq.omega_in_phi_k());
    let diag = inst.diagnostics().unwrap();
    assert!(diag.trends_monotone(), "{diag:?}");
    let sw = inst.sandwich(2.0, 1e-12).unwrap();
    assert!(sw.resolved() >= 4);
    assert!(sw.holds);
    for row in sw.rows.iter().filter(|r| r.resolved) {
        assert!(row.omega <= 2.0 * row.estimate && row.estimate <= 4.0 * row.omega, "t = {}", row.t);
    }
}

#[test]
fn case_ii_needs_k_above_r() {
    assert!(build_case_ii(1, 0, Epsilon::root(1), 3).is_err());
    assert!(build_case_ii(2, 2, Epsilon::root(2), 3).is_err());
    assert!(build_case_iii(3, 2, Epsilon::root(3), 3).is_err());
}

#[test]
fn case_iii_reuses_a_higher_order_sequence() {
    let inst = build_case_iii(1, 1, Epsilon::root(1), 4).unwrap();
    assert!(inst.sequence().unwrap().ordering_holds());
    assert!(inst.sandwich(2.0, 1e-12).unwrap().resolved() >= 1);
}

#[test]
fn weak_modulus_is_capped_by_eps() {
    for (k, r) in [(1usize, 0usize), (2, 0), (2, 1)] {
        let eps = 0.125;
        let inst = build_weak(k, r, eps, Epsilon::inv_log(), 0.5, 64).unwrap();
        let unit = Interval::new(0.0, 1.0).unwrap();
        let grid = EvalGrid::uniform(unit, 2001).unwrap().with_extra(&[eps]);
        // F^{(r)} = (k+r)!/k! (eps - x)_+^k: |F^{(k+r)}| <= (k+r)! and |F^{(r)}| <= (k+r)!/k! eps^k
        let fact = |m: usize| (1..=m).product::<usize>() as f64;
        let c = 2f64.powi(k as i32) * fact(k + r);
        for t in [1e-3, 1e-2, 0.05, 0.125, 0.3] {
            let w = omega_k(&inst.model, r, k, t, unit, &grid).unwrap();
            let cap = c * t.powi(k as i32).min(eps.powi(k as i32));
            assert!(w <= cap * (1.0 + 1e-12), "k={k} r={r} t={t}: {w} > {cap}");
        }
    }
}

#[test]
fn weak_sweep_reaches_target() {
    let ws = weak_sweep(2, 0, Epsilon::inv_log(), 8, 100.0, 0.5, 512, 20, &ratio_minimax_fitter).unwrap();
    let star = ws.eps_star.unwrap();
    assert!(star <= 0.0625);
    assert!(ws.ratio_at_star.unwrap() >= 100.0);
    assert!(ws.ratio_at_half.unwrap() > ws.ratio_at_star.unwrap());
}
