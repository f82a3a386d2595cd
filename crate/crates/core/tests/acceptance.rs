//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p robf-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robf::approx::{solve_approx_mean, solve_approx_v};
use robf::criterion::{evaluate_costs, owa_evaluate, owa_mass, owa_weights};
use robf::fuzzy::reduce_to_crisp;
use robf::generate::{generate_minsat_robf, random_feasible_x, FeasibleKind, Literal, MinsatInstance, MinsatOptions};
use robf::model::{belief, z_value};
use robf::solvers::{solve_alpha1, solve_exact_decomposition, solve_exact_selection, solve_z2, SolveOptions};
use robf::verify::{check_nonempty, check_supermodular, triple_agreement};
use robf::{FeasibleSet, Instance, MassModel, Polytope, ScenarioSet};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn reduction_reproduces_table() -> Outcome {
    let fm = sample_fuzzy();
    let start = Instant::now();
    let m = reduce_to_crisp(&fm).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(m.len() == 9, || format!("{} focal sets instead of 9", m.len()))?;
    for (set, mass) in REDUCED_SAMPLE {
        let zero_based: Vec<usize> = set.iter().map(|k| k - 1).collect();
        let f = m.focal_sets.iter().find(|f| f.indices == zero_based).ok_or_else(|| format!("missing {set:?}"))?;
        ensure((f.mass - mass).abs() <= 1e-12, || format!("{set:?}: {} vs {mass}", f.mass))?;
    }
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!("9 focal sets match, {elapsed:?}"))
}

fn owa_weights_for_twelve_of_nine() -> Outcome {
    let start = Instant::now();
    let (w, w_rev) = owa_weights(12, 9).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut expected = vec![165.0 / 220.0, 45.0 / 220.0, 9.0 / 220.0, 1.0 / 220.0];
    expected.resize(12, 0.0);
    let reversed: Vec<f64> = expected.iter().rev().copied().collect();
    for (got, want, name) in [(&w, &expected, "w"), (&w_rev, &reversed, "w'")] {
        let gap = got.iter().zip(want.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(got.len() == 12 && gap <= 1e-12, || format!("{name} off by {gap:e}"))?;
    }
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!("w and w' within 1e-12, {elapsed:?}"))
}

fn lit(var: usize, positive: bool) -> Literal {
    Literal { var, positive }
}

fn minsat_sample() -> MinsatInstance {
    MinsatInstance {
        num_vars: 4,
        clauses: vec![
            vec![lit(1, true), lit(2, false)],
            vec![lit(2, false), lit(3, true)],
            vec![lit(1, true), lit(3, true)],
            vec![lit(3, false), lit(4, true)],
            vec![lit(1, true), lit(4, false)],
            vec![lit(2, false), lit(4, false)],
            vec![lit(1, false), lit(2, true)],
            vec![lit(1, true), lit(2, true)],
        ],
        threshold: 4,
    }
}

/// Scenario columns of the sample reduction, rows ordered
/// `x1, not x1, ..., x5, not x5`.
const TABLE1: [[f64; 10]; 12] = [
    [1., 0., 0., 1., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 1., 1., 0., 0., 0., 0., 0.],
    [1., 0., 0., 0., 1., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 1., 1., 0., 0., 0.],
    [1., 0., 0., 0., 0., 0., 0., 1., 0., 0.],
    [0., 0., 0., 1., 0., 0., 0., 1., 0., 0.],
    [0., 1., 1., 0., 0., 0., 0., 0., 0., 0.],
    [1., 0., 1., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0., 2., 2.],
    [0., 0., 0., 0., 0., 0., 0., 0., 2., 2.],
    [0., 0., 0., 0., 0., 0., 0., 0., 2., 2.],
    [0., 0., 0., 0., 0., 0., 0., 0., 2., 2.],
];

fn minsat_table() -> Outcome {
    let red = generate_minsat_robf(&minsat_sample(), &MinsatOptions::default()).map_err(|e| e.to_string())?;
    let got = &red.instance.scenarios.scenarios;
    ensure(got.len() == 12, || format!("{} scenarios", got.len()))?;
    for (k, (row, want)) in got.iter().zip(TABLE1.iter()).enumerate() {
        ensure(row.as_slice() == want.as_slice(), || format!("scenario {} is {row:?}", k + 1))?;
    }
    ensure(red.instance.mass.num_focal_sets() == Some(220), || "mass is not C(12, 9) sets".into())?;
    Ok("12 x 10 cost matrix identical".into())
}

fn triple_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for seed in 0..200u64 {
        let kind = if seed % 2 == 0 { FeasibleKind::Polytope } else { FeasibleKind::Selection };
        let inst = random_instance(seed, 6, 8, 6, 5, kind, rng.gen_range(0.0..=1.0));
        let x = random_feasible_x(&inst.feasible, &mut rng).map_err(|e| e.to_string())?;
        let r = triple_agreement(&inst, &x, 1e-7).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(r.explicit_polytope.is_some(), || format!("seed {seed}: explicit polytope skipped"))?;
        ensure(r.agree, || format!("seed {seed}: gap {:e}", r.max_gap))?;
        worst = worst.max(r.max_gap);
    }
    let elapsed = start.elapsed();
    within_time(elapsed, Duration::from_secs(60))?;
    Ok(format!("200 instances, max gap {worst:.1e}, {elapsed:.2?}"))
}

fn exact_method_consistency() -> Outcome {
    let opts = SolveOptions::default();
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let inst = random_instance(100 + seed, 4, 4, 3, 4, FeasibleKind::Polytope, 1.0);
        let a = solve_alpha1(&inst, &opts).map_err(|e| e.to_string())?;
        let d = solve_exact_decomposition(&inst, &opts).map_err(|e| e.to_string())?;
        let gap = (a.objective - d.objective).abs();
        ensure(gap <= 1e-7, || format!("alpha=1 seed {seed}: {} vs {}", a.objective, d.objective))?;
        worst = worst.max(gap);
    }
    for seed in 0..50u64 {
        let alpha = if seed % 2 == 0 { 0.5 } else { 0.8 };
        let inst = random_instance(200 + seed, 5, 5, 2, 4, FeasibleKind::Polytope, alpha);
        let z = solve_z2(&inst).map_err(|e| e.to_string())?;
        let d = solve_exact_decomposition(&inst, &opts).map_err(|e| e.to_string())?;
        let gap = (z.objective - d.objective).abs();
        ensure(gap <= 1e-7, || format!("pair seed {seed}: {} vs {}", z.objective, d.objective))?;
        worst = worst.max(gap);
    }
    Ok(format!("100 comparisons, max gap {worst:.1e}"))
}

fn ratio(approx: f64, exact: f64) -> f64 {
    if exact > 1e-12 {
        approx / exact
    } else if approx <= 1e-9 {
        1.0
    } else {
        f64::INFINITY
    }
}

fn v_weighted_bound() -> Outcome {
    let start = Instant::now();
    let opts = SolveOptions::default();
    let mut worst_slack = f64::INFINITY;
    let mut checks = 0;
    for seed in 0..100u64 {
        let base = random_selection_10_3(seed);
        let z = base.mass.z_value() as f64;
        for alpha in [0.2, 0.4, 0.5, 0.7, 1.0] {
            let inst = base.with_alpha(alpha);
            let exact = solve_exact_selection(&inst, &opts).map_err(|e| e.to_string())?;
            let approx = solve_approx_v(&inst).map_err(|e| e.to_string())?;
            let bound = if alpha >= 0.5 { z } else { (1.0 - alpha) / alpha * z };
            let r = ratio(approx.objective, exact.objective);
            ensure(r <= bound + 1e-9, || format!("seed {seed} alpha {alpha}: ratio {r} > {bound}"))?;
            worst_slack = worst_slack.min(bound - r);
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    within_time(elapsed, Duration::from_secs(120))?;
    Ok(format!("{checks} checks, min slack {worst_slack:.3}, {elapsed:.2?}"))
}

fn random_selection_10_3(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = robf::generate::RandomSpec {
        num_scenarios: 5,
        dim: 10,
        num_focal: rng.gen_range(1..=6),
        max_focal_size: 3,
        feasible: FeasibleKind::Selection,
        p: 3,
        alpha: 0.5,
    };
    robf::generate::generate_random(&spec, 300 + seed).unwrap()
}

fn mean_scenario_bound() -> Outcome {
    let opts = SolveOptions::default();
    let mut worst_slack = f64::INFINITY;
    let mut checks = 0;
    for seed in 0..100u64 {
        let base = random_instance(400 + seed, 4, 3, 3, 4, FeasibleKind::Polytope, 0.5);
        for alpha in [0.5, 0.8] {
            let inst = base.with_alpha(alpha);
            let exact = solve_exact_decomposition(&inst, &opts).map_err(|e| e.to_string())?;
            let approx = solve_approx_mean(&inst).map_err(|e| e.to_string())?;
            let limit = approx.guarantee_factor * exact.objective + 1e-7;
            ensure(approx.objective <= limit, || {
                format!("seed {seed} alpha {alpha}: {} > {} * {}", approx.objective, approx.guarantee_factor, exact.objective)
            })?;
            worst_slack = worst_slack.min(limit - approx.objective);
            checks += 1;
        }
    }
    Ok(format!("{checks} checks, min slack {worst_slack:.3e}"))
}

fn structural_properties() -> Outcome {
    for seed in 0..100u64 {
        let m = random_mass(500 + seed, 6);
        ensure(check_supermodular(&m).map_err(|e| e.to_string())?, || format!("seed {seed}: not supermodular"))?;
    }
    for seed in 0..500u64 {
        let m = random_mass(700 + seed, 8);
        let k = m.num_scenarios;
        let r = check_nonempty(&m).map_err(|e| e.to_string())?;
        ensure(r.nonempty, || format!("seed {seed}: empty"))?;
        ensure((r.witness.iter().sum::<f64>() - 1.0).abs() <= 1e-9 && r.witness.iter().all(|&p| p >= -1e-12), || {
            format!("seed {seed}: witness is not a distribution")
        })?;
        let bel: Vec<f64> = subsets(k).map(|a| belief(&m, &a).unwrap()).collect();
        ensure(bel[0] == 0.0 && (bel[(1 << k) - 1] - 1.0).abs() <= 1e-9, || format!("seed {seed}: not normalized"))?;
        for (mask, a) in subsets(k).enumerate() {
            let p_a: f64 = a.iter().map(|&i| r.witness[i]).sum();
            ensure(p_a >= bel[mask] - 1e-9, || format!("seed {seed}: P({a:?}) = {p_a} < Bel = {}", bel[mask]))?;
            for i in (0..k).filter(|i| mask >> i & 1 == 0) {
                ensure(bel[mask] <= bel[mask | 1 << i] + 1e-12, || format!("seed {seed}: Bel not monotone at {a:?}"))?;
            }
        }
    }
    Ok("100 supermodular, 500 nonempty with valid witnesses".into())
}

fn owa_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for k in 1..=7 {
        for l in 1..=k {
            let mass = MassModel::Explicit(owa_mass(k, l).map_err(|e| e.to_string())?);
            let (w, w_rev) = owa_weights(k, l).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let costs: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..10.0)).collect();
                let e = evaluate_costs(&mass, 0.5, &costs).map_err(|e| e.to_string())?;
                let gap = (e.upper_expectation - owa_evaluate(&w, &costs))
                    .abs()
                    .max((e.lower_expectation - owa_evaluate(&w_rev, &costs)).abs());
                ensure(gap <= 1e-9, || format!("K={k} l={l}: gap {gap:e}"))?;
                worst = worst.max(gap);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cost vectors, max gap {worst:.1e}"))
}

fn fuzzy_end_to_end() -> Outcome {
    let opts = SolveOptions::default();
    let reduced = reduce_to_crisp(&sample_fuzzy()).map_err(|e| e.to_string())?;
    ensure(z_value(&reduced) == 6, || "unexpected z".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 0.7] {
        let scenarios: Vec<Vec<f64>> = (0..6).map(|_| (0..2).map(|_| rng.gen_range(0.0..5.0)).collect()).collect();
        let feasible = FeasibleSet::Polytope(Polytope::new(vec![vec![-1.0, -1.0]], vec![-1.0], vec![1.0, 1.0]));
        let via_reduction = Instance::new(ScenarioSet::new(scenarios.clone()), reduced.clone(), feasible.clone(), alpha)
            .map_err(|e| e.to_string())?;
        let from_table =
            Instance::new(ScenarioSet::new(scenarios), reduced_sample_mass(), feasible, alpha).map_err(|e| e.to_string())?;
        let a = solve_exact_decomposition(&via_reduction, &opts).map_err(|e| e.to_string())?;
        let b = solve_exact_decomposition(&from_table, &opts).map_err(|e| e.to_string())?;
        let gap = (a.objective - b.objective).abs();
        ensure(gap <= 1e-7, || format!("alpha {alpha}: {} vs {}", a.objective, b.objective))?;
        worst = worst.max(gap);
    }
    Ok(format!("2 instances, 5760 subproblems each, max gap {worst:.1e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("fuzzy reduction reproduces the tabulated crisp mass", reduction_reproduces_table),
        ("OWA weights for K = 12, l = 9", owa_weights_for_twelve_of_nine),
        ("MINSAT reduction cost matrix", minsat_table),
        ("closed form, allocation LP and explicit polytope agree", triple_oracle_agreement),
        ("exact methods agree", exact_method_consistency),
        ("v-weighted approximation bound", v_weighted_bound),
        ("mean-scenario a-posteriori bound", mean_scenario_bound),
        ("belief structure: supermodular, nonempty core, monotone", structural_properties),
        ("OWA masses match OWA operators", owa_equivalence),
        ("fuzzy instance solved via reduction", fuzzy_end_to_end),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
