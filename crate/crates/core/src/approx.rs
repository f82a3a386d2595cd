//! Polynomial approximation algorithms.
//!
//! Both reduce the problem to one deterministic linear objective over the
//! feasible set:
//!
//! * [`solve_approx_v`] weighs scenario `k` by `v_k = sum_{F ni k} m(F)`;
//!   guarantee `z(F)` for `alpha >= 0.5` and `(1 - alpha) / alpha * z(F)` below.
//! * [`solve_approx_mean`] uses the mean scenario
//!   `c_hat = sum_F m(F) / |F| * sum_{k in F} c_k`, and reports an
//!   a-posteriori factor computed from the returned solution.

use serde::Serialize;

use crate::criterion::{evaluate, extremes, scenario_costs};
use crate::error::{Error, Result};
use crate::model::{FocalSet, Instance, MassFunction, MassModel, ScenarioSet};
use crate::solvers::{solve_linear, Bound, Method, SolveReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub x: Vec<f64>,
    pub objective: f64,
    pub method: Method,
    pub guarantee_factor: f64,
    /// `sum_F min_{k in F} c_k x / sum_F max_{k in F} c_k x`, unweighted.
    pub posterior_ratio: f64,
    /// The same ratio with every term weighted by `m(F)`; informational only.
    pub weighted_ratio: f64,
    pub normalized_instance_used: bool,
}

impl ApproxReport {
    pub fn into_solve_report(self) -> SolveReport {
        let lower_bound = if self.guarantee_factor > 0.0 { self.objective / self.guarantee_factor } else { 0.0 };
        SolveReport {
            x: self.x,
            objective: self.objective,
            method: self.method,
            subproblems_solved: 1,
            bound: Some(Bound { guarantee_factor: self.guarantee_factor, lower_bound }),
            assignment: None,
        }
    }
}

/// Replaces every singleton focal set `{k}` by `{k, k'}` where `k'` is an
/// appended copy of scenario `k`. Upper and lower expectations of every
/// solution are unchanged.
pub fn normalize_singletons(inst: &Instance) -> Result<Instance> {
    let mass = inst.mass.explicit()?;
    if mass.focal_sets.iter().all(|f| f.len() >= 2) {
        return Ok(Instance { mass: MassModel::Explicit(mass.into_owned()), ..inst.clone() });
    }
    let mut scenarios = inst.scenarios.scenarios.clone();
    let focal_sets = mass
        .focal_sets
        .iter()
        .map(|f| {
            if f.len() == 1 {
                let k = f.indices[0];
                scenarios.push(scenarios[k].clone());
                FocalSet { indices: vec![k, scenarios.len() - 1], mass: f.mass }
            } else {
                f.clone()
            }
        })
        .collect();
    let k = scenarios.len();
    Ok(Instance {
        scenarios: ScenarioSet { dim: inst.scenarios.dim, scenarios },
        mass: MassModel::Explicit(MassFunction { num_scenarios: k, focal_sets }),
        feasible: inst.feasible.clone(),
        alpha: inst.alpha,
    })
}

fn require_positive_alpha(inst: &Instance) -> Result<()> {
    if inst.alpha <= 0.0 {
        return Err(Error::Precondition(
            "alpha = 0 admits no approximation guarantee (the problem is inapproximable there unless P = NP)".into(),
        ));
    }
    Ok(())
}

/// Returns `(unweighted, weighted)` min/max ratios for the solution costs.
fn ratios(mass: &MassFunction, costs: &[f64]) -> (f64, f64) {
    let (mut min_sum, mut max_sum, mut wmin, mut wmax) = (0.0, 0.0, 0.0, 0.0);
    for f in &mass.focal_sets {
        let (hi, lo) = extremes(f, costs);
        min_sum += costs[lo];
        max_sum += costs[hi];
        wmin += f.mass * costs[lo];
        wmax += f.mass * costs[hi];
    }
    let ratio = |a: f64, b: f64| if b > 0.0 { (a / b).clamp(0.0, 1.0) } else { 0.0 };
    (ratio(min_sum, max_sum), ratio(wmin, wmax))
}

/// The `v`-weighted deterministic problem.
pub fn solve_approx_v(inst: &Instance) -> Result<ApproxReport> {
    require_positive_alpha(inst)?;
    let normalized = normalize_singletons(inst)?;
    let mass = normalized.mass.explicit()?;
    let mut v = vec![0.0; normalized.num_scenarios()];
    for f in &mass.focal_sets {
        for &k in &f.indices {
            v[k] += f.mass;
        }
    }
    let mut aggregate = vec![0.0; normalized.scenarios.dim];
    for (vk, c) in v.iter().zip(&normalized.scenarios.scenarios) {
        for (a, cj) in aggregate.iter_mut().zip(c) {
            *a += vk * cj;
        }
    }
    let x = solve_linear(&inst.feasible, &aggregate)?;
    let eval = evaluate(inst, &x)?;
    let z = mass.focal_sets.iter().map(FocalSet::len).max().unwrap_or(1) as f64;
    let alpha = inst.alpha;
    let guarantee_factor = if alpha >= 0.5 { z } else { (1.0 - alpha) / alpha * z };
    let original = inst.mass.explicit()?;
    let (posterior_ratio, weighted_ratio) = ratios(&original, &eval.per_scenario_costs);
    Ok(ApproxReport {
        x,
        objective: eval.hurwicz,
        method: Method::ApproxV,
        guarantee_factor,
        posterior_ratio,
        weighted_ratio,
        normalized_instance_used: normalized.num_scenarios() != inst.num_scenarios(),
    })
}

/// The mean-scenario nominal problem with the a-posteriori factor
/// `gamma * (1 + (1 - alpha) / alpha * ratio)`, `gamma = z(F)`.
pub fn solve_approx_mean(inst: &Instance) -> Result<ApproxReport> {
    require_positive_alpha(inst)?;
    let mass = inst.mass.explicit()?;
    let mut mean = vec![0.0; inst.scenarios.dim];
    for f in &mass.focal_sets {
        let w = f.mass / f.len() as f64;
        for &k in &f.indices {
            for (a, cj) in mean.iter_mut().zip(inst.scenarios.get(k)) {
                *a += w * cj;
            }
        }
    }
    let x = solve_linear(&inst.feasible, &mean)?;
    let eval = evaluate(inst, &x)?;
    let costs = scenario_costs(inst, &x);
    let (posterior_ratio, weighted_ratio) = ratios(&mass, &costs);
    let gamma = mass.focal_sets.iter().map(FocalSet::len).max().unwrap_or(1) as f64;
    let alpha = inst.alpha;
    let guarantee_factor = gamma * (1.0 + (1.0 - alpha) / alpha * posterior_ratio);
    Ok(ApproxReport {
        x,
        objective: eval.hurwicz,
        method: Method::ApproxMean,
        guarantee_factor,
        posterior_ratio,
        weighted_ratio,
        normalized_instance_used: false,
    })
}
