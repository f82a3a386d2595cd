//! Solution costs, upper/lower expectations and the generalized Hurwicz
//! criterion.
//!
//! Convention: `alpha` weights the *upper* expectation, so `alpha = 1` is the
//! fully pessimistic decision maker and `alpha = 0` the fully optimistic one:
//!
//! ```text
//! H(x) = alpha * upper(x) + (1 - alpha) * lower(x)
//! upper(x) = sum_F m(F) * max_{k in F} c_k . x
//! lower(x) = sum_F m(F) * min_{k in F} c_k . x
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{binomial, FocalSet, Instance, MassFunction, MassModel, OwaMass};

/// Largest `K` for which [`owa_mass`] materializes all focal sets.
pub const OWA_MATERIALIZE_MAX_K: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    /// `c_k . x` for every scenario.
    pub per_scenario_costs: Vec<f64>,
    pub upper_expectation: f64,
    pub lower_expectation: f64,
    pub hurwicz: f64,
    /// Maximizing scenario per focal set (input order, lowest index on ties).
    /// Empty for implicit OWA masses.
    pub argmax_per_focal: Vec<usize>,
    /// Minimizing scenario per focal set, same conventions as `argmax_per_focal`.
    pub argmin_per_focal: Vec<usize>,
}

/// `c . x`.
pub fn cost(x: &[f64], c: &[f64]) -> Result<f64> {
    if x.len() != c.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), got: x.len() });
    }
    Ok(dot(x, c))
}

pub(crate) fn dot(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| a * b).sum()
}

/// Evaluates `x` on `inst`, checking feasibility first.
pub fn evaluate(inst: &Instance, x: &[f64]) -> Result<Evaluation> {
    inst.feasible.check_member(x)?;
    if x.len() != inst.scenarios.dim {
        return Err(Error::DimensionMismatch { expected: inst.scenarios.dim, got: x.len() });
    }
    let costs = scenario_costs(inst, x);
    evaluate_costs(&inst.mass, inst.alpha, &costs)
}

pub(crate) fn scenario_costs(inst: &Instance, x: &[f64]) -> Vec<f64> {
    inst.scenarios.scenarios.iter().map(|c| dot(x, c)).collect()
}

/// Evaluates a vector of per-scenario costs under a mass model.
pub fn evaluate_costs(mass: &MassModel, alpha: f64, costs: &[f64]) -> Result<Evaluation> {
    if costs.len() != mass.num_scenarios() {
        return Err(Error::DimensionMismatch { expected: mass.num_scenarios(), got: costs.len() });
    }
    let (upper, lower, argmax, argmin) = match mass {
        MassModel::Explicit(m) => {
            let mut upper = 0.0;
            let mut lower = 0.0;
            let mut argmax = Vec::with_capacity(m.len());
            let mut argmin = Vec::with_capacity(m.len());
            for f in &m.focal_sets {
                let (hi, lo) = extremes(f, costs);
                upper += f.mass * costs[hi];
                lower += f.mass * costs[lo];
                argmax.push(hi);
                argmin.push(lo);
            }
            (upper, lower, argmax, argmin)
        }
        MassModel::Owa(OwaMass { num_scenarios, cardinality }) => {
            let (w, w_rev) = owa_weights(*num_scenarios, *cardinality)?;
            (owa_evaluate(&w, costs), owa_evaluate(&w_rev, costs), Vec::new(), Vec::new())
        }
    };
    Ok(Evaluation {
        per_scenario_costs: costs.to_vec(),
        upper_expectation: upper,
        lower_expectation: lower,
        hurwicz: hurwicz(alpha, upper, lower),
        argmax_per_focal: argmax,
        argmin_per_focal: argmin,
    })
}

pub(crate) fn hurwicz(alpha: f64, upper: f64, lower: f64) -> f64 {
    alpha * upper + (1.0 - alpha) * lower
}

/// Indices of the max and min cost inside a focal set; ties go to the
/// lowest scenario index.
pub(crate) fn extremes(f: &FocalSet, costs: &[f64]) -> (usize, usize) {
    let mut hi = usize::MAX;
    let mut lo = usize::MAX;
    for &k in &f.indices {
        let v = costs[k];
        if hi == usize::MAX || v > costs[hi] || (v == costs[hi] && k < hi) {
            hi = k;
        }
        if lo == usize::MAX || v < costs[lo] || (v == costs[lo] && k < lo) {
            lo = k;
        }
    }
    (hi, lo)
}

/// Hurwicz value of a cost vector under an explicit mass, without building
/// an [`Evaluation`].
pub(crate) fn hurwicz_of_costs(mass: &MassFunction, alpha: f64, costs: &[f64]) -> f64 {
    let mut upper = 0.0;
    let mut lower = 0.0;
    for f in &mass.focal_sets {
        let (hi, lo) = extremes(f, costs);
        upper += f.mass * costs[hi];
        lower += f.mass * costs[lo];
    }
    hurwicz(alpha, upper, lower)
}

/// Uniform mass `1 / C(K, l)` on every `l`-subset of `K` scenarios.
pub fn owa_mass(k: usize, l: usize) -> Result<MassFunction> {
    if l == 0 || l > k {
        return Err(Error::Precondition(format!("OWA cardinality {l} outside 1..={k}")));
    }
    if k > OWA_MATERIALIZE_MAX_K {
        return Err(Error::CombinatorialOverflow { n: k, k: l });
    }
    let count = binomial(k, l).ok_or(Error::CombinatorialOverflow { n: k, k: l })?;
    let m = 1.0 / count as f64;
    let mut sets = Vec::with_capacity(count as usize);
    let mut idx: Vec<usize> = (0..l).collect();
    loop {
        sets.push(FocalSet { indices: idx.clone(), mass: m });
        // Next combination in lexicographic order.
        let Some(i) = (0..l).rev().find(|&i| idx[i] < k - l + i) else { break };
        idx[i] += 1;
        for j in i + 1..l {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(MassFunction { num_scenarios: k, focal_sets: sets })
}

/// OWA weights equivalent to the upper (`w`) and lower (`w'`) expectations
/// under [`owa_mass`]`(k, l)`: `w_i = C(K-i, l-1) / C(K, l)`, `w'` reversed.
pub fn owa_weights(k: usize, l: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if l == 0 || l > k {
        return Err(Error::Precondition(format!("OWA cardinality {l} outside 1..={k}")));
    }
    let total = binomial(k, l).ok_or(Error::CombinatorialOverflow { n: k, k: l })?;
    let w: Vec<f64> = (1..=k)
        .map(|i| {
            let c = binomial(k - i, l - 1).ok_or(Error::CombinatorialOverflow { n: k - i, k: l - 1 })?;
            Ok(c as f64 / total as f64)
        })
        .collect::<Result<_>>()?;
    let mut rev = w.clone();
    rev.reverse();
    Ok((w, rev))
}

/// `sum_i w_i * cost_(i)` with costs sorted in descending order; equal costs
/// keep their original order.
pub fn owa_evaluate(weights: &[f64], costs: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[b].total_cmp(&costs[a]));
    weights.iter().zip(order).map(|(w, k)| w * costs[k]).sum()
}
