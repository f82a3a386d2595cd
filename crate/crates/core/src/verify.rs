//! Independent oracles for the closed-form expectations and the exact
//! solvers.
//!
//! The compatible-distribution set `P(m) = {p : P(A) >= Bel(A) for all A}`
//! is handled two ways: through mass allocations `a(k, F)` (one LP column
//! per scenario/focal-set pair) and through its explicit `2^K`-row
//! description. Neither path uses the per-focal max/min formulas.

use rayon::prelude::*;
use serde::Serialize;

use crate::criterion::{dot, evaluate, hurwicz_of_costs, scenario_costs};
use crate::error::{Error, Result};
use crate::linopt::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::model::{FeasibleSet, Instance, MassFunction};
use crate::solvers::{Method, SolveReport};

/// Largest `K` for the explicit polytope (`2^K - 2` rows).
pub const EXPLICIT_POLYTOPE_MAX_K: usize = 12;
/// Largest `K` for the exhaustive supermodularity check.
pub const SUPERMODULAR_MAX_K: usize = 6;
/// Largest dimension accepted by the grid oracle.
pub const GRID_MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

/// Share `a(k, F)` of each focal set's mass assigned to each of its scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct MassAllocation {
    /// `shares[i][j]` belongs to scenario `focal_sets[i].indices[j]`.
    pub shares: Vec<Vec<f64>>,
}

impl MassAllocation {
    /// Induced distribution `p_k = sum_{F ni k} a(k, F)`.
    pub fn distribution(&self, mass: &MassFunction) -> Vec<f64> {
        let mut p = vec![0.0; mass.num_scenarios];
        for (f, shares) in mass.focal_sets.iter().zip(&self.shares) {
            for (&k, &a) in f.indices.iter().zip(shares) {
                p[k] += a;
            }
        }
        p
    }
}

fn lp_optimum(lp: &LinearProgram) -> Result<(f64, Vec<f64>)> {
    let r = solve_lp(lp)?;
    match r.status {
        LpStatus::Optimal => Ok((r.objective, r.x)),
        LpStatus::Infeasible => Err(Error::Precondition("oracle LP is infeasible".into())),
        LpStatus::Unbounded => Err(Error::Precondition("oracle LP is unbounded".into())),
    }
}

/// Optimizes `sum_F sum_{k in F} a(k, F) cost_k` over allocations with
/// `sum_{k in F} a(k, F) = m(F)`, `a >= 0`.
pub fn expectation_allocation_lp(mass: &MassFunction, costs: &[f64], sense: Sense) -> Result<(f64, MassAllocation)> {
    if costs.len() != mass.num_scenarios {
        return Err(Error::DimensionMismatch { expected: mass.num_scenarios, got: costs.len() });
    }
    let sign = if sense == Sense::Max { -1.0 } else { 1.0 };
    let objective: Vec<f64> = mass.focal_sets.iter().flat_map(|f| f.indices.iter().map(|&k| sign * costs[k])).collect();
    let total = objective.len();
    let mut lp = LinearProgram::new(objective);
    let mut offset = 0;
    for f in &mass.focal_sets {
        let mut row = vec![0.0; total];
        row[offset..offset + f.len()].iter_mut().for_each(|a| *a = 1.0);
        lp.add_constraint(row, Relation::Eq, f.mass);
        offset += f.len();
    }
    let (value, a) = lp_optimum(&lp)?;
    let mut shares = Vec::with_capacity(mass.len());
    let mut offset = 0;
    for f in &mass.focal_sets {
        shares.push(a[offset..offset + f.len()].to_vec());
        offset += f.len();
    }
    Ok((sign * value, MassAllocation { shares }))
}

fn costs_for(inst: &Instance, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != inst.scenarios.dim {
        return Err(Error::DimensionMismatch { expected: inst.scenarios.dim, got: x.len() });
    }
    Ok(scenario_costs(inst, x))
}

/// Upper expectation of `x` through the allocation LP.
pub fn upper_expectation_lp(inst: &Instance, x: &[f64]) -> Result<f64> {
    let mass = inst.mass.explicit()?;
    expectation_allocation_lp(&mass, &costs_for(inst, x)?, Sense::Max).map(|(v, _)| v)
}

/// Lower expectation of `x` through the allocation LP.
pub fn lower_expectation_lp(inst: &Instance, x: &[f64]) -> Result<f64> {
    let mass = inst.mass.explicit()?;
    expectation_allocation_lp(&mass, &costs_for(inst, x)?, Sense::Min).map(|(v, _)| v)
}

/// Rows of the explicit polytope for a belief function given on bitmasks.
///
/// `sum_{k in A} p_k >= Bel(A)` is written as
/// `sum_{k not in A} p_k <= 1 - Bel(A)`, which is the same half-space once
/// `sum p = 1`. Rows with `Bel(A) = 0` hold for every distribution and are
/// skipped; `A = [K]` is covered by the normalization row.
fn belief_polytope_lp(k: usize, objective: Vec<f64>, bel: &dyn Fn(u32) -> Result<f64>) -> Result<LinearProgram> {
    if k > EXPLICIT_POLYTOPE_MAX_K {
        return Err(Error::Precondition(format!(
            "explicit polytope needs K <= {EXPLICIT_POLYTOPE_MAX_K} (got {k}); use the allocation LP instead"
        )));
    }
    let mut lp = LinearProgram::new(objective);
    lp.add_constraint(vec![1.0; k], Relation::Eq, 1.0);
    let full = (1u32 << k) - 1;
    for mask in 1..full {
        let b = bel(mask)?;
        if b > 0.0 {
            let row = (0..k).map(|i| if mask >> i & 1 == 1 { 0.0 } else { 1.0 }).collect();
            lp.add_constraint(row, Relation::Le, 1.0 - b);
        }
    }
    Ok(lp)
}

fn mask_indices(k: usize, mask: u32) -> Vec<usize> {
    (0..k).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Optimizes `sum_k p_k cost_k` over the explicit polytope of a belief
/// function given on subsets (as bitmasks over `k` scenarios).
pub fn expectation_over_belief(k: usize, costs: &[f64], sense: Sense, bel: &dyn Fn(&[usize]) -> Result<f64>) -> Result<f64> {
    if costs.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: costs.len() });
    }
    let sign = if sense == Sense::Max { -1.0 } else { 1.0 };
    let lp = belief_polytope_lp(k, costs.iter().map(|c| sign * c).collect(), &|mask| bel(&mask_indices(k, mask)))?;
    lp_optimum(&lp).map(|(v, _)| sign * v)
}

/// Upper (`Max`) or lower (`Min`) expectation of `x` over the explicit
/// polytope of compatible distributions.
pub fn expectation_over_polytope(inst: &Instance, x: &[f64], sense: Sense) -> Result<f64> {
    let costs = costs_for(inst, x)?;
    expectation_over_belief(inst.num_scenarios(), &costs, sense, &|set| inst.mass.belief(set))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonemptyReport {
    pub nonempty: bool,
    /// A compatible distribution when `nonempty`.
    pub witness: Vec<f64>,
}

/// LP feasibility of the explicit compatible-distribution polytope.
pub fn check_nonempty(mass: &MassFunction) -> Result<NonemptyReport> {
    let k = mass.num_scenarios;
    let lp = belief_polytope_lp(k, vec![0.0; k], &|mask| crate::model::belief(mass, &mask_indices(k, mask)))?;
    let r = solve_lp(&lp)?;
    Ok(match r.status {
        LpStatus::Optimal => NonemptyReport { nonempty: true, witness: r.x },
        _ => NonemptyReport { nonempty: false, witness: Vec::new() },
    })
}

/// Checks `f(A | B) + f(A & B) >= f(A) + f(B) - tol` over all pairs of
/// subsets of `k` elements, given `f` on bitmasks.
pub fn is_supermodular(k: usize, f: &dyn Fn(u32) -> f64, tol: f64) -> bool {
    let n = 1u32 << k;
    let values: Vec<f64> = (0..n).map(f).collect();
    (0..n).all(|a| (0..n).all(|b| values[(a | b) as usize] + values[(a & b) as usize] >= values[a as usize] + values[b as usize] - tol))
}

/// Exhaustive supermodularity check of `Bel`.
pub fn check_supermodular(mass: &MassFunction) -> Result<bool> {
    let k = mass.num_scenarios;
    if k > SUPERMODULAR_MAX_K {
        return Err(Error::Precondition(format!("supermodularity check needs K <= {SUPERMODULAR_MAX_K}, got {k}")));
    }
    let bel: Vec<f64> = (0..1u32 << k).map(|mask| crate::model::belief(mass, &mask_indices(k, mask))).collect::<Result<_>>()?;
    Ok(is_supermodular(k, &|mask| bel[mask as usize], 1e-12))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub report: SolveReport,
    /// `L * grid_step * sqrt(n)` with `L = max_k ||c_k||_1`.
    pub lipschitz_bound: f64,
    pub points_evaluated: u64,
}

/// Grid search over the box, accepting points within `grid_step` of the
/// polytope.
pub fn brute_force_polytope(inst: &Instance, grid_step: f64) -> Result<GridReport> {
    brute_force_polytope_with_tol(inst, grid_step, grid_step)
}

/// Grid search with an explicit feasibility tolerance.
///
/// Grid coordinates are `i * grid_step` up to the upper bound, so halving
/// the step refines the grid and cannot raise the optimum for a fixed
/// tolerance.
pub fn brute_force_polytope_with_tol(inst: &Instance, grid_step: f64, feas_tol: f64) -> Result<GridReport> {
    let FeasibleSet::Polytope(poly) = &inst.feasible else {
        return Err(Error::Precondition("grid oracle requires a polytope".into()));
    };
    let n = poly.dim();
    if n > GRID_MAX_DIM {
        return Err(Error::Precondition(format!("grid oracle supports n <= {GRID_MAX_DIM}, got {n}")));
    }
    if grid_step.is_nan() || grid_step <= 0.0 || poly.upper.iter().any(|u| !u.is_finite()) {
        return Err(Error::Precondition("grid oracle needs a positive step and a finite box".into()));
    }
    let mass = inst.mass.explicit()?;
    let axes: Vec<Vec<f64>> = poly
        .upper
        .iter()
        .map(|&u| {
            let steps = (u / grid_step + 1e-9).floor() as usize;
            (0..=steps).map(|i| i as f64 * grid_step).collect()
        })
        .collect();
    let total: u64 = axes.iter().map(|a| a.len() as u64).product();
    let first_axis = axes[0].len() as u64;
    let inner = total / first_axis;

    let best = (0..first_axis)
        .into_par_iter()
        .filter_map(|i0| {
            let mut best: Option<(f64, u64, Vec<f64>)> = None;
            let mut x = vec![0.0; n];
            let mut costs = vec![0.0; inst.num_scenarios()];
            for r in 0..inner {
                let mut rest = r;
                x[0] = axes[0][i0 as usize];
                for j in (1..n).rev() {
                    let len = axes[j].len() as u64;
                    x[j] = axes[j][(rest % len) as usize];
                    rest /= len;
                }
                if poly.max_violation(&x) > feas_tol {
                    continue;
                }
                for (c, s) in costs.iter_mut().zip(&inst.scenarios.scenarios) {
                    *c = dot(&x, s);
                }
                let h = hurwicz_of_costs(&mass, inst.alpha, &costs);
                let rank = i0 * inner + r;
                if best.as_ref().is_none_or(|b| h < b.0) {
                    best = Some((h, rank, x.clone()));
                }
            }
            best
        })
        .reduce_with(|a, b| if (b.0, b.1) < (a.0, a.1) { b } else { a });
    let (objective, _, x) = best.ok_or(Error::EmptyFeasibleSet)?;

    let lipschitz = inst.scenarios.scenarios.iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    Ok(GridReport {
        report: SolveReport { x, objective, method: Method::Exhaustive, subproblems_solved: total, bound: None, assignment: None },
        lipschitz_bound: lipschitz * grid_step * (n as f64).sqrt(),
        points_evaluated: total,
    })
}

/// Pairwise comparison of the three expectation routes at one solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub closed_form: [f64; 2],
    pub allocation_lp: [f64; 2],
    /// Absent when `K` is above the explicit-polytope cap.
    pub explicit_polytope: Option<[f64; 2]>,
    pub max_gap: f64,
    pub agree: bool,
}

/// Upper and lower expectation via closed form, allocation LP and explicit
/// polytope, with `agree` set when all pairs are within `tol`.
pub fn triple_agreement(inst: &Instance, x: &[f64], tol: f64) -> Result<AgreementReport> {
    let eval = evaluate(inst, x)?;
    let closed = [eval.upper_expectation, eval.lower_expectation];
    let alloc = [upper_expectation_lp(inst, x)?, lower_expectation_lp(inst, x)?];
    let explicit = if inst.num_scenarios() <= EXPLICIT_POLYTOPE_MAX_K {
        Some([expectation_over_polytope(inst, x, Sense::Max)?, expectation_over_polytope(inst, x, Sense::Min)?])
    } else {
        None
    };
    let mut gap: f64 = 0.0;
    for i in 0..2 {
        gap = gap.max((closed[i] - alloc[i]).abs());
        if let Some(e) = explicit {
            gap = gap.max((closed[i] - e[i]).abs()).max((alloc[i] - e[i]).abs());
        }
    }
    Ok(AgreementReport { closed_form: closed, allocation_lp: alloc, explicit_polytope: explicit, max_gap: gap, agree: gap <= tol })
}
