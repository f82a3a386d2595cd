//! Exact solvers for minimizing the generalized Hurwicz criterion.
//!
//! * [`solve_exact_decomposition`]: for polytopes, guesses the minimizing
//!   scenario `k_F` of every focal set and solves one LP per guess.
//! * [`solve_exact_selection`]: enumerates all `p`-subsets.
//! * [`solve_alpha1`] and [`solve_z2`]: single-LP special cases.

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{solve_approx_mean, solve_approx_v, ApproxReport};
use crate::criterion::{dot, evaluate, hurwicz_of_costs};
use crate::error::{Error, Result};
use crate::linopt::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::model::{binomial, FeasibleSet, Instance, MassFunction, Polytope};

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Decomposition,
    Exhaustive,
    #[serde(rename = "alpha1-lp")]
    Alpha1Lp,
    #[serde(rename = "z2-lp")]
    Z2Lp,
    ApproxV,
    ApproxMean,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Decomposition => "decomposition",
            Method::Exhaustive => "exhaustive",
            Method::Alpha1Lp => "alpha1-lp",
            Method::Z2Lp => "z2-lp",
            Method::ApproxV => "approx-v",
            Method::ApproxMean => "approx-mean",
        }
    }
}

/// A-priori or a-posteriori approximation guarantee.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bound {
    pub guarantee_factor: f64,
    /// `objective / guarantee_factor`, a lower bound on the optimum.
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub objective: f64,
    pub method: Method,
    pub subproblems_solved: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
    /// Chosen scenario per focal set for the decomposition method.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: DEFAULT_BUDGET, threads: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Decomposition,
    Exhaustive,
    Alpha1,
    Z2,
    ApproxV,
    ApproxMean,
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => MethodChoice::Auto,
            "decomposition" => MethodChoice::Decomposition,
            "exhaustive" => MethodChoice::Exhaustive,
            "alpha1" => MethodChoice::Alpha1,
            "z2" => MethodChoice::Z2,
            "approx-v" => MethodChoice::ApproxV,
            "approx-mean" => MethodChoice::ApproxMean,
            other => return Err(Error::Parse(format!("unknown method `{other}`"))),
        })
    }
}

/// The method `Auto` resolves to for `inst`.
pub fn auto_method(inst: &Instance) -> MethodChoice {
    let polytope = matches!(inst.feasible, FeasibleSet::Polytope(_));
    if inst.alpha == 1.0 {
        MethodChoice::Alpha1
    } else if polytope && inst.mass.z_value() <= 2 && inst.alpha >= 0.5 {
        MethodChoice::Z2
    } else if polytope {
        MethodChoice::Decomposition
    } else {
        MethodChoice::Exhaustive
    }
}

/// Validates `inst` and dispatches to the requested method.
pub fn solve(inst: &Instance, choice: MethodChoice, opts: &SolveOptions) -> Result<SolveReport> {
    inst.check()?;
    let choice = if choice == MethodChoice::Auto { auto_method(inst) } else { choice };
    log::info!("solving with {choice:?}: K = {}, n = {}", inst.num_scenarios(), inst.feasible.dim());
    let report = match choice {
        MethodChoice::Auto => unreachable!("resolved above"),
        MethodChoice::Decomposition => solve_exact_decomposition(inst, opts),
        MethodChoice::Exhaustive => solve_exact_selection(inst, opts),
        MethodChoice::Alpha1 => solve_alpha1(inst, opts),
        MethodChoice::Z2 => solve_z2(inst),
        MethodChoice::ApproxV => solve_approx_v(inst).map(ApproxReport::into_solve_report),
        MethodChoice::ApproxMean => solve_approx_mean(inst).map(ApproxReport::into_solve_report),
    }?;
    log::info!("objective {} after {} subproblems", report.objective, report.subproblems_solved);
    Ok(report)
}

pub(crate) fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn polytope_of(inst: &Instance) -> Result<&Polytope> {
    match &inst.feasible {
        FeasibleSet::Polytope(p) => Ok(p),
        FeasibleSet::Selection { .. } => Err(Error::Precondition("method requires a polytope feasible set".into())),
    }
}

fn optimal(lp: &LinearProgram) -> Result<(f64, Vec<f64>)> {
    let r = solve_lp(lp)?;
    match r.status {
        LpStatus::Optimal => Ok((r.objective, r.x)),
        LpStatus::Infeasible => Err(Error::EmptyFeasibleSet),
        LpStatus::Unbounded => Err(Error::Precondition("subproblem is unbounded; the feasible set must be bounded".into())),
    }
}

/// `min d . x` over the feasible set: an LP for polytopes, the `p` cheapest
/// items (lowest index first on ties) for selection sets.
pub fn solve_linear(feasible: &FeasibleSet, d: &[f64]) -> Result<Vec<f64>> {
    match feasible {
        FeasibleSet::Polytope(p) => optimal(&p.lp_with(d.to_vec())).map(|(_, x)| x),
        FeasibleSet::Selection { n, p } => {
            let mut order: Vec<usize> = (0..*n).collect();
            order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
            let mut x = vec![0.0; *n];
            for &j in order.iter().take(*p) {
                x[j] = 1.0;
            }
            Ok(x)
        }
    }
}

/// Optimum of the per-assignment LP: `min sum_F m(F) y(F)` subject to
/// `y(F) >= alpha c_k x + (1 - alpha) c_{k_F} x` for `k in F`, `x` in the polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSolution {
    pub lp_value: f64,
    pub x: Vec<f64>,
    /// True criterion value of `x`; never above `lp_value` (up to LP tolerance).
    pub hurwicz: f64,
}

/// Solves the LP for a fixed choice `assignment[i] = k_F` (0-based scenario)
/// of the `i`-th focal set.
pub fn solve_assignment_lp(inst: &Instance, mass: &MassFunction, assignment: &[usize]) -> Result<AssignmentSolution> {
    let poly = polytope_of(inst)?;
    if assignment.len() != mass.len() {
        return Err(Error::DimensionMismatch { expected: mass.len(), got: assignment.len() });
    }
    for (f, k) in mass.focal_sets.iter().zip(assignment) {
        if !f.contains(*k) {
            return Err(Error::Precondition(format!("scenario {} is not in focal set {:?}", k + 1, f.indices)));
        }
    }
    let n = poly.dim();
    let alpha = inst.alpha;
    let sc = &inst.scenarios;
    let mut objective = vec![0.0; n];
    objective.extend(mass.focal_sets.iter().map(|f| f.mass));
    let mut lp = poly.lp_with(objective);
    let total = lp.num_vars();
    for (i, (f, &kf)) in mass.focal_sets.iter().zip(assignment).enumerate() {
        let chosen = sc.get(kf);
        for &k in &f.indices {
            let mut row = vec![0.0; total];
            for (j, (a, b)) in sc.get(k).iter().zip(chosen).enumerate() {
                row[j] = alpha * a + (1.0 - alpha) * b;
            }
            row[n + i] = -1.0;
            lp.add_constraint(row, Relation::Le, 0.0);
        }
    }
    let (lp_value, sol) = optimal(&lp)?;
    let x = sol[..n].to_vec();
    let costs: Vec<f64> = sc.scenarios.iter().map(|c| dot(&x, c)).collect();
    let hurwicz = hurwicz_of_costs(mass, alpha, &costs);
    Ok(AssignmentSolution { lp_value, x, hurwicz })
}

fn decode_assignment(mass: &MassFunction, mut rank: u64) -> Vec<usize> {
    let mut digits = vec![0; mass.len()];
    for (i, f) in mass.focal_sets.iter().enumerate().rev() {
        let radix = f.len() as u64;
        digits[i] = f.indices[(rank % radix) as usize];
        rank /= radix;
    }
    digits
}

fn assignment_count(mass: &MassFunction) -> Option<u128> {
    mass.focal_sets.iter().try_fold(1u128, |acc, f| acc.checked_mul(f.len() as u128))
}

/// Exact solver for polytopes by enumerating all `prod_F |F|` choices of the
/// minimizing scenario per focal set.
///
/// Each subproblem's optimizer is re-scored under the true criterion; the
/// best re-scored point is returned, with ties going to the earliest
/// assignment in mixed-radix order (first focal set most significant).
pub fn solve_exact_decomposition(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    polytope_of(inst)?;
    let mass = inst.mass.explicit()?;
    let required = assignment_count(&mass).unwrap_or(u128::MAX);
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { what: "decomposition", required, budget: opts.budget });
    }
    let count = required as u64;

    let best = in_pool(opts.threads, || {
        (0..count)
            .into_par_iter()
            .map(|rank| {
                let assignment = decode_assignment(&mass, rank);
                solve_assignment_lp(inst, &mass, &assignment).map(|s| (s.hurwicz, rank, s.x))
            })
            .try_reduce_with(|a, b| Ok(if (b.0, b.1) < (a.0, a.1) { b } else { a }))
    });
    let (_, rank, x) = best.expect("at least one assignment")?;

    let eval = evaluate(inst, &x)?;
    Ok(SolveReport {
        x,
        objective: eval.hurwicz,
        method: Method::Decomposition,
        subproblems_solved: count,
        bound: None,
        assignment: Some(decode_assignment(&mass, rank)),
    })
}

/// The `rank`-th `p`-subset of `0..n` in lexicographic order.
fn unrank_combination(mut rank: u128, n: usize, p: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(p);
    let mut next = 0;
    for slot in 0..p {
        let remaining = p - slot - 1;
        loop {
            let with_next = binomial(n - next - 1, remaining).unwrap_or(u128::MAX);
            if rank < with_next {
                out.push(next);
                next += 1;
                break;
            }
            rank -= with_next;
            next += 1;
        }
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let p = idx.len();
    let Some(i) = (0..p).rev().find(|&i| idx[i] < n - p + i) else { return false };
    idx[i] += 1;
    for j in i + 1..p {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Exact solver for selection sets by scoring every `p`-subset.
///
/// Returns the lexicographically smallest optimal 0/1 vector (ties within
/// `1e-12` relative).
pub fn solve_exact_selection(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    let FeasibleSet::Selection { n, p } = inst.feasible else {
        return Err(Error::Precondition("exhaustive search requires a selection feasible set".into()));
    };
    let mass = inst.mass.explicit()?;
    let required = binomial(n, p).unwrap_or(u128::MAX);
    if required > opts.budget as u128 {
        return Err(Error::BudgetExceeded { what: "exhaustive search", required, budget: opts.budget });
    }
    let count = required as u64;
    const BLOCK: u64 = 4096;
    let sc = &inst.scenarios;

    let values: Vec<f64> = in_pool(opts.threads, || {
        (0..count.div_ceil(BLOCK))
            .into_par_iter()
            .flat_map_iter(|block| {
                let start = block * BLOCK;
                let len = BLOCK.min(count - start);
                let mut idx = unrank_combination(start as u128, n, p);
                let mut costs = vec![0.0; sc.len()];
                let mut out = Vec::with_capacity(len as usize);
                for step in 0..len {
                    for (k, c) in sc.scenarios.iter().enumerate() {
                        costs[k] = idx.iter().map(|&j| c[j]).sum();
                    }
                    out.push(hurwicz_of_costs(&mass, inst.alpha, &costs));
                    if step + 1 < len {
                        next_combination(&mut idx, n);
                    }
                }
                out
            })
            .collect()
    });

    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * (1.0 + min.abs());
    // Later ranks have lexicographically smaller indicator vectors.
    let rank = values.iter().rposition(|&v| v <= min + tol).expect("nonempty enumeration");
    let mut x = vec![0.0; n];
    for j in unrank_combination(rank as u128, n, p) {
        x[j] = 1.0;
    }
    let eval = evaluate(inst, &x)?;
    Ok(SolveReport { x, objective: eval.hurwicz, method: Method::Exhaustive, subproblems_solved: count, bound: None, assignment: None })
}

/// `alpha = 1`: a single LP `min sum_F m(F) y(F)`, `y(F) >= c_k x` for `k in F`.
/// Selection sets fall back to exhaustive search.
pub fn solve_alpha1(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport> {
    if inst.alpha != 1.0 {
        return Err(Error::Precondition(format!("alpha1 method needs alpha = 1, got {}", inst.alpha)));
    }
    let poly = match &inst.feasible {
        FeasibleSet::Polytope(p) => p,
        FeasibleSet::Selection { .. } => return solve_exact_selection(inst, opts),
    };
    let mass = inst.mass.explicit()?;
    let n = poly.dim();
    let mut objective = vec![0.0; n];
    objective.extend(mass.focal_sets.iter().map(|f| f.mass));
    let mut lp = poly.lp_with(objective);
    let total = lp.num_vars();
    for (i, f) in mass.focal_sets.iter().enumerate() {
        for &k in &f.indices {
            let mut row = vec![0.0; total];
            row[..n].copy_from_slice(inst.scenarios.get(k));
            row[n + i] = -1.0;
            lp.add_constraint(row, Relation::Le, 0.0);
        }
    }
    let (_, sol) = optimal(&lp)?;
    let x = sol[..n].to_vec();
    let eval = evaluate(inst, &x)?;
    Ok(SolveReport { x, objective: eval.hurwicz, method: Method::Alpha1Lp, subproblems_solved: 1, bound: None, assignment: None })
}

/// Focal sets of size at most two with `alpha >= 0.5`: one LP with
/// `y_ij >= alpha c_i x + (1 - alpha) c_j x` and the symmetric cut per pair.
pub fn solve_z2(inst: &Instance) -> Result<SolveReport> {
    let poly = polytope_of(inst)?;
    if inst.alpha < 0.5 {
        return Err(Error::Precondition(format!("z2 method needs alpha >= 0.5, got {}", inst.alpha)));
    }
    let mass = inst.mass.explicit()?;
    if let Some(f) = mass.focal_sets.iter().find(|f| f.len() > 2) {
        let shown: Vec<usize> = f.indices.iter().map(|k| k + 1).collect();
        return Err(Error::Precondition(format!("z2 method needs focal sets of size <= 2, found {shown:?}")));
    }
    let n = poly.dim();
    let alpha = inst.alpha;
    let sc = &inst.scenarios;
    let pairs: Vec<_> = mass.focal_sets.iter().filter(|f| f.len() == 2).collect();

    let mut objective = vec![0.0; n];
    for f in mass.focal_sets.iter().filter(|f| f.len() == 1) {
        for (o, c) in objective.iter_mut().zip(sc.get(f.indices[0])) {
            *o += f.mass * c;
        }
    }
    objective.extend(pairs.iter().map(|f| f.mass));
    let mut lp = poly.lp_with(objective);
    let total = lp.num_vars();
    for (p, f) in pairs.iter().enumerate() {
        let (ci, cj) = (sc.get(f.indices[0]), sc.get(f.indices[1]));
        for (hi, lo) in [(ci, cj), (cj, ci)] {
            let mut row = vec![0.0; total];
            for j in 0..n {
                row[j] = alpha * hi[j] + (1.0 - alpha) * lo[j];
            }
            row[n + p] = -1.0;
            lp.add_constraint(row, Relation::Le, 0.0);
        }
    }
    let (_, sol) = optimal(&lp)?;
    let x = sol[..n].to_vec();
    let eval = evaluate(inst, &x)?;
    Ok(SolveReport { x, objective: eval.hurwicz, method: Method::Z2Lp, subproblems_solved: 1, bound: None, assignment: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MassModel, ScenarioSet};

    fn poly_instance(scenarios: Vec<Vec<f64>>, pairs: Vec<(Vec<usize>, f64)>, poly: Polytope, alpha: f64) -> Instance {
        let k = scenarios.len();
        Instance::new(ScenarioSet::new(scenarios), MassFunction::from_pairs(k, pairs).unwrap(), FeasibleSet::Polytope(poly), alpha)
            .unwrap()
    }

    /// x1 + x2 >= 1 inside the unit square.
    fn cover2() -> Polytope {
        Polytope::new(vec![vec![-1.0, -1.0]], vec![-1.0], vec![1.0, 1.0])
    }

    #[test]
    fn single_scenario_is_plain_lp() {
        let inst = poly_instance(vec![vec![3.0, 2.0]], vec![(vec![0], 1.0)], cover2(), 0.4);
        let r = solve_exact_decomposition(&inst, &SolveOptions::default()).unwrap();
        assert!((r.objective - 2.0).abs() < 1e-9);
        assert_eq!(r.x, vec![0.0, 1.0]);
        assert_eq!(r.subproblems_solved, 1);
    }

    #[test]
    fn hurwicz_two_scenarios_hand_checked() {
        // c1 = (1, 4), c2 = (4, 1), m({1,2}) = 1, alpha = 0.5 on x1 + x2 >= 1.
        // H(x) = 0.5 max + 0.5 min = 0.5 (c1 + c2) x = 2.5 (x1 + x2) -> 2.5.
        let inst = poly_instance(vec![vec![1.0, 4.0], vec![4.0, 1.0]], vec![(vec![0, 1], 1.0)], cover2(), 0.5);
        let r = solve_exact_decomposition(&inst, &SolveOptions::default()).unwrap();
        assert!((r.objective - 2.5).abs() < 1e-9);
        // alpha = 0 picks a vertex where one scenario costs 1.
        let r = solve_exact_decomposition(&inst.with_alpha(0.0), &SolveOptions::default()).unwrap();
        assert!((r.objective - 1.0).abs() < 1e-9);
        // alpha = 1: min-max is attained at (0.5, 0.5) with value 2.5.
        let r = solve_alpha1(&inst.with_alpha(1.0), &SolveOptions::default()).unwrap();
        assert!((r.objective - 2.5).abs() < 1e-9);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = poly_instance(
            vec![vec![1.0, 4.0], vec![4.0, 1.0], vec![2.0, 2.0]],
            vec![(vec![0, 1, 2], 0.5), (vec![0, 1], 0.5)],
            cover2(),
            0.3,
        );
        let opts = SolveOptions { budget: 5, threads: Some(1) };
        assert!(matches!(solve_exact_decomposition(&inst, &opts), Err(Error::BudgetExceeded { required: 6, .. })));
    }

    #[test]
    fn decomposition_matches_alpha1_and_z2() {
        let inst = poly_instance(
            vec![vec![1.0, 4.0, 2.0], vec![4.0, 1.0, 3.0], vec![2.5, 2.5, 0.5]],
            vec![(vec![0, 1], 0.3), (vec![2], 0.2), (vec![1, 2], 0.5)],
            Polytope::new(vec![vec![-1.0, -1.0, -1.0], vec![-1.0, 0.0, -2.0]], vec![-1.5, -1.0], vec![1.0, 1.0, 1.0]),
            1.0,
        );
        let opts = SolveOptions::default();
        let a = solve_alpha1(&inst, &opts).unwrap();
        let d = solve_exact_decomposition(&inst, &opts).unwrap();
        assert!((a.objective - d.objective).abs() < 1e-7);
        for alpha in [0.5, 0.8] {
            let inst = inst.with_alpha(alpha);
            let z = solve_z2(&inst).unwrap();
            let d = solve_exact_decomposition(&inst, &opts).unwrap();
            assert!((z.objective - d.objective).abs() < 1e-7, "alpha {alpha}");
        }
    }

    #[test]
    fn z2_preconditions() {
        let inst = poly_instance(vec![vec![1.0, 1.0]; 3], vec![(vec![0, 1, 2], 1.0)], cover2(), 0.7);
        assert!(matches!(solve_z2(&inst), Err(Error::Precondition(m)) if m.contains("[1, 2, 3]")));
        let inst = poly_instance(vec![vec![1.0, 1.0]; 2], vec![(vec![0, 1], 1.0)], cover2(), 0.2);
        assert!(matches!(solve_z2(&inst), Err(Error::Precondition(m)) if m.contains("alpha")));
        assert!(matches!(solve_alpha1(&inst, &SolveOptions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn z2_singletons_and_midpoint() {
        let inst = poly_instance(vec![vec![1.0, 3.0], vec![3.0, 1.0]], vec![(vec![0], 0.5), (vec![1], 0.5)], cover2(), 0.9);
        let r = solve_z2(&inst).unwrap();
        assert!((r.objective - 2.0).abs() < 1e-9);
        let inst = poly_instance(vec![vec![1.0, 3.0], vec![3.0, 1.0]], vec![(vec![0, 1], 1.0)], cover2(), 0.5);
        let r = solve_z2(&inst).unwrap();
        assert!((r.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn unranking_matches_iteration() {
        let (n, p) = (7, 3);
        let mut idx: Vec<usize> = (0..p).collect();
        let mut rank = 0u128;
        loop {
            assert_eq!(unrank_combination(rank, n, p), idx);
            rank += 1;
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        assert_eq!(rank, 35);
    }

    fn selection_instance(scenarios: Vec<Vec<f64>>, pairs: Vec<(Vec<usize>, f64)>, p: usize, alpha: f64) -> Instance {
        let k = scenarios.len();
        let n = scenarios[0].len();
        Instance::new(ScenarioSet::new(scenarios), MassFunction::from_pairs(k, pairs).unwrap(), FeasibleSet::Selection { n, p }, alpha)
            .unwrap()
    }

    #[test]
    fn selection_p_equals_n() {
        let inst = selection_instance(vec![vec![1.0, 2.0, 3.0], vec![3.0, 0.0, 1.0]], vec![(vec![0, 1], 1.0)], 3, 0.3);
        let r = solve_exact_selection(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(r.x, vec![1.0; 3]);
        assert_eq!(r.objective, evaluate(&inst, &[1.0; 3]).unwrap().hurwicz);
    }

    #[test]
    fn selection_single_scenario_picks_cheapest() {
        let inst = selection_instance(vec![vec![5.0, 1.0, 4.0, 2.0, 3.0]], vec![(vec![0], 1.0)], 2, 0.5);
        let r = solve_exact_selection(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(r.x, vec![0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(r.subproblems_solved, 10);
    }

    #[test]
    fn selection_ties_prefer_smallest_vector() {
        let inst = selection_instance(vec![vec![1.0, 1.0, 1.0]], vec![(vec![0], 1.0)], 1, 0.5);
        let r = solve_exact_selection(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(r.x, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn auto_dispatch() {
        let inst = poly_instance(vec![vec![1.0, 2.0]; 3], vec![(vec![0, 1], 0.5), (vec![2], 0.5)], cover2(), 1.0);
        assert_eq!(auto_method(&inst), MethodChoice::Alpha1);
        assert_eq!(auto_method(&inst.with_alpha(0.6)), MethodChoice::Z2);
        assert_eq!(auto_method(&inst.with_alpha(0.4)), MethodChoice::Decomposition);
        let owa = Instance { mass: MassModel::Owa(crate::model::OwaMass { num_scenarios: 3, cardinality: 3 }), ..inst.with_alpha(0.6) };
        assert_eq!(auto_method(&owa), MethodChoice::Decomposition);
        let r = solve(&owa, MethodChoice::Auto, &SolveOptions::default()).unwrap();
        assert_eq!(r.method, Method::Decomposition);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let inst = poly_instance(
            vec![vec![1.0, 4.0, 2.0], vec![4.0, 1.0, 3.0], vec![2.5, 2.5, 0.5], vec![0.0, 3.0, 3.0]],
            vec![(vec![0, 1, 3], 0.3), (vec![2, 3], 0.2), (vec![1, 2], 0.5)],
            Polytope::new(vec![vec![-1.0, -1.0, -1.0]], vec![-1.2], vec![1.0, 1.0, 1.0]),
            0.3,
        );
        let serial = solve_exact_decomposition(&inst, &SolveOptions { budget: 100, threads: Some(1) }).unwrap();
        let parallel = solve_exact_decomposition(&inst, &SolveOptions { budget: 100, threads: Some(4) }).unwrap();
        assert_eq!(serial, parallel);
    }
}
