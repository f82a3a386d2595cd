//! Instance generators: seeded random instances and the reduction from
//! MINSAT (2-literal clauses) to the Hurwicz problem with OWA masses.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::criterion::owa_mass;
use crate::error::{Error, Result};
use crate::model::{binomial, FeasibleSet, FocalSet, Instance, MassFunction, MassModel, OwaMass, Polytope, ScenarioSet};

/// Largest `K = 3r` for which the OWA mass is written out explicitly.
pub const MINSAT_EXPLICIT_MAX_K: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinsatInstance {
    pub num_vars: usize,
    /// Each clause has at most two literals.
    pub clauses: Vec<Vec<Literal>>,
    /// Asks for an assignment leaving at least `threshold` clauses unsatisfied.
    pub threshold: usize,
}

impl MinsatInstance {
    pub fn validate(&self) -> Result<()> {
        if self.threshold >= self.clauses.len() {
            return Err(Error::Precondition(format!(
                "threshold {} must be below the clause count {}",
                self.threshold,
                self.clauses.len()
            )));
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if c.len() > 2 {
                return Err(Error::Precondition(format!("clause {} has more than two literals", i + 1)));
            }
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > self.num_vars) {
                return Err(Error::Precondition(format!("clause {} references variable {}", i + 1, l.var)));
            }
        }
        Ok(())
    }

    /// Number of clauses left unsatisfied by `assignment` (`q_1..q_s`).
    pub fn unsatisfied(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| !c.iter().any(|l| assignment[l.var - 1] == l.positive)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinsatOptions {
    /// Allow the compact OWA form when `3r` exceeds the explicit cap.
    pub allow_implicit: bool,
}

impl Default for MinsatOptions {
    fn default() -> Self {
        MinsatOptions { allow_implicit: true }
    }
}

/// The generated instance and the clause list after padding.
#[derive(Debug, Clone, PartialEq)]
pub struct MinsatReduction {
    pub instance: Instance,
    /// Original clauses followed by the padding clauses.
    pub padded: MinsatInstance,
}

/// Pads to `t` even with `r = t / 2`: empty (never satisfied) clauses when
/// `r` is small, tautologies `(q_1 or not q_1)` when it is large.
fn pad(ms: &MinsatInstance) -> MinsatInstance {
    let t = ms.clauses.len();
    let r = ms.threshold;
    let mut padded = ms.clone();
    if 2 * r < t {
        let d = t - 2 * r;
        padded.clauses.extend(std::iter::repeat_n(Vec::new(), d));
        padded.threshold = r + d;
    } else {
        let tautology = vec![Literal { var: 1, positive: true }, Literal { var: 1, positive: false }];
        padded.clauses.extend(std::iter::repeat_n(tautology, 2 * r - t));
    }
    padded
}

/// Builds the reduction instance with `alpha = 0`; variables are ordered
/// `x_1, not x_1, ..., x_{s+1}, not x_{s+1}`.
pub fn generate_minsat_robf(ms: &MinsatInstance, opts: &MinsatOptions) -> Result<MinsatReduction> {
    ms.validate()?;
    let padded = pad(ms);
    let s = padded.num_vars;
    let r = padded.threshold;
    let n = 2 * s + 2;
    let k = 3 * r;

    let mut scenarios = Vec::with_capacity(k);
    for clause in &padded.clauses {
        let mut c = vec![0.0; n];
        for l in clause {
            c[2 * (l.var - 1) + usize::from(!l.positive)] = 1.0;
        }
        scenarios.push(c);
    }
    for _ in 0..r {
        let mut c = vec![0.0; n];
        c[2 * s] = 2.0;
        c[2 * s + 1] = 2.0;
        scenarios.push(c);
    }

    let mut a = Vec::with_capacity(2 * (s + 1));
    let mut b = Vec::with_capacity(2 * (s + 1));
    for i in 0..=s {
        let mut row = vec![0.0; n];
        row[2 * i] = 1.0;
        row[2 * i + 1] = 1.0;
        a.push(row.clone());
        b.push(1.0);
        a.push(row.iter().map(|v| -v).collect());
        b.push(-1.0);
    }

    let l = 2 * r + 1;
    let mass = if k <= MINSAT_EXPLICIT_MAX_K {
        MassModel::Explicit(owa_mass(k, l)?)
    } else if opts.allow_implicit {
        MassModel::Owa(OwaMass { num_scenarios: k, cardinality: l })
    } else {
        return Err(Error::Precondition(format!(
            "the reduction has C({k}, {l}) focal sets; enable the implicit OWA form to generate it"
        )));
    };
    let instance = Instance::new(
        ScenarioSet::new(scenarios),
        mass,
        FeasibleSet::Polytope(Polytope::new(a, b, vec![1.0; n])),
        0.0,
    )?;
    Ok(MinsatReduction { instance, padded })
}

/// The 0/1 solution encoding `assignment`, with `x_{s+1} = 1`.
pub fn assignment_to_x(assignment: &[bool]) -> Vec<f64> {
    let mut x = Vec::with_capacity(2 * assignment.len() + 2);
    for &q in assignment.iter().chain(std::iter::once(&true)) {
        x.push(if q { 1.0 } else { 0.0 });
        x.push(if q { 0.0 } else { 1.0 });
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeasibleKind {
    Polytope,
    Selection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub num_scenarios: usize,
    pub dim: usize,
    pub num_focal: usize,
    pub max_focal_size: usize,
    pub feasible: FeasibleKind,
    /// Cardinality for selection sets; ignored for polytopes.
    pub p: usize,
    pub alpha: f64,
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Deterministic random instance.
///
/// Costs are uniform on `[0, 10]` rounded to three decimals. Focal sets are
/// distinct, with sizes uniform on `1..=max_focal_size`; masses are
/// normalized uniform draws. Polytopes are covering sets
/// `{x in [0, 1]^n : a_i x >= d_i}` with `d_i` between 20% and 60% of
/// `sum a_i`, so the all-ones point is always feasible.
pub fn generate_random(spec: &RandomSpec, seed: u64) -> Result<Instance> {
    let RandomSpec { num_scenarios: k, dim, num_focal, max_focal_size, feasible, p, alpha } = *spec;
    if k == 0 || dim == 0 || num_focal == 0 || max_focal_size == 0 || max_focal_size > k {
        return Err(Error::Precondition("need K, dim, focal count >= 1 and focal size in 1..=K".into()));
    }
    let available = (1..=max_focal_size).try_fold(0u128, |acc, s| binomial(k, s).and_then(|b| acc.checked_add(b)));
    if available.is_some_and(|a| (num_focal as u128) > a) {
        return Err(Error::Precondition(format!("only {} distinct focal sets of size <= {max_focal_size} exist", available.unwrap())));
    }
    if feasible == FeasibleKind::Selection && !(1..=dim).contains(&p) {
        return Err(Error::Precondition(format!("selection needs 1 <= p <= {dim}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scenarios: Vec<Vec<f64>> = (0..k).map(|_| (0..dim).map(|_| round3(rng.gen_range(0.0..=10.0))).collect()).collect();

    let mut seen = HashSet::new();
    let mut sets = Vec::with_capacity(num_focal);
    while sets.len() < num_focal {
        let size = rng.gen_range(1..=max_focal_size);
        let mut indices = sample(&mut rng, k, size).into_vec();
        indices.sort_unstable();
        if seen.insert(indices.clone()) {
            sets.push(indices);
        }
    }
    let draws: Vec<f64> = (0..num_focal).map(|_| rng.gen_range(0.05..=1.0)).collect();
    let total: f64 = draws.iter().sum();
    let focal_sets = sets.into_iter().zip(draws).map(|(indices, w)| FocalSet { indices, mass: w / total }).collect();
    let mass = MassFunction::new(k, focal_sets)?;

    let feasible = match feasible {
        FeasibleKind::Selection => FeasibleSet::Selection { n: dim, p },
        FeasibleKind::Polytope => {
            let rows = dim.div_ceil(2);
            let mut a = Vec::with_capacity(rows);
            let mut b = Vec::with_capacity(rows);
            for _ in 0..rows {
                let mut row: Vec<f64> = (0..dim).map(|_| round3(rng.gen_range(0.0..=1.0))).collect();
                if row.iter().all(|&v| v == 0.0) {
                    row[0] = 1.0;
                }
                let d = round3(rng.gen_range(0.2..=0.6) * row.iter().sum::<f64>());
                a.push(row.iter().map(|v| -v).collect());
                b.push(-d);
            }
            FeasibleSet::Polytope(Polytope::new(a, b, vec![1.0; dim]))
        }
    };
    Instance::new(ScenarioSet::new(scenarios), mass, feasible, alpha)
}

/// A random feasible point: a uniform `p`-subset for selection sets; for
/// polytopes a uniform box point pushed toward the upper bounds until all
/// rows hold (the top corner must be feasible).
pub fn random_feasible_x(feasible: &FeasibleSet, rng: &mut impl Rng) -> Result<Vec<f64>> {
    match feasible {
        FeasibleSet::Selection { n, p } => {
            let mut x = vec![0.0; *n];
            for j in sample(rng, *n, *p) {
                x[j] = 1.0;
            }
            Ok(x)
        }
        FeasibleSet::Polytope(poly) => {
            if poly.upper.iter().any(|u| !u.is_finite()) || poly.max_violation(&poly.upper) > 0.0 {
                return Err(Error::Precondition("random points need a finite box whose top corner is feasible".into()));
            }
            let x: Vec<f64> = poly.upper.iter().map(|&u| rng.gen_range(0.0..=u)).collect();
            let gap: Vec<f64> = poly.upper.iter().zip(&x).map(|(u, v)| u - v).collect();
            let mut t: f64 = 0.0;
            for (row, &b) in poly.a.iter().zip(&poly.b) {
                let at_x: f64 = row.iter().zip(&x).map(|(a, v)| a * v).sum();
                let slope: f64 = row.iter().zip(&gap).map(|(a, g)| a * g).sum();
                if at_x > b && slope < 0.0 {
                    t = t.max((at_x - b) / -slope);
                }
            }
            let t = t.min(1.0);
            let mut out: Vec<f64> = x.iter().zip(&gap).map(|(v, g)| v + t * g).collect();
            if poly.max_violation(&out) > 1e-9 {
                out = poly.upper.clone();
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{evaluate, owa_evaluate, owa_weights};

    fn lit(var: usize, positive: bool) -> Literal {
        Literal { var, positive }
    }

    #[test]
    fn single_clause_is_padded() {
        let ms = MinsatInstance { num_vars: 1, clauses: vec![vec![lit(1, true)]], threshold: 0 };
        let red = generate_minsat_robf(&ms, &MinsatOptions::default()).unwrap();
        assert_eq!(red.padded.clauses.len(), 2);
        assert_eq!(red.padded.threshold, 1);
        assert_eq!(red.instance.num_scenarios(), 3);
        assert_eq!(red.instance.scenarios.dim, 4);
        assert_eq!(red.instance.scenarios.scenarios[0], vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(red.instance.scenarios.scenarios[1], vec![0.0; 4]);
        assert_eq!(red.instance.scenarios.scenarios[2], vec![0.0, 0.0, 2.0, 2.0]);
        assert_eq!(red.instance.mass.z_value(), 3);
    }

    #[test]
    fn large_threshold_pads_with_tautologies() {
        let ms = MinsatInstance { num_vars: 2, clauses: vec![vec![lit(1, true)], vec![lit(2, false)], vec![lit(1, false)]], threshold: 2 };
        let red = generate_minsat_robf(&ms, &MinsatOptions::default()).unwrap();
        assert_eq!(red.padded.clauses.len(), 4);
        assert_eq!(red.padded.threshold, 2);
        assert_eq!(red.instance.scenarios.scenarios[3], vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        for a in [[false, false], [true, false], [true, true]] {
            assert_eq!(red.padded.unsatisfied(&a), ms.unsatisfied(&a));
        }
    }

    #[test]
    fn implicit_mass_for_large_instances() {
        let clauses = (0..10).map(|i| vec![lit(i % 3 + 1, i % 2 == 0)]).collect();
        let ms = MinsatInstance { num_vars: 3, clauses, threshold: 5 };
        let red = generate_minsat_robf(&ms, &MinsatOptions::default()).unwrap();
        assert!(matches!(red.instance.mass, MassModel::Owa(OwaMass { num_scenarios: 15, cardinality: 11 })));
        assert!(generate_minsat_robf(&ms, &MinsatOptions { allow_implicit: false }).is_err());
    }

    #[test]
    fn lower_owa_is_zero_iff_enough_unsatisfied() {
        let ms = MinsatInstance {
            num_vars: 2,
            clauses: vec![vec![lit(1, true)], vec![lit(2, true)], vec![lit(1, false), lit(2, false)], vec![lit(1, true), lit(2, false)]],
            threshold: 2,
        };
        let red = generate_minsat_robf(&ms, &MinsatOptions::default()).unwrap();
        let k = red.instance.num_scenarios();
        let (_, w_rev) = owa_weights(k, 2 * red.padded.threshold + 1).unwrap();
        for bits in 0..4u32 {
            let a = [bits & 1 == 1, bits & 2 == 2];
            let eval = evaluate(&red.instance, &assignment_to_x(&a)).unwrap();
            let owa = owa_evaluate(&w_rev, &eval.per_scenario_costs);
            assert_eq!(owa == 0.0, ms.unsatisfied(&a) >= ms.threshold, "{a:?}");
            assert!((eval.lower_expectation - owa).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_minsat_rejected() {
        let ms = MinsatInstance { num_vars: 1, clauses: vec![vec![lit(2, true)], vec![]], threshold: 0 };
        assert!(generate_minsat_robf(&ms, &MinsatOptions::default()).is_err());
        let ms = MinsatInstance { num_vars: 1, clauses: vec![vec![lit(1, true)]], threshold: 1 };
        assert!(generate_minsat_robf(&ms, &MinsatOptions::default()).is_err());
    }

    fn spec(feasible: FeasibleKind) -> RandomSpec {
        RandomSpec { num_scenarios: 5, dim: 4, num_focal: 4, max_focal_size: 3, feasible, p: 2, alpha: 0.4 }
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        for kind in [FeasibleKind::Polytope, FeasibleKind::Selection] {
            let a = generate_random(&spec(kind), 11).unwrap();
            let b = generate_random(&spec(kind), 11).unwrap();
            assert_eq!(a, b);
            assert!(crate::model::validate_instance(&a).is_empty());
            assert_ne!(a, generate_random(&spec(kind), 12).unwrap());
        }
    }

    #[test]
    fn singleton_regime() {
        let s = RandomSpec { num_scenarios: 4, dim: 3, num_focal: 4, max_focal_size: 1, ..spec(FeasibleKind::Selection) };
        let inst = generate_random(&s, 3).unwrap();
        assert_eq!(inst.mass.z_value(), 1);
        assert_eq!(inst.mass.num_focal_sets(), Some(4));
        let too_many = RandomSpec { num_focal: 5, ..s };
        assert!(generate_random(&too_many, 3).is_err());
    }

    #[test]
    fn random_points_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..30 {
            for kind in [FeasibleKind::Polytope, FeasibleKind::Selection] {
                let inst = generate_random(&spec(kind), seed).unwrap();
                let x = random_feasible_x(&inst.feasible, &mut rng).unwrap();
                inst.feasible.check_member(&x).unwrap();
            }
        }
    }
}
