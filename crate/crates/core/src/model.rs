//! Scenario sets, mass functions, feasible sets, and their validation.
//!
//! Scenario indices are 0-based everywhere in the library API. The instance
//! file format and the CLI use 1-based indices and convert at the boundary.

use std::borrow::Cow;
use std::collections::HashSet;

use crate::criterion::owa_mass;
use crate::error::{Error, Result, Violation};
use crate::linopt::{solve_lp, LinearProgram, LpStatus, Relation};

/// Tolerance on the total mass of a mass function.
pub const MASS_SUM_TOL: f64 = 1e-9;
/// Feasibility tolerance for polytope membership of a solution.
pub const POLYTOPE_FEAS_TOL: f64 = 1e-8;

/// The finite uncertainty set: `K` cost vectors of length `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub dim: usize,
    pub scenarios: Vec<Vec<f64>>,
}

impl ScenarioSet {
    pub fn new(scenarios: Vec<Vec<f64>>) -> Self {
        let dim = scenarios.first().map_or(0, Vec::len);
        ScenarioSet { dim, scenarios }
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn get(&self, k: usize) -> &[f64] {
        &self.scenarios[k]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocalSet {
    /// Distinct 0-based scenario indices, kept sorted by the constructors.
    pub indices: Vec<usize>,
    pub mass: f64,
}

impl FocalSet {
    pub fn new(mut indices: Vec<usize>, mass: f64) -> Self {
        indices.sort_unstable();
        FocalSet { indices, mass }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.contains(&k)
    }
}

/// An explicitly listed mass function over `num_scenarios` scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    pub num_scenarios: usize,
    pub focal_sets: Vec<FocalSet>,
}

impl MassFunction {
    /// Builds a validated mass function. Focal sets with zero mass are
    /// dropped with a warning; everything else that breaks an invariant is
    /// rejected.
    pub fn new(num_scenarios: usize, focal_sets: Vec<FocalSet>) -> Result<Self> {
        let focal_sets = focal_sets
            .into_iter()
            .filter(|f| {
                if f.mass == 0.0 {
                    log::warn!("dropping zero-mass focal set {:?}", f.indices);
                    false
                } else {
                    true
                }
            })
            .map(|f| FocalSet::new(f.indices, f.mass))
            .collect();
        let mass = MassFunction { num_scenarios, focal_sets };
        let violations = validate_mass(&mass);
        if violations.is_empty() {
            Ok(mass)
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    /// Convenience constructor from `(indices, mass)` pairs.
    pub fn from_pairs<I>(num_scenarios: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        Self::new(num_scenarios, pairs.into_iter().map(|(s, m)| FocalSet::new(s, m)).collect())
    }

    pub fn len(&self) -> usize {
        self.focal_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal_sets.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.focal_sets.iter().map(|f| f.mass).sum()
    }
}

/// The uniform mass over all `cardinality`-subsets of `[K]`, kept implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OwaMass {
    pub num_scenarios: usize,
    pub cardinality: usize,
}

/// Either an explicit list of focal sets or a rule-based OWA mass.
#[derive(Debug, Clone, PartialEq)]
pub enum MassModel {
    Explicit(MassFunction),
    Owa(OwaMass),
}

impl From<MassFunction> for MassModel {
    fn from(m: MassFunction) -> Self {
        MassModel::Explicit(m)
    }
}

impl MassModel {
    pub fn num_scenarios(&self) -> usize {
        match self {
            MassModel::Explicit(m) => m.num_scenarios,
            MassModel::Owa(o) => o.num_scenarios,
        }
    }

    pub fn z_value(&self) -> usize {
        match self {
            MassModel::Explicit(m) => z_value(m),
            MassModel::Owa(o) => o.cardinality,
        }
    }

    /// Number of focal sets, `C(K, l)` for the implicit form.
    pub fn num_focal_sets(&self) -> Option<u128> {
        match self {
            MassModel::Explicit(m) => Some(m.len() as u128),
            MassModel::Owa(o) => binomial(o.num_scenarios, o.cardinality),
        }
    }

    pub fn belief(&self, set: &[usize]) -> Result<f64> {
        match self {
            MassModel::Explicit(m) => belief(m, set),
            MassModel::Owa(o) => {
                let inside = membership(o.num_scenarios, set)?.iter().filter(|&&b| b).count();
                let total = binomial(o.num_scenarios, o.cardinality)
                    .ok_or(Error::CombinatorialOverflow { n: o.num_scenarios, k: o.cardinality })?;
                let within = binomial(inside, o.cardinality).unwrap_or(0);
                Ok(within as f64 / total as f64)
            }
        }
    }

    /// The explicit focal sets, materializing an OWA mass if needed.
    pub fn explicit(&self) -> Result<Cow<'_, MassFunction>> {
        match self {
            MassModel::Explicit(m) => Ok(Cow::Borrowed(m)),
            MassModel::Owa(o) => Ok(Cow::Owned(owa_mass(o.num_scenarios, o.cardinality)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    /// Rows of `A` in `A x <= b`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    /// Upper bounds on `x`; `f64::INFINITY` marks an unbounded coordinate.
    pub upper: Vec<f64>,
}

impl Polytope {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, upper: Vec<f64>) -> Self {
        Polytope { a, b, upper }
    }

    /// The box `[0, 1]^n` with no further rows.
    pub fn unit_box(n: usize) -> Self {
        Polytope { a: Vec::new(), b: Vec::new(), upper: vec![1.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, &rhs) in self.a.iter().zip(&self.b) {
            let act: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
            worst = worst.max(act - rhs);
        }
        for (&v, &u) in x.iter().zip(&self.upper) {
            worst = worst.max(-v).max(v - u);
        }
        worst
    }

    /// An LP with `self.dim() + extra` variables whose first `dim` columns
    /// are `x` constrained to this polytope; further rows may be appended.
    pub(crate) fn lp_with(&self, objective: Vec<f64>) -> LinearProgram {
        let total = objective.len();
        let n = self.dim();
        let mut lp = LinearProgram::new(objective);
        for (row, &rhs) in self.a.iter().zip(&self.b) {
            let mut coefs = row.clone();
            coefs.resize(total, 0.0);
            lp.add_constraint(coefs, Relation::Le, rhs);
        }
        for j in 0..n {
            lp.set_bounds(j, 0.0, self.upper[j]);
        }
        lp
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    Polytope(Polytope),
    /// `{x in {0,1}^n : sum x = p}`.
    Selection { n: usize, p: usize },
}

impl FeasibleSet {
    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Polytope(p) => p.dim(),
            FeasibleSet::Selection { n, .. } => *n,
        }
    }

    /// Largest violation of membership; selection sets allow no slack, so
    /// any non-binary entry or wrong cardinality counts at least as 1.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        match self {
            FeasibleSet::Polytope(p) => p.max_violation(x),
            FeasibleSet::Selection { p, .. } => {
                let mut worst: f64 = 0.0;
                for &v in x {
                    if v != 0.0 && v != 1.0 {
                        worst = worst.max(v.abs().max((v - 1.0).abs()).max(1.0));
                    }
                }
                let count = x.iter().filter(|&&v| v == 1.0).count();
                if count != *p {
                    worst = worst.max((count as f64 - *p as f64).abs());
                }
                worst
            }
        }
    }

    pub fn check_member(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        let violation = self.max_violation(x);
        let ok = match self {
            FeasibleSet::Polytope(_) => violation <= POLYTOPE_FEAS_TOL,
            FeasibleSet::Selection { .. } => violation == 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InfeasibleSolution { violation })
        }
    }
}

/// A complete problem: scenarios, mass, feasible set, and the pessimism
/// degree `alpha` (weight on the upper expectation).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub scenarios: ScenarioSet,
    pub mass: MassModel,
    pub feasible: FeasibleSet,
    pub alpha: f64,
}

impl Instance {
    pub fn new(scenarios: ScenarioSet, mass: impl Into<MassModel>, feasible: FeasibleSet, alpha: f64) -> Result<Self> {
        let inst = Instance { scenarios, mass: mass.into(), feasible, alpha };
        inst.check()?;
        Ok(inst)
    }

    pub fn check(&self) -> Result<()> {
        let violations = validate_instance(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn num_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Instance { alpha, ..self.clone() }
    }
}

/// Every invariant violation in `mass`; empty when valid.
pub fn validate_mass(mass: &MassFunction) -> Vec<Violation> {
    let k = mass.num_scenarios;
    let mut out = Vec::new();
    if mass.focal_sets.is_empty() {
        out.push(Violation::new("mass-empty", "no focal sets"));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for (i, f) in mass.focal_sets.iter().enumerate() {
        if f.indices.is_empty() {
            out.push(Violation::new("empty-focal-set", format!("focal set #{} is empty", i + 1)));
        }
        if let Some(&bad) = f.indices.iter().find(|&&j| j >= k) {
            let shown = bad.checked_add(1).map_or_else(|| "0".to_string(), |v| v.to_string());
            out.push(Violation::new("index-range", format!("focal set #{} references scenario {shown} outside 1..={k}", i + 1)));
        }
        let mut sorted = f.indices.clone();
        sorted.sort_unstable();
        let before = sorted.len();
        sorted.dedup();
        if sorted.len() != before {
            out.push(Violation::new("duplicate-index", format!("focal set #{} repeats a scenario", i + 1)));
        }
        if !seen.insert(sorted) {
            out.push(Violation::new("duplicate-focal-set", format!("focal set #{} is listed twice", i + 1)));
        }
        if !(f.mass > 0.0 && f.mass <= 1.0 + MASS_SUM_TOL) {
            out.push(Violation::new("mass-nonpositive", format!("focal set #{} has mass {}", i + 1, f.mass)));
        }
    }
    let total = mass.total_mass();
    if !mass.focal_sets.is_empty() && (total.is_nan() || (total - 1.0).abs() > MASS_SUM_TOL) {
        out.push(Violation::new("mass-sum", format!("masses sum to {total}")));
    }
    out
}

/// Every invariant violation in `inst`; empty when the instance is valid.
///
/// For polytopes this runs LP probes for nonemptiness and boundedness.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let sc = &inst.scenarios;
    if sc.dim == 0 {
        out.push(Violation::new("dim", "coefficient dimension must be positive"));
    }
    if sc.scenarios.is_empty() {
        out.push(Violation::new("scenario-count", "at least one scenario is required"));
    }
    for (k, c) in sc.scenarios.iter().enumerate() {
        if c.len() != sc.dim {
            out.push(Violation::new("scenario-dim", format!("scenario {} has {} entries, expected {}", k + 1, c.len(), sc.dim)));
        }
        if c.iter().any(|v| !v.is_finite()) {
            out.push(Violation::new("nonfinite-cost", format!("scenario {} has a non-finite entry", k + 1)));
        } else if c.iter().any(|&v| v < 0.0) {
            out.push(Violation::new("negative-cost", format!("scenario {} has a negative entry", k + 1)));
        }
    }

    if inst.mass.num_scenarios() != sc.len() {
        out.push(Violation::new(
            "num-scenarios",
            format!("mass is over {} scenarios but {} are listed", inst.mass.num_scenarios(), sc.len()),
        ));
    }
    match &inst.mass {
        MassModel::Explicit(m) => out.extend(validate_mass(m)),
        MassModel::Owa(o) => {
            if o.cardinality == 0 || o.cardinality > o.num_scenarios {
                out.push(Violation::new("owa-cardinality", format!("cardinality {} outside 1..={}", o.cardinality, o.num_scenarios)));
            } else if binomial(o.num_scenarios, o.cardinality).is_none() {
                out.push(Violation::new("owa-cardinality", "focal-set count overflows"));
            }
        }
    }

    if !(0.0..=1.0).contains(&inst.alpha) {
        out.push(Violation::new("alpha-range", format!("alpha = {} outside [0, 1]", inst.alpha)));
    }

    if inst.feasible.dim() != sc.dim {
        out.push(Violation::new("feasible-dim", format!("feasible set has dimension {}, scenarios {}", inst.feasible.dim(), sc.dim)));
    }
    match &inst.feasible {
        FeasibleSet::Selection { n, p } => {
            if *p < 1 || p > n {
                out.push(Violation::new("selection-p", format!("p = {p} outside 1..={n}")));
            }
        }
        FeasibleSet::Polytope(poly) => out.extend(validate_polytope(poly)),
    }
    out
}

fn validate_polytope(poly: &Polytope) -> Vec<Violation> {
    let n = poly.dim();
    let mut out = Vec::new();
    if poly.a.len() != poly.b.len() {
        out.push(Violation::new("polytope-shape", format!("A has {} rows but b has {}", poly.a.len(), poly.b.len())));
    }
    if let Some(i) = poly.a.iter().position(|r| r.len() != n) {
        out.push(Violation::new("polytope-shape", format!("row {} of A does not have {n} columns", i + 1)));
    }
    if poly.a.iter().flatten().chain(&poly.b).any(|v| !v.is_finite()) {
        out.push(Violation::new("polytope-shape", "A and b must be finite"));
    }
    if poly.upper.iter().any(|&u| u.is_nan() || u < 0.0) {
        out.push(Violation::new("polytope-bounds", "upper bounds must be nonnegative"));
    }
    if !out.is_empty() || n == 0 {
        return out;
    }
    let lp = poly.lp_with(vec![0.0; n]);
    match solve_lp(&lp) {
        Ok(r) if r.status == LpStatus::Optimal => {}
        Ok(_) => out.push(Violation::new("polytope-empty", "no point satisfies A x <= b within the bounds")),
        Err(e) => out.push(Violation::new("polytope-empty", format!("feasibility probe failed: {e}"))),
    }
    if !out.is_empty() {
        return out;
    }
    for j in (0..n).filter(|&j| poly.upper[j].is_infinite()) {
        let mut obj = vec![0.0; n];
        obj[j] = -1.0;
        let probe = poly.lp_with(obj);
        match solve_lp(&probe) {
            Ok(r) if r.status == LpStatus::Unbounded => {
                out.push(Violation::new("polytope-unbounded", format!("x{} is unbounded above", j + 1)));
            }
            Ok(_) => {}
            Err(e) => out.push(Violation::new("polytope-unbounded", format!("boundedness probe failed: {e}"))),
        }
    }
    out
}

pub(crate) fn membership(num_scenarios: usize, set: &[usize]) -> Result<Vec<bool>> {
    let mut inside = vec![false; num_scenarios];
    for &k in set {
        if k >= num_scenarios {
            return Err(Error::IndexOutOfRange { index: k, num_scenarios });
        }
        inside[k] = true;
    }
    Ok(inside)
}

/// `Bel(A)`: total mass of the focal sets contained in `set` (0-based).
pub fn belief(mass: &MassFunction, set: &[usize]) -> Result<f64> {
    let inside = membership(mass.num_scenarios, set)?;
    Ok(mass
        .focal_sets
        .iter()
        .filter(|f| f.indices.iter().all(|&k| inside.get(k).copied().unwrap_or(false)))
        .map(|f| f.mass)
        .sum())
}

/// Size of the largest focal set.
pub fn z_value(mass: &MassFunction) -> usize {
    mass.focal_sets.iter().map(FocalSet::len).max().unwrap_or(0)
}

/// `C(n, k)` when it fits in a `u128`.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table2_mass() -> MassFunction {
        // 0-based version of the nine-set reduced mass.
        MassFunction::from_pairs(
            6,
            vec![
                (vec![0, 1, 2, 3, 4, 5], 0.08),
                (vec![1, 2, 3, 4, 5], 0.22),
                (vec![1, 2, 3, 4], 0.08),
                (vec![2, 3, 4], 0.08),
                (vec![2, 4], 0.08),
                (vec![2], 0.04),
                (vec![2, 3, 4, 5], 0.06),
                (vec![3, 4], 0.18),
                (vec![3], 0.18),
            ],
        )
        .unwrap()
    }

    fn simple_instance(mass: MassFunction) -> Instance {
        Instance {
            scenarios: ScenarioSet::new(vec![vec![1.0, 2.0], vec![3.0, 0.5]]),
            mass: mass.into(),
            feasible: FeasibleSet::Selection { n: 2, p: 1 },
            alpha: 0.5,
        }
    }

    fn tags(inst: &Instance) -> Vec<&'static str> {
        validate_instance(inst).into_iter().map(|v| v.tag).collect()
    }

    #[test]
    fn well_formed_instance_has_no_violations() {
        let m = MassFunction { num_scenarios: 2, focal_sets: vec![FocalSet::new(vec![0], 0.4), FocalSet::new(vec![0, 1], 0.6)] };
        assert!(tags(&simple_instance(m)).is_empty());
    }

    #[test]
    fn short_mass_sum_reported() {
        let m = MassFunction { num_scenarios: 2, focal_sets: vec![FocalSet::new(vec![0], 0.4), FocalSet::new(vec![1], 0.5)] };
        assert_eq!(tags(&simple_instance(m)), vec!["mass-sum"]);
    }

    #[test]
    fn out_of_range_index_reported() {
        let m = MassFunction { num_scenarios: 2, focal_sets: vec![FocalSet::new(vec![2], 1.0)] };
        assert_eq!(tags(&simple_instance(m)), vec!["index-range"]);
    }

    #[test]
    fn duplicate_sets_rejected_zero_mass_dropped() {
        let dup = MassFunction::from_pairs(2, vec![(vec![0, 1], 0.5), (vec![1, 0], 0.5)]);
        assert!(matches!(dup, Err(Error::InvalidInstance(v)) if v[0].tag == "duplicate-focal-set"));
        let m = MassFunction::from_pairs(2, vec![(vec![0], 1.0), (vec![1], 0.0)]).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn empty_set_and_negative_mass() {
        let m = MassFunction { num_scenarios: 2, focal_sets: vec![FocalSet::new(vec![], 1.2), FocalSet::new(vec![1], -0.2)] };
        let t = tags(&simple_instance(m));
        assert!(t.contains(&"empty-focal-set"));
        assert!(t.contains(&"mass-nonpositive"));
    }

    #[test]
    fn instance_level_checks() {
        let m = MassFunction::from_pairs(3, vec![(vec![0, 1, 2], 1.0)]).unwrap();
        let mut inst = simple_instance(m);
        inst.alpha = 1.5;
        inst.feasible = FeasibleSet::Selection { n: 3, p: 4 };
        inst.scenarios.scenarios[1][0] = -1.0;
        let t = tags(&inst);
        for expected in ["num-scenarios", "alpha-range", "feasible-dim", "selection-p", "negative-cost"] {
            assert!(t.contains(&expected), "missing {expected} in {t:?}");
        }
    }

    #[test]
    fn polytope_probes() {
        let m = MassFunction::from_pairs(2, vec![(vec![0, 1], 1.0)]).unwrap();
        let mut inst = simple_instance(m);
        // x1 + x2 >= 3 inside the unit box is empty.
        inst.feasible = FeasibleSet::Polytope(Polytope::new(vec![vec![-1.0, -1.0]], vec![-3.0], vec![1.0, 1.0]));
        assert_eq!(tags(&inst), vec!["polytope-empty"]);
        inst.feasible = FeasibleSet::Polytope(Polytope::new(vec![vec![1.0, -1.0]], vec![0.0], vec![f64::INFINITY, f64::INFINITY]));
        assert!(tags(&inst).contains(&"polytope-unbounded"));
        inst.feasible = FeasibleSet::Polytope(Polytope::new(vec![vec![1.0, 1.0]], vec![1.0], vec![f64::INFINITY, f64::INFINITY]));
        assert!(tags(&inst).is_empty());
    }

    #[test]
    fn belief_on_reduced_mass() {
        let m = table2_mass();
        assert!((belief(&m, &[3]).unwrap() - 0.18).abs() < 1e-12);
        assert!((belief(&m, &[2, 3, 4]).unwrap() - 0.56).abs() < 1e-12);
        assert!((belief(&m, &[0, 1, 2, 3, 4, 5]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(belief(&m, &[]).unwrap(), 0.0);
        assert!(matches!(belief(&m, &[6]), Err(Error::IndexOutOfRange { index: 6, .. })));
    }

    #[test]
    fn z_values() {
        assert_eq!(z_value(&table2_mass()), 6);
        let singletons = MassFunction::from_pairs(3, (0..3).map(|k| (vec![k], 1.0 / 3.0))).unwrap();
        assert_eq!(z_value(&singletons), 1);
        let whole = MassFunction::from_pairs(4, vec![(vec![0, 1, 2, 3], 1.0)]).unwrap();
        assert_eq!(z_value(&whole), 4);
    }

    #[test]
    fn owa_belief_counts_subsets() {
        let owa = MassModel::Owa(OwaMass { num_scenarios: 5, cardinality: 2 });
        // C(3,2) / C(5,2)
        assert!((owa.belief(&[0, 1, 2]).unwrap() - 0.3).abs() < 1e-15);
        let explicit = owa.explicit().unwrap();
        assert!((belief(&explicit, &[0, 1, 2]).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 9), Some(220));
        assert_eq!(binomial(6, 2), Some(15));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert!(binomial(300, 150).is_none());
    }

    fn subsets(k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << k).map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).collect()).collect()
    }

    #[test]
    fn belief_monotone_and_supermodular_exhaustive() {
        let m = table2_mass();
        let all = subsets(6);
        let bel: Vec<f64> = all.iter().map(|a| belief(&m, a).unwrap()).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let (ma, mb) = (i as u32, j as u32);
                if ma & mb == ma {
                    assert!(bel[i] <= bel[j] + 1e-12, "monotonicity {a:?} {b:?}");
                }
                let union = (ma | mb) as usize;
                let inter = (ma & mb) as usize;
                assert!(bel[union] + bel[inter] >= bel[i] + bel[j] - 1e-12);
            }
        }
    }
}
