//! Dense two-phase simplex for small linear programs.
//!
//! Every solver and oracle in the crate reduces to LPs with at most a few
//! thousand rows and columns, so a dense tableau is enough. Pivoting uses
//! Dantzig's rule and switches permanently to Bland's rule once the number
//! of degenerate pivots exceeds `10 * (rows + cols)`.

use std::fmt;

use thiserror::Error;

/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOL: f64 = 1e-9;
/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-8;
/// Reduced costs above `-OPT_TOL` are treated as nonnegative.
const OPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `min objective · y` subject to the constraints and `lower <= y <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// New LP over `objective.len()` variables, all bounded to `[0, +inf)`.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram { objective, constraints: Vec::new(), lower: vec![0.0; n], upper: vec![f64::INFINITY; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { coefs, relation, rhs });
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Largest absolute violation of constraints and bounds at `y`.
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let act: f64 = c.coefs.iter().zip(y).map(|(a, v)| a * v).sum();
            let v = match c.relation {
                Relation::Le => act - c.rhs,
                Relation::Ge => c.rhs - act,
                Relation::Eq => (act - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (j, &v) in y.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }

    fn check(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed(format!("bounds length differs from {n} variables")));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("non-finite objective coefficient".into()));
        }
        for (j, (&lo, &hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !lo.is_finite() {
                return Err(LpError::Malformed(format!("variable {j} needs a finite lower bound")));
            }
            if hi.is_nan() {
                return Err(LpError::Malformed(format!("variable {j} has a NaN upper bound")));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefs.len() != n {
                return Err(LpError::Malformed(format!("row {i} has {} coefficients, expected {n}", c.coefs.len())));
            }
            if !c.rhs.is_finite() || c.coefs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::Malformed(format!("row {i} has non-finite data")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value; NaN unless the status is `Optimal`.
    pub objective: f64,
    /// Primal solution; empty unless the status is `Optimal`.
    pub x: Vec<f64>,
}

impl LpResult {
    fn without_solution(status: LpStatus) -> Self {
        LpResult { status, objective: f64::NAN, x: Vec::new() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("numerical breakdown: {0}")]
    Numerical(String),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    Dantzig,
    Bland,
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows x (cols + 1)`, right-hand side in the last column.
    data: Vec<f64>,
    /// Reduced costs followed by the negated objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Columns that may never enter the basis (artificials in phase two).
    barred: Vec<bool>,
    rule: Rule,
    degenerate: usize,
    iterations: usize,
}

impl Tableau {
    fn stride(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.stride() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn set_costs(&mut self, cost: &[f64]) {
        let s = self.stride();
        self.obj.clear();
        self.obj.extend_from_slice(cost);
        self.obj.push(0.0);
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * s..(i + 1) * s];
                for (o, a) in self.obj.iter_mut().zip(row) {
                    *o -= cb * a;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let s = self.stride();
        let p = self.data[r * s + c];
        for v in &mut self.data[r * s..(r + 1) * s] {
            *v /= p;
        }
        let (before, rest) = self.data.split_at_mut(r * s);
        let (prow, after) = rest.split_at_mut(s);
        for row in before.chunks_exact_mut(s).chain(after.chunks_exact_mut(s)) {
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(prow.iter()) {
                *v -= f * pv;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn entering(&self) -> Option<usize> {
        let candidates = (0..self.cols).filter(|&j| !self.barred[j] && self.obj[j] < -OPT_TOL);
        match self.rule {
            Rule::Bland => candidates.into_iter().next(),
            Rule::Dantzig => {
                let mut best: Option<(usize, f64)> = None;
                for j in candidates {
                    if best.is_none_or(|(_, d)| self.obj[j] < d) {
                        best = Some((j, self.obj[j]));
                    }
                }
                best.map(|(j, _)| j)
            }
        }
    }

    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let a = self.at(i, c);
            if a > PIVOT_TOL {
                let ratio = self.rhs(i).max(0.0) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-12 || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self, limit: usize) -> Result<Outcome, LpError> {
        let bland_after = 10 * (self.rows + self.cols);
        loop {
            let Some(c) = self.entering() else { return Ok(Outcome::Optimal) };
            let Some(r) = self.leaving(c) else { return Ok(Outcome::Unbounded) };
            if self.rhs(r) <= FEAS_TOL {
                self.degenerate += 1;
                if self.degenerate > bland_after {
                    self.rule = Rule::Bland;
                }
            }
            self.pivot(r, c);
            self.iterations += 1;
            if self.iterations > limit {
                return Err(LpError::Numerical(format!("no convergence after {limit} pivots")));
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        let s = self.stride();
        self.data.drain(r * s..(r + 1) * s);
        self.basis.remove(r);
        self.rows -= 1;
    }
}

/// Solves `lp` with the two-phase simplex method.
///
/// Infeasibility and unboundedness are statuses, not errors. An error means
/// the input was malformed or the pivoting lost numerical accuracy.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult, LpError> {
    lp.check()?;
    let n = lp.num_vars();
    if lp.lower.iter().zip(&lp.upper).any(|(lo, hi)| hi < lo) {
        return Ok(LpResult::without_solution(LpStatus::Infeasible));
    }

    // Shift y = lower + y' so every structural variable is y' >= 0, and turn
    // finite upper bounds into rows.
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(lp.constraints.len() + n);
    for c in &lp.constraints {
        let shift: f64 = c.coefs.iter().zip(&lp.lower).map(|(a, l)| a * l).sum();
        rows.push((c.coefs.clone(), c.relation, c.rhs - shift));
    }
    for j in 0..n {
        if lp.upper[j].is_finite() {
            let mut coefs = vec![0.0; n];
            coefs[j] = 1.0;
            rows.push((coefs, Relation::Le, lp.upper[j] - lp.lower[j]));
        }
    }
    for (coefs, rel, rhs) in &mut rows {
        if *rhs < 0.0 {
            coefs.iter_mut().for_each(|a| *a = -*a);
            *rhs = -*rhs;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let num_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let num_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + num_slack + num_art;
    let s = cols + 1;
    let mut data = vec![0.0; m * s];
    let mut basis = vec![0; m];
    let mut next_slack = n;
    let mut next_art = n + num_slack;
    for (i, (coefs, rel, rhs)) in rows.iter().enumerate() {
        let row = &mut data[i * s..(i + 1) * s];
        row[..n].copy_from_slice(coefs);
        row[cols] = *rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        rows: m,
        cols,
        data,
        obj: Vec::with_capacity(s),
        basis,
        barred: vec![false; cols],
        rule: Rule::Dantzig,
        degenerate: 0,
        iterations: 0,
    };
    let limit = 50_000 + 200 * (m + cols);
    let art_start = n + num_slack;
    let rhs_scale = 1.0 + rows.iter().map(|r| r.2).fold(0.0, f64::max);

    if num_art > 0 {
        let mut cost = vec![0.0; cols];
        cost[art_start..].iter_mut().for_each(|c| *c = 1.0);
        t.set_costs(&cost);
        if let Outcome::Unbounded = t.run(limit)? {
            return Err(LpError::Numerical("phase one reported unbounded".into()));
        }
        let infeasibility = -t.obj[cols];
        if infeasibility > FEAS_TOL * rhs_scale {
            return Ok(LpResult::without_solution(LpStatus::Infeasible));
        }
        // Drive artificials out of the basis; rows where that is impossible
        // are linearly dependent and get dropped.
        let mut i = 0;
        while i < t.rows {
            if t.basis[i] >= art_start {
                let col = (0..art_start).find(|&j| t.at(i, j).abs() > PIVOT_TOL);
                match col {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => t.remove_row(i),
                }
            } else {
                i += 1;
            }
        }
        t.barred[art_start..].iter_mut().for_each(|b| *b = true);
    }

    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(&lp.objective);
    t.set_costs(&cost);
    if let Outcome::Unbounded = t.run(limit)? {
        return Ok(LpResult::without_solution(LpStatus::Unbounded));
    }

    let mut shifted = vec![0.0; cols];
    for i in 0..t.rows {
        shifted[t.basis[i]] = t.rhs(i);
    }
    let x: Vec<f64> = (0..n)
        .map(|j| {
            let v = lp.lower[j] + shifted[j].max(0.0);
            v.min(lp.upper[j])
        })
        .collect();

    let violation = lp.max_violation(&x);
    let scale = 1.0 + lp.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
    if violation > FEAS_TOL * scale {
        return Err(LpError::Numerical(format!("solution violates constraints by {violation:e}")));
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpResult { status: LpStatus::Optimal, objective, x })
}
