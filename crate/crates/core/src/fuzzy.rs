//! Fuzzy focal sets given by possibility distributions, and their exact
//! reduction to an ordinary mass function through level cuts.
//!
//! Cut levels are written `lambda` here to keep them apart from the Hurwicz
//! parameter.

use std::collections::BTreeMap;

use crate::error::{Error, Result, Violation};
use crate::model::{membership, FocalSet, MassFunction, MASS_SUM_TOL};

/// Level values are compared after rounding to this many decimals.
const LEVEL_DECIMALS: i32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyFocalElement {
    /// Possibility degree of every scenario, in `[0, 1]`.
    pub pi: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMassFunction {
    pub num_scenarios: usize,
    pub focal_elements: Vec<FuzzyFocalElement>,
}

impl FuzzyMassFunction {
    pub fn new(num_scenarios: usize, focal_elements: Vec<FuzzyFocalElement>) -> Result<Self> {
        let fm = FuzzyMassFunction { num_scenarios, focal_elements };
        let violations = fm.validate();
        if violations.is_empty() {
            Ok(fm)
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.focal_elements.is_empty() {
            out.push(Violation::new("mass-empty", "no fuzzy focal elements"));
        }
        for (i, f) in self.focal_elements.iter().enumerate() {
            if f.pi.len() != self.num_scenarios {
                out.push(Violation::new(
                    "pi-length",
                    format!("fuzzy element #{} has {} degrees, expected {}", i + 1, f.pi.len(), self.num_scenarios),
                ));
            }
            if f.pi.iter().any(|v| !(0.0..=1.0).contains(v)) {
                out.push(Violation::new("pi-range", format!("fuzzy element #{} has a degree outside [0, 1]", i + 1)));
            } else if !is_normal(&f.pi) {
                out.push(Violation::new("pi-normal", format!("fuzzy element #{} never reaches degree 1", i + 1)));
            }
            if !(f.mass > 0.0 && f.mass <= 1.0 + MASS_SUM_TOL) {
                out.push(Violation::new("mass-nonpositive", format!("fuzzy element #{} has mass {}", i + 1, f.mass)));
            }
        }
        let total: f64 = self.focal_elements.iter().map(|f| f.mass).sum();
        if !self.focal_elements.is_empty() && (total.is_nan() || (total - 1.0).abs() > MASS_SUM_TOL) {
            out.push(Violation::new("mass-sum", format!("masses sum to {total}")));
        }
        out
    }
}

fn round_level(v: f64) -> f64 {
    let scale = 10f64.powi(LEVEL_DECIMALS);
    (v * scale).round() / scale
}

fn is_normal(pi: &[f64]) -> bool {
    pi.iter().any(|&v| round_level(v) == 1.0)
}

/// `N(A) = min_{u not in A} (1 - pi(u))`, equal to 1 when `A` covers everything.
pub fn necessity(pi: &[f64], set: &[usize]) -> Result<f64> {
    let inside = membership(pi.len(), set)?;
    Ok(pi.iter().zip(&inside).filter(|(_, &i)| !i).map(|(&p, _)| 1.0 - p).fold(1.0, f64::min))
}

/// `Pi(A) = max_{u in A} pi(u)`, zero for the empty set.
pub fn possibility(pi: &[f64], set: &[usize]) -> Result<f64> {
    let inside = membership(pi.len(), set)?;
    Ok(pi.iter().zip(&inside).filter(|(_, &i)| i).map(|(&p, _)| p).fold(0.0, f64::max))
}

/// Nested level cuts `{k : pi(k) >= lambda_i}` for the distinct positive
/// levels `lambda_1 < ... < lambda_f = 1`, with masses
/// `lambda_1, lambda_2 - lambda_1, ..., 1 - lambda_{f-1}`.
///
/// The cuts come out from the largest set down to the core.
pub fn alpha_cut_decompose(pi: &[f64]) -> Result<Vec<FocalSet>> {
    let rounded: Vec<f64> = pi.iter().map(|&v| round_level(v)).collect();
    let max = rounded.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max != 1.0 || rounded.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::NotNormal { max });
    }
    let mut levels: Vec<f64> = rounded.iter().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut prev = 0.0;
    let cuts = levels
        .into_iter()
        .map(|lambda| {
            let indices = (0..rounded.len()).filter(|&k| rounded[k] >= lambda).collect();
            let cut = FocalSet { indices, mass: lambda - prev };
            prev = lambda;
            cut
        })
        .collect();
    Ok(cuts)
}

/// The crisp mass `m'(A) = sum_F m(F) m_F(A)` whose belief function equals
/// the expected necessity of the fuzzy focal elements. Cut sets shared by
/// several elements are merged; the result is ordered lexicographically.
pub fn reduce_to_crisp(fm: &FuzzyMassFunction) -> Result<MassFunction> {
    let violations = fm.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for element in &fm.focal_elements {
        for cut in alpha_cut_decompose(&element.pi)? {
            *merged.entry(cut.indices).or_insert(0.0) += element.mass * cut.mass;
        }
    }
    let focal_sets = merged.into_iter().map(|(indices, mass)| FocalSet { indices, mass }).collect();
    MassFunction::new(fm.num_scenarios, focal_sets)
}

/// Belief as expected necessity: `sum_F m(F) N_F(A)`.
pub fn fuzzy_belief(fm: &FuzzyMassFunction, set: &[usize]) -> Result<f64> {
    let mut total = 0.0;
    for f in &fm.focal_elements {
        total += f.mass * necessity(&f.pi, set)?;
    }
    Ok(total)
}
