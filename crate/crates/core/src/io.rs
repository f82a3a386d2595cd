//! JSON instance files.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "scenarios": [[1.0, 2.0], [3.0, 0.5]],
//!   "mass": [{"set": [1], "m": 0.4}, {"set": [1, 2], "m": 0.6}],
//!   "feasible": {"type": "polytope", "A": [[-1.0, -1.0], [0.0, 1.0]], "b": [-1.0, 5.0], "ub": [1.0, null]},
//!   "alpha": 0.5
//! }
//! ```
//!
//! Scenario indices are 1-based. `mass` may instead be `{"owa": {"l": 3}}`
//! (every `l`-subset with equal mass), or be replaced by
//! `"fuzzy_mass": [{"pi": [...], "m": 0.4}, ...]`. A `null` upper bound is
//! infinite and a missing `ub` means all ones. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{reduce_to_crisp, FuzzyFocalElement, FuzzyMassFunction};
use crate::model::{FeasibleSet, FocalSet, Instance, MassFunction, MassModel, OwaMass, Polytope, ScenarioSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassEntry {
    pub set: Vec<usize>,
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwaSpec {
    pub l: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwaWrapper {
    pub owa: OwaSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MassSpec {
    Explicit(Vec<MassEntry>),
    Owa(OwaWrapper),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyEntry {
    pub pi: Vec<f64>,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FeasibleSpec {
    Polytope {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ub: Option<Vec<Option<f64>>>,
    },
    Selection {
        n: usize,
        p: usize,
    },
}

/// On-disk layout of an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dim: usize,
    pub scenarios: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<MassSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzzy_mass: Option<Vec<FuzzyEntry>>,
    pub feasible: FeasibleSpec,
    pub alpha: f64,
}

/// A parsed instance; `fuzzy` keeps the original fuzzy focal elements when
/// the file had them, `instance.mass` then holds their crisp reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedInstance {
    pub instance: Instance,
    pub fuzzy: Option<FuzzyMassFunction>,
}

fn to_zero_based(set: &[usize]) -> Vec<usize> {
    // Index 0 maps out of range so validation reports it.
    set.iter().map(|&i| i.checked_sub(1).unwrap_or(usize::MAX)).collect()
}

impl InstanceFile {
    pub fn into_loaded(self) -> Result<LoadedInstance> {
        let k = self.scenarios.len();
        let (mass, fuzzy) = match (self.mass, self.fuzzy_mass) {
            (Some(_), Some(_)) => return Err(Error::Parse("`mass` and `fuzzy_mass` are mutually exclusive".into())),
            (None, None) => return Err(Error::Parse("one of `mass` or `fuzzy_mass` is required".into())),
            (Some(MassSpec::Explicit(entries)), None) => {
                let focal_sets = entries
                    .into_iter()
                    .filter(|e| {
                        if e.m == 0.0 {
                            log::warn!("dropping zero-mass focal set {:?}", e.set);
                        }
                        e.m != 0.0
                    })
                    .map(|e| FocalSet::new(to_zero_based(&e.set), e.m))
                    .collect();
                (MassModel::Explicit(MassFunction { num_scenarios: k, focal_sets }), None)
            }
            (Some(MassSpec::Owa(w)), None) => (MassModel::Owa(OwaMass { num_scenarios: k, cardinality: w.owa.l }), None),
            (None, Some(entries)) => {
                let fm = FuzzyMassFunction {
                    num_scenarios: k,
                    focal_elements: entries.into_iter().map(|e| FuzzyFocalElement { pi: e.pi, mass: e.m }).collect(),
                };
                (MassModel::Explicit(reduce_to_crisp(&fm)?), Some(fm))
            }
        };
        let feasible = match self.feasible {
            FeasibleSpec::Polytope { a, b, ub } => {
                let upper = match ub {
                    Some(ub) => ub.into_iter().map(|u| u.unwrap_or(f64::INFINITY)).collect(),
                    None => vec![1.0; self.dim],
                };
                FeasibleSet::Polytope(Polytope::new(a, b, upper))
            }
            FeasibleSpec::Selection { n, p } => FeasibleSet::Selection { n, p },
        };
        let instance = Instance { scenarios: ScenarioSet { dim: self.dim, scenarios: self.scenarios }, mass, feasible, alpha: self.alpha };
        instance.check()?;
        Ok(LoadedInstance { instance, fuzzy })
    }

    pub fn from_instance(inst: &Instance, fuzzy: Option<&FuzzyMassFunction>) -> Self {
        let (mass, fuzzy_mass) = match fuzzy {
            Some(fm) => (None, Some(fm.focal_elements.iter().map(|f| FuzzyEntry { pi: f.pi.clone(), m: f.mass }).collect())),
            None => (
                Some(match &inst.mass {
                    MassModel::Explicit(m) => MassSpec::Explicit(
                        m.focal_sets
                            .iter()
                            .map(|f| MassEntry { set: f.indices.iter().map(|k| k + 1).collect(), m: f.mass })
                            .collect(),
                    ),
                    MassModel::Owa(o) => MassSpec::Owa(OwaWrapper { owa: OwaSpec { l: o.cardinality } }),
                }),
                None,
            ),
        };
        let feasible = match &inst.feasible {
            FeasibleSet::Polytope(p) => FeasibleSpec::Polytope {
                a: p.a.clone(),
                b: p.b.clone(),
                ub: Some(p.upper.iter().map(|&u| if u.is_finite() { Some(u) } else { None }).collect()),
            },
            FeasibleSet::Selection { n, p } => FeasibleSpec::Selection { n: *n, p: *p },
        };
        InstanceFile { dim: inst.scenarios.dim, scenarios: inst.scenarios.scenarios.clone(), mass, fuzzy_mass, feasible, alpha: inst.alpha }
    }
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<LoadedInstance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_loaded()
}

/// Canonical text of an instance: pretty JSON with a trailing newline.
pub fn write_instance(inst: &Instance) -> String {
    to_text(&InstanceFile::from_instance(inst, None))
}

/// Like [`write_instance`], keeping fuzzy focal elements when present.
pub fn write_loaded(loaded: &LoadedInstance) -> String {
    to_text(&InstanceFile::from_instance(&loaded.instance, loaded.fuzzy.as_ref()))
}

fn to_text(file: &InstanceFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("instance files always serialize");
    s.push('\n');
    s
}

pub fn read_instance_file(path: &std::path::Path) -> Result<LoadedInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}
