//! Big-M mixed-integer formulation of the Hurwicz problem, written in the
//! CPLEX LP text format, plus a reader for the subset of the format the
//! writer produces.
//!
//! Variables: `x_j`, `y_F` (per-focal-set criterion value), `u_F` (per-focal
//! minimum) and binaries `d_{F,k}` choosing the minimizing scenario:
//!
//! ```text
//! min  sum_F m(F) y_F
//! s.t. y_F >= alpha c_k x + (1 - alpha) u_F       k in F
//!      u_F >= c_k x - M (1 - d_{F,k})             k in F
//!      sum_{k in F} d_{F,k} = 1
//!      x in X, y, u >= 0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linopt::{LinearProgram, Relation};
use crate::model::{FeasibleSet, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipVar {
    pub name: String,
    pub lower: f64,
    /// `f64::INFINITY` when unbounded above.
    pub upper: f64,
    pub kind: VarKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipRow {
    pub name: String,
    /// `(variable index, coefficient)` pairs.
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MipModel {
    /// Written as `\` comment lines at the top of the file.
    pub comments: Vec<String>,
    pub vars: Vec<MipVar>,
    /// Minimized.
    pub objective: Vec<(usize, f64)>,
    pub rows: Vec<MipRow>,
}

/// Name of the objective in [`MipModel::coefficient_map`].
pub const OBJECTIVE_ROW: &str = "obj";
const TERMS_PER_LINE: usize = 8;

impl MipModel {
    fn add_var(&mut self, name: String, lower: f64, upper: f64, kind: VarKind) -> usize {
        self.vars.push(MipVar { name, lower, upper, kind });
        self.vars.len() - 1
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Nonzero coefficients keyed by `(row name, variable name)`; the
    /// objective appears under [`OBJECTIVE_ROW`].
    pub fn coefficient_map(&self) -> BTreeMap<(String, String), f64> {
        let mut map = BTreeMap::new();
        let rows = std::iter::once((OBJECTIVE_ROW, &self.objective)).chain(self.rows.iter().map(|r| (r.name.as_str(), &r.terms)));
        for (row, terms) in rows {
            for &(j, c) in terms {
                if c != 0.0 {
                    *map.entry((row.to_string(), self.vars[j].name.clone())).or_insert(0.0) += c;
                }
            }
        }
        map
    }

    /// LP relaxation with binaries in `[0, 1]` and the listed variables
    /// fixed to the given values.
    pub fn relaxation(&self, fixed: &BTreeMap<String, f64>) -> Result<LinearProgram> {
        let mut objective = vec![0.0; self.vars.len()];
        for &(j, c) in &self.objective {
            objective[j] += c;
        }
        let mut lp = LinearProgram::new(objective);
        for row in &self.rows {
            let mut coefs = vec![0.0; self.vars.len()];
            for &(j, c) in &row.terms {
                coefs[j] += c;
            }
            lp.add_constraint(coefs, row.relation, row.rhs);
        }
        for (j, v) in self.vars.iter().enumerate() {
            let (lo, hi) = match fixed.get(&v.name) {
                Some(&value) => (value, value),
                None => (v.lower, v.upper),
            };
            lp.set_bounds(j, lo, hi);
        }
        for name in fixed.keys() {
            if self.var_index(name).is_none() {
                return Err(Error::Parse(format!("unknown variable `{name}`")));
            }
        }
        Ok(lp)
    }

    /// The model in LP file format.
    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "\\ {c}");
        }
        out.push_str("Minimize\n");
        self.write_expr(&mut out, OBJECTIVE_ROW, &self.objective);
        out.push('\n');
        out.push_str("Subject To\n");
        for row in &self.rows {
            self.write_expr(&mut out, &row.name, &row.terms);
            let _ = writeln!(out, " {} {}", row.relation, fmt_num(row.rhs));
        }
        out.push_str("Bounds\n");
        for v in self.vars.iter().filter(|v| v.kind == VarKind::Continuous) {
            if v.upper.is_infinite() {
                let _ = writeln!(out, " {} >= {}", v.name, fmt_num(v.lower));
            } else {
                let _ = writeln!(out, " {} <= {} <= {}", fmt_num(v.lower), v.name, fmt_num(v.upper));
            }
        }
        let binaries: Vec<&str> = self.vars.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.as_str()).collect();
        if !binaries.is_empty() {
            out.push_str("Binaries\n");
            for chunk in binaries.chunks(TERMS_PER_LINE) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
        out.push_str("End\n");
        out
    }

    fn write_expr(&self, out: &mut String, label: &str, terms: &[(usize, f64)]) {
        let _ = write!(out, " {label}:");
        let nonzero: Vec<&(usize, f64)> = terms.iter().filter(|t| t.1 != 0.0).collect();
        if nonzero.is_empty() {
            let _ = write!(out, " 0 {}", self.vars.first().map_or("x1", |v| v.name.as_str()));
        }
        for (i, &&(j, c)) in nonzero.iter().enumerate() {
            if i > 0 && i % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            let _ = write!(out, " {sign} {} {}", fmt_num(c.abs()), self.vars[j].name);
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // Shortest representation that parses back to the same value.
        format!("{v}")
    }
}

fn big_m_default(inst: &Instance) -> Result<f64> {
    match &inst.feasible {
        FeasibleSet::Polytope(poly) => {
            if poly.upper.iter().any(|u| u.is_infinite()) {
                return Err(Error::BigMRequired);
            }
            Ok(inst.scenarios.scenarios.iter().map(|c| crate::criterion::dot(c, &poly.upper)).fold(0.0, f64::max))
        }
        FeasibleSet::Selection { p, .. } => Ok(inst
            .scenarios
            .scenarios
            .iter()
            .map(|c| {
                let mut sorted = c.clone();
                sorted.sort_by(|a, b| b.total_cmp(a));
                sorted.iter().take(*p).sum::<f64>()
            })
            .fold(0.0, f64::max)),
    }
}

/// Builds the big-M model. `big_m` defaults to the largest scenario cost
/// over the box (polytopes) or over the `p` most expensive items (selection).
pub fn export_mip(inst: &Instance, big_m: Option<f64>) -> Result<MipModel> {
    inst.check()?;
    let m_value = match big_m {
        Some(v) if v.is_finite() && v >= 0.0 => v,
        Some(v) => return Err(Error::Precondition(format!("big-M must be finite and nonnegative, got {v}"))),
        None => big_m_default(inst)?,
    };
    let mass = inst.mass.explicit()?;
    let alpha = inst.alpha;
    let n = inst.scenarios.dim;
    let mut model = MipModel {
        comments: vec![
            "Hurwicz criterion under a belief-function mass, big-M form".into(),
            format!("alpha = {}, M = {}", fmt_num(alpha), fmt_num(m_value)),
            "At an optimum the chosen d_F_k of every focal set can be taken at the scenario minimizing c_k x over F.".into(),
        ],
        ..MipModel::default()
    };

    let xs: Vec<usize> = match &inst.feasible {
        FeasibleSet::Polytope(poly) => {
            (0..n).map(|j| model.add_var(format!("x{}", j + 1), 0.0, poly.upper[j], VarKind::Continuous)).collect()
        }
        FeasibleSet::Selection { .. } => (0..n).map(|j| model.add_var(format!("x{}", j + 1), 0.0, 1.0, VarKind::Binary)).collect(),
    };
    let ys: Vec<usize> =
        (0..mass.len()).map(|f| model.add_var(format!("y{}", f + 1), 0.0, f64::INFINITY, VarKind::Continuous)).collect();
    let us: Vec<usize> =
        (0..mass.len()).map(|f| model.add_var(format!("u{}", f + 1), 0.0, f64::INFINITY, VarKind::Continuous)).collect();
    model.objective = mass.focal_sets.iter().zip(&ys).map(|(f, &y)| (y, f.mass)).collect();

    let cost_terms = |k: usize, scale: f64| -> Vec<(usize, f64)> {
        inst.scenarios.get(k).iter().zip(&xs).filter(|(c, _)| **c != 0.0).map(|(&c, &x)| (x, scale * c)).collect()
    };

    for (fi, f) in mass.focal_sets.iter().enumerate() {
        let (y, u) = (ys[fi], us[fi]);
        let mut pick = Vec::new();
        for &k in &f.indices {
            let d = model.add_var(format!("d{}_{}", fi + 1, k + 1), 0.0, 1.0, VarKind::Binary);
            pick.push((d, 1.0));

            let mut hi = vec![(y, 1.0)];
            hi.extend(cost_terms(k, -alpha));
            if alpha < 1.0 {
                hi.push((u, -(1.0 - alpha)));
            }
            model.rows.push(MipRow { name: format!("hi{}_{}", fi + 1, k + 1), terms: hi, relation: Relation::Ge, rhs: 0.0 });

            let mut lo = vec![(u, 1.0)];
            lo.extend(cost_terms(k, -1.0));
            lo.push((d, -m_value));
            model.rows.push(MipRow { name: format!("lo{}_{}", fi + 1, k + 1), terms: lo, relation: Relation::Ge, rhs: -m_value });
        }
        model.rows.push(MipRow { name: format!("pick{}", fi + 1), terms: pick, relation: Relation::Eq, rhs: 1.0 });
    }

    match &inst.feasible {
        FeasibleSet::Polytope(poly) => {
            for (i, (row, &b)) in poly.a.iter().zip(&poly.b).enumerate() {
                let terms = row.iter().zip(&xs).filter(|(a, _)| **a != 0.0).map(|(&a, &x)| (x, a)).collect();
                model.rows.push(MipRow { name: format!("a{}", i + 1), terms, relation: Relation::Le, rhs: b });
            }
        }
        FeasibleSet::Selection { p, .. } => {
            let terms = xs.iter().map(|&x| (x, 1.0)).collect();
            model.rows.push(MipRow { name: "card".into(), terms, relation: Relation::Eq, rhs: *p as f64 });
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

fn section_keyword(line: &str) -> Option<Section> {
    match line.trim().to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binaries" | "binary" | "bin" => Some(Section::Binaries),
        "end" => Some(Section::Done),
        _ => None,
    }
}

fn parse_num(tok: &str) -> Option<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => tok.parse().ok(),
    }
}

fn parse_relation(tok: &str) -> Option<Relation> {
    match tok {
        "<=" | "=<" | "<" => Some(Relation::Le),
        ">=" | "=>" | ">" => Some(Relation::Ge),
        "=" => Some(Relation::Eq),
        _ => None,
    }
}

struct Reader {
    model: MipModel,
    names: BTreeMap<String, usize>,
}

impl Reader {
    fn var(&mut self, name: &str) -> usize {
        if let Some(&j) = self.names.get(name) {
            return j;
        }
        let j = self.model.add_var(name.to_string(), 0.0, f64::INFINITY, VarKind::Continuous);
        self.names.insert(name.to_string(), j);
        j
    }

    /// Parses `label: [+|-] [coef] name ...` up to (not including) a
    /// relation token; returns the label, the terms and the rest.
    fn expr<'a>(&mut self, tokens: &'a [String]) -> Result<ParsedExpr<'a>> {
        let mut rest = tokens;
        let mut label = None;
        if let Some(first) = rest.first() {
            if let Some(l) = first.strip_suffix(':') {
                label = Some(l.to_string());
                rest = &rest[1..];
            }
        }
        let mut terms = Vec::new();
        let mut sign = 1.0;
        let mut coef: Option<f64> = None;
        while let Some(tok) = rest.first() {
            if parse_relation(tok).is_some() {
                break;
            }
            rest = &rest[1..];
            match tok.as_str() {
                "+" => sign = 1.0,
                "-" => sign = -sign,
                _ => {
                    if let Some(v) = parse_num(tok) {
                        coef = Some(v);
                    } else {
                        let name = match tok.strip_prefix('-') {
                            Some(stripped) => {
                                sign = -sign;
                                stripped
                            }
                            None => tok.strip_prefix('+').unwrap_or(tok),
                        };
                        let j = self.var(name);
                        terms.push((j, sign * coef.unwrap_or(1.0)));
                        sign = 1.0;
                        coef = None;
                    }
                }
            }
        }
        if coef.is_some() {
            return Err(Error::Parse("dangling coefficient in expression".into()));
        }
        Ok((label, terms, rest))
    }
}

type ParsedExpr<'a> = (Option<String>, Vec<(usize, f64)>, &'a [String]);

/// Parses LP text produced by [`MipModel::to_lp_string`] (and simple
/// hand-written models in the same style).
pub fn parse_lp(text: &str) -> Result<MipModel> {
    let mut reader = Reader { model: MipModel::default(), names: BTreeMap::new() };
    let mut section = None;
    let mut objective_tokens: Vec<String> = Vec::new();
    let mut constraint_tokens: Vec<String> = Vec::new();
    let mut bound_lines: Vec<Vec<String>> = Vec::new();
    let mut binary_names: Vec<String> = Vec::new();

    for raw in text.lines() {
        let (line, comment) = match raw.find('\\') {
            Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
            None => (raw, None),
        };
        if section.is_none() {
            if let Some(c) = comment {
                reader.model.comments.push(c.to_string());
            }
        }
        if line.trim().is_empty() {
            continue;
        }
        if let Some(s) = section_keyword(line) {
            if s == Section::Done {
                section = Some(Section::Done);
                break;
            }
            section = Some(s);
            continue;
        }
        let tokens = line.split_whitespace().map(str::to_string);
        match section {
            Some(Section::Objective) => objective_tokens.extend(tokens),
            Some(Section::Constraints) => constraint_tokens.extend(tokens),
            Some(Section::Bounds) => bound_lines.push(tokens.collect()),
            Some(Section::Binaries) => binary_names.extend(tokens),
            Some(Section::Done) => unreachable!(),
            None => return Err(Error::Parse(format!("content before the objective section: `{}`", line.trim()))),
        }
    }
    if section != Some(Section::Done) {
        return Err(Error::Parse("missing `End`".into()));
    }

    let (_, objective, rest) = reader.expr(&objective_tokens)?;
    if !rest.is_empty() {
        return Err(Error::Parse("relation in objective".into()));
    }
    reader.model.objective = objective;

    let mut rest: &[String] = &constraint_tokens;
    while !rest.is_empty() {
        let (label, terms, after) = reader.expr(rest)?;
        let (rel, rhs) = match after {
            [rel, rhs, ..] => (
                parse_relation(rel).ok_or_else(|| Error::Parse(format!("expected a relation, got `{rel}`")))?,
                parse_num(rhs).ok_or_else(|| Error::Parse(format!("expected a number, got `{rhs}`")))?,
            ),
            _ => return Err(Error::Parse("constraint without right-hand side".into())),
        };
        let name = label.unwrap_or_else(|| format!("r{}", reader.model.rows.len() + 1));
        reader.model.rows.push(MipRow { name, terms, relation: rel, rhs });
        rest = &after[2..];
    }

    for line in bound_lines {
        let toks: Vec<&str> = line.iter().map(String::as_str).collect();
        match toks.as_slice() {
            [lo, "<=", name, "<=", hi] => {
                let j = reader.var(name);
                let v = &mut reader.model.vars[j];
                v.lower = parse_num(lo).ok_or_else(|| Error::Parse(format!("bad bound `{lo}`")))?;
                v.upper = parse_num(hi).ok_or_else(|| Error::Parse(format!("bad bound `{hi}`")))?;
            }
            [name, rel, value] if parse_relation(rel).is_some() && parse_num(value).is_some() => {
                let j = reader.var(name);
                let value = parse_num(value).unwrap();
                let v = &mut reader.model.vars[j];
                match parse_relation(rel).unwrap() {
                    Relation::Ge => v.lower = value,
                    Relation::Le => v.upper = value,
                    Relation::Eq => {
                        v.lower = value;
                        v.upper = value;
                    }
                }
            }
            _ => return Err(Error::Parse(format!("unsupported bound `{}`", line.join(" ")))),
        }
    }
    for name in binary_names {
        let j = reader.var(&name);
        let v = &mut reader.model.vars[j];
        v.kind = VarKind::Binary;
        v.lower = 0.0;
        v.upper = 1.0;
    }
    Ok(reader.model)
}
