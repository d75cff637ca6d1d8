//! JSON scenario documents.
//!
//! A scenario describes one network together with its failure model,
//! inspection quality and costs:
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "components": [
//!     {"id": "c1", "p_fail": 0.1},
//!     {"id": "c2", "p_fail": 0.4}
//!   ],
//!   "structure": {"formula": "series(c1, c2)"},
//!   "dependence": {"type": "independent"},
//!   "inspection": {"eps_fa": 0.0, "eps_fs": 0.0},
//!   "costs": {"c_fail": 10, "c_repair": 1},
//!   "global": {"envelope": "quadratic"}
//! }
//! ```
//!
//! Exactly one of `structure.formula`, `structure.graph` and
//! `structure.truth_table` must be present. Formulas use this grammar, with
//! leaves naming component ids:
//!
//! ```text
//! expr  = block | ident ;
//! block = ("series" | "parallel") "(" expr { "," expr } ")" ;
//! ident = idchar { idchar } ;
//! idchar = letter | digit | "_" | "-" | "." ;
//! ```
//!
//! Graph edges are pairs of component ids or the reserved terminals
//! `"source"` and `"sink"`. A truth table is a string of `2^N` characters
//! `0`/`1`, one per state mask in ascending order (bit `i` set means
//! component `i` works).
//!
//! Dependence is `independent` (uses each component's `p_fail`), `explicit`
//! (`weights` over all state masks) or `groups`. A group is either shared,
//! with correlation `rho`, an optional `factor` (`bernoulli` by default or
//! `gaussian`) and the common `p_fail` of its members, or an explicit
//! `weights` table over its members. Components outside every group are
//! independent.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::global::{GlobalAction, LossEnvelope};
use crate::inference::{InspectionModel, Sensors};
use crate::local::LocalCostModel;
use crate::model::{
    CauseGroup, FactorModel, Formula, JointDistribution, Network, Node, StGraph, StructureFunction,
    TruthTable, DEFAULT_COMPONENT_CAP,
};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub components: Vec<ComponentSpec>,
    pub structure: StructureSpec,
    #[serde(default)]
    pub dependence: DependenceSpec,
    #[serde(default)]
    pub inspection: InspectionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<CostSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub id: String,
    /// Display name; defaults to the id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_fail: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_table: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default)]
    pub directed: bool,
    pub edges: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DependenceSpec {
    #[default]
    Independent,
    Explicit { weights: Vec<f64> },
    Groups { groups: Vec<GroupSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<FactorModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InspectionSpec {
    #[serde(default)]
    pub eps_fa: f64,
    #[serde(default)]
    pub eps_fs: f64,
    /// Per-component emission rates keyed by component id.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, InspectionModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSpec {
    pub c_fail: f64,
    pub c_repair: RepairCosts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepairCosts {
    Uniform(f64),
    PerComponent(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "envelope", rename_all = "snake_case", deny_unknown_fields)]
pub enum GlobalSpec {
    Quadratic,
    Binary { c_repair: f64, c_fail: f64 },
    Actions { c_fail: f64, actions: Vec<GlobalAction> },
}

/// One validation failure, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid scenario:\n{}", format_errors(.0))]
    Invalid(Vec<FieldError>),

    #[error("{0}")]
    SizeCap(Error),
}

fn format_errors(errors: &[FieldError]) -> String {
    errors.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

/// Parses and fully validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioDocument, ScenarioError> {
    let doc: ScenarioDocument = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Scenario::build(&doc, DEFAULT_COMPONENT_CAP)?;
    Ok(doc)
}

impl ScenarioDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario documents always serialize")
    }
}

/// A validated scenario turned into model objects.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub document: ScenarioDocument,
    pub network: Network,
    pub distribution: JointDistribution,
    pub sensors: Sensors,
    pub costs: Option<LocalCostModel>,
    pub envelope: Option<LossEnvelope>,
}

impl Scenario {
    pub fn from_json(text: &str, cap: usize) -> Result<Self, ScenarioError> {
        let doc: ScenarioDocument = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::build(&doc, cap)
    }

    pub fn build(doc: &ScenarioDocument, cap: usize) -> Result<Self, ScenarioError> {
        let mut v = Validator::default();
        if doc.schema_version != SCHEMA_VERSION {
            v.push("schema_version", format!("unsupported version {:?}, expected \"1\"", doc.schema_version));
        }
        let ids = v.components(&doc.components);
        let n = doc.components.len();
        let structure = ids.as_ref().and_then(|ids| v.structure(&doc.structure, ids, n));
        let distribution = ids.as_ref().and_then(|ids| v.dependence(doc, ids));
        let sensors = ids.as_ref().and_then(|ids| v.inspection(&doc.inspection, ids, n));
        let costs = doc.costs.as_ref().and_then(|c| v.costs(c, n));
        let envelope = doc.global.as_ref().and_then(|g| v.global(g));

        let network = match structure {
            Some(structure) => {
                let names = doc
                    .components
                    .iter()
                    .map(|c| c.name.clone().unwrap_or_else(|| c.id.clone()))
                    .collect();
                match Network::with_cap(names, structure, cap) {
                    Ok(net) => Some(net),
                    Err(e @ Error::SizeCap { .. }) => return Err(ScenarioError::SizeCap(e)),
                    Err(e) => {
                        v.push("structure", e.to_string());
                        None
                    }
                }
            }
            None => None,
        };
        if !v.errors.is_empty() {
            return Err(ScenarioError::Invalid(v.errors));
        }
        match (network, distribution, sensors) {
            (Some(network), Some(distribution), Some(sensors)) => Ok(Self {
                document: doc.clone(),
                network,
                distribution,
                sensors,
                costs,
                envelope,
            }),
            _ => Err(ScenarioError::Invalid(vec![FieldError {
                path: "".into(),
                message: "scenario is incomplete".into(),
            }])),
        }
    }

    /// Replaces the uniform emission rates (overrides stay in place).
    pub fn override_inspection(&mut self, eps_fa: Option<f64>, eps_fs: Option<f64>) -> Result<(), Error> {
        if eps_fa.is_none() && eps_fs.is_none() {
            return Ok(());
        }
        let spec = &mut self.document.inspection;
        if let Some(x) = eps_fa {
            spec.eps_fa = x;
        }
        if let Some(x) = eps_fs {
            spec.eps_fs = x;
        }
        let base = InspectionModel::new(spec.eps_fa, spec.eps_fs)?;
        self.sensors = match &self.sensors {
            Sensors::Uniform(_) => Sensors::Uniform(base),
            Sensors::PerComponent(_) => {
                let ids: Vec<&str> = self.document.components.iter().map(|c| c.id.as_str()).collect();
                Sensors::PerComponent(
                    ids.iter()
                        .map(|id| spec.overrides.get(*id).copied().unwrap_or(base))
                        .collect(),
                )
            }
        };
        Ok(())
    }
}

#[derive(Default)]
struct Validator {
    errors: Vec<FieldError>,
}

impl Validator {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(FieldError { path: path.into(), message: message.into() });
    }

    fn components(&mut self, comps: &[ComponentSpec]) -> Option<HashMap<String, usize>> {
        if comps.is_empty() {
            self.push("components", "at least one component is required");
            return None;
        }
        let before = self.errors.len();
        let mut ids = HashMap::new();
        let mut names = HashSet::new();
        for (k, c) in comps.iter().enumerate() {
            let path = format!("components[{k}]");
            if c.id.is_empty() || !c.id.chars().all(is_id_char) {
                self.push(format!("{path}.id"), format!("invalid id {:?}", c.id));
            } else if c.id == "source" || c.id == "sink" {
                self.push(format!("{path}.id"), format!("{:?} is reserved for graph terminals", c.id));
            }
            if ids.insert(c.id.clone(), k).is_some() {
                self.push(format!("{path}.id"), format!("duplicate id {:?}", c.id));
            }
            let name = c.name.clone().unwrap_or_else(|| c.id.clone());
            if !names.insert(name.clone()) {
                self.push(format!("{path}.name"), format!("duplicate name {name:?}"));
            }
            if let Some(p) = c.p_fail {
                if !(0.0..=1.0).contains(&p) {
                    self.push(format!("{path}.p_fail"), format!("{p} outside [0, 1]"));
                }
            }
        }
        (self.errors.len() == before).then_some(ids)
    }

    fn structure(
        &mut self,
        spec: &StructureSpec,
        ids: &HashMap<String, usize>,
        n: usize,
    ) -> Option<StructureFunction> {
        let present = [spec.formula.is_some(), spec.graph.is_some(), spec.truth_table.is_some()];
        if present.iter().filter(|&&b| b).count() != 1 {
            self.push("structure", "exactly one of formula, graph, truth_table is required");
            return None;
        }
        if let Some(text) = &spec.formula {
            return match parse_formula(text, ids) {
                Ok(f) => match f.validate(n) {
                    Ok(()) => Some(StructureFunction::Formula(f)),
                    Err(e) => {
                        self.push("structure.formula", e.to_string());
                        None
                    }
                },
                Err(msg) => {
                    self.push("structure.formula", msg);
                    None
                }
            };
        }
        if let Some(g) = &spec.graph {
            let before = self.errors.len();
            let mut edges = Vec::with_capacity(g.edges.len());
            for (k, [a, b]) in g.edges.iter().enumerate() {
                let mut node = |label: &str, end: usize| match label {
                    "source" => Some(Node::Source),
                    "sink" => Some(Node::Sink),
                    id => match ids.get(id) {
                        Some(&i) => Some(Node::Component(i)),
                        None => {
                            self.push(
                                format!("structure.graph.edges[{k}][{end}]"),
                                format!("unknown component {id:?}"),
                            );
                            None
                        }
                    },
                };
                if let (Some(x), Some(y)) = (node(a, 0), node(b, 1)) {
                    edges.push((x, y));
                }
            }
            if self.errors.len() != before {
                return None;
            }
            return match StGraph::new(n, edges, g.directed) {
                Ok(graph) => Some(StructureFunction::Graph(graph)),
                Err(e) => {
                    self.push("structure.graph", e.to_string());
                    None
                }
            };
        }
        let bits = spec.truth_table.as_deref().unwrap_or_default();
        match TruthTable::from_bitstring(n, bits) {
            Ok(t) => Some(StructureFunction::TruthTable(t)),
            Err(e) => {
                self.push("structure.truth_table", e.to_string());
                None
            }
        }
    }

    fn marginals(&mut self, doc: &ScenarioDocument, needed: impl Fn(usize) -> bool) -> Vec<f64> {
        doc.components
            .iter()
            .enumerate()
            .map(|(k, c)| match c.p_fail {
                Some(p) => p,
                None => {
                    if needed(k) {
                        self.push(format!("components[{k}].p_fail"), "required by the dependence model");
                    }
                    0.0
                }
            })
            .collect()
    }

    fn dependence(&mut self, doc: &ScenarioDocument, ids: &HashMap<String, usize>) -> Option<JointDistribution> {
        let n = doc.components.len();
        let before = self.errors.len();
        let result = match &doc.dependence {
            DependenceSpec::Independent => {
                let p = self.marginals(doc, |_| true);
                if self.errors.len() != before {
                    return None;
                }
                JointDistribution::independent(p)
            }
            DependenceSpec::Explicit { weights } => {
                if weights.len() != 1usize << n.min(31) {
                    self.push(
                        "dependence.weights",
                        format!("expected {} weights, found {}", 1usize << n.min(31), weights.len()),
                    );
                    return None;
                }
                let d = JointDistribution::explicit(weights.clone());
                if let Ok(d) = &d {
                    for (k, c) in doc.components.iter().enumerate() {
                        if let Some(p) = c.p_fail {
                            let implied = d.marginal_failure(k).expect("index in range");
                            if (implied - p).abs() > 1e-9 {
                                self.push(
                                    format!("components[{k}].p_fail"),
                                    format!("{p} disagrees with the explicit table ({implied})"),
                                );
                            }
                        }
                    }
                }
                d
            }
            DependenceSpec::Groups { groups } => {
                let mut owner = vec![None; n];
                let mut resolved = Vec::new();
                for (g, spec) in groups.iter().enumerate() {
                    let path = format!("dependence.groups[{g}]");
                    let mut members = Vec::new();
                    for (k, id) in spec.members.iter().enumerate() {
                        match ids.get(id) {
                            Some(&i) => {
                                if let Some(prev) = owner[i] {
                                    self.push(
                                        format!("{path}.members[{k}]"),
                                        format!("{id:?} already belongs to group {prev}"),
                                    );
                                }
                                owner[i] = Some(g);
                                members.push(i);
                            }
                            None => self.push(format!("{path}.members[{k}]"), format!("unknown component {id:?}")),
                        }
                    }
                    resolved.push((path, members, spec));
                }
                let p = self.marginals(doc, |k| {
                    owner[k].is_none_or(|g| groups[g].weights.is_none())
                });
                if self.errors.len() != before {
                    return None;
                }
                let mut built = Vec::new();
                for (path, members, spec) in resolved {
                    let group = match (&spec.weights, spec.rho) {
                        (Some(w), None) => {
                            if spec.factor.is_some() {
                                self.push(format!("{path}.factor"), "only shared groups take a factor");
                            }
                            CauseGroup::table(members, w.clone())
                        }
                        (None, Some(rho)) => {
                            let first = p[members[0]];
                            if members.iter().any(|&i| p[i] != first) {
                                self.push(
                                    format!("{path}.members"),
                                    "members of a shared group must have equal p_fail",
                                );
                                continue;
                            }
                            CauseGroup::shared(members, first, rho, spec.factor.unwrap_or_default())
                        }
                        _ => {
                            self.push(path, "a group needs exactly one of rho or weights");
                            continue;
                        }
                    };
                    match group {
                        Ok(g) => built.push(g),
                        Err(e) => self.push(format!("dependence.groups[{}]", built.len()), e.to_string()),
                    }
                }
                for (i, o) in owner.iter().enumerate() {
                    if o.is_none() {
                        match CauseGroup::single(i, p[i]) {
                            Ok(g) => built.push(g),
                            Err(e) => self.push(format!("components[{i}].p_fail"), e.to_string()),
                        }
                    }
                }
                if self.errors.len() != before {
                    return None;
                }
                JointDistribution::common_cause(n, built)
            }
        };
        match result {
            Ok(d) if self.errors.len() == before => Some(d),
            Ok(_) => None,
            Err(e) => {
                self.push("dependence", e.to_string());
                None
            }
        }
    }

    fn inspection(&mut self, spec: &InspectionSpec, ids: &HashMap<String, usize>, n: usize) -> Option<Sensors> {
        let base = match InspectionModel::new(spec.eps_fa, spec.eps_fs) {
            Ok(m) => m,
            Err(e) => {
                self.push("inspection", e.to_string());
                return None;
            }
        };
        if spec.overrides.is_empty() {
            return Some(Sensors::Uniform(base));
        }
        let mut per = vec![base; n];
        let before = self.errors.len();
        for (id, m) in &spec.overrides {
            let path = format!("inspection.overrides.{id}");
            match ids.get(id) {
                Some(&i) => match InspectionModel::new(m.eps_fa, m.eps_fs) {
                    Ok(m) => per[i] = m,
                    Err(e) => self.push(path, e.to_string()),
                },
                None => self.push(path, format!("unknown component {id:?}")),
            }
        }
        (self.errors.len() == before).then_some(Sensors::PerComponent(per))
    }

    fn costs(&mut self, spec: &CostSpec, n: usize) -> Option<LocalCostModel> {
        let repair = match &spec.c_repair {
            RepairCosts::Uniform(c) => vec![*c; n],
            RepairCosts::PerComponent(v) => {
                if v.len() != n {
                    self.push("costs.c_repair", format!("expected {n} repair costs, found {}", v.len()));
                    return None;
                }
                v.clone()
            }
        };
        match LocalCostModel::new(spec.c_fail, repair) {
            Ok(c) => Some(c),
            Err(e) => {
                self.push("costs", e.to_string());
                None
            }
        }
    }

    fn global(&mut self, spec: &GlobalSpec) -> Option<LossEnvelope> {
        let env = match spec {
            GlobalSpec::Quadratic => Ok(LossEnvelope::Quadratic),
            GlobalSpec::Binary { c_repair, c_fail } => LossEnvelope::binary(*c_repair, *c_fail),
            GlobalSpec::Actions { c_fail, actions } => LossEnvelope::from_actions(actions, *c_fail),
        };
        match env {
            Ok(e) => Some(e),
            Err(e) => {
                self.push("global", e.to_string());
                None
            }
        }
    }
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// Parses a `series(...)` / `parallel(...)` expression whose leaves are
/// component ids.
pub fn parse_formula(text: &str, ids: &HashMap<String, usize>) -> Result<Formula, String> {
    let mut parser = FormulaParser { chars: text.char_indices().peekable(), text, ids };
    let f = parser.expr()?;
    parser.skip_ws();
    match parser.chars.peek() {
        None => Ok(f),
        Some(&(pos, c)) => Err(format!("unexpected {c:?} at offset {pos}")),
    }
}

struct FormulaParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    ids: &'a HashMap<String, usize>,
}

impl FormulaParser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn ident(&mut self) -> Result<(usize, &str), String> {
        self.skip_ws();
        let start = match self.chars.peek() {
            Some(&(pos, c)) if is_id_char(c) => pos,
            Some(&(pos, c)) => return Err(format!("expected a name at offset {pos}, found {c:?}")),
            None => return Err("unexpected end of formula".into()),
        };
        let mut end = start;
        while let Some((pos, c)) = self.chars.next_if(|&(_, c)| is_id_char(c)) {
            end = pos + c.len_utf8();
        }
        Ok((start, &self.text[start..end]))
    }

    fn expr(&mut self) -> Result<Formula, String> {
        let (pos, word) = self.ident()?;
        let word = word.to_string();
        self.skip_ws();
        if self.chars.next_if(|&(_, c)| c == '(').is_none() {
            return self
                .ids
                .get(&word)
                .map(|&i| Formula::Component(i))
                .ok_or_else(|| format!("unknown component {word:?} at offset {pos}"));
        }
        let is_series = match word.as_str() {
            "series" => true,
            "parallel" => false,
            other => return Err(format!("unknown block {other:?} at offset {pos}")),
        };
        let mut children = vec![self.expr()?];
        loop {
            self.skip_ws();
            match self.chars.next() {
                Some((_, ',')) => children.push(self.expr()?),
                Some((_, ')')) => break,
                Some((p, c)) => return Err(format!("expected ',' or ')' at offset {p}, found {c:?}")),
                None => return Err("unclosed parenthesis".into()),
            }
        }
        Ok(if is_series { Formula::Series(children) } else { Formula::Parallel(children) })
    }
}

/// Renders a formula back into the text grammar using component ids.
pub fn render_formula(f: &Formula, ids: &[String]) -> String {
    match f {
        Formula::Component(i) => ids[*i].clone(),
        Formula::Series(c) | Formula::Parallel(c) => {
            let word = if matches!(f, Formula::Series(_)) { "series" } else { "parallel" };
            let inner: Vec<String> = c.iter().map(|x| render_formula(x, ids)).collect();
            format!("{word}({})", inner.join(", "))
        }
    }
}
