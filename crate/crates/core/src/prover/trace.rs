use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::concrete::{parse_clause, parse_goal, parse_simple_type, parse_sterm, print, HHScope, ParseError};
use crate::syntax::{Atom, HHClause, HHGoal, Name, STerm, SimpleType};

/// The term chosen for one quantifier of a backchained clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub binder: Name,
    pub ty: SimpleType,
    pub term: STerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStep {
    True,
    And,
    Implies { clause: HHClause },
    Forall { eigen: Name, ty: SimpleType },
    /// Backchaining on clause `clause_index` of the program followed by the
    /// hypotheses in scope. `goal` is the atom that was solved.
    Backchain { clause_index: usize, instantiation: Vec<Instance>, goal: Atom },
}

impl TraceStep {
    pub fn rule(&self) -> &'static str {
        match self {
            TraceStep::True => "true",
            TraceStep::And => "and",
            TraceStep::Implies { .. } => "implies",
            TraceStep::Forall { .. } => "forall",
            TraceStep::Backchain { .. } => "backchain",
        }
    }
}

/// A uniform proof: one node per goal decomposition or backchaining step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub step: TraceStep,
    pub children: Vec<ProofTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace node is missing field `{0}`")]
    Missing(&'static str),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("`{0}` is not an atom")]
    NotAnAtom(String),
    #[error("in trace: {0}")]
    Parse(#[from] ParseError),
}

impl ProofTrace {
    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTrace::size).sum::<usize>()
    }

    /// Largest number of backchaining steps on a branch.
    pub fn depth(&self) -> usize {
        let own = usize::from(matches!(self.step, TraceStep::Backchain { .. }));
        own + self.children.iter().map(ProofTrace::depth).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let mut node = Map::new();
        node.insert("rule".into(), json!(self.step.rule()));
        match &self.step {
            TraceStep::True | TraceStep::And => {}
            TraceStep::Implies { clause } => {
                node.insert("clause".into(), json!(print::clause(clause)));
            }
            TraceStep::Forall { eigen, ty } => {
                node.insert("binder".into(), json!(eigen.as_str()));
                node.insert("type".into(), json!(ty.to_string()));
            }
            TraceStep::Backchain { clause_index, instantiation, goal } => {
                node.insert("clause_index".into(), json!(clause_index));
                node.insert("goal".into(), json!(print::goal(&HHGoal::Atom(goal.clone()))));
                let inst: Vec<Value> = instantiation
                    .iter()
                    .map(|i| {
                        json!({
                            "binder": i.binder.as_str(),
                            "type": i.ty.to_string(),
                            "term": print::sterm(&i.term),
                        })
                    })
                    .collect();
                node.insert("unifier".into(), Value::Array(inst));
            }
        }
        node.insert("children".into(), Value::Array(self.children.iter().map(ProofTrace::to_json).collect()));
        Value::Object(node)
    }

    /// An indented outline, one line per step.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        match &self.step {
            TraceStep::True => out.push_str("true"),
            TraceStep::And => out.push_str("and"),
            TraceStep::Implies { clause } => {
                out.push_str("assume ");
                out.push_str(&print::clause(clause));
            }
            TraceStep::Forall { eigen, ty } => out.push_str(&format!("fresh {eigen}:{ty}")),
            TraceStep::Backchain { clause_index, instantiation, goal } => {
                out.push_str(&format!("clause {clause_index}: {}", print::goal(&HHGoal::Atom(goal.clone()))));
                if !instantiation.is_empty() {
                    let inst: Vec<String> = instantiation
                        .iter()
                        .map(|i| format!("{} := {}", i.binder, print::sterm(&i.term)))
                        .collect();
                    out.push_str(&format!("  [{}]", inst.join(", ")));
                }
            }
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(indent + 1, out);
        }
    }

    /// Reads back a trace written by [`ProofTrace::to_json`]. Terms are
    /// resolved against `constants` and the eigenvariables introduced
    /// above each node.
    pub fn from_json(value: &Value, constants: &[(Name, SimpleType)]) -> Result<Self, TraceError> {
        read(value, &HHScope::new(constants.iter().cloned()))
    }
}

fn field<'v>(value: &'v Value, key: &'static str) -> Result<&'v Value, TraceError> {
    value.get(key).ok_or(TraceError::Missing(key))
}

fn text<'v>(value: &'v Value, key: &'static str) -> Result<&'v str, TraceError> {
    field(value, key)?.as_str().ok_or(TraceError::Missing(key))
}

fn read(value: &Value, scope: &HHScope) -> Result<ProofTrace, TraceError> {
    let mut scope = scope.clone();
    let step = match text(value, "rule")? {
        "true" => TraceStep::True,
        "and" => TraceStep::And,
        "implies" => TraceStep::Implies { clause: parse_clause(text(value, "clause")?, &scope)? },
        "forall" => {
            let eigen = Name::new(text(value, "binder")?);
            let ty = parse_simple_type(text(value, "type")?)?;
            scope = scope.with_var(eigen.clone(), ty.clone());
            TraceStep::Forall { eigen, ty }
        }
        "backchain" => {
            let clause_index = field(value, "clause_index")?
                .as_u64()
                .ok_or(TraceError::Missing("clause_index"))? as usize;
            let goal_text = text(value, "goal")?;
            let goal = match parse_goal(goal_text, &scope)? {
                HHGoal::Atom(a) => a,
                _ => return Err(TraceError::NotAnAtom(goal_text.to_string())),
            };
            let mut instantiation = Vec::new();
            for inst in field(value, "unifier")?.as_array().ok_or(TraceError::Missing("unifier"))? {
                instantiation.push(Instance {
                    binder: Name::new(text(inst, "binder")?),
                    ty: parse_simple_type(text(inst, "type")?)?,
                    term: parse_sterm(text(inst, "term")?, &scope)?,
                });
            }
            TraceStep::Backchain { clause_index, instantiation, goal }
        }
        other => return Err(TraceError::UnknownRule(other.to_string())),
    };
    let children = field(value, "children")?
        .as_array()
        .ok_or(TraceError::Missing("children"))?
        .iter()
        .map(|c| read(c, &scope))
        .collect::<Result<_, _>>()?;
    Ok(ProofTrace { step, children })
}
