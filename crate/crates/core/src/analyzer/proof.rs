use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::ast::Formula;
use crate::syntax::{parse, render, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleName {
    CusVar,
    CusConst,
    CusNot,
    CusAnd,
    CusBinop,
    CusAlways,
    CusEvent,
    CusUntil,
    ThmMain,
    PropE,
    PropA,
    PropU,
    EdgeDual,
    LogicRewrite,
}

impl RuleName {
    pub const ALL: [RuleName; 14] = [
        RuleName::CusVar,
        RuleName::CusConst,
        RuleName::CusNot,
        RuleName::CusAnd,
        RuleName::CusBinop,
        RuleName::CusAlways,
        RuleName::CusEvent,
        RuleName::CusUntil,
        RuleName::ThmMain,
        RuleName::PropE,
        RuleName::PropA,
        RuleName::PropU,
        RuleName::EdgeDual,
        RuleName::LogicRewrite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::CusVar => "CUS-VAR",
            RuleName::CusConst => "CUS-CONST",
            RuleName::CusNot => "CUS-NOT",
            RuleName::CusAnd => "CUS-AND",
            RuleName::CusBinop => "CUS-BINOP",
            RuleName::CusAlways => "CUS-ALWAYS",
            RuleName::CusEvent => "CUS-EVENT",
            RuleName::CusUntil => "CUS-UNTIL",
            RuleName::ThmMain => "THM-MAIN",
            RuleName::PropE => "PROP-E",
            RuleName::PropA => "PROP-A",
            RuleName::PropU => "PROP-U",
            RuleName::EdgeDual => "EDGE-DUAL",
            RuleName::LogicRewrite => "LOGIC-REWRITE",
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A derivation of `<<conclusion>>` from the premises by `rule`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: RuleName,
    pub conclusion: Formula,
    pub premises: Vec<ProofTree>,
    pub note: Option<String>,
}

impl ProofTree {
    pub fn leaf(rule: RuleName, conclusion: Formula) -> Self {
        ProofTree { rule, conclusion, premises: Vec::new(), note: None }
    }

    /// Rules in pre-order.
    pub fn rules(&self) -> Vec<RuleName> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::node_count).sum::<usize>()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "rule": self.rule.as_str(),
            "conclusion": render(&self.conclusion),
            "premises": self.premises.iter().map(ProofTree::to_json).collect::<Vec<_>>(),
        });
        if let Some(note) = &self.note {
            v["note"] = Value::String(note.clone());
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self, ProofDocError> {
        let obj = v.as_object().ok_or(ProofDocError::Shape("proof node must be an object"))?;
        let rule = obj
            .get("rule")
            .and_then(Value::as_str)
            .ok_or(ProofDocError::Shape("missing string field `rule`"))?;
        let rule = rule.parse().map_err(ProofDocError::Rule)?;
        let conclusion = obj
            .get("conclusion")
            .and_then(Value::as_str)
            .ok_or(ProofDocError::Shape("missing string field `conclusion`"))?;
        let conclusion = parse(conclusion)?;
        let premises = obj
            .get("premises")
            .and_then(Value::as_array)
            .ok_or(ProofDocError::Shape("missing list field `premises`"))?
            .iter()
            .map(ProofTree::from_json)
            .collect::<Result<_, _>>()?;
        let note = match obj.get("note") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(ProofDocError::Shape("`note` must be a string")),
        };
        Ok(ProofTree { rule, conclusion, premises, note })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofDocError {
    #[error("malformed proof document: {0}")]
    Shape(&'static str),
    #[error("malformed proof document: {0}")]
    Rule(String),
    #[error("malformed proof document: {0}")]
    Formula(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofFormat {
    Text,
    Json,
}

/// Renders a proof as a top-down derivation chain or as a JSON document.
pub fn render_proof(p: &ProofTree, format: ProofFormat) -> String {
    match format {
        ProofFormat::Json => serde_json::to_string_pretty(&p.to_json()).expect("json values serialize"),
        ProofFormat::Text => render_text(p),
    }
}

// Each step expands the first open obligation into its premises.
fn render_text(p: &ProofTree) -> String {
    let mut out = String::new();
    let mut open: Vec<&ProofTree> = vec![p];
    out.push_str(&format!("    {}\n", obligations(&open)));
    while !open.is_empty() {
        let node = open.remove(0);
        let mut hint = format!("        -- by {}", node.rule);
        if let Some(note) = &node.note {
            hint.push_str(&format!(" ({note})"));
        }
        out.push_str(&hint);
        out.push('\n');
        for (i, prem) in node.premises.iter().enumerate() {
            open.insert(i, prem);
        }
        let rel = match node.rule {
            RuleName::LogicRewrite | RuleName::EdgeDual => "=",
            _ => "<==",
        };
        out.push_str(&format!("{rel:<4}{}\n", obligations(&open)));
    }
    out
}

fn obligations(open: &[&ProofTree]) -> String {
    if open.is_empty() {
        return "true".to_string();
    }
    open.iter().map(|p| format!("<<{}>>", render(&p.conclusion))).collect::<Vec<_>>().join(" & ")
}
