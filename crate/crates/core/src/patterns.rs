//! The Existence property pattern with edge-based variants.
//!
//! Each of the five scopes (intervals closed on the left, open on the right)
//! has four combinations: 0 uses states everywhere, 1 uses states for the
//! condition and up edges for the interval bounds, 2 uses up edges for the
//! condition and states for the bounds, 3 uses up edges for both. Down
//! edges come from binding a metavariable to a negation, since `up !x`
//! rewrites to `down x`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::analyzer::{analyze, Verdict};
use crate::ast::{atoms_of, Formula};
use crate::rewrite::edge_duality;
use crate::syntax::{parse, render, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Global,
    Before,
    After,
    Between,
    AfterUntil,
}

impl Scope {
    pub const ALL: [Scope; 5] = [Scope::Global, Scope::Before, Scope::After, Scope::Between, Scope::AfterUntil];

    pub fn letter(self) -> char {
        match self {
            Scope::Global => 'A',
            Scope::Before => 'B',
            Scope::After => 'C',
            Scope::Between => 'D',
            Scope::AfterUntil => 'E',
        }
    }

    pub fn from_letter(s: &str) -> Option<Scope> {
        Scope::ALL.into_iter().find(|sc| s.eq_ignore_ascii_case(&sc.letter().to_string()))
    }

    pub fn description(self) -> &'static str {
        match self {
            Scope::Global => "P exists globally",
            Scope::Before => "P exists before R",
            Scope::After => "P exists after Q",
            Scope::Between => "P exists between Q and R",
            Scope::AfterUntil => "P exists after Q until R",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTemplate {
    /// `existence/<scope>/<combination>` for built-ins, `user/<name>` otherwise.
    pub id: String,
    pub pattern: String,
    pub scope: Option<Scope>,
    pub combination: Option<u8>,
    /// Upper-case names; metavariable `P` is the atom `p` in the body.
    pub metavariables: Vec<String>,
    pub body: Formula,
    pub notes: String,
}

impl PatternTemplate {
    fn atom_of(meta: &str) -> String {
        meta.to_ascii_lowercase()
    }
}

pub fn template_id(pattern: &str, scope: &str, combination: &str) -> String {
    format!("{}/{}/{}", pattern.to_ascii_lowercase(), scope.to_ascii_uppercase(), combination)
}

const ITE: &str = "The if-then-else is written (c & t) | (!c & e).";

// (scope, combination, metavariables, body, notes)
const EXISTENCE: [(Scope, u8, &str, &str, &str); 20] = [
    (Scope::Global, 0, "P", "F p", ""),
    (Scope::Global, 1, "P", "F p", ""),
    (Scope::Global, 2, "P", "F up p", ""),
    (Scope::Global, 3, "P", "F up p", ""),
    (Scope::Before, 0, "PR", "F r -> !(!p U r)", ""),
    (Scope::Before, 1, "PR", "F up r -> (!(up r) U p)", ""),
    (Scope::Before, 2, "PR", "F r -> !(!(up p) U r)", ""),
    (Scope::Before, 3, "PR", "F up r -> !(!(up p) U up r)", ""),
    (Scope::After, 0, "PQ", "F q -> F(q & F p)", ""),
    (Scope::After, 1, "PQ", "F up q -> F(up q & X F p)", ""),
    (Scope::After, 2, "PQ", "F q -> F(q & F up p)", ""),
    (Scope::After, 3, "PQ", "F up q -> F(up q & F up p)", ""),
    (Scope::Between, 0, "PQR", "G((q & F r) -> (!(!p U r) & !r))", ""),
    (
        Scope::Between,
        1,
        "PQR",
        "G((up q & F up r) -> (X(!(up r) U p) & !(up r)))",
        "The until sits under X, unlike D.0: an edge is detected one state before it occurs.",
    ),
    (Scope::Between, 2, "PQR", "G((q & F r) -> (!(!(up p) U r) & !r))", ""),
    (Scope::Between, 3, "PQR", "G((up q & F up r) -> (!(!(up p) U up r) & !(up r)))", ""),
    (Scope::AfterUntil, 0, "PQR", "G(q -> ((F r & (!(!p U r) & !r)) | (!F r & F p)))", ITE),
    (
        Scope::AfterUntil,
        1,
        "PQR",
        "G(up q -> (X(!(up r) U p) & !(up r)))",
        "Kept without the F up R guard that E.0, E.2 and E.3 have.",
    ),
    (
        Scope::AfterUntil,
        2,
        "PQR",
        "G(q -> ((F r & (!(!(up p) U r) & !r)) | (!F r & F up p)))",
        "The closing parenthesis of the if-then-else is placed as in E.0 and E.3. The if-then-else is written (c & t) | (!c & e).",
    ),
    (
        Scope::AfterUntil,
        3,
        "PQR",
        "G(up q -> ((F up r & (!(!(up p) U up r) & !(up r))) | (!F up r & F up p)))",
        ITE,
    ),
];

/// The 20 built-in Existence templates.
pub fn catalog() -> Vec<PatternTemplate> {
    EXISTENCE
        .iter()
        .map(|&(scope, combination, metas, body, notes)| PatternTemplate {
            id: format!("existence/{}/{combination}", scope.letter()),
            pattern: "existence".to_string(),
            scope: Some(scope),
            combination: Some(combination),
            metavariables: metas.chars().map(String::from).collect(),
            body: parse(body).expect("catalog bodies parse"),
            notes: notes.to_string(),
        })
        .collect()
}

/// Metavariable name (any case) to bound formula.
pub type Binding = BTreeMap<String, Formula>;

/// Parses `NAME=formula`.
pub fn parse_binding(text: &str) -> Result<(String, Formula), PatternError> {
    let (name, body) = text
        .split_once('=')
        .ok_or_else(|| PatternError::InvalidBinding(format!("`{text}` is not of the form NAME=formula")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(PatternError::InvalidBinding(format!("`{text}` has an empty name")));
    }
    let f = parse(body).map_err(|e| PatternError::InvalidBinding(format!("`{name}`: {e}")))?;
    Ok((name.to_ascii_uppercase(), f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub metavariable: String,
    pub bound: Formula,
    pub blockers: Vec<Formula>,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "warning: {} = {} is not provably closed under stuttering, so the instance may not be either",
            self.metavariable,
            render(&self.bound)
        )?;
        if !self.blockers.is_empty() {
            let b: Vec<String> = self.blockers.iter().map(render).collect();
            write!(f, " (stuck at {})", b.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub formula: Formula,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("template `{id}` needs a binding for {metavariable}")]
    MissingBinding { id: String, metavariable: String },
    #[error("template `{id}` has no metavariable {key}")]
    ExtraBinding { id: String, key: String },
    #[error("invalid binding: {0}")]
    InvalidBinding(String),
    #[error("malformed template document: {0}")]
    Document(String),
    #[error("template `{id}`: body does not parse: {error}")]
    Body { id: String, error: ParseError },
    #[error("template `{id}`: invalid metavariable `{name}`")]
    Metavariable { id: String, name: String },
    #[error("template `{id}`: body atom `{atom}` is not a declared metavariable")]
    UnboundAtom { id: String, atom: String },
    #[error("duplicate template id `{0}`")]
    DuplicateId(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateDoc {
    id: String,
    metavariables: Vec<String>,
    body: String,
    #[serde(default)]
    notes: String,
}

/// Parses a template document: a JSON list of entries with `id`,
/// `metavariables`, `body` and optional `notes`. Ids gain a `user/` prefix.
pub fn load_user_templates(source: &str) -> Result<Vec<PatternTemplate>, PatternError> {
    let docs: Vec<TemplateDoc> = serde_json::from_str(source).map_err(|e| PatternError::Document(e.to_string()))?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for d in docs {
        let id = if d.id.starts_with("user/") { d.id } else { format!("user/{}", d.id) };
        if !seen.insert(id.clone()) {
            return Err(PatternError::DuplicateId(id));
        }
        let body = parse(&d.body).map_err(|error| PatternError::Body { id: id.clone(), error })?;
        let mut metas = Vec::new();
        for m in d.metavariables {
            let ok = m.chars().next().is_some_and(|c| c.is_ascii_uppercase())
                && m.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_');
            if !ok || metas.contains(&m) {
                return Err(PatternError::Metavariable { id: id.clone(), name: m });
            }
            metas.push(m);
        }
        for atom in atoms_of(&body).iter() {
            if !metas.iter().any(|m| PatternTemplate::atom_of(m) == atom) {
                return Err(PatternError::UnboundAtom { id: id.clone(), atom: atom.to_string() });
            }
        }
        out.push(PatternTemplate {
            id,
            pattern: "user".to_string(),
            scope: None,
            combination: None,
            metavariables: metas,
            body,
            notes: d.notes,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub id: String,
    pub body: Formula,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct CatalogReport {
    pub entries: Vec<ReportEntry>,
}

impl CatalogReport {
    pub fn all_closed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict.is_closed())
    }
}

/// The built-in templates plus any loaded user templates.
#[derive(Debug, Clone)]
pub struct Catalog {
    templates: Vec<PatternTemplate>,
    user_verdicts: BTreeMap<String, Verdict>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::builtin()
    }
}

impl Catalog {
    pub fn builtin() -> Self {
        Catalog { templates: catalog(), user_verdicts: BTreeMap::new() }
    }

    pub fn templates(&self) -> &[PatternTemplate] {
        &self.templates
    }

    pub fn get(&self, id: &str) -> Option<&PatternTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }

    /// Adds the templates in `source`, analyzing each one. Returns their ids.
    pub fn load_user_templates(&mut self, source: &str) -> Result<Vec<String>, PatternError> {
        let loaded = load_user_templates(source)?;
        if let Some(dup) = loaded.iter().find(|t| self.get(&t.id).is_some()) {
            return Err(PatternError::DuplicateId(dup.id.clone()));
        }
        let ids = loaded.iter().map(|t| t.id.clone()).collect();
        for t in loaded {
            self.user_verdicts.insert(t.id.clone(), analyze(&t.body));
            self.templates.push(t);
        }
        Ok(ids)
    }

    /// The verdict recorded when a user template was loaded.
    pub fn user_verdict(&self, id: &str) -> Option<&Verdict> {
        self.user_verdicts.get(id)
    }

    pub fn instantiate(&self, id: &str, binding: &Binding) -> Result<Instance, PatternError> {
        let t = self.get(id).ok_or_else(|| PatternError::UnknownTemplate(id.to_string()))?;
        let mut by_meta: BTreeMap<String, &Formula> = BTreeMap::new();
        for (key, f) in binding {
            let key = key.to_ascii_uppercase();
            if !t.metavariables.contains(&key) {
                return Err(PatternError::ExtraBinding { id: id.to_string(), key });
            }
            by_meta.insert(key, f);
        }
        if let Some(m) = t.metavariables.iter().find(|m| !by_meta.contains_key(*m)) {
            return Err(PatternError::MissingBinding { id: id.to_string(), metavariable: m.clone() });
        }
        let by_atom: BTreeMap<String, Formula> =
            by_meta.iter().map(|(m, f)| (PatternTemplate::atom_of(m), (*f).clone())).collect();
        let formula = edge_duality(&t.body.substitute(&|a: &str| by_atom.get(a).cloned()));
        let warnings = by_meta
            .iter()
            .filter_map(|(m, f)| match analyze(f) {
                Verdict::Closed(_) => None,
                Verdict::Unknown(blockers) => {
                    Some(Warning { metavariable: m.clone(), bound: (*f).clone(), blockers })
                }
            })
            .collect();
        Ok(Instance { formula, warnings })
    }

    /// Analyzes every template body with metavariables read as atoms.
    pub fn check(&self) -> CatalogReport {
        let mut analyzer = crate::analyzer::Analyzer::new();
        let entries = self
            .templates
            .iter()
            .map(|t| ReportEntry { id: t.id.clone(), body: t.body.clone(), verdict: analyzer.analyze(&t.body) })
            .collect();
        CatalogReport { entries }
    }
}

/// Instantiates a built-in template.
pub fn instantiate(id: &str, binding: &Binding) -> Result<Instance, PatternError> {
    Catalog::builtin().instantiate(id, binding)
}

/// Analyzes the 20 built-in templates.
pub fn check_catalog() -> CatalogReport {
    Catalog::builtin().check()
}
