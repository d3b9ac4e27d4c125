//! Formula trees, atom sets, and the edge sugar.
//!
//! A [`Formula`] is an immutable LTL tree extended with three edge
//! constructors: `up A` (rising edge, `!A & X A`), `down A` (falling edge,
//! `A & X !A`) and `edge A` (either). Equality is structural everywhere.

use std::fmt;

use thiserror::Error;

/// An LTL formula with first-class edge operators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Always(Box<Formula>),
    Eventually(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// Rising edge: the operand is false now and true in the next state.
    Rise(Box<Formula>),
    /// Falling edge: the operand is true now and false in the next state.
    Fall(Box<Formula>),
    /// Either edge.
    AnyEdge(Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("invalid atom name `{0}`: atoms match [a-z][a-z0-9_]*")]
    InvalidName(String),
    #[error("`{0}` is a reserved word and cannot name an atom")]
    Reserved(String),
    #[error("duplicate atom `{0}`")]
    Duplicate(String),
}

/// Words of the surface syntax that can never be atom names.
pub const RESERVED_WORDS: &[&str] = &["true", "false", "up", "down", "edge", "X", "G", "F", "U"];

/// Checks that `name` is a legal atom identifier.
pub fn validate_atom_name(name: &str) -> Result<(), AtomError> {
    if RESERVED_WORDS.contains(&name) {
        return Err(AtomError::Reserved(name.to_string()));
    }
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(AtomError::InvalidName(name.to_string()))
    }
}

impl Formula {
    /// Builds an atom.
    ///
    /// Panics if `name` is not a legal atom identifier; use [`Formula::try_atom`]
    /// for untrusted input.
    pub fn atom(name: impl Into<String>) -> Formula {
        let name = name.into();
        if let Err(e) = validate_atom_name(&name) {
            panic!("{e}");
        }
        Formula::Atom(name)
    }

    pub fn try_atom(name: impl Into<String>) -> Result<Formula, AtomError> {
        let name = name.into();
        validate_atom_name(&name)?;
        Ok(Formula::Atom(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn rise(f: Formula) -> Formula {
        Formula::Rise(Box::new(f))
    }

    pub fn fall(f: Formula) -> Formula {
        Formula::Fall(Box::new(f))
    }

    pub fn any_edge(f: Formula) -> Formula {
        Formula::AnyEdge(Box::new(f))
    }

    /// Negation that cancels an existing outer negation instead of stacking.
    pub fn negate(f: Formula) -> Formula {
        match f {
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        }
    }

    /// Right-nested conjunction; the empty conjunction is `true`.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::True;
        };
        while let Some(item) = items.pop() {
            acc = Formula::and(item, acc);
        }
        acc
    }

    /// Right-nested disjunction; the empty disjunction is `false`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::False;
        };
        while let Some(item) = items.pop() {
            acc = Formula::or(item, acc);
        }
        acc
    }

    /// Direct subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | True | False => vec![],
            Not(a) | Next(a) | Always(a) | Eventually(a) | Rise(a) | Fall(a) | AnyEdge(a) => {
                vec![a]
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) => vec![a, b],
        }
    }

    /// Rebuilds this node with every direct child passed through `g`.
    pub fn map_children(&self, mut g: impl FnMut(&Formula) -> Formula) -> Formula {
        use Formula::*;
        let b = |f: Formula| Box::new(f);
        match self {
            Atom(_) | True | False => self.clone(),
            Not(a) => Not(b(g(a))),
            Next(a) => Next(b(g(a))),
            Always(a) => Always(b(g(a))),
            Eventually(a) => Eventually(b(g(a))),
            Rise(a) => Rise(b(g(a))),
            Fall(a) => Fall(b(g(a))),
            AnyEdge(a) => AnyEdge(b(g(a))),
            And(x, y) => {
                let x = g(x);
                And(b(x), b(g(y)))
            }
            Or(x, y) => {
                let x = g(x);
                Or(b(x), b(g(y)))
            }
            Implies(x, y) => {
                let x = g(x);
                Implies(b(x), b(g(y)))
            }
            Iff(x, y) => {
                let x = g(x);
                Iff(b(x), b(g(y)))
            }
            Until(x, y) => {
                let x = g(x);
                Until(b(x), b(g(y)))
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Formula::depth).max().unwrap_or(0)
    }

    /// True when the formula mentions neither `X` nor any edge operator.
    pub fn is_next_free(&self) -> bool {
        !matches!(
            self,
            Formula::Next(_) | Formula::Rise(_) | Formula::Fall(_) | Formula::AnyEdge(_)
        ) && self.children().into_iter().all(Formula::is_next_free)
    }

    pub fn has_edges(&self) -> bool {
        matches!(self, Formula::Rise(_) | Formula::Fall(_) | Formula::AnyEdge(_))
            || self.children().into_iter().any(Formula::has_edges)
    }

    /// Replaces every atom that has an entry in `binding`.
    pub fn substitute(&self, binding: &impl Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(name) => binding(name).unwrap_or_else(|| self.clone()),
            _ => self.map_children(|c| c.substitute(binding)),
        }
    }

    /// Replaces every occurrence of the subtree `from` by `to`.
    pub fn replace_all(&self, from: &Formula, to: &Formula) -> Formula {
        if self == from {
            return to.clone();
        }
        self.map_children(|c| c.replace_all(from, to))
    }

    /// Flattened conjunct list of a nested `&` chain.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        collect_chain(self, &mut out, |f| match f {
            Formula::And(a, b) => Some((a, b)),
            _ => None,
        });
        out
    }

    /// Flattened disjunct list of a nested `|` chain.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        collect_chain(self, &mut out, |f| match f {
            Formula::Or(a, b) => Some((a, b)),
            _ => None,
        });
        out
    }
}

fn collect_chain<'a>(
    f: &'a Formula,
    out: &mut Vec<&'a Formula>,
    split: impl Fn(&'a Formula) -> Option<(&'a Formula, &'a Formula)> + Copy,
) {
    match split(f) {
        Some((a, b)) => {
            collect_chain(a, out, split);
            collect_chain(b, out, split);
        }
        None => out.push(f),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render(self))
    }
}

/// An ordered set of distinct atom names.
///
/// The order is the canonical one used for state encoding and for
/// deterministic trace enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AtomSet(Vec<String>);

impl AtomSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, AtomError> {
        let mut set = AtomSet::default();
        for name in names {
            let name = name.into();
            validate_atom_name(&name)?;
            if set.contains(&name) {
                return Err(AtomError::Duplicate(name));
            }
            set.0.push(name);
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|a| a == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    /// Appends `name` unless already present.
    fn insert(&mut self, name: &str) {
        if !self.contains(name) {
            self.0.push(name.to_string());
        }
    }
}

/// The atoms occurring in `f`, in first-occurrence (left to right) order.
pub fn atoms_of(f: &Formula) -> AtomSet {
    fn walk(f: &Formula, set: &mut AtomSet) {
        if let Formula::Atom(name) = f {
            set.insert(name);
        }
        for c in f.children() {
            walk(c, set);
        }
    }
    let mut set = AtomSet::default();
    walk(f, &mut set);
    set
}

/// Expands every edge operator into its definition.
pub fn desugar_edges(f: &Formula) -> Formula {
    match f {
        Formula::Rise(a) => rise_def(desugar_edges(a)),
        Formula::Fall(a) => fall_def(desugar_edges(a)),
        Formula::AnyEdge(a) => {
            let a = desugar_edges(a);
            Formula::or(rise_def(a.clone()), fall_def(a))
        }
        _ => f.map_children(desugar_edges),
    }
}

fn rise_def(a: Formula) -> Formula {
    Formula::and(Formula::not(a.clone()), Formula::next(a))
}

fn fall_def(a: Formula) -> Formula {
    Formula::and(a.clone(), Formula::next(Formula::not(a)))
}

/// Collapses `!A & X A` into `up A` and `A & X !A` into `down A` inside any
/// conjunction chain, matching conjuncts regardless of nesting and order.
///
/// The edge takes the place of the first conjunct of its pair and the chain
/// is rebuilt right-nested. Chains without a matching pair keep their shape.
pub fn resugar_edges(f: &Formula) -> Formula {
    match f {
        Formula::And(..) => {
            let items: Vec<Formula> = f.conjuncts().into_iter().map(resugar_edges).collect();
            match pair_edges(items.clone()) {
                Some(merged) => Formula::conj(merged),
                None => rebuild_chain(f, &mut items.into_iter()),
            }
        }
        _ => f.map_children(resugar_edges),
    }
}

/// Greedily merges edge pairs; `None` when no pair exists.
fn pair_edges(mut items: Vec<Formula>) -> Option<Vec<Formula>> {
    let mut changed = false;
    loop {
        let found = find_pair(&items);
        let Some((keep, drop, edge)) = found else {
            break;
        };
        items[keep] = edge;
        items.remove(drop);
        changed = true;
    }
    changed.then_some(items)
}

fn find_pair(items: &[Formula]) -> Option<(usize, usize, Formula)> {
    // up A: `!A` and `X A`
    for (i, item) in items.iter().enumerate() {
        if let Formula::Not(a) = item {
            let target = Formula::next((**a).clone());
            if let Some(j) = items.iter().position(|x| *x == target) {
                return Some((i.min(j), i.max(j), Formula::rise((**a).clone())));
            }
        }
    }
    // down A: `A` and `X !A`
    for (i, item) in items.iter().enumerate() {
        let target = Formula::next(Formula::not(item.clone()));
        if let Some(j) = items.iter().position(|x| *x == target) {
            return Some((i.min(j), i.max(j), Formula::fall(item.clone())));
        }
    }
    None
}

fn rebuild_chain(shape: &Formula, leaves: &mut impl Iterator<Item = Formula>) -> Formula {
    match shape {
        Formula::And(a, b) => {
            let a = rebuild_chain(a, leaves);
            let b = rebuild_chain(b, leaves);
            Formula::and(a, b)
        }
        _ => leaves.next().expect("leaf count matches chain shape"),
    }
}
