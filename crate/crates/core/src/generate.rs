//! Seeded random formulas for fuzzing.

use rand::Rng;

use crate::ast::Formula;

#[derive(Debug, Clone)]
pub struct FormulaGen {
    atoms: Vec<String>,
    max_depth: usize,
    next_free: bool,
}

const UNARY: [fn(Formula) -> Formula; 7] = [
    Formula::not,
    Formula::always,
    Formula::eventually,
    Formula::next,
    Formula::rise,
    Formula::fall,
    Formula::any_edge,
];

const BINARY: [fn(Formula, Formula) -> Formula; 5] =
    [Formula::and, Formula::or, Formula::implies, Formula::iff, Formula::until];

impl FormulaGen {
    /// Formulas over `atoms` with tree depth at most `max_depth` (an atom
    /// has depth 1).
    pub fn new(atoms: &[&str], max_depth: usize) -> Self {
        assert!(!atoms.is_empty() && max_depth >= 1);
        FormulaGen { atoms: atoms.iter().map(|a| a.to_string()).collect(), max_depth, next_free: false }
    }

    /// Leaves out `X` and the edge operators.
    pub fn next_free(mut self) -> Self {
        self.next_free = true;
        self
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.at_depth(rng, self.max_depth)
    }

    fn at_depth<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth <= 1 || rng.gen_bool(0.2) {
            return match rng.gen_range(0..12) {
                0 => Formula::True,
                1 => Formula::False,
                _ => Formula::Atom(self.atoms[rng.gen_range(0..self.atoms.len())].clone()),
            };
        }
        let unary = if self.next_free { &UNARY[..3] } else { &UNARY[..] };
        let pick = rng.gen_range(0..unary.len() + BINARY.len());
        if pick < unary.len() {
            unary[pick](self.at_depth(rng, depth - 1))
        } else {
            let a = self.at_depth(rng, depth - 1);
            let b = self.at_depth(rng, depth - 1);
            BINARY[pick - unary.len()](a, b)
        }
    }
}
