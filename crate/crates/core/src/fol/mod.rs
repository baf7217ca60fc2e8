//! The FOL fragment: abstract syntax, a concrete text syntax with parser and
//! printer, and structural utilities (substitution, grounding, negation
//! normal form, evaluation).
//!
//! The fragment covers unary predicates over named subjects, the connectives
//! `∧ ∨ ¬ → ⊕`, and a single prenex quantifier (`∀` or `∃`). Exclusive
//! disjunction stands in for equivalence: `a ⊕ b` reads as `¬(a ≡ b)`.
//!
//! Concrete grammar:
//!
//! ```text
//! formula  := quant | impl
//! quant    := ("all" | "exists") IDENT "(" impl ")"
//! impl     := xor ("->" impl)?
//! xor      := or ("^" or)*
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "-" unary | atom | "(" impl ")"
//! atom     := IDENT "(" IDENT ")"
//! ```
//!
//! Precedence is `¬ > ∧ > ∨ > ⊕ > →`; implication is right-associative, the
//! other binary connectives associate to the left.

mod ast;
mod parse;
mod print;
mod transform;

pub use ast::{
    GroundAtom, PredicateSymbol, SubjectCategory, SubjectConstant, SymbolError, Term, TruthLabel,
};
pub use parse::{parse_formula, ParseError};
pub use transform::FolError;

use serde::{Deserialize, Serialize};

/// Abstract syntax tree of a formula in the fragment.
///
/// Serializes as its concrete-syntax string; `parse_formula` and the
/// `Display` impl are exact inverses on well-formed formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(PredicateSymbol, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: PredicateSymbol, term: Term) -> Self {
        Formula::Atom(predicate, term)
    }

    /// Positive or negated ground atom over a named subject.
    pub fn literal(predicate: PredicateSymbol, constant: impl Into<String>, positive: bool) -> Self {
        let atom = Formula::Atom(predicate, Term::Constant(constant.into()));
        if positive {
            atom
        } else {
            Formula::not(atom)
        }
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Self {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForAll(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}
