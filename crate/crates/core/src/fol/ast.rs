//! Leaf types of the fragment: predicate symbols, subjects, terms, labels.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("empty identifier")]
    Empty,
    #[error("invalid identifier {0:?}: must match [A-Za-z][A-Za-z0-9_]*")]
    InvalidChars(String),
    #[error("predicate {0:?} is not snake_case ([a-z][a-z0-9_]*)")]
    NotSnakeCase(String),
    #[error("predicate {0:?} has more than five words")]
    TooManyWords(String),
}

/// A unary predicate symbol.
///
/// Any identifier is accepted so that uninstantiated placeholders (`F7`,
/// `D2`) can flow through the pipeline; [`PredicateSymbol::validate_lexical`]
/// enforces the stricter shape required of final, lexicon-backed predicates:
/// snake_case and at most five words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PredicateSymbol(String);

impl PredicateSymbol {
    pub fn new(name: impl Into<String>) -> Result<Self, SymbolError> {
        let name = name.into();
        if name.is_empty() {
            return Err(SymbolError::Empty);
        }
        let mut chars = name.chars();
        let head = chars.next().unwrap();
        if !head.is_ascii_alphabetic()
            || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(SymbolError::InvalidChars(name));
        }
        Ok(PredicateSymbol(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Placeholders are slot names awaiting instantiation (`F1`, `D3`, ...).
    pub fn is_placeholder(&self) -> bool {
        self.0.starts_with(|c: char| c.is_ascii_uppercase())
    }

    /// Underscore-separated words of the name.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.split('_').filter(|w| !w.is_empty())
    }

    /// Checks the final-predicate shape: `[a-z][a-z0-9_]*`, at most 5 words.
    pub fn validate_lexical(&self) -> Result<(), SymbolError> {
        let mut chars = self.0.chars();
        let head = chars.next().ok_or(SymbolError::Empty)?;
        if !head.is_ascii_lowercase()
            || !chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            return Err(SymbolError::NotSnakeCase(self.0.clone()));
        }
        if self.words().count() > 5 {
            return Err(SymbolError::TooManyWords(self.0.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for PredicateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Category of a subject: a person, or an animal tagged with its species.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubjectCategory {
    Human,
    Animal(String),
}

impl SubjectCategory {
    pub fn from_tag(tag: &str) -> Self {
        if tag.eq_ignore_ascii_case("human") {
            SubjectCategory::Human
        } else {
            SubjectCategory::Animal(tag.to_ascii_lowercase())
        }
    }

    pub fn is_human(&self) -> bool {
        matches!(self, SubjectCategory::Human)
    }

    pub fn tag(&self) -> &str {
        match self {
            SubjectCategory::Human => "human",
            SubjectCategory::Animal(species) => species,
        }
    }
}

impl fmt::Display for SubjectCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for SubjectCategory {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for SubjectCategory {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(SubjectCategory::from_tag(&String::deserialize(deserializer)?))
    }
}

/// A named individual that facts describe. Formulas refer to subjects by
/// name only (`Term::Constant`); the category is carried alongside for
/// natural-language realization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubjectConstant {
    pub name: String,
    pub category: SubjectCategory,
}

impl SubjectConstant {
    pub fn new(name: impl Into<String>, category: SubjectCategory) -> Self {
        SubjectConstant { name: name.into(), category }
    }

    pub fn human(name: impl Into<String>) -> Self {
        SubjectConstant::new(name, SubjectCategory::Human)
    }
}

/// Argument of an atom: a named subject or the (single) bound variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Constant(String),
    Variable(String),
}

impl Term {
    pub fn text(&self) -> &str {
        match self {
            Term::Constant(name) | Term::Variable(name) => name,
        }
    }
}

/// A fully applied predicate: the unit the entailment engine assigns truth
/// values to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: PredicateSymbol,
    pub constant: String,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.constant)
    }
}

/// Three-valued classification of a goal relative to a premise set: `True`
/// when the premises entail it, `False` when they entail its negation,
/// `Uncertain` otherwise. Formula semantics themselves stay classical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TruthLabel {
    True,
    False,
    Uncertain,
}

impl TruthLabel {
    pub fn negated(self) -> Self {
        match self {
            TruthLabel::True => TruthLabel::False,
            TruthLabel::False => TruthLabel::True,
            TruthLabel::Uncertain => TruthLabel::Uncertain,
        }
    }

    pub fn is_determinate(self) -> bool {
        self != TruthLabel::Uncertain
    }

    /// The polarity a determinate label assigns to its atom.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            TruthLabel::True => Some(true),
            TruthLabel::False => Some(false),
            TruthLabel::Uncertain => None,
        }
    }
}

impl fmt::Display for TruthLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthLabel::True => "True",
            TruthLabel::False => "False",
            TruthLabel::Uncertain => "Uncertain",
        })
    }
}
