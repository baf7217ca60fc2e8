//! Per-problem predicate lexicon.

use crate::fol::{PredicateSymbol, SymbolError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("predicate {0:?} is already in the lexicon")]
    Duplicate(String),
    #[error("predicate {0:?} collides with a forbidden word of an earlier entry")]
    Forbidden(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Binding from a predicate symbol to its natural-language phrase, plus
/// words later entries must avoid.
#[derive(Clone, Debug)]
pub struct LexiconEntry {
    pub predicate: PredicateSymbol,
    pub phrase: String,
    pub forbidden_twins: Vec<String>,
}

impl LexiconEntry {
    pub fn new(predicate: PredicateSymbol) -> Self {
        let phrase = predicate.words().collect::<Vec<_>>().join(" ");
        LexiconEntry { predicate, phrase, forbidden_twins: Vec::new() }
    }
}

/// The accumulated predicate bindings of one problem. Insertion enforces
/// lexical shape, uniqueness, and the forbidden lists of earlier entries.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    index: HashMap<PredicateSymbol, usize>,
}

impl Lexicon {
    pub fn insert(&mut self, entry: LexiconEntry) -> Result<(), LexiconError> {
        entry.predicate.validate_lexical()?;
        if self.index.contains_key(&entry.predicate) {
            return Err(LexiconError::Duplicate(entry.predicate.name().to_string()));
        }
        let name = entry.predicate.name();
        for earlier in &self.entries {
            if earlier.forbidden_twins.iter().any(|w| w == name) {
                return Err(LexiconError::Forbidden(name.to_string()));
            }
        }
        self.index.insert(entry.predicate.clone(), self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    pub fn contains(&self, predicate: &PredicateSymbol) -> bool {
        self.index.contains_key(predicate)
    }

    pub fn phrase(&self, predicate: &PredicateSymbol) -> Option<&str> {
        self.index.get(predicate).map(|&i| self.entries[i].phrase.as_str())
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    /// Every name a new predicate must avoid: all current names plus their
    /// forbidden twins.
    pub fn forbidden_list(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for e in &self.entries {
            out.push(e.predicate.name().to_string());
            out.extend(e.forbidden_twins.iter().cloned());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(name: &str) -> PredicateSymbol {
        PredicateSymbol::new(name).unwrap()
    }

    #[test]
    fn rejects_duplicates_and_placeholders() {
        let mut lex = Lexicon::default();
        lex.insert(LexiconEntry::new(pred("good_dance_skills"))).unwrap();
        assert!(matches!(
            lex.insert(LexiconEntry::new(pred("good_dance_skills"))),
            Err(LexiconError::Duplicate(_))
        ));
        assert!(matches!(
            lex.insert(LexiconEntry::new(pred("F7"))),
            Err(LexiconError::Symbol(_))
        ));
    }

    #[test]
    fn respects_forbidden_twins() {
        let mut lex = Lexicon::default();
        let mut entry = LexiconEntry::new(pred("is_fluffy"));
        entry.forbidden_twins = vec!["is_soft".to_string()];
        lex.insert(entry).unwrap();
        assert!(matches!(
            lex.insert(LexiconEntry::new(pred("is_soft"))),
            Err(LexiconError::Forbidden(_))
        ));
        assert_eq!(lex.forbidden_list(), vec!["is_fluffy", "is_soft"]);
    }

    #[test]
    fn phrase_is_space_joined_words() {
        let entry = LexiconEntry::new(pred("good_dance_skills"));
        assert_eq!(entry.phrase, "good dance skills");
    }
}
