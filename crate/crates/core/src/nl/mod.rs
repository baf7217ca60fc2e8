//! Natural-language realization.
//!
//! Turns an assembled symbolic problem into aligned text: a background story
//! seeds the vocabulary, placeholder predicates are instantiated through the
//! backend, every rule is rendered in a universal and a specific version
//! with a common-sense judgment picking between them, and facts are
//! translated one sentence at a time. A heuristic quality-control check
//! keeps symbolic and textual forms aligned.

mod lexicon;
mod prompts;
mod render;
mod story;
mod translate;

pub use lexicon::{Lexicon, LexiconEntry, LexiconError};
pub use render::{fact_text, invent_fresh_predicate, premise_text, question_text};
pub use story::{generate_story, KeywordPool, NamePool, StoryContext};
pub use translate::{
    instantiate_predicates, qc_translation, realize_problem, select_rule_version, translate_fact,
    RealizedPremise, RealizedProblem, RuleRendering, RuleVersion,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NlError {
    #[error(transparent)]
    Backend(#[from] crate::backend::BackendError),
    #[error("reply violated the expected schema: {0}")]
    Schema(String),
    #[error("backend kept proposing forbidden predicates: {0}")]
    ForbiddenPredicate(String),
    #[error("translation failed quality control: {0}")]
    QcFailed(String),
    #[error(transparent)]
    Lexicon(#[from] lexicon::LexiconError),
}

/// Everything the offline backend needs to mirror the prompt protocol,
/// grouped so `backend::offline` stays decoupled from this module's
/// internals.
pub(crate) mod offline_support {
    pub(crate) use super::prompts::{
        extract_line, parse_quoted_list, FACT_SYSTEM_PREFIX, JUDGE_SYSTEM_PREFIX,
        STORY_SYSTEM_PREFIX, TRANSLATION_SYSTEM_PREFIX,
    };
    pub(crate) use super::render::{
        fact_text as render_fact, invent_fresh_predicate as invent_predicate,
        premise_text as render_premise,
        rule_text_specific as render_specific, rule_text_universal as render_universal,
        story_text as render_story,
    };
}
