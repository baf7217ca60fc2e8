//! Goal-rooted reasoning-tree construction.
//!
//! Generation works top-down: the goal's truth value is fixed first, then a
//! rule template expands it into child facts whose labels are drawn from the
//! template's assignment table, and one child is expanded further until the
//! requested number of derivation steps is reached. Every expansion is
//! re-verified by the entailment engine, then distracting premises are
//! injected and the whole problem is shuffled and checked once more.

mod assemble;
mod distraction;
mod template;
mod tree;

pub use assemble::{assemble_premises, AssembledProblem, PremiseKind, TaggedPremise};
pub use distraction::{inject_type1, inject_type2, DistractionItem, DistractionSet, PremisePool};
pub use template::{catalog, verify_catalog, AssignmentRow, RuleTemplate, TemplateFamily};
pub use tree::{
    build_skeleton, emit_proof_chain, Expansion, NodeId, NodeRole, ReasoningTree, SkeletonConfig,
    SkeletonNode,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Difficulty tier, determined by the length of the reasoning chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Hard];

    /// Inclusive bounds on derivation steps per tier.
    pub fn depth_range(self) -> (u32, u32) {
        match self {
            Difficulty::Easy => (1, 2),
            Difficulty::Medium => (3, 5),
            Difficulty::Hard => (6, 9),
        }
    }

    /// Backward-direction templates (modus tollens and friends) are reserved
    /// for the hard tier.
    pub fn allows_backward(self) -> bool {
        matches!(self, Difficulty::Hard)
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        })
    }
}

impl std::str::FromStr for Difficulty {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "easy" => Ok(Difficulty::Easy),
            "medium" => Ok(Difficulty::Medium),
            "hard" => Ok(Difficulty::Hard),
            other => Err(format!("unknown difficulty {other:?} (easy|medium|hard)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("no template sequence satisfied the constraints after {0} resamples")]
    GenerationExhausted(u32),
    #[error("distraction injection failed verification after {0} resamples")]
    InjectionFailed(u32),
    #[error("assembled premise set is inconsistent: {0}")]
    ConsistencyError(String),
    #[error(transparent)]
    Engine(#[from] crate::engine::EngineError),
}
