//! The persisted problem-instance format.

use super::DatasetError;
use crate::engine::{EngineError, PremiseSet, ProofStep};
use crate::fol::{Formula, TruthLabel};
use crate::nl::{RealizedProblem, StoryContext};
use crate::skeleton::{AssembledProblem, Difficulty, PremiseKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Answer option: `A` is True, `B` False, `C` Uncertain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    A,
    B,
    C,
}

impl Answer {
    pub fn label(self) -> TruthLabel {
        match self {
            Answer::A => TruthLabel::True,
            Answer::B => TruthLabel::False,
            Answer::C => TruthLabel::Uncertain,
        }
    }
}

impl From<TruthLabel> for Answer {
    fn from(label: TruthLabel) -> Self {
        match label {
            TruthLabel::True => Answer::A,
            TruthLabel::False => Answer::B,
            TruthLabel::Uncertain => Answer::C,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::A => "A",
            Answer::B => "B",
            Answer::C => "C",
        })
    }
}

pub const OPTIONS: [&str; 3] = ["A) True", "B) False", "C) Uncertain"];

fn default_options() -> [String; 3] {
    OPTIONS.map(String::from)
}

/// One derivation step with aligned symbolic and textual forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofStepRecord {
    pub facts_fol: Vec<Formula>,
    pub rule_fol: Formula,
    pub conclusion_fol: Formula,
    pub facts_nl: Vec<String>,
    pub rule_nl: String,
    pub conclusion_nl: String,
}

impl ProofStepRecord {
    pub fn as_step(&self) -> ProofStep {
        ProofStep {
            step_facts: self.facts_fol.clone(),
            step_rule: self.rule_fol.clone(),
            conclusion: self.conclusion_fol.clone(),
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub difficulty: Difficulty,
    pub num_steps: u32,
    pub n1: u32,
    pub n2: u32,
    pub seed: u64,
    pub subject: String,
    pub keyword: String,
    pub generator: String,
    /// The goal in symbolic form; the question string phrases it.
    pub goal_fol: Formula,
    /// Provenance of each premise, aligned with the context arrays.
    pub premise_tags: Vec<PremiseKind>,
    pub backward_steps: u32,
    #[serde(default, skip_serializing_if = "is_false")]
    pub corrupted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmented: Option<String>,
}

/// A complete benchmark problem: aligned premises, a three-option question,
/// the verified answer, and the derivation chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub id: String,
    pub context: Vec<String>,
    pub context_fol: Vec<Formula>,
    pub question: String,
    #[serde(default = "default_options")]
    pub options: [String; 3],
    pub answer: Answer,
    pub proof: Vec<ProofStepRecord>,
    pub metadata: InstanceMetadata,
}

impl ProblemInstance {
    pub fn goal(&self) -> &Formula {
        &self.metadata.goal_fol
    }

    pub fn domain(&self) -> BTreeSet<String> {
        let mut domain: BTreeSet<String> = [self.metadata.subject.clone()].into();
        for f in self.context_fol.iter().chain([self.goal()]) {
            domain.extend(f.constants().into_iter().map(String::from));
        }
        domain
    }

    /// The engine view of the context: literals are facts, everything else
    /// is a rule.
    pub fn premise_set(&self) -> Result<PremiseSet, EngineError> {
        let (facts, rules): (Vec<_>, Vec<_>) = self
            .context_fol
            .iter()
            .cloned()
            .partition(|f| f.as_literal().is_some());
        PremiseSet::new(facts, rules, self.domain())
    }

    pub fn proof_steps(&self) -> Vec<ProofStep> {
        self.proof.iter().map(ProofStepRecord::as_step).collect()
    }

    /// Indices of distraction premises.
    pub fn distraction_indices(&self) -> Vec<usize> {
        self.metadata
            .premise_tags
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_distraction())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Builds the persisted instance from an assembled problem and its
/// realization, then runs whole-instance verification: the engine must
/// reproduce the answer, the chain must validate, and every sentence must
/// pass quality control. A failing instance is rejected so the caller can
/// retry with a fresh seed.
pub fn assemble_instance(
    problem: &AssembledProblem,
    realized: &RealizedProblem,
    story: &StoryContext,
    id: impl Into<String>,
    seed: u64,
) -> Result<ProblemInstance, DatasetError> {
    let id = id.into();
    let instance = ProblemInstance {
        id: id.clone(),
        context: realized.premises.iter().map(|p| p.text.clone()).collect(),
        context_fol: realized.premises.iter().map(|p| p.formula.clone()).collect(),
        question: realized.question.clone(),
        options: default_options(),
        answer: Answer::from(realized.label),
        proof: realized
            .proof
            .iter()
            .map(|s| ProofStepRecord {
                facts_fol: s.step.step_facts.clone(),
                rule_fol: s.step.step_rule.clone(),
                conclusion_fol: s.step.conclusion.clone(),
                facts_nl: s.facts_nl.clone(),
                rule_nl: s.rule_nl.clone(),
                conclusion_nl: s.conclusion_nl.clone(),
            })
            .collect(),
        metadata: InstanceMetadata {
            difficulty: problem.difficulty,
            num_steps: problem.depth,
            n1: problem.n1,
            n2: problem.n2,
            seed,
            subject: problem.subject.name.clone(),
            keyword: story.keyword.clone(),
            generator: generator_tag(),
            goal_fol: realized.goal.clone(),
            premise_tags: realized.premises.iter().map(|p| p.kind).collect(),
            backward_steps: problem.backward_steps,
            corrupted: false,
            variant: None,
            augmented: None,
        },
    };
    super::verify::verify_instance(&instance)
        .map_err(|reason| DatasetError::VerificationFailed { id, reason })?;
    Ok(instance)
}

pub(crate) fn generator_tag() -> String {
    format!("folgen {}", env!("CARGO_PKG_VERSION"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answer_label_round_trip() {
        for answer in [Answer::A, Answer::B, Answer::C] {
            assert_eq!(Answer::from(answer.label()), answer);
        }
    }

    #[test]
    fn options_are_fixed() {
        assert_eq!(OPTIONS, ["A) True", "B) False", "C) Uncertain"]);
    }
}
