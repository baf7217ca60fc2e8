//! Evaluation models: remote chat backends plus the built-in baselines.

use super::prompt::{build_prompt, PromptStrategy};
use crate::backend::{BackendError, LlmBackend};
use crate::dataset::{Answer, ProblemInstance};
use crate::engine::decide_label;
use crate::{derive_seed, stable_hash};
use std::sync::Arc;

/// What answers the questions: the entailment engine, a seeded uniform
/// guesser, or a chat backend behind the few-shot prompt.
#[derive(Clone)]
pub enum EvalModel {
    /// Answers via the entailment engine; defines the 100%-accuracy
    /// regression baseline.
    Oracle,
    /// Uniform over A/B/C, deterministic per (seed, instance id).
    Random { seed: u64 },
    Chat { backend: Arc<dyn LlmBackend> },
}

impl EvalModel {
    pub fn name(&self) -> String {
        match self {
            EvalModel::Oracle => "oracle".into(),
            EvalModel::Random { .. } => "random".into(),
            EvalModel::Chat { backend } => backend.id(),
        }
    }

    /// Produces the raw reply text for one instance. Baselines emit the same
    /// JSON shape a chat model would, so scoring is uniform.
    pub fn reply(
        &self,
        instance: &ProblemInstance,
        strategy: &PromptStrategy,
    ) -> Result<String, BackendError> {
        match self {
            EvalModel::Oracle => {
                let premises = instance
                    .premise_set()
                    .map_err(|e| BackendError::EmptyReply(e.to_string()))?;
                let verdict = decide_label(&premises, instance.goal())
                    .map_err(|e| BackendError::EmptyReply(e.to_string()))?;
                Ok(format!("{{\"answer\": \"{}\"}}", Answer::from(verdict.label)))
            }
            EvalModel::Random { seed } => {
                let roll = derive_seed(*seed, stable_hash(instance.id.as_bytes())) % 3;
                let letter = ["A", "B", "C"][roll as usize];
                Ok(format!("{{\"answer\": \"{letter}\"}}"))
            }
            EvalModel::Chat { backend } => {
                let request = build_prompt(instance, strategy, &backend.id());
                backend.complete(&request)
            }
        }
    }
}
