//! Prompting-based evaluation harness.
//!
//! Runs a model (a remote endpoint or a built-in baseline) over a dataset
//! with standard or chain-of-thought few-shot prompting, parses the JSON
//! answers, and aggregates per-tier accuracy into machine- and human-facing
//! reports. The `oracle` baseline answers through the entailment engine and
//! must score 100% on any dataset this crate generates; the seeded `random`
//! baseline calibrates the floor.

mod model;
mod parse;
mod prompt;
mod run;

pub use model::EvalModel;
pub use parse::parse_reply;
pub use prompt::{build_prompt, Exemplar, PromptStrategy, StrategyKind};
pub use run::{
    ablation_table, run_ablation, run_eval, AblationRow, EvalReport, InstanceRecord, ModelRun,
    PerTier,
};
