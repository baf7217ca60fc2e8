//! Whole-instance and whole-dataset verification: the logic-validation step
//! run over finished data.

use super::instance::{ProblemInstance, OPTIONS};
use crate::engine::{decide_label, validate_chain};
use crate::fol::TruthLabel;
use crate::nl::{qc_translation, Lexicon};

#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks one instance end to end:
///
/// - the aligned arrays agree in length and the options are canonical;
/// - the premises are satisfiable and the engine's label equals the answer;
/// - the proof chain validates (corrupted instances whose chain was dropped
///   get the label-only check);
/// - every sentence passes the translation quality control.
pub fn verify_instance(instance: &ProblemInstance) -> Result<(), String> {
    if instance.context.len() != instance.context_fol.len() {
        return Err("context and context_fol lengths differ".into());
    }
    if instance.metadata.premise_tags.len() != instance.context_fol.len() {
        return Err("premise_tags length differs from context".into());
    }
    if instance.options.iter().map(String::as_str).ne(OPTIONS) {
        return Err("options are not the canonical A/B/C triple".into());
    }

    let premises = instance.premise_set().map_err(|e| e.to_string())?;
    let goal = instance.goal();
    let label = instance.answer.label();
    let verdict = decide_label(&premises, goal).map_err(|e| e.to_string())?;
    if verdict.label != label {
        return Err(format!("engine label {} but stored answer {}", verdict.label, instance.answer));
    }

    let steps = instance.proof_steps();
    let chain_skippable =
        instance.metadata.corrupted && steps.is_empty() && label != TruthLabel::Uncertain;
    if !chain_skippable && !validate_chain(&steps, &premises, goal, label) {
        return Err("proof chain failed validation".into());
    }

    let lexicon = Lexicon::default();
    for (i, (fol, nl)) in instance.context_fol.iter().zip(&instance.context).enumerate() {
        if !qc_translation(fol, nl, &lexicon) {
            return Err(format!("premise {i} fails quality control: {fol} vs {nl:?}"));
        }
    }
    if !qc_translation(goal, &instance.question, &lexicon) {
        return Err(format!("question fails quality control for goal {goal}"));
    }
    for (k, step) in instance.proof.iter().enumerate() {
        if step.facts_fol.len() != step.facts_nl.len() {
            return Err(format!("step {k} fact arrays differ in length"));
        }
        for (fol, nl) in step.facts_fol.iter().zip(&step.facts_nl) {
            if !qc_translation(fol, nl, &lexicon) {
                return Err(format!("step {k} fact fails quality control: {fol}"));
            }
        }
        if !qc_translation(&step.rule_fol, &step.rule_nl, &lexicon) {
            return Err(format!("step {k} rule fails quality control: {}", step.rule_fol));
        }
        if !qc_translation(&step.conclusion_fol, &step.conclusion_nl, &lexicon) {
            return Err(format!("step {k} conclusion fails quality control"));
        }
    }
    Ok(())
}

/// Runs `verify_instance` over a dataset and tallies the outcome.
pub fn verify_dataset(instances: &[ProblemInstance]) -> VerifyReport {
    let mut report = VerifyReport { total: instances.len(), ..VerifyReport::default() };
    for instance in instances {
        match verify_instance(instance) {
            Ok(()) => report.passed += 1,
            Err(reason) => {
                report.failures.push(VerifyFailure { id: instance.id.clone(), reason })
            }
        }
    }
    report
}
