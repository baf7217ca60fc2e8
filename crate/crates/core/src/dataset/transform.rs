//! Augmentation, corruption, and ablation-variant transforms.

use super::instance::{Answer, ProblemInstance};
use super::DatasetError;
use crate::engine::decide_label;
use crate::fol::{Formula, PredicateSymbol, Term, TruthLabel};
use crate::nl;

const REPLACEMENT_TRIES: u32 = 64;

fn engine_answer(instance: &ProblemInstance) -> Result<Answer, DatasetError> {
    let premises = instance.premise_set()?;
    let verdict = decide_label(&premises, instance.goal())?;
    Ok(Answer::from(verdict.label))
}

fn compose_variant(existing: &Option<String>, added: &str) -> Option<String> {
    Some(match existing {
        Some(prev) => format!("{prev}+{added}"),
        None => added.to_string(),
    })
}

/// Breaks the reasoning chain into one instance per prefix: the k-th
/// instance asks about the k-th step's conclusion. Negative conclusions
/// become a positive-atom goal with answer `B`.
pub fn augment_step_decomposition(
    instance: &ProblemInstance,
) -> Result<Vec<ProblemInstance>, DatasetError> {
    let mut out = Vec::with_capacity(instance.proof.len());
    for k in 1..=instance.proof.len() {
        let step = &instance.proof[k - 1];
        let Some((positive, atom)) = step.conclusion_fol.as_literal() else {
            return Err(DatasetError::VerificationFailed {
                id: instance.id.clone(),
                reason: format!("step {k} conclusion is not a literal"),
            });
        };
        let goal = Formula::Atom(atom.predicate.clone(), Term::Constant(atom.constant.clone()));
        let answer = if positive { Answer::A } else { Answer::B };
        let goal_text = if positive {
            step.conclusion_nl.clone()
        } else {
            // The stored sentence states the negation; re-render the
            // positive statement from the predicate phrase.
            nl::fact_text(&goal)
        };

        let mut derived = instance.clone();
        derived.id = format!("{}-s{k}", instance.id);
        derived.question = nl::question_text(&goal_text);
        derived.answer = answer;
        derived.proof = instance.proof[..k].to_vec();
        derived.metadata.goal_fol = goal;
        derived.metadata.num_steps = k as u32;
        derived.metadata.augmented = Some("step_decomposition".into());

        let checked = engine_answer(&derived)?;
        if checked != derived.answer {
            return Err(DatasetError::VerificationFailed {
                id: derived.id,
                reason: format!("step goal verifies as {checked}, expected {}", derived.answer),
            });
        }
        out.push(derived);
    }
    Ok(out)
}

/// Replaces the goal with a fresh predicate over the primary subject, so the
/// answer becomes `Uncertain`. The engine confirms the new label.
pub fn augment_uncertain_goal(
    instance: &ProblemInstance,
    seed: u64,
) -> Result<ProblemInstance, DatasetError> {
    let mut used: Vec<String> = instance
        .context_fol
        .iter()
        .chain([instance.goal()])
        .flat_map(|f| f.predicates().into_iter().map(|p| p.name().to_string()))
        .collect();
    used.sort();
    used.dedup();

    let premises = instance.premise_set()?;
    for attempt in 0..REPLACEMENT_TRIES {
        let name = nl::invent_fresh_predicate(
            crate::derive_seed(seed, attempt as u64),
            &instance.id,
            &used,
        );
        let Ok(predicate) = PredicateSymbol::new(name.clone()) else {
            continue;
        };
        let goal = Formula::Atom(predicate, Term::Constant(instance.metadata.subject.clone()));
        let verdict = decide_label(&premises, &goal)?;
        if verdict.label != TruthLabel::Uncertain {
            used.push(name);
            continue;
        }
        let goal_text = nl::fact_text(&goal);
        let mut derived = instance.clone();
        derived.id = format!("{}-u", instance.id);
        derived.question = nl::question_text(&goal_text);
        derived.answer = Answer::C;
        derived.proof = Vec::new();
        derived.metadata.goal_fol = goal;
        derived.metadata.augmented = Some("uncertain_goal".into());
        return Ok(derived);
    }
    Err(DatasetError::ReplacementFailed(REPLACEMENT_TRIES))
}

/// Drops every universally quantified premise and recomputes the answer.
/// Entailment is monotone under premise removal, so the answer can only
/// move toward `Uncertain`. A chain that used a removed rule is dropped.
pub fn corrupt_remove_universal(
    instance: &ProblemInstance,
) -> Result<ProblemInstance, DatasetError> {
    let keep: Vec<bool> = instance
        .context_fol
        .iter()
        .map(|f| !matches!(f, Formula::ForAll(_, _)))
        .collect();

    let mut derived = instance.clone();
    derived.id = format!("{}-corrupt", instance.id);
    derived.context = filter_by(&instance.context, &keep);
    derived.context_fol = filter_by(&instance.context_fol, &keep);
    derived.metadata.premise_tags = filter_by(&instance.metadata.premise_tags, &keep);
    derived.metadata.corrupted = true;

    let removed: Vec<&Formula> = instance
        .context_fol
        .iter()
        .zip(&keep)
        .filter(|(_, k)| !**k)
        .map(|(f, _)| f)
        .collect();
    let chain_broken = instance
        .proof
        .iter()
        .any(|s| removed.iter().any(|r| **r == s.rule_fol));

    derived.answer = engine_answer(&derived)?;
    if chain_broken || derived.answer == Answer::C {
        derived.proof = Vec::new();
    }
    Ok(derived)
}

fn filter_by<T: Clone>(items: &[T], keep: &[bool]) -> Vec<T> {
    items
        .iter()
        .zip(keep)
        .filter(|(_, k)| **k)
        .map(|(item, _)| item.clone())
        .collect()
}

/// Removes every distraction premise; the answer is re-verified unchanged.
pub fn variant_no_distractions(
    instance: &ProblemInstance,
) -> Result<ProblemInstance, DatasetError> {
    let keep: Vec<bool> = instance
        .metadata
        .premise_tags
        .iter()
        .map(|t| !t.is_distraction())
        .collect();
    let mut derived = instance.clone();
    derived.id = format!("{}-nd", instance.id);
    derived.context = filter_by(&instance.context, &keep);
    derived.context_fol = filter_by(&instance.context_fol, &keep);
    derived.metadata.premise_tags = filter_by(&instance.metadata.premise_tags, &keep);
    derived.metadata.n1 = 0;
    derived.metadata.n2 = 0;
    derived.metadata.variant = compose_variant(&instance.metadata.variant, "no_distractions");

    let checked = engine_answer(&derived)?;
    if checked != derived.answer {
        return Err(DatasetError::VerificationFailed {
            id: derived.id,
            reason: format!("answer changed from {} to {checked} without distractions", derived.answer),
        });
    }
    Ok(derived)
}

/// Reorders premises to follow the proof chain: the facts of step k, then
/// its rule, for ascending k; distractions keep their relative order at the
/// end. The answer is re-verified unchanged.
pub fn variant_ordered(instance: &ProblemInstance) -> Result<ProblemInstance, DatasetError> {
    let n = instance.context_fol.len();
    let mut placed = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let place = |formula: &Formula, placed: &mut Vec<bool>, order: &mut Vec<usize>| {
        if let Some(idx) = instance
            .context_fol
            .iter()
            .enumerate()
            .position(|(i, f)| !placed[i] && f == formula)
        {
            placed[idx] = true;
            order.push(idx);
        }
    };
    for step in &instance.proof {
        for fact in &step.facts_fol {
            place(fact, &mut placed, &mut order);
        }
        place(&step.rule_fol, &mut placed, &mut order);
    }
    for i in 0..n {
        if !placed[i] {
            order.push(i);
        }
    }

    let mut derived = instance.clone();
    derived.id = format!("{}-ord", instance.id);
    derived.context = order.iter().map(|&i| instance.context[i].clone()).collect();
    derived.context_fol = order.iter().map(|&i| instance.context_fol[i].clone()).collect();
    derived.metadata.premise_tags =
        order.iter().map(|&i| instance.metadata.premise_tags[i]).collect();
    derived.metadata.variant = compose_variant(&instance.metadata.variant, "ordered");

    let checked = engine_answer(&derived)?;
    if checked != derived.answer {
        return Err(DatasetError::VerificationFailed {
            id: derived.id,
            reason: "answer changed under reordering".into(),
        });
    }
    Ok(derived)
}
