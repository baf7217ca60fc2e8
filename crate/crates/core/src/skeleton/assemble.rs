//! Shuffled assembly of a tree plus distractions into a premise list, goal,
//! and answer label.

use super::distraction::DistractionSet;
use super::tree::{emit_proof_chain, ReasoningTree};
use super::{Difficulty, GenError};
use crate::engine::{decide_label, PremiseSet, ProofStep};
use crate::fol::{Formula, SubjectConstant, TruthLabel};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Provenance of one premise; `step` indexes into the proof chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PremiseKind {
    CoreFact { step: usize },
    CoreRule { step: usize },
    Type1Fact,
    Type1Rule,
    Type2Fact,
    Type2Rule,
}

impl PremiseKind {
    pub fn is_distraction(self) -> bool {
        !matches!(self, PremiseKind::CoreFact { .. } | PremiseKind::CoreRule { .. })
    }

    pub fn is_rule(self) -> bool {
        matches!(
            self,
            PremiseKind::CoreRule { .. } | PremiseKind::Type1Rule | PremiseKind::Type2Rule
        )
    }
}

#[derive(Clone, Debug)]
pub struct TaggedPremise {
    pub formula: Formula,
    pub kind: PremiseKind,
}

/// A fully assembled symbolic problem, before natural-language realization.
#[derive(Clone, Debug)]
pub struct AssembledProblem {
    pub subject: SubjectConstant,
    pub domain: BTreeSet<String>,
    /// Premises in presentation order (uniformly shuffled).
    pub premises: Vec<TaggedPremise>,
    pub goal: Formula,
    /// Label of `goal` as phrased (a negated goal statement flips it).
    pub label: TruthLabel,
    pub proof: Vec<ProofStep>,
    pub difficulty: Difficulty,
    pub depth: u32,
    pub backward_steps: u32,
    pub n1: u32,
    pub n2: u32,
}

impl AssembledProblem {
    pub fn premise_set(&self) -> Result<PremiseSet, crate::engine::EngineError> {
        let (facts, rules): (Vec<_>, Vec<_>) =
            self.premises.iter().partition(|p| !p.kind.is_rule());
        PremiseSet::new(
            facts.into_iter().map(|p| p.formula.clone()).collect(),
            rules.into_iter().map(|p| p.formula.clone()).collect(),
            self.domain.clone(),
        )
    }
}

/// Concatenates leaf facts, chain rules, and distraction items, shuffles them
/// uniformly, derives the goal statement from the root, and verifies the
/// declared label against the engine.
///
/// A `False` root is phrased as the positive atom with answer `False`, or
/// (with probability one half) as the negated statement with answer `True`.
pub fn assemble_premises(
    tree: &ReasoningTree,
    distractions: &DistractionSet,
    rng: &mut ChaCha8Rng,
) -> Result<AssembledProblem, GenError> {
    let steps = emit_proof_chain(tree);

    let mut premises: Vec<TaggedPremise> = Vec::new();
    let mut derived: Vec<&Formula> = Vec::new();
    for (idx, step) in steps.iter().enumerate() {
        for fact in &step.step_facts {
            if !derived.contains(&fact) {
                premises.push(TaggedPremise {
                    formula: fact.clone(),
                    kind: PremiseKind::CoreFact { step: idx },
                });
            }
        }
        premises.push(TaggedPremise {
            formula: step.step_rule.clone(),
            kind: PremiseKind::CoreRule { step: idx },
        });
        derived.push(&step.conclusion);
    }

    let mut domain: BTreeSet<String> = [tree.subject.name.clone()].into();
    for (items, fact_kind, rule_kind) in [
        (&distractions.type1, PremiseKind::Type1Fact, PremiseKind::Type1Rule),
        (&distractions.type2, PremiseKind::Type2Fact, PremiseKind::Type2Rule),
    ] {
        for item in items {
            domain.insert(item.subject.name.clone());
            for f in &item.facts {
                premises.push(TaggedPremise { formula: f.clone(), kind: fact_kind });
            }
            for r in &item.rules {
                premises.push(TaggedPremise { formula: r.clone(), kind: rule_kind });
            }
        }
    }

    premises.shuffle(rng);

    let root_label = tree.node(tree.root).label;
    let root_atom = tree.atom(tree.root);
    let (goal, label) = match root_label {
        TruthLabel::False if rng.gen_bool(0.5) => (root_atom.negated(), TruthLabel::True),
        other => (root_atom, other),
    };

    let (n1, n2) = distractions.counts();
    let problem = AssembledProblem {
        subject: tree.subject.clone(),
        domain,
        premises,
        goal,
        label,
        proof: steps,
        difficulty: tree.mode,
        depth: tree.depth,
        backward_steps: tree.backward_steps,
        n1,
        n2,
    };

    let premise_set = problem
        .premise_set()
        .map_err(|e| GenError::ConsistencyError(e.to_string()))?;
    let verdict = decide_label(&premise_set, &problem.goal)?;
    if verdict.label != problem.label {
        return Err(GenError::ConsistencyError(format!(
            "assembled label {} does not match declared {}",
            verdict.label, problem.label
        )));
    }
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::super::distraction::{inject_type1, inject_type2, PremisePool};
    use super::super::tree::{build_skeleton, SkeletonConfig};
    use super::*;
    use crate::engine::validate_chain;
    use rand::SeedableRng;

    fn assembled(seed: u64) -> AssembledProblem {
        let subject = SubjectConstant::human("Sawyer");
        let tree =
            build_skeleton(Difficulty::Medium, seed, &subject, &SkeletonConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut pool = PremisePool::from_tree(&tree);
        let subjects = ["Alice", "Bruno"].map(SubjectConstant::human).to_vec();
        let type1 = inject_type1(&tree, &mut rng, 2, &subjects, &mut pool, 0.0, 50).unwrap();
        let type2 = inject_type2(&tree, &mut rng, 1, &mut pool, 50).unwrap();
        let distractions = DistractionSet { type1, type2 };
        assemble_premises(&tree, &distractions, &mut rng).unwrap()
    }

    #[test]
    fn assembled_label_matches_engine_and_chain_validates() {
        for seed in 0..10 {
            let problem = assembled(seed);
            let set = problem.premise_set().unwrap();
            assert!(validate_chain(&problem.proof, &set, &problem.goal, problem.label));
        }
    }

    #[test]
    fn shuffle_changes_order_not_content() {
        let subject = SubjectConstant::human("Sawyer");
        let tree =
            build_skeleton(Difficulty::Medium, 5, &subject, &SkeletonConfig::default()).unwrap();
        let empty = DistractionSet::default();
        let mut rng_a = ChaCha8Rng::seed_from_u64(1);
        let mut rng_b = ChaCha8Rng::seed_from_u64(2);
        let a = assemble_premises(&tree, &empty, &mut rng_a).unwrap();
        let b = assemble_premises(&tree, &empty, &mut rng_b).unwrap();
        let mut fa: Vec<String> = a.premises.iter().map(|p| p.formula.to_string()).collect();
        let mut fb: Vec<String> = b.premises.iter().map(|p| p.formula.to_string()).collect();
        assert_ne!(fa, fb, "different seeds should order premises differently");
        fa.sort();
        fb.sort();
        assert_eq!(fa, fb);
    }

    #[test]
    fn premise_tags_reconstruct_the_proof_order() {
        let problem = assembled(3);
        for (idx, step) in problem.proof.iter().enumerate() {
            let rule_tag = problem
                .premises
                .iter()
                .find(|p| p.formula == step.step_rule)
                .map(|p| p.kind);
            assert_eq!(rule_tag, Some(PremiseKind::CoreRule { step: idx }));
        }
    }
}
