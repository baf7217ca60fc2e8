//! Top-down construction of the reasoning tree and emission of its proof
//! chain.

use super::template::{catalog, RuleTemplate, TemplateFamily};
use super::{Difficulty, GenError};
use crate::engine::{decide_label, PremiseSet, ProofStep};
use crate::fol::{Formula, PredicateSymbol, SubjectConstant, Term, TruthLabel};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug)]
pub struct SkeletonConfig {
    /// Overrides the tier's derivation-step bounds when set.
    pub depth_range: Option<(u32, u32)>,
    /// Per-expansion probability of sampling a backward template (hard tier).
    pub backward_ratio: f64,
    /// Bound on expansion resampling before giving up.
    pub resample_limit: u32,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        SkeletonConfig { depth_range: None, backward_ratio: 0.4, resample_limit: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeRole {
    /// Derived from children by an expansion; concluded by a proof step.
    Expanded,
    /// Asserted as a premise fact.
    LeafFact,
    /// Mentioned by a rule only; its value is entailed, never asserted.
    Mention,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub template_id: &'static str,
    pub family: TemplateFamily,
    /// Children in template slot order (asserted and mention slots alike).
    pub children: Vec<NodeId>,
    /// The instantiated rule, bound to the primary subject.
    pub rule: Formula,
}

#[derive(Clone, Debug)]
pub struct SkeletonNode {
    pub id: NodeId,
    /// Placeholder predicate (`F1`, `F2`, ...) awaiting instantiation.
    pub placeholder: PredicateSymbol,
    pub label: TruthLabel,
    pub role: NodeRole,
    pub expansion: Option<Expansion>,
}

impl SkeletonNode {
    pub fn is_leaf(&self) -> bool {
        self.expansion.is_none()
    }
}

/// The logic skeleton: a goal-rooted tree of labeled placeholder facts and
/// the rule templates that expand them.
#[derive(Clone, Debug)]
pub struct ReasoningTree {
    pub root: NodeId,
    pub nodes: Vec<SkeletonNode>,
    /// Number of chained derivation steps (equals the proof length).
    pub depth: u32,
    pub mode: Difficulty,
    pub subject: SubjectConstant,
    pub backward_steps: u32,
}

impl ReasoningTree {
    pub fn node(&self, id: NodeId) -> &SkeletonNode {
        &self.nodes[id.0]
    }

    /// The positive atom of a node over the primary subject.
    pub fn atom(&self, id: NodeId) -> Formula {
        Formula::Atom(
            self.node(id).placeholder.clone(),
            Term::Constant(self.subject.name.clone()),
        )
    }

    /// The node's atom signed by its label.
    pub fn literal(&self, id: NodeId) -> Formula {
        let node = self.node(id);
        Formula::literal(
            node.placeholder.clone(),
            self.subject.name.clone(),
            node.label.as_bool().expect("skeleton labels are determinate"),
        )
    }

    pub fn leaf_facts(&self) -> impl Iterator<Item = &SkeletonNode> {
        self.nodes.iter().filter(|n| n.role == NodeRole::LeafFact)
    }

    /// Expanded nodes from the root downward.
    pub fn expansion_chain(&self) -> Vec<NodeId> {
        let mut chain = Vec::new();
        let mut cursor = Some(self.root);
        while let Some(id) = cursor {
            let node = self.node(id);
            if let Some(exp) = &node.expansion {
                chain.push(id);
                cursor = exp
                    .children
                    .iter()
                    .copied()
                    .find(|c| self.node(*c).role == NodeRole::Expanded);
            } else {
                cursor = None;
            }
        }
        chain
    }
}

/// Builds a reasoning tree for the tier, deterministically for a fixed seed.
///
/// The root's truth value is sampled from {True, False}; every expansion
/// draws a template and an assignment row compatible with the parent's
/// label, and is re-verified by the entailment engine before it is kept.
pub fn build_skeleton(
    mode: Difficulty,
    rng_seed: u64,
    subject: &SubjectConstant,
    config: &SkeletonConfig,
) -> Result<ReasoningTree, GenError> {
    let (lo, hi) = config.depth_range.unwrap_or(mode.depth_range());
    assert!(lo >= 1 && lo <= hi, "invalid depth range {lo}..={hi}");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let depth = rng.gen_range(lo..=hi);
    let root_label = if rng.gen_bool(0.5) { TruthLabel::True } else { TruthLabel::False };

    let mut tree = ReasoningTree {
        root: NodeId(0),
        nodes: vec![SkeletonNode {
            id: NodeId(0),
            placeholder: placeholder(1),
            label: root_label,
            role: NodeRole::LeafFact,
            expansion: None,
        }],
        depth,
        mode,
        subject: subject.clone(),
        backward_steps: 0,
    };

    let domain: BTreeSet<String> = [subject.name.clone()].into();
    let mut resamples = 0u32;
    let mut current = tree.root;
    for step in 0..depth {
        let parent_label = tree.node(current).label;
        loop {
            if resamples > config.resample_limit {
                return Err(GenError::GenerationExhausted(resamples));
            }
            let tmpl = choose_template(&mut rng, mode, parent_label, config.backward_ratio);
            let rows: Vec<_> = tmpl.rows_for(parent_label).collect();
            let row = rows[rng.gen_range(0..rows.len())];

            // Materialize children.
            let first_child = tree.nodes.len();
            let children: Vec<NodeId> = (0..tmpl.arity)
                .map(|i| {
                    let id = NodeId(first_child + i);
                    tree.nodes.push(SkeletonNode {
                        id,
                        placeholder: placeholder(first_child + i + 1),
                        label: row.children[i],
                        role: if tmpl.is_asserted_child(i) {
                            NodeRole::LeafFact
                        } else {
                            NodeRole::Mention
                        },
                        expansion: None,
                    });
                    id
                })
                .collect();
            let child_preds: Vec<PredicateSymbol> = children
                .iter()
                .map(|c| tree.node(*c).placeholder.clone())
                .collect();
            let rule = tmpl.instantiate(
                &subject.name,
                &tree.node(current).placeholder,
                &child_preds,
            );

            // Re-verify the expansion with the engine before keeping it.
            let facts: Vec<Formula> = children
                .iter()
                .enumerate()
                .filter(|(i, _)| tmpl.is_asserted_child(*i))
                .map(|(_, c)| tree.literal(*c))
                .collect();
            let verified = PremiseSet::new(facts, vec![rule.clone()], domain.clone())
                .ok()
                .and_then(|premises| decide_label(&premises, &tree.atom(current)).ok())
                .is_some_and(|verdict| verdict.label == parent_label);
            if !verified {
                tree.nodes.truncate(first_child);
                resamples += 1;
                continue;
            }

            if tmpl.family == TemplateFamily::Backward {
                tree.backward_steps += 1;
            }
            tree.nodes[current.0].role = NodeRole::Expanded;
            tree.nodes[current.0].expansion = Some(Expansion {
                template_id: tmpl.id,
                family: tmpl.family,
                children: children.clone(),
                rule,
            });

            if step + 1 < depth {
                let assertable: Vec<NodeId> = children
                    .iter()
                    .copied()
                    .filter(|c| tree.node(*c).role == NodeRole::LeafFact)
                    .collect();
                current = assertable[rng.gen_range(0..assertable.len())];
            }
            break;
        }
    }
    Ok(tree)
}

fn placeholder(n: usize) -> PredicateSymbol {
    PredicateSymbol::new(format!("F{n}")).unwrap()
}

fn choose_template(
    rng: &mut ChaCha8Rng,
    mode: Difficulty,
    parent_label: TruthLabel,
    backward_ratio: f64,
) -> &'static RuleTemplate {
    let family = if mode.allows_backward() && rng.gen_bool(backward_ratio) {
        TemplateFamily::Backward
    } else {
        TemplateFamily::Forward
    };
    let pool: Vec<&RuleTemplate> = catalog()
        .iter()
        .filter(|t| t.family == family && t.rows_for(parent_label).next().is_some())
        .collect();
    // Both labels are coverable in the forward family; backward may be
    // empty for this label, in which case fall back.
    let pool = if pool.is_empty() {
        catalog()
            .iter()
            .filter(|t| {
                t.family == TemplateFamily::Forward && t.rows_for(parent_label).next().is_some()
            })
            .collect()
    } else {
        pool
    };
    pool[rng.gen_range(0..pool.len())]
}

/// Flattens the tree into its derivation chain, children before parents:
/// each step consumes the asserted children of one expansion and concludes
/// the parent's literal; the final step concludes the goal literal.
pub fn emit_proof_chain(tree: &ReasoningTree) -> Vec<ProofStep> {
    let mut expanded = tree.expansion_chain();
    expanded.reverse();
    expanded
        .into_iter()
        .map(|id| {
            let exp = tree.node(id).expansion.as_ref().unwrap();
            let step_facts = exp
                .children
                .iter()
                .copied()
                .filter(|c| tree.node(*c).role != NodeRole::Mention)
                .map(|c| tree.literal(c))
                .collect();
            ProofStep {
                step_facts,
                step_rule: exp.rule.clone(),
                conclusion: tree.literal(id),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::validate_step;

    fn subject() -> SubjectConstant {
        SubjectConstant::human("Sawyer")
    }

    #[test]
    fn depth_stays_within_tier_bounds() {
        let config = SkeletonConfig::default();
        for (seed, mode) in [(1u64, Difficulty::Easy), (2, Difficulty::Medium), (3, Difficulty::Hard)] {
            for offset in 0..20 {
                let tree = build_skeleton(mode, seed * 1000 + offset, &subject(), &config).unwrap();
                let (lo, hi) = mode.depth_range();
                assert!(tree.depth >= lo && tree.depth <= hi);
                assert_eq!(tree.expansion_chain().len() as u32, tree.depth);
            }
        }
    }

    #[test]
    fn same_seed_yields_identical_trees() {
        let config = SkeletonConfig::default();
        let a = build_skeleton(Difficulty::Medium, 42, &subject(), &config).unwrap();
        let b = build_skeleton(Difficulty::Medium, 42, &subject(), &config).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn backward_templates_only_in_hard_mode() {
        let config = SkeletonConfig::default();
        for seed in 0..50 {
            for mode in [Difficulty::Easy, Difficulty::Medium] {
                let tree = build_skeleton(mode, seed, &subject(), &config).unwrap();
                assert_eq!(tree.backward_steps, 0, "{mode} tree used a backward template");
            }
        }
        let hard_with_backward = (0..50)
            .filter(|seed| {
                build_skeleton(Difficulty::Hard, *seed, &subject(), &config)
                    .unwrap()
                    .backward_steps
                    > 0
            })
            .count();
        assert!(hard_with_backward > 0);
    }

    #[test]
    fn every_proof_step_validates() {
        let config = SkeletonConfig::default();
        let domain: BTreeSet<String> = ["Sawyer".to_string()].into();
        for seed in 0..20 {
            let tree = build_skeleton(Difficulty::Hard, seed, &subject(), &config).unwrap();
            let steps = emit_proof_chain(&tree);
            assert_eq!(steps.len() as u32, tree.depth);
            for step in &steps {
                assert!(validate_step(step, &domain));
            }
            // Final step concludes the root literal.
            assert_eq!(steps.last().unwrap().conclusion, tree.literal(tree.root));
        }
    }

    #[test]
    fn mention_children_are_never_step_facts() {
        let config = SkeletonConfig::default();
        let mut saw_mentions = false;
        for seed in 0..100 {
            let tree = build_skeleton(Difficulty::Hard, seed, &subject(), &config).unwrap();
            let mentions: Vec<Formula> = tree
                .nodes
                .iter()
                .filter(|n| n.role == NodeRole::Mention)
                .map(|n| tree.atom(n.id))
                .collect();
            saw_mentions |= !mentions.is_empty();
            for step in emit_proof_chain(&tree) {
                for fact in &step.step_facts {
                    let (_, ground) = fact.as_literal().unwrap();
                    let atom = Formula::Atom(
                        ground.predicate.clone(),
                        Term::Constant(ground.constant.clone()),
                    );
                    assert!(!mentions.contains(&atom));
                }
            }
        }
        assert!(saw_mentions, "no tree exercised a mention-only child");
    }
}
