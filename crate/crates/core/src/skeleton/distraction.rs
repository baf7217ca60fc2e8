//! Distraction injection.
//!
//! Type 1 adds facts and rules about a different subject, reusing chain
//! predicates where possible. Type 2 adds premises that are logically wired
//! to a core fact but whose antecedent stays undetermined, so they can never
//! resolve it. Every injection is verified against the engine: the goal's
//! label (and for type 2 the targeted fact's label) must be unchanged and
//! the premise set must stay satisfiable, otherwise the item is resampled.

use super::tree::{NodeRole, ReasoningTree};
use super::GenError;
use crate::engine::{decide_label, PremiseSet};
use crate::fol::{Formula, PredicateSymbol, SubjectConstant, TruthLabel};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// One injected distraction: the asserted facts and rules it contributes.
#[derive(Clone, Debug)]
pub struct DistractionItem {
    pub subject: SubjectConstant,
    pub facts: Vec<Formula>,
    pub rules: Vec<Formula>,
}

#[derive(Clone, Debug, Default)]
pub struct DistractionSet {
    pub type1: Vec<DistractionItem>,
    pub type2: Vec<DistractionItem>,
}

impl DistractionSet {
    pub fn counts(&self) -> (u32, u32) {
        (self.type1.len() as u32, self.type2.len() as u32)
    }

    pub fn items(&self) -> impl Iterator<Item = &DistractionItem> {
        self.type1.iter().chain(self.type2.iter())
    }
}

/// Accumulated premises during injection; each accepted item lands here so
/// later verifications see the full set.
pub struct PremisePool {
    pub facts: Vec<Formula>,
    pub rules: Vec<Formula>,
    pub domain: BTreeSet<String>,
    pub goal_atom: Formula,
    pub goal_label: TruthLabel,
    next_distraction_pred: usize,
}

impl PremisePool {
    pub fn from_tree(tree: &ReasoningTree) -> Self {
        let facts = tree.leaf_facts().map(|n| tree.literal(n.id)).collect();
        let rules = tree
            .nodes
            .iter()
            .filter_map(|n| n.expansion.as_ref())
            .map(|e| e.rule.clone())
            .collect();
        PremisePool {
            facts,
            rules,
            domain: [tree.subject.name.clone()].into(),
            goal_atom: tree.atom(tree.root),
            goal_label: tree.node(tree.root).label,
            next_distraction_pred: 1,
        }
    }

    fn fresh_pred(&mut self) -> PredicateSymbol {
        let p = PredicateSymbol::new(format!("D{}", self.next_distraction_pred)).unwrap();
        self.next_distraction_pred += 1;
        p
    }

    /// Satisfiability plus goal-label invariance with the candidate item
    /// added; extra checks let type 2 pin its target fact.
    fn verify_with(
        &self,
        item: &DistractionItem,
        extra_invariant: Option<(&Formula, TruthLabel)>,
    ) -> bool {
        let mut facts = self.facts.clone();
        facts.extend(item.facts.iter().cloned());
        let mut rules = self.rules.clone();
        rules.extend(item.rules.iter().cloned());
        let mut domain = self.domain.clone();
        domain.insert(item.subject.name.clone());

        let Ok(premises) = PremiseSet::new(facts, rules, domain) else {
            return false;
        };
        let goal_ok = decide_label(&premises, &self.goal_atom)
            .is_ok_and(|v| v.label == self.goal_label);
        if !goal_ok {
            return false;
        }
        match extra_invariant {
            Some((fact, label)) => {
                decide_label(&premises, fact).is_ok_and(|v| v.label == label)
            }
            None => true,
        }
    }

    fn accept(&mut self, item: &DistractionItem) {
        self.facts.extend(item.facts.iter().cloned());
        self.rules.extend(item.rules.iter().cloned());
        self.domain.insert(item.subject.name.clone());
    }
}

/// Injects `n1` premises about non-primary subjects. Reused chain predicates
/// keep the sign of the core node they mirror, so a later universal rendering
/// of a core rule cannot contradict them.
pub fn inject_type1(
    tree: &ReasoningTree,
    rng: &mut ChaCha8Rng,
    n1: u32,
    subject_pool: &[SubjectConstant],
    pool: &mut PremisePool,
    exists_ratio: f64,
    resample_limit: u32,
) -> Result<Vec<DistractionItem>, GenError> {
    assert!(
        subject_pool.iter().all(|s| s.name != tree.subject.name),
        "distraction subjects must differ from the primary subject"
    );
    let mut available: Vec<&SubjectConstant> = subject_pool.iter().collect();
    available.shuffle(rng);
    let mut items = Vec::new();
    let mut resamples = 0u32;
    while (items.len() as u32) < n1 {
        let Some(subject) = available.get(items.len()).copied() else {
            break; // pool exhausted
        };
        let item = sample_type1_item(tree, rng, subject, pool, exists_ratio);
        if pool.verify_with(&item, None) {
            pool.accept(&item);
            items.push(item);
        } else {
            resamples += 1;
            if resamples > resample_limit {
                return Err(GenError::InjectionFailed(resamples));
            }
        }
    }
    Ok(items)
}

fn sample_type1_item(
    tree: &ReasoningTree,
    rng: &mut ChaCha8Rng,
    subject: &SubjectConstant,
    pool: &mut PremisePool,
    exists_ratio: f64,
) -> DistractionItem {
    let core_nodes: Vec<_> = tree
        .nodes
        .iter()
        .filter(|n| n.role != NodeRole::Mention)
        .collect();
    if rng.gen_bool(0.5) {
        // Mirror a chain fact onto the distraction subject.
        let node = core_nodes[rng.gen_range(0..core_nodes.len())];
        let fact = Formula::literal(
            node.placeholder.clone(),
            subject.name.clone(),
            node.label.as_bool().unwrap(),
        );
        DistractionItem { subject: subject.clone(), facts: vec![fact], rules: vec![] }
    } else if rng.gen_bool(exists_ratio) {
        // An existential over fresh predicates; inert for the goal since the
        // predicates occur nowhere else.
        let a = pool.fresh_pred();
        let b = pool.fresh_pred();
        let body = Formula::and(
            Formula::Atom(a, crate::fol::Term::Variable("x".into())),
            Formula::Atom(b, crate::fol::Term::Variable("x".into())),
        );
        DistractionItem {
            subject: subject.clone(),
            facts: vec![],
            rules: vec![Formula::exists("x", body)],
        }
    } else {
        // A small fact+rule bundle over fresh predicates.
        let a = pool.fresh_pred();
        let b = pool.fresh_pred();
        let fact = Formula::literal(a.clone(), subject.name.clone(), true);
        let lhs = Formula::literal(a, subject.name.clone(), true);
        let rhs = Formula::literal(b, subject.name.clone(), true);
        let rule = if rng.gen_bool(0.5) {
            Formula::implies(lhs, rhs)
        } else {
            Formula::xor(lhs, rhs)
        };
        DistractionItem { subject: subject.clone(), facts: vec![fact], rules: vec![rule] }
    }
}

/// Injects `n2` premise groups targeting core facts: an asserted fresh fact
/// `d1`, an unasserted fresh `d2`, and a rule such as `(d1 ⊕ d2) → f` whose
/// antecedent stays undetermined.
pub fn inject_type2(
    tree: &ReasoningTree,
    rng: &mut ChaCha8Rng,
    n2: u32,
    pool: &mut PremisePool,
    resample_limit: u32,
) -> Result<Vec<DistractionItem>, GenError> {
    let core_nodes: Vec<_> = tree
        .nodes
        .iter()
        .filter(|n| n.role != NodeRole::Mention)
        .map(|n| n.id)
        .collect();
    let mut items = Vec::new();
    let mut resamples = 0u32;
    while (items.len() as u32) < n2 {
        let target = core_nodes[rng.gen_range(0..core_nodes.len())];
        let target_atom = tree.atom(target);
        let target_label = decide_label(
            &PremiseSet::new(pool.facts.clone(), pool.rules.clone(), pool.domain.clone())?,
            &target_atom,
        )?
        .label;

        let d1 = pool.fresh_pred();
        let d2 = pool.fresh_pred();
        let d1_fact = Formula::literal(d1.clone(), tree.subject.name.clone(), true);
        let d1_atom = Formula::literal(d1, tree.subject.name.clone(), true);
        let d2_atom = Formula::literal(d2, tree.subject.name.clone(), true);
        let antecedent = if rng.gen_bool(0.5) {
            Formula::xor(d1_atom, d2_atom)
        } else {
            Formula::and(d1_atom, d2_atom)
        };
        let rule = Formula::implies(antecedent, target_atom.clone());
        let item = DistractionItem {
            subject: tree.subject.clone(),
            facts: vec![d1_fact],
            rules: vec![rule],
        };

        if pool.verify_with(&item, Some((&target_atom, target_label))) {
            pool.accept(&item);
            items.push(item);
        } else {
            resamples += 1;
            if resamples > resample_limit {
                return Err(GenError::InjectionFailed(resamples));
            }
        }
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::super::tree::{build_skeleton, SkeletonConfig};
    use super::super::Difficulty;
    use super::*;
    use rand::SeedableRng;

    fn fixture() -> (ReasoningTree, ChaCha8Rng) {
        let subject = SubjectConstant::human("Sawyer");
        let tree = build_skeleton(Difficulty::Medium, 7, &subject, &SkeletonConfig::default())
            .unwrap();
        (tree, ChaCha8Rng::seed_from_u64(99))
    }

    fn pool_subjects() -> Vec<SubjectConstant> {
        ["Alice", "Bruno", "Mira"].map(SubjectConstant::human).to_vec()
    }

    #[test]
    fn zero_counts_yield_empty_sets() {
        let (tree, mut rng) = fixture();
        let mut pool = PremisePool::from_tree(&tree);
        let t1 = inject_type1(&tree, &mut rng, 0, &pool_subjects(), &mut pool, 0.0, 50).unwrap();
        let t2 = inject_type2(&tree, &mut rng, 0, &mut pool, 50).unwrap();
        assert!(t1.is_empty() && t2.is_empty());
    }

    #[test]
    fn type1_mentions_only_foreign_subjects() {
        let (tree, mut rng) = fixture();
        let mut pool = PremisePool::from_tree(&tree);
        let items = inject_type1(&tree, &mut rng, 3, &pool_subjects(), &mut pool, 0.3, 50).unwrap();
        assert_eq!(items.len(), 3);
        for item in &items {
            for f in item.facts.iter() {
                assert!(!f.constants().contains("Sawyer"));
            }
            for r in item.rules.iter().filter(|r| r.is_quantifier_free()) {
                assert!(!r.constants().contains("Sawyer"));
            }
        }
    }

    #[test]
    fn goal_label_is_invariant_under_injection() {
        for seed in 0..10 {
            let subject = SubjectConstant::human("Sawyer");
            let tree =
                build_skeleton(Difficulty::Medium, seed, &subject, &SkeletonConfig::default())
                    .unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let mut pool = PremisePool::from_tree(&tree);
            let goal = pool.goal_atom.clone();
            let label_before = pool.goal_label;

            inject_type1(&tree, &mut rng, 2, &pool_subjects(), &mut pool, 0.0, 50).unwrap();
            inject_type2(&tree, &mut rng, 2, &mut pool, 50).unwrap();

            let premises =
                PremiseSet::new(pool.facts.clone(), pool.rules.clone(), pool.domain.clone())
                    .unwrap();
            assert_eq!(decide_label(&premises, &goal).unwrap().label, label_before);
        }
    }

    #[test]
    fn type2_keeps_target_fact_unresolved() {
        let (tree, mut rng) = fixture();
        let mut pool = PremisePool::from_tree(&tree);
        let items = inject_type2(&tree, &mut rng, 2, &mut pool, 50).unwrap();
        assert_eq!(items.len(), 2);
        for item in &items {
            assert_eq!(item.facts.len(), 1);
            assert_eq!(item.rules.len(), 1);
            // The rule mentions exactly one core (F-prefixed) predicate.
            let core_mentions = item.rules[0]
                .predicates()
                .iter()
                .filter(|p| p.name().starts_with('F'))
                .count();
            assert_eq!(core_mentions, 1);
        }
    }
}
