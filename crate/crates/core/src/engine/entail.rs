//! Satisfiability, three-valued labeling, and proof-step validation.

use super::cnf::{clausify, AtomTable};
use super::dpll;
use crate::fol::{Formula, GroundAtom, TruthLabel};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Ceiling on distinct ground atoms per satisfiability query. Generated
/// problems stay far below it; the cap guards against pathological inputs.
pub const DEFAULT_ATOM_BUDGET: usize = 64;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("ground atom budget exceeded: {count} atoms, budget {budget}")]
    AtomBudgetExceeded { count: usize, budget: usize },
    #[error("formula is not closed: {0}")]
    OpenFormula(String),
    #[error("constant {constant:?} is not in the domain")]
    ConstantOutsideDomain { constant: String },
    #[error("premise set is unsatisfiable")]
    UnsatisfiablePremises,
    #[error(transparent)]
    Fol(#[from] crate::fol::FolError),
}

/// A total assignment of truth values to ground atoms; reported as the
/// witness model for non-`True` verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(pub BTreeMap<GroundAtom, bool>);

impl Valuation {
    pub fn truth_of(&self, atom: &GroundAtom) -> Option<bool> {
        self.0.get(atom).copied()
    }
}

/// The premises of a problem: asserted literals (`facts`), connective
/// formulas (`rules`), and the subject domain quantifiers range over.
///
/// Construction checks that every mentioned constant is in the domain and
/// that the set is satisfiable; unsatisfiable sets are rejected so that the
/// two entailment queries of `decide_label` can never both succeed.
#[derive(Clone, Debug)]
pub struct PremiseSet {
    facts: Vec<Formula>,
    rules: Vec<Formula>,
    domain: BTreeSet<String>,
}

impl PremiseSet {
    pub fn new(
        facts: Vec<Formula>,
        rules: Vec<Formula>,
        domain: BTreeSet<String>,
    ) -> Result<Self, EngineError> {
        for f in facts.iter().chain(rules.iter()) {
            if !f.is_closed() {
                return Err(EngineError::OpenFormula(f.to_string()));
            }
            for c in f.constants() {
                if !domain.contains(c) {
                    return Err(EngineError::ConstantOutsideDomain { constant: c.to_string() });
                }
            }
        }
        let set = PremiseSet { facts, rules, domain };
        if is_satisfiable(&set.grounded()?)?.is_none() {
            return Err(EngineError::UnsatisfiablePremises);
        }
        Ok(set)
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn rules(&self) -> &[Formula] {
        &self.rules
    }

    pub fn domain(&self) -> &BTreeSet<String> {
        &self.domain
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.facts.iter().chain(self.rules.iter())
    }

    fn grounded(&self) -> Result<Vec<Formula>, EngineError> {
        self.formulas().map(|f| Ok(f.ground(&self.domain)?)).collect()
    }
}

/// Label plus, for non-`True` verdicts, one model of the premises in which
/// the goal is false. Uncertain diagnoses become inspectable through it.
#[derive(Clone, Debug)]
pub struct EntailmentVerdict {
    pub label: TruthLabel,
    pub witness: Option<Valuation>,
}

/// One derivation step: the facts and single rule it consumes, and the
/// literal it concludes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub step_facts: Vec<Formula>,
    pub step_rule: Formula,
    pub conclusion: Formula,
}

/// Decides satisfiability of quantifier-free formulas. Returns a satisfying
/// valuation of every mentioned atom, or `None` when unsatisfiable.
pub fn is_satisfiable(ground_formulas: &[Formula]) -> Result<Option<Valuation>, EngineError> {
    is_satisfiable_with_budget(ground_formulas, DEFAULT_ATOM_BUDGET)
}

pub fn is_satisfiable_with_budget(
    ground_formulas: &[Formula],
    budget: usize,
) -> Result<Option<Valuation>, EngineError> {
    let mut table = AtomTable::default();
    let mut clauses = Vec::new();
    for f in ground_formulas {
        if !f.is_quantifier_free() {
            return Err(EngineError::OpenFormula(f.to_string()));
        }
        clauses.extend(clausify(f, &mut table));
    }
    if table.len() > budget {
        return Err(EngineError::AtomBudgetExceeded { count: table.len(), budget });
    }
    Ok(dpll::solve(&clauses, table.len()).map(|model| {
        Valuation(
            table
                .atoms()
                .iter()
                .cloned()
                .zip(model)
                .collect(),
        )
    }))
}

/// Classifies a closed goal against satisfiable premises:
/// `True` iff premises ∧ ¬goal is unsatisfiable, `False` iff premises ∧ goal
/// is unsatisfiable, `Uncertain` otherwise.
pub fn decide_label(premises: &PremiseSet, goal: &Formula) -> Result<EntailmentVerdict, EngineError> {
    if !goal.is_closed() {
        return Err(EngineError::OpenFormula(goal.to_string()));
    }
    let mut grounded = premises.grounded()?;
    let goal_ground = goal.ground(premises.domain())?;

    grounded.push(goal_ground.negated());
    let counter_model = is_satisfiable(&grounded)?;
    grounded.pop();

    let Some(counter_model) = counter_model else {
        return Ok(EntailmentVerdict { label: TruthLabel::True, witness: None });
    };

    grounded.push(goal_ground);
    let model = is_satisfiable(&grounded)?;

    let label = if model.is_none() { TruthLabel::False } else { TruthLabel::Uncertain };
    Ok(EntailmentVerdict { label, witness: Some(counter_model) })
}

/// Checks that a step's facts plus its rule entail its conclusion.
pub fn validate_step(step: &ProofStep, domain: &BTreeSet<String>) -> bool {
    let premises = match PremiseSet::new(
        step.step_facts.clone(),
        vec![step.step_rule.clone()],
        domain.clone(),
    ) {
        Ok(p) => p,
        Err(_) => return false,
    };
    matches!(
        decide_label(&premises, &step.conclusion),
        Ok(EntailmentVerdict { label: TruthLabel::True, .. })
    )
}

/// Validates a whole derivation chain against its premises and declared
/// label:
///
/// 1. every step entails its conclusion;
/// 2. every step fact is a premise fact or an earlier conclusion;
/// 3. every step rule is a premise rule;
/// 4. the final conclusion is the goal (label `True`) or its negation
///    (label `False`);
/// 5. the engine's own label for the goal equals the declared label.
///
/// An `Uncertain` label requires an empty chain: nothing is derivable about
/// the goal, so there is nothing to conclude.
pub fn validate_chain(
    steps: &[ProofStep],
    premises: &PremiseSet,
    goal: &Formula,
    label: TruthLabel,
) -> bool {
    match decide_label(premises, goal) {
        Ok(verdict) if verdict.label == label => {}
        _ => return false,
    }

    if label == TruthLabel::Uncertain {
        return steps.is_empty();
    }
    if steps.is_empty() {
        return false;
    }

    let mut derived: Vec<&Formula> = Vec::new();
    for step in steps {
        for fact in &step.step_facts {
            let known = premises.facts().contains(fact) || derived.iter().any(|d| *d == fact);
            if !known {
                return false;
            }
        }
        if !premises.rules().contains(&step.step_rule) {
            return false;
        }
        if !validate_step(step, premises.domain()) {
            return false;
        }
        derived.push(&step.conclusion);
    }

    let last = &steps.last().unwrap().conclusion;
    match label {
        TruthLabel::True => last == goal,
        TruthLabel::False => *last == goal.negated(),
        TruthLabel::Uncertain => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    fn p(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn domain(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn premises(facts: &[&str], rules: &[&str], names: &[&str]) -> PremiseSet {
        PremiseSet::new(
            facts.iter().map(|t| p(t)).collect(),
            rules.iter().map(|t| p(t)).collect(),
            domain(names),
        )
        .unwrap()
    }

    #[test]
    fn direct_contradiction_is_unsat() {
        assert!(is_satisfiable(&[p("p(A)"), p("-p(A)")]).unwrap().is_none());
    }

    #[test]
    fn xor_with_one_side_pins_the_other() {
        // Enumerating the four valuations of {p(A), q(A)} leaves exactly
        // p(A)=true, q(A)=false.
        let model = is_satisfiable(&[p("p(A) ^ q(A)"), p("p(A)")]).unwrap().unwrap();
        let q = p("q(A)").as_literal().unwrap().1;
        assert_eq!(model.truth_of(&q), Some(false));
    }

    #[test]
    fn empty_set_is_satisfiable() {
        assert!(is_satisfiable(&[]).unwrap().is_some());
    }

    #[test]
    fn atom_budget_is_enforced() {
        let formulas: Vec<Formula> = (0..65).map(|i| p(&format!("p{i}(A)"))).collect();
        match is_satisfiable(&formulas) {
            Err(EngineError::AtomBudgetExceeded { count: 65, budget: 64 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn xor_rule_refutes_the_other_side() {
        let set = premises(&["poet(Sawyer)"], &["musician(Sawyer) ^ poet(Sawyer)"], &["Sawyer"]);
        let verdict = decide_label(&set, &p("musician(Sawyer)")).unwrap();
        assert_eq!(verdict.label, TruthLabel::False);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn xor_antecedent_fires_on_mixed_facts() {
        let set = premises(
            &["-respond(Buster)", "follows(Buster)"],
            &["(respond(Buster) ^ follows(Buster)) -> listens(Buster)"],
            &["Buster"],
        );
        let verdict = decide_label(&set, &p("listens(Buster)")).unwrap();
        assert_eq!(verdict.label, TruthLabel::True);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn nothing_is_entailed_from_nothing() {
        let set = premises(&[], &[], &["A"]);
        let verdict = decide_label(&set, &p("p(A)")).unwrap();
        assert_eq!(verdict.label, TruthLabel::Uncertain);
        // An Uncertain verdict has witnesses both ways; the reported one
        // falsifies the goal.
        let atom = p("p(A)").as_literal().unwrap().1;
        assert_eq!(verdict.witness.unwrap().truth_of(&atom), Some(false));
    }

    #[test]
    fn universal_rules_ground_over_the_domain() {
        let set = premises(
            &["poet(Sawyer)", "poet(Alice)"],
            &["all x (poet(x) -> writer(x))"],
            &["Sawyer", "Alice"],
        );
        assert_eq!(decide_label(&set, &p("writer(Alice)")).unwrap().label, TruthLabel::True);
    }

    #[test]
    fn unsatisfiable_premises_are_rejected_at_construction() {
        let err = PremiseSet::new(
            vec![p("p(A)"), p("-p(A)")],
            vec![],
            domain(&["A"]),
        )
        .unwrap_err();
        assert!(matches!(err, EngineError::UnsatisfiablePremises));
    }

    #[test]
    fn constants_must_live_in_the_domain() {
        let err = PremiseSet::new(vec![p("p(A)")], vec![], domain(&["B"])).unwrap_err();
        assert!(matches!(err, EngineError::ConstantOutsideDomain { .. }));
    }

    #[test]
    fn validates_conjunction_elimination_step() {
        let step = ProofStep {
            step_facts: vec![p("good_dance_skills(Sawyer)"), p("has_charisma(Sawyer)")],
            step_rule: p("(good_dance_skills(Sawyer) & has_charisma(Sawyer)) -> successful_dancer(Sawyer)"),
            conclusion: p("successful_dancer(Sawyer)"),
        };
        assert!(validate_step(&step, &domain(&["Sawyer"])));
    }

    #[test]
    fn rejects_step_whose_rule_never_fires() {
        let step = ProofStep {
            step_facts: vec![p("p(A)")],
            step_rule: p("q(A) -> r(A)"),
            conclusion: p("r(A)"),
        };
        assert!(!validate_step(&step, &domain(&["A"])));
    }

    #[test]
    fn validates_modus_tollens_step() {
        let step = ProofStep {
            step_facts: vec![p("-q(A)")],
            step_rule: p("p(A) -> q(A)"),
            conclusion: p("-p(A)"),
        };
        assert!(validate_step(&step, &domain(&["A"])));
    }

    #[test]
    fn chain_rejects_dangling_fact_reference() {
        let set = premises(
            &["a(X)"],
            &["a(X) -> b(X)", "c(X) -> d(X)"],
            &["X"],
        );
        let steps = vec![
            ProofStep {
                step_facts: vec![p("a(X)")],
                step_rule: p("a(X) -> b(X)"),
                conclusion: p("b(X)"),
            },
            ProofStep {
                // c(X) was never derived nor asserted.
                step_facts: vec![p("c(X)")],
                step_rule: p("c(X) -> d(X)"),
                conclusion: p("d(X)"),
            },
        ];
        assert!(!validate_chain(&steps, &set, &p("d(X)"), TruthLabel::True));
    }

    #[test]
    fn chain_accepts_two_step_derivation() {
        let set = premises(&["a(X)"], &["a(X) -> b(X)", "b(X) -> c(X)"], &["X"]);
        let steps = vec![
            ProofStep {
                step_facts: vec![p("a(X)")],
                step_rule: p("a(X) -> b(X)"),
                conclusion: p("b(X)"),
            },
            ProofStep {
                step_facts: vec![p("b(X)")],
                step_rule: p("b(X) -> c(X)"),
                conclusion: p("c(X)"),
            },
        ];
        assert!(validate_chain(&steps, &set, &p("c(X)"), TruthLabel::True));
    }

    #[test]
    fn uncertain_chain_must_be_empty() {
        let set = premises(&["a(X)"], &[], &["X"]);
        assert!(validate_chain(&[], &set, &p("z(X)"), TruthLabel::Uncertain));
        assert!(!validate_chain(&[], &set, &p("a(X)"), TruthLabel::True));
    }
}
