//! The rule-template catalog and its machine-verified assignment tables.
//!
//! A template is a rule shape with a parent slot `P` (the fact being derived)
//! and child slots `C1`, `C2`. Each assignment row lists child labels that,
//! once the children are asserted as literals alongside the instantiated
//! rule, entail the parent literal with the row's parent label. The whole
//! catalog is checked against the entailment engine the first time it is
//! used, so a defective row cannot silently corrupt generated data.
//!
//! Forward templates derive the parent from rule firing (the parent sits in
//! the consequent); backward templates require reasoning against the arrow's
//! direction (modus tollens, exclusive-disjunction elimination, disjunctive
//! syllogism).

use crate::engine::{decide_label, PremiseSet};
use crate::fol::{parse_formula, Formula, PredicateSymbol, TruthLabel};
use std::collections::HashMap;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemplateFamily {
    Forward,
    Backward,
}

/// One verified row: asserting the children with these labels next to the
/// rule entails the parent literal with `parent`.
#[derive(Clone, Debug)]
pub struct AssignmentRow {
    pub parent: TruthLabel,
    pub children: Vec<TruthLabel>,
}

#[derive(Clone, Debug)]
pub struct RuleTemplate {
    pub id: &'static str,
    pub family: TemplateFamily,
    /// Shape over slot predicates `P`, `C1`, `C2` applied to the subject `x`.
    pub shape: Formula,
    /// Number of child slots.
    pub arity: usize,
    /// Child indices that are only mentioned by the rule (their value is
    /// entailed, not asserted); they never become premise facts and are
    /// never expanded.
    pub mentions: Vec<usize>,
    pub rows: Vec<AssignmentRow>,
}

impl RuleTemplate {
    /// Instantiates the shape for a concrete subject and predicate symbols.
    pub fn instantiate(
        &self,
        subject: &str,
        parent: &PredicateSymbol,
        children: &[PredicateSymbol],
    ) -> Formula {
        assert_eq!(children.len(), self.arity, "template {} arity mismatch", self.id);
        let mut map = HashMap::new();
        map.insert(slot("P"), parent.clone());
        for (i, child) in children.iter().enumerate() {
            map.insert(slot(&format!("C{}", i + 1)), child.clone());
        }
        self.shape.rename_predicates(&map).substitute("x", subject)
    }

    /// Rows whose parent label matches.
    pub fn rows_for(&self, parent: TruthLabel) -> impl Iterator<Item = &AssignmentRow> {
        self.rows.iter().filter(move |r| r.parent == parent)
    }

    pub fn is_asserted_child(&self, index: usize) -> bool {
        !self.mentions.contains(&index)
    }
}

fn slot(name: &str) -> PredicateSymbol {
    PredicateSymbol::new(name).unwrap()
}

fn template(
    id: &'static str,
    family: TemplateFamily,
    shape: &str,
    mentions: &[usize],
    rows: &[(TruthLabel, &[TruthLabel])],
) -> RuleTemplate {
    // Parsing under a quantifier makes `x` a variable the instantiation can
    // substitute the subject into.
    let quantified = parse_formula(&format!("all x ({shape})"))
        .unwrap_or_else(|e| panic!("bad template shape {id}: {e}"));
    let shape = match quantified {
        Formula::ForAll(_, body) => *body,
        _ => unreachable!(),
    };
    let arity = shape
        .predicates()
        .iter()
        .filter(|p| p.name().starts_with('C'))
        .count();
    RuleTemplate {
        id,
        family,
        shape,
        arity,
        mentions: mentions.to_vec(),
        rows: rows
            .iter()
            .map(|(parent, children)| AssignmentRow {
                parent: *parent,
                children: children.to_vec(),
            })
            .collect(),
    }
}

use TruthLabel::{False as F, True as T};

fn build_catalog() -> Vec<RuleTemplate> {
    vec![
        // ---- forward: parent in the consequent ----
        template(
            "fwd_and_to_p",
            TemplateFamily::Forward,
            "(C1(x) & C2(x)) -> P(x)",
            &[],
            &[(T, &[T, T])],
        ),
        template(
            "fwd_or_to_p",
            TemplateFamily::Forward,
            "(C1(x) | C2(x)) -> P(x)",
            &[],
            &[(T, &[T, T]), (T, &[T, F]), (T, &[F, T])],
        ),
        template(
            "fwd_xor_to_p",
            TemplateFamily::Forward,
            "(C1(x) ^ C2(x)) -> P(x)",
            &[],
            &[(T, &[T, F]), (T, &[F, T])],
        ),
        template(
            "fwd_chain",
            TemplateFamily::Forward,
            "C1(x) -> P(x)",
            &[],
            &[(T, &[T])],
        ),
        template(
            "fwd_neg_to_p",
            TemplateFamily::Forward,
            "-C1(x) -> P(x)",
            &[],
            &[(T, &[F])],
        ),
        template(
            "fwd_to_and",
            TemplateFamily::Forward,
            "C1(x) -> (P(x) & C2(x))",
            &[1],
            &[(T, &[T, T])],
        ),
        template(
            "fwd_to_or",
            TemplateFamily::Forward,
            "C1(x) -> (P(x) | C2(x))",
            &[],
            &[(T, &[T, F])],
        ),
        template(
            "fwd_to_xor",
            TemplateFamily::Forward,
            "C1(x) -> (P(x) ^ C2(x))",
            &[],
            &[(T, &[T, F]), (F, &[T, T])],
        ),
        // ---- backward: the parent must be inferred against the rule ----
        template(
            "bwd_modus_tollens",
            TemplateFamily::Backward,
            "P(x) -> C1(x)",
            &[],
            &[(F, &[F])],
        ),
        template(
            "bwd_xor",
            TemplateFamily::Backward,
            "P(x) ^ C1(x)",
            &[],
            &[(T, &[F]), (F, &[T])],
        ),
        template(
            "bwd_or",
            TemplateFamily::Backward,
            "P(x) | C1(x)",
            &[],
            &[(T, &[F])],
        ),
    ]
}

/// The verified template catalog. Verification runs once; a defective row
/// panics with a diagnostic rather than producing corrupt data.
pub fn catalog() -> &'static [RuleTemplate] {
    static CATALOG: OnceLock<Vec<RuleTemplate>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let templates = build_catalog();
        verify_catalog(&templates).expect("rule-template catalog failed verification");
        templates
    })
}

/// Confirms with the entailment engine, for every assignment row, that
/// the asserted children plus the instantiated rule (a) are satisfiable and
/// (b) entail the parent literal with the row's parent label, and that
/// mention-only children are likewise entailed at their listed label.
pub fn verify_catalog(templates: &[RuleTemplate]) -> Result<(), String> {
    let subject = "X";
    let domain: std::collections::BTreeSet<String> = [subject.to_string()].into();
    let parent_pred = slot("p0");
    for t in templates {
        let child_preds: Vec<PredicateSymbol> =
            (1..=t.arity).map(|i| slot(&format!("c{i}"))).collect();
        let rule = t.instantiate(subject, &parent_pred, &child_preds);
        for (ri, row) in t.rows.iter().enumerate() {
            if row.children.len() != t.arity {
                return Err(format!("{}: row {ri} arity mismatch", t.id));
            }
            let facts: Vec<Formula> = row
                .children
                .iter()
                .enumerate()
                .filter(|(i, _)| t.is_asserted_child(*i))
                .map(|(i, label)| {
                    Formula::literal(
                        child_preds[i].clone(),
                        subject,
                        label.as_bool().expect("determinate child label"),
                    )
                })
                .collect();
            let premises = PremiseSet::new(facts, vec![rule.clone()], domain.clone())
                .map_err(|e| format!("{}: row {ri} unsatisfiable: {e}", t.id))?;

            let parent_atom = Formula::literal(parent_pred.clone(), subject, true);
            let verdict = decide_label(&premises, &parent_atom)
                .map_err(|e| format!("{}: row {ri}: {e}", t.id))?;
            if verdict.label != row.parent {
                return Err(format!(
                    "{}: row {ri} derives parent {} but expected {}",
                    t.id, verdict.label, row.parent
                ));
            }
            for &mi in &t.mentions {
                let mention_atom = Formula::literal(child_preds[mi].clone(), subject, true);
                let verdict = decide_label(&premises, &mention_atom)
                    .map_err(|e| format!("{}: row {ri} mention: {e}", t.id))?;
                if verdict.label != row.children[mi] {
                    return Err(format!(
                        "{}: row {ri} mention {mi} has label {} but expected {}",
                        t.id, verdict.label, row.children[mi]
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_passes_engine_verification() {
        verify_catalog(&build_catalog()).unwrap();
        assert!(!catalog().is_empty());
    }

    #[test]
    fn catalog_covers_both_families_and_all_connectives() {
        let templates = catalog();
        assert!(templates.iter().any(|t| t.family == TemplateFamily::Forward));
        assert!(templates.iter().any(|t| t.family == TemplateFamily::Backward));
        // Forward shapes exercise ∧, ∨, ¬, ⊕ and → in both positions.
        for needle in ["&", "|", "^", "-"] {
            assert!(
                templates
                    .iter()
                    .filter(|t| t.family == TemplateFamily::Forward)
                    .any(|t| t.shape.to_string().contains(needle)),
                "no forward template uses {needle}"
            );
        }
        // Backward covers implication and exclusive disjunction.
        let backward: Vec<_> = templates
            .iter()
            .filter(|t| t.family == TemplateFamily::Backward)
            .map(|t| t.shape.to_string())
            .collect();
        assert!(backward.iter().any(|s| s.contains("->")));
        assert!(backward.iter().any(|s| s.contains('^')));
    }

    #[test]
    fn every_label_has_an_expansion_in_each_family_regime() {
        // True and False parents must both be expandable with forward-only
        // templates, otherwise easy/medium generation could dead-end.
        for label in [TruthLabel::True, TruthLabel::False] {
            assert!(
                catalog()
                    .iter()
                    .filter(|t| t.family == TemplateFamily::Forward)
                    .any(|t| t.rows_for(label).next().is_some()),
                "no forward template derives a {label} parent"
            );
        }
    }

    #[test]
    fn a_defective_row_is_caught() {
        let bad = vec![template(
            "bad",
            TemplateFamily::Forward,
            "(C1(x) & C2(x)) -> P(x)",
            &[],
            &[(T, &[T, F])],
        )];
        let err = verify_catalog(&bad).unwrap_err();
        assert!(err.contains("bad: row 0"));
    }

    #[test]
    fn instantiation_substitutes_slots_and_subject() {
        let t = catalog().iter().find(|t| t.id == "fwd_and_to_p").unwrap();
        let rule = t.instantiate(
            "Sawyer",
            &PredicateSymbol::new("successful_dancer").unwrap(),
            &[
                PredicateSymbol::new("good_dance_skills").unwrap(),
                PredicateSymbol::new("has_charisma").unwrap(),
            ],
        );
        assert_eq!(
            rule.to_string(),
            "(good_dance_skills(Sawyer) & has_charisma(Sawyer)) -> successful_dancer(Sawyer)"
        );
    }
}
