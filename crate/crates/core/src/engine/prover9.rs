//! Prover9 input-file export, for cross-checking verdicts with an external
//! prover.

use super::entail::PremiseSet;
use crate::fol::{Formula, Term};

/// Renders an assumptions/goals input file in Prover9 syntax.
///
/// Operators map one-to-one except exclusive disjunction, which has no
/// Prover9 connective and is written as the negated biconditional
/// `-(a <-> b)`.
pub fn export_prover9(premises: &PremiseSet, goal: &Formula) -> String {
    let mut out = String::from("formulas(assumptions).\n");
    for f in premises.formulas() {
        out.push_str(&p9(f));
        out.push_str(".\n");
    }
    out.push_str("end_of_list.\n\nformulas(goals).\n");
    out.push_str(&p9(goal));
    out.push_str(".\nend_of_list.\n");
    out
}

fn p9(f: &Formula) -> String {
    match f {
        Formula::Atom(p, t) => match t {
            Term::Constant(c) | Term::Variable(c) => format!("{p}({c})"),
        },
        Formula::Not(inner) => format!("-{}", p9_operand(inner)),
        Formula::And(a, b) => format!("{} & {}", p9_operand(a), p9_operand(b)),
        Formula::Or(a, b) => format!("{} | {}", p9_operand(a), p9_operand(b)),
        Formula::Implies(a, b) => format!("{} -> {}", p9_operand(a), p9_operand(b)),
        Formula::Xor(a, b) => format!("-({} <-> {})", p9_operand(a), p9_operand(b)),
        Formula::ForAll(v, body) => format!("all {v} ({})", p9(body)),
        Formula::Exists(v, body) => format!("exists {v} ({})", p9(body)),
    }
}

// Composite operands are parenthesized; atoms and negations stand alone.
fn p9_operand(f: &Formula) -> String {
    match f {
        Formula::Atom(_, _) | Formula::Not(_) => p9(f),
        _ => format!("({})", p9(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;
    use std::collections::BTreeSet;

    fn premise_set(facts: &[&str], rules: &[&str], names: &[&str]) -> PremiseSet {
        PremiseSet::new(
            facts.iter().map(|t| parse_formula(t).unwrap()).collect(),
            rules.iter().map(|t| parse_formula(t).unwrap()).collect(),
            names.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn smallest_file_has_both_lists() {
        let set = premise_set(&["poet(Sawyer)"], &[], &["Sawyer"]);
        let goal = parse_formula("poet(Sawyer)").unwrap();
        let text = export_prover9(&set, &goal);
        assert_eq!(
            text,
            "formulas(assumptions).\npoet(Sawyer).\nend_of_list.\n\n\
             formulas(goals).\npoet(Sawyer).\nend_of_list.\n"
        );
    }

    #[test]
    fn xor_becomes_negated_biconditional() {
        let set = premise_set(
            &["poet(Sawyer)"],
            &["musician(Sawyer) ^ poet(Sawyer)"],
            &["Sawyer"],
        );
        let text = export_prover9(&set, &parse_formula("-musician(Sawyer)").unwrap());
        assert!(text.contains("-(musician(Sawyer) <-> poet(Sawyer))."));
    }

    #[test]
    fn universal_rule_keeps_quantifier_syntax() {
        let set = premise_set(&["p(A)"], &["all x (p(x) -> q(x))"], &["A"]);
        let text = export_prover9(&set, &parse_formula("q(A)").unwrap());
        assert!(text.contains("all x (p(x) -> q(x))."));
    }

    #[test]
    fn export_is_byte_stable() {
        let set = premise_set(&["p(A)"], &["all x (p(x) -> q(x))"], &["A"]);
        let goal = parse_formula("q(A)").unwrap();
        assert_eq!(export_prover9(&set, &goal), export_prover9(&set, &goal));
    }
}
