//! Structural utilities: substitution, grounding, negation normal form,
//! evaluation, and collectors.

use super::ast::{GroundAtom, PredicateSymbol, Term};
use super::Formula;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FolError {
    #[error("cannot ground over an empty domain")]
    EmptyDomain,
    #[error("formula is not ground: contains {0}")]
    NotGround(String),
}

impl Formula {
    pub fn free_variables(&self) -> BTreeSet<&str> {
        fn walk<'a>(f: &'a Formula, bound: Option<&str>, out: &mut BTreeSet<&'a str>) {
            match f {
                Formula::Atom(_, Term::Variable(v)) => {
                    if bound != Some(v.as_str()) {
                        out.insert(v);
                    }
                }
                Formula::Atom(_, Term::Constant(_)) => {}
                Formula::Not(inner) => walk(inner, bound, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Xor(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                    walk(body, Some(v), out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, None, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_, _) => true,
            Formula::Not(inner) => inner.is_quantifier_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Xor(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::ForAll(_, _) | Formula::Exists(_, _) => false,
        }
    }

    pub fn is_quantified(&self) -> bool {
        matches!(self, Formula::ForAll(_, _) | Formula::Exists(_, _))
    }

    /// Constant names mentioned anywhere in the formula.
    pub fn constants(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |_, term| {
            if let Term::Constant(name) = term {
                out.insert(name.as_str());
            }
        });
        out
    }

    /// Predicate symbols mentioned anywhere in the formula.
    pub fn predicates(&self) -> BTreeSet<&PredicateSymbol> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |p, _| {
            out.insert(p);
        });
        out
    }

    fn visit_atoms<'a>(&'a self, visit: &mut impl FnMut(&'a PredicateSymbol, &'a Term)) {
        match self {
            Formula::Atom(p, t) => visit(p, t),
            Formula::Not(inner) => inner.visit_atoms(visit),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Xor(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
            Formula::ForAll(_, body) | Formula::Exists(_, body) => body.visit_atoms(visit),
        }
    }

    /// Ground atoms of a quantifier-free, closed formula.
    pub fn ground_atoms(&self) -> Result<BTreeSet<GroundAtom>, FolError> {
        let mut out = BTreeSet::new();
        let mut bad: Option<String> = None;
        self.visit_atoms(&mut |p, t| match t {
            Term::Constant(c) => {
                out.insert(GroundAtom { predicate: p.clone(), constant: c.clone() });
            }
            Term::Variable(v) => bad = Some(format!("variable {v:?}")),
        });
        match bad {
            Some(what) => Err(FolError::NotGround(what)),
            None => Ok(out),
        }
    }

    /// When the formula is a positive or negated ground atom, its polarity
    /// and atom.
    pub fn as_literal(&self) -> Option<(bool, GroundAtom)> {
        match self {
            Formula::Atom(p, Term::Constant(c)) => {
                Some((true, GroundAtom { predicate: p.clone(), constant: c.clone() }))
            }
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(p, Term::Constant(c)) => {
                    Some((false, GroundAtom { predicate: p.clone(), constant: c.clone() }))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Logical negation, simplifying a double negation instead of stacking.
    pub fn negated(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Capture-free replacement of `var` by the constant `value`.
    pub fn substitute(&self, var: &str, value: &str) -> Formula {
        match self {
            Formula::Atom(p, Term::Variable(v)) if v == var => {
                Formula::Atom(p.clone(), Term::Constant(value.to_string()))
            }
            Formula::Atom(_, _) => self.clone(),
            Formula::Not(inner) => Formula::not(inner.substitute(var, value)),
            Formula::And(a, b) => Formula::and(a.substitute(var, value), b.substitute(var, value)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, value), b.substitute(var, value)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(var, value), b.substitute(var, value))
            }
            Formula::Xor(a, b) => Formula::xor(a.substitute(var, value), b.substitute(var, value)),
            // A quantifier shadowing `var` keeps its body untouched.
            Formula::ForAll(v, _) | Formula::Exists(v, _) if v == var => self.clone(),
            Formula::ForAll(v, body) => {
                Formula::forall(v.clone(), body.substitute(var, value))
            }
            Formula::Exists(v, body) => {
                Formula::exists(v.clone(), body.substitute(var, value))
            }
        }
    }

    /// Expands quantifiers over a finite domain: `∀` becomes the conjunction
    /// of the instantiated bodies, `∃` the disjunction. Quantifier-free
    /// formulas are returned unchanged. Domain order is the sorted order of
    /// the constant names, so grounding is deterministic.
    pub fn ground(&self, domain: &BTreeSet<String>) -> Result<Formula, FolError> {
        match self {
            Formula::ForAll(var, body) | Formula::Exists(var, body) => {
                if domain.is_empty() {
                    return Err(FolError::EmptyDomain);
                }
                let universal = matches!(self, Formula::ForAll(_, _));
                let mut instances = domain
                    .iter()
                    .map(|c| body.substitute(var, c).ground(domain))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter();
                let first = instances.next().unwrap();
                Ok(instances.fold(first, |acc, inst| {
                    if universal {
                        Formula::and(acc, inst)
                    } else {
                        Formula::or(acc, inst)
                    }
                }))
            }
            Formula::Atom(_, _) => Ok(self.clone()),
            Formula::Not(inner) => Ok(Formula::not(inner.ground(domain)?)),
            Formula::And(a, b) => Ok(Formula::and(a.ground(domain)?, b.ground(domain)?)),
            Formula::Or(a, b) => Ok(Formula::or(a.ground(domain)?, b.ground(domain)?)),
            Formula::Implies(a, b) => Ok(Formula::implies(a.ground(domain)?, b.ground(domain)?)),
            Formula::Xor(a, b) => Ok(Formula::xor(a.ground(domain)?, b.ground(domain)?)),
        }
    }

    /// Negation normal form: negations pushed down to atoms, `→` and `⊕`
    /// expanded, quantifiers flipped under negation.
    pub fn to_nnf(&self) -> Formula {
        fn nnf(f: &Formula, negate: bool) -> Formula {
            match (f, negate) {
                (Formula::Atom(_, _), false) => f.clone(),
                (Formula::Atom(_, _), true) => Formula::not(f.clone()),
                (Formula::Not(inner), _) => nnf(inner, !negate),
                (Formula::And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
                (Formula::And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
                (Formula::Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
                (Formula::Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
                (Formula::Implies(a, b), false) => Formula::or(nnf(a, true), nnf(b, false)),
                (Formula::Implies(a, b), true) => Formula::and(nnf(a, false), nnf(b, true)),
                // a ⊕ b  ==  (a ∨ b) ∧ (¬a ∨ ¬b); negated it is the biconditional.
                (Formula::Xor(a, b), false) => Formula::and(
                    Formula::or(nnf(a, false), nnf(b, false)),
                    Formula::or(nnf(a, true), nnf(b, true)),
                ),
                (Formula::Xor(a, b), true) => Formula::and(
                    Formula::or(nnf(a, true), nnf(b, false)),
                    Formula::or(nnf(a, false), nnf(b, true)),
                ),
                (Formula::ForAll(v, body), false) => Formula::forall(v.clone(), nnf(body, false)),
                (Formula::ForAll(v, body), true) => Formula::exists(v.clone(), nnf(body, true)),
                (Formula::Exists(v, body), false) => Formula::exists(v.clone(), nnf(body, false)),
                (Formula::Exists(v, body), true) => Formula::forall(v.clone(), nnf(body, true)),
            }
        }
        nnf(self, false)
    }

    /// Classical evaluation of a ground, quantifier-free formula.
    pub fn evaluate<F: Fn(&GroundAtom) -> bool>(&self, val: &F) -> Result<bool, FolError> {
        match self {
            Formula::Atom(p, Term::Constant(c)) => Ok(val(&GroundAtom {
                predicate: p.clone(),
                constant: c.clone(),
            })),
            Formula::Atom(_, Term::Variable(v)) => Err(FolError::NotGround(format!("variable {v:?}"))),
            Formula::Not(inner) => Ok(!inner.evaluate(val)?),
            Formula::And(a, b) => Ok(a.evaluate(val)? && b.evaluate(val)?),
            Formula::Or(a, b) => Ok(a.evaluate(val)? || b.evaluate(val)?),
            Formula::Implies(a, b) => Ok(!a.evaluate(val)? || b.evaluate(val)?),
            Formula::Xor(a, b) => Ok(a.evaluate(val)? != b.evaluate(val)?),
            Formula::ForAll(v, _) | Formula::Exists(v, _) => {
                Err(FolError::NotGround(format!("quantifier over {v:?}")))
            }
        }
    }

    /// Evaluation of a closed formula over a finite domain, interpreting the
    /// quantifiers directly (without materializing the grounding).
    pub fn evaluate_in_domain<F: Fn(&GroundAtom) -> bool>(
        &self,
        domain: &BTreeSet<String>,
        val: &F,
    ) -> Result<bool, FolError> {
        match self {
            Formula::ForAll(var, body) => {
                if domain.is_empty() {
                    return Err(FolError::EmptyDomain);
                }
                for c in domain {
                    if !body.substitute(var, c).evaluate_in_domain(domain, val)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Exists(var, body) => {
                if domain.is_empty() {
                    return Err(FolError::EmptyDomain);
                }
                for c in domain {
                    if body.substitute(var, c).evaluate_in_domain(domain, val)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Not(inner) => Ok(!inner.evaluate_in_domain(domain, val)?),
            Formula::And(a, b) => {
                Ok(a.evaluate_in_domain(domain, val)? && b.evaluate_in_domain(domain, val)?)
            }
            Formula::Or(a, b) => {
                Ok(a.evaluate_in_domain(domain, val)? || b.evaluate_in_domain(domain, val)?)
            }
            Formula::Implies(a, b) => {
                Ok(!a.evaluate_in_domain(domain, val)? || b.evaluate_in_domain(domain, val)?)
            }
            Formula::Xor(a, b) => {
                Ok(a.evaluate_in_domain(domain, val)? != b.evaluate_in_domain(domain, val)?)
            }
            Formula::Atom(_, _) => self.evaluate(val),
        }
    }

    /// Consistent renaming of predicate symbols; symbols not in the map are
    /// kept. Instantiating placeholders is the main use.
    pub fn rename_predicates(&self, map: &HashMap<PredicateSymbol, PredicateSymbol>) -> Formula {
        match self {
            Formula::Atom(p, t) => {
                let p = map.get(p).cloned().unwrap_or_else(|| p.clone());
                Formula::Atom(p, t.clone())
            }
            Formula::Not(inner) => Formula::not(inner.rename_predicates(map)),
            Formula::And(a, b) => {
                Formula::and(a.rename_predicates(map), b.rename_predicates(map))
            }
            Formula::Or(a, b) => Formula::or(a.rename_predicates(map), b.rename_predicates(map)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_predicates(map), b.rename_predicates(map))
            }
            Formula::Xor(a, b) => {
                Formula::xor(a.rename_predicates(map), b.rename_predicates(map))
            }
            Formula::ForAll(v, body) => Formula::forall(v.clone(), body.rename_predicates(map)),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.rename_predicates(map)),
        }
    }

    /// Rewrites a quantifier-free formula over a single subject into its
    /// universally quantified form: every atom over `subject` becomes an atom
    /// over the bound variable `x`.
    pub fn universalized(&self, subject: &str) -> Formula {
        fn rewrite(f: &Formula, subject: &str) -> Formula {
            match f {
                Formula::Atom(p, Term::Constant(c)) if c == subject => {
                    Formula::Atom(p.clone(), Term::Variable("x".into()))
                }
                Formula::Atom(_, _) => f.clone(),
                Formula::Not(inner) => Formula::not(rewrite(inner, subject)),
                Formula::And(a, b) => Formula::and(rewrite(a, subject), rewrite(b, subject)),
                Formula::Or(a, b) => Formula::or(rewrite(a, subject), rewrite(b, subject)),
                Formula::Implies(a, b) => {
                    Formula::implies(rewrite(a, subject), rewrite(b, subject))
                }
                Formula::Xor(a, b) => Formula::xor(rewrite(a, subject), rewrite(b, subject)),
                Formula::ForAll(_, _) | Formula::Exists(_, _) => f.clone(),
            }
        }
        Formula::forall("x", rewrite(self, subject))
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    fn p(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn domain(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grounds_forall_to_conjunction() {
        let f = p("all x (p(x))");
        assert_eq!(f.ground(&domain(&["A", "B"])).unwrap(), p("p(A) & p(B)"));
    }

    #[test]
    fn grounds_exists_over_singleton() {
        let f = p("exists x (p(x))");
        assert_eq!(f.ground(&domain(&["A"])).unwrap(), p("p(A)"));
    }

    #[test]
    fn grounding_is_identity_on_quantifier_free() {
        let f = p("(a(S) & b(S)) -> c(S)");
        assert_eq!(f.ground(&domain(&["S", "T"])).unwrap(), f);
    }

    #[test]
    fn empty_domain_is_rejected() {
        let f = p("all x (p(x))");
        assert_eq!(f.ground(&BTreeSet::new()), Err(FolError::EmptyDomain));
    }

    #[test]
    fn substitution_replaces_only_the_variable() {
        let f = p("all x (p(x) ^ q(x))");
        if let Formula::ForAll(var, body) = &f {
            let g = body.substitute(var, "Buster");
            assert_eq!(g, p("p(Buster) ^ q(Buster)"));
        } else {
            panic!("expected ForAll");
        }
        let constant_only = p("p(Sawyer)");
        assert_eq!(constant_only.substitute("x", "Buster"), constant_only);
    }

    #[test]
    fn negated_simplifies_double_negation() {
        let f = p("-p(A)");
        assert_eq!(f.negated(), p("p(A)"));
        assert_eq!(p("p(A)").negated(), p("-p(A)"));
    }

    #[test]
    fn literal_recognition() {
        assert_eq!(p("p(A)").as_literal().map(|(s, _)| s), Some(true));
        assert_eq!(p("-p(A)").as_literal().map(|(s, _)| s), Some(false));
        assert!(p("p(A) & q(A)").as_literal().is_none());
        assert!(p("--p(A)").as_literal().is_none());
    }

    #[test]
    fn universalization_binds_the_subject() {
        let f = p("(good_dance_skills(Sawyer) & has_charisma(Sawyer)) -> successful_dancer(Sawyer)");
        assert_eq!(
            f.universalized("Sawyer"),
            p("all x ((good_dance_skills(x) & has_charisma(x)) -> successful_dancer(x))")
        );
    }

    #[test]
    fn nnf_is_negation_free_and_equivalent() {
        let f = p("-((a(X) ^ b(X)) -> -(c(X) | d(X)))");
        let g = f.to_nnf();
        fn only_atomic_negation(f: &Formula) -> bool {
            match f {
                Formula::Not(inner) => matches!(**inner, Formula::Atom(_, _)),
                Formula::Atom(_, _) => true,
                Formula::And(a, b) | Formula::Or(a, b) => {
                    only_atomic_negation(a) && only_atomic_negation(b)
                }
                Formula::Implies(_, _) | Formula::Xor(_, _) => false,
                Formula::ForAll(_, body) | Formula::Exists(_, body) => only_atomic_negation(body),
            }
        }
        assert!(only_atomic_negation(&g));
        let atoms: Vec<GroundAtom> = f.ground_atoms().unwrap().into_iter().collect();
        for mask in 0u32..(1 << atoms.len()) {
            let val = |a: &GroundAtom| {
                let i = atoms.iter().position(|x| x == a).unwrap();
                mask & (1 << i) != 0
            };
            assert_eq!(f.evaluate(&val).unwrap(), g.evaluate(&val).unwrap());
        }
    }
}
