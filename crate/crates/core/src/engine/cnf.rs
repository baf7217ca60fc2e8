//! Clause-form conversion for quantifier-free formulas.
//!
//! Conversion goes through negation normal form and then distributes
//! disjunction over conjunction. The fragment's formulas are small (a handful
//! of atoms each), so the potential blowup of plain distribution never
//! materializes in practice.

use crate::fol::{Formula, GroundAtom};
use std::collections::HashMap;

/// Propositional literal over an interned atom index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lit {
    pub atom: usize,
    pub positive: bool,
}

pub type Clause = Vec<Lit>;

/// Interns ground atoms in first-encounter order.
#[derive(Default)]
pub struct AtomTable {
    index: HashMap<GroundAtom, usize>,
    atoms: Vec<GroundAtom>,
}

impl AtomTable {
    pub fn intern(&mut self, atom: &GroundAtom) -> usize {
        if let Some(&i) = self.index.get(atom) {
            return i;
        }
        let i = self.atoms.len();
        self.index.insert(atom.clone(), i);
        self.atoms.push(atom.clone());
        i
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }
}

// NNF with ⊕ and → expanded; leaves are signed atom indices.
enum Nnf {
    Lit(Lit),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
}

fn to_nnf(f: &Formula, negate: bool, table: &mut AtomTable) -> Nnf {
    match f {
        Formula::Atom(p, t) => {
            let constant = match t {
                crate::fol::Term::Constant(c) => c.clone(),
                crate::fol::Term::Variable(v) => {
                    unreachable!("quantifier-free input required, found variable {v:?}")
                }
            };
            let atom = table.intern(&GroundAtom { predicate: p.clone(), constant });
            Nnf::Lit(Lit { atom, positive: !negate })
        }
        Formula::Not(inner) => to_nnf(inner, !negate, table),
        Formula::And(a, b) if !negate => nnf_and(to_nnf(a, false, table), to_nnf(b, false, table)),
        Formula::And(a, b) => nnf_or(to_nnf(a, true, table), to_nnf(b, true, table)),
        Formula::Or(a, b) if !negate => nnf_or(to_nnf(a, false, table), to_nnf(b, false, table)),
        Formula::Or(a, b) => nnf_and(to_nnf(a, true, table), to_nnf(b, true, table)),
        Formula::Implies(a, b) if !negate => {
            nnf_or(to_nnf(a, true, table), to_nnf(b, false, table))
        }
        Formula::Implies(a, b) => nnf_and(to_nnf(a, false, table), to_nnf(b, true, table)),
        // a ⊕ b == (a ∨ b) ∧ (¬a ∨ ¬b)
        Formula::Xor(a, b) if !negate => nnf_and(
            nnf_or(to_nnf(a, false, table), to_nnf(b, false, table)),
            nnf_or(to_nnf(a, true, table), to_nnf(b, true, table)),
        ),
        // ¬(a ⊕ b) == (¬a ∨ b) ∧ (a ∨ ¬b)
        Formula::Xor(a, b) => nnf_and(
            nnf_or(to_nnf(a, true, table), to_nnf(b, false, table)),
            nnf_or(to_nnf(a, false, table), to_nnf(b, true, table)),
        ),
        Formula::ForAll(v, _) | Formula::Exists(v, _) => {
            unreachable!("quantifier-free input required, found quantifier over {v:?}")
        }
    }
}

fn nnf_and(a: Nnf, b: Nnf) -> Nnf {
    Nnf::And(Box::new(a), Box::new(b))
}

fn nnf_or(a: Nnf, b: Nnf) -> Nnf {
    Nnf::Or(Box::new(a), Box::new(b))
}

fn distribute(f: &Nnf) -> Vec<Clause> {
    match f {
        Nnf::Lit(l) => vec![vec![*l]],
        Nnf::And(a, b) => {
            let mut clauses = distribute(a);
            clauses.extend(distribute(b));
            clauses
        }
        Nnf::Or(a, b) => {
            let left = distribute(a);
            let right = distribute(b);
            let mut clauses = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut clause = l.clone();
                    clause.extend_from_slice(r);
                    clauses.push(clause);
                }
            }
            clauses
        }
    }
}

/// Converts a quantifier-free formula to clauses, interning its atoms.
/// Tautological clauses are dropped and duplicate literals merged.
pub fn clausify(f: &Formula, table: &mut AtomTable) -> Vec<Clause> {
    let nnf = to_nnf(f, false, table);
    distribute(&nnf)
        .into_iter()
        .filter_map(|mut clause| {
            clause.sort_by_key(|l| (l.atom, l.positive));
            clause.dedup();
            let tautology = clause
                .windows(2)
                .any(|w| w[0].atom == w[1].atom && w[0].positive != w[1].positive);
            (!tautology).then_some(clause)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    #[test]
    fn clausifies_implication() {
        let f = parse_formula("(a(X) & b(X)) -> c(X)").unwrap();
        let mut table = AtomTable::default();
        let clauses = clausify(&f, &mut table);
        assert_eq!(clauses, vec![vec![
            Lit { atom: 0, positive: false },
            Lit { atom: 1, positive: false },
            Lit { atom: 2, positive: true },
        ]]);
    }

    #[test]
    fn xor_yields_two_clauses() {
        let f = parse_formula("a(X) ^ b(X)").unwrap();
        let mut table = AtomTable::default();
        let clauses = clausify(&f, &mut table);
        assert_eq!(clauses.len(), 2);
    }

    #[test]
    fn drops_tautological_clauses() {
        let f = parse_formula("a(X) | -a(X)").unwrap();
        let mut table = AtomTable::default();
        assert!(clausify(&f, &mut table).is_empty());
    }
}
