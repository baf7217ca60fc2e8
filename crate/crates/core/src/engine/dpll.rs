//! DPLL satisfiability over interned clauses.

use super::cnf::{Clause, Lit};

/// Searches for a satisfying assignment. Returns a complete model (atoms the
/// search never touched default to false) or `None` when unsatisfiable.
pub fn solve(clauses: &[Clause], num_atoms: usize) -> Option<Vec<bool>> {
    let mut assign: Vec<Option<bool>> = vec![None; num_atoms];
    if search(clauses, &mut assign) {
        Some(assign.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn search(clauses: &[Clause], assign: &mut Vec<Option<bool>>) -> bool {
    // Unit propagation to fixpoint.
    loop {
        let mut changed = false;
        for clause in clauses {
            match clause_state(clause, assign) {
                ClauseState::Satisfied => {}
                ClauseState::Conflict => return false,
                ClauseState::Unit(lit) => {
                    assign[lit.atom] = Some(lit.positive);
                    changed = true;
                }
                ClauseState::Open => {}
            }
        }
        if !changed {
            break;
        }
    }

    // After a propagation fixpoint every clause is satisfied or open.
    // Pure-literal elimination: an atom appearing with a single polarity in
    // the open clauses can safely take that polarity.
    let mut pos = vec![false; assign.len()];
    let mut neg = vec![false; assign.len()];
    let mut any_open = false;
    for clause in clauses {
        if let ClauseState::Open = clause_state(clause, assign) {
            any_open = true;
            for lit in clause {
                if assign[lit.atom].is_none() {
                    if lit.positive {
                        pos[lit.atom] = true;
                    } else {
                        neg[lit.atom] = true;
                    }
                }
            }
        }
    }
    if !any_open {
        return true;
    }
    let mut assigned_pure = false;
    for atom in 0..assign.len() {
        if assign[atom].is_none() && (pos[atom] ^ neg[atom]) {
            assign[atom] = Some(pos[atom]);
            assigned_pure = true;
        }
    }
    if assigned_pure {
        return search(clauses, assign);
    }

    // Branch on the first unassigned atom of the first open clause.
    let branch_atom = clauses.iter().find_map(|clause| {
        match clause_state(clause, assign) {
            ClauseState::Open => clause.iter().find(|l| assign[l.atom].is_none()).map(|l| l.atom),
            _ => None,
        }
    });
    let Some(atom) = branch_atom else {
        return true;
    };
    for value in [true, false] {
        let mut attempt = assign.clone();
        attempt[atom] = Some(value);
        if search(clauses, &mut attempt) {
            *assign = attempt;
            return true;
        }
    }
    false
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit(Lit),
    Open,
}

fn clause_state(clause: &Clause, assign: &[Option<bool>]) -> ClauseState {
    let mut unassigned: Option<Lit> = None;
    let mut unassigned_count = 0;
    for lit in clause {
        match assign[lit.atom] {
            Some(v) if v == lit.positive => return ClauseState::Satisfied,
            Some(_) => {}
            None => {
                unassigned_count += 1;
                unassigned = Some(*lit);
            }
        }
    }
    match unassigned_count {
        0 => ClauseState::Conflict,
        1 => ClauseState::Unit(unassigned.unwrap()),
        _ => ClauseState::Open,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(atom: usize, positive: bool) -> Lit {
        Lit { atom, positive }
    }

    #[test]
    fn empty_set_is_satisfiable() {
        assert!(solve(&[], 0).is_some());
    }

    #[test]
    fn direct_contradiction_is_unsat() {
        let clauses = vec![vec![lit(0, true)], vec![lit(0, false)]];
        assert!(solve(&clauses, 1).is_none());
    }

    #[test]
    fn propagates_units_through_chains() {
        // a, a->b, b->c, as clauses: {a}, {-a, b}, {-b, c}
        let clauses = vec![
            vec![lit(0, true)],
            vec![lit(0, false), lit(1, true)],
            vec![lit(1, false), lit(2, true)],
        ];
        let model = solve(&clauses, 3).unwrap();
        assert_eq!(model, vec![true, true, true]);
    }

    #[test]
    fn branches_when_propagation_stalls() {
        // (a | b) & (-a | b) & (a | -b) forces a = b = true.
        let clauses = vec![
            vec![lit(0, true), lit(1, true)],
            vec![lit(0, false), lit(1, true)],
            vec![lit(0, true), lit(1, false)],
        ];
        let model = solve(&clauses, 2).unwrap();
        assert_eq!(model, vec![true, true]);
    }

    #[test]
    fn finds_unsat_requiring_case_split() {
        // All four polarity combinations over {a, b} excluded.
        let clauses = vec![
            vec![lit(0, true), lit(1, true)],
            vec![lit(0, true), lit(1, false)],
            vec![lit(0, false), lit(1, true)],
            vec![lit(0, false), lit(1, false)],
        ];
        assert!(solve(&clauses, 2).is_none());
    }
}
