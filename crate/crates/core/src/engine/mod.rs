//! Three-valued entailment over the grounded fragment.
//!
//! Plays the symbolic-prover role in the generation loop: a goal is `True`
//! when the premises entail it, `False` when they entail its negation, and
//! `Uncertain` otherwise. Decisions reduce to propositional satisfiability
//! via grounding plus a DPLL procedure (unit propagation, pure-literal
//! elimination, branching on the first unassigned atom). A Prover9-syntax
//! exporter is provided for external cross-checking.

mod cnf;
mod dpll;
mod entail;
mod prover9;

pub use entail::{
    decide_label, is_satisfiable, validate_chain, validate_step, EngineError, EntailmentVerdict,
    PremiseSet, ProofStep, Valuation, DEFAULT_ATOM_BUDGET,
};
pub use prover9::export_prover9;
