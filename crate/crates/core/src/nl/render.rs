//! Deterministic template realizer.
//!
//! Backs the offline backend and the places that need a sentence without a
//! model call (fresh goal statements, question stems). Sentences are built
//! compositionally from connective shapes; every predicate word and subject
//! name survives into the text, so the quality-control check passes by
//! construction. Predicates invented offline are self-contained verb
//! phrases, which keeps the output grammatical.

use crate::fol::{Formula, PredicateSymbol, SubjectCategory, Term};

pub(crate) fn phrase(pred: &PredicateSymbol) -> String {
    pred.words().collect::<Vec<_>>().join(" ")
}

fn capitalize(mut s: String) -> String {
    if let Some(first) = s.get(0..1) {
        let upper = first.to_ascii_uppercase();
        s.replace_range(0..1, &upper);
    }
    s
}

// Clause over named subjects; `subject_word` overrides constants when set
// (used for quantified bodies).
fn clause(f: &Formula, subject_word: Option<&str>) -> String {
    let subject = |t: &Term| match (t, subject_word) {
        (_, Some(word)) => word.to_string(),
        (Term::Constant(c), None) => c.clone(),
        (Term::Variable(v), None) => v.clone(),
    };
    match f {
        Formula::Atom(p, t) => format!("{} {}", subject(t), phrase(p)),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(p, t) => {
                format!("it is not the case that {} {}", subject(t), phrase(p))
            }
            other => format!("it is not the case that {}", clause(other, subject_word)),
        },
        Formula::And(a, b) => {
            format!("{} and {}", clause(a, subject_word), clause(b, subject_word))
        }
        Formula::Or(a, b) => format!(
            "{} or {} (or both)",
            clause(a, subject_word),
            clause(b, subject_word)
        ),
        Formula::Xor(a, b) => format!(
            "either {} or {}, but not both",
            clause(a, subject_word),
            clause(b, subject_word)
        ),
        Formula::Implies(a, b) => format!(
            "if {}, then {}",
            clause(a, subject_word),
            clause(b, subject_word)
        ),
        Formula::ForAll(_, _) | Formula::Exists(_, _) => {
            unreachable!("quantifiers are rendered by rule_text")
        }
    }
}

/// Sentence for a ground literal, e.g. `poet(Sawyer)` →
/// `"Sawyer is a poet."` style (with offline verb-phrase predicates).
pub fn fact_text(fact: &Formula) -> String {
    capitalize(format!("{}.", clause(fact, None)))
}

/// Sentence for a rule bound to one named subject.
pub fn rule_text_specific(rule: &Formula) -> String {
    capitalize(format!("{}.", clause(rule, None)))
}

/// Sentence for the universally quantified reading of a rule body.
pub fn rule_text_universal(body: &Formula, category: &SubjectCategory) -> String {
    let noun = match category {
        SubjectCategory::Human => "person".to_string(),
        SubjectCategory::Animal(species) => species.clone(),
    };
    let subject_word = format!("that {noun}");
    capitalize(format!("For every {noun}: {}.", clause(body, Some(&subject_word))))
}

/// Sentence for an existentially quantified statement.
pub fn rule_text_existential(body: &Formula, category: &SubjectCategory) -> String {
    let noun = match category {
        SubjectCategory::Human => "person".to_string(),
        SubjectCategory::Animal(species) => species.clone(),
    };
    capitalize(format!(
        "There is at least one {noun} such that {}.",
        clause(body, Some(&format!("that {noun}")))
    ))
}

/// Renders any premise formula: literal, specific rule, or quantified rule.
pub fn premise_text(f: &Formula, category: &SubjectCategory) -> String {
    match f {
        Formula::ForAll(_, body) => rule_text_universal(body, category),
        Formula::Exists(_, body) => rule_text_existential(body, category),
        _ if f.as_literal().is_some() => fact_text(f),
        _ => rule_text_specific(f),
    }
}

/// The fixed question stem wrapped around a goal statement.
pub fn question_text(goal_nl: &str) -> String {
    format!(
        "Based on the above information, is the following statement true, false, or uncertain? {goal_nl}"
    )
}

const VERBS: &[&str] = &[
    "collects", "enjoys", "studies", "paints", "admires", "avoids", "values", "practices",
    "teaches", "masters", "prefers", "protects", "repairs", "organizes", "explores", "observes",
    "cherishes", "trains", "mentors", "plants", "brews", "sketches", "composes", "treasures",
    "records", "gathers", "restores", "designs", "tracks", "follows",
];

const OBJECTS: &[&str] = &[
    "rare_books", "old_maps", "wild_herbs", "quiet_mornings", "long_walks", "folk_songs",
    "night_skies", "mountain_trails", "river_stones", "board_games", "street_art", "garden_tools",
    "antique_clocks", "local_history", "morning_runs", "chess_puzzles", "handwritten_letters",
    "vintage_radios", "paper_cranes", "distant_shores", "model_ships", "herbal_teas", "city_parks",
    "winter_light", "spare_parts", "short_stories", "small_gestures", "honest_answers",
    "steady_routines", "open_fields",
];

const ADJECTIVES: &[&str] = &[
    "patient", "curious", "brave", "gentle", "diligent", "cheerful", "cautious", "daring",
    "earnest", "frugal", "generous", "humble", "keen", "lively", "meticulous", "nimble",
    "orderly", "punctual", "resilient", "sincere", "steadfast", "tactful", "thorough",
    "tranquil", "vigilant", "witty", "adaptable", "attentive", "dependable", "observant",
];

const TRAITS: &[&str] = &[
    "steady_hands", "a_quick_wit", "sharp_eyes", "a_calm_voice", "boundless_energy",
    "a_light_step", "a_warm_smile", "keen_hearing", "a_strong_grip", "quiet_confidence",
    "an_even_temper", "a_long_memory", "sure_footing", "a_gentle_manner", "spare_patience",
];

/// Deterministically invents a fresh snake_case predicate, scanning past
/// names on the forbidden list. The result is a self-contained verb phrase,
/// so template sentences stay grammatical.
pub fn invent_fresh_predicate(seed: u64, salt: &str, forbidden: &[String]) -> String {
    let space = VERBS.len() * OBJECTS.len() + ADJECTIVES.len() + TRAITS.len();
    let start = (crate::stable_hash(salt.as_bytes()) ^ seed) as usize % space;
    for attempt in 0..space {
        let idx = (start + attempt * 7919) % space;
        let candidate = if idx < VERBS.len() * OBJECTS.len() {
            format!("{}_{}", VERBS[idx / OBJECTS.len()], OBJECTS[idx % OBJECTS.len()])
        } else if idx < VERBS.len() * OBJECTS.len() + ADJECTIVES.len() {
            format!("is_{}", ADJECTIVES[idx - VERBS.len() * OBJECTS.len()])
        } else {
            format!("has_{}", TRAITS[idx - VERBS.len() * OBJECTS.len() - ADJECTIVES.len()])
        };
        if !forbidden.iter().any(|f| *f == candidate) {
            return candidate;
        }
    }
    // The space is orders of magnitude larger than any one problem's lexicon.
    unreachable!("predicate space exhausted")
}

/// Deterministic background story used by the offline backend.
pub fn story_text(name: &str, keyword: &str, category: &SubjectCategory) -> String {
    let descriptor = match category {
        SubjectCategory::Human => "someone".to_string(),
        SubjectCategory::Animal(species) => format!("a {species}"),
    };
    format!(
        "{name} is {descriptor} whose days are shaped by one word: {keyword}. Neighbors tell \
         small stories about {name}, and most of them circle back to that same quality. Morning \
         or evening, in company or alone, {name} keeps at it with a steadiness that makes the \
         stories easy to believe."
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    fn cat() -> SubjectCategory {
        SubjectCategory::Animal("dog".into())
    }

    #[test]
    fn renders_positive_and_negative_facts() {
        let f = parse_formula("enjoys_quiet_mornings(Sawyer)").unwrap();
        assert_eq!(fact_text(&f), "Sawyer enjoys quiet mornings.");
        let f = parse_formula("-enjoys_quiet_mornings(Sawyer)").unwrap();
        assert_eq!(
            fact_text(&f),
            "It is not the case that Sawyer enjoys quiet mornings."
        );
    }

    #[test]
    fn renders_rule_shapes() {
        let f = parse_formula("(collects_maps(S) & is_patient(S)) -> restores_clocks(S)").unwrap();
        assert_eq!(
            rule_text_specific(&f),
            "If S collects maps and S is patient, then S restores clocks."
        );
        let f = parse_formula("is_obedient(B) ^ is_playful(B)").unwrap();
        assert_eq!(
            rule_text_specific(&f),
            "Either B is obedient or B is playful, but not both."
        );
    }

    #[test]
    fn renders_universal_with_category_noun() {
        let f = parse_formula("all x (listens_to_commands(x) -> is_well_trained(x))").unwrap();
        let Formula::ForAll(_, body) = &f else { panic!() };
        assert_eq!(
            rule_text_universal(body, &cat()),
            "For every dog: if that dog listens to commands, then that dog is well trained."
        );
    }

    #[test]
    fn premise_text_dispatches_on_shape() {
        let cases = [
            ("p_q(A)", "A p q."),
            ("all x (a(x) -> b(x))", "For every dog: if that dog a, then that dog b."),
        ];
        for (input, expected) in cases {
            let f = parse_formula(input).unwrap();
            assert_eq!(premise_text(&f, &cat()), expected);
        }
    }

    #[test]
    fn story_is_bounded_and_mentions_inputs() {
        let story = story_text("Jack", "swift", &SubjectCategory::Animal("cat".into()));
        assert!(story.split_whitespace().count() <= 150);
        assert!(story.contains("Jack") && story.contains("swift"));
    }
}
