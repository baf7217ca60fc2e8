//! Placeholder instantiation, rule-version selection, fact translation, and
//! quality control.

use super::lexicon::{Lexicon, LexiconEntry};
use super::prompts::{self, TranslationSlots};
use super::render;
use super::story::StoryContext;
use super::NlError;
use crate::backend::{extract_json_object, LlmBackend};
use crate::engine::ProofStep;
use crate::fol::{Formula, PredicateSymbol, SubjectConstant, TruthLabel};
use crate::skeleton::{AssembledProblem, PremiseKind};
use std::collections::HashMap;

const SCHEMA_RETRIES: u32 = 3;
// Words the quality check does not require in the text; the paper-style
// check is about entities, not function words.
const STOPWORDS: &[&str] = &[
    "is", "are", "was", "has", "have", "a", "an", "the", "to", "of", "and", "or", "not", "in",
    "on", "at", "with", "for", "does", "do", "can", "will", "be",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleVersion {
    Universal,
    Specific,
}

/// Both renderings of one rule plus the selected symbolic form.
#[derive(Clone, Debug)]
pub struct RuleRendering {
    /// The rule in its final symbolic form (∀-quantified iff `chosen` is
    /// universal).
    pub rule: Formula,
    pub universal_text: String,
    pub specific_text: String,
    pub chosen: RuleVersion,
    pub commonsense_ok: bool,
}

impl RuleRendering {
    pub fn chosen_text(&self) -> &str {
        match self.chosen {
            RuleVersion::Universal => &self.universal_text,
            RuleVersion::Specific => &self.specific_text,
        }
    }
}

/// Result of instantiating one rule's placeholders.
pub struct Instantiation {
    pub rendering: RuleRendering,
    pub new_entries: Vec<LexiconEntry>,
    /// Placeholder predicate → final predicate.
    pub renamed: HashMap<PredicateSymbol, PredicateSymbol>,
}

fn normalize_predicate(raw: &str) -> Result<PredicateSymbol, NlError> {
    let name: String = raw
        .trim()
        .trim_matches(|c| c == '"' || c == '\'' || c == '.')
        .to_ascii_lowercase()
        .chars()
        .map(|c| if c == ' ' || c == '-' { '_' } else { c })
        .collect();
    let symbol = PredicateSymbol::new(name).map_err(|e| NlError::Schema(e.to_string()))?;
    symbol.validate_lexical().map_err(|e| NlError::Schema(e.to_string()))?;
    Ok(symbol)
}

/// Replaces the placeholder predicates of one rule with fresh predicates
/// from the backend, honoring the lexicon's forbidden list, and collects
/// the universal/specific renderings from the same reply.
pub fn instantiate_predicates(
    rule: &Formula,
    subject: &SubjectConstant,
    story: &StoryContext,
    lexicon: &mut Lexicon,
    backend: &dyn LlmBackend,
    references: &[String],
) -> Result<Instantiation, NlError> {
    let placeholders: Vec<PredicateSymbol> = rule
        .predicates()
        .into_iter()
        .filter(|p| p.is_placeholder())
        .cloned()
        .collect();

    let quantified_already = rule.is_quantified();
    let expression = if quantified_already {
        rule.clone()
    } else {
        rule.universalized(&subject.name)
    };
    let mut keys: Vec<String> = placeholders.iter().map(|p| p.name().to_string()).collect();
    if quantified_already {
        keys.push("translation".into());
    } else {
        keys.push("universal_rule".into());
        keys.push("specific_rule".into());
    }

    let known: Vec<String> = rule
        .predicates()
        .into_iter()
        .filter(|p| !p.is_placeholder())
        .map(|p| p.name().to_string())
        .collect();
    let mut forbidden = lexicon.forbidden_list();

    let mut last_err = NlError::Schema("no attempts made".into());
    for _ in 0..=SCHEMA_RETRIES {
        let request = prompts::translation_request(
            &backend.id(),
            &TranslationSlots {
                story: &story.story,
                reference: references.to_vec(),
                reference_names: known.clone(),
                forbidden: forbidden.clone(),
                expression: &expression,
                keys: keys.clone(),
                category: &subject.category,
                subject_name: &subject.name,
            },
        );
        let raw = backend.complete(&request)?;
        let Some(json) = extract_json_object(&raw) else {
            last_err = NlError::Schema(format!("no JSON object in reply: {raw:.120}"));
            continue;
        };
        let reply: serde_json::Map<String, serde_json::Value> = match serde_json::from_str(json) {
            Ok(serde_json::Value::Object(map)) => map,
            _ => {
                last_err = NlError::Schema("reply is not a JSON object".into());
                continue;
            }
        };

        let mut renamed: HashMap<PredicateSymbol, PredicateSymbol> = HashMap::new();
        let mut fresh: Vec<PredicateSymbol> = Vec::new();
        let mut violation = None;
        for slot in &placeholders {
            let Some(value) = reply.get(slot.name()).and_then(|v| v.as_str()) else {
                violation = Some(NlError::Schema(format!("reply lacks key {}", slot.name())));
                break;
            };
            let symbol = match normalize_predicate(value) {
                Ok(s) => s,
                Err(e) => {
                    violation = Some(e);
                    break;
                }
            };
            let clash = forbidden.iter().any(|f| *f == symbol.name())
                || fresh.iter().any(|f| f == &symbol)
                || known.iter().any(|k| *k == symbol.name());
            if clash {
                // Widen the forbidden list so the retry cannot repeat it.
                forbidden.push(symbol.name().to_string());
                violation = Some(NlError::ForbiddenPredicate(symbol.name().to_string()));
                break;
            }
            fresh.push(symbol.clone());
            renamed.insert(slot.clone(), symbol);
        }
        if let Some(err) = violation {
            last_err = err;
            continue;
        }

        let rule_renamed = rule.rename_predicates(&renamed);
        let (universal_text, specific_text) = if quantified_already {
            let Some(text) = reply.get("translation").and_then(|v| v.as_str()) else {
                last_err = NlError::Schema("reply lacks key translation".into());
                continue;
            };
            (text.trim().to_string(), text.trim().to_string())
        } else {
            let (Some(uni), Some(spec)) = (
                reply.get("universal_rule").and_then(|v| v.as_str()),
                reply.get("specific_rule").and_then(|v| v.as_str()),
            ) else {
                last_err = NlError::Schema("reply lacks universal_rule/specific_rule".into());
                continue;
            };
            (uni.trim().to_string(), spec.trim().to_string())
        };
        if universal_text.is_empty() || specific_text.is_empty() {
            last_err = NlError::Schema("empty rule rendering".into());
            continue;
        }

        let new_entries: Vec<LexiconEntry> =
            fresh.iter().cloned().map(LexiconEntry::new).collect();
        for entry in &new_entries {
            lexicon.insert(entry.clone())?;
        }
        return Ok(Instantiation {
            rendering: RuleRendering {
                rule: rule_renamed,
                universal_text,
                specific_text,
                chosen: RuleVersion::Specific,
                commonsense_ok: false,
            },
            new_entries,
            renamed,
        });
    }
    match last_err {
        NlError::ForbiddenPredicate(name) => Err(NlError::ForbiddenPredicate(name)),
        other => Err(other),
    }
}

/// Judges the universal rendering against common sense and fixes the rule's
/// final symbolic form: universal keeps the ∀ shape, specific stays bound to
/// the subject. Backend failures fall back to the specific version, which is
/// always safe.
pub fn select_rule_version(
    mut rendering: RuleRendering,
    subject: &SubjectConstant,
    backend: &dyn LlmBackend,
) -> RuleRendering {
    if rendering.rule.is_quantified() {
        // Already carries its quantifier; nothing to choose.
        return rendering;
    }
    let request = prompts::judge_request(&backend.id(), &rendering.universal_text);
    let verdict = (0..=SCHEMA_RETRIES).find_map(|_| {
        let raw = backend.complete(&request).ok()?;
        let json = extract_json_object(&raw)?;
        let value: serde_json::Value = serde_json::from_str(json).ok()?;
        match value.get("judgment").and_then(|v| v.as_str()) {
            Some(j) if j.eq_ignore_ascii_case("yes") => Some(true),
            Some(j) if j.eq_ignore_ascii_case("no") => Some(false),
            _ => None,
        }
    });
    match verdict {
        Some(true) => {
            rendering.commonsense_ok = true;
            rendering.chosen = RuleVersion::Universal;
            rendering.rule = rendering.rule.universalized(&subject.name);
        }
        Some(false) | None => {
            rendering.commonsense_ok = false;
            rendering.chosen = RuleVersion::Specific;
        }
    }
    rendering
}

/// Translates one ground literal into a sentence, retrying until the
/// quality-control check passes.
pub fn translate_fact(
    fact: &Formula,
    lexicon: &Lexicon,
    story: &StoryContext,
    backend: &dyn LlmBackend,
    references: &[String],
) -> Result<String, NlError> {
    let (_, atom) = fact
        .as_literal()
        .ok_or_else(|| NlError::Schema(format!("not a literal: {fact}")))?;
    if !lexicon.contains(&atom.predicate) {
        return Err(NlError::Schema(format!(
            "predicate {} is not in the lexicon",
            atom.predicate
        )));
    }
    let request = prompts::fact_request(
        &backend.id(),
        &story.story,
        references,
        fact,
        &story.subject.name,
        &story.subject.category,
    );
    let mut last = String::new();
    for _ in 0..=SCHEMA_RETRIES {
        let raw = backend.complete(&request)?;
        let Some(json) = extract_json_object(&raw) else {
            last = format!("no JSON object in reply: {raw:.120}");
            continue;
        };
        let value: serde_json::Value = match serde_json::from_str(json) {
            Ok(v) => v,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let Some(text) = value.get("translation").and_then(|v| v.as_str()) else {
            last = "reply lacks key translation".into();
            continue;
        };
        let text = text.trim().to_string();
        if qc_translation(fact, &text, lexicon) {
            return Ok(text);
        }
        last = format!("entities of {fact} missing from {text:?}");
    }
    Err(NlError::QcFailed(last))
}

fn contains_ci(haystack: &str, needle: &str) -> bool {
    haystack.to_ascii_lowercase().contains(&needle.to_ascii_lowercase())
}

// Token match with light inflection tolerance: "dance" is found inside
// "dancing", "skills" inside "skilled".
fn token_present(text: &str, token: &str) -> bool {
    if contains_ci(text, token) {
        return true;
    }
    ["s", "e", "es"].iter().any(|suffix| {
        token
            .strip_suffix(suffix)
            .is_some_and(|stem| stem.len() >= 3 && contains_ci(text, stem))
    })
}

/// Heuristic alignment check: every constant name must appear in the text,
/// and every predicate must be traceable either through its name's content
/// words or through its lexicon phrase. Function words are skipped and word
/// stems tolerate simple inflection.
pub fn qc_translation(symbolic: &Formula, text: &str, lexicon: &Lexicon) -> bool {
    for constant in symbolic.constants() {
        if !contains_ci(text, constant) {
            return false;
        }
    }
    for predicate in symbolic.predicates() {
        let name_tokens: Vec<&str> = predicate
            .words()
            .filter(|w| !STOPWORDS.contains(w))
            .collect();
        let name_ok = name_tokens.iter().all(|t| token_present(text, t));
        if name_ok {
            continue;
        }
        let phrase_ok = lexicon.phrase(predicate).is_some_and(|phrase| {
            phrase
                .split_whitespace()
                .filter(|w| !STOPWORDS.contains(w))
                .all(|w| token_present(text, w))
        });
        if !phrase_ok {
            return false;
        }
    }
    true
}

/// One premise with its aligned sentence.
#[derive(Clone, Debug)]
pub struct RealizedPremise {
    pub formula: Formula,
    pub text: String,
    pub kind: PremiseKind,
}

/// One proof step with its aligned sentences.
#[derive(Clone, Debug)]
pub struct RealizedStep {
    pub step: ProofStep,
    pub facts_nl: Vec<String>,
    pub rule_nl: String,
    pub conclusion_nl: String,
}

/// The natural-language realization of an assembled problem.
#[derive(Clone, Debug)]
pub struct RealizedProblem {
    pub story: StoryContext,
    pub premises: Vec<RealizedPremise>,
    pub goal: Formula,
    pub goal_text: String,
    pub question: String,
    pub label: TruthLabel,
    pub proof: Vec<RealizedStep>,
    pub lexicon: Lexicon,
}

/// Realizes a whole assembled problem: rules are processed in proof order
/// (then distractions), facts afterwards, with earlier translations fed back
/// as references.
pub fn realize_problem(
    problem: &AssembledProblem,
    story: &StoryContext,
    subjects: &[SubjectConstant],
    backend: &dyn LlmBackend,
) -> Result<RealizedProblem, NlError> {
    let mut lexicon = Lexicon::default();
    let mut global_map: HashMap<PredicateSymbol, PredicateSymbol> = HashMap::new();
    let mut references: Vec<String> = Vec::new();

    let subject_of = |formula: &Formula| -> SubjectConstant {
        formula
            .constants()
            .into_iter()
            .next()
            .and_then(|name| subjects.iter().find(|s| s.name == name))
            .cloned()
            .unwrap_or_else(|| problem.subject.clone())
    };

    // Rules first, proof steps in order, then type-2, then type-1 items.
    let mut rule_indices: Vec<usize> = Vec::new();
    let mut step_rules: Vec<usize> = (0..problem.premises.len())
        .filter(|&i| matches!(problem.premises[i].kind, PremiseKind::CoreRule { .. }))
        .collect();
    step_rules.sort_by_key(|&i| match problem.premises[i].kind {
        PremiseKind::CoreRule { step } => step,
        _ => unreachable!(),
    });
    rule_indices.extend(step_rules);
    rule_indices.extend(
        (0..problem.premises.len())
            .filter(|&i| matches!(problem.premises[i].kind, PremiseKind::Type2Rule)),
    );
    rule_indices.extend(
        (0..problem.premises.len())
            .filter(|&i| matches!(problem.premises[i].kind, PremiseKind::Type1Rule)),
    );

    let mut final_formulas: Vec<Option<Formula>> = vec![None; problem.premises.len()];
    let mut final_texts: Vec<Option<String>> = vec![None; problem.premises.len()];

    for &idx in &rule_indices {
        let original = &problem.premises[idx].formula;
        let partially = original.rename_predicates(&global_map);
        let rule_subject = subject_of(&partially);
        let instantiation = instantiate_predicates(
            &partially,
            &rule_subject,
            story,
            &mut lexicon,
            backend,
            &references,
        )?;
        global_map.extend(instantiation.renamed.clone());
        let rendering = select_rule_version(instantiation.rendering, &rule_subject, backend);
        let text = rendering.chosen_text().to_string();
        if !qc_translation(&rendering.rule, &text, &lexicon) {
            return Err(NlError::QcFailed(format!(
                "rule {} vs {text:?}",
                rendering.rule
            )));
        }
        references.push(format!("{}: {}", rendering.rule.pretty(), text));
        if references.len() > 4 {
            references.remove(0);
        }
        final_formulas[idx] = Some(rendering.rule.clone());
        final_texts[idx] = Some(text);
    }

    // Facts: all placeholders must be bound by now.
    let mut fact_cache: HashMap<Formula, String> = HashMap::new();
    for idx in 0..problem.premises.len() {
        if final_formulas[idx].is_some() {
            continue;
        }
        let fact = problem.premises[idx].formula.rename_predicates(&global_map);
        if fact.predicates().iter().any(|p| p.is_placeholder()) {
            return Err(NlError::Schema(format!(
                "fact {fact} still carries a placeholder after rule instantiation"
            )));
        }
        let fact_story = StoryContext {
            subject: subject_of(&fact),
            keyword: story.keyword.clone(),
            story: story.story.clone(),
        };
        let text = translate_fact(&fact, &lexicon, &fact_story, backend, &references)?;
        fact_cache.insert(fact.clone(), text.clone());
        final_formulas[idx] = Some(fact);
        final_texts[idx] = Some(text);
    }

    let premises: Vec<RealizedPremise> = problem
        .premises
        .iter()
        .zip(final_formulas.into_iter().zip(final_texts))
        .map(|(orig, (formula, text))| RealizedPremise {
            formula: formula.unwrap(),
            text: text.unwrap(),
            kind: orig.kind,
        })
        .collect();

    // Goal sentence.
    let goal = problem.goal.rename_predicates(&global_map);
    let goal_text = translate_fact(&goal, &lexicon, story, backend, &references)?;

    // Proof steps in final symbolic form with aligned sentences.
    let rule_text_of = |step_idx: usize| -> (Formula, String) {
        premises
            .iter()
            .find(|p| p.kind == PremiseKind::CoreRule { step: step_idx })
            .map(|p| (p.formula.clone(), p.text.clone()))
            .expect("each step's rule is a premise")
    };
    let mut proof = Vec::with_capacity(problem.proof.len());
    for (step_idx, step) in problem.proof.iter().enumerate() {
        let facts: Vec<Formula> =
            step.step_facts.iter().map(|f| f.rename_predicates(&global_map)).collect();
        let conclusion = step.conclusion.rename_predicates(&global_map);
        let mut facts_nl = Vec::with_capacity(facts.len());
        for fact in &facts {
            let text = match fact_cache.get(fact) {
                Some(t) => t.clone(),
                None => {
                    let t = translate_fact(fact, &lexicon, story, backend, &references)?;
                    fact_cache.insert(fact.clone(), t.clone());
                    t
                }
            };
            facts_nl.push(text);
        }
        let conclusion_nl = match fact_cache.get(&conclusion) {
            Some(t) => t.clone(),
            None => {
                let t = translate_fact(&conclusion, &lexicon, story, backend, &references)?;
                fact_cache.insert(conclusion.clone(), t.clone());
                t
            }
        };
        let (rule, rule_nl) = rule_text_of(step_idx);
        proof.push(RealizedStep {
            step: ProofStep { step_facts: facts, step_rule: rule, conclusion },
            facts_nl,
            rule_nl,
            conclusion_nl,
        });
    }

    Ok(RealizedProblem {
        story: story.clone(),
        premises,
        goal,
        goal_text: goal_text.clone(),
        question: render::question_text(&goal_text),
        label: problem.label,
        proof,
        lexicon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::OfflineBackend;
    use crate::fol::{parse_formula, SubjectCategory};

    fn story() -> StoryContext {
        StoryContext {
            subject: SubjectConstant::new("Moriarty", SubjectCategory::Animal("cat".into())),
            keyword: "warm".into(),
            story: "Moriarty is a cat in a bookstore.".into(),
        }
    }

    #[test]
    fn qc_accepts_matching_and_rejects_missing_entities() {
        let lex = Lexicon::default();
        let poet = parse_formula("poet(Sawyer)").unwrap();
        assert!(qc_translation(&poet, "Sawyer is a poet", &lex));
        assert!(!qc_translation(&poet, "He writes verse", &lex));
        let skills = parse_formula("good_dance_skills(Sawyer)").unwrap();
        assert!(qc_translation(&skills, "Sawyer has good dance skills", &lex));
        // Token match is substring-based: "dance" inside "dancing".
        let dance = parse_formula("dance(Sawyer)").unwrap();
        assert!(qc_translation(&dance, "Sawyer is skilled at dancing", &lex));
    }

    #[test]
    fn qc_ignores_stopword_tokens() {
        let lex = Lexicon::default();
        let f = parse_formula("all x (is_fluffy(x) -> love_attention(x))").unwrap();
        assert!(qc_translation(&f, "All fluffy cats love attention.", &lex));
    }

    #[test]
    fn instantiation_binds_all_placeholders() {
        let backend = OfflineBackend::new(11);
        let mut lexicon = Lexicon::default();
        let rule = parse_formula("(F1(Moriarty) & F2(Moriarty)) -> F3(Moriarty)").unwrap();
        let story = story();
        let inst = instantiate_predicates(
            &rule,
            &story.subject,
            &story,
            &mut lexicon,
            &backend,
            &[],
        )
        .unwrap();
        assert_eq!(inst.new_entries.len(), 3);
        assert!(inst.rendering.rule.predicates().iter().all(|p| !p.is_placeholder()));
        assert_eq!(lexicon.len(), 3);
        assert!(!inst.rendering.universal_text.is_empty());
        assert!(!inst.rendering.specific_text.is_empty());
    }

    #[test]
    fn version_choice_matches_symbolic_form() {
        let backend = OfflineBackend::new(13);
        let mut lexicon = Lexicon::default();
        let story = story();
        for seed in 0..8u64 {
            let rule = parse_formula(&format!("F{seed}(Moriarty) -> F{}(Moriarty)", seed + 100))
                .unwrap();
            let inst = instantiate_predicates(
                &rule,
                &story.subject,
                &story,
                &mut lexicon,
                &backend,
                &[],
            )
            .unwrap();
            let chosen = select_rule_version(inst.rendering, &story.subject, &backend);
            match chosen.chosen {
                RuleVersion::Universal => {
                    assert!(chosen.commonsense_ok);
                    assert!(matches!(chosen.rule, Formula::ForAll(_, _)));
                }
                RuleVersion::Specific => {
                    assert!(chosen.rule.constants().contains("Moriarty"));
                }
            }
        }
    }

    #[test]
    fn fact_translation_passes_qc_offline() {
        let backend = OfflineBackend::new(17);
        let mut lexicon = Lexicon::default();
        lexicon
            .insert(LexiconEntry::new(
                crate::fol::PredicateSymbol::new("enjoys_quiet_mornings").unwrap(),
            ))
            .unwrap();
        let story = story();
        let fact = parse_formula("-enjoys_quiet_mornings(Moriarty)").unwrap();
        let text = translate_fact(&fact, &lexicon, &story, &backend, &[]).unwrap();
        assert!(qc_translation(&fact, &text, &lexicon));
        assert!(text.contains("not"));
    }

    #[test]
    fn unknown_predicate_is_rejected() {
        let backend = OfflineBackend::new(19);
        let lexicon = Lexicon::default();
        let fact = parse_formula("poet(Moriarty)").unwrap();
        let err = translate_fact(&fact, &lexicon, &story(), &backend, &[]).unwrap_err();
        assert!(matches!(err, NlError::Schema(_)));
    }
}
