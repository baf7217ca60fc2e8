//! Prompt templates and request builders.
//!
//! Templates are stored as role-scripted text assets (`### system`,
//! `### user`, `### assistant` sections) with `[SLOT]` markers in the final
//! user turn. The offline backend recognizes each task by its system line
//! and re-extracts the slots from the marker lines, so both backends share
//! one wire format.

use crate::backend::{ChatMessage, ChatRequest, Role};
use crate::fol::{Formula, SubjectCategory};

pub(crate) const STORY_PROMPT: &str = include_str!("assets/story_prompt.txt");
pub(crate) const TRANSLATION_PROMPT: &str = include_str!("assets/translation_prompt.txt");
pub(crate) const FACT_PROMPT: &str = include_str!("assets/fact_prompt.txt");
pub(crate) const JUDGE_PROMPT: &str = include_str!("assets/judge_prompt.txt");

// System-line prefixes the offline backend dispatches on.
pub(crate) const STORY_SYSTEM_PREFIX: &str = "You will be given a keyword and a name";
pub(crate) const TRANSLATION_SYSTEM_PREFIX: &str = "You will be provided a logic expression, a reference";
pub(crate) const FACT_SYSTEM_PREFIX: &str = "You will be provided a logic expression of a single fact";
pub(crate) const JUDGE_SYSTEM_PREFIX: &str = "You will be given a candidate rule";

// Temperatures per task: stories want diversity, translation and judgment
// want fidelity.
pub(crate) const STORY_TEMPERATURE: f64 = 0.7;
pub(crate) const TRANSLATION_TEMPERATURE: f64 = 0.2;

/// Parses a role-scripted template into messages.
fn parse_script(script: &str) -> Vec<ChatMessage> {
    let mut messages = Vec::new();
    let mut role: Option<Role> = None;
    let mut content = String::new();
    let flush = |role: &Option<Role>, content: &mut String, out: &mut Vec<ChatMessage>| {
        if let Some(r) = role {
            out.push(ChatMessage { role: *r, content: content.trim().to_string() });
        }
        content.clear();
    };
    for line in script.lines() {
        let next = match line.trim() {
            "### system" => Some(Role::System),
            "### user" => Some(Role::User),
            "### assistant" => Some(Role::Assistant),
            _ => None,
        };
        match next {
            Some(r) => {
                flush(&role, &mut content, &mut messages);
                role = Some(r);
            }
            None => {
                content.push_str(line);
                content.push('\n');
            }
        }
    }
    flush(&role, &mut content, &mut messages);
    messages
}

fn fill_last_user(messages: &mut [ChatMessage], fills: &[(&str, &str)]) {
    let last = messages
        .iter_mut()
        .rev()
        .find(|m| m.role == Role::User)
        .expect("template has a final user turn");
    for (slot, value) in fills {
        last.content = last.content.replace(slot, value);
    }
}

pub(crate) fn story_request(model: &str, keyword: &str, name: &str) -> ChatRequest {
    let mut messages = parse_script(STORY_PROMPT);
    fill_last_user(&mut messages, &[("[KEYWORD]", keyword), ("[NAME]", name)]);
    ChatRequest { model: model.into(), messages, temperature: STORY_TEMPERATURE }
}

pub(crate) struct TranslationSlots<'a> {
    pub story: &'a str,
    /// Lines of previously translated material shown as references.
    pub reference: Vec<String>,
    pub reference_names: Vec<String>,
    pub forbidden: Vec<String>,
    /// The quantified expression whose placeholders need instantiation.
    pub expression: &'a Formula,
    pub keys: Vec<String>,
    pub category: &'a SubjectCategory,
    pub subject_name: &'a str,
}

pub(crate) fn quoted_list(items: &[String]) -> String {
    let inner: Vec<String> = items.iter().map(|i| format!("'{i}'")).collect();
    format!("[{}]", inner.join(", "))
}

pub(crate) fn translation_request(model: &str, slots: &TranslationSlots<'_>) -> ChatRequest {
    let mut messages = parse_script(TRANSLATION_PROMPT);
    let reference = if slots.reference.is_empty() {
        "none".to_string()
    } else {
        slots.reference.join("\n")
    };
    let reference_names = if slots.reference_names.is_empty() {
        "none".to_string()
    } else {
        slots.reference_names.join(", ")
    };
    fill_last_user(
        &mut messages,
        &[
            ("[STORY]", slots.story),
            ("[REFERENCE_NAMES]", &reference_names),
            ("[REFERENCE]", &reference),
            ("[FORBIDDEN]", &quoted_list(&slots.forbidden)),
            ("[EXPRESSION]", &slots.expression.pretty()),
            ("[KEYS]", &quoted_list(&slots.keys)),
            ("[CATEGORY]", slots.category.tag()),
            ("[NAME]", slots.subject_name),
        ],
    );
    ChatRequest { model: model.into(), messages, temperature: TRANSLATION_TEMPERATURE }
}

pub(crate) fn fact_request(
    model: &str,
    story: &str,
    reference: &[String],
    fact: &Formula,
    name: &str,
    category: &SubjectCategory,
) -> ChatRequest {
    let mut messages = parse_script(FACT_PROMPT);
    let reference = if reference.is_empty() { "none".to_string() } else { reference.join("\n") };
    fill_last_user(
        &mut messages,
        &[
            ("[STORY]", story),
            ("[REFERENCE]", &reference),
            ("[EXPRESSION]", &fact.pretty()),
            ("[NAME]", name),
            ("[CATEGORY]", category.tag()),
        ],
    );
    ChatRequest { model: model.into(), messages, temperature: TRANSLATION_TEMPERATURE }
}

pub(crate) fn judge_request(model: &str, universal_rule: &str) -> ChatRequest {
    let mut messages = parse_script(JUDGE_PROMPT);
    fill_last_user(&mut messages, &[("[RULE]", universal_rule)]);
    ChatRequest { model: model.into(), messages, temperature: TRANSLATION_TEMPERATURE }
}

/// Pulls the value of a `label: value` line out of a prompt's user turn;
/// the offline backend uses this to re-extract slots.
pub(crate) fn extract_line<'a>(text: &'a str, label: &str) -> Option<&'a str> {
    text.lines().find_map(|line| line.strip_prefix(label).map(str::trim))
}

/// Parses a `['a', 'b']` list produced by `quoted_list`.
pub(crate) fn parse_quoted_list(text: &str) -> Vec<String> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|part| part.trim().trim_matches('\'').to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    #[test]
    fn story_script_has_three_worked_examples() {
        let req = story_request("m", "swift", "Jack");
        assert_eq!(req.messages[0].role, Role::System);
        let assistants = req.messages.iter().filter(|m| m.role == Role::Assistant).count();
        assert_eq!(assistants, 3);
        let last = req.messages.last().unwrap();
        assert!(last.content.contains("keyword: swift"));
        assert!(last.content.contains("name: Jack"));
        assert!(!last.content.contains("[KEYWORD]"));
    }

    #[test]
    fn translation_request_fills_every_slot() {
        let expr = parse_formula("all x (F7(x) -> (is_fluffy(x) & F8(x)))").unwrap();
        let req = translation_request(
            "m",
            &TranslationSlots {
                story: "A story.",
                reference: vec!["is_fluffy(Moriarty): Moriarty is fluffy.".into()],
                reference_names: vec!["is_fluffy".into()],
                forbidden: vec!["is_fluffy".into()],
                expression: &expr,
                keys: vec!["F7".into(), "F8".into(), "universal_rule".into(), "specific_rule".into()],
                category: &SubjectCategory::Animal("cat".into()),
                subject_name: "Moriarty",
            },
        );
        let last = &req.messages.last().unwrap().content;
        assert!(last.contains("∀x (F7(x) → (is_fluffy(x) ∧ F8(x)))"));
        assert!(last.contains("keys: ['F7', 'F8', 'universal_rule', 'specific_rule']"));
        assert!(last.contains("Note: x belongs to cat."));
        assert!(!last.contains("[STORY]"));
    }

    #[test]
    fn quoted_list_round_trips() {
        let items = vec!["a".to_string(), "b_c".to_string()];
        assert_eq!(parse_quoted_list(&quoted_list(&items)), items);
        assert!(parse_quoted_list("[]").is_empty());
    }
}
