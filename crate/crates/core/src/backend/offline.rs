//! Deterministic offline backend.
//!
//! Satisfies the chat contract without a model: each task is recognized by
//! its system line, the slots are re-extracted from the final user turn, and
//! the reply is rendered from templates. Replies are a pure function of
//! (seed, request), so realizations are byte-identical across runs and
//! independent of scheduling.

use super::{BackendError, ChatRequest, LlmBackend, Role};
use crate::fol::{parse_formula, Formula, SubjectCategory};
use crate::nl::offline_support::{self as support};
use crate::stable_hash;

pub struct OfflineBackend {
    seed: u64,
    names: crate::nl::NamePool,
}

impl OfflineBackend {
    pub fn new(seed: u64) -> Self {
        OfflineBackend { seed, names: crate::nl::NamePool::bundled() }
    }

    /// Uses a caller-supplied name pool for category lookups, so custom
    /// pools keep story replies consistent.
    pub fn with_names(seed: u64, names: crate::nl::NamePool) -> Self {
        OfflineBackend { seed, names }
    }

    fn mix(&self, content: &str) -> u64 {
        self.seed ^ stable_hash(content.as_bytes())
    }
}

impl LlmBackend for OfflineBackend {
    fn complete(&self, request: &ChatRequest) -> Result<String, BackendError> {
        let system = request
            .messages
            .iter()
            .find(|m| m.role == Role::System)
            .map(|m| m.content.as_str())
            .unwrap_or_default();
        let user = request
            .messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
            .ok_or_else(|| BackendError::EmptyReply("request has no user turn".into()))?;

        if system.starts_with(support::STORY_SYSTEM_PREFIX) {
            Ok(self.story_reply(user))
        } else if system.starts_with(support::FACT_SYSTEM_PREFIX) {
            self.fact_reply(user)
        } else if system.starts_with(support::TRANSLATION_SYSTEM_PREFIX) {
            self.translation_reply(user)
        } else if system.starts_with(support::JUDGE_SYSTEM_PREFIX) {
            Ok(self.judge_reply(user))
        } else if system.starts_with("Given a problem statement") {
            Ok(self.eval_reply(system, user))
        } else {
            Err(BackendError::EmptyReply(format!(
                "offline backend does not recognize this task: {system:.80}"
            )))
        }
    }

    fn id(&self) -> String {
        "offline".into()
    }
}

impl OfflineBackend {
    fn story_reply(&self, user: &str) -> String {
        let keyword = support::extract_line(user, "keyword:").unwrap_or("quiet");
        let name = support::extract_line(user, "name:").unwrap_or("Sam");
        let category = self
            .names
            .category_of(name)
            .cloned()
            .unwrap_or(SubjectCategory::Human);
        let story = support::render_story(name, keyword, &category);
        serde_json::json!({ "category": category.tag(), "story": story }).to_string()
    }

    fn fact_reply(&self, user: &str) -> Result<String, BackendError> {
        let fact = self.parse_expression(user)?;
        let translation = support::render_fact(&fact);
        Ok(serde_json::json!({ "translation": translation }).to_string())
    }

    fn translation_reply(&self, user: &str) -> Result<String, BackendError> {
        let expression = self.parse_expression(user)?;
        let keys = support::parse_quoted_list(
            support::extract_line(user, "keys:").unwrap_or_default(),
        );
        let mut forbidden = support::parse_quoted_list(
            support::extract_line(user, "forbidden list:").unwrap_or_default(),
        );
        let note = support::extract_line(user, "Note:").unwrap_or_default();
        let category = note
            .split("x belongs to ")
            .nth(1)
            .and_then(|rest| rest.split(['.', ' ']).next())
            .map(SubjectCategory::from_tag)
            .unwrap_or(SubjectCategory::Human);
        let subject = note
            .split("The subject is ")
            .nth(1)
            .map(|rest| rest.trim_end_matches('.').trim().to_string())
            .unwrap_or_else(|| "Subject".to_string());

        let mut reply = serde_json::Map::new();
        let mut renamed = expression.clone();
        for key in &keys {
            if key == "universal_rule" || key == "specific_rule" {
                continue;
            }
            let fresh = support::invent_predicate(self.mix(user), key, &forbidden);
            forbidden.push(fresh.clone());
            let mut map = std::collections::HashMap::new();
            map.insert(
                crate::fol::PredicateSymbol::new(key.clone())
                    .map_err(|e| BackendError::EmptyReply(e.to_string()))?,
                crate::fol::PredicateSymbol::new(fresh.clone())
                    .map_err(|e| BackendError::EmptyReply(e.to_string()))?,
            );
            renamed = renamed.rename_predicates(&map);
            reply.insert(key.clone(), serde_json::Value::String(fresh));
        }
        if keys.iter().any(|k| k == "universal_rule") {
            let body = match &renamed {
                Formula::ForAll(_, body) => (**body).clone(),
                other => other.clone(),
            };
            reply.insert(
                "universal_rule".into(),
                serde_json::Value::String(support::render_universal(&body, &category)),
            );
            let specific = body.substitute("x", &subject);
            reply.insert(
                "specific_rule".into(),
                serde_json::Value::String(support::render_specific(&specific)),
            );
        }
        if keys.iter().any(|k| k == "translation") {
            reply.insert(
                "translation".into(),
                serde_json::Value::String(support::render_premise(&renamed, &category)),
            );
        }
        Ok(serde_json::Value::Object(reply).to_string())
    }

    fn judge_reply(&self, user: &str) -> String {
        let rule = support::extract_line(user, "rule:").unwrap_or_default();
        // Split judgments roughly evenly so both rule versions are exercised.
        let judgment = if stable_hash(rule.as_bytes()) & 1 == 0 { "yes" } else { "no" };
        serde_json::json!({ "judgment": judgment }).to_string()
    }

    fn eval_reply(&self, system: &str, user: &str) -> String {
        let answer = ["A", "B", "C"][(self.mix(user) % 3) as usize];
        if system.contains("reasoning") {
            serde_json::json!({
                "reasoning": "Offline placeholder reasoning over the stated premises.",
                "answer": answer
            })
            .to_string()
        } else {
            serde_json::json!({ "answer": answer }).to_string()
        }
    }

    fn parse_expression(&self, user: &str) -> Result<Formula, BackendError> {
        let line = support::extract_line(user, "logic expression:")
            .ok_or_else(|| BackendError::EmptyReply("no logic expression line".into()))?;
        let ascii = line
            .replace('∀', "all ")
            .replace('∃', "exists ")
            .replace('∧', "&")
            .replace('∨', "|")
            .replace('⊕', "^")
            .replace('¬', "-")
            .replace('→', "->");
        parse_formula(&ascii)
            .map_err(|e| BackendError::EmptyReply(format!("unparseable expression {line:?}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ChatMessage;

    fn request(system: &str, user: &str) -> ChatRequest {
        ChatRequest {
            model: "offline".into(),
            messages: vec![ChatMessage::system(system), ChatMessage::user(user)],
            temperature: 0.0,
        }
    }

    #[test]
    fn replies_are_deterministic_per_seed() {
        let backend = OfflineBackend::new(1);
        let req = request(
            support::STORY_SYSTEM_PREFIX,
            "keyword: swift\nname: Jack",
        );
        assert_eq!(backend.complete(&req).unwrap(), backend.complete(&req).unwrap());
    }

    #[test]
    fn translation_reply_instantiates_requested_keys() {
        let backend = OfflineBackend::new(2);
        let user = "background story:\nA story.\n\nreference: none\nnone\nforbidden list: ['is_fluffy']\n\nlogic expression: ∀x (F7(x) → (is_fluffy(x) ∧ F8(x)))\nkeys: ['F7', 'F8', 'universal_rule', 'specific_rule']\nNote: x belongs to cat. The subject is Moriarty.";
        let raw = backend
            .complete(&request(support::TRANSLATION_SYSTEM_PREFIX, user))
            .unwrap();
        let v: serde_json::Value = serde_json::from_str(&raw).unwrap();
        for key in ["F7", "F8", "universal_rule", "specific_rule"] {
            assert!(v.get(key).is_some(), "missing {key} in {raw}");
        }
        assert_ne!(v["F7"], v["F8"]);
        assert!(v["specific_rule"].as_str().unwrap().contains("Moriarty"));
        assert!(v["universal_rule"].as_str().unwrap().contains("cat"));
    }

    #[test]
    fn unknown_tasks_are_rejected() {
        let backend = OfflineBackend::new(3);
        let err = backend.complete(&request("Write a poem.", "about rust")).unwrap_err();
        assert!(matches!(err, BackendError::EmptyReply(_)));
    }
}
