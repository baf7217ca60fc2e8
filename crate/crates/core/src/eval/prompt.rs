//! Few-shot prompt assembly.

use crate::backend::{ChatMessage, ChatRequest};
use crate::dataset::ProblemInstance;
use serde::Deserialize;
use std::fmt;

const EXEMPLARS_JSON: &str = include_str!("assets/exemplars.json");

const STANDARD_SYSTEM: &str = "Given a problem statement as contexts, the task is to answer a \
                               logical reasoning question. Your answer should be in JSON format \
                               with key: answer.";
const COT_SYSTEM: &str = "Given a problem statement as contexts, the task is to answer a logical \
                          reasoning question. Your answer should be in JSON format with keys: \
                          reasoning, answer.";
const SEPARATOR: &str = "------------------\nAnother Example\n------------------";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    Standard,
    CoT,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Standard => "Standard",
            StrategyKind::CoT => "CoT",
        })
    }
}

/// A worked example shown before the target problem.
#[derive(Clone, Debug, Deserialize)]
pub struct Exemplar {
    pub context: String,
    pub question: String,
    pub answer: String,
    pub reasoning: String,
}

impl Exemplar {
    fn reply(&self, kind: StrategyKind) -> String {
        match kind {
            StrategyKind::Standard => format!("{{\n  \"answer\": \"{}\"\n}}", self.answer),
            StrategyKind::CoT => format!(
                "{{\n  \"reasoning\": \"{}\",\n  \"answer\": \"{}\"\n}}",
                self.reasoning, self.answer
            ),
        }
    }
}

fn bundled_exemplars() -> Vec<Exemplar> {
    serde_json::from_str(EXEMPLARS_JSON).expect("bundled exemplars are valid")
}

/// A prompting strategy: standard (answer only) or chain-of-thought, with a
/// fixed number of worked examples (2 by default, 5 supported).
#[derive(Clone, Debug)]
pub struct PromptStrategy {
    pub kind: StrategyKind,
    pub shots: usize,
    pub exemplars: Vec<Exemplar>,
}

impl PromptStrategy {
    pub fn new(kind: StrategyKind, shots: usize) -> Self {
        let pool = bundled_exemplars();
        assert!(
            shots >= 1 && shots <= pool.len(),
            "supported shot counts are 1..={}",
            pool.len()
        );
        PromptStrategy { kind, shots, exemplars: pool.into_iter().take(shots).collect() }
    }

    pub fn standard() -> Self {
        Self::new(StrategyKind::Standard, 2)
    }

    pub fn cot() -> Self {
        Self::new(StrategyKind::CoT, 2)
    }

    pub fn name(&self) -> String {
        format!("{} {}-shot", self.kind, self.shots)
    }

    fn system(&self) -> &'static str {
        match self.kind {
            StrategyKind::Standard => STANDARD_SYSTEM,
            StrategyKind::CoT => COT_SYSTEM,
        }
    }
}

fn block(context: &str, question: &str, options: &[String; 3], reply: Option<&str>) -> String {
    let mut out = format!(
        "Context:\n{context}\n\nQuestion: {question}\n\nOptions:\n{}\n\nThe correct option is:",
        options.join("\n")
    );
    match reply {
        Some(text) => {
            out.push(' ');
            out.push_str(text);
        }
        None => out.push(' '),
    }
    out
}

/// Assembles the few-shot prompt for one instance: a system line, the worked
/// examples with their replies, and the target block left open.
pub fn build_prompt(
    instance: &ProblemInstance,
    strategy: &PromptStrategy,
    model: &str,
) -> ChatRequest {
    let options: [String; 3] = instance.options.clone();
    let mut body = String::new();
    for exemplar in &strategy.exemplars {
        body.push_str(&block(
            &exemplar.context,
            &exemplar.question,
            &options,
            Some(&exemplar.reply(strategy.kind)),
        ));
        body.push('\n');
        body.push_str(SEPARATOR);
        body.push('\n');
    }
    body.push_str(&block(
        &instance.context.join(" "),
        &instance.question,
        &options,
        None,
    ));

    ChatRequest {
        model: model.to_string(),
        messages: vec![ChatMessage::system(strategy.system()), ChatMessage::user(body)],
        temperature: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_pool_supports_five_shot() {
        assert_eq!(bundled_exemplars().len(), 5);
        let five = PromptStrategy::new(StrategyKind::CoT, 5);
        assert_eq!(five.exemplars.len(), 5);
    }

    #[test]
    fn standard_system_demands_answer_key_only() {
        let s = PromptStrategy::standard();
        assert!(s.system().contains("with key: answer"));
        let c = PromptStrategy::cot();
        assert!(c.system().contains("keys: reasoning, answer"));
    }

    #[test]
    fn exemplar_replies_match_strategy() {
        let e = &bundled_exemplars()[0];
        let std_reply = e.reply(StrategyKind::Standard);
        assert!(std_reply.contains("\"answer\"") && !std_reply.contains("reasoning"));
        let cot_reply = e.reply(StrategyKind::CoT);
        assert!(cot_reply.contains("\"reasoning\""));
        // Replies must themselves parse as the expected JSON.
        let v: serde_json::Value = serde_json::from_str(&cot_reply).unwrap();
        assert_eq!(v["answer"], "A");
    }
}
