//! Reply parsing: extract the answered option or flag the reply.

use super::prompt::PromptStrategy;
use crate::backend::extract_json_object;
use crate::dataset::Answer;

/// Reads the model's answer out of a raw reply: the first embedded JSON
/// object's `answer` key, accepting bare letters and `A)`-prefixed forms.
/// Anything else is unparseable (`None`), which scores as incorrect.
pub fn parse_reply(raw: &str, _strategy: &PromptStrategy) -> Option<Answer> {
    let json = extract_json_object(raw)?;
    let value: serde_json::Value = serde_json::from_str(json).ok()?;
    let answer = value.get("answer")?.as_str()?.trim();
    let mut chars = answer.chars();
    let letter = chars.next()?.to_ascii_uppercase();
    let rest = chars.next();
    // A bare letter or a letter followed by ')' (e.g. "A) True").
    if rest.is_some() && rest != Some(')') {
        return None;
    }
    match letter {
        'A' => Some(Answer::A),
        'B' => Some(Answer::B),
        'C' => Some(Answer::C),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strategy() -> PromptStrategy {
        PromptStrategy::standard()
    }

    #[test]
    fn parses_plain_answer() {
        assert_eq!(parse_reply("{\"answer\": \"A\"}", &strategy()), Some(Answer::A));
    }

    #[test]
    fn parses_cot_reply_and_prefixed_letters() {
        assert_eq!(
            parse_reply("{\"reasoning\": \"...\", \"answer\": \"C\"}", &strategy()),
            Some(Answer::C)
        );
        assert_eq!(parse_reply("{\"answer\": \"B) False\"}", &strategy()), Some(Answer::B));
        assert_eq!(parse_reply("{\"answer\": \"b\"}", &strategy()), Some(Answer::B));
    }

    #[test]
    fn prose_and_junk_are_unparseable() {
        assert_eq!(parse_reply("The answer is A.", &strategy()), None);
        assert_eq!(parse_reply("{\"answer\": \"Absolutely\"}", &strategy()), None);
        assert_eq!(parse_reply("{\"verdict\": \"A\"}", &strategy()), None);
        assert_eq!(parse_reply("{\"answer\": \"D\"}", &strategy()), None);
    }

    #[test]
    fn first_json_object_wins() {
        let raw = "Thinking... {\"answer\": \"B\"} but also {\"answer\": \"A\"}";
        assert_eq!(parse_reply(raw, &strategy()), Some(Answer::B));
    }
}
