//! Background-story generation and the name/keyword pools that seed it.

use super::prompts;
use super::NlError;
use crate::backend::{extract_json_object, LlmBackend};
use crate::fol::{SubjectCategory, SubjectConstant};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

const BUNDLED_NAMES: &str = include_str!("assets/names.json");
const BUNDLED_KEYWORDS: &str = include_str!("assets/keywords.txt");

/// Subject name pool; entries carry the category used for realization.
#[derive(Clone, Debug)]
pub struct NamePool {
    entries: Vec<SubjectConstant>,
}

#[derive(Deserialize)]
struct NameEntry {
    name: String,
    category: String,
}

impl NamePool {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_NAMES).expect("bundled name pool is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: Vec<NameEntry> = serde_json::from_str(text)?;
        Ok(NamePool {
            entries: raw
                .into_iter()
                .map(|e| SubjectConstant::new(e.name, SubjectCategory::from_tag(&e.category)))
                .collect(),
        })
    }

    /// Newline-delimited `name,category` lines (category defaults to human).
    pub fn from_lines(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|line| {
                let line = line.trim();
                if line.is_empty() {
                    return None;
                }
                let (name, category) = match line.split_once(',') {
                    Some((n, c)) => (n.trim(), c.trim()),
                    None => (line, "human"),
                };
                Some(SubjectConstant::new(name, SubjectCategory::from_tag(category)))
            })
            .collect();
        NamePool { entries }
    }

    pub fn entries(&self) -> &[SubjectConstant] {
        &self.entries
    }

    pub fn category_of(&self, name: &str) -> Option<&SubjectCategory> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.category)
    }

    /// Draws one primary subject plus `extras` distinct distraction subjects
    /// of the same category class.
    pub fn draw(&self, rng: &mut ChaCha8Rng, extras: usize) -> (SubjectConstant, Vec<SubjectConstant>) {
        let primary = self.entries.choose(rng).expect("name pool is nonempty").clone();
        let mut others: Vec<SubjectConstant> = self
            .entries
            .iter()
            .filter(|e| e.name != primary.name)
            .cloned()
            .collect();
        others.shuffle(rng);
        others.truncate(extras);
        (primary, others)
    }
}

#[derive(Clone, Debug)]
pub struct KeywordPool {
    words: Vec<String>,
}

impl KeywordPool {
    pub fn bundled() -> Self {
        Self::from_lines(BUNDLED_KEYWORDS)
    }

    pub fn from_lines(text: &str) -> Self {
        KeywordPool {
            words: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect(),
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> String {
        self.words.choose(rng).expect("keyword pool is nonempty").clone()
    }
}

/// A generated background story for one subject.
#[derive(Clone, Debug)]
pub struct StoryContext {
    pub subject: SubjectConstant,
    pub keyword: String,
    pub story: String,
}

#[derive(Deserialize)]
struct StoryReply {
    category: String,
    story: String,
}

/// Asks the backend for a background story about `subject` shaped by
/// `keyword`. The reply must be JSON with `category` and `story`; malformed
/// replies are retried. The pool's category class is authoritative: a reply
/// that disagrees on human-vs-animal is treated as malformed.
pub fn generate_story(
    subject: &SubjectConstant,
    keyword: &str,
    backend: &dyn LlmBackend,
    retries: u32,
) -> Result<StoryContext, NlError> {
    let request = prompts::story_request(&backend.id(), keyword, &subject.name);
    let mut last_schema_err = String::new();
    for _ in 0..=retries {
        let raw = backend.complete(&request)?;
        let Some(json) = extract_json_object(&raw) else {
            last_schema_err = format!("no JSON object in story reply: {raw:.120}");
            continue;
        };
        let reply: StoryReply = match serde_json::from_str(json) {
            Ok(r) => r,
            Err(e) => {
                last_schema_err = format!("story reply missing keys: {e}");
                continue;
            }
        };
        let reply_category = SubjectCategory::from_tag(&reply.category);
        if reply_category.is_human() != subject.category.is_human() {
            last_schema_err = format!(
                "story reply classed {} as {} but the pool says {}",
                subject.name, reply_category, subject.category
            );
            continue;
        }
        if reply.story.trim().is_empty() {
            last_schema_err = "story reply was empty".into();
            continue;
        }
        return Ok(StoryContext {
            subject: subject.clone(),
            keyword: keyword.to_string(),
            story: reply.story.trim().to_string(),
        });
    }
    Err(NlError::Schema(last_schema_err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::OfflineBackend;
    use rand::SeedableRng;

    #[test]
    fn bundled_pools_load() {
        let names = NamePool::bundled();
        let keywords = KeywordPool::bundled();
        assert!(names.entries().len() > 200);
        assert!(keywords.words().len() > 500);
        assert!(names.entries().iter().any(|e| !e.category.is_human()));
    }

    #[test]
    fn draw_returns_distinct_subjects() {
        let names = NamePool::bundled();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (primary, extras) = names.draw(&mut rng, 3);
        assert_eq!(extras.len(), 3);
        assert!(extras.iter().all(|e| e.name != primary.name));
    }

    #[test]
    fn offline_story_is_deterministic_and_consistent() {
        let backend = OfflineBackend::new(7);
        let subject = SubjectConstant::new("Whiskers", SubjectCategory::Animal("cat".into()));
        let a = generate_story(&subject, "swift", &backend, 3).unwrap();
        let b = generate_story(&subject, "swift", &backend, 3).unwrap();
        assert_eq!(a.story, b.story);
        assert!(a.story.contains("Whiskers"));
        assert!(a.story.split_whitespace().count() <= 150);
    }

    #[test]
    fn category_mismatch_is_rejected_after_retries() {
        // The bundled pool lists Jack as a human name, so a caller claiming
        // Jack is a cat gets a consistency failure from the offline backend.
        let backend = OfflineBackend::new(7);
        let subject = SubjectConstant::new("Jack", SubjectCategory::Animal("cat".into()));
        let err = generate_story(&subject, "swift", &backend, 1).unwrap_err();
        assert!(matches!(err, NlError::Schema(_)));
    }

    #[test]
    fn name_pool_from_lines_defaults_to_human() {
        let pool = NamePool::from_lines("Ada\nRex, dog\n");
        assert!(pool.category_of("Ada").unwrap().is_human());
        assert_eq!(pool.category_of("Rex").unwrap().tag(), "dog");
    }
}
