//! Exchangeable chat-completion backends.
//!
//! Every stage that needs language generation talks through [`LlmBackend`]:
//! a request carries the model name, role-tagged messages, and a temperature;
//! the reply is the assistant's text, which must contain a JSON object. The
//! offline backend satisfies the same contract deterministically, so the
//! whole pipeline runs hermetically without network access or model weights.

mod http;
mod offline;

pub use http::{HttpBackend, HttpBackendConfig, RetryPolicy};
pub use offline::OfflineBackend;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("API key environment variable {env_var} is not set")]
    MissingApiKey { env_var: String },
    #[error("endpoint returned status {status}: {message}")]
    Http { status: u16, message: String },
    #[error("network error: {0}")]
    Network(String),
    #[error("rate limit exceeded after {retries} retries")]
    RateLimited { retries: u32 },
    #[error("reply carried no usable content: {0}")]
    EmptyReply(String),
}

/// A chat-completion backend. Implementations must be shareable across
/// generation workers.
pub trait LlmBackend: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<String, BackendError>;

    /// Identifier used in reports and metadata.
    fn id(&self) -> String;
}

/// Extracts the first balanced JSON object embedded in free-form text.
/// String escapes are respected, so braces inside values don't confuse the
/// scan.
pub fn extract_json_object(text: &str) -> Option<&str> {
    let start = text.find('{')?;
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(start) {
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&text[start..=i]);
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_embedded_object() {
        let text = "Sure, here you go:\n{\"answer\": \"A\"}\nHope that helps.";
        assert_eq!(extract_json_object(text), Some("{\"answer\": \"A\"}"));
    }

    #[test]
    fn handles_nested_and_string_braces() {
        let text = r#"{"a": {"b": "close } brace"}, "c": 1} trailing {"d": 2}"#;
        assert_eq!(
            extract_json_object(text),
            Some(r#"{"a": {"b": "close } brace"}, "c": 1}"#)
        );
    }

    #[test]
    fn none_without_json() {
        assert_eq!(extract_json_object("no json here"), None);
        assert_eq!(extract_json_object("{unterminated"), None);
    }
}
