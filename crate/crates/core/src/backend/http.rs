//! Chat-completion client for OpenAI-compatible endpoints, with retry and a
//! token-bucket rate limit.

use super::{BackendError, ChatRequest, LlmBackend};
use serde::Deserialize;
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 3,
            initial_backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(8),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HttpBackendConfig {
    /// Base URL; `/chat/completions` is appended.
    pub endpoint: String,
    pub model: String,
    /// Environment variable holding the API key.
    pub api_key_env: String,
    pub retry: RetryPolicy,
    /// Sustained requests per second for the token bucket.
    pub requests_per_second: f64,
    /// Bucket capacity (burst size).
    pub burst: u32,
    pub timeout: Duration,
}

impl Default for HttpBackendConfig {
    fn default() -> Self {
        HttpBackendConfig {
            endpoint: "https://api.openai.com/v1".into(),
            model: "gpt-4o".into(),
            api_key_env: "OPENAI_API_KEY".into(),
            retry: RetryPolicy::default(),
            requests_per_second: 2.0,
            burst: 4,
            timeout: Duration::from_secs(120),
        }
    }
}

struct TokenBucket {
    capacity: f64,
    tokens: f64,
    refill_per_sec: f64,
    last: Instant,
}

impl TokenBucket {
    fn new(capacity: u32, refill_per_sec: f64) -> Self {
        TokenBucket {
            capacity: capacity as f64,
            tokens: capacity as f64,
            refill_per_sec,
            last: Instant::now(),
        }
    }

    /// Time to wait before a token is available; zero when one was taken.
    fn acquire(&mut self) -> Duration {
        let now = Instant::now();
        let elapsed = now.duration_since(self.last).as_secs_f64();
        self.last = now;
        self.tokens = (self.tokens + elapsed * self.refill_per_sec).min(self.capacity);
        if self.tokens >= 1.0 {
            self.tokens -= 1.0;
            Duration::ZERO
        } else {
            Duration::from_secs_f64((1.0 - self.tokens) / self.refill_per_sec)
        }
    }
}

pub struct HttpBackend {
    config: HttpBackendConfig,
    api_key: String,
    client: reqwest::blocking::Client,
    bucket: Mutex<TokenBucket>,
}

#[derive(Deserialize)]
struct CompletionReply {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    content: Option<String>,
}

impl HttpBackend {
    pub fn new(config: HttpBackendConfig) -> Result<Self, BackendError> {
        let api_key = std::env::var(&config.api_key_env)
            .map_err(|_| BackendError::MissingApiKey { env_var: config.api_key_env.clone() })?;
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| BackendError::Network(e.to_string()))?;
        Ok(HttpBackend {
            bucket: Mutex::new(TokenBucket::new(config.burst, config.requests_per_second)),
            config,
            api_key,
            client,
        })
    }

    fn wait_for_slot(&self) {
        loop {
            let wait = self.bucket.lock().unwrap().acquire();
            if wait.is_zero() {
                return;
            }
            std::thread::sleep(wait);
        }
    }

    fn post_once(&self, request: &ChatRequest) -> Result<String, BackendError> {
        let url = format!("{}/chat/completions", self.config.endpoint.trim_end_matches('/'));
        let response = self
            .client
            .post(url)
            .bearer_auth(&self.api_key)
            .json(request)
            .send()
            .map_err(|e| BackendError::Network(e.to_string()))?;
        let status = response.status();
        let body = response.text().map_err(|e| BackendError::Network(e.to_string()))?;
        if !status.is_success() {
            return Err(BackendError::Http { status: status.as_u16(), message: body });
        }
        let reply: CompletionReply = serde_json::from_str(&body)
            .map_err(|e| BackendError::EmptyReply(format!("undecodable body: {e}")))?;
        reply
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| BackendError::EmptyReply("no choices in reply".into()))
    }
}

impl LlmBackend for HttpBackend {
    fn complete(&self, request: &ChatRequest) -> Result<String, BackendError> {
        let mut backoff = self.config.retry.initial_backoff;
        let mut last_err = None;
        for attempt in 0..=self.config.retry.max_retries {
            self.wait_for_slot();
            match self.post_once(request) {
                Ok(text) => return Ok(text),
                // 429 and 5xx are retryable; 4xx client errors are not.
                Err(BackendError::Http { status, message })
                    if status == 429 || status >= 500 =>
                {
                    last_err = Some(BackendError::Http { status, message });
                }
                Err(BackendError::Network(e)) => last_err = Some(BackendError::Network(e)),
                Err(other) => return Err(other),
            }
            if attempt < self.config.retry.max_retries {
                std::thread::sleep(backoff);
                backoff = (backoff * 2).min(self.config.retry.max_backoff);
            }
        }
        match last_err {
            Some(BackendError::Http { status: 429, .. }) => {
                Err(BackendError::RateLimited { retries: self.config.retry.max_retries })
            }
            Some(err) => Err(err),
            None => unreachable!("retry loop runs at least once"),
        }
    }

    fn id(&self) -> String {
        self.config.model.clone()
    }
}
