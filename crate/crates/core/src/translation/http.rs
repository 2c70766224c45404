//! JSON-over-HTTP machine translation client.
//!
//! `POST {"q": text, "source": code, "target": code}` to the endpoint, with
//! an optional bearer token; a successful response carries
//! `{"translatedText": ...}`.

use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{TranslationBackend, TranslationError, TranslationRequest};

pub const ENV_MT_URL: &str = "CODEMIX_MT_URL";
pub const ENV_MT_KEY: &str = "CODEMIX_MT_KEY";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    /// Delay after the first failure; doubles after each further failure.
    pub initial_backoff: Duration,
    /// Upper bound on the time spent on one request, retries included.
    pub deadline: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            initial_backoff: Duration::from_millis(500),
            deadline: Duration::from_secs(30),
        }
    }
}

#[derive(Serialize)]
struct Body<'a> {
    q: &'a str,
    source: &'a str,
    target: &'a str,
}

#[derive(Deserialize)]
struct Reply {
    #[serde(rename = "translatedText")]
    translated_text: String,
}

pub struct HttpBackend {
    endpoint: String,
    api_key: Option<String>,
    retry: RetryPolicy,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(endpoint: impl Into<String>, api_key: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .build()
            .into();
        HttpBackend {
            endpoint: endpoint.into(),
            api_key,
            retry: RetryPolicy::default(),
            agent,
        }
    }

    /// Endpoint from `CODEMIX_MT_URL`, token from `CODEMIX_MT_KEY`.
    pub fn from_env() -> Result<Self, TranslationError> {
        let endpoint = std::env::var(ENV_MT_URL).map_err(|_| TranslationError::BackendUnavailable {
            backend: "http".into(),
            reason: format!("{} is not set", ENV_MT_URL),
        })?;
        let key = std::env::var(ENV_MT_KEY).ok().filter(|k| !k.is_empty());
        Ok(HttpBackend::new(endpoint, key))
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn attempt(&self, request: &TranslationRequest, timeout: Duration) -> Result<String, String> {
        let body = Body {
            q: &request.text,
            source: request.source.as_str(),
            target: request.target.as_str(),
        };
        let mut call = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            call = call.header("Authorization", format!("Bearer {}", key));
        }
        let mut response = call
            .config()
            .timeout_global(Some(timeout))
            .build()
            .send_json(&body)
            .map_err(|e| e.to_string())?;
        let status = response.status();
        if !status.is_success() {
            return Err(format!("HTTP {}", status.as_u16()));
        }
        response
            .body_mut()
            .read_json::<Reply>()
            .map(|r| r.translated_text)
            .map_err(|e| format!("bad response body: {}", e))
    }
}

impl TranslationBackend for HttpBackend {
    fn name(&self) -> &str {
        "http"
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        let start = Instant::now();
        let mut backoff = self.retry.initial_backoff;
        let mut last_error = String::from("no attempt made");

        for attempt in 1..=self.retry.attempts.max(1) {
            let remaining = self.retry.deadline.saturating_sub(start.elapsed());
            if remaining.is_zero() {
                last_error = format!("deadline exceeded after {} attempts", attempt - 1);
                break;
            }
            match self.attempt(request, remaining) {
                Ok(text) => return Ok(text),
                Err(e) => {
                    log::warn!(
                        "translation attempt {}/{} for {:?} failed: {}",
                        attempt,
                        self.retry.attempts,
                        request.text,
                        e
                    );
                    last_error = e;
                }
            }
            if attempt < self.retry.attempts {
                let remaining = self.retry.deadline.saturating_sub(start.elapsed());
                thread::sleep(backoff.min(remaining));
                backoff *= 2;
            }
        }

        Err(TranslationError::BackendUnavailable {
            backend: self.name().to_owned(),
            reason: last_error,
        })
    }
}
