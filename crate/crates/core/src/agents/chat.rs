//! Remote backend speaking the OpenAI-compatible chat protocol.
//!
//! [`chat_complete`] posts one request to `{base_url}/v1/chat/completions`
//! and returns the first choice's content. Rate limits, server errors,
//! and timeouts are retried with doubling delays; authentication
//! failures and malformed bodies are final. The credential is checked
//! before any network activity so a missing key can never leak a
//! request. [`RemoteBackend`] glues prompt building, transport, and
//! reply parsing into an [`AgentBackend`], optionally keeping a JSONL
//! transcript of every exchange.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use super::parse::parse_response;
use super::prompts::build_prompt;
use super::{AgentBackend, AgentDecision, AgentRequest, BackendError};

/// Environment variable holding the endpoint credential.
pub const API_KEY_ENV: &str = "HYPERLLM_API_KEY";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

/// One chat call: a system message followed by a user message.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub seed: Option<u64>,
}

impl ChatRequest {
    pub fn new(
        model: impl Into<String>,
        system: impl Into<String>,
        user: impl Into<String>,
        temperature: f64,
        seed: Option<u64>,
    ) -> Self {
        Self {
            model: model.into(),
            messages: vec![
                ChatMessage {
                    role: "system".into(),
                    content: system.into(),
                },
                ChatMessage {
                    role: "user".into(),
                    content: user.into(),
                },
            ],
            temperature,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatResponse {
    pub content: String,
    /// Token usage as reported by the endpoint, zero when absent.
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone)]
pub struct RemoteConfig {
    pub base_url: String,
    pub model: String,
    /// Bearer credential; requests fail fast when absent.
    pub api_key: Option<String>,
    /// Extra attempts after the first, for retryable failures only.
    pub max_retries: u32,
    /// First retry delay; later retries double it each time.
    pub retry_base_delay: Duration,
    pub timeout: Duration,
}

impl RemoteConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            model: model.into(),
            api_key: None,
            max_retries: 3,
            retry_base_delay: Duration::from_millis(250),
            timeout: Duration::from_secs(30),
        }
    }

    /// Reads the credential from [`API_KEY_ENV`]; an empty value counts
    /// as absent.
    pub fn from_env(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        let mut cfg = Self::new(base_url, model);
        cfg.api_key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        cfg
    }
}

fn validate_request(req: &ChatRequest) -> Result<(), BackendError> {
    let shape_err = |msg: &str| Err(BackendError::Rule(msg.to_string()));
    match req.messages.as_slice() {
        [] => return shape_err("chat request has no messages"),
        [first, rest @ ..] => {
            if first.role != "system" {
                return shape_err("chat request must open with a system message");
            }
            if rest.iter().any(|m| m.role == "system") {
                return shape_err("chat request must hold exactly one system message");
            }
        }
    }
    if req.messages.iter().any(|m| m.content.trim().is_empty()) {
        return shape_err("chat request holds an empty message");
    }
    Ok(())
}

fn request_body(req: &ChatRequest) -> Value {
    let mut body = serde_json::json!({
        "model": req.model,
        "messages": req.messages,
        "temperature": req.temperature,
    });
    if let Some(seed) = req.seed {
        body["seed"] = Value::from(seed);
    }
    body
}

fn parse_chat_body(value: &Value) -> Result<ChatResponse, BackendError> {
    let content = value
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| {
            BackendError::Protocol("body lacks choices[0].message.content".to_string())
        })?;
    if content.trim().is_empty() {
        return Err(BackendError::Protocol("completion content is empty".to_string()));
    }
    let usage = |key: &str| {
        value
            .pointer(&format!("/usage/{key}"))
            .and_then(Value::as_u64)
            .unwrap_or(0)
    };
    Ok(ChatResponse {
        content: content.to_string(),
        prompt_tokens: usage("prompt_tokens"),
        completion_tokens: usage("completion_tokens"),
    })
}

/// Runs one chat completion with retries. Retryable: HTTP 429, any 5xx,
/// and timeouts. Final: missing credential (checked before any network
/// traffic), 401/403, other 4xx, malformed bodies.
pub fn chat_complete(
    cfg: &RemoteConfig,
    req: &ChatRequest,
) -> Result<ChatResponse, BackendError> {
    let key = cfg
        .api_key
        .as_deref()
        .filter(|k| !k.is_empty())
        .ok_or(BackendError::MissingCredential { var: API_KEY_ENV })?;
    validate_request(req)?;

    let client = reqwest::blocking::Client::builder()
        .timeout(cfg.timeout)
        .build()
        .map_err(|e| BackendError::Transport(e.to_string()))?;
    let url = format!(
        "{}/v1/chat/completions",
        cfg.base_url.trim_end_matches('/')
    );
    let body = request_body(req);

    let mut last_failure = String::new();
    for attempt in 0..=cfg.max_retries {
        if attempt > 0 {
            std::thread::sleep(cfg.retry_base_delay * 2u32.pow(attempt - 1));
        }
        let sent = client.post(&url).bearer_auth(key).json(&body).send();
        let response = match sent {
            Ok(r) => r,
            Err(e) if e.is_timeout() => {
                last_failure = format!("timeout: {e}");
                continue;
            }
            Err(e) => return Err(BackendError::Transport(e.to_string())),
        };
        let status = response.status().as_u16();
        match status {
            401 | 403 => return Err(BackendError::Auth { status }),
            429 | 500..=599 => {
                last_failure = format!("HTTP {status}");
                continue;
            }
            200..=299 => {
                let value: Value = response
                    .json()
                    .map_err(|e| BackendError::Protocol(format!("body is not JSON: {e}")))?;
                return parse_chat_body(&value);
            }
            _ => {
                return Err(BackendError::Protocol(format!("unexpected HTTP {status}")))
            }
        }
    }
    Err(BackendError::Transport(format!(
        "gave up after {} attempts; last failure: {last_failure}",
        cfg.max_retries + 1
    )))
}

/// Appends one JSON object per agent exchange to a session file.
#[derive(Debug)]
pub struct TranscriptWriter {
    out: BufWriter<File>,
}

#[derive(Debug, Serialize)]
struct TranscriptEntry<'a> {
    call: u64,
    role: &'a str,
    system: &'a str,
    user: &'a str,
    response: Option<&'a str>,
    error: Option<String>,
}

impl TranscriptWriter {
    pub fn create(path: impl AsRef<Path>) -> std::io::Result<Self> {
        Ok(Self {
            out: BufWriter::new(File::create(path)?),
        })
    }

    fn record(&mut self, entry: &TranscriptEntry<'_>) -> std::io::Result<()> {
        serde_json::to_writer(&mut self.out, entry)?;
        self.out.write_all(b"\n")?;
        // Flushed per line so aborted runs keep their transcript.
        self.out.flush()
    }
}

/// [`AgentBackend`] over a chat endpoint. Each call gets a distinct
/// seed derived from the backend seed and the call index.
#[derive(Debug)]
pub struct RemoteBackend {
    config: RemoteConfig,
    transcript: Option<TranscriptWriter>,
    seed: u64,
    calls: u64,
}

impl RemoteBackend {
    pub fn new(config: RemoteConfig, seed: u64) -> Self {
        Self {
            config,
            transcript: None,
            seed,
            calls: 0,
        }
    }

    pub fn with_transcript(mut self, writer: TranscriptWriter) -> Self {
        self.transcript = Some(writer);
        self
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }
}

impl AgentBackend for RemoteBackend {
    fn decide(&mut self, request: &AgentRequest<'_>) -> Result<AgentDecision, BackendError> {
        let (system, user) =
            build_prompt(request).map_err(|e| BackendError::Rule(e.to_string()))?;
        let call = self.calls;
        self.calls += 1;
        let chat_req = ChatRequest::new(
            self.config.model.clone(),
            system.clone(),
            user.clone(),
            0.0,
            Some(self.seed.wrapping_add(call)),
        );
        let outcome = chat_complete(&self.config, &chat_req);
        if let Some(writer) = &mut self.transcript {
            let entry = TranscriptEntry {
                call,
                role: request.role().token(),
                system: &system,
                user: &user,
                response: outcome.as_ref().ok().map(|r| r.content.as_str()),
                error: outcome.as_ref().err().map(ToString::to_string),
            };
            // Transcripts are best effort; a full disk must not abort
            // the run.
            let _ = writer.record(&entry);
        }
        let response = outcome?;
        Ok(parse_response(request, &response.content)?)
    }

    fn name(&self) -> &'static str {
        "remote"
    }
}
