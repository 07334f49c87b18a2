//! External scorers speak JSON Lines over the child's stdin/stdout.
//!
//! Request:  `{"id": "...", "text": "..."}`
//! Response: `{"id": "...", "logprob": <float <= 0>, "num_tokens": <int >= 1>}`
//!
//! Responses may come back in any order. Scores are natural logs.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;
use serde_json::json;

use super::{ScoreRequest, SentenceScore, SentenceScorer};
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

/// How many missing ids to spell out in an error message.
const MAX_LISTED: usize = 20;

#[derive(Clone, Debug)]
pub struct ExternalScorer {
    pub program: String,
    pub args: Vec<String>,
    /// Wall-clock limit for one whole batch.
    pub timeout: Duration,
    pub checkpoint: Option<String>,
}

#[derive(Deserialize)]
struct Response {
    id: String,
    logprob: f64,
    num_tokens: i64,
}

struct KillOnDrop(Child);

impl Drop for KillOnDrop {
    fn drop(&mut self) {
        if let Ok(None) = self.0.try_wait() {
            let _ = self.0.kill();
        }
        let _ = self.0.wait();
    }
}

impl ExternalScorer {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        ExternalScorer {
            program: program.into(),
            args,
            timeout: DEFAULT_TIMEOUT,
            checkpoint: None,
        }
    }

    /// Runs `command` through `sh -c`.
    pub fn shell(command: &str) -> Self {
        Self::new("sh", vec!["-c".into(), command.into()])
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn parse_line(&self, line: &str, lineno: usize) -> Result<Response> {
        let r: Response = serde_json::from_str(line)
            .map_err(|e| Error::Protocol(format!("malformed response on line {lineno}: {e}: {line:?}")))?;
        if !r.logprob.is_finite() || r.logprob > 0.0 {
            return Err(Error::Protocol(format!(
                "logprob {} for id {:?} on line {lineno} is not a finite value <= 0",
                r.logprob, r.id
            )));
        }
        if r.num_tokens < 1 {
            return Err(Error::Protocol(format!(
                "num_tokens {} for id {:?} on line {lineno} is below 1",
                r.num_tokens, r.id
            )));
        }
        Ok(r)
    }
}

fn list_missing(ids: &[&str]) -> String {
    let mut s = ids.iter().take(MAX_LISTED).map(|i| format!("{i:?}")).collect::<Vec<_>>().join(", ");
    if ids.len() > MAX_LISTED {
        s.push_str(&format!(" and {} more", ids.len() - MAX_LISTED));
    }
    s
}

impl SentenceScorer for ExternalScorer {
    fn scorer_id(&self) -> String {
        let mut parts = vec![self.program.clone()];
        parts.extend(self.args.iter().cloned());
        format!("external:{}", parts.join(" "))
    }

    fn score_batch(&self, requests: &[ScoreRequest]) -> Result<Vec<SentenceScore>> {
        if requests.is_empty() {
            return Ok(Vec::new());
        }
        let mut slot: HashMap<&str, usize> = HashMap::with_capacity(requests.len());
        for (i, r) in requests.iter().enumerate() {
            if slot.insert(r.id.as_str(), i).is_some() {
                return Err(Error::invalid(format!("duplicate request id {:?}", r.id)));
            }
        }

        let child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Protocol(format!("cannot start {:?}: {e}", self.program)))?;
        let mut child = KillOnDrop(child);
        let mut stdin = child.0.stdin.take().expect("piped stdin");
        let stdout = child.0.stdout.take().expect("piped stdout");

        let payload: String = requests
            .iter()
            .map(|r| format!("{}\n", json!({"id": r.id, "text": r.text()})))
            .collect();
        // A child that stops reading early produces a broken pipe here; the
        // reader side reports the actual problem.
        let writer = thread::spawn(move || {
            let _ = stdin.write_all(payload.as_bytes());
        });

        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    return;
                }
            }
        });

        let deadline = Instant::now() + self.timeout;
        let mut out: Vec<Option<SentenceScore>> = vec![None; requests.len()];
        let mut remaining = requests.len();
        let mut lineno = 0;
        let scorer_id = self.scorer_id();
        while remaining > 0 {
            let wait = deadline.saturating_duration_since(Instant::now());
            let line = match rx.recv_timeout(wait) {
                Ok(Ok(line)) => line,
                Ok(Err(e)) => return Err(Error::Protocol(format!("reading child output: {e}"))),
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    return Err(Error::Protocol(format!(
                        "timed out after {:?} with {remaining} of {} responses outstanding",
                        self.timeout,
                        requests.len()
                    )))
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => {
                    let missing: Vec<&str> = requests
                        .iter()
                        .zip(&out)
                        .filter(|(_, o)| o.is_none())
                        .map(|(r, _)| r.id.as_str())
                        .collect();
                    return Err(Error::Protocol(format!(
                        "child exited before answering {} id(s): {}",
                        missing.len(),
                        list_missing(&missing)
                    )));
                }
            };
            lineno += 1;
            if line.trim().is_empty() {
                continue;
            }
            let r = self.parse_line(&line, lineno)?;
            let Some(&i) = slot.get(r.id.as_str()) else {
                return Err(Error::Protocol(format!("unknown id {:?} on line {lineno}", r.id)));
            };
            if out[i].is_some() {
                return Err(Error::Protocol(format!("duplicate answer for id {:?} on line {lineno}", r.id)));
            }
            out[i] = Some(SentenceScore {
                sentence_id: r.id,
                logprob: r.logprob,
                num_tokens: r.num_tokens as usize,
                scorer_id: scorer_id.clone(),
                checkpoint: self.checkpoint.clone(),
            });
            remaining -= 1;
        }
        let _ = writer.join();
        drop(child);
        Ok(out.into_iter().map(|o| o.expect("all slots filled")).collect())
    }
}
