//! Test scorer for the JSON-lines protocol.
//!
//! Reads every request, then answers in reverse order with
//! `logprob = -(characters in text)`. The first argument picks a failure to
//! inject: `ok` (default), `positive`, `missing-id`, `truncate`, `malformed`,
//! `unknown-id`, `hang`.

use std::io::{self, BufRead, Write};

use serde_json::{json, Value};

fn main() -> io::Result<()> {
    let mode = std::env::args().nth(1).unwrap_or_else(|| "ok".into());
    let mut requests: Vec<(String, String)> = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line).map_err(io::Error::other)?;
        let id = v["id"].as_str().unwrap_or_default().to_string();
        let text = v["text"].as_str().unwrap_or_default().to_string();
        requests.push((id, text));
    }
    if mode == "hang" {
        std::thread::sleep(std::time::Duration::from_secs(3600));
    }

    let mut out = io::stdout().lock();
    let n = requests.len();
    for (k, (id, text)) in requests.iter().rev().enumerate() {
        let logprob = -(text.chars().count() as f64);
        let num_tokens = text.split_whitespace().count() + 1;
        let mut answer = json!({"id": id, "logprob": logprob, "num_tokens": num_tokens});
        match mode.as_str() {
            "positive" if k == 0 => answer["logprob"] = json!(1.5),
            "unknown-id" if k == 0 => answer["id"] = json!(format!("{id}-unknown")),
            "malformed" if k == 0 => {
                writeln!(out, "this is not json")?;
                continue;
            }
            "missing-id" if k == n - 1 => break,
            "truncate" if k == n / 2 => {
                let s = answer.to_string();
                write!(out, "{}", &s[..s.len() / 2])?;
                out.flush()?;
                return Ok(());
            }
            _ => {}
        }
        writeln!(out, "{answer}")?;
    }
    out.flush()
}
