//! Sentence scoring: the native n-gram model and the external-process
//! protocol, behind one trait.

mod external;
mod ngram;

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use external::ExternalScorer;
pub use ngram::{NGramLM, NGramConfig, BOS, EOS, UNK};

use crate::error::{Error, Result};
use crate::pairgen::MinimalPair;

/// Natural-log probability of a whole sentence, end-of-sentence included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub sentence_id: String,
    pub logprob: f64,
    pub num_tokens: usize,
    pub scorer_id: String,
    pub checkpoint: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreRequest {
    pub id: String,
    pub tokens: Vec<String>,
}

impl ScoreRequest {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

pub trait SentenceScorer {
    fn scorer_id(&self) -> String;

    /// Scores every request; the output is in request order.
    fn score_batch(&self, requests: &[ScoreRequest]) -> Result<Vec<SentenceScore>>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub pair_id: String,
    pub logprob_good: f64,
    pub logprob_bad: f64,
}

pub fn good_id(pair_id: &str) -> String {
    format!("{pair_id}#good")
}

pub fn bad_id(pair_id: &str) -> String {
    format!("{pair_id}#bad")
}

fn pair_requests(pairs: &[MinimalPair]) -> Result<Vec<ScoreRequest>> {
    let mut seen = HashSet::with_capacity(pairs.len());
    let mut reqs = Vec::with_capacity(pairs.len() * 2);
    for p in pairs {
        if !seen.insert(p.pair_id.as_str()) {
            return Err(Error::DuplicatePairId(p.pair_id.clone()));
        }
        reqs.push(ScoreRequest {
            id: good_id(&p.pair_id),
            tokens: p.good.clone(),
        });
        reqs.push(ScoreRequest {
            id: bad_id(&p.pair_id),
            tokens: p.bad.clone(),
        });
    }
    Ok(reqs)
}

/// Scores both members of every pair with the same scorer. Returns the
/// per-sentence scores (good then bad for each pair).
pub fn score_pair_sentences(scorer: &dyn SentenceScorer, pairs: &[MinimalPair]) -> Result<Vec<SentenceScore>> {
    scorer.score_batch(&pair_requests(pairs)?)
}

/// One row per pair, in input order.
pub fn score_pairs(scorer: &dyn SentenceScorer, pairs: &[MinimalPair]) -> Result<Vec<PairScore>> {
    let scores = score_pair_sentences(scorer, pairs)?;
    Ok(pairs
        .iter()
        .zip(scores.chunks_exact(2))
        .map(|(p, s)| PairScore {
            pair_id: p.pair_id.clone(),
            logprob_good: s[0].logprob,
            logprob_bad: s[1].logprob,
        })
        .collect())
}

/// Re-pairs sentence scores keyed `<pair_id>#good` / `<pair_id>#bad`.
pub fn pair_scores_from_sentences(pairs: &[MinimalPair], scores: &[SentenceScore]) -> Result<Vec<PairScore>> {
    let by_id: std::collections::HashMap<&str, f64> =
        scores.iter().map(|s| (s.sentence_id.as_str(), s.logprob)).collect();
    pairs
        .iter()
        .map(|p| {
            let get = |id: String| {
                by_id
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| Error::invalid(format!("no score for {id}")))
            };
            Ok(PairScore {
                pair_id: p.pair_id.clone(),
                logprob_good: get(good_id(&p.pair_id))?,
                logprob_bad: get(bad_id(&p.pair_id))?,
            })
        })
        .collect()
}

/// `sentence_id<TAB>logprob<TAB>num_tokens`, one line per score.
pub fn scores_to_tsv(scores: &[SentenceScore]) -> String {
    let mut out = String::new();
    for s in scores {
        out.push_str(&format!("{}\t{}\t{}\n", s.sentence_id, s.logprob, s.num_tokens));
    }
    out
}

pub fn scores_from_tsv(text: &str, origin: &str, scorer_id: &str) -> Result<Vec<SentenceScore>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            origin: origin.to_string(),
            line: i + 1,
            msg: msg.to_string(),
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(err("expected 3 tab-separated columns"));
        }
        let logprob: f64 = cols[1].parse().map_err(|_| err("logprob is not a number"))?;
        let num_tokens: usize = cols[2].parse().map_err(|_| err("num_tokens is not an integer"))?;
        out.push(SentenceScore {
            sentence_id: cols[0].to_string(),
            logprob,
            num_tokens,
            scorer_id: scorer_id.to_string(),
            checkpoint: None,
        });
    }
    Ok(out)
}

pub fn write_scores(scores: &[SentenceScore], path: &Path) -> Result<()> {
    fs::write(path, scores_to_tsv(scores)).map_err(|e| Error::io(path, e))
}

pub fn read_scores(path: &Path) -> Result<Vec<SentenceScore>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    scores_from_tsv(&text, &path.display().to_string(), "file")
}
