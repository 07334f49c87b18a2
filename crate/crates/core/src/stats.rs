//! Descriptive corpus statistics and replacement-rate accounting.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::perturb::PerturbReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub domain: String,
    pub n_sentences: usize,
    pub n_tokens: usize,
    /// Unique / total n-grams for n = 1, 2, 3; `None` when the corpus has no n-grams of that size.
    pub ttr_1: Option<f64>,
    pub ttr_2: Option<f64>,
    pub ttr_3: Option<f64>,
    pub avg_sentence_length: f64,
}

/// Type-token ratios over lowercased forms. N-grams never cross a sentence
/// boundary.
pub fn compute_stats(corpus: &Corpus) -> Result<CorpusStats> {
    if corpus.num_tokens() == 0 {
        return Err(Error::EmptyCorpus);
    }
    let lowered: Vec<Vec<String>> = corpus
        .sentences
        .iter()
        .map(|s| s.tokens.iter().map(|t| t.form.to_lowercase()).collect())
        .collect();
    let ttr = |n: usize| -> Option<f64> {
        let mut seen: HashSet<&[String]> = HashSet::new();
        let mut total = 0usize;
        for s in &lowered {
            for g in s.windows(n) {
                seen.insert(g);
                total += 1;
            }
        }
        if total == 0 {
            warn!("{}: no {n}-grams, TTR-{n} undefined", corpus.domain);
            None
        } else {
            Some(seen.len() as f64 / total as f64)
        }
    };
    let n_tokens = corpus.num_tokens();
    Ok(CorpusStats {
        domain: corpus.domain.clone(),
        n_sentences: corpus.len(),
        n_tokens,
        ttr_1: ttr(1),
        ttr_2: ttr(2),
        ttr_3: ttr(3),
        avg_sentence_length: n_tokens as f64 / corpus.len() as f64,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub fn stats_to_csv(stats: &[CorpusStats]) -> String {
    let mut out = String::from("domain,n_sentences,n_tokens,ttr_1,ttr_2,ttr_3,avg_sentence_length\n");
    for s in stats {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.domain,
            s.n_sentences,
            s.n_tokens,
            opt(s.ttr_1),
            opt(s.ttr_2),
            opt(s.ttr_3),
            s.avg_sentence_length
        );
    }
    out
}

pub fn stats_table(stats: &[CorpusStats]) -> String {
    let f = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    let mut out = format!("{:<14} {:>7} {:>7} {:>7} {:>9} {:>10} {:>10}\n", "dataset", "TTR-1", "TTR-2", "TTR-3", "avg.len", "sentences", "tokens");
    for s in stats {
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>7} {:>7} {:>9.2} {:>10} {:>10}",
            s.domain,
            f(s.ttr_1),
            f(s.ttr_2),
            f(s.ttr_3),
            s.avg_sentence_length,
            s.n_sentences,
            s.n_tokens
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub domain: String,
    pub condition: String,
    pub seed: u64,
    pub tokens_total: u64,
    pub tokens_replaced: u64,
    pub replacement_rate: f64,
    pub avg_sentence_length: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
    /// Pearson r between replacement rate and average sentence length.
    pub length_correlation: Option<f64>,
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Rows sorted by domain then seed. The correlation uses every row whose
/// domain has statistics.
pub fn compare_replacement_rates(reports: &[PerturbReport], stats: &[CorpusStats]) -> RateTable {
    let by_domain: BTreeMap<&str, &CorpusStats> = stats.iter().map(|s| (s.domain.as_str(), s)).collect();
    let mut rows: Vec<RateRow> = reports
        .iter()
        .map(|r| RateRow {
            domain: r.domain.clone(),
            condition: r.condition.label().to_string(),
            seed: r.seed,
            tokens_total: r.tokens_total,
            tokens_replaced: r.tokens_replaced,
            replacement_rate: r.replacement_rate,
            avg_sentence_length: by_domain.get(r.domain.as_str()).map(|s| s.avg_sentence_length),
        })
        .collect();
    rows.sort_by(|a, b| (&a.domain, &a.condition, a.seed).cmp(&(&b.domain, &b.condition, b.seed)));
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.avg_sentence_length.map(|l| (r.replacement_rate, l)))
        .unzip();
    RateTable {
        length_correlation: pearson(&xs, &ys),
        rows,
    }
}

impl RateTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("domain,condition,seed,tokens_total,tokens_replaced,replacement_rate,avg_sentence_length\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.domain,
                r.condition,
                r.seed,
                r.tokens_total,
                r.tokens_replaced,
                r.replacement_rate,
                opt(r.avg_sentence_length)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::AnnotatedSentence;
    use crate::perturb::Condition;

    fn corpus(lines: &[&str]) -> Corpus {
        let sents = lines
            .iter()
            .enumerate()
            .map(|(i, l)| AnnotatedSentence::from_forms(format!("s{i}"), &l.split(' ').collect::<Vec<_>>()).unwrap())
            .collect();
        Corpus::new("t", sents).unwrap()
    }

    #[test]
    fn hand_counted_sentence() {
        let s = compute_stats(&corpus(&["a b a ."])).unwrap();
        assert_eq!(s.ttr_1, Some(0.75));
        assert_eq!(s.ttr_2, Some(1.0));
        assert_eq!(s.ttr_3, Some(1.0));
        assert_eq!(s.avg_sentence_length, 4.0);
    }

    #[test]
    fn short_sentence_has_no_trigrams() {
        let s = compute_stats(&corpus(&["a b"])).unwrap();
        assert_eq!(s.ttr_3, None);
        assert_eq!(s.ttr_2, Some(1.0));
    }

    #[test]
    fn lowercased_and_within_sentence() {
        // "b The" would be a cross-sentence bigram; "The" and "the" are one type
        let s = compute_stats(&corpus(&["the a b", "The a c"])).unwrap();
        assert_eq!(s.ttr_1, Some(4.0 / 6.0));
        assert_eq!(s.ttr_2, Some(3.0 / 4.0));
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(compute_stats(&Corpus::empty("e")).is_err());
    }

    #[test]
    fn rates_pass_through_and_correlate() {
        let rep = |d: &str, rate: f64| PerturbReport {
            condition: Condition::ReplaceWord,
            tokens_total: 100,
            tokens_replaced: (rate * 100.0) as u64,
            replacement_rate: rate,
            seed: 1,
            domain: d.into(),
        };
        let st = |d: &str, len: f64| CorpusStats {
            domain: d.into(),
            n_sentences: 1,
            n_tokens: 1,
            ttr_1: None,
            ttr_2: None,
            ttr_3: None,
            avg_sentence_length: len,
        };
        let t = compare_replacement_rates(&[rep("wiki", 0.26), rep("cdl", 0.10)], &[st("cdl", 4.5), st("wiki", 20.3)]);
        assert_eq!(t.rows[0].domain, "cdl");
        assert_eq!(t.rows[0].replacement_rate, 0.10);
        assert!((t.length_correlation.unwrap() - 1.0).abs() < 1e-12);
        let single = compare_replacement_rates(&[rep("cdl", 0.0)], &[]);
        assert_eq!(single.rows[0].replacement_rate, 0.0);
        assert_eq!(single.length_correlation, None);
    }
}
