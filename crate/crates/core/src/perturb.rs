//! The two training-data manipulations: within-bin lexical replacement and
//! within-sentence shuffling.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedSentence, Corpus, FrequencyTable, VERB};
use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::tagger::find_root;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "ORIGINAL")]
    Original,
    #[serde(rename = "REPLACE.WORD")]
    ReplaceWord,
    #[serde(rename = "SHUFFLE.ORDER")]
    ShuffleOrder,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::Original, Condition::ReplaceWord, Condition::ShuffleOrder];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Original => "ORIGINAL",
            Condition::ReplaceWord => "REPLACE.WORD",
            Condition::ShuffleOrder => "SHUFFLE.ORDER",
        }
    }

    /// Lowercase, hyphenated form used on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            Condition::Original => "original",
            Condition::ReplaceWord => "replace-word",
            Condition::ShuffleOrder => "shuffle-order",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| s.eq_ignore_ascii_case(c.slug()) || s.eq_ignore_ascii_case(c.label()))
            .ok_or_else(|| Error::invalid(format!("unknown condition {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbOptions {
    /// Treat PROPN like NOUN in REPLACE.WORD.
    pub include_propn: bool,
    /// Keep a sentence-final PUNCT token in place under SHUFFLE.ORDER.
    pub pin_final_punct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbReport {
    pub condition: Condition,
    pub tokens_total: u64,
    pub tokens_replaced: u64,
    pub replacement_rate: f64,
    pub seed: u64,
    #[serde(default)]
    pub domain: String,
}

fn is_replaceable(upos: &str, opts: &PerturbOptions) -> bool {
    matches!(upos, "NOUN" | "ADJ" | "ADV") || (opts.include_propn && upos == "PROPN")
}

/// Frequency-weighted draw from `candidates`.
fn weighted_pick<'a>(candidates: &[(&'a str, u64)], rng: &mut Stream) -> &'a str {
    let total: u64 = candidates.iter().map(|(_, c)| c).sum();
    let mut x = rng.gen_range(0..total);
    for (f, c) in candidates {
        if x < *c {
            return f;
        }
        x -= c;
    }
    unreachable!("draw below total weight")
}

/// REPLACE.WORD for one sentence.
///
/// NOUN, ADJ and ADV tokens (plus PROPN when enabled) and every VERB other
/// than the root verb are swapped for a different form with the same
/// (upos, xpos, bin), drawn in proportion to frequency. Tokens whose bin has
/// no other member stay as they are. Replaced tokens keep tags and
/// dependencies; their lemma is cleared.
pub fn replace_word(
    sentence: &AnnotatedSentence,
    table: &FrequencyTable,
    rng: &mut Stream,
    opts: &PerturbOptions,
) -> Result<(AnnotatedSentence, usize)> {
    if !sentence.is_tagged() {
        return Err(Error::Untagged(sentence.id.clone()));
    }
    let root = find_root(sentence).map(|(i, _)| i);
    let mut out = sentence.clone();
    let mut replaced = 0;
    for (i, tok) in out.tokens.iter_mut().enumerate() {
        let target = is_replaceable(&tok.upos, opts) || (tok.upos == VERB && Some(i) != root);
        if !target {
            continue;
        }
        let Some(bin) = table.bin_of_token(tok) else {
            continue;
        };
        let candidates = table.bin_candidates(&tok.upos, tok.fine_tag(), bin, &tok.form);
        if candidates.is_empty() {
            continue;
        }
        tok.form = weighted_pick(&candidates, rng).to_string();
        tok.lemma.clear();
        replaced += 1;
    }
    Ok((out, replaced))
}

/// SHUFFLE.ORDER for one sentence: a Fisher–Yates permutation
/// (for i from n-1 down to 1, swap i with a uniform j in 0..=i). Heads are
/// remapped so each token still points at the same governor.
pub fn shuffle_order(sentence: &AnnotatedSentence, rng: &mut Stream, opts: &PerturbOptions) -> AnnotatedSentence {
    let n = sentence.len();
    let pinned = opts.pin_final_punct && n > 0 && sentence.tokens[n - 1].upos == "PUNCT";
    let movable = if pinned { n - 1 } else { n };

    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..movable).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }

    let mut new_pos = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        new_pos[old] = new;
    }
    let mut out = sentence.clone();
    out.tokens = order
        .iter()
        .map(|&old| {
            let mut t = sentence.tokens[old].clone();
            t.head = t.head.map(|h| new_pos[h]);
            t
        })
        .collect();
    out
}

/// Applies `condition` to every sentence. Sentence `i` draws from the stream
/// `mix64(seed, i)`, so the output does not depend on thread scheduling.
pub fn perturb_corpus(
    corpus: &Corpus,
    condition: Condition,
    table: Option<&FrequencyTable>,
    seed: u64,
    opts: &PerturbOptions,
) -> Result<(Corpus, PerturbReport)> {
    let tokens_total = corpus.num_tokens() as u64;
    let (sentences, tokens_replaced) = match condition {
        Condition::Original => (corpus.sentences.clone(), 0),
        Condition::ShuffleOrder => {
            let s: Vec<AnnotatedSentence> = corpus
                .sentences
                .par_iter()
                .enumerate()
                .map(|(i, s)| shuffle_order(s, &mut rng::stream(seed, i as u64), opts))
                .collect();
            (s, 0)
        }
        Condition::ReplaceWord => {
            let table = table.ok_or_else(|| Error::invalid("REPLACE.WORD requires a frequency table"))?;
            let done: Vec<(AnnotatedSentence, usize)> = corpus
                .sentences
                .par_iter()
                .enumerate()
                .map(|(i, s)| replace_word(s, table, &mut rng::stream(seed, i as u64), opts))
                .collect::<Result<_>>()?;
            let replaced = done.iter().map(|(_, r)| *r as u64).sum();
            (done.into_iter().map(|(s, _)| s).collect(), replaced)
        }
    };
    let report = PerturbReport {
        condition,
        tokens_total,
        tokens_replaced,
        replacement_rate: if tokens_total == 0 {
            0.0
        } else {
            tokens_replaced as f64 / tokens_total as f64
        },
        seed,
        domain: corpus.domain.clone(),
    };
    Ok((
        Corpus {
            domain: corpus.domain.clone(),
            split: corpus.split,
            sentences,
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn tagged(id: &str, toks: &[(&str, &str, &str)]) -> AnnotatedSentence {
        AnnotatedSentence::new(id, toks.iter().map(|(f, u, x)| Token::tagged(*f, *u, *x)).collect()).unwrap()
    }

    fn stool_sentence() -> AnnotatedSentence {
        let toks = [
            ("You", "PRON", "PRP", 2, "nsubj"),
            ("can", "AUX", "MD", 2, "aux"),
            ("sit", "VERB", "VB", usize::MAX, "root"),
            ("out", "ADV", "RB", 2, "advmod"),
            ("here", "ADV", "RB", 2, "advmod"),
            ("by", "ADP", "IN", 6, "case"),
            ("me", "PRON", "PRP", 2, "obl"),
            ("on", "ADP", "IN", 10, "case"),
            ("the", "DET", "DT", 10, "det"),
            ("other", "ADJ", "JJ", 10, "amod"),
            ("stool", "NOUN", "NN", 2, "obl"),
            (".", "PUNCT", ".", 2, "punct"),
        ];
        let tokens = toks
            .iter()
            .map(|(f, u, x, h, d)| {
                let mut t = Token::tagged(*f, *u, *x);
                t.head = (*h != usize::MAX).then_some(*h);
                t.deprel = Some(d.to_string());
                t
            })
            .collect();
        AnnotatedSentence::new("ex1", tokens).unwrap()
    }

    fn stool_table() -> FrequencyTable {
        FrequencyTable::from_entries(vec![
            ("NOUN", "NN", "stool", 5),
            ("NOUN", "NN", "chair", 6),
            ("NOUN", "NN", "bench", 4),
            ("NOUN", "NN", "dog", 40),
            ("VERB", "VB", "sit", 9),
            ("VERB", "VB", "try", 10),
            ("ADJ", "JJ", "other", 3),
            ("ADV", "RB", "out", 20),
            ("ADV", "RB", "here", 17),
            ("ADV", "RB", "there", 35),
        ])
        .unwrap()
    }

    #[test]
    fn function_words_only_are_untouched() {
        let s = tagged("f", &[("you", "PRON", "PRP"), ("can", "AUX", "MD"), ("the", "DET", "DT"), (".", "PUNCT", ".")]);
        let table = FrequencyTable::from_entries(vec![("PRON", "PRP", "you", 3), ("PRON", "PRP", "we", 3)]).unwrap();
        let (out, n) = replace_word(&s, &table, &mut rng::stream(1, 0), &PerturbOptions::default()).unwrap();
        assert_eq!(out, s);
        assert_eq!(n, 0);
    }

    #[test]
    fn singleton_bin_is_kept() {
        let s = tagged("k", &[("other", "ADJ", "JJ")]);
        let (out, n) = replace_word(&s, &stool_table(), &mut rng::stream(1, 0), &PerturbOptions::default()).unwrap();
        assert_eq!(out.tokens[0].form, "other");
        assert_eq!(n, 0);
    }

    #[test]
    fn stool_example_keeps_root_and_respects_bins() {
        let s = stool_sentence();
        let table = stool_table();
        for seed in 0..50 {
            let (out, n) = replace_word(&s, &table, &mut rng::stream(seed, 0), &PerturbOptions::default()).unwrap();
            assert_eq!(out.len(), s.len());
            assert_eq!(out.tokens[2].form, "sit");
            // stool (5 -> bin 2) can only become chair (6) or bench (4)
            assert!(["chair", "bench"].contains(&out.tokens[10].form.as_str()));
            // out (20) and here (17) share bin 4; there (30) does not
            assert_eq!(out.tokens[3].form, "here");
            assert_eq!(out.tokens[4].form, "out");
            assert_eq!(n, 3);
            for (a, b) in s.tokens.iter().zip(&out.tokens) {
                assert_eq!((&a.upos, &a.xpos, a.head, &a.deprel), (&b.upos, &b.xpos, b.head, &b.deprel));
                if a.form != b.form {
                    assert_eq!(table.bin_of_token(a), table.bin_of_token(b));
                }
            }
        }
    }

    #[test]
    fn untagged_sentence_is_an_error() {
        let s = AnnotatedSentence::from_forms("u", &["a", "b"]).unwrap();
        let err = replace_word(&s, &stool_table(), &mut rng::stream(0, 0), &PerturbOptions::default()).unwrap_err();
        assert!(err.to_string().contains("requires tags"));
    }

    #[test]
    fn shuffle_single_token_is_identity() {
        let s = tagged("o", &[("hi", "INTJ", "UH")]);
        assert_eq!(shuffle_order(&s, &mut rng::stream(3, 0), &PerturbOptions::default()), s);
    }

    #[test]
    fn shuffle_keeps_multiset_and_heads() {
        let s = stool_sentence();
        for seed in 0..20 {
            let out = shuffle_order(&s, &mut rng::stream(seed, 0), &PerturbOptions::default());
            let mut a: Vec<_> = s.forms();
            let mut b: Vec<_> = out.forms();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            out.validate().unwrap();
            for t in &out.tokens {
                let orig = s.tokens.iter().find(|o| o.form == t.form && o.deprel == t.deprel).unwrap();
                assert_eq!(orig.head.map(|h| &s.tokens[h].form), t.head.map(|h| &out.tokens[h].form));
            }
        }
    }

    #[test]
    fn shuffle_is_reproducible() {
        let s = tagged("abc", &[("a", "X", "X"), ("b", "X", "X"), ("c", "X", "X")]);
        let a = shuffle_order(&s, &mut rng::stream(11, 0), &PerturbOptions::default());
        let b = shuffle_order(&s, &mut rng::stream(11, 0), &PerturbOptions::default());
        assert_eq!(a, b);
    }

    #[test]
    fn pinned_final_punct_stays_last() {
        let s = stool_sentence();
        let opts = PerturbOptions {
            pin_final_punct: true,
            ..Default::default()
        };
        for seed in 0..20 {
            let out = shuffle_order(&s, &mut rng::stream(seed, 0), &opts);
            assert_eq!(out.tokens.last().unwrap().form, ".");
        }
    }

    #[test]
    fn original_is_identity_and_replace_needs_table() {
        let c = Corpus::new("d", vec![stool_sentence()]).unwrap();
        let (out, rep) = perturb_corpus(&c, Condition::Original, None, 1, &PerturbOptions::default()).unwrap();
        assert_eq!(out, c);
        assert_eq!(rep.replacement_rate, 0.0);
        assert!(perturb_corpus(&c, Condition::ReplaceWord, None, 1, &PerturbOptions::default()).is_err());
        let (_, rep) = perturb_corpus(&c, Condition::ShuffleOrder, None, 1, &PerturbOptions::default()).unwrap();
        assert_eq!(rep.tokens_replaced, 0);
    }

    #[test]
    fn condition_names() {
        assert_eq!("replace-word".parse::<Condition>().unwrap(), Condition::ReplaceWord);
        assert_eq!("SHUFFLE.ORDER".parse::<Condition>().unwrap(), Condition::ShuffleOrder);
        assert!("scramble".parse::<Condition>().is_err());
        assert_eq!(serde_json::to_string(&Condition::ReplaceWord).unwrap(), "\"REPLACE.WORD\"");
    }
}
