//! Interpolated Kneser–Ney n-gram model.
//!
//! The highest order uses raw counts; lower orders use continuation counts
//! (the number of distinct left extensions of each n-gram type). Every order
//! interpolates with the one below, and order 1 with the uniform
//! distribution over the prediction vocabulary (all words, `</s>` and
//! `<unk>`; `<s>` is never predicted):
//!
//! ```text
//! P_k(w | h) = (max(c_k(h w) - D_k, 0) + D_k * N1+(h .) * P_{k-1}(w | h')) / c_k(h .)
//! ```
//!
//! Contexts never seen at order k pass straight through to order k-1.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ScoreRequest, SentenceScore, SentenceScorer};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

const BOS_ID: u32 = 0;
const EOS_ID: u32 = 1;
const UNK_ID: u32 = 2;

const FORMAT_HEADER: &str = "verbscope-ngram";
const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NGramConfig {
    pub order: usize,
    /// One absolute discount per order, lowest first. A single value is
    /// used for every order.
    pub discounts: Vec<f64>,
    /// Forms seen fewer than this many times map to `<unk>`.
    pub min_count_unk: u64,
}

impl NGramConfig {
    pub fn new(order: usize) -> Self {
        NGramConfig {
            order,
            discounts: vec![0.75],
            min_count_unk: 1,
        }
    }

    fn discount_vec(&self) -> Result<Vec<f64>> {
        let d = match self.discounts.len() {
            1 => vec![self.discounts[0]; self.order],
            n if n == self.order => self.discounts.clone(),
            n => {
                return Err(Error::invalid(format!(
                    "{n} discounts given for an order-{} model",
                    self.order
                )))
            }
        };
        if d.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::invalid("discounts must lie in (0, 1]"));
        }
        Ok(d)
    }
}

#[derive(Clone, Debug)]
pub struct NGramLM {
    order: usize,
    discounts: Vec<f64>,
    min_count_unk: u64,
    vocab: Vec<String>,
    index: HashMap<String, u32>,
    /// `grams[k-1]`: counts of k-grams (raw at the top order, continuation below).
    grams: Vec<HashMap<Box<[u32]>, u64>>,
    /// `contexts[k-1]`: (k-1)-gram context -> (summed count, distinct followers).
    contexts: Vec<HashMap<Box<[u32]>, (u64, u64)>>,
}

impl PartialEq for NGramLM {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.discounts == other.discounts
            && self.vocab == other.vocab
            && self.grams == other.grams
    }
}

fn reserved(w: &str) -> bool {
    w == BOS || w == EOS || w == UNK
}

impl NGramLM {
    pub fn train(corpus: &Corpus, cfg: &NGramConfig) -> Result<Self> {
        if cfg.order < 1 {
            return Err(Error::invalid("n-gram order must be at least 1"));
        }
        let discounts = cfg.discount_vec()?;
        if corpus.num_tokens() == 0 {
            return Err(Error::EmptyCorpus);
        }

        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for t in corpus.sentences.iter().flat_map(|s| &s.tokens) {
            *freq.entry(t.form.as_str()).or_default() += 1;
        }
        let mut vocab: Vec<String> = vec![BOS.into(), EOS.into(), UNK.into()];
        vocab.extend(
            freq.iter()
                .filter(|(w, &c)| c >= cfg.min_count_unk && !reserved(w))
                .map(|(w, _)| w.to_string()),
        );
        let index = vocab.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();

        let mut lm = NGramLM {
            order: cfg.order,
            discounts,
            min_count_unk: cfg.min_count_unk,
            vocab,
            index,
            grams: Vec::new(),
            contexts: Vec::new(),
        };

        let n = cfg.order;
        let mut top: HashMap<Box<[u32]>, u64> = HashMap::new();
        for s in &corpus.sentences {
            let ids = lm.padded(s.tokens.iter().map(|t| t.form.as_str()));
            for i in (n - 1)..ids.len() {
                *top.entry(ids[i + 1 - n..=i].into()).or_default() += 1;
            }
        }
        lm.finish(top);
        Ok(lm)
    }

    fn id(&self, w: &str) -> u32 {
        self.index.get(w).copied().filter(|&i| i > UNK_ID).unwrap_or(UNK_ID)
    }

    /// `order - 1` BOS ids, the tokens, then EOS.
    fn padded<'a>(&self, tokens: impl Iterator<Item = &'a str>) -> Vec<u32> {
        let mut ids = vec![BOS_ID; self.order - 1];
        ids.extend(tokens.map(|w| self.id(w)));
        ids.push(EOS_ID);
        ids
    }

    /// Derives continuation counts and context totals from top-order counts.
    fn finish(&mut self, top: HashMap<Box<[u32]>, u64>) {
        let n = self.order;
        let mut grams: Vec<HashMap<Box<[u32]>, u64>> = vec![HashMap::new(); n];
        grams[n - 1] = top;
        for k in (1..n).rev() {
            let mut cont: HashMap<Box<[u32]>, u64> = HashMap::new();
            for g in grams[k].keys() {
                *cont.entry(g[1..].into()).or_default() += 1;
            }
            grams[k - 1] = cont;
        }
        let contexts = grams
            .iter()
            .map(|m| {
                let mut ctx: HashMap<Box<[u32]>, (u64, u64)> = HashMap::new();
                for (g, &c) in m {
                    let e = ctx.entry(g[..g.len() - 1].into()).or_default();
                    e.0 += c;
                    e.1 += 1;
                }
                ctx
            })
            .collect();
        self.grams = grams;
        self.contexts = contexts;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    /// Size of the prediction vocabulary (words, `</s>`, `<unk>`).
    pub fn vocab_size(&self) -> usize {
        self.vocab.len() - 1
    }

    /// The prediction vocabulary, `</s>` and `<unk>` first.
    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.vocab[1..].iter().map(String::as_str)
    }

    fn prob_ids(&self, k: usize, ctx: &[u32], w: u32) -> f64 {
        debug_assert_eq!(ctx.len(), k - 1);
        let lower = if k == 1 {
            1.0 / self.vocab_size() as f64
        } else {
            self.prob_ids(k - 1, &ctx[1..], w)
        };
        let Some(&(total, distinct)) = self.contexts[k - 1].get(ctx) else {
            return lower;
        };
        let mut key = Vec::with_capacity(k);
        key.extend_from_slice(ctx);
        key.push(w);
        let c = self.grams[k - 1].get(key.as_slice()).copied().unwrap_or(0) as f64;
        let d = self.discounts[k - 1];
        ((c - d).max(0.0) + d * distinct as f64 * lower) / total as f64
    }

    /// `P(word | context)`, where `context` holds the preceding words (only
    /// the last `order - 1` are used; shorter contexts are BOS-padded).
    pub fn probability(&self, context: &[&str], word: &str) -> f64 {
        let n = self.order;
        let mut ctx = vec![BOS_ID; (n - 1).saturating_sub(context.len())];
        let skip = context.len().saturating_sub(n - 1);
        ctx.extend(context[skip..].iter().map(|w| if *w == BOS { BOS_ID } else { self.id(w) }));
        let w = if word == EOS { EOS_ID } else { self.id(word) };
        self.prob_ids(n, &ctx, w)
    }

    /// Contexts observed at order `k` (length `k - 1`), in sorted order.
    pub fn observed_contexts(&self, k: usize) -> Vec<Vec<&str>> {
        let mut out: Vec<Vec<&str>> = self.contexts[k - 1]
            .keys()
            .map(|c| c.iter().map(|&i| self.vocab[i as usize].as_str()).collect())
            .collect();
        out.sort();
        out
    }

    /// Interpolated probability at a specific order for an observed context.
    pub fn probability_at_order(&self, k: usize, context: &[&str], word: &str) -> f64 {
        let ctx: Vec<u32> = context
            .iter()
            .map(|w| if *w == BOS { BOS_ID } else { self.id(w) })
            .collect();
        let w = if word == EOS { EOS_ID } else { self.id(word) };
        self.prob_ids(k, &ctx, w)
    }

    /// Sum of `ln P` over the tokens and the closing `</s>`.
    pub fn logprob<S: AsRef<str>>(&self, tokens: &[S]) -> (f64, usize) {
        let ids = self.padded(tokens.iter().map(|t| t.as_ref()));
        let n = self.order;
        let mut total = 0.0;
        for i in (n - 1)..ids.len() {
            total += self.prob_ids(n, &ids[i + 1 - n..i], ids[i]).ln();
        }
        (total, tokens.len() + 1)
    }

    pub fn score(&self, sentence_id: &str, tokens: &[String]) -> SentenceScore {
        let (logprob, num_tokens) = self.logprob(tokens);
        SentenceScore {
            sentence_id: sentence_id.to_string(),
            logprob,
            num_tokens,
            scorer_id: self.scorer_id(),
            checkpoint: None,
        }
    }

    /// Per-token perplexity over a corpus (EOS included).
    pub fn perplexity(&self, corpus: &Corpus) -> f64 {
        let (lp, n) = corpus
            .sentences
            .iter()
            .map(|s| self.logprob(&s.forms()))
            .fold((0.0, 0usize), |(a, b), (lp, n)| (a + lp, b + n));
        (-lp / n.max(1) as f64).exp()
    }

    /// Sorted-text layout:
    ///
    /// ```text
    /// verbscope-ngram<TAB>1
    /// order<TAB>N
    /// discounts<TAB>D1<TAB>...<TAB>DN
    /// min_count_unk<TAB>M
    /// vocab<TAB>V          followed by V words, one per line (reserved symbols omitted)
    /// ngrams<TAB>G         followed by G lines: w1<TAB>...<TAB>wN<TAB>count, sorted
    /// ```
    ///
    /// Only top-order counts are stored; lower orders are re-derived on load.
    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_HEADER}\t{FORMAT_VERSION}\n");
        out.push_str(&format!("order\t{}\n", self.order));
        let ds: Vec<String> = self.discounts.iter().map(|d| d.to_string()).collect();
        out.push_str(&format!("discounts\t{}\n", ds.join("\t")));
        out.push_str(&format!("min_count_unk\t{}\n", self.min_count_unk));
        out.push_str(&format!("vocab\t{}\n", self.vocab.len() - 3));
        for w in &self.vocab[3..] {
            out.push_str(w);
            out.push('\n');
        }
        let mut lines: Vec<(Vec<&str>, u64)> = self.grams[self.order - 1]
            .iter()
            .map(|(g, &c)| (g.iter().map(|&i| self.vocab[i as usize].as_str()).collect(), c))
            .collect();
        lines.sort();
        out.push_str(&format!("ngrams\t{}\n", lines.len()));
        for (ws, c) in lines {
            out.push_str(&ws.join("\t"));
            out.push_str(&format!("\t{c}\n"));
        }
        out
    }

    pub fn from_text(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let err = |line: usize, msg: &str| Error::Parse {
            origin: origin.to_string(),
            line,
            msg: msg.to_string(),
        };
        let mut next = |key: &str| -> Result<(usize, Vec<String>)> {
            let (n, l) = lines.next().ok_or_else(|| err(0, "unexpected end of model file"))?;
            let cols: Vec<String> = l.split('\t').map(str::to_string).collect();
            if !key.is_empty() && cols[0] != key {
                return Err(err(n, &format!("expected {key:?}")));
            }
            Ok((n, cols))
        };
        let (n, head) = next(FORMAT_HEADER)?;
        if head.get(1).map(String::as_str) != Some("1") {
            return Err(err(n, "unsupported model version"));
        }
        let parse_usize = |(n, cols): (usize, Vec<String>)| -> Result<usize> {
            cols.get(1).and_then(|v| v.parse().ok()).ok_or_else(|| err(n, "expected an integer"))
        };
        let order = parse_usize(next("order")?)?;
        let (n, dcols) = next("discounts")?;
        let discounts: Vec<f64> = dcols[1..]
            .iter()
            .map(|d| d.parse().map_err(|_| err(n, "bad discount")))
            .collect::<Result<_>>()?;
        let min_count_unk = parse_usize(next("min_count_unk")?)? as u64;
        let nvocab = parse_usize(next("vocab")?)?;
        let mut vocab: Vec<String> = vec![BOS.into(), EOS.into(), UNK.into()];
        for _ in 0..nvocab {
            let (_, cols) = next("")?;
            vocab.push(cols[0].clone());
        }
        let cfg = NGramConfig {
            order,
            discounts,
            min_count_unk,
        };
        if order < 1 {
            return Err(err(0, "order must be at least 1"));
        }
        let discounts = cfg.discount_vec()?;
        let index: HashMap<String, u32> = vocab.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let ngrams = parse_usize(next("ngrams")?)?;
        let mut top = HashMap::with_capacity(ngrams);
        for _ in 0..ngrams {
            let (n, cols) = next("")?;
            if cols.len() != order + 1 {
                return Err(err(n, "wrong number of columns for n-gram line"));
            }
            let ids: Vec<u32> = cols[..order]
                .iter()
                .map(|w| index.get(w).copied().ok_or_else(|| err(n, "word not in vocabulary")))
                .collect::<Result<_>>()?;
            let c: u64 = cols[order].parse().map_err(|_| err(n, "bad count"))?;
            top.insert(ids.into_boxed_slice(), c);
        }
        let mut lm = NGramLM {
            order,
            discounts,
            min_count_unk,
            vocab,
            index,
            grams: Vec::new(),
            contexts: Vec::new(),
        };
        lm.finish(top);
        Ok(lm)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, &path.display().to_string())
    }
}

impl SentenceScorer for NGramLM {
    fn scorer_id(&self) -> String {
        format!("kn{}", self.order)
    }

    fn score_batch(&self, requests: &[ScoreRequest]) -> Result<Vec<SentenceScore>> {
        Ok(requests.par_iter().map(|r| self.score(&r.id, &r.tokens)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::AnnotatedSentence;

    fn corpus(lines: &[&str]) -> Corpus {
        let sents = lines
            .iter()
            .enumerate()
            .map(|(i, l)| AnnotatedSentence::from_forms(format!("s{i}"), &l.split(' ').collect::<Vec<_>>()).unwrap())
            .collect();
        Corpus::new("t", sents).unwrap()
    }

    fn sum_over_vocab(lm: &NGramLM, k: usize, ctx: &[&str]) -> f64 {
        lm.targets().map(|w| lm.probability_at_order(k, ctx, w)).sum()
    }

    #[test]
    fn unigram_distribution_sums_to_one() {
        let lm = NGramLM::train(&corpus(&["a a b"]), &NGramConfig::new(1)).unwrap();
        let targets: Vec<&str> = lm.targets().collect();
        assert_eq!(targets, vec![EOS, UNK, "a", "b"]);
        // counts a=2, b=1, </s>=1; N=4, 3 types, D=0.75, |V|=4
        let pa = lm.probability(&[], "a");
        assert!((pa - (1.25 + 0.75 * 3.0 * 0.25) / 4.0).abs() < 1e-15);
        assert!((sum_over_vocab(&lm, 1, &[]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_zero_and_empty_corpus_are_errors() {
        assert!(NGramLM::train(&corpus(&["a"]), &NGramConfig::new(0)).is_err());
        assert!(matches!(NGramLM::train(&Corpus::empty("e"), &NGramConfig::new(3)), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn training_is_deterministic() {
        let c = corpus(&["you want it", "you want the ball", "i want it"]);
        let a = NGramLM::train(&c, &NGramConfig::new(3)).unwrap();
        let b = NGramLM::train(&c, &NGramConfig::new(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn empty_sentence_scores_only_eos() {
        let lm = NGramLM::train(&corpus(&["you want it", "go"]), &NGramConfig::new(3)).unwrap();
        let (lp, n) = lm.logprob::<&str>(&[]);
        assert_eq!(n, 1);
        assert_eq!(lp, lm.probability(&[], EOS).ln());
    }

    #[test]
    fn unseen_word_scores_like_unk() {
        let lm = NGramLM::train(&corpus(&["you want it", "you want the ball"]), &NGramConfig::new(3)).unwrap();
        assert_eq!(lm.logprob(&["you", "want", "zebra"]), lm.logprob(&["you", "want", UNK]));
    }

    #[test]
    fn min_count_maps_rare_forms_to_unk() {
        let cfg = NGramConfig {
            min_count_unk: 2,
            ..NGramConfig::new(2)
        };
        let lm = NGramLM::train(&corpus(&["a a b"]), &cfg).unwrap();
        assert_eq!(lm.targets().collect::<Vec<_>>(), vec![EOS, UNK, "a"]);
        assert!((sum_over_vocab(&lm, 2, &["a"]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hand_accumulated_trigram_score() {
        // corpus "a b" and "a c": padded <s> <s> a b </s>, <s> <s> a c </s>
        let lm = NGramLM::train(&corpus(&["a b", "a c"]), &NGramConfig::new(3)).unwrap();
        let d = 0.75;
        let v = 5.0; // </s> <unk> a b c

        // unigram continuation counts: left extensions of bigram types
        // bigram types: (<s>,a) (a,b) (b,</s>) (a,c) (c,</s>)
        // N1+(. a)=1 N1+(. b)=1 N1+(. c)=1 N1+(. </s>)=2 ; total 5, 4 types
        let p1 = |cont: f64| ((cont - d).max(0.0) + d * 4.0 / v) / 5.0;
        // bigram continuation counts from trigram types
        // trigrams: (<s>,<s>,a)x2 (<s>,a,b) (a,b,</s>) (<s>,a,c) (a,c,</s>)
        // bigram cont: (<s>,a)=1 (a,b)=1 (b,</s>)=1 (a,c)=1 (c,</s>)=1
        // context a: total 2, distinct 2; context <s>: total 1, distinct 1
        let p2_a = |cont: f64, low: f64| ((cont - d).max(0.0) + d * 2.0 * low) / 2.0;
        let p2_s = |cont: f64, low: f64| ((cont - d).max(0.0) + d * 1.0 * low) / 1.0;
        // trigram raw: context (<s>,<s>): total 2 distinct 1; (<s>,a): total 2 distinct 2
        // (a,b): total 1 distinct 1
        let p_a = ((2.0 - d) + d * 1.0 * p2_s(1.0, p1(1.0))) / 2.0;
        let p_b = ((1.0 - d) + d * 2.0 * p2_a(1.0, p1(1.0))) / 2.0;
        // context (a,b) -> </s>; bigram context b: total 1 distinct 1
        let p_eos = ((1.0 - d) + d * 1.0 * (((1.0 - d) + d * 1.0 * p1(2.0)) / 1.0)) / 1.0;
        let expected = p_a.ln() + p_b.ln() + p_eos.ln();
        let (lp, n) = lm.logprob(&["a", "b"]);
        assert_eq!(n, 3);
        assert!((lp - expected).abs() < 1e-12, "{lp} vs {expected}");
    }

    #[test]
    fn normalization_for_every_observed_context() {
        let lm = NGramLM::train(
            &corpus(&["you want it", "you want the ball", "i want it", "the ball is red", "you see it"]),
            &NGramConfig::new(3),
        )
        .unwrap();
        for k in 1..=3 {
            for ctx in lm.observed_contexts(k) {
                let s = sum_over_vocab(&lm, k, &ctx);
                assert!((s - 1.0).abs() < 1e-9, "order {k} ctx {ctx:?} sums to {s}");
            }
        }
    }

    #[test]
    fn beats_uniform_on_training_data() {
        let c = corpus(&["you want it", "you want the ball", "i want it", "the ball is red"]);
        let lm = NGramLM::train(&c, &NGramConfig::new(3)).unwrap();
        assert!(lm.perplexity(&c) <= lm.vocab_size() as f64);
    }

    #[test]
    fn text_round_trip() {
        let c = corpus(&["you want it", "you want the ball", "i want it"]);
        let lm = NGramLM::train(&c, &NGramConfig::new(3)).unwrap();
        let back = NGramLM::from_text(&lm.to_text(), "mem").unwrap();
        assert_eq!(back, lm);
        assert_eq!(back.logprob(&["you", "want", "it"]), lm.logprob(&["you", "want", "it"]));
    }

    #[test]
    fn doubling_the_corpus_keeps_argmax() {
        let lines = ["you want it", "you want the ball", "i want it", "you see it"];
        let once = NGramLM::train(&corpus(&lines), &NGramConfig::new(2)).unwrap();
        let doubled: Vec<&str> = lines.iter().chain(lines.iter()).copied().collect();
        let twice = NGramLM::train(&corpus(&doubled), &NGramConfig::new(2)).unwrap();
        for ctx in ["you", "want", "i"] {
            let best = |lm: &NGramLM| {
                lm.targets()
                    .map(|w| (lm.probability(&[ctx], w), w.to_string()))
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .unwrap()
                    .1
            };
            assert_eq!(best(&once), best(&twice));
        }
    }
}
