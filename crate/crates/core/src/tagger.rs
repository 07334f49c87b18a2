//! Averaged-perceptron POS tagger predicting joint (UPOS, XPOS) tags, and
//! root-verb lookup.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;

use crate::corpus::{AnnotatedSentence, Corpus, ROOT_DEPREL, VERB};
use crate::error::{Error, Result};
use crate::rng;

const FORMAT_HEADER: &str = "verbscope-tagger";
const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Default)]
struct Param {
    weight: f64,
    total: f64,
    stamp: u64,
}

/// A trained tagger. Weights are the averaged perceptron weights.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggerModel {
    /// (upos, xpos) pairs in sorted order, with training counts.
    tags: Vec<((String, String), u64)>,
    fallback: usize,
    weights: HashMap<String, Vec<(usize, f64)>>,
}

fn features(forms: &[&str], i: usize, prev: &str, prev2: &str) -> Vec<String> {
    let form = forms[i];
    let lower = form.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let mut f = Vec::with_capacity(14);
    f.push("bias".to_string());
    f.push(format!("w={form}"));
    f.push(format!("lw={lower}"));
    for k in 1..=3 {
        if chars.len() >= k {
            f.push(format!("s{k}={}", chars[chars.len() - k..].iter().collect::<String>()));
            f.push(format!("p{k}={}", chars[..k].iter().collect::<String>()));
        }
    }
    f.push(format!("-1w={}", if i == 0 { "<s>" } else { forms[i - 1] }));
    f.push(format!("+1w={}", forms.get(i + 1).copied().unwrap_or("</s>")));
    f.push(format!("-1t={prev}"));
    f.push(format!("-2t-1t={prev2}+{prev}"));
    f
}

fn tag_label(t: &(String, String)) -> String {
    format!("{}|{}", t.0, t.1)
}

struct Trainer {
    ntags: usize,
    params: HashMap<String, Vec<Param>>,
    instances: u64,
}

impl Trainer {
    fn scores(&self, feats: &[String]) -> Vec<f64> {
        let mut s = vec![0.0; self.ntags];
        for f in feats {
            if let Some(ps) = self.params.get(f) {
                for (t, p) in ps.iter().enumerate() {
                    s[t] += p.weight;
                }
            }
        }
        s
    }

    fn bump(&mut self, feat: &str, tag: usize, delta: f64) {
        let now = self.instances;
        let ntags = self.ntags;
        let p = &mut self
            .params
            .entry(feat.to_string())
            .or_insert_with(|| vec![Param::default(); ntags])[tag];
        p.total += (now - p.stamp) as f64 * p.weight;
        p.stamp = now;
        p.weight += delta;
    }

    fn update(&mut self, truth: usize, guess: usize, feats: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        for f in feats {
            self.bump(f, truth, 1.0);
            self.bump(f, guess, -1.0);
        }
    }

    fn averaged(self) -> HashMap<String, Vec<(usize, f64)>> {
        let n = self.instances.max(1) as f64;
        let mut out = HashMap::new();
        for (feat, ps) in self.params {
            let ws: Vec<(usize, f64)> = ps
                .iter()
                .enumerate()
                .filter_map(|(t, p)| {
                    let total = p.total + (self.instances - p.stamp) as f64 * p.weight;
                    let avg = total / n;
                    (avg != 0.0).then_some((t, avg))
                })
                .collect();
            if !ws.is_empty() {
                out.insert(feat, ws);
            }
        }
        out
    }
}

fn argmax(scores: &[f64], fallback: usize) -> usize {
    let mut best = fallback;
    for (t, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = t;
        }
    }
    best
}

/// Trains on every token of `corpus`. Sentence order per epoch is a seeded
/// shuffle, so equal seeds give identical models.
pub fn train_tagger(corpus: &Corpus, epochs: usize, seed: u64) -> Result<TaggerModel> {
    let mut counts: HashMap<(String, String), u64> = HashMap::new();
    for s in &corpus.sentences {
        if !s.is_tagged() {
            return Err(Error::Untagged(s.id.clone()));
        }
        for t in &s.tokens {
            *counts.entry((t.upos.clone(), t.xpos.clone())).or_default() += 1;
        }
    }
    if counts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut tags: Vec<((String, String), u64)> = counts.into_iter().collect();
    tags.sort();
    let index: HashMap<&(String, String), usize> = tags.iter().enumerate().map(|(i, (t, _))| (t, i)).collect();
    let fallback = most_frequent(&tags);

    let gold: Vec<Vec<usize>> = corpus
        .sentences
        .iter()
        .map(|s| {
            s.tokens
                .iter()
                .map(|t| index[&(t.upos.clone(), t.xpos.clone())])
                .collect()
        })
        .collect();

    let mut trainer = Trainer {
        ntags: tags.len(),
        params: HashMap::new(),
        instances: 0,
    };
    let labels: Vec<String> = tags.iter().map(|(t, _)| tag_label(t)).collect();
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    for epoch in 0..epochs {
        order.shuffle(&mut rng::stream(seed, epoch as u64));
        for &si in &order {
            let forms = corpus.sentences[si].forms();
            let (mut prev, mut prev2) = ("<s>".to_string(), "<s>".to_string());
            for (i, &truth) in gold[si].iter().enumerate() {
                let feats = features(&forms, i, &prev, &prev2);
                let guess = argmax(&trainer.scores(&feats), fallback);
                trainer.update(truth, guess, &feats);
                prev2 = std::mem::replace(&mut prev, labels[guess].clone());
            }
        }
    }

    Ok(TaggerModel {
        tags,
        fallback,
        weights: trainer.averaged(),
    })
}

fn most_frequent(tags: &[((String, String), u64)]) -> usize {
    let mut best = 0;
    for (i, (_, c)) in tags.iter().enumerate() {
        if *c > tags[best].1 {
            best = i;
        }
    }
    best
}

impl TaggerModel {
    pub fn tag_set(&self) -> impl Iterator<Item = &(String, String)> {
        self.tags.iter().map(|(t, _)| t)
    }

    pub fn fallback_tag(&self) -> &(String, String) {
        &self.tags[self.fallback].0
    }

    pub fn num_weights(&self) -> usize {
        self.weights.values().map(Vec::len).sum()
    }

    fn predict(&self, forms: &[&str]) -> Vec<usize> {
        let labels: Vec<String> = self.tags.iter().map(|(t, _)| tag_label(t)).collect();
        let (mut prev, mut prev2) = ("<s>".to_string(), "<s>".to_string());
        let mut out = Vec::with_capacity(forms.len());
        for i in 0..forms.len() {
            let mut scores = vec![0.0; self.tags.len()];
            for f in features(forms, i, &prev, &prev2) {
                if let Some(ws) = self.weights.get(&f) {
                    for &(t, w) in ws {
                        scores[t] += w;
                    }
                }
            }
            let best = argmax(&scores, self.fallback);
            prev2 = std::mem::replace(&mut prev, labels[best].clone());
            out.push(best);
        }
        out
    }

    /// Returns a copy of `sentence` with UPOS and XPOS overwritten for every
    /// token. Forms, lemmas and dependencies are untouched.
    pub fn tag(&self, sentence: &AnnotatedSentence) -> AnnotatedSentence {
        let forms = sentence.forms();
        let mut out = sentence.clone();
        for (tok, t) in out.tokens.iter_mut().zip(self.predict(&forms)) {
            let (u, x) = &self.tags[t].0;
            tok.upos = u.clone();
            tok.xpos = x.clone();
        }
        out
    }

    pub fn tag_corpus(&self, corpus: &Corpus) -> Corpus {
        use rayon::prelude::*;
        Corpus {
            domain: corpus.domain.clone(),
            split: corpus.split,
            sentences: corpus.sentences.par_iter().map(|s| self.tag(s)).collect(),
        }
    }

    /// Token-level accuracy against the gold tags in `corpus`.
    pub fn accuracy(&self, corpus: &Corpus) -> f64 {
        let (mut right, mut total) = (0usize, 0usize);
        for s in &corpus.sentences {
            for (gold, pred) in s.tokens.iter().zip(&self.tag(s).tokens) {
                total += 1;
                right += usize::from(gold.upos == pred.upos && gold.xpos == pred.xpos);
            }
        }
        if total == 0 {
            0.0
        } else {
            right as f64 / total as f64
        }
    }

    /// Versioned text layout:
    ///
    /// ```text
    /// verbscope-tagger<TAB>1
    /// tag<TAB>UPOS|XPOS<TAB>count        (one per tag, sorted)
    /// feature<TAB>UPOS|XPOS<TAB>weight   (sorted by feature, then tag)
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_HEADER}\t{FORMAT_VERSION}\n");
        for (t, c) in &self.tags {
            out.push_str(&format!("tag\t{}\t{c}\n", tag_label(t)));
        }
        let mut lines: Vec<(String, String, f64)> = self
            .weights
            .iter()
            .flat_map(|(f, ws)| ws.iter().map(move |&(t, w)| (f.clone(), tag_label(&self.tags[t].0), w)))
            .collect();
        lines.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for (f, t, w) in lines {
            out.push_str(&format!("{f}\t{t}\t{w}\n"));
        }
        out
    }

    pub fn from_text(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::Parse {
            origin: origin.to_string(),
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == format!("{FORMAT_HEADER}\t{FORMAT_VERSION}") => {}
            _ => return Err(err(1, "not a verbscope tagger model (version 1)")),
        }
        let mut tags = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut weights: HashMap<String, Vec<(usize, f64)>> = HashMap::new();
        for (i, line) in lines {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(err(i + 1, "expected 3 tab-separated columns"));
            }
            if cols[0] == "tag" && weights.is_empty() {
                let (u, x) = cols[1].split_once('|').ok_or_else(|| err(i + 1, "tag must be UPOS|XPOS"))?;
                let c: u64 = cols[2].parse().map_err(|_| err(i + 1, "bad tag count"))?;
                index.insert(cols[1].to_string(), tags.len());
                tags.push(((u.to_string(), x.to_string()), c));
                continue;
            }
            let t = *index.get(cols[1]).ok_or_else(|| err(i + 1, "unknown tag"))?;
            let w: f64 = cols[2].parse().map_err(|_| err(i + 1, "bad weight"))?;
            if !w.is_finite() {
                return Err(err(i + 1, "weight is not finite"));
            }
            weights.entry(cols[0].to_string()).or_default().push((t, w));
        }
        if tags.is_empty() {
            return Err(err(1, "model has an empty tag set"));
        }
        let fallback = most_frequent(&tags);
        Ok(TaggerModel {
            tags,
            fallback,
            weights,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, &path.display().to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSource {
    /// Taken from dependency annotation.
    Parsed,
    /// Leftmost-verb fallback for unparsed input.
    Heuristic,
}

/// Root verb of a sentence. With dependency annotation this is the `root`
/// token if it is a VERB; without, the leftmost VERB token.
pub fn find_root(sentence: &AnnotatedSentence) -> Option<(usize, RootSource)> {
    if sentence.has_dependencies() {
        sentence
            .tokens
            .iter()
            .position(|t| t.deprel.as_deref() == Some(ROOT_DEPREL))
            .filter(|&i| sentence.tokens[i].upos == VERB)
            .map(|i| (i, RootSource::Parsed))
    } else {
        // The leftmost verb is never preceded by another verb in its clause.
        sentence
            .tokens
            .iter()
            .position(|t| t.upos == VERB)
            .map(|i| (i, RootSource::Heuristic))
    }
}

pub fn heuristic_root(sentence: &AnnotatedSentence) -> Option<usize> {
    find_root(sentence).map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn sent(id: &str, toks: &[(&str, &str, &str)]) -> AnnotatedSentence {
        AnnotatedSentence::new(id, toks.iter().map(|(f, u, x)| Token::tagged(*f, *u, *x)).collect()).unwrap()
    }

    fn toy() -> Corpus {
        Corpus::new(
            "toy",
            vec![
                sent("a", &[("the", "DET", "DT"), ("cat", "NOUN", "NN"), ("sat", "VERB", "VBD")]),
                sent("b", &[("a", "DET", "DT"), ("dog", "NOUN", "NN"), ("ran", "VERB", "VBD")]),
                sent("c", &[("the", "DET", "DT"), ("dogs", "NOUN", "NNS"), ("run", "VERB", "VBP")]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn memorizes_unambiguous_corpus() {
        let c = toy();
        let m = train_tagger(&c, 5, 1).unwrap();
        assert_eq!(m.accuracy(&c), 1.0);
    }

    #[test]
    fn equal_seeds_give_identical_models() {
        let c = toy();
        let a = train_tagger(&c, 3, 9).unwrap().to_text();
        let b = train_tagger(&c, 3, 9).unwrap().to_text();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_epochs_fall_back_to_most_frequent_tag() {
        let mut c = toy();
        c.sentences.push(sent("d", &[("the", "DET", "DT"), ("the", "DET", "DT")]));
        let m = train_tagger(&c, 0, 1).unwrap();
        assert_eq!(m.num_weights(), 0);
        let s = AnnotatedSentence::from_forms("x", &["zebra", "eats"]).unwrap();
        for t in m.tag(&s).tokens {
            assert_eq!((t.upos.as_str(), t.xpos.as_str()), ("DET", "DT"));
        }
    }

    #[test]
    fn tagging_overwrites_tags_only() {
        let c = toy();
        let m = train_tagger(&c, 5, 1).unwrap();
        let mut s = sent("z", &[("the", "X", "X"), ("cat", "X", "X"), ("sat", "X", "X")]);
        s.tokens[0].lemma = "the".into();
        let out = m.tag(&s);
        assert_eq!(out.forms(), s.forms());
        assert_eq!(out.tokens[0].lemma, "the");
        assert_eq!(out.tokens[1].upos, "NOUN");
    }

    #[test]
    fn untagged_training_corpus_is_rejected() {
        let c = Corpus::new("raw", vec![AnnotatedSentence::from_forms("a", &["hi"]).unwrap()]).unwrap();
        assert!(matches!(train_tagger(&c, 1, 1), Err(Error::Untagged(_))));
    }

    #[test]
    fn model_text_round_trip() {
        let m = train_tagger(&toy(), 4, 2).unwrap();
        let back = TaggerModel::from_text(&m.to_text(), "mem").unwrap();
        assert_eq!(back.to_text(), m.to_text());
        assert!(TaggerModel::from_text("garbage", "mem").is_err());
    }

    #[test]
    fn root_rules() {
        let mut s = sent("p", &[("you", "PRON", "PRP"), ("sit", "VERB", "VBP")]);
        s.tokens[0].head = Some(1);
        s.tokens[0].deprel = Some("nsubj".into());
        s.tokens[1].deprel = Some("root".into());
        assert_eq!(find_root(&s), Some((1, RootSource::Parsed)));

        let mut cop = sent("q", &[("it", "PRON", "PRP"), ("is", "AUX", "VBZ"), ("toy", "NOUN", "NN")]);
        cop.tokens[2].deprel = Some("root".into());
        cop.tokens[0].deprel = Some("nsubj".into());
        cop.tokens[0].head = Some(2);
        assert_eq!(heuristic_root(&cop), None);

        let raw = AnnotatedSentence::from_forms("r", &["you", "sit"]).unwrap();
        assert_eq!(heuristic_root(&raw), None);

        let unparsed = sent("u", &[("you", "PRON", "PRP"), ("want", "VERB", "VBP"), ("to", "PART", "TO"), ("go", "VERB", "VB")]);
        assert_eq!(find_root(&unparsed), Some((1, RootSource::Heuristic)));
    }
}
