//! Annotated corpus types and the frequency-bin table shared by the
//! perturbation and pair-generation stages.
//!
//! Indices are 0-based everywhere in memory. CoNLL-U's 1-based heads are
//! converted when reading and writing (see [`crate::ingest`]).

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag used for tokens that carry no part-of-speech annotation.
pub const UNK_TAG: &str = "UNK";

pub const VERB: &str = "VERB";
pub const ROOT_DEPREL: &str = "root";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub form: String,
    /// Empty when unknown.
    pub lemma: String,
    pub upos: String,
    /// Empty when unknown; see [`Token::fine_tag`].
    pub xpos: String,
    pub head: Option<usize>,
    pub deprel: Option<String>,
}

impl Token {
    /// A bare token with no annotation beyond its form.
    pub fn raw(form: impl Into<String>) -> Self {
        Token {
            form: form.into(),
            lemma: String::new(),
            upos: UNK_TAG.to_string(),
            xpos: UNK_TAG.to_string(),
            head: None,
            deprel: None,
        }
    }

    pub fn tagged(form: impl Into<String>, upos: impl Into<String>, xpos: impl Into<String>) -> Self {
        Token {
            upos: upos.into(),
            xpos: xpos.into(),
            ..Token::raw(form)
        }
    }

    /// The fine-grained tag, falling back to the coarse tag when no XPOS
    /// is available (degraded raw-text mode).
    pub fn fine_tag(&self) -> &str {
        if self.xpos.is_empty() {
            &self.upos
        } else {
            &self.xpos
        }
    }

    pub fn is_tagged(&self) -> bool {
        !self.upos.is_empty() && self.upos != UNK_TAG
    }

    /// Lemma if annotated, else the lowercased form.
    pub fn lemma_or_form(&self) -> String {
        if self.lemma.is_empty() {
            self.form.to_lowercase()
        } else {
            self.lemma.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub id: String,
    /// Where the sentence came from, free text.
    pub source: String,
    /// Comment lines other than `sent_id`, `source` and `text`, without the
    /// leading `# `.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
}

impl AnnotatedSentence {
    /// Builds a sentence and checks its structural invariants.
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Result<Self> {
        let s = AnnotatedSentence {
            id: id.into(),
            source: String::new(),
            comments: Vec::new(),
            tokens,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_forms(id: impl Into<String>, forms: &[&str]) -> Result<Self> {
        Self::new(id, forms.iter().map(|f| Token::raw(*f)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.tokens.is_empty() {
            return Err(Error::invalid(format!("sentence {} has no tokens", self.id)));
        }
        let n = self.tokens.len();
        let mut roots = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.form.is_empty() {
                return Err(Error::invalid(format!(
                    "sentence {}: token {} has an empty form",
                    self.id, i
                )));
            }
            if let Some(h) = t.head {
                if h >= n || h == i {
                    return Err(Error::invalid(format!(
                        "sentence {}: token {} has invalid head {}",
                        self.id, i, h
                    )));
                }
            }
            if t.deprel.as_deref() == Some(ROOT_DEPREL) {
                roots += 1;
            }
        }
        if roots > 1 {
            return Err(Error::invalid(format!(
                "sentence {} has {} root tokens",
                self.id, roots
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }

    pub fn text(&self) -> String {
        self.forms().join(" ")
    }

    pub fn is_tagged(&self) -> bool {
        self.tokens.iter().all(Token::is_tagged)
    }

    pub fn has_dependencies(&self) -> bool {
        self.tokens.iter().any(|t| t.deprel.is_some())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
    Unsplit,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
            Split::Unsplit => "unsplit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub domain: String,
    pub split: Split,
    pub sentences: Vec<AnnotatedSentence>,
}

impl Corpus {
    pub fn new(domain: impl Into<String>, sentences: Vec<AnnotatedSentence>) -> Result<Self> {
        let c = Corpus {
            domain: domain.into(),
            split: Split::Unsplit,
            sentences,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(domain: impl Into<String>) -> Self {
        Corpus {
            domain: domain.into(),
            split: Split::Unsplit,
            sentences: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.sentences.len());
        for s in &self.sentences {
            s.validate()?;
            if !seen.insert(s.id.as_str()) {
                return Err(Error::invalid(format!("duplicate sentence id {}", s.id)));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn num_tokens(&self) -> usize {
        self.sentences.iter().map(|s| s.len()).sum()
    }
}

/// `floor(log2(count))`; counts are always at least 1.
pub fn frequency_bin(count: u64) -> u32 {
    debug_assert!(count >= 1);
    63 - count.max(1).leading_zeros()
}

/// (coarse tag, fine tag)
pub type TagPair = (String, String);

/// Token counts per (upos, xpos, form) with derived logarithmic bins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<TagPair, BTreeMap<String, u64>>,
    // (tag pair) -> bin -> forms in lexicographic order
    bins: BTreeMap<TagPair, BTreeMap<u32, Vec<(String, u64)>>>,
}

impl FrequencyTable {
    pub fn from_corpus(corpus: &Corpus) -> Result<Self> {
        if corpus.num_tokens() == 0 {
            return Err(Error::EmptyCorpus);
        }
        let mut counts: BTreeMap<TagPair, BTreeMap<String, u64>> = BTreeMap::new();
        for tok in corpus.sentences.iter().flat_map(|s| &s.tokens) {
            *counts
                .entry((tok.upos.clone(), tok.fine_tag().to_string()))
                .or_default()
                .entry(tok.form.clone())
                .or_default() += 1;
        }
        Ok(Self::from_nested(counts))
    }

    /// Builds a table from explicit `(upos, xpos, form, count)` entries.
    /// Repeated keys are summed.
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, S, u64)>,
        S: Into<String>,
    {
        let mut counts: BTreeMap<TagPair, BTreeMap<String, u64>> = BTreeMap::new();
        for (upos, xpos, form, count) in entries {
            let (upos, xpos, form) = (upos.into(), xpos.into(), form.into());
            if count == 0 {
                return Err(Error::invalid(format!(
                    "zero count for ({upos}, {xpos}, {form})"
                )));
            }
            *counts.entry((upos, xpos)).or_default().entry(form).or_default() += count;
        }
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self::from_nested(counts))
    }

    fn from_nested(counts: BTreeMap<TagPair, BTreeMap<String, u64>>) -> Self {
        let mut bins: BTreeMap<TagPair, BTreeMap<u32, Vec<(String, u64)>>> = BTreeMap::new();
        for (tags, forms) in &counts {
            let per_tag = bins.entry(tags.clone()).or_default();
            // forms iterate in lexicographic order, so each bin stays sorted
            for (form, &c) in forms {
                per_tag
                    .entry(frequency_bin(c))
                    .or_default()
                    .push((form.clone(), c));
            }
        }
        FrequencyTable { counts, bins }
    }

    pub fn count(&self, upos: &str, xpos: &str, form: &str) -> Option<u64> {
        self.counts
            .get(&(upos.to_string(), xpos.to_string()))
            .and_then(|m| m.get(form))
            .copied()
    }

    pub fn bin_of(&self, upos: &str, xpos: &str, form: &str) -> Option<u32> {
        self.count(upos, xpos, form).map(frequency_bin)
    }

    /// Bin lookup for a token, honouring the XPOS fallback.
    pub fn bin_of_token(&self, tok: &Token) -> Option<u32> {
        self.bin_of(&tok.upos, tok.fine_tag(), &tok.form)
    }

    /// Forms sharing `(upos, xpos, bin)`, minus `exclude`, in lexicographic order.
    pub fn bin_candidates(&self, upos: &str, xpos: &str, bin: u32, exclude: &str) -> Vec<(&str, u64)> {
        self.bin_members(upos, xpos, bin)
            .iter()
            .filter(|(f, _)| f != exclude)
            .map(|(f, c)| (f.as_str(), *c))
            .collect()
    }

    pub(crate) fn bin_members(&self, upos: &str, xpos: &str, bin: u32) -> &[(String, u64)] {
        self.bins
            .get(&(upos.to_string(), xpos.to_string()))
            .and_then(|b| b.get(&bin))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// All `(upos, xpos, form, count)` entries in sorted key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &str, u64)> {
        self.counts.iter().flat_map(|((u, x), forms)| {
            forms
                .iter()
                .map(move |(f, &c)| (u.as_str(), x.as_str(), f.as_str(), c))
        })
    }

    pub fn forms_for(&self, upos: &str, xpos: &str) -> impl Iterator<Item = (&str, u64)> {
        self.counts
            .get(&(upos.to_string(), xpos.to_string()))
            .into_iter()
            .flat_map(|m| m.iter().map(|(f, &c)| (f.as_str(), c)))
    }

    pub fn tag_pairs(&self) -> impl Iterator<Item = &TagPair> {
        self.counts.keys()
    }

    pub fn total_tokens(&self) -> u64 {
        self.counts.values().flat_map(|m| m.values()).sum()
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Tab-separated `upos xpos form count` lines, sorted.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (u, x, f, c) in self.entries() {
            out.push_str(&format!("{u}\t{x}\t{f}\t{c}\n"));
        }
        out
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let parse_err = |msg: &str| Error::Parse {
                origin: origin.to_string(),
                line: i + 1,
                msg: msg.to_string(),
            };
            if cols.len() != 4 {
                return Err(parse_err("expected 4 tab-separated columns"));
            }
            let count: u64 = cols[3].parse().map_err(|_| parse_err("count is not an integer"))?;
            entries.push((cols[0], cols[1], cols[2], count));
        }
        Self::from_entries(entries)
    }
}
