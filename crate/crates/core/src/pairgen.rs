//! Minimal-pair generation: in-domain semantic verb substitutions and
//! frequency-fitted subject–verb agreement templates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, FrequencyTable, VERB};
use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::tagger::{find_root, RootSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Paradigm {
    #[serde(rename = "semantic-verb")]
    SemanticVerb,
    #[serde(rename = "agr-simple")]
    AgrSimple,
    #[serde(rename = "agr-pp")]
    AgrPp,
    #[serde(rename = "agr-vp-coord")]
    AgrVpCoord,
    #[serde(rename = "agr-subj-rel")]
    AgrSubjRel,
    #[serde(rename = "agr-obj-rel")]
    AgrObjRel,
}

impl Paradigm {
    pub const AGREEMENT: [Paradigm; 5] = [
        Paradigm::AgrSimple,
        Paradigm::AgrPp,
        Paradigm::AgrVpCoord,
        Paradigm::AgrSubjRel,
        Paradigm::AgrObjRel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Paradigm::SemanticVerb => "semantic-verb",
            Paradigm::AgrSimple => "agr-simple",
            Paradigm::AgrPp => "agr-pp",
            Paradigm::AgrVpCoord => "agr-vp-coord",
            Paradigm::AgrSubjRel => "agr-subj-rel",
            Paradigm::AgrObjRel => "agr-obj-rel",
        }
    }

    pub fn is_agreement(self) -> bool {
        self != Paradigm::SemanticVerb
    }
}

impl fmt::Display for Paradigm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Paradigm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Paradigm::SemanticVerb)
            .chain(Paradigm::AGREEMENT)
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown paradigm {s:?}")))
    }
}

/// Two token sequences differing at exactly one position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPair {
    pub pair_id: String,
    pub paradigm: Paradigm,
    pub good: Vec<String>,
    pub bad: Vec<String>,
    pub diff_index: usize,
    pub source_sentence_id: Option<String>,
    pub meta: BTreeMap<String, String>,
}

impl MinimalPair {
    pub fn validate(&self) -> Result<()> {
        if self.good.len() != self.bad.len() {
            return Err(Error::invalid(format!(
                "pair {}: good has {} tokens, bad has {}",
                self.pair_id,
                self.good.len(),
                self.bad.len()
            )));
        }
        let diffs: Vec<usize> = (0..self.good.len()).filter(|&i| self.good[i] != self.bad[i]).collect();
        if diffs != [self.diff_index] {
            return Err(Error::invalid(format!(
                "pair {}: sequences differ at {:?}, expected exactly [{}]",
                self.pair_id, diffs, self.diff_index
            )));
        }
        if self.good.iter().chain(&self.bad).any(|t| t.is_empty() || t.contains(char::is_whitespace)) {
            return Err(Error::invalid(format!("pair {}: tokens must be non-empty and contain no whitespace", self.pair_id)));
        }
        Ok(())
    }

    pub fn good_text(&self) -> String {
        self.good.join(" ")
    }

    pub fn bad_text(&self) -> String {
        self.bad.join(" ")
    }
}

// ---------------------------------------------------------------------------
// Semantic pairs
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticConfig {
    pub max_alts: usize,
    pub len_min: usize,
    pub len_max: usize,
}

impl Default for SemanticConfig {
    fn default() -> Self {
        SemanticConfig {
            max_alts: 5,
            len_min: 10,
            len_max: 30,
        }
    }
}

/// Counts of sentences skipped at each precondition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticReport {
    pub sentences: usize,
    pub skipped_length: usize,
    pub skipped_no_root: usize,
    pub skipped_root_unseen: usize,
    pub skipped_no_candidates: usize,
    pub heuristic_roots: usize,
    pub source_sentences: usize,
    pub pairs: usize,
    pub verb_lemmas: usize,
}

enum Outcome {
    Length,
    NoRoot,
    Unseen,
    NoCandidates,
    Pairs(Vec<MinimalPair>, RootSource, String),
}

/// Draws up to `k` distinct forms, frequency-weighted, without replacement.
fn sample_without_replacement(mut pool: Vec<(&str, u64)>, k: usize, rng: &mut Stream) -> Vec<String> {
    let mut out = Vec::with_capacity(k.min(pool.len()));
    while out.len() < k && !pool.is_empty() {
        let total: u64 = pool.iter().map(|(_, c)| c).sum();
        let mut x = rng.gen_range(0..total);
        let mut idx = 0;
        for (i, (_, c)) in pool.iter().enumerate() {
            if x < *c {
                idx = i;
                break;
            }
            x -= c;
        }
        out.push(pool.remove(idx).0.to_string());
    }
    out
}

/// For each test sentence of acceptable length with a root verb, emits up
/// to `max_alts` pairs whose bad member swaps the root verb for another
/// verb of the same XPOS and frequency bin in `train_table`.
pub fn gen_semantic_pairs(
    test: &Corpus,
    train_table: &FrequencyTable,
    cfg: &SemanticConfig,
    seed: u64,
) -> (Vec<MinimalPair>, SemanticReport) {
    let outcomes: Vec<Outcome> = test
        .sentences
        .par_iter()
        .enumerate()
        .map(|(si, s)| {
            if s.len() < cfg.len_min || s.len() > cfg.len_max {
                return Outcome::Length;
            }
            let Some((root, source)) = find_root(s) else {
                return Outcome::NoRoot;
            };
            let tok = &s.tokens[root];
            let xpos = tok.fine_tag();
            let Some(bin) = train_table.bin_of(VERB, xpos, &tok.form) else {
                return Outcome::Unseen;
            };
            let candidates = train_table.bin_candidates(VERB, xpos, bin, &tok.form);
            if candidates.is_empty() {
                return Outcome::NoCandidates;
            }
            let mut rng = rng::stream(seed, si as u64);
            let subs = sample_without_replacement(candidates, cfg.max_alts, &mut rng);
            let good: Vec<String> = s.tokens.iter().map(|t| t.form.clone()).collect();
            let pairs = subs
                .into_iter()
                .enumerate()
                .map(|(k, sub)| {
                    let mut bad = good.clone();
                    bad[root] = sub.clone();
                    let meta = BTreeMap::from([
                        ("original".to_string(), tok.form.clone()),
                        ("substitute".to_string(), sub),
                        ("lemma".to_string(), tok.lemma_or_form()),
                        ("xpos".to_string(), xpos.to_string()),
                        ("bin".to_string(), bin.to_string()),
                        (
                            "root_source".to_string(),
                            match source {
                                RootSource::Parsed => "parsed",
                                RootSource::Heuristic => "heuristic",
                            }
                            .to_string(),
                        ),
                    ]);
                    MinimalPair {
                        pair_id: format!("{}-sem{}", s.id, k),
                        paradigm: Paradigm::SemanticVerb,
                        good: good.clone(),
                        bad,
                        diff_index: root,
                        source_sentence_id: Some(s.id.clone()),
                        meta,
                    }
                })
                .collect();
            Outcome::Pairs(pairs, source, tok.lemma_or_form())
        })
        .collect();

    let mut report = SemanticReport {
        sentences: test.len(),
        ..Default::default()
    };
    let mut lemmas = BTreeSet::new();
    let mut pairs = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Length => report.skipped_length += 1,
            Outcome::NoRoot => report.skipped_no_root += 1,
            Outcome::Unseen => report.skipped_root_unseen += 1,
            Outcome::NoCandidates => report.skipped_no_candidates += 1,
            Outcome::Pairs(p, source, lemma) => {
                report.source_sentences += 1;
                if source == RootSource::Heuristic {
                    report.heuristic_roots += 1;
                }
                lemmas.insert(lemma);
                pairs.extend(p);
            }
        }
    }
    report.pairs = pairs.len();
    report.verb_lemmas = lemmas.len();
    if report.heuristic_roots > 0 {
        log::warn!(
            "{} of {} source sentences used the leftmost-verb root heuristic",
            report.heuristic_roots,
            report.source_sentences
        );
    }
    (pairs, report)
}

// ---------------------------------------------------------------------------
// Agreement lexicon
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NounEntry {
    pub lemma: String,
    pub singular: String,
    pub plural: String,
    pub freq: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub lemma: String,
    /// 3rd person singular present (VBZ).
    pub sg3: String,
    /// Non-3rd-singular present (VBP).
    pub non3sg: String,
    pub freq: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementLexicon {
    pub nouns: Vec<NounEntry>,
    pub verbs: Vec<VerbEntry>,
    /// Prepositions; may be multiword ("in front of").
    pub preps: Vec<String>,
    pub relativizer: String,
}

impl AgreementLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

/// lemma → attested (upos, xpos, form) triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaIndex {
    pub forms: BTreeMap<String, BTreeSet<(String, String, String)>>,
}

impl LemmaIndex {
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let mut forms: BTreeMap<String, BTreeSet<(String, String, String)>> = BTreeMap::new();
        for t in corpus.sentences.iter().flat_map(|s| &s.tokens) {
            if t.lemma.is_empty() {
                continue;
            }
            forms
                .entry(t.lemma.clone())
                .or_default()
                .insert((t.upos.clone(), t.fine_tag().to_string(), t.form.clone()));
        }
        LemmaIndex { forms }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexiconConfig {
    pub pct_lo: f64,
    pub pct_hi: f64,
    pub min_entries: usize,
    pub n_preps: usize,
    pub relativizer: String,
}

impl Default for LexiconConfig {
    fn default() -> Self {
        LexiconConfig {
            pct_lo: 50.0,
            pct_hi: 95.0,
            min_entries: 10,
            n_preps: 5,
            relativizer: "that".to_string(),
        }
    }
}

/// Linear-interpolation percentile of sorted values.
fn percentile(sorted: &[u64], pct: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (pct / 100.0).clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] as f64 + frac * (sorted[hi] as f64 - sorted[lo] as f64)
}

// Most frequent form of `lemma` under (upos, xpos).
fn best_form(table: &FrequencyTable, forms: &BTreeSet<(String, String, String)>, upos: &str, xpos: &str) -> Option<(String, u64)> {
    forms
        .iter()
        .filter(|(u, x, _)| u == upos && x == xpos)
        .filter_map(|(u, x, f)| table.count(u, x, f).map(|c| (f.clone(), c)))
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
}

fn band<T>(mut entries: Vec<(T, u64)>, cfg: &LexiconConfig) -> Vec<T> {
    let mut freqs: Vec<u64> = entries.iter().map(|(_, f)| *f).collect();
    freqs.sort_unstable();
    let lo = percentile(&freqs, cfg.pct_lo);
    let hi = percentile(&freqs, cfg.pct_hi);
    entries.retain(|(_, f)| (*f as f64) >= lo && (*f as f64) <= hi);
    entries.into_iter().map(|(e, _)| e).collect()
}

/// Nouns with both NN and NNS forms and verbs with both VBZ and VBP forms
/// attested, kept when their combined frequency falls inside the
/// `[pct_lo, pct_hi]` percentile band of their class.
pub fn extract_agreement_lexicon(
    train_table: &FrequencyTable,
    lemma_index: &LemmaIndex,
    cfg: &LexiconConfig,
) -> Result<AgreementLexicon> {
    let mut nouns = Vec::new();
    let mut verbs = Vec::new();
    for (lemma, forms) in &lemma_index.forms {
        if let (Some((sg, a)), Some((pl, b))) = (
            best_form(train_table, forms, "NOUN", "NN"),
            best_form(train_table, forms, "NOUN", "NNS"),
        ) {
            if sg != pl {
                let freq = a + b;
                nouns.push((
                    NounEntry {
                        lemma: lemma.clone(),
                        singular: sg,
                        plural: pl,
                        freq,
                    },
                    freq,
                ));
            }
        }
        if let (Some((z, a)), Some((p, b))) = (
            best_form(train_table, forms, VERB, "VBZ"),
            best_form(train_table, forms, VERB, "VBP"),
        ) {
            if z != p {
                let freq = a + b;
                verbs.push((
                    VerbEntry {
                        lemma: lemma.clone(),
                        sg3: z,
                        non3sg: p,
                        freq,
                    },
                    freq,
                ));
            }
        }
    }
    let mut nouns = band(nouns, cfg);
    let mut verbs = band(verbs, cfg);
    nouns.sort_by(|a, b| b.freq.cmp(&a.freq).then_with(|| a.lemma.cmp(&b.lemma)));
    verbs.sort_by(|a, b| b.freq.cmp(&a.freq).then_with(|| a.lemma.cmp(&b.lemma)));
    if nouns.len() < cfg.min_entries || verbs.len() < cfg.min_entries {
        return Err(Error::LexiconTooSparse {
            nouns: nouns.len(),
            verbs: verbs.len(),
            min: cfg.min_entries,
        });
    }

    let mut preps: Vec<(String, u64)> = train_table
        .tag_pairs()
        .filter(|(u, _)| u == "ADP")
        .flat_map(|(u, x)| train_table.forms_for(u, x).map(|(f, c)| (f.to_string(), c)))
        .collect::<BTreeMap<String, u64>>()
        .into_iter()
        .filter(|(f, _)| f.chars().all(char::is_alphabetic))
        .collect();
    preps.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    preps.truncate(cfg.n_preps);

    Ok(AgreementLexicon {
        nouns,
        verbs,
        preps: preps.into_iter().map(|(f, _)| f).collect(),
        relativizer: cfg.relativizer.clone(),
    })
}

// ---------------------------------------------------------------------------
// Agreement pairs
// ---------------------------------------------------------------------------

fn distinct_pair(n: usize, rng: &mut Stream) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn words(s: &str) -> impl Iterator<Item = String> + '_ {
    s.split_whitespace().map(str::to_string)
}

/// Template pairs for each requested paradigm. The good member has a
/// singular subject and 3sg verbs; the bad member pluralizes the subject
/// noun (index 1) and leaves everything else unchanged.
///
/// | paradigm     | template                         |
/// |--------------|----------------------------------|
/// | agr-simple   | `The N V .`                      |
/// | agr-pp       | `The N P the N2 V .`             |
/// | agr-vp-coord | `The N V and V2 .`               |
/// | agr-subj-rel | `The N that V2 the N2 V .`       |
/// | agr-obj-rel  | `The N that the N2 V2 V .`       |
pub fn gen_agreement_pairs(
    lexicon: &AgreementLexicon,
    paradigms: &[Paradigm],
    n_per_paradigm: usize,
    seed: u64,
) -> Result<Vec<MinimalPair>> {
    if lexicon.nouns.len() < 2 || lexicon.verbs.len() < 2 {
        return Err(Error::invalid("agreement lexicon needs at least two nouns and two verbs"));
    }
    let mut out = Vec::with_capacity(paradigms.len() * n_per_paradigm);
    for &p in paradigms {
        if !p.is_agreement() {
            return Err(Error::invalid(format!("{p} is not an agreement paradigm")));
        }
        if p == Paradigm::AgrPp && lexicon.preps.is_empty() {
            return Err(Error::invalid("agr-pp needs at least one preposition"));
        }
        let pseed = rng::mix64(seed, rng::label_seed(p.name()));
        for i in 0..n_per_paradigm {
            let mut rng = rng::stream(pseed, i as u64);
            let (n1, n2) = distinct_pair(lexicon.nouns.len(), &mut rng);
            let (v1, v2) = distinct_pair(lexicon.verbs.len(), &mut rng);
            let (n1, n2) = (&lexicon.nouns[n1], &lexicon.nouns[n2]);
            let (v1, v2) = (&lexicon.verbs[v1], &lexicon.verbs[v2]);
            let mut meta = BTreeMap::from([
                ("noun".to_string(), n1.lemma.clone()),
                ("verb".to_string(), v1.lemma.clone()),
            ]);
            let mut good: Vec<String> = vec!["The".into(), n1.singular.clone()];
            match p {
                Paradigm::AgrSimple => good.push(v1.sg3.clone()),
                Paradigm::AgrPp => {
                    let prep = &lexicon.preps[rng.gen_range(0..lexicon.preps.len())];
                    meta.insert("prep".into(), prep.clone());
                    meta.insert("noun2".into(), n2.lemma.clone());
                    good.extend(words(prep));
                    good.extend(["the".to_string(), n2.singular.clone(), v1.sg3.clone()]);
                }
                Paradigm::AgrVpCoord => {
                    meta.insert("verb2".into(), v2.lemma.clone());
                    good.extend([v1.sg3.clone(), "and".to_string(), v2.sg3.clone()]);
                }
                Paradigm::AgrSubjRel => {
                    meta.insert("verb2".into(), v2.lemma.clone());
                    meta.insert("noun2".into(), n2.lemma.clone());
                    good.extend(words(&lexicon.relativizer));
                    good.extend([v2.sg3.clone(), "the".to_string(), n2.singular.clone(), v1.sg3.clone()]);
                }
                Paradigm::AgrObjRel => {
                    meta.insert("verb2".into(), v2.lemma.clone());
                    meta.insert("noun2".into(), n2.lemma.clone());
                    good.extend(words(&lexicon.relativizer));
                    good.extend(["the".to_string(), n2.singular.clone(), v2.sg3.clone(), v1.sg3.clone()]);
                }
                Paradigm::SemanticVerb => unreachable!(),
            }
            good.push(".".into());
            let mut bad = good.clone();
            bad[1] = n1.plural.clone();
            let pair = MinimalPair {
                pair_id: format!("{}-{:06}", p.name(), i),
                paradigm: p,
                good,
                bad,
                diff_index: 1,
                source_sentence_id: None,
                meta,
            };
            pair.validate()?;
            out.push(pair);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSONL
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PairRecord {
    pair_id: String,
    paradigm: Paradigm,
    good: String,
    bad: String,
    diff_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source_sentence_id: Option<String>,
    #[serde(default)]
    meta: BTreeMap<String, String>,
}

pub fn pairs_to_jsonl(pairs: &[MinimalPair]) -> Result<String> {
    let mut out = String::new();
    for p in pairs {
        let rec = PairRecord {
            pair_id: p.pair_id.clone(),
            paradigm: p.paradigm,
            good: p.good_text(),
            bad: p.bad_text(),
            diff_index: p.diff_index,
            source_sentence_id: p.source_sentence_id.clone(),
            meta: p.meta.clone(),
        };
        out.push_str(&serde_json::to_string(&rec)?);
        out.push('\n');
    }
    Ok(out)
}

/// Parses and validates a pairs file; errors carry the 1-based line number.
pub fn pairs_from_jsonl(text: &str, origin: &str) -> Result<Vec<MinimalPair>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            origin: origin.to_string(),
            line: i + 1,
            msg,
        };
        let rec: PairRecord = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let pair = MinimalPair {
            pair_id: rec.pair_id,
            paradigm: rec.paradigm,
            good: rec.good.split(' ').map(str::to_string).collect(),
            bad: rec.bad.split(' ').map(str::to_string).collect(),
            diff_index: rec.diff_index,
            source_sentence_id: rec.source_sentence_id,
            meta: rec.meta,
        };
        pair.validate().map_err(|e| err(e.to_string()))?;
        out.push(pair);
    }
    Ok(out)
}

pub fn write_pairs(pairs: &[MinimalPair], path: &Path) -> Result<()> {
    let body = pairs_to_jsonl(pairs)?;
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_pairs(path: &Path) -> Result<Vec<MinimalPair>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    pairs_from_jsonl(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AnnotatedSentence, Token};
    use proptest::prelude::*;

    fn parsed(id: &str, toks: &[(&str, &str, &str, &str)], root: usize) -> AnnotatedSentence {
        let tokens = toks
            .iter()
            .enumerate()
            .map(|(i, (f, l, u, x))| {
                let mut t = Token::tagged(*f, *u, *x);
                t.lemma = l.to_string();
                if i == root {
                    t.deprel = Some("root".into());
                } else {
                    t.deprel = Some("dep".into());
                    t.head = Some(root);
                }
                t
            })
            .collect();
        AnnotatedSentence::new(id, tokens).unwrap()
    }

    fn stool(id: &str) -> AnnotatedSentence {
        parsed(
            id,
            &[
                ("You", "you", "PRON", "PRP"),
                ("can", "can", "AUX", "MD"),
                ("sit", "sit", "VERB", "VB"),
                ("out", "out", "ADV", "RB"),
                ("here", "here", "ADV", "RB"),
                ("by", "by", "ADP", "IN"),
                ("me", "I", "PRON", "PRP"),
                ("on", "on", "ADP", "IN"),
                ("the", "the", "DET", "DT"),
                ("other", "other", "ADJ", "JJ"),
                ("stool", "stool", "NOUN", "NN"),
                (".", ".", "PUNCT", "."),
            ],
            2,
        )
    }

    #[test]
    fn stool_pair_swaps_only_the_root() {
        let table = FrequencyTable::from_entries(vec![("VERB", "VB", "sit", 9), ("VERB", "VB", "try", 10)]).unwrap();
        let test = Corpus::new("cdl", vec![stool("ex1")]).unwrap();
        let (pairs, rep) = gen_semantic_pairs(&test, &table, &SemanticConfig::default(), 3);
        assert_eq!(pairs.len(), 1);
        assert_eq!(rep.verb_lemmas, 1);
        let p = &pairs[0];
        assert_eq!(p.good_text(), "You can sit out here by me on the other stool .");
        assert_eq!(p.bad_text(), "You can try out here by me on the other stool .");
        assert_eq!(p.diff_index, 2);
        p.validate().unwrap();
    }

    #[test]
    fn short_sentences_yield_nothing() {
        let table = FrequencyTable::from_entries(vec![("VERB", "VB", "sit", 9), ("VERB", "VB", "try", 10)]).unwrap();
        let mut s = stool("short");
        s.tokens.truncate(9);
        let test = Corpus::new("cdl", vec![s]).unwrap();
        let (pairs, rep) = gen_semantic_pairs(&test, &table, &SemanticConfig::default(), 3);
        assert!(pairs.is_empty());
        assert_eq!(rep.skipped_length, 1);
    }

    #[test]
    fn at_most_five_distinct_alternatives() {
        // sit plus seven other VB forms, all in bin 3
        let mut entries = vec![("VERB", "VB", "sit", 9)];
        for f in ["aa", "bb", "cc", "dd", "ee", "ff", "gg"] {
            entries.push(("VERB", "VB", f, 10));
        }
        let table = FrequencyTable::from_entries(entries).unwrap();
        let test = Corpus::new("cdl", vec![stool("a"), stool("b")]).unwrap();
        let (pairs, _) = gen_semantic_pairs(&test, &table, &SemanticConfig::default(), 9);
        assert_eq!(pairs.len(), 10);
        for src in ["a", "b"] {
            let subs: BTreeSet<&str> = pairs
                .iter()
                .filter(|p| p.source_sentence_id.as_deref() == Some(src))
                .map(|p| p.bad[2].as_str())
                .collect();
            assert_eq!(subs.len(), 5);
            assert!(!subs.contains("sit"));
        }
    }

    fn painter_lexicon() -> AgreementLexicon {
        AgreementLexicon {
            nouns: vec![
                NounEntry { lemma: "painter".into(), singular: "painter".into(), plural: "painters".into(), freq: 10 },
                NounEntry { lemma: "waiter".into(), singular: "waiter".into(), plural: "waiters".into(), freq: 9 },
            ],
            verbs: vec![
                VerbEntry { lemma: "enjoy".into(), sg3: "enjoys".into(), non3sg: "enjoy".into(), freq: 8 },
                VerbEntry { lemma: "smile".into(), sg3: "smiles".into(), non3sg: "smile".into(), freq: 7 },
            ],
            preps: vec!["in front of".into()],
            relativizer: "that".into(),
        }
    }

    #[test]
    fn pp_template_reproduces_painter_example() {
        let pairs = gen_agreement_pairs(&painter_lexicon(), &[Paradigm::AgrPp], 50, 1).unwrap();
        let hit = pairs
            .iter()
            .find(|p| p.good_text() == "The painter in front of the waiter enjoys .")
            .expect("painter/waiter/enjoys draw");
        assert_eq!(hit.bad_text(), "The painters in front of the waiter enjoys .");
        assert_eq!(hit.diff_index, 1);
    }

    #[test]
    fn agreement_counts_and_reproducibility() {
        let lex = painter_lexicon();
        let a = gen_agreement_pairs(&lex, &Paradigm::AGREEMENT, 100, 5).unwrap();
        let b = gen_agreement_pairs(&lex, &Paradigm::AGREEMENT, 100, 5).unwrap();
        assert_eq!(a, b);
        for p in Paradigm::AGREEMENT {
            assert_eq!(a.iter().filter(|x| x.paradigm == p).count(), 100);
        }
        for p in a.iter().filter(|x| x.paradigm == Paradigm::AgrSimple) {
            assert_eq!(p.good.len(), 4);
            assert_eq!(p.diff_index, 1);
        }
        assert!(gen_agreement_pairs(&lex, &[Paradigm::SemanticVerb], 1, 5).is_err());
        assert!("agr-weird".parse::<Paradigm>().is_err());
    }

    #[test]
    fn lexicon_requires_both_forms() {
        let mut sents = Vec::new();
        let nouns = ["cat", "dog", "cow", "pig", "hen", "fox", "owl", "bee", "ant", "elk", "yak"];
        let verbs = ["run", "sit", "eat", "nap", "hop", "dig", "sip", "tap", "zip", "jog", "hum"];
        for (i, (n, v)) in nouns.iter().zip(verbs).enumerate() {
            let pl = format!("{n}s");
            let z = format!("{v}s");
            sents.push(parsed(&format!("a{i}"), &[("the", "the", "DET", "DT"), (n, n, "NOUN", "NN"), (&z, v, "VERB", "VBZ")], 2));
            sents.push(parsed(&format!("b{i}"), &[("the", "the", "DET", "DT"), (&pl, n, "NOUN", "NNS"), (v, v, "VERB", "VBP"), ("in", "in", "ADP", "IN")], 2));
        }
        // singular-only lemma
        sents.push(parsed("c", &[("a", "a", "DET", "DT"), ("painter", "painter", "NOUN", "NN"), ("naps", "nap", "VERB", "VBZ")], 2));
        let c = Corpus::new("t", sents).unwrap();
        let table = FrequencyTable::from_corpus(&c).unwrap();
        let idx = LemmaIndex::from_corpus(&c);
        let cfg = LexiconConfig { pct_lo: 0.0, pct_hi: 100.0, ..Default::default() };
        let lex = extract_agreement_lexicon(&table, &idx, &cfg).unwrap();
        assert_eq!(lex.nouns.len(), 11);
        assert!(lex.nouns.iter().all(|n| n.lemma != "painter"));
        assert_eq!(lex.verbs.len(), 11);
        assert_eq!(lex.preps, vec!["in".to_string()]);
        let nap = lex.verbs.iter().find(|v| v.lemma == "nap").unwrap();
        assert_eq!((nap.sg3.as_str(), nap.non3sg.as_str(), nap.freq), ("naps", "nap", 3));

        let tight = LexiconConfig { min_entries: 12, pct_lo: 0.0, pct_hi: 100.0, ..Default::default() };
        assert!(matches!(extract_agreement_lexicon(&table, &idx, &tight), Err(Error::LexiconTooSparse { .. })));
    }

    #[test]
    fn jsonl_validation() {
        assert!(pairs_from_jsonl("", "p").unwrap().is_empty());
        let bad = r#"{"pair_id":"x","paradigm":"agr-simple","good":"a b c","bad":"a x y","diff_index":1,"meta":{}}"#;
        let err = pairs_from_jsonl(&format!("\n{bad}\n"), "p.jsonl").unwrap_err().to_string();
        assert!(err.contains("p.jsonl:2"), "{err}");
        let garbage = pairs_from_jsonl("{not json", "p").unwrap_err().to_string();
        assert!(garbage.contains("p:1"));
    }

    fn arb_pair() -> impl Strategy<Value = MinimalPair> {
        (
            proptest::collection::vec("[a-z]{1,6}", 1..12),
            any::<prop::sample::Index>(),
            "[A-Z]{1,5}",
            prop::option::of("[a-z0-9-]{1,8}"),
            proptest::collection::btree_map("[a-z]{1,4}", "[ -~]{0,6}", 0..3),
        )
            .prop_map(|(good, idx, sub, src, meta)| {
                let i = idx.index(good.len());
                let mut bad = good.clone();
                bad[i] = sub;
                MinimalPair {
                    pair_id: format!("p-{}", good.join("")),
                    paradigm: Paradigm::SemanticVerb,
                    good,
                    bad,
                    diff_index: i,
                    source_sentence_id: src,
                    meta,
                }
            })
    }

    proptest! {
        #[test]
        fn jsonl_round_trip(pairs in proptest::collection::vec(arb_pair(), 0..20)) {
            let text = pairs_to_jsonl(&pairs).unwrap();
            prop_assert_eq!(pairs_from_jsonl(&text, "mem").unwrap(), pairs);
        }
    }
}
