//! Reading, cleaning, splitting and writing corpora.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedSentence, Corpus, Split, Token, UNK_TAG};
use crate::error::{Error, Result};
use crate::rng;
use crate::tagger::TaggerModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Conllu,
    Text,
    Chat,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conllu" => Ok(Format::Conllu),
            "text" => Ok(Format::Text),
            "chat" => Ok(Format::Chat),
            other => Err(Error::invalid(format!("unknown format {other:?}"))),
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Loads a corpus in any supported format. Text and CHAT input is tagged
/// with `tagger` when one is given.
pub fn read_corpus(path: &Path, format: Format, tagger: Option<&TaggerModel>) -> Result<Corpus> {
    match format {
        Format::Conllu => read_conllu(path),
        Format::Text => read_plaintext(path, tagger),
        Format::Chat => {
            let raw = read_text(path)?;
            let cleaned = clean_childes(raw.lines());
            Ok(corpus_from_lines(&stem(path), cleaned.iter().map(|(n, l)| (*n, l.as_str())), tagger))
        }
    }
}

// ---------------------------------------------------------------------------
// CoNLL-U
// ---------------------------------------------------------------------------

pub fn read_conllu(path: &Path) -> Result<Corpus> {
    let text = read_text(path)?;
    let mut corpus = parse_conllu(&text, &path.display().to_string())?;
    corpus.domain = stem(path);
    Ok(corpus)
}

#[derive(Default)]
struct Block {
    start_line: usize,
    id: Option<String>,
    source: String,
    comments: Vec<String>,
    tokens: Vec<Token>,
    // 1-based head column per token, checked once the block is complete
    heads: Vec<(usize, Option<usize>)>,
}

/// Parses CoNLL-U text. Multiword-token ranges (`3-4`) and empty nodes
/// (`3.1`) are skipped.
pub fn parse_conllu(text: &str, origin: &str) -> Result<Corpus> {
    let err = |line: usize, msg: String| Error::Parse {
        origin: origin.to_string(),
        line,
        msg,
    };
    let mut sentences = Vec::new();
    let mut block = Block::default();

    let finish = |block: &mut Block, sentences: &mut Vec<AnnotatedSentence>| -> Result<()> {
        let b = std::mem::take(block);
        if b.tokens.is_empty() {
            if b.id.is_some() || !b.comments.is_empty() {
                return Err(err(b.start_line, "sentence block has no tokens".into()));
            }
            return Ok(());
        }
        let n = b.tokens.len();
        let mut tokens = b.tokens;
        for (i, (line, head)) in b.heads.into_iter().enumerate() {
            tokens[i].head = match head {
                None | Some(0) => None,
                Some(h) if h > n => {
                    return Err(err(line, format!("head {h} is outside the sentence ({n} tokens)")))
                }
                Some(h) if h - 1 == i => return Err(err(line, "token is its own head".into())),
                Some(h) => Some(h - 1),
            };
        }
        let id = b.id.unwrap_or_else(|| format!("s{}", sentences.len() + 1));
        let s = AnnotatedSentence {
            id,
            source: b.source,
            comments: b.comments,
            tokens,
        };
        s.validate().map_err(|e| err(b.start_line, e.to_string()))?;
        sentences.push(s);
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            finish(&mut block, &mut sentences)?;
            continue;
        }
        if block.start_line == 0 {
            block.start_line = lineno;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim_start();
            if let Some(v) = meta_value(c, "sent_id") {
                block.id = Some(v.to_string());
            } else if let Some(v) = meta_value(c, "source") {
                block.source = v.to_string();
            } else if meta_value(c, "text").is_none() {
                block.comments.push(c.to_string());
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(lineno, format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| err(lineno, format!("token id {:?} is not an integer", cols[0])))?;
        if id != block.tokens.len() + 1 {
            return Err(err(lineno, format!("token id {id} out of sequence")));
        }
        let head = match cols[6] {
            "_" => None,
            h => Some(
                h.parse::<usize>()
                    .map_err(|_| err(lineno, format!("head {h:?} is not an integer")))?,
            ),
        };
        let field = |s: &str| if s == "_" { String::new() } else { s.to_string() };
        let form = cols[1].to_string();
        if form.is_empty() {
            return Err(err(lineno, "empty form".into()));
        }
        block.tokens.push(Token {
            form,
            lemma: field(cols[2]),
            upos: if cols[3] == "_" { UNK_TAG.to_string() } else { cols[3].to_string() },
            xpos: field(cols[4]),
            head: None,
            deprel: (cols[7] != "_").then(|| cols[7].to_string()),
        });
        block.heads.push((lineno, head));
    }
    finish(&mut block, &mut sentences)?;

    let corpus = Corpus {
        domain: String::new(),
        split: Split::Unsplit,
        sentences,
    };
    corpus.validate()?;
    Ok(corpus)
}

fn meta_value<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let rest = comment.strip_prefix(key)?.trim_start();
    Some(rest.strip_prefix('=')?.trim())
}

pub fn to_conllu(corpus: &Corpus) -> String {
    let mut out = String::new();
    for s in &corpus.sentences {
        out.push_str(&format!("# sent_id = {}\n", s.id));
        if !s.source.is_empty() {
            out.push_str(&format!("# source = {}\n", s.source));
        }
        for c in &s.comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(&format!("# text = {}\n", s.text()));
        for (i, t) in s.tokens.iter().enumerate() {
            let or_blank = |v: &str| if v.is_empty() { "_".to_string() } else { v.to_string() };
            let upos = if t.upos == UNK_TAG || t.upos.is_empty() { "_".to_string() } else { t.upos.clone() };
            let head = match (t.head, &t.deprel) {
                (Some(h), _) => (h + 1).to_string(),
                (None, Some(_)) => "0".to_string(),
                (None, None) => "_".to_string(),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\t_\n",
                i + 1,
                t.form,
                or_blank(&t.lemma),
                upos,
                or_blank(&t.xpos),
                head,
                t.deprel.as_deref().unwrap_or("_"),
            ));
        }
        out.push('\n');
    }
    out
}

pub fn to_text(corpus: &Corpus) -> String {
    let mut out = String::new();
    for s in &corpus.sentences {
        out.push_str(&s.text());
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Conllu,
    Text,
}

pub fn write_corpus(corpus: &Corpus, path: &Path, format: OutputFormat) -> Result<()> {
    let body = match format {
        OutputFormat::Conllu => to_conllu(corpus),
        OutputFormat::Text => to_text(corpus),
    };
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------------------
// Plain text and CHAT
// ---------------------------------------------------------------------------

/// One whitespace-tokenized sentence per line; blank lines are skipped.
pub fn read_plaintext(path: &Path, tagger: Option<&TaggerModel>) -> Result<Corpus> {
    let text = read_text(path)?;
    Ok(corpus_from_lines(
        &stem(path),
        text.lines().enumerate().map(|(i, l)| (i + 1, l)),
        tagger,
    ))
}

fn corpus_from_lines<'a>(
    domain: &str,
    lines: impl Iterator<Item = (usize, &'a str)>,
    tagger: Option<&TaggerModel>,
) -> Corpus {
    let mut sentences = Vec::new();
    for (lineno, line) in lines {
        let tokens: Vec<Token> = line.split_whitespace().map(Token::raw).collect();
        if tokens.is_empty() {
            continue;
        }
        let mut s = AnnotatedSentence {
            id: format!("{domain}-{lineno}"),
            source: String::new(),
            comments: Vec::new(),
            tokens,
        };
        if let Some(m) = tagger {
            s = m.tag(&s);
        }
        sentences.push(s);
    }
    Corpus {
        domain: domain.to_string(),
        split: Split::Unsplit,
        sentences,
    }
}

struct ChatRules {
    speaker: Regex,
    bracket: Regex,
    angle: Regex,
    bullet: Regex,
}

fn chat_rules() -> &'static ChatRules {
    static RULES: OnceLock<ChatRules> = OnceLock::new();
    RULES.get_or_init(|| ChatRules {
        speaker: Regex::new(r"^\*[A-Za-z0-9_]+:\s*").unwrap(),
        bracket: Regex::new(r"\[[^\[\]]*\]").unwrap(),
        angle: Regex::new(r"<[^<>]*>").unwrap(),
        bullet: Regex::new("\u{15}[^\u{15}]*\u{15}").unwrap(),
    })
}

/// Strips CHAT transcript markup, returning `(source line number, text)`
/// for every surviving utterance.
///
/// Rules, applied in order until the line stops changing:
/// 1. header (`@`) and dependent-tier (`%`) lines are dropped;
/// 2. the speaker prefix `*XXX:` is removed;
/// 3. media bullets, `[...]` annotations and `<...>` retraced material are removed;
/// 4. tokens starting with `&` and the placeholders `xxx`, `yyy`, `www` are removed.
///
/// Continuation lines (leading tab) are joined to the preceding utterance.
/// Empty results are dropped.
pub fn clean_childes<'a>(lines: impl IntoIterator<Item = &'a str>) -> Vec<(usize, String)> {
    let mut joined: Vec<(usize, String)> = Vec::new();
    for (i, raw) in lines.into_iter().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.starts_with('\t') || (line.starts_with(' ') && !line.trim().is_empty()) {
            if let Some((_, last)) = joined.last_mut() {
                last.push(' ');
                last.push_str(line.trim());
                continue;
            }
        }
        joined.push((i + 1, line.to_string()));
    }
    joined
        .into_iter()
        .filter_map(|(n, l)| clean_line(&l).map(|c| (n, c)))
        .collect()
}

/// Convenience wrapper returning only the cleaned text.
pub fn clean_childes_text<'a>(lines: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    clean_childes(lines).into_iter().map(|(_, l)| l).collect()
}

fn clean_line(line: &str) -> Option<String> {
    let mut cur = line.trim().to_string();
    loop {
        let next = clean_pass(&cur)?;
        if next == cur {
            return Some(next);
        }
        cur = next;
    }
}

fn clean_pass(line: &str) -> Option<String> {
    let rules = chat_rules();
    if line.starts_with('%') || line.starts_with('@') {
        return None;
    }
    let mut s = rules.speaker.replace(line, "").into_owned();
    s = rules.bullet.replace_all(&s, " ").into_owned();
    s = rules.bracket.replace_all(&s, " ").into_owned();
    s = rules.angle.replace_all(&s, " ").into_owned();
    let kept: Vec<&str> = s
        .split_whitespace()
        .filter(|t| !t.starts_with('&') && !matches!(*t, "xxx" | "yyy" | "www"))
        .collect();
    if kept.is_empty() {
        None
    } else {
        Some(kept.join(" "))
    }
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

/// A non-negative rational `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        let g = gcd(num, den).max(1);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    /// `floor(self * n)`
    pub fn floor_mul(self, n: usize) -> usize {
        ((n as u128 * self.num as u128) / self.den as u128) as usize
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `p/q` exactly, or a decimal such as `0.667`, read as the
    /// simplest fraction that rounds to it at the given number of digits.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse fraction {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Fraction::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        if frac.is_empty() {
            return Fraction::new(int, 1);
        }
        let scale = 10u64.pow(frac.len() as u32);
        let m = int * scale + frac.parse::<u64>().map_err(|_| bad())?;
        // (m - 1/2, m + 1/2) / scale
        if m == 0 {
            return Fraction::new(0, 1);
        }
        let (p, q) = simplest_between(
            (2 * m - 1) as u128,
            2 * scale as u128,
            (2 * m + 1) as u128,
            2 * scale as u128,
        );
        Fraction::new(p as u64, q as u64)
    }
}

/// Fraction with the smallest denominator strictly inside `(ln/ld, hn/hd)`
/// (continued-fraction walk); `ld == 0` stands for an unbounded upper end.
fn simplest_between(ln: u128, ld: u128, hn: u128, hd: u128) -> (u128, u128) {
    let fl = ln / ld;
    if hd == 0 || (fl + 1) * hd < hn {
        return (fl + 1, 1);
    }
    // Both ends lie in [fl, fl + 1]; recurse on the reciprocals of the fractional parts.
    let (p, q) = simplest_between(hd, hn - fl * hd, ld, ln - fl * ld);
    (fl * p + q, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: Fraction,
    pub dev: Fraction,
    pub test: Fraction,
}

impl SplitSpec {
    pub fn new(train: Fraction, dev: Fraction, test: Fraction) -> Result<Self> {
        for (name, f) in [("train", train), ("dev", dev), ("test", test)] {
            if f.num == 0 || f.num >= f.den {
                return Err(Error::invalid(format!("{name} fraction {f} is not in (0, 1)")));
            }
        }
        // exact: a/b + c/d + e/f == 1
        let (a, b) = (train.num as u128, train.den as u128);
        let (c, d) = (dev.num as u128, dev.den as u128);
        let (e, f) = (test.num as u128, test.den as u128);
        if a * d * f + c * b * f + e * b * d != b * d * f {
            return Err(Error::invalid(format!(
                "split fractions {train} + {dev} + {test} do not sum to 1"
            )));
        }
        Ok(SplitSpec { train, dev, test })
    }

    /// Block sizes for `n` sentences: boundaries at `floor(train*n)` and
    /// `floor((train+dev)*n)`, so each block is within one sentence of its
    /// exact share and the leftover goes to the later blocks.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let train_end = self.train.floor_mul(n);
        let td = Fraction::new(
            self.train.num * self.dev.den + self.dev.num * self.train.den,
            self.train.den * self.dev.den,
        )
        .expect("nonzero denominator");
        let dev_end = td.floor_mul(n);
        (train_end, dev_end - train_end, n - dev_end)
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        let f = |n, d| Fraction::new(n, d).unwrap();
        SplitSpec::new(f(2, 3), f(1, 6), f(1, 6)).unwrap()
    }
}

impl FromStr for SplitSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("split {s:?} must have three comma-separated parts")));
        }
        SplitSpec::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

impl fmt::Display for SplitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.train, self.dev, self.test)
    }
}

/// Contiguous train/dev/test blocks in corpus order.
pub fn split_corpus(corpus: &Corpus, spec: &SplitSpec) -> Result<(Corpus, Corpus, Corpus)> {
    let n = corpus.len();
    if n < 3 {
        return Err(Error::invalid(format!("cannot split {n} sentences into three parts")));
    }
    let (a, b, c) = spec.sizes(n);
    for (name, size) in [("train", a), ("dev", b), ("test", c)] {
        if size == 0 {
            return Err(Error::EmptySplit(name));
        }
    }
    let part = |range: std::ops::Range<usize>, split| Corpus {
        domain: corpus.domain.clone(),
        split,
        sentences: corpus.sentences[range].to_vec(),
    };
    Ok((
        part(0..a, Split::Train),
        part(a..a + b, Split::Dev),
        part(a + b..n, Split::Test),
    ))
}

/// Same as [`split_corpus`] after a seeded shuffle of the sentence order.
pub fn split_corpus_shuffled(corpus: &Corpus, spec: &SplitSpec, seed: u64) -> Result<(Corpus, Corpus, Corpus)> {
    let mut shuffled = corpus.clone();
    shuffled.sentences.shuffle(&mut rng::stream(seed, 0));
    split_corpus(&shuffled, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TWO_TOKENS: &str = "1\tcat\tcat\tNOUN\tNN\t_\t2\tnsubj\t_\t_\n2\tsat\tsit\tVERB\tVBD\t_\t0\troot\t_\t_\n";

    #[test]
    fn parses_minimal_block() {
        let c = parse_conllu(TWO_TOKENS, "mem").unwrap();
        assert_eq!(c.len(), 1);
        let s = &c.sentences[0];
        assert_eq!(s.len(), 2);
        assert_eq!(s.tokens[0].head, Some(1));
        assert_eq!(s.tokens[1].head, None);
        assert_eq!(s.tokens[1].deprel.as_deref(), Some("root"));
        assert_eq!(s.tokens[1].lemma, "sit");
    }

    #[test]
    fn empty_input_gives_empty_corpus() {
        assert!(parse_conllu("", "mem").unwrap().is_empty());
        assert!(parse_conllu("\n\n", "mem").unwrap().is_empty());
    }

    #[test]
    fn bad_head_names_the_line() {
        let text = "# sent_id = a\n1\tcat\tcat\tNOUN\tNN\t_\tabc\tnsubj\t_\t_\n";
        let err = parse_conllu(text, "f.conllu").unwrap_err().to_string();
        assert!(err.contains("f.conllu:2"), "{err}");
        assert!(err.contains("abc"), "{err}");
    }

    #[test]
    fn wrong_column_count_names_the_line() {
        let err = parse_conllu("1\tcat\tcat\n", "f").unwrap_err().to_string();
        assert!(err.contains("f:1"), "{err}");
    }

    #[test]
    fn multiword_ranges_are_skipped() {
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n1\tdo\tdo\tAUX\tVBP\t_\t0\troot\t_\t_\n2\tn't\tnot\tPART\tRB\t_\t1\tadvmod\t_\t_\n";
        let c = parse_conllu(text, "mem").unwrap();
        assert_eq!(c.sentences[0].forms(), vec!["do", "n't"]);
    }

    #[test]
    fn comments_survive_round_trip() {
        let text = format!("# sent_id = x1\n# source = childes/brown\n# speaker = MOT\n{TWO_TOKENS}");
        let c = parse_conllu(&text, "mem").unwrap();
        assert_eq!(c.sentences[0].id, "x1");
        assert_eq!(c.sentences[0].source, "childes/brown");
        assert_eq!(c.sentences[0].comments, vec!["speaker = MOT".to_string()]);
        let back = parse_conllu(&to_conllu(&c), "mem").unwrap();
        assert_eq!(back.sentences, c.sentences);
    }

    #[test]
    fn raw_tokens_round_trip() {
        let s = AnnotatedSentence::from_forms("r", &["you", "want", "it", "?"]).unwrap();
        let c = Corpus::new("d", vec![s]).unwrap();
        let back = parse_conllu(&to_conllu(&c), "mem").unwrap();
        assert_eq!(back.sentences, c.sentences);
    }

    #[test]
    fn text_format_and_empty_corpus() {
        let s = AnnotatedSentence::from_forms("r", &["you", "want", "it", "?"]).unwrap();
        let c = Corpus::new("d", vec![s]).unwrap();
        assert_eq!(to_text(&c), "you want it ?\n");
        assert_eq!(to_conllu(&Corpus::empty("d")), "");
        assert_eq!(to_text(&Corpus::empty("d")), "");
    }

    #[test]
    fn chat_cleaning_examples() {
        assert_eq!(clean_childes_text(["*MOT:\tyou want it ?"]), vec!["you want it ?"]);
        assert!(clean_childes_text(["%act:\tpoints at toy"]).is_empty());
        assert_eq!(clean_childes_text(["*CHI:\t<I want> [/] I want xxx ."]), vec!["I want ."]);
        assert_eq!(
            clean_childes_text(["*MOT:\tlook &um at the doggie [= dog] .", "@End"]),
            vec!["look at the doggie ."]
        );
        assert_eq!(
            clean_childes_text(["*MOT:\tdo you want", "\tthe ball ?"]),
            vec!["do you want the ball ?"]
        );
    }

    proptest! {
        #[test]
        fn chat_cleaning_is_idempotent(lines in proptest::collection::vec("[*%@<>\\[\\]&a-cx: \\t]{0,24}", 0..6)) {
            let once = clean_childes_text(lines.iter().map(String::as_str));
            let twice = clean_childes_text(once.iter().map(String::as_str));
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn split_concatenation_is_identity(n in 3usize..400) {
            let sents = (0..n)
                .map(|i| AnnotatedSentence::from_forms(format!("s{i}"), &["w"]).unwrap())
                .collect();
            let c = Corpus::new("d", sents).unwrap();
            let spec = SplitSpec::default();
            match split_corpus(&c, &spec) {
                Ok((a, b, t)) => {
                    let all: Vec<_> = a.sentences.iter().chain(&b.sentences).chain(&t.sentences).cloned().collect();
                    prop_assert_eq!(all, c.sentences.clone());
                    for (part, frac) in [(&a, spec.train), (&b, spec.dev), (&t, spec.test)] {
                        prop_assert!((part.len() as f64 - frac.as_f64() * n as f64).abs() < 1.0 + 1e-9);
                    }
                }
                Err(e) => prop_assert!(matches!(e, Error::EmptySplit(_))),
            }
        }
    }

    #[test]
    fn split_sizes() {
        let spec = SplitSpec::default();
        assert_eq!(spec.sizes(12), (8, 2, 2));
        assert_eq!(spec.sizes(6), (4, 1, 1));
        assert_eq!(spec.sizes(3), (2, 0, 1));
        let sents = (0..3)
            .map(|i| AnnotatedSentence::from_forms(format!("s{i}"), &["w"]).unwrap())
            .collect();
        let c = Corpus::new("d", sents).unwrap();
        assert_eq!(split_corpus(&c, &spec).unwrap_err().to_string(), "empty dev split");
        let two = Corpus::new("d", c.sentences[..2].to_vec()).unwrap();
        assert!(split_corpus(&two, &spec).is_err());
    }

    #[test]
    fn split_labels_are_set() {
        let sents = (0..12)
            .map(|i| AnnotatedSentence::from_forms(format!("s{i}"), &["w"]).unwrap())
            .collect();
        let c = Corpus::new("d", sents).unwrap();
        let (a, b, t) = split_corpus(&c, &SplitSpec::default()).unwrap();
        assert_eq!((a.split, b.split, t.split), (Split::Train, Split::Dev, Split::Test));
        assert_eq!(b.sentences[0].id, "s8");
    }

    #[test]
    fn decimal_fractions_snap_to_simplest() {
        let spec: SplitSpec = "0.667,0.167,0.167".parse().unwrap();
        assert_eq!(spec, SplitSpec::default());
        let f: Fraction = "0.8".parse().unwrap();
        assert_eq!((f.num, f.den), (4, 5));
        let f: Fraction = "0.25".parse().unwrap();
        assert_eq!((f.num, f.den), (1, 4));
        assert!("0.5,0.3,0.3".parse::<SplitSpec>().is_err());
        assert!("1/2,1/4,1/4".parse::<SplitSpec>().is_ok());
    }
}
