//! Deterministic synthetic corpora standing in for child-directed speech
//! and written prose.
//!
//! Both registers share function words and a handful of content words but
//! otherwise draw on separate vocabularies. Verbs select the classes of
//! their arguments and take distinct subcategorization frames, so a model
//! that sees natural word order can tell a sentence's verb from a
//! same-frequency substitute.

pub mod grammar;
pub mod lexicon;

use rand::SeedableRng;
use verbscope::corpus::{AnnotatedSentence, Corpus};
use verbscope::rng;

use grammar::{Generator, Register, Rng8};
use lexicon::*;

pub const CONVERSATIONAL: Register = Register {
    name: "conversational",
    nouns: CONV_NOUNS,
    verbs: CONV_VERBS,
    propn: CONV_PROPN,
    adj: CONV_ADJ,
    adv: CONV_ADV,
    intj: CONV_INTJ,
    voc: CONV_VOC,
    adjunct_pp: CONV_PLACE_PP,
    noun_pp: &[],
    sg_dets: &["the", "the", "a", "this", "that", "my", "your"],
    pl_dets: &["the", "some", "these", "those", "my", "your"],
    pronouns: &[("you", false), ("I", false), ("we", false), ("he", true), ("she", true), ("they", false), ("it", true)],
    p_pron_subj: 0.6,
    p_plural: 0.25,
    p_adj: 0.25,
    p_noun_pp: 0.0,
    p_adjunct: 0.3,
    p_adv: 0.25,
    p_intj: 0.2,
    p_voc: 0.12,
    p_year: 0.0,
    shapes: [0.3, 0.1, 0.15, 0.12, 0.15, 0.1, 0.08, 0.0],
    zipf: 0.9,
};

pub const WRITTEN: Register = Register {
    name: "written",
    nouns: WRIT_NOUNS,
    verbs: WRIT_VERBS,
    propn: WRIT_PROPN,
    adj: WRIT_ADJ,
    adv: WRIT_ADV,
    intj: &[],
    voc: &[],
    adjunct_pp: WRIT_PLACE_PP,
    noun_pp: WRIT_NOUN_PP,
    sg_dets: &["the", "the", "the", "a", "this", "its", "their"],
    pl_dets: &["the", "the", "many", "several", "these", "their"],
    pronouns: &[("they", false), ("he", true), ("she", true), ("it", true), ("we", false)],
    p_pron_subj: 0.15,
    p_plural: 0.3,
    p_adj: 0.45,
    p_noun_pp: 0.35,
    p_adjunct: 0.6,
    p_adv: 0.3,
    p_intj: 0.0,
    p_voc: 0.0,
    p_year: 0.3,
    shapes: [0.3, 0.45, 0.0, 0.0, 0.0, 0.05, 0.02, 0.18],
    zipf: 0.9,
};

pub fn register(name: &str) -> Option<&'static Register> {
    match name {
        "conversational" => Some(&CONVERSATIONAL),
        "written" => Some(&WRITTEN),
        _ => None,
    }
}

/// Sentences until at least `min_tokens` tokens have been produced.
/// Sentence `i` is drawn from its own stream, so any prefix of a larger
/// corpus equals the smaller corpus.
pub fn generate(reg: &Register, min_tokens: usize, seed: u64) -> Corpus {
    let gen = Generator::new(reg);
    let mut sentences: Vec<AnnotatedSentence> = Vec::new();
    let mut tokens = 0;
    let mut i = 0u64;
    while tokens < min_tokens {
        let mut r = Rng8::seed_from_u64(rng::mix64(seed, i));
        let s = gen.sentence(&format!("{}-{:06}", reg.name, i + 1), &mut r);
        tokens += s.len();
        sentences.push(s);
        i += 1;
    }
    Corpus::new(reg.name, sentences).expect("generated ids are unique")
}

/// Exactly `n` sentences.
pub fn sentences(reg: &Register, n: usize, seed: u64) -> Corpus {
    let gen = Generator::new(reg);
    let sentences = (0..n as u64)
        .map(|i| {
            let mut r = Rng8::seed_from_u64(rng::mix64(seed, i));
            gen.sentence(&format!("{}-{:06}", reg.name, i + 1), &mut r)
        })
        .collect();
    Corpus::new(reg.name, sentences).expect("generated ids are unique")
}

/// Token budget and seed of the bundled fixture files.
pub const FIXTURE_TOKENS: usize = 100_000;
pub const FIXTURE_SEED: u64 = 20_240_601;

pub fn bundled(reg: &Register) -> Corpus {
    generate(reg, FIXTURE_TOKENS, FIXTURE_SEED ^ verbscope::rng::label_seed(reg.name))
}
