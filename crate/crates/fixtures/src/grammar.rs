//! A small dependency-annotated sentence generator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use verbscope::corpus::{AnnotatedSentence, Token};

use crate::lexicon::{Frame, Noun, Verb};

pub type Rng8 = ChaCha8Rng;

/// Everything that distinguishes one register from the other.
pub struct Register {
    pub name: &'static str,
    pub nouns: &'static [Noun],
    pub verbs: &'static [Verb],
    pub propn: &'static [&'static str],
    pub adj: &'static [&'static str],
    pub adv: &'static [&'static str],
    pub intj: &'static [&'static str],
    pub voc: &'static [&'static str],
    pub adjunct_pp: &'static [(&'static str, &'static [&'static str])],
    pub noun_pp: &'static [&'static str],
    pub sg_dets: &'static [&'static str],
    pub pl_dets: &'static [&'static str],
    pub pronouns: &'static [(&'static str, bool)],
    pub p_pron_subj: f64,
    pub p_plural: f64,
    pub p_adj: f64,
    pub p_noun_pp: f64,
    pub p_adjunct: f64,
    pub p_adv: f64,
    pub p_intj: f64,
    pub p_voc: f64,
    pub p_year: f64,
    /// Weights of the sentence shapes, in [`Shape`] order.
    pub shapes: [f64; 8],
    pub zipf: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Present,
    Past,
    ModalQuestion,
    DoQuestion,
    Imperative,
    Progressive,
    Copular,
    FrontedAdjunct,
}

const SHAPES: [Shape; 8] = [
    Shape::Present,
    Shape::Past,
    Shape::ModalQuestion,
    Shape::DoQuestion,
    Shape::Imperative,
    Shape::Progressive,
    Shape::Copular,
    Shape::FrontedAdjunct,
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum VForm {
    Base,
    Sg3,
    NonSg3,
    Past,
    Gerund,
}

struct Tok {
    form: String,
    lemma: String,
    upos: &'static str,
    xpos: &'static str,
    head: Option<usize>,
    deprel: &'static str,
}

#[derive(Default)]
struct Builder {
    toks: Vec<Tok>,
}

impl Builder {
    fn push(&mut self, form: &str, lemma: &str, upos: &'static str, xpos: &'static str) -> usize {
        self.toks.push(Tok {
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos,
            xpos,
            head: None,
            deprel: "root",
        });
        self.toks.len() - 1
    }

    fn attach(&mut self, dep: usize, head: usize, rel: &'static str) {
        self.toks[dep].head = Some(head);
        self.toks[dep].deprel = rel;
    }
}

fn zipf_pick(n: usize, s: f64, rng: &mut Rng8) -> usize {
    let total: f64 = (0..n).map(|r| 1.0 / ((r + 1) as f64).powf(s)).sum();
    let mut x = rng.gen::<f64>() * total;
    for r in 0..n {
        let w = 1.0 / ((r + 1) as f64).powf(s);
        if x < w {
            return r;
        }
        x -= w;
    }
    n - 1
}

fn pick<'a, T>(xs: &'a [T], rng: &mut Rng8) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

fn weighted(ws: &[f64], rng: &mut Rng8) -> usize {
    let total: f64 = ws.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in ws.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    ws.len() - 1
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub struct Generator<'r> {
    reg: &'r Register,
}

impl<'r> Generator<'r> {
    pub fn new(reg: &'r Register) -> Self {
        Generator { reg }
    }

    fn noun_of(&self, classes: &[&str], rng: &mut Rng8) -> &'static Noun {
        let pool: Vec<&'static Noun> = self.reg.nouns.iter().filter(|n| classes.contains(&n.class)).collect();
        assert!(!pool.is_empty(), "no nouns for classes {classes:?}");
        pool[zipf_pick(pool.len(), self.reg.zipf, rng)]
    }

    /// NP headed by a noun from `classes`; returns (head index, plural).
    fn np(&self, b: &mut Builder, classes: &[&str], rng: &mut Rng8, depth: usize) -> (usize, bool) {
        let r = self.reg;
        if classes.contains(&"person") && !r.propn.is_empty() && rng.gen_bool(0.12) {
            let p = *pick(r.propn, rng);
            return (b.push(p, p, "PROPN", "NNP"), false);
        }
        let noun = self.noun_of(classes, rng);
        let plural = !noun.plural.is_empty() && rng.gen_bool(r.p_plural);
        let det = if plural {
            *pick(r.pl_dets, rng)
        } else if noun.plural.is_empty() {
            *pick(&["the", "some", "the"], rng)
        } else {
            *pick(r.sg_dets, rng)
        };
        let adj = rng.gen_bool(r.p_adj).then(|| *pick(r.adj, rng));
        let first = adj.unwrap_or(if plural { noun.plural } else { noun.lemma });
        let det = if det == "a" && first.starts_with(['a', 'e', 'i', 'o', 'u']) { "an" } else { det };
        let (dupos, dxpos, drel) = match det {
            "my" | "your" | "his" | "her" | "its" | "their" | "our" => ("PRON", "PRP$", "nmod:poss"),
            "many" | "several" => ("ADJ", "JJ", "amod"),
            _ => ("DET", "DT", "det"),
        };
        let dlemma = if det == "an" { "a" } else { det };
        let d = b.push(det, dlemma, dupos, dxpos);
        let a = adj.map(|a| b.push(a, a, "ADJ", "JJ"));
        let h = if plural {
            b.push(noun.plural, noun.lemma, "NOUN", "NNS")
        } else {
            b.push(noun.lemma, noun.lemma, "NOUN", "NN")
        };
        b.attach(d, h, drel);
        if let Some(a) = a {
            b.attach(a, h, "amod");
        }
        if depth == 0 && !r.noun_pp.is_empty() && rng.gen_bool(r.p_noun_pp) {
            let p = *pick(r.noun_pp, rng);
            let pi = b.push(p, p, "ADP", "IN");
            let (n2, _) = self.np(b, &[noun.class, "place", "group"], rng, depth + 1);
            b.attach(pi, n2, "case");
            b.attach(n2, h, "nmod");
        }
        (h, plural)
    }

    /// Subject for `verb`; returns (head index, takes 3sg agreement).
    fn subject(&self, b: &mut Builder, verb: &Verb, rng: &mut Rng8) -> (usize, bool) {
        let r = self.reg;
        if rng.gen_bool(r.p_pron_subj) {
            let (p, sg3) = r.pronouns[zipf_pick(r.pronouns.len(), 1.0, rng)];
            (b.push(p, &p.to_lowercase(), "PRON", "PRP"), sg3)
        } else {
            let (h, plural) = self.np(b, verb.subj, rng, 0);
            (h, !plural)
        }
    }

    fn pick_verb(&self, rng: &mut Rng8, allow_clausal: bool) -> &'static Verb {
        loop {
            let v = &self.reg.verbs[zipf_pick(self.reg.verbs.len(), self.reg.zipf, rng)];
            if allow_clausal || v.frames.iter().any(|f| !matches!(f, Frame::ToInf | Frame::That)) {
                return v;
            }
        }
    }

    fn verb_token(&self, b: &mut Builder, v: &Verb, form: VForm) -> usize {
        let (f, x) = match form {
            VForm::Base => (v.lemma, "VB"),
            VForm::NonSg3 => (v.lemma, "VBP"),
            VForm::Sg3 => (v.vbz, "VBZ"),
            VForm::Past => (v.vbd, "VBD"),
            VForm::Gerund => (v.vbg, "VBG"),
        };
        b.push(f, v.lemma, "VERB", x)
    }

    /// Verb plus complement; returns the verb index.
    fn vp(&self, b: &mut Builder, v: &Verb, form: VForm, rng: &mut Rng8, depth: usize) -> usize {
        let vi = self.verb_token(b, v, form);
        let frames: Vec<&Frame> = v
            .frames
            .iter()
            .filter(|f| depth < 2 || !matches!(f, Frame::ToInf | Frame::That))
            .collect();
        let frame = *frames[rng.gen_range(0..frames.len())];
        match frame {
            Frame::Obj(cls) => {
                let (o, _) = self.np(b, cls, rng, 0);
                b.attach(o, vi, "obj");
            }
            Frame::Pp(p, cls) => {
                let pi = b.push(p, p, "ADP", "IN");
                let (o, _) = self.np(b, cls, rng, 0);
                b.attach(pi, o, "case");
                b.attach(o, vi, "obl");
            }
            Frame::ObjPp(c1, p, c2) => {
                let (o, _) = self.np(b, c1, rng, 1);
                b.attach(o, vi, "obj");
                let pi = b.push(p, p, "ADP", "IN");
                let (o2, _) = self.np(b, c2, rng, 1);
                b.attach(pi, o2, "case");
                b.attach(o2, vi, "obl");
            }
            Frame::Prt(p, cls) => {
                let pi = b.push(p, p, "ADP", "RP");
                b.attach(pi, vi, "compound:prt");
                let (o, _) = self.np(b, cls, rng, 0);
                b.attach(o, vi, "obj");
            }
            Frame::Dat(c1, c2) => {
                let (o, _) = self.np(b, c1, rng, 1);
                b.attach(o, vi, "iobj");
                let (o2, _) = self.np(b, c2, rng, 1);
                b.attach(o2, vi, "obj");
            }
            Frame::Intrans(advs) => {
                if rng.gen_bool(0.8) {
                    let a = *pick(advs, rng);
                    let (u, x, rel) = if matches!(a, "down" | "up" | "away") {
                        ("ADP", "RP", "compound:prt")
                    } else {
                        ("ADV", "RB", "advmod")
                    };
                    let ai = b.push(a, a, u, x);
                    b.attach(ai, vi, rel);
                }
            }
            Frame::ToInf => {
                let t = b.push("to", "to", "PART", "TO");
                let inner = self.pick_verb(rng, false);
                let iv = self.vp(b, inner, VForm::Base, rng, depth + 1);
                b.attach(t, iv, "mark");
                b.attach(iv, vi, "xcomp");
            }
            Frame::That => {
                let t = b.push("that", "that", "SCONJ", "IN");
                let inner = self.pick_verb(rng, false);
                let (s, sg3) = self.subject(b, inner, rng);
                let form = if rng.gen_bool(0.5) {
                    VForm::Past
                } else if sg3 {
                    VForm::Sg3
                } else {
                    VForm::NonSg3
                };
                let iv = self.vp(b, inner, form, rng, depth + 1);
                b.attach(s, iv, "nsubj");
                b.attach(t, iv, "mark");
                b.attach(iv, vi, "ccomp");
            }
        }
        if depth == 0 {
            self.adjuncts(b, vi, rng);
        }
        vi
    }

    fn adjuncts(&self, b: &mut Builder, vi: usize, rng: &mut Rng8) {
        let r = self.reg;
        let mut budget = 2;
        while budget > 0 && rng.gen_bool(r.p_adjunct) {
            budget -= 1;
            if rng.gen_bool(r.p_year) {
                let p = b.push("in", "in", "ADP", "IN");
                let y = rng.gen_range(1820..2010).to_string();
                let yi = b.push(&y, &y, "NUM", "CD");
                b.attach(p, yi, "case");
                b.attach(yi, vi, "obl");
            } else {
                let (p, cls) = *pick(r.adjunct_pp, rng);
                let pi = b.push(p, p, "ADP", "IN");
                let (o, _) = self.np(b, cls, rng, 1);
                b.attach(pi, o, "case");
                b.attach(o, vi, "obl");
            }
        }
        if rng.gen_bool(r.p_adv) {
            let a = *pick(r.adv, rng);
            let ai = b.push(a, a, "ADV", "RB");
            b.attach(ai, vi, "advmod");
        }
    }

    fn finite(&self, sg3: bool, past: bool) -> VForm {
        if past {
            VForm::Past
        } else if sg3 {
            VForm::Sg3
        } else {
            VForm::NonSg3
        }
    }

    fn main_clause(&self, b: &mut Builder, shape: Shape, rng: &mut Rng8) -> (usize, &'static str) {
        let r = self.reg;
        match shape {
            Shape::Present | Shape::Past | Shape::FrontedAdjunct => {
                let mut fronted = None;
                if shape == Shape::FrontedAdjunct {
                    let (p, cls) = *pick(r.adjunct_pp, rng);
                    let pi = b.push(p, p, "ADP", "IN");
                    let (o, _) = self.np(b, cls, rng, 1);
                    b.attach(pi, o, "case");
                    let c = b.push(",", ",", "PUNCT", ",");
                    fronted = Some((o, c));
                }
                let v = self.pick_verb(rng, true);
                let (s, sg3) = self.subject(b, v, rng);
                let past = shape != Shape::Present && (shape == Shape::Past || rng.gen_bool(0.7));
                let vi = self.vp(b, v, self.finite(sg3, past), rng, 0);
                b.attach(s, vi, "nsubj");
                if let Some((o, c)) = fronted {
                    b.attach(o, vi, "obl");
                    b.attach(c, vi, "punct");
                }
                (vi, ".")
            }
            Shape::ModalQuestion => {
                let m = *pick(&["can", "will", "should", "could"], rng);
                let mi = b.push(m, m, "AUX", "MD");
                let v = self.pick_verb(rng, true);
                let (s, _) = self.subject(b, v, rng);
                let vi = self.vp(b, v, VForm::Base, rng, 0);
                b.attach(mi, vi, "aux");
                b.attach(s, vi, "nsubj");
                (vi, "?")
            }
            Shape::DoQuestion => {
                let di = b.push("do", "do", "AUX", "VBP");
                let v = self.pick_verb(rng, true);
                let (s, sg3) = self.subject(b, v, rng);
                if sg3 {
                    b.toks[di].form = "does".into();
                    b.toks[di].xpos = "VBZ";
                }
                let vi = self.vp(b, v, VForm::Base, rng, 0);
                b.attach(di, vi, "aux");
                b.attach(s, vi, "nsubj");
                (vi, "?")
            }
            Shape::Imperative => {
                let v = self.pick_verb(rng, false);
                let vi = self.vp(b, v, VForm::Base, rng, 0);
                (vi, if rng.gen_bool(0.5) { "." } else { "!" })
            }
            Shape::Progressive => {
                let v = self.pick_verb(rng, true);
                let (s, sg3) = self.subject(b, v, rng);
                let (aux, x) = if b.toks[s].form == "I" {
                    ("am", "VBP")
                } else if sg3 {
                    ("is", "VBZ")
                } else {
                    ("are", "VBP")
                };
                let ai = b.push(aux, "be", "AUX", x);
                let vi = self.vp(b, v, VForm::Gerund, rng, 0);
                b.attach(ai, vi, "aux");
                b.attach(s, vi, "nsubj");
                (vi, if rng.gen_bool(0.7) { "." } else { "?" })
            }
            Shape::Copular => {
                let (pr, lemma) = *pick(&[("that", "that"), ("it", "it"), ("this", "this")], rng);
                let pi = b.push(pr, lemma, "PRON", if pr == "it" { "PRP" } else { "DT" });
                let ci = b.push("is", "be", "AUX", "VBZ");
                let all: Vec<&str> = r.nouns.iter().map(|n| n.class).collect();
                let (h, _) = self.np(b, &all, rng, 1);
                if b.toks[h].xpos == "NNS" {
                    b.toks[ci].form = "are".into();
                    b.toks[ci].xpos = "VBP";
                    if pr != "it" {
                        b.toks[pi].form = if pr == "that" { "those" } else { "these" }.into();
                    }
                }
                b.attach(pi, h, "nsubj");
                b.attach(ci, h, "cop");
                (h, ".")
            }
        }
    }

    pub fn sentence(&self, id: &str, rng: &mut Rng8) -> AnnotatedSentence {
        let r = self.reg;
        let mut b = Builder::default();
        let intj = (!r.intj.is_empty() && rng.gen_bool(r.p_intj)).then(|| {
            let w = *pick(r.intj, rng);
            let i = b.push(w, w, "INTJ", "UH");
            let c = b.push(",", ",", "PUNCT", ",");
            (i, c)
        });
        let shape = SHAPES[weighted(&r.shapes, rng)];
        let (root, end) = self.main_clause(&mut b, shape, rng);
        if let Some((i, c)) = intj {
            b.attach(i, root, "discourse");
            b.attach(c, root, "punct");
        }
        if !r.voc.is_empty() && rng.gen_bool(r.p_voc) {
            let c = b.push(",", ",", "PUNCT", ",");
            let v = *pick(r.voc, rng);
            let vi = b.push(v, v, "NOUN", "NN");
            b.attach(c, vi, "punct");
            b.attach(vi, root, "vocative");
        }
        let p = b.push(end, end, "PUNCT", ".");
        b.attach(p, root, "punct");

        let mut tokens: Vec<Token> = b
            .toks
            .into_iter()
            .map(|t| Token {
                form: t.form,
                lemma: t.lemma,
                upos: t.upos.to_string(),
                xpos: t.xpos.to_string(),
                head: t.head,
                deprel: Some(t.deprel.to_string()),
            })
            .collect();
        if tokens[0].upos != "PROPN" {
            tokens[0].form = capitalize(&tokens[0].form);
        }
        let mut s = AnnotatedSentence::new(id, tokens).expect("generated sentence is well formed");
        s.source = format!("synthetic:{}", r.name);
        s
    }
}
