//! The experiment grid: every (corpus, condition, seed) cell runs
//! split → table → perturb → train LM → score → evaluate, followed by the
//! cross-domain, trajectory and regression summaries.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{self, ChartOptions, Observation, OlsOptions, Series};
use crate::corpus::{Corpus, FrequencyTable};
use crate::error::{Error, Result};
use crate::eval::{self, EvalLabels, EvalResult, ResultRow};
use crate::ingest::{self, Format, SplitSpec};
use crate::pairgen::{self, LemmaIndex, LexiconConfig, MinimalPair, Paradigm, SemanticConfig};
use crate::perturb::{self, Condition, PerturbOptions, PerturbReport};
use crate::rng;
use crate::scorer::{self, NGramConfig, NGramLM};
use crate::stats;
use crate::tagger::TaggerModel;

/// Checkpoint label of the fully trained model.
pub const FINAL_CHECKPOINT: &str = "final";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub domain: String,
    pub path: PathBuf,
    #[serde(default = "default_format")]
    pub format: String,
}

fn default_format() -> String {
    "conllu".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairSettings {
    pub max_alts: usize,
    pub len_min: usize,
    pub len_max: usize,
    /// Agreement pairs per paradigm; 0 disables agreement evaluation.
    pub n_per_paradigm: usize,
    pub paradigms: Vec<Paradigm>,
    pub pct_lo: f64,
    pub pct_hi: f64,
    pub min_lexicon: usize,
}

impl Default for PairSettings {
    fn default() -> Self {
        let sem = SemanticConfig::default();
        let lex = LexiconConfig::default();
        PairSettings {
            max_alts: sem.max_alts,
            len_min: sem.len_min,
            len_max: sem.len_max,
            n_per_paradigm: 200,
            paradigms: Paradigm::AGREEMENT.to_vec(),
            pct_lo: lex.pct_lo,
            pct_hi: lex.pct_hi,
            min_lexicon: lex.min_entries,
        }
    }
}

impl PairSettings {
    fn semantic(&self) -> SemanticConfig {
        SemanticConfig {
            max_alts: self.max_alts,
            len_min: self.len_min,
            len_max: self.len_max,
        }
    }

    fn lexicon(&self) -> LexiconConfig {
        LexiconConfig {
            pct_lo: self.pct_lo,
            pct_hi: self.pct_hi,
            min_entries: self.min_lexicon,
            ..LexiconConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub corpora: Vec<CorpusSpec>,
    #[serde(default = "default_conditions")]
    pub conditions: Vec<Condition>,
    #[serde(default = "default_order")]
    pub lm_order: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Train/dev/test fractions, e.g. "2/3,1/6,1/6".
    #[serde(default = "default_split")]
    pub split: String,
    /// Fractions of the training split at which trajectory models are trained.
    #[serde(default = "default_checkpoints")]
    pub checkpoints: Vec<f64>,
    #[serde(default)]
    pub perturb: PerturbOptions,
    #[serde(default)]
    pub pairs: PairSettings,
    /// Tagger for text/chat corpora.
    #[serde(default)]
    pub tagger: Option<PathBuf>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

fn default_conditions() -> Vec<Condition> {
    Condition::ALL.to_vec()
}
fn default_order() -> usize {
    3
}
fn default_seeds() -> Vec<u64> {
    vec![1, 2, 3]
}
fn default_split() -> String {
    SplitSpec::default().to_string()
}
fn default_checkpoints() -> Vec<f64> {
    vec![0.01, 0.05, 0.1, 0.25, 0.5, 1.0]
}
fn default_output() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::invalid(format!("{origin}: {}", e.to_string().trim())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text, &path.display().to_string())?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for c in &mut cfg.corpora {
            resolve(&mut c.path);
        }
        if let Some(t) = &mut cfg.tagger {
            resolve(t);
        }
        resolve(&mut cfg.output_dir);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.corpora.is_empty() || self.conditions.is_empty() || self.seeds.is_empty() {
            return Err(Error::invalid("config needs at least one corpus, one condition and one seed"));
        }
        let domains: BTreeSet<&str> = self.corpora.iter().map(|c| c.domain.as_str()).collect();
        if domains.len() != self.corpora.len() {
            return Err(Error::invalid("corpus domains must be unique"));
        }
        let conds: BTreeSet<_> = self.conditions.iter().collect();
        let seeds: BTreeSet<_> = self.seeds.iter().collect();
        if conds.len() != self.conditions.len() || seeds.len() != self.seeds.len() {
            return Err(Error::invalid("conditions and seeds must not repeat"));
        }
        if self.lm_order < 1 {
            return Err(Error::invalid("lm_order must be at least 1"));
        }
        if self.checkpoints.iter().any(|c| !(*c > 0.0 && *c <= 1.0)) {
            return Err(Error::invalid("checkpoints must lie in (0, 1]"));
        }
        for c in &self.corpora {
            c.format.parse::<Format>()?;
        }
        self.split.parse::<SplitSpec>()?;
        Ok(())
    }

    /// SHA-256 over the settings that determine outputs (not the output directory).
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        let json = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub threads: Option<usize>,
    pub use_cache: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub domain: String,
    pub condition: Condition,
    pub seed: u64,
}

impl CellKey {
    pub fn slug(&self) -> String {
        format!("{}-{}-seed{}", self.domain, self.condition.slug(), self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub checkpoint: String,
    pub semantic_acc: f64,
    pub syntactic_acc: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellOutput {
    pub key: CellKey,
    pub report: PerturbReport,
    pub results: Vec<EvalResult>,
    pub trajectory: Vec<TrajectoryPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestCell {
    pub domain: String,
    pub condition: Condition,
    pub seed: u64,
    pub status: String,
    pub cache_key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub inputs: Vec<ManifestFile>,
    pub seeds: Vec<u64>,
    pub cells: Vec<ManifestCell>,
    pub notes: Vec<String>,
    pub outputs: Vec<ManifestFile>,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub manifest: Manifest,
    pub cells: Vec<CellOutput>,
    pub failures: Vec<(CellKey, String)>,
}

impl RunSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Prepared {
    domain: String,
    file_hash: String,
    train: Corpus,
    table: FrequencyTable,
    stats: stats::CorpusStats,
    /// Semantic and agreement pairs per seed, drawn from the untouched test split.
    semantic: BTreeMap<u64, Vec<MinimalPair>>,
    agreement: BTreeMap<u64, Vec<MinimalPair>>,
}

fn prepare(spec: &CorpusSpec, cfg: &ExperimentConfig, tagger: Option<&TaggerModel>, notes: &mut Vec<String>) -> Result<Prepared> {
    let bytes = fs::read(&spec.path).map_err(|e| Error::io(&spec.path, e))?;
    let mut corpus = ingest::read_corpus(&spec.path, spec.format.parse()?, tagger)?;
    corpus.domain = spec.domain.clone();
    let split: SplitSpec = cfg.split.parse()?;
    let (train, _dev, test) = ingest::split_corpus(&corpus, &split)?;
    let table = FrequencyTable::from_corpus(&train)?;
    let stats = stats::compute_stats(&train)?;

    let mut semantic = BTreeMap::new();
    let mut agreement = BTreeMap::new();
    let lexicon = if cfg.pairs.n_per_paradigm > 0 {
        match pairgen::extract_agreement_lexicon(&table, &LemmaIndex::from_corpus(&train), &cfg.pairs.lexicon()) {
            Ok(l) => Some(l),
            Err(e) => {
                let msg = format!("{}: agreement evaluation skipped: {e}", spec.domain);
                warn!("{msg}");
                notes.push(msg);
                None
            }
        }
    } else {
        None
    };
    for &seed in &cfg.seeds {
        let pair_seed = rng::mix64(seed, rng::label_seed(&spec.domain));
        let (pairs, report) = pairgen::gen_semantic_pairs(&test, &table, &cfg.pairs.semantic(), pair_seed);
        info!(
            "{} seed {seed}: {} semantic pairs from {} of {} test sentences ({} verb lemmas)",
            spec.domain, report.pairs, report.source_sentences, report.sentences, report.verb_lemmas
        );
        semantic.insert(seed, pairs);
        if let Some(lex) = &lexicon {
            agreement.insert(
                seed,
                pairgen::gen_agreement_pairs(lex, &cfg.pairs.paradigms, cfg.pairs.n_per_paradigm, pair_seed)?,
            );
        }
    }
    Ok(Prepared {
        domain: spec.domain.clone(),
        file_hash: sha256_hex(&bytes),
        train,
        table,
        stats,
        semantic,
        agreement,
    })
}

fn checkpoint_label(frac: f64) -> String {
    format!("{frac}")
}

fn evaluate_model(
    lm: &NGramLM,
    pairs: &[MinimalPair],
    labels: EvalLabels,
) -> Result<EvalResult> {
    let scored = scorer::score_pairs(lm, pairs)?;
    eval::evaluate(&scored, pairs, labels)
}

fn run_cell(key: &CellKey, prepared: &[Prepared], cfg: &ExperimentConfig) -> Result<CellOutput> {
    let own = prepared.iter().find(|p| p.domain == key.domain).expect("cell domain prepared");
    let (train, report) = perturb::perturb_corpus(&own.train, key.condition, Some(&own.table), key.seed, &cfg.perturb)?;
    let ngram = NGramConfig::new(cfg.lm_order);
    let lm = NGramLM::train(&train, &ngram)?;
    let labels = |eval_domain: &str, checkpoint: &str| EvalLabels {
        train_domain: key.domain.clone(),
        eval_domain: eval_domain.to_string(),
        condition: key.condition.label().to_string(),
        checkpoint: checkpoint.to_string(),
        seed: Some(key.seed),
    };

    let mut results = Vec::new();
    let sem = &own.semantic[&key.seed];
    if sem.is_empty() {
        return Err(Error::invalid(format!("{}: no semantic pairs could be generated", key.domain)));
    }
    results.push(evaluate_model(&lm, sem, labels(&key.domain, FINAL_CHECKPOINT))?);
    let agr = own.agreement.get(&key.seed).filter(|a| !a.is_empty());
    if let Some(agr) = agr {
        results.push(evaluate_model(&lm, agr, labels(&key.domain, FINAL_CHECKPOINT))?);
    }
    if key.condition == Condition::Original {
        for other in prepared.iter().filter(|p| p.domain != key.domain) {
            let pairs = &other.semantic[&key.seed];
            if !pairs.is_empty() {
                results.push(evaluate_model(&lm, pairs, labels(&other.domain, FINAL_CHECKPOINT))?);
            }
        }
    }

    let mut trajectory = Vec::new();
    for &frac in &cfg.checkpoints {
        let n = ((frac * train.len() as f64).ceil() as usize).clamp(1, train.len());
        let prefix = Corpus {
            domain: train.domain.clone(),
            split: train.split,
            sentences: train.sentences[..n].to_vec(),
        };
        let cp = checkpoint_label(frac);
        let lm_cp = NGramLM::train(&prefix, &ngram)?;
        let s = evaluate_model(&lm_cp, sem, labels(&key.domain, &cp))?;
        let y = match agr {
            Some(a) => Some(evaluate_model(&lm_cp, a, labels(&key.domain, &cp))?),
            None => None,
        };
        trajectory.push(TrajectoryPoint {
            checkpoint: cp,
            semantic_acc: s.accuracy,
            syntactic_acc: y.as_ref().map(|y| y.accuracy),
        });
        results.push(s);
        results.extend(y);
    }
    Ok(CellOutput {
        key: key.clone(),
        report,
        results,
        trajectory,
    })
}

fn cache_key(key: &CellKey, prep: &Prepared, cfg_hash: &str) -> String {
    sha256_hex(
        format!(
            "{}\n{}\n{}\n{}\n{}\n{}",
            env!("CARGO_PKG_VERSION"),
            cfg_hash,
            prep.file_hash,
            key.domain,
            key.condition.label(),
            key.seed
        )
        .as_bytes(),
    )
}

/// Rows from a results file usable as regression observations: in-domain
/// semantic accuracy of the final models.
pub fn semantic_observations(rows: &[ResultRow]) -> Vec<Observation> {
    rows.iter()
        .filter(|r| {
            r.paradigm == Paradigm::SemanticVerb.name()
                && r.train_domain == r.eval_domain
                && r.checkpoint == FINAL_CHECKPOINT
        })
        .map(|r| Observation {
            accuracy: r.accuracy,
            dataset: r.train_domain.clone(),
            condition: r.condition.clone(),
        })
        .collect()
}

fn write(path: &Path, contents: &str, outputs: &mut Vec<ManifestFile>, root: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    outputs.push(ManifestFile {
        path: path.strip_prefix(root).unwrap_or(path).display().to_string(),
        sha256: sha256_hex(contents.as_bytes()),
    });
    Ok(())
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = xs.collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| v.to_string())
}

/// Runs the whole grid. Cell failures are collected, not propagated; the
/// caller decides the exit status from [`RunSummary::ok`].
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = opts.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::invalid(e.to_string()))?;
    pool.install(|| run_in_pool(cfg, opts))
}

fn run_in_pool(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary> {
    let out = &cfg.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let cfg_hash = cfg.hash();
    let tagger = cfg.tagger.as_deref().map(TaggerModel::load).transpose()?;
    let mut notes = Vec::new();
    let prepared: Vec<Prepared> = cfg
        .corpora
        .iter()
        .map(|c| prepare(c, cfg, tagger.as_ref(), &mut notes))
        .collect::<Result<_>>()?;

    let keys: Vec<CellKey> = cfg
        .corpora
        .iter()
        .flat_map(|c| {
            cfg.conditions.iter().flat_map(move |&condition| {
                cfg.seeds.iter().map(move |&seed| CellKey {
                    domain: c.domain.clone(),
                    condition,
                    seed,
                })
            })
        })
        .collect();

    let cache_dir = out.join("cache");
    if opts.use_cache {
        fs::create_dir_all(&cache_dir).map_err(|e| Error::io(&cache_dir, e))?;
    }
    let outcomes: Vec<(CellKey, String, std::result::Result<CellOutput, String>, bool)> = keys
        .par_iter()
        .map(|key| {
            let prep = prepared.iter().find(|p| p.domain == key.domain).unwrap();
            let ck = cache_key(key, prep, &cfg_hash);
            let cache_file = cache_dir.join(format!("{ck}.json"));
            if opts.use_cache {
                if let Some(hit) = fs::read_to_string(&cache_file)
                    .ok()
                    .and_then(|t| serde_json::from_str::<CellOutput>(&t).ok())
                {
                    info!("{}: cached", key.slug());
                    return (key.clone(), ck, Ok(hit), true);
                }
            }
            info!("{}: running", key.slug());
            let r = run_cell(key, &prepared, cfg).map_err(|e| e.to_string());
            if let (true, Ok(c)) = (opts.use_cache, &r) {
                if let Ok(json) = serde_json::to_string(c) {
                    let _ = fs::write(&cache_file, json);
                }
            }
            (key.clone(), ck, r, false)
        })
        .collect();

    let mut cells = Vec::new();
    let mut failures = Vec::new();
    let mut manifest_cells = Vec::new();
    for (key, ck, r, cached) in outcomes {
        let (status, error) = match &r {
            Ok(_) if cached => ("cached", None),
            Ok(_) => ("ok", None),
            Err(e) => {
                warn!("{} failed: {e}", key.slug());
                ("failed", Some(e.clone()))
            }
        };
        manifest_cells.push(ManifestCell {
            domain: key.domain.clone(),
            condition: key.condition,
            seed: key.seed,
            // Cache hits and fresh runs write identical outputs.
            status: if status == "failed" { status.into() } else { "ok".into() },
            cache_key: ck,
            error,
        });
        match r {
            Ok(c) => cells.push(c),
            Err(e) => failures.push((key, e)),
        }
    }

    let mut outputs = Vec::new();
    write_outputs(cfg, &prepared, &cells, out, &mut outputs, &mut notes)?;

    let mut inputs: Vec<ManifestFile> = cfg
        .corpora
        .iter()
        .zip(&prepared)
        .map(|(c, p)| ManifestFile {
            path: c.path.display().to_string(),
            sha256: p.file_hash.clone(),
        })
        .collect();
    inputs.sort_by(|a, b| a.path.cmp(&b.path));
    let mut config = cfg.clone();
    config.output_dir = PathBuf::from(".");
    let manifest = Manifest {
        tool: "verbscope".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config_hash: cfg_hash,
        config,
        inputs,
        seeds: cfg.seeds.clone(),
        cells: manifest_cells,
        notes,
        outputs,
    };
    let mpath = out.join("manifest.json");
    fs::write(&mpath, serde_json::to_string_pretty(&manifest)? + "\n").map_err(|e| Error::io(&mpath, e))?;
    Ok(RunSummary {
        manifest,
        cells,
        failures,
    })
}

fn write_outputs(
    cfg: &ExperimentConfig,
    prepared: &[Prepared],
    cells: &[CellOutput],
    out: &Path,
    outputs: &mut Vec<ManifestFile>,
    notes: &mut Vec<String>,
) -> Result<()> {
    for p in prepared {
        for (seed, pairs) in &p.semantic {
            let path = out.join("pairs").join(format!("{}-seed{seed}-semantic.jsonl", p.domain));
            write(&path, &pairgen::pairs_to_jsonl(pairs)?, outputs, out)?;
        }
        for (seed, pairs) in &p.agreement {
            let path = out.join("pairs").join(format!("{}-seed{seed}-agreement.jsonl", p.domain));
            write(&path, &pairgen::pairs_to_jsonl(pairs)?, outputs, out)?;
        }
    }

    let all: Vec<&EvalResult> = cells.iter().flat_map(|c| &c.results).collect();
    let rows: Vec<ResultRow> = all.iter().flat_map(|r| r.rows()).collect();
    write(&out.join("results.csv"), &eval::rows_to_csv(&rows)?, outputs, out)?;

    // Cross-domain matrix from ORIGINAL models on semantic pairs.
    let cross: Vec<EvalResult> = all
        .iter()
        .filter(|r| {
            r.labels.condition == Condition::Original.label()
                && r.labels.checkpoint == FINAL_CHECKPOINT
                && r.per_paradigm.contains_key(Paradigm::SemanticVerb.name())
        })
        .map(|r| (*r).clone())
        .collect();
    if !cross.is_empty() {
        let m = eval::cross_domain_matrix(&cross);
        write(&out.join("cross_domain.csv"), &m.to_csv(), outputs, out)?;
        for (t, e) in &m.missing {
            notes.push(format!("cross-domain cell train={t} eval={e} missing"));
        }
    }

    // Seed-averaged summary per (corpus, condition).
    let mut summary = String::from("domain,condition,n_seeds,semantic_acc,agreement_acc,replacement_rate\n");
    for c in &cfg.corpora {
        for cond in &cfg.conditions {
            let group: Vec<&CellOutput> = cells
                .iter()
                .filter(|x| x.key.domain == c.domain && x.key.condition == *cond)
                .collect();
            if group.is_empty() {
                continue;
            }
            let acc = |paradigm_semantic: bool| {
                mean(group.iter().flat_map(|g| {
                    g.results.iter().filter(move |r| {
                        r.labels.eval_domain == c.domain
                            && r.labels.checkpoint == FINAL_CHECKPOINT
                            && r.per_paradigm.contains_key(Paradigm::SemanticVerb.name()) == paradigm_semantic
                    })
                }).map(|r| r.accuracy))
            };
            summary.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.domain,
                cond.label(),
                group.len(),
                fmt_opt(acc(true)),
                fmt_opt(acc(false)),
                fmt_opt(mean(group.iter().map(|g| g.report.replacement_rate)))
            ));
        }
    }
    write(&out.join("summary.csv"), &summary, outputs, out)?;

    let st: Vec<stats::CorpusStats> = prepared.iter().map(|p| p.stats.clone()).collect();
    write(&out.join("stats.csv"), &stats::stats_to_csv(&st), outputs, out)?;
    let reports: Vec<PerturbReport> = cells
        .iter()
        .filter(|c| c.key.condition == Condition::ReplaceWord)
        .map(|c| c.report.clone())
        .collect();
    if !reports.is_empty() {
        let rates = stats::compare_replacement_rates(&reports, &st);
        write(&out.join("replacement_rates.csv"), &rates.to_csv(), outputs, out)?;
    }

    // Seed-averaged trajectories.
    if !cfg.checkpoints.is_empty() {
        let mut csv = String::from("domain,condition,checkpoint,semantic_acc,syntactic_acc,ratio\n");
        for c in &cfg.corpora {
            let mut series = Vec::new();
            for cond in &cfg.conditions {
                let group: Vec<&CellOutput> = cells
                    .iter()
                    .filter(|x| x.key.domain == c.domain && x.key.condition == *cond)
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let mut sem = Vec::new();
                let mut syn = Vec::new();
                for &frac in &cfg.checkpoints {
                    let cp = checkpoint_label(frac);
                    let pts = || group.iter().flat_map(|g| g.trajectory.iter().filter(|p| p.checkpoint == cp));
                    if let Some(s) = mean(pts().map(|p| p.semantic_acc)) {
                        sem.push((cp.clone(), s));
                    }
                    if let Some(y) = mean(pts().filter_map(|p| p.syntactic_acc)) {
                        syn.push((cp.clone(), y));
                    }
                }
                if syn.len() == sem.len() {
                    let t = analysis::trajectory(&sem, &syn, analysis::SEMANTIC_FIRST_THRESHOLD)?;
                    for r in &t.rows {
                        csv.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            c.domain,
                            cond.label(),
                            r.checkpoint,
                            r.semantic_acc,
                            r.syntactic_acc,
                            fmt_opt(r.ratio)
                        ));
                    }
                    series.push(Series {
                        name: format!("{} syntactic", cond.label()),
                        points: t.rows.iter().map(|r| (r.checkpoint.parse().unwrap(), r.syntactic_acc)).collect(),
                    });
                } else {
                    for (cp, s) in &sem {
                        csv.push_str(&format!("{},{},{},{},NA,NA\n", c.domain, cond.label(), cp, s));
                    }
                }
                series.push(Series {
                    name: format!("{} semantic", cond.label()),
                    points: sem.iter().map(|(cp, s)| (cp.parse().unwrap(), *s)).collect(),
                });
            }
            if series.iter().all(|s| s.points.len() >= 2) && !series.is_empty() {
                let svg = analysis::render_svg(
                    &series,
                    &ChartOptions {
                        title: format!("{}: accuracy over training", c.domain),
                        x_label: "fraction of training data".into(),
                        ..ChartOptions::default()
                    },
                )?;
                write(&out.join(format!("trajectory-{}.svg", c.domain)), &svg, outputs, out)?;
            }
        }
        write(&out.join("trajectory.csv"), &csv, outputs, out)?;
    }

    let obs = semantic_observations(&rows);
    match analysis::ols_interaction(&obs, &OlsOptions::default()) {
        Ok(r) => write(&out.join("regression.csv"), &r.to_csv()?, outputs, out)?,
        Err(e) => notes.push(format!("regression skipped: {e}")),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            [[corpora]]
            domain = "a"
            path = "a.conllu"
            "#,
            "mem",
        )
        .unwrap();
        assert_eq!(cfg.lm_order, 3);
        assert_eq!(cfg.conditions, Condition::ALL.to_vec());
        assert_eq!(cfg.pairs.max_alts, 5);
        assert!(ExperimentConfig::from_toml("corpora = []", "mem").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1\n[[corpora]]\ndomain='a'\npath='x'", "mem").is_err());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let text = "[[corpora]]\ndomain='a'\npath='x'\n";
        let mut a = ExperimentConfig::from_toml(text, "m").unwrap();
        let b = a.clone();
        a.output_dir = PathBuf::from("/elsewhere");
        assert_eq!(a.hash(), b.hash());
        a.lm_order = 2;
        assert_ne!(a.hash(), b.hash());
    }
}
