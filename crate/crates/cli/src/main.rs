use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use log::{info, warn};

use verbscope::analysis::{self, ChartOptions, OlsOptions, Series};
use verbscope::corpus::{Corpus, FrequencyTable};
use verbscope::eval::{self, EvalLabels, ResultRow};
use verbscope::experiment::{self, ExperimentConfig, RunOptions, FINAL_CHECKPOINT};
use verbscope::ingest::{self, Format, OutputFormat, SplitSpec};
use verbscope::pairgen::{self, AgreementLexicon, LemmaIndex, LexiconConfig, Paradigm, SemanticConfig};
use verbscope::perturb::{self, Condition, PerturbOptions};
use verbscope::scorer::{self, ExternalScorer, NGramConfig, NGramLM, SentenceScorer};
use verbscope::stats;
use verbscope::tagger::{self, TaggerModel};

const CONFIG_HELP: &str = "\
Config keys (TOML) and defaults:
  corpora          list of { domain, path, format = \"conllu\" }; format is conllu, text or chat
  conditions       [\"ORIGINAL\", \"REPLACE.WORD\", \"SHUFFLE.ORDER\"]
  lm_order         3
  seeds            [1, 2, 3]
  split            \"2/3,1/6,1/6\"
  checkpoints      [0.01, 0.05, 0.1, 0.25, 0.5, 1.0]   (fractions of the training split)
  tagger           none; required for text and chat corpora
  output_dir       \"results\"
  [perturb]        include_propn = false, pin_final_punct = false
  [pairs]          max_alts = 5, len_min = 10, len_max = 30, n_per_paradigm = 200,
                   paradigms = all five agreement paradigms, pct_lo = 50, pct_hi = 95,
                   min_lexicon = 10
Relative paths are resolved against the config file's directory.
Exit status: 0 success, 1 if any cell failed, 2 usage error.";

/// Corpus perturbation and minimal-pair evaluation.
#[derive(Parser)]
#[command(name = "verbscope", version, propagate_version = true)]
struct Cli {
    /// Seed for every randomized step [default: 1; `run` uses the config's seeds unless given]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Experiment config (TOML), read by `run`
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Only print warnings and errors
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read a corpus, split it into train/dev/test and write the training frequency table
    Ingest(IngestArgs),
    /// Train the averaged-perceptron tagger on a CoNLL-U file
    TrainTagger(TrainTaggerArgs),
    /// Tag a plain-text or CHAT file and write CoNLL-U
    Tag(TagArgs),
    /// Type-token ratios and sentence length per corpus
    Stats(StatsArgs),
    /// Apply ORIGINAL, REPLACE.WORD or SHUFFLE.ORDER to a training corpus
    Perturb(PerturbArgs),
    /// Train an interpolated Kneser-Ney n-gram model
    TrainLm(TrainLmArgs),
    /// Generate minimal pairs
    Genpairs {
        #[command(subcommand)]
        kind: GenpairsKind,
    },
    /// Score both members of every pair with an n-gram model or an external command
    Score(ScoreArgs),
    /// Turn pair scores into accuracy rows
    Eval(EvalArgs),
    /// Fit accuracy ~ dataset * condition by least squares
    Regress(RegressArgs),
    /// Semantic vs syntactic accuracy over checkpoints
    Trajectory(TrajectoryArgs),
    /// Draw an SVG line chart from a CSV file
    Plot(PlotArgs),
    /// Run the full experiment grid described by --config
    #[command(after_help = CONFIG_HELP)]
    Run(RunArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Input corpus
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Input format: conllu, text or chat
    #[arg(long, default_value = "conllu")]
    format: Format,
    /// Train, dev and test fractions (decimals or ratios such as 2/3)
    #[arg(long, default_value = "0.667,0.167,0.167")]
    split: SplitSpec,
    /// Shuffle sentences (with --seed) before splitting instead of cutting contiguous blocks
    #[arg(long)]
    shuffle_split: bool,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Tagger model used for text and chat input
    #[arg(long, value_name = "MODEL")]
    tagger: Option<PathBuf>,
    /// Domain label and output file prefix [default: input file stem]
    #[arg(long)]
    domain: Option<String>,
    /// Write splits as one sentence per line instead of CoNLL-U
    #[arg(long)]
    text_output: bool,
}

#[derive(Args)]
struct TrainTaggerArgs {
    #[arg(long, value_name = "FILE")]
    conllu: PathBuf,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, value_name = "MODEL")]
    out: PathBuf,
    /// Held-out CoNLL-U file for reporting accuracy
    #[arg(long, value_name = "FILE")]
    heldout: Option<PathBuf>,
}

#[derive(Args)]
struct TagArgs {
    #[arg(long, value_name = "MODEL")]
    model: PathBuf,
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Input format: text or chat
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct StatsArgs {
    /// One or more corpora
    #[arg(long = "in", value_name = "FILE", required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, default_value = "conllu")]
    format: Format,
    /// Also write the table as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PerturbArgs {
    /// original, replace-word or shuffle-order
    #[arg(long)]
    condition: Condition,
    /// Frequency table (TSV written by `ingest`) [default: built from --in]
    #[arg(long, value_name = "TSV")]
    table: Option<PathBuf>,
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Write the perturbation report as JSON
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Replace proper nouns too
    #[arg(long)]
    include_propn: bool,
    /// Keep sentence-final punctuation in place when shuffling
    #[arg(long)]
    pin_final_punct: bool,
}

#[derive(Args)]
struct TrainLmArgs {
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Training corpus (CoNLL-U)
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "MODEL")]
    out: PathBuf,
    /// Absolute discount, once for all orders or once per order
    #[arg(long, value_delimiter = ',', default_value = "0.75")]
    discount: Vec<f64>,
    /// Forms seen fewer times than this become <unk>
    #[arg(long, default_value_t = 1)]
    min_count: u64,
}

#[derive(Subcommand)]
enum GenpairsKind {
    /// Verb-substitution pairs from a test split
    Semantic(SemanticArgs),
    /// Subject-verb agreement pairs from templates
    Agreement(AgreementArgs),
}

#[derive(Args)]
struct SemanticArgs {
    /// Untouched test split (CoNLL-U)
    #[arg(long, value_name = "FILE")]
    test: PathBuf,
    /// Training frequency table (TSV)
    #[arg(long, value_name = "TSV")]
    table: PathBuf,
    #[arg(long, default_value_t = 5)]
    max_alts: usize,
    #[arg(long, default_value_t = 10)]
    len_min: usize,
    #[arg(long, default_value_t = 30)]
    len_max: usize,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct AgreementArgs {
    /// Lemmatized training corpus (CoNLL-U) to extract the lexicon from
    #[arg(long, value_name = "FILE", required_unless_present = "lexicon")]
    train: Option<PathBuf>,
    /// Use a saved lexicon instead of extracting one
    #[arg(long, value_name = "JSON", conflicts_with = "train")]
    lexicon: Option<PathBuf>,
    /// Save the extracted lexicon
    #[arg(long, value_name = "JSON")]
    save_lexicon: Option<PathBuf>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "agr-simple,agr-pp,agr-vp-coord,agr-subj-rel,agr-obj-rel"
    )]
    paradigms: Vec<Paradigm>,
    /// Pairs per paradigm
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 50.0)]
    pct_lo: f64,
    #[arg(long, default_value_t = 95.0)]
    pct_hi: f64,
    /// Minimum nouns and verbs the lexicon must hold
    #[arg(long, default_value_t = 10)]
    min_lexicon: usize,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
#[command(group(ArgGroup::new("scorer").required(true).args(["lm", "external"])))]
struct ScoreArgs {
    /// n-gram model written by train-lm
    #[arg(long, value_name = "MODEL")]
    lm: Option<PathBuf>,
    /// Shell command speaking the JSON-lines scoring protocol
    #[arg(long, value_name = "CMD")]
    external: Option<String>,
    /// Seconds to wait for the external scorer
    #[arg(long, default_value_t = 300)]
    timeout: u64,
    /// Checkpoint label recorded with external scores
    #[arg(long)]
    checkpoint: Option<String>,
    #[arg(long, value_name = "FILE")]
    pairs: PathBuf,
    /// Sentence scores (TSV)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    pairs: PathBuf,
    #[arg(long, value_name = "FILE")]
    scores: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    #[arg(long, default_value = "unknown")]
    train_domain: String,
    /// [default: same as --train-domain]
    #[arg(long)]
    eval_domain: Option<String>,
    #[arg(long, default_value = "ORIGINAL")]
    condition: String,
    #[arg(long, default_value = FINAL_CHECKPOINT)]
    checkpoint: String,
}

#[derive(Args)]
struct RegressArgs {
    /// Results CSV
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Baseline dataset [default: cdl if present, else the first alphabetically]
    #[arg(long)]
    reference_dataset: Option<String>,
    #[arg(long, default_value = "ORIGINAL")]
    reference_condition: String,
}

#[derive(Args)]
struct TrajectoryArgs {
    /// Results CSV holding checkpoint rows
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Training domain [default: the only one present]
    #[arg(long)]
    domain: Option<String>,
    #[arg(long, default_value = "ORIGINAL")]
    condition: String,
    /// Accuracy a curve must reach to count as learned
    #[arg(long, default_value_t = analysis::SEMANTIC_FIRST_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also draw both curves as SVG
    #[arg(long, value_name = "FILE")]
    chart: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Numeric column for the x axis
    #[arg(long, default_value = "checkpoint")]
    x: String,
    /// Columns drawn as series
    #[arg(long, value_delimiter = ',', default_value = "semantic_acc,syntactic_acc")]
    y: Vec<String>,
    /// Columns whose values split rows into separate series
    #[arg(long, value_delimiter = ',')]
    group_by: Vec<String>,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Override the config's output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Recompute every cell
    #[arg(long)]
    no_cache: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    if !matches!(cli.command, Command::Run(_)) {
        if let Some(t) = cli.threads {
            rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
        }
    }
    let seed = cli.seed.unwrap_or(1);
    match cli.command {
        Command::Ingest(a) => ingest_cmd(a, seed)?,
        Command::TrainTagger(a) => train_tagger_cmd(a, seed)?,
        Command::Tag(a) => tag_cmd(a)?,
        Command::Stats(a) => stats_cmd(a)?,
        Command::Perturb(a) => perturb_cmd(a, seed)?,
        Command::TrainLm(a) => train_lm_cmd(a)?,
        Command::Genpairs { kind } => genpairs_cmd(kind, seed)?,
        Command::Score(a) => score_cmd(a)?,
        Command::Eval(a) => eval_cmd(a)?,
        Command::Regress(a) => regress_cmd(a)?,
        Command::Trajectory(a) => trajectory_cmd(a)?,
        Command::Plot(a) => plot_cmd(a)?,
        Command::Run(a) => return run_cmd(a, cli.config, cli.seed, cli.threads),
    }
    Ok(ExitCode::SUCCESS)
}

fn conllu(path: &Path) -> Result<Corpus> {
    Ok(ingest::read_conllu(path)?)
}

fn ingest_cmd(a: IngestArgs, seed: u64) -> Result<()> {
    let tagger = a.tagger.as_deref().map(TaggerModel::load).transpose()?;
    let mut corpus = ingest::read_corpus(&a.input, a.format, tagger.as_ref())?;
    if let Some(d) = a.domain {
        corpus.domain = d;
    }
    let (train, dev, test) = if a.shuffle_split {
        ingest::split_corpus_shuffled(&corpus, &a.split, seed)?
    } else {
        ingest::split_corpus(&corpus, &a.split)?
    };
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let (fmt, ext) = if a.text_output {
        (OutputFormat::Text, "txt")
    } else {
        (OutputFormat::Conllu, "conllu")
    };
    for (part, c) in [("train", &train), ("dev", &dev), ("test", &test)] {
        let path = a.out.join(format!("{}.{part}.{ext}", corpus.domain));
        ingest::write_corpus(c, &path, fmt)?;
        println!("{}\t{} sentences\t{} tokens", path.display(), c.len(), c.num_tokens());
    }
    if train.sentences.iter().all(|s| s.is_tagged()) {
        let path = a.out.join(format!("{}.table.tsv", corpus.domain));
        fs::write(&path, FrequencyTable::from_corpus(&train)?.to_tsv())?;
        println!("{}", path.display());
    } else {
        warn!("training split is untagged; no frequency table written");
    }
    Ok(())
}

fn train_tagger_cmd(a: TrainTaggerArgs, seed: u64) -> Result<()> {
    let corpus = conllu(&a.conllu)?;
    let model = tagger::train_tagger(&corpus, a.epochs, seed)?;
    model.save(&a.out)?;
    println!("training accuracy\t{:.4}", model.accuracy(&corpus));
    if let Some(h) = a.heldout {
        println!("held-out accuracy\t{:.4}", model.accuracy(&conllu(&h)?));
    }
    Ok(())
}

fn tag_cmd(a: TagArgs) -> Result<()> {
    if a.format == Format::Conllu {
        bail!("tag reads text or chat input; CoNLL-U is already tagged");
    }
    let model = TaggerModel::load(&a.model)?;
    let corpus = ingest::read_corpus(&a.input, a.format, Some(&model))?;
    ingest::write_corpus(&corpus, &a.out, OutputFormat::Conllu)?;
    info!("tagged {} sentences", corpus.len());
    Ok(())
}

fn stats_cmd(a: StatsArgs) -> Result<()> {
    let all = a
        .input
        .iter()
        .map(|p| stats::compute_stats(&ingest::read_corpus(p, a.format, None)?))
        .collect::<verbscope::Result<Vec<_>>>()?;
    print!("{}", stats::stats_table(&all));
    if let Some(path) = a.csv {
        fs::write(&path, stats::stats_to_csv(&all))?;
    }
    Ok(())
}

fn perturb_cmd(a: PerturbArgs, seed: u64) -> Result<()> {
    let corpus = conllu(&a.input)?;
    let table = match &a.table {
        Some(p) => FrequencyTable::from_tsv(&fs::read_to_string(p)?, &p.display().to_string())?,
        None => FrequencyTable::from_corpus(&corpus)?,
    };
    let opts = PerturbOptions {
        include_propn: a.include_propn,
        pin_final_punct: a.pin_final_punct,
    };
    let (out, report) = perturb::perturb_corpus(&corpus, a.condition, Some(&table), seed, &opts)?;
    ingest::write_corpus(&out, &a.out, OutputFormat::Conllu)?;
    println!(
        "{}\t{} of {} tokens replaced ({:.4})",
        report.condition, report.tokens_replaced, report.tokens_total, report.replacement_rate
    );
    if let Some(p) = a.report {
        fs::write(p, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(())
}

fn train_lm_cmd(a: TrainLmArgs) -> Result<()> {
    let corpus = conllu(&a.input)?;
    let cfg = NGramConfig {
        order: a.order,
        discounts: a.discount,
        min_count_unk: a.min_count,
    };
    let lm = NGramLM::train(&corpus, &cfg)?;
    lm.save(&a.out)?;
    println!("order {}\tvocabulary {}\ttraining perplexity {:.2}", lm.order(), lm.vocab_size(), lm.perplexity(&corpus));
    Ok(())
}

fn genpairs_cmd(kind: GenpairsKind, seed: u64) -> Result<()> {
    match kind {
        GenpairsKind::Semantic(a) => {
            let test = conllu(&a.test)?;
            let table = FrequencyTable::from_tsv(&fs::read_to_string(&a.table)?, &a.table.display().to_string())?;
            let cfg = SemanticConfig {
                max_alts: a.max_alts,
                len_min: a.len_min,
                len_max: a.len_max,
            };
            let (pairs, report) = pairgen::gen_semantic_pairs(&test, &table, &cfg, seed);
            pairgen::write_pairs(&pairs, &a.out)?;
            println!("{}", serde_json::to_string(&report)?);
        }
        GenpairsKind::Agreement(a) => {
            let lex = match (&a.lexicon, &a.train) {
                (Some(p), _) => AgreementLexicon::load(p)?,
                (None, Some(t)) => {
                    let train = conllu(t)?;
                    let cfg = LexiconConfig {
                        pct_lo: a.pct_lo,
                        pct_hi: a.pct_hi,
                        min_entries: a.min_lexicon,
                        ..LexiconConfig::default()
                    };
                    pairgen::extract_agreement_lexicon(&FrequencyTable::from_corpus(&train)?, &LemmaIndex::from_corpus(&train), &cfg)?
                }
                (None, None) => unreachable!("clap requires --train or --lexicon"),
            };
            if let Some(p) = &a.save_lexicon {
                lex.save(p)?;
            }
            let pairs = pairgen::gen_agreement_pairs(&lex, &a.paradigms, a.n, seed)?;
            pairgen::write_pairs(&pairs, &a.out)?;
            println!("{} pairs from {} nouns and {} verbs", pairs.len(), lex.nouns.len(), lex.verbs.len());
        }
    }
    Ok(())
}

fn score_cmd(a: ScoreArgs) -> Result<()> {
    let pairs = pairgen::read_pairs(&a.pairs)?;
    let scorer: Box<dyn SentenceScorer> = match (&a.lm, &a.external) {
        (Some(m), _) => Box::new(NGramLM::load(m)?),
        (None, Some(cmd)) => {
            let mut s = ExternalScorer::shell(cmd).with_timeout(Duration::from_secs(a.timeout));
            s.checkpoint = a.checkpoint.clone();
            Box::new(s)
        }
        (None, None) => unreachable!("clap requires --lm or --external"),
    };
    let scores = scorer::score_pair_sentences(scorer.as_ref(), &pairs)?;
    scorer::write_scores(&scores, &a.out)?;
    info!("{} sentences scored by {}", scores.len(), scorer.scorer_id());
    Ok(())
}

fn eval_cmd(a: EvalArgs) -> Result<()> {
    let pairs = pairgen::read_pairs(&a.pairs)?;
    let sentences = scorer::read_scores(&a.scores)?;
    let scored = scorer::pair_scores_from_sentences(&pairs, &sentences)?;
    let labels = EvalLabels {
        eval_domain: a.eval_domain.unwrap_or_else(|| a.train_domain.clone()),
        train_domain: a.train_domain,
        condition: a.condition,
        checkpoint: a.checkpoint,
        seed: None,
    };
    let result = eval::evaluate(&scored, &pairs, labels)?;
    for (p, r) in &result.per_paradigm {
        println!("{p}\t{:.4}\tn={}\tties={}", r.accuracy, r.n, r.ties);
    }
    println!("all\t{:.4}\tn={}\tties={}", result.accuracy, result.n_pairs, result.n_ties);
    eval::write_results(&[result], &a.out)?;
    Ok(())
}

fn regress_cmd(a: RegressArgs) -> Result<()> {
    let rows = eval::read_results(&a.input)?;
    let obs = experiment::semantic_observations(&rows);
    if obs.is_empty() {
        bail!("{} has no in-domain semantic-verb rows at checkpoint {FINAL_CHECKPOINT}", a.input.display());
    }
    let opts = OlsOptions {
        reference_dataset: a.reference_dataset,
        reference_condition: a.reference_condition,
    };
    let fit = analysis::ols_interaction(&obs, &opts)?;
    print!("{}", fit.to_table());
    if let Some(p) = a.out {
        fs::write(p, fit.to_csv()?)?;
    }
    Ok(())
}

/// Accuracy per checkpoint, pooled over seeds and weighted by pair count.
fn pooled(rows: &[&ResultRow], keep: impl Fn(&ResultRow) -> bool) -> Vec<(String, f64)> {
    let mut acc: std::collections::BTreeMap<&str, (f64, f64)> = Default::default();
    for r in rows.iter().filter(|r| keep(r)) {
        let e = acc.entry(r.checkpoint.as_str()).or_default();
        e.0 += r.accuracy * r.n as f64;
        e.1 += r.n as f64;
    }
    acc.into_iter()
        .filter(|(_, (_, n))| *n > 0.0)
        .map(|(cp, (s, n))| (cp.to_string(), s / n))
        .collect()
}

fn trajectory_cmd(a: TrajectoryArgs) -> Result<()> {
    let rows = eval::read_results(&a.input)?;
    let domain = match a.domain {
        Some(d) => d,
        None => {
            let mut ds: Vec<&str> = rows.iter().map(|r| r.train_domain.as_str()).collect();
            ds.sort_unstable();
            ds.dedup();
            match ds.as_slice() {
                [d] => d.to_string(),
                _ => bail!("results hold several domains ({}); pick one with --domain", ds.join(", ")),
            }
        }
    };
    let selected: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| {
            r.train_domain == domain
                && r.eval_domain == domain
                && r.condition == a.condition
                && r.checkpoint != FINAL_CHECKPOINT
        })
        .collect();
    let sem = pooled(&selected, |r| r.paradigm == Paradigm::SemanticVerb.name());
    let syn = pooled(&selected, |r| {
        r.paradigm.parse::<Paradigm>().map(Paradigm::is_agreement).unwrap_or(false)
    });
    if sem.is_empty() || syn.is_empty() {
        bail!("no checkpoint rows with both semantic and agreement accuracy for {domain} {}", a.condition);
    }
    let t = analysis::trajectory(&sem, &syn, a.threshold)?;
    let csv = t.to_csv();
    match &a.out {
        Some(p) => fs::write(p, &csv)?,
        None => print!("{csv}"),
    }
    let verdict = match t.semantic_first() {
        Some(true) => "semantic first",
        Some(false) => "syntactic first or tied",
        None => "threshold not reached by both curves",
    };
    eprintln!(
        "semantic reaches {} at {}, syntactic at {}: {verdict}",
        a.threshold,
        t.semantic_first_checkpoint.as_deref().unwrap_or("never"),
        t.syntactic_first_checkpoint.as_deref().unwrap_or("never")
    );
    if let Some(p) = a.chart {
        let xs = |v: &[(String, f64)]| -> Vec<(f64, f64)> { v.iter().map(|(c, y)| (c.parse().unwrap(), *y)).collect() };
        let series = vec![
            Series { name: "semantic".into(), points: xs(&sem) },
            Series { name: "syntactic".into(), points: xs(&syn) },
        ];
        let opts = ChartOptions {
            title: format!("{domain} {}", a.condition),
            x_label: "fraction of training data".into(),
            ..ChartOptions::default()
        };
        analysis::emit_chart(&series, &p, &opts)?;
    }
    Ok(())
}

fn plot_cmd(a: PlotArgs) -> Result<()> {
    let mut rdr = csv::Reader::from_path(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("{} has no column {name:?}", a.input.display()))
    };
    let xi = col(&a.x)?;
    let yi: Vec<usize> = a.y.iter().map(|y| col(y)).collect::<Result<_>>()?;
    let gi: Vec<usize> = a.group_by.iter().map(|g| col(g)).collect::<Result<_>>()?;
    let mut series: Vec<Series> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let x: f64 = match rec[xi].parse() {
            Ok(x) => x,
            Err(_) => {
                warn!("row {}: non-numeric {} {:?} skipped", line + 2, a.x, &rec[xi]);
                continue;
            }
        };
        let group: Vec<&str> = gi.iter().map(|&i| &rec[i]).collect();
        for (name, &i) in a.y.iter().zip(&yi) {
            let Ok(y) = rec[i].parse::<f64>() else { continue };
            let label = if group.is_empty() { name.clone() } else { format!("{} {name}", group.join(" ")) };
            match series.iter_mut().find(|s| s.name == label) {
                Some(s) => s.points.push((x, y)),
                None => series.push(Series { name: label, points: vec![(x, y)] }),
            }
        }
    }
    for s in &mut series {
        s.points.sort_by(|p, q| p.0.total_cmp(&q.0));
    }
    let opts = ChartOptions {
        title: a.title,
        x_label: a.x.clone(),
        ..ChartOptions::default()
    };
    analysis::emit_chart(&series, &a.out, &opts)?;
    Ok(())
}

fn run_cmd(a: RunArgs, config: Option<PathBuf>, seed: Option<u64>, threads: Option<usize>) -> Result<ExitCode> {
    let Some(path) = config else {
        eprintln!("error: run needs --config FILE");
        return Ok(ExitCode::from(2));
    };
    let mut cfg = ExperimentConfig::load(&path)?;
    if let Some(out) = a.out {
        cfg.output_dir = out;
    }
    if let Some(s) = seed {
        cfg.seeds = vec![s];
    }
    let summary = experiment::run_experiment(
        &cfg,
        &RunOptions {
            threads,
            use_cache: !a.no_cache,
        },
    )?;
    println!(
        "{} cells, {} failed; results in {}",
        summary.manifest.cells.len(),
        summary.failures.len(),
        cfg.output_dir.display()
    );
    for (key, e) in &summary.failures {
        eprintln!("failed {}: {e}", key.slug());
    }
    Ok(if summary.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
