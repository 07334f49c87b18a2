use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn vs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verbscope")).args(args).args(["--quiet"]).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = vs(args);
    assert!(
        out.status.success(),
        "verbscope {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn results_accuracy(csv: &str, paradigm: &str) -> f64 {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |n: &str| header.iter().position(|h| *h == n).unwrap();
    lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[col("paradigm")] == paradigm)
        .map(|f| f[col("accuracy")].parse().unwrap())
        .unwrap()
}

#[test]
fn step_by_step_pipeline() {
    let d = TempDir::new().unwrap();
    let fx = fixture("written.conllu").display().to_string();
    let out = ok(&["ingest", "--in", &fx, "--split", "0.667,0.167,0.167", "--out", &p(&d, "split")]);
    assert!(out.contains("written.train.conllu"));
    let train = p(&d, "split/written.train.conllu");
    let test = p(&d, "split/written.test.conllu");
    let table = p(&d, "split/written.table.tsv");
    assert!(Path::new(&table).exists());

    ok(&[
        "perturb", "--condition", "replace-word", "--table", &table, "--seed", "4", "--in", &train,
        "--out", &p(&d, "rw.conllu"), "--report", &p(&d, "rw.json"),
    ]);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(p(&d, "rw.json")).unwrap()).unwrap();
    assert_eq!(report["condition"], "REPLACE.WORD");
    assert_eq!(report["seed"], 4);
    assert!(report["replacement_rate"].as_f64().unwrap() > 0.1);

    ok(&["train-lm", "--order", "3", "--in", &train, "--out", &p(&d, "orig.lm")]);
    ok(&["train-lm", "--order", "3", "--in", &p(&d, "rw.conllu"), "--out", &p(&d, "rw.lm")]);
    let gen = ok(&["genpairs", "semantic", "--test", &test, "--table", &table, "--out", &p(&d, "sem.jsonl")]);
    assert!(gen.contains("\"pairs\""));

    let mut acc = Vec::new();
    for (lm, cond) in [("orig.lm", "ORIGINAL"), ("rw.lm", "REPLACE.WORD")] {
        let scores = p(&d, &format!("{lm}.tsv"));
        ok(&["score", "--lm", &p(&d, lm), "--pairs", &p(&d, "sem.jsonl"), "--out", &scores]);
        let first = fs::read_to_string(&scores).unwrap();
        assert!(first.lines().next().unwrap().split('\t').count() == 3);
        let res = p(&d, &format!("{lm}.csv"));
        ok(&[
            "eval", "--pairs", &p(&d, "sem.jsonl"), "--scores", &scores, "--out", &res, "--train-domain", "written",
            "--condition", cond,
        ]);
        acc.push(results_accuracy(&fs::read_to_string(&res).unwrap(), "semantic-verb"));
    }
    assert!(acc[0] > acc[1], "{acc:?}");
    assert!(acc[0] > 0.6, "{acc:?}");
}

#[test]
fn agreement_pairs_through_the_external_scorer() {
    let d = TempDir::new().unwrap();
    let fx = fixture("conversational.conllu").display().to_string();
    ok(&[
        "genpairs", "agreement", "--train", &fx, "--n", "20", "--paradigms", "agr-simple,agr-pp", "--save-lexicon",
        &p(&d, "lex.json"), "--out", &p(&d, "agr.jsonl"),
    ]);
    let lines = fs::read_to_string(p(&d, "agr.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 40);
    // Reusing the saved lexicon gives the same pairs.
    ok(&["genpairs", "agreement", "--lexicon", &p(&d, "lex.json"), "--n", "20", "--paradigms", "agr-simple,agr-pp", "--out", &p(&d, "again.jsonl")]);
    assert_eq!(lines, fs::read_to_string(p(&d, "again.jsonl")).unwrap());

    let echo = format!("{} ok", env!("CARGO_BIN_EXE_echo-scorer"));
    ok(&["score", "--external", &echo, "--pairs", &p(&d, "agr.jsonl"), "--out", &p(&d, "s.tsv")]);
    ok(&["eval", "--pairs", &p(&d, "agr.jsonl"), "--scores", &p(&d, "s.tsv"), "--out", &p(&d, "r.csv")]);
    // The echo scorer prefers the shorter sentence, so its accuracy is fixed
    // by character counts alone.
    let mut expected = 0.0;
    let mut n = 0.0;
    for line in lines.lines().filter(|l| l.contains("\"agr-simple\"")) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let (g, b) = (v["good"].as_str().unwrap().chars().count(), v["bad"].as_str().unwrap().chars().count());
        expected += if g < b { 1.0 } else if g == b { 0.5 } else { 0.0 };
        n += 1.0;
    }
    let csv = fs::read_to_string(p(&d, "r.csv")).unwrap();
    assert_eq!(results_accuracy(&csv, "agr-simple"), expected / n);

    let bad = format!("{} missing-id", env!("CARGO_BIN_EXE_echo-scorer"));
    let out = vs(&["score", "--external", &bad, "--pairs", &p(&d, "agr.jsonl"), "--out", &p(&d, "x.tsv")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("child exited before answering"));
}

#[test]
fn tagger_and_stats_commands() {
    let d = TempDir::new().unwrap();
    let fx = fixture("conversational.conllu").display().to_string();
    let out = ok(&["train-tagger", "--conllu", &fx, "--epochs", "3", "--out", &p(&d, "tagger.txt")]);
    assert!(out.contains("training accuracy"));
    fs::write(d.path().join("raw.txt"), "the cat sat\nwe read a book .\n").unwrap();
    ok(&["tag", "--model", &p(&d, "tagger.txt"), "--in", &p(&d, "raw.txt"), "--out", &p(&d, "tagged.conllu")]);
    let tagged = fs::read_to_string(p(&d, "tagged.conllu")).unwrap();
    assert!(tagged.contains("\tcat\t") && tagged.contains("\tNN\t"));

    let table = ok(&["stats", "--in", &fx, &fixture("written.conllu").display().to_string(), "--csv", &p(&d, "stats.csv")]);
    assert!(table.contains("conversational") && table.contains("written"));
    assert_eq!(fs::read_to_string(p(&d, "stats.csv")).unwrap().lines().count(), 3);
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(vs(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(vs(&["perturb", "--condition", "scramble", "--in", "x", "--out", "y"]).status.code(), Some(2));
    assert_eq!(vs(&["score", "--pairs", "p", "--out", "o"]).status.code(), Some(2));
    assert_eq!(vs(&["run"]).status.code(), Some(2));
    assert_eq!(vs(&["--help"]).status.code(), Some(0));
}

fn small_config(dir: &TempDir, extra: &str) -> String {
    let cfg = format!(
        r#"
corpora = [
  {{ domain = "conversational", path = "{}" }},
  {{ domain = "written", path = "{}" }},
]
conditions = ["ORIGINAL", "SHUFFLE.ORDER"]
seeds = [5]
checkpoints = [0.25, 1.0]
output_dir = "out"
{extra}
"#,
        fixture("conversational.conllu").display(),
        fixture("written.conllu").display()
    );
    let path = dir.path().join("exp.toml");
    fs::write(&path, cfg).unwrap();
    path.display().to_string()
}

#[test]
fn run_then_analyse() {
    let d = TempDir::new().unwrap();
    let cfg = small_config(&d, "[pairs]\nn_per_paradigm = 30\n");
    ok(&["run", "--config", &cfg, "--threads", "2"]);
    let out = d.path().join("out");
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cells"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    let results = fs::read_to_string(out.join("results.csv")).unwrap();

    // A second run is served from the cache and writes the same results.
    ok(&["run", "--config", &cfg]);
    assert_eq!(results, fs::read_to_string(out.join("results.csv")).unwrap());
    assert!(fs::read_dir(out.join("cache")).unwrap().count() == 4);

    let res = out.join("results.csv").display().to_string();
    let table = ok(&["regress", "--in", &res, "--out", &p(&d, "reg.csv")]);
    assert!(table.contains("(Intercept)"));
    let reg = fs::read_to_string(p(&d, "reg.csv")).unwrap();
    assert!(reg.starts_with("term,estimate,std_error,t,p"));
    assert!(reg.contains("dataset[T.written]:condition[T.SHUFFLE.ORDER]"));

    ok(&["trajectory", "--in", &res, "--domain", "conversational", "--out", &p(&d, "traj.csv"), "--chart", &p(&d, "traj.svg")]);
    let traj = fs::read_to_string(p(&d, "traj.csv")).unwrap();
    assert!(traj.starts_with("checkpoint,semantic_acc,syntactic_acc,ratio"));
    assert_eq!(traj.lines().count(), 3);
    assert!(fs::read_to_string(p(&d, "traj.svg")).unwrap().contains("<polyline"));

    let svg = p(&d, "plot.svg");
    ok(&["plot", "--in", &out.join("trajectory.csv").display().to_string(), "--group-by", "domain,condition", "--y", "semantic_acc", "--out", &svg]);
    assert_eq!(fs::read_to_string(&svg).unwrap().matches("<polyline").count(), 4);
}

#[test]
fn failing_cells_exit_with_1() {
    let d = TempDir::new().unwrap();
    // No test sentence is this long, so no cell can build semantic pairs.
    let cfg = small_config(&d, "[pairs]\nlen_min = 200\nlen_max = 300\nn_per_paradigm = 0\n");
    let out = vs(&["run", "--config", &cfg, "--seed", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("out/manifest.json")).unwrap()).unwrap();
    let cells = manifest["cells"].as_array().unwrap();
    assert!(cells.iter().all(|c| c["status"] == "failed" && c["seed"] == 9));
}
