//! Writes the bundled fixture corpora.
//!
//! Usage: make-fixtures [OUT_DIR]   (default: fixtures)

use std::path::PathBuf;

use verbscope::ingest::{write_corpus, OutputFormat};
use verbscope::stats::compute_stats;
use verbscope_fixtures::{bundled, CONVERSATIONAL, WRITTEN};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixtures"));
    std::fs::create_dir_all(&out)?;
    for reg in [&CONVERSATIONAL, &WRITTEN] {
        let c = bundled(reg);
        let path = out.join(format!("{}.conllu", reg.name));
        write_corpus(&c, &path, OutputFormat::Conllu)?;
        let s = compute_stats(&c)?;
        println!(
            "{}: {} sentences, {} tokens, avg length {:.2}",
            path.display(),
            s.n_sentences,
            s.n_tokens,
            s.avg_sentence_length
        );
    }
    Ok(())
}
