//! Corrects a JSONL file of candidate distributions, as `disc correct` does.
//!
//! `cargo run --example stream -- crates/core/tests/fixtures/distributions.jsonl`

use std::fs::File;
use std::io::{self, BufReader};

use disc::intervention::correct_stream;
use disc::{CharTables, SimilarityParams, TableSimilarity};

fn main() -> disc::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/fixtures/distributions.jsonl"
        )
        .into()
    });
    let tables = CharTables::bundled();
    let provider = TableSimilarity::new(&tables, 0.7)?;
    let input = BufReader::new(File::open(path)?);
    let stats = correct_stream(
        input,
        io::stdout().lock(),
        &SimilarityParams::default(),
        &provider,
        false,
    )?;
    eprintln!(
        "{} sentences, {} changed, {} substitutions",
        stats.sentences, stats.changed, stats.substitutions
    );
    Ok(())
}
