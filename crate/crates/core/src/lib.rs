//! Training-free decoding intervention for Chinese spelling check.
//!
//! A correction model proposes candidate characters with probabilities at
//! every position. This crate rescores them with the phonetic and glyph
//! similarity between each candidate and the original character, so that
//! replacements which look or sound like the input are preferred.
//!
//! - [`chardata`] loads the character tables (readings, four-corner codes,
//!   decompositions, stroke orders).
//! - [`phonetic`] and [`glyph`] compute the component similarities.
//! - [`fusion`] fuses them, caches neighborhoods and exports confusion sets.
//! - [`intervention`] applies the rescoring to candidate distributions.
//! - [`evalkit`] computes sentence-level metrics and edit-pair statistics.
//!
//! ```
//! use disc::{sim, CharTables};
//!
//! let tables = CharTables::bundled();
//! let s = sim(&tables, '忠', '仲', 0.7).unwrap();
//! assert!((s.value() - 0.818).abs() < 1e-3);
//! ```

pub mod chardata;
pub mod cli;
mod distance;
pub mod error;
pub mod evalkit;
pub mod fusion;
pub mod glyph;
pub mod intervention;
pub mod phonetic;

pub use chardata::{load_tables, CharTables, HanChar, Lookup, Table};
pub use error::{Error, Result};
pub use evalkit::{evaluate, extract_edits, seen_pair_stats, EvalReport};
pub use fusion::{
    build_matrix, confusion_set, confusion_set_from_tables, sim, CachedSimilarity, Cell, Scorer,
    SimilarityHint, SimilarityMatrix, SimilarityParams, SimilarityProvider, TableSimilarity,
};
pub use glyph::{glyph_sim, lcs_length, structure_aware_code};
pub use intervention::{choose, correct_sentence, ingest_distributions, intervene};
pub use phonetic::{phonetic_sim, weighted_levenshtein, EditCosts, Similarity};
