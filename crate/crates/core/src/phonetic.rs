//! Phonetic similarity over toneless pinyin.

use std::fmt;

use crate::chardata::{CharTables, PinyinSeq};
use crate::distance::edit_similarity;
use crate::error::{Error, Result};

pub use crate::distance::{weighted_levenshtein, EditCosts};

/// A similarity value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Similarity(f64);

impl Similarity {
    pub const ZERO: Similarity = Similarity(0.0);
    pub const ONE: Similarity = Similarity(1.0);

    /// Clamps into `[0, 1]`; NaN becomes 0.
    pub fn new(value: f64) -> Self {
        if value.is_nan() {
            return Similarity::ZERO;
        }
        Similarity(value.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// 1 for identical characters, 0 otherwise. Used whenever table data is
    /// unavailable.
    pub(crate) fn identity(c1: char, c2: char) -> Self {
        if c1 == c2 {
            Similarity::ONE
        } else {
            Similarity::ZERO
        }
    }
}

impl From<Similarity> for f64 {
    fn from(s: Similarity) -> f64 {
        s.0
    }
}

impl fmt::Display for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*}", p, self.0),
            None => write!(f, "{}", self.0),
        }
    }
}

/// `1 - LD(p1, p2) / (len(p1) + len(p2))` with insert/delete/substitute
/// costs 1/1/2.
pub fn pinyin_distance_sim(p1: &PinyinSeq, p2: &PinyinSeq) -> Result<Similarity> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::EmptySequence("pinyin_distance_sim"));
    }
    Ok(Similarity::new(edit_similarity(
        p1.as_bytes(),
        p2.as_bytes(),
    )))
}

/// Best score over every pair of readings.
pub(crate) fn best_reading_sim<A: AsRef<[u8]>, B: AsRef<[u8]>>(r1: &[A], r2: &[B]) -> f64 {
    let mut best = 0.0f64;
    for a in r1 {
        for b in r2 {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return 1.0;
            }
            best = best.max(edit_similarity(a, b));
        }
    }
    best
}

/// Phonetic similarity of two characters.
///
/// Polyphonic characters take the best-scoring combination of readings.
/// Characters without a reading (including every non-Han scalar) score 1
/// against themselves and 0 against anything else.
pub fn phonetic_sim(tables: &CharTables, c1: char, c2: char) -> Similarity {
    match (tables.pinyin(c1), tables.pinyin(c2)) {
        (Some(r1), Some(r2)) => {
            let r1: Vec<&[u8]> = r1.iter().map(PinyinSeq::as_bytes).collect();
            let r2: Vec<&[u8]> = r2.iter().map(PinyinSeq::as_bytes).collect();
            Similarity::new(best_reading_sim(&r1, &r2))
        }
        _ => Similarity::identity(c1, c2),
    }
}
