//! Glyph similarity from four views of a character's shape: the four-corner
//! code, a structure-aware four-corner code, and the stroke sequence compared
//! by edit distance and by longest common subsequence.
//!
//! Each component falls back to 1 for identical characters and 0 otherwise
//! when either side lacks the data it needs.

use std::fmt;

use crate::chardata::{CharTables, FourCornerCode};
use crate::distance::edit_similarity;
use crate::phonetic::Similarity;

pub use crate::distance::lcs_length;

/// Concatenation of structure letter and component four-corner code for each
/// component, or the bare code for atomic characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureAwareCode(String);

impl StructureAwareCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for StructureAwareCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The four glyph components for one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlyphBreakdown {
    pub four_corner: Similarity,
    pub structure: Similarity,
    pub stroke_edit: Similarity,
    pub stroke_lcs: Similarity,
}

impl GlyphBreakdown {
    pub fn components(&self) -> [Similarity; 4] {
        [
            self.four_corner,
            self.structure,
            self.stroke_edit,
            self.stroke_lcs,
        ]
    }

    pub fn mean(&self) -> Similarity {
        let [a, b, c, d] = self.components().map(Similarity::value);
        Similarity::new((a + b + c + d) / 4.0)
    }
}

pub(crate) fn code_match(a: &FourCornerCode, b: &FourCornerCode) -> f64 {
    let same = a
        .digits()
        .iter()
        .zip(b.digits())
        .filter(|(x, y)| x == y)
        .count();
    same as f64 / 4.0
}

pub(crate) fn lcs_ratio<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    lcs_length(a, b) as f64 / longest as f64
}

/// Digit-wise match rate of the two four-corner codes.
pub fn glyph_sim1(tables: &CharTables, c1: char, c2: char) -> Similarity {
    match (tables.fourcorner(c1), tables.fourcorner(c2)) {
        (Some(a), Some(b)) => Similarity::new(code_match(&a, &b)),
        _ => Similarity::identity(c1, c2),
    }
}

/// Builds the structure-aware code of `c`, decomposing one level deep.
///
/// A compound character whose components do not all have four-corner codes
/// falls back to its own bare code. Returns `None` when nothing usable is
/// on file.
pub fn structure_aware_code(tables: &CharTables, c: char) -> Option<StructureAwareCode> {
    let own = tables.fourcorner(c);
    if let Some(d) = tables.decomposition(c).filter(|d| !d.is_atomic()) {
        let letter = d.structure().letter();
        let mut code = String::with_capacity(d.components().len() * 5);
        let complete = d
            .components()
            .iter()
            .all(|comp| match tables.fourcorner(comp.as_char()) {
                Some(fc) => {
                    code.push(letter);
                    code.push_str(fc.as_str());
                    true
                }
                None => false,
            });
        if complete {
            return Some(StructureAwareCode(code));
        }
    }
    own.map(|fc| StructureAwareCode(fc.as_str().to_string()))
}

/// Edit-distance similarity of the structure-aware codes.
pub fn glyph_sim2(tables: &CharTables, c1: char, c2: char) -> Similarity {
    match (
        structure_aware_code(tables, c1),
        structure_aware_code(tables, c2),
    ) {
        (Some(a), Some(b)) => Similarity::new(edit_similarity(a.as_bytes(), b.as_bytes())),
        _ => Similarity::identity(c1, c2),
    }
}

/// Edit-distance similarity of the stroke sequences.
pub fn glyph_sim3(tables: &CharTables, c1: char, c2: char) -> Similarity {
    match (tables.strokes(c1), tables.strokes(c2)) {
        (Some(a), Some(b)) => Similarity::new(edit_similarity(a.strokes(), b.strokes())),
        _ => Similarity::identity(c1, c2),
    }
}

/// LCS of the stroke sequences over the longer sequence's length.
pub fn glyph_sim4(tables: &CharTables, c1: char, c2: char) -> Similarity {
    match (tables.strokes(c1), tables.strokes(c2)) {
        (Some(a), Some(b)) => Similarity::new(lcs_ratio(a.strokes(), b.strokes())),
        _ => Similarity::identity(c1, c2),
    }
}

pub fn glyph_breakdown(tables: &CharTables, c1: char, c2: char) -> GlyphBreakdown {
    GlyphBreakdown {
        four_corner: glyph_sim1(tables, c1, c2),
        structure: glyph_sim2(tables, c1, c2),
        stroke_edit: glyph_sim3(tables, c1, c2),
        stroke_lcs: glyph_sim4(tables, c1, c2),
    }
}

/// Mean of the four glyph components.
pub fn glyph_sim(tables: &CharTables, c1: char, c2: char) -> Similarity {
    glyph_breakdown(tables, c1, c2).mean()
}
