//! Fused character similarity, precomputed neighborhoods and confusion sets.
//!
//! The fused score interpolates phonetic and glyph similarity:
//! `beta * phonetic + (1 - beta) * glyph`. Identical characters always score
//! exactly 1.

use std::collections::{HashMap, HashSet};

use rustc_hash::FxHashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::chardata::{CharTables, FourCornerCode, HanChar, PinyinSeq};
use crate::distance::{Alphabet, BitSeq};
use crate::error::{Error, Result};
use crate::glyph::{self, code_match, GlyphBreakdown};
use crate::phonetic::{self, Similarity};

pub const DEFAULT_ALPHA: f64 = 1.1;
pub const DEFAULT_BETA: f64 = 0.7;
pub const DEFAULT_CONFUSION_THRESHOLD: f64 = 0.5;
pub const DEFAULT_STORE_FLOOR: f64 = 0.4;
/// The penalty used when copy punishment is switched on.
pub const COPY_PUNISHMENT: f64 = 0.1;

/// Knobs for scoring and confusion-set export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityParams {
    /// Weight of the similarity term added to model probabilities.
    pub alpha: f64,
    /// Phonetic share of the fused similarity.
    pub beta: f64,
    /// Subtracted from the source character's probability before scoring.
    pub copy_penalty: f64,
    pub confusion_threshold: f64,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        SimilarityParams {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            copy_penalty: 0.0,
            confusion_threshold: DEFAULT_CONFUSION_THRESHOLD,
        }
    }
}

impl SimilarityParams {
    pub fn validate(&self) -> Result<()> {
        check_beta(self.beta)?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Param(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.copy_penalty >= 0.0 && self.copy_penalty.is_finite()) {
            return Err(Error::Param(format!(
                "copy penalty must be >= 0, got {}",
                self.copy_penalty
            )));
        }
        check_unit("confusion threshold", self.confusion_threshold)
    }
}

fn check_unit(what: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Param(format!("{what} must be in [0, 1], got {v}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    check_unit("beta", beta)
}

fn interpolate(c1: char, c2: char, beta: f64, phonetic: f64, glyph: f64) -> Similarity {
    if c1 == c2 {
        return Similarity::ONE;
    }
    Similarity::new(beta * phonetic + (1.0 - beta) * glyph)
}

/// Every component behind one fused score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityBreakdown {
    pub phonetic: Similarity,
    pub glyph: GlyphBreakdown,
    pub glyph_mean: Similarity,
    pub fused: Similarity,
}

pub fn breakdown(
    tables: &CharTables,
    c1: char,
    c2: char,
    beta: f64,
) -> Result<SimilarityBreakdown> {
    check_beta(beta)?;
    let phonetic = phonetic::phonetic_sim(tables, c1, c2);
    let glyph = glyph::glyph_breakdown(tables, c1, c2);
    let glyph_mean = glyph.mean();
    Ok(SimilarityBreakdown {
        phonetic,
        glyph,
        glyph_mean,
        fused: interpolate(c1, c2, beta, phonetic.value(), glyph_mean.value()),
    })
}

/// Fused similarity computed straight from the tables.
pub fn sim(tables: &CharTables, c1: char, c2: char, beta: f64) -> Result<Similarity> {
    breakdown(tables, c1, c2, beta).map(|b| b.fused)
}

/// Table data for one character, flattened for repeated pairwise scoring.
#[derive(Debug, Clone, Default)]
struct Profile {
    readings: Option<Vec<BitSeq>>,
    fourcorner: Option<FourCornerCode>,
    sfc: Option<BitSeq>,
    strokes: Option<BitSeq>,
}

fn pinyin_symbols(p: &PinyinSeq) -> impl Iterator<Item = u32> + '_ {
    p.as_bytes().iter().map(|&b| u32::from(b))
}

fn sfc_symbols(tables: &CharTables, c: char) -> Option<Vec<u32>> {
    glyph::structure_aware_code(tables, c).map(|s| s.as_str().chars().map(u32::from).collect())
}

fn stroke_symbols(tables: &CharTables, c: char) -> Option<Vec<u32>> {
    tables
        .strokes(c)
        .map(|s| s.strokes().iter().map(|&k| u32::from(k)).collect())
}

/// Symbol alphabets of the three sequence domains.
#[derive(Debug, Clone)]
struct Alphabets {
    pinyin: Alphabet,
    sfc: Alphabet,
    strokes: Alphabet,
}

impl Alphabets {
    fn new(tables: &CharTables) -> Self {
        let chars: Vec<char> = tables.characters().iter().map(|c| c.as_char()).collect();
        Alphabets {
            pinyin: Alphabet::new(
                chars
                    .iter()
                    .filter_map(|&c| tables.pinyin(c))
                    .flatten()
                    .flat_map(pinyin_symbols),
            ),
            sfc: Alphabet::new(
                chars
                    .iter()
                    .filter_map(|&c| sfc_symbols(tables, c))
                    .flatten(),
            ),
            strokes: Alphabet::new(
                tables
                    .stroke_alphabet()
                    .iter()
                    .map(|&k| u32::from(k))
                    .chain(
                        chars
                            .iter()
                            .filter_map(|&c| stroke_symbols(tables, c))
                            .flatten(),
                    ),
            ),
        }
    }
}

impl Profile {
    fn new(tables: &CharTables, alphabets: &Alphabets, c: char) -> Self {
        Profile {
            readings: tables.pinyin(c).map(|r| {
                r.iter()
                    .map(|p| BitSeq::new(pinyin_symbols(p).collect(), &alphabets.pinyin))
                    .collect()
            }),
            fourcorner: tables.fourcorner(c),
            sfc: sfc_symbols(tables, c).map(|s| BitSeq::new(s, &alphabets.sfc)),
            strokes: stroke_symbols(tables, c).map(|s| BitSeq::new(s, &alphabets.strokes)),
        }
    }
}

fn either<T>(a: &Option<T>, b: &Option<T>, f: impl FnOnce(&T, &T) -> f64) -> f64 {
    match (a, b) {
        (Some(a), Some(b)) => f(a, b),
        _ => 0.0,
    }
}

// bit-identical to phonetic::best_reading_sim
fn best_reading(r1: &[BitSeq], r2: &[BitSeq]) -> f64 {
    let mut best = 0.0f64;
    for a in r1 {
        for b in r2 {
            if a.symbols() == b.symbols() {
                return 1.0;
            }
            best = best.max(a.edit_similarity(b));
        }
    }
    best
}

fn profile_sim(c1: char, p1: &Profile, c2: char, p2: &Profile, beta: f64) -> Similarity {
    if c1 == c2 {
        return Similarity::ONE;
    }
    let phonetic = either(&p1.readings, &p2.readings, |a, b| best_reading(a, b));
    let g1 = either(&p1.fourcorner, &p2.fourcorner, code_match);
    let g2 = either(&p1.sfc, &p2.sfc, |a, b| a.edit_similarity(b));
    let (g3, g4) = match (&p1.strokes, &p2.strokes) {
        (Some(a), Some(b)) => {
            let lcs = a.lcs(b);
            let longest = a.len().max(b.len());
            let ratio = if longest == 0 {
                1.0
            } else {
                lcs as f64 / longest as f64
            };
            (a.edit_similarity_with(b, lcs), ratio)
        }
        _ => (0.0, 0.0),
    };
    // same operation order as GlyphBreakdown::mean
    let glyph = Similarity::new((g1 + g2 + g3 + g4) / 4.0).value();
    interpolate(c1, c2, beta, Similarity::new(phonetic).value(), glyph)
}

/// Precomputed per-character data for fast exact scoring over a charset.
///
/// Scores are bit-identical to [`sim`]. Characters outside the charset are
/// scored directly from the tables.
#[derive(Debug, Clone)]
pub struct Scorer<'t> {
    tables: &'t CharTables,
    beta: f64,
    alphabets: Alphabets,
    profiles: FxHashMap<char, Profile>,
}

impl<'t> Scorer<'t> {
    pub fn new(
        tables: &'t CharTables,
        beta: f64,
        chars: impl IntoIterator<Item = char>,
    ) -> Result<Self> {
        check_beta(beta)?;
        let alphabets = Alphabets::new(tables);
        let profiles = chars
            .into_iter()
            .map(|c| (c, Profile::new(tables, &alphabets, c)))
            .collect();
        Ok(Scorer {
            tables,
            beta,
            alphabets,
            profiles,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tables(&self) -> &'t CharTables {
        self.tables
    }

    pub fn score(&self, c1: char, c2: char) -> Similarity {
        if c1 == c2 {
            return Similarity::ONE;
        }
        match (self.profiles.get(&c1), self.profiles.get(&c2)) {
            (Some(p1), Some(p2)) => profile_sim(c1, p1, c2, p2, self.beta),
            (p1, p2) => {
                let p1 = p1
                    .cloned()
                    .unwrap_or_else(|| Profile::new(self.tables, &self.alphabets, c1));
                let p2 = p2
                    .cloned()
                    .unwrap_or_else(|| Profile::new(self.tables, &self.alphabets, c2));
                profile_sim(c1, &p1, c2, &p2, self.beta)
            }
        }
    }
}

/// Stored scores as one bitmap row per charset character, with per-word
/// rank counts into a flat score array.
#[derive(Debug, Clone, Default)]
struct Cells {
    index: FxHashMap<char, u32>,
    dense: Vec<u16>,
    words: usize,
    bits: Vec<u64>,
    ranks: Vec<u32>,
    starts: Vec<usize>,
    scores: Vec<Similarity>,
}

/// Outcome of a single matrix lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Stored(Similarity),
    /// Both characters are in the charset but the pair was not stored.
    Unstored,
    Uncovered,
}

const DENSE_BASE: u32 = 0x4E00;
const DENSE_END: u32 = 0xA000;

impl Cells {
    fn set_index(&mut self, index: FxHashMap<char, u32>) {
        self.dense = vec![u16::MAX; (DENSE_END - DENSE_BASE) as usize];
        for (&c, &i) in &index {
            if (DENSE_BASE..DENSE_END).contains(&(c as u32)) && i < u16::MAX as u32 {
                self.dense[(c as u32 - DENSE_BASE) as usize] = i as u16;
            }
        }
        self.index = index;
    }

    #[inline]
    fn position(&self, c: char) -> Option<usize> {
        let k = (c as u32).wrapping_sub(DENSE_BASE) as usize;
        match self.dense.get(k) {
            Some(&i) if i != u16::MAX => Some(i as usize),
            _ => self.index.get(&c).map(|&i| i as usize),
        }
    }

    fn lookup(&self, c1: char, c2: char) -> Cell {
        let (Some(i), Some(j)) = (self.position(c1), self.position(c2)) else {
            return Cell::Uncovered;
        };
        let w = i * self.words + j / 64;
        let word = self.bits[w];
        let bit = 1u64 << (j % 64);
        if word & bit == 0 {
            return Cell::Unstored;
        }
        let rank = self.ranks[w] as usize + (word & (bit - 1)).count_ones() as usize;
        Cell::Stored(self.scores[self.starts[i] + rank])
    }

    /// Looks up every candidate against one row. The score load does not
    /// depend on whether the bit is set, so lookups overlap.
    fn lookup_row<T>(
        &self,
        source: char,
        candidates: &[(char, f64)],
        out: &mut Vec<T>,
        mut f: impl FnMut(char, Cell) -> T,
    ) {
        out.clear();
        let Some(i) = self.position(source) else {
            out.extend(candidates.iter().map(|&(c, _)| f(c, Cell::Uncovered)));
            return;
        };
        let start = self.starts[i];
        let last = self.scores.len().saturating_sub(1);
        let bits = &self.bits[i * self.words..(i + 1) * self.words];
        let ranks = &self.ranks[i * self.words..(i + 1) * self.words];
        for &(c, _) in candidates {
            let Some(j) = self.position(c) else {
                out.push(f(c, Cell::Uncovered));
                continue;
            };
            let word = bits[j / 64];
            let bit = 1u64 << (j % 64);
            let rank = ranks[j / 64] as usize + (word & (bit - 1)).count_ones() as usize;
            let s = self.scores.get((start + rank).min(last)).copied();
            let cell = match s {
                _ if c == source => Cell::Stored(Similarity::ONE),
                Some(s) if word & bit != 0 => Cell::Stored(s),
                _ => Cell::Unstored,
            };
            out.push(f(c, cell));
        }
    }
}

/// Cached similarity neighborhoods over a charset.
///
/// Only pairs scoring at least `store_floor` are kept. Each neighbor list is
/// sorted by descending score, ties broken by codepoint, and never contains
/// the character itself.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    charset: Vec<HanChar>,
    neighbors: HashMap<HanChar, Vec<(HanChar, Similarity)>>,
    cells: Cells,
    pair_count: usize,
    store_floor: f64,
    beta: f64,
}

impl SimilarityMatrix {
    pub fn charset(&self) -> &[HanChar] {
        &self.charset
    }

    pub fn store_floor(&self) -> f64 {
        self.store_floor
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn neighbors(&self, c: char) -> &[(HanChar, Similarity)] {
        HanChar::new(c)
            .and_then(|h| self.neighbors.get(&h))
            .map_or(&[], Vec::as_slice)
    }

    /// Stored score for the pair; identical characters always give 1.
    pub fn get(&self, c1: char, c2: char) -> Option<Similarity> {
        if c1 == c2 {
            return Some(Similarity::ONE);
        }
        match self.cells.lookup(c1, c2) {
            Cell::Stored(s) => Some(s),
            _ => None,
        }
    }

    /// Like `get`, but also says whether both characters are covered.
    pub fn lookup(&self, c1: char, c2: char) -> Cell {
        if c1 == c2 && self.covers(c1) {
            return Cell::Stored(Similarity::ONE);
        }
        self.cells.lookup(c1, c2)
    }

    /// Number of stored unordered pairs.
    pub fn pair_count(&self) -> usize {
        self.pair_count
    }

    /// Whether `c` is in the charset the matrix was built over.
    pub fn covers(&self, c: char) -> bool {
        self.cells.index.contains_key(&c)
    }

    /// Stored unordered pairs, smaller codepoint first, sorted by that pair.
    pub fn pairs(&self) -> Vec<(HanChar, HanChar, Similarity)> {
        let mut out: Vec<_> = self
            .neighbors
            .iter()
            .flat_map(|(a, ns)| {
                ns.iter()
                    .filter(move |(b, _)| a < b)
                    .map(move |(b, s)| (*a, *b, *s))
            })
            .collect();
        out.sort_by_key(|(a, b, _)| (*a, *b));
        out
    }

    fn from_pairs(
        charset: Vec<HanChar>,
        pairs: Vec<(HanChar, HanChar, Similarity)>,
        beta: f64,
        store_floor: f64,
    ) -> Self {
        let mut neighbors: HashMap<HanChar, Vec<(HanChar, Similarity)>> =
            charset.iter().map(|c| (*c, Vec::new())).collect();
        let pair_count = pairs.len();
        for (a, b, s) in pairs {
            neighbors.entry(a).or_default().push((b, s));
            neighbors.entry(b).or_default().push((a, s));
        }
        let index: FxHashMap<char, u32> = charset
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_char(), i as u32))
            .collect();
        let words = charset.len().div_ceil(64);
        let mut cells = Cells {
            words,
            bits: vec![0; words * charset.len()],
            ranks: vec![0; words * charset.len()],
            starts: Vec::with_capacity(charset.len()),
            scores: Vec::with_capacity(2 * pair_count),
            ..Default::default()
        };
        for (i, c) in charset.iter().enumerate() {
            let mut row: Vec<(usize, Similarity)> = neighbors
                .get(c)
                .into_iter()
                .flatten()
                .filter_map(|(n, s)| index.get(&n.as_char()).map(|&j| (j as usize, *s)))
                .collect();
            row.sort_by_key(|(j, _)| *j);
            cells.starts.push(cells.scores.len());
            for (j, s) in row {
                cells.bits[i * words + j / 64] |= 1 << (j % 64);
                cells.scores.push(s);
            }
            let mut seen = 0;
            for w in i * words..(i + 1) * words {
                cells.ranks[w] = seen;
                seen += cells.bits[w].count_ones();
            }
        }
        cells.set_index(index);
        for list in neighbors.values_mut() {
            list.sort_by(|(ca, sa), (cb, sb)| sb.value().total_cmp(&sa.value()).then(ca.cmp(cb)));
        }
        SimilarityMatrix {
            charset,
            neighbors,
            cells,
            pair_count,
            store_floor,
            beta,
        }
    }

    /// Writes the cache TSV: a `#beta=… floor=…` header, then one row per
    /// stored pair with the smaller codepoint first and six decimals.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#beta={} floor={}", self.beta, self.store_floor)?;
        for (a, b, s) in self.pairs() {
            writeln!(out, "{a}\t{b}\t{:.6}", s.value())?;
        }
        Ok(())
    }

    /// Reads a cache written by [`write_tsv`](Self::write_tsv). Scores come
    /// back rounded to six decimals; the charset is every character named
    /// in a row.
    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self> {
        const FILE: &str = "matrix cache";
        let bad = |line: usize, reason: String| Error::Malformed {
            file: FILE.into(),
            line,
            reason,
        };
        let mut beta = None;
        let mut floor = None;
        let mut pairs = Vec::new();
        let mut chars = HashSet::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let n = idx + 1;
            if let Some(h) = line.strip_prefix('#') {
                for kv in h.split_whitespace() {
                    let parse =
                        |v: &str| v.parse::<f64>().map_err(|e| bad(n, format!("{kv}: {e}")));
                    match kv.split_once('=') {
                        Some(("beta", v)) => beta = Some(parse(v)?),
                        Some(("floor", v)) => floor = Some(parse(v)?),
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [a, b, s] = fields[..] else {
                return Err(bad(n, "expected 3 columns".into()));
            };
            let han = |s: &str| {
                let mut it = s.chars();
                match (it.next().and_then(HanChar::new), it.next()) {
                    (Some(h), None) => Ok(h),
                    _ => Err(bad(n, format!("{s:?} is not one Han character"))),
                }
            };
            let (a, b) = (han(a)?, han(b)?);
            if a >= b {
                return Err(bad(n, "pair must list the smaller codepoint first".into()));
            }
            let s: f64 = s.parse().map_err(|e| bad(n, format!("score {s:?}: {e}")))?;
            if !(0.0..=1.0).contains(&s) {
                return Err(bad(n, format!("score {s} outside [0, 1]")));
            }
            if floor.is_some_and(|f| s < f) {
                return Err(bad(n, format!("score {s} below the floor")));
            }
            chars.insert(a);
            chars.insert(b);
            pairs.push((a, b, Similarity::new(s)));
        }
        let beta = beta.ok_or_else(|| bad(1, "missing #beta= header".into()))?;
        check_beta(beta)?;
        let floor = floor.ok_or_else(|| bad(1, "missing floor= header".into()))?;
        let mut charset: Vec<HanChar> = chars.into_iter().collect();
        charset.sort();
        Ok(SimilarityMatrix::from_pairs(charset, pairs, beta, floor))
    }
}

fn check_charset(charset: &[HanChar]) -> Result<()> {
    if charset.is_empty() {
        return Err(Error::Param("charset is empty".into()));
    }
    let mut seen = HashSet::with_capacity(charset.len());
    if let Some(dup) = charset.iter().find(|c| !seen.insert(**c)) {
        return Err(Error::Param(format!("charset lists {dup} twice")));
    }
    Ok(())
}

/// Scores every unordered pair of `charset` and calls `keep` on each
/// `(i, j, score)` with `i < j`, returning those it accepts in index order.
fn scan_pairs(
    scorer: &Scorer<'_>,
    charset: &[HanChar],
    keep: impl Fn(Similarity) -> bool + Sync,
) -> Vec<(HanChar, HanChar, Similarity)> {
    let profiles: Vec<Profile> = charset
        .iter()
        .map(|c| {
            scorer
                .profiles
                .get(&c.as_char())
                .cloned()
                .unwrap_or_default()
        })
        .collect();
    (0..charset.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (ci, pi) = (charset[i].as_char(), &profiles[i]);
            let keep = &keep;
            let profiles = &profiles;
            (i + 1..charset.len()).filter_map(move |j| {
                let s = profile_sim(ci, pi, charset[j].as_char(), &profiles[j], scorer.beta);
                keep(s).then_some((charset[i], charset[j], s))
            })
        })
        .collect()
}

/// Evaluates all unordered pairs of `charset` and keeps those scoring at
/// least `store_floor`. Output does not depend on evaluation order.
pub fn build_matrix(
    tables: &CharTables,
    charset: &[HanChar],
    beta: f64,
    store_floor: f64,
) -> Result<SimilarityMatrix> {
    check_charset(charset)?;
    let scorer = Scorer::new(tables, beta, charset.iter().map(|c| c.as_char()))?;
    let pairs = scan_pairs(&scorer, charset, |s| s.value() >= store_floor);
    Ok(SimilarityMatrix::from_pairs(
        charset.to_vec(),
        pairs,
        beta,
        store_floor,
    ))
}

fn sorted_pairs(mut pairs: Vec<(HanChar, HanChar)>) -> Vec<(HanChar, HanChar)> {
    for p in pairs.iter_mut() {
        if p.0 > p.1 {
            *p = (p.1, p.0);
        }
    }
    pairs.sort();
    pairs
}

/// Pairs scoring strictly above `threshold`, read from a matrix.
///
/// Fails when `threshold` is below the matrix floor, since pairs under the
/// floor were never stored.
pub fn confusion_set(matrix: &SimilarityMatrix, threshold: f64) -> Result<Vec<(HanChar, HanChar)>> {
    check_unit("threshold", threshold)?;
    if threshold < matrix.store_floor {
        return Err(Error::Param(format!(
            "threshold {threshold} is below the matrix floor {}",
            matrix.store_floor
        )));
    }
    Ok(sorted_pairs(
        matrix
            .pairs()
            .into_iter()
            .filter(|(_, _, s)| s.value() > threshold)
            .map(|(a, b, _)| (a, b))
            .collect(),
    ))
}

/// Pairs of `charset` scoring strictly above `threshold`, computed directly.
pub fn confusion_set_from_tables(
    tables: &CharTables,
    charset: &[HanChar],
    beta: f64,
    threshold: f64,
) -> Result<Vec<(HanChar, HanChar)>> {
    check_unit("threshold", threshold)?;
    check_charset(charset)?;
    let scorer = Scorer::new(tables, beta, charset.iter().map(|c| c.as_char()))?;
    let pairs = scan_pairs(&scorer, charset, |s| s.value() > threshold);
    Ok(sorted_pairs(
        pairs.into_iter().map(|(a, b, _)| (a, b)).collect(),
    ))
}

/// Writes a confusion set as TSV under a `#beta=… threshold=…` header.
pub fn write_confusion_tsv<W: Write>(
    pairs: &[(HanChar, HanChar)],
    beta: f64,
    threshold: f64,
    mut out: W,
) -> Result<()> {
    let mut buf = String::new();
    let _ = writeln!(buf, "#beta={beta} threshold={threshold}");
    for (a, b) in pairs {
        let _ = writeln!(buf, "{a}\t{b}");
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

/// What a provider can say about a pair without computing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimilarityHint {
    Exact(f64),
    /// The similarity is strictly below this value.
    Below(f64),
}

/// Source of `Sim(source, candidate)` values for decoding.
pub trait SimilarityProvider: Sync {
    fn similarity(&self, source: char, candidate: char) -> f64;

    /// Lets decoding skip exact scores for candidates that cannot win.
    fn hint(&self, source: char, candidate: char) -> SimilarityHint {
        SimilarityHint::Exact(self.similarity(source, candidate))
    }

    /// [`hint`](Self::hint) for every candidate of one source, in order.
    fn hints(&self, source: char, candidates: &[(char, f64)], out: &mut Vec<SimilarityHint>) {
        out.clear();
        out.extend(candidates.iter().map(|&(c, _)| self.hint(source, c)));
    }
}

impl<F> SimilarityProvider for F
where
    F: Fn(char, char) -> f64 + Sync,
{
    fn similarity(&self, source: char, candidate: char) -> f64 {
        self(source, candidate)
    }
}

/// Exact scores computed on demand from the tables.
#[derive(Debug, Clone, Copy)]
pub struct TableSimilarity<'t> {
    tables: &'t CharTables,
    beta: f64,
}

impl<'t> TableSimilarity<'t> {
    pub fn new(tables: &'t CharTables, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(TableSimilarity { tables, beta })
    }
}

impl SimilarityProvider for TableSimilarity<'_> {
    fn similarity(&self, source: char, candidate: char) -> f64 {
        sim(self.tables, source, candidate, self.beta)
            .map(Similarity::value)
            .unwrap_or(0.0)
    }
}

impl SimilarityProvider for Scorer<'_> {
    fn similarity(&self, source: char, candidate: char) -> f64 {
        self.score(source, candidate).value()
    }
}

/// Matrix lookups with exact recomputation for pairs the matrix did not
/// store.
#[derive(Debug, Clone)]
pub struct CachedSimilarity<'m, 't> {
    matrix: &'m SimilarityMatrix,
    scorer: Scorer<'t>,
}

impl<'m, 't> CachedSimilarity<'m, 't> {
    pub fn new(matrix: &'m SimilarityMatrix, tables: &'t CharTables) -> Result<Self> {
        let scorer = Scorer::new(
            tables,
            matrix.beta,
            matrix.charset.iter().map(|c| c.as_char()),
        )?;
        Ok(CachedSimilarity { matrix, scorer })
    }
}

impl SimilarityProvider for CachedSimilarity<'_, '_> {
    fn similarity(&self, source: char, candidate: char) -> f64 {
        match self.matrix.get(source, candidate) {
            Some(s) => s.value(),
            None => self.scorer.score(source, candidate).value(),
        }
    }

    /// Pairs inside the charset that the matrix did not store score below
    /// its floor.
    fn hint(&self, source: char, candidate: char) -> SimilarityHint {
        match self.matrix.lookup(source, candidate) {
            Cell::Stored(s) => SimilarityHint::Exact(s.value()),
            Cell::Unstored => SimilarityHint::Below(self.matrix.store_floor),
            Cell::Uncovered => SimilarityHint::Exact(self.scorer.score(source, candidate).value()),
        }
    }

    fn hints(&self, source: char, candidates: &[(char, f64)], out: &mut Vec<SimilarityHint>) {
        let floor = self.matrix.store_floor;
        self.matrix
            .cells
            .lookup_row(source, candidates, out, |c, cell| match cell {
                Cell::Stored(s) => SimilarityHint::Exact(s.value()),
                Cell::Unstored => SimilarityHint::Below(floor),
                Cell::Uncovered => SimilarityHint::Exact(self.scorer.score(source, c).value()),
            });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(c: char) -> HanChar {
        HanChar::new(c).unwrap()
    }

    #[test]
    fn worked_pair() {
        let t = CharTables::bundled();
        let s = sim(&t, '忠', '仲', 0.7).unwrap().value();
        let glyph = (0.0 + 0.5 + (1.0 - 6.0 / 14.0) + 0.5) / 4.0;
        assert!((s - (0.7 + 0.3 * glyph)).abs() < 1e-12);
        assert!((0.80..=0.84).contains(&s));
    }

    #[test]
    fn identity_and_non_han() {
        let t = CharTables::bundled();
        for beta in [0.0, 0.3, 0.7, 1.0] {
            assert_eq!(sim(&t, '仲', '仲', beta).unwrap(), Similarity::ONE);
            assert_eq!(sim(&t, ',', ',', beta).unwrap(), Similarity::ONE);
            assert_eq!(sim(&t, ',', '!', beta).unwrap(), Similarity::ZERO);
        }
    }

    #[test]
    fn beta_is_validated() {
        let t = CharTables::bundled();
        assert!(matches!(sim(&t, '忠', '仲', 1.1), Err(Error::Param(_))));
        assert!(sim(&t, '忠', '仲', -0.01).is_err());
        assert!(sim(&t, '忠', '仲', f64::NAN).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(SimilarityParams::default().validate().is_ok());
        let p = SimilarityParams {
            alpha: -1.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = SimilarityParams {
            copy_penalty: -0.1,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = SimilarityParams {
            confusion_threshold: 1.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn scorer_matches_reference() {
        let t = CharTables::bundled();
        let chars = [
            '忠', '仲', '读', '度', '少', '行', '木', '本', ',', '睛', '镜',
        ];
        let scorer = Scorer::new(&t, 0.7, chars.iter().copied().take(6)).unwrap();
        for a in chars {
            for b in chars {
                let exact = sim(&t, a, b, 0.7).unwrap();
                assert_eq!(scorer.score(a, b), exact, "{a}{b}");
            }
        }
    }

    #[test]
    fn two_char_matrix() {
        let t = CharTables::bundled();
        let m = build_matrix(&t, &[h('忠'), h('仲')], 0.7, 0.4).unwrap();
        assert_eq!(m.pair_count(), 1);
        let s = sim(&t, '忠', '仲', 0.7).unwrap();
        assert_eq!(m.neighbors('忠'), &[(h('仲'), s)]);
        assert_eq!(m.neighbors('仲'), &[(h('忠'), s)]);
        assert_eq!(m.get('仲', '忠'), Some(s));
        assert_eq!(m.get('仲', '仲'), Some(Similarity::ONE));
    }

    #[test]
    fn single_char_matrix_is_empty() {
        let t = CharTables::bundled();
        let m = build_matrix(&t, &[h('忠')], 0.7, 0.0).unwrap();
        assert_eq!(m.pair_count(), 0);
        assert!(m.neighbors('忠').is_empty());
    }

    #[test]
    fn charset_preconditions() {
        let t = CharTables::bundled();
        assert!(build_matrix(&t, &[], 0.7, 0.4).is_err());
        assert!(build_matrix(&t, &[h('忠'), h('忠')], 0.7, 0.4).is_err());
    }

    #[test]
    fn neighbor_lists_sorted() {
        let t = CharTables::bundled();
        let cs: Vec<HanChar> = "忠仲中种钟众重虫冲".chars().map(h).collect();
        let m = build_matrix(&t, &cs, 0.7, 0.0).unwrap();
        for c in &cs {
            let ns = m.neighbors(c.as_char());
            assert_eq!(ns.len(), cs.len() - 1);
            assert!(ns.iter().all(|(n, _)| n != c));
            for w in ns.windows(2) {
                assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let t = CharTables::bundled();
        let cs: Vec<HanChar> = "忠仲中种钟".chars().map(h).collect();
        let m = build_matrix(&t, &cs, 0.7, 0.4).unwrap();
        let mut buf = Vec::new();
        m.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#beta=0.7 floor=0.4\n"));
        let back = SimilarityMatrix::read_tsv(buf.as_slice()).unwrap();
        assert_eq!(back.pair_count(), m.pair_count());
        for (a, b, s) in m.pairs() {
            let got = back.get(a.as_char(), b.as_char()).unwrap().value();
            assert!((got - s.value()).abs() <= 5e-7);
        }
        let mut again = Vec::new();
        back.write_tsv(&mut again).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn cache_rejects_bad_rows() {
        assert!(
            SimilarityMatrix::read_tsv("#beta=0.7 floor=0.4\n忠\t仲\t0.5\n".as_bytes()).is_err()
        );
        assert!(SimilarityMatrix::read_tsv("仲\t忠\t0.5\n".as_bytes()).is_err());
        assert!(
            SimilarityMatrix::read_tsv("#beta=0.7 floor=0.4\n仲\t忠\t1.5\n".as_bytes()).is_err()
        );
        assert!(
            SimilarityMatrix::read_tsv("#beta=0.7 floor=0.4\n仲\t忠\t0.3\n".as_bytes()).is_err()
        );
    }

    #[test]
    fn confusion_pairs() {
        let t = CharTables::bundled();
        let cs = [h('忠'), h('仲')];
        assert_eq!(
            confusion_set_from_tables(&t, &cs, 0.7, 0.5).unwrap(),
            vec![(h('仲'), h('忠'))]
        );
        assert!(confusion_set_from_tables(&t, &cs, 0.7, 1.0)
            .unwrap()
            .is_empty());
        let m = build_matrix(&t, &cs, 0.7, 0.4).unwrap();
        assert_eq!(confusion_set(&m, 0.5).unwrap(), vec![(h('仲'), h('忠'))]);
        assert!(confusion_set(&m, 0.3).is_err());
    }

    #[test]
    fn confusion_threshold_is_strict() {
        // one pair whose fused score is exactly 0.5: phonetic 1, glyph 0, beta 0.5
        let t = CharTables::from_sources("甲\tjia\n乙\tjia\n", "", "", "").unwrap();
        let cs = [h('甲'), h('乙')];
        assert_eq!(sim(&t, '甲', '乙', 0.5).unwrap().value(), 0.5);
        assert!(confusion_set_from_tables(&t, &cs, 0.5, 0.5)
            .unwrap()
            .is_empty());
        assert_eq!(
            confusion_set_from_tables(&t, &cs, 0.5, 0.49).unwrap().len(),
            1
        );
    }

    #[test]
    fn providers_agree() {
        let t = CharTables::bundled();
        let cs: Vec<HanChar> = "忠仲读度少".chars().map(h).collect();
        let m = build_matrix(&t, &cs, 0.7, 0.4).unwrap();
        let cached = CachedSimilarity::new(&m, &t).unwrap();
        let exact = TableSimilarity::new(&t, 0.7).unwrap();
        for a in "忠仲读度少木,".chars() {
            for b in "忠仲读度少本,".chars() {
                assert_eq!(cached.similarity(a, b), exact.similarity(a, b), "{a}{b}");
            }
        }
    }

    #[test]
    fn batch_hints_match_single() {
        let t = CharTables::bundled();
        let cs: Vec<HanChar> = crate::chardata::bundled_charset()
            .iter()
            .step_by(23)
            .take(150)
            .copied()
            .collect();
        let m = build_matrix(&t, &cs, 0.7, 0.5).unwrap();
        let cached = CachedSimilarity::new(&m, &t).unwrap();
        let mut cands: Vec<(char, f64)> = cs.iter().map(|c| (c.as_char(), 0.0)).collect();
        cands.extend([('本', 0.0), (',', 0.0)]);
        let mut out = Vec::new();
        for src in cands.iter().map(|&(c, _)| c) {
            cached.hints(src, &cands, &mut out);
            assert_eq!(out.len(), cands.len());
            for (&(c, _), got) in cands.iter().zip(&out) {
                assert_eq!(*got, cached.hint(src, c), "{src}{c}");
                if let SimilarityHint::Exact(s) = got {
                    assert_eq!(*s, cached.similarity(src, c));
                }
            }
        }
    }
}
