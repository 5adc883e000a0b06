//! Sequence distances shared by the phonetic and glyph measures.

/// Per-operation costs for [`weighted_levenshtein`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditCosts {
    pub insert: u32,
    pub delete: u32,
    pub substitute: u32,
}

impl EditCosts {
    /// Insert 1, delete 1, substitute 2. Used by every similarity in the crate.
    pub const UNIT_SUB2: EditCosts = EditCosts {
        insert: 1,
        delete: 1,
        substitute: 2,
    };

    /// Returns `None` unless `substitute <= insert + delete`.
    pub fn new(insert: u32, delete: u32, substitute: u32) -> Option<Self> {
        (substitute <= insert + delete).then_some(EditCosts {
            insert,
            delete,
            substitute,
        })
    }
}

impl Default for EditCosts {
    fn default() -> Self {
        EditCosts::UNIT_SUB2
    }
}

/// Minimal total cost of turning `a` into `b`.
///
/// Either sequence may be empty. Runs in `O(|a|·|b|)` time with a single
/// row of scratch space.
pub fn weighted_levenshtein<T: PartialEq>(a: &[T], b: &[T], costs: EditCosts) -> u32 {
    if a.is_empty() {
        return b.len() as u32 * costs.insert;
    }
    if b.is_empty() {
        return a.len() as u32 * costs.delete;
    }

    // row[j] = distance(a[..i], b[..j])
    let mut row: Vec<u32> = (0..=b.len() as u32).map(|j| j * costs.insert).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = (i as u32 + 1) * costs.delete;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            let sub = if x == y {
                diag
            } else {
                diag + costs.substitute
            };
            let best = sub.min(up + costs.delete).min(row[j] + costs.insert);
            diag = up;
            row[j + 1] = best;
        }
    }
    row[b.len()]
}

/// Length of a longest common subsequence of `a` and `b`.
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// `1 - LD(a, b) / (|a| + |b|)` under the 1/1/2 costs.
///
/// Callers guarantee that at least one sequence is nonempty.
pub(crate) fn edit_similarity<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let total = (a.len() + b.len()) as f64;
    let d = weighted_levenshtein(a, b, EditCosts::UNIT_SUB2) as f64;
    (1.0 - d / total).clamp(0.0, 1.0)
}

/// Dense ids for the symbols of one sequence domain.
#[derive(Debug, Clone, Default)]
pub(crate) struct Alphabet {
    symbols: Vec<u32>,
}

impl Alphabet {
    /// Keeps at most 255 distinct symbols; others stay unknown.
    pub(crate) fn new(symbols: impl IntoIterator<Item = u32>) -> Self {
        let mut symbols: Vec<u32> = symbols.into_iter().collect();
        symbols.sort_unstable();
        symbols.dedup();
        symbols.truncate(UNKNOWN as usize);
        Alphabet { symbols }
    }

    fn id(&self, s: u32) -> u8 {
        self.symbols.binary_search(&s).map_or(UNKNOWN, |i| i as u8)
    }
}

const UNKNOWN: u8 = u8::MAX;

/// A symbol sequence prepared for repeated LCS queries against sequences
/// over the same [`Alphabet`].
///
/// Sequences of up to 64 known symbols use a bit-parallel LCS; anything
/// else falls back to the dynamic program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSeq {
    symbols: Vec<u32>,
    ids: Vec<u8>,
    masks: Option<Vec<u64>>,
}

impl BitSeq {
    pub(crate) fn new(symbols: Vec<u32>, alphabet: &Alphabet) -> Self {
        let ids: Vec<u8> = symbols.iter().map(|&s| alphabet.id(s)).collect();
        let masks = (symbols.len() <= 64 && !ids.contains(&UNKNOWN)).then(|| {
            let mut m = vec![0u64; alphabet.symbols.len()];
            for (i, &id) in ids.iter().enumerate() {
                m[id as usize] |= 1 << i;
            }
            m
        });
        BitSeq {
            symbols,
            ids,
            masks,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.symbols.len()
    }

    pub(crate) fn lcs(&self, other: &BitSeq) -> usize {
        let Some(masks) = &self.masks else {
            return lcs_length(&self.symbols, &other.symbols);
        };
        let mut v = !0u64;
        for &id in &other.ids {
            let u = v & masks.get(id as usize).copied().unwrap_or(0);
            v = v.wrapping_add(u) | (v - u);
        }
        let n = self.symbols.len();
        let used = if n == 64 { !0 } else { (1u64 << n) - 1 };
        (!v & used).count_ones() as usize
    }

    /// Same value as [`edit_similarity`] on the underlying sequences.
    pub(crate) fn edit_similarity(&self, other: &BitSeq) -> f64 {
        self.edit_similarity_with(other, self.lcs(other))
    }

    pub(crate) fn edit_similarity_with(&self, other: &BitSeq, lcs: usize) -> f64 {
        let total = self.len() + other.len();
        let d = (total - 2 * lcs) as f64;
        (1.0 - d / total as f64).clamp(0.0, 1.0)
    }

    pub(crate) fn symbols(&self) -> &[u32] {
        &self.symbols
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ld(a: &str, b: &str) -> u32 {
        weighted_levenshtein(a.as_bytes(), b.as_bytes(), EditCosts::UNIT_SUB2)
    }

    #[test]
    fn identical_is_zero() {
        assert_eq!(ld("zhong", "zhong"), 0);
        assert_eq!(ld("", ""), 0);
    }

    #[test]
    fn pinyin_examples() {
        assert_eq!(ld("du", "shao"), 6);
        assert_eq!(ld("jing", "jin"), 1);
    }

    #[test]
    fn empty_sides() {
        assert_eq!(ld("", "abc"), 3);
        assert_eq!(ld("abcd", ""), 4);
        let c = EditCosts::new(2, 3, 4).unwrap();
        assert_eq!(weighted_levenshtein(b"", b"ab", c), 4);
        assert_eq!(weighted_levenshtein(b"ab", b"", c), 6);
    }

    #[test]
    fn unit_costs_give_classic_distance() {
        let c = EditCosts::new(1, 1, 1).unwrap();
        assert_eq!(weighted_levenshtein(b"kitten", b"sitting", c), 3);
    }

    #[test]
    fn costs_reject_expensive_substitution() {
        assert!(EditCosts::new(1, 1, 3).is_none());
        assert!(EditCosts::new(1, 1, 2).is_some());
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_length(b"4090", b"5023"), 1);
        assert_eq!(lcs_length(b"zhong", b"zhong"), 5);
        let mu: Vec<char> = "一丨ノ、".chars().collect();
        let ben: Vec<char> = "一丨ノ、一".chars().collect();
        assert_eq!(lcs_length(&mu, &ben), 4);
        assert_eq!(lcs_length::<u8>(&[], b"abc"), 0);
    }

    #[test]
    fn bit_parallel_lcs_matches_dp() {
        let words = [
            "",
            "a",
            "zhong",
            "zhuang",
            "shao",
            "du",
            "C5000C3300",
            "B8000B5000",
            "abcabcabca",
        ];
        let alphabet = Alphabet::new(
            "abcdefghijklmnopqrstuvwxyzBC0123456789"
                .bytes()
                .map(u32::from),
        );
        let seq = |w: &str| BitSeq::new(w.bytes().map(u32::from).collect(), &alphabet);
        for a in words {
            for b in words {
                assert_eq!(
                    seq(a).lcs(&seq(b)),
                    lcs_length(a.as_bytes(), b.as_bytes()),
                    "{a} {b}"
                );
            }
        }
        let long: String = "ab".repeat(40);
        assert_eq!(seq(&long).lcs(&seq("ba")), 2);
        let full: String = "xy".repeat(32);
        assert_eq!(seq(&full).lcs(&seq(&full)), 64);
        // symbols outside the alphabet still compare exactly
        assert_eq!(seq("Q9Q").lcs(&seq("QQ")), 2);
        assert_eq!(seq("ab").lcs(&seq("aQb")), 2);
        assert_eq!(seq("aQb").lcs(&seq("ab")), 2);
    }
}
