//! Character knowledge tables: readings, four-corner codes, one-level
//! decompositions and stroke sequences.
//!
//! Tables are read from four TSV files (see the README for the formats) and
//! are immutable once loaded. Lookups never fail; absent keys come back as
//! [`Lookup::Missing`] and the similarity code decides what to do with them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub const PINYIN_FILE: &str = "pinyin.tsv";
pub const FOURCORNER_FILE: &str = "fourcorner.tsv";
pub const DECOMP_FILE: &str = "decomp.tsv";
pub const STROKES_FILE: &str = "strokes.tsv";

/// True when `c` is in one of the CJK Unified Ideographs blocks.
pub fn is_han(c: char) -> bool {
    matches!(c as u32,
        0x4E00..=0x9FFF
        | 0x3400..=0x4DBF
        | 0x20000..=0x2A6DF
        | 0x2A700..=0x2EE5F
        | 0x30000..=0x323AF)
}

/// A single CJK unified ideograph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HanChar(char);

impl HanChar {
    pub fn new(c: char) -> Option<Self> {
        is_han(c).then_some(HanChar(c))
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for HanChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<char> for HanChar {
    type Error = char;

    fn try_from(c: char) -> std::result::Result<Self, char> {
        HanChar::new(c).ok_or(c)
    }
}

/// A toneless pinyin syllable over `a-z`, with `v` standing in for `ü`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PinyinSeq(String);

impl PinyinSeq {
    /// Normalizes a raw reading: tone marks and tone digits are dropped,
    /// `ü`/`u:` become `v`, everything is lowercased.
    pub fn parse(raw: &str) -> std::result::Result<Self, String> {
        let mut out = String::with_capacity(raw.len());
        let mut chars = raw.nfd().peekable();
        while let Some(c) = chars.next() {
            match c {
                'a'..='z' | 'A'..='Z' => {
                    let c = c.to_ascii_lowercase();
                    let umlaut = matches!(chars.peek(), Some('\u{0308}') | Some(':'));
                    if c == 'u' && umlaut {
                        chars.next();
                        out.push('v');
                    } else {
                        out.push(c);
                    }
                }
                '1'..='5' => {}
                '\u{0300}'..='\u{036F}' => {}
                _ => return Err(format!("unexpected character {c:?} in reading {raw:?}")),
            }
        }
        if out.is_empty() {
            return Err(format!("empty reading {raw:?}"));
        }
        Ok(PinyinSeq(out))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PinyinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The first four digits of a four-corner index, stored as ASCII digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourCornerCode([u8; 4]);

impl FourCornerCode {
    pub fn parse(s: &str) -> Option<Self> {
        let b = s.as_bytes();
        if b.len() != 4 || !b.iter().all(u8::is_ascii_digit) {
            return None;
        }
        Some(FourCornerCode([b[0], b[1], b[2], b[3]]))
    }

    pub fn digits(&self) -> &[u8; 4] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        // ASCII digits by construction
        std::str::from_utf8(&self.0).unwrap()
    }
}

impl fmt::Display for FourCornerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Layout of a character's components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    Atomic,
    LeftRight,
    UpDown,
    Enclosure,
    /// Any other layout, identified by the letter the data file assigns it.
    Other(char),
}

impl Structure {
    pub const UNKNOWN_LETTER: char = 'Z';

    /// The letter used in structure-aware codes. Atomic is `A`, which never
    /// shows up in a code because atomic characters carry no prefix.
    pub fn letter(self) -> char {
        match self {
            Structure::Atomic => 'A',
            Structure::LeftRight => 'B',
            Structure::UpDown => 'C',
            Structure::Enclosure => 'D',
            Structure::Other(l) => l,
        }
    }

    fn name(self) -> String {
        match self {
            Structure::Atomic => "Atomic".into(),
            Structure::LeftRight => "LeftRight".into(),
            Structure::UpDown => "UpDown".into(),
            Structure::Enclosure => "Enclosure".into(),
            Structure::Other(l) => format!("Other{l}"),
        }
    }
}

/// Letter → structure assignment declared by the `#alphabet:` header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAlphabet {
    entries: BTreeMap<char, (Structure, String)>,
}

impl Default for StructureAlphabet {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert('B', (Structure::LeftRight, "LeftRight".to_string()));
        entries.insert('C', (Structure::UpDown, "UpDown".to_string()));
        entries.insert('D', (Structure::Enclosure, "Enclosure".to_string()));
        StructureAlphabet { entries }
    }
}

impl StructureAlphabet {
    /// Parses the body of `#alphabet: B=LeftRight,C=UpDown,...`.
    pub fn parse(spec: &str) -> std::result::Result<Self, String> {
        let mut entries = BTreeMap::new();
        let mut names = HashMap::new();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (letter, name) = item
                .split_once('=')
                .ok_or_else(|| format!("alphabet entry {item:?} is not LETTER=Name"))?;
            let mut lc = letter.trim().chars();
            let letter = match (lc.next(), lc.next()) {
                (Some(l), None) if l.is_ascii_uppercase() => l,
                _ => {
                    return Err(format!(
                        "structure letter {letter:?} must be one uppercase letter"
                    ))
                }
            };
            if letter == 'A' || letter == Structure::UNKNOWN_LETTER {
                return Err(format!("letter {letter} is reserved"));
            }
            let name = name.trim().to_string();
            let structure = match name.as_str() {
                "LeftRight" => Structure::LeftRight,
                "UpDown" => Structure::UpDown,
                "Enclosure" => Structure::Enclosure,
                "Atomic" => return Err("Atomic is implicit (letter A)".into()),
                _ => Structure::Other(letter),
            };
            if structure.letter() != letter {
                return Err(format!(
                    "{name} must use letter {}, not {letter}",
                    structure.letter()
                ));
            }
            if let Some(prev) = names.insert(name.clone(), letter) {
                return Err(format!("{name} assigned to both {prev} and {letter}"));
            }
            if entries.insert(letter, (structure, name)).is_some() {
                return Err(format!("letter {letter} assigned twice"));
            }
        }
        Ok(StructureAlphabet { entries })
    }

    /// Resolves a row letter. `A` is atomic; letters absent from the header
    /// come back as `None`.
    pub fn resolve(&self, letter: char) -> Option<Structure> {
        if letter == 'A' {
            return Some(Structure::Atomic);
        }
        self.entries.get(&letter).map(|(s, _)| *s)
    }

    fn header(&self) -> String {
        let body: Vec<String> = self
            .entries
            .iter()
            .map(|(l, (_, n))| format!("{l}={n}"))
            .collect();
        format!("#alphabet: {}", body.join(","))
    }
}

/// One-level structural decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    structure: Structure,
    components: Vec<HanChar>,
}

impl Decomposition {
    pub fn atomic() -> Self {
        Decomposition {
            structure: Structure::Atomic,
            components: Vec::new(),
        }
    }

    /// Atomic takes no components; every other structure needs at least two.
    pub fn new(structure: Structure, components: Vec<HanChar>) -> Option<Self> {
        let ok = match structure {
            Structure::Atomic => components.is_empty(),
            _ => components.len() >= 2,
        };
        ok.then_some(Decomposition {
            structure,
            components,
        })
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn components(&self) -> &[HanChar] {
        &self.components
    }

    pub fn is_atomic(&self) -> bool {
        self.structure == Structure::Atomic
    }
}

/// A stroke sequence over the alphabet declared in `strokes.tsv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrokeSeq(Vec<char>);

impl StrokeSeq {
    pub fn strokes(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for StrokeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// Non-fatal issues found while loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadWarning {
    DuplicateKey {
        file: &'static str,
        line: usize,
        ch: char,
    },
    UnknownStructure {
        line: usize,
        letter: char,
    },
    /// A decomposition component has no four-corner code.
    ComponentWithoutCode {
        ch: HanChar,
        component: HanChar,
    },
}

impl fmt::Display for LoadWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadWarning::DuplicateKey { file, line, ch } => {
                write!(
                    f,
                    "{file}:{line}: duplicate entry for {ch}, keeping the later one"
                )
            }
            LoadWarning::UnknownStructure { line, letter } => write!(
                f,
                "{DECOMP_FILE}:{line}: structure letter {letter} not in alphabet, using {}",
                Structure::UNKNOWN_LETTER
            ),
            LoadWarning::ComponentWithoutCode { ch, component } => {
                write!(f, "component {component} of {ch} has no four-corner code")
            }
        }
    }
}

/// Selects one of the four tables for [`CharTables::lookup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    Pinyin,
    FourCorner,
    Decomposition,
    Strokes,
}

impl Table {
    pub const ALL: [Table; 4] = [
        Table::Pinyin,
        Table::FourCorner,
        Table::Decomposition,
        Table::Strokes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table::Pinyin => "pinyin",
            Table::FourCorner => "fourcorner",
            Table::Decomposition => "decomp",
            Table::Strokes => "strokes",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup<'a> {
    Pinyin(&'a [PinyinSeq]),
    FourCorner(FourCornerCode),
    Decomposition(&'a Decomposition),
    Strokes(&'a StrokeSeq),
    Missing,
}

impl Lookup<'_> {
    pub fn is_missing(&self) -> bool {
        matches!(self, Lookup::Missing)
    }
}

/// The four lookup tables. Immutable after construction.
#[derive(Debug, Clone, Default)]
pub struct CharTables {
    pinyin: HashMap<HanChar, Vec<PinyinSeq>>,
    fourcorner: HashMap<HanChar, FourCornerCode>,
    decomposition: HashMap<HanChar, Decomposition>,
    strokes: HashMap<HanChar, StrokeSeq>,
    structures: StructureAlphabet,
    stroke_alphabet: Vec<char>,
    warnings: Vec<LoadWarning>,
}

const BUNDLED_PINYIN: &str = include_str!("../data/pinyin.tsv");
const BUNDLED_FOURCORNER: &str = include_str!("../data/fourcorner.tsv");
const BUNDLED_DECOMP: &str = include_str!("../data/decomp.tsv");
const BUNDLED_STROKES: &str = include_str!("../data/strokes.tsv");
const BUNDLED_CHARSET: &str = include_str!("../data/charset.txt");

/// Loads the four TSV tables from `dir`.
pub fn load_tables(dir: impl AsRef<Path>) -> Result<CharTables> {
    let dir = dir.as_ref();
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path),
            _ => Error::Io(e),
        })
    };
    CharTables::from_sources(
        &read(PINYIN_FILE)?,
        &read(FOURCORNER_FILE)?,
        &read(DECOMP_FILE)?,
        &read(STROKES_FILE)?,
    )
}

/// The characters the bundled tables were built for, in codepoint order.
pub fn bundled_charset() -> Vec<HanChar> {
    parse_charset(BUNDLED_CHARSET).expect("bundled charset is valid")
}

/// Parses a charset listing: one character per line, blank lines and `#`
/// comments skipped. Duplicates are dropped, first occurrence wins.
pub fn parse_charset(text: &str) -> Result<Vec<HanChar>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let c = single_han(line).ok_or_else(|| Error::Malformed {
            file: "charset".into(),
            line: idx + 1,
            reason: format!("expected one Han character, got {line:?}"),
        })?;
        if seen.insert(c) {
            out.push(c);
        }
    }
    Ok(out)
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn single_han(s: &str) -> Option<HanChar> {
    single_char(s).and_then(HanChar::new)
}

/// Yields `(line_number, key, fields)` for every data row of a TSV table.
fn rows<'a>(
    file: &'static str,
    text: &'a str,
) -> impl Iterator<Item = Result<(usize, HanChar, Vec<&'a str>)>> + 'a {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(move |(idx, line)| {
            let line_no = idx + 1;
            let mut fields: Vec<&str> = line.split('\t').collect();
            let key = fields.remove(0);
            let ch = single_han(key).ok_or_else(|| Error::Malformed {
                file: file.into(),
                line: line_no,
                reason: format!("key {key:?} is not a single Han character"),
            })?;
            Ok((line_no, ch, fields))
        })
}

fn header<'a>(text: &'a str, tag: &str) -> Option<&'a str> {
    text.lines()
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .find_map(|l| l.strip_prefix(tag))
        .map(str::trim)
}

fn malformed(file: &str, line: usize, reason: impl Into<String>) -> Error {
    Error::Malformed {
        file: file.into(),
        line,
        reason: reason.into(),
    }
}

impl CharTables {
    /// Tables compiled into the binary from `crates/core/data/`.
    pub fn bundled() -> CharTables {
        CharTables::from_sources(
            BUNDLED_PINYIN,
            BUNDLED_FOURCORNER,
            BUNDLED_DECOMP,
            BUNDLED_STROKES,
        )
        .expect("bundled tables are valid")
    }

    /// Builds tables from the text of the four TSV files.
    pub fn from_sources(
        pinyin: &str,
        fourcorner: &str,
        decomp: &str,
        strokes: &str,
    ) -> Result<Self> {
        let mut t = CharTables::default();

        for row in rows(PINYIN_FILE, pinyin) {
            let (line, ch, fields) = row?;
            let [readings] = fields[..] else {
                return Err(malformed(PINYIN_FILE, line, "expected 2 columns"));
            };
            let mut seqs: Vec<PinyinSeq> = Vec::new();
            for raw in readings.split(',').map(str::trim) {
                let seq = PinyinSeq::parse(raw).map_err(|r| malformed(PINYIN_FILE, line, r))?;
                if !seqs.contains(&seq) {
                    seqs.push(seq);
                }
            }
            if t.pinyin.insert(ch, seqs).is_some() {
                t.warn_duplicate(PINYIN_FILE, line, ch);
            }
        }

        for row in rows(FOURCORNER_FILE, fourcorner) {
            let (line, ch, fields) = row?;
            let [code] = fields[..] else {
                return Err(malformed(FOURCORNER_FILE, line, "expected 2 columns"));
            };
            let code = FourCornerCode::parse(code.trim()).ok_or_else(|| {
                malformed(
                    FOURCORNER_FILE,
                    line,
                    format!("four-corner code {code:?} is not 4 digits"),
                )
            })?;
            if t.fourcorner.insert(ch, code).is_some() {
                t.warn_duplicate(FOURCORNER_FILE, line, ch);
            }
        }

        if let Some(spec) = header(decomp, "#alphabet:") {
            t.structures =
                StructureAlphabet::parse(spec).map_err(|r| malformed(DECOMP_FILE, 1, r))?;
        }
        for row in rows(DECOMP_FILE, decomp) {
            let (line, ch, fields) = row?;
            let (letter, comps) = match fields[..] {
                [letter] => (letter, ""),
                [letter, comps] => (letter, comps),
                _ => return Err(malformed(DECOMP_FILE, line, "expected 2 or 3 columns")),
            };
            let letter = single_char(letter.trim())
                .filter(char::is_ascii_uppercase)
                .ok_or_else(|| {
                    malformed(
                        DECOMP_FILE,
                        line,
                        format!("bad structure letter {letter:?}"),
                    )
                })?;
            let structure = match t.structures.resolve(letter) {
                Some(s) => s,
                None => {
                    t.warnings
                        .push(LoadWarning::UnknownStructure { line, letter });
                    Structure::Other(Structure::UNKNOWN_LETTER)
                }
            };
            let components = comps
                .chars()
                .map(|c| {
                    HanChar::new(c).ok_or_else(|| {
                        malformed(
                            DECOMP_FILE,
                            line,
                            format!("component {c:?} is not a Han character"),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let d = Decomposition::new(structure, components).ok_or_else(|| {
                malformed(
                    DECOMP_FILE,
                    line,
                    "atomic entries take no components, compound entries need at least two",
                )
            })?;
            if t.decomposition.insert(ch, d).is_some() {
                t.warn_duplicate(DECOMP_FILE, line, ch);
            }
        }

        t.stroke_alphabet = header(strokes, "#strokes:")
            .map(|s| s.chars().filter(|c| !c.is_whitespace()).collect())
            .unwrap_or_default();
        for row in rows(STROKES_FILE, strokes) {
            let (line, ch, fields) = row?;
            let [seq] = fields[..] else {
                return Err(malformed(STROKES_FILE, line, "expected 2 columns"));
            };
            if t.stroke_alphabet.is_empty() {
                return Err(malformed(
                    STROKES_FILE,
                    line,
                    "rows present but no #strokes: header",
                ));
            }
            let seq: Vec<char> = seq.trim().chars().collect();
            if seq.is_empty() {
                return Err(malformed(STROKES_FILE, line, "empty stroke sequence"));
            }
            if let Some(bad) = seq.iter().find(|s| !t.stroke_alphabet.contains(s)) {
                return Err(malformed(
                    STROKES_FILE,
                    line,
                    format!("stroke {bad:?} not in alphabet"),
                ));
            }
            if t.strokes.insert(ch, StrokeSeq(seq)).is_some() {
                t.warn_duplicate(STROKES_FILE, line, ch);
            }
        }

        let mut dangling: Vec<LoadWarning> = t
            .decomposition
            .iter()
            .flat_map(|(ch, d)| {
                d.components()
                    .iter()
                    .filter(|c| !t.fourcorner.contains_key(c))
                    .map(|c| LoadWarning::ComponentWithoutCode {
                        ch: *ch,
                        component: *c,
                    })
            })
            .collect();
        dangling.sort_by_key(|w| match w {
            LoadWarning::ComponentWithoutCode { ch, component } => (*ch, *component),
            _ => unreachable!(),
        });
        t.warnings.extend(dangling);
        Ok(t)
    }

    fn warn_duplicate(&mut self, file: &'static str, line: usize, ch: HanChar) {
        self.warnings.push(LoadWarning::DuplicateKey {
            file,
            line,
            ch: ch.as_char(),
        });
    }

    pub fn warnings(&self) -> &[LoadWarning] {
        &self.warnings
    }

    pub fn lookup(&self, c: char, which: Table) -> Lookup<'_> {
        let Some(h) = HanChar::new(c) else {
            return Lookup::Missing;
        };
        let found = match which {
            Table::Pinyin => self.pinyin.get(&h).map(|v| Lookup::Pinyin(v)),
            Table::FourCorner => self.fourcorner.get(&h).map(|c| Lookup::FourCorner(*c)),
            Table::Decomposition => self.decomposition.get(&h).map(Lookup::Decomposition),
            Table::Strokes => self.strokes.get(&h).map(Lookup::Strokes),
        };
        found.unwrap_or(Lookup::Missing)
    }

    pub fn pinyin(&self, c: char) -> Option<&[PinyinSeq]> {
        HanChar::new(c)
            .and_then(|h| self.pinyin.get(&h))
            .map(Vec::as_slice)
    }

    pub fn fourcorner(&self, c: char) -> Option<FourCornerCode> {
        HanChar::new(c)
            .and_then(|h| self.fourcorner.get(&h))
            .copied()
    }

    pub fn decomposition(&self, c: char) -> Option<&Decomposition> {
        HanChar::new(c).and_then(|h| self.decomposition.get(&h))
    }

    pub fn strokes(&self, c: char) -> Option<&StrokeSeq> {
        HanChar::new(c).and_then(|h| self.strokes.get(&h))
    }

    /// Every character that appears as a key in at least one table.
    pub fn characters(&self) -> Vec<HanChar> {
        let mut all: Vec<HanChar> = self
            .pinyin
            .keys()
            .chain(self.fourcorner.keys())
            .chain(self.decomposition.keys())
            .chain(self.strokes.keys())
            .copied()
            .collect();
        all.sort();
        all.dedup();
        all
    }

    /// Tables a character has no entry in.
    pub fn missing_tables(&self, c: char) -> Vec<Table> {
        Table::ALL
            .into_iter()
            .filter(|t| self.lookup(c, *t).is_missing())
            .collect()
    }

    pub fn stroke_alphabet(&self) -> &[char] {
        &self.stroke_alphabet
    }

    pub fn structure_alphabet(&self) -> &StructureAlphabet {
        &self.structures
    }

    /// Canonical dump of all four tables, keys in codepoint order.
    pub fn serialize(&self) -> String {
        fn sorted<V>(m: &HashMap<HanChar, V>) -> Vec<(&HanChar, &V)> {
            let mut v: Vec<_> = m.iter().collect();
            v.sort_by_key(|(k, _)| **k);
            v
        }
        let mut out = String::new();
        out.push_str("## pinyin\n");
        for (c, seqs) in sorted(&self.pinyin) {
            let joined: Vec<&str> = seqs.iter().map(PinyinSeq::as_str).collect();
            let _ = writeln!(out, "{c}\t{}", joined.join(","));
        }
        out.push_str("## fourcorner\n");
        for (c, code) in sorted(&self.fourcorner) {
            let _ = writeln!(out, "{c}\t{code}");
        }
        let _ = writeln!(out, "## decomp\n{}", self.structures.header());
        for (c, d) in sorted(&self.decomposition) {
            let comps: String = d.components().iter().map(|h| h.as_char()).collect();
            let _ = writeln!(
                out,
                "{c}\t{}\t{comps}\t{}",
                d.structure().letter(),
                d.structure().name()
            );
        }
        let alphabet: String = self.stroke_alphabet.iter().collect();
        let _ = writeln!(out, "## strokes\n#strokes: {alphabet}");
        for (c, s) in sorted(&self.strokes) {
            let _ = writeln!(out, "{c}\t{s}");
        }
        out
    }
}
