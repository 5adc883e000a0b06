//! Sentence-level evaluation for substitution-only spelling correction.
//!
//! Detection counts a sentence as a hit when the set of changed positions
//! equals the gold set of error positions (and is nonempty). Correction
//! counts a hit when the hypothesis equals the target of an erroneous
//! sentence. Precision is over sentences the system changed, recall over
//! sentences that contain errors. FPR is the share of error-free sentences
//! the system changed anyway.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intervention::CorrectionRecord;

/// Source and reference of one sentence. Both have the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl SentencePair {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Result<Self> {
        let (id, source, target) = (id.into(), source.into(), target.into());
        check_lengths(&id, &source, &target, "target")?;
        Ok(SentencePair { id, source, target })
    }

    pub fn edits(&self) -> Vec<EditPair> {
        diff(&self.source, &self.target)
    }
}

/// A position where two aligned sentences differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditPair {
    pub src: char,
    pub tgt: char,
    pub position: usize,
}

fn check_lengths(id: &str, a: &str, b: &str, what: &str) -> Result<()> {
    let (la, lb) = (a.chars().count(), b.chars().count());
    if la != lb {
        return Err(Error::Corpus {
            id: id.to_string(),
            reason: format!("source has {la} characters, {what} has {lb}"),
        });
    }
    Ok(())
}

fn diff(a: &str, b: &str) -> Vec<EditPair> {
    a.chars()
        .zip(b.chars())
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(position, (src, tgt))| EditPair { src, tgt, position })
        .collect()
}

/// Mismatching positions between `source` and `other`, ascending.
pub fn extract_edits(id: &str, source: &str, other: &str) -> Result<Vec<EditPair>> {
    check_lengths(id, source, other, "the other side")?;
    Ok(diff(source, other))
}

/// A source sentence, the system output and the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalItem {
    pub id: String,
    pub source: String,
    pub hypothesis: String,
    pub target: String,
}

impl EvalItem {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        hypothesis: impl Into<String>,
        target: impl Into<String>,
    ) -> Result<Self> {
        let item = EvalItem {
            id: id.into(),
            source: source.into(),
            hypothesis: hypothesis.into(),
            target: target.into(),
        };
        check_lengths(&item.id, &item.source, &item.target, "target")?;
        check_lengths(&item.id, &item.source, &item.hypothesis, "hypothesis")?;
        Ok(item)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    fn from_counts(hits: usize, predicted: usize, gold: usize) -> Self {
        let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        let precision = ratio(hits, predicted);
        let recall = ratio(hits, gold);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EvalCounts {
    pub sentences: usize,
    /// Sentences the system modified.
    pub changed: usize,
    /// Sentences whose target differs from the source.
    pub gold_errored: usize,
    /// Sentences whose target equals the source.
    pub clean: usize,
    pub det_hits: usize,
    pub cor_hits: usize,
    /// Clean sentences the system modified.
    pub false_positives: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    pub detection: Prf,
    pub correction: Prf,
    pub fpr: f64,
    pub counts: EvalCounts,
}

pub fn evaluate(items: &[EvalItem]) -> EvalReport {
    let mut n = EvalCounts::default();
    for item in items {
        let predicted: Vec<usize> = diff(&item.source, &item.hypothesis)
            .iter()
            .map(|e| e.position)
            .collect();
        let gold: Vec<usize> = diff(&item.source, &item.target)
            .iter()
            .map(|e| e.position)
            .collect();
        n.sentences += 1;
        if !predicted.is_empty() {
            n.changed += 1;
        }
        if gold.is_empty() {
            n.clean += 1;
            if !predicted.is_empty() {
                n.false_positives += 1;
            }
            continue;
        }
        n.gold_errored += 1;
        if predicted == gold {
            n.det_hits += 1;
        }
        if item.hypothesis == item.target {
            n.cor_hits += 1;
        }
    }
    EvalReport {
        detection: Prf::from_counts(n.det_hits, n.changed, n.gold_errored),
        correction: Prf::from_counts(n.cor_hits, n.changed, n.gold_errored),
        fpr: if n.clean == 0 {
            0.0
        } else {
            n.false_positives as f64 / n.clean as f64
        },
        counts: n,
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>8} {:>8} {:>8}", "level", "P", "R", "F1")?;
        for (name, m) in [
            ("detection", self.detection),
            ("correction", self.correction),
        ] {
            writeln!(
                f,
                "{:<10} {:>8.4} {:>8.4} {:>8.4}",
                name, m.precision, m.recall, m.f1
            )?;
        }
        writeln!(f, "{:<10} {:>8.4}", "FPR", self.fpr)?;
        let c = &self.counts;
        write!(
            f,
            "sentences={} changed={} errored={} clean={} det_hits={} cor_hits={} false_positives={}",
            c.sentences, c.changed, c.gold_errored, c.clean, c.det_hits, c.cor_hits, c.false_positives
        )
    }
}

/// How many test edit pairs also occur among the training edit pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeenPairStats {
    pub total: usize,
    pub seen: usize,
    pub proportion: f64,
}

impl fmt::Display for SeenPairStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edit pairs {:>8}\nseen       {:>8}\nproportion {:>8.4}",
            self.total, self.seen, self.proportion
        )
    }
}

/// Counts test edit tokens whose `(src, tgt)` appears in `train`.
pub fn seen_pair_stats<'a>(
    train: &HashSet<(char, char)>,
    test: impl IntoIterator<Item = &'a EditPair>,
) -> SeenPairStats {
    let (mut total, mut seen) = (0, 0);
    for e in test {
        total += 1;
        if train.contains(&(e.src, e.tgt)) {
            seen += 1;
        }
    }
    SeenPairStats {
        total,
        seen,
        proportion: if total == 0 {
            0.0
        } else {
            seen as f64 / total as f64
        },
    }
}

/// All edit tokens of a corpus, sentence by sentence.
pub fn corpus_edits(corpus: &[SentencePair]) -> Vec<EditPair> {
    corpus.iter().flat_map(SentencePair::edits).collect()
}

fn data_lines<R: BufRead>(input: R) -> impl Iterator<Item = Result<(usize, String)>> {
    input.lines().enumerate().filter_map(|(idx, l)| match l {
        Ok(l) if l.trim().is_empty() || l.starts_with('#') => None,
        Ok(l) => Some(Ok((idx + 1, l))),
        Err(e) => Some(Err(Error::Io(e))),
    })
}

/// Reads `<id>\t<source>\t<target>` rows.
pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<SentencePair>> {
    data_lines(input)
        .map(|row| {
            let (line, text) = row?;
            let fields: Vec<&str> = text.split('\t').collect();
            let [id, source, target] = fields[..] else {
                return Err(Error::Malformed {
                    file: "corpus".into(),
                    line,
                    reason: "expected <id>\\t<source>\\t<target>".into(),
                });
            };
            SentencePair::new(id, source, target)
        })
        .collect()
}

/// Reads system output, either correction JSONL records or `<id>\t<hyp>`
/// rows. The format is picked per line.
pub fn read_hypotheses<R: BufRead>(input: R) -> Result<Vec<(String, String)>> {
    data_lines(input)
        .map(|row| {
            let (line, text) = row?;
            if text.trim_start().starts_with('{') {
                let r: CorrectionRecord =
                    serde_json::from_str(&text).map_err(|source| Error::Json { line, source })?;
                return Ok((r.id, r.hyp));
            }
            match text.split_once('\t') {
                Some((id, hyp)) if !hyp.contains('\t') => Ok((id.to_string(), hyp.to_string())),
                _ => Err(Error::Malformed {
                    file: "hypotheses".into(),
                    line,
                    reason: "expected <id>\\t<hypothesis> or a JSON record".into(),
                }),
            }
        })
        .collect()
}

/// Pairs each corpus sentence with its hypothesis by id, in corpus order.
pub fn align(corpus: &[SentencePair], hypotheses: &[(String, String)]) -> Result<Vec<EvalItem>> {
    let mut by_id: HashMap<&str, &str> = HashMap::with_capacity(hypotheses.len());
    for (id, hyp) in hypotheses {
        if by_id.insert(id, hyp).is_some() {
            return Err(Error::Corpus {
                id: id.clone(),
                reason: "hypothesis listed twice".into(),
            });
        }
    }
    let known: HashSet<&str> = corpus.iter().map(|p| p.id.as_str()).collect();
    if let Some((id, _)) = hypotheses
        .iter()
        .find(|(id, _)| !known.contains(id.as_str()))
    {
        return Err(Error::Corpus {
            id: id.clone(),
            reason: "hypothesis id not in corpus".into(),
        });
    }
    corpus
        .iter()
        .map(|p| {
            let hyp = by_id.get(p.id.as_str()).ok_or_else(|| Error::Corpus {
                id: p.id.clone(),
                reason: "no hypothesis for this id".into(),
            })?;
            EvalItem::new(p.id.clone(), p.source.clone(), *hyp, p.target.clone())
        })
        .collect()
}
