//! Decoding intervention: rescoring a model's per-position candidates with
//! character similarity to the source character.
//!
//! For a source character `x` and candidate `y` with model probability `p`,
//!
//! ```text
//! score(y) = p - copy_penalty * [y == x] + alpha * sim(x, y)
//! ```
//!
//! and the highest score wins. Ties go to the higher model probability, then
//! to the lower codepoint.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{SimilarityHint, SimilarityParams, SimilarityProvider};
use crate::phonetic::Similarity;

const PROB_SLACK: f64 = 1e-6;

/// Candidate characters and their model probabilities at one position.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDistribution {
    position: usize,
    source: char,
    candidates: Vec<(char, f64)>,
}

impl CandidateDistribution {
    /// Validates the candidate list: nonempty, probabilities in `[0, 1]`
    /// summing to at most 1, no duplicates, and the source present.
    pub fn new(
        position: usize,
        source: char,
        candidates: Vec<(char, f64)>,
    ) -> std::result::Result<Self, String> {
        if candidates.is_empty() {
            return Err(format!("position {position}: no candidates"));
        }
        let mut seen = HashSet::with_capacity(candidates.len());
        let mut total = 0.0;
        for &(c, p) in &candidates {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!(
                    "position {position}: probability {p} of {c} outside [0, 1]"
                ));
            }
            if !seen.insert(c) {
                return Err(format!("position {position}: duplicate candidate {c}"));
            }
            total += p;
        }
        if total > 1.0 + PROB_SLACK {
            return Err(format!("position {position}: probabilities sum to {total}"));
        }
        if !seen.contains(&source) {
            return Err(format!(
                "position {position}: source character {source} missing from candidates"
            ));
        }
        Ok(CandidateDistribution {
            position,
            source,
            candidates,
        })
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn source(&self) -> char {
        self.source
    }

    pub fn candidates(&self) -> &[(char, f64)] {
        &self.candidates
    }

    /// The model's own choice: highest probability, lowest codepoint on ties.
    pub fn model_argmax(&self) -> char {
        self.candidates
            .iter()
            .copied()
            .reduce(|best, cur| {
                if cur.1 > best.1 || (cur.1 == best.1 && cur.0 < best.0) {
                    cur
                } else {
                    best
                }
            })
            .map(|(c, _)| c)
            .expect("candidate lists are nonempty")
    }
}

/// One sentence with a distribution for every character.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceDistributions {
    id: String,
    text: String,
    positions: Vec<CandidateDistribution>,
}

impl SentenceDistributions {
    /// `positions` must cover `0..len(text)` once each, in any order, with
    /// each source matching the character at that index.
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        mut positions: Vec<CandidateDistribution>,
    ) -> std::result::Result<Self, String> {
        let text = text.into();
        let chars: Vec<char> = text.chars().collect();
        positions.sort_by_key(|p| p.position);
        for (expected, p) in positions.iter().enumerate() {
            if p.position != expected {
                return Err(if p.position < expected {
                    format!("position {} listed twice", p.position)
                } else {
                    format!("position {expected} missing")
                });
            }
            if expected >= chars.len() {
                return Err(format!(
                    "position {expected} beyond text length {}",
                    chars.len()
                ));
            }
            if chars[expected] != p.source {
                return Err(format!(
                    "position {expected}: source {} does not match text character {}",
                    p.source, chars[expected]
                ));
            }
        }
        if positions.len() != chars.len() {
            return Err(format!("position {} missing", positions.len()));
        }
        Ok(SentenceDistributions {
            id: id.into(),
            text,
            positions,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn positions(&self) -> &[CandidateDistribution] {
        &self.positions
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredCandidate {
    pub character: char,
    pub model_prob: f64,
    /// `None` when alpha is 0 and the similarity was never consulted.
    pub similarity: Option<Similarity>,
    pub score: f64,
}

/// Outcome at one position.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub position: usize,
    pub source: char,
    pub chosen: char,
    /// In the same order as the input candidates.
    pub scored: Vec<ScoredCandidate>,
}

fn better(a: &ScoredCandidate, b: &ScoredCandidate) -> bool {
    a.score > b.score
        || (a.score == b.score
            && (a.model_prob > b.model_prob
                || (a.model_prob == b.model_prob && a.character < b.character)))
}

/// Scores every candidate at one position and picks the best.
///
/// With `alpha == 0` the similarity provider is not called.
pub fn intervene<S: SimilarityProvider + ?Sized>(
    dist: &CandidateDistribution,
    params: &SimilarityParams,
    sim: &S,
) -> Decision {
    let consult = params.alpha != 0.0;
    let scored: Vec<ScoredCandidate> = dist
        .candidates
        .iter()
        .map(|&(c, p)| {
            let penalty = if c == dist.source {
                params.copy_penalty
            } else {
                0.0
            };
            let similarity = consult.then(|| Similarity::new(sim.similarity(dist.source, c)));
            let bonus = similarity.map_or(0.0, |s| params.alpha * s.value());
            ScoredCandidate {
                character: c,
                model_prob: p,
                similarity,
                score: p - penalty + bonus,
            }
        })
        .collect();
    let best = scored
        .iter()
        .reduce(|best, cur| if better(cur, best) { cur } else { best })
        .expect("candidate lists are nonempty");
    Decision {
        position: dist.position,
        source: dist.source,
        chosen: best.character,
        scored,
    }
}

/// The character [`intervene`] would pick, without scoring every candidate.
///
/// Candidates whose [`SimilarityHint`] bound cannot reach the best score
/// seen so far never get an exact similarity.
pub fn choose<S: SimilarityProvider + ?Sized>(
    dist: &CandidateDistribution,
    params: &SimilarityParams,
    sim: &S,
) -> char {
    let alpha = params.alpha;
    let base = |c: char, p: f64| {
        p - if c == dist.source {
            params.copy_penalty
        } else {
            0.0
        }
    };
    let mut best: Option<ScoredCandidate> = None;
    let offer = |best: &mut Option<ScoredCandidate>, cand: ScoredCandidate| {
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            *best = Some(cand);
        }
    };
    let candidate = |c, p, s: Option<f64>| ScoredCandidate {
        character: c,
        model_prob: p,
        similarity: s.map(Similarity::new),
        score: base(c, p) + s.map_or(0.0, |s| alpha * Similarity::new(s).value()),
    };
    let mut deferred = Vec::new();
    if alpha == 0.0 {
        for &(c, p) in &dist.candidates {
            offer(&mut best, candidate(c, p, None));
        }
        return best.expect("candidate lists are nonempty").character;
    }
    let mut hints = Vec::with_capacity(dist.candidates.len());
    sim.hints(dist.source, &dist.candidates, &mut hints);
    for (&(c, p), hint) in dist.candidates.iter().zip(hints) {
        match hint {
            SimilarityHint::Exact(s) => offer(&mut best, candidate(c, p, Some(s))),
            SimilarityHint::Below(bound) => deferred.push((c, p, base(c, p) + alpha * bound)),
        }
    }
    for (c, p, ceiling) in deferred {
        let reachable = best.as_ref().is_none_or(|b| ceiling >= b.score);
        if reachable {
            offer(
                &mut best,
                candidate(c, p, Some(sim.similarity(dist.source, c))),
            );
        }
    }
    best.expect("candidate lists are nonempty").character
}

/// A corrected sentence with per-position decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub id: String,
    pub source: String,
    pub hypothesis: String,
    pub decisions: Vec<Decision>,
}

/// Applies [`intervene`] at every position. The output has exactly as many
/// characters as the input.
pub fn correct_sentence<S: SimilarityProvider + ?Sized>(
    sd: &SentenceDistributions,
    params: &SimilarityParams,
    sim: &S,
) -> Correction {
    let decisions: Vec<Decision> = sd
        .positions
        .iter()
        .map(|d| intervene(d, params, sim))
        .collect();
    Correction {
        id: sd.id.clone(),
        source: sd.text.clone(),
        hypothesis: decisions.iter().map(|d| d.chosen).collect(),
        decisions,
    }
}

#[derive(Debug, Deserialize)]
struct RawSentence {
    id: String,
    text: String,
    positions: Vec<RawPosition>,
}

#[derive(Debug, Deserialize)]
struct RawPosition {
    i: usize,
    cands: Vec<(String, f64)>,
}

fn convert(raw: RawSentence, line: usize) -> Result<SentenceDistributions> {
    let err = |reason: String| Error::Ingest {
        line,
        id: raw.id.clone(),
        reason,
    };
    let chars: Vec<char> = raw.text.chars().collect();
    let mut positions = Vec::with_capacity(raw.positions.len());
    for p in &raw.positions {
        let source = *chars.get(p.i).ok_or_else(|| {
            err(format!(
                "position {} beyond text length {}",
                p.i,
                chars.len()
            ))
        })?;
        let mut cands = Vec::with_capacity(p.cands.len());
        for (s, prob) in &p.cands {
            let mut it = s.chars();
            let c = match (it.next(), it.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(err(format!(
                        "position {}: candidate {s:?} is not one character",
                        p.i
                    )))
                }
            };
            cands.push((c, *prob));
        }
        positions.push(CandidateDistribution::new(p.i, source, cands).map_err(&err)?);
    }
    SentenceDistributions::new(raw.id.clone(), raw.text.clone(), positions).map_err(err)
}

/// Parses one interchange line. `line` is only used in error messages.
pub fn parse_distribution_line(text: &str, line: usize) -> Result<SentenceDistributions> {
    let raw: RawSentence =
        serde_json::from_str(text).map_err(|source| Error::Json { line, source })?;
    convert(raw, line)
}

/// Streams sentences from interchange JSONL, one per nonblank line, in input
/// order.
pub fn ingest_distributions<R: BufRead>(
    input: R,
) -> impl Iterator<Item = Result<SentenceDistributions>> {
    input
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| match line {
            Ok(l) if l.trim().is_empty() => None,
            Ok(l) => Some(parse_distribution_line(&l, idx + 1)),
            Err(e) => Some(Err(Error::Io(e))),
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCandidate {
    #[serde(rename = "char")]
    pub character: String,
    pub p: f64,
    pub sim: Option<f64>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePosition {
    pub i: usize,
    pub chosen: String,
    pub cands: Vec<TraceCandidate>,
}

/// One line of correction output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionRecord {
    pub id: String,
    pub src: String,
    pub hyp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePosition>>,
}

impl CorrectionRecord {
    pub fn from_correction(c: &Correction, trace: bool) -> Self {
        let trace = trace.then(|| {
            c.decisions
                .iter()
                .map(|d| TracePosition {
                    i: d.position,
                    chosen: d.chosen.to_string(),
                    cands: d
                        .scored
                        .iter()
                        .map(|s| TraceCandidate {
                            character: s.character.to_string(),
                            p: s.model_prob,
                            sim: s.similarity.map(Similarity::value),
                            score: s.score,
                        })
                        .collect(),
                })
                .collect()
        });
        CorrectionRecord {
            id: c.id.clone(),
            src: c.source.clone(),
            hyp: c.hypothesis.clone(),
            trace,
        }
    }
}

/// Totals from [`correct_stream`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StreamStats {
    pub sentences: usize,
    pub changed: usize,
    pub substitutions: usize,
}

/// Reads interchange JSONL, corrects each sentence and writes one output
/// record per line in input order. Stops at the first invalid line.
pub fn correct_stream<R, W, S>(
    input: R,
    mut output: W,
    params: &SimilarityParams,
    sim: &S,
    trace: bool,
) -> Result<StreamStats>
where
    R: BufRead,
    W: Write,
    S: SimilarityProvider + ?Sized,
{
    params.validate()?;
    let mut stats = StreamStats::default();
    for sd in ingest_distributions(input) {
        let sd = sd?;
        let record = if trace {
            CorrectionRecord::from_correction(&correct_sentence(&sd, params, sim), true)
        } else {
            CorrectionRecord {
                hyp: sd
                    .positions
                    .iter()
                    .map(|d| choose(d, params, sim))
                    .collect(),
                id: sd.id,
                src: sd.text,
                trace: None,
            }
        };
        let subs = record
            .src
            .chars()
            .zip(record.hyp.chars())
            .filter(|(a, b)| a != b)
            .count();
        stats.sentences += 1;
        stats.substitutions += subs;
        stats.changed += usize::from(subs > 0);
        serde_json::to_writer(&mut output, &record).map_err(std::io::Error::from)?;
        output.write_all(b"\n")?;
    }
    output.flush()?;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stub(source: char, cand: char) -> f64 {
        if source == cand {
            return 1.0;
        }
        match (source, cand) {
            ('读', '度') => 0.8,
            ('读', '少') => 0.05,
            _ => 0.0,
        }
    }

    fn params(alpha: f64, copy_penalty: f64) -> SimilarityParams {
        SimilarityParams {
            alpha,
            copy_penalty,
            ..Default::default()
        }
    }

    fn dist(cands: &[(char, f64)]) -> CandidateDistribution {
        CandidateDistribution::new(0, '读', cands.to_vec()).unwrap()
    }

    fn score_of(d: &Decision, c: char) -> f64 {
        d.scored.iter().find(|s| s.character == c).unwrap().score
    }

    #[test]
    fn alpha_zero_is_model_argmax() {
        let d = dist(&[('少', 0.40), ('度', 0.35), ('读', 0.05)]);
        let out = intervene(&d, &params(0.0, 0.0), &stub);
        assert_eq!(out.chosen, '少');
        assert_eq!(out.chosen, d.model_argmax());
        assert!(out.scored.iter().all(|s| s.similarity.is_none()));
    }

    #[test]
    fn similarity_flips_to_similar_candidate() {
        let d = dist(&[('少', 0.40), ('度', 0.35), ('读', 0.05)]);
        let out = intervene(&d, &params(1.1, 0.0), &stub);
        assert!((score_of(&out, '读') - 1.15).abs() < 1e-12);
        assert!((score_of(&out, '度') - 1.23).abs() < 1e-12);
        assert!((score_of(&out, '少') - 0.455).abs() < 1e-12);
        assert_eq!(out.chosen, '度');
    }

    #[test]
    fn copy_penalty_shifts_without_flipping() {
        let d = dist(&[('少', 0.40), ('度', 0.30), ('读', 0.20)]);
        let plain = intervene(&d, &params(1.1, 0.0), &stub);
        assert!((score_of(&plain, '读') - 1.30).abs() < 1e-12);
        assert!((score_of(&plain, '度') - 1.18).abs() < 1e-12);
        assert_eq!(plain.chosen, '读');
        let punished = intervene(&d, &params(1.1, 0.1), &stub);
        assert!((score_of(&punished, '读') - 1.20).abs() < 1e-12);
        assert_eq!(punished.chosen, '读');
        assert_eq!(score_of(&punished, '度'), score_of(&plain, '度'));
    }

    #[test]
    fn ties_prefer_probability_then_codepoint() {
        let zero = |_: char, _: char| 0.0;
        let d = CandidateDistribution::new(0, '乙', vec![('乙', 0.3), ('丙', 0.3), ('甲', 0.3)])
            .unwrap();
        assert_eq!(intervene(&d, &params(1.0, 0.0), &zero).chosen, '丙');
        // equal scores, different probabilities
        let s = |a: char, b: char| if a == b { 0.0 } else { 0.1 };
        let d = CandidateDistribution::new(0, '乙', vec![('乙', 0.5), ('甲', 0.4)]).unwrap();
        let out = intervene(&d, &params(1.0, 0.0), &s);
        assert_eq!(score_of(&out, '乙'), score_of(&out, '甲'));
        assert_eq!(out.chosen, '乙');
    }

    #[test]
    fn distribution_validation() {
        assert!(CandidateDistribution::new(0, 'a', vec![]).is_err());
        assert!(CandidateDistribution::new(0, 'a', vec![('b', 0.5)]).is_err());
        assert!(CandidateDistribution::new(0, 'a', vec![('a', 0.5), ('a', 0.1)]).is_err());
        assert!(CandidateDistribution::new(0, 'a', vec![('a', 1.2)]).is_err());
        assert!(CandidateDistribution::new(0, 'a', vec![('a', 0.6), ('b', 0.6)]).is_err());
        assert!(CandidateDistribution::new(0, 'a', vec![('a', 0.6), ('b', 0.4000001)]).is_ok());
    }

    #[test]
    fn sentence_validation() {
        let p = |i, c| CandidateDistribution::new(i, c, vec![(c, 1.0)]).unwrap();
        assert!(SentenceDistributions::new("s", "ab", vec![p(1, 'b'), p(0, 'a')]).is_ok());
        let e = SentenceDistributions::new("s", "ab", vec![p(0, 'a')]).unwrap_err();
        assert!(e.contains("position 1 missing"), "{e}");
        let e = SentenceDistributions::new("s", "abc", vec![p(0, 'a'), p(2, 'c')]).unwrap_err();
        assert!(e.contains("position 1 missing"), "{e}");
        let e = SentenceDistributions::new("s", "ab", vec![p(0, 'a'), p(0, 'a'), p(1, 'b')])
            .unwrap_err();
        assert!(e.contains("twice"), "{e}");
        assert!(SentenceDistributions::new("s", "ab", vec![p(0, 'a'), p(1, 'c')]).is_err());
    }

    #[test]
    fn ingest_one_line() {
        let line = r#"{"id": "s1", "text": "读书", "positions": [{"i": 1, "cands": [["书", 0.9]]}, {"i": 0, "cands": [["少", 0.4], ["度", 0.35], ["读", 0.05]]}]}"#;
        let all: Vec<_> = ingest_distributions(line.as_bytes()).collect();
        assert_eq!(all.len(), 1);
        let sd = all[0].as_ref().unwrap();
        assert_eq!(sd.id(), "s1");
        assert_eq!(sd.positions()[0].source(), '读');
        let c = correct_sentence(sd, &params(1.1, 0.0), &stub);
        assert_eq!(c.hypothesis, "度书");
    }

    #[test]
    fn ingest_errors() {
        let gap = "\n{\"id\": \"s9\", \"text\": \"ab\", \"positions\": [{\"i\": 0, \"cands\": [[\"a\", 1.0]]}]}";
        match ingest_distributions(gap.as_bytes())
            .next()
            .unwrap()
            .unwrap_err()
        {
            Error::Ingest { line, id, reason } => {
                assert_eq!(line, 2);
                assert_eq!(id, "s9");
                assert!(reason.contains("position 1 missing"));
            }
            e => panic!("unexpected {e}"),
        }
        let bad = "{\"id\": \"s1\", \"text\": ";
        assert!(matches!(
            ingest_distributions(bad.as_bytes()).next().unwrap(),
            Err(Error::Json { line: 1, .. })
        ));
        let no_source =
            r#"{"id": "s2", "text": "a", "positions": [{"i": 0, "cands": [["b", 1.0]]}]}"#;
        let e = ingest_distributions(no_source.as_bytes())
            .next()
            .unwrap()
            .unwrap_err();
        assert!(e.to_string().contains("position 0"), "{e}");
    }

    #[test]
    fn stream_writes_records() {
        let input = concat!(
            r#"{"id": "a", "text": "读", "positions": [{"i": 0, "cands": [["少", 0.4], ["度", 0.35], ["读", 0.05]]}]}"#,
            "\n",
            r#"{"id": "b", "text": "读", "positions": [{"i": 0, "cands": [["读", 0.9]]}]}"#,
            "\n"
        );
        let mut out = Vec::new();
        let stats =
            correct_stream(input.as_bytes(), &mut out, &params(1.1, 0.0), &stub, false).unwrap();
        assert_eq!(
            stats,
            StreamStats {
                sentences: 2,
                changed: 1,
                substitutions: 1
            }
        );
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "{\"id\":\"a\",\"src\":\"读\",\"hyp\":\"度\"}\n{\"id\":\"b\",\"src\":\"读\",\"hyp\":\"读\"}\n"
        );
    }

    #[test]
    fn trace_records_scores() {
        let sd = parse_distribution_line(
            r#"{"id": "a", "text": "读", "positions": [{"i": 0, "cands": [["少", 0.4], ["度", 0.35], ["读", 0.05]]}]}"#,
            1,
        )
        .unwrap();
        let c = correct_sentence(&sd, &params(1.1, 0.0), &stub);
        let r = CorrectionRecord::from_correction(&c, true);
        let t = &r.trace.unwrap()[0];
        assert_eq!(t.chosen, "度");
        assert_eq!(t.cands.len(), 3);
        assert_eq!(t.cands[1].sim, Some(0.8));
    }
}
