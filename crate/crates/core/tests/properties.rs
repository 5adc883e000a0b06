use std::collections::HashMap;

use disc::chardata::{bundled_charset, CharTables, HanChar, PinyinSeq};
use disc::evalkit::{evaluate, EvalItem};
use disc::fusion::{breakdown, build_matrix, sim, SimilarityParams};
use disc::glyph::glyph_sim;
use disc::intervention::{
    correct_sentence, intervene, CandidateDistribution, SentenceDistributions,
};
use disc::phonetic::{phonetic_sim, pinyin_distance_sim};
use proptest::prelude::*;
use std::sync::OnceLock;

fn tables() -> &'static CharTables {
    static T: OnceLock<CharTables> = OnceLock::new();
    T.get_or_init(CharTables::bundled)
}

fn charset() -> &'static [HanChar] {
    static C: OnceLock<Vec<HanChar>> = OnceLock::new();
    C.get_or_init(bundled_charset)
}

fn any_char() -> impl Strategy<Value = char> {
    (0..charset().len()).prop_map(|i| charset()[i].as_char())
}

fn char_pair() -> impl Strategy<Value = (char, char)> {
    (any_char(), any_char())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn fused_is_symmetric_and_bounded((a, b) in char_pair(), beta in 0.0f64..=1.0) {
        let t = tables();
        let ab = sim(t, a, b, beta).unwrap().value();
        let ba = sim(t, b, a, beta).unwrap().value();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn identity_scores_one(a in any_char(), beta in 0.0f64..=1.0) {
        let t = tables();
        prop_assert_eq!(sim(t, a, a, beta).unwrap().value(), 1.0);
        prop_assert_eq!(phonetic_sim(t, a, a).value(), 1.0);
        prop_assert_eq!(glyph_sim(t, a, a).value(), 1.0);
    }

    #[test]
    fn fused_is_affine_in_beta((a, b) in char_pair(), beta in 0.0f64..=1.0) {
        prop_assume!(a != b);
        let t = tables();
        let p = phonetic_sim(t, a, b).value();
        let g = glyph_sim(t, a, b).value();
        let s = sim(t, a, b, beta).unwrap().value();
        prop_assert!((s - (beta * p + (1.0 - beta) * g)).abs() < 1e-9);
        prop_assert!((sim(t, a, b, 1.0).unwrap().value() - p).abs() < 1e-12);
        prop_assert!((sim(t, a, b, 0.0).unwrap().value() - g).abs() < 1e-12);
        let br = breakdown(t, a, b, beta).unwrap();
        prop_assert_eq!(br.fused.value(), s);
    }

    #[test]
    fn polyphone_dominance((a, b) in char_pair()) {
        let t = tables();
        let best = phonetic_sim(t, a, b).value();
        if let (Some(ra), Some(rb)) = (t.pinyin(a), t.pinyin(b)) {
            for x in ra {
                for y in rb {
                    prop_assert!(best >= pinyin_distance_sim(x, y).unwrap().value());
                }
            }
        }
    }

    #[test]
    fn glyph_components_bounded((a, b) in char_pair()) {
        let br = disc::glyph::glyph_breakdown(tables(), a, b);
        for c in br.components() {
            prop_assert!((0.0..=1.0).contains(&c.value()));
        }
        prop_assert_eq!(br.mean(), glyph_sim(tables(), a, b));
    }

    #[test]
    fn pinyin_sim_symmetric(a in "[a-z]{1,6}", b in "[a-z]{1,6}") {
        let (pa, pb) = (PinyinSeq::parse(&a).unwrap(), PinyinSeq::parse(&b).unwrap());
        let ab = pinyin_distance_sim(&pa, &pb).unwrap().value();
        prop_assert_eq!(ab, pinyin_distance_sim(&pb, &pa).unwrap().value());
        prop_assert!((0.0..=1.0).contains(&ab));
    }
}

/// A position with probabilities on a 1/512 grid, similarities on a 1/64 grid
/// and alpha on a 1/8 grid, so every score is exact in binary.
#[derive(Debug, Clone)]
struct Position {
    source: char,
    cands: Vec<(char, f64)>,
    sims: HashMap<char, f64>,
}

fn position() -> impl Strategy<Value = Position> {
    prop::collection::btree_map(0u32..40, (0u32..=64, 0u32..=64), 1..8)
        .prop_flat_map(|m| {
            let n = m.len();
            (Just(m), 0..n)
        })
        .prop_map(|(m, src_idx)| {
            let cands: Vec<(char, f64)> = m
                .iter()
                .map(|(&k, &(w, _))| (char::from_u32(0x4e00 + k).unwrap(), f64::from(w) / 512.0))
                .collect();
            let source = cands[src_idx].0;
            let sims = m
                .iter()
                .map(|(&k, &(_, s))| {
                    let c = char::from_u32(0x4e00 + k).unwrap();
                    (
                        c,
                        if c == source {
                            1.0
                        } else {
                            f64::from(s) / 64.0
                        },
                    )
                })
                .collect();
            Position {
                source,
                cands,
                sims,
            }
        })
}

fn params(alpha: f64, copy_penalty: f64) -> SimilarityParams {
    SimilarityParams {
        alpha,
        copy_penalty,
        ..SimilarityParams::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn alpha_zero_is_model_argmax(pos in position()) {
        let d = CandidateDistribution::new(0, pos.source, pos.cands.clone()).unwrap();
        let never = |_: char, _: char| -> f64 { panic!("similarity consulted at alpha 0") };
        let dec = intervene(&d, &params(0.0, 0.0), &never);
        prop_assert_eq!(dec.chosen, d.model_argmax());
        prop_assert!(dec.scored.iter().all(|s| s.similarity.is_none()));
    }

    #[test]
    fn copy_penalty_only_moves_source(pos in position(), pen in 0u32..16) {
        let d = CandidateDistribution::new(0, pos.source, pos.cands.clone()).unwrap();
        let s = |_: char, c: char| pos.sims[&c];
        let plain = intervene(&d, &params(1.125, 0.0), &s);
        let pen = f64::from(pen) / 64.0;
        let punished = intervene(&d, &params(1.125, pen), &s);
        for (a, b) in plain.scored.iter().zip(&punished.scored) {
            if a.character == pos.source {
                prop_assert_eq!(b.score, a.score - pen);
            } else {
                prop_assert_eq!(b.score, a.score);
            }
        }
        if plain.chosen != pos.source {
            prop_assert_eq!(punished.chosen, plain.chosen);
        }
    }

    #[test]
    fn larger_alpha_never_picks_less_similar(pos in position(), a1 in 0u32..24, step in 1u32..24) {
        let d = CandidateDistribution::new(0, pos.source, pos.cands.clone()).unwrap();
        let s = |_: char, c: char| pos.sims[&c];
        let lo = intervene(&d, &params(f64::from(a1) / 8.0, 0.0), &s);
        let hi = intervene(&d, &params(f64::from(a1 + step) / 8.0, 0.0), &s);
        prop_assert!(pos.sims[&hi.chosen] >= pos.sims[&lo.chosen]);
    }

    #[test]
    fn candidate_order_does_not_matter(pos in position(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut shuffled = pos.cands.clone();
        shuffled.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        let s = |_: char, c: char| pos.sims[&c];
        let p = params(1.125, 0.0);
        let a = intervene(&CandidateDistribution::new(0, pos.source, pos.cands.clone()).unwrap(), &p, &s);
        let b = intervene(&CandidateDistribution::new(0, pos.source, shuffled).unwrap(), &p, &s);
        prop_assert_eq!(a.chosen, b.chosen);
    }

    #[test]
    fn decision_is_a_brute_force_argmax(pos in position(), alpha in 0u32..24, pen in 0u32..16) {
        let (alpha, pen) = (f64::from(alpha) / 8.0, f64::from(pen) / 64.0);
        let d = CandidateDistribution::new(0, pos.source, pos.cands.clone()).unwrap();
        let dec = intervene(&d, &params(alpha, pen), &|_: char, c: char| pos.sims[&c]);
        let key = |&(c, p): &(char, f64)| {
            let score = p - if c == pos.source { pen } else { 0.0 } + alpha * pos.sims[&c];
            (score, p, std::cmp::Reverse(c))
        };
        let best = pos.cands.iter().max_by(|x, y| key(x).partial_cmp(&key(y)).unwrap()).unwrap();
        prop_assert_eq!(dec.chosen, best.0);
    }

    #[test]
    fn correction_preserves_length(positions in prop::collection::vec(position(), 1..12)) {
        let text: String = positions.iter().map(|p| p.source).collect();
        let dists = positions
            .iter()
            .enumerate()
            .map(|(i, p)| CandidateDistribution::new(i, p.source, p.cands.clone()).unwrap())
            .collect();
        let sd = SentenceDistributions::new("s", text.clone(), dists).unwrap();
        let out = correct_sentence(&sd, &SimilarityParams::default(), &|a: char, b: char| {
            if a == b { 1.0 } else { 0.3 }
        });
        prop_assert_eq!(out.hypothesis.chars().count(), text.chars().count());
        prop_assert_eq!(out.decisions.len(), text.chars().count());
    }
}

fn eval_item() -> impl Strategy<Value = (String, String, String)> {
    prop::collection::vec((0u8..3, 0u8..3, 0u8..3), 1..8).prop_map(|v| {
        let ch = |x: u8| ['甲', '乙', '丙'][x as usize];
        let src = v.iter().map(|t| ch(t.0)).collect();
        let hyp = v.iter().map(|t| ch(t.1)).collect();
        let tgt = v.iter().map(|t| ch(t.2)).collect();
        (src, hyp, tgt)
    })
}

proptest! {
    #[test]
    fn metric_invariants(raw in prop::collection::vec(eval_item(), 1..30), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut items: Vec<EvalItem> = raw
            .iter()
            .enumerate()
            .map(|(i, (s, h, t))| EvalItem::new(i.to_string(), s.clone(), h.clone(), t.clone()).unwrap())
            .collect();
        let r = evaluate(&items);
        prop_assert!(r.counts.cor_hits <= r.counts.det_hits);
        for m in [r.detection, r.correction] {
            for v in [m.precision, m.recall, m.f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
        prop_assert!((0.0..=1.0).contains(&r.fpr));
        prop_assert_eq!(r.counts.clean + r.counts.gold_errored, r.counts.sentences);
        items.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
        prop_assert_eq!(evaluate(&items), r);
    }
}

#[test]
fn matrix_agrees_with_direct_scores() {
    let t = tables();
    let cs: Vec<HanChar> = charset().iter().step_by(20).copied().collect();
    let m = build_matrix(t, &cs, 0.7, 0.0).unwrap();
    let mut checked = 0;
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i + 1..] {
            let direct = sim(t, a.as_char(), b.as_char(), 0.7).unwrap().value();
            let stored = m.get(a.as_char(), b.as_char()).unwrap().value();
            assert!(
                (direct - stored).abs() <= 1e-12,
                "{a}{b}: {direct} vs {stored}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 1000, "checked {checked}");
}

#[test]
fn tables_load_deterministically() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let a = disc::load_tables(dir).unwrap().serialize();
    let b = disc::load_tables(dir).unwrap().serialize();
    assert_eq!(a, b);
    assert_eq!(a, CharTables::bundled().serialize());
}

#[test]
fn missing_manifest_matches_tables() {
    let t = tables();
    let text = include_str!("../data/missing.txt");
    let listed: HashMap<char, String> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let (c, rest) = l.split_once('\t').unwrap();
            (c.chars().next().unwrap(), rest.to_string())
        })
        .collect();
    let mut actual = HashMap::new();
    for c in t.characters().iter().chain(charset()) {
        let missing = t.missing_tables(c.as_char());
        if !missing.is_empty() {
            let names: Vec<&str> = missing.iter().map(|m| m.name()).collect();
            actual.insert(c.as_char(), names.join(","));
        }
    }
    assert_eq!(actual, listed);
}

fn small_matrix() -> &'static disc::fusion::SimilarityMatrix {
    static M: OnceLock<disc::fusion::SimilarityMatrix> = OnceLock::new();
    M.get_or_init(|| {
        let cs: Vec<HanChar> = charset().iter().step_by(12).copied().collect();
        build_matrix(tables(), &cs, 0.7, 0.4).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pruned_choice_matches_full_scoring(
        picks in prop::collection::btree_set(0usize..400, 1..24),
        weights in prop::collection::vec(0.0f64..1.0, 24),
        src_idx in 0usize..24,
        alpha in prop::sample::select(vec![0.0, 0.3, 1.1, 3.0]),
        pen in prop::sample::select(vec![0.0, 0.1]),
    ) {
        let m = small_matrix();
        let provider = disc::fusion::CachedSimilarity::new(m, tables()).unwrap();
        // mostly matrix characters, a few from outside it
        let chars: Vec<char> = picks
            .iter()
            .map(|&i| if i < 290 { m.charset()[i].as_char() } else { charset()[i * 7].as_char() })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let total: f64 = weights[..chars.len()].iter().sum::<f64>() + 1e-9;
        let cands: Vec<(char, f64)> = chars
            .iter()
            .zip(&weights)
            .map(|(&c, w)| (c, 0.99 * w / total))
            .collect();
        let source = chars[src_idx % chars.len()];
        let d = CandidateDistribution::new(0, source, cands).unwrap();
        let p = params(alpha, pen);
        prop_assert_eq!(disc::choose(&d, &p, &provider), intervene(&d, &p, &provider).chosen);
    }
}
