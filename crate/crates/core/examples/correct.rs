//! Rescores one candidate distribution at increasing alpha and shows when
//! the similar-looking candidate overtakes the model's choice.

use disc::intervention::CandidateDistribution;
use disc::{intervene, CharTables, SimilarityParams, TableSimilarity};

fn main() -> disc::Result<()> {
    let tables = CharTables::bundled();
    let provider = TableSimilarity::new(&tables, 0.7)?;
    // model sees 难读 and is unsure between 度 and 多
    let dist = CandidateDistribution::new(5, '读', vec![('多', 0.45), ('度', 0.35), ('读', 0.05)])
        .expect("valid distribution");

    for alpha in [0.0, 0.1, 0.5, 1.1] {
        let params = SimilarityParams {
            alpha,
            ..Default::default()
        };
        let d = intervene(&dist, &params, &provider);
        let scores: Vec<String> = d
            .scored
            .iter()
            .map(|s| format!("{}={:.3}", s.character, s.score))
            .collect();
        println!("alpha {alpha:<4} -> {}  [{}]", d.chosen, scores.join(" "));
    }
    Ok(())
}
