//! How many test edit pairs already occur in the training corpus.

use std::collections::HashSet;

use disc::evalkit::{corpus_edits, SentencePair};
use disc::seen_pair_stats;

fn main() -> disc::Result<()> {
    let train = vec![
        SentencePair::new("t1", "记得戴眼睛", "记得戴眼镜")?,
        SentencePair::new("t2", "难读很大", "难度很大")?,
    ];
    let test = vec![
        SentencePair::new("s1", "他的眼睛很好看眼睛", "他的眼睛很好看眼镜")?,
        SentencePair::new("s2", "他很忠明", "他很聪明")?,
    ];
    let known: HashSet<(char, char)> = corpus_edits(&train)
        .iter()
        .map(|e| (e.src, e.tgt))
        .collect();
    let edits = corpus_edits(&test);
    for e in &edits {
        let tag = if known.contains(&(e.src, e.tgt)) {
            "seen"
        } else {
            "new"
        };
        println!("{} -> {} at {}: {tag}", e.src, e.tgt, e.position);
    }
    let s = seen_pair_stats(&known, &edits);
    println!("{} of {} seen ({:.2})", s.seen, s.total, s.proportion);
    Ok(())
}
