//! Builds a similarity matrix over a small charset, then prints nearest
//! neighbors and the confusion pairs above a threshold.

use disc::{build_matrix, confusion_set, CharTables, HanChar};

fn main() -> disc::Result<()> {
    let tables = CharTables::bundled();
    let charset: Vec<HanChar> = "忠仲中种钟众重虫冲读度渡独毒睛镜晴情清请"
        .chars()
        .filter_map(HanChar::new)
        .collect();
    let matrix = build_matrix(&tables, &charset, 0.7, 0.4)?;
    println!(
        "{} chars, {} stored pairs",
        charset.len(),
        matrix.pair_count()
    );

    for c in ['忠', '读', '睛'] {
        let top: Vec<String> = matrix
            .neighbors(c)
            .iter()
            .take(4)
            .map(|(n, s)| format!("{n}:{:.3}", s.value()))
            .collect();
        println!("{c} -> {}", top.join(" "));
    }

    let pairs = confusion_set(&matrix, 0.7)?;
    println!("{} pairs above 0.7:", pairs.len());
    for (a, b) in pairs {
        print!("{a}{b} ");
    }
    println!();
    Ok(())
}
