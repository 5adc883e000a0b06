//! Prints the phonetic, glyph and fused similarity of a few character pairs.
//!
//! Run with `cargo run --example similarity [-- 忠 仲]`.

use disc::fusion::breakdown;
use disc::CharTables;

fn main() -> disc::Result<()> {
    let tables = CharTables::bundled();
    let args: Vec<char> = std::env::args()
        .skip(1)
        .filter_map(|a| a.chars().next())
        .collect();
    let pairs = match args[..] {
        [a, b] => vec![(a, b)],
        _ => vec![
            ('忠', '仲'),
            ('读', '度'),
            ('木', '本'),
            ('人', '入'),
            ('睛', '镜'),
        ],
    };
    println!("pair  phon   fc     sfc    s-ed   s-lcs  glyph  fused");
    for (a, b) in pairs {
        let r = breakdown(&tables, a, b, 0.7)?;
        let g = r.glyph;
        println!(
            "{a}{b}  {:.4} {:.4} {:.4} {:.4} {:.4} {:.4} {:.4}",
            r.phonetic.value(),
            g.four_corner.value(),
            g.structure.value(),
            g.stroke_edit.value(),
            g.stroke_lcs.value(),
            r.glyph_mean.value(),
            r.fused.value(),
        );
    }
    Ok(())
}
