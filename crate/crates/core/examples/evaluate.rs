//! Sentence-level detection and correction metrics on a handful of
//! hand-written hypotheses.

use disc::evalkit::EvalItem;
use disc::evaluate;

fn main() -> disc::Result<()> {
    let items = vec![
        // fixed correctly
        EvalItem::new("a", "记得戴眼睛", "记得戴眼镜", "记得戴眼镜")?,
        // right position, wrong character
        EvalItem::new(
            "b",
            "这本书的难读很大",
            "这本书的难多很大",
            "这本书的难度很大",
        )?,
        // missed
        EvalItem::new("c", "他很忠明", "他很忠明", "他很聪明")?,
        // clean sentence left alone
        EvalItem::new("d", "今天天气很好", "今天天气很好", "今天天气很好")?,
        // clean sentence broken
        EvalItem::new("e", "我们去公园", "我们去公圆", "我们去公园")?,
    ];
    let r = evaluate(&items);
    let show = |name: &str, p: disc::evalkit::Prf| {
        println!(
            "{name:<10} P {:.3}  R {:.3}  F1 {:.3}",
            p.precision, p.recall, p.f1
        )
    };
    show("detection", r.detection);
    show("correction", r.correction);
    println!(
        "FPR        {:.3} ({} of {} clean)",
        r.fpr, r.counts.false_positives, r.counts.clean
    );
    Ok(())
}
