//! Classifying the standard corpus with every criterion.

use pilipovic::harness::{gen_corpus, CorpusSpec};
use pilipovic::spaces::{classify_with, ClassifyOptions, Criterion};

fn main() -> pilipovic::Result<()> {
    let items = gen_corpus(&CorpusSpec::standard(), 128, 42)?;
    let opts = ClassifyOptions { criteria: Criterion::ALL.to_vec(), ..Default::default() };
    for it in &items {
        let v = classify_with(&it.coeffs, &opts)?;
        println!("{:32} -> {:8} fitted r {:?}, agreement {}", it.name, v.label.to_string(), v.fitted_r, v.agreement);
        for rec in &v.criteria {
            let label = rec.label.map_or_else(|| "-".to_string(), |l| l.to_string());
            let note = rec.note.as_deref().or(rec.error.as_deref()).unwrap_or("");
            println!("    {:8} {:8} {note}", rec.name.to_string(), label);
        }
    }
    Ok(())
}
