//! ROUGE-1/2/L between a candidate and a reference, with and without stemming.
//!
//! ```sh
//! cargo run --example rouge_basics
//! ```

use matchlab::corpus::Tokenizer;
use matchlab::rouge::{lcs_len, mean_rouge, rouge_n};

fn main() {
    let reference = "The council approved the new budget on Tuesday after a long debate.";
    let candidates = [
        "The council approved the budget on Tuesday.",
        "After a long debate, councillors were approving new budgets.",
        "Rain is expected across the region this weekend.",
    ];

    for stem in [false, true] {
        let tok = Tokenizer::new(stem, false);
        let r = tok.tokenize(reference);
        println!("stemming: {stem}");
        for c in &candidates {
            let c_tokens = tok.tokenize(c);
            let t = mean_rouge(&c_tokens, &r);
            println!(
                "  R-1 {:5.1}  R-2 {:5.1}  R-L {:5.1}  mean {:5.1}  | {c}",
                100.0 * t.r1.f1,
                100.0 * t.r2.f1,
                100.0 * t.rl.f1,
                100.0 * t.mean_f1
            );
        }
    }

    // Duplicate n-grams are clipped to the reference count.
    let cand = ["the", "the", "the", "the"];
    let refr = ["the", "cat", "on", "the", "mat"];
    let p = rouge_n(&cand, &refr, 1);
    println!(
        "\nclipped unigrams: P {:.3} R {:.3} F {:.3}",
        p.precision, p.recall, p.f1
    );
    println!("LCS(abcbdab, bdcaba) = {}", lcs_len(b"abcbdab", b"bdcaba"));
}
