//! Simplify a handful of obfuscated expressions and show the node counts.
//!
//! Run with: cargo run --example simplify_expression

use mba_simplify::{parse, simplify, Width};

fn main() {
    let samples = [
        "((22079729|(5368709120&x))+(5368709207^(5368709120&x)))-5390788936",
        "(x&1111)+(x&-1112)",
        "980+(-10*(98&x))+(10*(-99&x))",
        "7*(1111&x)+2*(-1112&x)",
        "((1111&(x&~y))|(2222&(~x&y)))|(3327&(x&y))",
        "2*(x&5)+2*(y&3)",
        "x+y",
    ];
    let width = Width::W64;
    for text in samples {
        let e = parse(text, width).expect("sample parses");
        let simplified = simplify(&e, width).expect("sample is linear or semi-linear");
        println!(
            "{text}\n  -> {simplified}   ({} nodes -> {})\n",
            e.node_count(),
            simplified.node_count()
        );
    }
}
