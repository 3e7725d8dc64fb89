//! Generate a corpus for each stand-in benchmark class, simplify it, and
//! report mean node counts in the "output / ground truth" form.
//!
//! Run with: cargo run --release --example benchmark_dataset

use std::time::Instant;

use mba_simplify::datagen::{benchmark_ground_truths, obfuscate, GenSpec};
use mba_simplify::{matrix_equiv, parse, simplify, Width};

fn main() {
    let width = Width::W64;
    let count = 200;
    println!("{count} obfuscated MBAs per class, 3 variables each:\n");
    for (name, gt) in benchmark_ground_truths() {
        let vars = gt.variables().len().max(3);
        let mut out_nodes = 0usize;
        let mut verified = 0usize;
        let mut micros = 0u128;
        for i in 0..count {
            let spec = GenSpec {
                ground_truth: gt.clone(),
                width,
                vars,
                steps: vars + 2,
                seed: 1000 + i,
            };
            let rec = obfuscate(&spec).unwrap().record;
            let e = parse(&rec.obfuscated, width).unwrap();
            let started = Instant::now();
            let simplified = simplify(&e, width).unwrap();
            micros += started.elapsed().as_micros();
            out_nodes += simplified.node_count();
            verified += usize::from(matrix_equiv(&e, &simplified, width).is_equivalent());
        }
        println!(
            "  {name} ({gt}): nodes {:.2} / {}, verified {verified}/{count}, mean {:.3} ms",
            out_nodes as f64 / count as f64,
            gt.node_count(),
            micros as f64 / count as f64 / 1000.0
        );
    }
}
