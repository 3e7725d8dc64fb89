//! Generate a small obfuscated corpus from a ground truth and print it.
//! Every record is verified against the ground truth before emission, so a
//! dataset is equivalence-checked by construction.
//!
//! Run with: cargo run --example generate_dataset

use mba_simplify::datagen::{gen_dataset, obfuscate, GenSpec};
use mba_simplify::{parse, Width};

fn main() {
    let width = Width::W64;
    let spec = GenSpec {
        ground_truth: parse("x+y", width).unwrap(),
        width,
        vars: 3,
        steps: 4,
        seed: 7,
    };

    println!("single records (seed varies):");
    for i in 0..3 {
        let out = obfuscate(&GenSpec {
            seed: spec.seed + i,
            ..spec.clone()
        })
        .unwrap();
        println!("  {}", out.record.obfuscated);
    }

    let dir = std::env::temp_dir().join("mba-simplify-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("demo.txt");
    gen_dataset(5, &spec, &path).unwrap();
    println!("\ndataset written to {}:", path.display());
    print!("{}", std::fs::read_to_string(&path).unwrap());
}
