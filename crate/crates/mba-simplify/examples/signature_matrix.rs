//! Inspect the signature vector of a linear MBA and the per-bit signature
//! matrix of a semi-linear one, then rebuild an equivalent expression from
//! the matrix.
//!
//! Run with: cargo run --example signature_matrix

use mba_simplify::signature::reconstruct_conjunctions;
use mba_simplify::{exhaustive_equiv, linear_signature, parse, semilinear_matrix, Width};

fn main() {
    let w64 = Width::W64;
    let w3 = Width::new(3).unwrap();

    // Linear: one evaluation per 0/1 corner.
    let e = parse("~(x+y)", w64).unwrap();
    let v = linear_signature(&e, w64).unwrap();
    println!("signature vector of {e} over {:?}:", v.vars);
    println!(
        "  {:?}",
        v.entries.iter().map(|&x| x as i64).collect::<Vec<_>>()
    );
    let (offset, adj) = v.subtract_offset();
    println!(
        "  offset {} subtracted: {:?}",
        offset as i64,
        adj.entries.iter().map(|&x| x as i64).collect::<Vec<_>>()
    );

    // Semi-linear: one row per bit, evaluated on {0, 2^i} and shifted.
    let e = parse("(x&5)+(y&3)", w3).unwrap();
    let m = semilinear_matrix(&e, w3).unwrap();
    println!("\nsignature matrix of {e} at width 3:");
    for (i, row) in m.rows.iter().enumerate() {
        println!("  bit {i}: {row:?}");
    }

    let (_, adj) = m.subtract_offset();
    let rebuilt = reconstruct_conjunctions(&adj);
    println!("\nreconstruction: {rebuilt}");
    let report = exhaustive_equiv(&e, &rebuilt, w3);
    println!(
        "exhaustive check over {} assignments: {:?}",
        report.samples, report.verdict
    );
}
