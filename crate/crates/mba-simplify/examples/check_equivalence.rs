//! The three equivalence oracles side by side: exhaustive enumeration for
//! small widths, seeded random sampling with corner values, and the
//! signature-matrix comparison that is definitive for semi-linear MBAs.
//!
//! Run with: cargo run --example check_equivalence

use mba_simplify::oracle::DEFAULT_SEED;
use mba_simplify::{exhaustive_equiv, matrix_equiv, parse, random_equiv, Width};

fn main() {
    let w8 = Width::new(8).unwrap();
    let w64 = Width::W64;

    let lhs = parse("64*(130&x)", w8).unwrap();
    let rhs = parse("64*(2&x)", w8).unwrap();
    let report = exhaustive_equiv(&lhs, &rhs, w8);
    println!(
        "{lhs} vs {rhs} at width 8 (exhaustive, {} samples): {:?}",
        report.samples, report.verdict
    );

    let lhs = parse(
        "((22079729|(5368709120&x))+(5368709207^(5368709120&x)))-5390788936",
        w64,
    )
    .unwrap();
    let rhs = parse("0", w64).unwrap();
    let report = random_equiv(&lhs, &rhs, w64, 10_000, DEFAULT_SEED);
    println!(
        "intro expression vs 0 (random, seed {DEFAULT_SEED:#x}, {} samples): {:?}",
        report.samples, report.verdict
    );

    let lhs = parse("(x&1111)+(x&-1112)", w64).unwrap();
    let rhs = parse("x", w64).unwrap();
    let report = matrix_equiv(&lhs, &rhs, w64);
    println!("{lhs} vs x (matrix): {:?}", report.verdict);

    let lhs = parse("x^y", w64).unwrap();
    let rhs = parse("x+y", w64).unwrap();
    let report = matrix_equiv(&lhs, &rhs, w64);
    println!("{lhs} vs {rhs} (matrix): {:?}", report.verdict);
}
