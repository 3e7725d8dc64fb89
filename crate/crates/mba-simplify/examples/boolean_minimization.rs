//! Quine-McCluskey minimization and the expression catalog behind bitwise
//! materialization.
//!
//! Run with: cargo run --example boolean_minimization

use mba_simplify::{materialize, quine_mccluskey, BoolFunc, Width};

fn main() {
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let w = Width::W64;

    let samples: &[(&str, u32)] = &[
        ("x | y (on two vars)", 0b1110),
        ("majority", 0b11101000),
        ("parity", 0b10010110),
        ("(x&y)|z", 0b11111000),
    ];
    for &(label, table) in samples {
        let nvars = if table > 0xF { 3 } else { 2 };
        let f = BoolFunc::from_fn(nvars, |j| table >> j & 1 == 1);
        let names = &vars[..nvars];
        let sop = quine_mccluskey(&f, names, w);
        let best = materialize(&f, names, w);
        println!("{label}:");
        println!("  sum of products: {sop} ({} nodes)", sop.node_count());
        println!("  catalog pick:    {best} ({} nodes)\n", best.node_count());
    }

    // Minimization is exact: sweep every 2-variable function.
    let names = &vars[..2];
    let mut total = 0usize;
    for table in 0u32..16 {
        let f = BoolFunc::from_fn(2, |j| table >> j & 1 == 1);
        total += quine_mccluskey(&f, names, w).node_count();
    }
    println!("sum of SOP node counts over all 16 two-variable functions: {total}");
}
