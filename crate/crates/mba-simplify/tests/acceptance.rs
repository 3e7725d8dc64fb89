//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use rayon::prelude::*;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use mba_simplify::ast::{evaluate, fold_constants, render, Expr, Width};
use mba_simplify::boolfunc::{quine_mccluskey, BoolFunc};
use mba_simplify::datagen::{benchmark_ground_truths, obfuscate, GenSpec};
use mba_simplify::linear::simplify_linear;
use mba_simplify::oracle::{exhaustive_equiv, matrix_equiv, random_equiv};
use mba_simplify::parse::parse;
use mba_simplify::semilinear::{
    merge_terms, recover_structure, simplify, substitute_and_solve_1bit, MaskedSum, MaskedTerm,
    SimplifyOptions,
};
use mba_simplify::signature::{linear_signature, semilinear_matrix, SignatureVector};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn criterion(name: &str, run: impl FnOnce() -> Result<(), String>) {
    match run() {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(msg) => {
            println!("acceptance {name}: FAIL ({msg})");
            panic!("acceptance {name} failed: {msg}");
        }
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn w(bits: u32) -> Width {
    Width::new(bits).unwrap()
}

fn masked_sum(
    width: Width,
    vars: &[&str],
    constant: u64,
    terms: &[(u64, u64, BoolFunc)],
) -> MaskedSum {
    MaskedSum {
        width,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        constant,
        terms: terms
            .iter()
            .map(|&(coeff, mask, func)| MaskedTerm { coeff, mask, func })
            .collect(),
    }
}

// Small linear ground truths for the randomized suites.
fn random_ground_truth(t: usize, width: Width, rng: &mut StdRng) -> Expr {
    let x = || Expr::var("x");
    let y = || Expr::var("y");
    let z = || Expr::var("z");
    let coeff = |rng: &mut StdRng| {
        let c = rng.gen_range(2..=6u64) & width.mask();
        if c <= 1 {
            2
        } else {
            c
        }
    };
    match t {
        1 => match rng.gen_range(0..4) {
            0 => x(),
            1 => Expr::mul(Expr::Const(coeff(rng)), x()),
            2 => Expr::not(x()),
            _ => Expr::add(
                Expr::mul(Expr::Const(coeff(rng)), x()),
                Expr::Const(coeff(rng)),
            ),
        },
        2 => match rng.gen_range(0..6) {
            0 => Expr::add(x(), y()),
            1 => Expr::xor(x(), y()),
            2 => Expr::and(x(), y()),
            3 => Expr::not(Expr::or(x(), y())),
            4 => Expr::sub(x(), y()),
            _ => Expr::add(Expr::mul(Expr::Const(coeff(rng)), x()), y()),
        },
        _ => match rng.gen_range(0..5) {
            0 => Expr::add(Expr::add(x(), y()), z()),
            1 => Expr::or(Expr::and(x(), y()), z()),
            2 => Expr::add(Expr::xor(x(), y()), Expr::and(x(), z())),
            3 => Expr::add(Expr::mul(Expr::Const(coeff(rng)), x()), Expr::and(y(), z())),
            _ => Expr::or(Expr::or(x(), y()), z()),
        },
    }
}

#[test]
fn criterion_1_worked_example_regression() {
    criterion("criterion 1 (worked-example regression)", || {
        // Per-bit matrix rows of (x&5)+(y&3) at w=3.
        let e = parse("(x&5)+(y&3)", w(3)).map_err(|e| e.to_string())?;
        let m = semilinear_matrix(&e, w(3)).map_err(|e| e.to_string())?;
        expect(
            "matrix rows",
            m.rows.clone(),
            vec![vec![0, 1, 1, 2], vec![0, 0, 1, 1], vec![0, 1, 0, 1]],
        )?;

        // Signature vectors and offset subtraction.
        let neg = |x: u64| x.wrapping_neg();
        let v =
            linear_signature(&parse("x+y", w(64)).unwrap(), w(64)).map_err(|e| e.to_string())?;
        expect("vector of x+y", v.entries.clone(), vec![0, 1, 1, 2])?;
        let v =
            linear_signature(&parse("~(x+y)", w(64)).unwrap(), w(64)).map_err(|e| e.to_string())?;
        expect(
            "vector of ~(x+y)",
            v.entries.clone(),
            vec![neg(1), neg(2), neg(2), neg(3)],
        )?;
        let (offset, adj) = v.subtract_offset();
        expect("offset", offset, neg(1))?;
        expect(
            "adjusted vector",
            adj.entries,
            vec![0, neg(1), neg(1), neg(2)],
        )?;

        // Masked-term merging.
        let x1 = BoolFunc::var(1, 0);
        let s = masked_sum(w(8), &["x"], 0, &[(64, 130, x1), (64, 192, x1)]);
        expect(
            "merge 64*(130&x)+64*(192&x)",
            render(&merge_terms(&s).to_expr()),
            "(64*(194&x))".into(),
        )?;

        let s = masked_sum(
            w(64),
            &["x"],
            0,
            &[
                (1, 529682, x1),
                (7676756576, 23429673, x1),
                (7676756577, 24772, x1),
            ],
        );
        expect(
            "three-term merge",
            render(&merge_terms(&s).to_expr()),
            "((554454&x)+(7676756576*(23454445&x)))".into(),
        )?;

        // Structure recovery.
        let s = masked_sum(
            w(64),
            &["x"],
            980,
            &[(10u64.wrapping_neg(), 98, x1), (10, !98u64, x1)],
        );
        expect(
            "xor recovery",
            render(&recover_structure(&s).to_expr()),
            "(10*(98^x))".into(),
        )?;

        let s = masked_sum(w(64), &["x"], 0, &[(7, 1111, x1), (2, !1111u64, x1)]);
        expect(
            "single-mask rewrite",
            render(&recover_structure(&s).to_expr()),
            "((5*(1111&x))+(2*x))".into(),
        )?;

        // 1-bit-space substitution.
        let fxny = BoolFunc::from_fn(2, |j| j == 1);
        let fnxy = BoolFunc::from_fn(2, |j| j == 2);
        let fxy = BoolFunc::from_fn(2, |j| j == 3);
        let s = masked_sum(
            w(64),
            &["x", "y"],
            0,
            &[(1, 1111, fxny), (1, 2222, fnxy), (1, 3327, fxy)],
        );
        let out = substitute_and_solve_1bit(&s, &SimplifyOptions::default())
            .ok_or("substitution returned none")?;
        expect(
            "mask substitution",
            render(&out),
            "((x&1111)|(y&2222))".into(),
        )?;

        // End-to-end: the same expression through simplify().
        let e = parse("((1111&(x&~y))|(2222&(~x&y)))|(3327&(x&y))", w(64)).unwrap();
        let out = simplify(&e, w(64)).map_err(|e| e.to_string())?;
        expect(
            "end-to-end mask substitution",
            render(&out),
            "((x&1111)|(y&2222))".into(),
        )?;

        // Linearity shortcut and the flagship zero.
        let e = parse("(x&1111)+(x&-1112)", w(64)).unwrap();
        expect(
            "shortcut",
            render(&simplify(&e, w(64)).map_err(|e| e.to_string())?),
            "x".into(),
        )?;
        let e = parse(
            "((22079729|(5368709120&x))+(5368709207^(5368709120&x)))-5390788936",
            w(64),
        )
        .unwrap();
        expect(
            "intro zero",
            render(&simplify(&e, w(64)).map_err(|e| e.to_string())?),
            "0".into(),
        )?;
        Ok(())
    });
}

#[test]
fn criterion_2_reconstruction_identity() {
    criterion("criterion 2 (reconstruction identity)", || {
        let failures = AtomicUsize::new(0);
        for &t in &[1usize, 2, 3] {
            for &bits in &[4u32, 8, 64] {
                let width = w(bits);
                (0..1000u64).into_par_iter().for_each(|i| {
                    let mut rng = StdRng::seed_from_u64(0x2000 + i * 9 + t as u64 + bits as u64);
                    let gt = random_ground_truth(t, width, &mut rng);
                    let fresh = t.saturating_sub(gt.variables().len());
                    let spec = GenSpec {
                        ground_truth: gt,
                        width,
                        vars: t,
                        steps: fresh + rng.gen_range(1..=3),
                        seed: i,
                    };
                    let Ok(out) = obfuscate(&spec) else {
                        failures.fetch_add(1, Ordering::Relaxed);
                        return;
                    };
                    let e = parse(&out.record.obfuscated, width).unwrap();
                    let m = semilinear_matrix(&e, width).unwrap();
                    let (_, adj) = m.subtract_offset();
                    let recon = mba_simplify::signature::reconstruct_conjunctions(&adj);
                    let ok = if bits == 4 {
                        exhaustive_equiv(&e, &recon, width).is_equivalent()
                    } else {
                        let samples = if bits == 64 { 10_000 } else { 1_000 };
                        random_equiv(&e, &recon, width, samples, i).is_equivalent()
                    };
                    if !ok {
                        failures.fetch_add(1, Ordering::Relaxed);
                    }
                });
            }
        }
        expect(
            "failures across 9 configurations x 1000 expressions",
            failures.into_inner(),
            0,
        )
    });
}

#[test]
fn criterion_3_oracle_agreement() {
    criterion("criterion 3 (matrix vs exhaustive oracle)", || {
        let disagreements = AtomicUsize::new(0);
        (0..1000u64).into_par_iter().for_each(|i| {
            let mut rng = StdRng::seed_from_u64(0x3000 + i);
            let bits = rng.gen_range(1..=8u32);
            let width = w(bits);
            let t = rng.gen_range(1..=2usize);
            let gt1 = random_ground_truth(t, width, &mut rng);
            let kind = rng.gen_range(0..3);
            let (e1, e2) = match kind {
                0 => {
                    // Equivalent pair: obfuscation against its ground truth.
                    let spec = GenSpec {
                        ground_truth: gt1.clone(),
                        width,
                        vars: t.max(gt1.variables().len()),
                        steps: rng.gen_range(1..=3),
                        seed: i,
                    };
                    match obfuscate(&spec) {
                        Ok(out) => (parse(&out.record.obfuscated, width).unwrap(), gt1),
                        Err(_) => (gt1.clone(), gt1),
                    }
                }
                1 => {
                    // Usually inequivalent pair.
                    let gt2 = random_ground_truth(t, width, &mut rng);
                    let spec = GenSpec {
                        ground_truth: gt1.clone(),
                        width,
                        vars: t.max(gt1.variables().len()),
                        steps: rng.gen_range(1..=3),
                        seed: i,
                    };
                    match obfuscate(&spec) {
                        Ok(out) => (parse(&out.record.obfuscated, width).unwrap(), gt2),
                        Err(_) => (gt1, gt2),
                    }
                }
                _ => {
                    let gt2 = random_ground_truth(t, width, &mut rng);
                    (gt1, gt2)
                }
            };
            let ex = exhaustive_equiv(&e1, &e2, width);
            let mx = matrix_equiv(&e1, &e2, width);
            if ex.is_equivalent() != mx.is_equivalent() {
                disagreements.fetch_add(1, Ordering::Relaxed);
            }
        });
        expect(
            "oracle disagreements on 1000 pairs",
            disagreements.into_inner(),
            0,
        )
    });
}

#[test]
fn criterion_4_benchmark_reproduction() {
    criterion("criterion 4 (desk-scale benchmark reproduction)", || {
        let width = w(64);
        for (name, gt) in benchmark_ground_truths() {
            let gt_nodes = gt.node_count();
            for &vc in &[2usize, 3, 4] {
                let vars = vc.max(gt.variables().len());
                let results: Vec<Result<(usize, bool, u128), String>> = (0..1000u64)
                    .into_par_iter()
                    .map(|i| {
                        let spec = GenSpec {
                            ground_truth: gt.clone(),
                            width,
                            vars,
                            steps: vars + 2,
                            seed: 0x4000 + i,
                        };
                        let out = obfuscate(&spec).map_err(|e| format!("{name}/{vc}: {e}"))?;
                        let e = parse(&out.record.obfuscated, width).unwrap();
                        let started = Instant::now();
                        let simplified =
                            simplify(&e, width).map_err(|e| format!("{name}/{vc}: {e}"))?;
                        let micros = started.elapsed().as_micros();
                        let verified = matrix_equiv(&e, &simplified, width).is_equivalent();
                        Ok((simplified.node_count(), verified, micros))
                    })
                    .collect();
                let mut out_nodes = 0usize;
                let mut exact = 0usize;
                let mut verified = 0usize;
                let mut micros = 0u128;
                for r in &results {
                    let (n, v, us) = r.clone()?;
                    out_nodes += n;
                    exact += usize::from(n == gt_nodes);
                    verified += usize::from(v);
                    micros += us;
                }
                let mean_out = out_nodes as f64 / 1000.0;
                let mean_us = micros as f64 / 1000.0;
                println!(
                    "  {name} {vc}vars: nodes {mean_out:.2} / {gt_nodes}, exact {:.1}%, mean {:.3} ms",
                    exact as f64 / 10.0,
                    mean_us / 1000.0
                );
                if verified != 1000 {
                    return Err(format!("{name}/{vc}: only {verified}/1000 oracle-verified"));
                }
                if mean_out > 1.25 * gt_nodes as f64 {
                    return Err(format!(
                        "{name}/{vc}: mean nodes {mean_out:.2} exceeds 1.25x{gt_nodes}"
                    ));
                }
                if exact < 900 {
                    return Err(format!("{name}/{vc}: only {exact}/1000 exact node matches"));
                }
                if mean_us > 5000.0 {
                    return Err(format!(
                        "{name}/{vc}: mean runtime {mean_us:.0} us exceeds 5 ms"
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_5_mixed_corpus() {
    criterion("criterion 5 (mixed-size corpus)", || {
        let width = w(64);
        // Deterministic pool of moderate ground truths, mean node count ~12.
        let template = |i: u64| -> Expr {
            let mut rng = StdRng::seed_from_u64(0x5000 + i);
            let c = |rng: &mut StdRng| Expr::Const(rng.gen_range(2..=999u64));
            let x = || Expr::var("x");
            let y = || Expr::var("y");
            let z = || Expr::var("z");
            let u = || Expr::var("w");
            match i % 10 {
                0 => Expr::add(
                    Expr::add(Expr::mul(c(&mut rng), x()), Expr::mul(c(&mut rng), y())),
                    Expr::mul(c(&mut rng), z()),
                ),
                1 => Expr::add(
                    Expr::mul(c(&mut rng), x()),
                    Expr::mul(c(&mut rng), Expr::and(y(), z())),
                ),
                2 => Expr::add(
                    Expr::add(
                        Expr::mul(c(&mut rng), x()),
                        Expr::mul(c(&mut rng), Expr::or(y(), z())),
                    ),
                    c(&mut rng),
                ),
                3 => Expr::add(Expr::not(Expr::or(x(), y())), Expr::mul(c(&mut rng), z())),
                4 => Expr::add(
                    Expr::mul(c(&mut rng), Expr::xor(x(), y())),
                    Expr::mul(c(&mut rng), Expr::and(x(), z())),
                ),
                5 => Expr::add(
                    Expr::add(Expr::mul(c(&mut rng), x()), Expr::mul(c(&mut rng), y())),
                    Expr::mul(c(&mut rng), Expr::and(z(), u())),
                ),
                6 => Expr::add(
                    Expr::add(
                        Expr::add(Expr::mul(c(&mut rng), x()), Expr::mul(c(&mut rng), y())),
                        Expr::mul(c(&mut rng), z()),
                    ),
                    c(&mut rng),
                ),
                7 => Expr::add(
                    Expr::add(Expr::not(Expr::and(x(), y())), Expr::mul(c(&mut rng), z())),
                    c(&mut rng),
                ),
                8 => Expr::add(
                    Expr::mul(c(&mut rng), x()),
                    Expr::mul(c(&mut rng), Expr::not(Expr::xor(y(), z()))),
                ),
                _ => Expr::add(
                    Expr::add(
                        Expr::mul(c(&mut rng), x()),
                        Expr::mul(c(&mut rng), Expr::xor(y(), z())),
                    ),
                    Expr::mul(c(&mut rng), Expr::and(x(), u())),
                ),
            }
        };

        let results: Vec<Result<(usize, usize, bool), String>> = (0..500u64)
            .into_par_iter()
            .map(|i| {
                let gt = template(i);
                let mut rng = StdRng::seed_from_u64(0x5500 + i);
                let spec = GenSpec {
                    ground_truth: gt.clone(),
                    width,
                    vars: gt.variables().len(),
                    steps: rng.gen_range(2..=4),
                    seed: 0x5a00 + i,
                };
                let out = obfuscate(&spec).map_err(|e| e.to_string())?;
                let e = parse(&out.record.obfuscated, width).unwrap();
                let simplified = simplify(&e, width).map_err(|e| e.to_string())?;
                let verified = matrix_equiv(&e, &simplified, width).is_equivalent();
                Ok((gt.node_count(), simplified.node_count(), verified))
            })
            .collect();

        let mut gt_total = 0usize;
        let mut out_total = 0usize;
        let mut verified = 0usize;
        for r in &results {
            let (g, o, v) = r.clone()?;
            gt_total += g;
            out_total += o;
            verified += usize::from(v);
        }
        let mean_gt = gt_total as f64 / 500.0;
        let mean_out = out_total as f64 / 500.0;
        println!("  corpus: nodes {mean_out:.2} / {mean_gt:.2}, verified {verified}/500");
        if !(9.0..=15.0).contains(&mean_gt) {
            return Err(format!(
                "ground-truth mean node count {mean_gt:.2} is not around 12"
            ));
        }
        if verified != 500 {
            return Err(format!("only {verified}/500 oracle-verified"));
        }
        if mean_out > 1.1 * mean_gt {
            return Err(format!("node ratio {:.3} exceeds 1.1", mean_out / mean_gt));
        }
        Ok(())
    });
}

#[test]
fn criterion_6_linear_regression() {
    criterion("criterion 6 (linear solver regression)", || {
        let width = w(64);
        let v = SignatureVector {
            width,
            vars: vec!["x".into(), "y".into()],
            entries: vec![0, 1, 1, 2],
        };
        expect(
            "simplify_linear([0,1,1,2])",
            render(&simplify_linear(&v)),
            "(x+y)".into(),
        )?;

        let neg = |x: u64| x.wrapping_neg();
        let v = SignatureVector {
            width,
            vars: vec!["x".into(), "y".into()],
            entries: vec![neg(1), neg(2), neg(2), neg(3)],
        };
        let e = simplify_linear(&v);
        if e.node_count() > 4 {
            return Err(format!("negated sum not compact: {e}"));
        }
        let original = parse("~(x+y)", width).unwrap();
        if !exhaustive_equiv(
            &fold_constants(&e, w(8)),
            &fold_constants(&original, w(8)),
            w(8),
        )
        .is_equivalent()
        {
            return Err(format!("{e} is not equivalent to ~(x+y)"));
        }
        Ok(())
    });
}

#[test]
fn criterion_7_quine_mccluskey_sweep() {
    criterion("criterion 7 (Quine-McCluskey full sweep at t=3)", || {
        let vars: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let w1 = w(1);
        for table in 0u32..256 {
            let f = BoolFunc::from_fn(3, |j| table >> j & 1 == 1);
            let e = quine_mccluskey(&f, &vars, Width::W64);
            for j in 0..8usize {
                let assignment: Vec<(&str, u64)> = vars
                    .iter()
                    .enumerate()
                    .map(|(k, n)| (n.as_str(), (j >> k & 1) as u64))
                    .collect();
                let got = evaluate(&e, &assignment, w1).unwrap() == 1;
                if got != f.get(j) {
                    return Err(format!("table {table:#04x} differs at point {j}"));
                }
            }
        }
        Ok(())
    });
}
