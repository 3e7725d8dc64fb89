//! Equivalence checking: exhaustive enumeration, seeded random sampling with
//! corner values, and the definitive signature-matrix comparison for
//! semi-linear inputs.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ast::{classify, evaluate, Expr, MbaClass, Width};
use crate::signature::semilinear_matrix_over;

/// Default seed for reproducible random equivalence runs.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Random,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// A distinguishing assignment; re-checked before being reported.
    Counterexample(Vec<(String, u64)>),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivReport {
    pub verdict: Verdict,
    pub method: Method,
    pub samples: usize,
}

impl EquivReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }
}

fn union_vars(e1: &Expr, e2: &Expr) -> Vec<String> {
    let mut vars = e1.variables();
    for v in e2.variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars
}

fn checked_counterexample(
    e1: &Expr,
    e2: &Expr,
    width: Width,
    vars: &[String],
    values: &[u64],
) -> Vec<(String, u64)> {
    let assignment: Vec<(String, u64)> = vars.iter().cloned().zip(values.iter().copied()).collect();
    let named: Vec<(&str, u64)> = assignment.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    let a = evaluate(e1, &named, width).expect("vars cover e1");
    let b = evaluate(e2, &named, width).expect("vars cover e2");
    assert_ne!(a, b, "counterexample failed its re-check");
    assignment
}

/// Check all 2^(t*w) assignments. Definitive, but refuses (Inconclusive)
/// when t*w exceeds 24 bits of search space.
pub fn exhaustive_equiv(e1: &Expr, e2: &Expr, width: Width) -> EquivReport {
    let vars = union_vars(e1, e2);
    let t = vars.len();
    let space_bits = t as u32 * width.bits();
    if space_bits > 24 {
        return EquivReport {
            verdict: Verdict::Inconclusive,
            method: Method::Exhaustive,
            samples: 0,
        };
    }
    let b1 = e1.bind(&vars).expect("vars cover e1");
    let b2 = e2.bind(&vars).expect("vars cover e2");
    let total: u64 = 1u64 << space_bits;
    let mut values = vec![0u64; t];
    for idx in 0..total {
        for (k, v) in values.iter_mut().enumerate() {
            *v = (idx >> (k as u32 * width.bits())) & width.mask();
        }
        if b1.eval(&values, width) != b2.eval(&values, width) {
            return EquivReport {
                verdict: Verdict::Counterexample(checked_counterexample(
                    e1, e2, width, &vars, &values,
                )),
                method: Method::Exhaustive,
                samples: idx as usize + 1,
            };
        }
    }
    EquivReport {
        verdict: Verdict::Equivalent,
        method: Method::Exhaustive,
        samples: total as usize,
    }
}

// Corner values: 0, 1, all-ones, every power of two, and every constant
// appearing in either expression together with its complement. These catch
// mask-boundary mistakes that uniform random words miss.
fn corner_values(e1: &Expr, e2: &Expr, width: Width) -> Vec<u64> {
    let mut vals = vec![0u64, 1, width.mask()];
    for i in 0..width.bits() {
        vals.push(1u64 << i);
    }
    for c in e1.constants().into_iter().chain(e2.constants()) {
        vals.push(width.reduce(c));
        vals.push(width.not(c));
    }
    vals.sort_unstable();
    vals.dedup();
    vals
}

/// Evaluate both expressions on seeded random assignments plus a fixed set
/// of corner assignments.
pub fn random_equiv(e1: &Expr, e2: &Expr, width: Width, samples: usize, seed: u64) -> EquivReport {
    assert!(samples >= 1);
    let vars = union_vars(e1, e2);
    let t = vars.len();
    let b1 = e1.bind(&vars).expect("vars cover e1");
    let b2 = e2.bind(&vars).expect("vars cover e2");
    let mut checked = 0usize;

    let mut check = |values: &[u64]| -> Option<EquivReport> {
        checked += 1;
        if b1.eval(values, width) != b2.eval(values, width) {
            Some(EquivReport {
                verdict: Verdict::Counterexample(checked_counterexample(
                    e1, e2, width, &vars, values,
                )),
                method: Method::Random,
                samples: checked,
            })
        } else {
            None
        }
    };

    // Corner assignments: every variable at the corner value, and each single
    // variable at the corner with the others at zero.
    for corner in corner_values(e1, e2, width) {
        let all = vec![corner; t];
        if let Some(r) = check(&all) {
            return r;
        }
        for k in 0..t {
            let mut vals = vec![0u64; t];
            vals[k] = corner;
            if let Some(r) = check(&vals) {
                return r;
            }
        }
    }

    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let vals: Vec<u64> = (0..t).map(|_| rng.gen::<u64>() & width.mask()).collect();
        if let Some(r) = check(&vals) {
            return r;
        }
    }
    EquivReport {
        verdict: Verdict::Equivalent,
        method: Method::Random,
        samples: checked,
    }
}

/// Compare canonical adjusted signature matrices over the union variable
/// set. Sound and complete for linear/semi-linear inputs; `Inconclusive` for
/// anything nonlinear.
pub fn matrix_equiv(e1: &Expr, e2: &Expr, width: Width) -> EquivReport {
    if classify(e1, width) == MbaClass::Nonlinear || classify(e2, width) == MbaClass::Nonlinear {
        return EquivReport {
            verdict: Verdict::Inconclusive,
            method: Method::Matrix,
            samples: 0,
        };
    }
    let vars = union_vars(e1, e2);
    let (m1, m2) = match (
        semilinear_matrix_over(e1, &vars, width),
        semilinear_matrix_over(e2, &vars, width),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            return EquivReport {
                verdict: Verdict::Inconclusive,
                method: Method::Matrix,
                samples: 0,
            }
        }
    };
    let samples = (width.bits() as usize) << vars.len();
    let (o1, a1) = m1.subtract_offset();
    let (o2, a2) = m2.subtract_offset();
    if o1 != o2 {
        let values = vec![0u64; vars.len()];
        return EquivReport {
            verdict: Verdict::Counterexample(checked_counterexample(e1, e2, width, &vars, &values)),
            method: Method::Matrix,
            samples,
        };
    }
    for (i, (r1, r2)) in a1.rows.iter().zip(&a2.rows).enumerate() {
        for (j, (&x, &y)) in r1.iter().zip(r2.iter()).enumerate() {
            if x != y {
                // The evaluation points behind a differing canonical entry
                // must disagree.
                let values: Vec<u64> = (0..vars.len())
                    .map(|k| ((j >> k & 1) as u64) << i)
                    .collect();
                return EquivReport {
                    verdict: Verdict::Counterexample(checked_counterexample(
                        e1, e2, width, &vars, &values,
                    )),
                    method: Method::Matrix,
                    samples,
                };
            }
        }
    }
    EquivReport {
        verdict: Verdict::Equivalent,
        method: Method::Matrix,
        samples,
    }
}
