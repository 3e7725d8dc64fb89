//! Seeded generation of semi-linear MBA corpora: semantics-preserving
//! rewrites applied to known ground truths, with every emitted record gated
//! by the random-equivalence oracle.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::ast::{classify, Expr, MbaClass, Width};
use crate::error::Error;
use crate::oracle::{random_equiv, Verdict};
use crate::semilinear::{can_change_coefficient_to, can_change_mask_to};

/// What to generate: a ground truth, the target width and variable count,
/// and how many rewrite steps to spend.
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub ground_truth: Expr,
    pub width: Width,
    /// Target number of variables in the obfuscated output (fresh variables
    /// are introduced by variable splits). At most 4.
    pub vars: usize,
    pub steps: usize,
    pub seed: u64,
}

/// One dataset line: an obfuscated expression and its ground truth, oracle
/// verified at generation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetRecord {
    pub obfuscated: String,
    pub ground_truth: String,
    pub width: Width,
    pub vars: usize,
}

#[derive(Debug, Clone)]
pub struct GenOutcome {
    pub record: DatasetRecord,
    /// 1 on first-try success; retries reseed and regenerate.
    pub attempts: u32,
}

// Working form during generation: constant + sum of coeff*(mask & body),
// where the body is a bitwise expression that may contain constants.
#[derive(Debug, Clone)]
struct GenTerm {
    coeff: u64,
    mask: u64,
    body: Expr,
}

#[derive(Debug, Clone)]
struct GenSum {
    width: Width,
    constant: u64,
    terms: Vec<GenTerm>,
}

impl GenSum {
    fn to_expr(&self) -> Expr {
        let w = self.width;
        let pieces = self
            .terms
            .iter()
            .map(|t| {
                let piece = if t.mask == w.mask() {
                    t.body.clone()
                } else {
                    Expr::and(Expr::Const(t.mask), t.body.clone())
                };
                (t.coeff, piece)
            })
            .collect();
        crate::linear::build_sum(w, self.constant, pieces)
    }

    fn cleanup(&mut self) {
        self.terms.retain(|t| t.coeff != 0 && t.mask != 0);
    }
}

fn is_bitwise(e: &Expr) -> bool {
    match e {
        Expr::Var(_) | Expr::Const(_) => true,
        Expr::Not(a) => is_bitwise(a),
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => is_bitwise(a) && is_bitwise(b),
        _ => false,
    }
}

fn decompose(e: &Expr, coeff: u64, sum: &mut GenSum) -> Result<(), Error> {
    let w = sum.width;
    if let Some(v) = e.const_value(w) {
        sum.constant = w.add(sum.constant, w.mul(coeff, v));
        return Ok(());
    }
    match e {
        Expr::Add(a, b) => {
            decompose(a, coeff, sum)?;
            decompose(b, coeff, sum)
        }
        Expr::Sub(a, b) => {
            decompose(a, coeff, sum)?;
            decompose(b, w.neg(coeff), sum)
        }
        Expr::Neg(a) => decompose(a, w.neg(coeff), sum),
        Expr::Mul(a, b) => {
            if let Some(c) = a.const_value(w) {
                decompose(b, w.mul(coeff, c), sum)
            } else if let Some(c) = b.const_value(w) {
                decompose(a, w.mul(coeff, c), sum)
            } else {
                Err(Error::Generation(
                    "ground truth contains a variable product".to_string(),
                ))
            }
        }
        Expr::And(a, b) if a.const_value(w).is_some() && is_bitwise(b) => {
            sum.terms.push(GenTerm {
                coeff,
                mask: a.const_value(w).unwrap(),
                body: b.as_ref().clone(),
            });
            Ok(())
        }
        Expr::And(a, b) if b.const_value(w).is_some() && is_bitwise(a) => {
            sum.terms.push(GenTerm {
                coeff,
                mask: b.const_value(w).unwrap(),
                body: a.as_ref().clone(),
            });
            Ok(())
        }
        other if is_bitwise(other) => {
            sum.terms.push(GenTerm {
                coeff,
                mask: w.mask(),
                body: other.clone(),
            });
            Ok(())
        }
        other => Err(Error::Generation(format!(
            "unsupported ground-truth shape: {other}"
        ))),
    }
}

// Nontrivial word: uniform over [1, 2^w - 2].
fn nontrivial_word(rng: &mut StdRng, w: Width) -> Option<u64> {
    if w.bits() == 1 {
        return None;
    }
    Some(rng.gen_range(1..w.mask()))
}

fn fresh_names(existing: &[String], total: usize) -> Vec<String> {
    let pool = ["x", "y", "z", "w", "a", "b", "c", "d"];
    let mut names: Vec<String> = existing.to_vec();
    let mut i = 0;
    while names.len() < total {
        let cand = pool
            .get(i)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("v{i}"));
        i += 1;
        if !names.contains(&cand) {
            names.push(cand);
        }
    }
    names
}

// Rewrite rules. Growing rules add AST nodes; the inflation rules only
// change constants and are allowed from the second step on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    VarSplit,
    MaskSplit,
    AddIdentity,
    XorReverse,
    StockSubst,
    CoeffInflate,
    MaskInflate,
}

const GROWING: [Rule; 5] = [
    Rule::VarSplit,
    Rule::MaskSplit,
    Rule::AddIdentity,
    Rule::XorReverse,
    Rule::StockSubst,
];
const ALL: [Rule; 7] = [
    Rule::VarSplit,
    Rule::MaskSplit,
    Rule::AddIdentity,
    Rule::XorReverse,
    Rule::StockSubst,
    Rule::CoeffInflate,
    Rule::MaskInflate,
];

fn rule_applicable(rule: Rule, sum: &GenSum, w: Width) -> bool {
    match rule {
        Rule::VarSplit => !sum.terms.is_empty(),
        Rule::MaskSplit => w.bits() >= 2 && sum.terms.iter().any(|t| t.mask.count_ones() >= 2),
        Rule::AddIdentity => {
            let full = w.mask();
            sum.terms.iter().enumerate().any(|(i, a)| {
                sum.terms
                    .iter()
                    .skip(i + 1)
                    .any(|b| a.coeff == b.coeff && a.mask == full && b.mask == full)
            })
        }
        Rule::XorReverse | Rule::StockSubst => {
            w.bits() >= 2 && sum.terms.iter().any(|t| t.mask == w.mask())
        }
        Rule::CoeffInflate => sum
            .terms
            .iter()
            .any(|t| t.mask.trailing_zeros() >= 1 && t.mask != 0),
        Rule::MaskInflate => sum.terms.iter().any(|t| {
            t.coeff != 0 && {
                let tz = t.coeff.trailing_zeros();
                tz > 0 && {
                    let dead_from = w.bits() - tz.min(w.bits());
                    (dead_from..w.bits()).any(|i| t.mask >> i & 1 == 0)
                }
            }
        }),
    }
}

fn pick_term(rng: &mut StdRng, idxs: &[usize]) -> usize {
    idxs[rng.gen_range(0..idxs.len())]
}

fn apply_rule(rule: Rule, sum: &mut GenSum, rng: &mut StdRng, var_names: &[String]) {
    let w = sum.width;
    let full = w.mask();
    match rule {
        Rule::VarSplit => {
            let idxs: Vec<usize> = (0..sum.terms.len()).collect();
            let i = pick_term(rng, &idxs);
            let v = Expr::var(&var_names[rng.gen_range(0..var_names.len())]);
            let t = sum.terms[i].clone();
            sum.terms[i] = GenTerm {
                coeff: t.coeff,
                mask: t.mask,
                body: Expr::and(t.body.clone(), v.clone()),
            };
            sum.terms.insert(
                i + 1,
                GenTerm {
                    coeff: t.coeff,
                    mask: t.mask,
                    body: Expr::and(t.body, Expr::not(v)),
                },
            );
        }
        Rule::MaskSplit => {
            let idxs: Vec<usize> = (0..sum.terms.len())
                .filter(|&i| sum.terms[i].mask.count_ones() >= 2)
                .collect();
            let i = pick_term(rng, &idxs);
            let t = sum.terms[i].clone();
            for _ in 0..64 {
                let m = match nontrivial_word(rng, w) {
                    Some(m) => m,
                    None => return,
                };
                let a = t.mask & m;
                let b = t.mask & w.not(m);
                if a != 0 && b != 0 {
                    sum.terms[i] = GenTerm {
                        coeff: t.coeff,
                        mask: a,
                        body: t.body.clone(),
                    };
                    sum.terms.insert(
                        i + 1,
                        GenTerm {
                            coeff: t.coeff,
                            mask: b,
                            body: t.body,
                        },
                    );
                    return;
                }
            }
        }
        Rule::AddIdentity => {
            let mut pairs = Vec::new();
            for i in 0..sum.terms.len() {
                for j in i + 1..sum.terms.len() {
                    if sum.terms[i].coeff == sum.terms[j].coeff
                        && sum.terms[i].mask == full
                        && sum.terms[j].mask == full
                    {
                        pairs.push((i, j));
                    }
                }
            }
            let (i, j) = pairs[rng.gen_range(0..pairs.len())];
            let (a, b) = (sum.terms[i].clone(), sum.terms[j].clone());
            let c = a.coeff;
            sum.terms[i] = GenTerm {
                coeff: c,
                mask: full,
                body: Expr::xor(a.body.clone(), b.body.clone()),
            };
            sum.terms[j] = GenTerm {
                coeff: w.add(c, c),
                mask: full,
                body: Expr::and(a.body, b.body),
            };
        }
        Rule::XorReverse => {
            let idxs: Vec<usize> = (0..sum.terms.len())
                .filter(|&i| sum.terms[i].mask == full)
                .collect();
            let i = pick_term(rng, &idxs);
            let t = sum.terms[i].clone();
            // m*B = m*(k ^ (k^B)) = m*k + m*(~k & (k^B)) - m*(k & (k^B));
            // when B is already `k ^ rest` the xor collapses back to rest.
            let (k, inner) = match &t.body {
                Expr::Xor(a, b) => match (a.const_value(w), b.const_value(w)) {
                    (Some(k), None) => (k, b.as_ref().clone()),
                    (None, Some(k)) => (k, a.as_ref().clone()),
                    _ => match nontrivial_word(rng, w) {
                        Some(k) => (k, Expr::xor(Expr::Const(k), t.body.clone())),
                        None => return,
                    },
                },
                _ => match nontrivial_word(rng, w) {
                    Some(k) => (k, Expr::xor(Expr::Const(k), t.body.clone())),
                    None => return,
                },
            };
            sum.constant = w.add(sum.constant, w.mul(t.coeff, k));
            sum.terms[i] = GenTerm {
                coeff: t.coeff,
                mask: w.not(k),
                body: inner.clone(),
            };
            sum.terms.insert(
                i + 1,
                GenTerm {
                    coeff: w.neg(t.coeff),
                    mask: k,
                    body: inner,
                },
            );
        }
        Rule::StockSubst => {
            let idxs: Vec<usize> = (0..sum.terms.len())
                .filter(|&i| sum.terms[i].mask == full)
                .collect();
            let i = pick_term(rng, &idxs);
            let t = sum.terms[i].clone();
            let k = match nontrivial_word(rng, w) {
                Some(k) => k,
                None => return,
            };
            if rng.gen_bool(0.5) {
                // x + k == (x|k) + (x&k): m*B = m*(k|B) + m*(k&B) - m*k.
                sum.constant = w.sub(sum.constant, w.mul(t.coeff, k));
                sum.terms[i] = GenTerm {
                    coeff: t.coeff,
                    mask: full,
                    body: Expr::or(Expr::Const(k), t.body.clone()),
                };
                sum.terms.insert(
                    i + 1,
                    GenTerm {
                        coeff: t.coeff,
                        mask: k,
                        body: t.body,
                    },
                );
            } else {
                // x + k == (x^k) + 2*(x&k): m*B = m*(k^B) + 2m*(k&B) - m*k.
                sum.constant = w.sub(sum.constant, w.mul(t.coeff, k));
                sum.terms[i] = GenTerm {
                    coeff: t.coeff,
                    mask: full,
                    body: Expr::xor(Expr::Const(k), t.body.clone()),
                };
                sum.terms.insert(
                    i + 1,
                    GenTerm {
                        coeff: w.mul(t.coeff, 2),
                        mask: k,
                        body: t.body,
                    },
                );
            }
        }
        Rule::CoeffInflate => {
            let idxs: Vec<usize> = (0..sum.terms.len())
                .filter(|&i| sum.terms[i].mask != 0 && sum.terms[i].mask.trailing_zeros() >= 1)
                .collect();
            let i = pick_term(rng, &idxs);
            let t = sum.terms[i].clone();
            let i0 = t.mask.trailing_zeros();
            let step = w.bits() - i0.min(w.bits());
            if step >= w.bits() {
                return;
            }
            let r = rng.gen_range(1..=3u64);
            let new = w.add(t.coeff, w.reduce(r << step));
            if new != t.coeff {
                debug_assert!(can_change_coefficient_to(w, t.coeff, new, t.mask));
                sum.terms[i].coeff = new;
            }
        }
        Rule::MaskInflate => {
            let idxs: Vec<usize> = (0..sum.terms.len())
                .filter(|&i| {
                    let t = &sum.terms[i];
                    let tz = t.coeff.trailing_zeros();
                    t.coeff != 0
                        && tz > 0
                        && ((w.bits() - tz.min(w.bits()))..w.bits()).any(|b| t.mask >> b & 1 == 0)
                })
                .collect();
            let i = pick_term(rng, &idxs);
            let t = sum.terms[i].clone();
            let tz = t.coeff.trailing_zeros().min(w.bits());
            let dead: Vec<u32> = ((w.bits() - tz)..w.bits())
                .filter(|&b| t.mask >> b & 1 == 0)
                .collect();
            let add = dead[rng.gen_range(0..dead.len())];
            let new_mask = t.mask | 1u64 << add;
            debug_assert!(can_change_mask_to(w, t.coeff, t.mask, new_mask));
            sum.terms[i].mask = new_mask;
        }
    }
}

/// Apply `steps` seeded semantics-preserving rewrites to the ground truth,
/// verify with the random oracle, and emit a record. Verification failure
/// retries with a derived seed.
pub fn obfuscate(spec: &GenSpec) -> Result<GenOutcome, Error> {
    if spec.steps == 0 {
        return Err(Error::Generation("steps must be at least 1".to_string()));
    }
    if spec.vars > 4 {
        return Err(Error::Generation(
            "at most 4 variables are supported".to_string(),
        ));
    }
    let w = spec.width;
    match classify(&spec.ground_truth, w) {
        MbaClass::Linear | MbaClass::SemiLinear => {}
        MbaClass::Nonlinear => {
            return Err(Error::Generation(
                "ground truth must be linear or semi-linear".to_string(),
            ))
        }
    }
    let gt_vars = spec.ground_truth.variables();
    if spec.vars < gt_vars.len() {
        return Err(Error::Generation(format!(
            "ground truth uses {} variables but the target is {}",
            gt_vars.len(),
            spec.vars
        )));
    }
    let names = fresh_names(&gt_vars, spec.vars);
    let fresh: Vec<String> = names[gt_vars.len()..].to_vec();
    if spec.steps < fresh.len() {
        return Err(Error::Generation(format!(
            "need at least {} steps to introduce {} fresh variables",
            fresh.len(),
            fresh.len()
        )));
    }

    let mut last_err = String::new();
    for attempt in 1..=8u32 {
        let seed = spec
            .seed
            .wrapping_add((attempt as u64 - 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut rng = StdRng::seed_from_u64(seed);
        let expr = obfuscate_once(spec, &names, &fresh, &mut rng)?;
        let report = random_equiv(&expr, &spec.ground_truth, w, 32, seed);
        match report.verdict {
            Verdict::Equivalent => {
                if expr.node_count() <= spec.ground_truth.node_count() {
                    last_err = "rewrites did not grow the expression".to_string();
                    continue;
                }
                return Ok(GenOutcome {
                    record: DatasetRecord {
                        obfuscated: expr.to_string(),
                        ground_truth: spec.ground_truth.to_string(),
                        width: w,
                        vars: spec.vars,
                    },
                    attempts: attempt,
                });
            }
            _ => {
                last_err = "generated expression failed oracle verification".to_string();
            }
        }
    }
    Err(Error::Generation(format!(
        "gave up after 8 attempts: {last_err}"
    )))
}

fn obfuscate_once(
    spec: &GenSpec,
    names: &[String],
    fresh: &[String],
    rng: &mut StdRng,
) -> Result<Expr, Error> {
    let w = spec.width;
    let mut sum = GenSum {
        width: w,
        constant: 0,
        terms: Vec::new(),
    };
    decompose(&spec.ground_truth, 1, &mut sum)?;
    if sum.terms.is_empty() {
        return Err(Error::Generation(
            "ground truth has no variable-bearing terms".to_string(),
        ));
    }

    for step in 0..spec.steps {
        sum.cleanup();
        if sum.terms.is_empty() {
            break;
        }
        if step < fresh.len() {
            // Forced variable splits until the target variable count is hit.
            let idxs: Vec<usize> = (0..sum.terms.len()).collect();
            let i = pick_term(rng, &idxs);
            let v = Expr::var(&fresh[step]);
            let t = sum.terms[i].clone();
            sum.terms[i] = GenTerm {
                coeff: t.coeff,
                mask: t.mask,
                body: Expr::and(t.body.clone(), v.clone()),
            };
            sum.terms.insert(
                i + 1,
                GenTerm {
                    coeff: t.coeff,
                    mask: t.mask,
                    body: Expr::and(t.body, Expr::not(v)),
                },
            );
            continue;
        }
        let pool: &[Rule] = if step == 0 { &GROWING } else { &ALL };
        let applicable: Vec<Rule> = pool
            .iter()
            .copied()
            .filter(|&r| rule_applicable(r, &sum, w))
            .collect();
        if applicable.is_empty() {
            return Err(Error::Generation("no applicable rewrite rule".to_string()));
        }
        let rule = applicable[rng.gen_range(0..applicable.len())];
        apply_rule(rule, &mut sum, rng, names);
    }
    sum.cleanup();
    Ok(sum.to_expr())
}

/// The five stand-in ground-truth classes used for the desk-scale benchmark;
/// node counts 3, 1, 5, 7, 4.
pub fn benchmark_ground_truths() -> Vec<(&'static str, Expr)> {
    vec![
        ("e1", Expr::add(Expr::var("x"), Expr::var("y"))),
        ("e2", Expr::var("x")),
        (
            "e3",
            Expr::or(Expr::and(Expr::var("x"), Expr::var("y")), Expr::var("z")),
        ),
        (
            "e4",
            Expr::add(
                Expr::xor(Expr::var("x"), Expr::var("y")),
                Expr::and(Expr::var("x"), Expr::var("z")),
            ),
        ),
        ("e5", Expr::not(Expr::or(Expr::var("x"), Expr::var("y")))),
    ]
}

/// Write `count` obfuscated records to `path` in the dataset format, one
/// record seed derived per index. Byte-identical output for equal inputs.
pub fn gen_dataset(count: usize, template: &GenSpec, path: &Path) -> Result<u32, Error> {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "# width={} vars={}",
        template.width.bits(),
        template.vars
    );
    let mut retries = 0u32;
    for i in 0..count {
        let spec = GenSpec {
            seed: template.seed.wrapping_add(i as u64),
            ..template.clone()
        };
        let out = obfuscate(&spec)?;
        retries += out.attempts - 1;
        let _ = writeln!(
            text,
            "{},{}",
            out.record.obfuscated, out.record.ground_truth
        );
    }
    fs::write(path, text).map_err(|e| Error::Dataset {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(retries)
}

/// Contents of a dataset file.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub width: Width,
    pub vars: usize,
    /// `(obfuscated, ground_truth)` pairs.
    pub records: Vec<(String, String)>,
}

/// Parse a dataset file: a `# width=W vars=T` header, `#` comments, and
/// `obfuscated,ground_truth` records.
pub fn read_dataset(path: &Path) -> Result<Dataset, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Dataset {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let bad = |message: &str| Error::Dataset {
        path: path.display().to_string(),
        message: message.to_string(),
    };
    let mut width = None;
    let mut vars = 0usize;
    let mut records = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if width.is_none() {
                for part in rest.split_whitespace() {
                    if let Some(v) = part.strip_prefix("width=") {
                        let bits: u32 = v.parse().map_err(|_| bad("bad width in header"))?;
                        width = Some(Width::new(bits)?);
                    } else if let Some(v) = part.strip_prefix("vars=") {
                        vars = v.parse().map_err(|_| bad("bad vars in header"))?;
                    }
                }
            }
            continue;
        }
        let (obf, gt) = line
            .split_once(',')
            .ok_or_else(|| bad("record is not `obfuscated,ground_truth`"))?;
        records.push((obf.to_string(), gt.to_string()));
    }
    let width = width.ok_or_else(|| bad("missing `# width=.. vars=..` header"))?;
    Ok(Dataset {
        width,
        vars,
        records,
    })
}
