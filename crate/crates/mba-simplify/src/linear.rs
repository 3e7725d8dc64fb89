//! Staged search for compact linear combinations matching a signature
//! vector, plus the refinement passes (variable influence/partitioning and
//! negation detection at materialization).

use crate::ast::{Expr, Width};
use crate::boolfunc::{materialize, BoolFunc};
use crate::signature::SignatureVector;

/// Linear combination `constant + sum coeff * func(x)`, each func materialized
/// as a full-width bitwise expression. No zero coefficients, no duplicate
/// funcs, and every func maps the all-zeros point to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinComb {
    pub constant: u64,
    pub terms: Vec<(u64, BoolFunc)>,
}

impl LinComb {
    fn normalized(mut self, modw: Width) -> LinComb {
        self.terms.sort_by_key(|(_, f)| *f);
        let mut terms: Vec<(u64, BoolFunc)> = Vec::new();
        for (c, f) in self.terms {
            let c = modw.reduce(c);
            if let Some(last) = terms.last_mut() {
                if last.1 == f {
                    last.0 = modw.add(last.0, c);
                    continue;
                }
            }
            terms.push((c, f));
        }
        terms.retain(|(c, f)| *c != 0 && !f.is_zero());
        debug_assert!(terms.iter().all(|(_, f)| !f.get(0)));
        LinComb {
            constant: self.constant,
            terms,
        }
    }

    /// Sum of the terms at corner `j` (the constant is excluded; it tracks
    /// the vector offset, not the adjusted entries).
    fn term_sum(&self, j: usize, modw: Width) -> u64 {
        let mut acc = 0u64;
        for (c, f) in &self.terms {
            if f.get(j) {
                acc = modw.add(acc, *c);
            }
        }
        acc
    }

    fn matches(&self, entries: &[u64], modw: Width) -> bool {
        entries
            .iter()
            .enumerate()
            .all(|(j, &v)| self.term_sum(j, modw) == v)
    }
}

fn var_count(entries: &[u64]) -> usize {
    debug_assert!(entries.len().is_power_of_two());
    entries.len().trailing_zeros() as usize
}

/// Find a linear combination whose term sum matches the adjusted vector
/// (entry 0 must be zero). Stages, first success wins:
///
/// (a) a single term `c*f`;
/// (b) two terms over plain variables, `a*x + b*y`;
/// (c) two arbitrary terms `c1*f1 + c2*f2`;
/// (d) a single pure-bitwise factor (subsumed by (a) on an adjusted vector,
///     kept as the table-lookup path for clarity);
/// (e) the conjunction-basis decomposition, which always succeeds.
///
/// Ties inside a stage break on the lexicographically smallest truth table.
pub fn find_linear_combination(entries: &[u64], modw: Width) -> LinComb {
    assert!(entries.len().is_power_of_two());
    assert_eq!(entries[0], 0, "offset must be subtracted first");
    let lc = stage_one_term(entries, modw)
        .or_else(|| stage_two_variables(entries, modw))
        .or_else(|| stage_two_terms(entries, modw))
        .or_else(|| stage_pure_bitwise(entries, modw))
        .unwrap_or_else(|| stage_conjunction_basis(entries));
    let lc = lc.normalized(modw);
    assert!(
        lc.matches(entries, modw),
        "solver produced a non-matching combination"
    );
    lc
}

fn stage_one_term(entries: &[u64], modw: Width) -> Option<LinComb> {
    let t = var_count(entries);
    let c = entries.iter().copied().find(|&e| e != 0)?;
    let mut f = BoolFunc::constant(t, false);
    for (j, &v) in entries.iter().enumerate() {
        if v == c {
            f.set(j, true);
        } else if v != 0 {
            return None;
        }
    }
    Some(LinComb {
        constant: 0,
        terms: vec![(modw.reduce(c), f)],
    })
}

fn stage_two_variables(entries: &[u64], modw: Width) -> Option<LinComb> {
    let t = var_count(entries);
    for k1 in 0..t {
        for k2 in k1 + 1..t {
            let a = entries[1 << k1];
            let b = entries[1 << k2];
            if a == 0 || b == 0 {
                continue;
            }
            let ok = entries.iter().enumerate().all(|(j, &v)| {
                let mut s = 0u64;
                if j >> k1 & 1 == 1 {
                    s = modw.add(s, a);
                }
                if j >> k2 & 1 == 1 {
                    s = modw.add(s, b);
                }
                s == v
            });
            if ok {
                return Some(LinComb {
                    constant: 0,
                    terms: vec![(a, BoolFunc::var(t, k1)), (b, BoolFunc::var(t, k2))],
                });
            }
        }
    }
    None
}

// Candidate shapes for splitting the ambiguous points of an equal-coefficient
// two-term solution: plain variables, two-variable combinations, and small
// positive conjunctions.
fn split_candidates(t: usize) -> Vec<BoolFunc> {
    let mut out = Vec::new();
    for k in 0..t {
        out.push(BoolFunc::var(t, k));
    }
    for k1 in 0..t {
        for k2 in k1 + 1..t {
            let a = BoolFunc::var(t, k1);
            let b = BoolFunc::var(t, k2);
            out.push(BoolFunc::from_fn(t, |j| a.get(j) & b.get(j)));
            out.push(BoolFunc::from_fn(t, |j| a.get(j) | b.get(j)));
            out.push(BoolFunc::from_fn(t, |j| a.get(j) ^ b.get(j)));
            out.push(BoolFunc::from_fn(t, |j| a.get(j) & !b.get(j)));
            out.push(BoolFunc::from_fn(t, |j| !a.get(j) & b.get(j)));
        }
    }
    if t <= 4 {
        for set in 0..1usize << t {
            if set.count_ones() >= 3 {
                out.push(BoolFunc::from_fn(t, |j| j & set == set));
            }
        }
    }
    out
}

fn stage_two_terms(entries: &[u64], modw: Width) -> Option<LinComb> {
    let t = var_count(entries);
    let mut distinct: Vec<u64> = entries.iter().copied().filter(|&v| v != 0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.is_empty() || distinct.len() > 3 {
        return None;
    }
    let dummy: Vec<String> = (0..t).map(|k| format!("v{k}")).collect();
    for &c1 in &distinct {
        for &c2 in &distinct {
            if c1 == c2 {
                // Equal coefficients: points with value c may land in either
                // term. Try catalog shapes for the first term and keep the
                // cheapest materialization.
                let double = modw.add(c1, c1);
                if !entries.iter().all(|&v| v == 0 || v == c1 || v == double) {
                    continue;
                }
                let mut best: Option<(usize, LinComb)> = None;
                let mut consider = |f1: BoolFunc| {
                    let ok = entries.iter().enumerate().all(|(j, &v)| {
                        if v == double && double != c1 && double != 0 {
                            f1.get(j)
                        } else if v == 0 {
                            !f1.get(j)
                        } else {
                            true
                        }
                    });
                    if !ok {
                        return;
                    }
                    let f2 = BoolFunc::from_fn(t, |j| {
                        let v = entries[j];
                        (v == double && double != 0 && double != c1) || (v == c1 && !f1.get(j))
                    });
                    let cand = LinComb {
                        constant: 0,
                        terms: vec![(c1, f1), (c1, f2)],
                    };
                    if !cand.matches(entries, modw) {
                        return;
                    }
                    let cost = materialize(&f1, &dummy, modw).node_count()
                        + materialize(&f2, &dummy, modw).node_count();
                    if best.as_ref().is_none_or(|(bc, _)| cost < *bc) {
                        best = Some((cost, cand));
                    }
                };
                // Defaults first: all ambiguous points to one side.
                consider(BoolFunc::from_fn(t, |j| entries[j] != 0));
                consider(BoolFunc::from_fn(t, |j| {
                    entries[j] == double && double != 0 && double != c1
                }));
                for f1 in split_candidates(t) {
                    consider(f1);
                }
                if let Some((_, lc)) = best {
                    return Some(lc);
                }
            } else {
                let sum = modw.add(c1, c2);
                let mut f1 = BoolFunc::constant(t, false);
                let mut f2 = BoolFunc::constant(t, false);
                let mut ok = true;
                for (j, &v) in entries.iter().enumerate() {
                    if v == 0 {
                        continue;
                    } else if v == c1 {
                        f1.set(j, true);
                    } else if v == c2 {
                        f2.set(j, true);
                    } else if v == sum {
                        f1.set(j, true);
                        f2.set(j, true);
                    } else {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let cand = LinComb {
                    constant: 0,
                    terms: vec![(c1, f1), (c2, f2)],
                };
                if cand.matches(entries, modw) {
                    return Some(cand);
                }
            }
        }
    }
    None
}

// On an adjusted vector a single bitwise factor coincides with stage (a);
// the stage stays as the explicit table-lookup path.
fn stage_pure_bitwise(entries: &[u64], modw: Width) -> Option<LinComb> {
    stage_one_term(entries, modw)
}

fn stage_conjunction_basis(entries: &[u64]) -> LinComb {
    let t = var_count(entries);
    let mut terms = Vec::new();
    for (j, &v) in entries.iter().enumerate().skip(1) {
        if v != 0 {
            let mut f = BoolFunc::constant(t, false);
            f.set(j, true);
            terms.push((v, f));
        }
    }
    LinComb { constant: 0, terms }
}

fn project(entries: &[u64], keep: &[usize]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << keep.len());
    for j in 0..1usize << keep.len() {
        let mut full = 0usize;
        for (i, &k) in keep.iter().enumerate() {
            full |= (j >> i & 1) << k;
        }
        out.push(entries[full]);
    }
    out
}

fn influencing_vars(entries: &[u64]) -> Vec<usize> {
    let t = var_count(entries);
    (0..t)
        .filter(|&k| (0..entries.len()).any(|j| entries[j] != entries[j ^ (1 << k)]))
        .collect()
}

// Union-find over variables coupled by a nonzero mixed second difference;
// variables in different components contribute additively.
fn coupled_components(entries: &[u64], vars: &[usize], modw: Width) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..vars.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..vars.len() {
        for b in a + 1..vars.len() {
            let (ka, kb) = (vars[a], vars[b]);
            let coupled = (0..entries.len()).any(|j| {
                if j >> ka & 1 == 1 || j >> kb & 1 == 1 {
                    return false;
                }
                let f00 = entries[j];
                let f10 = entries[j | 1 << ka];
                let f01 = entries[j | 1 << kb];
                let f11 = entries[j | 1 << ka | 1 << kb];
                modw.sub(modw.add(f11, f00), modw.add(f10, f01)) != 0
            });
            if coupled {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    for (i, &v) in vars.iter().enumerate() {
        let r = root(&mut parent, i);
        groups[r].push(v);
    }
    groups.retain(|g| !g.is_empty());
    groups.sort();
    groups
}

/// Refinement: drop variables without influence and split the vector into
/// independent additive sub-vectors, re-solving each piece. The result still
/// matches the vector and the materialized node count never increases.
pub fn refine(lc: LinComb, entries: &[u64], modw: Width) -> LinComb {
    let t = var_count(entries);
    let dummy: Vec<String> = (0..t).map(|k| format!("v{k}")).collect();
    let infl = influencing_vars(entries);
    let mut best = lc.normalized(modw);
    debug_assert!(best.matches(entries, modw));

    let candidate = if infl.len() == t && coupled_components(entries, &infl, modw).len() <= 1 {
        None
    } else {
        let groups = coupled_components(entries, &infl, modw);
        let mut terms: Vec<(u64, BoolFunc)> = Vec::new();
        let mut valid = true;
        for group in &groups {
            let sub = project(entries, group);
            let sub_lc = find_linear_combination(&sub, modw);
            for (c, f) in sub_lc.terms {
                terms.push((c, f.lift(group, t)));
            }
        }
        let cand = LinComb {
            constant: best.constant,
            terms,
        }
        .normalized(modw);
        if !cand.matches(entries, modw) {
            valid = false;
        }
        valid.then_some(cand)
    };

    if let Some(cand) = candidate {
        let cost_new = materialize_lincomb(&cand, &dummy, modw).node_count();
        let cost_old = materialize_lincomb(&best, &dummy, modw).node_count();
        if cost_new <= cost_old {
            best = cand;
        }
    }
    assert!(best.matches(entries, modw));
    best
}

/// Build the sum `constant + sum coeff*piece` with subtraction for negative
/// coefficients. Shared by every materialization path so output forms stay
/// consistent.
pub(crate) fn build_sum(width: Width, constant: u64, pieces: Vec<(u64, Expr)>) -> Expr {
    let mut acc: Option<Expr> = if constant != 0 {
        Some(Expr::Const(constant))
    } else {
        None
    };
    for (c, piece) in pieces {
        let c = width.reduce(c);
        if c == 0 {
            continue;
        }
        let (subtract, body) = if c == 1 {
            (false, piece)
        } else if c == width.mask() {
            (true, piece)
        } else if width.is_negative(c) {
            let n = width.neg(c);
            let body = if n == 1 {
                piece
            } else {
                Expr::mul(Expr::Const(n), piece)
            };
            (true, body)
        } else {
            (false, Expr::mul(Expr::Const(c), piece))
        };
        acc = Some(match (acc, subtract) {
            (None, false) => body,
            (None, true) => Expr::neg(body),
            (Some(a), false) => Expr::add(a, body),
            (Some(a), true) => Expr::sub(a, body),
        });
    }
    acc.unwrap_or(Expr::Const(0))
}

fn lincomb_direct(lc: &LinComb, vars: &[String], width: Width) -> Expr {
    let pieces = lc
        .terms
        .iter()
        .map(|(c, f)| (*c, materialize(f, vars, width)))
        .collect();
    build_sum(width, lc.constant, pieces)
}

/// Materialize a combination, also trying the complemented form
/// `~((-1-K) + sum -c*f)` (simple negation detection) and, when the constant
/// equals some coefficient, the fold `K + K*F == -K*~F`. The smallest tree
/// wins; ties keep the direct form.
pub fn materialize_lincomb(lc: &LinComb, vars: &[String], width: Width) -> Expr {
    let lc = lc.clone().normalized(width);
    let direct = lincomb_direct(&lc, vars, width);
    if lc.terms.is_empty() {
        return direct;
    }
    let mut candidates = vec![direct];

    let inner = LinComb {
        constant: width.not(lc.constant),
        terms: lc.terms.iter().map(|(c, f)| (width.neg(*c), *f)).collect(),
    }
    .normalized(width);
    candidates.push(Expr::not(lincomb_direct(&inner, vars, width)));

    if lc.constant != 0 {
        if let Some(fold_at) = lc.terms.iter().position(|(c, _)| *c == lc.constant) {
            let pieces = lc
                .terms
                .iter()
                .enumerate()
                .map(|(i, (c, f))| {
                    if i == fold_at {
                        (width.neg(*c), Expr::not(materialize(f, vars, width)))
                    } else {
                        (*c, materialize(f, vars, width))
                    }
                })
                .collect();
            candidates.push(build_sum(width, 0, pieces));
        }
    }

    let best = candidates
        .iter()
        .map(Expr::node_count)
        .enumerate()
        .min_by_key(|&(i, n)| (n, i))
        .map(|(i, _)| i)
        .expect("at least the direct form");
    candidates.swap_remove(best)
}

/// Simplify a signature vector into an expression with the same vector.
pub fn simplify_linear(v: &SignatureVector) -> Expr {
    let (offset, adj) = v.subtract_offset();
    if adj.entries.iter().all(|&e| e == 0) {
        return Expr::Const(offset);
    }
    let mut lc = find_linear_combination(&adj.entries, v.width);
    lc.constant = offset;
    let lc = refine(lc, &adj.entries, v.width);
    materialize_lincomb(&lc, &v.vars, v.width)
}
