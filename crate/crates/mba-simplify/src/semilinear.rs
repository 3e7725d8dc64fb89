//! Semi-linear simplification: per-bit solutions from the signature matrix
//! followed by term merging, structure recovery, and a 1-bit-space retry
//! with substituted mask constants. The cheapest candidate wins.

use std::collections::BTreeMap;

use crate::ast::{classify, fold_constants, Expr, MbaClass, Width};
use crate::boolfunc::{materialize, BoolFunc};
use crate::error::Error;
use crate::linear::{build_sum, find_linear_combination, simplify_linear};
use crate::signature::{
    linear_signature, linear_signature_over, row_modulus, semilinear_matrix,
    shortcut_linear_candidate, AdjustedMatrix, MAX_VARS,
};

/// Budgets for the 1-bit-space substitution stage.
#[derive(Debug, Clone, Copy)]
pub struct SimplifyOptions {
    /// Most fresh variables the mask substitution may introduce.
    pub max_subst_vars: usize,
    /// Cap on original + fresh variables handed to the linear solver.
    pub max_total_vars: usize,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions {
            max_subst_vars: 6,
            max_total_vars: MAX_VARS,
        }
    }
}

/// `coeff * (mask & F(x))` where `F` is the func materialized full-width.
/// A mask of 2^w - 1 encodes "no mask".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskedTerm {
    pub coeff: u64,
    pub mask: u64,
    pub func: BoolFunc,
}

/// `constant + sum of masked terms`, terms sorted by (func, mask).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedSum {
    pub width: Width,
    pub vars: Vec<String>,
    pub constant: u64,
    pub terms: Vec<MaskedTerm>,
}

impl MaskedSum {
    fn normalized(mut self) -> MaskedSum {
        let w = self.width;
        for t in &mut self.terms {
            t.coeff = w.reduce(t.coeff);
            t.mask = w.reduce(t.mask);
        }
        self.terms.sort_by_key(|t| (t.func, t.mask));
        let mut terms: Vec<MaskedTerm> = Vec::new();
        for t in self.terms {
            if let Some(last) = terms.last_mut() {
                if last.func == t.func && last.mask == t.mask {
                    last.coeff = w.add(last.coeff, t.coeff);
                    continue;
                }
            }
            terms.push(t);
        }
        terms.retain(|t| t.coeff != 0 && t.mask != 0 && !t.func.is_zero());
        self.terms = terms;
        self
    }

    /// Evaluate at concrete variable values (test support).
    pub fn value(&self, values: &[u64]) -> u64 {
        let w = self.width;
        let mut acc = self.constant;
        for t in &self.terms {
            let f = t.func.eval_bitwise(values, w);
            acc = w.add(acc, w.mul(t.coeff, t.mask & f));
        }
        acc
    }

    pub fn to_expr(&self) -> Expr {
        let w = self.width;
        let pieces = self
            .terms
            .iter()
            .map(|t| {
                let f = materialize(&t.func, &self.vars, w);
                let piece = if t.mask == w.mask() {
                    f
                } else {
                    Expr::and(Expr::Const(t.mask), f)
                };
                (t.coeff, piece)
            })
            .collect();
        build_sum(w, self.constant, pieces)
    }
}

/// True iff `old*(mask&x)` can be rewritten to `new*(mask&x)`: the two
/// coefficients agree on every single-bit value of the mask.
pub fn can_change_coefficient_to(width: Width, old: u64, new: u64, mask: u64) -> bool {
    for i in 0..width.bits() {
        let value = 1u64 << i;
        if width.mul(old, value & mask) != width.mul(new, value & mask) {
            return false;
        }
    }
    true
}

/// True iff `coeff*(old_mask&x)` can be rewritten to `coeff*(new_mask&x)`.
pub fn can_change_mask_to(width: Width, coeff: u64, old_mask: u64, new_mask: u64) -> bool {
    for i in 0..width.bits() {
        let value = 1u64 << i;
        if width.mul(coeff, value & old_mask) != width.mul(coeff, value & new_mask) {
            return false;
        }
    }
    true
}

fn coalesce_masks(
    width: Width,
    vars: &[String],
    constant: u64,
    mut terms: Vec<MaskedTerm>,
) -> MaskedSum {
    // OR together the single-bit masks of terms sharing coefficient and func.
    terms.sort_by_key(|t| (t.func, t.coeff, t.mask));
    let mut out: Vec<MaskedTerm> = Vec::new();
    for t in terms {
        if let Some(last) = out.last_mut() {
            if last.func == t.func && last.coeff == t.coeff {
                debug_assert_eq!(last.mask & t.mask, 0);
                last.mask |= t.mask;
                continue;
            }
        }
        out.push(t);
    }
    MaskedSum {
        width,
        vars: vars.to_vec(),
        constant,
        terms: out,
    }
    .normalized()
}

/// Initial semi-linear solution: solve each bit row independently with the
/// linear-combination search, tag terms with the bit mask, and coalesce.
pub fn per_bit_solution(adj: &AdjustedMatrix) -> MaskedSum {
    let w = adj.width;
    let mut terms = Vec::new();
    for (i, row) in adj.rows.iter().enumerate() {
        if row.iter().all(|&e| e == 0) {
            continue;
        }
        let modw = row_modulus(w, i);
        let lc = find_linear_combination(row, modw);
        for (c, f) in lc.terms {
            terms.push(MaskedTerm {
                coeff: c,
                mask: 1u64 << i,
                func: f,
            });
        }
    }
    coalesce_masks(w, &adj.vars, adj.offset, terms)
}

/// Conjunction-basis solution: each nonzero matrix entry becomes one term
/// over the basis conjunction of its column. Preserves the exact mask
/// structure of the input, which the substitution stage depends on.
pub fn conjunction_solution(adj: &AdjustedMatrix) -> MaskedSum {
    let w = adj.width;
    let t = adj.vars.len();
    let mut terms = Vec::new();
    for (i, row) in adj.rows.iter().enumerate() {
        for (j, &c) in row.iter().enumerate().skip(1) {
            if c == 0 {
                continue;
            }
            let mut f = BoolFunc::constant(t, false);
            f.set(j, true);
            terms.push(MaskedTerm {
                coeff: c,
                mask: 1u64 << i,
                func: f,
            });
        }
    }
    coalesce_masks(w, &adj.vars, adj.offset, terms)
}

/// Merge pass over terms sharing a basis func, iterated to a fixpoint:
/// (1) equal-coefficient merge (rewriting one mask when the pair overlaps
/// only in dead bits), (2) coefficient change then merge, (3) drop terms
/// whose coefficient can change to zero, (4) prefer -1 coefficients where
/// that pays, (5) step 2 again, (6) three-term split when two coefficients
/// sum to the third and all masks are disjoint.
pub fn merge_terms(s: &MaskedSum) -> MaskedSum {
    let w = s.width;
    let mut s = s.clone().normalized();
    loop {
        let before = s.clone();

        // Rule 1.
        loop {
            let mut fired = false;
            'scan1: for i in 0..s.terms.len() {
                for j in i + 1..s.terms.len() {
                    let (a, b) = (s.terms[i], s.terms[j]);
                    if a.func != b.func || a.coeff != b.coeff {
                        continue;
                    }
                    let mergeable = a.mask & b.mask == 0
                        || can_change_mask_to(w, a.coeff, a.mask, a.mask & !b.mask)
                        || can_change_mask_to(w, b.coeff, b.mask, b.mask & !a.mask);
                    if mergeable {
                        s.terms[i].mask = a.mask | b.mask;
                        s.terms.remove(j);
                        s = s.normalized();
                        fired = true;
                        break 'scan1;
                    }
                }
            }
            if !fired {
                break;
            }
        }

        // Rules 2 and 5 share this pass.
        let rule2 = |s: &mut MaskedSum| loop {
            let mut fired = false;
            'scan2: for i in 0..s.terms.len() {
                for j in 0..s.terms.len() {
                    if i == j {
                        continue;
                    }
                    let (a, b) = (s.terms[i], s.terms[j]);
                    if a.func != b.func || a.coeff == b.coeff || a.mask & b.mask != 0 {
                        continue;
                    }
                    if can_change_coefficient_to(w, b.coeff, a.coeff, b.mask) {
                        s.terms[i].mask = a.mask | b.mask;
                        s.terms.remove(j);
                        *s = s.clone().normalized();
                        fired = true;
                        break 'scan2;
                    }
                }
            }
            if !fired {
                break;
            }
        };
        rule2(&mut s);

        // Rule 3.
        s.terms
            .retain(|t| !can_change_coefficient_to(w, t.coeff, 0, t.mask));

        // Rule 4: only when it enables a merge or drops a multiplication.
        for i in 0..s.terms.len() {
            let t = s.terms[i];
            if t.coeff == w.mask() || !can_change_coefficient_to(w, t.coeff, w.mask(), t.mask) {
                continue;
            }
            let enables_merge = s.terms.iter().enumerate().any(|(j, o)| {
                j != i
                    && o.func == t.func
                    && o.mask & t.mask == 0
                    && (o.coeff == w.mask()
                        || can_change_coefficient_to(w, o.coeff, w.mask(), o.mask))
            });
            if t.coeff != 1 || enables_merge {
                s.terms[i].coeff = w.mask();
            }
        }
        s = s.normalized();

        rule2(&mut s);

        // Rule 6.
        loop {
            let mut fired = false;
            'scan6: for i in 0..s.terms.len() {
                for j in i + 1..s.terms.len() {
                    for k in j + 1..s.terms.len() {
                        let (a, b, c) = (s.terms[i], s.terms[j], s.terms[k]);
                        if a.func != b.func || b.func != c.func {
                            continue;
                        }
                        if a.mask & b.mask != 0 || a.mask & c.mask != 0 || b.mask & c.mask != 0 {
                            continue;
                        }
                        // Which term carries the summed coefficient?
                        let perms = [(i, j, k), (i, k, j), (j, k, i)];
                        for (x, y, z) in perms {
                            let (tx, ty, tz) = (s.terms[x], s.terms[y], s.terms[z]);
                            if w.add(tx.coeff, ty.coeff) == tz.coeff {
                                s.terms[x].mask = tx.mask | tz.mask;
                                s.terms[y].mask = ty.mask | tz.mask;
                                s.terms.remove(z);
                                s = s.normalized();
                                fired = true;
                                break 'scan6;
                            }
                        }
                    }
                }
            }
            if !fired {
                break;
            }
        }

        s = s.normalized();
        if s == before {
            return s;
        }
    }
}

/// A term of the recovered form: still `coeff * body`, but the body may be
/// an XOR with a constant, a bare func, or an arbitrary rewritten expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecBody {
    Masked { mask: u64, func: BoolFunc },
    MaskXor { mask: u64, func: BoolFunc },
    Plain { func: BoolFunc },
    Raw(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecTerm {
    pub coeff: u64,
    pub body: RecBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredSum {
    pub width: Width,
    pub vars: Vec<String>,
    pub constant: u64,
    pub terms: Vec<RecTerm>,
}

impl RecoveredSum {
    pub fn to_expr(&self) -> Expr {
        let w = self.width;
        let mut ordered: Vec<&RecTerm> = self.terms.iter().collect();
        ordered.sort_by_key(|t| body_key(&t.body));
        let pieces = ordered
            .into_iter()
            .map(|t| {
                let piece = match &t.body {
                    RecBody::Masked { mask, func } => {
                        Expr::and(Expr::Const(*mask), materialize(func, &self.vars, w))
                    }
                    RecBody::MaskXor { mask, func } => {
                        Expr::xor(Expr::Const(*mask), materialize(func, &self.vars, w))
                    }
                    RecBody::Plain { func } => materialize(func, &self.vars, w),
                    RecBody::Raw(e) => e.clone(),
                };
                (t.coeff, piece)
            })
            .collect();
        build_sum(w, self.constant, pieces)
    }
}

fn body_key(b: &RecBody) -> (u8, Option<BoolFunc>, u64, String) {
    match b {
        RecBody::Masked { mask, func } => (0, Some(*func), *mask, String::new()),
        RecBody::MaskXor { mask, func } => (0, Some(*func), *mask, String::new()),
        RecBody::Plain { func } => (0, Some(*func), u64::MAX, String::new()),
        RecBody::Raw(e) => (1, None, 0, e.to_string()),
    }
}

fn rec_nodes(s: &RecoveredSum) -> usize {
    s.to_expr().node_count()
}

/// Structure recovery over a merged masked sum: (1) collapse negated pairs
/// into XOR terms, (2) rewrite two-term groups so only one keeps a bitmask,
/// (3) repeat (1), (4) regroup same-func terms through the linear machinery,
/// (5) repeat (1). The node count never increases.
pub fn recover_structure(s: &MaskedSum) -> RecoveredSum {
    let w = s.width;
    let s = s.clone().normalized();
    let mut rec = RecoveredSum {
        width: w,
        vars: s.vars.clone(),
        constant: s.constant,
        terms: s
            .terms
            .iter()
            .map(|t| RecTerm {
                coeff: t.coeff,
                body: if t.mask == w.mask() {
                    RecBody::Plain { func: t.func }
                } else {
                    RecBody::Masked {
                        mask: t.mask,
                        func: t.func,
                    }
                },
            })
            .collect(),
    };

    xor_recovery(&mut rec);
    single_mask_rewrite(&mut rec);
    xor_recovery(&mut rec);
    regroup_same_func(&mut rec);
    xor_recovery(&mut rec);
    rec
}

// Rule 1: m1*(c1&F) + m2*(c2&F) with m2 = -m1 and c2 changeable to ~c1
// becomes m2*(c1 ^ F), folding m2*c1 out of the constant.
fn xor_recovery(rec: &mut RecoveredSum) {
    let w = rec.width;
    loop {
        let mut fired = false;
        'scan: for i in 0..rec.terms.len() {
            for j in 0..rec.terms.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (rec.terms[i].clone(), rec.terms[j].clone());
                let (
                    RecBody::Masked { mask: ca, func: fa },
                    RecBody::Masked { mask: cb, func: fb },
                ) = (&a.body, &b.body)
                else {
                    continue;
                };
                if fa != fb {
                    continue;
                }
                // `a` is the -m*(c&F) side, `b` the m*(~c&F) side.
                let m = b.coeff;
                if !can_change_coefficient_to(w, a.coeff, w.neg(m), *ca) {
                    continue;
                }
                if !can_change_mask_to(w, m, *cb, w.not(*ca)) {
                    continue;
                }
                let mut cand = rec.clone();
                cand.constant = w.sub(cand.constant, w.mul(m, *ca));
                cand.terms[i] = RecTerm {
                    coeff: m,
                    body: RecBody::MaskXor {
                        mask: *ca,
                        func: *fa,
                    },
                };
                cand.terms.remove(j);
                if rec_nodes(&cand) <= rec_nodes(rec) {
                    *rec = cand;
                    fired = true;
                    break 'scan;
                }
            }
        }
        if !fired {
            return;
        }
    }
}

// Rule 2: m1*(c1&F) + m2*(c2&F) -> (m1-m2)*(c1&F) + m2*F when every bit
// outside c1|c2 (and every doubly-counted bit of c1&c2) is dead for m2.
fn single_mask_rewrite(rec: &mut RecoveredSum) {
    let w = rec.width;
    loop {
        let mut fired = false;
        'scan: for i in 0..rec.terms.len() {
            for j in 0..rec.terms.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (rec.terms[i].clone(), rec.terms[j].clone());
                let (
                    RecBody::Masked { mask: ca, func: fa },
                    RecBody::Masked { mask: cb, func: fb },
                ) = (&a.body, &b.body)
                else {
                    continue;
                };
                if fa != fb {
                    continue;
                }
                let bad = !(ca | cb) | (ca & cb);
                if !can_change_mask_to(w, b.coeff, w.reduce(bad), 0) {
                    continue;
                }
                let mut cand = rec.clone();
                cand.terms[i].coeff = w.sub(a.coeff, b.coeff);
                cand.terms[j] = RecTerm {
                    coeff: b.coeff,
                    body: RecBody::Plain { func: *fb },
                };
                if cand.terms[i].coeff == 0 {
                    cand.terms.remove(i);
                }
                if rec_nodes(&cand) <= rec_nodes(rec) {
                    *rec = cand;
                    fired = true;
                    break 'scan;
                }
            }
        }
        if !fired {
            return;
        }
    }
}

// Rule 4: hand each same-func group to the single-variable pipeline (the
// shortcut plus linear solver, or another per-bit pass) and keep strictly
// simpler results.
fn regroup_same_func(rec: &mut RecoveredSum) {
    let w = rec.width;
    let mut by_func: BTreeMap<BoolFunc, Vec<usize>> = BTreeMap::new();
    for (i, t) in rec.terms.iter().enumerate() {
        match &t.body {
            RecBody::Masked { func, .. } | RecBody::Plain { func } => {
                by_func.entry(*func).or_default().push(i);
            }
            _ => {}
        }
    }
    let mut replacements: Vec<(Vec<usize>, Expr)> = Vec::new();
    for (func, idxs) in by_func {
        if idxs.len() < 2 {
            continue;
        }
        let group = MaskedSum {
            width: w,
            vars: vec!["u".to_string()],
            constant: 0,
            terms: idxs
                .iter()
                .map(|&i| {
                    let t = &rec.terms[i];
                    let (mask, coeff) = match &t.body {
                        RecBody::Masked { mask, .. } => (*mask, t.coeff),
                        RecBody::Plain { .. } => (w.mask(), t.coeff),
                        _ => unreachable!(),
                    };
                    MaskedTerm {
                        coeff,
                        mask,
                        func: BoolFunc::var(1, 0),
                    }
                })
                .collect(),
        }
        .normalized();
        let Some(simplified) = simplify_group(&group) else {
            continue;
        };
        let grouped_nodes: usize = group.to_expr().node_count();
        if simplified.node_count() >= grouped_nodes {
            continue;
        }
        let body = materialize(&func, &rec.vars, w);
        let replaced = simplified.substitute("u", &body);
        replacements.push((idxs, fold_constants(&replaced, w)));
    }
    for (idxs, expr) in replacements {
        let mut cand = rec.clone();
        for &i in idxs.iter().rev() {
            cand.terms.remove(i);
        }
        cand.terms.push(RecTerm {
            coeff: 1,
            body: RecBody::Raw(expr),
        });
        if rec_nodes(&cand) <= rec_nodes(rec) {
            *rec = cand;
        }
    }
}

// Single-variable semi-linear subproblem; never recurses into structure
// recovery.
fn simplify_group(group: &MaskedSum) -> Option<Expr> {
    let w = group.width;
    let e = group.to_expr();
    match classify(&e, w) {
        MbaClass::Linear => {
            let v = linear_signature(&e, w).ok()?;
            Some(simplify_linear(&v))
        }
        MbaClass::SemiLinear => {
            if let Ok(Some(cand)) = shortcut_linear_candidate(&e, w) {
                let v = linear_signature(&cand, w).ok()?;
                return Some(simplify_linear(&v));
            }
            let m = semilinear_matrix(&e, w).ok()?;
            let (_, adj) = m.subtract_offset();
            Some(merge_terms(&per_bit_solution(&adj)).to_expr())
        }
        MbaClass::Nonlinear => None,
    }
}

/// Last attempt in 1-bit space: express masks through two other masks where
/// possible, substitute fresh variables for the rest, solve the now-linear
/// expression, and substitute the constants back. `None` when the variable
/// budget is exceeded or nothing has a mask.
pub fn substitute_and_solve_1bit(s: &MaskedSum, opts: &SimplifyOptions) -> Option<Expr> {
    let w = s.width;
    let s = s.clone().normalized();
    let full = w.mask();
    let mut masks: Vec<u64> = s
        .terms
        .iter()
        .map(|t| t.mask)
        .filter(|&m| m != full)
        .collect();
    masks.sort_unstable();
    masks.dedup();
    if masks.is_empty() {
        return None;
    }

    // Try to express masks as ~a or as binary combinations of two masks that
    // stay base. Expressed masks need no fresh variable.
    #[derive(Clone, Copy)]
    enum Recipe {
        Not(u64),
        Or(u64, u64),
        And(u64, u64),
        Xor(u64, u64),
        AndNot(u64, u64),
    }
    let mut base: Vec<u64> = masks.clone();
    let mut recipes: BTreeMap<u64, Recipe> = BTreeMap::new();
    let mut pinned: Vec<u64> = Vec::new();
    loop {
        let mut fired = false;
        'outer: for idx in 0..base.len() {
            let m = base[idx];
            if pinned.contains(&m) {
                continue;
            }
            let others: Vec<u64> = base.iter().copied().filter(|&o| o != m).collect();
            for &a in &others {
                if w.not(a) == m {
                    recipes.insert(m, Recipe::Not(a));
                    base.remove(idx);
                    pinned.push(a);
                    fired = true;
                    break 'outer;
                }
            }
            for ai in 0..others.len() {
                for bi in ai + 1..others.len() {
                    let (a, b) = (others[ai], others[bi]);
                    let cands = [
                        (a | b, Recipe::Or(a, b)),
                        (a & b, Recipe::And(a, b)),
                        (a ^ b, Recipe::Xor(a, b)),
                        (a & w.not(b), Recipe::AndNot(a, b)),
                        (b & w.not(a), Recipe::AndNot(b, a)),
                    ];
                    for (v, r) in cands {
                        if v == m {
                            recipes.insert(m, r);
                            base.remove(idx);
                            pinned.push(a);
                            pinned.push(b);
                            fired = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !fired {
            break;
        }
    }

    let t = s.vars.len();
    if base.len() > opts.max_subst_vars || t + base.len() > opts.max_total_vars {
        return None;
    }

    // Fresh names for the base masks.
    let mut names: BTreeMap<u64, String> = BTreeMap::new();
    let mut next = 0usize;
    for &m in &base {
        let name = loop {
            let cand = format!("m{next}");
            next += 1;
            if !s.vars.contains(&cand) {
                break cand;
            }
        };
        names.insert(m, name);
    }
    let mask_expr = |m: u64| -> Expr {
        if let Some(n) = names.get(&m) {
            return Expr::var(n);
        }
        let var_of = |x: u64| Expr::var(names.get(&x).expect("recipe over base masks"));
        match recipes[&m] {
            Recipe::Not(a) => Expr::not(var_of(a)),
            Recipe::Or(a, b) => Expr::or(var_of(a), var_of(b)),
            Recipe::And(a, b) => Expr::and(var_of(a), var_of(b)),
            Recipe::Xor(a, b) => Expr::xor(var_of(a), var_of(b)),
            Recipe::AndNot(a, b) => Expr::and(var_of(a), Expr::not(var_of(b))),
        }
    };

    let pieces = s
        .terms
        .iter()
        .map(|term| {
            let f = materialize(&term.func, &s.vars, w);
            let piece = if term.mask == full {
                f
            } else {
                Expr::and(mask_expr(term.mask), f)
            };
            (term.coeff, piece)
        })
        .collect();
    let substituted = build_sum(w, s.constant, pieces);
    if classify(&substituted, w) != MbaClass::Linear {
        return None;
    }

    let mut all_vars = s.vars.clone();
    for &m in &base {
        all_vars.push(names[&m].clone());
    }
    let v = linear_signature_over(&substituted, &all_vars, w).ok()?;
    let mut result = simplify_linear(&v);
    for (&m, name) in &names {
        result = result.substitute(name, &Expr::Const(m));
    }
    Some(fold_constants(&result, w))
}

/// Lexicographic expression cost: AST nodes, then top-level additive terms,
/// then distinct nontrivial constants. Lower wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cost {
    pub nodes: usize,
    pub terms: usize,
    pub consts: usize,
}

fn count_terms(e: &Expr) -> usize {
    match e {
        Expr::Add(a, b) | Expr::Sub(a, b) => count_terms(a) + count_terms(b),
        Expr::Neg(a) => count_terms(a),
        _ => 1,
    }
}

pub fn cost(e: &Expr, width: Width) -> Cost {
    let consts = e
        .constants()
        .into_iter()
        .filter(|&c| c != 0 && c != width.mask())
        .count();
    Cost {
        nodes: e.node_count(),
        terms: count_terms(e),
        consts,
    }
}

/// Simplify a linear or semi-linear MBA. The result is equivalent modulo 2^w
/// and constant-folded; nonlinear inputs are rejected.
pub fn simplify(e: &Expr, width: Width) -> Result<Expr, Error> {
    simplify_with(e, width, &SimplifyOptions::default())
}

pub fn simplify_with(e: &Expr, width: Width, opts: &SimplifyOptions) -> Result<Expr, Error> {
    match classify(e, width) {
        MbaClass::Nonlinear => Err(Error::Nonlinear),
        MbaClass::Linear => {
            let v = linear_signature(e, width)?;
            Ok(fold_constants(&simplify_linear(&v), width))
        }
        MbaClass::SemiLinear => {
            if let Some(cand) = shortcut_linear_candidate(e, width)? {
                let v = linear_signature(&cand, width)?;
                return Ok(fold_constants(&simplify_linear(&v), width));
            }
            let m = semilinear_matrix(e, width)?;
            let (_, adj) = m.subtract_offset();
            let merged = merge_terms(&per_bit_solution(&adj));
            let cand_a = fold_constants(&recover_structure(&merged).to_expr(), width);
            let conj = conjunction_solution(&adj);
            let cand_b = substitute_and_solve_1bit(&conj, opts).map(|e| fold_constants(&e, width));
            Ok(match cand_b {
                Some(b) if cost(&b, width) < cost(&cand_a, width) => b,
                _ => cand_a,
            })
        }
    }
}
