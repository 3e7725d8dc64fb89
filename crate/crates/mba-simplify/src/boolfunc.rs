//! Truth-table boolean functions, Quine-McCluskey minimization, and
//! materialization into bitwise expression trees.

use crate::ast::{Expr, Width};

/// Hard cap on truth-table variables (table sizes up to 2^8 entries).
pub const MAX_FUNC_VARS: usize = 8;

/// Boolean function of up to [`MAX_FUNC_VARS`] variables stored as a truth
/// table. Entry `j` is the value at the assignment where variable `k` takes
/// bit `k` of `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoolFunc {
    nvars: u8,
    bits: [u64; 4],
}

impl BoolFunc {
    pub fn constant(nvars: usize, value: bool) -> BoolFunc {
        assert!(nvars <= MAX_FUNC_VARS);
        let mut f = BoolFunc {
            nvars: nvars as u8,
            bits: [0; 4],
        };
        if value {
            for j in 0..f.size() {
                f.set(j, true);
            }
        }
        f
    }

    pub fn from_fn(nvars: usize, f: impl Fn(usize) -> bool) -> BoolFunc {
        assert!(nvars <= MAX_FUNC_VARS);
        let mut out = BoolFunc {
            nvars: nvars as u8,
            bits: [0; 4],
        };
        for j in 0..out.size() {
            out.set(j, f(j));
        }
        out
    }

    /// The projection onto variable `k`.
    pub fn var(nvars: usize, k: usize) -> BoolFunc {
        assert!(k < nvars);
        BoolFunc::from_fn(nvars, |j| j >> k & 1 == 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn size(&self) -> usize {
        1 << self.nvars
    }

    pub fn get(&self, j: usize) -> bool {
        debug_assert!(j < self.size());
        self.bits[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, j: usize, v: bool) {
        debug_assert!(j < self.size());
        if v {
            self.bits[j / 64] |= 1 << (j % 64);
        } else {
            self.bits[j / 64] &= !(1 << (j % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.size()).all(|j| !self.get(j))
    }

    pub fn is_ones(&self) -> bool {
        (0..self.size()).all(|j| self.get(j))
    }

    pub fn complement(&self) -> BoolFunc {
        BoolFunc::from_fn(self.nvars(), |j| !self.get(j))
    }

    pub fn minterms(&self) -> Vec<usize> {
        (0..self.size()).filter(|&j| self.get(j)).collect()
    }

    /// Bitmask of variables the function actually depends on.
    pub fn support(&self) -> u32 {
        let mut s = 0;
        for k in 0..self.nvars() {
            if (0..self.size()).any(|j| self.get(j) != self.get(j ^ (1 << k))) {
                s |= 1 << k;
            }
        }
        s
    }

    /// Re-index variables: old variable `i` becomes variable `map[i]` of a
    /// `new_nvars`-variable function that ignores all unmapped variables.
    pub fn lift(&self, map: &[usize], new_nvars: usize) -> BoolFunc {
        assert_eq!(map.len(), self.nvars());
        assert!(new_nvars <= MAX_FUNC_VARS);
        BoolFunc::from_fn(new_nvars, |j| {
            let mut old = 0usize;
            for (i, &m) in map.iter().enumerate() {
                old |= (j >> m & 1) << i;
            }
            self.get(old)
        })
    }

    /// Full-width bitwise application: bit `b` of the result is the function
    /// applied to bit `b` of each input value.
    pub fn eval_bitwise(&self, values: &[u64], width: Width) -> u64 {
        assert_eq!(values.len(), self.nvars());
        let mut out = 0u64;
        for b in 0..width.bits() {
            let mut idx = 0usize;
            for (k, v) in values.iter().enumerate() {
                idx |= ((v >> b & 1) as usize) << k;
            }
            if self.get(idx) {
                out |= 1 << b;
            }
        }
        out
    }
}

/// The full-width conjunction `(±x_0 & ±x_1 & ...)` whose 0/1 indicator is
/// column `j` of the signature basis: variable `k` appears plain when bit `k`
/// of `j` is set and complemented otherwise.
pub fn basis_conjunction(vars: &[String], j: usize) -> Expr {
    assert!(!vars.is_empty() && j < (1 << vars.len()));
    let mut acc: Option<Expr> = None;
    for (k, name) in vars.iter().enumerate() {
        let lit = if j >> k & 1 == 1 {
            Expr::var(name)
        } else {
            Expr::not(Expr::var(name))
        };
        acc = Some(match acc {
            None => lit,
            Some(a) => Expr::and(a, lit),
        });
    }
    acc.unwrap()
}

// A product term of the minimization: fixed variable values in `value` on the
// positions not masked by `dc`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Cube {
    value: u16,
    dc: u16,
}

impl Cube {
    fn covers(&self, minterm: u16) -> bool {
        minterm & !self.dc == self.value
    }

    fn literals(&self, nvars: usize) -> usize {
        nvars - (self.dc.count_ones() as usize)
    }

    fn expr(&self, vars: &[String]) -> Option<Expr> {
        let mut acc: Option<Expr> = None;
        for (k, name) in vars.iter().enumerate() {
            if self.dc >> k & 1 == 1 {
                continue;
            }
            let lit = if self.value >> k & 1 == 1 {
                Expr::var(name)
            } else {
                Expr::not(Expr::var(name))
            };
            acc = Some(match acc {
                None => lit,
                Some(a) => Expr::and(a, lit),
            });
        }
        acc
    }
}

fn prime_implicants(minterms: &[u16]) -> Vec<Cube> {
    let mut current: Vec<Cube> = minterms.iter().map(|&m| Cube { value: m, dc: 0 }).collect();
    current.sort();
    current.dedup();
    let mut primes = Vec::new();
    while !current.is_empty() {
        let mut merged = vec![false; current.len()];
        let mut next = Vec::new();
        for i in 0..current.len() {
            for k in i + 1..current.len() {
                let (a, b) = (current[i], current[k]);
                if a.dc == b.dc && (a.value ^ b.value).count_ones() == 1 {
                    let diff = a.value ^ b.value;
                    next.push(Cube {
                        value: a.value & !diff,
                        dc: a.dc | diff,
                    });
                    merged[i] = true;
                    merged[k] = true;
                }
            }
        }
        for (i, cube) in current.iter().enumerate() {
            if !merged[i] {
                primes.push(*cube);
            }
        }
        next.sort();
        next.dedup();
        current = next;
    }
    primes.sort();
    primes.dedup();
    primes
}

// Petrick's method: expand the product-of-sums of covering primes into a sum
// of prime sets, pruning absorbed sets, and pick a minimum one.
fn minimum_cover(primes: &[Cube], minterms: &[u16], nvars: usize) -> Vec<usize> {
    assert!(primes.len() <= 128);
    let mut terms: Vec<u128> = vec![0];
    for &m in minterms {
        let choices: Vec<usize> = (0..primes.len()).filter(|&p| primes[p].covers(m)).collect();
        assert!(!choices.is_empty(), "minterm not covered by any prime");
        let mut next: Vec<u128> = Vec::new();
        for &t in &terms {
            for &p in &choices {
                next.push(t | 1u128 << p);
            }
        }
        next.sort();
        next.dedup();
        // Absorption: drop any set that is a superset of another.
        let mut kept: Vec<u128> = Vec::new();
        for &t in &next {
            if kept.iter().all(|&k| k & t != k) {
                kept.retain(|&k| t & k != t);
                kept.push(t);
            }
        }
        terms = kept;
    }
    let best = terms
        .iter()
        .min_by_key(|&&t| {
            let lits: usize = (0..primes.len())
                .filter(|&p| t >> p & 1 == 1)
                .map(|p| primes[p].literals(nvars))
                .sum();
            (t.count_ones(), lits, t)
        })
        .copied()
        .expect("petrick produced no terms");
    (0..primes.len()).filter(|&p| best >> p & 1 == 1).collect()
}

/// Exact Quine-McCluskey minimization into a sum-of-products over And/Or/Not.
///
/// The cover has the minimal number of implicants (ties broken by literal
/// count, then deterministically). Supports up to 4 variables.
pub fn quine_mccluskey(f: &BoolFunc, vars: &[String], width: Width) -> Expr {
    assert!(
        f.nvars() <= 4,
        "quine_mccluskey supports at most 4 variables"
    );
    assert_eq!(vars.len(), f.nvars());
    if f.is_zero() {
        return Expr::Const(0);
    }
    if f.is_ones() {
        return Expr::Const(width.mask());
    }
    let minterms: Vec<u16> = f.minterms().iter().map(|&j| j as u16).collect();
    let primes = prime_implicants(&minterms);
    let mut cover: Vec<Cube> = minimum_cover(&primes, &minterms, f.nvars())
        .into_iter()
        .map(|p| primes[p])
        .collect();
    cover.sort_by_key(|c| (c.literals(f.nvars()), c.value, c.dc));
    let mut acc: Option<Expr> = None;
    for cube in cover {
        let term = cube.expr(vars).expect("non-tautological cube");
        acc = Some(match acc {
            None => term,
            Some(a) => Expr::or(a, term),
        });
    }
    acc.expect("nonzero function has a cover")
}

// OR of raw minterm conjunctions, used when the function has too many
// variables for minimization.
fn minterm_sop(f: &BoolFunc, vars: &[String]) -> Expr {
    let mut acc: Option<Expr> = None;
    for j in f.minterms() {
        let conj = basis_conjunction(vars, j);
        acc = Some(match acc {
            None => conj,
            Some(a) => Expr::or(a, conj),
        });
    }
    acc.expect("nonzero function")
}

/// Cheapest known bitwise expression with truth table `f`.
///
/// Tries, in order: constants, literals, parity chains, the two-variable
/// forms, then Quine-McCluskey (directly and through De Morgan) and keeps the
/// smallest by node count.
pub fn materialize(f: &BoolFunc, vars: &[String], width: Width) -> Expr {
    assert_eq!(vars.len(), f.nvars());
    if f.is_zero() {
        return Expr::Const(0);
    }
    if f.is_ones() {
        return Expr::Const(width.mask());
    }
    let t = f.nvars();
    let mut candidates: Vec<Expr> = Vec::new();

    for (k, name) in vars.iter().enumerate() {
        let v = BoolFunc::var(t, k);
        if *f == v {
            return Expr::var(name);
        }
        if *f == v.complement() {
            candidates.push(Expr::not(Expr::var(name)));
        }
    }

    // Parity chains: f == xor of a variable subset, possibly complemented.
    let base = f.get(0);
    let subset: Vec<usize> = (0..t).filter(|&k| f.get(1 << k) != base).collect();
    if subset.len() >= 2 {
        let parity = BoolFunc::from_fn(t, |j| {
            let ones = subset.iter().filter(|&&k| j >> k & 1 == 1).count();
            (ones % 2 == 1) != base
        });
        if parity == *f {
            let mut chain = Expr::var(&vars[subset[0]]);
            for &k in &subset[1..] {
                chain = Expr::xor(chain, Expr::var(&vars[k]));
            }
            candidates.push(if base { Expr::not(chain) } else { chain });
        }
    }

    for k1 in 0..t {
        for k2 in k1 + 1..t {
            let a = BoolFunc::var(t, k1);
            let b = BoolFunc::var(t, k2);
            let av = || Expr::var(&vars[k1]);
            let bv = || Expr::var(&vars[k2]);
            let forms: [(BoolFunc, Expr); 8] = [
                (
                    BoolFunc::from_fn(t, |j| a.get(j) & b.get(j)),
                    Expr::and(av(), bv()),
                ),
                (
                    BoolFunc::from_fn(t, |j| a.get(j) | b.get(j)),
                    Expr::or(av(), bv()),
                ),
                (
                    BoolFunc::from_fn(t, |j| a.get(j) & !b.get(j)),
                    Expr::and(av(), Expr::not(bv())),
                ),
                (
                    BoolFunc::from_fn(t, |j| !a.get(j) & b.get(j)),
                    Expr::and(Expr::not(av()), bv()),
                ),
                (
                    BoolFunc::from_fn(t, |j| !(a.get(j) & b.get(j))),
                    Expr::not(Expr::and(av(), bv())),
                ),
                (
                    BoolFunc::from_fn(t, |j| !(a.get(j) | b.get(j))),
                    Expr::not(Expr::or(av(), bv())),
                ),
                (
                    BoolFunc::from_fn(t, |j| a.get(j) | !b.get(j)),
                    Expr::or(av(), Expr::not(bv())),
                ),
                (
                    BoolFunc::from_fn(t, |j| !a.get(j) | b.get(j)),
                    Expr::or(Expr::not(av()), bv()),
                ),
            ];
            for (table, expr) in forms {
                if table == *f {
                    candidates.push(expr);
                }
            }
        }
    }

    if t <= 4 {
        candidates.push(quine_mccluskey(f, vars, width));
        candidates.push(Expr::not(quine_mccluskey(&f.complement(), vars, width)));
    } else {
        candidates.push(minterm_sop(f, vars));
        candidates.push(Expr::not(minterm_sop(&f.complement(), vars)));
    }

    candidates
        .into_iter()
        .min_by_key(|e| e.node_count())
        .expect("materialize catalog is never empty")
}
