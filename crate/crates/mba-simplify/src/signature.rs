//! Signature vectors for linear MBAs and per-bit signature matrices for
//! semi-linear MBAs.
//!
//! The linear signature evaluates the expression at every 0/1 corner; two
//! linear MBAs are equal iff their vectors coincide. The semi-linear matrix
//! evaluates at variable values {0, 2^i} for each bit i and shifts results
//! down by i; after offset subtraction and canonical reduction of row i
//! modulo 2^(w-i), matrix equality is a sound and complete equivalence test
//! for semi-linear MBAs.

use crate::ast::{classify, Expr, MbaClass, Width};
use crate::boolfunc::basis_conjunction;
use crate::error::Error;

/// Most variables a signature will be built over (2^t evaluations per row).
pub const MAX_VARS: usize = 8;

/// Evaluations of a linear MBA at all 2^t corner assignments. Entry `j`
/// assigns variable `k` the k-th bit of `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureVector {
    pub width: Width,
    pub vars: Vec<String>,
    pub entries: Vec<u64>,
}

impl SignatureVector {
    /// Split off the constant offset (entry 0): returns the offset and the
    /// vector with the offset subtracted from every entry.
    pub fn subtract_offset(&self) -> (u64, SignatureVector) {
        let offset = self.entries[0];
        let entries = self
            .entries
            .iter()
            .map(|&e| self.width.sub(e, offset))
            .collect();
        (
            offset,
            SignatureVector {
                width: self.width,
                vars: self.vars.clone(),
                entries,
            },
        )
    }
}

/// Per-bit signature rows of a semi-linear MBA, after the shift by `i` but
/// before canonical reduction. Row `i`, entry `j` is `e(point) >> i` where
/// the point assigns variable `k` the value `2^i * bit_k(j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureMatrix {
    pub width: Width,
    pub vars: Vec<String>,
    /// e(0, ..., 0).
    pub offset: u64,
    pub rows: Vec<Vec<u64>>,
}

/// Offset-subtracted, canonically reduced signature matrix: row `i` holds
/// `(raw[i][j] - (offset >> i)) mod 2^(w-i)`, so column 0 is all zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustedMatrix {
    pub width: Width,
    pub vars: Vec<String>,
    pub offset: u64,
    pub rows: Vec<Vec<u64>>,
}

impl SignatureMatrix {
    /// Reduce row i modulo 2^(w-i). A coefficient multiplying `(2^i & ...)`
    /// is only meaningful modulo 2^(w-i), so this canonical form makes
    /// matrix equality a complete equivalence test.
    pub fn canonical(&self) -> SignatureMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let m = row_modulus(self.width, i);
                row.iter().map(|&e| m.reduce(e)).collect()
            })
            .collect();
        SignatureMatrix {
            width: self.width,
            vars: self.vars.clone(),
            offset: self.offset,
            rows,
        }
    }

    /// Subtract the (shifted) constant offset from every row and reduce
    /// canonically.
    pub fn subtract_offset(&self) -> (u64, AdjustedMatrix) {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let m = row_modulus(self.width, i);
                let off = self.offset >> i;
                row.iter().map(|&e| m.sub(e, off)).collect()
            })
            .collect();
        (
            self.offset,
            AdjustedMatrix {
                width: self.width,
                vars: self.vars.clone(),
                offset: self.offset,
                rows,
            },
        )
    }
}

/// Modulus width 2^(w-i) for coefficients attached to bit row `i`.
pub fn row_modulus(width: Width, row: usize) -> Width {
    Width::new(width.bits() - row as u32).expect("row < width")
}

fn check_var_budget(vars: &[String]) -> Result<(), Error> {
    if vars.len() > MAX_VARS {
        return Err(Error::TooManyVariables {
            count: vars.len(),
            limit: MAX_VARS,
        });
    }
    Ok(())
}

/// Signature vector of a linear MBA: evaluations at all 0/1 corners.
pub fn linear_signature(e: &Expr, width: Width) -> Result<SignatureVector, Error> {
    match classify(e, width) {
        MbaClass::Linear => {}
        other => return Err(Error::NotLinear(other)),
    }
    let vars = e.variables();
    check_var_budget(&vars)?;
    linear_signature_over(e, &vars, width)
}

pub(crate) fn linear_signature_over(
    e: &Expr,
    vars: &[String],
    width: Width,
) -> Result<SignatureVector, Error> {
    let bound = e.bind(vars)?;
    let t = vars.len();
    let mut values = vec![0u64; t];
    let mut entries = Vec::with_capacity(1 << t);
    for j in 0..1usize << t {
        for (k, v) in values.iter_mut().enumerate() {
            *v = (j >> k & 1) as u64;
        }
        entries.push(bound.eval(&values, width));
    }
    Ok(SignatureVector {
        width,
        vars: vars.to_vec(),
        entries,
    })
}

/// Per-bit signature matrix of a linear or semi-linear MBA.
pub fn semilinear_matrix(e: &Expr, width: Width) -> Result<SignatureMatrix, Error> {
    if classify(e, width) == MbaClass::Nonlinear {
        return Err(Error::Nonlinear);
    }
    let vars = e.variables();
    check_var_budget(&vars)?;
    semilinear_matrix_over(e, &vars, width)
}

pub(crate) fn semilinear_matrix_over(
    e: &Expr,
    vars: &[String],
    width: Width,
) -> Result<SignatureMatrix, Error> {
    let bound = e.bind(vars)?;
    let t = vars.len();
    let mut values = vec![0u64; t];
    let offset = bound.eval(&values, width);
    let mut rows = Vec::with_capacity(width.bits() as usize);
    for i in 0..width.bits() as usize {
        let mut row = Vec::with_capacity(1 << t);
        let low = (1u64 << i) - 1;
        for j in 0..1usize << t {
            for (k, v) in values.iter_mut().enumerate() {
                *v = ((j >> k & 1) as u64) << i;
            }
            let val = bound.eval(&values, width);
            // Shift soundness: the evaluation shares the offset's low i bits,
            // so shifting before or after the offset subtraction agrees.
            assert_eq!(
                val & low,
                offset & low,
                "semi-linear evaluation disagrees with the offset below bit {i}"
            );
            row.push(val >> i);
        }
        rows.push(row);
    }
    Ok(SignatureMatrix {
        width,
        vars: vars.to_vec(),
        offset,
        rows,
    })
}

/// Rebuild an expression from an adjusted matrix:
/// `offset + sum_i sum_j rows[i][j] * (2^i & B_j)` over the conjunction
/// basis, dropping zero coefficients. Equivalent to the source expression.
pub fn reconstruct_conjunctions(adj: &AdjustedMatrix) -> Expr {
    let mut acc: Option<Expr> = None;
    if adj.offset != 0 {
        acc = Some(Expr::Const(adj.offset));
    }
    for (i, row) in adj.rows.iter().enumerate() {
        for (j, &c) in row.iter().enumerate().skip(1) {
            if c == 0 {
                continue;
            }
            let masked = Expr::and(Expr::Const(1u64 << i), basis_conjunction(&adj.vars, j));
            let term = if c == 1 {
                masked
            } else {
                Expr::mul(Expr::Const(c), masked)
            };
            acc = Some(match acc {
                None => term,
                Some(a) => Expr::add(a, term),
            });
        }
    }
    acc.unwrap_or(Expr::Const(0))
}

/// The linearity shortcut: build the candidate with the input's behavior on
/// B = {0, 1} and accept it when its canonical adjusted matrix matches.
///
/// Returns the candidate (a linear MBA equivalent to `e`) or `None` when the
/// per-bit rows are inconsistent with any single linear expression.
pub fn shortcut_linear_candidate(e: &Expr, width: Width) -> Result<Option<Expr>, Error> {
    let m = semilinear_matrix(e, width)?;
    let (offset, adj) = m.subtract_offset();
    // Row 0 is the offset-adjusted linear signature vector.
    let row0 = &adj.rows[0];
    let mut cand: Option<Expr> = None;
    if offset != 0 {
        cand = Some(Expr::Const(offset));
    }
    for (j, &c) in row0.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let conj = basis_conjunction(&adj.vars, j);
        let term = if c == 1 {
            conj
        } else {
            Expr::mul(Expr::Const(c), conj)
        };
        cand = Some(match cand {
            None => term,
            Some(a) => Expr::add(a, term),
        });
    }
    let cand = cand.unwrap_or(Expr::Const(0));
    let cm = semilinear_matrix_over(&cand, &adj.vars, width)?;
    let (coff, cadj) = cm.subtract_offset();
    if coff == offset && cadj.rows == adj.rows {
        Ok(Some(cand))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{evaluate, render};
    use crate::parse::parse;

    fn w(bits: u32) -> Width {
        Width::new(bits).unwrap()
    }

    fn neg64(x: u64) -> u64 {
        x.wrapping_neg()
    }

    #[test]
    fn linear_signature_of_sum() {
        let e = parse("x+y", Width::W64).unwrap();
        let v = linear_signature(&e, Width::W64).unwrap();
        assert_eq!(v.entries, vec![0, 1, 1, 2]);
    }

    #[test]
    fn linear_signature_of_negated_sum_and_offset() {
        let e = parse("~(x+y)", Width::W64).unwrap();
        let v = linear_signature(&e, Width::W64).unwrap();
        assert_eq!(v.entries, vec![neg64(1), neg64(2), neg64(2), neg64(3)]);
        let (offset, adj) = v.subtract_offset();
        assert_eq!(offset, neg64(1));
        assert_eq!(adj.entries, vec![0, neg64(1), neg64(1), neg64(2)]);
    }

    #[test]
    fn linear_signature_of_constant() {
        let e = Expr::add(
            Expr::mul(Expr::Const(0), Expr::add(Expr::var("x"), Expr::var("y"))),
            Expr::Const(7),
        );
        let v = linear_signature(&e, w(8)).unwrap();
        assert_eq!(v.entries, vec![7, 7, 7, 7]);
    }

    #[test]
    fn linear_signature_rejects_nonlinear() {
        let e = parse("x*y", Width::W64).unwrap();
        assert!(linear_signature(&e, Width::W64).is_err());
    }

    #[test]
    fn matrix_of_simple_semilinear() {
        let e = parse("(x&5)+(y&3)", w(3)).unwrap();
        let m = semilinear_matrix(&e, w(3)).unwrap();
        assert_eq!(m.offset, 0);
        assert_eq!(
            m.rows,
            vec![vec![0, 1, 1, 2], vec![0, 0, 1, 1], vec![0, 1, 0, 1]]
        );
        let (offset, adj) = m.subtract_offset();
        assert_eq!(offset, 0);
        assert_eq!(adj.rows, m.rows);
    }

    #[test]
    fn matrix_with_scaled_terms_reduces_canonically() {
        let e = parse("2*(x&5)+2*(y&3)", w(3)).unwrap();
        let m = semilinear_matrix(&e, w(3)).unwrap();
        // Modular evaluation zeroes the top row that unbounded arithmetic
        // would report as [0,2,0,2]; both differ by a multiple of 2^(w-i).
        assert_eq!(
            m.rows,
            vec![vec![0, 2, 2, 4], vec![0, 0, 2, 2], vec![0, 0, 0, 0]]
        );
        let c = m.canonical();
        assert_eq!(
            c.rows,
            vec![vec![0, 2, 2, 4], vec![0, 0, 2, 2], vec![0, 0, 0, 0]]
        );
    }

    #[test]
    fn matrix_of_constant_zero() {
        let e = Expr::mul(Expr::Const(0), Expr::var("x"));
        let m = semilinear_matrix(&e, w(3)).unwrap();
        assert_eq!(m.offset, 0);
        assert!(m.rows.iter().all(|r| r.iter().all(|&e| e == 0)));
    }

    #[test]
    fn row0_matches_linear_signature_for_linear_inputs() {
        for src in ["x+y", "~(x+y)", "3*(x|y)-2", "x^y"] {
            let e = parse(src, w(8)).unwrap();
            let v = linear_signature(&e, w(8)).unwrap();
            let m = semilinear_matrix(&e, w(8)).unwrap();
            assert_eq!(m.rows[0], v.entries, "row 0 mismatch for {src}");
        }
    }

    #[test]
    fn reconstruction_is_equivalent_exhaustively() {
        for src in ["(x&5)+(y&3)", "2*(x&5)+2*(y&3)", "3*(x&6)-(y&1)+7"] {
            let e = parse(src, w(3)).unwrap();
            let m = semilinear_matrix(&e, w(3)).unwrap();
            let (_, adj) = m.subtract_offset();
            let r = reconstruct_conjunctions(&adj);
            for x in 0..8u64 {
                for y in 0..8u64 {
                    let a = evaluate(&e, &[("x", x), ("y", y)], w(3)).unwrap();
                    let b = evaluate(&r, &[("x", x), ("y", y)], w(3)).unwrap();
                    assert_eq!(a, b, "{src} differs from reconstruction at ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn reconstruct_all_zero_matrix() {
        let e = Expr::mul(Expr::Const(0), Expr::var("x"));
        let m = semilinear_matrix(&e, w(4)).unwrap();
        let (_, adj) = m.subtract_offset();
        assert_eq!(reconstruct_conjunctions(&adj), Expr::Const(0));
    }

    #[test]
    fn shortcut_accepts_masked_split_of_x() {
        let e = parse("(x&1111)+(x&-1112)", Width::W64).unwrap();
        let cand = shortcut_linear_candidate(&e, Width::W64).unwrap().unwrap();
        assert_eq!(render(&cand), "x");
    }

    #[test]
    fn shortcut_rejects_genuinely_semilinear_input() {
        let e = parse("(x&5)+(y&3)", w(3)).unwrap();
        assert!(shortcut_linear_candidate(&e, w(3)).unwrap().is_none());
    }

    #[test]
    fn shortcut_accepts_linear_input_trivially() {
        let e = parse("x+y", Width::W64).unwrap();
        let cand = shortcut_linear_candidate(&e, Width::W64).unwrap().unwrap();
        for (x, y) in [(0u64, 0u64), (1, 1), (123, 456), (u64::MAX, 7)] {
            let a = evaluate(&e, &[("x", x), ("y", y)], Width::W64).unwrap();
            let b = evaluate(&cand, &[("x", x), ("y", y)], Width::W64).unwrap();
            assert_eq!(a, b);
        }
    }
}
