//! Expression trees over w-bit words, with all arithmetic wrapping modulo 2^w.

use std::fmt;

use crate::error::Error;

/// Bit width of the word domain. Valid widths are 1..=64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Width(u8);

// Wrapping modular helpers named after the operators they implement; they
// take plain u64 residues, not Width operands.
#[allow(clippy::should_implement_trait)]
impl Width {
    pub const W64: Width = Width(64);

    pub fn new(bits: u32) -> Result<Width, Error> {
        if (1..=64).contains(&bits) {
            Ok(Width(bits as u8))
        } else {
            Err(Error::InvalidWidth(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0 as u32
    }

    /// All-ones word, i.e. 2^w - 1. Doubles as the residue of -1.
    pub fn mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    pub fn reduce(self, x: u64) -> u64 {
        x & self.mask()
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        self.reduce(a.wrapping_add(b))
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.reduce(a.wrapping_sub(b))
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a.wrapping_mul(b))
    }

    pub fn neg(self, a: u64) -> u64 {
        self.reduce(a.wrapping_neg())
    }

    pub fn not(self, a: u64) -> u64 {
        self.reduce(!a)
    }

    /// True when the top bit of `a` is set, i.e. `a` reads as negative in
    /// two's complement. Used only to pick between `+c*t` and `-c*t` when
    /// rendering.
    pub fn is_negative(self, a: u64) -> bool {
        a >> (self.0 - 1) & 1 == 1
    }
}

/// Operator tree over variables and constants.
///
/// Constants are stored as plain `u64` residues; the ambient [`Width`] is
/// supplied by each operation that needs one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Const(u64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

/// Syntactic MBA class. Classification is conservative: anything not
/// recognizably linear or semi-linear is `Nonlinear`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbaClass {
    Linear,
    SemiLinear,
    Nonlinear,
}

// Constructor shorthands; these build nodes rather than overload operators.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn lit(v: u64) -> Expr {
        Expr::Const(v)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Expr, b: Expr) -> Expr {
        Expr::Xor(Box::new(a), Box::new(b))
    }

    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    /// Total number of AST nodes; leaves and operators each count 1.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Const(_) => 1,
            Expr::Neg(a) | Expr::Not(a) => 1 + a.node_count(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Xor(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Distinct variables in first-appearance (left-to-right) order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(n) => {
                if !out.iter().any(|v| v == n) {
                    out.push(n.clone());
                }
            }
            Expr::Const(_) => {}
            Expr::Neg(a) | Expr::Not(a) => a.collect_vars(out),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Xor(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// All constant values appearing in the tree.
    pub fn constants(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect_consts(&mut out);
        out
    }

    fn collect_consts(&self, out: &mut Vec<u64>) {
        match self {
            Expr::Const(c) => {
                if !out.contains(c) {
                    out.push(*c);
                }
            }
            Expr::Var(_) => {}
            Expr::Neg(a) | Expr::Not(a) => a.collect_consts(out),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Xor(a, b) => {
                a.collect_consts(out);
                b.collect_consts(out);
            }
        }
    }

    /// Replace every occurrence of variable `name` with `replacement`.
    pub fn substitute(&self, name: &str, replacement: &Expr) -> Expr {
        match self {
            Expr::Var(n) if n == name => replacement.clone(),
            Expr::Var(_) | Expr::Const(_) => self.clone(),
            Expr::Neg(a) => Expr::neg(a.substitute(name, replacement)),
            Expr::Not(a) => Expr::not(a.substitute(name, replacement)),
            Expr::Add(a, b) => Expr::add(
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
            Expr::Sub(a, b) => Expr::sub(
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
            Expr::Mul(a, b) => Expr::mul(
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
            Expr::And(a, b) => Expr::and(
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
            Expr::Or(a, b) => Expr::or(
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
            Expr::Xor(a, b) => Expr::xor(
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
        }
    }

    /// Value of a constant subtree, or `None` if it contains a variable.
    pub fn const_value(&self, width: Width) -> Option<u64> {
        match self {
            Expr::Const(c) => Some(width.reduce(*c)),
            Expr::Var(_) => None,
            Expr::Neg(a) => Some(width.neg(a.const_value(width)?)),
            Expr::Not(a) => Some(width.not(a.const_value(width)?)),
            Expr::Add(a, b) => Some(width.add(a.const_value(width)?, b.const_value(width)?)),
            Expr::Sub(a, b) => Some(width.sub(a.const_value(width)?, b.const_value(width)?)),
            Expr::Mul(a, b) => Some(width.mul(a.const_value(width)?, b.const_value(width)?)),
            Expr::And(a, b) => Some(a.const_value(width)? & b.const_value(width)?),
            Expr::Or(a, b) => Some(a.const_value(width)? | b.const_value(width)?),
            Expr::Xor(a, b) => Some(a.const_value(width)? ^ b.const_value(width)?),
        }
    }

    /// Bind variables to slots for fast repeated evaluation.
    pub fn bind(&self, vars: &[String]) -> Result<BoundExpr, Error> {
        match self {
            Expr::Var(n) => vars
                .iter()
                .position(|v| v == n)
                .map(BoundExpr::Var)
                .ok_or_else(|| Error::UnassignedVariable(n.clone())),
            Expr::Const(c) => Ok(BoundExpr::Const(*c)),
            Expr::Neg(a) => Ok(BoundExpr::Neg(Box::new(a.bind(vars)?))),
            Expr::Not(a) => Ok(BoundExpr::Not(Box::new(a.bind(vars)?))),
            Expr::Add(a, b) => Ok(BoundExpr::Add(
                Box::new(a.bind(vars)?),
                Box::new(b.bind(vars)?),
            )),
            Expr::Sub(a, b) => Ok(BoundExpr::Sub(
                Box::new(a.bind(vars)?),
                Box::new(b.bind(vars)?),
            )),
            Expr::Mul(a, b) => Ok(BoundExpr::Mul(
                Box::new(a.bind(vars)?),
                Box::new(b.bind(vars)?),
            )),
            Expr::And(a, b) => Ok(BoundExpr::And(
                Box::new(a.bind(vars)?),
                Box::new(b.bind(vars)?),
            )),
            Expr::Or(a, b) => Ok(BoundExpr::Or(
                Box::new(a.bind(vars)?),
                Box::new(b.bind(vars)?),
            )),
            Expr::Xor(a, b) => Ok(BoundExpr::Xor(
                Box::new(a.bind(vars)?),
                Box::new(b.bind(vars)?),
            )),
        }
    }
}

/// Evaluate `e` under the given assignment, all operations modulo 2^w.
///
/// `Not` complements within w bits and `Neg` is 2^w - x.
pub fn evaluate(e: &Expr, assignment: &[(&str, u64)], width: Width) -> Result<u64, Error> {
    match e {
        Expr::Var(n) => assignment
            .iter()
            .find(|(name, _)| name == n)
            .map(|(_, v)| width.reduce(*v))
            .ok_or_else(|| Error::UnassignedVariable(n.clone())),
        Expr::Const(c) => Ok(width.reduce(*c)),
        Expr::Neg(a) => Ok(width.neg(evaluate(a, assignment, width)?)),
        Expr::Not(a) => Ok(width.not(evaluate(a, assignment, width)?)),
        Expr::Add(a, b) => Ok(width.add(
            evaluate(a, assignment, width)?,
            evaluate(b, assignment, width)?,
        )),
        Expr::Sub(a, b) => Ok(width.sub(
            evaluate(a, assignment, width)?,
            evaluate(b, assignment, width)?,
        )),
        Expr::Mul(a, b) => Ok(width.mul(
            evaluate(a, assignment, width)?,
            evaluate(b, assignment, width)?,
        )),
        Expr::And(a, b) => Ok(evaluate(a, assignment, width)? & evaluate(b, assignment, width)?),
        Expr::Or(a, b) => Ok(evaluate(a, assignment, width)? | evaluate(b, assignment, width)?),
        Expr::Xor(a, b) => Ok(evaluate(a, assignment, width)? ^ evaluate(b, assignment, width)?),
    }
}

/// Expression with variables resolved to slot indices; evaluation takes a
/// value slice instead of a name lookup. Signature construction and the
/// oracles evaluate the same tree thousands of times, so this matters.
#[derive(Debug, Clone)]
pub enum BoundExpr {
    Var(usize),
    Const(u64),
    Add(Box<BoundExpr>, Box<BoundExpr>),
    Sub(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    Neg(Box<BoundExpr>),
    And(Box<BoundExpr>, Box<BoundExpr>),
    Or(Box<BoundExpr>, Box<BoundExpr>),
    Xor(Box<BoundExpr>, Box<BoundExpr>),
    Not(Box<BoundExpr>),
}

impl BoundExpr {
    pub fn eval(&self, values: &[u64], width: Width) -> u64 {
        match self {
            BoundExpr::Var(i) => width.reduce(values[*i]),
            BoundExpr::Const(c) => width.reduce(*c),
            BoundExpr::Neg(a) => width.neg(a.eval(values, width)),
            BoundExpr::Not(a) => width.not(a.eval(values, width)),
            BoundExpr::Add(a, b) => width.add(a.eval(values, width), b.eval(values, width)),
            BoundExpr::Sub(a, b) => width.sub(a.eval(values, width), b.eval(values, width)),
            BoundExpr::Mul(a, b) => width.mul(a.eval(values, width), b.eval(values, width)),
            BoundExpr::And(a, b) => a.eval(values, width) & b.eval(values, width),
            BoundExpr::Or(a, b) => a.eval(values, width) | b.eval(values, width),
            BoundExpr::Xor(a, b) => a.eval(values, width) ^ b.eval(values, width),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(n) => write!(f, "{n}"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Not(a) => write!(f, "(~{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::And(a, b) => write!(f, "({a}&{b})"),
            Expr::Or(a, b) => write!(f, "({a}|{b})"),
            Expr::Xor(a, b) => write!(f, "({a}^{b})"),
        }
    }
}

/// Fully parenthesized text form; `parse` maps it back to an identical tree.
pub fn render(e: &Expr) -> String {
    e.to_string()
}

// Internal shape lattice used by classify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Constant,
    // Pure bitwise expression over variables and constants; `nontrivial` is
    // set when some constant other than 0 or 2^w-1 appears inside it.
    Bitwise { nontrivial: bool },
    Linear,
    SemiLinear,
    Nonlinear,
}

fn bitwise_shape(nontrivial: bool) -> Shape {
    Shape::Bitwise { nontrivial }
}

fn linear_of(nontrivial: bool) -> Shape {
    if nontrivial {
        Shape::SemiLinear
    } else {
        Shape::Linear
    }
}

fn shape(e: &Expr, width: Width) -> Shape {
    match e {
        Expr::Var(_) => bitwise_shape(false),
        Expr::Const(_) => Shape::Constant,
        Expr::Not(a) => match shape(a, width) {
            Shape::Constant => Shape::Constant,
            s @ Shape::Bitwise { .. } => s,
            // ~a = -a - 1, so bitwise negation keeps a sum linear.
            Shape::Linear => Shape::Linear,
            Shape::SemiLinear => Shape::SemiLinear,
            Shape::Nonlinear => Shape::Nonlinear,
        },
        Expr::Neg(a) => match shape(a, width) {
            Shape::Constant => Shape::Constant,
            Shape::Bitwise { nontrivial } => linear_of(nontrivial),
            Shape::Linear => Shape::Linear,
            Shape::SemiLinear => Shape::SemiLinear,
            Shape::Nonlinear => Shape::Nonlinear,
        },
        Expr::And(a, b) | Expr::Or(a, b) | Expr::Xor(a, b) => {
            let sa = shape(a, width);
            let sb = shape(b, width);
            if sa == Shape::Constant && sb == Shape::Constant {
                return Shape::Constant;
            }
            // Nontriviality contribution of one operand of a bitwise node, or
            // None if the operand disqualifies the whole node.
            let nt = |x: &Expr, s: Shape| -> Option<bool> {
                match s {
                    Shape::Constant => {
                        let v = x.const_value(width).expect("constant shape");
                        Some(v != 0 && v != width.mask())
                    }
                    Shape::Bitwise { nontrivial } => Some(nontrivial),
                    _ => None,
                }
            };
            match (nt(a, sa), nt(b, sb)) {
                (Some(na), Some(nb)) => bitwise_shape(na || nb),
                _ => Shape::Nonlinear,
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let sa = shape(a, width);
            let sb = shape(b, width);
            if sa == Shape::Constant && sb == Shape::Constant {
                return Shape::Constant;
            }
            let rank = |s: Shape| -> Option<Shape> {
                match s {
                    Shape::Constant | Shape::Linear => Some(Shape::Linear),
                    Shape::Bitwise { nontrivial } => Some(linear_of(nontrivial)),
                    Shape::SemiLinear => Some(Shape::SemiLinear),
                    Shape::Nonlinear => None,
                }
            };
            match (rank(sa), rank(sb)) {
                (Some(Shape::SemiLinear), Some(_)) | (Some(_), Some(Shape::SemiLinear)) => {
                    Shape::SemiLinear
                }
                (Some(_), Some(_)) => Shape::Linear,
                _ => Shape::Nonlinear,
            }
        }
        Expr::Mul(a, b) => {
            let sa = shape(a, width);
            let sb = shape(b, width);
            match (sa, sb) {
                (Shape::Constant, Shape::Constant) => Shape::Constant,
                (Shape::Constant, other) | (other, Shape::Constant) => match other {
                    Shape::Bitwise { nontrivial } => linear_of(nontrivial),
                    Shape::Linear => Shape::Linear,
                    Shape::SemiLinear => Shape::SemiLinear,
                    _ => Shape::Nonlinear,
                },
                // A product of two variable-containing subtrees is nonlinear.
                _ => Shape::Nonlinear,
            }
        }
    }
}

/// Syntactic classification of `e` under the MbaClass invariants.
pub fn classify(e: &Expr, width: Width) -> MbaClass {
    match shape(e, width) {
        Shape::Constant | Shape::Linear => MbaClass::Linear,
        Shape::Bitwise { nontrivial } => {
            if nontrivial {
                MbaClass::SemiLinear
            } else {
                MbaClass::Linear
            }
        }
        Shape::SemiLinear => MbaClass::SemiLinear,
        Shape::Nonlinear => MbaClass::Nonlinear,
    }
}

/// Evaluate constant subtrees and apply 0/1/-1 identities. Idempotent, never
/// increases the node count, and preserves the value modulo 2^w.
pub fn fold_constants(e: &Expr, width: Width) -> Expr {
    let ones = width.mask();
    let folded = match e {
        Expr::Var(_) => e.clone(),
        Expr::Const(c) => Expr::Const(width.reduce(*c)),
        Expr::Neg(a) => Expr::neg(fold_constants(a, width)),
        Expr::Not(a) => Expr::not(fold_constants(a, width)),
        Expr::Add(a, b) => Expr::add(fold_constants(a, width), fold_constants(b, width)),
        Expr::Sub(a, b) => Expr::sub(fold_constants(a, width), fold_constants(b, width)),
        Expr::Mul(a, b) => Expr::mul(fold_constants(a, width), fold_constants(b, width)),
        Expr::And(a, b) => Expr::and(fold_constants(a, width), fold_constants(b, width)),
        Expr::Or(a, b) => Expr::or(fold_constants(a, width), fold_constants(b, width)),
        Expr::Xor(a, b) => Expr::xor(fold_constants(a, width), fold_constants(b, width)),
    };
    if let Some(v) = folded.const_value(width) {
        return Expr::Const(v);
    }
    match folded {
        Expr::Neg(ref a) => match a.as_ref() {
            Expr::Neg(inner) => inner.as_ref().clone(),
            _ => folded,
        },
        Expr::Not(ref a) => match a.as_ref() {
            Expr::Not(inner) => inner.as_ref().clone(),
            _ => folded,
        },
        Expr::Add(ref a, ref b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Const(0), x) | (x, Expr::Const(0)) => x.clone(),
            _ => folded,
        },
        Expr::Sub(ref a, ref b) => match (a.as_ref(), b.as_ref()) {
            (x, Expr::Const(0)) => x.clone(),
            (Expr::Const(0), x) => Expr::neg(x.clone()),
            _ => folded,
        },
        Expr::Mul(ref a, ref b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Const(0), _) | (_, Expr::Const(0)) => Expr::Const(0),
            (Expr::Const(1), x) | (x, Expr::Const(1)) => x.clone(),
            (Expr::Const(c), x) | (x, Expr::Const(c)) if *c == ones => Expr::neg(x.clone()),
            _ => folded,
        },
        Expr::And(ref a, ref b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Const(0), _) | (_, Expr::Const(0)) => Expr::Const(0),
            (Expr::Const(c), x) | (x, Expr::Const(c)) if *c == ones => x.clone(),
            _ => folded,
        },
        Expr::Or(ref a, ref b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Const(0), x) | (x, Expr::Const(0)) => x.clone(),
            (Expr::Const(c), _) | (_, Expr::Const(c)) if *c == ones => Expr::Const(ones),
            _ => folded,
        },
        Expr::Xor(ref a, ref b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Const(0), x) | (x, Expr::Const(0)) => x.clone(),
            (Expr::Const(c), x) | (x, Expr::Const(c)) if *c == ones => Expr::not(x.clone()),
            _ => folded,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn w(bits: u32) -> Width {
        Width::new(bits).unwrap()
    }

    #[test]
    fn evaluate_reference_points() {
        let e = Expr::add(Expr::var("x"), Expr::var("y"));
        assert_eq!(evaluate(&e, &[("x", 1), ("y", 1)], Width::W64).unwrap(), 2);

        let e = Expr::not(Expr::add(Expr::var("x"), Expr::var("y")));
        assert_eq!(
            evaluate(&e, &[("x", 0), ("y", 0)], Width::W64).unwrap(),
            u64::MAX
        );

        let e = parse("(x&5)+(y&3)", w(3)).unwrap();
        assert_eq!(evaluate(&e, &[("x", 4), ("y", 4)], w(3)).unwrap(), 4);
    }

    #[test]
    fn evaluate_unassigned_variable() {
        let e = Expr::add(Expr::var("x"), Expr::var("y"));
        match evaluate(&e, &[("x", 1)], Width::W64) {
            Err(Error::UnassignedVariable(name)) => assert_eq!(name, "y"),
            other => panic!("expected unassigned-variable error, got {other:?}"),
        }
    }

    #[test]
    fn node_counts() {
        assert_eq!(Expr::var("x").node_count(), 1);
        assert_eq!(parse("x+y", Width::W64).unwrap().node_count(), 3);
        assert_eq!(
            parse("2*(x&5)+2*(y&3)", Width::W64).unwrap().node_count(),
            11
        );
    }

    #[test]
    fn render_forms() {
        assert_eq!(render(&Expr::add(Expr::var("x"), Expr::var("y"))), "(x+y)");
        let e = Expr::mul(Expr::lit(10), Expr::xor(Expr::lit(98), Expr::var("x")));
        assert_eq!(render(&e), "(10*(98^x))");
        assert_eq!(render(&Expr::lit(0)), "0");
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&parse("x+2*y", Width::W64).unwrap(), Width::W64),
            MbaClass::Linear
        );
        assert_eq!(
            classify(&parse("(x&5)+(y&3)", w(3)).unwrap(), w(3)),
            MbaClass::SemiLinear
        );
        assert_eq!(
            classify(&parse("x*y", Width::W64).unwrap(), Width::W64),
            MbaClass::Nonlinear
        );
        assert_eq!(
            classify(&parse("~(x+y)", Width::W64).unwrap(), Width::W64),
            MbaClass::Linear
        );
        // Bitwise over an arithmetic subtree is out of the semi-linear class.
        assert_eq!(
            classify(&parse("(x+y)&2", Width::W64).unwrap(), Width::W64),
            MbaClass::Nonlinear
        );
        // Trivial constants inside bitwise operands keep an MBA linear.
        assert_eq!(
            classify(&parse("x&0", Width::W64).unwrap(), Width::W64),
            MbaClass::Linear
        );
        assert_eq!(
            classify(&parse("x&7", w(3)).unwrap(), w(3)),
            MbaClass::Linear
        );
        assert_eq!(
            classify(
                &parse("(x&1111)+(x&-1112)", Width::W64).unwrap(),
                Width::W64
            ),
            MbaClass::SemiLinear
        );
    }

    #[test]
    fn fold_examples() {
        let e = parse("529682|24772", Width::W64).unwrap();
        assert_eq!(fold_constants(&e, Width::W64), Expr::Const(554454));
        let e = parse("23429673|24772", Width::W64).unwrap();
        assert_eq!(fold_constants(&e, Width::W64), Expr::Const(23454445));
        let e = parse("0+x", Width::W64).unwrap();
        assert_eq!(fold_constants(&e, Width::W64), Expr::var("x"));
        // Negative literals fold to two's-complement residues.
        let e = parse("-1112", Width::W64).unwrap();
        assert_eq!(
            fold_constants(&e, Width::W64),
            Expr::Const(0u64.wrapping_sub(1112))
        );
    }

    #[test]
    fn fold_is_idempotent_and_value_preserving() {
        let samples = [
            "((22079729|(5368709120&x))+(5368709207^(5368709120&x)))-5390788936",
            "2*(x&5)+2*(y&3)",
            "~(x|y)+0",
            "1*(x^-1)",
            "(3+4)*x",
        ];
        for s in samples {
            let e = parse(s, Width::W64).unwrap();
            let f1 = fold_constants(&e, Width::W64);
            let f2 = fold_constants(&f1, Width::W64);
            assert_eq!(f1, f2, "fold not idempotent for {s}");
            assert!(f1.node_count() <= e.node_count());
            for (x, y) in [
                (0u64, 0u64),
                (1, 1),
                (5, 3),
                (u64::MAX, 7),
                (1 << 30, 1 << 40),
            ] {
                let a = evaluate(&e, &[("x", x), ("y", y)], Width::W64).unwrap();
                let b = evaluate(&f1, &[("x", x), ("y", y)], Width::W64).unwrap();
                assert_eq!(a, b, "fold changed value of {s} at ({x},{y})");
            }
        }
    }

    #[test]
    fn substitute_replaces_all_occurrences() {
        let e = parse("(x&y)+(x|z)", Width::W64).unwrap();
        let s = e.substitute("x", &Expr::lit(5));
        assert_eq!(render(&s), "((5&y)+(5|z))");
    }
}
