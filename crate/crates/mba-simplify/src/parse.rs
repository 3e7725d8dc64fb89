//! Recursive-descent parser for the expression grammar used by datasets and
//! the CLI.
//!
//! Operator precedence, tightest first: unary `~` and unary `-`, then `*`,
//! then binary `+`/`-`, then `&`, then `^`, then `|`. Parentheses override.
//! Literals are decimal or `0x` hex and are reduced modulo 2^w; identifiers
//! match `[a-zA-Z_][a-zA-Z0-9_]*`.

use crate::ast::{Expr, Width};
use crate::error::Error;

/// Parse failure with the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "parse error at offset {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Error {
        Error::Parse {
            position: e.position,
            message: e.message,
        }
    }
}

pub fn parse(text: &str, width: Width) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        width,
    };
    let e = p.parse_or()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    width: Width,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos.min(self.src.len()),
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len()
            && matches!(self.src[self.pos], b' ' | b'\t' | b'\r' | b'\n')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_or(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_xor()?;
        while self.eat(b'|') {
            e = Expr::or(e, self.parse_xor()?);
        }
        Ok(e)
    }

    fn parse_xor(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_and()?;
        while self.eat(b'^') {
            e = Expr::xor(e, self.parse_and()?);
        }
        Ok(e)
    }

    fn parse_and(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_addsub()?;
        while self.eat(b'&') {
            e = Expr::and(e, self.parse_addsub()?);
        }
        Ok(e)
    }

    fn parse_addsub(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_mul()?;
        loop {
            if self.eat(b'+') {
                e = Expr::add(e, self.parse_mul()?);
            } else if self.eat(b'-') {
                e = Expr::sub(e, self.parse_mul()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn parse_mul(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_unary()?;
        while self.eat(b'*') {
            e = Expr::mul(e, self.parse_unary()?);
        }
        Ok(e)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'~') {
            return Ok(Expr::not(self.parse_unary()?));
        }
        if self.eat(b'-') {
            return Ok(Expr::neg(self.parse_unary()?));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_or()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.parse_literal(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.parse_ident(),
            Some(_) => Err(self.err("expected an expression")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
        Ok(Expr::var(name))
    }

    fn parse_literal(&mut self) -> Result<Expr, ParseError> {
        // Digits accumulate modulo 2^w, so oversized literals wrap rather
        // than overflow.
        let mut value: u64 = 0;
        if self.src[self.pos] == b'0'
            && self.pos + 1 < self.src.len()
            && (self.src[self.pos + 1] | 0x20) == b'x'
        {
            self.pos += 2;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_hexdigit() {
                let d = (self.src[self.pos] as char).to_digit(16).unwrap() as u64;
                value = self.width.add(self.width.mul(value, 16), d);
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.err("expected hex digits after `0x`"));
            }
        } else {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                let d = (self.src[self.pos] - b'0') as u64;
                value = self.width.add(self.width.mul(value, 10), d);
                self.pos += 1;
            }
        }
        Ok(Expr::Const(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{classify, evaluate, render, MbaClass, Width};

    #[test]
    fn intro_expression_parses_and_is_zero_at_origin() {
        let e = parse(
            "((22079729|(5368709120&x))+(5368709207^(5368709120&x)))-5390788936",
            Width::W64,
        )
        .unwrap();
        assert_eq!(evaluate(&e, &[("x", 0)], Width::W64).unwrap(), 0);
    }

    #[test]
    fn semi_linear_with_negative_literal() {
        let e = parse("(x&1111)+(x&-1112)", Width::W64).unwrap();
        match &e {
            Expr::Add(a, b) => {
                assert!(matches!(a.as_ref(), Expr::And(..)));
                assert!(matches!(b.as_ref(), Expr::And(..)));
            }
            other => panic!("expected Add of two And terms, got {other:?}"),
        }
        assert_eq!(classify(&e, Width::W64), MbaClass::SemiLinear);
    }

    #[test]
    fn error_offsets() {
        let err = parse("x+*y", Width::W64).unwrap_err();
        assert_eq!(err.position, 2);
        let err = parse("(x+y", Width::W64).unwrap_err();
        assert_eq!(err.position, 4);
        let err = parse("x y", Width::W64).unwrap_err();
        assert_eq!(err.message, "trailing input");
    }

    #[test]
    fn precedence() {
        // `&` binds looser than `+`; `^` sits between `&` and `|`.
        let e = parse("1&x+y", Width::W64).unwrap();
        assert_eq!(render(&e), "(1&(x+y))");
        let e = parse("x^y|z", Width::W64).unwrap();
        assert_eq!(render(&e), "((x^y)|z)");
        let e = parse("-x*y", Width::W64).unwrap();
        assert_eq!(render(&e), "((-x)*y)");
        let e = parse("~x&y", Width::W64).unwrap();
        assert_eq!(render(&e), "((~x)&y)");
    }

    #[test]
    fn literals() {
        assert_eq!(parse("0x10", Width::W64).unwrap(), Expr::Const(16));
        // Literals wrap modulo 2^w.
        assert_eq!(parse("9", Width::new(3).unwrap()).unwrap(), Expr::Const(1));
        assert_eq!(
            parse("340282366920938463463374607431768211457", Width::W64).unwrap(),
            Expr::Const(1)
        );
    }

    #[test]
    fn render_round_trip() {
        let samples = [
            "((22079729|(5368709120&x))+(5368709207^(5368709120&x)))-5390788936",
            "(x&1111)+(x&-1112)",
            "~(x|y)",
            "2*(x&5)+2*(y&3)",
            "(10*(98^x))",
            "-x",
        ];
        for s in samples {
            let e = parse(s, Width::W64).unwrap();
            let t = render(&e);
            let e2 = parse(&t, Width::W64).unwrap();
            assert_eq!(e, e2, "round trip failed for {s} -> {t}");
        }
    }
}
