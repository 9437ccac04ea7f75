//! The `.ab` relation language.
//!
//! ```text
//! # rank-2 example
//! precision 12
//! alpha = 1
//! basis x y
//! a x = 0
//! a y = b*y + alpha*x
//! ```
//!
//! Lines are `precision N`, `basis s1 s2 ...`, scalar declarations
//! `name = expr` and relations `a sym = expr`. Expressions are sums of
//! products of rational numbers, declared scalars, `i`, `b`, `b^k`,
//! parenthesized expressions and basis symbols, with `/` allowed only by a
//! nonzero constant and exponents at most [`MAX_EXPONENT`]. Without a
//! `basis` line the basis is the left-hand sides in order of appearance. `#`
//! starts a comment.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::BMatrix;
use crate::module::ABModule;
use crate::scalar::Scalar;
use crate::series::BSeries;

/// Names that denote transcendental or irrational quantities.
const NON_RATIONAL: &[&str] = &[
    "pi", "tau", "euler", "gamma", "sqrt", "exp", "log", "ln", "sin", "cos", "tan", "phi",
];

const RESERVED: &[&str] = &["a", "b", "i", "precision", "basis"];

pub const MAX_EXPONENT: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(k + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            if s.matches('.').count() > 1 {
                return Err(parse_err(line, col, format!("malformed number `{s}`")));
            }
            out.push(Token { tok: Tok::Num(s), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                k += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..k].iter().collect()),
                col,
            });
        } else if "+-*/^()=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            k += 1;
        } else {
            return Err(parse_err(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A linear combination of basis symbols plus a constant part, all with series coefficients.
#[derive(Clone, Debug)]
struct Lin {
    constant: BSeries,
    vector: Vec<BSeries>,
}

impl Lin {
    fn constant(c: BSeries, n: usize) -> Self {
        let p = c.precision();
        Lin {
            constant: c,
            vector: vec![BSeries::zero(p); n],
        }
    }

    fn is_scalar(&self) -> bool {
        self.vector.iter().all(BSeries::is_zero)
    }

    fn add(&self, o: &Lin) -> Lin {
        Lin {
            constant: &self.constant + &o.constant,
            vector: self.vector.iter().zip(&o.vector).map(|(x, y)| x + y).collect(),
        }
    }

    fn neg(&self) -> Lin {
        Lin {
            constant: -&self.constant,
            vector: self.vector.iter().map(|x| -x).collect(),
        }
    }

    fn scale(&self, s: &BSeries) -> Lin {
        Lin {
            constant: &self.constant * s,
            vector: self.vector.iter().map(|x| x * s).collect(),
        }
    }
}

struct Ctx<'a> {
    line: usize,
    precision: usize,
    scalars: &'a HashMap<String, Scalar>,
    /// `None` while parsing a scalar declaration, where basis symbols are not allowed.
    basis: Option<&'a [String]>,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end_col: usize,
    ctx: Ctx<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.ctx.line, self.col(), msg)
    }

    fn rank(&self) -> usize {
        self.ctx.basis.map_or(0, <[String]>::len)
    }

    fn expr(&mut self) -> Result<Lin> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.add(&t.neg()) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Lin> {
        let mut acc = self.unary()?;
        while let Some(Tok::Sym(c @ ('*' | '/'))) = self.peek() {
            let c = *c;
            let col = self.col();
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc = if rhs.is_scalar() {
                    acc.scale(&rhs.constant)
                } else if acc.is_scalar() {
                    rhs.scale(&acc.constant)
                } else {
                    return Err(parse_err(self.ctx.line, col, "product of two basis symbols"));
                };
            } else {
                let d = &rhs.constant;
                if !rhs.is_scalar() || d.degree().unwrap_or(0) > 0 || d.is_zero() {
                    return Err(parse_err(self.ctx.line, col, "division only by a nonzero constant"));
                }
                let inv = d.constant_term().inv()?;
                acc = acc.scale(&BSeries::constant(inv, self.ctx.precision));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Lin> {
        match self.peek() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Lin> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            let col = self.col();
            let k = match self.peek() {
                Some(Tok::Num(s)) if s.chars().all(|c| c.is_ascii_digit()) => s
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k <= MAX_EXPONENT)
                    .ok_or_else(|| parse_err(self.ctx.line, col, "exponent too large"))?,
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            };
            self.pos += 1;
            if !base.is_scalar() {
                return Err(parse_err(self.ctx.line, col, "power of a basis symbol"));
            }
            let mut acc = BSeries::one(self.ctx.precision);
            let mut sq = base.constant.clone();
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    acc = &acc * &sq;
                }
                sq = &sq * &sq;
                e >>= 1;
            }
            return Ok(Lin::constant(acc, self.rank()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Lin> {
        let p = self.ctx.precision;
        let n = self.rank();
        let col = self.col();
        let line = self.ctx.line;
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Tok::Num(s) => {
                let v: Scalar = s
                    .parse()
                    .map_err(|_| parse_err(line, col, format!("malformed number `{s}`")))?;
                Ok(Lin::constant(BSeries::constant(v, p), n))
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Tok::Sym(c) => Err(parse_err(line, col, format!("unexpected `{c}`"))),
            Tok::Ident(name) => {
                if name == "b" {
                    return Ok(Lin::constant(BSeries::monomial(Scalar::one(), 1, p), n));
                }
                if name == "i" {
                    return Ok(Lin::constant(BSeries::constant(Scalar::i(), p), n));
                }
                if let Some(v) = self.ctx.scalars.get(&name) {
                    return Ok(Lin::constant(BSeries::constant(v.clone(), p), n));
                }
                if let Some(basis) = self.ctx.basis {
                    if let Some(idx) = basis.iter().position(|s| *s == name) {
                        let mut l = Lin::constant(BSeries::zero(p), n);
                        l.vector[idx] = BSeries::one(p);
                        return Ok(l);
                    }
                }
                if NON_RATIONAL.contains(&name.to_ascii_lowercase().as_str())
                    || matches!(self.peek(), Some(Tok::Sym('(')))
                {
                    return Err(Error::NonRationalCoefficient {
                        symbol: name,
                        line,
                        column: col,
                    });
                }
                Err(Error::UndeclaredSymbol {
                    symbol: name,
                    line,
                    column: col,
                })
            }
        }
    }
}

enum Line<'a> {
    Precision(usize),
    Basis(Vec<(String, usize)>),
    Scalar(String, &'a str, usize),
    Relation(String, usize, &'a str, usize),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn classify(raw: &str, line: usize) -> Result<Option<Line<'_>>> {
    let text = raw.split('#').next().unwrap_or("");
    if text.trim().is_empty() {
        return Ok(None);
    }
    let indent = text.len() - text.trim_start().len();
    let body = text.trim_start();
    let col = |byte: usize| text[..byte].chars().count() + 1;
    if let Some(rest) = body
        .strip_prefix("precision")
        .filter(|r| r.starts_with(char::is_whitespace))
    {
        let n = rest.trim();
        return n
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .map(|n| Some(Line::Precision(n)))
            .ok_or_else(|| parse_err(line, col(indent + 9), format!("invalid precision `{n}`")));
    }
    if let Some(rest) = body
        .strip_prefix("basis")
        .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
    {
        let mut syms = Vec::new();
        let mut offset = indent + 5;
        for part in rest.split_whitespace() {
            let at = text[offset..].find(part).unwrap() + offset;
            if !is_identifier(part) || RESERVED.contains(&part) {
                return Err(parse_err(line, col(at), format!("invalid basis symbol `{part}`")));
            }
            syms.push((part.to_string(), col(at)));
            offset = at + part.len();
        }
        return Ok(Some(Line::Basis(syms)));
    }
    let eq = text
        .find('=')
        .ok_or_else(|| parse_err(line, col(indent), "expected `=`"))?;
    let lhs = text[..eq].trim();
    let rhs = &text[eq + 1..];
    let rhs_col = col(eq + 1);
    let words: Vec<&str> = lhs.split_whitespace().collect();
    match words.as_slice() {
        ["a", sym] => {
            let at = indent + lhs.rfind(sym).unwrap();
            if !is_identifier(sym) || RESERVED.contains(sym) {
                return Err(parse_err(line, col(at), format!("invalid basis symbol `{sym}`")));
            }
            Ok(Some(Line::Relation(sym.to_string(), col(at), rhs, rhs_col)))
        }
        [name] => {
            if !is_identifier(name) || RESERVED.contains(name) {
                return Err(parse_err(line, col(indent), format!("invalid scalar name `{name}`")));
            }
            Ok(Some(Line::Scalar(name.to_string(), rhs, rhs_col)))
        }
        _ => Err(parse_err(
            line,
            col(indent),
            "expected `a <symbol> = ...` or `<name> = ...`",
        )),
    }
}

fn eval(text: &str, line: usize, col0: usize, ctx: Ctx<'_>) -> Result<Lin> {
    let toks = tokenize(text, line, col0)?;
    let end_col = col0 + text.chars().count();
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end_col,
        ctx,
    };
    if toks.is_empty() {
        return Err(p.err("empty expression"));
    }
    let v = p.expr()?;
    if p.pos < toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(v)
}

/// Parses a relation script. `default_precision` applies when the script has
/// no `precision` line; `override_precision` replaces it either way.
pub fn parse_module(text: &str, default_precision: usize, override_precision: Option<usize>) -> Result<ABModule> {
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        if let Some(l) = classify(raw, k + 1)? {
            lines.push((k + 1, l));
        }
    }
    let mut precision = default_precision;
    let mut basis: Option<Vec<String>> = None;
    for (line, l) in &lines {
        match l {
            Line::Precision(n) => precision = *n,
            Line::Basis(syms) => {
                if basis.is_some() {
                    return Err(parse_err(*line, 1, "second `basis` line"));
                }
                let mut seen: Vec<String> = Vec::new();
                for (s, c) in syms {
                    if seen.contains(s) {
                        return Err(parse_err(*line, *c, format!("duplicate basis symbol `{s}`")));
                    }
                    seen.push(s.clone());
                }
                basis = Some(seen);
            }
            _ => {}
        }
    }
    if let Some(p) = override_precision {
        precision = p;
    }
    let basis: Vec<String> = match basis {
        Some(b) => b,
        None => {
            let mut b: Vec<String> = Vec::new();
            for (_, l) in &lines {
                if let Line::Relation(s, _, _, _) = l {
                    if !b.contains(s) {
                        b.push(s.clone());
                    }
                }
            }
            b
        }
    };
    let n = basis.len();
    let mut scalars: HashMap<String, Scalar> = HashMap::new();
    let mut columns: Vec<Option<Vec<BSeries>>> = vec![None; n];
    for (line, l) in &lines {
        match l {
            Line::Scalar(name, rhs, c) => {
                if basis.contains(name) {
                    return Err(parse_err(*line, 1, format!("`{name}` is already a basis symbol")));
                }
                let ctx = Ctx {
                    line: *line,
                    precision: 2,
                    scalars: &scalars,
                    basis: None,
                };
                let v = eval(rhs, *line, *c, ctx)?;
                if !v.constant.coeff(1).is_zero() {
                    return Err(parse_err(*line, *c, "scalar declaration depends on `b`"));
                }
                let value = v.constant.constant_term();
                scalars.insert(name.clone(), value);
            }
            Line::Relation(sym, scol, rhs, c) => {
                let idx = basis
                    .iter()
                    .position(|s| s == sym)
                    .ok_or_else(|| Error::UndeclaredSymbol {
                        symbol: sym.clone(),
                        line: *line,
                        column: *scol,
                    })?;
                if columns[idx].is_some() {
                    return Err(parse_err(*line, *scol, format!("second relation for `{sym}`")));
                }
                let ctx = Ctx {
                    line: *line,
                    precision,
                    scalars: &scalars,
                    basis: Some(&basis),
                };
                let v = eval(rhs, *line, *c, ctx)?;
                if !v.constant.is_zero() {
                    return Err(parse_err(
                        *line,
                        *c,
                        "right-hand side has a term without a basis symbol",
                    ));
                }
                columns[idx] = Some(v.vector);
            }
            _ => {}
        }
    }
    for (idx, col) in columns.iter().enumerate() {
        if col.is_none() {
            // only reachable with an explicit basis line
            let (line, column) = lines
                .iter()
                .find_map(|(k, l)| match l {
                    Line::Basis(syms) => syms.iter().find(|(s, _)| *s == basis[idx]).map(|(_, c)| (*k, *c)),
                    _ => None,
                })
                .unwrap_or((1, 1));
            return Err(parse_err(
                line,
                column,
                format!("no relation for basis symbol `{}`", basis[idx]),
            ));
        }
    }
    let cols: Vec<Vec<BSeries>> = columns.into_iter().map(Option::unwrap).collect();
    let m = BMatrix::from_columns(n, &cols, precision);
    ABModule::new(m, basis)
}

fn safe_label(l: &str, taken: &[String]) -> String {
    let mut s: String = l
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !s.starts_with(|c: char| c.is_alphabetic() || c == '_') {
        s.insert(0, 'e');
    }
    while RESERVED.contains(&s.as_str()) || NON_RATIONAL.contains(&s.as_str()) || taken.contains(&s) {
        s.push('_');
    }
    s
}

/// Writes a module as a relation script that parses back to the same presentation.
pub fn to_script(e: &ABModule) -> String {
    let mut labels: Vec<String> = Vec::new();
    for l in e.labels() {
        let s = safe_label(l, &labels);
        labels.push(s);
    }
    let renamed = e.with_labels(labels.clone()).expect("distinct labels");
    let mut out = format!("precision {}\n", e.precision());
    if !labels.is_empty() {
        out.push_str(&format!("basis {}\n", labels.join(" ")));
    }
    for r in renamed.relations() {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const RANK4: &str = "\
precision 12
lambda = 1
mu = 1/3
a e1 = lambda*b*e1
a e2 = mu*b*e2 + e1
a e3 = -mu*b*e3 + e1
a e4 = -lambda*b*e4 + e2 - e3
";

    #[test]
    fn rank4_script() {
        let e = parse_module(RANK4, 12, None).unwrap();
        assert_eq!(e.rank(), 4);
        let a4 = e.a_apply(&e.basis_element(3)).unwrap();
        let p = 12;
        let expected = vec![
            BSeries::zero(p),
            BSeries::one(p),
            -&BSeries::one(p),
            BSeries::monomial(Scalar::from_int(-1), 1, p),
        ];
        assert_eq!(a4.coords, expected);
        assert!(e.validate().passed);
    }

    #[test]
    fn single_line_is_e0() {
        let e = parse_module("a e = 0", 6, None).unwrap();
        assert_eq!(e, ABModule::elementary(&Scalar::zero(), 6));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_module("a e = pi*b*e", 6, None).unwrap_err(),
            Error::NonRationalCoefficient {
                symbol: "pi".into(),
                line: 1,
                column: 7
            }
        );
        assert_eq!(
            parse_module("a e = b*f", 6, None).unwrap_err(),
            Error::UndeclaredSymbol {
                symbol: "f".into(),
                line: 1,
                column: 9
            }
        );
        assert!(matches!(
            parse_module("a e = b*e\na e = (b", 6, None).unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            parse_module("a e = e*e", 6, None).unwrap_err(),
            Error::Parse { line: 1, column: 8, .. }
        ));
        assert!(matches!(
            parse_module("c = 1 + b\na e = c*b*e", 6, None).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn round_trip() {
        let e = parse_module(RANK4, 12, None).unwrap();
        for m in [e.clone(), e.adjoint(), e.conjugate(), e.tensor(&e.dual()).unwrap()] {
            let back = parse_module(&to_script(&m), 3, None).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.precision(), m.precision());
        }
        let big = parse_module("a x = ((1 + b)^20 - 1)*x", 4, None).unwrap();
        assert_eq!(big.a_matrix().get(0, 0), &BSeries::from_ints(&[0, 20, 190, 1140], 4));
        let c = parse_module("a x = (1/2 + i)*b*x + (1 - b^2)*y\na y = -i*b^3*y", 8, None).unwrap();
        assert_eq!(parse_module(&to_script(&c), 8, None).unwrap(), c);
    }
}
