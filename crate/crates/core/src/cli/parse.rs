//! Hand-written lexer and recursive-descent parser for problem files and
//! for the polynomial / form expressions used in them and in reports.
//!
//! ```text
//! file     = line*
//! line     = "vars" ident+ | "codim" int | "omega" expr | "hyp" expr | "#" comment
//! expr     = ["+"|"-"] term (("+"|"-") term)*
//! term     = power (("*"|"/") power)*
//! power    = atom ("^" (int | atom))*
//! atom     = int | int "i" | "i" | ident | "d" ident | "(" expr ")"
//! ```
//!
//! `^` after a polynomial takes an integer exponent; after a form of
//! positive degree it is the wedge product.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::forms::{FormError, KForm};
use crate::poly::{GaussianRational, MPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String> },
    UndeclaredVariable(String),
    DegreeMismatch,
}

/// Parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if let ParseErrorKind::Syntax { expected } = &self.kind {
            if !expected.is_empty() {
                write!(f, " (expected {})", expected.join(", "))?;
            }
        }
        Ok(())
    }
}

impl ParseError {
    fn syntax(line: usize, col: usize, message: impl Into<String>, expected: &[&str]) -> Self {
        ParseError {
            line,
            col,
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
            },
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    /// An integer immediately followed by `i`, as in `3i`.
    Imag(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Imag(n) => format!("`{n}i`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of line".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokens with 1-based columns, relative to `col0`.
fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let n: BigInt = chars[start..k].iter().collect::<String>().parse().expect("digits");
            if k < chars.len() && chars[k] == 'i' && !(k + 1 < chars.len() && is_ident_char(chars[k + 1])) {
                k += 1;
                out.push((Tok::Imag(n), col));
            } else if k < chars.len() && is_ident_start(chars[k]) {
                return Err(ParseError::syntax(
                    line,
                    col0 + k,
                    "identifier directly after number",
                    &["`*`"],
                ));
            } else {
                out.push((Tok::Int(n), col));
            }
        } else if is_ident_start(c) {
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), col));
        } else {
            return Err(ParseError::syntax(
                line,
                col,
                format!("unexpected character `{c}`"),
                &[],
            ));
        }
    }
    out.push((Tok::End, col0 + chars.len()));
    Ok(out)
}

/// Expression parser over a fixed variable list.
struct ExprParser<'a> {
    vars: &'a [String],
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn err(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError::syntax(self.line, self.col(), message, expected)
    }

    fn degree_err(&self, col: usize, a: usize, b: usize) -> ParseError {
        ParseError {
            line: self.line,
            col,
            kind: ParseErrorKind::DegreeMismatch,
            message: format!("cannot add forms of degree {a} and {b}"),
        }
    }

    fn constant(&self, c: GaussianRational) -> KForm {
        KForm::from_poly(MPoly::constant(self.n(), c))
    }

    fn parse_full(&mut self) -> Result<KForm, ParseError> {
        let v = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.err(
                format!("unexpected {}", self.peek().describe()),
                &["`+`", "`-`", "`*`", "end of line"],
            ));
        }
        Ok(v)
    }

    fn add(&self, a: KForm, b: KForm, col: usize) -> Result<KForm, ParseError> {
        // A bare zero adapts to the other side's degree.
        if a.is_zero() && a.degree() == 0 {
            return Ok(b);
        }
        if b.is_zero() && b.degree() == 0 {
            return Ok(a);
        }
        a.checked_add(&b).map_err(|e| match e {
            FormError::DegreeMismatch { left, right } => self.degree_err(col, left, right),
            other => ParseError::syntax(self.line, col, other.to_string(), &[]),
        })
    }

    fn expr(&mut self) -> Result<KForm, ParseError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            let col = self.col();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.add(acc, t, col)?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.add(acc, -&t, col)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<KForm, ParseError> {
        let mut acc = self.power()?;
        loop {
            let col = self.col();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = match (acc.degree(), rhs.degree()) {
                        (0, _) => rhs.mul_poly(&acc.coeff(&crate::forms::BasisIndex::empty())),
                        (_, 0) => acc.mul_poly(&rhs.coeff(&crate::forms::BasisIndex::empty())),
                        _ => {
                            return Err(ParseError::syntax(
                                self.line,
                                col,
                                "`*` between two forms; use `^` for the wedge product",
                                &["`^`"],
                            ))
                        }
                    };
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.power()?;
                    let c = (rhs.degree() == 0)
                        .then(|| rhs.coeff(&crate::forms::BasisIndex::empty()))
                        .filter(|p| p.is_constant() && !p.is_zero())
                        .ok_or_else(|| {
                            ParseError::syntax(self.line, col, "division only by a nonzero constant", &[])
                        })?;
                    let inv = c.constant_term().inv().expect("nonzero");
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<KForm, ParseError> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            if acc.degree() == 0 {
                let col = self.col();
                let e = match self.bump() {
                    Tok::Int(n) => n
                        .to_u32()
                        .ok_or_else(|| ParseError::syntax(self.line, col, "exponent too large", &[]))?,
                    t => {
                        return Err(ParseError::syntax(
                            self.line,
                            col,
                            format!("unexpected {} after `^`", t.describe()),
                            &["nonnegative integer exponent"],
                        ))
                    }
                };
                let p = acc.coeff(&crate::forms::BasisIndex::empty());
                acc = KForm::from_poly(p.pow(e));
            } else {
                let rhs = self.atom()?;
                acc = acc.wedge(&rhs).expect("same arity");
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<KForm, ParseError> {
        let col = self.col();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(self.constant(GaussianRational::real(BigRational::from_integer(n))))
            }
            Tok::Imag(n) => {
                self.bump();
                Ok(self.constant(GaussianRational::new(BigRational::zero(), BigRational::from_integer(n))))
            }
            Tok::Ident(name) => {
                self.bump();
                self.ident(name, col)
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err("unclosed parenthesis", &["`)`"]));
                }
                self.bump();
                Ok(v)
            }
            t => Err(self.err(
                format!("unexpected {}", t.describe()),
                &["number", "variable", "differential", "`(`"],
            )),
        }
    }

    fn ident(&self, name: String, col: usize) -> Result<KForm, ParseError> {
        if name == "i" {
            return Ok(self.constant(GaussianRational::i()));
        }
        if let Some(k) = self.vars.iter().position(|v| *v == name) {
            return Ok(KForm::from_poly(MPoly::var(self.n(), k)));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(k) = self.vars.iter().position(|v| v == rest) {
                return Ok(KForm::basis(self.n(), &[k]).expect("declared variable"));
            }
        }
        Err(ParseError {
            line: self.line,
            col,
            kind: ParseErrorKind::UndeclaredVariable(name.clone()),
            message: format!("undeclared variable `{name}`"),
        })
    }
}

/// Parses a form (or polynomial, as a 0-form) over `vars`.
pub fn parse_expr(text: &str, vars: &[String], line: usize, col0: usize) -> Result<KForm, ParseError> {
    let toks = lex(text, line, col0)?;
    ExprParser {
        vars,
        toks,
        pos: 0,
        line,
    }
    .parse_full()
}

/// Parses a polynomial expression.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<MPoly, ParseError> {
    parse_poly_at(text, vars, 1, 1)
}

fn parse_poly_at(text: &str, vars: &[String], line: usize, col0: usize) -> Result<MPoly, ParseError> {
    let f = parse_expr(text, vars, line, col0)?;
    if f.degree() != 0 {
        return Err(ParseError {
            line,
            col: col0,
            kind: ParseErrorKind::DegreeMismatch,
            message: format!("expected a polynomial, found a {}-form", f.degree()),
        });
    }
    Ok(f.coeff(&crate::forms::BasisIndex::empty()))
}

/// Parses a form of known degree; a literal `0` becomes the zero form of
/// that degree.
pub fn parse_form(text: &str, vars: &[String], degree: usize) -> Result<KForm, ParseError> {
    let f = parse_expr(text, vars, 1, 1)?;
    if f.is_zero() {
        return Ok(KForm::zero(vars.len(), degree));
    }
    if f.degree() != degree {
        return Err(ParseError {
            line: 1,
            col: 1,
            kind: ParseErrorKind::DegreeMismatch,
            message: format!("expected a {degree}-form, found a {}-form", f.degree()),
        });
    }
    Ok(f)
}

/// Checks a declared variable list.
pub fn validate_vars(vars: &[String]) -> Result<(), String> {
    for (k, v) in vars.iter().enumerate() {
        if !v.chars().next().is_some_and(is_ident_start) || !v.chars().all(is_ident_char) {
            return Err(format!("`{v}` is not an identifier"));
        }
        if v == "i" {
            return Err("`i` is reserved for the imaginary unit".into());
        }
        if vars[..k].contains(v) {
            return Err(format!("variable `{v}` declared twice"));
        }
    }
    for v in vars {
        let dv = format!("d{v}");
        if vars.contains(&dv) {
            return Err(format!("variable `{dv}` clashes with the differential of `{v}`"));
        }
    }
    Ok(())
}

/// A parsed problem: variables, codimension, the form and the candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub codim: usize,
    pub omega: KForm,
    pub hyps: Vec<MPoly>,
    /// Driver flags (`max-degree`, `quiet`, ...); not part of the file.
    pub options: BTreeMap<String, String>,
}

impl ProblemFile {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Canonical text; `parse_problem` of it gives back `self` (options aside).
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "vars {}\ncodim {}\nomega {}\n",
            self.vars.join(" "),
            self.codim,
            self.omega.render(&self.vars)
        );
        for h in &self.hyps {
            out.push_str(&format!("hyp {}\n", h.render(&self.vars)));
        }
        out
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut vars: Option<Vec<String>> = None;
    let mut codim: Option<(usize, usize)> = None;
    let mut omega: Option<(KForm, usize)> = None;
    let mut hyps = Vec::new();
    let mut last_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let keyword = &trimmed[..kw_len];
        let rest = &trimmed[kw_len..];
        let rest_col = indent + kw_len + 1;
        let kw_col = indent + 1;
        const KEYWORDS: &[&str] = &["`vars`", "`codim`", "`omega`", "`hyp`", "`#`"];
        if vars.is_none() && keyword != "vars" {
            return Err(ParseError::syntax(
                line,
                kw_col,
                format!("unexpected `{keyword}` before the variable declaration"),
                &["`vars`"],
            ));
        }
        match keyword {
            "vars" => {
                if vars.is_some() {
                    return Err(ParseError::syntax(
                        line,
                        kw_col,
                        "duplicate `vars` line",
                        &["`codim`", "`omega`", "`hyp`"],
                    ));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(ParseError::syntax(
                        line,
                        rest_col,
                        "empty variable list",
                        &["identifier"],
                    ));
                }
                validate_vars(&names).map_err(|m| ParseError::syntax(line, rest_col, m, &["identifier"]))?;
                vars = Some(names);
            }
            "codim" => {
                if codim.is_some() {
                    return Err(ParseError::syntax(
                        line,
                        kw_col,
                        "duplicate `codim` line",
                        &["`omega`", "`hyp`"],
                    ));
                }
                let t = rest.trim();
                let p: usize = t.parse().map_err(|_| {
                    ParseError::syntax(
                        line,
                        rest_col + (rest.len() - rest.trim_start().len()),
                        format!("invalid codimension `{t}`"),
                        &["integer"],
                    )
                })?;
                codim = Some((p, line));
            }
            "omega" => {
                if omega.is_some() {
                    return Err(ParseError::syntax(line, kw_col, "duplicate `omega` line", &["`hyp`"]));
                }
                let f = parse_expr(rest, vars.as_ref().unwrap(), line, rest_col)?;
                omega = Some((f, line));
            }
            "hyp" => {
                hyps.push(parse_poly_at(rest, vars.as_ref().unwrap(), line, rest_col)?);
            }
            _ => {
                return Err(ParseError::syntax(
                    line,
                    kw_col,
                    format!("unknown keyword `{keyword}`"),
                    KEYWORDS,
                ));
            }
        }
    }
    let end = last_line + 1;
    let vars = vars.ok_or_else(|| ParseError::syntax(end, 1, "missing variable declaration", &["`vars`"]))?;
    let (codim, codim_line) = codim.ok_or_else(|| ParseError::syntax(end, 1, "missing codimension", &["`codim`"]))?;
    let (omega, omega_line) = omega.ok_or_else(|| ParseError::syntax(end, 1, "missing form", &["`omega`"]))?;
    let omega = if omega.is_zero() {
        KForm::zero(vars.len(), codim)
    } else {
        omega
    };
    if omega.degree() != codim {
        return Err(ParseError {
            line: omega_line,
            col: 1,
            kind: ParseErrorKind::DegreeMismatch,
            message: format!(
                "omega has degree {}, codim (line {codim_line}) is {codim}",
                omega.degree()
            ),
        });
    }
    Ok(ProblemFile {
        vars,
        codim,
        omega,
        hyps,
        options: BTreeMap::new(),
    })
}
