//! Text formats: polynomial expressions, forms, `.alg` algebra files and
//! `.map` chart files. All files start with the header line `format 1`.
//!
//! The `.alg` grammar is line oriented:
//!
//! ```text
//! format 1
//! name T3-2ii                 # optional identifier
//! dim 4
//! param l != 0, 1             # zero or more, with optional exclusions
//! frame P1 P2 Q1 Q2           # optional frame roles for e1..e4
//! [e2, e3] = e1               # bracket dialect ...
//! d e3* = e1*^e2* + e3*^e4*   # ... or Maurer-Cartan dialect (not both)
//! claim derived 2             # optional structure claims
//! claim omega = e1*^e3* + e2*^e4*
//! claim not-exact
//! sample l = 2                # documented parameter samples
//! ```
//!
//! Coefficients are rationals `p/q` or polynomials in the declared parameters
//! (juxtaposition multiplies, `^` is the power); `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exterior::KForm;
use crate::liealg::{LieAlgebra, DIMENSION_CAP};
use crate::poly::Poly;
use crate::scalar::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

// ---------------------------------------------------------------- tokenizer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    /// `e<k>*`, a basis covector written without spaces.
    Covector(u8),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Caret,
    Star,
    Slash,
    Comma,
    Eq,
    NotEq,
}

#[derive(Debug, Clone)]
struct Sp {
    tok: Tok,
    col: usize,
}

fn tokenize(src: &str, line: usize) -> Result<Vec<Sp>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '#' => break,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Sp { tok: Tok::Num(chars[start..i].iter().collect()), col });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                // `e<k>*` glued together is a covector token
                if i < chars.len() && chars[i] == '*' {
                    if let Some(k) = covector_index(&word) {
                        i += 1;
                        out.push(Sp { tok: Tok::Covector(k), col });
                        continue;
                    }
                }
                out.push(Sp { tok: Tok::Ident(word), col });
            }
            '(' => {
                out.push(Sp { tok: Tok::LParen, col });
                i += 1;
            }
            ')' => {
                out.push(Sp { tok: Tok::RParen, col });
                i += 1;
            }
            '[' => {
                out.push(Sp { tok: Tok::LBracket, col });
                i += 1;
            }
            ']' => {
                out.push(Sp { tok: Tok::RBracket, col });
                i += 1;
            }
            '+' => {
                out.push(Sp { tok: Tok::Plus, col });
                i += 1;
            }
            '-' => {
                out.push(Sp { tok: Tok::Minus, col });
                i += 1;
            }
            '^' => {
                out.push(Sp { tok: Tok::Caret, col });
                i += 1;
            }
            '*' => {
                out.push(Sp { tok: Tok::Star, col });
                i += 1;
            }
            '/' => {
                out.push(Sp { tok: Tok::Slash, col });
                i += 1;
            }
            ',' => {
                out.push(Sp { tok: Tok::Comma, col });
                i += 1;
            }
            '=' => {
                out.push(Sp { tok: Tok::Eq, col });
                i += 1;
            }
            '!' => {
                if i + 1 < chars.len() && chars[i + 1] == '=' {
                    out.push(Sp { tok: Tok::NotEq, col });
                    i += 2;
                } else {
                    return err(line, col, "unexpected '!'");
                }
            }
            _ => return err(line, col, format!("unexpected character '{c}'")),
        }
    }
    Ok(out)
}

fn covector_index(word: &str) -> Option<u8> {
    let rest = word.strip_prefix('e')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

// ------------------------------------------------------------- expressions

struct Cursor<'a> {
    toks: &'a [Sp],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|s| s.col).unwrap_or_else(|| {
            self.toks.last().map(|s| s.col + 1).unwrap_or(1)
        })
    }

    fn next(&mut self) -> Option<&Sp> {
        let s = self.toks.get(self.pos);
        if s.is_some() {
            self.pos += 1;
        }
        s
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        let (line, col) = (self.line, self.col());
        match self.next() {
            Some(s) if &s.tok == t => Ok(()),
            _ => err(line, col, format!("expected {what}")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col(), msg)
    }
}

fn parse_rational(cur: &mut Cursor) -> Result<Rat, ParseError> {
    let numer = match cur.next().map(|s| s.tok.clone()) {
        Some(Tok::Num(n)) => n,
        _ => return cur.error("expected a number"),
    };
    let numer: i128 = numer.parse().map_err(|_| ParseError {
        line: cur.line,
        col: cur.col(),
        msg: "integer too large".into(),
    })?;
    let mut value = Rat::new(numer.into(), 1.into());
    if cur.peek() == Some(&Tok::Slash) {
        cur.next();
        match cur.next().map(|s| s.tok.clone()) {
            Some(Tok::Num(d)) => {
                let den: i128 = d.parse().map_err(|_| ParseError {
                    line: cur.line,
                    col: cur.col(),
                    msg: "integer too large".into(),
                })?;
                if den == 0 {
                    return cur.error("zero denominator");
                }
                value = Rat::new(numer.into(), den.into());
            }
            _ => return cur.error("expected a denominator"),
        }
    }
    Ok(value)
}

/// factor := rational | ident['^' num] | '(' expr ')' ['^' num]
fn parse_factor(cur: &mut Cursor) -> Result<Poly, ParseError> {
    let base = match cur.peek() {
        Some(Tok::Num(_)) => Poly::constant(parse_rational(cur)?),
        Some(Tok::Ident(name)) => {
            let name = name.clone();
            cur.next();
            Poly::var(&name)
        }
        Some(Tok::LParen) => {
            cur.next();
            let inner = parse_expr(cur)?;
            cur.expect(&Tok::RParen, "')'")?;
            inner
        }
        _ => return cur.error("expected a coefficient factor"),
    };
    if cur.peek() == Some(&Tok::Caret) {
        cur.next();
        match cur.next().map(|s| s.tok.clone()) {
            Some(Tok::Num(n)) => {
                let e: u32 = n
                    .parse()
                    .map_err(|_| ParseError { line: cur.line, col: cur.col(), msg: "bad exponent".into() })?;
                return Ok(base.pow(e));
            }
            _ => return cur.error("expected an exponent"),
        }
    }
    Ok(base)
}

fn starts_factor(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen))
}

/// term := factor (['*'] factor)*
fn parse_term(cur: &mut Cursor) -> Result<Poly, ParseError> {
    let mut acc = parse_factor(cur)?;
    loop {
        if cur.peek() == Some(&Tok::Star) {
            cur.next();
            acc = &acc * &parse_factor(cur)?;
        } else if starts_factor(cur.peek()) {
            acc = &acc * &parse_factor(cur)?;
        } else {
            break;
        }
    }
    Ok(acc)
}

/// expr := ['+'|'-'] term (('+'|'-') term)*
fn parse_expr(cur: &mut Cursor) -> Result<Poly, ParseError> {
    let mut negate = false;
    match cur.peek() {
        Some(Tok::Minus) => {
            negate = true;
            cur.next();
        }
        Some(Tok::Plus) => {
            cur.next();
        }
        _ => {}
    }
    let mut acc = parse_term(cur)?;
    if negate {
        acc = -&acc;
    }
    loop {
        match cur.peek() {
            Some(Tok::Plus) => {
                cur.next();
                acc = &acc + &parse_term(cur)?;
            }
            Some(Tok::Minus) => {
                cur.next();
                acc = &acc - &parse_term(cur)?;
            }
            _ => break,
        }
    }
    Ok(acc)
}

/// Parse a polynomial from a standalone string.
pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    let toks = tokenize(src, 1)?;
    let mut cur = Cursor { toks: &toks, pos: 0, line: 1 };
    let p = parse_expr(&mut cur)?;
    if !cur.at_end() {
        return cur.error("trailing input after polynomial");
    }
    Ok(p)
}

// ------------------------------------------------------------------- forms

/// One additive term of a form expression: scalar factors followed by a
/// wedge of basis atoms. `atom` extracts a basis index from a token.
fn parse_form_term(
    cur: &mut Cursor,
    atom: &dyn Fn(&Tok) -> Option<u8>,
) -> Result<(Poly, Vec<u8>), ParseError> {
    let mut coeff = Poly::one();
    let mut saw_scalar = false;
    loop {
        if let Some(t) = cur.peek() {
            if let Some(_k) = atom(t) {
                break;
            }
        }
        if cur.peek() == Some(&Tok::Star) {
            cur.next();
            continue;
        }
        if starts_factor(cur.peek()) {
            // a parenthesized or plain scalar factor
            coeff = &coeff * &parse_factor(cur)?;
            saw_scalar = true;
        } else if saw_scalar {
            // pure scalar term (a 0-form contribution)
            return Ok((coeff, Vec::new()));
        } else {
            return cur.error("expected a coefficient or a basis form");
        }
    }
    let mut indices = Vec::new();
    while let Some(k) = cur.peek().and_then(&atom) {
        cur.next();
        indices.push(k);
        if cur.peek() == Some(&Tok::Caret) {
            // wedge separator between basis atoms
            let next_is_atom = cur
                .toks
                .get(cur.pos + 1)
                .map(|s| atom(&s.tok).is_some())
                .unwrap_or(false);
            if !next_is_atom {
                return cur.error("expected a basis form after '^'");
            }
            cur.next();
        } else {
            break;
        }
    }
    Ok((coeff, indices))
}

fn parse_form_tokens(
    cur: &mut Cursor,
    dim: usize,
    atom: &dyn Fn(&Tok) -> Option<u8>,
) -> Result<KForm, ParseError> {
    // explicit zero
    if cur.toks.len() == cur.pos + 1 {
        if let Some(Tok::Num(n)) = cur.peek() {
            if n == "0" {
                cur.next();
                return Ok(KForm::zero(dim, 0));
            }
        }
    }
    let mut terms: Vec<(Poly, Vec<u8>)> = Vec::new();
    let mut negate = match cur.peek() {
        Some(Tok::Minus) => {
            cur.next();
            true
        }
        Some(Tok::Plus) => {
            cur.next();
            false
        }
        _ => false,
    };
    loop {
        let (coeff, idx) = parse_form_term(cur, atom)?;
        let coeff = if negate { -&coeff } else { coeff };
        for &i in &idx {
            if i == 0 || i as usize > dim {
                return cur.error(format!("basis index {i} out of range 1..{dim}"));
            }
        }
        terms.push((coeff, idx));
        match cur.peek() {
            Some(Tok::Plus) => {
                negate = false;
                cur.next();
            }
            Some(Tok::Minus) => {
                negate = true;
                cur.next();
            }
            None => break,
            _ => return cur.error("expected '+', '-' or end of expression"),
        }
    }
    let degree = terms.first().map(|(_, i)| i.len()).unwrap_or(0);
    if terms.iter().any(|(_, i)| i.len() != degree) {
        return cur.error("mixed degrees in one form expression");
    }
    let mut form = KForm::zero(dim, degree);
    for (c, idx) in terms {
        form.add_signed_term(&idx, c);
    }
    Ok(form)
}

/// Parse a covector-basis form such as `e1*^e3* + (1-l) e2*^e4*`.
pub fn parse_kform(src: &str, dim: usize) -> Result<KForm, ParseError> {
    let toks = tokenize(src, 1)?;
    let mut cur = Cursor { toks: &toks, pos: 0, line: 1 };
    let atom = |t: &Tok| match t {
        Tok::Covector(k) => Some(*k),
        _ => None,
    };
    let f = parse_form_tokens(&mut cur, dim, &atom)?;
    if !cur.at_end() {
        return cur.error("trailing input after form");
    }
    Ok(f)
}

// -------------------------------------------------------------- .alg files

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamDecl {
    pub name: String,
    pub excluded: Vec<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Bracket,
    MaurerCartan,
}

/// Frame roles for the canonical 4-dimensional frame `(P1, P2, Q1, Q2)`;
/// values are 1-based basis indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameLabels {
    pub p1: u8,
    pub p2: u8,
    pub q1: u8,
    pub q2: u8,
}

impl FrameLabels {
    pub fn standard() -> Self {
        FrameLabels { p1: 1, p2: 2, q1: 3, q2: 4 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Claims {
    pub derived: Option<usize>,
    pub omega: Option<KForm>,
    pub exact: Option<bool>,
    pub contact: Option<bool>,
    pub symplectic: Option<bool>,
    pub unique_up_to_sign: bool,
    pub h4_zero: bool,
}

impl Claims {
    pub fn is_empty(&self) -> bool {
        self.derived.is_none()
            && self.omega.is_none()
            && self.exact.is_none()
            && self.contact.is_none()
            && self.symplectic.is_none()
            && !self.unique_up_to_sign
            && !self.h4_zero
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub name: Option<String>,
    pub dim: usize,
    pub params: Vec<ParamDecl>,
    pub dialect: Dialect,
    pub algebra: LieAlgebra,
    pub frame: Option<FrameLabels>,
    pub claims: Claims,
    /// Documented parameter samples for reproducible verification runs.
    pub samples: Vec<BTreeMap<String, Rat>>,
}

impl AlgebraFile {
    /// Check a sample against the declared exclusions.
    pub fn sample_allowed(&self, sample: &BTreeMap<String, Rat>) -> bool {
        self.params.iter().all(|p| match sample.get(&p.name) {
            Some(v) => !p.excluded.contains(v),
            None => false,
        })
    }

    /// Canonical rendering; `parse` of the result reproduces the same file.
    pub fn render(&self) -> String {
        let mut out = String::from("format 1\n");
        if let Some(n) = &self.name {
            out.push_str(&format!("name {n}\n"));
        }
        out.push_str(&format!("dim {}\n", self.dim));
        for p in &self.params {
            if p.excluded.is_empty() {
                out.push_str(&format!("param {}\n", p.name));
            } else {
                let ex: Vec<String> =
                    p.excluded.iter().map(crate::scalar::format_rat).collect();
                out.push_str(&format!("param {} != {}\n", p.name, ex.join(", ")));
            }
        }
        if let Some(f) = &self.frame {
            let mut roles = vec![""; self.dim];
            roles[f.p1 as usize - 1] = "P1";
            roles[f.p2 as usize - 1] = "P2";
            roles[f.q1 as usize - 1] = "Q1";
            roles[f.q2 as usize - 1] = "Q2";
            out.push_str(&format!("frame {}\n", roles.join(" ")));
        }
        match self.dialect {
            Dialect::Bracket => {
                for line in self.algebra.render_brackets() {
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            Dialect::MaurerCartan => {
                for k in 1..=self.dim as u8 {
                    out.push_str(&format!("d e{k}* = {}\n", self.algebra.mc_form(k)));
                }
            }
        }
        if let Some(d) = self.claims.derived {
            out.push_str(&format!("claim derived {d}\n"));
        }
        if let Some(w) = &self.claims.omega {
            out.push_str(&format!("claim omega = {w}\n"));
        }
        match self.claims.exact {
            Some(true) => out.push_str("claim exact\n"),
            Some(false) => out.push_str("claim not-exact\n"),
            None => {}
        }
        match self.claims.symplectic {
            Some(true) => out.push_str("claim symplectic\n"),
            Some(false) => out.push_str("claim not-symplectic\n"),
            None => {}
        }
        match self.claims.contact {
            Some(true) => out.push_str("claim contact\n"),
            Some(false) => out.push_str("claim not-contact\n"),
            None => {}
        }
        if self.claims.unique_up_to_sign {
            out.push_str("claim unique-up-to-sign\n");
        }
        if self.claims.h4_zero {
            out.push_str("claim h4 0\n");
        }
        for s in &self.samples {
            let parts: Vec<String> = s
                .iter()
                .map(|(k, v)| format!("{k} = {}", crate::scalar::format_rat(v)))
                .collect();
            out.push_str(&format!("sample {}\n", parts.join(", ")));
        }
        out
    }
}

/// Parse an `.alg` file.
pub fn parse_algebra(src: &str) -> Result<AlgebraFile, ParseError> {
    let mut dim: Option<usize> = None;
    let mut name = None;
    let mut params: Vec<ParamDecl> = Vec::new();
    let mut frame = None;
    let mut claims = Claims::default();
    let mut samples = Vec::new();
    let mut brackets: Vec<(u8, u8, Vec<Poly>)> = Vec::new();
    let mut mc: BTreeMap<u8, KForm> = BTreeMap::new();
    let mut dialect: Option<Dialect> = None;
    let mut saw_header = false;

    for (lineno, raw) in src.lines().enumerate() {
        let line = lineno + 1;
        let text = raw.split('#').next().unwrap_or("").trim_end();
        if text.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if text.trim() != "format 1" {
                return err(line, 1, "expected header line 'format 1'");
            }
            saw_header = true;
            continue;
        }
        let toks = tokenize(text, line)?;
        let mut cur = Cursor { toks: &toks, pos: 0, line };
        match cur.peek() {
            Some(Tok::Ident(w)) if w == "dim" => {
                cur.next();
                if dim.is_some() {
                    return cur.error("duplicate 'dim' line");
                }
                let n = match cur.next().map(|s| s.tok.clone()) {
                    Some(Tok::Num(n)) => n.parse::<usize>().ok(),
                    _ => None,
                };
                let n = match n {
                    Some(n) if (1..=DIMENSION_CAP).contains(&n) => n,
                    _ => return cur.error(format!("dim must be an integer in 1..={DIMENSION_CAP}")),
                };
                dim = Some(n);
            }
            Some(Tok::Ident(w)) if w == "name" => {
                cur.next();
                match cur.next().map(|s| s.tok.clone()) {
                    Some(Tok::Ident(n)) => name = Some(n),
                    _ => return cur.error("expected an identifier after 'name'"),
                }
                // allow dashes and digits in names: consume the rest verbatim
                let mut extra = String::new();
                while let Some(s) = cur.next() {
                    extra.push_str(&match &s.tok {
                        Tok::Minus => "-".to_string(),
                        Tok::Num(n) => n.clone(),
                        Tok::Ident(i) => i.clone(),
                        _ => return cur.error("unexpected token in name"),
                    });
                }
                if !extra.is_empty() {
                    name = Some(format!("{}{}", name.unwrap(), extra));
                }
            }
            Some(Tok::Ident(w)) if w == "param" => {
                cur.next();
                let pname = match cur.next().map(|s| s.tok.clone()) {
                    Some(Tok::Ident(n)) => n,
                    _ => return cur.error("expected a parameter name"),
                };
                let mut excluded = Vec::new();
                if cur.peek() == Some(&Tok::NotEq) {
                    cur.next();
                    loop {
                        let neg = cur.peek() == Some(&Tok::Minus);
                        if neg {
                            cur.next();
                        }
                        let v = parse_rational(&mut cur)?;
                        excluded.push(if neg { -v } else { v });
                        if cur.peek() == Some(&Tok::Comma) {
                            cur.next();
                        } else {
                            break;
                        }
                    }
                }
                if !cur.at_end() {
                    return cur.error("trailing input after param declaration");
                }
                if params.iter().any(|p| p.name == pname) {
                    return cur.error(format!("duplicate parameter '{pname}'"));
                }
                params.push(ParamDecl { name: pname, excluded });
            }
            Some(Tok::Ident(w)) if w == "frame" => {
                cur.next();
                let d = dim.ok_or(ParseError {
                    line,
                    col: 1,
                    msg: "'frame' must come after 'dim'".into(),
                })?;
                if d != 4 {
                    return cur.error("frame labels need dim 4");
                }
                let mut roles: BTreeMap<String, u8> = BTreeMap::new();
                for pos in 1..=4u8 {
                    match cur.next().map(|s| s.tok.clone()) {
                        Some(Tok::Ident(r)) if ["P1", "P2", "Q1", "Q2"].contains(&r.as_str()) => {
                            if roles.insert(r.clone(), pos).is_some() {
                                return cur.error(format!("duplicate frame role {r}"));
                            }
                        }
                        _ => return cur.error("expected four roles from P1 P2 Q1 Q2"),
                    }
                }
                frame = Some(FrameLabels {
                    p1: roles["P1"],
                    p2: roles["P2"],
                    q1: roles["Q1"],
                    q2: roles["Q2"],
                });
            }
            Some(Tok::Ident(w)) if w == "claim" => {
                cur.next();
                parse_claim(&mut cur, dim, &mut claims)?;
            }
            Some(Tok::Ident(w)) if w == "sample" => {
                cur.next();
                let mut assignment = BTreeMap::new();
                loop {
                    let pname = match cur.next().map(|s| s.tok.clone()) {
                        Some(Tok::Ident(n)) => n,
                        _ => return cur.error("expected a parameter name in sample"),
                    };
                    cur.expect(&Tok::Eq, "'='")?;
                    let neg = cur.peek() == Some(&Tok::Minus);
                    if neg {
                        cur.next();
                    }
                    let v = parse_rational(&mut cur)?;
                    assignment.insert(pname, if neg { -v } else { v });
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.next();
                    } else {
                        break;
                    }
                }
                if !cur.at_end() {
                    return cur.error("trailing input after sample");
                }
                samples.push(assignment);
            }
            Some(Tok::LBracket) => {
                let d = dim.ok_or(ParseError {
                    line,
                    col: 1,
                    msg: "bracket line before 'dim'".into(),
                })?;
                if dialect == Some(Dialect::MaurerCartan) {
                    return cur.error("cannot mix bracket and Maurer-Cartan lines");
                }
                dialect = Some(Dialect::Bracket);
                brackets.push(parse_bracket_line(&mut cur, d)?);
            }
            Some(Tok::Ident(w)) if w == "d" => {
                let d = dim.ok_or(ParseError {
                    line,
                    col: 1,
                    msg: "differential line before 'dim'".into(),
                })?;
                if dialect == Some(Dialect::Bracket) {
                    return cur.error("cannot mix bracket and Maurer-Cartan lines");
                }
                dialect = Some(Dialect::MaurerCartan);
                cur.next();
                let k = match cur.next().map(|s| s.tok.clone()) {
                    Some(Tok::Covector(k)) if k >= 1 && k as usize <= d => k,
                    _ => return cur.error("expected a covector e<k>* after 'd'"),
                };
                cur.expect(&Tok::Eq, "'='")?;
                let atom = |t: &Tok| match t {
                    Tok::Covector(i) => Some(*i),
                    _ => None,
                };
                let form = parse_form_tokens(&mut cur, d, &atom)?;
                if !cur.at_end() {
                    return cur.error("trailing input after differential");
                }
                if !form.is_zero() && form.degree() != 2 {
                    return cur.error("a Maurer-Cartan differential must be a 2-form");
                }
                if mc.insert(k, form).is_some() {
                    return cur.error(format!("duplicate differential for e{k}*"));
                }
            }
            _ => return cur.error("unrecognized line"),
        }
    }

    if !saw_header {
        return err(1, 1, "empty file: expected header line 'format 1'");
    }
    let dim = dim.ok_or(ParseError { line: 1, col: 1, msg: "missing 'dim' line".into() })?;

    let declared: BTreeSet<String> = params.iter().map(|p| p.name.clone()).collect();
    let algebra = match dialect.unwrap_or(Dialect::Bracket) {
        Dialect::Bracket => {
            let mut alg = LieAlgebra::abelian(dim);
            let mut seen = BTreeSet::new();
            for (i, j, coeffs) in brackets {
                if !seen.insert((i, j)) {
                    return err(1, 1, format!("duplicate bracket line for [e{i}, e{j}]"));
                }
                alg = alg.with_bracket(i, j, coeffs);
            }
            alg
        }
        Dialect::MaurerCartan => {
            let differentials: Vec<KForm> = (1..=dim as u8)
                .map(|k| mc.get(&k).cloned().unwrap_or_else(|| KForm::zero(dim, 2)))
                .collect();
            LieAlgebra::from_maurer_cartan(dim, &differentials)
                .map_err(|e| ParseError { line: 1, col: 1, msg: e.to_string() })?
        }
    };

    for v in algebra.params() {
        if !declared.contains(v) {
            return err(1, 1, format!("undeclared parameter '{v}' in coefficients"));
        }
    }

    Ok(AlgebraFile {
        name,
        dim,
        params,
        dialect: dialect.unwrap_or(Dialect::Bracket),
        algebra,
        frame,
        claims,
        samples,
    })
}

fn parse_claim(cur: &mut Cursor, dim: Option<usize>, claims: &mut Claims) -> Result<(), ParseError> {
    let word = match cur.next().map(|s| s.tok.clone()) {
        Some(Tok::Ident(w)) => w,
        _ => return cur.error("expected a claim keyword"),
    };
    match word.as_str() {
        "derived" => {
            match cur.next().map(|s| s.tok.clone()) {
                Some(Tok::Num(n)) => claims.derived = n.parse().ok(),
                _ => return cur.error("expected a dimension after 'claim derived'"),
            }
        }
        "omega" => {
            cur.expect(&Tok::Eq, "'='")?;
            let d = dim.ok_or(ParseError {
                line: cur.line,
                col: 1,
                msg: "'claim omega' must come after 'dim'".into(),
            })?;
            let atom = |t: &Tok| match t {
                Tok::Covector(i) => Some(*i),
                _ => None,
            };
            let form = parse_form_tokens(cur, d, &atom)?;
            if form.degree() != 2 {
                return cur.error("claimed omega must be a 2-form");
            }
            claims.omega = Some(form);
        }
        "exact" => claims.exact = Some(true),
        "symplectic" => claims.symplectic = Some(true),
        "contact" => claims.contact = Some(true),
        "not" => {
            cur.expect(&Tok::Minus, "'-'")?;
            match cur.next().map(|s| s.tok.clone()) {
                Some(Tok::Ident(w)) if w == "exact" => claims.exact = Some(false),
                Some(Tok::Ident(w)) if w == "symplectic" => claims.symplectic = Some(false),
                Some(Tok::Ident(w)) if w == "contact" => claims.contact = Some(false),
                _ => return cur.error("expected exact/symplectic/contact after 'not-'"),
            }
        }
        "unique" => {
            // unique-up-to-sign
            for expected in ["up", "to", "sign"] {
                cur.expect(&Tok::Minus, "'-'")?;
                match cur.next().map(|s| s.tok.clone()) {
                    Some(Tok::Ident(w)) if w == expected => {}
                    _ => return cur.error("expected 'unique-up-to-sign'"),
                }
            }
            claims.unique_up_to_sign = true;
        }
        "h4" => match cur.next().map(|s| s.tok.clone()) {
            Some(Tok::Num(n)) if n == "0" => claims.h4_zero = true,
            _ => return cur.error("only 'claim h4 0' is supported"),
        },
        other => return cur.error(format!("unknown claim '{other}'")),
    }
    if !cur.at_end() {
        return cur.error("trailing input after claim");
    }
    Ok(())
}

fn parse_bracket_line(cur: &mut Cursor, dim: usize) -> Result<(u8, u8, Vec<Poly>), ParseError> {
    cur.expect(&Tok::LBracket, "'['")?;
    let i = match cur.next().map(|s| s.tok.clone()) {
        Some(Tok::Ident(w)) => covector_index(&w)
            .ok_or(ParseError { line: cur.line, col: cur.col(), msg: "expected e<i>".into() })?,
        _ => return cur.error("expected e<i>"),
    };
    cur.expect(&Tok::Comma, "','")?;
    let j = match cur.next().map(|s| s.tok.clone()) {
        Some(Tok::Ident(w)) => covector_index(&w)
            .ok_or(ParseError { line: cur.line, col: cur.col(), msg: "expected e<j>".into() })?,
        _ => return cur.error("expected e<j>"),
    };
    cur.expect(&Tok::RBracket, "']'")?;
    cur.expect(&Tok::Eq, "'='")?;
    if i == j || i == 0 || (i as usize) > dim || j == 0 || (j as usize) > dim {
        return cur.error(format!("bracket indices must be distinct and within 1..{dim}"));
    }
    let atom = |t: &Tok| match t {
        Tok::Ident(w) => covector_index(w),
        _ => None,
    };
    let rhs = parse_form_tokens(cur, dim, &atom)?;
    if !cur.at_end() {
        return cur.error("trailing input after bracket");
    }
    if !rhs.is_zero() && rhs.degree() != 1 {
        return cur.error("bracket right-hand side must be a vector");
    }
    let mut coeffs = vec![Poly::zero(); dim];
    for (idx, c) in rhs.terms() {
        coeffs[idx[0] as usize - 1] = c.clone();
    }
    // normalize to i < j
    if i < j {
        Ok((i, j, coeffs))
    } else {
        Ok((j, i, coeffs.iter().map(|c| -c).collect()))
    }
}

// -------------------------------------------------------------- .map files

/// A polynomial chart with a supplied inverse. `forward` maps target
/// variables (for example `p1, q1, p2, q2`) to polynomials in the source
/// variables; `inverse` goes the other way.
#[derive(Clone, Debug)]
pub struct ChartFile {
    pub forward: Vec<(String, Poly)>,
    pub inverse: Vec<(String, Poly)>,
}

impl ChartFile {
    pub fn target_vars(&self) -> Vec<String> {
        self.forward.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn source_vars(&self) -> Vec<String> {
        self.inverse.iter().map(|(v, _)| v.clone()).collect()
    }
}

/// Parse a `.map` chart file: `var = polynomial` lines, then `inverse:` and
/// the reverse assignments.
pub fn parse_chart(src: &str) -> Result<ChartFile, ParseError> {
    let mut forward = Vec::new();
    let mut inverse = Vec::new();
    let mut in_inverse = false;
    let mut saw_header = false;
    for (lineno, raw) in src.lines().enumerate() {
        let line = lineno + 1;
        let text = raw.split('#').next().unwrap_or("").trim_end();
        if text.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if text.trim() != "format 1" {
                return err(line, 1, "expected header line 'format 1'");
            }
            saw_header = true;
            continue;
        }
        if text.trim() == "inverse:" {
            if in_inverse {
                return err(line, 1, "duplicate 'inverse:' section");
            }
            in_inverse = true;
            continue;
        }
        let toks = tokenize(text, line)?;
        let mut cur = Cursor { toks: &toks, pos: 0, line };
        let var = match cur.next().map(|s| s.tok.clone()) {
            Some(Tok::Ident(v)) => v,
            _ => return err(line, 1, "expected a variable name"),
        };
        cur.expect(&Tok::Eq, "'='")?;
        let p = parse_expr(&mut cur)?;
        if !cur.at_end() {
            return cur.error("trailing input after assignment");
        }
        let bucket = if in_inverse { &mut inverse } else { &mut forward };
        if bucket.iter().any(|(v, _)| v == &var) {
            return cur.error(format!("duplicate assignment for '{var}'"));
        }
        bucket.push((var, p));
    }
    if !saw_header {
        return err(1, 1, "empty file: expected header line 'format 1'");
    }
    if forward.is_empty() || inverse.is_empty() {
        return err(1, 1, "chart needs both forward assignments and an 'inverse:' section");
    }
    Ok(ChartFile { forward, inverse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn poly_expressions() {
        assert_eq!(parse_poly("1/2").unwrap(), Poly::constant(rat(1, 2)));
        assert_eq!(parse_poly("(1-l)").unwrap(), &Poly::one() - &Poly::var("l"));
        assert_eq!(
            parse_poly("2 l x^2").unwrap(),
            (&Poly::var("l") * &Poly::var("x").pow(2)).scale(&int(2))
        );
        assert_eq!(parse_poly("x - y").unwrap(), &Poly::var("x") - &Poly::var("y"));
        assert_eq!(parse_poly("-x + 3").unwrap(), &Poly::from_int(3) - &Poly::var("x"));
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    #[test]
    fn kform_expressions() {
        let w = parse_kform("e1*^e3* + e2*^e4*", 4).unwrap();
        assert_eq!(w, KForm::basis(4, &[1, 3]).add(&KForm::basis(4, &[2, 4])).unwrap());
        // decreasing indices pick up the Koszul sign
        let d1 = parse_kform("e3*^e2*", 4).unwrap();
        assert_eq!(d1, KForm::basis(4, &[2, 3]).neg());
        let with_coeff = parse_kform("(1-l) e2*^e4*", 4).unwrap();
        assert_eq!(
            with_coeff,
            KForm::basis(4, &[2, 4]).scale(&(&Poly::one() - &Poly::var("l")))
        );
        assert!(parse_kform("e1*^e5*", 4).is_err());
        assert!(parse_kform("e1* + e2*^e3*", 4).is_err());
        assert_eq!(parse_kform("0", 4).unwrap(), KForm::zero(4, 0));
    }

    #[test]
    fn algebra_file_bracket_dialect() {
        let src = "format 1\nname nilp4\ndim 4\nframe P1 P2 Q1 Q2\n[e2, e3] = e1\n[e3, e4] = e2\n";
        let f = parse_algebra(src).unwrap();
        assert_eq!(f.dim, 4);
        assert_eq!(f.name.as_deref(), Some("nilp4"));
        assert_eq!(f.algebra, LieAlgebra::nilpotent4());
        assert_eq!(f.frame, Some(FrameLabels::standard()));
        assert_eq!(f.dialect, Dialect::Bracket);
    }

    #[test]
    fn algebra_file_mc_dialect() {
        let src = "format 1\ndim 4\nparam l != 0, 1\nd e4* = 0\nd e3* = e1*^e2* + e3*^e4*\nd e1* = l e1*^e4*\nd e2* = (1-l) e2*^e4*\nsample l = 2\nsample l = -1\nsample l = 1/2\n";
        let f = parse_algebra(src).unwrap();
        assert_eq!(f.dim, 4);
        assert_eq!(f.params.len(), 1);
        assert_eq!(f.params[0].excluded, vec![int(0), int(1)]);
        assert_eq!(f.samples.len(), 3);
        assert!(f.algebra.jacobi_check().passed());
        // the declared exclusions filter samples
        let mut bad = BTreeMap::new();
        bad.insert("l".to_string(), int(0));
        assert!(!f.sample_allowed(&bad));
        let mut good = BTreeMap::new();
        good.insert("l".to_string(), rat(1, 2));
        assert!(f.sample_allowed(&good));
    }

    #[test]
    fn mc_text_convention_matches_bracket_dialect() {
        // d e1* = e3*^e2*, d e2* = e4*^e3* is the same algebra as
        // [e2,e3] = e1, [e3,e4] = e2
        let mc = parse_algebra("format 1\ndim 4\nd e1* = e3*^e2*\nd e2* = e4*^e3*\n").unwrap();
        assert_eq!(mc.algebra, LieAlgebra::nilpotent4());
    }

    #[test]
    fn positioned_errors() {
        let e = parse_algebra("format 1\ndim 3\n[e1, e4] = e2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_algebra("dim 3\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.msg.contains("format"));
        let e = parse_algebra("format 1\ndim 3\ndim 3\n").unwrap_err();
        assert!(e.msg.contains("duplicate"));
        let e = parse_algebra("format 1\ndim 3\n[e1, e2] = e3\nd e1* = 0\n").unwrap_err();
        assert!(e.msg.contains("mix"));
        let e = parse_algebra("format 1\ndim 3\n[e1, e2] = l e3\n").unwrap_err();
        assert!(e.msg.contains("undeclared"));
    }

    #[test]
    fn claims_block() {
        let src = "format 1\ndim 4\nd e1* = e1*^e3*\nd e2* = e3*^e4*\nclaim derived 2\nclaim omega = e1*^e3* + e2*^e4*\nclaim not-exact\nclaim symplectic\nclaim unique-up-to-sign\n";
        let f = parse_algebra(src).unwrap();
        assert_eq!(f.claims.derived, Some(2));
        assert_eq!(f.claims.exact, Some(false));
        assert_eq!(f.claims.symplectic, Some(true));
        assert!(f.claims.unique_up_to_sign);
        assert!(f.claims.omega.is_some());
    }

    #[test]
    fn render_parse_round_trip() {
        let src = "format 1\nname T3-1a\ndim 4\nparam l != 0, 1\nd e1* = l e1*^e4*\nd e2* = (1 - l) e2*^e4*\nd e3* = e1*^e2* + e3*^e4*\nd e4* = 0\nclaim derived 3\nclaim exact\nsample l = 2\n";
        let f1 = parse_algebra(src).unwrap();
        let rendered = f1.render();
        let f2 = parse_algebra(&rendered).unwrap();
        assert_eq!(f2.render(), rendered);
        assert_eq!(f1.algebra, f2.algebra);
        assert_eq!(f1.claims, f2.claims);
        assert_eq!(f1.samples, f2.samples);
    }

    #[test]
    fn chart_files() {
        let src = "format 1\np1 = x1 + 1/2 x4\nq1 = x3\ninverse:\nx1 = p1 - 1/2 q2\nx3 = q1\n";
        let c = parse_chart(src).unwrap();
        assert_eq!(c.target_vars(), vec!["p1", "q1"]);
        assert_eq!(c.source_vars(), vec!["x1", "x3"]);
        assert!(parse_chart("format 1\np1 = x1\n").is_err());
    }
}
