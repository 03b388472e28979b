//! Line-based ring description language.
//!
//! ```text
//! field K2 = poly(-2, 0, 1)            # t^2 - 2, lowest degree first
//! ambient B = product(K2, K2)
//! subring A2 mode=order gens=[(t, 0), (0, t), (1, 1)]
//! pordering Aplus on=A2 gens=squares
//! verify census A2
//! ```
//!
//! Coordinates of generators are polynomials in `t` with rational
//! coefficients, read in the field of the matching ambient factor.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::etale::Mode;
use crate::exact::rational::{self, Rational};
use crate::exact::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    /// Coefficients of the defining polynomial, lowest degree first.
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientDecl {
    pub name: String,
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubringDecl {
    pub name: String,
    pub ambient: String,
    pub mode: Mode,
    pub gens: Vec<Vec<Poly>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeGens {
    Squares,
    Elements(Vec<Vec<Poly>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingDecl {
    pub name: String,
    pub subring: String,
    pub gens: ConeGens,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    Maxpo,
    AdjoinIdemp,
    Essext,
    Census,
    OddRoot,
    Rigidity,
    Analyze,
}

impl Check {
    pub fn keyword(self) -> &'static str {
        match self {
            Check::Maxpo => "maxpo",
            Check::AdjoinIdemp => "adjoin-idemp",
            Check::Essext => "essext",
            Check::Census => "census",
            Check::OddRoot => "odd-root",
            Check::Rigidity => "rigidity",
            Check::Analyze => "analyze",
        }
    }

    const VERIFY: [Check; 6] = [
        Check::Maxpo,
        Check::AdjoinIdemp,
        Check::Essext,
        Check::Census,
        Check::OddRoot,
        Check::Rigidity,
    ];

    /// Largest number of ring arguments.
    fn max_rings(self) -> usize {
        match self {
            Check::Essext | Check::Rigidity => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub check: Check,
    pub rings: Vec<String>,
    /// `key=value` options in source order.
    pub options: Vec<(String, String)>,
    /// Source line, for report provenance.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Field(FieldDecl),
    Ambient(AmbientDecl),
    Subring(SubringDecl),
    Ordering(OrderingDecl),
    Directive(Directive),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingFile {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared name `{0}`")]
    Undeclared(String),
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("defining polynomial of `{0}` is not monic")]
    NonMonic(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind} (hint: {hint})")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub hint: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Number(chars[start..i].iter().collect()),
                column,
            });
        } else if "=(),[]+-*/^".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                column,
            });
            i += 1;
        } else {
            return Err(ParseError {
                line: lineno,
                column,
                kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                hint: "names use letters, digits and `_`; expressions use + - * / ^".into(),
            });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl Cursor<'_> {
    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn error(&self, kind: ParseErrorKind, hint: &str) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            kind,
            hint: hint.into(),
        }
    }

    fn syntax(&self, msg: &str, hint: &str) -> ParseError {
        let found = match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Number(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
            None => "end of line".into(),
        };
        self.error(
            ParseErrorKind::Syntax(format!("expected {msg}, found {found}")),
            hint,
        )
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        let hit = self.peek_sym(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_sym(&mut self, c: char, hint: &str) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{c}`"), hint))
        }
    }

    fn ident(&mut self, what: &str, hint: &str) -> Result<(String, usize), ParseError> {
        let column = self.column();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, column))
            }
            _ => Err(self.syntax(what, hint)),
        }
    }

    fn keyword(&mut self, kw: &str, hint: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(&format!("`{kw}`"), hint)),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self, hint: &str) -> Result<(), ParseError> {
        if self.done() {
            Ok(())
        } else {
            Err(self.syntax("end of line", hint))
        }
    }

    /// `[-]digits[/digits]`
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat_sym('-');
        let q = self.unsigned_rational()?;
        Ok(if neg { -q } else { q })
    }

    fn unsigned_rational(&mut self) -> Result<Rational, ParseError> {
        let Some(Tok::Number(n)) = self.peek().cloned() else {
            return Err(self.syntax("a number", "write rationals as `3` or `-1/2`"));
        };
        self.pos += 1;
        let mut text = n;
        if self.peek_sym('/') {
            self.pos += 1;
            let Some(Tok::Number(d)) = self.peek().cloned() else {
                return Err(self.syntax("a denominator", "write rationals as `num/den`"));
            };
            self.pos += 1;
            text = format!("{text}/{d}");
        }
        rational::parse(&text).ok_or_else(|| {
            self.error(
                ParseErrorKind::Syntax("zero denominator".into()),
                "use a nonzero denominator",
            )
        })
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = if self.eat_sym('-') {
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat_sym('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_sym('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat_sym('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        const HINT: &str = "coordinates are polynomials in `t`, such as `2*t^2 - 1/3`";
        let base = match self.peek().cloned() {
            Some(Tok::Number(_)) => Poly::constant(self.unsigned_rational()?),
            Some(Tok::Ident(s)) if s == "t" => {
                self.pos += 1;
                Poly::t()
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_sym(')', "close the parenthesis")?;
                inner
            }
            Some(Tok::Ident(s)) => {
                return Err(self.error(
                    ParseErrorKind::Undeclared(s),
                    "the only variable in a coordinate is `t`",
                ));
            }
            _ => return Err(self.syntax("a coordinate expression", HINT)),
        };
        if self.eat_sym('^') {
            let Some(Tok::Number(n)) = self.peek().cloned() else {
                return Err(self.syntax("an exponent", "exponents are nonnegative integers"));
            };
            self.pos += 1;
            let e: u32 = n.parse().map_err(|_| {
                self.error(
                    ParseErrorKind::Syntax("exponent too large".into()),
                    "use a small exponent",
                )
            })?;
            let mut out = Poly::one();
            for _ in 0..e {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    /// `(e1, ..., en)`
    fn tuple(&mut self) -> Result<Vec<Poly>, ParseError> {
        self.expect_sym('(', "generators are tuples like `(t, 0)`")?;
        let mut coords = vec![self.expr()?];
        while self.eat_sym(',') {
            coords.push(self.expr()?);
        }
        self.expect_sym(')', "close the tuple with `)`")?;
        Ok(coords)
    }

    /// `[(..), (..)]`
    fn tuple_list(&mut self) -> Result<Vec<(Vec<Poly>, usize)>, ParseError> {
        self.expect_sym('[', "generator lists are written `[(..), (..)]`")?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            let column = self.column();
            out.push((self.tuple()?, column));
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.expect_sym(',', "separate generators with `,`")?;
        }
    }

    /// `key=`
    fn option_key(&mut self, key: &str, hint: &str) -> Result<(), ParseError> {
        self.keyword(key, hint)?;
        self.expect_sym('=', hint)
    }

    fn peek_option(&self, key: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == key)
            && self.toks.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::Sym('='))
    }
}

#[derive(Default)]
struct Scope {
    fields: HashMap<String, usize>,
    ambients: HashMap<String, usize>,
    subrings: HashMap<String, String>,
    orderings: HashMap<String, ()>,
    last_ambient: Option<String>,
    last_subring: Option<String>,
}

impl Scope {
    fn taken(&self, name: &str) -> bool {
        self.fields.contains_key(name)
            || self.ambients.contains_key(name)
            || self.subrings.contains_key(name)
            || self.orderings.contains_key(name)
    }
}

fn declare(scope: &Scope, cur: &Cursor, name: &str, column: usize) -> Result<(), ParseError> {
    if scope.taken(name) {
        return Err(ParseError {
            line: cur.line,
            column,
            kind: ParseErrorKind::Duplicate(name.into()),
            hint: "choose a fresh name".into(),
        });
    }
    Ok(())
}

fn undeclared(cur: &Cursor, name: &str, column: usize, hint: &str) -> ParseError {
    ParseError {
        line: cur.line,
        column,
        kind: ParseErrorKind::Undeclared(name.into()),
        hint: hint.into(),
    }
}

fn check_arity(
    cur: &Cursor,
    gens: Vec<(Vec<Poly>, usize)>,
    arity: usize,
    ambient: &str,
) -> Result<Vec<Vec<Poly>>, ParseError> {
    gens.into_iter()
        .map(|(g, column)| {
            if g.len() == arity {
                Ok(g)
            } else {
                Err(ParseError {
                    line: cur.line,
                    column,
                    kind: ParseErrorKind::Arity(format!(
                        "generator has {} coordinates but `{ambient}` has {arity} factors",
                        g.len()
                    )),
                    hint: format!("write exactly {arity} comma-separated coordinates"),
                })
            }
        })
        .collect()
}

fn parse_line(cur: &mut Cursor, scope: &mut Scope) -> Result<Item, ParseError> {
    let (head, _) = cur.ident(
        "a declaration keyword",
        "lines start with field, ambient, subring, pordering, verify or analyze",
    )?;
    match head.as_str() {
        "field" => {
            let hint = "declare fields as `field K = poly(c0, c1, ..., 1)`";
            let (name, column) = cur.ident("a field name", hint)?;
            declare(scope, cur, &name, column)?;
            cur.expect_sym('=', hint)?;
            cur.keyword("poly", hint)?;
            cur.expect_sym('(', hint)?;
            let mut coeffs = vec![cur.rational()?];
            while cur.eat_sym(',') {
                coeffs.push(cur.rational()?);
            }
            cur.expect_sym(')', "close the coefficient list with `)`")?;
            cur.finish(hint)?;
            if coeffs.len() < 2 || !coeffs.last().is_some_and(One::is_one) {
                return Err(ParseError {
                    line: cur.line,
                    column,
                    kind: ParseErrorKind::NonMonic(name),
                    hint: "coefficients run from degree 0 up; the last one must be 1".into(),
                });
            }
            scope.fields.insert(name.clone(), coeffs.len() - 1);
            Ok(Item::Field(FieldDecl { name, coeffs }))
        }
        "ambient" => {
            let hint = "declare ambients as `ambient B = product(K1, K2)`";
            let (name, column) = cur.ident("an ambient name", hint)?;
            declare(scope, cur, &name, column)?;
            cur.expect_sym('=', hint)?;
            cur.keyword("product", hint)?;
            cur.expect_sym('(', hint)?;
            let mut factors = Vec::new();
            loop {
                let (f, fcol) = cur.ident("a field name", hint)?;
                if !scope.fields.contains_key(&f) {
                    return Err(undeclared(
                        cur,
                        &f,
                        fcol,
                        "declare the field with `field` before using it",
                    ));
                }
                factors.push(f);
                if !cur.eat_sym(',') {
                    break;
                }
            }
            cur.expect_sym(')', "close the factor list with `)`")?;
            cur.finish(hint)?;
            scope.ambients.insert(name.clone(), factors.len());
            scope.last_ambient = Some(name.clone());
            Ok(Item::Ambient(AmbientDecl { name, factors }))
        }
        "subring" => {
            let hint = "declare subrings as `subring A mode=order gens=[(t, 0)]`";
            let (name, column) = cur.ident("a subring name", hint)?;
            declare(scope, cur, &name, column)?;
            let ambient = if cur.peek_option("ambient") {
                cur.option_key("ambient", hint)?;
                let (a, acol) = cur.ident("an ambient name", hint)?;
                if !scope.ambients.contains_key(&a) {
                    return Err(undeclared(
                        cur,
                        &a,
                        acol,
                        "declare the ambient with `ambient` first",
                    ));
                }
                a
            } else {
                scope.last_ambient.clone().ok_or_else(|| {
                    cur.error(
                        ParseErrorKind::Syntax("no ambient declared".into()),
                        "declare an ambient before subrings",
                    )
                })?
            };
            cur.option_key("mode", hint)?;
            let mode = match cur.ident("`order` or `algebra`", hint)?.0.as_str() {
                "order" => Mode::Order,
                "algebra" => Mode::Algebra,
                _ => {
                    cur.pos -= 1;
                    return Err(cur.syntax("`order` or `algebra`", hint));
                }
            };
            cur.option_key("gens", hint)?;
            let gens = cur.tuple_list()?;
            cur.finish(hint)?;
            let gens = check_arity(cur, gens, scope.ambients[&ambient], &ambient)?;
            scope.subrings.insert(name.clone(), ambient.clone());
            scope.last_subring = Some(name.clone());
            Ok(Item::Subring(SubringDecl {
                name,
                ambient,
                mode,
                gens,
            }))
        }
        "pordering" => {
            let hint = "declare orderings as `pordering P on=A gens=squares`";
            let (name, column) = cur.ident("an ordering name", hint)?;
            declare(scope, cur, &name, column)?;
            let subring = if cur.peek_option("on") {
                cur.option_key("on", hint)?;
                let (s, scol) = cur.ident("a subring name", hint)?;
                if !scope.subrings.contains_key(&s) {
                    return Err(undeclared(cur, &s, scol, "declare the subring first"));
                }
                s
            } else {
                scope.last_subring.clone().ok_or_else(|| {
                    cur.error(
                        ParseErrorKind::Syntax("no subring declared".into()),
                        "declare a subring before orderings",
                    )
                })?
            };
            cur.option_key("gens", hint)?;
            let gens = if cur.peek() == Some(&Tok::Ident("squares".into())) {
                cur.pos += 1;
                ConeGens::Squares
            } else {
                let g = cur.tuple_list()?;
                let amb = &scope.subrings[&subring];
                ConeGens::Elements(check_arity(cur, g, scope.ambients[amb], amb)?)
            };
            cur.finish(hint)?;
            scope.orderings.insert(name.clone(), ());
            Ok(Item::Ordering(OrderingDecl {
                name,
                subring,
                gens,
            }))
        }
        "verify" | "analyze" => {
            let check = if head == "analyze" {
                Check::Analyze
            } else {
                let hint = "checks: maxpo, adjoin-idemp, essext, census, odd-root, rigidity";
                let (mut kind, kcol) = cur.ident("a check name", hint)?;
                while cur.eat_sym('-') {
                    kind = format!(
                        "{kind}-{}",
                        cur.ident("the rest of the check name", hint)?.0
                    );
                }
                Check::VERIFY
                    .into_iter()
                    .find(|c| c.keyword() == kind)
                    .ok_or_else(|| ParseError {
                        line: cur.line,
                        column: kcol,
                        kind: ParseErrorKind::UnknownDirective(kind),
                        hint: "checks: maxpo, adjoin-idemp, essext, census, odd-root, rigidity"
                            .into(),
                    })?
            };
            let mut rings = Vec::new();
            let mut options = Vec::new();
            while !cur.done() {
                let (word, wcol) = cur.ident(
                    "a subring name or `key=value`",
                    "directives name subrings, then options",
                )?;
                if cur.eat_sym('=') {
                    let value = match cur.peek().cloned() {
                        Some(Tok::Ident(s)) | Some(Tok::Number(s)) => {
                            cur.pos += 1;
                            s
                        }
                        _ => return Err(cur.syntax("an option value", "options are `key=value`")),
                    };
                    options.push((word, value));
                } else if !options.is_empty() {
                    return Err(ParseError {
                        line: cur.line,
                        column: wcol,
                        kind: ParseErrorKind::Syntax("subring after options".into()),
                        hint: "list subrings before `key=value` options".into(),
                    });
                } else if !scope.subrings.contains_key(&word) {
                    return Err(undeclared(
                        cur,
                        &word,
                        wcol,
                        "declare the subring before verifying it",
                    ));
                } else {
                    rings.push(word);
                }
            }
            if rings.is_empty() || rings.len() > check.max_rings() {
                return Err(cur.error(
                    ParseErrorKind::Arity(format!(
                        "`{}` takes 1 to {} subrings, got {}",
                        check.keyword(),
                        check.max_rings(),
                        rings.len()
                    )),
                    "name the subring to check",
                ));
            }
            Ok(Item::Directive(Directive {
                check,
                rings,
                options,
                line: cur.line,
            }))
        }
        other => {
            cur.pos -= 1;
            Err(cur.error(
                ParseErrorKind::UnknownDirective(other.into()),
                "lines start with field, ambient, subring, pordering, verify or analyze",
            ))
        }
    }
}

pub fn parse_ring_file(text: &str) -> Result<RingFile, ParseError> {
    let mut scope = Scope::default();
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: i + 1,
            end_column: line.trim_end().chars().count() + 1,
        };
        items.push(parse_line(&mut cur, &mut scope)?);
    }
    Ok(RingFile { items })
}

fn write_tuples(f: &mut fmt::Formatter<'_>, gens: &[Vec<Poly>]) -> fmt::Result {
    write!(f, "[")?;
    for (i, g) in gens.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "(")?;
        for (j, c) in g.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")?;
    }
    write!(f, "]")
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Field(d) => {
                let coeffs: Vec<String> = d.coeffs.iter().map(rational::to_wire).collect();
                write!(f, "field {} = poly({})", d.name, coeffs.join(", "))
            }
            Item::Ambient(d) => write!(f, "ambient {} = product({})", d.name, d.factors.join(", ")),
            Item::Subring(d) => {
                write!(
                    f,
                    "subring {} ambient={} mode={} gens=",
                    d.name, d.ambient, d.mode
                )?;
                write_tuples(f, &d.gens)
            }
            Item::Ordering(d) => {
                write!(f, "pordering {} on={} gens=", d.name, d.subring)?;
                match &d.gens {
                    ConeGens::Squares => write!(f, "squares"),
                    ConeGens::Elements(g) => write_tuples(f, g),
                }
            }
            Item::Directive(d) => {
                if d.check == Check::Analyze {
                    write!(f, "analyze")?;
                } else {
                    write!(f, "verify {}", d.check.keyword())?;
                }
                for r in &d.rings {
                    write!(f, " {r}")?;
                }
                for (k, v) in &d.options {
                    write!(f, " {k}={v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Normalized text: one item per line, comments dropped, every optional
/// reference spelled out.
impl fmt::Display for RingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}

impl RingFile {
    pub fn fields(&self) -> impl Iterator<Item = &FieldDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Field(d) => Some(d),
            _ => None,
        })
    }

    pub fn ambients(&self) -> impl Iterator<Item = &AmbientDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Ambient(d) => Some(d),
            _ => None,
        })
    }

    pub fn subrings(&self) -> impl Iterator<Item = &SubringDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Subring(d) => Some(d),
            _ => None,
        })
    }

    pub fn orderings(&self) -> impl Iterator<Item = &OrderingDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Ordering(d) => Some(d),
            _ => None,
        })
    }

    pub fn directives(&self) -> impl Iterator<Item = &Directive> {
        self.items.iter().filter_map(|i| match i {
            Item::Directive(d) => Some(d),
            _ => None,
        })
    }

    /// Equality ignoring directive line numbers.
    pub fn same_model(&self, other: &RingFile) -> bool {
        let strip = |r: &RingFile| -> Vec<Item> {
            r.items
                .iter()
                .cloned()
                .map(|i| match i {
                    Item::Directive(mut d) => {
                        d.line = 0;
                        Item::Directive(d)
                    }
                    other => other,
                })
                .collect()
        };
        strip(self) == strip(other)
    }
}

impl Directive {
    pub fn option(&self, key: &str) -> Option<&str> {
        self.options
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = "\
# two copies of Q(sqrt 2)
field K2 = poly(-2, 0, 1)            # t^2 - 2
ambient B = product(K2, K2)
subring A2 mode=order gens=[(t, 0), (0, t), (1, 1)]
pordering Aplus gens=squares
verify census A2
";

    #[test]
    fn parses_and_round_trips() {
        let file = parse_ring_file(A2).unwrap();
        assert_eq!(file.fields().count(), 1);
        assert_eq!(file.ambients().next().unwrap().factors.len(), 2);
        assert_eq!(file.subrings().count(), 1);
        let printed = file.to_string();
        let again = parse_ring_file(&printed).unwrap();
        assert!(file.same_model(&again));
        assert_eq!(again.to_string(), printed);
        assert!(printed.contains("subring A2 ambient=B mode=order gens=[(t, 0), (0, t), (1, 1)]"));
    }

    #[test]
    fn expressions() {
        let f = parse_ring_file("field K = poly(-2, 0, 1)\nambient B = product(K)\nsubring A mode=order gens=[(2*(t + 1)^2 - 1/2*t + 3)]\n").unwrap();
        let g = &f.subrings().next().unwrap().gens[0][0];
        assert_eq!(
            g,
            &Poly::new(vec![
                rational::int(5),
                rational::frac(7, 2),
                rational::int(2)
            ])
        );
    }

    #[test]
    fn diagnostics() {
        let e = parse_ring_file("field K = poly(1, 0, -1").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.column, 24);

        let e = parse_ring_file("field K = poly(1, 0, 2)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonMonic("K".into()));

        let e = parse_ring_file("field K = poly(-2, 0, 1)\nambient B = product(K, L)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 24));
        assert_eq!(e.kind, ParseErrorKind::Undeclared("L".into()));

        let e = parse_ring_file(
            "field K = poly(-2, 0, 1)\nambient B = product(K, K)\nsubring A mode=order gens=[(t)]",
        )
        .unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity(_)));

        let e = parse_ring_file(
            "field K = poly(-2, 0, 1)\nambient B = product(K)\nsubring A mode=order gens=[(s)]",
        )
        .unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Undeclared("s".into()));

        let e = parse_ring_file("field K = poly(-2, 0, 1)\nambient B = product(K)\nsubring A mode=order gens=[]\nverify everything A").unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::UnknownDirective("everything".into())
        );
        assert!(e.to_string().starts_with("line 4, column 8:"));
    }
}
