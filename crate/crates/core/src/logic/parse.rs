//! Recursive-descent parsers for both languages.
//!
//! A parenthesis may open either a formula or a term; the parser tries the
//! formula reading first and falls back to the term reading, reporting
//! whichever attempt got further when both fail.

use num_traits::{ToPrimitive, Zero};

use super::{
    ArithAtom, ArithFormula, ArithTerm, Formula, Func, Pred, Quantifier, SetAtom, SetBound,
    SetFormula, SetTerm,
};
use crate::error::{Error, Result};
use crate::set::{decode, Code, HfSet};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(Code),
    Hash(Code),
    ZeroE,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Eq,
    Lt,
    Plus,
    Star,
    LtA,
    LtC,
    LeC,
    EqC,
    PlusA,
    StarA,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Hash(n) => format!("`#{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::ZeroE => "0e",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::Lt => "<",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::LtA => "<_a",
            Tok::LtC => "<_c",
            Tok::LeC => "<=_c",
            Tok::EqC => "=_c",
            Tok::PlusA => "+_a",
            Tok::StarA => "*_a",
            _ => "?",
        }
    }
}

const RESERVED: [&str; 5] = ["forall", "exists", "in", "Ord", "Dom"];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_char = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &src[i..];
        // Longest symbols first.
        const SYMBOLS: [(&str, Tok); 19] = [
            ("<=_c", Tok::LeC),
            ("<_a", Tok::LtA),
            ("<_c", Tok::LtC),
            ("=_c", Tok::EqC),
            ("+_a", Tok::PlusA),
            ("*_a", Tok::StarA),
            ("->", Tok::Arrow),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("{", Tok::LBrace),
            ("}", Tok::RBrace),
            (",", Tok::Comma),
            (".", Tok::Dot),
            ("!", Tok::Bang),
            ("&", Tok::Amp),
            ("|", Tok::Pipe),
            ("=", Tok::Eq),
            ("<", Tok::Lt),
            ("+", Tok::Plus),
        ];
        if let Some((s, t)) = SYMBOLS.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((t.clone(), start));
            i += s.len();
            continue;
        }
        if b == b'*' {
            out.push((Tok::Star, start));
            i += 1;
            continue;
        }
        if b == b'#' {
            i += 1;
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == digits_start {
                return Err(Error::syntax(start, "expected digits after `#`"));
            }
            out.push((
                Tok::Hash(src[digits_start..i].parse().expect("digits")),
                start,
            ));
            continue;
        }
        if b.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &src[start..i];
            if digits == "0"
                && i < bytes.len()
                && bytes[i] == b'e'
                && !bytes.get(i + 1).is_some_and(|&c| ident_char(c))
            {
                i += 1;
                out.push((Tok::ZeroE, start));
                continue;
            }
            if i < bytes.len() && ident_char(bytes[i]) {
                return Err(Error::syntax(i, "unexpected character after number"));
            }
            out.push((Tok::Num(digits.parse().expect("digits")), start));
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && ident_char(bytes[i]) {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        let ch = rest.chars().next().expect("nonempty");
        return Err(Error::syntax(start, format!("unexpected character `{ch}`")));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, (usize, String)>;

fn into_error(e: (usize, String)) -> Error {
    Error::syntax(e.0, e.1)
}

fn furthest(a: (usize, String), b: (usize, String)) -> (usize, String) {
    if b.0 > a.0 {
        b
    } else {
        a
    }
}

impl Parser {
    fn new(src: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err((self.offset(), msg.into()))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.fail(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&format!("`{}`", t.symbol()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => self.fail(format!("`{s}` is reserved")),
            _ => self.unexpected("a variable"),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn finish<T>(&mut self, v: T) -> PResult<T> {
        if *self.peek() == Tok::Eof {
            Ok(v)
        } else {
            self.unexpected("end of input")
        }
    }

    fn formula<L: Lang>(&mut self) -> PResult<Formula<L::Atom, L::Bound>> {
        let lhs = self.disjunction::<L>()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula::<L>()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction<L: Lang>(&mut self) -> PResult<Formula<L::Atom, L::Bound>> {
        let mut f = self.conjunction::<L>()?;
        while self.eat(&Tok::Pipe) {
            f = Formula::or(f, self.conjunction::<L>()?);
        }
        Ok(f)
    }

    fn conjunction<L: Lang>(&mut self) -> PResult<Formula<L::Atom, L::Bound>> {
        let mut f = self.unary::<L>()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.unary::<L>()?);
        }
        Ok(f)
    }

    fn unary<L: Lang>(&mut self) -> PResult<Formula<L::Atom, L::Bound>> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.unary::<L>()?));
        }
        let q = if self.is_keyword("forall") {
            Some(Quantifier::Forall)
        } else if self.is_keyword("exists") {
            Some(Quantifier::Exists)
        } else {
            None
        };
        if let Some(q) = q {
            self.bump();
            let var = self.ident()?;
            let bound = L::bound(self)?;
            self.expect(Tok::Dot)?;
            let body = self.formula::<L>()?;
            return Ok(Formula::Quant {
                q,
                var,
                bound,
                body: Box::new(body),
            });
        }
        if self.is_keyword("Dom") && *self.peek2() == Tok::LParen {
            self.bump();
            self.bump();
            let v = self.ident()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::Dom(v));
        }
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            self.bump();
            let as_formula = self
                .formula::<L>()
                .and_then(|f| self.expect(Tok::RParen).map(|_| f));
            match as_formula {
                Ok(f) => return Ok(f),
                Err(e1) => {
                    self.pos = save;
                    return L::atom(self)
                        .map(Formula::Atom)
                        .map_err(|e2| furthest(e1, e2));
                }
            }
        }
        L::atom(self).map(Formula::Atom)
    }

    fn arith_term(&mut self) -> PResult<ArithTerm> {
        let mut t = self.arith_product()?;
        while self.eat(&Tok::Plus) {
            t = ArithTerm::Add(Box::new(t), Box::new(self.arith_product()?));
        }
        Ok(t)
    }

    fn arith_product(&mut self) -> PResult<ArithTerm> {
        let mut t = self.arith_primary()?;
        while self.eat(&Tok::Star) {
            t = ArithTerm::Mul(Box::new(t), Box::new(self.arith_primary()?));
        }
        Ok(t)
    }

    fn args<T>(
        &mut self,
        n: usize,
        name: &str,
        mut item: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<Vec<T>> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                if *self.peek() == Tok::RParen {
                    return self.fail(format!("`{name}` takes {n} arguments"));
                }
                self.expect(Tok::Comma)?;
            }
            out.push(item(self)?);
        }
        if *self.peek() == Tok::Comma {
            return self.fail(format!(
                "`{name}` takes {n} argument{}",
                if n == 1 { "" } else { "s" }
            ));
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn arith_primary(&mut self) -> PResult<ArithTerm> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(ArithTerm::num(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.arith_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen => {
                let at = self.offset();
                self.bump();
                match name.as_str() {
                    "S" => {
                        let mut a = self.args(1, "S", Self::arith_term)?;
                        Ok(ArithTerm::Succ(Box::new(a.remove(0))))
                    }
                    "exp" => {
                        let mut a = self.args(2, "exp", Self::arith_term)?;
                        let e = a.pop().expect("two");
                        Ok(ArithTerm::Exp(Box::new(a.pop().expect("two")), Box::new(e)))
                    }
                    "sepc" => {
                        self.expect(Tok::LParen)?;
                        let var = self.ident()?;
                        self.expect(Tok::Comma)?;
                        let bound = self.arith_term()?;
                        self.expect(Tok::Comma)?;
                        let body = self.formula::<Arith>()?;
                        self.expect(Tok::RParen)?;
                        Ok(ArithTerm::Sep {
                            var,
                            bound: Box::new(bound),
                            body: Box::new(body),
                        })
                    }
                    _ => match Func::from_arith_name(&name) {
                        Some(f) => Ok(ArithTerm::Call(
                            f,
                            self.args(f.arity(), &name, Self::arith_term)?,
                        )),
                        None => Err((at, format!("unknown function `{name}`"))),
                    },
                }
            }
            Tok::Ident(_) => self.ident().map(ArithTerm::Var),
            _ => self.unexpected("a term"),
        }
    }

    fn set_term(&mut self) -> PResult<SetTerm> {
        let mut t = self.set_product()?;
        while self.eat(&Tok::PlusA) {
            t = SetTerm::Call(Func::AddA, vec![t, self.set_product()?]);
        }
        Ok(t)
    }

    fn set_product(&mut self) -> PResult<SetTerm> {
        let mut t = self.set_primary()?;
        while self.eat(&Tok::StarA) {
            t = SetTerm::Call(Func::MulA, vec![t, self.set_primary()?]);
        }
        Ok(t)
    }

    fn decode_at(&self, at: usize, n: &Code) -> PResult<HfSet> {
        decode(n).map_err(|e| (at, e.to_string()))
    }

    fn brace_literal(&mut self) -> PResult<HfSet> {
        self.expect(Tok::LBrace)?;
        let mut members = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                members.push(self.literal_member()?);
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(HfSet::from_children(members))
    }

    fn literal_member(&mut self) -> PResult<HfSet> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::LBrace => self.brace_literal(),
            Tok::Hash(n) => {
                self.bump();
                self.decode_at(at, &n)
            }
            Tok::ZeroE => {
                self.bump();
                Ok(HfSet::empty())
            }
            _ => self.unexpected("a set literal"),
        }
    }

    fn set_primary(&mut self) -> PResult<SetTerm> {
        match self.peek().clone() {
            Tok::ZeroE => {
                self.bump();
                Ok(SetTerm::Empty)
            }
            Tok::Hash(_) | Tok::LBrace => self.literal_member().map(SetTerm::Lit),
            Tok::LParen => {
                self.bump();
                let t = self.set_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) if *self.peek2() == Tok::LParen => {
                let at = self.offset();
                self.bump();
                if name == "sep" {
                    self.expect(Tok::LParen)?;
                    let var = self.ident()?;
                    if !self.is_keyword("in") {
                        return self.unexpected("`in`");
                    }
                    self.bump();
                    let bound = self.set_term()?;
                    self.expect(Tok::Comma)?;
                    let body = self.formula::<Sets>()?;
                    self.expect(Tok::RParen)?;
                    return Ok(SetTerm::Sep {
                        var,
                        bound: Box::new(bound),
                        body: Box::new(body),
                    });
                }
                match Func::from_set_name(&name) {
                    Some(f) => Ok(SetTerm::Call(
                        f,
                        self.args(f.arity(), &name, Self::set_term)?,
                    )),
                    None => Err((at, format!("unknown function `{name}`"))),
                }
            }
            Tok::Ident(_) => self.ident().map(SetTerm::Var),
            Tok::Num(n) if n.is_zero() => self.fail("the empty set is written `0e`"),
            _ => self.unexpected("a term"),
        }
    }
}

trait Lang {
    type Atom;
    type Bound;
    fn atom(p: &mut Parser) -> PResult<Self::Atom>;
    fn bound(p: &mut Parser) -> PResult<Option<Self::Bound>>;
}

struct Arith;
struct Sets;

impl Lang for Arith {
    type Atom = ArithAtom;
    type Bound = ArithTerm;

    fn atom(p: &mut Parser) -> PResult<ArithAtom> {
        if let Tok::Ident(name) = p.peek().clone() {
            if let (Some(pred), Tok::LParen) = (Pred::from_arith_name(&name), p.peek2()) {
                p.bump();
                return Ok(ArithAtom::Pred(
                    pred,
                    p.args(pred.arity(), &name, Parser::arith_term)?,
                ));
            }
        }
        let lhs = p.arith_term()?;
        match p.peek() {
            Tok::Eq => {
                p.bump();
                Ok(ArithAtom::Eq(lhs, p.arith_term()?))
            }
            Tok::Lt => {
                p.bump();
                Ok(ArithAtom::Lt(lhs, p.arith_term()?))
            }
            _ => p.unexpected("`=` or `<`"),
        }
    }

    fn bound(p: &mut Parser) -> PResult<Option<ArithTerm>> {
        if p.eat(&Tok::Lt) {
            Ok(Some(p.arith_term()?))
        } else {
            Ok(None)
        }
    }
}

impl Lang for Sets {
    type Atom = SetAtom;
    type Bound = SetBound;

    fn atom(p: &mut Parser) -> PResult<SetAtom> {
        let lhs = p.set_term()?;
        let pred = match p.peek() {
            Tok::Ident(s) if s == "in" => {
                p.bump();
                if p.is_keyword("Ord") {
                    p.bump();
                    return Ok(SetAtom::Pred(Pred::IsOrd, vec![lhs]));
                }
                return Ok(SetAtom::Mem(lhs, p.set_term()?));
            }
            Tok::Eq => {
                p.bump();
                return Ok(SetAtom::Eq(lhs, p.set_term()?));
            }
            Tok::LtA => Pred::LessA,
            Tok::EqC => Pred::CardEq,
            Tok::LtC => Pred::CardLt,
            Tok::LeC => Pred::CardLe,
            _ => return p.unexpected("`in`, `=`, `<_a`, `=_c`, `<_c` or `<=_c`"),
        };
        p.bump();
        Ok(SetAtom::Pred(pred, vec![lhs, p.set_term()?]))
    }

    fn bound(p: &mut Parser) -> PResult<Option<SetBound>> {
        if p.is_keyword("in") {
            p.bump();
            return Ok(Some(SetBound::In(p.set_term()?)));
        }
        if p.eat(&Tok::LtA) {
            return Ok(Some(SetBound::BelowA(p.set_term()?)));
        }
        Ok(None)
    }
}

impl ArithTerm {
    /// The numeral `n`, with `0` kept as the constant.
    pub fn num(n: impl Into<Code>) -> ArithTerm {
        let n = n.into();
        if n.is_zero() {
            ArithTerm::Zero
        } else {
            ArithTerm::Lit(n)
        }
    }

    /// The value of a closed term built from `0`, numerals and `S`.
    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            ArithTerm::Zero => Some(0),
            ArithTerm::Lit(n) => n.to_u64(),
            ArithTerm::Succ(a) => a.as_numeral()?.checked_add(1),
            _ => None,
        }
    }
}

fn run<T>(src: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> Result<T> {
    let mut p = Parser::new(src)?;
    f(&mut p).and_then(|v| p.finish(v)).map_err(into_error)
}

pub fn parse_arith(src: &str) -> Result<ArithFormula> {
    run(src, |p| p.formula::<Arith>())
}

pub fn parse_set(src: &str) -> Result<SetFormula> {
    run(src, |p| p.formula::<Sets>())
}

pub fn parse_arith_term(src: &str) -> Result<ArithTerm> {
    run(src, Parser::arith_term)
}

pub fn parse_set_term(src: &str) -> Result<SetTerm> {
    run(src, Parser::set_term)
}
