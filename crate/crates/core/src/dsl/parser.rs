use std::collections::HashMap;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::DslError;
use crate::arith::Scalar;

pub fn parse(text: &str) -> Result<Program, DslError> {
    let toks = lex(text)?;
    let file = Parser { toks, at: 0 }.file()?;
    resolve(&file)?;
    Ok(file)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type R<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> R<T> {
        let t = self.peek();
        Err(DslError::syntax(t.pos, format!("expected {wanted}, found {}", t.tok.describe())))
    }

    fn expect(&mut self, tok: Tok) -> R<Pos> {
        if self.peek().tok == tok {
            Ok(self.next().pos)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> R<Ident> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let name = s.clone();
                let pos = self.next().pos;
                Ok(Ident { name, pos })
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> R<Pos> {
        if self.is_kw(kw) {
            Ok(self.next().pos)
        } else {
            self.unexpected(&format!("'{kw}'"))
        }
    }

    fn natural(&mut self) -> R<u64> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let pos = self.peek().pos;
                let v = s.parse().map_err(|_| DslError::syntax(pos, format!("number {s} is too large")))?;
                self.next();
                Ok(v)
            }
            _ => self.unexpected("natural number"),
        }
    }

    fn scalar(&mut self) -> R<Scalar> {
        let pos = self.peek().pos;
        let neg = self.eat(&Tok::Minus);
        let num = match &self.peek().tok {
            Tok::Int(s) => s.clone(),
            _ => return self.unexpected("rational number"),
        };
        self.next();
        let den = if self.eat(&Tok::Slash) {
            match &self.peek().tok {
                Tok::Int(s) => {
                    let s = s.clone();
                    self.next();
                    s
                }
                _ => return self.unexpected("denominator"),
            }
        } else {
            "1".into()
        };
        let text = format!("{}{num}/{den}", if neg { "-" } else { "" });
        text.parse().map_err(|_| DslError::syntax(pos, format!("invalid rational {text}")))
    }

    fn list<T>(&mut self, open: Tok, close: Tok, mut item: impl FnMut(&mut Self) -> R<T>) -> R<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&close) {
                return Ok(out);
            }
            self.expect(Tok::Comma)?;
        }
    }

    /// Comma-separated items until a token that does not follow a comma.
    fn sep<T>(&mut self, mut item: impl FnMut(&mut Self) -> R<T>) -> R<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(&Tok::Comma) {
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn pattern(&mut self) -> R<Pattern> {
        let pos = self.peek().pos;
        let cells = self.list(Tok::LBracket, Tok::RBracket, |p| {
            let t = p.peek().clone();
            match &t.tok {
                Tok::Int(s) if s == "0" => {
                    p.next();
                    Ok(Some(false))
                }
                Tok::Int(s) if s == "1" => {
                    p.next();
                    Ok(Some(true))
                }
                Tok::Underscore => {
                    p.next();
                    Ok(None)
                }
                _ => p.unexpected("0, 1 or _"),
            }
        })?;
        Ok(Pattern { cells, pos })
    }

    fn term(&mut self) -> R<TermLit> {
        self.expect(Tok::LParen)?;
        let coeff = self.scalar()?;
        self.expect(Tok::Comma)?;
        let pattern = self.pattern()?;
        self.expect(Tok::RParen)?;
        Ok(TermLit { coeff, pattern })
    }

    fn terms(&mut self) -> R<Vec<TermLit>> {
        self.list(Tok::LBracket, Tok::RBracket, Self::term)
    }

    fn names(&mut self) -> R<Vec<Ident>> {
        self.list(Tok::LBrace, Tok::RBrace, Self::ident)
    }

    fn fn_lit(&mut self) -> R<FnLit> {
        let pos = self.peek().pos;
        let entries = self.list(Tok::LBrace, Tok::RBrace, |p| {
            let k = p.ident()?;
            p.expect(Tok::Colon)?;
            Ok((k, p.scalar()?))
        })?;
        Ok(FnLit { entries, pos })
    }

    fn cs_lit(&mut self) -> R<CsLit> {
        let pos = self.expect(Tok::LParen)?;
        let one = self.names()?;
        self.expect(Tok::Comma)?;
        let zero = self.names()?;
        self.expect(Tok::RParen)?;
        Ok(CsLit { one, zero, pos })
    }

    fn operand(&mut self) -> R<Operand> {
        let id = self.ident()?;
        if self.peek().tok == Tok::LBracket {
            Ok(Operand::Inline { space: id, terms: self.terms()? })
        } else {
            Ok(Operand::Named(id))
        }
    }

    fn file(mut self) -> R<Program> {
        let mut stmts = Vec::new();
        while self.peek().tok != Tok::Eof {
            let pos = self.peek().pos;
            let kind = self.stmt()?;
            self.expect(Tok::Semi)?;
            stmts.push(Stmt { pos, kind });
        }
        Ok(Program { stmts })
    }

    fn stmt(&mut self) -> R<StmtKind> {
        let head = self.ident()?;
        let declares = matches!(self.peek_at(1), Tok::Eq);
        match head.name.as_str() {
            "carrier" if declares => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                Ok(StmtKind::Carrier { name, elements: self.names()? })
            }
            "space" if declares => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                Ok(StmtKind::Space { name, def: self.space_def()? })
            }
            "simple" if declares => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let space = self.ident()?;
                Ok(StmtKind::Simple { name, value: Operand::Inline { space, terms: self.terms()? } })
            }
            "l1rep" if declares => {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let space = self.ident()?;
                Ok(StmtKind::L1 { name, space, def: self.l1_def()? })
            }
            _ => Ok(StmtKind::Directive(self.directive(head)?)),
        }
    }

    fn space_def(&mut self) -> R<SpaceDef> {
        let kw = self.ident()?;
        self.expect(Tok::LParen)?;
        let def = match kw.name.as_str() {
            "dirac" => {
                let carrier = self.ident()?;
                self.expect(Tok::Comma)?;
                SpaceDef::Dirac { carrier, x0: self.ident()? }
            }
            "counting" => {
                let carrier = self.ident()?;
                self.expect(Tok::Comma)?;
                SpaceDef::Counting { carrier, weights: self.fn_lit()? }
            }
            "partial_dirac" => {
                let carrier = self.ident()?;
                self.expect(Tok::Comma)?;
                let x0 = self.ident()?;
                self.expect(Tok::Comma)?;
                let fns = self.list(Tok::LBracket, Tok::RBracket, Self::pattern)?;
                SpaceDef::PartialDirac { carrier, x0, fns }
            }
            "custom" => {
                let carrier = self.ident()?;
                self.expect(Tok::Comma)?;
                let entries = self.list(Tok::LBrace, Tok::RBrace, |p| {
                    let pat = p.pattern()?;
                    p.expect(Tok::Colon)?;
                    Ok((pat, p.scalar()?))
                })?;
                SpaceDef::Custom { carrier, entries }
            }
            "perturb" => {
                let space = self.ident()?;
                self.expect(Tok::Comma)?;
                let index = self.pattern()?;
                self.expect(Tok::Comma)?;
                SpaceDef::Perturb { space, index, value: self.scalar()? }
            }
            other => {
                return Err(DslError::syntax(
                    kw.pos,
                    format!("unknown space constructor '{other}' (dirac, counting, partial_dirac, custom, perturb)"),
                ))
            }
        };
        self.expect(Tok::RParen)?;
        Ok(def)
    }

    fn l1_def(&mut self) -> R<L1Def> {
        let kw = self.ident()?;
        match kw.name.as_str() {
            "finite" => Ok(L1Def::Finite(self.list(Tok::LParen, Tok::RParen, Self::terms)?)),
            "geometric" => {
                self.expect(Tok::LParen)?;
                let mut lists = vec![self.terms()?];
                self.expect(Tok::Comma)?;
                while self.peek().tok == Tok::LBracket {
                    lists.push(self.terms()?);
                    self.expect(Tok::Comma)?;
                }
                let ratio = self.scalar()?;
                self.expect(Tok::RParen)?;
                let first = lists.pop().expect("nonempty");
                Ok(L1Def::Geometric { prefix: lists, first, ratio })
            }
            other => Err(DslError::syntax(kw.pos, format!("unknown representation '{other}' (finite, geometric)"))),
        }
    }

    fn directive(&mut self, head: Ident) -> R<Directive> {
        let d = match head.name.as_str() {
            "check" => {
                let kw = self.ident()?;
                let kind = CheckKind::ALL
                    .iter()
                    .find(|(_, k)| *k == kw.name)
                    .map(|(k, _)| *k)
                    .ok_or_else(|| DslError::syntax(kw.pos, format!("unknown check '{}'", kw.name)))?;
                let target = self.ident()?;
                let mut seqs = Vec::new();
                if self.is_kw("seq") {
                    seqs = self.sep(|p| {
                        p.keyword("seq")?;
                        p.expect(Tok::LParen)?;
                        let prefix = p.list(Tok::LBracket, Tok::RBracket, Self::pattern)?;
                        p.expect(Tok::Comma)?;
                        let cycle = p.list(Tok::LBracket, Tok::RBracket, Self::pattern)?;
                        p.expect(Tok::RParen)?;
                        Ok(SeqLit { prefix, cycle })
                    })?;
                }
                Directive::Check { kind, target, seqs }
            }
            "integrate" => {
                let operand = self.operand()?;
                let n = match self.peek().tok {
                    Tok::Int(_) => Some(self.natural()?),
                    _ => None,
                };
                Directive::Integrate { operand, n }
            }
            "eval" => Directive::Eval(self.operand()?),
            "disjrep" => Directive::Disjrep(self.operand()?),
            "abs" => Directive::Abs(self.operand()?),
            "minone" => Directive::MinOne(self.operand()?),
            "norm" => Directive::Norm(self.operand()?),
            "equal" => {
                let a = self.operand()?;
                self.expect(Tok::Comma)?;
                Directive::Equal(a, self.operand()?)
            }
            "add" => {
                let a = self.operand()?;
                self.expect(Tok::Comma)?;
                Directive::Add(a, self.operand()?)
            }
            "scale" => Directive::Scale { a: self.scalar()?, operand: self.operand()? },
            "phin" => {
                let id = self.ident()?;
                let n = self.natural()?;
                let operand = if self.peek().tok == Tok::LBracket {
                    Operand::Inline { space: id, terms: self.terms()? }
                } else {
                    Operand::Named(id)
                };
                Directive::Phin { operand, n }
            }
            "mu" => Directive::Mu { space: self.ident()?, index: self.pattern()? },
            "leq" => Directive::Leq { space: self.ident()?, a: self.pattern()?, b: self.pattern()? },
            "bottom" => Directive::Bottom { space: self.ident()?, indices: self.sep(Self::pattern)? },
            "lebesgue" => Directive::Lebesgue(self.sep(Self::ident)?),
            "psi" => Directive::Psi { rep: self.ident()?, n: self.natural()? },
            "density" => Directive::Density { rep: self.ident()?, eps: self.scalar()? },
            "cauchy" => {
                let reps = self.sep(Self::ident)?;
                self.keyword("modulus")?;
                Directive::Cauchy { reps, modulus: self.sep(Self::natural)? }
            }
            "pair" => Directive::Pair(self.natural()?),
            "unpair" => Directive::Unpair(self.natural()?, self.natural()?),
            "compare" => Directive::Compare { a: self.scalar()?, lo: self.scalar()?, hi: self.scalar()? },
            "sumtail" => {
                let partials = self.sep(Self::scalar)?;
                self.keyword("tail")?;
                let tail = self.scalar()?;
                self.keyword("n")?;
                Directive::SumTail { partials, tail, n: self.natural()? }
            }
            "cc" => {
                let kw = self.ident()?;
                let op = CC_OPS
                    .iter()
                    .find(|(_, k, _)| *k == kw.name)
                    .map(|(o, _, _)| *o)
                    .ok_or_else(|| DslError::syntax(kw.pos, format!("unknown operation '{}'", kw.name)))?;
                let carrier = self.ident()?;
                let mut args = Vec::new();
                while self.peek().tok == Tok::LParen {
                    args.push(self.cs_lit()?);
                }
                if args.len() != op.arity() {
                    return Err(arity(kw.pos, kw.name.as_str(), op.arity(), args.len()));
                }
                Directive::Cc { op, carrier, args }
            }
            "bp" => {
                let kw = self.ident()?;
                let op = BP_OPS
                    .iter()
                    .find(|(_, k, _)| *k == kw.name)
                    .map(|(o, _, _)| *o)
                    .ok_or_else(|| DslError::syntax(kw.pos, format!("unknown operation '{}'", kw.name)))?;
                let carrier = self.ident()?;
                let args = self.fn_args()?;
                if args.len() != op.arity() {
                    return Err(arity(kw.pos, kw.name.as_str(), op.arity(), args.len()));
                }
                Directive::Bp { op, carrier, args }
            }
            "rp" => {
                let kw = self.ident()?;
                let op = match kw.name.as_str() {
                    "add" => RpOp::Add,
                    "mul" => RpOp::Mul,
                    "min" => RpOp::Min,
                    "max" => RpOp::Max,
                    "abs" => RpOp::Abs,
                    "scale" | "minconst" => {
                        self.expect(Tok::LParen)?;
                        let a = self.scalar()?;
                        self.expect(Tok::RParen)?;
                        if kw.name == "scale" {
                            RpOp::Scale(a)
                        } else {
                            RpOp::MinConst(a)
                        }
                    }
                    other => return Err(DslError::syntax(kw.pos, format!("unknown operation '{other}'"))),
                };
                let carrier = self.ident()?;
                let args = self.fn_args()?;
                if args.len() != op.arity() {
                    return Err(arity(kw.pos, kw.name.as_str(), op.arity(), args.len()));
                }
                Directive::Rp { op, carrier, args }
            }
            "family" => Directive::Family { carrier: self.ident()?, members: self.sep(Self::names)? },
            other => return Err(DslError::syntax(head.pos, format!("unknown statement '{other}'"))),
        };
        Ok(d)
    }

    fn fn_args(&mut self) -> R<Vec<FnLit>> {
        let mut args = Vec::new();
        while self.peek().tok == Tok::LBrace {
            args.push(self.fn_lit()?);
        }
        Ok(args)
    }
}

fn arity(pos: Pos, op: &str, want: usize, got: usize) -> DslError {
    DslError::arity(pos, format!("'{op}' takes {want} argument(s), got {got}"))
}

#[derive(Clone)]
enum Sym {
    Carrier(Vec<String>),
    Space(String),
    Simple(String),
    L1(String),
}

impl Sym {
    fn kind(&self) -> &'static str {
        match self {
            Sym::Carrier(_) => "carrier",
            Sym::Space(_) => "space",
            Sym::Simple(_) => "simple function",
            Sym::L1(_) => "l1 representation",
        }
    }
}

struct Scope {
    syms: HashMap<String, Sym>,
}

impl Scope {
    fn get(&self, id: &Ident) -> R<&Sym> {
        self.syms
            .get(&id.name)
            .ok_or_else(|| DslError::resolution(id.pos, format!("unknown identifier '{}'", id.name)))
    }

    fn wrong(id: &Ident, want: &str, got: &Sym) -> DslError {
        DslError::resolution(id.pos, format!("'{}' is a {}, expected a {want}", id.name, got.kind()))
    }

    fn carrier(&self, id: &Ident) -> R<&[String]> {
        match self.get(id)? {
            Sym::Carrier(els) => Ok(els),
            s => Err(Self::wrong(id, "carrier", s)),
        }
    }

    fn space_carrier(&self, id: &Ident) -> R<&[String]> {
        match self.get(id)? {
            Sym::Space(c) => Ok(self.elements(c)),
            s => Err(Self::wrong(id, "space", s)),
        }
    }

    fn elements(&self, carrier: &str) -> &[String] {
        match self.syms.get(carrier) {
            Some(Sym::Carrier(els)) => els,
            _ => &[],
        }
    }


    fn define(&mut self, id: &Ident, sym: Sym) -> R<()> {
        if self.syms.contains_key(&id.name) {
            return Err(DslError::resolution(id.pos, format!("'{}' is already defined", id.name)));
        }
        self.syms.insert(id.name.clone(), sym);
        Ok(())
    }
}

fn check_pattern(p: &Pattern, els: &[String], total: bool) -> R<()> {
    if p.cells.len() != els.len() {
        return Err(DslError::arity(
            p.pos,
            format!("pattern {p} has {} entries, the carrier has {}", p.cells.len(), els.len()),
        ));
    }
    if total && p.cells.iter().any(Option::is_none) {
        return Err(DslError::syntax(p.pos, format!("pattern {p} must be total here")));
    }
    Ok(())
}

fn check_atom(id: &Ident, els: &[String]) -> R<()> {
    if els.contains(&id.name) {
        Ok(())
    } else {
        Err(DslError::resolution(id.pos, format!("'{}' is not an element of the carrier", id.name)))
    }
}

fn check_terms(ts: &[TermLit], els: &[String]) -> R<()> {
    ts.iter().try_for_each(|t| check_pattern(&t.pattern, els, false))
}

fn check_operand(sc: &Scope, o: &Operand) -> R<String> {
    match o {
        Operand::Named(id) => match sc.get(id)? {
            Sym::Simple(s) | Sym::L1(s) => Ok(s.clone()),
            s => Err(Scope::wrong(id, "simple function or l1 representation", s)),
        },
        Operand::Inline { space, terms } => {
            let els = sc.space_carrier(space)?;
            check_terms(terms, els)?;
            Ok(space.name.clone())
        }
    }
}

fn check_l1(sc: &Scope, id: &Ident) -> R<String> {
    match sc.get(id)? {
        Sym::L1(s) => Ok(s.clone()),
        s => Err(Scope::wrong(id, "l1 representation", s)),
    }
}

fn same_space(sc: &Scope, ids: &[Ident]) -> R<()> {
    let first = check_l1(sc, &ids[0])?;
    for id in &ids[1..] {
        if check_l1(sc, id)? != first {
            return Err(DslError::resolution(id.pos, format!("'{}' lives on a different space than '{}'", id.name, ids[0].name)));
        }
    }
    Ok(())
}

/// Reference resolution plus the arity checks that need the carrier.
fn resolve(file: &Program) -> R<()> {
    let mut sc = Scope { syms: HashMap::new() };
    for s in &file.stmts {
        match &s.kind {
            StmtKind::Carrier { name, elements } => {
                let mut seen = Vec::new();
                for e in elements {
                    if seen.contains(&e.name) {
                        return Err(DslError::resolution(e.pos, format!("duplicate element '{}'", e.name)));
                    }
                    seen.push(e.name.clone());
                }
                sc.define(name, Sym::Carrier(seen))?;
            }
            StmtKind::Space { name, def } => {
                let carrier = match def {
                    SpaceDef::Dirac { carrier, x0 } => {
                        check_atom(x0, sc.carrier(carrier)?)?;
                        carrier.name.clone()
                    }
                    SpaceDef::Counting { carrier, weights } => {
                        let els = sc.carrier(carrier)?;
                        weights.entries.iter().try_for_each(|(k, _)| check_atom(k, els))?;
                        carrier.name.clone()
                    }
                    SpaceDef::PartialDirac { carrier, x0, fns } => {
                        let els = sc.carrier(carrier)?;
                        check_atom(x0, els)?;
                        fns.iter().try_for_each(|p| check_pattern(p, els, false))?;
                        carrier.name.clone()
                    }
                    SpaceDef::Custom { carrier, entries } => {
                        let els = sc.carrier(carrier)?;
                        entries.iter().try_for_each(|(p, _)| check_pattern(p, els, false))?;
                        carrier.name.clone()
                    }
                    SpaceDef::Perturb { space, index, value: _ } => {
                        let els = sc.space_carrier(space)?;
                        check_pattern(index, els, false)?;
                        match sc.get(space)? {
                            Sym::Space(c) => c.clone(),
                            _ => unreachable!("checked above"),
                        }
                    }
                };
                sc.define(name, Sym::Space(carrier))?;
            }
            StmtKind::Simple { name, value } => {
                let space = check_operand(&sc, value)?;
                sc.define(name, Sym::Simple(space))?;
            }
            StmtKind::L1 { name, space, def } => {
                let els = sc.space_carrier(space)?;
                match def {
                    L1Def::Finite(ts) => ts.iter().try_for_each(|t| check_terms(t, els))?,
                    L1Def::Geometric { prefix, first, ratio: _ } => {
                        prefix.iter().try_for_each(|t| check_terms(t, els))?;
                        check_terms(first, els)?;
                    }
                }
                sc.define(name, Sym::L1(space.name.clone()))?;
            }
            StmtKind::Directive(d) => resolve_directive(&sc, d)?,
        }
    }
    Ok(())
}

fn resolve_directive(sc: &Scope, d: &Directive) -> R<()> {
    match d {
        Directive::Check { kind, target, seqs } => {
            if kind.on_carrier() {
                sc.carrier(target)?;
            } else if *kind == CheckKind::PisL1 || *kind == CheckKind::Pis || *kind == CheckKind::Lemmas {
                sc.space_carrier(target)?;
            } else {
                let els = sc.space_carrier(target)?;
                for s in seqs {
                    s.prefix.iter().chain(&s.cycle).try_for_each(|p| check_pattern(p, els, false))?;
                }
            }
            if *kind != CheckKind::Pms4 && !seqs.is_empty() {
                return Err(DslError::arity(target.pos, format!("'check {}' takes no sequences", kind.keyword())));
            }
            if *kind == CheckKind::Pms4 && seqs.iter().any(|s| s.cycle.is_empty()) {
                return Err(DslError::arity(target.pos, "a sequence needs a nonempty cycle".to_string()));
            }
        }
        Directive::Integrate { operand, .. }
        | Directive::Eval(operand)
        | Directive::Disjrep(operand)
        | Directive::Abs(operand)
        | Directive::MinOne(operand)
        | Directive::Norm(operand)
        | Directive::Scale { operand, .. }
        | Directive::Phin { operand, .. } => {
            check_operand(sc, operand)?;
        }
        Directive::Equal(a, b) | Directive::Add(a, b) => {
            if check_operand(sc, a)? != check_operand(sc, b)? {
                return Err(DslError::resolution(b.pos(), "operands live on different spaces".to_string()));
            }
        }
        Directive::Mu { space, index } => check_pattern(index, sc.space_carrier(space)?, false)?,
        Directive::Leq { space, a, b } => {
            let els = sc.space_carrier(space)?;
            check_pattern(a, els, false)?;
            check_pattern(b, els, false)?;
        }
        Directive::Bottom { space, indices } => {
            let els = sc.space_carrier(space)?;
            indices.iter().try_for_each(|p| check_pattern(p, els, false))?;
        }
        Directive::Lebesgue(reps) => same_space(sc, reps)?,
        Directive::Psi { rep, .. } | Directive::Density { rep, .. } => {
            check_l1(sc, rep)?;
        }
        Directive::Cauchy { reps, modulus } => {
            same_space(sc, reps)?;
            if modulus.is_empty() {
                return Err(DslError::arity(reps[0].pos, "cauchy needs a modulus".to_string()));
            }
        }
        Directive::Pair(_) | Directive::Unpair(..) | Directive::Compare { .. } | Directive::SumTail { .. } => {}
        Directive::Cc { carrier, args, .. } => {
            let els = sc.carrier(carrier)?;
            args.iter()
                .flat_map(|a| a.one.iter().chain(&a.zero))
                .try_for_each(|id| check_atom(id, els))?;
        }
        Directive::Bp { carrier, args, .. } | Directive::Rp { carrier, args, .. } => {
            let els = sc.carrier(carrier)?;
            args.iter()
                .flat_map(|a| a.entries.iter().map(|(k, _)| k))
                .try_for_each(|id| check_atom(id, els))?;
        }
        Directive::Family { carrier, members } => {
            let els = sc.carrier(carrier)?;
            members.iter().flatten().try_for_each(|id| check_atom(id, els))?;
        }
    }
    Ok(())
}
