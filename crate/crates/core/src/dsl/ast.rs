//! Syntax tree of instance files. Positions are carried for error reports
//! and ignored by equality, so a reparsed pretty-print compares equal.

use std::fmt;

use serde::Serialize;

use crate::arith::Scalar;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

/// Bit-vector over the carrier's declared order; `_` is undefined.
#[derive(Debug, Clone, Eq)]
pub struct Pattern {
    pub cells: Vec<Option<bool>>,
    pub pos: Pos,
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermLit {
    pub coeff: Scalar,
    pub pattern: Pattern,
}

/// `({p}, {q, r})`.
#[derive(Debug, Clone, Eq)]
pub struct CsLit {
    pub one: Vec<Ident>,
    pub zero: Vec<Ident>,
    pub pos: Pos,
}

impl PartialEq for CsLit {
    fn eq(&self, other: &Self) -> bool {
        (&self.one, &self.zero) == (&other.one, &other.zero)
    }
}

/// `{p: 1, q: 1/2}`.
#[derive(Debug, Clone, Eq)]
pub struct FnLit {
    pub entries: Vec<(Ident, Scalar)>,
    pub pos: Pos,
}

impl PartialEq for FnLit {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceDef {
    Dirac { carrier: Ident, x0: Ident },
    Counting { carrier: Ident, weights: FnLit },
    PartialDirac { carrier: Ident, x0: Ident, fns: Vec<Pattern> },
    Custom { carrier: Ident, entries: Vec<(Pattern, Scalar)> },
    Perturb { space: Ident, index: Pattern, value: Scalar },
}

/// A simple function or representation, by name or written inline over a
/// space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Named(Ident),
    Inline { space: Ident, terms: Vec<TermLit> },
}

impl Operand {
    pub fn pos(&self) -> Pos {
        match self {
            Operand::Named(id) => id.pos,
            Operand::Inline { space, .. } => space.pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum L1Def {
    Finite(Vec<Vec<TermLit>>),
    Geometric { prefix: Vec<Vec<TermLit>>, first: Vec<TermLit>, ratio: Scalar },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Lattice,
    ChiDelta,
    Pms,
    Pms4,
    Pis,
    PisL1,
    Lemmas,
}

impl CheckKind {
    pub const ALL: [(CheckKind, &'static str); 7] = [
        (CheckKind::Lattice, "lattice"),
        (CheckKind::ChiDelta, "chidelta"),
        (CheckKind::Pms, "pms"),
        (CheckKind::Pms4, "pms4"),
        (CheckKind::Pis, "pis"),
        (CheckKind::PisL1, "pis_l1"),
        (CheckKind::Lemmas, "lemmas"),
    ];

    pub fn keyword(self) -> &'static str {
        Self::ALL.iter().find(|(k, _)| *k == self).expect("listed").1
    }

    pub fn on_carrier(self) -> bool {
        matches!(self, CheckKind::Lattice | CheckKind::ChiDelta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqLit {
    pub prefix: Vec<Pattern>,
    pub cycle: Vec<Pattern>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcOp {
    Join,
    Meet,
    Not,
    Minus,
    Chi,
    Leq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpOp {
    Join,
    Meet,
    Not,
    Minus,
    Delta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RpOp {
    Add,
    Mul,
    Min,
    Max,
    Abs,
    Scale(Scalar),
    MinConst(Scalar),
}

pub const CC_OPS: [(CcOp, &str, usize); 6] = [
    (CcOp::Join, "join", 2),
    (CcOp::Meet, "meet", 2),
    (CcOp::Not, "not", 1),
    (CcOp::Minus, "minus", 2),
    (CcOp::Chi, "chi", 1),
    (CcOp::Leq, "leq", 2),
];

pub const BP_OPS: [(BpOp, &str, usize); 5] = [
    (BpOp::Join, "join", 2),
    (BpOp::Meet, "meet", 2),
    (BpOp::Not, "not", 1),
    (BpOp::Minus, "minus", 2),
    (BpOp::Delta, "delta", 1),
];

impl CcOp {
    pub fn keyword(self) -> &'static str {
        CC_OPS.iter().find(|(o, _, _)| *o == self).expect("listed").1
    }

    pub fn arity(self) -> usize {
        CC_OPS.iter().find(|(o, _, _)| *o == self).expect("listed").2
    }
}

impl BpOp {
    pub fn keyword(self) -> &'static str {
        BP_OPS.iter().find(|(o, _, _)| *o == self).expect("listed").1
    }

    pub fn arity(self) -> usize {
        BP_OPS.iter().find(|(o, _, _)| *o == self).expect("listed").2
    }
}

impl RpOp {
    pub fn arity(&self) -> usize {
        match self {
            RpOp::Add | RpOp::Mul | RpOp::Min | RpOp::Max => 2,
            RpOp::Abs | RpOp::Scale(_) | RpOp::MinConst(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    Check { kind: CheckKind, target: Ident, seqs: Vec<SeqLit> },
    Integrate { operand: Operand, n: Option<u64> },
    Eval(Operand),
    Disjrep(Operand),
    Abs(Operand),
    MinOne(Operand),
    Norm(Operand),
    Equal(Operand, Operand),
    Add(Operand, Operand),
    Scale { a: Scalar, operand: Operand },
    Phin { operand: Operand, n: u64 },
    Mu { space: Ident, index: Pattern },
    Leq { space: Ident, a: Pattern, b: Pattern },
    Bottom { space: Ident, indices: Vec<Pattern> },
    Lebesgue(Vec<Ident>),
    Psi { rep: Ident, n: u64 },
    Density { rep: Ident, eps: Scalar },
    Cauchy { reps: Vec<Ident>, modulus: Vec<u64> },
    Pair(u64),
    Unpair(u64, u64),
    Compare { a: Scalar, lo: Scalar, hi: Scalar },
    SumTail { partials: Vec<Scalar>, tail: Scalar, n: u64 },
    Cc { op: CcOp, carrier: Ident, args: Vec<CsLit> },
    Bp { op: BpOp, carrier: Ident, args: Vec<FnLit> },
    Rp { op: RpOp, carrier: Ident, args: Vec<FnLit> },
    Family { carrier: Ident, members: Vec<Vec<Ident>> },
}

impl Directive {
    pub fn is_check(&self) -> bool {
        matches!(self, Directive::Check { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Carrier { name: Ident, elements: Vec<Ident> },
    Space { name: Ident, def: SpaceDef },
    Simple { name: Ident, value: Operand },
    L1 { name: Ident, space: Ident, def: L1Def },
    Directive(Directive),
}

#[derive(Debug, Clone, Eq)]
pub struct Stmt {
    pub pos: Pos,
    pub kind: StmtKind,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

fn join<T>(items: &[T], sep: &str, f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = join(&self.cells, ",", |c| match c {
            Some(true) => "1".into(),
            Some(false) => "0".into(),
            None => "_".into(),
        });
        write!(f, "[{cells}]")
    }
}

impl fmt::Display for TermLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coeff, self.pattern)
    }
}

fn terms(ts: &[TermLit]) -> String {
    format!("[{}]", join(ts, ", ", |t| t.to_string()))
}

fn names(ids: &[Ident]) -> String {
    format!("{{{}}}", join(ids, ", ", |i| i.name.clone()))
}

impl fmt::Display for CsLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", names(&self.one), names(&self.zero))
    }
}

impl fmt::Display for FnLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.entries, ", ", |(k, v)| format!("{k}: {v}")))
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Named(id) => write!(f, "{id}"),
            Operand::Inline { space, terms: ts } => write!(f, "{space} {}", terms(ts)),
        }
    }
}

impl fmt::Display for SpaceDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDef::Dirac { carrier, x0 } => write!(f, "dirac({carrier}, {x0})"),
            SpaceDef::Counting { carrier, weights } => write!(f, "counting({carrier}, {weights})"),
            SpaceDef::PartialDirac { carrier, x0, fns } => {
                write!(f, "partial_dirac({carrier}, {x0}, [{}])", join(fns, ", ", |p| p.to_string()))
            }
            SpaceDef::Custom { carrier, entries } => {
                write!(f, "custom({carrier}, {{{}}})", join(entries, ", ", |(p, v)| format!("{p}: {v}")))
            }
            SpaceDef::Perturb { space, index, value } => write!(f, "perturb({space}, {index}, {value})"),
        }
    }
}

impl fmt::Display for L1Def {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L1Def::Finite(ts) => write!(f, "finite({})", join(ts, ", ", |t| terms(t))),
            L1Def::Geometric { prefix, first, ratio } => {
                let mut parts: Vec<String> = prefix.iter().map(|t| terms(t)).collect();
                parts.push(terms(first));
                write!(f, "geometric({}, {ratio})", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Check { kind, target, seqs } => {
                write!(f, "check {} {target}", kind.keyword())?;
                if !seqs.is_empty() {
                    let s = join(seqs, ", ", |s| {
                        format!(
                            "seq([{}], [{}])",
                            join(&s.prefix, ", ", |p| p.to_string()),
                            join(&s.cycle, ", ", |p| p.to_string())
                        )
                    });
                    write!(f, " {s}")?;
                }
                Ok(())
            }
            Directive::Integrate { operand, n } => {
                write!(f, "integrate {operand}")?;
                if let Some(n) = n {
                    write!(f, " {n}")?;
                }
                Ok(())
            }
            Directive::Eval(o) => write!(f, "eval {o}"),
            Directive::Disjrep(o) => write!(f, "disjrep {o}"),
            Directive::Abs(o) => write!(f, "abs {o}"),
            Directive::MinOne(o) => write!(f, "minone {o}"),
            Directive::Norm(o) => write!(f, "norm {o}"),
            Directive::Equal(a, b) => write!(f, "equal {a}, {b}"),
            Directive::Add(a, b) => write!(f, "add {a}, {b}"),
            Directive::Scale { a, operand } => write!(f, "scale {a} {operand}"),
            Directive::Phin { operand, n } => match operand {
                Operand::Named(id) => write!(f, "phin {id} {n}"),
                Operand::Inline { space, terms: ts } => write!(f, "phin {space} {n} {}", terms(ts)),
            },
            Directive::Mu { space, index } => write!(f, "mu {space} {index}"),
            Directive::Leq { space, a, b } => write!(f, "leq {space} {a} {b}"),
            Directive::Bottom { space, indices } => {
                write!(f, "bottom {space} {}", join(indices, ", ", |p| p.to_string()))
            }
            Directive::Lebesgue(reps) => write!(f, "lebesgue {}", join(reps, ", ", |r| r.name.clone())),
            Directive::Psi { rep, n } => write!(f, "psi {rep} {n}"),
            Directive::Density { rep, eps } => write!(f, "density {rep} {eps}"),
            Directive::Cauchy { reps, modulus } => write!(
                f,
                "cauchy {} modulus {}",
                join(reps, ", ", |r| r.name.clone()),
                join(modulus, ", ", |m| m.to_string())
            ),
            Directive::Pair(n) => write!(f, "pair {n}"),
            Directive::Unpair(p, q) => write!(f, "unpair {p} {q}"),
            Directive::Compare { a, lo, hi } => write!(f, "compare {a} {lo} {hi}"),
            Directive::SumTail { partials, tail, n } => {
                write!(f, "sumtail {} tail {tail} n {n}", join(partials, ", ", |p| p.to_string()))
            }
            Directive::Cc { op, carrier, args } => {
                write!(f, "cc {} {carrier} {}", op.keyword(), join(args, " ", |a| a.to_string()))
            }
            Directive::Bp { op, carrier, args } => {
                write!(f, "bp {} {carrier} {}", op.keyword(), join(args, " ", |a| a.to_string()))
            }
            Directive::Rp { op, carrier, args } => {
                let kw = match op {
                    RpOp::Add => "add".to_string(),
                    RpOp::Mul => "mul".into(),
                    RpOp::Min => "min".into(),
                    RpOp::Max => "max".into(),
                    RpOp::Abs => "abs".into(),
                    RpOp::Scale(a) => format!("scale({a})"),
                    RpOp::MinConst(a) => format!("minconst({a})"),
                };
                write!(f, "rp {kw} {carrier} {}", join(args, " ", |a| a.to_string()))
            }
            Directive::Family { carrier, members } => {
                write!(f, "family {carrier} {}", join(members, ", ", |m| names(m)))
            }
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Carrier { name, elements } => write!(f, "carrier {name} = {};", names(elements)),
            StmtKind::Space { name, def } => write!(f, "space {name} = {def};"),
            StmtKind::Simple { name, value } => write!(f, "simple {name} = {value};"),
            StmtKind::L1 { name, space, def } => write!(f, "l1rep {name} = {space} {def};"),
            StmtKind::Directive(d) => write!(f, "{d};"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
