//! Executes a parsed instance file against the library and collects a
//! report with a fixed key order.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::ast::*;
use crate::arith::{cotransitive_compare, pair, sum_with_tail, unpair, Decision, Scalar};
use crate::error::{Error, Result};
use crate::l1::{self, L1Rep, L1Space};
use crate::laws::{self, MAX_EXHAUSTIVE};
use crate::premeasure::{self, Index, PeriodicSeq, PreMeasureSpace, DEFAULT_MAX_CARRIER};
use crate::preint::{self, SimpleSpace, DEFAULT_MAX_TERMS};
use crate::report::AxiomReport;
use crate::sets::{BoolOp, BoolPartialFn, Carrier, ComplementedSubset, RealOp, RealPartialFn, Subset, SubsetFamily};
use crate::simple::SimpleTerms;

pub const SCHEMA: &str = "cmeasure-report/1";
const PMS4_HORIZON: usize = 64;
const PMS4_RANDOM: usize = 8;
const SIMPLE_BATTERY: usize = 6;
const L1_BATTERY: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Declarations and `check` directives only.
    Check,
    /// Everything.
    Eval,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub max_carrier: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { mode: Mode::Eval, max_carrier: DEFAULT_MAX_CARRIER, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub directive: String,
    pub line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub entries: usize,
    pub holds: usize,
    pub fails: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub results: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.summary.fails == 0 && self.summary.errors == 0
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Outcome of one statement: a JSON value plus the verdicts it carries.
struct Out {
    value: Value,
    verdicts: Vec<bool>,
}

impl Out {
    fn plain(value: Value) -> Self {
        Out { value, verdicts: vec![] }
    }

    fn reports(reports: &[AxiomReport]) -> Self {
        Out { value: json!({ "verdicts": reports }), verdicts: reports.iter().map(AxiomReport::is_holds).collect() }
    }
}

enum Val {
    Simple(SimpleTerms),
    L1(L1Rep<SimpleTerms>),
}

#[derive(Default)]
struct Env {
    carriers: HashMap<String, Carrier>,
    spaces: HashMap<String, Arc<PreMeasureSpace>>,
    simples: HashMap<String, SimpleTerms>,
    l1s: HashMap<String, (Arc<PreMeasureSpace>, L1Rep<SimpleTerms>)>,
}

fn s(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

fn failed(name: &str) -> Error {
    Error::InvalidArgument(format!("'{name}' was not built because its declaration failed"))
}

impl Env {
    fn carrier(&self, id: &Ident) -> Result<&Carrier> {
        self.carriers.get(&id.name).ok_or_else(|| failed(&id.name))
    }

    fn space(&self, id: &Ident) -> Result<&Arc<PreMeasureSpace>> {
        self.spaces.get(&id.name).ok_or_else(|| failed(&id.name))
    }

    fn l1(&self, id: &Ident) -> Result<&(Arc<PreMeasureSpace>, L1Rep<SimpleTerms>)> {
        self.l1s.get(&id.name).ok_or_else(|| failed(&id.name))
    }

    fn terms(&self, space: &Arc<PreMeasureSpace>, ts: &[TermLit]) -> Result<SimpleTerms> {
        let terms = ts
            .iter()
            .map(|t| Ok((t.coeff.clone(), index(space, &t.pattern)?)))
            .collect::<Result<Vec<_>>>()?;
        SimpleTerms::new(space, terms)
    }

    fn operand(&self, o: &Operand) -> Result<(Arc<PreMeasureSpace>, Val)> {
        match o {
            Operand::Inline { space, terms } => {
                let sp = self.space(space)?.clone();
                let v = self.terms(&sp, terms)?;
                Ok((sp, Val::Simple(v)))
            }
            Operand::Named(id) => {
                if let Some(v) = self.simples.get(&id.name) {
                    return Ok((v.space().clone(), Val::Simple(v.clone())));
                }
                let (sp, a) = self.l1(id)?;
                Ok((sp.clone(), Val::L1(a.clone())))
            }
        }
    }

    fn simple(&self, o: &Operand) -> Result<SimpleTerms> {
        match self.operand(o)?.1 {
            Val::Simple(v) => Ok(v),
            Val::L1(_) => Err(Error::InvalidArgument(format!("'{o}' is not a simple function"))),
        }
    }

    fn reps(&self, ids: &[Ident]) -> Result<(Arc<PreMeasureSpace>, Vec<L1Rep<SimpleTerms>>)> {
        let sp = self.l1(&ids[0])?.0.clone();
        let reps = ids.iter().map(|id| Ok(self.l1(id)?.1.clone())).collect::<Result<Vec<_>>>()?;
        Ok((sp, reps))
    }
}

fn base(space: &Arc<PreMeasureSpace>) -> SimpleSpace {
    SimpleSpace::new(space.clone(), DEFAULT_MAX_TERMS)
}

fn index(space: &PreMeasureSpace, p: &Pattern) -> Result<Index> {
    let cs = ComplementedSubset::from_pattern(space.carrier(), &p.cells)?;
    space.index_of(&cs).ok_or_else(|| Error::NoSuchIndex(p.to_string()))
}

fn names<'a>(ids: &'a [Ident]) -> Vec<&'a str> {
    ids.iter().map(|i| i.name.as_str()).collect()
}

fn cs_json(a: &ComplementedSubset) -> Value {
    json!({ "one": a.one().names(), "zero": a.zero().names(), "pattern": a.pattern() })
}

fn bool_fn_json(f: &BoolPartialFn) -> Value {
    let c = f.carrier();
    let m: serde_json::Map<String, Value> = (0..c.len())
        .filter_map(|x| f.value(x).map(|v| (c.name(x).to_string(), json!(u8::from(v)))))
        .collect();
    Value::Object(m)
}

fn lift(v: Val) -> L1Rep<SimpleTerms> {
    match v {
        Val::Simple(v) => L1Rep::embed(v),
        Val::L1(a) => a,
    }
}

fn rep_json(a: &L1Rep<SimpleTerms>) -> Value {
    serde_json::to_value(a).expect("representations serialize")
}

fn real_fn(c: &Carrier, f: &FnLit) -> Result<RealPartialFn> {
    let entries: Vec<(&str, Scalar)> = f.entries.iter().map(|(k, v)| (k.name.as_str(), v.clone())).collect();
    RealPartialFn::from_named(c, &entries)
}

fn bool_fn(c: &Carrier, f: &FnLit) -> Result<BoolPartialFn> {
    let entries = f
        .entries
        .iter()
        .map(|(k, v)| {
            if v.is_zero() {
                Ok((k.name.as_str(), false))
            } else if *v == Scalar::one() {
                Ok((k.name.as_str(), true))
            } else {
                Err(Error::InvalidArgument(format!("boolean value {v} at `{}`", k.name)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    BoolPartialFn::from_values(c, &entries)
}

fn build_space(env: &Env, def: &SpaceDef, cfg: &RunConfig) -> Result<PreMeasureSpace> {
    match def {
        SpaceDef::Dirac { carrier, x0 } => PreMeasureSpace::mk_dirac(env.carrier(carrier)?, &x0.name, cfg.max_carrier),
        SpaceDef::Counting { carrier, weights } => {
            let w: Vec<(&str, Scalar)> = weights.entries.iter().map(|(k, v)| (k.name.as_str(), v.clone())).collect();
            PreMeasureSpace::mk_counting(env.carrier(carrier)?, &w, cfg.max_carrier)
        }
        SpaceDef::PartialDirac { carrier, x0, fns } => {
            let c = env.carrier(carrier)?;
            cap(c, cfg)?;
            let fns = fns
                .iter()
                .map(|p| Ok(ComplementedSubset::from_pattern(c, &p.cells)?.chi()))
                .collect::<Result<Vec<_>>>()?;
            PreMeasureSpace::mk_dirac_partial(c, &fns, &x0.name)
        }
        SpaceDef::Custom { carrier, entries } => {
            let c = env.carrier(carrier)?;
            cap(c, cfg)?;
            let lambda = entries
                .iter()
                .map(|(p, _)| ComplementedSubset::from_pattern(c, &p.cells))
                .collect::<Result<Vec<_>>>()?;
            PreMeasureSpace::from_parts(c, lambda, entries.iter().map(|(_, v)| v.clone()).collect())
        }
        SpaceDef::Perturb { space, index: p, value } => {
            let sp = env.space(space)?;
            sp.perturb(index(sp, p)?, value.clone())
        }
    }
}

fn cap(c: &Carrier, cfg: &RunConfig) -> Result<()> {
    if c.len() > cfg.max_carrier {
        return Err(Error::CapExceeded(format!("carrier has {} elements, limit is {}", c.len(), cfg.max_carrier)));
    }
    Ok(())
}

fn space_json(sp: &PreMeasureSpace) -> Value {
    let mut v = json!({ "kind": sp.describe(), "indices": sp.len() });
    if sp.len() <= 64 {
        let mu: serde_json::Map<String, Value> = sp.indices().map(|i| (sp.display(i), s(sp.mu(i)))).collect();
        v["mu"] = Value::Object(mu);
    }
    v
}

fn check(env: &Env, kind: CheckKind, target: &Ident, seqs: &[SeqLit], cfg: &RunConfig) -> Result<Out> {
    if kind.on_carrier() {
        let c = env.carrier(target)?;
        if c.len() > MAX_EXHAUSTIVE {
            return Err(Error::CapExceeded(format!(
                "exhaustive suites take at most {MAX_EXHAUSTIVE} elements, carrier has {}",
                c.len()
            )));
        }
        let r = if kind == CheckKind::Lattice { laws::lattice_suite(c) } else { laws::chi_delta_suite(c) };
        return Ok(Out::reports(&r));
    }
    let sp = env.space(target)?;
    match kind {
        CheckKind::Pms => Ok(Out::reports(&premeasure::check_pms_all(sp, cfg.seed)?)),
        CheckKind::Pms4 => {
            let seqs = if seqs.is_empty() {
                premeasure::pms4_battery(sp, PMS4_RANDOM, cfg.seed)
            } else {
                seqs.iter()
                    .map(|q| {
                        let ix = |ps: &[Pattern]| ps.iter().map(|p| index(sp, p)).collect::<Result<Vec<_>>>();
                        PeriodicSeq::new(ix(&q.prefix)?, ix(&q.cycle)?)
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let (r, cases) = premeasure::check_pms4(sp, &seqs, PMS4_HORIZON)?;
            let verdicts = vec![r.is_holds()];
            Ok(Out { value: json!({ "verdicts": [r], "cases": cases }), verdicts })
        }
        CheckKind::Pis => {
            let l = base(sp);
            let battery = preint::simple_battery(sp, SIMPLE_BATTERY, cfg.seed)?;
            Ok(Out::reports(&preint::check_pis_all(&l, &battery, &preint::default_scalars())?.reports))
        }
        CheckKind::PisL1 => {
            let l = base(sp);
            let simple = preint::simple_battery(sp, L1_BATTERY, cfg.seed)?;
            let battery = l1::finite_battery(&l, &simple)?;
            let l1 = L1Space::new(l);
            Ok(Out::reports(&preint::check_pis_all(&l1, &battery, &preint::default_scalars())?.reports))
        }
        CheckKind::Lemmas => {
            let l = base(sp);
            let battery = preint::simple_battery(sp, SIMPLE_BATTERY, cfg.seed)?;
            let mut r = vec![premeasure::check_monotone(sp), premeasure::check_restriction(sp)];
            r.extend(preint::check_basic_lemmas(&l, &battery)?);
            Ok(Out::reports(&r))
        }
        CheckKind::Lattice | CheckKind::ChiDelta => unreachable!("handled above"),
    }
}

fn directive(env: &Env, d: &Directive, cfg: &RunConfig) -> Result<Out> {
    let plain = |v: Value| Ok(Out::plain(v));
    match d {
        Directive::Check { kind, target, seqs } => check(env, *kind, target, seqs, cfg),
        Directive::Integrate { operand, n } => match (env.operand(operand)?, n) {
            ((_, Val::Simple(v)), None) => plain(s(&v.integral())),
            ((_, Val::Simple(_)), Some(_)) => {
                Err(Error::InvalidArgument("truncated integration needs an l1 representation".into()))
            }
            ((sp, Val::L1(a)), None) => plain(s(&l1::integral(&base(&sp), &a)?)),
            ((sp, Val::L1(a)), Some(n)) => {
                let iv = l1::integral_interval(&base(&sp), &a, *n as usize)?;
                plain(json!({ "lo": s(iv.lo()), "hi": s(iv.hi()) }))
            }
        },
        Directive::Eval(o) => match env.operand(o)? {
            (_, Val::Simple(v)) => plain(json!(v.eval())),
            (sp, Val::L1(a)) => plain(json!(l1::canonical(&base(&sp), &a)?)),
        },
        Directive::Disjrep(o) => {
            let v = env.simple(o)?;
            let r = v.disjrep()?;
            let holds = vec![r.simple_eq(&v)?, r.is_disjoint(), r.integral() == v.integral()];
            let value = json!({
                "terms": r,
                "simple_eq": holds[0],
                "disjoint": holds[1],
                "integral": s(&r.integral()),
            });
            Ok(Out { value, verdicts: holds })
        }
        Directive::Abs(o) | Directive::MinOne(o) => {
            let is_abs = matches!(d, Directive::Abs(_));
            match env.operand(o)? {
                (_, Val::Simple(v)) => {
                    let r = if is_abs { v.abs()? } else { v.min_one()? };
                    plain(json!({ "terms": r, "values": r.eval(), "integral": s(&r.integral()) }))
                }
                (sp, Val::L1(a)) => {
                    let l = base(&sp);
                    let r = if is_abs { l1::l1_abs(&l, &a)? } else { l1::l1_min_one(&l, &a)? };
                    plain(json!({
                        "rep": rep_json(&r),
                        "values": l1::canonical(&l, &r)?,
                        "integral": s(&l1::integral(&l, &r)?),
                    }))
                }
            }
        }
        Directive::Norm(o) => match env.operand(o)? {
            (sp, Val::Simple(v)) => plain(s(&l1::one_norm(&base(&sp), &v)?)),
            (sp, Val::L1(a)) => plain(s(&l1::l1_norm(&base(&sp), &a)?)),
        },
        Directive::Equal(a, b) => {
            let (sp, a) = env.operand(a)?;
            let (_, b) = env.operand(b)?;
            let eq = match (a, b) {
                (Val::Simple(x), Val::Simple(y)) => x.simple_eq(&y)?,
                (x, y) => l1::l1_eq(&base(&sp), &lift(x), &lift(y))?,
            };
            plain(json!(eq))
        }
        Directive::Add(a, b) => {
            let (sp, a) = env.operand(a)?;
            let (_, b) = env.operand(b)?;
            let l = base(&sp);
            let (value, additive) = match (a, b) {
                (Val::Simple(x), Val::Simple(y)) => {
                    let sum = x.add(&y)?;
                    let additive = sum.integral() == x.integral() + y.integral();
                    (json!({ "terms": sum, "integral": s(&sum.integral()), "additive": additive }), additive)
                }
                (x, y) => {
                    let (x, y) = (lift(x), lift(y));
                    let sum = l1::l1_add(&l, &x, &y)?;
                    let total = l1::integral(&l, &sum)?;
                    let additive = total == l1::integral(&l, &x)? + l1::integral(&l, &y)?;
                    (json!({ "rep": rep_json(&sum), "integral": s(&total), "additive": additive }), additive)
                }
            };
            Ok(Out { value, verdicts: vec![additive] })
        }
        Directive::Scale { a, operand } => match env.operand(operand)? {
            (sp, Val::Simple(v)) => {
                let r = v.scale(a);
                plain(json!({ "terms": r, "integral": s(&r.integral()), "norm": s(&l1::one_norm(&base(&sp), &r)?) }))
            }
            (sp, Val::L1(x)) => {
                let l = base(&sp);
                let r = l1::l1_scale(&l, a, &x)?;
                plain(json!({
                    "rep": rep_json(&r),
                    "integral": s(&l1::integral(&l, &r)?),
                    "norm": s(&l1::l1_norm(&l, &r)?),
                }))
            }
        },
        Directive::Phin { operand, n } => {
            let r = env.simple(operand)?.phi_n_report(*n)?;
            let verdicts = vec![r.dom_contained, r.zero_part_small, r.measure_bounded];
            Ok(Out { value: json!(r), verdicts })
        }
        Directive::Mu { space, index: p } => {
            let sp = env.space(space)?;
            let i = index(sp, p)?;
            plain(json!({ "index": sp.display(i), "mu": s(sp.mu(i)) }))
        }
        Directive::Leq { space, a, b } => {
            let sp = env.space(space)?;
            plain(json!(sp.index_leq(index(sp, a)?, index(sp, b)?)))
        }
        Directive::Bottom { space, indices } => {
            let sp = env.space(space)?;
            let ix = indices.iter().map(|p| index(sp, p)).collect::<Result<Vec<_>>>()?;
            let b = sp.bottom_on(&ix)?;
            plain(json!({ "index": sp.display(b), "mu": s(sp.mu(b)) }))
        }
        Directive::Lebesgue(ids) => {
            let (sp, gammas) = env.reps(ids)?;
            let l = base(&sp);
            let f = l1::lebesgue_flatten(&l, &gammas)?;
            let errors = (0..=gammas.len())
                .map(|n| l1::truncation_error(&l, &f.alpha, &gammas, n))
                .collect::<Result<Vec<_>>>()?;
            let dominated = errors.iter().zip(&f.curve).all(|(e, c)| e <= c);
            let nonincreasing = f.curve.windows(2).all(|w| w[1] <= w[0]);
            let value = json!({
                "terms": f.alpha.prefix().len(),
                "integral": s(&l1::integral(&l, &f.alpha)?),
                "curve": f.curve,
                "truncation_error": errors,
                "dominated": dominated,
                "nonincreasing": nonincreasing,
            });
            Ok(Out { value, verdicts: vec![dominated, nonincreasing] })
        }
        Directive::Psi { rep, n } => {
            let (sp, a) = env.l1(rep)?;
            let l = base(sp);
            let n = u32::try_from(*n).map_err(|_| Error::InvalidArgument(format!("n = {n} is too large")))?;
            let p = l1::psi(&l, a, n)?;
            let series = l1::abs_series(&l, &p)?;
            let bound = Scalar::pow2_neg(n) + l1::l1_norm(&l, a)?;
            let within = series <= bound;
            let value = json!({
                "rep": rep_json(&p),
                "abs_series": s(&series),
                "bound": s(&bound),
                "within_bound": within,
                "same_function": l1::l1_eq(&l, &p, a)?,
            });
            Ok(Out { value, verdicts: vec![within] })
        }
        Directive::Density { rep, eps } => {
            let (sp, a) = env.l1(rep)?;
            let w = l1::density_witness(&base(sp), a, eps)?;
            let below = w.bound < *eps;
            let value = json!({ "n": w.n, "element": w.element, "bound": s(&w.bound), "below_eps": below });
            Ok(Out { value, verdicts: vec![below] })
        }
        Directive::Cauchy { reps, modulus } => {
            let (sp, reps) = env.reps(reps)?;
            let l = base(&sp);
            let modulus: Vec<usize> = modulus.iter().map(|&m| m as usize).collect();
            let c = l1::cauchy_limit(&l, &reps, &modulus)?;
            plain(json!({
                "mode": c.mode,
                "integral": s(&l1::integral(&l, &c.limit)?),
                "norm": s(&l1::l1_norm(&l, &c.limit)?),
                "checked": c.checked,
                "limit": rep_json(&c.limit),
            }))
        }
        Directive::Pair(n) => {
            let (p, q) = pair(*n)?;
            plain(json!([p, q]))
        }
        Directive::Unpair(p, q) => plain(json!(unpair(*p, *q)?)),
        Directive::Compare { a, lo, hi } => {
            let d = match cotransitive_compare(a, lo, hi)? {
                Decision::BelowHi => "below_hi",
                Decision::AboveLo => "above_lo",
            };
            plain(json!(d))
        }
        Directive::SumTail { partials, tail, n } => {
            let iv = sum_with_tail(partials, tail, *n as usize)?;
            plain(json!({ "lo": s(iv.lo()), "hi": s(iv.hi()) }))
        }
        Directive::Cc { op, carrier, args } => {
            let c = env.carrier(carrier)?;
            let cs = args
                .iter()
                .map(|a| ComplementedSubset::from_names(c, &names(&a.one), &names(&a.zero)))
                .collect::<Result<Vec<_>>>()?;
            match op {
                CcOp::Join => plain(cs_json(&cs[0].join(&cs[1])?)),
                CcOp::Meet => plain(cs_json(&cs[0].meet(&cs[1])?)),
                CcOp::Minus => plain(cs_json(&cs[0].minus(&cs[1])?)),
                CcOp::Not => plain(cs_json(&cs[0].not())),
                CcOp::Chi => plain(bool_fn_json(&cs[0].chi())),
                CcOp::Leq => plain(json!(cs[0].is_subset_of(&cs[1]))),
            }
        }
        Directive::Bp { op, carrier, args } => {
            let c = env.carrier(carrier)?;
            let fs = args.iter().map(|f| bool_fn(c, f)).collect::<Result<Vec<_>>>()?;
            let bop = match op {
                BpOp::Join => BoolOp::Join,
                BpOp::Meet => BoolOp::Meet,
                BpOp::Not => BoolOp::Not,
                BpOp::Minus => BoolOp::Minus,
                BpOp::Delta => return plain(cs_json(&fs[0].delta())),
            };
            plain(bool_fn_json(&BoolPartialFn::apply(bop, &fs[0], fs.get(1))?))
        }
        Directive::Rp { op, carrier, args } => {
            let c = env.carrier(carrier)?;
            let fs = args.iter().map(|f| real_fn(c, f)).collect::<Result<Vec<_>>>()?;
            let rop = match op {
                RpOp::Add => RealOp::Add,
                RpOp::Mul => RealOp::Mul,
                RpOp::Min => RealOp::Min,
                RpOp::Max => RealOp::Max,
                RpOp::Abs => RealOp::Abs,
                RpOp::Scale(a) => RealOp::Scale(a.clone()),
                RpOp::MinConst(a) => RealOp::MinConst(a.clone()),
            };
            let r = RealPartialFn::apply(&rop, &fs[0], fs.get(1))?;
            plain(json!({ "values": r, "strongly_extensional": r.is_strongly_extensional() }))
        }
        Directive::Family { carrier, members } => {
            let c = env.carrier(carrier)?;
            let members = members
                .iter()
                .enumerate()
                .map(|(k, m)| Ok((k.to_string(), Subset::new(c, &names(m))?)))
                .collect::<Result<Vec<_>>>()?;
            let fam = SubsetFamily::new(c, members)?;
            plain(json!({ "union": fam.union(), "intersection": fam.intersection()? }))
        }
    }
}

fn declare(env: &mut Env, kind: &StmtKind, cfg: &RunConfig) -> Result<Out> {
    match kind {
        StmtKind::Carrier { name, elements } => {
            let c = Carrier::new(elements.iter().map(|e| e.name.clone()))?;
            let v = json!({ "elements": c.elements() });
            env.carriers.insert(name.name.clone(), c);
            Ok(Out::plain(v))
        }
        StmtKind::Space { name, def } => {
            let sp = build_space(env, def, cfg)?;
            let v = space_json(&sp);
            env.spaces.insert(name.name.clone(), Arc::new(sp));
            Ok(Out::plain(v))
        }
        StmtKind::Simple { name, value } => {
            let v = env.simple(value)?;
            let out = json!({ "integral": s(&v.integral()) });
            env.simples.insert(name.name.clone(), v);
            Ok(Out::plain(out))
        }
        StmtKind::L1 { name, space, def } => {
            let sp = env.space(space)?.clone();
            let rep = match def {
                L1Def::Finite(ts) => {
                    L1Rep::finite(ts.iter().map(|t| env.terms(&sp, t)).collect::<Result<Vec<_>>>()?)?
                }
                L1Def::Geometric { prefix, first, ratio } => L1Rep::geometric(
                    prefix.iter().map(|t| env.terms(&sp, t)).collect::<Result<Vec<_>>>()?,
                    env.terms(&sp, first)?,
                    ratio.clone(),
                )?,
            };
            let l = base(&sp);
            let out = json!({
                "integral": s(&l1::integral(&l, &rep)?),
                "norm": s(&l1::l1_norm(&l, &rep)?),
            });
            env.l1s.insert(name.name.clone(), (sp, rep));
            Ok(Out::plain(out))
        }
        StmtKind::Directive(d) => directive(env, d, cfg),
    }
}

/// Runs every statement in order. A failing declaration is reported and
/// later statements that use it report an error of their own.
pub fn run(file: &Program, cfg: &RunConfig) -> Report {
    let mut env = Env::default();
    let mut results = Vec::new();
    let mut summary = Summary::default();
    for stmt in &file.stmts {
        if let StmtKind::Directive(d) = &stmt.kind {
            if cfg.mode == Mode::Check && !d.is_check() {
                continue;
            }
        }
        let directive = stmt.kind.to_string();
        let line = stmt.pos.line;
        let entry = match declare(&mut env, &stmt.kind, cfg) {
            Ok(out) => {
                let holds = out.verdicts.iter().filter(|v| **v).count();
                summary.holds += holds;
                summary.fails += out.verdicts.len() - holds;
                Entry { directive, line, result: Some(out.value), error: None }
            }
            Err(e) => {
                summary.errors += 1;
                Entry { directive, line, result: None, error: Some(e.to_string()) }
            }
        };
        results.push(entry);
    }
    summary.entries = results.len();
    Report { schema: SCHEMA, results, summary }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    const HEAD: &str = "carrier X = {p, q, r};\nspace D = dirac(X, p);\n";

    fn eval(body: &str) -> Report {
        run(&parse(&format!("{HEAD}{body}")).unwrap(), &RunConfig::default())
    }

    fn last(r: &Report) -> &Value {
        r.results.last().unwrap().result.as_ref().unwrap()
    }

    #[test]
    fn integrate_example() {
        let r = eval("integrate D [(2, [1,1,0]), (3, [0,1,1])];");
        assert_eq!(last(&r), &json!("2/1"));
        assert!(r.ok());
    }

    #[test]
    fn phin_example() {
        let r = eval("phin D 1 [(1/4, [1,1,0])];");
        assert_eq!(last(&r)["measure"], json!("0/1"));
        assert!(r.ok());
    }

    #[test]
    fn pms_block_holds() {
        let r = eval("check pms D;");
        let v = last(&r)["verdicts"].as_array().unwrap();
        assert_eq!(v.len(), 4);
        assert!(r.ok());
    }

    #[test]
    fn perturbed_space_fails_and_errors_count() {
        let r = eval("space P = perturb(D, [0,1,0], 1/3);\ncheck pms P;\nmu D [1,_,_];");
        assert_eq!(r.summary.errors, 1);
        assert!(r.summary.fails >= 1);
        assert!(!r.ok());
    }

    #[test]
    fn check_mode_skips_evaluation() {
        let f = parse(&format!("{HEAD}integrate D [(1, [1,1,1])];\ncheck pms D;")).unwrap();
        let r = run(&f, &RunConfig { mode: Mode::Check, ..Default::default() });
        assert_eq!(r.results.len(), 3);
    }

    #[test]
    fn deterministic_output() {
        let text = format!("{HEAD}check pis D;\ncheck pms4 D;");
        let f = parse(&text).unwrap();
        let cfg = RunConfig::default();
        assert_eq!(run(&f, &cfg).to_json(), run(&f, &cfg).to_json());
    }
}
