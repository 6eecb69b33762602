//! The nine acceptance criteria. Every library answer is compared with an
//! oracle computed here, pointwise on the carrier: three-valued membership
//! for complemented subsets and `∫v = Σₓ w(x)·v(x)` for integrals over the
//! Dirac and counting spaces (whose indices are all total). Each criterion
//! prints one PASS/FAIL line.

use std::fs;
use std::io::Write;
use std::panic;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use cmeasure::dsl::{parse, run, RunConfig};
use cmeasure::l1::{self, L1Rep, L1Space, Tail};
use cmeasure::laws::{chi_delta_suite, lattice_suite};
use cmeasure::preint::{
    check_pis_all, default_scalars, pis5_battery, pis5_case, pis7_threshold, pis8_constant, simple_battery,
    PreIntegrationSpace, SimpleSpace, DEFAULT_MAX_TERMS,
};
use cmeasure::premeasure::{
    check_pms1, check_pms2_star, check_pms3, check_pms4, pms4_battery, PeriodicSeq, PreMeasureSpace,
    DEFAULT_MAX_CARRIER,
};
use cmeasure::simple::SimpleTerms;
use cmeasure::{BoolPartialFn, Carrier, ComplementedSubset, RealPartialFn, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Vals = Vec<Option<Scalar>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T>(r: cmeasure::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(s: &str) -> Scalar {
    s.parse().unwrap()
}

fn carrier() -> Carrier {
    Carrier::new(["p", "q", "r"]).unwrap()
}

// ---- spaces and their weights ----

struct Space {
    name: String,
    s: Arc<PreMeasureSpace>,
    w: Vec<Scalar>,
}

fn dirac() -> Space {
    let s = PreMeasureSpace::mk_dirac(&carrier(), "p", DEFAULT_MAX_CARRIER).unwrap();
    Space { name: "dirac(p)".into(), s: Arc::new(s), w: vec![Scalar::one(), Scalar::zero(), Scalar::zero()] }
}

fn counting(seed: u64) -> Space {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<Scalar> = (0..3)
        .map(|_| Scalar::ratio(rng.random_range(1..=9), rng.random_range(1..=9)).unwrap())
        .collect();
    let c = carrier();
    let named: Vec<(&str, Scalar)> = c.elements().iter().map(String::as_str).zip(w.iter().cloned()).collect();
    let s = PreMeasureSpace::mk_counting(&c, &named, DEFAULT_MAX_CARRIER).unwrap();
    let name = format!("counting{w:?}");
    Space { name, s: Arc::new(s), w }
}

fn mask_measure(w: &[Scalar], ones: u64) -> Scalar {
    (0..w.len()).filter(|x| ones >> x & 1 == 1).map(|x| &w[x]).sum()
}

// ---- pointwise evaluation ----

fn ev_simple(v: &SimpleTerms) -> Vals {
    let s = v.space();
    (0..s.carrier().len())
        .map(|x| {
            let mut acc = Scalar::zero();
            for (a, i) in v.terms() {
                let lam = s.lambda(*i);
                if lam.one_bits() >> x & 1 == 1 {
                    acc += a;
                } else if lam.zero_bits() >> x & 1 == 0 {
                    return None;
                }
            }
            Some(acc)
        })
        .collect()
}

fn zip_with(f: &Vals, g: &Vals, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Vals {
    f.iter()
        .zip(g)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => Some(op(a, b)),
            _ => None,
        })
        .collect()
}

fn map(f: &Vals, op: impl Fn(&Scalar) -> Scalar) -> Vals {
    f.iter().map(|a| a.as_ref().map(&op)).collect()
}

fn plus(f: &Vals, g: &Vals) -> Vals {
    zip_with(f, g, |a, b| a + b)
}

fn minus(f: &Vals, g: &Vals) -> Vals {
    zip_with(f, g, |a, b| a - b)
}

fn times(c: &Scalar, f: &Vals) -> Vals {
    map(f, |a| c * a)
}

fn smin(a: &Scalar, b: &Scalar) -> Scalar {
    if a < b { a.clone() } else { b.clone() }
}

fn ev_rep(n: usize, a: &L1Rep<SimpleTerms>) -> Vals {
    let mut acc: Vals = vec![Some(Scalar::zero()); n];
    for t in a.prefix() {
        acc = plus(&acc, &ev_simple(t));
    }
    match a.tail() {
        Tail::Zero => acc,
        Tail::Geometric { first, ratio } => {
            let c = (Scalar::one() - ratio).recip().unwrap();
            plus(&acc, &times(&c, &ev_simple(first)))
        }
        Tail::Interleave(x, y) => plus(&plus(&acc, &ev_rep(n, x)), &ev_rep(n, y)),
    }
}

/// Term `k` of a finite or geometric representation.
fn rep_term(a: &L1Rep<SimpleTerms>, k: usize) -> Vals {
    let p = a.prefix().len();
    if k < p {
        return ev_simple(&a.prefix()[k]);
    }
    match a.tail() {
        Tail::Zero => vec![Some(Scalar::zero()); a.prefix()[0].space().carrier().len()],
        Tail::Geometric { first, ratio } => times(&ratio.pow((k - p) as u32), &ev_simple(first)),
        Tail::Interleave(..) => panic!("interleaved terms are not needed here"),
    }
}

fn integrate(w: &[Scalar], f: &Vals) -> Result<Scalar, String> {
    w.iter()
        .zip(f)
        .map(|(w, v)| v.as_ref().map(|v| w * v).ok_or_else(|| "integrand undefined somewhere".to_string()))
        .sum::<Result<Scalar, _>>()
}

fn norm(w: &[Scalar], f: &Vals) -> Result<Scalar, String> {
    integrate(w, &map(f, Scalar::abs))
}

/// `Σₖ ∫|αₖ|`, summing the geometric tail in closed form.
fn abs_series(w: &[Scalar], n: usize, a: &L1Rep<SimpleTerms>) -> Result<Scalar, String> {
    let mut total = Scalar::zero();
    for t in a.prefix() {
        total += &norm(w, &ev_simple(t))?;
    }
    match a.tail() {
        Tail::Zero => {}
        Tail::Geometric { first, ratio } => {
            let c = (Scalar::one() - ratio.abs()).recip().unwrap();
            total += &(c * norm(w, &ev_simple(first))?);
        }
        Tail::Interleave(x, y) => {
            total += &abs_series(w, n, x)?;
            total += &abs_series(w, n, y)?;
        }
    }
    Ok(total)
}

fn vals_of(f: &RealPartialFn, n: usize) -> Vals {
    (0..n).map(|x| f.value(x).cloned()).collect()
}

// ---- criterion 1: lattice of complemented subsets ----

type Tri = [Option<bool>; 3];

fn tri_all() -> Vec<Tri> {
    let cell = [None, Some(true), Some(false)];
    let mut out = Vec::new();
    for a in cell {
        for b in cell {
            for c in cell {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn tri2(a: &Tri, b: &Tri, op: fn(bool, bool) -> bool) -> Tri {
    std::array::from_fn(|x| match (a[x], b[x]) {
        (Some(u), Some(v)) => Some(op(u, v)),
        _ => None,
    })
}

fn tj(a: &Tri, b: &Tri) -> Tri {
    tri2(a, b, |u, v| u || v)
}

fn tm(a: &Tri, b: &Tri) -> Tri {
    tri2(a, b, |u, v| u && v)
}

fn tn(a: &Tri) -> Tri {
    a.map(|c| c.map(|u| !u))
}

fn of_cs(a: &ComplementedSubset) -> Tri {
    std::array::from_fn(|x| {
        if a.one_bits() >> x & 1 == 1 {
            Some(true)
        } else if a.zero_bits() >> x & 1 == 1 {
            Some(false)
        } else {
            None
        }
    })
}

fn of_fn(f: &BoolPartialFn) -> Tri {
    std::array::from_fn(|x| f.value(x))
}

fn criterion_1() -> Outcome {
    let c = carrier();
    let all = tri_all();
    let lib_all = ComplementedSubset::enumerate(&c);
    ensure!(lib_all.len() == 27, "enumerate gave {} subsets", lib_all.len());
    let mut seen: Vec<Tri> = lib_all.iter().map(of_cs).collect();
    seen.sort();
    seen.dedup();
    ensure!(seen.len() == 27, "enumerate repeats a subset");
    let cs = |t: &Tri| ComplementedSubset::from_pattern(&c, t).unwrap();
    for a in &all {
        ensure!(of_cs(&cs(a).not()) == tn(a), "not {a:?}");
        for b in &all {
            let (x, y) = (cs(a), cs(b));
            ensure!(of_cs(&lib(x.join(&y))?) == tj(a, b), "join {a:?} {b:?}");
            ensure!(of_cs(&lib(x.meet(&y))?) == tm(a, b), "meet {a:?} {b:?}");
            ensure!(of_cs(&lib(x.minus(&y))?) == tm(a, &tn(b)), "minus {a:?} {b:?}");
        }
    }
    // The laws, on the oracle operations the library was just shown to match.
    for a in &all {
        ensure!(tj(a, a) == *a && tm(a, a) == *a, "idempotence at {a:?}");
        ensure!(tn(&tn(a)) == *a, "double negation at {a:?}");
        for b in &all {
            ensure!(tj(a, b) == tj(b, a) && tm(a, b) == tm(b, a), "commutativity at {a:?} {b:?}");
            ensure!(tn(&tj(a, b)) == tm(&tn(a), &tn(b)), "de morgan (join) at {a:?} {b:?}");
            ensure!(tn(&tm(a, b)) == tj(&tn(a), &tn(b)), "de morgan (meet) at {a:?} {b:?}");
            for d in &all {
                ensure!(tj(&tj(a, b), d) == tj(a, &tj(b, d)), "join associativity");
                ensure!(tm(&tm(a, b), d) == tm(a, &tm(b, d)), "meet associativity");
                ensure!(tm(a, &tj(b, d)) == tj(&tm(a, b), &tm(a, d)), "meet distributivity");
                ensure!(tj(a, &tm(b, d)) == tm(&tj(a, b), &tj(a, d)), "join distributivity");
            }
        }
    }
    let absorption = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a, b)))
        .find(|(a, b)| tj(&tm(a, b), a) != **a)
        .ok_or("no absorption counterexample")?;
    let (a, b) = (cs(absorption.0), cs(absorption.1));
    ensure!(lib(lib(a.meet(&b))?.join(&a))? != a, "library absorbs at {absorption:?}");
    let suite = lattice_suite(&c);
    ensure!(suite.len() == 12, "lattice suite has {} entries", suite.len());
    if let Some(r) = suite.iter().find(|r| !r.is_holds()) {
        return Err(format!("lattice suite: {} fails", r.axiom));
    }
    Ok(())
}

// ---- criterion 2: χ and δ ----

fn criterion_2() -> Outcome {
    let c = carrier();
    let fns = BoolPartialFn::enumerate(&c);
    ensure!(fns.len() == 27, "{} boolean partial functions", fns.len());
    for a in ComplementedSubset::enumerate(&c) {
        ensure!(of_fn(&a.chi()) == of_cs(&a), "chi of {}", a.pattern());
        ensure!(a.chi().delta() == a, "delta(chi) != id at {}", a.pattern());
        ensure!(a.not().chi() == a.chi().not(), "chi of the complement at {}", a.pattern());
        ensure!(of_fn(&a.not().chi()) == tn(&of_cs(&a)), "oracle complement at {}", a.pattern());
    }
    for f in &fns {
        ensure!(of_cs(&f.delta()) == of_fn(f), "delta of {f:?}");
        ensure!(f.delta().chi() == *f, "chi(delta) != id at {f:?}");
        ensure!(f.not().delta() == f.delta().not(), "delta of the negation at {f:?}");
        ensure!(of_cs(&f.not().delta()) == tn(&of_fn(f)), "oracle negation at {f:?}");
    }
    if let Some(r) = chi_delta_suite(&c).iter().find(|r| !r.is_holds()) {
        return Err(format!("chi/delta suite: {} fails", r.axiom));
    }
    Ok(())
}

// ---- criterion 3: Dirac and counting pre-measures ----

fn pms_instance(sp: &Space) -> Outcome {
    let s = &sp.s;
    let full = s.carrier().full_mask();
    let idx = |ones: u64| s.index_of_total(ones).ok_or(format!("no index for {ones:b}"));
    ensure!(s.len() == 8, "{} indices", s.len());
    for f in 0..8u64 {
        let i = idx(f)?;
        ensure!(*s.mu(i) == mask_measure(&sp.w, f), "mu at {f:03b}");
        for g in 0..8u64 {
            let j = idx(g)?;
            ensure!(s.join(i, j) == idx(f | g)?, "join {f:03b} {g:03b}");
            ensure!(s.meet(i, j) == idx(f & g)?, "meet {f:03b} {g:03b}");
            ensure!(s.diff(i, j) == idx(f & !g & full)?, "diff {f:03b} {g:03b}");
            let modular = s.mu(i) + s.mu(j) == s.mu(s.join(i, j)) + s.mu(s.meet(i, j));
            ensure!(modular, "modularity at {f:03b} {g:03b}");
            ensure!(*s.mu(i) == s.mu(s.meet(i, j)) + s.mu(s.diff(i, j)), "additivity at {f:03b} {g:03b}");
        }
    }
    for r in [check_pms1(s), check_pms2_star(s), check_pms3(s)] {
        ensure!(r.is_holds(), "{} fails: {:?}", r.axiom, r.counterexample);
    }
    ensure!(check_pms1(s).cases == 64, "PMS1 checked {} pairs", check_pms1(s).cases);
    ensure!(check_pms2_star(s).cases == 64, "PMS2* checked {} pairs", check_pms2_star(s).cases);
    let top = idx(full)?;
    let (r, cases) = lib(check_pms4(s, &[PeriodicSeq::constant(top)], 64))?;
    ensure!(r.is_holds(), "PMS4 fails on the constant sequence");
    ensure!(cases[0].limit == mask_measure(&sp.w, full), "limit {}", cases[0].limit);
    let witness = cases[0].witness.clone().ok_or("no PMS4 witness")?;
    if sp.name.starts_with("dirac") {
        ensure!(witness == "p", "Dirac witness is {witness}, not the point mass");
    } else {
        ensure!(s.carrier().position(&witness).is_ok(), "witness {witness} off the carrier");
    }
    // Every battery sequence against the running meet of its values.
    let seqs = pms4_battery(s, 16, 3);
    let (r, cases) = lib(check_pms4(s, &seqs, 64))?;
    ensure!(r.is_holds(), "PMS4 fails on the battery");
    for (seq, case) in seqs.iter().zip(&cases) {
        let common = seq.values().fold(full, |acc, i| acc & s.lambda(i).one_bits());
        ensure!(case.limit == mask_measure(&sp.w, common), "limit of {seq:?}");
        match &case.witness {
            Some(x) => ensure!(common >> lib(s.carrier().position(x))? & 1 == 1, "witness {x} not in every term"),
            None => ensure!(!case.limit.is_positive(), "positive limit without witness"),
        }
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    pms_instance(&dirac())?;
    pms_instance(&counting(11))
}

// ---- criterion 4: disjoint representations ----

fn criterion_4() -> Outcome {
    let sp = dirac();
    let coeffs = [q("-1"), q("1/2"), q("2")];
    let atoms: Vec<(Scalar, usize)> = coeffs.iter().flat_map(|a| (0..8).map(move |i| (a.clone(), i))).collect();
    let mut lists: Vec<Vec<(Scalar, usize)>> = atoms.iter().map(|t| vec![t.clone()]).collect();
    let mut frontier = lists.clone();
    for _ in 1..3 {
        frontier = frontier
            .iter()
            .flat_map(|l| atoms.iter().map(move |t| [l.clone(), vec![t.clone()]].concat()))
            .collect();
        lists.extend(frontier.iter().cloned());
    }
    ensure!(lists.len() == 24 + 576 + 13824, "{} cases", lists.len());
    for terms in lists {
        let v = lib(SimpleTerms::new(&sp.s, terms))?;
        let d = lib(v.disjrep())?;
        let f = ev_simple(&v);
        ensure!(ev_simple(&d) == f, "{v:?}: disjrep changes the function");
        ensure!(lib(d.simple_eq(&v))?, "{v:?}: simple_eq rejects its disjrep");
        let ones: Vec<u64> = d.terms().iter().map(|(_, i)| sp.s.lambda(*i).one_bits()).collect();
        for (k, a) in ones.iter().enumerate() {
            ensure!(ones[k + 1..].iter().all(|b| a & b == 0), "{v:?}: pieces overlap");
        }
        let want = integrate(&sp.w, &f)?;
        ensure!(d.integral() == want && v.integral() == want, "{v:?}: integral differs from {want}");
    }
    Ok(())
}

// ---- criterion 5: φ_N ----

fn phi_instance(sp: &Space) -> Outcome {
    let s = &sp.s;
    let coeffs = ["0", "1/8", "1/4", "1/2", "1", "3"].map(q);
    let ones: Vec<u64> = (0..8).collect();
    let mut index_lists: Vec<Vec<u64>> = Vec::new();
    for len in 1..=3 {
        let mut acc: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..len {
            acc = acc
                .iter()
                .flat_map(|l| {
                    ones.iter()
                        .filter(|&&f| l.iter().all(|g| f & g == 0))
                        .map(move |&f| [l.clone(), vec![f]].concat())
                })
                .collect();
        }
        index_lists.extend(acc);
    }
    let mut cases = 0;
    for masks in &index_lists {
        let mut coeff_lists: Vec<Vec<Scalar>> = vec![vec![]];
        for _ in masks {
            coeff_lists = coeff_lists
                .iter()
                .flat_map(|l| coeffs.iter().map(move |a| [l.clone(), vec![a.clone()]].concat()))
                .collect();
        }
        for cl in coeff_lists {
            let terms = cl.into_iter().zip(masks).map(|(a, f)| (a, s.index_of_total(*f).unwrap())).collect();
            let v = lib(SimpleTerms::new(s, terms))?;
            let f = ev_simple(&v);
            let integral = integrate(&sp.w, &f)?;
            let dom0: u64 = v.terms().iter().fold(s.carrier().full_mask(), |acc, (_, i)| acc & s.lambda(*i).dom_bits());
            for n in [1u64, 2, 4] {
                cases += 1;
                let phi = s.lambda(lib(v.phi_n(n))?);
                let inv = Scalar::ratio(1, n as i64).unwrap();
                ensure!(phi.dom_bits() & !dom0 == 0, "{v:?} N={n}: (i) domain escapes");
                for x in 0..3 {
                    if phi.zero_bits() >> x & 1 == 1 {
                        let fx = f[x].as_ref().ok_or("undefined on the zero part")?;
                        ensure!(*fx < inv, "{v:?} N={n}: (ii) value {fx} at {x}");
                    }
                }
                let measure = mask_measure(&sp.w, phi.one_bits());
                let bound = Scalar::from_int(2 * n as i64) * &integral;
                ensure!(measure <= bound, "{v:?} N={n}: (iii) {measure} > {bound}");
                let rep = lib(v.phi_n_report(n))?;
                ensure!(rep.all_hold() && rep.measure == measure && rep.bound == bound, "{v:?} N={n}: report {rep:?}");
            }
        }
    }
    ensure!(cases > 40_000, "only {cases} cases");
    Ok(())
}

fn criterion_5() -> Outcome {
    phi_instance(&dirac())?;
    phi_instance(&counting(5))
}

// ---- criteria 6 and 8: the eight PIS axioms ----

fn pis_instance<L>(l: &L, battery: &[L::Elem], w: &[Scalar], val: &dyn Fn(&L::Elem) -> Vals) -> Outcome
where
    L: PreIntegrationSpace,
{
    let n = w.len();
    let report = lib(check_pis_all(l, battery, &default_scalars()))?;
    for axiom in ["PIS1", "PIS2", "PIS3", "PIS4", "PIS5", "PIS6", "PIS7", "PIS8"] {
        let r = report.get(axiom).ok_or(format!("{axiom} missing"))?;
        ensure!(r.is_holds(), "{axiom} fails: {:?}", r.counterexample);
    }
    ensure!(report.all_hold(), "a derived lemma fails");
    let ints: Vec<Scalar> = battery.iter().map(|v| integrate(w, &val(v))).collect::<Result<_, _>>()?;
    for (v, want) in battery.iter().zip(&ints) {
        ensure!(vals_of(&lib(l.partial_fn(v))?, n) == val(v), "partial function of {}", l.describe(v));
        ensure!(lib(l.integral(v))? == *want, "integral of {}", l.describe(v));
    }
    // PIS1, PIS2: linear combinations.
    let head = &battery[..battery.len().min(8)];
    for (a, ia) in head.iter().zip(&ints) {
        for (b, ib) in head.iter().zip(&ints) {
            for c in [q("-2"), q("1/3")] {
                let e = lib(l.add(&lib(l.scale(&c, a))?, b))?;
                ensure!(val(&e) == plus(&times(&c, &val(a)), &val(b)), "{c}·a + b pointwise");
                ensure!(lib(l.integral(&e))? == &c * ia + ib, "{c}·a + b integral");
                ensure!(integrate(w, &val(&e))? == &c * ia + ib, "{c}·a + b oracle integral");
            }
        }
    }
    for v in battery {
        let f = val(v);
        // PIS3, PIS4.
        let abs = lib(l.abs(v))?;
        ensure!(val(&abs) == map(&f, Scalar::abs), "|{}|", l.describe(v));
        ensure!(lib(l.integral(&abs))? == norm(w, &f)?, "∫|{}|", l.describe(v));
        let m1 = lib(l.min_one(v))?;
        ensure!(val(&m1) == map(&f, |a| smin(a, &Scalar::one())), "min1 of {}", l.describe(v));
        ensure!(lib(l.integral(&m1))? == integrate(w, &val(&m1))?, "∫min1");
        // PIS7: exact stabilization at n* = ⌈max(sup|f|, 1)⌉.
        let sup = f.iter().flatten().map(Scalar::abs).fold(Scalar::one(), |acc, a| if a > acc { a } else { acc });
        let mut star = 1u64;
        while Scalar::from_int(star as i64) < sup {
            star += 1;
        }
        ensure!(lib(pis7_threshold(l, v))? == star, "n* of {}", l.describe(v));
        for k in 1..=star + 2 {
            let c = Scalar::from_int(k as i64);
            let e = lib(l.min_const(&c, v))?;
            let want = integrate(w, &map(&f, |a| smin(a, &c)))?;
            ensure!(lib(l.integral(&e))? == want, "∫(v∧{k})");
            if k >= star {
                ensure!(want == integrate(w, &f)?, "v∧{k} has not stabilized");
            }
        }
        // PIS8: ∫(|v|∧1/k) ≤ C/k with C the measure of the support.
        let support_c: Scalar = w.iter().zip(&f).filter(|(_, a)| a.as_ref().is_some_and(|a| !a.is_zero())).map(|(w, _)| w).sum();
        let (m, c) = lib(pis8_constant(l, v))?;
        ensure!(c == support_c, "C = {c}, oracle {support_c}");
        for k in 1..=12u64 {
            let inv = Scalar::ratio(1, k as i64).unwrap();
            let e = lib(l.min_const(&inv, &abs))?;
            let want = integrate(w, &map(&f, |a| smin(&a.abs(), &inv)))?;
            ensure!(lib(l.integral(&e))? == want, "∫(|v|∧1/{k})");
            ensure!(want <= &c * &inv, "∫(|v|∧1/{k}) = {want} above C/{k}");
            if k >= m {
                ensure!(want == &c * &inv, "C/{k} not attained past m = {m}");
            }
        }
    }
    // PIS5 with brute-force witnesses.
    for (i, kappa) in lib(pis5_battery(l, battery))? {
        let fi = val(&i);
        let fk: Vec<Vals> = kappa.iter().map(val).collect();
        let total: Scalar = fk.iter().map(|f| integrate(w, f)).collect::<Result<Vec<_>, _>>()?.into_iter().sum();
        let hypothesis = total < integrate(w, &fi)?;
        let case = lib(pis5_case(l, &i, &kappa))?;
        ensure!(case.hypothesis == hypothesis, "PIS5 hypothesis for {}", l.describe(&i));
        let good = |x: usize| -> bool {
            let sum = fk.iter().try_fold(Scalar::zero(), |acc, f| f[x].as_ref().map(|v| acc + v));
            matches!((sum, &fi[x]), (Some(s), Some(v)) if s < *v)
        };
        if hypothesis {
            ensure!((0..n).any(good), "PIS5 has no witness at all");
            let x = case.witness.ok_or("PIS5 witness missing")?;
            ensure!(good(lib(l.carrier().position(&x))?), "PIS5 witness {x} is wrong");
        }
    }
    // PIS6.
    ensure!(ints.iter().any(|v| *v == Scalar::one()), "no element of integral 1");
    Ok(())
}

fn simple_instance(sp: &Space) -> Outcome {
    let l = SimpleSpace::new(sp.s.clone(), DEFAULT_MAX_TERMS);
    let battery = lib(simple_battery(&sp.s, 12, 7))?;
    pis_instance(&l, &battery, &sp.w, &ev_simple)
}

fn criterion_6() -> Outcome {
    simple_instance(&dirac())?;
    simple_instance(&counting(23))
}

fn l1_instance(sp: &Space) -> Outcome {
    let base = SimpleSpace::new(sp.s.clone(), DEFAULT_MAX_TERMS);
    let battery = lib(l1::finite_battery(&base, &lib(simple_battery(&sp.s, 3, 7))?))?;
    let l = L1Space::new(base);
    pis_instance(&l, &battery, &sp.w, &|a| ev_rep(3, a))
}

fn criterion_8() -> Outcome {
    l1_instance(&dirac())?;
    l1_instance(&counting(29))
}

// ---- criterion 7: the L¹ layer ----

fn random_simple(s: &Arc<PreMeasureSpace>, rng: &mut ChaCha8Rng) -> SimpleTerms {
    let coeffs = ["-3", "-1", "-1/2", "1/3", "1/2", "1", "2", "7/4"].map(q);
    let n = rng.random_range(1..=3);
    let terms = (0..n).map(|_| (coeffs[rng.random_range(0..coeffs.len())].clone(), rng.random_range(0..s.len()))).collect();
    SimpleTerms::new(s, terms).unwrap()
}

fn finite_reps(s: &Arc<PreMeasureSpace>, count: usize, seed: u64) -> Vec<L1Rep<SimpleTerms>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=5);
            L1Rep::finite((0..k).map(|_| random_simple(s, &mut rng)).collect()).unwrap()
        })
        .collect()
}

fn geometric_reps(s: &Arc<PreMeasureSpace>, count: usize, seed: u64) -> Vec<L1Rep<SimpleTerms>> {
    let ratios = ["1/2", "-1/3", "3/4", "1/5"].map(q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(0..=2);
            let prefix = (0..k).map(|_| random_simple(s, &mut rng)).collect();
            let r = ratios[rng.random_range(0..ratios.len())].clone();
            L1Rep::geometric(prefix, random_simple(s, &mut rng), r).unwrap()
        })
        .collect()
}

fn l1_layer(sp: &Space) -> Outcome {
    let l = SimpleSpace::new(sp.s.clone(), DEFAULT_MAX_TERMS);
    let w = &sp.w;
    let finite = finite_reps(&sp.s, 100, 17);
    let geometric = geometric_reps(&sp.s, 20, 19);
    let norm_of = |a: &L1Rep<SimpleTerms>| norm(w, &ev_rep(3, a));

    // ψ bound, and ψ(α, n) represents the same function.
    for a in finite.iter().chain(&geometric) {
        let na = norm_of(a)?;
        for n in [0u32, 1, 3, 6] {
            let p = lib(l1::psi(&l, a, n))?;
            ensure!(ev_rep(3, &p) == ev_rep(3, a), "psi({a:?}, {n}) changes the function");
            let lhs = abs_series(w, 3, &p)?;
            ensure!(lhs <= Scalar::pow2_neg(n) + &na, "psi bound {lhs} > 2^-{n} + {na} for {a:?}");
        }
    }

    // Flattening: the curve dominates the exact truncation error and decreases.
    for k in 0..25 {
        let gammas = &finite[4 * k..4 * k + 1 + k % 4];
        let fl = lib(l1::lebesgue_flatten(&l, gammas))?;
        let sum = gammas.iter().fold(vec![Some(Scalar::zero()); 3], |acc, g| plus(&acc, &ev_rep(3, g)));
        ensure!(ev_rep(3, &fl.alpha) == sum, "flattened sum differs pointwise");
        ensure!(fl.curve.len() == gammas.len() + 1, "curve length");
        ensure!(fl.curve.windows(2).all(|c| c[0] >= c[1]), "curve increases: {:?}", fl.curve);
        ensure!(fl.curve.last().is_some_and(Scalar::is_zero), "curve does not end at 0");
        let mut partial = vec![Some(Scalar::zero()); 3];
        for n in 0..=gammas.len() {
            if n > 0 {
                partial = plus(&partial, &ev_rep(3, &gammas[n - 1]));
            }
            let err = norm(w, &minus(&ev_rep(3, &fl.alpha), &partial))?;
            ensure!(lib(l1::truncation_error(&l, &fl.alpha, gammas, n))? == err, "truncation error at {n}");
            ensure!(err <= fl.curve[n], "error {err} above curve {} at {n}", fl.curve[n]);
        }
    }

    // Truncation error of a finite representation vanishes at its support size.
    for a in &finite {
        let k = a.support_len().ok_or("finite rep without support length")?;
        let embedded: Vec<L1Rep<SimpleTerms>> = a.prefix().iter().cloned().map(L1Rep::embed).collect();
        let mut partial = vec![Some(Scalar::zero()); 3];
        for n in 0..=k {
            if n > 0 {
                partial = plus(&partial, &rep_term(a, n - 1));
            }
            let err = norm(w, &minus(&ev_rep(3, a), &partial))?;
            ensure!(lib(l1::truncation_error(&l, a, &embedded, n))? == err, "truncation error at {n}");
            if n == k {
                ensure!(err.is_zero(), "error {err} at the support size");
            }
        }
    }

    // Norm laws and the isometry of the embedding.
    let all: Vec<&L1Rep<SimpleTerms>> = finite.iter().chain(&geometric).collect();
    for (a, b) in all.iter().zip(all.iter().skip(1)) {
        let (na, nb) = (norm_of(a)?, norm_of(b)?);
        ensure!(lib(l1::l1_norm(&l, a))? == na, "norm of {a:?}");
        let sum = lib(l1::l1_add(&l, a, b))?;
        ensure!(ev_rep(3, &sum) == plus(&ev_rep(3, a), &ev_rep(3, b)), "sum pointwise");
        ensure!(norm_of(&sum)? <= &na + &nb, "triangle inequality");
        for c in ["-2", "1/3", "0"].map(q) {
            let scaled = lib(l1::l1_scale(&l, &c, a))?;
            ensure!(norm_of(&scaled)? == c.abs() * &na, "homogeneity at {c}");
            ensure!(lib(l1::l1_norm(&l, &scaled))? == c.abs() * &na, "library homogeneity at {c}");
        }
        ensure!(lib(l1::l1_norm(&l, &lib(l1::l1_sub(&l, a, a))?))?.is_zero(), "a - a is not null");
        ensure!(lib(l1::l1_eq(&l, a, b))? == (ev_rep(3, a) == ev_rep(3, b)), "l1_eq");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let elems: Vec<SimpleTerms> = (0..40).map(|_| random_simple(&sp.s, &mut rng)).collect();
    for (i, j) in elems.iter().zip(elems.iter().skip(1)) {
        let ni = norm(w, &ev_simple(i))?;
        ensure!(lib(l1::one_norm(&l, i))? == ni, "one_norm of {i:?}");
        ensure!(lib(l1::l1_norm(&l, &L1Rep::embed(i.clone())))? == ni, "embedding is not isometric at {i:?}");
        let apart = norm(w, &minus(&ev_simple(i), &ev_simple(j)))?;
        ensure!(lib(l1::eq_integral(&l, i, j))? == apart.is_zero(), "eq_integral at {i:?} {j:?}");
    }

    // Density witnesses.
    for a in finite.iter().chain(&geometric) {
        for eps in ["1", "1/4", "1/64"].map(q) {
            let dw = lib(l1::density_witness(&l, a, &eps))?;
            let head = (0..dw.n).fold(vec![Some(Scalar::zero()); 3], |acc, k| plus(&acc, &rep_term(a, k)));
            ensure!(ev_simple(&dw.element) == head, "witness is not the partial sum of {} terms", dw.n);
            let err = norm(w, &minus(&head, &ev_rep(3, a)))?;
            ensure!(err <= dw.bound && dw.bound < eps, "density error {err}, bound {}, eps {eps}", dw.bound);
        }
    }

    // Cauchy limits: geometric partial sums and an eventually constant sequence.
    let top = sp.s.index_of_total(sp.s.carrier().full_mask()).unwrap();
    let unit = Scalar::one().checked_div(sp.s.mu(top)).unwrap();
    let u = |c: Scalar| SimpleTerms::single(&sp.s, c * &unit, top).unwrap();
    let sums: Vec<L1Rep<SimpleTerms>> = (0..7)
        .map(|m| L1Rep::finite((0..=m).map(|k| u(Scalar::pow2_neg(k + 1))).collect()).unwrap())
        .collect();
    let v = random_simple(&sp.s, &mut rng);
    let settle: Vec<L1Rep<SimpleTerms>> = [Some(q("1/4")), Some(q("1/8")), None, None]
        .into_iter()
        .map(|c| L1Rep::embed(match c {
            Some(c) => v.add(&u(c)).unwrap(),
            None => v.clone(),
        }))
        .collect();
    let cases: [(&[L1Rep<SimpleTerms>], Vec<usize>, Vals); 2] = [
        (&sums, (0..6).collect(), vec![Some(unit.clone()); 3]),
        (&settle, vec![0, 1, 2], ev_simple(&v)),
    ];
    for (reps, modulus, want) in cases {
        let lim = lib(l1::cauchy_limit(&l, reps, &modulus))?;
        ensure!(ev_rep(3, &lim.limit) == want, "limit function {:?}", ev_rep(3, &lim.limit));
        for (k, &mk) in modulus.iter().enumerate() {
            for rep in &reps[mk..] {
                let d = norm(w, &minus(&ev_rep(3, &lim.limit), &ev_rep(3, rep)))?;
                ensure!(d <= Scalar::pow2_neg(k as u32) * Scalar::from_int(2), "limit {d} away past modulus({k})");
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    l1_layer(&dirac())?;
    l1_layer(&counting(37))
}

// ---- criterion 9: golden corpus ----

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cm"))
        .collect();
    files.sort();
    files
}

fn criterion_9() -> Outcome {
    let files = corpus();
    ensure!(files.len() >= 30, "{} corpus files", files.len());
    for path in files {
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let program = parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let first = run(&program, &RunConfig::default()).to_json();
        let second = run(&parse(&text).unwrap(), &RunConfig::default()).to_json();
        ensure!(first == second, "{}: two runs differ", path.display());
        let expected = fs::read_to_string(path.with_extension("expected.json")).map_err(|e| e.to_string())?;
        ensure!(first == expected, "{}: report differs from the expected file", path.display());
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("complemented-subset lattice laws and absorption failure", criterion_1),
        ("chi/delta bijection and complements", criterion_2),
        ("Dirac and counting pre-measures", criterion_3),
        ("disjoint representations", criterion_4),
        ("phi_N properties", criterion_5),
        ("simple functions pass PIS1-PIS8", criterion_6),
        ("L1 layer bounds", criterion_7),
        ("finite-support L1 passes PIS1-PIS8", criterion_8),
        ("golden corpus", criterion_9),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        match outcome {
            Ok(()) => writeln!(err, "criterion {}: PASS  {name} ({took:.2?})", k + 1).unwrap(),
            Err(e) => {
                writeln!(err, "criterion {}: FAIL  {name}: {e}", k + 1).unwrap();
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
