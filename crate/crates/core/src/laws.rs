//! Exhaustive law checks for the algebra of complemented subsets and the
//! `χ`/`δ` correspondence on a small carrier.

use crate::report::{AxiomReport, Evidence};
use crate::sets::{detachably_apart, BoolOp, BoolPartialFn, Carrier, ComplementedSubset};

/// Above this many atoms the triple loops get slow.
pub const MAX_EXHAUSTIVE: usize = 4;

type Cs = ComplementedSubset;

fn patterns(items: &[&Cs]) -> Evidence {
    Evidence { indices: items.iter().map(|a| a.pattern()).collect(), ..Default::default() }
}

fn law1(name: &str, all: &[Cs], holds: impl Fn(&Cs) -> bool) -> AxiomReport {
    match all.iter().find(|a| !holds(a)) {
        Some(a) => AxiomReport::fails(name, all.len() as u64, patterns(&[a])),
        None => AxiomReport::holds(name, all.len() as u64),
    }
}

fn law2(name: &str, all: &[Cs], holds: impl Fn(&Cs, &Cs) -> bool) -> AxiomReport {
    for a in all {
        for b in all {
            if !holds(a, b) {
                return AxiomReport::fails(name, (all.len() * all.len()) as u64, patterns(&[a, b]));
            }
        }
    }
    AxiomReport::holds(name, (all.len() * all.len()) as u64)
}

fn law3(name: &str, all: &[Cs], holds: impl Fn(&Cs, &Cs, &Cs) -> bool) -> AxiomReport {
    let n = all.len() as u64;
    for a in all {
        for b in all {
            for c in all {
                if !holds(a, b, c) {
                    return AxiomReport::fails(name, n * n * n, patterns(&[a, b, c]));
                }
            }
        }
    }
    AxiomReport::holds(name, n * n * n)
}

fn j(a: &Cs, b: &Cs) -> Cs {
    a.join(b).expect("same carrier")
}

fn m(a: &Cs, b: &Cs) -> Cs {
    a.meet(b).expect("same carrier")
}

/// Lattice laws over every complemented subset, plus a search for a
/// failure of absorption. The `absorption_fails` entry holds when such a
/// failure is found and carries it as the witness.
pub fn lattice_suite(carrier: &Carrier) -> Vec<AxiomReport> {
    let all = ComplementedSubset::enumerate(carrier);
    let mut out = vec![
        law3("join_assoc", &all, |a, b, c| j(&j(a, b), c) == j(a, &j(b, c))),
        law3("meet_assoc", &all, |a, b, c| m(&m(a, b), c) == m(a, &m(b, c))),
        law2("join_comm", &all, |a, b| j(a, b) == j(b, a)),
        law2("meet_comm", &all, |a, b| m(a, b) == m(b, a)),
        law1("join_idem", &all, |a| j(a, a) == *a),
        law1("meet_idem", &all, |a| m(a, a) == *a),
        law3("meet_distributes", &all, |a, b, c| m(a, &j(b, c)) == j(&m(a, b), &m(a, c))),
        law3("join_distributes", &all, |a, b, c| j(a, &m(b, c)) == m(&j(a, b), &j(a, c))),
        law2("de_morgan_join", &all, |a, b| j(a, b).not() == m(&a.not(), &b.not())),
        law2("de_morgan_meet", &all, |a, b| m(a, b).not() == j(&a.not(), &b.not())),
        law1("double_negation", &all, |a| a.not().not() == *a),
    ];
    let n = (all.len() * all.len()) as u64;
    let failure = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a, b)))
        .find(|(a, b)| j(&m(a, b), a) != **a || m(&j(a, b), a) != **a);
    out.push(match failure {
        Some((a, b)) => {
            let mut e = patterns(&[a, b]);
            e.detail = if j(&m(a, b), a) != *a {
                "(A meet B) join A != A".into()
            } else {
                "(A join B) meet A != A".into()
            };
            AxiomReport::holds("absorption_fails", n).with_witness(e)
        }
        None => AxiomReport::fails("absorption_fails", n, Evidence::detail("absorption holds everywhere")),
    });
    out
}

fn fn_law1(name: &str, all: &[BoolPartialFn], holds: impl Fn(&BoolPartialFn) -> bool) -> AxiomReport {
    match all.iter().find(|f| !holds(f)) {
        Some(f) => AxiomReport::fails(name, all.len() as u64, patterns(&[&f.delta()])),
        None => AxiomReport::holds(name, all.len() as u64),
    }
}

fn fn_law2(name: &str, all: &[BoolPartialFn], holds: impl Fn(&BoolPartialFn, &BoolPartialFn) -> bool) -> AxiomReport {
    for f in all {
        for g in all {
            if !holds(f, g) {
                return AxiomReport::fails(name, (all.len() * all.len()) as u64, patterns(&[&f.delta(), &g.delta()]));
            }
        }
    }
    AxiomReport::holds(name, (all.len() * all.len()) as u64)
}

/// `χ` and `δ` are mutually inverse homomorphisms, their outputs are
/// strongly extensional, and detachable apartness is denial inequality.
pub fn chi_delta_suite(carrier: &Carrier) -> Vec<AxiomReport> {
    let all = ComplementedSubset::enumerate(carrier);
    let fns = BoolPartialFn::enumerate(carrier);
    let op = |o: BoolOp, f: &BoolPartialFn, g: &BoolPartialFn| BoolPartialFn::apply(o, f, Some(g)).expect("same carrier");
    let mut out = vec![
        law1("delta_chi", &all, |a| a.chi().delta() == *a),
        fn_law1("chi_delta", &fns, |f| f.delta().chi() == *f),
        law1("chi_not", &all, |a| a.not().chi() == a.chi().not()),
        fn_law1("delta_not", &fns, |f| f.not().delta() == f.delta().not()),
        law2("chi_join", &all, |a, b| j(a, b).chi() == op(BoolOp::Join, &a.chi(), &b.chi())),
        law2("chi_meet", &all, |a, b| m(a, b).chi() == op(BoolOp::Meet, &a.chi(), &b.chi())),
        law2("chi_minus", &all, |a, b| a.minus(b).expect("same carrier").chi() == op(BoolOp::Minus, &a.chi(), &b.chi())),
        fn_law2("delta_join", &fns, |f, g| op(BoolOp::Join, f, g).delta() == j(&f.delta(), &g.delta())),
        fn_law2("delta_meet", &fns, |f, g| op(BoolOp::Meet, f, g).delta() == m(&f.delta(), &g.delta())),
        fn_law2("delta_minus", &fns, |f, g| {
            op(BoolOp::Minus, f, g).delta() == f.delta().minus(&g.delta()).expect("same carrier")
        }),
        law1("chi_strongly_extensional", &all, |a| a.chi().is_strongly_extensional()),
        fn_law2("ops_strongly_extensional", &fns, |f, g| {
            [BoolOp::Join, BoolOp::Meet, BoolOp::Minus]
                .iter()
                .all(|o| op(*o, f, g).is_strongly_extensional() && f.to_real().add(&g.to_real()).is_ok_and(|h| h.is_strongly_extensional()))
        }),
    ];
    let n = carrier.len();
    let bad = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| carrier.apart(x, y) != detachably_apart(carrier, x, y));
    let cases = (n * n) as u64;
    out.push(match bad {
        Some((x, y)) => AxiomReport::fails(
            "detachable_apartness",
            cases,
            Evidence { elements: vec![carrier.name(x).into(), carrier.name(y).into()], ..Default::default() },
        ),
        None => AxiomReport::holds("detachable_apartness", cases),
    });
    out
}
