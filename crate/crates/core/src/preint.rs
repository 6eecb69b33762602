//! Pre-integration spaces and the PIS1–PIS8 checkers, with the simple
//! functions over a pre-measure space as the basic instance.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::premeasure::{AxiomReport, Evidence, PreMeasureSpace};
use crate::sets::{Carrier, RealPartialFn};
use crate::simple::SimpleTerms;

/// Index domain with scaling, addition, `|·|`, `∧₁`, the partial function
/// of each element and its integral.
pub trait PreIntegrationSpace {
    type Elem: Clone;

    fn carrier(&self) -> &Carrier;
    fn scale(&self, a: &Scalar, i: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, i: &Self::Elem, j: &Self::Elem) -> Result<Self::Elem>;
    fn abs(&self, i: &Self::Elem) -> Result<Self::Elem>;
    fn min_one(&self, i: &Self::Elem) -> Result<Self::Elem>;
    fn partial_fn(&self, i: &Self::Elem) -> Result<RealPartialFn>;
    fn integral(&self, i: &Self::Elem) -> Result<Scalar>;
    fn describe(&self, i: &Self::Elem) -> String;

    /// `∧_a := ·_a ∘ ∧₁ ∘ ·_{1/a}`.
    fn min_const(&self, a: &Scalar, i: &Self::Elem) -> Result<Self::Elem> {
        let inv = a.recip()?;
        self.scale(a, &self.min_one(&self.scale(&inv, i)?)?)
    }

    fn sub(&self, i: &Self::Elem, j: &Self::Elem) -> Result<Self::Elem> {
        self.add(i, &self.scale(&-Scalar::one(), j)?)
    }

    /// An element with the same partial function and integral, ideally
    /// smaller. Defaults to the identity.
    fn normalize(&self, i: &Self::Elem) -> Result<Self::Elem> {
        Ok(i.clone())
    }
}

/// Reports for PIS1 to PIS8 and the derived lemmas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PisReport {
    pub reports: Vec<AxiomReport>,
}

impl PisReport {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(AxiomReport::is_holds)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomReport> {
        self.reports.iter().find(|r| r.axiom == axiom)
    }
}

fn ev<L: PreIntegrationSpace>(l: &L, items: &[&L::Elem], values: Vec<Scalar>, detail: &str) -> Evidence {
    Evidence {
        indices: items.iter().map(|i| l.describe(i)).collect(),
        values,
        detail: detail.into(),
        ..Default::default()
    }
}

/// PIS1 `∫a·i = a∫i` with `a𝒇ᵢ = 𝒇_{a·i}`, and PIS2 `∫(i+j) = ∫i + ∫j`
/// with `𝒇ᵢ + 𝒇ⱼ = 𝒇_{i+j}`.
pub fn check_pis_linear<L: PreIntegrationSpace>(
    l: &L,
    battery: &[L::Elem],
    scalars: &[Scalar],
) -> Result<Vec<AxiomReport>> {
    let mut out = Vec::with_capacity(2);
    let mut cases = 0;
    let mut failure = None;
    'pis1: for i in battery {
        let fi = l.partial_fn(i)?;
        let ii = l.integral(i)?;
        for a in scalars {
            cases += 1;
            let ai = l.scale(a, i)?;
            if l.partial_fn(&ai)? != fi.scale(a) {
                failure = Some(ev(l, &[i], vec![a.clone()], "partial function of a.i differs from a.f_i"));
                break 'pis1;
            }
            let lhs = l.integral(&ai)?;
            if lhs != a * &ii {
                failure = Some(ev(l, &[i], vec![a.clone(), lhs, a * &ii], "integral of a.i differs from a times integral"));
                break 'pis1;
            }
        }
    }
    out.push(match failure.take() {
        Some(e) => AxiomReport::fails("PIS1", cases, e),
        None => AxiomReport::holds("PIS1", cases),
    });
    cases = 0;
    'pis2: for i in battery {
        for j in battery {
            cases += 1;
            let s = l.add(i, j)?;
            if l.partial_fn(&s)? != l.partial_fn(i)?.add(&l.partial_fn(j)?)? {
                failure = Some(ev(l, &[i, j], vec![], "partial function of i+j differs from f_i + f_j"));
                break 'pis2;
            }
            let (lhs, rhs) = (l.integral(&s)?, l.integral(i)? + l.integral(j)?);
            if lhs != rhs {
                failure = Some(ev(l, &[i, j], vec![lhs, rhs], "integral of i+j differs from the sum"));
                break 'pis2;
            }
        }
    }
    out.push(match failure {
        Some(e) => AxiomReport::fails("PIS2", cases, e),
        None => AxiomReport::holds("PIS2", cases),
    });
    Ok(out)
}

/// PIS3 `|𝒇ᵢ| = 𝒇_{|i|}` and PIS4 `𝒇ᵢ ∧ 1 = 𝒇_{∧₁(i)}`.
pub fn check_pis_abs_min<L: PreIntegrationSpace>(l: &L, battery: &[L::Elem]) -> Result<Vec<AxiomReport>> {
    let mut abs_fail = None;
    let mut min_fail = None;
    let one = Scalar::one();
    for i in battery {
        let fi = l.partial_fn(i)?;
        if abs_fail.is_none() && l.partial_fn(&l.abs(i)?)? != fi.abs() {
            abs_fail = Some(ev(l, &[i], vec![], "partial function of |i| differs from |f_i|"));
        }
        if min_fail.is_none() && l.partial_fn(&l.min_one(i)?)? != fi.min_const(&one) {
            min_fail = Some(ev(l, &[i], vec![], "partial function of min1(i) differs from f_i min 1"));
        }
    }
    let n = battery.len() as u64;
    Ok(vec![
        abs_fail.map_or_else(|| AxiomReport::holds("PIS3", n), |e| AxiomReport::fails("PIS3", n, e)),
        min_fail.map_or_else(|| AxiomReport::holds("PIS4", n), |e| AxiomReport::fails("PIS4", n, e)),
    ])
}

/// Outcome of one PIS5 instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pis5Case {
    pub hypothesis: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// For an eventually zero `κ` given by its nonzero prefix: if
/// `Σₙ ∫κ(n) < ∫i`, some `x` in every domain has `Σₙ 𝔣_{κ(n)}(x) < 𝔣ᵢ(x)`.
pub fn pis5_case<L: PreIntegrationSpace>(l: &L, i: &L::Elem, kappa: &[L::Elem]) -> Result<Pis5Case> {
    let fk = kappa.iter().map(|k| l.partial_fn(k)).collect::<Result<Vec<_>>>()?;
    for (k, f) in kappa.iter().zip(&fk) {
        if !f.is_nonnegative() {
            return Err(Error::InvalidArgument(format!("kappa term {} takes a negative value", l.describe(k))));
        }
    }
    let total: Scalar = kappa.iter().map(|k| l.integral(k)).collect::<Result<Vec<_>>>()?.into_iter().sum();
    let hypothesis = total < l.integral(i)?;
    if !hypothesis {
        return Ok(Pis5Case { hypothesis, witness: None });
    }
    let fi = l.partial_fn(i)?;
    let witness = fi
        .iter()
        .filter(|(x, _)| fk.iter().all(|f| f.value(*x).is_some()))
        .find(|(x, v)| {
            let s: Scalar = fk.iter().map(|f| f.value(*x).expect("in domain")).sum();
            s < **v
        })
        .map(|(x, _)| l.carrier().name(x).to_string());
    Ok(Pis5Case { hypothesis, witness })
}

pub fn check_pis5<L: PreIntegrationSpace>(l: &L, cases: &[(L::Elem, Vec<L::Elem>)]) -> Result<AxiomReport> {
    let mut witness = None;
    for (n, (i, kappa)) in cases.iter().enumerate() {
        let c = pis5_case(l, i, kappa)?;
        if c.hypothesis {
            match c.witness {
                None => {
                    let mut items = vec![i];
                    items.extend(kappa.iter());
                    return Ok(AxiomReport::fails(
                        "PIS5",
                        n as u64 + 1,
                        ev(l, &items, vec![], "sum of kappa integrals below the integral but no witness point"),
                    ));
                }
                Some(x) if witness.is_none() => {
                    let mut e = ev(l, &[i], vec![], "");
                    e.elements = vec![x];
                    witness = Some(e);
                }
                Some(_) => {}
            }
        }
    }
    let mut r = AxiomReport::holds("PIS5", cases.len() as u64);
    r.witness = witness;
    Ok(r)
}

/// Some battery element has integral 1.
pub fn check_pis6<L: PreIntegrationSpace>(l: &L, battery: &[L::Elem]) -> Result<AxiomReport> {
    for (n, i) in battery.iter().enumerate() {
        if l.integral(i)? == Scalar::one() {
            return Ok(AxiomReport::holds("PIS6", n as u64 + 1).with_witness(ev(l, &[i], vec![Scalar::one()], "")));
        }
    }
    Ok(AxiomReport::fails("PIS6", battery.len() as u64, Evidence::detail("no element with integral 1")))
}

/// `n* = ⌈max(1, sup|𝔣ᵢ|)⌉`, from which `∧ₙ(i)` agrees with `i`.
pub fn pis7_threshold<L: PreIntegrationSpace>(l: &L, i: &L::Elem) -> Result<u64> {
    let sup = Scalar::max(&l.partial_fn(i)?.sup_abs(), &Scalar::one());
    u64::try_from(sup.ceil()).map_err(|_| Error::CapExceeded("sup too large".into()))
}

/// The constant `C` with `∫∧_{1/n}|i| ≤ C/n`: with `m = ⌈1/min nonzero |𝔣ᵢ|⌉`,
/// `C = m·∫∧_{1/m}|i|`, and `n·∫∧_{1/n}|i| = C` for every `n ≥ m`.
pub fn pis8_constant<L: PreIntegrationSpace>(l: &L, i: &L::Elem) -> Result<(u64, Scalar)> {
    let f = l.partial_fn(i)?;
    let m = match f.min_nonzero_abs() {
        None => return Ok((1, Scalar::zero())),
        Some(v) => u64::try_from(v.recip()?.ceil()).map_err(|_| Error::CapExceeded("values too small".into()))?,
    }
    .max(1);
    let ms = Scalar::from_int(m as i64);
    let c = &ms * &l.integral(&l.min_const(&ms.recip()?, &l.abs(i)?)?)?;
    Ok((m, c))
}

/// PIS7 by exact stabilization at `n*` (checked on `n* .. n* + window`) and
/// PIS8 by the `C/n` bound on `1 .. m + window`, with monotone decrease.
pub fn check_pis_limits<L: PreIntegrationSpace>(
    l: &L,
    battery: &[L::Elem],
    window: u64,
) -> Result<Vec<AxiomReport>> {
    let mut pis7_cases = 0;
    let mut pis8_cases = 0;
    let mut pis7_fail = None;
    let mut pis8_fail = None;
    for i in battery {
        let fi = l.partial_fn(i)?;
        let ii = l.integral(i)?;
        let start = pis7_threshold(l, i)?;
        for n in start..=start + window {
            pis7_cases += 1;
            let ns = Scalar::from_int(n as i64);
            let cut = l.min_const(&ns, i)?;
            let (fc, ic) = (l.partial_fn(&cut)?, l.integral(&cut)?);
            if pis7_fail.is_none() && (fc != fi || ic != ii) {
                pis7_fail = Some(ev(l, &[i], vec![ns, ic, ii.clone()], "integral of min_n(i) not yet stable at n*"));
            }
        }
        let (m, c) = pis8_constant(l, i)?;
        let abs = l.abs(i)?;
        let mut prev: Option<Scalar> = None;
        for n in 1..=m + window {
            pis8_cases += 1;
            let ns = Scalar::from_int(n as i64);
            let v = l.integral(&l.min_const(&ns.recip()?, &abs)?)?;
            let bound = c.checked_div(&ns)?;
            let monotone = prev.as_ref().is_none_or(|p| v <= *p);
            let tight = n < m || &ns * &v == c;
            if pis8_fail.is_none() && (v.is_negative() || v > bound || !monotone || !tight) {
                pis8_fail = Some(ev(l, &[i], vec![ns, v.clone(), bound], "integral of min_{1/n}|i| violates the C/n bound"));
            }
            prev = Some(v);
        }
    }
    Ok(vec![
        pis7_fail.map_or_else(|| AxiomReport::holds("PIS7", pis7_cases), |e| AxiomReport::fails("PIS7", pis7_cases, e)),
        pis8_fail.map_or_else(|| AxiomReport::holds("PIS8", pis8_cases), |e| AxiomReport::fails("PIS8", pis8_cases, e)),
    ])
}

/// Positivity, `|∫i| ≤ ∫|i|`, monotonicity and extensionality of `∫`.
pub fn check_basic_lemmas<L: PreIntegrationSpace>(l: &L, battery: &[L::Elem]) -> Result<Vec<AxiomReport>> {
    let fs = battery.iter().map(|i| l.partial_fn(i)).collect::<Result<Vec<_>>>()?;
    let ints = battery.iter().map(|i| l.integral(i)).collect::<Result<Vec<_>>>()?;
    let n = battery.len() as u64;
    let mut out = Vec::with_capacity(4);

    let bad = (0..battery.len()).find(|&k| fs[k].is_nonnegative() && ints[k].is_negative());
    out.push(match bad {
        Some(k) => AxiomReport::fails("positivity", n, ev(l, &[&battery[k]], vec![ints[k].clone()], "f >= 0 but integral < 0")),
        None => AxiomReport::holds("positivity", n),
    });

    let mut bad = None;
    for (k, i) in battery.iter().enumerate() {
        let ia = l.integral(&l.abs(i)?)?;
        if ints[k].abs() > ia {
            bad = Some(ev(l, &[i], vec![ints[k].clone(), ia], "|integral| exceeds integral of |i|"));
            break;
        }
    }
    out.push(match bad {
        Some(e) => AxiomReport::fails("abs_bound", n, e),
        None => AxiomReport::holds("abs_bound", n),
    });

    let mut mono = None;
    let mut ext = None;
    for a in 0..battery.len() {
        for b in 0..battery.len() {
            if mono.is_none() && fs[a].le_on_common(&fs[b]) && ints[a] > ints[b] {
                mono = Some(ev(l, &[&battery[a], &battery[b]], vec![ints[a].clone(), ints[b].clone()], "f_i <= f_j but integral decreases"));
            }
            if ext.is_none() && fs[a] == fs[b] && ints[a] != ints[b] {
                ext = Some(ev(l, &[&battery[a], &battery[b]], vec![ints[a].clone(), ints[b].clone()], "equal functions with different integrals"));
            }
        }
    }
    let pairs = n * n;
    out.push(mono.map_or_else(|| AxiomReport::holds("monotone", pairs), |e| AxiomReport::fails("monotone", pairs, e)));
    out.push(ext.map_or_else(|| AxiomReport::holds("extensional", pairs), |e| AxiomReport::fails("extensional", pairs, e)));
    Ok(out)
}

/// PIS5 instances built from a battery: `κ ≡ 0`, `κ = (½|i|)`, and
/// `κ = (¼|j|, ¼|j|)` for neighbouring battery elements.
pub fn pis5_battery<L: PreIntegrationSpace>(l: &L, battery: &[L::Elem]) -> Result<Vec<(L::Elem, Vec<L::Elem>)>> {
    let half = Scalar::ratio(1, 2)?;
    let quarter = Scalar::ratio(1, 4)?;
    let mut out = Vec::new();
    for (k, i) in battery.iter().enumerate() {
        out.push((i.clone(), vec![]));
        out.push((i.clone(), vec![l.scale(&half, &l.abs(i)?)?]));
        let j = &battery[(k + 1) % battery.len()];
        let qj = l.scale(&quarter, &l.abs(j)?)?;
        out.push((i.clone(), vec![qj.clone(), qj]));
    }
    Ok(out)
}

/// Every PIS checker on one battery.
pub fn check_pis_all<L: PreIntegrationSpace>(l: &L, battery: &[L::Elem], scalars: &[Scalar]) -> Result<PisReport> {
    let mut reports = check_pis_linear(l, battery, scalars)?;
    reports.extend(check_pis_abs_min(l, battery)?);
    reports.push(check_pis5(l, &pis5_battery(l, battery)?)?);
    reports.push(check_pis6(l, battery)?);
    reports.extend(check_pis_limits(l, battery, 3)?);
    Ok(PisReport { reports })
}

/// Scalars used by the linearity checks.
pub fn default_scalars() -> Vec<Scalar> {
    ["0", "1", "-1", "2", "1/2", "-3/4", "5/3"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

/// The simple functions over a pre-measure space.
#[derive(Debug, Clone)]
pub struct SimpleSpace {
    space: Arc<PreMeasureSpace>,
    max_terms: usize,
}

pub const DEFAULT_MAX_TERMS: usize = 4096;

impl SimpleSpace {
    pub fn new(space: Arc<PreMeasureSpace>, max_terms: usize) -> Self {
        SimpleSpace { space, max_terms }
    }

    pub fn space(&self) -> &Arc<PreMeasureSpace> {
        &self.space
    }

    fn capped(&self, v: SimpleTerms) -> Result<SimpleTerms> {
        if v.len() > self.max_terms {
            return Err(Error::CapExceeded(format!("{} terms, limit is {}", v.len(), self.max_terms)));
        }
        Ok(v)
    }
}

impl PreIntegrationSpace for SimpleSpace {
    type Elem = SimpleTerms;

    fn carrier(&self) -> &Carrier {
        self.space.carrier()
    }

    fn scale(&self, a: &Scalar, i: &SimpleTerms) -> Result<SimpleTerms> {
        Ok(i.scale(a))
    }

    fn add(&self, i: &SimpleTerms, j: &SimpleTerms) -> Result<SimpleTerms> {
        self.capped(i.add(j)?)
    }

    fn abs(&self, i: &SimpleTerms) -> Result<SimpleTerms> {
        i.abs()
    }

    fn min_one(&self, i: &SimpleTerms) -> Result<SimpleTerms> {
        i.min_one()
    }

    fn partial_fn(&self, i: &SimpleTerms) -> Result<RealPartialFn> {
        Ok(i.eval())
    }

    fn integral(&self, i: &SimpleTerms) -> Result<Scalar> {
        Ok(i.integral())
    }

    fn describe(&self, i: &SimpleTerms) -> String {
        format!("{i:?}")
    }

    fn normalize(&self, i: &SimpleTerms) -> Result<SimpleTerms> {
        i.normal_form()
    }
}

/// A seeded battery of simple functions: the constant 1, a normalized
/// element of integral 1 when some index has positive measure, and `size`
/// random sums of one to three terms.
pub fn simple_battery(space: &Arc<PreMeasureSpace>, size: usize, seed: u64) -> Result<Vec<SimpleTerms>> {
    let mut out = Vec::with_capacity(size + 2);
    if let Some(top) = space.index_of_total(space.carrier().full_mask()) {
        out.push(SimpleTerms::single(space, Scalar::one(), top)?);
    }
    if let Some(i) = space.indices().rev().find(|&i| space.mu(i).is_positive()) {
        out.push(SimpleTerms::single(space, space.mu(i).recip()?, i)?);
    }
    let coeffs: Vec<Scalar> = ["-2", "-1", "-1/2", "0", "1/3", "1/2", "1", "2", "5"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..size {
        let n = rng.random_range(1..=3);
        let terms = (0..n)
            .map(|_| {
                let a = coeffs[rng.random_range(0..coeffs.len())].clone();
                (a, rng.random_range(0..space.len()))
            })
            .collect();
        out.push(SimpleTerms::new(space, terms)?);
    }
    Ok(out)
}
