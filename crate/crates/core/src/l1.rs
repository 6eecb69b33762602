//! Representations of canonically integrable functions: sequences over a
//! pre-integration space with a certified bound on `Σ ∫|αₙ|`.
//!
//! Every tail rule has a closed form, so the canonical function, the
//! integral and `‖·‖₁` of a representation are exact. Indices of terms are
//! 0-based in this module.

use std::fmt;

use serde::Serialize;

use crate::arith::{pair, sum_with_tail, Scalar, ScalarInterval};
use crate::error::{Error, Result};
use crate::preint::PreIntegrationSpace;
use crate::sets::{Carrier, RealPartialFn};

/// Terms after the explicit prefix.
#[derive(Clone, PartialEq)]
pub enum Tail<E> {
    /// Finite support.
    Zero,
    /// `first, r·first, r²·first, ...` with `|r| < 1`.
    Geometric { first: E, ratio: Scalar },
    /// `a₀, b₀, a₁, b₁, ...`.
    Interleave(Box<L1Rep<E>>, Box<L1Rep<E>>),
}

#[derive(Clone, PartialEq)]
pub struct L1Rep<E> {
    prefix: Vec<E>,
    tail: Tail<E>,
}

impl<E: Clone> L1Rep<E> {
    /// Finite support `(α₀, ..., α_{K-1})`.
    pub fn finite(terms: Vec<E>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("a representation needs at least one term".into()));
        }
        Ok(L1Rep { prefix: terms, tail: Tail::Zero })
    }

    /// `prefix` followed by `first, r·first, ...`.
    pub fn geometric(prefix: Vec<E>, first: E, ratio: Scalar) -> Result<Self> {
        if ratio.abs() >= Scalar::one() {
            return Err(Error::InvalidArgument(format!("geometric ratio {ratio} is not below 1 in absolute value")));
        }
        Ok(L1Rep { prefix, tail: Tail::Geometric { first, ratio } })
    }

    /// `h(i) := (i, 0, 0, ...)`.
    pub fn embed(i: E) -> Self {
        L1Rep { prefix: vec![i], tail: Tail::Zero }
    }

    pub fn prefix(&self) -> &[E] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail<E> {
        &self.tail
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.tail, Tail::Zero)
    }

    /// Number of terms for finite support.
    pub fn support_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    /// Some term, used to build zero elements.
    fn sample(&self) -> &E {
        match (self.prefix.first(), &self.tail) {
            (Some(e), _) => e,
            (None, Tail::Geometric { first, .. }) => first,
            (None, Tail::Interleave(a, _)) => a.sample(),
            (None, Tail::Zero) => unreachable!("representations are nonempty"),
        }
    }

    fn rule(&self) -> &'static str {
        match self.tail {
            Tail::Zero => "finite",
            Tail::Geometric { .. } => "geometric",
            Tail::Interleave(..) => "interleave",
        }
    }
}

impl<E: Serialize + Clone> Serialize for L1Rep<E> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = ser.serialize_map(None)?;
        m.serialize_entry("prefix", &self.prefix)?;
        m.serialize_entry("tail", self.rule())?;
        match &self.tail {
            Tail::Zero => {}
            Tail::Geometric { first, ratio } => {
                m.serialize_entry("first", first)?;
                m.serialize_entry("ratio", ratio)?;
            }
            Tail::Interleave(a, b) => m.serialize_entry("parts", &[a.as_ref(), b.as_ref()])?,
        }
        m.end()
    }
}

impl<E: fmt::Debug> fmt::Debug for L1Rep<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tail {
            Tail::Zero => write!(f, "finite{:?}", self.prefix),
            Tail::Geometric { first, ratio } => write!(f, "geometric({:?}, {first:?}, {ratio})", self.prefix),
            Tail::Interleave(a, b) => write!(f, "interleave({:?}, {a:?}, {b:?})", self.prefix),
        }
    }
}

fn zero_of<L: PreIntegrationSpace>(l: &L, e: &L::Elem) -> Result<L::Elem> {
    l.scale(&Scalar::zero(), e)
}

/// `Σ` of a nonempty list in the base space, normalized.
fn sum_elems<L: PreIntegrationSpace>(l: &L, items: &[L::Elem]) -> Result<L::Elem> {
    let (first, rest) = items
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty sum".into()))?;
    let s = rest.iter().try_fold(first.clone(), |acc, e| l.add(&acc, e))?;
    l.normalize(&s)
}

/// Term `n`; beyond finite support, the zero element.
pub fn term<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, n: usize) -> Result<L::Elem> {
    if let Some(e) = a.prefix.get(n) {
        return Ok(e.clone());
    }
    let m = n - a.prefix.len();
    match &a.tail {
        Tail::Zero => zero_of(l, a.sample()),
        Tail::Geometric { first, ratio } => {
            let k = u32::try_from(m).map_err(|_| Error::CapExceeded("term index too large".into()))?;
            l.scale(&ratio.pow(k), first)
        }
        Tail::Interleave(x, y) => {
            if m % 2 == 0 {
                term(l, x, m / 2)
            } else {
                term(l, y, m / 2)
            }
        }
    }
}

/// An element of the base space whose partial function is the canonical
/// function `𝔤_α = Σₙ 𝔣_{αₙ}`.
pub fn closed_form<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<L::Elem> {
    let mut parts = a.prefix.clone();
    match &a.tail {
        Tail::Zero => {}
        Tail::Geometric { first, ratio } => {
            parts.push(l.scale(&(Scalar::one() - ratio).recip()?, first)?);
        }
        Tail::Interleave(x, y) => {
            parts.push(closed_form(l, x)?);
            parts.push(closed_form(l, y)?);
        }
    }
    sum_elems(l, &parts)
}

/// `𝔤_α` on `⋂ₙ dom(αₙ)`, summed term by term over the prefix.
pub fn canonical<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<RealPartialFn> {
    let mut parts = a
        .prefix
        .iter()
        .map(|e| l.partial_fn(e))
        .collect::<Result<Vec<_>>>()?;
    match &a.tail {
        Tail::Zero => {}
        Tail::Geometric { first, ratio } => {
            parts.push(l.partial_fn(first)?.scale(&(Scalar::one() - ratio).recip()?));
        }
        Tail::Interleave(x, y) => {
            parts.push(canonical(l, x)?);
            parts.push(canonical(l, y)?);
        }
    }
    let (first, rest) = parts.split_first().expect("nonempty");
    rest.iter().try_fold(first.clone(), |acc, f| acc.add(f))
}

/// `∫α := Σₙ ∫αₙ`, exact.
pub fn integral<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<Scalar> {
    let mut total: Scalar = a.prefix.iter().map(|e| l.integral(e)).collect::<Result<Vec<_>>>()?.into_iter().sum();
    match &a.tail {
        Tail::Zero => {}
        Tail::Geometric { first, ratio } => {
            total += &l.integral(first)?.checked_div(&(Scalar::one() - ratio))?;
        }
        Tail::Interleave(x, y) => {
            total += &integral(l, x)?;
            total += &integral(l, y)?;
        }
    }
    Ok(total)
}

/// `Σ_{n≥N} ∫|αₙ|`, exact.
pub fn tail_bound<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, n: usize) -> Result<Scalar> {
    let p = a.prefix.len();
    let head: Scalar = a
        .prefix
        .iter()
        .skip(n)
        .map(|e| l.integral(&l.abs(e)?))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let m = n.saturating_sub(p);
    let rest = match &a.tail {
        Tail::Zero => Scalar::zero(),
        Tail::Geometric { first, ratio } => {
            let r = ratio.abs();
            let k = u32::try_from(m).map_err(|_| Error::CapExceeded("term index too large".into()))?;
            (r.pow(k) * l.integral(&l.abs(first)?)?).checked_div(&(Scalar::one() - &r))?
        }
        Tail::Interleave(x, y) => tail_bound(l, x, m.div_ceil(2))? + tail_bound(l, y, m / 2)?,
    };
    Ok(head + rest)
}

/// `[Σ_{n<N} ∫αₙ − t(N), Σ_{n<N} ∫αₙ + t(N)]`; exact for finite support
/// once `N` covers it.
pub fn integral_interval<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, n: usize) -> Result<ScalarInterval> {
    if let Some(k) = a.support_len() {
        if n >= k {
            return Ok(ScalarInterval::point(integral(l, a)?));
        }
    }
    let partials = (0..n).map(|k| l.integral(&term(l, a, k)?)).collect::<Result<Vec<_>>>()?;
    sum_with_tail(&partials, &tail_bound(l, a, n)?, n)
}

/// `α + β := (α₀, β₀, α₁, β₁, ...)`. Finite representations are padded
/// with zero elements to a common length.
pub fn l1_add<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, b: &L1Rep<L::Elem>) -> Result<L1Rep<L::Elem>> {
    if a.is_finite() && b.is_finite() {
        let len = a.prefix.len().max(b.prefix.len());
        let mut terms = Vec::with_capacity(2 * len);
        for k in 0..len {
            terms.push(term(l, a, k)?);
            terms.push(term(l, b, k)?);
        }
        return L1Rep::finite(terms);
    }
    Ok(L1Rep { prefix: vec![], tail: Tail::Interleave(Box::new(a.clone()), Box::new(b.clone())) })
}

/// Termwise `a·αₙ`.
pub fn l1_scale<L: PreIntegrationSpace>(l: &L, c: &Scalar, a: &L1Rep<L::Elem>) -> Result<L1Rep<L::Elem>> {
    let prefix = a.prefix.iter().map(|e| l.scale(c, e)).collect::<Result<Vec<_>>>()?;
    let tail = match &a.tail {
        Tail::Zero => Tail::Zero,
        Tail::Geometric { first, ratio } => Tail::Geometric { first: l.scale(c, first)?, ratio: ratio.clone() },
        Tail::Interleave(x, y) => Tail::Interleave(Box::new(l1_scale(l, c, x)?), Box::new(l1_scale(l, c, y)?)),
    };
    Ok(L1Rep { prefix, tail })
}

pub fn l1_sub<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, b: &L1Rep<L::Elem>) -> Result<L1Rep<L::Elem>> {
    l1_add(l, a, &l1_scale(l, &-Scalar::one(), b)?)
}

/// `δₙ := h(sₙ) − h(sₙ₋₁)` over the partial sums `sₙ`.
fn telescope<L: PreIntegrationSpace>(
    l: &L,
    a: &L1Rep<L::Elem>,
    h: impl Fn(&L::Elem) -> Result<L::Elem>,
) -> Result<L1Rep<L::Elem>> {
    if !a.is_finite() {
        return Err(Error::UnsupportedTail(format!(
            "telescoping needs finite support, got a {} tail",
            a.rule()
        )));
    }
    let mut out = Vec::with_capacity(a.prefix.len());
    let mut s = a.prefix[0].clone();
    let mut hs = h(&s)?;
    out.push(hs.clone());
    for e in &a.prefix[1..] {
        s = l.normalize(&l.add(&s, e)?)?;
        let next = h(&s)?;
        out.push(l.sub(&next, &hs)?);
        hs = next;
    }
    L1Rep::finite(out)
}

/// `|α|` with `𝔤_{|α|} = |𝔤_α|`.
pub fn l1_abs<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<L1Rep<L::Elem>> {
    telescope(l, a, |s| l.abs(s))
}

/// `∧₁(α)` with `𝔤_{∧₁α} = 𝔤_α ∧ 1`.
pub fn l1_min_one<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<L1Rep<L::Elem>> {
    telescope(l, a, |s| l.min_one(s))
}

/// `‖α‖₁ := ∫|α|`.
pub fn l1_norm<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<Scalar> {
    l.integral(&l.abs(&closed_form(l, a)?)?)
}

/// `‖α − β‖₁`.
pub fn l1_dist<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, b: &L1Rep<L::Elem>) -> Result<Scalar> {
    let d = l.sub(&closed_form(l, a)?, &closed_form(l, b)?)?;
    l.integral(&l.abs(&d)?)
}

/// `α =_{I₁} β`: equal canonical functions.
pub fn l1_eq<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, b: &L1Rep<L::Elem>) -> Result<bool> {
    Ok(canonical(l, a)? == canonical(l, b)?)
}

/// `Σₙ ∫|αₙ|`.
pub fn abs_series<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>) -> Result<Scalar> {
    tail_bound(l, a, 0)
}

/// `‖i‖₁ := ∫|i|`.
pub fn one_norm<L: PreIntegrationSpace>(l: &L, i: &L::Elem) -> Result<Scalar> {
    l.integral(&l.abs(i)?)
}

/// `i =_∫ j :⇔ ∫|i − j| = 0`.
pub fn eq_integral<L: PreIntegrationSpace>(l: &L, i: &L::Elem, j: &L::Elem) -> Result<bool> {
    Ok(one_norm(l, &l.sub(i, j)?)?.is_zero())
}

const MAX_SEARCH: usize = 4096;

/// Smallest `N ≥ 1` with `t(N) < bound`.
fn prefix_below<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, bound: &Scalar) -> Result<usize> {
    for n in 1..=MAX_SEARCH {
        if tail_bound(l, a, n)? < *bound {
            return Ok(n);
        }
    }
    Err(Error::InsufficientCertificate(format!("tail stays above {bound} for {MAX_SEARCH} terms")))
}

/// `ψ(α, n)`: the first `N` terms grouped into one, with `t(N) < 2⁻ⁿ⁻¹`, so
/// that `Σₖ ∫|ψ(α,n)ₖ| ≤ 2⁻ⁿ + ∫|α|`.
pub fn psi<L: PreIntegrationSpace>(l: &L, a: &L1Rep<L::Elem>, n: u32) -> Result<L1Rep<L::Elem>> {
    match &a.tail {
        Tail::Zero => Ok(L1Rep::embed(sum_elems(l, &a.prefix)?)),
        Tail::Geometric { first, ratio } => {
            let cut = prefix_below(l, a, &Scalar::pow2_neg(n + 1))?;
            let head = (0..cut).map(|k| term(l, a, k)).collect::<Result<Vec<_>>>()?;
            let mut prefix = vec![sum_elems(l, &head)?];
            let p = a.prefix.len();
            if cut < p {
                prefix.extend(a.prefix[cut..].iter().cloned());
                L1Rep::geometric(prefix, first.clone(), ratio.clone())
            } else {
                L1Rep::geometric(prefix, term(l, a, cut)?, ratio.clone())
            }
        }
        Tail::Interleave(..) => Err(Error::UnsupportedTail("psi of an interleaved representation".into())),
    }
}

/// Output of [`lebesgue_flatten`].
#[derive(Clone)]
pub struct Flattened<E> {
    pub alpha: L1Rep<E>,
    /// `curve[N] = Σ_{n=N+1}^{L} (2⁻ⁿ + ‖Γₙ‖₁)` for `N = 0..=L`.
    pub curve: Vec<Scalar>,
}

impl<E> Flattened<E> {
    /// The certified bound for `N`, zero past the end of the list.
    pub fn error_bound(&self, n: usize) -> Scalar {
        self.curve.get(n).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// A single representation of `Σₙ Γₙ` for a finite list of finite
/// representations: `βₙ := ψ(Γₙ, n)` flattened along the pairing
/// bijection, `α_m := (β_p)_q` where `pair(m) = (p, q)`.
pub fn lebesgue_flatten<L: PreIntegrationSpace>(l: &L, gammas: &[L1Rep<L::Elem>]) -> Result<Flattened<L::Elem>> {
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("empty list of representations".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !g.is_finite()) {
        return Err(Error::UnsupportedTail(format!("flattening needs finite support, got a {} tail", g.rule())));
    }
    let len = gammas.len();
    let betas = gammas
        .iter()
        .enumerate()
        .map(|(k, g)| psi(l, g, k as u32 + 1))
        .collect::<Result<Vec<_>>>()?;
    let zero = zero_of(l, betas[0].sample())?;
    let count = len * (len + 1) / 2;
    let mut terms = Vec::with_capacity(count);
    for m in 1..=count as u64 {
        let (p, q) = pair(m)?;
        let (p, q) = (p as usize - 1, q as usize - 1);
        let t = betas.get(p).and_then(|b| b.prefix.get(q));
        terms.push(t.cloned().unwrap_or_else(|| zero.clone()));
    }
    let norms = gammas.iter().map(|g| l1_norm(l, g)).collect::<Result<Vec<_>>>()?;
    let curve = (0..=len)
        .map(|n| {
            (n + 1..=len)
                .map(|k| Scalar::pow2_neg(k as u32) + &norms[k - 1])
                .sum()
        })
        .collect();
    Ok(Flattened { alpha: L1Rep::finite(terms)?, curve })
}

/// `‖α − Σ_{n≤N} Γₙ‖₁`, exact.
pub fn truncation_error<L: PreIntegrationSpace>(
    l: &L,
    alpha: &L1Rep<L::Elem>,
    gammas: &[L1Rep<L::Elem>],
    n: usize,
) -> Result<Scalar> {
    let mut parts = vec![closed_form(l, alpha)?];
    for g in gammas.iter().take(n) {
        parts.push(l.scale(&-Scalar::one(), &closed_form(l, g)?)?);
    }
    one_norm(l, &sum_elems(l, &parts)?)
}

/// A partial sum within `ε` of a representation.
#[derive(Clone)]
pub struct DensityWitness<E> {
    pub n: usize,
    pub element: E,
    /// Certified upper bound on `‖h(element) − α‖₁`, below `ε`.
    pub bound: Scalar,
}

/// `Σ_{n<N} αₙ` with certified `‖h(·) − α‖₁ < ε`. For finite support the
/// error is computed exactly and `N` is the least that works; otherwise the
/// certificate is the enclosure width `2·t(N)`. `N = 0` is the zero element.
pub fn density_witness<L: PreIntegrationSpace>(
    l: &L,
    a: &L1Rep<L::Elem>,
    eps: &Scalar,
) -> Result<DensityWitness<L::Elem>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let zero = zero_of(l, a.sample())?;
    let partial = |n: usize| -> Result<L::Elem> {
        if n == 0 {
            return Ok(zero.clone());
        }
        let head = (0..n).map(|k| term(l, a, k)).collect::<Result<Vec<_>>>()?;
        sum_elems(l, &head)
    };
    if let Some(k) = a.support_len() {
        let full = closed_form(l, a)?;
        for n in 0..=k {
            let s = partial(n)?;
            let err = one_norm(l, &l.sub(&full, &s)?)?;
            if err < *eps {
                return Ok(DensityWitness { n, element: s, bound: err });
            }
        }
        unreachable!("the error is 0 at the support length");
    }
    for n in 0..=MAX_SEARCH {
        let bound = Scalar::from_int(2) * tail_bound(l, a, n)?;
        if bound < *eps {
            return Ok(DensityWitness { n, element: partial(n)?, bound });
        }
    }
    Err(Error::InsufficientCertificate(format!("no truncation within {eps}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMode {
    Constant,
    Geometric,
}

#[derive(Clone)]
pub struct CauchyLimit<E> {
    pub limit: L1Rep<E>,
    pub mode: LimitMode,
    /// Pairs `(k, m)` for which `‖limit − reps(m)‖₁ ≤ 2⁻ᵏ⁺¹` was verified.
    pub checked: usize,
}

/// The limit of a checked prefix `reps` of a `‖·‖₁`-Cauchy sequence with
/// modulus `modulus(k)`, `k = 0..K`. The prefix must either end constant
/// (the last two entries are `=_{I₁}`-equal; the limit is the telescoped
/// sum of differences flattened by [`lebesgue_flatten`]) or have canonical
/// differences forming a geometric progression (the limit gets a geometric
/// tail). Both the modulus and the limit bound are verified on the prefix.
pub fn cauchy_limit<L: PreIntegrationSpace>(
    l: &L,
    reps: &[L1Rep<L::Elem>],
    modulus: &[usize],
) -> Result<CauchyLimit<L::Elem>> {
    if reps.is_empty() || modulus.is_empty() {
        return Err(Error::InvalidArgument("empty sequence or modulus".into()));
    }
    if let Some(&m) = modulus.iter().find(|&&m| m >= reps.len()) {
        return Err(Error::IndexOutOfRange(m));
    }
    if modulus.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::ModulusViolation("modulus is not nondecreasing".into()));
    }
    for (k, &mk) in modulus.iter().enumerate() {
        let bound = Scalar::pow2_neg(k as u32);
        for m in mk..reps.len() {
            let d = l1_dist(l, &reps[mk], &reps[m])?;
            if d > bound {
                return Err(Error::ModulusViolation(format!(
                    "distance {d} between terms {mk} and {m} exceeds 2^-{k}"
                )));
            }
        }
    }
    let last = reps.len() - 1;
    let settled = last == 0 || l1_dist(l, &reps[last - 1], &reps[last])?.is_zero();
    let (limit, mode) = if settled {
        let mut gammas = vec![reps[modulus[0]].clone()];
        let mut points: Vec<usize> = modulus.to_vec();
        if *points.last().expect("nonempty") != last {
            points.push(last);
        }
        for w in points.windows(2) {
            if w[0] != w[1] {
                gammas.push(l1_sub(l, &reps[w[1]], &reps[w[0]])?);
            }
        }
        (lebesgue_flatten(l, &gammas)?.alpha, LimitMode::Constant)
    } else {
        (geometric_extension(l, &reps[modulus[0]..])?, LimitMode::Geometric)
    };
    let mut checked = 0;
    for (k, &mk) in modulus.iter().enumerate() {
        let bound = Scalar::pow2_neg(k as u32) * Scalar::from_int(2);
        for rep in &reps[mk..] {
            checked += 1;
            let d = l1_dist(l, &limit, rep)?;
            if d > bound {
                return Err(Error::ModulusViolation(format!("limit is {d} away from a term past modulus({k})")));
            }
        }
    }
    Ok(CauchyLimit { limit, mode, checked })
}

/// `c₀ + d₀ + ... + d_{K-2} + d_{K-1}·(1 + r + r² + ...)` when the canonical
/// differences satisfy `d_{k+1} = r·d_k` with `|r| < 1`.
fn geometric_extension<L: PreIntegrationSpace>(l: &L, reps: &[L1Rep<L::Elem>]) -> Result<L1Rep<L::Elem>> {
    let not_geometric = || Error::InsufficientCertificate("sequence is neither eventually constant nor geometric".into());
    let closed = reps.iter().map(|r| closed_form(l, r)).collect::<Result<Vec<_>>>()?;
    if closed.len() < 3 {
        return Err(not_geometric());
    }
    let diffs = closed
        .windows(2)
        .map(|w| l.normalize(&l.sub(&w[1], &w[0])?))
        .collect::<Result<Vec<_>>>()?;
    let fns = diffs.iter().map(|d| l.partial_fn(d)).collect::<Result<Vec<_>>>()?;
    let (x, v0) = fns[0].iter().find(|(_, v)| !v.is_zero()).ok_or_else(not_geometric)?;
    let v1 = fns[1].value(x).ok_or_else(not_geometric)?;
    let ratio = v1.checked_div(v0)?;
    if ratio.abs() >= Scalar::one() || fns.windows(2).any(|w| w[1] != w[0].scale(&ratio)) {
        return Err(not_geometric());
    }
    let mut prefix = vec![closed[0].clone()];
    prefix.extend(diffs[..diffs.len() - 1].iter().cloned());
    L1Rep::geometric(prefix, diffs[diffs.len() - 1].clone(), ratio)
}

/// The representations over a base space, with `+`, `·`, `|·|`, `∧₁`
/// acting on sequences and `∫α = Σₙ ∫αₙ`.
#[derive(Debug, Clone)]
pub struct L1Space<L> {
    base: L,
}

impl<L: PreIntegrationSpace> L1Space<L> {
    pub fn new(base: L) -> Self {
        L1Space { base }
    }

    pub fn base(&self) -> &L {
        &self.base
    }
}

impl<L> PreIntegrationSpace for L1Space<L>
where
    L: PreIntegrationSpace,
    L::Elem: fmt::Debug,
{
    type Elem = L1Rep<L::Elem>;

    fn carrier(&self) -> &Carrier {
        self.base.carrier()
    }

    fn scale(&self, a: &Scalar, i: &Self::Elem) -> Result<Self::Elem> {
        l1_scale(&self.base, a, i)
    }

    fn add(&self, i: &Self::Elem, j: &Self::Elem) -> Result<Self::Elem> {
        l1_add(&self.base, i, j)
    }

    fn abs(&self, i: &Self::Elem) -> Result<Self::Elem> {
        l1_abs(&self.base, i)
    }

    fn min_one(&self, i: &Self::Elem) -> Result<Self::Elem> {
        l1_min_one(&self.base, i)
    }

    fn partial_fn(&self, i: &Self::Elem) -> Result<RealPartialFn> {
        canonical(&self.base, i)
    }

    fn integral(&self, i: &Self::Elem) -> Result<Scalar> {
        integral(&self.base, i)
    }

    fn describe(&self, i: &Self::Elem) -> String {
        format!("{i:?}")
    }
}

/// Finite-support representations built from a base battery: each element
/// embedded, each neighbouring pair, and a three-term mix with shrinking
/// coefficients.
pub fn finite_battery<L: PreIntegrationSpace>(l: &L, base: &[L::Elem]) -> Result<Vec<L1Rep<L::Elem>>> {
    let n = base.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty base battery".into()));
    }
    let mut out = Vec::with_capacity(3 * n);
    for k in 0..n {
        let (b0, b1, b2) = (&base[k], &base[(k + 1) % n], &base[(k + 2) % n]);
        out.push(L1Rep::embed(b0.clone()));
        out.push(L1Rep::finite(vec![b0.clone(), b1.clone()])?);
        out.push(L1Rep::finite(vec![
            b0.clone(),
            l.scale(&Scalar::ratio(-1, 2)?, b1)?,
            l.scale(&Scalar::ratio(1, 4)?, b2)?,
        ])?);
    }
    Ok(out)
}
