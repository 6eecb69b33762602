//! Pre-measure spaces over finite index algebras, their instances and the
//! axiom checkers.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Scalar;
use crate::error::{Error, Result};
pub use crate::report::{AxiomReport, Evidence, Verdict};
use crate::sets::{positions, Bits, BoolPartialFn, Carrier, ComplementedSubset};

pub type Index = usize;

pub const DEFAULT_MAX_CARRIER: usize = 12;

/// The operations `∨`, `∧`, `∼` on a finite index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexAlgebra {
    /// All total boolean functions on `n` atoms. Index ids are the functions
    /// read as binary numbers with the first atom as the most significant
    /// bit, so `[0,1,1]` is index 3.
    Boolean { n: usize },
    /// Explicit operation tables, `table[i][j]`.
    Table {
        join: Vec<Vec<Index>>,
        meet: Vec<Vec<Index>>,
        diff: Vec<Vec<Index>>,
    },
}

impl IndexAlgebra {
    pub fn len(&self) -> usize {
        match self {
            IndexAlgebra::Boolean { n } => 1 << n,
            IndexAlgebra::Table { join, .. } => join.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn join(&self, i: Index, j: Index) -> Index {
        match self {
            IndexAlgebra::Boolean { .. } => i | j,
            IndexAlgebra::Table { join, .. } => join[i][j],
        }
    }

    pub fn meet(&self, i: Index, j: Index) -> Index {
        match self {
            IndexAlgebra::Boolean { .. } => i & j,
            IndexAlgebra::Table { meet, .. } => meet[i][j],
        }
    }

    pub fn diff(&self, i: Index, j: Index) -> Index {
        match self {
            IndexAlgebra::Boolean { .. } => i & !j,
            IndexAlgebra::Table { diff, .. } => diff[i][j],
        }
    }
}

/// Converts a binary-order index id to a mask with bit `k` for atom `k`.
fn boolean_ones(id: Index, n: usize) -> Bits {
    (0..n).filter(|k| id >> (n - 1 - k) & 1 == 1).fold(0, |acc, k| acc | 1 << k)
}

fn boolean_id(ones: Bits, n: usize) -> Index {
    (0..n).filter(|k| ones >> k & 1 == 1).fold(0, |acc, k| acc | 1 << (n - 1 - k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceKind {
    Dirac { x0: usize },
    DiracPartial { x0: usize },
    Counting { weights: Vec<Scalar> },
    Custom,
}

#[derive(Clone)]
pub struct PreMeasureSpace {
    carrier: Carrier,
    algebra: IndexAlgebra,
    lambda: Vec<ComplementedSubset>,
    mu: Vec<Scalar>,
    lookup: HashMap<ComplementedSubset, Index>,
    kind: SpaceKind,
}

impl PreMeasureSpace {
    /// `I = F(X, 2)` with `μ(f) = f(x0)`.
    pub fn mk_dirac(carrier: &Carrier, x0: &str, max_carrier: usize) -> Result<Self> {
        check_size(carrier, max_carrier)?;
        let p = carrier.position(x0)?;
        Self::boolean(carrier, SpaceKind::Dirac { x0: p }, |ones| {
            if ones >> p & 1 == 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    /// `I = F(X, 2)` with `μ(f) = Σ_{f(x)=1} w(x)`; every weight must be
    /// strictly positive and every atom must carry one.
    pub fn mk_counting(
        carrier: &Carrier,
        weights: &[(&str, Scalar)],
        max_carrier: usize,
    ) -> Result<Self> {
        check_size(carrier, max_carrier)?;
        let mut w: Vec<Option<Scalar>> = vec![None; carrier.len()];
        for (name, v) in weights {
            if !v.is_positive() {
                return Err(Error::InvalidArgument(format!("weight {v} at `{name}` is not positive")));
            }
            let k = carrier.position(name)?;
            if w[k].replace(v.clone()).is_some() {
                return Err(Error::InvalidArgument(format!("weight for `{name}` given twice")));
            }
        }
        let w: Vec<Scalar> = w
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::InvalidArgument(format!("no weight for `{}`", carrier.name(k)))
                })
            })
            .collect::<Result<_>>()?;
        let weights = w.clone();
        Self::boolean(carrier, SpaceKind::Counting { weights }, |ones| {
            positions(ones).map(|k| &w[k]).sum()
        })
    }

    fn boolean(carrier: &Carrier, kind: SpaceKind, mu_of: impl Fn(Bits) -> Scalar) -> Result<Self> {
        let n = carrier.len();
        let mut lambda = Vec::with_capacity(1 << n);
        let mut mu = Vec::with_capacity(1 << n);
        for id in 0..1usize << n {
            let ones = boolean_ones(id, n);
            lambda.push(ComplementedSubset::detachable(carrier, ones));
            mu.push(mu_of(ones));
        }
        let lookup = lambda.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(PreMeasureSpace {
            carrier: carrier.clone(),
            algebra: IndexAlgebra::Boolean { n },
            lambda,
            mu,
            lookup,
            kind,
        })
    }

    /// A Dirac space over an explicit list of boolean partial functions
    /// closed under join, meet and difference, all defined at `x0`.
    pub fn mk_dirac_partial(carrier: &Carrier, fns: &[BoolPartialFn], x0: &str) -> Result<Self> {
        let p = carrier.position(x0)?;
        if fns.is_empty() {
            return Err(Error::InvalidArgument("empty list of partial functions".into()));
        }
        let mut lambda = Vec::with_capacity(fns.len());
        let mut mu = Vec::with_capacity(fns.len());
        for f in fns {
            carrier.ensure_same(f.carrier())?;
            let v = f.value(p).ok_or_else(|| {
                Error::InvalidArgument(format!("{x0} is outside the domain of {}", f.delta().pattern()))
            })?;
            lambda.push(f.delta());
            mu.push(if v { Scalar::one() } else { Scalar::zero() });
        }
        Self::from_tables(carrier, lambda, mu, SpaceKind::DiracPartial { x0: p })
    }

    /// A space over explicit complemented subsets. The operation tables are
    /// derived from the subsets, so the list must be closed under `∨`, `∧`
    /// and `−`.
    pub fn from_parts(
        carrier: &Carrier,
        lambda: Vec<ComplementedSubset>,
        mu: Vec<Scalar>,
    ) -> Result<Self> {
        Self::from_tables(carrier, lambda, mu, SpaceKind::Custom)
    }

    fn from_tables(
        carrier: &Carrier,
        lambda: Vec<ComplementedSubset>,
        mu: Vec<Scalar>,
        kind: SpaceKind,
    ) -> Result<Self> {
        if carrier.is_empty() {
            return Err(Error::InvalidCarrier("a pre-measure space needs an inhabited carrier".into()));
        }
        if lambda.is_empty() || lambda.len() != mu.len() {
            return Err(Error::InvalidArgument("index list and measure differ in length".into()));
        }
        let mut lookup = HashMap::with_capacity(lambda.len());
        for (i, a) in lambda.iter().enumerate() {
            carrier.ensure_same(a.carrier())?;
            if lookup.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!("{} is listed twice", a.pattern())));
            }
        }
        for (i, m) in mu.iter().enumerate() {
            if m.is_negative() {
                return Err(Error::NegativeValue { element: lambda[i].pattern(), value: m.to_string() });
            }
        }
        let n = lambda.len();
        let table = |op: &dyn Fn(&ComplementedSubset, &ComplementedSubset) -> Result<ComplementedSubset>| {
            let mut t = vec![vec![0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let r = op(&lambda[i], &lambda[j])?;
                    t[i][j] = *lookup.get(&r).ok_or_else(|| Error::NotClosed(r.pattern()))?;
                }
            }
            Ok::<_, Error>(t)
        };
        let join = table(&|a, b| a.join(b))?;
        let meet = table(&|a, b| a.meet(b))?;
        let diff = table(&|a, b| a.minus(b))?;
        Ok(PreMeasureSpace {
            carrier: carrier.clone(),
            algebra: IndexAlgebra::Table { join, meet, diff },
            lambda,
            mu,
            lookup,
            kind,
        })
    }

    /// The same algebra with another measure. The result is not re-checked
    /// against the axioms; only nonnegativity is enforced.
    pub fn with_measure(&self, mu: Vec<Scalar>) -> Result<Self> {
        if mu.len() != self.len() {
            return Err(Error::InvalidArgument("measure has the wrong length".into()));
        }
        if let Some(i) = mu.iter().position(Scalar::is_negative) {
            return Err(Error::NegativeValue { element: self.display(i), value: mu[i].to_string() });
        }
        Ok(PreMeasureSpace { mu, kind: SpaceKind::Custom, ..self.clone() })
    }

    /// Replaces `μ(i)` by `value`.
    pub fn perturb(&self, i: Index, value: Scalar) -> Result<Self> {
        self.check_index(i)?;
        let mut mu = self.mu.clone();
        mu[i] = value;
        self.with_measure(mu)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn algebra(&self) -> &IndexAlgebra {
        &self.algebra
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn indices(&self) -> std::ops::Range<Index> {
        0..self.len()
    }

    pub fn lambda(&self, i: Index) -> &ComplementedSubset {
        &self.lambda[i]
    }

    pub fn mu(&self, i: Index) -> &Scalar {
        &self.mu[i]
    }

    pub fn join(&self, i: Index, j: Index) -> Index {
        self.algebra.join(i, j)
    }

    pub fn meet(&self, i: Index, j: Index) -> Index {
        self.algebra.meet(i, j)
    }

    pub fn diff(&self, i: Index, j: Index) -> Index {
        self.algebra.diff(i, j)
    }

    pub fn index_of(&self, a: &ComplementedSubset) -> Option<Index> {
        self.lookup.get(a).copied()
    }

    /// Index of the total function with the given atoms set to 1, if the
    /// algebra contains it.
    pub fn index_of_total(&self, ones: Bits) -> Option<Index> {
        match self.algebra {
            IndexAlgebra::Boolean { n } => Some(boolean_id(ones & self.carrier.full_mask(), n)),
            IndexAlgebra::Table { .. } => self.index_of(&ComplementedSubset::detachable(&self.carrier, ones)),
        }
    }

    pub fn check_index(&self, i: Index) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(i))
        }
    }

    /// The index as its `λ₀` pattern, e.g. `[1,_,0]`.
    pub fn display(&self, i: Index) -> String {
        self.lambda[i].pattern()
    }

    /// `i ≤ j :⇔ i ∧ j = i`.
    pub fn index_leq(&self, i: Index, j: Index) -> bool {
        self.meet(i, j) == i
    }

    /// `⋀ₖ (iₖ ∼ iₖ)`, whose `λ₀` is `(∅, ⋂ dom)`.
    pub fn bottom_on(&self, indices: &[Index]) -> Result<Index> {
        let (first, rest) = indices
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("bottomOn of an empty list".into()))?;
        self.check_index(*first)?;
        rest.iter().try_fold(self.diff(*first, *first), |acc, &i| {
            self.check_index(i)?;
            Ok(self.meet(acc, self.diff(i, i)))
        })
    }

    /// `∨` over a nonempty list.
    pub fn join_all(&self, indices: &[Index]) -> Option<Index> {
        indices.iter().copied().reduce(|a, b| self.join(a, b))
    }

    /// `∧` over a nonempty list.
    pub fn meet_all(&self, indices: &[Index]) -> Option<Index> {
        indices.iter().copied().reduce(|a, b| self.meet(a, b))
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SpaceKind::Dirac { x0 } => format!("dirac({})", self.carrier.name(*x0)),
            SpaceKind::DiracPartial { x0 } => format!("partial_dirac({})", self.carrier.name(*x0)),
            SpaceKind::Counting { .. } => "counting".into(),
            SpaceKind::Custom => "custom".into(),
        }
    }
}

impl fmt::Debug for PreMeasureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PreMeasureSpace")
            .field("carrier", &self.carrier)
            .field("kind", &self.describe())
            .field("indices", &self.len())
            .finish()
    }
}

impl PartialEq for PreMeasureSpace {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.lambda == other.lambda && self.mu == other.mu
    }
}

fn check_size(carrier: &Carrier, max_carrier: usize) -> Result<()> {
    if carrier.is_empty() {
        return Err(Error::InvalidCarrier("a pre-measure space needs an inhabited carrier".into()));
    }
    if carrier.len() > max_carrier {
        return Err(Error::CapExceeded(format!(
            "carrier has {} elements, limit is {max_carrier}",
            carrier.len()
        )));
    }
    Ok(())
}

fn pair_evidence(s: &PreMeasureSpace, idx: &[Index], values: Vec<Scalar>, detail: &str) -> Evidence {
    Evidence {
        indices: idx.iter().map(|&i| s.display(i)).collect(),
        values,
        detail: detail.into(),
        ..Default::default()
    }
}

/// `λ₀` is a homomorphism for `∨`, `∧`, `∼`, and
/// `μ(i) + μ(j) = μ(i ∨ j) + μ(i ∧ j)` for all pairs.
pub fn check_pms1(s: &PreMeasureSpace) -> AxiomReport {
    let mut cases = 0;
    for i in s.indices() {
        for j in s.indices() {
            cases += 1;
            let (a, b) = (s.lambda(i), s.lambda(j));
            let (ji, mi, di) = (s.join(i, j), s.meet(i, j), s.diff(i, j));
            let structural = [
                (ji, a.join(b), "lambda0(i join j) != lambda0(i) join lambda0(j)"),
                (mi, a.meet(b), "lambda0(i meet j) != lambda0(i) meet lambda0(j)"),
                (di, a.minus(b), "lambda0(i diff j) != lambda0(i) minus lambda0(j)"),
            ];
            for (k, expected, msg) in structural {
                if expected.as_ref() != Ok(s.lambda(k)) {
                    return AxiomReport::fails("PMS1", cases, pair_evidence(s, &[i, j], vec![], msg));
                }
            }
            let lhs = s.mu(i) + s.mu(j);
            let rhs = s.mu(ji) + s.mu(mi);
            if lhs != rhs {
                return AxiomReport::fails(
                    "PMS1",
                    cases,
                    pair_evidence(s, &[i, j], vec![lhs, rhs], "mu(i) + mu(j) != mu(i join j) + mu(i meet j)"),
                );
            }
        }
    }
    AxiomReport::holds("PMS1", cases)
}

/// `μ(i) = μ(i ∧ j) + μ(i ∼ j)` for all pairs.
pub fn check_pms2_star(s: &PreMeasureSpace) -> AxiomReport {
    let mut cases = 0;
    for i in s.indices() {
        for j in s.indices() {
            cases += 1;
            let rhs = s.mu(s.meet(i, j)) + s.mu(s.diff(i, j));
            if *s.mu(i) != rhs {
                return AxiomReport::fails(
                    "PMS2*",
                    cases,
                    pair_evidence(s, &[i, j], vec![s.mu(i).clone(), rhs], "mu(i) != mu(i meet j) + mu(i diff j)"),
                );
            }
        }
    }
    AxiomReport::holds("PMS2*", cases)
}

/// Some index has positive measure. The search runs from the last index
/// down, so on `F(X, 2)` the witness is the constant 1.
pub fn check_pms3(s: &PreMeasureSpace) -> AxiomReport {
    match s.indices().rev().find(|&i| s.mu(i).is_positive()) {
        Some(i) => AxiomReport::holds("PMS3", s.len() as u64 - i as u64)
            .with_witness(pair_evidence(s, &[i], vec![s.mu(i).clone()], "")),
        None => AxiomReport::fails("PMS3", s.len() as u64, Evidence::detail("every index has measure 0")),
    }
}

/// An eventually periodic index sequence `prefix, cycle, cycle, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicSeq {
    pub prefix: Vec<Index>,
    pub cycle: Vec<Index>,
}

impl PeriodicSeq {
    pub fn new(prefix: Vec<Index>, cycle: Vec<Index>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("periodic sequence with an empty cycle".into()));
        }
        Ok(PeriodicSeq { prefix, cycle })
    }

    pub fn constant(i: Index) -> Self {
        PeriodicSeq { prefix: vec![], cycle: vec![i] }
    }

    /// The `n`-th term, counting from 0.
    pub fn at(&self, n: usize) -> Index {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Every value the sequence takes: the prefix and one full period.
    pub fn values(&self) -> impl Iterator<Item = Index> + '_ {
        self.prefix.iter().chain(self.cycle.iter()).copied()
    }
}

/// Outcome of evaluating one sequence for PMS4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pms4Case {
    pub meet: String,
    pub limit: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The stable value of the running meets `α(0) ∧ ... ∧ α(m)`, scanning at
/// most `horizon` terms. Stability is confirmed over one extra period.
pub fn stable_meet(s: &PreMeasureSpace, seq: &PeriodicSeq, horizon: usize) -> Result<Index> {
    let need = seq.prefix.len() + 2 * seq.cycle.len();
    if need > horizon {
        return Err(Error::NotStabilized(horizon));
    }
    for n in 0..need {
        s.check_index(seq.at(n))?;
    }
    let settle = seq.prefix.len() + seq.cycle.len();
    let mut m = seq.at(0);
    for n in 1..settle {
        m = s.meet(m, seq.at(n));
    }
    let stable = m;
    for n in settle..need {
        m = s.meet(m, seq.at(n));
        if m != stable {
            return Err(Error::NotStabilized(n));
        }
    }
    Ok(stable)
}

pub fn pms4_case(s: &PreMeasureSpace, seq: &PeriodicSeq, horizon: usize) -> Result<Pms4Case> {
    let m = stable_meet(s, seq, horizon)?;
    let limit = s.mu(m).clone();
    let common = seq.values().fold(s.carrier().full_mask(), |acc, i| acc & s.lambda(i).one_bits());
    let witness = if limit.is_positive() {
        positions(common).next().map(|x| s.carrier().name(x).to_string())
    } else {
        None
    };
    Ok(Pms4Case { meet: s.display(m), limit, witness })
}

/// If the limit of `μ(⋀_{n≤m} α(n))` is positive, some atom lies in every
/// `λ₀¹(α(n))`. Checked on each given eventually periodic sequence.
pub fn check_pms4(s: &PreMeasureSpace, seqs: &[PeriodicSeq], horizon: usize) -> Result<(AxiomReport, Vec<Pms4Case>)> {
    let mut cases = Vec::with_capacity(seqs.len());
    let mut witness = None;
    for (k, seq) in seqs.iter().enumerate() {
        let c = pms4_case(s, seq, horizon)?;
        if c.limit.is_positive() {
            match &c.witness {
                None => {
                    let ev = Evidence {
                        indices: seq.values().map(|i| s.display(i)).collect(),
                        values: vec![c.limit.clone()],
                        detail: "positive limit but no atom in every one-part".into(),
                        ..Default::default()
                    };
                    cases.push(c);
                    return Ok((AxiomReport::fails("PMS4", k as u64 + 1, ev), cases));
                }
                Some(x) if witness.is_none() => {
                    witness = Some(Evidence {
                        indices: vec![c.meet.clone()],
                        elements: vec![x.clone()],
                        values: vec![c.limit.clone()],
                        detail: String::new(),
                    });
                }
                Some(_) => {}
            }
        }
        cases.push(c);
    }
    let mut r = AxiomReport::holds("PMS4", seqs.len() as u64);
    r.witness = witness;
    Ok((r, cases))
}

/// All constant sequences plus `random` seeded sequences with prefix and
/// cycle lengths up to 3.
pub fn pms4_battery(s: &PreMeasureSpace, random: usize, seed: u64) -> Vec<PeriodicSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PeriodicSeq> = s.indices().map(PeriodicSeq::constant).collect();
    for _ in 0..random {
        let plen = rng.random_range(0..=3);
        let clen = rng.random_range(1..=3);
        let prefix = (0..plen).map(|_| rng.random_range(0..s.len())).collect();
        let cycle = (0..clen).map(|_| rng.random_range(0..s.len())).collect();
        out.push(PeriodicSeq { prefix, cycle });
    }
    out
}

/// The four axioms at once; PMS4 runs on [`pms4_battery`].
pub fn check_pms_all(s: &PreMeasureSpace, seed: u64) -> Result<Vec<AxiomReport>> {
    let battery = pms4_battery(s, 32, seed);
    let (pms4, _) = check_pms4(s, &battery, 64)?;
    Ok(vec![check_pms1(s), check_pms2_star(s), check_pms3(s), pms4])
}

/// `χᵢ ≤ χⱼ` on the common domain implies `μ(i) ≤ μ(j)`.
pub fn check_monotone(s: &PreMeasureSpace) -> AxiomReport {
    let mut cases = 0;
    for i in s.indices() {
        for j in s.indices() {
            let (a, b) = (s.lambda(i), s.lambda(j));
            let common = a.dom_bits() & b.dom_bits();
            if a.one_bits() & common & !b.one_bits() != 0 {
                continue;
            }
            cases += 1;
            if s.mu(i) > s.mu(j) {
                return AxiomReport::fails(
                    "monotone",
                    cases,
                    pair_evidence(s, &[i, j], vec![s.mu(i).clone(), s.mu(j).clone()], "chi_i <= chi_j but mu(i) > mu(j)"),
                );
            }
        }
    }
    AxiomReport::holds("monotone", cases)
}

/// For every index `j` and every intersection `F` of index domains there
/// is `k` with `λ₀(k) = (λ₀¹(j) ∩ F, λ₀⁰(j) ∩ F)` and `μ(k) = μ(j)`.
pub fn check_restriction(s: &PreMeasureSpace) -> AxiomReport {
    let mut doms: BTreeSet<Bits> = s.indices().map(|i| s.lambda(i).dom_bits()).collect();
    loop {
        let extra: Vec<Bits> = doms
            .iter()
            .flat_map(|a| doms.iter().map(move |b| a & b))
            .filter(|d| !doms.contains(d))
            .collect();
        if extra.is_empty() {
            break;
        }
        doms.extend(extra);
    }
    let mut cases = 0;
    for j in s.indices() {
        for &f in &doms {
            cases += 1;
            let target = s.lambda(j).restrict(f);
            match s.index_of(&target) {
                Some(k) if s.mu(k) == s.mu(j) => {}
                found => {
                    let mut ev = pair_evidence(s, &[j], vec![], "no restriction with equal measure");
                    ev.elements = s.carrier().names(f);
                    if let Some(k) = found {
                        ev.values = vec![s.mu(j).clone(), s.mu(k).clone()];
                    }
                    return AxiomReport::fails("restriction", cases, ev);
                }
            }
        }
    }
    AxiomReport::holds("restriction", cases)
}
