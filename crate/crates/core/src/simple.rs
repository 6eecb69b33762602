//! Simple functions `Σ aₖ·χ_{iₖ}` over a pre-measure space.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::arith::{cotransitive_compare, Decision, Scalar};
use crate::error::{Error, Result};
use crate::premeasure::{Index, PreMeasureSpace};
use crate::sets::{positions, Bits, RealPartialFn};

/// Largest term count accepted by the full disjoint representation.
pub const MAX_DISJREP_TERMS: usize = 12;

/// Pointwise view of a simple function.
pub type SimpleView = RealPartialFn;

#[derive(Clone)]
pub struct SimpleTerms {
    space: Arc<PreMeasureSpace>,
    terms: Vec<(Scalar, Index)>,
}

impl SimpleTerms {
    pub fn new(space: &Arc<PreMeasureSpace>, terms: Vec<(Scalar, Index)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("a simple function needs at least one term".into()));
        }
        for (_, i) in &terms {
            space.check_index(*i)?;
        }
        Ok(SimpleTerms { space: space.clone(), terms })
    }

    /// `a·χᵢ`.
    pub fn single(space: &Arc<PreMeasureSpace>, a: Scalar, i: Index) -> Result<Self> {
        Self::new(space, vec![(a, i)])
    }

    pub fn space(&self) -> &Arc<PreMeasureSpace> {
        &self.space
    }

    pub fn terms(&self) -> &[(Scalar, Index)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn indices(&self) -> Vec<Index> {
        self.terms.iter().map(|(_, i)| *i).collect()
    }

    /// `⋂ₖ dom(iₖ)`.
    pub fn dom_bits(&self) -> Bits {
        self.terms
            .iter()
            .fold(self.space.carrier().full_mask(), |acc, (_, i)| acc & self.space.lambda(*i).dom_bits())
    }

    pub fn eval(&self) -> SimpleView {
        let dom = self.dom_bits();
        let values = positions(dom)
            .map(|x| {
                let v: Scalar = self
                    .terms
                    .iter()
                    .filter(|(_, i)| self.space.lambda(*i).one_bits() >> x & 1 == 1)
                    .map(|(a, _)| a)
                    .sum();
                (x, v)
            })
            .collect();
        RealPartialFn::new(self.space.carrier(), values).expect("domain inside the carrier")
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Equal domains and equal values.
    pub fn simple_eq(&self, other: &Self) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.eval() == other.eval())
    }

    /// `Σ aₖ·μ(iₖ)`.
    pub fn integral(&self) -> Scalar {
        self.terms.iter().map(|(a, i)| a * self.space.mu(*i)).sum()
    }

    /// `j_f := (⋀_{f(k)=1} iₖ) ∼ (⋁_{f(k)=0} iₖ)`; for the all-ones pattern
    /// the empty join is [`PreMeasureSpace::bottom_on`] of all terms. Bit `k`
    /// of `f` is `f(k)`.
    pub fn piece(&self, f: u64) -> Result<Index> {
        let n = self.terms.len();
        let ones: Vec<bool> = (0..n).map(|k| f >> k & 1 == 1).collect();
        self.piece_of(&ones)
    }

    fn piece_of(&self, ones: &[bool]) -> Result<Index> {
        let s = &self.space;
        let pick = |want: bool| {
            self.terms.iter().zip(ones).filter(|(_, &b)| b == want).map(|((_, i), _)| *i).collect::<Vec<_>>()
        };
        let meet = s
            .meet_all(&pick(true))
            .ok_or_else(|| Error::InvalidArgument("piece of the all-zeros pattern".into()))?;
        let join = match s.join_all(&pick(false)) {
            Some(j) => j,
            None => s.bottom_on(&self.indices())?,
        };
        Ok(s.diff(meet, join))
    }

    fn coeff_of(&self, f: u64) -> Scalar {
        self.terms
            .iter()
            .enumerate()
            .filter(|(k, _)| f >> k & 1 == 1)
            .map(|(_, (a, _))| a)
            .sum()
    }

    /// One term per nonzero pattern `f ∈ F({1..n}, 2)`, in increasing order of
    /// `f` read with term 1 as the lowest bit.
    pub fn disjrep(&self) -> Result<SimpleTerms> {
        let n = self.terms.len();
        if n > MAX_DISJREP_TERMS {
            return Err(Error::CapExceeded(format!(
                "disjoint representation of {n} terms, limit is {MAX_DISJREP_TERMS}"
            )));
        }
        let terms = (1u64..1 << n)
            .map(|f| Ok((self.coeff_of(f), self.piece(f)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimpleTerms { space: self.space.clone(), terms })
    }

    /// The pieces of [`SimpleTerms::disjrep`] whose one-part meets the
    /// domain, i.e. the patterns realized by some point. Falls back to
    /// `0·bottomOn` when no point realizes a nonzero pattern.
    pub fn normal_form(&self) -> Result<SimpleTerms> {
        let dom = self.dom_bits();
        // Patterns are stored highest term first so that the set order is
        // the numeric order of `f` with term 1 as the lowest bit.
        let mut patterns = BTreeSet::new();
        for x in positions(dom) {
            let rev: Vec<bool> = self.terms.iter().rev().map(|(_, i)| self.space.lambda(*i).one_bits() >> x & 1 == 1).collect();
            if rev.contains(&true) {
                patterns.insert(rev);
            }
        }
        let terms = if patterns.is_empty() {
            vec![(Scalar::zero(), self.space.bottom_on(&self.indices())?)]
        } else {
            patterns
                .into_iter()
                .map(|mut ones| {
                    ones.reverse();
                    let a = self.terms.iter().zip(&ones).filter(|(_, &b)| b).map(|((a, _), _)| a).sum();
                    Ok((a, self.piece_of(&ones)?))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(SimpleTerms { space: self.space.clone(), terms })
    }

    /// Whether the one-parts of distinct terms are disjoint.
    pub fn is_disjoint(&self) -> bool {
        let ones: Vec<Bits> = self.terms.iter().map(|(_, i)| self.space.lambda(*i).one_bits()).collect();
        (0..ones.len()).all(|k| (k + 1..ones.len()).all(|l| ones[k] & ones[l] == 0))
    }

    pub fn scale(&self, a: &Scalar) -> SimpleTerms {
        SimpleTerms {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(c, i)| (a * c, *i)).collect(),
        }
    }

    /// Concatenation of the term lists.
    pub fn add(&self, other: &Self) -> Result<SimpleTerms> {
        self.same_space(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SimpleTerms { space: self.space.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<SimpleTerms> {
        self.add(&other.scale(&-Scalar::one()))
    }

    fn map_pieces(&self, h: impl Fn(&Scalar) -> Scalar) -> Result<SimpleTerms> {
        let nf = self.normal_form()?;
        Ok(SimpleTerms {
            space: self.space.clone(),
            terms: nf.terms.iter().map(|(b, j)| (h(b), *j)).collect(),
        })
    }

    pub fn abs(&self) -> Result<SimpleTerms> {
        self.map_pieces(Scalar::abs)
    }

    pub fn min_one(&self) -> Result<SimpleTerms> {
        let one = Scalar::one();
        self.map_pieces(|b| b.min(&one))
    }

    /// `∧_a := ·_a ∘ ∧₁ ∘ ·_{1/a}`.
    pub fn min_const(&self, a: &Scalar) -> Result<SimpleTerms> {
        let inv = a.recip()?;
        Ok(self.scale(&inv).min_one()?.scale(a))
    }

    /// `φ_N(v)`: over disjoint terms, join the bases `i ∼ i` (when
    /// `a < 1/N`) or `i` (when `a > 1/(2N)`), decided by cotransitive
    /// comparison. Terms that are not already disjoint are first put in
    /// normal form.
    pub fn phi_n(&self, n: u64) -> Result<Index> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        let view = self.eval();
        if let Some((x, v)) = view.iter().find(|(_, v)| v.is_negative()) {
            return Err(Error::NegativeValue {
                element: self.space.carrier().name(x).to_string(),
                value: v.to_string(),
            });
        }
        let disjoint = if self.is_disjoint() { self.clone() } else { self.normal_form()? };
        let n = Scalar::from_int(n as i64);
        let hi = n.recip()?;
        let lo = (&n + &n).recip()?;
        let s = &self.space;
        let mut acc: Option<Index> = None;
        for (a, i) in &disjoint.terms {
            let base = match cotransitive_compare(a, &lo, &hi)? {
                Decision::BelowHi => s.diff(*i, *i),
                Decision::AboveLo => *i,
            };
            acc = Some(match acc {
                None => base,
                Some(prev) => s.join(prev, base),
            });
        }
        Ok(acc.expect("at least one term"))
    }
}

/// `φ_N(v)` with its three properties evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub index: String,
    pub measure: Scalar,
    /// `2N·∫v`.
    pub bound: Scalar,
    /// `dom φ_N(v) ⊆ dom v`.
    pub dom_contained: bool,
    /// `v(x) < 1/N` on the zero part of `φ_N(v)`.
    pub zero_part_small: bool,
    /// `μ(φ_N(v)) ≤ 2N·∫v`.
    pub measure_bounded: bool,
}

impl PhiReport {
    pub fn all_hold(&self) -> bool {
        self.dom_contained && self.zero_part_small && self.measure_bounded
    }
}

impl SimpleTerms {
    pub fn phi_n_report(&self, n: u64) -> Result<PhiReport> {
        let phi = self.phi_n(n)?;
        let s = &self.space;
        let view = self.eval();
        let dom = self.dom_bits();
        let lam = s.lambda(phi);
        let inv = Scalar::from_int(n as i64).recip()?;
        let zero_part_small = positions(lam.zero_bits()).all(|x| view.value(x).is_some_and(|v| *v < inv));
        let bound = Scalar::from_int(2 * n as i64) * self.integral();
        Ok(PhiReport {
            index: s.display(phi),
            measure: s.mu(phi).clone(),
            dom_contained: lam.dom_bits() & !dom == 0,
            zero_part_small,
            measure_bounded: *s.mu(phi) <= bound,
            bound,
        })
    }
}

impl PartialEq for SimpleTerms {
    /// Syntactic equality of term lists; see [`SimpleTerms::simple_eq`] for
    /// extensional equality.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space)
    }
}

impl fmt::Debug for SimpleTerms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .terms
            .iter()
            .map(|(a, i)| format!("({a},{})", self.space.display(*i)))
            .collect();
        write!(f, "[{}]", cells.join(","))
    }
}

struct Term<'a>(&'a Scalar, String);

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("coeff", self.0)?;
        m.serialize_entry("index", &self.1)?;
        m.end()
    }
}

impl Serialize for SimpleTerms {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (a, i) in &self.terms {
            seq.serialize_element(&Term(a, self.space.display(*i)))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::premeasure::DEFAULT_MAX_CARRIER;
    use crate::sets::Carrier;

    fn q(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn dirac() -> Arc<PreMeasureSpace> {
        let c = Carrier::new(["p", "q", "r"]).unwrap();
        Arc::new(PreMeasureSpace::mk_dirac(&c, "p", DEFAULT_MAX_CARRIER).unwrap())
    }

    fn idx(s: &PreMeasureSpace, pattern: &str) -> Index {
        let ones = pattern.bytes().enumerate().filter(|(_, b)| *b == b'1').fold(0, |acc, (k, _)| acc | 1 << k);
        s.index_of_total(ones).unwrap()
    }

    fn st(s: &Arc<PreMeasureSpace>, terms: &[(&str, &str)]) -> SimpleTerms {
        SimpleTerms::new(s, terms.iter().map(|(a, p)| (q(a), idx(s, p))).collect()).unwrap()
    }

    fn values(v: &SimpleView) -> Vec<String> {
        v.iter().map(|(_, x)| x.to_string()).collect()
    }

    #[test]
    fn eval_examples() {
        let s = dirac();
        let v = st(&s, &[("2", "110"), ("3", "011")]);
        assert_eq!(values(&v.eval()), vec!["2/1", "5/1", "3/1"]);
        let z = st(&s, &[("0", "101")]);
        assert!(z.eval().iter().all(|(_, x)| x.is_zero()));
        let c = st(&s, &[("1", "101"), ("-1", "101")]);
        assert!(c.eval().iter().all(|(_, x)| x.is_zero()));
        assert!(SimpleTerms::new(&s, vec![]).is_err());
    }

    #[test]
    fn simple_eq_examples() {
        let s = dirac();
        let v = st(&s, &[("2", "110"), ("3", "011")]);
        let w = st(&s, &[("3", "011"), ("2", "110")]);
        assert!(v.simple_eq(&w).unwrap());
        assert!(st(&s, &[("1", "110"), ("1", "110")]).simple_eq(&st(&s, &[("2", "110")])).unwrap());
        assert!(!st(&s, &[("1", "100")]).simple_eq(&st(&s, &[("1", "010")])).unwrap());
    }

    #[test]
    fn integral_examples() {
        let s = dirac();
        assert_eq!(st(&s, &[("2", "110"), ("3", "011")]).integral(), q("2"));
        assert_eq!(st(&s, &[("7/3", "111")]).integral(), q("7/3"));
    }

    #[test]
    fn disjrep_single_term() {
        let s = dirac();
        let v = st(&s, &[("5/2", "110")]);
        let d = v.disjrep().unwrap();
        let i = idx(&s, "110");
        let bottom = s.diff(i, i);
        assert_eq!(d.terms(), &[(q("5/2"), s.diff(i, bottom))]);
        assert!(d.simple_eq(&v).unwrap());
    }

    #[test]
    fn disjrep_two_terms() {
        let s = dirac();
        let v = st(&s, &[("2", "110"), ("3", "011")]);
        let d = v.disjrep().unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.is_disjoint());
        assert!(d.simple_eq(&v).unwrap());
        assert_eq!(d.integral(), v.integral());
        assert!(d.disjrep().unwrap().simple_eq(&d).unwrap());
    }

    #[test]
    fn normal_form_matches() {
        let s = dirac();
        let v = st(&s, &[("2", "110"), ("-3", "011"), ("1/2", "001")]);
        let nf = v.normal_form().unwrap();
        assert!(nf.is_disjoint());
        assert!(nf.simple_eq(&v).unwrap());
        assert_eq!(nf.integral(), v.integral());
        let zero = st(&s, &[("4", "000")]);
        let nf = zero.normal_form().unwrap();
        assert_eq!(nf.len(), 1);
        assert!(nf.simple_eq(&zero).unwrap());
    }

    #[test]
    fn normal_form_of_long_sums() {
        let s = dirac();
        let terms: Vec<(&str, &str)> = (0..100).map(|k| if k % 2 == 0 { ("1/2", "110") } else { ("1", "011") }).collect();
        let v = st(&s, &terms);
        let nf = v.normal_form().unwrap();
        assert!(nf.is_disjoint());
        assert!(nf.simple_eq(&v).unwrap());
        assert_eq!(values(&nf.eval()), vec!["25/1", "75/1", "50/1"]);
    }

    #[test]
    fn abs_and_min_one() {
        let s = dirac();
        let v = st(&s, &[("-2", "110")]);
        assert_eq!(v.abs().unwrap().eval(), v.eval().abs());
        assert_eq!(values(&v.abs().unwrap().eval()), vec!["2/1", "2/1", "0/1"]);
        let w = st(&s, &[("2", "100")]);
        assert_eq!(values(&w.min_one().unwrap().eval()), vec!["1/1", "0/1", "0/1"]);
        assert!(w.min_const(&Scalar::zero()).is_err());
        assert_eq!(w.min_const(&q("1/2")).unwrap().eval(), w.eval().min_const(&q("1/2")));
    }

    #[test]
    fn add_integrates_additively() {
        let s = dirac();
        let v = st(&s, &[("2", "110")]);
        let w = st(&s, &[("-1/3", "101"), ("4", "011")]);
        assert_eq!(v.add(&w).unwrap().integral(), v.integral() + w.integral());
    }

    #[test]
    fn phi_n_examples() {
        let s = dirac();
        let i = idx(&s, "110");
        let v = st(&s, &[("1/4", "110")]);
        let phi = v.phi_n(1).unwrap();
        assert_eq!(phi, s.diff(i, i));
        assert!(s.mu(phi).is_zero());
        let w = st(&s, &[("2", "110")]);
        assert_eq!(w.phi_n(1).unwrap(), i);
        assert!(st(&s, &[("-1", "110")]).phi_n(1).is_err());
    }

    #[test]
    fn serializes_terms() {
        let s = dirac();
        let v = st(&s, &[("2", "110")]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"[{"coeff":"2/1","index":"[1,1,0]"}]"#
        );
    }
}
