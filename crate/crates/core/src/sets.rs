//! Finite carriers with denial apartness, their subsets, boolean and real
//! partial functions, and complemented subsets with their algebra.
//!
//! Carriers hold at most [`MAX_CARRIER`] atoms so that every subset is a
//! bitmask; bit `k` stands for the `k`-th declared element. Embeddings are
//! always inclusions, so equality of subsets is equality of member sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::Scalar;
use crate::error::{Error, Result};

pub type Bits = u64;

pub const MAX_CARRIER: usize = 64;

struct CarrierData {
    elements: Vec<String>,
    positions: HashMap<String, usize>,
}

/// A finite ordered set of distinct atoms. Apartness is `x != y`.
#[derive(Clone)]
pub struct Carrier(Arc<CarrierData>);

impl Carrier {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.len() > MAX_CARRIER {
            return Err(Error::InvalidCarrier(format!(
                "{} elements exceed the limit of {MAX_CARRIER}",
                elements.len()
            )));
        }
        let mut positions = HashMap::with_capacity(elements.len());
        for (k, e) in elements.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidCarrier("empty atom name".into()));
            }
            if positions.insert(e.clone(), k).is_some() {
                return Err(Error::InvalidCarrier(format!("duplicate atom `{e}`")));
            }
        }
        Ok(Carrier(Arc::new(CarrierData { elements, positions })))
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.0.elements
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.0.elements[pos]
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.0
            .positions
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Mask with one bit per element.
    pub fn full_mask(&self) -> Bits {
        mask_of_len(self.len())
    }

    /// Denial inequality.
    pub fn apart(&self, x: usize, y: usize) -> bool {
        x != y
    }

    pub fn names(&self, bits: Bits) -> Vec<String> {
        positions(bits).map(|k| self.name(k).to_string()).collect()
    }

    pub fn mask_of(&self, names: &[&str]) -> Result<Bits> {
        names
            .iter()
            .try_fold(0, |acc, n| Ok(acc | (1 << self.position(n)?)))
    }

    pub(crate) fn ensure_same(&self, other: &Carrier) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elements == other.0.elements
    }
}

impl Eq for Carrier {}

impl Hash for Carrier {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.elements.hash(state);
    }
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.elements.join(","))
    }
}

pub(crate) fn mask_of_len(n: usize) -> Bits {
    if n >= 64 {
        Bits::MAX
    } else {
        (1 << n) - 1
    }
}

/// Iterates the set bit positions of `bits` in increasing order.
pub fn positions(bits: Bits) -> impl Iterator<Item = usize> {
    let mut rest = bits;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(k)
        }
    })
}

/// A subset of a carrier, embedded by inclusion.
#[derive(Clone, PartialEq, Eq)]
pub struct Subset {
    carrier: Carrier,
    bits: Bits,
}

impl Subset {
    pub fn new(carrier: &Carrier, names: &[&str]) -> Result<Self> {
        Ok(Subset { carrier: carrier.clone(), bits: carrier.mask_of(names)? })
    }

    pub fn from_bits(carrier: &Carrier, bits: Bits) -> Result<Self> {
        if bits & !carrier.full_mask() != 0 {
            return Err(Error::InvalidArgument("subset bits outside the carrier".into()));
        }
        Ok(Subset { carrier: carrier.clone(), bits })
    }

    pub fn empty(carrier: &Carrier) -> Self {
        Subset { carrier: carrier.clone(), bits: 0 }
    }

    pub fn full(carrier: &Carrier) -> Self {
        Subset { carrier: carrier.clone(), bits: carrier.full_mask() }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn bits(&self) -> Bits {
        self.bits
    }

    pub fn contains(&self, pos: usize) -> bool {
        pos < 64 && self.bits >> pos & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn members(&self) -> impl Iterator<Item = usize> {
        positions(self.bits)
    }

    pub fn names(&self) -> Vec<String> {
        self.carrier.names(self.bits)
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.carrier.ensure_same(&other.carrier)?;
        Ok(Subset { carrier: self.carrier.clone(), bits: self.bits | other.bits })
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.carrier.ensure_same(&other.carrier)?;
        Ok(Subset { carrier: self.carrier.clone(), bits: self.bits & other.bits })
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.carrier == other.carrier && self.bits & !other.bits == 0
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.names().serialize(s)
    }
}

/// A pair `(one, zero)` of disjoint subsets of the same carrier.
#[derive(Clone)]
pub struct ComplementedSubset {
    carrier: Carrier,
    one: Bits,
    zero: Bits,
}

impl ComplementedSubset {
    pub fn new(one: &Subset, zero: &Subset) -> Result<Self> {
        one.carrier.ensure_same(&zero.carrier)?;
        Self::from_bits(&one.carrier, one.bits, zero.bits)
    }

    pub fn from_names(carrier: &Carrier, one: &[&str], zero: &[&str]) -> Result<Self> {
        Self::from_bits(carrier, carrier.mask_of(one)?, carrier.mask_of(zero)?)
    }

    pub fn from_bits(carrier: &Carrier, one: Bits, zero: Bits) -> Result<Self> {
        let full = carrier.full_mask();
        if (one | zero) & !full != 0 {
            return Err(Error::InvalidArgument("complemented subset outside the carrier".into()));
        }
        if one & zero != 0 {
            let k = (one & zero).trailing_zeros() as usize;
            return Err(Error::NotDisjoint(carrier.name(k).to_string()));
        }
        Ok(ComplementedSubset { carrier: carrier.clone(), one, zero })
    }

    /// `(∅, X)`.
    pub fn bottom(carrier: &Carrier) -> Self {
        ComplementedSubset { carrier: carrier.clone(), one: 0, zero: carrier.full_mask() }
    }

    /// The detachable complemented subset `([f = 1], [f = 0])` of a total
    /// boolean function given by its values in carrier order.
    pub fn detachable(carrier: &Carrier, ones: Bits) -> Self {
        let full = carrier.full_mask();
        ComplementedSubset { carrier: carrier.clone(), one: ones & full, zero: !ones & full }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn one(&self) -> Subset {
        Subset { carrier: self.carrier.clone(), bits: self.one }
    }

    pub fn zero(&self) -> Subset {
        Subset { carrier: self.carrier.clone(), bits: self.zero }
    }

    pub fn one_bits(&self) -> Bits {
        self.one
    }

    pub fn zero_bits(&self) -> Bits {
        self.zero
    }

    /// `one ∪ zero`, the domain of the characteristic function.
    pub fn dom_bits(&self) -> Bits {
        self.one | self.zero
    }

    pub fn dom(&self) -> Subset {
        Subset { carrier: self.carrier.clone(), bits: self.dom_bits() }
    }

    pub fn is_total(&self) -> bool {
        self.dom_bits() == self.carrier.full_mask()
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.carrier.ensure_same(&other.carrier)?;
        let (a1, a0, b1, b0) = (self.one, self.zero, other.one, other.zero);
        Ok(self.with_bits((a1 & b1) | (a1 & b0) | (a0 & b1), a0 & b0))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.carrier.ensure_same(&other.carrier)?;
        let (a1, a0, b1, b0) = (self.one, self.zero, other.one, other.zero);
        Ok(self.with_bits(a1 & b1, (a1 & b0) | (a0 & b1) | (a0 & b0)))
    }

    pub fn not(&self) -> Self {
        self.with_bits(self.zero, self.one)
    }

    /// `A − B := A ∧ (−B)`.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.meet(&other.not())
    }

    /// `A ⊆ B :⇔ A¹ ⊆ B¹ and B⁰ ⊆ A⁰`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.one & !other.one == 0 && other.zero & !self.zero == 0
    }

    /// Restriction `(A¹ ∩ F, A⁰ ∩ F)`.
    pub fn restrict(&self, f: Bits) -> Self {
        self.with_bits(self.one & f, self.zero & f)
    }

    /// Characteristic partial function: 1 on `one`, 0 on `zero`.
    pub fn chi(&self) -> BoolPartialFn {
        BoolPartialFn { carrier: self.carrier.clone(), dom: self.dom_bits(), ones: self.one }
    }

    /// Every complemented subset of `carrier` (3^n of them).
    pub fn enumerate(carrier: &Carrier) -> Vec<Self> {
        let n = carrier.len();
        let count = 3usize.pow(n as u32);
        (0..count)
            .map(|mut code| {
                let (mut one, mut zero) = (0, 0);
                for k in 0..n {
                    match code % 3 {
                        1 => one |= 1 << k,
                        2 => zero |= 1 << k,
                        _ => {}
                    }
                    code /= 3;
                }
                ComplementedSubset { carrier: carrier.clone(), one, zero }
            })
            .collect()
    }

    /// Pattern notation in carrier order, e.g. `[1,_,0]`.
    pub fn pattern(&self) -> String {
        let cells: Vec<&str> = (0..self.carrier.len())
            .map(|k| {
                if self.one >> k & 1 == 1 {
                    "1"
                } else if self.zero >> k & 1 == 1 {
                    "0"
                } else {
                    "_"
                }
            })
            .collect();
        format!("[{}]", cells.join(","))
    }

    /// Inverse of [`ComplementedSubset::pattern`] on a cell list.
    pub fn from_pattern(carrier: &Carrier, cells: &[Option<bool>]) -> Result<Self> {
        if cells.len() != carrier.len() {
            return Err(Error::InvalidArgument(format!(
                "pattern has {} cells, carrier has {} elements",
                cells.len(),
                carrier.len()
            )));
        }
        let (mut one, mut zero) = (0, 0);
        for (k, c) in cells.iter().enumerate() {
            match c {
                Some(true) => one |= 1 << k,
                Some(false) => zero |= 1 << k,
                None => {}
            }
        }
        Ok(ComplementedSubset { carrier: carrier.clone(), one, zero })
    }

    fn with_bits(&self, one: Bits, zero: Bits) -> Self {
        ComplementedSubset { carrier: self.carrier.clone(), one, zero }
    }
}

impl PartialEq for ComplementedSubset {
    fn eq(&self, other: &Self) -> bool {
        self.one == other.one && self.zero == other.zero && self.carrier == other.carrier
    }
}

impl Eq for ComplementedSubset {}

impl Hash for ComplementedSubset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.one.hash(state);
        self.zero.hash(state);
    }
}

impl fmt::Debug for ComplementedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.one(), self.zero())
    }
}

impl Serialize for ComplementedSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("one", &self.one())?;
        m.serialize_entry("zero", &self.zero())?;
        m.end()
    }
}

/// `δ(f) := ([f = 1], [f = 0])`.
pub fn delta(f: &BoolPartialFn) -> ComplementedSubset {
    ComplementedSubset { carrier: f.carrier.clone(), one: f.ones, zero: f.dom & !f.ones }
}

/// A partial function into `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolPartialFn {
    carrier: Carrier,
    dom: Bits,
    ones: Bits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Join,
    Meet,
    Not,
    Minus,
}

impl BoolPartialFn {
    pub fn from_bits(carrier: &Carrier, dom: Bits, ones: Bits) -> Result<Self> {
        if dom & !carrier.full_mask() != 0 || ones & !dom != 0 {
            return Err(Error::InvalidArgument("boolean function outside its domain".into()));
        }
        Ok(BoolPartialFn { carrier: carrier.clone(), dom, ones })
    }

    /// From `(element, value)` pairs; the domain is the listed elements.
    pub fn from_values(carrier: &Carrier, values: &[(&str, bool)]) -> Result<Self> {
        let (mut dom, mut ones) = (0, 0);
        for (name, v) in values {
            let k = carrier.position(name)?;
            dom |= 1 << k;
            if *v {
                ones |= 1 << k;
            }
        }
        Ok(BoolPartialFn { carrier: carrier.clone(), dom, ones })
    }

    pub fn total(carrier: &Carrier, ones: Bits) -> Self {
        let full = carrier.full_mask();
        BoolPartialFn { carrier: carrier.clone(), dom: full, ones: ones & full }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dom(&self) -> Subset {
        Subset { carrier: self.carrier.clone(), bits: self.dom }
    }

    pub fn dom_bits(&self) -> Bits {
        self.dom
    }

    pub fn ones_bits(&self) -> Bits {
        self.ones
    }

    pub fn value(&self, pos: usize) -> Option<bool> {
        (self.dom >> pos & 1 == 1).then(|| self.ones >> pos & 1 == 1)
    }

    /// Pointwise max/min/`1 − f`/`min(f, 1 − g)` on the intersection of
    /// domains. `g` is ignored for [`BoolOp::Not`] and required otherwise.
    pub fn apply(op: BoolOp, f: &Self, g: Option<&Self>) -> Result<Self> {
        let binary = |g: Option<&Self>| -> Result<(Bits, Bits)> {
            let g = g.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs two operands")))?;
            f.carrier.ensure_same(&g.carrier)?;
            Ok((f.dom & g.dom, g.ones))
        };
        let (dom, ones) = match op {
            BoolOp::Not => (f.dom, f.dom & !f.ones),
            BoolOp::Join => {
                let (dom, g1) = binary(g)?;
                (dom, (f.ones | g1) & dom)
            }
            BoolOp::Meet => {
                let (dom, g1) = binary(g)?;
                (dom, f.ones & g1 & dom)
            }
            BoolOp::Minus => {
                let (dom, g1) = binary(g)?;
                (dom, f.ones & !g1 & dom)
            }
        };
        Ok(BoolPartialFn { carrier: f.carrier.clone(), dom, ones })
    }

    pub fn join(&self, g: &Self) -> Result<Self> {
        Self::apply(BoolOp::Join, self, Some(g))
    }

    pub fn meet(&self, g: &Self) -> Result<Self> {
        Self::apply(BoolOp::Meet, self, Some(g))
    }

    pub fn minus(&self, g: &Self) -> Result<Self> {
        Self::apply(BoolOp::Minus, self, Some(g))
    }

    pub fn not(&self) -> Self {
        BoolPartialFn { carrier: self.carrier.clone(), dom: self.dom, ones: self.dom & !self.ones }
    }

    pub fn delta(&self) -> ComplementedSubset {
        delta(self)
    }

    /// `f(x) ≠ f(y) ⇒ x ≠ y` over every pair of the domain.
    pub fn is_strongly_extensional(&self) -> bool {
        let dom: Vec<usize> = positions(self.dom).collect();
        dom.iter().all(|&x| {
            dom.iter()
                .all(|&y| self.value(x) == self.value(y) || self.carrier.apart(x, y))
        })
    }

    /// Every partial boolean function on `carrier` (3^n of them).
    pub fn enumerate(carrier: &Carrier) -> Vec<Self> {
        ComplementedSubset::enumerate(carrier).iter().map(ComplementedSubset::chi).collect()
    }

    /// Every total boolean function on `carrier` (2^n of them), in increasing
    /// order of the `ones` mask.
    pub fn enumerate_total(carrier: &Carrier) -> Vec<Self> {
        (0..=carrier.full_mask()).map(|m| Self::total(carrier, m)).collect()
    }

    pub fn to_real(&self) -> RealPartialFn {
        RealPartialFn {
            carrier: self.carrier.clone(),
            values: positions(self.dom)
                .map(|k| (k, if self.ones >> k & 1 == 1 { Scalar::one() } else { Scalar::zero() }))
                .collect(),
        }
    }
}

impl fmt::Debug for BoolPartialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.delta().pattern())
    }
}

/// Whether `x` and `y` are separated by some total boolean function, i.e.
/// `f(x) = 1` and `f(y) = 0`. Searches all of `F(X, 2)`.
pub fn detachably_apart(carrier: &Carrier, x: usize, y: usize) -> bool {
    (0..=carrier.full_mask()).any(|f| f >> x & 1 == 1 && f >> y & 1 == 0)
}

/// A partial function into the scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct RealPartialFn {
    carrier: Carrier,
    values: BTreeMap<usize, Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealOp {
    Add,
    Mul,
    Min,
    Max,
    Scale(Scalar),
    Abs,
    MinConst(Scalar),
}

impl RealPartialFn {
    pub fn new(carrier: &Carrier, values: BTreeMap<usize, Scalar>) -> Result<Self> {
        if let Some((&k, _)) = values.iter().next_back() {
            if k >= carrier.len() {
                return Err(Error::IndexOutOfRange(k));
            }
        }
        Ok(RealPartialFn { carrier: carrier.clone(), values })
    }

    pub fn from_named(carrier: &Carrier, values: &[(&str, Scalar)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (name, v) in values {
            map.insert(carrier.position(name)?, v.clone());
        }
        Ok(RealPartialFn { carrier: carrier.clone(), values: map })
    }

    /// The constant `c` on `dom`.
    pub fn constant(carrier: &Carrier, dom: Bits, c: &Scalar) -> Self {
        RealPartialFn {
            carrier: carrier.clone(),
            values: positions(dom & carrier.full_mask()).map(|k| (k, c.clone())).collect(),
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dom_bits(&self) -> Bits {
        self.values.keys().fold(0, |acc, k| acc | 1 << k)
    }

    pub fn dom(&self) -> Subset {
        Subset { carrier: self.carrier.clone(), bits: self.dom_bits() }
    }

    pub fn value(&self, pos: usize) -> Option<&Scalar> {
        self.values.get(&pos)
    }

    pub fn values(&self) -> &BTreeMap<usize, Scalar> {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    /// Binary ops act on the intersection of domains; unary ops on `dom(f)`.
    pub fn apply(op: &RealOp, f: &Self, g: Option<&Self>) -> Result<Self> {
        let unary = |h: &dyn Fn(&Scalar) -> Scalar| RealPartialFn {
            carrier: f.carrier.clone(),
            values: f.values.iter().map(|(k, v)| (*k, h(v))).collect(),
        };
        let binary = |h: &dyn Fn(&Scalar, &Scalar) -> Scalar| -> Result<RealPartialFn> {
            let g = g.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs two operands")))?;
            f.carrier.ensure_same(&g.carrier)?;
            Ok(RealPartialFn {
                carrier: f.carrier.clone(),
                values: f
                    .values
                    .iter()
                    .filter_map(|(k, a)| g.values.get(k).map(|b| (*k, h(a, b))))
                    .collect(),
            })
        };
        match op {
            RealOp::Add => binary(&|a, b| a + b),
            RealOp::Mul => binary(&|a, b| a * b),
            RealOp::Min => binary(&|a, b| a.min(b)),
            RealOp::Max => binary(&|a, b| a.max(b)),
            RealOp::Scale(c) => Ok(unary(&|a| c * a)),
            RealOp::Abs => Ok(unary(&|a| a.abs())),
            RealOp::MinConst(c) => Ok(unary(&|a| a.min(c))),
        }
    }

    pub fn add(&self, g: &Self) -> Result<Self> {
        Self::apply(&RealOp::Add, self, Some(g))
    }

    pub fn sub(&self, g: &Self) -> Result<Self> {
        self.add(&g.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        RealPartialFn {
            carrier: self.carrier.clone(),
            values: self.values.iter().map(|(k, v)| (*k, c * v)).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        RealPartialFn {
            carrier: self.carrier.clone(),
            values: self.values.iter().map(|(k, v)| (*k, v.abs())).collect(),
        }
    }

    pub fn min_const(&self, c: &Scalar) -> Self {
        RealPartialFn {
            carrier: self.carrier.clone(),
            values: self.values.iter().map(|(k, v)| (*k, v.min(c))).collect(),
        }
    }

    /// Restriction to `dom ∩ bits`.
    pub fn restrict(&self, bits: Bits) -> Self {
        RealPartialFn {
            carrier: self.carrier.clone(),
            values: self
                .values
                .iter()
                .filter(|(k, _)| bits >> **k & 1 == 1)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Largest `|f(x)|`, zero on an empty domain.
    pub fn sup_abs(&self) -> Scalar {
        self.values.values().fold(Scalar::zero(), |m, v| Scalar::max(&m, &v.abs()))
    }

    /// Smallest nonzero `|f(x)|`, if any.
    pub fn min_nonzero_abs(&self) -> Option<Scalar> {
        self.values
            .values()
            .filter(|v| !v.is_zero())
            .map(Scalar::abs)
            .min()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.values().all(|v| !v.is_negative())
    }

    /// `f ≤ g` on the common domain.
    pub fn le_on_common(&self, g: &Self) -> bool {
        self.values
            .iter()
            .all(|(k, a)| g.values.get(k).is_none_or(|b| a <= b))
    }

    pub fn is_strongly_extensional(&self) -> bool {
        self.values.iter().all(|(x, a)| {
            self.values
                .iter()
                .all(|(y, b)| a == b || self.carrier.apart(*x, *y))
        })
    }
}

impl fmt::Debug for RealPartialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{}↦{}", self.carrier.name(*k), v))
            .collect();
        write!(f, "{{{}}}", cells.join(", "))
    }
}

impl Serialize for RealPartialFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.values.len()))?;
        for (k, v) in &self.values {
            m.serialize_entry(self.carrier.name(*k), v)?;
        }
        m.end()
    }
}

/// A family of subsets of one carrier indexed by a finite list.
#[derive(Debug, Clone)]
pub struct SubsetFamily {
    carrier: Carrier,
    members: Vec<(String, Subset)>,
}

impl SubsetFamily {
    /// Rejects members over another carrier and repeated indices that map to
    /// different subsets.
    pub fn new(carrier: &Carrier, members: Vec<(String, Subset)>) -> Result<Self> {
        let mut seen: HashMap<&str, &Subset> = HashMap::new();
        for (i, s) in &members {
            carrier.ensure_same(s.carrier())?;
            if let Some(prev) = seen.insert(i, s) {
                if prev != s {
                    return Err(Error::InvalidArgument(format!(
                        "index `{i}` is assigned two different subsets"
                    )));
                }
            }
        }
        Ok(SubsetFamily { carrier: carrier.clone(), members })
    }

    /// The family over `{0, 1}` with `0 ↦ a`, `1 ↦ b`.
    pub fn two(a: &Subset, b: &Subset) -> Result<Self> {
        Self::new(a.carrier(), vec![("0".into(), a.clone()), ("1".into(), b.clone())])
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self) -> Subset {
        let bits = self.members.iter().fold(0, |acc, (_, s)| acc | s.bits);
        Subset { carrier: self.carrier.clone(), bits }
    }

    pub fn intersection(&self) -> Result<Subset> {
        if self.members.is_empty() {
            return Err(Error::InvalidArgument("intersection of an empty family".into()));
        }
        let bits = self.members.iter().fold(self.carrier.full_mask(), |acc, (_, s)| acc & s.bits);
        Ok(Subset { carrier: self.carrier.clone(), bits })
    }
}
