use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use super::RootId;

/// Square-free product of roots, one bit per root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u128) -> Self {
        Monomial(bits)
    }

    pub fn from_roots(roots: &[usize]) -> Self {
        Monomial(roots.iter().fold(0u128, |m, &t| m ^ (1u128 << t)))
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, t: usize) -> bool {
        self.0 >> t & 1 == 1
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn top(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub(crate) fn and(self, o: Monomial) -> Monomial {
        Monomial(self.0 & o.0)
    }

    pub(crate) fn xor(self, o: Monomial) -> Monomial {
        Monomial(self.0 ^ o.0)
    }

    /// Root indices in increasing order.
    pub fn roots(self) -> impl DoubleEndedIterator<Item = usize> {
        (0..128usize).filter(move |&t| self.contains(t))
    }
}

/// Canonical sparse element: monomial -> nonzero rational coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TowerElement {
    terms: BTreeMap<Monomial, BigRational>,
}

impl TowerElement {
    pub fn zero() -> Self {
        TowerElement::default()
    }

    pub fn one() -> Self {
        TowerElement::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::ONE, q);
        }
        TowerElement { terms }
    }

    pub fn root(r: RootId) -> Self {
        Self::from_monomial(Monomial::from_roots(&[r.0]))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        TowerElement {
            terms: [(m, BigRational::one())].into(),
        }
    }

    /// Builds an element from raw terms, merging duplicate monomials.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut out = TowerElement::zero();
        for (m, q) in terms {
            out.add_term(m, &q);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The rational value, when no root is involved.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.top_root().is_none()
    }

    /// Highest root index present.
    pub fn top_root(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.top()).max()
    }

    /// Union of all monomials.
    pub fn support(&self) -> Monomial {
        Monomial(self.terms.keys().fold(0, |acc, m| acc | m.0))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return TowerElement::zero();
        }
        TowerElement {
            terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect(),
        }
    }

    /// Splits into `(a0, a1)` with `self = a0 + a1 * r_t`.
    pub(crate) fn split(&self, t: usize) -> (TowerElement, TowerElement) {
        let mut low = BTreeMap::new();
        let mut high = BTreeMap::new();
        let bit = 1u128 << t;
        for (m, c) in &self.terms {
            if m.contains(t) {
                high.insert(Monomial(m.0 & !bit), c.clone());
            } else {
                low.insert(*m, c.clone());
            }
        }
        (TowerElement { terms: low }, TowerElement { terms: high })
    }

    /// Multiplies by `r_t` when no monomial contains `t` yet.
    pub(crate) fn times_new_root(&self, t: usize) -> TowerElement {
        let bit = 1u128 << t;
        TowerElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!(!m.contains(t));
                    (Monomial(m.0 | bit), c.clone())
                })
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, q: &BigRational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q.clone());
            }
        }
    }
}

impl Add for &TowerElement {
    type Output = TowerElement;

    fn add(self, rhs: &TowerElement) -> TowerElement {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, q) in &small.terms {
            out.add_term(*m, q);
        }
        out
    }
}

impl Sub for &TowerElement {
    type Output = TowerElement;

    fn sub(self, rhs: &TowerElement) -> TowerElement {
        let mut out = self.clone();
        for (m, q) in &rhs.terms {
            out.add_term(*m, &-q);
        }
        out
    }
}

impl Neg for &TowerElement {
    type Output = TowerElement;

    fn neg(self) -> TowerElement {
        TowerElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for TowerElement {
    type Output = TowerElement;

    fn add(self, rhs: TowerElement) -> TowerElement {
        &self + &rhs
    }
}

impl Sub for TowerElement {
    type Output = TowerElement;

    fn sub(self, rhs: TowerElement) -> TowerElement {
        &self - &rhs
    }
}

impl Neg for TowerElement {
    type Output = TowerElement;

    fn neg(self) -> TowerElement {
        -&self
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                let names: Vec<String> = m.roots().map(|t| format!("r{t}")).collect();
                write!(f, "{}", names.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Serializes as `{"<monomial bitmask in hex>": "p/q"}`.
impl Serialize for TowerElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            map.serialize_entry(&format!("{:x}", m.0), &c.to_string())?;
        }
        map.end()
    }
}
