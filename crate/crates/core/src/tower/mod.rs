//! Iterated quadratic extensions of Q.
//!
//! A [`Tower`] is an append-only list of square roots `r_0, r_1, ..`, where
//! the radicand of `r_t` only involves `r_0..r_{t-1}`. A [`TowerElement`] is
//! a sparse sum of square-free root monomials with rational coefficients.
//! Every operation returns canonical form: each root appears with exponent 0
//! or 1 and no zero coefficient is stored, so structural equality is field
//! equality as long as every adjunction is a genuine degree-2 extension.

mod element;
pub mod multiquadratic;
pub mod numeric;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use element::{Monomial, TowerElement};
pub use numeric::ComplexBall;

/// Maximum number of adjoined roots (monomials are 128-bit masks).
pub const MAX_ROOTS: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("cannot adjoin the square root of zero")]
    ZeroRadicand,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor: a nonzero element has zero norm, some adjunction is not of degree 2")]
    ZeroDivisor,
    #[error("radicand refers to root {0}, which is not in the tower")]
    ForeignRoot(usize),
    #[error("tower already holds {MAX_ROOTS} roots")]
    TooManyRoots,
    #[error("numeric evaluation could not reach the requested precision")]
    PrecisionExhausted,
}

/// Handle of an adjoined square root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootId(pub usize);

#[derive(Clone, Debug)]
struct Root {
    radicand: TowerElement,
    /// Approximate value of the branch picked at adjoin time.
    branch: Complex64,
}

#[derive(Clone, Debug, Default)]
pub struct Tower {
    roots: Vec<Root>,
}

impl Tower {
    pub fn new() -> Self {
        Tower::default()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn radicand(&self, r: RootId) -> &TowerElement {
        &self.roots[r.0].radicand
    }

    /// Numeric value of the branch fixed for `r`.
    pub fn branch(&self, r: RootId) -> Complex64 {
        self.roots[r.0].branch
    }

    /// Adjoins `sqrt(d)`. The branch is the principal square root of the
    /// numeric value of `d` and never changes afterwards.
    pub fn adjoin_sqrt(&mut self, d: TowerElement) -> Result<RootId, TowerError> {
        if d.is_zero() {
            return Err(TowerError::ZeroRadicand);
        }
        if let Some(t) = d.top_root() {
            if t >= self.roots.len() {
                return Err(TowerError::ForeignRoot(t));
            }
        }
        if self.roots.len() >= MAX_ROOTS {
            return Err(TowerError::TooManyRoots);
        }
        let value = self.isolate(&d)?;
        let branch = value.sqrt();
        self.roots.push(Root { radicand: d, branch });
        Ok(RootId(self.roots.len() - 1))
    }

    fn check(&self, a: &TowerElement) {
        if let Some(t) = a.top_root() {
            assert!(t < self.roots.len(), "element refers to root {t} outside the tower");
        }
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.check(a);
        self.check(b);
        self.mul_rec(a, b)
    }

    pub fn square(&self, a: &TowerElement) -> TowerElement {
        self.mul(a, a)
    }

    fn mul_rec(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        if a.is_zero() || b.is_zero() {
            return TowerElement::zero();
        }
        if let Some(q) = a.as_rational() {
            return b.scale(&q);
        }
        if let Some(q) = b.as_rational() {
            return a.scale(&q);
        }
        if a.len() == 1 && b.len() == 1 {
            let (ma, qa) = a.iter().next().unwrap();
            let (mb, qb) = b.iter().next().unwrap();
            return self.monomial_product(*ma, *mb).scale(&(qa * qb));
        }
        // split on the highest root t: a = a0 + a1 r_t
        let t = a.top_root().max(b.top_root()).unwrap();
        let (a0, a1) = a.split(t);
        let (b0, b1) = b.split(t);
        if a1.is_zero() {
            return &self.mul_rec(&a0, &b0) + &self.mul_rec(&a0, &b1).times_new_root(t);
        }
        if b1.is_zero() {
            return &self.mul_rec(&a0, &b0) + &self.mul_rec(&a1, &b0).times_new_root(t);
        }
        let low = self.mul_rec(&a0, &b0);
        let high = self.mul_rec(&a1, &b1);
        let cross = &(&self.mul_rec(&(&a0 + &a1), &(&b0 + &b1)) - &low) - &high;
        let constant = &low + &self.mul_rec(&high, &self.roots[t].radicand);
        &constant + &cross.times_new_root(t)
    }

    /// Product of two monomials, reduced to canonical form.
    fn monomial_product(&self, a: Monomial, b: Monomial) -> TowerElement {
        let shared = a.and(b);
        let mut acc = TowerElement::from_monomial(a.xor(b));
        for t in shared.roots().rev() {
            acc = self.mul_rec(&acc, &self.roots[t].radicand);
        }
        acc
    }

    /// Multiplies by a single root.
    pub fn mul_root(&self, a: &TowerElement, r: RootId) -> TowerElement {
        self.mul(a, &TowerElement::root(r))
    }

    /// Product of the listed roots (repetitions allowed), canonical.
    pub fn root_product(&self, roots: &[RootId]) -> TowerElement {
        roots.iter().fold(TowerElement::one(), |acc, &r| self.mul_root(&acc, r))
    }

    /// Canonical form of an arbitrary sum of root products.
    pub fn normalize<'a>(&self, terms: impl IntoIterator<Item = (&'a [RootId], &'a BigRational)>) -> TowerElement {
        terms.into_iter().fold(TowerElement::zero(), |acc, (roots, q)| {
            &acc + &self.root_product(roots).scale(q)
        })
    }

    pub fn inv(&self, a: &TowerElement) -> Result<TowerElement, TowerError> {
        self.check(a);
        self.inv_rec(a)
    }

    fn inv_rec(&self, a: &TowerElement) -> Result<TowerElement, TowerError> {
        if a.is_zero() {
            return Err(TowerError::DivisionByZero);
        }
        if let Some(q) = a.as_rational() {
            return Ok(TowerElement::from(q.recip()));
        }
        let t = a.top_root().unwrap();
        let (a0, a1) = a.split(t);
        // (a0 + a1 r)^-1 = (a0 - a1 r) / (a0^2 - a1^2 d)
        let norm = &self.mul_rec(&a0, &a0) - &self.mul_rec(&self.mul_rec(&a1, &a1), &self.roots[t].radicand);
        let norm_inv = self.inv_rec(&norm).map_err(|e| match e {
            TowerError::DivisionByZero => TowerError::ZeroDivisor,
            other => other,
        })?;
        let conj = &a0 - &a1.times_new_root(t);
        Ok(self.mul_rec(&conj, &norm_inv))
    }

    pub fn div(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement, TowerError> {
        let b_inv = self.inv(b)?;
        Ok(self.mul(a, &b_inv))
    }

    /// `a^e` by repeated squaring.
    pub fn pow(&self, a: &TowerElement, mut e: u32) -> TowerElement {
        let mut base = a.clone();
        let mut acc = TowerElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// Certified numeric value of `a`: a complex ball of radius at most
    /// `precision` containing the value under the fixed branches.
    pub fn numeric_eval(&self, a: &TowerElement, precision: f64) -> Result<ComplexBall, TowerError> {
        assert!(precision > 0.0 && precision.is_finite(), "precision must be positive");
        self.check(a);
        numeric::eval_to(self, a, precision)
    }

    /// Approximates `d` well enough to fix a square root branch.
    fn isolate(&self, d: &TowerElement) -> Result<Complex64, TowerError> {
        numeric::isolate(self, d)
    }
}

impl From<BigRational> for TowerElement {
    fn from(q: BigRational) -> Self {
        TowerElement::rational(q)
    }
}

impl From<i64> for TowerElement {
    fn from(v: i64) -> Self {
        TowerElement::rational(BigRational::from_integer(v.into()))
    }
}

/// Is `q` the square of a rational?
pub fn is_rational_square(q: &BigRational) -> bool {
    use num_traits::Signed;
    if q.is_zero() {
        return true;
    }
    if q.is_negative() {
        return false;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    &(&rn * &rn) == n && &(&rd * &rd) == d
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(v: i64) -> TowerElement {
        TowerElement::from(v)
    }

    #[test]
    fn adjoin_sqrt2_squares_to_two() {
        let mut t = Tower::new();
        let r = t.adjoin_sqrt(int(2)).unwrap();
        let s = TowerElement::root(r);
        assert_eq!(t.square(&s), int(2));
    }

    #[test]
    fn product_of_independent_roots() {
        let mut t = Tower::new();
        let r2 = TowerElement::root(t.adjoin_sqrt(int(2)).unwrap());
        let r3 = TowerElement::root(t.adjoin_sqrt(int(3)).unwrap());
        let r6 = t.mul(&r2, &r3);
        assert_eq!(r6.len(), 1);
        assert_eq!(t.square(&r6), int(6));
    }

    #[test]
    fn nested_root_normalizes_to_radicand() {
        let mut t = Tower::new();
        let r1 = TowerElement::root(t.adjoin_sqrt(int(2)).unwrap());
        let d = &int(1) + &r1;
        let r2 = TowerElement::root(t.adjoin_sqrt(d.clone()).unwrap());
        assert_eq!(t.square(&r2), d);
        // (r1 r2)^2 = 2 (1 + r1) = 2 + 2 r1
        let p = t.mul(&r1, &r2);
        assert_eq!(t.square(&p), &int(2) + &r1.scale(&q(2, 1)));
    }

    #[test]
    fn conjugate_product() {
        let mut t = Tower::new();
        let r = TowerElement::root(t.adjoin_sqrt(int(2)).unwrap());
        let a = &int(1) + &r;
        let b = &int(1) - &r;
        assert_eq!(t.mul(&a, &b), int(-1));
    }

    #[test]
    fn sum_of_roots_squared() {
        let mut t = Tower::new();
        let r2 = TowerElement::root(t.adjoin_sqrt(int(2)).unwrap());
        let r3 = TowerElement::root(t.adjoin_sqrt(int(3)).unwrap());
        let s = &r2 + &r3;
        // 5 + 2 r1 r2, where r1 r2 is the monomial {0, 1}
        let expected = &int(5) + &TowerElement::from_monomial(Monomial::from_roots(&[0, 1])).scale(&q(2, 1));
        assert_eq!(t.square(&s), expected);
    }

    #[test]
    fn inverse_in_nested_tower() {
        let mut t = Tower::new();
        let r1 = TowerElement::root(t.adjoin_sqrt(int(2)).unwrap());
        let r2 = TowerElement::root(t.adjoin_sqrt(&int(1) + &r1).unwrap());
        let r3 = TowerElement::root(t.adjoin_sqrt(int(5)).unwrap());
        let x = &(&(&int(3) + &r2) + &t.mul(&r1, &r3)) - &t.mul(&r2, &r3).scale(&q(1, 7));
        let xi = t.inv(&x).unwrap();
        assert_eq!(t.mul(&x, &xi), int(1));
        assert_eq!(t.div(&x, &x).unwrap(), int(1));
    }

    #[test]
    fn zero_checks() {
        let mut t = Tower::new();
        let r = TowerElement::root(t.adjoin_sqrt(int(2)).unwrap());
        assert!((&t.square(&r) - &int(2)).is_zero());
        assert!(!(&r - &int(1)).is_zero());
        assert!((&r - &r).is_zero());
    }

    #[test]
    fn errors() {
        let mut t = Tower::new();
        assert_eq!(t.adjoin_sqrt(TowerElement::zero()), Err(TowerError::ZeroRadicand));
        assert_eq!(t.inv(&TowerElement::zero()), Err(TowerError::DivisionByZero));
        let foreign = TowerElement::root(RootId(3));
        assert_eq!(t.adjoin_sqrt(foreign), Err(TowerError::ForeignRoot(3)));
    }

    #[test]
    fn degenerate_adjunction_is_a_zero_divisor() {
        // sqrt(4) adjoined formally: (r - 2)(r + 2) = 0 with both factors nonzero
        let mut t = Tower::new();
        let r = TowerElement::root(t.adjoin_sqrt(int(4)).unwrap());
        assert_eq!(t.inv(&(&r - &int(2))), Err(TowerError::ZeroDivisor));
    }

    #[test]
    fn normalize_reduces_repeated_roots() {
        let mut t = Tower::new();
        let a = t.adjoin_sqrt(int(2)).unwrap();
        let b = t.adjoin_sqrt(int(3)).unwrap();
        let roots = [a, b, a, b, b];
        let coeff = q(1, 3);
        let x = t.normalize([(&roots[..], &coeff)]);
        // 2 * 3 * sqrt(3) / 3
        assert_eq!(x, TowerElement::root(b).scale(&q(2, 1)));
        assert_eq!(t.pow(&TowerElement::root(a), 5), TowerElement::root(a).scale(&q(4, 1)));
    }

    #[test]
    fn rational_squares() {
        assert!(is_rational_square(&q(4, 9)));
        assert!(is_rational_square(&q(0, 1)));
        assert!(!is_rational_square(&q(2, 1)));
        assert!(!is_rational_square(&q(-4, 1)));
        assert!(!is_rational_square(&q(4, 3)));
    }
}
