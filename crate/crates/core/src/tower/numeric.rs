//! Certified complex ball arithmetic with dyadic rational centers.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Tower, TowerElement, TowerError};

const START_BITS: u64 = 64;
const MAX_BITS: u64 = 1 << 14;
const NEWTON_STEPS: usize = 200;

/// The disc `{z : |z - (re + i im)| <= rad}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: BigRational,
    pub im: BigRational,
    pub rad: BigRational,
}

fn two_pow(p: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(1) << p as usize)
}

fn round_to(x: &BigRational, p: u64) -> BigRational {
    let scale = two_pow(p);
    (x * &scale).floor() / scale
}

/// `|re| + |im|`, an upper bound on the modulus.
fn modulus_upper(re: &BigRational, im: &BigRational) -> BigRational {
    re.abs() + im.abs()
}

/// `(re^2 + im^2) / (|re| + |im|)`, a lower bound on the modulus.
fn modulus_lower(re: &BigRational, im: &BigRational) -> BigRational {
    let l1 = modulus_upper(re, im);
    if l1.is_zero() {
        return l1;
    }
    (re * re + im * im) / l1
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl ComplexBall {
    pub fn exact(re: BigRational, im: BigRational) -> Self {
        ComplexBall {
            re,
            im,
            rad: BigRational::zero(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::exact(q.clone(), BigRational::zero())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn radius(&self) -> f64 {
        to_f64(&self.rad)
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        let dr = re - &self.re;
        let di = im - &self.im;
        &dr * &dr + &di * &di <= &self.rad * &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero(), &BigRational::zero())
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &ComplexBall) -> bool {
        if other.rad > self.rad {
            return false;
        }
        let slack = &self.rad - &other.rad;
        let dr = &other.re - &self.re;
        let di = &other.im - &self.im;
        &dr * &dr + &di * &di <= &slack * &slack
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        let reach = &self.rad + &other.rad;
        let dr = &other.re - &self.re;
        let di = &other.im - &self.im;
        &dr * &dr + &di * &di <= &reach * &reach
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            rad: &self.rad + &o.rad,
        }
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let rad =
            modulus_upper(&self.re, &self.im) * &o.rad + modulus_upper(&o.re, &o.im) * &self.rad + &self.rad * &o.rad;
        ComplexBall { re, im, rad }
    }

    pub fn scale(&self, q: &BigRational) -> ComplexBall {
        ComplexBall {
            re: &self.re * q,
            im: &self.im * q,
            rad: &self.rad * q.abs(),
        }
    }

    /// Rounds the center to `p` fractional bits, widening the radius.
    pub fn round(&self, p: u64) -> ComplexBall {
        let re = round_to(&self.re, p);
        let im = round_to(&self.im, p);
        let err = (&self.re - &re).abs() + (&self.im - &im).abs();
        ComplexBall {
            re,
            im,
            rad: &self.rad + err,
        }
    }

    /// Square root on the branch nearest `branch`; `None` when the ball is
    /// too wide relative to its distance from zero.
    fn sqrt_near(&self, branch: Complex64, p: u64) -> Option<ComplexBall> {
        let norm_sq = &self.re * &self.re + &self.im * &self.im;
        let four = BigRational::from_integer(4.into());
        if norm_sq <= &four * &self.rad * &self.rad {
            return None;
        }
        let guess = self.center().sqrt();
        let mut s_re = BigRational::from_f64(guess.re)?;
        let mut s_im = BigRational::from_f64(guess.im)?;
        let target = BigRational::from_integer(1.into()) / two_pow(p + 2);
        let half = BigRational::new(1.into(), 2.into());
        for _ in 0..NEWTON_STEPS {
            let s_norm_sq = &s_re * &s_re + &s_im * &s_im;
            if s_norm_sq.is_zero() {
                return None;
            }
            // residual s^2 - c
            let res_re = &s_re * &s_re - &s_im * &s_im - &self.re;
            let res_im = BigRational::from_integer(2.into()) * &s_re * &s_im - &self.im;
            let res = modulus_upper(&res_re, &res_im);
            let s_lo = modulus_lower(&s_re, &s_im);
            if res <= &s_lo * &s_lo {
                let err = &res / &s_lo;
                if err <= target {
                    let (re, im) = if pick_negative(&s_re, &s_im, branch) {
                        (-s_re, -s_im)
                    } else {
                        (s_re, s_im)
                    };
                    let lower = &s_lo - &err;
                    if !lower.is_positive() {
                        return None;
                    }
                    let rad = &err + &self.rad / lower;
                    return Some(ComplexBall { re, im, rad });
                }
            }
            // Newton: s <- (s + c / s) / 2
            let q_re = (&self.re * &s_re + &self.im * &s_im) / &s_norm_sq;
            let q_im = (&self.im * &s_re - &self.re * &s_im) / &s_norm_sq;
            s_re = round_to(&((&s_re + q_re) * &half), p + 8);
            s_im = round_to(&((&s_im + q_im) * &half), p + 8);
        }
        None
    }
}

fn pick_negative(re: &BigRational, im: &BigRational, branch: Complex64) -> bool {
    let s = Complex64::new(to_f64(re), to_f64(im));
    (s - branch).norm_sqr() > (s + branch).norm_sqr()
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.center();
        write!(f, "({:.15e} {:+.15e}i) +/- {:.3e}", c.re, c.im, self.radius())
    }
}

/// Plain-number view of a ball for JSON dumps.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NumericValue {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

impl From<&ComplexBall> for NumericValue {
    fn from(b: &ComplexBall) -> Self {
        let c = b.center();
        NumericValue {
            re: c.re,
            im: c.im,
            radius: b.radius(),
        }
    }
}

struct Evaluator<'a> {
    tower: &'a Tower,
    bits: u64,
    roots: Vec<Option<ComplexBall>>,
}

impl<'a> Evaluator<'a> {
    fn new(tower: &'a Tower, bits: u64) -> Self {
        Evaluator {
            tower,
            bits,
            roots: vec![None; tower.root_count()],
        }
    }

    fn root(&mut self, t: usize) -> Option<ComplexBall> {
        if let Some(b) = &self.roots[t] {
            return Some(b.clone());
        }
        let root = &self.tower.roots[t];
        let d = self.element(&root.radicand)?;
        let b = d.sqrt_near(root.branch, self.bits)?.round(self.bits);
        self.roots[t] = Some(b.clone());
        Some(b)
    }

    fn element(&mut self, a: &TowerElement) -> Option<ComplexBall> {
        let mut acc = ComplexBall::from_rational(&BigRational::zero());
        for (m, q) in a.iter() {
            let mut term = ComplexBall::from_rational(q);
            for t in m.roots() {
                let r = self.root(t)?;
                term = term.mul(&r).round(self.bits);
            }
            acc = acc.add(&term);
        }
        Some(acc)
    }
}

fn bits_for(precision: &BigRational) -> u64 {
    let approx = to_f64(precision);
    let needed = if approx > 0.0 {
        (-approx.log2()).ceil().max(0.0) as u64
    } else {
        0
    };
    (needed + 16).max(START_BITS)
}

pub(super) fn eval_to(tower: &Tower, a: &TowerElement, precision: f64) -> Result<ComplexBall, TowerError> {
    let eps = BigRational::from_f64(precision).ok_or(TowerError::PrecisionExhausted)?;
    let mut bits = bits_for(&eps);
    while bits <= MAX_BITS {
        if let Some(b) = Evaluator::new(tower, bits).element(a) {
            if b.rad <= eps {
                return Ok(b);
            }
        }
        bits *= 2;
    }
    Err(TowerError::PrecisionExhausted)
}

/// Center of a ball around `d` that is clearly separated from zero.
pub(super) fn isolate(tower: &Tower, d: &TowerElement) -> Result<Complex64, TowerError> {
    let mut bits = START_BITS;
    let sixteen = BigRational::from_integer(16.into());
    while bits <= MAX_BITS {
        if let Some(b) = Evaluator::new(tower, bits).element(d) {
            let norm_sq = &b.re * &b.re + &b.im * &b.im;
            if norm_sq > &sixteen * &b.rad * &b.rad {
                return Ok(b.center());
            }
        }
        bits *= 2;
    }
    Err(TowerError::PrecisionExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::RootId;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Newton iteration in f64 as an independent reference for sqrt(2).
    fn newton_sqrt2() -> f64 {
        let mut x = 1.0f64;
        for _ in 0..60 {
            x = 0.5 * (x + 2.0 / x);
        }
        x
    }

    #[test]
    fn third_is_enclosed() {
        let t = Tower::new();
        let b = t.numeric_eval(&TowerElement::rational(q(1, 3)), 1e-10).unwrap();
        assert!(b.contains(&q(1, 3), &q(0, 1)));
        assert!(b.radius() <= 1e-10);
        assert!((b.center().re - 0.3333333333).abs() < 1e-10);
    }

    #[test]
    fn sqrt2_matches_newton_reference() {
        let mut t = Tower::new();
        let r = t.adjoin_sqrt(TowerElement::from(2)).unwrap();
        let b = t.numeric_eval(&TowerElement::root(r), 1e-12).unwrap();
        assert!(b.radius() <= 1e-12);
        assert!((b.center().re - newton_sqrt2()).abs() <= 1e-12 + 1e-15);
        assert!((b.center().re - std::f64::consts::SQRT_2).abs() < 1e-11);
        // rational bounds bracketing sqrt 2
        let lo = q(14142135623730, 10_000_000_000_000);
        let hi = q(14142135623731, 10_000_000_000_000);
        assert!(b.re.clone() - b.rad.clone() < hi && b.re.clone() + b.rad.clone() > lo);
    }

    #[test]
    fn negative_radicand_gives_imaginary_branch() {
        let mut t = Tower::new();
        let r = t.adjoin_sqrt(TowerElement::from(-3)).unwrap();
        let b = t.numeric_eval(&TowerElement::root(r), 1e-20).unwrap();
        assert!(b.center().re.abs() < 1e-15);
        assert!((b.center().im.abs() - 3f64.sqrt()).abs() < 1e-15);
        // same branch on every evaluation
        let again = t.numeric_eval(&TowerElement::root(r), 1e-40).unwrap();
        assert!(b.overlaps(&again));
        assert_eq!(t.branch(RootId(0)).im.signum(), b.center().im.signum());
    }

    #[test]
    fn zero_element_evaluates_to_zero() {
        let mut t = Tower::new();
        let r = TowerElement::root(t.adjoin_sqrt(TowerElement::from(2)).unwrap());
        let z = &t.square(&r) - &TowerElement::from(2);
        let b = t.numeric_eval(&z, 1e-9).unwrap();
        assert!(b.contains_zero());
    }

    #[test]
    fn nested_value() {
        let mut t = Tower::new();
        let r1 = TowerElement::root(t.adjoin_sqrt(TowerElement::from(2)).unwrap());
        let d = &TowerElement::from(1) + &r1;
        let r2 = TowerElement::root(t.adjoin_sqrt(d).unwrap());
        let b = t.numeric_eval(&r2, 1e-30).unwrap();
        let expected = (1.0 + 2f64.sqrt()).sqrt();
        assert!((b.center().re - expected).abs() < 1e-15);
    }
}
