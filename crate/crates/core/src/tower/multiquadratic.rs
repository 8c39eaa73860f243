//! Degrees of multiquadratic extensions `Q(sqrt a_1, .., sqrt a_k) / Q`.
//!
//! The degree is `2^rank`, where `rank` is the GF(2) rank of the exponent
//! vectors (sign, odd prime exponents) of the `a_s`. For small `k` this is
//! cross-checked against the subset criterion: the number of subsets whose
//! product is a rational square is exactly `2^(k - rank)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use super::is_rational_square;

/// Trial division runs up to this bound.
pub const TRIAL_BOUND: u64 = 1 << 16;

/// Largest `k` for which the subset brute force is run.
pub const BRUTE_FORCE_MAX_K: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MqError {
    #[error("input {0} is zero")]
    ZeroInput(usize),
    #[error("could not factor cofactor {0}")]
    FactorizationTooHard(BigUint),
    #[error("GF(2) rank {rank} disagrees with subset count {square_subsets} for k = {k}")]
    OracleDisagreement {
        k: usize,
        rank: usize,
        square_subsets: usize,
    },
}

/// Odd-multiplicity primes of `|p * q|` for `x = p / q`, with the sign of `x`.
fn odd_primes(x: &BigRational) -> Result<(bool, Vec<BigUint>), MqError> {
    let negative = x.is_negative();
    let mut rest = (x.numer() * x.denom()).abs().to_biguint().expect("nonnegative");
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut odd = false;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            odd = !odd;
        }
        if odd {
            primes.push(bp);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let bound_sq = BigUint::from(TRIAL_BOUND) * BigUint::from(TRIAL_BOUND);
        let root = rest.sqrt();
        if &root * &root == rest {
            // a square cofactor contributes nothing
        } else if rest < bound_sq || is_probable_prime(&rest) {
            primes.push(rest);
        } else {
            return Err(MqError::FactorizationTooHard(rest));
        }
    }
    primes.sort();
    Ok((negative, primes))
}

/// Miller-Rabin with the first twelve primes as bases (deterministic below
/// 3.3 * 10^24).
fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for b in BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s as usize;
    'witness: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Writes `q = sign * m * (rational square)` with `m` a squarefree positive
/// integer.
pub fn squarefree_part(q: &BigRational) -> Result<(i8, BigUint), MqError> {
    if q.is_zero() {
        return Err(MqError::ZeroInput(0));
    }
    let (negative, primes) = odd_primes(q)?;
    let m = primes.iter().fold(BigUint::one(), |acc, p| acc * p);
    Ok((if negative { -1 } else { 1 }, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MqDegree {
    pub k: usize,
    pub rank: usize,
    /// Indices of a nonempty subset whose product is a square, when the
    /// degree is below `2^k`.
    pub witness: Option<Vec<usize>>,
    /// Whether the subset brute force ran (and agreed).
    pub brute_force_checked: bool,
}

impl MqDegree {
    pub fn degree(&self) -> BigUint {
        BigUint::one() << self.rank
    }
}

/// Bitset over GF(2).
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// GF(2) rank of the exponent vectors plus the first dependency found.
fn gf2_rank(rows: &[Bits], k: usize) -> (usize, Option<Vec<usize>>) {
    // pivots keyed by leading column: (row, combination of inputs)
    let mut pivots: BTreeMap<usize, (Bits, Bits)> = BTreeMap::new();
    let mut witness = None;
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        let mut combo = Bits::zeros(k);
        combo.set(idx);
        while let Some(lead) = r.first() {
            match pivots.get(&lead) {
                Some((pr, pc)) => {
                    r.xor(pr);
                    combo.xor(pc);
                }
                None => break,
            }
        }
        match r.first() {
            Some(lead) => {
                pivots.insert(lead, (r, combo));
            }
            None => {
                if witness.is_none() {
                    witness = Some((0..k).filter(|&i| combo.get(i)).collect());
                }
            }
        }
    }
    (pivots.len(), witness)
}

/// Number of subsets (including the empty one) with square product, and the
/// smallest nonempty such subset (by size, then lexicographically).
fn square_subsets(values: &[BigRational]) -> (usize, Option<Vec<usize>>) {
    let k = values.len();
    let mut products = vec![BigRational::one(); 1 << k];
    let mut count = 1;
    let mut best: Option<Vec<usize>> = None;
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        products[mask] = &products[mask & (mask - 1)] * &values[low];
        if is_rational_square(&products[mask]) {
            count += 1;
            let subset: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
            let better = match &best {
                None => true,
                Some(b) => (subset.len(), &subset) < (b.len(), b),
            };
            if better {
                best = Some(subset);
            }
        }
    }
    (count, best)
}

/// Degree of `Q(sqrt a_1, .., sqrt a_k)` over Q.
pub fn multiquadratic_degree(values: &[BigRational]) -> Result<MqDegree, MqError> {
    let k = values.len();
    let mut factored = Vec::with_capacity(k);
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            return Err(MqError::ZeroInput(i));
        }
        factored.push(odd_primes(v)?);
    }
    // column 0 is the sign, then one column per prime
    let mut columns: BTreeMap<BigUint, usize> = BTreeMap::new();
    for (_, primes) in &factored {
        for p in primes {
            let next = columns.len() + 1;
            columns.entry(p.clone()).or_insert(next);
        }
    }
    let rows: Vec<Bits> = factored
        .iter()
        .map(|(neg, primes)| {
            let mut b = Bits::zeros(columns.len() + 1);
            if *neg {
                b.set(0);
            }
            for p in primes {
                b.set(columns[p]);
            }
            b
        })
        .collect();
    let (rank, mut witness) = gf2_rank(&rows, k);

    let mut checked = false;
    if k <= BRUTE_FORCE_MAX_K {
        let (count, smallest) = square_subsets(values);
        if count << rank != 1 << k {
            return Err(MqError::OracleDisagreement {
                k,
                rank,
                square_subsets: count,
            });
        }
        witness = smallest;
        checked = true;
    }
    Ok(MqDegree {
        k,
        rank,
        witness,
        brute_force_checked: checked,
    })
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Small helper for callers holding machine integers.
pub fn rationals(values: &[i64]) -> Vec<BigRational> {
    values.iter().map(|&v| BigRational::from_integer(v.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&q(18, 1)).unwrap(), (1, BigUint::from(2u32)));
        assert_eq!(squarefree_part(&q(-12, 1)).unwrap(), (-1, BigUint::from(3u32)));
        assert_eq!(squarefree_part(&q(4, 9)).unwrap(), (1, BigUint::one()));
        assert_eq!(squarefree_part(&q(2, 3)).unwrap(), (1, BigUint::from(6u32)));
        assert!(matches!(squarefree_part(&q(0, 1)), Err(MqError::ZeroInput(0))));
    }

    #[test]
    fn large_prime_cofactors() {
        // 2^61 - 1 is prime
        let p = BigInt::from((1u64 << 61) - 1);
        let x = BigRational::from_integer(&p * BigInt::from(12));
        assert_eq!(
            squarefree_part(&x).unwrap().1,
            BigUint::from(3u32) * p.to_biguint().unwrap()
        );
        // square of a large prime
        let sq = BigRational::from_integer(&p * &p * BigInt::from(5));
        assert_eq!(squarefree_part(&sq).unwrap().1, BigUint::from(5u32));
        // product of two large primes is not resolved
        let p2 = BigInt::from((1u64 << 31) - 1);
        let hard = BigRational::from_integer(&p * &p2 * &p2 * &p2);
        assert!(matches!(squarefree_part(&hard), Err(MqError::FactorizationTooHard(_))));
    }

    #[test]
    fn primality() {
        for (n, prime) in [(2u64, true), (9, false), (97, true), (561, false), (7919, true)] {
            assert_eq!(is_probable_prime(&BigUint::from(n)), prime, "{n}");
        }
    }

    #[test]
    fn degree_examples() {
        let d = multiquadratic_degree(&rationals(&[2, 3, 6])).unwrap();
        assert_eq!((d.rank, d.degree()), (2, BigUint::from(4u32)));
        assert_eq!(d.witness, Some(vec![0, 1, 2]));

        let d = multiquadratic_degree(&rationals(&[2, 3, 5])).unwrap();
        assert_eq!(d.degree(), BigUint::from(8u32));
        assert_eq!(d.witness, None);

        let d = multiquadratic_degree(&rationals(&[4])).unwrap();
        assert_eq!(d.degree(), BigUint::one());
        assert_eq!(d.witness, Some(vec![0]));

        let d = multiquadratic_degree(&rationals(&[-1, -4])).unwrap();
        assert_eq!(d.rank, 1);
        assert!(d.brute_force_checked);

        assert!(matches!(
            multiquadratic_degree(&rationals(&[3, 0])),
            Err(MqError::ZeroInput(1))
        ));
    }

    #[test]
    fn gf2_witness_beyond_brute_force() {
        let mut vals = rationals(&[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        vals.push(q(6, 1));
        let d = multiquadratic_degree(&vals).unwrap();
        assert_eq!(d.rank, 12);
        assert!(!d.brute_force_checked);
        assert_eq!(d.witness, Some(vec![0, 1, 12]));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
