//! Galois groups as permutation groups on realization indices.
//!
//! [`build_galois`] assembles the group step by step from the
//! squared-distance partitions: each block of step `l` contributes the flip
//! of the step-`l` sign bit over that block, and earlier generators lift by
//! acting on prefixes and keeping the new sign bit. [`brute_force_galois`]
//! filters the whole symmetric group by the area-class condition instead and
//! serves as an oracle for small degrees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::realization::{class_ids, RealizationSet};
use crate::tower::TowerElement;

/// Largest group that is enumerated element by element.
pub const ENUMERATION_CAP: usize = 1 << 20;
/// Largest degree the symmetric-group filter accepts (8! candidates).
pub const BRUTE_FORCE_MAX_DEGREE: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("degree {degree} exceeds the brute-force limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: BigUint, cap: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Permutation of `0..degree`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Box<[u16]>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= 1 << 16, "degree {degree} does not fit u16 indices");
        Perm((0..degree).map(|i| i as u16).collect())
    }

    /// `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n > 1 << 16 {
            return None;
        }
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Perm(images.iter().map(|&i| i as u16).collect()))
    }

    fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Self {
        Perm((0..degree).map(|i| f(i) as u16).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `(self ∘ h)(i) = self(h(i))`.
    pub fn compose(&self, h: &Perm) -> Perm {
        Perm(h.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u16; self.degree()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u16;
        }
        Perm(out.into())
    }

    pub fn pow(&self, e: u32) -> Perm {
        (0..e).fold(Perm::identity(self.degree()), |acc, _| self.compose(&acc))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &j)| *i == j as usize).count()
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.apply(start);
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.apply(next);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}

/// One-based cycle notation; the identity prints as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let names: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", names.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Partition of the step-`l` prefixes by the squared distance of the
/// step's base pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepPartition {
    pub step: usize,
    /// Block id of each prefix mask in `0..2^(l-1)`.
    pub block_of: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    /// The shared squared distance of each block.
    pub lambdas: Vec<TowerElement>,
}

impl StepPartition {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }
}

fn blocks_from_ids(ids: &[usize]) -> Vec<Vec<usize>> {
    let count = ids.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (x, &b) in ids.iter().enumerate() {
        blocks[b].push(x);
    }
    blocks
}

pub fn step_partitions(rs: &RealizationSet) -> Vec<StepPartition> {
    (1..=rs.steps())
        .map(|step| {
            let lambdas: Vec<&TowerElement> = rs.prefix_lambdas(step).collect();
            let block_of = class_ids(lambdas.iter().copied());
            let blocks = blocks_from_ids(&block_of);
            let lambdas = blocks.iter().map(|b| lambdas[b[0]].clone()).collect();
            StepPartition {
                step,
                block_of,
                blocks,
                lambdas,
            }
        })
        .collect()
}

/// Per step, the partition of all realizations by exact signed area of
/// that step's triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaClasses {
    pub class_of: Vec<Vec<usize>>,
}

impl AreaClasses {
    pub fn new(rs: &RealizationSet) -> Self {
        let class_of = (0..rs.steps())
            .map(|s| class_ids(rs.realizations().iter().map(|r| &r.step_area[s])))
            .collect();
        AreaClasses { class_of }
    }

    pub fn steps(&self) -> usize {
        self.class_of.len()
    }

    pub fn classes(&self, step: usize) -> Vec<Vec<usize>> {
        blocks_from_ids(&self.class_of[step - 1])
    }

    /// Equal areas before `g` imply equal areas after, at every step.
    pub fn admits(&self, g: &Perm) -> bool {
        self.class_of.iter().all(|ids| {
            let mut image = vec![usize::MAX; ids.len()];
            (0..ids.len()).all(|r| {
                let want = ids[g.apply(r)];
                let slot = &mut image[ids[r]];
                if *slot == usize::MAX {
                    *slot = want;
                    true
                } else {
                    *slot == want
                }
            })
        })
    }

    /// `g` maps every area class of `step` onto an area class.
    pub fn preserved_by(&self, g: &Perm, step: usize) -> bool {
        let ids = &self.class_of[step - 1];
        let classes = blocks_from_ids(ids);
        classes.iter().all(|c| {
            let target = ids[g.apply(c[0])];
            c.iter().all(|&r| ids[g.apply(r)] == target) && ids.iter().filter(|&&t| t == target).count() == c.len()
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Recursive,
    BruteForce,
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    order: BigUint,
    provenance: Provenance,
    elements: OnceLock<Vec<Perm>>,
}

impl PermGroup {
    /// Group with the given generators and a known order.
    pub fn new(degree: usize, generators: Vec<Perm>, order: BigUint, provenance: Provenance) -> Self {
        assert!(generators.iter().all(|g| g.degree() == degree));
        PermGroup {
            degree,
            generators,
            order,
            provenance,
            elements: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// `log2` of the order; exact for 2-groups.
    pub fn order_log2(&self) -> u64 {
        self.order.bits().saturating_sub(1)
    }

    pub fn is_power_of_two(&self) -> bool {
        self.order.count_ones() == 1
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_enumerable(&self) -> bool {
        self.order <= BigUint::from(ENUMERATION_CAP)
    }

    /// All elements in sorted order, by closure of the generators. Fails
    /// when the order exceeds [`ENUMERATION_CAP`].
    pub fn elements(&self) -> Result<&[Perm], GaloisError> {
        self.elements_within(ENUMERATION_CAP)
    }

    /// Like [`PermGroup::elements`] with a custom cap.
    pub fn elements_within(&self, cap: usize) -> Result<&[Perm], GaloisError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let too_large = || GaloisError::TooLarge {
            order: self.order.clone(),
            cap,
        };
        if self.order > BigUint::from(cap) {
            return Err(too_large());
        }
        let closure = closure(self.degree, &self.generators, cap).ok_or_else(too_large)?;
        Ok(self.elements.get_or_init(|| closure))
    }

    /// Elements as a set, for comparing groups.
    pub fn element_set(&self) -> Result<BTreeSet<Perm>, GaloisError> {
        Ok(self.elements()?.iter().cloned().collect())
    }

    pub fn contains(&self, g: &Perm) -> Result<bool, GaloisError> {
        Ok(self.elements()?.binary_search(g).is_ok())
    }
}

/// Sorted closure of `gens` under composition, or `None` once it passes
/// `cap` elements.
pub fn closure(degree: usize, gens: &[Perm], cap: usize) -> Option<Vec<Perm>> {
    let mut seen: IndexSet<Perm> = IndexSet::new();
    seen.insert(Perm::identity(degree));
    let mut frontier = vec![Perm::identity(degree)];
    while !frontier.is_empty() {
        let products: Vec<Perm> = frontier
            .par_iter()
            .flat_map_iter(|e| gens.iter().map(move |g| g.compose(e)))
            .collect();
        frontier = Vec::new();
        for p in products {
            if !seen.contains(&p) {
                seen.insert(p.clone());
                frontier.push(p);
                if seen.len() > cap {
                    return None;
                }
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.par_sort_unstable();
    Some(out)
}

/// Flip of sign bit `step - 1` on every realization whose prefix lies in
/// `block`.
fn flip(degree: usize, step: usize, part: &StepPartition, block: usize) -> Perm {
    let bit = 1usize << (step - 1);
    Perm::from_fn(degree, |x| {
        if part.block_of[x & (bit - 1)] == block {
            x ^ bit
        } else {
            x
        }
    })
}

/// Recursive construction: order `2^(sum k_l)`.
pub fn build_galois(rs: &RealizationSet, parts: &[StepPartition]) -> Result<PermGroup, GaloisError> {
    let degree = rs.len();
    if parts.len() != rs.steps() {
        return Err(GaloisError::InternalInconsistency(format!(
            "{} partitions for {} steps",
            parts.len(),
            rs.steps()
        )));
    }
    let mut gens: Vec<Perm> = Vec::new();
    let mut exponent = 0u64;
    for part in parts {
        let prefixes = 1usize << (part.step - 1);
        if part.block_of.len() != prefixes {
            return Err(GaloisError::InternalInconsistency(format!(
                "step {} partition covers {} prefixes, expected {prefixes}",
                part.step,
                part.block_of.len()
            )));
        }
        // Lifted generators act on prefixes through their low bits, so the
        // full image array restricted to 0..prefixes is the prefix action.
        for g in &gens {
            for block in &part.blocks {
                let target = part.block_of[g.apply(block[0])];
                let onto = block.iter().all(|&x| part.block_of[g.apply(x)] == target)
                    && part.blocks[target].len() == block.len();
                if !onto {
                    return Err(GaloisError::InternalInconsistency(format!(
                        "generator {g} does not map step-{} blocks onto blocks",
                        part.step
                    )));
                }
            }
        }
        gens.extend((0..part.k()).map(|b| flip(degree, part.step, part, b)));
        exponent += part.k() as u64;
    }
    let order = BigUint::one() << exponent;
    Ok(PermGroup::new(degree, gens, order, Provenance::Recursive))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The `idx`-th permutation of `0..n` in lexicographic order.
fn nth_permutation(n: usize, mut idx: usize) -> Perm {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        out.push(pool.remove(idx / f));
        idx %= f;
    }
    Perm::from_images(&out).expect("lexicographic permutation")
}

/// Filters every permutation of the realizations by the area condition.
pub fn brute_force_galois(rs: &RealizationSet) -> Result<PermGroup, GaloisError> {
    let degree = rs.len();
    if degree > BRUTE_FORCE_MAX_DEGREE {
        return Err(GaloisError::DegreeTooLarge {
            degree,
            limit: BRUTE_FORCE_MAX_DEGREE,
        });
    }
    let classes = AreaClasses::new(rs);
    let elements: Vec<Perm> = (0..factorial(degree))
        .into_par_iter()
        .map(|i| nth_permutation(degree, i))
        .filter(|g| classes.admits(g))
        .collect();
    let set: BTreeSet<&Perm> = elements.iter().collect();
    if !set.contains(&Perm::identity(degree)) {
        return Err(GaloisError::InternalInconsistency(
            "filtered set misses the identity".into(),
        ));
    }
    let closed = elements
        .par_iter()
        .all(|a| elements.iter().all(|b| set.contains(&a.compose(b))));
    if !closed {
        return Err(GaloisError::InternalInconsistency("filtered set is not closed".into()));
    }
    // greedy generating set
    let mut gens: Vec<Perm> = Vec::new();
    let mut span = vec![Perm::identity(degree)];
    for g in &elements {
        if span.binary_search(g).is_err() {
            gens.push(g.clone());
            span = closure(degree, &gens, elements.len()).expect("inside a finite group");
        }
    }
    let group = PermGroup::new(degree, gens, BigUint::from(elements.len()), Provenance::BruteForce);
    let _ = group.elements.set(elements);
    Ok(group)
}

/// Fixed-point counts of the involutions and the identity.
pub fn real_count_spectrum(pg: &PermGroup) -> Result<BTreeSet<usize>, GaloisError> {
    Ok(pg
        .elements()?
        .iter()
        .filter(|g| g.compose(g).is_identity())
        .map(Perm::fixed_points)
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    pub cycles: String,
    pub array: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionCheck {
    pub step: usize,
    pub k: Option<usize>,
    pub area_classes: usize,
    pub preserved: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub provenance: Provenance,
    pub degree: usize,
    /// Decimal string, exact.
    pub order: String,
    pub order_log2: u64,
    pub is_power_of_two: bool,
    pub k_sequence: Vec<usize>,
    pub generators: Vec<GeneratorReport>,
    /// Element order -> count; absent beyond the enumeration cap.
    pub order_profile: Option<BTreeMap<u64, usize>>,
    pub center_size: Option<usize>,
    pub invariant_partitions: Vec<PartitionCheck>,
    pub real_count_spectrum: Option<BTreeSet<usize>>,
    /// `(h1, h2, h3)` with `h1^4 = h2^2 = h3^2 = e`, `h2 h1 h2 = h1^-1`,
    /// `h3` commuting with both, generating the group. Only searched for
    /// order 16.
    pub relation_triple: Option<[String; 3]>,
}

pub fn order_profile(elements: &[Perm]) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for g in elements {
        *out.entry(g.order()).or_insert(0) += 1;
    }
    out
}

/// Elements commuting with every generator.
pub fn center_size(pg: &PermGroup) -> Result<usize, GaloisError> {
    let gens = pg.generators();
    Ok(pg
        .elements()?
        .par_iter()
        .filter(|z| gens.iter().all(|g| g.compose(z) == z.compose(g)))
        .count())
}

/// Searches for a triple with the dihedral-times-Z2 relations that
/// generates the whole group.
pub fn find_relation_triple(pg: &PermGroup) -> Result<Option<[Perm; 3]>, GaloisError> {
    let elements = pg.elements()?;
    let e = Perm::identity(pg.degree());
    let involutions: Vec<&Perm> = elements
        .iter()
        .filter(|g| !g.is_identity() && g.compose(g) == e)
        .collect();
    for h1 in elements.iter().filter(|g| g.order() == 4) {
        let h1_inv = h1.inverse();
        for h2 in involutions.iter().filter(|h2| h2.compose(h1).compose(h2) == h1_inv) {
            for h3 in &involutions {
                if h3.compose(h1) != h1.compose(h3) || h3.compose(h2) != h2.compose(h3) {
                    continue;
                }
                let gens = [h1.clone(), (*h2).clone(), (*h3).clone()];
                let span = closure(pg.degree(), &gens, elements.len());
                if span.is_some_and(|s| s.len() == elements.len()) {
                    return Ok(Some(gens));
                }
            }
        }
    }
    Ok(None)
}

/// Structural summary. `classes` supplies the per-step area classes the
/// generators must permute.
pub fn analyze(pg: &PermGroup, parts: &[StepPartition], classes: &AreaClasses) -> GroupReport {
    analyze_within(pg, parts, classes, ENUMERATION_CAP)
}

/// [`analyze`] with a custom enumeration cap.
pub fn analyze_within(pg: &PermGroup, parts: &[StepPartition], classes: &AreaClasses, cap: usize) -> GroupReport {
    let enumerable = pg.elements_within(cap).ok();
    let invariant_partitions = (1..=classes.steps())
        .map(|step| PartitionCheck {
            step,
            k: parts.get(step - 1).map(StepPartition::k),
            area_classes: classes.classes(step).len(),
            preserved: pg.generators().iter().all(|g| classes.preserved_by(g, step)),
        })
        .collect();
    let relation_triple = if pg.order() == &BigUint::from(16u32) {
        find_relation_triple(pg)
            .ok()
            .flatten()
            .map(|t| t.map(|g| g.to_string()))
    } else {
        None
    };
    GroupReport {
        provenance: pg.provenance(),
        degree: pg.degree(),
        order: pg.order().to_string(),
        order_log2: pg.order_log2(),
        is_power_of_two: pg.is_power_of_two(),
        k_sequence: parts.iter().map(StepPartition::k).collect(),
        generators: pg
            .generators()
            .iter()
            .map(|g| GeneratorReport {
                cycles: g.to_string(),
                array: g.images(),
            })
            .collect(),
        order_profile: enumerable.map(order_profile),
        center_size: enumerable.and(center_size(pg).ok()),
        invariant_partitions,
        real_count_spectrum: enumerable.and(real_count_spectrum(pg).ok()),
        relation_triple,
    }
}
