//! Exact enumeration of normalized realizations of a type-1 graph.
//!
//! The base edge is pinned to `(0,0)`-`(1,0)`. Step `l` of the Henneberg
//! sequence places its new vertex on one of the two intersections of the
//! circles around its neighbours; sign `+1` or `-1` selects the branch
//! relative to the root adjoined for that step's squared base distance.
//! Realizations are indexed by a bitmask whose bit `l - 1` is set when step
//! `l` took the `-1` branch.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, HennebergSequence, Labelling, Vertex};
use crate::tower::numeric::NumericValue;
use crate::tower::{is_rational_square, RootId, Tower, TowerElement, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizationError {
    #[error("labelling is not generic: {0}")]
    GenericityFailure(String),
    #[error("the two base points coincide")]
    CoincidentBasePoints,
    #[error("Henneberg sequence does not rebuild the graph")]
    InvalidSequence,
    #[error("edge {0} {1} has no label")]
    MissingLabel(Vertex, Vertex),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// A point with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: TowerElement,
    pub y: TowerElement,
}

impl Point {
    pub fn new(x: TowerElement, y: TowerElement) -> Self {
        Point { x, y }
    }

    pub fn rational(x: BigRational, y: BigRational) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn squared_distance(&self, o: &Point, tower: &Tower) -> TowerElement {
        let dx = &o.x - &self.x;
        let dy = &o.y - &self.y;
        &tower.square(&dx) + &tower.square(&dy)
    }
}

/// Signed area `((x2 - x3)(y1 - y3) - (x1 - x3)(y2 - y3)) / 2`.
///
/// With this formula `(0,0), (1,0), (0,1)` has area `-1/2`.
pub fn signed_area(p1: &Point, p2: &Point, p3: &Point, tower: &Tower) -> TowerElement {
    let a = tower.mul(&(&p2.x - &p3.x), &(&p1.y - &p3.y));
    let b = tower.mul(&(&p1.x - &p3.x), &(&p2.y - &p3.y));
    (&a - &b).scale(&BigRational::new(1.into(), 2.into()))
}

/// The 4x4 Cayley-Menger determinant of a triangle with squared side
/// lengths `l12, l13, l23`; it equals `-16 A^2`.
pub fn cayley_menger_determinant(
    l12: &TowerElement,
    l13: &TowerElement,
    l23: &TowerElement,
    tower: &Tower,
) -> TowerElement {
    // a^2 + b^2 + c^2 - 2ab - 2ac - 2bc
    let squares = &(&tower.square(l12) + &tower.square(l13)) + &tower.square(l23);
    let cross = &(&tower.mul(l12, l13) + &tower.mul(l12, l23)) + &tower.mul(l13, l23);
    &squares - &cross.scale(&BigRational::from_integer(2.into()))
}

/// Squared area from squared side lengths.
pub fn cayley_menger_sq_area(
    l12: &TowerElement,
    l13: &TowerElement,
    l23: &TowerElement,
    tower: &Tower,
) -> TowerElement {
    cayley_menger_determinant(l12, l13, l23, tower).scale(&BigRational::new((-1).into(), 16.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> i8 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

#[derive(Clone, Debug)]
struct Solved {
    alpha: TowerElement,
    beta_sq: TowerElement,
    root: Option<RootId>,
}

/// Roots keyed by their radicand, plus per-distance intersection data.
#[derive(Clone, Debug, Default)]
pub struct PlacementCache {
    roots: HashMap<TowerElement, RootId>,
    solved: HashMap<[TowerElement; 3], Solved>,
}

impl PlacementCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }
}

#[derive(Clone, Debug)]
pub struct Placement {
    pub point: Point,
    /// Signed area of `(p_i, p_j, new point)`.
    pub area: TowerElement,
    pub beta_sq: TowerElement,
    /// Root used for the perpendicular offset; `None` when `beta_sq = 0`.
    pub root: Option<RootId>,
}

/// Places a vertex at squared distances `lam_in` from `p_i` and `lam_jn`
/// from `p_j`.
///
/// With `d = p_j - p_i`, `L = |d|^2`, `alpha = (lam_in + L - lam_jn) / 2L`
/// and `beta^2 = lam_in / L - alpha^2`, the result is
/// `p_i + alpha d + branch * beta * (-d_y, d_x)`. One root is adjoined per
/// distinct `beta^2`.
pub fn place_vertex(
    p_i: &Point,
    p_j: &Point,
    lam_in: &TowerElement,
    lam_jn: &TowerElement,
    branch: Branch,
    tower: &mut Tower,
    cache: &mut PlacementCache,
) -> Result<Placement, RealizationError> {
    let dx = &p_j.x - &p_i.x;
    let dy = &p_j.y - &p_i.y;
    let base_sq = &tower.square(&dx) + &tower.square(&dy);
    if base_sq.is_zero() {
        return Err(RealizationError::CoincidentBasePoints);
    }
    let key = [base_sq.clone(), lam_in.clone(), lam_jn.clone()];
    let solved = match cache.solved.get(&key) {
        Some(s) => s.clone(),
        None => {
            let inv = tower.inv(&base_sq)?;
            let half = BigRational::new(1.into(), 2.into());
            let alpha = tower.mul(&(&(lam_in + &base_sq) - lam_jn), &inv).scale(&half);
            let beta_sq = &tower.mul(lam_in, &inv) - &tower.square(&alpha);
            let root = if beta_sq.is_zero() {
                None
            } else if let Some(&r) = cache.roots.get(&beta_sq) {
                Some(r)
            } else {
                let r = tower.adjoin_sqrt(beta_sq.clone())?;
                cache.roots.insert(beta_sq.clone(), r);
                Some(r)
            };
            let s = Solved { alpha, beta_sq, root };
            cache.solved.insert(key, s.clone());
            s
        }
    };
    let mut x = &p_i.x + &tower.mul(&solved.alpha, &dx);
    let mut y = &p_i.y + &tower.mul(&solved.alpha, &dy);
    if let Some(r) = solved.root {
        let mut off_x = -&tower.mul_root(&dy, r);
        let mut off_y = tower.mul_root(&dx, r);
        if branch == Branch::Minus {
            off_x = -off_x;
            off_y = -off_y;
        }
        x = &x + &off_x;
        y = &y + &off_y;
    }
    let point = Point { x, y };
    let area = signed_area(p_i, p_j, &point, tower);
    Ok(Placement {
        point,
        area,
        beta_sq: solved.beta_sq,
        root: solved.root,
    })
}

/// One normalized realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    /// `+1`/`-1` per Henneberg step.
    pub signs: Vec<i8>,
    /// Coordinates of vertex `v` at index `v - 1`.
    pub coords: Vec<Point>,
    /// Signed area of `(i_l, j_l, n_l)` at step `l` (index `l - 1`).
    pub step_area: Vec<TowerElement>,
    /// Squared distance between `i_l` and `j_l` before step `l`.
    pub step_lambda: Vec<TowerElement>,
}

impl Realization {
    pub fn coord(&self, v: Vertex) -> &Point {
        &self.coords[v as usize - 1]
    }
}

/// All `2^(n-2)` realizations in bitmask order, sharing one tower.
#[derive(Clone, Debug)]
pub struct RealizationSet {
    n: usize,
    sequence: HennebergSequence,
    tower: Tower,
    realizations: Vec<Realization>,
    step_roots: Vec<Vec<Option<RootId>>>,
}

struct Partial {
    coords: Vec<Option<Point>>,
    areas: Vec<TowerElement>,
    lambdas: Vec<TowerElement>,
    signs: Vec<i8>,
}

fn label(lab: &Labelling, u: Vertex, v: Vertex) -> Result<TowerElement, RealizationError> {
    lab.get(u, v)
        .cloned()
        .map(TowerElement::from)
        .ok_or(RealizationError::MissingLabel(u, v))
}

/// Enumerates every realization, level by level, sharing prefixes.
pub fn enumerate_realizations(
    g: &Graph,
    seq: &HennebergSequence,
    lab: &Labelling,
) -> Result<RealizationSet, RealizationError> {
    if !seq.is_valid_for(g) {
        return Err(RealizationError::InvalidSequence);
    }
    let n = g.n();
    let (b1, b2) = seq.base;
    let mut tower = Tower::new();
    let mut cache = PlacementCache::new();
    let zero = BigRational::zero();

    let mut start = Partial {
        coords: vec![None; n],
        areas: Vec::new(),
        lambdas: Vec::new(),
        signs: Vec::new(),
    };
    start.coords[b1 as usize - 1] = Some(Point::rational(zero.clone(), zero.clone()));
    start.coords[b2 as usize - 1] = Some(Point::rational(BigRational::one(), zero));
    let mut level = vec![start];
    let mut step_roots = Vec::with_capacity(seq.len());

    for (idx, mv) in seq.moves.iter().enumerate() {
        let step = idx + 1;
        let lam_in = label(lab, mv.i, mv.new)?;
        let lam_jn = label(lab, mv.j, mv.new)?;
        let half = level.len();
        let mut next: Vec<Option<Partial>> = (0..2 * half).map(|_| None).collect();
        let mut roots = Vec::with_capacity(half);
        for (mask, partial) in level.iter().enumerate() {
            let p_i = partial.coords[mv.i as usize - 1].as_ref().expect("placed");
            let p_j = partial.coords[mv.j as usize - 1].as_ref().expect("placed");
            let lambda = p_i.squared_distance(p_j, &tower);
            let mut prefix_root = None;
            for (offset, branch) in [(0, Branch::Plus), (half, Branch::Minus)] {
                let placed =
                    place_vertex(p_i, p_j, &lam_in, &lam_jn, branch, &mut tower, &mut cache).map_err(|e| match e {
                        RealizationError::CoincidentBasePoints => RealizationError::GenericityFailure(format!(
                            "vertices {} and {} coincide at step {step}",
                            mv.i, mv.j
                        )),
                        RealizationError::Tower(t) => RealizationError::GenericityFailure(format!("step {step}: {t}")),
                        other => other,
                    })?;
                if placed.root.is_none() {
                    return Err(RealizationError::GenericityFailure(format!(
                        "vertex {} is collinear with {} and {} at step {step}",
                        mv.new, mv.i, mv.j
                    )));
                }
                if let Some(q) = placed.beta_sq.as_rational() {
                    if is_rational_square(&q) {
                        return Err(RealizationError::GenericityFailure(format!(
                            "step {step} adjoins the square root of the rational square {q}"
                        )));
                    }
                }
                prefix_root = placed.root;
                let mut coords = partial.coords.clone();
                coords[mv.new as usize - 1] = Some(placed.point);
                let mut areas = partial.areas.clone();
                areas.push(placed.area);
                let mut lambdas = partial.lambdas.clone();
                lambdas.push(lambda.clone());
                let mut signs = partial.signs.clone();
                signs.push(branch.sign());
                next[mask + offset] = Some(Partial {
                    coords,
                    areas,
                    lambdas,
                    signs,
                });
            }
            roots.push(prefix_root);
        }
        step_roots.push(roots);
        level = next.into_iter().map(|p| p.expect("filled")).collect();
    }

    let realizations = level
        .into_iter()
        .map(|p| Realization {
            signs: p.signs,
            coords: p.coords.into_iter().map(|c| c.expect("every vertex placed")).collect(),
            step_area: p.areas,
            step_lambda: p.lambdas,
        })
        .collect();
    let rs = RealizationSet {
        n,
        sequence: seq.clone(),
        tower,
        realizations,
        step_roots,
    };
    rs.check_lambda_area_correspondence()
        .map_err(RealizationError::GenericityFailure)?;
    Ok(rs)
}

/// Class ids by first occurrence: equal keys get equal ids.
pub(crate) fn class_ids<'a, T: std::hash::Hash + Eq + 'a>(keys: impl IntoIterator<Item = &'a T>) -> Vec<usize> {
    let mut seen: HashMap<&T, usize> = HashMap::new();
    keys.into_iter()
        .map(|k| {
            let next = seen.len();
            *seen.entry(k).or_insert(next)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericPoint {
    pub vertex: Vertex,
    pub x: NumericValue,
    pub y: NumericValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericRealization {
    pub index: usize,
    pub signs: Vec<i8>,
    pub coords: Vec<NumericPoint>,
    pub step_areas: Vec<NumericValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationDump {
    pub precision: f64,
    pub root_count: usize,
    pub sequence: Vec<[Vertex; 3]>,
    pub realizations: Vec<NumericRealization>,
}

impl RealizationSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }

    /// Number of Henneberg steps.
    pub fn steps(&self) -> usize {
        self.sequence.len()
    }

    pub fn sequence(&self) -> &HennebergSequence {
        &self.sequence
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn realizations(&self) -> &[Realization] {
        &self.realizations
    }

    pub fn get(&self, index: usize) -> &Realization {
        &self.realizations[index]
    }

    /// Root used at step `step` (1-based) by the prefix `mask`.
    pub fn step_root(&self, step: usize, mask: usize) -> Option<RootId> {
        self.step_roots[step - 1][mask]
    }

    /// `lambda` of step `step` for each prefix of length `step - 1`.
    pub fn prefix_lambdas(&self, step: usize) -> impl Iterator<Item = &TowerElement> {
        (0..1usize << (step - 1)).map(move |m| &self.realizations[m].step_lambda[step - 1])
    }

    /// Signed area of step `step` for each prefix of length `step`.
    pub fn prefix_areas(&self, step: usize) -> impl Iterator<Item = &TowerElement> {
        (0..1usize << step).map(move |m| &self.realizations[m].step_area[step - 1])
    }

    /// Equal `lambda` exactly when equal squared area, at every step.
    pub fn check_lambda_area_correspondence(&self) -> Result<usize, String> {
        let mut checks = 0;
        for step in 1..=self.steps() {
            let lambda_ids = class_ids(self.prefix_lambdas(step));
            let squares: Vec<TowerElement> = (0..1usize << (step - 1))
                .map(|m| self.tower.square(&self.realizations[m].step_area[step - 1]))
                .collect();
            let area_ids = class_ids(&squares);
            if lambda_ids != area_ids {
                return Err(format!(
                    "step {step}: squared base distances and squared areas induce different partitions"
                ));
            }
            checks += lambda_ids.len();
        }
        Ok(checks)
    }

    /// Every edge length reproduces its label exactly and the base edge is
    /// pinned.
    pub fn check_compatibility(&self, g: &Graph, lab: &Labelling) -> Result<usize, String> {
        let (b1, b2) = self.sequence.base;
        let origin = Point::rational(BigRational::zero(), BigRational::zero());
        let unit = Point::rational(BigRational::one(), BigRational::zero());
        let mut checks = 0;
        for (idx, r) in self.realizations.iter().enumerate() {
            if r.coord(b1) != &origin || r.coord(b2) != &unit {
                return Err(format!("realization {idx}: base edge not normalized"));
            }
            for &(u, v) in g.edges() {
                let want = lab.get(u, v).ok_or(format!("edge {u} {v} has no label"))?;
                let got = r.coord(u).squared_distance(r.coord(v), &self.tower);
                if !(&got - &TowerElement::from(want.clone())).is_zero() {
                    return Err(format!("realization {idx}: edge {u} {v} has squared length {got}"));
                }
                checks += 1;
            }
        }
        Ok(checks)
    }

    /// Realizations differing in the sign of step `l` agree on all earlier
    /// vertices and have opposite step-`l` areas.
    pub fn check_pairing(&self) -> Result<usize, String> {
        let mut checks = 0;
        let mut placed_before: Vec<Vertex> = vec![self.sequence.base.0, self.sequence.base.1];
        for (idx, mv) in self.sequence.moves.iter().enumerate() {
            let bit = 1usize << idx;
            for m in (0..self.len()).filter(|m| m & bit == 0) {
                let (a, b) = (&self.realizations[m], &self.realizations[m | bit]);
                for &v in &placed_before {
                    if a.coord(v) != b.coord(v) {
                        return Err(format!("step {}: {m} and {} differ at vertex {v}", idx + 1, m | bit));
                    }
                }
                if !(&a.step_area[idx] + &b.step_area[idx]).is_zero() {
                    return Err(format!(
                        "step {}: areas of {m} and {} are not opposite",
                        idx + 1,
                        m | bit
                    ));
                }
                if a.coord(mv.new) == b.coord(mv.new) {
                    return Err(format!("step {}: reflection of vertex {} is trivial", idx + 1, mv.new));
                }
                checks += 1;
            }
            placed_before.push(mv.new);
        }
        Ok(checks)
    }

    /// `16 a^2 + CM = 0` for every step triangle of every realization.
    pub fn check_cayley_menger(&self) -> Result<usize, String> {
        let sixteen = BigRational::from_integer(16.into());
        let mut checks = 0;
        for (idx, r) in self.realizations.iter().enumerate() {
            for (s, mv) in self.sequence.moves.iter().enumerate() {
                let (pi, pj, pn) = (r.coord(mv.i), r.coord(mv.j), r.coord(mv.new));
                let lij = pi.squared_distance(pj, &self.tower);
                let lin = pi.squared_distance(pn, &self.tower);
                let ljn = pj.squared_distance(pn, &self.tower);
                let cm = cayley_menger_determinant(&lij, &lin, &ljn, &self.tower);
                let lhs = &self.tower.square(&r.step_area[s]).scale(&sixteen) + &cm;
                if !lhs.is_zero() {
                    return Err(format!("realization {idx}, step {}: 16 a^2 + CM = {lhs}", s + 1));
                }
                checks += 1;
            }
        }
        Ok(checks)
    }

    /// Numeric coordinates and areas, each certified to `precision`.
    pub fn numeric_dump(&self, precision: f64) -> Result<RealizationDump, TowerError> {
        let mut out = Vec::with_capacity(self.len());
        for (index, r) in self.realizations.iter().enumerate() {
            let mut coords = Vec::with_capacity(self.n);
            for (v, p) in r.coords.iter().enumerate() {
                coords.push(NumericPoint {
                    vertex: v as Vertex + 1,
                    x: (&self.tower.numeric_eval(&p.x, precision)?).into(),
                    y: (&self.tower.numeric_eval(&p.y, precision)?).into(),
                });
            }
            let step_areas = r
                .step_area
                .iter()
                .map(|a| self.tower.numeric_eval(a, precision).map(|b| (&b).into()))
                .collect::<Result<_, _>>()?;
            out.push(NumericRealization {
                index,
                signs: r.signs.clone(),
                coords,
                step_areas,
            });
        }
        Ok(RealizationDump {
            precision,
            root_count: self.tower.root_count(),
            sequence: self.sequence.moves.iter().map(|m| [m.i, m.j, m.new]).collect(),
            realizations: out,
        })
    }

    /// Certified numeric coordinates of every vertex of every realization.
    fn numeric_coords(&self, precision: f64) -> Result<Vec<Vec<[NumericValue; 2]>>, TowerError> {
        self.realizations
            .iter()
            .map(|r| {
                r.coords
                    .iter()
                    .map(|p| {
                        Ok([
                            (&self.tower.numeric_eval(&p.x, precision)?).into(),
                            (&self.tower.numeric_eval(&p.y, precision)?).into(),
                        ])
                    })
                    .collect()
            })
            .collect()
    }
}

/// Matches realizations of the same graph and labelling computed from two
/// different sequences: `result[i]` is the index in `b` of realization `i`
/// of `a`. Coordinates are compared numerically.
pub fn match_realizations(a: &RealizationSet, b: &RealizationSet) -> Result<Option<Vec<usize>>, TowerError> {
    if a.len() != b.len() || a.n != b.n {
        return Ok(None);
    }
    let (ca, cb) = (a.numeric_coords(1e-30)?, b.numeric_coords(1e-30)?);
    let close = |p: &[NumericValue; 2], q: &[NumericValue; 2]| {
        p.iter()
            .zip(q)
            .all(|(s, t)| (s.re - t.re).abs() <= 1e-9 && (s.im - t.im).abs() <= 1e-9)
    };
    let mut used = vec![false; b.len()];
    let mut map = Vec::with_capacity(a.len());
    for ra in &ca {
        let hit = cb
            .iter()
            .enumerate()
            .filter(|(j, rb)| !used[*j] && ra.iter().zip(rb.iter()).all(|(p, q)| close(p, q)))
            .map(|(j, _)| j)
            .collect::<Vec<_>>();
        match hit.as_slice() {
            [j] => {
                used[*j] = true;
                map.push(*j);
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(map))
}
