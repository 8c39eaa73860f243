//! Floating-point count of real realizations under random real labels.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rigid_galois_core::graph::{edge_key, Vertex};
use rigid_galois_core::{Graph, HennebergSequence};
use serde::Serialize;

/// Trials with `|beta^2|` (or a squared base length) below this are
/// skipped as degenerate.
pub const BETA_TOLERANCE: f64 = 1e-9;

pub type RealLabels = BTreeMap<(Vertex, Vertex), f64>;

/// Number of real realizations, or `None` for a degenerate trial.
pub fn count_real_realizations(g: &Graph, seq: &HennebergSequence, labels: &RealLabels, tol: f64) -> Option<usize> {
    fn walk(
        seq: &HennebergSequence,
        labels: &RealLabels,
        tol: f64,
        step: usize,
        pts: &mut [(f64, f64)],
    ) -> Option<usize> {
        let Some(mv) = seq.moves.get(step) else {
            return Some(1);
        };
        let (pi, pj) = (pts[mv.i as usize - 1], pts[mv.j as usize - 1]);
        let (dx, dy) = (pj.0 - pi.0, pj.1 - pi.1);
        let l = dx * dx + dy * dy;
        if l < tol {
            return None;
        }
        let lin = labels[&edge_key(mv.i, mv.new)];
        let ljn = labels[&edge_key(mv.j, mv.new)];
        let alpha = (lin + l - ljn) / (2.0 * l);
        let beta_sq = lin / l - alpha * alpha;
        if beta_sq.abs() < tol {
            return None;
        }
        if beta_sq < 0.0 {
            return Some(0);
        }
        let beta = beta_sq.sqrt();
        let mut total = 0;
        for s in [1.0, -1.0] {
            pts[mv.new as usize - 1] = (pi.0 + alpha * dx - s * beta * dy, pi.1 + alpha * dy + s * beta * dx);
            total += walk(seq, labels, tol, step + 1, pts)?;
        }
        Some(total)
    }
    let mut pts = vec![(0.0, 0.0); g.n()];
    pts[seq.base.1 as usize - 1] = (1.0, 0.0);
    walk(seq, labels, tol, 0, &mut pts)
}

/// Even trials draw labels uniformly from `(0.01, 4)`; odd trials use the
/// squared distances of random points, so at least one realization is
/// real. The base edge is always 1.
pub fn random_real_labels(g: &Graph, seq: &HennebergSequence, trial: usize, rng: &mut ChaCha8Rng) -> RealLabels {
    let base = edge_key(seq.base.0, seq.base.1);
    let mut labels: RealLabels = if trial.is_multiple_of(2) {
        g.edges().iter().map(|&e| (e, rng.gen_range(0.01..4.0))).collect()
    } else {
        let mut pts: Vec<(f64, f64)> = (0..g.n())
            .map(|_| (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        pts[seq.base.0 as usize - 1] = (0.0, 0.0);
        pts[seq.base.1 as usize - 1] = (1.0, 0.0);
        g.edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (pts[u as usize - 1], pts[v as usize - 1]);
                ((u, v), (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2))
            })
            .collect()
    };
    labels.insert(base, 1.0);
    labels
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SampleViolation {
    pub trial: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SampleReport {
    pub trials: usize,
    pub skipped: Vec<usize>,
    pub histogram: BTreeMap<usize, usize>,
    pub predicted: BTreeSet<usize>,
    pub violations: Vec<SampleViolation>,
}

/// Runs `trials` independent trials in parallel. Trial `t` uses stream `t`
/// of a ChaCha generator keyed by `seed`.
pub fn sample_real(
    g: &Graph,
    seq: &HennebergSequence,
    predicted: &BTreeSet<usize>,
    trials: usize,
    seed: u64,
) -> SampleReport {
    let outcomes: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let labels = random_real_labels(g, seq, trial, &mut rng);
            count_real_realizations(g, seq, &labels, BETA_TOLERANCE)
        })
        .collect();
    let mut report = SampleReport {
        trials,
        skipped: Vec::new(),
        histogram: BTreeMap::new(),
        predicted: predicted.clone(),
        violations: Vec::new(),
    };
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            None => report.skipped.push(trial),
            Some(count) => {
                *report.histogram.entry(count).or_insert(0) += 1;
                if !predicted.contains(&count) {
                    report.violations.push(SampleViolation { trial, count });
                }
            }
        }
    }
    report
}
