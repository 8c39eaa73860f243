//! Double-run genericity certification.
//!
//! A random rational labelling stands in for a generic one. Each attempt
//! enumerates realizations under two independent labellings and accepts
//! the first when both succeed (which includes the squared-distance versus
//! squared-area correspondence) and give the same step partitions.

use std::collections::BTreeSet;

use rigid_galois_core::galois::{step_partitions, StepPartition};
use rigid_galois_core::graph::random_labelling;
use rigid_galois_core::realization::enumerate_realizations;
use rigid_galois_core::{Graph, HennebergSequence, Labelling, RealizationSet};
use serde::Serialize;

use crate::error::CliError;

/// Resamples after the first attempt.
pub const RETRY_BUDGET: usize = 5;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Rejection {
    pub seeds: [u64; 2],
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Certified {
    pub seed: u64,
    pub attempts: usize,
    pub rejections: Vec<Rejection>,
    pub labelling: Labelling,
    pub realizations: RealizationSet,
    pub partitions: Vec<StepPartition>,
}

impl Certified {
    pub fn k_sequence(&self) -> Vec<usize> {
        self.partitions.iter().map(StepPartition::k).collect()
    }
}

fn block_sets(parts: &[StepPartition]) -> Vec<BTreeSet<Vec<usize>>> {
    parts.iter().map(|p| p.blocks.iter().cloned().collect()).collect()
}

/// Same blocks at every step, ignoring block numbering.
pub fn same_partitions(a: &[StepPartition], b: &[StepPartition]) -> bool {
    block_sets(a) == block_sets(b)
}

fn run_once(
    g: &Graph,
    seq: &HennebergSequence,
    lab: &Labelling,
) -> Result<(RealizationSet, Vec<StepPartition>), String> {
    let rs = enumerate_realizations(g, seq, lab).map_err(|e| e.to_string())?;
    let parts = step_partitions(&rs);
    Ok((rs, parts))
}

pub fn genericity_protocol(g: &Graph, seq: &HennebergSequence, seed: u64, range: u32) -> Result<Certified, CliError> {
    genericity_protocol_with(g, seq, seed, |g, s| random_labelling(g, s, range))
}

/// The protocol with a custom labeller; attempt `a` uses seeds `seed + 2a`
/// and `seed + 2a + 1`.
pub fn genericity_protocol_with(
    g: &Graph,
    seq: &HennebergSequence,
    seed: u64,
    labeller: impl Fn(&Graph, u64) -> Labelling,
) -> Result<Certified, CliError> {
    let mut rejections = Vec::new();
    for attempt in 0..=RETRY_BUDGET {
        let seeds = [
            seed.wrapping_add(2 * attempt as u64),
            seed.wrapping_add(2 * attempt as u64 + 1),
        ];
        let lab = labeller(g, seeds[0]);
        let first = run_once(g, seq, &lab);
        let second = run_once(g, seq, &labeller(g, seeds[1]));
        let reason = match (first, second) {
            (Ok((rs, parts)), Ok((_, other))) => {
                if same_partitions(&parts, &other) {
                    return Ok(Certified {
                        seed: seeds[0],
                        attempts: attempt + 1,
                        rejections,
                        labelling: lab,
                        realizations: rs,
                        partitions: parts,
                    });
                }
                "the two runs produced different step partitions".to_string()
            }
            (Err(e), _) => format!("seed {}: {e}", seeds[0]),
            (_, Err(e)) => format!("seed {}: {e}", seeds[1]),
        };
        rejections.push(Rejection { seeds, reason });
    }
    let last = rejections.last().map(|r| r.reason.clone()).unwrap_or_default();
    Err(CliError::Genericity {
        attempts: RETRY_BUDGET + 1,
        last,
    })
}
