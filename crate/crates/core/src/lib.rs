//! Exact Galois groups of minimally rigid graphs built by Henneberg 1-steps.
//!
//! The pipeline runs bottom-up through four modules:
//!
//! * [`graph`]: graph input, Laman verification, Henneberg-1 sequence
//!   extraction and random rational labellings.
//! * [`tower`]: exact arithmetic in iterated quadratic extensions of Q with
//!   certified numeric evaluation, plus multiquadratic degree computations
//!   over Q.
//! * [`realization`]: exact enumeration of all 2^(n-2) normalized
//!   realizations together with per-step signed areas and base-pair squared
//!   distances.
//! * [`galois`]: step partitions, the recursive group construction, the
//!   brute-force filter over the symmetric group and structural analysis of
//!   the resulting permutation group.
//!
//! ```
//! use rigid_galois_core::{galois, graph, realization};
//!
//! let g = graph::parse_graph("1 2\n1 3\n2 3\n1 4\n2 4\n3 5\n4 5").unwrap();
//! let seq = graph::henneberg1_sequence(&g).unwrap();
//! let lab = graph::random_labelling(&g, 7, 100);
//! let rs = realization::enumerate_realizations(&g, &seq, &lab).unwrap();
//! let parts = galois::step_partitions(&rs);
//! let group = galois::build_galois(&rs, &parts).unwrap();
//! assert_eq!(rs.len(), 8);
//! assert_eq!(group.order_log2(), 4);
//! ```

pub mod galois;
pub mod graph;
pub mod realization;
pub mod tower;

pub use galois::{GroupReport, Perm, PermGroup, StepPartition};
pub use graph::{Graph, HennebergSequence, Labelling, Move};
pub use realization::{Point, Realization, RealizationSet};
pub use tower::{Monomial, RootId, Tower, TowerElement};
