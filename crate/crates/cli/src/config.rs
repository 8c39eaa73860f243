use std::path::{Path, PathBuf};

use rigid_galois_core::graph::{henneberg1_sequence, is_laman, parse_graph, Vertex};
use rigid_galois_core::{Graph, HennebergSequence};

use crate::error::CliError;

pub const SEED_ENV: &str = "RIGID_GALOIS_SEED";
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RANGE: u32 = 1000;
pub const DEFAULT_PRECISION: f64 = 1e-30;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub base: Option<(Vertex, Vertex)>,
    pub seed: u64,
    /// Labels are `p/q` with `p, q` in `1..=range`.
    pub range: u32,
    pub precision: f64,
    pub trials: usize,
    pub cap: usize,
}

impl RunConfig {
    pub fn new(graph: impl Into<PathBuf>) -> Self {
        RunConfig {
            graph: graph.into(),
            base: None,
            seed: DEFAULT_SEED,
            range: DEFAULT_RANGE,
            precision: DEFAULT_PRECISION,
            trials: DEFAULT_TRIALS,
            cap: DEFAULT_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::InvalidInput(what.to_string()));
        if self.seed == 0 {
            return bad("seed must be positive");
        }
        if self.range == 0 {
            return bad("range must be positive");
        }
        if self.trials == 0 {
            return bad("trials must be positive");
        }
        if !(self.precision > 0.0 && self.precision.is_finite()) {
            return bad("precision must be a positive number");
        }
        if self.cap == 0 {
            return bad("cap must be positive");
        }
        Ok(())
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses, applies the base override and checks the graph is type-1.
pub fn load_graph(text: &str, base: Option<(Vertex, Vertex)>) -> Result<(Graph, HennebergSequence), CliError> {
    let mut g = parse_graph(text)?;
    if let Some((u, v)) = base {
        g = g.with_base(u, v)?;
    }
    if !is_laman(&g) {
        return Err(CliError::NotLaman {
            vertices: g.n(),
            edges: g.edge_count(),
        });
    }
    let seq = henneberg1_sequence(&g)?;
    Ok((g, seq))
}
