use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rigid_galois_core::galois::{
    analyze_within, brute_force_galois, build_galois, real_count_spectrum, AreaClasses, GroupReport,
    BRUTE_FORCE_MAX_DEGREE,
};
use rigid_galois_core::graph::GraphJson;
use rigid_galois_core::realization::RealizationDump;
use rigid_galois_core::tower::multiquadratic::{multiquadratic_degree, parse_rational};
use rigid_galois_core::{Graph, HennebergSequence, PermGroup};
use serde::Serialize;

use crate::config::{load_graph, read_file, RunConfig};
use crate::error::CliError;
use crate::protocol::{genericity_protocol, Certified, Rejection};
use crate::sampler::{sample_real, SampleReport};

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolSummary {
    pub certified_seed: u64,
    pub attempts: usize,
    pub rejections: Vec<Rejection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceCheck {
    pub order: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub graph: GraphJson,
    pub sequence: Vec<[u32; 3]>,
    pub seed: u64,
    pub range: u32,
    pub protocol: ProtocolSummary,
    pub labelling: BTreeMap<String, String>,
    pub realizations: usize,
    pub root_count: usize,
    pub group: GroupReport,
    pub brute_force: Option<BruteForceCheck>,
}

/// Everything computed by the analysis, for reuse by other commands.
pub struct Analysis {
    pub graph: Graph,
    pub sequence: HennebergSequence,
    pub certified: Certified,
    pub group: PermGroup,
    pub report: AnalyzeReport,
}

pub fn analyze(cfg: &RunConfig) -> Result<Analysis, CliError> {
    cfg.validate()?;
    let (g, seq) = load_graph(&read_file(&cfg.graph)?, cfg.base)?;
    analyze_graph(g, seq, cfg)
}

/// The full pipeline on an already loaded graph.
pub fn analyze_graph(g: Graph, seq: HennebergSequence, cfg: &RunConfig) -> Result<Analysis, CliError> {
    let internal = |e: rigid_galois_core::galois::GaloisError| CliError::Internal(e.to_string());
    let certified = genericity_protocol(&g, &seq, cfg.seed, cfg.range)?;
    let rs = &certified.realizations;
    let group = build_galois(rs, &certified.partitions).map_err(internal)?;
    let brute_force = if rs.len() <= BRUTE_FORCE_MAX_DEGREE {
        let brute = brute_force_galois(rs).map_err(internal)?;
        let equal = brute.element_set().map_err(internal)? == group.element_set().map_err(internal)?;
        if !equal {
            return Err(CliError::Internal("recursive and brute-force groups differ".into()));
        }
        Some(BruteForceCheck {
            order: brute.elements().map_err(internal)?.len(),
            equal,
        })
    } else {
        None
    };
    let classes = AreaClasses::new(rs);
    let group_report = analyze_within(&group, &certified.partitions, &classes, cfg.cap);
    let report = AnalyzeReport {
        graph: g.to_json(),
        sequence: seq.moves.iter().map(|m| [m.i, m.j, m.new]).collect(),
        seed: cfg.seed,
        range: cfg.range,
        protocol: ProtocolSummary {
            certified_seed: certified.seed,
            attempts: certified.attempts,
            rejections: certified.rejections.clone(),
        },
        labelling: certified.labelling.to_strings(),
        realizations: rs.len(),
        root_count: rs.tower().root_count(),
        group: group_report,
        brute_force,
    };
    Ok(Analysis {
        graph: g,
        sequence: seq,
        certified,
        group,
        report,
    })
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn summarize_analysis(r: &AnalyzeReport) -> String {
    let g = &r.group;
    let mut s = String::new();
    let _ = writeln!(s, "graph: {} vertices, {} edges", r.graph.n, r.graph.edges.len());
    let _ = writeln!(
        s,
        "sequence: {}",
        r.sequence
            .iter()
            .map(|m| format!("({} {} {})", m[0], m[1], m[2]))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(
        s,
        "labelling seed: {} (attempt {})",
        r.protocol.certified_seed, r.protocol.attempts
    );
    let _ = writeln!(s, "realizations: {}", r.realizations);
    let _ = writeln!(s, "k-sequence: [{}]", join(&g.k_sequence));
    let _ = writeln!(s, "group order: {} = 2^{}", g.order, g.order_log2);
    if let Some(b) = &r.brute_force {
        let _ = writeln!(s, "brute force: order {}, equal: {}", b.order, b.equal);
    }
    if let Some(p) = &g.order_profile {
        let _ = writeln!(s, "element orders: {}", join(p.iter().map(|(o, c)| format!("{o}:{c}"))));
    }
    if let Some(c) = g.center_size {
        let _ = writeln!(s, "center size: {c}");
    }
    if let Some(spec) = &g.real_count_spectrum {
        let _ = writeln!(s, "real-count spectrum: {{{}}}", join(spec));
    }
    if let Some(t) = &g.relation_triple {
        let _ = writeln!(s, "relation triple: h1 = {}, h2 = {}, h3 = {}", t[0], t[1], t[2]);
    }
    let preserved = g.invariant_partitions.iter().all(|p| p.preserved);
    let _ = writeln!(s, "generators preserve area classes: {preserved}");
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleOutput {
    pub k_sequence: Vec<usize>,
    pub order: String,
    pub report: SampleReport,
}

pub fn sample(cfg: &RunConfig) -> Result<SampleOutput, CliError> {
    let analysis = analyze(cfg)?;
    sample_analysis(&analysis, cfg)
}

pub fn sample_analysis(analysis: &Analysis, cfg: &RunConfig) -> Result<SampleOutput, CliError> {
    let predicted: BTreeSet<usize> = real_count_spectrum(&analysis.group)
        .map_err(|e| CliError::InvalidInput(format!("group too large to sample against: {e}")))?;
    let report = sample_real(&analysis.graph, &analysis.sequence, &predicted, cfg.trials, cfg.seed);
    Ok(SampleOutput {
        k_sequence: analysis.certified.k_sequence(),
        order: analysis.report.group.order.clone(),
        report,
    })
}

pub fn summarize_sample(out: &SampleOutput) -> String {
    let r = &out.report;
    let mut s = String::new();
    let _ = writeln!(s, "group order: {}", out.order);
    let _ = writeln!(s, "predicted counts: {{{}}}", join(&r.predicted));
    let _ = writeln!(s, "trials: {} ({} skipped as degenerate)", r.trials, r.skipped.len());
    let _ = writeln!(
        s,
        "observed: {}",
        join(r.histogram.iter().map(|(c, n)| format!("{c} real x{n}")))
    );
    let _ = writeln!(s, "violations: {}", r.violations.len());
    s
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MqReport {
    pub inputs: Vec<String>,
    pub k: usize,
    pub rank: usize,
    pub degree: String,
    /// Inputs whose product is a square, when the degree is below `2^k`.
    pub witness: Option<Vec<String>>,
    pub brute_force_checked: bool,
}

pub fn mqdeg(values: &[String]) -> Result<MqReport, CliError> {
    if values.is_empty() {
        return Err(CliError::InvalidInput("no values given".into()));
    }
    let parsed = values
        .iter()
        .map(|v| parse_rational(v).ok_or_else(|| CliError::InvalidInput(format!("not a rational number: {v}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let d = multiquadratic_degree(&parsed)?;
    let inputs: Vec<String> = parsed.iter().map(|q| q.to_string()).collect();
    Ok(MqReport {
        witness: d
            .witness
            .as_ref()
            .map(|w| w.iter().map(|&i| inputs[i].clone()).collect()),
        k: d.k,
        rank: d.rank,
        degree: d.degree().to_string(),
        brute_force_checked: d.brute_force_checked,
        inputs,
    })
}

pub fn summarize_mqdeg(r: &MqReport) -> String {
    let mut s = format!("degree: {} (GF(2) rank {} of {})\n", r.degree, r.rank, r.k);
    match &r.witness {
        Some(w) => {
            let _ = writeln!(s, "square product: {{{}}}", w.join(", "));
        }
        None if r.rank == r.k => s.push_str("no subset product is a square\n"),
        None => {}
    }
    s
}

pub fn realize(cfg: &RunConfig) -> Result<RealizationDump, CliError> {
    cfg.validate()?;
    let (g, seq) = load_graph(&read_file(&cfg.graph)?, cfg.base)?;
    let certified = genericity_protocol(&g, &seq, cfg.seed, cfg.range)?;
    certified
        .realizations
        .numeric_dump(cfg.precision)
        .map_err(|e| CliError::Internal(e.to_string()))
}
