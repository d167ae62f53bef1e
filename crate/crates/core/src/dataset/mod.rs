//! Laplacian-spectrum labelled graph dataset: random generation, labelling,
//! colour-refinement duplicate screening and file emission.

mod generators;
mod wl;

pub use generators::{gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz};
pub use wl::{wl1_test, wl_equivalent_pairs, ColorInterner, Signature, WlOutcome};

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::invariants::{laplacian_spectrum, Spectrum};
use crate::search::derive_seed;

/// Source of a dataset graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    ErdosRenyi,
    WattsStrogatz,
    /// Graphs of the target size taken verbatim from a user-supplied seed file.
    HouseOfGraphs,
    BarabasiAlbert,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::ErdosRenyi, Model::WattsStrogatz, Model::HouseOfGraphs, Model::BarabasiAlbert];

    pub fn short_name(self) -> &'static str {
        match self {
            Model::ErdosRenyi => "er",
            Model::WattsStrogatz => "ws",
            Model::HouseOfGraphs => "hog",
            Model::BarabasiAlbert => "ba",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.short_name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown model '{s}' (expected er, ws, hog or ba)")))
    }
}

/// Full generation recipe. The default reproduces the 11-node layout:
/// 101 ER probabilities x 10, 27 WS models x 20, BA with m in 2..=9.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetSpec {
    pub n: usize,
    pub models: Vec<Model>,
    /// ER uses `p = i / er_steps` for `i` in `0..=er_steps`.
    pub er_steps: usize,
    pub er_per_p: usize,
    pub ws_k: Vec<usize>,
    pub ws_beta: Vec<f64>,
    pub ws_per_model: usize,
    pub ba_m: Vec<usize>,
    /// Graphs grown per (seed graph, m) pair.
    pub ba_per_seed: usize,
    /// Smallest and largest seed-graph order used for BA growth.
    pub ba_seed_nodes: (usize, usize),
    pub seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            n: 11,
            models: Model::ALL.to_vec(),
            er_steps: 100,
            er_per_p: 10,
            ws_k: vec![4, 6, 8],
            ws_beta: (1..=9).map(|i| i as f64 / 10.0).collect(),
            ws_per_model: 20,
            ba_m: (2..=9).collect(),
            ba_per_seed: 1,
            ba_seed_nodes: (3, 10),
            seed: 0,
        }
    }
}

impl DatasetSpec {
    pub fn with_models(mut self, models: impl IntoIterator<Item = Model>) -> Self {
        self.models = models.into_iter().collect();
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn wants(&self, m: Model) -> bool {
        self.models.contains(&m)
    }
}

/// A graph with its Laplacian spectrum in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub spectrum: Spectrum,
    pub model: Model,
}

/// Generated graphs in emission order plus any non-fatal warnings.
#[derive(Debug, Clone, Default)]
pub struct Generated {
    pub graphs: Vec<(Model, Graph)>,
    pub warnings: Vec<String>,
}

/// Small seed graphs used for BA growth when no seed file is supplied:
/// path, cycle, star and complete graph on every admissible order.
pub fn synthetic_seeds(min_nodes: usize, max_nodes: usize) -> Result<Vec<Graph>> {
    let mut seeds = Vec::new();
    for v in min_nodes.max(3)..=max_nodes {
        seeds.push(Graph::path(v)?);
        seeds.push(Graph::cycle(v)?);
        seeds.push(Graph::star(v)?);
        seeds.push(Graph::complete(v, false)?);
    }
    Ok(seeds)
}

/// Draws every graph of the recipe. `hog` holds graphs read from a seed file.
pub fn generate(spec: &DatasetSpec, hog: Option<&[Graph]>) -> Result<Generated> {
    let n = spec.n;
    let mut out = Generated::default();
    if spec.wants(Model::ErdosRenyi) {
        let steps = spec.er_steps.max(1);
        let batches: Vec<Vec<Graph>> = (0..=steps)
            .into_par_iter()
            .map(|i| gen_erdos_renyi(n, i as f64 / steps as f64, spec.er_per_p, derive_seed(spec.seed, 1, i as u64)))
            .collect::<Result<_>>()?;
        out.graphs.extend(batches.into_iter().flatten().map(|g| (Model::ErdosRenyi, g)));
    }
    if spec.wants(Model::WattsStrogatz) {
        let configs: Vec<(usize, f64)> =
            spec.ws_k.iter().flat_map(|&k| spec.ws_beta.iter().map(move |&b| (k, b))).collect();
        let batches: Vec<Vec<Graph>> = configs
            .par_iter()
            .enumerate()
            .map(|(i, &(k, beta))| gen_watts_strogatz(n, k, beta, spec.ws_per_model, derive_seed(spec.seed, 2, i as u64)))
            .collect::<Result<_>>()?;
        out.graphs.extend(batches.into_iter().flatten().map(|g| (Model::WattsStrogatz, g)));
    }
    if spec.wants(Model::HouseOfGraphs) {
        match hog {
            Some(graphs) => {
                let direct: Vec<Graph> = graphs.iter().filter(|g| g.n() == n).map(Graph::without_self_loops).collect();
                if direct.is_empty() {
                    out.warnings.push(format!("seed file holds no {n}-node graphs"));
                }
                out.graphs.extend(direct.into_iter().map(|g| (Model::HouseOfGraphs, g)));
            }
            None => out.warnings.push("no seed file given: House of Graphs portion is empty".into()),
        }
    }
    if spec.wants(Model::BarabasiAlbert) {
        let (lo, hi) = spec.ba_seed_nodes;
        let hi = hi.min(n.saturating_sub(1));
        let seeds: Vec<Graph> = match hog {
            Some(graphs) => graphs
                .iter()
                .filter(|g| (lo..=hi).contains(&g.n()))
                .map(Graph::without_self_loops)
                .collect(),
            None => {
                out.warnings.push(format!(
                    "no seed file given: Barabási-Albert portion grown from synthetic seeds (paths, cycles, stars, cliques on {lo}..={hi} nodes)"
                ));
                synthetic_seeds(lo, hi)?
            }
        };
        let jobs: Vec<(usize, usize)> = seeds
            .iter()
            .enumerate()
            .flat_map(|(s, g)| spec.ba_m.iter().filter(move |&&m| m < g.n()).map(move |&m| (s, m)))
            .collect();
        let batches: Vec<Result<Vec<Graph>>> = jobs
            .par_iter()
            .map(|&(s, m)| {
                let stream = derive_seed(spec.seed, 3, ((s as u64) << 8) | m as u64);
                gen_barabasi_albert(n, m, &seeds[s], spec.ba_per_seed, stream)
            })
            .collect();
        let mut skipped = 0;
        for batch in batches {
            match batch {
                Ok(gs) => out.graphs.extend(gs.into_iter().map(|g| (Model::BarabasiAlbert, g))),
                Err(_) => skipped += 1,
            }
        }
        if skipped > 0 {
            out.warnings.push(format!("{skipped} (seed, m) pairs skipped: seed has fewer than m nodes with edges"));
        }
    }
    Ok(out)
}

/// Laplacian spectra of all graphs, computed in parallel, order preserved.
pub fn label(graphs: Vec<(Model, Graph)>) -> Result<Vec<LabeledGraph>> {
    graphs
        .into_par_iter()
        .map(|(model, graph)| Ok(LabeledGraph { spectrum: laplacian_spectrum(&graph)?, graph, model }))
        .collect()
}

/// One eigenvalue with 12 significant digits; magnitudes below 1e-12 print as `0`.
pub fn format_eigenvalue(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    rounded.to_string()
}

pub fn format_label(spectrum: &Spectrum) -> String {
    spectrum.values().iter().map(|&x| format_eigenvalue(x)).collect::<Vec<_>>().join(" ")
}

/// Paths of the three emitted files.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetFiles {
    pub graphs: PathBuf,
    pub labels: PathBuf,
    pub wl_report: PathBuf,
}

impl DatasetFiles {
    pub fn in_dir(dir: &Path, n: usize) -> Self {
        Self {
            graphs: dir.join(format!("n{n}_graphs.g6")),
            labels: dir.join(format!("n{n}_laplacian_spectra.txt")),
            wl_report: dir.join("weisfeiler_leman_results.txt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetReport {
    pub n: usize,
    pub counts: Vec<(Model, usize)>,
    pub total: usize,
    /// Pairs colour refinement could not separate.
    pub wl_pairs: usize,
    /// Share of graphs appearing in at least one such pair.
    pub wl_duplicate_fraction: f64,
    pub warnings: Vec<String>,
    pub files: DatasetFiles,
}

impl DatasetReport {
    pub fn count(&self, model: Model) -> usize {
        self.counts.iter().find(|(m, _)| *m == model).map_or(0, |&(_, c)| c)
    }
}

/// Generates, labels and screens the dataset, then writes the graphs, labels
/// and WL report into `out_dir` (created if missing).
pub fn build_dataset(spec: &DatasetSpec, hog: Option<&[Graph]>, out_dir: &Path) -> Result<DatasetReport> {
    let generated = generate(spec, hog)?;
    let labelled = label(generated.graphs)?;
    let graphs: Vec<Graph> = labelled.iter().map(|l| l.graph.clone()).collect();
    let pairs = wl_equivalent_pairs(&graphs);

    fs::create_dir_all(out_dir)?;
    let files = DatasetFiles::in_dir(out_dir, spec.n);
    let mut g6_out = BufWriter::new(File::create(&files.graphs)?);
    let mut label_out = BufWriter::new(File::create(&files.labels)?);
    for l in &labelled {
        writeln!(g6_out, "{}", l.graph.to_g6()?)?;
        writeln!(label_out, "{}", format_label(&l.spectrum))?;
    }
    g6_out.flush()?;
    label_out.flush()?;
    let mut wl_out = BufWriter::new(File::create(&files.wl_report)?);
    for (i, j) in &pairs {
        writeln!(wl_out, "{i} {j}")?;
    }
    wl_out.flush()?;

    let mut involved = vec![false; graphs.len()];
    for &(i, j) in &pairs {
        involved[i] = true;
        involved[j] = true;
    }
    let counts = Model::ALL
        .into_iter()
        .filter(|&m| spec.wants(m))
        .map(|m| (m, labelled.iter().filter(|l| l.model == m).count()))
        .collect();
    Ok(DatasetReport {
        n: spec.n,
        counts,
        total: labelled.len(),
        wl_pairs: pairs.len(),
        wl_duplicate_fraction: if graphs.is_empty() {
            0.0
        } else {
            involved.iter().filter(|&&b| b).count() as f64 / graphs.len() as f64
        },
        warnings: generated.warnings,
        files,
    })
}
