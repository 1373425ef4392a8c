//! ε-sweeps over a word cloud and link-graph exports.
//!
//! For every ε of the grid the Vietoris–Rips complex is built from scratch,
//! all vertex and edge profiles are computed, and the clustering is
//! derived. Outputs in the output directory:
//!
//! * `profiles.csv`: `word,epsilon,b0,…,bK`, sorted by word then ε;
//! * `clusters-<eps>.json`: the clustering at each ε;
//! * `summary.json`: run metadata, complex sizes and timings;
//! * `link-<word>-<eps>.{dot,json}` for each requested link export.
//!
//! Everything except the timings in `summary.json` is byte-identical
//! across runs with the same configuration and any worker count.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use serde::Serialize;

use crate::cluster::{cluster_from_table, compute_profile_table, kept_edges, ProfileParams};
use crate::embedding::{
    load_text_vectors, load_word2vec_binary, load_wordlist, normalize_to_sphere, WordCloud,
};
use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::simplex::VertexId;
use crate::vr::Epsilon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorFormat {
    Text,
    #[serde(rename = "word2vec-bin")]
    Word2VecBinary,
}

/// Inclusive grid `start, start + step, …, end` of angles in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonGrid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl EpsilonGrid {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        let grid = EpsilonGrid { start, end, step };
        grid.validate()?;
        Ok(grid)
    }

    /// A one-point grid.
    pub fn single(eps: f64) -> Result<Self> {
        Self::new(eps, eps, 1.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Config(format!(
                "ε step must be positive, got {}",
                self.step
            )));
        }
        if self.start > self.end {
            return Err(Error::Config(format!(
                "ε start {} exceeds ε end {}",
                self.start, self.end
            )));
        }
        Epsilon::degrees(self.start)?;
        Epsilon::degrees(self.end)?;
        Ok(())
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        // tolerate float drift in (end - start) / step
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        Ok((0..=n)
            .map(|i| round_to(self.start + i as f64 * self.step, 1e9))
            .collect())
    }
}

fn round_to(x: f64, scale: f64) -> f64 {
    (x * scale).round() / scale
}

/// Decimal label for an angle: `66`, `66.5`, `0.125`. Used in CSV rows and
/// file names.
pub fn format_epsilon(eps: f64) -> String {
    if (eps - eps.round()).abs() < 1e-9 {
        format!("{}", eps.round() as i64)
    } else {
        let s = format!("{eps:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

/// A word and the angle at which to export its link graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkTarget {
    pub word: String,
    pub epsilon: f64,
}

impl std::str::FromStr for LinkTarget {
    type Err = Error;

    /// Parses `WORD:DEG`; the split is at the last colon.
    fn from_str(s: &str) -> Result<Self> {
        let (word, deg) = s
            .rsplit_once(':')
            .ok_or_else(|| Error::Config(format!("link target {s:?} is not WORD:DEG")))?;
        let epsilon: f64 = deg
            .parse()
            .map_err(|_| Error::Config(format!("link target {s:?}: {deg:?} is not a number")))?;
        if word.is_empty() {
            return Err(Error::Config(format!(
                "link target {s:?} has an empty word"
            )));
        }
        Epsilon::degrees(epsilon)?;
        Ok(LinkTarget {
            word: word.to_owned(),
            epsilon,
        })
    }
}

/// Computation settings of a sweep, independent of where the cloud came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepParams {
    pub grid: EpsilonGrid,
    pub max_degree: usize,
    pub field: PrimeField,
    pub workers: usize,
    pub link_exports: Vec<LinkTarget>,
}

/// Everything the command line configures.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub input: PathBuf,
    pub format: VectorFormat,
    pub words: PathBuf,
    pub out_dir: PathBuf,
    pub skip_missing: bool,
    pub params: SweepParams,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub complex_ms: f64,
    pub profiles_ms: f64,
    pub clustering_ms: f64,
}

/// Per-ε statistics, as recorded in `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonRun {
    pub epsilon: f64,
    pub label: String,
    pub simplices: usize,
    pub f_vector: Vec<usize>,
    pub kept_edges: usize,
    pub clusters: usize,
    pub singletons: usize,
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub words: usize,
    pub epsilon_grid: EpsilonGrid,
    pub modulus: u32,
    pub max_degree: usize,
    pub complex_dimension: usize,
    pub workers: usize,
    pub runs: Vec<EpsilonRun>,
    pub link_exports: Vec<LinkTarget>,
    pub total_ms: f64,
}

fn elapsed_ms(t: Instant) -> f64 {
    round_to(t.elapsed().as_secs_f64() * 1e3, 1e3)
}

#[derive(Serialize)]
struct ClusterRecord<'a> {
    profile: &'a [usize],
    size: usize,
    singleton: bool,
    members: &'a [VertexId],
    words: Vec<&'a str>,
}

#[derive(Serialize)]
struct ClusterFile<'a> {
    epsilon: f64,
    max_degree: usize,
    modulus: u32,
    clusters: Vec<ClusterRecord<'a>>,
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs the sweep on an already normalized cloud and writes all outputs
/// into `out_dir` (created if needed).
pub fn sweep_cloud(
    cloud: &WordCloud,
    params: &SweepParams,
    out_dir: &Path,
) -> Result<SweepSummary> {
    let total = Instant::now();
    let grid = params
        .grid
        .values()
        .map_err(|e| e.in_stage("configuration"))?;
    for t in &params.link_exports {
        if cloud.vertex(&t.word).is_none() {
            return Err(Error::Config(format!(
                "link export word {:?} is not in the word list",
                t.word
            ))
            .in_stage("configuration"));
        }
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e).in_stage("output"))?;

    let profile_params = ProfileParams {
        max_degree: params.max_degree,
        field: params.field,
        workers: params.workers,
    };
    let distances = cloud.cloud().distance_matrix();
    let mut rows: Vec<(VertexId, usize, Vec<usize>)> = Vec::new();
    let mut runs = Vec::new();

    for (ei, &eps) in grid.iter().enumerate() {
        let label = format_epsilon(eps);
        let t = Instant::now();
        let eps_value = Epsilon::degrees(eps).map_err(|e| e.in_stage("configuration"))?;
        let complex = distances
            .neighborhood_graph(eps_value)
            .clique_complex(params.max_degree + 1);
        let complex_ms = elapsed_ms(t);

        let t = Instant::now();
        let table = compute_profile_table(&complex, &profile_params)
            .map_err(|e| e.in_stage("local homology"))?;
        let profiles_ms = elapsed_ms(t);

        let t = Instant::now();
        let kept = kept_edges(&table, &complex).map_err(|e| e.in_stage("clustering"))?;
        let clustering =
            cluster_from_table(&table, &complex).map_err(|e| e.in_stage("clustering"))?;
        let clustering_ms = elapsed_ms(t);

        for (&v, p) in &table.vertex_profiles {
            rows.push((v, ei, p.as_slice().to_vec()));
        }

        let file = ClusterFile {
            epsilon: eps,
            max_degree: params.max_degree,
            modulus: params.field.modulus(),
            clusters: clustering
                .iter()
                .map(|c| ClusterRecord {
                    profile: c.profile.as_slice(),
                    size: c.members.len(),
                    singleton: c.is_singleton(),
                    members: &c.members,
                    words: c.members.iter().map(|&v| cloud.word(v)).collect(),
                })
                .collect(),
        };
        let path = out_dir.join(format!("clusters-{label}.json"));
        write_file(&path, serde_json::to_string_pretty(&file)? + "\n")
            .map_err(|e| e.in_stage("output"))?;

        info!(
            "ε = {label}: {} simplices, {} clusters ({} singletons)",
            complex.len(),
            clustering.len(),
            clustering.iter().filter(|c| c.is_singleton()).count()
        );
        runs.push(EpsilonRun {
            epsilon: eps,
            label,
            simplices: complex.len(),
            f_vector: complex.f_vector(),
            kept_edges: kept.len(),
            clusters: clustering.len(),
            singletons: clustering.iter().filter(|c| c.is_singleton()).count(),
            timings: Timings {
                complex_ms,
                profiles_ms,
                clustering_ms,
            },
        });
    }

    rows.sort_by(|a, b| cloud.word(a.0).cmp(cloud.word(b.0)).then(a.1.cmp(&b.1)));
    let csv_path = out_dir.join("profiles.csv");
    write_profiles_csv(&csv_path, cloud, &grid, params.max_degree, &rows)
        .map_err(|e| e.in_stage("output"))?;

    for target in &params.link_exports {
        let export = export_link(cloud, &target.word, target.epsilon)
            .map_err(|e| e.in_stage("link export"))?;
        export
            .write_files(out_dir)
            .map_err(|e| e.in_stage("output"))?;
    }

    let summary = SweepSummary {
        words: cloud.len(),
        epsilon_grid: params.grid,
        modulus: params.field.modulus(),
        max_degree: params.max_degree,
        complex_dimension: params.max_degree + 1,
        workers: params.workers,
        runs,
        link_exports: params.link_exports.clone(),
        total_ms: elapsed_ms(total),
    };
    let path = out_dir.join("summary.json");
    write_file(&path, serde_json::to_string_pretty(&summary)? + "\n")
        .map_err(|e| e.in_stage("output"))?;
    Ok(summary)
}

fn write_profiles_csv(
    path: &Path,
    cloud: &WordCloud,
    grid: &[f64],
    max_degree: usize,
    rows: &[(VertexId, usize, Vec<usize>)],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["word".to_owned(), "epsilon".to_owned()];
    header.extend((0..=max_degree).map(|k| format!("b{k}")));
    w.write_record(&header)?;
    for (v, ei, betti) in rows {
        let mut rec = vec![cloud.word(*v).to_owned(), format_epsilon(grid[*ei])];
        rec.extend(betti.iter().map(usize::to_string));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Loads the vectors and word list named in `config`, then runs
/// [`sweep_cloud`].
pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    let words = load_wordlist(&config.words).map_err(|e| e.in_stage("reading word list"))?;
    let emb = match config.format {
        VectorFormat::Text => load_text_vectors(&config.input, None),
        VectorFormat::Word2VecBinary => {
            let filter: HashSet<String> = words.iter().cloned().collect();
            load_word2vec_binary(&config.input, Some(&filter))
        }
    }
    .map_err(|e| e.in_stage("reading vectors"))?;
    let cloud = normalize_to_sphere(&emb, &words, config.skip_missing)
        .map_err(|e| e.in_stage("normalizing"))?;
    info!(
        "{} words on S^{}",
        cloud.len(),
        emb.dim().unwrap_or(1).saturating_sub(1)
    );
    sweep_cloud(&cloud, &config.params, &config.out_dir)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkNode {
    pub word: String,
    pub vertex: VertexId,
    /// Geodesic distance to the center in degrees, rounded to 2 decimals.
    pub distance: f64,
}

/// The ε-neighbors of a word and the ε-edges among them: the 1-skeleton
/// of the word's link in the Vietoris–Rips complex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkGraphExport {
    pub center: String,
    pub epsilon: f64,
    pub nodes: Vec<LinkNode>,
    pub edges: Vec<(String, String)>,
}

pub fn export_link(cloud: &WordCloud, word: &str, eps: f64) -> Result<LinkGraphExport> {
    let center = cloud
        .vertex(word)
        .ok_or_else(|| Error::Config(format!("unknown word {word:?}")))?;
    let threshold = Epsilon::degrees(eps)?.value();
    let points = cloud.cloud();
    let neighbors: Vec<VertexId> = (0..cloud.len())
        .filter(|&v| v != center && points.distance(center, v) <= threshold)
        .collect();
    let nodes = neighbors
        .iter()
        .map(|&v| LinkNode {
            word: cloud.word(v).to_owned(),
            vertex: v,
            distance: round_to(points.distance(center, v), 100.0),
        })
        .collect();
    let mut edges = Vec::new();
    for (i, &a) in neighbors.iter().enumerate() {
        for &b in &neighbors[i + 1..] {
            if points.distance(a, b) <= threshold {
                edges.push((cloud.word(a).to_owned(), cloud.word(b).to_owned()));
            }
        }
    }
    Ok(LinkGraphExport {
        center: word.to_owned(),
        epsilon: eps,
        nodes,
        edges,
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl LinkGraphExport {
    /// Graphviz rendering; nodes in vertex order, edges lexicographic.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph link {{");
        let _ = writeln!(
            s,
            "  label=\"link of {} at eps = {}\";",
            dot_escape(&self.center),
            format_epsilon(self.epsilon)
        );
        for n in &self.nodes {
            let w = dot_escape(&n.word);
            let _ = writeln!(s, "  \"{w}\" [label=\"{w}\\n{:.2}\"];", n.distance);
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", dot_escape(a), dot_escape(b));
        }
        s.push_str("}\n");
        s
    }

    pub fn file_stem(&self) -> String {
        format!(
            "link-{}-{}",
            file_safe(&self.center),
            format_epsilon(self.epsilon)
        )
    }

    /// Writes `<stem>.dot` and `<stem>.json` into `dir`.
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        let stem = self.file_stem();
        write_file(&dir.join(format!("{stem}.dot")), self.to_dot())?;
        write_file(
            &dir.join(format!("{stem}.json")),
            serde_json::to_string_pretty(self)? + "\n",
        )
    }
}
