//! Point clouds, the geodesic sphere metric, and dimension-capped
//! Vietoris–Rips complexes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexId};

/// Allowed deviation of a point's norm from 1 on the sphere.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Angle between unit vectors, in degrees.
    GeodesicSphere,
    Euclidean,
}

/// Scale parameter of the complex, in the metric's units (degrees for the
/// sphere).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Epsilon(f64);

impl Epsilon {
    /// Angle threshold for the geodesic metric; must lie in `[0, 180]`.
    pub fn degrees(deg: f64) -> Result<Self> {
        if !(0.0..=180.0).contains(&deg) {
            return Err(Error::Config(format!(
                "angle ε must be within [0°, 180°], got {deg}"
            )));
        }
        Ok(Epsilon(deg))
    }

    /// Length threshold for the euclidean metric; must be finite and `>= 0`.
    pub fn length(len: f64) -> Result<Self> {
        if !(len.is_finite() && len >= 0.0) {
            return Err(Error::Config(format!(
                "length ε must be finite and non-negative, got {len}"
            )));
        }
        Ok(Epsilon(len))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn is_unit(x: &[f64]) -> bool {
    (norm(x) - 1.0).abs() <= UNIT_NORM_TOLERANCE
}

/// Angle between two unit vectors in degrees, in `[0, 180]`.
///
/// Mathematically `acos(x · y)` with the dot product clamped to `[-1, 1]`.
/// Evaluated as `2·atan2(‖x − y‖, ‖x + y‖)`, which agrees with it for unit
/// vectors but keeps full precision near 0° and 180°: identical points get
/// exactly 0 and the result is bitwise symmetric.
pub fn geodesic_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if !is_unit(x) || !is_unit(y) {
        return Err(Error::domain("geodesic distance needs unit vectors"));
    }
    Ok(angle_unchecked(x, y))
}

fn angle_unchecked(x: &[f64], y: &[f64]) -> f64 {
    let (mut diff, mut sum) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    let rad = 2.0 * diff.sqrt().atan2(sum.sqrt());
    rad.to_degrees().clamp(0.0, 180.0)
}

pub fn euclidean_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Indexed points sharing one dimension, plus the metric to measure them.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricCloud {
    points: Vec<Vec<f64>>,
    metric: Metric,
}

impl MetricCloud {
    pub fn new(points: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        if let Some(first) = points.first() {
            let d = first.len();
            if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != d) {
                return Err(Error::domain(format!(
                    "point {i} has dimension {}, expected {d}",
                    p.len()
                )));
            }
        }
        if metric == Metric::GeodesicSphere {
            if let Some(i) = points.iter().position(|p| !is_unit(p)) {
                return Err(Error::domain(format!(
                    "point {i} is not on the unit sphere (norm {})",
                    norm(&points[i])
                )));
            }
        }
        Ok(MetricCloud { points, metric })
    }

    pub fn geodesic(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(points, Metric::GeodesicSphere)
    }

    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(points, Metric::Euclidean)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn point(&self, i: VertexId) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn distance(&self, i: VertexId, j: VertexId) -> f64 {
        match self.metric {
            Metric::GeodesicSphere => angle_unchecked(&self.points[i], &self.points[j]),
            Metric::Euclidean => euclidean_distance(&self.points[i], &self.points[j]),
        }
    }

    /// All pairwise distances, rows computed in parallel.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.len();
        let data: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| (0..n).map(move |j| if i == j { 0.0 } else { self.distance(i, j) }))
            .collect();
        DistanceMatrix { n, data }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Adjacency lists of the ε-neighborhood graph.
    pub fn neighborhood_graph(&self, eps: Epsilon) -> NeighborhoodGraph {
        let adj = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != i && self.get(i, j) <= eps.value())
                    .collect()
            })
            .collect();
        NeighborhoodGraph { adj }
    }
}

/// Undirected graph with an edge `{i, j}` iff `d(i, j) <= ε` and `i != j`.
/// Adjacency lists are ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodGraph {
    adj: Vec<Vec<VertexId>>,
}

impl NeighborhoodGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    fn lower_neighbors(&self, v: VertexId) -> &[VertexId] {
        let end = self.adj[v].partition_point(|&u| u < v);
        &self.adj[v][..end]
    }

    /// Clique complex of the graph, capped at `max_dim`.
    ///
    /// Incremental construction: every simplex is grown from its largest
    /// vertex by repeatedly adding a common lower neighbor, so each clique
    /// is produced exactly once.
    pub fn clique_complex(&self, max_dim: usize) -> SimplicialComplex {
        let mut out = Vec::new();
        for u in 0..self.adj.len() {
            let lower = self.lower_neighbors(u).to_vec();
            self.add_cofaces(vec![u], lower, max_dim, &mut out);
        }
        out.sort();
        SimplicialComplex::from_sorted_closed(out)
    }

    // `tau` is ascending and every candidate is below `tau[0]`
    fn add_cofaces(
        &self,
        tau: Vec<VertexId>,
        candidates: Vec<VertexId>,
        max_dim: usize,
        out: &mut Vec<Simplex>,
    ) {
        if tau.len() <= max_dim {
            for &v in &candidates {
                let lower_v = self.lower_neighbors(v);
                let next: Vec<VertexId> = candidates
                    .iter()
                    .copied()
                    .filter(|c| lower_v.binary_search(c).is_ok())
                    .collect();
                let mut sigma = Vec::with_capacity(tau.len() + 1);
                sigma.push(v);
                sigma.extend_from_slice(&tau);
                self.add_cofaces(sigma, next, max_dim, out);
            }
        }
        out.push(Simplex::from_sorted_unchecked(tau));
    }
}

/// `G_ε(S)`: points joined when their distance is at most ε.
pub fn neighborhood_graph(cloud: &MetricCloud, eps: Epsilon) -> NeighborhoodGraph {
    cloud.distance_matrix().neighborhood_graph(eps)
}

/// Vietoris–Rips complex of `cloud` at scale `eps`, keeping simplices of
/// dimension at most `max_dim`. A simplex is present iff all pairwise
/// distances among its vertices are `<= eps`.
pub fn build_vr(cloud: &MetricCloud, eps: Epsilon, max_dim: usize) -> SimplicialComplex {
    neighborhood_graph(cloud, eps).clique_complex(max_dim)
}
