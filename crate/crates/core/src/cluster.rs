//! Clustering points by local-homology-preserving paths.
//!
//! Every vertex and edge of the Vietoris–Rips complex gets a betti profile.
//! An edge is kept when it and both endpoints share one profile; clusters
//! are the connected components of the kept edges.

use std::collections::{BTreeMap, HashMap};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::homology::{local_profile, BettiProfile};
use crate::parallel::{available_workers, run_parallel};
use crate::simplex::{Simplex, VertexId};
use crate::vr::{build_vr, Epsilon, MetricCloud};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileParams {
    /// Highest homological degree in each profile.
    pub max_degree: usize,
    pub field: PrimeField,
    pub workers: usize,
}

impl ProfileParams {
    pub fn new(max_degree: usize) -> Self {
        ProfileParams {
            max_degree,
            field: PrimeField::GF2,
            workers: available_workers(),
        }
    }
}

/// Profiles of all 0- and 1-simplices of a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProfileTable {
    pub vertex_profiles: BTreeMap<VertexId, BettiProfile>,
    pub edge_profiles: BTreeMap<(VertexId, VertexId), BettiProfile>,
}

impl ProfileTable {
    pub fn vertex(&self, v: VertexId) -> Option<&BettiProfile> {
        self.vertex_profiles.get(&v)
    }

    pub fn edge(&self, a: VertexId, b: VertexId) -> Option<&BettiProfile> {
        self.edge_profiles.get(&(a.min(b), a.max(b)))
    }
}

/// Computes the profile of every vertex and edge of `complex`, one
/// independent job per simplex.
///
/// `complex` should contain simplices up to dimension `max_degree + 1`,
/// otherwise the top degree is overcounted.
pub fn compute_profile_table(
    complex: &SimplicialComplex,
    params: &ProfileParams,
) -> Result<ProfileTable> {
    let tasks: Vec<&Simplex> = complex
        .simplices_of_card(1)
        .iter()
        .chain(complex.simplices_of_card(2))
        .collect();
    let profiles = run_parallel(&tasks, params.workers, |s| {
        local_profile(complex, s, params.max_degree, params.field)
    })?;
    let mut table = ProfileTable::default();
    for (s, p) in tasks.into_iter().zip(profiles) {
        match *s.vertices() {
            [v] => {
                table.vertex_profiles.insert(v, p);
            }
            [a, b] => {
                table.edge_profiles.insert((a, b), p);
            }
            _ => unreachable!("only vertices and edges are profiled"),
        }
    }
    Ok(table)
}

/// Edges of `complex` whose own profile equals both endpoint profiles, as
/// `(a, b)` pairs with `a < b` in complex order.
pub fn kept_edges(
    table: &ProfileTable,
    complex: &SimplicialComplex,
) -> Result<Vec<(VertexId, VertexId)>> {
    let missing = |s: String| Error::domain(format!("internal error: no profile for {s}"));
    let mut kept = Vec::new();
    for e in complex.simplices_of_card(2) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        let pe = table.edge(a, b).ok_or_else(|| missing(e.to_string()))?;
        let pa = table
            .vertex(a)
            .ok_or_else(|| missing(format!("vertex {a}")))?;
        let pb = table
            .vertex(b)
            .ok_or_else(|| missing(format!("vertex {b}")))?;
        if pa == pe && pb == pe {
            kept.push((a, b));
        }
    }
    Ok(kept)
}

/// Connected components by iterative depth-first search. Members are
/// ascending and components are ordered by their smallest member.
///
/// Edges must join vertices from `vertices`.
pub fn connected_components(
    vertices: &[VertexId],
    edges: &[(VertexId, VertexId)],
) -> Vec<Vec<VertexId>> {
    let mut ids: Vec<VertexId> = vertices.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let local: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![Vec::new(); ids.len()];
    for &(a, b) in edges {
        let (Some(&i), Some(&j)) = (local.get(&a), local.get(&b)) else {
            debug_assert!(false, "edge ({a}, {b}) leaves the vertex set");
            continue;
        };
        adj[i].push(j);
        adj[j].push(i);
    }

    let mut seen = vec![false; ids.len()];
    let mut components = Vec::new();
    for start in 0..ids.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(ids[u]);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    // starts are visited in ascending id order, so components already are
    components
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub members: Vec<VertexId>,
    pub profile: BettiProfile,
}

impl Cluster {
    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }
}

/// A partition of the vertex set into clusters sharing a profile.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Clustering {
    pub clusters: Vec<Cluster>,
}

impl Clustering {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cluster> {
        self.clusters.iter()
    }

    /// The cluster containing `v`.
    pub fn cluster_of(&self, v: VertexId) -> Option<&Cluster> {
        self.clusters
            .iter()
            .find(|c| c.members.binary_search(&v).is_ok())
    }
}

/// Clusters the vertices of `complex` from an already computed table.
pub fn cluster_from_table(table: &ProfileTable, complex: &SimplicialComplex) -> Result<Clustering> {
    let vertices: Vec<VertexId> = complex.vertices().collect();
    let edges = kept_edges(table, complex)?;
    let clusters = connected_components(&vertices, &edges)
        .into_iter()
        .map(|members| {
            let profile = table.vertex(members[0]).cloned().ok_or_else(|| {
                Error::domain(format!(
                    "internal error: no profile for vertex {}",
                    members[0]
                ))
            })?;
            Ok(Cluster { members, profile })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Clustering { clusters })
}

/// Profiles and clustering of an existing complex.
pub fn cluster_complex(
    complex: &SimplicialComplex,
    params: &ProfileParams,
) -> Result<(ProfileTable, Clustering)> {
    let table = compute_profile_table(complex, params)?;
    let clustering = cluster_from_table(&table, complex)?;
    Ok((table, clustering))
}

/// Full pipeline on a point cloud: builds the Vietoris–Rips complex up to
/// dimension `max_degree + 1`, profiles every vertex and edge in degrees
/// `0..=max_degree`, and returns the clusters.
pub fn cluster_with(
    cloud: &MetricCloud,
    eps: Epsilon,
    params: &ProfileParams,
) -> Result<Clustering> {
    let complex = build_vr(cloud, eps, params.max_degree + 1);
    Ok(cluster_complex(&complex, params)?.1)
}

/// [`cluster_with`] over GF(2) using every available core.
pub fn cluster(cloud: &MetricCloud, eps: Epsilon, max_degree: usize) -> Result<Clustering> {
    cluster_with(cloud, eps, &ProfileParams::new(max_degree))
}
