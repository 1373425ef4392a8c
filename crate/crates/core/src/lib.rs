//! Local homology of Vietoris–Rips complexes built from point clouds, and
//! clustering of points along local-homology-preserving paths.
//!
//! The local homology of a simplex `σ` is the relative homology of its
//! closed star modulo the boundary of the star. Its betti numbers are
//! computed from the chain complex spanned by the star itself
//! ([`homology::local_betti`]), with coefficients in a prime field
//! ([`gf::PrimeField`], GF(2) by default). Each simplex is an independent
//! job, so whole complexes are profiled in parallel.
//!
//! Typical use on word vectors:
//!
//! ```
//! use lochom::{cluster, Epsilon, MetricCloud};
//!
//! // five points spaced 72° apart on a great circle
//! let points = (0..5)
//!     .map(|i| {
//!         let a = (72.0 * i as f64).to_radians();
//!         vec![a.cos(), a.sin()]
//!     })
//!     .collect();
//! let cloud = MetricCloud::geodesic(points).unwrap();
//! let clustering = cluster(&cloud, Epsilon::degrees(80.0).unwrap(), 2).unwrap();
//! assert_eq!(clustering.len(), 1);
//! assert_eq!(clustering.clusters[0].profile.as_slice(), &[0, 1, 0]);
//! ```

pub mod cluster;
pub mod complex;
pub mod embedding;
pub mod error;
pub mod gf;
pub mod homology;
pub mod parallel;
pub mod pipeline;
pub mod simplex;
pub mod vr;

pub use cluster::{
    cluster, cluster_with, connected_components, kept_edges, Cluster, Clustering, ProfileParams,
    ProfileTable,
};
pub use complex::SimplicialComplex;
pub use error::{Error, Result};
pub use gf::{GfMatrix, PrimeField};
pub use homology::{local_betti, local_betti_via_link, local_profile, reduced_betti, BettiProfile};
pub use simplex::{Simplex, VertexId};
pub use vr::{build_vr, geodesic_distance, neighborhood_graph, Epsilon, Metric, MetricCloud};
