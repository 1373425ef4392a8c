//! Test-only oracles and fixture generators. Nothing here calls into the
//! crate's homology or linear-algebra code: complexes are rebuilt as plain
//! vertex sets and ranks are computed by a separate elimination.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

use lochom::{Simplex, SimplicialComplex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Face = Vec<usize>;

/// Rank over GF(p) by textbook row reduction on a `Vec<Vec<i64>>`.
pub fn oracle_rank(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let inv = |a: i64| (1..p).find(|b| (a * b) % p == 1).expect("invertible");
    let mut rank = 0;
    for c in 0..n {
        let Some(piv) = (rank..m).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = (*x * s) % p;
        }
        for r in 0..m {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..n {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// All non-empty subsets of every generator.
pub fn all_faces(generators: &[Face]) -> BTreeSet<Face> {
    let mut out = BTreeSet::new();
    for g in generators {
        let k = g.len();
        for mask in 1u32..(1 << k) {
            let f: Face = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| g[i])
                .collect();
            out.insert(f);
        }
    }
    out
}

/// Reduced betti number `b̃_n` (n >= -1) of the complex whose simplices are
/// exactly `faces` (assumed face-closed).
pub fn oracle_reduced_betti(faces: &BTreeSet<Face>, n: isize, p: i64) -> usize {
    let of_dim = |d: isize| -> Vec<&Face> {
        if d < 0 {
            Vec::new()
        } else {
            faces.iter().filter(|f| f.len() as isize == d + 1).collect()
        }
    };
    let chain_dim = |d: isize| if d == -1 { 1 } else { of_dim(d).len() };
    let rank = |d: isize| -> usize {
        if d <= -1 {
            return 0;
        }
        if d == 0 {
            return usize::from(!of_dim(0).is_empty());
        }
        let cols = of_dim(d);
        let rows = of_dim(d - 1);
        if cols.is_empty() || rows.is_empty() {
            return 0;
        }
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..c.len() {
                let mut face = (*c).clone();
                face.remove(i);
                let r = rows.iter().position(|x| **x == face).expect("face-closed");
                m[r][j] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
        oracle_rank(m, p)
    };
    chain_dim(n) - rank(n) - rank(n + 1)
}

/// `dim H_n(X, A)` for a simplicial pair, via `H_n(X, A) ≅ H̃_n(X ∪ cone(A))`.
pub fn oracle_relative_betti(x: &BTreeSet<Face>, a: &BTreeSet<Face>, n: usize, p: i64) -> usize {
    let apex = x.iter().flatten().copied().max().map_or(0, |m| m + 1);
    let mut coned = x.clone();
    coned.insert(vec![apex]);
    for f in a {
        let mut g = f.clone();
        g.push(apex);
        coned.insert(g);
    }
    oracle_reduced_betti(&coned, n as isize, p)
}

/// Local betti number of `tau` by the definition: relative homology of the
/// closed star modulo the simplices of the closed star that miss `tau`.
pub fn oracle_local_betti(complex: &[Face], tau: &Face, n: usize, p: i64) -> usize {
    let contains = |s: &Face| tau.iter().all(|v| s.contains(v));
    let star: Vec<Face> = complex.iter().filter(|s| contains(s)).cloned().collect();
    let closed = all_faces(&star);
    let boundary: BTreeSet<Face> = closed.iter().filter(|s| !contains(s)).cloned().collect();
    oracle_relative_betti(&closed, &boundary, n, p)
}

pub fn faces_of(k: &SimplicialComplex) -> Vec<Face> {
    k.iter().map(|s| s.vertices().to_vec()).collect()
}

pub fn to_simplex(f: &Face) -> Simplex {
    Simplex::new(f.iter().copied()).unwrap()
}

pub fn closure(gens: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::closure(
        gens.iter()
            .map(|g| Simplex::new(g.iter().copied()).unwrap()),
    )
}

/// `k` triangles glued along the edge {0, 1}.
pub fn x_k(k: usize) -> SimplicialComplex {
    SimplicialComplex::closure((0..k).map(|i| Simplex::new([0, 1, i + 2]).unwrap()))
}

/// Small hand-made complexes, each fully face-closed.
pub fn hand_fixtures() -> Vec<(&'static str, SimplicialComplex)> {
    let mut v = vec![
        ("point", closure(&[&[0]])),
        ("two points", closure(&[&[0], &[1]])),
        ("edge", closure(&[&[0, 1]])),
        ("triangle", closure(&[&[0, 1, 2]])),
        ("hollow triangle", closure(&[&[0, 1], &[1, 2], &[0, 2]])),
        ("path P3", closure(&[&[0, 1], &[1, 2]])),
        (
            "cycle C5",
            closure(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[0, 4]]),
        ),
        (
            "star graph K1,4",
            closure(&[&[0, 1], &[0, 2], &[0, 3], &[0, 4]]),
        ),
        ("bowtie", closure(&[&[0, 1, 2], &[0, 3, 4]])),
        ("tetrahedron", closure(&[&[0, 1, 2, 3]])),
        (
            "tetrahedron boundary",
            closure(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]),
        ),
        (
            "octahedron",
            closure(&[
                &[0, 2, 4],
                &[0, 2, 5],
                &[0, 3, 4],
                &[0, 3, 5],
                &[1, 2, 4],
                &[1, 2, 5],
                &[1, 3, 4],
                &[1, 3, 5],
            ]),
        ),
        (
            "triangle with whisker",
            closure(&[&[0, 1, 2], &[2, 3], &[4]]),
        ),
        (
            "two tetrahedra on an edge",
            closure(&[&[0, 1, 2, 3], &[0, 1, 4, 5]]),
        ),
        ("6-vertex projective plane", rp2()),
    ];
    for k in 1..=6 {
        let name: &'static str = Box::leak(format!("X_{k}").into_boxed_str());
        v.push((name, x_k(k)));
    }
    v
}

/// Minimal triangulation of the real projective plane (10 triangles).
pub fn rp2() -> SimplicialComplex {
    closure(&[
        &[0, 1, 2],
        &[0, 2, 3],
        &[0, 3, 4],
        &[0, 4, 5],
        &[0, 1, 5],
        &[1, 2, 4],
        &[2, 3, 5],
        &[1, 3, 4],
        &[1, 3, 5],
        &[2, 4, 5],
    ])
}

/// Uniform point on S².
pub fn sphere_point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let t: f64 = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    vec![r * t.cos(), r * t.sin(), z]
}

/// Uniform point on S^{d-1}.
pub fn unit_gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Topic-structured cloud on S^{dim-1}: points scattered around a few
/// random centers, like word vectors from a handful of themes.
pub fn topic_cloud(
    rng: &mut ChaCha8Rng,
    n: usize,
    dim: usize,
    topics: usize,
    spread: f64,
) -> Vec<Vec<f64>> {
    let centers: Vec<Vec<f64>> = (0..topics).map(|_| unit_gaussian(rng, dim)).collect();
    (0..n)
        .map(|i| {
            let c = &centers[i % topics];
            let noise = unit_gaussian(rng, dim);
            let scale = spread * rng.gen_range(0.0..1.0f64).sqrt();
            let v: Vec<f64> = c.iter().zip(&noise).map(|(a, b)| a + scale * b).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect()
}

/// Erdős–Rényi graph as a 1-dimensional complex on vertices `0..n`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SimplicialComplex {
    let mut gens: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                gens.push(Simplex::edge(a, b));
            }
        }
    }
    SimplicialComplex::closure(gens)
}

/// All vertex subsets of size `1..=max_card` whose pairwise distances are
/// within `eps`, by exhaustive bitmask enumeration.
pub fn brute_force_vr(
    dist: &dyn Fn(usize, usize) -> f64,
    n: usize,
    eps: f64,
    max_card: usize,
) -> BTreeSet<Face> {
    let mut out = BTreeSet::new();
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() as usize > max_card {
            continue;
        }
        let f: Face = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let ok = f
            .iter()
            .enumerate()
            .all(|(i, &a)| f[i + 1..].iter().all(|&b| dist(a, b) <= eps));
        if ok {
            out.insert(f);
        }
    }
    out
}

/// Checks `∂_k ∘ ∂_{k+1} = 0` on a star for every degree where both
/// operators are non-degenerate. Returns the number of compositions checked.
pub fn check_chain_law(star: &[&Simplex], field: lochom::PrimeField) -> usize {
    let top = star.iter().map(|s| s.dim()).max().unwrap_or(0);
    let mut checked = 0;
    for k in 1..=top {
        let dk = lochom::homology::get_boundary_operator(star, k, field);
        let dk1 = lochom::homology::get_boundary_operator(star, k + 1, field);
        if dk.is_empty() || dk1.is_empty() {
            continue;
        }
        assert_eq!(dk.cols(), dk1.rows());
        assert!(dk.mul(&dk1).is_zero(), "∂_{k} ∘ ∂_{} ≠ 0", k + 1);
        checked += 1;
    }
    checked
}
