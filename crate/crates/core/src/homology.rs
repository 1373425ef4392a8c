//! Local betti numbers of simplices, computed from the chain complex of the
//! star, plus reduced simplicial homology for the link-based cross-check.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::gf::{GfMatrix, PrimeField};
use crate::simplex::Simplex;

/// Local betti numbers `b_0, …, b_d` of one simplex; index = degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiProfile(Vec<usize>);

impl BettiProfile {
    pub fn new(betti: Vec<usize>) -> Self {
        BettiProfile(betti)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, degree: usize) -> Option<usize> {
        self.0.get(degree).copied()
    }

    pub fn max_degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

impl From<Vec<usize>> for BettiProfile {
    fn from(v: Vec<usize>) -> Self {
        BettiProfile(v)
    }
}

impl fmt::Debug for BettiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Space-separated, the way profile tables print them: `0 1 0`.
impl fmt::Display for BettiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Matrix of the simplicial boundary from `domain` to `codomain`, both in
/// complex order. Faces absent from `codomain` contribute nothing. The
/// face obtained by dropping position `i` carries the sign `(-1)^i`.
fn boundary_matrix<S: Borrow<Simplex>>(
    domain: &[S],
    codomain: &[S],
    field: PrimeField,
) -> GfMatrix {
    let rows: HashMap<&Simplex, usize> = codomain
        .iter()
        .enumerate()
        .map(|(i, s)| (s.borrow(), i))
        .collect();
    let minus_one = field.neg(1);
    let mut m = GfMatrix::zeros(field, codomain.len(), domain.len());
    for (j, d) in domain.iter().enumerate() {
        for (i, face) in d.borrow().facets().enumerate() {
            if let Some(&r) = rows.get(&face) {
                m.set(r, j, if i % 2 == 0 { 1 } else { minus_one });
            }
        }
    }
    m
}

/// Matrix of `∂_k : C_k → C_{k-1}` on the chain complex of a star.
///
/// `star` must list the star of some simplex in complex order. Columns are
/// the star's `k`-simplices, rows its `(k-1)`-simplices. When the star has
/// no `k`-simplices the result is the empty matrix; for `k = 0` it is the
/// `1 × n` zero matrix. A `(k-1)`-face of a star member that lies outside
/// the star is treated as zero, so a `0 × n` matrix is possible.
pub fn get_boundary_operator<S: Borrow<Simplex>>(
    star: &[S],
    k: usize,
    field: PrimeField,
) -> GfMatrix {
    let domain: Vec<&Simplex> = star
        .iter()
        .map(Borrow::borrow)
        .filter(|s| s.card() == k + 1)
        .collect();
    if domain.is_empty() {
        return GfMatrix::empty(field);
    }
    if k == 0 {
        return GfMatrix::zeros(field, 1, domain.len());
    }
    let codomain: Vec<&Simplex> = star
        .iter()
        .map(Borrow::borrow)
        .filter(|s| s.card() == k)
        .collect();
    boundary_matrix(&domain, &codomain, field)
}

/// `dim ker ∂_k − dim im ∂_{k+1}` from the Smith forms of the two matrices.
fn betti_from_operators(d_k: &GfMatrix, d_k1: &GfMatrix) -> usize {
    let ker = d_k.smith_normal_form().zero_col_count();
    let im = d_k1.smith_normal_form().nonzero_col_count();
    debug_assert!(im <= ker, "image larger than kernel: not a chain complex");
    ker - im
}

/// The `k`-th local betti number of `tau` in `complex` over `field`.
///
/// Needs every coface of `tau` with up to `k + 2` vertices; on a complex
/// truncated at dimension `k` the top-degree value overcounts.
pub fn local_betti(
    complex: &SimplicialComplex,
    tau: &Simplex,
    k: usize,
    field: PrimeField,
) -> Result<usize> {
    let star = complex.star(tau)?;
    let d_k = get_boundary_operator(&star, k, field);
    let d_k1 = get_boundary_operator(&star, k + 1, field);
    Ok(betti_from_operators(&d_k, &d_k1))
}

/// Local betti numbers of `tau` for degrees `0..=max_degree`. The star is
/// extracted once and each boundary operator reduced once.
pub fn local_profile(
    complex: &SimplicialComplex,
    tau: &Simplex,
    max_degree: usize,
    field: PrimeField,
) -> Result<BettiProfile> {
    let star = complex.star(tau)?;
    let ops: Vec<GfMatrix> = (0..=max_degree + 1)
        .map(|k| get_boundary_operator(&star, k, field))
        .collect();
    let betti = ops
        .windows(2)
        .map(|w| betti_from_operators(&w[0], &w[1]))
        .collect();
    Ok(BettiProfile(betti))
}

/// Reduced betti number in degree `n >= -1`, using the augmented chain
/// complex. The empty complex has `b̃_{-1} = 1` and nothing else.
pub(crate) fn reduced_betti_signed(
    complex: &SimplicialComplex,
    n: isize,
    field: PrimeField,
) -> usize {
    assert!(n >= -1);
    let chain_dim = |d: isize| -> usize {
        if d == -1 {
            1
        } else {
            complex.simplices_of_dim(d as usize).len()
        }
    };
    // rank of ∂_d : C_d → C_{d-1}, with ∂_0 the augmentation
    let boundary_rank = |d: isize| -> usize {
        match d {
            ..=-1 => 0,
            0 => usize::from(complex.simplices_of_card(1).len() > 0),
            _ => {
                let d = d as usize;
                let domain = complex.simplices_of_dim(d);
                if domain.is_empty() {
                    return 0;
                }
                boundary_matrix(domain, complex.simplices_of_dim(d - 1), field).rank()
            }
        }
    };
    chain_dim(n) - boundary_rank(n) - boundary_rank(n + 1)
}

/// The `n`-th reduced betti number of `complex` over `field`.
pub fn reduced_betti(complex: &SimplicialComplex, n: usize, field: PrimeField) -> usize {
    reduced_betti_signed(complex, n as isize, field)
}

/// Local betti number of `tau` in degree `n` read off the reduced homology
/// of its link: `b_n = b̃_{n - dim τ - 1}(lk τ)`. Only valid for
/// `n > dim τ`; lower degrees are rejected.
pub fn local_betti_via_link(
    complex: &SimplicialComplex,
    tau: &Simplex,
    n: usize,
    field: PrimeField,
) -> Result<usize> {
    if n <= tau.dim() {
        return Err(Error::domain(format!(
            "link formula needs degree > dim τ, got degree {n} for {}-simplex {tau}",
            tau.dim()
        )));
    }
    let link = complex.link(tau)?;
    Ok(reduced_betti_signed(
        &link,
        n as isize - tau.dim() as isize - 1,
        field,
    ))
}
