//! Finite simplicial complexes with a fixed total order and an eager
//! coface index.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::simplex::{Simplex, VertexId};

/// A finite, face-closed set of simplices.
///
/// Simplices are kept in the crate-wide total order (dimension-major, then
/// lexicographic), so all simplices of one cardinality form a contiguous
/// block. The order is fixed at construction. For every simplex the complex
/// also stores its immediate cofaces (members with exactly one more vertex),
/// which is what star and link queries walk.
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    cofaces: Vec<Vec<usize>>,
    // card_start[c] is the position of the first simplex with c + 1 vertices
    card_start: Vec<usize>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a complex from an explicit simplex list, which must already
    /// be face-closed. Duplicates are ignored.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut v: Vec<Simplex> = simplices.into_iter().collect();
        v.sort();
        v.dedup();
        let index: HashMap<Simplex, usize> =
            v.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        for s in &v {
            for f in s.facets() {
                if !index.contains_key(&f) {
                    return Err(Error::NotFaceClosed {
                        simplex: s.clone(),
                        facet: f,
                    });
                }
            }
        }
        Ok(Self::assemble(v, index))
    }

    /// The smallest complex containing every given simplex.
    pub fn closure(generators: impl IntoIterator<Item = Simplex>) -> Self {
        let mut seen: HashSet<Simplex> = HashSet::new();
        let mut work: Vec<Simplex> = generators.into_iter().collect();
        while let Some(s) = work.pop() {
            if seen.contains(&s) {
                continue;
            }
            work.extend(s.facets().filter(|f| !seen.contains(f)));
            seen.insert(s);
        }
        let mut v: Vec<Simplex> = seen.into_iter().collect();
        v.sort();
        let index = v.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self::assemble(v, index)
    }

    /// `sorted` must be face-closed, deduplicated and in complex order.
    pub(crate) fn from_sorted_closed(sorted: Vec<Simplex>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        let index = sorted
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Self::assemble(sorted, index)
    }

    fn assemble(simplices: Vec<Simplex>, index: HashMap<Simplex, usize>) -> Self {
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for f in s.facets() {
                cofaces[index[&f]].push(i);
            }
        }
        let max_card = simplices.last().map_or(0, Simplex::card);
        let mut card_start = vec![0; max_card + 2];
        let mut pos = 0;
        for c in 1..=max_card + 1 {
            while pos < simplices.len() && simplices[pos].card() < c {
                pos += 1;
            }
            card_start[c - 1] = pos;
        }
        card_start[max_card + 1] = simplices.len();
        SimplicialComplex {
            simplices,
            index,
            cofaces,
            card_start,
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension of the largest simplex; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Simplex> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in the total order.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    fn require(&self, s: &Simplex) -> Result<usize> {
        self.position(s)
            .ok_or_else(|| Error::NotInComplex(s.clone()))
    }

    /// Members with exactly `card` vertices, in complex order.
    pub fn simplices_of_card(&self, card: usize) -> &[Simplex] {
        if card == 0 || card + 1 > self.card_start.len() {
            return &[];
        }
        &self.simplices[self.card_start[card - 1]..self.card_start[card]]
    }

    pub fn simplices_of_dim(&self, dim: usize) -> &[Simplex] {
        self.simplices_of_card(dim + 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.simplices_of_card(1).iter().map(|s| s.vertices()[0])
    }

    /// Members with one more vertex than `s` that contain it.
    pub fn immediate_cofaces(&self, s: &Simplex) -> Result<impl Iterator<Item = &Simplex> + '_> {
        let i = self.require(s)?;
        Ok(self.cofaces[i].iter().map(move |&j| &self.simplices[j]))
    }

    fn star_positions(&self, root: usize) -> Vec<usize> {
        let mut seen = HashSet::new();
        seen.insert(root);
        let mut out = vec![root];
        let mut frontier = vec![root];
        while let Some(i) = frontier.pop() {
            for &j in &self.cofaces[i] {
                if seen.insert(j) {
                    out.push(j);
                    frontier.push(j);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All cofaces of `tau`, `tau` included, in complex order.
    pub fn star(&self, tau: &Simplex) -> Result<Vec<&Simplex>> {
        let root = self.require(tau)?;
        Ok(self
            .star_positions(root)
            .into_iter()
            .map(|i| &self.simplices[i])
            .collect())
    }

    /// The star together with every face of its members.
    pub fn closed_star(&self, tau: &Simplex) -> Result<SimplicialComplex> {
        let star = self.star(tau)?;
        Ok(SimplicialComplex::closure(star.into_iter().cloned()))
    }

    /// `{ρ ∈ K | ρ ∩ τ = ∅, ρ ∪ τ ∈ K}`. Every such ρ is `σ \ τ` for some
    /// σ in the star, so the link is read straight off the star.
    pub fn link(&self, tau: &Simplex) -> Result<SimplicialComplex> {
        let star = self.star(tau)?;
        let mut rest: Vec<Simplex> = star.into_iter().filter_map(|s| s.difference(tau)).collect();
        rest.sort();
        rest.dedup();
        Ok(SimplicialComplex::from_sorted_closed(rest))
    }

    /// Simplices of dimension at most `k` (so at most `k + 1` vertices).
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let end = if k + 2 >= self.card_start.len() {
            self.simplices.len()
        } else {
            self.card_start[k + 1]
        };
        SimplicialComplex::from_sorted_closed(self.simplices[..end].to_vec())
    }

    /// Every simplex of `self` belongs to `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }

    /// Count of simplices per dimension, index = dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.simplices_of_dim(k).len()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serialization is infallible")
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl<'a> IntoIterator for &'a SimplicialComplex {
    type Item = &'a Simplex;
    type IntoIter = std::slice::Iter<'a, Simplex>;

    fn into_iter(self) -> Self::IntoIter {
        self.simplices.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr<S> {
    simplices: S,
}

impl Serialize for SimplicialComplex {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        ComplexRepr {
            simplices: &self.simplices,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ComplexRepr::<Vec<Simplex>>::deserialize(deserializer)?;
        SimplicialComplex::from_simplices(repr.simplices).map_err(serde::de::Error::custom)
    }
}
