//! Dense matrices over a prime field GF(p).
//!
//! Over a field the Smith Normal Form of an `m × n` matrix is
//! `diag(1, …, 1, 0, …, 0)` with `rank` leading ones, so everything here
//! reduces to an iterative Gaussian elimination. For `p = 2` the rows are
//! packed into `u64` words and eliminated with XOR.

use std::fmt;

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField(u32);

impl PrimeField {
    pub const GF2: PrimeField = PrimeField(2);

    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(self) -> u32 {
        self.0
    }

    /// Canonical representative in `[0, p)`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse by Fermat's little theorem. `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "zero has no inverse in GF({})", self.0);
        let mut base = a as u64 % self.0 as u64;
        let mut exp = self.0 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0 as u64;
            }
            base = base * base % self.0 as u64;
            exp >>= 1;
        }
        acc as u32
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::GF2
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix over GF(p). A matrix may have zero rows or zero
/// columns; the `0 × 0` matrix is the empty matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl GfMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        GfMatrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn empty(field: PrimeField) -> Self {
        Self::zeros(field, 0, 0)
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, &x) in r.iter().enumerate() {
                m.entries[i * cols + j] = field.reduce(x);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 && self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        self.entries[i * self.cols + j] = value % self.field.modulus();
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, rhs: &GfMatrix) -> GfMatrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let f = self.field;
        let mut out = GfMatrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.entries[k * rhs.cols + j];
                    if b != 0 {
                        let o = &mut out.entries[i * rhs.cols + j];
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.field.modulus() == 2 {
            rank_gf2(self)
        } else {
            rank_dense(self)
        }
    }

    /// `diag(1, …, 1, 0, …)` of the same shape with `rank` ones. The input
    /// is left untouched.
    pub fn smith_normal_form(&self) -> GfMatrix {
        let r = self.rank();
        let mut out = GfMatrix::zeros(self.field, self.rows, self.cols);
        for i in 0..r {
            out.entries[i * self.cols + i] = 1;
        }
        out
    }

    pub fn zero_col_count(&self) -> usize {
        (0..self.cols)
            .filter(|&j| (0..self.rows).all(|i| self.entries[i * self.cols + j] == 0))
            .count()
    }

    pub fn nonzero_col_count(&self) -> usize {
        self.cols - self.zero_col_count()
    }
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "GfMatrix {}x{} over {}",
            self.rows, self.cols, self.field
        )?;
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Free-function form of [`GfMatrix::smith_normal_form`].
pub fn smith_normal_form(m: &GfMatrix) -> GfMatrix {
    m.smith_normal_form()
}

pub fn zero_col_count(m: &GfMatrix) -> usize {
    m.zero_col_count()
}

pub fn nonzero_col_count(m: &GfMatrix) -> usize {
    m.nonzero_col_count()
}

fn rank_gf2(m: &GfMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            let mut w = vec![0u64; words];
            for j in 0..m.cols {
                if m.entries[i * m.cols + j] != 0 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            w
        })
        .collect();

    let mut rank = 0;
    for col in 0..m.cols {
        if rank == rows.len() {
            break;
        }
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (done, rest) = rows.split_at_mut(rank + 1);
        let pivot = &done[rank];
        for row in rest.iter_mut() {
            if row[w] & bit != 0 {
                for (a, b) in row[w..].iter_mut().zip(&pivot[w..]) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_dense(m: &GfMatrix) -> usize {
    let f = m.field;
    let cols = m.cols;
    let mut a = m.entries.clone();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(rank * cols + j, p * cols + j);
            }
        }
        let inv = f.inv(a[rank * cols + col]);
        for j in col..cols {
            a[rank * cols + j] = f.mul(a[rank * cols + j], inv);
        }
        for r in rank + 1..m.rows {
            let factor = a[r * cols + col];
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let sub = f.mul(factor, a[rank * cols + j]);
                a[r * cols + j] = f.sub(a[r * cols + j], sub);
            }
        }
        rank += 1;
    }
    rank
}
