//! Exact integer linear algebra: sparse and dense matrices, Smith normal form,
//! integer solvability with witnesses, cohomology groups and certificates.

mod certificate;
mod snf;
mod solve;

pub use certificate::{Certificate, CertificateKind, Payload, SimplexValue};
pub use snf::{det, elementary_divisors, snf, SnfResult};
pub use solve::{solve_integer, InfeasibilityRecord, SolveOutcome};

use crate::chain::bigjson::Big;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// Row-major sparse integer matrix without stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Big)>,
}

impl Serialize for SparseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.triplets().map(|(i, j, v)| (i, j, Big(v.clone()))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let mut m = SparseMatrix::zeros(j.rows, j.cols);
        for (i, c, v) in j.entries {
            if i >= j.rows || c >= j.cols {
                return Err(serde::de::Error::custom(format!("entry ({i},{c}) out of range")));
            }
            m.add_entry(i, c, v.0);
        }
        Ok(m)
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn from_dense(a: &[Vec<BigInt>]) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zeros(rows, cols);
        for (i, r) in a.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.add_entry(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(a: &[Vec<i64>]) -> Self {
        let d: Vec<Vec<BigInt>> =
            a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let mut m = Self::from_dense(&d);
        if a.is_empty() {
            m.cols = 0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        let e = row.entry(j).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            row.remove(&j);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.data[i].get(&j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, BigInt> {
        &self.data[i]
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.triplets() {
            t.data[j].insert(i, v.clone());
        }
        t
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::validation(format!(
                "vector length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|r| {
                let mut acc = BigInt::zero();
                for (j, v) in r {
                    if !x[*j].is_zero() {
                        acc += v * &x[*j];
                    }
                }
                acc
            })
            .collect())
    }

    /// Computes yᵀ·A.
    pub fn vec_mul(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        if y.len() != self.rows {
            return Err(Error::validation(format!(
                "vector length {} does not match {} rows",
                y.len(),
                self.rows
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            if y[i].is_zero() {
                continue;
            }
            for (j, v) in r {
                out[*j] += v * &y[i];
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::validation("matrix shapes do not compose"));
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (k, v) in r {
                for (j, w) in &other.data[*k] {
                    out.add_entry(i, *j, v * w);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Permutes rows and columns: entry (i,j) moves to (row_perm[i], col_perm[j]).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            out.add_entry(row_perm[i], col_perm[j], v.clone());
        }
        out
    }
}

/// Finitely generated abelian group Z^free ⊕ ⊕ Z/tᵢ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::chain::bigjson::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Cohomology ker(next) / im(prev) at a group of `n` generators.
///
/// `prev` maps into the degree (n rows), `next` maps out of it (n columns).
pub fn cohomology(prev: Option<&SparseMatrix>, next: Option<&SparseMatrix>, n: usize) -> AbelianGroup {
    let (rank_prev, torsion) = match prev {
        Some(p) => {
            let d = elementary_divisors(p);
            let t = d.iter().filter(|x| **x != BigInt::from(1)).cloned().collect();
            (d.len(), t)
        }
        None => (0, Vec::new()),
    };
    let rank_next = next.map_or(0, |m| elementary_divisors(m).len());
    AbelianGroup { free_rank: n - rank_next - rank_prev, torsion }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}
