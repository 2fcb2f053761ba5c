use super::SparseMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;

/// Smith normal form U·A·V = D with unimodular U, V.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnfResult {
    pub input: SparseMatrix,
    pub u: SparseMatrix,
    pub v: SparseMatrix,
    pub d: SparseMatrix,
    pub rank: usize,
    #[serde(with = "crate::chain::bigjson::vec")]
    pub divisors: Vec<BigInt>,
}

impl SnfResult {
    /// Rechecks U·A·V = D, the divisibility chain and unimodularity.
    pub fn verify(&self) -> bool {
        let uav = match self.u.matmul(&self.input).and_then(|m| m.matmul(&self.v)) {
            Ok(m) => m,
            Err(_) => return false,
        };
        if uav != self.d {
            return false;
        }
        for (i, j, _) in self.d.triplets() {
            if i != j {
                return false;
            }
        }
        let diag: Vec<BigInt> = (0..self.rank).map(|i| self.d.get(i, i)).collect();
        if diag != self.divisors || diag.iter().any(|x| !x.is_positive()) {
            return false;
        }
        if diag.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return false;
        }
        det(&self.u.to_dense()).abs().is_one() && det(&self.v.to_dense()).abs().is_one()
    }
}

/// Dense working state of the Smith reduction.
pub(crate) struct DenseSnf {
    pub a: Vec<Vec<BigInt>>,
    pub u: Option<Vec<Vec<BigInt>>>,
    pub v: Option<Vec<Vec<BigInt>>>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Replaces rows (r1, r2) by (a·r1 + b·r2, c·r1 + d·r2).
fn row_combine(m: &mut [Vec<BigInt>], r1: usize, r2: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    let n = m[r1].len();
    for j in 0..n {
        let x = m[r1][j].clone();
        let y = m[r2][j].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[r1][j] = a * &x + b * &y;
        m[r2][j] = c * &x + d * &y;
    }
}

fn col_combine(m: &mut [Vec<BigInt>], c1: usize, c2: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    for row in m.iter_mut() {
        let x = row[c1].clone();
        let y = row[c2].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        row[c1] = a * &x + b * &y;
        row[c2] = c * &x + d * &y;
    }
}

impl DenseSnf {
    pub fn new(a: Vec<Vec<BigInt>>, cols: usize, track: bool) -> Self {
        let rows = a.len();
        DenseSnf {
            a,
            u: if track { Some(identity(rows)) } else { None },
            v: if track { Some(identity(cols)) } else { None },
            rank: 0,
        }
    }

    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.v.as_ref().map_or_else(|| self.a.first().map_or(0, |r| r.len()), |v| v.len())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = self.u.as_mut() {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in self.a.iter_mut() {
                r.swap(i, j);
            }
            if let Some(v) = self.v.as_mut() {
                for r in v.iter_mut() {
                    r.swap(i, j);
                }
            }
        }
    }

    fn rows_op(&mut self, r1: usize, r2: usize, k: [&BigInt; 4]) {
        row_combine(&mut self.a, r1, r2, k[0], k[1], k[2], k[3]);
        if let Some(u) = self.u.as_mut() {
            row_combine(u, r1, r2, k[0], k[1], k[2], k[3]);
        }
    }

    fn cols_op(&mut self, c1: usize, c2: usize, k: [&BigInt; 4]) {
        col_combine(&mut self.a, c1, c2, k[0], k[1], k[2], k[3]);
        if let Some(v) = self.v.as_mut() {
            col_combine(v, c1, c2, k[0], k[1], k[2], k[3]);
        }
    }

    /// Zeroes entry (i, t) against pivot (t, t) with a unimodular row operation.
    fn clear_row_entry(&mut self, t: usize, i: usize) {
        let p = self.a[t][t].clone();
        let q = self.a[i][t].clone();
        let one = BigInt::one();
        let zero = BigInt::zero();
        if (&q % &p).is_zero() {
            let f = -(&q / &p);
            self.rows_op(t, i, [&one, &zero, &f, &one]);
        } else {
            let e = p.extended_gcd(&q);
            let (g, s, r) = (e.gcd, e.x, e.y);
            let c = -(&q / &g);
            let d = &p / &g;
            self.rows_op(t, i, [&s, &r, &c, &d]);
        }
    }

    fn clear_col_entry(&mut self, t: usize, j: usize) {
        let p = self.a[t][t].clone();
        let q = self.a[t][j].clone();
        let one = BigInt::one();
        let zero = BigInt::zero();
        if (&q % &p).is_zero() {
            let f = -(&q / &p);
            self.cols_op(t, j, [&one, &zero, &f, &one]);
        } else {
            let e = p.extended_gcd(&q);
            let (g, s, r) = (e.gcd, e.x, e.y);
            let c = -(&q / &g);
            let d = &p / &g;
            self.cols_op(t, j, [&s, &r, &c, &d]);
        }
    }

    pub fn run(&mut self) {
        let m = self.rows();
        let n = self.cols();
        let mut t = 0;
        while t < m.min(n) {
            // Pivot: smallest nonzero magnitude, first in row-major order.
            let mut best: Option<(BigInt, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &self.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    let ax = x.abs();
                    if best.as_ref().map_or(true, |(b, _, _)| ax < *b) {
                        let done = ax.is_one();
                        best = Some((ax, i, j));
                        if done {
                            break;
                        }
                    }
                }
                if best.as_ref().map_or(false, |(b, _, _)| b.is_one()) {
                    break;
                }
            }
            let Some((_, pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..m {
                    if !self.a[i][t].is_zero() {
                        self.clear_row_entry(t, i);
                    }
                }
                for j in t + 1..n {
                    if !self.a[t][j].is_zero() {
                        self.clear_col_entry(t, j);
                    }
                }
                if (t + 1..m).any(|i| !self.a[i][t].is_zero()) {
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&self.a[i][j] % &p).is_zero()));
                match bad {
                    Some(i) => {
                        let one = BigInt::one();
                        let zero = BigInt::zero();
                        self.rows_op(t, i, [&one, &one, &zero, &one]);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                for x in self.a[t].iter_mut() {
                    *x = -&*x;
                }
                if let Some(u) = self.u.as_mut() {
                    for x in u[t].iter_mut() {
                        *x = -&*x;
                    }
                }
            }
            t += 1;
        }
        self.rank = t;
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.a[i][i].clone()).collect()
    }
}

/// Smith normal form with unimodular transforms.
pub fn snf(a: &SparseMatrix) -> SnfResult {
    let mut s = DenseSnf::new(a.to_dense(), a.cols(), true);
    s.run();
    let divisors = s.diagonal();
    SnfResult {
        input: a.clone(),
        u: SparseMatrix::from_dense(s.u.as_ref().unwrap()),
        v: sized(SparseMatrix::from_dense(s.v.as_ref().unwrap()), a.cols(), a.cols()),
        d: sized(SparseMatrix::from_dense(&s.a), a.rows(), a.cols()),
        rank: s.rank,
        divisors,
    }
}

fn sized(m: SparseMatrix, rows: usize, cols: usize) -> SparseMatrix {
    if m.rows() == rows && m.cols() == cols {
        return m;
    }
    let mut out = SparseMatrix::zeros(rows, cols);
    for (i, j, v) in m.triplets() {
        out.add_entry(i, j, v.clone());
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sparse elimination on unit pivots. Used both for invariants and for solving.
pub(crate) struct Eliminator {
    pub rows: Vec<Option<BTreeMap<usize, BigInt>>>,
    pub rhs: Option<Vec<BigInt>>,
    col_rows: Vec<BTreeSet<usize>>,
    pub ops: Vec<PivotOp>,
    record: bool,
}

pub(crate) struct PivotOp {
    pub row: usize,
    pub col: usize,
    pub snapshot: BTreeMap<usize, BigInt>,
    pub rhs: BigInt,
    pub multipliers: Vec<(usize, BigInt)>,
}

impl Eliminator {
    pub fn new(a: &SparseMatrix, rhs: Option<Vec<BigInt>>, record: bool) -> Self {
        let mut col_rows = vec![BTreeSet::new(); a.cols()];
        for (i, j, _) in a.triplets() {
            col_rows[j].insert(i);
        }
        Eliminator {
            rows: (0..a.rows()).map(|i| Some(a.row(i).clone())).collect(),
            rhs,
            col_rows,
            ops: Vec::new(),
            record,
        }
    }

    fn pick_row(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for &r in &self.col_rows[col] {
            let row = self.rows[r].as_ref().unwrap();
            if row[&col].abs().is_one() {
                let len = row.len();
                if best.map_or(true, |(l, _)| len < l) {
                    best = Some((len, r));
                }
            }
        }
        best.map(|(_, r)| r)
    }

    /// Eliminates along unit pivots until none remain; returns the number of pivots.
    pub fn run(&mut self) -> usize {
        let ncols = self.col_rows.len();
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
        for c in 0..ncols {
            if !self.col_rows[c].is_empty() {
                heap.push(Reverse((self.col_rows[c].len(), c)));
            }
        }
        let mut pivots = 0;
        let mut stalled: BTreeSet<usize> = BTreeSet::new();
        loop {
            while let Some(Reverse((cnt, c))) = heap.pop() {
                let now = self.col_rows[c].len();
                if now == 0 {
                    continue;
                }
                if now != cnt {
                    heap.push(Reverse((now, c)));
                    continue;
                }
                let Some(r) = self.pick_row(c) else {
                    stalled.insert(c);
                    continue;
                };
                let touched = self.pivot(r, c);
                pivots += 1;
                for t in touched {
                    if !self.col_rows[t].is_empty() {
                        heap.push(Reverse((self.col_rows[t].len(), t)));
                    }
                }
            }
            // Fill-in may have produced unit entries in stalled columns.
            let retry: Vec<usize> = stalled
                .iter()
                .copied()
                .filter(|&c| !self.col_rows[c].is_empty() && self.pick_row(c).is_some())
                .collect();
            if retry.is_empty() {
                break;
            }
            for c in retry {
                stalled.remove(&c);
                heap.push(Reverse((self.col_rows[c].len(), c)));
            }
        }
        pivots
    }

    /// Clears column `c` using row `r` and retires that row. Returns columns whose counts changed.
    fn pivot(&mut self, r: usize, c: usize) -> Vec<usize> {
        let prow = self.rows[r].take().unwrap();
        let a = prow[&c].clone();
        let prhs = self.rhs.as_ref().map(|b| b[r].clone());
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for (j, _) in &prow {
            self.col_rows[*j].remove(&r);
            touched.insert(*j);
        }
        let others: Vec<usize> = self.col_rows[c].iter().copied().collect();
        let mut multipliers = Vec::with_capacity(others.len());
        for o in others {
            let row = self.rows[o].as_mut().unwrap();
            let m = &row[&c] * &a;
            for (j, v) in &prow {
                let e = row.entry(*j).or_insert_with(BigInt::zero);
                let was_zero = e.is_zero();
                *e -= &m * v;
                if e.is_zero() {
                    row.remove(j);
                    self.col_rows[*j].remove(&o);
                    touched.insert(*j);
                } else if was_zero {
                    self.col_rows[*j].insert(o);
                    touched.insert(*j);
                }
            }
            if let (Some(b), Some(pb)) = (self.rhs.as_mut(), prhs.as_ref()) {
                b[o] = &b[o] - &m * pb;
            }
            if self.record {
                multipliers.push((o, m));
            }
        }
        if self.record {
            self.ops.push(PivotOp {
                row: r,
                col: c,
                snapshot: prow,
                rhs: prhs.unwrap_or_else(BigInt::zero),
                multipliers,
            });
        }
        touched.into_iter().collect()
    }

    /// Active rows and the columns they touch.
    pub fn core(&self) -> (Vec<usize>, Vec<usize>) {
        let rows: Vec<usize> = (0..self.rows.len()).filter(|&i| self.rows[i].is_some()).collect();
        let cols: Vec<usize> = (0..self.col_rows.len()).filter(|&c| !self.col_rows[c].is_empty()).collect();
        (rows, cols)
    }

    pub fn core_dense(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<BigInt>> {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        rows.iter()
            .map(|r| {
                let mut out = vec![BigInt::zero(); cols.len()];
                for (j, v) in self.rows[*r].as_ref().unwrap() {
                    out[pos[j]] = v.clone();
                }
                out
            })
            .collect()
    }
}

/// Nonzero elementary divisors in increasing divisibility order; their count is the rank.
pub fn elementary_divisors(a: &SparseMatrix) -> Vec<BigInt> {
    let mut e = Eliminator::new(a, None, false);
    let units = e.run();
    let (rows, cols) = e.core();
    let core = e.core_dense(&rows, &cols);
    let nonzero_rows: Vec<Vec<BigInt>> = core.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut out = vec![BigInt::one(); units];
    if !nonzero_rows.is_empty() {
        let mut s = DenseSnf::new(nonzero_rows, cols.len(), false);
        s.run();
        out.extend(s.diagonal());
    }
    out.sort();
    out
}
