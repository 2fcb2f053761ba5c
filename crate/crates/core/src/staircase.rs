//! Staircase triangulation of deleted products and lazy cochains on it.
//!
//! A simplex is a chain x₀ < x₁ < … < x_k of vertex tuples in the product
//! order, stored flattened: tuple t occupies positions t·n..(t+1)·n. Each
//! step advances a nonempty set of coordinates to the next vertex of their
//! factor, so the carrier cell is read off from the coordinate values.

use crate::chain::Chain;
use crate::deleted_product::{DeletedProduct, ProductCell};
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, Vertex};
use crate::zlinalg::SparseMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Dimension of a flattened simplex of the given arity.
pub fn simplex_dim(s: &[u32], n: usize) -> usize {
    s.len() / n - 1
}

/// Codimension-one faces with signs (−1)^t; a vertex has none.
pub fn faces(s: &[u32], n: usize) -> Vec<(i32, Vec<u32>)> {
    let m = s.len() / n;
    if m <= 1 {
        return Vec::new();
    }
    (0..m)
        .map(|t| {
            let mut f = Vec::with_capacity(s.len() - n);
            f.extend_from_slice(&s[..t * n]);
            f.extend_from_slice(&s[(t + 1) * n..]);
            (if t % 2 == 0 { 1 } else { -1 }, f)
        })
        .collect()
}

/// Carrier cell: per coordinate, the set of values it takes.
pub fn carrier(s: &[u32], n: usize) -> ProductCell {
    let m = s.len() / n;
    let factors = (0..n)
        .map(|i| {
            let mut v: Vec<Vertex> = (0..m).map(|t| s[t * n + i]).collect();
            v.dedup();
            Simplex::from_sorted(v)
        })
        .collect();
    ProductCell(factors)
}

/// Checks the chain condition and vertex-disjointness of the carrier.
pub fn is_valid_simplex(s: &[u32], n: usize) -> bool {
    if n == 0 || s.is_empty() || s.len() % n != 0 {
        return false;
    }
    let m = s.len() / n;
    for t in 1..m {
        let mut moved = false;
        for i in 0..n {
            let (a, b) = (s[(t - 1) * n + i], s[t * n + i]);
            if b < a {
                return false;
            }
            moved |= b > a;
        }
        if !moved {
            return false;
        }
    }
    carrier(s, n).is_deleted()
}

/// Simplices of dimension k whose carrier is exactly the given cell.
pub fn simplices_with_support(cell: &ProductCell, k: usize) -> Vec<Vec<u32>> {
    let n = cell.arity();
    let dims = cell.dims();
    let total: usize = dims.iter().sum();
    let lo = dims.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    if k < lo || k > total {
        return out;
    }
    let verts: Vec<&[Vertex]> = cell.factors().iter().map(|s| s.vertices()).collect();
    let mut pos = vec![0usize; n];
    let mut cur: Vec<u32> = (0..n).map(|i| verts[i][0]).collect();
    fn rec(
        verts: &[&[Vertex]],
        dims: &[usize],
        pos: &mut Vec<usize>,
        cur: &mut Vec<u32>,
        steps_left: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let n = dims.len();
        let remaining: usize = (0..n).map(|i| dims[i] - pos[i]).sum();
        let need: usize = (0..n).map(|i| dims[i] - pos[i]).max().unwrap_or(0);
        if steps_left == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if need > steps_left || remaining < steps_left {
            return;
        }
        let movable: Vec<usize> = (0..n).filter(|&i| pos[i] < dims[i]).collect();
        for mask in 1u32..(1 << movable.len()) {
            let mut next: Vec<u32> = cur[cur.len() - n..].to_vec();
            for (b, &i) in movable.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    pos[i] += 1;
                    next[i] = verts[i][pos[i]];
                }
            }
            let len = cur.len();
            cur.extend_from_slice(&next);
            rec(verts, dims, pos, cur, steps_left - 1, out);
            cur.truncate(len);
            for (b, &i) in movable.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    pos[i] -= 1;
                }
            }
        }
    }
    rec(&verts, &dims, &mut pos, &mut cur, k, &mut out);
    out.sort();
    out
}

/// Fundamental chain of a cell: top simplices with shuffle signs.
pub fn fundamental_chain(cell: &ProductCell) -> Vec<(i32, Vec<u32>)> {
    let n = cell.arity();
    let k = cell.dim();
    simplices_with_support(cell, k)
        .into_iter()
        .map(|s| {
            let labels: Vec<usize> = (1..=k)
                .map(|t| (0..n).find(|&i| s[t * n + i] != s[(t - 1) * n + i]).unwrap())
                .collect();
            let mut inv = 0;
            for a in 0..labels.len() {
                for b in a + 1..labels.len() {
                    if labels[a] > labels[b] {
                        inv += 1;
                    }
                }
            }
            (if inv % 2 == 0 { 1 } else { -1 }, s)
        })
        .collect()
}

/// Image of a simplex under the coordinate projection `idx`; None when it degenerates.
pub fn project(s: &[u32], n: usize, idx: &[usize]) -> Option<Vec<u32>> {
    let m = s.len() / n;
    let k = idx.len();
    let mut out: Vec<u32> = Vec::with_capacity(m * k);
    for t in 0..m {
        let start = out.len();
        for &i in idx {
            out.push(s[t * n + i]);
        }
        if t > 0 && out[start..] == out[start - k..start] {
            return None;
        }
    }
    Some(out)
}

/// Cross product of chains on K pushed into the staircase triangulation.
pub fn cross_chain(chains: &[&Chain<Simplex>]) -> Result<Vec<(Vec<u32>, BigInt)>> {
    let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
    let mut tuple: Vec<(&Simplex, &BigInt)> = Vec::new();
    fn rec<'a>(
        chains: &[&'a Chain<Simplex>],
        tuple: &mut Vec<(&'a Simplex, &'a BigInt)>,
        acc: &mut HashMap<Vec<u32>, BigInt>,
    ) -> Result<()> {
        if tuple.len() == chains.len() {
            let cell = ProductCell::new(tuple.iter().map(|(s, _)| (*s).clone()).collect())?;
            let coef: BigInt = tuple.iter().fold(BigInt::one(), |a, (_, c)| a * *c);
            for (sign, s) in fundamental_chain(&cell) {
                *acc.entry(s).or_insert_with(BigInt::zero) += &coef * sign;
            }
            return Ok(());
        }
        for (s, c) in chains[tuple.len()].iter() {
            tuple.push((s, c));
            rec(chains, tuple, acc)?;
            tuple.pop();
        }
        Ok(())
    }
    rec(chains, &mut tuple, &mut acc)?;
    let mut out: Vec<(Vec<u32>, BigInt)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    out.sort();
    Ok(out)
}

/// Simplicial boundary of a flattened chain.
pub fn chain_boundary(chain: &[(Vec<u32>, BigInt)], n: usize) -> Vec<(Vec<u32>, BigInt)> {
    let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
    for (s, v) in chain {
        for (sign, f) in faces(s, n) {
            *acc.entry(f).or_insert_with(BigInt::zero) += v * sign;
        }
    }
    let mut out: Vec<_> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    out.sort();
    out
}

/// Triangulation of a face-closed set of product cells.
#[derive(Clone, Debug)]
pub struct Staircase {
    arity: usize,
    simplices: Vec<Vec<Vec<u32>>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Staircase {
    pub fn new(dp: &DeletedProduct, guard: usize) -> Result<Self> {
        let cells: Vec<&ProductCell> = (0..=dp.dim().unwrap_or(0)).flat_map(|k| dp.cells(k)).collect();
        Self::from_cells(dp.arity(), &cells, guard)
    }

    /// The cells must be closed under taking faces.
    pub fn from_cells(arity: usize, cells: &[&ProductCell], guard: usize) -> Result<Self> {
        let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
        let mut total = 0usize;
        for c in cells {
            let dims = c.dims();
            let lo = dims.iter().copied().max().unwrap_or(0);
            for k in lo..=c.dim() {
                let ss = simplices_with_support(c, k);
                total += ss.len();
                if total > guard {
                    return Err(Error::SizeGuard {
                        what: "staircase triangulation".into(),
                        count: total,
                        guard,
                    });
                }
                if simplices.len() <= k {
                    simplices.resize(k + 1, Vec::new());
                }
                simplices[k].extend(ss);
            }
        }
        let mut index = HashMap::new();
        for layer in simplices.iter_mut() {
            layer.sort();
            for (i, s) in layer.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        Ok(Staircase { arity, simplices, index })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn simplices(&self, k: usize) -> &[Vec<u32>] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn census(&self) -> Vec<usize> {
        self.simplices.iter().map(|l| l.len()).collect()
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().rposition(|l| !l.is_empty())
    }

    /// ∂_k with rows indexed by (k−1)-simplices.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        if k == 0 {
            return Err(Error::validation("boundary degree must be positive"));
        }
        let mut m = SparseMatrix::zeros(self.simplices(k - 1).len(), self.simplices(k).len());
        for (j, s) in self.simplices(k).iter().enumerate() {
            for (sign, f) in faces(s, self.arity) {
                let i = self.index.get(&f).ok_or_else(|| {
                    Error::validation(format!("face {f:?} missing; cell set is not face-closed"))
                })?;
                m.add_entry(*i, j, BigInt::from(sign));
            }
        }
        Ok(m)
    }

    /// δᵏ = ∂ᵀ_{k+1} from degree k to k+1.
    pub fn coboundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        Ok(self.boundary_matrix(k + 1)?.transpose())
    }

    /// Values of a lazy cochain on every simplex of its degree.
    pub fn tabulate(&self, c: &dyn TCochain) -> Vec<BigInt> {
        self.simplices(c.degree()).iter().map(|s| c.value(s)).collect()
    }

    pub fn table(&self, k: usize, values: &[BigInt]) -> TableCochain {
        let mut t = TableCochain::new(self.arity, k);
        for (s, v) in self.simplices(k).iter().zip(values) {
            t.set(s.clone(), v.clone());
        }
        t
    }
}

/// Integer cochain on the staircase triangulation, evaluated on demand.
pub trait TCochain {
    fn arity(&self) -> usize;
    fn degree(&self) -> usize;
    fn value(&self, s: &[u32]) -> BigInt;
}

pub type CochainRef = Rc<dyn TCochain>;

/// Explicit sparse cochain; absent simplices have value 0.
#[derive(Clone, Debug, Default)]
pub struct TableCochain {
    arity: usize,
    degree: usize,
    values: HashMap<Vec<u32>, BigInt>,
}

impl TableCochain {
    pub fn new(arity: usize, degree: usize) -> Self {
        TableCochain { arity, degree, values: HashMap::new() }
    }

    pub fn set(&mut self, s: Vec<u32>, v: BigInt) {
        if v.is_zero() {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
    }

    pub fn add(&mut self, s: Vec<u32>, v: BigInt) {
        let e = self.values.entry(s.clone()).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.values.remove(&s);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }
}

impl TCochain for TableCochain {
    fn arity(&self) -> usize {
        self.arity
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn value(&self, s: &[u32]) -> BigInt {
        self.values.get(s).cloned().unwrap_or_default()
    }
}

struct Pullback {
    inner: CochainRef,
    idx: Vec<usize>,
    arity: usize,
}

impl TCochain for Pullback {
    fn arity(&self) -> usize {
        self.arity
    }
    fn degree(&self) -> usize {
        self.inner.degree()
    }
    fn value(&self, s: &[u32]) -> BigInt {
        match project(s, self.arity, &self.idx) {
            Some(p) => self.inner.value(&p),
            None => BigInt::zero(),
        }
    }
}

/// Pullback along the projection onto coordinates `idx` from arity n.
pub fn pullback(u: CochainRef, idx: &[usize], n: usize) -> Result<CochainRef> {
    if idx.len() != u.arity() || idx.iter().any(|&i| i >= n) {
        return Err(Error::validation(format!("projection {idx:?} does not map arity {n} to {}", u.arity())));
    }
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return Err(Error::validation("projection indices must be distinct"));
    }
    Ok(Rc::new(Pullback { inner: u, idx: idx.to_vec(), arity: n }))
}

struct Cup {
    a: CochainRef,
    b: CochainRef,
}

impl TCochain for Cup {
    fn arity(&self) -> usize {
        self.a.arity()
    }
    fn degree(&self) -> usize {
        self.a.degree() + self.b.degree()
    }
    fn value(&self, s: &[u32]) -> BigInt {
        let n = self.a.arity();
        let p = self.a.degree();
        let front = &s[..(p + 1) * n];
        let fa = self.a.value(front);
        if fa.is_zero() {
            return fa;
        }
        fa * self.b.value(&s[p * n..])
    }
}

/// Alexander–Whitney cup product.
pub fn cup(a: CochainRef, b: CochainRef) -> Result<CochainRef> {
    if a.arity() != b.arity() {
        return Err(Error::validation("cup of cochains on different arities"));
    }
    Ok(Rc::new(Cup { a, b }))
}

struct LinComb {
    terms: Vec<(BigInt, CochainRef)>,
    arity: usize,
    degree: usize,
}

impl TCochain for LinComb {
    fn arity(&self) -> usize {
        self.arity
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn value(&self, s: &[u32]) -> BigInt {
        let mut acc = BigInt::zero();
        for (k, c) in &self.terms {
            let v = c.value(s);
            if !v.is_zero() {
                acc += k * v;
            }
        }
        acc
    }
}

/// Σ kᵢ·cᵢ over cochains of one arity and degree.
pub fn lincomb(terms: Vec<(BigInt, CochainRef)>) -> Result<CochainRef> {
    let first = terms.first().ok_or_else(|| Error::validation("empty linear combination"))?;
    let (arity, degree) = (first.1.arity(), first.1.degree());
    if terms.iter().any(|(_, c)| c.arity() != arity || c.degree() != degree) {
        return Err(Error::validation("linear combination of incompatible cochains"));
    }
    Ok(Rc::new(LinComb { terms, arity, degree }))
}

struct Cobound {
    inner: CochainRef,
}

impl TCochain for Cobound {
    fn arity(&self) -> usize {
        self.inner.arity()
    }
    fn degree(&self) -> usize {
        self.inner.degree() + 1
    }
    fn value(&self, s: &[u32]) -> BigInt {
        let mut acc = BigInt::zero();
        for (sign, f) in faces(s, self.inner.arity()) {
            let v = self.inner.value(&f);
            if !v.is_zero() {
                acc += v * sign;
            }
        }
        acc
    }
}

pub fn coboundary(c: CochainRef) -> CochainRef {
    Rc::new(Cobound { inner: c })
}

struct Memo {
    inner: CochainRef,
    cache: RefCell<HashMap<Vec<u32>, BigInt>>,
}

impl TCochain for Memo {
    fn arity(&self) -> usize {
        self.inner.arity()
    }
    fn degree(&self) -> usize {
        self.inner.degree()
    }
    fn value(&self, s: &[u32]) -> BigInt {
        if let Some(v) = self.cache.borrow().get(s) {
            return v.clone();
        }
        let v = self.inner.value(s);
        self.cache.borrow_mut().insert(s.to_vec(), v.clone());
        v
    }
}

/// Caches values of an expensive cochain.
pub fn memo(c: CochainRef) -> CochainRef {
    Rc::new(Memo { inner: c, cache: RefCell::new(HashMap::new()) })
}

/// ⟨c, z⟩ for a flattened chain.
pub fn pair(c: &dyn TCochain, z: &[(Vec<u32>, BigInt)]) -> BigInt {
    let mut acc = BigInt::zero();
    for (s, v) in z {
        let cv = c.value(s);
        if !cv.is_zero() {
            acc += cv * v;
        }
    }
    acc
}

/// Checks δc = 0 on every simplex of degree deg(c)+1 carried by the given cells.
pub fn is_cocycle_on(c: &dyn TCochain, cells: &[ProductCell]) -> bool {
    let d = coboundary_ref(c);
    cells.iter().all(|cell| {
        simplices_with_support(cell, c.degree() + 1).iter().all(|s| d(s).is_zero())
    })
}

fn coboundary_ref(c: &dyn TCochain) -> impl Fn(&[u32]) -> BigInt + '_ {
    move |s| {
        let mut acc = BigInt::zero();
        for (sign, f) in faces(s, c.arity()) {
            acc += c.value(&f) * sign;
        }
        acc
    }
}
