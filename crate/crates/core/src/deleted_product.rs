//! Simplicial deleted products conf_s(K,n) with the Σₙ action.
//!
//! A cell is an ordered tuple of pairwise vertex-disjoint simplices. The
//! boundary follows the Leibniz rule with sign (−1)^{d₁+…+d_{i−1}} on the
//! i-th factor. A permutation g sends the factor in slot i to slot g(i) and
//! picks up the Koszul sign of the oriented factors it moves past each other.

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::zlinalg::SparseMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Permutation of {0..n−1} stored as its image list.
pub type Perm = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductCell(pub Vec<Simplex>);

impl fmt::Debug for ProductCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| format!("{s:?}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl ProductCell {
    pub fn new(factors: Vec<Simplex>) -> Result<Self> {
        let c = ProductCell(factors);
        if c.0.len() < 2 {
            return Err(Error::validation("a product cell needs at least two factors"));
        }
        if !c.is_deleted() {
            return Err(Error::validation(format!("factors of {c:?} share a vertex")));
        }
        Ok(c)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn factors(&self) -> &[Simplex] {
        &self.0
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(|s| s.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|s| s.dim()).sum()
    }

    /// True when the factors are pairwise vertex-disjoint.
    pub fn is_deleted(&self) -> bool {
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if !self.0[i].is_disjoint(&self.0[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Leibniz boundary terms.
    pub fn boundary(&self) -> Vec<(i32, ProductCell)> {
        let mut out = Vec::new();
        let mut shift = 0usize;
        for (i, s) in self.0.iter().enumerate() {
            let outer = if shift % 2 == 0 { 1 } else { -1 };
            for (sign, f) in s.facets() {
                let mut v = self.0.clone();
                v[i] = f;
                out.push((outer * sign, ProductCell(v)));
            }
            shift += s.dim();
        }
        out
    }

    /// g·x together with the Koszul sign.
    pub fn act(&self, g: &[usize]) -> (i32, ProductCell) {
        let n = self.0.len();
        let mut v = self.0.clone();
        for i in 0..n {
            v[g[i]] = self.0[i].clone();
        }
        (koszul_sign(g, &self.dims()), ProductCell(v))
    }
}

/// ∏ (−1)^{dᵢdⱼ} over pairs i < j with g(i) > g(j).
pub fn koszul_sign(g: &[usize], dims: &[usize]) -> i32 {
    let mut e = 0usize;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g[i] > g[j] {
                e += dims[i] * dims[j];
            }
        }
    }
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All permutations of {0..n−1} in lexicographic order; the identity comes first.
pub fn permutations(n: usize) -> Vec<Perm> {
    fn rec(cur: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// (g∘h)(i) = g(h(i)).
pub fn compose(g: &[usize], h: &[usize]) -> Perm {
    h.iter().map(|&i| g[i]).collect()
}

pub fn inverse(g: &[usize]) -> Perm {
    let mut inv = vec![0; g.len()];
    for (i, &gi) in g.iter().enumerate() {
        inv[gi] = i;
    }
    inv
}

pub fn parity(g: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g[i] > g[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_permutation(g: &[usize], n: usize) -> bool {
    if g.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in g {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// The n-fold simplicial deleted product of a complex.
#[derive(Clone, Debug)]
pub struct DeletedProduct {
    base: SimplicialComplex,
    arity: usize,
    cells: Vec<Vec<ProductCell>>,
    index: HashMap<ProductCell, usize>,
}

/// Number of cells of conf_s(K,n), counted without materializing them; stops once `cap` is passed.
pub fn count_cells(base: &SimplicialComplex, n: usize, cap: usize) -> usize {
    let all: Vec<&Simplex> = base.iter().collect();
    fn rec(all: &[&Simplex], chosen: &mut Vec<usize>, n: usize, cap: usize, count: &mut usize) {
        if *count > cap {
            return;
        }
        if chosen.len() == n {
            *count += 1;
            return;
        }
        for i in 0..all.len() {
            if chosen.iter().all(|&j| all[j].is_disjoint(all[i])) {
                chosen.push(i);
                rec(all, chosen, n, cap, count);
                chosen.pop();
            }
        }
    }
    let mut count = 0;
    rec(&all, &mut Vec::new(), n, cap, &mut count);
    count
}

impl DeletedProduct {
    pub fn build(base: &SimplicialComplex, n: usize, guard: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::validation(format!("deleted product arity must be at least 2, got {n}")));
        }
        let count = count_cells(base, n, guard);
        if count > guard {
            let exact = count_cells(base, n, usize::MAX);
            return Err(Error::SizeGuard { what: format!("conf_s({},{n})", base.name()), count: exact, guard });
        }
        let all: Vec<&Simplex> = base.iter().collect();
        let mut cells: Vec<Vec<ProductCell>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn rec(all: &[&Simplex], stack: &mut Vec<usize>, n: usize, cells: &mut Vec<Vec<ProductCell>>) {
            if stack.len() == n {
                let c = ProductCell(stack.iter().map(|&i| all[i].clone()).collect());
                let d = c.dim();
                if cells.len() <= d {
                    cells.resize(d + 1, Vec::new());
                }
                cells[d].push(c);
                return;
            }
            for i in 0..all.len() {
                if stack.iter().all(|&j| all[j].is_disjoint(all[i])) {
                    stack.push(i);
                    rec(all, stack, n, cells);
                    stack.pop();
                }
            }
        }
        rec(&all, &mut stack, n, &mut cells);
        let mut index = HashMap::new();
        for layer in cells.iter_mut() {
            layer.sort();
            for (i, c) in layer.iter().enumerate() {
                index.insert(c.clone(), i);
            }
        }
        Ok(DeletedProduct { base: base.clone(), arity: n, cells, index })
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Top dimension, or None when the product is empty.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().rposition(|l| !l.is_empty())
    }

    pub fn cells(&self, k: usize) -> &[ProductCell] {
        self.cells.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, c: &ProductCell) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Cell counts per dimension.
    pub fn census(&self) -> Vec<usize> {
        self.cells.iter().map(|l| l.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// ∂_k with rows indexed by (k−1)-cells and columns by k-cells.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        if k == 0 {
            return Err(Error::validation("boundary degree must be positive"));
        }
        let mut m = SparseMatrix::zeros(self.cells(k - 1).len(), self.cells(k).len());
        for (j, c) in self.cells(k).iter().enumerate() {
            for (sign, f) in c.boundary() {
                m.add_entry(self.index[&f], j, BigInt::from(sign));
            }
        }
        Ok(m)
    }

    pub fn boundary(&self, chain: &Chain<ProductCell>) -> Chain<ProductCell> {
        let mut out = Chain::zero(chain.degree.saturating_sub(1));
        for (c, v) in chain.iter() {
            for (sign, f) in c.boundary() {
                out.add_term(f, v * BigInt::from(sign));
            }
        }
        out
    }

    /// Applies the cell permutation and Koszul sign to a chain; characters are the caller's business.
    pub fn act(&self, g: &[usize], chain: &Chain<ProductCell>) -> Result<Chain<ProductCell>> {
        if !is_permutation(g, self.arity) {
            return Err(Error::validation(format!("{g:?} is not a permutation of {} slots", self.arity)));
        }
        let mut out = Chain::zero(chain.degree);
        for (c, v) in chain.iter() {
            if c.arity() != self.arity {
                return Err(Error::validation("cell arity does not match the deleted product"));
            }
            let (s, gc) = c.act(g);
            out.add_term(gc, v * BigInt::from(s));
        }
        Ok(out)
    }

    /// True when no non-identity permutation fixes a cell.
    pub fn action_is_free(&self) -> bool {
        let perms = permutations(self.arity);
        self.cells.iter().flatten().all(|c| perms[1..].iter().all(|g| c.act(g).1 != *c))
    }
}
