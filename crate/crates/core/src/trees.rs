//! Labeled trivalent trees and the groups 𝒯ₘ = trees with m+2 distinct leaves modulo AS and IHX.
//!
//! A tree is stored unrooted as an adjacency structure with a cyclic order at every
//! internal vertex. The canonical form roots it at the largest leaf and orders the two
//! subtrees below every internal vertex by their least leaf, collecting one AS sign per swap.

use crate::error::{Error, Result};
use crate::zlinalg::{elementary_divisors, SparseMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// Rooted planar binary tree on leaf labels; the root leaf is implicit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bracket {
    Leaf(u32),
    Node(Box<Bracket>, Box<Bracket>),
}

impl fmt::Debug for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Leaf(l) => write!(f, "{l}"),
            Bracket::Node(a, b) => write!(f, "[{a:?},{b:?}]"),
        }
    }
}

impl Bracket {
    pub fn node(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Node(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> Vec<u32> {
        match self {
            Bracket::Leaf(l) => vec![*l],
            Bracket::Node(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    fn min_leaf(&self) -> u32 {
        match self {
            Bracket::Leaf(l) => *l,
            Bracket::Node(a, b) => a.min_leaf().min(b.min_leaf()),
        }
    }

    /// Orders children by least leaf; returns the AS sign of the reordering.
    pub fn normalize(&self) -> (i32, Bracket) {
        match self {
            Bracket::Leaf(_) => (1, self.clone()),
            Bracket::Node(a, b) => {
                let (sa, a) = a.normalize();
                let (sb, b) = b.normalize();
                if a.min_leaf() < b.min_leaf() {
                    (sa * sb, Bracket::node(a, b))
                } else {
                    (-sa * sb, Bracket::node(b, a))
                }
            }
        }
    }

    pub fn relabel(&self, f: &dyn Fn(u32) -> u32) -> Bracket {
        match self {
            Bracket::Leaf(l) => Bracket::Leaf(f(*l)),
            Bracket::Node(a, b) => Bracket::node(a.relabel(f), b.relabel(f)),
        }
    }

    /// Words of the associative expansion, [a,b] = ab − ba.
    pub fn expand(&self) -> BTreeMap<Vec<u32>, i64> {
        match self {
            Bracket::Leaf(l) => [(vec![*l], 1)].into_iter().collect(),
            Bracket::Node(a, b) => {
                let (ea, eb) = (a.expand(), b.expand());
                let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
                for (wa, ca) in &ea {
                    for (wb, cb) in &eb {
                        let mut ab = wa.clone();
                        ab.extend(wb);
                        *out.entry(ab).or_insert(0) += ca * cb;
                        let mut ba = wb.clone();
                        ba.extend(wa);
                        *out.entry(ba).or_insert(0) -= ca * cb;
                    }
                }
                out.retain(|_, v| *v != 0);
                out
            }
        }
    }
}

/// Unrooted trivalent tree with distinct leaf labels and a cyclic order at internal vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    /// Adjacency: leaves have one neighbour, internal vertices three in cyclic order.
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<u32>>,
}

impl Tree {
    /// Tree from a rooted bracket and the root leaf label.
    pub fn from_bracket(root: u32, b: &Bracket) -> Tree {
        let mut t = Tree { adj: vec![Vec::new()], labels: vec![Some(root)] };
        let child = t.attach(b);
        t.adj[0].push(child);
        t.adj[child].insert(0, 0);
        t
    }

    fn attach(&mut self, b: &Bracket) -> usize {
        let id = self.adj.len();
        match b {
            Bracket::Leaf(l) => {
                self.adj.push(Vec::new());
                self.labels.push(Some(*l));
            }
            Bracket::Node(x, y) => {
                self.adj.push(Vec::new());
                self.labels.push(None);
                let cx = self.attach(x);
                let cy = self.attach(y);
                self.adj[cx].insert(0, id);
                self.adj[cy].insert(0, id);
                // Parent is inserted in front by the caller: cyclic order (parent, x, y).
                self.adj[id].push(cx);
                self.adj[id].push(cy);
            }
        }
        id
    }

    /// Parses nested arrays: the outer level is one internal vertex with three branches
    /// in cyclic order, inner levels are binary. A single leaf pair `[a, b]` is the edge tree.
    pub fn from_json(v: &serde_json::Value) -> Result<Tree> {
        fn br(v: &serde_json::Value) -> Result<Bracket> {
            if let Some(l) = v.as_u64() {
                return u32::try_from(l).map(Bracket::Leaf).map_err(|_| Error::validation("leaf label too large"));
            }
            match v.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => Ok(Bracket::node(br(a)?, br(b)?)),
                _ => Err(Error::validation(format!("malformed tree branch {v}"))),
            }
        }
        let t = match v.as_array().map(|a| a.as_slice()) {
            Some([a, b, c]) => {
                // Cyclic (a, b, c): root inside c, rerooted below.
                let (ba, bb, bc) = (br(a)?, br(b)?, br(c)?);
                let mut t = Tree { adj: vec![Vec::new()], labels: vec![None] };
                let ia = t.attach(&ba);
                let ib = t.attach(&bb);
                let ic = t.attach(&bc);
                for x in [ia, ib, ic] {
                    t.adj[x].insert(0, 0);
                }
                t.adj[0] = vec![ia, ib, ic];
                t
            }
            Some([a, b]) => match (br(a)?, br(b)?) {
                (Bracket::Leaf(x), Bracket::Leaf(y)) => {
                    Tree { adj: vec![vec![1], vec![0]], labels: vec![Some(x), Some(y)] }
                }
                _ => return Err(Error::validation("a tree's top level lists three branches")),
            },
            _ => return Err(Error::validation(format!("malformed tree {v}"))),
        };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (i, l) in self.labels.iter().enumerate() {
            match l {
                Some(x) => {
                    if self.adj[i].len() != 1 {
                        return Err(Error::validation("leaf with wrong valence"));
                    }
                    if !seen.insert(*x) {
                        return Err(Error::validation(format!("repeated leaf label {x}")));
                    }
                }
                None => {
                    if self.adj[i].len() != 3 {
                        return Err(Error::validation("internal vertex is not trivalent"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn leaves(&self) -> BTreeSet<u32> {
        self.labels.iter().flatten().copied().collect()
    }

    pub fn relabel(&self, f: &dyn Fn(u32) -> u32) -> Tree {
        Tree { adj: self.adj.clone(), labels: self.labels.iter().map(|l| l.map(f)).collect() }
    }

    /// Bracket seen from a leaf, before normalization.
    pub fn rooted_at(&self, root: u32) -> Result<Bracket> {
        let r = self
            .labels
            .iter()
            .position(|l| *l == Some(root))
            .ok_or_else(|| Error::validation(format!("tree has no leaf {root}")))?;
        if self.adj.len() == 2 {
            return Err(Error::validation("edge tree has no bracket form"));
        }
        Ok(self.descend(self.adj[r][0], r))
    }

    fn descend(&self, v: usize, from: usize) -> Bracket {
        if let Some(l) = self.labels[v] {
            return Bracket::Leaf(l);
        }
        let n = &self.adj[v];
        let k = n.iter().position(|&x| x == from).unwrap();
        let (a, b) = (n[(k + 1) % 3], n[(k + 2) % 3]);
        Bracket::node(self.descend(a, v), self.descend(b, v))
    }

    /// (sign, bracket) rooted at the largest leaf with children ordered by least leaf.
    pub fn canonical(&self) -> Result<(i32, u32, Bracket)> {
        let root = *self.leaves().iter().next_back().ok_or_else(|| Error::validation("tree without leaves"))?;
        let (s, b) = self.rooted_at(root)?.normalize();
        Ok((s, root, b))
    }
}

/// Every normalized bracket on the given leaves (unordered binary trees).
pub fn all_brackets(leaves: &[u32]) -> Vec<Bracket> {
    if leaves.len() == 1 {
        return vec![Bracket::Leaf(leaves[0])];
    }
    let first = leaves[0];
    let rest = &leaves[1..];
    let mut out = Vec::new();
    // The part containing the least leaf comes first.
    for mask in 0u32..(1 << rest.len()) {
        if mask == (1 << rest.len()) - 1 {
            continue;
        }
        let mut a = vec![first];
        let mut b = Vec::new();
        for (i, &l) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                a.push(l);
            } else {
                b.push(l);
            }
        }
        for x in all_brackets(&a) {
            for y in all_brackets(&b) {
                out.push(Bracket::node(x.clone(), y));
            }
        }
    }
    out.sort();
    out
}

/// Presentation of 𝒯ₘ and its reduction to the left-normed basis.
#[derive(Clone, Debug)]
pub struct TreeGroup {
    pub order: usize,
    /// Canonical brackets on leaves 1..=m+1, rooted at m+2.
    pub generators: Vec<Bracket>,
    index: HashMap<Bracket, usize>,
    /// One row per IHX instance.
    pub relations: SparseMatrix,
    /// Left-normed brackets [..[[1,σ₂],σ₃]..,σ_{m+1}].
    pub basis: Vec<Bracket>,
    basis_words: HashMap<Vec<u32>, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeGroupSummary {
    pub order: usize,
    pub generators: usize,
    pub relations: usize,
    pub rank: usize,
    pub torsion: Vec<String>,
}

fn ihx_at(b: &Bracket, out: &mut Vec<[Bracket; 3]>) {
    let Bracket::Node(x, c) = b else { return };
    let subs: [(&Bracket, &Bracket); 2] = [(x, c), (c, x)];
    for (inner, other) in subs {
        if let Bracket::Node(a, bb) = inner {
            let (a, bb, c) = ((**a).clone(), (**bb).clone(), other.clone());
            out.push([
                Bracket::node(Bracket::node(a.clone(), bb.clone()), c.clone()),
                Bracket::node(Bracket::node(bb.clone(), c.clone()), a.clone()),
                Bracket::node(Bracket::node(c, a), bb),
            ]);
        }
    }
    ihx_at(x, out);
    ihx_at(c, out);
}

/// Rebuilds `whole` with the subtree at `path` replaced.
fn replace_at(whole: &Bracket, path: &[bool], new: Bracket) -> Bracket {
    match (whole, path.split_first()) {
        (_, None) => new,
        (Bracket::Node(a, b), Some((&right, rest))) => {
            if right {
                Bracket::node((**a).clone(), replace_at(b, rest, new))
            } else {
                Bracket::node(replace_at(a, rest, new), (**b).clone())
            }
        }
        (Bracket::Leaf(_), Some(_)) => unreachable!("path leaves the tree"),
    }
}

fn internal_paths(b: &Bracket, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
    if let Bracket::Node(x, y) = b {
        out.push(prefix.clone());
        prefix.push(false);
        internal_paths(x, prefix, out);
        prefix.pop();
        prefix.push(true);
        internal_paths(y, prefix, out);
        prefix.pop();
    }
}

fn subtree<'a>(b: &'a Bracket, path: &[bool]) -> &'a Bracket {
    match (b, path.split_first()) {
        (_, None) => b,
        (Bracket::Node(x, y), Some((&right, rest))) => subtree(if right { y } else { x }, rest),
        _ => unreachable!(),
    }
}

/// Number of generators of 𝒯ₘ: (2m−1)!!.
pub fn generator_count(m: usize) -> usize {
    (1..=m).map(|k| 2 * k - 1).product()
}

impl TreeGroup {
    pub fn new(m: usize, guard: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("tree groups start at order 1"));
        }
        let count = generator_count(m);
        if m > 8 || count > guard {
            return Err(Error::SizeGuard { what: format!("trees of order {m}"), count, guard });
        }
        let leaves: Vec<u32> = (1..=m as u32 + 1).collect();
        let generators = all_brackets(&leaves);
        let index: HashMap<Bracket, usize> = generators.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let mut rows: Vec<BTreeMap<usize, i64>> = Vec::new();
        let mut seen: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
        for g in &generators {
            let mut paths = Vec::new();
            internal_paths(g, &mut Vec::new(), &mut paths);
            for p in paths {
                let mut local = Vec::new();
                ihx_at_top(subtree(g, &p), &mut local);
                for terms in local {
                    let mut row: BTreeMap<usize, i64> = BTreeMap::new();
                    for t in terms {
                        let (s, n) = replace_at(g, &p, t).normalize();
                        *row.entry(index[&n]).or_insert(0) += s as i64;
                    }
                    row.retain(|_, v| *v != 0);
                    let key: Vec<(usize, i64)> = row.iter().map(|(k, v)| (*k, *v)).collect();
                    let neg: Vec<(usize, i64)> = key.iter().map(|(k, v)| (*k, -v)).collect();
                    if !key.is_empty() && !seen.contains(&neg) && seen.insert(key) {
                        rows.push(row);
                    }
                }
            }
        }
        let mut relations = SparseMatrix::zeros(rows.len(), generators.len());
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r {
                relations.add_entry(i, *j, BigInt::from(*v));
            }
        }
        let mut basis = Vec::new();
        let mut basis_words = HashMap::new();
        for perm in permutations_of(&leaves[1..]) {
            let mut b = Bracket::Leaf(1);
            for &l in &perm {
                b = Bracket::node(b, Bracket::Leaf(l));
            }
            let mut w = vec![1];
            w.extend(&perm);
            basis_words.insert(w, basis.len());
            basis.push(b);
        }
        Ok(TreeGroup { order: m, generators, index, relations, basis, basis_words })
    }

    pub fn leaf_count(&self) -> usize {
        self.order + 2
    }

    /// Rank and torsion of the quotient by the relation matrix.
    pub fn summary(&self) -> TreeGroupSummary {
        let divisors = elementary_divisors(&self.relations);
        let nonzero: Vec<&BigInt> = divisors.iter().filter(|d| !d.is_zero()).collect();
        TreeGroupSummary {
            order: self.order,
            generators: self.generators.len(),
            relations: self.relations.rows(),
            rank: self.generators.len() - nonzero.len(),
            torsion: nonzero.iter().filter(|d| d.abs() != BigInt::one()).map(|d| d.abs().to_string()).collect(),
        }
    }

    /// Coordinates of a canonical generator in the left-normed basis.
    ///
    /// Words beginning with leaf 1 in the associative expansion are exactly the basis coefficients.
    pub fn reduce_bracket(&self, b: &Bracket) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.basis.len()];
        for (w, c) in b.expand() {
            if let Some(&i) = self.basis_words.get(&w) {
                out[i] += c;
            }
        }
        out
    }

    /// Coordinates of a tree whose leaves are exactly 1..=m+2.
    pub fn reduce_tree(&self, t: &Tree) -> Result<Vec<BigInt>> {
        let want: BTreeSet<u32> = (1..=self.leaf_count() as u32).collect();
        if t.leaves() != want {
            return Err(Error::validation(format!("tree leaves {:?} are not 1..={}", t.leaves(), self.leaf_count())));
        }
        let (s, _, b) = t.canonical()?;
        Ok(self.reduce_bracket(&b).into_iter().map(|x| x * s).collect())
    }

    /// Column index of a canonical generator.
    pub fn generator_index(&self, b: &Bracket) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Matrix of the relabeling action of a permutation g of {1..m+2} (0-based images) on the basis.
    pub fn action_matrix(&self, g: &[usize]) -> Result<Vec<Vec<BigInt>>> {
        let n = self.leaf_count();
        if g.len() != n {
            return Err(Error::validation("permutation size differs from the leaf count"));
        }
        let root = n as u32;
        let mut cols = Vec::new();
        for b in &self.basis {
            let t = Tree::from_bracket(root, b).relabel(&|l| g[l as usize - 1] as u32 + 1);
            cols.push(self.reduce_tree(&t)?);
        }
        let r = self.basis.len();
        Ok((0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect())
    }
}

fn ihx_at_top(b: &Bracket, out: &mut Vec<[Bracket; 3]>) {
    let mut all = Vec::new();
    ihx_at(b, &mut all);
    // Keep only the relations centered at this vertex.
    let Bracket::Node(x, c) = b else { return };
    let expect = [x.as_ref(), c.as_ref()].iter().filter(|s| matches!(s, Bracket::Node(..))).count();
    out.extend(all.into_iter().take(expect));
}

fn permutations_of(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations_of(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Integer combination of trees, kept as basis coordinates of 𝒯ₘ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeElement {
    pub order: usize,
    #[serde(with = "crate::chain::bigjson::vec")]
    pub coords: Vec<BigInt>,
}

impl TreeElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The value under 𝒯₁ ≅ Z, [1,2] rooted at 3 ↦ 1.
    pub fn as_integer(&self) -> Option<i64> {
        if self.order == 1 {
            self.coords[0].to_i64()
        } else {
            None
        }
    }
}

/// Σ ε(p)·t_p for signed trees with leaves 1..=m+2.
pub fn tau(group: &TreeGroup, points: &[(i32, Tree)]) -> Result<TreeElement> {
    let mut coords = vec![BigInt::zero(); group.basis.len()];
    for (s, t) in points {
        if *s != 1 && *s != -1 {
            return Err(Error::validation("intersection signs are ±1"));
        }
        for (c, x) in coords.iter_mut().zip(group.reduce_tree(t)?) {
            *c += x * s;
        }
    }
    Ok(TreeElement { order: group.order, coords })
}
