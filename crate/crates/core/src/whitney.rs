//! Whitney-disk data, the cocycle w₃, stabilization and splitting, and tree-valued tower cochains.

use crate::chain::Chain;
use crate::deleted_product::{permutations, ProductCell};
use crate::equivariant::{local_coboundary, orbit_of, reduce_chain_local, SignCharacter};
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::trees::{tau, Tree, TreeElement, TreeGroup};
use crate::zlinalg::{Certificate, CertificateKind, Payload};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// An intersection point of two 2-cells, paired by the given disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointData {
    pub sign: i32,
    pub disk: usize,
}

/// Intersection numbers W·σ_k of a Whitney disk, keyed by 2-cell index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskData {
    pub meets: BTreeMap<usize, i64>,
}

/// Intersections of f(σ_i) and f(σ_j); disks carry the orientation of the ordered pair (i, j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairData {
    pub cells: [usize; 2],
    pub points: Vec<PointData>,
    pub disks: Vec<DiskData>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhitneyDatum {
    pub pairs: Vec<PairData>,
}

fn two_cell(c: &SimplicialComplex, i: usize) -> Result<&Simplex> {
    c.simplices(2).get(i).ok_or_else(|| Error::validation(format!("no 2-cell with index {i}")))
}

fn disjoint_cells(c: &SimplicialComplex, i: usize, j: usize) -> Result<bool> {
    Ok(i != j && two_cell(c, i)?.is_disjoint(two_cell(c, j)?))
}

impl WhitneyDatum {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::validation(format!("Whitney datum JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn validate(&self, c: &SimplicialComplex) -> Result<()> {
        if c.dim() != Some(2) {
            return Err(Error::validation("Whitney data live on 2-complexes"));
        }
        let mut seen = BTreeSet::new();
        for p in &self.pairs {
            let [i, j] = p.cells;
            if !disjoint_cells(c, i, j)? {
                return Err(Error::validation(format!("cells {i} and {j} are adjacent")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::validation(format!("pair {{{i}, {j}}} listed twice")));
            }
            let mut per_disk = vec![(0usize, 0usize); p.disks.len()];
            for pt in &p.points {
                let slot = per_disk
                    .get_mut(pt.disk)
                    .ok_or_else(|| Error::validation(format!("point refers to missing disk {}", pt.disk)))?;
                match pt.sign {
                    1 => slot.0 += 1,
                    -1 => slot.1 += 1,
                    s => return Err(Error::validation(format!("intersection sign {s} is not ±1"))),
                }
            }
            if let Some(d) = per_disk.iter().position(|&x| x != (1, 1)) {
                return Err(Error::validation(format!("disk {d} of pair {{{i}, {j}}} does not pair one + with one − point")));
            }
            for d in &p.disks {
                for &k in d.meets.keys() {
                    if !disjoint_cells(c, i, k)? || !disjoint_cells(c, j, k)? {
                        return Err(Error::validation(format!("disk of pair {{{i}, {j}}} meets cell {k}, which is not disjoint from both")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Σ over disks of W_ij·σ_k, with W_ji = −W_ij.
    pub fn w(&self, i: usize, j: usize, k: usize) -> i64 {
        let mut total = 0;
        for p in &self.pairs {
            let s = if p.cells == [i, j] {
                1
            } else if p.cells == [j, i] {
                -1
            } else {
                continue;
            };
            total += s * p.disks.iter().map(|d| d.meets.get(&k).copied().unwrap_or(0)).sum::<i64>();
        }
        total
    }

    /// Unordered triples with a possibly nonzero three-term sum.
    fn touched_triples(&self) -> BTreeSet<[usize; 3]> {
        let mut out = BTreeSet::new();
        for p in &self.pairs {
            for d in &p.disks {
                for &k in d.meets.keys() {
                    let mut t = [p.cells[0], p.cells[1], k];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
        out
    }
}

/// w₃ on conf_s(K,3): full values on ordered 6-cells, zero entries omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct W3Cochain {
    pub values: Chain<ProductCell>,
}

impl W3Cochain {
    /// Orbit values at lexicographically least representatives.
    pub fn orbit_support(&self) -> BTreeMap<ProductCell, BigInt> {
        let perms = permutations(3);
        let mut out = BTreeMap::new();
        for (cell, v) in self.values.iter() {
            let (rep, coef) = orbit_of(cell, &perms, SignCharacter::Sign);
            out.insert(rep, v * BigInt::from(coef));
        }
        out
    }

    pub fn sub(&self, other: &W3Cochain) -> Chain<ProductCell> {
        self.values.sub(&other.values)
    }
}

fn triple_cell(c: &SimplicialComplex, t: [usize; 3]) -> Result<ProductCell> {
    ProductCell::new(t.iter().map(|&i| two_cell(c, i).cloned()).collect::<Result<_>>()?)
}

/// Value W_ij·σ_k + W_jk·σ_i + W_ki·σ_j on σ_i×σ_j×σ_k, for every ordering; equivariance is checked.
pub fn w3_cocycle(c: &SimplicialComplex, wd: &WhitneyDatum) -> Result<W3Cochain> {
    wd.validate(c)?;
    let mut values = Chain::zero(6);
    let perms = permutations(3);
    for t in wd.touched_triples() {
        let base = triple_cell(c, t)?;
        let value_of = |[i, j, k]: [usize; 3]| BigInt::from(wd.w(i, j, k) + wd.w(j, k, i) + wd.w(k, i, j));
        let v0 = value_of(t);
        for g in &perms {
            let mut o = [0; 3];
            for (i, &x) in t.iter().enumerate() {
                o[g[i]] = x;
            }
            let v = value_of(o);
            let (eps, img) = base.act(g);
            debug_assert_eq!(img, triple_cell(c, o)?);
            if v != &v0 * BigInt::from(SignCharacter::Sign.value(g) * eps) {
                return Err(Error::verification(format!("w3 is not equivariant on the orbit of {base:?}")));
            }
            values.add_term(img, v);
        }
    }
    Ok(W3Cochain { values })
}

/// Adds a canceling pair of σ₁∩σ₂ points with a new disk meeting each 2-cell ρ ⊃ ν
/// (disjoint from σ₁, σ₂) in sign·[ρ:ν] points.
pub fn stabilize(c: &SimplicialComplex, wd: &WhitneyDatum, s1: usize, s2: usize, nu: &Simplex, sign: i32) -> Result<WhitneyDatum> {
    wd.validate(c)?;
    if sign != 1 && sign != -1 {
        return Err(Error::validation("stabilization sign is ±1"));
    }
    if nu.dim() != 1 || !c.contains(nu) {
        return Err(Error::validation(format!("{nu:?} is not an edge of the complex")));
    }
    let (a, b) = (two_cell(c, s1)?, two_cell(c, s2)?);
    if !disjoint_cells(c, s1, s2)? || !a.is_disjoint(nu) || !b.is_disjoint(nu) {
        return Err(Error::validation("σ₁, σ₂ and ν must be pairwise disjoint"));
    }
    let mut meets = BTreeMap::new();
    for (k, rho) in c.simplices(2).iter().enumerate() {
        if rho.contains(nu) && rho.is_disjoint(a) && rho.is_disjoint(b) {
            meets.insert(k, (sign * rho.incidence(nu)) as i64);
        }
    }
    let mut out = wd.clone();
    let pos = out.pairs.iter().position(|p| p.cells == [s1, s2] || p.cells == [s2, s1]);
    let pair = match pos {
        Some(p) => &mut out.pairs[p],
        None => {
            out.pairs.push(PairData { cells: [s1, s2], points: Vec::new(), disks: Vec::new() });
            out.pairs.last_mut().unwrap()
        }
    };
    if pair.cells == [s2, s1] {
        for v in meets.values_mut() {
            *v = -*v;
        }
    }
    let id = pair.disks.len();
    pair.disks.push(DiskData { meets });
    pair.points.push(PointData { sign: 1, disk: id });
    pair.points.push(PointData { sign: -1, disk: id });
    Ok(out)
}

/// Stabilization moves (σ₁, σ₂, ν) whose new disk meets at least one 2-cell.
pub fn stabilization_moves(c: &SimplicialComplex) -> Vec<(usize, usize, Simplex)> {
    let tris = c.simplices(2);
    let mut out = Vec::new();
    for (i, a) in tris.iter().enumerate() {
        for (j, b) in tris.iter().enumerate().skip(i + 1) {
            if !a.is_disjoint(b) {
                continue;
            }
            for e in c.simplices(1) {
                if e.is_disjoint(a)
                    && e.is_disjoint(b)
                    && tris.iter().any(|r| r.contains(e) && r.is_disjoint(a) && r.is_disjoint(b))
                {
                    out.push((i, j, e.clone()));
                }
            }
        }
    }
    out
}

/// δ̄ of the elementary equivariant 5-cochain with value 1 on σ₁×σ₂×ν, as a full cochain.
pub fn elementary_coboundary(c: &SimplicialComplex, s1: usize, s2: usize, nu: &Simplex) -> Result<Chain<ProductCell>> {
    let (a, b) = (two_cell(c, s1)?.clone(), two_cell(c, s2)?.clone());
    let base = ProductCell::new(vec![a.clone(), b.clone(), nu.clone()])?;
    let perms = permutations(3);
    let mut elem: BTreeMap<ProductCell, i32> = BTreeMap::new();
    for g in &perms {
        let (eps, img) = base.act(g);
        elem.insert(img, SignCharacter::Sign.value(g) * eps);
    }
    let mut out = Chain::zero(6);
    for rho in c.simplices(2) {
        if !rho.contains(nu) || !rho.is_disjoint(&a) || !rho.is_disjoint(&b) {
            continue;
        }
        let top = ProductCell::new(vec![a.clone(), b.clone(), rho.clone()])?;
        for g in &perms {
            let (_, cell) = top.act(g);
            let mut v = 0;
            for (s, f) in cell.boundary() {
                v += s * elem.get(&f).copied().unwrap_or(0);
            }
            out.add_term(cell, BigInt::from(v));
        }
    }
    Ok(out)
}

/// Splits a disk: the listed intersections move to a new disk paired by a new canceling point pair.
pub fn split_disk(wd: &WhitneyDatum, pair: usize, disk: usize, part: &BTreeMap<usize, i64>) -> Result<WhitneyDatum> {
    let mut out = wd.clone();
    let p = out.pairs.get_mut(pair).ok_or_else(|| Error::validation(format!("no pair {pair}")))?;
    let d = p.disks.get(disk).ok_or_else(|| Error::validation(format!("no disk {disk}")))?.clone();
    let moved: i64 = part.values().map(|v| v.abs()).sum();
    let total: i64 = d.meets.values().map(|v| v.abs()).sum();
    if moved == 0 || moved == total {
        return Err(Error::validation("the partition must have two nonempty parts"));
    }
    let mut rest = d.meets.clone();
    for (&k, &v) in part {
        let have = d.meets.get(&k).copied().unwrap_or(0);
        if v == 0 || v.signum() != have.signum() || v.abs() > have.abs() {
            return Err(Error::validation(format!("part takes {v} points at cell {k}, the disk has {have}")));
        }
        let left = have - v;
        if left == 0 {
            rest.remove(&k);
        } else {
            rest.insert(k, left);
        }
    }
    p.disks[disk].meets = rest;
    let id = p.disks.len();
    p.disks.push(DiskData { meets: part.clone() });
    p.points.push(PointData { sign: 1, disk: id });
    p.points.push(PointData { sign: -1, disk: id });
    Ok(out)
}

/// Splits every disk until each meets a single point.
pub fn split_fully(wd: &WhitneyDatum) -> Result<WhitneyDatum> {
    let mut out = wd.clone();
    for pi in 0..out.pairs.len() {
        let mut di = 0;
        while di < out.pairs[pi].disks.len() {
            let meets = out.pairs[pi].disks[di].meets.clone();
            let total: i64 = meets.values().map(|v| v.abs()).sum();
            if total > 1 {
                let (&k, &v) = meets.iter().next().unwrap();
                let part = [(k, v.signum())].into_iter().collect();
                out = split_disk(&out, pi, di, &part)?;
            } else {
                di += 1;
            }
        }
    }
    Ok(out)
}

/// The datum of the FKT complex: one disk W_στ meeting ρ once, for the least 2-cells σ ⊂ S, τ ⊂ S′, ρ ⊂ T.
pub fn fkt_datum(c: &SimplicialComplex, tags: [&str; 3]) -> Result<WhitneyDatum> {
    let idx = |t: &str| -> Result<usize> {
        let s = c.tag(t)?.iter().filter(|s| s.dim() == 2).min().ok_or_else(|| Error::validation(format!("tag {t} has no 2-cells")))?;
        Ok(c.simplices(2).iter().position(|x| x == s).unwrap())
    };
    let (s, sp, t) = (idx(tags[0])?, idx(tags[1])?, idx(tags[2])?);
    Ok(WhitneyDatum {
        pairs: vec![PairData {
            cells: [s, sp],
            points: vec![PointData { sign: 1, disk: 0 }, PointData { sign: -1, disk: 0 }],
            disks: vec![DiskData { meets: [(t, 1)].into_iter().collect() }],
        }],
    })
}

/// Cellular cross product of tag cycles, a 6-cycle of conf_s(K,3) when the tags are disjoint.
pub fn product_cycle(c: &SimplicialComplex, tags: [&str; 3]) -> Result<Chain<ProductCell>> {
    for (x, y) in [(0, 1), (1, 2), (0, 2)] {
        if !c.tags_disjoint(tags[x], tags[y])? {
            return Err(Error::validation(format!("tags {} and {} share a vertex", tags[x], tags[y])));
        }
    }
    let z: Vec<Chain<Simplex>> = tags.iter().map(|t| c.tag_cycle(t)).collect::<Result<_>>()?;
    let mut out = Chain::zero(z.iter().map(|x| x.degree).sum());
    for (a, va) in z[0].iter() {
        for (b, vb) in z[1].iter() {
            for (r, vr) in z[2].iter() {
                out.add_term(ProductCell::new(vec![a.clone(), b.clone(), r.clone()])?, va * vb * vr);
            }
        }
    }
    Ok(out)
}

/// Non-vanishing certificate for the class of w₃ by pairing with a product cycle.
pub fn w3_pairing_certificate(w3: &W3Cochain, z: &Chain<ProductCell>, subject: &str) -> Result<Option<Certificate>> {
    let zbar = reduce_chain_local(z, SignCharacter::Sign);
    let rows: Vec<ProductCell> = zbar.keys().cloned().collect();
    let (m, _) = local_coboundary(&rows, SignCharacter::Sign);
    let orbit = w3.orbit_support();
    let cocycle: Vec<BigInt> = rows.iter().map(|r| orbit.get(r).cloned().unwrap_or_else(BigInt::zero)).collect();
    let cycle: Vec<BigInt> = zbar.values().cloned().collect();
    let value = crate::zlinalg::dot(&cocycle, &cycle);
    if value.is_zero() {
        return Ok(None);
    }
    let cert = Certificate {
        kind: CertificateKind::NonzeroByPairing,
        subject: subject.to_string(),
        payload: Payload::Pairing { coboundary: m, next_coboundary: None, cocycle, cycle, value },
    };
    cert.verify()?;
    Ok(Some(cert))
}

/// Unordered n-tuples of pairwise disjoint 2-cells, as sorted index lists.
pub fn nonadjacent_tuples(c: &SimplicialComplex, n: usize, guard: usize) -> Result<Vec<Vec<usize>>> {
    let cells = c.simplices(2);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(cells: &[Simplex], n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, guard: usize) -> Result<()> {
        if cur.len() == n {
            if out.len() >= guard {
                return Err(Error::SizeGuard { what: format!("{n}-tuples of disjoint 2-cells"), count: out.len() + 1, guard });
            }
            out.push(cur.clone());
            return Ok(());
        }
        for i in start..cells.len() {
            if cur.iter().all(|&j| cells[j].is_disjoint(&cells[i])) {
                cur.push(i);
                rec(cells, n, i + 1, cur, out, guard)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(cells, n, 0, &mut cur, &mut out, guard)?;
    Ok(out)
}

/// Unpaired points of a tower on one ordered n-tuple of 2-cells; tree leaves are positions 1..=n.
#[derive(Clone, Debug)]
pub struct TowerEntry {
    pub cells: Vec<usize>,
    pub points: Vec<(i32, Tree)>,
}

#[derive(Clone, Debug)]
pub struct TowerDatum {
    pub arity: usize,
    pub towers: Vec<TowerEntry>,
}

#[derive(Serialize, Deserialize)]
struct TowerPointJson {
    sign: i32,
    tree: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct TowerEntryJson {
    cells: Vec<usize>,
    #[serde(default)]
    points: Vec<TowerPointJson>,
}

#[derive(Serialize, Deserialize)]
struct TowerDatumJson {
    arity: usize,
    towers: Vec<TowerEntryJson>,
}

impl TowerDatum {
    /// `{"arity": n, "towers": [{"cells": [..], "points": [{"sign": 1, "tree": [[1,2],3,4]}]}]}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: TowerDatumJson = serde_json::from_str(s).map_err(|e| Error::validation(format!("tower JSON: {e}")))?;
        let mut towers = Vec::new();
        for t in j.towers {
            let points = t.points.iter().map(|p| Ok((p.sign, Tree::from_json(&p.tree)?))).collect::<Result<_>>()?;
            towers.push(TowerEntry { cells: t.cells, points });
        }
        Ok(TowerDatum { arity: j.arity, towers })
    }

    pub fn order(&self) -> usize {
        self.arity.saturating_sub(2)
    }
}

/// Order-1 towers equivalent to a Whitney datum: W_ab ∩ σ_c gives the tree with cyclic order (a, b, c).
pub fn towers_from_whitney(c: &SimplicialComplex, wd: &WhitneyDatum, guard: usize) -> Result<TowerDatum> {
    wd.validate(c)?;
    let mut towers = Vec::new();
    for t in nonadjacent_tuples(c, 3, guard)? {
        let mut points = Vec::new();
        for p in &wd.pairs {
            for d in &p.disks {
                for (&k, &m) in &d.meets {
                    let pos = |x: usize| t.iter().position(|&y| y == x).map(|i| i as u64 + 1);
                    let (Some(a), Some(b), Some(cc)) = (pos(p.cells[0]), pos(p.cells[1]), pos(k)) else { continue };
                    let tree = Tree::from_json(&serde_json::json!([a, b, cc]))?;
                    for _ in 0..m.abs() {
                        points.push((m.signum() as i32, tree.clone()));
                    }
                }
            }
        }
        towers.push(TowerEntry { cells: t, points });
    }
    Ok(TowerDatum { arity: 3, towers })
}

/// 𝒯_{n−2}-valued 2n-cochain on conf_s(K,n), extended over orbits by the relabeling action.
#[derive(Clone, Debug)]
pub struct WnCochain {
    pub arity: usize,
    pub group: TreeGroup,
    pub values: BTreeMap<ProductCell, TreeElement>,
}

pub fn tau_n(group: &TreeGroup, t: &TowerEntry) -> Result<TreeElement> {
    tau(group, &t.points)
}

fn apply(m: &[Vec<BigInt>], v: &[BigInt], s: i32) -> Vec<BigInt> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>() * s).collect()
}

pub fn wn_cochain(c: &SimplicialComplex, td: &TowerDatum, guard: usize) -> Result<WnCochain> {
    let n = td.arity;
    if n < 3 {
        return Err(Error::validation("tower cochains need arity at least 3"));
    }
    let group = TreeGroup::new(n - 2, guard)?;
    let perms = permutations(n);
    let actions: Vec<Vec<Vec<BigInt>>> = perms.iter().map(|g| group.action_matrix(g)).collect::<Result<_>>()?;
    let mut values: BTreeMap<ProductCell, TreeElement> = BTreeMap::new();
    let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in &td.towers {
        if t.cells.len() != n {
            return Err(Error::validation(format!("tower on {} cells, arity is {n}", t.cells.len())));
        }
        for (a, &i) in t.cells.iter().enumerate() {
            for &j in &t.cells[a + 1..] {
                if !disjoint_cells(c, i, j)? {
                    return Err(Error::validation(format!("cells {i} and {j} of a tower are adjacent")));
                }
            }
        }
        let mut key = t.cells.clone();
        key.sort_unstable();
        covered.insert(key);
        let cell = ProductCell::new(t.cells.iter().map(|&i| two_cell(c, i).cloned()).collect::<Result<_>>()?)?;
        let v = tau_n(&group, t)?;
        for (g, a) in perms.iter().zip(&actions) {
            let (eps, img) = cell.act(g);
            let w = TreeElement { order: n - 2, coords: apply(a, &v.coords, eps) };
            match values.get(&img) {
                Some(old) if *old != w => {
                    return Err(Error::verification(format!("towers on the orbit of {cell:?} disagree")));
                }
                _ => {
                    values.insert(img, w);
                }
            }
        }
    }
    for t in nonadjacent_tuples(c, n, guard)? {
        if !covered.contains(&t) {
            return Err(Error::validation(format!("no tower supplied for the cells {t:?}")));
        }
    }
    values.retain(|_, v| !v.is_zero());
    Ok(WnCochain { arity: n, group, values })
}

/// Relabel-then-reduce against reduce-then-act, on every supplied tower and permutation.
pub fn check_action_two_ways(group: &TreeGroup, td: &TowerDatum) -> Result<bool> {
    let n = td.arity;
    for g in permutations(n) {
        let a = group.action_matrix(&g)?;
        for t in &td.towers {
            let direct = tau(group, &t.points)?;
            let moved: Vec<(i32, Tree)> =
                t.points.iter().map(|(s, tr)| (*s, tr.relabel(&|l| g[l as usize - 1] as u32 + 1))).collect();
            let relabeled = tau(group, &moved)?;
            if relabeled.coords != apply(&a, &direct.coords, 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
