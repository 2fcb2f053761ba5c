//! The third obstruction: Gauss cocycles, the Arnold-class pullback, the
//! linking-number determinant and the Massey-type 8-cochains.

use crate::builtins::LinkingForm;
use crate::chain::{bigjson::Big, Chain};
use crate::deleted_product::{DeletedProduct, ProductCell};
use crate::error::{Error, Result};
use crate::plgeom::{det_sign, gauss_linking_2_1, origin_in_hull, solve_rational, sub, PLMap, RatSolve, Q};
use crate::simplicial::{Simplex, SimplicialComplex, Vertex};
use crate::staircase::{
    self, coboundary, cross_chain, cup, faces, lincomb, memo, pair, pullback,
    simplices_with_support, CochainRef, Staircase, TCochain, TableCochain,
};
use crate::zlinalg::{solve_integer, Certificate, CertificateKind, Payload, SimplexValue, SolveOutcome, SparseMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;

/// A base map plus replacement maps for chosen pairs of vertex sets.
///
/// A cell σ×τ is evaluated with the first override whose two vertex sets
/// contain σ and τ (in either order), otherwise with the base map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub base: PLMap,
    pub overrides: Vec<(BTreeSet<Vertex>, BTreeSet<Vertex>, PLMap)>,
}

#[derive(Serialize, Deserialize)]
struct OverrideJson {
    first: Vec<Vertex>,
    second: Vec<Vertex>,
    map: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct PlacementJson {
    base: serde_json::Value,
    #[serde(default)]
    overrides: Vec<OverrideJson>,
}

impl Placement {
    pub fn single(f: PLMap) -> Self {
        Placement { base: f, overrides: Vec::new() }
    }

    /// Accepts either a plain map or `{"base": map, "overrides": [...]}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::validation(format!("placement JSON: {e}")))?;
        if v.get("base").is_none() {
            return Ok(Placement::single(PLMap::from_json_str(s)?));
        }
        let j: PlacementJson = serde_json::from_value(v).map_err(|e| Error::validation(format!("placement JSON: {e}")))?;
        let base = PLMap::from_json_str(&j.base.to_string())?;
        let mut overrides = Vec::new();
        for o in j.overrides {
            let m = PLMap::from_json_str(&o.map.to_string())?;
            if m.dim() != base.dim() {
                return Err(Error::validation("override map dimension differs from the base map"));
            }
            overrides.push((o.first.into_iter().collect(), o.second.into_iter().collect(), m));
        }
        Ok(Placement { base, overrides })
    }

    pub fn to_json_string(&self) -> String {
        let parse = |m: &PLMap| serde_json::from_str::<serde_json::Value>(&m.to_json_string()).unwrap();
        let j = PlacementJson {
            base: parse(&self.base),
            overrides: self
                .overrides
                .iter()
                .map(|(a, b, m)| OverrideJson {
                    first: a.iter().copied().collect(),
                    second: b.iter().copied().collect(),
                    map: parse(m),
                })
                .collect(),
        };
        serde_json::to_string(&j).unwrap()
    }

    pub fn map_for(&self, a: &[Vertex], b: &[Vertex]) -> &PLMap {
        let inside = |set: &BTreeSet<Vertex>, s: &[Vertex]| s.iter().all(|v| set.contains(v));
        for (x, y, m) in &self.overrides {
            if (inside(x, a) && inside(y, b)) || (inside(y, a) && inside(x, b)) {
                return m;
            }
        }
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn maps(&self) -> impl Iterator<Item = &PLMap> {
        std::iter::once(&self.base).chain(self.overrides.iter().map(|o| &o.2))
    }
}

/// Difference vectors f(b) − f(a) at the vertices of a staircase simplex of arity 2.
fn difference_points(p: &Placement, s: &[u32]) -> Result<Vec<Vec<Q>>> {
    let cell = staircase::carrier(s, 2);
    let f = p.map_for(cell.factors()[0].vertices(), cell.factors()[1].vertices());
    (0..s.len() / 2).map(|t| Ok(sub(f.point(s[2 * t + 1])?, f.point(s[2 * t])?))).collect()
}

/// Signed count of ray crossings {t·dir, t > 0} through the image of one 3-simplex.
pub fn gauss_value(points: &[Vec<Q>], dir: &[Q]) -> Result<i32> {
    // Σ λ_t p_t − t·dir = 0, Σ λ_t = 1.
    let mut a: Vec<Vec<Q>> = (0..4)
        .map(|i| {
            let mut row: Vec<Q> = points.iter().map(|p| p[i].clone()).collect();
            row.push(-dir[i].clone());
            row
        })
        .collect();
    let mut last = vec![Q::one(); 4];
    last.push(Q::zero());
    a.push(last);
    let mut b = vec![Q::zero(); 4];
    b.push(Q::one());
    match solve_rational(&a, &b) {
        RatSolve::Inconsistent => Ok(0),
        RatSolve::Family => Err(Error::degenerate("direction lies in a degenerate simplex image; choose another")),
        RatSolve::Unique(x) => {
            let (lam, t) = (&x[..4], &x[4]);
            if lam.iter().any(|l| l.is_negative()) || t.is_negative() {
                return Ok(0);
            }
            if t.is_zero() {
                return Err(Error::degenerate("image of the deleted product contains the origin"));
            }
            if lam.iter().any(|l| l.is_zero()) {
                return Err(Error::degenerate("direction crosses a simplex boundary; choose another"));
            }
            let frame: Vec<Vec<Q>> =
                points[1..].iter().map(|p| sub(p, &points[0])).chain(std::iter::once(dir.to_vec())).collect();
            Ok(det_sign(&frame))
        }
    }
}

/// Checks that non-adjacent simplices have disjoint images, block by block.
pub fn check_almost_embedding(dp: &DeletedProduct, p: &Placement) -> Result<()> {
    let mut faces_of_others: HashSet<ProductCell> = HashSet::new();
    for k in 1..=dp.dim().unwrap_or(0) {
        for c in dp.cells(k) {
            for (_, f) in c.boundary() {
                faces_of_others.insert(f);
            }
        }
    }
    for k in 0..=dp.dim().unwrap_or(0) {
        for c in dp.cells(k) {
            if faces_of_others.contains(c) {
                continue;
            }
            for s in simplices_with_support(c, c.dim()) {
                let pts = difference_points(p, &s)?;
                if origin_in_hull(&pts) {
                    return Err(Error::validation(format!("images of {:?} and {:?} intersect", c.factors()[0], c.factors()[1])));
                }
            }
        }
    }
    Ok(())
}

/// Degree-3 Gauss cocycle on conf_s(K,2) for a placement and a generic direction.
pub fn gauss_cocycle(c: &SimplicialComplex, p: &Placement, dir: &[Q], guard: usize) -> Result<TableCochain> {
    if p.dim() != 4 || dir.len() != 4 {
        return Err(Error::validation("the Gauss cocycle is defined for maps into R⁴"));
    }
    for m in p.maps() {
        m.covers(c)?;
    }
    let dp = DeletedProduct::build(c, 2, guard)?;
    check_almost_embedding(&dp, p)?;
    let tri = Staircase::new(&dp, guard)?;
    let mut u = TableCochain::new(2, 3);
    for s in tri.simplices(3) {
        let v = gauss_value(&difference_points(p, s)?, dir)
            .map_err(|e| match e {
                Error::Degenerate(m) => Error::degenerate(format!("{m} at staircase simplex {s:?}")),
                other => other,
            })?;
        u.set(s.clone(), BigInt::from(v));
    }
    for s in tri.simplices(4) {
        let mut acc = BigInt::zero();
        for (sign, f) in faces(s, 2) {
            acc += u.value(&f) * sign;
        }
        if !acc.is_zero() {
            return Err(Error::verification(format!("Gauss cochain is not a cocycle at {s:?}")));
        }
    }
    Ok(u)
}

/// P₁₂U ∪ P₂₃U − P₁₂U ∪ P₃₁U + P₂₃U ∪ P₃₁U on conf_s(K,3).
pub fn arnold_pullback(u: CochainRef) -> Result<CochainRef> {
    if u.arity() != 2 {
        return Err(Error::validation("Arnold pullback needs a cochain on the 2-fold deleted product"));
    }
    let p12 = pullback(u.clone(), &[0, 1], 3)?;
    let p23 = pullback(u.clone(), &[1, 2], 3)?;
    let p31 = pullback(u, &[2, 0], 3)?;
    lincomb(vec![
        (BigInt::one(), cup(p12.clone(), p23.clone())?),
        (-BigInt::one(), cup(p12, p31.clone())?),
        (BigInt::one(), cup(p23, p31)?),
    ])
}

/// Explicit primitive of the Arnold pullback when U = δY.
pub fn arnold_primitive(u: CochainRef, y: CochainRef) -> Result<CochainRef> {
    let u23 = pullback(u.clone(), &[1, 2], 3)?;
    let u31 = pullback(u, &[2, 0], 3)?;
    let y12 = pullback(y.clone(), &[0, 1], 3)?;
    let y23 = pullback(y, &[1, 2], 3)?;
    lincomb(vec![
        (BigInt::one(), cup(y12.clone(), u23)?),
        (-BigInt::one(), cup(y12, u31.clone())?),
        (BigInt::one(), cup(y23, u31)?),
    ])
}

/// x₁y₂ − x₂y₁.
pub fn kunneth_pairing(x1: &BigInt, x2: &BigInt, y1: &BigInt, y2: &BigInt) -> BigInt {
    x1 * y2 - x2 * y1
}

/// Simplicial cochain as a cochain on the arity-1 staircase, i.e. on K itself.
pub fn simplicial_table(c: &Chain<Simplex>) -> TableCochain {
    let mut t = TableCochain::new(1, c.degree);
    for (s, v) in c.iter() {
        t.set(s.vertices().to_vec(), v.clone());
    }
    t
}

/// Cross product a × b on conf_s(K,2).
pub fn cross_cochain(a: &Chain<Simplex>, b: &Chain<Simplex>) -> Result<CochainRef> {
    let pa = pullback(Rc::new(simplicial_table(a)), &[0], 2)?;
    let pb = pullback(Rc::new(simplicial_table(b)), &[1], 2)?;
    cup(pa, pb)
}

/// A top cochain dual to the fundamental cycle of a tag: ⟨v, [tag]⟩ = 1.
pub fn dual_top_cochain(c: &SimplicialComplex, tag: &str) -> Result<Chain<Simplex>> {
    let z = c.tag_cycle(tag)?;
    let (s, v) = z.iter().next().ok_or_else(|| Error::validation("empty tag"))?;
    Ok(Chain::from_terms(z.degree, [(s.clone(), v.clone())]))
}

/// U = Σᵢ xᵢ·(v_B × τ̂ᵢ) + Σᵢ yᵢ·(τ̂ᵢ × v_A) on conf_s(K,2), a model of the Gauss cocycle
/// on the blocks B×T and T×A for prescribed linking numbers (zero on A×B).
pub fn cross_product_cocycle(
    c: &SimplicialComplex,
    ld: &LinkingData,
    tags: [&str; 5],
) -> Result<CochainRef> {
    let [a, b, t, g1, g2] = tags;
    let taus = dual_loop_basis(c, t, &[g1, g2])?;
    let va = dual_top_cochain(c, a)?;
    let vb = dual_top_cochain(c, b)?;
    let mut terms = Vec::new();
    for i in 0..2 {
        terms.push((ld.x[i].clone(), cross_cochain(&vb, &taus[i])?));
        terms.push((ld.y[i].clone(), cross_cochain(&taus[i], &va)?));
    }
    Ok(memo(lincomb(terms)?))
}

/// Integer 1-cocycles τ̂ᵢ on the tagged surface with ⟨τ̂ᵢ, γⱼ⟩ = δᵢⱼ.
pub fn dual_loop_basis(c: &SimplicialComplex, surface: &str, loops: &[&str]) -> Result<Vec<Chain<Simplex>>> {
    let t = c.tag_subcomplex(surface)?;
    let edges = t.simplices(1).to_vec();
    let tris = t.simplices(2).to_vec();
    let cycles: Vec<Chain<Simplex>> = loops.iter().map(|l| c.tag_cycle(l)).collect::<Result<_>>()?;
    for (l, g) in loops.iter().zip(&cycles) {
        if g.keys().any(|e| !t.contains(e)) {
            return Err(Error::validation(format!("loop {l} does not lie on {surface}")));
        }
    }
    let mut a = SparseMatrix::zeros(tris.len() + cycles.len(), edges.len());
    let idx: HashMap<&Simplex, usize> = edges.iter().enumerate().map(|(i, e)| (e, i)).collect();
    for (r, s) in tris.iter().enumerate() {
        for (sign, f) in s.facets() {
            a.add_entry(r, idx[&f], BigInt::from(sign));
        }
    }
    for (k, g) in cycles.iter().enumerate() {
        for (e, v) in g.iter() {
            a.add_entry(tris.len() + k, idx[e], v.clone());
        }
    }
    let mut out = Vec::new();
    for i in 0..cycles.len() {
        let mut b = vec![BigInt::zero(); tris.len() + cycles.len()];
        b[tris.len() + i] = BigInt::one();
        match solve_integer(&a, &b)? {
            SolveOutcome::Solution(x) => out.push(Chain::from_terms(1, edges.iter().cloned().zip(x))),
            SolveOutcome::Infeasible(_) => {
                return Err(Error::validation(format!("loops {loops:?} are not an integral basis on {surface}")))
            }
        }
    }
    Ok(out)
}

/// ⟨τ̂₁ ∪ τ̂₂, [T]⟩ for the coherently oriented surface.
pub fn surface_orientation_sign(c: &SimplicialComplex, surface: &str, taus: &[Chain<Simplex>]) -> Result<BigInt> {
    let t = c.tag_cycle(surface)?;
    let prod = cup(Rc::new(simplicial_table(&taus[0])), Rc::new(simplicial_table(&taus[1])))?;
    let z: Vec<(Vec<u32>, BigInt)> = t.iter().map(|(s, v)| (s.vertices().to_vec(), v.clone())).collect();
    Ok(pair(prod.as_ref(), &z))
}

/// The product 6-cycle ε_T·[A×B×T] on conf_s(K,3), normalized so that the
/// Arnold pairing equals x₁y₂ − x₂y₁.
pub fn product_six_cycle(
    c: &SimplicialComplex,
    a: &str,
    b: &str,
    t: &str,
    loops: [&str; 2],
) -> Result<Vec<(Vec<u32>, BigInt)>> {
    for (x, y) in [(a, b), (b, t), (a, t)] {
        if !c.tags_disjoint(x, y)? {
            return Err(Error::validation(format!("tags {x} and {y} share a vertex")));
        }
    }
    let taus = dual_loop_basis(c, t, &loops)?;
    let eps = surface_orientation_sign(c, t, &taus)?;
    if eps.abs() != BigInt::one() {
        return Err(Error::validation("loops do not form a unimodular basis of the surface"));
    }
    let za = c.tag_cycle(a)?;
    let zb = c.tag_cycle(b)?;
    let zt = c.tag_cycle(t)?;
    let mut z = cross_chain(&[&za, &zb, &zt])?;
    for (_, v) in z.iter_mut() {
        *v *= &eps;
    }
    Ok(z)
}

/// Linking numbers x = (λ(B,γ₁), λ(B,γ₂)), y = (λ(A,γ₁), λ(A,γ₂)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingData {
    #[serde(with = "crate::chain::bigjson::vec")]
    pub x: Vec<BigInt>,
    #[serde(with = "crate::chain::bigjson::vec")]
    pub y: Vec<BigInt>,
}

impl LinkingData {
    pub fn from_form(lf: &LinkingForm, tags: [&str; 4]) -> Result<Self> {
        let [a, b, g1, g2] = tags;
        Ok(LinkingData {
            x: vec![BigInt::from(lf.get(b, g1)?), BigInt::from(lf.get(b, g2)?)],
            y: vec![BigInt::from(lf.get(a, g1)?), BigInt::from(lf.get(a, g2)?)],
        })
    }

    /// Computes the linking numbers geometrically with the block maps of a placement.
    pub fn from_placement(c: &SimplicialComplex, p: &Placement, tags: [&str; 4], dir: &[Q]) -> Result<Self> {
        let [a, b, g1, g2] = tags;
        let lk = |s: &str, g: &str| -> Result<BigInt> {
            let sv: Vec<Vertex> = c.tag_vertices(s)?.into_iter().collect();
            let gv: Vec<Vertex> = c.tag_vertices(g)?.into_iter().collect();
            let f = p.map_for(&sv, &gv);
            gauss_linking_2_1(f, &c.tag_cycle(s)?, &c.tag_cycle(g)?, dir)
        };
        Ok(LinkingData { x: vec![lk(b, g1)?, lk(b, g2)?], y: vec![lk(a, g1)?, lk(a, g2)?] })
    }

    pub fn value(&self) -> BigInt {
        kunneth_pairing(&self.x[0], &self.x[1], &self.y[0], &self.y[1])
    }
}

/// Outcome of an O₃ computation: the pairing value and a certificate when one is available.
#[derive(Clone, Debug)]
pub struct O3Outcome {
    pub value: BigInt,
    pub certificate: Option<Certificate>,
}

/// Formula route: x₁y₂ − x₂y₁ from a linking form.
pub fn o3_kunneth(c: &SimplicialComplex, lf: &LinkingForm, tags: [&str; 4]) -> Result<O3Outcome> {
    let [a, b, g1, g2] = tags;
    for t in tags {
        c.tag(t)?;
    }
    for (x, y) in [(a, b), (a, g1), (a, g2), (b, g1), (b, g2)] {
        if !c.tags_disjoint(x, y)? {
            return Err(Error::validation(format!("tags {x} and {y} share a vertex; the product is not in conf_s")));
        }
    }
    let ld = LinkingData::from_form(lf, tags)?;
    let value = ld.value();
    let certificate = if value.is_zero() {
        None
    } else {
        let cert = Certificate {
            kind: CertificateKind::NonzeroByPairing,
            subject: format!("third obstruction of {} via linking numbers", c.name()),
            payload: Payload::Kunneth {
                x1: ld.x[0].clone(),
                x2: ld.x[1].clone(),
                y1: ld.y[0].clone(),
                y2: ld.y[1].clone(),
                value: value.clone(),
            },
        };
        cert.verify()?;
        Some(cert)
    };
    Ok(O3Outcome { value, certificate })
}

/// Cells σ×τ×ρ with σ, τ, ρ faces of the tagged generators.
pub fn product_cells(c: &SimplicialComplex, tags: &[&str]) -> Result<Vec<ProductCell>> {
    let mut parts: Vec<Vec<Simplex>> = Vec::new();
    for t in tags {
        let sub = c.tag_subcomplex(t)?;
        parts.push(sub.iter().cloned().collect());
    }
    let mut out = vec![Vec::new()];
    for p in &parts {
        let mut next = Vec::new();
        for prefix in &out {
            for s in p {
                let mut v: Vec<Simplex> = prefix.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(ProductCell::new).collect()
}

/// Solves U = δY on the staircase of the given cells of conf_s(K,2).
pub fn solve_primitive_on_cells(u: &dyn TCochain, cells: &[ProductCell], guard: usize) -> Result<Option<TableCochain>> {
    let refs: Vec<&ProductCell> = cells.iter().collect();
    let tri = Staircase::from_cells(u.arity(), &refs, guard)?;
    let k = u.degree();
    if k == 0 {
        return Err(Error::validation("degree-0 cochains have no primitive"));
    }
    let d = tri.coboundary_matrix(k - 1)?;
    let b = tri.tabulate(u);
    match solve_integer(&d, &b)? {
        SolveOutcome::Solution(x) => Ok(Some(tri.table(k - 1, &x))),
        SolveOutcome::Infeasible(_) => Ok(None),
    }
}

/// Face closure of a set of product cells.
pub fn close_cells(cells: &[ProductCell]) -> Vec<ProductCell> {
    let mut seen: BTreeSet<ProductCell> = cells.iter().cloned().collect();
    let mut stack: Vec<ProductCell> = cells.to_vec();
    while let Some(c) = stack.pop() {
        for (_, f) in c.boundary() {
            if seen.insert(f.clone()) {
                stack.push(f);
            }
        }
    }
    seen.into_iter().collect()
}

fn entries(values: impl Iterator<Item = (Vec<u32>, BigInt)>) -> Vec<SimplexValue> {
    let mut v: Vec<SimplexValue> =
        values.filter(|(_, x)| !x.is_zero()).map(|(s, x)| SimplexValue { simplex: s, value: Big(x) }).collect();
    v.sort_by(|a, b| a.simplex.cmp(&b.simplex));
    v
}

/// Cochain route on the product A×B×T: pairs the Arnold pullback with the product cycle;
/// when the pairing vanishes and U is exact on the three blocks, certifies the zero class.
pub fn o3_cochain(
    c: &SimplicialComplex,
    u: CochainRef,
    tags: [&str; 5],
    guard: usize,
) -> Result<O3Outcome> {
    let [a, b, t, g1, g2] = tags;
    let z = product_six_cycle(c, a, b, t, [g1, g2])?;
    let u = memo(u);
    let arnold = arnold_pullback(u.clone())?;
    let value = pair(arnold.as_ref(), &z);
    let subject = format!("third obstruction of {} on {a}x{b}x{t}", c.name());
    if !value.is_zero() {
        let cochain = entries(z.iter().map(|(s, _)| (s.clone(), arnold.value(s))));
        let cycle = entries(z.iter().cloned());
        let cert = Certificate {
            kind: CertificateKind::NonzeroByPairing,
            subject,
            payload: Payload::SimplicialPairing { arity: 3, cochain, cycle, value: value.clone() },
        };
        cert.verify()?;
        return Ok(O3Outcome { value, certificate: Some(cert) });
    }
    // Exactness of U on the blocks A×B, B×T, T×A gives an explicit primitive.
    let mut y_table = TableCochain::new(2, 2);
    let mut u_table = TableCochain::new(2, 3);
    for (x, w) in [(a, b), (b, t), (t, a)] {
        let block = close_cells(&product_cells(c, &[x, w])?);
        let Some(y) = solve_primitive_on_cells(u.as_ref(), &block, guard)? else {
            return Ok(O3Outcome { value, certificate: None });
        };
        for (s, v) in y.support() {
            y_table.set(s.clone(), v.clone());
        }
        for cell in &block {
            for s in simplices_with_support(cell, 3) {
                u_table.set(s.clone(), u.value(&s));
            }
        }
    }
    let top = product_cells(c, &[a, b, t])?.into_iter().filter(|cell| cell.dim() == 6).collect::<Vec<_>>();
    let cert = arnold_zero_certificate(&subject, &u_table, &y_table, top)?;
    Ok(O3Outcome { value, certificate: Some(cert) })
}

/// Zero-class certificate: δP = Arnold(U) with P = P₁₂Y∪P₂₃U − P₁₂Y∪P₃₁U + P₂₃Y∪P₃₁U.
pub fn arnold_zero_certificate(
    subject: &str,
    u: &TableCochain,
    y: &TableCochain,
    cells: Vec<ProductCell>,
) -> Result<Certificate> {
    let u_ref: CochainRef = Rc::new(u.clone());
    let y_ref: CochainRef = Rc::new(y.clone());
    let arn = memo(arnold_pullback(u_ref.clone())?);
    let prim = memo(arnold_primitive(u_ref, y_ref)?);
    let mut c_vals = Vec::new();
    let mut p_vals: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for cell in &cells {
        for s in simplices_with_support(cell, 6) {
            c_vals.push((s.clone(), arn.value(&s)));
            for (_, f) in faces(&s, 3) {
                if !p_vals.contains_key(&f) {
                    let v = prim.value(&f);
                    p_vals.insert(f, v);
                }
            }
        }
    }
    let cert = Certificate {
        kind: CertificateKind::ZeroWithPrimitive,
        subject: subject.to_string(),
        payload: Payload::SimplicialPrimitive {
            arity: 3,
            degree: 6,
            cells,
            cocycle: entries(c_vals.into_iter()),
            primitive: entries(p_vals.into_iter()),
        },
    };
    cert.verify()?;
    Ok(cert)
}

/// Formal tensor in the three slots (12), (23), (31); a key lists the slots holding u.
pub type FormalTensor = BTreeMap<Vec<usize>, i64>;

const SLOT_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// u⊗u⊗1 + (−1)^{d−1} u⊗1⊗u + 1⊗u⊗u.
pub fn formal_arnold(d: usize) -> FormalTensor {
    let s = if (d - 1) % 2 == 0 { 1 } else { -1 };
    [(vec![0, 1], 1), (vec![0, 2], s), (vec![1, 2], 1)].into_iter().collect()
}

/// Action of g ∈ Σ₃ on the point labels: u_{ij} ↦ u_{g(i)g(j)} = (−1)^d u_{g(j)g(i)},
/// with Koszul signs for reordering the degree-(d−1) factors.
pub fn act_formal(g: &[usize], t: &FormalTensor, d: usize) -> FormalTensor {
    let mut out: FormalTensor = BTreeMap::new();
    for (slots, coef) in t {
        let mut sign = 1i64;
        let mut images = Vec::new();
        for &s in slots {
            let (i, j) = SLOT_PAIRS[s];
            let (gi, gj) = (g[i], g[j]);
            let k = SLOT_PAIRS.iter().position(|&p| p == (gi, gj) || p == (gj, gi)).unwrap();
            if SLOT_PAIRS[k] != (gi, gj) && d % 2 == 1 {
                sign = -sign;
            }
            images.push(k);
        }
        let mut inv = 0;
        for x in 0..images.len() {
            for y in x + 1..images.len() {
                if images[x] > images[y] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 1 && (d - 1) % 2 == 1 {
            sign = -sign;
        }
        images.sort_unstable();
        *out.entry(images).or_insert(0) += sign * coef;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Inputs for the Massey-type cochains.
pub enum MasseyInput {
    /// A 3-cocycle U on conf_s(K,2); the primitives X are solved on conf_s(K,3).
    Cocycle(CochainRef),
    /// U = δW for a 2-cochain W; the primitives are explicit.
    Exact(CochainRef),
}

/// The three 8-cochains Y on conf_s(K,4), keyed "(12)(34)", "(13)(24)", "(14)(23)".
pub struct MasseyY {
    pub v: HashMap<(usize, usize), CochainRef>,
    pub x: HashMap<[usize; 3], CochainRef>,
    pub y: Vec<(String, CochainRef)>,
}

const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [1, 2, 3], [2, 3, 0], [3, 0, 1]];
pub const PARTITIONS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// Y_P = Σ X_{ijk}(V_{al} − V_{bl}) over the cyclic triples, with l the missing index and
/// (a, b) the pair of P inside {i,j,k}, b following a in the cyclic order of the triple.
pub fn massey_y4(c: &SimplicialComplex, input: MasseyInput, guard: usize) -> Result<MasseyY> {
    let (u, w) = match &input {
        MasseyInput::Cocycle(u) => (memo(u.clone()), None),
        MasseyInput::Exact(w) => (memo(coboundary(w.clone())), Some(w.clone())),
    };
    if u.arity() != 2 || u.degree() != 3 {
        return Err(Error::validation("Massey cochains need a degree-3 cochain on the 2-fold product"));
    }
    DeletedProduct::build(c, 4, guard)?;
    let dp3 = DeletedProduct::build(c, 3, guard)?;
    let v3 = |i: usize, j: usize| pullback(u.clone(), &[i, j], 3);
    let v123 = lincomb(vec![
        (BigInt::one(), cup(v3(0, 1)?, v3(1, 2)?)?),
        (BigInt::one(), cup(v3(1, 2)?, v3(2, 0)?)?),
        (BigInt::one(), cup(v3(2, 0)?, v3(0, 1)?)?),
    ])?;
    let tri3 = Staircase::new(&dp3, guard)?;
    let x3: CochainRef = match &w {
        Some(w) => {
            let w3 = |i: usize, j: usize| pullback(w.clone(), &[i, j], 3);
            lincomb(vec![
                (BigInt::one(), cup(w3(0, 1)?, v3(1, 2)?)?),
                (BigInt::one(), cup(w3(1, 2)?, v3(2, 0)?)?),
                (BigInt::one(), cup(w3(2, 0)?, v3(0, 1)?)?),
            ])?
        }
        None => {
            let d = tri3.coboundary_matrix(5)?;
            let b = tri3.tabulate(v123.as_ref());
            match solve_integer(&d, &b)? {
                SolveOutcome::Solution(x) => Rc::new(tri3.table(5, &x)),
                SolveOutcome::Infeasible(_) => {
                    return Err(Error::validation("V_123 is not a coboundary on conf_s(K,3)"));
                }
            }
        }
    };
    let x3 = memo(x3);
    let dx3 = coboundary(x3.clone());
    for s in tri3.simplices(6) {
        if dx3.value(s) != v123.value(s) {
            return Err(Error::verification(format!("δX differs from V_123 at {s:?}")));
        }
    }
    let mut v = HashMap::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                v.insert((i, j), memo(pullback(u.clone(), &[i, j], 4)?));
            }
        }
    }
    let mut x = HashMap::new();
    for t in TRIPLES {
        x.insert(t, memo(pullback(x3.clone(), &t, 4)?));
    }
    let mut y = Vec::new();
    for p in PARTITIONS {
        let mut terms = Vec::new();
        for t in TRIPLES {
            let l = (0..4).find(|i| !t.contains(i)).unwrap();
            let &(p0, p1) = p.iter().find(|(a, b)| t.contains(a) && t.contains(b)).unwrap();
            let pos = |q: usize| t.iter().position(|&z| z == q).unwrap();
            let (a, b) = if (pos(p0) + 1) % 3 == pos(p1) { (p0, p1) } else { (p1, p0) };
            let diff = lincomb(vec![(BigInt::one(), v[&(a, l)].clone()), (-BigInt::one(), v[&(b, l)].clone())])?;
            terms.push((BigInt::one(), cup(x[&t].clone(), diff)?));
        }
        let name = format!("({}{})({}{})", p[0].0 + 1, p[0].1 + 1, p[1].0 + 1, p[1].1 + 1);
        y.push((name, lincomb(terms)?));
    }
    Ok(MasseyY { v, x, y })
}

/// Element of the exterior algebra on odd generators V_ij = V_ji (d = 4), keyed by sorted generator lists.
pub type ExteriorElement = BTreeMap<Vec<(usize, usize)>, i64>;

fn ext_gen(i: usize, j: usize) -> ExteriorElement {
    [(vec![(i.min(j), i.max(j))], 1)].into_iter().collect()
}

fn ext_add(terms: &[(i64, &ExteriorElement)]) -> ExteriorElement {
    let mut out = ExteriorElement::new();
    for (c, x) in terms {
        for (k, v) in x.iter() {
            *out.entry(k.clone()).or_insert(0) += c * v;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn ext_mul(a: &ExteriorElement, b: &ExteriorElement) -> ExteriorElement {
    let mut out = ExteriorElement::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<(usize, usize)> = ma.iter().chain(mb).copied().collect();
            let mut sign = 1;
            for x in 0..m.len() {
                for y in 0..m.len() - 1 - x {
                    if m[y] > m[y + 1] {
                        m.swap(y, y + 1);
                        sign = -sign;
                    }
                }
            }
            if m.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            *out.entry(m).or_insert(0) += sign * ca * cb;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// δY_P = Σ V_ijk(V_al − V_bl) evaluated in the graded-commutative model; zero for every partition.
pub fn formal_massey_coboundary(p: [(usize, usize); 2]) -> ExteriorElement {
    let mut total = ExteriorElement::new();
    for t in TRIPLES {
        let [i, j, k] = t;
        let l = (0..4).find(|x| !t.contains(x)).unwrap();
        let v3 = ext_add(&[
            (1, &ext_mul(&ext_gen(i, j), &ext_gen(j, k))),
            (1, &ext_mul(&ext_gen(j, k), &ext_gen(k, i))),
            (1, &ext_mul(&ext_gen(k, i), &ext_gen(i, j))),
        ]);
        let &(p0, p1) = p.iter().find(|(a, b)| t.contains(a) && t.contains(b)).unwrap();
        let pos = |q: usize| t.iter().position(|&z| z == q).unwrap();
        let (a, b) = if (pos(p0) + 1) % 3 == pos(p1) { (p0, p1) } else { (p1, p0) };
        let diff = ext_add(&[(1, &ext_gen(a, l)), (-1, &ext_gen(b, l))]);
        total = ext_add(&[(1, &total), (1, &ext_mul(&v3, &diff))]);
    }
    total
}
