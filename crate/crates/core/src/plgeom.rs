//! Exact rational PL geometry: vertex placements, simplex intersections and
//! co-directed pair counts between a 2-cycle and a 1-cycle in R⁴.

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex, Vertex};
use crate::zlinalg::det;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "a", "a/b" or a plain JSON integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let v = match t.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).map_err(|_| Error::validation(format!("bad rational {s:?}")))?;
            let b = BigInt::from_str(b.trim()).map_err(|_| Error::validation(format!("bad rational {s:?}")))?;
            if b.is_zero() {
                return Err(Error::validation(format!("zero denominator in {s:?}")));
            }
            Q::new(a, b)
        }
        None => Q::from_integer(
            BigInt::from_str(t).map_err(|_| Error::validation(format!("bad rational {s:?}")))?,
        ),
    };
    Ok(v)
}

pub fn format_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QJson {
    Int(i64),
    Str(String),
}

fn de_point<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<String, Vec<Q>>, D::Error> {
    let raw: BTreeMap<String, Vec<QJson>> = BTreeMap::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            let pts = v
                .into_iter()
                .map(|x| match x {
                    QJson::Int(i) => Ok(q(i)),
                    QJson::Str(s) => parse_q(&s).map_err(de::Error::custom),
                })
                .collect::<std::result::Result<Vec<Q>, D::Error>>()?;
            Ok((k, pts))
        })
        .collect()
}

fn ser_point<S: Serializer>(m: &BTreeMap<String, Vec<Q>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: BTreeMap<&String, Vec<String>> = m.iter().map(|(k, v)| (k, v.iter().map(format_q).collect())).collect();
    out.serialize(s)
}

#[derive(Serialize, Deserialize)]
struct PlMapJson {
    d: usize,
    #[serde(serialize_with = "ser_point", deserialize_with = "de_point")]
    coords: BTreeMap<String, Vec<Q>>,
}

/// Vertex placement in Q^d, extended linearly over simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    d: usize,
    coords: BTreeMap<Vertex, Vec<Q>>,
}

impl PLMap {
    pub fn new(d: usize, coords: BTreeMap<Vertex, Vec<Q>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::validation(format!("ambient dimension {d} is below 2")));
        }
        if let Some((v, p)) = coords.iter().find(|(_, p)| p.len() != d) {
            return Err(Error::validation(format!("vertex {v} has {} coordinates, expected {d}", p.len())));
        }
        Ok(PLMap { d, coords })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PlMapJson = serde_json::from_str(s).map_err(|e| Error::validation(format!("map JSON: {e}")))?;
        let mut coords = BTreeMap::new();
        for (k, v) in j.coords {
            let id: Vertex = k.trim().parse().map_err(|_| Error::validation(format!("bad vertex id {k:?}")))?;
            coords.insert(id, v);
        }
        Self::new(j.d, coords)
    }

    pub fn to_json_string(&self) -> String {
        let j = PlMapJson { d: self.d, coords: self.coords.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() };
        serde_json::to_string(&j).expect("map serializes")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, v: Vertex) -> Result<&[Q]> {
        self.coords.get(&v).map(|p| p.as_slice()).ok_or_else(|| Error::validation(format!("vertex {v} has no coordinates")))
    }

    pub fn coords(&self) -> &BTreeMap<Vertex, Vec<Q>> {
        &self.coords
    }

    /// Checks that every vertex of the complex is placed.
    pub fn covers(&self, c: &SimplicialComplex) -> Result<()> {
        for v in c.vertices() {
            self.point(v)?;
        }
        Ok(())
    }

    pub fn set(&mut self, v: Vertex, p: Vec<Q>) -> Result<()> {
        if p.len() != self.d {
            return Err(Error::validation("point has the wrong dimension"));
        }
        self.coords.insert(v, p);
        Ok(())
    }

    /// Edge vectors from the least vertex of a simplex, in increasing order.
    pub fn frame(&self, s: &Simplex) -> Result<Vec<Vec<Q>>> {
        let v = s.vertices();
        let p0 = self.point(v[0])?;
        v[1..].iter().map(|&w| Ok(sub(self.point(w)?, p0))).collect()
    }
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Vertex i (in vertex order) goes to (tᵢ, tᵢ², …, tᵢ^d).
pub fn moment_curve_map(c: &SimplicialComplex, d: usize, params: Option<&[Q]>) -> Result<PLMap> {
    let verts = c.vertices();
    let ts: Vec<Q> = match params {
        Some(p) => {
            if p.len() < verts.len() {
                return Err(Error::validation(format!("{} parameters for {} vertices", p.len(), verts.len())));
            }
            p[..verts.len()].to_vec()
        }
        None => (1..=verts.len() as i64).map(q).collect(),
    };
    let distinct: BTreeSet<&Q> = ts.iter().collect();
    if distinct.len() != ts.len() {
        return Err(Error::validation("moment-curve parameters repeat"));
    }
    let mut coords = BTreeMap::new();
    for (v, t) in verts.iter().zip(&ts) {
        let mut p = Vec::with_capacity(d);
        let mut x = t.clone();
        for _ in 0..d {
            p.push(x.clone());
            x = &x * t;
        }
        coords.insert(*v, p);
    }
    PLMap::new(d, coords)
}

/// Outcome of an exact rational linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatSolve {
    Unique(Vec<Q>),
    Inconsistent,
    /// Consistent with a positive-dimensional solution set.
    Family,
}

/// Solves A·x = b by Gaussian elimination over Q.
pub fn solve_rational(a: &[Vec<Q>], b: &[Q]) -> RatSolve {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, v)| {
        let mut row = r.clone();
        row.push(v.clone());
        row
    }).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return RatSolve::Inconsistent;
    }
    if pivots.len() < cols {
        return RatSolve::Family;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    RatSolve::Unique(x)
}

fn rat_det(cols: &[Vec<Q>]) -> Q {
    // Clear denominators column by column, then take an integer determinant.
    let n = cols.len();
    let mut scale = Q::one();
    let mut mat = vec![vec![BigInt::zero(); n]; n];
    for (j, c) in cols.iter().enumerate() {
        let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale /= Q::from_integer(l.clone());
        for i in 0..n {
            mat[i][j] = (&c[i] * Q::from_integer(l.clone())).to_integer();
        }
    }
    Q::from_integer(det(&mat)) * scale
}

/// Sign of the determinant of the matrix with the given columns.
pub fn det_sign(cols: &[Vec<Q>]) -> i32 {
    let d = rat_det(cols);
    if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub point: Vec<String>,
    pub sign: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub sigma: Simplex,
    pub tau: Simplex,
    pub points: Vec<IntersectionPoint>,
    pub total: i64,
}

/// Barycentric check: 1 inside the open simplex, 0 outside the closed one, −1 on its boundary.
fn open_simplex_status(a: &[Q]) -> i32 {
    let sum: Q = a.iter().fold(Q::zero(), |s, x| s + x);
    let one = Q::one();
    if a.iter().any(|x| x.is_negative()) || sum > one {
        return 0;
    }
    if a.iter().any(|x| x.is_zero()) || sum == one {
        return -1;
    }
    1
}

/// Signed intersection of f(σ) and f(τ) for dim σ + dim τ = d.
///
/// The sign is that of det[e(σ), e(τ)] with edge vectors from the least vertex.
pub fn simplex_pair_intersection(f: &PLMap, sigma: &Simplex, tau: &Simplex) -> Result<IntersectionReport> {
    if !sigma.is_disjoint(tau) {
        return Err(Error::validation(format!("{sigma:?} and {tau:?} share a vertex")));
    }
    if sigma.dim() + tau.dim() != f.dim() {
        return Err(Error::validation(format!(
            "dimensions {} + {} do not add up to the ambient {}",
            sigma.dim(),
            tau.dim(),
            f.dim()
        )));
    }
    let es = f.frame(sigma)?;
    let et = f.frame(tau)?;
    let mut cols: Vec<Vec<Q>> = es.clone();
    cols.extend(et.iter().cloned());
    let d = f.dim();
    // σ₀ + Σ aᵢeᵢ(σ) = τ₀ + Σ bⱼeⱼ(τ)  ⇔  [E_σ, −E_τ]·(a,b) = τ₀ − σ₀
    let a: Vec<Vec<Q>> = (0..d)
        .map(|i| {
            es.iter().map(|c| c[i].clone()).chain(et.iter().map(|c| -c[i].clone())).collect()
        })
        .collect();
    let rhs = sub(f.point(tau.vertices()[0])?, f.point(sigma.vertices()[0])?);
    let mut report = IntersectionReport { sigma: sigma.clone(), tau: tau.clone(), points: Vec::new(), total: 0 };
    match solve_rational(&a, &rhs) {
        RatSolve::Inconsistent => Ok(report),
        RatSolve::Family => Err(Error::degenerate(format!(
            "affine spans of f{sigma:?} and f{tau:?} meet in positive dimension; reseed the placement"
        ))),
        RatSolve::Unique(x) => {
            let p = sigma.dim();
            let s1 = open_simplex_status(&x[..p]);
            let s2 = open_simplex_status(&x[p..]);
            if s1 == 0 || s2 == 0 {
                return Ok(report);
            }
            if s1 < 0 || s2 < 0 {
                return Err(Error::degenerate(format!(
                    "f{sigma:?} and f{tau:?} meet on a boundary face; reseed the placement"
                )));
            }
            let sign = det_sign(&cols);
            let base = f.point(sigma.vertices()[0])?;
            let point: Vec<Q> = (0..d)
                .map(|i| {
                    let mut v = base[i].clone();
                    for (k, e) in es.iter().enumerate() {
                        v += &x[k] * &e[i];
                    }
                    v
                })
                .collect();
            report.points.push(IntersectionPoint { point: point.iter().map(format_q).collect(), sign });
            report.total = sign as i64;
            Ok(report)
        }
    }
}

/// True when 0 lies in the convex hull of the points (Carathéodory over affinely independent subsets).
pub fn origin_in_hull(points: &[Vec<Q>]) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    let d = points[0].len();
    let max = (d + 1).min(n);
    for mask in 1u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        if k > max {
            continue;
        }
        let sel: Vec<&Vec<Q>> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &points[i]).collect();
        // Σ λᵢ pᵢ = 0, Σ λᵢ = 1.
        let mut a: Vec<Vec<Q>> = (0..d).map(|r| sel.iter().map(|p| p[r].clone()).collect()).collect();
        a.push(vec![Q::one(); k]);
        let mut b = vec![Q::zero(); d];
        b.push(Q::one());
        if let RatSolve::Unique(l) = solve_rational(&a, &b) {
            if l.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// True when the images of two simplices are disjoint.
pub fn images_disjoint(f: &PLMap, a: &Simplex, b: &Simplex) -> Result<bool> {
    let mut diffs = Vec::new();
    for &x in a.vertices() {
        for &y in b.vertices() {
            diffs.push(sub(f.point(y)?, f.point(x)?));
        }
    }
    Ok(!origin_in_hull(&diffs))
}

/// Signed count of pairs (x in a triangle of A, y on an edge of γ) with f(y) − f(x) = t·dir, t > 0.
///
/// Each crossing contributes sign det[e₁, e₂, e_E, dir] times the chain coefficients.
pub fn gauss_linking_2_1(f: &PLMap, a: &Chain<Simplex>, gamma: &Chain<Simplex>, dir: &[Q]) -> Result<BigInt> {
    if f.dim() != 4 || dir.len() != 4 {
        return Err(Error::validation("linking numbers are computed in R⁴"));
    }
    if a.degree != 2 || gamma.degree != 1 {
        return Err(Error::validation("expected a 2-chain and a 1-chain"));
    }
    if dir.iter().all(|x| x.is_zero()) {
        return Err(Error::validation("direction vector is zero"));
    }
    let mut total = BigInt::zero();
    for (tri, ca) in a.iter() {
        let e = f.frame(tri)?;
        let a0 = f.point(tri.vertices()[0])?;
        for (edge, cg) in gamma.iter() {
            if !tri.is_disjoint(edge) {
                return Err(Error::validation(format!("{tri:?} and {edge:?} share a vertex")));
            }
            let ee = f.frame(edge)?.remove(0);
            let b0 = f.point(edge.vertices()[0])?;
            let rhs = sub(a0, b0);
            // Disjointness of the images: s₁,s₂ in the triangle and r on the edge with t = 0.
            let m3: Vec<Vec<Q>> =
                (0..4).map(|i| vec![-e[0][i].clone(), -e[1][i].clone(), ee[i].clone()]).collect();
            match solve_rational(&m3, &rhs) {
                RatSolve::Unique(x) => {
                    if open_simplex_closed(&x[..2]) && unit_closed(&x[2]) {
                        return Err(Error::degenerate(format!("images of {tri:?} and {edge:?} meet")));
                    }
                }
                RatSolve::Family => {
                    return Err(Error::degenerate(format!("{tri:?} and {edge:?} span a degenerate configuration")));
                }
                RatSolve::Inconsistent => {}
            }
            let m4: Vec<Vec<Q>> = (0..4)
                .map(|i| vec![-e[0][i].clone(), -e[1][i].clone(), ee[i].clone(), -dir[i].clone()])
                .collect();
            match solve_rational(&m4, &rhs) {
                RatSolve::Inconsistent => {}
                RatSolve::Family => {
                    return Err(Error::degenerate("direction is not generic for this pair; choose another"));
                }
                RatSolve::Unique(x) => {
                    let st = open_simplex_status(&x[..2]);
                    let r = &x[2];
                    let t = &x[3];
                    let r_in = r.is_positive() && *r < Q::one();
                    let r_closed = !r.is_negative() && *r <= Q::one();
                    if st == 0 || !r_closed || !t.is_positive() {
                        continue;
                    }
                    if st < 0 || !r_in {
                        return Err(Error::degenerate("direction hits a face boundary; choose another"));
                    }
                    let sign = det_sign(&[e[0].clone(), e[1].clone(), ee.clone(), dir.to_vec()]);
                    total += ca * cg * BigInt::from(sign);
                }
            }
        }
    }
    Ok(total)
}

fn open_simplex_closed(a: &[Q]) -> bool {
    let sum: Q = a.iter().fold(Q::zero(), |s, x| s + x);
    a.iter().all(|x| !x.is_negative()) && sum <= Q::one()
}

fn unit_closed(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}
