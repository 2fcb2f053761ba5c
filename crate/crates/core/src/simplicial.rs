//! Finite abstract simplicial complexes.
//!
//! Every simplex is oriented by increasing vertex order. Tagged subcomplexes
//! carry names such as `S` or `D123` so later stages can address cycles.

use crate::chain::Chain;
use crate::error::{Error, Result, DEFAULT_SIZE_GUARD};
use crate::zlinalg::SparseMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

pub type Vertex = u32;

/// Strictly increasing vertex tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<Vertex>);

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Simplex {
    /// Sorts the vertices; repeated vertices or an empty list are rejected.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::validation("empty simplex"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation(format!("repeated vertex in simplex {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with their incidence signs (−1)^i.
    pub fn facets(&self) -> Vec<(i32, Simplex)> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                (if i % 2 == 0 { 1 } else { -1 }, Simplex(v))
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u32..(1u32 << n))
            .map(|mask| {
                Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
            })
            .collect()
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn contains(&self, other: &Simplex) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    /// Incidence number [self : face] for a codimension-one face, 0 otherwise.
    pub fn incidence(&self, face: &Simplex) -> i32 {
        if face.0.len() + 1 != self.0.len() || !self.contains(face) {
            return 0;
        }
        let missing = self.0.iter().position(|v| face.0.binary_search(v).is_err()).unwrap();
        if missing % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Face-closed finite simplicial complex with a global vertex order.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    name: String,
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    tags: BTreeMap<String, Vec<Simplex>>,
}

/// Outcome of checking a raw simplex list.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub counts: Vec<usize>,
    pub missing_faces: Vec<Vec<Vertex>>,
    pub duplicates: Vec<Vec<Vertex>>,
    pub malformed: Vec<Vec<Vertex>>,
}

/// JSON interchange form of a complex.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub maximal_simplices: Vec<Vec<Vertex>>,
    /// Optional explicit simplex list; validated as given, without closure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplices: Option<Vec<Vec<Vertex>>>,
    #[serde(default)]
    pub tags: BTreeMap<String, Vec<Vec<Vertex>>>,
}

/// Checks face closure and duplicates of a raw simplex list.
/// Larger simplices are rejected before their faces are enumerated.
pub const MAX_SIMPLEX_VERTICES: usize = 16;

pub fn validate_complex(simplices: &[Vec<Vertex>]) -> ValidationReport {
    let mut report = ValidationReport { valid: true, ..Default::default() };
    let mut seen: BTreeSet<Simplex> = BTreeSet::new();
    for raw in simplices {
        if raw.len() > MAX_SIMPLEX_VERTICES {
            report.malformed.push(raw.clone());
            continue;
        }
        match Simplex::new(raw.clone()) {
            Ok(s) => {
                if !seen.insert(s.clone()) {
                    report.duplicates.push(s.0.clone());
                }
            }
            Err(_) => report.malformed.push(raw.clone()),
        }
    }
    let mut missing: BTreeSet<Simplex> = BTreeSet::new();
    for s in &seen {
        for (_, f) in s.facets() {
            if !seen.contains(&f) {
                missing.insert(f);
            }
        }
    }
    // Report every missing face, not only facets of listed simplices.
    let mut queue: Vec<Simplex> = missing.iter().cloned().collect();
    while let Some(f) = queue.pop() {
        for (_, g) in f.facets() {
            if !seen.contains(&g) && missing.insert(g.clone()) {
                queue.push(g);
            }
        }
    }
    report.missing_faces = missing.into_iter().map(|s| s.0).collect();
    for s in &seen {
        if report.counts.len() <= s.dim() {
            report.counts.resize(s.dim() + 1, 0);
        }
        report.counts[s.dim()] += 1;
    }
    report.valid =
        report.missing_faces.is_empty() && report.duplicates.is_empty() && report.malformed.is_empty();
    report
}

impl SimplicialComplex {
    pub fn empty(name: &str) -> Self {
        SimplicialComplex {
            name: name.to_string(),
            by_dim: Vec::new(),
            index: HashMap::new(),
            tags: BTreeMap::new(),
        }
    }

    /// Face closure of the given simplices.
    pub fn from_maximal<I>(name: &str, maximal: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Vertex>>,
    {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        let mut faces = 0usize;
        for raw in maximal {
            let s = Simplex::new(raw)?;
            if all.contains(&s) {
                continue;
            }
            faces = faces.saturating_add((1usize << s.0.len().min(63)) - 1);
            if s.0.len() > MAX_SIMPLEX_VERTICES || faces > DEFAULT_SIZE_GUARD {
                return Err(Error::SizeGuard { what: format!("face closure of {name}"), count: faces, guard: DEFAULT_SIZE_GUARD });
            }
            for f in s.faces() {
                all.insert(f);
            }
        }
        Ok(Self::from_closed_set(name, all))
    }

    fn from_closed_set(name: &str, all: BTreeSet<Simplex>) -> Self {
        let top = all.iter().map(|s| s.dim()).max();
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); top.map_or(0, |d| d + 1)];
        for s in all {
            let d = s.dim();
            by_dim[d].push(s);
        }
        let mut index = HashMap::new();
        for layer in &by_dim {
            for (i, s) in layer.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        SimplicialComplex { name: name.to_string(), by_dim, index, tags: BTreeMap::new() }
    }

    /// Attaches a named subcomplex given by generating simplices, which must belong to the complex.
    pub fn add_tag(&mut self, tag: &str, simplices: Vec<Vec<Vertex>>) -> Result<()> {
        let mut out = Vec::new();
        for raw in simplices {
            let s = Simplex::new(raw)?;
            if !self.contains(&s) {
                return Err(Error::validation(format!("tag {tag}: simplex {s:?} not in complex")));
            }
            out.push(s);
        }
        out.sort();
        out.dedup();
        self.tags.insert(tag.to_string(), out);
        Ok(())
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let mut c = match &j.simplices {
            Some(list) => {
                let rep = validate_complex(list);
                if !rep.valid {
                    return Err(Error::validation(format!(
                        "complex {} is not face-closed or has duplicates: missing {:?}, duplicates {:?}",
                        j.name, rep.missing_faces, rep.duplicates
                    )));
                }
                Self::from_maximal(&j.name, list.clone())?
            }
            None => Self::from_maximal(&j.name, j.maximal_simplices.clone())?,
        };
        for (tag, list) in &j.tags {
            c.add_tag(tag, list.clone())?;
        }
        Ok(c)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            name: self.name.clone(),
            maximal_simplices: self.maximal_simplices().into_iter().map(|s| s.0).collect(),
            simplices: None,
            tags: self
                .tags
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|s| s.0.clone()).collect()))
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        if self.by_dim.is_empty() {
            None
        } else {
            Some(self.by_dim.len() - 1)
        }
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(|v| v.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Position of a simplex inside its dimension layer.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        for layer in self.by_dim.iter().skip(1) {
            for s in layer {
                for (_, f) in s.facets() {
                    if let Some(d) = self.index.get(&f) {
                        covered.insert(&self.by_dim[f.dim()][*d]);
                    }
                }
            }
        }
        self.iter().filter(|s| !covered.contains(s)).cloned().collect()
    }

    pub fn tags(&self) -> &BTreeMap<String, Vec<Simplex>> {
        &self.tags
    }

    pub fn tag(&self, name: &str) -> Result<&[Simplex]> {
        self.tags
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::validation(format!("unknown tag {name} in complex {}", self.name)))
    }

    /// Vertex set of a tagged subcomplex.
    pub fn tag_vertices(&self, name: &str) -> Result<BTreeSet<Vertex>> {
        Ok(self.tag(name)?.iter().flat_map(|s| s.0.iter().copied()).collect())
    }

    /// Face closure of a tagged subcomplex as a complex of its own, keeping vertex ids.
    pub fn tag_subcomplex(&self, name: &str) -> Result<SimplicialComplex> {
        let gens: Vec<Vec<Vertex>> = self.tag(name)?.iter().map(|s| s.0.clone()).collect();
        SimplicialComplex::from_maximal(name, gens)
    }

    /// Subcomplex generated by several tags; tags fully contained in it are carried over.
    pub fn union_of_tags(&self, name: &str, tags: &[&str]) -> Result<SimplicialComplex> {
        let mut gens = Vec::new();
        for t in tags {
            gens.extend(self.tag(t)?.iter().map(|s| s.0.clone()));
        }
        let mut sub = SimplicialComplex::from_maximal(name, gens)?;
        for (t, list) in &self.tags {
            if list.iter().all(|s| sub.contains(s)) {
                sub.tags.insert(t.clone(), list.clone());
            }
        }
        Ok(sub)
    }

    /// Coherently oriented cycle carried by the top-dimensional simplices of a tag.
    ///
    /// The least simplex gets coefficient +1; orientation propagates across shared facets.
    pub fn tag_cycle(&self, name: &str) -> Result<Chain<Simplex>> {
        let gens = self.tag(name)?;
        let k = gens.iter().map(|s| s.dim()).max().ok_or_else(|| Error::validation("empty tag"))?;
        let tops: Vec<&Simplex> = gens.iter().filter(|s| s.dim() == k).collect();
        orient_cycle(&tops, k).ok_or_else(|| {
            Error::validation(format!("tag {name} does not carry an orientable {k}-cycle"))
        })
    }

    /// Simplicial boundary matrix ∂_k with rows indexed by (k−1)-simplices.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseMatrix> {
        let dim = self.dim().unwrap_or(0);
        if k == 0 || k > dim {
            return Err(Error::validation(format!("boundary degree {k} outside 1..={dim}")));
        }
        let rows = self.simplices(k - 1).len();
        let mut m = SparseMatrix::zeros(rows, self.simplices(k).len());
        for (j, s) in self.simplices(k).iter().enumerate() {
            for (sign, f) in s.facets() {
                let i = self.index[&f];
                m.add_entry(i, j, BigInt::from(sign));
            }
        }
        Ok(m)
    }

    /// Boundary of a simplicial chain.
    pub fn boundary(chain: &Chain<Simplex>) -> Chain<Simplex> {
        let mut out = Chain::zero(chain.degree.saturating_sub(1));
        for (s, c) in chain.iter() {
            for (sign, f) in s.facets() {
                out.add_term(f, c * BigInt::from(sign));
            }
        }
        out
    }

    /// True when every vertex of `a` is absent from `b`.
    pub fn tags_disjoint(&self, a: &str, b: &str) -> Result<bool> {
        let va = self.tag_vertices(a)?;
        let vb = self.tag_vertices(b)?;
        Ok(va.is_disjoint(&vb))
    }
}

fn orient_cycle(tops: &[&Simplex], k: usize) -> Option<Chain<Simplex>> {
    if tops.is_empty() {
        return None;
    }
    let mut by_facet: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (i, s) in tops.iter().enumerate() {
        for (_, f) in s.facets() {
            by_facet.entry(f).or_default().push(i);
        }
    }
    let mut coeff: Vec<i32> = vec![0; tops.len()];
    let mut queue = VecDeque::new();
    for start in 0..tops.len() {
        if coeff[start] != 0 {
            continue;
        }
        coeff[start] = 1;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for (si, f) in tops[i].facets() {
                let nbrs = &by_facet[&f];
                if nbrs.len() != 2 {
                    continue;
                }
                let j = if nbrs[0] == i { nbrs[1] } else { nbrs[0] };
                let sj = tops[j].incidence(&f);
                let want = -coeff[i] * si * sj;
                if coeff[j] == 0 {
                    coeff[j] = want;
                    queue.push_back(j);
                } else if coeff[j] != want {
                    return None;
                }
            }
        }
    }
    let chain = Chain::from_terms(
        k,
        tops.iter().zip(coeff.iter()).map(|(s, c)| ((*s).clone(), BigInt::from(*c))),
    );
    if k > 0 && !SimplicialComplex::boundary(&chain).is_empty() {
        return None;
    }
    Some(chain)
}

/// Evaluates a simplicial cochain on a simplicial chain.
pub fn pair(cochain: &Chain<Simplex>, chain: &Chain<Simplex>) -> BigInt {
    let mut acc = BigInt::zero();
    for (s, c) in chain.iter() {
        acc += c * cochain.get(s);
    }
    acc
}

/// Simplicial coboundary of a cochain supported in a complex.
pub fn coboundary(c: &SimplicialComplex, cochain: &Chain<Simplex>) -> Chain<Simplex> {
    let k = cochain.degree;
    let mut out = Chain::zero(k + 1);
    for s in c.simplices(k + 1) {
        let mut v = BigInt::zero();
        for (sign, f) in s.facets() {
            v += cochain.get(&f) * BigInt::from(sign);
        }
        out.add_term(s.clone(), v);
    }
    out
}

/// The elementary cochain with value one on a single simplex.
pub fn dual(s: &Simplex) -> Chain<Simplex> {
    Chain::from_terms(s.dim(), [(s.clone(), BigInt::one())])
}
