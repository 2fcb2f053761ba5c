//! Built-in complexes, linking data and placements, addressable by name.

use crate::error::{Error, Result};
use crate::o3::Placement;
use crate::plgeom::{q, qr, PLMap, Q};
use crate::simplicial::{SimplicialComplex, Vertex};
use std::collections::{BTreeMap, BTreeSet};

pub const COMPLEX_NAMES: &[&str] = &["sk2_delta6", "g7", "k0_fkt", "k_fkt", "k5", "disjoint_sphere_sphere_torus", "massey_toy", "wn_toy"];

fn subsets(vs: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let n = vs.len();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).map(|i| vs[i]).collect());
        }
    }
    out.sort();
    out
}

/// 2-skeleton of the simplex on the given vertices, optionally without one triangle.
fn skeleton2(vs: &[Vertex], drop: Option<[Vertex; 3]>) -> Vec<Vec<Vertex>> {
    let mut out: Vec<Vec<Vertex>> = subsets(vs, 3);
    if let Some(t) = drop {
        out.retain(|s| s.as_slice() != t);
        // Keep the edges of the removed triangle.
        out.extend([vec![t[0], t[1]], vec![t[1], t[2]], vec![t[0], t[2]]]);
    }
    out
}

pub fn sk2_delta6() -> SimplicialComplex {
    SimplicialComplex::from_maximal("sk2_delta6", skeleton2(&[0, 1, 2, 3, 4, 5, 6], None)).unwrap()
}

pub fn g7() -> SimplicialComplex {
    SimplicialComplex::from_maximal("g7", skeleton2(&[0, 1, 2, 3, 4, 5, 6], Some([0, 1, 2]))).unwrap()
}

pub fn k5() -> SimplicialComplex {
    SimplicialComplex::from_maximal("k5", subsets(&[0, 1, 2, 3, 4], 2)).unwrap()
}

/// Vertex ids of the second copy: v₁′ = v₁ = 0, v₂′..v₇′ = 7..12.
const PRIME: [Vertex; 7] = [0, 7, 8, 9, 10, 11, 12];

fn k0_gens() -> Vec<Vec<Vertex>> {
    let mut gens = skeleton2(&[0, 1, 2, 3, 4, 5, 6], Some([0, 1, 2]));
    gens.extend(skeleton2(&PRIME, Some([0, 7, 8])));
    gens
}

fn tag_fkt(c: &mut SimplicialComplex) {
    c.add_tag("S", subsets(&[3, 4, 5, 6], 3)).unwrap();
    c.add_tag("Sp", subsets(&[9, 10, 11, 12], 3)).unwrap();
    c.add_tag("D123", vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    c.add_tag("D123p", vec![vec![0, 7], vec![7, 8], vec![0, 8]]).unwrap();
}

pub fn k0_fkt() -> SimplicialComplex {
    let mut c = SimplicialComplex::from_maximal("k0_fkt", k0_gens()).unwrap();
    tag_fkt(&mut c);
    c
}

/// Boundary word a·b·a⁻¹·b⁻¹ of the commutator disk, a = v₁v₂v₃, b = v₁′v₂′v₃′.
pub const COMMUTATOR_WORD: [Vertex; 12] = [0, 1, 2, 0, 7, 8, 0, 2, 1, 0, 8, 7];

/// The 36 triangles of the commutator disk: 12-gon, inner ring 13..24, center 25.
pub fn commutator_triangles() -> Vec<Vec<Vertex>> {
    let p = COMMUTATOR_WORD;
    let ring = |i: usize| 13 + (i % 12) as Vertex;
    let mut out = Vec::new();
    for i in 0..12 {
        out.push(vec![p[i], p[(i + 1) % 12], ring(i)]);
        out.push(vec![p[(i + 1) % 12], ring(i), ring(i + 1)]);
        out.push(vec![ring(i), ring(i + 1), 25]);
    }
    out
}

pub fn k_fkt() -> SimplicialComplex {
    let mut gens = k0_gens();
    gens.extend(commutator_triangles());
    let mut c = SimplicialComplex::from_maximal("k_fkt", gens).unwrap();
    tag_fkt(&mut c);
    c.add_tag("T", commutator_triangles()).unwrap();
    c
}

/// Octahedron boundary on six consecutive ids starting at `b`: b/b+1, b+2/b+3, b+4/b+5 are antipodal.
pub fn octahedron(b: Vertex) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for x in [b, b + 1] {
        for y in [b + 2, b + 3] {
            for z in [b + 4, b + 5] {
                out.push(vec![x, y, z]);
            }
        }
    }
    out
}

/// Vertex (i,j) of the 3×3 grid torus.
pub fn grid_vertex(i: usize, j: usize) -> Vertex {
    12 + 3 * (i % 3) as Vertex + (j % 3) as Vertex
}

pub fn grid_torus() -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b, c, d) = (grid_vertex(i, j), grid_vertex(i + 1, j), grid_vertex(i, j + 1), grid_vertex(i + 1, j + 1));
            out.push(vec![a, b, d]);
            out.push(vec![a, c, d]);
        }
    }
    out
}

/// Two octahedral 2-spheres A (0..5), B (6..11) and a 9-vertex torus T with loops g1, g2.
pub fn disjoint_sphere_sphere_torus() -> SimplicialComplex {
    let mut gens = octahedron(0);
    gens.extend(octahedron(6));
    gens.extend(grid_torus());
    let mut c = SimplicialComplex::from_maximal("disjoint_sphere_sphere_torus", gens).unwrap();
    c.add_tag("A", octahedron(0)).unwrap();
    c.add_tag("B", octahedron(6)).unwrap();
    c.add_tag("T", grid_torus()).unwrap();
    c.add_tag("g1", (0..3).map(|i| vec![grid_vertex(i, 0), grid_vertex(i + 1, 0)]).collect()).unwrap();
    c.add_tag("g2", (0..3).map(|j| vec![grid_vertex(0, j), grid_vertex(0, j + 1)]).collect()).unwrap();
    c
}

/// Four disjoint filled triangles.
pub fn massey_toy() -> SimplicialComplex {
    let gens: Vec<Vec<Vertex>> = (0..4).map(|i| vec![3 * i, 3 * i + 1, 3 * i + 2]).collect();
    let mut c = SimplicialComplex::from_maximal("massey_toy", gens.clone()).unwrap();
    for (i, g) in gens.into_iter().enumerate() {
        c.add_tag(&format!("t{}", i + 1), vec![g]).unwrap();
    }
    c
}

/// Four disjoint triangles used for order-2 tower data.
pub fn wn_toy() -> SimplicialComplex {
    let mut c = massey_toy();
    c.set_name("wn_toy");
    c
}

pub fn build_named_complex(name: &str) -> Result<SimplicialComplex> {
    Ok(match name {
        "sk2_delta6" => sk2_delta6(),
        "g7" => g7(),
        "k0_fkt" => k0_fkt(),
        "k_fkt" => k_fkt(),
        "k5" => k5(),
        "disjoint_sphere_sphere_torus" => disjoint_sphere_sphere_torus(),
        "massey_toy" => massey_toy(),
        "wn_toy" => wn_toy(),
        _ => return Err(Error::validation(format!("unknown built-in complex {name:?}"))),
    })
}

/// Linking numbers keyed by (2-cycle tag, 1-cycle tag).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LinkingForm {
    pub lambda: Vec<(String, String, i64)>,
}

impl LinkingForm {
    pub fn get(&self, a: &str, g: &str) -> Result<i64> {
        self.lambda
            .iter()
            .find(|(x, y, _)| x == a && y == g)
            .map(|t| t.2)
            .ok_or_else(|| Error::validation(format!("linking form has no entry for ({a}, {g})")))
    }

    pub fn as_map(&self) -> BTreeMap<(String, String), i64> {
        self.lambda.iter().map(|(a, g, v)| ((a.clone(), g.clone()), *v)).collect()
    }
}

/// Linking numbers of S, S′ with the loops Δ₁₂₃, Δ′₁₂₃ in an embedding of K₀.
pub fn fkt_prop_link() -> LinkingForm {
    LinkingForm {
        lambda: vec![
            ("S".into(), "D123".into(), 1),
            ("S".into(), "D123p".into(), 0),
            ("Sp".into(), "D123".into(), 0),
            ("Sp".into(), "D123p".into(), 1),
        ],
    }
}

pub const LINKING_NAMES: &[&str] = &["fkt_prop_link"];

pub fn named_linking_form(name: &str) -> Result<LinkingForm> {
    match name {
        "fkt_prop_link" => Ok(fkt_prop_link()),
        _ => Err(Error::validation(format!("unknown built-in linking form {name:?}"))),
    }
}

/// Layouts of the sphere-sphere-torus instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyntheticConfig {
    /// Both spheres far from the torus.
    Unlinked,
    /// A links the first loop, B the second; A×B uses a separate map.
    Linked,
    /// A links the second loop, B the first; A×B uses a separate map.
    Swapped,
    /// One embedding; both spheres link the first loop.
    SingleMap,
}

pub const SYNTHETIC_CONFIGS: [SyntheticConfig; 4] =
    [SyntheticConfig::Unlinked, SyntheticConfig::Linked, SyntheticConfig::Swapped, SyntheticConfig::SingleMap];

impl SyntheticConfig {
    pub fn name(self) -> &'static str {
        match self {
            SyntheticConfig::Unlinked => "unlinked",
            SyntheticConfig::Linked => "linked",
            SyntheticConfig::Swapped => "swapped",
            SyntheticConfig::SingleMap => "single_map",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        SYNTHETIC_CONFIGS
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown synthetic configuration {s:?}")))
    }
}

/// Octahedron with center `c` and semi-axes along the given coordinate axes.
fn place_octahedron(f: &mut BTreeMap<Vertex, Vec<Q>>, b: Vertex, c: [i64; 4], axes: [(usize, i64); 3]) {
    for (k, (ax, r)) in axes.into_iter().enumerate() {
        for (s, v) in [(1, b + 2 * k as Vertex), (-1, b + 2 * k as Vertex + 1)] {
            let mut p: Vec<Q> = c.iter().map(|&x| q(x)).collect();
            p[ax] += q(s * r);
            f.insert(v, p);
        }
    }
}

/// Sphere in the hyperplane x₂ = 0 around (x₁, 0, 0, 0); it meets the first loop once when x₁ = 5.
fn sphere_first(f: &mut BTreeMap<Vertex, Vec<Q>>, b: Vertex, x1: i64) {
    place_octahedron(f, b, [x1, 0, 0, 0], [(0, 2), (2, 20), (3, 22)]);
}

/// Sphere in the hyperplane x₄ = 0 around (x₁, 0, 5, 0); it meets the second loop once when x₁ = 0.
fn sphere_second(f: &mut BTreeMap<Vertex, Vec<Q>>, b: Vertex, x1: i64) {
    place_octahedron(f, b, [x1, 0, 5, 0], [(2, 2), (0, 20), (1, 22)]);
}

/// Torus vertex (i,j) goes to (P[i], P[j]) with P the triangle (8,2), (−4,6), (−4,−6).
fn torus_coords(f: &mut BTreeMap<Vertex, Vec<Q>>) {
    const P: [(i64, i64); 3] = [(8, 2), (-4, 6), (-4, -6)];
    for i in 0..3 {
        for j in 0..3 {
            f.insert(grid_vertex(i, j), vec![q(P[i].0), q(P[i].1), q(P[j].0), q(P[j].1)]);
        }
    }
}

/// Small fixed offsets that break the parallel faces of octahedra and of the product torus.
fn perturb(f: &mut BTreeMap<Vertex, Vec<Q>>) {
    for (v, p) in f.iter_mut() {
        for (k, x) in p.iter_mut().enumerate() {
            let h = (*v as i64 * 37 + k as i64 * 11 + (*v as i64 * k as i64) % 7) % 17 - 8;
            *x += qr(h, 61 + k as i64 * 2);
        }
    }
}

/// Placement of `disjoint_sphere_sphere_torus` in R⁴ for a configuration.
///
/// In the linked layouts the two spheres cross each other, so cells of A×B are
/// evaluated with a second map in which B is translated far away.
pub fn synthetic_placement(cfg: SyntheticConfig) -> Placement {
    let mut f = BTreeMap::new();
    torus_coords(&mut f);
    let mut far = None;
    match cfg {
        SyntheticConfig::Unlinked => {
            sphere_first(&mut f, 0, 200);
            sphere_first(&mut f, 6, -200);
        }
        SyntheticConfig::SingleMap => {
            sphere_first(&mut f, 0, 5);
            sphere_first(&mut f, 6, -4);
        }
        SyntheticConfig::Linked | SyntheticConfig::Swapped => {
            let (a, b) = if cfg == SyntheticConfig::Linked { (0, 6) } else { (6, 0) };
            sphere_first(&mut f, a, 5);
            sphere_second(&mut f, b, 0);
            let mut g = f.clone();
            if cfg == SyntheticConfig::Linked {
                sphere_second(&mut g, 6, 1000);
            } else {
                sphere_first(&mut g, 6, 1000);
            }
            far = Some(g);
        }
    }
    perturb(&mut f);
    if let Some(g) = far.as_mut() {
        perturb(g);
    }
    let base = PLMap::new(4, f).unwrap();
    let mut p = Placement::single(base);
    if let Some(g) = far {
        let a: BTreeSet<Vertex> = (0..6).collect();
        let b: BTreeSet<Vertex> = (6..12).collect();
        p.overrides.push((a, b, PLMap::new(4, g).unwrap()));
    }
    p
}

/// A direction avoiding the degenerate positions of the synthetic placements.
pub fn synthetic_direction() -> Vec<Q> {
    vec![qr(1, 1), qr(3, 7), qr(5, 11), qr(7, 13)]
}
