use num_bigint::BigInt;
use num_traits::Zero;
use obstructa::builtins::*;
use obstructa::chain::Chain;
use obstructa::deleted_product::*;
use obstructa::equivariant::*;
use obstructa::simplicial::{validate_complex, Simplex, SimplicialComplex};
use obstructa::staircase::*;
use obstructa::Error;
use proptest::prelude::*;
use std::rc::Rc;

fn is_zero_product(a: &obstructa::zlinalg::SparseMatrix, b: &obstructa::zlinalg::SparseMatrix) -> bool {
    a.matmul(b).unwrap().is_zero()
}

#[test]
fn builtin_counts() {
    assert_eq!(sk2_delta6().counts(), vec![7, 21, 35]);
    assert_eq!(g7().counts(), vec![7, 21, 34]);
    assert_eq!(k5().counts(), vec![5, 10]);
    let k = k_fkt();
    assert_eq!(k.simplices(2).len(), 34 * 2 + 36);
    assert_eq!(massey_toy().counts(), vec![12, 12, 4]);
}

#[test]
fn validation_report_lists_problems() {
    let r = validate_complex(&[vec![0, 1, 2], vec![0, 1], vec![0, 1]]);
    assert!(!r.valid);
    assert!(!r.missing_faces.is_empty());
    assert_eq!(r.duplicates, vec![vec![0, 1]]);
    let ok = validate_complex(&[vec![0], vec![1], vec![0, 1]]);
    assert!(ok.valid);
}

#[test]
fn complex_json_roundtrip() {
    let c = disjoint_sphere_sphere_torus();
    let j = serde_json::to_string(&c.to_json()).unwrap();
    let back = SimplicialComplex::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back.counts(), c.counts());
    assert_eq!(back.tags(), c.tags());
}

#[test]
fn tag_cycles_are_cycles() {
    let c = k_fkt();
    for t in ["S", "Sp", "T", "D123", "D123p"] {
        let z = c.tag_cycle(t).unwrap();
        assert!(SimplicialComplex::boundary(&z).is_empty(), "{t}");
    }
    let s = disjoint_sphere_sphere_torus();
    for t in ["A", "B", "T", "g1", "g2"] {
        assert!(SimplicialComplex::boundary(&s.tag_cycle(t).unwrap()).is_empty(), "{t}");
    }
}

#[test]
fn commutator_disk_closes_to_torus() {
    // Every edge of the 36 triangles is shared by exactly two of them.
    let tris = commutator_triangles();
    let mut edges = std::collections::BTreeMap::new();
    for t in &tris {
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            let e = (t[a].min(t[b]), t[a].max(t[b]));
            *edges.entry(e).or_insert(0) += 1;
        }
    }
    assert!(edges.values().all(|&n| n == 2));
    // χ = V − E + F = 0.
    let verts: std::collections::BTreeSet<u32> = tris.iter().flatten().copied().collect();
    assert_eq!(verts.len() as i64 - edges.len() as i64 + tris.len() as i64, 0);
}

#[test]
fn k5_census_has_thirty_top_cells() {
    let dp = DeletedProduct::build(&k5(), 2, 10_000).unwrap();
    // Ordered pairs of disjoint edges: 10 edges, each disjoint from 3 others.
    assert_eq!(dp.census(), vec![20, 60, 30]);
    assert_eq!(count_cells(&k5(), 2, usize::MAX), 110);
}

#[test]
fn size_guard_reports_exact_count() {
    match DeletedProduct::build(&k5(), 2, 50) {
        Err(Error::SizeGuard { count, .. }) => assert_eq!(count, 110),
        other => panic!("expected a size-guard error, got {other:?}"),
    }
}

#[test]
fn triangle_configuration_space_is_a_hexagon() {
    let c = SimplicialComplex::from_maximal("tri", vec![vec![0, 1, 2]]).unwrap();
    let dp = DeletedProduct::build(&c, 2, 1000).unwrap();
    assert_eq!(dp.census(), vec![6, 6]);
}

#[test]
fn koszul_signs_are_a_homomorphism() {
    let dims = [1usize, 2, 3];
    for g in permutations(3) {
        for h in permutations(3) {
            let hd: Vec<usize> = {
                let mut v = vec![0; 3];
                for i in 0..3 {
                    v[h[i]] = dims[i];
                }
                v
            };
            let lhs = koszul_sign(&compose(&g, &h), &dims);
            let rhs = koszul_sign(&h, &dims) * koszul_sign(&g, &hd);
            assert_eq!(lhs, rhs, "{g:?} {h:?}");
        }
    }
}

#[test]
fn equivariant_cohomology_of_k5_in_top_degree() {
    let dp = DeletedProduct::build(&k5(), 2, 10_000).unwrap();
    let ec = EquivariantComplex::new(&dp, SignCharacter::SignPow(2)).unwrap();
    assert_eq!(ec.orbit_count(2), 15);
    let h = ec.cohomology(2);
    assert_eq!(h.free_rank, 0);
    assert_eq!(h.torsion, vec![BigInt::from(2)]);
}

#[test]
fn reduce_and_expand_are_inverse() {
    let dp = DeletedProduct::build(&k5(), 2, 10_000).unwrap();
    let ec = EquivariantComplex::new(&dp, SignCharacter::Sign).unwrap();
    let vals: Vec<BigInt> = (0..ec.orbit_count(1)).map(|i| BigInt::from(i as i64 - 7)).collect();
    let full = ec.expand_cochain(1, &vals);
    assert_eq!(ec.reduce_cochain(&full).unwrap(), vals);
    let mut broken = full.clone();
    broken.add_term(dp.cells(1)[0].clone(), BigInt::from(1));
    assert!(ec.reduce_cochain(&broken).is_err());
}

#[test]
fn chain_reduction_preserves_pairings() {
    let dp = DeletedProduct::build(&k5(), 2, 10_000).unwrap();
    let ec = EquivariantComplex::new(&dp, SignCharacter::Trivial).unwrap();
    let vals: Vec<BigInt> = (0..ec.orbit_count(2)).map(|i| BigInt::from((i * 3 % 5) as i64 - 2)).collect();
    let full = ec.expand_cochain(2, &vals);
    let z = Chain::from_terms(2, dp.cells(2).iter().enumerate().map(|(i, c)| (c.clone(), BigInt::from((i % 4) as i64 - 1))));
    let direct: BigInt = z.iter().map(|(c, v)| full.get(c) * v).sum();
    let zbar = ec.reduce_chain(&z).unwrap();
    assert_eq!(obstructa::zlinalg::dot(&vals, &zbar), direct);
    let local = reduce_chain_local(&z, SignCharacter::Trivial);
    for (rep, v) in local {
        let (o, _) = ec.locate(&rep).unwrap();
        assert_eq!(zbar[o], v);
    }
}

fn multinomial(parts: &[usize]) -> usize {
    let n: usize = parts.iter().sum();
    let mut r = 1usize;
    let mut k = 0;
    for &p in parts {
        for i in 1..=p {
            k += 1;
            r = r * k / i;
        }
    }
    debug_assert_eq!(k, n);
    r
}

#[test]
fn staircase_top_simplex_counts_are_multinomial() {
    let c = massey_toy();
    let cell = ProductCell::new(c.simplices(2)[..3].to_vec()).unwrap();
    assert_eq!(simplices_with_support(&cell, 6).len(), multinomial(&[2, 2, 2]));
    let mixed = ProductCell::new(vec![Simplex::new(vec![0, 1]).unwrap(), Simplex::new(vec![3, 4, 5]).unwrap()]).unwrap();
    assert_eq!(simplices_with_support(&mixed, 3).len(), multinomial(&[1, 2]));
}

#[test]
fn fundamental_chain_boundary_is_the_boundary_of_the_cell() {
    let c = massey_toy();
    let cell = ProductCell::new(c.simplices(2)[..2].to_vec()).unwrap();
    let lhs = chain_boundary(&fundamental_chain(&cell).into_iter().map(|(s, v)| (v, BigInt::from(s))).collect::<Vec<_>>(), 2);
    let mut rhs: std::collections::BTreeMap<Vec<u32>, BigInt> = Default::default();
    for (sign, f) in cell.boundary() {
        for (s, v) in fundamental_chain(&f) {
            *rhs.entry(v).or_insert_with(BigInt::zero) += BigInt::from(sign * s);
        }
    }
    rhs.retain(|_, v| !v.is_zero());
    assert_eq!(lhs, rhs.into_iter().collect::<Vec<_>>());
}

#[test]
fn staircase_boundary_squares_to_zero() {
    let dp = DeletedProduct::build(&massey_toy(), 2, 100_000).unwrap();
    let st = Staircase::new(&dp, 1_000_000).unwrap();
    for k in 2..=4 {
        assert!(is_zero_product(&st.boundary_matrix(k - 1).unwrap(), &st.boundary_matrix(k).unwrap()));
    }
}

fn table(st: &Staircase, arity: usize, k: usize, seed: usize) -> TableCochain {
    let mut t = TableCochain::new(arity, k);
    for (i, s) in st.simplices(k).iter().enumerate() {
        t.set(s.clone(), BigInt::from(((i * 7 + seed * 13) % 5) as i64 - 2));
    }
    t
}

#[test]
fn cup_product_satisfies_leibniz() {
    let dp = DeletedProduct::build(&massey_toy(), 2, 100_000).unwrap();
    let st = Staircase::new(&dp, 1_000_000).unwrap();
    let a: CochainRef = Rc::new(table(&st, 2, 1, 1));
    let b: CochainRef = Rc::new(table(&st, 2, 2, 2));
    let lhs = coboundary(cup(a.clone(), b.clone()).unwrap());
    let rhs = lincomb(vec![
        (BigInt::from(1), cup(coboundary(a.clone()), b.clone()).unwrap()),
        (BigInt::from(-1), cup(a, coboundary(b)).unwrap()),
    ])
    .unwrap();
    for s in st.simplices(4) {
        assert_eq!(lhs.value(s), rhs.value(s));
    }
}

#[test]
fn pullback_commutes_with_coboundary() {
    let c = massey_toy();
    let dp2 = DeletedProduct::build(&c, 2, 100_000).unwrap();
    let st2 = Staircase::new(&dp2, 1_000_000).unwrap();
    let dp3 = DeletedProduct::build(&c, 3, 100_000).unwrap();
    let st3 = Staircase::new(&dp3, 10_000_000).unwrap();
    let u: CochainRef = Rc::new(table(&st2, 2, 2, 3));
    for idx in [[0, 1], [1, 2], [2, 0]] {
        let a = coboundary(pullback(u.clone(), &idx, 3).unwrap());
        let b = pullback(coboundary(u.clone()), &idx, 3).unwrap();
        for s in st3.simplices(3).iter().take(2000) {
            assert_eq!(a.value(s), b.value(s));
        }
    }
}

#[test]
fn cross_chain_of_cycles_is_a_cycle() {
    let c = disjoint_sphere_sphere_torus();
    let (a, t) = (c.tag_cycle("A").unwrap(), c.tag_cycle("g1").unwrap());
    let z = cross_chain(&[&a, &t]).unwrap();
    assert!(!z.is_empty());
    assert!(chain_boundary(&z, 2).is_empty());
}

fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0u32..8, 1..4), 1..9).prop_map(|gens| {
        SimplicialComplex::from_maximal("random", gens.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simplicial_boundary_squares_to_zero(c in random_complex()) {
        let d = c.dim().unwrap();
        for k in 2..=d {
            prop_assert!(is_zero_product(&c.boundary_matrix(k - 1).unwrap(), &c.boundary_matrix(k).unwrap()));
        }
    }

    #[test]
    fn deleted_product_boundary_squares_to_zero(c in random_complex(), n in 2usize..4) {
        let dp = DeletedProduct::build(&c, n, 200_000).unwrap();
        if let Some(d) = dp.dim() {
            for k in 2..=d {
                prop_assert!(is_zero_product(&dp.boundary_matrix(k - 1).unwrap(), &dp.boundary_matrix(k).unwrap()));
            }
        }
    }

    #[test]
    fn action_is_free_and_commutes_with_boundary(c in random_complex(), n in 2usize..4) {
        let dp = DeletedProduct::build(&c, n, 200_000).unwrap();
        prop_assert!(dp.action_is_free());
        if let Some(d) = dp.dim() {
            let z = Chain::from_terms(d, dp.cells(d).iter().enumerate().map(|(i, c)| (c.clone(), BigInt::from(i as i64 % 3 - 1))));
            for g in permutations(n) {
                let lhs = dp.boundary(&dp.act(&g, &z).unwrap());
                let rhs = dp.act(&g, &dp.boundary(&z)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn equivariant_coboundary_squares_to_zero(c in random_complex(), n in 2usize..4, pow in 0u32..3) {
        let dp = DeletedProduct::build(&c, n, 200_000).unwrap();
        for chi in [SignCharacter::Trivial, SignCharacter::Sign, SignCharacter::SignPow(pow)] {
            let ec = EquivariantComplex::new(&dp, chi).unwrap();
            if let Some(top) = ec.top_degree() {
                for k in 0..top.saturating_sub(1) {
                    prop_assert!(is_zero_product(&ec.coboundary(k + 1), &ec.coboundary(k)));
                }
            }
        }
    }
}
