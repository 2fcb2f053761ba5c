use num_bigint::BigInt;
use num_traits::{One, Zero};
use obstructa::builtins::*;
use obstructa::deleted_product::{compose, permutations};
use obstructa::simplicial::{Simplex, SimplicialComplex};
use obstructa::trees::*;
use obstructa::whitney::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeMap;

/// Unrooted trivalent trees on n labelled leaves: leaf n+1 can be grafted onto any of 2n−3 edges.
fn tree_count_by_grafting(leaves: usize) -> usize {
    let mut t = 1;
    for n in 3..leaves {
        t *= 2 * n - 3;
    }
    t
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn tree(v: serde_json::Value) -> Tree {
    Tree::from_json(&v).unwrap()
}

#[test]
fn tree_group_ranks_are_factorials_and_torsion_free() {
    for m in 1..=4 {
        let g = TreeGroup::new(m, 100_000).unwrap();
        let s = g.summary();
        assert_eq!(s.generators, tree_count_by_grafting(m + 2), "m = {m}");
        assert_eq!(s.rank, factorial(m), "m = {m}");
        assert!(s.torsion.is_empty(), "m = {m}");
        assert_eq!(g.basis.len(), s.rank);
    }
    let ranks: Vec<usize> = (1..=3).map(|m| TreeGroup::new(m, 1000).unwrap().summary().rank).collect();
    assert_eq!(ranks, vec![1, 2, 6]);
}

#[test]
fn relations_reduce_to_zero() {
    for m in 1..=4 {
        let g = TreeGroup::new(m, 100_000).unwrap();
        let dense = g.relations.to_dense();
        for row in dense {
            let mut acc = vec![BigInt::zero(); g.basis.len()];
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    for (a, x) in acc.iter_mut().zip(g.reduce_bracket(&g.generators[j])) {
                        *a += c * x;
                    }
                }
            }
            assert!(acc.iter().all(|x| x.is_zero()));
        }
    }
}

#[test]
fn basis_reduces_to_unit_vectors() {
    let g = TreeGroup::new(3, 1000).unwrap();
    for (i, b) in g.basis.iter().enumerate() {
        let (s, n) = b.normalize();
        let v = g.reduce_bracket(&n);
        for (j, x) in v.iter().enumerate() {
            assert_eq!(*x, BigInt::from(if i == j { s } else { 0 }));
        }
    }
}

#[test]
fn antisymmetry_flips_the_sign() {
    let g = TreeGroup::new(1, 10).unwrap();
    let a = g.reduce_tree(&tree(json!([1, 2, 3]))).unwrap();
    let b = g.reduce_tree(&tree(json!([2, 1, 3]))).unwrap();
    assert_eq!(a, vec![BigInt::one()]);
    assert_eq!(b, vec![-BigInt::one()]);
    // Cyclic rotations are the same tree.
    assert_eq!(g.reduce_tree(&tree(json!([3, 1, 2]))).unwrap(), a);
}

#[test]
fn ihx_holds_in_the_quotient() {
    // IHX with the three orientations chosen so that I + H + X = 0.
    let g = TreeGroup::new(2, 100).unwrap();
    let i = g.reduce_tree(&tree(json!([[1, 2], 3, 4]))).unwrap();
    let h = g.reduce_tree(&tree(json!([[2, 3], 1, 4]))).unwrap();
    let x = g.reduce_tree(&tree(json!([[3, 1], 2, 4]))).unwrap();
    let sum: Vec<BigInt> = (0..i.len()).map(|k| &i[k] + &h[k] + &x[k]).collect();
    assert!(sum.iter().all(|v| v.is_zero()), "{i:?} {h:?} {x:?}");
}

#[test]
fn action_matrices_compose() {
    let g = TreeGroup::new(2, 100).unwrap();
    let perms = permutations(4);
    let mats: Vec<_> = perms.iter().map(|p| g.action_matrix(p).unwrap()).collect();
    let mul = |a: &Vec<Vec<BigInt>>, b: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..a.len()).map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
    };
    for (x, p) in perms.iter().enumerate() {
        for (y, h) in perms.iter().enumerate() {
            let gh = compose(p, h);
            let z = perms.iter().position(|q| *q == gh).unwrap();
            assert_eq!(mats[z], mul(&mats[x], &mats[y]));
        }
    }
}

#[test]
fn malformed_trees_are_rejected() {
    assert!(Tree::from_json(&json!([1, 1, 2])).is_err());
    assert!(Tree::from_json(&json!([[1, 2, 3], 4, 5])).is_err());
    assert!(Tree::from_json(&json!([[1, 2], 3])).is_err());
    let g = TreeGroup::new(1, 10).unwrap();
    assert!(g.reduce_tree(&tree(json!([1, 2, 4]))).is_err());
    assert!(TreeGroup::new(6, 100).is_err());
}

#[test]
fn fkt_w3_is_one_orbit_with_unit_value() {
    let c = k_fkt();
    let wd = fkt_datum(&c, ["S", "Sp", "T"]).unwrap();
    let w = w3_cocycle(&c, &wd).unwrap();
    let orbits = w.orbit_support();
    let nonzero: Vec<_> = orbits.iter().filter(|(_, v)| !v.is_zero()).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0].1.magnitude(), &1u32.into());
    assert_eq!(w.values.len(), 6);
    let z = product_cycle(&c, ["S", "Sp", "T"]).unwrap();
    let cert = w3_pairing_certificate(&w, &z, "w3").unwrap().expect("nonzero pairing");
    assert_eq!(cert.pairing_value().map(|v| v.magnitude().clone()), Some(1u32.into()));
}

fn stabilization_candidates(c: &SimplicialComplex) -> Vec<(usize, usize, Simplex)> {
    let tris = c.simplices(2);
    let mut out = Vec::new();
    for (i, a) in tris.iter().enumerate() {
        for (j, b) in tris.iter().enumerate().skip(i + 1) {
            if !a.is_disjoint(b) {
                continue;
            }
            for e in c.simplices(1) {
                if e.is_disjoint(a) && e.is_disjoint(b) {
                    let touches = tris.iter().any(|r| r.contains(e) && r.is_disjoint(a) && r.is_disjoint(b));
                    if touches {
                        out.push((i, j, e.clone()));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn stabilization_changes_w3_by_an_elementary_coboundary() {
    let c = k_fkt();
    let wd = fkt_datum(&c, ["S", "Sp", "T"]).unwrap();
    let w0 = w3_cocycle(&c, &wd).unwrap();
    let cands = stabilization_candidates(&c);
    assert!(!cands.is_empty());
    for (s1, s2, nu) in cands.iter().step_by(cands.len() / 7 + 1) {
        for sign in [1, -1] {
            let w1 = w3_cocycle(&c, &stabilize(&c, &wd, *s1, *s2, nu, sign).unwrap()).unwrap();
            let delta = elementary_coboundary(&c, *s1, *s2, nu).unwrap().scale(&BigInt::from(sign));
            assert!(!delta.is_empty());
            assert_eq!(w1.sub(&w0), delta);
        }
    }
}

#[test]
fn five_random_stabilizations_preserve_the_certificate() {
    let c = k_fkt();
    let mut wd = fkt_datum(&c, ["S", "Sp", "T"]).unwrap();
    let w0 = w3_cocycle(&c, &wd).unwrap();
    let z = product_cycle(&c, ["S", "Sp", "T"]).unwrap();
    let v0 = w3_pairing_certificate(&w0, &z, "w3").unwrap().unwrap().pairing_value().cloned();
    let cands = stabilization_candidates(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut expected = w0.values.clone();
    for _ in 0..5 {
        let (s1, s2, nu) = &cands[rng.gen_range(0..cands.len())];
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        wd = stabilize(&c, &wd, *s1, *s2, nu, sign).unwrap();
        expected = expected.add(&elementary_coboundary(&c, *s1, *s2, nu).unwrap().scale(&BigInt::from(sign)));
    }
    let w5 = w3_cocycle(&c, &wd).unwrap();
    assert_eq!(w5.values, expected);
    let cert = w3_pairing_certificate(&w5, &z, "w3").unwrap().unwrap();
    cert.verify().unwrap();
    assert_eq!(cert.pairing_value().cloned(), v0);
}

#[test]
fn splitting_leaves_w3_unchanged() {
    let c = k_fkt();
    let cands = stabilization_candidates(&c);
    let (s1, s2, nu) = &cands[0];
    let wd = stabilize(&c, &fkt_datum(&c, ["S", "Sp", "T"]).unwrap(), *s1, *s2, nu, 1).unwrap();
    let split = split_fully(&wd).unwrap();
    split.validate(&c).unwrap();
    for p in &split.pairs {
        for d in &p.disks {
            assert_eq!(d.meets.values().map(|v| v.abs()).sum::<i64>(), 1);
        }
    }
    assert_eq!(w3_cocycle(&c, &split).unwrap().values, w3_cocycle(&c, &wd).unwrap().values);
    let bad: BTreeMap<usize, i64> = BTreeMap::new();
    assert!(split_disk(&wd, 0, 0, &bad).is_err());
}

#[test]
fn whitney_json_roundtrip() {
    let c = k_fkt();
    let wd = fkt_datum(&c, ["S", "Sp", "T"]).unwrap();
    let back = WhitneyDatum::from_json_str(&wd.to_json_string()).unwrap();
    assert_eq!(back, wd);
    let mut broken = wd.clone();
    broken.pairs[0].points[0].disk = 5;
    assert!(broken.validate(&c).is_err());
}

#[test]
fn order_one_towers_reproduce_w3() {
    let c = k_fkt();
    let cands = stabilization_candidates(&c);
    let (s1, s2, nu) = &cands[cands.len() / 2];
    let wd = stabilize(&c, &fkt_datum(&c, ["S", "Sp", "T"]).unwrap(), *s1, *s2, nu, -1).unwrap();
    let td = towers_from_whitney(&c, &wd, 10_000_000).unwrap();
    let wn = wn_cochain(&c, &td, 10_000_000).unwrap();
    let w3 = w3_cocycle(&c, &wd).unwrap();
    let as_int: BTreeMap<_, _> = wn.values.iter().map(|(k, v)| (k.clone(), BigInt::from(v.as_integer().unwrap()))).collect();
    let expect: BTreeMap<_, _> = w3.values.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    assert_eq!(as_int, expect);
    assert!(check_action_two_ways(&wn.group, &td).unwrap());
}

fn toy_towers() -> TowerDatum {
    TowerDatum::from_json_str(
        r#"{"arity":4,"towers":[{"cells":[0,1,2,3],"points":[
            {"sign":1,"tree":[[1,2],3,4]},
            {"sign":1,"tree":[[1,3],2,4]},
            {"sign":-1,"tree":[[2,4],1,3]}]}]}"#,
    )
    .unwrap()
}

#[test]
fn order_two_towers_on_the_toy_complex() {
    let c = wn_toy();
    let td = toy_towers();
    assert_eq!(td.order(), 2);
    let wn = wn_cochain(&c, &td, 100_000).unwrap();
    assert_eq!(wn.values.len(), 24);
    assert!(check_action_two_ways(&wn.group, &td).unwrap());
    let direct = tau_n(&wn.group, &td.towers[0]).unwrap();
    assert!(!direct.is_zero());
    assert!(wn.values.values().all(|v| v.coords.len() == 2));
}

#[test]
fn missing_towers_are_reported() {
    let c = wn_toy();
    let td = TowerDatum { arity: 4, towers: vec![] };
    assert_eq!(wn_cochain(&c, &td, 100_000).unwrap_err().exit_code(), 2);
    assert_eq!(nonadjacent_tuples(&c, 4, 100).unwrap(), vec![vec![0, 1, 2, 3]]);
}

fn random_tree(leaves: Vec<u32>, seed: u64) -> serde_json::Value {
    // Random planar bracket on the first n−1 leaves, closed into a cyclic top vertex with the last.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: Vec<serde_json::Value> = leaves[..leaves.len() - 1].iter().map(|&l| json!(l)).collect();
    while parts.len() > 2 {
        let i = rng.gen_range(0..parts.len());
        let a = parts.remove(i);
        let j = rng.gen_range(0..parts.len());
        let b = parts.remove(j);
        parts.push(json!([a, b]));
    }
    json!([parts[0], parts[1], leaves[leaves.len() - 1]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_agrees_with_the_action(m in 1usize..4, seed in any::<u64>(), perm_seed in any::<u64>()) {
        let g = TreeGroup::new(m, 1000).unwrap();
        let n = m + 2;
        let mut leaves: Vec<u32> = (1..=n as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..n).rev() {
            leaves.swap(i, rng.gen_range(0..=i));
        }
        let t = tree(random_tree(leaves, seed));
        let perms = permutations(n);
        let p = &perms[rng.gen_range(0..perms.len())];
        let direct = g.reduce_tree(&t).unwrap();
        let moved = g.reduce_tree(&t.relabel(&|l| p[l as usize - 1] as u32 + 1)).unwrap();
        let a = g.action_matrix(p).unwrap();
        let acted: Vec<BigInt> = a.iter().map(|row| row.iter().zip(&direct).map(|(x, y)| x * y).sum()).collect();
        prop_assert_eq!(moved, acted);
    }

    #[test]
    fn rerooting_preserves_the_class(m in 1usize..4, seed in any::<u64>()) {
        // The canonical form does not depend on how the tree was written down.
        let g = TreeGroup::new(m, 1000).unwrap();
        let n = m + 2;
        let t = tree(random_tree((1..=n as u32).collect(), seed));
        let (s, root, b) = t.canonical().unwrap();
        let rebuilt = Tree::from_bracket(root, &b);
        let v1 = g.reduce_tree(&t).unwrap();
        let v2: Vec<BigInt> = g.reduce_tree(&rebuilt).unwrap().into_iter().map(|x| x * s).collect();
        prop_assert_eq!(v1, v2);
    }
}

#[test]
fn library_stabilization_moves_match_the_oracle() {
    let c = k_fkt();
    assert_eq!(stabilization_moves(&c), stabilization_candidates(&c));
}

fn assert_w3_equivariant(w: &W3Cochain) {
    for (cell, v) in w.values.iter() {
        for g in permutations(3) {
            let (eps, img) = cell.act(&g);
            let chi = obstructa::equivariant::SignCharacter::Sign.value(&g);
            assert_eq!(w.values.get(&img), v * BigInt::from(chi * eps), "{cell:?} under {g:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn w3_is_equivariant_after_random_stabilizations(seed in any::<u64>(), steps in 0usize..4) {
        let c = k_fkt();
        let mut wd = fkt_datum(&c, ["S", "Sp", "T"]).unwrap();
        let cands = stabilization_candidates(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..steps {
            let (s1, s2, nu) = &cands[rng.gen_range(0..cands.len())];
            wd = stabilize(&c, &wd, *s1, *s2, nu, if rng.gen_bool(0.5) { 1 } else { -1 }).unwrap();
        }
        assert_w3_equivariant(&w3_cocycle(&c, &wd).unwrap());
    }
}
