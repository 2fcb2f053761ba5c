use obstructa::builtins::*;
use obstructa::zlinalg::CertificateKind;
use obstructa::plgeom::*;
use obstructa::simplicial::Simplex;
use obstructa::vk::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn seg_map(pts: &[(i64, i64)]) -> PLMap {
    let coords: BTreeMap<u32, Vec<Q>> = pts.iter().enumerate().map(|(i, &(x, y))| (i as u32, vec![q(x), q(y)])).collect();
    PLMap::new(2, coords).unwrap()
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    let (ax, ay, bx, by, cx, cy) = (a.0 as i128, a.1 as i128, b.0 as i128, b.1 as i128, c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Proper crossing of segments ab and cd with the sign of det[b − a, d − c].
fn crossing_oracle(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Option<i64> {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if [o1, o2, o3, o4].contains(&0) {
        return None;
    }
    if (o1 > 0) != (o2 > 0) && (o3 > 0) != (o4 > 0) {
        let det = (b.0 - a.0) as i128 * (d.1 - c.1) as i128 - (b.1 - a.1) as i128 * (d.0 - c.0) as i128;
        Some(det.signum() as i64)
    } else {
        Some(0)
    }
}

fn edge(a: u32, b: u32) -> Simplex {
    Simplex::new(vec![a, b]).unwrap()
}

#[test]
fn crossing_segments() {
    let f = seg_map(&[(0, 0), (2, 2), (0, 2), (2, 0)]);
    let r = simplex_pair_intersection(&f, &edge(0, 1), &edge(2, 3)).unwrap();
    assert_eq!(r.total, crossing_oracle((0, 0), (2, 2), (0, 2), (2, 0)).unwrap());
    assert_eq!(r.points[0].point, vec!["1".to_string(), "1".to_string()]);
    let back = simplex_pair_intersection(&f, &edge(2, 3), &edge(0, 1)).unwrap();
    assert_eq!(back.total, -r.total);
}

#[test]
fn touching_segments_are_degenerate() {
    let f = seg_map(&[(0, 0), (2, 0), (1, 0), (1, 3)]);
    let e = simplex_pair_intersection(&f, &edge(0, 1), &edge(2, 3)).unwrap_err();
    assert_eq!(e.exit_code(), 4);
    let f = seg_map(&[(0, 0), (2, 0), (3, 0), (5, 0)]);
    assert_eq!(simplex_pair_intersection(&f, &edge(0, 1), &edge(2, 3)).unwrap_err().exit_code(), 4);
}

#[test]
fn rational_parsing() {
    assert_eq!(parse_q("6/-4").unwrap(), qr(-3, 2));
    assert_eq!(format_q(&qr(4, 2)), "2");
    assert!(parse_q("1/0").is_err());
    assert!(parse_q("x").is_err());
}

#[test]
fn map_json_accepts_integers_and_fractions() {
    let f = PLMap::from_json_str(r#"{"d":2,"coords":{"0":[1,"1/2"],"3":["-2",0]}}"#).unwrap();
    assert_eq!(f.point(0).unwrap(), &[q(1), qr(1, 2)]);
    assert_eq!(PLMap::from_json_str(&f.to_json_string()).unwrap(), f);
    assert!(PLMap::from_json_str(r#"{"d":2,"coords":{"0":[1]}}"#).is_err());
}

#[test]
fn hull_membership() {
    let pts = vec![vec![q(1), q(0)], vec![q(-1), q(1)], vec![q(-1), q(-1)]];
    assert!(origin_in_hull(&pts));
    let pts = vec![vec![q(1), q(0)], vec![q(2), q(1)]];
    assert!(!origin_in_hull(&pts));
}

#[test]
fn k5_moment_curve_has_five_crossings() {
    // Points on a parabola are in convex position: crossings are the 5 interleaved quadruples.
    let c = k5();
    let f = moment_curve_map(&c, 2, None).unwrap();
    let vc = vk_cocycle(&c, &f, 100_000).unwrap();
    assert_eq!(vc.support().len(), 5);
    assert!(vc.support().iter().all(|(_, v)| v.magnitude() == &1u32.into()));
    assert_eq!(vk_class(&vc).unwrap().kind, CertificateKind::NonzeroByInfeasibility);
}

#[test]
fn sk2_delta6_class_is_nonzero() {
    let c = sk2_delta6();
    let f = moment_curve_map(&c, 4, None).unwrap();
    let vc = vk_cocycle(&c, &f, 10_000_000).unwrap();
    let cert = vk_class(&vc).unwrap();
    assert_eq!(cert.kind, CertificateKind::NonzeroByInfeasibility);
    cert.verify().unwrap();
    assert_eq!(vc.support().len(), 7);
}

#[test]
fn g7_class_vanishes_with_checked_primitive() {
    let c = g7();
    let f = moment_curve_map(&c, 4, None).unwrap();
    let cert = vk_class(&vk_cocycle(&c, &f, 10_000_000).unwrap()).unwrap();
    assert_eq!(cert.kind, CertificateKind::ZeroWithPrimitive);
    cert.verify().unwrap();
}

#[test]
fn wrong_ambient_dimension_is_rejected() {
    let c = k5();
    let f = moment_curve_map(&c, 4, None).unwrap();
    assert_eq!(vk_cocycle(&c, &f, 100_000).unwrap_err().exit_code(), 2);
}

fn distinct_params(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::btree_set(-30i64..30, n).prop_map(|s| s.into_iter().map(q).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn segment_intersection_matches_orientation_oracle(p in prop::collection::vec((-9i64..10, -9i64..10), 4)) {
        let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
        prop_assume!(a != b && c != d);
        let f = seg_map(&p);
        let got = simplex_pair_intersection(&f, &edge(0, 1), &edge(2, 3));
        match crossing_oracle(a, b, c, d) {
            Some(s) => prop_assert_eq!(got.unwrap().total, s),
            None => {}
        }
    }

    #[test]
    fn triangle_pairs_are_symmetric_and_consistent(p in prop::collection::vec(prop::collection::vec(-6i64..7, 4), 6)) {
        let coords: BTreeMap<u32, Vec<Q>> = p.iter().enumerate().map(|(i, v)| (i as u32, v.iter().map(|&x| q(x)).collect())).collect();
        let f = PLMap::new(4, coords).unwrap();
        let s = Simplex::new(vec![0, 1, 2]).unwrap();
        let t = Simplex::new(vec![3, 4, 5]).unwrap();
        if let (Ok(a), Ok(b)) = (simplex_pair_intersection(&f, &s, &t), simplex_pair_intersection(&f, &t, &s)) {
            prop_assert_eq!(a.total, b.total);
            if a.total != 0 {
                prop_assert!(!images_disjoint(&f, &s, &t).unwrap());
            }
        }
    }

    #[test]
    fn k5_class_is_stable_under_reparametrisation(p in distinct_params(5)) {
        let (same, cert) = vk_class_stability(&k5(), None, Some(&p), 100_000).unwrap();
        prop_assert!(same);
        cert.verify().unwrap();
        let f = moment_curve_map(&k5(), 2, Some(&p)).unwrap();
        prop_assert_eq!(vk_class(&vk_cocycle(&k5(), &f, 100_000).unwrap()).unwrap().kind, CertificateKind::NonzeroByInfeasibility);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn g7_class_is_stable_under_reparametrisation(p in distinct_params(7)) {
        let (same, cert) = vk_class_stability(&g7(), None, Some(&p), 10_000_000).unwrap();
        prop_assert!(same);
        cert.verify().unwrap();
    }
}

/// Intersection numbers on every ordered cell pair, compared under the swap.
fn check_full_cocycle_equivariant(c: &obstructa::simplicial::SimplicialComplex, f: &PLMap) {
    use obstructa::deleted_product::DeletedProduct;
    use obstructa::equivariant::SignCharacter;
    let dp = DeletedProduct::build(c, 2, 1_000_000).unwrap();
    let k = 2 * c.dim().unwrap();
    let value = |cell: &obstructa::deleted_product::ProductCell| {
        simplex_pair_intersection(f, &cell.factors()[0], &cell.factors()[1]).unwrap().total
    };
    let swap = [1usize, 0];
    let chi = SignCharacter::SignPow(f.dim() as u32).value(&swap);
    for cell in dp.cells(k) {
        let (eps, img) = cell.act(&swap);
        assert_eq!(value(&img), (chi * eps) as i64 * value(cell), "{cell:?}");
    }
    let vc = vk_cocycle(c, f, 1_000_000).unwrap();
    for (rep, v) in vc.ec.reps(k).iter().zip(&vc.values) {
        assert_eq!(*v, value(rep).into());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn k5_cocycle_is_equivariant(p in distinct_params(5)) {
        check_full_cocycle_equivariant(&k5(), &moment_curve_map(&k5(), 2, Some(&p)).unwrap());
    }

    #[test]
    fn sk2_delta6_cocycle_is_equivariant(p in distinct_params(7)) {
        check_full_cocycle_equivariant(&sk2_delta6(), &moment_curve_map(&sk2_delta6(), 4, Some(&p)).unwrap());
    }
}
