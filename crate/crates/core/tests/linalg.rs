use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use obstructa::zlinalg::*;
use proptest::prelude::*;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Determinant by cofactor expansion; independent of the library's elimination.
fn det_cofactor(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<i64>> = a[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
        let term = BigInt::from(a[0][j]) * det_cofactor(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

/// Elementary divisors from gcds of k×k minors: d_k = D_k / D_{k−1}.
fn divisors_by_minors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let (r, c) = (a.len(), a[0].len());
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let m: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&det_cofactor(&m));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

#[test]
fn snf_of_known_matrix() {
    let a = SparseMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let r = snf(&a);
    assert!(r.verify());
    assert_eq!(r.divisors, big(&[2, 6, 12]));
}

#[test]
fn snf_of_zero_and_empty() {
    let z = SparseMatrix::zeros(3, 2);
    assert_eq!(snf(&z).rank, 0);
    assert!(elementary_divisors(&SparseMatrix::zeros(0, 4)).is_empty());
}

#[test]
fn determinant_matches_cofactor() {
    let a = vec![vec![3, 1, -2], vec![0, 5, 7], vec![-4, 2, 1]];
    let dense: Vec<Vec<BigInt>> = a.iter().map(|r| big(r)).collect();
    assert_eq!(det(&dense), det_cofactor(&a));
}

#[test]
fn solve_feasible_and_infeasible() {
    let a = SparseMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
    match solve_integer(&a, &big(&[4, 9])).unwrap() {
        SolveOutcome::Solution(x) => assert_eq!(x, big(&[2, 3])),
        other => panic!("expected a solution, got {other:?}"),
    }
    match solve_integer(&a, &big(&[1, 0])).unwrap() {
        SolveOutcome::Infeasible(rec) => {
            assert!(rec.verify(&a, &big(&[1, 0])));
            assert!(!rec.verify(&a, &big(&[2, 0])));
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
}

#[test]
fn solve_rejects_rational_only_solution() {
    // x + y = 1, x − y = 0 has only x = y = 1/2.
    let a = SparseMatrix::from_i64(&[vec![1, 1], vec![1, -1]]);
    assert!(matches!(solve_integer(&a, &big(&[1, 0])).unwrap(), SolveOutcome::Infeasible(_)));
}

#[test]
fn rhs_length_is_validated() {
    let a = SparseMatrix::from_i64(&[vec![1, 1]]);
    assert!(solve_integer(&a, &big(&[1, 2])).is_err());
}

#[test]
fn cohomology_of_circle_boundary() {
    // Triangle boundary: δ⁰ from 3 vertices to 3 edges.
    let d0 = SparseMatrix::from_i64(&[vec![-1, 1, 0], vec![0, -1, 1], vec![-1, 0, 1]]);
    let h1 = cohomology(Some(&d0), None, 3);
    assert_eq!(h1.free_rank, 1);
    assert!(h1.torsion.is_empty());
}

#[test]
fn tampered_certificates_fail() {
    let a = SparseMatrix::from_i64(&[vec![1, 0], vec![1, 1], vec![0, 1]]);
    let x = big(&[2, -1]);
    let b = a.mul_vec(&x).unwrap();
    let mut cert = Certificate {
        kind: CertificateKind::ZeroWithPrimitive,
        subject: "test".into(),
        payload: Payload::Primitive { coboundary: a.clone(), cocycle: b, primitive: x },
    };
    cert.verify().unwrap();
    if let Payload::Primitive { primitive, .. } = &mut cert.payload {
        primitive[0] += 1;
    }
    assert!(cert.verify().is_err());
}

#[test]
fn kind_must_match_payload() {
    let cert = Certificate {
        kind: CertificateKind::NonzeroByPairing,
        subject: "test".into(),
        payload: Payload::Primitive { coboundary: SparseMatrix::zeros(1, 0), cocycle: big(&[0]), primitive: vec![] },
    };
    assert!(cert.verify().is_err());
}

#[test]
fn certificate_json_roundtrip() {
    let cert = Certificate {
        kind: CertificateKind::NonzeroByPairing,
        subject: "k".into(),
        payload: Payload::Kunneth {
            x1: BigInt::from(0),
            x2: BigInt::from(1),
            y1: BigInt::from(1),
            y2: BigInt::from(0),
            value: BigInt::from(-1),
        },
    };
    let s = serde_json::to_string(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cert);
    back.verify().unwrap();
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_agrees_with_minor_gcds(a in small_matrix()) {
        let m = SparseMatrix::from_i64(&a);
        let r = snf(&m);
        prop_assert!(r.verify());
        let expect = divisors_by_minors(&a);
        let got: Vec<BigInt> = r.divisors.iter().map(|d| d.abs()).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn solve_recovers_consistent_systems(a in small_matrix(), seed in prop::collection::vec(-5i64..6, 3)) {
        let m = SparseMatrix::from_i64(&a);
        let x: Vec<BigInt> = seed.iter().take(m.cols()).map(|&v| BigInt::from(v)).chain(std::iter::repeat(BigInt::zero())).take(m.cols()).collect();
        let b = m.mul_vec(&x).unwrap();
        match solve_integer(&m, &b).unwrap() {
            SolveOutcome::Solution(y) => prop_assert_eq!(m.mul_vec(&y).unwrap(), b),
            SolveOutcome::Infeasible(_) => prop_assert!(false, "consistent system reported infeasible"),
        }
    }

    #[test]
    fn solve_outcomes_always_verify(a in small_matrix(), rhs in prop::collection::vec(-9i64..10, 3)) {
        let m = SparseMatrix::from_i64(&a);
        let b: Vec<BigInt> = rhs.iter().take(m.rows()).map(|&v| BigInt::from(v)).chain(std::iter::repeat(BigInt::zero())).take(m.rows()).collect();
        match solve_integer(&m, &b).unwrap() {
            SolveOutcome::Solution(y) => prop_assert_eq!(m.mul_vec(&y).unwrap(), b),
            SolveOutcome::Infeasible(rec) => prop_assert!(rec.verify(&m, &b)),
        }
    }
}
