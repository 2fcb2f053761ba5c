use super::snf::{DenseSnf, Eliminator};
use super::{dot, SparseMatrix};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Row combination w with wᵀA ≡ 0 and wᵀb ≢ 0 modulo `modulus` (0 means exact equality).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfeasibilityRecord {
    #[serde(with = "crate::chain::bigjson::vec")]
    pub witness: Vec<BigInt>,
    #[serde(with = "crate::chain::bigjson")]
    pub modulus: BigInt,
}

impl InfeasibilityRecord {
    /// Rechecks the divisibility obstruction against A and b.
    pub fn verify(&self, a: &SparseMatrix, b: &[BigInt]) -> bool {
        let Ok(wa) = a.vec_mul(&self.witness) else { return false };
        if b.len() != a.rows() {
            return false;
        }
        let wb = dot(&self.witness, b);
        if self.modulus.is_zero() {
            wa.iter().all(|x| x.is_zero()) && !wb.is_zero()
        } else {
            wa.iter().all(|x| x.mod_floor(&self.modulus).is_zero())
                && !wb.mod_floor(&self.modulus).is_zero()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Vec<BigInt>),
    Infeasible(InfeasibilityRecord),
}

/// Solves Ax = b over the integers, or returns a verified obstruction.
///
/// Unit pivots are eliminated sparsely first; the remaining core goes through
/// a dense Smith reduction whose row transform yields the witness.
pub fn solve_integer(a: &SparseMatrix, b: &[BigInt]) -> Result<SolveOutcome> {
    if b.len() != a.rows() {
        return Err(Error::validation(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let mut e = Eliminator::new(a, Some(b.to_vec()), true);
    e.run();
    let (rows, cols) = e.core();
    let core = e.core_dense(&rows, &cols);
    let rhs = e.rhs.clone().unwrap();
    let core_b: Vec<BigInt> = rows.iter().map(|r| rhs[*r].clone()).collect();

    let mut s = DenseSnf::new(core, cols.len(), true);
    s.run();
    let u = s.u.as_ref().unwrap();
    let v = s.v.as_ref().unwrap();
    let ub: Vec<BigInt> = u.iter().map(|row| dot(row, &core_b)).collect();

    let mut bad: Option<(usize, BigInt)> = None;
    let mut y = vec![BigInt::zero(); cols.len()];
    for (t, val) in ub.iter().enumerate() {
        if t < s.rank {
            let d = &s.a[t][t];
            if !(val % d).is_zero() {
                bad = Some((t, d.clone()));
                break;
            }
            y[t] = val / d;
        } else if !val.is_zero() {
            bad = Some((t, BigInt::zero()));
            break;
        }
    }

    if let Some((t, modulus)) = bad {
        let mut w = vec![BigInt::zero(); a.rows()];
        for (k, r) in rows.iter().enumerate() {
            w[*r] = u[t][k].clone();
        }
        for op in e.ops.iter().rev() {
            let mut acc = BigInt::zero();
            for (r, m) in &op.multipliers {
                if !w[*r].is_zero() {
                    acc += &w[*r] * m;
                }
            }
            w[op.row] -= acc;
        }
        let rec = InfeasibilityRecord { witness: w, modulus };
        if !rec.verify(a, b) {
            return Err(Error::verification("internal: infeasibility witness failed its own check"));
        }
        return Ok(SolveOutcome::Infeasible(rec));
    }

    let mut x = vec![BigInt::zero(); a.cols()];
    for (k, c) in cols.iter().enumerate() {
        x[*c] = dot(&v[k], &y);
    }
    for op in e.ops.iter().rev() {
        let a_piv = &op.snapshot[&op.col];
        let mut acc = op.rhs.clone();
        for (j, val) in &op.snapshot {
            if *j != op.col && !x[*j].is_zero() {
                acc -= val * &x[*j];
            }
        }
        x[op.col] = acc * a_piv;
    }
    if a.mul_vec(&x)? != b {
        return Err(Error::verification("internal: integer solution failed back-substitution check"));
    }
    Ok(SolveOutcome::Solution(x))
}
