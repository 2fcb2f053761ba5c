use super::{dot, InfeasibilityRecord, SparseMatrix};
use crate::chain::bigjson::Big;
use crate::deleted_product::ProductCell;
use crate::error::{Error, Result};
use crate::staircase;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    ZeroWithPrimitive,
    NonzeroByInfeasibility,
    NonzeroByPairing,
}

impl CertificateKind {
    pub fn is_nonzero(self) -> bool {
        !matches!(self, CertificateKind::ZeroWithPrimitive)
    }
}

/// A triangulation simplex (flattened vertex tuples) with an integer value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexValue {
    pub simplex: Vec<u32>,
    pub value: Big,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    /// coboundary · primitive = cocycle.
    Primitive {
        coboundary: SparseMatrix,
        #[serde(with = "crate::chain::bigjson::vec")]
        cocycle: Vec<BigInt>,
        #[serde(with = "crate::chain::bigjson::vec")]
        primitive: Vec<BigInt>,
    },
    /// coboundary · x = cocycle has no integer solution.
    Infeasibility {
        coboundary: SparseMatrix,
        #[serde(with = "crate::chain::bigjson::vec")]
        cocycle: Vec<BigInt>,
        record: InfeasibilityRecord,
    },
    /// cycleᵀ · coboundary = 0 and ⟨cocycle, cycle⟩ = value ≠ 0.
    Pairing {
        coboundary: SparseMatrix,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        next_coboundary: Option<SparseMatrix>,
        #[serde(with = "crate::chain::bigjson::vec")]
        cocycle: Vec<BigInt>,
        #[serde(with = "crate::chain::bigjson::vec")]
        cycle: Vec<BigInt>,
        #[serde(with = "crate::chain::bigjson")]
        value: BigInt,
    },
    /// Top-degree pairing on a staircase triangulation; the cycle condition is rechecked face by face.
    SimplicialPairing {
        arity: usize,
        cochain: Vec<SimplexValue>,
        cycle: Vec<SimplexValue>,
        #[serde(with = "crate::chain::bigjson")]
        value: BigInt,
    },
    /// δ(primitive) = cocycle on every simplex of the given degree carried by the listed cells.
    SimplicialPrimitive {
        arity: usize,
        degree: usize,
        cells: Vec<ProductCell>,
        cocycle: Vec<SimplexValue>,
        primitive: Vec<SimplexValue>,
    },
    /// Linking-number determinant x₁y₂ − x₂y₁.
    Kunneth {
        #[serde(with = "crate::chain::bigjson")]
        x1: BigInt,
        #[serde(with = "crate::chain::bigjson")]
        x2: BigInt,
        #[serde(with = "crate::chain::bigjson")]
        y1: BigInt,
        #[serde(with = "crate::chain::bigjson")]
        y2: BigInt,
        #[serde(with = "crate::chain::bigjson")]
        value: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subject: String,
    pub payload: Payload,
}

fn lookup(values: &[SimplexValue]) -> HashMap<&[u32], &BigInt> {
    values.iter().map(|e| (e.simplex.as_slice(), &e.value.0)).collect()
}

impl Certificate {
    /// Pairing value for pairing certificates.
    pub fn pairing_value(&self) -> Option<&BigInt> {
        match &self.payload {
            Payload::Pairing { value, .. }
            | Payload::SimplicialPairing { value, .. }
            | Payload::Kunneth { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Re-verifies the payload by direct arithmetic.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::verification(format!("{}: {m}", self.subject)));
        match (&self.kind, &self.payload) {
            (CertificateKind::ZeroWithPrimitive, Payload::Primitive { coboundary, cocycle, primitive }) => {
                if coboundary.mul_vec(primitive)? != *cocycle {
                    return fail("coboundary of the primitive differs from the cocycle");
                }
                Ok(())
            }
            (CertificateKind::NonzeroByInfeasibility, Payload::Infeasibility { coboundary, cocycle, record }) => {
                if !record.verify(coboundary, cocycle) {
                    return fail("divisibility obstruction does not recompute");
                }
                Ok(())
            }
            (
                CertificateKind::NonzeroByPairing,
                Payload::Pairing { coboundary, next_coboundary, cocycle, cycle, value },
            ) => {
                if coboundary.vec_mul(cycle)?.iter().any(|x| !x.is_zero()) {
                    return fail("test chain is not a cycle");
                }
                if let Some(n) = next_coboundary {
                    if n.mul_vec(cocycle)?.iter().any(|x| !x.is_zero()) {
                        return fail("cochain is not a cocycle");
                    }
                }
                let v = dot(cocycle, cycle);
                if v != *value || v.is_zero() {
                    return fail("pairing value mismatch or zero");
                }
                Ok(())
            }
            (CertificateKind::NonzeroByPairing, Payload::SimplicialPairing { arity, cochain, cycle, value }) => {
                if *arity == 0 {
                    return fail("arity zero");
                }
                let mut bd: HashMap<Vec<u32>, BigInt> = HashMap::new();
                for e in cycle {
                    if e.simplex.len() % arity != 0 {
                        return fail("malformed simplex");
                    }
                    for (sign, f) in staircase::faces(&e.simplex, *arity) {
                        *bd.entry(f).or_insert_with(BigInt::zero) += &e.value.0 * sign;
                    }
                }
                if bd.values().any(|v| !v.is_zero()) {
                    return fail("test chain is not a cycle");
                }
                let c = lookup(cochain);
                let mut acc = BigInt::zero();
                for e in cycle {
                    if let Some(v) = c.get(e.simplex.as_slice()) {
                        acc += *v * &e.value.0;
                    }
                }
                if acc != *value || acc.is_zero() {
                    return fail("pairing value mismatch or zero");
                }
                Ok(())
            }
            (
                CertificateKind::ZeroWithPrimitive,
                Payload::SimplicialPrimitive { arity, degree, cells, cocycle, primitive },
            ) => {
                if *degree == 0 {
                    return fail("degree zero has no primitive");
                }
                let c = lookup(cocycle);
                let x = lookup(primitive);
                let mut seen = 0usize;
                for cell in cells {
                    if cell.arity() != *arity {
                        return fail("cell arity mismatch");
                    }
                    for s in staircase::simplices_with_support(cell, *degree) {
                        let mut dx = BigInt::zero();
                        for (sign, f) in staircase::faces(&s, *arity) {
                            if let Some(v) = x.get(f.as_slice()) {
                                dx += *v * sign;
                            }
                        }
                        let want = c.get(s.as_slice()).map(|v| (*v).clone()).unwrap_or_default();
                        if dx != want {
                            return fail("coboundary of the primitive differs from the cocycle");
                        }
                        if c.contains_key(s.as_slice()) {
                            seen += 1;
                        }
                    }
                }
                if seen != cocycle.iter().filter(|e| !e.value.0.is_zero()).count() {
                    return fail("cocycle support leaves the listed cells");
                }
                Ok(())
            }
            (CertificateKind::NonzeroByPairing, Payload::Kunneth { x1, x2, y1, y2, value }) => {
                let v = x1 * y2 - x2 * y1;
                if v != *value || v.is_zero() {
                    return fail("determinant mismatch or zero");
                }
                Ok(())
            }
            _ => fail("certificate kind does not match its payload"),
        }
    }
}
