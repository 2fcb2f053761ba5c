//! Orbit-reduced equivariant cochain complexes of deleted products.
//!
//! An equivariant cochain satisfies c([g·x]) = χ(g)·ε(g,x)·c([x]) where ε is
//! the Koszul sign of the action. It is determined by its values on orbit
//! representatives, the lexicographically least cell of each orbit.

use crate::chain::Chain;
use crate::deleted_product::{parity, permutations, DeletedProduct, Perm, ProductCell};
use crate::error::{Error, Result};
use crate::zlinalg::{
    cohomology, dot, solve_integer, AbelianGroup, Certificate, CertificateKind, Payload, SolveOutcome,
    SparseMatrix,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCharacter {
    Trivial,
    Sign,
    /// sign^d.
    SignPow(u32),
}

impl SignCharacter {
    pub fn value(&self, g: &[usize]) -> i32 {
        match self {
            SignCharacter::Trivial => 1,
            SignCharacter::Sign => parity(g),
            SignCharacter::SignPow(d) => {
                if d % 2 == 0 {
                    1
                } else {
                    parity(g)
                }
            }
        }
    }
}

/// Orbit representative of a cell: (rep, g, coefficient) with cell = g·rep and
/// c(cell) = coefficient·c(rep) for every equivariant cochain c.
pub fn orbit_of(cell: &ProductCell, perms: &[Perm], chi: SignCharacter) -> (ProductCell, i32) {
    let mut best: Option<(ProductCell, i32)> = None;
    for g in perms {
        let (_, img) = cell.act(g);
        if best.as_ref().map_or(true, |(b, _)| img < *b) {
            best = Some((img, 0));
        }
    }
    let rep = best.unwrap().0;
    for g in perms {
        let (eps, img) = rep.act(g);
        if img == *cell {
            return (rep, chi.value(g) * eps);
        }
    }
    unreachable!("cell lies in the orbit of its representative")
}

/// Orbit representatives in degree k and the reduced coboundaries between them.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    arity: usize,
    character: SignCharacter,
    reps: Vec<Vec<ProductCell>>,
    lookup: HashMap<ProductCell, (usize, i32)>,
    cell_counts: Vec<usize>,
    coboundaries: Vec<SparseMatrix>,
}

impl EquivariantComplex {
    pub fn new(dp: &DeletedProduct, character: SignCharacter) -> Result<Self> {
        let n = dp.arity();
        let perms = permutations(n);
        let top = dp.dim().map_or(0, |d| d + 1);
        let mut reps: Vec<Vec<ProductCell>> = vec![Vec::new(); top];
        let mut lookup = HashMap::new();
        let mut cell_counts = Vec::new();
        for k in 0..top {
            let cells = dp.cells(k);
            cell_counts.push(cells.len());
            for c in cells {
                if perms[1..].iter().any(|g| c.act(g).1 == *c) {
                    return Err(Error::validation(format!("cell {c:?} has a nontrivial stabilizer")));
                }
                let is_rep = perms[1..].iter().all(|g| c.act(g).1 > *c);
                if is_rep {
                    reps[k].push(c.clone());
                }
            }
            if reps[k].len() * perms.len() != cells.len() {
                return Err(Error::validation("orbit count does not divide the cell count"));
            }
            for (o, r) in reps[k].iter().enumerate() {
                for g in &perms {
                    let (eps, img) = r.act(g);
                    lookup.insert(img, (o, character.value(g) * eps));
                }
            }
        }
        let mut coboundaries = Vec::new();
        for k in 0..top.saturating_sub(1) {
            let mut m = SparseMatrix::zeros(reps[k + 1].len(), reps[k].len());
            for (i, r) in reps[k + 1].iter().enumerate() {
                for (sign, f) in r.boundary() {
                    let (o, coef) = lookup[&f];
                    m.add_entry(i, o, BigInt::from(sign * coef));
                }
            }
            coboundaries.push(m);
        }
        Ok(EquivariantComplex { arity: n, character, reps, lookup, cell_counts, coboundaries })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn character(&self) -> SignCharacter {
        self.character
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.reps.len().checked_sub(1)
    }

    pub fn reps(&self, k: usize) -> &[ProductCell] {
        self.reps.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn orbit_count(&self, k: usize) -> usize {
        self.reps(k).len()
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cell_counts.get(k).copied().unwrap_or(0)
    }

    /// (orbit index, coefficient) of any cell.
    pub fn locate(&self, c: &ProductCell) -> Option<(usize, i32)> {
        self.lookup.get(c).copied()
    }

    /// δ̄ᵏ from degree k to k+1; the zero map when either side is empty.
    pub fn coboundary(&self, k: usize) -> SparseMatrix {
        match self.coboundaries.get(k) {
            Some(m) => m.clone(),
            None => SparseMatrix::zeros(self.orbit_count(k + 1), self.orbit_count(k)),
        }
    }

    /// δ̄ᵏ⁻¹ into degree k; a matrix without columns for k = 0.
    pub fn incoming(&self, k: usize) -> SparseMatrix {
        if k == 0 {
            SparseMatrix::zeros(self.orbit_count(0), 0)
        } else {
            self.coboundary(k - 1)
        }
    }

    pub fn cohomology(&self, k: usize) -> AbelianGroup {
        let prev = self.incoming(k);
        let next = self.coboundary(k);
        cohomology(Some(&prev), Some(&next), self.orbit_count(k))
    }

    /// Orbit vector of an equivariant cochain given on all cells; fails if it is not equivariant.
    pub fn reduce_cochain(&self, c: &Chain<ProductCell>) -> Result<Vec<BigInt>> {
        let k = c.degree;
        let mut out: Vec<Option<BigInt>> = vec![None; self.orbit_count(k)];
        for cell in c.keys() {
            if !self.lookup.contains_key(cell) {
                return Err(Error::validation(format!("cell {cell:?} is not in the deleted product")));
            }
        }
        for (o, r) in self.reps(k).iter().enumerate() {
            out[o] = Some(c.get(r));
        }
        for (cell, v) in c.iter() {
            let (o, coef) = self.lookup[cell];
            if *v != out[o].as_ref().unwrap() * BigInt::from(coef) {
                return Err(Error::validation(format!("cochain is not equivariant at {cell:?}")));
            }
        }
        Ok(out.into_iter().map(|x| x.unwrap()).collect())
    }

    /// Full cochain from orbit values.
    pub fn expand_cochain(&self, k: usize, values: &[BigInt]) -> Chain<ProductCell> {
        let mut c = Chain::zero(k);
        for (cell, (o, coef)) in &self.lookup {
            if cell.dim() == k && !values[*o].is_zero() {
                c.add_term(cell.clone(), &values[*o] * BigInt::from(*coef));
            }
        }
        c
    }

    /// Orbit form of a chain: z̄(R) = Σ_g χ(g)ε(g,R)·z(gR), so that ⟨c̄, z̄⟩ = ⟨c, z⟩.
    pub fn reduce_chain(&self, z: &Chain<ProductCell>) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); self.orbit_count(z.degree)];
        for (cell, v) in z.iter() {
            let (o, coef) = self
                .lookup
                .get(cell)
                .ok_or_else(|| Error::validation(format!("cell {cell:?} is not in the deleted product")))?;
            out[*o] += v * BigInt::from(*coef);
        }
        Ok(out)
    }
}

/// Decides whether an equivariant cocycle is a coboundary and returns a re-verifiable certificate.
///
/// Test cycles are tried first; a nonzero pairing settles non-vanishing without a solve.
pub fn class_status(
    ec: &EquivariantComplex,
    k: usize,
    cocycle: &[BigInt],
    test_cycles: &[Vec<BigInt>],
    subject: &str,
) -> Result<Certificate> {
    if cocycle.len() != ec.orbit_count(k) {
        return Err(Error::validation("cochain length does not match the orbit count"));
    }
    let next = ec.coboundary(k);
    if next.mul_vec(cocycle)?.iter().any(|x| !x.is_zero()) {
        return Err(Error::validation(format!("{subject}: cochain is not a cocycle")));
    }
    let prev = ec.incoming(k);
    for z in test_cycles {
        if z.len() != cocycle.len() || prev.vec_mul(z)?.iter().any(|x| !x.is_zero()) {
            continue;
        }
        let value = dot(cocycle, z);
        if !value.is_zero() {
            let cert = Certificate {
                kind: CertificateKind::NonzeroByPairing,
                subject: subject.to_string(),
                payload: Payload::Pairing {
                    coboundary: prev,
                    next_coboundary: Some(next),
                    cocycle: cocycle.to_vec(),
                    cycle: z.clone(),
                    value,
                },
            };
            cert.verify()?;
            return Ok(cert);
        }
    }
    let cert = match solve_integer(&prev, cocycle)? {
        SolveOutcome::Solution(x) => Certificate {
            kind: CertificateKind::ZeroWithPrimitive,
            subject: subject.to_string(),
            payload: Payload::Primitive { coboundary: prev, cocycle: cocycle.to_vec(), primitive: x },
        },
        SolveOutcome::Infeasible(record) => Certificate {
            kind: CertificateKind::NonzeroByInfeasibility,
            subject: subject.to_string(),
            payload: Payload::Infeasibility { coboundary: prev, cocycle: cocycle.to_vec(), record },
        },
    };
    cert.verify()?;
    Ok(cert)
}

/// Reduced coboundary rows for a chosen set of degree-(k+1) orbit representatives.
///
/// Columns are the degree-k orbit representatives met by their boundaries, in sorted order.
/// This is enough to check the cycle condition of an orbit chain supported on the rows
/// without building the whole deleted product.
pub fn local_coboundary(
    rows: &[ProductCell],
    character: SignCharacter,
) -> (SparseMatrix, Vec<ProductCell>) {
    let n = rows.first().map_or(2, |r| r.arity());
    let perms = permutations(n);
    let mut cols: BTreeMap<ProductCell, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for (sign, f) in r.boundary() {
            let (rep, coef) = orbit_of(&f, &perms, character);
            cols.entry(rep.clone()).or_insert(0);
            entries.push((i, rep, sign * coef));
        }
    }
    for (j, v) in cols.values_mut().enumerate() {
        *v = j;
    }
    let mut m = SparseMatrix::zeros(rows.len(), cols.len());
    for (i, rep, v) in entries {
        m.add_entry(i, cols[&rep], BigInt::from(v));
    }
    (m, cols.into_keys().collect())
}

/// Orbit form of a chain without a prebuilt complex, keyed by representatives.
pub fn reduce_chain_local(
    z: &Chain<ProductCell>,
    character: SignCharacter,
) -> BTreeMap<ProductCell, BigInt> {
    let mut out: BTreeMap<ProductCell, BigInt> = BTreeMap::new();
    let Some(first) = z.keys().next() else { return out };
    let perms = permutations(first.arity());
    for (cell, v) in z.iter() {
        let (rep, coef) = orbit_of(cell, &perms, character);
        *out.entry(rep).or_insert_with(BigInt::zero) += v * BigInt::from(coef);
    }
    out.retain(|_, v| !v.is_zero());
    out
}
