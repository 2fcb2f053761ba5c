//! The van Kampen obstruction: intersection cocycle of a generic map and its class.

use crate::chain::Chain;
use crate::deleted_product::{DeletedProduct, ProductCell};
use crate::equivariant::{class_status, EquivariantComplex, SignCharacter};
use crate::error::{Error, Result};
use crate::plgeom::{moment_curve_map, simplex_pair_intersection, PLMap, Q};
use crate::simplicial::SimplicialComplex;
use crate::zlinalg::{Certificate, CertificateKind};
use num_bigint::BigInt;
use num_traits::Zero;

/// Intersection cocycle o_f on conf_s(K,2) in degree 2m.
#[derive(Clone, Debug)]
pub struct VkCocycle {
    pub dp: DeletedProduct,
    pub ec: EquivariantComplex,
    pub degree: usize,
    /// Values on orbit representatives.
    pub values: Vec<BigInt>,
}

impl VkCocycle {
    /// Nonzero orbit values as (representative, value).
    pub fn support(&self) -> Vec<(ProductCell, BigInt)> {
        self.ec
            .reps(self.degree)
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c.clone(), v.clone()))
            .collect()
    }
}

/// Computes o_f on every top cell and checks equivariance cellwise.
pub fn vk_cocycle(c: &SimplicialComplex, f: &PLMap, guard: usize) -> Result<VkCocycle> {
    let m = c.dim().ok_or_else(|| Error::validation("empty complex"))?;
    if f.dim() != 2 * m {
        return Err(Error::validation(format!("a {m}-complex needs a map into R^{}, got R^{}", 2 * m, f.dim())));
    }
    f.covers(c)?;
    let dp = DeletedProduct::build(c, 2, guard)?;
    let ec = EquivariantComplex::new(&dp, SignCharacter::SignPow(f.dim() as u32))?;
    let k = 2 * m;
    let mut full: Chain<ProductCell> = Chain::zero(k);
    for cell in dp.cells(k) {
        let r = simplex_pair_intersection(f, &cell.factors()[0], &cell.factors()[1])?;
        full.add_term(cell.clone(), BigInt::from(r.total));
    }
    let values = ec.reduce_cochain(&full)?;
    Ok(VkCocycle { dp, ec, degree: k, values })
}

/// Certifies vanishing or non-vanishing of the class of o_f.
pub fn vk_class(vc: &VkCocycle) -> Result<Certificate> {
    let subject = format!("van Kampen class of {}", vc.dp.base().name());
    class_status(&vc.ec, vc.degree, &vc.values, &[], &subject)
}

/// Whether the cocycles of two moment-curve placements differ by an equivariant coboundary.
pub fn vk_class_stability(
    c: &SimplicialComplex,
    params1: Option<&[Q]>,
    params2: Option<&[Q]>,
    guard: usize,
) -> Result<(bool, Certificate)> {
    let m = c.dim().ok_or_else(|| Error::validation("empty complex"))?;
    let f1 = moment_curve_map(c, 2 * m, params1)?;
    let f2 = moment_curve_map(c, 2 * m, params2)?;
    let a = vk_cocycle(c, &f1, guard)?;
    let b = vk_cocycle(c, &f2, guard)?;
    let diff: Vec<BigInt> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    let subject = format!("difference of van Kampen cocycles of {}", c.name());
    let cert = class_status(&a.ec, a.degree, &diff, &[], &subject)?;
    Ok((cert.kind == CertificateKind::ZeroWithPrimitive, cert))
}
