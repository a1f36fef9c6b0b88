use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::rational;

use super::LieModel;

/// Eigenspaces `𝔤^k = {X : [ε, X] = kX}` of `ad_ε`, computed as null spaces
/// of `ad_ε − k` from the structure constants (not from the degree labels).
///
/// Only nonzero eigenspaces are returned. Fails if they do not fill the
/// whole model.
pub fn grading_eigenspaces(m: &LieModel) -> Result<BTreeMap<i32, Subspace>> {
    let eps = m.euler_vector()?;
    let ad = m.ad_matrix(&eps);
    let n = m.dim();
    let top = m.spec().odd_rank as i32;
    let mut out = BTreeMap::new();
    let mut total = 0;
    for k in -1..=top {
        let shifted = ad.sub(&Matrix::identity(n).scale(&rational::int(k as i64)));
        let space = Subspace::from_vectors(n, shifted.nullspace());
        if !space.is_zero() {
            total += space.dim();
            out.insert(k, space);
        }
    }
    if total != n {
        return Err(Error::Consistency(format!(
            "ad_ε eigenspaces in degrees -1..={top} span {total} of {n} dimensions"
        )));
    }
    Ok(out)
}

/// Degrees `2i`, `i > 0`, present in the model.
pub fn positive_even_degrees(m: &LieModel) -> Vec<i32> {
    let (_, hi) = m.degree_range();
    (1..).map(|i| 2 * i).take_while(|&k| k <= hi).collect()
}

/// `𝔤′ = ⊕_{i>0} 𝔤^{2i}`, assembled from the eigenspaces.
pub fn canonical_ideal(m: &LieModel) -> Result<Subspace> {
    let spaces = grading_eigenspaces(m)?;
    Ok(spaces
        .iter()
        .filter(|(&k, _)| k > 0 && k % 2 == 0)
        .fold(Subspace::zero(m.dim()), |acc, (_, s)| acc.sum(s)))
}
