//! Splitting an automorphism into a bundle-induced part and a product of
//! exponentials `Ad(exp Y_j)` with `Y_j` of degree `2j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_model::{filtration, GradedQuotient, LieModel};
use crate::linalg::{is_zero_vector, scale_vector, sub_vectors, Matrix, Vector, WireMatrix};
use crate::rational;

use super::{
    ad_exp, bundle_block, construct_exceptional_swap, detect_lambda, graded_image,
    induced_automorphism, require_automorphism,
};

/// One correction factor `Ad(exp Y)` with `Y` homogeneous of `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub degree: i32,
    #[serde(with = "rational::vec_as_strings")]
    pub element: Vector,
}

/// `ψ = ψ_T ∘ Ad(exp Y_m) ∘ … ∘ Ad(exp Y_1) ∘ σ`, where `σ` is the
/// exceptional swap when `λ = −1` and the identity otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub bundle_part: Matrix,
    /// In the order found, `Y_1` first.
    pub corrections: Vec<Correction>,
    pub lambda: i8,
    pub swap: Option<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct WireFactorization {
    bundle_part: WireMatrix,
    corrections: Vec<Correction>,
    lambda: i8,
    swap: Option<WireMatrix>,
}

impl Serialize for FactorizationResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireFactorization {
            bundle_part: self.bundle_part.to_wire(),
            corrections: self.corrections.clone(),
            lambda: self.lambda,
            swap: self.swap.as_ref().map(Matrix::to_wire),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactorizationResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireFactorization::deserialize(d)?;
        let conv = |m: &WireMatrix| Matrix::from_wire(m).map_err(serde::de::Error::custom);
        Ok(Self {
            bundle_part: conv(&w.bundle_part)?,
            corrections: w.corrections,
            lambda: w.lambda,
            swap: w.swap.as_ref().map(conv).transpose()?,
        })
    }
}

/// `Ad(exp Y_m) ∘ … ∘ Ad(exp Y_1)`.
pub fn recompose_kernel(m: &LieModel, corrections: &[Correction]) -> Result<Matrix> {
    corrections
        .iter()
        .try_fold(Matrix::identity(m.dim()), |acc, c| {
            Ok(ad_exp(m, &c.element)?.mul(&acc))
        })
}

/// Rebuilds `ψ` from a factorization.
pub fn recompose(m: &LieModel, r: &FactorizationResult) -> Result<Matrix> {
    let mut out = induced_automorphism(m, &r.bundle_part)?.mul(&recompose_kernel(m, &r.corrections)?);
    if let Some(s) = &r.swap {
        out = out.mul(s);
    }
    Ok(out)
}

/// Factors an automorphism inducing the identity on the graded quotient.
///
/// At stage `j` the degree-`2j` part `Y` of `φ(ε) − ε` is read off, and
/// `φ` is replaced by `φ ∘ Ad(exp(Y/2j))`, which pushes the defect to
/// degree `2j + 2`. The recorded factor is `Y_j = −Y/2j`.
pub fn factor_kernel_automorphism(m: &LieModel, psi: &Matrix) -> Result<Vec<Correction>> {
    require_automorphism(m, psi)?;
    let q = GradedQuotient::new(m, &filtration(m)?)?;
    if !graded_image(&q, psi)?.is_identity() {
        return Err(Error::Precondition(
            "automorphism does not induce the identity on the graded quotient".into(),
        ));
    }
    factor_kernel_unchecked(m, psi)
}

fn factor_kernel_unchecked(m: &LieModel, psi: &Matrix) -> Result<Vec<Correction>> {
    let eps = m.euler_vector()?;
    let (_, top) = m.degree_range();
    let mut phi = psi.clone();
    let mut out = Vec::new();
    let mut j = 1;
    loop {
        let defect = sub_vectors(&phi.mul_vec(&eps), &eps);
        let Some(low) = m.min_degree_of(&defect) else {
            break;
        };
        let deg = 2 * j;
        if low < deg {
            return Err(Error::Consistency(format!(
                "defect at stage {j} starts in degree {low}, expected at least {deg}"
            )));
        }
        if deg > top {
            return Err(Error::Consistency(format!(
                "defect survives past the top degree {top}"
            )));
        }
        let y = m.degree_component(&defect, deg);
        if !is_zero_vector(&y) {
            let scale = rational::frac(1, deg as i64);
            phi = phi.mul(&ad_exp(m, &scale_vector(&y, &scale))?);
            let after = sub_vectors(&phi.mul_vec(&eps), &eps);
            if m.min_degree_of(&after).is_some_and(|d| d < deg + 2) {
                return Err(Error::Consistency(format!(
                    "correction in degree {deg} did not clear the defect"
                )));
            }
            out.push(Correction {
                degree: deg,
                element: scale_vector(&y, &-scale),
            });
        }
        j += 1;
    }
    if !phi.is_identity() {
        return Err(Error::Consistency(
            "corrected automorphism fixes ε but is not the identity".into(),
        ));
    }
    Ok(out)
}

/// Full factorization of an automorphism.
pub fn factor_automorphism(m: &LieModel, psi: &Matrix) -> Result<FactorizationResult> {
    require_automorphism(m, psi)?;
    let spec = m.spec();
    let (lambda, swap) = if spec.low_rank_exceptional() {
        match detect_lambda(m, psi)? {
            -1 => {
                if !(spec.is_pure_odd() && spec.odd_rank == 2) {
                    return Err(Error::Unsupported(format!(
                        "grading-reversing automorphisms of {spec} need a base map"
                    )));
                }
                let s = construct_exceptional_swap(m, &Matrix::identity(2))?;
                (-1, Some(s))
            }
            l => (l, None),
        }
    } else {
        (1, None)
    };
    let rest = match &swap {
        Some(s) => psi.mul(&s.inverse().ok_or_else(|| {
            Error::Consistency("exceptional swap is not invertible".into())
        })?),
        None => psi.clone(),
    };
    let t = bundle_block(m, &rest)?;
    let chi = induced_automorphism(m, &t)?;
    let kernel = chi
        .inverse()
        .ok_or_else(|| Error::Consistency("bundle-induced map is not invertible".into()))?
        .mul(&rest);
    let q = GradedQuotient::new(m, &filtration(m)?)?;
    if !graded_image(&q, &kernel)?.is_identity() {
        return Err(Error::Consistency(
            "bundle part does not account for the graded action".into(),
        ));
    }
    let corrections = factor_kernel_unchecked(m, &kernel)?;
    Ok(FactorizationResult {
        bundle_part: t,
        corrections,
        lambda,
        swap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_model::build_model;
    use crate::rational::int;
    use crate::spec::ModelSpec;

    fn w(r: usize) -> LieModel {
        build_model(ModelSpec::pure_odd(r).unwrap()).unwrap()
    }

    fn degree_two(m: &LieModel, seed: i64) -> Vector {
        let mut y = m.zero_vector();
        for (k, i) in m.indices_of_degree(2).into_iter().enumerate() {
            y[i] = int((k as i64 * 7 + seed) % 7 - 3);
        }
        y
    }

    #[test]
    fn identity_has_no_corrections() {
        let m = w(3);
        assert!(factor_kernel_automorphism(&m, &Matrix::identity(m.dim()))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn single_exponential_round_trip() {
        let m = w(3);
        let y = degree_two(&m, 1);
        let psi = ad_exp(&m, &y).unwrap();
        let c = factor_kernel_automorphism(&m, &psi).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].element, y);
        assert_eq!(recompose_kernel(&m, &c).unwrap(), psi);
    }

    #[test]
    fn product_round_trip_w4() {
        let m = w(4);
        let psi = ad_exp(&m, &degree_two(&m, 2))
            .unwrap()
            .mul(&ad_exp(&m, &degree_two(&m, 5)).unwrap());
        let c = factor_kernel_automorphism(&m, &psi).unwrap();
        assert_eq!(recompose_kernel(&m, &c).unwrap(), psi);
    }

    #[test]
    fn non_kernel_input_is_rejected() {
        let m = w(3);
        let t = Matrix::from_rows(vec![
            vec![int(2), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        let psi = induced_automorphism(&m, &t).unwrap();
        assert!(matches!(
            factor_kernel_automorphism(&m, &psi),
            Err(Error::Precondition(_))
        ));
        let full = factor_automorphism(&m, &psi.mul(&ad_exp(&m, &degree_two(&m, 3)).unwrap()))
            .unwrap();
        assert_eq!(full.bundle_part, t);
        assert_eq!(full.lambda, 1);
        assert_eq!(
            recompose(&m, &full).unwrap(),
            psi.mul(&ad_exp(&m, &degree_two(&m, 3)).unwrap())
        );
    }

    #[test]
    fn json_round_trip() {
        let m = w(3);
        let r = factor_automorphism(&m, &ad_exp(&m, &degree_two(&m, 4)).unwrap()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: FactorizationResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
