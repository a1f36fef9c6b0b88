//! Linear endomorphisms of a model: the automorphism test, exponentials of
//! ad-nilpotent elements, automorphisms induced by changes of odd
//! coordinates, and the induced map on the graded quotient.
//!
//! Matrices act on coordinate columns: column `j` holds the image of the
//! basis vector `e_j`.
//!
//! A bundle matrix `T` (r×r) is taken on the generator side: it defines the
//! algebra automorphism `φ*(ξᵃ) = Σ_b T[a][b] ξᵇ`, and the induced
//! automorphism `ψ_T(X) = (φ*)⁻¹ ∘ X ∘ φ*` sends `∂/∂ξᵃ` to
//! `Σ_b T[b][a] ∂/∂ξᵇ`. The `𝔤⁻¹` block of `ψ_T` is therefore `T` itself,
//! and `T ↦ ψ_T` is multiplicative.

mod exceptional;
mod factor;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie_model::{is_ad_nilpotent, GradedQuotient, LieModel};
use crate::linalg::{is_zero_vector, sub_vectors, Matrix, Vector, WireMatrix};
use crate::rational::{self, Rational};
use crate::spec::Parity;
use crate::superfunction::SuperFunction;
use crate::vector_field::SuperVectorField;

pub use exceptional::construct_exceptional_swap;
pub use factor::{
    factor_automorphism, factor_kernel_automorphism, recompose, recompose_kernel, Correction,
    FactorizationResult,
};

/// A square matrix over a model's canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEndo {
    matrix: Matrix,
    invertible: bool,
}

impl LinearEndo {
    pub fn new(m: &LieModel, matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != m.dim() || matrix.ncols() != m.dim() {
            return Err(Error::Input(format!(
                "matrix is {}x{} but the model {} has dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                m.spec(),
                m.dim()
            )));
        }
        let invertible = matrix.rank() == m.dim();
        Ok(Self { matrix, invertible })
    }

    pub fn from_wire(m: &LieModel, w: &WireMatrix) -> Result<Self> {
        Self::new(m, Matrix::from_wire(w)?)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }
}

/// Outcome of the automorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutCheck {
    Pass,
    NotInvertible,
    /// Basis vector whose image is not homogeneous of the same parity.
    ParityViolation { index: usize },
    /// First pair with `M[e_i, e_j] ≠ [M e_i, M e_j]`, and the difference.
    BracketViolation { i: usize, j: usize, defect: Vector },
}

impl AutCheck {
    pub fn passed(&self) -> bool {
        matches!(self, AutCheck::Pass)
    }

    pub fn witness(&self) -> serde_json::Value {
        match self {
            AutCheck::Pass => serde_json::Value::Null,
            AutCheck::NotInvertible => serde_json::json!({ "violation": "not invertible" }),
            AutCheck::ParityViolation { index } => {
                serde_json::json!({ "violation": "parity", "index": index })
            }
            AutCheck::BracketViolation { i, j, defect } => serde_json::json!({
                "violation": "bracket",
                "i": i,
                "j": j,
                "defect": defect.iter().map(rational::format).collect::<Vec<_>>(),
            }),
        }
    }
}

fn ensure_square(m: &LieModel, mat: &Matrix) -> Result<()> {
    if mat.nrows() != m.dim() || mat.ncols() != m.dim() {
        return Err(Error::Input(format!(
            "matrix is {}x{} but the model has dimension {}",
            mat.nrows(),
            mat.ncols(),
            m.dim()
        )));
    }
    Ok(())
}

/// Tests invertibility, parity preservation and the bracket relation on
/// every ordered basis pair.
pub fn check_automorphism(m: &LieModel, mat: &Matrix) -> Result<AutCheck> {
    ensure_square(m, mat)?;
    if mat.rank() < m.dim() {
        return Ok(AutCheck::NotInvertible);
    }
    let cols = mat.columns();
    for (j, c) in cols.iter().enumerate() {
        match m.vector_parity(c) {
            Some(p) if p == m.parities()[j] => {}
            _ => return Ok(AutCheck::ParityViolation { index: j }),
        }
    }
    let n = m.dim();
    let found = (0..n).into_par_iter().find_map_first(|i| {
        (0..n).find_map(|j| {
            let mut lhs = m.zero_vector();
            for (k, c) in m.structure(i, j) {
                for (r, x) in cols[*k].iter().enumerate() {
                    if !x.is_zero() {
                        lhs[r] += c * x;
                    }
                }
            }
            let rhs = m.bracket(&cols[i], &cols[j]);
            (lhs != rhs).then(|| (i, j, sub_vectors(&lhs, &rhs)))
        })
    });
    Ok(match found {
        Some((i, j, defect)) => AutCheck::BracketViolation { i, j, defect },
        None => AutCheck::Pass,
    })
}

/// Errors unless the matrix passes [`check_automorphism`].
pub fn require_automorphism(m: &LieModel, mat: &Matrix) -> Result<()> {
    match check_automorphism(m, mat)? {
        AutCheck::Pass => Ok(()),
        other => Err(Error::Precondition(format!(
            "input is not an automorphism: {}",
            other.witness()
        ))),
    }
}

/// `exp(ad_Y) = Σ ad_Y^n / n!` for an even ad-nilpotent `Y`.
pub fn ad_exp(m: &LieModel, y: &[Rational]) -> Result<Matrix> {
    if y.len() != m.dim() {
        return Err(Error::Input(format!(
            "vector has length {} but the model has dimension {}",
            y.len(),
            m.dim()
        )));
    }
    if !is_zero_vector(y) && m.vector_parity(y) != Some(Parity::Even) {
        return Err(Error::Precondition(
            "exponential needs an even element".into(),
        ));
    }
    if !is_ad_nilpotent(m, y) {
        return Err(Error::Precondition("element is not ad-nilpotent".into()));
    }
    let ad = m.ad_matrix(y);
    let mut sum = Matrix::identity(m.dim());
    let mut term = Matrix::identity(m.dim());
    let mut k = 1i64;
    loop {
        term = ad.mul(&term).scale(&rational::frac(1, k));
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&term);
        k += 1;
    }
}

/// Images `φ*(ξᵃ) = Σ_b T[a][b] ξᵇ`.
fn generator_images(m: &LieModel, t: &Matrix) -> Vec<SuperFunction> {
    let spec = m.spec();
    (0..spec.odd_rank)
        .map(|a| {
            let mut f = SuperFunction::zero(spec);
            for b in 0..spec.odd_rank {
                let c = t.get(a, b);
                if !c.is_zero() {
                    f = &f + &SuperFunction::odd_generator(spec, b + 1).scale(c);
                }
            }
            f
        })
        .collect()
}

fn ensure_bundle(m: &LieModel, t: &Matrix) -> Result<Matrix> {
    let r = m.spec().odd_rank;
    if t.nrows() != r || t.ncols() != r {
        return Err(Error::Input(format!(
            "bundle matrix must be {r}x{r}, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    t.inverse()
        .ok_or_else(|| Error::Precondition("bundle matrix is not invertible".into()))
}

/// Conjugate `(φ*)⁻¹ ∘ X ∘ φ*` of one field, rebuilt from its values on
/// the coordinates.
fn conjugate_field(
    x: &SuperVectorField,
    forward: &[SuperFunction],
    backward: &[SuperFunction],
) -> Result<SuperVectorField> {
    let spec = x.spec();
    let even = (1..=spec.base_dim)
        .map(|i| {
            let xi = SuperFunction::even_generator(spec, i);
            x.apply(&xi)?.substitute_odd(backward)
        })
        .collect::<Result<Vec<_>>>()?;
    let odd = forward
        .iter()
        .map(|img| x.apply(img)?.substitute_odd(backward))
        .collect::<Result<Vec<_>>>()?;
    SuperVectorField::new(spec, even, odd)
}

/// Automorphism `ψ_T` of the model induced by the bundle matrix `T`.
pub fn induced_automorphism(m: &LieModel, t: &Matrix) -> Result<Matrix> {
    let t_inv = ensure_bundle(m, t)?;
    let forward = generator_images(m, t);
    let backward = generator_images(m, &t_inv);
    let cols = m
        .basis()
        .par_iter()
        .map(|x| m.coords_of(&conjugate_field(x, &forward, &backward)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(m.dim(), &cols))
}

/// Indices of the constant fields `∂/∂ξᵃ`, in order `a = 1..r`.
pub(crate) fn odd_partial_indices(m: &LieModel) -> Result<Vec<usize>> {
    let spec = m.spec();
    (1..=spec.odd_rank)
        .map(|a| {
            let v = m.coords_of(&SuperVectorField::partial_odd(spec, a))?;
            Ok(v.iter().position(|c| !c.is_zero()).expect("nonzero basis field"))
        })
        .collect()
}

/// `T[b][a]` = coefficient of `∂/∂ξᵇ` in `ψ(∂/∂ξᵃ)`.
pub(crate) fn bundle_block(m: &LieModel, psi: &Matrix) -> Result<Matrix> {
    let idx = odd_partial_indices(m)?;
    Ok(psi.block(&idx, &idx))
}

/// Recovers the bundle matrix of a grading-preserving automorphism from
/// its restriction to `𝔤⁻¹`.
pub fn reconstruct_bundle_map(m: &LieModel, psi: &Matrix) -> Result<Matrix> {
    ensure_square(m, psi)?;
    require_automorphism(m, psi)?;
    for (j, col) in psi.columns().iter().enumerate() {
        let d = m.degrees()[j];
        if col
            .iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && m.degrees()[i] != d)
        {
            return Err(Error::Precondition(format!(
                "automorphism does not preserve the grading at basis {}",
                m.basis_name(j)
            )));
        }
    }
    let idx = odd_partial_indices(m)?;
    for &a in &idx {
        let col = psi.column(a);
        if col
            .iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && !idx.contains(&i))
        {
            return Err(Error::Unsupported(format!(
                "image of {} has base-dependent terms; a nontrivial base map is out of scope",
                m.basis_name(a)
            )));
        }
    }
    let t = psi.block(&idx, &idx);
    if t.inverse().is_none() {
        return Err(Error::Consistency(
            "restriction to degree -1 is not invertible".into(),
        ));
    }
    Ok(t)
}

/// Outcome of comparing `ψ` with conjugation by `φ*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugationCheck {
    Pass,
    /// First basis field whose image differs, its degree, and the lowest
    /// degree present in the difference.
    Mismatch {
        index: usize,
        degree: i32,
        defect_degree: i32,
    },
}

impl ConjugationCheck {
    pub fn passed(&self) -> bool {
        matches!(self, ConjugationCheck::Pass)
    }
}

/// Checks `ψ(X) = (φ*)⁻¹ ∘ X ∘ φ*` on every basis field.
pub fn verify_conjugation(m: &LieModel, t: &Matrix, psi: &Matrix) -> Result<ConjugationCheck> {
    ensure_square(m, psi)?;
    let expected = induced_automorphism(m, t)?;
    for j in 0..m.dim() {
        let diff = sub_vectors(&psi.column(j), &expected.column(j));
        if let Some(defect_degree) = m.min_degree_of(&diff) {
            return Ok(ConjugationCheck::Mismatch {
                index: j,
                degree: m.degrees()[j],
                defect_degree,
            });
        }
    }
    Ok(ConjugationCheck::Pass)
}

/// Sign `λ` with `ψ(ε) = λε` in the low-rank exceptional models.
pub fn detect_lambda(m: &LieModel, psi: &Matrix) -> Result<i8> {
    if !m.spec().low_rank_exceptional() {
        return Err(Error::Precondition(format!(
            "{} is not a low-rank exceptional model; λ = 1 there",
            m.spec()
        )));
    }
    require_automorphism(m, psi)?;
    let eps = m.euler_vector()?;
    let image = psi.mul_vec(&eps);
    let lambda = if image == eps {
        1
    } else if image.iter().zip(&eps).all(|(a, b)| *a == -b.clone()) {
        -1
    } else {
        return Err(Error::Consistency(
            "ψ(ε) is not ±ε".into(),
        ));
    };
    if lambda == -1 {
        for (from, to) in [(-1, 1), (1, -1)] {
            let target = m.degree_subspace(to);
            for j in m.indices_of_degree(from) {
                if !target.contains(&psi.column(j)) {
                    return Err(Error::Consistency(format!(
                        "λ = -1 but {} is not sent to degree {to}",
                        m.basis_name(j)
                    )));
                }
            }
        }
    }
    Ok(lambda)
}

/// Constants `c` such that `ad_{cε}` restricted to `𝔤₁` has only the
/// eigenvalues ±1. Point models only.
pub fn euler_sign_scan(m: &LieModel) -> Result<Vec<Rational>> {
    if !m.spec().is_pure_odd() {
        return Err(Error::Unsupported(
            "the eigenvalue scan is run at point scale only".into(),
        ));
    }
    let eps = m.euler_vector()?;
    let odd = m.indices_of_parity(Parity::Odd);
    let ad = m.ad_matrix(&eps).block(&odd, &odd);
    let n = odd.len();
    let top = m.spec().odd_rank as i64;
    let mut spectrum = Vec::new();
    let mut covered = 0;
    for k in -1..=top {
        let shifted = ad.sub(&Matrix::identity(n).scale(&rational::int(k)));
        let mult = n - shifted.rank();
        if mult > 0 {
            spectrum.push(rational::int(k));
            covered += mult;
        }
    }
    if covered != n {
        return Err(Error::Consistency(
            "ad_ε on the odd part is not diagonalizable over the integers".into(),
        ));
    }
    let mut candidates: Vec<Rational> = spectrum
        .iter()
        .filter(|s| !s.is_zero())
        .flat_map(|s| [s.recip(), -s.recip()])
        .collect();
    candidates.sort();
    candidates.dedup();
    let id = Matrix::identity(n);
    Ok(candidates
        .into_iter()
        .filter(|c| {
            let scaled = ad.scale(c);
            scaled.sub(&id).mul(&scaled.add(&id)).is_zero()
        })
        .collect())
}

/// Matrix of `p(ψ)` on the graded quotient: the class of `ψ(a)` for each
/// coset representative `a`.
pub fn induced_graded_aut(m: &LieModel, q: &GradedQuotient, psi: &Matrix) -> Result<Matrix> {
    require_automorphism(m, psi)?;
    graded_image(q, psi)
}

pub(crate) fn graded_image(q: &GradedQuotient, psi: &Matrix) -> Result<Matrix> {
    let cols = q
        .representatives()
        .iter()
        .zip(q.model.degrees())
        .map(|(a, &p)| {
            q.class_of(p, &psi.mul_vec(a)).ok_or_else(|| {
                Error::Consistency(format!("ψ does not preserve filtration level {p}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(q.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_model::{build_model, canonical_ideal, filtration};
    use crate::rational::{frac, int};
    use crate::spec::ModelSpec;
    use crate::vector_field::Target;

    fn w(r: usize) -> LieModel {
        build_model(ModelSpec::pure_odd(r).unwrap()).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    fn ideal_element(m: &LieModel) -> Vector {
        let mut y = m.zero_vector();
        for (k, i) in m.indices_of_degree(2).into_iter().enumerate() {
            y[i] = int(k as i64 % 5 - 2);
        }
        y
    }

    #[test]
    fn identity_and_scaling() {
        let m = w(2);
        assert!(check_automorphism(&m, &Matrix::identity(8)).unwrap().passed());
        let twice = Matrix::identity(8).scale(&int(2));
        assert!(matches!(
            check_automorphism(&m, &twice).unwrap(),
            AutCheck::BracketViolation { .. }
        ));
        assert_eq!(
            check_automorphism(&m, &Matrix::zeros(8, 8)).unwrap(),
            AutCheck::NotInvertible
        );
    }

    #[test]
    fn exponential_of_ideal_element() {
        let m = w(3);
        let y = ideal_element(&m);
        let e = ad_exp(&m, &y).unwrap();
        assert!(check_automorphism(&m, &e).unwrap().passed());
        let neg: Vector = y.iter().map(|c| -c.clone()).collect();
        assert!(e.mul(&ad_exp(&m, &neg).unwrap()).is_identity());
        assert!(ad_exp(&m, &m.zero_vector()).unwrap().is_identity());
        assert!(ad_exp(&m, &m.euler_vector().unwrap()).is_err());
    }

    #[test]
    fn odd_elements_are_rejected() {
        let m = w(3);
        assert!(matches!(
            ad_exp(&m, &m.unit(0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rescaling_bundle() {
        let m = w(2);
        let t = mat(&[&[2, 0], &[0, 1]]);
        let psi = induced_automorphism(&m, &t).unwrap();
        assert!(check_automorphism(&m, &psi).unwrap().passed());
        assert_eq!(reconstruct_bundle_map(&m, &psi).unwrap(), t);
        // ∂/∂ξ¹ ↦ 2∂/∂ξ¹ under the generator-side convention.
        let d1 = m
            .coords_of(&SuperVectorField::partial_odd(m.spec(), 1))
            .unwrap();
        assert_eq!(psi.mul_vec(&d1), d1.iter().map(|c| c * int(2)).collect::<Vector>());
        assert_eq!(detect_lambda(&m, &psi).unwrap(), 1);
    }

    #[test]
    fn induced_is_multiplicative() {
        let m = w(3);
        let a = mat(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 1]]);
        let b = Matrix::from_rows(vec![
            vec![frac(1, 2), int(0), int(0)],
            vec![int(0), int(0), int(1)],
            vec![int(0), int(-1), int(3)],
        ])
        .unwrap();
        let pa = induced_automorphism(&m, &a).unwrap();
        let pb = induced_automorphism(&m, &b).unwrap();
        let pab = induced_automorphism(&m, &a.mul(&b)).unwrap();
        assert_eq!(pa.mul(&pb), pab);
        assert_eq!(reconstruct_bundle_map(&m, &pab).unwrap(), a.mul(&b));
        assert!(verify_conjugation(&m, &a, &pa).unwrap().passed());
    }

    #[test]
    fn conjugation_defect_is_localized() {
        let m = w(3);
        let t = mat(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let psi = induced_automorphism(&m, &t)
            .unwrap()
            .mul(&ad_exp(&m, &ideal_element(&m)).unwrap());
        match verify_conjugation(&m, &t, &psi).unwrap() {
            ConjugationCheck::Mismatch { defect_degree, degree, .. } => {
                assert!(defect_degree >= degree + 2)
            }
            ConjugationCheck::Pass => panic!("expected a mismatch"),
        }
    }

    #[test]
    fn jet_model_conjugation() {
        let spec = ModelSpec::new(1, 2, 2).unwrap();
        let m = build_model(spec).unwrap();
        let t = mat(&[&[0, 1], &[1, 1]]);
        let psi = induced_automorphism(&m, &t).unwrap();
        assert!(check_automorphism(&m, &psi).unwrap().passed());
        assert_eq!(reconstruct_bundle_map(&m, &psi).unwrap(), t);
        let x = m
            .coords_of(&SuperVectorField::monomial_field(
                spec,
                Target::Even(1),
                crate::monomial::BaseMonomial::new(vec![1]),
                crate::monomial::OddMonomial::ONE,
            ))
            .unwrap();
        assert_eq!(psi.mul_vec(&x), x);
    }

    #[test]
    fn graded_map_of_kernel_element_is_identity() {
        let m = w(3);
        let q = GradedQuotient::new(&m, &filtration(&m).unwrap()).unwrap();
        let e = ad_exp(&m, &ideal_element(&m)).unwrap();
        assert!(induced_graded_aut(&m, &q, &e).unwrap().is_identity());
        let t = mat(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]);
        let psi = induced_automorphism(&m, &t).unwrap();
        let pp = induced_graded_aut(&m, &q, &psi).unwrap();
        let pe = induced_graded_aut(&m, &q, &e).unwrap();
        assert_eq!(induced_graded_aut(&m, &q, &psi.mul(&e)).unwrap(), pp.mul(&pe));
        assert!(!canonical_ideal(&m).unwrap().is_zero());
    }

    #[test]
    fn sign_scan_on_w2() {
        let m = w(2);
        assert_eq!(euler_sign_scan(&m).unwrap(), vec![int(-1), int(1)]);
        assert!(euler_sign_scan(&w(4)).unwrap().is_empty());
    }

    #[test]
    fn lambda_needs_exceptional_model() {
        let m = w(3);
        assert!(matches!(
            detect_lambda(&m, &Matrix::identity(m.dim())),
            Err(Error::Precondition(_))
        ));
    }
}
