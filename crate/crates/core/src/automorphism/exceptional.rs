//! Grading-reversing automorphisms of the two-generator point model.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie_model::LieModel;
use crate::linalg::{Matrix, Subspace};
use crate::monomial::{BaseMonomial, OddMonomial};
use crate::rational::{self, Rational};
use crate::vector_field::{SuperVectorField, Target};

use super::{check_automorphism, odd_partial_indices, AutCheck};

/// Affine expression in the unknown matrix entries; the last slot is the
/// constant term.
type Expr = Vec<Rational>;

/// Builds the automorphism `ψ₀` with `ψ₀(ε) = −ε` whose restriction to
/// `𝔤⁻¹` is `∂/∂ξᵃ ↦ Σ_b iso[b][a] ξ¹ξ²∂/∂ξᵇ`.
///
/// Every other column is an unknown of the right parity, fixed by
/// `ψ₀(ε) = −ε` and by `ψ₀([x, e]) = [ψ₀(x), ψ₀(e)]` for `x` ranging over
/// `∂/∂ξᵃ` and `ε`. The system must
/// have exactly one solution, and the result must pass the automorphism
/// test.
pub fn construct_exceptional_swap(m: &LieModel, iso: &Matrix) -> Result<Matrix> {
    let spec = m.spec();
    if !(spec.is_pure_odd() && spec.odd_rank == 2) {
        return Err(Error::Precondition(format!(
            "the exceptional swap is defined on (0,0,2), not {spec}"
        )));
    }
    if iso.nrows() != 2 || iso.ncols() != 2 || iso.inverse().is_none() {
        return Err(Error::Precondition(
            "identification must be an invertible 2x2 matrix".into(),
        ));
    }
    let n = m.dim();
    let minus = odd_partial_indices(m)?;
    let top = (1..=2)
        .map(|b| {
            let f = SuperVectorField::monomial_field(
                spec,
                Target::Odd(b),
                BaseMonomial::one(0),
                OddMonomial::from_indices(&[1, 2]).expect("sorted"),
            );
            let v = m.coords_of(&f)?;
            Ok(v.iter().position(|c| !c.is_zero()).expect("nonzero basis field"))
        })
        .collect::<Result<Vec<_>>>()?;

    // Unknowns: entry (i, j) for every column j outside 𝔤⁻¹ and every row i
    // of the same parity.
    let mut var = vec![vec![None; n]; n];
    let mut nvars = 0;
    for j in (0..n).filter(|j| !minus.contains(j)) {
        for i in m.indices_of_parity(m.parities()[j]) {
            var[i][j] = Some(nvars);
            nvars += 1;
        }
    }
    let zero_expr = || vec![rational::zero(); nvars + 1];
    let entry = |i: usize, j: usize| -> Expr {
        let mut e = zero_expr();
        if let Some(a) = minus.iter().position(|&x| x == j) {
            if let Some(b) = top.iter().position(|&x| x == i) {
                e[nvars] = iso.get(b, a).clone();
            }
        } else if let Some(v) = var[i][j] {
            e[v] = rational::one();
        }
        e
    };
    let add_scaled = |acc: &mut Expr, c: &Rational, e: &Expr| {
        for (x, y) in acc.iter_mut().zip(e) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
    };

    let mut rows: Vec<(Expr, String)> = Vec::new();
    let eps = m.euler_vector()?;
    for i in 0..n {
        let mut e = zero_expr();
        for (j, c) in eps.iter().enumerate() {
            if !c.is_zero() {
                add_scaled(&mut e, c, &entry(i, j));
            }
        }
        e[nvars] += &eps[i];
        rows.push((e, format!("ψ(ε) = -ε at {}", m.basis_name(i))));
    }
    let neg_eps: Vec<Rational> = eps.iter().map(|c| -c.clone()).collect();
    let eps_index = n;
    let mut sources: Vec<(usize, Vec<Rational>)> = minus
        .iter()
        .map(|&a| (a, (0..n).map(|i| entry(i, a)[nvars].clone()).collect()))
        .collect();
    sources.push((eps_index, neg_eps));
    for (a, image) in sources {
        let ad = m.ad_matrix(&image);
        let source_name = |a: usize| {
            if a == eps_index {
                "ε".to_string()
            } else {
                m.basis_name(a)
            }
        };
        for b in 0..n {
            for i in 0..n {
                let mut e = zero_expr();
                let lhs = if a == eps_index {
                    m.bracket(&eps, &m.unit(b))
                } else {
                    m.bracket_basis(a, b)
                };
                for (k, c) in lhs.iter().enumerate() {
                    if !c.is_zero() {
                        add_scaled(&mut e, c, &entry(i, k));
                    }
                }
                for j in 0..n {
                    let c = ad.get(i, j);
                    if !c.is_zero() {
                        add_scaled(&mut e, &-c.clone(), &entry(j, b));
                    }
                }
                if e.iter().any(|x| !x.is_zero()) {
                    rows.push((
                        e,
                        format!(
                            "ψ([{}, {}]) = [ψ({}), ψ({})] at {}",
                            source_name(a),
                            m.basis_name(b),
                            source_name(a),
                            m.basis_name(b),
                            m.basis_name(i)
                        ),
                    ));
                }
            }
        }
    }

    let coeffs = Matrix::from_rows(rows.iter().map(|(e, _)| e[..nvars].to_vec()).collect())?;
    let rhs: Vec<Rational> = rows.iter().map(|(e, _)| -e[nvars].clone()).collect();
    let Some((solution, kernel)) = coeffs.solve(&rhs) else {
        return Err(Error::Construction(format!(
            "no bracket-compatible extension; first unsatisfiable constraint: {}",
            first_inconsistent(&rows, nvars)
        )));
    };
    if !kernel.is_empty() {
        return Err(Error::Construction(format!(
            "extension is not unique: {} free parameters",
            kernel.len()
        )));
    }
    let mut psi = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let e = entry(i, j);
            let mut v = e[nvars].clone();
            for (x, s) in e[..nvars].iter().zip(&solution) {
                if !x.is_zero() {
                    v += x * s;
                }
            }
            psi.set(i, j, v);
        }
    }
    match check_automorphism(m, &psi)? {
        AutCheck::Pass => Ok(psi),
        other => Err(Error::Construction(format!(
            "solved extension is not an automorphism: {}",
            other.witness()
        ))),
    }
}

/// Label of the first row whose addition makes the system inconsistent.
fn first_inconsistent(rows: &[(Expr, String)], nvars: usize) -> String {
    let mut lhs = Subspace::zero(nvars);
    let mut aug = Subspace::zero(nvars + 1);
    for (e, label) in rows {
        lhs.insert(e[..nvars].to_vec());
        aug.insert(e.clone());
        if aug.dim() > lhs.dim() {
            return label.clone();
        }
    }
    "none found".into()
}
