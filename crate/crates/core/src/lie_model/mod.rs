//! Finite-dimensional Lie superalgebra snapshots of a model: a canonical
//! basis of homogeneous fields and exact structure constants, plus the
//! canonical subspaces computed from them.

mod filtration;
mod grading;
mod nilpotent;

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::monomial::{BaseMonomial, OddMonomial};
use crate::rational::{self, Rational};
use crate::spec::{ModelSpec, Parity};
use crate::vector_field::{SuperVectorField, Target, WireField};

pub use filtration::{
    bracket_surjectivity_failures, filtration, graded_quotient, graded_tail, inclusion_violations,
    splitting_mismatches, Filtration, FiltrationQuotient, GradedIsomorphism, GradedQuotient,
};
pub use grading::{canonical_ideal, grading_eigenspaces, positive_even_degrees};
pub use nilpotent::{
    acts_nilpotently, bruteforce_max_nilpotent_ideal, ideal_closure, is_ad_nilpotent,
    verify_nilpotent_ideal_candidate, CandidateCheck, NilpotentIdeal,
};

/// Default cap on the model dimension.
pub const DEFAULT_DIM_CAP: usize = 2000;

/// Monomial description of a canonical basis field `base·odd·∂_target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub target: Target,
    pub base: BaseMonomial,
    pub odd: OddMonomial,
}

/// Sparse structure constants for one ordered basis pair.
type Bracket = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
pub struct LieModel {
    spec: ModelSpec,
    fields: Vec<SuperVectorField>,
    degrees: Vec<i32>,
    parities: Vec<Parity>,
    labels: Option<Vec<BasisLabel>>,
    index: HashMap<BasisLabel, usize>,
    structure: Vec<Bracket>,
}

/// Canonical basis labels of the derivation algebra of `B_d(s) ⊗ Λ(ξ)`.
///
/// A coefficient of `∂/∂xⁱ` must lie in the maximal ideal of the base
/// (positive base degree): a constant there would not preserve the
/// truncation ideal. Coefficients of `∂/∂ξᵃ` are unrestricted.
pub fn basis_labels(spec: ModelSpec) -> Vec<(i32, BasisLabel)> {
    let bases = spec.base_monomials();
    let odds = spec.odd_monomials();
    let mut out = Vec::new();
    for i in 1..=spec.base_dim {
        for b in bases.iter().filter(|b| b.degree() >= 1) {
            for &o in &odds {
                out.push((
                    o.len() as i32,
                    BasisLabel {
                        target: Target::Even(i),
                        base: b.clone(),
                        odd: o,
                    },
                ));
            }
        }
    }
    for a in 1..=spec.odd_rank {
        for b in &bases {
            for &o in &odds {
                out.push((
                    o.len() as i32 - 1,
                    BasisLabel {
                        target: Target::Odd(a),
                        base: b.clone(),
                        odd: o,
                    },
                ));
            }
        }
    }
    // degree, then ∂x-type before ∂ξ-type, then (base, odd, target index)
    out.sort_by(|(da, la), (db, lb)| {
        let kind = |t: Target| match t {
            Target::Even(i) => (0, i),
            Target::Odd(a) => (1, a),
        };
        let (ka, ia) = kind(la.target);
        let (kb, ib) = kind(lb.target);
        da.cmp(db)
            .then(ka.cmp(&kb))
            .then_with(|| la.base.cmp(&lb.base))
            .then_with(|| la.odd.cmp(&lb.odd))
            .then(ia.cmp(&ib))
    });
    out
}

/// Dimension of the derivation algebra without building it.
pub fn model_dimension(spec: ModelSpec) -> usize {
    let bases = spec.base_monomials().len();
    let odds = 1usize << spec.odd_rank;
    spec.base_dim * (bases - 1) * odds + spec.odd_rank * bases * odds
}

/// Builds the model with the default dimension cap.
pub fn build_model(spec: ModelSpec) -> Result<LieModel> {
    build_model_capped(spec, DEFAULT_DIM_CAP)
}

pub fn build_model_capped(spec: ModelSpec, dim_cap: usize) -> Result<LieModel> {
    let dim = model_dimension(spec);
    if dim > dim_cap {
        return Err(Error::Resource(format!(
            "model {spec} has dimension {dim}, above the cap {dim_cap}"
        )));
    }
    let labelled = basis_labels(spec);
    let mut degrees = Vec::with_capacity(dim);
    let mut labels = Vec::with_capacity(dim);
    let mut fields = Vec::with_capacity(dim);
    for (deg, label) in labelled {
        fields.push(SuperVectorField::monomial_field(
            spec,
            label.target,
            label.base.clone(),
            label.odd,
        ));
        degrees.push(deg);
        labels.push(label);
    }
    let parities = degrees.iter().map(|&d| Parity::of(d as i64)).collect();
    let index = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();
    let mut model = LieModel {
        spec,
        fields,
        degrees,
        parities,
        labels: Some(labels),
        index,
        structure: Vec::new(),
    };
    // Row-major over (i, j); the parallel map preserves order.
    let n = model.dim();
    let structure: Result<Vec<Bracket>> = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let b = model.fields[i].bracket(&model.fields[j])?;
            let coords = model.coords_of(&b).map_err(|e| {
                Error::Consistency(format!("bracket of basis {i},{j} left the model: {e}"))
            })?;
            Ok(sparse(&coords))
        })
        .collect();
    model.structure = structure?;
    Ok(model)
}

fn sparse(v: &[Rational]) -> Bracket {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

impl LieModel {
    /// Assembles a model from explicit data (used for quotients).
    pub(crate) fn from_parts(
        spec: ModelSpec,
        fields: Vec<SuperVectorField>,
        degrees: Vec<i32>,
        structure: Vec<Vec<(usize, Rational)>>,
    ) -> Self {
        let parities = degrees.iter().map(|&d| Parity::of(d as i64)).collect();
        Self {
            spec,
            fields,
            degrees,
            parities,
            labels: None,
            index: HashMap::new(),
            structure,
        }
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    pub fn basis(&self) -> &[SuperVectorField] {
        &self.fields
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn labels(&self) -> Option<&[BasisLabel]> {
        self.labels.as_deref()
    }

    pub fn degree_range(&self) -> (i32, i32) {
        let lo = self.degrees.iter().copied().min().unwrap_or(0);
        let hi = self.degrees.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    pub fn indices_of_degree(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn indices_of_parity(&self, p: Parity) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parities[i] == p).collect()
    }

    /// Coordinate subspace of one parity (`𝔤₀` or `𝔤₁`).
    pub fn parity_subspace(&self, p: Parity) -> Subspace {
        Subspace::coordinate(self.dim(), self.indices_of_parity(p))
    }

    /// Coordinate subspace spanned by the basis fields of degree `k`.
    pub fn degree_subspace(&self, k: i32) -> Subspace {
        Subspace::coordinate(self.dim(), self.indices_of_degree(k))
    }

    pub fn unit(&self, i: usize) -> Vector {
        unit_vector(self.dim(), i)
    }

    pub fn zero_vector(&self) -> Vector {
        zero_vector(self.dim())
    }

    /// Coordinates of a field in the canonical basis. Only available for
    /// monomial models; errors if the field has a term outside the model.
    pub fn coords_of(&self, field: &SuperVectorField) -> Result<Vector> {
        self.spec.ensure_same(&field.spec())?;
        if self.labels.is_none() {
            return Err(Error::Unsupported(
                "coordinates by monomial lookup need a canonical monomial model".into(),
            ));
        }
        let mut v = self.zero_vector();
        for target in field.targets() {
            for (b, o, c) in field.coeff(target).terms() {
                let key = BasisLabel {
                    target,
                    base: b.clone(),
                    odd: *o,
                };
                match self.index.get(&key) {
                    Some(&k) => v[k] = c.clone(),
                    None => {
                        return Err(Error::Input(format!(
                            "term {}{}·{} is not in the model {}",
                            b, o, target, self.spec
                        )))
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn field_of(&self, v: &[Rational]) -> SuperVectorField {
        let mut out = SuperVectorField::zero(self.spec);
        for (c, f) in v.iter().zip(&self.fields) {
            if !c.is_zero() {
                out.add_scaled_in_place(f, c);
            }
        }
        out
    }

    /// Coordinates of the Euler field.
    pub fn euler_vector(&self) -> Result<Vector> {
        self.coords_of(&SuperVectorField::euler(self.spec))
    }

    /// Sparse structure constants `c_{ij}^k` of `[e_i, e_j]`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.structure[i * self.dim() + j]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = self.zero_vector();
        for (k, c) in self.structure(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = self.zero_vector();
        let ys: Vec<(usize, &Rational)> = y
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let c = xi * yj;
                for (k, s) in self.structure(i, j) {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    /// `ad_x` as a matrix: column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, s) in self.structure(i, j) {
                    let cur = m.get(*k, j) + xi * s;
                    m.set(*k, j, cur);
                }
            }
        }
        m
    }

    /// Span of all brackets `[a, b]` with `a ∈ left`, `b ∈ right`.
    pub fn bracket_span(&self, left: &Subspace, right: &Subspace) -> Subspace {
        let mut out = Subspace::zero(self.dim());
        for a in left.basis() {
            for b in right.basis() {
                out.insert(self.bracket(a, b));
            }
        }
        out
    }

    /// Components of a coordinate vector per degree label.
    pub fn degree_component(&self, v: &[Rational], k: i32) -> Vector {
        v.iter()
            .enumerate()
            .map(|(i, c)| {
                if self.degrees[i] == k {
                    c.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    /// Parity of a coordinate vector when homogeneous and nonzero.
    pub fn vector_parity(&self, v: &[Rational]) -> Option<Parity> {
        let mut it = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.parities[i]);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Smallest degree carrying a nonzero coordinate.
    pub fn min_degree_of(&self, v: &[Rational]) -> Option<i32> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.degrees[i])
            .min()
    }

    /// First basis pair violating super antisymmetry
    /// `[e_i, e_j] = −(−1)^{|e_i||e_j|} [e_j, e_i]`.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let mut sum = self.bracket_basis(i, j);
                let back = self.bracket_basis(j, i);
                let sign = if self.parities[i].both_odd(self.parities[j]) {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                axpy(&mut sum, &sign, &back);
                if !is_zero_vector(&sum) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Super Jacobi defect
    /// `[a,[b,c]] − [[a,b],c] − (−1)^{|a||b|} [b,[a,c]]` on basis elements.
    pub fn jacobi_defect(&self, a: usize, b: usize, c: usize) -> Vector {
        let ea = self.unit(a);
        let eb = self.unit(b);
        let ec = self.unit(c);
        let mut d = self.bracket(&ea, &self.bracket_basis(b, c));
        let ab_c = self.bracket(&self.bracket_basis(a, b), &ec);
        let b_ac = self.bracket(&eb, &self.bracket_basis(a, c));
        axpy(&mut d, &-Rational::one(), &ab_c);
        let sign = if self.parities[a].both_odd(self.parities[b]) {
            Rational::one()
        } else {
            -Rational::one()
        };
        axpy(&mut d, &sign, &b_ac);
        d
    }

    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        (0..n * n * n)
            .into_par_iter()
            .find_first(|&t| {
                let (a, b, c) = (t / (n * n), (t / n) % n, t % n);
                !is_zero_vector(&self.jacobi_defect(a, b, c))
            })
            .map(|t| (t / (n * n), (t / n) % n, t % n))
    }

    /// Short printable name for basis element `i`.
    pub fn basis_name(&self, i: usize) -> String {
        self.fields[i].to_string()
    }

    pub fn export(&self) -> ModelExport {
        let basis = (0..self.dim())
            .map(|i| {
                let (target_kind, target_index, base, odd) = match &self.labels {
                    Some(l) => {
                        let lab = &l[i];
                        let (kind, idx) = match lab.target {
                            Target::Even(i) => ("even", i),
                            Target::Odd(a) => ("odd", a),
                        };
                        (
                            Some(kind.to_string()),
                            Some(idx),
                            Some(lab.base.exponents().to_vec()),
                            Some(lab.odd.indices()),
                        )
                    }
                    None => (None, None, None, None),
                };
                BasisDescriptor {
                    index: i,
                    name: self.basis_name(i),
                    target_kind,
                    target_index,
                    base,
                    odd,
                    representative: self.labels.is_none().then(|| self.fields[i].to_wire()),
                    degree: self.degrees[i],
                    parity: self.parities[i].bit(),
                }
            })
            .collect();
        let mut structure = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (k, c) in self.structure(i, j) {
                    structure.push((i, j, *k, rational::format(c)));
                }
            }
        }
        ModelExport {
            spec: self.spec,
            dim: self.dim(),
            basis,
            structure,
        }
    }
}

/// JSON export of a model. Structure constants are sparse triples
/// `[i, j, k, "p/q"]` ordered by `(i, j, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelExport {
    pub spec: ModelSpec,
    pub dim: usize,
    pub basis: Vec<BasisDescriptor>,
    pub structure: Vec<(usize, usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDescriptor {
    pub index: usize,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<WireField>,
    pub degree: i32,
    pub parity: u8,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn pure_odd_dimensions() {
        for r in 1..=4 {
            let m = build_model(ModelSpec::pure_odd(r).unwrap()).unwrap();
            assert_eq!(m.dim(), r << r);
            for k in -1..=(r as i32 - 1) {
                assert_eq!(
                    m.indices_of_degree(k).len(),
                    binom(r, (k + 1) as usize) * r,
                    "r={r} k={k}"
                );
            }
        }
    }

    #[test]
    fn jet_model_dimension() {
        // (1,3,2): ∂x coefficients need base degree ≥ 1: 3·4, plus 2·4·4
        let spec = ModelSpec::new(1, 3, 2).unwrap();
        assert_eq!(model_dimension(spec), 44);
        let m = build_model(spec).unwrap();
        assert_eq!(m.dim(), 44);
        assert!(m.antisymmetry_violation().is_none());
    }

    #[test]
    fn dimension_cap() {
        let spec = ModelSpec::pure_odd(4).unwrap();
        assert!(matches!(build_model_capped(spec, 63), Err(Error::Resource(_))));
    }

    #[test]
    fn canonical_order_starts_with_partials() {
        let m = build_model(ModelSpec::pure_odd(2).unwrap()).unwrap();
        let names: Vec<String> = (0..m.dim()).map(|i| m.basis_name(i)).collect();
        assert_eq!(
            names,
            vec![
                "1∂ξ1", "1∂ξ2", "ξ1∂ξ1", "ξ1∂ξ2", "ξ2∂ξ1", "ξ2∂ξ2", "ξ1ξ2∂ξ1", "ξ1ξ2∂ξ2"
            ]
        );
    }

    #[test]
    fn structure_matches_field_brackets() {
        let m = build_model(ModelSpec::new(1, 2, 1).unwrap()).unwrap();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let direct = m.basis()[i].bracket(&m.basis()[j]).unwrap();
                assert_eq!(m.field_of(&m.bracket_basis(i, j)), direct);
            }
        }
    }

    #[test]
    fn w3_jacobi_on_structure_constants() {
        let m = build_model(ModelSpec::pure_odd(3).unwrap()).unwrap();
        assert!(m.antisymmetry_violation().is_none());
        assert!(m.jacobi_violation().is_none());
    }

    #[test]
    fn export_is_sorted_and_string_valued() {
        let m = build_model(ModelSpec::pure_odd(1).unwrap()).unwrap();
        let ex = m.export();
        assert_eq!(ex.dim, 2);
        let json = serde_json::to_string(&ex).unwrap();
        assert!(json.contains("\"structure\""));
        // [∂ξ, ξ∂ξ] = ∂ξ
        assert!(ex.structure.contains(&(0, 1, 0, "1".to_string())));
        assert!(ex.structure.contains(&(1, 0, 0, "-1".to_string())));
    }
}
