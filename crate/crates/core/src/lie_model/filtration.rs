//! The filtration `𝔤^(p)` generated by the canonical ideal and its graded
//! quotient.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::spec::Parity;

use super::{canonical_ideal, LieModel};

/// Decreasing filtration `𝔤^(−1) = 𝔤₁`, `𝔤^(0) = 𝔤₀`,
/// `𝔤^(p+2) = [𝔤′, 𝔤^(p)]`.
#[derive(Clone, Debug)]
pub struct Filtration {
    ambient: usize,
    odd: Subspace,
    even: Subspace,
    levels: BTreeMap<i32, Subspace>,
}

impl Filtration {
    /// `𝔤^(p)`; below −1 this is the parity part, past the end zero.
    pub fn level(&self, p: i32) -> Subspace {
        if p < -1 {
            return if p % 2 == 0 { self.even.clone() } else { self.odd.clone() };
        }
        self.levels
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// Nonzero levels from −1 upward.
    pub fn levels(&self) -> &BTreeMap<i32, Subspace> {
        &self.levels
    }

    /// Largest `p` with `𝔤^(p) ≠ 0`, or −2 when everything vanishes.
    pub fn top(&self) -> i32 {
        self.levels.keys().next_back().copied().unwrap_or(-2)
    }
}

/// Computes the filtration by iterated bracket spans until zero.
pub fn filtration(m: &LieModel) -> Result<Filtration> {
    let ideal = canonical_ideal(m)?;
    let odd = m.parity_subspace(Parity::Odd);
    let even = m.parity_subspace(Parity::Even);
    let mut levels = BTreeMap::new();
    for start in [-1, 0] {
        let mut p = start;
        let mut current = if start == -1 { odd.clone() } else { even.clone() };
        while !current.is_zero() {
            let next = m.bracket_span(&ideal, &current);
            if !next.is_subspace_of(&current) {
                return Err(Error::Consistency(format!(
                    "filtration level {} is not contained in level {p}",
                    p + 2
                )));
            }
            if next == current {
                return Err(Error::Consistency(format!(
                    "filtration stalls at level {p} without reaching zero"
                )));
            }
            levels.insert(p, current);
            current = next;
            p += 2;
        }
    }
    Ok(Filtration {
        ambient: m.dim(),
        odd,
        even,
        levels,
    })
}

/// Pairs `(p, q)` with `[𝔤^(p), 𝔤^(q)] ⊄ 𝔤^(p+q)`, for `−1 ≤ p ≤ q ≤ top`.
pub fn inclusion_violations(m: &LieModel, f: &Filtration) -> Vec<(i32, i32)> {
    let top = f.top();
    let mut out = Vec::new();
    for p in -1..=top {
        for q in p..=top {
            let span = m.bracket_span(&f.level(p), &f.level(q));
            if !span.is_subspace_of(&f.level(p + q)) {
                out.push((p, q));
            }
        }
    }
    out
}

/// `⊕_{i≥0} 𝔤^{p+2i}` from the degree labels.
pub fn graded_tail(m: &LieModel, p: i32) -> Subspace {
    let (_, hi) = m.degree_range();
    Subspace::coordinate(
        m.dim(),
        (0..m.dim()).filter(|&i| {
            let d = m.degrees()[i];
            d >= p && d <= hi && (d - p) % 2 == 0
        }),
    )
}

/// Levels `p` where the filtration differs from `⊕_{i≥0} 𝔤^{p+2i}`.
pub fn splitting_mismatches(m: &LieModel, f: &Filtration) -> Vec<i32> {
    let (_, hi) = m.degree_range();
    (-1..=hi.max(f.top()))
        .filter(|&p| f.level(p) != graded_tail(m, p))
        .collect()
}

/// Degree pairs `(p, q)`, `p ≤ q`, where `[𝔤^p, 𝔤^q] ≠ 𝔤^{p+q}`.
pub fn bracket_surjectivity_failures(m: &LieModel) -> Vec<(i32, i32)> {
    let (lo, hi) = m.degree_range();
    let mut out = Vec::new();
    for p in lo..=hi {
        for q in p..=hi {
            let target = m.degree_subspace(p + q);
            let span = m.bracket_span(&m.degree_subspace(p), &m.degree_subspace(q));
            if span != target {
                out.push((p, q));
            }
        }
    }
    out
}

/// One graded piece `𝔤^(p)/𝔤^(p+2)` with a complement of coset
/// representatives.
#[derive(Clone, Debug)]
pub struct FiltrationQuotient {
    pub degree: i32,
    lower: Subspace,
    reps: Subspace,
}

impl FiltrationQuotient {
    fn new(degree: i32, upper: &Subspace, lower: Subspace) -> Self {
        let reps = Subspace::from_vectors(
            upper.ambient(),
            upper.basis().iter().map(|v| lower.reduce(v)),
        );
        Self { degree, lower, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    /// Coset representatives, spanning a complement of `𝔤^(p+2)`.
    pub fn representatives(&self) -> &[Vector] {
        self.reps.basis()
    }

    /// Coordinates of the class of `v ∈ 𝔤^(p)`; `None` if `v ∉ 𝔤^(p)`.
    pub fn class_coordinates(&self, v: &[crate::rational::Rational]) -> Option<Vector> {
        self.reps.coordinates(&self.lower.reduce(v))
    }
}

/// `𝔤ᵍʳ = ⊕_p 𝔤^(p)/𝔤^(p+2)` as a model of its own, with the induced
/// bracket.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    pub model: LieModel,
    pieces: BTreeMap<i32, FiltrationQuotient>,
    offsets: BTreeMap<i32, usize>,
    reps: Vec<Vector>,
}

impl GradedQuotient {
    /// Builds the quotient of any model; fails if the induced bracket is
    /// not well defined.
    pub fn new(m: &LieModel, f: &Filtration) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        let mut offsets = BTreeMap::new();
        let mut reps = Vec::new();
        let mut degrees = Vec::new();
        for p in -1..=f.top() {
            let piece = FiltrationQuotient::new(p, &f.level(p), f.level(p + 2));
            if piece.dim() == 0 {
                continue;
            }
            offsets.insert(p, reps.len());
            reps.extend(piece.representatives().iter().cloned());
            degrees.extend(std::iter::repeat_n(p, piece.dim()));
            pieces.insert(p, piece);
        }
        let n = reps.len();
        let mut structure = Vec::with_capacity(n * n);
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let s = degrees[i] + degrees[j];
                let br = m.bracket(a, b);
                let mut entry = Vec::new();
                match pieces.get(&s) {
                    Some(piece) => {
                        let coords = piece.class_coordinates(&br).ok_or_else(|| {
                            Error::Consistency(format!(
                                "bracket of quotient basis {i}, {j} leaves level {s}"
                            ))
                        })?;
                        let off = offsets[&s];
                        entry.extend(
                            coords
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .map(|(k, c)| (off + k, c)),
                        );
                    }
                    None => {
                        if !f.level(s).contains(&br) {
                            return Err(Error::Consistency(format!(
                                "bracket of quotient basis {i}, {j} leaves level {s}"
                            )));
                        }
                    }
                }
                structure.push(entry);
            }
        }
        let fields = reps.iter().map(|v| m.field_of(v)).collect();
        let model = LieModel::from_parts(m.spec(), fields, degrees, structure);
        Ok(Self {
            model,
            pieces,
            offsets,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coset representatives in the original model, one per basis vector.
    pub fn representatives(&self) -> &[Vector] {
        &self.reps
    }

    pub fn piece(&self, p: i32) -> Option<&FiltrationQuotient> {
        self.pieces.get(&p)
    }

    /// Quotient coordinates of the class of `v ∈ 𝔤^(p)` in level `p`.
    pub fn class_of(&self, p: i32, v: &[crate::rational::Rational]) -> Option<Vector> {
        let mut out = vec![crate::rational::zero(); self.dim()];
        let Some(piece) = self.pieces.get(&p) else {
            // An empty piece: v must lie in 𝔤^(p+2).
            return v.iter().all(Zero::is_zero).then_some(out);
        };
        let coords = piece.class_coordinates(v)?;
        let off = self.offsets[&p];
        for (k, c) in coords.into_iter().enumerate() {
            out[off + k] = c;
        }
        Some(out)
    }

    /// Degree-preserving map to the model sending a class in level `p` to
    /// the degree-`p` component of its representative.
    pub fn projection_map(&self, m: &LieModel) -> Matrix {
        let cols: Vec<Vector> = self
            .reps
            .iter()
            .zip(self.model.degrees())
            .map(|(v, &p)| m.degree_component(v, p))
            .collect();
        Matrix::from_columns(m.dim(), &cols)
    }
}

/// Graded quotient together with a verified graded isomorphism onto the
/// model.
#[derive(Clone, Debug)]
pub struct GradedIsomorphism {
    pub quotient: GradedQuotient,
    /// Columns: images of the quotient basis in model coordinates.
    pub iso: Matrix,
    pub inverse: Matrix,
}

/// Builds `𝔤ᵍʳ` and its isomorphism to `𝔤`. Requires the rank hypothesis
/// `r > 2`, or `s > 0` with `r > 1`.
pub fn graded_quotient(m: &LieModel) -> Result<GradedIsomorphism> {
    let spec = m.spec();
    if !spec.filtration_hypothesis() {
        return Err(Error::Unsupported(format!(
            "graded quotient needs rk V > 2 or dim M > 0 and rk V > 1; got {spec}"
        )));
    }
    let f = filtration(m)?;
    let quotient = GradedQuotient::new(m, &f)?;
    if quotient.dim() != m.dim() {
        return Err(Error::Consistency(format!(
            "graded quotient has dimension {} but the model has {}",
            quotient.dim(),
            m.dim()
        )));
    }
    let iso = quotient.projection_map(m);
    let inverse = iso
        .inverse()
        .ok_or_else(|| Error::Consistency("degree projection is not invertible".into()))?;
    let q = &quotient.model;
    for i in 0..q.dim() {
        for j in 0..q.dim() {
            let lhs = iso.mul_vec(&q.bracket_basis(i, j));
            let rhs = m.bracket(&iso.column(i), &iso.column(j));
            if lhs != rhs {
                return Err(Error::Consistency(format!(
                    "degree projection does not respect the bracket of quotient basis {i}, {j}"
                )));
            }
        }
    }
    Ok(GradedIsomorphism {
        quotient,
        iso,
        inverse,
    })
}
