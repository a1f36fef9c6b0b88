//! Superderivations of `A`: application, superbracket, the Euler field, the
//! Z-degree decomposition, and the anchor of degree-zero fields.
//!
//! A field is stored as its values on the coordinates:
//! `X = Σ fⁱ ∂/∂xⁱ + Σ gᵃ ∂/∂ξᵃ`, coefficients written to the left of the
//! partial derivatives. `∂/∂ξᵃ` is the left derivative throughout.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{BaseMonomial, OddMonomial};
use crate::rational::{self, Rational};
use crate::spec::{ModelSpec, Parity};
use crate::superfunction::{SuperFunction, WireTerm};

/// Coordinate direction of a partial derivative, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// `∂/∂xⁱ`
    Even(usize),
    /// `∂/∂ξᵃ`
    Odd(usize),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Even(i) => write!(f, "∂x{i}"),
            Target::Odd(a) => write!(f, "∂ξ{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVectorField {
    spec: ModelSpec,
    even_coeffs: Vec<SuperFunction>,
    odd_coeffs: Vec<SuperFunction>,
}

impl SuperVectorField {
    pub fn zero(spec: ModelSpec) -> Self {
        Self {
            spec,
            even_coeffs: vec![SuperFunction::zero(spec); spec.base_dim],
            odd_coeffs: vec![SuperFunction::zero(spec); spec.odd_rank],
        }
    }

    pub fn new(
        spec: ModelSpec,
        even_coeffs: Vec<SuperFunction>,
        odd_coeffs: Vec<SuperFunction>,
    ) -> Result<Self> {
        if even_coeffs.len() != spec.base_dim {
            return Err(Error::Input(format!(
                "even_coeffs: expected {} entries, got {}",
                spec.base_dim,
                even_coeffs.len()
            )));
        }
        if odd_coeffs.len() != spec.odd_rank {
            return Err(Error::Input(format!(
                "odd_coeffs: expected {} entries, got {}",
                spec.odd_rank,
                odd_coeffs.len()
            )));
        }
        for c in even_coeffs.iter().chain(&odd_coeffs) {
            spec.ensure_same(&c.spec())?;
        }
        Ok(Self {
            spec,
            even_coeffs,
            odd_coeffs,
        })
    }

    /// `coeff · ∂_target`.
    pub fn term(spec: ModelSpec, target: Target, coeff: SuperFunction) -> Self {
        let mut x = Self::zero(spec);
        match target {
            Target::Even(i) => x.even_coeffs[i - 1] = coeff,
            Target::Odd(a) => x.odd_coeffs[a - 1] = coeff,
        }
        x
    }

    /// `base · odd · ∂_target` with unit coefficient.
    pub fn monomial_field(
        spec: ModelSpec,
        target: Target,
        base: BaseMonomial,
        odd: OddMonomial,
    ) -> Self {
        Self::term(
            spec,
            target,
            SuperFunction::monomial(spec, base, odd, Rational::one()),
        )
    }

    pub fn partial_odd(spec: ModelSpec, a: usize) -> Self {
        Self::term(spec, Target::Odd(a), SuperFunction::one(spec))
    }

    pub fn partial_even(spec: ModelSpec, i: usize) -> Self {
        Self::term(spec, Target::Even(i), SuperFunction::one(spec))
    }

    /// The Euler field `ε = Σ ξᵃ ∂/∂ξᵃ`.
    pub fn euler(spec: ModelSpec) -> Self {
        let mut x = Self::zero(spec);
        for a in 1..=spec.odd_rank {
            x.odd_coeffs[a - 1] = SuperFunction::odd_generator(spec, a);
        }
        x
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn even_coeffs(&self) -> &[SuperFunction] {
        &self.even_coeffs
    }

    pub fn odd_coeffs(&self) -> &[SuperFunction] {
        &self.odd_coeffs
    }

    pub fn coeff(&self, target: Target) -> &SuperFunction {
        match target {
            Target::Even(i) => &self.even_coeffs[i - 1],
            Target::Odd(a) => &self.odd_coeffs[a - 1],
        }
    }

    pub fn targets(&self) -> impl Iterator<Item = Target> {
        let s = self.spec.base_dim;
        let r = self.spec.odd_rank;
        (1..=s).map(Target::Even).chain((1..=r).map(Target::Odd))
    }

    pub fn is_zero(&self) -> bool {
        self.even_coeffs
            .iter()
            .chain(&self.odd_coeffs)
            .all(SuperFunction::is_zero)
    }

    fn map_coeffs(&self, f: impl Fn(&SuperFunction) -> SuperFunction) -> Self {
        Self {
            spec: self.spec,
            even_coeffs: self.even_coeffs.iter().map(&f).collect(),
            odd_coeffs: self.odd_coeffs.iter().map(&f).collect(),
        }
    }

    fn zip_coeffs(
        &self,
        other: &Self,
        f: impl Fn(&SuperFunction, &SuperFunction) -> SuperFunction,
    ) -> Result<Self> {
        self.spec.ensure_same(&other.spec)?;
        Ok(Self {
            spec: self.spec,
            even_coeffs: self
                .even_coeffs
                .iter()
                .zip(&other.even_coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
            odd_coeffs: self
                .odd_coeffs
                .iter()
                .zip(&other.odd_coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_coeffs(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_coeffs(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|f| f.scale(c))
    }

    pub(crate) fn add_scaled_in_place(&mut self, other: &Self, c: &Rational) {
        for (a, b) in self.even_coeffs.iter_mut().zip(&other.even_coeffs) {
            a.add_scaled(b, c);
        }
        for (a, b) in self.odd_coeffs.iter_mut().zip(&other.odd_coeffs) {
            a.add_scaled(b, c);
        }
    }

    /// Even and odd parts. `∂/∂xⁱ` is even and `∂/∂ξᵃ` odd, so the parity of
    /// a term is its coefficient parity, shifted by one on odd targets.
    pub fn parity_parts(&self) -> (Self, Self) {
        let mut even = Self::zero(self.spec);
        let mut odd = Self::zero(self.spec);
        for (i, c) in self.even_coeffs.iter().enumerate() {
            let (ce, co) = c.parity_parts();
            even.even_coeffs[i] = ce;
            odd.even_coeffs[i] = co;
        }
        for (a, c) in self.odd_coeffs.iter().enumerate() {
            let (ce, co) = c.parity_parts();
            even.odd_coeffs[a] = co;
            odd.odd_coeffs[a] = ce;
        }
        (even, odd)
    }

    /// Parity when homogeneous and nonzero.
    pub fn parity(&self) -> Option<Parity> {
        let (even, odd) = self.parity_parts();
        match (even.is_zero(), odd.is_zero()) {
            (false, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// `X(a)`, with the truncation applied.
    pub fn apply(&self, a: &SuperFunction) -> Result<SuperFunction> {
        self.spec.ensure_same(&a.spec())?;
        Ok(self.apply_unchecked(a))
    }

    pub(crate) fn apply_unchecked(&self, a: &SuperFunction) -> SuperFunction {
        let mut out = SuperFunction::zero(self.spec);
        for (i, f) in self.even_coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let da = a.d_even(i + 1);
            if !da.is_zero() {
                out = &out + &f.mul_unchecked(&da);
            }
        }
        for (k, g) in self.odd_coeffs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let da = a.d_odd(k + 1);
            if !da.is_zero() {
                out = &out + &g.mul_unchecked(&da);
            }
        }
        out
    }

    /// Superbracket `[X, Y] = X∘Y − (−1)^{|X||Y|} Y∘X`.
    ///
    /// Computed on coordinates: the coefficient of `∂_z` in `[X, Y]` is
    /// `X(Y(z)) − (−1)^{|X||Y|} Y(X(z))`. Inhomogeneous arguments are split by
    /// parity and the pieces combined bilinearly.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.spec.ensure_same(&other.spec)?;
        let (xe, xo) = self.parity_parts();
        let (ye, yo) = other.parity_parts();
        let mut out = Self::zero(self.spec);
        for (x, px) in [(&xe, Parity::Even), (&xo, Parity::Odd)] {
            if x.is_zero() {
                continue;
            }
            for (y, py) in [(&ye, Parity::Even), (&yo, Parity::Odd)] {
                if y.is_zero() {
                    continue;
                }
                let b = x.bracket_homogeneous(y, px.both_odd(py));
                out.add_scaled_in_place(&b, &Rational::one());
            }
        }
        Ok(out)
    }

    fn bracket_homogeneous(&self, other: &Self, anti: bool) -> Self {
        let combine = |xy: SuperFunction, yx: SuperFunction| {
            if anti {
                &xy + &yx
            } else {
                &xy - &yx
            }
        };
        let mut out = Self::zero(self.spec);
        for i in 0..self.spec.base_dim {
            out.even_coeffs[i] = combine(
                self.apply_unchecked(&other.even_coeffs[i]),
                other.apply_unchecked(&self.even_coeffs[i]),
            );
        }
        for a in 0..self.spec.odd_rank {
            out.odd_coeffs[a] = combine(
                self.apply_unchecked(&other.odd_coeffs[a]),
                other.apply_unchecked(&self.odd_coeffs[a]),
            );
        }
        out
    }

    /// Components by Z-degree: `∂/∂xⁱ` terms with `m` odd generators have
    /// degree `m`, `∂/∂ξᵃ` terms with `m+1` odd generators have degree `m`.
    pub fn degree_decompose(&self) -> BTreeMap<i32, SuperVectorField> {
        let mut out: BTreeMap<i32, SuperVectorField> = BTreeMap::new();
        for target in self.targets() {
            let shift = match target {
                Target::Even(_) => 0,
                Target::Odd(_) => -1,
            };
            for (k, part) in self.coeff(target).grade_split() {
                let m = k as i32 + shift;
                let entry = out.entry(m).or_insert_with(|| Self::zero(self.spec));
                match target {
                    Target::Even(i) => entry.even_coeffs[i - 1] = part,
                    Target::Odd(a) => entry.odd_coeffs[a - 1] = part,
                }
            }
        }
        out
    }

    /// The single Z-degree of a nonzero homogeneous field.
    pub fn degree(&self) -> Option<i32> {
        let parts = self.degree_decompose();
        if parts.len() == 1 {
            parts.keys().next().copied()
        } else {
            None
        }
    }

    /// Anchor `ρ(Σ fⁱ(x) ∂/∂xⁱ + Σ gᵃ_b(x) ξᵇ ∂/∂ξᵃ) = Σ fⁱ(x) ∂/∂xⁱ`.
    ///
    /// Defined on fields of Z-degree 0 only (the zero field included).
    pub fn anchor(&self) -> Result<Self> {
        let parts = self.degree_decompose();
        if parts.keys().any(|&m| m != 0) {
            return Err(Error::Precondition(format!(
                "anchor is defined on degree-0 fields; got components in degrees {:?}",
                parts.keys().collect::<Vec<_>>()
            )));
        }
        let mut out = Self::zero(self.spec);
        out.even_coeffs = self.even_coeffs.clone();
        Ok(out)
    }

    pub fn to_wire(&self) -> WireField {
        WireField {
            spec: self.spec,
            even_coeffs: self.even_coeffs.iter().map(|c| c.to_wire()).collect(),
            odd_coeffs: self.odd_coeffs.iter().map(|c| c.to_wire()).collect(),
        }
    }

    pub fn from_wire(w: &WireField) -> Result<Self> {
        let even = w
            .even_coeffs
            .iter()
            .map(|t| SuperFunction::from_wire(w.spec, t))
            .collect::<Result<Vec<_>>>()?;
        let odd = w
            .odd_coeffs
            .iter()
            .map(|t| SuperFunction::from_wire(w.spec, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(w.spec, even, odd)
    }
}

/// JSON form: `{"spec": ModelSpec, "even_coeffs": [..], "odd_coeffs": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireField {
    pub spec: ModelSpec,
    pub even_coeffs: Vec<Vec<WireTerm>>,
    pub odd_coeffs: Vec<Vec<WireTerm>>,
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for t in self.targets() {
            let c = self.coeff(t);
            if c.is_zero() {
                continue;
            }
            if c.len() == 1 {
                parts.push(format!("{c}{t}"));
            } else {
                parts.push(format!("({c}){t}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Compares `[X,Y]` from the coefficient formula with the operator
/// `X∘Y − (−1)^{|X||Y|} Y∘X` on every basis monomial of `A`. Returns the first
/// monomial where they differ.
pub fn bracket_operator_mismatch(
    x: &SuperVectorField,
    y: &SuperVectorField,
) -> Result<Option<SuperFunction>> {
    let spec = x.spec();
    spec.ensure_same(&y.spec())?;
    let (xe, xo) = x.parity_parts();
    let (ye, yo) = y.parity_parts();
    let bracket = x.bracket(y)?;
    for base in spec.base_monomials() {
        for odd in spec.odd_monomials() {
            let a = SuperFunction::monomial(spec, base.clone(), odd, rational::one());
            let mut op = SuperFunction::zero(spec);
            for (xp, px) in [(&xe, Parity::Even), (&xo, Parity::Odd)] {
                for (yp, py) in [(&ye, Parity::Even), (&yo, Parity::Odd)] {
                    let xy = xp.apply_unchecked(&yp.apply_unchecked(&a));
                    let yx = yp.apply_unchecked(&xp.apply_unchecked(&a));
                    op = &op + &xy;
                    op = if px.both_odd(py) { &op + &yx } else { &op - &yx };
                }
            }
            if bracket.apply_unchecked(&a) != op {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn w(r: usize) -> ModelSpec {
        ModelSpec::pure_odd(r).unwrap()
    }

    fn xi(spec: ModelSpec, a: usize) -> SuperFunction {
        SuperFunction::odd_generator(spec, a)
    }

    fn xi12(spec: ModelSpec) -> SuperFunction {
        xi(spec, 1).multiply(&xi(spec, 2)).unwrap()
    }

    #[test]
    fn left_derivative_application() {
        let spec = w(2);
        let d1 = SuperVectorField::partial_odd(spec, 1);
        let d2 = SuperVectorField::partial_odd(spec, 2);
        assert_eq!(d1.apply(&xi12(spec)).unwrap(), xi(spec, 2));
        assert_eq!(d2.apply(&xi12(spec)).unwrap(), -&xi(spec, 1));
    }

    #[test]
    fn euler_counts_odd_degree() {
        let spec = w(2);
        let e = SuperVectorField::euler(spec);
        assert_eq!(e.apply(&xi12(spec)).unwrap(), xi12(spec).scale(&int(2)));
        assert!(e.apply(&SuperFunction::one(spec)).unwrap().is_zero());
        assert!(e.bracket(&e).unwrap().is_zero());
        assert_eq!(e.to_string(), "ξ1∂ξ1 + ξ2∂ξ2");
    }

    #[test]
    fn euler_against_partial() {
        let spec = w(2);
        let e = SuperVectorField::euler(spec);
        let d1 = SuperVectorField::partial_odd(spec, 1);
        assert_eq!(e.bracket(&d1).unwrap(), d1.scale(&int(-1)));
        assert!(d1.bracket(&d1).unwrap().is_zero());
    }

    #[test]
    fn gl2_commutator() {
        let spec = w(2);
        let a = SuperVectorField::term(spec, Target::Odd(2), xi(spec, 1));
        let b = SuperVectorField::term(spec, Target::Odd(1), xi(spec, 2));
        let want = SuperVectorField::term(spec, Target::Odd(1), xi(spec, 1))
            .sub(&SuperVectorField::term(spec, Target::Odd(2), xi(spec, 2)))
            .unwrap();
        let got = a.bracket(&b).unwrap();
        assert_eq!(got, want);
        assert_eq!(bracket_operator_mismatch(&a, &b).unwrap(), None);
    }

    #[test]
    fn degree_decomposition() {
        let spec = w(2);
        let d1 = SuperVectorField::partial_odd(spec, 1);
        let top = SuperVectorField::term(spec, Target::Odd(2), xi12(spec));
        let x = d1.add(&top).unwrap();
        let parts = x.degree_decompose();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&-1], d1);
        assert_eq!(parts[&1], top);
        let e = SuperVectorField::euler(spec);
        assert_eq!(e.degree_decompose()[&0], e);
    }

    #[test]
    fn degree_of_even_target_term() {
        let spec = ModelSpec::new(1, 2, 1).unwrap();
        let f = SuperVectorField::term(spec, Target::Even(1), xi(spec, 1));
        let parts = f.degree_decompose();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn anchor_projects_base_part() {
        let spec = ModelSpec::new(1, 2, 1).unwrap();
        let x = SuperFunction::even_generator(spec, 1);
        let xdx = SuperVectorField::term(spec, Target::Even(1), x);
        let field = xdx.add(&SuperVectorField::euler(spec)).unwrap();
        assert_eq!(field.anchor().unwrap(), xdx);
        assert!(SuperVectorField::euler(spec).anchor().unwrap().is_zero());
        assert!(matches!(
            SuperVectorField::partial_odd(spec, 1).anchor(),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn anchor_of_bracket_in_jet_model() {
        let spec = ModelSpec::new(1, 3, 1).unwrap();
        let x = SuperFunction::even_generator(spec, 1);
        let x2 = x.multiply(&x).unwrap();
        let a = SuperVectorField::term(spec, Target::Even(1), x.clone());
        let b = SuperVectorField::term(spec, Target::Even(1), x2.clone());
        let br = a.bracket(&b).unwrap();
        // [x∂x, x²∂x] = (x·2x − x²)∂x = x²∂x
        assert_eq!(br, b);
        assert_eq!(
            br.anchor().unwrap(),
            a.anchor().unwrap().bracket(&b.anchor().unwrap()).unwrap()
        );
    }

    #[test]
    fn wire_roundtrip() {
        let spec = ModelSpec::new(1, 2, 2).unwrap();
        let f = SuperVectorField::euler(spec)
            .add(&SuperVectorField::term(
                spec,
                Target::Even(1),
                SuperFunction::even_generator(spec, 1),
            ))
            .unwrap();
        let json = serde_json::to_string(&f.to_wire()).unwrap();
        let back: WireField = serde_json::from_str(&json).unwrap();
        assert_eq!(SuperVectorField::from_wire(&back).unwrap(), f);
    }
}
