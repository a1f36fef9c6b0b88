//! Elements of the supercommutative algebra `A = B_d(s) ⊗ Λ(ξ¹..ξʳ)`.
//!
//! A [`SuperFunction`] is a sparse map from `(base monomial, odd monomial)`
//! to a nonzero rational. Odd generators are always stored in increasing
//! order, so two functions are equal exactly when their maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{BaseMonomial, OddMonomial};
use crate::rational::{self, Rational};
use crate::spec::{ModelSpec, Parity};

pub type TermKey = (BaseMonomial, OddMonomial);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperFunction {
    spec: ModelSpec,
    terms: BTreeMap<TermKey, Rational>,
}

/// One raw input term: base exponents, odd indices (any order, repeats
/// allowed), coefficient.
pub type RawTerm = (Vec<u32>, Vec<usize>, Rational);

impl SuperFunction {
    pub fn zero(spec: ModelSpec) -> Self {
        Self {
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: ModelSpec, c: Rational) -> Self {
        let mut f = Self::zero(spec);
        f.add_term(BaseMonomial::one(spec.base_dim), OddMonomial::ONE, c);
        f
    }

    pub fn one(spec: ModelSpec) -> Self {
        Self::constant(spec, Rational::one())
    }

    /// The odd generator `ξᵃ`, 1-based.
    pub fn odd_generator(spec: ModelSpec, a: usize) -> Self {
        assert!(a >= 1 && a <= spec.odd_rank, "odd index out of range");
        Self::monomial(
            spec,
            BaseMonomial::one(spec.base_dim),
            OddMonomial::generator(a),
            Rational::one(),
        )
    }

    /// The even coordinate `xⁱ`, 1-based. Zero when the truncation order is 0.
    pub fn even_generator(spec: ModelSpec, i: usize) -> Self {
        assert!(i >= 1 && i <= spec.base_dim, "even index out of range");
        Self::monomial(
            spec,
            BaseMonomial::variable(spec.base_dim, i - 1),
            OddMonomial::ONE,
            Rational::one(),
        )
    }

    /// A single term; dropped if the base monomial is past the truncation.
    pub fn monomial(spec: ModelSpec, base: BaseMonomial, odd: OddMonomial, c: Rational) -> Self {
        let mut f = Self::zero(spec);
        f.add_term(base, odd, c);
        f
    }

    /// Canonical form of a raw term list.
    ///
    /// Repeated odd indices kill a term, unsorted indices are sorted with the
    /// permutation sign, base monomials past the truncation order are
    /// dropped, and like terms are merged.
    pub fn normalize(spec: ModelSpec, raw: &[RawTerm]) -> Result<Self> {
        let mut f = Self::zero(spec);
        for (n, (base, odd, c)) in raw.iter().enumerate() {
            if base.len() != spec.base_dim {
                return Err(Error::Input(format!(
                    "term {n}: base exponent list has length {}, expected base_dim = {}",
                    base.len(),
                    spec.base_dim
                )));
            }
            if let Some(&bad) = odd.iter().find(|&&i| i == 0 || i > spec.odd_rank) {
                return Err(Error::Input(format!(
                    "term {n}: odd index {bad} outside 1..={}",
                    spec.odd_rank
                )));
            }
            // Multiply the generators left to right.
            let mut mono = OddMonomial::ONE;
            let mut negative = false;
            let mut dead = false;
            for &i in odd {
                match mono.mul(OddMonomial::generator(i)) {
                    Some((neg, m)) => {
                        negative ^= neg;
                        mono = m;
                    }
                    None => {
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            let coeff = if negative { -c.clone() } else { c.clone() };
            f.add_term(BaseMonomial::new(base.clone()), mono, coeff);
        }
        Ok(f)
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BaseMonomial, &OddMonomial, &Rational)> {
        self.terms.iter().map(|((b, o), c)| (b, o, c))
    }

    pub fn coefficient(&self, base: &BaseMonomial, odd: OddMonomial) -> Rational {
        self.terms
            .get(&(base.clone(), odd))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn truncation(&self) -> u32 {
        if self.spec.base_dim == 0 {
            0
        } else {
            self.spec.truncation_order as u32
        }
    }

    /// Adds `c · base · odd` in place.
    pub(crate) fn add_term(&mut self, base: BaseMonomial, odd: OddMonomial, c: Rational) {
        if c.is_zero() || base.degree() > self.truncation() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((base, odd)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &SuperFunction, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for ((b, o), v) in &other.terms {
            self.add_term(b.clone(), *o, v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.spec);
        }
        Self {
            spec: self.spec,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.spec.ensure_same(&other.spec)?;
        Ok(self + other)
    }

    /// Supercommutative product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.spec.ensure_same(&other.spec)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let trunc = self.truncation();
        let mut out = Self::zero(self.spec);
        for ((b1, o1), c1) in &self.terms {
            for ((b2, o2), c2) in &other.terms {
                let Some((neg, odd)) = o1.mul(*o2) else {
                    continue;
                };
                let Some(base) = b1.mul(b2, trunc) else {
                    continue;
                };
                let c = c1 * c2;
                out.add_term(base, odd, if neg { -c } else { c });
            }
        }
        out
    }

    /// Components by odd degree `k`; component `k` is the `A^k` part.
    pub fn grade_split(&self) -> BTreeMap<usize, SuperFunction> {
        let mut out: BTreeMap<usize, SuperFunction> = BTreeMap::new();
        for ((b, o), c) in &self.terms {
            out.entry(o.len())
                .or_insert_with(|| Self::zero(self.spec))
                .terms
                .insert((b.clone(), *o), c.clone());
        }
        out
    }

    /// Even and odd parts.
    pub fn parity_parts(&self) -> (SuperFunction, SuperFunction) {
        let mut even = Self::zero(self.spec);
        let mut odd = Self::zero(self.spec);
        for ((b, o), c) in &self.terms {
            let target = if o.len() % 2 == 0 { &mut even } else { &mut odd };
            target.terms.insert((b.clone(), *o), c.clone());
        }
        (even, odd)
    }

    /// Parity when homogeneous and nonzero.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|(_, o)| o.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Terms with odd degree exactly `k`.
    pub fn odd_degree_part(&self, k: usize) -> SuperFunction {
        Self {
            spec: self.spec,
            terms: self
                .terms
                .iter()
                .filter(|((_, o), _)| o.len() == k)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Left derivative `∂/∂ξᵃ` (1-based).
    pub fn d_odd(&self, a: usize) -> Self {
        let mut out = Self::zero(self.spec);
        for ((b, o), c) in &self.terms {
            if let Some((neg, rest)) = o.left_derivative(a) {
                out.add_term(b.clone(), rest, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// `∂/∂xⁱ` (1-based).
    pub fn d_even(&self, i: usize) -> Self {
        let mut out = Self::zero(self.spec);
        for ((b, o), c) in &self.terms {
            if let Some((m, rest)) = b.derivative(i - 1) {
                out.add_term(rest, *o, c * rational::int(m as i64));
            }
        }
        out
    }

    /// Applies the algebra endomorphism fixing the base coordinates and
    /// sending `ξᵃ ↦ images[a-1]`.
    pub fn substitute_odd(&self, images: &[SuperFunction]) -> Result<Self> {
        if images.len() != self.spec.odd_rank {
            return Err(Error::Input(format!(
                "expected {} odd images, got {}",
                self.spec.odd_rank,
                images.len()
            )));
        }
        for img in images {
            self.spec.ensure_same(&img.spec)?;
        }
        let mut out = Self::zero(self.spec);
        for ((b, o), c) in &self.terms {
            let mut prod = Self::monomial(self.spec, b.clone(), OddMonomial::ONE, c.clone());
            for a in o.indices() {
                prod = prod.mul_unchecked(&images[a - 1]);
                if prod.is_zero() {
                    break;
                }
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    pub fn to_wire(&self) -> Vec<WireTerm> {
        self.terms
            .iter()
            .map(|((b, o), c)| WireTerm {
                base: b.exponents().to_vec(),
                odd: o.indices(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_wire(spec: ModelSpec, terms: &[WireTerm]) -> Result<Self> {
        let raw: Vec<RawTerm> = terms
            .iter()
            .map(|t| (t.base.clone(), t.odd.clone(), t.coeff.clone()))
            .collect();
        Self::normalize(spec, &raw)
    }
}

/// JSON term: `{"base": [e1..es], "odd": [i1<i2<..], "coeff": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireTerm {
    pub base: Vec<u32>,
    pub odd: Vec<usize>,
    #[serde(with = "rational::as_string")]
    pub coeff: Rational,
}

impl<'a> Add for &'a SuperFunction {
    type Output = SuperFunction;

    /// Panics on mismatched specs; use [`SuperFunction::checked_add`] for a `Result`.
    fn add(self, rhs: &'a SuperFunction) -> SuperFunction {
        assert_eq!(self.spec, rhs.spec, "model spec mismatch");
        let mut out = self.clone();
        for ((b, o), c) in &rhs.terms {
            out.add_term(b.clone(), *o, c.clone());
        }
        out
    }
}

impl<'a> Sub for &'a SuperFunction {
    type Output = SuperFunction;

    fn sub(self, rhs: &'a SuperFunction) -> SuperFunction {
        assert_eq!(self.spec, rhs.spec, "model spec mismatch");
        let mut out = self.clone();
        for ((b, o), c) in &rhs.terms {
            out.add_term(b.clone(), *o, -c.clone());
        }
        out
    }
}

impl Neg for &SuperFunction {
    type Output = SuperFunction;

    fn neg(self) -> SuperFunction {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((b, o), c) in &self.terms {
            let mono = match (b.is_one(), o.is_empty()) {
                (true, true) => String::new(),
                (true, false) => o.to_string(),
                (false, true) => b.to_string(),
                (false, false) => format!("{b}{o}"),
            };
            let neg = c < &Rational::zero();
            let mag = rational::abs(c);
            let coeff = if mono.is_empty() {
                rational::format(&mag)
            } else if mag.is_one() {
                String::new()
            } else {
                format!("{}·", rational::format(&mag))
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            write!(f, "{coeff}{mono}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn w(r: usize) -> ModelSpec {
        ModelSpec::pure_odd(r).unwrap()
    }

    fn xi(spec: ModelSpec, a: usize) -> SuperFunction {
        SuperFunction::odd_generator(spec, a)
    }

    #[test]
    fn normalize_sorts_with_sign() {
        let spec = w(2);
        let f = SuperFunction::normalize(spec, &[(vec![], vec![2, 1], int(1))]).unwrap();
        let want = -&xi(spec, 1).multiply(&xi(spec, 2)).unwrap();
        assert_eq!(f, want);
    }

    #[test]
    fn normalize_kills_repeats() {
        let f = SuperFunction::normalize(w(2), &[(vec![], vec![1, 1], int(5))]).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn normalize_truncates_base() {
        let spec = ModelSpec::new(1, 2, 1).unwrap();
        let f = SuperFunction::normalize(spec, &[(vec![3], vec![1], int(1))]).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn normalize_rejects_bad_input() {
        let spec = ModelSpec::new(1, 2, 2).unwrap();
        assert!(matches!(
            SuperFunction::normalize(spec, &[(vec![0], vec![3], int(1))]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            SuperFunction::normalize(spec, &[(vec![0, 0], vec![1], int(1))]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn generators_anticommute() {
        let spec = w(2);
        let a = xi(spec, 1).multiply(&xi(spec, 2)).unwrap();
        let b = xi(spec, 2).multiply(&xi(spec, 1)).unwrap();
        assert_eq!(a, -&b);
        assert_eq!(a.to_string(), "ξ1ξ2");
    }

    #[test]
    fn square_of_nilpotent_part_vanishes() {
        let spec = w(1);
        let one = SuperFunction::one(spec);
        let p = &one + &xi(spec, 1);
        let m = &one - &xi(spec, 1);
        assert_eq!(p.multiply(&m).unwrap(), one);
    }

    #[test]
    fn repeated_generator_product_is_zero() {
        let spec = w(2);
        let x12 = xi(spec, 1).multiply(&xi(spec, 2)).unwrap();
        assert!(x12.multiply(&xi(spec, 1)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_specs_are_rejected() {
        assert!(matches!(
            xi(w(2), 1).multiply(&xi(w(3), 1)),
            Err(Error::SpecMismatch { .. })
        ));
    }

    #[test]
    fn grade_split_by_odd_degree() {
        let spec = w(2);
        let x12 = xi(spec, 1).multiply(&xi(spec, 2)).unwrap();
        let f = &(&SuperFunction::constant(spec, int(3)) + &xi(spec, 1)) + &x12.scale(&int(2));
        let parts = f.grade_split();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[&0], SuperFunction::constant(spec, int(3)));
        assert_eq!(parts[&1], xi(spec, 1));
        assert_eq!(parts[&2], x12.scale(&int(2)));
        assert!(SuperFunction::zero(spec).grade_split().is_empty());
    }

    #[test]
    fn grade_split_of_product() {
        // (1+ξ¹)(1+ξ²) expanded by hand: 1 + ξ¹ + ξ² + ξ¹ξ²
        let spec = w(2);
        let one = SuperFunction::one(spec);
        let f = (&one + &xi(spec, 1)).multiply(&(&one + &xi(spec, 2))).unwrap();
        let parts = f.grade_split();
        assert_eq!(parts[&0], one);
        assert_eq!(parts[&1], &xi(spec, 1) + &xi(spec, 2));
        assert_eq!(parts[&2], xi(spec, 1).multiply(&xi(spec, 2)).unwrap());
    }

    #[test]
    fn left_derivatives() {
        let spec = w(2);
        let x12 = xi(spec, 1).multiply(&xi(spec, 2)).unwrap();
        assert_eq!(x12.d_odd(1), xi(spec, 2));
        assert_eq!(x12.d_odd(2), -&xi(spec, 1));
    }

    #[test]
    fn even_derivative_respects_truncation() {
        let spec = ModelSpec::new(1, 3, 1).unwrap();
        let x = SuperFunction::even_generator(spec, 1);
        let x3 = x.multiply(&x).unwrap().multiply(&x).unwrap();
        assert_eq!(x3.d_even(1), x.multiply(&x).unwrap().scale(&int(3)));
        assert!(x3.multiply(&x).unwrap().is_zero());
    }

    #[test]
    fn substitution_is_multiplicative() {
        let spec = w(2);
        // ξ¹ ↦ 2ξ¹ + ξ², ξ² ↦ ξ²/3
        let images = vec![
            &xi(spec, 1).scale(&int(2)) + &xi(spec, 2),
            xi(spec, 2).scale(&frac(1, 3)),
        ];
        let x12 = xi(spec, 1).multiply(&xi(spec, 2)).unwrap();
        let got = x12.substitute_odd(&images).unwrap();
        assert_eq!(got, x12.scale(&frac(2, 3)));
    }

    #[test]
    fn wire_roundtrip() {
        let spec = ModelSpec::new(1, 2, 2).unwrap();
        let f = SuperFunction::normalize(
            spec,
            &[(vec![1], vec![2, 1], frac(3, 4)), (vec![0], vec![], int(-2))],
        )
        .unwrap();
        let json = serde_json::to_string(&f.to_wire()).unwrap();
        assert!(json.contains("\"-3/4\""));
        let back: Vec<WireTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(SuperFunction::from_wire(spec, &back).unwrap(), f);
    }
}
