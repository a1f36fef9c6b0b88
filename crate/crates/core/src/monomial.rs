//! Monomials of the base (even) and Grassmann (odd) factors.

use std::cmp::Ordering;
use std::fmt;

use crate::spec::Parity;

/// Product `ξ^{i₁}…ξ^{i_k}` with strictly increasing indices, as a bit mask
/// (bit `a-1` set for `ξᵃ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct OddMonomial(u32);

impl OddMonomial {
    pub const ONE: OddMonomial = OddMonomial(0);

    pub fn from_mask(mask: u32) -> Self {
        OddMonomial(mask)
    }

    /// From 1-based, strictly increasing indices. Returns `None` otherwise.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i <= last || i > 32 {
                return None;
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Some(OddMonomial(mask))
    }

    /// Single generator `ξᵃ` (1-based).
    pub fn generator(a: usize) -> Self {
        OddMonomial(1 << (a - 1))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn parity(self) -> Parity {
        Parity::of(self.len() as i64)
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 & (1 << (a - 1)) != 0
    }

    /// 1-based indices, increasing.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// `self · other` as `(sign_is_negative, product)`, or `None` when a
    /// generator repeats.
    pub fn mul(self, other: OddMonomial) -> Option<(bool, OddMonomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each generator of `other` moves left past the larger generators of `self`.
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((swaps % 2 == 1, OddMonomial(self.0 | other.0)))
    }

    /// Left derivative `∂/∂ξᵃ`: moves `ξᵃ` to the front, then removes it.
    pub fn left_derivative(self, a: usize) -> Option<(bool, OddMonomial)> {
        if !self.contains(a) {
            return None;
        }
        let below = self.0 & ((1u32 << (a - 1)) - 1);
        Some((
            below.count_ones() % 2 == 1,
            OddMonomial(self.0 & !(1 << (a - 1))),
        ))
    }
}

impl Ord for OddMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            // Same length: lexicographic on the increasing index lists.
            let (mut a, mut b) = (self.0, other.0);
            while a != 0 && b != 0 {
                let (ia, ib) = (a.trailing_zeros(), b.trailing_zeros());
                if ia != ib {
                    return ia.cmp(&ib);
                }
                a &= a - 1;
                b &= b - 1;
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for OddMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OddMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("ξ{i}")).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Monomial `x^α` in the even coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseMonomial(Vec<u32>);

impl BaseMonomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        BaseMonomial(exponents)
    }

    pub fn one(base_dim: usize) -> Self {
        BaseMonomial(vec![0; base_dim])
    }

    pub fn variable(base_dim: usize, i: usize) -> Self {
        let mut e = vec![0; base_dim];
        e[i] = 1;
        BaseMonomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Product, or `None` when the degree exceeds `truncation`.
    pub fn mul(&self, other: &BaseMonomial, truncation: u32) -> Option<BaseMonomial> {
        let e: Vec<u32> = self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect();
        if e.iter().sum::<u32>() > truncation {
            None
        } else {
            Some(BaseMonomial(e))
        }
    }

    /// `∂/∂xⁱ` as `(multiplier, monomial)`.
    pub fn derivative(&self, i: usize) -> Option<(u32, BaseMonomial)> {
        let e = self.0[i];
        if e == 0 {
            return None;
        }
        let mut out = self.0.clone();
        out[i] -= 1;
        Some((e, BaseMonomial(out)))
    }
}

impl Ord for BaseMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BaseMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BaseMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        write!(f, "{}", parts.join(""))
    }
}
