use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{BaseMonomial, OddMonomial};

/// Largest supported odd rank; odd monomials are stored as `u32` bit masks.
pub const MAX_ODD_RANK: usize = 24;

/// Shape of the function algebra `B_d(s) ⊗ Λ(ξ¹..ξʳ)`.
///
/// `base_dim` even coordinates, base polynomials truncated past total degree
/// `truncation_order`, and `odd_rank` odd generators. `base_dim = 0` is the
/// pure Grassmann case; the truncation order is then irrelevant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ModelSpec {
    pub base_dim: usize,
    pub truncation_order: usize,
    pub odd_rank: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    base_dim: usize,
    truncation_order: usize,
    odd_rank: usize,
}

impl TryFrom<RawSpec> for ModelSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ModelSpec::new(raw.base_dim, raw.truncation_order, raw.odd_rank)
    }
}

impl ModelSpec {
    pub fn new(base_dim: usize, truncation_order: usize, odd_rank: usize) -> Result<Self> {
        if odd_rank == 0 {
            return Err(Error::Input(
                "odd_rank: must be at least 1 (rank 0 is the purely even case)".into(),
            ));
        }
        if odd_rank > MAX_ODD_RANK {
            return Err(Error::Input(format!(
                "odd_rank: {odd_rank} exceeds the supported maximum {MAX_ODD_RANK}"
            )));
        }
        Ok(Self {
            base_dim,
            truncation_order,
            odd_rank,
        })
    }

    /// `W(r)`: derivations of the Grassmann algebra on `r` generators.
    pub fn pure_odd(odd_rank: usize) -> Result<Self> {
        Self::new(0, 0, odd_rank)
    }

    pub fn is_pure_odd(&self) -> bool {
        self.base_dim == 0
    }

    /// `rk V = 1`, or a point base with `rk V ≤ 2`.
    pub fn low_rank_exceptional(&self) -> bool {
        self.odd_rank == 1 || (self.base_dim == 0 && self.odd_rank <= 2)
    }

    /// Rank condition under which the filtration splits along the grading:
    /// `r > 2`, or a positive-dimensional base with `r > 1`.
    pub fn filtration_hypothesis(&self) -> bool {
        self.odd_rank > 2 || (self.base_dim > 0 && self.odd_rank > 1)
    }

    /// Odd monomials in canonical order: by length, then lexicographically.
    pub fn odd_monomials(&self) -> Vec<OddMonomial> {
        let mut all: Vec<OddMonomial> = (0u32..(1u32 << self.odd_rank))
            .map(OddMonomial::from_mask)
            .collect();
        all.sort();
        all
    }

    /// Base monomials of total degree at most the truncation order, in
    /// canonical order: by total degree, then lexicographic exponents.
    pub fn base_monomials(&self) -> Vec<BaseMonomial> {
        let s = self.base_dim;
        let d = if s == 0 { 0 } else { self.truncation_order };
        let mut out = Vec::new();
        let mut current = vec![0u32; s];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<BaseMonomial>) {
            if pos == cur.len() {
                out.push(BaseMonomial::new(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, d as u32, &mut current, &mut out);
        out.sort();
        out
    }

    pub fn ensure_same(&self, other: &ModelSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.base_dim, self.truncation_order, self.odd_rank
        )
    }
}

/// Z₂-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::of((self.bit() + other.bit()) as i64)
    }

    /// True when `(-1)^{|a||b|} = -1`.
    pub fn both_odd(self, other: Parity) -> bool {
        self == Parity::Odd && other == Parity::Odd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_rank_zero() {
        assert!(ModelSpec::new(1, 2, 0).is_err());
        let err = serde_json::from_str::<ModelSpec>(
            r#"{"base_dim":0,"truncation_order":0,"odd_rank":0}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("odd_rank"));
    }

    #[test]
    fn exceptional_flag() {
        let cases = [
            ((0, 0, 1), true),
            ((0, 0, 2), true),
            ((0, 0, 3), false),
            ((1, 2, 1), true),
            ((1, 2, 2), false),
        ];
        for ((s, d, r), want) in cases {
            assert_eq!(ModelSpec::new(s, d, r).unwrap().low_rank_exceptional(), want);
        }
    }

    #[test]
    fn monomial_counts() {
        let spec = ModelSpec::new(2, 2, 3).unwrap();
        assert_eq!(spec.odd_monomials().len(), 8);
        // 1, x1, x2, x1², x1x2, x2²
        assert_eq!(spec.base_monomials().len(), 6);
        assert_eq!(ModelSpec::pure_odd(3).unwrap().base_monomials().len(), 1);
    }

    #[test]
    fn canonical_odd_order() {
        let spec = ModelSpec::pure_odd(3).unwrap();
        let lists: Vec<Vec<usize>> = spec.odd_monomials().iter().map(|m| m.indices()).collect();
        assert_eq!(
            lists,
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
    }
}
