//! Ad-nilpotency and maximal ideals acting nilpotently.
//!
//! For a subalgebra `S` of even elements and an `S`-invariant subspace `W`,
//! the chain `W ⊇ [S,W] ⊇ [S,[S,W]] ⊇ …` reaches zero exactly when every
//! element of `S` acts nilpotently on `W` (Engel). All nilpotency decisions
//! here go through that chain.
//!
//! The maximal ideal `N` of `L` acting nilpotently on `W` is found without
//! any prediction: `N` is contained in the radical of the trace form
//! `(x, y) ↦ tr(ρ(x)ρ(y))`, because `ρ(N)` lies in the Jacobson radical of
//! the associative algebra generated by `ρ(L)`. When that radical is itself
//! an ideal acting nilpotently it equals `N`; otherwise it is refined with
//! the trace functionals of longer words.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::spec::Parity;

use super::LieModel;

/// Longest word `ρ(y₁)…ρ(y_k)` used when refining the trace radical.
const MAX_TRACE_WORD: usize = 2;

/// `[S, W] ⊆ W`, checked on bases.
fn ensure_invariant(m: &LieModel, s: &Subspace, w: &Subspace, what: &str) -> Result<()> {
    for x in s.basis() {
        for v in w.basis() {
            if !w.contains(&m.bracket(x, v)) {
                return Err(Error::Precondition(format!(
                    "{what}: subspace is not invariant under the acting subspace"
                )));
            }
        }
    }
    Ok(())
}

fn ensure_even(m: &LieModel, s: &Subspace, what: &str) -> Result<()> {
    if !s.is_subspace_of(&m.parity_subspace(Parity::Even)) {
        return Err(Error::Precondition(format!(
            "{what}: must lie in the even part"
        )));
    }
    Ok(())
}

/// Length of the chain `W, [S,W], …` until zero, or `None` if it stalls.
fn engel_chain(m: &LieModel, s: &Subspace, w: &Subspace) -> Option<usize> {
    let mut current = w.clone();
    let mut steps = 0;
    while !current.is_zero() {
        let mut next = Subspace::zero(m.dim());
        for x in s.basis() {
            for v in current.basis() {
                next.insert(m.bracket(x, v));
            }
        }
        if next.dim() >= current.dim() {
            return None;
        }
        current = next;
        steps += 1;
    }
    Some(steps)
}

/// True iff every element of `s` acts nilpotently on `on`.
///
/// `s` must be closed under brackets, even, and leave `on` invariant.
pub fn acts_nilpotently(m: &LieModel, s: &Subspace, on: &Subspace) -> Result<bool> {
    ensure_even(m, s, "acting subspace")?;
    ensure_invariant(m, s, on, "acted-on subspace")?;
    Ok(engel_chain(m, s, on).is_some())
}

/// `ad_X` nilpotent on the whole model.
pub fn is_ad_nilpotent(m: &LieModel, x: &[crate::rational::Rational]) -> bool {
    if x.iter().all(Zero::is_zero) {
        return true;
    }
    let s = Subspace::from_vectors(m.dim(), [x.to_vec()]);
    let mut current = Subspace::full(m.dim());
    let ad = m.ad_matrix(x);
    let _ = &s;
    loop {
        if current.is_zero() {
            return true;
        }
        let next = current.image(&ad);
        if next.dim() >= current.dim() {
            return false;
        }
        current = next;
    }
}

/// Smallest ideal of `within` containing `seed`.
pub fn ideal_closure(m: &LieModel, within: &Subspace, seed: &Subspace) -> Subspace {
    let mut ideal = seed.clone();
    let mut frontier: Vec<Vector> = seed.basis().to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in within.basis() {
            for v in &frontier {
                let b = m.bracket(x, v);
                if ideal.insert(b.clone()) {
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    ideal
}

/// Matrices of `ad_x|_W` in the echelon basis of `W`, one per basis vector
/// of `within`.
fn restricted_ad(m: &LieModel, within: &Subspace, on: &Subspace) -> Result<Vec<Matrix>> {
    let w = on.dim();
    within
        .basis()
        .iter()
        .map(|x| {
            let cols = on
                .basis()
                .iter()
                .map(|v| {
                    on.coordinates(&m.bracket(x, v)).ok_or_else(|| {
                        Error::Precondition("acted-on subspace is not invariant".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(w, &cols))
        })
        .collect()
}

fn trace_of_product(a: &Matrix, b: &Matrix) -> crate::rational::Rational {
    let mut t = crate::rational::zero();
    for i in 0..a.nrows() {
        for (k, x) in a.row(i).iter().enumerate() {
            if !x.is_zero() {
                let y = b.get(k, i);
                if !y.is_zero() {
                    t += x * y;
                }
            }
        }
    }
    t
}

/// Result of the from-scratch search for the maximal nilpotent ideal.
#[derive(Clone, Debug)]
pub struct NilpotentIdeal {
    pub ideal: Subspace,
    /// Dimension of the trace-form radical (first upper bound).
    pub trace_radical_dim: usize,
    /// Longest trace word needed before the bound became a nilpotent ideal.
    pub word_length: usize,
}

/// Maximal ideal of `within` whose elements act ad-nilpotently on
/// `acting_on`, computed from scratch.
///
/// Restricted to pure-odd models: in a truncated jet model an element such
/// as `x²∂/∂x` is ad-nilpotent although its base part is nonzero, so the
/// answer there says nothing about genuine manifolds.
pub fn bruteforce_max_nilpotent_ideal(
    m: &LieModel,
    within: &Subspace,
    acting_on: &Subspace,
) -> Result<NilpotentIdeal> {
    if !m.spec().is_pure_odd() {
        return Err(Error::Unsupported(format!(
            "maximal ad-nilpotent ideals are only searched in pure-odd models; in the \
             truncated jet model {} the field x²∂/∂x is ad-nilpotent with nonzero base part",
            m.spec()
        )));
    }
    ensure_even(m, within, "within")?;
    ensure_invariant(m, within, within, "within")?;
    ensure_invariant(m, within, acting_on, "acting_on")?;

    let rho = restricted_ad(m, within, acting_on)?;
    let k = rho.len();

    // Functionals x ↦ tr(ρ(x)·P) over words P; rows indexed by words.
    let mut constraints: Vec<Vector> = Vec::new();
    let mut words: Vec<Matrix> = rho.clone();
    let mut trace_radical_dim = None;
    for length in 1..=MAX_TRACE_WORD {
        for p in &words {
            constraints.push(rho.iter().map(|r| trace_of_product(r, p)).collect());
        }
        let gram = Matrix::from_rows(constraints.clone()).expect("rows have equal length");
        let radical = Subspace::from_vectors(
            m.dim(),
            gram.nullspace().into_iter().map(|c| {
                let mut v = m.zero_vector();
                for (ci, b) in c.iter().zip(within.basis()) {
                    crate::linalg::axpy(&mut v, ci, b);
                }
                v
            }),
        );
        let radical = if k == 0 { Subspace::zero(m.dim()) } else { radical };
        trace_radical_dim.get_or_insert(radical.dim());
        if ideal_closure(m, within, &radical) == radical
            && engel_chain(m, &radical, acting_on).is_some()
        {
            return Ok(NilpotentIdeal {
                ideal: radical,
                trace_radical_dim: trace_radical_dim.unwrap_or(0),
                word_length: length,
            });
        }
        if length < MAX_TRACE_WORD {
            words = words
                .iter()
                .flat_map(|p| rho.iter().map(move |r| p.mul(r)))
                .collect();
        }
    }
    Err(Error::Consistency(format!(
        "trace radical did not certify a nilpotent ideal with words up to length {MAX_TRACE_WORD}"
    )))
}

/// Outcome of checking a predicted maximal nilpotent ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateCheck {
    pub inside_within: bool,
    pub is_ideal: bool,
    pub acts_nilpotently: bool,
    /// Basis vectors `v` of `within` outside the candidate whose ideal
    /// closure together with the candidate still acts nilpotently.
    pub extendable_by: Vec<usize>,
}

impl CandidateCheck {
    pub fn passed(&self) -> bool {
        self.inside_within && self.is_ideal && self.acts_nilpotently && self.extendable_by.is_empty()
    }
}

/// Checks a candidate: contained in `within`, an ideal of it, acting
/// nilpotently on `acting_on`, and not extendable by any basis vector of
/// `within`.
pub fn verify_nilpotent_ideal_candidate(
    m: &LieModel,
    within: &Subspace,
    acting_on: &Subspace,
    candidate: &Subspace,
) -> Result<CandidateCheck> {
    ensure_even(m, within, "within")?;
    ensure_invariant(m, within, acting_on, "acting_on")?;
    let inside_within = candidate.is_subspace_of(within);
    let is_ideal = ideal_closure(m, within, candidate) == *candidate;
    let acts = engel_chain(m, candidate, acting_on).is_some();
    let mut extendable_by = Vec::new();
    if inside_within && is_ideal && acts {
        for (i, v) in within.basis().iter().enumerate() {
            if candidate.contains(v) {
                continue;
            }
            let mut seed = candidate.clone();
            seed.insert(v.clone());
            let closure = ideal_closure(m, within, &seed);
            if engel_chain(m, &closure, acting_on).is_some() {
                extendable_by.push(i);
            }
        }
    }
    Ok(CandidateCheck {
        inside_within,
        is_ideal,
        acts_nilpotently: acts,
        extendable_by,
    })
}
