//! Hilbert functions of toric sets: the dimension of `C_X(d)` as the rank of
//! the degree-d evaluation matrix, the torus Hilbert function by counting,
//! their difference, and the regularity index.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::checks::CheckOutcome;
use crate::field::{Elem, GaloisField};
use crate::linalg::{EchelonBasis, FieldMatrix};
use crate::toric::{ReducedMatrix, ToricSet};

/// Default cap on evaluation-matrix entries (rows x columns) per rank call.
pub const DEFAULT_RANK_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("degree {d}: evaluation matrix needs {needed} entries, budget is {budget}")]
    BudgetExceeded { d: u32, needed: u128, budget: u64 },
    #[error("regularity not reached by degree {computed_up_to}; it lies in [{}, {upper}]", computed_up_to + 1)]
    RegularityNotReached { computed_up_to: u32, upper: u32 },
    #[error("Hilbert function property violated: {0}")]
    TheoremViolation(String),
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `C(d + m - 1, m - 1)`, the number of degree-d monomials in m variables.
pub fn monomial_count(m: usize, d: u32) -> u128 {
    binomial(d as u64 + m as u64 - 1, m as u64 - 1)
}

/// Degree-d exponent vectors in m variables, lexicographically descending
/// (`(d,0,..,0)` first, `(0,..,0,d)` last).
#[derive(Debug, Clone)]
pub struct Monomials {
    next: Option<Vec<u32>>,
}

impl Monomials {
    pub fn new(m: usize, d: u32) -> Self {
        assert!(m >= 1);
        let mut first = vec![0; m];
        first[0] = d;
        Monomials { next: Some(first) }
    }
}

impl Iterator for Monomials {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.next.take()?;
        let m = cur.len();
        if let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] > 0) {
            let mut succ = cur.clone();
            let tail: u32 = succ[i + 1..].iter().sum();
            succ[i] -= 1;
            succ[i + 1..].iter_mut().for_each(|e| *e = 0);
            succ[i + 1] = tail + 1;
            self.next = Some(succ);
        }
        Some(cur)
    }
}

pub fn degree_monomials(m: usize, d: u32, budget: u64) -> Result<Vec<Vec<u32>>, HilbertError> {
    let needed = monomial_count(m, d);
    if needed > budget as u128 {
        return Err(HilbertError::BudgetExceeded { d, needed, budget });
    }
    Ok(Monomials::new(m, d).collect())
}

/// Values of the monomial `e` at every point of `x` (first coordinate is 1,
/// so this is the normalized evaluation).
pub fn evaluate_monomial(field: &GaloisField, x: &ToricSet, e: &[u32]) -> Vec<Elem> {
    let units = field.units() as u64;
    x.points()
        .iter()
        .map(|p| {
            let l = p.iter().zip(e).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % units;
            field.exp(l)
        })
        .collect()
}

fn check_rank_budget(x: &ToricSet, d: u32, budget: u64) -> Result<(), HilbertError> {
    let needed = monomial_count(x.m(), d).saturating_mul(x.len() as u128);
    if needed > budget as u128 {
        return Err(HilbertError::BudgetExceeded { d, needed, budget });
    }
    Ok(())
}

/// The evaluation matrix: one row per point, one column per degree-d monomial.
pub fn evaluation_matrix(
    field: &GaloisField,
    x: &ToricSet,
    d: u32,
    budget: u64,
) -> Result<FieldMatrix, HilbertError> {
    check_rank_budget(x, d, budget)?;
    let cols: Vec<Vec<Elem>> =
        Monomials::new(x.m(), d).map(|e| evaluate_monomial(field, x, &e)).collect();
    let mut out = FieldMatrix::zeros(x.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Echelon basis of the span of the degree-d evaluation vectors, together with
/// the monomials whose evaluations were independent when inserted.
pub(crate) fn evaluation_basis<'f>(
    field: &'f GaloisField,
    x: &ToricSet,
    d: u32,
    budget: u64,
) -> Result<(EchelonBasis<'f>, Vec<Vec<u32>>), HilbertError> {
    check_rank_budget(x, d, budget)?;
    let mut basis = EchelonBasis::new(field, x.len());
    let mut chosen = Vec::new();
    let mut seen = HashSet::new();
    if x.is_empty() {
        return Ok((basis, chosen));
    }
    for e in Monomials::new(x.m(), d) {
        let v = evaluate_monomial(field, x, &e);
        // identical columns never change the rank
        if seen.contains(&v) {
            continue;
        }
        seen.insert(v.clone());
        if basis.insert(v) {
            chosen.push(e);
            if basis.is_full() {
                break;
            }
        }
    }
    Ok((basis, chosen))
}

/// `H_X(d) = dim C_X(d)`, the rank of the degree-d evaluation matrix.
pub fn hilbert_x(
    field: &GaloisField,
    x: &ToricSet,
    d: u32,
    budget: u64,
) -> Result<u64, HilbertError> {
    Ok(evaluation_basis(field, x, d, budget)?.0.rank() as u64)
}

/// `H_X(d)` as the number of distinct characters `t -> t^c` obtained from
/// degree-d monomials, `c_j = sum_i e_i b_{ij} mod (q-1)`. Distinct characters
/// are linearly independent, so this equals the rank.
pub fn hilbert_x_characters(reduced: &ReducedMatrix, d: u32) -> u64 {
    let modulus = reduced.modulus() as u64;
    let n = reduced.n();
    let mut seen = HashSet::new();
    for e in Monomials::new(reduced.m(), d) {
        let c: Vec<u64> = (0..n)
            .map(|j| {
                e.iter()
                    .enumerate()
                    .map(|(i, &ei)| ei as u64 * reduced.entry(i, j) as u64)
                    .sum::<u64>()
                    % modulus
            })
            .collect();
        seen.insert(c);
    }
    seen.len() as u64
}

/// Hilbert function of the projective torus `T_{m-1}` over GF(q):
/// `#{r in [0, q-2]^{m-1} : sum r <= d}`, by inclusion-exclusion on the box.
pub fn hilbert_torus(m: usize, d: u32, q: u64) -> u64 {
    assert!(m >= 1 && q >= 3);
    let vars = m as u64 - 1;
    let mut total: i128 = 0;
    for j in 0..=vars {
        let shift = j * (q - 1);
        if shift > d as u64 {
            break;
        }
        let term = binomial(d as u64 - shift + vars, vars) as i128 * binomial(vars, j) as i128;
        total += if j % 2 == 0 { term } else { -term };
    }
    total as u64
}

/// `H_T(d) - H_X(d)`, the Hilbert function of `I_X / I_T`.
pub fn hbar(h_torus: u64, h_x: u64) -> Result<u64, HilbertError> {
    h_torus.checked_sub(h_x).ok_or_else(|| {
        HilbertError::TheoremViolation(format!("H_X(d) = {h_x} exceeds H_T(d) = {h_torus}"))
    })
}

/// Smallest d with `H_T(d) = (q-1)^{m-1}`.
pub fn torus_regularity(m: usize, q: u64) -> u32 {
    let size = (q - 1).pow(m as u32 - 1);
    (0..).find(|&d| hilbert_torus(m, d, q) == size).expect("torus Hilbert function stabilizes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertProfile {
    /// `H_X(d)` for `d = 0..=regularity`.
    pub values: Vec<u64>,
    pub x_size: u64,
    pub regularity: u32,
    /// First differences `h_0, ..., h_r`.
    pub numerator: Vec<u64>,
}

impl HilbertProfile {
    /// `H_X(d)` for any `d >= 0`.
    pub fn value(&self, d: u32) -> u64 {
        self.values.get(d as usize).copied().unwrap_or(self.x_size)
    }

    /// Builds a profile from values that end at the first degree reaching
    /// `x_size`, validating monotonicity and the numerator.
    pub fn from_values(values: Vec<u64>, x_size: u64) -> Result<Self, HilbertError> {
        let violation = |s: String| Err(HilbertError::TheoremViolation(s));
        if values.first() != Some(&1) {
            return violation(format!("H_X(0) = {:?}, expected 1", values.first()));
        }
        if values.last() != Some(&x_size) {
            return violation(format!("profile does not end at |X| = {x_size}"));
        }
        let mut numerator = Vec::with_capacity(values.len());
        let mut prev = 0;
        for (i, &v) in values.iter().enumerate() {
            if v <= prev && i > 0 {
                return violation(format!("h_{i} = H_X({i}) - H_X({}) is not positive", i - 1));
            }
            numerator.push(v - prev);
            prev = v;
        }
        Ok(HilbertProfile { regularity: values.len() as u32 - 1, values, x_size, numerator })
    }
}

/// Computes `H_X(0), H_X(1), ...` until the value reaches `|X|`.
pub fn regularity_index(
    field: &GaloisField,
    x: &ToricSet,
    budget: u64,
) -> Result<HilbertProfile, HilbertError> {
    let q = field.order() as u64;
    let upper = (x.m() as u32 - 1) * (q as u32 - 2);
    let x_size = x.len() as u64;
    let mut values = Vec::new();
    for d in 0.. {
        let h = match hilbert_x(field, x, d, budget) {
            Ok(h) => h,
            Err(HilbertError::BudgetExceeded { .. }) if d > 0 => {
                return Err(HilbertError::RegularityNotReached { computed_up_to: d - 1, upper });
            }
            Err(e) => return Err(e),
        };
        values.push(h);
        if h == x_size {
            break;
        }
        if d >= upper {
            return Err(HilbertError::TheoremViolation(format!(
                "H_X({d}) = {h} < |X| = {x_size} at the bound (m-1)(q-2) = {upper}"
            )));
        }
    }
    HilbertProfile::from_values(values, x_size)
}

/// Checks `r_T = max(r_X, r_Hbar)`, `r_T = (m-1)(q-2)` and monotonicity of
/// `Hbar` using an already computed profile of X.
pub fn regularity_max_identity(profile: &HilbertProfile, m: usize, q: u64) -> Vec<CheckOutcome> {
    let torus_size = (q - 1).pow(m as u32 - 1);
    let y_size = torus_size - profile.x_size;
    let r_t = torus_regularity(m, q);
    let span = r_t.max(profile.regularity);
    let hbar: Vec<u64> = (0..=span)
        .map(|d| hilbert_torus(m, d, q).saturating_sub(profile.value(d)))
        .collect();
    let r_hbar = hbar.iter().position(|&h| h == y_size).unwrap_or(span as usize) as u32;
    let monotone = hbar.windows(2).all(|w| w[0] <= w[1]);
    let expected = (m as u32 - 1) * (q as u32 - 2);
    vec![
        CheckOutcome::verdict(
            "regularity_max",
            r_t == profile.regularity.max(r_hbar),
            format!("r_T = {r_t}, r_X = {}, r_Hbar = {r_hbar}", profile.regularity),
        ),
        CheckOutcome::verdict(
            "torus_regularity",
            r_t == expected,
            format!("r_T = {r_t} vs (m-1)(q-2) = {expected}"),
        ),
        CheckOutcome::verdict(
            "regularity_bound",
            profile.regularity <= expected,
            format!("r_X = {} <= (m-1)(q-2) = {expected}", profile.regularity),
        ),
        CheckOutcome::verdict("hbar_monotone", monotone, format!("Hbar(0..={span}) nondecreasing")),
    ]
}
