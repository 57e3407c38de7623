//! Exponent matrices and the projective point sets they parameterize.
//!
//! Points whose coordinates are all nonzero are stored as exponent tuples:
//! the point `[(beta^{e_1}, ..., beta^{e_m})]` is kept as `(e_1, ..., e_m)`
//! scaled so that `e_1 = 0`. Multiplying points is then addition of tuples
//! modulo `q - 1`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, GaloisField};

/// Default cap on tuple-coordinate evaluations during enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("exponent matrix has no rows")]
    NoRows,
    #[error("exponent matrix has no columns")]
    NoColumns,
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

/// The n x m matrix whose column i holds the exponents of monomial i; row j
/// belongs to variable j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u64>>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, ToricError> {
        let first = rows.first().ok_or(ToricError::NoRows)?;
        let m = first.len();
        if m == 0 {
            return Err(ToricError::NoColumns);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(ToricError::Ragged { row, expected: m, got: r.len() });
        }
        Ok(ExponentMatrix { rows })
    }

    pub fn identity(m: usize) -> Self {
        let rows = (0..m)
            .map(|j| (0..m).map(|i| u64::from(i == j)).collect())
            .collect();
        ExponentMatrix { rows }
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of monomials.
    pub fn m(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Exponent of variable `var` in monomial `mono` (both 0-based).
    pub fn entry(&self, mono: usize, var: usize) -> u64 {
        self.rows[var][mono]
    }

    pub fn column(&self, mono: usize) -> Vec<u64> {
        self.rows.iter().map(|r| r[mono]).collect()
    }

    pub fn set_entry(&mut self, mono: usize, var: usize, value: u64) {
        self.rows[var][mono] = value;
    }

    /// The common column sum, if every monomial has the same degree.
    pub fn uniform_alpha(&self) -> Option<u64> {
        let sums: Vec<u64> = (0..self.m()).map(|i| self.column(i).iter().sum()).collect();
        sums.windows(2).all(|w| w[0] == w[1]).then(|| sums[0])
    }

    /// Residues of `a_{ij} - a_{1j}` modulo `q - 1`.
    pub fn reduce(&self, field: &GaloisField) -> ReducedMatrix {
        let modulus = field.units() as u64;
        let b = (0..self.m())
            .map(|i| {
                (0..self.n())
                    .map(|j| {
                        let diff = self.entry(i, j) as i128 - self.entry(0, j) as i128;
                        diff.rem_euclid(modulus as i128) as u32
                    })
                    .collect()
            })
            .collect();
        ReducedMatrix { modulus: modulus as u32, b }
    }
}

/// Exponent differences against the first monomial, as residues modulo `q - 1`.
/// Row 0 (the first monomial) is identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMatrix {
    modulus: u32,
    b: Vec<Vec<u32>>,
}

impl ReducedMatrix {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn n(&self) -> usize {
        self.b[0].len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Residue for monomial `mono` and variable `var` (0-based).
    pub fn entry(&self, mono: usize, var: usize) -> u32 {
        self.b[mono][var]
    }

    pub fn monomial(&self, mono: usize) -> &[u32] {
        &self.b[mono]
    }

    /// Residues of one variable across monomials 2..m.
    pub fn variable_column(&self, var: usize) -> Vec<u32> {
        self.b[1..].iter().map(|r| r[var]).collect()
    }
}

/// A point of projective space with its first nonzero coordinate equal to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<Elem>,
}

impl ProjectivePoint {
    /// Scales `raw` to canonical form; `None` for the zero vector.
    pub fn canonicalize(field: &GaloisField, raw: &[Elem]) -> Option<Self> {
        let lead = *raw.iter().find(|&&c| c != 0)?;
        let inv = field.inv(lead).expect("nonzero");
        Some(ProjectivePoint { coords: raw.iter().map(|&c| field.mul(c, inv)).collect() })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }
}

/// A set of points of the projective torus, stored as exponent tuples with
/// leading exponent 0, sorted lexicographically.
///
/// Used for the toric set X itself, for the full torus and for complements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricSet {
    m: usize,
    modulus: u32,
    points: Vec<Vec<u32>>,
}

fn check_budget(count: u128, per_item: u128, budget: u64) -> Result<(), ToricError> {
    let needed = count.saturating_mul(per_item);
    if needed > budget as u128 {
        Err(ToricError::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Calls `visit` with every tuple in `[0, base)^len`, last digit fastest.
/// Also passes the digits that changed since the previous tuple (each by +1
/// modulo `base`).
fn odometer(len: usize, base: u32, mut visit: impl FnMut(&[u32], &[usize])) {
    let mut digits = vec![0u32; len];
    let mut changed = Vec::with_capacity(len);
    visit(&digits, &changed);
    loop {
        changed.clear();
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            changed.push(pos);
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
        }
        visit(&digits, &changed);
    }
}

impl ToricSet {
    fn from_set(m: usize, modulus: u32, set: HashSet<Vec<u32>>) -> Self {
        let mut points: Vec<Vec<u32>> = set.into_iter().collect();
        points.sort_unstable();
        ToricSet { m, modulus, points }
    }

    /// Builds a set from arbitrary exponent tuples (normalized and deduplicated).
    pub fn from_exponents(m: usize, field: &GaloisField, tuples: &[Vec<u32>]) -> Self {
        let modulus = field.units();
        let set = tuples
            .iter()
            .map(|t| {
                assert_eq!(t.len(), m);
                t.iter().map(|&e| (e % modulus + modulus - t[0] % modulus) % modulus).collect()
            })
            .collect();
        Self::from_set(m, modulus, set)
    }

    /// Number of coordinates.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(point)).is_ok()
    }

    /// Field coordinates of every point, in set order.
    pub fn projective_points(&self, field: &GaloisField) -> Vec<ProjectivePoint> {
        self.points
            .iter()
            .map(|p| ProjectivePoint { coords: p.iter().map(|&e| field.exp(e as u64)).collect() })
            .collect()
    }

    /// Componentwise product of two points.
    pub fn multiply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    pub fn inverse(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|x| (self.modulus - x) % self.modulus).collect()
    }

    /// Checks closure under products and inverses. All pairs are tested when
    /// the set has at most `full_limit` points, otherwise each point is
    /// multiplied by `samples` pseudo-randomly chosen partners.
    pub fn is_subgroup(&self, full_limit: usize, samples: usize) -> bool {
        if self.points.is_empty() || self.points[0].iter().any(|&e| e != 0) {
            // the identity is the smallest tuple
            return false;
        }
        let n = self.points.len();
        let partners: Box<dyn Fn(usize) -> Vec<usize>> = if n <= full_limit {
            Box::new(|_| (0..n).collect())
        } else {
            Box::new(move |i| (0..samples).map(|s| (i * 7919 + s * 104_729 + 1) % n).collect())
        };
        self.points.iter().enumerate().all(|(i, p)| {
            self.contains(&self.inverse(p))
                && partners(i).into_iter().all(|j| self.contains(&self.multiply(p, &self.points[j])))
        })
    }

    /// Points of `torus` not in `self`.
    pub fn complement_in(&self, torus: &ToricSet) -> ToricSet {
        let points = torus.points.iter().filter(|p| !self.contains(p)).cloned().collect();
        ToricSet { m: self.m, modulus: self.modulus, points }
    }
}

/// Enumerates X through the reduced matrix: every `t` in `(K*)^n`, written as
/// `t_j = beta^{i_j}`, gives the point with exponents `sum_j i_j b_{kj}`.
pub fn enumerate_x(
    matrix: &ExponentMatrix,
    field: &GaloisField,
    budget: u64,
) -> Result<ToricSet, ToricError> {
    let (n, m) = (matrix.n(), matrix.m());
    let base = field.units();
    check_budget((base as u128).pow(n as u32), m as u128, budget)?;
    let reduced = matrix.reduce(field);
    let mut set = HashSet::new();
    let mut point = vec![0u32; m];
    odometer(n, base, |_, changed| {
        for &j in changed {
            for (k, e) in point.iter_mut().enumerate() {
                *e = (*e + reduced.entry(k, j)) % base;
            }
        }
        if !set.contains(&point) {
            set.insert(point.clone());
        }
    });
    Ok(ToricSet::from_set(m, base, set))
}

/// Enumerates X directly from the monomials `t^{a_i}` with field arithmetic
/// and canonicalizes each point, without using the reduced matrix.
pub fn enumerate_x_unreduced(
    matrix: &ExponentMatrix,
    field: &GaloisField,
    budget: u64,
) -> Result<Vec<ProjectivePoint>, ToricError> {
    let (n, m) = (matrix.n(), matrix.m());
    let base = field.units();
    check_budget((base as u128).pow(n as u32), (m * n) as u128, budget)?;
    let mut set = HashSet::new();
    odometer(n, base, |digits, _| {
        let t: Vec<Elem> = digits.iter().map(|&i| field.exp(i as u64)).collect();
        let raw: Vec<Elem> = (0..m)
            .map(|i| {
                t.iter()
                    .enumerate()
                    .fold(1, |acc, (j, &tj)| field.mul(acc, field.pow(tj, matrix.entry(i, j))))
            })
            .collect();
        set.insert(ProjectivePoint::canonicalize(field, &raw).expect("torus points are nonzero"));
    });
    let mut points: Vec<ProjectivePoint> = set.into_iter().collect();
    points.sort();
    Ok(points)
}

/// All points `[(1, c_2, ..., c_m)]` with nonzero `c_i`.
pub fn enumerate_torus(m: usize, field: &GaloisField, budget: u64) -> Result<ToricSet, ToricError> {
    assert!(m >= 1);
    let base = field.units();
    check_budget((base as u128).pow(m as u32 - 1), m as u128, budget)?;
    let mut points = Vec::new();
    odometer(m - 1, base, |digits, _| {
        let mut p = Vec::with_capacity(m);
        p.push(0);
        p.extend_from_slice(digits);
        points.push(p);
    });
    Ok(ToricSet { m, modulus: base, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures as examples;

    #[test]
    fn reduce_examples() {
        let f11 = GaloisField::new(11).unwrap();
        let b = examples::example3_matrix().reduce(&f11);
        assert_eq!(b.monomial(1), &[8u32, 4, 8]); // (1-3, 4-0, 1-3) mod 10
        assert_eq!(b.variable_column(1), vec![4u32, 2, 2]);
        assert_eq!(b.monomial(2), &[7u32, 2, 1]);
        let f7 = GaloisField::new(7).unwrap();
        let b = examples::example1_matrix().reduce(&f7);
        assert_eq!(b.monomial(0), &[0u32; 5]);
        assert_eq!(b.monomial(1), &[5u32, 0, 1, 0, 0]);
        let twin = ExponentMatrix::new(vec![vec![2, 2, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(twin.reduce(&f7).monomial(1), &[0u32, 0]);
    }

    #[test]
    fn matrix_validation() {
        assert_eq!(ExponentMatrix::new(vec![]).unwrap_err(), ToricError::NoRows);
        assert_eq!(ExponentMatrix::new(vec![vec![]]).unwrap_err(), ToricError::NoColumns);
        assert!(matches!(
            ExponentMatrix::new(vec![vec![1, 2], vec![1]]),
            Err(ToricError::Ragged { row: 1, .. })
        ));
        assert_eq!(examples::example2_matrix().uniform_alpha(), Some(3));
        assert_eq!(examples::example3_matrix().uniform_alpha(), Some(6));
        let skew = ExponentMatrix::new(vec![vec![1, 2]]).unwrap();
        assert_eq!(skew.uniform_alpha(), None);
    }

    #[test]
    fn example_sizes() {
        let f11 = GaloisField::new(11).unwrap();
        let x = enumerate_x(&examples::example3_matrix(), &f11, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(x.len(), 50);
        let torus = enumerate_torus(4, &f11, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(x.complement_in(&torus).len(), 950);

        let f7 = GaloisField::new(7).unwrap();
        let x = enumerate_x(&examples::example1_matrix(), &f7, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(x.len(), 1296);
        let torus = enumerate_torus(6, &f7, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(torus.len(), 7776);
        assert_eq!(x.complement_in(&torus).len(), 6480);
    }

    #[test]
    fn identity_gives_full_torus() {
        for q in [3u64, 5, 7, 8] {
            let f = GaloisField::new(q).unwrap();
            for m in 1..=3 {
                let x = enumerate_x(&ExponentMatrix::identity(m), &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
                let t = enumerate_torus(m, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
                assert_eq!(x, t);
                assert!(x.complement_in(&t).is_empty());
            }
        }
        let f7 = GaloisField::new(7).unwrap();
        assert_eq!(enumerate_torus(2, &f7, 100).unwrap().len(), 6);
        assert_eq!(enumerate_torus(1, &f7, 100).unwrap().points(), &[vec![0u32]]);
    }

    #[test]
    fn zero_column_gives_constant_coordinate() {
        let f = GaloisField::new(5).unwrap();
        let a = ExponentMatrix::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let x = enumerate_x(&a, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(x.len(), 4);
        let a = ExponentMatrix::new(vec![vec![1, 0], vec![0, 0]]).unwrap();
        let x = enumerate_x(&a, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(x.len(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let f7 = GaloisField::new(7).unwrap();
        let err = enumerate_x(&examples::example1_matrix(), &f7, 1000).unwrap_err();
        assert!(matches!(err, ToricError::BudgetExceeded { .. }));
        assert!(enumerate_torus(6, &f7, 10).is_err());
    }

    #[test]
    fn reduced_and_unreduced_routes_agree() {
        for (a, q) in [
            (examples::example3_matrix(), 11u64),
            (examples::example1_matrix(), 7),
            (ExponentMatrix::new(vec![vec![2, 0, 3], vec![1, 4, 0]]).unwrap(), 9),
            (ExponentMatrix::new(vec![vec![5, 1], vec![0, 2], vec![1, 1]]).unwrap(), 8),
        ] {
            let f = GaloisField::new(q).unwrap();
            let x = enumerate_x(&a, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let mut via_logs = x.projective_points(&f);
            via_logs.sort();
            let direct = enumerate_x_unreduced(&a, &f, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(via_logs, direct);
            for p in &direct {
                assert_eq!(p.coords()[0], 1);
            }
        }
    }

    #[test]
    fn example_sets_are_groups() {
        let f11 = GaloisField::new(11).unwrap();
        let x = enumerate_x(&examples::example3_matrix(), &f11, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(x.is_subgroup(2000, 0));
        let f7 = GaloisField::new(7).unwrap();
        let x = enumerate_x(&examples::example1_matrix(), &f7, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(x.is_subgroup(2000, 0));
        let torus = enumerate_torus(4, &f11, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let y = enumerate_x(&examples::example3_matrix(), &f11, DEFAULT_ENUMERATION_BUDGET)
            .unwrap()
            .complement_in(&torus);
        assert!(!y.is_subgroup(2000, 0));
    }

    #[test]
    fn canonical_representative() {
        let f = GaloisField::new(7).unwrap();
        assert!(ProjectivePoint::canonicalize(&f, &[0, 0]).is_none());
        let p = ProjectivePoint::canonicalize(&f, &[0, 3, 6]).unwrap();
        assert_eq!(p.coords(), &[0, 1, 2]);
        let a = ProjectivePoint::canonicalize(&f, &[2, 4]).unwrap();
        let b = ProjectivePoint::canonicalize(&f, &[3, 6]).unwrap();
        assert_eq!(a, b);
    }
}
