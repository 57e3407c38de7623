//! Minimum distance of `C_X(d)`: the closed form on the projective torus,
//! lower bounds for uniform matrices and graphs, the Singleton and torus upper
//! bounds, and exact minimum weight by exhaustive or information-set search.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{CheckOutcome, CheckStatus};
use crate::field::{Elem, GaloisField};
use crate::hilbert::{evaluate_monomial, evaluation_basis, HilbertError};
use crate::incidence::GraphProvenance;
use crate::linalg::{scale, sub_scaled, EchelonBasis, FieldMatrix};
use crate::toric::ToricSet;

/// Default cap on codeword-symbol operations for exact minimum distance.
pub const DEFAULT_EXACT_BUDGET: u64 = 100_000_000;

const SAMPLE_SEED: u64 = 0x5eed_c0de;
const MAX_TRIALS: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("column sums of the exponent matrix differ; the bound needs a uniform matrix")]
    NotUniform,
    #[error("the graph is disconnected")]
    Disconnected,
    #[error("degree {d} outside 0 <= d < {limit}")]
    DegreeOutOfRange { d: u32, limit: u32 },
}

/// How a rational lower bound is turned into a reported integer. Both clamp
/// the result to at least 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaConvention {
    /// Round down; this reproduces the published tables.
    #[default]
    Floor,
    /// Round up, which is still valid since distances are integers.
    Ceil,
}

/// The unique `d = k(q-2) + l` with `k >= 0` and `1 <= l <= q-2`, for `d >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusDecomposition {
    pub d: u32,
    pub k: u32,
    pub l: u32,
}

impl TorusDecomposition {
    pub fn new(d: u32, q: u64) -> Option<Self> {
        let step = q as u32 - 2;
        if d == 0 || step == 0 {
            return None;
        }
        let k = (d - 1) / step;
        Some(TorusDecomposition { d, k, l: d - k * step })
    }
}

/// Minimum distance of `C_T(d)` for the projective torus with `s` coordinates:
/// `(q-1)^{s-k-2} (q-1-l)` inside `1 <= d < (s-1)(q-2)`, the repetition-code
/// length `(q-1)^{s-1}` at `d = 0`, and 1 once the code is the whole space.
pub fn torus_min_distance(s: usize, d: u32, q: u64) -> u64 {
    assert!(s >= 1 && q >= 3);
    let units = q - 1;
    let top = (s as u64 - 1) * (q - 2);
    if d == 0 {
        return units.pow(s as u32 - 1);
    }
    if d as u64 >= top {
        return 1;
    }
    let TorusDecomposition { k, l, .. } = TorusDecomposition::new(d, q).expect("d >= 1");
    units.pow(s as u32 - k - 2) * (units - l as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub rational: Ratio<u128>,
    pub reported: u64,
}

impl LowerBound {
    fn new(rational: Ratio<u128>, convention: DeltaConvention) -> Self {
        let rounded = match convention {
            DeltaConvention::Floor => rational.floor(),
            DeltaConvention::Ceil => rational.ceil(),
        };
        LowerBound { rational, reported: (rounded.to_integer() as u64).max(1) }
    }

    pub fn rational_string(&self) -> String {
        self.rational.to_string()
    }
}

/// `|X| * delta_T(alpha d) / (q-1)^{n-1}` for a matrix whose columns all sum to
/// `alpha`; `n` is the number of variables.
pub fn lower_bound_delta(
    x_size: u64,
    alpha: Option<u64>,
    n: usize,
    d: u32,
    q: u64,
    convention: DeltaConvention,
) -> Result<LowerBound, DistanceError> {
    let alpha = alpha.ok_or(DistanceError::NotUniform)?;
    let torus = torus_min_distance(n, (alpha * d as u64) as u32, q) as u128;
    let den = ((q - 1) as u128).pow(n as u32 - 1);
    Ok(LowerBound::new(Ratio::new(x_size as u128 * torus, den), convention))
}

/// The connected-graph form: `delta_T(2d) / (q-1)` for bipartite graphs and
/// `delta_T(2d)` otherwise, with `n` the number of vertices.
pub fn graph_lower_bound(
    graph: &GraphProvenance,
    d: u32,
    q: u64,
    convention: DeltaConvention,
) -> Result<LowerBound, DistanceError> {
    if !graph.connected {
        return Err(DistanceError::Disconnected);
    }
    let torus = torus_min_distance(graph.vertices, 2 * d, q) as u128;
    let den = if graph.bipartite { (q - 1) as u128 } else { 1 };
    Ok(LowerBound::new(Ratio::new(torus, den), convention))
}

/// `|X| - H_X(d) + 1`.
pub fn singleton_bound(x_size: u64, h_x: u64) -> u64 {
    assert!(h_x <= x_size, "dimension {h_x} exceeds length {x_size}");
    x_size - h_x + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperBound {
    /// `delta_T(d) - delta_Y(d)` (or `- 1` when `delta_Y` is unknown).
    Bound(u64),
    /// X is the whole torus; the value is its exact minimum distance.
    TorusExact(u64),
}

/// `delta_X(d) <= delta_T(d) - delta_Y(d)` for `0 <= d < (m-1)(q-2)`, where Y
/// is the complement of X in the torus. Without an exact `delta_Y` the bound
/// uses `delta_Y >= 1`.
pub fn upper_bound_delta(
    m: usize,
    d: u32,
    q: u64,
    delta_y: Option<u64>,
    x_is_torus: bool,
) -> Result<UpperBound, DistanceError> {
    let limit = (m as u32 - 1) * (q as u32 - 2);
    if d >= limit {
        return Err(DistanceError::DegreeOutOfRange { d, limit });
    }
    let torus = torus_min_distance(m, d, q);
    if x_is_torus {
        return Ok(UpperBound::TorusExact(torus));
    }
    Ok(UpperBound::Bound(torus - delta_y.unwrap_or(1)))
}

/// Generator matrix of `C_X(d)`: the evaluation vectors of a set of degree-d
/// monomials forming a basis, `H_X(d)` rows by `|X|` columns.
pub fn generator_matrix(
    field: &GaloisField,
    x: &ToricSet,
    d: u32,
    budget: u64,
) -> Result<FieldMatrix, HilbertError> {
    let (_, chosen) = evaluation_basis(field, x, d, budget)?;
    let rows = chosen.iter().map(|e| evaluate_monomial(field, x, e)).collect();
    Ok(FieldMatrix::from_rows(rows, x.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMethod {
    /// Every nonzero codeword (up to scalars) enumerated.
    Brute,
    /// Exhaustive over disjoint information sets with a matching lower bound.
    Infoset,
    /// Minimum over random codewords; only an upper estimate.
    Sampled,
}

impl DistanceMethod {
    pub fn is_exact(self) -> bool {
        !matches!(self, DistanceMethod::Sampled)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceMethod::Brute => "brute",
            DistanceMethod::Infoset => "infoset",
            DistanceMethod::Sampled => "sampled",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "brute" => Some(DistanceMethod::Brute),
            "infoset" => Some(DistanceMethod::Infoset),
            "sampled" => Some(DistanceMethod::Sampled),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinDistance {
    pub value: u64,
    pub method: DistanceMethod,
}

fn weight(v: &[Elem]) -> u64 {
    v.iter().filter(|&&x| x != 0).count() as u64
}

/// Independent subset of the rows of `g` (keeps the original rows).
fn row_basis(field: &GaloisField, g: &FieldMatrix) -> Vec<Vec<Elem>> {
    let mut basis = EchelonBasis::new(field, g.cols());
    g.iter_rows()
        .filter(|r| basis.insert(r.to_vec()))
        .map(|r| r.to_vec())
        .collect()
}

fn add_into(field: &GaloisField, dst: &mut [Elem], src: &[Elem]) {
    match field.add_table() {
        Some(t) => {
            let q = field.order();
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = t[(*d * q + s) as usize];
            }
        }
        None => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = field.add(*d, s);
            }
        }
    }
}

/// Minimum weight over all codewords whose first nonzero message coefficient
/// is 1 (every nonzero codeword up to a scalar). Messages are walked in a
/// p-ary Gray code so each step adds a single precomputed row. Returns `None`
/// when `(q^k - 1)/(q - 1) * n` exceeds the budget or the code is zero.
pub fn min_distance_exhaustive(field: &GaloisField, g: &FieldMatrix, budget: u64) -> Option<u64> {
    let rows = row_basis(field, g);
    let (k, n) = (rows.len(), g.cols());
    if k == 0 {
        return None;
    }
    let q = field.order() as u128;
    let cost = q
        .checked_pow(k as u32)
        .and_then(|qk| ((qk - 1) / (q - 1)).checked_mul(n as u128));
    if cost.is_none_or(|c| c > budget as u128) {
        return None;
    }
    let (p, deg) = (field.characteristic(), field.degree() as usize);
    // step[j * deg + t] = x^t * rows[j]; x^t is encoded as p^t
    let steps: Vec<Vec<Elem>> = rows
        .iter()
        .flat_map(|r| {
            (0..deg).map(move |t| {
                let c = p.pow(t as u32);
                r.iter().map(|&v| field.mul(c, v)).collect::<Vec<_>>()
            })
        })
        .collect();
    let mut best = u64::MAX;
    for lead in 0..k {
        let mut cw = rows[lead].clone();
        best = best.min(weight(&cw));
        let free = &steps[(lead + 1) * deg..];
        let mut counter = vec![0u32; free.len()];
        while let Some(j) = counter.iter().position(|&c| c != p - 1) {
            counter[..j].iter_mut().for_each(|c| *c = 0);
            counter[j] += 1;
            add_into(field, &mut cw, &free[j]);
            best = best.min(weight(&cw));
        }
        if best == 1 {
            break;
        }
    }
    Some(best)
}

/// Reduced echelon form of `rows` taking pivots greedily in `order`; returns
/// the pivot columns.
fn systematic(field: &GaloisField, g: &mut [Vec<Elem>], order: &[usize]) -> Vec<usize> {
    let k = g.len();
    let mut scratch = Vec::new();
    let mut used = Vec::new();
    for &c in order {
        let r = used.len();
        if r == k {
            break;
        }
        let Some(piv) = (r..k).find(|&i| g[i][c] != 0) else { continue };
        g.swap(piv, r);
        let inv = field.inv(g[r][c]).expect("nonzero pivot");
        scale(field, &mut g[r], inv);
        let pivot_row = g[r].clone();
        for (i, row) in g.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                sub_scaled(field, row, f, &pivot_row, &mut scratch);
            }
        }
        used.push(c);
    }
    used
}

/// Generator matrices in reduced echelon form on successive disjoint column
/// sets, with the rank reached on each set.
fn information_sets(field: &GaloisField, rows: &[Vec<Elem>]) -> Vec<(Vec<Vec<Elem>>, usize)> {
    let mut pool: Vec<usize> = (0..rows[0].len()).collect();
    let mut out = Vec::new();
    while !pool.is_empty() {
        let mut g = rows.to_vec();
        let used = systematic(field, &mut g, &pool);
        if used.is_empty() {
            break;
        }
        pool.retain(|c| !used.contains(c));
        out.push((g, used.len()));
    }
    out
}

/// Brouwer-Zimmermann style search. For each of the disjoint information sets,
/// all messages of weight w are enumerated for w = 1, 2, ...; any codeword not
/// yet seen then has weight at least `sum_j max(0, w + 1 - (k - r_j))`, and the
/// search stops once the best weight found reaches that bound. Returns `None`
/// when the budget (codeword-symbol operations) runs out first.
pub fn min_distance_information_sets(
    field: &GaloisField,
    g: &FieldMatrix,
    budget: u64,
) -> Option<u64> {
    let rows = row_basis(field, g);
    if rows.is_empty() {
        return None;
    }
    information_set_search(field, &rows, budget).ok()
}

/// `Err` carries the lightest codeword weight seen before the budget ran out.
fn information_set_search(field: &GaloisField, rows: &[Vec<Elem>], budget: u64) -> Result<u64, u64> {
    let (k, n) = (rows.len(), rows[0].len());
    let sets = information_sets(field, rows);
    let units: Vec<Elem> = (1..field.order()).collect();
    // scaled[j][row][u] = units[u] * row
    let scaled: Vec<Vec<Vec<Vec<Elem>>>> = sets
        .iter()
        .map(|(gj, _)| {
            gj.iter()
                .map(|r| units.iter().map(|&c| r.iter().map(|&v| field.mul(c, v)).collect()).collect())
                .collect()
        })
        .collect();
    let mut best = rows.iter().map(|r| weight(r)).min().unwrap_or(u64::MAX);
    let mut spent = 0u64;
    for w in 1..=k {
        for (j, _) in sets.iter().enumerate() {
            let mut stack = vec![vec![0 as Elem; n]; w + 1];
            if !enumerate_weight(field, &scaled[j], w, 0, 0, &mut stack, &mut best, &mut spent, budget) {
                return Err(best);
            }
        }
        let lower: u64 = sets
            .iter()
            .map(|&(_, r)| (w as i64 + 1 - (k - r) as i64).max(0) as u64)
            .sum();
        if best <= lower || w == k {
            return Ok(best);
        }
    }
    Ok(best)
}

/// Depth-first walk over supports `start..` of size `w - depth`; the first
/// chosen coefficient is 1, later ones range over all units.
#[allow(clippy::too_many_arguments)]
fn enumerate_weight(
    field: &GaloisField,
    scaled: &[Vec<Vec<Elem>>],
    w: usize,
    depth: usize,
    start: usize,
    stack: &mut [Vec<Elem>],
    best: &mut u64,
    spent: &mut u64,
    budget: u64,
) -> bool {
    if depth == w {
        *best = (*best).min(weight(&stack[depth]));
        return true;
    }
    let k = scaled.len();
    let remaining = w - depth;
    for pos in start..=k - remaining {
        let coefs = if depth == 0 { 0..1 } else { 0..scaled[pos].len() };
        for u in coefs {
            *spent += stack[0].len() as u64;
            if *spent > budget {
                return false;
            }
            let (head, tail) = stack.split_at_mut(depth + 1);
            tail[0].copy_from_slice(&head[depth]);
            add_into(field, &mut tail[0], &scaled[pos][u]);
            if !enumerate_weight(field, scaled, w, depth + 1, pos + 1, stack, best, spent, budget) {
                return false;
            }
        }
    }
    true
}

/// Random information-set sampling: for each of `trials` random column
/// orders, the generator is put in systematic form on the first independent
/// columns and the weights of its rows are recorded. Fixed seed; the result is
/// an upper estimate of the minimum distance, not a proof.
pub fn min_distance_sampled(field: &GaloisField, g: &FieldMatrix, trials: u64) -> Option<u64> {
    let rows = row_basis(field, g);
    if rows.is_empty() {
        return None;
    }
    Some(sampled_search(field, &rows, trials))
}

fn sampled_search(field: &GaloisField, rows: &[Vec<Elem>], trials: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut order: Vec<usize> = (0..rows[0].len()).collect();
    let mut best = rows.iter().map(|r| weight(r)).min().unwrap();
    for _ in 0..trials {
        order.shuffle(&mut rng);
        let mut m = rows.to_vec();
        systematic(field, &mut m, &order);
        best = m.iter().map(|r| weight(r)).fold(best, u64::min);
    }
    best
}

/// Exhaustive search when it fits the budget, then the information-set search,
/// then random information-set sampling (tagged as non-exact), seeded with the
/// lightest codeword the interrupted search found. `None` only for the zero
/// code.
pub fn exact_min_distance(field: &GaloisField, g: &FieldMatrix, budget: u64) -> Option<MinDistance> {
    if let Some(v) = min_distance_exhaustive(field, g, budget) {
        return Some(MinDistance { value: v, method: DistanceMethod::Brute });
    }
    let rows = row_basis(field, g);
    if rows.is_empty() {
        return None;
    }
    let partial = match information_set_search(field, &rows, budget) {
        Ok(v) => return Some(MinDistance { value: v, method: DistanceMethod::Infoset }),
        Err(best) => best,
    };
    let k = rows.len() as u64;
    let trials = (budget / (k * k * g.cols() as u64).max(1)).clamp(1, MAX_TRIALS);
    let value = sampled_search(field, &rows, trials).min(partial);
    Some(MinDistance { value, method: DistanceMethod::Sampled })
}

/// Regularity lower bounds for uniform matrices and connected graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityBounds {
    /// `|X| (q-2)(n-1) / (alpha (q-1)^{n-1})`, as "a/b".
    pub general: Option<String>,
    /// `(q-2)(n-1) / 2` (non-bipartite) or `/ (2(q-1))` (bipartite).
    pub graph: Option<String>,
    /// True when `r_X` equals the graph bound exactly.
    pub graph_attained: Option<bool>,
    pub checks: Vec<CheckOutcome>,
}

pub fn regularity_lower_bounds(
    x_size: u64,
    alpha: Option<u64>,
    n: usize,
    q: u64,
    graph: Option<&GraphProvenance>,
    r_x: Option<u32>,
) -> RegularityBounds {
    let mut checks = Vec::new();
    let base = ((q - 2) * (n as u64 - 1)) as u128;
    let general = alpha.filter(|&a| a > 0).map(|a| {
        Ratio::new(x_size as u128 * base, a as u128 * ((q - 1) as u128).pow(n as u32 - 1))
    });
    let graph_bound = graph.filter(|g| g.connected).map(|g| {
        let den = if g.bipartite { 2 * (q - 1) as u128 } else { 2 };
        Ratio::new(base, den)
    });
    for (name, bound) in [("regularity_lower_bound", general), ("graph_regularity_lower_bound", graph_bound)] {
        match (bound, r_x) {
            (Some(b), Some(r)) => {
                let holds = Ratio::from_integer(r as u128) >= b;
                let detail = format!("r_X = {r} >= {b}");
                if !holds && x_size == 1 {
                    // a single point has r_X = 0 while the bound stays positive
                    checks.push(CheckOutcome::new(name, CheckStatus::Discrepant, detail + " (X is one point)"));
                } else {
                    checks.push(CheckOutcome::verdict(name, holds, detail));
                }
            }
            (Some(_), None) => checks.push(CheckOutcome::skipped(name, "r_X unknown")),
            (None, _) => checks.push(CheckOutcome::skipped(name, "hypothesis does not hold")),
        }
    }
    RegularityBounds {
        general: general.map(|b| b.to_string()),
        graph: graph_bound.map(|b| b.to_string()),
        graph_attained: graph_bound.zip(r_x).map(|(b, r)| b == Ratio::from_integer(r as u128)),
        checks,
    }
}

/// Every distance quantity for one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub d: u32,
    pub lower_rational: Option<String>,
    pub lower_paper: Option<u64>,
    pub singleton: Option<u64>,
    pub upper_torus: Option<UpperBound>,
    /// Exact minimum distance of `C_Y(d)`, Y the complement of X in the torus,
    /// when it was used for `upper_torus`.
    pub delta_y: Option<u64>,
    pub exact: Option<MinDistance>,
}

impl DistanceReport {
    /// `lower <= exact <= min(singleton, upper)`, when an exact value exists.
    pub fn sandwich_holds(&self) -> Option<bool> {
        let exact = self.exact.filter(|e| e.method.is_exact())?.value;
        let upper = match self.upper_torus {
            Some(UpperBound::Bound(u)) | Some(UpperBound::TorusExact(u)) => u,
            None => u64::MAX,
        };
        let lower = self.lower_paper.unwrap_or(1);
        Some(lower <= exact && exact <= self.singleton.unwrap_or(u64::MAX).min(upper))
    }
}
