//! End-to-end run: parse an input, compute length, dimensions, bounds and
//! (optionally) exact distances over a degree range, and render the result.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{CheckOutcome, CheckStatus};
use crate::distance::{
    self, DeltaConvention, DistanceMethod, DistanceReport, MinDistance, RegularityBounds,
    DEFAULT_EXACT_BUDGET,
};
use crate::field::{prime_power, GaloisField};
use crate::hilbert::{
    self, evaluate_monomial, evaluation_basis, HilbertError, HilbertProfile, DEFAULT_RANK_BUDGET,
};
use crate::incidence::{self, Clutter, GraphProvenance};
use crate::length::{self, LengthCertificate, LengthError};
use crate::linalg::FieldMatrix;
use crate::toric::{enumerate_torus, enumerate_x, ExponentMatrix, ToricError, ToricSet, DEFAULT_ENUMERATION_BUDGET};

/// Cap on congruence-system evaluations when counting the kernel directly.
pub const DEFAULT_KERNEL_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("input error: {0}")]
    Input(String),
    #[error("theorem violation: {0}")]
    Theorem(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 2,
            RunError::Theorem(_) => 3,
            RunError::Budget(_) => 4,
        }
    }
}

/// Which input file layout to expect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Matrix,
    Graph,
    Clutter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputKind {
    Matrix(ExponentMatrix),
    /// A clutter whose edges all have two vertices.
    Graph(Clutter),
    Clutter(Clutter),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    q: u64,
    matrix: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClutterFile {
    q: u64,
    vertices: usize,
    edges: Vec<Vec<usize>>,
}

/// Parses a JSON input file, returning q and the input.
pub fn parse_input(text: &str, format: InputFormat) -> Result<(u64, InputKind), RunError> {
    let bad = |e: &dyn std::fmt::Display| RunError::Input(e.to_string());
    match format {
        InputFormat::Matrix => {
            let f: MatrixFile = serde_json::from_str(text).map_err(|e| bad(&e))?;
            let a = ExponentMatrix::new(f.matrix).map_err(|e| bad(&e))?;
            Ok((f.q, InputKind::Matrix(a)))
        }
        InputFormat::Graph | InputFormat::Clutter => {
            let f: ClutterFile = serde_json::from_str(text).map_err(|e| bad(&e))?;
            let c = Clutter::new(f.vertices, &f.edges).map_err(|e| bad(&e))?;
            if format == InputFormat::Graph {
                incidence::classify_graph(&c).map_err(|e| bad(&e))?;
                Ok((f.q, InputKind::Graph(c)))
            } else {
                Ok((f.q, InputKind::Clutter(c)))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub q: u64,
    pub input: InputKind,
    /// Last degree tabulated; `None` means `(m-1)(q-2) - 1`.
    pub d_max: Option<u32>,
    /// Codeword-symbol operations per degree for exact distance; 0 disables it.
    pub exact_budget: u64,
    pub convention: DeltaConvention,
    /// Monic modulus (low to high) for non-prime q, overriding the default.
    pub modulus: Option<Vec<u32>>,
    pub enumeration_budget: u64,
    pub kernel_budget: u64,
    pub rank_budget: u64,
}

impl RunConfig {
    pub fn default_for(q: u64, input: InputKind) -> Self {
        RunConfig {
            q,
            input,
            d_max: None,
            exact_budget: DEFAULT_EXACT_BUDGET,
            convention: DeltaConvention::Floor,
            modulus: None,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            kernel_budget: DEFAULT_KERNEL_BUDGET,
            rank_budget: DEFAULT_RANK_BUDGET,
        }
    }
}

/// One degree of the parameter table. Missing values are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterRow {
    pub d: u32,
    pub h_x: Option<u64>,
    pub h_t: u64,
    pub hbar: Option<u64>,
    pub delta_lower: Option<u64>,
    pub singleton: Option<u64>,
    pub delta_exact: Option<u64>,
    pub delta_exact_method: Option<DistanceMethod>,
}

pub const CSV_HEADER: [&str; 8] =
    ["d", "H_X", "H_T", "Hbar", "delta_lower", "singleton", "delta_exact", "delta_exact_method"];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterTable {
    pub rows: Vec<ParameterRow>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl ParameterTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.d.to_string(),
                opt(r.h_x),
                r.h_t.to_string(),
                opt(r.hbar),
                opt(r.delta_lower),
                opt(r.singleton),
                opt(r.delta_exact),
                opt(r.delta_exact_method.map(|m| m.as_str())),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn from_csv(text: &str) -> Result<Self, RunError> {
        let bad = |s: String| RunError::Input(s);
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| bad(e.to_string()))?;
        if header.iter().ne(CSV_HEADER) {
            return Err(bad(format!("unexpected CSV header {header:?}")));
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let field = |i: usize| -> Result<Option<u64>, RunError> {
                let s = &rec[i];
                if s.is_empty() {
                    return Ok(None);
                }
                s.parse().map(Some).map_err(|_| bad(format!("column {}: {s:?}", CSV_HEADER[i])))
            };
            let required = |i: usize| field(i)?.ok_or_else(|| bad(format!("column {} is empty", CSV_HEADER[i])));
            let method = match &rec[7] {
                "" => None,
                s => Some(DistanceMethod::parse(s).ok_or_else(|| bad(format!("unknown method {s:?}")))?),
            };
            rows.push(ParameterRow {
                d: required(0)? as u32,
                h_x: field(1)?,
                h_t: required(2)?,
                hbar: field(3)?,
                delta_lower: field(4)?,
                singleton: field(5)?,
                delta_exact: field(6)?,
                delta_exact_method: method,
            });
        }
        Ok(ParameterTable { rows })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSummary {
    pub q: u64,
    pub characteristic: u32,
    pub degree: u32,
    pub modulus: Vec<u32>,
    pub generator: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub field: FieldSummary,
    /// Number of variables.
    pub n: usize,
    /// Number of monomials (coordinates of the projective points).
    pub m: usize,
    pub alpha: Option<u64>,
    pub graph: Option<GraphProvenance>,
    pub length: LengthCertificate,
    pub x_enumerated: Option<usize>,
    pub regularity: Option<u32>,
    pub numerator: Option<Vec<u64>>,
    pub table: ParameterTable,
    pub distance: Vec<DistanceReport>,
    pub regularity_bounds: RegularityBounds,
    pub checks: Vec<CheckOutcome>,
    /// Budgets that ran out; the corresponding cells are left empty.
    pub exhausted: Vec<String>,
    /// Values obtained by a fallback method.
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn violations(&self) -> usize {
        crate::checks::violations(&self.checks)
    }

    /// 0 on success, 3 for a failed check, 4 when some budget ran out.
    pub fn exit_code(&self) -> i32 {
        if self.violations() > 0 {
            3
        } else if !self.exhausted.is_empty() {
            4
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn build_field(config: &RunConfig) -> Result<GaloisField, RunError> {
    let input = |e: crate::field::FieldError| RunError::Input(e.to_string());
    match &config.modulus {
        None => GaloisField::new(config.q).map_err(input),
        Some(f) => {
            let (p, k) = prime_power(config.q)
                .ok_or_else(|| RunError::Input(format!("field order {} is not a prime power", config.q)))?;
            if f.len() != k as usize + 1 {
                return Err(RunError::Input(format!("modulus {f:?} does not have degree {k}")));
            }
            GaloisField::with_modulus(p as u32, f).map_err(input)
        }
    }
}

fn length_error(e: LengthError) -> RunError {
    match e {
        LengthError::BudgetExceeded { .. } => RunError::Budget(e.to_string()),
        LengthError::TheoremViolation(_) => RunError::Theorem(e.to_string()),
    }
}

/// Exact distance of `C_X(d)` from the basis monomials. A full-space code
/// (`H_X(d) = |X|`) contains unit vectors, so its distance is 1.
fn exact_distance(
    field: &GaloisField,
    x: &ToricSet,
    chosen: &[Vec<u32>],
    budget: u64,
) -> Option<MinDistance> {
    if chosen.len() == x.len() {
        return Some(MinDistance { value: 1, method: DistanceMethod::Brute });
    }
    let rows = chosen.iter().map(|e| evaluate_monomial(field, x, e)).collect();
    distance::exact_min_distance(field, &FieldMatrix::from_rows(rows, x.len()), budget)
}

/// Exact distance of `C_Y(d)` by exhaustive search, skipped early when even
/// the smallest possible dimension `H_T(d) - H_X(d)` is out of budget.
fn complement_distance(field: &GaloisField, y: &ToricSet, d: u32, hbar: u64, config: &RunConfig) -> Option<u64> {
    let q = field.order() as f64;
    if q.powf(hbar as f64) / (q - 1.0) * y.len() as f64 > config.exact_budget as f64 {
        return None;
    }
    let g = distance::generator_matrix(field, y, d, config.rank_budget).ok()?;
    distance::min_distance_exhaustive(field, &g, config.exact_budget)
}

pub fn run(config: &RunConfig) -> Result<RunReport, RunError> {
    let field = build_field(config)?;
    let q = config.q;
    let (matrix, graph) = match &config.input {
        InputKind::Matrix(a) => (a.clone(), None),
        InputKind::Graph(c) => {
            let g = incidence::classify_graph(c).map_err(|e| RunError::Input(e.to_string()))?;
            (incidence::incidence_matrix(c), Some(g))
        }
        InputKind::Clutter(c) => {
            let g = c.is_graph().then(|| incidence::classify_graph(c).expect("all edges have size 2"));
            (incidence::incidence_matrix(c), g)
        }
    };
    let (n, m) = (matrix.n(), matrix.m());
    let alpha = incidence::uniformity(&matrix);
    let reduced = matrix.reduce(&field);
    let mut checks = Vec::new();
    let mut exhausted = Vec::new();

    let x = match enumerate_x(&matrix, &field, config.enumeration_budget) {
        Ok(x) => Some(x),
        Err(e @ ToricError::BudgetExceeded { .. }) => {
            exhausted.push(format!("enumeration of X: {e}"));
            None
        }
        Err(e) => return Err(RunError::Input(e.to_string())),
    };

    let cert = match length::length_theorem(&reduced, config.kernel_budget) {
        Ok(c) => c,
        Err(LengthError::BudgetExceeded { .. }) if x.is_some() => {
            let size = x.as_ref().map(|x| x.len() as u64).unwrap();
            length::certificate_from_enumeration(&reduced, size).map_err(length_error)?
        }
        Err(e) => return Err(length_error(e)),
    };
    if let Some(x) = &x {
        checks.push(CheckOutcome::verdict(
            "length_theorem_vs_enumeration",
            x.len() as u64 == cert.x_size,
            format!("prod |Y_i| / |M| = {}, enumerated |X| = {}", cert.x_size, x.len()),
        ));
    }
    checks.extend(length::corollary_checks(&matrix, &field, &cert, graph.as_ref()));
    if let Some(g) = &graph {
        checks.push(incidence::disconnected_strict_check(g, q, &cert));
    }

    let top = (m as u32 - 1) * (q as u32 - 2);
    let d_max = config.d_max.unwrap_or(top.saturating_sub(1));
    let x_size = cert.x_size;
    let torus_size = (q - 1).pow(m as u32 - 1);

    // H_X(d) until it reaches |X| (at most `top`). When the rank budget runs
    // out, or X was not enumerated, the distinct-character count is used.
    let mut h_values: Vec<u64> = Vec::new();
    let mut exact: Vec<Option<MinDistance>> = Vec::new();
    let mut from_characters = Vec::new();
    let mut regularity = None;
    for d in 0..=d_max.max(top) {
        let by_rank = x.as_ref().map(|x| (x, evaluation_basis(&field, x, d, config.rank_budget)));
        let h = match by_rank {
            Some((x, Ok((basis, chosen)))) => {
                if d <= d_max {
                    let ex = (config.exact_budget > 0)
                        .then(|| exact_distance(&field, x, &chosen, config.exact_budget))
                        .flatten();
                    exact.push(ex);
                }
                basis.rank() as u64
            }
            Some((_, Err(e))) if !matches!(e, HilbertError::BudgetExceeded { .. }) => {
                return Err(RunError::Theorem(e.to_string()));
            }
            _ => {
                let cost = hilbert::monomial_count(m, d).saturating_mul(n as u128);
                if cost > config.rank_budget as u128 {
                    exhausted.push(format!("degree {d}: {cost} character evaluations exceed budget {}", config.rank_budget));
                    break;
                }
                exact.push(None);
                from_characters.push(d);
                hilbert::hilbert_x_characters(&reduced, d)
            }
        };
        h_values.push(h);
        if h == x_size {
            regularity = Some(d);
            break;
        }
    }
    exact.truncate(d_max as usize + 1);
    if regularity.is_some() && config.exact_budget > 0 {
        // past r_X the code is the whole space
        exact.resize(d_max as usize + 1, Some(MinDistance { value: 1, method: DistanceMethod::Brute }));
    }
    if regularity.is_none() && h_values.len() as u32 > top {
        checks.push(CheckOutcome::verdict(
            "regularity_bound",
            false,
            format!("H_X({top}) = {:?} < |X| = {x_size}", h_values.last()),
        ));
    }
    let mut notes = Vec::new();
    if let (Some(&first), Some(&last)) = (from_characters.first(), from_characters.last()) {
        notes.push(format!("H_X(d) for d = {first}..={last} counted by distinct characters, not by rank"));
    }

    let profile = match regularity {
        Some(_) => Some(HilbertProfile::from_values(h_values.clone(), x_size).map_err(|e| RunError::Theorem(e.to_string()))?),
        None => None,
    };
    if let Some(p) = &profile {
        checks.extend(hilbert::regularity_max_identity(p, m, q));
    }
    let h_x_at = |d: u32| -> Option<u64> {
        match h_values.get(d as usize) {
            Some(&h) => Some(h),
            None if regularity.is_some() => Some(x_size),
            None => None,
        }
    };

    let x_is_torus = x_size == torus_size;
    let complement = match (&x, config.exact_budget > 0 && !x_is_torus) {
        (Some(x), true) => enumerate_torus(m, &field, config.enumeration_budget).ok().map(|t| x.complement_in(&t)),
        _ => None,
    };
    let mut rows = Vec::new();
    let mut distance_reports = Vec::new();
    let mut hbar_ok = true;
    for d in 0..=d_max {
        let h_x = h_x_at(d);
        let h_t = hilbert::hilbert_torus(m, d, q);
        let hbar = match h_x.map(|h| hilbert::hbar(h_t, h)) {
            Some(Ok(v)) => Some(v),
            Some(Err(e)) => {
                hbar_ok = false;
                checks.push(CheckOutcome::verdict("dimension_theorem", false, format!("d = {d}: {e}")));
                None
            }
            None => None,
        };
        let lower = distance::lower_bound_delta(x_size, alpha, n, d, q, config.convention).ok();
        if let (Some(g), Some(general)) = (&graph, &lower) {
            if let Ok(gb) = distance::graph_lower_bound(g, d, q, config.convention) {
                if gb.rational != general.rational {
                    checks.push(CheckOutcome::verdict(
                        "graph_lower_bound_agrees",
                        false,
                        format!("d = {d}: graph form {} vs general {}", gb.rational, general.rational),
                    ));
                }
            }
        }
        let singleton = h_x.map(|h| distance::singleton_bound(x_size, h));
        let delta_y = match (&complement, hbar) {
            (Some(y), Some(hb)) if d < top => complement_distance(&field, y, d, hb, config),
            _ => None,
        };
        let upper = distance::upper_bound_delta(m, d, q, delta_y, x_is_torus).ok();
        let ex = exact.get(d as usize).copied().flatten();
        let report = DistanceReport {
            d,
            lower_rational: lower.as_ref().map(|l| l.rational_string()),
            lower_paper: lower.as_ref().map(|l| l.reported),
            singleton,
            upper_torus: upper,
            delta_y,
            exact: ex,
        };
        if let Some(holds) = report.sandwich_holds() {
            if !holds {
                checks.push(CheckOutcome::verdict(
                    "distance_sandwich",
                    false,
                    format!("d = {d}: exact {:?} outside [{:?}, {:?} / {:?}]", ex, report.lower_paper, singleton, upper),
                ));
            }
        }
        rows.push(ParameterRow {
            d,
            h_x,
            h_t,
            hbar,
            delta_lower: lower.map(|l| l.reported),
            singleton,
            delta_exact: ex.map(|e| e.value),
            delta_exact_method: ex.map(|e| e.method),
        });
        distance_reports.push(report);
    }
    if hbar_ok && !rows.is_empty() {
        checks.push(CheckOutcome::verdict("dimension_theorem", true, "H_X(d) <= H_T(d) on every tabulated degree"));
    }
    let checked: Vec<_> = distance_reports.iter().filter_map(|r| r.sandwich_holds()).collect();
    if !checked.is_empty() && checked.iter().all(|&h| h) {
        checks.push(CheckOutcome::verdict(
            "distance_sandwich",
            true,
            format!("lower <= exact <= min(singleton, upper) on {} degrees", checked.len()),
        ));
    }

    let regularity_bounds = distance::regularity_lower_bounds(x_size, alpha, n, q, graph.as_ref(), regularity);
    checks.extend(regularity_bounds.checks.iter().cloned());

    Ok(RunReport {
        field: FieldSummary {
            q,
            characteristic: field.characteristic(),
            degree: field.degree(),
            modulus: field.modulus().to_vec(),
            generator: field.generator(),
        },
        n,
        m,
        alpha,
        graph,
        length: cert,
        x_enumerated: x.as_ref().map(|x| x.len()),
        regularity,
        numerator: profile.map(|p| p.numerator),
        table: ParameterTable { rows },
        distance: distance_reports,
        regularity_bounds,
        checks,
        exhausted,
        notes,
    })
}

/// Plain-text report: scalar parameters, the per-degree table, and checks.
pub fn render_text(report: &RunReport) -> String {
    let mut s = String::new();
    let f = &report.field;
    let _ = writeln!(s, "field: GF({}) p={} k={} modulus={:?} generator={}", f.q, f.characteristic, f.degree, f.modulus, f.generator);
    let _ = writeln!(s, "n = {}, m = {}, alpha = {}", report.n, report.m, opt(report.alpha));
    if let Some(g) = &report.graph {
        let _ = writeln!(s, "graph: connected={} bipartite={}", g.connected, g.bipartite);
    }
    let l = &report.length;
    let _ = writeln!(s, "|Y_i| = {:?}, |M| = {}, |X| = {}", l.y_sizes, l.kernel_size, l.x_size);
    let _ = writeln!(s, "enumerated |X| = {}", opt(report.x_enumerated));
    let _ = writeln!(s, "r_X = {}", opt(report.regularity));
    if let Some(h) = &report.numerator {
        let _ = writeln!(s, "h-vector = {h:?}");
    }
    let _ = writeln!(s);

    let header: Vec<String> = ["d", "H_X", "H_T", "Hbar", "delta'", "b_d", "delta", "method"].map(String::from).to_vec();
    let mut cells: Vec<Vec<String>> = vec![header];
    for r in &report.table.rows {
        cells.push(vec![
            r.d.to_string(),
            opt(r.h_x),
            r.h_t.to_string(),
            opt(r.hbar),
            opt(r.delta_lower),
            opt(r.singleton),
            opt(r.delta_exact),
            opt(r.delta_exact_method.map(|m| m.as_str())),
        ]);
    }
    let widths: Vec<usize> = (0..8).map(|j| cells.iter().map(|r| r[j].len().max(1)).max().unwrap()).collect();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{:>w$}", if c.is_empty() { "-" } else { c }, w = w)).collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    }
    let _ = writeln!(s);
    for c in &report.checks {
        if c.status != CheckStatus::Skipped {
            let _ = writeln!(s, "{c}");
        }
    }
    for e in &report.exhausted {
        let _ = writeln!(s, "[budget] {e}");
    }
    for note in &report.notes {
        let _ = writeln!(s, "[note] {note}");
    }
    s
}
