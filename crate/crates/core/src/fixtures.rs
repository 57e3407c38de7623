//! The three worked examples (a graph over GF(7), a uniform clutter over
//! GF(9), a general matrix over GF(11)) with their published parameter
//! tables, and a cell-by-cell comparison against pipeline output.

use serde::Serialize;

use crate::distance::DeltaConvention;
use crate::incidence::Clutter;
use crate::pipeline::{self, InputKind, RunConfig, RunError, RunReport};
use crate::toric::ExponentMatrix;

pub fn example1_clutter() -> Clutter {
    Clutter::new(5, &[vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 4], vec![4, 5], vec![1, 5]])
        .expect("valid graph")
}

pub fn example1_matrix() -> ExponentMatrix {
    ExponentMatrix::new(vec![
        vec![1, 0, 1, 1, 0, 1],
        vec![1, 1, 0, 0, 0, 0],
        vec![0, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 0],
        vec![0, 0, 0, 0, 1, 1],
    ])
    .expect("rectangular")
}

pub fn example2_clutter() -> Clutter {
    Clutter::new(
        6,
        &[
            vec![1, 2, 3],
            vec![2, 3, 4],
            vec![3, 4, 5],
            vec![4, 5, 6],
            vec![1, 5, 6],
            vec![1, 2, 6],
        ],
    )
    .expect("valid clutter")
}

pub fn example2_matrix() -> ExponentMatrix {
    ExponentMatrix::new(vec![
        vec![1, 0, 0, 0, 1, 1],
        vec![1, 1, 0, 0, 0, 1],
        vec![1, 1, 1, 0, 0, 0],
        vec![0, 1, 1, 1, 0, 0],
        vec![0, 0, 1, 1, 1, 0],
        vec![0, 0, 0, 1, 1, 1],
    ])
    .expect("rectangular")
}

pub fn example3_matrix() -> ExponentMatrix {
    ExponentMatrix::new(vec![vec![3, 1, 0, 1], vec![0, 4, 2, 2], vec![3, 1, 4, 3]])
        .expect("rectangular")
}

/// Exact `delta_X(1)` of the first example, found by exhaustive search in this
/// crate (not a published value).
pub const EXAMPLE1_DELTA1: u64 = 1070;

/// Exact `delta_X(1)` of the third example, found by exhaustive search in this
/// crate (not a published value).
pub const EXAMPLE3_DELTA1: u64 = 40;

/// One published example: input, scalar parameters and the per-degree table
/// starting at d = 1.
#[derive(Debug, Clone)]
pub struct GoldenExample {
    pub name: &'static str,
    pub q: u64,
    pub kind: InputKind,
    pub y_sizes: Vec<u64>,
    pub kernel_size: u64,
    pub length: u64,
    pub regularity: u32,
    pub h_x: Vec<u64>,
    pub h_t: Vec<u64>,
    pub hbar: Vec<u64>,
    pub delta_lower: Vec<u64>,
    pub singleton: Vec<u64>,
}

impl GoldenExample {
    pub fn d_max(&self) -> u32 {
        self.h_x.len() as u32
    }

    /// Pipeline configuration reproducing the published table.
    pub fn config(&self) -> RunConfig {
        RunConfig {
            q: self.q,
            input: self.kind.clone(),
            d_max: Some(self.d_max()),
            exact_budget: 0,
            convention: DeltaConvention::Floor,
            ..RunConfig::default_for(self.q, self.kind.clone())
        }
    }
}

pub fn golden_examples() -> Vec<GoldenExample> {
    vec![
        GoldenExample {
            name: "example1",
            q: 7,
            kind: InputKind::Graph(example1_clutter()),
            y_sizes: vec![6; 5],
            kernel_size: 6,
            length: 1296,
            regularity: 10,
            h_x: vec![6, 21, 55, 120, 231, 401, 627, 885, 1130, 1296],
            h_t: vec![6, 21, 56, 126, 252, 457, 762, 1182, 1722, 2373],
            hbar: vec![0, 0, 1, 6, 21, 56, 135, 297, 592, 1077],
            delta_lower: vec![864, 432, 180, 108, 36, 24, 12, 5, 3, 1],
            singleton: vec![1291, 1276, 1242, 1177, 1066, 896, 670, 412, 167, 1],
        },
        GoldenExample {
            name: "example2",
            q: 9,
            kind: InputKind::Clutter(example2_clutter()),
            y_sizes: vec![8; 6],
            kernel_size: 512,
            length: 512,
            regularity: 11,
            h_x: vec![6, 19, 44, 85, 146, 231, 344, 442, 492, 510, 512, 512],
            h_t: vec![6, 21, 56, 126, 252, 462, 792, 1282, 1972, 2898, 4088, 5558],
            hbar: vec![0, 2, 12, 41, 106, 231, 448, 840, 1480, 2388, 3576, 5046],
            delta_lower: vec![320, 128, 48, 24, 7, 4, 1, 1, 1, 1, 1, 1],
            singleton: vec![507, 494, 469, 428, 367, 282, 169, 71, 21, 3, 1, 1],
        },
        GoldenExample {
            name: "example3",
            q: 11,
            kind: InputKind::Matrix(example3_matrix()),
            y_sizes: vec![10, 5, 10],
            kernel_size: 10,
            length: 50,
            regularity: 6,
            h_x: vec![4, 10, 20, 32, 44, 50],
            h_t: vec![4, 10, 20, 35, 56, 84],
            hbar: vec![0, 0, 0, 3, 12, 34],
            delta_lower: vec![20, 3, 1, 1, 1, 1],
            singleton: vec![47, 41, 31, 19, 7, 1],
        },
    ]
}

/// A table cell that differs from the published value. `d` is `None` for
/// scalar parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub example: String,
    pub d: Option<u32>,
    pub column: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FixtureReport {
    pub cells_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn cell<T: ToString + PartialEq>(
        &mut self,
        example: &str,
        d: Option<u32>,
        column: &str,
        expected: T,
        got: Option<T>,
    ) {
        self.cells_checked += 1;
        if got.as_ref() != Some(&expected) {
            self.mismatches.push(Mismatch {
                example: example.to_string(),
                d,
                column: column.to_string(),
                expected: expected.to_string(),
                got: got.map(|g| g.to_string()).unwrap_or_else(|| "missing".into()),
            });
        }
    }
}

/// Compares a pipeline report with one golden example, cell by cell.
pub fn compare(golden: &GoldenExample, report: &RunReport) -> FixtureReport {
    let mut out = FixtureReport::default();
    let name = golden.name;
    out.cell(name, None, "Y_sizes", format!("{:?}", golden.y_sizes), Some(format!("{:?}", report.length.y_sizes)));
    out.cell(name, None, "M", golden.kernel_size, Some(report.length.kernel_size));
    out.cell(name, None, "X", golden.length, Some(report.length.x_size));
    out.cell(name, None, "X_enumerated", golden.length, report.x_enumerated.map(|x| x as u64));
    out.cell(name, None, "r_X", golden.regularity, report.regularity);
    for (idx, d) in (1..=golden.d_max()).enumerate() {
        let row = report.table.rows.iter().find(|r| r.d == d);
        let get = |f: fn(&pipeline::ParameterRow) -> Option<u64>| row.and_then(f);
        out.cell(name, Some(d), "H_X", golden.h_x[idx], get(|r| r.h_x));
        out.cell(name, Some(d), "H_T", golden.h_t[idx], get(|r| Some(r.h_t)));
        out.cell(name, Some(d), "Hbar", golden.hbar[idx], get(|r| r.hbar));
        out.cell(name, Some(d), "delta_lower", golden.delta_lower[idx], get(|r| r.delta_lower));
        out.cell(name, Some(d), "singleton", golden.singleton[idx], get(|r| r.singleton));
    }
    out
}

/// Runs all three examples and compares every published cell.
pub fn check_all() -> Result<FixtureReport, RunError> {
    let mut total = FixtureReport::default();
    for golden in golden_examples() {
        let report = pipeline::run(&golden.config())?;
        let r = compare(&golden, &report);
        total.cells_checked += r.cells_checked;
        total.mismatches.extend(r.mismatches);
    }
    Ok(total)
}
