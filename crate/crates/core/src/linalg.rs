//! Dense matrices over GF(q) and exact rank by Gaussian elimination.

use crate::field::{Elem, GaloisField};

/// Row-major dense matrix of encoded field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    /// Builds a matrix from equal-length rows. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        FieldMatrix { rows: n, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Elem]> {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }
}

/// `dst -= c * src`, elementwise. `scratch` is resized to hold a q-entry table.
pub(crate) fn sub_scaled(
    field: &GaloisField,
    dst: &mut [Elem],
    c: Elem,
    src: &[Elem],
    scratch: &mut Vec<Elem>,
) {
    debug_assert_eq!(dst.len(), src.len());
    let q = field.order();
    scratch.clear();
    scratch.extend((0..q).map(|x| field.neg(field.mul(c, x))));
    match field.add_table() {
        Some(table) => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = table[(*d * q + scratch[s as usize]) as usize];
            }
        }
        None => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = field.add(*d, scratch[s as usize]);
            }
        }
    }
}

/// Multiplies `row` in place by `c`.
pub(crate) fn scale(field: &GaloisField, row: &mut [Elem], c: Elem) {
    for x in row.iter_mut() {
        *x = field.mul(*x, c);
    }
}

/// Exact rank over GF(q). Pivots are taken column by column, using the first
/// row (from the top of the unreduced block) with a nonzero entry.
pub fn rank(field: &GaloisField, m: &FieldMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut scratch = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(a[r * cols + c]).expect("pivot is nonzero");
        scale(field, &mut a[r * cols + c..(r + 1) * cols], inv);
        let (head, tail) = a.split_at_mut((r + 1) * cols);
        let pivot_row = &head[r * cols + c..];
        for i in 0..rows - r - 1 {
            let row = &mut tail[i * cols + c..(i + 1) * cols];
            let f = row[0];
            if f != 0 {
                sub_scaled(field, row, f, pivot_row, &mut scratch);
            }
        }
        r += 1;
    }
    r
}

/// Row-echelon basis grown one vector at a time.
///
/// Every stored row has its pivot entry equal to 1 and zeros in the pivot
/// columns of all rows stored before it.
#[derive(Debug, Clone)]
pub struct EchelonBasis<'f> {
    field: &'f GaloisField,
    len: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    scratch: Vec<Elem>,
}

impl<'f> EchelonBasis<'f> {
    pub fn new(field: &'f GaloisField, len: usize) -> Self {
        EchelonBasis { field, len, rows: Vec::new(), pivots: Vec::new(), scratch: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Reduces `v` against the basis; returns true (and stores the reduced
    /// vector) when `v` is independent of the current span.
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(pc) => {
                let inv = self.field.inv(v[pc]).expect("nonzero");
                scale(self.field, &mut v[pc..], inv);
                self.rows.push(v);
                self.pivots.push(pc);
                true
            }
        }
    }

    /// True when `v` lies in the span of the basis.
    pub fn contains(&mut self, v: &[Elem]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }

    fn reduce(&mut self, v: &mut [Elem]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                sub_scaled(self.field, &mut v[pc..], f, &row[pc..], &mut self.scratch);
            }
        }
    }
}
