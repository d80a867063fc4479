use std::fmt;

use super::field::{CoefficientField, Scalar};
use super::laurent::LaurentPoly;
use super::PolyError;

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: CoefficientField,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, field: CoefficientField) -> Self {
        PolyMatrix { field, rows, cols, entries: vec![LaurentPoly::zero(field); rows * cols] }
    }

    pub fn identity(n: usize, field: CoefficientField) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(field));
        }
        m
    }

    /// Builds from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>, cols: usize, field: CoefficientField) -> Self {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            entries.extend(row);
        }
        PolyMatrix { field, rows: r, cols, entries }
    }

    /// Integer-coefficient polynomial entries; `spec[i][j]` lists coefficients
    /// from `t^0` upward.
    pub fn from_int_polys(spec: &[&[&[i64]]], field: CoefficientField) -> Self {
        let cols = spec.first().map_or(0, |r| r.len());
        let rows = spec
            .iter()
            .map(|r| r.iter().map(|c| LaurentPoly::from_ints(field, 0, c)).collect())
            .collect();
        Self::from_rows(rows, cols, field)
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut LaurentPoly {
        &mut self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[LaurentPoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_polynomial)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.cols != other.rows {
            return Err(PolyError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        let mut out = PolyMatrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let slot = out.get_mut(i, j);
                    *slot = &*slot + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &PolyMatrix,
        op: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly,
    ) -> Result<PolyMatrix, PolyError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(PolyError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| op(a, b)).collect();
        Ok(PolyMatrix { field: self.field, rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &LaurentPoly) -> PolyMatrix {
        PolyMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &PolyMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(rows, cols, self.field);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    /// Multiplies every row by the power of `t` that clears its negative
    /// exponents and strips common positive ones. Row scaling by units keeps
    /// the right kernel, the row module and the rank unchanged.
    pub fn rows_to_polynomial(&self) -> PolyMatrix {
        let mut out = self.clone();
        for r in 0..self.rows {
            let low = self.row(r).iter().filter_map(LaurentPoly::low_exp).min();
            if let Some(low) = low {
                if low != 0 {
                    for c in 0..self.cols {
                        let e = out.get(r, c).shift(-low);
                        out.set(r, c, e);
                    }
                }
            }
        }
        out
    }

    /// Like [`rows_to_polynomial`](Self::rows_to_polynomial) but only ever
    /// multiplies by nonnegative powers, so polynomial input is unchanged.
    pub fn clear_negative_powers(&self) -> PolyMatrix {
        let mut out = self.clone();
        for r in 0..self.rows {
            let low = self.row(r).iter().filter_map(LaurentPoly::low_exp).min();
            if let Some(low) = low.filter(|&l| l < 0) {
                for c in 0..self.cols {
                    let e = out.get(r, c).shift(-low);
                    out.set(r, c, e);
                }
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] -= q * row[source]`.
    pub(crate) fn row_axpy(&mut self, target: usize, source: usize, q: &LaurentPoly) {
        for c in 0..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c) - &(q * s);
            self.set(target, c, v);
        }
    }

    /// `col[target] -= q * col[source]`.
    pub(crate) fn col_axpy(&mut self, target: usize, source: usize, q: &LaurentPoly) {
        for r in 0..self.rows {
            let s = self.get(r, source);
            if s.is_zero() {
                continue;
            }
            let v = self.get(r, target) - &(q * s);
            self.set(r, target, v);
        }
    }

    pub(crate) fn scale_col(&mut self, c: usize, s: &Scalar) {
        for r in 0..self.rows {
            let v = self.get(r, c).scale(s);
            self.set(r, c, v);
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
