//! Exact elimination over `F[t]`: rank over `F(t)`, Hermite and Smith
//! normal forms, kernels and solving over the Euclidean domain.

use super::laurent::LaurentPoly;
use super::matrix::PolyMatrix;
use super::PolyError;

/// Rank over the rational function field `F(t)`.
///
/// Fraction-free (Bareiss) elimination with full pivoting on the entry of
/// least degree. Every intermediate entry is a minor of the input, so the
/// division by the previous pivot is exact.
pub fn rank_over_fraction_field(m: &PolyMatrix) -> usize {
    let mut a = m.rows_to_polynomial();
    let (rows, cols) = (a.rows(), a.cols());
    let field = a.field();
    let mut prev = LaurentPoly::one(field);
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if let Some(d) = a.get(i, j).degree() {
                    if best.is_none_or(|(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap_rows(rank, pi);
        a.swap_cols(rank, pj);
        let pivot = a.get(rank, rank).clone();
        for i in rank + 1..rows {
            let lead = a.get(i, rank).clone();
            for j in rank + 1..cols {
                let num = &(&pivot * a.get(i, j)) - &(&lead * a.get(rank, j));
                let v = num.div_exact(&prev).expect("Bareiss division is exact");
                a.set(i, j, v);
            }
            a.set(i, rank, LaurentPoly::zero(field));
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Column Hermite form `m * u = h` over `F[t]`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: PolyMatrix,
    pub u: PolyMatrix,
    /// Row of the pivot in column `c`, for `c < rank`; strictly increasing.
    pub pivot_rows: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

/// Column echelon form by elementary column operations over `F[t]`.
///
/// Pivots are monic and entries to the left of a pivot are reduced modulo
/// it. Columns `rank..` of `h` are zero, so the matching columns of `u` span
/// the right kernel. Entries must already be polynomials.
pub fn hermite_normal_form(m: &PolyMatrix) -> Result<HermiteForm, PolyError> {
    if !m.is_polynomial() {
        return Err(PolyError::NotPolynomial);
    }
    let field = m.field();
    let mut h = m.clone();
    let mut u = PolyMatrix::identity(m.cols(), field);
    let cols = m.cols();
    let mut pivot_rows = Vec::new();
    let mut pc = 0;
    for r in 0..m.rows() {
        if pc == cols {
            break;
        }
        loop {
            let best = (pc..cols)
                .filter_map(|j| h.get(r, j).degree().map(|d| (j, d)))
                .min_by_key(|&(_, d)| d);
            let Some((j, _)) = best else { break };
            h.swap_cols(pc, j);
            u.swap_cols(pc, j);
            let pivot = h.get(r, pc).clone();
            let mut done = true;
            for j in pc + 1..cols {
                if h.get(r, j).is_zero() {
                    continue;
                }
                let (q, rem) = h.get(r, j).div_rem(&pivot)?;
                h.col_axpy(j, pc, &q);
                u.col_axpy(j, pc, &q);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, pc).is_zero() {
            continue;
        }
        let inv = field.inv(h.get(r, pc).leading_coeff().expect("nonzero pivot"));
        h.scale_col(pc, &inv);
        u.scale_col(pc, &inv);
        let pivot = h.get(r, pc).clone();
        for j in 0..pc {
            let (q, _) = h.get(r, j).div_rem(&pivot)?;
            if !q.is_zero() {
                h.col_axpy(j, pc, &q);
                u.col_axpy(j, pc, &q);
            }
        }
        pivot_rows.push(r);
        pc += 1;
    }
    Ok(HermiteForm { h, u, pivot_rows })
}

/// Module basis (as columns) of the right kernel `{v : m v = 0}`.
///
/// Laurent rows are first scaled into `F[t]`; this does not change the
/// kernel. The basis is over `F[t]`, hence also over `F[t^{+-1}]`.
pub fn kernel_basis(m: &PolyMatrix) -> PolyMatrix {
    let poly = m.rows_to_polynomial();
    let hf = hermite_normal_form(&poly).expect("rows were made polynomial");
    let rank = hf.rank();
    hf.u.block(0, rank, m.cols(), m.cols() - rank)
}

/// Solves `basis * x = target` over `F[t^{+-1}]`.
///
/// Fails with [`PolyError::NotInSpan`] when some target column is not in the
/// `F[t^{+-1}]`-span of the basis columns.
pub fn solve_in_span(basis: &PolyMatrix, target: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
    if basis.rows() != target.rows() {
        return Err(PolyError::DimensionMismatch {
            left: (basis.rows(), basis.cols()),
            right: (target.rows(), target.cols()),
        });
    }
    let field = basis.field();
    // scale basis columns into F[t]; remember the shifts to undo them on x
    let mut shifts = vec![0i64; basis.cols()];
    let mut b = basis.clone();
    for (c, shift) in shifts.iter_mut().enumerate() {
        if let Some(low) = basis.column(c).iter().filter_map(LaurentPoly::low_exp).min() {
            *shift = -low;
            for r in 0..b.rows() {
                let e = b.get(r, c).shift(-low);
                b.set(r, c, e);
            }
        }
    }
    let hf = hermite_normal_form(&b)?;
    let rank = hf.rank();
    let mut y = PolyMatrix::zeros(basis.cols(), target.cols(), field);
    for tc in 0..target.cols() {
        let mut residual = target.column(tc);
        for (c, &pr) in hf.pivot_rows.iter().enumerate() {
            if residual[pr].is_zero() {
                continue;
            }
            let coeff = residual[pr].div_exact_laurent(hf.h.get(pr, c)).ok_or(PolyError::NotInSpan)?;
            for (r, res) in residual.iter_mut().enumerate().skip(pr) {
                let hv = hf.h.get(r, c);
                if !hv.is_zero() {
                    *res = &*res - &(&coeff * hv);
                }
            }
            y.set(c, tc, coeff);
        }
        if residual.iter().any(|e| !e.is_zero()) {
            return Err(PolyError::NotInSpan);
        }
    }
    debug_assert!(y.block(rank, 0, basis.cols() - rank, target.cols()).is_zero());
    let mut x = hf.u.try_mul(&y)?;
    for (c, &s) in shifts.iter().enumerate() {
        if s != 0 {
            for tc in 0..x.cols() {
                let e = x.get(c, tc).shift(s);
                x.set(c, tc, e);
            }
        }
    }
    Ok(x)
}

/// Invariant factors over `F[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// `min(rows, cols)` factors, monic, each dividing the next; zeros last.
    pub invariant_factors: Vec<LaurentPoly>,
    pub rank: usize,
    pub field: super::CoefficientField,
}

impl SnfResult {
    /// Product of the first `k` factors.
    pub fn leading_product(&self, k: usize) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.field);
        for f in self.invariant_factors.iter().take(k) {
            acc = &acc * f;
        }
        acc
    }
}

/// Smith normal form over `F[t]` by alternating row and column Euclidean
/// reduction. Laurent rows are first scaled into `F[t]`.
pub fn smith_normal_form(m: &PolyMatrix) -> SnfResult {
    let mut a = m.clear_negative_powers();
    let field = a.field();
    let (rows, cols) = (a.rows(), a.cols());
    let n = rows.min(cols);
    let mut factors = Vec::with_capacity(n);
    for k in 0..n {
        let mut found = true;
        loop {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..rows {
                for j in k..cols {
                    if let Some(d) = a.get(i, j).degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                found = false;
                break;
            };
            a.swap_rows(k, pi);
            a.swap_cols(k, pj);
            let pivot = a.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..rows {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let (q, r) = a.get(i, k).div_rem(&pivot).expect("polynomial entries");
                a.row_axpy(i, k, &q);
                clean &= r.is_zero();
            }
            for j in k + 1..cols {
                if a.get(k, j).is_zero() {
                    continue;
                }
                let (q, r) = a.get(k, j).div_rem(&pivot).expect("polynomial entries");
                a.col_axpy(j, k, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole remaining block
            let offender = (k + 1..rows).find(|&i| {
                (k + 1..cols).any(|j| !a.get(i, j).is_zero() && a.get(i, j).div_exact(&pivot).is_none())
            });
            match offender {
                Some(i) => {
                    let minus_one = LaurentPoly::constant(-1, field);
                    a.row_axpy(k, i, &minus_one);
                }
                None => break,
            }
        }
        if !found {
            break;
        }
        factors.push(a.get(k, k).monic());
    }
    let rank = factors.len();
    factors.resize(n, LaurentPoly::zero(field));
    SnfResult { invariant_factors: factors, rank, field }
}
