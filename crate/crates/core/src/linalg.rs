//! Exact rational linear algebra: sparse echelon reduction, kernel bases,
//! and a dense solver for the small saddle-point systems of the
//! minimal-norm antiderivative solves.
//!
//! Rank decisions are made in exact arithmetic only; no floating point
//! enters these routines.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A sparse row: strictly increasing column indices with nonzero entries.
#[derive(Clone, Debug, Default)]
pub struct SparseRow {
    pub entries: Vec<(usize, BigRational)>,
}

impl SparseRow {
    pub fn from_entries(mut entries: Vec<(usize, BigRational)>) -> Self {
        entries.sort_by_key(|(c, _)| *c);
        entries.retain(|(_, v)| !v.is_zero());
        SparseRow { entries }
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// self - factor * other, merged in column order.
    fn axpy(&self, factor: &BigRational, other: &SparseRow) -> SparseRow {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            match (self.entries.get(i), other.entries.get(j)) {
                (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                    let v = va - &(factor * vb);
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ca, va)), Some((cb, _))) if ca < cb => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                (Some(_), Some((cb, vb))) => {
                    let v = -(factor * vb);
                    if !v.is_zero() {
                        out.push((*cb, v));
                    }
                    j += 1;
                }
                (Some((ca, va)), None) => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                (None, Some((cb, vb))) => {
                    let v = -(factor * vb);
                    if !v.is_zero() {
                        out.push((*cb, v));
                    }
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseRow { entries: out }
    }
}

/// Row echelon form of a sparse rational matrix.
pub struct Echelon {
    /// Pivot rows, sorted by strictly increasing leading column.
    pub rows: Vec<SparseRow>,
    pub ncols: usize,
}

/// Reduce `rows` to echelon form. Pivots are chosen in column order, which
/// for matrices whose columns are graded-lex-ordered monomials makes the
/// reduction deterministic.
pub fn echelon(rows: Vec<SparseRow>, ncols: usize) -> Echelon {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut pivots: Vec<SparseRow> = Vec::new();
    for row in rows {
        let mut row = row;
        while let Some(lead) = row.leading() {
            match pivot_of_col[lead] {
                Some(pi) => {
                    let pivot = &pivots[pi];
                    let factor = &row.entries[0].1 / &pivot.entries[0].1;
                    row = row.axpy(&factor, pivot);
                }
                None => {
                    pivot_of_col[lead] = Some(pivots.len());
                    pivots.push(row);
                    break;
                }
            }
        }
    }
    pivots.sort_by_key(|r| r.leading().unwrap());
    Echelon { rows: pivots, ncols }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap()).collect()
    }

    /// Exact kernel basis, one vector per free column, in column order.
    /// Each vector has entry 1 at its free column and 0 at every other
    /// free column.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let pivot_cols = self.pivot_cols();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free_cols: Vec<usize> =
            (0..self.ncols).filter(|c| !is_pivot[*c]).collect();

        let mut basis = Vec::with_capacity(free_cols.len());
        for &cf in &free_cols {
            let mut v = vec![BigRational::zero(); self.ncols];
            v[cf] = BigRational::from_integer(1.into());
            // Back-substitute pivots in decreasing leading-column order;
            // every non-pivot entry of a row sits to the right of its pivot.
            for row in self.rows.iter().rev() {
                let p = row.leading().unwrap();
                let mut acc = BigRational::zero();
                for (c, a) in row.entries.iter().skip(1) {
                    if !v[*c].is_zero() {
                        acc += a * &v[*c];
                    }
                }
                if !acc.is_zero() {
                    v[p] = -acc / &row.entries[0].1;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Solve M x = b exactly for a dense square-or-rectangular system that is
/// known to be consistent. Free variables are set to zero. Returns an error
/// if the system is inconsistent.
pub fn solve_consistent(
    m: &[Vec<BigRational>],
    b: &[BigRational],
) -> Result<Vec<BigRational>> {
    let nrows = m.len();
    assert_eq!(nrows, b.len());
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(p) = (next_row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(next_row, p);
        let inv = a[next_row][col].recip();
        for c in col..=ncols {
            let v = &a[next_row][c] * &inv;
            a[next_row][c] = v;
        }
        for r in 0..nrows {
            if r != next_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=ncols {
                    let v = &a[r][c] - &(&f * &a[next_row][c]);
                    a[r][c] = v;
                }
            }
        }
        pivot_rows.push((next_row, col));
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    for r in next_row..nrows {
        if !a[r][ncols].is_zero() {
            return Err(Error::Inconsistent(format!(
                "row {r} reduces to 0 = nonzero"
            )));
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, c) in pivot_rows {
        x[c] = a[r][ncols].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big_ratio;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        SparseRow::from_entries(
            entries.iter().map(|&(c, v)| (c, big_ratio(v, 1))).collect(),
        )
    }

    #[test]
    fn rank_of_simple_matrix() {
        // [1 2 3; 2 4 6; 0 1 1] has rank 2.
        let e = echelon(
            vec![row(&[(0, 1), (1, 2), (2, 3)]), row(&[(0, 2), (1, 4), (2, 6)]), row(&[(1, 1), (2, 1)])],
            3,
        );
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let rows = vec![row(&[(0, 1), (1, 2), (2, 3)]), row(&[(1, 1), (2, 1)])];
        let e = echelon(rows.clone(), 3);
        let kernel = e.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for v in &kernel {
            for r in &rows {
                let dot: BigRational =
                    r.entries.iter().map(|(c, a)| a * &v[*c]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_square_system() {
        let m = vec![
            vec![big_ratio(2, 1), big_ratio(1, 1)],
            vec![big_ratio(1, 1), big_ratio(3, 1)],
        ];
        let b = vec![big_ratio(5, 1), big_ratio(10, 1)];
        let x = solve_consistent(&m, &b).unwrap();
        assert_eq!(x[0], big_ratio(1, 1));
        assert_eq!(x[1], big_ratio(3, 1));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = vec![vec![big_ratio(1, 1)], vec![big_ratio(1, 1)]];
        let b = vec![big_ratio(1, 1), big_ratio(2, 1)];
        assert!(solve_consistent(&m, &b).is_err());
    }
}
