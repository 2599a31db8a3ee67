use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{clear_denominators, Field, Rationals};

/// Order in which elimination visits columns and picks pivot rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotOrder {
    /// Columns left to right, first usable row.
    #[default]
    Forward,
    /// Columns right to left, last usable row.
    Reverse,
}

/// A dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> DenseMat<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        DenseMat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: F, dim: usize) -> Self {
        let mut m = Self::zeros(field, dim, dim);
        for i in 0..dim {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMat { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "dimension mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f.add(a, b)).collect();
        DenseMat { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        self.field.rank_with(self, PivotOrder::Forward)
    }

    pub fn rank_with(&self, order: PivotOrder) -> usize {
        self.field.rank_with(self, order)
    }

    fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl<F: Field> fmt::Debug for DenseMat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

fn column_order(cols: usize, order: PivotOrder) -> Vec<usize> {
    match order {
        PivotOrder::Forward => (0..cols).collect(),
        PivotOrder::Reverse => (0..cols).rev().collect(),
    }
}

fn find_pivot(rows: usize, start: usize, order: PivotOrder, usable: impl Fn(usize) -> bool) -> Option<usize> {
    match order {
        PivotOrder::Forward => (start..rows).find(|&i| usable(i)),
        PivotOrder::Reverse => (start..rows).rev().find(|&i| usable(i)),
    }
}

/// Row echelon rank with field inverses; used for prime fields.
pub(crate) fn gaussian_rank<F: Field>(m: &DenseMat<F>, order: PivotOrder) -> usize {
    let f = m.field;
    let mut a = m.to_rows();
    let mut rank = 0;
    for col in column_order(m.cols, order) {
        let Some(piv) = find_pivot(m.rows, rank, order, |i| !f.is_zero(&a[i][col])) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = f.inv(&a[rank][col]).expect("non-zero pivot");
        for i in rank + 1..m.rows {
            if f.is_zero(&a[i][col]) {
                continue;
            }
            let factor = f.mul(&a[i][col], &inv);
            for j in 0..m.cols {
                let v = f.sub(&a[i][j], &f.mul(&factor, &a[rank][j]));
                a[i][j] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) rank over the rationals: rows are scaled to
/// integers, then eliminated with exact divisions by the previous pivot.
pub(crate) fn bareiss_rank(m: &DenseMat<Rationals>, order: PivotOrder) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.to_rows().iter().map(|r| clear_denominators(r)).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in column_order(m.cols, order) {
        let Some(piv) = find_pivot(m.rows, rank, order, |i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in 0..m.cols {
                let v = (&p * &row[j] - &factor * &pivot_row[j]) / &prev;
                row[j] = v;
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}
