use std::fmt;

use super::dense::DenseMat;
use super::field::Field;
use super::poly::TruncatedPoly;
use crate::error::{Error, Result};

/// A 2x2 matrix over `S = F[X]/(X^n)`, entries `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2Trunc<F: Field> {
    entries: [TruncatedPoly<F>; 4],
}

impl<F: Field> Mat2Trunc<F> {
    pub fn new(
        a: TruncatedPoly<F>,
        b: TruncatedPoly<F>,
        c: TruncatedPoly<F>,
        d: TruncatedPoly<F>,
    ) -> Result<Self> {
        let n = a.modulus_degree();
        let field = a.field();
        if [&b, &c, &d]
            .iter()
            .any(|e| e.modulus_degree() != n || e.field() != field)
        {
            return Err(Error::InvalidArgument(
                "matrix entries must share one field and modulus".into(),
            ));
        }
        Ok(Mat2Trunc { entries: [a, b, c, d] })
    }

    fn from_entries(entries: [TruncatedPoly<F>; 4]) -> Self {
        Mat2Trunc { entries }
    }

    pub fn zero(field: F, n: usize) -> Self {
        let z = TruncatedPoly::zero(field, n);
        Self::from_entries([z.clone(), z.clone(), z.clone(), z])
    }

    pub fn identity(field: F, n: usize) -> Self {
        Self::scalar(TruncatedPoly::one(field, n))
    }

    /// `diag(s, s)`.
    pub fn scalar(s: TruncatedPoly<F>) -> Self {
        let z = TruncatedPoly::zero(s.field(), s.modulus_degree());
        Self::from_entries([s.clone(), z.clone(), z, s])
    }

    /// `diag(X^k, X^k)`, the `k`-th power of `B`.
    pub fn x_pow(field: F, n: usize, k: usize) -> Self {
        Self::scalar(TruncatedPoly::x_pow(field, n, k))
    }

    pub fn field(&self) -> F {
        self.entries[0].field()
    }

    pub fn modulus_degree(&self) -> usize {
        self.entries[0].modulus_degree()
    }

    pub fn a(&self) -> &TruncatedPoly<F> {
        &self.entries[0]
    }

    pub fn b(&self) -> &TruncatedPoly<F> {
        &self.entries[1]
    }

    pub fn c(&self) -> &TruncatedPoly<F> {
        &self.entries[2]
    }

    pub fn d(&self) -> &TruncatedPoly<F> {
        &self.entries[3]
    }

    pub fn entries(&self) -> &[TruncatedPoly<F>; 4] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// The coefficient block `[[a_i, b_i], [c_i, d_i]]`, row-major.
    pub fn block(&self, i: usize) -> [F::Elem; 4] {
        [0, 1, 2, 3].map(|k| self.entries[k].coeff(i))
    }

    pub fn map(&self, f: impl Fn(&TruncatedPoly<F>) -> TruncatedPoly<F>) -> Self {
        Self::from_entries([0, 1, 2, 3].map(|k| f(&self.entries[k])))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_entries([0, 1, 2, 3].map(|k| &self.entries[k] + &rhs.entries[k]))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &rhs.entries;
        Self::from_entries([
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        ])
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.field(), self.modulus_degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn det(&self) -> TruncatedPoly<F> {
        let [a, b, c, d] = &self.entries;
        &(a * d) - &(b * c)
    }

    /// Inverse via the adjugate; fails unless the determinant is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self.det().inverse()?;
        let [a, b, c, d] = &self.entries;
        Ok(Self::from_entries([
            d * &inv,
            &(-b) * &inv,
            &(-c) * &inv,
            a * &inv,
        ]))
    }

    /// `[[a(J), b(J)], [c(J), d(J)]]` with `J` the `n x n` nilpotent Jordan block;
    /// `f(J)` is upper triangular Toeplitz with `f_k` on the `k`-th superdiagonal.
    pub fn embed_dense(&self) -> DenseMat<F> {
        let n = self.modulus_degree();
        let mut m = DenseMat::zeros(self.field(), 2 * n, 2 * n);
        for (k, entry) in self.entries.iter().enumerate() {
            let (r0, c0) = ((k / 2) * n, (k % 2) * n);
            for (deg, coeff) in entry.coeffs().iter().enumerate() {
                for i in 0..n - deg {
                    m.set(r0 + i, c0 + i + deg, coeff.clone());
                }
            }
        }
        m
    }

    /// Rank of the dense embedding, computed by diagonalizing over the local
    /// ring `S`: a pivot of minimal valuation `e1` clears its row and column,
    /// leaving `diag(X^e1 u, X^e2 v)` with rank `(n - e1) + (n - e2)`.
    pub fn rank(&self) -> usize {
        let n = self.modulus_degree();
        let (pivot, v1) = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.valuation()))
            .min_by_key(|&(i, v)| (v, i))
            .expect("four entries");
        let Some(e1) = v1.finite() else {
            return 0;
        };
        // pivot, same row, same column, opposite corner
        let [p, r, s, t] = match pivot {
            0 => [0, 1, 2, 3],
            1 => [1, 0, 3, 2],
            2 => [2, 3, 0, 1],
            _ => [3, 2, 1, 0],
        }
        .map(|k| &self.entries[k]);
        let m = n - e1;
        let unit = p.shr(e1).with_modulus(m);
        let row = r.shr(e1).with_modulus(m);
        let col = s.shr(e1).with_modulus(m);
        let unit_inv = unit.inverse().expect("minimal valuation entry is a unit times X^e1");
        let correction = (&(&col * &row) * &unit_inv).with_modulus(n).shl(e1);
        let rest = t - &correction;
        (n - e1) + (n - rest.valuation().capped(n))
    }
}

impl<F: Field> fmt::Debug for Mat2Trunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a:?}, {b:?}], [{c:?}, {d:?}]]")
    }
}
