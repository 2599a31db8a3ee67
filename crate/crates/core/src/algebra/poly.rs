use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use crate::error::{Error, Result};

/// X-adic valuation; `Infinite` for the zero polynomial and orders above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// The valuation capped at `n`, as seen inside `F[X]/(X^n)`.
    pub fn capped(self, n: usize) -> usize {
        self.finite().map_or(n, |v| v.min(n))
    }
}

fn strip<F: Field>(field: &F, coeffs: &mut Vec<F::Elem>) {
    while coeffs.last().is_some_and(|c| field.is_zero(c)) {
        coeffs.pop();
    }
}

fn valuation_of<F: Field>(field: &F, coeffs: &[F::Elem]) -> Valuation {
    coeffs
        .iter()
        .position(|c| !field.is_zero(c))
        .map_or(Valuation::Infinite, Valuation::Finite)
}

/// Product of coefficient sequences, keeping only terms of degree `< limit`.
fn convolve<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem], limit: usize) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() || limit == 0 {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(limit);
    let mut out = vec![field.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    out
}

fn zip_with<F: Field>(
    a: &[F::Elem],
    b: &[F::Elem],
    zero: &F::Elem,
    op: impl Fn(&F::Elem, &F::Elem) -> F::Elem,
) -> Vec<F::Elem> {
    (0..a.len().max(b.len()))
        .map(|i| op(a.get(i).unwrap_or(zero), b.get(i).unwrap_or(zero)))
        .collect()
}

/// A polynomial in `F[X]` (no truncation), coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        strip(&field, &mut coeffs);
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: F, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: F) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        Poly::constant(field, field.one())
    }

    pub fn monomial(field: F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    pub fn x_pow(field: F, k: usize) -> Self {
        Poly::monomial(field, field.one(), k)
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn valuation(&self) -> Valuation {
        valuation_of(&self.field, &self.coeffs)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(self.field), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let f = self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    /// Reduction into `F[X]/(X^n)`.
    pub fn truncate(&self, n: usize) -> TruncatedPoly<F> {
        TruncatedPoly::new_truncating(self.field, n, self.coeffs.clone())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let f = self.field;
        Poly::new(f, zip_with::<F>(&self.coeffs, &rhs.coeffs, &f.zero(), |a, b| f.add(a, b)))
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let f = self.field;
        Poly::new(f, zip_with::<F>(&self.coeffs, &rhs.coeffs, &f.zero(), |a, b| f.sub(a, b)))
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        Poly::new(self.field, convolve(&self.field, &self.coeffs, &rhs.coeffs, usize::MAX))
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }
}

/// An element of `S = F[X]/(X^n)`: at most `n` coefficients, trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPoly<F: Field> {
    field: F,
    n: usize,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> TruncatedPoly<F> {
    /// Exact constructor; rejects more than `n` coefficients.
    pub fn new(field: F, n: usize, coeffs: Vec<F::Elem>) -> Result<Self> {
        if coeffs.len() > n {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients do not fit in F[X]/(X^{n})",
                coeffs.len()
            )));
        }
        Ok(Self::new_truncating(field, n, coeffs))
    }

    /// Drops every coefficient of degree `>= n`.
    pub fn new_truncating(field: F, n: usize, mut coeffs: Vec<F::Elem>) -> Self {
        coeffs.truncate(n);
        strip(&field, &mut coeffs);
        TruncatedPoly { field, n, coeffs }
    }

    pub fn from_i64s(field: F, n: usize, coeffs: &[i64]) -> Self {
        Self::new_truncating(field, n, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: F, n: usize) -> Self {
        TruncatedPoly { field, n, coeffs: Vec::new() }
    }

    pub fn constant(field: F, n: usize, c: F::Elem) -> Self {
        Self::new_truncating(field, n, vec![c])
    }

    pub fn one(field: F, n: usize) -> Self {
        Self::constant(field, n, field.one())
    }

    /// `X^k`, which is zero once `k >= n`.
    pub fn x_pow(field: F, n: usize, k: usize) -> Self {
        Poly::x_pow(field, k).truncate(n)
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn modulus_degree(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        !self.field.is_zero(&self.constant_term())
    }

    pub fn valuation(&self) -> Valuation {
        valuation_of(&self.field, &self.coeffs)
    }

    pub fn to_poly(&self) -> Poly<F> {
        Poly::new(self.field, self.coeffs.clone())
    }

    /// The same coefficients viewed modulo `X^m`.
    pub fn with_modulus(&self, m: usize) -> Self {
        Self::new_truncating(self.field, m, self.coeffs.clone())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        Self::new_truncating(f, self.n, self.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    /// Multiplication by `X^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new_truncating(self.field, self.n, coeffs)
    }

    /// Drops the `k` lowest coefficients and shifts the rest down (division by
    /// `X^k` when `X^k` divides the element).
    pub fn shr(&self, k: usize) -> Self {
        let coeffs = self.coeffs.iter().skip(k).cloned().collect();
        Self::new_truncating(self.field, self.n, coeffs)
    }

    /// Inverse in `S`, by solving `f * g = 1` one degree at a time.
    pub fn inverse(&self) -> Result<Self> {
        let f = self.field;
        let c0_inv = f.inv(&self.constant_term()).ok_or(Error::NotInvertible)?;
        let mut g: Vec<F::Elem> = Vec::with_capacity(self.n);
        for k in 0..self.n {
            if k == 0 {
                g.push(c0_inv.clone());
                continue;
            }
            // g_k = -c0^{-1} * sum_{i=1..k} f_i g_{k-i}
            let mut acc = f.zero();
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = f.add(&acc, &f.mul(&self.coeffs[i], &g[k - i]));
            }
            g.push(f.neg(&f.mul(&c0_inv, &acc)));
        }
        Ok(Self::new_truncating(f, self.n, g))
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.n, other.n, "truncated polynomials over different moduli");
        assert_eq!(self.field, other.field, "truncated polynomials over different fields");
    }
}

impl<F: Field> fmt::Debug for TruncatedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trunc<{}>{:?}", self.n, self.coeffs)
    }
}

impl<F: Field> Add for &TruncatedPoly<F> {
    type Output = TruncatedPoly<F>;
    fn add(self, rhs: &TruncatedPoly<F>) -> TruncatedPoly<F> {
        self.check_compatible(rhs);
        let f = self.field;
        let coeffs = zip_with::<F>(&self.coeffs, &rhs.coeffs, &f.zero(), |a, b| f.add(a, b));
        TruncatedPoly::new_truncating(f, self.n, coeffs)
    }
}

impl<F: Field> Sub for &TruncatedPoly<F> {
    type Output = TruncatedPoly<F>;
    fn sub(self, rhs: &TruncatedPoly<F>) -> TruncatedPoly<F> {
        self.check_compatible(rhs);
        let f = self.field;
        let coeffs = zip_with::<F>(&self.coeffs, &rhs.coeffs, &f.zero(), |a, b| f.sub(a, b));
        TruncatedPoly::new_truncating(f, self.n, coeffs)
    }
}

impl<F: Field> Mul for &TruncatedPoly<F> {
    type Output = TruncatedPoly<F>;
    fn mul(self, rhs: &TruncatedPoly<F>) -> TruncatedPoly<F> {
        self.check_compatible(rhs);
        let coeffs = convolve(&self.field, &self.coeffs, &rhs.coeffs, self.n);
        TruncatedPoly::new_truncating(self.field, self.n, coeffs)
    }
}

impl<F: Field> Neg for &TruncatedPoly<F> {
    type Output = TruncatedPoly<F>;
    fn neg(self) -> TruncatedPoly<F> {
        let f = self.field;
        TruncatedPoly::new_truncating(f, self.n, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }
}
