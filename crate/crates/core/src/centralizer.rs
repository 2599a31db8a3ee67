//! The centralizer `C(B)` of `B = J_n ⊕ J_n`, modelled as `M_2(F[X]/(X^n))`,
//! and its nilpotent part `N(B)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, FieldSpec, Mat2Trunc, Poly, TruncatedPoly};
use crate::error::{Error, Result};
use crate::partition::{from_rank_profile, Partition};

/// An element of `C(B)`: the matrix `[[a(J), b(J)], [c(J), d(J)]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CentralizerElement<F: Field> {
    n: usize,
    mat: Mat2Trunc<F>,
}

/// Builds an element from coefficient sequences (lowest degree first).
pub fn make_element<F: Field>(
    field: F,
    n: usize,
    a: Vec<F::Elem>,
    b: Vec<F::Elem>,
    c: Vec<F::Elem>,
    d: Vec<F::Elem>,
) -> Result<CentralizerElement<F>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let entry = |name: char, coeffs: Vec<F::Elem>| {
        if coeffs.len() > n {
            return Err(Error::InvalidDegree { entry: name, len: coeffs.len(), n });
        }
        Ok(TruncatedPoly::new_truncating(field, n, coeffs))
    };
    let mat = Mat2Trunc::new(entry('a', a)?, entry('b', b)?, entry('c', c)?, entry('d', d)?)?;
    let element = CentralizerElement { n, mat };
    #[cfg(debug_assertions)]
    {
        let dense = element.mat.embed_dense();
        let b = CentralizerElement::b_matrix(field, n).mat.embed_dense();
        debug_assert!(dense.mul(&b) == b.mul(&dense), "element does not commute with B");
    }
    Ok(element)
}

impl<F: Field> CentralizerElement<F> {
    pub fn from_mat(mat: Mat2Trunc<F>) -> Self {
        CentralizerElement { n: mat.modulus_degree(), mat }
    }

    /// `B` itself, `diag(X, X)`.
    pub fn b_matrix(field: F, n: usize) -> Self {
        Self::from_mat(Mat2Trunc::x_pow(field, n, 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> F {
        self.mat.field()
    }

    pub fn mat(&self) -> &Mat2Trunc<F> {
        &self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Nilpotent iff the constant block `A_0` has zero trace and determinant.
    pub fn is_nilpotent(&self) -> bool {
        let f = self.field();
        let [a0, b0, c0, d0] = self.mat.block(0);
        f.is_zero(&f.add(&a0, &d0)) && f.is_zero(&f.sub(&f.mul(&a0, &d0), &f.mul(&b0, &c0)))
    }

    /// Multiplication by `B^z`.
    pub fn times_b_pow(&self, z: usize) -> Self {
        Self::from_mat(self.mat.map(|e| e.shl(z)))
    }

    /// Writes a non-zero nilpotent element as `B^z C` with `z` maximal and `C` nilpotent.
    pub fn bz_decompose(&self) -> Result<BzDecomposition<F>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("the zero element has no B^z C form".into()));
        }
        if !self.is_nilpotent() {
            return Err(Error::InvalidArgument("element is not nilpotent".into()));
        }
        let first = self
            .mat
            .entries()
            .iter()
            .filter_map(|e| e.valuation().finite())
            .min()
            .expect("non-zero element");
        let f = self.field();
        let [a, b, c, d] = self.mat.block(first);
        let block_nilpotent = f.is_zero(&f.add(&a, &d))
            && f.is_zero(&f.sub(&f.mul(&a, &d), &f.mul(&b, &c)));
        let z = if block_nilpotent { first } else { first - 1 };
        let cofactor = Self::from_mat(self.mat.map(|e| e.shr(z)));
        Ok(BzDecomposition { z, cofactor })
    }

    /// Ranks of `A^0, A^1, ...` down to the first zero, from dense embeddings.
    pub fn rank_profile(&self) -> Result<Vec<usize>> {
        self.profile_with(|m| m.embed_dense().rank())
    }

    /// Same profile, with ranks read off the local diagonalization in `M_2(S)`.
    pub fn rank_profile_local(&self) -> Result<Vec<usize>> {
        self.profile_with(|m| m.rank())
    }

    fn profile_with(&self, rank: impl Fn(&Mat2Trunc<F>) -> usize) -> Result<Vec<usize>> {
        if !self.is_nilpotent() {
            return Err(Error::InvalidArgument("Jordan type needs a nilpotent element".into()));
        }
        let mut ranks = vec![2 * self.n];
        let mut power = self.mat.clone();
        for _ in 0..=2 * self.n + 1 {
            let r = rank(&power);
            ranks.push(r);
            if r == 0 {
                return Ok(ranks);
            }
            power = power.mul(&self.mat);
        }
        Err(Error::InvalidArgument(
            "powers did not vanish by 2n+1; element is not nilpotent".into(),
        ))
    }

    /// Jordan type of the dense embedding, a partition of `2n`.
    pub fn jordan_type(&self) -> Result<Partition> {
        from_rank_profile(&self.rank_profile()?)
    }

    /// Jordan type through local ranks; agrees with [`Self::jordan_type`].
    pub fn jordan_type_local(&self) -> Result<Partition> {
        from_rank_profile(&self.rank_profile_local()?)
    }

    pub fn to_json(&self) -> ElementJson {
        let f = self.field();
        let fmt = |e: &TruncatedPoly<F>| e.coeffs().iter().map(|c| f.format_elem(c)).collect();
        ElementJson {
            n: self.n,
            field: f.spec(),
            a: fmt(self.mat.a()),
            b: fmt(self.mat.b()),
            c: fmt(self.mat.c()),
            d: fmt(self.mat.d()),
        }
    }
}

/// Result of [`CentralizerElement::bz_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BzDecomposition<F: Field> {
    pub z: usize,
    pub cofactor: CentralizerElement<F>,
}

impl<F: Field> BzDecomposition<F> {
    pub fn recompose(&self) -> CentralizerElement<F> {
        self.cofactor.times_b_pow(self.z)
    }
}

/// JSON document for an element: `{"n", "field", "a", "b", "c", "d"}` with
/// coefficient strings, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: usize,
    pub field: FieldSpec,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub d: Vec<String>,
}

impl ElementJson {
    pub fn to_element<F: Field>(&self, field: F) -> Result<CentralizerElement<F>> {
        if field.spec() != self.field {
            return Err(Error::InvalidArgument(format!(
                "document is over {}, requested {}",
                self.field,
                field.spec()
            )));
        }
        let parse = |v: &[String]| -> Result<Vec<F::Elem>> {
            v.iter().map(|s| field.parse_elem(s)).collect()
        };
        make_element(field, self.n, parse(&self.a)?, parse(&self.b)?, parse(&self.c)?, parse(&self.d)?)
    }
}

/// The sequence `s_0 = 0, s_1 = 1, s_{k+1} = d s_k + c s_{k-1}` in `F[X]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSequence<F: Field> {
    pub c: Poly<F>,
    pub d: Poly<F>,
    pub terms: Vec<Poly<F>>,
}

/// Terms `s_0, ..., s_last` of the recursion.
pub fn s_sequence<F: Field>(c: &Poly<F>, d: &Poly<F>, last: usize) -> SSequence<F> {
    let field = c.field();
    let mut terms = vec![Poly::zero(field), Poly::one(field)];
    while terms.len() <= last {
        let k = terms.len() - 1;
        let next = &(d * &terms[k]) + &(c * &terms[k - 1]);
        terms.push(next);
    }
    terms.truncate(last + 1);
    SSequence { c: c.clone(), d: d.clone(), terms }
}

impl<F: Field> SSequence<F> {
    pub fn term(&self, k: usize) -> &Poly<F> {
        &self.terms[k]
    }
}

/// Binomial coefficients `C(row, 0..=row)` computed inside the field.
pub(crate) fn binomial_row<F: Field>(field: F, row: usize) -> Vec<F::Elem> {
    let mut cur = vec![field.one()];
    for _ in 0..row {
        let mut next = vec![field.one(); cur.len() + 1];
        for i in 1..cur.len() {
            next[i] = field.add(&cur[i - 1], &cur[i]);
        }
        cur = next;
    }
    cur
}

fn binomial<F: Field>(field: F, top: usize, bottom: usize) -> F::Elem {
    if bottom > top {
        field.zero()
    } else {
        binomial_row(field, top)[bottom].clone()
    }
}

/// Binomial closed form of `s_k`:
/// `s_{2K-1} = Σ_{i=1..K} C(2K-i-1, i-1) c^{i-1} d^{2K-2i}` and
/// `s_{2K} = Σ_{i=0..K-1} C(2K-i-1, i) c^i d^{2K-2i-1}`.
pub fn s_closed_form<F: Field>(c: &Poly<F>, d: &Poly<F>, k: usize) -> Poly<F> {
    let field = c.field();
    let mut acc = Poly::zero(field);
    if k == 0 {
        return acc;
    }
    let half = k.div_ceil(2);
    if k % 2 == 1 {
        for i in 1..=half {
            let coeff = binomial(field, 2 * half - i - 1, i - 1);
            let term = &c.pow((i - 1) as u32) * &d.pow((2 * half - 2 * i) as u32);
            acc = &acc + &term.scale(&coeff);
        }
    } else {
        for i in 0..half {
            let coeff = binomial(field, 2 * half - i - 1, i);
            let term = &c.pow(i as u32) * &d.pow((2 * half - 2 * i - 1) as u32);
            acc = &acc + &term.scale(&coeff);
        }
    }
    acc
}
