//! Explicit elements of `N(B)` realizing each enumerated Jordan type, the
//! sequence `h_k(u)` deciding the field dependent rows P8/P9, and the closed
//! rank formulas for powers of the normal form `[[0, X^z], [X^{z+l}p, X^{z+m}q]]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Mat2Trunc, Poly, TruncatedPoly};
use crate::centralizer::{s_sequence, CentralizerElement, ElementJson};
use crate::enumerator::{CaseId, CaseParams, OrbitClass};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Default cap on candidate recipes tried by the fallback search.
pub const DEFAULT_BUDGET: usize = 10_000;

/// How many small rationals feed the fallback search (`1, -1, 2, -2, 3, -3`).
const RATIONAL_SEARCH_WIDTH: usize = 6;

/// `h_0 = 0`, `h_1 = 1`, `h_k = h_{k-1} + u h_{k-2}`, evaluated at `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSequence<F: Field> {
    pub u: F::Elem,
    pub terms: Vec<F::Elem>,
}

pub fn h_sequence<F: Field>(field: F, u: &F::Elem, last: usize) -> HSequence<F> {
    let mut terms = vec![field.zero(), field.one()];
    while terms.len() <= last {
        let k = terms.len();
        terms.push(field.add(&terms[k - 1], &field.mul(u, &terms[k - 2])));
    }
    terms.truncate(last + 1);
    HSequence { u: u.clone(), terms }
}

/// Derivatives `h'_k(u)`: `h'_k = h'_{k-1} + h_{k-2} + u h'_{k-2}`.
pub fn h_derivative_sequence<F: Field>(field: F, u: &F::Elem, last: usize) -> Vec<F::Elem> {
    let h = h_sequence(field, u, last.max(1)).terms;
    let mut d = vec![field.zero(), field.zero()];
    while d.len() <= last {
        let k = d.len();
        let next = field.add(&field.add(&d[k - 1], &h[k - 2]), &field.mul(u, &d[k - 2]));
        d.push(next);
    }
    d.truncate(last + 1);
    d
}

/// `h_k` as a polynomial in `u`: the `s_k` sequence with `c = u`, `d = 1`.
pub fn h_polynomial<F: Field>(field: F, k: usize) -> Poly<F> {
    s_sequence(&Poly::x_pow(field, 1), &Poly::one(field), k).terms[k].clone()
}

/// Binomial sums `h_{2K-1} = Σ C(2K-i-1, i-1) u^{i-1}`, `h_{2K} = Σ C(2K-i-1, i) u^i`.
pub fn h_closed_form<F: Field>(field: F, u: &F::Elem, k: usize) -> F::Elem {
    let u_poly = Poly::constant(field, u.clone());
    crate::centralizer::s_closed_form(&u_poly, &Poly::one(field), k).coeff(0)
}

/// Every non-zero `u` with `h_j(u) = 0`, `h'_j(u) != 0` and `h_k(u) != 0`
/// for the other `1 <= k <= alpha - 1`.
///
/// Candidates are the roots of `h_j` in the field: all of `F_p` is scanned,
/// over `Q` the rational root test is exact since `h_j` has integer
/// coefficients and constant term 1.
pub fn special_u_candidates<F: Field>(j: usize, alpha: usize, field: F) -> Result<Vec<F::Elem>> {
    if j < 3 {
        return Err(Error::InvalidArgument(format!("special u needs j >= 3, got {j}")));
    }
    if alpha < j + 1 {
        return Err(Error::InvalidArgument(format!(
            "special u needs j <= alpha - 1, got j={j}, alpha={alpha}"
        )));
    }
    let hj = h_polynomial(field, j);
    let roots = field.roots(hj.coeffs());
    Ok(roots
        .into_iter()
        .filter(|u| !field.is_zero(u))
        .filter(|u| {
            let h = h_sequence(field, u, alpha - 1).terms;
            let dh = h_derivative_sequence(field, u, j);
            field.is_zero(&h[j])
                && !field.is_zero(&dh[j])
                && (1..alpha).filter(|&k| k != j).all(|k| !field.is_zero(&h[k]))
        })
        .collect())
}

pub fn find_special_u<F: Field>(j: usize, alpha: usize, field: F) -> Result<Option<F::Elem>> {
    Ok(special_u_candidates(j, alpha, field)?.into_iter().next())
}

/// `u_j = -1 / (4 cos^2(pi / j))`.
pub fn special_u_complex(j: usize) -> Result<Complex64> {
    if j < 3 {
        return Err(Error::InvalidArgument(format!("special u needs j >= 3, got {j}")));
    }
    let c = (std::f64::consts::PI / j as f64).cos();
    Ok(Complex64::new(-1.0 / (4.0 * c * c), 0.0))
}

/// `(h_k(u), h'_k(u))` in floating point.
pub fn h_complex(u: Complex64, k: usize) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut h0, mut h1) = (zero, Complex64::new(1.0, 0.0));
    let (mut d0, mut d1) = (zero, zero);
    if k == 0 {
        return (h0, d0);
    }
    for _ in 1..k {
        let h2 = h1 + u * h0;
        let d2 = d1 + h0 + u * d0;
        (h0, h1, d0, d1) = (h1, h2, d1, d2);
    }
    (h1, d1)
}

/// Floating point check of the three conditions on `u_j`.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexDemo {
    pub j: usize,
    pub alpha: usize,
    pub u: [f64; 2],
    pub h_j_abs: f64,
    pub h_j_prime_abs: f64,
    /// Smallest `|h_k(u)|` over `1 <= k <= alpha - 1`, `k != j`.
    pub min_other_abs: Option<f64>,
}

pub fn complex_demo(j: usize, alpha: usize) -> Result<ComplexDemo> {
    let u = special_u_complex(j)?;
    let (hj, dj) = h_complex(u, j);
    let min_other_abs = (1..alpha)
        .filter(|&k| k != j)
        .map(|k| h_complex(u, k).0.norm())
        .min_by(f64::total_cmp);
    Ok(ComplexDemo {
        j,
        alpha,
        u: [u.re, u.im],
        h_j_abs: hj.norm(),
        h_j_prime_abs: dj.norm(),
        min_other_abs,
    })
}

/// Shapes of witness matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessRecipe<F: Field> {
    /// `[[0, X^z], [X^{z+l} p, X^{z+m} q]]`.
    Case1 { z: usize, l: usize, m: usize, p: Poly<F>, q: Poly<F> },
    /// `[[0, X^z], [0, X^{z+m} q]]`.
    Case1Degenerate { z: usize, m: usize, q: Poly<F> },
    /// `[[X^{z+1}, 0], [0, X^{z+m}]]`.
    Diagonal { z: usize, m: usize },
    /// `X^{z+1} I`.
    Case21 { z: usize },
}

/// JSON form of a recipe, tagged by `shape`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape")]
pub enum RecipeJson {
    Case1 { z: usize, l: usize, m: usize, p: Vec<String>, q: Vec<String> },
    Case1Degenerate { z: usize, m: usize, q: Vec<String> },
    Diagonal { z: usize, m: usize },
    Case21 { z: usize },
}

impl<F: Field> WitnessRecipe<F> {
    pub fn instantiate(&self, field: F, n: usize) -> Result<CentralizerElement<F>> {
        let z = match self {
            WitnessRecipe::Case1 { z, .. }
            | WitnessRecipe::Case1Degenerate { z, .. }
            | WitnessRecipe::Diagonal { z, .. }
            | WitnessRecipe::Case21 { z } => *z,
        };
        if n == 0 || z >= n {
            return Err(Error::InvalidArgument(format!("recipe needs z < n, got z={z}, n={n}")));
        }
        let x = |k: usize| TruncatedPoly::x_pow(field, n, k);
        let shifted = |k: usize, f: &Poly<F>| f.truncate(n).shl(k);
        let zero = TruncatedPoly::zero(field, n);
        let mat = match self {
            WitnessRecipe::Case1 { z, l, m, p, q } => {
                Mat2Trunc::new(zero, x(*z), shifted(z + l, p), shifted(z + m, q))?
            }
            WitnessRecipe::Case1Degenerate { z, m, q } => {
                Mat2Trunc::new(zero.clone(), x(*z), zero, shifted(z + m, q))?
            }
            WitnessRecipe::Diagonal { z, m } => {
                Mat2Trunc::new(x(z + 1), zero.clone(), zero, x(z + m))?
            }
            WitnessRecipe::Case21 { z } => Mat2Trunc::x_pow(field, n, z + 1),
        };
        Ok(CentralizerElement::from_mat(mat))
    }

    pub fn to_json(&self) -> RecipeJson {
        let fmt = |p: &Poly<F>| {
            let f = p.field();
            p.coeffs().iter().map(|c| f.format_elem(c)).collect()
        };
        match self {
            WitnessRecipe::Case1 { z, l, m, p, q } => {
                RecipeJson::Case1 { z: *z, l: *l, m: *m, p: fmt(p), q: fmt(q) }
            }
            WitnessRecipe::Case1Degenerate { z, m, q } => {
                RecipeJson::Case1Degenerate { z: *z, m: *m, q: fmt(q) }
            }
            WitnessRecipe::Diagonal { z, m } => RecipeJson::Diagonal { z: *z, m: *m },
            WitnessRecipe::Case21 { z } => RecipeJson::Case21 { z: *z },
        }
    }

    fn describe(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("recipe json")
    }
}

/// A verified witness.
#[derive(Clone, Debug)]
pub struct Witness<F: Field> {
    pub element: CentralizerElement<F>,
    pub recipe: WitnessRecipe<F>,
    pub partition: Partition,
    /// The row tuple the recipe came from; `None` for the fallback search.
    pub case: Option<CaseParams>,
}

/// Witness document: the element fields plus recipe and verification data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(flatten)]
    pub element: ElementJson,
    pub recipe: RecipeJson,
    pub verified: bool,
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseParams>,
}

impl<F: Field> Witness<F> {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            element: self.element.to_json(),
            recipe: self.recipe.to_json(),
            verified: true,
            partition: self.partition.clone(),
            case: self.case.clone(),
        }
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Recipes suggested by one row tuple, best first.
fn primary_recipes<F: Field>(field: F, n: usize, c: &CaseParams) -> Result<Vec<WitnessRecipe<F>>> {
    let one = Poly::one(field);
    let case1 = |z: usize, l: usize, m: usize| WitnessRecipe::Case1 {
        z,
        l,
        m,
        p: one.clone(),
        q: one.clone(),
    };
    let need = |v: Option<usize>| {
        v.ok_or_else(|| Error::InvalidArgument(format!("parameters of {c} are incomplete")))
    };
    let out = match c.id {
        CaseId::P1 => {
            let s = need(c.s)?;
            if s % 2 == 0 {
                vec![WitnessRecipe::Case21 { z: s / 2 - 1 }]
            } else if s + 1 == 2 * n {
                vec![WitnessRecipe::Case1Degenerate { z: n - 1, m: 1, q: one }]
            } else {
                vec![case1(s / 2, 1, 1)]
            }
        }
        CaseId::P2 | CaseId::P3 | CaseId::P4 | CaseId::P6 | CaseId::P7 => {
            let (z, m, l) = (need(c.z)?, need(c.m)?, need(c.l)?);
            if l == n - z {
                vec![WitnessRecipe::Case1Degenerate { z, m, q: one }]
            } else {
                vec![case1(z, l, m)]
            }
        }
        CaseId::P5 => vec![WitnessRecipe::Diagonal { z: need(c.z)?, m: need(c.m)? }],
        CaseId::P8 | CaseId::P9 => {
            let (z, m, t) = (need(c.z)?, need(c.m)?, need(c.t)?);
            let alpha = ceil_div(n + m, m + z);
            let js = if c.id == CaseId::P8 {
                [alpha.checked_sub(2), alpha.checked_sub(1)]
            } else {
                [alpha.checked_sub(1), alpha.checked_sub(2)]
            };
            let mut out = Vec::new();
            for j in js.into_iter().flatten().filter(|&j| j >= 3) {
                for u in special_u_candidates(j, alpha, field)? {
                    let p = &Poly::x_pow(field, t) + &Poly::constant(field, u);
                    out.push(WitnessRecipe::Case1 { z, l: 2 * m, m, p, q: one.clone() });
                }
            }
            out
        }
    };
    Ok(out)
}

/// Small polynomials with non-zero constant term: constants first, then
/// degree one, in the field's element order.
fn search_polys<F: Field>(field: F) -> Vec<Poly<F>> {
    let width = if field.characteristic() == 0 {
        RATIONAL_SEARCH_WIDTH
    } else {
        usize::MAX
    };
    let nonzero: Vec<F::Elem> = field.nonzero_elements().take(width).collect();
    let mut out: Vec<Poly<F>> = nonzero.iter().map(|c| Poly::constant(field, c.clone())).collect();
    for c0 in &nonzero {
        for c1 in &nonzero {
            out.push(Poly::new(field, vec![c0.clone(), c1.clone()]));
        }
    }
    out
}

/// Case 1 shapes `(z, l, m)` whose `p, q` may be varied for a row tuple.
fn search_shape(n: usize, c: &CaseParams) -> Option<(usize, usize, usize)> {
    match c.id {
        CaseId::P1 => {
            let s = c.s?;
            (s % 2 == 1 && s + 1 < 2 * n).then_some((s / 2, 1, 1))
        }
        CaseId::P2 | CaseId::P3 | CaseId::P4 | CaseId::P6 | CaseId::P7 => {
            let (z, m, l) = (c.z?, c.m?, c.l?);
            (l < n - z).then_some((z, l, m))
        }
        _ => None,
    }
}

fn realizes<F: Field>(e: &CentralizerElement<F>, target: &Partition) -> Result<bool> {
    if !e.is_nilpotent() || &e.jordan_type_local()? != target {
        return Ok(false);
    }
    Ok(&e.jordan_type()? == target)
}

/// Builds a verified witness for `target` over `field`.
///
/// Row recipes are tried in provenance order. For rows P1 to P7 a fallback
/// then varies `p, q` over [`search_polys`] within `budget` candidates. Rows
/// P8/P9 only use `p = X^t + u` with `u` a special value, so a failure there
/// means that recipe family has no member over this field.
pub fn build_with_budget<F: Field>(
    n: usize,
    target: &OrbitClass,
    field: F,
    budget: usize,
) -> Result<Witness<F>> {
    if !field.spec().is_exact() {
        return Err(Error::UnsupportedField(field.spec().to_string()));
    }
    if target.partition.sum() != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "{} is not a partition of {}",
            target.partition,
            2 * n
        )));
    }
    let mut attempted = Vec::new();
    for case in &target.provenance {
        for recipe in primary_recipes(field, n, case)? {
            let element = recipe.instantiate(field, n)?;
            if realizes(&element, &target.partition)? {
                return Ok(Witness {
                    element,
                    recipe,
                    partition: target.partition.clone(),
                    case: Some(case.clone()),
                });
            }
            attempted.push(recipe.describe());
        }
    }
    let polys = search_polys(field);
    let mut tried = 0usize;
    for case in &target.provenance {
        let Some((z, l, m)) = search_shape(n, case) else {
            continue;
        };
        for p in &polys {
            for q in &polys {
                if tried >= budget {
                    return Err(not_found(target, attempted, tried));
                }
                tried += 1;
                let recipe = WitnessRecipe::Case1 { z, l, m, p: p.clone(), q: q.clone() };
                let element = recipe.instantiate(field, n)?;
                if realizes(&element, &target.partition)? {
                    return Ok(Witness {
                        element,
                        recipe,
                        partition: target.partition.clone(),
                        case: Some(case.clone()),
                    });
                }
            }
        }
    }
    Err(not_found(target, attempted, tried))
}

fn not_found(target: &OrbitClass, mut attempted: Vec<String>, searched: usize) -> Error {
    if searched > 0 {
        attempted.push(format!("{searched} fallback candidates"));
    }
    Error::WitnessNotFound { partition: target.partition.clone(), attempted }
}

pub fn build<F: Field>(n: usize, target: &OrbitClass, field: F) -> Result<Witness<F>> {
    build_with_budget(n, target, field, DEFAULT_BUDGET)
}

/// Rank of `A^{2k'-1}` for `A = [[0, X^z], [X^{z+l}p, X^{z+m}q]]`, `l < 2m`.
pub fn case11_odd_rank(n: usize, z: usize, l: usize, k: usize) -> usize {
    assert!(k >= 1);
    let w = l + 2 * z;
    if k * w <= n + z {
        2 * n - (2 * k - 1) * w
    } else if k * w <= n + l + z {
        n + l - (2 * k - 1) * z - k * l
    } else {
        0
    }
}

/// Rank of `A^{2k'}` in the same setting with `m <= l < 2m`.
pub fn case11_even_rank(n: usize, z: usize, l: usize, m: usize, k: usize) -> usize {
    let w = l + 2 * z;
    if k * w + l <= n + m {
        2 * n - 2 * k * w
    } else if k * w + m <= n + l {
        n + l - m - k * w
    } else {
        0
    }
}

/// Rank of `A^k` for `2m <= l < n - z` when no `r_k` with `γ <= k < α` is divisible by `X`.
pub fn case12a_rank(n: usize, z: usize, l: usize, m: usize, k: usize) -> usize {
    let alpha = ceil_div(n + m, z + m);
    let gamma = ceil_div(n - m, z + l - m);
    if k < gamma {
        2 * n - k * (l + 2 * z)
    } else if k < alpha {
        n + m - k * (m + z)
    } else {
        0
    }
}

/// The normalized `r_k` of the `l >= 2m` analysis has a non-zero constant term
/// for every `γ <= k < α`.
pub fn case12a_applies<F: Field>(field: F, n: usize, z: usize, l: usize, m: usize, p: &Poly<F>, q: &Poly<F>) -> bool {
    let alpha = ceil_div(n + m, z + m);
    let gamma = ceil_div(n - m, z + l - m);
    let c = &Poly::x_pow(field, l) * p;
    let d = &Poly::x_pow(field, m) * q;
    let s = s_sequence(&c, &d, alpha.max(1));
    (gamma..alpha).all(|k| s.term(k).valuation().finite() == Some(k * m - m))
}

/// `r_{2k'}` of the `l < 2m` analysis has a non-zero constant term.
pub fn case11_even_applies<F: Field>(field: F, l: usize, m: usize, p: &Poly<F>, q: &Poly<F>, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let c = &Poly::x_pow(field, l) * p;
    let d = &Poly::x_pow(field, m) * q;
    let s = s_sequence(&c, &d, 2 * k);
    s.term(2 * k).valuation().finite() == Some(k * l - l + m)
}
