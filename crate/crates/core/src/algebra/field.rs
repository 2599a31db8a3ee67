use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dense::{DenseMat, PivotOrder};
use crate::error::{Error, Result};

/// Which coefficient field a computation runs over.
///
/// `ComplexFloat64` only exists for the floating point demonstration of the
/// special `u_j` values; every exact path rejects it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
    ComplexFloat64,
}

impl FieldSpec {
    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldSpec::ComplexFloat64)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
            FieldSpec::ComplexFloat64 => f.write_str("C64"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(FieldSpec::Rationals),
            "C64" => Ok(FieldSpec::ComplexFloat64),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| {
                        Error::Parse(format!("field must be Q, Fp:<prime> or C64, got `{other}`"))
                    })?;
                PrimeField::new(p)?;
                Ok(FieldSpec::PrimeField(p))
            }
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field, used as a cheap context object; elements are plain values.
pub trait Field: Copy + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Serialized form used in JSON documents.
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    /// Non-zero elements in a fixed order. Finite for prime fields; for the
    /// rationals the small integers `1, -1, 2, -2, ...`.
    fn nonzero_elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_>;

    /// Roots in the field of the polynomial with coefficients `coeffs`
    /// (lowest degree first), sorted in a fixed order.
    fn roots(&self, coeffs: &[Self::Elem]) -> Vec<Self::Elem>;

    fn rank_with(&self, m: &DenseMat<Self>, order: PivotOrder) -> usize {
        super::dense::gaussian_rank(m, order)
    }
}

/// The prime field `F_p` with residues stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a machine word prime"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<u64> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue `{s}` for F_{}", self.p)))?;
        Ok(self.from_i64(v))
    }

    fn nonzero_elements(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        Box::new(1..self.p)
    }

    fn roots(&self, coeffs: &[u64]) -> Vec<u64> {
        (0..self.p)
            .filter(|u| {
                let v = coeffs
                    .iter()
                    .rev()
                    .fold(0u64, |acc, c| self.add(&self.mul(&acc, u), c));
                v == 0
            })
            .collect()
    }
}

/// The rationals, with arbitrary precision normalized fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn format_elem(&self, a: &BigRational) -> String {
        format!("{}/{}", a.numer(), a.denom())
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rational `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(num, den))
    }

    fn nonzero_elements(&self) -> Box<dyn Iterator<Item = BigRational> + '_> {
        Box::new((1i64..).flat_map(|k| [self.from_i64(k), self.from_i64(-k)]))
    }

    /// Rational root test. Coefficients are cleared to integers; candidate
    /// numerators and denominators come from divisors of the constant and
    /// leading coefficients, which must fit in 64 bits.
    fn roots(&self, coeffs: &[BigRational]) -> Vec<BigRational> {
        let mut ints = clear_denominators(coeffs);
        while ints.last().is_some_and(|c| c.is_zero()) {
            ints.pop();
        }
        if ints.is_empty() {
            // the zero polynomial; no finite root set to report
            return Vec::new();
        }
        let mut out = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            out.push(BigRational::zero());
        }
        let ints = &ints[low..];
        let (Some(c0), Some(lead)) = (ints[0].abs().to_u64(), ints[ints.len() - 1].abs().to_u64())
        else {
            log::warn!("rational root test skipped: coefficients exceed 64 bits");
            return out;
        };
        let eval = |r: &BigRational| {
            ints.iter().rev().fold(BigRational::zero(), |acc, c| {
                acc * r + BigRational::from_integer(c.clone())
            })
        };
        for a in divisors(c0) {
            for b in divisors(lead) {
                if a.gcd(&b) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(sign) * BigInt::from(a), BigInt::from(b));
                    if eval(&r).is_zero() {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn rank_with(&self, m: &DenseMat<Self>, order: PivotOrder) -> usize {
        super::dense::bareiss_rank(m, order)
    }
}

pub(crate) fn clear_denominators(coeffs: &[BigRational]) -> Vec<BigInt> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

fn divisors(v: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            if d != v / d {
                out.push(v / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:11".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(11));
        assert_eq!("C64".parse::<FieldSpec>().unwrap(), FieldSpec::ComplexFloat64);
        assert!("Fp:12".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::PrimeField(5).to_string(), "Fp:5");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.sub(&1, &3), 3);
        // u^2 + 3u + 1 = (u - 1)^2 over F_5
        assert_eq!(f.roots(&[1, 3, 1]), vec![1]);
        let f11 = PrimeField::new(11).unwrap();
        assert_eq!(f11.roots(&[1, 3, 1]), vec![2, 6]);
    }

    #[test]
    fn rational_roots() {
        let q = Rationals;
        // 2u^2 + 3u + 1 = (2u+1)(u+1)
        let roots = q.roots(&[q.from_i64(1), q.from_i64(3), q.from_i64(2)]);
        assert_eq!(
            roots,
            vec![q.from_i64(-1), BigRational::new((-1).into(), 2.into())]
        );
        assert!(q.roots(&[q.from_i64(1), q.from_i64(3), q.from_i64(1)]).is_empty());
        assert_eq!(q.format_elem(&q.from_i64(3)), "3/1");
        assert_eq!(q.parse_elem("-2/4").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(q.parse_elem("7").unwrap(), q.from_i64(7));
        assert!(q.parse_elem("1/0").is_err());
    }
}
