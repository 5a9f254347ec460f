//! Polynomials in `q` with rational coefficients, and the shape tests applied
//! to DT polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::LaurentPoly;
use super::rational::JsonRational;
use crate::error::{Error, Result};

/// `coeffs[k]` is the coefficient of `q^k`; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_one(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |a, c| a + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// The same polynomial written in `s`, `q = s^2`.
    pub fn to_laurent_s(&self) -> LaurentPoly {
        let mut v = Vec::with_capacity(2 * self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.clone());
            v.push(BigRational::zero());
        }
        LaurentPoly::new(0, v)
    }

    /// Accepts only nonnegative even powers of `s`.
    pub fn from_laurent_s(l: &LaurentPoly) -> Result<Self> {
        if l.is_zero() {
            return Ok(Self::zero());
        }
        let mut coeffs = Vec::new();
        for (e, c) in l.terms() {
            if e < 0 {
                return Err(Error::NotAPolynomial(format!("negative power s^{e} in {l}")));
            }
            if e % 2 != 0 {
                return Err(Error::NotAPolynomial(format!("odd power s^{e} in {l}")));
            }
            let k = (e / 2) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    /// Coefficients as integers if all are integral and nonnegative.
    pub fn natural_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| (c.is_integer() && !c.is_negative()).then(|| c.to_integer()))
            .collect()
    }

    /// Descending rendering, `q^2+q+1`.
    pub fn to_descending_string(&self) -> String {
        self.render(true)
    }

    fn render(&self, descending: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut idx: Vec<usize> = (0..self.coeffs.len()).filter(|&k| !self.coeffs[k].is_zero()).collect();
        if descending {
            idx.reverse();
        }
        let mut out = String::new();
        for (n, &k) in idx.iter().enumerate() {
            let c = &self.coeffs[k];
            if n == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push(if c.is_negative() { '-' } else { '+' });
            }
            let a = c.abs();
            if !a.is_one() || k == 0 {
                out.push_str(&a.to_string());
            }
            match k {
                0 => {}
                1 => out.push('q'),
                _ => out.push_str(&format!("q^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// Coefficient list, low to high in `q`.
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<JsonRational> = self.coeffs.iter().cloned().map(JsonRational).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<JsonRational>::deserialize(deserializer)?;
        Ok(QPoly::new(v.into_iter().map(|c| c.0).collect()))
    }
}

/// Gaussian binomial `[m over k]_q`, built with the q-Pascal rule
/// `[m, k] = [m-1, k-1] + q^k [m-1, k]`.
pub fn gauss_binomial(m: u64, k: u64) -> Result<QPoly> {
    if k > m {
        return Err(Error::BinomialRange { m, k });
    }
    let k = k.min(m - k) as usize;
    let m = m as usize;
    // row[j] = [n, j] for the current n
    let mut row: Vec<QPoly> = vec![QPoly::one()];
    for n in 1..=m {
        let mut next = Vec::with_capacity((n + 1).min(k + 1));
        for j in 0..=n.min(k) {
            let left = if j >= 1 { row.get(j - 1).cloned().unwrap_or_default() } else { QPoly::zero() };
            let right = row.get(j).map(|p| p.shift(j)).unwrap_or_default();
            next.push(left.add(&right));
        }
        row = next;
    }
    Ok(row.swap_remove(k))
}

/// `(palindromic, unimodal)` for a nonzero polynomial.
pub fn is_palindromic_unimodal(p: &QPoly) -> Result<(bool, bool)> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    let c = p.coeffs();
    let palindromic = (0..=d).all(|k| c[k] == c[d - k]);
    let mut k = 0;
    while k < d && c[k] <= c[k + 1] {
        k += 1;
    }
    while k < d && c[k] >= c[k + 1] {
        k += 1;
    }
    Ok((palindromic, k == d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_binomial(3, 1).unwrap(), QPoly::from_ints(&[1, 1, 1]));
        assert_eq!(gauss_binomial(7, 0).unwrap(), QPoly::one());
        assert_eq!(gauss_binomial(3, 2).unwrap(), QPoly::from_ints(&[1, 1, 1]));
        assert_eq!(gauss_binomial(4, 2).unwrap(), QPoly::from_ints(&[1, 1, 2, 1, 1]));
        assert_eq!(gauss_binomial(2, 3), Err(Error::BinomialRange { m: 2, k: 3 }));
    }

    #[test]
    fn shape_examples() {
        assert_eq!(is_palindromic_unimodal(&QPoly::from_ints(&[1, 1, 1])), Ok((true, true)));
        assert_eq!(is_palindromic_unimodal(&QPoly::from_ints(&[1, 0, 0, 1])), Ok((true, false)));
        assert_eq!(is_palindromic_unimodal(&QPoly::from_ints(&[1, 2])), Ok((false, true)));
        assert_eq!(is_palindromic_unimodal(&QPoly::zero()), Err(Error::ZeroPolynomial));
        assert_eq!(is_palindromic_unimodal(&QPoly::from_ints(&[2, 1, 2])), Ok((true, false)));
    }

    #[test]
    fn laurent_conversion() {
        let l = LaurentPoly::from_ints(0, &[1, 0, 1]);
        assert_eq!(QPoly::from_laurent_s(&l).unwrap(), QPoly::from_ints(&[1, 1]));
        assert!(QPoly::from_laurent_s(&LaurentPoly::from_ints(1, &[1])).is_err());
        assert!(QPoly::from_laurent_s(&LaurentPoly::from_ints(-2, &[1])).is_err());
        assert_eq!(QPoly::from_ints(&[1, 1]).to_laurent_s(), l);
    }

    #[test]
    fn rendering() {
        let p = QPoly::from_ints(&[1, 1]);
        assert_eq!(p.to_descending_string(), "q+1");
        assert_eq!(QPoly::from_ints(&[1, 1, 1]).to_string(), "1+q+q^2");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,1]");
    }
}
