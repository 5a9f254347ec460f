//! Laurent polynomials in `s = q^{1/2}` with rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::JsonRational;

/// `sum_k coeffs[k] * s^(min_exp + k)`. Normalized: first and last
/// coefficients are nonzero; the zero polynomial has no coefficients and
/// `min_exp == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<BigRational>,
}

impl LaurentPoly {
    pub fn new(min_exp: i64, coeffs: Vec<BigRational>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(min_exp: i64, coeffs: &[i64]) -> Self {
        Self::new(
            min_exp,
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        Self::new(exp, vec![c])
    }

    /// `(-s)^e`.
    pub fn neg_s_pow(e: i64) -> Self {
        let c = if e.rem_euclid(2) == 1 { -BigRational::one() } else { BigRational::one() };
        Self::monomial(c, e)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `s^e`.
    pub fn coeff(&self, e: i64) -> BigRational {
        let k = e - self.min_exp;
        if k < 0 || k as usize >= self.coeffs.len() {
            BigRational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.min_exp + k as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + other.coeff(e)).collect();
        Self::new(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
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
        Self::new(self.min_exp + other.min_exp, v)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.min_exp, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { min_exp: self.min_exp + k, coeffs: self.coeffs.clone() }
    }

    /// Adams substitution `s -> s^n`.
    pub fn adams(&self, n: u32) -> Self {
        assert!(n >= 1, "adams operation needs n >= 1");
        if self.is_zero() {
            return Self::zero();
        }
        let n = n as i64;
        let len = (self.coeffs.len() as i64 - 1) * n + 1;
        let mut v = vec![BigRational::zero(); len as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * n as usize] = c.clone();
        }
        Self::new(self.min_exp * n, v)
    }

    /// Clears denominators: returns `(c, p)` with `self = p / c`, `c > 0`,
    /// and `p` having integer coefficients.
    pub(crate) fn to_integer_parts(&self) -> (BigInt, i64, Vec<BigInt>) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        (den, self.min_exp, ints)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Value at `s = 1`.
    pub fn eval_one(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            if !unit || e == 0 {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "{}s", if unit { "" } else { "*" })?,
                _ => write!(f, "{}s^{e}", if unit { "" } else { "*" })?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    min_exp_s: i64,
    coeffs: Vec<JsonRational>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LaurentJson {
            min_exp_s: self.min_exp,
            coeffs: self.coeffs.iter().cloned().map(JsonRational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = LaurentJson::deserialize(deserializer)?;
        Ok(LaurentPoly::new(j.min_exp_s, j.coeffs.into_iter().map(|c| c.0).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_zero_ends() {
        let p = LaurentPoly::from_ints(-2, &[0, 0, 3, 0]);
        assert_eq!(p.min_exp(), 0);
        assert_eq!(p.coeffs().len(), 1);
        assert!(LaurentPoly::from_ints(5, &[0, 0]).is_zero());
    }

    #[test]
    fn neg_s_powers() {
        assert_eq!(LaurentPoly::neg_s_pow(-1), LaurentPoly::from_ints(-1, &[-1]));
        assert_eq!(LaurentPoly::neg_s_pow(2), LaurentPoly::from_ints(2, &[1]));
    }

    #[test]
    fn adams_spreads_exponents() {
        let p = LaurentPoly::from_ints(-1, &[1, 0, 2]);
        assert_eq!(p.adams(2), LaurentPoly::from_ints(-2, &[1, 0, 0, 0, 2]));
    }

    #[test]
    fn display() {
        let p = LaurentPoly::from_ints(-1, &[-1, 0, -1]);
        assert_eq!(p.to_string(), "-s^-1 - s");
    }

    #[test]
    fn json_shape() {
        let p = LaurentPoly::from_ints(-1, &[-1, 0, -1]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"min_exp_s":-1,"coeffs":[-1,0,-1]}"#);
        assert_eq!(serde_json::from_str::<LaurentPoly>(&j).unwrap(), p);
    }
}
