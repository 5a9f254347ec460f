//! Exact rational functions in `s = q^{1/2}`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::intpoly::IntPoly;
use super::laurent::LaurentPoly;
use super::qpoly::QPoly;
use crate::error::{Error, Result};

/// An element of `Q(s)`, `s = q^{1/2}`.
///
/// Stored as `s^shift * num(s) / den(s)` with `num, den` in `Z[s]`, neither
/// divisible by `s`, `gcd(num, den) = 1` in `Z[s]` (content included) and
/// `den` with positive leading coefficient. This form is unique, so derived
/// equality and hashing are exact. The monic-denominator view is available
/// through [`QCoeff::numerator`] / [`QCoeff::denominator`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QCoeff {
    shift: i64,
    num: IntPoly,
    den: IntPoly,
}

impl Default for QCoeff {
    fn default() -> Self {
        Self::zero()
    }
}

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff { shift: 0, num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(c: i64) -> Self {
        Self::from_bigint(c.into())
    }

    pub fn from_bigint(c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QCoeff { shift: 0, num: IntPoly::constant(c), den: IntPoly::one() }
    }

    pub fn from_rational(c: &BigRational) -> Self {
        Self::from_raw(0, IntPoly::constant(c.numer().clone()), IntPoly::constant(c.denom().clone()))
    }

    /// `s^e`.
    pub fn s_pow(e: i64) -> Self {
        QCoeff { shift: e, num: IntPoly::one(), den: IntPoly::one() }
    }

    /// `(-s)^e`, the recurring twist `(-q^{1/2})^e`.
    pub fn neg_s_pow(e: i64) -> Self {
        Self::one().mul_neg_s_pow(e)
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let (c, e, ints) = p.to_integer_parts();
        Self::from_raw(e, IntPoly::from_vec(ints), IntPoly::constant(c))
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        Self::from_laurent(&p.to_laurent_s())
    }

    /// Builds `num / den` from two Laurent polynomials.
    pub fn from_parts(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::from_laurent(num).div_checked(&Self::from_laurent(den))
    }

    /// Normalizes `s^shift * num / den` with arbitrary integer polynomials.
    fn from_raw(shift: i64, mut num: IntPoly, mut den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let mut shift = shift + num.strip_low() as i64;
        shift -= den.strip_low() as i64;
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        if den.lc().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        QCoeff { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Multiply by `(-s)^e`; exact and gcd-free.
    pub fn mul_neg_s_pow(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let num = if e.rem_euclid(2) == 1 { self.num.neg() } else { self.num.clone() };
        QCoeff { shift: self.shift + e, num, den: self.den.clone() }
    }

    /// Multiply by `s^e`.
    pub fn mul_s_pow(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        QCoeff { shift: self.shift + e, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn mul_integer(&self, c: i64) -> Self {
        self * &Self::from_integer(c)
    }

    pub fn div_integer(&self, c: i64) -> Self {
        self.div_checked(&Self::from_integer(c)).expect("division by zero integer")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if self.num.lc().unwrap().is_negative() {
            (self.den.neg(), self.num.neg())
        } else {
            (self.den.clone(), self.num.clone())
        };
        Ok(QCoeff { shift: -self.shift, num, den })
    }

    pub fn div_checked(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Ring map `s -> s^n`.
    pub fn adams(&self, n: u32) -> Self {
        assert!(n >= 1, "adams operation needs n >= 1");
        if n == 1 || self.is_zero() {
            return self.clone();
        }
        let n_ = n as usize;
        // gcd(f, g) = 1 implies gcd(f(s^n), g(s^n)) = 1, so the result stays reduced.
        QCoeff {
            shift: self.shift * n as i64,
            num: self.num.inflate(n_),
            den: self.den.inflate(n_),
        }
    }

    fn den_lc(&self) -> BigRational {
        BigRational::from_integer(self.den.lc().unwrap().clone())
    }

    /// Numerator of the representation with monic denominator.
    pub fn numerator(&self) -> LaurentPoly {
        let lc = self.den_lc();
        LaurentPoly::new(
            self.shift,
            self.num.0.iter().map(|c| BigRational::from_integer(c.clone()) / &lc).collect(),
        )
    }

    /// Monic denominator, a polynomial in `s` with nonzero constant term.
    pub fn denominator(&self) -> LaurentPoly {
        let lc = self.den_lc();
        LaurentPoly::new(0, self.den.0.iter().map(|c| BigRational::from_integer(c.clone()) / &lc).collect())
    }

    /// `Some` iff the reduced denominator is a constant.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.den.is_constant() {
            Some(self.numerator())
        } else {
            None
        }
    }

    /// Checked conversion to a polynomial in `q = s^2`.
    pub fn to_qpoly(&self) -> Result<QPoly> {
        let l = self
            .to_laurent()
            .ok_or_else(|| Error::NotAPolynomial(format!("nontrivial denominator in {self}")))?;
        QPoly::from_laurent_s(&l)
    }

    /// Degree of the denominator, a cheap size measure.
    pub fn den_degree(&self) -> usize {
        self.den.degree().unwrap_or(0)
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_laurent() {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "({})/({})", self.numerator(), self.denominator()),
        }
    }
}

fn add_impl(a: &QCoeff, b: &QCoeff) -> QCoeff {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let lo = a.shift.min(b.shift);
    let an = a.num.shifted((a.shift - lo) as usize);
    let bn = b.num.shifted((b.shift - lo) as usize);
    if a.den == b.den {
        return QCoeff::from_raw(lo, an.add(&bn), a.den.clone());
    }
    // gcd(a + c*d, d) = gcd(c, d) = 1 when one side has denominator 1.
    if a.den.is_one() {
        return QCoeff::from_reduced(lo, an.mul(&b.den).add(&bn), b.den.clone());
    }
    if b.den.is_one() {
        return QCoeff::from_reduced(lo, an.add(&bn.mul(&a.den)), a.den.clone());
    }
    // a/b + c/d with g = gcd(b, d): only gcd(t, g) can cancel.
    let g = a.den.gcd(&b.den);
    let b1 = a.den.div_exact(&g).unwrap();
    let d1 = b.den.div_exact(&g).unwrap();
    let mut t = an.mul(&d1).add(&bn.mul(&b1));
    if t.is_zero() {
        return QCoeff::zero();
    }
    let lo = lo + t.strip_low() as i64;
    let g2 = t.gcd(&g);
    let (t, g) = if g2.is_one() {
        (t, g)
    } else {
        (t.div_exact(&g2).unwrap(), g.div_exact(&g2).unwrap())
    };
    let den = b1.mul(&d1).mul(&g);
    QCoeff::from_reduced(lo, t, den)
}

impl QCoeff {
    /// Parts known to be coprime; only normalizes `s`-powers and sign.
    fn from_reduced(shift: i64, mut num: IntPoly, mut den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let shift = shift + num.strip_low() as i64;
        debug_assert_eq!(den.low_order(), 0);
        if den.lc().unwrap().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        QCoeff { shift, num, den }
    }
}

fn mul_impl(a: &QCoeff, b: &QCoeff) -> QCoeff {
    if a.is_zero() || b.is_zero() {
        return QCoeff::zero();
    }
    let shift = a.shift + b.shift;
    if a.den.is_one() && b.den.is_one() {
        return QCoeff { shift, num: a.num.mul(&b.num), den: IntPoly::one() };
    }
    let g1 = a.num.gcd(&b.den);
    let g2 = b.num.gcd(&a.den);
    let an = a.num.div_exact(&g1).unwrap();
    let bd = b.den.div_exact(&g1).unwrap();
    let bn = b.num.div_exact(&g2).unwrap();
    let ad = a.den.div_exact(&g2).unwrap();
    QCoeff::from_reduced(shift, an.mul(&bn), ad.mul(&bd))
}

impl Add for &QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: &QCoeff) -> QCoeff {
        add_impl(self, rhs)
    }
}

impl Add for QCoeff {
    type Output = QCoeff;
    fn add(self, rhs: QCoeff) -> QCoeff {
        add_impl(&self, &rhs)
    }
}

impl AddAssign<&QCoeff> for QCoeff {
    fn add_assign(&mut self, rhs: &QCoeff) {
        *self = add_impl(self, rhs);
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        -&self
    }
}

impl Sub for &QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: &QCoeff) -> QCoeff {
        add_impl(self, &-rhs)
    }
}

impl Sub for QCoeff {
    type Output = QCoeff;
    fn sub(self, rhs: QCoeff) -> QCoeff {
        &self - &rhs
    }
}

impl Mul for &QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: &QCoeff) -> QCoeff {
        mul_impl(self, rhs)
    }
}

impl Mul for QCoeff {
    type Output = QCoeff;
    fn mul(self, rhs: QCoeff) -> QCoeff {
        mul_impl(&self, &rhs)
    }
}

/// Panics on a zero divisor; use [`QCoeff::div_checked`] for a `Result`.
impl Div for &QCoeff {
    type Output = QCoeff;
    fn div(self, rhs: &QCoeff) -> QCoeff {
        self.div_checked(rhs).expect("division by zero")
    }
}

impl Div for QCoeff {
    type Output = QCoeff;
    fn div(self, rhs: QCoeff) -> QCoeff {
        &self / &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct QCoeffJson {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for QCoeff {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QCoeffJson { num: self.numerator(), den: self.denominator() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QCoeff {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = QCoeffJson::deserialize(deserializer)?;
        QCoeff::from_parts(&j.num, &j.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(min: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_ints(min, c)
    }

    fn frac(n: LaurentPoly, d: LaurentPoly) -> QCoeff {
        QCoeff::from_parts(&n, &d).unwrap()
    }

    #[test]
    fn additive_identity() {
        let a = frac(lp(1, &[1]), lp(0, &[1, 0, -1]));
        assert_eq!(&a + &QCoeff::zero(), a);
    }

    #[test]
    fn reduction_by_gcd() {
        let a = frac(lp(0, &[1, 0, 0, 0, -1]), lp(0, &[1, 0, -1]));
        let r = &a * &QCoeff::one();
        assert_eq!(r, QCoeff::from_laurent(&lp(0, &[1, 0, 1])));
        assert_eq!(r.to_laurent().unwrap(), lp(0, &[1, 0, 1]));
    }

    #[test]
    fn division_of_fractions() {
        // 1/(1-s^2) / 1/(1-s^4) = 1+s^2
        let a = frac(lp(0, &[1]), lp(0, &[1, 0, -1]));
        let b = frac(lp(0, &[1]), lp(0, &[1, 0, 0, 0, -1]));
        assert_eq!(a.div_checked(&b).unwrap(), QCoeff::from_laurent(&lp(0, &[1, 0, 1])));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(QCoeff::one().div_checked(&QCoeff::zero()), Err(Error::DivisionByZero));
        assert_eq!(QCoeff::from_parts(&lp(0, &[1]), &LaurentPoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn adams_examples() {
        let s = QCoeff::s_pow(1);
        assert_eq!(s.adams(2), QCoeff::s_pow(2));
        let f = frac(lp(0, &[1]), lp(-1, &[1, 0, -1]));
        assert_eq!(f.adams(1), f);
        let expect = frac(lp(0, &[1]), lp(-2, &[1, 0, 0, 0, -1]));
        assert_eq!(f.adams(2), expect);
    }

    #[test]
    fn monic_view() {
        // 2/(3 - 3s^2) = (-2/3)/(s^2 - 1)
        let a = frac(lp(0, &[2]), lp(0, &[3, 0, -3]));
        assert_eq!(a.denominator(), lp(0, &[-1, 0, 1]));
        assert_eq!(
            a.numerator(),
            LaurentPoly::new(0, vec![BigRational::new((-2).into(), 3.into())])
        );
        assert_eq!(a.to_string(), "(-2/3)/(-1 + s^2)");
    }

    #[test]
    fn neg_s_pow_signs() {
        assert_eq!(QCoeff::neg_s_pow(-1), QCoeff::from_laurent(&lp(-1, &[-1])));
        assert_eq!(QCoeff::neg_s_pow(3).pow(2).unwrap(), QCoeff::s_pow(6));
    }

    #[test]
    fn qpoly_conversion_is_checked() {
        assert!(QCoeff::s_pow(1).to_qpoly().is_err());
        assert!(QCoeff::s_pow(-2).to_qpoly().is_err());
        assert!(frac(lp(0, &[1]), lp(0, &[1, 1])).to_qpoly().is_err());
        let p = QCoeff::from_laurent(&lp(0, &[1, 0, 2])).to_qpoly().unwrap();
        assert_eq!(p, QPoly::from_ints(&[1, 2]));
    }

    #[test]
    fn json_round_trip() {
        let a = frac(lp(1, &[1]), lp(0, &[1, 0, -1]));
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<QCoeff>(&j).unwrap(), a);
    }
}
