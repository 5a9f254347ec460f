//! Dense univariate polynomials over the integers.
//!
//! This is the workhorse behind [`QCoeff`](super::QCoeff): fractions are kept
//! as pairs of integer polynomials and reduced in the UFD `Z[s]`, which keeps
//! coefficient growth under control compared to Euclid over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order; no trailing zeros. Zero is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct IntPoly(pub(crate) Vec<BigInt>);

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IntPoly(vec![c]);
        p.trim();
        p
    }

    pub fn from_vec(v: Vec<BigInt>) -> Self {
        let mut p = IntPoly(v);
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.0.last()
    }

    /// Number of trailing factors of `s`.
    pub fn low_order(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    /// Removes `s^k` with `k = low_order()`.
    pub fn strip_low(&mut self) -> usize {
        let k = self.low_order();
        if k > 0 {
            self.0.drain(..k);
        }
        k
    }

    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        IntPoly(v)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly(self.0.iter().map(|x| x * c).collect())
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        if c.is_one() {
            return self.clone();
        }
        IntPoly(self.0.iter().map(|x| x / c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.0.clone();
        for (a, b) in v.iter_mut().zip(&short.0) {
            *a += b;
        }
        IntPoly::from_vec(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        IntPoly::from_vec(v)
    }

    /// Exact quotient `self / divisor`; `None` if the division leaves a remainder
    /// or a non-integral coefficient.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if divisor.is_one() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = divisor.lc().unwrap();
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in divisor.0.iter().enumerate() {
                if !b.is_zero() {
                    rem[k + j] -= &q * b;
                }
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_vec(quot))
    }

    /// Pseudo-remainder `lc(g)^(deg f - deg g + 1) * f mod g`, up to the
    /// leading-coefficient power (only used inside gcd, where scalars are irrelevant).
    fn pseudo_rem(&self, g: &Self) -> Self {
        let gd = g.degree().expect("pseudo_rem by zero");
        let lead = g.lc().unwrap().clone();
        let mut r = self.0.clone();
        while r.len() > gd && !r.is_empty() {
            let rd = r.len() - 1;
            let top = r[rd].clone();
            let shift = rd - gd;
            let g_ = top.gcd(&lead);
            let mul_r = &lead / &g_;
            let mul_g = &top / &g_;
            if !mul_r.is_one() {
                for c in r.iter_mut() {
                    *c *= &mul_r;
                }
            }
            for (j, b) in g.0.iter().enumerate() {
                if !b.is_zero() {
                    r[shift + j] -= &mul_g * b;
                }
            }
            debug_assert!(r[rd].is_zero());
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        IntPoly(r)
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lc().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Greatest common divisor in `Z[s]`, normalized to a positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let c = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return IntPoly::constant(c);
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return IntPoly::constant(c);
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.scale(&c)
    }

    fn normalize_sign(&self) -> Self {
        if self.lc().is_some_and(|c| c.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Substitution `s -> s^n`.
    pub fn inflate(&self, n: usize) -> Self {
        if n == 1 || self.is_constant() {
            return self.clone();
        }
        let mut v = vec![BigInt::zero(); (self.0.len() - 1) * n + 1];
        for (i, c) in self.0.iter().enumerate() {
            v[i * n] = c.clone();
        }
        IntPoly(v)
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }
}
