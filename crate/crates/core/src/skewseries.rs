//! Truncated quantum affine space.
//!
//! Series are finite maps `t^d -> QCoeff` over dimension vectors `d` of weight
//! `kappa(d) <= N`, multiplied with the twist
//! `t^d t^e = (-s)^{<d,e> - <e,d>} t^{d+e}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::QCoeff;
use crate::quiver::{DimVector, Quiver, Slope, Stability, SymmetryReport};

/// Deliberate convention errors, used to show that the identity checks are
/// sensitive to them.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    /// Twist by `s^{<d,e>-<e,d>}` instead of `(-s)^{<d,e>-<e,d>}`.
    TwistSign,
    /// Motive prefactor `(-s)^{-<d,d>}` instead of `(-s)^{<d,d>}`.
    MotiveExponent,
}

/// Quiver, stability and truncation weight shared by a family of series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesContext {
    quiver: Quiver,
    stability: Stability,
    truncation: u32,
    antisym: Vec<Vec<i64>>,
    fault: Option<Fault>,
}

impl SeriesContext {
    pub fn new(quiver: Quiver, stability: Stability, truncation: u32) -> Result<Arc<Self>> {
        Self::build(quiver, stability, truncation, None)
    }

    #[doc(hidden)]
    pub fn with_fault(quiver: Quiver, stability: Stability, truncation: u32, fault: Fault) -> Result<Arc<Self>> {
        Self::build(quiver, stability, truncation, Some(fault))
    }

    fn build(quiver: Quiver, stability: Stability, truncation: u32, fault: Option<Fault>) -> Result<Arc<Self>> {
        if stability.kappa().len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: quiver.vertex_count(),
                got: stability.kappa().len(),
            });
        }
        let antisym = quiver.antisym_matrix();
        Ok(Arc::new(SeriesContext { quiver, stability, truncation, antisym, fault }))
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn stability(&self) -> &Stability {
        &self.stability
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    pub fn dim(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn weight(&self, d: &DimVector) -> i64 {
        self.stability.kappa_of(d)
    }

    pub fn within(&self, d: &DimVector) -> bool {
        self.weight(d) <= self.truncation as i64
    }

    /// `<d,e> - <e,d>` from the cached matrix.
    pub fn antisym(&self, d: &DimVector, e: &DimVector) -> i64 {
        let mut acc = 0i64;
        for (i, &di) in d.0.iter().enumerate() {
            if di == 0 {
                continue;
            }
            for (j, &ej) in e.0.iter().enumerate() {
                acc += di as i64 * self.antisym[i][j] * ej as i64;
            }
        }
        acc
    }

    /// Scalar `c` with `t^d t^e = c t^{d+e}`.
    pub fn twist(&self, d: &DimVector, e: &DimVector) -> QCoeff {
        let a = self.antisym(d, e);
        match self.fault {
            Some(Fault::TwistSign) => QCoeff::s_pow(a),
            _ => QCoeff::neg_s_pow(a),
        }
    }

    pub(crate) fn apply_twist(&self, c: &QCoeff, d: &DimVector, e: &DimVector) -> QCoeff {
        let a = self.antisym(d, e);
        match self.fault {
            Some(Fault::TwistSign) => c.mul_s_pow(a),
            _ => c.mul_neg_s_pow(a),
        }
    }

    /// Nonzero vectors within truncation, by weight then lexicographically.
    pub fn vectors(&self) -> Vec<DimVector> {
        self.stability.vectors_up_to(self.truncation)
    }

    pub fn slope(&self, d: &DimVector) -> Result<Slope> {
        self.stability.slope(d)
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// An element of the truncated skew power series ring.
#[derive(Clone, Debug)]
pub struct SkewSeries {
    ctx: Arc<SeriesContext>,
    terms: BTreeMap<DimVector, QCoeff>,
}

impl PartialEq for SkewSeries {
    fn eq(&self, other: &Self) -> bool {
        SeriesContext::same(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for SkewSeries {}

impl SkewSeries {
    pub fn zero(ctx: &Arc<SeriesContext>) -> Self {
        SkewSeries { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<SeriesContext>) -> Self {
        Self::monomial(ctx, DimVector::zero(ctx.dim()), QCoeff::one())
    }

    /// `c t^d`; zero if `d` lies beyond the truncation.
    pub fn monomial(ctx: &Arc<SeriesContext>, d: DimVector, c: QCoeff) -> Self {
        let mut s = Self::zero(ctx);
        s.insert(d, c);
        s
    }

    /// Builds a series from arbitrary terms, dropping zeros and terms beyond truncation.
    pub fn from_terms(ctx: &Arc<SeriesContext>, terms: impl IntoIterator<Item = (DimVector, QCoeff)>) -> Self {
        let mut s = Self::zero(ctx);
        for (d, c) in terms {
            let sum = s.terms.get(&d).map_or(c.clone(), |old| old + &c);
            s.insert(d, sum);
        }
        s
    }

    fn insert(&mut self, d: DimVector, c: QCoeff) {
        assert_eq!(d.len(), self.ctx.dim(), "dimension vector size");
        if c.is_zero() || !self.ctx.within(&d) {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, c);
        }
    }

    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<DimVector, QCoeff> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> QCoeff {
        self.terms.get(&DimVector::zero(self.ctx.dim())).cloned().unwrap_or_default()
    }

    /// Stored coefficient of `t^d`, or zero.
    pub fn coefficient(&self, d: &DimVector) -> Result<QCoeff> {
        if d.len() != self.ctx.dim() {
            return Err(Error::DimensionMismatch { expected: self.ctx.dim(), got: d.len() });
        }
        if !self.ctx.within(d) {
            return Err(Error::BeyondTruncation {
                d: d.0.clone(),
                weight: self.ctx.weight(d),
                truncation: self.ctx.truncation,
            });
        }
        Ok(self.terms.get(d).cloned().unwrap_or_default())
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if SeriesContext::same(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            let sum = out.terms.get(d).map_or(c.clone(), |old| old + c);
            out.insert(d.clone(), sum);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        SkewSeries {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (d, x) in &self.terms {
            out.insert(d.clone(), x * c);
        }
        out
    }

    /// Twisted product; terms beyond the truncation are discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        let n = ctx.truncation as i64;
        let left: Vec<(&DimVector, &QCoeff, i64)> =
            self.terms.iter().map(|(d, c)| (d, c, ctx.weight(d))).collect();
        let right: Vec<(&DimVector, &QCoeff, i64)> =
            other.terms.iter().map(|(d, c)| (d, c, ctx.weight(d))).collect();

        let mut groups: BTreeMap<DimVector, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, (d, _, wd)) in left.iter().enumerate() {
            for (j, (e, _, we)) in right.iter().enumerate() {
                if wd + we <= n {
                    groups.entry(d.add(e)).or_default().push((i, j));
                }
            }
        }
        let groups: Vec<(DimVector, Vec<(usize, usize)>)> = groups.into_iter().collect();
        let sums: Vec<(DimVector, QCoeff)> = groups
            .into_par_iter()
            .map(|(f, pairs)| {
                let mut acc = QCoeff::zero();
                for (i, j) in pairs {
                    let (d, a, _) = left[i];
                    let (e, b, _) = right[j];
                    let p = a * b;
                    acc += &ctx.apply_twist(&p, d, e);
                }
                (f, acc)
            })
            .collect();
        let mut out = Self::zero(ctx);
        for (f, c) in sums {
            out.insert(f, c);
        }
        Ok(out)
    }

    /// Two-sided inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::NonUnitConstant(c0.to_string()));
        }
        let ctx = &self.ctx;
        let zero = DimVector::zero(ctx.dim());
        let support: Vec<(&DimVector, &QCoeff)> = self.terms.iter().filter(|(d, _)| **d != zero).collect();
        let mut inv: BTreeMap<DimVector, QCoeff> = BTreeMap::new();
        inv.insert(zero, QCoeff::one());
        for f in ctx.vectors() {
            let mut acc = QCoeff::zero();
            for (d, a) in &support {
                let Some(rest) = f.checked_sub(d) else { continue };
                if let Some(b) = inv.get(&rest) {
                    acc += &ctx.apply_twist(&(*a * b), d, &rest);
                }
            }
            if !acc.is_zero() {
                inv.insert(f, -acc);
            }
        }
        Ok(SkewSeries { ctx: ctx.clone(), terms: inv })
    }

    /// Integer power; negative exponents go through [`SkewSeries::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ctx);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    fn check_slope_pure(&self, slope: &Slope, report: &SymmetryReport) -> Result<()> {
        if !report.holds {
            let why = match &report.witness {
                Some((d, e)) => format!("antisymmetrized form nonzero on {d} and {e} of equal slope"),
                None => "symmetry check failed".into(),
            };
            return Err(Error::SymmetryUnchecked(why));
        }
        if report.bound < self.ctx.truncation {
            return Err(Error::SymmetryUnchecked(format!(
                "checked up to weight {} but series run to {}",
                report.bound, self.ctx.truncation
            )));
        }
        for d in self.terms.keys().filter(|d| !d.is_zero()) {
            if self.ctx.slope(d)? != *slope {
                return Err(Error::MixedSlopes(d.0.clone()));
            }
        }
        Ok(())
    }

    /// `D(t^d) = kappa(d) t^d`, a derivation of the twisted product.
    fn weight_derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(d, _)| !d.is_zero())
            .map(|(d, c)| (d.clone(), c.mul_integer(self.ctx.weight(d))));
        Self::from_terms(&self.ctx, terms)
    }

    /// Formal logarithm of a slope-pure series with unit constant term.
    ///
    /// All terms of a single slope commute once the Euler form is symmetric on
    /// that slope, so `D(log S) = D(S) S^{-1}`.
    pub fn log_slope(&self, slope: &Slope, report: &SymmetryReport) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::NonUnitConstant(c0.to_string()));
        }
        self.check_slope_pure(slope, report)?;
        let dlog = self.weight_derivative().mul(&self.inverse()?)?;
        let terms = dlog.terms.iter().map(|(d, c)| (d.clone(), c.div_integer(self.ctx.weight(d))));
        Ok(Self::from_terms(&self.ctx, terms))
    }

    /// Exponential of a slope-pure series without constant term; the inverse
    /// of [`SkewSeries::log_slope`]. Solves `D(E) = D(L) E` weight by weight.
    pub fn exp_slope(&self, slope: &Slope, report: &SymmetryReport) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::NonUnitConstant(c0.to_string()));
        }
        self.check_slope_pure(slope, report)?;
        let ctx = &self.ctx;
        let dl = self.weight_derivative();
        let mut out: BTreeMap<DimVector, QCoeff> = BTreeMap::new();
        out.insert(DimVector::zero(ctx.dim()), QCoeff::one());
        for f in ctx.vectors() {
            let mut acc = QCoeff::zero();
            for (d, a) in &dl.terms {
                let Some(rest) = f.checked_sub(d) else { continue };
                if let Some(b) = out.get(&rest) {
                    acc += &ctx.apply_twist(&(a * b), d, &rest);
                }
            }
            if !acc.is_zero() {
                out.insert(f.clone(), acc.div_integer(ctx.weight(&f)));
            }
        }
        Ok(SkewSeries { ctx: ctx.clone(), terms: out })
    }

    /// First monomial, by weight then lexicographically, where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(DimVector, QCoeff, QCoeff)> {
        let mut keys: Vec<&DimVector> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort_by(|a, b| self.ctx.weight(a).cmp(&self.ctx.weight(b)).then_with(|| a.cmp(b)));
        keys.dedup();
        keys.into_iter().find_map(|d| {
            let a = self.terms.get(d).cloned().unwrap_or_default();
            let b = other.terms.get(d).cloned().unwrap_or_default();
            (a != b).then(|| (d.clone(), a, b))
        })
    }
}

impl fmt::Display for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}] t^{d}")?;
        }
        Ok(())
    }
}

/// Left-to-right product of `factors`; the empty product is 1.
pub fn ordered_product(ctx: &Arc<SeriesContext>, factors: &[SkewSeries]) -> Result<SkewSeries> {
    let mut acc = SkewSeries::one(ctx);
    for f in factors {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::LaurentPoly;
    use crate::quiver::{check_slope_symmetry, kronecker_quiver};

    fn kctx(m: i64, n: u32) -> Arc<SeriesContext> {
        let (q, st) = kronecker_quiver(m).unwrap();
        SeriesContext::new(q, st, n).unwrap()
    }

    fn dv(v: &[u32]) -> DimVector {
        DimVector(v.to_vec())
    }

    #[test]
    fn twist_examples() {
        for m in 1..4 {
            let ctx = kctx(m, 4);
            let x = SkewSeries::monomial(&ctx, dv(&[1, 0]), QCoeff::one());
            let y = SkewSeries::monomial(&ctx, dv(&[0, 1]), QCoeff::one());
            let xy = x.mul(&y).unwrap();
            assert_eq!(xy.coefficient(&dv(&[1, 1])).unwrap(), QCoeff::neg_s_pow(m));
            let yx = y.mul(&x).unwrap();
            assert_eq!(yx.coefficient(&dv(&[1, 1])).unwrap(), QCoeff::neg_s_pow(-m));
            assert_eq!(x.mul(&SkewSeries::one(&ctx)).unwrap(), x);
        }
    }

    #[test]
    fn coefficient_lookup() {
        let ctx = kctx(2, 3);
        let one = SkewSeries::one(&ctx);
        assert_eq!(one.coefficient(&dv(&[0, 0])).unwrap(), QCoeff::one());
        assert_eq!(one.coefficient(&dv(&[1, 2])).unwrap(), QCoeff::zero());
        assert!(matches!(one.coefficient(&dv(&[2, 2])), Err(Error::BeyondTruncation { .. })));
    }

    #[test]
    fn context_mismatch() {
        let a = SkewSeries::one(&kctx(2, 3));
        let b = SkewSeries::one(&kctx(3, 3));
        assert_eq!(a.mul(&b), Err(Error::ContextMismatch));
        // equal contexts built separately are compatible
        assert!(a.mul(&SkewSeries::one(&kctx(2, 3))).is_ok());
    }

    #[test]
    fn geometric_inverse() {
        let ctx = kctx(3, 6);
        let d = dv(&[1, 1]);
        let c = QCoeff::from_laurent(&LaurentPoly::from_ints(-1, &[2, 0, 1]));
        let a = SkewSeries::one(&ctx).add(&SkewSeries::monomial(&ctx, d.clone(), c.clone())).unwrap();
        let inv = a.inverse().unwrap();
        for k in 0..=3u32 {
            let expect = c.pow(k as i64).unwrap().mul_integer(if k % 2 == 0 { 1 } else { -1 });
            assert_eq!(inv.coefficient(&d.scale(k)).unwrap(), expect);
        }
        assert_eq!(inv.len(), 4);
        assert!(SkewSeries::zero(&ctx).inverse().is_err());
        assert_eq!(SkewSeries::one(&ctx).inverse().unwrap(), SkewSeries::one(&ctx));
    }

    #[test]
    fn log_of_one_and_truncated_linear() {
        let ctx = kctx(3, 3);
        let (q, st) = kronecker_quiver(3).unwrap();
        let rep = check_slope_symmetry(&q, &st, 3);
        let a0 = Slope(num_rational::Ratio::from_integer(0));
        assert!(SkewSeries::one(&ctx).log_slope(&a0, &rep).unwrap().is_empty());
        let c = QCoeff::s_pow(3);
        let lin = SkewSeries::one(&ctx).add(&SkewSeries::monomial(&ctx, dv(&[1, 1]), c.clone())).unwrap();
        let l = lin.log_slope(&a0, &rep).unwrap();
        assert_eq!(l, SkewSeries::monomial(&ctx, dv(&[1, 1]), c));
    }

    /// `sum (-1)^{k+1} X^k / k` and `sum L^k / k!` by repeated multiplication.
    fn log_by_powers(a: &SkewSeries) -> SkewSeries {
        let x = a.sub(&SkewSeries::one(&a.ctx)).unwrap();
        let (mut out, mut power, mut k) = (SkewSeries::zero(&a.ctx), x.clone(), 1i64);
        while !power.is_empty() {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&QCoeff::from_integer(sign).div_integer(k))).unwrap();
            power = power.mul(&x).unwrap();
            k += 1;
        }
        out
    }

    fn exp_by_powers(l: &SkewSeries) -> SkewSeries {
        let (mut out, mut power, mut k) = (SkewSeries::one(&l.ctx), SkewSeries::one(&l.ctx), 1i64);
        loop {
            power = power.mul(l).unwrap().scale(&QCoeff::one().div_integer(k));
            if power.is_empty() {
                return out;
            }
            out = out.add(&power).unwrap();
            k += 1;
        }
    }

    #[test]
    fn log_exp_match_power_sums() {
        let ctx = kctx(3, 8);
        let (q, st) = kronecker_quiver(3).unwrap();
        let rep = check_slope_symmetry(&q, &st, 8);
        let a0 = Slope(num_rational::Ratio::from_integer(0));
        let terms = (1..=4u32).map(|k| {
            let c = QCoeff::from_parts(
                &LaurentPoly::from_ints(-(k as i64), &[1, 2, -1]),
                &LaurentPoly::from_ints(0, &[1, 0, -(k as i64)]),
            )
            .unwrap();
            (dv(&[k, k]), c)
        });
        let l = SkewSeries::from_terms(&ctx, terms);
        let e = l.exp_slope(&a0, &rep).unwrap();
        assert_eq!(e, exp_by_powers(&l));
        assert_eq!(e.log_slope(&a0, &rep).unwrap(), log_by_powers(&e));
        assert_eq!(e.log_slope(&a0, &rep).unwrap(), l);
    }

    #[test]
    fn log_guards() {
        let ctx = kctx(3, 4);
        let (q, st) = kronecker_quiver(3).unwrap();
        let rep = check_slope_symmetry(&q, &st, 4);
        let a0 = Slope(num_rational::Ratio::from_integer(0));
        let mixed = SkewSeries::one(&ctx).add(&SkewSeries::monomial(&ctx, dv(&[1, 0]), QCoeff::one())).unwrap();
        assert_eq!(mixed.log_slope(&a0, &rep), Err(Error::MixedSlopes(vec![1, 0])));
        let short = check_slope_symmetry(&q, &st, 2);
        assert!(matches!(SkewSeries::one(&ctx).log_slope(&a0, &short), Err(Error::SymmetryUnchecked(_))));
        let mut bad = rep.clone();
        bad.holds = false;
        assert!(matches!(SkewSeries::one(&ctx).log_slope(&a0, &bad), Err(Error::SymmetryUnchecked(_))));
        assert!(matches!(SkewSeries::zero(&ctx).log_slope(&a0, &rep), Err(Error::NonUnitConstant(_))));
    }
}
