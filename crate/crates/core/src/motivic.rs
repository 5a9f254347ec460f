//! Quantum dilogarithm factors and the motivic generating series of a quiver.

use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, QCoeff};
use crate::quiver::{DimVector, Quiver};
use crate::skewseries::{ordered_product, Fault, SeriesContext, SkewSeries};

/// `Phi(t^d)^{∘P}` with `P` a Laurent polynomial in `s`, stored in the
/// `s`-basis: `P = sum_k c_k (-s)^k` has `[s^k]P = (-1)^k c_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilogSpec {
    pub base: DimVector,
    pub exponent_poly: LaurentPoly,
}

impl DilogSpec {
    pub fn plain(base: DimVector) -> Self {
        DilogSpec { base, exponent_poly: LaurentPoly::one() }
    }
}

/// `Phi(c t^d) = sum_n c^n s^n t^{nd} / prod_{i<=n}(1-s^{2i})`, truncated.
pub fn phi_scaled(ctx: &Arc<SeriesContext>, d: &DimVector, c: &QCoeff) -> Result<SkewSeries> {
    if d.is_zero() {
        return Err(Error::ZeroVector);
    }
    let w = ctx.weight(d);
    let n_max = ctx.truncation() as i64 / w;
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    let mut poch = QCoeff::one();
    let mut cn = QCoeff::one();
    terms.push((DimVector::zero(ctx.dim()), QCoeff::one()));
    for n in 1..=n_max {
        poch = &poch * &(&QCoeff::one() - &QCoeff::s_pow(2 * n));
        cn = &cn * c;
        let coeff = cn.mul_s_pow(n).div_checked(&poch)?;
        terms.push((d.scale(n as u32), coeff));
    }
    Ok(SkewSeries::from_terms(ctx, terms))
}

/// The quantum dilogarithm `Phi(t^d)` from its sum form.
pub fn phi_series(ctx: &Arc<SeriesContext>, d: &DimVector) -> Result<SkewSeries> {
    phi_scaled(ctx, d, &QCoeff::one())
}

/// `prod_k Phi(s^k t^d)^{[s^k]P}`, factors in increasing `k`.
pub fn phi_power(ctx: &Arc<SeriesContext>, spec: &DilogSpec) -> Result<SkewSeries> {
    if spec.base.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut factors = Vec::new();
    for (k, c) in spec.exponent_poly.terms() {
        if !c.is_integer() {
            return Err(Error::NonIntegralExponent(spec.exponent_poly.to_string()));
        }
        let e = c
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::NonIntegralExponent(spec.exponent_poly.to_string()))?;
        factors.push(phi_scaled(ctx, &spec.base, &QCoeff::s_pow(k))?.pow(e)?);
    }
    ordered_product(ctx, &factors)
}

fn motive_coeff_with(q: &Quiver, d: &DimVector, fault: Option<Fault>) -> Result<QCoeff> {
    let dd = q.euler_form(d, d)?;
    let arrows: i64 = q.arrows().iter().map(|&(i, j)| d.0[i] as i64 * d.0[j] as i64).sum();
    let mut gl = QCoeff::one();
    for &di in &d.0 {
        let di = di as i64;
        for k in 0..di {
            gl = &gl * &(&QCoeff::s_pow(2 * di) - &QCoeff::s_pow(2 * k));
        }
    }
    let sign_exp = if fault == Some(Fault::MotiveExponent) { -dd } else { dd };
    QCoeff::neg_s_pow(sign_exp).mul_s_pow(2 * arrows).div_checked(&gl)
}

/// `(-s)^{<d,d>} [R_d] / [G_d]` with `[R_d] = q^{sum_{a:i->j} d_i d_j}` and
/// `[G_d] = prod_i prod_{k<d_i} (q^{d_i} - q^k)`.
pub fn motive_coeff(q: &Quiver, d: &DimVector) -> Result<QCoeff> {
    motive_coeff_with(q, d, None)
}

/// `sum_{kappa(d) <= N} motive_coeff(d) t^d`.
pub fn total_series(ctx: &Arc<SeriesContext>) -> Result<SkewSeries> {
    let fault = ctx.fault();
    let terms: Vec<(DimVector, QCoeff)> = ctx
        .vectors()
        .into_par_iter()
        .map(|d| motive_coeff_with(ctx.quiver(), &d, fault).map(|c| (d, c)))
        .collect::<Result<_>>()?;
    let mut s = SkewSeries::one(ctx);
    s = s.add(&SkewSeries::from_terms(ctx, terms))?;
    Ok(s)
}

/// `Phi(t_{i_1}) ... Phi(t_{i_n})` in admissible vertex order.
pub fn lhs_product(ctx: &Arc<SeriesContext>) -> Result<SkewSeries> {
    let order = ctx.quiver().admissible_vertex_order()?;
    let factors = order
        .into_iter()
        .map(|i| phi_series(ctx, &DimVector::unit(ctx.dim(), i)))
        .collect::<Result<Vec<_>>>()?;
    ordered_product(ctx, &factors)
}
