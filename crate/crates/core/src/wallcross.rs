//! Harder–Narasimhan recursion for semistable slope series and extraction of
//! motivic DT invariants by factorization into dilogarithms.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{is_palindromic_unimodal, LaurentPoly, QCoeff, QPoly};
use crate::motivic::{lhs_product, phi_power, total_series, DilogSpec};
use crate::quiver::{DimVector, Quiver, Slope, Stability, SymmetryReport};
use crate::skewseries::{ordered_product, SeriesContext, SkewSeries};

/// A decomposition `d = d^1 + ... + d^s` into nonzero parts of strictly
/// decreasing slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeDecomposition {
    parts: Vec<DimVector>,
}

impl SlopeDecomposition {
    pub fn new(parts: Vec<DimVector>, stab: &Stability) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::ZeroVector);
        }
        let slopes = parts.iter().map(|d| stab.slope(d)).collect::<Result<Vec<_>>>()?;
        if let Some(w) = slopes.windows(2).position(|w| w[0] <= w[1]) {
            return Err(Error::MixedSlopes(parts[w + 1].0.clone()));
        }
        Ok(SlopeDecomposition { parts })
    }

    pub fn parts(&self) -> &[DimVector] {
        &self.parts
    }

    pub fn total(&self) -> DimVector {
        let mut acc = DimVector::zero(self.parts[0].len());
        for p in &self.parts {
            acc = acc.add(p);
        }
        acc
    }

    /// Every decomposition of `d`, including the trivial one.
    pub fn enumerate(d: &DimVector, stab: &Stability) -> Vec<SlopeDecomposition> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        enumerate_rec(d, None, stab, &mut prefix, &mut out);
        out
    }
}

fn enumerate_rec(
    rest: &DimVector,
    bound: Option<Slope>,
    stab: &Stability,
    prefix: &mut Vec<DimVector>,
    out: &mut Vec<SlopeDecomposition>,
) {
    for e in rest.sub_vectors() {
        if e.is_zero() {
            continue;
        }
        let a = stab.slope(&e).unwrap();
        if bound.is_some_and(|b| a >= b) {
            continue;
        }
        prefix.push(e.clone());
        let r = rest.checked_sub(&e).unwrap();
        if r.is_zero() {
            out.push(SlopeDecomposition { parts: prefix.clone() });
        } else {
            enumerate_rec(&r, Some(a), stab, prefix, out);
        }
        prefix.pop();
    }
}

/// Memoized inversion of the slope-ordered product.
///
/// `sigma[d]` is the coefficient of `t^d` in the semistable series of slope
/// `mu(d)`. `tail(d, b)` sums the twisted products of `sigma` over all
/// decompositions of `d` whose first (largest) slope is `< b`.
struct HnSolver<'a> {
    ctx: &'a Arc<SeriesContext>,
    sigma: HashMap<DimVector, QCoeff>,
    slopes: HashMap<DimVector, Slope>,
    tails: HashMap<(DimVector, Option<Slope>), QCoeff>,
}

impl<'a> HnSolver<'a> {
    fn new(ctx: &'a Arc<SeriesContext>) -> Self {
        HnSolver { ctx, sigma: HashMap::new(), slopes: HashMap::new(), tails: HashMap::new() }
    }

    fn slope(&mut self, d: &DimVector) -> Slope {
        if let Some(a) = self.slopes.get(d) {
            return *a;
        }
        let a = self.ctx.slope(d).expect("nonzero vector");
        self.slopes.insert(d.clone(), a);
        a
    }

    fn sigma(&self, d: &DimVector) -> QCoeff {
        self.sigma.get(d).cloned().unwrap_or_default()
    }

    fn tail(&mut self, d: &DimVector, bound: Option<Slope>) -> QCoeff {
        // the first part carries the largest slope, which is >= mu(d)
        let mu = self.slope(d);
        if bound.is_some_and(|b| b <= mu) {
            return QCoeff::zero();
        }
        let key = (d.clone(), bound);
        if let Some(v) = self.tails.get(&key) {
            return v.clone();
        }
        let mut acc = QCoeff::zero();
        for e in d.sub_vectors() {
            if e.is_zero() {
                continue;
            }
            let a = self.slope(&e);
            if bound.is_some_and(|b| a >= b) {
                continue;
            }
            let se = self.sigma(&e);
            if se.is_zero() {
                continue;
            }
            if e == *d {
                acc += &se;
                continue;
            }
            let rest = d.checked_sub(&e).unwrap();
            let t = self.tail(&rest, Some(a));
            if t.is_zero() {
                continue;
            }
            acc += &self.ctx.apply_twist(&(&se * &t), &e, &rest);
        }
        self.tails.insert(key, acc.clone());
        acc
    }

    fn solve(&mut self, d: &DimVector, total: &QCoeff) {
        let mut corr = QCoeff::zero();
        for e in d.sub_vectors() {
            if e.is_zero() || e == *d {
                continue;
            }
            let se = self.sigma(&e);
            if se.is_zero() {
                continue;
            }
            let a = self.slope(&e);
            let rest = d.checked_sub(&e).unwrap();
            let t = self.tail(&rest, Some(a));
            if t.is_zero() {
                continue;
            }
            corr += &self.ctx.apply_twist(&(&se * &t), &e, &rest);
        }
        let s = total - &corr;
        if !s.is_zero() {
            self.sigma.insert(d.clone(), s);
        }
    }
}

/// Semistable series `S_a = 1 + sum_{d in Lambda_a} sigma_d t^d` for every
/// slope `a` of a vector within truncation.
pub fn hn_semistable_series(ctx: &Arc<SeriesContext>) -> Result<BTreeMap<Slope, SkewSeries>> {
    let total = total_series(ctx)?;
    let mut solver = HnSolver::new(ctx);
    let vectors = ctx.vectors();
    for d in &vectors {
        solver.solve(d, &total.coefficient(d)?);
    }
    let mut out: BTreeMap<Slope, Vec<(DimVector, QCoeff)>> = BTreeMap::new();
    for d in vectors {
        let a = solver.slope(&d);
        let entry = out.entry(a).or_default();
        if let Some(s) = solver.sigma.remove(&d) {
            entry.push((d, s));
        }
    }
    Ok(out
        .into_iter()
        .map(|(a, terms)| (a, SkewSeries::one(ctx).add(&SkewSeries::from_terms(ctx, terms)).unwrap()))
        .collect())
}

/// Product of the slope series in decreasing slope order.
pub fn slope_ordered_product(ctx: &Arc<SeriesContext>, series: &BTreeMap<Slope, SkewSeries>) -> Result<SkewSeries> {
    let factors: Vec<SkewSeries> = series.values().rev().cloned().collect();
    ordered_product(ctx, &factors)
}

/// DT invariant of one dimension vector together with its normalized polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtRecord {
    pub d: DimVector,
    pub slope: Slope,
    /// `DT_d` as a Laurent polynomial in `s`.
    pub dt: LaurentPoly,
    /// `(-s)^{1-<d,d>} DT_d` as a polynomial in `q`; `None` when `DT_d = 0`
    /// or when the conversion fails (see `violation`).
    #[serde(rename = "P")]
    pub p: Option<QPoly>,
    pub stable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

/// Failed conversion of a DT invariant into `N[q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyViolation {
    pub d: DimVector,
    pub value: String,
    pub reason: String,
}

/// `p = (-s)^{1-<d,d>} dt` as an element of `N[q]`; `Ok(None)` for `dt = 0`.
pub fn dt_to_p(q: &Quiver, d: &DimVector, dt: &LaurentPoly) -> std::result::Result<Option<QPoly>, PropertyViolation> {
    if dt.is_zero() {
        return Ok(None);
    }
    let violation = |reason: String| PropertyViolation { d: d.clone(), value: dt.to_string(), reason };
    let dd = q.euler_form(d, d).map_err(|e| violation(e.to_string()))?;
    let shifted = dt.mul(&LaurentPoly::neg_s_pow(1 - dd));
    let p = QPoly::from_laurent_s(&shifted).map_err(|e| violation(e.to_string()))?;
    if p.natural_coeffs().is_none() {
        return Err(violation(format!("coefficients of {p} are not all natural numbers")));
    }
    Ok(Some(p))
}

fn record(q: &Quiver, d: DimVector, slope: Slope, dt: LaurentPoly) -> DtRecord {
    let (p, violation) = match dt_to_p(q, &d, &dt) {
        Ok(p) => (p, None),
        Err(v) => (None, Some(v.reason)),
    };
    DtRecord { stable: !dt.is_zero(), d, slope, dt, p, violation }
}

/// Factors a slope series into `prod_d Phi(t^d)^{∘DT_d}` through its logarithm.
///
/// Records cover every `d` of the given slope within truncation, in
/// increasing weight.
pub fn extract_dt(series: &SkewSeries, slope: &Slope, report: &SymmetryReport) -> Result<Vec<DtRecord>> {
    let ctx = series.context();
    let log = series.log_slope(slope, report)?;
    let s_inv_minus_s = |n: i64| &QCoeff::s_pow(-n) - &QCoeff::s_pow(n);
    let mut dts: BTreeMap<DimVector, QCoeff> = BTreeMap::new();
    let mut out = Vec::new();
    for d in ctx.vectors() {
        if ctx.slope(&d)? != *slope {
            continue;
        }
        let mut acc = log.coefficient(&d)?;
        for n in 2..=d.content() {
            let Some(base) = d.divide(n) else { continue };
            assert_eq!(ctx.slope(&base)?, *slope, "divisor of {d} left the slope ray");
            let Some(prev) = dts.get(&base) else { continue };
            let corr = prev
                .adams(n)
                .div_checked(&s_inv_minus_s(n as i64).mul_integer(n as i64))?;
            acc = &acc - &corr;
        }
        let dt = &acc * &s_inv_minus_s(1);
        let laurent = dt.to_laurent().ok_or_else(|| Error::DtNotLaurent { d: d.0.clone(), value: dt.to_string() })?;
        if !dt.is_zero() {
            dts.insert(d.clone(), dt);
        }
        out.push(record(ctx.quiver(), d, *slope, laurent));
    }
    Ok(out)
}

/// `prod phi_power(d, DT_d)` over the records, in the given order.
pub fn rebuild_from_records(ctx: &Arc<SeriesContext>, records: &[DtRecord]) -> Result<SkewSeries> {
    let factors = records
        .iter()
        .filter(|r| !r.dt.is_zero())
        .map(|r| phi_power(ctx, &DilogSpec { base: r.d.clone(), exponent_poly: r.dt.clone() }))
        .collect::<Result<Vec<_>>>()?;
    ordered_product(ctx, &factors)
}

fn require_symmetry(ctx: &SeriesContext, report: &SymmetryReport) -> Result<()> {
    if !report.holds {
        return Err(Error::SymmetryUnchecked("slope symmetry check failed".into()));
    }
    if report.bound < ctx.truncation() {
        return Err(Error::SymmetryUnchecked(format!(
            "checked up to weight {} but the table runs to {}",
            report.bound,
            ctx.truncation()
        )));
    }
    Ok(())
}

/// Full DT table: records sorted by decreasing slope, then increasing weight.
pub fn dt_table(ctx: &Arc<SeriesContext>, report: &SymmetryReport) -> Result<Vec<DtRecord>> {
    require_symmetry(ctx, report)?;
    let series = hn_semistable_series(ctx)?;
    dt_table_from_series(ctx, &series, report)
}

/// As [`dt_table`], reusing already computed semistable series.
pub fn dt_table_from_series(
    ctx: &Arc<SeriesContext>,
    series: &BTreeMap<Slope, SkewSeries>,
    report: &SymmetryReport,
) -> Result<Vec<DtRecord>> {
    require_symmetry(ctx, report)?;
    let slopes: Vec<(&Slope, &SkewSeries)> = series.iter().rev().collect();
    let per_slope: Vec<Vec<DtRecord>> = slopes
        .into_par_iter()
        .map(|(a, s)| extract_dt(s, a, report))
        .collect::<Result<_>>()?;
    Ok(per_slope.into_iter().flatten().collect())
}

/// Outcome of one property over the whole table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub applicable: bool,
    pub pass: bool,
    pub checked: usize,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyResult {
    pub fn from_witnesses(checked: usize, witnesses: Vec<String>) -> Self {
        PropertyResult { applicable: true, pass: witnesses.is_empty(), checked, witnesses, note: None }
    }

    pub fn not_applicable(note: &str) -> Self {
        PropertyResult { applicable: false, pass: true, checked: 0, witnesses: vec![], note: Some(note.to_string()) }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

/// Checks positivity with degree `1 - <d,d>`, palindromic unimodality and
/// `P = 1` on real roots for every record with nonzero `DT`.
pub fn dt_properties(q: &Quiver, records: &[DtRecord]) -> Result<BTreeMap<String, PropertyResult>> {
    let mut positivity = Vec::new();
    let mut palindromic = Vec::new();
    let mut simplicity = Vec::new();
    let mut checked = 0;
    for r in records {
        if let Some(v) = &r.violation {
            positivity.push(format!("{}: {v}", r.d));
            continue;
        }
        let Some(p) = &r.p else { continue };
        checked += 1;
        let dd = q.euler_form(&r.d, &r.d)?;
        if dd > 1 || p.degree() != Some((1 - dd) as usize) {
            positivity.push(format!("{}: degree of {p} is not {}", r.d, 1 - dd));
        }
        if !p.coeffs()[0].is_one() {
            positivity.push(format!("{}: constant term of {p} is not 1", r.d));
        }
        match is_palindromic_unimodal(p)? {
            (true, true) => {}
            (pal, uni) => palindromic.push(format!("{}: {p} palindromic={pal} unimodal={uni}", r.d)),
        }
        if dd == 1 && !p.is_one() {
            simplicity.push(format!("{}: <d,d> = 1 but P = {p}", r.d));
        }
    }
    Ok(BTreeMap::from([
        ("positivity_degree".to_string(), PropertyResult::from_witnesses(checked, positivity)),
        ("palindromic_unimodal".to_string(), PropertyResult::from_witnesses(checked, palindromic)),
        ("simplicity".to_string(), PropertyResult::from_witnesses(checked, simplicity)),
    ]))
}

/// Monomial where two sides of an identity first disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub monomial: DimVector,
    pub left: String,
    pub right: String,
}

/// Result of comparing two series exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Discrepancy>,
}

impl IdentityCheck {
    pub fn compare(name: &str, left: &SkewSeries, right: &SkewSeries) -> Self {
        let witness = left.first_difference(right).map(|(d, a, b)| Discrepancy {
            monomial: d,
            left: a.to_string(),
            right: b.to_string(),
        });
        IdentityCheck { name: name.to_string(), pass: witness.is_none(), witness }
    }
}

/// Checks `lhs_product = total_series = prod_{a decreasing} S_a`.
pub fn verify_wall_crossing(ctx: &Arc<SeriesContext>) -> Result<Vec<IdentityCheck>> {
    let lhs = lhs_product(ctx)?;
    let total = total_series(ctx)?;
    let hn = slope_ordered_product(ctx, &hn_semistable_series(ctx)?)?;
    Ok(vec![
        IdentityCheck::compare("dilogarithm product = motivic series", &lhs, &total),
        IdentityCheck::compare("motivic series = slope-ordered semistable product", &total, &hn),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motivic::motive_coeff;
    use crate::quiver::{check_slope_symmetry, kronecker_quiver};

    fn dv(v: &[u32]) -> DimVector {
        DimVector(v.to_vec())
    }

    fn kctx(m: i64, n: u32) -> (Arc<SeriesContext>, SymmetryReport) {
        let (q, st) = kronecker_quiver(m).unwrap();
        let rep = check_slope_symmetry(&q, &st, n);
        (SeriesContext::new(q, st, n).unwrap(), rep)
    }

    /// sigma from the literal sum over explicit decompositions.
    fn sigma_by_enumeration(ctx: &Arc<SeriesContext>, d: &DimVector, memo: &mut BTreeMap<DimVector, QCoeff>) -> QCoeff {
        if let Some(v) = memo.get(d) {
            return v.clone();
        }
        let mut s = motive_coeff(ctx.quiver(), d).unwrap();
        for dec in SlopeDecomposition::enumerate(d, ctx.stability()) {
            let parts = dec.parts();
            if parts.len() < 2 {
                continue;
            }
            let mut tw = 0;
            for k in 0..parts.len() {
                for l in k + 1..parts.len() {
                    tw += ctx.antisym(&parts[k], &parts[l]);
                }
            }
            let mut prod = QCoeff::neg_s_pow(tw);
            for p in parts {
                prod = &prod * &sigma_by_enumeration(ctx, p, memo);
            }
            s = &s - &prod;
        }
        memo.insert(d.clone(), s.clone());
        s
    }

    #[test]
    fn memoized_recursion_matches_enumeration() {
        for m in 1..=3 {
            let (ctx, _) = kctx(m, 5);
            let series = hn_semistable_series(&ctx).unwrap();
            let mut memo = BTreeMap::new();
            for d in ctx.vectors() {
                let a = ctx.slope(&d).unwrap();
                let got = series[&a].coefficient(&d).unwrap();
                assert_eq!(got, sigma_by_enumeration(&ctx, &d, &mut memo), "m={m} d={d}");
            }
        }
    }

    #[test]
    fn decompositions_are_validated() {
        let (_, st) = kronecker_quiver(2).unwrap();
        assert!(SlopeDecomposition::new(vec![dv(&[0, 1]), dv(&[1, 0])], &st).is_ok());
        assert!(SlopeDecomposition::new(vec![dv(&[1, 0]), dv(&[0, 1])], &st).is_err());
        assert!(SlopeDecomposition::new(vec![dv(&[1, 1]), dv(&[2, 2])], &st).is_err());
        let all = SlopeDecomposition::enumerate(&dv(&[1, 1]), &st);
        // (1,1) and (0,1)+(1,0)
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|d| d.total() == dv(&[1, 1])));
    }

    #[test]
    fn single_slope_part_is_total_coefficient() {
        // (1,0) has no proper decomposition with decreasing slopes
        let (ctx, _) = kctx(3, 4);
        let series = hn_semistable_series(&ctx).unwrap();
        let a = ctx.slope(&dv(&[1, 0])).unwrap();
        assert_eq!(
            series[&a].coefficient(&dv(&[1, 0])).unwrap(),
            motive_coeff(ctx.quiver(), &dv(&[1, 0])).unwrap()
        );
    }

    #[test]
    fn pentagon_table() {
        let (ctx, rep) = kctx(1, 6);
        let table = dt_table(&ctx, &rep).unwrap();
        let nonzero: Vec<_> = table.iter().filter(|r| r.p.is_some()).map(|r| r.d.clone()).collect();
        assert_eq!(nonzero, vec![dv(&[0, 1]), dv(&[1, 1]), dv(&[1, 0])]);
        assert!(table.iter().filter(|r| r.p.is_some()).all(|r| r.p == Some(QPoly::one())));
        assert!(table.iter().all(|r| r.violation.is_none()));
    }

    #[test]
    fn m2_center() {
        let (ctx, rep) = kctx(2, 8);
        let table = dt_table(&ctx, &rep).unwrap();
        let get = |d: DimVector| table.iter().find(|r| r.d == d).unwrap().clone();
        let center = get(dv(&[1, 1]));
        assert_eq!(center.dt, LaurentPoly::from_ints(-1, &[-1, 0, -1]));
        assert_eq!(center.p, Some(QPoly::from_ints(&[1, 1])));
        for k in 2..=4 {
            assert!(get(dv(&[k, k])).dt.is_zero());
        }
    }

    #[test]
    fn dt_to_p_examples() {
        let (q, _) = kronecker_quiver(2).unwrap();
        assert_eq!(dt_to_p(&q, &dv(&[1, 0]), &LaurentPoly::one()), Ok(Some(QPoly::one())));
        let dt = LaurentPoly::from_ints(-1, &[-1, 0, -1]);
        assert_eq!(dt_to_p(&q, &dv(&[1, 1]), &dt), Ok(Some(QPoly::from_ints(&[1, 1]))));
        assert_eq!(dt_to_p(&q, &dv(&[1, 1]), &LaurentPoly::zero()), Ok(None));
        // odd power left over
        assert!(dt_to_p(&q, &dv(&[1, 0]), &LaurentPoly::from_ints(1, &[1])).is_err());
        // negative coefficient
        assert!(dt_to_p(&q, &dv(&[1, 0]), &LaurentPoly::from_ints(0, &[-1])).is_err());
    }

    #[test]
    fn extract_plain_dilog() {
        let (ctx, rep) = kctx(3, 8);
        let d = dv(&[1, 1]);
        let a = ctx.slope(&d).unwrap();
        let phi = crate::motivic::phi_series(&ctx, &d).unwrap();
        let recs = extract_dt(&phi, &a, &rep).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[0].dt, LaurentPoly::one());
        assert!(recs[1..].iter().all(|r| r.dt.is_zero()));
    }

    #[test]
    fn table_requires_symmetry() {
        let q = Quiver::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let st = Stability::new(vec![0, 0], vec![1, 1]).unwrap();
        let rep = check_slope_symmetry(&q, &st, 3);
        let ctx = SeriesContext::new(q, st, 3).unwrap();
        assert!(matches!(dt_table(&ctx, &rep), Err(Error::SymmetryUnchecked(_))));
        // the HN series themselves need no symmetry
        let series = hn_semistable_series(&ctx).unwrap();
        assert_eq!(slope_ordered_product(&ctx, &series).unwrap(), total_series(&ctx).unwrap());
    }
}
