//! Quivers, Euler forms and slope stability.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dimension vector, one natural number per vertex. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The `i`-th unit vector in dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if it stays in the positive cone.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scale(&self, k: u32) -> Self {
        DimVector(self.0.iter().map(|a| a * k).collect())
    }

    /// `self / n` if every entry is divisible by `n`.
    pub fn divide(&self, n: u32) -> Option<Self> {
        self.0
            .iter()
            .all(|a| a % n == 0)
            .then(|| DimVector(self.0.iter().map(|a| a / n).collect()))
    }

    /// gcd of the entries.
    pub fn content(&self) -> u32 {
        self.0.iter().fold(0, |g, &a| num_integer::gcd(g, a))
    }

    /// All vectors `e` with `0 <= e <= self` componentwise.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &d in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
            for prefix in &out {
                for x in 0..=d {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(DimVector).collect()
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A finite acyclic quiver: `arrows` are `(source, target)` pairs, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidQuiver { field: "vertices", reason: "must be at least 1".into() });
        }
        if let Some(&(s, t)) = arrows.iter().find(|(s, t)| *s >= vertex_count || *t >= vertex_count) {
            return Err(Error::InvalidQuiver {
                field: "arrows",
                reason: format!("arrow [{s},{t}] refers to a vertex outside 0..{vertex_count}"),
            });
        }
        admissible_order(vertex_count, &arrows)?;
        Ok(Quiver { vertex_count, arrows })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    fn check(&self, d: &DimVector) -> Result<()> {
        if d.len() != self.vertex_count {
            return Err(Error::DimensionMismatch { expected: self.vertex_count, got: d.len() });
        }
        Ok(())
    }

    /// `<d,e> = sum_i d_i e_i - sum_{a: i->j} d_i e_j`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        self.check(d)?;
        self.check(e)?;
        let diag: i64 = d.0.iter().zip(&e.0).map(|(&a, &b)| a as i64 * b as i64).sum();
        let arrows: i64 = self.arrows.iter().map(|&(i, j)| d.0[i] as i64 * e.0[j] as i64).sum();
        Ok(diag - arrows)
    }

    /// `<d,e> - <e,d>`.
    pub fn antisym(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        Ok(self.euler_form(d, e)? - self.euler_form(e, d)?)
    }

    /// Matrix of the antisymmetrized form on unit vectors.
    pub fn antisym_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0i64; n]; n];
        for &(i, j) in &self.arrows {
            // <e_i, e_j> picks up -1 for each arrow i -> j
            m[i][j] -= 1;
            m[j][i] += 1;
        }
        m
    }

    /// Vertex order with every arrow pointing from a later to an earlier vertex.
    pub fn admissible_vertex_order(&self) -> Result<Vec<usize>> {
        admissible_order(self.vertex_count, &self.arrows)
    }
}

/// Topological order in which every arrow `i -> j` has `j` placed before `i`;
/// ties broken by smallest index.
pub fn admissible_order(vertex_count: usize, arrows: &[(usize, usize)]) -> Result<Vec<usize>> {
    // pending[i]: number of arrow targets of i that are not yet placed
    let mut pending = vec![0usize; vertex_count];
    let mut sources_into = vec![Vec::new(); vertex_count];
    for &(s, t) in arrows {
        pending[s] += 1;
        sources_into[t].push(s);
    }
    let mut placed = vec![false; vertex_count];
    let mut order = Vec::with_capacity(vertex_count);
    while order.len() < vertex_count {
        let Some(v) = (0..vertex_count).find(|&v| !placed[v] && pending[v] == 0) else {
            return Err(Error::Cycle(find_cycle(vertex_count, arrows, &placed)));
        };
        placed[v] = true;
        order.push(v);
        for &s in &sources_into[v] {
            pending[s] -= 1;
        }
    }
    Ok(order)
}

/// Walks arrows among unplaced vertices until a vertex repeats.
fn find_cycle(vertex_count: usize, arrows: &[(usize, usize)], placed: &[bool]) -> Vec<usize> {
    let start = (0..vertex_count).find(|&v| !placed[v]).unwrap();
    let mut path = vec![start];
    let mut cur = start;
    loop {
        let next = arrows
            .iter()
            .find(|&&(s, t)| s == cur && !placed[t])
            .map(|&(_, t)| t)
            .expect("unplaced vertex has an unplaced successor");
        if let Some(pos) = path.iter().position(|&v| v == next) {
            return path[pos..].to_vec();
        }
        path.push(next);
        cur = next;
    }
}

/// Exact slope value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope(pub Ratio<i64>);

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Ratio<i64>>().map(Slope).map_err(serde::de::Error::custom)
    }
}

/// Linear functions `theta`, `kappa` with `kappa > 0` on nonzero vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stability {
    theta: Vec<i64>,
    kappa: Vec<i64>,
}

impl Stability {
    pub fn new(theta: Vec<i64>, kappa: Vec<i64>) -> Result<Self> {
        if theta.len() != kappa.len() {
            return Err(Error::InvalidQuiver {
                field: "theta",
                reason: format!("has {} entries, kappa has {}", theta.len(), kappa.len()),
            });
        }
        if let Some(k) = kappa.iter().find(|&&k| k < 1) {
            return Err(Error::InvalidQuiver {
                field: "kappa",
                reason: format!("every entry must be >= 1, found {k}"),
            });
        }
        Ok(Stability { theta, kappa })
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn kappa(&self) -> &[i64] {
        &self.kappa
    }

    pub fn theta_of(&self, d: &DimVector) -> i64 {
        d.0.iter().zip(&self.theta).map(|(&a, &t)| a as i64 * t).sum()
    }

    pub fn kappa_of(&self, d: &DimVector) -> i64 {
        d.0.iter().zip(&self.kappa).map(|(&a, &k)| a as i64 * k).sum()
    }

    /// `theta(d) / kappa(d)`.
    pub fn slope(&self, d: &DimVector) -> Result<Slope> {
        if d.len() != self.kappa.len() {
            return Err(Error::DimensionMismatch { expected: self.kappa.len(), got: d.len() });
        }
        if d.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Slope(Ratio::new(self.theta_of(d), self.kappa_of(d))))
    }

    /// All nonzero vectors of weight at most `n`, sorted by weight, then lexicographically.
    pub fn vectors_up_to(&self, n: u32) -> Vec<DimVector> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.kappa.len()];
        self.enumerate(0, n as i64, &mut cur, &mut out);
        out.retain(|d| !d.is_zero());
        out.sort_by(|a, b| self.kappa_of(a).cmp(&self.kappa_of(b)).then_with(|| a.cmp(b)));
        out
    }

    fn enumerate(&self, i: usize, budget: i64, cur: &mut Vec<u32>, out: &mut Vec<DimVector>) {
        if i == cur.len() {
            out.push(DimVector(cur.clone()));
            return;
        }
        let mut x = 0;
        while x as i64 * self.kappa[i] <= budget {
            cur[i] = x;
            self.enumerate(i + 1, budget - x as i64 * self.kappa[i], cur, out);
            x += 1;
        }
        cur[i] = 0;
    }
}

/// Outcome of [`check_slope_symmetry`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `<,>` symmetric on every `Lambda_a` among vectors of weight `<= bound`.
    pub holds: bool,
    pub bound: u32,
    /// A pair of equal slope with nonzero antisymmetrized form.
    pub witness: Option<(DimVector, DimVector)>,
    /// `<d,e> - <e,d> = kappa(d) theta(e) - kappa(e) theta(d)` on unit vectors, literally.
    pub linear_criterion_exact: bool,
    /// `lambda` with `<d,e> - <e,d> = lambda (kappa(d) theta(e) - kappa(e) theta(d))` on
    /// unit vectors, if one exists. Any such `lambda` forces symmetry on every slope ray.
    pub linear_criterion_factor: Option<String>,
}

/// Checks symmetry of the Euler form on each `Lambda_a`, up to weight `n`,
/// and evaluates the linear criterion on unit vectors.
pub fn check_slope_symmetry(q: &Quiver, stab: &Stability, n: u32) -> SymmetryReport {
    let mut by_slope: BTreeMap<Slope, Vec<DimVector>> = BTreeMap::new();
    for d in stab.vectors_up_to(n) {
        let a = stab.slope(&d).expect("nonzero vector");
        by_slope.entry(a).or_default().push(d);
    }
    let mut witness = None;
    'outer: for group in by_slope.values() {
        for (i, d) in group.iter().enumerate() {
            for e in &group[i + 1..] {
                if q.antisym(d, e).unwrap() != 0 {
                    witness = Some((d.clone(), e.clone()));
                    break 'outer;
                }
            }
        }
    }

    let a = q.antisym_matrix();
    let nv = q.vertex_count();
    let crit = |i: usize, j: usize| stab.kappa[i] * stab.theta[j] - stab.kappa[j] * stab.theta[i];
    let exact = (0..nv).all(|i| (0..nv).all(|j| a[i][j] == crit(i, j)));
    let mut factor: Option<Ratio<i64>> = None;
    let mut proportional = true;
    for i in 0..nv {
        for j in 0..nv {
            let (lhs, rhs) = (a[i][j], crit(i, j));
            if rhs == 0 {
                if lhs != 0 {
                    proportional = false;
                }
                continue;
            }
            let r = Ratio::new(lhs, rhs);
            match factor {
                None => factor = Some(r),
                Some(f) if f != r => proportional = false,
                _ => {}
            }
        }
    }
    let factor = proportional.then(|| factor.unwrap_or_else(Ratio::zero).to_string());

    SymmetryReport {
        holds: witness.is_none(),
        bound: n,
        witness,
        linear_criterion_exact: exact,
        linear_criterion_factor: factor,
    }
}

/// `K_m`: vertices 0 and 1, `m` arrows `1 -> 0`, `theta = (-m, m)`, `kappa = (1, 1)`.
pub fn kronecker_quiver(m: i64) -> Result<(Quiver, Stability)> {
    if m < 1 {
        return Err(Error::KroneckerArity(m));
    }
    let q = Quiver::new(2, vec![(1, 0); m as usize])?;
    let stab = Stability::new(vec![-m, m], vec![1, 1])?;
    Ok((q, stab))
}

/// On-disk quiver description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverFile {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
    pub theta: Vec<i64>,
    pub kappa: Vec<i64>,
}

impl QuiverFile {
    pub fn from_parts(q: &Quiver, stab: &Stability) -> Self {
        QuiverFile {
            vertices: q.vertex_count(),
            arrows: q.arrows().iter().map(|&(s, t)| [s, t]).collect(),
            theta: stab.theta().to_vec(),
            kappa: stab.kappa().to_vec(),
        }
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, serde_json::Value>, name: &'static str) -> Result<&'a serde_json::Value> {
    obj.get(name).ok_or(Error::InvalidQuiver { field: name, reason: "missing".into() })
}

fn int_list(v: &serde_json::Value, name: &'static str) -> Result<Vec<i64>> {
    let bad = |r: &str| Error::InvalidQuiver { field: name, reason: r.to_string() };
    v.as_array()
        .ok_or_else(|| bad("expected an array of integers"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| bad(&format!("`{x}` is not an integer"))))
        .collect()
}

/// Parses and validates a quiver JSON document; errors name the offending field.
pub fn parse_quiver_json(text: &str) -> Result<(Quiver, Stability)> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidQuiver { field: "document", reason: e.to_string() })?;
    let obj = value
        .as_object()
        .ok_or(Error::InvalidQuiver { field: "document", reason: "expected a JSON object".into() })?;
    let vertices = field(obj, "vertices")?
        .as_u64()
        .ok_or(Error::InvalidQuiver { field: "vertices", reason: "expected a nonnegative integer".into() })?
        as usize;
    let arrows_raw = field(obj, "arrows")?
        .as_array()
        .ok_or(Error::InvalidQuiver { field: "arrows", reason: "expected an array of [source, target] pairs".into() })?;
    let mut arrows = Vec::with_capacity(arrows_raw.len());
    for a in arrows_raw {
        let pair = a.as_array().filter(|p| p.len() == 2).and_then(|p| Some((p[0].as_u64()?, p[1].as_u64()?)));
        match pair {
            Some((s, t)) => arrows.push((s as usize, t as usize)),
            None => {
                return Err(Error::InvalidQuiver { field: "arrows", reason: format!("`{a}` is not a [source, target] pair") })
            }
        }
    }
    let theta = int_list(field(obj, "theta")?, "theta")?;
    let kappa = int_list(field(obj, "kappa")?, "kappa")?;
    if theta.len() != vertices {
        return Err(Error::InvalidQuiver { field: "theta", reason: format!("expected {vertices} entries, found {}", theta.len()) });
    }
    if kappa.len() != vertices {
        return Err(Error::InvalidQuiver { field: "kappa", reason: format!("expected {vertices} entries, found {}", kappa.len()) });
    }
    let q = Quiver::new(vertices, arrows)?;
    let stab = Stability::new(theta, kappa)?;
    Ok((q, stab))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector(v.to_vec())
    }

    #[test]
    fn euler_form_kronecker() {
        let (q, _) = kronecker_quiver(3).unwrap();
        assert_eq!(q.euler_form(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), 0);
        assert_eq!(q.euler_form(&dv(&[0, 1]), &dv(&[1, 0])).unwrap(), -3);
        assert_eq!(q.euler_form(&dv(&[0, 0]), &dv(&[4, 7])).unwrap(), 0);
        for (a, b) in [(1u32, 1u32), (2, 3), (5, 1)] {
            let (a_, b_) = (a as i64, b as i64);
            assert_eq!(q.euler_form(&dv(&[a, b]), &dv(&[a, b])).unwrap(), a_ * a_ + b_ * b_ - 3 * a_ * b_);
        }
        assert_eq!(
            q.euler_form(&dv(&[1]), &dv(&[1, 0])),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn antisym_examples() {
        for m in 1..5 {
            let (q, _) = kronecker_quiver(m).unwrap();
            assert_eq!(q.antisym(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), m);
            assert_eq!(q.antisym(&dv(&[2, 3]), &dv(&[2, 3])).unwrap(), 0);
            assert_eq!(q.antisym(&dv(&[0, 1]), &dv(&[1, 0])).unwrap(), -m);
        }
    }

    #[test]
    fn vertex_orders() {
        let (k, _) = kronecker_quiver(2).unwrap();
        assert_eq!(k.admissible_vertex_order().unwrap(), vec![0, 1]);
        let free = Quiver::new(3, vec![]).unwrap();
        assert_eq!(free.admissible_vertex_order().unwrap(), vec![0, 1, 2]);
        let path = Quiver::new(3, vec![(2, 1), (1, 0)]).unwrap();
        assert_eq!(path.admissible_vertex_order().unwrap(), vec![0, 1, 2]);
        let rev = Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(rev.admissible_vertex_order().unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn cycles_are_named() {
        let err = admissible_order(3, &[(0, 1), (1, 2), (2, 1)]).unwrap_err();
        assert_eq!(err, Error::Cycle(vec![1, 2]));
        assert!(matches!(Quiver::new(1, vec![(0, 0)]), Err(Error::Cycle(_))));
    }

    #[test]
    fn slopes() {
        let (_, st) = kronecker_quiver(3).unwrap();
        assert_eq!(st.slope(&dv(&[1, 1])).unwrap(), Slope(Ratio::from_integer(0)));
        assert_eq!(st.slope(&dv(&[0, 1])).unwrap(), Slope(Ratio::from_integer(3)));
        assert_eq!(st.slope(&dv(&[2, 4])).unwrap(), st.slope(&dv(&[1, 2])).unwrap());
        assert_eq!(st.slope(&dv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn symmetry_checks() {
        let (q, st) = kronecker_quiver(3).unwrap();
        let r = check_slope_symmetry(&q, &st, 10);
        assert!(r.holds);
        assert!(!r.linear_criterion_exact);
        assert_eq!(r.linear_criterion_factor.as_deref(), Some("1/2"));

        let one = Quiver::new(1, vec![]).unwrap();
        assert!(check_slope_symmetry(&one, &Stability::new(vec![5], vec![2]).unwrap(), 10).holds);

        let q2 = Quiver::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let st2 = Stability::new(vec![0, 0], vec![1, 1]).unwrap();
        let r = check_slope_symmetry(&q2, &st2, 4);
        assert!(!r.holds);
        let (d, e) = r.witness.unwrap();
        assert_ne!(q2.antisym(&d, &e).unwrap(), 0);
        assert_eq!(q2.antisym(&dv(&[1, 0]), &dv(&[0, 1])).unwrap(), -2);
        assert_eq!(r.linear_criterion_factor, None);
    }

    #[test]
    fn kronecker_construction() {
        assert_eq!(kronecker_quiver(0), Err(Error::KroneckerArity(0)));
        let (q, st) = kronecker_quiver(2).unwrap();
        assert_eq!(q.arrows(), &[(1, 0), (1, 0)]);
        assert_eq!(st.theta(), &[-2, 2]);
        assert_eq!(st.kappa(), &[1, 1]);
    }

    #[test]
    fn stability_validation() {
        assert!(matches!(Stability::new(vec![0, 0], vec![1, 0]), Err(Error::InvalidQuiver { field: "kappa", .. })));
    }

    #[test]
    fn vectors_by_weight() {
        let st = Stability::new(vec![0, 0], vec![1, 2]).unwrap();
        let v = st.vectors_up_to(2);
        assert_eq!(v, vec![dv(&[1, 0]), dv(&[0, 1]), dv(&[2, 0])]);
    }

    #[test]
    fn quiver_json() {
        let text = r#"{"vertices": 2, "arrows": [[1,0],[1,0],[1,0]], "theta": [-3,3], "kappa": [1,1]}"#;
        let (q, st) = parse_quiver_json(text).unwrap();
        assert_eq!((q, st), kronecker_quiver(3).unwrap());

        let missing = r#"{"vertices": 2, "arrows": [], "theta": [0,0]}"#;
        assert!(matches!(parse_quiver_json(missing), Err(Error::InvalidQuiver { field: "kappa", .. })));
        let bad_arrow = r#"{"vertices": 2, "arrows": [[0,5]], "theta": [0,0], "kappa": [1,1]}"#;
        assert!(matches!(parse_quiver_json(bad_arrow), Err(Error::InvalidQuiver { field: "arrows", .. })));
        let short = r#"{"vertices": 2, "arrows": [], "theta": [0], "kappa": [1,1]}"#;
        assert!(matches!(parse_quiver_json(short), Err(Error::InvalidQuiver { field: "theta", .. })));
        let cyc = r#"{"vertices": 2, "arrows": [[0,1],[1,0]], "theta": [0,0], "kappa": [1,1]}"#;
        assert!(matches!(parse_quiver_json(cyc), Err(Error::Cycle(_))));
    }
}
