//! Tropical polynomials over the max-plus semiring.
//!
//! A polynomial is stored by its coefficients in the log (max-plus) domain,
//! index 0 first, with `-inf` standing for an absent monomial. Max-times
//! values (coefficient moduli, tropical roots as nonnegative reals) are
//! obtained through `exp`/`ln` at the API boundary.
//!
//! The Newton polygon is the upper concave hull of `{(k, a_k) : a_k > -inf}`.
//! Tropical roots are the negated slopes of its segments, each counted with
//! the horizontal length of the segment. When the lowest finite index `k0`
//! is positive the polynomial has the factor `X^k0`, which we record as the
//! root `-inf` (max-times root `0`) with multiplicity `k0`; this keeps the
//! total multiplicity equal to the degree.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on log values for collinearity and saturation tests.
pub const DEFAULT_SATURATION_TOL: f64 = 1e-9;

/// Relative tolerance (log domain) under which adjacent roots are merged.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial", into = "RawPolynomial")]
pub struct TropicalPolynomial {
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawPolynomial(#[serde(with = "crate::serde_ext::vec")] Vec<f64>);

impl TryFrom<RawPolynomial> for TropicalPolynomial {
    type Error = Error;
    fn try_from(raw: RawPolynomial) -> Result<Self> {
        TropicalPolynomial::new(raw.0)
    }
}

impl From<TropicalPolynomial> for RawPolynomial {
    fn from(p: TropicalPolynomial) -> Self {
        RawPolynomial(p.coeffs)
    }
}

impl TropicalPolynomial {
    /// Builds a polynomial from max-plus coefficients. Trailing `-inf`
    /// entries are dropped so that the last stored coefficient is finite.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if let Some(x) = coeffs.iter().find(|x| x.is_nan() || **x == f64::INFINITY) {
            return Err(Error::invalid(format!("coefficient {x} is not an extended real")));
        }
        while coeffs.last() == Some(&f64::NEG_INFINITY) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial has no finite coefficient"));
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial from max-times (nonnegative) coefficients.
    pub fn from_max_times(coeffs: &[f64]) -> Result<Self> {
        if let Some(x) = coeffs.iter().find(|x| !(**x >= 0.0)) {
            return Err(Error::invalid(format!("max-times coefficient {x} is negative")));
        }
        Self::new(coeffs.iter().map(|&x| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY }).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading coefficient `a_n` (finite by construction).
    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    /// Lowest index with a finite coefficient.
    pub fn lowest_finite(&self) -> usize {
        self.coeffs.iter().position(|x| x.is_finite()).expect("at least one finite coefficient")
    }

    /// Coefficients as max-times values.
    pub fn max_times_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|x| x.exp()).collect()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate(self, x)
    }

    pub fn newton_polygon(&self) -> NewtonPolygon {
        newton_polygon(self)
    }

    pub fn roots(&self) -> RootMultiset {
        tropical_roots(self)
    }

    /// The polynomial whose coefficients are the concavified ones.
    pub fn concavification(&self) -> TropicalPolynomial {
        TropicalPolynomial { coeffs: self.newton_polygon().concavified }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Hull vertices `(index, value)` in increasing index order. Collinear
    /// intermediate points are not vertices.
    pub vertices: Vec<(usize, f64)>,
    /// Values of the concave envelope at every index `0..=n`; `-inf` below
    /// the lowest finite index.
    #[serde(with = "crate::serde_ext::vec")]
    pub concavified: Vec<f64>,
    /// Indices where the coefficient meets the envelope.
    pub saturated: BTreeSet<usize>,
}

impl NewtonPolygon {
    pub fn is_saturated(&self, k: usize) -> bool {
        self.saturated.contains(&k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    /// Max-plus value; `-inf` for the root at max-times zero.
    #[serde(with = "crate::serde_ext")]
    pub value: f64,
    pub multiplicity: usize,
}

/// Tropical roots, strictly decreasing in value, with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootMultiset {
    entries: Vec<Root>,
}

impl RootMultiset {
    /// Builds a multiset from `(value, multiplicity)` pairs in any order,
    /// merging values closer than `merge_tol` (relative, log domain).
    pub fn from_pairs(mut pairs: Vec<(f64, usize)>, merge_tol: f64) -> Self {
        pairs.retain(|&(_, m)| m > 0);
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut entries: Vec<Root> = Vec::with_capacity(pairs.len());
        for (value, multiplicity) in pairs {
            if let Some(last) = entries.last_mut() {
                if values_close(last.value, value, merge_tol) {
                    if value.is_finite() {
                        let total = (last.multiplicity + multiplicity) as f64;
                        last.value = (last.value * last.multiplicity as f64
                            + value * multiplicity as f64)
                            / total;
                    }
                    last.multiplicity += multiplicity;
                    continue;
                }
            }
            entries.push(Root { value, multiplicity });
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[Root] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|r| r.multiplicity).sum()
    }

    /// Root values repeated by multiplicity, nonincreasing (max-plus).
    pub fn values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    /// Root values repeated by multiplicity as max-times numbers.
    pub fn max_times_values(&self) -> Vec<f64> {
        self.values().into_iter().map(f64::exp).collect()
    }

    /// `s[k] = α_1 + ... + α_k` in the log domain, for `k = 0..=n`.
    pub fn log_prefix_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut acc = 0.0;
        for v in self.values() {
            acc += v;
            out.push(acc);
        }
        out
    }

    /// Max-times prefix products `γ_1 ⋯ γ_k` for `k = 0..=n`.
    pub fn prefix_products(&self) -> Vec<f64> {
        self.log_prefix_sums().into_iter().map(f64::exp).collect()
    }

    /// Largest root (max-plus).
    pub fn largest(&self) -> f64 {
        self.entries.first().map_or(f64::NEG_INFINITY, |r| r.value)
    }

    /// Same multiset as `other`: equal multiplicities, values within `rel_tol`.
    pub fn approx_eq(&self, other: &RootMultiset, rel_tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| {
                a.multiplicity == b.multiplicity && values_close(a.value, b.value, rel_tol)
            })
    }
}

fn values_close(a: f64, b: f64, rel_tol: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0)
}

/// `max_k (a_k + k x)`; at `x = -inf` this is `a_0`.
pub fn evaluate(p: &TropicalPolynomial, x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return p.coeffs[0];
    }
    p.coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_finite())
        .map(|(k, &a)| a + k as f64 * x)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn newton_polygon(p: &TropicalPolynomial) -> NewtonPolygon {
    newton_polygon_with_tol(p, DEFAULT_SATURATION_TOL)
}

/// Upper hull by a monotone chain in index order. A point within `tol` of the
/// chord through its neighbours is dropped from the vertex list.
pub fn newton_polygon_with_tol(p: &TropicalPolynomial, tol: f64) -> NewtonPolygon {
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for (k, &a) in p.coeffs.iter().enumerate() {
        if !a.is_finite() {
            continue;
        }
        while hull.len() >= 2 {
            let (xa, va) = hull[hull.len() - 2];
            let (xb, vb) = hull[hull.len() - 1];
            let chord = va + (a - va) * (xb - xa) as f64 / (k - xa) as f64;
            if vb <= chord + tol {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((k, a));
    }

    let n = p.degree();
    let mut concavified = vec![f64::NEG_INFINITY; n + 1];
    concavified[hull[0].0] = hull[0].1;
    for w in hull.windows(2) {
        let ((x0, v0), (x1, v1)) = (w[0], w[1]);
        let slope = (v1 - v0) / (x1 - x0) as f64;
        for (k, c) in concavified.iter_mut().enumerate().take(x1).skip(x0 + 1) {
            *c = v0 + slope * (k - x0) as f64;
        }
        concavified[x1] = v1;
    }

    let saturated = p
        .coeffs
        .iter()
        .zip(&concavified)
        .enumerate()
        .filter(|(_, (a, c))| a.is_finite() && **a >= **c - tol)
        .map(|(k, _)| k)
        .collect();

    NewtonPolygon { vertices: hull, concavified, saturated }
}

pub fn tropical_roots(p: &TropicalPolynomial) -> RootMultiset {
    tropical_roots_with_tol(p, DEFAULT_SATURATION_TOL, DEFAULT_MERGE_TOL)
}

pub fn tropical_roots_with_tol(p: &TropicalPolynomial, sat_tol: f64, merge_tol: f64) -> RootMultiset {
    roots_from_polygon(&newton_polygon_with_tol(p, sat_tol), merge_tol)
}

/// One root per hull segment: value `-slope`, multiplicity the segment
/// length; plus `-inf` with multiplicity equal to the lowest finite index.
pub fn roots_from_polygon(poly: &NewtonPolygon, merge_tol: f64) -> RootMultiset {
    let mut pairs: Vec<(f64, usize)> = poly
        .vertices
        .windows(2)
        .map(|w| {
            let ((x0, v0), (x1, v1)) = (w[0], w[1]);
            (-(v1 - v0) / (x1 - x0) as f64, x1 - x0)
        })
        .collect();
    let k0 = poly.vertices[0].0;
    if k0 > 0 {
        pairs.push((f64::NEG_INFINITY, k0));
    }
    RootMultiset::from_pairs(pairs, merge_tol)
}

/// The max-plus relative `p⁺ = Log p^×`: entrywise `ln |a_k|`, `ln 0 = -inf`.
pub fn max_times_relative(coeffs: &[Complex64]) -> Result<TropicalPolynomial> {
    if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("polynomial coefficients must be finite"));
    }
    if coeffs.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::invalid("zero polynomial"));
    }
    TropicalPolynomial::new(
        coeffs
            .iter()
            .map(|z| {
                let m = z.norm();
                if m > 0.0 { m.ln() } else { f64::NEG_INFINITY }
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const NEG: f64 = f64::NEG_INFINITY;

    fn poly(c: &[f64]) -> TropicalPolynomial {
        TropicalPolynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn newton_polygon_of_figure_example() {
        let p = poly(&[1.0, 2.0, 0.0, -1.0]);
        let np = p.newton_polygon();
        assert_eq!(np.vertices, vec![(0, 1.0), (1, 2.0), (3, -1.0)]);
        assert_eq!(np.concavified, vec![1.0, 2.0, 0.5, -1.0]);
        assert_eq!(np.saturated, BTreeSet::from([0, 1, 3]));
    }

    #[test]
    fn constant_polynomial_hull() {
        let np = poly(&[0.0]).newton_polygon();
        assert_eq!(np.vertices, vec![(0, 0.0)]);
        assert_eq!(np.saturated, BTreeSet::from([0]));
        assert_eq!(poly(&[0.0]).roots().total_multiplicity(), 0);
    }

    #[test]
    fn flat_hull_interpolates_gap() {
        let np = poly(&[0.0, NEG, 0.0]).newton_polygon();
        assert_eq!(np.vertices, vec![(0, 0.0), (2, 0.0)]);
        assert_eq!(np.concavified[1], 0.0);
        assert_eq!(np.saturated, BTreeSet::from([0, 2]));
    }

    #[test]
    fn collinear_points_are_saturated_not_vertices() {
        let np = poly(&[0.0, 1.0, 2.0]).newton_polygon();
        assert_eq!(np.vertices, vec![(0, 0.0), (2, 2.0)]);
        assert_eq!(np.saturated, BTreeSet::from([0, 1, 2]));
        let r = poly(&[0.0, 1.0, 2.0]).roots();
        assert_eq!(r.entries(), &[Root { value: -1.0, multiplicity: 2 }]);
    }

    #[test]
    fn roots_of_figure_example() {
        let r = poly(&[1.0, 2.0, 0.0, -1.0]).roots();
        assert_eq!(
            r.entries(),
            &[Root { value: 1.5, multiplicity: 2 }, Root { value: -1.0, multiplicity: 1 }]
        );
    }

    #[test]
    fn monomial_has_root_at_minus_infinity() {
        let r = poly(&[NEG, NEG, 0.0]).roots();
        assert_eq!(r.entries(), &[Root { value: NEG, multiplicity: 2 }]);
        assert_eq!(r.max_times_values(), vec![0.0, 0.0]);
    }

    #[test]
    fn max_times_roots_of_quadratic() {
        // z^2 - 3z + 2: hull of (0, ln 2), (1, ln 3), (2, 0)
        let c = |x: f64| Complex64::new(x, 0.0);
        let p = max_times_relative(&[c(2.0), c(-3.0), c(1.0)]).unwrap();
        let r = p.roots().max_times_values();
        assert_abs_diff_eq!(r[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn evaluation_examples() {
        let p = poly(&[1.0, 2.0, 0.0, -1.0]);
        assert_eq!(p.evaluate(0.0), 2.0);
        assert_eq!(p.evaluate(1.5), 3.5);
        assert_eq!(poly(&[0.0]).evaluate(17.0), 0.0);
        assert_eq!(p.evaluate(NEG), 1.0);
    }

    #[test]
    fn max_times_relative_maps_zero_to_minus_infinity() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let p = max_times_relative(&[c(0.0), c(1.0), c(1.0)]).unwrap();
        assert_eq!(p.coeffs(), &[NEG, 0.0, 0.0]);
        let q = max_times_relative(&[c(2.0), c(-3.0), c(1.0)]).unwrap();
        assert_eq!(q.coeffs(), &[2f64.ln(), 3f64.ln(), 0.0]);
        assert!(max_times_relative(&[c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn rejects_invalid_coefficients() {
        assert!(TropicalPolynomial::new(vec![]).is_err());
        assert!(TropicalPolynomial::new(vec![NEG, NEG]).is_err());
        assert!(TropicalPolynomial::new(vec![f64::NAN]).is_err());
        assert_eq!(TropicalPolynomial::new(vec![1.0, NEG]).unwrap().degree(), 0);
    }

    #[test]
    fn json_uses_minus_inf_string() {
        let p = poly(&[NEG, 0.5, 0.0]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["-inf",0.5,0.0]"#);
        let back: TropicalPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    fn coeff_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(
            prop_oneof![4 => -20.0..20.0f64, 1 => Just(NEG)],
            1..12,
        )
        .prop_filter("needs a finite coefficient", |c| c.iter().any(|x| x.is_finite()))
    }

    proptest! {
        #[test]
        fn factorization_matches_evaluation(c in coeff_strategy(), x in -30.0..30.0f64) {
            let p = TropicalPolynomial::new(c).unwrap();
            let roots = p.roots();
            prop_assert_eq!(roots.total_multiplicity(), p.degree());
            let factored = p.leading()
                + roots.values().iter().map(|&a| x.max(a)).sum::<f64>();
            prop_assert!((factored - p.evaluate(x)).abs() <= 1e-12 * (1.0 + factored.abs()));
        }

        #[test]
        fn tropical_vieta(c in coeff_strategy()) {
            let p = TropicalPolynomial::new(c).unwrap();
            let np = p.newton_polygon();
            let sums = p.roots().log_prefix_sums();
            let n = p.degree();
            for k in 1..=n {
                let lhs = np.concavified[n - k];
                let rhs = p.leading() + sums[k];
                if lhs.is_finite() || rhs.is_finite() {
                    prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "k={k}: {lhs} vs {rhs}");
                }
            }
        }

        #[test]
        fn concavification_has_same_function(c in coeff_strategy()) {
            let p = TropicalPolynomial::new(c).unwrap();
            let q = p.concavification();
            let r = p.roots();
            let finite: Vec<f64> = r.values().into_iter().filter(|v| v.is_finite()).collect();
            let lo = finite.iter().cloned().fold(0.0f64, f64::min) - 5.0;
            let hi = finite.iter().cloned().fold(0.0f64, f64::max) + 5.0;
            for i in 0..100 {
                let x = lo + (hi - lo) * i as f64 / 99.0;
                let (a, b) = (p.evaluate(x), q.evaluate(x));
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn hull_is_idempotent(c in coeff_strategy()) {
            let p = TropicalPolynomial::new(c).unwrap();
            let np = p.newton_polygon();
            let again = p.concavification().newton_polygon();
            prop_assert_eq!(np.vertices.len(), again.vertices.len());
            for (a, b) in np.vertices.iter().zip(&again.vertices) {
                prop_assert_eq!(a.0, b.0);
                prop_assert!((a.1 - b.1).abs() <= 1e-12);
            }
            for (a, b) in np.concavified.iter().zip(&again.concavified) {
                prop_assert!(a == b || (a - b).abs() <= 1e-9);
            }
        }

        #[test]
        fn polygon_invariants(c in coeff_strategy()) {
            let p = TropicalPolynomial::new(c).unwrap();
            let np = p.newton_polygon();
            let slopes: Vec<f64> = np.vertices.windows(2)
                .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0) as f64).collect();
            for s in slopes.windows(2) {
                prop_assert!(s[0] > s[1]);
            }
            for (a, c) in p.coeffs().iter().zip(&np.concavified) {
                prop_assert!(*c >= *a - 1e-9);
            }
            prop_assert!(np.is_saturated(p.lowest_finite()));
            prop_assert!(np.is_saturated(p.degree()));
        }
    }
}
