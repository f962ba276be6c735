//! Tropical characteristic polynomial, tropical eigenvalues, tropical traces
//! and tropical exterior powers of a nonnegative (max-times) matrix.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::assignment::{assignment_value, assignment_with_perm, max_cycle_mean};
use crate::combinatorics::{binomial, size_cap, subsets};
use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::trop_poly::{
    newton_polygon_with_tol, roots_from_polygon, NewtonPolygon, RootMultiset, TropicalPolynomial,
    DEFAULT_MERGE_TOL, DEFAULT_SATURATION_TOL,
};

/// How the roots of the tropical characteristic polynomial are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Every coefficient by subset enumeration, then the Newton polygon.
    Coeff,
    /// Breakpoints of `t -> log per_T(M ⊕ e^t I)`, one assignment per evaluation.
    Eval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TropicalSpectrum {
    /// Tropical eigenvalues in the max-plus domain, nonincreasing.
    pub gammas: RootMultiset,
    /// Concavified characteristic polynomial (max-plus coefficients).
    pub charpoly: TropicalPolynomial,
    /// Saturated indices of the characteristic polynomial. The evaluation
    /// route only sees hull vertices, so it reports those.
    pub saturated: BTreeSet<usize>,
    pub method: Method,
}

impl TropicalSpectrum {
    /// γ_1 ≥ … ≥ γ_n as nonnegative reals.
    pub fn max_times(&self) -> Vec<f64> {
        self.gammas.max_times_values()
    }

    /// `γ_1 ⋯ γ_k` for `k = 0..=n`.
    pub fn prefix_products(&self) -> Vec<f64> {
        self.gammas.prefix_products()
    }

    /// Whether the coefficient of `X^(n-k)`, i.e. the k-th tropical trace, is saturated.
    pub fn trace_saturated(&self, k: usize) -> bool {
        let n = self.charpoly.degree();
        k <= n && self.saturated.contains(&(n - k))
    }
}

fn log_submatrix(w: &[f64], n: usize, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    rows.iter().flat_map(|&i| cols.iter().map(move |&j| w[i * n + j])).collect()
}

fn check_order(n: usize, k: usize, allow_zero: bool) -> Result<()> {
    if k > n || (k == 0 && !allow_zero) {
        return Err(Error::invalid(format!("order k = {k} outside the valid range for n = {n}")));
    }
    Ok(())
}

/// `log tr^k_T M`, with `log tr^0_T = 0`.
pub fn log_tropical_trace(m: &NonnegMatrix, k: usize) -> Result<f64> {
    let n = m.n();
    check_order(n, k, true)?;
    let w = m.log();
    Ok(subsets(n, k)
        .iter()
        .map(|s| assignment_value(k, &log_submatrix(&w, n, s, s)))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// k-th tropical trace: the largest tropical permanent of a k×k principal submatrix.
pub fn tropical_trace(m: &NonnegMatrix, k: usize) -> Result<f64> {
    Ok(log_tropical_trace(m, k)?.exp())
}

/// Max-plus coefficients of `q_M`: entry `n-k` is `log tr^k_T M`.
pub fn tropical_char_poly(m: &NonnegMatrix) -> TropicalPolynomial {
    let n = m.n();
    let mut coeffs = vec![f64::NEG_INFINITY; n + 1];
    for k in 0..=n {
        coeffs[n - k] = log_tropical_trace(m, k).expect("k in range");
    }
    TropicalPolynomial::new(coeffs).expect("leading coefficient is 0")
}

/// Tropical eigenvalues; the coefficient route up to n = 16, the evaluation
/// route beyond.
pub fn tropical_eigenvalues(m: &NonnegMatrix) -> TropicalSpectrum {
    let method = if m.n() <= 16 { Method::Coeff } else { Method::Eval };
    tropical_eigenvalues_with(m, method)
}

pub fn tropical_eigenvalues_with(m: &NonnegMatrix, method: Method) -> TropicalSpectrum {
    match method {
        Method::Coeff => by_coefficients(m),
        Method::Eval => by_evaluation(m, DEFAULT_SATURATION_TOL),
    }
}

fn by_coefficients(m: &NonnegMatrix) -> TropicalSpectrum {
    let q = tropical_char_poly(m);
    let np = newton_polygon_with_tol(&q, DEFAULT_SATURATION_TOL);
    spectrum_from_polygon(np, Method::Coeff)
}

fn spectrum_from_polygon(np: NewtonPolygon, method: Method) -> TropicalSpectrum {
    let gammas = roots_from_polygon(&np, DEFAULT_MERGE_TOL);
    let charpoly = TropicalPolynomial::new(np.concavified.clone()).expect("hull has a finite value");
    TropicalSpectrum { gammas, charpoly, saturated: np.saturated, method }
}

/// Supporting line `s·t + b` of `f(t) = log per_T(M ⊕ e^t I)` at `t`.
#[derive(Debug, Clone, Copy)]
struct Line {
    slope: usize,
    intercept: f64,
}

impl Line {
    fn at(&self, t: f64) -> f64 {
        self.intercept + self.slope as f64 * t
    }
}

fn supporting_line(n: usize, w: &[f64], t: f64) -> Line {
    let mut shifted = w.to_vec();
    for i in 0..n {
        shifted[i * n + i] = w[i * n + i].max(t);
    }
    let (_, perm) = assignment_with_perm(n, &shifted).expect("diagonal is always feasible");
    let mut slope = 0;
    let mut intercept = 0.0;
    for (i, &j) in perm.iter().enumerate() {
        if i == j && t >= w[i * n + i] {
            slope += 1;
        } else {
            intercept += w[i * n + j];
        }
    }
    Line { slope, intercept }
}

fn by_evaluation(m: &NonnegMatrix, tol: f64) -> TropicalSpectrum {
    let n = m.n();
    let w = m.log();
    let top = Line { slope: n, intercept: 0.0 };
    let scale = w.iter().filter(|x| x.is_finite()).fold(0.0f64, |a, x| a.max(x.abs()));
    let t_low = -(4.0 * n as f64 * scale + 10.0);
    let low = supporting_line(n, &w, t_low);

    let mut lines = vec![low];
    let mut breakpoints: Vec<(f64, usize)> = Vec::new();
    let mut stack = vec![(low, top)];
    while let Some((left, right)) = stack.pop() {
        if left.slope >= right.slope {
            continue;
        }
        let t = (left.intercept - right.intercept) / (right.slope - left.slope) as f64;
        let mid = supporting_line(n, &w, t);
        let base = left.at(t);
        let collapsed = mid.slope <= left.slope
            || mid.slope >= right.slope
            || mid.at(t) <= base + tol * (1.0 + base.abs());
        if collapsed {
            breakpoints.push((t, right.slope - left.slope));
        } else {
            lines.push(mid);
            stack.push((mid, right));
            stack.push((left, mid));
        }
    }
    lines.push(top);
    lines.sort_by_key(|l| l.slope);
    lines.dedup_by_key(|l| l.slope);

    if low.slope > 0 {
        breakpoints.push((f64::NEG_INFINITY, low.slope));
    }
    let gammas = RootMultiset::from_pairs(breakpoints, DEFAULT_MERGE_TOL);

    // concavified coefficients from the hull vertices (slope, intercept)
    let mut concavified = vec![f64::NEG_INFINITY; n + 1];
    for pair in lines.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let step = (b.intercept - a.intercept) / (b.slope - a.slope) as f64;
        for j in a.slope..=b.slope {
            concavified[j] = a.intercept + step * (j - a.slope) as f64;
        }
    }
    for l in &lines {
        concavified[l.slope] = l.intercept;
    }
    let saturated = lines.iter().map(|l| l.slope).collect();
    TropicalSpectrum {
        gammas,
        charpoly: TropicalPolynomial::new(concavified).expect("leading coefficient is 0"),
        saturated,
        method: Method::Eval,
    }
}

/// `∧^k_T M`: entry `(I, J)` is `per_T M[I, J]`, subsets in lexicographic
/// order. Exceeding the size cap only logs a warning.
pub fn tropical_exterior_power(m: &NonnegMatrix, k: usize) -> Result<NonnegMatrix> {
    let n = m.n();
    check_order(n, k, false)?;
    let rows = binomial(n, k);
    let cap = size_cap();
    if rows > cap {
        log::warn!("tropical exterior power of order {k} for n = {n} has {rows} rows (cap {cap})");
    }
    let w = m.log();
    let subs = subsets(n, k);
    let mut data = Vec::with_capacity(rows * rows);
    for r in &subs {
        for c in &subs {
            let value = match assignment_with_perm(k, &log_submatrix(&w, n, r, c)) {
                Some((_, perm)) => perm.iter().enumerate().map(|(i, &j)| m[(r[i], c[j])]).product(),
                None => 0.0,
            };
            data.push(value);
        }
    }
    Ok(NonnegMatrix::from_vec_unchecked(rows, data))
}

/// Largest tropical eigenvalue, computed as the maximal cycle mean.
pub fn tropical_spectral_radius(m: &NonnegMatrix) -> f64 {
    max_cycle_mean(m)
}

/// Check of `ρ_T(∧^k_T M) ≤ exp(concavified log tr^k_T M)` alongside the
/// concavified coefficient itself, both as max-times values.
pub fn exterior_power_radius(m: &NonnegMatrix, k: usize) -> Result<(f64, f64)> {
    let ext = tropical_exterior_power(m, k)?;
    let rho = tropical_spectral_radius(&ext);
    let q = tropical_char_poly(m);
    let n = m.n();
    let hat = newton_polygon_with_tol(&q, DEFAULT_SATURATION_TOL).concavified[n - k].exp();
    Ok((rho, hat))
}
