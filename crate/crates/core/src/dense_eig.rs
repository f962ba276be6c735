//! Desk-scale complex eigenvalues: characteristic polynomial from principal
//! minors (Faddeev–LeVerrier beyond `MINOR_SUM_MAX_DIM`), roots by
//! Aberth–Ehrlich iteration.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::assignment_value;
use crate::combinatorics::subsets;
use crate::compounds::determinant;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::trop_poly::max_times_relative;

pub const MAX_DIM: usize = 30;

/// Up to this size the coefficients are summed from LU principal minors.
/// Faddeev–LeVerrier loses relative accuracy on graded matrices.
pub const MINOR_SUM_MAX_DIM: usize = 12;

const RESIDUAL_TOL: f64 = 1e-10;
const MAX_ITERS: usize = 2000;
const RESTARTS: usize = 6;
const CLUSTER_MAX_RADIUS: f64 = 1e-2;
const CLUSTER_MIN_RADIUS: f64 = 1e-7;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Eigenvalues sorted by nonincreasing modulus, ties by increasing argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSpectrum {
    pub lambdas: Vec<Complex64>,
    /// `|λ_1 ⋯ λ_k|` for `k = 0..=n`.
    pub prefix: Vec<f64>,
}

impl EigenSpectrum {
    fn new(mut lambdas: Vec<Complex64>) -> Self {
        sort_by_modulus(&mut lambdas);
        let mut prefix = vec![1.0];
        let mut acc = 1.0;
        for z in &lambdas {
            acc *= z.norm();
            prefix.push(acc);
        }
        Self { lambdas, prefix }
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.lambdas.iter().map(|z| z.norm()).collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.lambdas.first().map_or(0.0, |z| z.norm())
    }

    /// Relative mismatch of `Σλ` against `tr A` and `∏λ` against `det A`.
    pub fn trace_det_residuals(&self, a: &ComplexMatrix) -> (f64, f64) {
        let sum: Complex64 = self.lambdas.iter().sum();
        let tr = a.trace();
        let tr_scale = tr.norm().max(self.lambdas.iter().map(|z| z.norm()).sum::<f64>()).max(f64::MIN_POSITIVE);
        let prod: Complex64 = self.lambdas.iter().product();
        let det = crate::compounds::determinant(a);
        let det_scale = det.norm().max(prod.norm()).max(f64::MIN_POSITIVE);
        ((sum - tr).norm() / tr_scale, (prod - det).norm() / det_scale)
    }
}

fn sort_by_modulus(zs: &mut [Complex64]) {
    zs.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
}

/// Number of eigenvalues forced to zero by the sparsity pattern alone:
/// `n` minus the largest k for which some k×k principal permanent of the
/// pattern is nonzero.
pub fn structural_zero_count(a: &ComplexMatrix) -> usize {
    let n = a.n();
    let mut w = vec![f64::NEG_INFINITY; n * n];
    for i in 0..n {
        for j in 0..n {
            let nz = a[(i, j)] != zero();
            if i == j {
                w[i * n + j] = if nz { 1.0 } else { 0.0 };
            } else if nz {
                w[i * n + j] = 1.0;
            }
        }
    }
    n - assignment_value(n, &w).round() as usize
}

/// Coefficients of `det(xI - A)`, index 0 first; the coefficient of
/// `x^(n-k)` is `(-1)^k tr^k A`. Coefficients that vanish structurally are
/// set to exact zeros.
pub fn char_poly(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = a.n();
    if n > MAX_DIM {
        return Err(Error::Oversize { what: "characteristic polynomial", n, max: MAX_DIM });
    }
    let mut c = vec![zero(); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(c);
    }
    if n <= MINOR_SUM_MAX_DIM {
        for k in 1..=n {
            let tr: Complex64 = subsets(n, k).iter().map(|s| determinant(&a.submatrix(s, s))).sum();
            c[n - k] = if k % 2 == 0 { tr } else { -tr };
        }
    } else {
        faddeev_leverrier(a, &mut c);
    }
    for coeff in c.iter_mut().take(structural_zero_count(a)) {
        *coeff = zero();
    }
    Ok(c)
}

fn faddeev_leverrier(a: &ComplexMatrix, c: &mut [Complex64]) {
    let n = a.n();
    let mut m = ComplexMatrix::identity(n);
    for k in 1..=n {
        let am = a.matmul(&m);
        c[n - k] = -am.trace() / k as f64;
        if k < n {
            m = am;
            for i in 0..n {
                m[(i, i)] += c[n - k];
            }
        }
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = zero();
    let mut dp = zero();
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn magnitude(coeffs: &[Complex64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

/// Newton correction `p(z)/p'(z)` and the relative backward error at `z`.
/// Outside the unit disc the reversed polynomial is evaluated at `1/z`.
fn newton_ratio(coeffs: &[Complex64], rev: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let d = (coeffs.len() - 1) as f64;
    if z.norm() <= 1.0 {
        let (p, dp) = horner(coeffs, z);
        let err = p.norm() / magnitude(coeffs, z.norm()).max(f64::MIN_POSITIVE);
        (p / dp, err)
    } else {
        let y = z.inv();
        let (r, dr) = horner(rev, y);
        let err = r.norm() / magnitude(rev, y.norm()).max(f64::MIN_POSITIVE);
        // p'(z)/p(z) = y (d - y r'(y)/r(y))
        let inv_ratio = y * (d - y * dr / r);
        (inv_ratio.inv(), err)
    }
}

/// Starting points on circles whose radii are the tropical roots of `p`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let roots = max_times_relative(coeffs).expect("nonzero polynomial").roots();
    let mut out = Vec::with_capacity(d);
    let mut offset = 0usize;
    for r in roots.entries() {
        let radius = r.value.exp();
        for j in 0..r.multiplicity {
            let theta = 2.0 * PI * j as f64 / r.multiplicity as f64
                + 2.0 * PI * offset as f64 / d as f64
                + 0.4;
            out.push(Complex64::from_polar(radius, theta));
        }
        offset += 1;
    }
    out
}

fn aberth(coeffs: &[Complex64], rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let rev: Vec<Complex64> = coeffs.iter().rev().copied().collect();
    let mut z = initial_guesses(coeffs);
    let conv_tol = 4.0 * d as f64 * f64::EPSILON;
    let mut best: Option<(f64, Vec<Complex64>)> = None;

    for attempt in 0..=RESTARTS {
        if attempt > 0 {
            let base = best.as_ref().map_or(z.clone(), |b| b.1.clone());
            z = base
                .iter()
                .map(|&zi| {
                    let kick = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    zi * (Complex64::new(1.0, 0.0) + 1e-3 * kick) + 1e-12 * kick
                })
                .collect();
        }
        let mut done = vec![false; d];
        for _ in 0..MAX_ITERS {
            for i in 0..d {
                if done[i] {
                    continue;
                }
                let (ratio, err) = newton_ratio(coeffs, &rev, z[i]);
                if err <= conv_tol || !ratio.re.is_finite() || !ratio.im.is_finite() {
                    done[i] = err <= conv_tol;
                    if !done[i] {
                        break;
                    }
                    continue;
                }
                let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if !w.re.is_finite() || !w.im.is_finite() {
                    break;
                }
                z[i] -= w;
                if w.norm() <= f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            }
            if done.iter().all(|&x| x) {
                break;
            }
        }
        let residual = z
            .iter()
            .map(|&zi| newton_ratio(coeffs, &rev, zi).1)
            .fold(0.0f64, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
        if residual <= RESIDUAL_TOL {
            return Ok(z);
        }
        if best.as_ref().is_none_or(|b| residual < b.0) {
            best = Some((residual, z.clone()));
        }
    }
    let (residual, best) = best.expect("at least one attempt");
    Err(Error::NonConvergence { residual, best })
}

/// Taylor coefficients `p^(j)(c)/j!` for `j < m`, with the same quantities
/// for `|p|` at `|c|` as scales.
fn taylor(coeffs: &[Complex64], c: Complex64, m: usize) -> Vec<(Complex64, f64)> {
    let mut b = coeffs.to_vec();
    let mut s: Vec<f64> = coeffs.iter().map(|a| a.norm()).collect();
    let r = c.norm();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let (mut acc, mut acc_s) = (zero(), 0.0);
        for i in (0..b.len()).rev() {
            acc = acc * c + b[i];
            acc_s = acc_s * r + s[i];
            b[i] = acc;
            s[i] = acc_s;
        }
        out.push((b[0], s[0]));
        b.remove(0);
        s.remove(0);
    }
    out
}

/// Replaces a cluster of computed roots by its centroid taken `m` times when
/// `p` is within the accepted backward error of having an `m`-fold root
/// there. Otherwise the cluster is split at a finer radius.
fn collapse_clusters(coeffs: &[Complex64], roots: &mut [Complex64], idx: &[usize], radius: f64) {
    let mut label: Vec<usize> = (0..idx.len()).collect();
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            let (za, zb) = (roots[idx[a]], roots[idx[b]]);
            if (za - zb).norm() <= radius * za.norm().max(zb.norm()) {
                let (la, lb) = (label[a], label[b]);
                for l in label.iter_mut() {
                    if *l == lb {
                        *l = la;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; idx.len()];
    for a in 0..idx.len() {
        if seen[a] {
            continue;
        }
        let members: Vec<usize> = (0..idx.len()).filter(|&b| label[b] == label[a]).map(|b| idx[b]).collect();
        for b in 0..idx.len() {
            if label[b] == label[a] {
                seen[b] = true;
            }
        }
        let m = members.len();
        if m < 2 {
            continue;
        }
        let mut c = members.iter().map(|&i| roots[i]).sum::<Complex64>() / m as f64;
        // Newton on p^(m-1), which has a simple root at an m-fold root of p
        for _ in 0..8 {
            let t = taylor(coeffs, c, m + 1);
            let step = t[m - 1].0 / (t[m].0 * m as f64);
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            c -= step;
            if step.norm() <= f64::EPSILON * c.norm() {
                break;
            }
        }
        if taylor(coeffs, c, m).iter().all(|(t, scale)| t.norm() <= RESIDUAL_TOL * scale) {
            for &i in &members {
                roots[i] = c;
            }
        } else if radius > CLUSTER_MIN_RADIUS {
            collapse_clusters(coeffs, roots, &members, radius / 10.0);
        }
    }
}

/// All roots of `a_0 + a_1 z + ... + a_n z^n`, sorted by nonincreasing modulus.
/// Exact zero low-order coefficients give exact zero roots.
/// Clusters that are a multiple root up to the residual tolerance come back
/// as that multiple root.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let Some(lead) = coeffs.last() else {
        return Err(Error::invalid("empty polynomial"));
    };
    if *lead == zero() {
        return Err(Error::invalid("leading coefficient must be nonzero"));
    }
    if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::invalid("coefficients must be finite"));
    }
    let zeros = coeffs.iter().position(|z| *z != zero()).unwrap();
    let rest = &coeffs[zeros..];
    let mut roots = vec![zero(); zeros];
    match rest.len() - 1 {
        0 => {}
        1 => roots.push(-rest[0] / rest[1]),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut found = aberth(rest, &mut rng)?;
            let all: Vec<usize> = (0..found.len()).collect();
            collapse_clusters(rest, &mut found, &all, CLUSTER_MAX_RADIUS);
            roots.extend(found);
        }
    }
    sort_by_modulus(&mut roots);
    Ok(roots)
}

pub fn eigenvalues(a: &ComplexMatrix) -> Result<EigenSpectrum> {
    let c = char_poly(a)?;
    Ok(EigenSpectrum::new(poly_roots(&c)?))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.spectral_radius())
}
