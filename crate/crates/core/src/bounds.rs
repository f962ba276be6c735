//! Log-majorization bounds between eigenvalues and tropical eigenvalues,
//! and the Hadamard–Ostrowski–Pólya bounds for polynomial roots.
//!
//! For a complex matrix `A` with eigenvalues `|λ_1| ≥ … ≥ |λ_n|` and tropical
//! eigenvalues `γ_1 ≥ … ≥ γ_n` (those of `|A|`),
//!
//! ```text
//! |λ_1 ⋯ λ_k| ≤ U_k γ_1 ⋯ γ_k,   U_k = ρ(∧^k_per(pat A)).
//! ```
//!
//! Lower bounds `L_k γ_1 ⋯ γ_k ≤ |λ_1 ⋯ λ_k|` only hold under
//! nondegeneracy conditions that [`lower_bound`] checks one by one.
//! Reports never fail on a violated inequality; they record a verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combinatorics::{binomial, factorial, permutations, subsets};
use crate::compounds::{determinant, friedland_quantities, pattern, permanental_compound_nonneg, spectral_radius};
use crate::dense_eig::{self, eigenvalues, poly_roots};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, NonnegMatrix};
use crate::trop_poly::max_times_relative;
use crate::trop_spectra::{tropical_eigenvalues_with, Method, TropicalSpectrum};

/// Relative tolerance for inequality verdicts.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest dimension accepted by [`upper_bound_report`].
pub const MAX_REPORT_DIM: usize = 12;

/// Exhaustive hypothesis checks for lower bounds are limited to these sizes.
pub const LOWER_MAX_N: usize = 8;
pub const LOWER_MAX_K: usize = 4;

/// `U_k = ρ(∧^k_per(pat A))`.
pub fn upper_constant(a: &ComplexMatrix, k: usize) -> Result<f64> {
    Ok(spectral_radius(&permanental_compound_nonneg(&pattern(a), k)?))
}

/// `x / y` with `0/0 = 1`: both sides vanish, the inequality is an equality.
fn ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 && y == 0.0 {
        1.0
    } else {
        x / y
    }
}

fn le_rel(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs * (1.0 + tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub k: usize,
    /// `|λ_1 ⋯ λ_k|`
    pub eig_prefix: f64,
    /// `γ_1 ⋯ γ_k`
    pub trop_prefix: f64,
    pub upper_constant: f64,
    #[serde(with = "crate::serde_ext")]
    pub ratio: f64,
    pub upper_holds: bool,
    pub lower_constant: Option<f64>,
    pub lower_holds: Option<bool>,
    pub lower: Option<LowerRecord>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    /// SHA-256 of the JSON encoding of the input.
    pub input_hash: String,
    pub tol: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub gammas: Vec<f64>,
    pub eigenvalue_moduli: Vec<f64>,
    pub rows: Vec<BoundRow>,
    pub meta: ReportMeta,
}

impl BoundReport {
    pub fn all_upper_hold(&self) -> bool {
        self.rows.iter().all(|r| r.upper_holds)
    }

    pub fn all_lower_hold(&self) -> bool {
        self.rows.iter().all(|r| r.lower_holds != Some(false))
    }

    /// Largest `eig_prefix / (U_k trop_prefix)` over the rows.
    pub fn worst_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub tol: f64,
    /// Inclusive range of orders; all of `1..=n` when absent.
    pub k_range: Option<(usize, usize)>,
    pub lower: bool,
    pub seed: Option<u64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, k_range: None, lower: false, seed: None }
    }
}

pub fn input_hash<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable input");
    hex::encode(Sha256::digest(&bytes))
}

/// Per-k comparison of `|λ_1 ⋯ λ_k|` with `U_k γ_1 ⋯ γ_k`.
pub fn upper_bound_report(a: &ComplexMatrix, opts: &ReportOptions) -> Result<BoundReport> {
    let n = a.n();
    if n > MAX_REPORT_DIM {
        return Err(Error::Oversize { what: "bound report", n, max: MAX_REPORT_DIM });
    }
    let (k_lo, k_hi) = opts.k_range.unwrap_or((1, n));
    if k_lo == 0 || k_lo > k_hi || k_hi > n {
        return Err(Error::invalid(format!("k range {k_lo}..={k_hi} outside 1..={n}")));
    }
    let eig = eigenvalues(a)?;
    let trop = tropical_eigenvalues_with(&a.abs(), Method::Coeff);
    let gamma_prefix = trop.prefix_products();
    let full_pattern = a.as_slice().iter().all(|z| z.norm() != 0.0);

    let mut rows = Vec::with_capacity(k_hi - k_lo + 1);
    for k in k_lo..=k_hi {
        let u = upper_constant(a, k)?;
        let eig_prefix = eig.prefix[k];
        let trop_prefix = gamma_prefix[k];
        let mut diagnostics = Vec::new();
        if full_pattern && k == n && n >= 3 {
            diagnostics.push(format!(
                "full pattern: |det A| <= n^(n/2) = {:.6e} < n! = {:.6e}",
                (n as f64).powf(n as f64 / 2.0),
                factorial(n)
            ));
        }
        let mut row = BoundRow {
            k,
            eig_prefix,
            trop_prefix,
            upper_constant: u,
            ratio: ratio(eig_prefix, u * trop_prefix),
            upper_holds: le_rel(eig_prefix, u * trop_prefix, opts.tol),
            lower_constant: None,
            lower_holds: None,
            lower: None,
            diagnostics,
        };
        if opts.lower {
            let outcome = lower_bound_with(a, k, &trop, opts.tol);
            if let Some(rec) = outcome.record {
                row.lower_constant = Some(rec.l_k);
                row.lower_holds = Some(le_rel(rec.l_k * trop_prefix, eig_prefix, opts.tol));
                row.lower = Some(rec);
            }
            row.diagnostics.extend(outcome.diagnostics);
        }
        rows.push(row);
    }
    Ok(BoundReport {
        n,
        gammas: trop.max_times(),
        eigenvalue_moduli: eig.moduli(),
        rows,
        meta: ReportMeta { input_hash: input_hash(a), tol: opts.tol, seed: opts.seed },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedlandCheck {
    pub rho_max: f64,
    pub rho: f64,
    pub rho_pattern: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl FriedlandCheck {
    pub fn verdict(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// `ρ_max(M) ≤ ρ(M) ≤ ρ(pat M) ρ_max(M)`.
pub fn friedland_check(m: &NonnegMatrix, tol: f64) -> FriedlandCheck {
    let (rho_max, rho, rho_pattern) = friedland_quantities(m);
    FriedlandCheck {
        rho_max,
        rho,
        rho_pattern,
        lower_holds: le_rel(rho_max, rho, tol),
        upper_holds: le_rel(rho, rho_pattern * rho_max, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerVariant {
    /// Unique maximising subset; `delta` bounds every other subset's weights.
    UniqueSubset { delta: f64 },
    /// Unique maximising permutation; `eta` bounds every other permutation.
    UniquePermutation { eta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerRecord {
    pub k: usize,
    pub l_k: f64,
    /// Constant with `C_k tr^k_T|A| ≤ |tr^k A|`; `L_k = C_k / C(n,k)`.
    pub c_k: f64,
    pub variant: LowerVariant,
    /// The maximising subset (0-based).
    pub subset: Vec<usize>,
    pub det_modulus: f64,
    pub trop_trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundOutcome {
    pub record: Option<LowerRecord>,
    pub diagnostics: Vec<String>,
}

/// Conditional lower constant `L_k`, absent with diagnostics when no
/// hypothesis set holds.
pub fn lower_bound(a: &ComplexMatrix, k: usize, tol: f64) -> Result<LowerBoundOutcome> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("order k = {k} outside 1..={n}")));
    }
    let trop = tropical_eigenvalues_with(&a.abs(), Method::Coeff);
    Ok(lower_bound_with(a, k, &trop, tol))
}

fn lower_bound_with(a: &ComplexMatrix, k: usize, trop: &TropicalSpectrum, tol: f64) -> LowerBoundOutcome {
    let n = a.n();
    let mut diagnostics = Vec::new();
    let absent = |diagnostics| LowerBoundOutcome { record: None, diagnostics };
    if n > LOWER_MAX_N || k > LOWER_MAX_K {
        diagnostics.push(format!(
            "k={k}: exhaustive enumeration limited to n <= {LOWER_MAX_N}, k <= {LOWER_MAX_K}"
        ));
        return absent(diagnostics);
    }
    if !trop.trace_saturated(k) {
        diagnostics.push(format!("k={k}: index not saturated"));
        return absent(diagnostics);
    }

    let abs = a.abs();
    let subs = subsets(n, k);
    let perms = permutations(k);
    // best weight per subset, and the two largest permutation weights overall
    let mut subset_best = Vec::with_capacity(subs.len());
    let (mut top, mut second) = (0.0f64, 0.0f64);
    for s in &subs {
        let mut best = 0.0f64;
        for p in &perms {
            let w: f64 = (0..k).map(|i| abs[(s[i], s[p[i]])]).product();
            best = best.max(w);
            if w > top {
                second = top;
                top = w;
            } else if w > second {
                second = w;
            }
        }
        subset_best.push(best);
    }
    let trace_t = top;
    if trace_t == 0.0 {
        diagnostics.push(format!("k={k}: tropical trace is zero"));
        return absent(diagnostics);
    }
    let count = binomial(n, k) as f64;
    let kfact = factorial(k);

    let mut order: Vec<usize> = (0..subs.len()).collect();
    order.sort_by(|&x, &y| subset_best[y].total_cmp(&subset_best[x]));
    let best_subset = order[0];
    let runner_up = order.get(1).map_or(0.0, |&i| subset_best[i]);

    let mut candidates: Vec<LowerRecord> = Vec::new();

    if runner_up >= trace_t * (1.0 - tol) {
        diagnostics.push(format!("k={k}: Ī_k not unique"));
    } else {
        let s = &subs[best_subset];
        let det = determinant(&a.submatrix(s, s)).norm();
        if det == 0.0 {
            diagnostics.push(format!("k={k}: det A[Ī_k, Ī_k] = 0"));
        } else {
            let delta = runner_up / trace_t;
            let threshold = if count > 1.0 {
                det / (trace_t * (count - 1.0) * kfact)
            } else {
                f64::INFINITY
            };
            if delta < threshold {
                let c_k = det / trace_t - delta * (count - 1.0) * kfact;
                candidates.push(LowerRecord {
                    k,
                    l_k: c_k / count,
                    c_k,
                    variant: LowerVariant::UniqueSubset { delta },
                    subset: s.clone(),
                    det_modulus: det,
                    trop_trace: trace_t,
                });
            } else {
                diagnostics.push(format!("k={k}: δ_k = {delta:.6e} not below {threshold:.6e}"));
            }
        }
    }

    if second >= trace_t * (1.0 - tol) {
        diagnostics.push(format!("k={k}: maximising permutation not unique"));
    } else {
        let eta = second / trace_t;
        let others = count * kfact - 1.0;
        let threshold = if others > 0.0 { 1.0 / others } else { f64::INFINITY };
        if eta < threshold {
            let c_k = 1.0 - eta * others;
            let s = &subs[best_subset];
            candidates.push(LowerRecord {
                k,
                l_k: c_k / count,
                c_k,
                variant: LowerVariant::UniquePermutation { eta },
                subset: s.clone(),
                det_modulus: determinant(&a.submatrix(s, s)).norm(),
                trop_trace: trace_t,
            });
        } else {
            diagnostics.push(format!("k={k}: η_k = {eta:.6e} not below {threshold:.6e}"));
        }
    }

    let record = candidates.into_iter().max_by(|x, y| x.l_k.total_cmp(&y.l_k));
    if record.is_some() {
        diagnostics.clear();
    }
    LowerBoundOutcome { record, diagnostics }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CkBound {
    pub k: usize,
    /// `(C_k / C(n,k)) γ_1 ⋯ γ_k`
    pub bound: f64,
    pub eig_prefix: f64,
    pub trace_modulus: f64,
    pub trop_trace: f64,
    pub holds: bool,
}

/// `|tr^k A| = |Σ_I det A[I, I]|`.
pub fn trace_k(a: &ComplexMatrix, k: usize) -> Complex64 {
    subsets(a.n(), k).iter().map(|s| determinant(&a.submatrix(s, s))).sum()
}

/// Lower bound from a caller-supplied constant with `C_k tr^k_T|A| ≤ |tr^k A|`.
pub fn lower_bound_via_ck(a: &ComplexMatrix, k: usize, c_k: f64, tol: f64) -> Result<CkBound> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("order k = {k} outside 1..={n}")));
    }
    if !(c_k > 0.0) || !c_k.is_finite() {
        return Err(Error::invalid(format!("C_k = {c_k} must be a positive number")));
    }
    let trop = tropical_eigenvalues_with(&a.abs(), Method::Coeff);
    if !trop.trace_saturated(k) {
        return Err(Error::Hypothesis(format!("index {k} not saturated")));
    }
    let trace_modulus = trace_k(a, k).norm();
    if trace_modulus == 0.0 {
        return Err(Error::Hypothesis(format!("tr^{k} A = 0")));
    }
    let trop_trace = crate::trop_spectra::tropical_trace(&a.abs(), k)?;
    if !le_rel(c_k * trop_trace, trace_modulus, tol) {
        return Err(Error::Hypothesis(format!(
            "C_k tr^k_T|A| = {:.6e} exceeds |tr^k A| = {:.6e}",
            c_k * trop_trace,
            trace_modulus
        )));
    }
    let bound = c_k / binomial(n, k) as f64 * trop.prefix_products()[k];
    let eig_prefix = eigenvalues(a)?.prefix[k];
    Ok(CkBound { k, bound, eig_prefix, trace_modulus, trop_trace, holds: le_rel(bound, eig_prefix, tol) })
}

/// Pólya's constant `sqrt((k+1)^(k+1) / k^k)`, with `f(0) = 1`.
pub fn polya_constant(k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    (0.5 * ((k + 1.0) * (k + 1.0).ln() - k * k.ln())).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopRow {
    pub k: usize,
    /// `|ζ_1 ⋯ ζ_k|`
    pub zeta_prefix: f64,
    /// `α_1 ⋯ α_k`
    pub alpha_prefix: f64,
    /// `1 / C(n,k)`
    pub lower_constant: f64,
    /// `min(f(k), f(n-k))`
    pub upper_constant: f64,
    pub polya: f64,
    pub polya_reflected: f64,
    /// `sqrt(e (k+1))`
    pub ostrowski: f64,
    /// `k + 1`
    pub hadamard: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopReport {
    pub degree: usize,
    pub roots: Vec<Complex64>,
    pub tropical_roots: Vec<f64>,
    pub rows: Vec<HopRow>,
}

impl HopReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.lower_holds && r.upper_holds)
    }
}

fn check_polynomial(coeffs: &[Complex64]) -> Result<usize> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::invalid("degree ≥ 1 required"));
    }
    if coeffs[n].norm() == 0.0 {
        return Err(Error::invalid("leading coefficient must be nonzero"));
    }
    Ok(n)
}

/// Polynomial roots against tropical roots: lower constant `1/C(n,k)`,
/// upper constant `min(f(k), f(n-k))`.
pub fn hop_check(coeffs: &[Complex64], tol: f64) -> Result<HopReport> {
    let n = check_polynomial(coeffs)?;
    let roots = poly_roots(coeffs)?;
    let alphas = max_times_relative(coeffs)?.roots().max_times_values();
    let mut rows = Vec::with_capacity(n);
    let (mut zeta_prefix, mut alpha_prefix) = (1.0, 1.0);
    for k in 1..=n {
        zeta_prefix *= roots[k - 1].norm();
        alpha_prefix *= alphas[k - 1];
        let lower_constant = 1.0 / binomial(n, k) as f64;
        let polya = polya_constant(k);
        let polya_reflected = polya_constant(n - k);
        let upper_constant = polya.min(polya_reflected);
        rows.push(HopRow {
            k,
            zeta_prefix,
            alpha_prefix,
            lower_constant,
            upper_constant,
            polya,
            polya_reflected,
            ostrowski: (std::f64::consts::E * (k as f64 + 1.0)).sqrt(),
            hadamard: k as f64 + 1.0,
            lower_holds: le_rel(lower_constant * alpha_prefix, zeta_prefix, tol),
            upper_holds: le_rel(zeta_prefix, upper_constant * alpha_prefix, tol),
        });
    }
    Ok(HopReport { degree: n, roots, tropical_roots: alphas, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanionRow {
    pub k: usize,
    /// `|ζ_1 ⋯ ζ_k| / (α_1 ⋯ α_k)`
    pub root_ratio: f64,
    /// Exact `ρ(∧^k_per(pat A))` for the companion matrix.
    pub exact_upper: f64,
    /// `min(k+1, n-k+1)`
    pub norm_constant: f64,
    /// `min(f(k), f(n-k))`
    pub polya_constant: f64,
    /// The comparisons are made on `|ζ_1 ⋯ ζ_k|` against constant times
    /// `α_1 ⋯ α_k`, so vanishing products compare as equal.
    pub ratio_le_exact: bool,
    pub ratio_le_norm: bool,
    pub ratio_le_polya: bool,
    pub exact_le_norm: bool,
}

impl CompanionRow {
    pub fn all_hold(&self) -> bool {
        self.ratio_le_exact && self.ratio_le_norm && self.ratio_le_polya && self.exact_le_norm
    }
}

/// Matrix constants for the companion matrix of `p` next to Pólya's constants.
pub fn companion_comparison(coeffs: &[Complex64], tol: f64) -> Result<Vec<CompanionRow>> {
    let n = check_polynomial(coeffs)?;
    let a = ComplexMatrix::companion(coeffs)?;
    let hop = hop_check(coeffs, tol)?;
    let mut out = Vec::with_capacity(n);
    for row in &hop.rows {
        let k = row.k;
        let root_ratio = ratio(row.zeta_prefix, row.alpha_prefix);
        let exact_upper = upper_constant(&a, k)?;
        let norm_constant = (k + 1).min(n - k + 1) as f64;
        out.push(CompanionRow {
            k,
            root_ratio,
            exact_upper,
            norm_constant,
            polya_constant: row.upper_constant,
            ratio_le_exact: le_rel(row.zeta_prefix, exact_upper * row.alpha_prefix, tol),
            ratio_le_norm: le_rel(row.zeta_prefix, norm_constant * row.alpha_prefix, tol),
            ratio_le_polya: le_rel(row.zeta_prefix, row.upper_constant * row.alpha_prefix, tol),
            exact_le_norm: le_rel(exact_upper, norm_constant, tol),
        });
    }
    Ok(out)
}

/// The links of the upper-bound argument for one order k, as max-times values:
/// `|λ_1⋯λ_k| ≤ ρ(P ∘ T) ≤ U_k ρ_T(T) ≤ U_k γ_1⋯γ_k` with
/// `P = ∧^k_per(pat A)` and `T = ∧^k_T|A|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    pub k: usize,
    pub eig_prefix: f64,
    pub rho_hadamard: f64,
    pub upper_times_trop_radius: f64,
    pub upper_times_gammas: f64,
    /// `|∧^k A| ≤ P ∘ T` entrywise.
    pub entrywise_domination: bool,
}

impl ProofChain {
    pub fn links(&self, tol: f64) -> [bool; 3] {
        [
            le_rel(self.eig_prefix, self.rho_hadamard, tol),
            le_rel(self.rho_hadamard, self.upper_times_trop_radius, tol),
            le_rel(self.upper_times_trop_radius, self.upper_times_gammas, tol),
        ]
    }
}

pub fn proof_chain(a: &ComplexMatrix, k: usize, tol: f64) -> Result<ProofChain> {
    use crate::compounds::{compound, hadamard};
    use crate::trop_spectra::{tropical_exterior_power, tropical_spectral_radius};
    let abs = a.abs();
    let p = permanental_compound_nonneg(&pattern(a), k)?;
    let t = tropical_exterior_power(&abs, k)?;
    let pt = hadamard(&p, &t)?;
    let u = spectral_radius(&p);
    let eig = dense_eig::eigenvalues(a)?;
    let gammas = tropical_eigenvalues_with(&abs, Method::Coeff).prefix_products();
    let det_compound = compound(a, k)?;
    let entrywise_domination = det_compound
        .as_slice()
        .iter()
        .zip(pt.as_slice())
        .all(|(d, b)| d.norm() <= b * (1.0 + tol) + f64::MIN_POSITIVE);
    Ok(ProofChain {
        k,
        eig_prefix: eig.prefix[k],
        rho_hadamard: spectral_radius(&pt),
        upper_times_trop_radius: u * tropical_spectral_radius(&t),
        upper_times_gammas: u * gammas[k],
        entrywise_domination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn monomial(d: &[Complex64], perm: &[usize]) -> ComplexMatrix {
        let mut a = ComplexMatrix::zeros(d.len());
        for (i, &j) in perm.iter().enumerate() {
            a[(i, j)] = d[i];
        }
        a
    }

    #[test]
    fn upper_constant_of_monomial_is_one() {
        let a = monomial(&[c(2.0), c(-1.0), Complex64::new(0.0, 3.0), c(0.5)], &[2, 0, 3, 1]);
        for k in 1..=4 {
            assert!((upper_constant(&a, k).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_constant_of_full_pattern() {
        let n = 4;
        let a = ComplexMatrix::from_real_rows(&vec![vec![1.0; n]; n]).unwrap();
        for k in 1..=n {
            let expected = binomial(n, k) as f64 * factorial(k);
            assert!((upper_constant(&a, k).unwrap() - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn upper_constant_of_companion() {
        let p = [c(1.0), c(-2.0), c(3.0), c(0.5), c(1.0)];
        let a = ComplexMatrix::companion(&p).unwrap();
        for k in 1..=4 {
            assert!(upper_constant(&a, k).unwrap() <= (k + 1).min(4 - k + 1) as f64 + 1e-12);
        }
    }

    #[test]
    fn monomial_report_is_tight() {
        let a = monomial(&[c(2.0), c(-1.5), Complex64::new(0.0, 3.0), c(0.25), c(7.0)], &[1, 2, 0, 4, 3]);
        let r = upper_bound_report(&a, &ReportOptions::default()).unwrap();
        for row in &r.rows {
            assert!((row.ratio - 1.0).abs() < 1e-9, "k={} ratio={}", row.k, row.ratio);
            assert!(row.upper_holds);
        }
    }

    #[test]
    fn identity_report() {
        let r = upper_bound_report(&ComplexMatrix::identity(3), &ReportOptions::default()).unwrap();
        for row in &r.rows {
            assert!((row.eig_prefix - 1.0).abs() < 1e-12);
            assert_eq!(row.trop_prefix, 1.0);
            assert_eq!(row.upper_constant, 1.0);
        }
    }

    #[test]
    fn all_ones_report_logs_hadamard_comparison() {
        let n = 4;
        let a = ComplexMatrix::from_real_rows(&vec![vec![1.0; n]; n]).unwrap();
        let r = upper_bound_report(&a, &ReportOptions::default()).unwrap();
        let last = r.rows.last().unwrap();
        assert!(last.eig_prefix < 1e-9);
        assert!((last.upper_constant - 24.0).abs() < 1e-9);
        assert!(last.diagnostics.iter().any(|d| d.contains("n^(n/2)")));
    }

    #[test]
    fn report_rejects_bad_k_range() {
        let opts = ReportOptions { k_range: Some((0, 2)), ..Default::default() };
        assert!(upper_bound_report(&ComplexMatrix::identity(3), &opts).is_err());
    }

    #[test]
    fn friedland_examples() {
        let ones = NonnegMatrix::filled(3, 1.0).unwrap();
        let f = friedland_check(&ones, DEFAULT_TOL);
        assert!((f.rho_max - 1.0).abs() < 1e-12);
        assert!((f.rho - 3.0).abs() < 1e-10);
        assert!((f.rho_pattern - 3.0).abs() < 1e-10);
        assert!(f.verdict());
        let d = NonnegMatrix::diag(&[0.5, 4.0, 2.0]).unwrap();
        let f = friedland_check(&d, DEFAULT_TOL);
        assert_eq!((f.rho_max, f.rho, f.rho_pattern), (4.0, 4.0, 1.0));
    }

    #[test]
    fn lower_bound_diagonal_example() {
        // Ī_1 = {0}, δ_1 = 2/8, L_1 = (1/3)(1 - 0.25·2) = 1/6
        let a = ComplexMatrix::diag(&[c(8.0), c(2.0), c(1.0)]);
        let out = lower_bound(&a, 1, DEFAULT_TOL).unwrap();
        let rec = out.record.expect("hypotheses hold");
        assert!((rec.l_k - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(rec.subset, vec![0]);
        assert!(rec.l_k * 8.0 <= 8.0);
    }

    #[test]
    fn lower_bound_reports_ties() {
        let a = ComplexMatrix::diag(&[c(2.0), c(2.0), c(1.0)]);
        let out = lower_bound(&a, 1, DEFAULT_TOL).unwrap();
        assert!(out.record.is_none());
        assert!(out.diagnostics.iter().any(|d| d.contains("Ī_k not unique")));
    }

    #[test]
    fn lower_bound_reports_unsaturated_index() {
        // q = X^2 ⊕ 1·X ⊕ 100: index 1 lies below the chord
        let a = ComplexMatrix::from_real_rows(&[vec![1.0, 10.0], vec![10.0, 1.0]]).unwrap();
        let out = lower_bound(&a, 1, DEFAULT_TOL).unwrap();
        assert!(out.record.is_none());
        assert!(out.diagnostics.iter().any(|d| d.contains("index not saturated")));
    }

    #[test]
    fn ck_examples() {
        let a = ComplexMatrix::diag(&[c(8.0), c(2.0), c(1.0)]);
        let b = lower_bound_via_ck(&a, 1, 11.0 / 8.0, DEFAULT_TOL).unwrap();
        assert!((b.bound - 11.0 / 3.0).abs() < 1e-12);
        assert!(b.holds);
        assert!(lower_bound_via_ck(&a, 1, 0.0, DEFAULT_TOL).is_err());
        assert!(matches!(lower_bound_via_ck(&a, 1, 2.0, DEFAULT_TOL), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn polya_constants() {
        assert_eq!(polya_constant(0), 1.0);
        assert!((polya_constant(1) - 2.0).abs() < 1e-15);
        assert!((polya_constant(2) - (27.0f64 / 4.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn hop_quadratic() {
        let r = hop_check(&[c(2.0), c(-3.0), c(1.0)], DEFAULT_TOL).unwrap();
        let row = &r.rows[0];
        assert!((row.zeta_prefix - 2.0).abs() < 1e-12);
        assert!((row.alpha_prefix - 3.0).abs() < 1e-12);
        assert!((row.lower_constant * row.alpha_prefix - 1.5).abs() < 1e-12);
        assert!((row.polya * row.alpha_prefix - 6.0).abs() < 1e-12);
        assert!(r.all_hold());
        // k = n: |ζ_1 ζ_2| = |a_0/a_2| = α_1 α_2
        let last = &r.rows[1];
        assert!((last.zeta_prefix - last.alpha_prefix).abs() < 1e-12);
    }

    #[test]
    fn hop_radial() {
        let mut p = vec![c(0.0); 6];
        p[0] = c(-32.0);
        p[5] = c(1.0);
        let r = hop_check(&p, DEFAULT_TOL).unwrap();
        for row in &r.rows {
            assert!((row.zeta_prefix / row.alpha_prefix - 1.0).abs() < 1e-12);
        }
        assert!(r.all_hold());
        assert!(hop_check(&[c(1.0)], DEFAULT_TOL).is_err());
    }

    #[test]
    fn companion_tables() {
        let rows = companion_comparison(&[c(1.0), c(2.0), c(-1.0), c(3.0), c(1.0)], DEFAULT_TOL).unwrap();
        assert!(rows.iter().all(CompanionRow::all_hold), "{rows:#?}");
        let rows = companion_comparison(&[c(2.0), c(-3.0), c(1.0)], DEFAULT_TOL).unwrap();
        assert_eq!(rows[0].norm_constant, 2.0);
        assert!((rows[0].polya_constant - 2.0).abs() < 1e-15);
        let mut zn = vec![c(0.0); 5];
        zn[4] = c(1.0);
        for row in companion_comparison(&zn, DEFAULT_TOL).unwrap() {
            assert_eq!(row.root_ratio, 1.0);
            assert!(row.all_hold(), "{row:?}");
        }
    }

    #[test]
    fn report_json_roundtrip() {
        let a = ComplexMatrix::diag(&[c(8.0), c(2.0), c(1.0)]);
        let opts = ReportOptions { lower: true, ..Default::default() };
        let r = upper_bound_report(&a, &opts).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(r.rows[0].lower.is_some());
    }
}
