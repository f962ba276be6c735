//! Seeded random instance generators and the randomized property suites.
//!
//! Instance `i` of a sweep draws from its own ChaCha8 stream `i` under the
//! sweep seed, so any failing instance can be regenerated on its own.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::{decompose_circulation, CirculationMatrix};
use crate::bounds::{
    friedland_check, hop_check, lower_bound, proof_chain, upper_bound_report, ReportOptions,
};
use crate::error::Result;
use crate::matrix::{ComplexMatrix, NonnegMatrix};

/// Densities used by the matrix sweeps.
pub const DENSITIES: [f64; 3] = [0.3, 0.7, 1.0];

/// Generator for instance `index` of a sweep seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Modulus `10^u` with `u` uniform in `[lo_exp, hi_exp]`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo_exp: f64, hi_exp: f64) -> f64 {
    10f64.powf(rng.gen_range(lo_exp..=hi_exp))
}

pub fn random_phase<R: Rng>(rng: &mut R, modulus: f64) -> Complex64 {
    Complex64::from_polar(modulus, rng.gen_range(0.0..2.0 * PI))
}

/// Complex matrix whose entries are nonzero with probability `density`,
/// moduli log-uniform in `[10^lo_exp, 10^hi_exp]`, phases uniform.
pub fn random_complex<R: Rng>(rng: &mut R, n: usize, density: f64, lo_exp: f64, hi_exp: f64) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                let m = log_uniform(rng, lo_exp, hi_exp);
                a[(i, j)] = random_phase(rng, m);
            }
        }
    }
    a
}

pub fn random_nonneg<R: Rng>(rng: &mut R, n: usize, density: f64, lo_exp: f64, hi_exp: f64) -> NonnegMatrix {
    let data = (0..n * n)
        .map(|_| if rng.gen_bool(density) { log_uniform(rng, lo_exp, hi_exp) } else { 0.0 })
        .collect();
    NonnegMatrix::from_vec(n, data).expect("finite nonnegative entries")
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Diagonal times permutation, entries with random phases.
pub fn random_monomial<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let perm = random_permutation(rng, n);
    let mut a = ComplexMatrix::zeros(n);
    for (i, &j) in perm.iter().enumerate() {
        let m = log_uniform(rng, -3.0, 3.0);
        a[(i, j)] = random_phase(rng, m);
    }
    a
}

/// Coefficients `a_0..a_degree` with nonzero leading term. With `sparse`,
/// each lower coefficient vanishes with probability 1/2, `a_0` included.
pub fn random_polynomial<R: Rng>(rng: &mut R, degree: usize, sparse: bool) -> Vec<Complex64> {
    (0..=degree)
        .map(|i| {
            if i < degree && sparse && rng.gen_bool(0.5) {
                Complex64::new(0.0, 0.0)
            } else {
                let m = log_uniform(rng, -3.0, 3.0);
                random_phase(rng, m)
            }
        })
        .collect()
}

/// Sum of up to `max_weight` principal partial permutation matrices.
pub fn random_circulation<R: Rng>(rng: &mut R, n: usize, max_weight: usize) -> CirculationMatrix {
    let mut b = vec![0u64; n * n];
    let parts = rng.gen_range(0..=max_weight);
    for _ in 0..parts {
        let support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        let mut image = support.clone();
        image.shuffle(rng);
        for (&i, &j) in support.iter().zip(&image) {
            b[i * n + j] += 1;
        }
    }
    CirculationMatrix::new(n, b).expect("sum of principal partial permutations")
}

/// Diagonally dominant matrix whose diagonal moduli drop by a factor of
/// 1e3 to 1e4 per step and whose off-diagonal moduli stay below 1e-4, so the
/// lower-bound hypotheses hold for every k up to 4 when n <= 6.
pub fn random_dominant<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut diag = vec![1.0; n];
    for i in (0..n.saturating_sub(1)).rev() {
        diag[i] = diag[i + 1] * log_uniform(rng, 3.0, 4.0);
    }
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let m = if i == j { diag[i] } else { 1e-4 * rng.gen_range(0.0..1.0) };
            a[(i, j)] = random_phase(rng, m);
        }
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Upper,
    Lower,
    Hop,
    ProofChain,
    Friedland,
    Circulation,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Upper, Suite::Lower, Suite::Hop, Suite::ProofChain, Suite::Friedland, Suite::Circulation];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Upper => "upper",
            Suite::Lower => "lower",
            Suite::Hop => "hop",
            Suite::ProofChain => "proof-chain",
            Suite::Friedland => "friedland",
            Suite::Circulation => "circulation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub instances: usize,
    /// Largest dimension (or degree for `hop`); each suite clamps it to its own limit.
    pub nmax: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub index: u64,
    pub n: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest observed ratio of left side to right side over all checked inequalities.
    pub worst_ratio: f64,
    pub seed: u64,
    pub failures: Vec<InstanceFailure>,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Outcome {
    n: usize,
    worst: f64,
    failure: Option<String>,
}

fn quotient(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        1.0
    } else {
        lhs / rhs
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteSummary {
    let mut summary = SuiteSummary {
        suite: cfg.suite,
        instances: cfg.instances,
        passed: 0,
        failed: 0,
        worst_ratio: 0.0,
        seed: cfg.seed,
        failures: Vec::new(),
    };
    for i in 0..cfg.instances as u64 {
        let mut rng = instance_rng(cfg.seed, i);
        let outcome = match run_instance(cfg, &mut rng) {
            Ok(o) => o,
            Err(e) => Outcome { n: 0, worst: f64::NAN, failure: Some(e.to_string()) },
        };
        if outcome.worst.is_finite() {
            summary.worst_ratio = summary.worst_ratio.max(outcome.worst);
        }
        match outcome.failure {
            None => summary.passed += 1,
            Some(detail) => {
                log::warn!("{} instance {i} failed: {detail}", cfg.suite);
                summary.failed += 1;
                summary.failures.push(InstanceFailure { index: i, n: outcome.n, detail });
            }
        }
    }
    summary
}

fn run_instance(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let tol = cfg.tol;
    match cfg.suite {
        Suite::Upper => {
            let n = rng.gen_range(2..=cfg.nmax.clamp(2, 12));
            let density = *DENSITIES.choose(rng).unwrap();
            let a = random_complex(rng, n, density, -4.0, 4.0);
            let report = upper_bound_report(&a, &ReportOptions { tol, ..Default::default() })?;
            let bad: Vec<usize> = report.rows.iter().filter(|r| !r.upper_holds).map(|r| r.k).collect();
            Ok(Outcome {
                n,
                worst: report.worst_ratio(),
                failure: (!bad.is_empty()).then(|| format!("upper bound violated at k = {bad:?}")),
            })
        }
        Suite::Lower => {
            let n = rng.gen_range(2..=cfg.nmax.clamp(2, 6));
            let a = random_dominant(rng, n);
            let eig = crate::dense_eig::eigenvalues(&a)?;
            let gammas = crate::trop_spectra::tropical_eigenvalues(&a.abs()).prefix_products();
            let mut worst = 0.0f64;
            let mut failure = None;
            for k in 1..=n.min(crate::bounds::LOWER_MAX_K) {
                let out = lower_bound(&a, k, tol)?;
                let Some(rec) = out.record else {
                    failure = Some(format!("k={k}: hypotheses rejected: {}", out.diagnostics.join("; ")));
                    break;
                };
                let lhs = rec.l_k * gammas[k];
                worst = worst.max(quotient(lhs, eig.prefix[k]));
                if lhs > eig.prefix[k] * (1.0 + tol) {
                    failure = Some(format!("k={k}: L_k γ-prefix {lhs:e} exceeds {:e}", eig.prefix[k]));
                    break;
                }
            }
            Ok(Outcome { n, worst, failure })
        }
        Suite::Hop => {
            let degree = rng.gen_range(2..=cfg.nmax.clamp(2, 20));
            let sparse = rng.gen_bool(0.5);
            let p = random_polynomial(rng, degree, sparse);
            let report = hop_check(&p, tol)?;
            let worst = report
                .rows
                .iter()
                .map(|r| {
                    quotient(r.lower_constant * r.alpha_prefix, r.zeta_prefix)
                        .max(quotient(r.zeta_prefix, r.upper_constant * r.alpha_prefix))
                })
                .fold(0.0, f64::max);
            let bad: Vec<usize> =
                report.rows.iter().filter(|r| !(r.lower_holds && r.upper_holds)).map(|r| r.k).collect();
            Ok(Outcome {
                n: degree,
                worst,
                failure: (!bad.is_empty()).then(|| format!("root bounds violated at k = {bad:?}")),
            })
        }
        Suite::ProofChain => {
            let n = rng.gen_range(2..=cfg.nmax.clamp(2, 6));
            let density = *DENSITIES.choose(rng).unwrap();
            let a = random_complex(rng, n, density, -4.0, 4.0);
            let mut worst = 0.0f64;
            let mut failure = None;
            for k in 1..=n {
                let chain = proof_chain(&a, k, tol)?;
                worst = worst
                    .max(quotient(chain.eig_prefix, chain.rho_hadamard))
                    .max(quotient(chain.rho_hadamard, chain.upper_times_trop_radius))
                    .max(quotient(chain.upper_times_trop_radius, chain.upper_times_gammas));
                let links = chain.links(tol);
                if !chain.entrywise_domination || links.contains(&false) {
                    failure = Some(format!(
                        "k={k}: links {links:?}, entrywise domination {}",
                        chain.entrywise_domination
                    ));
                    break;
                }
            }
            Ok(Outcome { n, worst, failure })
        }
        Suite::Friedland => {
            let n = rng.gen_range(2..=cfg.nmax.clamp(2, 12));
            let density = *DENSITIES.choose(rng).unwrap();
            let m = random_nonneg(rng, n, density, -2.0, 2.0);
            let f = friedland_check(&m, tol);
            let worst = quotient(f.rho_max, f.rho).max(quotient(f.rho, f.rho_pattern * f.rho_max));
            Ok(Outcome {
                n,
                worst,
                failure: (!f.verdict()).then(|| format!("{f:?}")),
            })
        }
        Suite::Circulation => {
            let n = rng.gen_range(1..=cfg.nmax.clamp(1, 12));
            let b = random_circulation(rng, n, 10);
            let parts = decompose_circulation(&b);
            let mut sum = vec![0u64; n * n];
            for p in &parts {
                for (s, x) in sum.iter_mut().zip(p.to_matrix()) {
                    *s += x;
                }
            }
            let weight = b.weight();
            let failure = if sum != b.entries() {
                Some("parts do not sum to the input".to_string())
            } else if parts.len() as u64 > weight {
                Some(format!("{} parts exceed weight {weight}", parts.len()))
            } else if parts.iter().any(|p| p.is_empty() || !p.is_principal()) {
                Some("a part is empty or not principal".to_string())
            } else {
                None
            };
            Ok(Outcome { n, worst: quotient(parts.len() as f64, weight as f64), failure })
        }
    }
}
