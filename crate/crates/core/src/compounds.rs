//! Compound matrices, permanents, pattern matrices and nonnegative spectral radii.

use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::assignment::{assignment_value, max_cycle_mean};
use crate::combinatorics::{binomial, size_cap, subsets};
use crate::dense_eig;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, NonnegMatrix};

/// Largest dimension accepted by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 20;

/// 0/1 indicator of the nonzero entries.
pub fn pattern(a: &ComplexMatrix) -> NonnegMatrix {
    let n = a.n();
    let data = a.as_slice().iter().map(|z| if z.re != 0.0 || z.im != 0.0 { 1.0 } else { 0.0 }).collect();
    NonnegMatrix::from_vec_unchecked(n, data)
}

pub fn pattern_nonneg(m: &NonnegMatrix) -> NonnegMatrix {
    m.map(|x| if x != 0.0 { 1.0 } else { 0.0 }).expect("0/1 entries")
}

trait Scalar: Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
}

/// Ryser's inclusion-exclusion formula, visiting column subsets in Gray-code
/// order so each step updates the row sums by one column.
fn ryser<T: Scalar>(n: usize, a: &[T]) -> T {
    if n == 0 {
        return T::one();
    }
    let mut row_sums = vec![T::zero(); n];
    let mut total = T::zero();
    let mut gray: u64 = 0;
    for step in 1u64..(1u64 << n) {
        let next = step ^ (step >> 1);
        let changed = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << changed) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            let x = a[i * n + changed];
            *s = if added { *s + x } else { *s - x };
        }
        gray = next;
        let prod = row_sums.iter().fold(T::one(), |p, &s| p * s);
        // sign (-1)^(n - |S|)
        if (n - next.count_ones() as usize) % 2 == 0 {
            total = total + prod;
        } else {
            total = total - prod;
        }
    }
    total
}

fn check_permanent_size(n: usize) -> Result<()> {
    if n > MAX_PERMANENT_DIM {
        return Err(Error::Oversize { what: "permanent", n, max: MAX_PERMANENT_DIM });
    }
    Ok(())
}

/// Permanent `Σ_σ ∏ a_{i,σ(i)}`.
pub fn permanent(a: &ComplexMatrix) -> Result<Complex64> {
    check_permanent_size(a.n())?;
    Ok(ryser(a.n(), a.as_slice()))
}

pub fn permanent_nonneg(m: &NonnegMatrix) -> Result<f64> {
    check_permanent_size(m.n())?;
    // clamp rounding noise from the alternating sum
    Ok(ryser(m.n(), m.as_slice()).max(0.0))
}

/// Determinant by LU factorisation with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Complex64 {
    let n = a.n();
    let mut lu = a.as_slice().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| lu[r * n + col].norm().total_cmp(&lu[s * n + col].norm()))
            .unwrap();
        let p = lu[pivot * n + col];
        if p.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                lu.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let f = lu[r * n + col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let v = lu[col * n + j];
                lu[r * n + j] -= f * v;
            }
        }
    }
    det
}

fn check_compound(n: usize, k: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("order k = {k} outside 1..={n}")));
    }
    let rows = binomial(n, k);
    let cap = size_cap();
    if rows > cap {
        return Err(Error::SizeCap { n, k, rows, cap });
    }
    Ok(rows)
}

fn compound_with(a: &ComplexMatrix, k: usize, f: impl Fn(&ComplexMatrix) -> Complex64) -> Result<ComplexMatrix> {
    let rows = check_compound(a.n(), k)?;
    let subs = subsets(a.n(), k);
    let mut data = Vec::with_capacity(rows * rows);
    for r in &subs {
        for c in &subs {
            data.push(f(&a.submatrix(r, c)));
        }
    }
    ComplexMatrix::from_vec(rows, data)
}

/// `∧^k A`: entry `(I, J)` is `det A[I, J]`, subsets in lexicographic order.
/// Minors whose pattern admits no perfect matching are exact zeros.
pub fn compound(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    compound_with(a, k, |m| {
        if structurally_singular(m) {
            Complex64::new(0.0, 0.0)
        } else {
            determinant(m)
        }
    })
}

fn structurally_singular(m: &ComplexMatrix) -> bool {
    let w: Vec<f64> =
        m.as_slice().iter().map(|z| if z.norm() == 0.0 { f64::NEG_INFINITY } else { 0.0 }).collect();
    assignment_value(m.n(), &w) == f64::NEG_INFINITY
}

/// `∧^k_per A`: entry `(I, J)` is `per A[I, J]`.
pub fn permanental_compound(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    check_permanent_size(k)?;
    compound_with(a, k, |s| ryser(s.n(), s.as_slice()))
}

pub fn permanental_compound_nonneg(m: &NonnegMatrix, k: usize) -> Result<NonnegMatrix> {
    check_permanent_size(k)?;
    let rows = check_compound(m.n(), k)?;
    let subs = subsets(m.n(), k);
    let mut data = Vec::with_capacity(rows * rows);
    for r in &subs {
        for c in &subs {
            let s = m.submatrix(r, c);
            data.push(ryser(k, s.as_slice()).max(0.0));
        }
    }
    NonnegMatrix::from_vec(rows, data)
}

/// Entrywise product.
pub fn hadamard(a: &NonnegMatrix, b: &NonnegMatrix) -> Result<NonnegMatrix> {
    if a.n() != b.n() {
        return Err(Error::ShapeMismatch(a.n(), b.n()));
    }
    NonnegMatrix::from_vec(a.n(), a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).collect())
}

/// Entrywise r-th power.
pub fn entrywise_power(a: &NonnegMatrix, r: f64) -> Result<NonnegMatrix> {
    a.map(|x| x.powf(r))
}

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 100_000;
/// Blocks at most this large fall back to the dense eigen solver.
const DENSE_FALLBACK_DIM: usize = dense_eig::MAX_DIM;

/// Perron root of a nonnegative matrix.
///
/// The matrix is split into strongly connected components; each irreducible
/// block is handled by shifted power iteration with Collatz–Wielandt bounds
/// `min (Mx)_i/x_i ≤ ρ ≤ max (Mx)_i/x_i` as the stopping test.
pub fn spectral_radius(m: &NonnegMatrix) -> f64 {
    let n = m.n();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut rho = 0.0f64;
    for comp in tarjan_scc(&g) {
        let mut verts: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        verts.sort_unstable();
        let r = if verts.len() == 1 {
            m[(verts[0], verts[0])]
        } else {
            irreducible_radius(&m.submatrix(&verts, &verts))
        };
        rho = rho.max(r);
    }
    rho
}

fn irreducible_radius(b: &NonnegMatrix) -> f64 {
    let n = b.n();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| (0..n).filter(|&j| b[(i, j)] > 0.0).map(|j| (j, b[(i, j)])).collect())
        .collect();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..POWER_MAX_ITERS {
        for (yi, row) in y.iter_mut().zip(&rows) {
            *yi = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
        let (mut l, mut h) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            if *xi > 0.0 {
                let r = yi / xi;
                l = l.min(r);
                h = h.max(r);
            }
        }
        lo = lo.max(l);
        hi = hi.min(h);
        if hi - lo <= POWER_TOL * hi {
            return 0.5 * (lo + hi);
        }
        // shift by the current estimate so the iteration matrix is primitive
        let shift = 0.5 * (l + h);
        let mut norm = 0.0f64;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi + shift * *xi;
            norm = norm.max(*xi);
        }
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    let mid = 0.5 * (lo + hi.min(f64::MAX));
    if n <= DENSE_FALLBACK_DIM {
        if let Ok(r) = dense_eig::spectral_radius(&b.to_complex()) {
            return r.clamp(lo, hi.max(lo));
        }
    }
    log::warn!("power iteration did not converge for a {n}x{n} block; bracket [{lo}, {hi}]");
    mid
}

/// Spectral radius of a complex matrix via its eigenvalues.
pub fn spectral_radius_complex(a: &ComplexMatrix) -> Result<f64> {
    dense_eig::spectral_radius(a)
}

/// Samples `(r, ρ(M^[r])^(1/r))`; the curve decreases to the maximal cycle mean.
pub fn limit_eigenvalue_curve(m: &NonnegMatrix, rs: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(r) = rs.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::invalid(format!("exponent {r} must be positive")));
    }
    let top = m.as_slice().iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return Ok(rs.iter().map(|&r| (r, 0.0)).collect());
    }
    // ρ((cM)^[r])^(1/r) = c ρ(M^[r])^(1/r); scaling keeps large powers finite
    let scaled = m.map(|x| x / top)?;
    rs.iter()
        .map(|&r| {
            let p = entrywise_power(&scaled, r)?;
            Ok((r, top * spectral_radius(&p).powf(1.0 / r)))
        })
        .collect()
}

/// `(ρ_max, ρ(M), ρ(pat M))`, the three quantities of Friedland's sandwich.
pub fn friedland_quantities(m: &NonnegMatrix) -> (f64, f64, f64) {
    (max_cycle_mean(m), spectral_radius(m), spectral_radius(&pattern_nonneg(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{factorial, permutations};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn brute_permanent(a: &ComplexMatrix) -> Complex64 {
        let n = a.n();
        permutations(n)
            .iter()
            .map(|p| (0..n).map(|i| a[(i, p[i])]).product::<Complex64>())
            .sum()
    }

    fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_vec(n, data).unwrap()
    }

    fn random_nonneg(rng: &mut ChaCha8Rng, n: usize, density: f64) -> NonnegMatrix {
        let data = (0..n * n)
            .map(|_| if rng.gen_bool(density) { rng.gen_range(0.0..2.0) } else { 0.0 })
            .collect();
        NonnegMatrix::from_vec(n, data).unwrap()
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(pattern(&ComplexMatrix::identity(3)), NonnegMatrix::identity(3));
        let ones = ComplexMatrix::from_real_rows(&[vec![2.0, -1.0], vec![0.5, 3.0]]).unwrap();
        assert_eq!(pattern(&ones), NonnegMatrix::filled(2, 1.0).unwrap());
        let comp = ComplexMatrix::companion(&[c(1.0), c(2.0), c(3.0), c(1.0)]).unwrap();
        let expected = NonnegMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(pattern(&comp), expected);
    }

    #[test]
    fn permanent_examples() {
        assert_eq!(permanent(&ComplexMatrix::identity(5)).unwrap(), c(1.0));
        for k in 1..=6 {
            let ones = ComplexMatrix::from_real_rows(&vec![vec![1.0; k]; k]).unwrap();
            assert_eq!(permanent(&ones).unwrap(), c(factorial(k)));
        }
        let m = ComplexMatrix::from_real_rows(&[vec![2.0, 3.0], vec![5.0, 7.0]]).unwrap();
        assert_eq!(permanent(&m).unwrap(), c(2.0 * 7.0 + 3.0 * 5.0));
        assert!(permanent(&ComplexMatrix::zeros(21)).is_err());
    }

    #[test]
    fn ryser_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=6 {
            let a = random_complex(&mut rng, n);
            let d = permanent(&a).unwrap() - brute_permanent(&a);
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn determinant_of_small_matrices() {
        let m = ComplexMatrix::from_real_rows(&[vec![2.0, 3.0], vec![5.0, 7.0]]).unwrap();
        assert!((determinant(&m) - c(-1.0)).norm() < 1e-14);
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(determinant(&m), c(-1.0));
    }

    #[test]
    fn compound_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_complex(&mut rng, 4);
        assert_eq!(compound(&a, 1).unwrap(), a);
        let full = compound(&a, 4).unwrap();
        assert_eq!(full.n(), 1);
        assert!((full[(0, 0)] - determinant(&a)).norm() < 1e-14);
        let d = ComplexMatrix::diag(&[c(2.0), c(3.0), c(5.0)]);
        let c2 = compound(&d, 2).unwrap();
        for (r, s) in subsets(3, 2).iter().enumerate() {
            for col in 0..3 {
                let expected = if r == col { s.iter().map(|&i| d[(i, i)]).product() } else { c(0.0) };
                assert!((c2[(r, col)] - expected).norm() < 1e-14);
            }
        }
        assert!(compound(&a, 0).is_err());
    }

    #[test]
    fn permanental_compound_examples() {
        for n in 2..=5 {
            let ones = NonnegMatrix::filled(n, 1.0).unwrap();
            for k in 1..=n {
                let p = permanental_compound_nonneg(&ones, k).unwrap();
                assert!(p.as_slice().iter().all(|&x| x == factorial(k)));
            }
        }
        // cycle permutation matrix: every compound is a permutation matrix
        let perm = NonnegMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        for k in 1..=4 {
            let p = permanental_compound_nonneg(&perm, k).unwrap();
            let r = p.n();
            for i in 0..r {
                assert_eq!(p.row(i).iter().sum::<f64>(), 1.0);
                assert_eq!((0..r).map(|j| p[(j, i)]).sum::<f64>(), 1.0);
            }
        }
        let a = ComplexMatrix::from_real_rows(&[vec![-2.0, 1.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(permanental_compound(&a, 1).unwrap(), a);
    }

    #[test]
    fn size_cap_is_reported() {
        let a = ComplexMatrix::identity(14);
        // C(14, 7) = 3432 > 3000
        assert!(matches!(compound(&a, 7), Err(Error::SizeCap { rows: 3432, .. })));
    }

    #[test]
    fn spectral_radius_examples() {
        for n in 1..=6 {
            let ones = NonnegMatrix::filled(n, 1.0).unwrap();
            assert!((spectral_radius(&ones) - n as f64).abs() < 1e-10 * n as f64);
        }
        let perm = NonnegMatrix::from_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!((spectral_radius(&perm) - 1.0).abs() < 1e-10);
        for (n, k) in [(4, 2), (5, 2), (6, 3)] {
            let rows = binomial(n, k);
            let m = NonnegMatrix::filled(rows, factorial(k)).unwrap();
            let expected = rows as f64 * factorial(k);
            assert!((spectral_radius(&m) - expected).abs() < 1e-10 * expected);
        }
        assert_eq!(spectral_radius(&NonnegMatrix::zeros(3)), 0.0);
    }

    #[test]
    fn spectral_radius_agrees_with_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.gen_range(1..=7);
            let m = random_nonneg(&mut rng, n, 0.5);
            let a = spectral_radius(&m);
            let b = dense_eig::spectral_radius(&m.to_complex()).unwrap();
            assert!((a - b).abs() <= 1e-8 * (1.0 + b), "{a} vs {b}");
        }
    }

    #[test]
    fn hadamard_and_powers() {
        let a = NonnegMatrix::from_rows(&[vec![1.0, 2.0], vec![8.0, 1.0]]).unwrap();
        let h = hadamard(&a, &NonnegMatrix::identity(2)).unwrap();
        assert_eq!(h, NonnegMatrix::diag(&[1.0, 1.0]).unwrap());
        assert_eq!(entrywise_power(&a, 1.0).unwrap(), a);
        assert_eq!(
            entrywise_power(&a, 2.0).unwrap(),
            NonnegMatrix::from_rows(&[vec![1.0, 4.0], vec![64.0, 1.0]]).unwrap()
        );
        assert!(hadamard(&a, &NonnegMatrix::identity(3)).is_err());
    }

    #[test]
    fn limit_curve_examples() {
        let d = NonnegMatrix::diag(&[0.5, 3.0, 2.0]).unwrap();
        for (_, v) in limit_eigenvalue_curve(&d, &[1.0, 2.0, 8.0]).unwrap() {
            assert!((v - 3.0).abs() < 1e-10);
        }
        let ones = NonnegMatrix::filled(3, 1.0).unwrap();
        for (r, v) in limit_eigenvalue_curve(&ones, &[1.0, 2.0, 4.0, 16.0]).unwrap() {
            assert!((v - 3f64.powf(1.0 / r)).abs() < 1e-10);
        }
    }

    #[test]
    fn friedland_sandwich_on_curve() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let n = rng.gen_range(2..=6);
            let m = random_nonneg(&mut rng, n, 0.6);
            let (rho_max, _, rho_pat) = friedland_quantities(&m);
            for (r, v) in limit_eigenvalue_curve(&m, &[1.0, 2.0, 4.0, 8.0, 32.0]).unwrap() {
                assert!(rho_max <= v * (1.0 + 1e-9));
                assert!(v <= rho_pat.powf(1.0 / r) * rho_max * (1.0 + 1e-9));
            }
        }
    }
}
