use proptest::prelude::*;
use rand::Rng;

use tropspec::bounds::{
    hop_check, lower_bound, proof_chain, upper_bound_report, upper_constant, BoundReport, ReportOptions,
};
use tropspec::combinatorics::{factorial, subsets};
use tropspec::compounds::{compound, spectral_radius, spectral_radius_complex};
use tropspec::dense_eig::eigenvalues;
use tropspec::trop_spectra::{log_tropical_trace, tropical_eigenvalues_with, Method};
use tropspec::verify::{
    instance_rng, random_complex, random_dominant, random_nonneg, random_polynomial, DENSITIES,
};
use tropspec::{Complex64, NonnegMatrix};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn complex_radius_below_modulus_radius(seed: u64, n in 1usize..=8, d in 0usize..3) {
        let a = random_complex(&mut instance_rng(seed, 0), n, DENSITIES[d], -2.0, 2.0);
        let rho = spectral_radius_complex(&a).unwrap();
        prop_assert!(rho <= spectral_radius(&a.abs()) * (1.0 + 1e-9));
    }

    #[test]
    fn radius_is_monotone(seed: u64, n in 1usize..=8, d in 0usize..3) {
        let mut rng = instance_rng(seed, 0);
        let a = random_nonneg(&mut rng, n, DENSITIES[d], -2.0, 2.0);
        let extra = random_nonneg(&mut rng, n, 0.3, -2.0, 1.0);
        let b = NonnegMatrix::from_vec(
            n,
            a.as_slice().iter().zip(extra.as_slice()).map(|(x, y)| x + y).collect(),
        ).unwrap();
        prop_assert!(a.le(&b));
        prop_assert!(spectral_radius(&a) <= spectral_radius(&b) * (1.0 + 1e-9));
    }

    #[test]
    fn compound_eigenvalues_are_products(seed: u64, n in 1usize..=5, k in 1usize..=5) {
        prop_assume!(k <= n);
        let mut rng = instance_rng(seed, 0);
        let a = random_complex(&mut rng, n, 1.0, -1.0, 1.0);
        let lambdas = eigenvalues(&a).unwrap().lambdas;
        let mut products: Vec<Complex64> = subsets(n, k)
            .iter()
            .map(|s| s.iter().map(|&i| lambdas[i]).product())
            .collect();
        let mu = eigenvalues(&compound(&a, k).unwrap()).unwrap().lambdas;
        let scale = mu.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for z in &mu {
            let (best, dist) = products
                .iter()
                .enumerate()
                .map(|(i, p)| (i, (p - z).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            prop_assert!(dist <= 1e-7 * scale, "no product near {z}");
            products.swap_remove(best);
        }
    }

    #[test]
    fn upper_constant_below_falling_factorial(seed: u64, n in 1usize..=6, d in 0usize..3) {
        let a = random_complex(&mut instance_rng(seed, 0), n, DENSITIES[d], 0.0, 0.0);
        for k in 1..=n {
            let bound = factorial(n) / factorial(n - k);
            prop_assert!(upper_constant(&a, k).unwrap() <= bound * (1.0 + 1e-9));
        }
    }

    #[test]
    fn routes_agree(seed: u64, n in 1usize..=7, d in 0usize..3) {
        let m = random_nonneg(&mut instance_rng(seed, 0), n, DENSITIES[d], -6.0, 6.0);
        let a = tropical_eigenvalues_with(&m, Method::Coeff).gammas;
        let b = tropical_eigenvalues_with(&m, Method::Eval).gammas;
        prop_assert_eq!(a.entries().len(), b.entries().len());
        for (x, y) in a.entries().iter().zip(b.entries()) {
            prop_assert_eq!(x.multiplicity, y.multiplicity);
            prop_assert!(x.value == y.value || (x.value - y.value).abs() <= 1e-9 * (1.0 + x.value.abs()));
        }
    }

    #[test]
    fn saturated_iff_trace_meets_prefix(seed: u64, n in 1usize..=6, d in 0usize..3) {
        let m = random_nonneg(&mut instance_rng(seed, 0), n, DENSITIES[d], -3.0, 3.0);
        let s = tropical_eigenvalues_with(&m, Method::Coeff);
        let sums = s.gammas.log_prefix_sums();
        for k in 0..=n {
            let tr = log_tropical_trace(&m, k).unwrap();
            let equal = tr.is_finite() && (tr - sums[k]).abs() <= 1e-9 * (1.0 + tr.abs());
            prop_assert_eq!(s.trace_saturated(k), equal);
        }
    }

    #[test]
    fn upper_bound_holds(seed: u64, n in 2usize..=7, d in 0usize..3) {
        let a = random_complex(&mut instance_rng(seed, 0), n, DENSITIES[d], -4.0, 4.0);
        let report = upper_bound_report(&a, &ReportOptions::default()).unwrap();
        prop_assert!(report.all_upper_hold());
    }

    #[test]
    fn report_json_roundtrip(seed: u64, n in 1usize..=5, d in 0usize..3) {
        let a = random_complex(&mut instance_rng(seed, 0), n, DENSITIES[d], -4.0, 4.0);
        let opts = ReportOptions { lower: true, seed: Some(seed), ..Default::default() };
        let report = upper_bound_report(&a, &opts).unwrap();
        let back: BoundReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        prop_assert_eq!(back, report);
    }

    #[test]
    fn lower_bound_holds_when_returned(seed: u64, n in 1usize..=5, dominant: bool) {
        let mut rng = instance_rng(seed, 0);
        let a = if dominant {
            random_dominant(&mut rng, n)
        } else {
            let density = DENSITIES[rng.gen_range(0..3)];
            random_complex(&mut rng, n, density, -2.0, 2.0)
        };
        let eig = eigenvalues(&a).unwrap();
        let prefix = tropical_eigenvalues_with(&a.abs(), Method::Coeff).prefix_products();
        for k in 1..=n.min(4) {
            if let Some(rec) = lower_bound(&a, k, 1e-9).unwrap().record {
                prop_assert!(rec.l_k * prefix[k] <= eig.prefix[k] * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn root_bounds_hold(seed: u64, degree in 1usize..=15, sparse: bool) {
        let p = random_polynomial(&mut instance_rng(seed, 0), degree, sparse);
        prop_assert!(hop_check(&p, 1e-9).unwrap().all_hold());
    }

    #[test]
    fn proof_chain_links_hold(seed: u64, n in 1usize..=6, d in 0usize..3) {
        let a = random_complex(&mut instance_rng(seed, 0), n, DENSITIES[d], -4.0, 4.0);
        for k in 1..=n {
            let chain = proof_chain(&a, k, 1e-9).unwrap();
            prop_assert!(chain.entrywise_domination);
            prop_assert_eq!(chain.links(1e-9), [true; 3]);
        }
    }
}
