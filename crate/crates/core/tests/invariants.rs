use std::f64::consts::PI;

use proptest::prelude::*;
use ringchain::secular::vertex_scattering;
use ringchain::{
    dispersion, flat_bands, gaps, negative_bands, positive_bands, ChainSpec, ChainSpec64, Interval, Quasimomentum64,
    ReducedDispersion, VertexCoupling64,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coupling_is_unitary_of_order_n(n in 2usize..12) {
        let u = VertexCoupling64::new(n).unwrap();
        prop_assert!(u.unitarity_residual() < 1e-12);
        prop_assert!(u.order_residual() < 1e-12);
    }

    #[test]
    fn scattering_is_unitary(n in 3usize..7, log_k in -2.0f64..4.0) {
        let s = vertex_scattering(n, 10f64.powf(log_k)).unwrap();
        let id = ringchain::CMatrix::identity(n);
        prop_assert!(s.matmul(&s.adjoint()).sub(&id).max_abs() < 1e-10);
    }

    #[test]
    fn positive_roots_are_even_in_theta(ell in 0.05f64..6.0, theta in 0.0f64..PI) {
        let spec = ChainSpec64::new(ell).unwrap();
        let range = Interval::new(0.0, 6.0);
        let a = dispersion(&spec, &Quasimomentum64::new(theta).unwrap(), range, 1e-3).unwrap();
        let b = dispersion(&spec, &Quasimomentum64::new(-theta).unwrap(), range, 1e-3).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bands_and_gaps_partition_the_window(ell in 0.05f64..6.0) {
        let spec = ChainSpec64::new(ell).unwrap();
        let k_max = 8.0;
        let bands = positive_bands(&spec, k_max, 1e-3).unwrap();
        let window = Interval::new(0.0, k_max * k_max);
        for w in bands.windows(2) {
            prop_assert!(w[0].e_hi < w[1].e_lo);
        }
        prop_assert!(bands.iter().all(|b| b.e_lo <= b.e_hi));
        let band_len: f64 = bands.iter().map(|b| b.width()).sum();
        let gap_len: f64 = gaps(&bands, window).iter().map(|g| g.length()).sum();
        prop_assert!((band_len + gap_len - window.length()).abs() < 1e-9 * window.length());
    }

    #[test]
    fn band_edges_reach_the_levels(ell in 0.05f64..6.0) {
        let spec = ChainSpec64::new(ell).unwrap();
        let d = ReducedDispersion::positive(spec);
        for b in positive_bands(&spec, 8.0, 1e-3).unwrap() {
            for (e, clipped, q) in [(b.e_lo, b.clipped_lo, b.edge_theta_lo), (b.e_hi, b.clipped_hi, b.edge_theta_hi)] {
                if !clipped && e > 0.0 {
                    prop_assert!((d.phi(e.sqrt()) - q.cos()).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn roots_lie_in_bands(ell in 0.05f64..6.0, theta in -PI..PI) {
        let spec = ChainSpec64::new(ell).unwrap();
        let bands = positive_bands(&spec, 8.0, 1e-3).unwrap();
        let q = Quasimomentum64::new(theta).unwrap();
        for sp in dispersion(&spec, &q, Interval::new(0.0, 8.0), 1e-3).unwrap() {
            let e = sp.energy();
            prop_assert!(bands.iter().any(|b| b.e_lo - 1e-9 <= e && e <= b.e_hi + 1e-9), "E = {}", e);
        }
    }

    #[test]
    fn negative_bands_bracket_minus_three(ell in 0.05f64..12.0) {
        prop_assume!((ell - PI).abs() > 1e-3);
        let bands = negative_bands(&ChainSpec64::new(ell).unwrap()).unwrap();
        prop_assert_eq!(bands.len(), 2);
        prop_assert!(bands[0].e_hi < -3.0 && -3.0 < bands[1].e_lo);
        prop_assert!(bands[1].e_hi < -1.0);
    }

    #[test]
    fn flat_bands_do_not_depend_on_ell(ell in 0.01f64..10.0) {
        let flat = flat_bands(&ChainSpec64::new(ell).unwrap(), 50.0).unwrap();
        let energies: Vec<f64> = flat.iter().map(|f| f.energy).collect();
        prop_assert_eq!(energies, vec![0.0, 1.0, 4.0, 9.0, 16.0, 25.0, 36.0, 49.0]);
        prop_assert!(flat.iter().all(|f| f.residual < 1e-9));
    }
}

#[test]
fn single_precision_agrees_with_double() {
    for &ell in &[0.5f32, 1.0, 2.0] {
        let lo = negative_bands(&ChainSpec::<f32>::new(ell).unwrap()).unwrap();
        let hi = negative_bands(&ChainSpec64::new(ell as f64).unwrap()).unwrap();
        assert_eq!(lo.len(), hi.len());
        for (a, b) in lo.iter().zip(&hi) {
            assert!((a.e_lo as f64 - b.e_lo).abs() < 1e-3 * b.e_lo.abs());
            assert!((a.e_hi as f64 - b.e_hi).abs() < 1e-3 * b.e_hi.abs());
        }
        let lo = positive_bands(&ChainSpec::<f32>::new(ell).unwrap(), 4.0, 1e-3).unwrap();
        let hi = positive_bands(&ChainSpec64::new(ell as f64).unwrap(), 4.0, 1e-3).unwrap();
        assert_eq!(lo.len(), hi.len(), "ell = {ell}");
    }
}
