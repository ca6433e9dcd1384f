//! Solver output against independent dense scans of the plain formulas and
//! against finite differences.

use std::f64::consts::PI;

use ringchain::dispersion::{f_ell, f_ell_derivative};
use ringchain::{
    negative_bands, positive_bands, spectrum_measure, Band64, ChainSpec64, ReducedDispersion,
};

fn phi_plain(ell: f64, k: f64) -> f64 {
    let k2 = k * k;
    let r = (k2 * k2 + 2.0 * k2 + 5.0) / (4.0 * (k2 + 1.0));
    (k * ell).cos() * (k * PI).cos() - r * (k * ell).sin() * (k * PI).sin()
}

fn f_plain(ell: f64, kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    let a = (k2 - 3.0) * (k2 - 3.0) / (4.0 * (k2 - 1.0));
    (kappa * (PI - ell)).cosh() - a * (kappa * ell).sinh() * (kappa * PI).sinh()
}

fn covered(bands: &[Band64], e: f64) -> bool {
    let slack = 1e-9 * e.abs().max(1.0);
    bands.iter().any(|b| b.e_lo - slack <= e && e <= b.e_hi + slack)
}

#[test]
fn positive_bands_match_dense_scan() {
    for &ell in &[0.3, 1.0, 2.5, PI, 5.0] {
        let spec = ChainSpec64::new(ell).unwrap();
        let bands = positive_bands(&spec, 10.0, 1e-3).unwrap();
        for i in 1..200_000 {
            let k = 5e-5 * i as f64;
            let p = phi_plain(ell, k);
            if p.abs() < 1.0 - 1e-6 {
                assert!(covered(&bands, k * k), "ell = {ell}, k = {k}: |phi| = {} but no band", p.abs());
            } else if p.abs() > 1.0 + 1e-6 {
                assert!(!covered(&bands, k * k), "ell = {ell}, k = {k}: |phi| = {} inside a band", p.abs());
            }
        }
    }
}

#[test]
fn positive_band_edges_sit_on_the_levels() {
    for &ell in &[0.3, 1.0, 2.5, 5.0] {
        let spec = ChainSpec64::new(ell).unwrap();
        for b in positive_bands(&spec, 10.0, 1e-3).unwrap() {
            for (e, clipped, q) in [(b.e_lo, b.clipped_lo, b.edge_theta_lo), (b.e_hi, b.clipped_hi, b.edge_theta_hi)] {
                if clipped || e == 0.0 {
                    continue;
                }
                let p = phi_plain(ell, e.sqrt());
                assert!((p.abs() - 1.0).abs() < 1e-6, "ell = {ell}, E = {e}: phi = {p}");
                assert!((p - q.cos()).abs() < 1e-6, "edge theta {} vs phi {p}", q.theta());
            }
        }
    }
}

#[test]
fn negative_bands_match_dense_scan() {
    for &ell in &[0.5, 1.0, 2.0, PI, 5.0] {
        let spec = ChainSpec64::new(ell).unwrap();
        let bands = negative_bands(&spec).unwrap();
        for i in 1..100_000 {
            let kappa = 1.0 + 5e-5 * i as f64;
            let f = f_plain(ell, kappa);
            let e = -kappa * kappa;
            if f.abs() < 1.0 - 1e-6 {
                assert!(covered(&bands, e), "ell = {ell}, kappa = {kappa}: f = {f} but no band");
            } else if f.abs() > 1.0 + 1e-6 {
                assert!(!covered(&bands, e), "ell = {ell}, kappa = {kappa}: f = {f} inside a band");
            }
        }
        for b in &bands {
            for e in [b.e_lo, b.e_hi] {
                let f = f_plain(ell, (-e).sqrt());
                assert!((f.abs() - 1.0).abs() < 1e-5, "ell = {ell}, edge {e}: f = {f}");
            }
        }
    }
}

#[test]
fn measure_matches_dense_scan() {
    let ell = 2.5;
    let k_window: f64 = 400.0;
    let step = 1e-5;
    let n = (k_window.sqrt() / step) as usize;
    let mut dense = 0.0;
    for i in 0..n {
        let k = (i as f64 + 0.5) * step;
        if phi_plain(ell, k).abs() <= 1.0 {
            dense += 2.0 * k * step;
        }
    }
    let m = spectrum_measure(&ChainSpec64::new(ell).unwrap(), k_window, 1e-3).unwrap();
    assert!((m.measure - dense).abs() < 1e-2, "{} vs {dense}", m.measure);
}

#[test]
fn derivatives_match_finite_differences() {
    for &ell in &[0.0, 0.3, 1.0, PI, 5.0] {
        let spec = ChainSpec64::new(ell).unwrap();
        let pos = ReducedDispersion::positive(spec);
        for i in 1..400 {
            let k = 0.0371 * i as f64;
            let h = 1e-6;
            let fd = (pos.phi(k + h) - pos.phi(k - h)) / (2.0 * h);
            let scale = 1.0 + pos.dphi(k).abs();
            assert!((fd - pos.dphi(k)).abs() < 1e-6 * scale, "ell = {ell}, k = {k}");
        }
        if ell > 0.0 {
            for i in 1..300 {
                let kappa = 1.0 + 0.0173 * i as f64;
                let h = 1e-6 * kappa;
                let fd = (f_ell(ell, kappa + h) - f_ell(ell, kappa - h)) / (2.0 * h);
                let d = f_ell_derivative(ell, kappa);
                assert!((fd - d).abs() < 1e-6 * (1.0 + d.abs()), "ell = {ell}, kappa = {kappa}: {fd} vs {d}");
            }
        }
    }
}

#[test]
fn scaled_dispersion_matches_plain_formula() {
    for &ell in &[0.5, 1.0, 2.0, 5.0] {
        for i in 1..200 {
            let kappa = 1.0 + 0.02 * i as f64;
            let plain = f_plain(ell, kappa);
            let scaled = f_ell(ell, kappa);
            assert!((plain - scaled).abs() <= 1e-10 * plain.abs().max(1.0), "ell = {ell}, kappa = {kappa}");
        }
    }
}
