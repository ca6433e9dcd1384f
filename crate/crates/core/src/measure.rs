//! Lebesgue measure of the positive spectrum and sufficient gap conditions.
//!
//! The high-energy probability of belonging to the spectrum,
//! `P_σ = lim_{K→∞} |σ ∩ [0, K]| / K`, is 1 for the tight chain and 0 for every
//! loose one. It is never evaluated as a limit; [`measure_table`] reports the
//! finite-K fractions and a fitted power-law exponent instead.

use crate::bands::{gaps, positive_bands};
use crate::dispersion::r_coefficient;
use crate::error::{Error, Result};
use crate::model::{ChainSpec, Interval};
use crate::real::{lit, sin_pi, Real};

/// `|σ(H) ∩ [0, K]|` and friends.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport<T> {
    pub spec: ChainSpec<T>,
    pub window: Interval<T>,
    pub measure: T,
    pub fraction: T,
    pub band_count: usize,
    pub gap_count: usize,
    pub resolution: T,
}

/// Measure of the positive spectrum in `[0, K]`, summed over the bands in E.
pub fn spectrum_measure<T: Real>(spec: &ChainSpec<T>, k_window: T, resolution: T) -> Result<MeasureReport<T>> {
    if !(k_window.is_finite() && k_window > T::zero()) {
        return Err(Error::invalid("K", format!("must be finite and positive, got {k_window}")));
    }
    let window = Interval::new(T::zero(), k_window);
    let bands = positive_bands(spec, k_window.sqrt(), resolution)?;
    let mut measure = T::zero();
    let mut band_count = 0;
    for b in &bands {
        let lo = b.e_lo.max(window.lo);
        let hi = b.e_hi.min(window.hi);
        if hi >= lo {
            measure = measure + (hi - lo);
            band_count += 1;
        }
    }
    let gap_count = gaps(&bands, window).len();
    let fraction = (measure / k_window).max(T::zero()).min(T::one());
    Ok(MeasureReport {
        spec: *spec,
        window,
        measure,
        fraction,
        band_count,
        gap_count,
        resolution,
    })
}

/// Finite-K fractions plus the least-squares slope of `ln fraction` against `ln K`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureTable<T> {
    pub rows: Vec<MeasureReport<T>>,
    /// `None` with fewer than two windows or a vanishing fraction.
    pub decay_exponent: Option<T>,
}

pub fn measure_table<T: Real>(spec: &ChainSpec<T>, windows: &[T], resolution: T) -> Result<MeasureTable<T>> {
    let rows = windows
        .iter()
        .map(|&k| spectrum_measure(spec, k, resolution))
        .collect::<Result<Vec<_>>>()?;
    let decay_exponent = fit_log_log(&rows);
    Ok(MeasureTable { rows, decay_exponent })
}

fn fit_log_log<T: Real>(rows: &[MeasureReport<T>]) -> Option<T> {
    if rows.len() < 2 || rows.iter().any(|r| r.fraction <= T::zero()) {
        return None;
    }
    let n = lit::<T>(rows.len() as f64);
    let xs: Vec<T> = rows.iter().map(|r| r.window.hi.ln()).collect();
    let ys: Vec<T> = rows.iter().map(|r| r.fraction.ln()).collect();
    let mx = xs.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = ys.iter().fold(T::zero(), |a, &b| a + b) / n;
    let sxx = xs.iter().fold(T::zero(), |a, &x| a + (x - mx) * (x - mx));
    if sxx == T::zero() {
        return None;
    }
    let sxy = xs.iter().zip(&ys).fold(T::zero(), |a, (&x, &y)| a + (x - mx) * (y - my));
    Some(sxy / sxx)
}

/// Outcome of the sufficient gap conditions at a single `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// `r(k)|sin kℓ sin kπ| > 2`.
    InGapStrong,
    /// `|sin kℓ sin kπ| > 8/k²`; implies the strong condition since `r(k) > k²/4`.
    InGapAsymptotic,
    Inconclusive,
}

impl Certificate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certificate::InGapStrong => "in_gap_strong",
            Certificate::InGapAsymptotic => "in_gap_asymptotic",
            Certificate::Inconclusive => "inconclusive",
        }
    }

    pub fn in_gap(&self) -> bool {
        !matches!(self, Certificate::Inconclusive)
    }
}

/// Both gap conditions evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateDetail<T> {
    pub k: T,
    pub strong: bool,
    pub asymptotic: bool,
    pub certificate: Certificate,
}

fn sine_product<T: Real>(ell: T, k: T) -> T {
    ((k * ell).sin() * sin_pi(k)).abs()
}

/// Evaluates both gap conditions at `k` on a loose chain.
pub fn certify<T: Real>(spec: &ChainSpec<T>, k: T) -> Result<CertificateDetail<T>> {
    if spec.is_tight() {
        return Err(Error::invalid("link length", "gap certificates need a loose chain"));
    }
    if !(k.is_finite() && k > T::zero()) {
        return Err(Error::invalid("k", format!("must be finite and positive, got {k}")));
    }
    let s = sine_product(spec.link_length(), k);
    let strong = r_coefficient(k) * s > lit(2.0);
    let asymptotic = s > lit::<T>(8.0) / (k * k);
    let certificate = if asymptotic {
        Certificate::InGapAsymptotic
    } else if strong {
        Certificate::InGapStrong
    } else {
        Certificate::Inconclusive
    };
    Ok(CertificateDetail {
        k,
        strong,
        asymptotic,
        certificate,
    })
}

/// The most stringent gap condition satisfied at `k`.
pub fn gap_certificate<T: Real>(spec: &ChainSpec<T>, k: T) -> Result<Certificate> {
    Ok(certify(spec, k)?.certificate)
}

/// `k ∈ M_ℓ`, i.e. `|sin kℓ| > 2√2/k`.
pub fn m_ell_membership<T: Real>(k: T, ell: T) -> bool {
    if !(k > T::zero() && ell > T::zero()) {
        return false;
    }
    let s = if ell == T::PI() { sin_pi(k) } else { (k * ell).sin() };
    s.abs() > lit::<T>(2.0) * T::SQRT_2() / k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::ReducedDispersion;
    use std::f64::consts::PI;

    #[test]
    fn tight_fraction_is_one() {
        let r = spectrum_measure(&ChainSpec::tight(), 100.0, 1e-3).unwrap();
        assert_eq!(r.fraction, 1.0);
        assert_eq!((r.band_count, r.gap_count), (1, 0));
    }

    #[test]
    fn certificates_at_anchor_are_inconclusive() {
        let spec = ChainSpec::new(1.0).unwrap();
        for m in 1..20 {
            assert_eq!(gap_certificate(&spec, m as f64 * PI).unwrap(), Certificate::Inconclusive);
            assert_eq!(gap_certificate(&spec, m as f64).unwrap(), Certificate::Inconclusive);
        }
        assert!(gap_certificate(&ChainSpec::tight(), 2.5).is_err());
    }

    #[test]
    fn strong_does_not_imply_asymptotic() {
        // r(10) ≈ 25.26: the strong threshold 2/r ≈ 0.0792 sits below 8/k² = 0.08
        let k = 10.0_f64;
        let r = r_coefficient(k);
        assert!(2.0 / r < 8.0 / (k * k));
    }

    #[test]
    fn membership_examples() {
        assert!(!m_ell_membership(PI, 1.0));
        assert!(m_ell_membership(PI / 2.0 + 2.0 * PI, 1.0));
        assert!(!m_ell_membership(0.5 * PI, 1.0)); // 1 < 2√2/k for k < 2√2
        assert!(!m_ell_membership(3.0, PI));
    }

    #[test]
    fn strong_certificate_is_sound() {
        let spec = ChainSpec::new(1.0).unwrap();
        let d = ReducedDispersion::positive(spec);
        for i in 1..20000 {
            let k = 0.003 * i as f64;
            let c = certify(&spec, k).unwrap();
            if c.asymptotic {
                assert!(c.strong, "k = {k}");
            }
            if c.strong {
                assert!(d.phi(k).abs() > 1.0, "k = {k}");
            }
        }
    }

    #[test]
    fn decay_exponent_of_exact_power_law() {
        let spec = ChainSpec::new(1.0).unwrap();
        let row = |k: f64, f: f64| MeasureReport {
            spec,
            window: Interval::new(0.0, k),
            measure: f * k,
            fraction: f,
            band_count: 0,
            gap_count: 0,
            resolution: 1e-3,
        };
        let rows = [row(10.0, 1.0), row(100.0, 0.1), row(1000.0, 0.01)];
        assert!((fit_log_log(&rows).unwrap() + 1.0).abs() < 1e-12);
    }
}
