//! Flat bands, absolutely continuous bands and gaps.

use crate::dispersion::{ReducedDispersion, Sign};
use crate::error::{Error, Result};
use crate::model::{
    Band, BandKind, ChainSpec, FlatBand, FlatBandSource, Interval, Quasimomentum, SpectralParameter,
    Touching,
};
use crate::real::{lit, Real};
use crate::scan::{check_resolution, Edge, RawBand, Scan};
use crate::secular::closed_form_value;

/// Default scan step in `k` (or `κ`).
pub const DEFAULT_RESOLUTION: f64 = 1e-3;

/// Number of θ samples used to certify that a flat band is θ-independent.
pub const FLAT_BAND_THETA_SAMPLES: usize = 16;

/// First scanned κ above the pole of `f_ℓ` at κ = 1.
fn kappa_start<T: Real>() -> T {
    T::one() + lit::<T>(1e-8).max(T::epsilon() * lit(64.0))
}

fn theta_grid<T: Real>() -> Vec<Quasimomentum<T>> {
    (0..FLAT_BAND_THETA_SAMPLES)
        .map(|i| {
            let t = -T::PI() + T::TAU() * lit(i as f64) / lit(FLAT_BAND_THETA_SAMPLES as f64);
            Quasimomentum::new(t).expect("finite grid")
        })
        .collect()
}

fn flat_residual<T: Real>(spec: &ChainSpec<T>, sp: &SpectralParameter<T>) -> T {
    theta_grid()
        .iter()
        .map(|q| closed_form_value(spec, sp, q).abs())
        .fold(T::zero(), |a, b| a.max(b))
}

/// Infinitely degenerate eigenvalues up to `e_max`.
///
/// Tight chain: `{-1} ∪ {n² : n ≥ 1}`. Loose chain: `{n² : n ≥ 0}`.
pub fn flat_bands<T: Real>(spec: &ChainSpec<T>, e_max: T) -> Result<Vec<FlatBand<T>>> {
    if !(e_max.is_finite() && e_max > T::zero()) {
        return Err(Error::invalid("e_max", format!("must be finite and positive, got {e_max}")));
    }
    let mut out = Vec::new();
    if spec.is_tight() {
        let sp = SpectralParameter::from_kappa(T::one())?;
        out.push(FlatBand {
            energy: -T::one(),
            source: FlatBandSource::KappaSquaredMinusOne,
            embedded: ReducedDispersion::negative(*spec).in_spectrum(T::one()),
            residual: flat_residual(spec, &sp),
        });
    }
    let positive = ReducedDispersion::positive(*spec);
    let first = if spec.is_tight() { 1 } else { 0 };
    let mut n = first;
    loop {
        let k = lit::<T>(n as f64);
        let energy = k * k;
        if energy > e_max {
            break;
        }
        let sp = if n == 0 { SpectralParameter::zero() } else { SpectralParameter::from_k(k)? };
        out.push(FlatBand {
            energy,
            source: FlatBandSource::SinKPi,
            embedded: positive.in_spectrum(k),
            residual: flat_residual(spec, &sp),
        });
        n += 1;
    }
    Ok(out)
}

/// Points of a loose chain that always lie in the spectrum: `k = mπ/ℓ` and integers.
pub fn anchor_points<T: Real>(spec: &ChainSpec<T>, k_max: T) -> Vec<T> {
    let mut out = Vec::new();
    let mut n = 1;
    while lit::<T>(n as f64) <= k_max {
        out.push(lit(n as f64));
        n += 1;
    }
    let ell = spec.link_length();
    if ell > T::zero() {
        let mut m = 1;
        loop {
            let k = lit::<T>(m as f64) * T::PI() / ell;
            if k > k_max {
                break;
            }
            out.push(k);
            m += 1;
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite anchors"));
    out
}

fn edge_theta<T: Real>(d: &ReducedDispersion<T>, edge: Edge, x: T) -> Quasimomentum<T> {
    match edge {
        Edge::Level(l) if l > 0 => Quasimomentum::zero(),
        Edge::Level(_) => Quasimomentum::zone_edge(),
        Edge::Clipped => {
            let phi = d.phi(x).max(-T::one()).min(T::one());
            Quasimomentum::new(phi.acos()).unwrap_or_else(|_| Quasimomentum::zero())
        }
    }
}

fn level_theta<T: Real>(level: i8) -> Quasimomentum<T> {
    if level > 0 {
        Quasimomentum::zero()
    } else {
        Quasimomentum::zone_edge()
    }
}

fn to_band<T: Real>(d: &ReducedDispersion<T>, raw: &RawBand<T>) -> Band<T> {
    let touchings = raw
        .touchings
        .iter()
        .map(|&(x, level)| Touching {
            energy: d.energy(x),
            theta: level_theta(level),
        })
        .collect::<Vec<_>>();
    match d.sign() {
        Sign::Positive => Band {
            e_lo: raw.lo * raw.lo,
            e_hi: raw.hi * raw.hi,
            edge_theta_lo: edge_theta(d, raw.lo_edge, raw.lo),
            edge_theta_hi: edge_theta(d, raw.hi_edge, raw.hi),
            kind: BandKind::PositiveAc,
            clipped_lo: raw.lo_edge == Edge::Clipped,
            clipped_hi: raw.hi_edge == Edge::Clipped,
            touchings,
        },
        Sign::Negative => {
            let mut touchings = touchings;
            touchings.reverse();
            Band {
                e_lo: -raw.hi * raw.hi,
                e_hi: -raw.lo * raw.lo,
                edge_theta_lo: edge_theta(d, raw.hi_edge, raw.hi),
                edge_theta_hi: edge_theta(d, raw.lo_edge, raw.lo),
                kind: BandKind::NegativeAc,
                clipped_lo: raw.hi_edge == Edge::Clipped,
                clipped_hi: raw.lo_edge == Edge::Clipped,
                touchings,
            }
        }
    }
}

fn validate_k_max<T: Real>(k_max: T) -> Result<()> {
    if !(k_max.is_finite() && k_max > T::zero()) {
        return Err(Error::invalid("k_max", format!("must be finite and positive, got {k_max}")));
    }
    Ok(())
}

/// Positive absolutely continuous bands for `0 ≤ k ≤ k_max`, sorted by energy.
///
/// Edges are bisected to full working precision. Tangencies `|Φ| = 1` inside a
/// band are reported as [`Touching`]s; a tangency from outside becomes a
/// zero-width band.
pub fn positive_bands<T: Real>(spec: &ChainSpec<T>, k_max: T, resolution: T) -> Result<Vec<Band<T>>> {
    validate_k_max(k_max)?;
    check_resolution(spec.link_length(), resolution)?;
    if spec.is_tight() {
        // |cos kπ| ≤ 1 everywhere; cos kπ = ±1 at the integers
        let mut touchings = Vec::new();
        let mut n = 1;
        while lit::<T>(n as f64) < k_max {
            let k = lit::<T>(n as f64);
            touchings.push(Touching {
                energy: k * k,
                theta: level_theta(if n % 2 == 0 { 1 } else { -1 }),
            });
            n += 1;
        }
        let d = ReducedDispersion::positive(*spec);
        return Ok(vec![Band {
            e_lo: T::zero(),
            e_hi: k_max * k_max,
            edge_theta_lo: Quasimomentum::zero(),
            edge_theta_hi: edge_theta(&d, Edge::Clipped, k_max),
            kind: BandKind::PositiveAc,
            clipped_lo: false,
            clipped_hi: true,
            touchings,
        }]);
    }
    let d = ReducedDispersion::positive(*spec);
    let anchors = anchor_points(spec, k_max);
    let scan = Scan::new(&d, T::zero(), k_max, resolution, &anchors);
    // Φ(0) = 1: the spectrum starts at E = 0 with θ = 0
    let raw = scan.bands(Some(Edge::Level(1)), None);
    Ok(raw.iter().map(|b| to_band(&d, b)).collect())
}

/// `f_ℓ(√3) - 1 = cosh(√3(π - ℓ)) - 1` is below the tangency tolerance, so the
/// gap around -3 is not resolvable in the working precision.
pub fn is_numerically_pi<T: Real>(spec: &ChainSpec<T>) -> bool {
    if spec.is_tight() {
        return false;
    }
    // A(√3) = 0, so the tangency tolerance there is 256·eps·cosh(√3(π - ℓ));
    // dividing through by the cosh keeps the test finite for any ℓ
    let s3 = lit::<T>(3.0).sqrt();
    let c = (s3 * (T::PI() - spec.link_length())).cosh();
    T::one() - c.recip() <= lit::<T>(256.0) * T::epsilon()
}

fn kappa_cap<T: Real>(d: &ReducedDispersion<T>) -> Result<T> {
    let mut cap = lit::<T>(8.0);
    while d.level_offset(cap, -T::one()) >= T::zero() {
        cap = cap * lit(2.0);
        if cap > lit(1e6) {
            return Err(Error::Solver {
                message: "f_ell stays above -1 up to kappa = 1e6".into(),
                profile: Vec::new(),
            });
        }
    }
    Ok(cap)
}

/// Negative absolutely continuous bands, sorted by energy, using the default
/// resolution.
pub fn negative_bands<T: Real>(spec: &ChainSpec<T>) -> Result<Vec<Band<T>>> {
    negative_bands_with(spec, lit(DEFAULT_RESOLUTION))
}

/// Negative absolutely continuous bands: `|f_ℓ(κ)| ≤ 1` on `κ > 1`.
///
/// Exactly one band when ℓ = π (the θ = 0 double root at -3 is reported as a
/// touching) and exactly two otherwise, with -3 strictly inside the gap. Any
/// other outcome is a [`Error::Solver`] carrying the scanned profile.
pub fn negative_bands_with<T: Real>(spec: &ChainSpec<T>, resolution: T) -> Result<Vec<Band<T>>> {
    if spec.is_tight() {
        return Ok(Vec::new());
    }
    if !(resolution.is_finite() && resolution > T::zero() && resolution <= lit(1e-2)) {
        return Err(Error::invalid("resolution", format!("must lie in (0, 1e-2], got {resolution}")));
    }
    let d = ReducedDispersion::negative(*spec);
    let cap = kappa_cap(&d)?;
    let s3 = lit::<T>(3.0).sqrt();
    let start = kappa_start::<T>();
    let scan = Scan::new(&d, start, cap, resolution, &[s3]);
    let fail = |message: String| Error::Solver {
        message,
        profile: scan.profile(256),
    };
    // the pole at κ = 1+ seeds the scan below the band
    if scan.state(start) != crate::scan::State::Below {
        return Err(fail(format!("f_ell is not below -1 at kappa = {start}")));
    }
    let mut raw = scan.bands(None, None);

    if is_numerically_pi(spec) {
        if raw.len() == 2 && raw[1].lo - raw[0].hi < lit(1e-6) {
            let mut merged = raw.remove(0);
            let upper = raw.remove(0);
            let mid = merged.hi + (upper.lo - merged.hi) / lit(2.0);
            merged.touchings.push((mid, 1));
            merged.touchings.extend(upper.touchings);
            merged.hi = upper.hi;
            merged.hi_edge = upper.hi_edge;
            raw = vec![merged];
        }
        if raw.len() != 1 {
            return Err(fail(format!("expected one negative band for ell = pi, found {}", raw.len())));
        }
        if !raw[0].touchings.iter().any(|&(x, l)| l > 0 && (x - s3).abs() < lit(1e-6)) {
            return Err(fail("no theta = 0 tangency near kappa = sqrt 3 for ell = pi".into()));
        }
    } else {
        if raw.len() != 2 {
            return Err(fail(format!("expected two negative bands, found {}", raw.len())));
        }
        let in_gap = raw[0].hi < s3 && s3 < raw[1].lo && d.level_offset(s3, T::one()) > T::zero();
        if !in_gap {
            return Err(fail("E = -3 is not strictly inside the negative gap".into()));
        }
    }
    let mut bands: Vec<Band<T>> = raw.iter().map(|b| to_band(&d, b)).collect();
    bands.reverse();
    Ok(bands)
}

fn validate_range<T: Real>(range: &Interval<T>) -> Result<()> {
    if !(range.lo.is_finite() && range.hi.is_finite() && range.lo >= T::zero() && range.hi > range.lo) {
        return Err(Error::invalid("k range", format!("need 0 <= lo < hi, got [{}, {}]", range.lo, range.hi)));
    }
    Ok(())
}

/// All `k > 0` in `range` with `Φ(k) = cos θ`, ascending.
///
/// Tight chain: exactly `{|θ/π + 2n|} ∩ range`. Loose chain: scanned with
/// tangential roots included and every root bisected to full precision.
pub fn dispersion<T: Real>(
    spec: &ChainSpec<T>,
    q: &Quasimomentum<T>,
    range: Interval<T>,
    resolution: T,
) -> Result<Vec<SpectralParameter<T>>> {
    validate_range(&range)?;
    check_resolution(spec.link_length(), resolution)?;
    let ks: Vec<T> = if spec.is_tight() {
        let t = q.theta().abs() / T::PI();
        let mut ks = Vec::new();
        let mut n = 0;
        loop {
            let base = lit::<T>(2.0 * n as f64);
            let lo = base - t;
            if lo > range.hi {
                break;
            }
            for k in [lo, base + t] {
                if k > T::zero() && k >= range.lo && k <= range.hi {
                    ks.push(k);
                }
            }
            n += 1;
        }
        ks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        ks.dedup();
        ks
    } else {
        let d = ReducedDispersion::positive(*spec);
        let anchors = anchor_points(spec, range.hi);
        let lo = range.lo.max(T::epsilon());
        let scan = Scan::new(&d, lo, range.hi, resolution, &anchors);
        scan.level_roots(q.cos())
    };
    ks.into_iter().map(SpectralParameter::from_k).collect()
}

/// All `κ > 1` with `f_ℓ(κ) = cos θ`, ascending in κ (descending in energy).
pub fn negative_dispersion<T: Real>(
    spec: &ChainSpec<T>,
    q: &Quasimomentum<T>,
    resolution: T,
) -> Result<Vec<SpectralParameter<T>>> {
    if spec.is_tight() {
        return Ok(Vec::new());
    }
    if !(resolution.is_finite() && resolution > T::zero() && resolution <= lit(1e-2)) {
        return Err(Error::invalid("resolution", format!("must lie in (0, 1e-2], got {resolution}")));
    }
    let d = ReducedDispersion::negative(*spec);
    let cap = kappa_cap(&d)?;
    let scan = Scan::new(&d, kappa_start(), cap, resolution, &[lit::<T>(3.0).sqrt()]);
    scan.level_roots(q.cos())
        .into_iter()
        .map(SpectralParameter::from_kappa)
        .collect()
}

/// Gaps of `bands` inside `window`: the closure of `window` minus the bands.
pub fn gaps<T: Real>(bands: &[Band<T>], window: Interval<T>) -> Vec<Interval<T>> {
    let mut out = Vec::new();
    let mut cursor = window.lo;
    for b in bands {
        if b.e_hi < window.lo || b.e_lo > window.hi {
            continue;
        }
        if b.e_lo > cursor {
            out.push(Interval::new(cursor, b.e_lo.min(window.hi)));
        }
        cursor = cursor.max(b.e_hi);
    }
    if cursor < window.hi {
        out.push(Interval::new(cursor, window.hi));
    }
    out
}

/// Flat bands, ac bands and gaps of one chain over `[E_neg, k_max²]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandReport<T> {
    pub spec: ChainSpec<T>,
    pub flat: Vec<FlatBand<T>>,
    pub negative: Vec<Band<T>>,
    pub positive: Vec<Band<T>>,
    /// Gaps of the positive ac spectrum in `[0, k_max²]`.
    pub positive_gaps: Vec<Interval<T>>,
}

pub fn band_report<T: Real>(spec: &ChainSpec<T>, k_max: T, resolution: T) -> Result<BandReport<T>> {
    let positive = positive_bands(spec, k_max, resolution)?;
    let positive_gaps = gaps(&positive, Interval::new(T::zero(), k_max * k_max));
    Ok(BandReport {
        spec: *spec,
        flat: flat_bands(spec, k_max * k_max)?,
        negative: negative_bands(spec)?,
        positive,
        positive_gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(ell: f64) -> ChainSpec<f64> {
        ChainSpec::new(ell).unwrap()
    }

    #[test]
    fn flat_band_examples() {
        let tight: Vec<f64> = flat_bands(&ChainSpec::tight(), 10.0).unwrap().iter().map(|f| f.energy).collect();
        assert_eq!(tight, vec![-1.0, 1.0, 4.0, 9.0]);
        let loose = flat_bands(&spec(1.0), 5.0).unwrap();
        assert_eq!(loose.iter().map(|f| f.energy).collect::<Vec<_>>(), vec![0.0, 1.0, 4.0]);
        assert!(loose.iter().all(|f| f.embedded && f.residual == 0.0));
        let t = flat_bands(&ChainSpec::tight(), 10.0).unwrap();
        assert!(!t[0].embedded);
        assert_eq!(t[0].source, FlatBandSource::KappaSquaredMinusOne);
    }

    #[test]
    fn tight_positive_is_one_band() {
        let b = positive_bands(&ChainSpec::tight(), 5.0, 1e-3).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].e_lo, b[0].e_hi), (0.0, 25.0));
        assert_eq!(b[0].touchings.len(), 4);
    }

    #[test]
    fn loose_bands_are_sorted_and_contain_anchors() {
        let s = spec(1.0);
        let bands = positive_bands(&s, 10.0, 1e-3).unwrap();
        assert!(bands.windows(2).all(|w| w[0].e_hi < w[1].e_lo));
        for k in anchor_points(&s, 10.0) {
            let e = k * k;
            assert!(bands.iter().any(|b| b.e_lo - 1e-9 <= e && e <= b.e_hi + 1e-9), "anchor {k}");
        }
        assert!(gaps(&bands, Interval::new(0.0, 100.0)).len() >= 5);
    }

    #[test]
    fn ell_pi_positive_has_touchings_at_integers() {
        let bands = positive_bands(&ChainSpec::loose_pi(), 6.0, 1e-3).unwrap();
        for n in 1..6 {
            let e = (n * n) as f64;
            let band = bands.iter().find(|b| b.contains(e)).expect("integer inside a band");
            assert!(band.touchings.iter().any(|t| (t.energy - e).abs() < 1e-8), "n = {n}: {band:?}");
        }
    }

    #[test]
    fn negative_dichotomy() {
        let one = negative_bands(&ChainSpec::<f64>::loose_pi()).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].touchings.iter().any(|t| (t.energy + 3.0).abs() < 1e-8));
        for ell in [0.5, 1.0, 2.0, 5.0] {
            let two = negative_bands(&spec(ell)).unwrap();
            assert_eq!(two.len(), 2, "ell {ell}");
            assert!(two[0].e_hi < -3.0 && -3.0 < two[1].e_lo);
            assert!(two[1].e_hi < -1.0);
        }
        // fourteen decimals, as typed on a command line
        let typed: f64 = "3.14159265358979".parse().unwrap();
        assert!(is_numerically_pi(&spec(typed)));
        assert_eq!(negative_bands(&spec(typed)).unwrap().len(), 1);
        assert!(!is_numerically_pi(&spec(1000.0)));
        assert_eq!(negative_bands(&spec(1000.0)).unwrap().len(), 2);
        assert!(negative_bands(&ChainSpec::<f64>::tight()).unwrap().is_empty());
    }

    #[test]
    fn tight_dispersion_examples() {
        let ks = |theta: f64, hi: f64| -> Vec<f64> {
            dispersion(&ChainSpec::tight(), &Quasimomentum::new(theta).unwrap(), Interval::new(0.0, hi), 1e-3)
                .unwrap()
                .iter()
                .map(|p| p.k().unwrap())
                .collect()
        };
        assert_eq!(ks(0.0, 5.0), vec![2.0, 4.0]);
        assert_eq!(ks(PI / 2.0, 3.0), vec![0.5, 1.5, 2.5]);
        assert_eq!(ks(PI / 2.0, 3.0), ks(-PI / 2.0, 3.0));
    }

    #[test]
    fn gaps_complement_bands() {
        let b = |lo: f64, hi: f64| Band {
            e_lo: lo,
            e_hi: hi,
            edge_theta_lo: Quasimomentum::zero(),
            edge_theta_hi: Quasimomentum::zero(),
            kind: BandKind::PositiveAc,
            clipped_lo: false,
            clipped_hi: false,
            touchings: vec![],
        };
        let g = gaps(&[b(0.0, 1.0), b(2.0, 3.0)], Interval::new(0.0, 5.0));
        assert_eq!(g, vec![Interval::new(1.0, 2.0), Interval::new(3.0, 5.0)]);
    }
}
