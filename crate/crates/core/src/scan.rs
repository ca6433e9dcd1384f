//! Sampling and root isolation for level sets of a reduced dispersion function.
//!
//! A scan turns `[lo, hi]` into a sorted list of points such that Φ is
//! monotone between neighbours: a uniform grid, merged with caller-supplied
//! anchors, refined where Φ jumps, plus every sign change of Φ' bisected to
//! an extremum. Level crossings are then unique per interval and are found by
//! bisection on a boolean predicate, which behaves at exact zeros.

use crate::dispersion::{a_coefficient, r_coefficient, ReducedDispersion, Sign};
use crate::error::{Error, Result};
use crate::real::{lit, to_f64, Real};

const MAX_REFINE_DEPTH: u32 = 10;
const REFINE_JUMP: f64 = 0.5;

/// Position of Φ relative to the band `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum State {
    Below,
    Inside,
    Above,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Point<T> {
    pub x: T,
    /// Interior extremum of Φ, or anchor; these are checked for tangency.
    pub special: bool,
}

/// Edge of a band in the scan variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Edge {
    /// `Φ = ±1`; carries the sign.
    Level(i8),
    /// Cut by the scan window.
    Clipped,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RawBand<T> {
    pub lo: T,
    pub hi: T,
    pub lo_edge: Edge,
    pub hi_edge: Edge,
    /// Interior tangencies `(x, sign of Φ)`.
    pub touchings: Vec<(T, i8)>,
}

/// Absolute tolerance for `|Φ(x)| = c` at a tangency: a few hundred ulps of
/// the largest term in Φ.
pub(crate) fn touch_tolerance<T: Real>(d: &ReducedDispersion<T>, x: T) -> T {
    let spec = d.spec();
    let ell = spec.link_length();
    let ulps = T::epsilon() * lit(256.0);
    let scale = match (d.sign(), spec.is_tight()) {
        (_, true) => T::one(),
        (Sign::Positive, false) => lit::<T>(2.0) + r_coefficient(x),
        (Sign::Negative, false) => {
            (x * (T::PI() - ell)).cosh() + a_coefficient(x).abs() * (x * ell).sinh() * (x * T::PI()).sinh()
        }
    };
    ulps * scale
}

/// Validates a scan resolution against the anchor families of a loose chain.
pub(crate) fn check_resolution<T: Real>(ell: T, resolution: T) -> Result<()> {
    if !(resolution.is_finite() && resolution > T::zero() && resolution <= lit(1e-2)) {
        return Err(Error::invalid("resolution", format!("must lie in (0, 1e-2], got {resolution}")));
    }
    let min_spacing = if ell > T::zero() { (T::PI() / ell).min(T::one()) } else { T::one() };
    if resolution >= min_spacing / lit(2.0) {
        return Err(Error::ResolutionTooCoarse {
            resolution: to_f64(resolution),
            min_spacing: to_f64(min_spacing),
        });
    }
    Ok(())
}

/// Bisects the boundary between `inside` (where `pred` holds) and `outside`,
/// to full working precision. Returns the last point where `pred` held.
pub(crate) fn bisect_boundary<T: Real>(mut inside: T, mut outside: T, pred: impl Fn(T) -> bool) -> T {
    for _ in 0..400 {
        let mid = inside + (outside - inside) / lit(2.0);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

fn slope_up<T: Real>(d: &ReducedDispersion<T>, x: T) -> Option<bool> {
    let s = d.dphi(x);
    if s.is_nan() {
        None
    } else {
        Some(s >= T::zero())
    }
}

pub(crate) struct Scan<'a, T> {
    pub d: &'a ReducedDispersion<T>,
    pub points: Vec<Point<T>>,
}

impl<'a, T: Real> Scan<'a, T> {
    /// Samples `[lo, hi]` with the given step, anchors, refinement and extrema.
    pub fn new(d: &'a ReducedDispersion<T>, lo: T, hi: T, step: T, anchors: &[T]) -> Self {
        let mut raw: Vec<Point<T>> = Vec::new();
        let n = ((hi - lo) / step).ceil().to_usize().unwrap_or(1).max(1);
        for i in 0..n {
            raw.push(Point { x: lo + step * lit(i as f64), special: false });
        }
        raw.push(Point { x: hi, special: false });
        raw.extend(
            anchors
                .iter()
                .filter(|&&a| a > lo && a < hi)
                .map(|&a| Point { x: a, special: true }),
        );
        raw.sort_by(|p, q| p.x.partial_cmp(&q.x).expect("finite sample"));
        let merge = lit::<T>(1e-9);
        let mut base: Vec<Point<T>> = Vec::with_capacity(raw.len());
        for p in raw {
            match base.last_mut() {
                Some(last) if (p.x - last.x).abs() <= merge * p.x.abs().max(T::one()) => {
                    // keep the anchor, but never move the window ends
                    if p.special && last.x != lo {
                        *last = p;
                    }
                }
                _ => base.push(p),
            }
        }
        if let Some(last) = base.last_mut() {
            last.x = hi;
        }

        let mut refined = Vec::with_capacity(base.len() * 2);
        for w in base.windows(2) {
            refined.push(w[0]);
            refine(d, w[0].x, w[1].x, 0, &mut refined);
        }
        refined.push(*base.last().expect("non-empty grid"));

        let mut points = Vec::with_capacity(refined.len() + refined.len() / 8);
        let mut prev_up = slope_up(d, refined[0].x);
        points.push(refined[0]);
        for w in refined.windows(2) {
            let (a, b) = (w[0].x, w[1].x);
            let up_b = slope_up(d, b);
            if let (Some(ua), Some(ub)) = (prev_up, up_b) {
                if ua != ub {
                    let x = bisect_boundary(a, b, |x| slope_up(d, x) == Some(ua));
                    let tiny = lit::<T>(1e-13) * x.abs().max(T::one());
                    if x - a <= tiny {
                        points.last_mut().expect("pushed").special = true;
                    } else if b - x <= tiny {
                        points.push(Point { x: b, special: true });
                        prev_up = up_b;
                        continue;
                    } else {
                        points.push(Point { x, special: true });
                    }
                }
            }
            points.push(w[1]);
            prev_up = up_b;
        }
        Self { d, points }
    }

    pub fn state(&self, x: T) -> State {
        if self.d.level_offset(x, T::one()) > T::zero() {
            State::Above
        } else if self.d.level_offset(x, -T::one()) < T::zero() {
            State::Below
        } else {
            State::Inside
        }
    }

    /// Level ±1 that Φ touches at a special point, if any.
    fn snap(&self, p: &Point<T>) -> Option<i8> {
        if !p.special {
            return None;
        }
        let phi = self.d.phi(p.x);
        if !phi.is_finite() {
            return None;
        }
        if (phi.abs() - T::one()).abs() <= touch_tolerance(self.d, p.x) {
            Some(if phi > T::zero() { 1 } else { -1 })
        } else {
            None
        }
    }

    fn inside_of(&self, level: i8, x: T) -> bool {
        if level > 0 {
            self.d.level_offset(x, T::one()) <= T::zero()
        } else {
            self.d.level_offset(x, -T::one()) >= T::zero()
        }
    }

    /// Maximal intervals with `|Φ| ≤ 1`. `start_edge` / `end_edge` override the
    /// edge type of a band touching the window ends.
    pub fn bands(&self, start_edge: Option<Edge>, end_edge: Option<Edge>) -> Vec<RawBand<T>> {
        let pts = &self.points;
        let states: Vec<(State, Option<i8>)> = pts
            .iter()
            .map(|p| match self.snap(p) {
                Some(level) => (State::Inside, Some(level)),
                None => (self.state(p.x), None),
            })
            .collect();

        let mut out = Vec::new();
        let mut open: Option<RawBand<T>> = None;
        if states[0].0 == State::Inside {
            open = Some(RawBand {
                lo: pts[0].x,
                hi: pts[0].x,
                lo_edge: start_edge.unwrap_or(Edge::Clipped),
                hi_edge: Edge::Clipped,
                touchings: Vec::new(),
            });
        }

        for i in 0..pts.len() - 1 {
            let (a, b) = (pts[i].x, pts[i + 1].x);
            let (sa, snap_a) = states[i];
            let (sb, snap_b) = states[i + 1];
            let mut crossings: Vec<(i8, bool)> = Vec::new(); // (level, entering band)
            if sb > sa {
                if sa == State::Below {
                    crossings.push((-1, true));
                }
                if sb == State::Above {
                    crossings.push((1, false));
                }
            } else if sb < sa {
                if sa == State::Above {
                    crossings.push((1, true));
                }
                if sb == State::Below {
                    crossings.push((-1, false));
                }
            }
            for (level, entering) in crossings {
                let root = if snap_a == Some(level) {
                    a
                } else if snap_b == Some(level) {
                    b
                } else if entering {
                    bisect_boundary(b, a, |x| self.inside_of(level, x))
                } else {
                    bisect_boundary(a, b, |x| self.inside_of(level, x))
                };
                if entering {
                    open = Some(RawBand {
                        lo: root,
                        hi: root,
                        lo_edge: Edge::Level(level),
                        hi_edge: Edge::Clipped,
                        touchings: Vec::new(),
                    });
                } else if let Some(mut band) = open.take() {
                    band.hi = root;
                    band.hi_edge = Edge::Level(level);
                    out.push(band);
                }
            }
            if let (Some(level), Some(band)) = (snap_b, open.as_mut()) {
                band.touchings.push((b, level));
            }
        }
        if let Some(mut band) = open.take() {
            band.hi = pts[pts.len() - 1].x;
            band.hi_edge = end_edge.unwrap_or(Edge::Clipped);
            out.push(band);
        }

        for band in &mut out {
            let (lo, hi) = (band.lo, band.hi);
            let near = |x: T, y: T| (x - y).abs() <= lit::<T>(1e-9) * x.abs().max(T::one());
            band.touchings.retain(|&(x, _)| lo == hi || !(near(x, lo) || near(x, hi)));
            band.touchings.dedup_by(|p, q| near(p.0, q.0));
            if lo == hi && band.touchings.is_empty() {
                if let Edge::Level(level) = band.lo_edge {
                    band.touchings.push((lo, level));
                }
            }
        }
        out
    }

    /// All `x` with `Φ(x) = c`, including tangential roots.
    pub fn level_roots(&self, c: T) -> Vec<T> {
        let pts = &self.points;
        let offsets: Vec<T> = pts.iter().map(|p| self.d.level_offset(p.x, c)).collect();
        let is_root: Vec<bool> = pts
            .iter()
            .zip(&offsets)
            .map(|(p, &g)| {
                if g == T::zero() {
                    return true;
                }
                if !p.special {
                    return false;
                }
                let phi = self.d.phi(p.x);
                phi.is_finite() && (phi - c).abs() <= touch_tolerance(self.d, p.x)
            })
            .collect();
        let mut roots = Vec::new();
        for i in 0..pts.len() {
            if is_root[i] {
                roots.push(pts[i].x);
            }
            if i + 1 < pts.len() && !is_root[i] && !is_root[i + 1] {
                let (ga, gb) = (offsets[i], offsets[i + 1]);
                if (ga > T::zero()) != (gb > T::zero()) {
                    let side_a = ga > T::zero();
                    roots.push(bisect_boundary(pts[i].x, pts[i + 1].x, |x| {
                        (self.d.level_offset(x, c) > T::zero()) == side_a
                    }));
                }
            }
        }
        roots.dedup_by(|p, q| (*p - *q).abs() <= lit::<T>(1e-9) * p.abs().max(T::one()));
        roots
    }

    /// Up to `max_len` evenly spread `(x, Φ(x) - 1)` samples for diagnostics.
    pub fn profile(&self, max_len: usize) -> Vec<(f64, f64)> {
        let stride = (self.points.len() / max_len.max(1)).max(1);
        self.points
            .iter()
            .step_by(stride)
            .map(|p| (to_f64(p.x), to_f64(self.d.level_offset(p.x, T::one()))))
            .collect()
    }
}

fn jump<T: Real>(d: &ReducedDispersion<T>, a: T, b: T) -> Option<T> {
    let du = d.level_offset(b, T::one()) - d.level_offset(a, T::one());
    let dl = d.level_offset(b, -T::one()) - d.level_offset(a, -T::one());
    let j = du.abs().max(dl.abs());
    if j.is_finite() {
        Some(j)
    } else {
        None
    }
}

fn refine<T: Real>(d: &ReducedDispersion<T>, a: T, b: T, depth: u32, out: &mut Vec<Point<T>>) {
    if depth >= MAX_REFINE_DEPTH {
        return;
    }
    match jump(d, a, b) {
        Some(j) if j > lit(REFINE_JUMP) => {
            let mid = a + (b - a) / lit(2.0);
            refine(d, a, mid, depth + 1, out);
            out.push(Point { x: mid, special: false });
            refine(d, mid, b, depth + 1, out);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChainSpec;
    use std::f64::consts::PI;

    #[test]
    fn bisect_boundary_returns_inside_point() {
        let x: f64 = bisect_boundary(0.0, 2.0, |x: f64| x * x <= 2.0);
        assert!(x * x <= 2.0);
        assert!((x - 2.0_f64.sqrt()).abs() < 1e-15);
        let y: f64 = bisect_boundary(2.0, 0.0, |x: f64| x * x >= 2.0);
        assert!(y * y >= 2.0 && (y - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn points_are_sorted_and_keep_anchors() {
        let d = ReducedDispersion::positive(ChainSpec::new(1.0).unwrap());
        let anchors = [PI, 2.0 * PI, 1.0, 2.0, 3.0];
        let scan = Scan::new(&d, 0.0, 7.0, 1e-3, &anchors);
        assert!(scan.points.windows(2).all(|w| w[0].x < w[1].x));
        for a in anchors {
            assert!(scan.points.iter().any(|p| p.x == a), "{a}");
        }
        assert_eq!(scan.points[0].x, 0.0);
        assert_eq!(scan.points.last().unwrap().x, 7.0);
    }

    #[test]
    fn extrema_are_inserted() {
        let d = ReducedDispersion::positive(ChainSpec::new(1.0).unwrap());
        let scan = Scan::new(&d, 0.0, 10.0, 1e-2, &[]);
        for w in scan.points.windows(2) {
            let (sa, sb) = (d.dphi(w[0].x) >= 0.0, d.dphi(w[1].x) >= 0.0);
            assert!(sa == sb || w[0].special || w[1].special);
        }
    }

    #[test]
    fn resolution_rules() {
        assert!(check_resolution(1.0, 1e-3).is_ok());
        assert!(check_resolution(1.0, 0.0).is_err());
        assert!(check_resolution(1.0, 0.05).is_err());
        assert!(matches!(check_resolution(400.0, 5e-3), Err(Error::ResolutionTooCoarse { .. })));
        assert!(check_resolution(400.0, 1e-3).is_ok());
    }

    #[test]
    fn tight_level_roots() {
        let d = ReducedDispersion::positive(ChainSpec::<f64>::tight());
        let scan = Scan::new(&d, 0.1, 5.0, 1e-3, &[1.0, 2.0, 3.0, 4.0]);
        let roots = scan.level_roots(0.0);
        let expected = [0.5, 1.5, 2.5, 3.5, 4.5];
        assert_eq!(roots.len(), expected.len());
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-12);
        }
    }
}
