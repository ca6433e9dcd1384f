//! Reduced dispersion functions Φ: a nonzero energy belongs to the
//! absolutely continuous spectrum iff `Φ = cos θ` is solvable, i.e. `|Φ| ≤ 1`.
//!
//! | chain | branch | Φ |
//! |-------|--------|---|
//! | tight | `E = k²` | `cos kπ` |
//! | tight | `E = -κ²` | `cosh κπ` |
//! | loose | `E = k²` | `cos kℓ cos kπ - r(k) sin kℓ sin kπ` |
//! | loose | `E = -κ²`, κ > 1 | `f_ℓ(κ) = cosh κ(π-ℓ) - A(κ) sinh κℓ sinh κπ` |
//! | loose | `E = -κ²`, κ < 1 | `cosh κℓ cosh κπ + sinh κℓ sinh κπ (κ⁴-2κ²+5)/(4(1-κ²))` |
//!
//! with `r(k) = (k⁴+2k²+5)/(4(k²+1))` and `A(κ) = (κ²-3)²/(4(κ²-1))`.

use crate::model::ChainSpec;
use crate::real::{cos_pi, cosh_scaled, lit, ln_sinh, sin_pi, sinh_scaled, Real};

/// Which half-line of energies a dispersion function describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    /// Variable `k`, energy `k²`.
    Positive,
    /// Variable `κ`, energy `-κ²`.
    Negative,
}

/// Coefficient `r(k) = (k⁴+2k²+5)/(4(k²+1))` of the loose positive dispersion.
pub fn r_coefficient<T: Real>(k: T) -> T {
    let k2 = k * k;
    (k2 * k2 + lit::<T>(2.0) * k2 + lit(5.0)) / (lit::<T>(4.0) * (k2 + T::one()))
}

/// `r'(k) = k(k²+3)(k²-1) / (2(k²+1)²)`.
pub fn r_coefficient_derivative<T: Real>(k: T) -> T {
    let k2 = k * k;
    k * (k2 + lit(3.0)) * (k - T::one()) * (k + T::one()) / (lit::<T>(2.0) * (k2 + T::one()).powi(2))
}

/// `A(κ) = (κ²-3)²/(4(κ²-1))`, the coefficient of `sinh κℓ sinh κπ` in `f_ℓ`.
pub fn a_coefficient<T: Real>(kappa: T) -> T {
    let q = kappa * kappa - lit(3.0);
    q * q / (lit::<T>(4.0) * (kappa - T::one()) * (kappa + T::one()))
}

/// `A'(κ) = κ(κ²-3)(κ²+1) / (2(κ²-1)²)`.
pub fn a_coefficient_derivative<T: Real>(kappa: T) -> T {
    let k2 = kappa * kappa;
    let m = (kappa - T::one()) * (kappa + T::one());
    kappa * (k2 - lit(3.0)) * (k2 + T::one()) / (lit::<T>(2.0) * m * m)
}

/// `f_ℓ(κ)` for κ > 1, evaluated in an exponentially rescaled form so it
/// saturates to ±∞ with the right sign instead of producing NaN.
pub fn f_ell<T: Real>(ell: T, kappa: T) -> T {
    let (scaled, s) = f_ell_scaled(ell, kappa);
    unscale(scaled, s)
}

/// `f_ℓ'(κ)` for κ > 1, rescaled like [`f_ell`].
pub fn f_ell_derivative<T: Real>(ell: T, kappa: T) -> T {
    let pi = T::PI();
    let s = kappa * (pi + ell);
    let d = kappa * (pi - ell);
    let w = (d.abs() - s).exp();
    let (sl, sp) = (sinh_scaled(kappa * ell), sinh_scaled(kappa * pi));
    let (cl, cp) = (cosh_scaled(kappa * ell), cosh_scaled(kappa * pi));
    let first = (pi - ell) * d.signum() * sinh_scaled(d.abs()) * w;
    let scaled = first
        - a_coefficient_derivative(kappa) * sl * sp
        - a_coefficient(kappa) * (ell * cl * sp + pi * sl * cp);
    unscale(scaled, s)
}

fn f_ell_scaled<T: Real>(ell: T, kappa: T) -> (T, T) {
    let pi = T::PI();
    let s = kappa * (pi + ell);
    let d = kappa * (pi - ell);
    let first = cosh_scaled(d) * (d.abs() - s).exp();
    let scaled = first - a_coefficient(kappa) * sinh_scaled(kappa * ell) * sinh_scaled(kappa * pi);
    (scaled, s)
}

fn unscale<T: Real>(scaled: T, log_scale: T) -> T {
    if scaled == T::zero() || scaled.is_nan() {
        return scaled;
    }
    scaled * log_scale.exp()
}

/// `(cosh κ(π-ℓ) - c) / (sinh κℓ sinh κπ)` computed in log space; exact
/// zero when `c = 1` and `ℓ = π`.
fn hyperbolic_ratio<T: Real>(ell: T, kappa: T, c: T) -> T {
    let pi = T::PI();
    let d = (kappa * (pi - ell)).abs();
    // cosh d - c = 2 sinh²(d/2) + (1 - c), both non-negative
    let a = if d == T::zero() {
        T::neg_infinity()
    } else {
        T::LN_2() + lit::<T>(2.0) * ln_sinh(d / lit(2.0))
    };
    let one_minus_c = T::one() - c;
    let b = if one_minus_c <= T::zero() {
        T::neg_infinity()
    } else {
        one_minus_c.ln()
    };
    let hi = a.max(b);
    if hi == T::neg_infinity() {
        return T::zero();
    }
    let lse = hi + ((a - hi).exp() + (b - hi).exp()).ln();
    (lse - ln_sinh(kappa * ell) - ln_sinh(kappa * pi)).exp()
}

/// The reduced dispersion function of one chain on one energy branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDispersion<T> {
    spec: ChainSpec<T>,
    sign: Sign,
}

impl<T: Real> ReducedDispersion<T> {
    pub fn new(spec: ChainSpec<T>, sign: Sign) -> Self {
        Self { spec, sign }
    }

    pub fn positive(spec: ChainSpec<T>) -> Self {
        Self::new(spec, Sign::Positive)
    }

    pub fn negative(spec: ChainSpec<T>) -> Self {
        Self::new(spec, Sign::Negative)
    }

    pub fn spec(&self) -> ChainSpec<T> {
        self.spec
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Energy carried by the variable `x` (`k` or `κ`).
    pub fn energy(&self, x: T) -> T {
        match self.sign {
            Sign::Positive => x * x,
            Sign::Negative => -x * x,
        }
    }

    /// Φ at `x` (`k` on the positive branch, `κ` on the negative one).
    pub fn phi(&self, x: T) -> T {
        let ell = self.spec.link_length();
        match (self.sign, self.spec.is_tight()) {
            (Sign::Positive, true) => cos_pi(x),
            (Sign::Negative, true) => (x * T::PI()).cosh(),
            (Sign::Positive, false) => {
                (x * ell).cos() * cos_pi(x) - r_coefficient(x) * (x * ell).sin() * sin_pi(x)
            }
            (Sign::Negative, false) => {
                if x >= T::one() {
                    f_ell(ell, x)
                } else {
                    let k2 = x * x;
                    let b = (k2 * k2 - lit::<T>(2.0) * k2 + lit(5.0))
                        / (lit::<T>(4.0) * (T::one() - x) * (T::one() + x));
                    (x * ell).cosh() * (x * T::PI()).cosh() + (x * ell).sinh() * (x * T::PI()).sinh() * b
                }
            }
        }
    }

    /// dΦ/dx.
    pub fn dphi(&self, x: T) -> T {
        let ell = self.spec.link_length();
        let pi = T::PI();
        match (self.sign, self.spec.is_tight()) {
            (Sign::Positive, true) => -pi * sin_pi(x),
            (Sign::Negative, true) => pi * (x * pi).sinh(),
            (Sign::Positive, false) => {
                let (sl, cl) = ((x * ell).sin(), (x * ell).cos());
                let (sp, cp) = (sin_pi(x), cos_pi(x));
                let r = r_coefficient(x);
                -ell * sl * cp - pi * cl * sp - r_coefficient_derivative(x) * sl * sp
                    - r * (ell * cl * sp + pi * sl * cp)
            }
            (Sign::Negative, false) => {
                if x > T::one() {
                    f_ell_derivative(ell, x)
                } else {
                    // κ < 1 side: differentiate the cosh-cosh form numerically-stably
                    let h = T::epsilon().cbrt() * x.max(T::one());
                    let lo = (x - h).max(T::zero());
                    let hi = (x + h).min(T::one() - T::epsilon());
                    (self.phi(hi) - self.phi(lo)) / (hi - lo)
                }
            }
        }
    }

    /// A well-scaled quantity with the sign of `Φ(x) - c`, for `|c| ≤ 1`.
    ///
    /// On the loose negative branch with κ > 1 this is
    /// `(Φ - c) / (sinh κℓ sinh κπ)`, which stays O(1) where Φ itself overflows.
    pub fn level_offset(&self, x: T, c: T) -> T {
        if self.sign == Sign::Negative && !self.spec.is_tight() && x > T::one() {
            hyperbolic_ratio(self.spec.link_length(), x, c) - a_coefficient(x)
        } else {
            self.phi(x) - c
        }
    }

    /// `|Φ(x)| ≤ 1`.
    pub fn in_spectrum(&self, x: T) -> bool {
        self.level_offset(x, T::one()) <= T::zero() && self.level_offset(x, -T::one()) >= T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn loose(ell: f64) -> ChainSpec<f64> {
        ChainSpec::new(ell).unwrap()
    }

    #[test]
    fn loose_positive_matches_direct_formula() {
        let d = ReducedDispersion::positive(loose(1.3));
        for i in 1..400 {
            let k = 0.05 * i as f64;
            let r = (k.powi(4) + 2.0 * k * k + 5.0) / (4.0 * (k * k + 1.0));
            let direct = (1.3 * k).cos() * (PI * k).cos() - r * (1.3 * k).sin() * (PI * k).sin();
            assert!((d.phi(k) - direct).abs() < 1e-12 * (1.0 + r));
        }
    }

    #[test]
    fn f_ell_matches_direct_formula_and_limits() {
        for &ell in &[0.3, 1.0, PI, 5.0] {
            for i in 1..300 {
                let kappa = 1.0 + 0.01 * i as f64;
                let a = (kappa * kappa - 3.0).powi(2) / (4.0 * (kappa * kappa - 1.0));
                let direct = (kappa * (PI - ell)).cosh() - a * (kappa * ell).sinh() * (kappa * PI).sinh();
                let got = f_ell(ell, kappa);
                assert!((got - direct).abs() <= 1e-11 * direct.abs().max(1.0), "{ell} {kappa} {got} {direct}");
            }
            // both ends diverge to -inf
            assert!(f_ell(ell, 1.0 + 1e-9) < -1e6);
            assert!(f_ell(ell, 60.0) < -1e6);
        }
        assert_eq!(f_ell(PI, 3.0_f64.sqrt()), 1.0);
        // saturates instead of producing NaN
        assert_eq!(f_ell(20.0, 500.0), f64::NEG_INFINITY);
    }

    #[test]
    fn negative_below_one_never_in_spectrum() {
        for &ell in &[0.01, 1.0, 7.0] {
            let d = ReducedDispersion::negative(loose(ell));
            for i in 1..100 {
                let kappa = 0.0099 * i as f64;
                assert!(d.phi(kappa) > 1.0);
                assert!(!d.in_spectrum(kappa));
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for &ell in &[0.0, 0.3, 1.0, PI, 4.0] {
            let spec = ChainSpec::new(ell).unwrap();
            for sign in [Sign::Positive, Sign::Negative] {
                let d = ReducedDispersion::new(spec, sign);
                let xs: Vec<f64> = match sign {
                    Sign::Positive => (1..200).map(|i| 0.037 * i as f64).collect(),
                    Sign::Negative => (1..150).map(|i| 1.05 + 0.02 * i as f64).collect(),
                };
                for x in xs {
                    let h = 1e-6;
                    let fd = (d.phi(x + h) - d.phi(x - h)) / (2.0 * h);
                    let an = d.dphi(x);
                    assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0), "{ell} {sign:?} {x}: {fd} vs {an}");
                }
            }
        }
    }

    #[test]
    fn level_offset_has_sign_of_phi_minus_c() {
        for &ell in &[0.5, 1.0, PI, 5.0] {
            let d = ReducedDispersion::negative(loose(ell));
            for i in 1..500 {
                let kappa = 1.0 + 0.01 * i as f64;
                let phi = d.phi(kappa);
                for &c in &[-1.0, -0.3, 0.0, 0.8, 1.0] {
                    let off = d.level_offset(kappa, c);
                    if (phi - c).abs() > 1e-9 * phi.abs().max(1.0) {
                        assert_eq!(off > 0.0, phi > c, "{ell} {kappa} {c}");
                    }
                }
            }
        }
        // exactly on the touching point for ell = pi
        let d = ReducedDispersion::negative(ChainSpec::<f64>::loose_pi());
        assert!(d.level_offset(3.0_f64.sqrt(), 1.0) <= 0.0);
    }

    #[test]
    fn small_ell_limit_is_cos_k_pi() {
        let ell = 1e-4;
        let d = ReducedDispersion::positive(loose(ell));
        for i in 0..=1000 {
            let k = 0.01 * i as f64;
            let bound = (1.0 - (k * ell).cos()) + r_coefficient(k) * (k * ell).sin().abs();
            assert!((d.phi(k) - (PI * k).cos()).abs() <= bound + 1e-15);
            if k <= 5.0 {
                assert!((d.phi(k) - (PI * k).cos()).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn coefficient_derivatives() {
        for i in 1..100 {
            let x = 1.02 + 0.05 * i as f64;
            let h = 1e-6;
            let fd = (r_coefficient(x + h) - r_coefficient(x - h)) / (2.0 * h);
            assert!((fd - r_coefficient_derivative(x)).abs() < 1e-6 * fd.abs().max(1.0));
            let fd = (a_coefficient(x + h) - a_coefficient(x - h)) / (2.0 * h);
            assert!((fd - a_coefficient_derivative(x)).abs() < 1e-5 * fd.abs().max(1.0));
        }
    }

    #[test]
    fn single_precision_agrees() {
        let d64 = ReducedDispersion::positive(loose(1.0));
        let d32 = ReducedDispersion::positive(ChainSpec::new(1.0_f32).unwrap());
        for i in 1..100 {
            let k = 0.1 * i as f64;
            assert!((d64.phi(k) - d32.phi(k as f32) as f64).abs() < 1e-3 * (1.0 + k * k));
        }
    }
}
