//! Domain types: chain geometry, the rotating vertex coupling and the
//! spectral parametrisations shared by every other module.
//!
//! The period cell is reconstructed from the wave-function domains alone.
//! Tight chain: four ring arcs of length π/2 meet at one vertex, two running
//! to the right (`[0, π/2]`) and two arriving from the left (`[-π/2, 0]`).
//! Loose chain: the connecting link is split at its midpoint into two halves
//! of length ℓ/2, each ending at a degree-3 vertex that also carries two ring
//! arcs of length π/2.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::real::{lit, Real};

/// The cyclic "preferred orientation" coupling `(U - I)ψ + i(U + I)ψ' = 0`
/// with `U` the cyclic shift.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexCoupling<T> {
    degree: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> VertexCoupling<T> {
    /// Cyclic shift of size `n`: row `j` has a single 1 in column `j + 1 mod n`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDegree(n));
        }
        let matrix = CMatrix::from_fn(n, |i, j| {
            if j == (i + 1) % n {
                Complex::one()
            } else {
                Complex::zero()
            }
        });
        Ok(Self { degree: n, matrix })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// The n-th roots of unity `exp(2πi m/n)`, `m = 0..n`.
    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        let n = self.degree;
        (0..n)
            .map(|m| Complex::from_polar(T::one(), T::TAU() * lit(m as f64) / lit(n as f64)))
            .collect()
    }

    /// Eigenvector `v_j = λ^j` of the shift for eigenvalue `λ = exp(2πi m/n)`.
    pub fn eigenvector(&self, m: usize) -> Vec<Complex<T>> {
        let n = self.degree;
        let lambda = Complex::from_polar(T::one(), T::TAU() * lit((m % n) as f64) / lit(n as f64));
        let scale = T::one() / lit::<T>(n as f64).sqrt();
        (0..n).map(|j| lambda.powu(j as u32) * scale).collect()
    }

    /// `max |U*U - I|`.
    pub fn unitarity_residual(&self) -> T {
        self.matrix
            .adjoint()
            .matmul(&self.matrix)
            .sub(&CMatrix::identity(self.degree))
            .max_abs()
    }

    /// `max |U^n - I|`.
    pub fn order_residual(&self) -> T {
        self.matrix
            .pow(self.degree as u32)
            .sub(&CMatrix::identity(self.degree))
            .max_abs()
    }
}

/// Builds the cyclic-shift coupling of degree `n`.
pub fn make_coupling<T: Real>(n: usize) -> Result<VertexCoupling<T>> {
    VertexCoupling::new(n)
}

/// Tight (rings touching) or loose (rings joined by links) chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainModel {
    Tight,
    Loose,
}

/// A ring chain, parametrised only by the connecting link length ℓ.
/// Ring arcs are fixed at π/2 each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec<T> {
    link_length: T,
}

impl<T: Real> ChainSpec<T> {
    pub fn new(link_length: T) -> Result<Self> {
        if !link_length.is_finite() || link_length < T::zero() {
            return Err(Error::invalid(
                "link length",
                format!("must be finite and non-negative, got {link_length}"),
            ));
        }
        Ok(Self { link_length })
    }

    pub fn tight() -> Self {
        Self {
            link_length: T::zero(),
        }
    }

    /// Loose chain with ℓ = π exactly in the working precision.
    pub fn loose_pi() -> Self {
        Self {
            link_length: T::PI(),
        }
    }

    pub fn link_length(&self) -> T {
        self.link_length
    }

    pub fn model(&self) -> ChainModel {
        if self.link_length == T::zero() {
            ChainModel::Tight
        } else {
            ChainModel::Loose
        }
    }

    pub fn is_tight(&self) -> bool {
        self.model() == ChainModel::Tight
    }

    /// Length of one ring arc.
    pub fn arc_length() -> T {
        T::FRAC_PI_2()
    }

    /// Total length of edges in one period cell.
    pub fn cell_length(&self) -> T {
        lit::<T>(4.0) * Self::arc_length() + self.link_length
    }
}

/// Sign of the energy and the matching momentum variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch<T> {
    /// `E = k²`, `k > 0`.
    Positive { k: T },
    /// `E = -κ²`, `κ > 0`.
    Negative { kappa: T },
    Zero,
}

/// An energy together with its `k` or `κ` parametrisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter<T> {
    energy: T,
    branch: Branch<T>,
}

impl<T: Real> SpectralParameter<T> {
    pub fn from_energy(energy: T) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::invalid("energy", format!("must be finite, got {energy}")));
        }
        let branch = if energy > T::zero() {
            Branch::Positive { k: energy.sqrt() }
        } else if energy < T::zero() {
            Branch::Negative {
                kappa: (-energy).sqrt(),
            }
        } else {
            Branch::Zero
        };
        Ok(Self { energy, branch })
    }

    pub fn from_k(k: T) -> Result<Self> {
        if !(k.is_finite() && k > T::zero()) {
            return Err(Error::invalid("k", format!("must be finite and positive, got {k}")));
        }
        Ok(Self {
            energy: k * k,
            branch: Branch::Positive { k },
        })
    }

    pub fn from_kappa(kappa: T) -> Result<Self> {
        if !(kappa.is_finite() && kappa > T::zero()) {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and positive, got {kappa}"),
            ));
        }
        Ok(Self {
            energy: -kappa * kappa,
            branch: Branch::Negative { kappa },
        })
    }

    pub fn zero() -> Self {
        Self {
            energy: T::zero(),
            branch: Branch::Zero,
        }
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn branch(&self) -> Branch<T> {
        self.branch
    }

    /// `k` on the positive branch.
    pub fn k(&self) -> Option<T> {
        match self.branch {
            Branch::Positive { k } => Some(k),
            _ => None,
        }
    }

    /// `κ` on the negative branch.
    pub fn kappa(&self) -> Option<T> {
        match self.branch {
            Branch::Negative { kappa } => Some(kappa),
            _ => None,
        }
    }
}

/// Quasimomentum θ in the Brillouin zone `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Quasimomentum<T>(T);

impl<T: Real> Quasimomentum<T> {
    pub fn new(raw: T) -> Result<Self> {
        normalize_theta(raw)
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    /// θ = ±π, stored as `-π`.
    pub fn zone_edge() -> Self {
        Self(-T::PI())
    }

    pub fn theta(&self) -> T {
        self.0
    }

    /// `cos θ`, evaluated on `|θ|` so that `θ` and `-θ` agree bit for bit.
    pub fn cos(&self) -> T {
        self.0.abs().cos()
    }
}

/// Reduces `raw` into `[-π, π)`.
pub fn normalize_theta<T: Real>(raw: T) -> Result<Quasimomentum<T>> {
    if !raw.is_finite() {
        return Err(Error::invalid("theta", format!("must be finite, got {raw}")));
    }
    if -T::PI() <= raw && raw < T::PI() {
        return Ok(Quasimomentum(raw));
    }
    let two_pi = T::TAU();
    let mut r = raw - two_pi * (raw / two_pi).floor();
    if r >= T::PI() {
        r = r - two_pi;
    }
    if r < -T::PI() {
        r = -T::PI();
    }
    Ok(Quasimomentum(r))
}

/// Whether a band belongs to the positive or negative absolutely continuous spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandKind {
    PositiveAc,
    NegativeAc,
}

/// A point inside (or at the boundary of) a band where `|Φ| = 1` without a
/// crossing: a double root, i.e. two Floquet branches touching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Touching<T> {
    pub energy: T,
    pub theta: Quasimomentum<T>,
}

/// One maximal interval of absolutely continuous spectrum.
///
/// `edge_theta_*` is the quasimomentum reached at the edge: `0` where `Φ = 1`
/// and `-π` where `Φ = -1`. An edge cut by the scanning window is flagged as
/// clipped and its θ is `arccos Φ` there instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Band<T> {
    pub e_lo: T,
    pub e_hi: T,
    pub edge_theta_lo: Quasimomentum<T>,
    pub edge_theta_hi: Quasimomentum<T>,
    pub kind: BandKind,
    pub clipped_lo: bool,
    pub clipped_hi: bool,
    pub touchings: Vec<Touching<T>>,
}

impl<T: Real> Band<T> {
    pub fn width(&self) -> T {
        self.e_hi - self.e_lo
    }

    pub fn contains(&self, energy: T) -> bool {
        self.e_lo <= energy && energy <= self.e_hi
    }

    pub fn midpoint(&self) -> T {
        (self.e_lo + self.e_hi) / lit(2.0)
    }
}

/// Which vanishing prefactor of the secular condition produces a flat band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlatBandSource {
    /// `sin kπ = 0` at integer `k` (including `k = 0` on the loose chain).
    SinKPi,
    /// `κ² - 1 = 0` on the tight chain.
    KappaSquaredMinusOne,
}

impl FlatBandSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            FlatBandSource::SinKPi => "sin_k_pi",
            FlatBandSource::KappaSquaredMinusOne => "kappa_sq_minus_one",
        }
    }
}

/// An infinitely degenerate eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatBand<T> {
    pub energy: T,
    pub source: FlatBandSource,
    /// Lies inside (the closure of) an absolutely continuous band.
    pub embedded: bool,
    /// Largest `|closed-form value|` over the θ test grid.
    pub residual: T,
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi }
    }

    pub fn length(&self) -> T {
        self.hi - self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn coupling_rejects_small_degree() {
        assert_eq!(make_coupling::<f64>(1).unwrap_err(), Error::InvalidDegree(1));
        assert_eq!(make_coupling::<f64>(0).unwrap_err(), Error::InvalidDegree(0));
    }

    #[test]
    fn degree_two_is_swap() {
        let u = make_coupling::<f64>(2).unwrap();
        let m = u.matrix();
        assert_eq!(m[(0, 0)], Complex::zero());
        assert_eq!(m[(0, 1)], Complex::one());
        assert_eq!(m[(1, 0)], Complex::one());
        assert_eq!(m[(1, 1)], Complex::zero());
    }

    #[test]
    fn degree_four_eigenvalues() {
        let u = make_coupling::<f64>(4).unwrap();
        let expected = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::new(-1.0, 0.0), Complex::new(0.0, -1.0)];
        for (m, ev) in u.eigenvalues().iter().enumerate() {
            assert!((ev - expected[m]).norm() < 1e-15);
            let v = u.eigenvector(m);
            let uv = u.matrix().apply(&v);
            for (a, b) in uv.iter().zip(&v) {
                assert!((a - b * ev).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn degree_three_has_order_three() {
        let u = make_coupling::<f64>(3).unwrap();
        assert_eq!(u.matrix().pow(3), CMatrix::identity(3));
        assert_ne!(*u.matrix(), CMatrix::identity(3));
    }

    #[test]
    fn coupling_invariants_for_small_degrees() {
        for n in 2..=12 {
            let u = make_coupling::<f64>(n).unwrap();
            assert!(u.unitarity_residual() < 1e-12);
            assert!(u.order_residual() < 1e-12);
            for i in 0..n {
                let row_nonzero: Vec<_> = u.matrix().row(i).iter().filter(|z| !z.is_zero()).collect();
                assert_eq!(row_nonzero, vec![&Complex::one()]);
                let col_nonzero = (0..n).filter(|&r| !u.matrix()[(r, i)].is_zero()).count();
                assert_eq!(col_nonzero, 1);
            }
        }
        let u32 = make_coupling::<f32>(5).unwrap();
        assert_eq!(u32.order_residual(), 0.0);
    }

    #[test]
    fn theta_normalization_examples() {
        assert_eq!(normalize_theta(PI).unwrap().theta(), -PI);
        assert_eq!(normalize_theta(0.0).unwrap().theta(), 0.0);
        assert!((normalize_theta(1.5 * PI).unwrap().theta() + PI / 2.0).abs() < 1e-15);
        assert!((normalize_theta(-PI).unwrap().theta() + PI).abs() < 1e-15);
        assert!(normalize_theta(f64::NAN).is_err());
        assert!(normalize_theta(f64::INFINITY).is_err());
    }

    #[test]
    fn chain_spec_validation() {
        assert!(ChainSpec::new(-0.1_f64).is_err());
        assert!(ChainSpec::new(f64::NAN).is_err());
        assert!(ChainSpec::new(0.0_f64).unwrap().is_tight());
        assert_eq!(ChainSpec::new(1.0_f64).unwrap().model(), ChainModel::Loose);
        assert_eq!(ChainSpec::<f64>::loose_pi().link_length(), PI);
        assert!((ChainSpec::new(1.0_f64).unwrap().cell_length() - (2.0 * PI + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn spectral_parameter_branches() {
        let p = SpectralParameter::from_k(3.0_f64).unwrap();
        assert_eq!(p.energy(), 9.0);
        assert_eq!(p.k(), Some(3.0));
        let n = SpectralParameter::from_kappa(2.0_f64).unwrap();
        assert_eq!(n.energy(), -4.0);
        assert_eq!(n.kappa(), Some(2.0));
        assert_eq!(SpectralParameter::from_energy(0.0_f64).unwrap().branch(), Branch::Zero);
        assert!(SpectralParameter::from_k(0.0_f64).is_err());
        assert!(SpectralParameter::from_kappa(-1.0_f64).is_err());
        assert!(SpectralParameter::from_energy(f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn theta_is_canonical_and_congruent(raw in -1e3f64..1e3) {
            let q = normalize_theta(raw).unwrap();
            let t = q.theta();
            prop_assert!((-PI..PI).contains(&t));
            let turns = (raw - t) / (2.0 * PI);
            prop_assert!((turns - turns.round()).abs() < 1e-12);
            prop_assert!((q.cos() - raw.cos()).abs() < 1e-12);
        }

        #[test]
        fn cos_is_even_in_theta(raw in -3.0f64..3.0) {
            let a = normalize_theta(raw).unwrap();
            let b = normalize_theta(-raw).unwrap();
            prop_assert_eq!(a.cos(), b.cos());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn energy_round_trip(e in -100.0f64..100.0) {
            prop_assume!(e != 0.0);
            let p = SpectralParameter::from_energy(e).unwrap();
            let back = match p.branch() {
                Branch::Positive { k } => SpectralParameter::from_k(k).unwrap().energy(),
                Branch::Negative { kappa } => SpectralParameter::from_kappa(kappa).unwrap().energy(),
                Branch::Zero => unreachable!(),
            };
            prop_assert!(((back - e) / e).abs() < 1e-14);
            match p.branch() {
                Branch::Positive { k } => prop_assert!(k > 0.0),
                Branch::Negative { kappa } => prop_assert!(kappa > 0.0),
                Branch::Zero => {}
            }
        }
    }
}
