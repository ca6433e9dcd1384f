//! Fiber-operator linear systems and the closed-form spectral conditions.
//!
//! The determinant of the assembled system and the closed-form condition are
//! two independent routes to the same zero set; bands are always extracted
//! from the closed forms, while the determinant serves as a cross-check.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{Branch, ChainSpec, Quasimomentum, SpectralParameter, VertexCoupling};
use crate::real::{cos_pi, cosh_scaled, lit, sin_pi, sinh_scaled, to_f64, Real};

/// Largest `κ·max(π, ℓ)` for which the raw determinant is assembled.
pub fn overflow_limit<T: Real>() -> T {
    lit::<T>(700.0).min(T::max_value().ln() * lit(0.98))
}

/// Assembled fiber-operator system.
///
/// Unknowns are the two basis coefficients of each edge function, edge by
/// edge: tight `(c₁⁺, c₁⁻, …, c₄⁺, c₄⁻)`, loose `(a₁±, a₂±, a₃±, b₁±, b₂±, b₃±)`.
/// On the positive branch the basis is `e^{±ikx}`; on the negative branch it
/// is `(cosh κx, sinh κx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularSystem<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> SecularSystem<T> {
    pub fn size(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn determinant(&self) -> Complex<T> {
        self.matrix.determinant()
    }

    /// Determinant divided by the product of the row 2-norms (`|·| ≤ 1`).
    pub fn normalized_determinant(&self) -> Complex<T> {
        let scale = self
            .matrix
            .row_norms()
            .into_iter()
            .fold(T::one(), |acc, n| acc * n);
        self.determinant() / scale
    }
}

/// Basis pair evaluated at one point: values and derivatives.
struct Basis<T> {
    value: [Complex<T>; 2],
    deriv: [Complex<T>; 2],
}

fn basis<T: Real>(branch: Branch<T>, x: T) -> Basis<T> {
    match branch {
        Branch::Positive { k } => {
            let ep = Complex::from_polar(T::one(), k * x);
            let em = Complex::from_polar(T::one(), -k * x);
            let ik = Complex::new(T::zero(), k);
            Basis {
                value: [ep, em],
                deriv: [ik * ep, -ik * em],
            }
        }
        Branch::Negative { kappa } => {
            let (c, s) = ((kappa * x).cosh(), (kappa * x).sinh());
            Basis {
                value: [Complex::new(c, T::zero()), Complex::new(s, T::zero())],
                deriv: [Complex::new(kappa * s, T::zero()), Complex::new(kappa * c, T::zero())],
            }
        }
        Branch::Zero => unreachable!("zero energy rejected before assembly"),
    }
}

/// One term `weight_v·ψ_edge(x) + weight_d·ψ'_edge(x)` of a matching condition.
struct Term<T> {
    edge: usize,
    at: T,
    value: Complex<T>,
    deriv: Complex<T>,
}

struct Builder<T> {
    branch: Branch<T>,
    matrix: CMatrix<T>,
    row: usize,
}

impl<T: Real> Builder<T> {
    fn new(branch: Branch<T>, dim: usize) -> Self {
        Self {
            branch,
            matrix: CMatrix::zeros(dim),
            row: 0,
        }
    }

    fn push(&mut self, terms: &[Term<T>]) {
        for t in terms {
            let b = basis(self.branch, t.at);
            for s in 0..2 {
                let col = 2 * t.edge + s;
                let entry = t.value * b.value[s] + t.deriv * b.deriv[s];
                self.matrix[(self.row, col)] = self.matrix[(self.row, col)] + entry;
            }
        }
        self.row += 1;
    }

    fn finish(self) -> SecularSystem<T> {
        debug_assert_eq!(self.row, self.matrix.dim());
        SecularSystem {
            matrix: self.matrix,
        }
    }
}

fn val<T: Real>(edge: usize, at: T, w: Complex<T>) -> Term<T> {
    Term {
        edge,
        at,
        value: w,
        deriv: Complex::zero(),
    }
}

fn der<T: Real>(edge: usize, at: T, w: Complex<T>) -> Term<T> {
    Term {
        edge,
        at,
        value: Complex::zero(),
        deriv: w,
    }
}

/// Assembles the fiber-operator system at energy `sp` and quasimomentum `q`.
pub fn assemble<T: Real>(
    spec: &ChainSpec<T>,
    sp: &SpectralParameter<T>,
    q: &Quasimomentum<T>,
) -> Result<SecularSystem<T>> {
    if !q.theta().is_finite() {
        return Err(Error::invalid("theta", "must be finite"));
    }
    let branch = sp.branch();
    let ell = spec.link_length();
    match branch {
        Branch::Zero => return Err(Error::ZeroEnergy),
        Branch::Negative { kappa } => {
            let exponent = kappa * T::PI().max(ell);
            if exponent > overflow_limit() {
                return Err(Error::Overflow {
                    exponent: to_f64(exponent),
                    limit: to_f64(overflow_limit::<T>()),
                });
            }
        }
        Branch::Positive { .. } => {}
    }

    let one = Complex::<T>::one();
    let i = Complex::<T>::i();
    let phase = Complex::from_polar(T::one(), q.theta());
    let half = T::FRAC_PI_2();
    let zero = T::zero();

    if spec.is_tight() {
        // edges 0,1 live on [0, π/2], edges 2,3 on [-π/2, 0]
        let mut b = Builder::new(branch, 8);
        // Floquet: ψ_j(π/2) = e^{iθ} ψ_{5-j}(-π/2), same for derivatives, j = 1, 2
        for (j, partner) in [(0usize, 3usize), (1, 2)] {
            b.push(&[val(j, half, one), val(partner, -half, -phase)]);
            b.push(&[der(j, half, one), der(partner, -half, -phase)]);
        }
        // vertex, derivatives taken outward
        b.push(&[val(1, zero, one), val(0, zero, -one), der(1, zero, i), der(0, zero, i)]);
        b.push(&[val(2, zero, one), val(1, zero, -one), der(2, zero, -i), der(1, zero, i)]);
        b.push(&[val(3, zero, one), val(2, zero, -one), der(3, zero, -i), der(2, zero, -i)]);
        b.push(&[val(0, zero, one), val(3, zero, -one), der(0, zero, i), der(3, zero, -i)]);
        return Ok(b.finish());
    }

    // edges: 0 ψ₁ on [0, ℓ/2], 1 ψ₂ and 2 ψ₃ on [0, π/2],
    //        3 φ₁ on [-ℓ/2, 0], 4 φ₂ and 5 φ₃ on [-π/2, 0]
    let link = ell / lit(2.0);
    let mut b = Builder::new(branch, 12);
    // midpoint smoothness
    b.push(&[val(0, zero, one), val(3, zero, -one)]);
    b.push(&[der(0, zero, one), der(3, zero, -one)]);
    // Floquet across the cell boundary
    for (j, partner) in [(1usize, 4usize), (2, 5)] {
        b.push(&[val(j, half, one), val(partner, -half, -phase)]);
        b.push(&[der(j, half, one), der(partner, -half, -phase)]);
    }
    // right vertex: ψ₁(ℓ/2), ψ₂(0), ψ₃(0)
    b.push(&[val(2, zero, one), val(0, link, -one), der(2, zero, i), der(0, link, -i)]);
    b.push(&[val(1, zero, one), val(2, zero, -one), der(1, zero, i), der(2, zero, i)]);
    b.push(&[val(0, link, one), val(1, zero, -one), der(0, link, -i), der(1, zero, i)]);
    // left vertex: φ₁(-ℓ/2), φ₂(0), φ₃(0)
    b.push(&[val(4, zero, one), val(3, -link, -one), der(4, zero, -i), der(3, -link, i)]);
    b.push(&[val(5, zero, one), val(4, zero, -one), der(5, zero, -i), der(4, zero, -i)]);
    b.push(&[val(3, -link, one), val(5, zero, -one), der(3, -link, i), der(5, zero, -i)]);
    Ok(b.finish())
}

/// Determinant of an assembled system.
pub fn determinant<T: Real>(sys: &SecularSystem<T>) -> Complex<T> {
    sys.determinant()
}

/// Left-hand side of the closed-form spectral condition, including all
/// prefactors; zero exactly on shell.
///
/// * tight, `E = k²`: `k³(k²+1) sin kπ (cos kπ - cos θ)`
/// * tight, `E = -κ²`: `κ³(κ²-1) sinh κπ (cosh κπ - cos θ)`
/// * loose, `E = k²`: `k⁵ sin kπ ((k⁴+2k²+5) sin kπ sin kℓ - 4(k²+1)(cos kπ cos kℓ - cos θ))`
/// * loose, `E = -κ²`: `κ⁵ sinh κπ (4(1-κ²)(cosh κπ cosh κℓ - cos θ) + (κ⁴-2κ²+5) sinh κπ sinh κℓ)`
///
/// At `E = 0` the `k → 0` limit, zero, is returned. Hyperbolic forms are
/// evaluated rescaled and saturate to ±∞ rather than overflowing to NaN.
pub fn closed_form_value<T: Real>(
    spec: &ChainSpec<T>,
    sp: &SpectralParameter<T>,
    q: &Quasimomentum<T>,
) -> T {
    let (scaled, log_scale) = closed_form_scaled(spec, sp, q);
    if scaled == T::zero() {
        return scaled;
    }
    scaled * log_scale.exp()
}

/// Closed form as `(m, s)` with value `m·e^s`; `m` carries the sign and
/// never overflows.
pub fn closed_form_scaled<T: Real>(
    spec: &ChainSpec<T>,
    sp: &SpectralParameter<T>,
    q: &Quasimomentum<T>,
) -> (T, T) {
    let ell = spec.link_length();
    let cos_theta = q.cos();
    let pi = T::PI();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let five = lit::<T>(5.0);
    match (sp.branch(), spec.is_tight()) {
        (Branch::Zero, _) => (T::zero(), T::zero()),
        (Branch::Positive { k }, true) => {
            let k2 = k * k;
            let value = k2 * k * (k2 + T::one()) * sin_pi(k) * (cos_pi(k) - cos_theta);
            (value, T::zero())
        }
        (Branch::Positive { k }, false) => {
            let k2 = k * k;
            let sp_ = sin_pi(k);
            let bracket = (k2 * k2 + two * k2 + five) * sp_ * (k * ell).sin()
                - four * (k2 + T::one()) * (cos_pi(k) * (k * ell).cos() - cos_theta);
            (k2 * k2 * k * sp_ * bracket, T::zero())
        }
        (Branch::Negative { kappa }, true) => {
            let x = kappa * pi;
            let m = (kappa - T::one()) * (kappa + T::one());
            // sinh x · (cosh x - cos θ) · e^{-2x}
            let scaled = kappa.powi(3)
                * m
                * sinh_scaled(x)
                * (cosh_scaled(x) - cos_theta * (-x).exp());
            (scaled, two * x)
        }
        (Branch::Negative { kappa }, false) => {
            let (x, y) = (kappa * pi, kappa * ell);
            let k2 = kappa * kappa;
            let m = (T::one() - kappa) * (T::one() + kappa);
            let bracket = four * m * (cosh_scaled(x) * cosh_scaled(y) - cos_theta * (-(x + y)).exp())
                + (k2 * k2 - two * k2 + five) * sinh_scaled(x) * sinh_scaled(y);
            (kappa.powi(5) * sinh_scaled(x) * bracket, two * x + y)
        }
    }
}

/// On-shell vertex scattering matrix
/// `S(k) = (k - 1 + (k + 1)U)(k + 1 + (k - 1)U)^{-1}` of the degree-`n`
/// rotating coupling.
pub fn vertex_scattering<T: Real>(n: usize, k: T) -> Result<CMatrix<T>> {
    if !(k.is_finite() && k > T::zero()) {
        return Err(Error::invalid("k", format!("must be finite and positive, got {k}")));
    }
    let coupling = VertexCoupling::<T>::new(n)?;
    let u = coupling.matrix();
    let id = CMatrix::identity(n);
    let c = |x: T| Complex::new(x, T::zero());
    let num = id.scale(c(k - T::one())).add(&u.scale(c(k + T::one())));
    let den = id.scale(c(k + T::one())).add(&u.scale(c(k - T::one())));
    // numerator and denominator are polynomials in U and commute
    let den_inv = den.inverse()?;
    Ok(num.matmul(&den_inv))
}

/// Scalar action of `S(k)` on the `U`-eigenspace with eigenvalue `λ`.
pub fn scattering_eigenvalue<T: Real>(k: T, lambda: Complex<T>) -> Complex<T> {
    let c = |x: T| Complex::new(x, T::zero());
    (c(k - T::one()) + c(k + T::one()) * lambda) / (c(k + T::one()) + c(k - T::one()) * lambda)
}

/// Outcome of comparing the zero sets of the determinant and the closed form
/// on one window of the spectral variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetComparison<T> {
    pub closed_form_roots: Vec<T>,
    pub determinant_roots: Vec<T>,
    /// Largest distance from a root of either set to the nearest root of the other.
    pub max_mismatch: T,
    /// Closed-form roots with no determinant root within tolerance, and vice versa.
    pub unmatched: usize,
}

impl<T: Real> ZeroSetComparison<T> {
    pub fn agrees(&self) -> bool {
        self.unmatched == 0
    }
}

fn bisect_sign<T: Real>(mut a: T, mut b: T, f: impl Fn(T) -> T) -> T {
    let mut fa = f(a);
    for _ in 0..300 {
        let mid = a + (b - a) / lit(2.0);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    a + (b - a) / lit(2.0)
}

/// Scans `[x_lo, x_hi]` with step `step` at fixed θ and compares the roots of
/// the closed form with the roots of the scale-normalised determinant.
///
/// The determinant is complex; a root shows up as a phase flip between
/// neighbouring samples, and is refined by bisection on its projection onto
/// the phase at the left sample.
pub fn compare_zero_sets<T: Real>(
    spec: &ChainSpec<T>,
    negative: bool,
    q: &Quasimomentum<T>,
    x_lo: T,
    x_hi: T,
    step: T,
    tolerance: T,
) -> Result<ZeroSetComparison<T>> {
    if !(x_lo > T::zero() && x_hi > x_lo && step > T::zero()) {
        return Err(Error::invalid("window", "need 0 < x_lo < x_hi and step > 0"));
    }
    let param = |x: T| {
        if negative {
            SpectralParameter::from_kappa(x)
        } else {
            SpectralParameter::from_k(x)
        }
    };
    let cf = |x: T| -> T {
        let sp = param(x).expect("positive variable");
        closed_form_scaled(spec, &sp, q).0
    };
    let det = |x: T| -> Result<Complex<T>> {
        let sp = param(x)?;
        Ok(assemble(spec, &sp, q)?.normalized_determinant())
    };

    let n = ((x_hi - x_lo) / step).ceil().to_usize().unwrap_or(0).max(1);
    let xs: Vec<T> = (0..=n)
        .map(|i| (x_lo + step * lit(i as f64)).min(x_hi))
        .collect();
    let cfs: Vec<T> = xs.iter().map(|&x| cf(x)).collect();
    let dets: Vec<Complex<T>> = xs.iter().map(|&x| det(x)).collect::<Result<_>>()?;

    let mut cf_roots = Vec::new();
    let mut det_roots = Vec::new();
    for i in 0..n {
        let (a, b) = (xs[i], xs[i + 1]);
        if cfs[i] == T::zero() {
            cf_roots.push(a);
        } else if cfs[i] * cfs[i + 1] < T::zero() {
            cf_roots.push(bisect_sign(a, b, cf));
        }
        let (da, db) = (dets[i], dets[i + 1]);
        if da.is_zero() {
            det_roots.push(a);
        } else if (da * db.conj()).re < T::zero() {
            let dir = da.conj() / da.norm();
            det_roots.push(bisect_sign(a, b, |x| (det(x).expect("inside checked window") * dir).re));
        }
    }
    if cfs[n] == T::zero() {
        cf_roots.push(xs[n]);
    }
    if dets[n].is_zero() {
        det_roots.push(xs[n]);
    }

    let nearest = |x: T, set: &[T]| set.iter().fold(T::infinity(), |acc, &y| acc.min((x - y).abs()));
    let mut max_mismatch = T::zero();
    let mut unmatched = 0;
    for &r in &cf_roots {
        let d = nearest(r, &det_roots);
        max_mismatch = max_mismatch.max(d);
        if d > tolerance {
            unmatched += 1;
        }
    }
    for &r in &det_roots {
        let d = nearest(r, &cf_roots);
        max_mismatch = max_mismatch.max(d);
        if d > tolerance {
            unmatched += 1;
        }
    }
    if cf_roots.is_empty() && det_roots.is_empty() {
        max_mismatch = T::zero();
    }
    Ok(ZeroSetComparison {
        closed_form_roots: cf_roots,
        determinant_roots: det_roots,
        max_mismatch,
        unmatched,
    })
}
