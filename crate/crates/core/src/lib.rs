//! Spectral analysis of periodic ring chains whose vertices carry the
//! cyclic "preferred orientation" coupling.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64`/`*32` aliases below pin the scalar.

pub mod asymptotics;
pub mod bands;
pub mod dispersion;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod model;
pub mod real;
mod scan;
pub mod secular;

pub use asymptotics::{
    large_l_gap_spacing, large_l_squeeze, lemma_witnesses, set_convergence_check, small_l_lower_band,
    small_l_upper_band, ConvergenceReport, Witness,
};
pub use bands::{
    band_report, dispersion, flat_bands, gaps, negative_bands, negative_bands_with, negative_dispersion,
    positive_bands, BandReport, DEFAULT_RESOLUTION,
};
pub use dispersion::{ReducedDispersion, Sign};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use measure::{
    certify, gap_certificate, m_ell_membership, measure_table, spectrum_measure, Certificate, CertificateDetail,
    MeasureReport, MeasureTable,
};
pub use model::{
    make_coupling, normalize_theta, Band, BandKind, Branch, ChainModel, ChainSpec, FlatBand,
    FlatBandSource, Interval, Quasimomentum, SpectralParameter, Touching, VertexCoupling,
};
pub use real::Real;
pub use secular::{assemble, closed_form_value, determinant, vertex_scattering, SecularSystem};

pub type ChainSpec64 = ChainSpec<f64>;
pub type ChainSpec32 = ChainSpec<f32>;
pub type Band64 = Band<f64>;
pub type Band32 = Band<f32>;
pub type FlatBand64 = FlatBand<f64>;
pub type Quasimomentum64 = Quasimomentum<f64>;
pub type SpectralParameter64 = SpectralParameter<f64>;
pub type VertexCoupling64 = VertexCoupling<f64>;
