use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringchain::asymptotics::{asymptotics_report, lemma_witness_values};
use ringchain::secular::{compare_zero_sets, vertex_scattering};
use ringchain::{
    certify, dispersion, flat_bands, m_ell_membership, negative_bands_with, positive_bands, spectrum_measure, Band64,
    CMatrix, ChainSpec64, Error, Interval, Quasimomentum64,
};

use crate::config::{Command, RunConfig};
use crate::report::Table;

/// What went wrong, mapped to an exit code by the caller.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_invalid_input() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

/// A produced table plus whether every self-check passed.
pub struct Outcome {
    pub table: Table,
    pub checks_passed: bool,
}

fn spec(cfg: &RunConfig) -> Result<ChainSpec64, Failure> {
    if cfg.ell_pi {
        return Ok(ChainSpec64::loose_pi());
    }
    Ok(ChainSpec64::new(cfg.ell)?)
}

fn require_positive(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("--{name} must be finite and positive, got {v}")))
    }
}

fn require_n(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.n == 0 {
        return Err(Failure::Invalid("--n must be at least 1".into()));
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let table = match cfg.command {
        Command::Flat => flat(cfg)?,
        Command::Bands => {
            require_positive("k-max", cfg.k_max)?;
            band_table(&positive_bands(&spec(cfg)?, cfg.k_max, cfg.resolution)?)
        }
        Command::Negative => band_table(&negative_bands_with(&spec(cfg)?, cfg.resolution)?),
        Command::Dispersion => dispersion_table(cfg)?,
        Command::Measure => measure(cfg)?,
        Command::Certify => certify_table(cfg)?,
        Command::Asymptotics => asymptotics(cfg)?,
        Command::Scattering => scattering(cfg)?,
        Command::Selfcheck => return selfcheck(cfg),
    };
    Ok(Outcome {
        table,
        checks_passed: true,
    })
}

fn flat(cfg: &RunConfig) -> Result<Table, Failure> {
    let mut t = Table::new(&["energy", "embedded", "source"]);
    for f in flat_bands(&spec(cfg)?, cfg.e_max)? {
        t.push(vec![f.energy.into(), f.embedded.into(), f.source.as_str().into()]);
    }
    Ok(t)
}

fn band_table(bands: &[Band64]) -> Table {
    let mut t = Table::new(&["band_index", "e_lo", "e_hi", "edge_theta_lo", "edge_theta_hi"]);
    for (i, b) in bands.iter().enumerate() {
        t.push(vec![
            i.into(),
            b.e_lo.into(),
            b.e_hi.into(),
            b.edge_theta_lo.theta().into(),
            b.edge_theta_hi.theta().into(),
        ]);
    }
    t
}

fn dispersion_table(cfg: &RunConfig) -> Result<Table, Failure> {
    require_positive("k-max", cfg.k_max)?;
    let s = spec(cfg)?;
    let thetas: Vec<f64> = match cfg.theta {
        Some(theta) => vec![theta],
        None => {
            require_n(cfg)?;
            (0..cfg.n).map(|i| -PI + 2.0 * PI * i as f64 / cfg.n as f64).collect()
        }
    };
    let mut t = Table::new(&["theta", "k", "energy"]);
    for theta in thetas {
        let q = Quasimomentum64::new(theta)?;
        for sp in dispersion(&s, &q, Interval::new(0.0, cfg.k_max), cfg.resolution)? {
            let k = sp.k().unwrap_or(0.0);
            t.push(vec![q.theta().into(), k.into(), sp.energy().into()]);
        }
    }
    Ok(t)
}

fn measure(cfg: &RunConfig) -> Result<Table, Failure> {
    let s = spec(cfg)?;
    let mut t = Table::new(&["K", "measure", "fraction", "band_count", "gap_count"]);
    for &k in &cfg.window {
        let m = spectrum_measure(&s, k, cfg.resolution)?;
        t.push(vec![k.into(), m.measure.into(), m.fraction.into(), m.band_count.into(), m.gap_count.into()]);
    }
    Ok(t)
}

fn k_values(cfg: &RunConfig) -> Result<Vec<f64>, Failure> {
    if !cfg.k.is_empty() {
        return Ok(cfg.k.clone());
    }
    require_positive("k-max", cfg.k_max)?;
    require_n(cfg)?;
    Ok((1..=cfg.n).map(|i| cfg.k_max * i as f64 / cfg.n as f64).collect())
}

fn certify_table(cfg: &RunConfig) -> Result<Table, Failure> {
    let s = spec(cfg)?;
    let mut t = Table::new(&["k", "strong", "asymptotic", "certificate", "in_m_ell"]);
    for k in k_values(cfg)? {
        let c = certify(&s, k)?;
        t.push(vec![
            k.into(),
            c.strong.into(),
            c.asymptotic.into(),
            c.certificate.as_str().into(),
            m_ell_membership(k, s.link_length()).into(),
        ]);
    }
    Ok(t)
}

fn asymptotics(cfg: &RunConfig) -> Result<Table, Failure> {
    let s = spec(cfg)?;
    let mut t = Table::new(&["quantity", "predicted", "solved", "ratio"]);
    for c in asymptotics_report(s.link_length())? {
        t.push(vec![c.quantity.clone().into(), c.predicted.into(), c.solved.into(), c.ratio().into()]);
    }
    Ok(t)
}

fn scattering(cfg: &RunConfig) -> Result<Table, Failure> {
    let ks = if cfg.k.is_empty() {
        require_n(cfg)?;
        let m = cfg.n.max(2) - 1;
        (0..=m).map(|i| 10f64.powf(-2.0 + 6.0 * i as f64 / m as f64)).collect()
    } else {
        cfg.k.clone()
    };
    let mut t = Table::new(&["degree", "k", "distance_to_identity", "unitarity_residual"]);
    for &n in &cfg.degree {
        let id = CMatrix::<f64>::identity(n);
        for &k in &ks {
            let s = vertex_scattering(n, k)?;
            let dist = s.sub(&id).spectral_norm();
            let unit = s.matmul(&s.adjoint()).sub(&id).max_abs();
            t.push(vec![n.into(), k.into(), dist.into(), unit.into()]);
        }
    }
    Ok(t)
}

const SELFCHECK_ELLS: [f64; 5] = [0.0, 0.3, 1.0, PI, 5.0];
const ZERO_SET_TOLERANCE: f64 = 1e-7;

fn selfcheck(cfg: &RunConfig) -> Result<Outcome, Failure> {
    require_n(cfg)?;
    let mut t = Table::new(&["check", "computed", "expected", "tolerance", "passed"]);
    let mut ok = true;
    for w in lemma_witness_values() {
        ok &= w.passed;
        t.push(vec![w.name.into(), w.computed.into(), w.expected.into(), w.tolerance.into(), w.passed.into()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (i, &ell) in SELFCHECK_ELLS.iter().enumerate() {
        let s = if i == 3 { ChainSpec64::loose_pi() } else { ChainSpec64::new(ell)? };
        for negative in [false, true] {
            let mut worst: f64 = 0.0;
            let mut agree = true;
            for _ in 0..cfg.n {
                let (lo, hi) = if negative { (1.01, 8.0) } else { (0.05, 20.0) };
                let a: f64 = rng.gen_range(lo..hi);
                let q = Quasimomentum64::new(rng.gen_range(-PI..PI))?;
                let c = compare_zero_sets(&s, negative, &q, a, a + 0.5, 2e-3, ZERO_SET_TOLERANCE)?;
                agree &= c.agrees();
                worst = worst.max(c.max_mismatch);
            }
            ok &= agree;
            let branch = if negative { "negative" } else { "positive" };
            t.push(vec![
                format!("zero_sets_ell_{ell:.6}_{branch}").into(),
                worst.into(),
                0.0.into(),
                ZERO_SET_TOLERANCE.into(),
                agree.into(),
            ]);
        }
    }
    Ok(Outcome {
        table: t,
        checks_passed: ok,
    })
}
