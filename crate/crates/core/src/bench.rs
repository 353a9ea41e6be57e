//! Wall-clock benchmarks over an `(l, d)` grid.
//!
//! Each cell runs one untimed warm-up and then `reps` timed calls of the
//! algorithm; inputs are prepared outside the timed region. Cells run
//! sequentially unless [`BenchConfig::parallel`] is set.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::backend::{BackendTag, GroupSuite, PairingBackend};
use crate::cost::{check_cell, Algorithm};
use crate::error::SchemeError;
use crate::identity::HierarchicalIdentity;
use crate::scheme;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("timings on the mock backend are meaningless")]
    MockBackend,
    #[error("at least one repetition is required")]
    NoRepetitions,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub reps: usize,
    /// Run cells concurrently. Per-cell timings get noisier.
    pub parallel: bool,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { reps: 5, parallel: false, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchCell {
    pub alg: String,
    pub l: usize,
    pub d: usize,
    pub mean_ns: f64,
    pub stddev_ns: f64,
    pub reps: usize,
}

/// Least-squares fit of mean time against `l − d`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Regression {
    pub slope_ns: f64,
    pub intercept_ns: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub algorithm: Algorithm,
    pub cells: Vec<BenchCell>,
    pub regression: Option<Regression>,
    pub environment: String,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for fewer than two samples.
pub fn stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Ordinary least squares; `None` unless at least two distinct `x` values.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<Regression> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(Regression { slope_ns: slope, intercept_ns: intercept, r_squared })
}

fn environment_note(cfg: &BenchConfig) -> String {
    format!(
        "{}-{}, {}, {} cells, {} threads available",
        std::env::consts::ARCH,
        std::env::consts::OS,
        if cfg!(debug_assertions) { "debug assertions on" } else { "release" },
        if cfg.parallel { "parallel" } else { "interleaved" },
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    )
}

/// Inputs for one `(l, d)` cell, prepared outside the timed region.
struct Cell<B: PairingBackend> {
    alg: Algorithm,
    l: usize,
    d: usize,
    rng: ChaCha20Rng,
    inputs: Option<Inputs<B>>,
    samples: Vec<f64>,
}

struct Inputs<B: PairingBackend> {
    mk: scheme::MasterKey<B>,
    pp: scheme::PublicParams<B>,
    id: scheme::Identity<B>,
    child: Option<scheme::Identity<B>>,
    sk: scheme::PrivateKey<B>,
    ct: scheme::Ciphertext<B>,
}

impl<B: PairingBackend> Cell<B> {
    fn prepare(alg: Algorithm, suite: &GroupSuite<B>, l: usize, d: usize, cfg: &BenchConfig) -> Result<Self, SchemeError> {
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ ((l as u64) << 32) ^ d as u64);
        let inputs = if alg == Algorithm::Setup {
            None
        } else {
            let (mk, pp) = scheme::setup(suite, l, &mut rng)?;
            let comps = (0..d).map(|_| suite.random_nonzero_scalar(&mut rng)).collect();
            let id = HierarchicalIdentity::new(comps)?;
            let sk = scheme::keygen(&id, &mk, &pp, &mut rng)?;
            let child = match alg {
                Algorithm::Delegate => Some(id.child(suite.random_nonzero_scalar(&mut rng))?),
                _ => None,
            };
            let ct = scheme::encrypt(&id, &pp.omega, &pp, &mut rng)?;
            Some(Inputs { mk, pp, id, child, sk, ct })
        };
        Ok(Cell { alg, l, d, rng, inputs, samples: Vec::with_capacity(cfg.reps) })
    }

    fn run_once(&mut self, suite: &GroupSuite<B>) -> Result<f64, SchemeError> {
        let rng = &mut self.rng;
        let start = Instant::now();
        match (&self.inputs, self.alg) {
            (None, _) => scheme::setup(suite, self.l, rng).map(drop)?,
            (Some(x), Algorithm::KeyGen) => scheme::keygen(&x.id, &x.mk, &x.pp, rng).map(drop)?,
            (Some(x), Algorithm::Delegate) => {
                let child = x.child.as_ref().expect("prepared for delegate");
                scheme::delegate(child, &x.sk, &x.pp, rng).map(drop)?
            }
            (Some(x), Algorithm::Encrypt) => scheme::encrypt(&x.id, &x.pp.omega, &x.pp, rng).map(drop)?,
            (Some(x), Algorithm::Decrypt) => scheme::decrypt(&x.ct, &x.sk, &x.pp).map(drop)?,
            (Some(_), Algorithm::Setup) => unreachable!("setup has no inputs"),
        }
        Ok(start.elapsed().as_nanos() as f64)
    }

    fn finish(self) -> BenchCell {
        BenchCell {
            alg: self.alg.name().to_string(),
            l: self.l,
            d: self.d,
            mean_ns: mean(&self.samples),
            stddev_ns: stddev(&self.samples),
            reps: self.samples.len(),
        }
    }
}

/// One untimed warm-up pass, then `reps` passes. Each pass visits every
/// cell once, so a slow stretch on the machine is spread over all cells
/// instead of inflating a single one.
fn time_cells<B: PairingBackend>(
    alg: Algorithm,
    suite: &GroupSuite<B>,
    l: usize,
    d_grid: &[usize],
    cfg: &BenchConfig,
) -> Result<Vec<BenchCell>, SchemeError> {
    let mut cells =
        d_grid.iter().map(|&d| Cell::prepare(alg, suite, l, d, cfg)).collect::<Result<Vec<_>, _>>()?;
    for pass in 0..=cfg.reps {
        for cell in &mut cells {
            let ns = cell.run_once(suite)?;
            if pass > 0 {
                cell.samples.push(ns);
            }
        }
    }
    Ok(cells.into_iter().map(Cell::finish).collect())
}

/// Times `alg` at each `d` in `d_grid` for maximum depth `l`. Setup ignores
/// `d`. Cells that are out of range for `alg` are an error.
pub fn run_bench<B: PairingBackend>(
    alg: Algorithm,
    suite: &GroupSuite<B>,
    l: usize,
    d_grid: &[usize],
    cfg: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    if suite.tag() == BackendTag::Mock {
        return Err(BenchError::MockBackend);
    }
    if cfg.reps == 0 {
        return Err(BenchError::NoRepetitions);
    }
    for &d in d_grid {
        check_cell(alg, l, d)?;
    }
    let cells: Vec<BenchCell> = if cfg.parallel {
        let per_cell: Vec<Vec<BenchCell>> =
            d_grid.par_iter().map(|&d| time_cells(alg, suite, l, &[d], cfg)).collect::<Result<_, _>>()?;
        per_cell.into_iter().flatten().collect()
    } else {
        time_cells(alg, suite, l, d_grid, cfg)?
    };
    let xs: Vec<f64> = cells.iter().map(|c| (c.l - c.d) as f64).collect();
    let ys: Vec<f64> = cells.iter().map(|c| c.mean_ns).collect();
    Ok(BenchReport {
        algorithm: alg,
        regression: linear_fit(&xs, &ys),
        cells,
        environment: environment_note(cfg),
    })
}

/// Reference timings (ms) measured on the original 175-bit MNT
/// implementation, as a function of `(l, d)`. For display only.
pub fn reference_ms(alg: Algorithm, l: usize, d: usize) -> Option<f64> {
    let (lf, df) = (l as f64, d as f64);
    match alg {
        Algorithm::Setup => None,
        Algorithm::KeyGen => Some(135.8 * (lf - df) + 9.5 * df + 135.8),
        Algorithm::Delegate => Some(163.8 * (lf - df) + 346.5),
        Algorithm::Encrypt => Some(2.1 * df + 14.3),
        Algorithm::Decrypt => Some(62.4),
    }
}

impl BenchReport {
    pub fn mean_ns(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.mean_ns).collect()
    }

    /// Standard deviation of the per-cell means divided by their mean.
    pub fn across_cell_cv(&self) -> f64 {
        let m = self.mean_ns();
        stddev(&m) / mean(&m)
    }

    /// One JSON object per cell.
    pub fn to_ndjson(&self) -> String {
        self.cells
            .iter()
            .map(|c| serde_json::to_string(c).expect("plain struct") + "\n")
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alg,l,d,mean_ns,stddev_ns,reps\n");
        for c in &self.cells {
            writeln!(out, "{},{},{},{:.0},{:.0},{}", c.alg, c.l, c.d, c.mean_ns, c.stddev_ns, c.reps)
                .expect("string write");
        }
        out
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} ({})", self.algorithm, self.environment).unwrap();
        writeln!(out, "{:>4} {:>4} {:>12} {:>12} {:>5} {:>14}", "l", "d", "mean ms", "stddev ms", "reps", "reference ms")
            .unwrap();
        for c in &self.cells {
            let reference = reference_ms(self.algorithm, c.l, c.d)
                .map_or_else(|| "-".to_string(), |v| format!("{v:.1}"));
            writeln!(
                out,
                "{:>4} {:>4} {:>12.3} {:>12.3} {:>5} {:>14}",
                c.l,
                c.d,
                c.mean_ns / 1e6,
                c.stddev_ns / 1e6,
                c.reps,
                reference
            )
            .unwrap();
        }
        if let Some(r) = self.regression {
            writeln!(
                out,
                "fit vs (l - d): {:.3} ms/level + {:.3} ms, R^2 = {:.4}",
                r.slope_ns / 1e6,
                r.intercept_ns / 1e6,
                r.r_squared
            )
            .unwrap();
        }
        out.push_str("reference column: 175-bit MNT timings from the original implementation, not comparable across machines\n");
        out
    }
}
