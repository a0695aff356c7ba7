//! Comass lower bounds by projected gradient ascent on the Stiefel manifold,
//! and statistical upper bounds by frame sampling.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{qf, random_stiefel, Frame, NumForm};
use crate::error::{Error, Result};
use crate::exterior::AltForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComassConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for ComassConfig {
    fn default() -> Self {
        ComassConfig {
            restarts: 200,
            iterations: 500,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComassResult {
    pub estimate: f64,
    pub argmax_frame: Frame,
    /// Number of restarts.
    pub samples: usize,
    /// Iteration cap per restart.
    pub iterations: usize,
    pub seed: u64,
    /// Restarts that hit the iteration cap before the gradient vanished.
    pub unconverged_restarts: usize,
}

const GRAD_TOL: f64 = 1e-12;
const MIN_STEP: f64 = 1e-14;

struct Ascent {
    value: f64,
    frame: DMatrix<f64>,
    converged: bool,
}

fn ascend(form: &NumForm, mut v: DMatrix<f64>, iterations: usize) -> Ascent {
    let mut f = form.eval_mat(&v);
    for _ in 0..iterations {
        let g = form.grad_mat(&v);
        // Riemannian gradient: G - V sym(V^T G)
        let vtg = v.transpose() * &g;
        let sym = (&vtg + vtg.transpose()) * 0.5;
        let rg = &g - &v * sym;
        if rg.norm() < GRAD_TOL {
            return Ascent {
                value: f,
                frame: v,
                converged: true,
            };
        }
        let mut t = 0.5;
        let mut improved = false;
        while t > MIN_STEP {
            let cand = qf(&(&v + &rg * t));
            let fc = form.eval_mat(&cand);
            if fc > f {
                v = cand;
                f = fc;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            // no ascent direction at machine precision: a critical point
            return Ascent {
                value: f,
                frame: v,
                converged: true,
            };
        }
    }
    Ascent {
        value: f,
        frame: v,
        converged: false,
    }
}

pub(crate) fn restart_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Maximize `form` over orthonormal `p`-frames. The result is a certified
/// lower bound on the comass; restart `i` always uses stream `i` of the seed,
/// so the estimate is reproducible and monotone in the restart count.
pub fn comass_estimate(form: &AltForm, p: usize, cfg: ComassConfig) -> Result<ComassResult> {
    if p != form.degree() {
        return Err(Error::ArityMismatch {
            degree: form.degree(),
            given: p,
        });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParams {
            key: "comass".into(),
            reason: "at least one restart is required".into(),
        });
    }
    let n = form.dim();
    let num = NumForm::from(form);
    let runs: Vec<Ascent> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(cfg.seed, i as u64);
            let v = random_stiefel(&mut rng, n, p);
            ascend(&num, v, cfg.iterations)
        })
        .collect();
    let unconverged = runs.iter().filter(|r| !r.converged).count();
    // first maximum in restart order, independent of scheduling
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one restart");
    let frame = Frame::with_tolerance(
        n,
        (0..p)
            .map(|j| best.frame.column(j).iter().copied().collect())
            .collect(),
        1,
        1e-10,
    )?;
    let estimate = num.eval_mat(&frame.to_matrix());
    Ok(ComassResult {
        estimate,
        argmax_frame: frame,
        samples: cfg.restarts,
        iterations: cfg.iterations,
        seed: cfg.seed,
        unconverged_restarts: unconverged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub samples: usize,
    pub max_value: f64,
    pub seed: u64,
}

const CHUNK: usize = 1000;

/// Largest value of `|form|` over `samples` Haar-random orthonormal frames.
pub fn calibration_bound(form: &AltForm, samples: usize, seed: u64) -> BoundCheck {
    let n = form.dim();
    let p = form.degree();
    let num = NumForm::from(form);
    let chunks = samples.div_ceil(CHUNK);
    let max_value = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = restart_rng(seed, c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            (0..count)
                .map(|_| num.eval_mat(&random_stiefel(&mut rng, n, p)).abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    BoundCheck {
        samples,
        max_value,
        seed,
    }
}
