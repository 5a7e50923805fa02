//! Numerical search for packings with small worst-case overlap.
//!
//! The nonsmooth objective `max_{j<k} f(Φ_j*Φ_k)` is replaced by a
//! log-sum-exp soft-max. Each descent step moves every basis along the
//! horizontal part of its Euclidean gradient and retracts back to
//! orthonormal columns by QR. Restarts run independently and the best one
//! (lowest index on ties) is returned.

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::certify::{self, Certificate};
use crate::construct;
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Mat};
use crate::metrics::{FusionFrame, SubspaceBasis};
use crate::par;

const MAX_HALVINGS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `max ‖Φ_j*Φ_k‖_F²`
    ChordalOverlap,
    /// `max ‖Φ_j*Φ_k‖₂²`
    SpectralOverlap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackConfig {
    pub criterion: Criterion,
    pub iterations: usize,
    pub restarts: usize,
    pub step: f64,
    /// Soft-max sharpness.
    pub smoothing: f64,
    /// Exponent `p` of the spectral surrogate `(Tr[(G*G)^p])^{1/p}`.
    pub spectral_power: u32,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for PackConfig {
    fn default() -> Self {
        PackConfig {
            criterion: Criterion::ChordalOverlap,
            iterations: 2000,
            restarts: 10,
            step: 0.05,
            smoothing: 200.0,
            spectral_power: 4,
            seed: 0,
            tolerance: 1e-8,
        }
    }
}

impl PackConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("{what} must be positive")));
        if self.iterations == 0 {
            return bad("iterations");
        }
        if self.restarts == 0 {
            return bad("restarts");
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad("step");
        }
        if !(self.smoothing > 0.0 && self.smoothing.is_finite()) {
            return bad("smoothing");
        }
        if self.spectral_power == 0 {
            return bad("spectral_power");
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return bad("tolerance");
        }
        Ok(())
    }

    pub fn objective(&self) -> SmoothedObjective {
        SmoothedObjective {
            criterion: self.criterion,
            sharpness: self.smoothing,
            power: self.spectral_power,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackResult {
    pub frame: FusionFrame,
    /// True (unsmoothed) criterion value of `frame`.
    pub achieved: f64,
    /// `simplex_bound_gram` or `eitff_bound`, matching the criterion.
    pub bound: f64,
    pub gap: f64,
    pub certificate: Certificate,
    /// Accepted descent steps in the winning run.
    pub iterations: usize,
    pub restart: usize,
    /// Criterion value after each accepted step of the winning run,
    /// starting with the initial frame.
    pub trace: Vec<f64>,
}

/// Soft-max of pairwise overlaps, `(1/s) log Σ_{j<k} exp(s f_jk)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedObjective {
    pub criterion: Criterion,
    pub sharpness: f64,
    pub power: u32,
}

struct PairTerm {
    value: f64,
    /// Real gradient of the pair value with respect to the cross-Gramian.
    dgram: Option<Mat>,
}

impl SmoothedObjective {
    fn pair_term(&self, a: &Mat, b: &Mat, with_grad: bool) -> PairTerm {
        let g = a.adjoint_mul(b);
        match self.criterion {
            Criterion::ChordalOverlap => PairTerm {
                value: g.frobenius_norm_sq(),
                dgram: with_grad.then(|| g.scale(2.0)),
            },
            Criterion::SpectralOverlap => {
                let m = g.adjoint_mul(&g);
                let mut m_pow = Mat::identity(m.rows(), m.field());
                for _ in 1..self.power {
                    m_pow = m_pow.matmul(&m);
                }
                let h = m_pow.matmul(&m).trace().re;
                let p = self.power as f64;
                if h <= f64::MIN_POSITIVE {
                    return PairTerm {
                        value: 0.0,
                        dgram: with_grad.then(|| Mat::zeros(g.rows(), g.cols(), g.field())),
                    };
                }
                // d/dG (Tr M^p)^{1/p} = 2 h^{1/p − 1} G M^{p−1}
                PairTerm {
                    value: h.powf(1.0 / p),
                    dgram: with_grad.then(|| g.matmul(&m_pow).scale(2.0 * h.powf(1.0 / p - 1.0))),
                }
            }
        }
    }

    fn terms(&self, mats: &[Mat], with_grad: bool) -> Vec<((usize, usize), PairTerm)> {
        let pairs = par::pairs(mats.len());
        par::map_slice(&pairs, |&(j, k)| ((j, k), self.pair_term(&mats[j], &mats[k], with_grad)))
    }

    fn log_sum_exp(&self, values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
        let top = values.clone().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = values.map(|v| (self.sharpness * (v - top)).exp()).sum();
        (top + sum.ln() / self.sharpness, sum)
    }

    /// Smoothed objective at arbitrary (not necessarily orthonormal) bases.
    pub fn value(&self, mats: &[Mat]) -> f64 {
        let terms = self.terms(mats, false);
        self.log_sum_exp(terms.iter().map(|(_, t)| t.value)).0
    }

    /// Smoothed objective and its Euclidean gradient with respect to each
    /// basis, real and imaginary parts treated as independent coordinates.
    pub fn value_and_gradient(&self, mats: &[Mat]) -> (f64, Vec<Mat>) {
        let terms = self.terms(mats, true);
        let (value, sum) = self.log_sum_exp(terms.iter().map(|(_, t)| t.value));
        let top = terms.iter().map(|(_, t)| t.value).fold(f64::NEG_INFINITY, f64::max);
        let mut grads: Vec<Mat> = mats
            .iter()
            .map(|m| Mat::zeros(m.rows(), m.cols(), m.field()))
            .collect();
        for ((j, k), t) in &terms {
            let w = (self.sharpness * (t.value - top)).exp() / sum;
            let dg = t.dgram.as_ref().expect("gradient requested");
            // G = Φ_j*Φ_k: ∂/∂Φ_j = Φ_k Γ*, ∂/∂Φ_k = Φ_j Γ.
            grads[*j] = &grads[*j] + &mats[*k].matmul(&dg.adjoint()).scale(w);
            grads[*k] = &grads[*k] + &mats[*j].matmul(dg).scale(w);
        }
        (value, grads)
    }
}

/// True criterion value `max_{j<k}` of the chosen overlap.
pub fn criterion_value(f: &FusionFrame, criterion: Criterion) -> Result<f64> {
    match criterion {
        Criterion::ChordalOverlap => crate::metrics::max_chordal_overlap(f),
        Criterion::SpectralOverlap => crate::metrics::max_spectral_overlap(f),
    }
}

pub fn criterion_bound(n: usize, d: usize, c: usize, criterion: Criterion) -> Result<f64> {
    match criterion {
        Criterion::ChordalOverlap => bounds::simplex_bound_gram(n, d, c),
        Criterion::SpectralOverlap => bounds::eitff_bound(n, d, c),
    }
}

fn frame_from(field: Field, mats: &[Mat]) -> Result<FusionFrame> {
    let bases = mats
        .iter()
        .map(|m| SubspaceBasis::from_orthonormal(m.clone()))
        .collect();
    FusionFrame::new(field, bases)
}

fn retract(mats: &[Mat], dirs: &[Mat], eta: f64) -> Result<Vec<Mat>> {
    mats.iter()
        .zip(dirs)
        .map(|(x, g)| linalg::orthonormalize(&(x - &g.scale(eta))))
        .collect()
}

struct Run {
    best: Vec<Mat>,
    achieved: f64,
    iterations: usize,
    trace: Vec<f64>,
}

fn descend(field: Field, init: Vec<Mat>, cfg: &PackConfig) -> Result<Run> {
    let obj = cfg.objective();
    let mut x = init;
    let (mut value, mut grad) = obj.value_and_gradient(&x);
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let mut achieved = criterion_value(&frame_from(field, &x)?, cfg.criterion)?;
    let mut best = x.clone();
    let mut trace = vec![achieved];
    let mut iterations = 0;

    for it in 0..cfg.iterations {
        // Horizontal part: (I − Φ Φ*) ∇. Motion within a span is irrelevant.
        let dirs: Vec<Mat> = x
            .iter()
            .zip(&grad)
            .map(|(phi, g)| g - &phi.matmul(&phi.adjoint_mul(g)))
            .collect();
        let gnorm = dirs.iter().map(Mat::frobenius_norm_sq).sum::<f64>().sqrt();
        if gnorm <= cfg.tolerance {
            break;
        }

        let mut eta = cfg.step;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            match retract(&x, &dirs, eta) {
                Ok(cand) => {
                    let v = obj.value(&cand);
                    if !v.is_finite() {
                        return Err(Error::NonFiniteObjective);
                    }
                    if v < value {
                        accepted = Some(cand);
                        break;
                    }
                }
                Err(Error::RankDeficient { .. }) => {}
                Err(e) => return Err(e),
            }
            eta *= 0.5;
        }
        let Some(next) = accepted else { break };

        x = next;
        (value, grad) = obj.value_and_gradient(&x);
        iterations = it + 1;
        let current = criterion_value(&frame_from(field, &x)?, cfg.criterion)?;
        trace.push(current);
        if current < achieved {
            achieved = current;
            best = x.clone();
        }
    }
    Ok(Run {
        best,
        achieved,
        iterations,
        trace,
    })
}

fn finish(field: Field, run: Run, restart: usize, cfg: &PackConfig) -> Result<PackResult> {
    let frame = frame_from(field, &run.best)?;
    let bound = criterion_bound(frame.n(), frame.d(), frame.c(), cfg.criterion)?;
    let certificate = certify::certify(&frame, cfg.tolerance)?;
    Ok(PackResult {
        achieved: run.achieved,
        bound,
        gap: run.achieved - bound,
        certificate,
        iterations: run.iterations,
        restart,
        trace: run.trace,
        frame,
    })
}

/// Searches for `n` subspaces of dimension `c` in `F^d` minimizing the
/// configured worst-pair overlap.
pub fn pack(field: Field, d: usize, c: usize, n: usize, cfg: &PackConfig) -> Result<PackResult> {
    cfg.validate()?;
    if c == 0 || c > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= c <= d, got c = {c}, d = {d}"
        )));
    }
    if n < 2 {
        return Err(Error::TooFewSubspaces(n));
    }
    let runs = par::map_range(cfg.restarts, |r| {
        let init = construct::random_frame(field, d, c, n, cfg.seed.wrapping_add(r as u64))?;
        let mats = init.bases().iter().map(|b| b.mat().clone()).collect();
        descend(field, mats, cfg)
    });

    let mut winner: Option<(usize, Run)> = None;
    for (r, run) in runs.into_iter().enumerate() {
        let run = run?;
        let better = match &winner {
            None => true,
            Some((_, w)) => run.achieved < w.achieved,
        };
        if better {
            winner = Some((r, run));
        }
    }
    let (restart, run) = winner.expect("at least one restart");
    finish(field, run, restart, cfg)
}

/// Runs the descent from an existing frame. The result is never worse
/// than the input.
pub fn polish(f: &FusionFrame, cfg: &PackConfig) -> Result<PackResult> {
    cfg.validate()?;
    if f.n() < 2 {
        return Err(Error::TooFewSubspaces(f.n()));
    }
    let mats = f.bases().iter().map(|b| b.mat().clone()).collect();
    let run = descend(f.field(), mats, cfg)?;
    finish(f.field(), run, 0, cfg)
}
