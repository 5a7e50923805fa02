//! Numerical certificates for tight, equi-chordal and equi-isoclinic
//! structure.
//!
//! Flags are plain booleans decided against scale-relative tolerances;
//! the residuals behind each decision are reported alongside so a near
//! miss can be diagnosed.

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::linalg::{Mat, DEFAULT_TOL};
use crate::metrics::{self, FusionFrame};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightCheck {
    pub is_tight: bool,
    /// `‖Σ P_j − αI‖_F / (α √d)` with `α = nc/d`.
    pub residual: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquichordalCheck {
    pub is_equichordal: bool,
    /// Mean of `‖Φ_j*Φ_k‖_F²` over pairs.
    pub beta: f64,
    /// Largest `|‖Φ_j*Φ_k‖_F² − β|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquiisoclinicCheck {
    pub is_equiisoclinic: bool,
    /// Mean of `‖Φ_j*Φ_k‖_F² / c` over pairs.
    pub sigma_sq: f64,
    /// Largest `‖Φ_k*Φ_jΦ_j*Φ_k − σ²I‖_F`.
    pub deviation: f64,
    /// `‖P_k P_j P_k − σ² P_k‖_F` on the worst pair.
    pub projection_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub is_tight: bool,
    pub tight_residual: f64,
    pub is_equichordal: bool,
    pub beta: f64,
    pub equichordal_deviation: f64,
    pub is_equiisoclinic: bool,
    pub sigma_sq: f64,
    pub equiisoclinic_deviation: f64,
    pub is_ectff: bool,
    pub is_eitff: bool,
    /// `nc/d`, reported only when the frame is tight.
    pub alpha: Option<f64>,
    /// `max ‖Φ_j*Φ_k‖_F²` minus the simplex bound.
    pub simplex_gap: f64,
    /// `max ‖Φ_j*Φ_k‖₂²` minus the EITFF bound.
    pub eitff_gap: f64,
    /// `max ⟨P_j,P_k⟩_F − c²/d` when the orthoplex bound applies.
    pub orthoplex_gap: Option<f64>,
    pub tolerance: f64,
}

fn require_pairs(f: &FusionFrame) -> Result<()> {
    if f.n() < 2 {
        Err(Error::TooFewSubspaces(f.n()))
    } else {
        Ok(())
    }
}

fn require_lines(f: &FusionFrame) -> Result<()> {
    if f.c() != 1 {
        Err(Error::NotLines(f.c()))
    } else {
        Ok(())
    }
}

fn tight_residual(f: &FusionFrame) -> f64 {
    let alpha = f.alpha();
    let op = metrics::fusion_frame_operator(f);
    let target = Mat::identity(f.d(), op.field()).scale(alpha);
    (&op - &target).frobenius_norm() / (alpha * (f.d() as f64).sqrt())
}

pub fn is_tight_fusion_frame(f: &FusionFrame, tol: f64) -> TightCheck {
    let residual = tight_residual(f);
    TightCheck {
        is_tight: residual <= tol,
        residual,
        alpha: f.alpha(),
    }
}

/// Mean and largest deviation from the mean.
fn mean_deviation(values: &[f64]) -> (f64, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let dev = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    (mean, dev)
}

fn pair_frobenius_sq(f: &FusionFrame) -> Vec<f64> {
    let pairs = par::pairs(f.n());
    par::map_slice(&pairs, |&(j, k)| {
        f.basis(j).mat().adjoint_mul(f.basis(k).mat()).frobenius_norm_sq()
    })
}

pub fn is_equichordal(f: &FusionFrame, tol: f64) -> Result<EquichordalCheck> {
    require_pairs(f)?;
    let (beta, deviation) = mean_deviation(&pair_frobenius_sq(f));
    Ok(EquichordalCheck {
        is_equichordal: deviation <= tol * beta.max(1.0),
        beta,
        deviation,
    })
}

pub fn is_equiisoclinic(f: &FusionFrame, tol: f64) -> Result<EquiisoclinicCheck> {
    require_pairs(f)?;
    let c = f.c() as f64;
    let pairs = par::pairs(f.n());
    let grams: Vec<Mat> = par::map_slice(&pairs, |&(j, k)| {
        f.basis(j).mat().adjoint_mul(f.basis(k).mat())
    });
    let sigma_sq = grams.iter().map(|g| g.frobenius_norm_sq()).sum::<f64>() / (c * grams.len() as f64);

    let id = Mat::identity(f.c(), grams[0].field()).scale(sigma_sq);
    let devs = par::map_slice(&grams, |g| (&g.adjoint_mul(g) - &id).frobenius_norm());
    let (worst, deviation) = devs
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    // Same condition on the projections themselves, for the worst pair.
    let (j, k) = pairs[worst];
    let pj = metrics::projection(f.basis(j));
    let pk = metrics::projection(f.basis(k));
    let projection_deviation = (&pk.matmul(&pj).matmul(&pk) - &pk.scale(sigma_sq)).frobenius_norm();

    let limit = tol * (sigma_sq * c.sqrt()).max(1.0);
    Ok(EquiisoclinicCheck {
        is_equiisoclinic: deviation <= limit && projection_deviation <= limit,
        sigma_sq,
        deviation,
        projection_deviation,
    })
}

/// Runs every structural check and the bound-equality conditions.
pub fn certify(f: &FusionFrame, tol: f64) -> Result<Certificate> {
    require_pairs(f)?;
    let (n, d, c) = (f.n(), f.d(), f.c());
    let tight = is_tight_fusion_frame(f, tol);
    let chordal = is_equichordal(f, tol)?;
    let iso = is_equiisoclinic(f, tol)?;

    let simplex_gram = bounds::simplex_bound_gram(n, d, c)?;
    let eitff = bounds::eitff_bound(n, d, c)?;
    let overlaps = metrics::pairwise_overlaps(f)?;
    let max_frob = overlaps.iter().map(|p| p.frobenius_sq).fold(f64::NEG_INFINITY, f64::max);
    let max_spec = overlaps.iter().map(|p| p.spectral_sq).fold(f64::NEG_INFINITY, f64::max);
    let orthoplex_gap = bounds::orthoplex_bound(n, d, c, f.field()).map(|o| max_frob - o.gram);

    let is_ectff = tight.is_tight && chordal.is_equichordal;
    let is_eitff = tight.is_tight && iso.is_equiisoclinic;

    // Tightness forces the mean overlap onto the bound up to O(residual²),
    // so these can only fail on a numerical breakdown.
    if is_ectff && (chordal.beta - simplex_gram).abs() > tol * simplex_gram.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "ECTFF with beta = {} but simplex bound {}",
            chordal.beta, simplex_gram
        )));
    }
    if is_eitff && (iso.sigma_sq - eitff).abs() > tol * eitff.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "EITFF with sigma^2 = {} but bound {}",
            iso.sigma_sq, eitff
        )));
    }

    Ok(Certificate {
        is_tight: tight.is_tight,
        tight_residual: tight.residual,
        is_equichordal: chordal.is_equichordal,
        beta: chordal.beta,
        equichordal_deviation: chordal.deviation,
        is_equiisoclinic: iso.is_equiisoclinic,
        sigma_sq: iso.sigma_sq,
        equiisoclinic_deviation: iso.deviation,
        is_ectff,
        is_eitff,
        alpha: tight.is_tight.then_some(tight.alpha),
        simplex_gap: max_frob - simplex_gram,
        eitff_gap: max_spec - eitff,
        orthoplex_gap,
        tolerance: tol,
    })
}

/// [`certify`] at the default tolerance.
pub fn certify_default(f: &FusionFrame) -> Result<Certificate> {
    certify(f, DEFAULT_TOL)
}

/// Unit-norm tight frame check for a frame of lines; `α = n/d`.
pub fn is_unit_norm_tight_frame(f: &FusionFrame, tol: f64) -> Result<TightCheck> {
    require_lines(f)?;
    Ok(is_tight_fusion_frame(f, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquiangularCheck {
    pub is_equiangular: bool,
    /// Mean of `|⟨φ_j, φ_k⟩|²`.
    pub beta: f64,
    pub deviation: f64,
}

pub fn is_equiangular(f: &FusionFrame, tol: f64) -> Result<EquiangularCheck> {
    require_lines(f)?;
    let e = is_equichordal(f, tol)?;
    Ok(EquiangularCheck {
        is_equiangular: e.is_equichordal,
        beta: e.beta,
        deviation: e.deviation,
    })
}

/// Equiangular tight frame check. A positive verdict also requires the
/// squared coherence to meet the Welch bound.
pub fn is_etf(f: &FusionFrame, tol: f64) -> Result<bool> {
    let angular = is_equiangular(f, tol)?;
    let tight = is_unit_norm_tight_frame(f, tol)?;
    let flag = angular.is_equiangular && tight.is_tight;
    if flag && f.n() >= f.d() {
        let coh_sq = metrics::max_chordal_overlap(f)?;
        let welch = bounds::welch_bound(f.n(), f.d())?;
        if (coh_sq - welch).abs() > tol * welch.max(1.0) {
            return Err(Error::Inconsistent(format!(
                "ETF with coherence^2 = {coh_sq} but Welch bound {welch}"
            )));
        }
    }
    Ok(flag)
}

/// Every off-diagonal Gram entry equals `−1/(n−1)` within `tol`.
pub fn is_regular_simplex(f: &FusionFrame, tol: f64) -> Result<bool> {
    require_lines(f)?;
    require_pairs(f)?;
    let target = -1.0 / (f.n() as f64 - 1.0);
    Ok(par::pairs(f.n()).into_iter().all(|(j, k)| {
        let z = f.line_inner(j, k);
        (z.re - target).abs() <= tol && z.im.abs() <= tol
    }))
}
