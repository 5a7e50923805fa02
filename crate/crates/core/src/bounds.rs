//! Closed-form packing bounds.
//!
//! Every bound is evaluated in double precision from its integer
//! parameters. Bounds that only hold in some regime return `None` outside
//! it rather than a sentinel value.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Field;

fn check_subspace_dims(n: usize, d: usize, c: usize) -> Result<()> {
    if c == 0 || d == 0 {
        return Err(Error::InvalidArgument(format!(
            "dimensions must be positive (d = {d}, c = {c})"
        )));
    }
    if c > d {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension c = {c} exceeds ambient dimension d = {d}"
        )));
    }
    if n < 2 {
        return Err(Error::TooFewSubspaces(n));
    }
    Ok(())
}

/// Welch lower bound `(n−d)/(d(n−1))` on the squared coherence of `n`
/// unit vectors in dimension `d`.
pub fn welch_bound(n: usize, d: usize) -> Result<f64> {
    if n < d {
        return Err(Error::InvalidArgument(format!(
            "Welch bound needs n >= d, got n = {n}, d = {d}"
        )));
    }
    check_subspace_dims(n, d, 1)?;
    let (n, d) = (n as f64, d as f64);
    Ok((n - d) / (d * (n - 1.0)))
}

/// Rankin's simplex bound for `n` unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankinSimplex {
    /// Lower bound `−1/(n−1)` on the largest pairwise inner product.
    pub max_inner: f64,
    /// Upper bound `2(1 + 1/(n−1))` on the smallest squared pairwise distance.
    pub min_distance_sq: f64,
}

pub fn rankin_simplex_bound(n: usize) -> Result<RankinSimplex> {
    if n < 2 {
        return Err(Error::TooFewSubspaces(n));
    }
    let inv = 1.0 / (n as f64 - 1.0);
    Ok(RankinSimplex {
        max_inner: -inv,
        min_distance_sq: 2.0 * (1.0 + inv),
    })
}

/// Rankin's orthoplex bound: once `n ≥ d + 2`, some pair of unit vectors
/// has a nonnegative inner product.
pub fn rankin_orthoplex_bound(n: usize, d: usize) -> Option<f64> {
    (n >= d + 2).then_some(0.0)
}

/// Simplex bound `(c(d−c)/d) · n/(n−1)` on the squared chordal packing radius.
pub fn simplex_bound_chordal(n: usize, d: usize, c: usize) -> Result<f64> {
    check_subspace_dims(n, d, c)?;
    let (n, d, c) = (n as f64, d as f64, c as f64);
    Ok(c * (d - c) / d * (n / (n - 1.0)))
}

/// The simplex bound restated as `max_{j≠k} ‖Φ_j*Φ_k‖_F² ≥ c(nc−d)/(d(n−1))`.
/// Negative (and vacuous) when `nc < d`.
pub fn simplex_bound_gram(n: usize, d: usize, c: usize) -> Result<f64> {
    check_subspace_dims(n, d, c)?;
    let (n, d, c) = (n as f64, d as f64, c as f64);
    Ok(c * (n * c - d) / (d * (n - 1.0)))
}

/// `max_{j≠k} ‖Φ_j*Φ_k‖₂² ≥ (nc−d)/(d(n−1))`, attained exactly by EITFFs.
pub fn eitff_bound(n: usize, d: usize, c: usize) -> Result<f64> {
    check_subspace_dims(n, d, c)?;
    let (n, d, c) = (n as f64, d as f64, c as f64);
    Ok((n * c - d) / (d * (n - 1.0)))
}

/// Largest number of equiangular lines permitted: `d(d+1)/2` over ℝ, `d²`
/// over ℂ.
pub fn gerzon_limit(d: usize, field: Field) -> usize {
    match field {
        Field::Real => d * (d + 1) / 2,
        Field::Complex => d * d,
    }
}

/// Dimension of the real space of traceless self-adjoint `d×d` matrices.
pub fn traceless_space_dim(d: usize, field: Field) -> usize {
    gerzon_limit(d, field) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthoplexBound {
    /// Upper bound `c(d−c)/d` on the squared chordal packing radius.
    pub chordal: f64,
    /// Lower bound `c²/d` on `max_{j≠k} ⟨P_j, P_k⟩_F`.
    pub gram: f64,
}

/// Orthoplex bound, applicable once `n` exceeds the Gerzon limit.
pub fn orthoplex_bound(n: usize, d: usize, c: usize, field: Field) -> Option<OrthoplexBound> {
    if c == 0 || c > d || n <= gerzon_limit(d, field) {
        return None;
    }
    let (d, c) = (d as f64, c as f64);
    Some(OrthoplexBound {
        chordal: c * (d - c) / d,
        gram: c * c / d,
    })
}

/// All bounds for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    pub field: Field,
    /// Present only for lines (`c = 1`) with `n ≥ d`.
    pub welch: Option<f64>,
    pub simplex_chordal: f64,
    pub simplex_gram: f64,
    pub eitff_spectral: f64,
    pub orthoplex_chordal: Option<f64>,
    pub orthoplex_gram: Option<f64>,
    pub gerzon: usize,
    pub traceless_dim: usize,
    pub notes: Vec<String>,
}

pub fn bound_report(n: usize, d: usize, c: usize, field: Field) -> Result<BoundReport> {
    let simplex_chordal = simplex_bound_chordal(n, d, c)?;
    let simplex_gram = simplex_bound_gram(n, d, c)?;
    let eitff_spectral = eitff_bound(n, d, c)?;
    let gerzon = gerzon_limit(d, field);
    let orthoplex = orthoplex_bound(n, d, c, field);

    let mut notes = Vec::new();
    let welch = if c == 1 && n >= d {
        Some(welch_bound(n, d)?)
    } else {
        notes.push(if c != 1 {
            "welch: applies to lines only (c = 1)".to_string()
        } else {
            format!("welch: needs n >= d ({n} < {d})")
        });
        None
    };
    if n * c < d {
        notes.push(format!(
            "simplex: nc = {} < d = {d}, bound is vacuous (orthogonal subspaces exist)",
            n * c
        ));
    }
    if orthoplex.is_none() {
        notes.push(format!("orthoplex: needs n > {gerzon} for this field"));
    }

    Ok(BoundReport {
        n,
        d,
        c,
        field,
        welch,
        simplex_chordal,
        simplex_gram,
        eitff_spectral,
        orthoplex_chordal: orthoplex.map(|o| o.chordal),
        orthoplex_gram: orthoplex.map(|o| o.gram),
        gerzon,
        traceless_dim: traceless_space_dim(d, field),
        notes,
    })
}
