//! Subspaces, fusion frames, and the distances between them.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Mat, C64, DEFAULT_TOL};
use crate::par;

/// A `d×c` matrix with orthonormal columns, standing for its column span.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    mat: Mat,
}

impl SubspaceBasis {
    /// Wraps `mat`, checking orthonormality at the default tolerance.
    pub fn new(mat: Mat) -> Result<SubspaceBasis> {
        SubspaceBasis::with_tol(mat, DEFAULT_TOL)
    }

    pub fn with_tol(mat: Mat, tol: f64) -> Result<SubspaceBasis> {
        if mat.cols() > mat.rows() {
            return Err(Error::RankDeficient {
                rank: mat.rows(),
                cols: mat.cols(),
            });
        }
        let defect = linalg::orthonormality_defect(&mat);
        if defect.is_nan() || defect > tol {
            return Err(Error::NotOrthonormal {
                index: 0,
                defect,
                tol,
            });
        }
        Ok(SubspaceBasis { mat })
    }

    /// Orthonormal basis of the column span of `mat`.
    pub fn from_span(mat: &Mat) -> Result<SubspaceBasis> {
        Ok(SubspaceBasis {
            mat: linalg::orthonormalize(mat)?,
        })
    }

    /// Caller guarantees orthonormal columns.
    pub(crate) fn from_orthonormal(mat: Mat) -> SubspaceBasis {
        debug_assert!(linalg::orthonormality_defect(&mat) < 1e-8);
        SubspaceBasis { mat }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_mat(self) -> Mat {
        self.mat
    }

    /// Ambient dimension.
    pub fn d(&self) -> usize {
        self.mat.rows()
    }

    /// Subspace dimension.
    pub fn c(&self) -> usize {
        self.mat.cols()
    }

    pub fn field(&self) -> Field {
        self.mat.field()
    }
}

/// `n` subspaces of common dimension `c` in `F^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrame {
    field: Field,
    d: usize,
    c: usize,
    bases: Vec<SubspaceBasis>,
}

impl FusionFrame {
    pub fn new(field: Field, bases: Vec<SubspaceBasis>) -> Result<FusionFrame> {
        let first = bases
            .first()
            .ok_or_else(|| Error::InvalidArgument("a frame needs at least one subspace".into()))?;
        let (d, c) = (first.d(), first.c());
        let mut out = Vec::with_capacity(bases.len());
        for (j, b) in bases.into_iter().enumerate() {
            if b.d() != d || b.c() != c {
                return Err(Error::DimensionMismatch(format!(
                    "basis {} is {}x{}, expected {d}x{c}",
                    j + 1,
                    b.d(),
                    b.c()
                )));
            }
            let b = match field {
                Field::Real if !b.mat.is_real_valued() => {
                    return Err(Error::InvalidArgument(format!(
                        "basis {} has complex entries in a real frame",
                        j + 1
                    )))
                }
                Field::Real => SubspaceBasis {
                    mat: Mat::from_complex(d, c, b.mat.entries().to_vec(), Field::Real)?,
                },
                Field::Complex => SubspaceBasis {
                    mat: b.mat.into_complex(),
                },
            };
            out.push(b);
        }
        Ok(FusionFrame {
            field,
            d,
            c,
            bases: out,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn n(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[SubspaceBasis] {
        &self.bases
    }

    pub fn basis(&self, j: usize) -> &SubspaceBasis {
        &self.bases[j]
    }

    /// Redundancy-weighted tight frame constant `nc/d`.
    pub fn alpha(&self) -> f64 {
        (self.n() * self.c) as f64 / self.d as f64
    }

    /// Basis matrices `Φ_j`.
    pub fn mats(&self) -> Vec<&Mat> {
        self.bases.iter().map(|b| &b.mat).collect()
    }

    /// Synthesis operator `[Φ_1 ⋯ Φ_n]`, a `d × nc` matrix.
    pub fn synthesis(&self) -> Mat {
        let (d, c, n) = (self.d, self.c, self.n());
        let mut out = Mat::zeros(d, n * c, self.field);
        for (j, b) in self.bases.iter().enumerate() {
            for i in 0..d {
                for k in 0..c {
                    out[(i, j * c + k)] = b.mat[(i, k)];
                }
            }
        }
        out
    }

    fn require_pairs(&self) -> Result<()> {
        if self.n() < 2 {
            Err(Error::TooFewSubspaces(self.n()))
        } else {
            Ok(())
        }
    }

    fn require_lines(&self) -> Result<()> {
        if self.c != 1 {
            Err(Error::NotLines(self.c))
        } else {
            Ok(())
        }
    }

    /// Inner product `⟨φ_j, φ_k⟩` of two members of a line frame.
    pub(crate) fn line_inner(&self, j: usize, k: usize) -> C64 {
        let (a, b) = (&self.bases[j].mat, &self.bases[k].mat);
        (0..self.d).map(|i| a[(i, 0)].conj() * b[(i, 0)]).sum()
    }
}

/// Principal angles in radians, nondecreasing, each in `[0, π/2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalAngles {
    pub thetas: Vec<f64>,
}

impl PrincipalAngles {
    /// Cosines of the angles, nonincreasing.
    pub fn cosines(&self) -> Vec<f64> {
        self.thetas.iter().map(|t| t.cos()).collect()
    }
}

fn check_pair(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<()> {
    if b1.d() != b2.d() || b1.c() != b2.c() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} against {}x{}",
            b1.d(),
            b1.c(),
            b2.d(),
            b2.c()
        )));
    }
    Ok(())
}

/// Orthogonal projection `Φ Φ*` onto the span.
pub fn projection(b: &SubspaceBasis) -> Mat {
    b.mat.matmul(&b.mat.adjoint())
}

/// Cross-Gramian `Φ₁* Φ₂`.
pub fn cross_gramian(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<Mat> {
    check_pair(b1, b2)?;
    Ok(b1.mat.adjoint_mul(&b2.mat))
}

/// The `nc × nc` block matrix of all cross-Gramians.
pub fn fusion_gram(f: &FusionFrame) -> Mat {
    let phi = f.synthesis();
    phi.adjoint_mul(&phi)
}

/// `Σ_j P_j`, computed as `Φ Φ*` of the synthesis operator.
pub fn fusion_frame_operator(f: &FusionFrame) -> Mat {
    let phi = f.synthesis();
    phi.matmul(&phi.adjoint())
}

pub fn principal_angles(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<PrincipalAngles> {
    let g = cross_gramian(b1, b2)?;
    let cosines = linalg::singular_values(&g)?;
    // acos loses half the digits near 1, so small angles come from the
    // sines: singular values of (I − P₁)Φ₂, taken in increasing order.
    let residual = b2.mat() - &b1.mat().matmul(&g);
    let mut sines = linalg::singular_values(&residual)?;
    sines.reverse();
    let mut thetas: Vec<f64> = cosines
        .iter()
        .zip(&sines)
        .map(|(&cos, &sin)| {
            if cos * cos > 0.5 {
                sin.clamp(0.0, 1.0).asin()
            } else {
                cos.clamp(0.0, 1.0).acos()
            }
        })
        .collect();
    thetas.sort_by(f64::total_cmp);
    Ok(PrincipalAngles { thetas })
}

/// Squared chordal distance `c − ‖Φ₁*Φ₂‖_F²`, in `[0, c]`.
pub fn chordal_distance_sq(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<f64> {
    let g = cross_gramian(b1, b2)?;
    let c = b1.c() as f64;
    Ok((c - g.frobenius_norm_sq()).clamp(0.0, c))
}

/// Squared spectral distance `1 − ‖Φ₁*Φ₂‖₂²`, i.e. `sin²` of the smallest
/// principal angle.
pub fn spectral_distance_sq(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<f64> {
    let g = cross_gramian(b1, b2)?;
    let s = g.spectral_norm()?;
    Ok((1.0 - s * s).clamp(0.0, 1.0))
}

/// Euclidean norm of the principal-angle vector.
pub fn geodesic_distance(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<f64> {
    let angles = principal_angles(b1, b2)?;
    Ok(angles
        .thetas
        .iter()
        .map(|t| t.clamp(0.0, FRAC_PI_2).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Overlaps of one pair `j < k` of a frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOverlap {
    pub j: usize,
    pub k: usize,
    /// `‖Φ_j*Φ_k‖_F² = ⟨P_j, P_k⟩_F`.
    pub frobenius_sq: f64,
    /// `‖Φ_j*Φ_k‖₂²`.
    pub spectral_sq: f64,
}

/// Overlaps of every pair `j < k`, in lexicographic pair order.
pub fn pairwise_overlaps(f: &FusionFrame) -> Result<Vec<PairOverlap>> {
    f.require_pairs()?;
    let pairs = par::pairs(f.n());
    par::map_slice(&pairs, |&(j, k)| {
        let g = f.bases[j].mat.adjoint_mul(&f.bases[k].mat);
        let s = g.spectral_norm()?;
        Ok(PairOverlap {
            j,
            k,
            frobenius_sq: g.frobenius_norm_sq(),
            spectral_sq: s * s,
        })
    })
    .into_iter()
    .collect()
}

fn max_over_pairs(f: &FusionFrame, value: impl Fn(&Mat) -> f64 + Sync + Send) -> Result<f64> {
    f.require_pairs()?;
    let pairs = par::pairs(f.n());
    let vals = par::map_slice(&pairs, |&(j, k)| {
        value(&f.bases[j].mat.adjoint_mul(&f.bases[k].mat))
    });
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `max_{j≠k} ‖Φ_j*Φ_k‖_F²`, the quantity the simplex bound controls.
pub fn max_chordal_overlap(f: &FusionFrame) -> Result<f64> {
    max_over_pairs(f, Mat::frobenius_norm_sq)
}

/// `max_{j≠k} ‖Φ_j*Φ_k‖₂²`.
pub fn max_spectral_overlap(f: &FusionFrame) -> Result<f64> {
    Ok(pairwise_overlaps(f)?
        .iter()
        .map(|p| p.spectral_sq)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Squared packing radius `½ min_{j≠k} ‖P_j − P_k‖_F²`.
pub fn min_chordal_packing(f: &FusionFrame) -> Result<f64> {
    let c = f.c as f64;
    Ok((c - max_chordal_overlap(f)?).clamp(0.0, c))
}

/// `max_{j≠k} |⟨φ_j, φ_k⟩|` for a frame of lines.
pub fn coherence(f: &FusionFrame) -> Result<f64> {
    f.require_lines()?;
    Ok(max_chordal_overlap(f)?.sqrt())
}

/// `max_{j≠k} Re⟨φ_j, φ_k⟩`, the signed quantity in Rankin's bounds.
pub fn max_signed_inner(f: &FusionFrame) -> Result<f64> {
    f.require_lines()?;
    f.require_pairs()?;
    Ok(par::pairs(f.n())
        .into_iter()
        .map(|(j, k)| f.line_inner(j, k).re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Normalized traceless part `[d/(c(d−c))]^{1/2} (P − (c/d) I)` of the
/// projection onto the span. Unit Frobenius norm.
pub fn traceless_embed(b: &SubspaceBasis) -> Result<Mat> {
    let (d, c) = (b.d(), b.c());
    if c == d {
        return Err(Error::FullSpace(d));
    }
    let (df, cf) = (d as f64, c as f64);
    let shifted = &projection(b) - &Mat::identity(d, b.field()).scale(cf / df);
    Ok(shifted.scale((df / (cf * (df - cf))).sqrt()))
}
