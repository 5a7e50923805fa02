//! Known optimal packings and seeded random frames.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Mat, C64};
use crate::metrics::{FusionFrame, SubspaceBasis};

/// Index set in `Z_N` used by [`harmonic_etf`]. Whether it is a genuine
/// difference set is not checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSet {
    modulus: usize,
    elements: Vec<usize>,
}

impl DifferenceSet {
    /// Residues are sorted; duplicates and out-of-range values are rejected.
    pub fn new(modulus: usize, elements: &[usize]) -> Result<DifferenceSet> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        if let Some(&bad) = sorted.iter().find(|&&k| k >= modulus) {
            return Err(Error::InvalidArgument(format!(
                "element {bad} out of range for modulus {modulus}"
            )));
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("elements must be distinct".into()));
        }
        Ok(DifferenceSet {
            modulus,
            elements: sorted,
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
}

fn unit_vector_frame(field: Field, vectors: Vec<Vec<C64>>) -> Result<FusionFrame> {
    let bases = vectors
        .into_iter()
        .map(|v| Ok(SubspaceBasis::from_orthonormal(Mat::column(v, field)?)))
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::new(field, bases)
}

/// `n` unit vectors in `ℝ^{n−1}` with every pairwise inner product equal to
/// `−1/(n−1)`.
///
/// The standard basis of `ℝⁿ` is centered (projected off the all-ones
/// vector), normalized, and written in the orthonormal basis obtained by
/// QR of the first `n−1` centered vectors.
pub fn regular_simplex(n: usize) -> Result<FusionFrame> {
    if n < 2 {
        return Err(Error::TooFewSubspaces(n));
    }
    let nf = n as f64;
    let centered = |j: usize, i: usize| if i == j { 1.0 - 1.0 / nf } else { -1.0 / nf };

    let mut span = Mat::zeros(n, n - 1, Field::Real);
    for j in 0..n - 1 {
        for i in 0..n {
            span[(i, j)] = C64::new(centered(j, i), 0.0);
        }
    }
    let q = linalg::orthonormalize(&span)?;

    let norm = (1.0 - 1.0 / nf).sqrt();
    let vectors = (0..n)
        .map(|j| {
            let mut coords: Vec<C64> = (0..n - 1)
                .map(|k| {
                    let dot: f64 = (0..n).map(|i| q[(i, k)].re * centered(j, i)).sum();
                    C64::new(dot / norm, 0.0)
                })
                .collect();
            // Renormalize away rounding in the coordinate change.
            let len = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            coords.iter_mut().for_each(|z| *z /= len);
            coords
        })
        .collect();
    unit_vector_frame(Field::Real, vectors)
}

/// `{±e_j}` in `ℝ^d`: first `e_1..e_d`, then `−e_1..−e_d`.
pub fn orthoplex(d: usize) -> Result<FusionFrame> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let vectors = [1.0, -1.0]
        .iter()
        .flat_map(|&sign| {
            (0..d).map(move |j| {
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[j] = C64::new(sign, 0.0);
                v
            })
        })
        .collect();
    unit_vector_frame(Field::Real, vectors)
}

/// Harmonic frame: `N` vectors in `ℂ^{|D|}`, vector `j` having entry
/// `exp(2πi jk/N)/√|D|` for each `k ∈ D`. Equiangular when `D` is a
/// difference set; always tight.
pub fn harmonic_etf(ds: &DifferenceSet) -> Result<FusionFrame> {
    let (big_n, d) = (ds.modulus, ds.elements.len());
    if d == 0 || d >= big_n {
        return Err(Error::InvalidArgument(format!(
            "index set must be nonempty and proper, got {d} of {big_n} residues"
        )));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let vectors = (0..big_n)
        .map(|j| {
            ds.elements
                .iter()
                .map(|&k| {
                    // Reduce jk mod N first so the angle stays small and exact.
                    let r = (j * k) % big_n;
                    C64::from_polar(scale, TAU * r as f64 / big_n as f64)
                })
                .collect()
        })
        .collect();
    unit_vector_frame(Field::Complex, vectors)
}

/// Tensors each vector of a line frame with `I_c`, giving `n` subspaces of
/// dimension `c` in `F^{ce}`. An ETF input yields an EITFF.
pub fn tensor_eitff(etf: &FusionFrame, c: usize) -> Result<FusionFrame> {
    if etf.c() != 1 {
        return Err(Error::NotLines(etf.c()));
    }
    if c == 0 {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    let id = Mat::identity(c, etf.field());
    let bases = etf
        .bases()
        .iter()
        .map(|b| SubspaceBasis::new(linalg::kron(b.mat(), &id)))
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::new(etf.field(), bases)
}

/// `n` independent Haar-random subspaces: each basis orthonormalizes a
/// `d×c` standard Gaussian matrix drawn from ChaCha8 seeded with `seed`.
///
/// Entries are drawn row-major; complex entries draw real then imaginary.
pub fn random_frame(field: Field, d: usize, c: usize, n: usize, seed: u64) -> Result<FusionFrame> {
    if c == 0 || c > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= c <= d, got c = {c}, d = {d}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = (0..n)
        .map(|_| {
            let data = (0..d * c)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = match field {
                        Field::Real => 0.0,
                        Field::Complex => StandardNormal.sample(&mut rng),
                    };
                    C64::new(re, im)
                })
                .collect();
            SubspaceBasis::from_span(&Mat::from_complex(d, c, data, field)?)
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::new(field, bases)
}
