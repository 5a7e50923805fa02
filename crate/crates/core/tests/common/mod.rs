#![allow(dead_code)]

use grasspack::construct::random_frame;
use grasspack::linalg::{orthonormalize, Field, Mat};
use grasspack::{FusionFrame, SubspaceBasis};

/// Random unitary (orthogonal for `Field::Real`) of size `n`.
pub fn random_unitary(field: Field, n: usize, seed: u64) -> Mat {
    let f = random_frame(field, n, n, 1, seed).unwrap();
    orthonormalize(f.basis(0).mat()).unwrap()
}

/// Right-multiplies every basis by its own random unitary.
pub fn rebase(f: &FusionFrame, seed: u64) -> FusionFrame {
    let bases = f
        .bases()
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let u = random_unitary(f.field(), f.c(), seed.wrapping_mul(1000).wrapping_add(j as u64));
            SubspaceBasis::new(b.mat().matmul(&u)).unwrap()
        })
        .collect();
    FusionFrame::new(f.field(), bases).unwrap()
}

/// Left-multiplies every basis by one random `d×d` unitary.
pub fn rotate(f: &FusionFrame, seed: u64) -> FusionFrame {
    let u = random_unitary(f.field(), f.d(), seed);
    let bases = f
        .bases()
        .iter()
        .map(|b| SubspaceBasis::new(u.matmul(b.mat())).unwrap())
        .collect();
    FusionFrame::new(f.field(), bases).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
