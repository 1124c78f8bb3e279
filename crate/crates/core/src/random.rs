//! Seeded, portable random instance generation.
//!
//! The generator is counter-based SplitMix64: output n is the SplitMix64
//! finalizer applied to seed + n * 0x9E3779B97F4A7C15. Seeds therefore
//! produce the same stream in any language that implements the same
//! finalizer, with no hidden state beyond the counter. Gaussians come
//! from Box-Muller on that stream.

use crate::mat::Mat;
use crate::spectral::{HermitianMatrix, Subspace};
use num_complex::Complex64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
    spare_gaussian: Option<f64>,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            seed,
            counter: 0,
            spare_gaussian: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let out = mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter += 1;
        out
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller; generates pairs, caches the spare.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        loop {
            let u1 = self.next_f64();
            let u2 = self.next_f64();
            if u1 <= 0.0 {
                continue;
            }
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * u2;
            self.spare_gaussian = Some(r * theta.sin());
            return r * theta.cos();
        }
    }

    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.next_gaussian(), self.next_gaussian())
    }

    /// Uniform integer in [0, n).
    pub fn next_below(&mut self, n: usize) -> usize {
        (self.next_f64() * n as f64) as usize % n
    }
}

/// Complex matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(d: usize, rng: &mut CounterRng) -> Mat {
    let mut g = Mat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = rng.next_complex_gaussian();
        }
    }
    g
}

/// Random Hermitian matrix: (G + G*)/2 of a Gaussian G.
pub fn random_hermitian(d: usize, rng: &mut CounterRng) -> HermitianMatrix {
    let g = gaussian_matrix(d, rng);
    let h = g.add(&g.adjoint()).scale(0.5);
    HermitianMatrix::new(h).expect("symmetrized Gaussian is Hermitian")
}

/// Random density matrix: G G* normalized to unit trace. PSD by
/// construction.
pub fn random_psd(d: usize, rng: &mut CounterRng) -> HermitianMatrix {
    let g = gaussian_matrix(d, rng);
    let gg = g.mul(&g.adjoint());
    let t = gg.trace().re;
    HermitianMatrix::new(gg.scale(1.0 / t)).expect("G G* is Hermitian")
}

/// Haar-random unit vector (normalized complex Gaussian).
pub fn random_unit_vector(d: usize, rng: &mut CounterRng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| rng.next_complex_gaussian()).collect();
        let n = crate::mat::vec_norm(&v);
        if n > 1e-6 {
            return v.iter().map(|z| z / n).collect();
        }
    }
}

/// Random pure state vv*.
pub fn random_pure(d: usize, rng: &mut CounterRng) -> HermitianMatrix {
    HermitianMatrix::pure_state(&random_unit_vector(d, rng))
}

/// Haar-random unitary via Gram-Schmidt on a Gaussian matrix.
pub fn haar_unitary(d: usize, rng: &mut CounterRng) -> Mat {
    loop {
        let g = gaussian_matrix(d, rng);
        if let Some(q) = gram_schmidt(&g) {
            return q;
        }
    }
}

fn gram_schmidt(g: &Mat) -> Option<Mat> {
    let d = g.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..d).map(|j| g.col(j)).collect();
    for j in 0..d {
        for i in 0..j {
            let proj = crate::mat::dot(&cols[i], &cols[j]);
            for r in 0..d {
                let sub = proj * cols[i][r];
                cols[j][r] -= sub;
            }
        }
        let n = crate::mat::vec_norm(&cols[j]);
        if n < 1e-8 {
            return None;
        }
        for r in 0..d {
            cols[j][r] /= n;
        }
    }
    let mut q = Mat::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        q.set_col(j, c);
    }
    Some(q)
}

/// Haar-random k-dimensional subspace of C^d.
pub fn random_subspace(d: usize, k: usize, rng: &mut CounterRng) -> Subspace {
    let q = haar_unitary(d, rng);
    let cols: Vec<Vec<Complex64>> = (0..k).map(|j| q.col(j)).collect();
    Subspace::from_orthonormal_columns(&cols)
}

/// Random probability vector of length n (normalized uniforms).
pub fn random_probability(n: usize, rng: &mut CounterRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.next_f64() + 1e-12).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}
