//! Hermitian linear algebra: spectral decomposition by cyclic Jacobi
//! rotations, largest-eigenvalue flag projectors, the alignment map and
//! von Neumann entropy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;

/// A d x d complex matrix that is Hermitian up to floating point noise.
///
/// Construction symmetrizes the input via (H + H*)/2 and rejects matrices
/// whose asymmetry exceeds 1e-8 relative to the norm.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    mat: Mat,
}

impl HermitianMatrix {
    pub fn new(mat: Mat) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let adj = mat.adjoint();
        let asym = mat.sub(&adj).max_abs();
        if asym > 1e-8 * (1.0 + mat.max_abs()) {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(HermitianMatrix {
            mat: mat.add(&adj).scale(0.5),
        })
    }

    pub fn zeros(d: usize) -> Self {
        HermitianMatrix { mat: Mat::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        HermitianMatrix { mat: Mat::identity(d) }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = Mat::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = Complex64::new(diag[i], 0.0);
        }
        HermitianMatrix { mat: m }
    }

    /// Rank-1 projector v v* / |v|^2.
    pub fn pure_state(v: &[Complex64]) -> Self {
        let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        HermitianMatrix {
            mat: Mat::outer(v).scale(1.0 / n2),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            mat: self.mat.sub(&other.mat),
        }
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix {
            mat: self.mat.scale(s),
        }
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// U H U* for a unitary U.
    pub fn conjugate(&self, u: &Mat) -> HermitianMatrix {
        HermitianMatrix {
            mat: u.mul(&self.mat).mul(&u.adjoint()),
        }
    }
}

/// Sorted eigenvalues with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat,
}

impl SpectralDecomposition {
    /// Assemble a decomposition from explicit parts, validating sorting and
    /// orthonormality. Used to hand the LP machinery an alternative flag of
    /// a degenerate operator.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Mat) -> Result<Self> {
        let d = eigenvalues.len();
        if eigenvectors.rows() != d || eigenvectors.cols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: eigenvectors.rows(),
            });
        }
        for w in eigenvalues.windows(2) {
            if w[0] < w[1] - 1e-12 {
                return Err(Error::NotAState {
                    reason: "eigenvalues not sorted decreasingly".into(),
                });
            }
        }
        let gram = eigenvectors.adjoint().mul(&eigenvectors);
        let dev = gram.sub(&Mat::identity(d)).max_abs();
        if dev > 1e-10 {
            return Err(Error::NotAState {
                reason: format!("eigenvector columns not orthonormal (deviation {dev:e})"),
            });
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors.col(i)
    }

    pub fn eigenvectors(&self) -> &Mat {
        &self.eigenvectors
    }

    /// Rank-1 eigenprojector for the i-th (0-based) eigenvector.
    pub fn eigenprojector(&self, i: usize) -> Mat {
        Mat::outer(&self.eigenvectors.col(i))
    }
}

/// A subspace given by its dimension and orthogonal projector.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub dim: usize,
    pub projector: HermitianMatrix,
}

impl Subspace {
    /// Span of orthonormal columns.
    pub fn from_orthonormal_columns(cols: &[Vec<Complex64>]) -> Self {
        let d = cols[0].len();
        let mut p = Mat::zeros(d, d);
        for v in cols {
            p = p.add(&Mat::outer(v));
        }
        Subspace {
            dim: cols.len(),
            projector: HermitianMatrix { mat: p },
        }
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Off-diagonal Frobenius norm is driven below 1e-12 * ||H||_F, capped at
/// 100 sweeps. Eigenvalues are returned weakly decreasing; ties keep the
/// solver order, stabilized by a descending-then-index sort.
pub fn eigh(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let d = h.dim();
    let mut a = h.mat.clone();
    let mut v = Mat::identity(d);
    let norm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-12 * norm;

    let off = |a: &Mat| -> f64 {
        let mut s = 0.0;
        for p in 0..d {
            for q in 0..d {
                if p != q {
                    s += a[(p, q)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let z = a[(p, q)];
                let zn = z.norm();
                if zn <= target / (d as f64) {
                    continue;
                }
                // Phase so the pivot becomes real: z = |z| e^{i phi}.
                let phase = z / zn;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Rotation angle: (c^2 - s^2)|z| = c s (app - aqq).
                let tau = (app - aqq) / (2.0 * zn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns of the plane rotation:
                //   u1 = c e_p + s conj(phase) e_q,  u2 = -s phase e_p + c e_q.
                for r in 0..d {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * c + arq * s * phase.conj();
                    a[(r, q)] = -arp * s * phase + arq * c;
                }
                for r in 0..d {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = apr * c + aqr * s * phase;
                    a[(q, r)] = -apr * s * phase.conj() + aqr * c;
                }
                // Clean up the annihilated pair and rounding on the diagonal.
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for r in 0..d {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * c + vrq * s * phase.conj();
                    v[(r, q)] = -vrp * s * phase + vrq * c;
                }
            }
        }
        sweeps += 1;
        converged = off(&a) <= target;
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap()
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Mat::zeros(d, d);
    for (new, &old) in order.iter().enumerate() {
        vectors.set_col(new, &v.col(old));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Projector onto the span of the first `l` eigenvectors (1 <= l <= d).
pub fn flag_projector(dec: &SpectralDecomposition, l: usize) -> Result<Subspace> {
    let d = dec.dim();
    if l < 1 || l > d {
        return Err(Error::IndexOutOfRange { index: l, max: d });
    }
    let mut p = Mat::zeros(d, d);
    for i in 0..l {
        p = p.add(&dec.eigenprojector(i));
    }
    Ok(Subspace {
        dim: l,
        projector: HermitianMatrix { mat: p },
    })
}

/// The alignment map: replace H by the diagonal matrix of its sorted
/// spectrum in the standard basis.
pub fn align_map(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = eigh(h)?;
    Ok(HermitianMatrix::from_real_diag(dec.eigenvalues()))
}

/// Von Neumann entropy -tr(rho log2 rho) in bits.
///
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower, or a
/// trace off 1 by more than 1e-8, is rejected.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    let dec = eigh(rho)?;
    let trace: f64 = dec.eigenvalues().iter().sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::NotAState {
            reason: format!("trace {trace} deviates from 1"),
        });
    }
    let mut entropy = 0.0;
    for &lam in dec.eigenvalues() {
        if lam < -1e-10 {
            return Err(Error::NotAState {
                reason: format!("negative eigenvalue {lam:e}"),
            });
        }
        if lam > 0.0 {
            entropy -= lam * lam.log2();
        }
    }
    Ok(entropy)
}

/// Kronecker product of Hermitian matrices, row-major pair index.
pub fn tensor_product(x: &HermitianMatrix, y: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix {
        mat: x.mat.kron(&y.mat),
    }
}

/// tr(P H) for a projector-weighted trace; real by Hermiticity.
pub fn trace_product(p: &HermitianMatrix, h: &HermitianMatrix) -> f64 {
    p.mat.mul(&h.mat).trace().re
}
