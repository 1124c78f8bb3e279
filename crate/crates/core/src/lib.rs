//! Eigenvalue-sum inequalities for sums of Hermitian operators.
//!
//! The library computes linear-programming refinements of the classical
//! bound s_k(A1 + A2) <= s_k(A1) + s_k(A2): alignment terms measuring the
//! overlap of largest-eigenvalue spaces tighten the bound to an LP
//! optimum u_k that is exact for simultaneously diagonal summands. On top
//! of that sit checks for the separable majorization relation for sums of
//! two PSD tensor products and the two-letter spin alignment inequality,
//! each cross-validated against brute-force oracles at small dimension.

pub mod alignment_lp;
pub mod diagonal;
pub mod error;
pub mod majorization;
pub mod mat;
pub mod random;
mod simplex;
pub mod spectral;
pub mod tensor;

pub use alignment_lp::{AlignmentTable, LinearProgramInstance, LpSolution};
pub use diagonal::{OmegaChains, SubsetPair};
pub use error::{Error, Result};
pub use majorization::MajorizationVerdict;
pub use mat::Mat;
pub use random::CounterRng;
pub use spectral::{HermitianMatrix, SpectralDecomposition, Subspace};
pub use tensor::{DownsetChain, ProductDecomposition};
