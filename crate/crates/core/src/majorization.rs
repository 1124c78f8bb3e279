//! The majorization preorder on real vectors and Hermitian operators.

use crate::error::{Error, Result};
use crate::spectral::{eigh, HermitianMatrix};

/// Outcome of a majorization comparison, with per-k partial-sum gaps.
#[derive(Clone, Debug)]
pub struct MajorizationVerdict {
    pub holds: bool,
    /// gaps[k-1] = s_k(x) - s_k(y) for k in [d].
    pub gaps: Vec<f64>,
    /// s_d(x) - s_d(y); always equals gaps[d-1].
    pub trace_gap: f64,
    /// Least violating k; a trace mismatch is reported as k = d.
    pub first_violation: Option<usize>,
}

/// Stable descending sort; ties keep original index order.
pub fn sorted_descending(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].partial_cmp(&x[i]).unwrap().then(i.cmp(&j)));
    idx.into_iter().map(|i| x[i]).collect()
}

/// Sum of the k largest coordinates of x.
pub fn s_k(x: &[f64], k: usize) -> Result<f64> {
    if k < 1 || k > x.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: x.len(),
        });
    }
    Ok(sorted_descending(x)[..k].iter().sum())
}

/// Does x majorize y? All partial sums of x dominate those of y, with
/// equal totals, up to `tol`.
pub fn majorizes(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let d = x.len();
    let xs = sorted_descending(x);
    let ys = sorted_descending(y);
    let mut gaps = Vec::with_capacity(d);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..d {
        cx += xs[i];
        cy += ys[i];
        gaps.push(cx - cy);
    }
    let trace_gap = gaps[d - 1];
    let mut first_violation = None;
    for (i, &g) in gaps.iter().take(d - 1).enumerate() {
        if g < -tol {
            first_violation = Some(i + 1);
            break;
        }
    }
    if first_violation.is_none() && trace_gap.abs() > tol {
        first_violation = Some(d);
    }
    Ok(MajorizationVerdict {
        holds: first_violation.is_none(),
        gaps,
        trace_gap,
        first_violation,
    })
}

/// Spectral majorization: does A majorize B?
pub fn operator_majorizes(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let da = eigh(a)?;
    let db = eigh(b)?;
    majorizes(da.eigenvalues(), db.eigenvalues(), tol)
}

/// Default tolerance for operator comparisons.
pub const DEFAULT_TOL: f64 = 1e-7;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::align_map;

    #[test]
    fn s_k_basics() {
        assert_eq!(s_k(&[3.0, 1.0, 2.0], 2).unwrap(), 5.0);
        for k in 1..=4 {
            assert_eq!(s_k(&[1.0; 4], k).unwrap(), k as f64);
        }
        assert!(s_k(&[1.0], 2).is_err());
        assert!(s_k(&[1.0], 0).is_err());
    }

    #[test]
    fn s_k_matches_subset_enumeration() {
        // seeded random length-10 vector; oracle: max over all 4-subsets
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        let x: Vec<f64> = (0..10).map(|_| next()).collect();
        let k = 4;
        let mut best = f64::NEG_INFINITY;
        let mut count = 0;
        for mask in 0u32..(1 << 10) {
            if mask.count_ones() == k {
                count += 1;
                let sum: f64 = (0..10).filter(|i| mask >> i & 1 == 1).map(|i| x[i]).sum();
                best = best.max(sum);
            }
        }
        assert_eq!(count, 210);
        assert!((s_k(&x, k as usize).unwrap() - best).abs() < 1e-12);
    }

    #[test]
    fn pure_majorizes_mixed() {
        let v = majorizes(&[1.0, 0.0], &[0.5, 0.5], 0.0).unwrap();
        assert!(v.holds);
        assert_eq!(v.first_violation, None);
    }

    #[test]
    fn null_does_not_majorize_indefinite() {
        let v = majorizes(&[0.0; 4], &[1.0, 1.0, -1.0, -1.0], 0.0).unwrap();
        assert!(!v.holds);
        assert_eq!(v.first_violation, Some(1));
    }

    #[test]
    fn reflexive() {
        let x = [0.4, -1.2, 3.0, 0.4];
        let v = majorizes(&x, &x, 0.0).unwrap();
        assert!(v.holds);
        assert!(v.gaps.iter().all(|g| g.abs() == 0.0));
    }

    #[test]
    fn transitive_on_integers() {
        let x = [4.0, 1.0, 1.0];
        let y = [3.0, 2.0, 1.0];
        let z = [2.0, 2.0, 2.0];
        assert!(majorizes(&x, &y, 0.0).unwrap().holds);
        assert!(majorizes(&y, &z, 0.0).unwrap().holds);
        assert!(majorizes(&x, &z, 0.0).unwrap().holds);
    }

    #[test]
    fn mutual_majorization_is_equality() {
        let x = [2.0, 1.0, 0.0];
        let y = [0.0, 2.0, 1.0];
        assert!(majorizes(&x, &y, 0.0).unwrap().holds);
        assert!(majorizes(&y, &x, 0.0).unwrap().holds);
        let z = [2.0, 0.5, 0.5];
        assert!(!(majorizes(&x, &z, 0.0).unwrap().holds && majorizes(&z, &x, 0.0).unwrap().holds));
    }

    #[test]
    fn operator_majorizes_aligned() {
        let b = HermitianMatrix::from_real_diag(&[0.3, 0.7]);
        let a = align_map(&b).unwrap();
        let v = operator_majorizes(&a, &b, 0.0).unwrap();
        assert!(v.holds);
        assert!(v.gaps.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(majorizes(&[1.0], &[1.0, 0.0], 0.0).is_err());
    }
}
