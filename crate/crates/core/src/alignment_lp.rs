//! Alignment terms, the constraint polyhedra P0 and P1, the LP bound u_k,
//! the staggered closed-form bound, and an exhaustive 0/1 cross-solver.

use crate::error::{Error, Result};
use crate::majorization::s_k;
use crate::simplex::{self, Problem, Relation};
use crate::spectral::{
    eigh, flag_projector, HermitianMatrix, SpectralDecomposition, Subspace,
};

/// The d x d grid of alignment terms for a fixed k.
#[derive(Clone, Debug)]
pub struct AlignmentTable {
    d: usize,
    k: usize,
    /// alpha[(l1-1)*d + (l2-1)]
    alpha: Vec<f64>,
}

/// Lower bound on an alignment term (Lidskii).
pub fn alpha_lower_bound(d: usize, k: usize, l1: usize, l2: usize) -> f64 {
    let overflow = (l1 + l2).saturating_sub(d);
    (k.min(overflow) + k.min(l1 + l2)) as f64
}

/// Upper bound on an alignment term (Fan's maximum principle).
pub fn alpha_upper_bound(k: usize, l1: usize, l2: usize) -> f64 {
    (l1.min(k) + l2.min(k)) as f64
}

impl AlignmentTable {
    /// Validates the Lidskii/Fan bounds and monotonicity in both indices.
    pub fn new(d: usize, k: usize, alpha: Vec<f64>) -> Result<Self> {
        assert_eq!(alpha.len(), d * d);
        let tol = 1e-7;
        for l1 in 1..=d {
            for l2 in 1..=d {
                let v = alpha[(l1 - 1) * d + (l2 - 1)];
                let lo = alpha_lower_bound(d, k, l1, l2);
                let hi = alpha_upper_bound(k, l1, l2);
                if v < lo - tol || v > hi + tol {
                    return Err(Error::AlignmentOutOfBounds { l1, l2, value: v, lo, hi });
                }
                if l1 > 1 && v < alpha[(l1 - 2) * d + (l2 - 1)] - tol {
                    return Err(Error::AlignmentOutOfBounds {
                        l1,
                        l2,
                        value: v,
                        lo: alpha[(l1 - 2) * d + (l2 - 1)],
                        hi,
                    });
                }
                if l2 > 1 && v < alpha[(l1 - 1) * d + (l2 - 2)] - tol {
                    return Err(Error::AlignmentOutOfBounds {
                        l1,
                        l2,
                        value: v,
                        lo: alpha[(l1 - 1) * d + (l2 - 2)],
                        hi,
                    });
                }
            }
        }
        Ok(AlignmentTable { d, k, alpha })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// alpha^(k)_(l1,l2), 1-based indices.
    pub fn get(&self, l1: usize, l2: usize) -> f64 {
        self.alpha[(l1 - 1) * self.d + (l2 - 1)]
    }

    pub fn is_integral(&self, tol: f64) -> bool {
        self.alpha.iter().all(|a| (a - a.round()).abs() <= tol)
    }
}

/// One alignment constraint row: (1_[l1] (+) 1_[l2])^T x <= rhs.
#[derive(Clone, Copy, Debug)]
pub struct AlignmentRow {
    pub l1: usize,
    pub l2: usize,
    pub rhs: f64,
}

/// Objective plus constraint rows over 2d box-bounded variables. The box
/// 0 <= x <= 1 and the two half-sum equalities are implicit.
#[derive(Clone, Debug)]
pub struct LinearProgramInstance {
    pub d: usize,
    pub k: usize,
    /// lambda(A1) (+) lambda(A2); both halves in decreasing index order.
    pub objective: Vec<f64>,
    pub rows: Vec<AlignmentRow>,
}

impl LinearProgramInstance {
    pub fn with_objective(mut self, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), 2 * self.d);
        self.objective = objective;
        self
    }
}

/// An LP optimum with its optimal point.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vec<f64>,
    pub vertex_is_integral: bool,
}

fn check_index(value: usize, max: usize) -> Result<()> {
    if value < 1 || value > max {
        return Err(Error::IndexOutOfRange { index: value, max });
    }
    Ok(())
}

/// Overlap vector of a k-dimensional subspace against two spectral
/// decompositions: tr(P_W Pi_i(A1)) for i in [d], then the same for A2.
pub fn overlap_vector(
    w: &Subspace,
    dec1: &SpectralDecomposition,
    dec2: &SpectralDecomposition,
) -> Result<Vec<f64>> {
    let d = dec1.dim();
    if dec2.dim() != d || w.projector.dim() != d {
        return Err(Error::DimensionMismatch {
            left: d,
            right: dec2.dim().max(w.projector.dim()),
        });
    }
    let p = w.projector.mat();
    let mut out = Vec::with_capacity(2 * d);
    for dec in [dec1, dec2] {
        for i in 0..d {
            let xi = dec.eigenvector(i);
            let pxi = p.mul_vec(&xi);
            let val: f64 = xi
                .iter()
                .zip(&pxi)
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            out.push(val);
        }
    }
    Ok(out)
}

/// Spectrum of P_{l1}(A1) + P_{l2}(A2), sorted decreasing. Shared by all k.
fn projector_sum_spectrum(
    dec1: &SpectralDecomposition,
    dec2: &SpectralDecomposition,
    l1: usize,
    l2: usize,
) -> Result<Vec<f64>> {
    let p1 = flag_projector(dec1, l1)?;
    let p2 = flag_projector(dec2, l2)?;
    let sum = p1.projector.add(&p2.projector);
    Ok(eigh(&sum)?.eigenvalues().to_vec())
}

/// alpha^(k)_(l1,l2) = s_k(P_{l1}(A1) + P_{l2}(A2)).
pub fn alignment_term(
    dec1: &SpectralDecomposition,
    dec2: &SpectralDecomposition,
    k: usize,
    l1: usize,
    l2: usize,
) -> Result<f64> {
    let d = dec1.dim();
    check_index(k, d)?;
    check_index(l1, d)?;
    check_index(l2, d)?;
    let spec = projector_sum_spectrum(dec1, dec2, l1, l2)?;
    s_k(&spec, k)
}

/// All d^2 alignment terms for a fixed k.
pub fn alignment_table(
    dec1: &SpectralDecomposition,
    dec2: &SpectralDecomposition,
    k: usize,
) -> Result<AlignmentTable> {
    let tables = alignment_tables_all_k(dec1, dec2)?;
    tables
        .into_iter()
        .nth(k - 1)
        .ok_or(Error::IndexOutOfRange { index: k, max: dec1.dim() })
}

/// Alignment tables for every k in [d], computed from one pass over the
/// d^2 projector-sum spectra.
pub fn alignment_tables_all_k(
    dec1: &SpectralDecomposition,
    dec2: &SpectralDecomposition,
) -> Result<Vec<AlignmentTable>> {
    let d = dec1.dim();
    if dec2.dim() != d {
        return Err(Error::DimensionMismatch { left: d, right: dec2.dim() });
    }
    // prefix[l1][l2][k-1] = s_k of the projector-sum spectrum
    let mut prefix = vec![vec![0.0; d]; d * d];
    for l1 in 1..=d {
        for l2 in 1..=d {
            let spec = projector_sum_spectrum(dec1, dec2, l1, l2)?;
            let mut acc = 0.0;
            for k in 1..=d {
                acc += spec[k - 1];
                prefix[(l1 - 1) * d + (l2 - 1)][k - 1] = acc;
            }
        }
    }
    (1..=d)
        .map(|k| {
            let alpha: Vec<f64> = (0..d * d).map(|idx| prefix[idx][k - 1]).collect();
            AlignmentTable::new(d, k, alpha)
        })
        .collect()
}

/// The basic-constraint polyhedron P0: box plus the two half-sum
/// equalities, no alignment rows. The objective starts at zero.
pub fn build_p0(k: usize, d: usize) -> Result<LinearProgramInstance> {
    check_index(k, d)?;
    Ok(LinearProgramInstance {
        d,
        k,
        objective: vec![0.0; 2 * d],
        rows: Vec::new(),
    })
}

/// P1: P0 plus the table's alignment rows. Rows whose rhs reaches the
/// Fan upper bound are redundant within P0 and are dropped.
pub fn build_p1(table: &AlignmentTable) -> Result<LinearProgramInstance> {
    let d = table.d;
    let k = table.k;
    let mut lp = build_p0(k, d)?;
    for l1 in 1..=d {
        for l2 in 1..=d {
            let rhs = table.get(l1, l2);
            if rhs >= alpha_upper_bound(k, l1, l2) - 1e-9 {
                continue;
            }
            lp.rows.push(AlignmentRow { l1, l2, rhs });
        }
    }
    Ok(lp)
}

/// Maximize the instance's objective over its polyhedron with the
/// bounded-variable simplex.
pub fn solve_lp(lp: &LinearProgramInstance) -> Result<LpSolution> {
    let d = lp.d;
    let n = 2 * d;
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(lp.rows.len() + 2);
    let mut half1 = vec![0.0; n];
    let mut half2 = vec![0.0; n];
    for i in 0..d {
        half1[i] = 1.0;
        half2[d + i] = 1.0;
    }
    rows.push((half1, Relation::Eq, lp.k as f64));
    rows.push((half2, Relation::Eq, lp.k as f64));
    for row in &lp.rows {
        let mut coeffs = vec![0.0; n];
        for c in coeffs.iter_mut().take(row.l1) {
            *c = 1.0;
        }
        for c in coeffs.iter_mut().skip(d).take(row.l2) {
            *c = 1.0;
        }
        rows.push((coeffs, Relation::Le, row.rhs));
    }
    let (value, point) = simplex::maximize(&Problem {
        objective: lp.objective.clone(),
        upper: vec![1.0; n],
        rows,
    })?;
    let vertex_is_integral = point
        .iter()
        .all(|&x| x.abs() <= 1e-7 || (x - 1.0).abs() <= 1e-7);
    Ok(LpSolution {
        value,
        point,
        vertex_is_integral,
    })
}

/// The LP bound u_k for a pair given by explicit spectral decompositions
/// (the flags enter through the alignment table).
pub fn u_k_with(
    dec1: &SpectralDecomposition,
    dec2: &SpectralDecomposition,
    k: usize,
) -> Result<LpSolution> {
    let table = alignment_table(dec1, dec2, k)?;
    let lp = build_p1(&table)?.with_objective(
        dec1.eigenvalues()
            .iter()
            .chain(dec2.eigenvalues())
            .copied()
            .collect(),
    );
    solve_lp(&lp)
}

/// u_k(A1, A2): the optimal value of the alignment-constrained LP; an
/// upper bound on s_k(A1 + A2).
pub fn u_k(a1: &HermitianMatrix, a2: &HermitianMatrix, k: usize) -> Result<LpSolution> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch {
            left: a1.dim(),
            right: a2.dim(),
        });
    }
    let dec1 = eigh(a1)?;
    let dec2 = eigh(a2)?;
    u_k_with(&dec1, &dec2, k)
}

/// u_k for every k in [d] with the projector-sum spectra computed once.
pub fn u_k_all(a1: &HermitianMatrix, a2: &HermitianMatrix) -> Result<Vec<LpSolution>> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch {
            left: a1.dim(),
            right: a2.dim(),
        });
    }
    let dec1 = eigh(a1)?;
    let dec2 = eigh(a2)?;
    let objective: Vec<f64> = dec1
        .eigenvalues()
        .iter()
        .chain(dec2.eigenvalues())
        .copied()
        .collect();
    alignment_tables_all_k(&dec1, &dec2)?
        .iter()
        .map(|table| {
            let lp = build_p1(table)?.with_objective(objective.clone());
            solve_lp(&lp)
        })
        .collect()
}

/// Closed-form staggered bound on s_k(A1 + A2) from one slack alignment
/// term alpha at the pair (l1, l2).
///
/// With m = ceil(alpha - 1e-9) - k, returns
/// s_m(lambda1) + s_m(lambda2) + s_{k-m}(mu) where mu interleaves the
/// staggered eigenvalue sums of the two summands.
pub fn staggered_bound(
    lam1: &[f64],
    lam2: &[f64],
    k: usize,
    l1: usize,
    l2: usize,
    alpha: f64,
) -> Result<f64> {
    let d = lam1.len();
    if lam2.len() != d {
        return Err(Error::LengthMismatch {
            left: d,
            right: lam2.len(),
        });
    }
    check_index(k, d)?;
    check_index(l1, d)?;
    check_index(l2, d)?;
    let m_signed = (alpha - 1e-9).ceil() as i64 - k as i64;
    let slack_cap = (l1.min(k) + l2.min(k)) as i64 - k as i64;
    if m_signed < 0 || m_signed >= slack_cap {
        return Err(Error::SlacknessAbsent { m: m_signed });
    }
    let m = m_signed as usize;
    if k - m + l1 > d {
        return Err(Error::StaggeredIndexOverflow { index: k - m + l1, d });
    }
    if k - m + l2 > d {
        return Err(Error::StaggeredIndexOverflow { index: k - m + l2, d });
    }
    let s1 = sorted(lam1);
    let s2 = sorted(lam2);
    // mu, the staggered-sum tuple (1-based indices)
    let mut mu = Vec::with_capacity(2 * (k - m));
    for i in (m + 1)..=k {
        mu.push(s1[i - 1] + s2[i - m + l2 - 1]);
    }
    for i in (m + 1)..=k {
        mu.push(s1[i - m + l1 - 1] + s2[i - 1]);
    }
    let head = if m > 0 {
        s_k(lam1, m)? + s_k(lam2, m)?
    } else {
        0.0
    };
    Ok(head + s_k(&mu, k - m)?)
}

fn sorted(x: &[f64]) -> Vec<f64> {
    crate::majorization::sorted_descending(x)
}

/// Exact optimum over 0/1 points: k-subset pairs satisfying every
/// alignment row. Valid whenever the rhs are integral (total
/// unimodularity makes this agree with the LP optimum). Exponential in d;
/// intended for d <= 8.
pub fn integral_solve(lp: &LinearProgramInstance) -> Result<LpSolution> {
    let d = lp.d;
    let k = lp.k;
    for row in &lp.rows {
        if (row.rhs - row.rhs.round()).abs() > 1e-9 {
            return Err(Error::NonIntegralRhs { value: row.rhs });
        }
    }
    let rows: Vec<(u32, u32, i64)> = lp
        .rows
        .iter()
        .map(|r| {
            (
                (1u32 << r.l1) - 1,
                (1u32 << r.l2) - 1,
                r.rhs.round() as i64,
            )
        })
        .collect();
    let subsets = k_subsets(d, k);
    let mut best: Option<(f64, u32, u32)> = None;
    for &s1 in &subsets {
        let v1: f64 = (0..d)
            .filter(|i| s1 >> i & 1 == 1)
            .map(|i| lp.objective[i])
            .sum();
        for &s2 in &subsets {
            let ok = rows.iter().all(|&(m1, m2, rhs)| {
                ((s1 & m1).count_ones() + (s2 & m2).count_ones()) as i64 <= rhs
            });
            if !ok {
                continue;
            }
            let v2: f64 = (0..d)
                .filter(|i| s2 >> i & 1 == 1)
                .map(|i| lp.objective[d + i])
                .sum();
            let v = v1 + v2;
            if best.map_or(true, |(b, _, _)| v > b) {
                best = Some((v, s1, s2));
            }
        }
    }
    let (value, s1, s2) = best.ok_or(Error::Infeasible)?;
    let mut point = vec![0.0; 2 * d];
    for i in 0..d {
        if s1 >> i & 1 == 1 {
            point[i] = 1.0;
        }
        if s2 >> i & 1 == 1 {
            point[d + i] = 1.0;
        }
    }
    Ok(LpSolution {
        value,
        point,
        vertex_is_integral: true,
    })
}

/// All k-subsets of [d] as bitmasks, ascending.
pub fn k_subsets(d: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let full = 1u32 << d;
    for mask in 0..full {
        if mask.count_ones() as usize == k {
            out.push(mask);
        }
    }
    out
}
