//! Tensor products of PSD operators: the product order on index pairs,
//! downset chains, alignment-term bounds, the subspace-dimension
//! inequality, the separable majorization check, the two-letter spin
//! alignment check, and the two counterexamples showing where the
//! hypotheses are necessary.

use crate::error::{Error, Result};
use crate::majorization::{majorizes, operator_majorizes, s_k, MajorizationVerdict};
use crate::mat::{kron_vec, Mat};
use crate::spectral::{
    align_map, eigh, tensor_product, von_neumann_entropy, HermitianMatrix, SpectralDecomposition,
};
use num_complex::Complex64;
use std::collections::HashSet;

/// A maximal chain of downward closed sets in the product order on
/// [dB] x [dC], encoding a valid weakly decreasing order of the
/// eigenvalue products. Index pairs are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownsetChain {
    db: usize,
    dc: usize,
    order: Vec<(usize, usize)>,
}

impl DownsetChain {
    pub fn db(&self) -> usize {
        self.db
    }

    pub fn dc(&self) -> usize {
        self.dc
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    /// The l-th downward closed set: the first l pairs.
    pub fn upsilon(&self, l: usize) -> &[(usize, usize)] {
        &self.order[..l]
    }
}

/// Is every pair's lower cone contained in the set?
pub fn is_downward_closed(set: &[(usize, usize)], _db: usize, _dc: usize) -> bool {
    let s: HashSet<(usize, usize)> = set.iter().copied().collect();
    set.iter().all(|&(i, j)| {
        (1..=i).all(|ip| (1..=j).all(|jp| s.contains(&(ip, jp))))
    })
}

/// Build the chain for eigenvalue vectors of two PSD factors. Pairs are
/// sorted by (-product, i, j); a lexicographically smaller pair is also
/// smaller in the product order, so every prefix is downward closed —
/// asserted anyway.
pub fn downset_chain(lam_b: &[f64], lam_c: &[f64]) -> Result<DownsetChain> {
    for &v in lam_b.iter().chain(lam_c.iter()) {
        if v < -1e-9 {
            return Err(Error::NegativeEigenvalue { value: v });
        }
    }
    for lam in [lam_b, lam_c] {
        for w in lam.windows(2) {
            if w[1] > w[0] + 1e-12 {
                return Err(Error::NotAState {
                    reason: "eigenvalue vector not sorted decreasing".into(),
                });
            }
        }
    }
    let clamp = |v: f64| if v < 0.0 { 0.0 } else { v };
    let (db, dc) = (lam_b.len(), lam_c.len());
    let mut order: Vec<(usize, usize)> = (1..=db)
        .flat_map(|i| (1..=dc).map(move |j| (i, j)))
        .collect();
    order.sort_by(|&(i1, j1), &(i2, j2)| {
        let p1 = clamp(lam_b[i1 - 1]) * clamp(lam_c[j1 - 1]);
        let p2 = clamp(lam_b[i2 - 1]) * clamp(lam_c[j2 - 1]);
        p2.partial_cmp(&p1).unwrap().then((i1, j1).cmp(&(i2, j2)))
    });
    for l in 1..=order.len() {
        assert!(
            is_downward_closed(&order[..l], db, dc),
            "chain prefix {l} not downward closed"
        );
    }
    Ok(DownsetChain { db, dc, order })
}

/// Spectral decompositions of both factors plus the chain ordering the
/// product eigenvalues; joint eigenvectors are formed on demand.
pub struct ProductDecomposition {
    pub dec_b: SpectralDecomposition,
    pub dec_c: SpectralDecomposition,
    pub chain: DownsetChain,
}

impl ProductDecomposition {
    /// Both factors must be PSD up to the -1e-9 clamp.
    pub fn new(b: &HermitianMatrix, c: &HermitianMatrix) -> Result<Self> {
        let dec_b = eigh(b)?;
        let dec_c = eigh(c)?;
        let chain = downset_chain(dec_b.eigenvalues(), dec_c.eigenvalues())?;
        Ok(ProductDecomposition { dec_b, dec_c, chain })
    }

    /// xi_i(B) (x) xi_j(C), indices 1-based.
    pub fn joint_vector(&self, i: usize, j: usize) -> Vec<Complex64> {
        kron_vec(&self.dec_b.eigenvector(i - 1), &self.dec_c.eigenvector(j - 1))
    }

    /// Eigenvalue products along the chain, weakly decreasing.
    pub fn product_spectrum(&self) -> Vec<f64> {
        let lb = self.dec_b.eigenvalues();
        let lc = self.dec_c.eigenvalues();
        self.chain
            .order()
            .iter()
            .map(|&(i, j)| lb[i - 1] * lc[j - 1])
            .collect()
    }
}

fn closure(set: &[(usize, usize)], db: usize, dc: usize, down: bool) -> HashSet<(usize, usize)> {
    let mut out = HashSet::new();
    for i in 1..=db {
        for j in 1..=dc {
            let inside = set.iter().any(|&(x, y)| {
                if down {
                    i <= x && j <= y
                } else {
                    i >= x && j >= y
                }
            });
            if inside {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Structural facts about the difference of two downward closed sets,
/// used in the subspace-dimension argument: the difference is
/// interval-like, equals the meet of its two closures, and its
/// coordinate product is covered by the union of the closures.
pub fn delta_properties(
    upsilon: &[(usize, usize)],
    upsilon_prime: &[(usize, usize)],
    db: usize,
    dc: usize,
) -> Result<bool> {
    if !is_downward_closed(upsilon, db, dc) || !is_downward_closed(upsilon_prime, db, dc) {
        return Err(Error::NotDownwardClosed);
    }
    let prime: HashSet<_> = upsilon_prime.iter().copied().collect();
    let delta: Vec<(usize, usize)> = upsilon
        .iter()
        .copied()
        .filter(|p| !prime.contains(p))
        .collect();
    let dset: HashSet<_> = delta.iter().copied().collect();
    // interval-like
    for &(x1, y1) in &delta {
        for &(x2, y2) in &delta {
            for i in x1..=x2 {
                for j in y1..=y2 {
                    if !dset.contains(&(i, j)) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    let down = closure(&delta, db, dc, true);
    let up = closure(&delta, db, dc, false);
    if down.intersection(&up).copied().collect::<HashSet<_>>() != dset {
        return Ok(false);
    }
    let d1: HashSet<usize> = delta.iter().map(|&(i, _)| i).collect();
    let d2: HashSet<usize> = delta.iter().map(|&(_, j)| j).collect();
    for &i in &d1 {
        for &j in &d2 {
            if !down.contains(&(i, j)) && !up.contains(&(i, j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn span_projector(
    basis_b: &Mat,
    basis_c: &Mat,
    set: &[(usize, usize)],
) -> Mat {
    let d = basis_b.rows() * basis_c.rows();
    let mut p = Mat::zeros(d, d);
    for &(i, j) in set {
        let v = kron_vec(&basis_b.col(i - 1), &basis_c.col(j - 1));
        p = p.add(&Mat::outer(&v));
    }
    p
}

/// Dimension count behind the orthogonality proposition: lhs_dim is
/// dim(F_Y n G_Y'^perp), computed by counting eigenvalues of
/// P_F (I - P_G) P_F above 1 - 1e-7; rhs is |Y \ Y'|. The contract is
/// lhs_dim >= rhs for downward closed Y, Y'.
pub fn subspace_dim_check(
    basis_f_b: &Mat,
    basis_g_b: &Mat,
    basis_f_c: &Mat,
    basis_g_c: &Mat,
    upsilon: &[(usize, usize)],
    upsilon_prime: &[(usize, usize)],
) -> Result<(usize, usize)> {
    let db = basis_f_b.rows();
    let dc = basis_f_c.rows();
    if !is_downward_closed(upsilon, db, dc) || !is_downward_closed(upsilon_prime, db, dc) {
        return Err(Error::NotDownwardClosed);
    }
    let pf = span_projector(basis_f_b, basis_f_c, upsilon);
    let pg = span_projector(basis_g_b, basis_g_c, upsilon_prime);
    let d = db * dc;
    let mut perp = Mat::identity(d).sub(&pg);
    perp = pf.mul(&perp).mul(&pf);
    let dec = eigh(&HermitianMatrix::new(perp)?)?;
    let lhs = dec.eigenvalues().iter().filter(|&&x| x >= 1.0 - 1e-7).count();
    let prime: HashSet<_> = upsilon_prime.iter().copied().collect();
    let rhs = upsilon.iter().filter(|p| !prime.contains(p)).count();
    Ok((lhs, rhs))
}

/// Aligned-pair value min(k, |Y1 n Y2|) + min(k, |Y1 u Y2|); dominates
/// the alignment term of any actual tensor pair with these chains.
pub fn tensor_alignment_upper(
    ch1: &DownsetChain,
    ch2: &DownsetChain,
    k: usize,
    l1: usize,
    l2: usize,
) -> Result<usize> {
    if ch1.db != ch2.db || ch1.dc != ch2.dc {
        return Err(Error::DimensionMismatch {
            left: ch1.len(),
            right: ch2.len(),
        });
    }
    let d = ch1.len();
    for v in [k, l1, l2] {
        if v < 1 || v > d {
            return Err(Error::IndexOutOfRange { index: v, max: d });
        }
    }
    let a: HashSet<_> = ch1.upsilon(l1).iter().copied().collect();
    let b: HashSet<_> = ch2.upsilon(l2).iter().copied().collect();
    let inter = a.intersection(&b).count();
    let union = a.union(&b).count();
    Ok(k.min(inter) + k.min(union))
}

fn check_psd(h: &HermitianMatrix) -> Result<()> {
    let dec = eigh(h)?;
    let min = dec.eigenvalues().last().copied().unwrap_or(0.0);
    if min < -1e-9 {
        return Err(Error::NotPositiveSemidefinite { value: min });
    }
    Ok(())
}

/// Verdict of "aligned sum majorizes the original sum" for two tensor
/// products, with no sign restriction on the factors. Used directly by
/// the indefinite counterexample.
pub fn separable_fan_verdict(
    b1: &HermitianMatrix,
    c1: &HermitianMatrix,
    b2: &HermitianMatrix,
    c2: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationVerdict> {
    let aligned = tensor_product(&align_map(b1)?, &align_map(c1)?)
        .add(&tensor_product(&align_map(b2)?, &align_map(c2)?));
    let original = tensor_product(b1, c1).add(&tensor_product(b2, c2));
    operator_majorizes(&aligned, &original, tol)
}

/// The separable majorization check: for PSD factors the aligned sum
/// always majorizes the original sum. Rejects factors with an eigenvalue
/// below -1e-9.
pub fn check_separable_fan(
    b1: &HermitianMatrix,
    c1: &HermitianMatrix,
    b2: &HermitianMatrix,
    c2: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationVerdict> {
    for h in [b1, c1, b2, c2] {
        check_psd(h)?;
    }
    separable_fan_verdict(b1, c1, b2, c2, tol)
}

/// Fixed indefinite instance B1 = I, B2 = -I, C1 = q1 q1*, C2 = q2 q2*:
/// the original sum has spectrum (1,1,-1,-1), the aligned sum is null,
/// and majorization fails at k = 1. Returns (sum spectrum, aligned
/// spectrum, verdict).
pub fn indefinite_counterexample() -> (Vec<f64>, Vec<f64>, MajorizationVerdict) {
    let b1 = HermitianMatrix::identity(2);
    let b2 = b1.scale(-1.0);
    let c1 = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
    let c2 = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
    let original = tensor_product(&b1, &c1).add(&tensor_product(&b2, &c2));
    let aligned = tensor_product(&align_map(&b1).unwrap(), &align_map(&c1).unwrap())
        .add(&tensor_product(&align_map(&b2).unwrap(), &align_map(&c2).unwrap()));
    let spec_orig = eigh(&original).unwrap().eigenvalues().to_vec();
    let spec_aligned = eigh(&aligned).unwrap().eigenvalues().to_vec();
    let verdict = majorizes(&spec_aligned, &spec_orig, 0.0).unwrap();
    (spec_orig, spec_aligned, verdict)
}

/// Numbers from the one-sided alignment counterexample: aligning only
/// the first factors can strictly lower s_2.
#[derive(Clone, Debug)]
pub struct OneSidedReport {
    pub s2_original: f64,
    pub s2_aligned: f64,
    /// s2_aligned - s2_original; strictly below -0.05.
    pub difference: f64,
}

/// The fixed instance B1 = C1 = ee* with e = (q1+q2)/sqrt(2),
/// B2 = diag(2,1), C2 = q1 q1*: aligning only the B factors produces a
/// sum whose s_2 drops by more than 0.05.
pub fn check_one_sided_counterexample() -> OneSidedReport {
    let h = Complex64::new(0.5, 0.0);
    let ee = HermitianMatrix::new(Mat::from_fn(2, 2, |_, _| h)).unwrap();
    let b2 = HermitianMatrix::from_real_diag(&[2.0, 1.0]);
    let c2 = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
    let original = tensor_product(&ee, &ee).add(&tensor_product(&b2, &c2));
    let aligned = tensor_product(&align_map(&ee).unwrap(), &ee)
        .add(&tensor_product(&align_map(&b2).unwrap(), &c2));
    let s2_original = s_k(eigh(&original).unwrap().eigenvalues(), 2).unwrap();
    let s2_aligned = s_k(eigh(&aligned).unwrap().eigenvalues(), 2).unwrap();
    OneSidedReport {
        s2_original,
        s2_aligned,
        difference: s2_aligned - s2_original,
    }
}

/// One-sided alignment verdict for arbitrary 2x2-factor instances:
/// does B1d (x) C1 + B2d (x) C2 majorize B1 (x) C1 + B2 (x) C2?
pub fn one_sided_verdict(
    b1: &HermitianMatrix,
    c1: &HermitianMatrix,
    b2: &HermitianMatrix,
    c2: &HermitianMatrix,
    tol: f64,
) -> Result<MajorizationVerdict> {
    let aligned = tensor_product(&align_map(b1)?, c1).add(&tensor_product(&align_map(b2)?, c2));
    let original = tensor_product(b1, c1).add(&tensor_product(b2, c2));
    operator_majorizes(&aligned, &original, tol)
}

/// Outcome of the two-letter spin alignment check.
#[derive(Clone, Debug)]
pub struct SpinAlignReport {
    /// Verdict that the aligned mixture majorizes the original one.
    pub verdict: MajorizationVerdict,
    pub entropy_lhs: f64,
    pub entropy_rhs: f64,
    /// H(LHS) - H(RHS); nonnegative up to tolerance.
    pub entropy_gap: f64,
}

fn check_state(h: &HermitianMatrix, what: &str) -> Result<SpectralDecomposition> {
    let dec = eigh(h)?;
    let min = dec.eigenvalues().last().copied().unwrap_or(0.0);
    if min < -1e-9 {
        return Err(Error::NotAState {
            reason: format!("{what} has eigenvalue {min}"),
        });
    }
    if (h.trace() - 1.0).abs() > 1e-8 {
        return Err(Error::NotAState {
            reason: format!("{what} has trace {}", h.trace()),
        });
    }
    Ok(dec)
}

fn check_pure(h: &HermitianMatrix, what: &str) -> Result<()> {
    let dec = check_state(h, what)?;
    if dec.eigenvalues().len() > 1 && dec.eigenvalues()[1].abs() > 1e-8 {
        return Err(Error::NotAState {
            reason: format!("{what} is not rank-1"),
        });
    }
    Ok(())
}

/// The two-letter spin alignment check. The mixture
/// p0 M(x)M + p1 psi1(x)M + p2 M(x)psi2 + p12 psi12 is compared against
/// the same mixture with every pure summand replaced by tensor powers of
/// the top-eigenvector state of M; the aligned mixture majorizes and has
/// no more entropy, up to tol.
pub fn spin_alignment_2(
    m: &HermitianMatrix,
    p: &[f64],
    psi1: &HermitianMatrix,
    psi2: &HermitianMatrix,
    psi12: &HermitianMatrix,
    tol: f64,
) -> Result<SpinAlignReport> {
    let d = m.dim();
    if p.len() != 4 {
        return Err(Error::InvalidProbability {
            reason: format!("expected 4 weights, got {}", p.len()),
        });
    }
    if p.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidProbability {
            reason: "negative weight".into(),
        });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbability {
            reason: format!("weights sum to {total}"),
        });
    }
    let dec_m = check_state(m, "M")?;
    check_pure(psi1, "psi1")?;
    check_pure(psi2, "psi2")?;
    check_pure(psi12, "psi12")?;
    if psi1.dim() != d || psi2.dim() != d || psi12.dim() != d * d {
        return Err(Error::DimensionMismatch {
            left: d,
            right: psi12.dim(),
        });
    }
    let top = HermitianMatrix::pure_state(&dec_m.eigenvector(0));
    let mix = |a: &HermitianMatrix, b: &HermitianMatrix, c: &HermitianMatrix| {
        tensor_product(m, m)
            .scale(p[0])
            .add(&tensor_product(a, m).scale(p[1]))
            .add(&tensor_product(m, b).scale(p[2]))
            .add(&c.scale(p[3]))
    };
    let lhs = mix(psi1, psi2, psi12);
    let rhs = mix(&top, &top, &tensor_product(&top, &top));
    let verdict = operator_majorizes(&rhs, &lhs, tol)?;
    let entropy_lhs = von_neumann_entropy(&lhs)?;
    let entropy_rhs = von_neumann_entropy(&rhs)?;
    Ok(SpinAlignReport {
        verdict,
        entropy_lhs,
        entropy_rhs,
        entropy_gap: entropy_lhs - entropy_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_psd, random_pure, random_probability, CounterRng};

    #[test]
    fn chain_example_3_1_by_3_2() {
        let ch = downset_chain(&[3.0, 1.0], &[3.0, 2.0]).unwrap();
        assert_eq!(ch.order(), &[(1, 1), (1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn chain_all_ties_is_lexicographic() {
        let ch = downset_chain(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(ch.order(), &[(1, 1), (1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn chain_rejects_bad_input() {
        assert!(matches!(
            downset_chain(&[1.0, -0.5], &[1.0]),
            Err(Error::NegativeEigenvalue { .. })
        ));
        assert!(downset_chain(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn chain_prefixes_downward_closed_random() {
        let mut rng = CounterRng::new(17);
        for _ in 0..20 {
            let mut lb: Vec<f64> = (0..4).map(|_| rng.next_f64()).collect();
            let mut lc: Vec<f64> = (0..4).map(|_| rng.next_f64()).collect();
            lb.sort_by(|a, b| b.partial_cmp(a).unwrap());
            lc.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let ch = downset_chain(&lb, &lc).unwrap();
            for l in 1..=16 {
                assert!(is_downward_closed(ch.upsilon(l), 4, 4));
            }
            // products weakly decreasing along the order
            let prods: Vec<f64> = ch
                .order()
                .iter()
                .map(|&(i, j)| lb[i - 1] * lc[j - 1])
                .collect();
            for w in prods.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
        }
    }

    #[test]
    fn product_spectrum_matches_eigensolver() {
        let mut rng = CounterRng::new(23);
        let b = random_psd(3, &mut rng);
        let c = random_psd(2, &mut rng);
        let pd = ProductDecomposition::new(&b, &c).unwrap();
        let direct = eigh(&tensor_product(&b, &c)).unwrap();
        let prods = pd.product_spectrum();
        for (a, b) in prods.iter().zip(direct.eigenvalues()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn delta_properties_hold_for_downset_pairs() {
        let mut rng = CounterRng::new(31);
        for _ in 0..40 {
            let (db, dc) = (3, 3);
            let mut lb: Vec<f64> = (0..db).map(|_| rng.next_f64()).collect();
            let mut lc: Vec<f64> = (0..dc).map(|_| rng.next_f64()).collect();
            lb.sort_by(|a, b| b.partial_cmp(a).unwrap());
            lc.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let ch = downset_chain(&lb, &lc).unwrap();
            let l1 = 1 + rng.next_below(db * dc);
            let l2 = 1 + rng.next_below(db * dc);
            assert!(delta_properties(ch.upsilon(l1), ch.upsilon(l2), db, dc).unwrap());
        }
        assert!(matches!(
            delta_properties(&[(2, 2)], &[(1, 1)], 2, 2),
            Err(Error::NotDownwardClosed)
        ));
    }

    #[test]
    fn dim_check_identical_bases() {
        use crate::random::haar_unitary;
        let mut rng = CounterRng::new(5);
        let ub = haar_unitary(2, &mut rng);
        let uc = haar_unitary(2, &mut rng);
        let ups = [(1, 1), (1, 2)];
        let full = [(1, 1), (1, 2), (2, 1), (2, 2)];
        let (lhs, rhs) = subspace_dim_check(&ub, &ub, &uc, &uc, &ups, &full).unwrap();
        assert_eq!(rhs, 0);
        assert_eq!(lhs, 0);
        let (lhs, rhs) = subspace_dim_check(&ub, &ub, &uc, &uc, &full, &ups).unwrap();
        assert_eq!(rhs, 2);
        assert!(lhs >= 2);
    }

    #[test]
    fn dim_check_figure_configuration() {
        // Delta = {(1,3),(3,1)} inside [3]x[3]: Y = down-closure of Delta,
        // Y' = Y minus Delta; the bound says lhs >= 2 for any Haar bases
        use crate::random::haar_unitary;
        let ups = [(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)];
        let ups_prime = [(1, 1), (1, 2), (2, 1)];
        let mut rng = CounterRng::new(8);
        for _ in 0..5 {
            let fb = haar_unitary(3, &mut rng);
            let gb = haar_unitary(3, &mut rng);
            let fc = haar_unitary(3, &mut rng);
            let gc = haar_unitary(3, &mut rng);
            let (lhs, rhs) = subspace_dim_check(&fb, &gb, &fc, &gc, &ups, &ups_prime).unwrap();
            assert_eq!(rhs, 2);
            assert!(lhs >= 2);
        }
    }

    #[test]
    fn alignment_upper_matches_aligned_term() {
        use crate::alignment_lp::alignment_term;
        let mut rng = CounterRng::new(13);
        for _ in 0..5 {
            let b = random_psd(2, &mut rng);
            let c = random_psd(2, &mut rng);
            let pd = ProductDecomposition::new(&b, &c).unwrap();
            let ch = pd.chain.clone();
            // the upper bound is the alignment term of the aligned pair
            // with itself, computed spectrally on diag of the products
            let aligned = tensor_product(&align_map(&b).unwrap(), &align_map(&c).unwrap());
            let dec = eigh(&aligned).unwrap();
            let d = 4;
            for k in 1..=d {
                for l1 in 1..=d {
                    for l2 in 1..=d {
                        let upper = tensor_alignment_upper(&ch, &ch, k, l1, l2).unwrap() as f64;
                        let spectral = alignment_term(&dec, &dec, k, l1, l2).unwrap();
                        assert!((upper - spectral).abs() < 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn alignment_upper_dominates_measured_alpha() {
        use crate::alignment_lp::alignment_term;
        let mut rng = CounterRng::new(29);
        for _ in 0..10 {
            let b1 = random_psd(2, &mut rng);
            let c1 = random_psd(2, &mut rng);
            let b2 = random_psd(2, &mut rng);
            let c2 = random_psd(2, &mut rng);
            let pd1 = ProductDecomposition::new(&b1, &c1).unwrap();
            let pd2 = ProductDecomposition::new(&b2, &c2).unwrap();
            let dec1 = eigh(&tensor_product(&b1, &c1)).unwrap();
            let dec2 = eigh(&tensor_product(&b2, &c2)).unwrap();
            for k in 1..=4 {
                for l1 in 1..=4 {
                    for l2 in 1..=4 {
                        let upper =
                            tensor_alignment_upper(&pd1.chain, &pd2.chain, k, l1, l2).unwrap();
                        let alpha = alignment_term(&dec1, &dec2, k, l1, l2).unwrap();
                        assert!(alpha <= upper as f64 + 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn separable_fan_diagonal_sorted_is_equality() {
        let b = HermitianMatrix::from_real_diag(&[2.0, 1.0]);
        let c = HermitianMatrix::from_real_diag(&[3.0, 0.5]);
        let v = check_separable_fan(&b, &c, &b, &c, 0.0).unwrap();
        assert!(v.holds);
        assert!(v.gaps.iter().all(|g| g.abs() < 1e-9));
    }

    #[test]
    fn separable_fan_random_psd() {
        let mut rng = CounterRng::new(99);
        for _ in 0..25 {
            let b1 = random_psd(3, &mut rng);
            let c1 = random_psd(2, &mut rng);
            let b2 = random_psd(3, &mut rng);
            let c2 = random_psd(2, &mut rng);
            let v = check_separable_fan(&b1, &c1, &b2, &c2, 1e-7).unwrap();
            assert!(v.holds, "violation: {:?}", v.first_violation);
        }
    }

    #[test]
    fn separable_fan_rejects_indefinite() {
        let b1 = HermitianMatrix::identity(2);
        let b2 = b1.scale(-1.0);
        let c = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(matches!(
            check_separable_fan(&b1, &c, &b2, &c, 1e-7),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn indefinite_example_numbers() {
        let (orig, aligned, verdict) = indefinite_counterexample();
        for (a, b) in orig.iter().zip([1.0, 1.0, -1.0, -1.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(aligned.iter().all(|x| x.abs() < 1e-10));
        assert!(!verdict.holds);
        assert_eq!(verdict.first_violation, Some(1));
    }

    #[test]
    fn one_sided_example_gap() {
        let r = check_one_sided_counterexample();
        assert!(r.difference < -0.05, "difference = {}", r.difference);
        // aligned side is computable by hand: blocks give (3+sqrt 5)/2 and 1
        assert!((r.s2_aligned - ((3.0 + 5f64.sqrt()) / 2.0 + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn one_sided_holds_for_rank_one_b() {
        let mut rng = CounterRng::new(41);
        for _ in 0..10 {
            let b1 = random_pure(2, &mut rng);
            let b2 = random_pure(2, &mut rng);
            let c1 = random_psd(2, &mut rng);
            let c2 = random_psd(2, &mut rng);
            let v = one_sided_verdict(&b1, &c1, &b2, &c2, 1e-7).unwrap();
            assert!(v.holds);
        }
    }

    #[test]
    fn one_sided_holds_with_identity_b2() {
        let r = check_one_sided_counterexample();
        assert!(r.difference < 0.0);
        let h = Complex64::new(0.5, 0.0);
        let ee = HermitianMatrix::new(Mat::from_fn(2, 2, |_, _| h)).unwrap();
        let b2 = HermitianMatrix::identity(2);
        let c2 = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let v = one_sided_verdict(&ee, &ee, &b2, &c2, 1e-7).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn spin_align_trivial_when_already_aligned() {
        let m = HermitianMatrix::from_real_diag(&[0.7, 0.3]);
        let top = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let top2 = tensor_product(&top, &top);
        let p = [0.25, 0.25, 0.25, 0.25];
        let r = spin_alignment_2(&m, &p, &top, &top, &top2, 0.0).unwrap();
        assert!(r.verdict.holds);
        assert!(r.verdict.gaps.iter().all(|g| g.abs() < 1e-9));
        assert!(r.entropy_gap.abs() < 1e-9);
    }

    #[test]
    fn spin_align_concentrated_on_both_letters() {
        let mut rng = CounterRng::new(55);
        let m = random_psd(3, &mut rng);
        let psi1 = random_pure(3, &mut rng);
        let psi2 = random_pure(3, &mut rng);
        let psi12 = random_pure(9, &mut rng);
        let p = [0.0, 0.0, 0.0, 1.0];
        let r = spin_alignment_2(&m, &p, &psi1, &psi2, &psi12, 1e-7).unwrap();
        assert!(r.verdict.holds);
    }

    #[test]
    fn spin_align_random_instances() {
        let mut rng = CounterRng::new(77);
        for _ in 0..15 {
            let d = 2 + rng.next_below(2);
            let m = random_psd(d, &mut rng);
            let psi1 = random_pure(d, &mut rng);
            let psi2 = random_pure(d, &mut rng);
            let psi12 = random_pure(d * d, &mut rng);
            let p = random_probability(4, &mut rng);
            let r = spin_alignment_2(&m, &p, &psi1, &psi2, &psi12, 1e-7).unwrap();
            assert!(r.verdict.holds, "majorization failed");
            assert!(r.entropy_gap >= -1e-7, "entropy gap {}", r.entropy_gap);
        }
    }

    #[test]
    fn spin_align_input_validation() {
        let m = HermitianMatrix::from_real_diag(&[0.5, 0.5]);
        let pure = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let pure4 = HermitianMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]);
        let bad_p = [0.5, 0.5, 0.5, -0.5];
        assert!(spin_alignment_2(&m, &bad_p, &pure, &pure, &pure4, 0.0).is_err());
        assert!(spin_alignment_2(&m, &[0.5, 0.5], &pure, &pure, &pure4, 0.0).is_err());
        let mixed = HermitianMatrix::from_real_diag(&[0.5, 0.5]);
        assert!(matches!(
            spin_alignment_2(&m, &[0.25; 4], &mixed, &pure, &pure4, 0.0),
            Err(Error::NotAState { .. })
        ));
    }
}
