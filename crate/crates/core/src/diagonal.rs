//! The simultaneously-diagonal case: Omega-chains, explicit alignment
//! terms, the combinatorial optimum over feasible subset pairs, and the
//! two-step symmetrization that proves the LP bound tight.

use crate::error::{Error, Result};
use crate::majorization::s_k;

/// Nested index chains selecting the largest-l coordinates of two
/// diagonal summands, together with the induced total orders.
///
/// Indices are 0-based; ranks (positions in the induced orders) are
/// 1-based to match the l in Omega_l.
#[derive(Clone, Debug)]
pub struct OmegaChains {
    d: usize,
    lam1: Vec<f64>,
    lam2: Vec<f64>,
    /// rank1[x] = minimal l with x in Omega^1_l
    rank1: Vec<usize>,
    rank2: Vec<usize>,
    /// by_rank1[l-1] = the index of rank l
    by_rank1: Vec<usize>,
    by_rank2: Vec<usize>,
    /// omega1_mask[l-1] = bitmask of Omega^1_l
    omega1_mask: Vec<u32>,
    omega2_mask: Vec<u32>,
}

fn rank_order(lam: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..lam.len()).collect();
    idx.sort_by(|&i, &j| lam[j].partial_cmp(&lam[i]).unwrap().then(i.cmp(&j)));
    idx
}

impl OmegaChains {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lam1(&self) -> &[f64] {
        &self.lam1
    }

    pub fn lam2(&self) -> &[f64] {
        &self.lam2
    }

    /// Omega^1_l as a sorted list of 0-based indices.
    pub fn omega1(&self, l: usize) -> Vec<usize> {
        mask_to_set(self.omega1_mask[l - 1])
    }

    pub fn omega2(&self, l: usize) -> Vec<usize> {
        mask_to_set(self.omega2_mask[l - 1])
    }

    /// 1-based position of index x in the first induced total order.
    pub fn rank1(&self, x: usize) -> usize {
        self.rank1[x]
    }

    pub fn rank2(&self, x: usize) -> usize {
        self.rank2[x]
    }

    /// The index holding rank l in the first order.
    pub fn index_of_rank1(&self, l: usize) -> usize {
        self.by_rank1[l - 1]
    }

    pub fn index_of_rank2(&self, l: usize) -> usize {
        self.by_rank2[l - 1]
    }

    pub fn omega1_mask(&self, l: usize) -> u32 {
        self.omega1_mask[l - 1]
    }

    pub fn omega2_mask(&self, l: usize) -> u32 {
        self.omega2_mask[l - 1]
    }

    /// Objective value of a subset pair: sum of lam1 over s1 plus lam2
    /// over s2.
    pub fn objective(&self, pair: &SubsetPair) -> f64 {
        pair.s1.iter().map(|&i| self.lam1[i]).sum::<f64>()
            + pair.s2.iter().map(|&i| self.lam2[i]).sum::<f64>()
    }

    fn objective_masks(&self, s1: u32, s2: u32) -> f64 {
        let mut v = 0.0;
        for i in 0..self.d {
            if s1 >> i & 1 == 1 {
                v += self.lam1[i];
            }
            if s2 >> i & 1 == 1 {
                v += self.lam2[i];
            }
        }
        v
    }
}

fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn set_to_mask(set: &[usize]) -> u32 {
    set.iter().fold(0u32, |m, &i| m | 1 << i)
}

/// A pair of equal-size index sets (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetPair {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

impl SubsetPair {
    pub fn new(mut s1: Vec<usize>, mut s2: Vec<usize>) -> Result<Self> {
        if s1.len() != s2.len() {
            return Err(Error::LengthMismatch {
                left: s1.len(),
                right: s2.len(),
            });
        }
        s1.sort_unstable();
        s2.sort_unstable();
        Ok(SubsetPair { s1, s2 })
    }

    pub fn from_masks(s1: u32, s2: u32) -> Self {
        SubsetPair {
            s1: mask_to_set(s1),
            s2: mask_to_set(s2),
        }
    }

    pub fn k(&self) -> usize {
        self.s1.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.s1 == self.s2
    }

    fn masks(&self) -> (u32, u32) {
        (set_to_mask(&self.s1), set_to_mask(&self.s2))
    }
}

/// Build the two Omega-chains from the diagonals of D1 and D2. Ties among
/// equal values go to the smaller index, making the chains deterministic.
pub fn omega_chains(lam1: &[f64], lam2: &[f64]) -> Result<OmegaChains> {
    if lam1.len() != lam2.len() {
        return Err(Error::LengthMismatch {
            left: lam1.len(),
            right: lam2.len(),
        });
    }
    let d = lam1.len();
    assert!(d <= 32, "diagonal machinery is capped at d = 32");
    let by_rank1 = rank_order(lam1);
    let by_rank2 = rank_order(lam2);
    let mut rank1 = vec![0; d];
    let mut rank2 = vec![0; d];
    let mut omega1_mask = Vec::with_capacity(d);
    let mut omega2_mask = Vec::with_capacity(d);
    let (mut m1, mut m2) = (0u32, 0u32);
    for l in 1..=d {
        rank1[by_rank1[l - 1]] = l;
        rank2[by_rank2[l - 1]] = l;
        m1 |= 1 << by_rank1[l - 1];
        m2 |= 1 << by_rank2[l - 1];
        omega1_mask.push(m1);
        omega2_mask.push(m2);
    }
    Ok(OmegaChains {
        d,
        lam1: lam1.to_vec(),
        lam2: lam2.to_vec(),
        rank1,
        rank2,
        by_rank1,
        by_rank2,
        omega1_mask,
        omega2_mask,
    })
}

/// Explicit alignment term for simultaneously diagonal summands:
/// min(k, |Omega^1_{l1} n Omega^2_{l2}|) + min(k, |Omega^1_{l1} u Omega^2_{l2}|).
pub fn explicit_alignment(ch: &OmegaChains, k: usize, l1: usize, l2: usize) -> Result<usize> {
    let d = ch.d;
    for v in [k, l1, l2] {
        if v < 1 || v > d {
            return Err(Error::IndexOutOfRange { index: v, max: d });
        }
    }
    let a = ch.omega1_mask[l1 - 1];
    let b = ch.omega2_mask[l2 - 1];
    let inter = (a & b).count_ones() as usize;
    let union = (a | b).count_ones() as usize;
    Ok(k.min(inter) + k.min(union))
}

fn feasible_masks(ch: &OmegaChains, s1: u32, s2: u32, k: usize) -> bool {
    let d = ch.d;
    for l1 in 1..=d {
        let o1 = ch.omega1_mask[l1 - 1];
        let c1 = (s1 & o1).count_ones() as usize;
        for l2 in 1..=d {
            let o2 = ch.omega2_mask[l2 - 1];
            let c2 = (s2 & o2).count_ones() as usize;
            if c1 + c2 > (o1 & o2).count_ones() as usize + k {
                return false;
            }
        }
    }
    true
}

/// Does the pair satisfy all reduced combinatorial alignment constraints?
/// (The min(2k, ...) caps hold automatically for k-set pairs.)
pub fn is_feasible(pair: &SubsetPair, ch: &OmegaChains, k: usize) -> bool {
    if pair.k() != k {
        return false;
    }
    let (s1, s2) = pair.masks();
    feasible_masks(ch, s1, s2, k)
}

/// The two-step symmetrization: fix S1 and build the optimal second
/// argument S, then return the symmetric pair (S, S). Never decreases the
/// objective. Errors on infeasible input.
pub fn symmetrize(pair: &SubsetPair, ch: &OmegaChains, k: usize) -> Result<SubsetPair> {
    if !is_feasible(pair, ch, k) {
        return Err(Error::InfeasiblePair);
    }
    let d = ch.d;
    let (s1_mask, _) = pair.masks();

    // Elements of S1 by ascending >=^1 order; m[i] is 1-based.
    let mut xs = pair.s1.clone();
    xs.sort_by_key(|&x| ch.rank1[x]);
    let m: Vec<usize> = xs.iter().map(|&x| ch.rank1[x]).collect();

    // First step: for each i', the minimal r satisfying every constraint
    // i + i' <= k + |Omega^1_{m_i} n Omega^2_r|.
    let mut r = Vec::with_capacity(k);
    for ip in 1..=k {
        let found = (1..=d)
            .find(|&cand| {
                (1..=k).all(|i| {
                    let inter =
                        (ch.omega1_mask[m[i - 1] - 1] & ch.omega2_mask[cand - 1]).count_ones();
                    i + ip <= k + inter as usize
                })
            })
            .expect("r = d always satisfies the first-step constraints");
        r.push(found);
    }
    for w in r.windows(2) {
        assert!(w[0] < w[1], "first-step orders must strictly increase");
    }
    let ys: Vec<usize> = r.iter().map(|&ri| ch.by_rank2[ri - 1]).collect();
    let s_mask = set_to_mask(&ys);
    assert_eq!(s_mask.count_ones() as usize, k);

    // Intermediate pair (S1, S) is feasible and at least as good.
    assert!(feasible_masks(ch, s1_mask, s_mask, k));
    let obj_in = ch.objective(pair);
    let obj_mid = ch.objective_masks(s1_mask, s_mask);
    assert!(obj_mid >= obj_in - 1e-12 * (1.0 + obj_in.abs()));

    // Counting invariant behind the second step: at least i elements of S
    // precede x_i in the >=^1 order.
    for i in 1..=k {
        let inter = (s_mask & ch.omega1_mask[m[i - 1] - 1]).count_ones() as usize;
        assert!(inter >= i, "counting invariant fails at i = {i}");
    }

    // Inductive equality case: all witnesses are recorded, the minimal one
    // is gamma, and the witnessed intersection must already lie inside S.
    for ip in 2..=k {
        let ri = r[ip - 1];
        assert!(ri > 1);
        let witnesses: Vec<usize> = (1..=k)
            .filter(|&i| {
                let cur = (ch.omega1_mask[m[i - 1] - 1] & ch.omega2_mask[ri - 1]).count_ones()
                    as usize;
                let prev = (ch.omega1_mask[m[i - 1] - 1] & ch.omega2_mask[ri - 2]).count_ones()
                    as usize;
                i + ip == k + cur && cur > prev
            })
            .collect();
        assert!(!witnesses.is_empty(), "no equality witness for i' = {ip}");
        let gamma = witnesses[0];
        let inter = ch.omega1_mask[m[gamma - 1] - 1] & ch.omega2_mask[ri - 1];
        assert_eq!(inter & s_mask, inter, "witnessed intersection escapes S");
    }

    let obj_out = ch.objective_masks(s_mask, s_mask);
    assert!(obj_out >= obj_mid - 1e-12 * (1.0 + obj_mid.abs()));
    Ok(SubsetPair::from_masks(s_mask, s_mask))
}

/// Maximum of the objective over feasible pairs. By tightness of the LP
/// bound for diagonal summands this is attained at a symmetric pair, so
/// the returned pair is the best symmetric one.
pub fn combinatorial_optimum(ch: &OmegaChains, k: usize) -> Result<(f64, SubsetPair)> {
    let d = ch.d;
    if k < 1 || k > d {
        return Err(Error::IndexOutOfRange { index: k, max: d });
    }
    let sums: Vec<f64> = (0..d).map(|i| ch.lam1[i] + ch.lam2[i]).collect();
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&i, &j| sums[j].partial_cmp(&sums[i]).unwrap().then(i.cmp(&j)));
    let s: Vec<usize> = idx[..k].to_vec();
    let value = s_k(&sums, k)?;
    Ok((value, SubsetPair::new(s.clone(), s)?))
}

/// All feasible pairs as bitmasks. Exponential; intended for d <= 8.
pub fn feasible_pair_masks(ch: &OmegaChains, k: usize) -> Vec<(u32, u32)> {
    let subsets = crate::alignment_lp::k_subsets(ch.d, k);
    let mut out = Vec::new();
    for &s1 in &subsets {
        for &s2 in &subsets {
            if feasible_masks(ch, s1, s2, k) {
                out.push((s1, s2));
            }
        }
    }
    out
}

/// Brute-force maximum of the objective over all feasible pairs.
pub fn brute_force_optimum(ch: &OmegaChains, k: usize) -> Result<(f64, SubsetPair)> {
    let d = ch.d;
    if k < 1 || k > d {
        return Err(Error::IndexOutOfRange { index: k, max: d });
    }
    let mut best: Option<(f64, u32, u32)> = None;
    for (s1, s2) in feasible_pair_masks(ch, k) {
        let v = ch.objective_masks(s1, s2);
        if best.map_or(true, |(b, _, _)| v > b) {
            best = Some((v, s1, s2));
        }
    }
    let (v, s1, s2) = best.expect("symmetric pairs are always feasible");
    Ok((v, SubsetPair::from_masks(s1, s2)))
}
