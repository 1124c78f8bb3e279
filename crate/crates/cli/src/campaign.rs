//! Seeded batch verification campaigns over random instances.
//!
//! A campaign runs `trials` independent trials; trial t uses the RNG
//! stream seeded with `seed + t`, so serial and parallel executions agree
//! and every report is reproducible byte-for-byte from (seed, config).

use crate::io::{fmt_f64, Json};
use fanmaj::alignment_lp::{
    alignment_tables_all_k, build_p1, integral_solve, overlap_vector, solve_lp, u_k_with,
};
use fanmaj::majorization::s_k;
use fanmaj::random::{
    haar_unitary, random_hermitian, random_probability, random_psd, random_pure, random_subspace,
    CounterRng,
};
use fanmaj::spectral::{eigh, HermitianMatrix, SpectralDecomposition};
use fanmaj::tensor::{check_separable_fan, downset_chain, spin_alignment_2, subspace_dim_check};
use num_complex::Complex64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

fn default_tol() -> f64 {
    1e-7
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Sandwich,
    DiagTight,
    SepFan,
    SpinAlign2,
    OverlapFeasibility,
    FlagInvariance,
    SubspaceDim,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Sandwich => "sandwich",
            Task::DiagTight => "diag-tight",
            Task::SepFan => "sep-fan",
            Task::SpinAlign2 => "spin-align2",
            Task::OverlapFeasibility => "overlap-feasibility",
            Task::FlagInvariance => "flag-invariance",
            Task::SubspaceDim => "subspace-dim",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    pub task: Task,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.trials < 1 {
            return Err("trials must be at least 1".into());
        }
        if self.dims.is_empty() {
            return Err("dims must be nonempty".into());
        }
        let cap = match self.task {
            Task::DiagTight => 8,
            Task::SubspaceDim => 4,
            _ => 16,
        };
        for &d in &self.dims {
            if d < 1 || d > cap {
                return Err(format!(
                    "dimension {d} out of range for task {} (1..={cap})",
                    self.task.name()
                ));
            }
        }
        if self.tol < 0.0 {
            return Err("tol must be nonnegative".into());
        }
        Ok(())
    }
}

/// One recorded failure: which trial, a digest of the instance, and by
/// how much the checked inequality was violated.
#[derive(Clone, Debug)]
pub struct Violation {
    pub trial: usize,
    pub digest: String,
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub task: &'static str,
    pub trials: usize,
    pub violations: Vec<Violation>,
    pub max_gap: f64,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> Json {
        Json::Object(vec![
            ("task".into(), Json::Str(self.task.into())),
            ("trials".into(), Json::Int(self.trials as i64)),
            (
                "violations".into(),
                Json::Array(
                    self.violations
                        .iter()
                        .map(|v| {
                            Json::Object(vec![
                                ("trial".into(), Json::Int(v.trial as i64)),
                                ("digest".into(), Json::Str(v.digest.clone())),
                                ("gap".into(), Json::Float(v.gap)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("max_gap".into(), Json::Float(self.max_gap)),
            (
                "status".into(),
                Json::Str(if self.pass { "pass" } else { "fail" }.into()),
            ),
        ])
    }

    pub fn render(&self) -> String {
        let mut s = self.to_json().render();
        s.push('\n');
        s
    }
}

fn digest_floats(parts: &[&[f64]]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        for &x in *part {
            hasher.update(fmt_f64(x).as_bytes());
            hasher.update(b",");
        }
        hasher.update(b";");
    }
    let hex = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    hex[..16].to_string()
}

fn digest_matrices(mats: &[&HermitianMatrix]) -> String {
    let mut flat: Vec<Vec<f64>> = Vec::new();
    for h in mats {
        let d = h.dim();
        let mut v = Vec::with_capacity(2 * d * d);
        for i in 0..d {
            for j in 0..d {
                v.push(h.mat()[(i, j)].re);
                v.push(h.mat()[(i, j)].im);
            }
        }
        flat.push(v);
    }
    let refs: Vec<&[f64]> = flat.iter().map(|v| v.as_slice()).collect();
    digest_floats(&refs)
}

struct TrialOutcome {
    digest: String,
    /// Worst violation margin; a trial fails when this exceeds 0.
    gap: f64,
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<Report, String> {
    run_campaign_with(cfg, false)
}

/// `corrupt_alignment_rhs` is a negative-control knob used by tests: it
/// tightens one alignment row by a full unit, which must produce
/// violations on the sandwich task.
pub fn run_campaign_with(cfg: &CampaignConfig, corrupt_alignment_rhs: bool) -> Result<Report, String> {
    cfg.validate()?;
    let mut violations = Vec::new();
    let mut max_gap = 0.0f64;
    for trial in 0..cfg.trials {
        let mut rng = CounterRng::new(cfg.seed.wrapping_add(trial as u64));
        let d = cfg.dims[trial % cfg.dims.len()];
        let outcome = match cfg.task {
            Task::Sandwich => sandwich_trial(d, cfg.tol, corrupt_alignment_rhs, &mut rng),
            Task::DiagTight => diag_tight_trial(d, cfg.tol, &mut rng),
            Task::SepFan => {
                let dc = cfg.dims[(trial + 1) % cfg.dims.len()];
                sep_fan_trial(d, dc, cfg.tol, &mut rng)
            }
            Task::SpinAlign2 => spin_align_trial(d, cfg.tol, &mut rng),
            Task::OverlapFeasibility => overlap_trial(d, cfg.tol, &mut rng),
            Task::FlagInvariance => flag_invariance_trial(d, cfg.tol, &mut rng),
            Task::SubspaceDim => {
                let dc = cfg.dims[(trial + 1) % cfg.dims.len()];
                subspace_dim_trial(d, dc, &mut rng)
            }
        }?;
        max_gap = max_gap.max(outcome.gap);
        if outcome.gap > 0.0 {
            violations.push(Violation {
                trial,
                digest: outcome.digest,
                gap: outcome.gap,
            });
        }
    }
    let pass = violations.is_empty();
    Ok(Report {
        task: cfg.task.name(),
        trials: cfg.trials,
        violations,
        max_gap,
        pass,
    })
}

fn spectra(h: &HermitianMatrix) -> Result<Vec<f64>, String> {
    Ok(eigh(h).map_err(|e| e.to_string())?.eigenvalues().to_vec())
}

fn sandwich_trial(
    d: usize,
    tol: f64,
    corrupt: bool,
    rng: &mut CounterRng,
) -> Result<TrialOutcome, String> {
    let a1 = random_hermitian(d, rng);
    let a2 = random_hermitian(d, rng);
    let digest = digest_matrices(&[&a1, &a2]);
    let dec1 = eigh(&a1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&a2).map_err(|e| e.to_string())?;
    let sum_spec = spectra(&a1.add(&a2))?;
    let objective: Vec<f64> = dec1
        .eigenvalues()
        .iter()
        .chain(dec2.eigenvalues())
        .copied()
        .collect();
    let tables = alignment_tables_all_k(&dec1, &dec2).map_err(|e| e.to_string())?;
    let mut gap = 0.0f64;
    for (k, table) in tables.iter().enumerate() {
        let k = k + 1;
        let mut lp = build_p1(table)
            .map_err(|e| e.to_string())?
            .with_objective(objective.clone());
        if corrupt {
            if let Some(row) = lp.rows.first_mut() {
                row.rhs -= 1.0;
            }
        }
        let lower = s_k(&sum_spec, k).map_err(|e| e.to_string())?;
        let upper = s_k(dec1.eigenvalues(), k).map_err(|e| e.to_string())?
            + s_k(dec2.eigenvalues(), k).map_err(|e| e.to_string())?;
        match solve_lp(&lp) {
            Ok(sol) => {
                gap = gap.max(lower - sol.value - tol).max(sol.value - upper - tol);
                if table.is_integral(1e-9) && !sol.vertex_is_integral {
                    gap = gap.max(1.0);
                }
            }
            Err(_) if corrupt => gap = gap.max(f64::INFINITY),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(TrialOutcome { digest, gap })
}

fn diag_tight_trial(d: usize, tol: f64, rng: &mut CounterRng) -> Result<TrialOutcome, String> {
    let lam1: Vec<f64> = (0..d).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
    let lam2: Vec<f64> = (0..d).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
    let digest = digest_floats(&[&lam1, &lam2]);
    let d1 = HermitianMatrix::from_real_diag(&lam1);
    let d2 = HermitianMatrix::from_real_diag(&lam2);
    let dec1 = eigh(&d1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&d2).map_err(|e| e.to_string())?;
    let sum_spec = spectra(&d1.add(&d2))?;
    let objective: Vec<f64> = dec1
        .eigenvalues()
        .iter()
        .chain(dec2.eigenvalues())
        .copied()
        .collect();
    let tables = alignment_tables_all_k(&dec1, &dec2).map_err(|e| e.to_string())?;
    let ch = fanmaj::diagonal::omega_chains(&lam1, &lam2).map_err(|e| e.to_string())?;
    let mut gap = 0.0f64;
    for (k, table) in tables.iter().enumerate() {
        let k = k + 1;
        let lp = build_p1(table)
            .map_err(|e| e.to_string())?
            .with_objective(objective.clone());
        let sol = solve_lp(&lp).map_err(|e| e.to_string())?;
        let sk = s_k(&sum_spec, k).map_err(|e| e.to_string())?;
        gap = gap.max((sol.value - sk).abs() - tol);
        if !sol.vertex_is_integral {
            gap = gap.max(1.0);
        }
        // exhaustive oracles at this scale (d <= 8)
        let exact = integral_solve(&lp).map_err(|e| e.to_string())?;
        gap = gap.max((exact.value - sol.value).abs() - tol);
        let (brute, _) =
            fanmaj::diagonal::brute_force_optimum(&ch, k).map_err(|e| e.to_string())?;
        gap = gap.max((brute - sk).abs() - tol);
    }
    Ok(TrialOutcome { digest, gap })
}

fn sep_fan_trial(
    db: usize,
    dc: usize,
    tol: f64,
    rng: &mut CounterRng,
) -> Result<TrialOutcome, String> {
    let b1 = random_psd(db, rng);
    let c1 = random_psd(dc, rng);
    let b2 = random_psd(db, rng);
    let c2 = random_psd(dc, rng);
    let digest = digest_matrices(&[&b1, &c1, &b2, &c2]);
    let v = check_separable_fan(&b1, &c1, &b2, &c2, tol).map_err(|e| e.to_string())?;
    let worst = v.gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut gap = (-worst - tol).max(0.0);
    if !v.holds {
        gap = gap.max(f64::MIN_POSITIVE);
    }
    Ok(TrialOutcome { digest, gap })
}

fn spin_align_trial(d: usize, tol: f64, rng: &mut CounterRng) -> Result<TrialOutcome, String> {
    let m = random_psd(d, rng);
    let psi1 = random_pure(d, rng);
    let psi2 = random_pure(d, rng);
    let psi12 = random_pure(d * d, rng);
    let p = random_probability(4, rng);
    let digest = digest_matrices(&[&m, &psi1, &psi2, &psi12]);
    let r = spin_alignment_2(&m, &p, &psi1, &psi2, &psi12, tol).map_err(|e| e.to_string())?;
    let worst = r.verdict.gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut gap = (-worst - tol).max(-r.entropy_gap - tol).max(0.0);
    if !r.verdict.holds {
        gap = gap.max(f64::MIN_POSITIVE);
    }
    Ok(TrialOutcome { digest, gap })
}

fn overlap_trial(d: usize, tol: f64, rng: &mut CounterRng) -> Result<TrialOutcome, String> {
    let a1 = random_hermitian(d, rng);
    let a2 = random_hermitian(d, rng);
    let digest = digest_matrices(&[&a1, &a2]);
    let dec1 = eigh(&a1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&a2).map_err(|e| e.to_string())?;
    let k = 1 + rng.next_below(d);
    let tables = alignment_tables_all_k(&dec1, &dec2).map_err(|e| e.to_string())?;
    let lp = build_p1(&tables[k - 1]).map_err(|e| e.to_string())?;
    let mut gap = 0.0f64;
    for _ in 0..100 {
        let w = random_subspace(d, k, rng);
        let x = overlap_vector(&w, &dec1, &dec2).map_err(|e| e.to_string())?;
        for row in &lp.rows {
            let lhs: f64 =
                x[..row.l1].iter().sum::<f64>() + x[d..d + row.l2].iter().sum::<f64>();
            gap = gap.max(lhs - row.rhs - tol);
        }
        for half in 0..2 {
            let sum: f64 = x[half * d..(half + 1) * d].iter().sum();
            gap = gap.max((sum - k as f64).abs() - 1e-8);
        }
    }
    Ok(TrialOutcome { digest, gap })
}

fn rotate_block(
    dec: &SpectralDecomposition,
    lo: usize,
    hi: usize,
    rng: &mut CounterRng,
) -> SpectralDecomposition {
    let d = dec.dim();
    let r = haar_unitary(hi - lo, rng);
    let mut vecs = dec.eigenvectors().clone();
    let old: Vec<Vec<Complex64>> = (lo..hi).map(|j| dec.eigenvector(j)).collect();
    for (jj, j) in (lo..hi).enumerate() {
        let mut col = vec![Complex64::new(0.0, 0.0); d];
        for (ii, o) in old.iter().enumerate() {
            for (row, val) in col.iter_mut().enumerate() {
                *val += o[row] * r[(ii, jj)];
            }
        }
        vecs.set_col(j, &col);
    }
    SpectralDecomposition::from_parts(dec.eigenvalues().to_vec(), vecs)
        .expect("rotated block stays orthonormal")
}

fn flag_invariance_trial(d: usize, tol: f64, rng: &mut CounterRng) -> Result<TrialOutcome, String> {
    // eigenvalue list with a repeated value somewhere in the middle
    let mut vals: Vec<f64> = (0..d).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let block = if d >= 3 { 1 + rng.next_below(d - 2) } else { 0 };
    vals[block + 1] = vals[block];
    let u = haar_unitary(d, rng);
    let a1 = HermitianMatrix::from_real_diag(&vals).conjugate(&u);
    let a2 = random_hermitian(d, rng);
    let digest = digest_matrices(&[&a1, &a2]);
    let dec1 = eigh(&a1).map_err(|e| e.to_string())?;
    let dec2 = eigh(&a2).map_err(|e| e.to_string())?;
    let alt = rotate_block(&dec1, block, block + 2, rng);
    let mut gap = 0.0f64;
    for k in 1..=d {
        let base = u_k_with(&dec1, &dec2, k).map_err(|e| e.to_string())?.value;
        let moved = u_k_with(&alt, &dec2, k).map_err(|e| e.to_string())?.value;
        gap = gap.max((base - moved).abs() - tol);
    }
    Ok(TrialOutcome { digest, gap })
}

fn subspace_dim_trial(db: usize, dc: usize, rng: &mut CounterRng) -> Result<TrialOutcome, String> {
    let fb = haar_unitary(db, rng);
    let gb = haar_unitary(db, rng);
    let fc = haar_unitary(dc, rng);
    let gc = haar_unitary(dc, rng);
    // random downward closed sets via chains of random sorted spectra
    let mut specs = Vec::new();
    for d in [db, dc, db, dc] {
        let mut v: Vec<f64> = (0..d).map(|_| rng.next_f64()).collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        specs.push(v);
    }
    let ch1 = downset_chain(&specs[0], &specs[1]).map_err(|e| e.to_string())?;
    let ch2 = downset_chain(&specs[2], &specs[3]).map_err(|e| e.to_string())?;
    let l1 = 1 + rng.next_below(db * dc);
    let l2 = 1 + rng.next_below(db * dc);
    let flat: Vec<f64> = specs.concat();
    let digest = digest_floats(&[&flat, &[l1 as f64, l2 as f64]]);
    let (lhs, rhs) = subspace_dim_check(&fb, &gb, &fc, &gc, ch1.upsilon(l1), ch2.upsilon(l2))
        .map_err(|e| e.to_string())?;
    let gap = if lhs >= rhs { 0.0 } else { (rhs - lhs) as f64 };
    Ok(TrialOutcome { digest, gap })
}
