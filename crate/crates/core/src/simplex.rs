//! Bounded-variable two-phase primal simplex with Bland's rule.
//!
//! All structural variables live in [0, u_j]. Rows are equalities or
//! upper-bounded inequalities. Problem sizes here are tiny (at most a few
//! hundred rows and columns), so a dense tableau is kept explicitly.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
const RATIO_TIE: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-7;
const PIVOT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Relation {
    Le,
    Eq,
}

pub(crate) struct Problem {
    /// Objective coefficients for the structural variables (maximized).
    pub objective: Vec<f64>,
    /// Upper bounds for the structural variables (lower bounds are 0).
    pub upper: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Status {
    Basic(usize),
    Lower,
    Upper,
}

struct Tableau {
    m: usize,
    /// Index past the last non-artificial column.
    n_enterable: usize,
    t: Vec<Vec<f64>>,
    x: Vec<f64>,
    upper: Vec<f64>,
    status: Vec<Status>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.t[r][e];
        for v in self.t[r].iter_mut() {
            *v /= piv;
        }
        let row_r = self.t[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i][e];
            if f != 0.0 {
                for (v, &rv) in self.t[i].iter_mut().zip(&row_r) {
                    *v -= f * rv;
                }
            }
        }
    }

    fn reduced_cost(&self, c: &[f64], j: usize) -> f64 {
        let mut z = c[j];
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                z -= cb * self.t[i][j];
            }
        }
        z
    }

    /// One simplex phase: maximize c over the current basis until no
    /// favorable entering column remains (Bland's rule throughout).
    fn optimize(&mut self, c: &[f64]) -> Result<()> {
        loop {
            if self.pivots > PIVOT_CAP {
                return Err(Error::PivotCapExceeded { cap: PIVOT_CAP });
            }
            let mut entering = None;
            for j in 0..self.n_enterable {
                match self.status[j] {
                    Status::Basic(_) => continue,
                    Status::Lower => {
                        if self.reduced_cost(c, j) > PIVOT_TOL {
                            entering = Some((j, 1.0));
                            break;
                        }
                    }
                    Status::Upper => {
                        if self.reduced_cost(c, j) < -PIVOT_TOL {
                            entering = Some((j, -1.0));
                            break;
                        }
                    }
                }
            }
            let Some((e, dir)) = entering else {
                return Ok(());
            };

            // Ratio test. The bound flip of the entering variable competes
            // with basic variables hitting a bound; ties go to the smallest
            // variable index (Bland).
            let mut t_best = self.upper[e]; // flip distance, lower bound is 0
            let mut choice: Option<(usize, bool)> = None; // (row, leaves at upper)
            let mut choice_var = e;
            for i in 0..self.m {
                let d = dir * self.t[i][e];
                let bi = self.basis[i];
                let (ratio, to_upper) = if d > PIVOT_TOL {
                    (self.x[bi] / d, false)
                } else if d < -PIVOT_TOL && self.upper[bi].is_finite() {
                    ((self.upper[bi] - self.x[bi]) / (-d), true)
                } else {
                    continue;
                };
                let ratio = ratio.max(0.0);
                if ratio < t_best - RATIO_TIE
                    || (ratio <= t_best + RATIO_TIE && bi < choice_var)
                {
                    t_best = ratio;
                    choice = Some((i, to_upper));
                    choice_var = bi;
                }
            }
            if t_best.is_infinite() {
                return Err(Error::Unbounded);
            }

            let step = t_best.max(0.0);
            self.x[e] += dir * step;
            for i in 0..self.m {
                let bi = self.basis[i];
                self.x[bi] -= dir * step * self.t[i][e];
            }
            match choice {
                None => {
                    // bound flip
                    if dir > 0.0 {
                        self.x[e] = self.upper[e];
                        self.status[e] = Status::Upper;
                    } else {
                        self.x[e] = 0.0;
                        self.status[e] = Status::Lower;
                    }
                }
                Some((r, to_upper)) => {
                    let bv = self.basis[r];
                    self.x[bv] = if to_upper { self.upper[bv] } else { 0.0 };
                    self.status[bv] = if to_upper {
                        Status::Upper
                    } else {
                        Status::Lower
                    };
                    self.status[e] = Status::Basic(r);
                    self.basis[r] = e;
                    self.pivot(r, e);
                }
            }
            self.pivots += 1;
        }
    }
}

/// Maximize the objective over the problem's polyhedron. Returns the
/// optimal value and the optimal point (structural coordinates only).
pub(crate) fn maximize(p: &Problem) -> Result<(f64, Vec<f64>)> {
    let n = p.objective.len();
    let m = p.rows.len();
    let n_slack = p.rows.iter().filter(|r| r.1 == Relation::Le).count();
    let ncols = n + n_slack + m;
    let n_enterable = n + n_slack;

    let mut t = vec![vec![0.0; ncols]; m];
    let mut upper = Vec::with_capacity(ncols);
    upper.extend_from_slice(&p.upper);
    upper.extend(std::iter::repeat(f64::INFINITY).take(n_slack + m));

    let mut slack_at = n;
    let mut rhs = Vec::with_capacity(m);
    for (i, (coeffs, rel, b)) in p.rows.iter().enumerate() {
        assert_eq!(coeffs.len(), n, "row length mismatch");
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        for (j, &a) in coeffs.iter().enumerate() {
            t[i][j] = sign * a;
        }
        if *rel == Relation::Le {
            t[i][slack_at] = sign;
            slack_at += 1;
        }
        t[i][n_enterable + i] = 1.0;
        rhs.push(sign * b);
    }

    let mut x = vec![0.0; ncols];
    let mut status = vec![Status::Lower; ncols];
    let mut basis = Vec::with_capacity(m);
    for (i, &b) in rhs.iter().enumerate() {
        let art = n_enterable + i;
        x[art] = b;
        status[art] = Status::Basic(i);
        basis.push(art);
    }

    let mut tab = Tableau {
        m,
        n_enterable,
        t,
        x,
        upper,
        status,
        basis,
        pivots: 0,
    };

    // Phase 1: drive the artificial variables to zero.
    let mut c1 = vec![0.0; ncols];
    for j in n_enterable..ncols {
        c1[j] = -1.0;
    }
    tab.optimize(&c1)?;
    let infeas: f64 = (n_enterable..ncols).map(|j| tab.x[j]).sum();
    if infeas > FEAS_TOL {
        return Err(Error::Infeasible);
    }
    // Pivot basic artificials out where possible; rows where this fails
    // are redundant and their artificial stays pinned at zero.
    for r in 0..m {
        if tab.basis[r] >= n_enterable {
            if let Some(j) = (0..n_enterable).find(|&j| {
                !matches!(tab.status[j], Status::Basic(_)) && tab.t[r][j].abs() > 1e-9
            }) {
                let bv = tab.basis[r];
                tab.x[bv] = 0.0;
                tab.status[bv] = Status::Lower;
                tab.status[j] = Status::Basic(r);
                tab.basis[r] = j;
                tab.pivot(r, j);
            }
        }
    }

    // Phase 2: the real objective.
    let mut c2 = vec![0.0; ncols];
    c2[..n].copy_from_slice(&p.objective);
    tab.optimize(&c2)?;

    let point: Vec<f64> = tab.x[..n].to_vec();
    let value = point
        .iter()
        .zip(&p.objective)
        .map(|(x, c)| x * c)
        .sum::<f64>();
    Ok((value, point))
}
