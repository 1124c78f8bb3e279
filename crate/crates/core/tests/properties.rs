//! Cross-module property suites at desk scale. The heavier, full-size
//! runs live in the cli crate's acceptance suite.

use fanmaj::alignment_lp::{
    alignment_table, alignment_tables_all_k, build_p1, integral_solve, overlap_vector, solve_lp,
    u_k_all, u_k_with,
};
use fanmaj::diagonal::{brute_force_optimum, omega_chains};
use fanmaj::majorization::{majorizes, operator_majorizes, s_k};
use fanmaj::random::{haar_unitary, random_hermitian, random_psd, random_subspace, CounterRng};
use fanmaj::spectral::{
    align_map, eigh, flag_projector, trace_product, von_neumann_entropy, HermitianMatrix,
    SpectralDecomposition,
};
use fanmaj::Mat;
use num_complex::Complex64;

#[test]
fn fan_maximum_principle() {
    let mut rng = CounterRng::new(1001);
    for _ in 0..3 {
        let d = 5;
        let h = random_hermitian(d, &mut rng);
        let dec = eigh(&h).unwrap();
        for k in 1..=d {
            let sk = s_k(dec.eigenvalues(), k).unwrap();
            for _ in 0..200 {
                let w = random_subspace(d, k, &mut rng);
                assert!(trace_product(&w.projector, &h) <= sk + 1e-9);
            }
            // attained by the flag projector
            let p = flag_projector(&dec, k).unwrap();
            assert!((trace_product(&p.projector, &h) - sk).abs() < 1e-9);
        }
    }
}

#[test]
fn fan_majorization_relation() {
    let mut rng = CounterRng::new(1002);
    for _ in 0..10 {
        let a1 = random_hermitian(5, &mut rng);
        let a2 = random_hermitian(5, &mut rng);
        let aligned = align_map(&a1).unwrap().add(&align_map(&a2).unwrap());
        let sum = a1.add(&a2);
        let v = operator_majorizes(&aligned, &sum, 1e-7).unwrap();
        assert!(v.holds, "first violation {:?}", v.first_violation);
    }
}

#[test]
fn sandwich_property() {
    let mut rng = CounterRng::new(1003);
    for trial in 0..30 {
        let d = 2 + trial % 5;
        let a1 = random_hermitian(d, &mut rng);
        let a2 = random_hermitian(d, &mut rng);
        let sum_spec = eigh(&a1.add(&a2)).unwrap().eigenvalues().to_vec();
        let spec1 = eigh(&a1).unwrap().eigenvalues().to_vec();
        let spec2 = eigh(&a2).unwrap().eigenvalues().to_vec();
        for (k, sol) in u_k_all(&a1, &a2).unwrap().iter().enumerate() {
            let k = k + 1;
            let lower = s_k(&sum_spec, k).unwrap();
            let upper = s_k(&spec1, k).unwrap() + s_k(&spec2, k).unwrap();
            assert!(sol.value >= lower - 1e-7, "d={d} k={k}");
            assert!(sol.value <= upper + 1e-7, "d={d} k={k}");
        }
    }
}

#[test]
fn adding_rows_never_increases_value() {
    let mut rng = CounterRng::new(1004);
    let d = 5;
    let a1 = random_hermitian(d, &mut rng);
    let a2 = random_hermitian(d, &mut rng);
    let dec1 = eigh(&a1).unwrap();
    let dec2 = eigh(&a2).unwrap();
    let objective: Vec<f64> = dec1
        .eigenvalues()
        .iter()
        .chain(dec2.eigenvalues())
        .copied()
        .collect();
    for k in 1..=d {
        let table = alignment_table(&dec1, &dec2, k).unwrap();
        let full = build_p1(&table).unwrap().with_objective(objective.clone());
        let mut partial = full.clone();
        partial.rows.clear();
        let mut prev = solve_lp(&partial).unwrap().value;
        for row in &full.rows {
            partial.rows.push(*row);
            let cur = solve_lp(&partial).unwrap().value;
            assert!(cur <= prev + 1e-9);
            prev = cur;
        }
    }
}

#[test]
fn overlap_vectors_feasible() {
    let mut rng = CounterRng::new(1005);
    for _ in 0..5 {
        let d = 5;
        let k = 2;
        let a1 = random_hermitian(d, &mut rng);
        let a2 = random_hermitian(d, &mut rng);
        let dec1 = eigh(&a1).unwrap();
        let dec2 = eigh(&a2).unwrap();
        let lp = build_p1(&alignment_table(&dec1, &dec2, k).unwrap()).unwrap();
        for _ in 0..100 {
            let w = random_subspace(d, k, &mut rng);
            let x = overlap_vector(&w, &dec1, &dec2).unwrap();
            for half in 0..2 {
                let sum: f64 = x[half * d..(half + 1) * d].iter().sum();
                assert!((sum - k as f64).abs() < 1e-8);
            }
            assert!(x.iter().all(|&v| (-1e-10..=1.0 + 1e-10).contains(&v)));
            for row in &lp.rows {
                let lhs: f64 = x[..row.l1].iter().sum::<f64>()
                    + x[d..d + row.l2].iter().sum::<f64>();
                assert!(lhs <= row.rhs + 1e-8, "row ({},{})", row.l1, row.l2);
            }
        }
    }
}

fn rotate_degenerate_block(
    dec: &SpectralDecomposition,
    lo: usize,
    hi: usize,
    rng: &mut CounterRng,
) -> SpectralDecomposition {
    let d = dec.dim();
    let b = hi - lo;
    let r = haar_unitary(b, rng);
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
    SpectralDecomposition::from_parts(dec.eigenvalues().to_vec(), vecs).unwrap()
}

#[test]
fn flag_invariance_under_degenerate_rotation() {
    let mut rng = CounterRng::new(1006);
    for _ in 0..10 {
        let d = 4;
        let u = haar_unitary(d, &mut rng);
        let a1 = HermitianMatrix::from_real_diag(&[2.0, 1.0, 1.0, 0.5]).conjugate(&u);
        let a2 = random_hermitian(d, &mut rng);
        let dec1 = eigh(&a1).unwrap();
        let dec2 = eigh(&a2).unwrap();
        // eigenvalues 1.0 occupy sorted positions 1 and 2
        let alt = rotate_degenerate_block(&dec1, 1, 3, &mut rng);
        for k in 1..=d {
            let base = u_k_with(&dec1, &dec2, k).unwrap().value;
            let moved = u_k_with(&alt, &dec2, k).unwrap().value;
            assert!((base - moved).abs() <= 1e-7, "k={k}: {base} vs {moved}");
        }
    }
}

#[test]
fn diagonal_tightness_and_integrality() {
    let mut rng = CounterRng::new(1007);
    for trial in 0..20 {
        let d = 3 + trial % 5;
        let lam1: Vec<f64> = (0..d).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
        let lam2: Vec<f64> = (0..d).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
        let d1 = HermitianMatrix::from_real_diag(&lam1);
        let d2 = HermitianMatrix::from_real_diag(&lam2);
        let sum_spec = eigh(&d1.add(&d2)).unwrap().eigenvalues().to_vec();
        let ch = omega_chains(&lam1, &lam2).unwrap();
        let dec1 = eigh(&d1).unwrap();
        let dec2 = eigh(&d2).unwrap();
        let tables = alignment_tables_all_k(&dec1, &dec2).unwrap();
        for (k, sol) in u_k_all(&d1, &d2).unwrap().iter().enumerate() {
            let k = k + 1;
            let sk = s_k(&sum_spec, k).unwrap();
            assert!((sol.value - sk).abs() <= 1e-7, "d={d} k={k}");
            // diagonal tables are integral, so the vertex must be 0/1 and
            // the exhaustive 0/1 solver must agree
            let table = &tables[k - 1];
            assert!(table.is_integral(1e-7));
            assert!(sol.vertex_is_integral);
            // LP coordinates index the sorted spectra
            let objective: Vec<f64> = dec1
                .eigenvalues()
                .iter()
                .chain(dec2.eigenvalues())
                .copied()
                .collect();
            let lp = build_p1(table).unwrap().with_objective(objective);
            let exact = integral_solve(&lp).unwrap();
            assert!((exact.value - sol.value).abs() <= 1e-7);
            let (brute, _) = brute_force_optimum(&ch, k).unwrap();
            assert!((brute - sk).abs() <= 1e-9);
        }
    }
}

#[test]
fn entropy_invariant_under_conjugation() {
    let mut rng = CounterRng::new(1008);
    for _ in 0..10 {
        let rho = random_psd(4, &mut rng);
        let u = haar_unitary(4, &mut rng);
        let h1 = von_neumann_entropy(&rho).unwrap();
        let h2 = von_neumann_entropy(&rho.conjugate(&u)).unwrap();
        assert!((h1 - h2).abs() < 1e-8);
    }
}

#[test]
fn eigh_matches_characteristic_polynomial_roots() {
    // independent oracle: roots of det(H - xI) via the companion matrix of
    // the characteristic polynomial, itself found with Faddeev-LeVerrier
    let mut rng = CounterRng::new(1009);
    let d = 6;
    let h = random_hermitian(d, &mut rng);
    let dec = eigh(&h).unwrap();

    // Faddeev-LeVerrier: coefficients of x^d - c1 x^(d-1) - ... - cd
    let a = h.mat().clone();
    let mut m = Mat::identity(d);
    let mut coeffs = Vec::with_capacity(d);
    for i in 1..=d {
        let am = a.mul(&m);
        let c = am.trace().re / i as f64;
        coeffs.push(c);
        let mut next = am;
        for j in 0..d {
            next[(j, j)] -= Complex64::new(c, 0.0);
        }
        m = next;
    }
    // evaluate p(x) = x^d - c1 x^(d-1) - ... and verify each eigenvalue is
    // a root after Newton polishing from the eigenvalue itself
    let p = |x: f64| -> f64 {
        let mut v = 1.0;
        for c in &coeffs {
            v = v * x - c;
        }
        v
    };
    let dp = |x: f64| -> f64 {
        let eps = 1e-6;
        (p(x + eps) - p(x - eps)) / (2.0 * eps)
    };
    for &lam in dec.eigenvalues() {
        let mut root = lam;
        for _ in 0..50 {
            let step = p(root) / dp(root);
            root -= step;
            if step.abs() < 1e-14 {
                break;
            }
        }
        assert!((root - lam).abs() < 1e-8, "eigenvalue {lam} vs root {root}");
    }
}

#[test]
fn mutual_majorization_of_lp_duals_of_equal_pairs() {
    // u_k is symmetric in its two arguments
    let mut rng = CounterRng::new(1010);
    let a1 = random_hermitian(4, &mut rng);
    let a2 = random_hermitian(4, &mut rng);
    let fwd = u_k_all(&a1, &a2).unwrap();
    let rev = u_k_all(&a2, &a1).unwrap();
    for (f, r) in fwd.iter().zip(&rev) {
        assert!((f.value - r.value).abs() < 1e-7);
    }
}

#[test]
fn majorization_chain_through_alignment() {
    // lambda(A1 + A2) is majorized by the vector of u_k increments'
    // underlying bound: s_k(A1+A2) <= u_k for all k with equality at k = d
    let mut rng = CounterRng::new(1011);
    let a1 = random_hermitian(4, &mut rng);
    let a2 = random_hermitian(4, &mut rng);
    let sum_spec = eigh(&a1.add(&a2)).unwrap().eigenvalues().to_vec();
    let sols = u_k_all(&a1, &a2).unwrap();
    let trace = sum_spec.iter().sum::<f64>();
    assert!((sols[3].value - trace).abs() < 1e-7);
    let v = majorizes(&sum_spec, &sum_spec, 0.0).unwrap();
    assert!(v.holds);
}
