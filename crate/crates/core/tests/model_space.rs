//! Cross-module model-space facts on fixed scenarios: the `K_Θ = K_Λ ⊕ ΛK_Ψ`
//! decomposition with its kernel identities, the Hankel-style projection
//! identities, the kernel density surrogate, and the coefficientwise-real
//! hypothesis under which `J* M_F = M_F J*` holds.

use mvtto_core::conjugation::j_star;
use mvtto_core::inner::{random_commuting_pair, InnerFunction, PairSpec, PairStrategy};
use mvtto_core::laurent::{GammaStructure, MatLaurent};
use mvtto_core::linalg;
use mvtto_core::window::{
    frame_matrix, kernel, kernel_tilde, model_basis, mult_op, proj_halfspace, proj_model,
    HalfSpace, Window,
};
use mvtto_core::{c64, C64};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixed_pair() -> (InnerFunction, InnerFunction, InnerFunction) {
    let spec = PairSpec::exact(2, (2, 1), PairStrategy::SimultaneouslyDiagonal);
    let (lambda, psi, cert) = random_commuting_pair(12, &spec).unwrap();
    assert!(cert.max_defect() < 1e-12);
    let theta = lambda.product_with(&psi).unwrap();
    (lambda, psi, theta)
}

#[test]
fn direct_sum_decomposition() {
    let (lambda, psi, theta) = fixed_pair();
    let w = Window::new(14, 2);
    let basis_l = model_basis(&lambda, w, 1e-10).unwrap();
    let basis_p = model_basis(&psi, w, 1e-10).unwrap();
    let basis_t = model_basis(&theta, w, 1e-10).unwrap();
    assert_eq!(basis_t.len(), basis_l.len() + basis_p.len());

    // combined frame [K_Λ | Λ K_Ψ] is orthonormal and spans K_Θ
    let mut combined = basis_l.clone();
    for b in &basis_p {
        combined.push(lambda.expansion().apply(b).unwrap());
    }
    let fc = frame_matrix(w, &combined).unwrap();
    let r = fc.ncols();
    let gram_defect = linalg::spectral_norm(&(fc.adjoint() * &fc - DMatrix::identity(r, r)));
    assert!(gram_defect < 1e-12, "gram defect {gram_defect:.3e}");
    let ft = frame_matrix(w, &basis_t).unwrap();
    let span = linalg::span_defect(&fc, &ft);
    assert!(span < 1e-8, "span defect {span:.3e}");
}

#[test]
fn projection_sum_identity() {
    let (lambda, psi, theta) = fixed_pair();
    let w = Window::new(16, 2);
    let p_theta = proj_model(&theta, w).unwrap();
    let p_lambda = proj_model(&lambda, w).unwrap();
    let p_psi = proj_model(&psi, w).unwrap();
    let m_l = mult_op(lambda.expansion(), w).unwrap();
    let m_ls = mult_op(&lambda.expansion().star(), w).unwrap();
    let rhs = p_lambda
        .add(&m_l.compose(&p_psi).unwrap().compose(&m_ls).unwrap())
        .unwrap();
    let margin = rhs.margin().max(p_theta.margin()) as i64;
    let n = w.radius() as i64;
    let defect = p_theta
        .column_defect(&rhs, -n + margin, n - margin)
        .unwrap();
    assert!(defect < 1e-10, "projection sum defect {defect:.3e}");
}

#[test]
fn kernel_decomposition_identities() {
    let (lambda, psi, theta) = fixed_pair();
    let w = Window::new(16, 2);
    let pts = [c64(0.4, 0.2), c64(-0.3, 0.5), c64(0.0, 0.0)];
    for &pt in &pts {
        for i in 0..2 {
            let x = DVector::from_fn(2, |r, _| {
                if r == i {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            // k_λ^Θ x = k_λ^Λ x + Λ k_λ^Ψ Λ(λ)* x
            let (k_t, tail) = kernel(&theta, pt, &x, w).unwrap();
            let (k_l, _) = kernel(&lambda, pt, &x, w).unwrap();
            let lx = lambda.eval(pt).adjoint() * &x;
            let (k_p, _) = kernel(&psi, pt, &lx, w).unwrap();
            let rhs = &k_l + &lambda.expansion().apply(&k_p.trim_below(1e-13)).unwrap();
            let d3 = (&k_t - &rhs).coeff_max_norm();
            assert!(d3 < 1e-9 + 10.0 * tail, "item 3 defect {d3:.3e}");

            // k~_λ^Θ x = k~_λ^Λ Ψ(λ) x + Λ k~_λ^Ψ x
            let kt_t = kernel_tilde(&theta, pt, &x, w).unwrap();
            let px = psi.eval(pt) * &x;
            let kt_l = kernel_tilde(&lambda, pt, &px, w).unwrap();
            let kt_p = kernel_tilde(&psi, pt, &x, w).unwrap();
            let rhs4 = &kt_l + &lambda.expansion().apply(&kt_p).unwrap();
            let d4 = (&kt_t - &rhs4).coeff_max_norm();
            assert!(d4 < 1e-10, "item 4 defect {d4:.3e}");

            // P_Λ k^Θ = k^Λ and P_Λ k~^Θ = k~^Λ Ψ(λ)x
            let p_lambda = proj_model(&lambda, w).unwrap();
            let d5a = (&p_lambda.apply(&k_t.trim_below(1e-12)).unwrap() - &k_l).coeff_max_norm();
            assert!(d5a < 1e-9, "item 5 kernel defect {d5a:.3e}");
            let d5b = (&p_lambda.apply(&kt_t).unwrap() - &kt_l).coeff_max_norm();
            assert!(d5b < 1e-9, "item 5 tilde defect {d5b:.3e}");
        }
    }
}

#[test]
fn halfspace_projection_identities() {
    // P_Θ = ΘP₋Θ* − P₋ = ΘP₋Θ*P₊ = P₊ΛP₋Λ* + ΛP_ΨΛ* = P₊ΘP₋Θ*
    let (lambda, psi, theta) = fixed_pair();
    let w = Window::new(18, 2);
    let p_theta = proj_model(&theta, w).unwrap();
    let p_plus = proj_halfspace(w, HalfSpace::Analytic);
    let p_minus = proj_halfspace(w, HalfSpace::CoAnalytic);
    let m_t = mult_op(theta.expansion(), w).unwrap();
    let m_ts = mult_op(&theta.expansion().star(), w).unwrap();
    let m_l = mult_op(lambda.expansion(), w).unwrap();
    let m_ls = mult_op(&lambda.expansion().star(), w).unwrap();
    let core = m_t.compose(&p_minus).unwrap().compose(&m_ts).unwrap();

    let one = core.sub(&p_minus).unwrap();
    let two = core.compose(&p_plus).unwrap();
    let three = p_plus
        .compose(&m_l.compose(&p_minus).unwrap().compose(&m_ls).unwrap())
        .unwrap()
        .add(
            &m_l.compose(&proj_model(&psi, w).unwrap())
                .unwrap()
                .compose(&m_ls)
                .unwrap(),
        )
        .unwrap();
    let four = p_plus.compose(&core).unwrap();

    let n = w.radius() as i64;
    for (name, candidate) in [("one", one), ("two", two), ("three", three), ("four", four)] {
        let margin = candidate.margin().max(p_theta.margin()) as i64;
        let defect = p_theta
            .column_defect(&candidate, -n + margin, n - margin)
            .unwrap();
        assert!(defect < 1e-10, "identity {name} defect {defect:.3e}");
    }
}

#[test]
fn kernel_vectors_are_dense_in_model_space() {
    let (_, _, theta) = fixed_pair();
    let w = Window::new(16, 2);
    let basis = model_basis(&theta, w, 1e-10).unwrap();
    let rank = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut vectors = Vec::new();
    for _ in 0..2 * rank {
        let pt = linalg::random_disk_point(&mut rng, 0.7);
        let i = rng.gen_range(0..2usize);
        let x = DVector::from_fn(2, |r, _| {
            if r == i {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let (k, _) = kernel(&theta, pt, &x, w).unwrap();
        vectors.push(k.trim_below(1e-12));
    }
    let span = frame_matrix(w, &vectors).unwrap();
    let q = linalg::orthonormal_columns(&span, 1e-8);
    let ft = frame_matrix(w, &basis).unwrap();
    let defect = linalg::span_defect(&q, &ft);
    assert!(defect < 1e-6, "density surrogate defect {defect:.3e}");
}

#[test]
fn jstar_commutes_with_multiplication_for_real_coefficients() {
    let w = Window::new(8, 2);
    let gamma = GammaStructure::identity(2);
    let js = j_star(w, &gamma);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // real coefficients: Γ F_n Γ = F_n
    let real_sym = MatLaurent::new(
        2,
        -1,
        (0..3)
            .map(|_| {
                DMatrix::from_fn(2, 2, |_, _| C64::new(rng.gen_range(-1.0..1.0f64), 0.0))
            })
            .collect(),
    )
    .unwrap();
    let m = mult_op(&real_sym, w).unwrap();
    let lhs = m.matrix() * js.matrix();
    let rhs = js.matrix() * m.matrix().map(|z| z.conj());
    assert!(linalg::spectral_norm(&(lhs - rhs)) < 1e-12);

    // gamma-symmetric alone is not enough: F = iI is symmetric yet flips sign
    let i_const = mult_op(
        &MatLaurent::constant(DMatrix::identity(2, 2) * c64(0.0, 1.0)),
        w,
    )
    .unwrap();
    let lhs = i_const.matrix() * js.matrix();
    let rhs = js.matrix() * i_const.matrix().map(|z| z.conj());
    let witness = linalg::spectral_norm(&(lhs - rhs));
    assert!(witness > 1.0, "expected an order-one violation, got {witness:.3e}");
}

#[test]
fn window_sections_match_quadrature_sampled_oracle() {
    // block-Toeplitz placement vs entrywise quadrature at 4096 circle points
    let w = Window::new(10, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let phi = &MatLaurent::monomial(-2, linalg::random_complex_matrix(&mut rng, 2, 2))
        + &MatLaurent::monomial(1, linalg::random_complex_matrix(&mut rng, 2, 2));
    let direct = mult_op(&phi, w).unwrap();
    let oracle = quadrature_mult_oracle(&phi, w, 4096);
    assert!(
        linalg::spectral_norm(&(direct.matrix() - &oracle)) < 1e-8,
        "multiplication oracle mismatch"
    );
}

/// Independent construction of `M_Φ`: entry blocks from boundary samples,
/// `block(m, n) = (1/M) Σ_j conj(z_j)^m Φ(z_j) z_j^n`.
fn quadrature_mult_oracle(phi: &MatLaurent, w: Window, nodes: usize) -> DMatrix<C64> {
    let d = w.dim();
    let n = w.radius() as i64;
    let samples: Vec<DMatrix<C64>> = (0..nodes)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / nodes as f64;
            phi.eval_boundary(C64::new(t.cos(), t.sin()))
        })
        .collect();
    let mut out = DMatrix::<C64>::zeros(w.total_dim(), w.total_dim());
    for row in -n..=n {
        for col in -n..=n {
            let mut block = DMatrix::<C64>::zeros(d, d);
            for (k, s) in samples.iter().enumerate() {
                let t = std::f64::consts::TAU * k as f64 * (row - col) as f64 / nodes as f64;
                block += s * C64::new(t.cos(), -t.sin());
            }
            block *= C64::new(1.0 / nodes as f64, 0.0);
            for i in 0..d {
                for j in 0..d {
                    out[(w.index(row, i), w.index(col, j))] = block[(i, j)];
                }
            }
        }
    }
    out
}
