//! Checks for the inner-function generator and the model-space decomposition.

use mvtto_core::inner::{check_inner, divide};
use mvtto_core::laurent::VecLaurent;
use mvtto_core::linalg;
use mvtto_core::window::{frame_matrix, kernel, kernel_tilde, mult_op, proj_model};
use mvtto_core::{C64, Error as CoreError};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::context::CheckContext;

pub fn pair_certificate(ctx: &CheckContext) -> Result<f64, CoreError> {
    Ok(ctx.certificate.max_defect())
}

pub fn gamma_preserves_inner(ctx: &CheckContext) -> Result<f64, CoreError> {
    let before = check_inner(ctx.theta.expansion());
    let after = check_inner(&ctx.theta.expansion().gamma_conj(&ctx.gamma));
    Ok((after - before).max(0.0))
}

pub fn divide_roundtrip(ctx: &CheckContext) -> Result<f64, CoreError> {
    let tol = 1e-10 + 10.0 * ctx.theta.tail();
    let psi = divide(&ctx.theta, &ctx.factor_lambda, tol)?;
    let back = ctx.factor_lambda.expansion().mul(psi.expansion())?;
    Ok((&back - ctx.theta.expansion()).coeff_max_norm())
}

pub fn degree_additive(ctx: &CheckContext) -> Result<f64, CoreError> {
    let expect = ctx.factor_lambda.degree() + ctx.factor_psi.degree();
    Ok((ctx.theta.degree() as f64 - expect as f64).abs())
}

pub fn factor_commute(ctx: &CheckContext) -> Result<f64, CoreError> {
    Ok(ctx.certificate.commutator_defect)
}

pub fn direct_sum(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let mut combined = ctx.frame_lambda.clone();
    for b in &ctx.frame_psi {
        combined.push(ctx.factor_lambda.expansion().apply(b)?);
    }
    if combined.len() != ctx.frame_theta.len() {
        return Ok(1.0 + (combined.len() as f64 - ctx.frame_theta.len() as f64).abs());
    }
    let fc = frame_matrix(w, &combined)?;
    let r = fc.ncols();
    let gram = linalg::spectral_norm(&(fc.adjoint() * &fc - DMatrix::identity(r, r)));
    let span = linalg::span_defect(&fc, &ctx.frame_theta_matrix()?);
    Ok(gram.max(span))
}

pub fn projection_sum(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let p_theta = proj_model(&ctx.theta, w)?;
    let p_lambda = proj_model(&ctx.factor_lambda, w)?;
    let p_psi = proj_model(&ctx.factor_psi, w)?;
    let m_l = mult_op(ctx.factor_lambda.expansion(), w)?;
    let m_ls = mult_op(&ctx.factor_lambda.expansion().star(), w)?;
    let rhs = p_lambda.add(&m_l.compose(&p_psi)?.compose(&m_ls)?)?;
    let margin = rhs.margin().max(p_theta.margin()) as i64;
    let n = w.radius() as i64;
    p_theta.column_defect(&rhs, -n + margin, n - margin)
}

fn coordinate(dim: usize, i: usize) -> DVector<C64> {
    DVector::from_fn(dim, |r, _| {
        if r == i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn kernel_split(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let mut worst = 0.0f64;
    for &pt in &ctx.scenario.lambda_samples {
        for i in 0..ctx.scenario.dim {
            let x = coordinate(ctx.scenario.dim, i);
            let (k_t, tail) = kernel(&ctx.theta, pt, &x, w)?;
            let (k_l, _) = kernel(&ctx.factor_lambda, pt, &x, w)?;
            let lx = ctx.factor_lambda.eval(pt).adjoint() * &x;
            let (k_p, _) = kernel(&ctx.factor_psi, pt, &lx, w)?;
            let rhs = &k_l
                + &ctx
                    .factor_lambda
                    .expansion()
                    .apply(&k_p.trim_below(1e-13))?;
            let defect = (&k_t - &rhs).coeff_max_norm();
            worst = worst.max((defect - 10.0 * tail).max(0.0));
        }
    }
    Ok(worst)
}

pub fn kernel_tilde_split(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let mut worst = 0.0f64;
    for &pt in &ctx.scenario.lambda_samples {
        for i in 0..ctx.scenario.dim {
            let x = coordinate(ctx.scenario.dim, i);
            let kt_t = kernel_tilde(&ctx.theta, pt, &x, w)?;
            let px = ctx.factor_psi.eval(pt) * &x;
            let kt_l = kernel_tilde(&ctx.factor_lambda, pt, &px, w)?;
            let kt_p = kernel_tilde(&ctx.factor_psi, pt, &x, w)?;
            let rhs = &kt_l + &ctx.factor_lambda.expansion().apply(&kt_p)?;
            worst = worst.max((&kt_t - &rhs).coeff_max_norm());
        }
    }
    Ok(worst)
}

pub fn kernel_projection(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let p_lambda = proj_model(&ctx.factor_lambda, w)?;
    let mut worst = 0.0f64;
    for &pt in &ctx.scenario.lambda_samples {
        for i in 0..ctx.scenario.dim {
            let x = coordinate(ctx.scenario.dim, i);
            let (k_t, tail) = kernel(&ctx.theta, pt, &x, w)?;
            let (k_l, _) = kernel(&ctx.factor_lambda, pt, &x, w)?;
            let trim = (1e-13f64).max(tail);
            let a = (&p_lambda.apply(&k_t.trim_below(trim))? - &k_l).coeff_max_norm();

            let kt_t = kernel_tilde(&ctx.theta, pt, &x, w)?;
            let px = ctx.factor_psi.eval(pt) * &x;
            let kt_l = kernel_tilde(&ctx.factor_lambda, pt, &px, w)?;
            let b = (&p_lambda.apply(&kt_t)? - &kt_l).coeff_max_norm();
            worst = worst.max(a).max(b);
        }
    }
    Ok(worst)
}

pub fn proj_hermitian_idempotent(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let p = proj_model(&ctx.theta, w)?;
    let safe = w.radius() - p.margin();
    let herm = super::block_norm(&(p.matrix() - p.matrix().adjoint()), w, safe);
    let idem = super::block_norm(&(p.matrix() * p.matrix() - p.matrix()), w, safe);
    Ok(herm.max(idem))
}

pub fn kernel_density(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let rank = ctx.frame_theta.len();
    let mut rng = ctx.rng("window.kernel_density");
    let mut vectors: Vec<VecLaurent> = Vec::new();
    for _ in 0..2 * rank {
        let pt = linalg::random_disk_point(&mut rng, 0.7);
        let i = rng.gen_range(0..ctx.scenario.dim);
        let x = coordinate(ctx.scenario.dim, i);
        let (k, tail) = kernel(&ctx.theta, pt, &x, w)?;
        vectors.push(k.trim_below((1e-12f64).max(tail)));
    }
    let span = frame_matrix(w, &vectors)?;
    let q = linalg::orthonormal_columns(&span, 1e-8);
    Ok(linalg::span_defect(&q, &ctx.frame_theta_matrix()?))
}
