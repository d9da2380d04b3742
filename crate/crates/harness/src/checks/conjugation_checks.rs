//! Checks for the conjugation layer: axioms, the swap identities, the
//! product formulas, and the multiplier factorizations.

use mvtto_core::conjugation::{
    block_factorization, c_lambda_psi, c_theta, compose_antilinear_antilinear,
    compose_antilinear_linear, compress_antilinear, extract_multiplier, is_conjugation_on,
    j_star, j_tilde, tau_theta,
};
use mvtto_core::inner::InnerFunction;
use mvtto_core::linalg::{self, spectral_norm};
use mvtto_core::window::{
    frame_matrix, model_basis, mult_op, proj_model, shift_op, Window, WindowOperator,
};
use mvtto_core::Error as CoreError;

use crate::context::CheckContext;

pub fn jtilde_involution(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let jt = j_tilde(w, &ctx.gamma);
    let sq = compose_antilinear_antilinear(&jt, &jt)?;
    Ok(spectral_norm(
        &(sq.matrix() - WindowOperator::identity(w).matrix()),
    ))
}

pub fn jstar_shift(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let js = j_star(w, &ctx.gamma);
    let s = shift_op(w, 1);
    let lhs = s.matrix() * js.matrix();
    let rhs = js.matrix() * s.matrix().map(|z| z.conj());
    let commute = spectral_norm(&(lhs - rhs));
    // J* preserves the analytic half: apply to each analytic coordinate
    let mut stays = 0.0f64;
    for n in 0..=w.radius() as i64 {
        for i in 0..w.dim() {
            let e = w.extract(&w.basis_vector(n, i));
            let out = js.apply(&e)?;
            if out.lo() < 0 {
                stays = 1.0;
            }
        }
    }
    Ok(commute.max(stays))
}

pub fn ctheta_axioms(ctx: &CheckContext) -> Result<f64, CoreError> {
    let c = c_theta(&ctx.theta, &ctx.gamma, ctx.window)?;
    let report = is_conjugation_on(&c, &ctx.frame_theta_matrix()?);
    Ok(report.max_defect())
}

pub fn ctheta_involution_region(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let c = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let sq = compose_antilinear_antilinear(&c, &c)?;
    let safe = w.radius().saturating_sub(sq.margin());
    Ok(super::block_norm(
        &(sq.matrix() - WindowOperator::identity(w).matrix()),
        w,
        safe,
    ))
}

pub fn nonsymmetric_witness(_ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = Window::new(10, 2);
    let gamma = mvtto_core::laurent::GammaStructure::identity(2);
    let theta = InnerFunction::non_gamma_symmetric_example();
    let c = c_theta(&theta, &gamma, w)?;
    let frame = frame_matrix(w, &model_basis(&theta, w, 1e-10)?)?;
    Ok(is_conjugation_on(&c, &frame).involution)
}

pub fn clp_axioms(ctx: &CheckContext) -> Result<f64, CoreError> {
    let c = c_lambda_psi(&ctx.factor_lambda, &ctx.factor_psi, &ctx.gamma, ctx.window)?;
    let report = is_conjugation_on(&c, &ctx.frame_theta_matrix()?);
    Ok(report.max_defect())
}

pub fn ctheta_swap_1(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let ct = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let cl = c_theta(&ctx.factor_lambda, &ctx.gamma, w)?;
    let cp = c_theta(&ctx.factor_psi, &ctx.gamma, w)?;
    let mut worst = 0.0f64;
    for fl in &ctx.frame_lambda {
        for fp in &ctx.frame_psi {
            let arg = &fl.clone() + &ctx.factor_lambda.expansion().apply(fp)?;
            let lhs = ct.apply(&arg)?;
            let rhs = &cp.apply(fp)? + &ctx.factor_psi.expansion().apply(&cl.apply(fl)?)?;
            worst = worst.max((&lhs - &rhs).coeff_max_norm());
        }
    }
    Ok(worst)
}

pub fn ctheta_swap_2(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let ct = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let cl = c_theta(&ctx.factor_lambda, &ctx.gamma, w)?;
    let cp = c_theta(&ctx.factor_psi, &ctx.gamma, w)?;
    let mut worst = 0.0f64;
    for fl in &ctx.frame_lambda {
        for fp in &ctx.frame_psi {
            let arg = &fp.clone() + &ctx.factor_psi.expansion().apply(fl)?;
            let lhs = ct.apply(&arg)?;
            let rhs = &cl.apply(fl)? + &ctx.factor_lambda.expansion().apply(&cp.apply(fp)?)?;
            worst = worst.max((&lhs - &rhs).coeff_max_norm());
        }
    }
    Ok(worst)
}

fn product_sides(
    ctx: &CheckContext,
) -> Result<(WindowOperator, WindowOperator, WindowOperator, WindowOperator), CoreError> {
    let w = ctx.window;
    let clp = c_lambda_psi(&ctx.factor_lambda, &ctx.factor_psi, &ctx.gamma, w)?;
    let ct = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let lhs1 = compose_antilinear_antilinear(&clp, &ct)?;
    let lhs2 = compose_antilinear_antilinear(&ct, &clp)?;

    let p_lambda = proj_model(&ctx.factor_lambda, w)?;
    let p_psi = proj_model(&ctx.factor_psi, w)?;
    let m_psi_star = mult_op(&ctx.factor_psi.expansion().star(), w)?;
    let m_lambda_star = mult_op(&ctx.factor_lambda.expansion().star(), w)?;
    let m_psi = mult_op(ctx.factor_psi.expansion(), w)?;
    let m_lambda = mult_op(ctx.factor_lambda.expansion(), w)?;
    let rhs1 = p_lambda
        .compose(&m_psi_star)?
        .add(&m_lambda.compose(&p_psi)?)?;
    let rhs2 = p_psi
        .compose(&m_lambda_star)?
        .add(&m_psi.compose(&p_lambda)?)?;
    Ok((lhs1, rhs1, lhs2, rhs2))
}

pub fn product_formula_1(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (lhs1, rhs1, _, _) = product_sides(ctx)?;
    Ok(super::frame_defect(
        lhs1.matrix(),
        rhs1.matrix(),
        &ctx.frame_theta_matrix()?,
        false,
    ))
}

pub fn product_formula_2(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (_, _, lhs2, rhs2) = product_sides(ctx)?;
    Ok(super::frame_defect(
        lhs2.matrix(),
        rhs2.matrix(),
        &ctx.frame_theta_matrix()?,
        false,
    ))
}

pub fn product_unitary(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (lhs1, _, lhs2, _) = product_sides(ctx)?;
    let frame = ctx.frame_theta_matrix()?;
    let mut worst = 0.0f64;
    for op in [lhs1, lhs2] {
        let compressed = frame.adjoint() * op.matrix() * &frame;
        worst = worst.max(linalg::unitary_defect(&compressed));
    }
    Ok(worst)
}

pub fn ctheta_intertwine(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let c = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let s = shift_op(w, 1);
    let down = shift_op(w, -1);
    let lhs = s.matrix() * c.matrix();
    let rhs = c.matrix() * down.matrix().map(|z| z.conj());
    let safe = w.radius().saturating_sub(c.margin() + 1);
    Ok(super::block_norm(&(lhs - rhs), w, safe))
}

pub fn tau_unitary(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let tau = tau_theta(&ctx.theta, w)?;
    let gram = tau.adjoint().compose(&tau)?;
    let safe = w.radius().saturating_sub(2 * tau.margin());
    let unitary = super::block_norm(
        &(gram.matrix() - WindowOperator::identity(w).matrix()),
        w,
        safe,
    );

    let tilde = InnerFunction::from_expansion(
        ctx.theta.expansion().tilde(),
        ctx.theta.is_exact(),
        ctx.theta.tail(),
        1e-8,
    )?;
    let frame_theta = ctx.frame_theta_matrix()?;
    let frame_tilde = frame_matrix(w, &model_basis(&tilde, w, 1e-10)?)?;
    let image = tau.matrix() * &frame_theta;
    let image_frame = linalg::orthonormal_columns(&image, 1e-10);
    let range = linalg::span_defect(&image_frame, &frame_tilde);

    // C_Theta = J* tau_Theta on K_Theta
    let c = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let composed = compose_antilinear_linear(&j_star(w, &ctx.gamma), &tau)?;
    let factor = super::frame_defect(c.matrix(), composed.matrix(), &frame_theta, true);

    Ok(unitary.max(range).max(factor))
}

pub fn canonical_criterion(ctx: &CheckContext) -> Result<f64, CoreError> {
    // the compressed canonical matrix being unitary+symmetric must agree
    // with the axiom defects, both for a true conjugation and a broken one
    let mut worst = 0.0f64;
    {
        let c = c_theta(&ctx.theta, &ctx.gamma, ctx.window)?;
        let frame = ctx.frame_theta_matrix()?;
        let mv = compress_antilinear(&c, &frame, &frame);
        let direct = linalg::unitary_defect(&mv).max(linalg::symmetric_defect(&mv));
        let report = is_conjugation_on(&c, &frame);
        let axioms = report.isometry.max(report.involution);
        worst = worst.max((direct - axioms).abs());
    }
    {
        let w = Window::new(10, 2);
        let gamma = mvtto_core::laurent::GammaStructure::identity(2);
        let theta = InnerFunction::non_gamma_symmetric_example();
        let c = c_theta(&theta, &gamma, w)?;
        let frame = frame_matrix(w, &model_basis(&theta, w, 1e-10)?)?;
        let mv = compress_antilinear(&c, &frame, &frame);
        let direct = linalg::unitary_defect(&mv).max(linalg::symmetric_defect(&mv));
        let report = is_conjugation_on(&c, &frame);
        let axioms = report.isometry.max(report.involution);
        worst = worst.max((direct - axioms).abs());
    }
    Ok(worst)
}

pub fn multiplier_extraction(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let c = c_theta(&ctx.theta, &ctx.gamma, w)?;
    let ex = extract_multiplier(&c, &ctx.gamma, w, 1e-10)?;
    let expected = ctx.theta.expansion().shift(-1);
    let symbol_gap = (&ex.symbol - &expected).coeff_max_norm();
    Ok(ex
        .structure_defect
        .max(symbol_gap)
        .max(ex.unitary_defect)
        .max(ex.gamma_defect)
        .max(ex.dual_defect))
}

pub fn block_factorization_check(ctx: &CheckContext) -> Result<f64, CoreError> {
    let bf = block_factorization(
        &ctx.factor_lambda,
        &ctx.factor_psi,
        &ctx.gamma,
        ctx.window,
        1e-10,
    )?;
    Ok(bf
        .reconstruction_defect
        .max(bf.u.structure_defect)
        .max(bf.u.unitary_defect)
        .max(bf.u.gamma_defect)
        .max(bf.u_prime.structure_defect)
        .max(bf.v_unitary_defect)
        .max(bf.v_gamma_defect))
}
