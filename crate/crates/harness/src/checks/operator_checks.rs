//! Checks for truncated Toeplitz and Hankel operators, the symbol transform,
//! and the commutator-defect identity.

use mvtto_core::conjugation::{
    c_theta, compose_antilinear_antilinear, compose_linear_antilinear,
};
use mvtto_core::inner::InnerFunction;
use mvtto_core::laurent::{GammaStructure, MatLaurent, VecLaurent};
use mvtto_core::linalg::spectral_norm;
use mvtto_core::operators::{
    defect_operators, defect_sides, eq412_defect, hankel, hankel_tilde, matto, model_shift,
    symbol_transform,
};
use mvtto_core::window::{
    mult_op, proj_halfspace, proj_model, HalfSpace, Window, WindowOperator,
};
use mvtto_core::{C64, Error as CoreError};
use nalgebra::DMatrix;

use crate::context::CheckContext;

pub fn matto_adjoint(ctx: &CheckContext) -> Result<f64, CoreError> {
    let a = matto(
        &ctx.symbol_general,
        &ctx.factor_lambda,
        &ctx.theta,
        ctx.window,
    )?;
    let b = matto(
        &ctx.symbol_general.star(),
        &ctx.theta,
        &ctx.factor_lambda,
        ctx.window,
    )?;
    Ok(spectral_norm(
        &(a.compressed().adjoint() - b.compressed()),
    ))
}

pub fn model_shift_check(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (s, s_star) = model_shift(&ctx.theta, ctx.window)?;
    let contraction = (s.norm() - 1.0).max(0.0);
    let adjoint_gap = spectral_norm(&(s_star.compressed() - s.compressed().adjoint()));
    let r = s.compressed().nrows();
    let gram = s.compressed().adjoint() * s.compressed();
    let psd = (DMatrix::identity(r, r) - gram)
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .min(0.0)
        .abs();
    Ok(contraction.max(adjoint_gap).max(psd))
}

pub fn symbol_transform_identity(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let theta1 = &ctx.factor_lambda;
    let theta2 = &ctx.theta;
    let psi = symbol_transform(&ctx.symbol_general, theta1, theta2, &ctx.gamma)?;
    let a_phi = matto(&ctx.symbol_general, theta1, theta2, w)?;
    let a_psi = matto(&psi, theta1, theta2, w)?;
    let c1 = c_theta(theta1, &ctx.gamma, w)?;
    let c2 = c_theta(theta2, &ctx.gamma, w)?;
    let sandwiched =
        compose_antilinear_antilinear(&c2, &compose_linear_antilinear(a_phi.full(), &c1)?)?;
    let frame = mvtto_core::window::frame_matrix(w, a_phi.domain_frame())?;
    Ok(spectral_norm(
        &((sandwiched.matrix() - a_psi.full().matrix()) * frame),
    ))
}

pub fn symbol_transform_alt(ctx: &CheckContext) -> Result<f64, CoreError> {
    let theta1 = &ctx.factor_lambda;
    let theta2 = &ctx.theta;
    let psi = symbol_transform(&ctx.symbol_general, theta1, theta2, &ctx.gamma)?;
    let alt = theta2
        .expansion()
        .mul(&ctx.symbol_general.gamma_conj(&ctx.gamma))?
        .mul(&theta1.expansion().star())?;
    Ok((&psi - &alt).coeff_max_norm())
}

pub fn symbol_transform_roundtrip(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let theta1 = &ctx.factor_lambda;
    let theta2 = &ctx.theta;
    let psi = symbol_transform(&ctx.symbol_general, theta1, theta2, &ctx.gamma)?;
    let psi2 = symbol_transform(&psi, theta1, theta2, &ctx.gamma)?;
    let a_phi = matto(&ctx.symbol_general, theta1, theta2, w)?;
    let a_psi2 = matto(&psi2, theta1, theta2, w)?;
    let frame = mvtto_core::window::frame_matrix(w, a_phi.domain_frame())?;
    Ok(spectral_norm(
        &((a_psi2.full().matrix() - a_phi.full().matrix()) * frame),
    ))
}

pub fn hankel_analytic_vanishes(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let analytic = ctx.symbol_general.analytic_part();
    let vanish = spectral_norm(hankel(&analytic, w)?.matrix());
    // the iff direction: a symbol with a genuine negative band has H != 0
    let negative = &ctx.symbol_general - &analytic;
    let witness = if negative.is_zero() {
        0.0
    } else {
        let h = hankel(&ctx.symbol_general, w)?;
        if spectral_norm(h.matrix()) < 1e-6 {
            1.0
        } else {
            0.0
        }
    };
    Ok(vanish.max(witness))
}

pub fn hankel_factorization(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let sym = ctx.theta.expansion().star().mul(&ctx.symbol_general)?;
    let lhs = hankel_tilde(ctx.theta.expansion(), w)?.compose(&hankel(&sym, w)?)?;
    let rhs = matto(&ctx.symbol_general, &ctx.theta, &ctx.theta, w)?;
    Ok(super::frame_defect(
        lhs.matrix(),
        rhs.full().matrix(),
        &ctx.frame_theta_matrix()?,
        false,
    ))
}

fn proj_pieces(
    ctx: &CheckContext,
) -> Result<(WindowOperator, WindowOperator, WindowOperator, WindowOperator), CoreError> {
    let w = ctx.window;
    let p_theta = proj_model(&ctx.theta, w)?;
    let p_plus = proj_halfspace(w, HalfSpace::Analytic);
    let p_minus = proj_halfspace(w, HalfSpace::CoAnalytic);
    let m_t = mult_op(ctx.theta.expansion(), w)?;
    let m_ts = mult_op(&ctx.theta.expansion().star(), w)?;
    let core = m_t.compose(&p_minus)?.compose(&m_ts)?;
    Ok((p_theta, p_plus, p_minus, core))
}

fn column_gap(
    ctx: &CheckContext,
    p_theta: &WindowOperator,
    candidate: &WindowOperator,
) -> Result<f64, CoreError> {
    let n = ctx.window.radius() as i64;
    let margin = candidate.margin().max(p_theta.margin()) as i64;
    p_theta.column_defect(candidate, -n + margin, n - margin)
}

pub fn proj_identity_1(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (p_theta, _, p_minus, core) = proj_pieces(ctx)?;
    column_gap(ctx, &p_theta, &core.sub(&p_minus)?)
}

pub fn proj_identity_2(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (p_theta, p_plus, _, core) = proj_pieces(ctx)?;
    column_gap(ctx, &p_theta, &core.compose(&p_plus)?)
}

pub fn proj_identity_3(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let (p_theta, p_plus, p_minus, core) = proj_pieces(ctx)?;
    let m_l = mult_op(ctx.factor_lambda.expansion(), w)?;
    let m_ls = mult_op(&ctx.factor_lambda.expansion().star(), w)?;
    let first = p_plus
        .compose(&m_l.compose(&p_minus)?.compose(&m_ls)?)?
        .add(
            &m_l.compose(&proj_model(&ctx.factor_psi, w)?)?
                .compose(&m_ls)?,
        )?;
    let second = p_plus.compose(&core)?;
    Ok(column_gap(ctx, &p_theta, &first)?.max(column_gap(ctx, &p_theta, &second)?))
}

pub fn eq412_symmetric_commuting(ctx: &CheckContext) -> Result<f64, CoreError> {
    eq412_defect(&ctx.symbol_structured, &ctx.theta, &ctx.gamma, ctx.window)
}

pub fn eq412_counterexample(_ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = Window::new(12, 2);
    let gamma = GammaStructure::identity(2);
    let theta = InnerFunction::diagonal_powers(&[1, 2]);
    let mut e12 = DMatrix::<C64>::zeros(2, 2);
    e12[(0, 1)] = C64::new(1.0, 0.0);
    eq412_defect(&MatLaurent::constant(e12), &theta, &gamma, w)
}

pub fn intermediate_identity_1(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let p_lambda = proj_model(&ctx.factor_lambda, w)?;
    let p_psi = proj_model(&ctx.factor_psi, w)?;
    let p_theta = proj_model(&ctx.theta, w)?;
    let m_phi = mult_op(&ctx.symbol_general, w)?;
    let m_l = mult_op(ctx.factor_lambda.expansion(), w)?;
    let m_ls = mult_op(&ctx.factor_lambda.expansion().star(), w)?;
    let lhs = p_lambda.compose(&m_phi)?.compose(&p_theta)?;
    let rhs = p_lambda
        .compose(&m_phi)?
        .compose(&p_lambda)?
        .add(
            &p_lambda
                .compose(&m_phi)?
                .compose(&m_l)?
                .compose(&p_psi)?
                .compose(&m_ls)?
                .compose(&p_theta)?,
        )?;
    Ok(super::frame_defect(
        lhs.matrix(),
        rhs.matrix(),
        &ctx.frame_theta_matrix()?,
        false,
    ))
}

pub fn intermediate_identity_2(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let p_lambda = proj_model(&ctx.factor_lambda, w)?;
    let p_psi = proj_model(&ctx.factor_psi, w)?;
    let p_theta = proj_model(&ctx.theta, w)?;
    let m_phi_star = mult_op(&ctx.symbol_general.star(), w)?;
    let m_l = mult_op(ctx.factor_lambda.expansion(), w)?;
    let m_ls = mult_op(&ctx.factor_lambda.expansion().star(), w)?;
    let lhs = p_theta.compose(&m_phi_star)?;
    let rhs = p_lambda.compose(&m_phi_star)?.add(
        &m_l.compose(&p_psi)?
            .compose(&m_ls)?
            .compose(&m_phi_star)?
            .compose(&p_lambda)?,
    )?;
    Ok(super::frame_defect(
        lhs.matrix(),
        rhs.matrix(),
        &ctx.frame_lambda_matrix()?,
        false,
    ))
}

pub fn defect_lhs_eq_rhs(ctx: &CheckContext) -> Result<f64, CoreError> {
    let phi_norm = ctx.symbol_structured.sup_norm_sampled(64);
    let vectors = ctx.model_space_vectors("defect.lhs_eq_rhs", 20)?;
    let (lhs_op, rhs_op) = defect_operators(
        &ctx.symbol_structured,
        &ctx.factor_lambda,
        &ctx.factor_psi,
        &ctx.gamma,
        ctx.window,
    )?;
    let mut worst = 0.0f64;
    for f in &vectors {
        let lhs = lhs_op.apply(f)?;
        let rhs = rhs_op.apply(f)?;
        worst = worst.max((&lhs - &rhs).norm() / (1.0 + phi_norm * f.norm()));
    }
    Ok(worst)
}

/// The shipped instance with a visibly nonzero difference operator:
/// d = 1, Λ = Ψ = z, Φ = conj(z), f = z.
pub fn defect_nonzero_witness(_ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = Window::new(18, 1);
    let gamma = GammaStructure::identity(1);
    let lambda = InnerFunction::shift_power(1, 1);
    let psi = InnerFunction::shift_power(1, 1);
    let phi = MatLaurent::monomial_identity(1, -1);
    let f = VecLaurent::monomial(1, nalgebra::DVector::from_element(1, C64::new(1.0, 0.0)));
    let (lhs, rhs) = defect_sides(&phi, &lambda, &psi, &gamma, w, &f)?;
    // witness only counts when the identity itself holds on this instance
    if (&lhs - &rhs).norm() > 1e-9 {
        return Ok(0.0);
    }
    Ok(lhs.norm())
}
