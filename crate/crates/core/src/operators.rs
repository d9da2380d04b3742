//! Truncated Toeplitz and Hankel operators with matrix symbols.
//!
//! `A_Φ^{Θ₁,Θ₂} = P_{Θ₂} M_Φ` restricted to `K_{Θ₁}` is kept both as a
//! full-window section and compressed to orthonormal model-space frames,
//! where operator identities become small dense matrix comparisons. The
//! Hankel pieces are `H_Φ = P₋ M_Φ P₊` and `H~_Ψ = P₊ M_Ψ P₋`.
//!
//! The symbol transform implements
//! `C_{Θ₂} A_Φ C_{Θ₁} = A_Ψ` with `Ψ = Γ Θ₂* Φ Θ₁ Γ`, and `defect_sides`
//! evaluates both sides of the commutator-defect identity
//! `(A_Φ^{Θ,Λ} C_{Λ,Ψ} − C_{Λ,Ψ} A_{Φ*}^{Λ,Θ}) f
//!  = (H~_Λ H_Φ C_Θ − H~_Θ H_Φ C_Λ P_Λ) f` on `K_Θ`.

use nalgebra::DMatrix;

use crate::conjugation::{
    c_lambda_psi, c_theta, compose_antilinear_antilinear, compose_antilinear_linear,
    compose_linear_antilinear, AntilinearOperator,
};
use crate::error::{Error, Result};
use crate::inner::{check_gamma_symmetric, InnerFunction};
use crate::laurent::{GammaStructure, MatLaurent, VecLaurent};
use crate::linalg::spectral_norm;
use crate::window::{
    frame_matrix, model_basis, mult_op, proj_halfspace, proj_model, HalfSpace, Window,
    WindowOperator,
};
use crate::C64;

/// Rank cutoff used for the model-space frames backing compressions.
const FRAME_TOL: f64 = 1e-10;

/// A matrix-valued (asymmetric) truncated Toeplitz operator
/// `f ↦ P_{Θ₂}(Φ f)`, `f ∈ K_{Θ₁}`.
#[derive(Debug, Clone)]
pub struct TruncatedToeplitz {
    full: WindowOperator,
    domain: Vec<VecLaurent>,
    codomain: Vec<VecLaurent>,
    compressed: DMatrix<C64>,
}

impl TruncatedToeplitz {
    /// The full-window section `P_{Θ₂} M_Φ` (domain restriction not applied).
    pub fn full(&self) -> &WindowOperator {
        &self.full
    }

    /// Orthonormal frame of the domain `K_{Θ₁}`.
    pub fn domain_frame(&self) -> &[VecLaurent] {
        &self.domain
    }

    /// Orthonormal frame of the codomain `K_{Θ₂}`.
    pub fn codomain_frame(&self) -> &[VecLaurent] {
        &self.codomain
    }

    /// The `rank₂ × rank₁` matrix on the frames.
    pub fn compressed(&self) -> &DMatrix<C64> {
        &self.compressed
    }

    pub fn apply(&self, f: &VecLaurent) -> Result<VecLaurent> {
        self.full.apply(f)
    }

    /// Spectral norm of the compressed matrix.
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.compressed)
    }
}

/// Builds `A_Φ^{Θ₁,Θ₂}` on the window.
pub fn matto(
    phi: &MatLaurent,
    theta1: &InnerFunction,
    theta2: &InnerFunction,
    window: Window,
) -> Result<TruncatedToeplitz> {
    let full = proj_model(theta2, window)?.compose(&mult_op(phi, window)?)?;
    let domain = model_basis(theta1, window, FRAME_TOL)?;
    let codomain = model_basis(theta2, window, FRAME_TOL)?;
    let f1 = frame_matrix(window, &domain)?;
    let f2 = frame_matrix(window, &codomain)?;
    let compressed = f2.adjoint() * full.matrix() * f1;
    Ok(TruncatedToeplitz {
        full,
        domain,
        codomain,
        compressed,
    })
}

/// The model shift and backward shift `(S_Θ, S_Θ*) = (A_z^Θ, A_{conj z}^Θ)`.
pub fn model_shift(
    theta: &InnerFunction,
    window: Window,
) -> Result<(TruncatedToeplitz, TruncatedToeplitz)> {
    let d = theta.dim();
    let fwd = matto(
        &MatLaurent::monomial_identity(d, 1),
        theta,
        theta,
        window,
    )?;
    let bwd = matto(
        &MatLaurent::monomial_identity(d, -1),
        theta,
        theta,
        window,
    )?;
    Ok((fwd, bwd))
}

/// Hankel operator `H_Φ = P₋ M_Φ P₊` (domain `H²`, range `H²₋`).
pub fn hankel(phi: &MatLaurent, window: Window) -> Result<WindowOperator> {
    proj_halfspace(window, HalfSpace::CoAnalytic)
        .compose(&mult_op(phi, window)?)?
        .compose(&proj_halfspace(window, HalfSpace::Analytic))
}

/// Reverse Hankel operator `H~_Ψ = P₊ M_Ψ P₋` (domain `H²₋`, range `H²`).
pub fn hankel_tilde(psi: &MatLaurent, window: Window) -> Result<WindowOperator> {
    proj_halfspace(window, HalfSpace::Analytic)
        .compose(&mult_op(psi, window)?)?
        .compose(&proj_halfspace(window, HalfSpace::CoAnalytic))
}

/// The conjugated symbol `Ψ = Γ Θ₂* Φ Θ₁ Γ = (Θ₂* Φ Θ₁)_Γ`, which satisfies
/// `C_{Θ₂} A_Φ^{Θ₁,Θ₂} C_{Θ₁} = A_Ψ^{Θ₁,Θ₂}` for gamma-symmetric `Θ₁, Θ₂`.
pub fn symbol_transform(
    phi: &MatLaurent,
    theta1: &InnerFunction,
    theta2: &InnerFunction,
    gamma: &GammaStructure,
) -> Result<MatLaurent> {
    for t in [theta1, theta2] {
        let defect = check_gamma_symmetric(t.expansion(), gamma);
        if defect > 1e-10 + 4.0 * t.tail() {
            return Err(Error::NotGammaSymmetric(defect));
        }
    }
    theta2
        .expansion()
        .star()
        .mul(phi)?
        .mul(theta1.expansion())
        .map(|g| g.gamma_conj(gamma))
}

/// `‖C_Θ A_Φ^Θ C_Θ − A_{Φ*}^Θ‖` measured on the `K_Θ` frame.
///
/// Zero (to tolerance) whenever `Φ` is gamma-symmetric and commutes with `Θ`,
/// and always in the scalar case; nonzero in general.
pub fn eq412_defect(
    phi: &MatLaurent,
    theta: &InnerFunction,
    gamma: &GammaStructure,
    window: Window,
) -> Result<f64> {
    let sym = check_gamma_symmetric(theta.expansion(), gamma);
    if sym > 1e-10 + 4.0 * theta.tail() {
        return Err(Error::NotGammaSymmetric(sym));
    }
    let a = matto(phi, theta, theta, window)?;
    let a_star = matto(&phi.star(), theta, theta, window)?;
    let c = c_theta(theta, gamma, window)?;
    let sandwiched =
        compose_antilinear_antilinear(&c, &compose_linear_antilinear(a.full(), &c)?)?;
    let frame = frame_matrix(window, a.domain_frame())?;
    let diff = (sandwiched.matrix() - a_star.full().matrix()) * frame;
    Ok(spectral_norm(&diff))
}

/// The two sides of the commutator-defect identity as antilinear operators
/// on `K_Θ`, built once so they can be applied to many vectors.
///
/// Left: `A_Φ^{Θ,Λ} C_{Λ,Ψ} − C_{Λ,Ψ} A_{Φ*}^{Λ,Θ} P_Λ`.
/// Right: `H~_Λ H_Φ C_Θ − H~_Θ H_Φ C_Λ P_Λ`.
/// Requires `Θ = ΛΨ = ΨΛ` with all three factors gamma-symmetric, which is
/// validated by the `C_{Λ,Ψ}` construction.
pub fn defect_operators(
    phi: &MatLaurent,
    lambda: &InnerFunction,
    psi: &InnerFunction,
    gamma: &GammaStructure,
    window: Window,
) -> Result<(AntilinearOperator, AntilinearOperator)> {
    let theta = lambda.product_with(psi)?;
    let p_lambda = proj_model(lambda, window)?;
    let p_theta = proj_model(&theta, window)?;
    let m_phi = mult_op(phi, window)?;
    let m_phi_star = mult_op(&phi.star(), window)?;
    let clp = c_lambda_psi(lambda, psi, gamma, window)?;

    // A_Φ^{Θ,Λ} C_{Λ,Ψ}
    let lhs1 = compose_linear_antilinear(&p_lambda.compose(&m_phi)?, &clp)?;
    // C_{Λ,Ψ} A_{Φ*}^{Λ,Θ} P_Λ
    let lhs2 = compose_antilinear_linear(
        &clp,
        &p_theta.compose(&m_phi_star)?.compose(&p_lambda)?,
    )?;
    let lhs = lhs1.sub(&lhs2)?;

    let h_phi = hankel(phi, window)?;
    let rhs1 = compose_linear_antilinear(
        &hankel_tilde(lambda.expansion(), window)?.compose(&h_phi)?,
        &c_theta(&theta, gamma, window)?,
    )?;
    let rhs2 = compose_linear_antilinear(
        &hankel_tilde(theta.expansion(), window)?.compose(&h_phi)?,
        &compose_antilinear_linear(&c_theta(lambda, gamma, window)?, &p_lambda)?,
    )?;
    let rhs = rhs1.sub(&rhs2)?;
    Ok((lhs, rhs))
}

/// Evaluates both sides of the commutator-defect identity on one `f ∈ K_Θ`.
pub fn defect_sides(
    phi: &MatLaurent,
    lambda: &InnerFunction,
    psi: &InnerFunction,
    gamma: &GammaStructure,
    window: Window,
    f: &VecLaurent,
) -> Result<(VecLaurent, VecLaurent)> {
    let (lhs, rhs) = defect_operators(phi, lambda, psi, gamma, window)?;
    Ok((lhs.apply(f)?, rhs.apply(f)?))
}
