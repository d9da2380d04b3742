//! Checks for the Laurent arithmetic layer, run on small dedicated windows.

use mvtto_core::conjugation::j_star;
use mvtto_core::laurent::{fourier_truncate, MatLaurent, VecLaurent};
use mvtto_core::linalg::{self, spectral_norm};
use mvtto_core::window::{mult_op, Window};
use mvtto_core::{C64, Error as CoreError};
use nalgebra::DVector;
use rand::Rng;

use crate::context::{general_symbol, CheckContext};

fn random_laurent<R: Rng>(rng: &mut R, dim: usize) -> MatLaurent {
    general_symbol(rng, dim, 3, 1.0)
}

pub fn star_involution(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.star_involution");
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let f = random_laurent(&mut rng, ctx.scenario.dim);
        worst = worst.max((&f.star().star() - &f).coeff_max_norm());
    }
    Ok(worst)
}

pub fn gamma_involution(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.gamma_involution");
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let f = random_laurent(&mut rng, ctx.scenario.dim);
        let back = f.gamma_conj(&ctx.gamma).gamma_conj(&ctx.gamma);
        worst = worst.max((&back - &f).coeff_max_norm());
    }
    Ok(worst)
}

pub fn gamma_symmetric_tilde(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.gamma_symmetric_tilde");
    let raw = random_laurent(&mut rng, ctx.scenario.dim);
    let symmetrized = MatLaurent::new(
        ctx.scenario.dim,
        raw.lo(),
        raw.terms()
            .map(|(_, c)| (c + c.transpose()) * C64::new(0.5, 0.0))
            .collect(),
    )?;
    let mut worst = 0.0f64;
    for f in [
        &symmetrized,
        ctx.theta.expansion(),
        ctx.factor_lambda.expansion(),
        ctx.factor_psi.expansion(),
    ] {
        let diff = (&f.gamma_conj(&ctx.gamma).flip() - &f.tilde()).coeff_max_norm();
        worst = worst.max(diff);
    }
    Ok(worst)
}

pub fn parseval(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.parseval");
    let dim = ctx.scenario.dim;
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let coeffs: Vec<DVector<C64>> = (0..5)
            .map(|_| linalg::random_complex_matrix(&mut rng, dim, 1).column(0).into_owned())
            .collect();
        let f = VecLaurent::new(dim, -2, coeffs)?;
        let ip = f.inner(&f)?;
        worst = worst.max((ip.re - f.norm_squared()).abs() + ip.im.abs());
    }
    Ok(worst)
}

pub fn hs_star(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.hs_star");
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let f = random_laurent(&mut rng, ctx.scenario.dim);
        let g = random_laurent(&mut rng, ctx.scenario.dim);
        let lhs = f.hs_inner(&g)?;
        let rhs = g.star().hs_inner(&f.star())?;
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    Ok(worst)
}

pub fn mul_quadrature(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.mul_quadrature");
    let dim = ctx.scenario.dim;
    let f = general_symbol(&mut rng, dim, 2, 1.0);
    let g = general_symbol(&mut rng, dim, 2, 1.0);
    let product = f.mul(&g)?;
    let radius = product.hi().abs().max(product.lo().abs()).max(1) as usize;
    let (oracle, _) = fourier_truncate(|z| f.eval_boundary(z) * g.eval_boundary(z), dim, radius);
    Ok((&oracle - &product).coeff_max_norm())
}

/// `J* M_F = M_F J*` holds when every coefficient is gamma-real.
pub fn jm_gamma_real(ctx: &CheckContext) -> Result<f64, CoreError> {
    let mut rng = ctx.rng("laurent.jm_gamma_real");
    let dim = ctx.scenario.dim;
    let w = Window::new(8, dim);
    let real_coeffs = MatLaurent::new(
        dim,
        -2,
        (0..5)
            .map(|_| {
                nalgebra::DMatrix::from_fn(dim, dim, |_, _| {
                    C64::new(rng.gen_range(-1.0..1.0f64), 0.0)
                })
            })
            .collect(),
    )?;
    let m = mult_op(&real_coeffs, w)?;
    let js = j_star(w, &ctx.gamma);
    let lhs = m.matrix() * js.matrix();
    let rhs = js.matrix() * m.matrix().map(|z| z.conj());
    Ok(spectral_norm(&(lhs - rhs)))
}

/// Gamma-symmetry alone is not enough for (JM): `F = iI` flips the sign.
pub fn jm_symmetric_witness(ctx: &CheckContext) -> Result<f64, CoreError> {
    let dim = ctx.scenario.dim;
    let w = Window::new(4, dim);
    let f = MatLaurent::constant(nalgebra::DMatrix::identity(dim, dim) * C64::new(0.0, 1.0));
    let m = mult_op(&f, w)?;
    let js = j_star(w, &ctx.gamma);
    let lhs = m.matrix() * js.matrix();
    let rhs = js.matrix() * m.matrix().map(|z| z.conj());
    Ok(spectral_norm(&(lhs - rhs)))
}
