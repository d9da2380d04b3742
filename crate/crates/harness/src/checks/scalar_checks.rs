//! Scalar regression: d = 1, θ = z^n reproduces the classical model-space
//! facts regardless of the scenario dimension.

use mvtto_core::conjugation::c_theta;
use mvtto_core::inner::InnerFunction;
use mvtto_core::laurent::{GammaStructure, MatLaurent, VecLaurent};
use mvtto_core::linalg::spectral_norm;
use mvtto_core::operators::{hankel, hankel_tilde, matto, model_shift};
use mvtto_core::window::{model_basis, Window};
use mvtto_core::{C64, Error as CoreError};
use nalgebra::DMatrix;

use crate::context::{general_symbol, CheckContext};

pub const SCALAR_DEGREE: usize = 4;

fn setup() -> (InnerFunction, Window) {
    let theta = InnerFunction::shift_power(1, SCALAR_DEGREE);
    let window = Window::new(3 * SCALAR_DEGREE + 8, 1);
    (theta, window)
}

pub fn basis(_ctx: &CheckContext) -> Result<f64, CoreError> {
    let (theta, w) = setup();
    let frames = model_basis(&theta, w, 1e-10)?;
    if frames.len() != SCALAR_DEGREE {
        return Ok(1.0);
    }
    let mut worst = 0.0f64;
    for (k, b) in frames.iter().enumerate() {
        let mono = VecLaurent::scalar(&[(k as i64, C64::new(1.0, 0.0))]);
        worst = worst.max((b - &mono).coeff_max_norm());
    }
    Ok(worst)
}

pub fn ctheta_flip(_ctx: &CheckContext) -> Result<f64, CoreError> {
    let (theta, w) = setup();
    let gamma = GammaStructure::identity(1);
    let c = c_theta(&theta, &gamma, w)?;
    let mut worst = 0.0f64;
    for k in 0..SCALAR_DEGREE {
        let e = VecLaurent::scalar(&[(k as i64, C64::new(1.0, 0.0))]);
        let out = c.apply(&e)?;
        let expected = VecLaurent::scalar(&[((SCALAR_DEGREE - 1 - k) as i64, C64::new(1.0, 0.0))]);
        worst = worst.max((&out - &expected).coeff_max_norm());
    }
    Ok(worst)
}

pub fn shift_nilpotent(_ctx: &CheckContext) -> Result<f64, CoreError> {
    let (theta, w) = setup();
    let (s, _) = model_shift(&theta, w)?;
    let n = SCALAR_DEGREE;
    let mut lower = DMatrix::<C64>::zeros(n, n);
    for k in 0..n - 1 {
        lower[(k + 1, k)] = C64::new(1.0, 0.0);
    }
    let structure = spectral_norm(&(s.compressed() - lower));
    let mut power = DMatrix::<C64>::identity(n, n);
    for _ in 0..n {
        power = &power * s.compressed();
    }
    Ok(structure.max(spectral_norm(&power)))
}

pub fn c_symmetric(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (theta, w) = setup();
    let gamma = GammaStructure::identity(1);
    let mut rng = ctx.rng("scalar.c_symmetric");
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let phi = general_symbol(&mut rng, 1, 2, 1.0);
        worst = worst.max(mvtto_core::operators::eq412_defect(
            &phi, &theta, &gamma, w,
        )?);
    }
    Ok(worst)
}

pub fn hankel_toeplitz(ctx: &CheckContext) -> Result<f64, CoreError> {
    let (theta, w) = setup();
    let mut rng = ctx.rng("scalar.hankel_toeplitz");
    let phi: MatLaurent = general_symbol(&mut rng, 1, 2, 1.0);
    let sym = theta.expansion().star().mul(&phi)?;
    let lhs = hankel_tilde(theta.expansion(), w)?.compose(&hankel(&sym, w)?)?;
    let rhs = matto(&phi, &theta, &theta, w)?;
    let frame = mvtto_core::window::frame_matrix(w, rhs.domain_frame())?;
    Ok(spectral_norm(
        &((lhs.matrix() - rhs.full().matrix()) * frame),
    ))
}
