//! Independent dense oracle: multiplication sections assembled from boundary
//! samples at 4096 points plus explicit half-space projections, compared
//! entrywise against the band-placed constructions.

use mvtto_core::laurent::MatLaurent;
use mvtto_core::linalg::spectral_norm;
use mvtto_core::operators::{hankel, hankel_tilde, matto};
use mvtto_core::window::{mult_op, proj_halfspace, proj_model, HalfSpace, Window};
use mvtto_core::{C64, Error as CoreError};
use nalgebra::DMatrix;

use crate::context::CheckContext;

pub const ORACLE_NODES: usize = 4096;

/// `M_Φ` rebuilt from scratch: coefficients by quadrature of the boundary
/// values, blocks placed on the diagonals.
pub fn sampled_mult(phi: &MatLaurent, w: Window, nodes: usize) -> DMatrix<C64> {
    let d = w.dim();
    let n = w.radius() as i64;
    let samples: Vec<DMatrix<C64>> = (0..nodes)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / nodes as f64;
            phi.eval_boundary(C64::new(t.cos(), t.sin()))
        })
        .collect();
    let mut coeffs: Vec<DMatrix<C64>> = Vec::with_capacity((4 * n + 1) as usize);
    for freq in -2 * n..=2 * n {
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (k, s) in samples.iter().enumerate() {
            let t = std::f64::consts::TAU * k as f64 * freq as f64 / nodes as f64;
            acc += s * C64::new(t.cos(), -t.sin());
        }
        coeffs.push(acc * C64::new(1.0 / nodes as f64, 0.0));
    }
    let block = |k: i64| -> &DMatrix<C64> { &coeffs[(k + 2 * n) as usize] };
    let mut out = DMatrix::<C64>::zeros(w.total_dim(), w.total_dim());
    for row in -n..=n {
        for col in -n..=n {
            let b = block(row - col);
            for i in 0..d {
                for j in 0..d {
                    out[(w.index(row, i), w.index(col, j))] = b[(i, j)];
                }
            }
        }
    }
    out
}

fn sampled_proj_model(ctx: &CheckContext) -> Result<DMatrix<C64>, CoreError> {
    let w = ctx.window;
    let p_plus = proj_halfspace(w, HalfSpace::Analytic);
    let mt = sampled_mult(ctx.theta.expansion(), w, ORACLE_NODES);
    let mts = sampled_mult(&ctx.theta.expansion().star(), w, ORACLE_NODES);
    Ok(p_plus.matrix() - &mt * p_plus.matrix() * mts)
}

pub fn mult(ctx: &CheckContext) -> Result<f64, CoreError> {
    let direct = mult_op(&ctx.symbol_general, ctx.window)?;
    let oracle = sampled_mult(&ctx.symbol_general, ctx.window, ORACLE_NODES);
    Ok(spectral_norm(&(direct.matrix() - oracle)))
}

pub fn proj_model_oracle(ctx: &CheckContext) -> Result<f64, CoreError> {
    let direct = proj_model(&ctx.theta, ctx.window)?;
    let oracle = sampled_proj_model(ctx)?;
    Ok(spectral_norm(&(direct.matrix() - oracle)))
}

pub fn hankel_oracle(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let direct = hankel(&ctx.symbol_general, w)?;
    let p_plus = proj_halfspace(w, HalfSpace::Analytic);
    let p_minus = proj_halfspace(w, HalfSpace::CoAnalytic);
    let oracle =
        p_minus.matrix() * sampled_mult(&ctx.symbol_general, w, ORACLE_NODES) * p_plus.matrix();
    Ok(spectral_norm(&(direct.matrix() - oracle)))
}

pub fn hankel_tilde_oracle(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let direct = hankel_tilde(&ctx.symbol_general, w)?;
    let p_plus = proj_halfspace(w, HalfSpace::Analytic);
    let p_minus = proj_halfspace(w, HalfSpace::CoAnalytic);
    let oracle =
        p_plus.matrix() * sampled_mult(&ctx.symbol_general, w, ORACLE_NODES) * p_minus.matrix();
    Ok(spectral_norm(&(direct.matrix() - oracle)))
}

pub fn matto_oracle(ctx: &CheckContext) -> Result<f64, CoreError> {
    let w = ctx.window;
    let direct = matto(&ctx.symbol_general, &ctx.factor_lambda, &ctx.theta, w)?;
    let oracle = sampled_proj_model(ctx)? * sampled_mult(&ctx.symbol_general, w, ORACLE_NODES);
    Ok(spectral_norm(&(direct.full().matrix() - oracle)))
}
