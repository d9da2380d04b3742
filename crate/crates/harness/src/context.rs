//! Materialized scenario: the generated pair, symbols, window and frames
//! shared by the checks, plus per-check RNG substreams.
//!
//! Randomness comes from `ChaCha8Rng`: the scenario seed selects the key and
//! a 64-bit FNV-1a hash of the check id selects the stream, so every check
//! draws from its own substream and the execution order cannot change any
//! outcome.

use mvtto_core::inner::{random_commuting_pair, InnerFunction, PairCertificate, PairSpec};
use mvtto_core::laurent::{GammaStructure, MatLaurent, VecLaurent};
use mvtto_core::linalg;
use mvtto_core::window::{frame_matrix, model_basis, Window};
use mvtto_core::{C64, Error as CoreError};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scenario::{Scenario, WindowChoice};

/// 64-bit FNV-1a, used to map check ids to RNG streams.
pub fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A fresh deterministic substream for `(seed, label)`.
pub fn substream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// Band demands that drive automatic window sizing.
#[derive(Debug, Clone, Copy)]
pub struct Demand {
    /// Degree of Λ.
    pub gl: usize,
    /// Degree of Ψ.
    pub gp: usize,
    /// Degree of Θ = ΛΨ.
    pub gt: usize,
    /// Band radius of the general random symbol.
    pub b_general: usize,
    /// Band radius of the structured (symmetric, commuting) symbol.
    pub b_structured: usize,
}

/// Everything a check needs, generated once per scenario.
pub struct CheckContext {
    pub scenario: Scenario,
    pub gamma: GammaStructure,
    pub factor_lambda: InnerFunction,
    pub factor_psi: InnerFunction,
    pub theta: InnerFunction,
    pub certificate: PairCertificate,
    pub window: Window,
    /// Band-limited random symbol with no imposed structure.
    pub symbol_general: MatLaurent,
    /// Gamma-symmetric symbol commuting with Λ and Ψ.
    pub symbol_structured: MatLaurent,
    pub frame_theta: Vec<VecLaurent>,
    pub frame_lambda: Vec<VecLaurent>,
    pub frame_psi: Vec<VecLaurent>,
}

impl CheckContext {
    /// Generates the pair and symbols, then sizes the window from `demand_to_radius`
    /// over the selected checks (plus the spec'd safety pad of 4).
    pub fn build(
        scenario: &Scenario,
        demands: impl Fn(&Demand) -> usize,
    ) -> Result<Self, CoreError> {
        let spec = PairSpec {
            dim: scenario.dim,
            degrees: scenario.degrees,
            strategy: scenario.strategy,
            zero_radius: scenario.zero_radius,
            trunc: scenario.rational_trunc(),
        };
        let (factor_lambda, factor_psi, certificate) =
            random_commuting_pair(scenario.seed, &spec)?;
        let theta = factor_lambda.product_with(&factor_psi)?;
        let gamma = GammaStructure::identity(scenario.dim);

        let mut rng = substream(scenario.seed, "symbol");
        let symbol_general = general_symbol(&mut rng, scenario.dim, 2, scenario.symbol_scale);
        let symbol_structured = structured_symbol(
            &mut rng,
            &factor_lambda,
            &factor_psi,
            scenario.symbol_scale,
        );

        let demand = Demand {
            gl: factor_lambda.degree(),
            gp: factor_psi.degree(),
            gt: theta.degree(),
            b_general: band_radius(&symbol_general),
            b_structured: band_radius(&symbol_structured),
        };
        let radius = match scenario.window {
            WindowChoice::Fixed(n) => n,
            // never below what the shared frames themselves need
            WindowChoice::Auto => (demands(&demand) + 4).max(3 * demand.gt + 2),
        };
        let window = Window::new(radius, scenario.dim);

        let frame_theta = model_basis(&theta, window, 1e-10)?;
        let frame_lambda = model_basis(&factor_lambda, window, 1e-10)?;
        let frame_psi = model_basis(&factor_psi, window, 1e-10)?;

        Ok(Self {
            scenario: scenario.clone(),
            gamma,
            factor_lambda,
            factor_psi,
            theta,
            certificate,
            window,
            symbol_general,
            symbol_structured,
            frame_theta,
            frame_lambda,
            frame_psi,
        })
    }

    pub fn rng(&self, check_id: &str) -> ChaCha8Rng {
        substream(self.scenario.seed, check_id)
    }

    pub fn frame_theta_matrix(&self) -> Result<DMatrix<C64>, CoreError> {
        frame_matrix(self.window, &self.frame_theta)
    }

    pub fn frame_lambda_matrix(&self) -> Result<DMatrix<C64>, CoreError> {
        frame_matrix(self.window, &self.frame_lambda)
    }

    /// At least `count` unit vectors of `K_Θ`: the frame itself plus random
    /// unit combinations from the check's substream.
    pub fn model_space_vectors(
        &self,
        check_id: &str,
        count: usize,
    ) -> Result<Vec<VecLaurent>, CoreError> {
        let mut out = self.frame_theta.clone();
        let mut rng = self.rng(check_id);
        while out.len() < count {
            let coeffs = linalg::random_complex_matrix(&mut rng, self.frame_theta.len(), 1);
            let mut f = VecLaurent::zero(self.scenario.dim);
            for (j, b) in self.frame_theta.iter().enumerate() {
                f = &f + &b.scale(coeffs[(j, 0)]);
            }
            let n = f.norm();
            if n > 1e-8 {
                out.push(f.scale(C64::new(1.0 / n, 0.0)));
            }
        }
        Ok(out)
    }
}

fn band_radius(f: &MatLaurent) -> usize {
    if f.is_zero() {
        0
    } else {
        f.lo().unsigned_abs().max(f.hi().unsigned_abs()) as usize
    }
}

/// Random symbol on the band `[−radius, radius]`, entries standard complex
/// Gaussian scaled by `scale`.
pub fn general_symbol<R: Rng>(rng: &mut R, dim: usize, radius: i64, scale: f64) -> MatLaurent {
    let mut acc = MatLaurent::zero(dim);
    for n in -radius..=radius {
        let m = linalg::random_complex_matrix(rng, dim, dim) * C64::new(scale, 0.0);
        acc = &acc + &MatLaurent::monomial(n, m);
    }
    acc
}

/// Gamma-symmetric symbol commuting with both factors: a Laurent polynomial
/// in `z`, `Λ`, `Λ*`, `Ψ`, `Ψ*` with the bands recentered near zero.
pub fn structured_symbol<R: Rng>(
    rng: &mut R,
    lambda: &InnerFunction,
    psi: &InnerFunction,
    scale: f64,
) -> MatLaurent {
    let dim = lambda.dim();
    let l = lambda.expansion();
    let p = psi.expansion();
    let recenter = |f: &MatLaurent| {
        let mid = (f.lo() + f.hi()) / 2;
        f.shift(-mid)
    };
    let pieces = [
        MatLaurent::monomial_identity(dim, 0),
        MatLaurent::monomial_identity(dim, 1),
        MatLaurent::monomial_identity(dim, -1),
        recenter(l),
        recenter(&l.star()),
        recenter(p),
        recenter(&p.star()),
    ];
    let mut acc = MatLaurent::zero(dim);
    for piece in pieces {
        let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        acc = &acc + &piece.scale(c * C64::new(scale, 0.0));
    }
    acc
}
