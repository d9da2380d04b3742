//! Finite sections of the space operators on `L²(C^d)`.
//!
//! A [`Window`] holds the truncated coefficient space: frequencies
//! `n = −N … N`, each a block of size `d`, for a total dimension
//! `D = (2N+1)·d`. A [`WindowOperator`] is a dense `D × D` matrix together
//! with its *exactness margin* `m`: on inputs whose band keeps distance `m`
//! from the window edge the finite section agrees exactly with the operator
//! it truncates. Margins add under composition and are enforced on `apply`.
//!
//! On top of that sit the model-space constructions: the half-space
//! projections, block-Toeplitz multiplication operators, the model projection
//! `P_Θ = P₊ − Θ P₊ Θ*`, orthonormal model-space frames, and the reproducing
//! kernels of `K_Θ`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::laurent::{MatLaurent, VecLaurent};
use crate::linalg;
use crate::C64;

/// Truncated coefficient space: frequencies `−N … N` in blocks of size `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    n_radius: usize,
    dim: usize,
}

impl Window {
    pub fn new(n_radius: usize, dim: usize) -> Self {
        Self { n_radius, dim }
    }

    pub fn radius(&self) -> usize {
        self.n_radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total dimension `D = (2N+1)·d`.
    pub fn total_dim(&self) -> usize {
        (2 * self.n_radius + 1) * self.dim
    }

    /// Basis index of `(frequency, component)`: `(n+N)·d + i`.
    pub fn index(&self, n: i64, i: usize) -> usize {
        debug_assert!(n.unsigned_abs() as usize <= self.n_radius && i < self.dim);
        ((n + self.n_radius as i64) as usize) * self.dim + i
    }

    /// Inverse of [`index`](Self::index).
    pub fn frequency_of(&self, idx: usize) -> (i64, usize) {
        let block = idx / self.dim;
        (block as i64 - self.n_radius as i64, idx % self.dim)
    }

    /// Coefficient vector of a polynomial; errors if its band leaves the window.
    pub fn embed(&self, f: &VecLaurent) -> Result<DVector<C64>> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch(f.dim(), self.dim));
        }
        let n = self.n_radius as i64;
        if !f.is_zero() && (f.lo() < -n || f.hi() > n) {
            return Err(Error::OutsideExactnessMargin {
                lo: f.lo(),
                hi: f.hi(),
                margin: 0,
                radius: self.n_radius,
            });
        }
        let mut v = DVector::zeros(self.total_dim());
        for (k, c) in f.terms() {
            for i in 0..self.dim {
                v[self.index(k, i)] = c[i];
            }
        }
        Ok(v)
    }

    /// Reads a coefficient vector back into a (normalized) polynomial.
    pub fn extract(&self, v: &DVector<C64>) -> VecLaurent {
        let n = self.n_radius as i64;
        let coeffs: Vec<DVector<C64>> = (-n..=n)
            .map(|k| {
                DVector::from_fn(self.dim, |i, _| v[self.index(k, i)])
            })
            .collect();
        VecLaurent::new(self.dim, -n, coeffs).unwrap()
    }

    /// The window coordinate `e_i z^n`.
    pub fn basis_vector(&self, n: i64, i: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.total_dim());
        v[self.index(n, i)] = C64::new(1.0, 0.0);
        v
    }
}

/// Which half of the frequency axis a projection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfSpace {
    /// `n ≥ 0` (the Hardy part).
    Analytic,
    /// `n < 0`.
    CoAnalytic,
}

/// Dense finite section with its exactness margin.
#[derive(Debug, Clone)]
pub struct WindowOperator {
    window: Window,
    matrix: DMatrix<C64>,
    margin: usize,
}

impl WindowOperator {
    pub fn from_matrix(window: Window, matrix: DMatrix<C64>, margin: usize) -> Self {
        debug_assert_eq!(matrix.nrows(), window.total_dim());
        debug_assert_eq!(matrix.ncols(), window.total_dim());
        Self {
            window,
            matrix,
            margin,
        }
    }

    pub fn identity(window: Window) -> Self {
        let d = window.total_dim();
        Self::from_matrix(window, DMatrix::identity(d, d), 0)
    }

    pub fn zero(window: Window) -> Self {
        let d = window.total_dim();
        Self::from_matrix(window, DMatrix::zeros(d, d), 0)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// The frequency band on which this section is exact.
    pub fn safe_band(&self) -> (i64, i64) {
        let n = self.window.n_radius as i64;
        let m = self.margin as i64;
        (-n + m, n - m)
    }

    /// Applies the section; errors when the input band leaves the exactness
    /// region `[−N+m, N−m]`.
    pub fn apply(&self, f: &VecLaurent) -> Result<VecLaurent> {
        let (lo, hi) = self.safe_band();
        if !f.is_zero() && (f.lo() < lo || f.hi() > hi) {
            return Err(Error::OutsideExactnessMargin {
                lo: f.lo(),
                hi: f.hi(),
                margin: self.margin,
                radius: self.window.n_radius,
            });
        }
        let v = self.window.embed(f)?;
        Ok(self.window.extract(&(&self.matrix * v)))
    }

    /// `self ∘ rhs` (apply `rhs` first); margins add.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.window != rhs.window {
            return Err(Error::WindowMismatch);
        }
        Ok(Self::from_matrix(
            self.window,
            &self.matrix * &rhs.matrix,
            self.margin + rhs.margin,
        ))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.window, self.matrix.adjoint(), self.margin)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_matrix(self.window, &self.matrix * s, self.margin)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.window != rhs.window {
            return Err(Error::WindowMismatch);
        }
        Ok(Self::from_matrix(
            self.window,
            &self.matrix + &rhs.matrix,
            self.margin.max(rhs.margin),
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(C64::new(-1.0, 0.0)))
    }

    /// Spectral norm of `self − rhs` restricted to the columns of frequencies
    /// in `[lo, hi]` (all rows kept).
    pub fn column_defect(&self, rhs: &Self, lo: i64, hi: i64) -> Result<f64> {
        if self.window != rhs.window {
            return Err(Error::WindowMismatch);
        }
        let diff = &self.matrix - &rhs.matrix;
        let w = self.window;
        let cols: Vec<usize> = (lo..=hi)
            .flat_map(|n| (0..w.dim()).map(move |i| w.index(n, i)))
            .collect();
        let mut sub = DMatrix::zeros(diff.nrows(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            sub.set_column(j, &diff.column(c).into_owned());
        }
        Ok(linalg::spectral_norm(&sub))
    }
}

/// `P₊` (keep `n ≥ 0`) or `P₋ = I − P₊`; margin 0.
pub fn proj_halfspace(window: Window, half: HalfSpace) -> WindowOperator {
    let d = window.total_dim();
    let mut m = DMatrix::<C64>::zeros(d, d);
    for idx in 0..d {
        let (n, _) = window.frequency_of(idx);
        let keep = match half {
            HalfSpace::Analytic => n >= 0,
            HalfSpace::CoAnalytic => n < 0,
        };
        if keep {
            m[(idx, idx)] = C64::new(1.0, 0.0);
        }
    }
    WindowOperator::from_matrix(window, m, 0)
}

/// Multiplication by `z^k`; margin `|k|`.
pub fn shift_op(window: Window, k: i64) -> WindowOperator {
    mult_op(&MatLaurent::monomial_identity(window.dim(), k), window)
        .expect("monomial fits any window")
}

/// The flip `f(z) ↦ f(conj z)`: coefficient reversal `a_n ↦ a_{−n}`; margin 0.
pub fn flip_op(window: Window) -> WindowOperator {
    let d = window.total_dim();
    let n = window.radius() as i64;
    let mut m = DMatrix::<C64>::zeros(d, d);
    for freq in -n..=n {
        for i in 0..window.dim() {
            m[(window.index(-freq, i), window.index(freq, i))] = C64::new(1.0, 0.0);
        }
    }
    WindowOperator::from_matrix(window, m, 0)
}

/// Block-Toeplitz section of the multiplication operator `M_F`:
/// block `(m, n) = F_{m−n}`; margin `max(|lo|, |hi|)` of the symbol band.
pub fn mult_op(f: &MatLaurent, window: Window) -> Result<WindowOperator> {
    if f.dim() != window.dim() {
        return Err(Error::DimensionMismatch(f.dim(), window.dim()));
    }
    let n = window.radius() as i64;
    let margin = if f.is_zero() {
        0
    } else {
        f.lo().unsigned_abs().max(f.hi().unsigned_abs()) as usize
    };
    if margin > window.radius() {
        return Err(Error::InsufficientWindow {
            radius: window.radius(),
            needed: margin,
        });
    }
    let d = window.dim();
    let mut m = DMatrix::<C64>::zeros(window.total_dim(), window.total_dim());
    for (k, c) in f.terms() {
        for col in -n..=n {
            let row = col + k;
            if row < -n || row > n {
                continue;
            }
            for i in 0..d {
                for j in 0..d {
                    m[(window.index(row, i), window.index(col, j))] += c[(i, j)];
                }
            }
        }
    }
    Ok(WindowOperator::from_matrix(window, m, margin))
}

/// Model projection `P_Θ = P₊ − M_Θ P₊ M_{Θ*}`; margin `2·deg Θ`.
pub fn proj_model(theta: &InnerFunction, window: Window) -> Result<WindowOperator> {
    let deg = theta.degree();
    if window.radius() < 2 * deg {
        return Err(Error::InsufficientWindow {
            radius: window.radius(),
            needed: 2 * deg,
        });
    }
    let p_plus = proj_halfspace(window, HalfSpace::Analytic);
    let m_theta = mult_op(theta.expansion(), window)?;
    let m_theta_star = mult_op(&theta.expansion().star(), window)?;
    p_plus.sub(&m_theta.compose(&p_plus)?.compose(&m_theta_star)?)
}

/// Orthonormal frame of `K_Θ` on the window.
///
/// Projects the coordinate monomials with frequencies `0 … N − 2·deg Θ`
/// through [`proj_model`] and orthonormalizes the results with the pivoted
/// Gram–Schmidt of [`linalg::orthonormal_columns`]; the rank is decided by
/// the relative cutoff `tol`.
pub fn model_basis(theta: &InnerFunction, window: Window, tol: f64) -> Result<Vec<VecLaurent>> {
    let p = proj_model(theta, window)?;
    let top = window.radius() - p.margin();
    let d = window.dim();
    let mut cols = DMatrix::<C64>::zeros(window.total_dim(), (top + 1) * d);
    let mut j = 0;
    for n in 0..=top as i64 {
        for i in 0..d {
            cols.set_column(j, &p.matrix().column(window.index(n, i)).into_owned());
            j += 1;
        }
    }
    let q = linalg::orthonormal_columns(&cols, tol);
    // unit vectors; clipping below 1e-13 removes rounding junk outside the
    // mathematical band of K_Θ without disturbing orthonormality
    Ok((0..q.ncols())
        .map(|k| window.extract(&q.column(k).into_owned()).trim_below(1e-13))
        .collect())
}

/// Stacks frame vectors as the columns of a `D × r` matrix.
pub fn frame_matrix(window: Window, frames: &[VecLaurent]) -> Result<DMatrix<C64>> {
    let mut m = DMatrix::zeros(window.total_dim(), frames.len());
    for (j, f) in frames.iter().enumerate() {
        m.set_column(j, &window.embed(f)?);
    }
    Ok(m)
}

/// Truncated reproducing kernel `k_λ^Θ x` of `K_Θ` and its tail bound.
///
/// `k_λ^Θ(z) = (1−conj(λ)z)^{-1} (I − Θ(z)Θ(λ)*)`, expanded geometrically on
/// `[0, N]`. The reported tail bound is `|λ|^{N+1} / (1−|λ|)`. Requires
/// `|λ| ≤ 0.9`.
pub fn kernel(
    theta: &InnerFunction,
    lambda: C64,
    x: &DVector<C64>,
    window: Window,
) -> Result<(VecLaurent, f64)> {
    let r = lambda.norm();
    if r > 0.9 {
        return Err(Error::PointNearBoundary(r));
    }
    let d = theta.dim();
    if x.nrows() != d {
        return Err(Error::DimensionMismatch(x.nrows(), d));
    }
    let n = window.radius();
    let theta_lambda_star = theta.eval(lambda).adjoint();
    let defect = &MatLaurent::monomial_identity(d, 0)
        - &theta
            .expansion()
            .mul(&MatLaurent::constant(theta_lambda_star))?;
    let geom_coeffs: Vec<DMatrix<C64>> = (0..=n)
        .map(|j| DMatrix::identity(d, d) * lambda.conj().powi(j as i32))
        .collect();
    let geom = MatLaurent::new(d, 0, geom_coeffs)?;
    let product = geom.mul(&defect)?.truncate_band(0, n as i64);
    let vec = product.apply(&VecLaurent::monomial(0, x.clone()))?;
    let tail = r.powi(n as i32 + 1) / (1.0 - r);
    Ok((vec, tail))
}

/// The difference-quotient kernel `z ↦ (Θ(z) − Θ(λ)) (z−λ)^{-1} x`,
/// computed by synthetic division of the expansion. Requires `|λ| ≤ 0.9`.
pub fn kernel_tilde(
    theta: &InnerFunction,
    lambda: C64,
    x: &DVector<C64>,
    _window: Window,
) -> Result<VecLaurent> {
    let r = lambda.norm();
    if r > 0.9 {
        return Err(Error::PointNearBoundary(r));
    }
    let d = theta.dim();
    if x.nrows() != d {
        return Err(Error::DimensionMismatch(x.nrows(), d));
    }
    let g = theta.expansion().hi();
    if g == 0 {
        return Ok(VecLaurent::zero(d));
    }
    // Θ(z) − Θ(λ) = (z−λ) Q(z): Q_{g−1} = P_g, Q_{k−1} = P_k + λ Q_k.
    let mut quotient = vec![DMatrix::<C64>::zeros(d, d); g as usize];
    quotient[(g - 1) as usize] = theta.expansion().coeff(g);
    for k in (1..g).rev() {
        quotient[(k - 1) as usize] =
            theta.expansion().coeff(k) + &quotient[k as usize] * lambda;
    }
    let q = MatLaurent::new(d, 0, quotient)?;
    q.apply(&VecLaurent::monomial(0, x.clone()))
}

/// Splits `f ∈ K_Θ` (`Θ = ΛΨ`) into `P_Λ f ⊕ Λ P_Ψ Λ* f`.
///
/// Errors with [`Error::NotInModelSpace`] when the `P_Θ` residual of `f`
/// exceeds `1e-10 · max(1, ‖f‖)`.
pub fn decomp_split(
    lambda: &InnerFunction,
    psi: &InnerFunction,
    f: &VecLaurent,
    window: Window,
) -> Result<(VecLaurent, VecLaurent)> {
    let theta = lambda.product_with(psi)?;
    let p_theta = proj_model(&theta, window)?;
    let residual = (&p_theta.apply(f)? - f).norm();
    if residual > 1e-10 * f.norm().max(1.0) {
        return Err(Error::NotInModelSpace(residual));
    }
    let f_lambda = proj_model(lambda, window)?.apply(f)?;
    let m_lambda = mult_op(lambda.expansion(), window)?;
    let m_lambda_star = mult_op(&lambda.expansion().star(), window)?;
    let second = m_lambda
        .compose(&proj_model(psi, window)?)?
        .compose(&m_lambda_star)?
        .apply(f)?;
    Ok((f_lambda, second))
}
