//! Matrix- and vector-valued Laurent polynomials over `C^d`, the conjugation
//! structure on the coefficient space, and the transforms used everywhere
//! else: adjoint symbol `F*`, tilde `F~`, gamma conjugate `F_Γ`, both inner
//! products and Fourier truncation by quadrature.
//!
//! Bands are tracked exactly: no operation here truncates silently. The only
//! place a tail is cut is [`fourier_truncate`], which reports its own tail
//! estimate. The zero element is normalized to an empty coefficient list so
//! equality is structural.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, spectral_norm};
use crate::C64;

const ONE: C64 = C64::new(1.0, 0.0);

fn is_zero_c(z: &C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// A conjugation on `C^d`, encoded by a symmetric unitary `J` through
/// `Γx = J · conj(x)`. Every conjugation on `C^d` has this form, and
/// `J = I` is plain entrywise conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaStructure {
    j: DMatrix<C64>,
}

impl GammaStructure {
    /// Builds the conjugation from its symmetric unitary matrix.
    pub fn new(j: DMatrix<C64>) -> Result<Self> {
        if j.nrows() != j.ncols() {
            return Err(Error::DimensionMismatch(j.nrows(), j.ncols()));
        }
        let u = linalg::unitary_defect(&j);
        if u > 1e-14 {
            return Err(Error::NotUnitary(u));
        }
        let s = linalg::symmetric_defect(&j);
        if s > 1e-14 {
            return Err(Error::NotSymmetric(s));
        }
        Ok(Self { j })
    }

    /// Entrywise conjugation on `C^d` (`J = I`).
    pub fn identity(dim: usize) -> Self {
        Self {
            j: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.j
    }

    /// `Γx = J conj(x)`.
    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        &self.j * x.map(|z| z.conj())
    }

    /// The antilinear sandwich `Γ M Γ` as a linear matrix: `J conj(M) conj(J)`.
    ///
    /// `conj(J) = J*` because `J` is symmetric unitary, so the sandwich is an
    /// involution on matrices.
    pub fn sandwich(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        &self.j * m.map(|z| z.conj()) * self.j.map(|z| z.conj())
    }
}

/// Matrix-coefficient Laurent polynomial `F(z) = Σ F_n z^n` on a tight band.
#[derive(Debug, Clone, PartialEq)]
pub struct MatLaurent {
    dim: usize,
    lo: i64,
    coeffs: Vec<DMatrix<C64>>,
}

impl MatLaurent {
    /// Builds from the lowest frequency and a run of consecutive coefficients.
    ///
    /// All coefficients must be `dim × dim`; exactly-zero edge coefficients
    /// are trimmed so the band is tight.
    pub fn new(dim: usize, lo: i64, coeffs: Vec<DMatrix<C64>>) -> Result<Self> {
        for c in &coeffs {
            if c.nrows() != dim || c.ncols() != dim {
                return Err(Error::DimensionMismatch(c.nrows(), dim));
            }
        }
        let mut f = Self { dim, lo, coeffs };
        f.normalize();
        Ok(f)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    /// The constant function `z ↦ m`.
    pub fn constant(m: DMatrix<C64>) -> Self {
        let dim = m.nrows();
        Self::new(dim, 0, vec![m]).expect("square constant")
    }

    /// `m · z^n`.
    pub fn monomial(n: i64, m: DMatrix<C64>) -> Self {
        let dim = m.nrows();
        Self::new(dim, n, vec![m]).expect("square monomial")
    }

    /// `I_d · z^n`.
    pub fn monomial_identity(dim: usize, n: i64) -> Self {
        Self::monomial(n, DMatrix::identity(dim, dim))
    }

    /// Scalar Laurent polynomial (d = 1) from `(frequency, value)` pairs.
    pub fn scalar(terms: &[(i64, C64)]) -> Self {
        let mut f = Self::zero(1);
        for &(n, v) in terms {
            f = &f + &Self::monomial(n, DMatrix::from_element(1, 1, v));
        }
        f
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.iter().all(is_zero_c)) {
            self.coeffs.pop();
        }
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| c.iter().all(is_zero_c))
            .count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Tight band `[lo, hi]`; the zero element reports `[0, 0]`.
    pub fn band(&self) -> (i64, i64) {
        if self.is_zero() {
            (0, 0)
        } else {
            (self.lo, self.lo + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn lo(&self) -> i64 {
        self.band().0
    }

    pub fn hi(&self) -> i64 {
        self.band().1
    }

    /// Coefficient of `z^n` (zero outside the band).
    pub fn coeff(&self, n: i64) -> DMatrix<C64> {
        let idx = n - self.lo;
        if !self.is_zero() && idx >= 0 && (idx as usize) < self.coeffs.len() {
            self.coeffs[idx as usize].clone()
        } else {
            DMatrix::zeros(self.dim, self.dim)
        }
    }

    /// Iterator over `(frequency, coefficient)` pairs on the stored band.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &DMatrix<C64>)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out.normalize();
        out
    }

    /// Multiplies by `z^k` (shifts the band).
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.lo += k;
        }
        out
    }

    /// Pointwise product `(FG)(z) = F(z)G(z)`: coefficient convolution
    /// `(FG)_m = Σ_k F_k G_{m−k}`, band `[F.lo+G.lo, F.hi+G.hi]`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.dim));
        }
        let lo = self.lo + rhs.lo;
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut acc = vec![DMatrix::<C64>::zeros(self.dim, self.dim); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a * b;
            }
        }
        Self::new(self.dim, lo, acc)
    }

    /// Applies `F` to a vector polynomial: `(Ff)(z) = F(z)f(z)`.
    pub fn apply(&self, f: &VecLaurent) -> Result<VecLaurent> {
        if self.dim != f.dim {
            return Err(Error::DimensionMismatch(self.dim, f.dim));
        }
        if self.is_zero() || f.is_zero() {
            return Ok(VecLaurent::zero(self.dim));
        }
        let lo = self.lo + f.lo;
        let len = self.coeffs.len() + f.coeffs.len() - 1;
        let mut acc = vec![DVector::<C64>::zeros(self.dim); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in f.coeffs.iter().enumerate() {
                acc[i + j] += a * b;
            }
        }
        VecLaurent::new(self.dim, lo, acc)
    }

    /// Adjoint symbol `F*(z) = F(z)*` on the circle: `(F*)_n = (F_{−n})*`.
    pub fn star(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let hi = self.hi();
        let coeffs = self.coeffs.iter().rev().map(|c| c.adjoint()).collect();
        Self {
            dim: self.dim,
            lo: -hi,
            coeffs,
        }
    }

    /// `F~(z) = F(conj z)*`: coefficientwise adjoint, band preserved.
    pub fn tilde(&self) -> Self {
        Self {
            dim: self.dim,
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.adjoint()).collect(),
        }
    }

    /// The substitution `z ↦ conj(z)`: band negated, coefficients untouched.
    pub fn flip(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let hi = self.hi();
        Self {
            dim: self.dim,
            lo: -hi,
            coeffs: self.coeffs.iter().rev().cloned().collect(),
        }
    }

    /// Gamma conjugate `F_Γ(z) = Γ F(z) Γ`: `(F_Γ)_m = Γ F_{−m} Γ`.
    pub fn gamma_conj(&self, gamma: &GammaStructure) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let hi = self.hi();
        let coeffs = self
            .coeffs
            .iter()
            .rev()
            .map(|c| gamma.sandwich(c))
            .collect();
        Self {
            dim: self.dim,
            lo: -hi,
            coeffs,
        }
    }

    /// Hilbert–Schmidt inner product `⟨F, G⟩ = Σ_n tr(G_n* F_n)`.
    pub fn hs_inner(&self, rhs: &Self) -> Result<C64> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (n, f) in self.terms() {
            let g = rhs.coeff(n);
            for j in 0..self.dim {
                for i in 0..self.dim {
                    acc += f[(i, j)] * g[(i, j)].conj();
                }
            }
        }
        Ok(acc)
    }

    /// Evaluation at a point of the disk; requires an analytic band.
    pub fn eval(&self, lambda: C64) -> Result<DMatrix<C64>> {
        if self.lo() < 0 {
            return Err(Error::NotAnalytic(self.lo()));
        }
        let mut acc = DMatrix::<C64>::zeros(self.dim, self.dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + c;
        }
        acc *= lambda.powi(self.lo() as i32);
        Ok(acc)
    }

    /// Evaluation on the unit circle (negative frequencies allowed).
    pub fn eval_boundary(&self, z: C64) -> DMatrix<C64> {
        let mut acc = DMatrix::<C64>::zeros(self.dim, self.dim);
        for (n, c) in self.terms() {
            acc += c * z.powi(n as i32);
        }
        acc
    }

    /// Largest coefficient norm (spectral), the coefficientwise max norm.
    pub fn coeff_max_norm(&self) -> f64 {
        self.coeffs.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// Largest boundary-sample norm over `samples` equispaced points.
    pub fn sup_norm_sampled(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / samples as f64;
                spectral_norm(&self.eval_boundary(C64::new(t.cos(), t.sin())))
            })
            .fold(0.0, f64::max)
    }

    /// Largest coefficient norm over the strictly negative frequencies.
    pub fn negative_tail_norm(&self) -> f64 {
        self.terms()
            .filter(|(n, _)| *n < 0)
            .map(|(_, c)| spectral_norm(c))
            .fold(0.0, f64::max)
    }

    /// Keeps only frequencies `n ≥ 0`.
    pub fn analytic_part(&self) -> Self {
        self.truncate_band(0, self.hi().max(0))
    }

    /// Drops edge coefficients with norm at most `threshold` (band stays tight).
    pub fn trim_below(&self, threshold: f64) -> Self {
        let kept: Vec<_> = self.terms().collect();
        let first = kept.iter().position(|(_, c)| spectral_norm(c) > threshold);
        let last = kept.iter().rposition(|(_, c)| spectral_norm(c) > threshold);
        match (first, last) {
            (Some(a), Some(b)) => Self::new(
                self.dim,
                kept[a].0,
                kept[a..=b].iter().map(|(_, c)| (*c).clone()).collect(),
            )
            .unwrap(),
            _ => Self::zero(self.dim),
        }
    }

    /// Restricts to the band `[lo, hi]`.
    pub fn truncate_band(&self, lo: i64, hi: i64) -> Self {
        let kept: Vec<(i64, DMatrix<C64>)> = self
            .terms()
            .filter(|(n, _)| *n >= lo && *n <= hi)
            .map(|(n, c)| (n, c.clone()))
            .collect();
        match kept.first().map(|(n, _)| *n) {
            None => Self::zero(self.dim),
            Some(l) => Self::new(self.dim, l, kept.into_iter().map(|(_, c)| c).collect()).unwrap(),
        }
    }
}

impl std::ops::Add for &MatLaurent {
    type Output = MatLaurent;
    fn add(self, rhs: &MatLaurent) -> MatLaurent {
        assert_eq!(self.dim, rhs.dim, "laurent add: dimension mismatch");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        let mut acc = vec![DMatrix::<C64>::zeros(self.dim, self.dim); (hi - lo + 1) as usize];
        for (n, c) in self.terms() {
            acc[(n - lo) as usize] += c;
        }
        for (n, c) in rhs.terms() {
            acc[(n - lo) as usize] += c;
        }
        MatLaurent::new(self.dim, lo, acc).unwrap()
    }
}

impl std::ops::Sub for &MatLaurent {
    type Output = MatLaurent;
    fn sub(self, rhs: &MatLaurent) -> MatLaurent {
        self + &rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl std::fmt::Display for MatLaurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:.4}· z^{}", c, n)?;
        }
        Ok(())
    }
}

/// Vector-coefficient Laurent polynomial `f(z) = Σ a_n z^n`, an element of
/// the truncated `L^2(C^d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecLaurent {
    dim: usize,
    lo: i64,
    coeffs: Vec<DVector<C64>>,
}

impl VecLaurent {
    pub fn new(dim: usize, lo: i64, coeffs: Vec<DVector<C64>>) -> Result<Self> {
        for c in &coeffs {
            if c.nrows() != dim {
                return Err(Error::DimensionMismatch(c.nrows(), dim));
            }
        }
        let mut f = Self { dim, lo, coeffs };
        f.normalize();
        Ok(f)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    /// `x · z^n`.
    pub fn monomial(n: i64, x: DVector<C64>) -> Self {
        let dim = x.nrows();
        Self::new(dim, n, vec![x]).unwrap()
    }

    /// The constant coordinate vector `e_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut x = DVector::zeros(dim);
        x[i] = ONE;
        Self::monomial(0, x)
    }

    /// Scalar (d = 1) polynomial from `(frequency, value)` pairs.
    pub fn scalar(terms: &[(i64, C64)]) -> Self {
        let mut f = Self::zero(1);
        for &(n, v) in terms {
            f = &f + &Self::monomial(n, DVector::from_element(1, v));
        }
        f
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.iter().all(is_zero_c)) {
            self.coeffs.pop();
        }
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| c.iter().all(is_zero_c))
            .count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn band(&self) -> (i64, i64) {
        if self.is_zero() {
            (0, 0)
        } else {
            (self.lo, self.lo + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn lo(&self) -> i64 {
        self.band().0
    }

    pub fn hi(&self) -> i64 {
        self.band().1
    }

    pub fn coeff(&self, n: i64) -> DVector<C64> {
        let idx = n - self.lo;
        if !self.is_zero() && idx >= 0 && (idx as usize) < self.coeffs.len() {
            self.coeffs[idx as usize].clone()
        } else {
            DVector::zeros(self.dim)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &DVector<C64>)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out.normalize();
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.lo += k;
        }
        out
    }

    /// `L^2` inner product `⟨f, g⟩ = Σ_n ⟨a_n, b_n⟩`, linear in `f`.
    pub fn inner(&self, rhs: &Self) -> Result<C64> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (n, a) in self.terms() {
            let b = rhs.coeff(n);
            for i in 0..self.dim {
                acc += a[i] * b[i].conj();
            }
        }
        Ok(acc)
    }

    /// Parseval sum `Σ_n ‖a_n‖²`, accumulated in the same order as
    /// [`inner`](Self::inner) so `inner(f, f).re` matches it exactly.
    pub fn norm_squared(&self) -> f64 {
        let mut acc = 0.0;
        for (_, a) in self.terms() {
            for i in 0..self.dim {
                acc += a[i].re * a[i].re + a[i].im * a[i].im;
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn eval(&self, lambda: C64) -> Result<DVector<C64>> {
        if self.lo() < 0 {
            return Err(Error::NotAnalytic(self.lo()));
        }
        let mut acc = DVector::<C64>::zeros(self.dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + c;
        }
        acc *= lambda.powi(self.lo() as i32);
        Ok(acc)
    }

    pub fn eval_boundary(&self, z: C64) -> DVector<C64> {
        let mut acc = DVector::<C64>::zeros(self.dim);
        for (n, c) in self.terms() {
            acc += c * z.powi(n as i32);
        }
        acc
    }

    pub fn coeff_max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn trim_below(&self, threshold: f64) -> Self {
        let kept: Vec<_> = self.terms().collect();
        let first = kept.iter().position(|(_, c)| c.norm() > threshold);
        let last = kept.iter().rposition(|(_, c)| c.norm() > threshold);
        match (first, last) {
            (Some(a), Some(b)) => Self::new(
                self.dim,
                kept[a].0,
                kept[a..=b].iter().map(|(_, c)| (*c).clone()).collect(),
            )
            .unwrap(),
            _ => Self::zero(self.dim),
        }
    }
}

impl std::ops::Add for &VecLaurent {
    type Output = VecLaurent;
    fn add(self, rhs: &VecLaurent) -> VecLaurent {
        assert_eq!(self.dim, rhs.dim, "laurent add: dimension mismatch");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().max(rhs.hi());
        let mut acc = vec![DVector::<C64>::zeros(self.dim); (hi - lo + 1) as usize];
        for (n, c) in self.terms() {
            acc[(n - lo) as usize] += c;
        }
        for (n, c) in rhs.terms() {
            acc[(n - lo) as usize] += c;
        }
        VecLaurent::new(self.dim, lo, acc).unwrap()
    }
}

impl std::ops::Sub for &VecLaurent {
    type Output = VecLaurent;
    fn sub(self, rhs: &VecLaurent) -> VecLaurent {
        self + &rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl std::fmt::Display for VecLaurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:.4}· z^{}", c, n)?;
        }
        Ok(())
    }
}

/// Fourier truncation of a boundary sampler to the band `[−n_radius, n_radius]`.
///
/// Uses the trapezoid rule on `max(4(2N+1), 4096)` equispaced circle points,
/// which is exact (to rounding) for band-limited samplers well inside the
/// node count. Returns the truncation together with a tail estimate: the
/// largest coefficient norm at `|n| ∈ {N−1, N}`.
pub fn fourier_truncate<S>(sampler: S, dim: usize, n_radius: usize) -> (MatLaurent, f64)
where
    S: Fn(C64) -> DMatrix<C64>,
{
    let nodes = (4 * (2 * n_radius + 1)).max(4096);
    let samples: Vec<DMatrix<C64>> = (0..nodes)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / nodes as f64;
            sampler(C64::new(t.cos(), t.sin()))
        })
        .collect();
    let n = n_radius as i64;
    let mut coeffs = Vec::with_capacity(2 * n_radius + 1);
    for m in -n..=n {
        let mut acc = DMatrix::<C64>::zeros(dim, dim);
        for (k, s) in samples.iter().enumerate() {
            let t = std::f64::consts::TAU * (k as f64) * (m as f64) / nodes as f64;
            acc += s * C64::new(t.cos(), -t.sin());
        }
        acc *= C64::new(1.0 / nodes as f64, 0.0);
        coeffs.push(acc);
    }
    let tail = [-n, -n + 1, n - 1, n]
        .iter()
        .map(|m| spectral_norm(&coeffs[(m + n) as usize]))
        .fold(0.0, f64::max);
    (
        MatLaurent::new(dim, -n, coeffs).expect("square quadrature coefficients"),
        tail,
    )
}
