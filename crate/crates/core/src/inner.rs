//! Matrix inner functions assembled from Blaschke–Potapov factors.
//!
//! Two tiers. On the *exact* tier every zero sits at the origin, each factor
//! is the degree-1 polynomial `U(I−P) + UP·z`, and products are exact
//! coefficient arithmetic. On the *rational* tier (some zero `a ≠ 0`) the
//! expansion is a geometric series truncated at a caller-chosen length and
//! the truncation tail is tracked on the value.
//!
//! The module also certifies innerness and gamma-symmetry by sampling, divides
//! inner functions, and generates seeded commuting gamma-symmetric pairs for
//! the `Θ = ΛΨ` scenarios. The generated pairs are symmetric with respect to
//! entrywise conjugation (`J = I`).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{GammaStructure, MatLaurent};
use crate::linalg::{self, spectral_norm};
use crate::C64;

const ONE: C64 = C64::new(1.0, 0.0);

/// Number of boundary samples used by the innerness certificate.
pub const BOUNDARY_SAMPLES: usize = 64;

/// Elementary factor `B(z) = U · (I − P + b_a(z) P)` with `b_a(z) = (z−a)/(1−āz)`.
#[derive(Debug, Clone)]
pub struct PotapovFactor {
    projection: DMatrix<C64>,
    zero: C64,
    unitary: DMatrix<C64>,
}

impl PotapovFactor {
    pub fn new(projection: DMatrix<C64>, zero: C64, unitary: DMatrix<C64>) -> Result<Self> {
        let d = projection.nrows();
        if projection.ncols() != d || unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::DimensionMismatch(projection.ncols(), d));
        }
        let p_defect = linalg::projection_defect(&projection);
        if p_defect > 1e-13 {
            return Err(Error::NotProjection(p_defect));
        }
        let u_defect = linalg::unitary_defect(&unitary);
        if u_defect > 1e-13 {
            return Err(Error::NotUnitary(u_defect));
        }
        if zero.norm() >= 1.0 {
            return Err(Error::ZeroOutsideDisk(zero.norm()));
        }
        Ok(Self {
            projection,
            zero,
            unitary,
        })
    }

    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }

    /// True when the zero sits at the origin (polynomial factor).
    pub fn is_exact(&self) -> bool {
        self.zero.re == 0.0 && self.zero.im == 0.0
    }

    /// Coefficients of the scalar Blaschke factor `b_a` up to `z^len`:
    /// `b_a = −a + (1−|a|²) Σ_{k≥1} ā^{k−1} z^k`.
    fn blaschke_coeffs(&self, len: usize) -> Vec<C64> {
        let a = self.zero;
        let mut out = Vec::with_capacity(len + 1);
        out.push(-a);
        let mut pow = ONE;
        for _ in 1..=len {
            out.push((ONE - a * a.conj()) * pow);
            pow *= a.conj();
        }
        out
    }

    /// Expansion on the band `[0, len]` (`[0, 1]` when exact).
    pub fn expansion(&self, len: usize) -> MatLaurent {
        let d = self.dim();
        let co_p = &self.unitary * (DMatrix::<C64>::identity(d, d) - &self.projection);
        let up = &self.unitary * &self.projection;
        if self.is_exact() {
            return MatLaurent::new(d, 0, vec![co_p, up]).unwrap();
        }
        let b = self.blaschke_coeffs(len);
        let mut coeffs: Vec<DMatrix<C64>> = b.iter().map(|c| &up * *c).collect();
        coeffs[0] += co_p;
        MatLaurent::new(d, 0, coeffs).unwrap()
    }

    /// Norm bound on the dropped geometric tail of [`expansion`](Self::expansion).
    pub fn expansion_tail(&self, len: usize) -> f64 {
        if self.is_exact() {
            return 0.0;
        }
        let r = self.zero.norm();
        // Σ_{k>len} (1−r²) r^{k−1} = (1+r) r^len
        (1.0 + r) * r.powi(len as i32)
    }
}

/// A matrix inner function: ordered factors plus a cached expansion.
#[derive(Debug, Clone)]
pub struct InnerFunction {
    factors: Vec<PotapovFactor>,
    expansion: MatLaurent,
    exact: bool,
    tail: f64,
}

impl InnerFunction {
    /// The constant inner function `I_d`.
    pub fn identity(dim: usize) -> Self {
        Self {
            factors: Vec::new(),
            expansion: MatLaurent::monomial_identity(dim, 0),
            exact: true,
            tail: 0.0,
        }
    }

    /// `z^n · I_d`.
    pub fn shift_power(dim: usize, n: usize) -> Self {
        let factors = (0..n)
            .map(|_| {
                PotapovFactor::new(
                    DMatrix::identity(dim, dim),
                    C64::new(0.0, 0.0),
                    DMatrix::identity(dim, dim),
                )
                .unwrap()
            })
            .collect();
        Self {
            factors,
            expansion: MatLaurent::monomial_identity(dim, n as i64),
            exact: true,
            tail: 0.0,
        }
    }

    /// Single-factor inner function; `trunc` is the rational-tier expansion length.
    pub fn from_factor(factor: PotapovFactor, trunc: usize) -> Self {
        let expansion = factor.expansion(trunc);
        let exact = factor.is_exact();
        let tail = factor.expansion_tail(trunc);
        Self {
            factors: vec![factor],
            expansion,
            exact,
            tail,
        }
    }

    /// Left-to-right product of elementary factors.
    pub fn product(factors: Vec<PotapovFactor>, trunc: usize) -> Result<Self> {
        let dim = match factors.first() {
            None => return Err(Error::DimensionMismatch(0, 0)),
            Some(f) => f.dim(),
        };
        let mut acc = Self::identity(dim);
        for f in factors {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch(f.dim(), dim));
            }
            acc = acc.product_with(&Self::from_factor(f, trunc))?;
        }
        Ok(acc)
    }

    /// Wraps an analytic expansion that is already (approximately) inner.
    ///
    /// `tol` bounds the accepted boundary unitarity defect in excess of the
    /// declared truncation tail.
    pub fn from_expansion(expansion: MatLaurent, exact: bool, tail: f64, tol: f64) -> Result<Self> {
        if expansion.lo() < 0 {
            return Err(Error::NotAnalytic(expansion.lo()));
        }
        let defect = check_inner(&expansion);
        if defect > tol + 4.0 * tail {
            return Err(Error::NotInner(defect));
        }
        Ok(Self {
            factors: Vec::new(),
            expansion,
            exact,
            tail,
        })
    }

    /// Pointwise product `ΘΦ` (factors concatenate, tails add).
    pub fn product_with(&self, rhs: &Self) -> Result<Self> {
        let expansion = self.expansion.mul(&rhs.expansion)?;
        let mut factors = self.factors.clone();
        factors.extend(rhs.factors.iter().cloned());
        Ok(Self {
            factors,
            expansion,
            exact: self.exact && rhs.exact,
            tail: self.tail + rhs.tail,
        })
    }

    pub fn dim(&self) -> usize {
        self.expansion.dim()
    }

    pub fn expansion(&self) -> &MatLaurent {
        &self.expansion
    }

    pub fn factors(&self) -> &[PotapovFactor] {
        &self.factors
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Declared truncation tail (0 on the exact tier).
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Top frequency of the expansion: the polynomial degree.
    pub fn degree(&self) -> usize {
        self.expansion.hi().max(0) as usize
    }

    /// Value at a point of the closed disk (through the cached expansion).
    pub fn eval(&self, lambda: C64) -> DMatrix<C64> {
        self.expansion
            .eval(lambda)
            .expect("inner expansion is analytic")
    }

    /// `diag(z^{k₀}, …, z^{k_{d−1}})` as an exact factor product.
    pub fn diagonal_powers(powers: &[usize]) -> Self {
        let dim = powers.len();
        let top = powers.iter().copied().max().unwrap_or(0);
        let mut acc = Self::identity(dim);
        for step in 1..=top {
            let mut p = DMatrix::<C64>::zeros(dim, dim);
            for (i, &k) in powers.iter().enumerate() {
                if k >= step {
                    p[(i, i)] = ONE;
                }
            }
            let f = PotapovFactor::new(p, C64::new(0.0, 0.0), DMatrix::identity(dim, dim))
                .expect("diagonal projection");
            acc = acc
                .product_with(&Self::from_factor(f, 0))
                .expect("same dimension");
        }
        acc
    }

    /// The designated non-gamma-symmetric inner function: a single exact
    /// factor on `C²` whose projection `vv*`, `v = (1, i)/√2`, is Hermitian
    /// but not complex-symmetric.
    pub fn non_gamma_symmetric_example() -> Self {
        let s = 0.5;
        let p = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(s, 0.0),
                C64::new(0.0, -s),
                C64::new(0.0, s),
                C64::new(s, 0.0),
            ],
        );
        let f = PotapovFactor::new(p, C64::new(0.0, 0.0), DMatrix::identity(2, 2)).unwrap();
        Self::from_factor(f, 1)
    }
}

/// Boundary unitarity defect: `max ‖F(z)F(z)* − I‖` over 64 circle samples.
pub fn check_inner(f: &MatLaurent) -> f64 {
    let d = f.dim();
    let eye = DMatrix::<C64>::identity(d, d);
    (0..BOUNDARY_SAMPLES)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / BOUNDARY_SAMPLES as f64;
            let v = f.eval_boundary(C64::new(t.cos(), t.sin()));
            spectral_norm(&(&v * v.adjoint() - &eye))
        })
        .fold(0.0, f64::max)
}

/// Gamma-symmetry defect `‖F_Γ − F*‖` in the coefficientwise max norm.
pub fn check_gamma_symmetric(f: &MatLaurent, gamma: &GammaStructure) -> f64 {
    (&f.gamma_conj(gamma) - &f.star()).coeff_max_norm()
}

/// Commutator defect `‖ΛΨ − ΨΛ‖` in the coefficientwise max norm.
pub fn commutator_defect(lambda: &MatLaurent, psi: &MatLaurent) -> Result<f64> {
    Ok((&lambda.mul(psi)? - &psi.mul(lambda)?).coeff_max_norm())
}

/// Divides `Θ` by `Λ`: returns `Ψ = Λ*Θ` when that is again analytic and inner.
///
/// Fails with [`Error::NotDivisor`] when the product keeps a negative band or
/// loses innerness beyond `tol`.
pub fn divide(theta: &InnerFunction, lambda: &InnerFunction, tol: f64) -> Result<InnerFunction> {
    let raw = lambda.expansion().star().mul(theta.expansion())?;
    let neg = raw.negative_tail_norm();
    if neg > tol {
        return Err(Error::NotDivisor(format!(
            "negative band remains (norm {neg:.3e})"
        )));
    }
    let quotient = raw.analytic_part();
    let defect = check_inner(&quotient);
    let tail = theta.tail() + lambda.tail();
    if defect > tol + 4.0 * tail {
        return Err(Error::NotDivisor(format!(
            "quotient is not inner (defect {defect:.3e})"
        )));
    }
    InnerFunction::from_expansion(quotient, theta.is_exact() && lambda.is_exact(), tail, tol)
}

/// Construction family for seeded commuting gamma-symmetric pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStrategy {
    /// `Λ = λ(z)·I`, `Ψ = ψ(z)·I` with scalar Blaschke products λ, ψ.
    ScalarTimesIdentity,
    /// `Λ = B^p`, `Ψ = B^q` for one shared gamma-symmetric factor `B`.
    PowersOfCommonFactor,
    /// `Λ = Q·diag(λ_i)·Qᵀ`, `Ψ = Q·diag(ψ_i)·Qᵀ` with one real orthogonal `Q`.
    SimultaneouslyDiagonal,
}

impl PairStrategy {
    pub const ALL: [PairStrategy; 3] = [
        PairStrategy::ScalarTimesIdentity,
        PairStrategy::PowersOfCommonFactor,
        PairStrategy::SimultaneouslyDiagonal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PairStrategy::ScalarTimesIdentity => "scalar-times-identity",
            PairStrategy::PowersOfCommonFactor => "powers-of-common-factor",
            PairStrategy::SimultaneouslyDiagonal => "simultaneously-diagonal",
        }
    }
}

impl std::str::FromStr for PairStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PairStrategy::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// What to generate: dimension, per-factor counts, tier and truncation length.
#[derive(Debug, Clone)]
pub struct PairSpec {
    pub dim: usize,
    pub degrees: (usize, usize),
    pub strategy: PairStrategy,
    /// Radius for the factor zeros; `0.0` selects the exact tier.
    pub zero_radius: f64,
    /// Expansion length per rational factor (ignored on the exact tier).
    pub trunc: usize,
}

impl PairSpec {
    pub fn exact(dim: usize, degrees: (usize, usize), strategy: PairStrategy) -> Self {
        Self {
            dim,
            degrees,
            strategy,
            zero_radius: 0.0,
            trunc: 0,
        }
    }
}

/// Defects recorded while generating a pair; all should be tiny.
#[derive(Debug, Clone, Copy)]
pub struct PairCertificate {
    pub gamma_defect_lambda: f64,
    pub gamma_defect_psi: f64,
    pub commutator_defect: f64,
    pub inner_defect_lambda: f64,
    pub inner_defect_psi: f64,
}

impl PairCertificate {
    pub fn max_defect(&self) -> f64 {
        self.gamma_defect_lambda
            .max(self.gamma_defect_psi)
            .max(self.commutator_defect)
            .max(self.inner_defect_lambda)
            .max(self.inner_defect_psi)
    }
}

/// Scalar Blaschke product of the given degree as a `dim × dim` inner function.
fn scalar_blaschke<R: Rng>(
    rng: &mut R,
    dim: usize,
    degree: usize,
    radius: f64,
    trunc: usize,
) -> Result<InnerFunction> {
    let mut acc = InnerFunction::identity(dim);
    for _ in 0..degree {
        let a = linalg::random_disk_point(rng, radius);
        let u = linalg::random_phase(rng);
        let factor = PotapovFactor::new(
            DMatrix::identity(dim, dim),
            a,
            DMatrix::identity(dim, dim) * u,
        )?;
        acc = acc.product_with(&InnerFunction::from_factor(factor, trunc))?;
    }
    Ok(acc)
}

/// One gamma-symmetric elementary factor: `P` real symmetric, `U` complex
/// symmetric unitary and commuting with `P` (built block-diagonally in the
/// eigenbasis of `P`; without the commuting constraint `U(I−P+bP)` need not
/// be pointwise symmetric).
fn symmetric_factor<R: Rng>(rng: &mut R, dim: usize, zero: C64) -> Result<PotapovFactor> {
    let rank = if dim == 1 { 1 } else { rng.gen_range(1..dim) };
    let q = linalg::random_real_orthogonal(rng, dim);
    let mut diag = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..rank {
        diag[(i, i)] = ONE;
    }
    let p = &q * diag * q.transpose();
    let u1 = linalg::random_symmetric_unitary(rng, rank);
    let u2 = linalg::random_symmetric_unitary(rng, dim - rank);
    let mut block = DMatrix::<C64>::zeros(dim, dim);
    block.view_mut((0, 0), (rank, rank)).copy_from(&u1);
    block
        .view_mut((rank, rank), (dim - rank, dim - rank))
        .copy_from(&u2);
    let u = &q * block * q.transpose();
    PotapovFactor::new(p, zero, u)
}

/// Diagonal-model inner function `Q · diag(u_i z^{k_i} or Blaschke) · Qᵀ`.
fn conjugated_diagonal<R: Rng>(
    rng: &mut R,
    q: &DMatrix<C64>,
    degree: usize,
    radius: f64,
    trunc: usize,
) -> Result<InnerFunction> {
    let dim = q.nrows();
    let mut entries: Vec<MatLaurent> = Vec::with_capacity(dim);
    let mut exact = true;
    let mut tail = 0.0;
    for i in 0..dim {
        // at least one entry carries the full degree
        let k = if i == 0 { degree } else { rng.gen_range(0..=degree) };
        let scalar = scalar_blaschke(rng, 1, k, radius, trunc)?;
        exact &= scalar.is_exact();
        tail += scalar.tail();
        entries.push(scalar.expansion().clone());
    }
    let hi = entries.iter().map(|e| e.hi()).max().unwrap_or(0);
    let mut coeffs = Vec::new();
    for n in 0..=hi {
        let mut diag = DMatrix::<C64>::zeros(dim, dim);
        for (i, e) in entries.iter().enumerate() {
            diag[(i, i)] = e.coeff(n)[(0, 0)];
        }
        coeffs.push(q * diag * q.transpose());
    }
    let expansion = MatLaurent::new(dim, 0, coeffs)?;
    InnerFunction::from_expansion(expansion, exact, tail, 1e-10)
}

/// Seeded generator of a commuting gamma-symmetric pair `(Λ, Ψ)`.
///
/// Deterministic per seed (a `ChaCha8Rng` stream); the certificate records
/// the measured symmetry, innerness and commutator defects.
pub fn random_commuting_pair(
    seed: u64,
    spec: &PairSpec,
) -> Result<(InnerFunction, InnerFunction, PairCertificate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (deg_lambda, deg_psi) = spec.degrees;
    let (lambda, psi) = match spec.strategy {
        PairStrategy::ScalarTimesIdentity => {
            let l = scalar_blaschke(&mut rng, spec.dim, deg_lambda, spec.zero_radius, spec.trunc)?;
            let p = scalar_blaschke(&mut rng, spec.dim, deg_psi, spec.zero_radius, spec.trunc)?;
            (l, p)
        }
        PairStrategy::PowersOfCommonFactor => {
            let zero = linalg::random_disk_point(&mut rng, spec.zero_radius);
            let base =
                InnerFunction::from_factor(symmetric_factor(&mut rng, spec.dim, zero)?, spec.trunc);
            let mut l = InnerFunction::identity(spec.dim);
            for _ in 0..deg_lambda {
                l = l.product_with(&base)?;
            }
            let mut p = InnerFunction::identity(spec.dim);
            for _ in 0..deg_psi {
                p = p.product_with(&base)?;
            }
            (l, p)
        }
        PairStrategy::SimultaneouslyDiagonal => {
            let q = linalg::random_real_orthogonal(&mut rng, spec.dim);
            let l = conjugated_diagonal(&mut rng, &q, deg_lambda, spec.zero_radius, spec.trunc)?;
            let p = conjugated_diagonal(&mut rng, &q, deg_psi, spec.zero_radius, spec.trunc)?;
            (l, p)
        }
    };
    let gamma = GammaStructure::identity(spec.dim);
    let cert = PairCertificate {
        gamma_defect_lambda: check_gamma_symmetric(lambda.expansion(), &gamma),
        gamma_defect_psi: check_gamma_symmetric(psi.expansion(), &gamma),
        commutator_defect: commutator_defect(lambda.expansion(), psi.expansion())?,
        inner_defect_lambda: check_inner(lambda.expansion()),
        inner_defect_psi: check_inner(psi.expansion()),
    };
    Ok((lambda, psi, cert))
}
