//! Small dense helpers on complex matrices: norms, defects, orthonormal
//! frames and seeded random structured matrices.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::C64;

/// Spectral norm (largest singular value). Zero-sized matrices have norm 0.
///
/// Falls back to the Frobenius norm (an upper bound) in the unlikely event
/// the SVD iteration does not converge, so defect measurements only ever
/// err on the conservative side.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match m.clone().try_svd(false, false, f64::EPSILON, 1000) {
        Some(svd) => svd.singular_values.max(),
        None => m.norm(),
    }
}

/// Entrywise complex conjugate (no transpose).
pub fn conj(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.map(|z| z.conj())
}

/// `‖M M* − I‖` in spectral norm.
pub fn unitary_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    spectral_norm(&(m * m.adjoint() - DMatrix::identity(n, n)))
}

/// `‖M − Mᵀ‖` in spectral norm.
pub fn symmetric_defect(m: &DMatrix<C64>) -> f64 {
    spectral_norm(&(m - m.transpose()))
}

/// `‖M − M*‖` in spectral norm.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    spectral_norm(&(m - m.adjoint()))
}

/// `max(‖M² − M‖, ‖M − M*‖)`: how far from an orthogonal projection.
pub fn projection_defect(m: &DMatrix<C64>) -> f64 {
    let idem = spectral_norm(&(m * m - m));
    idem.max(hermitian_defect(m))
}

/// Orthonormal basis of the column span, with deterministic pivoting.
///
/// Column-pivoted modified Gram–Schmidt with one re-orthogonalization pass.
/// Pivoting picks the largest remaining column norm; ties resolve to the
/// lowest column index, so a set of distinct unit coordinate columns comes
/// back in its original order. Columns whose residual drops below
/// `tol * max_initial_norm` are dropped; the rank is the number of columns
/// kept.
pub fn orthonormal_columns(a: &DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let rows = a.nrows();
    let cols = a.ncols();
    let mut work: Vec<DVector<C64>> = (0..cols).map(|j| a.column(j).into_owned()).collect();
    let max_norm = work.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let cutoff = tol * max_norm.max(1.0e-300);
    let mut basis: Vec<DVector<C64>> = Vec::new();
    let mut alive: Vec<usize> = (0..cols).collect();

    while !alive.is_empty() {
        let (pos, &pivot) = alive
            .iter()
            .enumerate()
            .max_by(|(_, &i), (_, &j)| {
                work[i]
                    .norm()
                    .partial_cmp(&work[j].norm())
                    .unwrap()
                    // prefer the lower column index on ties
                    .then(j.cmp(&i))
            })
            .unwrap();
        if work[pivot].norm() <= cutoff {
            break;
        }
        let mut q = work[pivot].clone();
        // second orthogonalization pass for stability
        for b in &basis {
            let c = b.dotc(&q);
            q -= b * c;
        }
        let n = q.norm();
        if n <= cutoff {
            alive.remove(pos);
            continue;
        }
        q /= C64::new(n, 0.0);
        alive.remove(pos);
        for &i in &alive {
            let c = q.dotc(&work[i]);
            let update = &q * c;
            work[i] -= update;
        }
        basis.push(q);
    }

    let mut out = DMatrix::zeros(rows, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Orthogonal projection matrix `Q Q*` onto the span of an orthonormal frame.
pub fn projector(frame: &DMatrix<C64>) -> DMatrix<C64> {
    frame * frame.adjoint()
}

/// `‖P_A − P_B‖` for the projections onto two orthonormal frames' spans.
///
/// This is the sine of the largest principal angle when the ranks agree,
/// and is ≥ 1 when the ranks differ.
pub fn span_defect(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    spectral_norm(&(projector(a) - projector(b)))
}

/// Standard complex Gaussian matrix, deterministic per RNG state.
pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        // Box–Muller from two uniforms keeps us independent of rand_distr.
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        C64::new(
            r * (std::f64::consts::TAU * u2).cos(),
            r * (std::f64::consts::TAU * u2).sin(),
        )
    })
}

/// Random unitary: Q from the QR decomposition of a complex Gaussian,
/// with the R diagonal phases absorbed so the distribution is Haar-like.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = random_complex_matrix(rng, n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / C64::new(d.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random real orthogonal matrix (QR of a real Gaussian, sign-fixed).
pub fn random_real_orthogonal<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q.map(|x| C64::new(x, 0.0))
}

/// Random complex symmetric unitary `V Vᵀ` (V unitary).
pub fn random_symmetric_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let v = random_unitary(rng, n);
    &v * v.transpose()
}

/// Random real symmetric orthogonal projection of the given rank.
pub fn random_real_projection<R: Rng>(rng: &mut R, n: usize, rank: usize) -> DMatrix<C64> {
    assert!(rank <= n);
    let q = random_real_orthogonal(rng, n);
    let cols = q.columns(0, rank).into_owned();
    &cols * cols.adjoint()
}

/// Random point of the open disk of the given radius.
pub fn random_disk_point<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    if radius == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let r = radius * rng.gen_range(0.0..1.0f64).sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::new(r * t.cos(), r * t.sin())
}

/// Random unimodular scalar.
pub fn random_phase<R: Rng>(rng: &mut R) -> C64 {
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::new(t.cos(), t.sin())
}
