//! Scalar walkthrough: prints the small matrices of the `θ = z^n` model
//! space and verifies the classical facts at that degree.

use mvtto_core::conjugation::{c_theta, compress_antilinear, is_conjugation_on};
use mvtto_core::inner::InnerFunction;
use mvtto_core::laurent::{GammaStructure, VecLaurent};
use mvtto_core::linalg::spectral_norm;
use mvtto_core::operators::{eq412_defect, model_shift};
use mvtto_core::window::{frame_matrix, model_basis, Window};
use mvtto_core::C64;
use nalgebra::DMatrix;

use crate::checks::CheckKind;
use crate::context::{general_symbol, substream};
use crate::report::{CheckRecord, Report};
use crate::HarnessError;

fn matrix_lines(m: &DMatrix<C64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        out.push_str("    ");
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push_str(&format!("{:>6.2}{:+5.2}i ", z.re, z.im));
        }
        out.push('\n');
    }
    out
}

/// Runs the degree-`n` scalar catalogue and returns the report together with
/// the printable walkthrough.
pub fn run_demo(n: usize, seed: u64) -> Result<(Report, String), HarnessError> {
    let theta = InnerFunction::shift_power(1, n);
    let window = Window::new(3 * n + 8, 1);
    let gamma = GammaStructure::identity(1);
    let mut text = String::new();
    let mut records = Vec::new();
    let mut push = |check: &str, anchor: &str, defect: f64, tol: f64| {
        records.push(CheckRecord {
            check: check.to_string(),
            anchor: anchor.to_string(),
            defect,
            tol,
            kind: CheckKind::UpperBound,
            pass: defect <= tol,
            window: window.radius(),
            runtime_ms: 0.0,
            error: None,
        });
    };

    text.push_str(&format!("scalar model space for theta = z^{n}\n\n"));

    let basis = model_basis(&theta, window, 1e-10)?;
    let mut basis_defect = if basis.len() == n { 0.0f64 } else { 1.0 };
    for (k, b) in basis.iter().enumerate() {
        let mono = VecLaurent::scalar(&[(k as i64, C64::new(1.0, 0.0))]);
        basis_defect = basis_defect.max((b - &mono).coeff_max_norm());
    }
    text.push_str(&format!(
        "  basis of K_theta: {{1, z, ..., z^{}}}  (defect {basis_defect:.2e})\n\n",
        n.saturating_sub(1)
    ));
    push("scalar.basis", "K_{z^n} = span{1..z^{n-1}}", basis_defect, 1e-12);

    let (s, _) = model_shift(&theta, window)?;
    text.push_str(&format!(
        "  compressed shift S_theta ({n}x{n}, nilpotent lower shift):\n{}",
        matrix_lines(s.compressed())
    ));
    let mut lower = DMatrix::<C64>::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        lower[(k + 1, k)] = C64::new(1.0, 0.0);
    }
    push(
        "scalar.shift_nilpotent",
        "S_theta is the nilpotent lower shift",
        spectral_norm(&(s.compressed() - lower)),
        1e-12,
    );

    let c = c_theta(&theta, &gamma, window)?;
    let frame = frame_matrix(window, &basis)?;
    let compressed_c = compress_antilinear(&c, &frame, &frame);
    text.push_str(&format!(
        "\n  C_theta on the basis (antidiagonal flip e_k -> e_{{n-1-k}}):\n{}",
        matrix_lines(&compressed_c)
    ));
    let mut flip = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        flip[(n - 1 - k, k)] = C64::new(1.0, 0.0);
    }
    push(
        "scalar.ctheta_flip",
        "C_theta z^k = z^{n-1-k}",
        spectral_norm(&(&compressed_c - flip)),
        1e-12,
    );
    let axioms = is_conjugation_on(&c, &frame);
    push(
        "scalar.ctheta_axioms",
        "C_theta is a conjugation on K_theta",
        axioms.max_defect(),
        1e-11,
    );

    text.push_str("\n  eq412 defects ||C A_phi C - A_{conj phi}|| for random symbols:\n");
    let mut rng = substream(seed, "demo.scalar");
    let mut worst = 0.0f64;
    for k in 0..3 {
        let phi = general_symbol(&mut rng, 1, 2, 1.0);
        let defect = eq412_defect(&phi, &theta, &gamma, window)?;
        text.push_str(&format!("    phi_{k}: {defect:.3e}\n"));
        worst = worst.max(defect);
    }
    push(
        "scalar.c_symmetric",
        "d=1: every truncated Toeplitz operator is C_theta-symmetric",
        worst,
        1e-10,
    );

    let report = Report { seed, records };
    Ok((report, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_degree_three_passes() {
        let (report, text) = run_demo(3, 1).unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
        assert!(text.contains("z^3"));
        assert!(text.contains("basis of K_theta"));
    }
}
