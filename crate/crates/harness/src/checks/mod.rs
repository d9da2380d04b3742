//! The identity-check catalogue.
//!
//! Every check verifies one operator identity (or exhibits one designated
//! counterexample) and reports a single defect number. Upper-bound checks
//! pass when the defect stays below their pinned tolerance; lower-bound
//! (witness) checks pass when the defect *exceeds* the pinned threshold,
//! demonstrating that an identity genuinely fails off its hypotheses.
//!
//! Scenario `tol` rescales the pinned values relative to the 1e-9 default:
//! upper bounds multiply by `tol/1e-9`, witness thresholds divide by it, so
//! `tol = 0` fails every check.

mod conjugation_checks;
mod laurent_checks;
mod operator_checks;
mod oracle_checks;
mod scalar_checks;
mod structure_checks;

use mvtto_core::window::Window;
use mvtto_core::{C64, Error as CoreError};
use nalgebra::DMatrix;

use crate::context::{CheckContext, Demand};

/// Direction of the pass condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Pass when `defect <= tol`.
    UpperBound,
    /// Pass when `defect >= tol` (designated counterexamples).
    LowerBound,
}

/// One catalogue entry.
#[derive(Clone, Copy)]
pub struct CheckDef {
    pub id: &'static str,
    /// The verified identity, in plain ASCII.
    pub anchor: &'static str,
    pub kind: CheckKind,
    /// Pinned tolerance (upper bound) or threshold (lower bound).
    pub tol: f64,
    /// Minimal window radius this check needs (before the auto pad of 4).
    pub demand: fn(&Demand) -> usize,
    pub run: fn(&CheckContext) -> Result<f64, CoreError>,
}

impl CheckDef {
    /// Effective bound after scenario tol scaling (`scale = tol / 1e-9`).
    pub fn effective_tol(&self, scenario_tol: f64) -> f64 {
        let scale = scenario_tol / 1e-9;
        match self.kind {
            CheckKind::UpperBound => self.tol * scale,
            CheckKind::LowerBound => {
                if scale == 0.0 {
                    f64::INFINITY
                } else {
                    self.tol / scale
                }
            }
        }
    }

    pub fn passes(&self, defect: f64, scenario_tol: f64) -> bool {
        let bound = self.effective_tol(scenario_tol);
        match self.kind {
            // strict, so a zero scenario tol fails even exact-zero defects
            CheckKind::UpperBound => defect < bound,
            CheckKind::LowerBound => defect >= bound,
        }
    }
}

fn none(_: &Demand) -> usize {
    0
}

fn small(_: &Demand) -> usize {
    8
}

fn decomp_demand(d: &Demand) -> usize {
    3 * d.gt + 2
}

fn clp_margin(d: &Demand) -> usize {
    2 * d.gl + d.gp + 2 * d.gt + 1
}

pub const CATALOGUE: &[CheckDef] = &[
    CheckDef {
        id: "laurent.star_involution",
        anchor: "(F*)* = F",
        kind: CheckKind::UpperBound,
        tol: 1e-14,
        demand: none,
        run: laurent_checks::star_involution,
    },
    CheckDef {
        id: "laurent.gamma_involution",
        anchor: "(F_G)_G = F",
        kind: CheckKind::UpperBound,
        tol: 1e-14,
        demand: none,
        run: laurent_checks::gamma_involution,
    },
    CheckDef {
        id: "laurent.gamma_symmetric_tilde",
        anchor: "G-symmetric F: F_G(conj z) = F~(z)",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: laurent_checks::gamma_symmetric_tilde,
    },
    CheckDef {
        id: "laurent.parseval",
        anchor: "<f,f> = sum_n ||a_n||^2",
        kind: CheckKind::UpperBound,
        tol: 1e-14,
        demand: none,
        run: laurent_checks::parseval,
    },
    CheckDef {
        id: "laurent.hs_star",
        anchor: "<F,G> = <G*,F*>",
        kind: CheckKind::UpperBound,
        tol: 1e-13,
        demand: none,
        run: laurent_checks::hs_star,
    },
    CheckDef {
        id: "laurent.mul_quadrature",
        anchor: "coeffs(F G) = quadrature of z -> F(z)G(z)",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: laurent_checks::mul_quadrature,
    },
    CheckDef {
        id: "laurent.jm_gamma_real",
        anchor: "G-real coefficients: J* M_F = M_F J*",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: laurent_checks::jm_gamma_real,
    },
    CheckDef {
        id: "laurent.jm_symmetric_witness",
        anchor: "F = iI is G-symmetric yet J* M_F != M_F J*",
        kind: CheckKind::LowerBound,
        tol: 1.0,
        demand: none,
        run: laurent_checks::jm_symmetric_witness,
    },
    CheckDef {
        id: "inner.pair_certificate",
        anchor: "Lambda, Psi inner, G-symmetric, commuting",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: structure_checks::pair_certificate,
    },
    CheckDef {
        id: "inner.gamma_preserves_inner",
        anchor: "F_G is inner iff F is",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: structure_checks::gamma_preserves_inner,
    },
    CheckDef {
        id: "inner.divide_roundtrip",
        anchor: "Lambda (Lambda* Theta) = Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-11,
        demand: none,
        run: structure_checks::divide_roundtrip,
    },
    CheckDef {
        id: "inner.degree_additive",
        anchor: "deg(Lambda Psi) = deg Lambda + deg Psi",
        kind: CheckKind::UpperBound,
        tol: 0.5,
        demand: none,
        run: structure_checks::degree_additive,
    },
    CheckDef {
        id: "decomp.factor_commute",
        anchor: "Lambda Psi = Psi Lambda",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: none,
        run: structure_checks::factor_commute,
    },
    CheckDef {
        id: "decomp.direct_sum",
        anchor: "K_Theta = K_Lambda (+) Lambda K_Psi",
        kind: CheckKind::UpperBound,
        tol: 1e-8,
        demand: decomp_demand,
        run: structure_checks::direct_sum,
    },
    CheckDef {
        id: "decomp.projection_sum",
        anchor: "P_Theta = P_Lambda + Lambda P_Psi Lambda*",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: decomp_demand,
        run: structure_checks::projection_sum,
    },
    CheckDef {
        id: "decomp.kernel_split",
        anchor: "k_l^Theta x = k_l^Lambda x + Lambda k_l^Psi Lambda(l)* x",
        kind: CheckKind::UpperBound,
        tol: 1e-9,
        demand: decomp_demand,
        run: structure_checks::kernel_split,
    },
    CheckDef {
        id: "decomp.kernel_tilde_split",
        anchor: "k~_l^Theta x = k~_l^Lambda Psi(l) x + Lambda k~_l^Psi x",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: decomp_demand,
        run: structure_checks::kernel_tilde_split,
    },
    CheckDef {
        id: "decomp.kernel_projection",
        anchor: "P_Lambda k_l^Theta = k_l^Lambda; P_Lambda k~_l^Theta = k~_l^Lambda Psi(l)x",
        kind: CheckKind::UpperBound,
        tol: 1e-9,
        demand: decomp_demand,
        run: structure_checks::kernel_projection,
    },
    CheckDef {
        id: "window.proj_hermitian_idempotent",
        anchor: "P_Theta = P_Theta* = P_Theta^2",
        kind: CheckKind::UpperBound,
        tol: 1e-11,
        demand: decomp_demand,
        run: structure_checks::proj_hermitian_idempotent,
    },
    CheckDef {
        id: "window.kernel_density",
        anchor: "kernel vectors span K_Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-6,
        demand: decomp_demand,
        run: structure_checks::kernel_density,
    },
    CheckDef {
        id: "conj.jtilde_involution",
        anchor: "J~ J~ = I",
        kind: CheckKind::UpperBound,
        tol: 1e-14,
        demand: small,
        run: conjugation_checks::jtilde_involution,
    },
    CheckDef {
        id: "conj.jstar_shift",
        anchor: "J* M_z = M_z J* and J*(H^2) = H^2",
        kind: CheckKind::UpperBound,
        tol: 1e-14,
        demand: small,
        run: conjugation_checks::jstar_shift,
    },
    CheckDef {
        id: "conj.ctheta_axioms",
        anchor: "C_Theta is a conjugation on K_Theta (G-symmetric Theta)",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + 2,
        run: conjugation_checks::ctheta_axioms,
    },
    CheckDef {
        id: "conj.ctheta_involution_region",
        anchor: "C_Theta^2 = I on the exactness region",
        kind: CheckKind::UpperBound,
        tol: 1e-11,
        demand: |d| 2 * d.gt + 4,
        run: conjugation_checks::ctheta_involution_region,
    },
    CheckDef {
        id: "conj.nonsymmetric_witness",
        anchor: "non-G-symmetric Theta: C_Theta^2 != I",
        kind: CheckKind::LowerBound,
        tol: 1e-2,
        demand: none,
        run: conjugation_checks::nonsymmetric_witness,
    },
    CheckDef {
        id: "conj.clp_axioms",
        anchor: "C_{Lambda,Psi} = C_Lambda (+) Lambda C_Psi Lambda* is a conjugation on K_Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| d.gt + clp_margin(d),
        run: conjugation_checks::clp_axioms,
    },
    CheckDef {
        id: "conj.ctheta_swap_1",
        anchor: "C_Theta(f_L + Lambda f_P) = C_Psi(f_P) + Psi C_Lambda(f_L)",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + 2,
        run: conjugation_checks::ctheta_swap_1,
    },
    CheckDef {
        id: "conj.ctheta_swap_2",
        anchor: "C_Theta(f_P + Psi f_L) = C_Lambda(f_L) + Lambda C_Psi(f_P)",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + 2,
        run: conjugation_checks::ctheta_swap_2,
    },
    CheckDef {
        id: "conj.product_formula_1",
        anchor: "C_{Lambda,Psi} C_Theta = P_Lambda Psi* + Lambda P_Psi",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + clp_margin(d) + 1,
        run: conjugation_checks::product_formula_1,
    },
    CheckDef {
        id: "conj.product_formula_2",
        anchor: "C_Theta C_{Lambda,Psi} = P_Psi Lambda* + Psi P_Lambda",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + clp_margin(d) + 1,
        run: conjugation_checks::product_formula_2,
    },
    CheckDef {
        id: "conj.product_unitary",
        anchor: "C_{Lambda,Psi} C_Theta and C_Theta C_{Lambda,Psi} are unitary on K_Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + clp_margin(d) + 1,
        run: conjugation_checks::product_unitary,
    },
    CheckDef {
        id: "conj.ctheta_intertwine",
        anchor: "M_z C_Theta = C_Theta M_{conj z}",
        kind: CheckKind::UpperBound,
        tol: 1e-11,
        demand: |d| 2 * d.gt + 6,
        run: conjugation_checks::ctheta_intertwine,
    },
    CheckDef {
        id: "conj.tau_unitary",
        anchor: "tau_Theta unitary, maps K_Theta onto K_{Theta~}, C_Theta = J* tau_Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-11,
        demand: |d| 3 * d.gt + 4,
        run: conjugation_checks::tau_unitary,
    },
    CheckDef {
        id: "conj.canonical_criterion",
        anchor: "compressed unitary+symmetric agrees with the conjugation axioms",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: |d| 2 * d.gt + 2,
        run: conjugation_checks::canonical_criterion,
    },
    CheckDef {
        id: "conj.multiplier_extraction",
        anchor: "C_Theta = M_U J~ with U(z) = conj(z) Theta(z), U unitary G-symmetric",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 2 * d.gt + 8,
        run: conjugation_checks::multiplier_extraction,
    },
    CheckDef {
        id: "conj.block_factorization",
        anchor: "C_{Lambda,Psi} = M_U J~ (+) M_V J~ with V = Lambda U' Lambda",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| d.gt + clp_margin(d) + 2,
        run: conjugation_checks::block_factorization_check,
    },
    CheckDef {
        id: "matto.adjoint",
        anchor: "A_Phi(T1->T2)* = A_{Phi*}(T2->T1) on frames",
        kind: CheckKind::UpperBound,
        tol: 1e-11,
        demand: |d| 3 * d.gt + d.b_general,
        run: operator_checks::matto_adjoint,
    },
    CheckDef {
        id: "matto.model_shift",
        anchor: "S_Theta = A_z contraction with S_Theta* = A_{conj z}",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 3 * d.gt + 1,
        run: operator_checks::model_shift_check,
    },
    CheckDef {
        id: "matto.symbol_transform",
        anchor: "C_T2 A_Phi C_T1 = A_Psi, Psi = G T2* Phi T1 G",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 4 * d.gt + d.b_general + 2,
        run: operator_checks::symbol_transform_identity,
    },
    CheckDef {
        id: "matto.symbol_transform_alt",
        anchor: "G T2* Phi T1 G = T2 (Phi)_G T1*",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: operator_checks::symbol_transform_alt,
    },
    CheckDef {
        id: "matto.symbol_transform_roundtrip",
        anchor: "transforming the symbol twice returns the operator",
        kind: CheckKind::UpperBound,
        tol: 1e-9,
        demand: |d| 4 * d.gt + 3 * d.gl + d.b_general + 2,
        run: operator_checks::symbol_transform_roundtrip,
    },
    CheckDef {
        id: "hankel.analytic_vanishes",
        anchor: "H_Phi = 0 iff Phi is analytic",
        kind: CheckKind::UpperBound,
        tol: 1e-14,
        demand: |d| d.b_general + 2,
        run: operator_checks::hankel_analytic_vanishes,
    },
    CheckDef {
        id: "hankel.factorization",
        anchor: "H~_Theta H_{Theta* Phi} = A_Phi on K_Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 3 * d.gt + d.b_general,
        run: operator_checks::hankel_factorization,
    },
    CheckDef {
        id: "hankel.proj_identity_1",
        anchor: "P_Theta = Theta P_- Theta* - P_-",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: decomp_demand,
        run: operator_checks::proj_identity_1,
    },
    CheckDef {
        id: "hankel.proj_identity_2",
        anchor: "P_Theta = Theta P_- Theta* P_+",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: decomp_demand,
        run: operator_checks::proj_identity_2,
    },
    CheckDef {
        id: "hankel.proj_identity_3",
        anchor: "P_Theta = P_+ Lambda P_- Lambda* + Lambda P_Psi Lambda* = P_+ Theta P_- Theta*",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: decomp_demand,
        run: operator_checks::proj_identity_3,
    },
    CheckDef {
        id: "eq412.symmetric_commuting",
        anchor: "C_Theta A_Phi C_Theta = A_{Phi*} for G-symmetric Phi commuting with Theta",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 5 * d.gt + d.b_structured + 2,
        run: operator_checks::eq412_symmetric_commuting,
    },
    CheckDef {
        id: "eq412.counterexample",
        anchor: "Phi = E12, Theta = diag(z, z^2): C_Theta A_Phi C_Theta != A_{Phi*}",
        kind: CheckKind::LowerBound,
        tol: 1e-3,
        demand: none,
        run: operator_checks::eq412_counterexample,
    },
    CheckDef {
        id: "defect.intermediate_1",
        anchor: "A_Phi(T->L) = A_Phi(L) P_L + P_L Phi Lambda P_Psi Lambda*",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 3 * d.gt + 4 * d.gl + 2 * d.gp + d.b_general + 2,
        run: operator_checks::intermediate_identity_1,
    },
    CheckDef {
        id: "defect.intermediate_2",
        anchor: "A_{Phi*}(L->T) = A_{Phi*}(L) + Lambda P_Psi Lambda* Phi* P_L",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: |d| 3 * d.gt + 4 * d.gl + 2 * d.gp + d.b_general + 2,
        run: operator_checks::intermediate_identity_2,
    },
    CheckDef {
        id: "defect.lhs_eq_rhs",
        anchor: "(A_Phi(T->L) C_{L,P} - C_{L,P} A_{Phi*}(L->T)) f = (H~_L H_Phi C_T - H~_T H_Phi C_L P_L) f",
        kind: CheckKind::UpperBound,
        tol: 1e-9,
        demand: |d| clp_margin(d) + 3 * d.gt + 2 * d.gl + d.b_structured + 2,
        run: operator_checks::defect_lhs_eq_rhs,
    },
    CheckDef {
        id: "defect.nonzero_witness",
        anchor: "designated instance with ||lhs|| >= 1e-3 (no equality with C_Theta-symmetry in general)",
        kind: CheckKind::LowerBound,
        tol: 1e-3,
        demand: none,
        run: operator_checks::defect_nonzero_witness,
    },
    CheckDef {
        id: "oracle.mult",
        anchor: "M_Phi section = quadrature-sampled multiplication",
        kind: CheckKind::UpperBound,
        tol: 1e-8,
        demand: |d| 2 * d.gt + d.b_general + 2,
        run: oracle_checks::mult,
    },
    CheckDef {
        id: "oracle.proj_model",
        anchor: "P_Theta section = P_+ - M_Theta P_+ M_{Theta*} with sampled multiplications",
        kind: CheckKind::UpperBound,
        tol: 1e-8,
        demand: |d| 2 * d.gt + d.b_general + 2,
        run: oracle_checks::proj_model_oracle,
    },
    CheckDef {
        id: "oracle.hankel",
        anchor: "H_Phi section = P_- (sampled M_Phi) P_+",
        kind: CheckKind::UpperBound,
        tol: 1e-8,
        demand: |d| 2 * d.gt + d.b_general + 2,
        run: oracle_checks::hankel_oracle,
    },
    CheckDef {
        id: "oracle.hankel_tilde",
        anchor: "H~_Psi section = P_+ (sampled M_Psi) P_-",
        kind: CheckKind::UpperBound,
        tol: 1e-8,
        demand: |d| 2 * d.gt + d.b_general + 2,
        run: oracle_checks::hankel_tilde_oracle,
    },
    CheckDef {
        id: "oracle.matto",
        anchor: "A_Phi section = (sampled P_Theta)(sampled M_Phi)",
        kind: CheckKind::UpperBound,
        tol: 1e-8,
        demand: |d| 2 * d.gt + d.b_general + 2,
        run: oracle_checks::matto_oracle,
    },
    CheckDef {
        id: "scalar.basis",
        anchor: "d=1: K_{z^n} has basis {1, z, ..., z^{n-1}}",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: scalar_checks::basis,
    },
    CheckDef {
        id: "scalar.ctheta_flip",
        anchor: "d=1: C_theta z^k = z^{n-1-k}",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: scalar_checks::ctheta_flip,
    },
    CheckDef {
        id: "scalar.shift_nilpotent",
        anchor: "d=1: S_theta is the nilpotent lower shift",
        kind: CheckKind::UpperBound,
        tol: 1e-12,
        demand: none,
        run: scalar_checks::shift_nilpotent,
    },
    CheckDef {
        id: "scalar.c_symmetric",
        anchor: "d=1: C_theta A_phi C_theta = A_{conj phi} for every phi",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: none,
        run: scalar_checks::c_symmetric,
    },
    CheckDef {
        id: "scalar.hankel_toeplitz",
        anchor: "d=1: H~_theta H_{conj(theta) phi} = A_phi",
        kind: CheckKind::UpperBound,
        tol: 1e-10,
        demand: none,
        run: scalar_checks::hankel_toeplitz,
    },
];

pub fn find(id: &str) -> Option<&'static CheckDef> {
    CATALOGUE.iter().find(|c| c.id == id)
}

/// Spectral norm of `(a − b)` applied to the (possibly conjugated) frame.
pub(crate) fn frame_defect(
    a: &DMatrix<C64>,
    b: &DMatrix<C64>,
    frame: &DMatrix<C64>,
    conjugate_frame: bool,
) -> f64 {
    let f = if conjugate_frame {
        frame.map(|z| z.conj())
    } else {
        frame.clone()
    };
    mvtto_core::linalg::spectral_norm(&((a - b) * f))
}

/// Spectral norm of the sub-block on frequencies `|n| <= safe` of `m`.
pub(crate) fn block_norm(m: &DMatrix<C64>, w: Window, safe: usize) -> f64 {
    let n = safe as i64;
    let idx: Vec<usize> = (-n..=n)
        .flat_map(|f| (0..w.dim()).map(move |i| w.index(f, i)))
        .collect();
    let mut sub = DMatrix::<C64>::zeros(idx.len(), idx.len());
    for (r, &ri) in idx.iter().enumerate() {
        for (s, &ci) in idx.iter().enumerate() {
            sub[(r, s)] = m[(ri, ci)];
        }
    }
    mvtto_core::linalg::spectral_norm(&sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_ids_are_unique_and_anchored() {
        let mut seen = std::collections::BTreeSet::new();
        for c in CATALOGUE {
            assert!(seen.insert(c.id), "duplicate check id {}", c.id);
            assert!(!c.anchor.is_empty());
            assert!(c.tol > 0.0);
        }
        assert!(CATALOGUE.len() >= 45);
    }

    #[test]
    fn tol_scaling() {
        let def = find("decomp.projection_sum").unwrap();
        assert_eq!(def.effective_tol(1e-9), 1e-10);
        assert_eq!(def.effective_tol(0.0), 0.0);
        assert!(def.passes(5e-11, 1e-9));
        assert!(!def.passes(5e-11, 0.0));

        let witness = find("eq412.counterexample").unwrap();
        assert!(witness.passes(1e-2, 1e-9));
        assert!(!witness.passes(1e-2, 0.0));
    }
}
