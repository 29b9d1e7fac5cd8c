//! Weyl symbols of the Dirac operator and its square, the eigen-decomposition
//! of the principal symbol, and the classical Hamiltonian families of the
//! different semiclassical limits.
//!
//! The symbol of the minimally coupled operator is
//! `D(p, x) = gamma_mu (p_mu - (hbar g / 2) X^a A_mu^a(x))`, assembled as
//! `gamma_mu kron M_mu` on the spinor-times-colour space. The principal part
//! `gamma_mu p_mu` has eigenvalues `+-|p|`, each twice, with the eigenvector
//! matrices used throughout the transport analysis.

use thiserror::Error;

use crate::algebra::{build_gamma, pauli, AbelianField, AlgebraError, GaugeField};
use crate::{c64, CMat};

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("eigenvector matrices undefined at p = 0 (Lambda = 0 is a singular point)")]
    SingularPoint,
    #[error("negative radicand {radicand:.6e} in square-root Hamiltonian (strong spin coupling at small lambda)")]
    NegativeRadicand { radicand: f64 },
    #[error("hamiltonian kind {kind:?} requires a {expected} field context")]
    FieldMismatch {
        kind: HamiltonianKind,
        expected: &'static str,
    },
    #[error("dimension mismatch: momentum has d = {momentum}, field has d = {field}")]
    DimensionMismatch { momentum: usize, field: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Couplings threaded through the Hamiltonian families: non-Abelian `g`,
/// Abelian `e`, and `hbar` (defaults to 1).
#[derive(Debug, Clone, Copy)]
pub struct CouplingParams {
    pub g: f64,
    pub e: f64,
    pub hbar: f64,
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self {
            g: 1.0,
            e: 1.0,
            hbar: 1.0,
        }
    }
}

/// Which background a Hamiltonian is evaluated in.
#[derive(Clone, Copy)]
pub enum FieldContext<'a> {
    Free,
    Abelian(&'a AbelianField),
    NonAbelian(&'a GaugeField),
}

/// `sum_i sigma_i v_i` as a 2x2 matrix.
pub fn sigma_dot(v: [f64; 3]) -> CMat {
    let s = pauli();
    &s[0] * c64(v[0], 0.0) + &s[1] * c64(v[1], 0.0) + &s[2] * c64(v[2], 0.0)
}

// ---------------------------------------------------------------------------
// Symbols.
// ---------------------------------------------------------------------------

/// Weyl symbol `D(p, x) = gamma_mu kron (p_mu 1_J - (hbar g / 2) X^a A_mu^a(x))`,
/// a Hermitean matrix of size `(spinor dim) * J`.
pub fn dirac_symbol(
    p: &[f64],
    x: &[f64],
    field: &GaugeField,
    hbar: f64,
) -> Result<CMat, SymbolError> {
    let d = p.len();
    if d != field.dim() {
        return Err(SymbolError::DimensionMismatch {
            momentum: d,
            field: field.dim(),
        });
    }
    let gammas = build_gamma(d)?;
    let j = field.algebra().dim_rep();
    let id_j = CMat::identity(j, j);
    let size = gammas.spinor_dim() * j;
    let mut out = CMat::zeros(size, size);
    for mu in 0..d {
        let m_mu = &id_j * c64(p[mu], 0.0)
            - field.potential_matrix(x, mu) * c64(hbar * field.coupling(), 0.0);
        out += gammas.gamma(mu).kronecker(&m_mu);
    }
    Ok(out)
}

/// Eigen-data of the principal symbol `gamma_mu pi_mu` in d=4: the doubly
/// degenerate eigenvalues `+-|pi|` and the 4x2 eigenvector matrices.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: CMat,
    pub v_minus: CMat,
}

/// Eigen-decomposition of the principal symbol at (kinetic) momentum `pi`.
///
/// Fails at `pi = 0`, where the eigenvector matrices are undefined.
pub fn principal_eigen(pi: &[f64; 4]) -> Result<EigenPair, SymbolError> {
    let lambda = norm4(pi);
    if lambda < 1e-300 {
        return Err(SymbolError::SingularPoint);
    }
    let spatial = sigma_dot([pi[0], pi[1], pi[2]]);
    let id = CMat::identity(2, 2);
    // (pi_4 + i sigma.pi) / Lambda and its conjugate
    let w_plus = (&id * c64(pi[3], 0.0) + &spatial * c64(0.0, 1.0)) / c64(lambda, 0.0);
    let w_minus = (&id * c64(pi[3], 0.0) - &spatial * c64(0.0, 1.0)) / c64(lambda, 0.0);
    let inv_sqrt2 = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v_plus = CMat::zeros(4, 2);
    v_plus.view_mut((0, 0), (2, 2)).copy_from(&(&id * inv_sqrt2));
    v_plus
        .view_mut((2, 0), (2, 2))
        .copy_from(&(&w_plus * inv_sqrt2));
    let mut v_minus = CMat::zeros(4, 2);
    v_minus
        .view_mut((0, 0), (2, 2))
        .copy_from(&(&w_minus * inv_sqrt2));
    v_minus
        .view_mut((2, 0), (2, 2))
        .copy_from(&(&id * (-inv_sqrt2)));
    Ok(EigenPair {
        lambda_plus: lambda,
        lambda_minus: -lambda,
        v_plus,
        v_minus,
    })
}

fn norm4(p: &[f64; 4]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_slice(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Classical Hamiltonians.
// ---------------------------------------------------------------------------

/// The classical Hamiltonian families arising in the different limits.
///
/// * `Free*`: `+-|p|`;
/// * `Abelian*`: `+-|p - e A(x)|`;
/// * `Wong*`: `+-|p - g A^a(x) C^a|` (minimally coupled colour);
/// * `Pauli*`: `Lambda_pm - (e/Lambda_pm) s.(E +- B)` (linear spin coupling);
/// * `Sqrt*`: `+-sqrt(|pi|^2 - 2e s.(E +- B))`;
/// * `Triple*`: the square-root form with colour-contracted field strengths,
///   all internal degrees of freedom classical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianKind {
    FreePlus,
    FreeMinus,
    AbelianPlus,
    AbelianMinus,
    WongPlus,
    WongMinus,
    PauliPlus,
    PauliMinus,
    SqrtPlus,
    SqrtMinus,
    TriplePlus,
    TripleMinus,
}

impl HamiltonianKind {
    pub fn is_minus(self) -> bool {
        matches!(
            self,
            Self::FreeMinus
                | Self::AbelianMinus
                | Self::WongMinus
                | Self::PauliMinus
                | Self::SqrtMinus
                | Self::TripleMinus
        )
    }

    fn sign(self) -> f64 {
        if self.is_minus() {
            -1.0
        } else {
            1.0
        }
    }
}

/// Kinetic momentum `pi_mu = p_mu - g A_mu^a(x) C^a` of the minimally
/// coupled colour Hamiltonians.
pub fn kinetic_momentum(
    p: &[f64],
    x: &[f64],
    colour: &[f64],
    field: &GaugeField,
    g: f64,
) -> Vec<f64> {
    let a = field.potential(x);
    (0..p.len())
        .map(|mu| {
            let mut shift = 0.0;
            for (c, val) in colour.iter().enumerate() {
                shift += a[(mu, c)] * val;
            }
            p[mu] - g * shift
        })
        .collect()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Colour-contracted field-strength 3-vectors `sum_a (E^a + sign B^a) C^a`.
pub(crate) fn colour_contracted_eb(
    field: &GaugeField,
    x: &[f64],
    colour: &[f64],
    sign: f64,
) -> [f64; 3] {
    let f = field.field_strength(x);
    let mut w = [0.0; 3];
    for (a, c) in colour.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let e = f.electric(a);
        let b = f.magnetic(a);
        for i in 0..3 {
            w[i] += (e[i] + sign * b[i]) * c;
        }
    }
    w
}

/// Evaluate the classical Hamiltonian of the given kind at a phase-space
/// point `(p, x, C, s)`.
pub fn classical_hamiltonian(
    kind: HamiltonianKind,
    p: &[f64],
    x: &[f64],
    colour: &[f64],
    spin: [f64; 3],
    field: &FieldContext,
    params: &CouplingParams,
) -> Result<f64, SymbolError> {
    use HamiltonianKind::*;
    let sign = kind.sign();
    match kind {
        FreePlus | FreeMinus => Ok(sign * norm_slice(p)),
        AbelianPlus | AbelianMinus => {
            let ab = expect_abelian(kind, field)?;
            let pi = abelian_kinetic(p, x, ab, params.e)?;
            Ok(sign * norm4(&pi))
        }
        WongPlus | WongMinus => {
            let gauge = expect_non_abelian(kind, field)?;
            let pi = kinetic_momentum(p, x, colour, gauge, params.g);
            Ok(sign * norm_slice(&pi))
        }
        PauliPlus | PauliMinus => {
            let ab = expect_abelian(kind, field)?;
            let pi = abelian_kinetic(p, x, ab, params.e)?;
            let lambda = norm4(&pi);
            if lambda < 1e-300 {
                return Err(SymbolError::SingularPoint);
            }
            let x4 = fixed4(x);
            let e_vec = ab.electric(&x4);
            let b_vec = ab.magnetic(&x4);
            let w = [
                e_vec[0] + sign * b_vec[0],
                e_vec[1] + sign * b_vec[1],
                e_vec[2] + sign * b_vec[2],
            ];
            // Lambda_pm - (e / Lambda_pm) s.(E +- B), Lambda_pm = sign*lambda
            Ok(sign * lambda - params.e / (sign * lambda) * dot3(spin, w))
        }
        SqrtPlus | SqrtMinus => {
            let ab = expect_abelian(kind, field)?;
            let pi = abelian_kinetic(p, x, ab, params.e)?;
            let x4 = fixed4(x);
            let e_vec = ab.electric(&x4);
            let b_vec = ab.magnetic(&x4);
            let w = [
                e_vec[0] + sign * b_vec[0],
                e_vec[1] + sign * b_vec[1],
                e_vec[2] + sign * b_vec[2],
            ];
            let radicand = pi.iter().map(|v| v * v).sum::<f64>() - 2.0 * params.e * dot3(spin, w);
            if radicand < 0.0 {
                return Err(SymbolError::NegativeRadicand { radicand });
            }
            Ok(sign * radicand.sqrt())
        }
        TriplePlus | TripleMinus => {
            let gauge = expect_non_abelian(kind, field)?;
            let pi = kinetic_momentum(p, x, colour, gauge, params.g);
            let w = colour_contracted_eb(gauge, x, colour, sign);
            let radicand = pi.iter().map(|v| v * v).sum::<f64>() - 2.0 * params.g * dot3(spin, w);
            if radicand < 0.0 {
                return Err(SymbolError::NegativeRadicand { radicand });
            }
            Ok(sign * radicand.sqrt())
        }
    }
}

fn expect_abelian<'a>(
    kind: HamiltonianKind,
    field: &FieldContext<'a>,
) -> Result<&'a AbelianField, SymbolError> {
    match field {
        FieldContext::Abelian(f) => Ok(f),
        _ => Err(SymbolError::FieldMismatch {
            kind,
            expected: "Abelian",
        }),
    }
}

fn expect_non_abelian<'a>(
    kind: HamiltonianKind,
    field: &FieldContext<'a>,
) -> Result<&'a GaugeField, SymbolError> {
    match field {
        FieldContext::NonAbelian(f) => Ok(f),
        _ => Err(SymbolError::FieldMismatch {
            kind,
            expected: "non-Abelian",
        }),
    }
}

fn fixed4(x: &[f64]) -> [f64; 4] {
    let mut out = [0.0; 4];
    let n = x.len().min(4);
    out[..n].copy_from_slice(&x[..n]);
    out
}

fn abelian_kinetic(
    p: &[f64],
    x: &[f64],
    field: &AbelianField,
    e: f64,
) -> Result<[f64; 4], SymbolError> {
    if p.len() != 4 {
        return Err(SymbolError::DimensionMismatch {
            momentum: p.len(),
            field: 4,
        });
    }
    let a = field.potential(&fixed4(x));
    let mut pi = [0.0; 4];
    for mu in 0..4 {
        pi[mu] = p[mu] - e * a[mu];
    }
    Ok(pi)
}

// ---------------------------------------------------------------------------
// Symbol of the squared operator.
// ---------------------------------------------------------------------------

/// Which calculus the squared-operator symbol is taken in: `Weyl` keeps spin
/// and colour as matrix degrees of freedom (with their explicit hbar
/// grading); `Triple` maps them to the classical variables `(C, s)` and
/// yields a diagonal 2x2 block structure.
pub enum SquaredSymbolForm<'a> {
    Weyl,
    Triple { colour: &'a [f64], spin: [f64; 3] },
}

/// Symbol of the squared operator.
///
/// In the `Weyl` form this is
/// `(p - hbar g A)^2 - hbar^2 g diag(sigma.(B+E), sigma.(B-E))` with the
/// colour matrices `A, E, B`; in d=2 the spin block degenerates to
/// `-hbar^2 g sigma_3 kron F_12`. In the `Triple` form all internal degrees
/// of freedom are classical and the result is diagonal with two scalar
/// blocks.
pub fn dirac_squared_symbol(
    p: &[f64],
    x: &[f64],
    field: &GaugeField,
    hbar: f64,
    form: SquaredSymbolForm,
) -> Result<CMat, SymbolError> {
    let d = p.len();
    if d != field.dim() {
        return Err(SymbolError::DimensionMismatch {
            momentum: d,
            field: field.dim(),
        });
    }
    match form {
        SquaredSymbolForm::Weyl => {
            let g = field.coupling();
            let j = field.algebra().dim_rep();
            let id_j = CMat::identity(j, j);
            let mut m = CMat::zeros(j, j);
            for mu in 0..d {
                let k_mu =
                    &id_j * c64(p[mu], 0.0) - field.potential_matrix(x, mu) * c64(hbar * g, 0.0);
                m += &k_mu * &k_mu;
            }
            let fs = field.field_strength(x);
            let algebra = field.algebra();
            let na = algebra.num_generators();
            let colour_matrix = |coeffs: Vec<f64>| -> CMat {
                algebra.matrix_from_coeffs(&coeffs) * c64(0.5, 0.0)
            };
            if d == 2 {
                let mut out = CMat::identity(2, 2).kronecker(&m);
                let f12 = colour_matrix((0..na).map(|a| fs.get(0, 1, a)).collect());
                let s = pauli();
                out -= s[2].kronecker(&f12) * c64(hbar * hbar * g, 0.0);
                Ok(out)
            } else {
                let mut out = CMat::identity(4, 4).kronecker(&m);
                let s = pauli();
                let mut upper = CMat::zeros(2 * j, 2 * j);
                let mut lower = CMat::zeros(2 * j, 2 * j);
                for i in 0..3 {
                    let b_i = colour_matrix((0..na).map(|a| fs.magnetic(a)[i]).collect());
                    let e_i = colour_matrix((0..na).map(|a| fs.electric(a)[i]).collect());
                    upper += s[i].kronecker(&(&b_i + &e_i));
                    lower += s[i].kronecker(&(&b_i - &e_i));
                }
                let h2g = c64(hbar * hbar * g, 0.0);
                let mut spin_block = CMat::zeros(4 * j, 4 * j);
                spin_block
                    .view_mut((0, 0), (2 * j, 2 * j))
                    .copy_from(&upper);
                spin_block
                    .view_mut((2 * j, 2 * j), (2 * j, 2 * j))
                    .copy_from(&lower);
                out -= spin_block * h2g;
                Ok(out)
            }
        }
        SquaredSymbolForm::Triple { colour, spin } => {
            if d != 4 {
                return Err(SymbolError::DimensionMismatch {
                    momentum: d,
                    field: 4,
                });
            }
            let g = field.coupling();
            let pi = kinetic_momentum(p, x, colour, field, g);
            let pi2: f64 = pi.iter().map(|v| v * v).sum();
            let w_plus = colour_contracted_eb(field, x, colour, 1.0);
            let w_minus = colour_contracted_eb(field, x, colour, -1.0);
            // upper block carries B+E, lower carries B-E
            let upper = pi2 - 2.0 * g * dot3(spin, w_plus);
            let lower = pi2 - 2.0 * g * dot3(spin, w_minus);
            let mut out = CMat::zeros(4, 4);
            out[(0, 0)] = c64(upper, 0.0);
            out[(1, 1)] = c64(upper, 0.0);
            out[(2, 2)] = c64(lower, 0.0);
            out[(3, 3)] = c64(lower, 0.0);
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// Projected transport identities (Abelian background).
// ---------------------------------------------------------------------------

/// Residuals of the projected transport relations for the eigenvector
/// matrices in an Abelian background:
///
/// 1. `V+^dag gamma_mu V+ = (pi_mu / Lambda) 1` (minus branch with the
///    opposite sign);
/// 2. the non-scalar part of `V^dag (d_t + gamma_mu d_mu) V` equals
///    `-(i e / (2 Lambda)) sigma.(B + E)` on the plus branch and
///    `-(i e / (2 Lambda^-)) sigma.(E - B)` on the minus branch, with the
///    Hamilton-Jacobi consistent time derivatives
///    `d pi_mu / d t = -+ (pi_nu / Lambda) d_mu pi_nu`.
#[derive(Debug, Clone, Copy)]
pub struct TransportIdentityReport {
    pub gamma_projection_plus: f64,
    pub gamma_projection_minus: f64,
    pub spin_term_plus: f64,
    pub spin_term_minus: f64,
}

impl TransportIdentityReport {
    pub fn max(&self) -> f64 {
        self.gamma_projection_plus
            .max(self.gamma_projection_minus)
            .max(self.spin_term_plus)
            .max(self.spin_term_minus)
    }
}

/// Evaluate the projected-transport residuals at one phase-space point.
///
/// `hessian` is the symmetric second-derivative matrix of the phase
/// entering through `pi = grad S - e A`; it only feeds the scalar part, so
/// the residuals must vanish for any choice.
pub fn projected_transport_residuals(
    p: &[f64; 4],
    x: &[f64; 4],
    field: &AbelianField,
    e: f64,
    hessian: &[[f64; 4]; 4],
) -> Result<TransportIdentityReport, SymbolError> {
    let a = field.potential(x);
    let da = field.derivative(x);
    let mut pi = [0.0; 4];
    for mu in 0..4 {
        pi[mu] = p[mu] - e * a[mu];
    }
    let lambda = norm4(&pi);
    if lambda < 1e-300 {
        return Err(SymbolError::SingularPoint);
    }
    // d_mu pi_nu = H_mu_nu - e d_mu A_nu
    let mut dpi = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            dpi[mu][nu] = hessian[mu][nu] - e * da[mu][nu];
        }
    }
    let gammas = build_gamma(4)?;
    let eigen = principal_eigen(&pi)?;
    let e_vec = field.electric(x);
    let b_vec = field.magnetic(x);

    let mut report = TransportIdentityReport {
        gamma_projection_plus: 0.0,
        gamma_projection_minus: 0.0,
        spin_term_plus: 0.0,
        spin_term_minus: 0.0,
    };

    for minus in [false, true] {
        let branch_sign = if minus { -1.0 } else { 1.0 };
        let v = if minus { &eigen.v_minus } else { &eigen.v_plus };

        // identity 1: projections of the gamma matrices
        let mut worst = 0.0f64;
        for mu in 0..4 {
            let proj = v.adjoint() * gammas.gamma(mu) * v;
            let want = CMat::identity(2, 2) * c64(branch_sign * pi[mu] / lambda, 0.0);
            worst = worst.max(crate::max_abs(&(proj - want)));
        }
        if minus {
            report.gamma_projection_minus = worst;
        } else {
            report.gamma_projection_plus = worst;
        }

        // identity 2: non-scalar part of V^dag (d_t + gamma_mu d_mu) V
        let dv: Vec<CMat> = (0..4)
            .map(|nu| eigenvector_derivative(&pi, lambda, nu, minus))
            .collect();
        let mut dpi_dt = [0.0; 4];
        for nu in 0..4 {
            let mut acc = 0.0;
            for rho in 0..4 {
                acc += pi[rho] / lambda * dpi[nu][rho];
            }
            dpi_dt[nu] = -branch_sign * acc;
        }
        let mut total = CMat::zeros(4, 2);
        for nu in 0..4 {
            total += &dv[nu] * c64(dpi_dt[nu], 0.0);
        }
        for mu in 0..4 {
            let mut dmu_v = CMat::zeros(4, 2);
            for nu in 0..4 {
                dmu_v += &dv[nu] * c64(dpi[mu][nu], 0.0);
            }
            total += gammas.gamma(mu) * dmu_v;
        }
        let projected = v.adjoint() * total;
        let trace_half = projected.trace() / c64(2.0, 0.0);
        let nonscalar = &projected - CMat::identity(2, 2) * trace_half;
        // plus: -(i e / 2 Lambda) sigma.(B+E); minus: -(i e / 2 Lambda^-) sigma.(E-B)
        let w = if minus {
            [
                e_vec[0] - b_vec[0],
                e_vec[1] - b_vec[1],
                e_vec[2] - b_vec[2],
            ]
        } else {
            [
                b_vec[0] + e_vec[0],
                b_vec[1] + e_vec[1],
                b_vec[2] + e_vec[2],
            ]
        };
        let target = sigma_dot(w) * c64(0.0, -e / (2.0 * branch_sign * lambda));
        let res = crate::max_abs(&(nonscalar - target));
        if minus {
            report.spin_term_minus = res;
        } else {
            report.spin_term_plus = res;
        }
    }
    Ok(report)
}

/// Analytic derivative of the eigenvector matrix with respect to `pi_nu`.
fn eigenvector_derivative(pi: &[f64; 4], lambda: f64, nu: usize, minus: bool) -> CMat {
    let id = CMat::identity(2, 2);
    let spatial = sigma_dot([pi[0], pi[1], pi[2]]);
    let conj_sign = if minus { -1.0 } else { 1.0 };
    // N = pi_4 + (sign) i sigma.pi; the varying block is W = N / Lambda
    let n = &id * c64(pi[3], 0.0) + &spatial * c64(0.0, conj_sign);
    let dn = if nu == 3 {
        id.clone()
    } else {
        let mut unit = [0.0; 3];
        unit[nu] = 1.0;
        sigma_dot(unit) * c64(0.0, conj_sign)
    };
    let dw = dn / c64(lambda, 0.0) - n * c64(pi[nu] / (lambda * lambda * lambda), 0.0);
    let inv_sqrt2 = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut dv = CMat::zeros(4, 2);
    if minus {
        dv.view_mut((0, 0), (2, 2)).copy_from(&(&dw * inv_sqrt2));
    } else {
        dv.view_mut((2, 0), (2, 2)).copy_from(&(&dw * inv_sqrt2));
    }
    dv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_su, special_su2_field};
    use crate::rng::BlockRng;
    use crate::{hermiticity_residual, max_abs};
    use nalgebra::DMatrix;
    use std::sync::Arc;

    fn random_constant_field(seed: u64, n: usize, dim: usize, scale: f64) -> GaugeField {
        let su = Arc::new(build_su(n).unwrap());
        let mut rng = BlockRng::new(seed).block(0);
        let coeffs = crate::rng::random_constant_coeffs(&mut rng, dim, su.num_generators(), scale);
        GaugeField::constant(su, 1.0, coeffs)
    }

    fn hermitean_eigenvalues(m: &CMat) -> Vec<f64> {
        let mut ev: Vec<f64> = m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn free_symbol_is_gamma_dot_p() {
        let su3 = Arc::new(build_su(3).unwrap());
        let field = GaugeField::zero(su3, 1.0, 4);
        let p = [0.3, -1.2, 0.5, 2.0];
        let sym = dirac_symbol(&p, &[0.0; 4], &field, 1.0).unwrap();
        let gammas = build_gamma(4).unwrap();
        let mut want = CMat::zeros(12, 12);
        for mu in 0..4 {
            want += gammas.gamma(mu).kronecker(&CMat::identity(3, 3)) * c64(p[mu], 0.0);
        }
        assert!(max_abs(&(sym - want)) < 1e-15);
    }

    #[test]
    fn zero_momentum_symbol_is_subprincipal_part() {
        let field = random_constant_field(1, 2, 4, 0.8);
        let hbar = 0.5;
        let sym = dirac_symbol(&[0.0; 4], &[0.0; 4], &field, hbar).unwrap();
        let gammas = build_gamma(4).unwrap();
        let mut want = CMat::zeros(8, 8);
        for mu in 0..4 {
            want -= gammas
                .gamma(mu)
                .kronecker(&field.potential_matrix(&[0.0; 4], mu))
                * c64(hbar * field.coupling(), 0.0);
        }
        assert!(hermiticity_residual(&sym) < 1e-15);
        assert!(max_abs(&(sym - want)) < 1e-15);
    }

    #[test]
    fn principal_symbol_squares_to_p_squared() {
        let su2 = Arc::new(build_su(2).unwrap());
        let field = GaugeField::zero(su2, 1.0, 4);
        let mut rng = BlockRng::new(2).block(0);
        for _ in 0..10 {
            let p: Vec<f64> = (0..4).map(|_| crate::rng::normal(&mut rng)).collect();
            let sym = dirac_symbol(&p, &[0.0; 4], &field, 1.0).unwrap();
            let sq = &sym * &sym;
            let p2: f64 = p.iter().map(|v| v * v).sum();
            let want = CMat::identity(8, 8) * c64(p2, 0.0);
            assert!(max_abs(&(sq - want)) < 1e-13);
        }
    }

    #[test]
    fn eigenpair_at_unit_time_momentum() {
        let pair = principal_eigen(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(pair.lambda_plus, 1.0);
        assert_eq!(pair.lambda_minus, -1.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { c64(r, 0.0) } else { c64(0.0, 0.0) };
                assert!((pair.v_plus[(i, j)] - want).norm() < 1e-15);
                assert!((pair.v_plus[(i + 2, j)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn eigenpair_diagonalises_principal_symbol() {
        let mut rng = BlockRng::new(3).block(0);
        let gammas = build_gamma(4).unwrap();
        for _ in 0..25 {
            let mut p = [0.0; 4];
            for v in &mut p {
                *v = crate::rng::normal(&mut rng);
            }
            let pair = principal_eigen(&p).unwrap();
            let gram_p = pair.v_plus.adjoint() * &pair.v_plus;
            let gram_m = pair.v_minus.adjoint() * &pair.v_minus;
            assert!(max_abs(&(gram_p - CMat::identity(2, 2))) < 1e-12);
            assert!(max_abs(&(gram_m - CMat::identity(2, 2))) < 1e-12);
            let mut d0 = CMat::zeros(4, 4);
            for mu in 0..4 {
                d0 += gammas.gamma(mu) * c64(p[mu], 0.0);
            }
            let res_p = &d0 * &pair.v_plus - &pair.v_plus * c64(pair.lambda_plus, 0.0);
            let res_m = &d0 * &pair.v_minus - &pair.v_minus * c64(pair.lambda_minus, 0.0);
            assert!(max_abs(&res_p) < 1e-12);
            assert!(max_abs(&res_m) < 1e-12);
        }
    }

    #[test]
    fn eigenpair_singular_at_zero() {
        assert!(matches!(
            principal_eigen(&[0.0; 4]),
            Err(SymbolError::SingularPoint)
        ));
    }

    #[test]
    fn wong_reduces_to_free_without_field() {
        let su3 = Arc::new(build_su(3).unwrap());
        let field = GaugeField::zero(su3.clone(), 1.0, 4);
        let params = CouplingParams::default();
        let colour = su3.highest_weight_colour(1.0);
        let p = [0.4, 1.0, -0.7, 0.2];
        let wong = classical_hamiltonian(
            HamiltonianKind::WongPlus,
            &p,
            &[0.0; 4],
            &colour,
            [0.0; 3],
            &FieldContext::NonAbelian(&field),
            &params,
        )
        .unwrap();
        let free = classical_hamiltonian(
            HamiltonianKind::FreePlus,
            &p,
            &[0.0; 4],
            &[],
            [0.0; 3],
            &FieldContext::Free,
            &params,
        )
        .unwrap();
        assert_eq!(wong, free);
    }

    #[test]
    fn plus_and_minus_branches_negate_exactly() {
        let field = random_constant_field(4, 3, 4, 0.6);
        let params = CouplingParams::default();
        let colour = field.algebra().highest_weight_colour(1.0);
        let p = [1.3, -0.2, 0.8, 0.4];
        let ctx = FieldContext::NonAbelian(&field);
        let plus = classical_hamiltonian(
            HamiltonianKind::WongPlus,
            &p,
            &[0.0; 4],
            &colour,
            [0.0; 3],
            &ctx,
            &params,
        )
        .unwrap();
        let minus = classical_hamiltonian(
            HamiltonianKind::WongMinus,
            &p,
            &[0.0; 4],
            &colour,
            [0.0; 3],
            &ctx,
            &params,
        )
        .unwrap();
        assert_eq!(plus, -minus);
        let fp = classical_hamiltonian(
            HamiltonianKind::FreePlus,
            &p,
            &[0.0; 4],
            &[],
            [0.0; 3],
            &FieldContext::Free,
            &params,
        )
        .unwrap();
        let fm = classical_hamiltonian(
            HamiltonianKind::FreeMinus,
            &p,
            &[0.0; 4],
            &[],
            [0.0; 3],
            &FieldContext::Free,
            &params,
        )
        .unwrap();
        assert_eq!(fp, -fm);
    }

    #[test]
    fn wong_shift_invariance() {
        // evaluating the Wong Hamiltonian at the shifted momentum p + g A C
        // recovers the free Hamiltonian at p
        let field = random_constant_field(5, 3, 4, 0.9);
        let params = CouplingParams::default();
        let mut rng = BlockRng::new(6).block(0);
        let su3 = field.algebra();
        let reference = su3.highest_weight_colour(1.0);
        for _ in 0..20 {
            let colour = crate::rng::orbit_sample(&mut rng, su3, &reference);
            let p: Vec<f64> = (0..4).map(|_| crate::rng::normal(&mut rng)).collect();
            let a = field.potential(&[0.0; 4]);
            let shifted: Vec<f64> = (0..4)
                .map(|mu| {
                    let mut s = 0.0;
                    for (c, val) in colour.iter().enumerate() {
                        s += a[(mu, c)] * val;
                    }
                    p[mu] + params.g * s
                })
                .collect();
            let wong = classical_hamiltonian(
                HamiltonianKind::WongPlus,
                &shifted,
                &[0.0; 4],
                &colour,
                [0.0; 3],
                &FieldContext::NonAbelian(&field),
                &params,
            )
            .unwrap();
            let free: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((wong - free).abs() < 1e-12);
        }
    }

    #[test]
    fn pauli_and_sqrt_agree_to_first_order_in_spin() {
        // |H_pauli - H_sqrt| = O(|s|^2): halving |s| divides the gap by ~4
        let mut grad = [[0.0; 4]; 4];
        grad[0][1] = 0.4;
        grad[3][2] = -0.7;
        grad[1][2] = 0.9;
        let ab = AbelianField::linear([0.1, 0.0, -0.3, 0.2], grad);
        let params = CouplingParams::default();
        let p = [1.0, 0.4, -0.3, 2.0];
        let x = [0.5, 0.1, 0.0, -0.4];
        let s0 = [0.04, -0.03, 0.05];
        let ctx = FieldContext::Abelian(&ab);
        let gap = |scale: f64| {
            let s = [s0[0] * scale, s0[1] * scale, s0[2] * scale];
            let pauli =
                classical_hamiltonian(HamiltonianKind::PauliPlus, &p, &x, &[], s, &ctx, &params)
                    .unwrap();
            let sqrt =
                classical_hamiltonian(HamiltonianKind::SqrtPlus, &p, &x, &[], s, &ctx, &params)
                    .unwrap();
            (pauli - sqrt).abs()
        };
        let g1 = gap(1.0);
        let g2 = gap(0.5);
        let g3 = gap(0.25);
        let rate12 = (g1 / g2).log2();
        let rate23 = (g2 / g3).log2();
        assert!((rate12 - 2.0).abs() < 0.1, "first halving rate {rate12}");
        assert!((rate23 - 2.0).abs() < 0.05, "second halving rate {rate23}");
    }

    #[test]
    fn triple_reduces_to_wong_for_vanishing_field_strength() {
        // single-colour-direction constant field: E = B = 0
        let su2 = Arc::new(build_su(2).unwrap());
        let mut coeffs = DMatrix::zeros(4, 3);
        for mu in 0..4 {
            coeffs[(mu, 2)] = 0.2 + 0.3 * mu as f64;
        }
        let field = GaugeField::constant(su2.clone(), 1.0, coeffs);
        let params = CouplingParams::default();
        let colour = su2.highest_weight_colour(1.0);
        let p = [0.9, -0.1, 0.6, 1.4];
        let s = [0.2, 0.1, -0.3];
        let ctx = FieldContext::NonAbelian(&field);
        let triple = classical_hamiltonian(
            HamiltonianKind::TriplePlus,
            &p,
            &[0.0; 4],
            &colour,
            s,
            &ctx,
            &params,
        )
        .unwrap();
        let wong = classical_hamiltonian(
            HamiltonianKind::WongPlus,
            &p,
            &[0.0; 4],
            &colour,
            [0.0; 3],
            &ctx,
            &params,
        )
        .unwrap();
        assert!((triple - wong).abs() < 1e-14);
    }

    #[test]
    fn triple_radicand_is_affine_in_spin() {
        let field = random_constant_field(7, 2, 4, 0.7);
        let params = CouplingParams::default();
        let colour = field.algebra().highest_weight_colour(1.0);
        let p = [1.5, 0.3, -0.2, 0.9];
        let s = [0.05, -0.02, 0.04];
        let ctx = FieldContext::NonAbelian(&field);
        let radicand = |scale: f64| {
            let spin = [s[0] * scale, s[1] * scale, s[2] * scale];
            classical_hamiltonian(
                HamiltonianKind::TriplePlus,
                &p,
                &[0.0; 4],
                &colour,
                spin,
                &ctx,
                &params,
            )
            .unwrap()
            .powi(2)
        };
        let r1 = radicand(1.0);
        let r2 = radicand(2.0);
        let r3 = radicand(3.0);
        // three collinear points: r3 - r2 == r2 - r1
        assert!(((r3 - r2) - (r2 - r1)).abs() < 1e-12);
    }

    #[test]
    fn negative_radicand_is_reported_with_value() {
        let mut grad = [[0.0; 4]; 4];
        grad[3][0] = 3.0; // strong electric field
        let ab = AbelianField::linear([0.0; 4], grad);
        let params = CouplingParams::default();
        let p = [0.01, 0.0, 0.0, 0.0];
        let s = [5.0, 0.0, 0.0];
        let r = classical_hamiltonian(
            HamiltonianKind::SqrtPlus,
            &p,
            &[0.0; 4],
            &[],
            s,
            &FieldContext::Abelian(&ab),
            &params,
        );
        match r {
            Err(SymbolError::NegativeRadicand { radicand }) => assert!(radicand < 0.0),
            other => panic!("expected negative radicand, got {other:?}"),
        }
    }

    #[test]
    fn field_context_mismatch_is_an_error() {
        let params = CouplingParams::default();
        let r = classical_hamiltonian(
            HamiltonianKind::WongPlus,
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0; 4],
            &[],
            [0.0; 3],
            &FieldContext::Free,
            &params,
        );
        assert!(matches!(r, Err(SymbolError::FieldMismatch { .. })));
    }

    #[test]
    fn squared_symbol_free_case() {
        let su3 = Arc::new(build_su(3).unwrap());
        let field = GaugeField::zero(su3, 1.0, 4);
        let p = [0.7, -0.3, 0.2, 1.1];
        let sym =
            dirac_squared_symbol(&p, &[0.0; 4], &field, 1.0, SquaredSymbolForm::Weyl).unwrap();
        let p2: f64 = p.iter().map(|v| v * v).sum();
        assert!(max_abs(&(sym - CMat::identity(12, 12) * c64(p2, 0.0))) < 1e-14);
    }

    #[test]
    fn squared_symbol_matches_square_of_symbol_for_constant_fields() {
        for n in [2usize, 3] {
            let field = random_constant_field(8 + n as u64, n, 4, 0.5);
            let p = [0.8, 0.1, -0.6, 1.2];
            let hbar = 0.7;
            let d = dirac_symbol(&p, &[0.0; 4], &field, hbar).unwrap();
            let direct = &d * &d;
            let sym =
                dirac_squared_symbol(&p, &[0.0; 4], &field, hbar, SquaredSymbolForm::Weyl).unwrap();
            assert!(
                max_abs(&(direct - sym)) < 1e-12,
                "squared symbol vs squared matrix, SU({n})"
            );
        }
    }

    #[test]
    fn squared_symbol_hbar_grading() {
        // the 1 kron X coefficient is O(hbar), the sigma kron X coefficient
        // is O(hbar^2): fit the power by halving hbar
        let field = random_constant_field(11, 2, 4, 0.8);
        let su = field.algebra().clone();
        let x0 = [0.0; 4];
        let colour_coeff = |hbar: f64| {
            let sym = dirac_squared_symbol(
                &[0.9, 0.2, -0.4, 0.5],
                &x0,
                &field,
                hbar,
                SquaredSymbolForm::Weyl,
            )
            .unwrap();
            let probe = CMat::identity(4, 4).kronecker(su.generator(0));
            (sym * probe).trace().re / 8.0
        };
        let spin_colour_coeff = |hbar: f64| {
            let sym = dirac_squared_symbol(
                &[0.9, 0.2, -0.4, 0.5],
                &x0,
                &field,
                hbar,
                SquaredSymbolForm::Weyl,
            )
            .unwrap();
            // embed sigma_1 in the upper chiral block only
            let s = pauli();
            let mut spinor = CMat::zeros(4, 4);
            spinor.view_mut((0, 0), (2, 2)).copy_from(&s[0]);
            let probe = spinor.kronecker(su.generator(0));
            (sym * probe).trace().re / 4.0
        };
        let h = 1e-3;
        let rate_colour = (colour_coeff(h) / colour_coeff(h / 2.0)).log2();
        assert!(
            (rate_colour - 1.0).abs() < 0.01,
            "colour enters at hbar^1, measured {rate_colour}"
        );
        let rate_spin = (spin_colour_coeff(h) / spin_colour_coeff(h / 2.0)).log2();
        assert!(
            (rate_spin - 2.0).abs() < 1e-9,
            "spin enters at hbar^2, measured {rate_spin}"
        );
    }

    #[test]
    fn squared_symbol_d2_constant_su2_spectrum() {
        // d=2 special configuration: eigenvalues of the squared symbol are
        // the squares of the closed-form pair lambda_pm
        let hbar = 1.0;
        let g = 1.0;
        let amp = 1.0;
        let field = special_su2_field(g, amp, 2);
        let a = hbar * g * amp;
        for (n1, n2) in [(0i32, 0i32), (1, 0), (2, 1), (-1, 3)] {
            let p = [n1 as f64, n2 as f64];
            let sym =
                dirac_squared_symbol(&p, &[0.0; 2], &field, hbar, SquaredSymbolForm::Weyl).unwrap();
            let ev = hermitean_eigenvalues(&sym);
            let p2 = p[0] * p[0] + p[1] * p[1];
            let lam_p = (p2 + a * a / 4.0).sqrt() + a / 2.0;
            let lam_m = (p2 + a * a / 4.0).sqrt() - a / 2.0;
            let mut want = vec![lam_m * lam_m, lam_m * lam_m, lam_p * lam_p, lam_p * lam_p];
            want.sort_by(f64::total_cmp);
            for (g1, g2) in ev.iter().zip(&want) {
                assert!((g1 - g2).abs() < 1e-12, "n=({n1},{n2})");
            }
            // cross-check against the square of the operator symbol
            let d = dirac_symbol(&p, &[0.0; 2], &field, hbar).unwrap();
            let ev_d = hermitean_eigenvalues(&(&d * &d));
            for (g1, g2) in ev.iter().zip(&ev_d) {
                assert!((g1 - g2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn squared_symbol_triple_blocks_match_hamiltonians() {
        let field = random_constant_field(13, 3, 4, 0.4);
        let colour = field.algebra().highest_weight_colour(1.0);
        let spin = [0.1, -0.2, 0.15];
        let p = [1.1, 0.4, -0.5, 0.8];
        let params = CouplingParams {
            g: field.coupling(),
            ..Default::default()
        };
        let sym = dirac_squared_symbol(
            &p,
            &[0.0; 4],
            &field,
            1.0,
            SquaredSymbolForm::Triple {
                colour: &colour,
                spin,
            },
        )
        .unwrap();
        let ctx = FieldContext::NonAbelian(&field);
        let h_plus = classical_hamiltonian(
            HamiltonianKind::TriplePlus,
            &p,
            &[0.0; 4],
            &colour,
            spin,
            &ctx,
            &params,
        )
        .unwrap();
        assert!((sym[(0, 0)].re - h_plus * h_plus).abs() < 1e-12);
        assert!((sym[(1, 1)].re - h_plus * h_plus).abs() < 1e-12);
        // lower block carries B - E
        let w_minus = super::colour_contracted_eb(&field, &[0.0; 4], &colour, -1.0);
        let pi = kinetic_momentum(&p, &[0.0; 4], &colour, &field, params.g);
        let pi2: f64 = pi.iter().map(|v| v * v).sum();
        let lower = pi2 - 2.0 * params.g * super::dot3(spin, w_minus);
        assert!((sym[(2, 2)].re - lower).abs() < 1e-12);
    }

    #[test]
    fn transport_identities_hold_at_random_points() {
        let mut grad = [[0.0; 4]; 4];
        grad[0][1] = 0.7;
        grad[3][1] = -0.2;
        grad[2][0] = 0.45;
        grad[1][3] = -0.6;
        let ab = AbelianField::linear([0.2, -0.1, 0.3, 0.05], grad);
        let e = 0.9;
        let mut rng = BlockRng::new(17).block(0);
        for _ in 0..100 {
            let mut p = [0.0; 4];
            for v in &mut p {
                *v = 2.0 * crate::rng::normal(&mut rng);
            }
            let mut x = [0.0; 4];
            for v in &mut x {
                *v = crate::rng::normal(&mut rng);
            }
            // random symmetric Hessian feeds only the scalar part
            let mut hessian = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..=i {
                    let val = crate::rng::normal(&mut rng);
                    hessian[i][j] = val;
                    hessian[j][i] = val;
                }
            }
            let report = match projected_transport_residuals(&p, &x, &ab, e, &hessian) {
                Ok(r) => r,
                Err(SymbolError::SingularPoint) => continue,
                Err(other) => panic!("{other}"),
            };
            assert!(report.max() < 1e-12, "residuals {report:?}");
        }
    }

    #[test]
    fn transport_identities_free_case_has_no_spin_term() {
        // e = 0: the non-scalar term must vanish identically
        let ab = AbelianField::zero();
        let hessian = [[0.0; 4]; 4];
        let report =
            projected_transport_residuals(&[0.4, 0.2, -0.9, 1.3], &[0.0; 4], &ab, 0.0, &hessian)
                .unwrap();
        assert!(report.spin_term_plus < 1e-14);
        assert!(report.spin_term_minus < 1e-14);
    }

    #[test]
    fn transport_identity_branch_targets_differ_when_b_nonzero() {
        // the plus branch pairs B+E with 1/Lambda, the minus branch pairs
        // E-B with 1/Lambda^-; both residuals vanish only with the correct
        // signed assignment
        let mut grad = [[0.0; 4]; 4];
        grad[0][1] = 1.0; // B_3 = 1
        let ab = AbelianField::linear([0.0; 4], grad);
        let hessian = [[0.0; 4]; 4];
        let p = [0.3, -0.8, 0.6, 1.1];
        let report = projected_transport_residuals(&p, &[0.0; 4], &ab, 1.0, &hessian).unwrap();
        assert!(report.max() < 1e-12);
        // with B != 0 and E = 0 the two branch targets have opposite sign;
        // swapping them would leave a residual of order |B|/Lambda
        let lambda = super::norm4(&p);
        let swapped_gap = 1.0 / lambda; // |target_plus - target_minus| scale
        assert!(swapped_gap > 1e-3);
    }
}
