//! Finite-dimensional algebraic substrate: Euclidean gamma matrices, su(N)
//! generators with structure constants and Casimir data, gauge potentials
//! and their field-strength tensors.
//!
//! Conventions. Generators are Hermitean and traceless with
//! `tr(X^a X^b) = 2 delta_ab`, so `[X^a, X^b] = 2i f^{abc} X^c` with *real*
//! antisymmetric `f` (for SU(2) the Pauli matrices with `f = epsilon`, for
//! SU(3) the Gell-Mann matrices). The non-Abelian potential enters as
//! `A_mu = (1/2) A_mu^a X^a`, and in this convention
//! `F_mu_nu^a = d_mu A_nu^a - d_nu A_mu^a + g f^{abc} A_mu^b A_nu^c`.

use std::sync::Arc;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::{c64, CMat};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("unsupported spacetime dimension {0}; expected 2 or 4")]
    UnsupportedDimension(usize),
    #[error("unsupported gauge group SU({0}); expected N >= 2")]
    UnsupportedGroup(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

// ---------------------------------------------------------------------------
// Gamma matrices.
// ---------------------------------------------------------------------------

/// Euclidean gamma matrices: the chiral representation in d=4
/// (`gamma_k = [[0, -i sigma_k], [i sigma_k, 0]]`,
/// `gamma_4 = [[0, 1], [1, 0]]`, `gamma_5 = diag(1, 1, -1, -1)`) and the
/// 2x2 pair `gamma_1 = sigma_1`, `gamma_2 = sigma_2` in d=2.
#[derive(Debug, Clone)]
pub struct GammaSet {
    dim: usize,
    gammas: Vec<CMat>,
    gamma5: Option<CMat>,
}

/// The three Pauli matrices.
pub fn pauli() -> [CMat; 3] {
    let z = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[z, one, one, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// Build the gamma matrices for spacetime dimension `d` (2 or 4).
pub fn build_gamma(d: usize) -> Result<GammaSet, AlgebraError> {
    match d {
        2 => {
            let s = pauli();
            Ok(GammaSet {
                dim: 2,
                gammas: vec![s[0].clone(), s[1].clone()],
                gamma5: None,
            })
        }
        4 => {
            let s = pauli();
            let z = CMat::zeros(2, 2);
            let id = CMat::identity(2, 2);
            let i = c64(0.0, 1.0);
            let mut gammas = Vec::with_capacity(4);
            for sk in &s {
                gammas.push(block2(&z, &(sk * (-i)), &(sk * i), &z));
            }
            gammas.push(block2(&z, &id, &id, &z));
            let gamma5 = &gammas[0] * &gammas[1] * &gammas[2] * &gammas[3];
            Ok(GammaSet {
                dim: 4,
                gammas,
                gamma5: Some(gamma5),
            })
        }
        other => Err(AlgebraError::UnsupportedDimension(other)),
    }
}

fn block2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let n = a.nrows();
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

impl GammaSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the spinor space (2 in d=2, 4 in d=4).
    pub fn spinor_dim(&self) -> usize {
        self.gammas[0].nrows()
    }

    /// `gamma_mu` with zero-based index (index `d-1` is the Euclidean time
    /// direction `gamma_4` in d=4).
    pub fn gamma(&self, mu: usize) -> &CMat {
        &self.gammas[mu]
    }

    pub fn gamma5(&self) -> Option<&CMat> {
        self.gamma5.as_ref()
    }

    /// Largest violation of `{gamma_mu, gamma_nu} = 2 delta_mu_nu` over all
    /// index pairs.
    pub fn anticommutator_residual(&self) -> f64 {
        let n = self.spinor_dim();
        let mut worst = 0.0f64;
        for mu in 0..self.dim {
            for nu in 0..self.dim {
                let anti = self.gamma(mu) * self.gamma(nu) + self.gamma(nu) * self.gamma(mu);
                let expect = if mu == nu { 2.0 } else { 0.0 };
                let delta = anti - CMat::identity(n, n) * c64(expect, 0.0);
                worst = worst.max(crate::max_abs(&delta));
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// su(N) generators.
// ---------------------------------------------------------------------------

/// su(N) generators in the fundamental representation (generalised
/// Gell-Mann basis) together with the derived structure constants, the
/// totally symmetric constants and the quadratic Casimir value.
#[derive(Debug, Clone)]
pub struct LieAlgebraRep {
    n: usize,
    dim_rep: usize,
    generators: Vec<CMat>,
    f: Vec<f64>,
    dsym: Vec<f64>,
    casimir2: f64,
}

/// Build su(N) in the fundamental representation, `N >= 2`.
///
/// The ordering reduces to the Pauli matrices for N=2 and to the standard
/// Gell-Mann ordering for N=3. `f` and `dsym` are computed from the traces
/// `tr([X^a,X^b] X^c) = 4i f^{abc}` and `tr({X^a,X^b} X^c) = 4 d^{abc}`.
pub fn build_su(n: usize) -> Result<LieAlgebraRep, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::UnsupportedGroup(n));
    }
    let mut generators = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            let mut sym = CMat::zeros(n, n);
            sym[(j, k)] = c64(1.0, 0.0);
            sym[(k, j)] = c64(1.0, 0.0);
            generators.push(sym);
            let mut asym = CMat::zeros(n, n);
            asym[(j, k)] = c64(0.0, -1.0);
            asym[(k, j)] = c64(0.0, 1.0);
            generators.push(asym);
        }
        let l = k as f64;
        let norm = (2.0 / (l * (l + 1.0))).sqrt();
        let mut diag = CMat::zeros(n, n);
        for m in 0..k {
            diag[(m, m)] = c64(norm, 0.0);
        }
        diag[(k, k)] = c64(-norm * l, 0.0);
        generators.push(diag);
    }

    let na = generators.len();
    let mut f = vec![0.0; na * na * na];
    let mut dsym = vec![0.0; na * na * na];
    for a in 0..na {
        for b in 0..na {
            let com = &generators[a] * &generators[b] - &generators[b] * &generators[a];
            let anti = &generators[a] * &generators[b] + &generators[b] * &generators[a];
            for c in 0..na {
                let tr_com = (&com * &generators[c]).trace();
                let tr_anti = (&anti * &generators[c]).trace();
                f[(a * na + b) * na + c] = tr_com.im / 4.0;
                dsym[(a * na + b) * na + c] = tr_anti.re / 4.0;
            }
        }
    }

    // sum_a X^a X^a = casimir2 * 1
    let mut sum = CMat::zeros(n, n);
    for x in &generators {
        sum += x * x;
    }
    let casimir2 = sum[(0, 0)].re;

    Ok(LieAlgebraRep {
        n,
        dim_rep: n,
        generators,
        f,
        dsym,
        casimir2,
    })
}

impl LieAlgebraRep {
    pub fn group_rank(&self) -> usize {
        self.n
    }

    /// Matrix size J of the representation.
    pub fn dim_rep(&self) -> usize {
        self.dim_rep
    }

    /// Number of generators, N^2 - 1.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, a: usize) -> &CMat {
        &self.generators[a]
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    /// Real structure constant in `[X^a, X^b] = 2i f^{abc} X^c`.
    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        let na = self.num_generators();
        self.f[(a * na + b) * na + c]
    }

    /// Totally symmetric constant in `{X^a, X^b} = (4/N) delta_ab + 2 d^{abc} X^c`.
    pub fn dsym(&self, a: usize, b: usize, c: usize) -> f64 {
        let na = self.num_generators();
        self.dsym[(a * na + b) * na + c]
    }

    /// Value of `sum_a X^a X^a` on this representation.
    pub fn casimir2(&self) -> f64 {
        self.casimir2
    }

    /// `sum_a c^a X^a`.
    pub fn matrix_from_coeffs(&self, coeffs: &[f64]) -> CMat {
        assert_eq!(coeffs.len(), self.num_generators());
        let mut m = CMat::zeros(self.dim_rep, self.dim_rep);
        for (c, x) in coeffs.iter().zip(&self.generators) {
            m += x * c64(*c, 0.0);
        }
        m
    }

    /// Inverse of [`Self::matrix_from_coeffs`]: `c^a = tr(m X^a) / 2` for a
    /// traceless Hermitean `m`.
    pub fn coeffs_from_matrix(&self, m: &CMat) -> Vec<f64> {
        self.generators
            .iter()
            .map(|x| (m * x).trace().re / 2.0)
            .collect()
    }

    /// Cubic invariant `d^{abc} c^a c^b c^c` of a colour vector.
    pub fn cubic_casimir(&self, coeffs: &[f64]) -> f64 {
        let na = self.num_generators();
        let mut acc = 0.0;
        for a in 0..na {
            if coeffs[a] == 0.0 {
                continue;
            }
            for b in 0..na {
                if coeffs[b] == 0.0 {
                    continue;
                }
                for c in 0..na {
                    let d = self.dsym[(a * na + b) * na + c];
                    if d != 0.0 {
                        acc += d * coeffs[a] * coeffs[b] * coeffs[c];
                    }
                }
            }
        }
        acc
    }

    /// Classical colour vector of the highest-weight (coherent) state
    /// `e_1`: `C^a = (hbar/2) X^a_{11}`. This is the reference element of
    /// the coadjoint orbit used for sampling; its squared norm is
    /// `hbar^2 (N-1)/(2N)`.
    pub fn highest_weight_colour(&self, hbar: f64) -> Vec<f64> {
        self.generators
            .iter()
            .map(|x| 0.5 * hbar * x[(0, 0)].re)
            .collect()
    }

    /// Largest violation of the Jacobi identity
    /// `[[X^a,X^b],X^c] + [[X^b,X^c],X^a] + [[X^c,X^a],X^b] = 0` over the
    /// given triples.
    pub fn jacobi_residual(&self, triples: &[(usize, usize, usize)]) -> f64 {
        let com = |x: &CMat, y: &CMat| x * y - y * x;
        let mut worst = 0.0f64;
        for &(a, b, c) in triples {
            let xa = &self.generators[a];
            let xb = &self.generators[b];
            let xc = &self.generators[c];
            let j = com(&com(xa, xb), xc) + com(&com(xb, xc), xa) + com(&com(xc, xa), xb);
            worst = worst.max(crate::max_abs(&j));
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Gauge fields.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeFieldKind {
    Constant,
    Analytic,
}

type PotentialFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type PotentialDerivFn = dyn Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync;

/// A non-Abelian gauge potential `x -> A_mu^a(x)` with analytically supplied
/// first derivatives. Values are immutable after construction and safe to
/// share across threads.
pub struct GaugeField {
    algebra: Arc<LieAlgebraRep>,
    coupling: f64,
    dim: usize,
    kind: GaugeFieldKind,
    a_fn: Box<PotentialFn>,
    da_fn: Box<PotentialDerivFn>,
}

impl std::fmt::Debug for GaugeField {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("GaugeField")
            .field("group", &format!("SU({})", self.algebra.group_rank()))
            .field("coupling", &self.coupling)
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .finish()
    }
}

impl GaugeField {
    /// Constant potential with the given coefficient matrix (rows mu,
    /// columns a); its derivative vanishes identically.
    pub fn constant(algebra: Arc<LieAlgebraRep>, coupling: f64, coeffs: DMatrix<f64>) -> Self {
        let dim = coeffs.nrows();
        assert_eq!(coeffs.ncols(), algebra.num_generators());
        let na = algebra.num_generators();
        let coeffs2 = coeffs.clone();
        Self {
            algebra,
            coupling,
            dim,
            kind: GaugeFieldKind::Constant,
            a_fn: Box::new(move |_| coeffs.clone()),
            da_fn: Box::new(move |_| vec![DMatrix::zeros(coeffs2.nrows(), na); coeffs2.nrows()]),
        }
    }

    /// Zero potential.
    pub fn zero(algebra: Arc<LieAlgebraRep>, coupling: f64, dim: usize) -> Self {
        let na = algebra.num_generators();
        Self::constant(algebra, coupling, DMatrix::zeros(dim, na))
    }

    /// User-supplied analytic potential: `a_fn(x)` returns `A_mu^a` (rows mu,
    /// columns a) and `da_fn(x)` returns the list of `d A / d x_nu`, indexed
    /// by nu.
    pub fn analytic(
        algebra: Arc<LieAlgebraRep>,
        coupling: f64,
        dim: usize,
        a_fn: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
        da_fn: impl Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            algebra,
            coupling,
            dim,
            kind: GaugeFieldKind::Analytic,
            a_fn: Box::new(a_fn),
            da_fn: Box::new(da_fn),
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraRep> {
        &self.algebra
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GaugeFieldKind {
        self.kind
    }

    /// Coefficients `A_mu^a(x)` (rows mu, columns a).
    pub fn potential(&self, x: &[f64]) -> DMatrix<f64> {
        (self.a_fn)(x)
    }

    /// Derivatives `d_nu A_mu^a(x)`, indexed by nu.
    pub fn potential_derivative(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        (self.da_fn)(x)
    }

    /// The matrix `A_mu(x) = (1/2) A_mu^a(x) X^a`.
    pub fn potential_matrix(&self, x: &[f64], mu: usize) -> CMat {
        let coeffs = self.potential(x);
        let mut m = CMat::zeros(self.algebra.dim_rep(), self.algebra.dim_rep());
        for a in 0..self.algebra.num_generators() {
            m += self.algebra.generator(a) * c64(0.5 * coeffs[(mu, a)], 0.0);
        }
        m
    }

    /// Field strength at `x`:
    /// `F_mu_nu^a = d_mu A_nu^a - d_nu A_mu^a + g f^{abc} A_mu^b A_nu^c`.
    pub fn field_strength(&self, x: &[f64]) -> FieldStrength {
        let a = self.potential(x);
        let da = self.potential_derivative(x);
        let d = self.dim;
        let na = self.algebra.num_generators();
        let mut data = vec![0.0; d * d * na];
        for mu in 0..d {
            for nu in 0..d {
                if mu == nu {
                    continue;
                }
                for c in 0..na {
                    let mut val = da[mu][(nu, c)] - da[nu][(mu, c)];
                    for b1 in 0..na {
                        if a[(mu, b1)] == 0.0 {
                            continue;
                        }
                        for b2 in 0..na {
                            let fc = self.algebra.f(b1, b2, c);
                            if fc != 0.0 {
                                val += self.coupling * fc * a[(mu, b1)] * a[(nu, b2)];
                            }
                        }
                    }
                    data[(mu * d + nu) * na + c] = val;
                }
            }
        }
        FieldStrength { dim: d, na, data }
    }
}

/// Componentwise field-strength tensor `F_mu_nu^a` (antisymmetric in
/// `mu nu`). In d=4 the electric and magnetic 3-vectors are the usual
/// placement `E_j = F_4j`, `B_1 = F_23`, `B_2 = F_31`, `B_3 = F_12`.
#[derive(Debug, Clone)]
pub struct FieldStrength {
    dim: usize,
    na: usize,
    data: Vec<f64>,
}

impl FieldStrength {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_colour(&self) -> usize {
        self.na
    }

    /// `F_mu_nu^a` with zero-based spacetime indices.
    pub fn get(&self, mu: usize, nu: usize, a: usize) -> f64 {
        self.data[(mu * self.dim + nu) * self.na + a]
    }

    /// Electric 3-vector of colour component `a` (d=4 only).
    pub fn electric(&self, a: usize) -> [f64; 3] {
        assert_eq!(self.dim, 4, "electric components need d=4");
        [self.get(3, 0, a), self.get(3, 1, a), self.get(3, 2, a)]
    }

    /// Magnetic 3-vector of colour component `a` (d=4 only).
    pub fn magnetic(&self, a: usize) -> [f64; 3] {
        assert_eq!(self.dim, 4, "magnetic components need d=4");
        [self.get(1, 2, a), self.get(2, 0, a), self.get(0, 1, a)]
    }

    /// Largest violation of `F_mu_nu = -F_nu_mu`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..self.dim {
            for nu in 0..self.dim {
                for a in 0..self.na {
                    worst = worst.max((self.get(mu, nu, a) + self.get(nu, mu, a)).abs());
                }
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// Abelian fields.
// ---------------------------------------------------------------------------

type AbelianPotentialFn = dyn Fn(&[f64; 4]) -> [f64; 4] + Send + Sync;
type AbelianDerivFn = dyn Fn(&[f64; 4]) -> [[f64; 4]; 4] + Send + Sync;

/// A d=4 Abelian potential `x -> A_mu(x)` with analytic derivatives
/// (`derivative(x)[mu][nu] = d_mu A_nu`).
pub struct AbelianField {
    a_fn: Box<AbelianPotentialFn>,
    da_fn: Box<AbelianDerivFn>,
}

impl AbelianField {
    pub fn new(
        a_fn: impl Fn(&[f64; 4]) -> [f64; 4] + Send + Sync + 'static,
        da_fn: impl Fn(&[f64; 4]) -> [[f64; 4]; 4] + Send + Sync + 'static,
    ) -> Self {
        Self {
            a_fn: Box::new(a_fn),
            da_fn: Box::new(da_fn),
        }
    }

    /// `A_nu(x) = base_nu + sum_mu grad[mu][nu] x_mu` (constant field
    /// strength `F_mu_nu = grad[mu][nu] - grad[nu][mu]`).
    pub fn linear(base: [f64; 4], grad: [[f64; 4]; 4]) -> Self {
        Self::new(
            move |x| {
                let mut a = base;
                for nu in 0..4 {
                    for mu in 0..4 {
                        a[nu] += grad[mu][nu] * x[mu];
                    }
                }
                a
            },
            move |_| grad,
        )
    }

    pub fn zero() -> Self {
        Self::linear([0.0; 4], [[0.0; 4]; 4])
    }

    pub fn potential(&self, x: &[f64; 4]) -> [f64; 4] {
        (self.a_fn)(x)
    }

    /// `derivative(x)[mu][nu] = d_mu A_nu`.
    pub fn derivative(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        (self.da_fn)(x)
    }

    /// `F_mu_nu = d_mu A_nu - d_nu A_mu`.
    pub fn field_strength(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        let da = self.derivative(x);
        let mut f = [[0.0; 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                f[mu][nu] = da[mu][nu] - da[nu][mu];
            }
        }
        f
    }

    /// Electric 3-vector `E_j = F_4j`.
    pub fn electric(&self, x: &[f64; 4]) -> [f64; 3] {
        let f = self.field_strength(x);
        [f[3][0], f[3][1], f[3][2]]
    }

    /// Magnetic 3-vector `B_1 = F_23, B_2 = F_31, B_3 = F_12`.
    pub fn magnetic(&self, x: &[f64; 4]) -> [f64; 3] {
        let f = self.field_strength(x);
        [f[1][2], f[2][0], f[0][1]]
    }
}

/// Constant SU(2) potential `A_1 = amp e_1, A_2 = amp e_2` (remaining
/// directions zero) in `dim` spacetime dimensions; the configuration whose
/// only field-strength component is `F_12^3 = g amp^2`.
pub fn special_su2_field(coupling: f64, amp: f64, dim: usize) -> GaugeField {
    let algebra = Arc::new(build_su(2).expect("SU(2) always builds"));
    let mut coeffs = DMatrix::zeros(dim, 3);
    coeffs[(0, 0)] = amp;
    coeffs[(1, 1)] = amp;
    GaugeField::constant(algebra, coupling, coeffs)
}
