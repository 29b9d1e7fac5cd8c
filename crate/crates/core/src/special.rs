//! Scalar special functions and quadrature shared across the crate: error
//! function, Bessel function `J0`, half-integer gamma values, Gauss-Legendre
//! rules and an adaptive Gauss-Kronrod integrator.
//!
//! Everything here is self-contained double precision. `erf` follows the
//! classic SunPro/FreeBSD rational approximations (the same tables used by
//! libm and the Go standard library). `J0` combines the power series, a
//! quadrature of the integral representation on the mid range, and the
//! Hankel asymptotic expansion for large arguments; each route overlaps its
//! neighbours so the seams can be cross-checked.

use std::sync::OnceLock;
use thiserror::Error;

// ---------------------------------------------------------------------------
// Error function (SunPro / FreeBSD rational approximations, < 1 ulp).
// ---------------------------------------------------------------------------

const ERX: f64 = 8.45062911510467529297e-01;

// coefficients for approximation to erf in [0, 0.84375]
const EFX: f64 = 1.28379167095512586316e-01;
const EFX8: f64 = 1.02703333676410069053e+00;
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;

// coefficients for approximation to erf in [0.84375, 1.25]
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;

// coefficients for approximation to erfc in [1.25, 1/0.35]
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;

// coefficients for approximation to erfc in [1/0.35, 28]
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

const VERY_TINY: f64 = 2.848094538889218e-306;
const SMALL: f64 = 3.725290298461914e-9; // 2^-28

/// Error function `erf(x) = (2/sqrt(pi)) int_0^x exp(-t^2) dt`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return -1.0;
    }
    let sign = x < 0.0;
    let x = x.abs();
    if x < 0.84375 {
        let temp = if x < SMALL {
            if x < VERY_TINY {
                0.125 * (8.0 * x + EFX8 * x)
            } else {
                x + EFX * x
            }
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            x + x * (r / s)
        };
        return if sign { -temp } else { temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign { -ERX - p / q } else { ERX + p / q };
    }
    if x >= 6.0 {
        return if sign { -1.0 } else { 1.0 };
    }
    let (r, q) = erfc_tail_fraction(x);
    let res = erfc_tail_exp(x, r, q);
    if sign {
        res / x - 1.0
    } else {
        1.0 - res / x
    }
}

fn erfc_tail_fraction(x: f64) -> (f64, f64) {
    let s = 1.0 / (x * x);
    if x < 1.0 / 0.35 {
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s
                * (SA1
                    + s * (SA2
                        + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    }
}

fn erfc_tail_exp(x: f64, r: f64, q: f64) -> f64 {
    // split x into a 20-bit high part so exp(-z*z) is evaluated exactly
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp()
}

/// Complementary error function `erfc(x) = 1 - erf(x)`, keeping relative
/// precision in the deep positive tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 6.0 {
        if x >= 28.0 {
            return 0.0;
        }
        let (r, q) = erfc_tail_fraction(x);
        return erfc_tail_exp(x, r, q) / x;
    }
    1.0 - erf(x)
}

// ---------------------------------------------------------------------------
// Bessel J0.
// ---------------------------------------------------------------------------

/// Bessel function of the first kind, order zero, for real argument.
///
/// Three routes stitched together:
/// * `|x| <= 8`: power series with term recurrence (cancellation loses at
///   most ~2 digits at the seam);
/// * `8 < |x| < 17`: 64-point Gauss-Legendre quadrature of
///   `(1/pi) int_0^pi cos(x sin t) dt`;
/// * `|x| >= 17`: Hankel asymptotic expansion truncated at the smallest
///   term (remainder below ~3e-14 there).
///
/// Absolute accuracy is better than 1e-12 on `[0, 500]`; checked against
/// frozen high-precision references in the tests.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 8.0 {
        j0_series(x)
    } else if x < 17.0 {
        j0_integral(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=60u32 {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    sum
}

fn j0_integral(x: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(64);
    // (1/pi) int_0^pi cos(x sin t) dt, mapped from [-1, 1]
    let half = 0.5 * std::f64::consts::PI;
    let mut acc = 0.0;
    for (t, w) in nodes.iter().zip(weights) {
        let theta = half * (t + 1.0);
        acc += w * (x * theta.sin()).cos();
    }
    acc * 0.5
}

fn j0_asymptotic(x: f64) -> f64 {
    // Hankel expansion in complex form,
    // J0(x) = sqrt(2/(pi x)) Re[ e^{i(x - pi/4)} sum_m A_m (i/x)^m ],
    // A_m = prod_{j=1..m} -(2j-1)^2/(8j). Terms are added while their
    // magnitude decreases; the smallest is ~e^{-2x}.
    let mut acc = crate::c64(0.0, 0.0);
    let mut coeff = 1.0; // A_0
    let mut prev = f64::INFINITY;
    let mut power = crate::c64(1.0, 0.0); // (i/x)^m
    let i_over_x = crate::c64(0.0, 1.0 / x);
    for m in 0..80u32 {
        let t = power * coeff;
        if t.norm() >= prev {
            break;
        }
        prev = t.norm();
        acc += t;
        let j = (m + 1) as f64;
        coeff *= -((2.0 * j - 1.0) * (2.0 * j - 1.0)) / (j * 8.0);
        power *= i_over_x;
    }
    let chi = x - std::f64::consts::FRAC_PI_4;
    let rotation = crate::c64(chi.cos(), chi.sin());
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (rotation * acc).re
}

// ---------------------------------------------------------------------------
// Gamma at half-integers.
// ---------------------------------------------------------------------------

/// `Gamma(n/2)` for positive integer `n`, by upward recursion from
/// `Gamma(1/2) = sqrt(pi)` and `Gamma(1) = 1`.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n >= 1, "gamma_half requires n >= 1");
    let mut value = if n % 2 == 1 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k + 2 <= n {
        value *= k as f64 / 2.0;
        k += 2;
    }
    value
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules.
// ---------------------------------------------------------------------------

fn gl_compute(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Newton iteration on P_n with the standard cosine initial guess.
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                x -= p / d;
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// cached for the sizes used in this crate.
pub fn gauss_legendre(n: usize) -> (&'static [f64], &'static [f64]) {
    static CACHE_16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static CACHE_32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static CACHE_64: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let cell = match n {
        16 => &CACHE_16,
        32 => &CACHE_32,
        64 => &CACHE_64,
        _ => panic!("gauss_legendre: unsupported cached size {n}"),
    };
    let (x, w) = cell.get_or_init(|| gl_compute(n));
    (x, w)
}

/// Integrate `f` over `[a, b]` with a fixed `n`-point Gauss-Legendre rule.
pub fn gl_fixed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(c + h * x);
    }
    acc * h
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature (QK15 + interval bisection).
// ---------------------------------------------------------------------------

// Standard 15-point Kronrod abscissae and weights with the embedded 7-point
// Gauss rule (QUADPACK dqk15 constants).
const XGK15: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG7: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("quadrature failed to converge: estimated error {error:.3e} above tolerance {tolerance:.3e} after {intervals} intervals")]
    NonConvergence {
        error: f64,
        tolerance: f64,
        intervals: usize,
    },
}

/// Controls for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureParams {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_intervals: 512,
        }
    }
}

fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK15[7] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &wk)) in XGK15.iter().zip(WGK15.iter()).enumerate().take(7) {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        kronrod += wk * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG7[j / 2] * (f1 + f2);
        }
    }
    gauss += WG7[3] * fc;
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptively integrate `f` over the finite interval `[a, b]`.
///
/// Bisects the interval with the largest QK15 error estimate until the
/// summed error meets `max(abs_tol, rel_tol * |result|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    params: &QuadratureParams,
) -> Result<f64, QuadratureError> {
    if a == b {
        return Ok(0.0);
    }
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new(); // (a, b, value, err)
    let seed = qk15(&f, a, b);
    intervals.push((a, b, seed.0, seed.1));
    loop {
        let total: f64 = intervals.iter().map(|it| it.2).sum();
        let err: f64 = intervals.iter().map(|it| it.3).sum();
        let tol = params.abs_tol.max(params.rel_tol * total.abs());
        if err <= tol {
            return Ok(total);
        }
        if intervals.len() >= params.max_intervals {
            return Err(QuadratureError::NonConvergence {
                error: err,
                tolerance: tol,
                intervals: intervals.len(),
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (ia, ib, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        let left = qk15(&f, ia, mid);
        let right = qk15(&f, mid, ib);
        intervals.push((ia, mid, left.0, left.1));
        intervals.push((mid, ib, right.0, right.1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // References computed with 30-digit arithmetic.
    const J0_REF: [(f64, f64); 26] = [
        (0.1, 0.997501562066040032),
        (0.5, 0.93846980724081290423),
        (1.0, 0.76519768655796655145),
        (2.0, 0.22389077914123566805),
        (2.5, -0.048383776468197996327),
        (4.0, -0.39714980986384737229),
        (5.5, -0.006843869417819196824),
        (7.0, 0.30007927051955559665),
        (7.9, 0.19436184484127823969),
        (8.0, 0.17165080713755390609),
        (8.1, 0.1475174540443776703),
        (9.5, -0.1939287476874223554),
        (11.0, -0.17119030040719608835),
        (13.0, 0.206926102377067811),
        (15.0, -0.014224472826780773234),
        (16.9, -0.17878338789121921704),
        (17.0, -0.16985425215118354791),
        (17.1, -0.1592853315322653069),
        (19.0, 0.14662943965965120426),
        (25.0, 0.096266783275958116174),
        (40.0, 0.0073668905842372895535),
        (75.0, 0.034643913805097056137),
        (120.0, 0.071823415829156127576),
        (250.0, -0.026053373425204233664),
        (380.0, -0.024847409550482934507),
        (500.0, -0.034100556880731998265),
    ];

    #[test]
    fn j0_against_references() {
        for &(x, want) in &J0_REF {
            let got = bessel_j0(x);
            assert!(
                (got - want).abs() < 1e-12,
                "J0({x}) = {got}, want {want}, err {:.2e}",
                (got - want).abs()
            );
        }
        assert_eq!(bessel_j0(0.0), 1.0);
    }

    #[test]
    fn j0_routes_agree_at_seams() {
        for &x in &[7.5, 8.0, 8.5] {
            assert!((j0_series(x) - j0_integral(x)).abs() < 5e-13, "seam at {x}");
        }
        for &x in &[17.0, 18.0, 20.0, 25.0] {
            assert!(
                (j0_asymptotic(x) - j0_integral(x)).abs() < 5e-13,
                "seam at {x}"
            );
        }
    }

    #[test]
    fn j0_even_in_argument() {
        for &x in &[0.3, 5.0, 12.0, 44.0] {
            assert_eq!(bessel_j0(x), bessel_j0(-x));
        }
    }

    const ERF_REF: [(f64, f64); 11] = [
        (0.01, 0.011283415555849617151),
        (0.125, 0.14031620480133381739),
        (0.5, 0.52049987781304653768),
        (0.84375, 0.76722566123234163346),
        (1.0, 0.84270079294971486934),
        (1.25, 0.92290012825645823014),
        (2.0, 0.99532226501895273416),
        (2.857, 0.99994664173991315363),
        (4.0, 0.99999998458274209972),
        (6.0, 0.99999999999999997848),
        (0.0070710678118654745, 0.0079787126292632065397),
    ];

    #[test]
    fn erf_against_references() {
        for &(x, want) in &ERF_REF {
            let got = erf(x);
            assert!(
                ((got - want) / want).abs() < 1e-15,
                "erf({x}) = {got}, want {want}"
            );
            assert_eq!(erf(-x), -got);
        }
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(f64::INFINITY), 1.0);
    }

    #[test]
    fn erfc_complements_erf() {
        for &x in &[0.1, 0.9, 1.5, 3.0, 5.9] {
            assert!((erfc(x) - (1.0 - erf(x))).abs() < 1e-15);
        }
        // deep tail stays positive and finite
        assert!(erfc(10.0) > 0.0 && erfc(10.0) < 1e-43);
    }

    #[test]
    fn gamma_half_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma_half(1) - sqrt_pi).abs() < 1e-15);
        assert_eq!(gamma_half(2), 1.0);
        assert!((gamma_half(3) - 0.5 * sqrt_pi).abs() < 1e-15);
        assert_eq!(gamma_half(4), 1.0);
        assert!((gamma_half(5) - 0.75 * sqrt_pi).abs() < 1e-15);
        assert_eq!(gamma_half(8), 6.0);
        assert_eq!(gamma_half(12), 120.0);
    }

    #[test]
    fn gauss_legendre_exactness() {
        // the n-point rule integrates polynomials up to degree 2n-1 exactly
        let (x, w) = gauss_legendre(16);
        let int: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((int - 2.0 / 11.0).abs() < 1e-14);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let gauss = gl_fixed(|t| (-t * t / 2.0).exp(), -8.0, 8.0, 64);
        assert!((gauss - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn adaptive_quadrature_gaussian() {
        let p = QuadratureParams::default();
        let got = integrate_adaptive(|t| (-t * t).exp(), -10.0, 10.0, &p).unwrap();
        assert!(((got - std::f64::consts::PI.sqrt()) / got).abs() < 1e-13);
        // sharp off-centre feature
        let got = integrate_adaptive(|t| 1.0 / ((t - 0.3).powi(2) + 1e-4), 0.0, 1.0, &p).unwrap();
        let exact = 100.0 * (70.0f64.atan() + 30.0f64.atan());
        assert!(((got - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_quadrature_reports_failure() {
        let p = QuadratureParams {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_intervals: 4,
        };
        let r = integrate_adaptive(|t: f64| (1e4 * t).sin().abs(), 0.0, 1.0, &p);
        assert!(matches!(r, Err(QuadratureError::NonConvergence { .. })));
    }
}
