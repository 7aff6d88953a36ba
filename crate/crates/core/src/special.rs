//! Complex log-gamma (Lanczos) and the Riemann-Siegel theta function.

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_C: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Principal-branch log Gamma for Re z > 0 (continuous on vertical lines in
/// the right half plane). Arguments with Re z < 0.5 are lifted by the
/// recurrence lnGamma(z) = lnGamma(z+1) - ln z.
pub fn lgamma_complex(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.5 {
        shift -= z.ln();
        z += 1.0;
    }
    let mut a = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += c / (z + (k as f64 - 1.0));
    }
    let t = z + (LANCZOS_G - 0.5);
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z - 0.5) * t.ln() - t + a.ln() + shift
}

/// Riemann-Siegel theta: theta(t) = Im lnGamma(1/4 + it/2) - (t/2) ln pi.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    lgamma_complex(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * std::f64::consts::PI.ln()
}
