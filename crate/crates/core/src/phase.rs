//! Stationary-phase predictors, verified against the quadrature oracle.
//!
//! Three levels: the first-order inert prediction (Z/sqrt(Y)) e(phi(t0)), the
//! quadratic-phase asymptotic expansion with explicit correction terms, and
//! the cubic-in-sqrt phase asymptotics for e(Ax + B sqrt x + C x^{3/2})
//! including the Bessel-transform variant.
//!
//! Inert factors are never modelled: predictions expose a modulus factor and
//! a phase, and the tests are quotient / phase-extraction tests.

use crate::bessel::bessel_split_with_min;
use crate::error::{Error, Result};
use crate::quad::{osc_integrate, OscIntegral};
use crate::weights::InertWeight;
use num_complex::Complex64;
use std::sync::Arc;

/// Verdict of a stationary-phase analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    /// Stationary point inside the support; the leading term applies.
    Valid,
    /// No stationary point on the support; the integral is boundary-small.
    Negligible,
}

#[derive(Clone, Copy, Debug)]
pub struct SpaPrediction {
    /// Predicted modulus factor (|A|^{-1/2} or Z/sqrt(Y)); the unknown inert
    /// factor is not included.
    pub modulus_factor: f64,
    /// Predicted phase at the stationary point, in turns.
    pub phase_at_sp: f64,
    pub stationary_point: f64,
    pub verdict: Verdict,
}

/// Locate the zero of phase' on (a, b) by bisection on sampled sign changes.
/// Returns None if the sampled derivative is single-signed.
fn stationary_point(phase: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    // Richardson-extrapolated central difference: large enough step to keep
    // rounding noise below the bisection target, extrapolation for accuracy.
    let h = (b - a) * 1e-3;
    let dp = |x: f64| {
        let d1 = (phase(x + h) - phase(x - h)) / (2.0 * h);
        let d2 = (phase(x + 0.5 * h) - phase(x - 0.5 * h)) / h;
        (4.0 * d2 - d1) / 3.0
    };
    const SAMPLES: usize = 256;
    let mut prev_x = a + (b - a) * 1e-6;
    let mut prev = dp(prev_x);
    for i in 1..=SAMPLES {
        let x = a + (b - a) * (i as f64 - 1e-6) / SAMPLES as f64;
        let cur = dp(x);
        if prev == 0.0 {
            return Some(prev_x);
        }
        if prev.signum() != cur.signum() {
            // Bisect to 1e-14 relative.
            let (mut lo, mut hi) = (prev_x, x);
            let (mut flo, _) = (prev, cur);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = dp(mid);
                if fm == 0.0 || (hi - lo) < 1e-14 * (b - a).abs() {
                    return Some(mid);
                }
                if flo.signum() != fm.signum() {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = cur;
        prev_x = x;
    }
    None
}

/// First-order stationary phase: prediction (Z/sqrt(Y)) e(phi(t0)) for a
/// phase with second derivative of size Y/Z^2 on a support of length ~ Z.
///
/// A single-signed phase derivative yields the `Negligible` verdict (the
/// boundary-term branch).
pub fn spa_first_order(integral: &OscIntegral, y_osc: f64, z_len: f64) -> Result<SpaPrediction> {
    if !(y_osc > 0.0 && z_len > 0.0) {
        return Err(Error::InvalidInput("spa needs Y > 0, Z > 0".into()));
    }
    let (a, b) = integral.interval;
    let phase = integral.phase.clone();
    match stationary_point(&*phase, a, b) {
        Some(t0) => Ok(SpaPrediction {
            modulus_factor: z_len / y_osc.sqrt(),
            phase_at_sp: (integral.phase)(t0),
            stationary_point: t0,
            verdict: Verdict::Valid,
        }),
        None => Ok(SpaPrediction {
            modulus_factor: 0.0,
            phase_at_sp: 0.0,
            stationary_point: f64::NAN,
            verdict: Verdict::Negligible,
        }),
    }
}

/// Asymptotic expansion of int w(x) e(h(x)) dx around the unique stationary
/// point x0 of h:
///
///   e(h(x0)) / sqrt(h''(x0)) * sum_{r <= r_max} p_r(x0),
///   p_r = (e^{i pi/4} / r!) (i / (4 pi h''(x0)))^r G^{(2r)}(x0),
///   G = w e(H),  H(x) = h(x) - h(x0) - h''(x0) (x-x0)^2 / 2,
///
/// with the even G-derivatives taken by Richardson-extrapolated central
/// differences. Phases are in turns, so h''(x0) > 0 is required.
pub fn bky_expand(integral: &OscIntegral, r_max: usize) -> Result<Complex64> {
    let (a, b) = integral.interval;
    let h = &integral.phase;
    let w = &integral.amplitude;
    let x0 = stationary_point(&**h, a, b).ok_or(Error::NoStationaryPoint)?;

    let span = b - a;
    let fd = span * 1e-4;
    let h2 = (h(x0 + fd) - 2.0 * h(x0) + h(x0 - fd)) / (fd * fd);
    if !(h2 > 1e-12) {
        return Err(Error::Inadmissible(format!(
            "h''(x0) = {h2} not positive at x0 = {x0}"
        )));
    }

    let hx0 = h(x0);
    let g = |x: f64| -> Complex64 {
        let hh = h(x) - hx0 - 0.5 * h2 * (x - x0) * (x - x0);
        w(x) * crate::e(hh)
    };

    // G^{(2r)}(x0) by central differences with Richardson extrapolation.
    let step = span * 1e-3;
    let deriv_2r = |r: usize| -> Complex64 {
        let stencil = |hh: f64| -> Complex64 {
            match r {
                0 => g(x0),
                1 => (g(x0 + hh) - 2.0 * g(x0) + g(x0 - hh)) / (hh * hh),
                2 => {
                    (g(x0 + 2.0 * hh) - 4.0 * g(x0 + hh) + 6.0 * g(x0) - 4.0 * g(x0 - hh)
                        + g(x0 - 2.0 * hh))
                        / hh.powi(4)
                }
                _ => unreachable!("r_max <= 2"),
            }
        };
        if r == 0 {
            return stencil(step);
        }
        let coarse = stencil(step);
        let fine = stencil(step * 0.5);
        (4.0 * fine - coarse) / 3.0
    };

    if r_max > 2 {
        return Err(Error::InvalidInput("r_max <= 2 supported".into()));
    }
    let rot = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut r_fact = 1.0;
    for r in 0..=r_max {
        if r > 0 {
            r_fact *= r as f64;
        }
        let zr = Complex64::new(0.0, 1.0 / (4.0 * std::f64::consts::PI * h2)).powu(r as u32);
        sum += rot / r_fact * zr * deriv_2r(r);
    }
    Ok(crate::e(hx0) / h2.sqrt() * sum)
}

/// Cubic-in-sqrt phase specification: int U e(Ax + B sqrt x + C x^{3/2}) dx
/// with x-scale X and admissibility |A| >= (C^2 + 1) X^eta.
#[derive(Clone, Debug)]
pub struct CubicPhaseSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x_scale: f64,
    pub eta: f64,
    pub weight: InertWeight,
}

pub const DEFAULT_ETA: f64 = 0.1;

impl CubicPhaseSpec {
    pub fn new(a: f64, b: f64, c: f64, x_scale: f64, weight: InertWeight) -> CubicPhaseSpec {
        CubicPhaseSpec {
            a,
            b,
            c,
            x_scale,
            eta: DEFAULT_ETA,
            weight,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.a.abs() >= (self.c * self.c + 1.0) * self.x_scale.powf(self.eta)
    }

    /// The phase in turns at unit-scale coordinate x (weight coordinates).
    pub fn phase(&self, x: f64) -> f64 {
        self.a * x + self.b * x.sqrt() + self.c * x * x.sqrt()
    }

    /// Oscillatory integral over the weight support (x in weight coordinates).
    pub fn integral(&self) -> OscIntegral {
        let s = self.clone();
        let w = self.weight.clone();
        let (lo, hi) = w.support();
        let freq = ((self.a.abs()
            + 0.5 * self.b.abs() / lo.sqrt()
            + 1.5 * self.c.abs() * hi.sqrt())
            * (hi - lo))
            .abs();
        OscIntegral::new(
            Arc::new(move |x| Complex64::new(w.eval(x), 0.0)),
            Arc::new(move |x| s.phase(x)),
            (lo, hi),
            freq,
        )
    }
}

/// Leading-order asymptotics of the cubic-in-sqrt phase integral:
/// modulus |A|^{-1/2}, phase -B^2/(4A) - C B^3 / (8 A^3), stationary point
/// x0 = (B/2A)^2 (valid when it falls in the weight support).
pub fn cubic_phase_asymptotic(spec: &CubicPhaseSpec) -> Result<SpaPrediction> {
    if !spec.is_admissible() {
        return Err(Error::Inadmissible(format!(
            "|A| = {} < (C^2+1) X^eta = {}",
            spec.a.abs(),
            (spec.c * spec.c + 1.0) * spec.x_scale.powf(spec.eta)
        )));
    }
    let u0 = -spec.b / (2.0 * spec.a); // stationary point in u = sqrt(x)
    let x0 = u0 * u0;
    let (lo, hi) = spec.weight.support();
    let in_support = u0 > 0.0 && x0 > lo && x0 < hi;
    Ok(SpaPrediction {
        modulus_factor: spec.a.abs().sqrt().recip(),
        phase_at_sp: -spec.b * spec.b / (4.0 * spec.a)
            - spec.c * spec.b.powi(3) / (8.0 * spec.a.powi(3)),
        stationary_point: x0,
        verdict: if in_support {
            Verdict::Valid
        } else {
            Verdict::Negligible
        },
    })
}

/// One sign branch of the Bessel-transform asymptotics.
#[derive(Clone, Copy, Debug)]
pub struct BranchPrediction {
    /// +1 or -1: the e^{+-i y} Bessel branch.
    pub sign: i32,
    /// Effective sqrt-coefficient B_eff = B + sign * 2 sqrt(n) / c.
    pub b_eff: f64,
    /// Predicted modulus factor n^{-1/4} c^{1/2} X^{1/4} |A|^{-1/2}.
    pub modulus_factor: f64,
    /// Predicted phase in turns: -B_eff^2/(4A) - C B_eff^3/(8 A^3).
    pub phase_at_sp: f64,
    /// Stationary point in the scaled coordinate x/X.
    pub stationary_unit: f64,
    pub in_support: bool,
}

/// Asymptotics of the Bessel transform
/// H(n/c^2) = 2 pi i^{k} int h(x) J_{k-1}(4 pi sqrt(x n)/c^2-scale...) dx for
/// h(x) = e(Ax + B sqrt x + C x^{3/2}) U(x/X): each e^{+-i} branch carries
/// the cubic-phase prediction with B replaced by B_eff = B +- 2 sqrt(n)/c.
pub fn voronoi_transform_asymptotic(
    spec: &CubicPhaseSpec,
    n: u64,
    c: u64,
    _nu: u32,
) -> Result<(BranchPrediction, BranchPrediction)> {
    let x = spec.x_scale;
    let admissible = (spec.a * x).abs() >= (spec.c * spec.c * x.powi(3) + 1.0) * x.powf(spec.eta);
    if !admissible {
        return Err(Error::Inadmissible(format!(
            "|AX| = {} < (C^2 X^3 + 1) X^eta",
            (spec.a * x).abs()
        )));
    }
    let mk = |sign: i32| -> BranchPrediction {
        let b_eff = spec.b + sign as f64 * 2.0 * (n as f64).sqrt() / c as f64;
        // In scaled coordinates A' = A X, B' = B_eff sqrt(X), C' = C X^{3/2};
        // the stationary point of A'u + B' sqrt u is u0 = (B'/2A')^2.
        let u0 = (b_eff / (2.0 * spec.a)).powi(2) / x;
        let (lo, hi) = spec.weight.support();
        BranchPrediction {
            sign,
            b_eff,
            modulus_factor: (n as f64).powf(-0.25) * (c as f64).sqrt() * x.powf(0.25)
                / spec.a.abs().sqrt(),
            phase_at_sp: -b_eff * b_eff / (4.0 * spec.a)
                - spec.c * b_eff.powi(3) / (8.0 * spec.a.powi(3)),
            stationary_unit: u0,
            in_support: -(b_eff / (2.0 * spec.a)) > 0.0 && u0 > lo && u0 < hi,
        }
    };
    Ok((mk(1), mk(-1)))
}

/// Direct quadrature of one Bessel-split branch of the transform:
/// 2 pi i^{nu+1} int h(x) P^{sign}(4 pi sqrt(x n)/c) e(sign * 2 sqrt(xn)/c) dx
/// with h from the cubic spec (x in absolute coordinates, weight at x/X).
pub fn voronoi_transform_branch_quadrature(
    spec: &CubicPhaseSpec,
    n: u64,
    c: u64,
    nu: u32,
    sign: i32,
    tol: f64,
) -> Result<Complex64> {
    let s = spec.clone();
    let x_scale = spec.x_scale;
    let (wlo, whi) = spec.weight.support();
    let (lo, hi) = (wlo * x_scale, whi * x_scale);
    let nn = n as f64;
    let cc = c as f64;
    let amp = Arc::new(move |x: f64| -> Complex64 {
        let y = 4.0 * std::f64::consts::PI * (x * nn).sqrt() / cc;
        let (pp, pm) = match bessel_split_with_min(nu, y, 1e-9) {
            Ok(v) => v,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        let p = if sign > 0 { pp } else { pm };
        s.weight.eval(x / x_scale) * p
    });
    let phase = Arc::new(move |x: f64| -> f64 {
        let base = s.a * x + s.b * x.sqrt() + s.c * x * x.sqrt();
        base + sign as f64 * 2.0 * (x * nn).sqrt() / cc
    });
    let freq = ((spec.a.abs() + (spec.b.abs() + 2.0 * nn.sqrt() / cc) / (2.0 * lo.sqrt())
        + 1.5 * spec.c.abs() * hi.sqrt())
        * (hi - lo))
        .abs();
    let spec_q = OscIntegral::new(amp, phase, (lo, hi), freq);
    let q = osc_integrate(&spec_q, tol)?;
    let i_pow = Complex64::new(0.0, 1.0).powu((nu + 1) % 4);
    Ok(2.0 * std::f64::consts::PI * i_pow * q.value)
}
