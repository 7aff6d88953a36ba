//! Smooth compactly supported test functions ("inert weights") with
//! certified derivative bounds, plus the dyadic partition of unity.
//!
//! One canonical mollifier family is used throughout so tests stay
//! deterministic: the C-infinity bump exp(-1/(1-u^2)) and plateaus glued from
//! s(x) = exp(-1/x).

use crate::error::{Error, Result};
use crate::jet::Jet;

pub const DEFAULT_J_MAX: usize = 8;
const BOUND_GRID: usize = 2001;

/// Evaluation kinds. All are C-infinity with compact support in (0, inf).
#[derive(Clone, Debug)]
enum Kind {
    /// exp(1 - 1/(1-u^2)) on [a,b] with u the affine map onto [-1,1]; peak 1.
    Bump { a: f64, b: f64 },
    /// 1 on [a+ramp, b-ramp], 0 outside [a,b], glued C-infinity ramps.
    Plateau { a: f64, b: f64, ramp: f64 },
    /// Dyadic partition block: s(x/2^k) - s(x/2^{k+1}) where s is the glued
    /// step that rises from 0 on (-inf,1] to 1 on [2,inf). Support [2^k, 2^{k+2}].
    DyadicBlock { k: i32 },
}

/// A smooth compactly supported weight with certified scaled-derivative
/// bounds sup |x^j w^(j)(x)| for j <= j_max, and an optional constant factor.
#[derive(Clone, Debug)]
pub struct InertWeight {
    kind: Kind,
    scale_y: f64,
    support: (f64, f64),
    deriv_bounds: Vec<f64>,
    integral: f64,
}

/// Smooth step on [0,1]: 0 at u<=0, 1 at u>=1.
fn glue_jet(u: Jet) -> Jet {
    // s(u)/(s(u)+s(1-u)) with s(x)=exp(-1/x); caller guarantees 0<u<1.
    let s = u.recip().scale(-1.0).exp();
    let one_minus = Jet::constant(1.0).sub(&u);
    let s1 = one_minus.recip().scale(-1.0).exp();
    s.mul(&s.add(&s1).recip())
}

fn glue(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let s = (-1.0 / u).exp();
        let s1 = (-1.0 / (1.0 - u)).exp();
        s / (s + s1)
    }
}

/// The rising step used by the dyadic partition: 0 for x<=1, 1 for x>=2.
fn step(x: f64) -> f64 {
    glue(x - 1.0)
}

fn step_jet(x: Jet) -> Option<Jet> {
    let v = x.c[0];
    if v <= 1.0 || v >= 2.0 {
        None // constant 0 or 1; handled by caller
    } else {
        Some(glue_jet(x.sub(&Jet::constant(1.0))))
    }
}

impl InertWeight {
    fn build(kind: Kind, support: (f64, f64)) -> InertWeight {
        let mut w = InertWeight {
            kind,
            scale_y: 1.0,
            support,
            deriv_bounds: Vec::new(),
            integral: 0.0,
        };
        w.deriv_bounds = w.certify_bounds(DEFAULT_J_MAX, BOUND_GRID);
        w.integral = w.integral_gauss();
        w
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// sup_x |x^j w^(j)(x)|, certified on a dense grid at construction.
    pub fn deriv_bound(&self, j: usize) -> f64 {
        self.deriv_bounds[j]
    }

    pub fn deriv_bounds(&self) -> &[f64] {
        &self.deriv_bounds
    }

    /// Integral of the weight over its support.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// Same weight multiplied by a constant.
    pub fn scaled(&self, s: f64) -> InertWeight {
        let mut w = self.clone();
        w.scale_y *= s;
        w.deriv_bounds = w.deriv_bounds.iter().map(|b| b * s.abs()).collect();
        w.integral *= s;
        w
    }

    /// Same weight scaled so its integral is 1.
    pub fn normalized(&self) -> InertWeight {
        self.scaled(1.0 / self.integral)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale_y * self.eval_raw(x)
    }

    fn eval_raw(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Bump { a, b } => {
                let u = (2.0 * x - (a + b)) / (b - a);
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                }
            }
            Kind::Plateau { a, b, ramp } => {
                if x <= a || x >= b {
                    0.0
                } else {
                    glue((x - a) / ramp) * glue((b - x) / ramp)
                }
            }
            Kind::DyadicBlock { k } => {
                let s0 = step(x / 2f64.powi(k));
                let s1 = step(x / 2f64.powi(k + 1));
                s0 - s1
            }
        }
    }

    /// Taylor jet at x (exact derivatives of the analytic pieces).
    pub fn eval_jet(&self, x: f64) -> Jet {
        let j = match self.kind {
            Kind::Bump { a, b } => {
                let u = Jet::variable(x)
                    .scale(2.0 / (b - a))
                    .sub(&Jet::constant((a + b) / (b - a)));
                if u.c[0].abs() >= 1.0 {
                    Jet::constant(0.0)
                } else {
                    let one_minus_u2 = Jet::constant(1.0).sub(&u.mul(&u));
                    Jet::constant(1.0).sub(&one_minus_u2.recip()).exp()
                }
            }
            Kind::Plateau { a, b, ramp } => {
                if x <= a || x >= b {
                    Jet::constant(0.0)
                } else {
                    let ua = Jet::variable(x).sub(&Jet::constant(a)).scale(1.0 / ramp);
                    let ub = Jet::constant(b).sub(&Jet::variable(x)).scale(1.0 / ramp);
                    let ga = if ua.c[0] >= 1.0 {
                        Jet::constant(1.0)
                    } else {
                        glue_jet(ua)
                    };
                    let gb = if ub.c[0] >= 1.0 {
                        Jet::constant(1.0)
                    } else {
                        glue_jet(ub)
                    };
                    ga.mul(&gb)
                }
            }
            Kind::DyadicBlock { k } => {
                let x0 = Jet::variable(x).scale(1.0 / 2f64.powi(k));
                let x1 = Jet::variable(x).scale(1.0 / 2f64.powi(k + 1));
                let s0 = match step_jet(x0) {
                    Some(j) => j,
                    None => Jet::constant(if x0.c[0] >= 2.0 { 1.0 } else { 0.0 }),
                };
                let s1 = match step_jet(x1) {
                    Some(j) => j,
                    None => Jet::constant(if x1.c[0] >= 2.0 { 1.0 } else { 0.0 }),
                };
                s0.sub(&s1)
            }
        };
        j.scale(self.scale_y)
    }

    /// j-th derivative at x.
    pub fn deriv(&self, j: usize, x: f64) -> f64 {
        self.eval_jet(x).deriv(j)
    }

    fn certify_bounds(&self, j_max: usize, grid: usize) -> Vec<f64> {
        let (a, b) = self.support;
        let mut bounds = vec![0.0; j_max + 1];
        for i in 0..grid {
            let x = a + (b - a) * (i as f64 + 0.5) / grid as f64;
            let jet = self.eval_jet(x);
            let mut xj = 1.0;
            for (j, bound) in bounds.iter_mut().enumerate() {
                let v = (xj * jet.deriv(j)).abs();
                if v > *bound {
                    *bound = v;
                }
                xj *= x;
            }
        }
        bounds
    }

    fn integral_gauss(&self) -> f64 {
        // 64 panels x 10-node Gauss-Legendre; the integrand is smooth.
        let (a, b) = self.support;
        let (nodes, wts) = crate::quad::gauss_legendre_10();
        let panels = 64;
        let h = (b - a) / panels as f64;
        let mut acc = crate::kahan::Kahan::new();
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (t, w) in nodes.iter().zip(wts.iter()) {
                let x = lo + h * 0.5 * (t + 1.0);
                acc.add(w * h * 0.5 * self.eval_raw(x));
            }
        }
        acc.value()
    }
}

/// Canonical bump on [a, b], normalised to peak value 1.
pub fn bump(a: f64, b: f64) -> Result<InertWeight> {
    if !(0.0 < a && a < b) {
        return Err(Error::InvalidInput(format!(
            "bump needs 0 < a < b, got ({a}, {b})"
        )));
    }
    Ok(InertWeight::build(Kind::Bump { a, b }, (a, b)))
}

/// Smooth plateau: 1 on [a+ramp, b-ramp], supported on [a, b].
pub fn plateau(a: f64, b: f64, ramp: f64) -> Result<InertWeight> {
    if !(0.0 < a && a < b && ramp > 0.0 && 2.0 * ramp < b - a) {
        return Err(Error::InvalidInput(format!(
            "plateau needs 0 < a < b and 0 < 2 ramp < b - a, got ({a}, {b}, {ramp})"
        )));
    }
    Ok(InertWeight::build(Kind::Plateau { a, b, ramp }, (a, b)))
}

/// Smooth dyadic partition of unity covering [x_min, x_max]: blocks
/// W_k(x) = s(x/2^k) - s(x/2^{k+1}) summing to exactly 1 on the range.
pub fn dyadic_partition(x_min: f64, x_max: f64) -> Result<Vec<InertWeight>> {
    if !(0.0 < x_min && x_min < x_max) {
        return Err(Error::InvalidInput(format!(
            "dyadic_partition needs 0 < x_min < x_max, got ({x_min}, {x_max})"
        )));
    }
    // W_k is supported on (2^k, 2^{k+2}); include every k whose block meets
    // [x_min, x_max]: 2^k < x_max and 2^{k+2} > x_min.
    let k_lo = (x_min.log2().floor() as i32) - 2;
    let k_hi = x_max.log2().ceil() as i32;
    let mut blocks = Vec::new();
    for k in k_lo..=k_hi {
        let kind = Kind::DyadicBlock { k };
        let support = (2f64.powi(k), 2f64.powi(k + 2));
        blocks.push(InertWeight::build(kind, support));
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_peak_and_support() {
        let w = bump(1.0, 2.0).unwrap();
        assert!((w.eval(1.5) - 1.0).abs() < 1e-15);
        assert_eq!(w.eval(0.999), 0.0);
        assert_eq!(w.eval(2.0), 0.0);
        assert!(w.eval(1.2) > 0.0 && w.eval(1.2) < 1.0);
    }

    #[test]
    fn bump_rejects_bad_interval() {
        assert!(bump(2.0, 1.0).is_err());
        assert!(bump(1.0, 1.0).is_err());
    }

    #[test]
    fn deriv_bounds_finite_and_grid_stable() {
        let w = bump(1.0, 2.0).unwrap();
        for j in 0..=DEFAULT_J_MAX {
            assert!(w.deriv_bound(j).is_finite());
        }
        // c_1 from the construction grid vs a 2x denser certification grid:
        // < 1% relative change.
        let dense = w.certify_bounds(1, 2 * BOUND_GRID);
        let rel = (dense[1] - w.deriv_bound(1)).abs() / dense[1];
        assert!(rel < 0.01, "c_1 grid-density drift {rel}");
    }

    #[test]
    fn jet_derivatives_match_finite_differences() {
        // Independent oracle: central finite differences on the plain eval.
        let w = bump(1.0, 2.0).unwrap();
        for &x in &[1.2f64, 1.37, 1.5, 1.81] {
            let h = 1e-4;
            let fd1 = (w.eval(x + h) - w.eval(x - h)) / (2.0 * h);
            let fd2 = (w.eval(x + h) - 2.0 * w.eval(x) + w.eval(x - h)) / (h * h);
            assert!((w.deriv(1, x) - fd1).abs() < 1e-6);
            assert!((w.deriv(2, x) - fd2).abs() < 1e-4);
        }
    }

    #[test]
    fn plateau_is_one_on_core() {
        let v = plateau(0.75, 2.25, 0.25).unwrap();
        for &x in &[1.0, 1.3, 1.7, 2.0] {
            assert!((v.eval(x) - 1.0).abs() < 1e-15);
        }
        assert_eq!(v.eval(0.74), 0.0);
        assert_eq!(v.eval(2.26), 0.0);
    }

    #[test]
    fn partition_of_unity() {
        let blocks = dyadic_partition(1.0, 1e3).unwrap();
        // 100 log-spaced points.
        for i in 0..100 {
            let x = 10f64.powf(3.0 * i as f64 / 99.0);
            let sum: f64 = blocks.iter().map(|w| w.eval(x)).sum();
            assert!((sum - 1.0).abs() < 1e-12, "partition at {x}: {sum}");
        }
    }

    #[test]
    fn partition_block_count_and_shape() {
        let blocks = dyadic_partition(1.0, 1024.0).unwrap();
        // 10 + O(1) blocks for [1, 2^10].
        assert!(blocks.len() >= 10 && blocks.len() <= 16, "{}", blocks.len());
        // Constant support-width-to-center ratio across blocks.
        let ratios: Vec<f64> = blocks
            .iter()
            .map(|w| {
                let (a, b) = w.support();
                (b - a) / (0.5 * (a + b))
            })
            .collect();
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-12);
        }
    }
}
