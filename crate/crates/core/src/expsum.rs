//! Direct exponential-sum evaluation and the van der Corput k-th derivative
//! test, exercised on the two phase shapes that arise downstream: the
//! t-log phase over residue-class progressions and the cubic-in-sqrt phase.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::kahan::KahanC;
use num_complex::Complex64;
use std::sync::Arc;

pub const DEFAULT_LENGTH_CAP: u64 = 10_000_000;

/// Phase families for sum_{n in I} e(F(n)); F in turns.
#[derive(Clone)]
pub enum PhaseKind {
    /// F(x) = (t / 2 pi) ln(p x + ell): the dominant log phase on an
    /// arithmetic progression p x + ell.
    LogPhase { t: f64, p: f64, ell: f64 },
    /// F(x) = A x^{3/2} + B x + C sqrt(x).
    CubicSqrt { a: f64, b: f64, c: f64 },
    /// Arbitrary phase; derivatives by central differences.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct PhaseSpec {
    pub kind: PhaseKind,
    /// Inclusive integer interval [lo, hi].
    pub interval: (i64, i64),
}

impl PhaseSpec {
    pub fn log_phase(t: f64, p: f64, ell: f64, interval: (i64, i64)) -> PhaseSpec {
        PhaseSpec {
            kind: PhaseKind::LogPhase { t, p, ell },
            interval,
        }
    }

    pub fn cubic_sqrt(a: f64, b: f64, c: f64, interval: (i64, i64)) -> PhaseSpec {
        PhaseSpec {
            kind: PhaseKind::CubicSqrt { a, b, c },
            interval,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            PhaseKind::LogPhase { t, p, ell } => {
                t / (2.0 * std::f64::consts::PI) * (p * x + ell).ln()
            }
            PhaseKind::CubicSqrt { a, b, c } => a * x * x.sqrt() + b * x + c * x.sqrt(),
            PhaseKind::Custom(f) => f(x),
        }
    }

    /// k-th derivative of the phase at x (closed form where available).
    pub fn deriv(&self, k: u32, x: f64) -> f64 {
        match &self.kind {
            PhaseKind::LogPhase { t, p, ell } => {
                // d^k/dx^k ln(px+ell) = (-1)^{k-1} (k-1)! p^k / (px+ell)^k
                let mut fact = 1.0;
                for i in 1..k {
                    fact *= i as f64;
                }
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                t / (2.0 * std::f64::consts::PI) * sign * fact * p.powi(k as i32)
                    / (p * x + ell).powi(k as i32)
            }
            PhaseKind::CubicSqrt { a, b, c } => {
                // Derivatives of x^{3/2}, x, x^{1/2}.
                let pow_deriv = |alpha: f64, k: u32| -> f64 {
                    let mut coef = 1.0;
                    for i in 0..k {
                        coef *= alpha - i as f64;
                    }
                    coef * x.powf(alpha - k as f64)
                };
                let lin = match k {
                    0 => b * x,
                    1 => *b,
                    _ => 0.0,
                };
                a * pow_deriv(1.5, k) + lin + c * pow_deriv(0.5, k)
            }
            PhaseKind::Custom(f) => {
                let h = x.abs().max(1.0) * 1e-3;
                match k {
                    0 => f(x),
                    1 => (f(x + h) - f(x - h)) / (2.0 * h),
                    2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
                    3 => {
                        (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h))
                            / (2.0 * h * h * h)
                    }
                    4 => {
                        (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h)
                            + f(x - 2.0 * h))
                            / h.powi(4)
                    }
                    _ => panic!("derivative order {k} not supported for Custom"),
                }
            }
        }
    }
}

/// sum_{n in I} e(F(n)) by compensated summation.
pub fn exp_sum(spec: &PhaseSpec) -> Result<Complex64> {
    let (lo, hi) = spec.interval;
    if hi < lo {
        return Err(Error::InvalidInput("empty interval".into()));
    }
    let len = (hi - lo) as u64 + 1;
    if len > DEFAULT_LENGTH_CAP {
        return Err(Error::IntervalTooLong {
            len,
            cap: DEFAULT_LENGTH_CAP,
        });
    }
    let mut acc = KahanC::new();
    for n in lo..=hi {
        acc.add(crate::e(spec.eval(n as f64).fract()));
    }
    Ok(acc.value())
}

/// Double-double reference for exp_sum: phases accumulated and reduced
/// mod 2 pi in ~31-digit arithmetic (test oracle).
pub fn exp_sum_dd_oracle(spec: &PhaseSpec) -> Result<Complex64> {
    let (lo, hi) = spec.interval;
    let len = (hi - lo) as u64 + 1;
    if len > 1_000_000 {
        return Err(Error::IntervalTooLong { len, cap: 1_000_000 });
    }
    let two_pi = Dd::TWO_PI;
    let mut re = crate::kahan::Kahan::new();
    let mut im = crate::kahan::Kahan::new();
    for n in lo..=hi {
        let turns: Dd = match &spec.kind {
            PhaseKind::LogPhase { t, p, ell } => {
                let arg = Dd::from_f64(*p)
                    .mul(Dd::from_int(n))
                    .add(Dd::from_f64(*ell));
                // ln via integer-scaled decomposition: ln(arg) in dd.
                let scaled = arg.to_f64();
                let m = scaled.floor() as u64;
                let base = Dd::ln_u64(m.max(1));
                // ln(arg) = ln(m) + ln(arg/m) with the ratio near 1.
                let ratio = arg.div(Dd::from_int(m.max(1) as i64));
                let z = ratio.sub(Dd::ONE).div(ratio.add(Dd::ONE));
                let z2 = z.mul(z);
                let mut term = z;
                let mut acc = Dd::ZERO;
                for k in 0..30 {
                    acc = acc.add(term.div(Dd::from_int(2 * k + 1)));
                    term = term.mul(z2);
                }
                let lnarg = base.add(acc.add(acc));
                Dd::from_f64(*t).mul(lnarg).div(two_pi)
            }
            PhaseKind::CubicSqrt { a, b, c } => {
                let x = Dd::from_int(n);
                let sq = x.sqrt();
                Dd::from_f64(*a)
                    .mul(x)
                    .mul(sq)
                    .add(Dd::from_f64(*b).mul(x))
                    .add(Dd::from_f64(*c).mul(sq))
            }
            PhaseKind::Custom(f) => Dd::from_f64(f(n as f64)),
        };
        let rad = turns.mul(two_pi).rem_two_pi();
        let (s, c) = rad.sin_cos_reduced();
        re.add(c);
        im.add(s);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Van der Corput k-th derivative bound: |I| Lambda^kappa +
/// |I|^{1 - 2^{2-k}} Lambda^{-kappa} with kappa = 1/(2^k - 2).
pub fn vdc_bound(k: u32, lambda: f64, length: f64) -> f64 {
    assert!(k >= 2, "vdc bound needs k >= 2");
    assert!(lambda > 0.0);
    let kappa = 1.0 / (2f64.powi(k as i32) - 2.0);
    length * lambda.powf(kappa) + length.powf(1.0 - 2f64.powi(2 - k as i32)) * lambda.powf(-kappa)
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct VdcReport {
    pub k: u32,
    pub lambda: f64,
    pub length: f64,
    pub sum_abs: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Evaluate |exp_sum| / vdc_bound with Lambda estimated as the geometric
/// mean of |F^(k)| at the endpoints and midpoint. Errors if the k-th
/// derivative changes sign on the interval.
pub fn vdc_check(spec: &PhaseSpec, k: u32) -> Result<VdcReport> {
    let (lo, hi) = spec.interval;
    let (a, b) = (lo as f64, hi as f64);
    let mid = 0.5 * (a + b);
    let d = [spec.deriv(k, a), spec.deriv(k, mid), spec.deriv(k, b)];
    if d.iter().any(|v| !v.is_finite() || *v == 0.0) {
        return Err(Error::DerivativeSignChange);
    }
    let sign = d[0].signum();
    // Sign verified on a denser sample as well.
    for i in 0..=32 {
        let x = a + (b - a) * i as f64 / 32.0;
        if spec.deriv(k, x).signum() != sign {
            return Err(Error::DerivativeSignChange);
        }
    }
    let lambda = (d[0].abs() * d[1].abs() * d[2].abs()).powf(1.0 / 3.0);
    let length = b - a + 1.0;
    let sum_abs = exp_sum(spec)?.norm();
    let bound = vdc_bound(k, lambda, length);
    Ok(VdcReport {
        k,
        lambda,
        length,
        sum_abs,
        bound,
        ratio: sum_abs / bound,
    })
}
