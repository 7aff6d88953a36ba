//! Critical-line evaluators: zeta by Euler-Maclaurin, the weight-12 L-value
//! by a smoothed approximate functional equation, and the exponent-envelope
//! scanner.
//!
//! The AFE cutoff V is computed by numerical Mellin inversion of the
//! Gamma-factor ratio with the Gaussian mollifier e^{A u^2}/u on the line
//! Re u = 1/2. Two hard constraints pin the constants: the mollifier must
//! crush the e^{pi|tau|/2} growth of the ratio in the lower half of the
//! contour (A large enough that exp(pi^2/(16A)) stays small relative to f64
//! round-off head-room), and it alone controls the cutoff length
//! n_cut ~ exp(sqrt(ln(1/eps) * 4A)) * |s + 11/2| / (2 pi). A = 0.134 keeps
//! the contour bump below ~1e2 * sqrt(t) and the sums near 9t.

use crate::error::{Error, Result};
use crate::forms::{Form, FormCoefficients};
use crate::kahan::{Kahan, KahanC};
use crate::special::{lgamma_complex, riemann_siegel_theta};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LMethod {
    EulerMaclaurin,
    RiemannSiegelLike,
    SmoothedAfe,
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct LValue {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub err_est: f64,
    pub method: LMethod,
}

impl LValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

pub const ZETA_T_MAX: f64 = 1e5;
pub const L_DELTA_T_MAX: f64 = 1e4;

/// Gaussian mollifier width in e^{A u^2}; see the module docs for why.
pub const AFE_GAUSS_A: f64 = 0.134;
/// Contour Re u.
const AFE_SIGMA: f64 = 0.5;
/// Contour half-height and step.
const AFE_TAU_MAX: f64 = 45.0;
const AFE_TAU_STEP: f64 = 0.02;

/// zeta(1/2 + it) by Euler-Maclaurin with 5 correction terms.
pub fn zeta_value(t: f64) -> Result<LValue> {
    if t.abs() > ZETA_T_MAX {
        return Err(Error::InvalidInput(format!(
            "zeta_value supports |t| <= {ZETA_T_MAX}"
        )));
    }
    let s = Complex64::new(0.5, t);
    let (value, err) = zeta_euler_maclaurin(s, 1.0);
    Ok(LValue {
        t,
        re: value.re,
        im: value.im,
        err_est: err,
        method: LMethod::EulerMaclaurin,
    })
}

/// Euler-Maclaurin evaluation at general s (Re s > 0); `refine` scales the
/// cutoff for self-consistency checks.
pub fn zeta_euler_maclaurin(s: Complex64, refine: f64) -> (Complex64, f64) {
    let m = ((3.0 * s.im.abs()).max(50.0) * refine).ceil();
    let mut acc = KahanC::new();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mn = m as usize;
    for n in 1..mn {
        let nf = n as f64;
        // n^{-s} = n^{-1/2} e^{-it ln n}
        acc.add(nf.powf(-s.re) * crate::e(-s.im * nf.ln() / two_pi));
    }
    let mf = m;
    let m_pow = mf.powf(-s.re) * crate::e(-s.im * mf.ln() / two_pi);
    acc.add(m_pow * mf / (s - 1.0)); // M^{1-s}/(s-1)
    acc.add(0.5 * m_pow);

    // Bernoulli corrections: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * M^{-s-2j+1}.
    const B2J_OVER_FACT: [f64; 6] = [
        1.0 / 12.0,                    // B2/2!
        -1.0 / 720.0,                  // B4/4!
        1.0 / 30240.0,                 // B6/6!
        -1.0 / 1209600.0,              // B8/8!
        1.0 / 47900160.0,              // B10/10!
        -691.0 / 1307674368000.0,      // B12/12!
    ];
    let mut poch = s; // s(s+1)...(s+2j-2), starts at j=1 with just s
    let mut m_shift = m_pow / mf; // M^{-s-1}
    let mut last = Complex64::new(0.0, 0.0);
    for (j, &b) in B2J_OVER_FACT.iter().enumerate() {
        last = b * poch * m_shift;
        if j == B2J_OVER_FACT.len() - 1 {
            break; // last term is the error estimate, not added
        }
        acc.add(last);
        poch *= (s + (2 * j + 1) as f64) * (s + (2 * j + 2) as f64);
        m_shift /= mf * mf;
    }
    (acc.value(), last.norm() + 1e-15 * m)
}

/// Hardy Z-function: e^{i theta(t)} zeta(1/2 + it), real for real t.
pub fn hardy_z(t: f64) -> Result<f64> {
    let z = zeta_value(t)?;
    let th = riemann_siegel_theta(t);
    Ok((crate::e(th / (2.0 * std::f64::consts::PI)) * z.value()).re)
}

/// First `count` zeros of zeta on the critical line, located to `tol` by
/// bisection on sign changes of the Hardy Z-function.
pub fn zeta_zeros(count: usize, tol: f64) -> Result<Vec<f64>> {
    let mut zeros = Vec::new();
    let mut t = 12.0;
    let step = 0.05;
    let mut prev = hardy_z(t)?;
    while zeros.len() < count && t < 120.0 {
        let t_next = t + step;
        let cur = hardy_z(t_next)?;
        if prev.signum() != cur.signum() {
            let (mut lo, mut hi) = (t, t_next);
            let mut flo = prev;
            while hi - lo > tol * 0.25 {
                let mid = 0.5 * (lo + hi);
                let fm = hardy_z(mid)?;
                if flo.signum() != fm.signum() {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        prev = cur;
        t = t_next;
    }
    Ok(zeros)
}

/// Precomputed contour data for the AFE cutoff V_s at one value of t.
struct AfeContour {
    /// Quadrature weight * integrand factor at each node, excluding y^{-u}.
    coef: Vec<Complex64>,
    /// ln-step multiplier for the geometric y^{-i tau} factor.
    tau0: f64,
    dtau: f64,
}

impl AfeContour {
    fn build(s: Complex64, tau_max: f64, dtau: f64) -> AfeContour {
        let s_tilde = s + 5.5; // s + 11/2
        let lg_base = lgamma_complex(s_tilde);
        let n = (2.0 * tau_max / dtau).round() as usize + 1;
        let tau0 = -tau_max;
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        let coef: Vec<Complex64> = (0..n)
            .map(|j| {
                let tau = tau0 + j as f64 * dtau;
                let u = Complex64::new(AFE_SIGMA, tau);
                let ratio = (lgamma_complex(s_tilde + u) - lg_base - u * ln_2pi).exp();
                let gauss = (AFE_GAUSS_A * u * u).exp();
                ratio * gauss / u * (dtau / (2.0 * std::f64::consts::PI))
            })
            .collect();
        AfeContour { coef, tau0, dtau }
    }

    /// V_s(y) = (1/2 pi i) int (gamma(s+u)/gamma(s)) y^{-u} e^{Au^2} du/u.
    fn eval(&self, y: f64) -> Complex64 {
        let ly = y.ln();
        // y^{-u} = y^{-sigma} e^{-i tau ln y}: geometric in the node index.
        let scale = y.powf(-AFE_SIGMA);
        let mut rot = crate::e(-self.tau0 * ly / (2.0 * std::f64::consts::PI));
        let step = crate::e(-self.dtau * ly / (2.0 * std::f64::consts::PI));
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in &self.coef {
            acc += c * rot;
            rot *= step;
        }
        scale * acc
    }
}

/// L(1/2 + it) for the weight-12 form by the smoothed AFE:
/// L(s) = sum lambda(n) n^{-s} V_s(n) + X(s) sum lambda(n) n^{s-1} conj(V_s)(n),
/// X(s) = (2 pi)^{2s-1} Gamma(13/2 - s)/Gamma(s + 11/2), root number +1.
pub fn l_delta_value(form: &FormCoefficients, t: f64) -> Result<LValue> {
    l_delta_value_with(form, t, 1.0)
}

/// `refine` > 1 doubles the contour resolution/extent (self-consistency).
pub fn l_delta_value_with(form: &FormCoefficients, t: f64, refine: f64) -> Result<LValue> {
    if form.form() != Form::HolomorphicDelta {
        return Err(Error::UnsupportedForm(
            "l_delta_value needs the weight-12 holomorphic form".into(),
        ));
    }
    if t.abs() > L_DELTA_T_MAX {
        return Err(Error::InvalidInput(format!(
            "l_delta_value supports |t| <= {L_DELTA_T_MAX}"
        )));
    }
    let s = Complex64::new(0.5, t);
    let contour = AfeContour::build(s, AFE_TAU_MAX * refine.max(1.0), AFE_TAU_STEP / refine);

    // Root factor X(s).
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    let x_s = (lgamma_complex(Complex64::new(6.5, 0.0) - s)
        - lgamma_complex(s + 5.5)
        + (2.0 * s - 1.0) * ln_2pi)
        .exp();

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut first = KahanC::new();
    let mut second = KahanC::new();
    let mut abs_mass = Kahan::new();
    let mut small_run = 0usize;
    let mut n = 1usize;
    let mut tail_est = 0.0f64;
    loop {
        if n > form.len() {
            return Err(Error::TableTooShort {
                needed: n,
                have: form.len(),
            });
        }
        let v = contour.eval(n as f64);
        let lam = form.lambda(n)?;
        let nf = n as f64;
        let carrier = crate::e(-t * nf.ln() / two_pi) / nf.sqrt(); // n^{-1/2-it}
        first.add(lam * v * carrier);
        second.add(lam * v.conj() * carrier.conj());
        abs_mass.add(lam.abs() * v.norm() / nf.sqrt());
        let vmag = v.norm() / nf.sqrt();
        if vmag < 1e-13 {
            small_run += 1;
            tail_est = tail_est.max(vmag);
        } else {
            small_run = 0;
        }
        // Past the conductor scale and the weight has died off.
        if small_run >= 8 && nf > (s + 5.5).norm() / two_pi {
            break;
        }
        n += 1;
    }
    let value = first.value() + x_s * second.value();
    // Error: contour round-off floor scales with the accumulated |V| mass.
    let err = (tail_est * 16.0 + 3e-13 * abs_mass.value()).max(1e-13);
    Ok(LValue {
        t,
        re: value.re,
        im: value.im,
        err_est: err,
        method: LMethod::SmoothedAfe,
    })
}

/// Independent t = 0 reference: the exact incomplete-gamma cutoff, which is
/// elementary at integer argument: L(1/2) = 2 sum lambda(n) n^{-1/2} Q(6, 2 pi n),
/// Q(6, x) = e^{-x}(1 + x + x^2/2 + x^3/6 + x^4/24 + x^5/120).
pub fn l_delta_central_oracle(form: &FormCoefficients) -> Result<f64> {
    let mut acc = Kahan::new();
    for n in 1..=60usize {
        let x = 2.0 * std::f64::consts::PI * n as f64;
        let q = (-x).exp()
            * (1.0 + x + x * x / 2.0 + x.powi(3) / 6.0 + x.powi(4) / 24.0 + x.powi(5) / 120.0);
        if n > form.len() {
            return Err(Error::TableTooShort {
                needed: n,
                have: form.len(),
            });
        }
        acc.add(2.0 * form.lambda(n)? * q / (n as f64).sqrt());
    }
    Ok(acc.value())
}

/// L-value dispatch: Eisenstein is zeta^2 by convention.
pub fn l_value(form: &FormCoefficients, t: f64) -> Result<LValue> {
    match form.form() {
        Form::Eisenstein => {
            let z = zeta_value(t)?;
            let v = z.value() * z.value();
            Ok(LValue {
                t,
                re: v.re,
                im: v.im,
                err_est: 2.0 * z.err_est * z.value().norm() + z.err_est * z.err_est,
                method: z.method,
            })
        }
        Form::HolomorphicDelta => l_delta_value(form, t),
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct EnvelopeRow {
    pub t: f64,
    pub abs_l: f64,
    pub err_est: f64,
    pub env_weyl: f64,
    pub env_subweyl: f64,
    pub env_limit: f64,
}

/// Envelope exponents: Weyl t^{1/3}, the sub-Weyl exponent 19/58, and the
/// method's limiting exponent 1/4. The scan fits majorising constants; it
/// asserts nothing asymptotic.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EnvelopeReport {
    pub rows: Vec<EnvelopeRow>,
    pub c_weyl: f64,
    pub c_subweyl: f64,
    pub c_limit: f64,
}

pub const EXP_WEYL: f64 = 1.0 / 3.0;
pub const EXP_SUBWEYL: f64 = 19.0 / 58.0;
pub const EXP_LIMIT: f64 = 0.25;

/// |L(1/2+it, f)| on a grid with fitted exponent envelopes.
pub fn scan_envelope(
    form: &FormCoefficients,
    t_min: f64,
    t_max: f64,
    step: f64,
) -> Result<EnvelopeReport> {
    if !(t_min > 0.0 && t_max > t_min && step > 0.0) {
        return Err(Error::InvalidInput("bad scan grid".into()));
    }
    let count = ((t_max - t_min) / step).floor() as usize + 1;
    let vals: Result<Vec<(f64, f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let t = t_min + i as f64 * step;
            let lv = l_value(form, t)?;
            Ok((t, lv.value().norm(), lv.err_est))
        })
        .collect();
    let vals = vals?;
    let fit = |theta: f64| -> f64 {
        vals.iter()
            .map(|&(t, a, _)| a / t.powf(theta))
            .fold(0.0f64, f64::max)
    };
    let c_weyl = fit(EXP_WEYL);
    let c_subweyl = fit(EXP_SUBWEYL);
    let c_limit = fit(EXP_LIMIT);
    let rows = vals
        .into_iter()
        .map(|(t, abs_l, err_est)| EnvelopeRow {
            t,
            abs_l,
            err_est,
            env_weyl: c_weyl * t.powf(EXP_WEYL),
            env_subweyl: c_subweyl * t.powf(EXP_SUBWEYL),
            env_limit: c_limit * t.powf(EXP_LIMIT),
        })
        .collect();
    Ok(EnvelopeReport {
        rows,
        c_weyl,
        c_subweyl,
        c_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_at_origin() {
        // zeta(1/2) = -1.4603545088...
        let z = zeta_value(0.0).unwrap();
        assert!((z.re - (-1.4603545088095868)).abs() < 1e-9, "{}", z.re);
        assert!(z.im.abs() < 1e-10);
    }

    #[test]
    fn zeta_known_value_at_t14() {
        // Near the first zero the modulus is tiny.
        let z = zeta_value(14.134725).unwrap();
        assert!(z.value().norm() < 1e-4, "{}", z.value().norm());
    }

    #[test]
    fn zeta_conjugate_symmetry() {
        for &t in &[37.5, 101.3, 999.9] {
            let a = zeta_value(t).unwrap().value();
            let b = zeta_value(-t).unwrap().value();
            assert!((a - b.conj()).norm() < 1e-10 * a.norm().max(1e-3));
        }
    }

    #[test]
    fn zeta_self_consistency_under_cutoff_doubling() {
        for &t in &[25.0, 250.0] {
            let s = Complex64::new(0.5, t);
            let (a, err) = zeta_euler_maclaurin(s, 1.0);
            let (b, _) = zeta_euler_maclaurin(s, 2.0);
            assert!((a - b).norm() <= err.max(1e-12), "t={t}: {}", (a - b).norm());
        }
    }

    #[test]
    fn first_five_zeros() {
        let zeros = zeta_zeros(5, 1e-4).unwrap();
        let known = [
            14.134725141734693,
            21.022039638771554,
            25.010857580145688,
            30.424876125859513,
            32.93506158773919,
        ];
        assert!(zeros.len() >= 5);
        for (z, k) in zeros.iter().zip(known.iter()) {
            assert!((z - k).abs() < 1e-3, "zero {z} vs {k}");
        }
    }

    #[test]
    fn l_delta_central_value_matches_oracle() {
        let form = FormCoefficients::delta(400).unwrap();
        let afe = l_delta_value(&form, 0.0).unwrap();
        let oracle = l_delta_central_oracle(&form).unwrap();
        assert!(afe.im.abs() < 1e-8, "L(1/2) should be real, im = {}", afe.im);
        assert!(
            (afe.re - oracle).abs() < 1e-6 * oracle.abs().max(0.1),
            "AFE {} vs incomplete-gamma oracle {}",
            afe.re,
            oracle
        );
    }

    #[test]
    fn l_delta_conjugate_symmetry() {
        let form = FormCoefficients::delta(2000).unwrap();
        for &t in &[13.7, 61.2] {
            let a = l_delta_value(&form, t).unwrap();
            let b = l_delta_value(&form, -t).unwrap();
            assert!(
                (a.value() - b.value().conj()).norm() <= 4.0 * (a.err_est + b.err_est),
                "t = {t}"
            );
        }
    }

    #[test]
    fn l_delta_contour_resolution_stability() {
        let form = FormCoefficients::delta(2000).unwrap();
        for &t in &[20.0, 80.0] {
            let a = l_delta_value_with(&form, t, 1.0).unwrap();
            let b = l_delta_value_with(&form, t, 2.0).unwrap();
            assert!(
                (a.value() - b.value()).norm() <= a.err_est.max(1e-10) * 4.0,
                "t = {t}: {} vs {}, err {}",
                a.value(),
                b.value(),
                a.err_est
            );
        }
    }

    #[test]
    fn eisenstein_factorisation() {
        let form = FormCoefficients::eisenstein(64).unwrap();
        for &t in &[12.3, 77.7] {
            let l = l_value(&form, t).unwrap();
            let z = zeta_value(t).unwrap();
            let prod = z.value() * z.value();
            assert!((l.value() - prod).norm() <= 1e-12 + 2.0 * l.err_est);
        }
    }

    #[test]
    fn envelope_scan_shapes() {
        let form = FormCoefficients::eisenstein(64).unwrap();
        let rep = scan_envelope(&form, 10.0, 200.0, 1.0).unwrap();
        assert_eq!(rep.rows.len(), 191);
        for row in &rep.rows {
            assert!(row.abs_l <= rep.c_weyl * row.t.powf(EXP_WEYL) + 1e-9);
        }
        assert!(rep.c_weyl > 0.0 && rep.c_subweyl >= rep.c_weyl * 0.5);
    }
}
