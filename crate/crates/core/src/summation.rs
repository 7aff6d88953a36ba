//! The explicit summation identities: the trivial delta symbol, both sides
//! of GL(2) Voronoi and GL(1) Poisson summation, the direct smoothed sum,
//! and the closed-form phase-expansion check for the combined transform.

use crate::arith::{gcd, is_prime, mod_inverse, next_prime};
use crate::error::{Error, Result};
use crate::forms::{Form, FormCoefficients};
use crate::kahan::KahanC;
use crate::quad::{osc_integrate, OscIntegral};
use crate::weights::InertWeight;
use num_complex::Complex64;
use std::sync::Arc;

/// Parameters governing one transformation-chain run. Lengths N, K are real;
/// p is the single large prime modulus.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct AnalyticParams {
    pub t: f64,
    pub n_size: f64,
    pub k_size: f64,
    pub p: u64,
    /// Desk-scale surrogate for the "arbitrarily large modulus" requirement:
    /// admissible runs need p > margin * N / K.
    pub margin: f64,
}

pub const DEFAULT_MARGIN: f64 = 10.0;

impl AnalyticParams {
    /// Choose p = nextprime(margin * N / K).
    pub fn new(t: f64, n_size: f64, k_size: f64, margin: f64) -> Result<AnalyticParams> {
        let p = next_prime(margin * n_size / k_size);
        Self::build(t, n_size, k_size, p, margin)
    }

    /// Explicit prime modulus (tests exercise inadmissible moduli too).
    pub fn with_p(t: f64, n_size: f64, k_size: f64, p: u64) -> Result<AnalyticParams> {
        Self::build(t, n_size, k_size, p, DEFAULT_MARGIN)
    }

    fn build(t: f64, n_size: f64, k_size: f64, p: u64, margin: f64) -> Result<AnalyticParams> {
        if !(t > 0.0 && n_size > 0.0 && k_size > 0.0) {
            return Err(Error::InvalidInput(
                "AnalyticParams needs t, N, K > 0".into(),
            ));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} is not prime")));
        }
        Ok(AnalyticParams {
            t,
            n_size,
            k_size,
            p,
            margin,
        })
    }

    /// Q = p sqrt(K/N).
    pub fn q_dirichlet(&self) -> f64 {
        self.p as f64 * (self.k_size / self.n_size).sqrt()
    }

    /// Dual length N0 = p^2 K^2 / N.
    pub fn n0(&self) -> f64 {
        let pf = self.p as f64;
        pf * pf * self.k_size * self.k_size / self.n_size
    }

    /// p > margin N/K, the admissibility surrogate for the modulus bound.
    pub fn modulus_admissible(&self) -> bool {
        self.p as f64 > self.margin * self.n_size / self.k_size
    }
}

/// S(N) = sum_n lambda(n) n^{-it} W(n/N), compensated.
pub fn s_direct(
    form: &FormCoefficients,
    params: &AnalyticParams,
    w: &InertWeight,
) -> Result<Complex64> {
    s_direct_at(form, params.t, params.n_size, w)
}

pub fn s_direct_at(
    form: &FormCoefficients,
    t: f64,
    n_size: f64,
    w: &InertWeight,
) -> Result<Complex64> {
    let (lo, hi) = w.support();
    let n_lo = (lo * n_size).ceil().max(1.0) as usize;
    let n_hi = (hi * n_size).floor() as usize;
    if n_hi > form.len() {
        return Err(Error::TableTooShort {
            needed: n_hi,
            have: form.len(),
        });
    }
    let mut acc = KahanC::new();
    let two_pi = 2.0 * std::f64::consts::PI;
    for n in n_lo..=n_hi {
        let wv = w.eval(n as f64 / n_size);
        if wv == 0.0 {
            continue;
        }
        let lam = form.lambda(n)?;
        acc.add(lam * wv * crate::e(-t * (n as f64).ln() / two_pi));
    }
    Ok(acc.value())
}

/// Result of one delta-symbol evaluation.
#[derive(Clone, Copy, Debug)]
pub struct DeltaEval {
    pub value: Complex64,
    pub err_est: f64,
}

/// Trivial delta symbol, full residue sum, normalised so that the n = r
/// output is exactly 1 (up to quadrature error):
///
///   (1/(Kp)) sum_{a mod p} e(a(n-r)/p) int W(v/K) (n/r)^{iv} dv / int W.
///
/// The full a-sum vanishes unless p | n - r, which is why a large prime
/// modulus turns this into a true delta on the tested range.
pub fn trivial_delta(
    n: u64,
    r: u64,
    params: &AnalyticParams,
    w_v: &InertWeight,
) -> Result<DeltaEval> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidInput("trivial_delta needs n, r >= 1".into()));
    }
    if (n % params.p) != (r % params.p) {
        // Full residue sum is exactly zero.
        return Ok(DeltaEval {
            value: Complex64::new(0.0, 0.0),
            err_est: 0.0,
        });
    }
    let phi = delta_profile(n, r, params, w_v)?;
    Ok(phi)
}

/// Restricted-sum variant (a runs over nonzero residues): differs from the
/// full sum by the O(1/p) term that the modulus lower bound absorbs.
pub fn trivial_delta_restricted(
    n: u64,
    r: u64,
    params: &AnalyticParams,
    w_v: &InertWeight,
) -> Result<DeltaEval> {
    let full = trivial_delta(n, r, params, w_v)?;
    let prof = delta_profile(n, r, params, w_v)?;
    let correction = prof.value / params.p as f64;
    Ok(DeltaEval {
        value: full.value - correction,
        err_est: full.err_est + prof.err_est / params.p as f64,
    })
}

/// Normalised oscillatory profile (1/(K int W)) int W(v/K) (n/r)^{iv} dv,
/// equal to 1 at n = r and decaying once K |ln(n/r)| is large.
fn delta_profile(n: u64, r: u64, params: &AnalyticParams, w_v: &InertWeight) -> Result<DeltaEval> {
    let k = params.k_size;
    let log_ratio = (n as f64).ln() - (r as f64).ln();
    if n == r {
        return Ok(DeltaEval {
            value: Complex64::new(1.0, 0.0),
            err_est: 0.0,
        });
    }
    let (lo, hi) = w_v.support();
    let rate = k * log_ratio / (2.0 * std::f64::consts::PI); // turns per unit v
    let spec = OscIntegral::with_weight(w_v, Arc::new(move |v: f64| rate * v), rate.abs() * (hi - lo));
    let q = osc_integrate(&spec, 1e-12)?;
    let norm = w_v.integral();
    Ok(DeltaEval {
        value: q.value / norm,
        err_est: q.err_est / norm.abs(),
    })
}

/// Both sides of the GL(2) Voronoi summation formula for a holomorphic form:
/// lhs = sum lambda(n) e(an/c) h(n),
/// rhs = (1/c) sum lambda(n) e(-abar n/c) H(n/c^2),
/// H(y) = 2 pi i^k int h(x) J_{k-1}(4 pi sqrt(xy)) dx.
///
/// The dual sum is truncated once a long run of terms is negligible against
/// the requested tolerance (the Bessel transform decays superpolynomially
/// here because h carries no oscillation).
pub fn voronoi_pair(
    form: &FormCoefficients,
    a: i64,
    c: u64,
    h: &InertWeight,
    tol: f64,
) -> Result<(Complex64, Complex64)> {
    if form.form() != Form::HolomorphicDelta {
        return Err(Error::UnsupportedForm(
            "Voronoi identity in this explicit shape needs the holomorphic form".into(),
        ));
    }
    if c == 0 || gcd(a.unsigned_abs(), c) != 1 {
        return Err(Error::NotCoprime { a, c: c as i64 });
    }
    let k_f = form.weight();
    let (lo, hi) = h.support();
    let n_lo = lo.ceil().max(1.0) as usize;
    let n_hi = hi.floor() as usize;

    // Direct side.
    let mut lhs = KahanC::new();
    let a_mod = a.rem_euclid(c as i64) as u64;
    for n in n_lo..=n_hi {
        let hv = h.eval(n as f64);
        if hv == 0.0 {
            continue;
        }
        let phase = (a_mod * (n as u64 % c) % c) as f64 / c as f64;
        lhs.add(form.lambda(n)? * hv * crate::e(phase));
    }
    let lhs = lhs.value();

    // Dual side: abar mod c (c = 1 means the character is trivial).
    let abar = if c == 1 {
        0
    } else {
        mod_inverse(a_mod % c, c).ok_or(Error::NotCoprime { a, c: c as i64 })?
    };
    let mut rhs = KahanC::new();
    let scale = lhs.norm().max(h.integral().abs() / (c as f64));
    let term_floor = tol * scale / 100.0;
    let mut small_run = 0usize;
    let mut n = 1usize;
    let mut tail_est = 0.0f64;
    loop {
        let hf = bessel_transform(form, h, n as f64 / (c as f64 * c as f64), k_f, tol)?;
        let lam = form.lambda(n)?;
        let phase = -(((abar % c) * (n as u64 % c) % c) as f64) / c as f64;
        let term = lam * hf * crate::e(phase) / c as f64;
        rhs.add(term);
        if term.norm() < term_floor {
            small_run += 1;
            tail_est = tail_est.max(term.norm());
        } else {
            small_run = 0;
        }
        if small_run >= 10 && n >= 32 {
            break;
        }
        n += 1;
        if n > form.len() {
            return Err(Error::TableTooShort {
                needed: n,
                have: form.len(),
            });
        }
    }
    Ok((lhs, rhs.value()))
}

/// H(y) = 2 pi i^{k} int h(x) J_{k-1}(4 pi sqrt(x y)) dx by quadrature.
pub fn bessel_transform(
    form: &FormCoefficients,
    h: &InertWeight,
    y: f64,
    k_f: u32,
    tol: f64,
) -> Result<Complex64> {
    let _ = form;
    let (lo, hi) = h.support();
    let nu = k_f - 1;
    let hw = h.clone();
    let amp = Arc::new(move |x: f64| {
        let arg = 4.0 * std::f64::consts::PI * (x * y).sqrt();
        Complex64::new(hw.eval(x) * crate::bessel::bessel_j(nu, arg), 0.0)
    });
    // Oscillation in turns: 2 sqrt(xy) across the support.
    let freq = 2.0 * y.sqrt() * (hi.sqrt() - lo.sqrt());
    let spec = OscIntegral::new(amp, Arc::new(|_| 0.0), (lo, hi), freq);
    let q = osc_integrate(&spec, tol * 1e-3)?;
    let i_pow = Complex64::new(0.0, 1.0).powu(k_f % 4);
    Ok(2.0 * std::f64::consts::PI * i_pow * q.value)
}

/// Both sides of the GL(1) Poisson summation at a fixed frequency shift v:
/// lhs = sum_r e(-ar/p) r^{-i(t+v)} W(r/N),
/// rhs = N sum_{r = -a (p)} J_p(v, r),
/// J_p(v, r) = N^{-i(t+v)} int W(y) y^{-i(t+v)} e(N r y / p) dy.
pub fn poisson_pair(
    params: &AnalyticParams,
    a: u64,
    v: f64,
    w: &InertWeight,
    tol: f64,
) -> Result<(Complex64, Complex64)> {
    let p = params.p;
    if a == 0 || a >= p {
        return Err(Error::InvalidInput("poisson_pair needs 0 < a < p".into()));
    }
    let n_size = params.n_size;
    let t = params.t;
    let (lo, hi) = w.support();

    let mut lhs = KahanC::new();
    let r_lo = (lo * n_size).ceil().max(1.0) as u64;
    let r_hi = (hi * n_size).floor() as u64;
    let two_pi = 2.0 * std::f64::consts::PI;
    for r in r_lo..=r_hi {
        let wv = w.eval(r as f64 / n_size);
        if wv == 0.0 {
            continue;
        }
        let char_phase = -(((a * (r % p)) % p) as f64) / p as f64;
        let arch_phase = -(t + v) * (r as f64).ln() / two_pi;
        lhs.add(wv * crate::e(char_phase + arch_phase));
    }
    let lhs = lhs.value();

    // Dual side: r ranges over the full congruence class (both signs);
    // the stationary window sits at r ~ p(t+v)/(2 pi N y).
    let r0 = (p - a % p) % p; // least non-negative residue of -a
    let mut rhs = KahanC::new();
    let scale = lhs.norm().max(1.0);
    let term_floor = tol * scale / 100.0;
    let window_hi = (p as f64 * (t + v.abs()) / (two_pi * n_size * lo)).ceil();

    let jp = |r: i64| -> Result<Complex64> {
        j_p_integral(params, v, r as f64, w, tol * 1e-2)
    };

    // Positive direction.
    let mut small_run = 0usize;
    let mut r = if r0 == 0 { p as i64 } else { r0 as i64 };
    loop {
        let term = jp(r)?;
        rhs.add(term);
        if term.norm() < term_floor {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 6 && r as f64 > window_hi * 2.0 {
            break;
        }
        r += p as i64;
    }
    // Negative direction: no stationary point, terms die fast.
    let mut small_run = 0usize;
    let mut r = r0 as i64 - p as i64;
    loop {
        let term = jp(r)?;
        rhs.add(term);
        if term.norm() < term_floor {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 6 {
            break;
        }
        r -= p as i64;
    }
    Ok((lhs, n_size * rhs.value()))
}

/// J_p(v, r) for one dual frequency r (real-valued r allowed in probes).
pub fn j_p_integral(
    params: &AnalyticParams,
    v: f64,
    r: f64,
    w: &InertWeight,
    tol: f64,
) -> Result<Complex64> {
    let t = params.t;
    let n_size = params.n_size;
    let p = params.p as f64;
    let (lo, hi) = w.support();
    let two_pi = 2.0 * std::f64::consts::PI;
    let phase = Arc::new(move |y: f64| -(t + v) * y.ln() / two_pi + n_size * r * y / p);
    let freq = ((t + v.abs()) / (two_pi * lo) + (n_size * r.abs() / p)) * (hi - lo);
    let spec = OscIntegral::with_weight(w, phase, freq);
    let q = osc_integrate(&spec, tol)?;
    // Prefactor N^{-i(t+v)}.
    let pref = crate::e(-(t + v) * n_size.ln() / two_pi);
    Ok(pref * q.value)
}

/// Gap between the exact combined phase at its stationary point,
/// phi(v0) = -K v0 - t ln(t + K v0), and the explicit three-term expansion
/// -t ln t - sqrt(8 pi t n / (p r)) - pi n/(p r) - (1/(3 sqrt 2)) sqrt(pi^3 n^3/(p^3 r^3 t)).
/// Returns (gap, gap / (K^4/t^3)).
pub fn phase_expansion_check(params: &AnalyticParams, n: f64, r: f64) -> (f64, f64) {
    let t = params.t;
    let k = params.k_size;
    let p = params.p as f64;
    let pi = std::f64::consts::PI;

    // Stationary point of Kv ln A + 2Kv ln v - (t+Kv) ln(t+Kv), where
    // A = p K^2 r / (2 e pi n): v0 = (pi n/(p K r)) (sqrt(1 + 2prt/(pi n)) + 1).
    let v0 = pi * n / (p * k * r) * ((1.0 + 2.0 * p * r * t / (pi * n)).sqrt() + 1.0);
    let exact = -k * v0 - t * (t + k * v0).ln();

    let expansion = -t * t.ln()
        - (8.0 * pi * t * n / (p * r)).sqrt()
        - pi * n / (p * r)
        - (pi.powi(3) * n.powi(3) / (p.powi(3) * r.powi(3) * t)).sqrt() / (3.0 * 2f64.sqrt());

    let gap = (exact - expansion).abs();
    let scale = k.powi(4) / t.powi(3);
    (gap, gap / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;
    use crate::forms::FormCoefficients;
    use crate::weights::{bump, plateau};

    #[test]
    fn params_and_derived_quantities() {
        let p = AnalyticParams::new(400.0, 220.0, 66.0, 10.0).unwrap();
        assert!(p.modulus_admissible());
        assert!(p.p as f64 > 10.0 * 220.0 / 66.0);
        let q = p.q_dirichlet();
        assert!(q < p.p as f64); // K < N forces Q < p
        assert!((p.n0() - (p.p as f64).powi(2) * 66.0 * 66.0 / 220.0).abs() < 1e-9);
    }

    #[test]
    fn s_direct_positive_real_at_t_zero() {
        let eis = FormCoefficients::eisenstein(2100).unwrap();
        let w = bump(1.0, 2.0).unwrap();
        let params = AnalyticParams::with_p(1.0, 1000.0, 100.0, 101).unwrap();
        let mut params = params;
        params.t = 1e-300; // effectively zero oscillation
        let s = s_direct(&eis, &params, &w).unwrap();
        // Plain-loop oracle.
        let mut oracle = 0.0;
        for n in 1..=2100usize {
            oracle += eis.lambda(n).unwrap() * w.eval(n as f64 / 1000.0);
        }
        assert!(s.im.abs() < 1e-9);
        assert!((s.re - oracle).abs() < 1e-9 * oracle.abs());
        assert!(s.re > 0.0);
    }

    #[test]
    fn s_direct_triangle_inequality() {
        let f = FormCoefficients::delta(2100).unwrap();
        let w = bump(1.0, 2.0).unwrap();
        let params = AnalyticParams::with_p(137.5, 1000.0, 100.0, 101).unwrap();
        let s = s_direct(&f, &params, &w).unwrap();
        let mut bound = 0.0;
        for n in 1000..=2000usize {
            bound += f.lambda(n).unwrap().abs() * w.eval(n as f64 / 1000.0);
        }
        assert!(s.norm() <= bound);
    }

    #[test]
    fn s_direct_matches_dd_oracle() {
        // N = 10^3, t = 10^3 against the double-double phase oracle.
        let f = FormCoefficients::delta(2100).unwrap();
        let w = bump(1.0, 2.0).unwrap();
        let (t, n_size) = (1000.0, 1000.0);
        let params = AnalyticParams::with_p(t, n_size, 100.0, 101).unwrap();
        let fast = s_direct(&f, &params, &w).unwrap();
        let mut re = crate::kahan::Kahan::new();
        let mut im = crate::kahan::Kahan::new();
        for n in 1000..=2000u64 {
            let wv = w.eval(n as f64 / n_size);
            if wv == 0.0 {
                continue;
            }
            let lam = f.lambda(n as usize).unwrap();
            let rad = Dd::ln_u64(n).mul(Dd::from_f64(-t)).rem_two_pi();
            let (s, c) = rad.sin_cos_reduced();
            re.add(lam * wv * c);
            im.add(lam * wv * s);
        }
        let oracle = Complex64::new(re.value(), im.value());
        assert!(
            (fast - oracle).norm() <= 1e-9 * oracle.norm(),
            "{fast} vs {oracle}"
        );
    }

    #[test]
    fn delta_diagonal_is_one() {
        let params = AnalyticParams::new(400.0, 200.0, 50.0, 10.0).unwrap();
        let w_v = bump(1.0, 2.0).unwrap().normalized();
        let d = trivial_delta(500, 500, &params, &w_v).unwrap();
        assert!((d.value - Complex64::new(1.0, 0.0)).norm() <= d.err_est + 1e-12);
    }

    #[test]
    fn delta_off_diagonal_vanishes_without_congruence() {
        let params = AnalyticParams::new(400.0, 200.0, 50.0, 10.0).unwrap();
        let w_v = bump(1.0, 2.0).unwrap().normalized();
        // p = 41; choose n - r not divisible by p and > N/K.
        assert_eq!(params.p, 41);
        let d = trivial_delta(500, 493, &params, &w_v).unwrap();
        assert!(d.value.norm() < 1e-6);
    }

    #[test]
    fn delta_failure_mode_with_small_modulus() {
        // p | n - r with |n - r| <= N/K and a SMALL p: the delta symbol
        // must NOT be small; this is the regression that motivates the
        // modulus lower bound.
        let params = AnalyticParams::with_p(400.0, 1000.0, 100.0, 7).unwrap();
        assert!(!params.modulus_admissible());
        let w_v = bump(1.0, 2.0).unwrap().normalized();
        let d = trivial_delta(1000, 993, &params, &w_v).unwrap();
        assert!(
            d.value.norm() > 0.5,
            "leakage term should be O(1), got {}",
            d.value.norm()
        );
        // The restricted variant differs by exactly that profile over p.
        let dr = trivial_delta_restricted(1000, 993, &params, &w_v).unwrap();
        assert!((dr.value - d.value * (1.0 - 1.0 / 7.0)).norm() < 1e-9);
    }

    #[test]
    fn poisson_identity_small_case() {
        // t ~ 0, v = 0, p = 7, N = 50: both sides directly.
        let mut params = AnalyticParams::with_p(1e-9, 50.0, 10.0, 7).unwrap();
        params.t = 1e-9;
        let w = bump(1.0, 2.0).unwrap();
        let (lhs, rhs) = poisson_pair(&params, 3, 0.0, &w, 1e-10).unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-8 * lhs.norm().max(1.0),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn poisson_conjugation_symmetry_at_t_zero() {
        let mut params = AnalyticParams::with_p(1e-12, 60.0, 10.0, 11).unwrap();
        params.t = 0.0;
        let w = bump(1.0, 2.0).unwrap();
        let (l1, _) = poisson_pair(&params, 4, 0.0, &w, 1e-9).unwrap();
        let (l2, _) = poisson_pair(&params, 7, 0.0, &w, 1e-9).unwrap();
        // a -> p - a conjugates the character sum at t = 0.
        assert!((l1 - l2.conj()).norm() < 1e-9);
    }

    #[test]
    fn phase_expansion_interior_point() {
        let params = AnalyticParams::new(1e4, 1e4f64.powf(0.9), 1e4f64.powf(0.7), 10.0).unwrap();
        let n0 = params.n0();
        let r_c = params.p as f64 * params.t / params.n_size;
        let (gap, scaled) = phase_expansion_check(&params, n0, r_c);
        assert!(gap.is_finite() && gap > 0.0);
        assert!(scaled < 50.0, "scaled gap {scaled}");
    }

    #[test]
    fn phase_expansion_scaling_in_t() {
        // Doubling t at fixed shape shrinks the gap (next-order term decays
        // at least as fast as the asserted K^4/t^3 envelope).
        let mut prev = f64::INFINITY;
        for &t in &[1e4, 2e4, 4e4] {
            let params = AnalyticParams::new(t, t.powf(0.9), t.powf(0.7), 10.0).unwrap();
            let (gap, scaled) = phase_expansion_check(&params, params.n0(), {
                params.p as f64 * params.t / params.n_size
            });
            assert!(gap < prev, "gap not decreasing at t = {t}");
            assert!(scaled < 50.0);
            prev = gap;
        }
    }

    #[test]
    fn voronoi_identity_c1() {
        let f = FormCoefficients::delta(4000).unwrap();
        let h = bump(200.0, 400.0).unwrap();
        let (lhs, rhs) = voronoi_pair(&f, 1, 1, &h, 1e-8).unwrap();
        assert!(
            (lhs - rhs).norm() <= 1e-6 * lhs.norm().max(1e-6),
            "c=1: {lhs} vs {rhs}"
        );
    }

    #[test]
    fn voronoi_identity_c5_and_linearity() {
        let f = FormCoefficients::delta(4000).unwrap();
        let h = bump(300.0, 600.0).unwrap();
        let (lhs, rhs) = voronoi_pair(&f, 2, 5, &h, 1e-8).unwrap();
        assert!(
            (lhs - rhs).norm() <= 1e-6 * lhs.norm().max(1e-6),
            "c=5: {lhs} vs {rhs}"
        );
        let h2 = h.scaled(2.0);
        let (l2, r2) = voronoi_pair(&f, 2, 5, &h2, 1e-8).unwrap();
        assert!((l2 - 2.0 * lhs).norm() < 1e-9 * lhs.norm().max(1.0));
        assert!((r2 - 2.0 * rhs).norm() < 2e-6 * rhs.norm().max(1e-6));
    }

    #[test]
    fn voronoi_rejects_bad_input() {
        let f = FormCoefficients::delta(100).unwrap();
        let e = FormCoefficients::eisenstein(100).unwrap();
        let h = bump(10.0, 20.0).unwrap();
        assert!(matches!(
            voronoi_pair(&f, 2, 4, &h, 1e-6),
            Err(Error::NotCoprime { .. })
        ));
        assert!(matches!(
            voronoi_pair(&e, 1, 3, &h, 1e-6),
            Err(Error::UnsupportedForm(_))
        ));
    }

    #[test]
    fn plateau_is_exact_cover_for_bump() {
        // The chain needs V = 1 on supp W; the canonical pair satisfies it.
        let w = bump(1.0, 2.0).unwrap();
        let v = plateau(0.75, 2.25, 0.25).unwrap();
        for i in 0..=100 {
            let x = 1.0 + i as f64 / 100.0;
            let _ = w;
            assert!((v.eval(x) - 1.0).abs() < 1e-14);
        }
    }
}
