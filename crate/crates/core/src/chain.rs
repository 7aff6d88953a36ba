//! The fully explicit transformation chain for S(N): delta symbol, then
//! GL(2) Voronoi on the n-sum and GL(1) Poisson on the r-sum, compared
//! against the direct sum at the last fully explicit stage
//!
//!   S(N) = (N^2/p^2) sum_n sum_{(r,p)=1} lambda(n) e(n rbar/p) I_p(n, r),
//!   I_p(n, r) = int W(v) Ip(Kv, n) Jp(Kv, r) dv,
//!   Ip(v, n) = 2 pi i^k N^{iv} int V(x) x^{iv} J_{k-1}(4 pi sqrt(N n x)/p) dx,
//!   Jp(v, r) = N^{-i(t+v)} int W(y) y^{-i(t+v)} e(N r y/p) dy.
//!
//! All integrals are quadratures on shared uniform grids. The x- and
//! y-integrals enter every (n, r) cell only through separable geometric
//! factors x^{iKv}, y^{-iKv}, so the whole n x r cell matrix reduces to a
//! per-r synthesis table T_r[m] plus a per-n real Bessel vector; the cell
//! values are then plain dot products. Grid sizes are set from analytic
//! frequency bounds with an oversampling factor, and a half-resolution rerun
//! plus out-of-window probes certify convergence and truncation.

use crate::arith::mod_inverse;
use crate::error::{Error, Result};
use crate::forms::{Form, FormCoefficients};
use crate::kahan::{pairwise_sum, KahanC};
use crate::quad::{osc_integrate, OscIntegral};
use crate::summation::AnalyticParams;
use crate::weights::{plateau, InertWeight};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ChainStage {
    /// Verify the delta replacement alone (before Voronoi/Poisson).
    DeltaOnly,
    /// Verify the full identity after Voronoi and Poisson.
    PostVoronoiPoisson,
}

#[derive(Clone, Copy, Debug)]
pub struct ChainConfig {
    pub stage: ChainStage,
    /// Multiplier on the auto-sized grids (0.5 = half resolution).
    pub resolution: f64,
    /// Window dilation on each side of the computed stationary ranges.
    pub window_dilation: f64,
    pub tau_cap: usize,
    /// Rerun at half resolution and report the relative difference.
    pub self_check: bool,
    /// Probe the transform outside the windows and report the tail estimate.
    pub tail_check: bool,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            stage: ChainStage::PostVoronoiPoisson,
            resolution: 1.0,
            window_dilation: 2.0,
            tau_cap: crate::forms::DEFAULT_TAU_CAP,
            self_check: true,
            tail_check: true,
        }
    }
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ChainReport {
    pub t: f64,
    pub n_size: f64,
    pub k_size: f64,
    pub p: u64,
    pub s_direct_re: f64,
    pub s_direct_im: f64,
    pub s_trans_re: f64,
    pub s_trans_im: f64,
    pub rel_err: f64,
    pub stage: ChainStage,
    /// Total quadrature-node budget spent.
    pub panels: u64,
    /// |s(R) - s(R/2)| / |s(R)| from the half-resolution rerun.
    pub self_check_rel: Option<f64>,
    /// Out-of-window probe magnitude relative to |s_direct|.
    pub tail_rel: Option<f64>,
}

fn pow2_at_least(x: f64, lo: usize, hi: usize) -> usize {
    let mut n = lo.max(2);
    while (n as f64) < x && n < hi {
        n *= 2;
    }
    n
}

struct Grids {
    /// Midpoint x-grid over supp V with weights folded in later.
    x: Vec<f64>,
    dx: f64,
    y: Vec<f64>,
    dy: f64,
    v: Vec<f64>,
    dv: f64,
}

struct Windows {
    n_lo: usize,
    n_hi: usize,
    r: Vec<u64>,
    r_lo: u64,
    r_hi: u64,
}

fn midgrid(a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
    let d = (b - a) / n as f64;
    ((0..n).map(|i| a + (i as f64 + 0.5) * d).collect(), d)
}

fn build_windows(params: &AnalyticParams, w: &InertWeight, v_supp: (f64, f64), dil: f64) -> Windows {
    let (wa, wb) = w.support();
    let (va, vb) = v_supp;
    let n0 = params.n0();
    let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    // Stationary range of the x-integral: n = N0 v^2 / (4 pi^2 x).
    let n_lo = (n0 * wa * wa / (four_pi2 * vb) / dil).floor().max(1.0) as usize;
    let n_hi = (n0 * wb * wb / (four_pi2 * va) * dil).ceil() as usize;
    // Stationary range of the y-integral: r = p (t + K v) / (2 pi N y).
    let p = params.p as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let r_lo_f = (p * (params.t + params.k_size * wa) / (two_pi * params.n_size * wb) / dil).floor();
    let r_hi_f = (p * (params.t + params.k_size * wb) / (two_pi * params.n_size * wa) * dil).ceil();
    let r_lo = r_lo_f.max(1.0) as u64;
    let r_hi = r_hi_f as u64;
    let r = (r_lo..=r_hi)
        .filter(|r| r % params.p != 0)
        .collect::<Vec<_>>();
    Windows {
        n_lo,
        n_hi,
        r,
        r_lo,
        r_hi,
    }
}

fn build_grids(
    params: &AnalyticParams,
    w: &InertWeight,
    v_weight: &InertWeight,
    x_supp: (f64, f64),
    win: &Windows,
    resolution: f64,
) -> Grids {
    let (wa, wb) = w.support();
    let (va, vb) = x_supp;
    let (va_v, vb_v) = v_weight.support();
    let p = params.p as f64;
    let k = params.k_size;
    let t = params.t;
    let two_pi = 2.0 * std::f64::consts::PI;

    // x-integrand frequency: Bessel chirp + x^{iKv}.
    let omega_max = 4.0 * std::f64::consts::PI * (params.n_size * win.n_hi as f64).sqrt() / p;
    let f_x = omega_max / (4.0 * std::f64::consts::PI * va.sqrt()) + k * vb_v / (two_pi * va);
    let m_x = pow2_at_least(8.0 * f_x * (vb - va) * resolution, 512, 1 << 22);

    // y-integrand frequency: log chirp + linear e(N r y / p).
    let f_y = (t + k * vb_v) / (two_pi * wa) + params.n_size * win.r_hi as f64 / p;
    let m_y = pow2_at_least(8.0 * f_y * (wb - wa) * resolution, 512, 1 << 22);

    // v-product bandwidth: (K/2pi) |ln(e A v^2/(t+Kv))|, A = p K^2 r/(2 e pi n).
    let mut f_v: f64 = 0.0;
    for &n in &[win.n_lo as f64, win.n_hi as f64] {
        for &r in &[win.r_lo as f64, win.r_hi as f64] {
            for &v in &[va_v, vb_v] {
                let a = p * k * k * r / (2.0 * std::f64::consts::E * std::f64::consts::PI * n);
                let arg = std::f64::consts::E * a * v * v / (t + k * v);
                f_v = f_v.max(k / two_pi * arg.ln().abs());
            }
        }
    }
    let j_v = pow2_at_least(12.0 * f_v * (vb_v - va_v) * resolution, 256, 1 << 22);

    let (x, dx) = midgrid(va, vb, m_x);
    let (y, dy) = midgrid(wa, wb, m_y);
    let (v, dv) = midgrid(va_v, vb_v, j_v);
    Grids { x, dx, y, dy, v, dv }
}

/// J-row: Jp(K v_j, r) on the shared v-grid via geometric synthesis.
fn j_row(params: &AnalyticParams, w: &InertWeight, g: &Grids, r: f64) -> Vec<Complex64> {
    let t = params.t;
    let k = params.k_size;
    let n_size = params.n_size;
    let p = params.p as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let v0 = g.v[0];
    let dv = g.v[1] - g.v[0];
    let mut row = vec![Complex64::new(0.0, 0.0); g.v.len()];
    for &ym in &g.y {
        let wv = w.eval(ym);
        if wv == 0.0 {
            continue;
        }
        let ly = ym.ln();
        let base = wv * g.dy * crate::e(-t * ly / two_pi + n_size * r * ym / p);
        // factor y^{-iKv_j} = e^{-i K v_j ln y}
        let mut s = crate::e(-k * v0 * ly / two_pi);
        let rho = crate::e(-k * dv * ly / two_pi);
        for rj in row.iter_mut() {
            *rj += base * s;
            s *= rho;
        }
    }
    // Prefactor N^{-i(t + K v_j)}.
    let ln_n = n_size.ln();
    for (j, rj) in row.iter_mut().enumerate() {
        let vj = v0 + j as f64 * dv;
        *rj *= crate::e(-(t + k * vj) * ln_n / two_pi);
    }
    row
}

/// Synthesis table T_r[m] = sum_j dv W(v_j) [2 pi i^k N^{iKv_j}] J_row[j]
/// e^{i K v_j ln x_m}; the cell transform is then sum_m c_m(n) T_r[m].
fn t_table(
    params: &AnalyticParams,
    v_weight: &InertWeight,
    g: &Grids,
    j_row: &[Complex64],
    k_f: u32,
) -> Vec<Complex64> {
    let k = params.k_size;
    let n_size = params.n_size;
    let two_pi = 2.0 * std::f64::consts::PI;
    let v0 = g.v[0];
    let dv_step = g.v[1] - g.v[0];
    let i_pow = Complex64::new(0.0, 1.0).powu(k_f % 4);
    let pref = 2.0 * std::f64::consts::PI * i_pow;

    // base[j] = dv W(v_j) N^{iKv_j} J_row[j] * 2 pi i^k
    let base: Vec<Complex64> = g
        .v
        .iter()
        .zip(j_row.iter())
        .map(|(&vj, &jr)| pref * g.dv * v_weight.eval(vj) * crate::e(k * vj * n_size.ln() / two_pi) * jr)
        .collect();

    let mut table = vec![Complex64::new(0.0, 0.0); g.x.len()];
    table.par_iter_mut().zip(g.x.par_iter()).for_each(|(tm, &xm)| {
        let lx = xm.ln();
        let mut s = crate::e(k * v0 * lx / two_pi);
        let rho = crate::e(k * dv_step * lx / two_pi);
        let mut acc = Complex64::new(0.0, 0.0);
        for &bj in &base {
            acc += bj * s;
            s *= rho;
        }
        *tm = acc;
    });
    table
}

/// One run of the transformed side at the given grids/windows.
#[allow(clippy::too_many_arguments)]
fn transformed_sum(
    form: &FormCoefficients,
    params: &AnalyticParams,
    v_plateau: &InertWeight,
    g: &Grids,
    win: &Windows,
    t_tables: &[Vec<Complex64>],
    probe_n: Option<&[usize]>,
) -> (Complex64, Vec<f64>, u64) {
    let p = params.p;
    let n_size = params.n_size;
    let nu = form.weight() - 1;
    let sqrt_x: Vec<f64> = g.x.iter().map(|x| x.sqrt()).collect();
    let vx: Vec<f64> = g.x.iter().map(|x| v_plateau.eval(*x) * g.dx).collect();
    let rbars: Vec<u64> = win
        .r
        .iter()
        .map(|&r| mod_inverse(r % p, p).expect("(r,p)=1"))
        .collect();

    let cell = |n: usize| -> Complex64 {
        let omega = 4.0 * std::f64::consts::PI * (n_size * n as f64).sqrt() / p as f64;
        // c_m = V(x_m) J_nu(omega sqrt(x_m)) dx
        let c: Vec<f64> = sqrt_x
            .iter()
            .zip(vx.iter())
            .map(|(&sx, &w)| {
                if w == 0.0 {
                    0.0
                } else {
                    w * crate::bessel::bessel_j(nu, omega * sx)
                }
            })
            .collect();
        let lam = form.lambda(n).unwrap_or(0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (ri, tr) in t_tables.iter().enumerate() {
            let mut dot = Complex64::new(0.0, 0.0);
            for (cm, tm) in c.iter().zip(tr.iter()) {
                if *cm != 0.0 {
                    dot += *cm * *tm;
                }
            }
            let phase = ((n as u64 % p) * rbars[ri] % p) as f64 / p as f64;
            acc += crate::e(phase) * dot;
        }
        lam * acc
    };

    if let Some(probes) = probe_n {
        let vals: Vec<f64> = probes.iter().map(|&n| cell(n).norm()).collect();
        return (Complex64::new(0.0, 0.0), vals, 0);
    }

    let per_n: Vec<Complex64> = (win.n_lo..=win.n_hi)
        .into_par_iter()
        .map(cell)
        .collect();
    let total = pairwise_sum(&per_n);
    let nodes =
        (win.n_hi - win.n_lo + 1) as u64 * g.x.len() as u64 + (win.r.len() * g.v.len()) as u64;
    (total, Vec::new(), nodes)
}

/// Delta-only verification: replace delta(n - r) by the restricted-sum
/// representation and evaluate both bracketed sums directly.
fn delta_only_sum(
    form: &FormCoefficients,
    params: &AnalyticParams,
    w: &InertWeight,
    v_plateau: &InertWeight,
    w_v: &InertWeight,
    resolution: f64,
) -> Result<(Complex64, u64)> {
    let p = params.p;
    let pf = p as f64;
    let t = params.t;
    let k = params.k_size;
    let n_size = params.n_size;
    let two_pi = 2.0 * std::f64::consts::PI;
    let (va, vb) = v_plateau.support();
    let (wa, wb) = w.support();
    let (ua, ub) = w_v.support();

    // Product bandwidth in v: (K/2pi) max |ln(n/r)| over the supports.
    let f_v = k / two_pi * (vb * n_size / (wa * n_size)).ln().abs();
    let j_v = pow2_at_least(10.0 * f_v * (ub - ua) * resolution, 256, 1 << 20);
    let (vg, dv) = midgrid(ua, ub, j_v);

    let n_lo = (va * n_size).ceil().max(1.0) as usize;
    let n_hi = (vb * n_size).floor() as usize;
    let r_lo = (wa * n_size).ceil().max(1.0) as u64;
    let r_hi = (wb * n_size).floor() as u64;
    if n_hi > form.len() {
        return Err(Error::TableTooShort {
            needed: n_hi,
            have: form.len(),
        });
    }

    let per_v: Vec<Complex64> = vg
        .par_iter()
        .map(|&vj| {
            let kv = k * vj;
            // Residue-class sums over n and r.
            let mut rc_n = vec![Complex64::new(0.0, 0.0); p as usize];
            for n in n_lo..=n_hi {
                let weight = v_plateau.eval(n as f64 / n_size);
                if weight == 0.0 {
                    continue;
                }
                let lam = form.lambda(n).unwrap_or(0.0);
                rc_n[n % p as usize] += lam * weight * crate::e(kv * (n as f64).ln() / two_pi);
            }
            let mut rc_r = vec![Complex64::new(0.0, 0.0); p as usize];
            for r in r_lo..=r_hi {
                let weight = w.eval(r as f64 / n_size);
                if weight == 0.0 {
                    continue;
                }
                rc_r[(r % p) as usize] +=
                    weight * crate::e(-(t + kv) * (r as f64).ln() / two_pi);
            }
            // sum_{a=1}^{p-1} S_n(a) S_r(a) = p sum_c Rn_c Rr_c - Sn(0) Sr(0).
            let mut diag = Complex64::new(0.0, 0.0);
            let mut tot_n = Complex64::new(0.0, 0.0);
            let mut tot_r = Complex64::new(0.0, 0.0);
            for c in 0..p as usize {
                diag += rc_n[c] * rc_r[c];
                tot_n += rc_n[c];
                tot_r += rc_r[c];
            }
            let wgt = w_v.eval(vj) * dv;
            wgt * (diag - tot_n * tot_r / pf)
        })
        .collect();
    let s = pairwise_sum(&per_v);
    Ok((s, j_v as u64 * (n_hi - n_lo + 1) as u64))
}

/// Nested-quadrature reference for one transform cell (slow; spot checks).
pub fn transform_integral_direct(
    form: &FormCoefficients,
    params: &AnalyticParams,
    w: &InertWeight,
    v_plateau: &InertWeight,
    w_v: &InertWeight,
    n: usize,
    r: u64,
    tol: f64,
) -> Result<Complex64> {
    let k_f = form.weight();
    let nu = k_f - 1;
    let t = params.t;
    let k = params.k_size;
    let n_size = params.n_size;
    let p = params.p as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let omega = 4.0 * std::f64::consts::PI * (n_size * n as f64).sqrt() / p;
    let (va, vb) = v_plateau.support();

    let vp = v_plateau.clone();
    let i_p = move |v: f64| -> Result<Complex64> {
        let vpc = vp.clone();
        let amp = Arc::new(move |x: f64| {
            Complex64::new(vpc.eval(x) * crate::bessel::bessel_j(nu, omega * x.sqrt()), 0.0)
        });
        let phase = Arc::new(move |x: f64| v * x.ln() / two_pi);
        let freq = (v.abs() / (two_pi * va) + omega / (4.0 * std::f64::consts::PI * va.sqrt()))
            * (vb - va);
        let spec = OscIntegral::new(amp, phase, (va, vb), freq);
        let q = osc_integrate(&spec, tol * 1e-2)?;
        let i_pow = Complex64::new(0.0, 1.0).powu(k_f % 4);
        Ok(2.0 * std::f64::consts::PI * i_pow * crate::e(v * n_size.ln() / two_pi) * q.value)
    };

    let j_p = |v: f64| crate::summation::j_p_integral(params, v, r as f64, w, tol * 1e-2);

    // v-integral of W(v) Ip(Kv) Jp(Kv).
    let a_r = p * k * k * r as f64 / (2.0 * std::f64::consts::E * std::f64::consts::PI * n as f64);
    let (ua, ub) = w_v.support();
    let mut f_v: f64 = 0.0;
    for &v in &[ua, ub] {
        let arg = std::f64::consts::E * a_r * v * v / (t + k * v);
        f_v = f_v.max(k / two_pi * arg.ln().abs());
    }
    let wv = w_v.clone();
    let vals: Result<Vec<Complex64>> = {
        // Fixed composite quadrature: panel count from the bandwidth.
        let panels = (4.0 * f_v * (ub - ua)).ceil().max(32.0) as usize;
        let (nodes, wts) = crate::quad::gauss_legendre_10();
        let h = (ub - ua) / panels as f64;
        let mut out = Vec::with_capacity(panels * nodes.len());
        for pi in 0..panels {
            let lo = ua + pi as f64 * h;
            for (tn, wn) in nodes.iter().zip(wts.iter()) {
                let v = lo + h * 0.5 * (tn + 1.0);
                let f = wv.eval(v);
                if f == 0.0 {
                    out.push(Complex64::new(0.0, 0.0));
                    continue;
                }
                let val = i_p(k * v)? * j_p(k * v)? * f * (wn * 0.5 * h);
                out.push(val);
            }
        }
        Ok(out)
    };
    let mut acc = KahanC::new();
    for v in vals? {
        acc.add(v);
    }
    Ok(acc.value())
}

/// Run the chain at one parameter point and compare against the direct sum.
pub fn chain_verify(
    form: &FormCoefficients,
    params: &AnalyticParams,
    w: &InertWeight,
    cfg: &ChainConfig,
) -> Result<ChainReport> {
    if form.form() != Form::HolomorphicDelta {
        return Err(Error::UnsupportedForm(
            "the explicit chain uses the holomorphic Voronoi formula".into(),
        ));
    }
    if !params.modulus_admissible() {
        return Err(Error::Inadmissible(format!(
            "modulus p = {} below margin {} * N/K = {}",
            params.p,
            params.margin,
            params.margin * params.n_size / params.k_size
        )));
    }
    let (wa, wb) = w.support();
    let ramp = 0.25 * (wb - wa);
    let v_plateau = plateau(wa - ramp, wb + ramp, ramp)?;
    let w_v = w.normalized();

    let s_dir = crate::summation::s_direct(form, params, w)?;
    let floor = 1e-6 * params.n_size.sqrt();

    match cfg.stage {
        ChainStage::DeltaOnly => {
            let (s_delta, nodes) =
                delta_only_sum(form, params, w, &v_plateau, &w_v, cfg.resolution)?;
            let rel = (s_dir - s_delta).norm() / s_dir.norm().max(floor);
            Ok(ChainReport {
                t: params.t,
                n_size: params.n_size,
                k_size: params.k_size,
                p: params.p,
                s_direct_re: s_dir.re,
                s_direct_im: s_dir.im,
                s_trans_re: s_delta.re,
                s_trans_im: s_delta.im,
                rel_err: rel,
                stage: ChainStage::DeltaOnly,
                panels: nodes,
                self_check_rel: None,
                tail_rel: None,
            })
        }
        ChainStage::PostVoronoiPoisson => {
            let win = build_windows(params, w, v_plateau.support(), cfg.window_dilation);
            let run = |resolution: f64| -> Result<(Complex64, u64, Grids, Vec<Vec<Complex64>>)> {
                let g = build_grids(params, w, &w_v, v_plateau.support(), &win, resolution);
                let t_tables: Vec<Vec<Complex64>> = win
                    .r
                    .iter()
                    .map(|&r| {
                        let jr = j_row(params, w, &g, r as f64);
                        t_table(params, &w_v, &g, &jr, form.weight())
                    })
                    .collect();
                let (sum, _, nodes) =
                    transformed_sum(form, params, &v_plateau, &g, &win, &t_tables, None);
                Ok((sum, nodes, g, t_tables))
            };

            let (raw, nodes, g, t_tables) = run(cfg.resolution)?;
            let pf = params.p as f64;
            let scale = params.n_size * params.n_size / (pf * pf);
            let s_trans = scale * raw;

            let mut self_check_rel = None;
            if cfg.self_check {
                let (raw_half, _, _, _) = run(cfg.resolution * 0.5)?;
                let half = scale * raw_half;
                self_check_rel = Some((s_trans - half).norm() / s_trans.norm().max(floor));
            }

            let mut tail_rel = None;
            if cfg.tail_check {
                // Probe n outside the window on both sides.
                let probes: Vec<usize> = [win.n_lo / 2, win.n_hi * 2]
                    .into_iter()
                    .filter(|&n| n >= 1 && n <= form.len())
                    .collect();
                let (_, vals, _) =
                    transformed_sum(form, params, &v_plateau, &g, &win, &t_tables, Some(&probes));
                let width = (win.n_hi - win.n_lo + 1) as f64;
                let probe_mass: f64 = vals.iter().map(|v| v * width * scale).sum();
                tail_rel = Some(probe_mass / s_dir.norm().max(floor));
            }

            let rel = (s_dir - s_trans).norm() / s_dir.norm().max(floor);
            Ok(ChainReport {
                t: params.t,
                n_size: params.n_size,
                k_size: params.k_size,
                p: params.p,
                s_direct_re: s_dir.re,
                s_direct_im: s_dir.im,
                s_trans_re: s_trans.re,
                s_trans_im: s_trans.im,
                rel_err: rel,
                stage: ChainStage::PostVoronoiPoisson,
                panels: nodes,
                self_check_rel,
                tail_rel,
            })
        }
    }
}

/// Table size needed for one chain run (coefficients up to the dilated dual
/// window plus the direct range).
pub fn chain_table_len(params: &AnalyticParams, w: &InertWeight, dilation: f64) -> usize {
    let (wa, wb) = w.support();
    let ramp = 0.25 * (wb - wa);
    let vb = wb + ramp;
    let va = wa - ramp;
    let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let n_hi = (params.n0() * wb * wb / (four_pi2 * va) * dilation).ceil() as usize;
    let direct_hi = (vb * params.n_size).ceil() as usize;
    (2 * n_hi).max(direct_hi) + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormCoefficients;
    use crate::weights::bump;

    fn small_setup(t: f64, margin: f64) -> (FormCoefficients, AnalyticParams, InertWeight) {
        let n_size = t.powf(0.9);
        let k_size = t.powf(0.7);
        let params = AnalyticParams::new(t, n_size, k_size, margin).unwrap();
        let w = bump(1.0, 2.0).unwrap();
        let len = chain_table_len(&params, &w, 2.0);
        let form = FormCoefficients::delta(len).unwrap();
        (form, params, w)
    }

    #[test]
    fn delta_only_stage_tracks_direct_sum() {
        let (form, params, w) = small_setup(120.0, 10.0);
        let cfg = ChainConfig {
            stage: ChainStage::DeltaOnly,
            ..Default::default()
        };
        let rep = chain_verify(&form, &params, &w, &cfg).unwrap();
        assert!(
            rep.rel_err < 0.2,
            "delta-only stage rel_err {} too big",
            rep.rel_err
        );
    }

    #[test]
    fn full_chain_small_case() {
        let (form, params, w) = small_setup(120.0, 10.0);
        let cfg = ChainConfig::default();
        let rep = chain_verify(&form, &params, &w, &cfg).unwrap();
        assert!(
            rep.rel_err < 0.2,
            "chain rel_err {} (direct {:+e}{:+e}i vs trans {:+e}{:+e}i)",
            rep.rel_err,
            rep.s_direct_re,
            rep.s_direct_im,
            rep.s_trans_re,
            rep.s_trans_im
        );
        if let Some(sc) = rep.self_check_rel {
            assert!(sc < 1e-3, "grid convergence failed: {sc}");
        }
    }

    #[test]
    fn table_cells_match_direct_quadrature() {
        let (form, params, w) = small_setup(90.0, 10.0);
        let (wa, wb) = w.support();
        let ramp = 0.25 * (wb - wa);
        let v_plateau = plateau(wa - ramp, wb + ramp, ramp).unwrap();
        let w_v = w.normalized();
        let win = build_windows(&params, &w, v_plateau.support(), 2.0);
        let g = build_grids(&params, &w, &w_v, v_plateau.support(), &win, 1.0);
        // Pick a central cell.
        let n = ((win.n_lo + win.n_hi) / 2).max(1);
        let r = win.r[win.r.len() / 2];
        let jr = j_row(&params, &w, &g, r as f64);
        let tt = t_table(&params, &w_v, &g, &jr, form.weight());
        let (cell_val, _, _) = {
            let wins = Windows {
                n_lo: n,
                n_hi: n,
                r: vec![r],
                r_lo: r,
                r_hi: r,
            };
            transformed_sum(&form, &params, &v_plateau, &g, &wins, &[tt], None)
        };
        let lam = form.lambda(n).unwrap();
        let rbar = mod_inverse(r % params.p, params.p).unwrap();
        let char_phase =
            crate::e(((n as u64 % params.p) * rbar % params.p) as f64 / params.p as f64);
        let table_transform = cell_val / (lam * char_phase);
        let direct =
            transform_integral_direct(&form, &params, &w, &v_plateau, &w_v, n, r, 1e-7).unwrap();
        assert!(
            (table_transform - direct).norm() <= 1e-6 + 1e-3 * direct.norm(),
            "cell mismatch: table {table_transform} vs direct {direct}"
        );
    }
}
