//! Adaptive oscillatory quadrature oracle.
//!
//! Every asymptotic claim in the crate is tested against this. The scheme is
//! plain composite Gauss-Legendre with panel widths budgeted from the local
//! phase derivative (sampled) and a global refinement loop that halves every
//! panel until two successive refinements agree.

use crate::error::{Error, Result};
use crate::kahan::KahanC;
use crate::weights::InertWeight;
use num_complex::Complex64;
use std::sync::Arc;

/// Default cap on the total panel count.
pub const DEFAULT_PANEL_CAP: usize = 1_000_000;
/// Gauss-Legendre nodes per panel.
const NODES_PER_PANEL: usize = 20;
/// Maximum phase turns allowed per panel (so >= 10 nodes per oscillation).
const TURNS_PER_PANEL: f64 = 2.0;
/// Points at which the phase derivative is sampled per panel.
const PHASE_SAMPLES: usize = 33;

pub type AmplitudeFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
pub type PhaseFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Amplitude * e(phase) integrand over an interval. The phase is in turns:
/// the integrand is amplitude(x) * exp(2 pi i phase(x)).
#[derive(Clone)]
pub struct OscIntegral {
    pub amplitude: AmplitudeFn,
    pub phase: PhaseFn,
    pub interval: (f64, f64),
    /// A priori bound on sup|phase'| * (b - a) in turns; seeds the paneling.
    pub freq_scale: f64,
}

impl OscIntegral {
    pub fn new(
        amplitude: AmplitudeFn,
        phase: PhaseFn,
        interval: (f64, f64),
        freq_scale: f64,
    ) -> OscIntegral {
        OscIntegral {
            amplitude,
            phase,
            interval,
            freq_scale,
        }
    }

    /// Real inert weight as amplitude.
    pub fn with_weight(weight: &InertWeight, phase: PhaseFn, freq_scale: f64) -> OscIntegral {
        let w = weight.clone();
        let interval = w.support();
        OscIntegral {
            amplitude: Arc::new(move |x| Complex64::new(w.eval(x), 0.0)),
            phase,
            interval,
            freq_scale,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    /// Absolute difference between the final refinement and its predecessor.
    pub err_est: f64,
    pub panels: usize,
}

pub fn gauss_legendre_10() -> (&'static [f64; 10], &'static [f64; 10]) {
    // 10-point nodes/weights on [-1, 1].
    const N: [f64; 10] = [
        -0.9739065285171717,
        -0.8650633666889845,
        -0.6794095682990244,
        -0.4333953941292472,
        -0.14887433898163122,
        0.14887433898163122,
        0.4333953941292472,
        0.6794095682990244,
        0.8650633666889845,
        0.9739065285171717,
    ];
    const W: [f64; 10] = [
        0.06667134430868814,
        0.14945134915058059,
        0.21908636251598204,
        0.26926671930999635,
        0.29552422471475287,
        0.29552422471475287,
        0.26926671930999635,
        0.21908636251598204,
        0.14945134915058059,
        0.06667134430868814,
    ];
    (&N, &W)
}

fn gauss_legendre_20() -> (&'static [f64; 20], &'static [f64; 20]) {
    const N: [f64; 20] = [
        -0.9931285991850949,
        -0.9639719272779138,
        -0.9122344282513259,
        -0.8391169718222188,
        -0.7463319064601508,
        -0.6360536807265150,
        -0.5108670019508271,
        -0.3737060887154195,
        -0.2277858511416451,
        -0.07652652113349734,
        0.07652652113349734,
        0.2277858511416451,
        0.3737060887154195,
        0.5108670019508271,
        0.6360536807265150,
        0.7463319064601508,
        0.8391169718222188,
        0.9122344282513259,
        0.9639719272779138,
        0.9931285991850949,
    ];
    const W: [f64; 20] = [
        0.017614007139152118,
        0.04060142980038694,
        0.06267204833410906,
        0.08327674157670475,
        0.10193011981724044,
        0.11819453196151842,
        0.13168863844917664,
        0.14209610931838205,
        0.14917298647260375,
        0.15275338713072585,
        0.15275338713072585,
        0.14917298647260375,
        0.14209610931838205,
        0.13168863844917664,
        0.11819453196151842,
        0.10193011981724044,
        0.08327674157670475,
        0.06267204833410906,
        0.04060142980038694,
        0.017614007139152118,
    ];
    (&N, &W)
}

fn panel_value(spec: &OscIntegral, lo: f64, hi: f64) -> Complex64 {
    let (nodes, wts) = gauss_legendre_20();
    let h = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = KahanC::new();
    for (t, w) in nodes.iter().zip(wts.iter()) {
        let x = mid + h * t;
        let a = (spec.amplitude)(x);
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        acc.add(a * crate::e((spec.phase)(x)) * (w * h));
    }
    acc.value()
}

/// Max |phase'| over a panel, estimated by finite differences at
/// `PHASE_SAMPLES` points.
fn panel_freq(spec: &OscIntegral, lo: f64, hi: f64) -> f64 {
    let h = (hi - lo) * 1e-6;
    let mut fmax: f64 = 0.0;
    for i in 0..PHASE_SAMPLES {
        let x = lo + (hi - lo) * (i as f64 + 0.5) / PHASE_SAMPLES as f64;
        let d = ((spec.phase)(x + h) - (spec.phase)(x - h)) / (2.0 * h);
        fmax = fmax.max(d.abs());
    }
    fmax
}

fn total(spec: &OscIntegral, edges: &[f64]) -> Complex64 {
    let vals: Vec<Complex64> = edges
        .windows(2)
        .map(|e| panel_value(spec, e[0], e[1]))
        .collect();
    crate::kahan::pairwise_sum(&vals)
}

/// Adaptive oscillatory integration to absolute tolerance `tol`.
///
/// Panels are seeded from `freq_scale`, split wherever the sampled phase
/// derivative exceeds the turns-per-panel budget, then globally halved until
/// two successive refinements agree to `tol`. Exceeding the panel cap is a
/// hard error, never a silent answer.
pub fn osc_integrate(spec: &OscIntegral, tol: f64) -> Result<QuadResult> {
    osc_integrate_capped(spec, tol, DEFAULT_PANEL_CAP)
}

pub fn osc_integrate_capped(spec: &OscIntegral, tol: f64, cap: usize) -> Result<QuadResult> {
    if !(tol > 0.0) || !spec.freq_scale.is_finite() || spec.freq_scale < 0.0 {
        return Err(Error::InvalidInput(
            "osc_integrate needs tol > 0 and finite freq_scale >= 0".into(),
        ));
    }
    let (a, b) = spec.interval;
    if !(b > a) {
        return Err(Error::InvalidInput(format!("empty interval ({a}, {b})")));
    }

    // Seed panel count from the a priori oscillation budget.
    let p0 = ((spec.freq_scale / TURNS_PER_PANEL).ceil() as usize).clamp(4, cap);
    let mut edges: Vec<f64> = (0..=p0)
        .map(|i| a + (b - a) * i as f64 / p0 as f64)
        .collect();

    // Split panels whose sampled local frequency exceeds the budget.
    loop {
        let mut refined = Vec::with_capacity(edges.len());
        let mut split_any = false;
        refined.push(edges[0]);
        for e in edges.windows(2) {
            let width = e[1] - e[0];
            let f = panel_freq(spec, e[0], e[1]);
            if f * width > TURNS_PER_PANEL && refined.len() < cap {
                refined.push(0.5 * (e[0] + e[1]));
                split_any = true;
            }
            refined.push(e[1]);
        }
        edges = refined;
        if !split_any {
            break;
        }
        if edges.len() > cap {
            return Err(Error::QuadBudgetExceeded {
                panels: edges.len() - 1,
                last_diff: f64::INFINITY,
            });
        }
    }

    let mut prev = total(spec, &edges);
    loop {
        // Halve every panel.
        let mut refined = Vec::with_capacity(edges.len() * 2);
        for e in edges.windows(2) {
            refined.push(e[0]);
            refined.push(0.5 * (e[0] + e[1]));
        }
        refined.push(*edges.last().unwrap());
        edges = refined;
        let cur = total(spec, &edges);
        let diff = (cur - prev).norm();
        if diff < tol {
            return Ok(QuadResult {
                value: cur,
                err_est: diff,
                panels: edges.len() - 1,
            });
        }
        if edges.len() - 1 > cap {
            return Err(Error::QuadBudgetExceeded {
                panels: edges.len() - 1,
                last_diff: diff,
            });
        }
        prev = cur;
    }
}

/// Plain Gauss-Legendre reference for non-oscillatory integrands (test oracle).
pub fn plain_gauss(fun: &dyn Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
    let (nodes, wts) = gauss_legendre_20();
    let h = (b - a) / panels as f64;
    let mut acc = KahanC::new();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (t, w) in nodes.iter().zip(wts.iter()) {
            acc.add(fun(mid + 0.5 * h * t) * (w * 0.5 * h));
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::bump;

    fn bump_spec(freq: f64, phase: PhaseFn) -> OscIntegral {
        let w = bump(1.0, 2.0).unwrap();
        OscIntegral::with_weight(&w, phase, freq)
    }

    #[test]
    fn non_oscillatory_matches_plain_gauss() {
        let w = bump(1.0, 2.0).unwrap();
        let spec = bump_spec(0.0, Arc::new(|_| 0.0));
        let q = osc_integrate(&spec, 1e-13).unwrap();
        let wc = w.clone();
        let oracle = plain_gauss(&move |x| Complex64::new(wc.eval(x), 0.0), 1.0, 2.0, 128);
        assert!((q.value - oracle).norm() < 1e-12);
        assert!((q.value.re - w.integral()).abs() < 1e-12);
    }

    #[test]
    fn oscillation_shrinks_modulus_and_refines_consistently() {
        let spec0 = bump_spec(0.0, Arc::new(|_| 0.0));
        let base = osc_integrate(&spec0, 1e-12).unwrap().value.norm();
        let spec = bump_spec(50.0, Arc::new(|x| 50.0 * x));
        let v1 = osc_integrate(&spec, 1e-8).unwrap();
        let v2 = osc_integrate(&spec, 1e-9).unwrap();
        assert!(v1.value.norm() <= base);
        assert!((v1.value - v2.value).norm() < 1e-8);
    }

    #[test]
    fn self_consistency_on_corpus() {
        // |I(tol) - I(tol/10)| < 2 tol across a small corpus.
        let corpus: Vec<OscIntegral> = vec![
            bump_spec(0.0, Arc::new(|_| 0.0)),
            bump_spec(10.0, Arc::new(|x| 10.0 * x)),
            bump_spec(200.0, Arc::new(|x| 100.0 * x * x)),
            bump_spec(80.0, Arc::new(|x: f64| 40.0 * x.ln())),
        ];
        for spec in &corpus {
            let tol = 1e-8;
            let a = osc_integrate(spec, tol).unwrap().value;
            let b = osc_integrate(spec, tol / 10.0).unwrap().value;
            assert!((a - b).norm() < 2.0 * tol);
        }
    }

    #[test]
    fn budget_exceeded_is_an_error() {
        let spec = bump_spec(1e6, Arc::new(|x| 1e6 * x));
        match osc_integrate_capped(&spec, 1e-14, 64) {
            Err(Error::QuadBudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
