//! Compensated and deterministic summation.

use num_complex::Complex64;

/// Kahan-Babuska (Neumaier) compensated accumulator for f64.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Component-wise compensated accumulator for complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanC {
    re: Kahan,
    im: Kahan,
}

impl KahanC {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Deterministic pairwise reduction. The tree shape depends only on the
/// length, so the result is bit-identical regardless of thread count as long
/// as the input order is fixed.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_cancellation() {
        let mut k = Kahan::new();
        let mut naive = 0.0f64;
        for i in 0..100_000 {
            let x = if i % 2 == 0 { 1.0 + 1e-14 } else { -1.0 };
            k.add(x);
            naive += x;
        }
        let expect = 50_000.0 * 1e-14;
        assert!((k.value() - expect).abs() < 1e-12);
        // The naive sum is allowed to be fine on some platforms, the
        // compensated one must be.
        let _ = naive;
    }

    #[test]
    fn pairwise_matches_sequential() {
        let xs: Vec<Complex64> = (0..1000)
            .map(|i| Complex64::new(1.0 / (i as f64 + 1.0), (i as f64).sin()))
            .collect();
        let mut k = KahanC::new();
        for &x in &xs {
            k.add(x);
        }
        let p = pairwise_sum(&xs);
        assert!((p - k.value()).norm() < 1e-10);
    }
}
