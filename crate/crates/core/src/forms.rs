//! Fourier coefficients of the admissible forms: the weight-12 holomorphic
//! form (Ramanujan tau) in exact integer arithmetic, and the divisor function
//! for the Eisenstein case, plus unit-normalised eigenvalues and the
//! Ramanujan-on-average check.

use crate::arith::divisor_sieve;
use crate::error::{Error, Result};
use crate::kahan::Kahan;
use std::io::{Read, Write};
use std::path::Path;

/// Default cap on exact tau-table construction.
pub const DEFAULT_TAU_CAP: usize = 1_000_000;
/// Hard cap: beyond this i128 would overflow (tau(n) ~ n^{11/2+eps}).
const HARD_TAU_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Form {
    HolomorphicDelta,
    Eisenstein,
}

/// tau(1..=n_max) in exact i128 arithmetic, default cap.
pub fn tau_table(n_max: usize) -> Result<Vec<i128>> {
    tau_table_with_cap(n_max, DEFAULT_TAU_CAP)
}

/// Exact tau table with an explicit resource cap.
///
/// Uses the cube identity prod (1-q^m)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}:
/// the weight-12 expansion is q times the 8th power of that sparse series,
/// computed by eight successive sparse multiplications. This produces exactly
/// the same integers as expanding q prod (1-q^m)^24 term by term.
pub fn tau_table_with_cap(n_max: usize, cap: usize) -> Result<Vec<i128>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("tau_table needs n_max >= 1".into()));
    }
    if n_max > cap.min(HARD_TAU_CAP) {
        return Err(Error::TauCapExceeded {
            requested: n_max,
            cap: cap.min(HARD_TAU_CAP),
        });
    }
    let order = n_max - 1; // coefficients of q^0 .. q^{n_max-1} in (eta-cube)^8

    // Sparse seed: index k(k+1)/2, coefficient (-1)^k (2k+1).
    let mut seed: Vec<(usize, i128)> = Vec::new();
    let mut k = 0usize;
    loop {
        let idx = k * (k + 1) / 2;
        if idx > order {
            break;
        }
        let c = (2 * k + 1) as i128;
        seed.push((idx, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }

    // First four powers stay within i64 (eta-cube^4 has weight-6 growth,
    // |coeff| <~ n^{5/2+eps} < 2^63 for n <= 2e6); the rest needs i128.
    let mut acc64 = vec![0i64; order + 1];
    acc64[0] = 1;
    let mut scratch64 = vec![0i64; order + 1];
    for _ in 0..4 {
        scratch64.iter_mut().for_each(|v| *v = 0);
        for &(idx, c) in &seed {
            let c = c as i64;
            for j in 0..=order - idx {
                let a = acc64[j];
                if a != 0 {
                    scratch64[idx + j] += c * a;
                }
            }
        }
        std::mem::swap(&mut acc64, &mut scratch64);
    }

    let mut acc: Vec<i128> = acc64.iter().map(|&v| v as i128).collect();
    let mut scratch = vec![0i128; order + 1];
    for _ in 0..4 {
        scratch.iter_mut().for_each(|v| *v = 0);
        for &(idx, c) in &seed {
            for j in 0..=order - idx {
                let a = acc[j];
                if a != 0 {
                    scratch[idx + j] += c * a;
                }
            }
        }
        std::mem::swap(&mut acc, &mut scratch);
    }

    // tau(n) = coefficient of q^{n-1} in the 8th power.
    Ok(acc)
}

/// Coefficient container for one fixed form.
#[derive(Clone, Debug)]
pub struct FormCoefficients {
    form: Form,
    weight: u32,
    /// Exact integers (tau for the holomorphic form, d(n) for Eisenstein).
    raw: Vec<i128>,
    /// Unit-normalised eigenvalues: lambda(1) = 1.
    lambda: Vec<f64>,
}

impl FormCoefficients {
    /// The weight-12 holomorphic form: lambda(n) = tau(n) / n^{11/2}.
    pub fn delta(n_max: usize) -> Result<FormCoefficients> {
        Self::delta_with_cap(n_max, DEFAULT_TAU_CAP)
    }

    pub fn delta_with_cap(n_max: usize, cap: usize) -> Result<FormCoefficients> {
        let raw = tau_table_with_cap(n_max, cap)?;
        let lambda = raw
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let n = (i + 1) as f64;
                t as f64 / (n.powi(5) * n.sqrt())
            })
            .collect();
        Ok(FormCoefficients {
            form: Form::HolomorphicDelta,
            weight: 12,
            raw,
            lambda,
        })
    }

    /// Eisenstein E(z, 1/2): lambda(n) = d(n), so L(s) = zeta(s)^2.
    pub fn eisenstein(n_max: usize) -> Result<FormCoefficients> {
        if n_max < 1 {
            return Err(Error::InvalidInput("need n_max >= 1".into()));
        }
        let d = divisor_sieve(n_max);
        let raw: Vec<i128> = d[1..].iter().map(|&x| x as i128).collect();
        let lambda = raw.iter().map(|&x| x as f64).collect();
        Ok(FormCoefficients {
            form: Form::Eisenstein,
            weight: 0, // sentinel; unused for the Eisenstein case
            raw,
            lambda,
        })
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Weight k_f (12 for the holomorphic form).
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Exact integer coefficient at n (1-based).
    pub fn raw(&self, n: usize) -> Result<i128> {
        self.raw
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or(Error::TableTooShort {
                needed: n,
                have: self.raw.len(),
            })
    }

    /// Normalised eigenvalue lambda(n).
    pub fn lambda(&self, n: usize) -> Result<f64> {
        self.lambda
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or(Error::TableTooShort {
                needed: n,
                have: self.lambda.len(),
            })
    }

    /// Slice of all lambdas (1-based index i means n = i + 1... index 0 is n=1).
    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    /// (sum_{n <= x} lambda(n)^2) / x.
    pub fn ramanujan_average(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0) {
            return Err(Error::InvalidInput("ramanujan_average needs x >= 1".into()));
        }
        let m = x.floor() as usize;
        if m > self.lambda.len() {
            return Err(Error::TableTooShort {
                needed: m,
                have: self.lambda.len(),
            });
        }
        let mut acc = Kahan::new();
        for &l in &self.lambda[..m] {
            acc.add(l * l);
        }
        Ok(acc.value() / x)
    }

    /// Binary cache: magic "SWL1", form id u8, n_max u64 LE, then raw
    /// coefficients as i128 LE.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(b"SWL1")?;
        f.write_all(&[match self.form {
            Form::HolomorphicDelta => 0u8,
            Form::Eisenstein => 1u8,
        }])?;
        f.write_all(&(self.raw.len() as u64).to_le_bytes())?;
        for &c in &self.raw {
            f.write_all(&c.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<FormCoefficients> {
        let mut f = std::fs::File::open(path)?;
        let mut head = [0u8; 13];
        f.read_exact(&mut head)?;
        if &head[0..4] != b"SWL1" {
            return Err(Error::BadCache("bad magic".into()));
        }
        let form = match head[4] {
            0 => Form::HolomorphicDelta,
            1 => Form::Eisenstein,
            x => return Err(Error::BadCache(format!("unknown form id {x}"))),
        };
        let n_max = u64::from_le_bytes(head[5..13].try_into().unwrap()) as usize;
        let mut raw = Vec::with_capacity(n_max);
        let mut buf = [0u8; 16];
        for _ in 0..n_max {
            f.read_exact(&mut buf)?;
            raw.push(i128::from_le_bytes(buf));
        }
        let lambda = match form {
            Form::HolomorphicDelta => raw
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let n = (i + 1) as f64;
                    t as f64 / (n.powi(5) * n.sqrt())
                })
                .collect(),
            Form::Eisenstein => raw.iter().map(|&x| x as f64).collect(),
        };
        Ok(FormCoefficients {
            form,
            weight: if form == Form::HolomorphicDelta { 12 } else { 0 },
            raw,
            lambda,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gcd, primes_up_to};

    /// Direct power-series oracle: expand q prod_{m} (1-q^m)^24 by 24 passes
    /// of the literal sparse factor (1 - q^m). Slow; used only to pin small
    /// tau values independently of the production path.
    fn tau_oracle(n_max: usize) -> Vec<i128> {
        let order = n_max - 1;
        let mut acc = vec![0i128; order + 1];
        acc[0] = 1;
        for m in 1..=order.max(1) {
            for _ in 0..24 {
                // multiply by (1 - q^m)
                for j in (m..=order).rev() {
                    acc[j] -= acc[j - m];
                }
            }
        }
        acc
    }

    #[test]
    fn first_values_match_oracle() {
        let t = tau_table(12).unwrap();
        let o = tau_oracle(12);
        assert_eq!(t, o);
        assert_eq!(t[0], 1); // tau(1)
        assert_eq!(t[1], -24); // tau(2)
        assert_eq!(t[2], 252); // tau(3)
        assert_eq!(t[3], -1472);
        assert_eq!(t[4], 4830);
        assert_eq!(t[5], -6048);
        assert_eq!(t[6], -16744); // tau(7)
        assert_eq!(t[10], 534612); // tau(11)
        assert_eq!(t[5], t[1] * t[2]); // tau(6) = tau(2) tau(3)
    }

    #[test]
    fn oracle_agreement_to_200() {
        assert_eq!(tau_table(200).unwrap(), tau_oracle(200));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            tau_table_with_cap(1001, 1000),
            Err(Error::TauCapExceeded { .. })
        ));
        assert!(tau_table(1).unwrap() == vec![1]);
    }

    #[test]
    fn multiplicativity_exact_to_1000() {
        let f = FormCoefficients::delta(1000).unwrap();
        for m in 1..=1000usize {
            for n in 1..=1000 / m {
                if gcd(m as u64, n as u64) == 1 {
                    assert_eq!(
                        f.raw(m * n).unwrap(),
                        f.raw(m).unwrap() * f.raw(n).unwrap(),
                        "tau({m}*{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn hecke_recursion_both_forms() {
        let delta = FormCoefficients::delta(1_000_000).unwrap();
        let eis = FormCoefficients::eisenstein(1_000_000).unwrap();
        for f in [&delta, &eis] {
            for &p in &primes_up_to(100) {
                let p = p as usize;
                for k in 1..=5usize {
                    // lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1}),
                    // checked wherever p^{k+1} fits in the table.
                    let Some(pk1) = p.checked_pow(k as u32 + 1) else {
                        break;
                    };
                    if pk1 > f.len() {
                        break;
                    }
                    let l = |n: usize| f.lambda(n).unwrap();
                    let resid =
                        l(pk1) - l(p) * l(p.pow(k as u32)) + l(p.pow(k as u32 - 1));
                    let scale = l(pk1).abs().max(1.0);
                    assert!(resid.abs() <= 1e-12 * scale, "p={p} k={k}: {resid}");
                }
            }
        }
    }

    #[test]
    fn deligne_bound_spot_check() {
        let f = FormCoefficients::delta(10_000).unwrap();
        let d = divisor_sieve(10_000);
        for n in 1..=10_000usize {
            assert!(
                f.lambda(n).unwrap().abs() <= d[n] as f64 + 1e-9,
                "Deligne at {n}"
            );
        }
    }

    #[test]
    fn eisenstein_divisors() {
        let f = FormCoefficients::eisenstein(100).unwrap();
        assert_eq!(f.lambda(12).unwrap(), 6.0);
        assert_eq!(f.lambda(1).unwrap(), 1.0);
    }

    #[test]
    fn ramanujan_average_bounded_and_trending() {
        let f = FormCoefficients::delta(10_000).unwrap();
        assert_eq!(f.ramanujan_average(1.0).unwrap(), 1.0);
        let a2 = f.ramanujan_average(1e2).unwrap();
        let a3 = f.ramanujan_average(1e3).unwrap();
        let a4 = f.ramanujan_average(1e4).unwrap();
        for a in [a2, a3, a4] {
            assert!(a > 0.0 && a < 3.0, "average out of range: {a}");
        }

        // Eisenstein: compare against the (log x)^3 / pi^2 growth shape.
        let e = FormCoefficients::eisenstein(1000).unwrap();
        let avg = e.ramanujan_average(1e3).unwrap();
        let shape = (1e3f64).ln().powi(3) / std::f64::consts::PI.powi(2);
        assert!(avg / shape > 0.3 && avg / shape < 3.0, "{avg} vs {shape}");
    }

    #[test]
    fn cache_round_trip() {
        let f = FormCoefficients::delta(64).unwrap();
        let dir = std::env::temp_dir().join("swl_cache_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("delta64.swl");
        f.write_cache(&path).unwrap();
        let g = FormCoefficients::read_cache(&path).unwrap();
        assert_eq!(g.form(), Form::HolomorphicDelta);
        assert_eq!(g.len(), 64);
        for n in 1..=64 {
            assert_eq!(f.raw(n).unwrap(), g.raw(n).unwrap());
        }
        std::fs::remove_file(&path).ok();
    }
}
