//! Dirichlet approximation of rbar/p, dyadic families F(q-block, b-block),
//! and brute-force enumeration oracles for the counting lemmas.
//!
//! Everything here is exact integer / rational arithmetic; the only floats
//! are the reported bounds.

use crate::arith::{gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::summation::AnalyticParams;

pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// One Dirichlet approximation rbar/p = a/q + beta with beta = u/(pq).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiophTriple {
    pub r: u64,
    /// Least positive inverse of r mod p.
    pub rbar: u64,
    pub a: u64,
    pub q: u64,
    /// u = rbar q - a p, so beta = u/(pq) exactly.
    pub u: i64,
}

impl DiophTriple {
    /// beta as an exact fraction (numerator, denominator > 0).
    pub fn beta(&self, p: u64) -> (i64, u64) {
        (self.u, p * self.q)
    }

    pub fn beta_f64(&self, p: u64) -> f64 {
        self.u as f64 / (p as f64 * self.q as f64)
    }
}

/// Dirichlet approximation: the smallest q <= Q with gcd(a, q) = 1 and
/// |rbar/p - a/q| <= 1/(qQ), a the nearest integer to q rbar / p.
///
/// Requires gcd(r, p) = 1 and K < N (so Q < p and beta != 0).
pub fn dirichlet_approx(r: u64, params: &AnalyticParams) -> Result<DiophTriple> {
    if params.k_size >= params.n_size {
        return Err(Error::Inadmissible(
            "Dirichlet approximation needs K < N".into(),
        ));
    }
    let p = params.p;
    if gcd(r, p) != 1 {
        return Err(Error::NotCoprime {
            a: r as i64,
            c: p as i64,
        });
    }
    let rbar = mod_inverse(r % p, p).expect("p prime, r coprime");
    // |u| <= p/Q = sqrt(N/K); exact test via u^2 K <= N in f64 on integers.
    let u_cap2 = params.n_size / params.k_size;
    let q_max = params.q_dirichlet().floor() as u64;
    for q in 1..=q_max.max(1) {
        let prod = rbar as i128 * q as i128;
        let a = ((prod as f64 / p as f64).round()) as i128;
        let a = a.clamp(0, q as i128);
        let u = (prod - a * p as i128) as i64;
        if (u as f64) * (u as f64) <= u_cap2 && gcd(a as u64, q) == 1 {
            return Ok(DiophTriple {
                r,
                rbar,
                a: a as u64,
                q,
                u,
            });
        }
    }
    // Dirichlet's theorem guarantees a hit; reaching here means Q < 1.
    Err(Error::Inadmissible(format!(
        "no approximation with q <= {q_max} (Q = {})",
        params.q_dirichlet()
    )))
}

/// Brute-force best-approximation oracle: scan all q <= Q, return the pair
/// minimising |beta| (exact rational comparison). Test reference.
pub fn best_approx_oracle(r: u64, params: &AnalyticParams) -> Option<(u64, u64, i64)> {
    let p = params.p;
    let rbar = mod_inverse(r % p, p)?;
    let q_max = params.q_dirichlet().floor() as u64;
    let mut best: Option<(u64, u64, i64)> = None;
    for q in 1..=q_max.max(1) {
        let prod = rbar as i128 * q as i128;
        let a = ((prod as f64 / p as f64).round() as i128).clamp(0, q as i128);
        let u = (prod - a * p as i128) as i64;
        if gcd(a as u64, q) != 1 {
            continue;
        }
        let better = match best {
            None => true,
            // |u|/q < |u'|/q' as exact integers.
            Some((_, bq, bu)) => {
                (u.unsigned_abs() as u128) * (bq as u128) < (bu.unsigned_abs() as u128) * (q as u128)
            }
        };
        if better {
            best = Some((a as u64, q, u));
        }
    }
    best
}

/// Dyadic block labels: q in [2^qe, 2^{qe+1}) and |beta| in [2^be, 2^{be+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct BlockLabel {
    pub q_exp: u32,
    pub b_exp: i32,
}

impl BlockLabel {
    pub fn q_lo(&self) -> f64 {
        2f64.powi(self.q_exp as i32)
    }

    pub fn b_lo(&self) -> f64 {
        2f64.powi(self.b_exp)
    }
}

fn beta_block(u: i64, p: u64, q: u64) -> i32 {
    // floor(log2(|u|/(pq))) by exact doubling comparisons.
    let num = u.unsigned_abs() as u128;
    let den = p as u128 * q as u128;
    debug_assert!(num > 0);
    let mut e = 0i32;
    let mut n = num;
    // Scale until den <= n < 2 den.
    while n < den {
        n <<= 1;
        e -= 1;
    }
    while n >= 2 * den {
        n >>= 1;
        e += 1;
    }
    e
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FamilyCount {
    pub label: BlockLabel,
    pub size: u64,
    /// pt q-block / (N Q).
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Census {
    pub families: Vec<FamilyCount>,
    pub total_admissible: u64,
    pub max_ratio: f64,
}

/// Partition the admissible r in [pt/N, 2pt/N), gcd(r,p)=1, into dyadic
/// families by their Dirichlet data; count and compare to pt q/(N Q).
pub fn family_census(params: &AnalyticParams) -> Result<Census> {
    let r_lo = (params.p as f64 * params.t / params.n_size).ceil() as u64;
    let r_hi = (2.0 * params.p as f64 * params.t / params.n_size).floor() as u64;
    let mut map: std::collections::BTreeMap<BlockLabel, u64> = std::collections::BTreeMap::new();
    let mut total = 0u64;
    for r in r_lo..=r_hi {
        if gcd(r, params.p) != 1 {
            continue;
        }
        total += 1;
        let t = dirichlet_approx(r, params)?;
        let label = BlockLabel {
            q_exp: 63 - t.q.leading_zeros(),
            b_exp: beta_block(t.u, params.p, t.q),
        };
        *map.entry(label).or_insert(0) += 1;
    }
    let pt_over_nq = params.p as f64 * params.t / (params.n_size * params.q_dirichlet());
    let mut families = Vec::new();
    let mut max_ratio = 0f64;
    for (label, size) in map {
        let bound = pt_over_nq * label.q_lo();
        let ratio = size as f64 / bound;
        max_ratio = max_ratio.max(ratio);
        families.push(FamilyCount {
            label,
            size,
            bound,
            ratio,
        });
    }
    Ok(Census {
        families,
        total_admissible: total,
        max_ratio,
    })
}

/// Free-variable ranges of one dyadic family: |u| in [p b q-block, 2 p b q-block),
/// q in [qb, 2 qb), r in [pt/N, 2pt/N) with r = ubar q mod p.
#[derive(Clone, Copy, Debug)]
pub struct FamilyRanges {
    pub u_lo: i64,
    pub u_hi: i64, // |u| in [u_lo, u_hi] inclusive, both signs, u != 0
    pub q_lo: u64,
    pub q_hi: u64, // [q_lo, q_hi] inclusive
    pub r_lo: u64,
    pub r_hi: u64,
}

pub fn family_ranges(params: &AnalyticParams, block: BlockLabel) -> FamilyRanges {
    let qb = block.q_lo();
    let bb = block.b_lo();
    let u_scale = params.p as f64 * bb * qb;
    let u_lo = u_scale.ceil().max(1.0) as i64;
    let u_hi = (2.0 * u_scale).ceil().max(2.0) as i64 - 1;
    let r_lo = (params.p as f64 * params.t / params.n_size).ceil() as u64;
    let r_hi = (2.0 * params.p as f64 * params.t / params.n_size).ceil() as u64 - 1;
    FamilyRanges {
        u_lo,
        u_hi: u_hi.max(u_lo),
        q_lo: qb as u64,
        q_hi: (2.0 * qb) as u64 - 1,
        r_lo,
        r_hi: r_hi.max(r_lo),
    }
}

/// Enumerate (u, q, r) with the congruence r = ubar q (mod p); visitor
/// receives each triple. Returns the number visited.
fn for_each_triple(
    params: &AnalyticParams,
    rg: &FamilyRanges,
    cap: u64,
    mut visit: impl FnMut(i64, u64, u64),
) -> Result<u64> {
    let p = params.p;
    let mut visited = 0u64;
    for au in rg.u_lo..=rg.u_hi {
        for &u in &[au, -au] {
            let um = u.rem_euclid(p as i64) as u64;
            if um == 0 {
                continue;
            }
            let Some(ubar) = mod_inverse(um, p) else {
                continue;
            };
            for q in rg.q_lo..=rg.q_hi {
                // r = ubar q mod p, stepped through [r_lo, r_hi].
                let r0 = (ubar as u128 * q as u128 % p as u128) as u64;
                let mut r = if r0 >= rg.r_lo % p {
                    rg.r_lo - rg.r_lo % p + r0
                } else {
                    rg.r_lo - rg.r_lo % p + r0 + p
                };
                if r < rg.r_lo {
                    r += p;
                }
                while r <= rg.r_hi {
                    if gcd(r, p) == 1 {
                        visited += 1;
                        if visited > cap {
                            return Err(Error::EnumBudgetExceeded { tuples: visited, cap });
                        }
                        visit(u, q, r);
                    }
                    r += p;
                }
            }
        }
    }
    Ok(visited)
}

fn collect_triples(
    params: &AnalyticParams,
    rg: &FamilyRanges,
    cap: u64,
) -> Result<Vec<(i64, u64, u64)>> {
    let mut v = Vec::new();
    for_each_triple(params, rg, cap, |u, q, r| v.push((u, q, r)))?;
    Ok(v)
}

/// Count tuples (u1,u2,q1,q2,r1,r2) in the family with
/// |u2^2 r2 - u1^2 r1| in [theta, 2 theta); bound from the first counting
/// lemma: q^2 t/N + theta t/(p b N) + theta q^2 t/(p N).
pub fn count_a(
    params: &AnalyticParams,
    block: BlockLabel,
    theta: f64,
) -> Result<(u64, f64)> {
    let rg = family_ranges(params, block);
    let triples = collect_triples(params, &rg, DEFAULT_ENUM_CAP)?;
    let n_pairs = (triples.len() as u64).pow(2);
    if n_pairs > DEFAULT_ENUM_CAP {
        return Err(Error::EnumBudgetExceeded {
            tuples: n_pairs,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let lo = theta as i128;
    let hi = (2.0 * theta) as i128;
    let mut count = 0u64;
    for &(u1, q1, r1) in &triples {
        let m1 = (u1 as i128) * (u1 as i128) * r1 as i128;
        let _ = q1;
        for &(u2, _q2, r2) in &triples {
            let m = (u2 as i128) * (u2 as i128) * r2 as i128 - m1;
            let am = m.unsigned_abs() as i128;
            if am >= lo && am < hi {
                count += 1;
            }
        }
    }
    let (qb, bb) = (block.q_lo(), block.b_lo());
    let tn = params.t / params.n_size;
    let bound = qb * qb * tn
        + theta * tn / (params.p as f64 * bb)
        + theta * qb * qb * tn / params.p as f64;
    Ok((count, bound))
}

/// Count tuples with the equality u2^2 r2 - u1^2 r1 = u2 q2 - u1 q1 and
/// |a u2 q2 - b u1 q1| in [theta, 2 theta); bound pt/N + theta t/(p b N).
pub fn count_b(
    params: &AnalyticParams,
    block: BlockLabel,
    a: i64,
    b: i64,
    theta: f64,
) -> Result<(u64, f64)> {
    let rg = family_ranges(params, block);
    let triples = collect_triples(params, &rg, DEFAULT_ENUM_CAP)?;
    let n_pairs = (triples.len() as u64).pow(2);
    if n_pairs > DEFAULT_ENUM_CAP {
        return Err(Error::EnumBudgetExceeded {
            tuples: n_pairs,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let lo = theta as i128;
    let hi = (2.0 * theta) as i128;
    let mut count = 0u64;
    for &(u1, q1, r1) in &triples {
        let m1 = (u1 as i128) * (u1 as i128) * r1 as i128;
        let s1 = u1 as i128 * q1 as i128;
        for &(u2, q2, r2) in &triples {
            let m2 = (u2 as i128) * (u2 as i128) * r2 as i128;
            let s2 = u2 as i128 * q2 as i128;
            if m2 - m1 != s2 - s1 {
                continue;
            }
            let v = (a as i128 * s2 - b as i128 * s1).unsigned_abs() as i128;
            if v >= lo && v < hi {
                count += 1;
            }
        }
    }
    let bb = block.b_lo();
    let bound = params.p as f64 * params.t / params.n_size
        + theta * params.t / (params.p as f64 * bb * params.n_size);
    Ok((count, bound))
}

/// Mixed discrete-continuous count: tuples passing the equality filter,
/// each weighted by the xi_1-measure of
/// |m (u2 q2 + u1 q1) + h (xi_1 - xi_2 q1/q2)| <= theta, xi_1 in [-1, 1],
/// at fixed xi_2. Bound pt/N + theta t/(p^2 b^2 q^2 N).
pub fn count_c(
    params: &AnalyticParams,
    block: BlockLabel,
    h_scale: f64,
    xi2: f64,
    theta: f64,
) -> Result<(f64, f64)> {
    if !(h_scale > 0.0) {
        return Err(Error::InvalidInput("count_c needs h_scale > 0".into()));
    }
    let rg = family_ranges(params, block);
    let triples = collect_triples(params, &rg, DEFAULT_ENUM_CAP)?;
    let n_pairs = (triples.len() as u64).pow(2);
    if n_pairs > DEFAULT_ENUM_CAP {
        return Err(Error::EnumBudgetExceeded {
            tuples: n_pairs,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let mut measure = 0f64;
    for &(u1, q1, r1) in &triples {
        let m1 = (u1 as i128) * (u1 as i128) * r1 as i128;
        let s1 = u1 as i128 * q1 as i128;
        for &(u2, q2, r2) in &triples {
            let m2 = (u2 as i128) * (u2 as i128) * r2 as i128;
            let s2 = u2 as i128 * q2 as i128;
            let m = m2 - m1;
            if m != s2 - s1 {
                continue;
            }
            // Interval of xi_1 with |m (s1+s2) + h (xi1 - xi2 q1/q2)| <= theta.
            let base = m as f64 * (s1 + s2) as f64;
            let center = xi2 * q1 as f64 / q2 as f64 - base / h_scale;
            let half = theta / h_scale;
            let lo = (center - half).max(-1.0);
            let hi = (center + half).min(1.0);
            if hi > lo {
                measure += hi - lo;
            }
        }
    }
    let (qb, bb) = (block.q_lo(), block.b_lo());
    let p = params.p as f64;
    let bound = p * params.t / params.n_size
        + theta * params.t / (p * p * bb * bb * qb * qb * params.n_size);
    Ok((measure, bound))
}

/// Elementary rational-proximity count:
/// #{(a,b,c,d): a,b in [X,2X), c,d in [Y,2Y), |a/b - c/d| <= Z}
/// against log^2(XY) (XY + X^2 Y^2 Z).
pub fn count_rational_proximity(x: u64, y: u64, z: f64) -> Result<(u64, f64)> {
    let budget = (x as u128) * (x as u128) * (y as u128) * 4;
    if budget > DEFAULT_ENUM_CAP as u128 {
        return Err(Error::EnumBudgetExceeded {
            tuples: budget as u64,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let mut count = 0u64;
    // |a/b - c/d| <= Z  <=>  |ad - bc| <= Z b d.
    for b in x..2 * x {
        for d in y..2 * y {
            let zbd = z * b as f64 * d as f64;
            for a in x..2 * x {
                let ad = a as i128 * d as i128;
                // c in [ (ad - zbd)/b , (ad + zbd)/b ] intersect [Y, 2Y).
                let lo = (((ad as f64 - zbd) / b as f64).ceil()).max(y as f64) as i128;
                let hi = (((ad as f64 + zbd) / b as f64).floor()).min(2.0 * y as f64 - 1.0) as i128;
                if hi < lo {
                    continue;
                }
                // Exact boundary check to avoid float edge cases.
                for c in lo..=hi {
                    let diff = (ad - c * b as i128).unsigned_abs();
                    if diff as f64 <= zbd {
                        count += 1;
                    }
                }
            }
        }
    }
    let xf = x as f64;
    let yf = y as f64;
    let eps_factor = (xf * yf).ln().powi(2);
    let bound = eps_factor * (xf * yf + xf * xf * yf * yf * z);
    Ok((count, bound))
}
