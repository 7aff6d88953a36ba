//! Small exact-integer helpers: gcd, modular inverse, primality, sieves.

/// Greatest common divisor of two non-negative integers.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Least positive inverse of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // Sufficient witness set for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `x`.
pub fn next_prime(x: f64) -> u64 {
    let mut n = if x < 1.0 { 2 } else { x.floor() as u64 + 1 };
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// Divisor-count table d(1..=n_max) by the standard sieve.
pub fn divisor_sieve(n_max: usize) -> Vec<u32> {
    let mut d = vec![0u32; n_max + 1];
    for i in 1..=n_max {
        let mut j = i;
        while j <= n_max {
            d[j] += 1;
            j += i;
        }
    }
    d
}

/// Primes up to `n` inclusive (Eratosthenes).
pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| if p { Some(i as u64) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        for p in [7u64, 53, 101, 1009] {
            for a in 1..p.min(60) {
                let inv = mod_inverse(a, p).unwrap();
                assert_eq!(a * inv % p, 1);
                assert!(inv >= 1 && inv < p);
            }
        }
    }

    #[test]
    fn primality_and_next_prime() {
        assert!(is_prime(2) && is_prime(97) && is_prime(2_147_483_647));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(561));
        assert_eq!(next_prime(10.0), 11);
        assert_eq!(next_prime(37.0), 41);
        assert_eq!(next_prime(36.9), 37);
    }

    #[test]
    fn divisor_counts() {
        let d = divisor_sieve(24);
        assert_eq!(d[1], 1);
        assert_eq!(d[12], 6);
        assert_eq!(d[24], 8);
    }
}
