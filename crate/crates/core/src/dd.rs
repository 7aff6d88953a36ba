//! Double-double (~31 significant digits) arithmetic.
//!
//! Used only inside reference oracles (Bessel power series, high-precision
//! exponential sums) where the production f64 path needs an independent
//! higher-precision cross-check. Not tuned for speed.

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    // f64::mul_add is correctly rounded, which makes this exact.
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// 2*pi to double-double precision.
    pub const TWO_PI: Dd = Dd {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };
    /// ln 2 to double-double precision.
    pub const LN_2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_int(n: i64) -> Dd {
        // |n| < 2^53 is exact; larger split into two parts.
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let x0 = self.hi.sqrt();
        // One Newton step in double-double: x = (x0 + a/x0)/2.
        let x = Dd::from_f64(x0);
        let t = self.div(x).add(x);
        Dd {
            hi: t.hi * 0.5,
            lo: t.lo * 0.5,
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    /// Natural log of a positive integer: ln(n) = e2*ln2 + ln(m), m in [1,2),
    /// with ln(m) = 2 atanh((m-1)/(m+1)) summed to dd precision.
    pub fn ln_u64(n: u64) -> Dd {
        assert!(n >= 1);
        if n == 1 {
            return Dd::ZERO;
        }
        let e2 = 63 - n.leading_zeros() as i64; // floor(log2 n)
        let m = Dd::from_int(n as i64).div(Dd::from_f64((1u64 << e2) as f64));
        let z = m.sub(Dd::ONE).div(m.add(Dd::ONE));
        let z2 = z.mul(z);
        // atanh series: z + z^3/3 + z^5/5 + ...; |z| <= 1/3 so ~35 terms.
        let mut term = z;
        let mut acc = Dd::ZERO;
        for k in 0..40 {
            let denom = Dd::from_int(2 * k + 1);
            acc = acc.add(term.div(denom));
            term = term.mul(z2);
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        let ln_m = acc.add(acc);
        Dd::LN_2.mul(Dd::from_int(e2)).add(ln_m)
    }

    /// Reduce modulo 2*pi into (-pi, pi]; result accurate to dd precision
    /// provided |self| < ~1e15.
    pub fn rem_two_pi(self) -> Dd {
        let k = (self.to_f64() / Dd::TWO_PI.to_f64()).round();
        let mut r = self.sub(Dd::TWO_PI.mul(Dd::from_f64(k)));
        while r.to_f64() > std::f64::consts::PI {
            r = r.sub(Dd::TWO_PI);
        }
        while r.to_f64() <= -std::f64::consts::PI {
            r = r.add(Dd::TWO_PI);
        }
        r
    }

    /// sin and cos of a dd angle that has already been reduced to (-pi, pi].
    /// f64 accuracy on the reduced argument is all the oracles need.
    pub fn sin_cos_reduced(self) -> (f64, f64) {
        let s = self.hi.sin();
        let c = self.hi.cos();
        // First-order correction from the low word.
        (s + self.lo * c, c - self.lo * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_f64() {
        for n in [2u64, 3, 10, 1000, 999_983] {
            let d = Dd::ln_u64(n).to_f64();
            assert!((d - (n as f64).ln()).abs() < 1e-14 * d.abs().max(1.0));
        }
    }

    #[test]
    fn ln_is_consistent_with_products() {
        // ln(6) = ln(2) + ln(3) to dd accuracy, checked through the low words.
        let l6 = Dd::ln_u64(6);
        let l2 = Dd::ln_u64(2);
        let l3 = Dd::ln_u64(3);
        let diff = l6.sub(l2.add(l3));
        assert!(diff.to_f64().abs() < 1e-30);
    }

    #[test]
    fn division_and_sqrt() {
        let a = Dd::from_int(2);
        let s = a.sqrt();
        let back = s.mul(s).sub(a);
        assert!(back.to_f64().abs() < 1e-30);
        let q = Dd::ONE.div(Dd::from_int(3));
        let r = q.mul(Dd::from_int(3)).sub(Dd::ONE);
        assert!(r.to_f64().abs() < 1e-30);
    }

    #[test]
    fn phase_reduction() {
        // t * ln n reduced mod 2 pi, compared against direct f64 for a small case.
        let t = 1000.0;
        let phase = Dd::ln_u64(17).mul(Dd::from_f64(t)).rem_two_pi();
        let direct = (t * (17f64).ln()).rem_euclid(2.0 * std::f64::consts::PI);
        let mut d = phase.to_f64().rem_euclid(2.0 * std::f64::consts::PI) - direct;
        if d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        assert!(d.abs() < 1e-10);
    }
}
