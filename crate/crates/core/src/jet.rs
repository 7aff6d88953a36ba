//! Truncated Taylor series ("jets") for exact derivatives of the smooth
//! weight families. A jet holds the coefficients f(x0), f'(x0), ...,
//! f^(n)(x0)/n! and propagates through arithmetic, exp and reciprocal, which
//! is all the bump/plateau constructions need.

pub const JET_LEN: usize = 11; // value + 10 derivatives

#[derive(Clone, Copy, Debug)]
pub struct Jet {
    /// Taylor coefficients c_k = f^(k)(x0) / k!.
    pub c: [f64; JET_LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function x at base point x0.
    pub fn variable(x0: f64) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = x0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            c[k] = self.c[k] + o.c[k];
        }
        Jet { c }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            c[k] = self.c[k] - o.c[k];
        }
        Jet { c }
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut c = self.c;
        for v in &mut c {
            *v *= s;
        }
        Jet { c }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.c[j] * o.c[k - j];
            }
            c[k] = acc;
        }
        Jet { c }
    }

    /// 1/self; requires c[0] != 0.
    pub fn recip(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = 1.0 / self.c[0];
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.c[j] * c[k - j];
            }
            c[k] = -acc / self.c[0];
        }
        Jet { c }
    }

    /// exp(self), by the standard recurrence f_k = (1/k) sum j g_j f_{k-j}.
    pub fn exp(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = self.c[0].exp();
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (j as f64) * self.c[j] * c[k - j];
            }
            c[k] = acc / k as f64;
        }
        Jet { c }
    }

    /// k-th derivative value (not divided by k!).
    pub fn deriv(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }
}
