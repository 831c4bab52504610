//! Dense univariate polynomials over Q, coefficients in ascending order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(a: BigRational) -> Self {
        QPoly::from_coeffs(vec![a])
    }

    /// `a * x^k`
    pub fn monomial(a: BigRational, k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = a;
        QPoly::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::from_coeffs(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.c.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Number of trailing zero coefficients (the power of x dividing self).
    pub fn low_zeros(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Self {
        QPoly { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.c.iter().cloned());
        QPoly { c }
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        QPoly::from_coeffs(c)
    }

    pub fn neg(&self) -> QPoly {
        QPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &BigRational) -> QPoly {
        if a.is_zero() {
            return QPoly::zero();
        }
        QPoly { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(c)
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let lc_inv = d.c[dd].recip();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &lc_inv;
            if t.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    r[k + j] -= &t * b;
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        (QPoly::from_coeffs(q), QPoly::from_coeffs(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Exact quotient; debug-asserts zero remainder.
    pub fn div_exact(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            None => QPoly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        if self.is_one() || o.is_one() {
            return QPoly::one();
        }
        let mut a = self.primitive();
        let mut b = o.primitive();
        while !b.is_zero() {
            let r = a.rem(&b).primitive();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*o = g, g monic.
    pub fn xgcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = l.recip();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
        }
    }

    /// Scale to integer coefficients with unit content, keeping the sign of the leading term.
    /// Only used to keep intermediate gcd remainders small.
    fn primitive(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for a in &self.c {
            den = num_integer::Integer::lcm(&den, a.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * &den).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = num_integer::Integer::gcd(&g, x);
        }
        if g.is_zero() {
            return QPoly::zero();
        }
        let g = g.abs();
        QPoly { c: ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect() }
    }

    /// Evaluate at x^k substitution: returns p(x^k).
    pub fn compose_power(&self, k: usize) -> QPoly {
        if k == 1 || self.c.len() <= 1 {
            return self.clone();
        }
        let mut c = vec![BigRational::zero(); (self.c.len() - 1) * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        QPoly::from_coeffs(c)
    }
}

/// The r-th cyclotomic polynomial, by dividing x^r - 1 by Phi_d for proper divisors d.
pub fn cyclotomic(r: u32) -> QPoly {
    assert!(r >= 1);
    let mut num = QPoly::monomial(BigRational::one(), r as usize).sub(&QPoly::one());
    for d in 1..r {
        if r.is_multiple_of(d) {
            num = num.div_exact(&cyclotomic(d));
        }
    }
    num
}
